use std::f64::consts::PI;

use serde::Serialize;

use super::{angle_at, hdist, midpoint, triangle_with_angles, GeodesicH2, Motion2, RealTriangle, ORIGIN};
use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::triangle::Word;

const VERTEX_TOL: f64 = 1e-9;

/// A convex polygon given by its vertices in cyclic order. Side `i` is
/// `[v_i, v_{i+1}]`.
#[derive(Debug, Clone, Serialize)]
pub struct HyperbolicPolygon {
    pub vertices: Vec<C64>,
}

impl HyperbolicPolygon {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn side(&self, i: usize) -> (C64, C64) {
        let n = self.len();
        (self.vertices[i % n], self.vertices[(i + 1) % n])
    }

    pub fn side_geodesic(&self, i: usize) -> GeodesicH2 {
        let (a, b) = self.side(i);
        GeodesicH2::through(a, b)
    }

    pub fn side_midpoint(&self, i: usize) -> C64 {
        let (a, b) = self.side(i);
        midpoint(a, b)
    }

    pub fn interior_angles(&self) -> Vec<f64> {
        let n = self.len();
        (0..n).map(|i| angle_at(self.vertices[i], self.vertices[(i + n - 1) % n], self.vertices[(i + 1) % n])).collect()
    }

    /// Area by Gauss–Bonnet.
    pub fn area(&self) -> f64 {
        (self.len() as f64 - 2.0) * PI - self.interior_angles().iter().sum::<f64>()
    }

    /// Index of the vertex at `z`, if any.
    pub fn find_vertex(&self, z: C64, tol: f64) -> Option<usize> {
        self.vertices.iter().position(|v| (v - z).norm() <= tol * (1.0 + v.norm()))
    }

    /// Whether `z` lies on the same side of every side line as the polygon's
    /// interior point `inside`, with margin `tol` in hyperbolic distance.
    pub fn contains(&self, z: C64, inside: C64, tol: f64) -> bool {
        (0..self.len()).all(|i| {
            let g = self.side_geodesic(i);
            let s = g.side_value(inside).signum();
            let n = g.normalizer();
            let w = n.apply(z);
            // Signed distance to the imaginary axis.
            let d = (w.re / w.im).asinh();
            let sign = g.side_value(z).signum();
            sign == s || d.abs() <= tol
        })
    }
}

/// One of the nine side pairings.
#[derive(Debug, Clone, Serialize)]
pub struct SidePairing {
    pub label: &'static str,
    pub formula: &'static str,
    pub word: Word,
    #[serde(skip)]
    pub motion: Motion2,
    /// Side mapped by the pairing.
    pub source: usize,
    /// Side it is mapped onto.
    pub target: usize,
}

/// An element of `D = <I1, I2>`, labeled `d_{2k} = (I2 I1)^k` and
/// `d_{2k+1} = (I2 I1)^k I2`.
#[derive(Debug, Clone, Serialize)]
pub struct DihedralElement {
    pub index: usize,
    pub word: Word,
    #[serde(skip)]
    pub motion: Motion2,
}

/// The regular 18-gon tiled by the 18 copies of the (3,3,9) triangle around
/// `O`, with the nine side pairings generating the surface group.
#[derive(Debug, Clone)]
pub struct Gon18 {
    pub triangle: RealTriangle,
    pub polygon: HyperbolicPolygon,
    pub pairings: Vec<SidePairing>,
    pub dihedral: Vec<DihedralElement>,
}

fn conj(a: &[u8], s: &[u8], b: &[u8]) -> Vec<u8> {
    [a, s, b].concat()
}

fn rep(w: &[u8], k: usize) -> Vec<u8> {
    w.repeat(k)
}

/// The nine pairing words as `(label, formula, letters)`.
pub fn pairing_words() -> Vec<(&'static str, &'static str, Vec<u8>)> {
    let s1 = [rep(&[2, 1], 2), vec![2, 3]].concat();
    let s4 = [rep(&[1, 2], 4), vec![3, 2, 1, 2]].concat();
    vec![
        ("I", "(I2I1)^2 I2I3", s1.clone()),
        ("II", "(I1I2)^2 s_I (I2I1)^2", conj(&rep(&[1, 2], 2), &s1, &rep(&[2, 1], 2))),
        ("III", "I2I1 s_I I1I2", conj(&[2, 1], &s1, &[1, 2])),
        ("IV", "(I1I2)^4 I3I2I1I2", s4.clone()),
        ("V", "(I1I2)^3 s_IV (I2I1)^3", conj(&rep(&[1, 2], 3), &s4, &rep(&[2, 1], 3))),
        ("VI", "(I2I1)^3 s_I (I1I2)^3", conj(&rep(&[2, 1], 3), &s1, &rep(&[1, 2], 3))),
        ("VII", "(I2I1)^4 s_I (I1I2)^4", conj(&rep(&[2, 1], 4), &s1, &rep(&[1, 2], 4))),
        ("VIII", "(I2I1)^3 s_IV (I1I2)^3", conj(&rep(&[2, 1], 3), &s4, &rep(&[1, 2], 3))),
        ("IX", "(I1I2)^3 s_I (I2I1)^3", conj(&rep(&[1, 2], 3), &s1, &rep(&[2, 1], 3))),
    ]
}

/// Finds the side that `m` carries onto another side, with the image landing
/// across that side from the polygon.
fn discover_incidence(poly: &HyperbolicPolygon, m: &Motion2) -> Option<(usize, usize)> {
    let n = poly.len();
    let mut found = None;
    for i in 0..n {
        let (a, b) = poly.side(i);
        let (Some(ia), Some(ib)) = (poly.find_vertex(m.apply(a), VERTEX_TOL), poly.find_vertex(m.apply(b), VERTEX_TOL))
        else {
            continue;
        };
        let j = if (ia + 1) % n == ib {
            ia
        } else if (ib + 1) % n == ia {
            ib
        } else {
            continue;
        };
        let g = poly.side_geodesic(j);
        if g.side_value(m.apply(ORIGIN)).signum() == g.side_value(ORIGIN).signum() {
            continue;
        }
        if found.is_some() {
            return None;
        }
        found = Some((i, j));
    }
    found
}

pub fn build_18gon() -> Result<Gon18> {
    let triangle = triangle_with_angles(3, 3, 9)?;
    let rot = triangle.evaluate(&[2, 1]);
    let [_, a1, a2] = triangle.vertices;
    let mut vertices = Vec::with_capacity(18);
    let mut power = Motion2::identity();
    for _ in 0..9 {
        vertices.push(power.apply(a1));
        vertices.push(power.apply(a2));
        power = rot.compose(&power);
    }
    let polygon = HyperbolicPolygon { vertices };

    let mut dihedral = Vec::with_capacity(18);
    for k in 0..9 {
        for extra in [&[][..], &[2][..]] {
            let letters = [rep(&[2, 1], k), extra.to_vec()].concat();
            let word = Word::reduce(letters.iter().copied())?;
            dihedral.push(DihedralElement { index: dihedral.len(), motion: triangle.evaluate(&letters), word });
        }
    }

    let mut pairings = Vec::with_capacity(9);
    for (label, formula, letters) in pairing_words() {
        let motion = triangle.evaluate(&letters);
        let word = Word::reduce(letters)?;
        let (source, target) =
            discover_incidence(&polygon, &motion).ok_or_else(|| Error::PairingMismatch { label: label.to_string() })?;
        pairings.push(SidePairing { label, formula, word, motion, source, target });
    }
    Ok(Gon18 { triangle, polygon, pairings, dihedral })
}

impl Gon18 {
    /// For a side `σ`, the pairing motion carrying `σ` onto its partner side,
    /// and that partner.
    pub fn exit_map(&self, side: usize) -> Option<(Motion2, usize)> {
        self.pairings.iter().find_map(|p| {
            if p.source == side {
                Some((p.motion, p.target))
            } else if p.target == side {
                Some((p.motion.inverse(), p.source))
            } else {
                None
            }
        })
    }

    pub fn pairing(&self, label: &str) -> Option<&SidePairing> {
        self.pairings.iter().find(|p| p.label == label)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PairingReport {
    /// `(label, source side, target side)`.
    pub incidence: Vec<(String, usize, usize)>,
    /// Vertex indices in each cycle.
    pub cycles: Vec<Vec<usize>>,
    pub angle_sums: Vec<f64>,
    pub area: f64,
    pub genus: f64,
}

impl PairingReport {
    pub fn genus_integer(&self) -> Option<u32> {
        let g = self.genus.round();
        ((self.genus - g).abs() <= 1e-8 && g >= 0.0).then_some(g as u32)
    }
}

/// Checks the pairings: each carries its source side onto its target with
/// matching endpoints, every side is paired exactly once, and no pairing
/// reverses orientation. Then collects vertex cycles and their angle sums.
pub fn verify_side_pairings(gon: &Gon18) -> Result<PairingReport> {
    let poly = &gon.polygon;
    let n = poly.len();
    let mut used = vec![false; n];
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        parent[x] = r;
        r
    }
    for p in &gon.pairings {
        let mismatch = || Error::PairingMismatch { label: p.label.to_string() };
        if p.motion.flip() || p.word.len() % 2 == 1 {
            return Err(mismatch());
        }
        if used[p.source] || used[p.target] || p.source == p.target {
            return Err(mismatch());
        }
        used[p.source] = true;
        used[p.target] = true;
        let (a, b) = poly.side(p.source);
        let (x, y) = poly.side(p.target);
        let (fa, fb) = (p.motion.apply(a), p.motion.apply(b));
        let direct = hdist(fa, x).max(hdist(fb, y));
        let swapped = hdist(fa, y).max(hdist(fb, x));
        if direct.min(swapped) > VERTEX_TOL {
            return Err(mismatch());
        }
        for v in [p.source, (p.source + 1) % n] {
            let image = poly.find_vertex(p.motion.apply(poly.vertices[v]), VERTEX_TOL).ok_or_else(mismatch)?;
            let (ra, rb) = (find(&mut parent, v), find(&mut parent, image));
            parent[ra] = rb;
        }
    }
    let angles = poly.interior_angles();
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    let mut roots: Vec<usize> = Vec::new();
    for v in 0..n {
        let r = find(&mut parent, v);
        match roots.iter().position(|&x| x == r) {
            Some(k) => cycles[k].push(v),
            None => {
                roots.push(r);
                cycles.push(vec![v]);
            }
        }
    }
    let angle_sums = cycles.iter().map(|c| c.iter().map(|&v| angles[v]).sum()).collect();
    let area = poly.area();
    Ok(PairingReport {
        incidence: gon.pairings.iter().map(|p| (p.label.to_string(), p.source, p.target)).collect(),
        cycles,
        angle_sums,
        area,
        genus: area / (4.0 * PI) + 1.0,
    })
}
