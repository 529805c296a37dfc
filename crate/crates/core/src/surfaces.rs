//! The genus-2 surface group `Γ` generated by the 18-gon side pairings:
//! cosets in the (3,3,9) reflection group, homology, intersection numbers
//! and cyclic covers.
#![allow(clippy::needless_range_loop)]

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::realhyp::{
    axis_of, build_18gon, distance_to_geodesic, hdist, midpoint, to_disk, trace_axis_chords, verify_side_pairings,
    ChordSystem, GeodesicH2, Gon18, Motion2, PairingReport, ORIGIN,
};
use crate::triangle::{enumerate_words, Word};

/// Landing points closer than this to a triangle edge are ambiguous.
pub const AMBIGUITY_TOL: f64 = 1e-7;
const MAX_WALK: usize = 10_000;
/// Membership tolerance after a walk. The orbit of the center is uniformly
/// discrete, so this only needs to beat rounding in long products.
const ORBIT_TOL: f64 = 1e-4;

/// A pairing letter: index into the nine pairings, and whether it is the
/// inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PairingLetter {
    pub pairing: usize,
    pub inverse: bool,
}

/// Result of walking a point back into the polygon.
#[derive(Debug, Clone)]
pub struct Walk {
    /// Product of the maps applied, latest on the left.
    pub motion: Motion2,
    /// Maps applied, in order.
    pub letters: Vec<PairingLetter>,
    pub landing: C64,
}

/// Pulls `g(base)` into the polygon by side pairings. The polygon is the
/// Dirichlet domain of its center, so each step strictly reduces the distance
/// to the center. The point is recomputed from the running product, which
/// keeps far-away starting points from losing precision.
pub fn walk_into_polygon(gon: &Gon18, g: &Motion2, base: C64) -> Result<Walk> {
    let poly = &gon.polygon;
    let mut x = g.apply(base);
    let mut motion = Motion2::identity();
    let mut letters = Vec::new();
    for _ in 0..MAX_WALK {
        let mut best: Option<(f64, usize)> = None;
        for side in 0..poly.len() {
            let g = poly.side_geodesic(side);
            if g.side_value(x).signum() == g.side_value(ORIGIN).signum() {
                continue;
            }
            let (h, _) = gon.exit_map(side).ok_or(Error::NotInGamma)?;
            let d = hdist(h.apply(x), ORIGIN);
            if best.is_none_or(|(bd, _)| d < bd) {
                best = Some((d, side));
            }
        }
        let Some((_, side)) = best else {
            return Ok(Walk { motion, letters, landing: x });
        };
        let (h, _) = gon.exit_map(side).expect("checked above");
        let pairing = gon.pairings.iter().position(|p| p.source == side || p.target == side).expect("paired side");
        letters.push(PairingLetter { pairing, inverse: gon.pairings[pairing].target == side });
        motion = h.compose(&motion);
        x = motion.compose(g).apply(base);
    }
    Err(Error::NumericalAmbiguity)
}

/// Whether two motions agree up to the sign of the matrix.
fn same_motion(a: &Motion2, b: &Motion2, tol: f64) -> bool {
    let (m, n) = (a.matrix(), b.matrix());
    let scale = 1.0 + m.iter().fold(0.0f64, |s, x| s.max(x.abs()));
    a.flip() == b.flip() && ((m - n).amax() <= tol * scale || (m + n).amax() <= tol * scale)
}

/// Index `k` of the sector `[kπ/9, (k+1)π/9]` of the disk containing `z`,
/// which is the label of the triangle `d_k(T)` around the center.
fn sector(z: C64) -> Result<usize> {
    let w = to_disk(z);
    let step = PI / 9.0;
    let t = w.arg().rem_euclid(2.0 * PI);
    let k = ((t / step).floor() as usize).min(17);
    for edge in [k, k + 1] {
        let dir = crate::realhyp::from_disk(C64::from_polar(0.5, edge as f64 * step));
        let line = GeodesicH2::through(ORIGIN, dir);
        if distance_to_geodesic(&line, z).abs() < AMBIGUITY_TOL {
            return Err(Error::NumericalAmbiguity);
        }
    }
    Ok(k)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HomologyClass(pub [i64; 4]);

impl HomologyClass {
    pub const ZERO: HomologyClass = HomologyClass([0; 4]);

    pub fn basis(k: usize) -> Self {
        let mut v = [0; 4];
        v[k] = 1;
        HomologyClass(v)
    }

    pub fn add(&self, other: &Self) -> Self {
        HomologyClass(std::array::from_fn(|i| self.0[i] + other.0[i]))
    }

    pub fn scale(&self, k: i64) -> Self {
        HomologyClass(self.0.map(|x| x * k))
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn is_primitive(&self) -> bool {
        self.0.iter().fold(0, |g, &x| gcd(g, x.unsigned_abs())) == 1
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `xᵗ Ω y` for the standard symplectic `Ω` on `(a1, b1, a2, b2)`.
pub fn intersection_number(x: &HomologyClass, y: &HomologyClass) -> i64 {
    let (x, y) = (x.0, y.0);
    x[0] * y[1] - x[1] * y[0] + x[2] * y[3] - x[3] * y[2]
}

type Mat4 = [[i64; 4]; 4];

fn form(q: &Mat4, x: &[i64; 4], y: &[i64; 4]) -> i64 {
    (0..4).map(|i| (0..4).map(|j| x[i] * q[i][j] * y[j]).sum::<i64>()).sum()
}

/// Cellular homology of the glued polygon.
#[derive(Debug, Clone, Serialize)]
pub struct Homology {
    pub vertex_classes: usize,
    pub edge_classes: usize,
    pub faces: usize,
    pub euler_characteristic: i64,
    pub rank: usize,
    /// Spanning-tree edges (pairing indices) used to fix the gauge.
    pub tree_edges: Vec<usize>,
    /// The remaining edges; their cochains give the working basis.
    pub free_edges: Vec<usize>,
    /// Intersection form on the working basis.
    pub free_form: Mat4,
    /// Symplectic basis as columns in working coordinates.
    pub symplectic_basis: Mat4,
    /// Class of each pairing generator.
    pub generator_classes: Vec<HomologyClass>,
    /// Vertex class at each end of each edge.
    #[serde(skip)]
    edge_ends: Vec<(usize, usize)>,
}

impl Homology {
    /// Builds the CW structure of the quotient (vertex cycles, one edge per
    /// pairing, one face). Edge `k` is oriented like the target side of
    /// pairing `k`, and the generator `s_k` is dual to it.
    pub fn new(gon: &Gon18, report: &PairingReport) -> Result<Self> {
        let n = gon.polygon.len();
        let cycle_of = |v: usize| report.cycles.iter().position(|c| c.contains(&(v % n))).expect("vertex in a cycle");
        let vertices = report.cycles.len();
        let edges = gon.pairings.len();
        let euler = vertices as i64 - edges as i64 + 1;
        if euler != -2 {
            return Err(Error::NotASurface { euler });
        }
        let edge_ends: Vec<(usize, usize)> =
            gon.pairings.iter().map(|p| (cycle_of(p.target), cycle_of(p.target + 1))).collect();

        // Spanning tree by union-find, in pairing order.
        let mut parent: Vec<usize> = (0..vertices).collect();
        fn root(parent: &[usize], mut x: usize) -> usize {
            while parent[x] != x {
                x = parent[x];
            }
            x
        }
        let (mut tree_edges, mut free_edges) = (Vec::new(), Vec::new());
        for (k, &(a, b)) in edge_ends.iter().enumerate() {
            let (ra, rb) = (root(&parent, a), root(&parent, b));
            if ra != rb {
                parent[ra] = rb;
                tree_edges.push(k);
            } else {
                free_edges.push(k);
            }
        }
        if free_edges.len() != 4 {
            return Err(Error::NotASurface { euler });
        }

        let pairing_form = pairing_intersections(gon);
        let mut free_form = [[0i64; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                free_form[i][j] = pairing_form[free_edges[i]][free_edges[j]];
            }
        }
        let symplectic_basis = symplectic_reduce(&free_form).ok_or(Error::NotASurface { euler })?;
        let mut h = Homology {
            vertex_classes: vertices,
            edge_classes: edges,
            faces: 1,
            euler_characteristic: euler,
            rank: 4,
            tree_edges,
            free_edges,
            free_form,
            symplectic_basis,
            generator_classes: Vec::new(),
            edge_ends,
        };
        h.generator_classes = (0..edges)
            .map(|k| {
                let mut c = vec![0; edges];
                c[k] = 1;
                h.class_of_cochain(&c)
            })
            .collect();
        Ok(h)
    }

    /// Reduces an edge cochain modulo coboundaries to the working basis.
    pub fn working_coordinates(&self, cochain: &[i64]) -> [i64; 4] {
        // Vertex potential u with cochain(e) = u(head) - u(tail) on tree edges.
        let mut u: Vec<Option<i64>> = vec![None; self.vertex_classes];
        u[0] = Some(0);
        let mut changed = true;
        while changed {
            changed = false;
            for &k in &self.tree_edges {
                let (t, h) = self.edge_ends[k];
                match (u[t], u[h]) {
                    (Some(a), None) => {
                        u[h] = Some(a + cochain[k]);
                        changed = true;
                    }
                    (None, Some(b)) => {
                        u[t] = Some(b - cochain[k]);
                        changed = true;
                    }
                    _ => {}
                }
            }
        }
        let u: Vec<i64> = u.into_iter().map(|x| x.unwrap_or(0)).collect();
        std::array::from_fn(|i| {
            let k = self.free_edges[i];
            let (t, h) = self.edge_ends[k];
            cochain[k] - (u[h] - u[t])
        })
    }

    /// Class of an edge cochain in the symplectic basis: `P⁻¹ x` with
    /// `P⁻¹ = -Ω Pᵗ Q`.
    pub fn class_of_cochain(&self, cochain: &[i64]) -> HomologyClass {
        let x = self.working_coordinates(cochain);
        let p = &self.symplectic_basis;
        let qx: [i64; 4] = std::array::from_fn(|i| (0..4).map(|j| self.free_form[i][j] * x[j]).sum());
        let ptqx: [i64; 4] = std::array::from_fn(|i| (0..4).map(|j| p[j][i] * qx[j]).sum());
        // -Ω (v1, v2, v3, v4) = (-v2, v1, -v4, v3).
        HomologyClass([-ptqx[1], ptqx[0], -ptqx[3], ptqx[2]])
    }

    pub fn class_of_letters(&self, letters: &[PairingLetter]) -> HomologyClass {
        letters.iter().fold(HomologyClass::ZERO, |acc, l| {
            acc.add(&self.generator_classes[l.pairing].scale(if l.inverse { -1 } else { 1 }))
        })
    }

    /// The coboundary of each vertex class as an edge cochain.
    pub fn coboundaries(&self) -> Vec<Vec<i64>> {
        (0..self.vertex_classes)
            .map(|v| self.edge_ends.iter().map(|&(t, h)| i64::from(h == v) - i64::from(t == v)).collect())
            .collect()
    }
}

/// Intersection numbers of the pairing generators as based loops at the
/// center. The loop of `s_k` leaves towards its target side and returns from
/// its source side; two such loops cross once exactly when their side pairs
/// interleave around the boundary.
pub fn pairing_intersections(gon: &Gon18) -> Vec<Vec<i64>> {
    let n = gon.pairings.len();
    let sides = gon.polygon.len();
    let pos = |side: usize| side as f64 + 0.5;
    let mut q = vec![vec![0i64; n]; n];
    for k in 0..n {
        for l in 0..n {
            if k == l {
                continue;
            }
            let (bk, ak) = (pos(gon.pairings[k].target), pos(gon.pairings[k].source));
            let (bl, al) = (pos(gon.pairings[l].target), pos(gon.pairings[l].source));
            let rel = |x: f64| (x - bk).rem_euclid(sides as f64);
            let (ak, bl, al) = (rel(ak), rel(bl), rel(al));
            q[k][l] = if bl < ak && ak < al {
                1
            } else if al < ak && ak < bl {
                -1
            } else {
                0
            };
        }
    }
    q
}

/// A basis `(e1, f1, e2, f2)` with `Q(e_i, f_i) = 1` and all other pairings
/// zero, found among small integer vectors.
fn symplectic_reduce(q: &Mat4) -> Option<Mat4> {
    let mut cands: Vec<[i64; 4]> = Vec::new();
    for a in -2..=2 {
        for b in -2..=2 {
            for c in -2..=2 {
                for d in -2..=2 {
                    if (a, b, c, d) != (0, 0, 0, 0) {
                        cands.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    cands.sort_by_key(|v| (v.iter().map(|x| x.abs()).sum::<i64>(), v.map(|x| -x)));
    let e1 = cands[0];
    let f1 = *cands.iter().find(|v| form(q, &e1, v) == 1)?;
    let perp = |v: &[i64; 4]| form(q, &e1, v) == 0 && form(q, &f1, v) == 0;
    let e2 = *cands.iter().find(|v| perp(v))?;
    let f2 = *cands.iter().find(|v| perp(v) && form(q, &e2, v) == 1)?;
    let cols = [e1, f1, e2, f2];
    Some(std::array::from_fn(|i| std::array::from_fn(|j| cols[j][i])))
}

/// Right coset labels of `Δ(3,3,9)` modulo `Γ`, indexed by the 18 elements
/// of the dihedral group, with the right action of the three generators.
#[derive(Debug, Clone, Serialize)]
pub struct CosetTable {
    pub labels: Vec<Word>,
    pub right_action: Vec<[usize; 3]>,
}

impl CosetTable {
    /// Label of `w` by following the right action letter by letter.
    pub fn label(&self, w: &Word) -> usize {
        w.letters().iter().fold(0, |d, &x| self.right_action[d][(x - 1) as usize])
    }
}

/// The 18-gon with its verified pairings, the traced axis of
/// `f = I1 I3 I2 I3`, homology and cosets.
#[derive(Debug, Clone)]
pub struct Surface {
    pub gon: Gon18,
    pub report: PairingReport,
    pub f: Motion2,
    pub axis: GeodesicH2,
    pub chords: ChordSystem,
    pub homology: Homology,
    pub cosets: CosetTable,
}

/// Word of `f = I1 I3 I2 I3`.
pub fn f_word() -> Word {
    Word::reduce([1, 3, 2, 3]).expect("reduced")
}

impl Surface {
    pub fn new() -> Result<Self> {
        let gon = build_18gon()?;
        let report = verify_side_pairings(&gon)?;
        let f = gon.triangle.evaluate(f_word().letters());
        let axis = axis_of(&f)?;
        let chords = trace_axis_chords(&gon, &axis, 100)?;
        let homology = Homology::new(&gon, &report)?;
        let mut surface = Surface {
            gon,
            report,
            f,
            axis,
            chords,
            homology,
            cosets: CosetTable { labels: Vec::new(), right_action: Vec::new() },
        };
        let labels: Vec<Word> = surface.gon.dihedral.iter().map(|d| d.word.clone()).collect();
        let mut right_action = Vec::with_capacity(18);
        for d in &labels {
            let mut row = [0; 3];
            for (x, slot) in row.iter_mut().enumerate() {
                *slot = surface.coset_of(&d.concat(&Word::reduce([x as u8 + 1])?))?;
            }
            right_action.push(row);
        }
        surface.cosets = CosetTable { labels, right_action };
        Ok(surface)
    }

    pub fn evaluate(&self, w: &Word) -> Motion2 {
        self.gon.triangle.evaluate(w.letters())
    }

    /// The `d ∈ D` with `w ∈ Γ d`, as an index into the dihedral group.
    ///
    /// The base triangle's image under `w` is pulled back into the polygon by
    /// side pairings; the sector it lands in names `d`.
    pub fn coset_of(&self, w: &Word) -> Result<usize> {
        let g = self.evaluate(w);
        let t = &self.gon.triangle;
        let inner = midpoint(t.vertices[0], midpoint(t.vertices[1], t.vertices[2]));
        let walk = walk_into_polygon(&self.gon, &g, inner)?;
        let poly = &self.gon.polygon;
        for side in 0..poly.len() {
            if distance_to_geodesic(&poly.side_geodesic(side), walk.landing).abs() < AMBIGUITY_TOL {
                return Err(Error::NumericalAmbiguity);
            }
        }
        let k = sector(walk.landing)?;
        // γ⁻¹ g must be exactly d_k.
        if !same_motion(&walk.motion.compose(&g), &self.gon.dihedral[k].motion, ORBIT_TOL) {
            return Err(Error::NumericalAmbiguity);
        }
        Ok(k)
    }

    pub fn in_gamma(&self, w: &Word) -> Result<bool> {
        Ok(self.coset_of(w)? == 0)
    }

    /// Smallest `k ≤ 18` with `w^k ∈ Γ`.
    pub fn gamma_power(&self, w: &Word) -> Result<u32> {
        for k in 1..=18 {
            if self.in_gamma(&w.pow(k))? {
                return Ok(k);
            }
        }
        Err(Error::NotInGamma)
    }

    /// The pairing letters spelling `w ∈ Γ`.
    pub fn gamma_letters(&self, w: &Word) -> Result<Vec<PairingLetter>> {
        let g = self.evaluate(w);
        let walk = walk_into_polygon(&self.gon, &g, ORIGIN)?;
        let miss = hdist(walk.landing, ORIGIN);
        if miss > ORBIT_TOL && miss < 0.1 {
            return Err(Error::NumericalAmbiguity);
        }
        if miss > ORBIT_TOL || !same_motion(&walk.motion.compose(&g), &Motion2::identity(), ORBIT_TOL) {
            return Err(Error::NotInGamma);
        }
        // g = h_1⁻¹ ⋯ h_n⁻¹.
        Ok(walk.letters.iter().map(|l| PairingLetter { pairing: l.pairing, inverse: !l.inverse }).collect())
    }

    pub fn class_of(&self, w: &Word) -> Result<HomologyClass> {
        Ok(self.homology.class_of_letters(&self.gamma_letters(w)?))
    }

    /// Pairing letters for the sides crossed by the traced chords.
    pub fn chord_letters(&self) -> Vec<PairingLetter> {
        self.chords
            .chords
            .iter()
            .map(|c| {
                let k = self.gon.pairings.iter().position(|p| p.source == c.exit_side || p.target == c.exit_side);
                let k = k.expect("every side is paired");
                PairingLetter { pairing: k, inverse: self.gon.pairings[k].target == c.exit_side }
            })
            .collect()
    }

    /// The Δ-word of a product of pairing letters.
    pub fn word_of_letters(&self, letters: &[PairingLetter]) -> Result<Word> {
        let mut out: Vec<u8> = Vec::new();
        for l in letters {
            let w = &self.gon.pairings[l.pairing].word;
            if l.inverse {
                out.extend(w.inverse().letters());
            } else {
                out.extend(w.letters());
            }
        }
        Word::reduce(out)
    }

    /// `f^k` for the least `k` putting it in `Γ`: the closed geodesic traced
    /// by the chords.
    pub fn axis_word(&self) -> Result<Word> {
        let k = self.gamma_power(&f_word())?;
        Ok(f_word().pow(k))
    }

    pub fn axis_class(&self) -> Result<HomologyClass> {
        self.class_of(&self.axis_word()?)
    }

    /// For each `w` of length at most `depth`, checks that `d(L_f)` is one of
    /// the traced chord lines, where `w ∈ Γ d`. That places `w(L_f)` in the
    /// `Γ`-orbit of `L_f`.
    pub fn orbit_coincidence_check(&self, depth: usize) -> OrbitReport {
        let mut checked = 0;
        let mut failures = Vec::new();
        for w in std::iter::once(Word::empty()).chain(enumerate_words(depth)) {
            checked += 1;
            let ok = self.coset_of(&w).is_ok_and(|d| {
                let line = self.gon.dihedral[d].motion.apply_geodesic(&self.axis);
                self.chords.chords.iter().any(|c| c.line.same_line(&line, 1e-8))
            });
            if !ok {
                failures.push(w);
            }
        }
        OrbitReport { depth, words_checked: checked, failures }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitReport {
    pub depth: usize,
    pub words_checked: usize,
    pub failures: Vec<Word>,
}

impl OrbitReport {
    pub fn all_pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// A cyclic cover of degree `genus - 1`, cut by `beta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CoverSpec {
    pub genus: u32,
    pub beta: HomologyClass,
}

impl CoverSpec {
    pub fn new(genus: u32, beta: HomologyClass) -> Result<Self> {
        if genus < 2 {
            return Err(Error::BadCover(format!("target genus {genus} is below 2")));
        }
        if !beta.is_primitive() {
            return Err(Error::BadCover("beta must be nonzero and primitive".into()));
        }
        Ok(Self { genus, beta })
    }

    pub fn modulus(&self) -> u32 {
        self.genus - 1
    }

    /// `î(β, x) mod (g - 1)`, in `0..g-1`.
    pub fn psi_class(&self, x: &HomologyClass) -> u32 {
        intersection_number(&self.beta, x).rem_euclid(self.modulus() as i64) as u32
    }
}

impl Surface {
    pub fn psi(&self, w: &Word, spec: &CoverSpec) -> Result<u32> {
        Ok(spec.psi_class(&self.class_of(w)?))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CoverInvariants {
    pub degree: u32,
    pub euler_characteristic: i64,
    pub genus: u32,
}

pub fn cover_invariants(spec: &CoverSpec) -> CoverInvariants {
    let degree = spec.modulus();
    let euler = -2 * degree as i64;
    CoverInvariants { degree, euler_characteristic: euler, genus: (1 - euler / 2) as u32 }
}

/// Number of closed lifts of a loop with `ψ = psi`: `(g-1) / order(ψ)`.
pub fn lift_count(psi: u32, spec: &CoverSpec) -> u32 {
    gcd(psi as u64, spec.modulus() as u64) as u32
}

/// Smallest primitive class in `[-2, 2]⁴` orthogonal to `l` and not a
/// multiple of it, ordered by size. Every class qualifies when `l = 0`.
pub fn choose_beta(l: &HomologyClass) -> HomologyClass {
    let mut cands: Vec<HomologyClass> = Vec::new();
    for a in -2..=2i64 {
        for b in -2..=2i64 {
            for c in -2..=2i64 {
                for d in -2..=2i64 {
                    cands.push(HomologyClass([a, b, c, d]));
                }
            }
        }
    }
    cands.sort_by_key(|v| (v.0.iter().map(|x| x.abs()).sum::<i64>(), v.0.map(|x| -x)));
    let parallel = |v: &HomologyClass| {
        let (x, y) = (v.0, l.0);
        if l.is_zero() {
            return false;
        }
        (0..4).all(|i| (0..4).all(|j| x[i] * y[j] == x[j] * y[i]))
    };
    cands
        .into_iter()
        .find(|v| v.is_primitive() && intersection_number(v, l) == 0 && !parallel(v))
        .expect("the symplectic complement of a class has rank at least 3")
}
