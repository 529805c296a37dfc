use serde::Serialize;

use super::{axis_of, hdist, intersection, GeodesicH2, Gon18, Motion2};
use crate::error::{Error, Result};
use crate::linalg::C64;

/// Tolerance for accepting a point as lying on a side segment.
const ON_SEGMENT: f64 = 1e-9;
/// Endpoint agreement for the coarse closure test.
const COARSE_CLOSURE: f64 = 1e-6;
/// Endpoint agreement for chord and closure equality.
pub const CHORD_TOL: f64 = 1e-9;
/// Boundary points closer than this are the same point.
pub const BOUNDARY_TOL: f64 = 1e-8;

/// The part of a geodesic inside the polygon.
#[derive(Debug, Clone, Serialize)]
pub struct Chord {
    pub line: GeodesicH2,
    pub entry_side: usize,
    pub exit_side: usize,
    pub entry: C64,
    pub exit: C64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ChordSystem {
    pub chords: Vec<Chord>,
    /// First `k` with `L^k = L^1`.
    pub closure_step: usize,
    /// Pairing maps applied at each step.
    #[serde(skip)]
    pub maps: Vec<Motion2>,
}

impl ChordSystem {
    /// Largest distance from a chord endpoint to the midpoint of its side.
    pub fn midpoint_residual(&self, gon: &Gon18) -> f64 {
        self.chords
            .iter()
            .flat_map(|c| [(c.entry_side, c.entry), (c.exit_side, c.exit)])
            .map(|(s, z)| hdist(z, gon.polygon.side_midpoint(s)))
            .fold(0.0, f64::max)
    }

    /// Whether every chord joins two adjacent sides.
    pub fn adjacent_sides(&self, n: usize) -> bool {
        self.chords.iter().all(|c| (c.entry_side + 1) % n == c.exit_side || (c.exit_side + 1) % n == c.entry_side)
    }
}

/// The chord cut by `line` from the polygon, oriented along the line.
pub fn chord_of(gon: &Gon18, line: &GeodesicH2) -> Result<Chord> {
    let poly = &gon.polygon;
    let mut hits: Vec<(usize, C64)> = Vec::new();
    for i in 0..poly.len() {
        let Some(z) = intersection(line, &poly.side_geodesic(i)) else { continue };
        let (a, b) = poly.side(i);
        if hdist(a, z) + hdist(z, b) - hdist(a, b) > ON_SEGMENT {
            continue;
        }
        if hits.iter().any(|(_, w)| hdist(*w, z) < ON_SEGMENT) {
            // Passing through a vertex.
            return Err(Error::DegenerateTangency);
        }
        hits.push((i, z));
    }
    if hits.len() != 2 {
        return Err(Error::MissesPolygon);
    }
    hits.sort_by(|x, y| line.position(x.1).total_cmp(&line.position(y.1)));
    Ok(Chord { line: *line, entry_side: hits[0].0, exit_side: hits[1].0, entry: hits[0].1, exit: hits[1].1 })
}

/// Follows `line` through the polygon: whenever it leaves through a side, the
/// pairing of that side brings it back in through the partner side.
///
/// A coarse pass finds the closing step `k` and the pairing maps
/// `h_1, …, h_{k-1}`. Each line is then recomputed as the axis of the cyclic
/// rotation of `h_{k-1} ⋯ h_1`, which keeps the errors from compounding, and
/// closure is confirmed to `CHORD_TOL`.
pub fn trace_axis_chords(gon: &Gon18, line: &GeodesicH2, max_steps: usize) -> Result<ChordSystem> {
    let mut current = *line;
    let mut coarse: Vec<Chord> = Vec::new();
    let mut maps = Vec::new();
    let mut closure_step = None;
    for step in 1..=max_steps {
        let chord = chord_of(gon, &current)?;
        if let Some(prev) = coarse.last() {
            let (_, partner) = gon.exit_map(prev.exit_side).ok_or(Error::MissesPolygon)?;
            if chord.entry_side != partner {
                return Err(Error::MissesPolygon);
            }
        }
        let (h, _) = gon.exit_map(chord.exit_side).ok_or(Error::MissesPolygon)?;
        current = h.apply_geodesic(&current);
        coarse.push(chord);
        maps.push(h);
        if current.same_oriented(line, COARSE_CLOSURE) {
            closure_step = Some(step + 1);
            break;
        }
    }
    let closure_step = closure_step.ok_or(Error::NoClosure(max_steps))?;

    let k = maps.len();
    let mut chords = Vec::with_capacity(k);
    for i in 0..k {
        // h_i ⋯ h_1 h_k ⋯ h_{i+1}: maps applied in order starting at i.
        let rotated = (0..k).map(|j| maps[(i + j) % k]).fold(Motion2::identity(), |acc, h| h.compose(&acc));
        let mut refined = axis_of(&rotated)?;
        if !refined.same_oriented(&coarse[i].line, COARSE_CLOSURE) {
            refined = refined.reversed();
            if !refined.same_oriented(&coarse[i].line, COARSE_CLOSURE) {
                return Err(Error::NoClosure(max_steps));
            }
        }
        chords.push(chord_of(gon, &refined)?);
    }
    if !chords[0].line.same_oriented(line, CHORD_TOL) {
        return Err(Error::NoClosure(max_steps));
    }
    Ok(ChordSystem { chords, closure_step, maps })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SelfIntersections {
    /// Chord pairs crossing in the open polygon.
    pub interior: usize,
    /// Crossings on the boundary, after identifying points across pairings.
    pub boundary: usize,
}

impl SelfIntersections {
    pub fn total(&self) -> usize {
        self.interior + self.boundary
    }
}

/// Counts the self-intersections of the closed geodesic made of `chords`.
///
/// Boundary points are moved onto the target side of their pairing and
/// grouped; a point visited by `m` passages of the curve contributes
/// `m choose 2`.
pub fn self_intersection_count(gon: &Gon18, chords: &[Chord]) -> Result<SelfIntersections> {
    for (i, a) in chords.iter().enumerate() {
        for b in &chords[i + 1..] {
            if a.line.same_line(&b.line, CHORD_TOL) {
                return Err(Error::DegenerateTangency);
            }
        }
    }
    let mut interior = 0;
    for (i, a) in chords.iter().enumerate() {
        for b in &chords[i + 1..] {
            let Some(z) = intersection(&a.line, &b.line) else { continue };
            let inside = |c: &Chord| {
                let (pe, px, pz) = (c.line.position(c.entry), c.line.position(c.exit), c.line.position(z));
                pz > pe && pz < px && hdist(z, c.entry) > BOUNDARY_TOL && hdist(z, c.exit) > BOUNDARY_TOL
            };
            if inside(a) && inside(b) {
                interior += 1;
            }
        }
    }

    let mut groups: Vec<(usize, C64, usize)> = Vec::new();
    for c in chords {
        for (side, z) in [(c.entry_side, c.entry), (c.exit_side, c.exit)] {
            let (side, z) = match gon.pairings.iter().find(|p| p.source == side) {
                Some(p) => (p.target, p.motion.apply(z)),
                None => (side, z),
            };
            match groups.iter_mut().find(|(s, w, _)| *s == side && hdist(*w, z) < BOUNDARY_TOL) {
                Some(g) => g.2 += 1,
                None => groups.push((side, z, 1)),
            }
        }
    }
    let boundary = groups
        .iter()
        .map(|&(_, _, m)| {
            let passes = m / 2;
            passes * passes.saturating_sub(1) / 2
        })
        .sum();
    Ok(SelfIntersections { interior, boundary })
}
