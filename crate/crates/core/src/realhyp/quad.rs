use std::f64::consts::PI;

use serde::Serialize;

use super::{axis_of, crossing_angle, hdist, midpoint, GeodesicH2, Gon18, Motion2};
use crate::error::{Error, Result};
use crate::linalg::{c, C64};

const QUAD_TOL: f64 = 1e-9;

/// `A, B` on the first geodesic, `C, D` on the second, with `A, D` on one
/// hypercycle of the axis and `B, C` on another.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Quadrilateral {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
}

/// Signed distance from `z` to `g`, positive on the right of the orientation.
pub fn distance_to_geodesic(g: &GeodesicH2, z: C64) -> f64 {
    let w = g.normalizer().apply(z);
    (w.re / w.im).asinh()
}

/// Orthogonal projection of `z` onto `g`.
pub fn project_to_geodesic(g: &GeodesicH2, z: C64) -> C64 {
    let n = g.normalizer();
    let w = n.apply(z);
    n.inverse().apply(c(0.0, w.norm()))
}

/// Length of the arc from `x` to `y` along their common hypercycle with
/// baseline `g`: the projected distance times `cosh` of the offset. `None`
/// if the points are not equidistant from `g` on the same side.
pub fn hypercycle_arc_length(g: &GeodesicH2, x: C64, y: C64) -> Option<f64> {
    let (dx, dy) = (distance_to_geodesic(g, x), distance_to_geodesic(g, y));
    if (dx - dy).abs() > QUAD_TOL * (1.0 + dx.abs()) {
        return None;
    }
    Some(hdist(project_to_geodesic(g, x), project_to_geodesic(g, y)) * dx.cosh())
}

/// Builds the quadrilateral cut out by `l1`, `l2` (both orthogonal to
/// `axis`) and the hypercycles through `a ∈ l1` and `c ∈ l2`.
pub fn lemma_quadrilateral(
    axis: &GeodesicH2,
    l1: &GeodesicH2,
    l2: &GeodesicH2,
    a: C64,
    c_pt: C64,
) -> Result<Quadrilateral> {
    if l1.residual(a) > 1e-9 * (1.0 + a.norm_sqr()) || l2.residual(c_pt) > 1e-9 * (1.0 + c_pt.norm_sqr()) {
        return Err(Error::InvalidParams("quadrilateral corners must lie on their geodesics".into()));
    }
    let n = axis.normalizer();
    let inv = n.inverse();
    let (a0, c0) = (n.apply(a), n.apply(c_pt));
    // Normalized: orthogonal geodesics are circles |z| = r, hypercycles are
    // rays from 0.
    let b0 = C64::from_polar(a0.norm(), c0.arg());
    let d0 = C64::from_polar(c0.norm(), a0.arg());
    Ok(Quadrilateral { a, b: inv.apply(b0), c: c_pt, d: inv.apply(d0) })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadCheck {
    /// `|d(A,D) - d(B,C)|`.
    pub distance_gap: f64,
    /// Difference of hypercycle arc lengths `AD` and `BC`, infinite if the
    /// corners are not on hypercycles.
    pub arc_gap: f64,
    /// How far the inversion in the axis is from swapping `A↔B` and `D↔C`.
    pub inversion_gap: f64,
    /// Distance between the diagonal midpoints, and of that point from the
    /// axis.
    pub midpoint_gap: f64,
    pub perpendicular: bool,
}

impl QuadCheck {
    /// The three conditions of the lemma.
    pub fn conditions(&self) -> [bool; 3] {
        [self.distance_gap <= QUAD_TOL, self.arc_gap <= QUAD_TOL, self.inversion_gap <= QUAD_TOL]
    }

    pub fn holds(&self) -> bool {
        self.perpendicular && self.conditions().iter().all(|&b| b) && self.midpoint_gap <= QUAD_TOL
    }
}

/// Checks the equal-distance, equal-arc and inversion-symmetry conditions
/// for `quad` relative to the axis of `f`.
pub fn midpoint_quadrilateral_check(f: &Motion2, l1: &GeodesicH2, l4: &GeodesicH2, quad: &Quadrilateral) -> QuadCheck {
    let Ok(axis) = axis_of(f) else {
        return QuadCheck {
            distance_gap: f64::INFINITY,
            arc_gap: f64::INFINITY,
            inversion_gap: f64::INFINITY,
            midpoint_gap: f64::INFINITY,
            perpendicular: false,
        };
    };
    let perpendicular =
        [l1, l4].iter().all(|l| crossing_angle(&axis, l).is_some_and(|t| (t - PI / 2.0).abs() <= QUAD_TOL));
    let Quadrilateral { a, b, c: cc, d } = *quad;
    let distance_gap = (hdist(a, d) - hdist(b, cc)).abs();
    let arc_gap = match (hypercycle_arc_length(&axis, a, d), hypercycle_arc_length(&axis, b, cc)) {
        (Some(x), Some(y)) => (x - y).abs(),
        _ => f64::INFINITY,
    };
    let n = axis.normalizer();
    let inv = n.inverse();
    let reflect = |z: C64| {
        let w = n.apply(z);
        inv.apply(c(-w.re, w.im))
    };
    let inversion_gap = hdist(reflect(a), b).max(hdist(reflect(d), cc));
    let (m1, m2) = (midpoint(a, cc), midpoint(b, d));
    let midpoint_gap = hdist(m1, m2).max(distance_to_geodesic(&axis, m1).abs());
    QuadCheck { distance_gap, arc_gap, inversion_gap, midpoint_gap, perpendicular }
}

/// `f = I1 I3 I2 I3` with `L1` and `L4 = I3(L2)`, and the quadrilateral
/// `A1 N2 A2 N1` on them.
pub fn gon_quadrilateral(gon: &Gon18) -> Result<(Motion2, GeodesicH2, GeodesicH2, Quadrilateral)> {
    let t = &gon.triangle;
    let f = t.evaluate(&[1, 3, 2, 3]);
    let l1 = t.sides[0];
    let l4 = t.reflection(3).apply_geodesic(&t.sides[1]);
    let quad = lemma_quadrilateral(&axis_of(&f)?, &l1, &l4, t.vertices[1], t.vertices[2])?;
    Ok((f, l1, l4, quad))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realhyp::{build_18gon, point_along, ORIGIN};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn gon_configuration_satisfies_lemma() {
        let gon = build_18gon().unwrap();
        let (f, l1, l4, quad) = gon_quadrilateral(&gon).unwrap();
        let check = midpoint_quadrilateral_check(&f, &l1, &l4, &quad);
        assert!(check.holds(), "{check:?}");
        // The diagonal A1 A2 is the side [A1 A2] of P.
        let axis = axis_of(&f).unwrap();
        let m = midpoint(quad.a, quad.c);
        assert!(distance_to_geodesic(&axis, m).abs() < 1e-9);
        assert!(hdist(m, gon.polygon.side_midpoint(0)) < 1e-9);
    }

    #[test]
    fn skewed_configuration_fails_all_three() {
        let gon = build_18gon().unwrap();
        let (f, l1, l4, quad) = gon_quadrilateral(&gon).unwrap();
        let moved = point_along(quad.a, ORIGIN, 0.1);
        let skew = lemma_quadrilateral(&axis_of(&f).unwrap(), &l1, &l4, moved, quad.c).unwrap();
        let check = midpoint_quadrilateral_check(&f, &l1, &l4, &skew);
        assert_eq!(check.conditions(), [false, false, false]);
        assert!(!check.holds());
        // Moving a single corner off its hypercycle also breaks it.
        let mut loose = quad;
        loose.a = moved;
        assert!(!midpoint_quadrilateral_check(&f, &l1, &l4, &loose).holds());
    }

    fn random_motion(rng: &mut ChaCha8Rng) -> Motion2 {
        loop {
            let m: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-2.0..2.0));
            if (m[0] * m[3] - m[1] * m[2]) > 0.2 {
                return Motion2::from_entries(m[0], m[1], m[2], m[3]).unwrap();
            }
        }
    }

    #[test]
    fn conditions_are_equivalent() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for trial in 0..200 {
            let h = random_motion(&mut rng);
            let lam: f64 = rng.gen_range(1.5..4.0);
            let f = h.compose(&Motion2::from_entries(lam, 0.0, 0.0, 1.0 / lam).unwrap()).compose(&h.inverse());
            let (r1, r2) = (rng.gen_range(0.3..1.0), rng.gen_range(1.5..3.0));
            let ta: f64 = rng.gen_range(0.2..2.9);
            let tc = if trial % 2 == 0 { PI - ta } else { rng.gen_range(0.2..2.9) };
            let circle = |r: f64| h.apply_geodesic(&GeodesicH2::real(r, -r));
            let (l1, l2) = (circle(r1), circle(r2));
            let axis = axis_of(&f).unwrap();
            let quad = lemma_quadrilateral(
                &axis,
                &l1,
                &l2,
                h.apply(C64::from_polar(r1, ta)),
                h.apply(C64::from_polar(r2, tc)),
            )
            .unwrap();
            let check = midpoint_quadrilateral_check(&f, &l1, &l2, &quad);
            let conds = check.conditions();
            assert!(conds.iter().all(|&x| x == conds[0]), "{trial}: {check:?}");
            assert_eq!(conds[0], trial % 2 == 0 || (ta + tc - PI).abs() < 1e-9);
            assert!(check.perpendicular);
            if conds[0] {
                assert!(check.midpoint_gap < 1e-8);
            }
        }
    }

    #[test]
    fn arc_length_matches_integration() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let h = random_motion(&mut rng);
            let base = h.apply_geodesic(&GeodesicH2 {
                a: crate::realhyp::Ideal::Real(0.0),
                b: crate::realhyp::Ideal::Infinity,
            });
            let theta: f64 = rng.gen_range(0.3..2.8);
            let (r1, r2): (f64, f64) = (rng.gen_range(0.5..1.0), rng.gen_range(1.2..3.0));
            // Integrate |dz| / Im z along the mapped ray.
            let n = 4000;
            let point = |s: f64| h.apply(C64::from_polar(r1 * (r2 / r1).powf(s), theta));
            let mut len = 0.0;
            for k in 0..n {
                let (s0, s1) = (k as f64 / n as f64, (k + 1) as f64 / n as f64);
                let (z0, z1, zm) = (point(s0), point(s1), point(0.5 * (s0 + s1)));
                len += (z1 - z0).norm() / zm.im;
            }
            let closed = hypercycle_arc_length(&base, point(0.0), point(1.0)).unwrap();
            assert!((len - closed).abs() < 1e-5 * closed, "{len} vs {closed}");
            assert!((closed - (r2 / r1).ln() / theta.sin()).abs() < 1e-9 * closed);
        }
    }
}
