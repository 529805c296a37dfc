//! The real hyperbolic plane in the upper half-plane model: motions in
//! PGL2(R), geodesics, and the (3,3,9) reflection group with its 18-gon.

mod chords;
mod gon;
mod quad;
mod triangle;

pub use chords::*;
pub use gon::*;
pub use quad::*;
pub use triangle::*;

use nalgebra::Matrix2;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{c, C64, I};

/// An isometry `z ↦ m(z)` (`det m > 0`) or `z ↦ m(z̄)` (`det m < 0`), with
/// `|det m| = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Motion2 {
    m: Matrix2<f64>,
}

impl Motion2 {
    pub fn new(m: Matrix2<f64>) -> Result<Self> {
        let det = m.determinant();
        if det == 0.0 || !det.is_finite() {
            return Err(Error::InvalidParams("singular motion matrix".into()));
        }
        Ok(Self { m: m / det.abs().sqrt() })
    }

    pub fn from_entries(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        Self::new(Matrix2::new(a, b, c, d))
    }

    pub fn identity() -> Self {
        Self { m: Matrix2::identity() }
    }

    pub fn matrix(&self) -> &Matrix2<f64> {
        &self.m
    }

    /// True for orientation-reversing motions.
    pub fn flip(&self) -> bool {
        self.m.determinant() < 0.0
    }

    pub fn trace(&self) -> f64 {
        self.m.trace()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Motion2) -> Motion2 {
        Self { m: self.m * other.m }
    }

    pub fn inverse(&self) -> Motion2 {
        let [a, c, b, d] = [self.m[(0, 0)], self.m[(1, 0)], self.m[(0, 1)], self.m[(1, 1)]];
        let det = a * d - b * c;
        Self { m: Matrix2::new(d, -b, -c, a) / det }
    }

    pub fn pow(&self, k: u32) -> Motion2 {
        (0..k).fold(Motion2::identity(), |acc, _| acc.compose(self))
    }

    pub fn apply(&self, z: C64) -> C64 {
        let z = if self.flip() { z.conj() } else { z };
        let (a, b, c, d) = (self.m[(0, 0)], self.m[(0, 1)], self.m[(1, 0)], self.m[(1, 1)]);
        (z * a + b) / (z * c + d)
    }

    pub fn apply_ideal(&self, x: Ideal) -> Ideal {
        let (a, b, c, d) = (self.m[(0, 0)], self.m[(0, 1)], self.m[(1, 0)], self.m[(1, 1)]);
        match x {
            Ideal::Infinity => {
                if c == 0.0 {
                    Ideal::Infinity
                } else {
                    Ideal::Real(a / c)
                }
            }
            Ideal::Real(t) => {
                let den = c * t + d;
                if den == 0.0 {
                    Ideal::Infinity
                } else {
                    Ideal::Real((a * t + b) / den)
                }
            }
        }
    }

    pub fn apply_geodesic(&self, g: &GeodesicH2) -> GeodesicH2 {
        GeodesicH2 { a: self.apply_ideal(g.a), b: self.apply_ideal(g.b) }
    }
}

/// A point of `R ∪ {∞}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Ideal {
    Real(f64),
    Infinity,
}

impl Ideal {
    /// Image on the unit circle under `z ↦ (z - i)/(z + i)`.
    pub fn to_circle(self) -> C64 {
        match self {
            Ideal::Infinity => c(1.0, 0.0),
            Ideal::Real(x) => (c(x, 0.0) - I) / (c(x, 0.0) + I),
        }
    }

    pub fn angle(self) -> f64 {
        self.to_circle().arg().rem_euclid(2.0 * std::f64::consts::PI)
    }

    /// Chordal distance between the images on the unit circle.
    pub fn distance(self, other: Ideal) -> f64 {
        (self.to_circle() - other.to_circle()).norm()
    }
}

/// Euclidean shape of a geodesic in the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Shape {
    Vertical(f64),
    Circle { center: f64, radius: f64 },
}

/// A geodesic oriented from `a` to `b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeodesicH2 {
    pub a: Ideal,
    pub b: Ideal,
}

impl GeodesicH2 {
    pub fn new(a: Ideal, b: Ideal) -> Result<Self> {
        if a.distance(b) < 1e-14 {
            return Err(Error::InvalidParams("geodesic endpoints coincide".into()));
        }
        Ok(Self { a, b })
    }

    pub fn real(a: f64, b: f64) -> Self {
        Self { a: Ideal::Real(a), b: Ideal::Real(b) }
    }

    /// The geodesic through `z1` and `z2`, oriented from `z1` towards `z2`.
    pub fn through(z1: C64, z2: C64) -> Self {
        if (z1.re - z2.re).abs() <= 1e-14 * (1.0 + z1.norm()) {
            let x = 0.5 * (z1.re + z2.re);
            return if z2.im > z1.im {
                Self { a: Ideal::Real(x), b: Ideal::Infinity }
            } else {
                Self { a: Ideal::Infinity, b: Ideal::Real(x) }
            };
        }
        let center = (z1.norm_sqr() - z2.norm_sqr()) / (2.0 * (z1.re - z2.re));
        let radius = (z1 - center).norm();
        if z2.re > z1.re {
            Self::real(center - radius, center + radius)
        } else {
            Self::real(center + radius, center - radius)
        }
    }

    pub fn reversed(&self) -> Self {
        Self { a: self.b, b: self.a }
    }

    pub fn shape(&self) -> Shape {
        match (self.a, self.b) {
            (Ideal::Real(x), Ideal::Infinity) | (Ideal::Infinity, Ideal::Real(x)) => Shape::Vertical(x),
            (Ideal::Real(x), Ideal::Real(y)) => Shape::Circle { center: 0.5 * (x + y), radius: 0.5 * (x - y).abs() },
            (Ideal::Infinity, Ideal::Infinity) => Shape::Vertical(f64::NAN),
        }
    }

    /// Positive on one side, negative on the other, zero on the geodesic.
    pub fn side_value(&self, z: C64) -> f64 {
        match self.shape() {
            Shape::Vertical(x) => z.re - x,
            Shape::Circle { center, radius } => (z - center).norm_sqr() - radius * radius,
        }
    }

    /// Euclidean residual of `z` from the geodesic.
    pub fn residual(&self, z: C64) -> f64 {
        match self.shape() {
            Shape::Vertical(x) => (z.re - x).abs(),
            Shape::Circle { center, radius } => ((z - center).norm() - radius).abs(),
        }
    }

    /// Increasing coordinate along the orientation: `ln |(z-a)/(z-b)|`.
    pub fn position(&self, z: C64) -> f64 {
        match (self.a, self.b) {
            (Ideal::Real(a), Ideal::Real(b)) => ((z - a).norm() / (z - b).norm()).ln(),
            (Ideal::Real(a), Ideal::Infinity) => (z - a).norm().ln(),
            (Ideal::Infinity, Ideal::Real(b)) => -(z - b).norm().ln(),
            _ => f64::NAN,
        }
    }

    /// Same unoriented geodesic, comparing endpoints on the unit circle.
    pub fn same_line(&self, other: &GeodesicH2, tol: f64) -> bool {
        let direct = self.a.distance(other.a).max(self.b.distance(other.b));
        let flipped = self.a.distance(other.b).max(self.b.distance(other.a));
        direct.min(flipped) <= tol
    }

    pub fn same_oriented(&self, other: &GeodesicH2, tol: f64) -> bool {
        self.a.distance(other.a).max(self.b.distance(other.b)) <= tol
    }

    /// Orientation-preserving motion taking `a` to 0 and `b` to ∞.
    pub fn normalizer(&self) -> Motion2 {
        let m = match (self.a, self.b) {
            (Ideal::Real(a), Ideal::Real(b)) => {
                if a > b {
                    Matrix2::new(1.0, -a, 1.0, -b)
                } else {
                    Matrix2::new(-1.0, a, 1.0, -b)
                }
            }
            (Ideal::Real(a), Ideal::Infinity) => Matrix2::new(1.0, -a, 0.0, 1.0),
            (Ideal::Infinity, Ideal::Real(b)) => Matrix2::new(0.0, -1.0, 1.0, -b),
            _ => Matrix2::identity(),
        };
        Motion2::new(m).expect("distinct endpoints")
    }
}

pub fn to_disk(z: C64) -> C64 {
    (z - I) / (z + I)
}

pub fn from_disk(w: C64) -> C64 {
    I * (w + 1.0) / (c(1.0, 0.0) - w)
}

/// The base point `i`, the center of the disk.
pub const ORIGIN: C64 = C64 { re: 0.0, im: 1.0 };

/// Hyperbolic distance, `2 asinh(|z - w| / (2 sqrt(Im z Im w)))`.
pub fn hdist(z: C64, w: C64) -> f64 {
    2.0 * ((z - w).norm() / (2.0 * (z.im * w.im).sqrt())).asinh()
}

/// Midpoint of the segment `[z, w]`, via the hyperboloid model.
pub fn midpoint(z: C64, w: C64) -> C64 {
    let lift = |p: C64| {
        let n = p.norm_sqr();
        [(n + 1.0) / (2.0 * p.im), (n - 1.0) / (2.0 * p.im), p.re / p.im]
    };
    let (u, v) = (lift(z), lift(w));
    let s = [u[0] + v[0], u[1] + v[1], u[2] + v[2]];
    let n = (s[0] * s[0] - s[1] * s[1] - s[2] * s[2]).sqrt();
    let s = s.map(|x| x / n);
    let y = 1.0 / (s[0] - s[1]);
    c(s[2] * y, y)
}

/// Point at distance `t` from `z` along the geodesic towards `w`.
pub fn point_along(z: C64, w: C64, t: f64) -> C64 {
    let g = GeodesicH2::through(z, w);
    let n = g.normalizer();
    let inv = n.inverse();
    let z0 = n.apply(z);
    // On the imaginary axis, distance t multiplies Im by e^{±t}.
    let dir = if n.apply(w).im > z0.im { 1.0 } else { -1.0 };
    inv.apply(c(0.0, z0.im * (dir * t).exp()))
}

/// The reflection fixing `g` pointwise.
pub fn reflect_in_geodesic(g: &GeodesicH2) -> Motion2 {
    match g.shape() {
        Shape::Vertical(x) => Motion2::from_entries(-1.0, 2.0 * x, 0.0, 1.0),
        Shape::Circle { center, radius } => {
            Motion2::from_entries(center, radius * radius - center * center, 1.0, -center)
        }
    }
    .expect("reflection matrices are nonsingular")
}

/// Roots of `c z^2 + (d - a) z - b = 0` for a normalized motion, repelling
/// first.
fn fixed_points(h: &Motion2) -> (Ideal, Ideal) {
    let m = h.matrix();
    let (a, b, c, d) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    let scale = m.iter().fold(0.0f64, |s, x| s.max(x.abs()));
    let tr = a + d;
    let disc = (tr * tr - 4.0).max(0.0).sqrt();
    if c.abs() <= 1e-15 * scale {
        let finite = Ideal::Real(b / (d - a));
        // z ↦ (a/d) z + b/d: ∞ attracts when |a/d| > 1.
        return if (a / d).abs() > 1.0 { (finite, Ideal::Infinity) } else { (Ideal::Infinity, finite) };
    }
    let bb = d - a;
    let q = -0.5 * (bb + disc.copysign(bb));
    let (r1, r2) = if q == 0.0 { ((a - d) / (2.0 * c), (a - d) / (2.0 * c)) } else { (q / c, -b / q) };
    let attracting = |z: f64| (c * z + d).abs() > 1.0;
    if attracting(r1) {
        (Ideal::Real(r2), Ideal::Real(r1))
    } else {
        (Ideal::Real(r1), Ideal::Real(r2))
    }
}

/// The translation axis, oriented from the repelling to the attracting fixed
/// point. Glide reflections use the axis of their square.
pub fn axis_of(h: &Motion2) -> Result<GeodesicH2> {
    let g = if h.flip() { h.compose(h) } else { *h };
    if g.trace().abs() <= 2.0 + 1e-12 {
        return Err(Error::NotHyperbolic);
    }
    let (a, b) = fixed_points(&g);
    Ok(GeodesicH2 { a, b })
}

/// Whether the endpoint pairs interleave on the boundary circle.
pub fn geodesics_cross(g1: &GeodesicH2, g2: &GeodesicH2) -> Result<bool> {
    for x in [g1.a, g1.b] {
        for y in [g2.a, g2.b] {
            if x.distance(y) < 1e-12 {
                return Err(Error::SharedEndpoint);
            }
        }
    }
    let (a, b) = (g1.a.angle(), g1.b.angle());
    let inside = |t: f64| {
        let span = (b - a).rem_euclid(2.0 * std::f64::consts::PI);
        let off = (t - a).rem_euclid(2.0 * std::f64::consts::PI);
        off > 0.0 && off < span
    };
    Ok(inside(g2.a.angle()) != inside(g2.b.angle()))
}

/// Intersection point of two geodesics, if they meet in the upper half-plane.
pub fn intersection(g: &GeodesicH2, h: &GeodesicH2) -> Option<C64> {
    let (s, t) = match (g.shape(), h.shape()) {
        (Shape::Vertical(_), Shape::Vertical(_)) => return None,
        (Shape::Vertical(x), other) | (other, Shape::Vertical(x)) => {
            let Shape::Circle { center, radius } = other else { unreachable!() };
            let y2 = radius * radius - (x - center).powi(2);
            return (y2 > 0.0).then(|| c(x, y2.sqrt()));
        }
        (s, t) => (s, t),
    };
    let (Shape::Circle { center: c1, radius: r1 }, Shape::Circle { center: c2, radius: r2 }) = (s, t) else {
        unreachable!()
    };
    if c1 == c2 {
        return None;
    }
    let x = (r1 * r1 - r2 * r2 + c2 * c2 - c1 * c1) / (2.0 * (c2 - c1));
    let y2 = r1 * r1 - (x - c1).powi(2);
    (y2 > 0.0).then(|| c(x, y2.sqrt()))
}

/// Angle at `z` between the geodesic rays towards `w1` and `w2`, in `[0, π]`.
pub fn angle_at(z: C64, w1: C64, w2: C64) -> f64 {
    // Move z to i by an affine map, then to the disk center, where geodesics
    // through the center are diameters.
    let to_center = |w: C64| to_disk((w - z.re) / z.im);
    let d = (to_center(w1).arg() - to_center(w2).arg()).rem_euclid(2.0 * std::f64::consts::PI);
    d.min(2.0 * std::f64::consts::PI - d)
}

/// Angle at which two geodesics cross, in `[0, π/2]`.
pub fn crossing_angle(g: &GeodesicH2, h: &GeodesicH2) -> Option<f64> {
    let z = intersection(g, h)?;
    let dir = |k: &GeodesicH2| {
        let n = k.normalizer();
        n.inverse().apply(n.apply(z) * 2.0)
    };
    let a = angle_at(z, dir(g), dir(h));
    Some(a.min(std::f64::consts::PI - a))
}

/// Distance between ultraparallel geodesics, from `|tr(R_g R_h)| = 2 cosh d`
/// for the product of their reflections. `None` if they meet or share an
/// endpoint.
pub fn geodesic_distance(g: &GeodesicH2, h: &GeodesicH2) -> Option<f64> {
    let t = reflect_in_geodesic(g).compose(&reflect_in_geodesic(h)).trace().abs();
    (t > 2.0 + 1e-12).then(|| (t / 2.0).acosh())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn motion() -> impl Strategy<Value = Motion2> {
        (-3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64).prop_filter_map("nonsingular", |(a, b, c, d)| {
            let det: f64 = a * d - b * c;
            (det.abs() > 0.1).then(|| Motion2::from_entries(a, b, c, d).unwrap())
        })
    }

    fn point() -> impl Strategy<Value = C64> {
        (-3.0..3.0f64, 0.05..3.0f64).prop_map(|(x, y)| c(x, y))
    }

    fn geodesic() -> impl Strategy<Value = GeodesicH2> {
        (-5.0..5.0f64, -5.0..5.0f64)
            .prop_filter("distinct", |(a, b)| (a - b).abs() > 0.01)
            .prop_map(|(a, b)| GeodesicH2::real(a, b))
    }

    #[test]
    fn reflection_examples() {
        let r = reflect_in_geodesic(&GeodesicH2 { a: Ideal::Real(0.0), b: Ideal::Infinity });
        assert!(r.flip());
        assert!((r.apply(c(1.5, 2.0)) - c(-1.5, 2.0)).norm() < 1e-15);
        let u = reflect_in_geodesic(&GeodesicH2::real(-1.0, 1.0));
        let z = c(0.3, 0.7);
        assert!((u.apply(z) - c(1.0, 0.0) / z.conj()).norm() < 1e-15);
    }

    #[test]
    fn axis_examples() {
        let h = Motion2::from_entries(4.0, 0.0, 0.0, 1.0).unwrap();
        let ax = axis_of(&h).unwrap();
        assert_eq!(ax.a, Ideal::Real(0.0));
        assert_eq!(ax.b, Ideal::Infinity);
        let h = Motion2::from_entries(1.0, 0.0, 0.0, 4.0).unwrap();
        let ax = axis_of(&h).unwrap();
        assert_eq!((ax.a, ax.b), (Ideal::Infinity, Ideal::Real(0.0)));
        assert_eq!(axis_of(&Motion2::identity()), Err(Error::NotHyperbolic));
        let rot = Motion2::from_entries(0.0, -1.0, 1.0, 0.0).unwrap();
        assert_eq!(axis_of(&rot), Err(Error::NotHyperbolic));
    }

    #[test]
    fn crossing_examples() {
        let vertical = GeodesicH2 { a: Ideal::Real(0.0), b: Ideal::Infinity };
        assert!(geodesics_cross(&vertical, &GeodesicH2::real(-1.0, 1.0)).unwrap());
        assert!(!geodesics_cross(&GeodesicH2::real(0.0, 1.0), &GeodesicH2::real(2.0, 3.0)).unwrap());
        assert_eq!(
            geodesics_cross(&GeodesicH2::real(0.0, 1.0), &GeodesicH2::real(1.0, 3.0)),
            Err(Error::SharedEndpoint)
        );
    }

    #[test]
    fn disk_conversion_preserves_distance() {
        let disk_dist = |u: C64, v: C64| {
            let x = 2.0 * (u - v).norm_sqr() / ((1.0 - u.norm_sqr()) * (1.0 - v.norm_sqr()));
            (1.0 + x).acosh()
        };
        for (z, w) in [(c(0.3, 0.4), c(-1.0, 2.0)), (c(0.0, 1.0), c(5.0, 0.1))] {
            assert!((hdist(z, w) - disk_dist(to_disk(z), to_disk(w))).abs() < 1e-12);
            assert!((from_disk(to_disk(z)) - z).norm() < 1e-14);
        }
        assert_eq!(to_disk(ORIGIN), c(0.0, 0.0));
    }

    #[test]
    fn midpoint_matches_bisection() {
        let (z, w) = (c(-0.7, 0.2), c(1.3, 2.5));
        let d = hdist(z, w);
        let (mut lo, mut hi) = (0.0, d);
        while hi - lo > 1e-13 {
            let t = 0.5 * (lo + hi);
            let p = point_along(z, w, t);
            if hdist(z, p) < hdist(p, w) {
                lo = t;
            } else {
                hi = t;
            }
        }
        let m = midpoint(z, w);
        assert!(hdist(m, point_along(z, w, lo)) < 1e-11);
        assert!((hdist(z, m) - d / 2.0).abs() < 1e-12);
    }

    #[test]
    fn angles() {
        let i = ORIGIN;
        let diag = C64::from_polar(1.0, PI / 4.0);
        assert!((angle_at(i, c(0.0, 2.0), diag) - PI / 2.0).abs() < 1e-12);
        let v = GeodesicH2 { a: Ideal::Real(0.0), b: Ideal::Infinity };
        let u = GeodesicH2::real(-1.0, 1.0);
        assert!((crossing_angle(&v, &u).unwrap() - PI / 2.0).abs() < 1e-12);
        let w = GeodesicH2::real(-2.0, 2.0f64.sqrt() * 2.0 - 2.0);
        let a = crossing_angle(&v, &w).unwrap();
        assert!(a > 0.0 && a < PI / 2.0);
    }

    #[test]
    fn distance_between_concentric_circles() {
        let d = geodesic_distance(&GeodesicH2::real(-1.0, 1.0), &GeodesicH2::real(-3.0, 3.0)).unwrap();
        assert!((d - 3f64.ln()).abs() < 1e-12);
        assert!(geodesic_distance(&GeodesicH2::real(-1.0, 1.0), &GeodesicH2::real(0.0, 2.0)).is_none());
    }

    proptest! {
        #[test]
        fn composition_is_associative(f in motion(), g in motion(), h in motion(), z in point()) {
            let lhs = f.compose(&g).compose(&h).apply(z);
            let rhs = f.compose(&g.compose(&h)).apply(z);
            let nested = f.apply(g.apply(h.apply(z)));
            prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + lhs.norm()));
            prop_assert!((lhs - nested).norm() <= 1e-9 * (1.0 + lhs.norm()));
            prop_assert!(lhs.im > 0.0);
        }

        #[test]
        fn reflections_are_involutions(g in geodesic(), z in point()) {
            let r = reflect_in_geodesic(&g);
            prop_assert!(r.flip());
            let scale = r.matrix().iter().fold(1.0f64, |m, x| m.max(x.abs())).powi(2);
            prop_assert!((r.apply(r.apply(z)) - z).norm() < 1e-12 * scale * (1.0 + z.norm()));
            if let Shape::Circle { center, radius } = g.shape() {
                let on = c(center, 0.0) + C64::from_polar(radius, 1.0);
                prop_assert!((r.apply(on) - on).norm() < 1e-12 * (1.0 + on.norm()));
            }
        }

        #[test]
        fn motions_preserve_distance(f in motion(), z in point(), w in point()) {
            let d0 = hdist(z, w);
            prop_assert!((hdist(f.apply(z), f.apply(w)) - d0).abs() < 1e-8 * (1.0 + d0));
            prop_assert!((f.inverse().apply(f.apply(z)) - z).norm() < 1e-9 * (1.0 + z.norm()));
        }

        #[test]
        fn crossing_is_motion_invariant(g1 in geodesic(), g2 in geodesic(), f in motion()) {
            let base = geodesics_cross(&g1, &g2);
            prop_assume!(base.is_ok());
            let moved = geodesics_cross(&f.apply_geodesic(&g1), &f.apply_geodesic(&g2));
            prop_assert_eq!(moved.ok(), base.ok());
        }

        #[test]
        fn crossing_agrees_with_intersection(g1 in geodesic(), g2 in geodesic()) {
            let cross = geodesics_cross(&g1, &g2);
            prop_assume!(cross.is_ok());
            prop_assert_eq!(cross.unwrap(), intersection(&g1, &g2).is_some());
        }

        #[test]
        fn axis_is_equivariant(lam in 1.2..5.0f64, f in motion(), h in motion()) {
            let g = f.compose(&Motion2::from_entries(lam, 0.0, 0.0, 1.0 / lam).unwrap()).compose(&f.inverse());
            let conj = h.compose(&g).compose(&h.inverse());
            let lhs = axis_of(&conj).unwrap();
            let rhs = h.apply_geodesic(&axis_of(&g).unwrap());
            prop_assert!(lhs.same_oriented(&rhs, 1e-8));
        }

        #[test]
        fn through_contains_points(z in point(), w in point()) {
            prop_assume!((z - w).norm() > 1e-3);
            let g = GeodesicH2::through(z, w);
            prop_assert!(g.residual(z) < 1e-9 * (1.0 + z.norm_sqr()));
            prop_assert!(g.residual(w) < 1e-9 * (1.0 + w.norm_sqr()));
            prop_assert!(g.position(w) > g.position(z));
        }
    }
}
