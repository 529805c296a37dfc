use std::f64::consts::PI;

use num_complex::Complex64;

use super::{angle_at, from_disk, reflect_in_geodesic, GeodesicH2, Ideal, Motion2, ORIGIN};
use crate::error::{Error, Result};
use crate::linalg::{c, C64};

/// A geodesic triangle with its three side reflections.
///
/// Vertex `O` sits at `i` (the disk center); `L1 = OA1`, `L2 = OA2` and
/// `L3 = A1A2`, with angle `π/r` at `O`, `π/q` at `A1` and `π/p` at `A2`.
#[derive(Debug, Clone)]
pub struct RealTriangle {
    /// `[O, A1, A2]` in the upper half-plane.
    pub vertices: [C64; 3],
    /// `[L1, L2, L3]`.
    pub sides: [GeodesicH2; 3],
    /// `[I1, I2, I3]`, reflections in `L1`, `L2`, `L3`.
    pub reflections: [Motion2; 3],
}

/// `cosh a = (cos A + cos B cos C) / (sin B sin C)` for the side `a`
/// opposite the angle `A`.
pub fn dual_cosine_law(a: f64, b: f64, c: f64) -> f64 {
    (a.cos() + b.cos() * c.cos()) / (b.sin() * c.sin())
}

pub fn triangle_with_angles(p: u32, q: u32, r: u32) -> Result<RealTriangle> {
    if p < 2 || q < 2 || r < 2 {
        return Err(Error::NotHyperbolicTriangle);
    }
    triangle_from_angles(PI / r as f64, PI / q as f64, PI / p as f64)
}

/// The triangle with angles `at_o`, `at_a1`, `at_a2` at `O`, `A1`, `A2`.
pub fn triangle_from_angles(at_o: f64, at_a1: f64, at_a2: f64) -> Result<RealTriangle> {
    let angles = [at_o, at_a1, at_a2];
    if angles.iter().any(|&a| !(a > 0.0 && a < PI)) || angles.iter().sum::<f64>() >= PI - 1e-15 {
        return Err(Error::NotHyperbolicTriangle);
    }
    let oa1 = dual_cosine_law(at_a2, at_a1, at_o).acosh();
    let oa2 = dual_cosine_law(at_a1, at_a2, at_o).acosh();
    let a1 = from_disk(c((oa1 / 2.0).tanh(), 0.0));
    let a2 = from_disk(Complex64::from_polar((oa2 / 2.0).tanh(), at_o));
    let sides = [GeodesicH2::through(ORIGIN, a1), GeodesicH2::through(ORIGIN, a2), GeodesicH2::through(a1, a2)];
    Ok(RealTriangle { vertices: [ORIGIN, a1, a2], sides, reflections: sides.map(|s| reflect_in_geodesic(&s)) })
}

impl RealTriangle {
    /// Interior angles at `[O, A1, A2]`.
    pub fn angles(&self) -> [f64; 3] {
        let [o, a1, a2] = self.vertices;
        [angle_at(o, a1, a2), angle_at(a1, o, a2), angle_at(a2, o, a1)]
    }

    pub fn area(&self) -> f64 {
        PI - self.angles().iter().sum::<f64>()
    }

    pub fn reflection(&self, k: u8) -> Motion2 {
        self.reflections[(k - 1) as usize]
    }

    /// Evaluates a word in the letters `1, 2, 3`, multiplying left to right.
    pub fn evaluate(&self, letters: &[u8]) -> Motion2 {
        letters.iter().fold(Motion2::identity(), |acc, &k| acc.compose(&self.reflection(k)))
    }
}

/// The ideal triangle with vertices `0, 1, ∞`, as its three side reflections
/// `[x = 0, x = 1, |z - 1/2| = 1/2]`.
pub fn ideal_triangle() -> [Motion2; 3] {
    [
        GeodesicH2 { a: Ideal::Real(0.0), b: Ideal::Infinity },
        GeodesicH2 { a: Ideal::Real(1.0), b: Ideal::Infinity },
        GeodesicH2::real(0.0, 1.0),
    ]
    .map(|g| reflect_in_geodesic(&g))
}
