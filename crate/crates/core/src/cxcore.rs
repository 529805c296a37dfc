//! Hermitian forms of signature (2,1), projective points of the complex
//! hyperbolic plane, the Bergman distance and the Heisenberg boundary.

use nalgebra::Matrix3;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::isometry::SU21Element;
use crate::linalg::{c, normalize_phase, r, vec_norm, Mat3, Vec3, C64, I};

/// Relative tolerance below which a vector is treated as null.
pub const NULL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FormKind {
    /// `diag(1, 1, -1)`: the ball model.
    First,
    /// Antidiagonal form: the Siegel domain model.
    Second,
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PointClass {
    Negative,
    Null,
    Positive,
}

/// A Hermitian form of signature (2,1) together with a change of basis `D`
/// such that `<z,w> = (Dw)^* diag(1,1,-1) (Dz)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermitianForm {
    matrix: Mat3,
    kind: FormKind,
    to_first: Mat3,
}

/// The fixed Cayley matrix `C` with `C^* J1 C = J2`.
pub fn cayley() -> Mat3 {
    let h = r(std::f64::consts::FRAC_1_SQRT_2);
    Mat3::new(h, r(0.0), h, r(0.0), r(1.0), r(0.0), h, r(0.0), -h)
}

impl HermitianForm {
    pub fn first() -> Self {
        let j = crate::linalg::diag(r(1.0), r(1.0), r(-1.0));
        Self { matrix: j, kind: FormKind::First, to_first: Mat3::identity() }
    }

    pub fn second() -> Self {
        let mut j = Mat3::zeros();
        j[(0, 2)] = r(1.0);
        j[(1, 1)] = r(1.0);
        j[(2, 0)] = r(1.0);
        Self { matrix: j, kind: FormKind::Second, to_first: cayley() }
    }

    /// Any Hermitian matrix with eigenvalue signs (+,+,-).
    pub fn custom(matrix: Mat3) -> Result<Self> {
        if (matrix - matrix.adjoint()).iter().any(|z| z.norm() > 1e-12) {
            return Err(Error::BadForm("not Hermitian".into()));
        }
        let eig = matrix.symmetric_eigen();
        let mut idx = [0usize, 1, 2];
        idx.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        let lam = idx.map(|i| eig.eigenvalues[i]);
        let scale = 1e-12 * lam.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        if !(lam[0] > scale && lam[1] > scale && lam[2] < -scale) {
            return Err(Error::BadForm(format!("eigenvalues {lam:?}")));
        }
        let mut d = Mat3::zeros();
        for (row, &i) in idx.iter().enumerate() {
            let s = lam[row].abs().sqrt();
            for col in 0..3 {
                d[(row, col)] = eig.eigenvectors[(col, i)].conj() * s;
            }
        }
        Ok(Self { matrix, kind: FormKind::Custom, to_first: d })
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.matrix
    }

    pub fn kind(&self) -> FormKind {
        self.kind
    }

    /// Coordinates in which this form becomes `diag(1,1,-1)`.
    pub fn to_first_coords(&self, z: &Vec3) -> Vec3 {
        self.to_first * z
    }

    pub fn inner(&self, z: &Vec3, w: &Vec3) -> C64 {
        (w.adjoint() * self.matrix * z)[(0, 0)]
    }

    pub fn norm_sq(&self, z: &Vec3) -> f64 {
        self.inner(z, z).re
    }

    pub fn classify(&self, z: &Vec3) -> PointClass {
        let n = vec_norm(z);
        let q = self.norm_sq(z);
        if q.abs() <= NULL_TOL * n * n {
            PointClass::Null
        } else if q < 0.0 {
            PointClass::Negative
        } else {
            PointClass::Positive
        }
    }
}

/// `w^* J z` for the given form.
pub fn inner(form: &HermitianForm, z: &Vec3, w: &Vec3) -> C64 {
    form.inner(z, w)
}

/// A point of complex projective space with its normalized representative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjPoint {
    rep: Vec3,
    class: PointClass,
}

impl ProjPoint {
    pub fn new(form: &HermitianForm, v: Vec3) -> Result<Self> {
        let rep = normalize_phase(&v).ok_or(Error::ZeroVector)?;
        Ok(Self { class: form.classify(&rep), rep })
    }

    /// Builds a point whose class is decided with a looser null tolerance,
    /// for vectors produced by eigensolvers.
    pub fn with_null_tol(form: &HermitianForm, v: Vec3, tol: f64) -> Result<Self> {
        let rep = normalize_phase(&v).ok_or(Error::ZeroVector)?;
        let q = form.norm_sq(&rep);
        let class = if q.abs() <= tol {
            PointClass::Null
        } else if q < 0.0 {
            PointClass::Negative
        } else {
            PointClass::Positive
        };
        Ok(Self { rep, class })
    }

    pub fn rep(&self) -> &Vec3 {
        &self.rep
    }

    pub fn class(&self) -> PointClass {
        self.class
    }

    /// Projective equality up to a nonzero scalar.
    pub fn approx_eq(&self, other: &ProjPoint, tol: f64) -> bool {
        let h = (other.rep.adjoint() * self.rep)[(0, 0)];
        let phase = if h.norm() > 0.0 { h / h.norm() } else { r(1.0) };
        vec_norm(&(self.rep - other.rep * phase)) <= tol
    }
}

/// `sinh^2(d/2)` from the 2×2 minors of `z` and `w` in first-form coordinates,
/// which keeps full relative precision for nearby points.
fn sinh_sq_half(form: &HermitianForm, z: &Vec3, w: &Vec3) -> f64 {
    let a = form.to_first_coords(z);
    let b = form.to_first_coords(w);
    let m = |i: usize, j: usize| (a[i] * b[j] - a[j] * b[i]).norm_sqr();
    let num = m(0, 2) + m(1, 2) - m(0, 1);
    let den = form.norm_sq(z) * form.norm_sq(w);
    (num / den).max(0.0)
}

pub fn bergman_distance(form: &HermitianForm, p: &ProjPoint, q: &ProjPoint) -> Result<f64> {
    for x in [p, q] {
        if x.class != PointClass::Negative {
            return Err(Error::NonInteriorPoint(x.class));
        }
    }
    Ok(2.0 * sinh_sq_half(form, &p.rep, &q.rep).sqrt().asinh())
}

/// Default tolerance of [`bisector_side`].
pub const BISECTOR_TOL: f64 = 1e-9;

/// Sign of `d(x,z) - d(x,w)`.
pub fn bisector_side(form: &HermitianForm, z: &ProjPoint, w: &ProjPoint, x: &ProjPoint) -> Result<i8> {
    bisector_side_tol(form, z, w, x, BISECTOR_TOL)
}

pub fn bisector_side_tol(form: &HermitianForm, z: &ProjPoint, w: &ProjPoint, x: &ProjPoint, tol: f64) -> Result<i8> {
    let diff = bergman_distance(form, x, z)? - bergman_distance(form, x, w)?;
    Ok(if diff.abs() <= tol {
        0
    } else if diff < 0.0 {
        -1
    } else {
        1
    })
}

/// A finite point `(ζ, v)` of the Heisenberg group.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HeisenbergPoint {
    pub zeta: C64,
    pub v: f64,
}

/// A point of the boundary in horospherical coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum BoundaryPoint {
    Finite(HeisenbergPoint),
    Infinity,
}

impl HeisenbergPoint {
    pub const ORIGIN: Self = Self { zeta: C64 { re: 0.0, im: 0.0 }, v: 0.0 };

    pub fn new(zeta: C64, v: f64) -> Self {
        Self { zeta, v }
    }

    pub fn inverse(&self) -> Self {
        Self { zeta: -self.zeta, v: -self.v }
    }

    /// The Cygan norm `||ζ|^2 - iv|^{1/2}`.
    pub fn cygan_norm(&self) -> f64 {
        c(self.zeta.norm_sqr(), -self.v).norm().sqrt()
    }
}

pub fn heisenberg_mul(a: &HeisenbergPoint, b: &HeisenbergPoint) -> HeisenbergPoint {
    HeisenbergPoint { zeta: a.zeta + b.zeta, v: a.v + b.v + 2.0 * (a.zeta * b.zeta.conj()).im }
}

pub fn cygan_distance(a: &HeisenbergPoint, b: &HeisenbergPoint) -> f64 {
    heisenberg_mul(&a.inverse(), b).cygan_norm()
}

/// The Heisenberg translation `T(ζ, v)`, preserving the second form.
pub fn unipotent_translation(zeta: C64, v: f64) -> SU21Element {
    let s2 = std::f64::consts::SQRT_2;
    let m = Matrix3::new(
        r(1.0),
        -zeta.conj() * s2,
        r(-zeta.norm_sqr()) + I * v,
        r(0.0),
        r(1.0),
        zeta * s2,
        r(0.0),
        r(0.0),
        r(1.0),
    );
    SU21Element::from_parts_unchecked(m, HermitianForm::second())
}

/// `[-|ζ|^2 + iv, √2 ζ, 1]` in the second form.
pub fn boundary_from_heisenberg(h: &HeisenbergPoint) -> ProjPoint {
    boundary_point(&BoundaryPoint::Finite(*h))
}

pub fn boundary_point(b: &BoundaryPoint) -> ProjPoint {
    let v = match b {
        BoundaryPoint::Finite(h) => Vec3::new(c(-h.zeta.norm_sqr(), h.v), h.zeta * std::f64::consts::SQRT_2, r(1.0)),
        BoundaryPoint::Infinity => Vec3::new(r(1.0), r(0.0), r(0.0)),
    };
    let rep = normalize_phase(&v).expect("nonzero");
    ProjPoint { rep, class: PointClass::Null }
}

/// Inverse of [`boundary_point`] for null points of the second form.
pub fn heisenberg_from_boundary(p: &ProjPoint) -> Result<BoundaryPoint> {
    if p.class != PointClass::Null {
        return Err(Error::NonInteriorPoint(p.class));
    }
    let z = p.rep;
    if z[2].norm() <= 1e-12 {
        return Ok(BoundaryPoint::Infinity);
    }
    let z1 = z[0] / z[2];
    let z2 = z[1] / z[2];
    Ok(BoundaryPoint::Finite(HeisenbergPoint { zeta: z2 / std::f64::consts::SQRT_2, v: z1.im }))
}
