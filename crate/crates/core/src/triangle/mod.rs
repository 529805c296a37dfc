//! Complex hyperbolic (p,q,r;α) triangle groups built from Gram data.

mod traces;
mod words;

pub use traces::*;
pub use words::*;

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::cxcore::HermitianForm;
use crate::error::{Error, Result};
use crate::isometry::SU21Element;
use crate::linalg::{r, Mat3, Vec3, C64};

/// Order of a vertex of the triangle; `Infinite` means an ideal vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Order {
    Finite(u32),
    Infinite,
}

impl Order {
    pub fn recip(self) -> f64 {
        match self {
            Order::Finite(n) => 1.0 / n as f64,
            Order::Infinite => 0.0,
        }
    }

    /// `cos(π / 2n)`, or 1 for an ideal vertex.
    pub fn half_angle_cos(self) -> f64 {
        (PI * self.recip() / 2.0).cos()
    }

    /// `cos(π / n)`, or 1 for an ideal vertex.
    pub fn full_angle_cos(self) -> f64 {
        (PI * self.recip()).cos()
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(n) => write!(f, "{n}"),
            Order::Infinite => write!(f, "inf"),
        }
    }
}

impl FromStr for Order {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "∞" | "infinity" => Ok(Order::Infinite),
            t => t.parse::<u32>().map(Order::Finite).map_err(|_| Error::InvalidParams(format!("bad order {s:?}"))),
        }
    }
}

impl Serialize for Order {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Order::Finite(n) => s.serialize_u32(*n),
            Order::Infinite => s.serialize_str("inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TriangleParams {
    pub p: Order,
    pub q: Order,
    pub r: Order,
    pub alpha: f64,
}

impl TriangleParams {
    pub fn new(p: Order, q: Order, r: Order, alpha: f64) -> Result<Self> {
        for o in [p, q, r] {
            if let Order::Finite(n) = o {
                if n < 2 {
                    return Err(Error::InvalidParams(format!("order {n} < 2")));
                }
            }
        }
        if !(p <= q && q <= r) {
            return Err(Error::InvalidParams("orders must satisfy p <= q <= r".into()));
        }
        if p.recip() + q.recip() + r.recip() >= 1.0 {
            return Err(Error::InvalidParams("1/p + 1/q + 1/r must be < 1".into()));
        }
        if !alpha.is_finite() {
            return Err(Error::InvalidParams("alpha must be finite".into()));
        }
        Ok(Self { p, q, r, alpha: alpha.rem_euclid(2.0 * PI) })
    }

    pub fn finite(p: u32, q: u32, r: u32, alpha: f64) -> Result<Self> {
        Self::new(Order::Finite(p), Order::Finite(q), Order::Finite(r), alpha)
    }

    /// The (3,3,n;α) family.
    pub fn three_three(n: u32, alpha: f64) -> Result<Self> {
        Self::finite(3, 3, n, alpha)
    }

    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        Self::new(self.p, self.q, self.r, alpha)
    }

    /// `(c1, c2, c3) = (cos π/2p, cos π/2q, cos π/2r)`.
    pub fn half_cosines(&self) -> [f64; 3] {
        [self.p.half_angle_cos(), self.q.half_angle_cos(), self.r.half_angle_cos()]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Convention {
    /// Moduli `(|G12|,|G23|,|G31|) = (c1, c3, c2)` with half-angle cosines.
    HalfAngle,
    /// Moduli `(cos π/r, cos π/p, cos π/q)`, giving the pairwise products
    /// the abstract orders of the presentation.
    RelationEnforcing,
}

impl Convention {
    pub fn name(&self) -> &'static str {
        match self {
            Convention::HalfAngle => "half-angle",
            Convention::RelationEnforcing => "relation-enforcing",
        }
    }
}

impl FromStr for Convention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "half-angle" => Ok(Convention::HalfAngle),
            "relation-enforcing" | "relation" => Ok(Convention::RelationEnforcing),
            _ => Err(Error::InvalidParams(format!("unknown convention {s:?}"))),
        }
    }
}

/// Moduli `(|G12|, |G23|, |G31|)` under a convention.
pub fn moduli(params: &TriangleParams, convention: Convention) -> [f64; 3] {
    match convention {
        Convention::HalfAngle => {
            let [c1, c2, c3] = params.half_cosines();
            [c1, c3, c2]
        }
        Convention::RelationEnforcing => {
            [params.r.full_angle_cos(), params.p.full_angle_cos(), params.q.full_angle_cos()]
        }
    }
}

/// Unit-diagonal Hermitian matrix `G_ij = <l_i, l_j>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GramTriple {
    pub matrix: Mat3,
    pub convention: Option<Convention>,
}

impl GramTriple {
    pub fn g(&self, i: usize, j: usize) -> C64 {
        self.matrix[(i - 1, j - 1)]
    }

    pub fn determinant(&self) -> f64 {
        self.matrix.determinant().re
    }

    /// `G12 G23 G31`.
    pub fn triple_product(&self) -> C64 {
        self.g(1, 2) * self.g(2, 3) * self.g(3, 1)
    }
}

fn hermitian_gram(m12: C64, m23: C64, m31: C64) -> Mat3 {
    let one = r(1.0);
    Mat3::new(one, m12, m31.conj(), m12.conj(), one, m23, m31, m23.conj(), one)
}

/// Gram matrix with real positive `G12`, `G23` and `G31 = |G31| e^{-iα}`.
pub fn gram_matrix(params: &TriangleParams, convention: Convention) -> Result<GramTriple> {
    let [m12, m23, m31] = moduli(params, convention);
    let g = GramTriple {
        matrix: hermitian_gram(r(m12), r(m23), C64::from_polar(m31, -params.alpha)),
        convention: Some(convention),
    };
    let det = 1.0 - m12 * m12 - m23 * m23 - m31 * m31 + 2.0 * m12 * m23 * m31 * params.alpha.cos();
    if det >= -1e-12 {
        return Err(Error::ExistenceViolated { det });
    }
    Ok(g)
}

/// Gram triple from arbitrary off-diagonal entries `(G12, G23, G31)`.
pub fn gram_from_entries(g12: C64, g23: C64, g31: C64) -> GramTriple {
    GramTriple { matrix: hermitian_gram(g12, g23, g31), convention: None }
}

/// Vectors `l_k` in the first-form model with `<l_i, l_j> = G_ij`.
pub fn realize_polar_vectors(g: &GramTriple) -> Result<[Vec3; 3]> {
    // With L = [l1 l2 l3] we need L^* J L = G^t.
    let h = g.matrix.transpose();
    let eig = h.symmetric_eigen();
    let mut idx = [0usize, 1, 2];
    idx.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let lam = idx.map(|i| eig.eigenvalues[i]);
    if !(lam[0] > 1e-12 && lam[1] > 1e-12 && lam[2] < -1e-12) {
        return Err(Error::WrongSignature { eigenvalues: lam });
    }
    let mut l = Mat3::zeros();
    for (row, &i) in idx.iter().enumerate() {
        let v = eig.eigenvectors.column(i).into_owned();
        let lead = v.iter().find(|z| z.norm() > 1e-12).copied().unwrap_or(r(1.0));
        let phase = lead.conj() / lead.norm();
        let s = lam[row].abs().sqrt();
        for col in 0..3 {
            l[(row, col)] = (v[col] * phase).conj() * s;
        }
    }
    Ok([0, 1, 2].map(|k| l.column(k).into_owned()))
}

/// The complex reflection of order two fixing the line polar to `l`.
pub fn inversion(form: &HermitianForm, l: &Vec3) -> Result<SU21Element> {
    let n = form.inner(l, l);
    if n.re <= 1e-12 {
        return Err(Error::NotPositiveVector { norm: n.re });
    }
    let dual = l.adjoint() * form.matrix();
    let m = l * dual * r(2.0 / n.re) - Mat3::identity();
    SU21Element::new(m, *form)
}

/// `arg(<l3,l2> <l1,l3> <l2,l1>)` in `[0, 2π)`.
pub fn angular_invariant(form: &HermitianForm, l: &[Vec3; 3]) -> Result<f64> {
    let h = |a: usize, b: usize| form.inner(&l[a], &l[b]);
    let factors = [h(2, 1), h(0, 2), h(1, 0)];
    if factors.iter().any(|z| z.norm() < 1e-12) {
        return Err(Error::AsymptoticDegenerate);
    }
    let prod = factors[0] * factors[1] * factors[2];
    let a = prod.arg().rem_euclid(2.0 * PI);
    Ok(if a >= 2.0 * PI { 0.0 } else { a })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TriangleRep {
    pub params: Option<TriangleParams>,
    pub gram: GramTriple,
    pub polar: [Vec3; 3],
    pub inversions: [SU21Element; 3],
}

impl TriangleRep {
    pub fn from_gram(gram: GramTriple) -> Result<Self> {
        let form = HermitianForm::first();
        let polar = realize_polar_vectors(&gram)?;
        let inversions = [inversion(&form, &polar[0])?, inversion(&form, &polar[1])?, inversion(&form, &polar[2])?];
        Ok(Self { params: None, gram, polar, inversions })
    }

    pub fn convention(&self) -> Option<Convention> {
        self.gram.convention
    }

    /// `I_k` for `k` in 1..=3.
    pub fn generator(&self, k: u8) -> &SU21Element {
        &self.inversions[k as usize - 1]
    }
}

pub fn build_representation(params: &TriangleParams, convention: Convention) -> Result<TriangleRep> {
    let gram = gram_matrix(params, convention)?;
    let mut rep = TriangleRep::from_gram(gram)?;
    rep.params = Some(*params);
    Ok(rep)
}
