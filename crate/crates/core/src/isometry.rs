//! Elements of SU(2,1): classification by the Goldman trace function, fixed
//! boundary points and length invariants.

use serde::Serialize;

use crate::cxcore::{HermitianForm, PointClass, ProjPoint};
use crate::error::{Error, Result};
use crate::linalg::{cluster_eigenvalues, eigenvalues, frobenius, null_space, omega, r, vec_norm, Mat3, C64};

/// Default (unscaled) tolerance of [`classify`].
pub const DEFAULT_EPS: f64 = 1e-8;
const UNITARY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SU21Element {
    matrix: Mat3,
    form: HermitianForm,
}

impl SU21Element {
    /// Validates `M^* J M = J` and `det M = 1`, relative to `max(1, ||M||^2)`
    /// so long products remain admissible.
    pub fn new(matrix: Mat3, form: HermitianForm) -> Result<Self> {
        let scale = frobenius(&matrix).powi(2).max(1.0);
        let j = form.matrix();
        let residual = frobenius(&(matrix.adjoint() * j * matrix - j));
        if residual > UNITARY_TOL * scale {
            return Err(Error::NotUnitary { residual });
        }
        let det = matrix.determinant();
        if (det - r(1.0)).norm() > UNITARY_TOL * scale.powf(1.5) {
            return Err(Error::BadDeterminant { det });
        }
        Ok(Self { matrix, form })
    }

    pub(crate) fn from_parts_unchecked(matrix: Mat3, form: HermitianForm) -> Self {
        Self { matrix, form }
    }

    pub fn identity(form: HermitianForm) -> Self {
        Self { matrix: Mat3::identity(), form }
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.matrix
    }

    pub fn form(&self) -> &HermitianForm {
        &self.form
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    pub fn mul(&self, other: &SU21Element) -> SU21Element {
        Self { matrix: self.matrix * other.matrix, form: self.form }
    }

    /// `J^{-1} M^* J`.
    pub fn inverse(&self) -> SU21Element {
        let j = self.form.matrix();
        let j_inv = j.try_inverse().expect("nondegenerate form");
        Self { matrix: j_inv * self.matrix.adjoint() * j, form: self.form }
    }

    pub fn pow(&self, n: u32) -> SU21Element {
        let mut acc = Mat3::identity();
        let mut base = self.matrix;
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc *= base;
            }
            base = base * base;
            k >>= 1;
        }
        Self { matrix: acc, form: self.form }
    }

    pub fn conjugate_by(&self, h: &SU21Element) -> SU21Element {
        h.mul(self).mul(&h.inverse())
    }

    pub fn apply(&self, p: &ProjPoint) -> Result<ProjPoint> {
        let v = self.matrix * p.rep();
        if p.class() == PointClass::Null {
            ProjPoint::with_null_tol(&self.form, v, 1e-8)
        } else {
            ProjPoint::new(&self.form, v)
        }
    }

    /// Multiplies by the scalar `ω^k`, another lift of the same isometry.
    pub fn relift(&self, k: u32) -> SU21Element {
        let w = omega().powu(k % 3);
        Self { matrix: self.matrix * w, form: self.form }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BoundaryKind {
    Unipotent,
    OtherBoundary,
    /// Only the trace was available, so no refinement was attempted.
    Unrefined,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum IsometryClass {
    Hyperbolic,
    RegularElliptic,
    Boundary(BoundaryKind),
}

impl IsometryClass {
    pub fn label(&self) -> &'static str {
        match self {
            IsometryClass::Hyperbolic => "hyperbolic",
            IsometryClass::RegularElliptic => "regular-elliptic",
            IsometryClass::Boundary(BoundaryKind::Unipotent) => "unipotent",
            IsometryClass::Boundary(_) => "boundary",
        }
    }

    pub fn is_boundary(&self) -> bool {
        matches!(self, IsometryClass::Boundary(_))
    }
}

/// `|z|^4 - 8 Re(z^3) + 18 |z|^2 - 27`.
pub fn goldman_f(z: C64) -> f64 {
    let n = z.norm_sqr();
    n * n - 8.0 * (z * z * z).re + 18.0 * n - 27.0
}

/// `2 e^{iθ} + e^{-2iθ}`, a point of the zero locus of [`goldman_f`].
pub fn deltoid_point(theta: f64) -> C64 {
    C64::from_polar(2.0, theta) + C64::from_polar(1.0, -2.0 * theta)
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(Error::BadTolerance(eps))
    }
}

/// Trichotomy from the trace alone; the threshold is `eps (1 + |tr|)^4`.
pub fn classify_trace(tr: C64, eps: f64) -> Result<IsometryClass> {
    check_eps(eps)?;
    let f = goldman_f(tr);
    let band = eps * (1.0 + tr.norm()).powi(4);
    Ok(if f > band {
        IsometryClass::Hyperbolic
    } else if f < -band {
        IsometryClass::RegularElliptic
    } else {
        IsometryClass::Boundary(BoundaryKind::Unrefined)
    })
}

pub fn classify(g: &SU21Element, eps: f64) -> Result<IsometryClass> {
    match classify_trace(g.trace(), eps)? {
        IsometryClass::Boundary(_) => Ok(IsometryClass::Boundary(if is_unipotent(g) {
            BoundaryKind::Unipotent
        } else {
            BoundaryKind::OtherBoundary
        })),
        other => Ok(other),
    }
}

pub fn classify_default(g: &SU21Element) -> IsometryClass {
    classify(g, DEFAULT_EPS).expect("default tolerance is positive")
}

/// True when `ω̄ M` is unipotent for some cube root of unity `ω`.
pub fn is_unipotent(g: &SU21Element) -> bool {
    let t = g.trace() / 3.0;
    let m = g.matrix();
    let norm = frobenius(m);
    (0..3).any(|k| {
        let w = omega().powu(k);
        if (t - w).norm() > 1e-8 {
            return false;
        }
        let n = m * w.conj() - Mat3::identity();
        frobenius(&(n * n * n)) <= 1e-8 * norm.powi(3)
    })
}

/// Null eigenvectors of `g`, projectivized. A two-dimensional eigenspace on
/// which the form is indefinite contains a whole circle of fixed boundary
/// points and is reported as [`Error::FixedCircle`].
pub fn fixed_boundary_points(g: &SU21Element) -> Result<Vec<ProjPoint>> {
    let m = g.matrix();
    let form = g.form();
    let scale = frobenius(m);
    let mut out: Vec<ProjPoint> = Vec::new();
    // A defective eigenvalue of multiplicity k is perturbed by about eps^{1/k},
    // hence the generous clustering radius.
    for (lambda, _) in cluster_eigenvalues(&eigenvalues(m), 1e-4 * scale) {
        let shifted = m - Mat3::identity() * lambda;
        let basis = null_space(&shifted, 1e-6 * scale);
        let candidates = match basis.len() {
            0 => continue,
            1 => vec![basis[0]],
            2 => {
                let h = |a: usize, b: usize| form.inner(&basis[b], &basis[a]);
                let restricted = nalgebra::Matrix2::new(h(0, 0), h(0, 1), h(1, 0), h(1, 1));
                let eig = restricted.symmetric_eigen();
                let (e0, e1) = (eig.eigenvalues[0], eig.eigenvalues[1]);
                let tol = 1e-7;
                if e0 * e1 < 0.0 && e0.abs() > tol && e1.abs() > tol {
                    return Err(Error::FixedCircle);
                }
                let k = if e0.abs() < e1.abs() { 0 } else { 1 };
                if eig.eigenvalues[k].abs() > tol {
                    continue;
                }
                let col = eig.eigenvectors.column(k);
                vec![basis[0] * col[0] + basis[1] * col[1]]
            }
            _ => return Err(Error::FixedCircle),
        };
        for v in candidates {
            let n = vec_norm(&v);
            if form.norm_sq(&v).abs() <= 1e-7 * n * n {
                let p = ProjPoint::with_null_tol(form, v, 1e-7)?;
                if !out.iter().any(|q| q.approx_eq(&p, 1e-6)) {
                    out.push(p);
                }
            }
        }
    }
    if out.is_empty() {
        Err(Error::NoNullEigenvector)
    } else {
        Ok(out)
    }
}

/// `2 ln |λ_max|`.
pub fn translation_length(g: &SU21Element) -> Result<f64> {
    if classify_default(g) != IsometryClass::Hyperbolic {
        return Err(Error::NotHyperbolic);
    }
    let max = eigenvalues(g.matrix()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    Ok(2.0 * max.ln())
}

/// `d(o, g^n o) / n`. Since `<g^n o, g^n o> = <o, o>`, only `|<g^n o, o>|` is
/// needed; it is accumulated in log scale to survive large `n`.
pub fn stable_norm_estimate(g: &SU21Element, basepoint: &ProjPoint, n: u32) -> Result<f64> {
    if n == 0 {
        return Err(Error::ZeroIterations);
    }
    if basepoint.class() != PointClass::Negative {
        return Err(Error::NonInteriorPoint(basepoint.class()));
    }
    let o = *basepoint.rep();
    let form = g.form();
    let mut v = o;
    let mut log_scale = 0.0;
    for _ in 0..n {
        v = g.matrix() * v;
        let s = vec_norm(&v);
        v /= r(s);
        log_scale += s.ln();
    }
    let ln_x = log_scale + form.inner(&v, &o).norm().ln() - form.norm_sq(&o).abs().ln();
    let half = if ln_x > 20.0 { ln_x + std::f64::consts::LN_2 } else { ln_x.exp().max(1.0).acosh() };
    Ok(2.0 * half / n as f64)
}

/// Deterministic building blocks of SU(2,1) in the second-form model.
pub mod generators {
    use super::*;
    use crate::linalg::diag;

    /// `diag(λ, 1, 1/λ)`, hyperbolic for `λ > 1`.
    pub fn dilation(lambda: f64) -> SU21Element {
        SU21Element::from_parts_unchecked(diag(r(lambda), r(1.0), r(1.0 / lambda)), HermitianForm::second())
    }

    /// `diag(e^{iθ}, e^{-2iθ}, e^{iθ})`.
    pub fn rotation(theta: f64) -> SU21Element {
        let u = C64::from_polar(1.0, theta);
        SU21Element::from_parts_unchecked(diag(u, u.conj() * u.conj(), u), HermitianForm::second())
    }

    /// The involution exchanging `0` and `∞`.
    pub fn swap() -> SU21Element {
        let mut m = Mat3::zeros();
        m[(0, 2)] = r(1.0);
        m[(1, 1)] = r(-1.0);
        m[(2, 0)] = r(1.0);
        SU21Element::from_parts_unchecked(m, HermitianForm::second())
    }
}

#[cfg(test)]
mod tests {
    use super::generators::*;
    use super::*;
    use crate::cxcore::bergman_distance;
    use crate::cxcore::unipotent_translation;
    use crate::linalg::{c, diag, real_vec3};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_element(rng: &mut impl Rng) -> SU21Element {
        let mut g = SU21Element::identity(HermitianForm::second());
        for _ in 0..3 {
            let t =
                unipotent_translation(c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)), rng.gen_range(-1.0..1.0));
            g = g.mul(&t).mul(&rotation(rng.gen_range(0.0..6.3))).mul(&dilation(rng.gen_range(0.5..2.0))).mul(&swap());
        }
        g
    }

    #[test]
    fn goldman_examples() {
        assert_eq!(goldman_f(r(3.0)), 0.0);
        assert_eq!(goldman_f(r(0.0)), -27.0);
        assert!((goldman_f(r(3.5)) - 0.5625).abs() < 1e-12);
        assert!((deltoid_point(0.0) - r(3.0)).norm() < 1e-15);
        assert!((deltoid_point(std::f64::consts::PI) - r(-1.0)).norm() < 1e-15);
        let t = 2.0 * std::f64::consts::PI / 3.0;
        assert!((deltoid_point(t) - omega() * 3.0).norm() < 1e-14);
    }

    #[test]
    fn classify_examples() {
        let h = dilation(2.0);
        assert_eq!(classify_default(&h), IsometryClass::Hyperbolic);
        let u = unipotent_translation(r(0.0), 1.0);
        assert_eq!(classify_default(&u), IsometryClass::Boundary(BoundaryKind::Unipotent));
        let w = omega();
        let e = SU21Element::new(diag(r(1.0), w, w.conj()), HermitianForm::first()).unwrap();
        assert_eq!(classify_default(&e), IsometryClass::RegularElliptic);
        assert_eq!(classify(&h, 0.0), Err(Error::BadTolerance(0.0)));
        assert_eq!(classify(&h, -1.0), Err(Error::BadTolerance(-1.0)));
    }

    #[test]
    fn complex_reflection_is_other_boundary() {
        // diag(e^{iθ}, e^{-2iθ}, e^{iθ}) has a repeated eigenvalue but is not unipotent.
        let g = rotation(0.4);
        assert_eq!(classify_default(&g), IsometryClass::Boundary(BoundaryKind::OtherBoundary));
    }

    #[test]
    fn validation_rejects_non_unitary() {
        let m = diag(r(2.0), r(1.0), r(1.0));
        assert!(matches!(SU21Element::new(m, HermitianForm::first()), Err(Error::NotUnitary { .. })));
        let m = diag(C64::from_polar(1.0, 0.3), r(1.0), r(1.0));
        assert!(matches!(SU21Element::new(m, HermitianForm::first()), Err(Error::BadDeterminant { .. })));
    }

    #[test]
    fn fixed_points_examples() {
        let j2 = HermitianForm::second();
        let pts = fixed_boundary_points(&dilation(2.0)).unwrap();
        assert_eq!(pts.len(), 2);
        for e in [real_vec3(1.0, 0.0, 0.0), real_vec3(0.0, 0.0, 1.0)] {
            let p = ProjPoint::new(&j2, e).unwrap();
            assert!(pts.iter().any(|q| q.approx_eq(&p, 1e-12)));
        }
        let pts = fixed_boundary_points(&unipotent_translation(r(0.0), 1.0)).unwrap();
        assert_eq!(pts.len(), 1);
        assert!(pts[0].approx_eq(&ProjPoint::new(&j2, real_vec3(1.0, 0.0, 0.0)).unwrap(), 1e-12));
        let e = SU21Element::new(diag(r(1.0), omega(), omega().conj()), HermitianForm::first()).unwrap();
        assert_eq!(fixed_boundary_points(&e), Err(Error::NoNullEigenvector));
    }

    #[test]
    fn fixed_points_are_equivariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..25 {
            let g = random_element(&mut rng);
            for h in [dilation(1.7), unipotent_translation(c(0.3, -0.2), 0.7)] {
                let conj = h.conjugate_by(&g);
                let got = fixed_boundary_points(&conj).unwrap();
                let want: Vec<ProjPoint> =
                    fixed_boundary_points(&h).unwrap().iter().map(|p| g.apply(p).unwrap()).collect();
                assert_eq!(got.len(), want.len());
                for p in &want {
                    assert!(got.iter().any(|q| q.approx_eq(p, 1e-6)));
                }
            }
        }
    }

    #[test]
    fn translation_length_examples() {
        let h = dilation(2.0);
        let l = translation_length(&h).unwrap();
        assert!((l - 2.0 * 2f64.ln()).abs() < 1e-14);
        // Axis points z_s = (-s, 0, 1): d(z_1, h z_1) is the translation length.
        let j2 = HermitianForm::second();
        let z = ProjPoint::new(&j2, real_vec3(-1.0, 0.0, 1.0)).unwrap();
        let d = bergman_distance(&j2, &z, &h.apply(&z).unwrap()).unwrap();
        assert!((d - l).abs() < 1e-12);
        assert_eq!(translation_length(&unipotent_translation(r(0.0), 1.0)), Err(Error::NotHyperbolic));
        assert_eq!(translation_length(&SU21Element::identity(j2)), Err(Error::NotHyperbolic));
    }

    #[test]
    fn stable_norm_examples() {
        let j2 = HermitianForm::second();
        let o = ProjPoint::new(&j2, real_vec3(-1.0, 0.0, 1.0)).unwrap();
        let est = stable_norm_estimate(&dilation(2.0), &o, 200).unwrap();
        assert!((est - 2.0 * 2f64.ln()).abs() < 0.02);
        // T(0,1)^n o = (-1 + in, 0, 1), so cosh(d/2) = sqrt(4 + n^2) / 2.
        let t = unipotent_translation(r(0.0), 1.0);
        for n in [1u32, 200, 2000] {
            let est = stable_norm_estimate(&t, &o, n).unwrap();
            let exact = 2.0 * ((4.0 + (n as f64).powi(2)).sqrt() / 2.0).acosh() / n as f64;
            assert!((est - exact).abs() < 1e-9, "{est} vs {exact}");
        }
        assert!(stable_norm_estimate(&t, &o, 2000).unwrap() < 0.01);
        assert_eq!(stable_norm_estimate(&SU21Element::identity(j2), &o, 10).unwrap(), 0.0);
        assert_eq!(stable_norm_estimate(&dilation(2.0), &o, 0), Err(Error::ZeroIterations));
    }

    #[test]
    fn stable_norm_matches_translation_length_off_axis() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let j2 = HermitianForm::second();
        let o = ProjPoint::new(&j2, real_vec3(-1.0, 0.0, 1.0)).unwrap();
        for _ in 0..10 {
            let g = dilation(rng.gen_range(1.5..3.0)).conjugate_by(&random_element(&mut rng));
            let l = translation_length(&g).unwrap();
            let est = stable_norm_estimate(&g, &o, 400).unwrap();
            assert!((est - l).abs() < 0.05, "{est} vs {l}");
        }
    }

    proptest! {
        #[test]
        fn classification_is_conjugation_and_lift_invariant(seed in 0u64..10_000, lam in 1.05..3.0f64, th in 0.05..3.0f64) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let h = random_element(&mut rng);
            for g in [dilation(lam), rotation(th).mul(&unipotent_translation(r(0.0), 0.0)),
                      unipotent_translation(c(0.2, 0.5), -1.0)] {
                let base = classify_default(&g);
                prop_assert_eq!(classify_default(&g.conjugate_by(&h)), base);
                for k in 1..3 {
                    prop_assert_eq!(classify_default(&g.relift(k)), base);
                }
            }
        }

        #[test]
        fn goldman_f_is_omega_invariant(x in -5.0..5.0f64, y in -5.0..5.0f64) {
            let z = c(x, y);
            let f = goldman_f(z);
            prop_assert!((goldman_f(z * omega()) - f).abs() <= 1e-12 * (1.0 + f.abs()));
        }

        #[test]
        fn deltoid_is_zero_locus(theta in 0.0..6.3f64) {
            prop_assert!(goldman_f(deltoid_point(theta)).abs() < 1e-10);
        }

        #[test]
        fn translation_length_of_powers(seed in 0u64..10_000, lam in 1.1..2.0f64, n in 1u32..=5) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = dilation(lam).conjugate_by(&random_element(&mut rng));
            let l = translation_length(&g).unwrap();
            prop_assert!((translation_length(&g.pow(n)).unwrap() - n as f64 * l).abs() < 1e-8);
            prop_assert!((l - 2.0 * lam.ln()).abs() < 1e-9);
        }

        #[test]
        fn bergman_is_isometry_invariant(seed in 0u64..10_000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let j2 = HermitianForm::second();
            let g = random_element(&mut rng);
            let pt = |rng: &mut ChaCha8Rng| {
                let zeta = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                let u: f64 = rng.gen_range(0.1..2.0);
                let v = rng.gen_range(-1.0..1.0);
                ProjPoint::new(&j2, crate::linalg::vec3(c(-zeta.norm_sqr() - u, v), zeta * std::f64::consts::SQRT_2, r(1.0))).unwrap()
            };
            let (p, q) = (pt(&mut rng), pt(&mut rng));
            let d0 = bergman_distance(&j2, &p, &q).unwrap();
            let d1 = bergman_distance(&j2, &g.apply(&p).unwrap(), &g.apply(&q).unwrap()).unwrap();
            prop_assert!((d0 - d1).abs() < 1e-9);
        }
    }
}
