//! Small dense helpers for 3×3 complex matrices.

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type Mat3 = Matrix3<C64>;
pub type Vec3 = Vector3<C64>;

pub const I: C64 = C64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn r(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn vec3(a: C64, b: C64, d: C64) -> Vec3 {
    Vec3::new(a, b, d)
}

pub fn real_vec3(a: f64, b: f64, d: f64) -> Vec3 {
    Vec3::new(r(a), r(b), r(d))
}

pub fn diag(a: C64, b: C64, d: C64) -> Mat3 {
    Mat3::from_diagonal(&Vec3::new(a, b, d))
}

/// Primitive cube root of unity `e^{2πi/3}`.
pub fn omega() -> C64 {
    C64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0)
}

pub fn frobenius(m: &Mat3) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn vec_norm(v: &Vec3) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Rescales `v` to unit Euclidean norm with its first non-negligible
/// coordinate real and positive.
pub fn normalize_phase(v: &Vec3) -> Option<Vec3> {
    let n = vec_norm(v);
    if n == 0.0 || !n.is_finite() {
        return None;
    }
    let lead = v.iter().find(|z| z.norm() > 1e-12 * n).copied()?;
    let phase = lead.conj() / lead.norm();
    Some(v.map(|z| z * phase / n))
}

/// Eigenvalues of a complex 3×3 matrix (complex Schur form).
pub fn eigenvalues(m: &Mat3) -> [C64; 3] {
    let ev = m.eigenvalues().expect("complex Schur form is always triangular");
    [ev[0], ev[1], ev[2]]
}

/// Orthonormal basis of the numerical null space of `m`: right singular
/// vectors whose singular value is at most `tol`.
pub fn null_space(m: &Mat3, tol: f64) -> Vec<Vec3> {
    let svd = m.svd(false, true);
    let v_t = svd.v_t.expect("requested V^t");
    let mut out = Vec::new();
    for (i, s) in svd.singular_values.iter().enumerate() {
        if *s <= tol {
            let row = v_t.row(i);
            out.push(Vec3::new(row[0].conj(), row[1].conj(), row[2].conj()));
        }
    }
    out
}

/// Groups eigenvalues closer than `tol`; each cluster is represented by its
/// mean, which is far more accurate than the members for defective eigenvalues.
pub fn cluster_eigenvalues(ev: &[C64; 3], tol: f64) -> Vec<(C64, usize)> {
    let mut clusters: Vec<(C64, usize)> = Vec::new();
    let mut used = [false; 3];
    for i in 0..3 {
        if used[i] {
            continue;
        }
        let mut sum = ev[i];
        let mut count = 1;
        used[i] = true;
        for j in i + 1..3 {
            if !used[j] && (ev[j] - ev[i]).norm() <= tol {
                used[j] = true;
                sum += ev[j];
                count += 1;
            }
        }
        clusters.push((sum / count as f64, count));
    }
    clusters
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigenvalues_of_diagonal() {
        let m = diag(r(2.0), r(1.0), r(0.5));
        let mut ev: Vec<f64> = eigenvalues(&m).iter().map(|z| z.re).collect();
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((ev[0] - 0.5).abs() < 1e-14);
        assert!((ev[2] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn null_space_of_rank_one() {
        let mut m = Mat3::zeros();
        m[(0, 2)] = I;
        let ns = null_space(&m, 1e-12);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(vec_norm(&(m * v)) < 1e-14);
        }
    }

    #[test]
    fn phase_normalization() {
        let v = vec3(c(0.0, 0.0), c(0.0, 2.0), c(1.0, 0.0));
        let n = normalize_phase(&v).unwrap();
        assert!((vec_norm(&n) - 1.0).abs() < 1e-15);
        assert!(n[1].im.abs() < 1e-15 && n[1].re > 0.0);
    }
}
