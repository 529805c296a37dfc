//! Trace formulas for `W_A = I1 I3 I2 I3` and `W_B = I1 I2 I3`, the
//! (3,3,n) thresholds, α scans and the dictionary between conventions.

use std::f64::consts::PI;

use serde::Serialize;

use super::{build_representation, gram_from_entries, Convention, GramTriple, TriangleParams, TriangleRep};
use crate::error::{Error, Result};
use crate::isometry::{classify, classify_trace, goldman_f, IsometryClass, SU21Element, DEFAULT_EPS};
use crate::linalg::{frobenius, omega, r, Mat3, C64};

pub fn w_a(rep: &TriangleRep) -> SU21Element {
    let [i1, i2, i3] = &rep.inversions;
    i1.mul(i3).mul(i2).mul(i3)
}

pub fn w_b(rep: &TriangleRep) -> SU21Element {
    let [i1, i2, i3] = &rep.inversions;
    i1.mul(i2).mul(i3)
}

pub fn trace_wa_matrix(rep: &TriangleRep) -> C64 {
    w_a(rep).trace()
}

pub fn trace_wb_matrix(rep: &TriangleRep) -> C64 {
    w_b(rep).trace()
}

/// `16 c2^2 c3^2 + 4 c1^2 - 1 - 16 c1 c2 c3 cos α`.
pub fn trace_wa_formula(params: &TriangleParams) -> f64 {
    let [c1, c2, c3] = params.half_cosines();
    16.0 * c2 * c2 * c3 * c3 + 4.0 * c1 * c1 - 1.0 - 16.0 * c1 * c2 * c3 * params.alpha.cos()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ConstantSign {
    #[serde(rename = "+3")]
    Plus,
    #[serde(rename = "-3")]
    Minus,
}

impl ConstantSign {
    pub fn label(&self) -> &'static str {
        match self {
            ConstantSign::Plus => "+3",
            ConstantSign::Minus => "-3",
        }
    }
}

/// `8 c1 c2 c3 e^{iα} - 4(c1^2 + c2^2 + c3^2) ± 3`.
pub fn trace_wb_formula(params: &TriangleParams, sign: ConstantSign) -> C64 {
    let [c1, c2, c3] = params.half_cosines();
    let k = match sign {
        ConstantSign::Plus => 3.0,
        ConstantSign::Minus => -3.0,
    };
    C64::from_polar(8.0 * c1 * c2 * c3, params.alpha) - r(4.0 * (c1 * c1 + c2 * c2 + c3 * c3) - k)
}

/// Closed forms from expanding each inversion as `-Id + 2 l l^♯`.
pub mod closed_form {
    use super::*;

    /// `tr(I_i I_j) = 4 |G_ij|^2 - 1`.
    pub fn pair(g: &GramTriple, i: usize, j: usize) -> f64 {
        4.0 * g.g(i, j).norm_sqr() - 1.0
    }

    /// `tr(I1 I2 I3) = 3 - 4 Σ|G_ij|^2 + 8 conj(G12 G23 G31)`.
    pub fn w_b(g: &GramTriple) -> C64 {
        let s = g.g(1, 2).norm_sqr() + g.g(2, 3).norm_sqr() + g.g(3, 1).norm_sqr();
        r(3.0 - 4.0 * s) + g.triple_product().conj() * 8.0
    }

    /// `tr(I1 I3 I2 I3) = -1 + 4|G12|^2 + 16 |G13|^2 |G23|^2 - 16 Re(G12 G23 G31)`.
    pub fn w_a(g: &GramTriple) -> f64 {
        -1.0 + 4.0 * g.g(1, 2).norm_sqr() + 16.0 * g.g(1, 3).norm_sqr() * g.g(2, 3).norm_sqr()
            - 16.0 * g.triple_product().re
    }
}

/// Distance from `value` to `target` minimized over the cube-root-of-unity
/// lifts and complex conjugation.
pub fn distance_up_to_lift(value: C64, target: C64) -> f64 {
    let mut best = f64::INFINITY;
    for k in 0..3 {
        let w = omega().powu(k);
        for v in [value, value.conj()] {
            best = best.min((v * w - target).norm());
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WbAdjudication {
    pub matrix: C64,
    pub minus3: C64,
    pub plus3: C64,
    pub distance_minus3: f64,
    pub distance_plus3: f64,
    /// The unique variant within `1e-9`, if exactly one matches.
    pub matched: Option<ConstantSign>,
}

pub fn adjudicate_wb(rep: &TriangleRep, params: &TriangleParams) -> WbAdjudication {
    let matrix = trace_wb_matrix(rep);
    let minus3 = trace_wb_formula(params, ConstantSign::Minus);
    let plus3 = trace_wb_formula(params, ConstantSign::Plus);
    let dm = distance_up_to_lift(minus3, matrix);
    let dp = distance_up_to_lift(plus3, matrix);
    let tol = 1e-9 * (1.0 + matrix.norm());
    let matched = match (dm <= tol, dp <= tol) {
        (true, false) => Some(ConstantSign::Minus),
        (false, true) => Some(ConstantSign::Plus),
        _ => None,
    };
    WbAdjudication { matrix, minus3, plus3, distance_minus3: dm, distance_plus3: dp, matched }
}

fn check_n(n: u32) -> Result<f64> {
    if n < 4 {
        return Err(Error::BadN(n));
    }
    Ok((PI / (2.0 * n as f64)).cos())
}

/// `acos((2 c_n^2 + 1) / (3 c_n))`: below it no (3,3,n;α) triangle exists.
pub fn alpha_min(n: u32) -> Result<f64> {
    let c = check_n(n)?;
    Ok(((2.0 * c * c + 1.0) / (3.0 * c)).acos())
}

/// `acos((12 c_n^2 - 1) / (12 c_n))`: here `W_A` is unipotent.
pub fn alpha_zero(n: u32) -> Result<f64> {
    let c = check_n(n)?;
    Ok(((12.0 * c * c - 1.0) / (12.0 * c)).acos())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanRow {
    pub alpha: f64,
    pub trace_wa: C64,
    pub trace_wb: C64,
    pub goldman_f: f64,
    pub class: IsometryClass,
}

/// Classifies `W_A` along a grid of angular invariants for (3,3,n;α).
pub fn alpha_scan(n: u32, grid: &[f64]) -> Result<Vec<ScanRow>> {
    alpha_scan_with_eps(n, grid, DEFAULT_EPS)
}

pub fn alpha_scan_with_eps(n: u32, grid: &[f64], eps: f64) -> Result<Vec<ScanRow>> {
    let lo = alpha_min(n)?;
    let slack = 1e-12;
    grid.iter()
        .map(|&alpha| {
            if !(alpha >= lo - slack && alpha <= PI + slack) {
                return Err(Error::OutOfRange { alpha, lo, hi: PI });
            }
            let params = TriangleParams::three_three(n, alpha)?;
            // At the existence boundary the triangle degenerates; fall back to
            // the closed forms, which remain valid there.
            let (trace_wa, trace_wb, class) = match build_representation(&params, Convention::HalfAngle) {
                Ok(rep) => {
                    let wa = w_a(&rep);
                    (wa.trace(), trace_wb_matrix(&rep), classify(&wa, eps)?)
                }
                Err(Error::ExistenceViolated { .. }) => {
                    let t = r(trace_wa_formula(&params));
                    (t, trace_wb_formula(&params, ConstantSign::Plus), classify_trace(t, eps)?)
                }
                Err(e) => return Err(e),
            };
            Ok(ScanRow { alpha, trace_wa, trace_wb, goldman_f: goldman_f(trace_wa), class })
        })
        .collect()
}

/// Evenly spaced grid of `resolution` points on `[alpha_min(n), π]`.
pub fn alpha_grid(n: u32, resolution: usize) -> Result<Vec<f64>> {
    let lo = alpha_min(n)?;
    if resolution < 2 {
        return Err(Error::InvalidParams("grid resolution must be at least 2".into()));
    }
    let step = (PI - lo) / (resolution - 1) as f64;
    Ok((0..resolution).map(|k| if k + 1 == resolution { PI } else { lo + step * k as f64 }).collect())
}

fn rank(c: &IsometryClass) -> u8 {
    match c {
        IsometryClass::RegularElliptic => 0,
        IsometryClass::Boundary(_) => 1,
        IsometryClass::Hyperbolic => 2,
    }
}

/// First α at which the scan leaves the regular elliptic region, provided the
/// classes are monotone (elliptic, then boundary, then hyperbolic).
pub fn scan_transition(rows: &[ScanRow]) -> Option<f64> {
    if rows.windows(2).any(|w| rank(&w[1].class) < rank(&w[0].class)) {
        return None;
    }
    rows.iter().find(|row| row.class != IsometryClass::RegularElliptic).map(|row| row.alpha)
}

/// Phase β for which the relation-enforcing (3,3,n;β) triangle has the same
/// `tr W_A` as the half-angle (3,3,n;α) triangle. The branch
/// β ∈ [0, π] is returned.
pub fn trace_dictionary(n: u32, alpha: f64) -> Result<f64> {
    check_n(n)?;
    let tau = trace_wa_formula(&TriangleParams::three_three(n, alpha)?);
    let [m3, m1, m2] = relation_moduli(n);
    let cos = (4.0 * m3 * m3 + 16.0 * m1 * m1 * m2 * m2 - 1.0 - tau) / (16.0 * m1 * m2 * m3);
    if cos.abs() > 1.0 {
        return Err(Error::NoSolution { cos });
    }
    Ok(cos.acos())
}

/// Relation-enforcing moduli `(|G12|, |G23|, |G31|)` of (3,3,n).
fn relation_moduli(n: u32) -> [f64; 3] {
    [(PI / n as f64).cos(), 0.5, 0.5]
}

/// `tr W_A` for the relation-enforcing (3,3,n;β) triangle from its closed form.
pub fn trace_wa_relation(n: u32, beta: f64) -> f64 {
    let [m12, m23, m31] = relation_moduli(n);
    closed_form::w_a(&gram_from_entries(r(m12), r(m23), C64::from_polar(m31, -beta)))
}

/// Smallest `k <= max` with `g^k` a scalar matrix.
pub fn projective_order(g: &SU21Element, max: u32) -> Option<u32> {
    let mut acc = Mat3::identity();
    for k in 1..=max {
        acc *= g.matrix();
        let lambda = acc.trace() / 3.0;
        if frobenius(&(acc - Mat3::identity() * lambda)) <= 1e-8 * frobenius(&acc) {
            return Some(k);
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderRow {
    pub convention: Convention,
    pub product: &'static str,
    pub abstract_order: u32,
    pub image_order: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DictionarySample {
    pub alpha: f64,
    pub trace_wa: f64,
    pub beta: Option<f64>,
    pub trace_wa_relation: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdjudicationReport {
    pub matched_constant: Option<ConstantSign>,
    pub random_draws: usize,
    pub draws_matching_plus3: usize,
    pub draws_matching_minus3: usize,
    pub ideal_oracle: IdealOracle,
    pub order_table: Vec<OrderRow>,
    pub dictionary: Vec<DictionarySample>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdealOracle {
    pub real_glide_double_trace: f64,
    pub expected_su21_trace: f64,
    pub plus3: C64,
    pub minus3: C64,
    pub matrix: Option<C64>,
}

/// The reflections of the ideal triangle 0, 1, ∞ compose to a glide whose
/// trace squared plus two is `2 cosh μ`; the corresponding complex trace is
/// `1 - 2 cosh μ`.
pub fn ideal_oracle() -> IdealOracle {
    let [a, b, c] = crate::realhyp::ideal_triangle();
    let t = a.compose(&b).compose(&c).trace();
    let two_cosh = t * t + 2.0;
    let inf = super::Order::Infinite;
    let params = TriangleParams::new(inf, inf, inf, PI).expect("ideal triangle");
    let matrix = build_representation(&params, Convention::HalfAngle).ok().map(|rep| trace_wb_matrix(&rep));
    IdealOracle {
        real_glide_double_trace: two_cosh,
        expected_su21_trace: 1.0 - two_cosh,
        plus3: trace_wb_formula(&params, ConstantSign::Plus),
        minus3: trace_wb_formula(&params, ConstantSign::Minus),
        matrix,
    }
}

/// Parameter draws used for the `W_B` constant adjudication: 50 (p,q,r;α)
/// from a fixed low-discrepancy sequence.
pub fn adjudication_draws() -> Vec<TriangleParams> {
    let orders = [3u32, 4, 5, 6, 7, 8, 9, 10, 12];
    let mut out = Vec::new();
    let mut k = 0u32;
    while out.len() < 50 {
        let p = orders[(k as usize * 7) % orders.len()];
        let q = orders[(k as usize * 5 + 1) % orders.len()];
        let rr = orders[(k as usize * 3 + 2) % orders.len()];
        let mut v = [p, q, rr];
        v.sort_unstable();
        let alpha = (0.618_033_988_749_895 * (k + 1) as f64).fract() * 2.0 * PI;
        k += 1;
        if let Ok(params) = TriangleParams::finite(v[0], v[1], v[2], alpha) {
            if build_representation(&params, Convention::HalfAngle).is_ok() {
                out.push(params);
            }
        }
    }
    out
}

pub fn adjudicate() -> Result<AdjudicationReport> {
    let draws = adjudication_draws();
    let mut plus = 0;
    let mut minus = 0;
    for params in &draws {
        let rep = build_representation(params, Convention::HalfAngle)?;
        match adjudicate_wb(&rep, params).matched {
            Some(ConstantSign::Plus) => plus += 1,
            Some(ConstantSign::Minus) => minus += 1,
            None => {}
        }
    }
    let matched_constant = if plus == draws.len() {
        Some(ConstantSign::Plus)
    } else if minus == draws.len() {
        Some(ConstantSign::Minus)
    } else {
        None
    };

    let mut order_table = Vec::new();
    let params = TriangleParams::three_three(9, PI)?;
    for conv in [Convention::HalfAngle, Convention::RelationEnforcing] {
        let rep = build_representation(&params, conv)?;
        let [i1, i2, i3] = &rep.inversions;
        for (name, g, order) in [("I2I3", i2.mul(i3), 3), ("I3I1", i3.mul(i1), 3), ("I1I2", i1.mul(i2), 9)] {
            order_table.push(OrderRow {
                convention: conv,
                product: name,
                abstract_order: order,
                image_order: projective_order(&g, 60),
            });
        }
    }

    let a0 = alpha_zero(9)?;
    let mut dictionary = Vec::new();
    for alpha in [alpha_min(9)? + 1e-6, 0.3, a0, 0.6, 1.0, PI] {
        let tau = trace_wa_formula(&TriangleParams::three_three(9, alpha)?);
        let beta = trace_dictionary(9, alpha).ok();
        dictionary.push(DictionarySample {
            alpha,
            trace_wa: tau,
            beta,
            trace_wa_relation: beta.map(|b| trace_wa_relation(9, b)),
        });
    }

    Ok(AdjudicationReport {
        matched_constant,
        random_draws: draws.len(),
        draws_matching_plus3: plus,
        draws_matching_minus3: minus,
        ideal_oracle: ideal_oracle(),
        order_table,
        dictionary,
    })
}
