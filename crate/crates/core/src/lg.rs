//! Leggett-Garg combinations of interval statistics,
//! `X(t0,t1) + X(t1,t2) - X(t0,t2)`, and their macrorealist bounds.
//!
//! For moments `M_k` any three-time distribution gives
//! `0 <= M_k <= eps^k + (-1)^k eps^k` (so `M_k = 0` for odd `k`). For the
//! characteristic-function combination `L_lambda` it gives `Re <= 1` and
//! `Im = 0`; the two parts are judged separately.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::Result;
use crate::pauli::{BlochVector, Sign};
use crate::protocol::Protocol;
use crate::schemes::{self, Interval, JointWorkDistribution, MomentQuery, SchemeKind};

/// Absolute slack above which a bound counts as violated.
pub const VIOLATION_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum QuantityKind {
    MomentCombination { k: u32 },
    CharFnCombination { lambda: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ClassicalBound {
    /// `lower <= M_k <= upper` (even `k`).
    Interval { lower: f64, upper: f64 },
    /// `M_k = value` (odd `k`).
    Point { value: f64 },
    /// `Re(L) <= re_max` and `Im(L) = im`.
    CharFn { re_max: f64, im: f64 },
}

pub fn classical_bound(kind: QuantityKind, epsilon: f64) -> ClassicalBound {
    match kind {
        QuantityKind::MomentCombination { k } => {
            let ek = epsilon.powi(k as i32);
            let upper = ek + if k % 2 == 0 { ek } else { -ek };
            if k % 2 == 0 {
                ClassicalBound::Interval { lower: 0.0, upper }
            } else {
                ClassicalBound::Point { value: upper }
            }
        }
        QuantityKind::CharFnCombination { .. } => ClassicalBound::CharFn {
            re_max: 1.0,
            im: 0.0,
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PartVerdict {
    pub violated: bool,
    pub slack: f64,
}

impl PartVerdict {
    fn from_slack(slack: f64) -> Self {
        Self {
            violated: slack > VIOLATION_TOLERANCE,
            slack,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LgValue {
    Real(f64),
    Complex(Complex64),
}

impl LgValue {
    pub fn re(self) -> f64 {
        match self {
            LgValue::Real(x) => x,
            LgValue::Complex(z) => z.re,
        }
    }

    pub fn im(self) -> f64 {
        match self {
            LgValue::Real(_) => 0.0,
            LgValue::Complex(z) => z.im,
        }
    }
}

impl Serialize for LgValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            LgValue::Real(x) => s.serialize_f64(*x),
            LgValue::Complex(z) => schemes::serialize_complex(z, s),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LgQuantity {
    pub kind: QuantityKind,
    /// `None` when assembled from unlabelled marginals.
    pub scheme: Option<SchemeKind>,
    pub value: LgValue,
    pub bound: ClassicalBound,
    /// Any part violated.
    pub violated: bool,
    /// Largest part slack.
    pub slack: f64,
    /// Separate verdicts for `Re` and `Im` of `L_lambda`.
    pub parts: Option<[PartVerdict; 2]>,
}

/// `slack = max(0, -M, M - upper)` for even `k`, `|M|` for odd `k`.
pub fn moment_slack(value: f64, bound: ClassicalBound) -> f64 {
    match bound {
        ClassicalBound::Interval { lower, upper } => 0f64.max(lower - value).max(value - upper),
        ClassicalBound::Point { value: target } => (value - target).abs(),
        ClassicalBound::CharFn { .. } => unreachable!("not a moment bound"),
    }
}

fn assemble_moment(
    kind: QuantityKind,
    scheme: Option<SchemeKind>,
    value: f64,
    epsilon: f64,
) -> LgQuantity {
    let bound = classical_bound(kind, epsilon);
    let verdict = PartVerdict::from_slack(moment_slack(value, bound));
    LgQuantity {
        kind,
        scheme,
        value: LgValue::Real(value),
        bound,
        violated: verdict.violated,
        slack: verdict.slack,
        parts: None,
    }
}

fn assemble_char_fn(lambda: f64, scheme: Option<SchemeKind>, value: Complex64) -> LgQuantity {
    let kind = QuantityKind::CharFnCombination { lambda };
    let bound = classical_bound(kind, 1.0);
    let re = PartVerdict::from_slack((value.re - 1.0).max(0.0));
    let im = PartVerdict::from_slack(value.im.abs());
    LgQuantity {
        kind,
        scheme,
        value: LgValue::Complex(value),
        bound,
        violated: re.violated || im.violated,
        slack: re.slack.max(im.slack),
        parts: Some([re, im]),
    }
}

fn combine<T: Copy + std::ops::Mul<f64, Output = T> + std::iter::Sum<T>>(
    f: impl Fn(Interval) -> T,
) -> T {
    Interval::ALL.iter().map(|&iv| f(iv) * iv.lg_sign()).sum()
}

/// `M_k = <W^k>(01) + <W^k>(12) - <W^k>(02)` under scheme `s`.
pub fn m_k(p: &Protocol, k: u32, s: SchemeKind) -> Result<LgQuantity> {
    let q = MomentQuery::new(k)?;
    let value = combine(|iv| schemes::work_moment(p, iv, q, s));
    Ok(assemble_moment(
        QuantityKind::MomentCombination { k },
        Some(s),
        value,
        p.epsilon,
    ))
}

/// `L_lambda = G(01) + G(12) - G(02)` under scheme `s`.
pub fn l_lambda(p: &Protocol, lambda: f64, s: SchemeKind) -> LgQuantity {
    let value = combine(|iv| schemes::char_fn(p, iv, lambda, s).value);
    assemble_char_fn(lambda, Some(s), value)
}

/// `M_k` assembled from three pair distributions ordered (01, 12, 02).
pub fn m_k_from_marginals(m: &[JointWorkDistribution; 3], k: u32) -> Result<LgQuantity> {
    MomentQuery::new(k)?;
    let value = m[0].moment(k) + m[1].moment(k) - m[2].moment(k);
    Ok(assemble_moment(
        QuantityKind::MomentCombination { k },
        m[0].scheme,
        value,
        m[0].epsilon,
    ))
}

/// `L_lambda` assembled from three pair distributions ordered (01, 12, 02).
pub fn l_lambda_from_marginals(m: &[JointWorkDistribution; 3], lambda: f64) -> LgQuantity {
    let value = m[0].char_fn(lambda) + m[1].char_fn(lambda) - m[2].char_fn(lambda);
    assemble_char_fn(lambda, m[0].scheme, value)
}

/// `cos(t12) + cos(t01) - cos(t01 + t12)` and the matching sine combination,
/// the per-trajectory contribution to `L_lambda`.
pub fn phase_kernel(theta01: f64, theta12: f64) -> Complex64 {
    let total = theta01 + theta12;
    Complex64::new(
        theta12.cos() + theta01.cos() - total.cos(),
        theta12.sin() + theta01.sin() - total.sin(),
    )
}

/// Phases `(lambda (e1 - e0), lambda (e2 - e1))` for every energy
/// trajectory `(e0, e1, e2)`, `e = +-eps/2`.
pub fn trajectory_phases(lambda: f64, epsilon: f64) -> Vec<([Sign; 3], f64, f64)> {
    let energy = |s: Sign| 0.5 * epsilon * s.value();
    let mut out = Vec::with_capacity(8);
    for s0 in Sign::BOTH {
        for s1 in Sign::BOTH {
            for s2 in Sign::BOTH {
                let t01 = lambda * (energy(s1) - energy(s0));
                let t12 = lambda * (energy(s2) - energy(s1));
                out.push(([s0, s1, s2], t01, t12));
            }
        }
    }
    out
}

/// JSON report of one evaluated quantity.
#[derive(Debug, Clone, Serialize)]
pub struct LgReport {
    pub kind: &'static str,
    pub scheme: Option<SchemeKind>,
    pub params: ReportParams,
    pub value: LgValue,
    pub bound: ClassicalBound,
    pub violated: bool,
    pub slack: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub re_violated: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub im_violated: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub re_slack: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub im_slack: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportParams {
    pub epsilon: f64,
    pub beta: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta10: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta21: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axes: Option<[BlochVector; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
}

impl LgQuantity {
    pub fn report(&self, p: &Protocol) -> LgReport {
        let (kind, k, lambda) = match self.kind {
            QuantityKind::MomentCombination { k } => ("M_k", Some(k), None),
            QuantityKind::CharFnCombination { lambda } => ("L_lambda", None, Some(lambda)),
        };
        let params = ReportParams {
            epsilon: p.epsilon,
            beta: p.beta,
            theta10: p.angles.map(|a| a.theta10),
            theta21: p.angles.map(|a| a.theta21),
            axes: p.angles.is_none().then_some(p.axes),
            k,
            lambda,
        };
        let [re, im] = match self.parts {
            Some([re, im]) => [Some(re), Some(im)],
            None => [None, None],
        };
        LgReport {
            kind,
            scheme: self.scheme,
            params,
            value: self.value,
            bound: self.bound,
            violated: self.violated,
            slack: self.slack,
            re_violated: re.map(|v| v.violated),
            im_violated: im.map(|v| v.violated),
            re_slack: re.map(|v| v.slack),
            im_slack: im.map(|v| v.slack),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::CoplanarAngles;
    use crate::schemes::closed_form;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

    fn coplanar(eps: f64, beta: f64, t10: f64, t21: f64) -> Protocol {
        Protocol::from_angles(eps, beta, CoplanarAngles::new(t10, t21).unwrap()).unwrap()
    }

    #[test]
    fn m2_minimum_at_sixty_degrees() {
        for eps in [1.0, 2.0] {
            let q = m_k(
                &coplanar(eps, 1.0, FRAC_PI_3, FRAC_PI_3),
                2,
                SchemeKind::Tpm,
            )
            .unwrap();
            assert!((q.value.re() + eps * eps / 4.0).abs() < 1e-12);
            assert!(q.violated);
            assert!((q.slack - eps * eps / 4.0).abs() < 1e-12);
            assert_eq!(
                q.bound,
                ClassicalBound::Interval {
                    lower: 0.0,
                    upper: 2.0 * eps * eps
                }
            );
        }
    }

    #[test]
    fn m1_extremum_at_right_angles() {
        let q = m_k(
            &coplanar(1.0, 1e6, FRAC_PI_2, FRAC_PI_2),
            1,
            SchemeKind::Tpm,
        )
        .unwrap();
        assert!((q.value.re().abs() - 0.5).abs() < 1e-12);
        assert!(q.violated);
        let beta = 5.0;
        let q = m_k(
            &coplanar(1.0, beta, FRAC_PI_2, FRAC_PI_2),
            1,
            SchemeKind::Tpm,
        )
        .unwrap();
        assert!((q.value.re().abs() - 0.5 * (beta / 2.0f64).tanh()).abs() < 1e-12);
    }

    #[test]
    fn identity_protocol_never_violates() {
        let p = coplanar(1.0, 2.0, 0.0, 0.0);
        for s in SchemeKind::ALL {
            for k in 1..=4 {
                let q = m_k(&p, k, s).unwrap();
                assert!(q.value.re().abs() < 1e-12);
                assert!(!q.violated);
            }
            let l = l_lambda(&p, 1.3, s);
            assert!((l.value.re() - 1.0).abs() < 1e-12 && !l.violated);
        }
    }

    #[test]
    fn fcs_first_moment_obeys_bound() {
        for (t10, t21, beta) in [
            (0.3, 2.0, 1.0),
            (FRAC_PI_2, FRAC_PI_2, 5.0),
            (2.5, 0.1, 0.0),
        ] {
            let q = m_k(&coplanar(1.0, beta, t10, t21), 1, SchemeKind::Fcs).unwrap();
            assert!(q.value.re().abs() < 1e-12);
            assert!(!q.violated);
        }
    }

    #[test]
    fn re_l_at_sixty_degrees() {
        let p = coplanar(1.0, 0.7, FRAC_PI_3, FRAC_PI_3);
        for lambda in [0.1, 1.0, PI, 4.0] {
            let l = l_lambda(&p, lambda, SchemeKind::Tpm);
            assert!((l.value.re() - (1.25 - 0.25 * lambda.cos())).abs() < 1e-12);
        }
    }

    #[test]
    fn im_l_tpm_at_right_angles() {
        let beta = 3.0;
        let p = coplanar(1.0, beta, FRAC_PI_2, FRAC_PI_2);
        let l = l_lambda(&p, FRAC_PI_2, SchemeKind::Tpm);
        assert!((l.value.im().abs() - 0.5 * (beta / 2.0f64).tanh()).abs() < 1e-12);
        assert!(l.parts.unwrap()[1].violated);
    }

    #[test]
    fn im_l_fcs_at_right_angles() {
        let beta = 5.0;
        let p = coplanar(1.0, beta, FRAC_PI_2, FRAC_PI_2);
        for lambda in [0.3, 1.0, 2.0, PI, 5.0] {
            let l = l_lambda(&p, lambda, SchemeKind::Fcs);
            let expected =
                2.0 * (lambda / 4.0).sin().powi(2) * (lambda / 2.0).sin() * (beta / 2.0f64).tanh();
            assert!((l.value.im().abs() - expected.abs()).abs() < 1e-12);
        }
    }

    #[test]
    fn classical_bound_examples() {
        assert_eq!(
            classical_bound(QuantityKind::MomentCombination { k: 2 }, 1.0),
            ClassicalBound::Interval {
                lower: 0.0,
                upper: 2.0
            }
        );
        assert_eq!(
            classical_bound(QuantityKind::MomentCombination { k: 3 }, 1.7),
            ClassicalBound::Point { value: 0.0 }
        );
        assert_eq!(
            classical_bound(QuantityKind::CharFnCombination { lambda: 0.2 }, 1.0),
            ClassicalBound::CharFn {
                re_max: 1.0,
                im: 0.0
            }
        );
    }

    #[test]
    fn slack_rules() {
        let b = ClassicalBound::Interval {
            lower: 0.0,
            upper: 2.0,
        };
        assert_eq!(moment_slack(1.0, b), 0.0);
        assert_eq!(moment_slack(-0.5, b), 0.5);
        assert_eq!(moment_slack(2.5, b), 0.5);
        assert_eq!(
            moment_slack(-0.3, ClassicalBound::Point { value: 0.0 }),
            0.3
        );
        let tiny = assemble_moment(
            QuantityKind::MomentCombination { k: 2 },
            Some(SchemeKind::Tpm),
            -5e-10,
            1.0,
        );
        assert!(!tiny.violated);
    }

    #[test]
    fn zero_order_rejected() {
        assert!(m_k(&coplanar(1.0, 1.0, 0.1, 0.1), 0, SchemeKind::Tpm).is_err());
    }

    #[test]
    fn table_rows() {
        // (theta01, theta12) in units of lambda*eps, and the tabulated (cos, sin) columns
        let le = 0.83_f64;
        let rows: [(f64, f64, f64); 7] = [
            (0.0, 0.0, 1.0),
            (0.0, -1.0, 1.0),
            (0.0, 1.0, 1.0),
            (-1.0, 1.0, 2.0 * le.cos() - 1.0),
            (1.0, -1.0, 2.0 * le.cos() - 1.0),
            (-1.0, 0.0, 1.0),
            (1.0, 0.0, 1.0),
        ];
        for (a, b, cos_col) in rows {
            let z = phase_kernel(a * le, b * le);
            assert!((z.re - cos_col).abs() < 1e-12);
            assert!(z.im.abs() < 1e-12);
        }
        let phases = trajectory_phases(le, 1.0);
        assert_eq!(phases.len(), 8);
        for (_, t01, t12) in phases {
            assert!(rows
                .iter()
                .any(|(a, b, _)| (a * le - t01).abs() < 1e-15 && (b * le - t12).abs() < 1e-15));
        }
    }

    #[test]
    fn report_json_shape() {
        let p = coplanar(1.0, 1.0, FRAC_PI_3, FRAC_PI_3);
        let v = serde_json::to_value(m_k(&p, 2, SchemeKind::Tpm).unwrap().report(&p)).unwrap();
        assert_eq!(v["kind"], "M_k");
        assert_eq!(v["scheme"], "tpm");
        assert_eq!(v["params"]["k"], 2);
        assert!(v["value"].is_f64());
        assert_eq!(v["bound"]["type"], "interval");
        assert_eq!(v["violated"], true);
        assert!(v.get("re_violated").is_none());

        let v = serde_json::to_value(l_lambda(&p, 0.5, SchemeKind::Mh).report(&p)).unwrap();
        assert_eq!(v["kind"], "L_lambda");
        assert!(v["value"]["re"].is_f64() && v["value"]["im"].is_f64());
        assert_eq!(v["im_violated"], false);
        assert_eq!(v["params"]["lambda"], 0.5);
    }

    fn any_protocol() -> impl Strategy<Value = Protocol> {
        let unit = || {
            (0.0..PI, 0.0..std::f64::consts::TAU)
                .prop_map(|(a, b)| BlochVector::from_spherical(a, b))
        };
        (0.2..3.0f64, 0.0..10.0f64, unit(), unit(), unit())
            .prop_map(|(e, b, a0, a1, a2)| Protocol::with_axes(e, b, [a0, a1, a2]).unwrap())
    }

    proptest! {
        #[test]
        fn mh_imaginary_part_cancels(p in any_protocol(), lambda in -20.0..20.0f64) {
            let l = l_lambda(&p, lambda, SchemeKind::Mh);
            prop_assert!(l.value.im().abs() < 1e-12);
            prop_assert!(!l.parts.unwrap()[1].violated);
        }

        #[test]
        fn series_expansion_matches_moments(t10 in 0.0..PI, t21 in 0.0..PI, beta in 0.0..10.0f64) {
            let p = coplanar(1.0, beta, t10, t21);
            let lambda = 0.01;
            let m2 = m_k(&p, 2, SchemeKind::Tpm).unwrap().value.re();
            let m4 = m_k(&p, 4, SchemeKind::Tpm).unwrap().value.re();
            let re = l_lambda(&p, lambda, SchemeKind::Tpm).value.re();
            let series = 1.0 - lambda.powi(2) / 2.0 * m2 + lambda.powi(4) / 24.0 * m4;
            prop_assert!((re - series).abs() < 1e-8);
        }

        #[test]
        fn infinite_temperature_odd_moments_vanish(t10 in 0.0..PI, t21 in 0.0..PI, k in 1u32..=7) {
            let hot = coplanar(1.0, 0.0, t10, t21);
            let cold = coplanar(1.0, 4.0, t10, t21);
            let q = m_k(&hot, k, SchemeKind::Tpm).unwrap();
            if k % 2 == 1 {
                prop_assert!(q.value.re().abs() < 1e-12);
                prop_assert!(!q.violated);
            } else {
                let c = m_k(&cold, k, SchemeKind::Tpm).unwrap();
                prop_assert!((q.value.re() - c.value.re()).abs() < 1e-12);
            }
        }

        #[test]
        fn small_angles_are_nearly_classical(t in 0.0..1e-4f64, s in prop::sample::select(SchemeKind::ALL.to_vec())) {
            let p = coplanar(1.0, 2.0, t, t);
            for k in 1..=4 {
                prop_assert!(m_k(&p, k, s).unwrap().value.re().abs() < 1e-7);
            }
            prop_assert!((l_lambda(&p, 1.1, s).value.re() - 1.0).abs() < 1e-7);
        }

        #[test]
        fn closed_form_and_matrix_combinations_agree(p in any_protocol(), lambda in -10.0..10.0f64) {
            let closed: Complex64 = Interval::ALL.iter()
                .map(|&iv| closed_form::char_fn(&p, iv, lambda, SchemeKind::Tpm) * iv.lg_sign())
                .sum();
            prop_assert!((l_lambda(&p, lambda, SchemeKind::Tpm).value.re() - closed.re).abs() < 1e-12);
            let m = [Interval::I01, Interval::I12, Interval::I02].map(|iv| schemes::tpm_joint(&p, iv));
            let from_marginals = l_lambda_from_marginals(&m, lambda).value;
            prop_assert!((from_marginals.re() - closed.re).abs() < 1e-12);
            prop_assert!((from_marginals.im() - closed.im).abs() < 1e-12);
        }
    }
}
