//! Analytic expressions for the driven-qubit work statistics.
//!
//! Inputs are the initial Bloch vector `r`, the first and second axes
//! `a_i`, `a_j`, the gap `eps` and the counting field `lambda`. Nothing here
//! builds a matrix.

use num_complex::Complex64;

use super::{Interval, JointWorkDistribution, SchemeKind};
use crate::pauli::{BlochVector, Sign};
use crate::protocol::{thermal_state, Protocol};

/// `1 + (1 - a_j.a_i)/2 (cos(lambda eps) - 1)`, shared by all three schemes.
pub fn char_fn_re(ai: BlochVector, aj: BlochVector, lambda_eps: f64) -> f64 {
    1.0 + 0.5 * (1.0 - aj.dot(ai)) * (lambda_eps.cos() - 1.0)
}

pub fn tpm_char_fn_im(r: BlochVector, ai: BlochVector, aj: BlochVector, lambda_eps: f64) -> f64 {
    0.5 * r.dot(ai) * (aj.dot(ai) - 1.0) * lambda_eps.sin()
}

pub fn fcs_char_fn_im(r: BlochVector, ai: BlochVector, aj: BlochVector, lambda_eps: f64) -> f64 {
    let q = 0.25 * lambda_eps;
    let (s_half, s_full) = ((2.0 * q).sin(), lambda_eps.sin());
    let cross_term = r.dot(ai) * aj.dot(ai) - r.cross(ai).dot(aj.cross(ai));
    s_half * q.cos().powi(2) * r.dot(aj)
        - 0.5 * s_full * r.dot(ai)
        - s_half * q.sin().powi(2) * cross_term
}

/// `(1/2) sin(lambda eps) (a_j - a_i).r`.
pub fn mh_char_fn_im(r: BlochVector, ai: BlochVector, aj: BlochVector, lambda_eps: f64) -> f64 {
    0.5 * lambda_eps.sin() * (aj - ai).dot(r)
}

pub fn char_fn_parts(
    s: SchemeKind,
    r: BlochVector,
    ai: BlochVector,
    aj: BlochVector,
    lambda_eps: f64,
) -> Complex64 {
    let im = match s {
        SchemeKind::Tpm => tpm_char_fn_im(r, ai, aj, lambda_eps),
        SchemeKind::Fcs => fcs_char_fn_im(r, ai, aj, lambda_eps),
        SchemeKind::Mh => mh_char_fn_im(r, ai, aj, lambda_eps),
    };
    Complex64::new(char_fn_re(ai, aj, lambda_eps), im)
}

fn window(p: &Protocol, iv: Interval) -> (BlochVector, BlochVector, BlochVector) {
    (thermal_state(p).r, p.axes[iv.start()], p.axes[iv.end()])
}

pub fn char_fn(p: &Protocol, iv: Interval, lambda: f64, s: SchemeKind) -> Complex64 {
    let (r, ai, aj) = window(p, iv);
    char_fn_parts(s, r, ai, aj, lambda * p.epsilon)
}

/// `P(s, t) = (1/4)(1 + s r.a_i)(1 + s t a_j.a_i)`.
pub fn tpm_pair_weight(r: BlochVector, ai: BlochVector, aj: BlochVector, s: Sign, t: Sign) -> f64 {
    let (s, t) = (s.value(), t.value());
    0.25 * (1.0 + s * r.dot(ai)) * (1.0 + s * t * aj.dot(ai))
}

/// `P(s, t) = (1/4)(1 + s t a_i.a_j + s r.a_i + t r.a_j)`.
pub fn mh_pair_weight(r: BlochVector, ai: BlochVector, aj: BlochVector, s: Sign, t: Sign) -> f64 {
    let (s, t) = (s.value(), t.value());
    0.25 * (1.0 + s * t * ai.dot(aj) + s * r.dot(ai) + t * r.dot(aj))
}

fn pairs(
    p: &Protocol,
    iv: Interval,
    scheme: SchemeKind,
    weight: fn(BlochVector, BlochVector, BlochVector, Sign, Sign) -> f64,
) -> JointWorkDistribution {
    let (r, ai, aj) = window(p, iv);
    let mut w = [0.0; 4];
    for s in Sign::BOTH {
        for t in Sign::BOTH {
            w[2 * s.index() + t.index()] = weight(r, ai, aj, s, t);
        }
    }
    JointWorkDistribution::new(scheme, iv, p.epsilon, w)
}

pub fn tpm_joint(p: &Protocol, iv: Interval) -> JointWorkDistribution {
    pairs(p, iv, SchemeKind::Tpm, tpm_pair_weight)
}

pub fn mh_joint(p: &Protocol, iv: Interval) -> JointWorkDistribution {
    pairs(p, iv, SchemeKind::Mh, mh_pair_weight)
}

/// Projective work moments: `(1 - a_j.a_i) eps^k / 2` for even `k`,
/// `-(r.a_i)(1 - a_j.a_i) eps^k / 2` for odd `k`.
pub fn tpm_moment(p: &Protocol, iv: Interval, k: u32) -> f64 {
    let (r, ai, aj) = window(p, iv);
    let base = 0.5 * (1.0 - aj.dot(ai)) * p.epsilon.powi(k as i32);
    if k.is_multiple_of(2) {
        base
    } else {
        -r.dot(ai) * base
    }
}

/// Weight the FCS distribution places on `W = +eps/2`:
/// `(1/2) r.(a_j - (a_i.a_j) a_i)`.
pub fn fcs_half_quantum_weight(p: &Protocol, iv: Interval) -> f64 {
    let (r, ai, aj) = window(p, iv);
    0.5 * r.dot(aj - ai.scale(ai.dot(aj)))
}
