//! Work statistics for the three measurement schemes.
//!
//! Every quantity is computed by explicit 2x2 matrix products and traces.
//! [`closed_form`] holds the analytic expressions for the same quantities;
//! the two paths are kept separate so each can check the other.
//!
//! Work values live on the lattice `n eps / 2`, `n = -2..=2`. The projective
//! and Margenau-Hill schemes only populate `n in {-2, 0, 2}`. Full-counting
//! statistics can put (opposite, cancelling) quasi-probability on `n = +-1`
//! when the state has coherence in the basis of the first Hamiltonian, which
//! happens for the interval (t1, t2).

pub mod closed_form;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::pauli::{jordan_product, projector, su2_exp, trace_inner, BlochVector, Matrix2, Sign};
use crate::protocol::{decohere, thermal_state, Protocol};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeKind {
    Tpm,
    Fcs,
    Mh,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 3] = [SchemeKind::Tpm, SchemeKind::Fcs, SchemeKind::Mh];

    pub fn name(self) -> &'static str {
        match self {
            SchemeKind::Tpm => "tpm",
            SchemeKind::Fcs => "fcs",
            SchemeKind::Mh => "mh",
        }
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "tpm" => Ok(SchemeKind::Tpm),
            "fcs" => Ok(SchemeKind::Fcs),
            "mh" => Ok(SchemeKind::Mh),
            other => Err(Error::InvalidParameter(format!("unknown scheme '{other}'"))),
        }
    }
}

/// One of the three measurement windows `[t_i, t_j]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Interval {
    I01,
    I12,
    I02,
}

impl Interval {
    pub const ALL: [Interval; 3] = [Interval::I01, Interval::I12, Interval::I02];

    pub fn start(self) -> usize {
        match self {
            Interval::I01 | Interval::I02 => 0,
            Interval::I12 => 1,
        }
    }

    pub fn end(self) -> usize {
        match self {
            Interval::I01 => 1,
            Interval::I12 | Interval::I02 => 2,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Interval::I01 => "01",
            Interval::I12 => "12",
            Interval::I02 => "02",
        }
    }

    /// Sign with which the interval enters `X(01) + X(12) - X(02)`.
    pub fn lg_sign(self) -> f64 {
        match self {
            Interval::I02 => -1.0,
            _ => 1.0,
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.label())
    }
}

impl FromStr for Interval {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "01" => Ok(Interval::I01),
            "12" => Ok(Interval::I12),
            "02" => Ok(Interval::I02),
            other => Err(Error::InvalidParameter(format!(
                "unknown interval '{other}' (expected 01, 12 or 02)"
            ))),
        }
    }
}

/// Weights over the four outcome pairs `(eps_i, eps_j)`, possibly negative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointWorkDistribution {
    /// `None` for marginals of an explicit three-time distribution.
    pub scheme: Option<SchemeKind>,
    pub interval: Interval,
    pub epsilon: f64,
    /// Order `(+,+), (+,-), (-,+), (-,-)`.
    weights: [f64; 4],
    /// True when the pair weights were reconstructed from a distribution over
    /// work values, splitting the `W = 0` weight evenly between `(+,+)` and
    /// `(-,-)`. Only the distribution over `W` is meaningful then.
    pub zero_split_convention: bool,
}

impl JointWorkDistribution {
    pub fn new(scheme: SchemeKind, interval: Interval, epsilon: f64, weights: [f64; 4]) -> Self {
        Self {
            scheme: Some(scheme),
            interval,
            epsilon,
            weights,
            zero_split_convention: false,
        }
    }

    /// Distribution not tied to any measurement scheme.
    pub fn unlabelled(interval: Interval, epsilon: f64, weights: [f64; 4]) -> Self {
        Self {
            scheme: None,
            interval,
            epsilon,
            weights,
            zero_split_convention: false,
        }
    }

    pub fn weights(&self) -> [f64; 4] {
        self.weights
    }

    pub fn get(&self, first: Sign, second: Sign) -> f64 {
        self.weights[2 * first.index() + second.index()]
    }

    pub fn sum(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn min_weight(&self) -> f64 {
        self.weights.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn has_negative(&self, tol: f64) -> bool {
        self.min_weight() < -tol
    }

    /// `eps_j - eps_i` for each entry, same order as [`Self::weights`].
    pub fn work_values(&self) -> [f64; 4] {
        let e = self.epsilon;
        [0.0, -e, e, 0.0]
    }

    pub fn moment(&self, k: u32) -> f64 {
        self.weights
            .iter()
            .zip(self.work_values())
            .map(|(p, w)| p * w.powi(k as i32))
            .sum()
    }

    pub fn char_fn(&self, lambda: f64) -> Complex64 {
        self.weights
            .iter()
            .zip(self.work_values())
            .map(|(p, w)| Complex64::from_polar(*p, lambda * w))
            .sum()
    }

    pub fn work_distribution(&self) -> WorkDistribution {
        let mut d = WorkDistribution::zero(self.epsilon);
        d.weights[0] = self.get(Sign::Plus, Sign::Minus);
        d.weights[2] = self.get(Sign::Plus, Sign::Plus) + self.get(Sign::Minus, Sign::Minus);
        d.weights[4] = self.get(Sign::Minus, Sign::Plus);
        d
    }
}

/// Quasi-distribution over the work lattice `n eps / 2`, `n = -2..=2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorkDistribution {
    pub epsilon: f64,
    /// Weights for `n = -2, -1, 0, 1, 2`.
    pub weights: [f64; 5],
}

impl WorkDistribution {
    pub fn zero(epsilon: f64) -> Self {
        Self {
            epsilon,
            weights: [0.0; 5],
        }
    }

    pub fn support(&self) -> [f64; 5] {
        let h = 0.5 * self.epsilon;
        [-2.0 * h, -h, 0.0, h, 2.0 * h]
    }

    pub fn sum(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn moment(&self, k: u32) -> f64 {
        self.weights
            .iter()
            .zip(self.support())
            .map(|(p, w)| p * w.powi(k as i32))
            .sum()
    }

    pub fn char_fn(&self, lambda: f64) -> Complex64 {
        self.weights
            .iter()
            .zip(self.support())
            .map(|(p, w)| Complex64::from_polar(*p, lambda * w))
            .sum()
    }

    /// Weight on `W = +eps/2` (equal and opposite to the weight on `-eps/2`).
    pub fn half_quantum_weight(&self) -> f64 {
        self.weights[3]
    }

    pub fn has_negative(&self, tol: f64) -> bool {
        self.weights.iter().any(|&w| w < -tol)
    }

    /// Pair-level representation; off-lattice weight on `+-eps/2` is dropped.
    fn into_pairs(self, scheme: SchemeKind, interval: Interval) -> JointWorkDistribution {
        let [minus, _, zero, _, plus] = self.weights;
        JointWorkDistribution {
            scheme: Some(scheme),
            interval,
            epsilon: self.epsilon,
            weights: [0.5 * zero, minus, plus, 0.5 * zero],
            zero_split_convention: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CharFnSample {
    pub lambda: f64,
    #[serde(serialize_with = "serialize_complex")]
    pub value: Complex64,
}

pub(crate) fn serialize_complex<S: Serializer>(
    z: &Complex64,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeStruct;
    let mut st = s.serialize_struct("Complex", 2)?;
    st.serialize_field("re", &z.re)?;
    st.serialize_field("im", &z.im)?;
    st.end()
}

/// Moment order `k >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MomentQuery(u32);

impl MomentQuery {
    pub fn new(k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidMomentOrder(
                0,
                "k must be at least 1; the zeroth moment is the characteristic function at lambda = 0",
            ));
        }
        Ok(Self(k))
    }

    pub fn order(self) -> u32 {
        self.0
    }
}

struct Window {
    rho: Matrix2,
    r: BlochVector,
    first: BlochVector,
    second: BlochVector,
    epsilon: f64,
}

impl Window {
    fn new(p: &Protocol, iv: Interval) -> Self {
        let state = thermal_state(p);
        Self {
            rho: state.density_matrix(),
            r: state.r,
            first: p.axes[iv.start()],
            second: p.axes[iv.end()],
            epsilon: p.epsilon,
        }
    }
}

// Axes of a constructed Protocol are validated unit vectors.
fn rotation(axis: BlochVector, phi: f64) -> Matrix2 {
    su2_exp(axis, phi).expect("protocol axes are unit vectors")
}

fn axis_projector(axis: BlochVector, sign: Sign) -> Matrix2 {
    projector(axis, sign).expect("protocol axes are unit vectors")
}

/// Projective two-time distribution:
/// `P(s, t) = Tr[rho P^s_i] Tr[P^t_j P^s_i]`.
///
/// The first measurement always acts on the initial state; for the interval
/// (t1, t2) nothing is measured at t0.
pub fn tpm_joint(p: &Protocol, iv: Interval) -> JointWorkDistribution {
    let w = Window::new(p, iv);
    let mut weights = [0.0; 4];
    for s in Sign::BOTH {
        let pi = axis_projector(w.first, s);
        let first = trace_inner(w.rho, pi).re;
        for t in Sign::BOTH {
            let pj = axis_projector(w.second, t);
            weights[2 * s.index() + t.index()] = first * trace_inner(pj, pi).re;
        }
    }
    JointWorkDistribution::new(SchemeKind::Tpm, iv, p.epsilon, weights)
}

/// Margenau-Hill quasi-distribution `Tr[rho (P^s_i * P^t_j)]`.
pub fn mh_joint(p: &Protocol, iv: Interval) -> JointWorkDistribution {
    let w = Window::new(p, iv);
    let mut weights = [0.0; 4];
    for s in Sign::BOTH {
        let pi = axis_projector(w.first, s);
        for t in Sign::BOTH {
            let pj = axis_projector(w.second, t);
            weights[2 * s.index() + t.index()] = trace_inner(w.rho, jordan_product(pi, pj)).re;
        }
    }
    JointWorkDistribution::new(SchemeKind::Mh, iv, p.epsilon, weights)
}

/// Full-counting-statistics quasi-distribution over the work lattice,
/// recovered from the characteristic function by a five-point discrete
/// Fourier inversion over one period `4 pi / eps`.
pub fn fcs_work_distribution(p: &Protocol, iv: Interval) -> WorkDistribution {
    const N: usize = 5;
    let period = 4.0 * std::f64::consts::PI / p.epsilon;
    let samples: Vec<Complex64> = (0..N)
        .map(|m| char_fn_matrix(p, iv, period * m as f64 / N as f64, SchemeKind::Fcs))
        .collect();
    let mut d = WorkDistribution::zero(p.epsilon);
    for (slot, n) in (-2i32..=2).enumerate() {
        let coefficient: Complex64 = samples
            .iter()
            .enumerate()
            .map(|(m, g)| {
                let phase = -std::f64::consts::TAU * (m as f64) * (n as f64) / N as f64;
                g * Complex64::from_polar(1.0, phase)
            })
            .sum();
        d.weights[slot] = coefficient.re / N as f64;
    }
    d
}

/// Pair-level distribution for any scheme. For FCS this uses the
/// zero-split convention (see [`JointWorkDistribution::zero_split_convention`])
/// and drops the cancelling `+-eps/2` weights.
pub fn scheme_joint(p: &Protocol, iv: Interval, s: SchemeKind) -> JointWorkDistribution {
    match s {
        SchemeKind::Tpm => tpm_joint(p, iv),
        SchemeKind::Mh => mh_joint(p, iv),
        SchemeKind::Fcs => fcs_work_distribution(p, iv).into_pairs(SchemeKind::Fcs, iv),
    }
}

/// Distribution over work values; its Fourier transform is the scheme's
/// characteristic function.
pub fn work_distribution(p: &Protocol, iv: Interval, s: SchemeKind) -> WorkDistribution {
    match s {
        SchemeKind::Fcs => fcs_work_distribution(p, iv),
        _ => scheme_joint(p, iv, s).work_distribution(),
    }
}

/// `<W^k>` summed over the scheme's work distribution.
pub fn work_moment(p: &Protocol, iv: Interval, q: MomentQuery, s: SchemeKind) -> f64 {
    work_distribution(p, iv, s).moment(q.order())
}

fn char_fn_matrix(p: &Protocol, iv: Interval, lambda: f64, s: SchemeKind) -> Complex64 {
    let w = Window::new(p, iv);
    let half = 0.5 * lambda * w.epsilon;
    // exp(i lambda H_j) and exp(-i lambda H_i)
    let forward_j = rotation(w.second, -half);
    let backward_i = rotation(w.first, half);
    match s {
        SchemeKind::Tpm => {
            let eta = decohere(crate::protocol::QubitState { r: w.r }, w.first)
                .expect("protocol axes are unit vectors")
                .density_matrix();
            trace_inner(eta, forward_j * backward_i)
        }
        SchemeKind::Fcs => {
            let quarter_i = rotation(w.first, 0.5 * half);
            trace_inner(w.rho, quarter_i * forward_j * quarter_i)
        }
        SchemeKind::Mh => trace_inner(w.rho, jordan_product(forward_j, backward_i)),
    }
}

/// Characteristic function `G(lambda)` of the work done over `iv`.
pub fn char_fn(p: &Protocol, iv: Interval, lambda: f64, s: SchemeKind) -> CharFnSample {
    CharFnSample {
        lambda,
        value: char_fn_matrix(p, iv, lambda, s),
    }
}

/// Base step of the finite-difference stencils, in units of `1 / eps`.
pub const FD_STEP_LOW_ORDER: f64 = 1e-3;
pub const FD_STEP_HIGH_ORDER: f64 = 1e-2;

/// Central-difference weights for the `k`-th derivative, offsets `-n..=n`.
fn stencil(k: u32) -> (&'static [f64], f64) {
    match k {
        1 => (
            &[1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0],
            FD_STEP_LOW_ORDER,
        ),
        2 => (
            &[-1.0 / 12.0, 4.0 / 3.0, -2.5, 4.0 / 3.0, -1.0 / 12.0],
            FD_STEP_LOW_ORDER,
        ),
        3 => (
            &[
                1.0 / 8.0,
                -1.0,
                13.0 / 8.0,
                0.0,
                -13.0 / 8.0,
                1.0,
                -1.0 / 8.0,
            ],
            FD_STEP_HIGH_ORDER,
        ),
        4 => (
            &[-1.0 / 6.0, 2.0, -6.5, 28.0 / 3.0, -6.5, 2.0, -1.0 / 6.0],
            FD_STEP_HIGH_ORDER,
        ),
        _ => unreachable!("order validated by caller"),
    }
}

/// `k`-th moment as `G^(k)(0) / i^k` by central finite differences of
/// [`char_fn`]. Supports `k` in `1..=4`.
pub fn moment_from_charfn(p: &Protocol, iv: Interval, k: u32, s: SchemeKind) -> Result<f64> {
    if !(1..=4).contains(&k) {
        return Err(Error::InvalidMomentOrder(
            k,
            "finite-difference moments need 1 <= k <= 4",
        ));
    }
    let (weights, step) = stencil(k);
    let h = step / p.epsilon;
    let half_width = (weights.len() / 2) as i32;
    let derivative: Complex64 = weights
        .iter()
        .zip(-half_width..=half_width)
        .filter(|(c, _)| **c != 0.0)
        .map(|(c, j)| char_fn_matrix(p, iv, j as f64 * h, s) * *c)
        .sum::<Complex64>()
        / h.powi(k as i32);
    Ok((derivative / Complex64::i().powi(k as i32)).re)
}

/// `<H(t_j)> - <H(t_i)>` in the undisturbed initial state.
pub fn heisenberg_energy_change(p: &Protocol, iv: Interval) -> f64 {
    let rho = thermal_state(p).density_matrix();
    let hi = crate::protocol::hamiltonian_at(p, iv.start()).expect("valid index");
    let hj = crate::protocol::hamiltonian_at(p, iv.end()).expect("valid index");
    (trace_inner(rho, hj) - trace_inner(rho, hi)).re
}

/// One row of a characteristic-function export.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CharFnRow {
    pub lambda: f64,
    pub re: f64,
    pub im: f64,
    pub scheme: SchemeKind,
    pub interval: Interval,
}

/// Samples `G` for every `(lambda, interval)` pair, ordered by lambda
/// ascending, then by interval in the order given.
pub fn sample_char_fn(
    p: &Protocol,
    intervals: &[Interval],
    lambdas: &[f64],
    s: SchemeKind,
) -> Vec<CharFnRow> {
    let mut sorted = lambdas.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted
        .iter()
        .flat_map(|&lambda| {
            intervals.iter().map(move |&iv| {
                let g = char_fn_matrix(p, iv, lambda, s);
                CharFnRow {
                    lambda,
                    re: g.re,
                    im: g.im,
                    scheme: s,
                    interval: iv,
                }
            })
        })
        .collect()
}

pub fn write_char_fn_csv<W: std::io::Write>(rows: &[CharFnRow], out: W) -> Result<()> {
    let mut w = crate::export::csv_writer(out);
    w.write_record(["lambda", "re", "im", "scheme", "interval"])?;
    for row in rows {
        w.write_record([
            crate::export::fmt_f64(row.lambda),
            crate::export::fmt_f64(row.re),
            crate::export::fmt_f64(row.im),
            row.scheme.to_string(),
            row.interval.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
