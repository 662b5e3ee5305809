//! Joint-extension test for macrorealism: do three two-time distributions
//! arise as marginals of one non-negative three-time distribution?
//!
//! The question is a linear feasibility problem in eight unknowns
//! `q(s0, s1, s2) >= 0` with twelve marginal equations. It is answered by
//! [`crate::simplex::phase_one`]. A violated Leggett-Garg bound implies
//! infeasibility; the converse is not claimed.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::pauli::Sign;
use crate::protocol::Protocol;
use crate::schemes::{scheme_joint, Interval, JointWorkDistribution, SchemeKind};
use crate::simplex::phase_one;

/// Normalization tolerance on input marginals.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;
/// Phase-one objective at or below which the marginals count as extendable.
pub const INFEASIBILITY_THRESHOLD: f64 = 1e-9;

/// Weights over energy trajectories `(e0, e1, e2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreeTimeDistribution {
    /// Index `4 s0 + 2 s1 + s2` with `+ = 0`, `- = 1`.
    weights: [f64; 8],
}

fn trajectory_index(s: [Sign; 3]) -> usize {
    4 * s[0].index() + 2 * s[1].index() + s[2].index()
}

fn trajectories() -> impl Iterator<Item = [Sign; 3]> {
    Sign::BOTH.into_iter().flat_map(|a| {
        Sign::BOTH
            .into_iter()
            .flat_map(move |b| Sign::BOTH.into_iter().map(move |c| [a, b, c]))
    })
}

impl ThreeTimeDistribution {
    pub fn new(weights: [f64; 8]) -> Result<Self> {
        if weights.iter().any(|w| !w.is_finite() || *w < -1e-12) {
            return Err(Error::InvalidParameter(format!(
                "three-time weights must be non-negative, got {weights:?}"
            )));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "three-time weights sum to {sum}, expected 1"
            )));
        }
        Ok(Self { weights })
    }

    /// All weight on a single trajectory.
    pub fn point(s: [Sign; 3]) -> Self {
        let mut weights = [0.0; 8];
        weights[trajectory_index(s)] = 1.0;
        Self { weights }
    }

    pub fn weights(&self) -> [f64; 8] {
        self.weights
    }

    pub fn get(&self, s: [Sign; 3]) -> f64 {
        self.weights[trajectory_index(s)]
    }
}

/// Marginal over the two instants of `iv`.
pub fn marginalize(q: &ThreeTimeDistribution, iv: Interval, epsilon: f64) -> JointWorkDistribution {
    let mut w = [0.0; 4];
    for s in trajectories() {
        let (a, b) = (s[iv.start()], s[iv.end()]);
        w[2 * a.index() + b.index()] += q.get(s);
    }
    JointWorkDistribution::unlabelled(iv, epsilon, w)
}

/// Two-time distributions for intervals (01, 12, 02).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarginalTriple {
    pub marginals: [JointWorkDistribution; 3],
}

impl MarginalTriple {
    pub fn new(marginals: [JointWorkDistribution; 3]) -> Result<Self> {
        let expected = [Interval::I01, Interval::I12, Interval::I02];
        for (m, iv) in marginals.iter().zip(expected) {
            if m.interval != iv {
                return Err(Error::InvalidParameter(format!(
                    "marginal for {} supplied where {iv} was expected",
                    m.interval
                )));
            }
        }
        Ok(Self { marginals })
    }

    pub fn of(q: &ThreeTimeDistribution, epsilon: f64) -> Self {
        Self {
            marginals: [Interval::I01, Interval::I12, Interval::I02]
                .map(|iv| marginalize(q, iv, epsilon)),
        }
    }

    /// The scheme's marginals for protocol `p`.
    pub fn for_scheme(p: &Protocol, s: SchemeKind) -> Self {
        Self {
            marginals: [Interval::I01, Interval::I12, Interval::I02]
                .map(|iv| scheme_joint(p, iv, s)),
        }
    }

    /// Per-interval flag: does the marginal carry any negative weight?
    pub fn negativity(&self) -> [bool; 3] {
        self.marginals.map(|m| m.has_negative(1e-12))
    }

    fn check_normalized(&self) -> Result<()> {
        for m in &self.marginals {
            let sum = m.sum();
            if !sum.is_finite() || (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
                return Err(Error::Unnormalized {
                    interval: m.interval.label(),
                    sum,
                });
            }
        }
        Ok(())
    }

    /// Largest absolute difference between these marginals and those of `q`.
    pub fn max_deviation(&self, q: &ThreeTimeDistribution) -> f64 {
        let epsilon = self.marginals[0].epsilon;
        let other = Self::of(q, epsilon);
        self.marginals
            .iter()
            .zip(other.marginals.iter())
            .flat_map(|(a, b)| {
                a.weights()
                    .into_iter()
                    .zip(b.weights())
                    .map(|(x, y)| (x - y).abs())
            })
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "verdict")]
pub enum Feasibility {
    Feasible {
        #[serde(serialize_with = "serialize_witness")]
        witness: ThreeTimeDistribution,
        max_marginal_error: f64,
    },
    Infeasible {
        /// Minimal L1 violation of the marginal equations over `q >= 0`.
        phase1_objective: f64,
        /// Largest single-equation violation at that optimum.
        max_violation: f64,
    },
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible { .. })
    }
}

fn serialize_witness<S: serde::Serializer>(
    q: &ThreeTimeDistribution,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut map = s.serialize_map(Some(8))?;
    for t in trajectories() {
        let key: String = t.iter().map(|s| s.symbol()).collect();
        map.serialize_entry(&key, &q.get(t))?;
    }
    map.end()
}

fn constraint_system(m: &MarginalTriple) -> (Vec<Vec<f64>>, Vec<f64>) {
    let mut rows = Vec::with_capacity(12);
    let mut rhs = Vec::with_capacity(12);
    for marginal in &m.marginals {
        let iv = marginal.interval;
        for a in Sign::BOTH {
            for b in Sign::BOTH {
                let mut row = vec![0.0; 8];
                for s in trajectories() {
                    if s[iv.start()] == a && s[iv.end()] == b {
                        row[trajectory_index(s)] = 1.0;
                    }
                }
                rows.push(row);
                rhs.push(marginal.get(a, b));
            }
        }
    }
    (rows, rhs)
}

/// Decides whether `m` admits a non-negative joint extension.
///
/// Quasi-distributions with negative entries are accepted and are typically
/// infeasible; see [`MarginalTriple::negativity`].
pub fn feasible(m: &MarginalTriple) -> Result<Feasibility> {
    m.check_normalized()?;
    let (a, b) = constraint_system(m);
    let solution = phase_one(&a, &b);
    let residuals: Vec<f64> = a
        .iter()
        .zip(&b)
        .map(|(row, bi)| (row.iter().zip(&solution.x).map(|(r, x)| r * x).sum::<f64>() - bi).abs())
        .collect();
    if solution.objective > INFEASIBILITY_THRESHOLD {
        return Ok(Feasibility::Infeasible {
            phase1_objective: solution.objective,
            max_violation: residuals.iter().copied().fold(0.0, f64::max),
        });
    }
    let mut weights = [0.0; 8];
    for (w, x) in weights.iter_mut().zip(&solution.x) {
        *w = x.max(0.0);
    }
    let sum: f64 = weights.iter().sum();
    for w in weights.iter_mut() {
        *w /= sum;
    }
    let witness = ThreeTimeDistribution { weights };
    Ok(Feasibility::Feasible {
        witness,
        max_marginal_error: m.max_deviation(&witness),
    })
}

/// `M_k = (eps^k + (-1)^k eps^k) [q(+,-,+) + q(-,+,-)]`.
pub fn lg_from_joint(q: &ThreeTimeDistribution, k: u32, epsilon: f64) -> f64 {
    let ek = epsilon.powi(k as i32);
    let prefactor = ek + if k.is_multiple_of(2) { ek } else { -ek };
    use Sign::{Minus, Plus};
    prefactor * (q.get([Plus, Minus, Plus]) + q.get([Minus, Plus, Minus]))
}
