//! The driven-qubit protocol: Hamiltonian axes at three instants, the thermal
//! initial state, and states decohered in a Hamiltonian eigenbasis.
//!
//! The Hamiltonian at instant `t_i` is `(eps / 2) a_i . sigma` in the
//! Heisenberg picture. Only the ordering `t0 < t1 < t2` matters, so instants
//! are addressed by index.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{pauli_dot, BlochVector, Matrix2};

/// Two-angle coplanar (xz-plane) parameterization with `a0 = z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoplanarAngles {
    pub theta10: f64,
    pub theta21: f64,
}

impl CoplanarAngles {
    pub fn new(theta10: f64, theta21: f64) -> Result<Self> {
        check_angle("theta10", theta10)?;
        check_angle("theta21", theta21)?;
        Ok(Self { theta10, theta21 })
    }

    /// Angles between successive axes of `p`. Exact inverse of
    /// [`Protocol::from_angles`] for coplanar protocols.
    pub fn recover(p: &Protocol) -> Self {
        let [a0, a1, a2] = p.axes;
        Self {
            theta10: angle_between(a0, a1),
            theta21: angle_between(a1, a2),
        }
    }
}

fn check_angle(name: &'static str, value: f64) -> Result<()> {
    if !(0.0..=PI).contains(&value) {
        return Err(Error::AngleOutOfRange { name, value });
    }
    Ok(())
}

/// `atan2(|a x b|, a . b)`; well conditioned near 0 and pi, unlike `acos`.
pub fn angle_between(a: BlochVector, b: BlochVector) -> f64 {
    a.cross(b).norm().atan2(a.dot(b))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Protocol {
    pub epsilon: f64,
    pub beta: f64,
    pub axes: [BlochVector; 3],
    /// Set when built from [`CoplanarAngles`].
    pub angles: Option<CoplanarAngles>,
}

impl Protocol {
    /// Canonical coplanar builder:
    /// `a0 = z`, `a1 = (sin t10, 0, cos t10)`, `a2 = (sin(t10 + t21), 0, cos(t10 + t21))`.
    pub fn from_angles(epsilon: f64, beta: f64, angles: CoplanarAngles) -> Result<Self> {
        check_energy(epsilon, beta)?;
        let CoplanarAngles { theta10, theta21 } =
            CoplanarAngles::new(angles.theta10, angles.theta21)?;
        let total = theta10 + theta21;
        let axes = [
            BlochVector::Z,
            BlochVector::new(theta10.sin(), 0.0, theta10.cos()),
            BlochVector::new(total.sin(), 0.0, total.cos()),
        ];
        Ok(Self {
            epsilon,
            beta,
            axes,
            angles: Some(angles),
        })
    }

    /// General three-axis constructor. Axes are validated, never renormalized.
    pub fn with_axes(epsilon: f64, beta: f64, axes: [BlochVector; 3]) -> Result<Self> {
        check_energy(epsilon, beta)?;
        for a in axes {
            a.ensure_unit()?;
        }
        Ok(Self {
            epsilon,
            beta,
            axes,
            angles: None,
        })
    }

    pub fn axis(&self, i: usize) -> Result<BlochVector> {
        self.axes
            .get(i)
            .copied()
            .ok_or(Error::TimeIndexOutOfRange(i))
    }

    /// Coplanar angles if the protocol came from them, otherwise the angles
    /// between successive axes.
    pub fn coplanar_angles(&self) -> CoplanarAngles {
        self.angles.unwrap_or_else(|| CoplanarAngles::recover(self))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ProtocolDocument = serde_json::from_str(text)?;
        doc.try_into()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&ProtocolDocument::from(self)).expect("protocol serializes")
    }
}

fn check_energy(epsilon: f64, beta: f64) -> Result<()> {
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "epsilon must be positive and finite, got {epsilon}"
        )));
    }
    if !(beta.is_finite() && beta >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "beta must be non-negative and finite, got {beta}"
        )));
    }
    Ok(())
}

/// On-disk protocol form. Exactly one of the angle form or the axes form.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProtocolDocument {
    pub epsilon: f64,
    pub beta: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta10: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta21: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a0: Option<BlochVector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a1: Option<BlochVector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a2: Option<BlochVector>,
}

impl From<&Protocol> for ProtocolDocument {
    fn from(p: &Protocol) -> Self {
        match p.angles {
            Some(ang) => Self {
                epsilon: p.epsilon,
                beta: p.beta,
                theta10: Some(ang.theta10),
                theta21: Some(ang.theta21),
                ..Default::default()
            },
            None => Self {
                epsilon: p.epsilon,
                beta: p.beta,
                a0: Some(p.axes[0]),
                a1: Some(p.axes[1]),
                a2: Some(p.axes[2]),
                ..Default::default()
            },
        }
    }
}

impl TryFrom<ProtocolDocument> for Protocol {
    type Error = Error;

    fn try_from(doc: ProtocolDocument) -> Result<Self> {
        let any_angle = doc.theta10.is_some() || doc.theta21.is_some();
        let any_axis = doc.a0.is_some() || doc.a1.is_some() || doc.a2.is_some();
        match (doc.theta10, doc.theta21, doc.a0, doc.a1, doc.a2) {
            _ if any_angle && any_axis => Err(Error::ProtocolDocument(
                "give either theta10/theta21 or a0/a1/a2, not both".into(),
            )),
            (Some(t10), Some(t21), None, None, None) => {
                Protocol::from_angles(doc.epsilon, doc.beta, CoplanarAngles::new(t10, t21)?)
            }
            (None, None, Some(a0), Some(a1), Some(a2)) => {
                Protocol::with_axes(doc.epsilon, doc.beta, [a0, a1, a2])
            }
            _ if any_angle => Err(Error::ProtocolDocument(
                "need both theta10 and theta21".into(),
            )),
            _ if any_axis => Err(Error::ProtocolDocument("need all of a0, a1, a2".into())),
            _ => Err(Error::ProtocolDocument("no angles or axes given".into())),
        }
    }
}

/// Qubit density matrix `(I + r . sigma) / 2`, stored as its Bloch vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitState {
    pub r: BlochVector,
}

impl QubitState {
    pub fn new(r: BlochVector) -> Result<Self> {
        let norm = r.norm();
        if !norm.is_finite() || norm > 1.0 + 1e-12 {
            return Err(Error::StateOutsideBall { norm });
        }
        Ok(Self { r })
    }

    pub fn density_matrix(&self) -> Matrix2 {
        (Matrix2::IDENTITY + pauli_dot(self.r)).scale(Complex64::new(0.5, 0.0))
    }
}

/// Gibbs state of `H(t0)`: `r = -tanh(beta eps / 2) a0`.
pub fn thermal_state(p: &Protocol) -> QubitState {
    let polarization = (0.5 * p.beta * p.epsilon).tanh();
    QubitState {
        r: p.axes[0].scale(-polarization),
    }
}

/// Removes coherences in the eigenbasis of `axis . sigma`.
pub fn decohere(s: QubitState, axis: BlochVector) -> Result<QubitState> {
    let axis = axis.ensure_unit()?;
    Ok(QubitState {
        r: axis.scale(s.r.dot(axis)),
    })
}

/// `(eps / 2) a_i . sigma`.
pub fn hamiltonian_at(p: &Protocol, i: usize) -> Result<Matrix2> {
    let a = p.axis(i)?;
    Ok(pauli_dot(a).scale(Complex64::new(0.5 * p.epsilon, 0.0)))
}
