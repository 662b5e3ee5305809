//! Parameter grids over protocol geometry, temperature and counting field.
//!
//! Points are evaluated in parallel; rows come back in lexicographic grid
//! order `(theta10, theta21, beta, lambda)` with the last axis fastest.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::export::{csv_writer, fmt_f64};
use crate::lg::{l_lambda, m_k, LgQuantity};
use crate::protocol::{CoplanarAngles, Protocol};
use crate::schemes::SchemeKind;

pub const MAX_BETA_EPS: f64 = 20.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    Fixed(f64),
    /// `count` evenly spaced values including both ends.
    Range {
        min: f64,
        max: f64,
        count: usize,
    },
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        match *self {
            Axis::Fixed(v) => vec![v],
            Axis::Range { min, max, count } => {
                let step = (max - min) / (count - 1) as f64;
                (0..count)
                    .map(|i| {
                        if i + 1 == count {
                            max
                        } else {
                            min + step * i as f64
                        }
                    })
                    .collect()
            }
        }
    }

    pub fn count(&self) -> usize {
        match *self {
            Axis::Fixed(_) => 1,
            Axis::Range { count, .. } => count,
        }
    }

    fn validate(&self, name: &str, lo: f64, hi: f64) -> Result<()> {
        let inside = |v: f64| v.is_finite() && (lo..=hi).contains(&v);
        let ok = match *self {
            Axis::Fixed(v) => inside(v),
            Axis::Range { min, max, count } => {
                if count < 2 {
                    return Err(Error::InvalidParameter(format!(
                        "{name}: grid count must be at least 2, got {count}"
                    )));
                }
                inside(min) && inside(max) && min <= max
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "{name}: range must lie within [{lo}, {hi}]"
            )))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum SweepTarget {
    Moment {
        k: u32,
    },
    /// Counting field in units of `1/epsilon`.
    CharFn {
        lambda_eps: Axis,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub epsilon: f64,
    pub scheme: SchemeKind,
    pub target: SweepTarget,
    pub theta10: Axis,
    pub theta21: Axis,
    /// Inverse temperature in units of `1/epsilon`.
    pub beta_eps: Axis,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        self.theta10.validate("theta10", 0.0, PI)?;
        self.theta21.validate("theta21", 0.0, PI)?;
        self.beta_eps.validate("beta*epsilon", 0.0, MAX_BETA_EPS)?;
        match self.target {
            SweepTarget::Moment { k: 0 } => Err(Error::InvalidMomentOrder(
                0,
                "moment order must be at least 1",
            )),
            SweepTarget::Moment { .. } => Ok(()),
            SweepTarget::CharFn { lambda_eps } => {
                lambda_eps.validate("lambda*epsilon", 0.0, 2.0 * PI)
            }
        }
    }

    pub fn point_count(&self) -> usize {
        let lambdas = match self.target {
            SweepTarget::Moment { .. } => 1,
            SweepTarget::CharFn { lambda_eps } => lambda_eps.count(),
        };
        self.theta10.count() * self.theta21.count() * self.beta_eps.count() * lambdas
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub epsilon: f64,
    pub beta: f64,
    pub theta10: f64,
    pub theta21: f64,
    /// `lambda` for characteristic-function sweeps, absent for moments.
    pub lambda: Option<f64>,
    pub quantity: LgQuantity,
}

struct GridPoint {
    theta10: f64,
    theta21: f64,
    beta: f64,
    lambda: Option<f64>,
}

fn grid(spec: &SweepSpec) -> Vec<GridPoint> {
    let lambdas: Vec<Option<f64>> = match spec.target {
        SweepTarget::Moment { .. } => vec![None],
        SweepTarget::CharFn { lambda_eps } => lambda_eps
            .values()
            .into_iter()
            .map(|l| Some(l / spec.epsilon))
            .collect(),
    };
    let mut points = Vec::with_capacity(spec.point_count());
    for &t10 in &spec.theta10.values() {
        for &t21 in &spec.theta21.values() {
            for &be in &spec.beta_eps.values() {
                for &lambda in &lambdas {
                    points.push(GridPoint {
                        theta10: t10,
                        theta21: t21,
                        beta: be / spec.epsilon,
                        lambda,
                    });
                }
            }
        }
    }
    points
}

pub fn run(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    grid(spec)
        .par_iter()
        .map(|g| {
            let p = Protocol::from_angles(
                spec.epsilon,
                g.beta,
                CoplanarAngles::new(g.theta10, g.theta21)?,
            )?;
            let quantity = match (spec.target, g.lambda) {
                (SweepTarget::Moment { k }, _) => m_k(&p, k, spec.scheme)?,
                (_, Some(lambda)) => l_lambda(&p, lambda, spec.scheme),
                (_, None) => unreachable!("characteristic-function grid points carry lambda"),
            };
            Ok(SweepRow {
                epsilon: spec.epsilon,
                beta: g.beta,
                theta10: g.theta10,
                theta21: g.theta21,
                lambda: g.lambda,
                quantity,
            })
        })
        .collect()
}

pub fn write_csv<W: std::io::Write>(spec: &SweepSpec, rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv_writer(out);
    let flag = |b: bool| if b { "true" } else { "false" }.to_string();
    match spec.target {
        SweepTarget::Moment { k } => {
            w.write_record([
                "epsilon", "beta", "theta10", "theta21", "k", "value", "violated", "slack",
            ])?;
            for r in rows {
                w.write_record([
                    fmt_f64(r.epsilon),
                    fmt_f64(r.beta),
                    fmt_f64(r.theta10),
                    fmt_f64(r.theta21),
                    k.to_string(),
                    fmt_f64(r.quantity.value.re()),
                    flag(r.quantity.violated),
                    fmt_f64(r.quantity.slack),
                ])?;
            }
        }
        SweepTarget::CharFn { .. } => {
            w.write_record([
                "epsilon",
                "beta",
                "theta10",
                "theta21",
                "lambda",
                "re",
                "im",
                "re_violated",
                "im_violated",
                "violated",
                "slack",
            ])?;
            for r in rows {
                let q = &r.quantity;
                let [re_part, im_part] = q
                    .parts
                    .expect("characteristic-function quantities carry part verdicts");
                w.write_record([
                    fmt_f64(r.epsilon),
                    fmt_f64(r.beta),
                    fmt_f64(r.theta10),
                    fmt_f64(r.theta21),
                    fmt_f64(r.lambda.unwrap_or(0.0)),
                    fmt_f64(q.value.re()),
                    fmt_f64(q.value.im()),
                    flag(re_part.violated),
                    flag(im_part.violated),
                    flag(q.violated),
                    fmt_f64(q.slack),
                ])?;
            }
        }
    }
    w.flush()?;
    Ok(())
}
