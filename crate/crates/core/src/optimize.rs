//! Extremal Leggett-Garg violation over protocol geometry.
//!
//! A coarse grid picks a starting point, then cyclic coordinate-wise golden
//! section refines it. The coplanar family has two angles `(theta10, theta21)`;
//! the full-sphere family fixes `a0 = z` and frees polar and azimuthal angles
//! of `a1` and `a2`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lg::{l_lambda, m_k};
use crate::pauli::BlochVector;
use crate::protocol::{CoplanarAngles, Protocol};
use crate::schemes::SchemeKind;

pub const COPLANAR_GRID: usize = 64;
pub const FULL_SPHERE_GRID: usize = 16;
pub const PARAMETER_TOLERANCE: f64 = 1e-8;
pub const IMPROVEMENT_TOLERANCE: f64 = 1e-10;
pub const MAX_CYCLES: usize = 200;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Objective {
    MinimizeEvenMoment { k: u32 },
    MaximizeAbsOddMoment { k: u32 },
    MaximizeReL { lambda: f64 },
    MaximizeAbsImL { lambda: f64 },
}

impl Objective {
    fn validate(self) -> Result<()> {
        match self {
            Objective::MinimizeEvenMoment { k } if k == 0 || k % 2 == 1 => Err(
                Error::InvalidMomentOrder(k, "minimization applies to even orders k >= 2"),
            ),
            Objective::MaximizeAbsOddMoment { k } if k % 2 == 0 => Err(Error::InvalidMomentOrder(
                k,
                "|M_k| maximization applies to odd orders",
            )),
            Objective::MaximizeReL { lambda } | Objective::MaximizeAbsImL { lambda }
                if !lambda.is_finite() =>
            {
                Err(Error::InvalidParameter(format!(
                    "lambda must be finite, got {lambda}"
                )))
            }
            _ => Ok(()),
        }
    }

    /// The reported quantity at `p`: `M_k`, `|M_k|`, `Re L` or `|Im L|`.
    pub fn value(self, p: &Protocol, s: SchemeKind) -> Result<f64> {
        Ok(match self {
            Objective::MinimizeEvenMoment { k } => m_k(p, k, s)?.value.re(),
            Objective::MaximizeAbsOddMoment { k } => m_k(p, k, s)?.value.re().abs(),
            Objective::MaximizeReL { lambda } => l_lambda(p, lambda, s).value.re(),
            Objective::MaximizeAbsImL { lambda } => l_lambda(p, lambda, s).value.im().abs(),
        })
    }

    fn is_minimization(self) -> bool {
        matches!(self, Objective::MinimizeEvenMoment { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizeConfig {
    pub scheme: SchemeKind,
    pub epsilon: f64,
    pub beta: f64,
    pub full_sphere: bool,
}

impl OptimizeConfig {
    pub fn coplanar(scheme: SchemeKind, epsilon: f64, beta: f64) -> Self {
        Self {
            scheme,
            epsilon,
            beta,
            full_sphere: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimizePoint {
    pub theta10: f64,
    pub theta21: f64,
    /// `(polar1, azimuth1, polar2, azimuth2)` of `a1`, `a2` in full-sphere mode.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spherical: Option<[f64; 4]>,
    pub axes: [BlochVector; 3],
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimizeResult {
    pub objective: Objective,
    pub scheme: SchemeKind,
    pub point: OptimizePoint,
    pub value: f64,
    /// Best value found on the coarse grid.
    pub grid_value: f64,
    pub iterations: usize,
    pub converged: bool,
    pub evaluations: usize,
}

struct Family {
    bounds: Vec<(f64, f64)>,
    grid: usize,
}

impl Family {
    fn new(full_sphere: bool) -> Self {
        if full_sphere {
            Self {
                bounds: vec![(0.0, PI), (0.0, 2.0 * PI), (0.0, PI), (0.0, 2.0 * PI)],
                grid: FULL_SPHERE_GRID,
            }
        } else {
            Self {
                bounds: vec![(0.0, PI), (0.0, PI)],
                grid: COPLANAR_GRID,
            }
        }
    }

    fn step(&self, d: usize) -> f64 {
        let (lo, hi) = self.bounds[d];
        (hi - lo) / (self.grid - 1) as f64
    }

    fn grid_points(&self) -> Vec<Vec<f64>> {
        let dims = self.bounds.len();
        let total = self.grid.pow(dims as u32);
        (0..total)
            .map(|mut idx| {
                let mut x = vec![0.0; dims];
                for d in (0..dims).rev() {
                    let i = idx % self.grid;
                    idx /= self.grid;
                    x[d] = if i + 1 == self.grid {
                        self.bounds[d].1
                    } else {
                        self.bounds[d].0 + self.step(d) * i as f64
                    };
                }
                x
            })
            .collect()
    }
}

fn protocol_at(cfg: &OptimizeConfig, x: &[f64]) -> Result<Protocol> {
    if cfg.full_sphere {
        let axes = [
            BlochVector::Z,
            BlochVector::from_spherical(x[0], x[1]),
            BlochVector::from_spherical(x[2], x[3]),
        ];
        Protocol::with_axes(cfg.epsilon, cfg.beta, axes)
    } else {
        Protocol::from_angles(cfg.epsilon, cfg.beta, CoplanarAngles::new(x[0], x[1])?)
    }
}

/// Golden-section maximization of `f` on `[lo, hi]`, seeded with a known
/// point `(x0, f0)` that is returned unless beaten.
fn golden_max(
    f: &mut impl FnMut(f64) -> Result<f64>,
    mut lo: f64,
    mut hi: f64,
    x0: f64,
    f0: f64,
) -> Result<(f64, f64)> {
    let mut best = (x0, f0);
    let mut c = hi - INV_PHI * (hi - lo);
    let mut d = lo + INV_PHI * (hi - lo);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while hi - lo > PARAMETER_TOLERANCE {
        if fc >= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - INV_PHI * (hi - lo);
            fc = f(c)?;
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + INV_PHI * (hi - lo);
            fd = f(d)?;
        }
    }
    for (x, fx) in [(c, fc), (d, fd)] {
        if fx > best.1 {
            best = (x, fx);
        }
    }
    Ok(best)
}

pub fn optimize(objective: Objective, cfg: &OptimizeConfig) -> Result<OptimizeResult> {
    objective.validate()?;
    protocol_at(cfg, &[0.0; 4])?;
    let sign = if objective.is_minimization() {
        -1.0
    } else {
        1.0
    };
    let score = |x: &[f64]| -> Result<f64> {
        Ok(sign * objective.value(&protocol_at(cfg, x)?, cfg.scheme)?)
    };

    let family = Family::new(cfg.full_sphere);
    let points = family.grid_points();
    let scores = points
        .par_iter()
        .map(|x| score(x))
        .collect::<Result<Vec<f64>>>()?;
    let mut evaluations = points.len();
    let start = scores
        .iter()
        .enumerate()
        .fold(0, |best, (i, &s)| if s > scores[best] { i } else { best });
    let mut x = points[start].clone();
    let mut fx = scores[start];
    let grid_score = fx;

    let mut iterations = 0;
    let mut converged = false;
    while iterations < MAX_CYCLES {
        iterations += 1;
        let before = fx;
        for d in 0..x.len() {
            let (lo, hi) = family.bounds[d];
            let h = family.step(d);
            let (a, b) = ((x[d] - h).max(lo), (x[d] + h).min(hi));
            let mut slice = |t: f64| {
                evaluations += 1;
                let mut y = x.clone();
                y[d] = t;
                score(&y)
            };
            let (t, ft) = golden_max(&mut slice, a, b, x[d], fx)?;
            x[d] = t;
            fx = ft;
        }
        if fx - before < IMPROVEMENT_TOLERANCE {
            converged = true;
            break;
        }
    }

    let p = protocol_at(cfg, &x)?;
    let angles = CoplanarAngles::recover(&p);
    Ok(OptimizeResult {
        objective,
        scheme: cfg.scheme,
        point: OptimizePoint {
            theta10: angles.theta10,
            theta21: angles.theta21,
            spherical: cfg.full_sphere.then(|| [x[0], x[1], x[2], x[3]]),
            axes: p.axes,
        },
        value: sign * fx,
        grid_value: sign * grid_score,
        iterations,
        converged,
        evaluations,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LambdaOptimum {
    pub lambda: f64,
    pub inner: OptimizeResult,
}

/// Maximizes `Re L_lambda` jointly over geometry and `lambda eps` in `[0, 2 pi]`:
/// a 33-point scan in `lambda` followed by golden section on the inner optimum.
pub fn maximize_re_l_over_lambda(cfg: &OptimizeConfig) -> Result<LambdaOptimum> {
    let inner = |le: f64| {
        optimize(
            Objective::MaximizeReL {
                lambda: le / cfg.epsilon,
            },
            cfg,
        )
    };
    let n = 33;
    let step = 2.0 * PI / (n - 1) as f64;
    let scan = (0..n)
        .into_par_iter()
        .map(|i| inner(step * i as f64).map(|r| r.value))
        .collect::<Result<Vec<f64>>>()?;
    let best = scan
        .iter()
        .enumerate()
        .fold(0, |b, (i, &v)| if v > scan[b] { i } else { b });
    let le0 = step * best as f64;
    let mut f = |le: f64| inner(le).map(|r| r.value);
    let (le, _) = golden_max(
        &mut f,
        (le0 - step).max(0.0),
        (le0 + step).min(2.0 * PI),
        le0,
        scan[best],
    )?;
    Ok(LambdaOptimum {
        lambda: le / cfg.epsilon,
        inner: inner(le)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};

    #[test]
    fn golden_finds_parabola_peak() {
        let mut f = |x: f64| Ok(-(x - 0.3).powi(2));
        let (x, fx) = golden_max(&mut f, 0.0, 1.0, 0.0, -0.09).unwrap();
        assert!((x - 0.3).abs() < 1e-7);
        assert!(fx <= 0.0 && fx > -1e-14);
    }

    #[test]
    fn golden_keeps_seed_when_unbeaten() {
        let mut f = |x: f64| Ok(if x == 0.5 { 1.0 } else { 0.0 });
        assert_eq!(golden_max(&mut f, 0.0, 1.0, 0.5, 1.0).unwrap(), (0.5, 1.0));
    }

    #[test]
    fn grid_includes_domain_ends() {
        let pts = Family::new(false).grid_points();
        assert_eq!(pts.len(), 64 * 64);
        assert_eq!(pts[0], vec![0.0, 0.0]);
        assert_eq!(pts[pts.len() - 1], vec![PI, PI]);
        assert_eq!(pts[1], vec![0.0, PI / 63.0]);
    }

    #[test]
    fn minimizes_second_moment() {
        let r = optimize(
            Objective::MinimizeEvenMoment { k: 2 },
            &OptimizeConfig::coplanar(SchemeKind::Tpm, 1.0, 0.7),
        )
        .unwrap();
        assert!(r.converged);
        assert!((r.value + 0.25).abs() < 1e-6, "{r:?}");
        assert!((r.point.theta10 - FRAC_PI_3).abs() < 1e-4);
        assert!((r.point.theta21 - FRAC_PI_3).abs() < 1e-4);
        assert!(r.value <= r.grid_value);
    }

    #[test]
    fn maximizes_first_moment() {
        let r = optimize(
            Objective::MaximizeAbsOddMoment { k: 1 },
            &OptimizeConfig::coplanar(SchemeKind::Tpm, 1.0, 5.0),
        )
        .unwrap();
        assert!((r.value - 0.5 * 2.5f64.tanh()).abs() < 1e-6);
        assert!((r.point.theta10 - FRAC_PI_2).abs() < 1e-4);
        assert!((r.point.theta21 - FRAC_PI_2).abs() < 1e-4);
        assert!(r.value >= r.grid_value);
    }

    #[test]
    fn maximizes_imaginary_parts() {
        let tpm = optimize(
            Objective::MaximizeAbsImL { lambda: FRAC_PI_2 },
            &OptimizeConfig::coplanar(SchemeKind::Tpm, 1.0, 5.0),
        )
        .unwrap();
        assert!((tpm.value - 0.5 * 2.5f64.tanh()).abs() < 1e-6);
        let fcs = optimize(
            Objective::MaximizeAbsImL { lambda: PI },
            &OptimizeConfig::coplanar(SchemeKind::Fcs, 1.0, 5.0),
        )
        .unwrap();
        assert!((fcs.value - 2.5f64.tanh()).abs() < 1e-6);
    }

    #[test]
    fn rejects_mismatched_orders() {
        let cfg = OptimizeConfig::coplanar(SchemeKind::Tpm, 1.0, 1.0);
        assert!(optimize(Objective::MinimizeEvenMoment { k: 3 }, &cfg).is_err());
        assert!(optimize(Objective::MaximizeAbsOddMoment { k: 2 }, &cfg).is_err());
        assert!(optimize(Objective::MaximizeReL { lambda: f64::NAN }, &cfg).is_err());
        let bad = OptimizeConfig::coplanar(SchemeKind::Tpm, -1.0, 1.0);
        assert!(optimize(Objective::MinimizeEvenMoment { k: 2 }, &bad).is_err());
    }

    #[test]
    fn full_sphere_does_not_beat_coplanar() {
        let planar = OptimizeConfig::coplanar(SchemeKind::Tpm, 1.0, 5.0);
        let sphere = OptimizeConfig {
            full_sphere: true,
            ..planar
        };
        for objective in [
            Objective::MinimizeEvenMoment { k: 2 },
            Objective::MaximizeAbsOddMoment { k: 1 },
        ] {
            let a = optimize(objective, &planar).unwrap();
            let b = optimize(objective, &sphere).unwrap();
            let gain = if objective.is_minimization() {
                a.value - b.value
            } else {
                b.value - a.value
            };
            assert!(
                gain <= 1e-6,
                "{objective:?}: coplanar {} sphere {}",
                a.value,
                b.value
            );
        }
    }
}
