//! Exact audits of the counter-example models.
//!
//! The central quantity is the X-averaged conditional of Bob's outcome at a
//! fixed hidden-variable value v:
//!
//! ```text
//! (1/2) * ( P[Y = y | theta, phi, v, X = +1] + P[Y = y | theta, phi, v, X = -1] )
//! ```
//!
//! Each conditional is a deterministic indicator, so the average takes only
//! the values 0, 1/2, and 1: 1 when v lies in both response sets, 1/2 when
//! it lies in exactly one, 0 when it lies in neither (for y = +1; the y = -1
//! values are the complements). If the response sets partition the unit
//! interval, every v lies in exactly one set, the average is 1/2 for every
//! setting, and averaging over X removes all theta dependence. If the sets
//! overlap, the same v can move between the three cases as theta varies —
//! the averaged conditional then depends on theta, even though Bob's
//! *observable* marginal stays exactly 1/2 throughout.
//!
//! All probabilities here are computed exactly via interval measures; the
//! Monte Carlo estimates in [`crate::sampler`] serve as the independent
//! cross-check.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{CounterexampleModel, HVValue, ResponseSets};
use crate::oracle::{conditional_y_given_x, Angle, Outcome, EXACT_TOL};

// ---------------------------------------------------------------------------
// Report types
// ---------------------------------------------------------------------------

/// Result of scanning the averaged conditional across analyzer settings for
/// one fixed (phi, v, y).
#[derive(Debug, Clone, Serialize)]
pub struct ThetaScanReport {
    pub phi: Angle,
    pub v: HVValue,
    pub y: Outcome,
    pub grid: Vec<Angle>,
    /// Averaged conditional at each grid point; entries in {0, 1/2, 1}.
    pub values: Vec<f64>,
    /// max - min of `values`.
    pub spread: f64,
}

/// Structured result of one audit predicate.
///
/// `passed` holds exactly when `quantity <= tolerance`. `detail` carries
/// the concrete points behind the verdict, enough to replay any failure
/// from the report alone.
#[derive(Debug, Clone, Serialize)]
pub struct AuditReport {
    pub name: String,
    pub quantity: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub detail: Vec<DetailRecord>,
}

impl AuditReport {
    fn new(name: &str, quantity: f64, tolerance: f64, detail: Vec<DetailRecord>) -> Self {
        AuditReport {
            name: name.to_string(),
            quantity,
            tolerance,
            passed: quantity <= tolerance,
            detail,
        }
    }
}

/// One reproducible data point behind an audit verdict.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DetailRecord {
    /// A v whose averaged conditional changes across the theta grid, with
    /// the grid points attaining its extremes.
    SpreadWitness {
        phi: Angle,
        v: HVValue,
        y: Outcome,
        theta_min: Angle,
        value_min: f64,
        theta_max: Angle,
        value_max: f64,
        spread: f64,
    },
    /// Model-vs-closed-form conditional deviation at one grid point.
    ConditionalDeviation {
        theta: Angle,
        phi: Angle,
        x: Outcome,
        y: Outcome,
        model: f64,
        oracle: f64,
        deviation: f64,
    },
    /// Observable-marginal deviation from 1/2 at one grid point.
    MarginalDeviation {
        theta: Angle,
        phi: Angle,
        y: Outcome,
        marginal: f64,
        deviation: f64,
    },
    /// Averaged-conditional deviation from 1/2 at one v.
    UniformDeviation {
        theta: Angle,
        phi: Angle,
        v: HVValue,
        y: Outcome,
        value: f64,
        deviation: f64,
    },
}

impl DetailRecord {
    pub fn deviation(&self) -> f64 {
        match self {
            DetailRecord::SpreadWitness { spread, .. } => *spread,
            DetailRecord::ConditionalDeviation { deviation, .. }
            | DetailRecord::MarginalDeviation { deviation, .. }
            | DetailRecord::UniformDeviation { deviation, .. } => *deviation,
        }
    }
}

// ---------------------------------------------------------------------------
// Core quantity
// ---------------------------------------------------------------------------

/// The X-averaged conditional probability of Y = y at hidden value v:
/// the mean of the two deterministic indicators, one per X value.
/// Always one of {0, 1/2, 1}.
pub fn averaged_conditional(
    model: &CounterexampleModel,
    theta: Angle,
    phi: Angle,
    v: HVValue,
    y: Outcome,
) -> f64 {
    averaged_conditional_at(&model.response_sets(theta, phi), v, y)
}

/// Same quantity from precomputed response sets; scans hoist the sets per
/// grid point.
pub fn averaged_conditional_at(sets: &ResponseSets, v: HVValue, y: Outcome) -> f64 {
    let hit_plus = sets.eval(v, Outcome::Plus) == y;
    let hit_minus = sets.eval(v, Outcome::Minus) == y;
    0.5 * (hit_plus as u8 + hit_minus as u8) as f64
}

/// Evaluates the averaged conditional at each theta of `grid`.
pub fn theta_scan(
    model: &CounterexampleModel,
    phi: Angle,
    v: HVValue,
    y: Outcome,
    grid: &[Angle],
) -> Result<ThetaScanReport> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let values: Vec<f64> = grid
        .iter()
        .map(|&theta| averaged_conditional(model, theta, phi, v, y))
        .collect();
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok(ThetaScanReport {
        phi,
        v,
        y,
        grid: grid.to_vec(),
        values,
        spread: max - min,
    })
}

// ---------------------------------------------------------------------------
// Audit predicates
// ---------------------------------------------------------------------------

/// Checks whether the averaged conditional is independent of theta.
///
/// Scans every v of `v_grid` across `theta_grid` at fixed (phi, y);
/// `quantity` is the largest spread found. The disjoint layout yields
/// spread 0 identically; the overlapping layout yields spread 1/2 for
/// almost every v, and each offending v is emitted as a
/// [`DetailRecord::SpreadWitness`]. When nothing exceeds the tolerance the
/// single worst point is still recorded, so a pass replays too.
pub fn theta_independence_check(
    model: &CounterexampleModel,
    phi: Angle,
    y: Outcome,
    theta_grid: &[Angle],
    v_grid: &[HVValue],
    tol: f64,
) -> Result<AuditReport> {
    if theta_grid.is_empty() || v_grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    // per-v extremes with the thetas attaining them
    let mut lo = vec![(f64::INFINITY, theta_grid[0]); v_grid.len()];
    let mut hi = vec![(f64::NEG_INFINITY, theta_grid[0]); v_grid.len()];
    for &theta in theta_grid {
        let sets = model.response_sets(theta, phi);
        for (k, &v) in v_grid.iter().enumerate() {
            let value = averaged_conditional_at(&sets, v, y);
            if value < lo[k].0 {
                lo[k] = (value, theta);
            }
            if value > hi[k].0 {
                hi[k] = (value, theta);
            }
        }
    }
    let witness = |k: usize| DetailRecord::SpreadWitness {
        phi,
        v: v_grid[k],
        y,
        theta_min: lo[k].1,
        value_min: lo[k].0,
        theta_max: hi[k].1,
        value_max: hi[k].0,
        spread: hi[k].0 - lo[k].0,
    };
    let spreads: Vec<f64> = (0..v_grid.len()).map(|k| hi[k].0 - lo[k].0).collect();
    let quantity = spreads.iter().cloned().fold(0.0, f64::max);
    let mut detail: Vec<DetailRecord> = (0..v_grid.len())
        .filter(|&k| spreads[k] > tol)
        .map(witness)
        .collect();
    if detail.is_empty() {
        let worst = (0..v_grid.len())
            .max_by(|&a, &b| spreads[a].total_cmp(&spreads[b]))
            .expect("non-empty v grid");
        detail.push(witness(worst));
    }
    Ok(AuditReport::new("theta-independence", quantity, tol, detail))
}

/// Bob's observable marginal P[Y = y], integrated exactly over both local
/// hidden variables by interval measure. Equals 1/2 for both layouts at
/// every setting pair: the setting dependence lives only below the
/// observable level.
pub fn observable_marginal_y(
    model: &CounterexampleModel,
    theta: Angle,
    phi: Angle,
    y: Outcome,
) -> f64 {
    let sets = model.response_sets(theta, phi);
    // P[X = +1] = P[X = -1] = 1/2 from the threshold rule on uniform U
    0.5 * sets.y_set(Outcome::Plus, y).measure() + 0.5 * sets.y_set(Outcome::Minus, y).measure()
}

/// Checks that the model's induced conditionals match the closed-form
/// singlet conditionals on every grid point, by exact interval measure.
pub fn faithfulness_check(
    model: &CounterexampleModel,
    grid: &[(Angle, Angle)],
    tol: f64,
) -> Result<AuditReport> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let mut detail = Vec::new();
    let mut worst: Option<DetailRecord> = None;
    let mut quantity = 0.0_f64;
    for &(theta, phi) in grid {
        let sets = model.response_sets(theta, phi);
        for &x in &Outcome::BOTH {
            for &y in &Outcome::BOTH {
                let model_p = sets.y_set(x, y).measure();
                let oracle_p = conditional_y_given_x(theta, phi, y, x);
                let deviation = (model_p - oracle_p).abs();
                let record = DetailRecord::ConditionalDeviation {
                    theta,
                    phi,
                    x,
                    y,
                    model: model_p,
                    oracle: oracle_p,
                    deviation,
                };
                if deviation > quantity {
                    quantity = deviation;
                    worst = Some(record.clone());
                }
                if deviation > tol {
                    detail.push(record);
                }
            }
        }
    }
    if detail.is_empty() {
        detail.extend(worst);
    }
    Ok(AuditReport::new("faithfulness", quantity, tol, detail))
}

/// Checks that the observable marginal of Y equals 1/2 across a settings
/// grid, for both outcomes.
pub fn marginal_nonsignaling_check(
    model: &CounterexampleModel,
    grid: &[(Angle, Angle)],
    tol: f64,
) -> Result<AuditReport> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let mut detail = Vec::new();
    let mut worst: Option<DetailRecord> = None;
    let mut quantity = 0.0_f64;
    for &(theta, phi) in grid {
        for &y in &Outcome::BOTH {
            let marginal = observable_marginal_y(model, theta, phi, y);
            let deviation = (marginal - 0.5).abs();
            let record = DetailRecord::MarginalDeviation {
                theta,
                phi,
                y,
                marginal,
                deviation,
            };
            if deviation > quantity {
                quantity = deviation;
                worst = Some(record.clone());
            }
            if deviation > tol {
                detail.push(record);
            }
        }
    }
    if detail.is_empty() {
        detail.extend(worst);
    }
    Ok(AuditReport::new("marginal-nonsignaling", quantity, tol, detail))
}

/// Checks whether, at fixed settings, every hidden value v makes the
/// averaged conditional exactly 1/2 — i.e. whether Y is uniform given v
/// once X is averaged out.
///
/// Evaluated two ways that must agree: on a dense v grid (uniform points
/// plus all response-set endpoints), and by interval algebra — the maximal
/// deviation is 1/2 exactly when the two response sets fail to partition
/// the unit interval, via a nonempty intersection or a nonempty uncovered
/// remainder.
pub fn uniform_conditional_check(
    model: &CounterexampleModel,
    theta: Angle,
    phi: Angle,
    tol: f64,
) -> AuditReport {
    let sets = model.response_sets(theta, phi);
    let y = Outcome::Plus;

    // interval-algebra route
    let uncovered = sets
        .plus_if_x_plus
        .union(&sets.plus_if_x_minus)
        .complement();
    let algebra_dev = if sets.plus_for_both.is_empty() && uncovered.is_empty() {
        0.0
    } else {
        0.5
    };

    // dense-grid route
    let mut detail = Vec::new();
    let mut worst: Option<DetailRecord> = None;
    let mut grid_dev = 0.0_f64;
    for v in v_grid_for_sets(DEFAULT_V_POINTS, &sets) {
        let value = averaged_conditional_at(&sets, v, y);
        let deviation = (value - 0.5).abs();
        let record = DetailRecord::UniformDeviation {
            theta,
            phi,
            v,
            y,
            value,
            deviation,
        };
        if deviation > grid_dev {
            grid_dev = deviation;
            worst = Some(record.clone());
        }
        if deviation > tol {
            detail.push(record);
        }
    }
    if detail.is_empty() {
        detail.extend(worst);
    }
    debug_assert!(
        (algebra_dev - grid_dev).abs() <= EXACT_TOL,
        "grid must realize the interval-algebra deviation"
    );
    AuditReport::new(
        "uniform-conditional",
        algebra_dev.max(grid_dev),
        tol,
        detail,
    )
}

// ---------------------------------------------------------------------------
// Grids
// ---------------------------------------------------------------------------

/// Default number of analyzer settings per scan.
pub const DEFAULT_THETA_POINTS: usize = 50;
/// Default number of uniform hidden-variable points per scan.
pub const DEFAULT_V_POINTS: usize = 1000;

/// `n` uniform analyzer settings on [0, pi).
pub fn theta_grid(n: usize) -> Vec<Angle> {
    (0..n).map(|k| Angle::new(k as f64 * PI / n as f64)).collect()
}

/// `n x n` uniform setting pairs on [0, pi)^2.
pub fn settings_grid(n: usize) -> Vec<(Angle, Angle)> {
    let axis = theta_grid(n);
    axis.iter()
        .flat_map(|&t| axis.iter().map(move |&p| (t, p)))
        .collect()
}

/// `n` uniform points of [0, 1), plus every response-set endpoint the model
/// produces at phi across `theta_grid` — endpoints are where membership
/// flips, so scans never straddle a flip unsampled.
pub fn v_grid(
    n: usize,
    model: &CounterexampleModel,
    phi: Angle,
    theta_grid: &[Angle],
) -> Vec<HVValue> {
    let mut points: Vec<f64> = (0..n).map(|k| k as f64 / n as f64).collect();
    for &theta in theta_grid {
        points.extend(model.response_sets(theta, phi).endpoints());
    }
    points.sort_by(f64::total_cmp);
    points.dedup();
    points.into_iter().map(HVValue::from_unit).collect()
}

fn v_grid_for_sets(n: usize, sets: &ResponseSets) -> Vec<HVValue> {
    let mut points: Vec<f64> = (0..n).map(|k| k as f64 / n as f64).collect();
    points.extend(sets.endpoints());
    points.sort_by(f64::total_cmp);
    points.dedup();
    points.into_iter().map(HVValue::from_unit).collect()
}
