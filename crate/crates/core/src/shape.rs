//! Shape diagnosis and shape-preserving Hermite interpolation.
//!
//! A GQS is monotone (convex) exactly when its spline control polygon is, so
//! every check here works on the coefficient sequence and the polygon slopes.
//! The fitting routines pick one `θ_i` per interval from the data so that the
//! resulting control polygon has the requested shape.

use crate::basis::{hermite_to_spline, scp, GqsSpline, HermiteData};
use crate::error::{GqsError, Result};
use crate::geometry::{beta_from_theta, BetaSequence, GqsSpace, Partition};

/// Relative tolerance used by [`diagnose`] for the equality cases of the
/// shape predicates.
pub const SHAPE_REL_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ShapeReport {
    pub monotone_increasing: bool,
    pub monotone_decreasing: bool,
    pub convex: bool,
    pub concave: bool,
    /// First coefficient index `k` at which `γ_k - γ_{k-1}` has the sign
    /// opposite to the first nonzero difference. `None` when the sequence is
    /// monotone.
    pub first_violation: Option<usize>,
}

/// Shape of the spline control polygon with a small relative tolerance for
/// rounding in the equality cases.
pub fn diagnose(spline: &GqsSpline) -> ShapeReport {
    diagnose_with_tol(spline, SHAPE_REL_TOL)
}

/// As [`diagnose`]; `rel_tol = 0` gives the exact predicates.
pub fn diagnose_with_tol(spline: &GqsSpline, rel_tol: f64) -> ShapeReport {
    let g = spline.coeffs();
    let scale = g.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let eps = rel_tol * scale;
    let diffs: Vec<f64> = g.windows(2).map(|w| w[1] - w[0]).collect();
    let monotone_increasing = diffs.iter().all(|&d| d >= -eps);
    let monotone_decreasing = diffs.iter().all(|&d| d <= eps);

    let first_violation = if monotone_increasing || monotone_decreasing {
        None
    } else {
        let sense = diffs.iter().copied().find(|d| d.abs() > eps).unwrap_or(0.0).signum();
        diffs
            .iter()
            .position(|&d| d * sense < -eps)
            .map(|j| j + 1)
    };

    let slopes = scp(spline).slopes();
    let slope_scale = slopes.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let seps = rel_tol * slope_scale;
    let convex = slopes.windows(2).all(|w| w[1] - w[0] >= -seps);
    let concave = slopes.windows(2).all(|w| w[1] - w[0] <= seps);

    ShapeReport {
        monotone_increasing,
        monotone_decreasing,
        convex,
        concave,
        first_violation,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Monotonicity {
    Increasing,
    Decreasing,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Convexity {
    Convex,
    Concave,
}

/// Which branch of the θ selection an interval took.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FitCase {
    /// `θ = 1/4`: an ordinary quadratic piece.
    Quadratic,
    /// Monotone fit with `μ > 2τ`; `θ = min(1/4, θ̄/2)`.
    MonotoneReduced,
    /// Convex fit with `τ` below the quadratic window.
    ConvexLow,
    /// Convex fit with `τ` above the quadratic window.
    ConvexHigh,
}

/// Per-interval quantities driving the θ choice.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntervalData {
    /// Chord slope `τ_i = (y_i - y_{i-1}) / h_i`.
    pub tau: f64,
    /// Mean end slope `μ_i = (p_{i-1} + p_i) / 2`.
    pub mu: f64,
    /// Critical threshold `θ̄_i`; infinite when unconstrained.
    pub theta_bar: f64,
    pub case: FitCase,
    pub theta: f64,
}

/// A fitted interpolant together with the chosen parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct ShapeFit {
    pub spline: GqsSpline,
    pub intervals: Vec<IntervalData>,
}

impl ShapeFit {
    pub fn thetas(&self) -> Vec<f64> {
        self.intervals.iter().map(|d| d.theta).collect()
    }

    pub fn betas(&self) -> &[f64] {
        self.spline.space().betas().as_slice()
    }
}

fn check_len(partition: &Partition, data: &HermiteData) -> Result<()> {
    if data.len() != partition.knots().len() {
        return Err(GqsError::LengthMismatch {
            what: "hermite data",
            expected: partition.knots().len(),
            found: data.len(),
        });
    }
    Ok(())
}

fn chord_and_mean(partition: &Partition, data: &HermiteData, i: usize) -> (f64, f64) {
    let tau = (data.values[i] - data.values[i - 1]) / partition.h(i);
    let mu = 0.5 * (data.slopes[i - 1] + data.slopes[i]);
    (tau, mu)
}

fn negated(data: &HermiteData) -> HermiteData {
    HermiteData {
        values: data.values.iter().map(|v| -v).collect(),
        slopes: data.slopes.iter().map(|v| -v).collect(),
    }
}

fn negate_fit(fit: ShapeFit) -> ShapeFit {
    let (space, coeffs) = fit.spline.into_parts();
    let coeffs = coeffs.into_iter().map(|c| -c).collect();
    let intervals = fit
        .intervals
        .into_iter()
        .map(|d| IntervalData {
            tau: -d.tau,
            mu: -d.mu,
            ..d
        })
        .collect();
    ShapeFit {
        spline: GqsSpline::new(space, coeffs).expect("negation keeps coefficients finite"),
        intervals,
    }
}

fn assemble(partition: &Partition, data: &HermiteData, intervals: Vec<IntervalData>) -> Result<ShapeFit> {
    let betas = intervals
        .iter()
        .map(|d| beta_from_theta(d.theta))
        .collect::<Result<Vec<_>>>()?;
    let space = GqsSpace::new(partition.clone(), BetaSequence::new(betas)?)?;
    let spline = hermite_to_spline(&space, data)?;
    Ok(ShapeFit { spline, intervals })
}

/// Monotone interpolant of strictly monotone data.
///
/// For increasing data (`Δy_i > 0`, `p_i > 0`) the SCP is increasing iff
/// `θ_i < θ̄_i = τ_i / (2 μ_i)` on every interval. Intervals with
/// `μ_i <= 2 τ_i` keep `θ_i = 1/4`; the others use `min(1/4, θ̄_i / 2)`.
pub fn fit_monotone(partition: &Partition, data: &HermiteData, sense: Monotonicity) -> Result<ShapeFit> {
    check_len(partition, data)?;
    match sense {
        Monotonicity::Increasing => fit_increasing(partition, data),
        Monotonicity::Decreasing => fit_increasing(partition, &negated(data))
            .map_err(|e| relabel(e, "increasing", "decreasing"))
            .map(negate_fit),
    }
}

fn relabel(e: GqsError, from: &str, to: &str) -> GqsError {
    match e {
        GqsError::ShapePrecondition { interval, condition } => GqsError::ShapePrecondition {
            interval,
            condition: format!("{} (data negated)", condition.replace(from, to)),
        },
        other => other,
    }
}

fn fit_increasing(partition: &Partition, data: &HermiteData) -> Result<ShapeFit> {
    let n = partition.intervals();
    for (k, &p) in data.slopes.iter().enumerate() {
        if p.is_nan() || p <= 0.0 {
            return Err(GqsError::ShapePrecondition {
                interval: k.max(1),
                condition: format!("slope p_{k} = {p} must be > 0 for increasing data"),
            });
        }
    }
    let mut intervals = Vec::with_capacity(n);
    for i in 1..=n {
        let dy = data.values[i] - data.values[i - 1];
        if dy.is_nan() || dy <= 0.0 {
            return Err(GqsError::ShapePrecondition {
                interval: i,
                condition: format!("Δy_{} = {dy} must be > 0 for increasing data", i - 1),
            });
        }
        let (tau, mu) = chord_and_mean(partition, data, i);
        let theta_bar = 0.5 * tau / mu;
        let (case, theta) = if mu <= 2.0 * tau {
            (FitCase::Quadratic, 0.25)
        } else {
            (FitCase::MonotoneReduced, (0.5 * theta_bar).min(0.25))
        };
        intervals.push(IntervalData {
            tau,
            mu,
            theta_bar,
            case,
            theta,
        });
    }
    assemble(partition, data, intervals)
}

/// Convex (or concave) interpolant of strictly convex data
/// `p_{i-1} < τ_i < p_i`.
///
/// The interval is convex iff
/// `(1-θ) p_{i-1} + θ p_i <= τ_i <= (1-θ) p_i + θ p_{i-1}`. Inside the window
/// `[(3p_{i-1} + p_i)/4, (p_{i-1} + 3p_i)/4]` θ = 1/4 works; below it
/// `θ̄ = (τ - p_{i-1}) / (p_i - p_{i-1})`, above it
/// `θ̄ = (p_i - τ) / (p_i - p_{i-1})`, and `θ = min(1/4, θ̄)`.
pub fn fit_convex(partition: &Partition, data: &HermiteData, sense: Convexity) -> Result<ShapeFit> {
    check_len(partition, data)?;
    match sense {
        Convexity::Convex => fit_strictly_convex(partition, data),
        Convexity::Concave => fit_strictly_convex(partition, &negated(data))
            .map_err(|e| relabel(e, "convex", "concave"))
            .map(negate_fit),
    }
}

fn fit_strictly_convex(partition: &Partition, data: &HermiteData) -> Result<ShapeFit> {
    let n = partition.intervals();
    let mut intervals = Vec::with_capacity(n);
    for i in 1..=n {
        let (tau, mu) = chord_and_mean(partition, data, i);
        let (p0, p1) = (data.slopes[i - 1], data.slopes[i]);
        if !(p0 < tau && tau < p1) {
            return Err(GqsError::ShapePrecondition {
                interval: i,
                condition: format!(
                    "p_{} < τ_{i} < p_{i} violated ({p0} < {tau} < {p1}) for convex data",
                    i - 1
                ),
            });
        }
        let lower = 0.25 * (3.0 * p0 + p1);
        let upper = 0.25 * (p0 + 3.0 * p1);
        let (case, theta_bar) = if tau < lower {
            (FitCase::ConvexLow, (tau - p0) / (p1 - p0))
        } else if tau > upper {
            (FitCase::ConvexHigh, (p1 - tau) / (p1 - p0))
        } else {
            (FitCase::Quadratic, f64::INFINITY)
        };
        intervals.push(IntervalData {
            tau,
            mu,
            theta_bar,
            case,
            theta: theta_bar.min(0.25),
        });
    }
    assemble(partition, data, intervals)
}

/// Interpolant that is both monotone and convex/concave. Requires convex
/// (concave) data whose slopes all have the sign of the monotone sense; the
/// θ choice is the convex one, which then also keeps the SCP monotone.
pub fn fit_monotone_convex(
    partition: &Partition,
    data: &HermiteData,
    monotone: Monotonicity,
    curvature: Convexity,
) -> Result<ShapeFit> {
    check_len(partition, data)?;
    for (k, &p) in data.slopes.iter().enumerate() {
        let ok = match monotone {
            Monotonicity::Increasing => p > 0.0,
            Monotonicity::Decreasing => p < 0.0,
        };
        if !ok {
            let want = match monotone {
                Monotonicity::Increasing => "> 0 for increasing",
                Monotonicity::Decreasing => "< 0 for decreasing",
            };
            return Err(GqsError::ShapePrecondition {
                interval: k.max(1),
                condition: format!("slope p_{k} = {p} must be {want} data"),
            });
        }
    }
    fit_convex(partition, data, curvature)
}
