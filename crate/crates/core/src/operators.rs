//! Approximation operators on a GQS space.
//!
//! * The quasi-interpolant `Qf = Σ f(ξ_i) B_{2i} + f(η_i) B_{2i+1}`: exact on
//!   affine functions, sup-norm 1, shape preserving.
//! * The Lagrange interpolant `Lf`, matching `f` at `a`, `b` and the quarter
//!   points `m'_i`, `m''_i` of every interval. Its interior coefficients
//!   solve a strictly diagonally dominant tridiagonal system.

use std::cmp::Ordering;
use std::ops::RangeInclusive;

use rand::Rng;

use crate::basis::{GqsSpline, LocalCoeffs};
use crate::error::{GqsError, Result};
use crate::geometry::{BetaSequence, GqsSpace, Partition};

/// A square tridiagonal system `A x = rhs`.
///
/// `sub[j] = A[j+1][j]`, `sup[j] = A[j][j+1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Tridiagonal {
    pub sub: Vec<f64>,
    pub diag: Vec<f64>,
    pub sup: Vec<f64>,
    pub rhs: Vec<f64>,
}

impl Tridiagonal {
    pub fn new(sub: Vec<f64>, diag: Vec<f64>, sup: Vec<f64>, rhs: Vec<f64>) -> Result<Self> {
        let n = diag.len();
        let off = n.saturating_sub(1);
        for (what, len, want) in [("sub", sub.len(), off), ("sup", sup.len(), off), ("rhs", rhs.len(), n)] {
            if len != want {
                return Err(GqsError::LengthMismatch {
                    what,
                    expected: want,
                    found: len,
                });
            }
        }
        Ok(Self { sub, diag, sup, rhs })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    fn off_diagonal_sum(&self, row: usize) -> f64 {
        let left = if row > 0 { self.sub[row - 1].abs() } else { 0.0 };
        let right = if row + 1 < self.len() { self.sup[row].abs() } else { 0.0 };
        left + right
    }

    /// First row where `|diag| > |sub| + |sup|` fails.
    pub fn dominance_violation(&self) -> Option<usize> {
        (0..self.len()).find(|&r| self.diag[r].abs().partial_cmp(&self.off_diagonal_sum(r)) != Some(Ordering::Greater))
    }

    pub fn mul(&self, x: &[f64]) -> Vec<f64> {
        (0..self.len())
            .map(|r| {
                let mut v = self.diag[r] * x[r];
                if r > 0 {
                    v += self.sub[r - 1] * x[r - 1];
                }
                if r + 1 < self.len() {
                    v += self.sup[r] * x[r + 1];
                }
                v
            })
            .collect()
    }

    /// `max |A x - rhs|`.
    pub fn residual(&self, x: &[f64]) -> f64 {
        self.mul(x)
            .iter()
            .zip(&self.rhs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Largest absolute matrix entry.
    pub fn scale(&self) -> f64 {
        self.diag
            .iter()
            .chain(&self.sub)
            .chain(&self.sup)
            .fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Thomas elimination without pivoting; refuses systems that are not
/// strictly diagonally dominant.
pub fn solve_tridiagonal(system: &Tridiagonal) -> Result<Vec<f64>> {
    if let Some(row) = system.dominance_violation() {
        return Err(GqsError::NotDiagonallyDominant { row });
    }
    let n = system.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut denom = system.diag[0];
    c[0] = if n > 1 { system.sup[0] / denom } else { 0.0 };
    d[0] = system.rhs[0] / denom;
    for r in 1..n {
        let a = system.sub[r - 1];
        denom = system.diag[r] - a * c[r - 1];
        if r + 1 < n {
            c[r] = system.sup[r] / denom;
        }
        d[r] = (system.rhs[r] - a * d[r - 1]) / denom;
    }
    let mut x = d;
    for r in (0..n - 1).rev() {
        x[r] -= c[r] * x[r + 1];
    }
    Ok(x)
}

fn sample_all(f: &impl Fn(f64) -> f64, xs: &[f64]) -> Result<Vec<f64>> {
    xs.iter()
        .map(|&x| {
            let v = f(x);
            if v.is_finite() {
                Ok(v)
            } else {
                Err(GqsError::NonFiniteSample { x })
            }
        })
        .collect()
}

/// Quasi-interpolant `Qf`: coefficients are `f` at the Greville-type
/// abscissae `ξ_0, η_0, …, ξ_n, η_n`.
pub fn quasi_interpolant(space: &GqsSpace, f: impl Fn(f64) -> f64) -> Result<GqsSpline> {
    let values = sample_all(&f, &space.greville())?;
    GqsSpline::new(space.clone(), values)
}

/// `Q` applied to values already sampled at [`GqsSpace::greville`].
pub fn quasi_interpolant_from_values(space: &GqsSpace, values: Vec<f64>) -> Result<GqsSpline> {
    GqsSpline::new(space.clone(), values)
}

/// Interpolation nodes of `L`: `a, m'_1, m''_1, …, m'_n, m''_n, b`.
pub fn lagrange_nodes(space: &GqsSpace) -> Vec<f64> {
    let n = space.n();
    let mut nodes = Vec::with_capacity(2 * n + 2);
    nodes.push(space.partition().a());
    for i in 1..=n {
        let (q1, q2) = space.quarter_points(i);
        nodes.push(q1);
        nodes.push(q2);
    }
    nodes.push(space.partition().b());
    nodes
}

fn check_node_values(space: &GqsSpace, values: &[f64]) -> Result<()> {
    if values.len() != space.dimension() {
        return Err(GqsError::LengthMismatch {
            what: "node values",
            expected: space.dimension(),
            found: values.len(),
        });
    }
    if let Some(index) = values.iter().position(|v| !v.is_finite()) {
        return Err(GqsError::NonFinite {
            what: "node values",
            index,
        });
    }
    Ok(())
}

/// The `2n × 2n` system for `γ_1..γ_{2n}`; `γ_0 = f(a)` and
/// `γ_{2n+1} = f(b)` are moved to the right-hand side. Rows for interval `i`:
///
/// ```text
/// ω_{i-1} γ_{2i-2} + (3 - ω_{i-1} - β_i/2) γ_{2i-1} + (1 + β_i/2) γ_{2i} = 4 f(m'_i)
/// (1 + β_i/2) γ_{2i-1} + (2 + ω_i - β_i/2) γ_{2i} + (1 - ω_i) γ_{2i+1}  = 4 f(m''_i)
/// ```
pub fn lagrange_system(space: &GqsSpace, node_values: &[f64]) -> Result<Tridiagonal> {
    check_node_values(space, node_values)?;
    let n = space.n();
    let m = 2 * n;
    let (fa, fb) = (node_values[0], node_values[m + 1]);
    let mut sub = vec![0.0; m - 1];
    let mut diag = vec![0.0; m];
    let mut sup = vec![0.0; m - 1];
    let mut rhs = vec![0.0; m];
    for i in 1..=n {
        let hb = 0.5 * space.beta(i);
        let (wl, wr) = (space.omega(i - 1), space.omega(i));
        let r1 = 2 * i - 2;
        let r2 = 2 * i - 1;

        diag[r1] = 3.0 - wl - hb;
        sup[r1] = 1.0 + hb;
        rhs[r1] = 4.0 * node_values[2 * i - 1];
        if i == 1 {
            rhs[r1] -= wl * fa;
        } else {
            sub[r1 - 1] = wl;
        }

        sub[r2 - 1] = 1.0 + hb;
        diag[r2] = 2.0 + wr - hb;
        rhs[r2] = 4.0 * node_values[2 * i];
        if i == n {
            rhs[r2] -= (1.0 - wr) * fb;
        } else {
            sup[r2] = 1.0 - wr;
        }
    }
    Tridiagonal::new(sub, diag, sup, rhs)
}

/// `L` from values at [`lagrange_nodes`].
pub fn lagrange_from_nodes(space: &GqsSpace, node_values: &[f64]) -> Result<GqsSpline> {
    let system = lagrange_system(space, node_values)?;
    let interior = solve_tridiagonal(&system)?;
    let mut coeffs = Vec::with_capacity(space.dimension());
    coeffs.push(node_values[0]);
    coeffs.extend(interior);
    coeffs.push(node_values[space.dimension() - 1]);
    GqsSpline::new(space.clone(), coeffs)
}

/// Lagrange interpolant `Lf`.
pub fn lagrange_interpolant(space: &GqsSpace, f: impl Fn(f64) -> f64) -> Result<GqsSpline> {
    let values = sample_all(&f, &lagrange_nodes(space))?;
    lagrange_from_nodes(space, &values)
}

/// Row margins `(2(1 - ω_{i-1}) - β_i, 2ω_i - β_i)` of the dominance
/// inequalities, one pair per interval.
pub fn dominance_margins(space: &GqsSpace) -> Vec<(f64, f64)> {
    (1..=space.n())
        .map(|i| {
            let b = space.beta(i);
            (2.0 * (1.0 - space.omega(i - 1)) - b, 2.0 * space.omega(i) - b)
        })
        .collect()
}

/// `‖L‖∞ <= 4(3β̄ - 1) / (β̄(5 - 3β̄))` with `β̄ = max β_i`.
pub fn lagrange_norm_bound(betas: &BetaSequence) -> f64 {
    let b = betas.max();
    4.0 * (3.0 * b - 1.0) / (b * (5.0 - 3.0 * b))
}

/// Lagrange interpolant computed in local coefficients: unknowns are the
/// inner local coefficients `a_{i,1}`, `a_{i,2}` of each interval, the
/// junction value comes from the C¹ condition
/// `λ_{i-1}(a_{i-1,3} - a_{i-1,2}) = λ_i(a_{i,1} - a_{i,0})` with
/// `λ_i = 1/(θ_i h_i)`, and each interval contributes
///
/// ```text
/// a_{i,0} + (2 - β_i/2) a_{i,1} + (1 + β_i/2) a_{i,2} = 4 f(m'_i)
/// (1 + β_i/2) a_{i,1} + (2 - β_i/2) a_{i,2} + a_{i,3} = 4 f(m''_i)
/// ```
#[derive(Clone, Debug, PartialEq)]
pub struct AlternativeLagrange {
    pub system: Tridiagonal,
    pub local: Vec<LocalCoeffs>,
    pub spline: GqsSpline,
}

pub fn lagrange_alternative_from_nodes(space: &GqsSpace, node_values: &[f64]) -> Result<AlternativeLagrange> {
    check_node_values(space, node_values)?;
    let n = space.n();
    let m = 2 * n;
    let (fa, fb) = (node_values[0], node_values[m + 1]);
    let lambda: Vec<f64> = (1..=n).map(|i| 1.0 / space.theta_h(i)).collect();
    let lam = |i: usize| lambda[i - 1];

    let mut sub = vec![0.0; m - 1];
    let mut diag = vec![0.0; m];
    let mut sup = vec![0.0; m - 1];
    let mut rhs = vec![0.0; m];
    for i in 1..=n {
        let hb = 0.5 * space.beta(i);
        let r1 = 2 * i - 2;
        let r2 = 2 * i - 1;

        // a_{i,0}
        diag[r1] = 2.0 - hb;
        rhs[r1] = 4.0 * node_values[2 * i - 1];
        if i == 1 {
            rhs[r1] -= fa;
        } else {
            let s = lam(i - 1) + lam(i);
            sub[r1 - 1] = lam(i - 1) / s;
            diag[r1] += lam(i) / s;
        }
        sup[r1] = 1.0 + hb;

        // a_{i,3}
        sub[r2 - 1] = 1.0 + hb;
        diag[r2] = 2.0 - hb;
        rhs[r2] = 4.0 * node_values[2 * i];
        if i == n {
            rhs[r2] -= fb;
        } else {
            let s = lam(i) + lam(i + 1);
            diag[r2] += lam(i) / s;
            sup[r2] = lam(i + 1) / s;
        }
    }
    let system = Tridiagonal::new(sub, diag, sup, rhs)?;
    let u = solve_tridiagonal(&system)?;

    let junction = |i: usize| -> f64 {
        // value a_{i,3} = a_{i+1,0} at knot x_i
        if i == 0 {
            fa
        } else if i == n {
            fb
        } else {
            (lam(i) * u[2 * i - 1] + lam(i + 1) * u[2 * i]) / (lam(i) + lam(i + 1))
        }
    };
    let local = (1..=n)
        .map(|i| LocalCoeffs {
            a_left: junction(i - 1),
            d: u[2 * i - 2],
            c: u[2 * i - 1],
            a_right: junction(i),
        })
        .collect();

    let mut coeffs = Vec::with_capacity(space.dimension());
    coeffs.push(fa);
    coeffs.extend_from_slice(&u);
    coeffs.push(fb);
    let spline = GqsSpline::new(space.clone(), coeffs)?;
    Ok(AlternativeLagrange { system, local, spline })
}

pub fn lagrange_alternative_system(space: &GqsSpace, f: impl Fn(f64) -> f64) -> Result<AlternativeLagrange> {
    let values = sample_all(&f, &lagrange_nodes(space))?;
    lagrange_alternative_from_nodes(space, &values)
}

/// `max |g(x)|` over the dyadic points of level `level` in every interval.
pub fn sup_norm(spline: &GqsSpline, level: u32) -> Result<f64> {
    Ok(spline
        .sample_dyadic(level)?
        .iter()
        .fold(0.0, |m, r| m.max(r.1.abs())))
}

/// `max |f(x) - g(x)|` over the dyadic points of level `level`.
pub fn max_error(spline: &GqsSpline, f: impl Fn(f64) -> f64, level: u32) -> Result<f64> {
    Ok(spline
        .sample_dyadic(level)?
        .iter()
        .fold(0.0, |m, r| m.max((f(r.0) - r.1).abs())))
}

/// Lower estimate of `‖L‖∞` from random `±1` node data.
pub fn lagrange_norm_estimate(space: &GqsSpace, trials: usize, rng: &mut impl Rng, level: u32) -> Result<f64> {
    let dim = space.dimension();
    let mut best = 0.0_f64;
    for _ in 0..trials {
        let data: Vec<f64> = (0..dim).map(|_| if rng.gen::<bool>() { 1.0 } else { -1.0 }).collect();
        best = best.max(sup_norm(&lagrange_from_nodes(space, &data)?, level)?);
    }
    Ok(best)
}

/// Maximum of the Lebesgue function `Σ_j |ℓ_j(x)|` over dyadic samples,
/// with `ℓ_j` the cardinal splines of `L`. This is `‖L‖∞` restricted to the
/// sample set; it is attained by `±1` node data with signs `sign ℓ_j(x*)`.
pub fn lebesgue_constant(space: &GqsSpace, level: u32) -> Result<(f64, f64)> {
    let dim = space.dimension();
    let mut acc: Vec<(f64, f64)> = Vec::new();
    for j in 0..dim {
        let mut e = vec![0.0; dim];
        e[j] = 1.0;
        let rows = lagrange_from_nodes(space, &e)?.sample_dyadic(level)?;
        if acc.is_empty() {
            acc = rows.iter().map(|r| (r.0, 0.0)).collect();
        }
        for (a, r) in acc.iter_mut().zip(&rows) {
            a.1 += r.1.abs();
        }
    }
    Ok(acc
        .into_iter()
        .fold((0.0, f64::NAN), |best, (x, v)| if v > best.0 { (v, x) } else { best }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Operator {
    Quasi,
    Lagrange,
}

impl Operator {
    pub fn apply(self, space: &GqsSpace, f: impl Fn(f64) -> f64) -> Result<GqsSpline> {
        match self {
            Operator::Quasi => quasi_interpolant(space, f),
            Operator::Lagrange => lagrange_interpolant(space, f),
        }
    }
}

/// Errors of an operator on successively halved uniform partitions.
#[derive(Clone, Debug, PartialEq)]
pub struct OrderStudy {
    pub hs: Vec<f64>,
    pub errors: Vec<f64>,
    /// Least-squares slope of `ln error` against `ln h`; `None` when the
    /// errors are at rounding level (the function lies in the space).
    pub slope: Option<f64>,
}

/// Sample level used by [`empirical_order`] to measure `‖f - Pf‖∞`.
pub const ORDER_SAMPLE_LEVEL: u32 = 4;

/// Runs `P` on uniform partitions of `[a, b]` with `2^level` intervals for
/// each level in `levels` and fits the convergence order.
pub fn empirical_order(
    f: impl Fn(f64) -> f64,
    domain: (f64, f64),
    beta: f64,
    operator: Operator,
    levels: RangeInclusive<u32>,
) -> Result<OrderStudy> {
    let (a, b) = domain;
    let mut hs = Vec::new();
    let mut errors = Vec::new();
    let mut fscale = 0.0_f64;
    for level in levels {
        let n = 1usize << level;
        let space = GqsSpace::with_constant_beta(Partition::uniform(a, b, n)?, beta)?;
        let p = operator.apply(&space, &f)?;
        let rows = p.sample_dyadic(ORDER_SAMPLE_LEVEL)?;
        let mut err = 0.0_f64;
        for r in &rows {
            let v = f(r.0);
            fscale = fscale.max(v.abs());
            err = err.max((v - r.1).abs());
        }
        hs.push((b - a) / n as f64);
        errors.push(err);
    }
    let floor = 1e-12 * fscale.max(1.0);
    let slope = if errors.len() >= 2 && errors.iter().all(|&e| e > floor) {
        Some(fit_slope(
            &hs.iter().map(|h| h.ln()).collect::<Vec<_>>(),
            &errors.iter().map(|e| e.ln()).collect::<Vec<_>>(),
        ))
    } else {
        None
    };
    Ok(OrderStudy { hs, errors, slope })
}

fn fit_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}
