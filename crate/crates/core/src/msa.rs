//! The Merrien subdivision kernel.
//!
//! From values and derivatives at the two ends of an interval of width `h`,
//! the midpoint rule with parameter `θ ∈ (0, 1/4]` produces
//!
//! ```text
//! f(m)  = ((f(a) + f(b)) - θ h (f'(b) - f'(a))) / 2
//! f'(m) = ((f(b) - f(a)) / h - θ (f'(a) + f'(b))) / (1 - 2θ)
//! ```
//!
//! and recursing on both halves defines `f` and `f'` on all dyadic points.
//! The limit is C¹ for every admissible θ.

use crate::error::{GqsError, Result};

/// Cap on the number of bisections performed by [`eval_point`].
pub const MAX_EVAL_LEVELS: u32 = 40;

/// Cap on [`dyadic_table`] depth; the table holds `2^levels + 1` rows.
pub const MAX_TABLE_LEVELS: u32 = 24;

/// Hermite data `{f(a), f'(a); f(b), f'(b)}` on an interval of width `b - a`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HermiteEndpointState {
    pub f_left: f64,
    pub d_left: f64,
    pub f_right: f64,
    pub d_right: f64,
    pub width: f64,
}

impl HermiteEndpointState {
    pub fn new(f_left: f64, d_left: f64, f_right: f64, d_right: f64, width: f64) -> Result<Self> {
        let vals = [f_left, d_left, f_right, d_right, width];
        if let Some(index) = vals.iter().position(|v| !v.is_finite()) {
            return Err(GqsError::NonFinite {
                what: "hermite state",
                index,
            });
        }
        if width.is_nan() || width <= 0.0 {
            return Err(GqsError::NonFinite {
                what: "hermite state width",
                index: 4,
            });
        }
        Ok(Self {
            f_left,
            d_left,
            f_right,
            d_right,
            width,
        })
    }

    fn halves(&self, f_mid: f64, d_mid: f64) -> (Self, Self) {
        let w = 0.5 * self.width;
        (
            Self {
                f_right: f_mid,
                d_right: d_mid,
                width: w,
                ..*self
            },
            Self {
                f_left: f_mid,
                d_left: d_mid,
                width: w,
                ..*self
            },
        )
    }
}

/// One subdivision step: value and derivative at the midpoint.
#[inline]
pub fn msa_midpoint(state: &HermiteEndpointState, theta: f64) -> (f64, f64) {
    midpoint_raw(
        state.f_left,
        state.d_left,
        state.f_right,
        state.d_right,
        state.width,
        theta,
    )
}

#[inline]
fn midpoint_raw(fa: f64, da: f64, fb: f64, db: f64, h: f64, theta: f64) -> (f64, f64) {
    let f = 0.5 * ((fa + fb) - theta * h * (db - da));
    let d = ((fb - fa) / h - theta * (da + db)) / (1.0 - 2.0 * theta);
    (f, d)
}

/// A row of a dyadic table: relative abscissa `t ∈ [0, 1]`, value, derivative.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DyadicRow {
    pub t: f64,
    pub f: f64,
    pub d: f64,
}

/// Values and derivatives at the `2^levels + 1` dyadic points of the
/// interval, built level by level.
pub fn dyadic_table(
    state: &HermiteEndpointState,
    theta: f64,
    levels: u32,
) -> Result<Vec<DyadicRow>> {
    if levels > MAX_TABLE_LEVELS {
        return Err(GqsError::LevelCap {
            what: "dyadic table levels",
            requested: levels,
            max: MAX_TABLE_LEVELS,
        });
    }
    let mut f = vec![state.f_left, state.f_right];
    let mut d = vec![state.d_left, state.d_right];
    let mut h = state.width;
    for _ in 0..levels {
        let len = 2 * f.len() - 1;
        let mut nf = Vec::with_capacity(len);
        let mut nd = Vec::with_capacity(len);
        for j in 0..f.len() - 1 {
            let (fm, dm) = midpoint_raw(f[j], d[j], f[j + 1], d[j + 1], h, theta);
            nf.push(f[j]);
            nd.push(d[j]);
            nf.push(fm);
            nd.push(dm);
        }
        nf.push(f[f.len() - 1]);
        nd.push(d[d.len() - 1]);
        f = nf;
        d = nd;
        h *= 0.5;
    }
    let count = f.len() - 1;
    Ok(f
        .into_iter()
        .zip(d)
        .enumerate()
        .map(|(j, (f, d))| DyadicRow {
            t: j as f64 / count as f64,
            f,
            d,
        })
        .collect())
}

/// Value and derivative of the limit function at relative position `t`.
///
/// The interval is bisected towards `t`. Dyadic `t` is hit exactly. Otherwise
/// bisection stops once the value error bound `(w/2)·osc` is below `tol`,
/// where `w` is the bracket width and `osc` the spread of the slopes of the
/// bracket's local control polygon (`f'(left)`, `f'(mid)`, `f'(right)`),
/// which encloses the derivative on the bracket. The returned value is the
/// nearer endpoint's value corrected by a trapezoidal slope step; the
/// derivative is linearly interpolated between the bracket ends and is
/// accurate to `osc`.
pub fn eval_point(state: &HermiteEndpointState, theta: f64, t: f64, tol: f64) -> Result<(f64, f64)> {
    eval_point_with_bound(state, theta, t, tol).map(|p| (p.value, p.derivative))
}

/// Result of [`eval_point_with_bound`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointEval {
    pub value: f64,
    pub derivative: f64,
    /// Upper bound on the derivative error (zero at dyadic points).
    pub derivative_bound: f64,
    /// Upper bound on the value error (zero at dyadic points).
    pub value_bound: f64,
}

pub fn eval_point_with_bound(
    state: &HermiteEndpointState,
    theta: f64,
    t: f64,
    tol: f64,
) -> Result<PointEval> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(GqsError::InvalidTolerance(tol));
    }
    if !(0.0..=1.0).contains(&t) {
        return Err(GqsError::OutsideUnitInterval(t));
    }
    let exact = |value, derivative| PointEval {
        value,
        derivative,
        derivative_bound: 0.0,
        value_bound: 0.0,
    };
    if t == 0.0 {
        return Ok(exact(state.f_left, state.d_left));
    }
    if t == 1.0 {
        return Ok(exact(state.f_right, state.d_right));
    }

    let mut cur = *state;
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    let mut bound = f64::INFINITY;
    for _ in 0..MAX_EVAL_LEVELS {
        let (fm, dm) = msa_midpoint(&cur, theta);
        let tm = 0.5 * (lo + hi);
        if t == tm {
            return Ok(exact(fm, dm));
        }
        let osc = cur.d_left.max(cur.d_right).max(dm) - cur.d_left.min(cur.d_right).min(dm);
        let (left, right) = cur.halves(fm, dm);
        if t < tm {
            cur = left;
            hi = tm;
        } else {
            cur = right;
            lo = tm;
        }
        bound = 0.5 * cur.width * osc;
        if bound <= tol {
            let s = (t - lo) / (hi - lo);
            let derivative = (1.0 - s) * cur.d_left + s * cur.d_right;
            let value = if s <= 0.5 {
                cur.f_left + s * cur.width * 0.5 * (cur.d_left + derivative)
            } else {
                cur.f_right - (1.0 - s) * cur.width * 0.5 * (cur.d_right + derivative)
            };
            return Ok(PointEval {
                value,
                derivative,
                derivative_bound: osc,
                value_bound: bound,
            });
        }
    }
    Err(GqsError::ToleranceUnreachable {
        tol,
        levels: MAX_EVAL_LEVELS,
        bound,
    })
}
