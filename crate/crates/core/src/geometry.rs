//! Partitions, β parameters and the derived geometry of a GQS space.
//!
//! Interval quantities use the 1-based indexing of the construction:
//! interval `i` is `[x_{i-1}, x_i]` for `1 <= i <= n`. Knot quantities
//! (`ξ`, `η`, `ω`) are indexed `0..=n`.

use crate::error::{GqsError, Result};

/// Minimum interval length, relative to `b - a`.
pub const KNOT_GAP_REL_EPS: f64 = 1e-14;

/// Strictly increasing knots `a = x_0 < x_1 < … < x_n = b`, `n >= 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Partition {
    knots: Vec<f64>,
}

impl Partition {
    pub fn new(knots: Vec<f64>) -> Result<Self> {
        if knots.len() < 2 {
            return Err(GqsError::TooFewKnots(knots.len()));
        }
        if let Some(index) = knots.iter().position(|x| !x.is_finite()) {
            return Err(GqsError::NonFinite {
                what: "knots",
                index,
            });
        }
        let span = knots[knots.len() - 1] - knots[0];
        let min_gap = KNOT_GAP_REL_EPS * span.abs();
        for index in 1..knots.len() {
            let gap = knots[index] - knots[index - 1];
            if gap.is_nan() || gap <= min_gap {
                return Err(GqsError::KnotsNotIncreasing { index, gap });
            }
        }
        Ok(Self { knots })
    }

    /// `n` equal intervals on `[a, b]`.
    pub fn uniform(a: f64, b: f64, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(GqsError::TooFewKnots(1));
        }
        let h = (b - a) / n as f64;
        let mut knots: Vec<f64> = (0..=n).map(|i| a + h * i as f64).collect();
        knots[n] = b;
        Self::new(knots)
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    /// Number of intervals `n`.
    pub fn intervals(&self) -> usize {
        self.knots.len() - 1
    }

    pub fn a(&self) -> f64 {
        self.knots[0]
    }

    pub fn b(&self) -> f64 {
        self.knots[self.knots.len() - 1]
    }

    /// Length `h_i` of interval `i` (`1..=n`). Returns 0 for `i = 0` and
    /// `i = n + 1`, the boundary convention of the Hermite/B-coefficient
    /// relations.
    pub fn h(&self, i: usize) -> f64 {
        if i == 0 || i > self.intervals() {
            0.0
        } else {
            self.knots[i] - self.knots[i - 1]
        }
    }

    pub fn max_h(&self) -> f64 {
        (1..=self.intervals())
            .map(|i| self.h(i))
            .fold(0.0, f64::max)
    }

    /// Interval `i` containing `x`; knots resolve to the interval on their
    /// left except `x_0`. Returns `None` outside `[a, b]`.
    pub fn locate(&self, x: f64) -> Option<usize> {
        if !(x >= self.a() && x <= self.b()) {
            return None;
        }
        // first knot index with x_k >= x
        let k = self.knots.partition_point(|&t| t < x);
        Some(k.max(1))
    }

    /// The refined partition `X ∪ {m_i}`.
    pub fn with_midpoints(&self) -> Partition {
        let mut knots = Vec::with_capacity(2 * self.knots.len() - 1);
        knots.push(self.knots[0]);
        for w in self.knots.windows(2) {
            knots.push(0.5 * (w[0] + w[1]));
            knots.push(w[1]);
        }
        Partition { knots }
    }
}

/// `θ = β / (2(β - 1))`, mapping `[-1, 0)` onto `(0, 1/4]`.
pub fn theta_from_beta(beta: f64) -> f64 {
    0.5 * beta / (beta - 1.0)
}

/// Inverse of [`theta_from_beta`]: `β = 2θ / (2θ - 1)`.
pub fn beta_from_theta(theta: f64) -> Result<f64> {
    if !(theta > 0.0 && theta <= 0.25) {
        return Err(GqsError::ThetaOutOfRange(theta));
    }
    Ok(2.0 * theta / (2.0 * theta - 1.0))
}

/// Hölder exponent `-log2(1 + β/2)` of the derivative of functions in `V(β)`.
pub fn holder_exponent(beta: f64) -> f64 {
    -(1.0 + 0.5 * beta).log2()
}

/// Per-interval parameters `β_1..β_n`, each in `[-1, 0)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BetaSequence {
    betas: Vec<f64>,
}

impl BetaSequence {
    pub fn new(betas: Vec<f64>) -> Result<Self> {
        for (i, &b) in betas.iter().enumerate() {
            if !b.is_finite() {
                return Err(GqsError::NonFinite {
                    what: "betas",
                    index: i,
                });
            }
            if !(-1.0..0.0).contains(&b) {
                return Err(GqsError::BetaOutOfRange { index: i, value: b });
            }
        }
        Ok(Self { betas })
    }

    pub fn constant(beta: f64, n: usize) -> Result<Self> {
        Self::new(vec![beta; n])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.betas
    }

    pub fn len(&self) -> usize {
        self.betas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.betas.is_empty()
    }

    /// `β̄ = max β_i`.
    pub fn max(&self) -> f64 {
        self.betas.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Each parameter repeated twice, matching a midpoint-refined partition.
    pub fn doubled(&self) -> BetaSequence {
        BetaSequence {
            betas: self.betas.iter().flat_map(|&b| [b, b]).collect(),
        }
    }
}

/// A partition together with its β parameters and every derived quantity.
///
/// Everything is computed once in [`GqsSpace::new`]; the value is immutable
/// afterwards.
#[derive(Clone, Debug, PartialEq)]
pub struct GqsSpace {
    partition: Partition,
    betas: BetaSequence,
    theta: Vec<f64>,
    omega: Vec<f64>,
    xi: Vec<f64>,
    eta: Vec<f64>,
    midpoints: Vec<f64>,
}

impl GqsSpace {
    pub fn new(partition: Partition, betas: BetaSequence) -> Result<Self> {
        let n = partition.intervals();
        if betas.len() != n {
            return Err(GqsError::LengthMismatch {
                what: "betas",
                expected: n,
                found: betas.len(),
            });
        }
        let theta: Vec<f64> = betas.as_slice().iter().map(|&b| theta_from_beta(b)).collect();
        let x = partition.knots();
        let th = |i: usize| -> f64 {
            if i == 0 || i > n {
                0.0
            } else {
                theta[i - 1] * partition.h(i)
            }
        };

        let mut omega = vec![0.0; n + 1];
        omega[0] = 1.0;
        for (i, w) in omega.iter_mut().enumerate().take(n).skip(1) {
            *w = th(i + 1) / (th(i) + th(i + 1));
        }
        let xi: Vec<f64> = (0..=n).map(|i| x[i] - th(i)).collect();
        let eta: Vec<f64> = (0..=n).map(|i| x[i] + th(i + 1)).collect();
        let midpoints = x.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();

        Ok(Self {
            partition,
            betas,
            theta,
            omega,
            xi,
            eta,
            midpoints,
        })
    }

    /// Space with the same β on every interval.
    pub fn with_constant_beta(partition: Partition, beta: f64) -> Result<Self> {
        let n = partition.intervals();
        Self::new(partition, BetaSequence::constant(beta, n)?)
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn betas(&self) -> &BetaSequence {
        &self.betas
    }

    pub fn n(&self) -> usize {
        self.partition.intervals()
    }

    /// Number of B-splines, `2n + 2`.
    pub fn dimension(&self) -> usize {
        2 * self.n() + 2
    }

    pub fn knots(&self) -> &[f64] {
        self.partition.knots()
    }

    pub fn h(&self, i: usize) -> f64 {
        self.partition.h(i)
    }

    /// `β_i` for `i` in `1..=n`.
    pub fn beta(&self, i: usize) -> f64 {
        self.betas.as_slice()[i - 1]
    }

    /// `θ_i` for `i` in `1..=n`.
    pub fn theta(&self, i: usize) -> f64 {
        self.theta[i - 1]
    }

    pub fn thetas(&self) -> &[f64] {
        &self.theta
    }

    /// `θ_i h_i`, zero for `i = 0` and `i = n + 1`.
    pub fn theta_h(&self, i: usize) -> f64 {
        if i == 0 || i > self.n() {
            0.0
        } else {
            self.theta[i - 1] * self.partition.h(i)
        }
    }

    /// `ω_i` for `i` in `0..=n`, with `ω_0 = 1` and `ω_n = 0`.
    pub fn omega(&self, i: usize) -> f64 {
        self.omega[i]
    }

    pub fn omegas(&self) -> &[f64] {
        &self.omega
    }

    pub fn xi(&self, i: usize) -> f64 {
        self.xi[i]
    }

    pub fn eta(&self, i: usize) -> f64 {
        self.eta[i]
    }

    pub fn xis(&self) -> &[f64] {
        &self.xi
    }

    pub fn etas(&self) -> &[f64] {
        &self.eta
    }

    /// `m_i` for `i` in `1..=n`.
    pub fn midpoint(&self, i: usize) -> f64 {
        self.midpoints[i - 1]
    }

    /// Hölder exponent of interval `i`.
    pub fn holder_exponent(&self, i: usize) -> f64 {
        holder_exponent(self.beta(i))
    }

    /// The Greville-type abscissae `ξ_0, η_0, ξ_1, …, ξ_n, η_n`, i.e. the
    /// coefficients of `e_1(x) = x` in the B-spline basis.
    pub fn greville(&self) -> Vec<f64> {
        self.xi
            .iter()
            .zip(&self.eta)
            .flat_map(|(&a, &b)| [a, b])
            .collect()
    }

    /// Quarter points `m'_i`, `m''_i` of interval `i`.
    pub fn quarter_points(&self, i: usize) -> (f64, f64) {
        let x = self.knots();
        let m = self.midpoint(i);
        (0.5 * (x[i - 1] + m), 0.5 * (m + x[i]))
    }
}

/// Convenience constructor from raw vectors.
pub fn build_space(knots: Vec<f64>, betas: Vec<f64>) -> Result<GqsSpace> {
    GqsSpace::new(Partition::new(knots)?, BetaSequence::new(betas)?)
}
