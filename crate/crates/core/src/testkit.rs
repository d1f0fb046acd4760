//! Reference oracles and seeded generators for tests and benchmarks.

use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::basis::{GqsSpline, HermiteData};
use crate::geometry::{BetaSequence, GqsSpace, Partition};
use crate::msa::HermiteEndpointState;

/// The C¹ piecewise parabola with a single knot at the midpoint that
/// matches the Hermite data of `state`; the `β = -1` scheme reproduces it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadraticOracle {
    state: HermiteEndpointState,
    left_curv: f64,
    right_curv: f64,
}

impl QuadraticOracle {
    pub fn new(state: HermiteEndpointState) -> Self {
        let h = state.width;
        let df = state.f_right - state.f_left;
        let sum = (state.d_right - state.d_left) / h;
        let diff = 4.0 * (df - 0.5 * h * (state.d_left + state.d_right)) / (h * h);
        Self {
            state,
            left_curv: 0.5 * (sum + diff),
            right_curv: 0.5 * (sum - diff),
        }
    }

    /// `(g, g')` at fraction `t ∈ [0, 1]` of the interval.
    pub fn eval(&self, t: f64) -> (f64, f64) {
        let st = &self.state;
        let s = t * st.width;
        if 2.0 * t <= 1.0 {
            let a = self.left_curv;
            (st.f_left + st.d_left * s + a * s * s, st.d_left + 2.0 * a * s)
        } else {
            let b = self.right_curv;
            let r = s - st.width;
            (st.f_right + st.d_right * r + b * r * r, st.d_right + 2.0 * b * r)
        }
    }
}

pub fn oracle_eval(state: &HermiteEndpointState, t: f64) -> (f64, f64) {
    QuadraticOracle::new(*state).eval(t)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Partition of `[a, a + len]` with `a ∈ [-2, 2]`, `len ∈ [0.5, 4]` and
/// sorted uniform interior knots conditioned on no gap falling below a
/// tenth of the mean gap. The conditioning is sampled directly: sorted draws
/// on the slack length `len - n·min_gap`, shifted by `j·min_gap`.
pub fn random_partition(rng: &mut impl Rng, n_range: RangeInclusive<usize>) -> Partition {
    let n = rng.gen_range(n_range);
    let a = rng.gen_range(-2.0..=2.0);
    let len = rng.gen_range(0.5..=4.0);
    let min_gap = 0.1 * len / n as f64;
    let slack = len - n as f64 * min_gap;
    let mut draws: Vec<f64> = (0..n - 1).map(|_| rng.gen_range(0.0..slack)).collect();
    draws.sort_by(f64::total_cmp);
    let mut knots = Vec::with_capacity(n + 1);
    knots.push(a);
    knots.extend(draws.iter().enumerate().map(|(j, u)| a + u + (j + 1) as f64 * min_gap));
    knots.push(a + len);
    Partition::new(knots).expect("generated knots are valid")
}

pub fn random_betas(rng: &mut impl Rng, n: usize, beta_range: RangeInclusive<f64>) -> BetaSequence {
    let betas = (0..n).map(|_| rng.gen_range(beta_range.clone())).collect();
    BetaSequence::new(betas).expect("beta range lies in [-1, 0)")
}

pub fn random_space_with(
    rng: &mut impl Rng,
    n_range: RangeInclusive<usize>,
    beta_range: RangeInclusive<f64>,
) -> GqsSpace {
    let p = random_partition(rng, n_range);
    let b = random_betas(rng, p.intervals(), beta_range);
    GqsSpace::new(p, b).expect("generated space is valid")
}

/// Seeded random space; `β` values are drawn from `beta_range`, which must
/// lie in `[-1, 0)`.
pub fn random_space(seed: u64, n_range: RangeInclusive<usize>, beta_range: RangeInclusive<f64>) -> GqsSpace {
    random_space_with(&mut rng(seed), n_range, beta_range)
}

/// Spline with coefficients uniform in `[-1, 1]`.
pub fn random_spline(rng: &mut impl Rng, space: &GqsSpace) -> GqsSpline {
    let coeffs = (0..space.dimension()).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    GqsSpline::new(space.clone(), coeffs).expect("coefficients are finite")
}

/// Values and slopes uniform in `[-1, 1]` at every knot.
pub fn random_hermite(rng: &mut impl Rng, knots: usize) -> HermiteData {
    let values = (0..knots).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    let slopes = (0..knots).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    HermiteData::new(values, slopes).expect("data is finite")
}

/// Endpoint state with values and slopes in `[-1, 1]` and width in `[0.1, 2]`.
pub fn random_state(rng: &mut impl Rng) -> HermiteEndpointState {
    HermiteEndpointState::new(
        rng.gen_range(-1.0..=1.0),
        rng.gen_range(-1.0..=1.0),
        rng.gen_range(-1.0..=1.0),
        rng.gen_range(-1.0..=1.0),
        rng.gen_range(0.1..=2.0),
    )
    .expect("state is valid")
}

/// `x ↦ amp·sin(freq·x + phase) + slope·x`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SmoothFn {
    pub amp: f64,
    pub freq: f64,
    pub phase: f64,
    pub slope: f64,
}

impl SmoothFn {
    pub fn random(rng: &mut impl Rng) -> Self {
        Self {
            amp: rng.gen_range(-2.0..=2.0),
            freq: rng.gen_range(0.2..=3.0),
            phase: rng.gen_range(0.0..=std::f64::consts::TAU),
            slope: rng.gen_range(-1.0..=1.0),
        }
    }

    pub fn value(&self, x: f64) -> f64 {
        self.amp * (self.freq * x + self.phase).sin() + self.slope * x
    }

    pub fn derivative(&self, x: f64) -> f64 {
        self.amp * self.freq * (self.freq * x + self.phase).cos() + self.slope
    }
}

/// `max |a - b|` over paired entries.
pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "length mismatch");
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Largest deviation between two dyadic sample sets `(x, f, d)`, as
/// `(value error, derivative error)`. Abscissae must coincide.
pub fn compare_samples(a: &[(f64, f64, f64)], b: &[(f64, f64, f64)]) -> (f64, f64) {
    assert_eq!(a.len(), b.len(), "sample count mismatch");
    a.iter().zip(b).fold((0.0, 0.0), |(ev, ed), (p, q)| {
        assert!((p.0 - q.0).abs() <= 1e-12 * p.0.abs().max(1.0), "abscissae differ");
        (ev.max((p.1 - q.1).abs()), ed.max((p.2 - q.2).abs()))
    })
}
