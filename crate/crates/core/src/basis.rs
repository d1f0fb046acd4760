//! The global B-spline basis `{B_k, 0 <= k <= 2n+1}` of a GQS space.
//!
//! A spline is stored by its B-coefficients `γ_k`. On interval `i` the local
//! B-coefficients `[a_{i-1}, d_{i-1}, c_i, a_i]` are
//!
//! ```text
//! a_{i-1} = ω_{i-1} γ_{2i-2} + (1 - ω_{i-1}) γ_{2i-1}
//! d_{i-1} = γ_{2i-1},   c_i = γ_{2i}
//! a_i     = ω_i γ_{2i} + (1 - ω_i) γ_{2i+1}
//! ```
//!
//! and the Hermite data at knot `i` are `y_i = a_i`,
//! `p_i = (γ_{2i+1} - γ_{2i}) / (θ_i h_i + θ_{i+1} h_{i+1})`.

use crate::error::{GqsError, Result};
use crate::geometry::GqsSpace;
use crate::msa::{self, HermiteEndpointState};

/// Values `y_i` and slopes `p_i` at the knots `x_0..x_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct HermiteData {
    pub values: Vec<f64>,
    pub slopes: Vec<f64>,
}

impl HermiteData {
    pub fn new(values: Vec<f64>, slopes: Vec<f64>) -> Result<Self> {
        if values.len() != slopes.len() {
            return Err(GqsError::LengthMismatch {
                what: "slopes",
                expected: values.len(),
                found: slopes.len(),
            });
        }
        for (what, v) in [("values", &values), ("slopes", &slopes)] {
            if let Some(index) = v.iter().position(|x| !x.is_finite()) {
                return Err(GqsError::NonFinite { what, index });
            }
        }
        Ok(Self { values, slopes })
    }

    /// Samples `f` and `f'` at the knots.
    pub fn sample(knots: &[f64], f: impl Fn(f64) -> f64, df: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(knots.iter().map(|&x| f(x)).collect(), knots.iter().map(|&x| df(x)).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// The local quadruplet `[a_{i-1}, d_{i-1}, c_i, a_i]` on one interval.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocalCoeffs {
    pub a_left: f64,
    pub d: f64,
    pub c: f64,
    pub a_right: f64,
}

impl LocalCoeffs {
    pub fn as_array(&self) -> [f64; 4] {
        [self.a_left, self.d, self.c, self.a_right]
    }
}

/// Piecewise-linear polygon through ordered `(abscissa, ordinate)` vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct ControlPolygon {
    vertices: Vec<(f64, f64)>,
}

impl ControlPolygon {
    pub fn new(vertices: Vec<(f64, f64)>) -> Self {
        debug_assert!(vertices.windows(2).all(|w| w[0].0 <= w[1].0));
        Self { vertices }
    }

    pub fn vertices(&self) -> &[(f64, f64)] {
        &self.vertices
    }

    pub fn ordinates(&self) -> impl Iterator<Item = f64> + '_ {
        self.vertices.iter().map(|v| v.1)
    }

    /// Slopes of the segments with positive horizontal extent.
    pub fn slopes(&self) -> Vec<f64> {
        self.vertices
            .windows(2)
            .filter(|w| w[1].0 > w[0].0)
            .map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0))
            .collect()
    }

    /// Largest gap between consecutive ordinates.
    pub fn max_ordinate_gap(&self) -> f64 {
        self.vertices
            .windows(2)
            .map(|w| (w[1].1 - w[0].1).abs())
            .fold(0.0, f64::max)
    }

    /// Piecewise-linear interpolation; constant extension outside the
    /// abscissa range.
    pub fn value_at(&self, x: f64) -> f64 {
        let v = &self.vertices;
        let first = v[0];
        let last = v[v.len() - 1];
        if x <= first.0 {
            return first.1;
        }
        if x >= last.0 {
            return last.1;
        }
        let j = v.partition_point(|p| p.0 <= x);
        let (x0, y0) = v[j - 1];
        let (x1, y1) = v[j];
        if x1 == x0 {
            return y1;
        }
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }
}

/// A generalized quadratic spline `Σ γ_k B_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct GqsSpline {
    space: GqsSpace,
    coeffs: Vec<f64>,
}

impl GqsSpline {
    pub fn new(space: GqsSpace, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != space.dimension() {
            return Err(GqsError::LengthMismatch {
                what: "coeffs",
                expected: space.dimension(),
                found: coeffs.len(),
            });
        }
        if let Some(index) = coeffs.iter().position(|x| !x.is_finite()) {
            return Err(GqsError::NonFinite {
                what: "coeffs",
                index,
            });
        }
        Ok(Self { space, coeffs })
    }

    /// `e_0 = 1`.
    pub fn constant(space: GqsSpace, value: f64) -> Self {
        let coeffs = vec![value; space.dimension()];
        Self { space, coeffs }
    }

    /// `e_1(x) = x`, whose coefficients are the Greville-type abscissae.
    pub fn identity(space: GqsSpace) -> Self {
        let coeffs = space.greville();
        Self { space, coeffs }
    }

    /// Unit coefficient vector `e_k`, i.e. the B-spline `B_k`.
    pub fn unit(space: GqsSpace, k: usize) -> Result<Self> {
        let dim = space.dimension();
        if k >= dim {
            return Err(GqsError::IndexOutOfRange {
                what: "basis index",
                value: k,
                max: dim - 1,
            });
        }
        let mut coeffs = vec![0.0; dim];
        coeffs[k] = 1.0;
        Ok(Self { space, coeffs })
    }

    pub fn space(&self) -> &GqsSpace {
        &self.space
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn into_parts(self) -> (GqsSpace, Vec<f64>) {
        (self.space, self.coeffs)
    }

    /// Value `y_i` at knot `x_i`.
    pub fn knot_value(&self, i: usize) -> f64 {
        let w = self.space.omega(i);
        w * self.coeffs[2 * i] + (1.0 - w) * self.coeffs[2 * i + 1]
    }

    /// Slope `p_i` at knot `x_i`.
    pub fn knot_slope(&self, i: usize) -> f64 {
        let s = &self.space;
        (self.coeffs[2 * i + 1] - self.coeffs[2 * i]) / (s.theta_h(i) + s.theta_h(i + 1))
    }

    /// Local B-coefficients on interval `i` (`1..=n`).
    pub fn local_coeffs(&self, i: usize) -> LocalCoeffs {
        let g = &self.coeffs;
        let s = &self.space;
        let wl = s.omega(i - 1);
        let wr = s.omega(i);
        LocalCoeffs {
            a_left: wl * g[2 * i - 2] + (1.0 - wl) * g[2 * i - 1],
            d: g[2 * i - 1],
            c: g[2 * i],
            a_right: wr * g[2 * i] + (1.0 - wr) * g[2 * i + 1],
        }
    }

    /// Endpoint Hermite data on interval `i`, ready for the subdivision kernel.
    pub fn local_state(&self, i: usize) -> HermiteEndpointState {
        HermiteEndpointState {
            f_left: self.knot_value(i - 1),
            d_left: self.knot_slope(i - 1),
            f_right: self.knot_value(i),
            d_right: self.knot_slope(i),
            width: self.space.h(i),
        }
    }

    /// Value and derivative at `x ∈ [a, b]`; the value is within `tol`
    /// (see [`msa::eval_point`]). Exact at knots and dyadic points.
    pub fn eval(&self, x: f64, tol: f64) -> Result<(f64, f64)> {
        let p = self.space.partition();
        let i = p.locate(x).ok_or(GqsError::OutsideDomain {
            x,
            a: p.a(),
            b: p.b(),
        })?;
        let x0 = p.knots()[i - 1];
        if x == x0 {
            return Ok((self.knot_value(i - 1), self.knot_slope(i - 1)));
        }
        if x == p.knots()[i] {
            return Ok((self.knot_value(i), self.knot_slope(i)));
        }
        let t = ((x - x0) / self.space.h(i)).clamp(0.0, 1.0);
        msa::eval_point(&self.local_state(i), self.space.theta(i), t, tol)
    }

    /// Values at the `2^level` dyadic subdivisions of every interval:
    /// `(x, value, derivative)` rows, knots included once.
    pub fn sample_dyadic(&self, level: u32) -> Result<Vec<(f64, f64, f64)>> {
        let n = self.space.n();
        let x = self.space.knots();
        let mut out = Vec::with_capacity(n * (1usize << level) + 1);
        for i in 1..=n {
            let rows = msa::dyadic_table(&self.local_state(i), self.space.theta(i), level)?;
            let h = self.space.h(i);
            let skip = usize::from(i > 1);
            for r in rows.into_iter().skip(skip) {
                let xx = if r.t == 1.0 { x[i] } else { x[i - 1] + r.t * h };
                out.push((xx, r.f, r.d));
            }
        }
        Ok(out)
    }
}

/// B-coefficients of the spline with Hermite data `(y_i, p_i)`:
/// `γ_{2i} = y_i - θ_i h_i p_i`, `γ_{2i+1} = y_i + θ_{i+1} h_{i+1} p_i`.
pub fn hermite_to_spline(space: &GqsSpace, data: &HermiteData) -> Result<GqsSpline> {
    let n = space.n();
    if data.len() != n + 1 {
        return Err(GqsError::LengthMismatch {
            what: "hermite data",
            expected: n + 1,
            found: data.len(),
        });
    }
    let mut coeffs = Vec::with_capacity(2 * n + 2);
    for i in 0..=n {
        let (y, p) = (data.values[i], data.slopes[i]);
        coeffs.push(y - space.theta_h(i) * p);
        coeffs.push(y + space.theta_h(i + 1) * p);
    }
    GqsSpline::new(space.clone(), coeffs)
}

pub fn spline_to_hermite(spline: &GqsSpline) -> HermiteData {
    let n = spline.space().n();
    HermiteData {
        values: (0..=n).map(|i| spline.knot_value(i)).collect(),
        slopes: (0..=n).map(|i| spline.knot_slope(i)).collect(),
    }
}

/// `B_k(x)`, evaluated through the spline with coefficient vector `e_k`.
pub fn basis_function(space: &GqsSpace, k: usize, x: f64, tol: f64) -> Result<f64> {
    Ok(GqsSpline::unit(space.clone(), k)?.eval(x, tol)?.0)
}

/// Declared support `[lo, hi]` of `B_k`.
pub fn support(space: &GqsSpace, k: usize) -> Result<(f64, f64)> {
    let n = space.n();
    if k > 2 * n + 1 {
        return Err(GqsError::IndexOutOfRange {
            what: "basis index",
            value: k,
            max: 2 * n + 1,
        });
    }
    let x = space.knots();
    let i = k / 2;
    Ok(if k.is_multiple_of(2) {
        // [x_{i-1}, m_{i+1}], clamped at the ends
        let lo = if i == 0 { x[0] } else { x[i - 1] };
        let hi = if i == n { x[n] } else { space.midpoint(i + 1) };
        (lo, hi)
    } else {
        // [m_i, x_{i+1}]
        let lo = if i == 0 { x[0] } else { space.midpoint(i) };
        let hi = if i == n { x[n] } else { x[i + 1] };
        (lo, hi)
    })
}

/// Derivatives of the B-splines at the knots. Only `B_{2i}` and `B_{2i+1}`
/// have a nonzero derivative at `x_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct KnotDerivatives {
    /// `(B'_{2i}(x_i), B'_{2i+1}(x_i))` for `i = 0..=n`.
    pub pairs: Vec<(f64, f64)>,
}

impl KnotDerivatives {
    /// `B'_k(x_i)`.
    pub fn get(&self, k: usize, knot: usize) -> f64 {
        if k / 2 != knot {
            return 0.0;
        }
        let (even, odd) = self.pairs[knot];
        if k.is_multiple_of(2) {
            even
        } else {
            odd
        }
    }
}

pub fn knot_derivatives(space: &GqsSpace) -> KnotDerivatives {
    let n = space.n();
    let pairs = (0..=n)
        .map(|i| {
            let even = if i == 0 {
                -1.0 / space.theta_h(1)
            } else if i == n {
                -1.0 / space.theta_h(n)
            } else {
                -space.omega(i) / space.theta_h(i + 1)
            };
            (even, -even)
        })
        .collect();
    KnotDerivatives { pairs }
}

/// Spline control polygon with vertices `(ξ_i, γ_{2i})`, `(η_i, γ_{2i+1})`.
pub fn scp(spline: &GqsSpline) -> ControlPolygon {
    let abscissae = spline.space().greville();
    ControlPolygon::new(abscissae.into_iter().zip(spline.coeffs().iter().copied()).collect())
}

/// Local control polygon on interval `i`: vertices at `x_{i-1}`, `η_{i-1}`,
/// `ξ_i`, `x_i`.
pub fn lcp(spline: &GqsSpline, i: usize) -> Result<ControlPolygon> {
    let s = spline.space();
    if i == 0 || i > s.n() {
        return Err(GqsError::IndexOutOfRange {
            what: "interval",
            value: i,
            max: s.n(),
        });
    }
    let l = spline.local_coeffs(i);
    let x = s.knots();
    Ok(ControlPolygon::new(vec![
        (x[i - 1], l.a_left),
        (s.eta(i - 1), l.d),
        (s.xi(i), l.c),
        (x[i], l.a_right),
    ]))
}
