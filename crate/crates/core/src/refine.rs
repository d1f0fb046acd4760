//! Midpoint refinement and the global corner-cutting algorithm.
//!
//! Inserting every midpoint `m_i` and repeating `β_i` on both halves gives a
//! space of dimension `4n + 2` containing the coarse one. Writing
//! `b_i = β_i / 4`, the fine coefficients `δ` of a coarse spline `γ` are
//!
//! ```text
//! δ_{4i-2} = (1/2 - b_i) γ_{2i-1} + (1/2 + b_i) γ_{2i}          1 <= i <= n
//! δ_{4i-1} = (1/2 + b_i) γ_{2i-1} + (1/2 - b_i) γ_{2i}
//! δ_{4i}   = (1 + ω_i)/2 γ_{2i} + (1 - ω_i)/2 γ_{2i+1}           0 <= i <= n
//! δ_{4i+1} = ω_i/2 γ_{2i} + (2 - ω_i)/2 γ_{2i+1}
//! ```
//!
//! with `ω_0 = 1`, `ω_n = 0` covering the end blocks. Every `δ` is a convex
//! combination of two consecutive `γ`.

use crate::basis::{scp, ControlPolygon, GqsSpline};
use crate::error::{GqsError, Result};
use crate::geometry::GqsSpace;

/// Cap on [`polygon_sequence`] depth.
pub const MAX_REFINE_LEVELS: u32 = 20;

/// The space on `X ∪ {m_i}` with `β̄ = (β_1, β_1, …, β_n, β_n)`.
pub fn refine_space(space: &GqsSpace) -> GqsSpace {
    GqsSpace::new(space.partition().with_midpoints(), space.betas().doubled())
        .expect("midpoint refinement of a valid space is valid")
}

/// One fine coefficient as a two-term combination `w0·γ_k + w1·γ_{k+1}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CutWeights {
    /// Index `k` of the left coarse coefficient.
    pub k: usize,
    pub w0: f64,
    pub w1: f64,
}

/// The `4n + 2` corner-cutting rows, indexed by fine coefficient.
pub fn cut_weights(space: &GqsSpace) -> Vec<CutWeights> {
    let n = space.n();
    let mut rows = Vec::with_capacity(4 * n + 2);
    for i in 0..=n {
        if i >= 1 {
            let b = 0.25 * space.beta(i);
            rows.push(CutWeights {
                k: 2 * i - 1,
                w0: 0.5 - b,
                w1: 0.5 + b,
            });
            rows.push(CutWeights {
                k: 2 * i - 1,
                w0: 0.5 + b,
                w1: 0.5 - b,
            });
        }
        let w = space.omega(i);
        rows.push(CutWeights {
            k: 2 * i,
            w0: 0.5 * (1.0 + w),
            w1: 0.5 * (1.0 - w),
        });
        rows.push(CutWeights {
            k: 2 * i,
            w0: 0.5 * w,
            w1: 0.5 * (2.0 - w),
        });
    }
    rows
}

/// Fine-basis expansion `B_k = Σ μ_l B̄_l` of one coarse B-spline, as sparse
/// `(l, μ_l)` pairs with zero weights dropped.
pub fn refinement_coefficients(space: &GqsSpace, k: usize) -> Result<Vec<(usize, f64)>> {
    let dim = space.dimension();
    if k >= dim {
        return Err(GqsError::IndexOutOfRange {
            what: "basis index",
            value: k,
            max: dim - 1,
        });
    }
    let mut out = Vec::with_capacity(4);
    for (l, row) in cut_weights(space).iter().enumerate() {
        let mu = if row.k == k {
            row.w0
        } else if row.k + 1 == k {
            row.w1
        } else {
            continue;
        };
        if mu != 0.0 {
            out.push((l, mu));
        }
    }
    Ok(out)
}

/// A coarse space, its refinement and the sparse refinement matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct RefinementStep {
    pub coarse: GqsSpace,
    pub fine: GqsSpace,
    /// `rows[k]` expands `B_k` in the fine basis.
    pub rows: Vec<Vec<(usize, f64)>>,
}

impl RefinementStep {
    pub fn new(coarse: &GqsSpace) -> Self {
        let rows = (0..coarse.dimension())
            .map(|k| refinement_coefficients(coarse, k).expect("index in range"))
            .collect();
        Self {
            coarse: coarse.clone(),
            fine: refine_space(coarse),
            rows,
        }
    }

    /// Sum of the matrix entries in fine column `l`.
    pub fn column_sum(&self, l: usize) -> f64 {
        self.rows
            .iter()
            .flat_map(|r| r.iter())
            .filter(|(j, _)| *j == l)
            .map(|(_, m)| m)
            .sum()
    }
}

/// The same function expressed on the midpoint-refined space.
pub fn corner_cut(spline: &GqsSpline) -> GqsSpline {
    let space = spline.space();
    let g = spline.coeffs();
    let delta = cut_weights(space)
        .iter()
        .map(|r| r.w0 * g[r.k] + r.w1 * g[r.k + 1])
        .collect();
    GqsSpline::new(refine_space(space), delta).expect("corner cutting keeps dimensions")
}

/// Largest gap `max_k |γ_{k+1} - γ_k|`.
pub fn max_gap(coeffs: &[f64]) -> f64 {
    coeffs
        .windows(2)
        .map(|w| (w[1] - w[0]).abs())
        .fold(0.0, f64::max)
}

/// Successive control polygons `P_0..P_m` under repeated corner cutting.
#[derive(Clone, Debug)]
pub struct PolygonSequence {
    pub splines: Vec<GqsSpline>,
    pub polygons: Vec<ControlPolygon>,
    /// `Δ_j`, the largest consecutive-coefficient gap of `P_j`.
    pub deltas: Vec<f64>,
}

impl PolygonSequence {
    /// Whether `Δ_{j+1} <= Δ_j / 2 + slack` holds at every step.
    pub fn halving_holds(&self, slack: f64) -> bool {
        self.deltas.windows(2).all(|w| w[1] <= 0.5 * w[0] + slack)
    }

    /// Largest observed ratio `Δ_{j+1} / Δ_j`.
    pub fn worst_ratio(&self) -> f64 {
        self.deltas
            .windows(2)
            .filter(|w| w[0] > 0.0)
            .map(|w| w[1] / w[0])
            .fold(0.0, f64::max)
    }
}

pub fn polygon_sequence(spline: &GqsSpline, levels: u32) -> Result<PolygonSequence> {
    if levels > MAX_REFINE_LEVELS {
        return Err(GqsError::LevelCap {
            what: "refinement levels",
            requested: levels,
            max: MAX_REFINE_LEVELS,
        });
    }
    let mut splines = vec![spline.clone()];
    for _ in 0..levels {
        let next = corner_cut(splines.last().expect("nonempty"));
        splines.push(next);
    }
    let polygons = splines.iter().map(scp).collect();
    let deltas = splines.iter().map(|s| max_gap(s.coeffs())).collect();
    Ok(PolygonSequence {
        splines,
        polygons,
        deltas,
    })
}

/// Contraction factor of one corner-cutting step on `space`: the largest
/// total weight `Δ_1 / Δ_0` can reach, attained when neighbouring gaps are
/// equal and of the same sign.
pub fn contraction_factor(space: &GqsSpace) -> f64 {
    let n = space.n();
    let mut worst = 0.5_f64;
    for i in 1..=n {
        let b = 0.25 * space.beta(i);
        // δ_{4i-1} - δ_{4i-2} = -2b (γ_{2i} - γ_{2i-1})
        worst = worst.max(-2.0 * b);
        // δ_{4i} - δ_{4i-1} and δ_{4i-2} - δ_{4i-3}
        worst = worst.max(0.5 * (1.0 - space.omega(i)) + 0.5 + b);
        worst = worst.max(0.5 * space.omega(i - 1) + 0.5 + b);
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::build_space;

    #[test]
    fn refine_space_examples() {
        let f = refine_space(&build_space(vec![0.0, 1.0], vec![-1.0]).unwrap());
        assert_eq!(f.knots(), &[0.0, 0.5, 1.0]);
        assert_eq!(f.betas().as_slice(), &[-1.0, -1.0]);

        let f = refine_space(&build_space(vec![0.0, 1.0, 3.0], vec![-1.0, -0.5]).unwrap());
        assert_eq!(f.knots(), &[0.0, 0.5, 1.0, 2.0, 3.0]);
        assert_eq!(f.betas().as_slice(), &[-1.0, -1.0, -0.5, -0.5]);
        for (a, b) in f.thetas().iter().zip([0.25, 0.25, 1.0 / 6.0, 1.0 / 6.0]) {
            assert!((a - b).abs() < 1e-16);
        }
        assert_eq!(f.dimension(), 10);
    }

    #[test]
    fn quadratic_interior_mask() {
        let s = build_space(vec![0.0, 1.0, 3.0, 4.0], vec![-1.0; 3]).unwrap();
        let w = s.omega(1);
        let row = refinement_coefficients(&s, 2).unwrap();
        let expected = [(2, 0.25), (3, 0.75), (4, 0.5 * (1.0 + w)), (5, 0.5 * w)];
        assert_eq!(row.len(), 4);
        for ((l, m), (el, em)) in row.iter().zip(expected) {
            assert_eq!(*l, el);
            assert!((m - em).abs() < 1e-15);
        }
    }

    #[test]
    fn endpoint_rows() {
        let s = build_space(vec![0.0, 1.0, 3.0], vec![-0.4, -0.7]).unwrap();
        assert_eq!(refinement_coefficients(&s, 0).unwrap(), vec![(0, 1.0), (1, 0.5)]);
        let b1 = 0.25 * s.beta(1);
        assert_eq!(
            refinement_coefficients(&s, 1).unwrap(),
            vec![(1, 0.5), (2, 0.5 - b1), (3, 0.5 + b1)]
        );
        let bn = 0.25 * s.beta(2);
        assert_eq!(
            refinement_coefficients(&s, 4).unwrap(),
            vec![(6, 0.5 + bn), (7, 0.5 - bn), (8, 0.5)]
        );
        assert_eq!(refinement_coefficients(&s, 5).unwrap(), vec![(8, 0.5), (9, 1.0)]);
        assert!(refinement_coefficients(&s, 6).is_err());
    }

    #[test]
    fn corner_cut_identity_example() {
        let s = build_space(vec![0.0, 1.0], vec![-1.0]).unwrap();
        let sp = GqsSpline::new(s, vec![0.0, 0.25, 0.75, 1.0]).unwrap();
        let fine = corner_cut(&sp);
        let expected = [0.0, 0.125, 0.375, 0.625, 0.875, 1.0];
        for (a, b) in fine.coeffs().iter().zip(expected) {
            assert!((a - b).abs() < 1e-15);
        }
        for (a, b) in fine.coeffs().iter().zip(fine.space().greville()) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn corner_cut_constant() {
        let s = build_space(vec![0.0, 0.3, 1.0, 1.1], vec![-0.1, -0.5, -1.0]).unwrap();
        let fine = corner_cut(&GqsSpline::constant(s, 2.5));
        assert!(fine.coeffs().iter().all(|&d| (d - 2.5).abs() < 1e-15));
    }

    #[test]
    fn uniform_quadratic_weights_are_chaikin_like() {
        let s = build_space(vec![0.0, 1.0, 2.0, 3.0], vec![-1.0; 3]).unwrap();
        let rows = cut_weights(&s);
        // interior blocks: (3/4, 1/4), (1/4, 3/4) around midpoints, (3/4, 1/4), (1/4, 3/4) around knots
        let r = &rows[4..8];
        assert_eq!((r[0].w0, r[0].w1), (0.75, 0.25));
        assert_eq!((r[1].w0, r[1].w1), (0.25, 0.75));
        assert_eq!((r[2].w0, r[2].w1), (0.75, 0.25));
        assert_eq!((r[3].w0, r[3].w1), (0.25, 0.75));
    }

    #[test]
    fn polygon_sequence_cap_and_constant() {
        let s = build_space(vec![0.0, 1.0], vec![-0.5]).unwrap();
        let c = GqsSpline::constant(s.clone(), 1.0);
        assert!(polygon_sequence(&c, MAX_REFINE_LEVELS + 1).is_err());
        let seq = polygon_sequence(&c, 4).unwrap();
        assert!(seq.deltas.iter().all(|&d| d == 0.0));
        assert_eq!(seq.polygons.len(), 5);
    }

    #[test]
    fn contraction_factor_end_blocks_dominate() {
        // interior weights of a uniform quadratic space total 1/2, the end
        // blocks (ω_0 = 1, ω_n = 0) total 3/4
        let s = build_space(vec![0.0, 1.0, 2.0, 3.0], vec![-1.0; 3]).unwrap();
        assert_eq!(contraction_factor(&s), 0.75);
        let s = build_space(vec![0.0, 1.0, 2.0, 3.0], vec![-0.5; 3]).unwrap();
        assert!((contraction_factor(&s) - 0.875).abs() < 1e-15);
    }
}
