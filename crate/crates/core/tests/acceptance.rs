//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::f64::consts::PI;
use std::time::Instant;

use gqs::basis::{basis_function, HermiteData};
use gqs::geometry::{build_space, BetaSequence, GqsSpace, Partition};
use gqs::msa::HermiteEndpointState;
use gqs::operators::{
    dominance_margins, empirical_order, lagrange_alternative_system, lagrange_interpolant, lagrange_norm_bound,
    lagrange_norm_estimate, lagrange_system, lebesgue_constant, Operator,
};
use gqs::refine::{corner_cut, polygon_sequence, RefinementStep};
use gqs::shape::{diagnose, fit_convex, fit_monotone, Convexity, Monotonicity};
use gqs::testkit::{
    compare_samples, max_abs_diff, oracle_eval, random_partition, random_space_with, random_spline, rng, SmoothFn,
};
use rand::Rng;

const EVAL_TOL: f64 = 1e-13;

type Criterion = (&'static str, fn() -> Verdict);

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn partition_of_unity() -> Verdict {
    let mut r = rng(101);
    let mut worst = 0.0_f64;
    for _ in 0..50 {
        let space = random_space_with(&mut r, 1..=20, -1.0..=-0.05);
        let p = space.partition();
        for _ in 0..1000 {
            let x = r.gen_range(p.a()..=p.b());
            let sum: f64 = (0..space.dimension())
                .map(|k| basis_function(&space, k, x, EVAL_TOL).unwrap())
                .sum();
            worst = worst.max((sum - 1.0).abs());
        }
    }
    verdict(worst <= 1e-10, format!("max |ΣB_k - 1| = {worst:.2e} (50 spaces × 10³ points, tol 1e-10)"))
}

fn affine_reproduction() -> Verdict {
    let mut r = rng(202);
    let mut worst = 0.0_f64;
    for _ in 0..50 {
        let space = random_space_with(&mut r, 1..=20, -1.0..=-0.05);
        let p = space.partition();
        let scale = p.b() - p.a();
        for op in [Operator::Quasi, Operator::Lagrange] {
            for f in [(|_: f64| 1.0) as fn(f64) -> f64, |x| x] {
                let s = op.apply(&space, f).unwrap();
                for (x, v, _) in s.sample_dyadic(8).unwrap() {
                    worst = worst.max((v - f(x)).abs() / scale);
                }
            }
        }
    }
    verdict(worst <= 1e-10, format!("max |Pe - e|/(b-a) = {worst:.2e} for P ∈ {{Q, L}}, e ∈ {{1, x}} (tol 1e-10)"))
}

fn classical_case() -> Verdict {
    let mut r = rng(303);
    let mut worst = 0.0_f64;
    for _ in 0..50 {
        let space = random_space_with(&mut r, 1..=20, -1.0..=-1.0);
        let s = random_spline(&mut r, &space);
        let p = space.partition();
        for _ in 0..200 {
            let x = r.gen_range(p.a()..=p.b());
            let i = p.locate(x).unwrap();
            let st: HermiteEndpointState = s.local_state(i);
            let t = (x - p.knots()[i - 1]) / p.h(i);
            let (v, _) = s.eval(x, EVAL_TOL).unwrap();
            worst = worst.max((v - oracle_eval(&st, t).0).abs());
        }
    }
    let one = build_space(vec![0.0, 1.0], vec![-1.0]).unwrap();
    let l = lagrange_interpolant(&one, |x| x * x).unwrap();
    let lerr = max_abs_diff(l.coeffs(), &[0.0, 0.0, 0.5, 1.0]);
    verdict(
        worst <= 1e-11 && lerr <= 1e-12,
        format!("max |S - oracle| = {worst:.2e} (tol 1e-11); L(x²) on [0,1] off by {lerr:.2e} (tol 1e-12)"),
    )
}

fn refinement_fidelity() -> Verdict {
    let mut r = rng(404);
    let (mut worst_v, mut worst_col) = (0.0_f64, 0.0_f64);
    for _ in 0..50 {
        let space = random_space_with(&mut r, 1..=20, -1.0..=-0.05);
        let s = random_spline(&mut r, &space);
        let (ev, _) = compare_samples(&s.sample_dyadic(7).unwrap(), &corner_cut(&s).sample_dyadic(6).unwrap());
        worst_v = worst_v.max(ev);
        let step = RefinementStep::new(&space);
        for l in 0..step.fine.dimension() {
            worst_col = worst_col.max((step.column_sum(l) - 1.0).abs());
        }
    }
    verdict(
        worst_v <= 1e-10 && worst_col <= 1e-12,
        format!("max value change {worst_v:.2e} (tol 1e-10); max |column sum - 1| = {worst_col:.2e} (tol 1e-12)"),
    )
}

fn contraction() -> Verdict {
    let mut r = rng(505);
    let mut halving_failures = 0;
    let mut worst_scaled = 0.0_f64;
    let mut worst_dist = 0.0_f64;
    for _ in 0..50 {
        let space = random_space_with(&mut r, 1..=20, -1.0..=-0.05);
        let s = random_spline(&mut r, &space);
        let seq = polygon_sequence(&s, 12).unwrap();
        let d0 = seq.deltas[0];
        let mut ok = true;
        for (m, d) in seq.deltas.iter().enumerate() {
            let bound = d0 / f64::powi(2.0, m as i32);
            ok &= *d <= bound + 1e-12;
            worst_scaled = worst_scaled.max(d / bound);
        }
        halving_failures += usize::from(!ok);
        let samples = s.sample_dyadic(12).unwrap();
        for (poly, d) in seq.polygons.iter().zip(&seq.deltas) {
            let dist = samples.iter().map(|q| (poly.value_at(q.0) - q.1).abs()).fold(0.0, f64::max);
            if *d > 0.0 {
                worst_dist = worst_dist.max(dist / d);
            }
        }
    }
    verdict(
        halving_failures == 0 && worst_dist <= 2.0,
        format!(
            "Δ_m ≤ 2⁻ᵐΔ₀ violated on {halving_failures}/50 splines (worst 2ᵐΔ_m/Δ₀ = {worst_scaled:.3}); \
             max |P_m - S|/Δ_m = {worst_dist:.3} (bound 2)"
        ),
    )
}

fn shape_soundness() -> Verdict {
    let mut r = rng(606);
    let mut bad = Vec::new();
    let (mut min_slope, mut min_second) = (f64::INFINITY, f64::INFINITY);
    for trial in 0..100 {
        let p = random_partition(&mut r, 1..=15);
        let n = p.intervals();
        let mut values = vec![r.gen_range(-1.0..1.0)];
        for i in 1..=n {
            values.push(values[i - 1] + p.h(i) * r.gen_range(0.01..3.0));
        }
        let slopes = (0..=n).map(|_| 10f64.powf(r.gen_range(-2.0..1.5))).collect();
        let fit = fit_monotone(&p, &HermiteData::new(values, slopes).unwrap(), Monotonicity::Increasing).unwrap();
        if !diagnose(&fit.spline).monotone_increasing {
            bad.push(format!("monotone #{trial}"));
        }
        for (_, _, d) in fit.spline.sample_dyadic(8).unwrap() {
            min_slope = min_slope.min(d);
        }
    }
    for trial in 0..100 {
        let p = random_partition(&mut r, 1..=15);
        let n = p.intervals();
        let mut slopes = vec![r.gen_range(-3.0..1.0)];
        let mut values = vec![r.gen_range(-1.0..1.0)];
        for i in 1..=n {
            let tau = slopes[i - 1] + r.gen_range(0.01..2.0);
            values.push(values[i - 1] + tau * p.h(i));
            slopes.push(tau + r.gen_range(0.01..2.0));
        }
        let fit = fit_convex(&p, &HermiteData::new(values, slopes).unwrap(), Convexity::Convex).unwrap();
        if !diagnose(&fit.spline).convex {
            bad.push(format!("convex #{trial}"));
        }
        let rows = fit.spline.sample_dyadic(8).unwrap();
        let scale = rows.iter().fold(0.0_f64, |m, q| m.max(q.1.abs())).max(1.0);
        for w in rows.windows(3) {
            let sl = (w[1].1 - w[0].1) / (w[1].0 - w[0].0);
            let sr = (w[2].1 - w[1].1) / (w[2].0 - w[1].0);
            min_second = min_second.min((sr - sl) / scale);
        }
    }
    verdict(
        bad.is_empty() && min_slope >= -1e-10 && min_second >= -1e-8,
        format!(
            "diagnose failures {:?}; min g' = {min_slope:.2e} (≥ -1e-10); \
             min second difference/scale = {min_second:.2e} (≥ -1e-8)",
            bad
        ),
    )
}

fn norm_bound() -> Verdict {
    let exact = lagrange_norm_bound(&BetaSequence::new(vec![-1.0]).unwrap()) == 2.0;
    let mut r = rng(707);
    let mut worst_ratio = 0.0_f64;
    let mut exceed = 0;
    for _ in 0..50 {
        let space = random_space_with(&mut r, 1..=20, -1.0..=-0.05);
        let bound = lagrange_norm_bound(space.betas());
        let est = lagrange_norm_estimate(&space, 200, &mut r, 6).unwrap();
        exceed += usize::from(est > bound);
        worst_ratio = worst_ratio.max(est / bound);
    }
    let mut uniform_best: f64 = 0.0;
    for n in 1..=16 {
        let space = GqsSpace::with_constant_beta(Partition::uniform(0.0, 1.0, n).unwrap(), -1.0).unwrap();
        let est = lagrange_norm_estimate(&space, 200, &mut r, 8).unwrap();
        let (leb, _) = lebesgue_constant(&space, 8).unwrap();
        uniform_best = uniform_best.max(est).max(leb);
    }
    let sharp = uniform_best >= 0.85 * 2.0;
    verdict(
        exact && exceed == 0 && sharp,
        format!(
            "bound(-1) = 2 exactly: {exact}; ±1 trials above bound: {exceed}/50 spaces \
             (max ratio to bound {worst_ratio:.3}); uniform β ≡ -1 sup = {uniform_best:.4} (needs ≥ 1.7)"
        ),
    )
}

fn dual_formulation() -> Verdict {
    let mut r = rng(808);
    let mut worst = 0.0_f64;
    for _ in 0..50 {
        let space = random_space_with(&mut r, 1..=20, -1.0..=-0.05);
        let f = SmoothFn::random(&mut r);
        let l = lagrange_interpolant(&space, |x| f.value(x)).unwrap();
        let alt = lagrange_alternative_system(&space, |x| f.value(x)).unwrap();
        let (ev, _) = compare_samples(&l.sample_dyadic(6).unwrap(), &alt.spline.sample_dyadic(6).unwrap());
        worst = worst.max(ev).max(max_abs_diff(l.coeffs(), alt.spline.coeffs()));
        for i in 1..=space.n() {
            worst = worst.max(max_abs_diff(&l.local_coeffs(i).as_array(), &alt.local[i - 1].as_array()));
        }
    }
    verdict(worst <= 1e-9, format!("max discrepancy {worst:.2e} over 50 (space, f) pairs (tol 1e-9)"))
}

fn approximation_order() -> Verdict {
    let mut parts = Vec::new();
    let mut pass = true;
    for beta in [-1.0, -0.5] {
        for op in [Operator::Quasi, Operator::Lagrange] {
            let study = empirical_order(f64::sin, (0.0, PI), beta, op, 4..=9).unwrap();
            let slope = study.slope.unwrap_or(f64::NAN);
            pass &= (1.8..=2.2).contains(&slope);
            let name = if op == Operator::Quasi { "Q" } else { "L" };
            parts.push(format!("{name} β={beta}: {slope:.3}"));
        }
    }
    verdict(pass, format!("sin on [0,π], h = 2⁻⁴..2⁻⁹ slopes [{}] (band [1.8, 2.2])", parts.join(", ")))
}

fn diagonal_dominance() -> Verdict {
    let mut r = rng(909);
    let mut violations = 0;
    for _ in 0..1000 {
        let space = random_space_with(&mut r, 1..=40, -1.0..=-0.05);
        let sys = lagrange_system(&space, &vec![0.0; space.dimension()]).unwrap();
        let margins_ok = dominance_margins(&space).iter().all(|&(a, b)| a > 0.0 && b > 0.0);
        violations += usize::from(sys.dominance_violation().is_some() || !margins_ok);
    }
    verdict(violations == 0, format!("{violations} violations over 10³ random spaces"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("partition of unity", partition_of_unity),
        ("affine reproduction by Q and L", affine_reproduction),
        ("classical quadratic case", classical_case),
        ("refinement fidelity", refinement_fidelity),
        ("contraction of control polygons", contraction),
        ("shape soundness of fits", shape_soundness),
        ("Lagrange norm bound", norm_bound),
        ("dual Lagrange formulations agree", dual_formulation),
        ("approximation order", approximation_order),
        ("diagonal dominance", diagonal_dominance),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = run();
        let tag = if v.pass { "PASS" } else { "FAIL" };
        failed += usize::from(!v.pass);
        println!(
            "{tag} criterion {:>2} {name}: {} [{:.2}s]",
            k + 1,
            v.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
