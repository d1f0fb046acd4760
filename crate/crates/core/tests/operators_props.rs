use gqs::operators::{
    dominance_margins, lagrange_alternative_system, lagrange_interpolant, lagrange_nodes, lagrange_system,
    quasi_interpolant, solve_tridiagonal,
};
use gqs::testkit::{max_abs_diff, random_space, rng, SmoothFn};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn lagrange_interpolates_at_its_nodes(seed in any::<u64>()) {
        let space = random_space(seed, 1..=12, -1.0..=-0.05);
        let f = SmoothFn::random(&mut rng(seed));
        let l = lagrange_interpolant(&space, |x| f.value(x)).unwrap();
        for x in lagrange_nodes(&space) {
            let (v, _) = l.eval(x, 1e-11).unwrap();
            prop_assert!((v - f.value(x)).abs() <= 1e-10, "x={x}");
        }
    }

    #[test]
    fn lagrange_system_is_dominant(seed in any::<u64>()) {
        let space = random_space(seed, 1..=30, -1.0..=-0.05);
        let sys = lagrange_system(&space, &vec![0.0; space.dimension()]).unwrap();
        prop_assert_eq!(sys.dominance_violation(), None);
        for (m1, m2) in dominance_margins(&space) {
            prop_assert!(m1 > 0.0 && m2 > 0.0);
        }
    }

    #[test]
    fn quasi_interpolant_never_amplifies(seed in any::<u64>()) {
        let space = random_space(seed, 1..=12, -1.0..=-0.05);
        let f = SmoothFn::random(&mut rng(seed));
        let q = quasi_interpolant(&space, |x| f.value(x)).unwrap();
        let p = space.partition();
        let fmax = (0..=4000)
            .map(|k| p.a() + (p.b() - p.a()) * k as f64 / 4000.0)
            .chain(space.greville())
            .map(|x| f.value(x).abs())
            .fold(0.0, f64::max);
        let qmax = q.coeffs().iter().fold(0.0_f64, |m, c| m.max(c.abs()));
        prop_assert!(qmax <= fmax + 1e-12);
        for r in q.sample_dyadic(5).unwrap() {
            prop_assert!(r.1.abs() <= qmax + 1e-12);
        }
    }

    #[test]
    fn local_and_global_formulations_agree(seed in any::<u64>()) {
        let space = random_space(seed, 1..=20, -1.0..=-0.05);
        let f = SmoothFn::random(&mut rng(seed));
        let l = lagrange_interpolant(&space, |x| f.value(x)).unwrap();
        let alt = lagrange_alternative_system(&space, |x| f.value(x)).unwrap();
        prop_assert_eq!(alt.system.dominance_violation(), None);
        prop_assert!(max_abs_diff(l.coeffs(), alt.spline.coeffs()) <= 1e-9);
        for i in 1..=space.n() {
            prop_assert!(max_abs_diff(&l.local_coeffs(i).as_array(), &alt.local[i - 1].as_array()) <= 1e-9);
        }
    }
}

#[test]
fn solver_handles_lagrange_systems_of_many_sizes() {
    for n in [1usize, 2, 3, 50, 400] {
        let space = random_space(n as u64, n..=n, -1.0..=-0.05);
        let values: Vec<f64> = lagrange_nodes(&space).iter().map(|x| x.cos()).collect();
        let sys = lagrange_system(&space, &values).unwrap();
        let x = solve_tridiagonal(&sys).unwrap();
        assert!(sys.residual(&x) <= 1e-12 * sys.scale() * 4.0);
    }
}

#[test]
fn lebesgue_constant_single_quadratic_interval() {
    let space = gqs::geometry::build_space(vec![0.0, 1.0], vec![-1.0]).unwrap();
    let (leb, x) = gqs::operators::lebesgue_constant(&space, 12).unwrap();
    assert!((leb - 5.0 / 3.0).abs() < 1e-12, "{leb}");
    assert_eq!(x, 0.5);
}

#[test]
fn lebesgue_constant_respects_bound_on_graded_meshes() {
    use gqs::operators::{lagrange_norm_bound, lebesgue_constant};
    for beta in [-1.0, -0.5, -0.2] {
        let mut knots = vec![0.0];
        for k in 0..8 {
            let h = if k % 2 == 0 { 1e-3 } else { 1e2 };
            knots.push(knots.last().unwrap() + h);
        }
        let space = gqs::geometry::build_space(knots, vec![beta; 8]).unwrap();
        let (leb, _) = lebesgue_constant(&space, 6).unwrap();
        assert!(leb <= lagrange_norm_bound(space.betas()), "β={beta}: {leb}");
    }
}

#[test]
fn lagrange_is_third_order_for_classical_quadratics() {
    use gqs::operators::{empirical_order, Operator};
    let st = empirical_order(f64::sin, (0.0, std::f64::consts::PI), -1.0, Operator::Lagrange, 4..=8).unwrap();
    let slope = st.slope.unwrap();
    assert!((slope - 3.0).abs() < 0.1, "{slope}");
    let st = empirical_order(f64::sin, (0.0, std::f64::consts::PI), -0.5, Operator::Lagrange, 4..=8).unwrap();
    assert!((st.slope.unwrap() - 2.0).abs() < 0.1);
}
