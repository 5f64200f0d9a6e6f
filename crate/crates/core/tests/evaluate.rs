use proptest::prelude::*;
use stationarity_core::capacity::{marginal_vectors, Capacity, ProbabilityVector};
use stationarity_core::evaluate::{
    cdeu_value, deu_value, deu_value_swapped, maxmin_value, prefer, PreferenceModel, Relation,
};
use stationarity_core::gen;
use stationarity_core::streams::{util_act, Act, DiscountFactor, Filtration, UtilityFunction};
use stationarity_core::EPS;

const GRID: [f64; 5] = [0.0, 1.0, 3.0, 7.0, 10.0];

fn beta(b: f64) -> DiscountFactor {
    DiscountFactor::new(b).unwrap()
}

fn utility(kind: u8) -> UtilityFunction {
    match kind % 4 {
        0 => UtilityFunction::identity(),
        1 => UtilityFunction::crra(0.5).unwrap(),
        2 => UtilityFunction::cara(0.3).unwrap(),
        _ => UtilityFunction::linear(2.0, -1.0).unwrap(),
    }
}

/// A random model on `n` states drawn from `seed`, one of each kind by `kind % 4`.
fn model(kind: u8, n: usize, seed: u64, u: UtilityFunction, b: DiscountFactor) -> PreferenceModel {
    let mut rng = gen::trial_rng(seed, 0);
    match kind % 4 {
        0 => PreferenceModel::deu(gen::probability(&mut rng, n), u, b),
        1 => PreferenceModel::cdeu(gen::convex_capacity(&mut rng, n), u, b, EPS).unwrap(),
        2 => PreferenceModel::cdeu(gen::capacity(&mut rng, n), u, b, EPS).unwrap(),
        _ => {
            let priors = (0..3).map(|_| gen::probability(&mut rng, n)).collect();
            PreferenceModel::maxmin(priors, u, b).unwrap()
        }
    }
}

fn act_pair(n: usize, horizon: usize, seed: u64) -> (Act, Act, Filtration) {
    let mut rng = gen::trial_rng(seed, 1);
    let filt = gen::filtration(&mut rng, n, horizon);
    let f = gen::adapted_act(&mut rng, &filt, &GRID);
    let g = gen::adapted_act(&mut rng, &filt, &GRID);
    (f, g, filt)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn verdict_is_invariant_under_affine_utility(
        kind in any::<u8>(),
        uk in any::<u8>(),
        n in 1usize..=4,
        horizon in 0usize..=4,
        seed in any::<u64>(),
        a in 0.2..5.0f64,
        b in -10.0..10.0f64,
    ) {
        let m = model(kind, n, seed, utility(uk), beta(0.8));
        let (f, g, _) = act_pair(n, horizon, seed);
        let before = prefer(&m, &f, &g, EPS).unwrap();
        // Gaps within rounding of the tolerance could legitimately flip.
        let gap = before.diff().abs();
        prop_assume!(!(1e-11..=1e-6).contains(&gap));
        let scaled = m.with_affine_utility(a, b).unwrap();
        let after = prefer(&scaled, &f, &g, EPS).unwrap();
        prop_assert_eq!(before.relation, after.relation);
    }

    #[test]
    fn additive_cdeu_is_deu(n in 1usize..=5, horizon in 0usize..=5, seed in any::<u64>(), uk in any::<u8>()) {
        let mut rng = gen::trial_rng(seed, 0);
        let p = gen::probability(&mut rng, n);
        let deu = PreferenceModel::deu(p.clone(), utility(uk), beta(0.9));
        let cdeu = PreferenceModel::cdeu(p.to_capacity(), utility(uk), beta(0.9), EPS).unwrap();
        let (f, _, _) = act_pair(n, horizon, seed);
        prop_assert!((deu_value(&f, &deu).unwrap() - cdeu_value(&f, &cdeu).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn maxmin_over_core_vertices_is_convex_cdeu(n in 2usize..=4, horizon in 0usize..=4, seed in any::<u64>()) {
        let mut rng = gen::trial_rng(seed, 0);
        let v = gen::convex_capacity(&mut rng, n);
        let vertices = marginal_vectors(&v, EPS).unwrap();
        let u = UtilityFunction::identity();
        let cdeu = PreferenceModel::cdeu(v, u.clone(), beta(0.8), EPS).unwrap();
        let maxmin = PreferenceModel::maxmin(vertices, u, beta(0.8)).unwrap();
        let (f, _, _) = act_pair(n, horizon, seed);
        prop_assert!((cdeu_value(&f, &cdeu).unwrap() - maxmin_value(&f, &maxmin).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn deu_evaluation_order_does_not_matter(n in 1usize..=5, horizon in 0usize..=6, seed in any::<u64>(), uk in any::<u8>(), b in 0.05..0.98f64) {
        let mut rng = gen::trial_rng(seed, 0);
        let m = PreferenceModel::deu(gen::probability(&mut rng, n), utility(uk), beta(b));
        let (f, _, _) = act_pair(n, horizon, seed);
        let inner = deu_value(&f, &m).unwrap();
        prop_assert!((inner - deu_value_swapped(&f, &m).unwrap()).abs() < 1e-9 * inner.abs().max(1.0));
    }

    #[test]
    fn raising_a_date_raises_the_value(
        kind in any::<u8>(),
        uk in any::<u8>(),
        n in 1usize..=4,
        horizon in 0usize..=4,
        seed in any::<u64>(),
        date in 0usize..=5,
        bump in 0.5..5.0f64,
    ) {
        let m = model(kind, n, seed, utility(uk), beta(0.8));
        let (f, _, _) = act_pair(n, horizon, seed);
        let date = date.min(horizon + 1);
        let mut payoffs = f.payoffs().to_vec();
        let mut tail = f.tail().to_vec();
        let row = if date <= horizon { &mut payoffs[date] } else { &mut tail };
        row.iter_mut().for_each(|x| *x += bump);
        let raised = Act::new(payoffs, tail).unwrap();
        prop_assert_eq!(prefer(&m, &raised, &f, EPS).unwrap().relation, Relation::StrictlyPrefersLeft);
    }

    #[test]
    fn pointwise_dominance_is_never_strictly_worse(
        kind in any::<u8>(),
        n in 1usize..=4,
        horizon in 0usize..=4,
        seed in any::<u64>(),
    ) {
        let m = model(kind, n, seed, UtilityFunction::identity(), beta(0.8));
        let (f, g, _) = act_pair(n, horizon, seed);
        let mut payoffs = f.payoffs().to_vec();
        for (row, other) in payoffs.iter_mut().zip(g.payoffs()) {
            for (x, y) in row.iter_mut().zip(other) {
                *x = x.max(*y);
            }
        }
        let tail: Vec<f64> = f.tail().iter().zip(g.tail()).map(|(x, y)| x.max(*y)).collect();
        let top = Act::new(payoffs, tail).unwrap();
        for other in [&f, &g] {
            prop_assert_ne!(prefer(&m, &top, other, EPS).unwrap().relation, Relation::StrictlyPrefersRight);
        }
    }

    #[test]
    fn constant_acts_are_worth_the_geometric_sum(kind in any::<u8>(), uk in any::<u8>(), n in 1usize..=4, seed in any::<u64>(), x in 0.0..20.0f64, b in 0.1..0.95f64) {
        let u = utility(uk);
        let m = model(kind, n, seed, u.clone(), beta(b));
        let want = u.eval(x).unwrap() / (1.0 - b);
        prop_assert!((m.value(&Act::constant(n, x)).unwrap() - want).abs() < 1e-9 * want.abs().max(1.0));
    }

    #[test]
    fn util_act_is_affine_in_u(n in 1usize..=4, horizon in 0usize..=4, seed in any::<u64>(), a in 0.2..5.0f64, c in -10.0..10.0f64) {
        let (f, _, _) = act_pair(n, horizon, seed);
        let u = UtilityFunction::crra(0.5).unwrap();
        let base = util_act(&f, &u, beta(0.8)).unwrap();
        let moved = util_act(&f, &u.affine(a, c).unwrap(), beta(0.8)).unwrap();
        for (x, y) in base.iter().zip(&moved) {
            prop_assert!((a * x + c / (1.0 - 0.8) - y).abs() < 1e-9);
        }
    }
}

#[test]
fn solar_and_carbon_under_deu() {
    let m = PreferenceModel::deu(
        ProbabilityVector::uniform(2),
        UtilityFunction::identity(),
        beta(0.8),
    );
    let s = Act::new(vec![vec![0.0, 0.0], vec![10.0, 0.0]], vec![0.0, 0.0]).unwrap();
    let c = Act::new(vec![vec![0.0, 0.0], vec![0.0, 10.0]], vec![0.0, 0.0]).unwrap();
    let v = prefer(&m, &s, &c, EPS).unwrap();
    assert!((v.left - 4.0).abs() < 1e-12 && (v.right - 4.0).abs() < 1e-12);
    assert_eq!(v.relation, Relation::Indifferent);
}

#[test]
fn maxmin_hull_equals_vertex_list() {
    // Adding interior points of the hull never lowers the minimum.
    let p = ProbabilityVector::new(vec![0.2, 0.8], EPS).unwrap();
    let q = ProbabilityVector::new(vec![0.7, 0.3], EPS).unwrap();
    let mid = ProbabilityVector::new(vec![0.45, 0.55], EPS).unwrap();
    let u = UtilityFunction::identity();
    let a = PreferenceModel::maxmin(vec![p.clone(), q.clone()], u.clone(), beta(0.8)).unwrap();
    let b = PreferenceModel::maxmin(vec![p, mid, q], u, beta(0.8)).unwrap();
    let f = Act::new(vec![vec![1.0, 1.0], vec![10.0, 0.0]], vec![3.0, 5.0]).unwrap();
    assert_eq!(a.value(&f).unwrap(), b.value(&f).unwrap());
}

#[test]
fn symmetric_capacity_below_half_prefers_the_hedge() {
    let v = Capacity::new(2, vec![0.0, 0.4, 0.4, 1.0], EPS).unwrap();
    let m = PreferenceModel::cdeu(v, UtilityFunction::identity(), beta(0.8), EPS).unwrap();
    let f_hat = Act::new(
        vec![vec![0.0, 0.0], vec![0.0, 7.0], vec![10.0, 0.0]],
        vec![0.0, 0.0],
    )
    .unwrap();
    let g_hat = Act::new(
        vec![vec![0.0, 0.0], vec![0.0, 7.0], vec![0.0, 10.0]],
        vec![0.0, 0.0],
    )
    .unwrap();
    let v = prefer(&m, &f_hat, &g_hat, EPS).unwrap();
    assert!((v.left - 5.92).abs() < 1e-12 && (v.right - 4.8).abs() < 1e-12);
}
