use proptest::prelude::*;
use stationarity_core::comono::{are_comonotonic, comonotonic_with_tails};
use stationarity_core::streams::Act;
use stationarity_core::EPS;

/// `(f(ω) - f(ω'))·(g(ω) - g(ω')) ≥ 0` for every pair of states.
fn comonotonic_by_products(f: &[f64], g: &[f64]) -> bool {
    (0..f.len()).all(|w| (0..f.len()).all(|w2| (f[w] - f[w2]) * (g[w] - g[w2]) >= 0.0))
}

fn pair() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (1usize..=6).prop_flat_map(|n| {
        let v = prop::collection::vec((0i32..5).prop_map(f64::from), n);
        (v.clone(), v)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn agrees_with_the_product_definition((f, g) in pair()) {
        let v = are_comonotonic(&f, &g, EPS).unwrap();
        prop_assert_eq!(v.comonotonic, comonotonic_by_products(&f, &g));
        if let Some((w, w2)) = v.witness {
            prop_assert!(f[w] > f[w2] && g[w2] > g[w]);
        }
    }

    #[test]
    fn is_symmetric_and_reflexive((f, g) in pair()) {
        prop_assert!(are_comonotonic(&f, &f, EPS).unwrap().comonotonic);
        prop_assert_eq!(
            are_comonotonic(&f, &g, EPS).unwrap().comonotonic,
            are_comonotonic(&g, &f, EPS).unwrap().comonotonic
        );
    }

    #[test]
    fn constants_and_monotone_transforms_are_comonotonic((f, _) in pair(), c in -5.0..5.0f64, k in 0.1..3.0f64) {
        let constant = vec![c; f.len()];
        prop_assert!(are_comonotonic(&f, &constant, EPS).unwrap().comonotonic);
        let transformed: Vec<f64> = f.iter().map(|x| (k * x).exp() + c).collect();
        prop_assert!(are_comonotonic(&f, &transformed, EPS).unwrap().comonotonic);
    }

    #[test]
    fn sums_of_comonotonic_functions_stay_comonotonic((f, g) in pair()) {
        prop_assume!(comonotonic_by_products(&f, &g));
        let sum: Vec<f64> = f.iter().zip(&g).map(|(a, b)| a + b).collect();
        prop_assert!(are_comonotonic(&sum, &f, EPS).unwrap().comonotonic);
        prop_assert!(are_comonotonic(&sum, &g, EPS).unwrap().comonotonic);
    }

    #[test]
    fn tails_check_every_later_date((f, g) in pair(), t in 0usize..3) {
        let n = f.len();
        let act = Act::new(vec![vec![0.0; n], f.clone(), g.clone()], f.clone()).unwrap();
        let constant = Act::constant(n, 1.0);
        let h: Vec<f64> = (0..n).map(|w| w as f64).collect();
        let want = act.payoffs()[t..].iter().chain([act.tail().to_vec()].iter()).all(|row| comonotonic_by_products(&h, row));
        let got = comonotonic_with_tails(&h, &act, &constant, t, EPS).unwrap();
        prop_assert_eq!(got.is_none(), want);
    }
}

#[test]
fn ties_within_eps_do_not_break_comonotonicity() {
    assert!(
        are_comonotonic(&[1.0, 1.0 + 1e-12], &[2.0, 1.0], 1e-9)
            .unwrap()
            .comonotonic
    );
    assert!(
        !are_comonotonic(&[1.0, 1.1], &[2.0, 1.0], 1e-9)
            .unwrap()
            .comonotonic
    );
}
