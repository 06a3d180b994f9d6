//! Property tests over randomized inputs.

use std::collections::BTreeMap;

use proptest::prelude::*;

use smoothext_core::bump::{active_lattice, partition_value};
use smoothext_core::calculus::{polarize, SeminormSpec, SymmetricForm};
use smoothext_core::calculus::polynomial::sorted_tuples;
use smoothext_core::expr::{parse, Expr};

fn seminorm_strategy(m: usize) -> impl Strategy<Value = SeminormSpec> {
    prop_oneof![
        Just(SeminormSpec::CoordinateMax),
        Just(SeminormSpec::Euclidean),
        proptest::collection::vec(0.1f64..5.0, m)
            .prop_map(|weights| SeminormSpec::WeightedMax { weights }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn seminorm_axioms(
        v in proptest::collection::vec(-10.0f64..10.0, 3),
        w in proptest::collection::vec(-10.0f64..10.0, 3),
        lambda in -5.0f64..5.0,
        q in seminorm_strategy(3),
    ) {
        let qv = q.apply(&v);
        prop_assert!(qv >= 0.0);
        // absolute homogeneity
        let scaled: Vec<f64> = v.iter().map(|x| lambda * x).collect();
        prop_assert!((q.apply(&scaled) - lambda.abs() * qv).abs() <= 1e-9 * (1.0 + qv));
        // triangle inequality
        let sum: Vec<f64> = v.iter().zip(&w).map(|(a, b)| a + b).collect();
        prop_assert!(q.apply(&sum) <= qv + q.apply(&w) + 1e-12);
    }

    #[test]
    fn polarization_round_trip(
        seedvals in proptest::collection::vec(-1.0f64..1.0, 20),
        d in 1usize..=3,
        j in 1usize..=4,
    ) {
        let tuples = sorted_tuples(d, j);
        let entries: BTreeMap<Vec<usize>, Vec<f64>> = tuples
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), vec![seedvals[i % seedvals.len()]]))
            .collect();
        let beta = SymmetricForm::new(j, d, 1, entries).unwrap();
        let back = polarize(&beta.diagonal()).unwrap();
        for (key, v) in beta.entries() {
            let w = back.entry(key);
            prop_assert!((v[0] - w[0]).abs() <= 1e-9, "key {:?}: {} vs {}", key, v[0], w[0]);
        }
    }

    #[test]
    fn partition_of_unity_random_points(
        x in proptest::collection::vec(-5.0f64..5.0, 1..=3),
    ) {
        let mut total = 0.0;
        for z in active_lattice(&x) {
            let v = partition_value(&z, &x).unwrap();
            prop_assert!((0.0..=1.0 + 1e-12).contains(&v));
            total += v;
        }
        prop_assert!((total - 1.0).abs() <= 1e-12);
    }
}

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        (-4i32..=4).prop_map(|k| Expr::Const(k as f64 / 2.0)),
        (0usize..2).prop_map(Expr::Var),
    ]
}

fn expr_strategy() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(4, 32, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Expr::Div(Box::new(a), Box::new(b))),
            (inner.clone(), 0u32..=3).prop_map(|(a, e)| Expr::Pow(Box::new(a), e)),
            inner.clone().prop_map(|a| Expr::Neg(Box::new(a))),
            inner.clone().prop_map(|a| Expr::Sin(Box::new(a))),
            inner.clone().prop_map(|a| Expr::Cos(Box::new(a))),
            inner.prop_map(|a| Expr::Exp(Box::new(a))),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    /// print -> parse is the identity on ASTs (up to constant formatting,
    /// which `Display` keeps exact for dyadic literals).
    #[test]
    fn print_parse_round_trip(e in expr_strategy()) {
        let printed = e.to_string();
        let parsed = parse(&printed).unwrap_or_else(|err| {
            panic!("printed form `{printed}` failed to parse: {err}")
        });
        // compare by printing again: Neg(Const(c)) parses as Const(-c) for
        // literal-only subtrees, so AST equality is up to such folds
        prop_assert_eq!(parsed.to_string(), printed);
    }
}
