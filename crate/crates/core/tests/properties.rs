//! Property tests for the calculus invariants: apartness transitivity and
//! subset stability, superset closure of largeness, witness re-verification,
//! and anchor reconstruction round-trips.

use proptest::prelude::*;

use ovw_core::{
    is_large, theta_apart, verify_witness, Alphabet, FinSet, OrdinalExpr, ThetaKind,
    ThetaPredicate, ThetaTable, Token, VariableWord,
};

fn theta_strategy() -> impl Strategy<Value = ThetaPredicate> {
    prop_oneof![
        Just(ThetaPredicate::top()),
        Just(ThetaPredicate::greater_than()),
        Just(ThetaPredicate::power_gap()),
        (
            proptest::collection::vec((0u64..8, 0u64..16, 0u64..8, any::<bool>()), 0..6),
            any::<bool>()
        )
            .prop_map(|(triples, default)| ThetaPredicate {
                kind: ThetaKind::Table(ThetaTable { triples, default }),
                c: 0,
            }),
    ]
}

/// Three separated nonempty sets drawn from a small universe.
fn separated_triple() -> impl Strategy<Value = (FinSet, FinSet, FinSet)> {
    proptest::collection::btree_set(0u64..40, 3..12).prop_flat_map(|values| {
        let values: Vec<u64> = values.into_iter().collect();
        let n = values.len();
        (1..n - 1, 0usize..2).prop_map(move |(second_cut, skew)| {
            let first_cut = (second_cut + 1).min(n - 1);
            let a = 1.max(second_cut.saturating_sub(1 + skew));
            (
                FinSet::from_u64s(&values[..a]),
                FinSet::from_u64s(&values[a..first_cut]),
                FinSet::from_u64s(&values[first_cut..]),
            )
        })
    })
}

proptest! {
    /// theta-apartness is transitive.
    #[test]
    fn apartness_transitive(theta in theta_strategy(), (x, y, z) in separated_triple()) {
        prop_assume!(!x.is_empty() && !y.is_empty() && !z.is_empty());
        let xy = theta_apart(&x, &y, &theta).unwrap();
        let yz = theta_apart(&y, &z, &theta).unwrap();
        if xy && yz {
            prop_assert!(theta_apart(&x, &z, &theta).unwrap());
        }
    }

    /// Apartness is stable under taking nonempty subsets of both sides.
    #[test]
    fn apartness_subset_stable(
        theta in theta_strategy(),
        (x, y, _) in separated_triple(),
        xmask in 1u32..64,
        ymask in 1u32..64,
    ) {
        prop_assume!(!x.is_empty() && !y.is_empty());
        if !theta_apart(&x, &y, &theta).unwrap() {
            return Ok(());
        }
        let pick = |set: &FinSet, mask: u32| {
            let chosen: Vec<_> = set
                .elements()
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << (i % 6)) != 0)
                .map(|(_, e)| e.clone())
                .collect();
            if chosen.is_empty() {
                set.clone()
            } else {
                FinSet::new(chosen)
            }
        };
        let x0 = pick(&x, xmask);
        let y0 = pick(&y, ymask);
        prop_assert!(theta_apart(&x0, &y0, &theta).unwrap());
    }

    /// Largeness is closed under superset (with unchanged-or-larger minimum).
    #[test]
    fn largeness_superset_closed(
        theta in theta_strategy(),
        base in proptest::collection::btree_set(4u64..24, 1..8),
        extra in proptest::collection::btree_set(4u64..40, 0..6),
        n in 0u32..3,
        k in 1u64..4,
    ) {
        let x = FinSet::from_u64s(&base.iter().copied().collect::<Vec<_>>());
        let mut union: Vec<u64> = base.iter().copied().collect();
        union.extend(extra.iter().copied().filter(|e| *e >= *base.iter().next().unwrap()));
        let bigger = FinSet::from_u64s(&union);
        let e = OrdinalExpr::new(n, k).unwrap();
        if is_large(&x, &e, &theta, false).unwrap().large {
            prop_assert!(is_large(&bigger, &e, &theta, false).unwrap().large);
        }
    }

    /// Every witness produced on a positive decision re-verifies, and fails
    /// against a different rank.
    #[test]
    fn witnesses_reverify(
        theta in theta_strategy(),
        base in proptest::collection::btree_set(0u64..20, 1..9),
        n in 0u32..3,
        k in 1u64..4,
    ) {
        let x = FinSet::from_u64s(&base.iter().copied().collect::<Vec<_>>());
        let e = OrdinalExpr::new(n, k).unwrap();
        let outcome = is_large(&x, &e, &theta, false).unwrap();
        if outcome.large {
            let witness = outcome.witness.expect("witness on true");
            prop_assert!(verify_witness(&x, &e, &theta, &witness));
            let other = OrdinalExpr::new(n + 1, k + 1).unwrap();
            prop_assert!(!verify_witness(&x, &other, &theta, &witness));
        }
    }

    /// The greedy decision (trivial apartness) agrees with the exact block
    /// search, probed through a table predicate semantically equal to top,
    /// on sets beyond the brute-force oracle's reach.
    #[test]
    fn greedy_matches_exact_search(
        base in proptest::collection::btree_set(1u64..80, 1..36),
        n in 0u32..4,
        k in 1u64..4,
    ) {
        let x = FinSet::from_u64s(&base.iter().copied().collect::<Vec<_>>());
        let e = OrdinalExpr::new(n, k).unwrap();
        let top = ThetaPredicate::top();
        let top_as_table = ThetaPredicate {
            kind: ThetaKind::Table(ThetaTable {
                triples: vec![],
                default: true,
            }),
            c: 0,
        };
        let greedy = is_large(&x, &e, &top, false).unwrap().large;
        let exact = is_large(&x, &e, &top_as_table, false).unwrap().large;
        prop_assert_eq!(greedy, exact, "X={} e={}", x, e);
    }

    /// Rebuilding a variable word from its own tokens reproduces the anchors.
    #[test]
    fn anchors_round_trip(tokens in proptest::collection::vec(0usize..5, 1..10)) {
        let alphabet = Alphabet::new(3).unwrap();
        let tokens: Vec<Token> = tokens
            .into_iter()
            .map(|i| if i < 3 { Token::Letter(i) } else { Token::Var(i - 3) })
            .collect();
        if let Ok(w) = VariableWord::new(tokens.clone(), alphabet) {
            let again = VariableWord::new(w.tokens().to_vec(), alphabet).unwrap();
            prop_assert_eq!(again.anchors(), w.anchors());
            prop_assert_eq!(again, w);
        }
    }
}
