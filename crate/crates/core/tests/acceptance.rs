//! Acceptance suite: one test per criterion, each printing a pass/fail line
//! (run with `--nocapture` to see them).
//!
//! Two criteria ask for generated inputs whose existence is ruled out by the
//! growth of the largeness hierarchy itself: an `w^3`-large set with minimum
//! 4 needs more than 2^200 elements, and a sparse set with minimum 4 has at
//! most two representable elements. Those tests run the faithful attempt,
//! document the obstruction, and fail honestly; the same constructions are
//! exercised green at feasible minima in the library's unit tests.

use std::collections::BTreeMap;
use std::time::Instant;

use ovw_core::{
    canonical_tree, cert_apartness, cert_cs_subtree, cert_gr_subspace, cert_hj_line,
    cert_large_homog_tree, cert_largeness, cert_sparse_subset, cert_split_largeness,
    find_cs_subtree, find_gr_subspace, find_hj_line, find_large_homog_ovw_subtree, generate_large,
    homogeneous_space_color, homogeneous_tree_color, is_large, is_large_bruteforce, is_sparse,
    ovw_exponent, sparse_subset, split_large, theta_apart, theta_apart_naive, verify_certificate,
    verify_hj_instance, Alphabet, BigUint, BoundParams, BruteForceOracle, CertError, Certificate,
    Coloring, CombinatorialSpace, CsStrategy, FinSet, GrowthCaps, HjMode, OVWTree, OrdinalExpr,
    OvwMode, PipelineOptions, RunConfig, SplitMix64, StructureRepr, SubstructureColoring,
    ThetaKind, ThetaPredicate, ThetaTable, Token, VariableWord, Word,
};

fn pass(name: &str, detail: impl std::fmt::Display) {
    println!("[PASS] {name} — {detail}");
}

fn top() -> ThetaPredicate {
    ThetaPredicate::top()
}

fn vw(text: &str, k: usize) -> VariableWord {
    VariableWord::parse(text, Alphabet::new(k).unwrap()).unwrap()
}

/// Substitution fidelity: the worked substitutions and both invalid-word
/// rejections reproduce bit-exactly. Runtime < 1 s.
#[test]
fn acceptance_01_substitution_fidelity() {
    let start = Instant::now();
    let w = vw("a b x0 a x0 b x1 b b", 2);
    assert_eq!(w.anchors(), &[2, 6]);
    assert_eq!(w.substitute(&Word::empty()).unwrap().to_string(), "ab");
    assert_eq!(
        w.substitute(&Word::parse("a").unwrap()).unwrap().to_string(),
        "abaaab"
    );
    assert_eq!(
        w.substitute(&Word::parse("ba").unwrap()).unwrap().to_string(),
        "abbabbabb"
    );
    assert!(matches!(
        VariableWord::parse("a x0 b x1 x0 a b", Alphabet::new(2).unwrap()),
        Err(ovw_core::WordError::OrderViolation { .. })
    ));
    assert!(matches!(
        VariableWord::parse("a a x1 b", Alphabet::new(2).unwrap()),
        Err(ovw_core::WordError::MissingVariable(0))
    ));
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 1, "took {elapsed:?}");
    pass(
        "substitution fidelity",
        format!("3 substitutions + 2 rejections in {elapsed:?}"),
    );
}

/// Largeness oracle agreement on every X in {4..16} with |X| <= 7, ranks
/// w^n*k for n <= 2, k <= 3, under top and gt. Runtime < 60 s.
#[test]
fn acceptance_02_largeness_oracle_agreement() {
    let start = Instant::now();
    let universe: Vec<u64> = (4..=16).collect();
    let thetas = [ThetaPredicate::top(), ThetaPredicate::greater_than()];
    let mut compared: u64 = 0;
    for theta in &thetas {
        let mut oracle = BruteForceOracle::new(theta.clone(), 12);
        // The empty set decides only at w^0.
        assert!(!is_large(&FinSet::empty(), &OrdinalExpr::omega(0), theta, false)
            .unwrap()
            .large);
        assert!(!oracle
            .is_large(&FinSet::empty(), &OrdinalExpr::omega(0))
            .unwrap());
        for mask in 1u32..(1 << universe.len()) {
            if mask.count_ones() > 7 {
                continue;
            }
            let elements: Vec<u64> = universe
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &v)| v)
                .collect();
            let x = FinSet::from_u64s(&elements);
            for n in 0..=2u32 {
                for k in 1..=3u64 {
                    let e = OrdinalExpr::new(n, k).unwrap();
                    let fast = is_large(&x, &e, theta, false).unwrap().large;
                    let slow = oracle.is_large(&x, &e).unwrap();
                    assert_eq!(fast, slow, "disagreement on X={x} e={e} theta={theta:?}");
                    compared += 1;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 60, "took {elapsed:?}");
    pass(
        "largeness oracle agreement",
        format!("{compared} comparisons, zero disagreements, in {elapsed:?}"),
    );
}

/// Apartness transitivity on 10^4 random triples per predicate kind, and the
/// production evaluation against a literal triple-loop oracle on 10^3 random
/// pairs. Runtime < 10 s.
#[test]
fn acceptance_03_apartness() {
    let start = Instant::now();
    let thetas = [
        ThetaPredicate::top(),
        ThetaPredicate::greater_than(),
        ThetaPredicate::power_gap(),
        ThetaPredicate {
            kind: ThetaKind::Table(ThetaTable {
                triples: vec![
                    (0, 1, 0, true),
                    (1, 2, 0, false),
                    (2, 5, 1, true),
                    (3, 7, 2, true),
                ],
                default: true,
            }),
            c: 0,
        },
    ];
    let mut rng = SplitMix64::new(0x5eed);
    let random_set = |rng: &mut SplitMix64, lo: u64, hi: u64| -> FinSet {
        let size = 1 + rng.next_u64() % 3;
        let span = hi.saturating_sub(lo).max(1);
        FinSet::new(
            (0..size)
                .map(|_| BigUint::from(lo + rng.next_u64() % span))
                .collect(),
        )
    };
    for theta in &thetas {
        let mut transitive_hits = 0u32;
        for _ in 0..10_000 {
            let a = 1 + rng.next_u64() % 10;
            let b = a + 3 + rng.next_u64() % 10;
            let c = b + 3 + rng.next_u64() % 10;
            let x = random_set(&mut rng, 0, a);
            let y = random_set(&mut rng, a + 1, b);
            let z = random_set(&mut rng, b + 1, c);
            let xy = theta_apart(&x, &y, theta).unwrap();
            let yz = theta_apart(&y, &z, theta).unwrap();
            if xy && yz {
                transitive_hits += 1;
                assert!(
                    theta_apart(&x, &z, theta).unwrap(),
                    "transitivity violated for {theta:?}: {x} | {y} | {z}"
                );
            }
        }
        for _ in 0..1_000 {
            let a = 1 + rng.next_u64() % 12;
            let b = a + 2 + rng.next_u64() % 12;
            let x = random_set(&mut rng, 0, a);
            let y = random_set(&mut rng, a + 1, b);
            assert_eq!(
                theta_apart(&x, &y, theta).unwrap(),
                theta_apart_naive(&x, &y, theta).unwrap(),
                "evaluator mismatch for {theta:?}: {x} | {y}"
            );
        }
        assert!(transitive_hits > 0, "no apart-apart triples sampled");
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 10, "took {elapsed:?}");
    pass(
        "apartness",
        format!("4 kinds x (10^4 triples + 10^3 oracle pairs) in {elapsed:?}"),
    );
}

/// Hales-Jewett at desk scale: (2,2,2) holds over all 16 colorings, (2,2,1)
/// fails with a verified counterexample, (3,2,2) fails with a verified
/// line-free coloring found by backtracking over the 7 lines. Runtime < 5 s.
#[test]
fn acceptance_04_hales_jewett_desk_scale() {
    let start = Instant::now();
    let verdict = verify_hj_instance(2, 2, 2, HjMode::Exhaustive, 1 << 20, 10_000).unwrap();
    assert!(verdict.holds);

    let verdict = verify_hj_instance(2, 2, 1, HjMode::Exhaustive, 1 << 20, 10_000).unwrap();
    assert!(!verdict.holds);
    let cex = verdict.counterexample.unwrap();
    let space = CombinatorialSpace::new(vw("x0", 2));
    for line in space.subspaces(1).unwrap() {
        assert_eq!(homogeneous_space_color(&line, &cex, 100).unwrap(), None);
    }

    let verdict = verify_hj_instance(3, 2, 2, HjMode::Backtracking, 1 << 20, 10_000).unwrap();
    assert!(!verdict.holds);
    let cex = verdict.counterexample.unwrap();
    let space = CombinatorialSpace::new(vw("x0 x1", 3));
    let lines: Vec<_> = space.subspaces(1).unwrap().collect();
    assert_eq!(lines.len(), 7, "the 3x3 grid has 7 lines");
    for line in &lines {
        assert_eq!(
            homogeneous_space_color(line, &cex, 100).unwrap(),
            None,
            "line {} is monochromatic",
            line.generator()
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 5, "took {elapsed:?}");
    pass(
        "hales-jewett desk scale",
        format!("(2,2,2) holds; (2,2,1) and (3,2,2) refuted with verified colorings in {elapsed:?}"),
    );
}

/// Over all 128 two-colorings of the 7-point tree, the direct and
/// reduction-based searches agree on existence at d = 1 and every witness
/// verifies. Runtime < 30 s.
#[test]
fn acceptance_05_carlson_simpson_cross_strategy() {
    let start = Instant::now();
    let tree = OVWTree::new(vw("x0 x1", 2));
    let points = tree.points(100).unwrap();
    assert_eq!(points.len(), 7);
    let mut witnesses = 0u32;
    for mask in 0u32..(1 << 7) {
        let entries: BTreeMap<Word, u64> = points
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), ((mask >> i) & 1) as u64))
            .collect();
        let f = Coloring::table(2, entries);
        let direct = find_cs_subtree(&tree, 1, &f, CsStrategy::Direct, 1000).unwrap();
        let via = find_cs_subtree(&tree, 1, &f, CsStrategy::ViaGr, 1000).unwrap();
        assert_eq!(
            direct.is_some(),
            via.is_some(),
            "strategies disagree on coloring mask {mask:#09b}"
        );
        for witness in [direct, via].into_iter().flatten() {
            witnesses += 1;
            let color = homogeneous_tree_color(&witness.tree, &f, 1000)
                .unwrap()
                .expect("witness must be homogeneous");
            assert_eq!(color, witness.color);
            assert!(witness.tree.is_substructure_of(&tree, 1000).unwrap());
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 30, "took {elapsed:?}");
    pass(
        "carlson-simpson cross-strategy",
        format!("128 colorings, {witnesses} verified witnesses, in {elapsed:?}"),
    );
}

/// Split postconditions on generated w^(a+2b+1)-large sets with minimum in
/// {4, 5} for (a,b) in {(0,1),(1,1),(0,2)}.
///
/// Unattainable: a w^3-large set with minimum 4 must contain a w^2-large
/// block with minimum above 200, which by the doubling of its w^1-blocks has
/// more than 2^200 elements; (1,1) and (0,2) need w^4 and w^5. No generator
/// can materialize these, so the faithful attempt below reports schedule
/// exhaustion and this criterion fails honestly. The same construction and
/// its full postconditions run green at minimum 1 in the library tests
/// (split_large_step_case_feasible_scale).
#[test]
fn acceptance_06_split_large_postconditions() {
    let start = Instant::now();
    let theta = top();
    let mut failures = Vec::new();
    for (a, b) in [(0u32, 1u32), (1, 1), (0, 2)] {
        for min in [4u64, 5u64] {
            let rank = OrdinalExpr::omega(a + 2 * b + 1);
            match generate_large(
                &rank,
                &theta,
                &BigUint::from(min),
                false,
                true,
                &GrowthCaps::default(),
            ) {
                Ok(x) => {
                    // If a set ever materializes, run the stated checks.
                    let blocks = split_large(&x, a, b, &theta, true).unwrap();
                    for pair in blocks.windows(2) {
                        assert!(theta_apart(&pair[0], &pair[1], &theta).unwrap());
                    }
                    for block in &blocks {
                        assert!(is_large(block, &OrdinalExpr::omega(a), &theta, false)
                            .unwrap()
                            .large);
                    }
                }
                Err(err) => failures.push(format!("(a={a}, b={b}, min={min}): {err}")),
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 120, "took {elapsed:?}");
    if !failures.is_empty() {
        eprintln!(
            "[FAIL] split postconditions — inputs cannot exist at minimum 4 or 5: the \
             w^(a+2b+1) ranks force super-astronomical sizes (a w^3-large set with minimum 4 \
             exceeds 2^200 elements). Faithful attempts: {failures:?}. See the feasible-scale \
             green run in the largeness unit tests."
        );
        panic!("split postconditions unattainable as stated; see analysis above");
    }
    pass("split postconditions", format!("in {elapsed:?}"));
}

/// Sparse subset extraction on generated w^(2n+7)-large inputs for n in
/// {0, 1}.
///
/// Unattainable: w^7-largeness forces sizes beyond 2^200 elements at any
/// starting minimum, and a sparse set with minimum 4 cannot hold three
/// representable elements (the third must exceed a power tower of height
/// three over 4^256). The faithful attempt reports schedule exhaustion and
/// this criterion fails honestly. The extraction itself runs green on a
/// w^3-large set at minimum 1 in the largeness unit tests
/// (sparse_subset_relax_scale).
#[test]
fn acceptance_07_sparse_subset() {
    let start = Instant::now();
    let theta = top();
    let mut failures = Vec::new();
    for n in [0u32, 1u32] {
        let rank = OrdinalExpr::omega(2 * n + 7);
        match generate_large(
            &rank,
            &theta,
            &BigUint::from(4u32),
            false,
            true,
            &GrowthCaps::default(),
        ) {
            Ok(x) => {
                let y = sparse_subset(&x, n, &theta, true).unwrap();
                assert!(is_sparse(&y));
                assert!(is_large(&y, &OrdinalExpr::omega(n), &theta, false)
                    .unwrap()
                    .large);
            }
            Err(err) => failures.push(format!("n={n}: {err}")),
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 60, "took {elapsed:?}");
    if !failures.is_empty() {
        eprintln!(
            "[FAIL] sparse subset — generated w^(2n+7)-large inputs cannot exist: the rank \
             forces more elements than any machine holds, and sparsity at minimum 4 tops out \
             at two representable elements. Faithful attempts: {failures:?}. See the \
             feasible-scale green run in the largeness unit tests."
        );
        panic!("sparse subset criterion unattainable as stated; see analysis above");
    }
    pass("sparse subset", format!("in {elapsed:?}"));
}

/// Independent oracle for the pipeline: exhaustive enumeration of subtree
/// generators with the word operations only.
fn oracle_exists_large_homog_subtree(
    generator: &VariableWord,
    coloring: &Coloring,
    theta: &ThetaPredicate,
    target: &OrdinalExpr,
) -> bool {
    let k = generator.alphabet().size();
    for t in 1..=generator.dimension() {
        let truncated = generator.truncate_before(t).unwrap();
        // All token sequences of length t over letters and variables x0..x_{t-1}.
        let symbols: Vec<Token> = (0..t)
            .map(Token::Var)
            .chain((0..k).map(Token::Letter))
            .collect();
        let mut digits = vec![0usize; t];
        'seqs: loop {
            let u: Vec<Token> = digits.iter().map(|&i| symbols[i]).collect();
            if let Ok(candidate) = truncated.compose(&u) {
                let anchors = FinSet::new(
                    candidate
                        .anchors()
                        .iter()
                        .map(|&p| BigUint::from(p as u64))
                        .collect(),
                );
                if is_large(&anchors, target, theta, false).unwrap().large {
                    // Homogeneity by direct substitution sweep.
                    let mut color: Option<u64> = None;
                    let mut mono = true;
                    'depths: for depth in 0..=candidate.dimension() {
                        let mut letters = vec![0usize; depth];
                        loop {
                            let point = candidate
                                .substitute(&Word::from_letters(letters.clone()))
                                .unwrap();
                            let c = coloring.color_of(&point).unwrap();
                            match color {
                                None => color = Some(c),
                                Some(prev) if prev == c => {}
                                Some(_) => {
                                    mono = false;
                                    break 'depths;
                                }
                            }
                            let mut pos = depth;
                            loop {
                                if pos == 0 {
                                    continue 'depths;
                                }
                                pos -= 1;
                                letters[pos] += 1;
                                if letters[pos] < k {
                                    break;
                                }
                                letters[pos] = 0;
                            }
                        }
                    }
                    if mono {
                        return true;
                    }
                }
            }
            let mut pos = t;
            loop {
                if pos == 0 {
                    break 'seqs;
                }
                pos -= 1;
                digits[pos] += 1;
                if digits[pos] < symbols.len() {
                    break;
                }
                digits[pos] = 0;
            }
        }
    }
    false
}

/// Pipeline soundness and desk-scale completeness: on every instance the
/// returned result verifies (homogeneous, large, contained); whenever the
/// brute-force oracle finds a w^1-large homogeneous subtree, the relaxed
/// pipeline also reports one. Runtime < 5 min.
#[test]
fn acceptance_08_pipeline_soundness_completeness() {
    let start = Instant::now();
    let theta = top();
    let target = OrdinalExpr::omega(1);
    let params = BoundParams::new(1, 1);
    let opts = PipelineOptions::relaxed();
    let anchor_sets: Vec<FinSet> = vec![
        FinSet::from_u64s(&[1, 2, 3, 4, 5, 6]),
        FinSet::from_u64s(&[2, 3, 5, 6, 8]),
    ];
    let mut colorings: Vec<Coloring> =
        vec![Coloring::length_mod(2), Coloring::letter_count_mod(0, 2)];
    for seed in 1..=5 {
        colorings.push(Coloring::poly_hash(2, seed));
    }
    let mut found = 0u32;
    let mut absent = 0u32;
    for anchors in &anchor_sets {
        let tree = canonical_tree(anchors, 2).unwrap();
        for coloring in &colorings {
            let oracle_found =
                oracle_exists_large_homog_subtree(tree.generator(), coloring, &theta, &target);
            let result = find_large_homog_ovw_subtree(
                &tree,
                coloring,
                &theta,
                0,
                OvwMode::Ind,
                &params,
                &opts,
            );
            match result {
                Ok(r) => {
                    found += 1;
                    // Postconditions: homogeneous, large, contained.
                    let color = homogeneous_tree_color(&r.witness, coloring, 1 << 20)
                        .unwrap()
                        .expect("pipeline witness must be homogeneous");
                    assert_eq!(color, r.color);
                    assert!(is_large(&r.anchors, &target, &theta, false).unwrap().large);
                    assert!(r.witness.is_substructure_of(&tree, 1 << 20).unwrap());
                    assert!(
                        oracle_found,
                        "pipeline returned a witness the oracle cannot see: X={anchors}"
                    );
                    // Determinism of repeated runs.
                    let again = find_large_homog_ovw_subtree(
                        &tree,
                        coloring,
                        &theta,
                        0,
                        OvwMode::Ind,
                        &params,
                        &opts,
                    )
                    .unwrap();
                    assert_eq!(again.witness.generator(), r.witness.generator());
                    assert_eq!(again.anchors, r.anchors);
                }
                Err(err) => {
                    absent += 1;
                    assert!(
                        !oracle_found,
                        "oracle finds a w^1-large homogeneous subtree on X={anchors} but the \
                         pipeline reported: {err}"
                    );
                }
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 300, "took {elapsed:?}");
    pass(
        "pipeline soundness and completeness",
        format!("14 instances: {found} witnessed, {absent} confirmed absent, in {elapsed:?}"),
    );
}

/// Bound recursion matches hand computation for b <= 5 at both parameter
/// pairs, and satisfies the recurrence exactly.
#[test]
fn acceptance_09_bound_recursion() {
    let cases = [
        ((10u32, 12u32), vec![12u64, 86, 382, 1566, 6302, 25246]),
        ((1, 1), vec![1, 15, 71, 295, 1191, 4775]),
    ];
    for ((n0, n1), expected) in &cases {
        let params = BoundParams::new(*n0, *n1);
        for (b, want) in expected.iter().enumerate() {
            let got = ovw_exponent(b as u32, &params).unwrap();
            assert_eq!(got, *want, "p({b}) at (n0,n1)=({n0},{n1})");
        }
        for b in 0..5u32 {
            let here = ovw_exponent(b, &params).unwrap();
            let next = ovw_exponent(b + 1, &params).unwrap();
            assert_eq!(next, 4 * here + 3 * *n0 as u64 + 8);
        }
    }
    pass("bound recursion", "b <= 5 at (10,12) and (1,1), recurrence exact");
}

/// Builds one certificate per kind from genuine runs.
fn certificates_of_every_kind() -> Vec<(&'static str, Certificate)> {
    let config = RunConfig::default();
    let theta = top();
    let mut certs = Vec::new();

    // HJ line on the parity instance; only the diagonal line is mono.
    let space = CombinatorialSpace::new(vw("x0 x1", 2));
    let parity = Coloring::letter_count_mod(1, 2);
    let found = find_hj_line(&space, &parity, 1000).unwrap().unwrap();
    certs.push((
        "hj_line",
        cert_hj_line(
            &config,
            &StructureRepr::of_space(&space),
            &parity,
            found.space.generator().tokens(),
            found.color,
        )
        .unwrap(),
    ));

    // GR subspace: color lines by their anchor position; at d=1 every
    // candidate has one 1-subspace (itself), so the first line wins.
    let mut entries = BTreeMap::new();
    for sub in space.subspaces(1).unwrap() {
        entries.insert(sub.generator().to_string(), 0u64);
    }
    let g = SubstructureColoring { l: 2, entries };
    let found = find_gr_subspace(&space, 1, 2, &g).unwrap().unwrap();
    certs.push((
        "gr_subspace",
        cert_gr_subspace(
            &config,
            &StructureRepr::of_space(&space),
            1,
            2,
            &g,
            found.space.generator().tokens(),
            found.color,
        )
        .unwrap(),
    ));

    // CS subtree on the length-parity instance.
    let tree = OVWTree::new(vw("x0 x1", 2));
    let f = Coloring::length_mod(2);
    let found = find_cs_subtree(&tree, 1, &f, CsStrategy::Direct, 1000)
        .unwrap()
        .unwrap();
    certs.push((
        "cs_subtree",
        cert_cs_subtree(
            &config,
            &StructureRepr::of_tree(&tree),
            1,
            &f,
            CsStrategy::Direct,
            found.tree.generator().tokens(),
            found.color,
        )
        .unwrap(),
    ));

    // Largeness of the canonical w^1 example.
    let x = FinSet::from_u64s(&[4, 5, 6, 7, 8]);
    let outcome = is_large(&x, &OrdinalExpr::omega(1), &theta, true).unwrap();
    certs.push((
        "largeness",
        cert_largeness(
            &config,
            &x,
            &OrdinalExpr::omega(1),
            &outcome.witness.unwrap(),
        )
        .unwrap(),
    ));

    // Apartness under gt.
    let gt_config = RunConfig {
        theta: ThetaPredicate::greater_than(),
        ..RunConfig::default()
    };
    certs.push((
        "apartness",
        cert_apartness(
            &gt_config,
            &FinSet::from_u64s(&[4, 6]),
            &FinSet::from_u64s(&[10, 12]),
        )
        .unwrap(),
    ));

    // Split at b = 0 on the w^1 example (strict run).
    let blocks = split_large(&x, 0, 0, &theta, true).unwrap();
    certs.push((
        "split_largeness",
        cert_split_largeness(&config, &x, 0, 0, &blocks).unwrap(),
    ));

    // Sparse subset of the w^3-large run from 1 (relaxed minimum).
    let run = FinSet::range_inclusive(1, 14);
    let subset = sparse_subset(&run, 0, &theta, false).unwrap();
    certs.push((
        "sparse_subset",
        cert_sparse_subset(&config, &run, 0, &subset).unwrap(),
    ));

    // Large homogeneous subtree from the pipeline instance. A letter-count
    // coloring pins the witness letters: flipping any letter shifts colors,
    // so single-field mutations cannot slide to another valid witness.
    let anchors = FinSet::from_u64s(&[1, 2, 3, 4, 5, 6]);
    let ptree = canonical_tree(&anchors, 2).unwrap();
    let counts = Coloring::letter_count_mod(0, 2);
    let result = find_large_homog_ovw_subtree(
        &ptree,
        &counts,
        &theta,
        0,
        OvwMode::Ind,
        &BoundParams::new(1, 1),
        &PipelineOptions::relaxed(),
    )
    .unwrap();
    certs.push((
        "large_homog",
        cert_large_homog_tree(&config, &StructureRepr::of_tree(&ptree), &counts, &result).unwrap(),
    ));

    certs
}

/// Collects the JSON pointers of semantic leaves (inputs, witness, digest),
/// excluding advisory trace fields.
fn semantic_paths(value: &serde_json::Value, prefix: String, out: &mut Vec<String>) {
    match value {
        serde_json::Value::Object(map) => {
            for (key, inner) in map {
                if key == "trace" || key == "note" {
                    continue;
                }
                semantic_paths(inner, format!("{prefix}/{key}"), out);
            }
        }
        serde_json::Value::Array(items) => {
            for (i, inner) in items.iter().enumerate() {
                semantic_paths(inner, format!("{prefix}/{i}"), out);
            }
        }
        _ => out.push(prefix),
    }
}

fn mutate_at(value: &mut serde_json::Value, pointer: &str, salt: u64) {
    let target = value.pointer_mut(pointer).expect("pointer resolves");
    match target {
        serde_json::Value::Number(n) => {
            let v = n.as_u64().unwrap_or(0);
            *target = serde_json::json!(v.wrapping_add(1 + salt % 3));
        }
        serde_json::Value::Bool(b) => {
            *target = serde_json::json!(!*b);
        }
        serde_json::Value::String(s) => {
            let mut chars: Vec<char> = s.chars().collect();
            if let Some(last) = chars.last_mut() {
                *last = match *last {
                    '9' => '7',
                    c if c.is_ascii_digit() => (c as u8 + 1) as char,
                    'z' => 'a',
                    c if c.is_ascii_alphabetic() => (c as u8 + 1) as char,
                    _ => 'x',
                };
                *target = serde_json::json!(chars.into_iter().collect::<String>());
            } else {
                *target = serde_json::json!("x");
            }
        }
        _ => *target = serde_json::json!(null),
    }
}

/// Certificates: every emitted certificate verifies; 100 seeded single-field
/// semantic mutations per kind are all rejected. Runtime < 1 min.
#[test]
fn acceptance_10_certificates() {
    let start = Instant::now();
    let certs = certificates_of_every_kind();
    assert_eq!(certs.len(), 8, "one certificate per kind");
    let mut mutations_rejected = 0u32;
    for (name, cert) in &certs {
        let report = verify_certificate(cert).unwrap();
        assert!(report.ok, "{name} failed round-trip: {:?}", report.checks);

        // Byte-stable canonical JSON round-trip.
        let json = cert.to_json().unwrap();
        let back = Certificate::from_json(&json).unwrap();
        assert_eq!(json, back.to_json().unwrap());
        assert!(verify_certificate(&back).unwrap().ok);

        // Semantic mutations: each must fail verification.
        let as_value = serde_json::to_value(cert).unwrap();
        let mut paths = Vec::new();
        semantic_paths(&as_value["inputs"], "/inputs".into(), &mut paths);
        semantic_paths(&as_value["witness"], "/witness".into(), &mut paths);
        paths.push("/digest".into());
        let mut rng = SplitMix64::new(0xfeed ^ fnv_name(name));
        for i in 0..100 {
            let path = &paths[(rng.next_u64() % paths.len() as u64) as usize];
            let mut mutated = as_value.clone();
            mutate_at(&mut mutated, path, rng.next_u64());
            if mutated == as_value {
                panic!("mutation at {path} was a no-op");
            }
            let rejected = match serde_json::from_value::<Certificate>(mutated) {
                Err(_) => true,
                Ok(cert) => match verify_certificate(&cert) {
                    Err(CertError::Malformed(_)) => true,
                    Err(_) => true,
                    Ok(report) => !report.ok,
                },
            };
            assert!(
                rejected,
                "{name}: mutation #{i} at {path} verified despite changing a semantic field"
            );
            mutations_rejected += 1;
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 60, "took {elapsed:?}");
    pass(
        "certificates",
        format!(
            "8 kinds round-trip; {mutations_rejected} mutations all rejected; in {elapsed:?}"
        ),
    );
}

fn fnv_name(name: &str) -> u64 {
    ovw_core::fnv1a64(name.as_bytes())
}
