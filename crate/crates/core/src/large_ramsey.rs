//! The quantitative pipeline: extraction of *large* homogeneous subspaces and
//! OVW subtrees, the bound recursion for the tree exponent, and refutation
//! search for largeness over subspace colorings.
//!
//! The subspace extractor splits the anchor set into apart blocks whose
//! transversals carry the target rank, then homogenizes block by block from
//! the top: at each block a product coloring over all sibling substructures
//! is searched for a monochromatic line, whose anchor joins the transversal.
//! The tree extractor layers the same idea per level, with a recursive
//! sub-solver per block, a pigeonhole over per-level colors, and a final cut
//! placing the subtree's full depth on a homogenized level.
//!
//! Preconditions are enforced in strict runs. Relaxed runs attempt the same
//! construction best-effort below the thresholds; when a step fails, a direct
//! verified search stands in, and the trace records which path produced the
//! result. Every returned result is re-verified: homogeneous, large at the
//! target rank, and contained in the ambient structure.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::largeness::{
    is_large, is_sparse, FinSet, LargenessError, LargenessOutcome, LargenessWitness, OrdinalExpr,
    ThetaPredicate,
};
use crate::ramsey::{
    backtracking_line_free, exhaustive_line_free, Coloring, RamseyError,
};
use crate::spaces::{align_instantiation, CombinatorialSpace, OVWTree, SpaceError};
use crate::words::{Alphabet, Token, VariableWord, Word, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PipelineError {
    #[error("anchors are not large enough: {0}")]
    NotLargeEnough(String),
    #[error("anchors are not sparse")]
    NotSparse,
    #[error("no monochromatic line in a block space: {0}")]
    HjFailure(String),
    #[error("recursion budget exceeded at depth {0}")]
    RecursionBudgetExceeded(u32),
    #[error("enumerating {required} sibling structures exceeds the budget {budget}")]
    SiblingBudgetExceeded { required: u128, budget: u64 },
    #[error("search budget exhausted before a verified witness was found")]
    SearchBudgetExceeded,
    #[error("no witness exists within the searched family")]
    NoWitness,
    #[error("constructed witness failed verification: {0}")]
    Postcondition(String),
    #[error("bound recursion overflows at b={0}")]
    BoundOverflow(u32),
    #[error("parameters must satisfy k, l < min X")]
    ParamsNotBelowMin,
    #[error(transparent)]
    Largeness(#[from] LargenessError),
    #[error(transparent)]
    Ramsey(#[from] RamseyError),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Word(#[from] WordError),
}

/// Threshold exponents for the underlying finite theorems, supplied by the
/// caller; `calibrate` sketches desk-scale values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundParams {
    pub n0: u32,
    pub n1: u32,
}

impl BoundParams {
    pub fn new(n0: u32, n1: u32) -> Self {
        BoundParams { n0, n1 }
    }
}

/// `p(0) = n1`, `p(b+1) = 4 p(b) + 3 n0 + 8`: the exponent making a sparse
/// `w^p(b)`-large set carry a `w^b`-large homogeneous subtree for every
/// admissible tree and coloring.
pub fn ovw_exponent(b: u32, params: &BoundParams) -> Result<u64, PipelineError> {
    let mut p = params.n1 as u64;
    for step in 0..b {
        p = p
            .checked_mul(4)
            .and_then(|v| v.checked_add(3 * params.n0 as u64 + 8))
            .ok_or(PipelineError::BoundOverflow(step + 1))?;
    }
    Ok(p)
}

/// Execution options for the extractors.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PipelineOptions {
    /// Skip precondition checks and fall back to direct verified search when
    /// the construction fails below the thresholds.
    pub relax: bool,
    pub point_budget: u64,
    /// Cap on sibling structures enumerated per product-coloring step.
    pub sibling_budget: u64,
    /// Cap on candidates visited by direct searches.
    pub search_budget: u64,
    pub recursion_budget: u32,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            relax: false,
            point_budget: 1 << 20,
            sibling_budget: 1 << 16,
            search_budget: 1 << 22,
            recursion_budget: 16,
        }
    }
}

impl PipelineOptions {
    pub fn relaxed() -> Self {
        PipelineOptions {
            relax: true,
            ..Default::default()
        }
    }
}

/// Per-block log entry.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BlockTrace {
    pub block: FinSet,
    pub chosen_anchors: FinSet,
    pub sibling_count: u64,
    pub note: Option<String>,
}

#[derive(Debug, Clone)]
pub struct LargeHomogSpace {
    pub anchors: FinSet,
    pub witness: CombinatorialSpace,
    pub color: u64,
    pub target: OrdinalExpr,
    pub largeness: LargenessWitness,
    pub trace: Vec<BlockTrace>,
    pub fallback: Option<String>,
}

#[derive(Debug, Clone)]
pub struct LargeHomogTree {
    pub anchors: FinSet,
    pub witness: OVWTree,
    pub color: u64,
    pub target: OrdinalExpr,
    pub largeness: LargenessWitness,
    pub trace: Vec<BlockTrace>,
    pub fallback: Option<String>,
}

/// The proof bounds the number of sibling structures at a block by
/// `k^(max of the previous block)`; sparsity makes the bound effective. On
/// non-sparse inputs an excess is reported as a warning in the trace.
fn width_warning(siblings: u128, k: usize, previous: Option<&FinSet>) -> Option<String> {
    let previous = previous?;
    let max = previous.max()?;
    let bound = max
        .to_u32()
        .map(|m| BigUint::from(k as u64).pow(m))
        .unwrap_or_else(|| BigUint::from(u128::MAX));
    if BigUint::from(siblings) > bound {
        Some(format!(
            "product width {siblings} exceeds the sparsity bound {k}^{max}"
        ))
    } else {
        None
    }
}

fn anchors_finset(generator: &VariableWord) -> FinSet {
    FinSet::new(
        generator
            .anchors()
            .iter()
            .map(|&a| BigUint::from(a as u64))
            .collect(),
    )
}

fn anchor_positions(set: &FinSet) -> Result<Vec<usize>, PipelineError> {
    set.elements()
        .iter()
        .map(|e| {
            e.to_usize().ok_or_else(|| {
                PipelineError::Postcondition("anchor does not fit a word position".into())
            })
        })
        .collect()
}

/// Instantiates every kind whose anchor is outside `kept` with letter 0,
/// keeping the others as fresh kinds in order.
fn restrict_to_anchors(
    generator: &VariableWord,
    kept: &[usize],
) -> Result<VariableWord, PipelineError> {
    let mut u = Vec::with_capacity(generator.dimension());
    let mut next = 0usize;
    for &anchor in generator.anchors() {
        if kept.contains(&anchor) {
            u.push(Token::Var(next));
            next += 1;
        } else {
            u.push(Token::Letter(0));
        }
    }
    if next == 0 {
        return Err(PipelineError::Postcondition(
            "restriction removed every kind".into(),
        ));
    }
    Ok(generator.compose(&u)?)
}

// ---------------------------------------------------------------------------
// Large homogeneous subspaces
// ---------------------------------------------------------------------------

/// Finds a transversal `Y` of apart blocks of the anchor set together with an
/// `f`-homogeneous `Y`-subspace, with `Y` large at `w^b`.
pub fn find_large_homog_subspace(
    space: &CombinatorialSpace,
    coloring: &Coloring,
    theta: &ThetaPredicate,
    b: u32,
    params: &BoundParams,
    opts: &PipelineOptions,
) -> Result<LargeHomogSpace, PipelineError> {
    let anchors = anchors_finset(space.generator());
    let target = OrdinalExpr::omega(b);
    if !opts.relax {
        let required = OrdinalExpr::omega(2 * b + params.n0 + 1);
        let outcome = is_large(&anchors, &required, theta, true)?;
        if !outcome.large {
            return Err(PipelineError::NotLargeEnough(format!(
                "anchors are not {required}-large"
            )));
        }
        if !is_sparse(&anchors) {
            return Err(PipelineError::NotSparse);
        }
    }
    match subspace_construction(space, coloring, theta, b, params, opts) {
        Ok(result) => Ok(result),
        Err(err) if opts.relax => {
            let (sub, color, largeness) =
                direct_subspace_search(space, coloring, theta, &target, opts)?;
            Ok(LargeHomogSpace {
                anchors: anchors_finset(sub.generator()),
                witness: sub,
                color,
                target,
                largeness,
                trace: Vec::new(),
                fallback: Some(format!("direct search after: {err}")),
            })
        }
        Err(err) => Err(err),
    }
}

fn subspace_construction(
    space: &CombinatorialSpace,
    coloring: &Coloring,
    theta: &ThetaPredicate,
    b: u32,
    params: &BoundParams,
    opts: &PipelineOptions,
) -> Result<LargeHomogSpace, PipelineError> {
    let generator = space.generator();
    let anchors = anchors_finset(generator);
    let target = OrdinalExpr::omega(b);
    // Blocks with guaranteed-large transversals, drawn from X minus its
    // minimum.
    let blocks = crate::largeness::split_large(
        &anchors.without_min(),
        params.n0,
        b,
        theta,
        false,
    )
    .map_err(|e| PipelineError::NotLargeEnough(format!("block split failed: {e}")))?;
    let kept: Vec<usize> = {
        let mut all = Vec::new();
        for block in &blocks {
            all.extend(anchor_positions(block)?);
        }
        all.sort_unstable();
        all
    };
    let mut w_keep = restrict_to_anchors(generator, &kept)?;
    // Kinds instantiated so far for color evaluation (chosen lines fixed at
    // letter 0); shrinks as blocks are processed.
    let mut w_eval = w_keep.clone();
    let k = generator.alphabet().size();
    let mut trace = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    let constant = coloring.l <= 1;

    for i in (0..blocks.len()).rev() {
        let block_positions = anchor_positions(&blocks[i])?;
        let low_count: usize = blocks[..i].iter().map(|b| b.len()).sum();
        let block_count = block_positions.len();
        let siblings: u128 = if constant {
            1
        } else {
            (k as u128)
                .checked_pow(low_count as u32)
                .unwrap_or(u128::MAX)
        };
        if siblings > opts.sibling_budget as u128 {
            return Err(PipelineError::SiblingBudgetExceeded {
                required: siblings,
                budget: opts.sibling_budget,
            });
        }
        // Line patterns over the block kinds, canonical order (x0 < letters).
        let mut symbols = vec![Token::Var(0)];
        symbols.extend(generator.alphabet().letters().map(Token::Letter));
        let mut pattern_digits = vec![0usize; block_count];
        let mut found: Option<Vec<Token>> = None;
        'patterns: loop {
            let pattern: Vec<Token> = pattern_digits.iter().map(|&d| symbols[d]).collect();
            if pattern.iter().any(Token::is_var) {
                // Monochromatic across every sibling instantiation.
                let mono = if constant {
                    true
                } else {
                    sibling_mono(&w_eval, low_count, &pattern, coloring, siblings as u64)?
                };
                if mono {
                    found = Some(pattern);
                    break 'patterns;
                }
            }
            let mut pos = block_count;
            loop {
                if pos == 0 {
                    break 'patterns;
                }
                pos -= 1;
                pattern_digits[pos] += 1;
                if pattern_digits[pos] < symbols.len() {
                    break;
                }
                pattern_digits[pos] = 0;
            }
        }
        let pattern = found.ok_or_else(|| {
            PipelineError::HjFailure(format!(
                "block {} of {} admits no monochromatic line",
                i + 1,
                blocks.len()
            ))
        })?;
        let anchor = block_positions[pattern
            .iter()
            .position(Token::is_var)
            .expect("pattern has a variable")];
        chosen.push(anchor);
        trace.push(BlockTrace {
            block: blocks[i].clone(),
            chosen_anchors: FinSet::new(vec![BigUint::from(anchor as u64)]),
            sibling_count: siblings as u64,
            note: width_warning(siblings, k, i.checked_sub(1).map(|j| &blocks[j])),
        });
        // Fold the chosen line into both words.
        w_keep = compose_block(&w_keep, low_count, block_count, &pattern, false)?;
        if i > 0 {
            w_eval = compose_block(&w_eval, low_count, block_count, &pattern, true)?;
        }
    }
    trace.reverse();

    let witness = CombinatorialSpace::new(w_keep);
    let y = anchors_finset(witness.generator());
    verify_space_result(space, &witness, &y, coloring, theta, &target, opts).map(
        |(color, largeness)| LargeHomogSpace {
            anchors: y,
            witness,
            color,
            target,
            largeness,
            trace,
            fallback: None,
        },
    )
}

/// All full instantiations of the word's kinds split as (low, block, high):
/// checks that for every low instantiation the pattern's line is
/// monochromatic. Kinds above the block are already instantiated.
fn sibling_mono(
    w_eval: &VariableWord,
    low_count: usize,
    pattern: &[Token],
    coloring: &Coloring,
    sibling_cap: u64,
) -> Result<bool, PipelineError> {
    let k = w_eval.alphabet().size();
    let mut sigma = vec![0usize; low_count];
    let mut seen: u64 = 0;
    loop {
        seen += 1;
        if seen > sibling_cap.saturating_add(1) {
            return Err(PipelineError::SiblingBudgetExceeded {
                required: seen as u128,
                budget: sibling_cap,
            });
        }
        let mut reference: Option<u64> = None;
        for a in 0..k {
            let mut letters: Vec<usize> = sigma.clone();
            for t in pattern {
                letters.push(match *t {
                    Token::Letter(l) => l,
                    Token::Var(_) => a,
                });
            }
            let word = w_eval.substitute(&Word::from_letters(letters))?;
            let c = coloring.color_of(&word)?;
            match reference {
                None => reference = Some(c),
                Some(r) if r == c => {}
                Some(_) => return Ok(false),
            }
        }
        let mut pos = low_count;
        loop {
            if pos == 0 {
                return Ok(true);
            }
            pos -= 1;
            sigma[pos] += 1;
            if sigma[pos] < k {
                break;
            }
            sigma[pos] = 0;
        }
    }
}

/// Applies a block's line pattern: low kinds stay fresh, block kinds follow
/// the pattern (its variable becomes the next fresh kind or letter 0 in
/// evaluation mode), higher kinds stay fresh.
fn compose_block(
    w: &VariableWord,
    low_count: usize,
    block_count: usize,
    pattern: &[Token],
    eval_mode: bool,
) -> Result<VariableWord, PipelineError> {
    // The pattern's variable may occupy several kinds; all of them map to the
    // same fresh kind in keep mode.
    let mut u = Vec::with_capacity(w.dimension());
    let mut next = 0usize;
    for _ in 0..low_count {
        u.push(Token::Var(next));
        next += 1;
    }
    let mut line_kind: Option<usize> = None;
    for t in pattern.iter().take(block_count) {
        u.push(match *t {
            Token::Letter(l) => Token::Letter(l),
            Token::Var(_) if eval_mode => Token::Letter(0),
            Token::Var(_) => match line_kind {
                Some(kind) => Token::Var(kind),
                None => {
                    let kind = next;
                    line_kind = Some(kind);
                    next += 1;
                    Token::Var(kind)
                }
            },
        });
    }
    for _ in (low_count + block_count)..w.dimension() {
        u.push(Token::Var(next));
        next += 1;
    }
    Ok(w.compose(&u)?)
}

fn verify_space_result(
    ambient: &CombinatorialSpace,
    witness: &CombinatorialSpace,
    y: &FinSet,
    coloring: &Coloring,
    theta: &ThetaPredicate,
    target: &OrdinalExpr,
    opts: &PipelineOptions,
) -> Result<(u64, LargenessWitness), PipelineError> {
    let color = crate::ramsey::homogeneous_space_color(witness, coloring, opts.point_budget)?
        .ok_or_else(|| PipelineError::Postcondition("witness space is not homogeneous".into()))?;
    let outcome = is_large(y, target, theta, false)?;
    let largeness = match outcome {
        LargenessOutcome { large: true, witness: Some(w) } => w,
        _ => {
            return Err(PipelineError::Postcondition(format!(
                "transversal {y} is not {target}-large"
            )))
        }
    };
    if !witness.is_substructure_of(ambient, opts.point_budget)? {
        return Err(PipelineError::Postcondition(
            "witness is not a substructure of the ambient space".into(),
        ));
    }
    Ok((color, largeness))
}

/// Canonical-first subspace with a large anchor set and homogeneous points.
fn direct_subspace_search(
    space: &CombinatorialSpace,
    coloring: &Coloring,
    theta: &ThetaPredicate,
    target: &OrdinalExpr,
    opts: &PipelineOptions,
) -> Result<(CombinatorialSpace, u64, LargenessWitness), PipelineError> {
    let mut budget = opts.search_budget;
    for dim in 1..=space.dimension() {
        for candidate in space.subspaces(dim)? {
            if budget == 0 {
                return Err(PipelineError::SearchBudgetExceeded);
            }
            budget -= 1;
            let y = anchors_finset(candidate.generator());
            let outcome = is_large(&y, target, theta, false)?;
            if !outcome.large {
                continue;
            }
            if let Some(color) =
                crate::ramsey::homogeneous_space_color(&candidate, coloring, opts.point_budget)?
            {
                let largeness = outcome.witness.expect("witness on true");
                return Ok((candidate, color, largeness));
            }
        }
    }
    Err(PipelineError::NoWitness)
}

// ---------------------------------------------------------------------------
// Large homogeneous OVW subtrees
// ---------------------------------------------------------------------------

/// Construction mode: the pre-induction block argument yields
/// `w^r * (min X - 1)`; the induction step yields `w^(r+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OvwMode {
    PreInd,
    Ind,
}

type ColorKey = Vec<u64>;

/// Materialized point colors for one solving level. Points at
/// `exclude_len` sit at a truncation level that never survives into the
/// assembled tree; homogeneity checks skip them.
struct KeyTable {
    keys: HashMap<Word, ColorKey>,
    count: u128,
    exclude_len: Option<usize>,
}

/// Layered generator, (block, kept anchors) pairs, and the per-block trace.
type BlockOutcome = (VariableWord, Vec<(FinSet, FinSet)>, Vec<BlockTrace>);

#[derive(Debug, Clone)]
struct SolveOutcome {
    anchors: FinSet,
    generator: VariableWord,
    trace: Vec<BlockTrace>,
}

#[derive(Debug, Clone, Copy)]
enum Target {
    /// `w^r`
    Exact(u32),
    /// `w^r * (min X - 1)`
    Coef(u32),
}

impl Target {
    fn expr(&self, anchors: &FinSet) -> OrdinalExpr {
        match *self {
            Target::Exact(r) => OrdinalExpr::omega(r),
            Target::Coef(r) => {
                let s = anchors
                    .min()
                    .and_then(|m| m.to_u64())
                    .unwrap_or(1)
                    .saturating_sub(1)
                    .max(1);
                OrdinalExpr::new(r, s).expect("coefficient at least 1")
            }
        }
    }

    fn rank(&self) -> u32 {
        match *self {
            Target::Exact(r) | Target::Coef(r) => r,
        }
    }
}

/// Finds a large anchor set `Y` and an `f`-homogeneous OVW `Y`-subtree.
pub fn find_large_homog_ovw_subtree(
    tree: &OVWTree,
    coloring: &Coloring,
    theta: &ThetaPredicate,
    r: u32,
    mode: OvwMode,
    params: &BoundParams,
    opts: &PipelineOptions,
) -> Result<LargeHomogTree, PipelineError> {
    let anchors = anchors_finset(tree.generator());
    let target = match mode {
        OvwMode::PreInd => Target::Coef(r).expr(&anchors),
        OvwMode::Ind => OrdinalExpr::omega(r + 1),
    };
    if !opts.relax {
        let p = ovw_exponent(r, params)?;
        let exponent = match mode {
            OvwMode::PreInd => 2u64
                .checked_mul(p)
                .and_then(|v| v.checked_add(params.n0 as u64 + 3)),
            OvwMode::Ind => ovw_exponent(r + 1, params).ok(),
        }
        .ok_or(PipelineError::BoundOverflow(r))?;
        let exponent = u32::try_from(exponent).map_err(|_| PipelineError::BoundOverflow(r))?;
        let required = OrdinalExpr::omega(exponent);
        if !is_large(&anchors, &required, theta, true)?.large {
            return Err(PipelineError::NotLargeEnough(format!(
                "anchors are not {required}-large"
            )));
        }
        if !is_sparse(&anchors) {
            return Err(PipelineError::NotSparse);
        }
    }
    let solve_target = match mode {
        OvwMode::PreInd => Target::Coef(r),
        OvwMode::Ind => Target::Exact(r + 1),
    };
    let keys = top_key_table(tree, coloring, opts)?;
    let attempt = solve(tree, &keys, theta, solve_target, params, opts, 0);
    match attempt {
        Ok(outcome) => {
            let witness = OVWTree::new(outcome.generator.clone());
            let (color, largeness) =
                verify_tree_result(tree, &witness, &outcome.anchors, coloring, theta, &target, opts)?;
            Ok(LargeHomogTree {
                anchors: outcome.anchors,
                witness,
                color,
                target,
                largeness,
                trace: outcome.trace,
                fallback: None,
            })
        }
        Err(err) if opts.relax => {
            let (sub, color, largeness) =
                direct_subtree_search(tree, coloring, theta, &target, opts)?;
            Ok(LargeHomogTree {
                anchors: anchors_finset(sub.generator()),
                witness: sub,
                color,
                target,
                largeness,
                trace: Vec::new(),
                fallback: Some(format!("direct search after: {err}")),
            })
        }
        Err(err) => Err(err),
    }
}

fn top_key_table(
    tree: &OVWTree,
    coloring: &Coloring,
    opts: &PipelineOptions,
) -> Result<KeyTable, PipelineError> {
    let mut keys = HashMap::new();
    for point in tree.points(opts.point_budget)? {
        let c = coloring.color_of(&point)?;
        keys.insert(point, vec![c]);
    }
    Ok(KeyTable {
        keys,
        count: coloring.l.max(1) as u128,
        exclude_len: None,
    })
}

fn verify_tree_result(
    ambient: &OVWTree,
    witness: &OVWTree,
    y: &FinSet,
    coloring: &Coloring,
    theta: &ThetaPredicate,
    target: &OrdinalExpr,
    opts: &PipelineOptions,
) -> Result<(u64, LargenessWitness), PipelineError> {
    let color = crate::ramsey::homogeneous_tree_color(witness, coloring, opts.point_budget)?
        .ok_or_else(|| PipelineError::Postcondition("witness tree is not homogeneous".into()))?;
    let outcome = is_large(y, target, theta, false)?;
    let largeness = match outcome {
        LargenessOutcome { large: true, witness: Some(w) } => w,
        _ => {
            return Err(PipelineError::Postcondition(format!(
                "anchor set {y} is not {target}-large"
            )))
        }
    };
    if !witness.is_substructure_of(ambient, opts.point_budget)? {
        return Err(PipelineError::Postcondition(
            "witness is not a substructure of the ambient tree".into(),
        ));
    }
    Ok((color, largeness))
}

fn direct_subtree_search(
    tree: &OVWTree,
    coloring: &Coloring,
    theta: &ThetaPredicate,
    target: &OrdinalExpr,
    opts: &PipelineOptions,
) -> Result<(OVWTree, u64, LargenessWitness), PipelineError> {
    let mut budget = opts.search_budget;
    for dim in 1..=tree.dimension() {
        for candidate in tree.subtrees(dim)? {
            if budget == 0 {
                return Err(PipelineError::SearchBudgetExceeded);
            }
            budget -= 1;
            let y = anchors_finset(candidate.generator());
            let outcome = is_large(&y, target, theta, false)?;
            if !outcome.large {
                continue;
            }
            if let Some(color) =
                crate::ramsey::homogeneous_tree_color(&candidate, coloring, opts.point_budget)?
            {
                let largeness = outcome.witness.expect("witness on true");
                return Ok((candidate, color, largeness));
            }
        }
    }
    Err(PipelineError::NoWitness)
}

/// Recursive solver: produces a subtree generator over the given tree whose
/// anchors meet the target rank and whose points share one key.
fn solve(
    tree: &OVWTree,
    keys: &KeyTable,
    theta: &ThetaPredicate,
    target: Target,
    params: &BoundParams,
    opts: &PipelineOptions,
    depth: u32,
) -> Result<SolveOutcome, PipelineError> {
    if depth > opts.recursion_budget {
        return Err(PipelineError::RecursionBudgetExceeded(depth));
    }
    let anchors = anchors_finset(tree.generator());
    let expr = target.expr(&anchors);
    if target.rank() == 0 {
        return base_subtree_search(tree, keys, theta, &expr, opts);
    }
    let (block_count, sub_target) = match target {
        Target::Exact(r) => {
            // induction step: l+1 blocks, per-block target w^(r-1)*(min-1)
            let l = keys.count.min(u64::MAX as u128) as u64;
            (l.saturating_add(1), Target::Coef(r - 1))
        }
        Target::Coef(r) => {
            // pre-induction: l*(min-1)+1 blocks, per-block target w^r
            let l = keys.count.min(u64::MAX as u128) as u64;
            let s = anchors
                .min()
                .and_then(|m| m.to_u64())
                .unwrap_or(1)
                .saturating_sub(1)
                .max(1);
            (l.saturating_mul(s).saturating_add(1), Target::Exact(r))
        }
    };
    let blocks = partition_blocks(&anchors, block_count, target, theta)?;
    let (layered, per_block, trace) =
        process_blocks(tree, keys, theta, &blocks, sub_target, params, opts, depth)?;
    assemble_from_levels(
        tree, keys, theta, target, &layered, &per_block, trace, opts,
    )
}

/// Deterministic contiguous partition. Leading blocks are kept as small as
/// their per-block target allows (one element, or `min - 1` when the
/// sub-solver must deliver that many anchors), so the block minima stay low;
/// the final pigeonhole peels a leading block's minimum, which must not
/// exceed the anchors a later block can contribute.
fn partition_blocks(
    anchors: &FinSet,
    count: u64,
    target: Target,
    _theta: &ThetaPredicate,
) -> Result<Vec<FinSet>, PipelineError> {
    let skip = match target {
        // The pre-induction argument reserves the two smallest anchors.
        Target::Coef(_) => 2usize,
        Target::Exact(_) => 0usize,
    };
    let elements = anchors.elements();
    if elements.len() <= skip {
        return Err(PipelineError::NotLargeEnough(
            "too few anchors to form blocks".into(),
        ));
    }
    let avail = &elements[skip..];
    let count = count.min(avail.len() as u64).max(1) as usize;
    let mut blocks = Vec::with_capacity(count);
    let mut cursor = 0usize;
    for i in 0..count {
        let blocks_left = count - i;
        let remaining = avail.len() - cursor;
        let size = if blocks_left == 1 {
            remaining
        } else {
            let min_val = avail[cursor].to_usize().unwrap_or(usize::MAX);
            let want = min_val.saturating_sub(1).max(1);
            // Leave at least one element per later block.
            want.min(remaining - (blocks_left - 1))
        };
        blocks.push(FinSet::new(avail[cursor..cursor + size].to_vec()));
        cursor += size;
    }
    Ok(blocks)
}

/// Processes blocks from the top down: per block, a stabilization step makes
/// the tuple of higher-level keys constant on a subspace of the block kinds,
/// then the recursive sub-solver homogenizes the block's own levels above
/// every lower instantiation simultaneously.
#[allow(clippy::too_many_arguments)]
fn process_blocks(
    tree: &OVWTree,
    keys: &KeyTable,
    theta: &ThetaPredicate,
    blocks: &[FinSet],
    sub_target: Target,
    params: &BoundParams,
    opts: &PipelineOptions,
    depth: u32,
) -> Result<BlockOutcome, PipelineError> {
    let generator = tree.generator();
    let k = generator.alphabet().size();
    let kept: Vec<usize> = {
        let mut all = Vec::new();
        for block in blocks {
            all.extend(anchor_positions(block)?);
        }
        all.sort_unstable();
        all
    };
    let mut w_cur = restrict_to_anchors(generator, &kept)?;
    let mut per_block: Vec<(FinSet, FinSet)> = Vec::new();
    let mut trace = Vec::new();

    for i in (0..blocks.len()).rev() {
        let block_positions = anchor_positions(&blocks[i])?;
        // Kind classification by anchor.
        let classify = |w: &VariableWord| -> (Vec<usize>, Vec<usize>, Vec<usize>) {
            let mut low = Vec::new();
            let mut mid = Vec::new();
            let mut high = Vec::new();
            for (kind, &anchor) in w.anchors().iter().enumerate() {
                if block_positions.contains(&anchor) {
                    mid.push(kind);
                } else if blocks[..i]
                    .iter()
                    .any(|b| b.contains(&BigUint::from(anchor as u64)))
                {
                    low.push(kind);
                } else {
                    high.push(kind);
                }
            }
            (low, mid, high)
        };
        let (low, mid, high) = classify(&w_cur);
        if mid.is_empty() {
            continue;
        }
        let siblings = (k as u128).checked_pow(low.len() as u32).unwrap_or(u128::MAX);
        if siblings > opts.sibling_budget as u128 {
            return Err(PipelineError::SiblingBudgetExceeded {
                required: siblings,
                budget: opts.sibling_budget,
            });
        }

        // (A) stabilization: high-level key tuples constant across the block.
        if !high.is_empty() {
            let q = stabilize_high_levels(&w_cur, keys, &low, &mid, &high, opts)?;
            w_cur = apply_mid_instantiation(&w_cur, &low, &mid, &high, &q)?;
        }
        // Re-classify: mid may have shrunk.
        let (low, mid, high) = classify(&w_cur);
        if mid.is_empty() {
            continue;
        }

        // (B) the recursive sub-solve on the representative block subtree.
        let (w_repr, base_len) = representative_block_tree(&w_cur, &low, &mid, &high)?;
        let sub_tree = OVWTree::new(w_repr.clone());
        // The representative's own top level is the ambient cut when higher
        // kinds exist; it disappears once those kinds are instantiated.
        let exclude_len = (!high.is_empty()).then_some(w_repr.len());
        let sub_keys = product_key_table(&w_cur, keys, &low, &sub_tree, base_len, exclude_len, opts)?;
        let outcome = solve(&sub_tree, &sub_keys, theta, sub_target, params, opts, depth + 1)?;
        // Fold the sub-witness instantiation into the full word.
        w_cur = apply_sub_witness(&w_cur, &w_repr, &outcome.generator, &low, &mid, &high)?;
        per_block.push((blocks[i].clone(), outcome.anchors.clone()));
        trace.push(BlockTrace {
            block: blocks[i].clone(),
            chosen_anchors: outcome.anchors,
            sibling_count: siblings as u64,
            note: width_warning(siblings, k, i.checked_sub(1).map(|j| &blocks[j])),
        });
    }
    per_block.reverse();
    trace.reverse();
    Ok((w_cur, per_block, trace))
}

/// Finds an instantiation pattern of the block kinds (keeping as many fresh
/// as possible) on which the tuple of keys at every higher level is constant
/// for each lower instantiation.
fn stabilize_high_levels(
    w_cur: &VariableWord,
    keys: &KeyTable,
    low: &[usize],
    mid: &[usize],
    high: &[usize],
    opts: &PipelineOptions,
) -> Result<Vec<Token>, PipelineError> {
    let high_levels: Vec<usize> = high.to_vec();
    for fresh in (1..=mid.len()).rev() {
        let mut symbols: Vec<Token> = (0..fresh).map(Token::Var).collect();
        symbols.extend(w_cur.alphabet().letters().map(Token::Letter));
        let mut digits = vec![0usize; mid.len()];
        'patterns: loop {
            let pattern: Vec<Token> = digits.iter().map(|&d| symbols[d]).collect();
            if valid_pattern(&pattern, fresh)
                && tuple_constant(w_cur, keys, low, mid, &high_levels, &pattern, opts)?
            {
                return Ok(pattern);
            }
            let mut pos = mid.len();
            loop {
                if pos == 0 {
                    break 'patterns;
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
    Err(PipelineError::HjFailure(
        "no stabilizing subspace of the block kinds".into(),
    ))
}

fn valid_pattern(pattern: &[Token], fresh: usize) -> bool {
    let mut next = 0usize;
    for t in pattern {
        if let Token::Var(j) = *t {
            if j == next {
                next += 1;
            } else if j >= next {
                return false;
            }
        }
    }
    next == fresh
}

/// For every instantiation of low and pattern kinds, the key tuple over the
/// high kinds' levels must not depend on the pattern's fresh assignment.
fn tuple_constant(
    w_cur: &VariableWord,
    keys: &KeyTable,
    low: &[usize],
    mid: &[usize],
    high_kinds: &[usize],
    pattern: &[Token],
    opts: &PipelineOptions,
) -> Result<bool, PipelineError> {
    let k = w_cur.alphabet().size();
    let fresh = pattern
        .iter()
        .filter_map(|t| match t {
            Token::Var(j) => Some(j + 1),
            _ => None,
        })
        .max()
        .unwrap_or(0);
    let mut sigma = vec![0usize; low.len()];
    let mut checked: u64 = 0;
    loop {
        let mut reference: Option<Vec<ColorKey>> = None;
        let mut assignment = vec![0usize; fresh];
        loop {
            checked += 1;
            if checked > opts.sibling_budget {
                return Err(PipelineError::SiblingBudgetExceeded {
                    required: checked as u128,
                    budget: opts.sibling_budget,
                });
            }
            let tuple =
                high_level_tuple(w_cur, keys, low, mid, high_kinds, &sigma, pattern, &assignment)?;
            match &reference {
                None => reference = Some(tuple),
                Some(r) if *r == tuple => {}
                Some(_) => return Ok(false),
            }
            if !advance(&mut assignment, k) {
                break;
            }
        }
        if !advance(&mut sigma, k) {
            return Ok(true);
        }
    }
}

fn advance(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

/// Keys of the points at each high kind's level above the given low + mid
/// instantiation, with the high kinds themselves instantiated canonically.
#[allow(clippy::too_many_arguments)]
fn high_level_tuple(
    w_cur: &VariableWord,
    keys: &KeyTable,
    low: &[usize],
    mid: &[usize],
    high_kinds: &[usize],
    sigma: &[usize],
    pattern: &[Token],
    assignment: &[usize],
) -> Result<Vec<ColorKey>, PipelineError> {
    let mut letters = vec![0usize; w_cur.dimension()];
    for (s, &kind) in sigma.iter().zip(low) {
        letters[kind] = *s;
    }
    for (t, &kind) in pattern.iter().zip(mid) {
        letters[kind] = match *t {
            Token::Letter(l) => l,
            Token::Var(j) => assignment[j],
        };
    }
    let mut tuple = Vec::with_capacity(high_kinds.len());
    for &depth in high_kinds {
        // Point at this high kind's level: substitute every kind below it,
        // letting the substitution cut there.
        let prefix = Word::from_letters(letters[..depth].to_vec());
        let point = w_cur.substitute(&prefix)?;
        let key = keys
            .keys
            .get(&point)
            .ok_or_else(|| PipelineError::Postcondition("point missing from key table".into()))?;
        tuple.push(key.clone());
    }
    // Full-depth key as well: the topmost homogenized level.
    let full = w_cur.substitute(&Word::from_letters(letters.clone()))?;
    let key = keys
        .keys
        .get(&full)
        .ok_or_else(|| PipelineError::Postcondition("point missing from key table".into()))?;
    tuple.push(key.clone());
    Ok(tuple)
}

/// Applies an instantiation pattern to the mid kinds, keeping low and high
/// kinds fresh.
fn apply_mid_instantiation(
    w_cur: &VariableWord,
    low: &[usize],
    mid: &[usize],
    high: &[usize],
    pattern: &[Token],
) -> Result<VariableWord, PipelineError> {
    let mut u = vec![Token::Letter(0); w_cur.dimension()];
    let mut next = 0usize;
    for &kind in low {
        u[kind] = Token::Var(next);
        next += 1;
    }
    let base = next;
    let mut mid_fresh = 0usize;
    for (t, &kind) in pattern.iter().zip(mid) {
        u[kind] = match *t {
            Token::Letter(l) => Token::Letter(l),
            Token::Var(j) => {
                mid_fresh = mid_fresh.max(j + 1);
                Token::Var(base + j)
            }
        };
    }
    next = base + mid_fresh;
    for &kind in high {
        u[kind] = Token::Var(next);
        next += 1;
    }
    Ok(w_cur.compose(&u)?)
}

/// The representative block subtree: low kinds at letter 0, mid kinds fresh,
/// truncated before the first high kind. Returns it with the prefix length
/// below which low instantiations live.
fn representative_block_tree(
    w_cur: &VariableWord,
    low: &[usize],
    mid: &[usize],
    high: &[usize],
) -> Result<(VariableWord, usize), PipelineError> {
    let mut u = vec![Token::Letter(0); w_cur.dimension()];
    let mut next = 0usize;
    for &kind in mid {
        u[kind] = Token::Var(next);
        next += 1;
    }
    for &kind in high {
        u[kind] = Token::Var(next);
        next += 1;
    }
    let composed = w_cur.compose(&u)?;
    let truncated = composed.truncate_before(mid.len())?;
    let base_len = w_cur.anchors()[mid[0]];
    let _ = low;
    Ok((truncated, base_len))
}

/// Key table for the representative subtree: the key of an abstract point is
/// the concatenation of the ambient keys of its realizations over every low
/// instantiation.
fn product_key_table(
    w_cur: &VariableWord,
    keys: &KeyTable,
    low: &[usize],
    sub_tree: &OVWTree,
    base_len: usize,
    exclude_len: Option<usize>,
    opts: &PipelineOptions,
) -> Result<KeyTable, PipelineError> {
    let k = w_cur.alphabet().size();
    let siblings = (k as u128).checked_pow(low.len() as u32).unwrap_or(u128::MAX);
    if siblings > opts.sibling_budget as u128 {
        return Err(PipelineError::SiblingBudgetExceeded {
            required: siblings,
            budget: opts.sibling_budget,
        });
    }
    // Realization prefixes per low instantiation: the word below base_len
    // with low kinds assigned. Mid and high kinds vanish below base_len.
    let mut prefixes: Vec<Vec<usize>> = Vec::new();
    let mut sigma = vec![0usize; low.len()];
    loop {
        let mut letters = vec![0usize; w_cur.dimension()];
        for (s, &kind) in sigma.iter().zip(low) {
            letters[kind] = *s;
        }
        let depth_kind = w_cur
            .anchors()
            .iter()
            .position(|&a| a >= base_len)
            .unwrap_or(w_cur.dimension());
        let prefix_word = w_cur.substitute(&Word::from_letters(letters[..depth_kind].to_vec()))?;
        let mut prefix = prefix_word.letters().to_vec();
        prefix.truncate(base_len);
        prefixes.push(prefix);
        if !advance(&mut sigma, k) {
            break;
        }
    }
    let mut table = HashMap::new();
    for point in sub_tree.points(opts.point_budget)? {
        if Some(point.len()) == exclude_len {
            continue;
        }
        let mut key = Vec::new();
        for prefix in &prefixes {
            let mut letters = prefix.clone();
            letters.extend_from_slice(&point.letters()[base_len.min(point.len())..]);
            let realized = Word::from_letters(letters);
            let ambient = keys.keys.get(&realized).ok_or_else(|| {
                PipelineError::Postcondition("realized point missing from key table".into())
            })?;
            key.extend_from_slice(ambient);
        }
        table.insert(point, key);
    }
    let count = keys.count.saturating_pow(prefixes.len() as u32);
    Ok(KeyTable {
        keys: table,
        count,
        exclude_len,
    })
}

/// Folds a sub-witness generator (over the representative subtree) back into
/// the full word: mid kinds follow the recovered instantiation, kinds above
/// the sub-witness's cut become letter 0, low and high kinds stay fresh.
fn apply_sub_witness(
    w_cur: &VariableWord,
    w_repr: &VariableWord,
    sub_generator: &VariableWord,
    low: &[usize],
    mid: &[usize],
    high: &[usize],
) -> Result<VariableWord, PipelineError> {
    // Recover (t, u): the truncation level by length, then the alignment.
    let mut recovered: Option<(usize, Vec<Token>)> = None;
    for t in (1..=w_repr.dimension()).rev() {
        let truncated = w_repr.truncate_before(t)?;
        if truncated.len() != sub_generator.len() {
            continue;
        }
        if let Some(u) = align_instantiation(&truncated, sub_generator) {
            if truncated.compose(&u).as_ref() == Ok(sub_generator) {
                recovered = Some((t, u));
                break;
            }
        }
    }
    let (t, u) = recovered.ok_or_else(|| {
        PipelineError::Postcondition("sub-witness does not align with its block tree".into())
    })?;
    let mut full = vec![Token::Letter(0); w_cur.dimension()];
    let mut next = 0usize;
    for &kind in low {
        full[kind] = Token::Var(next);
        next += 1;
    }
    let base = next;
    let mut used = 0usize;
    for (j, &kind) in mid.iter().enumerate() {
        full[kind] = if j < t {
            match u[j] {
                Token::Letter(l) => Token::Letter(l),
                Token::Var(v) => {
                    used = used.max(v + 1);
                    Token::Var(base + v)
                }
            }
        } else {
            // Above the sub-witness cut: fixed canonically.
            Token::Letter(0)
        };
    }
    next = base + used;
    for &kind in high {
        full[kind] = Token::Var(next);
        next += 1;
    }
    Ok(w_cur.compose(&full)?)
}

/// Base of the recursion: scan subtrees in canonical order for one whose
/// anchor set meets the rank and whose points share one key.
fn base_subtree_search(
    tree: &OVWTree,
    keys: &KeyTable,
    theta: &ThetaPredicate,
    expr: &OrdinalExpr,
    opts: &PipelineOptions,
) -> Result<SolveOutcome, PipelineError> {
    let mut budget = opts.search_budget;
    for dim in 1..=tree.dimension() {
        for candidate in tree.subtrees(dim)? {
            if budget == 0 {
                return Err(PipelineError::SearchBudgetExceeded);
            }
            budget -= 1;
            let y = anchors_finset(candidate.generator());
            if !is_large(&y, expr, theta, false)?.large {
                continue;
            }
            let mut reference: Option<&ColorKey> = None;
            let mut homogeneous = true;
            for point in candidate.points(opts.point_budget)? {
                if Some(point.len()) == keys.exclude_len {
                    continue;
                }
                let key = keys.keys.get(&point).ok_or_else(|| {
                    PipelineError::Postcondition("point missing from key table".into())
                })?;
                match reference {
                    None => reference = Some(key),
                    Some(r) if r == key => {}
                    Some(_) => {
                        homogeneous = false;
                        break;
                    }
                }
            }
            if homogeneous {
                return Ok(SolveOutcome {
                    anchors: y,
                    generator: candidate.generator().clone(),
                    trace: Vec::new(),
                });
            }
        }
    }
    Err(PipelineError::NoWitness)
}

/// Final assembly: computes per-level keys of the layered tree, pigeonholes
/// the per-block keys, and cuts the witness so that its full depth lands on a
/// homogenized level.
#[allow(clippy::too_many_arguments)]
fn assemble_from_levels(
    tree: &OVWTree,
    keys: &KeyTable,
    theta: &ThetaPredicate,
    target: Target,
    layered: &VariableWord,
    per_block: &[(FinSet, FinSet)],
    trace: Vec<BlockTrace>,
    opts: &PipelineOptions,
) -> Result<SolveOutcome, PipelineError> {
    let _ = tree;
    let layered_tree = OVWTree::new(layered.clone());
    let points = layered_tree.points(opts.point_budget)?;
    // Key per level (point length); each level must be uniform.
    let mut level_keys: HashMap<usize, ColorKey> = HashMap::new();
    for point in &points {
        if Some(point.len()) == keys.exclude_len {
            continue;
        }
        let key = keys
            .keys
            .get(point)
            .ok_or_else(|| {
                PipelineError::Postcondition("layered point missing from key table".into())
            })?
            .clone();
        match level_keys.get(&point.len()) {
            None => {
                level_keys.insert(point.len(), key);
            }
            Some(existing) if *existing == key => {}
            Some(_) => {
                return Err(PipelineError::Postcondition(format!(
                    "level {} of the layered tree is not homogeneous",
                    point.len()
                )))
            }
        }
    }
    // Key per block: all the block's kept levels must share it.
    let mut block_keys: Vec<ColorKey> = Vec::with_capacity(per_block.len());
    for (block, kept) in per_block {
        let mut key: Option<ColorKey> = None;
        for anchor in kept.elements() {
            let level = anchor.to_usize().ok_or_else(|| {
                PipelineError::Postcondition("anchor does not fit a word position".into())
            })?;
            let level_key = level_keys.get(&level).ok_or_else(|| {
                PipelineError::Postcondition(format!("no points at kept level {level}"))
            })?;
            match &key {
                None => key = Some(level_key.clone()),
                Some(k) if k == level_key => {}
                Some(_) => {
                    return Err(PipelineError::Postcondition(format!(
                        "block {block} has mixed level keys"
                    )))
                }
            }
        }
        block_keys.push(key.ok_or_else(|| {
            PipelineError::Postcondition(format!("block {block} kept no levels"))
        })?);
    }
    let full_len = layered.len();
    let full_key = level_keys.get(&full_len).cloned();

    // Candidate selections, in deterministic preference order. Each is a set
    // of winning block indices plus an optional cut level.
    let expr_target = |anchors: &FinSet| target.expr(anchors);
    let mut candidates: Vec<(Vec<usize>, Option<usize>)> = Vec::new();
    let groups: Vec<(ColorKey, Vec<usize>)> = {
        let mut g: Vec<(ColorKey, Vec<usize>)> = Vec::new();
        for (i, key) in block_keys.iter().enumerate() {
            match g.iter_mut().find(|(k, _)| k == key) {
                Some((_, v)) => v.push(i),
                None => g.push((key.clone(), vec![i])),
            }
        }
        g.sort_by_key(|(_, v)| std::cmp::Reverse(v.len()));
        g
    };
    for (key, members) in &groups {
        // Uncut: usable when the full-depth key matches the group.
        if full_key.as_ref() == Some(key) {
            candidates.push((members.clone(), None));
        }
        // Cut at the first kept level of the last member; the remaining
        // members supply the anchors.
        if members.len() >= 2 {
            let cut_block = *members.last().expect("nonempty");
            let cut_level = per_block[cut_block]
                .1
                .min()
                .and_then(|m| m.to_usize());
            if let Some(level) = cut_level {
                candidates.push((members[..members.len() - 1].to_vec(), Some(level)));
            }
        }
    }

    for (members, cut) in candidates {
        let mut anchor_values: Vec<BigUint> = Vec::new();
        for &i in &members {
            anchor_values.extend(per_block[i].1.elements().iter().cloned());
        }
        let y = FinSet::new(anchor_values);
        if y.is_empty() {
            continue;
        }
        let expr = expr_target(&y);
        if !is_large(&y, &expr, theta, false)?.large {
            continue;
        }
        // Build the subtree: keep kinds anchored in Y (plus the cut kind),
        // instantiate the rest, truncate at the cut kind when present.
        let kept_positions = anchor_positions(&y)?;
        let mut keep = kept_positions.clone();
        if let Some(level) = cut {
            keep.push(level);
            keep.sort_unstable();
        }
        let composed = restrict_to_anchors(layered, &keep)?;
        let generator = match cut {
            Some(_) => composed.truncate_before(kept_positions.len())?,
            None => composed,
        };
        // Homogeneity under the key table.
        let candidate_tree = OVWTree::new(generator.clone());
        let mut reference: Option<&ColorKey> = None;
        let mut homogeneous = true;
        for point in candidate_tree.points(opts.point_budget)? {
            if Some(point.len()) == keys.exclude_len {
                continue;
            }
            let key = keys.keys.get(&point).ok_or_else(|| {
                PipelineError::Postcondition("candidate point missing from key table".into())
            })?;
            match reference {
                None => reference = Some(key),
                Some(r) if r == key => {}
                Some(_) => {
                    homogeneous = false;
                    break;
                }
            }
        }
        if !homogeneous {
            continue;
        }
        return Ok(SolveOutcome {
            anchors: y,
            generator,
            trace,
        });
    }
    Err(PipelineError::Postcondition(
        "no pigeonhole selection yields a verified large homogeneous subtree".into(),
    ))
}

// ---------------------------------------------------------------------------
// Refutation search for largeness over subspace colorings
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct GrRefutation {
    /// A coloring of the canonical space over `X` with no `e`-large
    /// homogeneous subspace, when one was found.
    pub counterexample: Option<Coloring>,
    /// Whether the search covered the whole coloring space, making a `None`
    /// conclusive.
    pub exhaustive: bool,
    /// The space searched.
    pub space: CombinatorialSpace,
}

/// Searches for a coloring refuting `e`-largeness over subspace colorings of
/// the canonical combinatorial `X`-space with alphabet size `k` and `l`
/// colors.
#[allow(clippy::too_many_arguments)]
pub fn certify_not_gr_large(
    x: &FinSet,
    e: &OrdinalExpr,
    theta: &ThetaPredicate,
    k: usize,
    l: u64,
    theta_strict: bool,
    coloring_budget: u64,
    point_budget: u64,
) -> Result<GrRefutation, PipelineError> {
    let min = x.min().ok_or(LargenessError::EmptySet)?;
    if theta_strict && (BigUint::from(k as u64) >= *min || BigUint::from(l) >= *min) {
        return Err(PipelineError::ParamsNotBelowMin);
    }
    let space = canonical_space(x, k)?;
    let points = space.points(point_budget)?;
    let index: HashMap<&Word, usize> = points.iter().enumerate().map(|(i, p)| (p, i)).collect();
    // Constraints: the point sets of every subspace whose anchors are
    // e-large; none may be monochromatic.
    let mut constraints: Vec<Vec<usize>> = Vec::new();
    for m in 1..=space.dimension() {
        for sub in space.subspaces(m)? {
            let y = anchors_finset(sub.generator());
            if !is_large(&y, e, theta, false)?.large {
                continue;
            }
            let sub_points = sub.points(point_budget)?;
            constraints.push(
                sub_points
                    .iter()
                    .map(|p| *index.get(p).expect("subspace points lie in the space"))
                    .collect(),
            );
        }
    }
    let required = (l as u128)
        .checked_pow(points.len() as u32)
        .unwrap_or(u128::MAX);
    let (assignment, exhaustive) = if required <= coloring_budget as u128 {
        (exhaustive_line_free(points.len(), l, &constraints), true)
    } else {
        (
            backtracking_line_free(points.len(), l, &constraints, coloring_budget)?,
            true,
        )
    };
    let counterexample = assignment.map(|colors| {
        Coloring::table(
            l,
            points.iter().cloned().zip(colors).collect(),
        )
    });
    Ok(GrRefutation {
        counterexample,
        exhaustive,
        space,
    })
}

/// The canonical combinatorial space over an anchor set: variables at the
/// anchor positions, letter 0 elsewhere, length `max X + 1`.
pub fn canonical_space(x: &FinSet, k: usize) -> Result<CombinatorialSpace, PipelineError> {
    let positions = anchor_positions(x)?;
    let len = positions.last().map(|&p| p + 1).unwrap_or(0);
    let mut tokens = vec![Token::Letter(0); len];
    for (j, &p) in positions.iter().enumerate() {
        tokens[p] = Token::Var(j);
    }
    Ok(CombinatorialSpace::new(VariableWord::new(
        tokens,
        Alphabet::new(k)?,
    )?))
}

/// The canonical OVW tree over an anchor set.
pub fn canonical_tree(x: &FinSet, k: usize) -> Result<OVWTree, PipelineError> {
    Ok(OVWTree::new(
        canonical_space(x, k)?.generator().clone(),
    ))
}
