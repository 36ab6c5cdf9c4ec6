//! Colorings and monochromatic-substructure searches: Hales-Jewett lines,
//! Graham-Rothschild subspaces, and Carlson-Simpson subtrees.
//!
//! Searches are pure and return the canonically first witness in the
//! enumeration order of the spaces module, so repeated runs are
//! reproducible. [`homogeneous_space_color`] and friends are the sole
//! arbiters used by certificate verification.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::spaces::{CombinatorialSpace, OVWTree, SpaceError};
use crate::words::{Token, VariableWord, Word, WordError};

pub const DEFAULT_COLORING_BUDGET: u64 = 1 << 24;

const POLY_HASH_MODULUS: u128 = (1 << 61) - 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RamseyError {
    #[error("colorings disagree in shape: {0}")]
    ShapeMismatch(String),
    #[error("coloring has no entry for {0}")]
    ColoringIncomplete(String),
    #[error("product color count overflows: {base}^{factors}")]
    WidthOverflow { base: u64, factors: usize },
    #[error("{required} colorings exceed the enumeration budget {budget}")]
    ColoringBudgetExceeded { required: u128, budget: u64 },
    #[error("backtracking node budget exhausted")]
    NodeBudgetExceeded,
    #[error("dimension {index} out of range for this search (max {max})")]
    DimensionOutOfRange { index: usize, max: usize },
    #[error("search produced a witness that fails verification: {0}")]
    Internal(String),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Word(#[from] WordError),
}

/// A total coloring of words with colors `0..l`, either an explicit table or
/// a named pure rule; rules evaluate bit-exactly on every platform.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    pub l: u64,
    #[serde(flatten)]
    pub body: ColoringBody,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ColoringBody {
    Table { entries: BTreeMap<Word, u64> },
    LengthMod { m: u64 },
    LetterCountMod { letter: usize, m: u64 },
    PolyHash { seed: u64 },
    Product { factors: Vec<Coloring> },
}

impl Coloring {
    pub fn table(l: u64, entries: BTreeMap<Word, u64>) -> Self {
        Coloring {
            l,
            body: ColoringBody::Table { entries },
        }
    }

    pub fn length_mod(m: u64) -> Self {
        Coloring {
            l: m,
            body: ColoringBody::LengthMod { m },
        }
    }

    pub fn letter_count_mod(letter: usize, m: u64) -> Self {
        Coloring {
            l: m,
            body: ColoringBody::LetterCountMod { letter, m },
        }
    }

    pub fn poly_hash(l: u64, seed: u64) -> Self {
        Coloring {
            l,
            body: ColoringBody::PolyHash { seed },
        }
    }

    pub fn constant(color: u64) -> Self {
        Coloring {
            l: color + 1,
            body: ColoringBody::LengthMod { m: 1 },
        }
    }

    pub fn color_of(&self, word: &Word) -> Result<u64, RamseyError> {
        match &self.body {
            ColoringBody::Table { entries } => entries
                .get(word)
                .copied()
                .ok_or_else(|| RamseyError::ColoringIncomplete(word.to_string())),
            ColoringBody::LengthMod { m } => Ok((word.len() as u64 % m) % self.l.max(1)),
            ColoringBody::LetterCountMod { letter, m } => {
                Ok((word.count_letter(*letter) as u64 % m) % self.l.max(1))
            }
            ColoringBody::PolyHash { seed } => {
                let mut acc: u128 = 0;
                let mut power: u128 = 1;
                for &letter in word.letters() {
                    acc = (acc + (letter as u128 + 1) * power) % POLY_HASH_MODULUS;
                    power = (power * 31) % POLY_HASH_MODULUS;
                }
                let mixed = (acc + *seed as u128) % POLY_HASH_MODULUS;
                Ok((mixed % self.l as u128) as u64)
            }
            ColoringBody::Product { factors } => {
                let base = factors.first().map(|f| f.l).unwrap_or(1);
                let mut code: u64 = 0;
                let mut radix: u64 = 1;
                for factor in factors {
                    let c = factor.color_of(word)?;
                    code = code
                        .checked_add(c.checked_mul(radix).ok_or(RamseyError::WidthOverflow {
                            base,
                            factors: factors.len(),
                        })?)
                        .ok_or(RamseyError::WidthOverflow {
                            base,
                            factors: factors.len(),
                        })?;
                    radix = radix.checked_mul(base).ok_or(RamseyError::WidthOverflow {
                        base,
                        factors: factors.len(),
                    })?;
                }
                Ok(code)
            }
        }
    }
}

/// Mixed-radix product of colorings over isomorphic domains: the color of a
/// point is `sum of f_j(point) * l^j` with `l^(number of inputs)` colors.
pub fn product_coloring(factors: &[Coloring]) -> Result<Coloring, RamseyError> {
    let first = factors
        .first()
        .ok_or_else(|| RamseyError::ShapeMismatch("empty factor list".into()))?;
    let base = first.l;
    for f in factors {
        if f.l != base {
            return Err(RamseyError::ShapeMismatch(format!(
                "color counts differ: {} vs {base}",
                f.l
            )));
        }
    }
    if let ColoringBody::Table { entries } = &first.body {
        let keys: Vec<&Word> = entries.keys().collect();
        for f in factors {
            if let ColoringBody::Table { entries: other } = &f.body {
                if other.keys().collect::<Vec<_>>() != keys {
                    return Err(RamseyError::ShapeMismatch(
                        "table domains differ".into(),
                    ));
                }
            }
        }
    }
    let l = base
        .checked_pow(factors.len() as u32)
        .ok_or(RamseyError::WidthOverflow {
            base,
            factors: factors.len(),
        })?;
    Ok(Coloring {
        l,
        body: ColoringBody::Product {
            factors: factors.to_vec(),
        },
    })
}

/// A coloring of m-dimensional subspaces, keyed by the canonical rendering of
/// their generating variable words.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubstructureColoring {
    pub l: u64,
    pub entries: BTreeMap<String, u64>,
}

impl SubstructureColoring {
    pub fn color_of(&self, generator: &VariableWord) -> Result<u64, RamseyError> {
        self.entries
            .get(&generator.to_string())
            .copied()
            .ok_or_else(|| RamseyError::ColoringIncomplete(generator.to_string()))
    }
}

/// The common color of all points, or `None` when the structure is not
/// homogeneous.
pub fn homogeneous_space_color(
    space: &CombinatorialSpace,
    coloring: &Coloring,
    point_budget: u64,
) -> Result<Option<u64>, RamseyError> {
    common_color(space.points(point_budget)?, coloring)
}

pub fn homogeneous_tree_color(
    tree: &OVWTree,
    coloring: &Coloring,
    point_budget: u64,
) -> Result<Option<u64>, RamseyError> {
    common_color(tree.points(point_budget)?, coloring)
}

fn common_color(points: Vec<Word>, coloring: &Coloring) -> Result<Option<u64>, RamseyError> {
    let mut color = None;
    for point in &points {
        let c = coloring.color_of(point)?;
        match color {
            None => color = Some(c),
            Some(prev) if prev == c => {}
            Some(_) => return Ok(None),
        }
    }
    Ok(color)
}

/// The common color of all `m`-dimensional subspaces under a substructure
/// coloring, or `None`.
pub fn homogeneous_subspaces_color(
    space: &CombinatorialSpace,
    m: usize,
    coloring: &SubstructureColoring,
) -> Result<Option<u64>, RamseyError> {
    let mut color = None;
    for sub in space.subspaces(m)? {
        let c = coloring.color_of(sub.generator())?;
        match color {
            None => color = Some(c),
            Some(prev) if prev == c => {}
            Some(_) => return Ok(None),
        }
    }
    Ok(color)
}

/// A found monochromatic line (1-dimensional subspace) with its color.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogeneousSpace {
    pub space: CombinatorialSpace,
    pub color: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogeneousTree {
    pub tree: OVWTree,
    pub color: u64,
}

/// The canonically first monochromatic combinatorial line of the space.
pub fn find_hj_line(
    space: &CombinatorialSpace,
    coloring: &Coloring,
    point_budget: u64,
) -> Result<Option<HomogeneousSpace>, RamseyError> {
    for line in space.subspaces(1)? {
        if let Some(color) = homogeneous_space_color(&line, coloring, point_budget)? {
            return Ok(Some(HomogeneousSpace { space: line, color }));
        }
    }
    Ok(None)
}

/// Search mode for [`verify_hj_instance`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HjMode {
    Exhaustive,
    Backtracking,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HjVerdict {
    pub holds: bool,
    pub counterexample: Option<Coloring>,
}

/// Does every `l`-coloring of the full space `A^n` admit a monochromatic
/// line? Exhaustive mode enumerates all `l^(k^n)` colorings; backtracking
/// mode searches for a line-free coloring with forward checking and proves
/// the theorem instance when none exists.
pub fn verify_hj_instance(
    k: usize,
    l: u64,
    n: usize,
    mode: HjMode,
    coloring_budget: u64,
    point_budget: u64,
) -> Result<HjVerdict, RamseyError> {
    if n == 0 || k == 0 || l == 0 {
        return Err(RamseyError::DimensionOutOfRange { index: n, max: 0 });
    }
    let alphabet = crate::words::Alphabet::new(k)?;
    let tokens: Vec<Token> = (0..n).map(Token::Var).collect();
    let space = CombinatorialSpace::new(VariableWord::new(tokens, alphabet)?);
    let points = space.points(point_budget)?;
    let index: HashMap<&Word, usize> = points.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut lines: Vec<Vec<usize>> = Vec::new();
    for line in space.subspaces(1)? {
        let line_points = line.points(point_budget)?;
        lines.push(
            line_points
                .iter()
                .map(|p| *index.get(p).expect("line points lie in the space"))
                .collect(),
        );
    }
    let assignment = match mode {
        HjMode::Exhaustive => {
            let required = (l as u128).checked_pow(points.len() as u32).unwrap_or(u128::MAX);
            if required > coloring_budget as u128 {
                return Err(RamseyError::ColoringBudgetExceeded {
                    required,
                    budget: coloring_budget,
                });
            }
            exhaustive_line_free(points.len(), l, &lines)
        }
        HjMode::Backtracking => backtracking_line_free(points.len(), l, &lines, u64::MAX)?,
    };
    match assignment {
        Some(colors) => {
            let entries: BTreeMap<Word, u64> = points.into_iter().zip(colors).collect();
            Ok(HjVerdict {
                holds: false,
                counterexample: Some(Coloring::table(l, entries)),
            })
        }
        None => Ok(HjVerdict {
            holds: true,
            counterexample: None,
        }),
    }
}

fn is_line_free(colors: &[u64], lines: &[Vec<usize>]) -> bool {
    lines
        .iter()
        .all(|line| !line.iter().all(|&p| colors[p] == colors[line[0]]))
}

pub(crate) fn exhaustive_line_free(points: usize, l: u64, lines: &[Vec<usize>]) -> Option<Vec<u64>> {
    let mut colors = vec![0u64; points];
    loop {
        if is_line_free(&colors, lines) {
            return Some(colors);
        }
        let mut pos = points;
        loop {
            if pos == 0 {
                return None;
            }
            pos -= 1;
            colors[pos] += 1;
            if colors[pos] < l {
                break;
            }
            colors[pos] = 0;
        }
    }
}

/// Depth-first search for a line-free coloring. Points are colored in an
/// order that visits constrained points first; a branch is cut as soon as
/// some line is fully colored monochromatically. Returns an error when the
/// node budget runs out before the search completes.
pub(crate) fn backtracking_line_free(
    points: usize,
    l: u64,
    lines: &[Vec<usize>],
    node_budget: u64,
) -> Result<Option<Vec<u64>>, RamseyError> {
    let mut membership: Vec<Vec<usize>> = vec![Vec::new(); points];
    for (li, line) in lines.iter().enumerate() {
        for &p in line {
            membership[p].push(li);
        }
    }
    let mut order: Vec<usize> = (0..points).collect();
    order.sort_by_key(|&p| std::cmp::Reverse(membership[p].len()));
    let mut colors: Vec<Option<u64>> = vec![None; points];

    fn violates(colors: &[Option<u64>], line: &[usize]) -> bool {
        let mut first = None;
        for &p in line {
            match (colors[p], first) {
                (None, _) => return false,
                (Some(c), None) => first = Some(c),
                (Some(c), Some(f)) if c != f => return false,
                _ => {}
            }
        }
        true
    }

    fn dfs(
        rank: usize,
        order: &[usize],
        colors: &mut Vec<Option<u64>>,
        l: u64,
        lines: &[Vec<usize>],
        membership: &[Vec<usize>],
        nodes_left: &mut u64,
    ) -> Result<bool, RamseyError> {
        if rank == order.len() {
            return Ok(true);
        }
        let p = order[rank];
        for c in 0..l {
            if *nodes_left == 0 {
                return Err(RamseyError::NodeBudgetExceeded);
            }
            *nodes_left -= 1;
            colors[p] = Some(c);
            if membership[p].iter().all(|&li| !violates(colors, &lines[li]))
                && dfs(rank + 1, order, colors, l, lines, membership, nodes_left)?
            {
                return Ok(true);
            }
            colors[p] = None;
        }
        Ok(false)
    }

    let mut nodes_left = node_budget;
    if dfs(0, &order, &mut colors, l, lines, &membership, &mut nodes_left)? {
        Ok(Some(
            colors.into_iter().map(|c| c.expect("complete")).collect(),
        ))
    } else {
        Ok(None)
    }
}

/// The canonically first `d`-dimensional subspace all of whose
/// `m`-dimensional subspaces share one color under `g`.
pub fn find_gr_subspace(
    space: &CombinatorialSpace,
    m: usize,
    d: usize,
    g: &SubstructureColoring,
) -> Result<Option<HomogeneousSpace>, RamseyError> {
    Ok(
        find_gr_subspace_by(space, m, d, |generator| g.color_of(generator))?.map(|w| {
            HomogeneousSpace {
                space: w.space,
                color: w.color,
            }
        }),
    )
}

pub(crate) fn find_gr_subspace_by<K: Eq + Clone>(
    space: &CombinatorialSpace,
    m: usize,
    d: usize,
    mut g: impl FnMut(&VariableWord) -> Result<K, RamseyError>,
) -> Result<Option<HomogeneousSpaceBy<K>>, RamseyError> {
    if m < 1 || m > d {
        return Err(RamseyError::DimensionOutOfRange {
            index: m,
            max: d,
        });
    }
    'candidates: for candidate in space.subspaces(d)? {
        let mut color: Option<K> = None;
        for sub in candidate.subspaces(m)? {
            let c = g(sub.generator())?;
            match &color {
                None => color = Some(c),
                Some(prev) if *prev == c => {}
                Some(_) => continue 'candidates,
            }
        }
        if let Some(color) = color {
            return Ok(Some(HomogeneousSpaceBy {
                space: candidate,
                color,
            }));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone)]
pub(crate) struct HomogeneousSpaceBy<K> {
    pub space: CombinatorialSpace,
    pub color: K,
}

/// Search strategy for [`find_cs_subtree`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CsStrategy {
    /// Scan subtrees in canonical order.
    Direct,
    /// Reduce to a subspace search on the one-variable extension of the
    /// generator: color each line of the extended leaf space by the color of
    /// its generating word cut before the first occurrence of its variable,
    /// find a (d+1)-dimensional subspace with monochromatic lines, then cut
    /// its generator before the last variable.
    ViaGr,
}

/// The canonically first `f`-homogeneous `d`-dimensional OVW subtree.
/// Both strategies agree on existence; their witnesses may differ.
pub fn find_cs_subtree(
    tree: &OVWTree,
    d: usize,
    coloring: &Coloring,
    strategy: CsStrategy,
    point_budget: u64,
) -> Result<Option<HomogeneousTree>, RamseyError> {
    if d < 1 || d > tree.dimension() {
        return Err(RamseyError::DimensionOutOfRange {
            index: d,
            max: tree.dimension(),
        });
    }
    match strategy {
        CsStrategy::Direct => {
            for sub in tree.subtrees(d)? {
                if let Some(color) = homogeneous_tree_color(&sub, coloring, point_budget)? {
                    return Ok(Some(HomogeneousTree { tree: sub, color }));
                }
            }
            Ok(None)
        }
        CsStrategy::ViaGr => {
            let generator = tree.generator();
            let mut extended_tokens = generator.tokens().to_vec();
            extended_tokens.push(Token::Var(generator.dimension()));
            let extended = VariableWord::new(extended_tokens, generator.alphabet())?;
            let leaf_space = CombinatorialSpace::new(extended);
            let found = find_gr_subspace_by(&leaf_space, 1, d + 1, |line_generator| {
                let cut = line_generator
                    .truncate_before(0)
                    .expect("dimension at least 1")
                    .to_word()
                    .expect("dimension 0 after the cut");
                coloring.color_of(&cut)
            })?;
            match found {
                None => Ok(None),
                Some(witness) => {
                    let cut = witness.space.generator().truncate_before(d)?;
                    let subtree = OVWTree::new(cut);
                    match homogeneous_tree_color(&subtree, coloring, point_budget)? {
                        Some(color) => Ok(Some(HomogeneousTree {
                            tree: subtree,
                            color,
                        })),
                        None => Err(RamseyError::Internal(format!(
                            "cut subtree {} is not homogeneous",
                            subtree.generator()
                        ))),
                    }
                }
            }
        }
    }
}
