//! Combinatorial spaces and OVW trees over a generating variable word.
//!
//! A combinatorial space over generator `w` of dimension `n` is the point set
//! `{w[u] : u in A^n}`; the OVW tree additionally contains every partial
//! substitution `{w[u] : u in A^{<=n}}`. Point sets are materialized lazily
//! under an explicit budget so large structures can still be addressed by
//! rule-based colorings.
//!
//! The canonical enumeration order of instantiation sequences is lexicographic
//! with variables ordered before letters at each position (`x0 < x1 < … <
//! letter 0 < letter 1 < …`); all downstream tie-breaking relies on it.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::words::{Alphabet, Token, VariableWord, Word, WordError};

pub const DEFAULT_POINT_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpaceError {
    #[error("materializing {required} points exceeds the budget of {budget}")]
    BudgetExceeded { required: u64, budget: u64 },
    #[error("substructure dimension {index} out of range 1..={dimension}")]
    IndexOutOfRange { index: usize, dimension: usize },
    #[error("structures use different alphabets ({0} vs {1})")]
    AlphabetMismatch(usize, usize),
    #[error(transparent)]
    Word(#[from] WordError),
}

/// `{w[u] : u in A^{|Y|}}` for a generating variable word `w`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CombinatorialSpace {
    generator: VariableWord,
}

/// `{w[u] : u in A^{<=|Y|}}` for a generating variable word `w`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OVWTree {
    generator: VariableWord,
}

fn checked_pow(base: u64, exp: usize) -> Option<u64> {
    let exp = u32::try_from(exp).ok()?;
    base.checked_pow(exp)
}

/// Enumerates `A^n` in lexicographic order, calling `f` on each tuple.
fn for_each_tuple(k: usize, n: usize, mut f: impl FnMut(&[usize])) {
    let mut digits = vec![0usize; n];
    loop {
        f(&digits);
        let mut pos = n;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < k {
                break;
            }
            digits[pos] = 0;
        }
    }
}

impl CombinatorialSpace {
    pub fn new(generator: VariableWord) -> Self {
        CombinatorialSpace { generator }
    }

    pub fn generator(&self) -> &VariableWord {
        &self.generator
    }

    pub fn alphabet(&self) -> Alphabet {
        self.generator.alphabet()
    }

    pub fn anchors(&self) -> &[usize] {
        self.generator.anchors()
    }

    pub fn dimension(&self) -> usize {
        self.generator.dimension()
    }

    /// `k^n`, or `None` on overflow.
    pub fn point_count(&self) -> Option<u64> {
        checked_pow(self.alphabet().size() as u64, self.dimension())
    }

    /// All points, in lexicographic order of the substituted tuple.
    pub fn points(&self, budget: u64) -> Result<Vec<Word>, SpaceError> {
        let required = self.point_count().unwrap_or(u64::MAX);
        if required > budget {
            return Err(SpaceError::BudgetExceeded { required, budget });
        }
        let mut out = Vec::with_capacity(required as usize);
        for_each_tuple(self.alphabet().size(), self.dimension(), |u| {
            let word = Word::from_letters(u.to_vec());
            out.push(self.generator.substitute(&word).expect("full substitution"));
        });
        Ok(out)
    }

    /// The `m`-dimensional combinatorial subspaces, in canonical order.
    pub fn subspaces(&self, m: usize) -> Result<SubspaceIter, SpaceError> {
        Ok(SubspaceIter(SubstructureIter::new(&self.generator, m)?))
    }

    /// True iff every point of `self` is a point of `other`. Decided by
    /// generator alignment when possible, otherwise by comparing point sets
    /// within the budget.
    pub fn is_substructure_of(
        &self,
        other: &CombinatorialSpace,
        budget: u64,
    ) -> Result<bool, SpaceError> {
        check_alphabets(&self.generator, &other.generator)?;
        if let Some(u) = align_instantiation(&other.generator, &self.generator) {
            if other.generator.compose(&u).as_ref() == Ok(&self.generator) {
                return Ok(true);
            }
        }
        let inner = self.points(budget)?;
        let outer: std::collections::HashSet<Word> = other.points(budget)?.into_iter().collect();
        Ok(inner.iter().all(|p| outer.contains(p)))
    }
}

impl OVWTree {
    pub fn new(generator: VariableWord) -> Self {
        OVWTree { generator }
    }

    pub fn generator(&self) -> &VariableWord {
        &self.generator
    }

    pub fn alphabet(&self) -> Alphabet {
        self.generator.alphabet()
    }

    pub fn anchors(&self) -> &[usize] {
        self.generator.anchors()
    }

    pub fn dimension(&self) -> usize {
        self.generator.dimension()
    }

    /// The space of full substitutions (the leaves of the tree).
    pub fn leaf_space(&self) -> CombinatorialSpace {
        CombinatorialSpace::new(self.generator.clone())
    }

    /// `sum of k^i for i <= n`, or `None` on overflow.
    pub fn point_count(&self) -> Option<u64> {
        let k = self.alphabet().size() as u64;
        let mut total = 0u64;
        for i in 0..=self.dimension() {
            total = total.checked_add(checked_pow(k, i)?)?;
        }
        Some(total)
    }

    /// All points, ordered by substitution depth and then lexicographically.
    pub fn points(&self, budget: u64) -> Result<Vec<Word>, SpaceError> {
        let required = self.point_count().unwrap_or(u64::MAX);
        if required > budget {
            return Err(SpaceError::BudgetExceeded { required, budget });
        }
        let mut out = Vec::with_capacity(required as usize);
        for depth in 0..=self.dimension() {
            for_each_tuple(self.alphabet().size(), depth, |u| {
                let word = Word::from_letters(u.to_vec());
                out.push(self.generator.substitute(&word).expect("partial substitution"));
            });
        }
        Ok(out)
    }

    /// The `d`-dimensional OVW subtrees: every
    /// `compose(truncate_before(w, t), u)` for `d <= t <= dim` and valid `u`
    /// with `d` fresh variables, in canonical order (`t` ascending, then `u`).
    /// Distinct `(t, u)` give generators of distinct length or content, so no
    /// duplicate suppression is needed beyond this enumeration.
    pub fn subtrees(&self, d: usize) -> Result<SubtreeIter, SpaceError> {
        if d < 1 || d > self.dimension() {
            return Err(SpaceError::IndexOutOfRange {
                index: d,
                dimension: self.dimension(),
            });
        }
        Ok(SubtreeIter {
            generator: self.generator.clone(),
            d,
            t: d,
            inner: Some(SubstructureIter::new(
                &self.generator.truncate_before(d)?,
                d,
            )?),
        })
    }

    pub fn is_substructure_of(&self, other: &OVWTree, budget: u64) -> Result<bool, SpaceError> {
        check_alphabets(&self.generator, &other.generator)?;
        // Alignment must locate the truncation level by length first.
        for t in (1..=other.dimension()).rev() {
            let truncated = other.generator.truncate_before(t)?;
            if truncated.len() != self.generator.len() {
                continue;
            }
            if let Some(u) = align_instantiation(&truncated, &self.generator) {
                if truncated.compose(&u).as_ref() == Ok(&self.generator) {
                    return Ok(true);
                }
            }
        }
        let inner = self.points(budget)?;
        let outer: std::collections::HashSet<Word> = other.points(budget)?.into_iter().collect();
        Ok(inner.iter().all(|p| outer.contains(p)))
    }
}

fn check_alphabets(a: &VariableWord, b: &VariableWord) -> Result<(), SpaceError> {
    if a.alphabet() != b.alphabet() {
        return Err(SpaceError::AlphabetMismatch(
            a.alphabet().size(),
            b.alphabet().size(),
        ));
    }
    Ok(())
}

/// Recovers the instantiation `u` with `outer.compose(&u) == inner`, if the
/// words have equal length and the letter positions agree.
pub(crate) fn align_instantiation(outer: &VariableWord, inner: &VariableWord) -> Option<Vec<Token>> {
    if outer.len() != inner.len() {
        return None;
    }
    let mut u: Vec<Option<Token>> = vec![None; outer.dimension()];
    for (o, i) in outer.tokens().iter().zip(inner.tokens()) {
        match *o {
            Token::Letter(_) => {
                if o != i {
                    return None;
                }
            }
            Token::Var(j) => match u[j] {
                None => u[j] = Some(*i),
                Some(prev) if prev == *i => {}
                Some(_) => return None,
            },
        }
    }
    u.into_iter().collect()
}

/// Iterator over the valid instantiation sequences of a generator with a
/// fixed number of fresh variables, yielding the composed substructure
/// generators in canonical order.
#[derive(Debug, Clone)]
pub struct SubstructureIter {
    generator: VariableWord,
    symbols: Vec<Token>,
    counters: Vec<usize>,
    done: bool,
    fresh: usize,
}

impl SubstructureIter {
    fn new(generator: &VariableWord, m: usize) -> Result<Self, SpaceError> {
        let dim = generator.dimension();
        if m < 1 || m > dim {
            return Err(SpaceError::IndexOutOfRange {
                index: m,
                dimension: dim,
            });
        }
        let mut symbols: Vec<Token> = (0..m).map(Token::Var).collect();
        symbols.extend(generator.alphabet().letters().map(Token::Letter));
        Ok(SubstructureIter {
            generator: generator.clone(),
            symbols,
            counters: vec![0; dim],
            done: false,
            fresh: m,
        })
    }

    fn advance(&mut self) {
        let mut pos = self.counters.len();
        loop {
            if pos == 0 {
                self.done = true;
                return;
            }
            pos -= 1;
            self.counters[pos] += 1;
            if self.counters[pos] < self.symbols.len() {
                return;
            }
            self.counters[pos] = 0;
        }
    }
}

impl Iterator for SubstructureIter {
    type Item = VariableWord;

    fn next(&mut self) -> Option<VariableWord> {
        while !self.done {
            let u: Vec<Token> = self.counters.iter().map(|&i| self.symbols[i]).collect();
            self.advance();
            // Exactly the requested fresh variables, in first-occurrence order.
            let mut next_expected = 0usize;
            let mut used = 0usize;
            let mut valid = true;
            for t in &u {
                if let Token::Var(j) = *t {
                    if j == next_expected {
                        next_expected += 1;
                        used += 1;
                    } else if j >= next_expected {
                        valid = false;
                        break;
                    }
                }
            }
            if !valid || used != self.fresh {
                continue;
            }
            if let Ok(w) = self.generator.compose(&u) {
                return Some(w);
            }
        }
        None
    }
}

/// Iterator over `m`-dimensional subspaces.
#[derive(Debug, Clone)]
pub struct SubspaceIter(SubstructureIter);

impl Iterator for SubspaceIter {
    type Item = CombinatorialSpace;

    fn next(&mut self) -> Option<CombinatorialSpace> {
        self.0.next().map(CombinatorialSpace::new)
    }
}

/// Iterator over `d`-dimensional subtree generators.
#[derive(Debug, Clone)]
pub struct SubtreeIter {
    generator: VariableWord,
    d: usize,
    t: usize,
    inner: Option<SubstructureIter>,
}

impl Iterator for SubtreeIter {
    type Item = OVWTree;

    fn next(&mut self) -> Option<OVWTree> {
        loop {
            if let Some(inner) = &mut self.inner {
                if let Some(w) = inner.next() {
                    return Some(OVWTree::new(w));
                }
            }
            self.t += 1;
            if self.t > self.generator.dimension() {
                return None;
            }
            let truncated = self
                .generator
                .truncate_before(self.t)
                .expect("t <= dimension");
            self.inner = SubstructureIter::new(&truncated, self.d).ok();
        }
    }
}

/// Wire format for spaces and trees: alphabet size plus generator tokens.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StructureRepr {
    pub alphabet_size: usize,
    pub generator: Vec<Token>,
}

impl StructureRepr {
    pub fn of_space(space: &CombinatorialSpace) -> Self {
        StructureRepr {
            alphabet_size: space.alphabet().size(),
            generator: space.generator().tokens().to_vec(),
        }
    }

    pub fn of_tree(tree: &OVWTree) -> Self {
        StructureRepr {
            alphabet_size: tree.alphabet().size(),
            generator: tree.generator().tokens().to_vec(),
        }
    }

    pub fn to_variable_word(&self) -> Result<VariableWord, WordError> {
        VariableWord::new(self.generator.clone(), Alphabet::new(self.alphabet_size)?)
    }

    pub fn to_space(&self) -> Result<CombinatorialSpace, WordError> {
        Ok(CombinatorialSpace::new(self.to_variable_word()?))
    }

    pub fn to_tree(&self) -> Result<OVWTree, WordError> {
        Ok(OVWTree::new(self.to_variable_word()?))
    }
}
