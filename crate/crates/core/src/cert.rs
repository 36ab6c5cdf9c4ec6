//! Serialized certificates for search and largeness claims, and their
//! independent verifier.
//!
//! A certificate embeds the full run configuration, a canonical serialization
//! of its inputs with an FNV-1a digest, a kind-specific witness, and the list
//! of named checks the verifier must re-run. Verification never consults the
//! search code: it uses only the word, space and largeness evaluators and the
//! homogeneity checks, so a certificate stands or falls on its own content.
//!
//! Output is canonical JSON (sorted keys, no timestamps); identical
//! configuration and inputs produce byte-identical certificates.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::large_ramsey::{BoundParams, LargeHomogSpace, LargeHomogTree};
use crate::largeness::{
    is_large, is_sparse, theta_apart, verify_witness, FinSet, LargenessWitness, OrdinalExpr,
    ThetaPredicate,
};
use crate::ramsey::{
    homogeneous_space_color, homogeneous_subspaces_color, homogeneous_tree_color, Coloring,
    CsStrategy, SubstructureColoring,
};
use crate::spaces::StructureRepr;
use crate::words::Token;

pub const CERTIFICATE_VERSION: &str = "v1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertError {
    #[error("malformed certificate: {0}")]
    Malformed(String),
    #[error("serialization failed: {0}")]
    Serialization(String),
}

/// Everything that parameterizes a run; embedded into every certificate so
/// results reproduce without external configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub point_budget: u64,
    pub coloring_budget: u64,
    pub sibling_budget: u64,
    pub search_budget: u64,
    pub recursion_budget: u32,
    pub strict: bool,
    pub theta: ThetaPredicate,
    pub bounds: BoundParams,
    pub parallelism: u32,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            point_budget: 1 << 20,
            coloring_budget: 1 << 24,
            sibling_budget: 1 << 16,
            search_budget: 1 << 22,
            recursion_budget: 16,
            strict: true,
            theta: ThetaPredicate::top(),
            bounds: BoundParams::new(1, 1),
            parallelism: 1,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    HjLine,
    GrSubspace,
    CsSubtree,
    Largeness,
    Apartness,
    SplitLargeness,
    SparseSubset,
    LargeHomog,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub version: String,
    pub kind: CertificateKind,
    pub config: RunConfig,
    pub inputs: Value,
    /// FNV-1a 64 digest (hex) of the canonical serialization of version,
    /// kind, config and inputs.
    pub digest: String,
    pub witness: Value,
    pub checks: Vec<String>,
}

/// 64-bit FNV-1a.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

/// Canonical JSON: serde_json maps iterate sorted by key, so a compact
/// rendering of a `Value` is already canonical.
pub fn canonical_json(value: &Value) -> String {
    serde_json::to_string(value).expect("serializing serde_json::Value cannot fail")
}

fn to_value<T: Serialize>(value: &T) -> Result<Value, CertError> {
    serde_json::to_value(value).map_err(|e| CertError::Serialization(e.to_string()))
}

fn compute_digest(
    kind: CertificateKind,
    config: &RunConfig,
    inputs: &Value,
) -> Result<String, CertError> {
    let body = json!({
        "config": to_value(config)?,
        "inputs": inputs,
        "kind": to_value(&kind)?,
        "version": CERTIFICATE_VERSION,
    });
    Ok(format!("{:016x}", fnv1a64(canonical_json(&body).as_bytes())))
}

impl Certificate {
    pub fn new(
        kind: CertificateKind,
        config: RunConfig,
        inputs: Value,
        witness: Value,
        checks: Vec<String>,
    ) -> Result<Self, CertError> {
        let digest = compute_digest(kind, &config, &inputs)?;
        Ok(Certificate {
            version: CERTIFICATE_VERSION.to_string(),
            kind,
            config,
            inputs,
            digest,
            witness,
            checks,
        })
    }

    pub fn to_json(&self) -> Result<String, CertError> {
        let value = to_value(self)?;
        Ok(canonical_json(&value))
    }

    pub fn to_json_pretty(&self) -> Result<String, CertError> {
        let value = to_value(self)?;
        serde_json::to_string_pretty(&value).map_err(|e| CertError::Serialization(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self, CertError> {
        serde_json::from_str(text).map_err(|e| CertError::Malformed(e.to_string()))
    }
}

// ---------------------------------------------------------------------------
// Emission
// ---------------------------------------------------------------------------

fn tokens_value(tokens: &[Token]) -> Result<Value, CertError> {
    to_value(&tokens.to_vec())
}

pub fn cert_hj_line(
    config: &RunConfig,
    space: &StructureRepr,
    coloring: &Coloring,
    line_generator: &[Token],
    color: u64,
) -> Result<Certificate, CertError> {
    Certificate::new(
        CertificateKind::HjLine,
        config.clone(),
        json!({ "space": to_value(space)?, "coloring": to_value(coloring)? }),
        json!({ "generator": tokens_value(line_generator)?, "color": color }),
        vec![
            "substructure".into(),
            "dimension".into(),
            "homogeneous".into(),
        ],
    )
}

pub fn cert_gr_subspace(
    config: &RunConfig,
    space: &StructureRepr,
    m: usize,
    d: usize,
    coloring: &SubstructureColoring,
    generator: &[Token],
    color: u64,
) -> Result<Certificate, CertError> {
    Certificate::new(
        CertificateKind::GrSubspace,
        config.clone(),
        json!({
            "space": to_value(space)?,
            "m": m,
            "d": d,
            "coloring": to_value(coloring)?,
        }),
        json!({ "generator": tokens_value(generator)?, "color": color }),
        vec![
            "substructure".into(),
            "dimension".into(),
            "subspaces_homogeneous".into(),
        ],
    )
}

pub fn cert_cs_subtree(
    config: &RunConfig,
    tree: &StructureRepr,
    d: usize,
    coloring: &Coloring,
    strategy: CsStrategy,
    generator: &[Token],
    color: u64,
) -> Result<Certificate, CertError> {
    Certificate::new(
        CertificateKind::CsSubtree,
        config.clone(),
        json!({
            "tree": to_value(tree)?,
            "d": d,
            "coloring": to_value(coloring)?,
            "strategy": to_value(&strategy)?,
        }),
        json!({ "generator": tokens_value(generator)?, "color": color }),
        vec![
            "substructure".into(),
            "dimension".into(),
            "homogeneous".into(),
        ],
    )
}

pub fn cert_largeness(
    config: &RunConfig,
    set: &FinSet,
    ordinal: &OrdinalExpr,
    witness: &LargenessWitness,
) -> Result<Certificate, CertError> {
    Certificate::new(
        CertificateKind::Largeness,
        config.clone(),
        json!({ "set": to_value(set)?, "ordinal": to_value(ordinal)? }),
        json!({ "largeness": to_value(witness)? }),
        vec!["witness_verifies".into()],
    )
}

pub fn cert_apartness(
    config: &RunConfig,
    left: &FinSet,
    right: &FinSet,
) -> Result<Certificate, CertError> {
    Certificate::new(
        CertificateKind::Apartness,
        config.clone(),
        json!({ "left": to_value(left)?, "right": to_value(right)? }),
        json!({}),
        vec!["apart".into()],
    )
}

pub fn cert_split_largeness(
    config: &RunConfig,
    set: &FinSet,
    a: u32,
    b: u32,
    blocks: &[FinSet],
) -> Result<Certificate, CertError> {
    Certificate::new(
        CertificateKind::SplitLargeness,
        config.clone(),
        json!({ "set": to_value(set)?, "a": a, "b": b }),
        json!({ "blocks": to_value(&blocks.to_vec())? }),
        vec![
            "blocks_subset".into(),
            "blocks_apart".into(),
            "blocks_large".into(),
            "transversals_large".into(),
        ],
    )
}

pub fn cert_sparse_subset(
    config: &RunConfig,
    set: &FinSet,
    n: u32,
    subset: &FinSet,
) -> Result<Certificate, CertError> {
    Certificate::new(
        CertificateKind::SparseSubset,
        config.clone(),
        json!({ "set": to_value(set)?, "n": n }),
        json!({ "subset": to_value(subset)? }),
        vec!["subset".into(), "sparse".into(), "large".into()],
    )
}

pub fn cert_large_homog_space(
    config: &RunConfig,
    space: &StructureRepr,
    coloring: &Coloring,
    result: &LargeHomogSpace,
) -> Result<Certificate, CertError> {
    Certificate::new(
        CertificateKind::LargeHomog,
        config.clone(),
        json!({
            "structure": to_value(space)?,
            "structure_kind": "space",
            "coloring": to_value(coloring)?,
            "target": to_value(&result.target)?,
        }),
        json!({
            "anchors": to_value(&result.anchors)?,
            "generator": tokens_value(result.witness.generator().tokens())?,
            "color": result.color,
            "largeness": to_value(&result.largeness)?,
            "trace": to_value(&result.trace)?,
        }),
        vec![
            "anchors_subset".into(),
            "anchors_match".into(),
            "substructure".into(),
            "homogeneous".into(),
            "anchors_large".into(),
        ],
    )
}

pub fn cert_large_homog_tree(
    config: &RunConfig,
    tree: &StructureRepr,
    coloring: &Coloring,
    result: &LargeHomogTree,
) -> Result<Certificate, CertError> {
    Certificate::new(
        CertificateKind::LargeHomog,
        config.clone(),
        json!({
            "structure": to_value(tree)?,
            "structure_kind": "tree",
            "coloring": to_value(coloring)?,
            "target": to_value(&result.target)?,
        }),
        json!({
            "anchors": to_value(&result.anchors)?,
            "generator": tokens_value(result.witness.generator().tokens())?,
            "color": result.color,
            "largeness": to_value(&result.largeness)?,
            "trace": to_value(&result.trace)?,
        }),
        vec![
            "anchors_subset".into(),
            "anchors_match".into(),
            "substructure".into(),
            "homogeneous".into(),
            "anchors_large".into(),
        ],
    )
}

// ---------------------------------------------------------------------------
// Verification
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyReport {
    pub ok: bool,
    pub checks: Vec<CheckResult>,
}

fn field<'a>(value: &'a Value, name: &str) -> Result<&'a Value, CertError> {
    value
        .get(name)
        .ok_or_else(|| CertError::Malformed(format!("missing field {name:?}")))
}

fn parse_field<T: for<'de> Deserialize<'de>>(value: &Value, name: &str) -> Result<T, CertError> {
    serde_json::from_value(field(value, name)?.clone())
        .map_err(|e| CertError::Malformed(format!("field {name:?}: {e}")))
}

/// Re-runs every listed check of a certificate using only the evaluators.
/// The digest is recomputed first; a mismatch is a malformed certificate.
pub fn verify_certificate(cert: &Certificate) -> Result<VerifyReport, CertError> {
    if cert.version != CERTIFICATE_VERSION {
        return Err(CertError::Malformed(format!(
            "unsupported version {:?}",
            cert.version
        )));
    }
    let digest = compute_digest(cert.kind, &cert.config, &cert.inputs)?;
    if digest != cert.digest {
        return Err(CertError::Malformed(format!(
            "digest mismatch: stated {} recomputed {digest}",
            cert.digest
        )));
    }
    let mut checks = Vec::with_capacity(cert.checks.len());
    for name in &cert.checks {
        let outcome = run_check(cert, name);
        let (pass, detail) = match outcome {
            Ok(()) => (true, String::new()),
            Err(CheckFailure(detail)) => (false, detail),
        };
        checks.push(CheckResult {
            name: name.clone(),
            pass,
            detail,
        });
    }
    Ok(VerifyReport {
        ok: checks.iter().all(|c| c.pass),
        checks,
    })
}

struct CheckFailure(String);

impl<E: std::fmt::Display> From<E> for CheckFailure {
    fn from(e: E) -> Self {
        CheckFailure(e.to_string())
    }
}

fn fail(detail: impl Into<String>) -> Result<(), CheckFailure> {
    Err(CheckFailure(detail.into()))
}

fn run_check(cert: &Certificate, name: &str) -> Result<(), CheckFailure> {
    let budget = cert.config.point_budget;
    let theta = &cert.config.theta;
    match (cert.kind, name) {
        (CertificateKind::HjLine, _) | (CertificateKind::CsSubtree, _) => {
            let is_tree = cert.kind == CertificateKind::CsSubtree;
            let repr: StructureRepr =
                parse_field(&cert.inputs, if is_tree { "tree" } else { "space" })?;
            let coloring: Coloring = parse_field(&cert.inputs, "coloring")?;
            let tokens: Vec<Token> = parse_field(&cert.witness, "generator")?;
            let color: u64 = parse_field(&cert.witness, "color")?;
            let ambient = repr.to_variable_word()?;
            let witness =
                crate::words::VariableWord::new(tokens, ambient.alphabet())?;
            match name {
                "substructure" => {
                    let contained = if is_tree {
                        crate::spaces::OVWTree::new(witness)
                            .is_substructure_of(&crate::spaces::OVWTree::new(ambient), budget)?
                    } else {
                        crate::spaces::CombinatorialSpace::new(witness).is_substructure_of(
                            &crate::spaces::CombinatorialSpace::new(ambient),
                            budget,
                        )?
                    };
                    if !contained {
                        return fail("witness is not a substructure");
                    }
                    Ok(())
                }
                "dimension" => {
                    let expected = if is_tree {
                        parse_field::<usize>(&cert.inputs, "d")?
                    } else {
                        1
                    };
                    if witness.dimension() != expected {
                        return fail(format!(
                            "dimension {} instead of {expected}",
                            witness.dimension()
                        ));
                    }
                    Ok(())
                }
                "homogeneous" => {
                    let common = if is_tree {
                        homogeneous_tree_color(
                            &crate::spaces::OVWTree::new(witness),
                            &coloring,
                            budget,
                        )?
                    } else {
                        homogeneous_space_color(
                            &crate::spaces::CombinatorialSpace::new(witness),
                            &coloring,
                            budget,
                        )?
                    };
                    match common {
                        Some(c) if c == color => Ok(()),
                        Some(c) => fail(format!("common color {c} differs from stated {color}")),
                        None => fail("witness is not monochromatic"),
                    }
                }
                other => fail(format!("unknown check {other:?}")),
            }
        }
        (CertificateKind::GrSubspace, _) => {
            let repr: StructureRepr = parse_field(&cert.inputs, "space")?;
            let m: usize = parse_field(&cert.inputs, "m")?;
            let d: usize = parse_field(&cert.inputs, "d")?;
            let coloring: SubstructureColoring = parse_field(&cert.inputs, "coloring")?;
            let tokens: Vec<Token> = parse_field(&cert.witness, "generator")?;
            let color: u64 = parse_field(&cert.witness, "color")?;
            let ambient = repr.to_variable_word()?;
            let witness = crate::words::VariableWord::new(tokens, ambient.alphabet())?;
            match name {
                "substructure" => {
                    let contained = crate::spaces::CombinatorialSpace::new(witness)
                        .is_substructure_of(
                            &crate::spaces::CombinatorialSpace::new(ambient),
                            budget,
                        )?;
                    if !contained {
                        return fail("witness is not a subspace");
                    }
                    Ok(())
                }
                "dimension" => {
                    if witness.dimension() != d {
                        return fail(format!("dimension {} instead of {d}", witness.dimension()));
                    }
                    Ok(())
                }
                "subspaces_homogeneous" => {
                    let space = crate::spaces::CombinatorialSpace::new(witness);
                    match homogeneous_subspaces_color(&space, m, &coloring)? {
                        Some(c) if c == color => Ok(()),
                        Some(c) => fail(format!("common color {c} differs from stated {color}")),
                        None => fail("m-dimensional subspaces are not monochromatic"),
                    }
                }
                other => fail(format!("unknown check {other:?}")),
            }
        }
        (CertificateKind::Largeness, "witness_verifies") => {
            let set: FinSet = parse_field(&cert.inputs, "set")?;
            let ordinal: OrdinalExpr = parse_field(&cert.inputs, "ordinal")?;
            let witness: LargenessWitness = parse_field(&cert.witness, "largeness")?;
            if !verify_witness(&set, &ordinal, theta, &witness) {
                return fail("largeness witness does not re-verify");
            }
            Ok(())
        }
        (CertificateKind::Apartness, "apart") => {
            let left: FinSet = parse_field(&cert.inputs, "left")?;
            let right: FinSet = parse_field(&cert.inputs, "right")?;
            if !theta_apart(&left, &right, theta)? {
                return fail("sets are not theta-apart");
            }
            Ok(())
        }
        (CertificateKind::SplitLargeness, _) => {
            let set: FinSet = parse_field(&cert.inputs, "set")?;
            let a: u32 = parse_field(&cert.inputs, "a")?;
            let b: u32 = parse_field(&cert.inputs, "b")?;
            let blocks: Vec<FinSet> = parse_field(&cert.witness, "blocks")?;
            match name {
                "blocks_subset" => {
                    if blocks.is_empty() {
                        return fail("no blocks");
                    }
                    for block in &blocks {
                        if block.is_empty() || !block.is_subset_of(&set) {
                            return fail(format!("block {block} is not a nonempty subset"));
                        }
                    }
                    Ok(())
                }
                "blocks_apart" => {
                    for pair in blocks.windows(2) {
                        if !theta_apart(&pair[0], &pair[1], theta)? {
                            return fail(format!(
                                "blocks {} and {} are not apart",
                                pair[0], pair[1]
                            ));
                        }
                    }
                    Ok(())
                }
                "blocks_large" => {
                    let expr = OrdinalExpr::omega(a);
                    for block in &blocks {
                        if !is_large(block, &expr, theta, false)?.large {
                            return fail(format!("block {block} is not {expr}-large"));
                        }
                    }
                    Ok(())
                }
                "transversals_large" => {
                    check_transversals(&blocks, b, theta, cert.config.seed)
                }
                other => fail(format!("unknown check {other:?}")),
            }
        }
        (CertificateKind::SparseSubset, _) => {
            let set: FinSet = parse_field(&cert.inputs, "set")?;
            let n: u32 = parse_field(&cert.inputs, "n")?;
            let subset: FinSet = parse_field(&cert.witness, "subset")?;
            match name {
                "subset" => {
                    if !subset.is_subset_of(&set) {
                        return fail("witness is not a subset");
                    }
                    Ok(())
                }
                "sparse" => {
                    if !is_sparse(&subset) {
                        return fail("witness is not sparse");
                    }
                    Ok(())
                }
                "large" => {
                    let expr = OrdinalExpr::omega(n);
                    if !is_large(&subset, &expr, theta, false)?.large {
                        return fail(format!("witness is not {expr}-large"));
                    }
                    Ok(())
                }
                other => fail(format!("unknown check {other:?}")),
            }
        }
        (CertificateKind::LargeHomog, _) => {
            let repr: StructureRepr = parse_field(&cert.inputs, "structure")?;
            let structure_kind: String = parse_field(&cert.inputs, "structure_kind")?;
            let coloring: Coloring = parse_field(&cert.inputs, "coloring")?;
            let target: OrdinalExpr = parse_field(&cert.inputs, "target")?;
            let anchors: FinSet = parse_field(&cert.witness, "anchors")?;
            let tokens: Vec<Token> = parse_field(&cert.witness, "generator")?;
            let color: u64 = parse_field(&cert.witness, "color")?;
            let ambient = repr.to_variable_word()?;
            let witness = crate::words::VariableWord::new(tokens, ambient.alphabet())?;
            match name {
                "anchors_subset" => {
                    let ambient_anchors = FinSet::new(
                        ambient
                            .anchors()
                            .iter()
                            .map(|&p| BigUint::from(p as u64))
                            .collect(),
                    );
                    if !anchors.is_subset_of(&ambient_anchors) {
                        return fail("anchors are not anchors of the ambient structure");
                    }
                    Ok(())
                }
                "anchors_match" => {
                    let witness_anchors: Vec<u64> = witness
                        .anchors()
                        .iter()
                        .map(|&p| p as u64)
                        .collect();
                    let stated: Vec<u64> = anchors
                        .elements()
                        .iter()
                        .map(|e| e.to_u64().unwrap_or(u64::MAX))
                        .collect();
                    if witness_anchors != stated {
                        return fail("generator anchors differ from the stated anchor set");
                    }
                    Ok(())
                }
                "substructure" => {
                    let contained = if structure_kind == "tree" {
                        crate::spaces::OVWTree::new(witness)
                            .is_substructure_of(&crate::spaces::OVWTree::new(ambient), budget)?
                    } else {
                        crate::spaces::CombinatorialSpace::new(witness).is_substructure_of(
                            &crate::spaces::CombinatorialSpace::new(ambient),
                            budget,
                        )?
                    };
                    if !contained {
                        return fail("witness is not a substructure");
                    }
                    Ok(())
                }
                "homogeneous" => {
                    let common = if structure_kind == "tree" {
                        homogeneous_tree_color(
                            &crate::spaces::OVWTree::new(witness),
                            &coloring,
                            budget,
                        )?
                    } else {
                        homogeneous_space_color(
                            &crate::spaces::CombinatorialSpace::new(witness),
                            &coloring,
                            budget,
                        )?
                    };
                    match common {
                        Some(c) if c == color => Ok(()),
                        Some(c) => fail(format!("common color {c} differs from stated {color}")),
                        None => fail("witness is not monochromatic"),
                    }
                }
                "anchors_large" => {
                    let largeness: LargenessWitness = parse_field(&cert.witness, "largeness")?;
                    if !verify_witness(&anchors, &target, theta, &largeness) {
                        return fail("largeness witness does not re-verify");
                    }
                    Ok(())
                }
                other => fail(format!("unknown check {other:?}")),
            }
        }
        (kind, other) => fail(format!("check {other:?} not defined for {kind:?}")),
    }
}

const TRANSVERSAL_EXHAUSTIVE_CAP: u128 = 100_000;
const TRANSVERSAL_SAMPLES: u64 = 10_000;

/// Every transversal is `w^b`-large: exhaustive below the cap, otherwise a
/// deterministic sample seeded from the run configuration.
fn check_transversals(
    blocks: &[FinSet],
    b: u32,
    theta: &ThetaPredicate,
    seed: u64,
) -> Result<(), CheckFailure> {
    if blocks.is_empty() {
        return fail("no blocks");
    }
    let expr = OrdinalExpr::omega(b);
    let counts: Vec<usize> = blocks.iter().map(|blk| blk.len()).collect();
    let total: u128 = counts.iter().map(|&c| c as u128).product();
    let check_one = |indices: &[usize]| -> Result<(), CheckFailure> {
        let transversal = FinSet::new(
            blocks
                .iter()
                .zip(indices)
                .map(|(blk, &i)| blk.elements()[i].clone())
                .collect(),
        );
        if !is_large(&transversal, &expr, theta, false)?.large {
            return fail(format!("transversal {transversal} is not {expr}-large"));
        }
        Ok(())
    };
    if total <= TRANSVERSAL_EXHAUSTIVE_CAP {
        let mut indices = vec![0usize; blocks.len()];
        loop {
            check_one(&indices)?;
            let mut pos = indices.len();
            loop {
                if pos == 0 {
                    return Ok(());
                }
                pos -= 1;
                indices[pos] += 1;
                if indices[pos] < counts[pos] {
                    break;
                }
                indices[pos] = 0;
            }
        }
    } else {
        let mut rng = SplitMix64::new(seed);
        for _ in 0..TRANSVERSAL_SAMPLES {
            let indices: Vec<usize> = counts
                .iter()
                .map(|&c| (rng.next_u64() % c as u64) as usize)
                .collect();
            check_one(&indices)?;
        }
        Ok(())
    }
}

/// Deterministic 64-bit generator used for sampled checks; fixed algorithm so
/// certificates re-verify identically everywhere.
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
}
