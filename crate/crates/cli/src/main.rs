//! Command-line surface over the library: word operations, point and
//! substructure enumeration, monochromatic searches, the largeness calculus,
//! the large-homogeneous pipelines, bound arithmetic, and certificate
//! verification.
//!
//! Output is JSON on standard output (`--pretty` for indented form).
//! Exit codes: 0 for success or a positive answer, 1 for a negative answer
//! (false / nothing found), 2 for errors, with diagnostics on standard error.

use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ovw_core::{
    cert_apartness, cert_cs_subtree, cert_gr_subspace,
    cert_hj_line, cert_large_homog_space, cert_large_homog_tree, cert_largeness,
    cert_sparse_subset, cert_split_largeness, certify_not_gr_large, find_cs_subtree,
    find_gr_subspace, find_hj_line, find_large_homog_ovw_subtree, find_large_homog_subspace,
    generate_large, is_large, is_large_bruteforce, is_sparse, ovw_exponent, sparse_subset,
    split_large, theta_apart, verify_certificate, verify_hj_instance, Alphabet, BoundParams,
    Certificate, Coloring, CsStrategy, FinSet, GrowthCaps, HjMode, OrdinalExpr, OvwMode,
    PipelineOptions, RunConfig, StructureRepr, SubstructureColoring, ThetaKind, ThetaPredicate,
    Token, VariableWord, Word,
};

#[derive(Parser)]
#[command(
    name = "ovw",
    about = "Ordered variable words: spaces, trees, largeness, monochromatic searches, certificates",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Indented JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    /// Ternary predicate: top, gt, power-gap, or inline JSON for a table.
    #[arg(long, global = true, default_value = "top")]
    theta: String,
    /// Constant c of the predicate (strict mode requires min >= max(4, c)).
    #[arg(long, global = true, default_value_t = 0)]
    theta_c: u64,
    /// Disable the strict minimum-element checks.
    #[arg(long, global = true)]
    no_strict: bool,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Point materialization budget (env OVW_POINT_BUDGET).
    #[arg(long, global = true)]
    point_budget: Option<u64>,
    /// Coloring enumeration budget (env OVW_COLORING_BUDGET).
    #[arg(long, global = true)]
    coloring_budget: Option<u64>,
    /// Sibling enumeration budget (env OVW_SIBLING_BUDGET).
    #[arg(long, global = true)]
    sibling_budget: Option<u64>,
    /// Direct search candidate budget (env OVW_SEARCH_BUDGET).
    #[arg(long, global = true)]
    search_budget: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Word and variable-word operations.
    Word {
        #[command(subcommand)]
        op: WordOp,
    },
    /// Combinatorial space enumeration.
    Space {
        #[command(subcommand)]
        op: SpaceOp,
    },
    /// OVW tree enumeration.
    Tree {
        #[command(subcommand)]
        op: TreeOp,
    },
    /// Monochromatic substructure searches.
    Ramsey {
        #[command(subcommand)]
        op: RamseyOp,
    },
    /// The largeness calculus.
    Large {
        #[command(subcommand)]
        op: LargeOp,
    },
    /// Large homogeneous substructure pipelines.
    Pipeline {
        #[command(subcommand)]
        op: PipelineOp,
    },
    /// Bound arithmetic and desk-scale calibration.
    Bounds {
        #[command(subcommand)]
        op: BoundsOp,
    },
    /// Verify certificates.
    Verify { certs: Vec<String> },
}

#[derive(Subcommand)]
enum WordOp {
    /// Validate a token sequence as an ordered variable word.
    Validate(WordArgs),
    /// Substitute letters for variables.
    Subst {
        #[command(flatten)]
        word: WordArgs,
        /// Letters to substitute, e.g. "ba" (may be empty).
        #[arg(long, default_value = "")]
        letters: String,
    },
    /// Instantiate every variable with a letter or a fresh variable.
    Compose {
        #[command(flatten)]
        word: WordArgs,
        /// Token sequence of length dim(w), JSON.
        #[arg(long)]
        with: String,
    },
    /// Cut before the first occurrence of a variable.
    Truncate {
        #[command(flatten)]
        word: WordArgs,
        #[arg(long)]
        at: usize,
    },
}

#[derive(Args)]
struct WordArgs {
    /// Token sequence, JSON such as '["a","b",{"x":0}]'.
    #[arg(long)]
    word: String,
    /// Alphabet size; inferred from the largest letter when omitted.
    #[arg(long)]
    alphabet: Option<usize>,
}

#[derive(Subcommand)]
enum SpaceOp {
    /// Materialize all points.
    Points {
        #[arg(long)]
        space: String,
    },
    /// Enumerate m-dimensional subspace generators.
    Subspaces {
        #[arg(long)]
        space: String,
        #[arg(long)]
        m: usize,
    },
}

#[derive(Subcommand)]
enum TreeOp {
    Points {
        #[arg(long)]
        tree: String,
    },
    /// Enumerate d-dimensional subtree generators.
    Subtrees {
        #[arg(long)]
        tree: String,
        #[arg(long)]
        d: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Direct,
    ViaGr,
}

#[derive(Subcommand)]
enum RamseyOp {
    /// Find a monochromatic combinatorial line.
    Hj {
        #[arg(long)]
        space: String,
        #[arg(long)]
        coloring: String,
        #[arg(long)]
        cert: Option<String>,
    },
    /// Find a d-dimensional subspace with monochromatic m-subspaces.
    Gr {
        #[arg(long)]
        space: String,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        coloring: String,
        #[arg(long)]
        cert: Option<String>,
    },
    /// Find a monochromatic d-dimensional OVW subtree.
    Cs {
        #[arg(long)]
        tree: String,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        coloring: String,
        #[arg(long, value_enum, default_value = "direct")]
        strategy: StrategyArg,
        #[arg(long)]
        cert: Option<String>,
    },
    /// Check whether every l-coloring of the full k^n space has a line.
    HjVerify {
        k: usize,
        l: u64,
        n: usize,
        #[arg(long)]
        backtrack: bool,
    },
}

#[derive(Subcommand)]
enum LargeOp {
    /// Decide largeness with a witness.
    Check {
        #[arg(long)]
        set: String,
        #[arg(long)]
        ordinal: String,
        #[arg(long)]
        cert: Option<String>,
    },
    /// Brute-force oracle over arbitrary subset decompositions.
    Bruteforce {
        #[arg(long)]
        set: String,
        #[arg(long)]
        ordinal: String,
        #[arg(long, default_value_t = 12)]
        cap: usize,
    },
    /// Check sparsity.
    Sparse {
        #[arg(long)]
        set: String,
    },
    /// Theta-apartness of two separated sets.
    Apart {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long)]
        cert: Option<String>,
    },
    /// Split into apart blocks with large transversals.
    Split {
        #[arg(long)]
        set: String,
        #[arg(long)]
        a: u32,
        #[arg(long)]
        b: u32,
        #[arg(long)]
        cert: Option<String>,
    },
    /// Extract a sparse large subset.
    SparseSubset {
        #[arg(long)]
        set: String,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        cert: Option<String>,
    },
    /// Generate a large set along a growth schedule.
    Generate {
        #[arg(long)]
        ordinal: String,
        #[arg(long)]
        start: String,
        #[arg(long)]
        sparse: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Preind,
    Ind,
}

#[derive(Subcommand)]
enum PipelineOp {
    /// Large homogeneous subspace extraction.
    GrLarge {
        #[arg(long)]
        space: String,
        #[arg(long)]
        coloring: String,
        #[arg(long)]
        b: u32,
        #[arg(long, default_value_t = 1)]
        n0: u32,
        #[arg(long, default_value_t = 1)]
        n1: u32,
        #[arg(long)]
        relax: bool,
        #[arg(long)]
        cert: Option<String>,
    },
    /// Large homogeneous OVW subtree extraction.
    OvwLarge {
        #[arg(long)]
        tree: String,
        #[arg(long)]
        coloring: String,
        #[arg(long)]
        r: u32,
        #[arg(long, value_enum, default_value = "ind")]
        mode: ModeArg,
        #[arg(long, default_value_t = 1)]
        n0: u32,
        #[arg(long, default_value_t = 1)]
        n1: u32,
        #[arg(long)]
        relax: bool,
        #[arg(long)]
        cert: Option<String>,
    },
    /// Search for a coloring refuting largeness over subspace colorings.
    GrRefute {
        #[arg(long)]
        set: String,
        #[arg(long)]
        ordinal: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        l: u64,
    },
}

#[derive(Subcommand)]
enum BoundsOp {
    /// The tree-exponent recursion p(0)=n1, p(b+1)=4p(b)+3n0+8.
    Ovw {
        #[arg(long)]
        b: u32,
        #[arg(long)]
        n0: u32,
        #[arg(long)]
        n1: u32,
    },
    /// Desk-scale survey of threshold dimensions for small instances.
    Calibrate {
        #[arg(long, default_value_t = 3)]
        max_n: usize,
    },
}

struct CliError(String);

impl<E: std::fmt::Display> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError(e.to_string())
    }
}

/// Outcome of a subcommand: the JSON payload and whether the answer was
/// positive (exit 0) or negative (exit 1).
struct Outcome {
    value: Value,
    positive: bool,
}

fn ok(value: Value) -> Result<Outcome, CliError> {
    Ok(Outcome {
        value,
        positive: true,
    })
}

fn negative(value: Value) -> Result<Outcome, CliError> {
    Ok(Outcome {
        value,
        positive: false,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pretty = cli.pretty;
    match run(cli) {
        Ok(outcome) => {
            let rendered = if pretty {
                serde_json::to_string_pretty(&outcome.value)
            } else {
                serde_json::to_string(&outcome.value)
            }
            .expect("serializing output");
            println!("{rendered}");
            if outcome.positive {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(CliError(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn env_budget(name: &str) -> Option<u64> {
    std::env::var(name).ok().and_then(|v| v.parse().ok())
}

fn build_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let kind = match cli.theta.as_str() {
        "top" => ThetaKind::Top,
        "gt" | "greater-than" => ThetaKind::GreaterThan,
        "power-gap" | "powergap" => ThetaKind::PowerGap,
        other => serde_json::from_str(other)
            .map_err(|e| CliError(format!("cannot parse theta {other:?}: {e}")))?,
    };
    let mut config = RunConfig {
        theta: ThetaPredicate {
            kind,
            c: cli.theta_c,
        },
        strict: !cli.no_strict,
        ..RunConfig::default()
    };
    if let Some(v) = cli.point_budget.or_else(|| env_budget("OVW_POINT_BUDGET")) {
        config.point_budget = v;
    }
    if let Some(v) = cli
        .coloring_budget
        .or_else(|| env_budget("OVW_COLORING_BUDGET"))
    {
        config.coloring_budget = v;
    }
    if let Some(v) = cli
        .sibling_budget
        .or_else(|| env_budget("OVW_SIBLING_BUDGET"))
    {
        config.sibling_budget = v;
    }
    if let Some(v) = cli
        .search_budget
        .or_else(|| env_budget("OVW_SEARCH_BUDGET"))
    {
        config.search_budget = v;
    }
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    Ok(config)
}

fn pipeline_options(config: &RunConfig, relax: bool) -> PipelineOptions {
    PipelineOptions {
        relax,
        point_budget: config.point_budget,
        sibling_budget: config.sibling_budget,
        search_budget: config.search_budget,
        recursion_budget: config.recursion_budget,
    }
}

fn parse_word_args(args: &WordArgs) -> Result<VariableWord, CliError> {
    let tokens: Vec<Token> = serde_json::from_str(&args.word)
        .map_err(|e| CliError(format!("cannot parse --word: {e}")))?;
    let size = match args.alphabet {
        Some(k) => k,
        None => tokens
            .iter()
            .filter_map(|t| match t {
                Token::Letter(l) => Some(l + 1),
                Token::Var(_) => None,
            })
            .max()
            .unwrap_or(1)
            .max(1),
    };
    Ok(VariableWord::new(tokens, Alphabet::new(size)?)?)
}

fn parse_structure(text: &str) -> Result<StructureRepr, CliError> {
    serde_json::from_str(text).map_err(|e| CliError(format!("cannot parse structure: {e}")))
}

fn parse_coloring(text: &str) -> Result<Coloring, CliError> {
    serde_json::from_str(text).map_err(|e| CliError(format!("cannot parse coloring: {e}")))
}

fn maybe_read_inline_or_file(text: &str) -> Result<String, CliError> {
    if text.trim_start().starts_with('{') || text.trim_start().starts_with('[') {
        Ok(text.to_string())
    } else {
        std::fs::read_to_string(text).map_err(|e| CliError(format!("reading {text:?}: {e}")))
    }
}

fn write_cert(path: &Option<String>, cert: &Certificate, pretty: bool) -> Result<(), CliError> {
    if let Some(path) = path {
        let rendered = if pretty {
            cert.to_json_pretty()?
        } else {
            cert.to_json()?
        };
        std::fs::write(path, rendered + "\n")
            .map_err(|e| CliError(format!("writing cert: {e}")))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    let config = build_config(&cli)?;
    let theta = config.theta.clone();
    let strict = config.strict;
    match &cli.command {
        Command::Word { op } => run_word(op),
        Command::Space { op } => run_space(op, &config),
        Command::Tree { op } => run_tree(op, &config),
        Command::Ramsey { op } => run_ramsey(op, &config, cli.pretty),
        Command::Large { op } => run_large(op, &config, &theta, strict, cli.pretty),
        Command::Pipeline { op } => run_pipeline(op, &config, &theta, cli.pretty),
        Command::Bounds { op } => run_bounds(op, &config),
        Command::Verify { certs } => run_verify(certs),
    }
}

fn run_word(op: &WordOp) -> Result<Outcome, CliError> {
    match op {
        WordOp::Validate(args) => match parse_word_args(args) {
            Ok(w) => ok(json!({
                "valid": true,
                "anchors": w.anchors(),
                "dimension": w.dimension(),
                "rendered": w.to_string(),
            })),
            Err(CliError(message)) => negative(json!({
                "valid": false,
                "error": message,
            })),
        },
        WordOp::Subst { word, letters } => {
            let w = parse_word_args(word)?;
            let u = Word::parse(letters)?;
            let result = w.substitute(&u)?;
            ok(serde_json::to_value(&result)?)
        }
        WordOp::Compose { word, with } => {
            let w = parse_word_args(word)?;
            let u: Vec<Token> = serde_json::from_str(with)
                .map_err(|e| CliError(format!("cannot parse --with: {e}")))?;
            let composed = w.compose(&u)?;
            ok(json!({
                "tokens": serde_json::to_value(composed.tokens())?,
                "anchors": composed.anchors(),
                "rendered": composed.to_string(),
            }))
        }
        WordOp::Truncate { word, at } => {
            let w = parse_word_args(word)?;
            let truncated = w.truncate_before(*at)?;
            ok(json!({
                "tokens": serde_json::to_value(truncated.tokens())?,
                "anchors": truncated.anchors(),
                "rendered": truncated.to_string(),
                "word": truncated.to_word().map(|v| v.to_string()),
            }))
        }
    }
}

fn run_space(op: &SpaceOp, config: &RunConfig) -> Result<Outcome, CliError> {
    match op {
        SpaceOp::Points { space } => {
            let space = parse_structure(space)?.to_space()?;
            let points = space.points(config.point_budget)?;
            ok(serde_json::to_value(&points)?)
        }
        SpaceOp::Subspaces { space, m } => {
            let space = parse_structure(space)?.to_space()?;
            let generators: Vec<Value> = space
                .subspaces(*m)?
                .map(|s| serde_json::to_value(s.generator().tokens()).map_err(CliError::from))
                .collect::<Result<_, _>>()?;
            ok(Value::Array(generators))
        }
    }
}

fn run_tree(op: &TreeOp, config: &RunConfig) -> Result<Outcome, CliError> {
    match op {
        TreeOp::Points { tree } => {
            let tree = parse_structure(tree)?.to_tree()?;
            let points = tree.points(config.point_budget)?;
            ok(serde_json::to_value(&points)?)
        }
        TreeOp::Subtrees { tree, d } => {
            let tree = parse_structure(tree)?.to_tree()?;
            let generators: Vec<Value> = tree
                .subtrees(*d)?
                .map(|t| serde_json::to_value(t.generator().tokens()).map_err(CliError::from))
                .collect::<Result<_, _>>()?;
            ok(Value::Array(generators))
        }
    }
}

fn run_ramsey(op: &RamseyOp, config: &RunConfig, pretty: bool) -> Result<Outcome, CliError> {
    match op {
        RamseyOp::Hj {
            space,
            coloring,
            cert,
        } => {
            let repr = parse_structure(space)?;
            let space = repr.to_space()?;
            let coloring = parse_coloring(&maybe_read_inline_or_file(coloring)?)?;
            match find_hj_line(&space, &coloring, config.point_budget)? {
                Some(found) => {
                    let certificate = cert_hj_line(
                        config,
                        &repr,
                        &coloring,
                        found.space.generator().tokens(),
                        found.color,
                    )?;
                    write_cert(cert, &certificate, pretty)?;
                    ok(json!({
                        "found": true,
                        "generator": serde_json::to_value(found.space.generator().tokens())?,
                        "color": found.color,
                    }))
                }
                None => negative(json!({ "found": false })),
            }
        }
        RamseyOp::Gr {
            space,
            m,
            d,
            coloring,
            cert,
        } => {
            let repr = parse_structure(space)?;
            let space = repr.to_space()?;
            let coloring: SubstructureColoring =
                serde_json::from_str(&maybe_read_inline_or_file(coloring)?)
                    .map_err(|e| CliError(format!("cannot parse coloring: {e}")))?;
            match find_gr_subspace(&space, *m, *d, &coloring)? {
                Some(found) => {
                    let certificate = cert_gr_subspace(
                        config,
                        &repr,
                        *m,
                        *d,
                        &coloring,
                        found.space.generator().tokens(),
                        found.color,
                    )?;
                    write_cert(cert, &certificate, pretty)?;
                    ok(json!({
                        "found": true,
                        "generator": serde_json::to_value(found.space.generator().tokens())?,
                        "color": found.color,
                    }))
                }
                None => negative(json!({ "found": false })),
            }
        }
        RamseyOp::Cs {
            tree,
            d,
            coloring,
            strategy,
            cert,
        } => {
            let repr = parse_structure(tree)?;
            let tree = repr.to_tree()?;
            let coloring = parse_coloring(&maybe_read_inline_or_file(coloring)?)?;
            let strategy = match strategy {
                StrategyArg::Direct => CsStrategy::Direct,
                StrategyArg::ViaGr => CsStrategy::ViaGr,
            };
            match find_cs_subtree(&tree, *d, &coloring, strategy, config.point_budget)? {
                Some(found) => {
                    let certificate = cert_cs_subtree(
                        config,
                        &repr,
                        *d,
                        &coloring,
                        strategy,
                        found.tree.generator().tokens(),
                        found.color,
                    )?;
                    write_cert(cert, &certificate, pretty)?;
                    ok(json!({
                        "found": true,
                        "generator": serde_json::to_value(found.tree.generator().tokens())?,
                        "color": found.color,
                    }))
                }
                None => negative(json!({ "found": false })),
            }
        }
        RamseyOp::HjVerify { k, l, n, backtrack } => {
            let mode = if *backtrack {
                HjMode::Backtracking
            } else {
                HjMode::Exhaustive
            };
            let verdict =
                verify_hj_instance(*k, *l, *n, mode, config.coloring_budget, config.point_budget)?;
            let value = json!({
                "holds": verdict.holds,
                "counterexample": verdict
                    .counterexample
                    .as_ref()
                    .map(serde_json::to_value)
                    .transpose()?,
            });
            if verdict.holds {
                ok(value)
            } else {
                negative(value)
            }
        }
    }
}

fn run_large(
    op: &LargeOp,
    config: &RunConfig,
    theta: &ThetaPredicate,
    strict: bool,
    pretty: bool,
) -> Result<Outcome, CliError> {
    match op {
        LargeOp::Check { set, ordinal, cert } => {
            let set = FinSet::parse(set)?;
            let ordinal = OrdinalExpr::from_str(ordinal)?;
            let outcome = is_large(&set, &ordinal, theta, strict)?;
            if outcome.large {
                let witness = outcome.witness.expect("witness on true");
                let certificate = cert_largeness(config, &set, &ordinal, &witness)?;
                write_cert(cert, &certificate, pretty)?;
                ok(json!({
                    "large": true,
                    "witness": serde_json::to_value(&witness)?,
                }))
            } else {
                negative(json!({ "large": false }))
            }
        }
        LargeOp::Bruteforce { set, ordinal, cap } => {
            let set = FinSet::parse(set)?;
            let ordinal = OrdinalExpr::from_str(ordinal)?;
            let large = is_large_bruteforce(&set, &ordinal, theta, *cap)?;
            if large {
                ok(json!({ "large": true }))
            } else {
                negative(json!({ "large": false }))
            }
        }
        LargeOp::Sparse { set } => {
            let set = FinSet::parse(set)?;
            if is_sparse(&set) {
                ok(json!({ "sparse": true }))
            } else {
                negative(json!({ "sparse": false }))
            }
        }
        LargeOp::Apart { left, right, cert } => {
            let left = FinSet::parse(left)?;
            let right = FinSet::parse(right)?;
            if theta_apart(&left, &right, theta)? {
                let certificate = cert_apartness(config, &left, &right)?;
                write_cert(cert, &certificate, pretty)?;
                ok(json!({ "apart": true }))
            } else {
                negative(json!({ "apart": false }))
            }
        }
        LargeOp::Split { set, a, b, cert } => {
            let set = FinSet::parse(set)?;
            let blocks = split_large(&set, *a, *b, theta, strict)?;
            let certificate = cert_split_largeness(config, &set, *a, *b, &blocks)?;
            write_cert(cert, &certificate, pretty)?;
            ok(json!({
                "blocks": serde_json::to_value(&blocks)?,
            }))
        }
        LargeOp::SparseSubset { set, n, cert } => {
            let set = FinSet::parse(set)?;
            let subset = sparse_subset(&set, *n, theta, strict)?;
            let certificate = cert_sparse_subset(config, &set, *n, &subset)?;
            write_cert(cert, &certificate, pretty)?;
            ok(json!({ "subset": serde_json::to_value(&subset)? }))
        }
        LargeOp::Generate {
            ordinal,
            start,
            sparse,
        } => {
            let ordinal = OrdinalExpr::from_str(ordinal)?;
            let start = ovw_core::BigUint::from_str(start.trim())
                .map_err(|e| CliError(format!("cannot parse natural {start:?}: {e}")))?;
            let set = generate_large(
                &ordinal,
                theta,
                &start,
                *sparse,
                strict,
                &GrowthCaps::default(),
            )?;
            ok(json!({ "set": serde_json::to_value(&set)? }))
        }
    }
}

fn run_pipeline(
    op: &PipelineOp,
    config: &RunConfig,
    theta: &ThetaPredicate,
    pretty: bool,
) -> Result<Outcome, CliError> {
    match op {
        PipelineOp::GrLarge {
            space,
            coloring,
            b,
            n0,
            n1,
            relax,
            cert,
        } => {
            let repr = parse_structure(space)?;
            let space = repr.to_space()?;
            let coloring = parse_coloring(&maybe_read_inline_or_file(coloring)?)?;
            let params = BoundParams::new(*n0, *n1);
            let opts = pipeline_options(config, *relax);
            let result = find_large_homog_subspace(&space, &coloring, theta, *b, &params, &opts)?;
            let certificate = cert_large_homog_space(config, &repr, &coloring, &result)?;
            write_cert(cert, &certificate, pretty)?;
            ok(json!({
                "anchors": serde_json::to_value(&result.anchors)?,
                "generator": serde_json::to_value(result.witness.generator().tokens())?,
                "color": result.color,
                "target": serde_json::to_value(result.target)?,
                "fallback": result.fallback,
                "trace": serde_json::to_value(&result.trace)?,
            }))
        }
        PipelineOp::OvwLarge {
            tree,
            coloring,
            r,
            mode,
            n0,
            n1,
            relax,
            cert,
        } => {
            let repr = parse_structure(tree)?;
            let tree = repr.to_tree()?;
            let coloring = parse_coloring(&maybe_read_inline_or_file(coloring)?)?;
            let params = BoundParams::new(*n0, *n1);
            let opts = pipeline_options(config, *relax);
            let mode = match mode {
                ModeArg::Preind => OvwMode::PreInd,
                ModeArg::Ind => OvwMode::Ind,
            };
            let result =
                find_large_homog_ovw_subtree(&tree, &coloring, theta, *r, mode, &params, &opts)?;
            let certificate = cert_large_homog_tree(config, &repr, &coloring, &result)?;
            write_cert(cert, &certificate, pretty)?;
            ok(json!({
                "anchors": serde_json::to_value(&result.anchors)?,
                "generator": serde_json::to_value(result.witness.generator().tokens())?,
                "color": result.color,
                "target": serde_json::to_value(result.target)?,
                "fallback": result.fallback,
                "trace": serde_json::to_value(&result.trace)?,
            }))
        }
        PipelineOp::GrRefute { set, ordinal, k, l } => {
            let set = FinSet::parse(set)?;
            let ordinal = OrdinalExpr::from_str(ordinal)?;
            let refutation = certify_not_gr_large(
                &set,
                &ordinal,
                theta,
                *k,
                *l,
                config.strict,
                config.coloring_budget,
                config.point_budget,
            )?;
            let value = json!({
                "counterexample": refutation
                    .counterexample
                    .as_ref()
                    .map(serde_json::to_value)
                    .transpose()?,
                "exhaustive": refutation.exhaustive,
            });
            if refutation.counterexample.is_some() {
                ok(value)
            } else {
                negative(value)
            }
        }
    }
}

fn run_bounds(op: &BoundsOp, config: &RunConfig) -> Result<Outcome, CliError> {
    match op {
        BoundsOp::Ovw { b, n0, n1 } => {
            let exponent = ovw_exponent(*b, &BoundParams::new(*n0, *n1))?;
            ok(json!({ "exponent": exponent }))
        }
        BoundsOp::Calibrate { max_n } => {
            // For each (k, l) in the reachable range, the least dimension n
            // at which every l-coloring of the full k^n space has a
            // monochromatic line.
            let mut table = Vec::new();
            for k in 2..=3usize {
                for l in 2..=3u64 {
                    let mut threshold: Option<usize> = None;
                    for n in 1..=*max_n {
                        let points = (k as u32).pow(n as u32);
                        let enumerable = (l as u128).checked_pow(points).unwrap_or(u128::MAX);
                        let mode = if enumerable <= config.coloring_budget as u128 {
                            HjMode::Exhaustive
                        } else {
                            HjMode::Backtracking
                        };
                        match verify_hj_instance(
                            k,
                            l,
                            n,
                            mode,
                            config.coloring_budget,
                            config.point_budget,
                        ) {
                            Ok(verdict) if verdict.holds => {
                                threshold = Some(n);
                                break;
                            }
                            Ok(_) => continue,
                            Err(_) => break,
                        }
                    }
                    table.push(json!({
                        "k": k,
                        "l": l,
                        "line_threshold_dimension": threshold,
                    }));
                }
            }
            ok(json!({
                "hales_jewett": table,
                "note": "least dimension with a guaranteed monochromatic line, by exhaustive \
                         or backtracking search; pick n0/n1 so generated large sets reach \
                         these sizes",
            }))
        }
    }
}

fn run_verify(certs: &[String]) -> Result<Outcome, CliError> {
    if certs.is_empty() {
        return Err(CliError("no certificate files given".into()));
    }
    let mut results = Vec::new();
    let mut all_ok = true;
    for path in certs {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError(format!("reading {path:?}: {e}")))?;
        let cert = Certificate::from_json(&text)?;
        let report = verify_certificate(&cert)?;
        all_ok &= report.ok;
        results.push(json!({
            "file": path,
            "ok": report.ok,
            "checks": serde_json::to_value(&report.checks)?,
        }));
    }
    let value = json!({ "results": results });
    if all_ok {
        ok(value)
    } else {
        negative(value)
    }
}
