//! Config-driven command front end.
//!
//! Systems are described by a JSON document (schema below), commands map
//! onto the library operations, and reports render as text, CSV traces,
//! or full-precision JSON. Exit codes: 0 success, 1 parse or validation
//! error, 2 `certify` found nothing, 3 no convergence.
//!
//! ```json
//! {
//!   "generators": ["s1", "s2"],
//!   "K": [[1, 1], [1, 0]],
//!   "alphabet": ["0", "1"],
//!   "A": [[[1, 1], [1, 0]], [[1, 1], [1, 0]]],
//!   "options": { "log_base": "10", "max_iters": 300, "eps": 1e-13 }
//! }
//! ```
//!
//! With `"auto_inverse_transpose": true` the config lists r generators
//! and r matrices; inverses with transposed matrices are appended and K
//! becomes the free-group relation of rank r.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cayley::{free_group_relation, RelationMatrix};
use crate::entropy::{
    fulltree_entropy, stem_entropy, topological_entropy_cayley, EntropyEstimate, EntropyError,
    EntropyOptions, LogBase,
};
use crate::matrix::BinaryMatrix;
use crate::mixing::{
    build_graph_representation, existence_certificate, find_pivot, is_strongly_connected,
    Certificate, Pivot,
};
use crate::shift::{brute_force_counts, exact_ball_counts, MarkovSystem};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_NO_CERTIFICATE: i32 = 2;
pub const EXIT_NO_CONVERGENCE: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid config: {0}")]
    Validation(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    pub generators: Vec<String>,
    #[serde(rename = "K", default, skip_serializing_if = "Option::is_none")]
    pub relation: Option<Vec<Vec<u8>>>,
    pub alphabet: Vec<String>,
    #[serde(rename = "A")]
    pub transitions: Vec<Vec<Vec<u8>>>,
    #[serde(default)]
    pub options: ConfigOptions,
}

/// All fields optional; `None` means the default applies and a command
/// flag does not conflict.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigOptions {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub log_base: Option<LogBase>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iters: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_zero: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub auto_inverse_transpose: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Analyze,
    Stem,
    Top,
    Fulltree,
    Oracle,
    Certify,
}

impl std::str::FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "analyze" => Ok(Command::Analyze),
            "stem" => Ok(Command::Stem),
            "top" => Ok(Command::Top),
            "fulltree" => Ok(Command::Fulltree),
            "oracle" => Ok(Command::Oracle),
            "certify" => Ok(Command::Certify),
            other => Err(format!("unknown command {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(Format::Text),
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format {other:?}, expected text, csv or json")),
        }
    }
}

/// Command-line overrides; a set flag wins over the config value with a
/// warning.
#[derive(Debug, Clone, Default)]
pub struct Flags {
    pub iters: Option<usize>,
    pub eps: Option<f64>,
    pub log_base: Option<LogBase>,
    pub depth: Option<usize>,
    pub format: Format,
}

#[derive(Debug)]
pub struct CommandOutput {
    pub stdout: String,
    pub warnings: Vec<String>,
    pub exit_code: i32,
}

impl CommandOutput {
    fn failure(message: String) -> Self {
        Self {
            stdout: String::new(),
            warnings: vec![format!("error: {message}")],
            exit_code: EXIT_INVALID,
        }
    }
}

fn unique(names: &[String], field: &str) -> Result<(), CliError> {
    let mut seen = std::collections::HashSet::new();
    for n in names {
        if !seen.insert(n) {
            return Err(CliError::Validation(format!(
                "{field}: duplicate name {n:?}"
            )));
        }
    }
    Ok(())
}

fn matrix_at(rows: &[Vec<u8>], field: &str) -> Result<BinaryMatrix, CliError> {
    BinaryMatrix::from_rows(rows).map_err(|e| CliError::Validation(format!("{field}: {e}")))
}

pub fn parse_config(text: &str) -> Result<SystemConfig, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
}

/// Builds the validated system and effective options from a parsed
/// config, applying the inverse-transpose expansion when requested.
pub fn build_system(cfg: &SystemConfig) -> Result<(MarkovSystem, EntropyOptions), CliError> {
    unique(&cfg.generators, "generators")?;
    unique(&cfg.alphabet, "alphabet")?;
    let auto = cfg.options.auto_inverse_transpose.unwrap_or(false);

    let (relation, generators, matrices) = if auto {
        let rank = cfg.transitions.len();
        if rank == 0 {
            return Err(CliError::Validation("A: need at least one matrix".into()));
        }
        if cfg.generators.len() != rank {
            return Err(CliError::Validation(format!(
                "generators: auto_inverse_transpose expects {rank} names (one per matrix), got {}",
                cfg.generators.len()
            )));
        }
        if cfg.relation.is_some() {
            return Err(CliError::Validation(
                "K: omit the relation when auto_inverse_transpose is set; it is built as the free-group relation".into(),
            ));
        }
        let mut matrices = Vec::with_capacity(2 * rank);
        for (i, rows) in cfg.transitions.iter().enumerate() {
            matrices.push(matrix_at(rows, &format!("A[{i}]"))?);
        }
        let transposes: Vec<BinaryMatrix> = matrices.iter().map(|m| m.transpose()).collect();
        matrices.extend(transposes);
        let mut generators = cfg.generators.clone();
        generators.extend(cfg.generators.iter().map(|g| format!("{g}^-1")));
        (free_group_relation(rank), generators, matrices)
    } else {
        let raw = cfg
            .relation
            .as_ref()
            .ok_or_else(|| CliError::Validation("K: missing relation matrix".into()))?;
        let relation = RelationMatrix::validate(raw)
            .map_err(|e| CliError::Validation(format!("K: {e}")))?;
        if relation.k() != cfg.generators.len() {
            return Err(CliError::Validation(format!(
                "generators: {} names but K is {}x{}",
                cfg.generators.len(),
                relation.k(),
                relation.k()
            )));
        }
        let mut matrices = Vec::with_capacity(cfg.transitions.len());
        for (i, rows) in cfg.transitions.iter().enumerate() {
            matrices.push(matrix_at(rows, &format!("A[{i}]"))?);
        }
        (relation, cfg.generators.clone(), matrices)
    };

    let sys = MarkovSystem::new(relation, cfg.alphabet.clone(), matrices)
        .map_err(|e| CliError::Validation(e.to_string()))?;
    let _ = generators; // names live in the config; the system tracks indices

    let defaults = EntropyOptions::default();
    let opts = EntropyOptions {
        max_iters: cfg.options.max_iters.unwrap_or(defaults.max_iters),
        eps: cfg.options.eps.unwrap_or(defaults.eps),
        eps_zero: cfg.options.eps_zero.unwrap_or(defaults.eps_zero),
        base: cfg.options.log_base.unwrap_or(defaults.base),
    };
    if opts.max_iters == 0 || opts.eps <= 0.0 || opts.eps_zero <= 0.0 {
        return Err(CliError::Validation(
            "options: max_iters, eps and eps_zero must be positive".into(),
        ));
    }
    Ok((sys, opts))
}

pub fn load_config(path: &Path) -> Result<(SystemConfig, MarkovSystem, EntropyOptions), CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let cfg = parse_config(&text)?;
    let (sys, opts) = build_system(&cfg)?;
    Ok((cfg, sys, opts))
}

/// Applies flag overrides; one warning per option set in both places.
pub fn resolve_options(
    cfg: &ConfigOptions,
    base: EntropyOptions,
    flags: &Flags,
) -> (EntropyOptions, Vec<String>) {
    let mut opts = base;
    let mut warnings = Vec::new();
    if let Some(iters) = flags.iters {
        if cfg.max_iters.is_some() {
            warnings.push(format!(
                "warning: --iters {iters} overrides config max_iters {}",
                opts.max_iters
            ));
        }
        opts.max_iters = iters;
    }
    if let Some(eps) = flags.eps {
        if cfg.eps.is_some() {
            warnings.push(format!(
                "warning: --eps {eps} overrides config eps {}",
                opts.eps
            ));
        }
        opts.eps = eps;
    }
    if let Some(base) = flags.log_base {
        if cfg.log_base.is_some() {
            warnings.push(format!(
                "warning: --log-base {base} overrides config log_base {}",
                opts.base
            ));
        }
        opts.base = base;
    }
    (opts, warnings)
}

fn generator_names(cfg: &SystemConfig, sys: &MarkovSystem) -> Vec<String> {
    if cfg.options.auto_inverse_transpose.unwrap_or(false) {
        let mut names = cfg.generators.clone();
        names.extend(cfg.generators.iter().map(|g| format!("{g}^-1")));
        names
    } else {
        let mut names = cfg.generators.clone();
        names.truncate(sys.k());
        names
    }
}

fn trace_csv(est: &EntropyEstimate, k: usize) -> String {
    let mut out = String::from("n");
    for j in 1..=k {
        write!(out, ",h_s{j}").unwrap();
    }
    out.push_str(",envelope\n");
    for row in &est.trace {
        write!(out, "{}", row.n).unwrap();
        for h in &row.h {
            write!(out, ",{h}").unwrap();
        }
        writeln!(out, ",{}", row.envelope).unwrap();
    }
    out
}

fn json_report(value: &serde_json::Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report serializes");
    text.push('\n');
    text
}

fn entropy_text(title: &str, est: &EntropyEstimate, names: &[String]) -> String {
    let mut out = String::new();
    writeln!(out, "{title} (log base {})", est.base).unwrap();
    if est.converged {
        writeln!(out, "converged after {} iterations", est.iterations_used).unwrap();
    } else {
        writeln!(
            out,
            "did not converge within {} iterations",
            est.iterations_used
        )
        .unwrap();
    }
    writeln!(out, "value = {:.13}", est.value).unwrap();
    if est.per_generator.len() > 1 {
        for (name, h) in names.iter().zip(est.per_generator.iter()) {
            writeln!(out, "  h({name}) = {h:.13}").unwrap();
        }
        writeln!(out, "  spread = {:.3e}", est.final_spread()).unwrap();
    }
    if let Some(series) = &est.series {
        if let Some(last) = series.last() {
            writeln!(
                out,
                "series bracket at N={}: [{:.13}, {:.13}] (width {:.3e})",
                last.n_terms,
                last.lower,
                last.upper,
                last.width()
            )
            .unwrap();
        }
    }
    out
}

fn entropy_output(
    command: &str,
    result: Result<EntropyEstimate, EntropyError>,
    names: &[String],
    flags: &Flags,
    mut warnings: Vec<String>,
) -> CommandOutput {
    let (est, exit_code) = match result {
        Ok(est) => (est, EXIT_OK),
        Err(EntropyError::NoConvergence(est)) => {
            warnings.push("warning: iteration budget exhausted before convergence".into());
            (*est, EXIT_NO_CONVERGENCE)
        }
        Err(other) => return CommandOutput::failure(other.to_string()),
    };
    let stdout = match flags.format {
        Format::Text => entropy_text(&format!("{command} entropy"), &est, names),
        Format::Csv => trace_csv(&est, est.per_generator.len()),
        Format::Json => json_report(&serde_json::json!({
            "command": command,
            "generators": names,
            "estimate": est,
        })),
    };
    CommandOutput {
        stdout,
        warnings,
        exit_code,
    }
}

fn analyze_output(
    cfg: &SystemConfig,
    sys: &MarkovSystem,
    flags: &Flags,
    warnings: Vec<String>,
) -> CommandOutput {
    let rel = sys.relation();
    let graph = build_graph_representation(sys);
    let sc = is_strongly_connected(&graph);
    let pivot: Option<Pivot> = find_pivot(&graph);
    let certificates: Vec<Certificate> = existence_certificate(sys);
    let rho = rel.spectral_radius(1e-12).ok();
    let period = rel.period().ok();
    let cls = sys.classification();

    let stdout = match flags.format {
        Format::Json => json_report(&serde_json::json!({
            "command": "analyze",
            "k": sys.k(),
            "alphabet_size": sys.alphabet_size(),
            "relation": {
                "irreducible": rel.is_irreducible(),
                "primitive": rel.is_primitive(),
                "period": period,
                "spectral_radius": rho,
            },
            "classification": cls,
            "graph": {
                "vertices": graph.vertex_count(),
                "edges": graph.edge_count(),
                "strongly_connected": sc,
                "pivot": pivot,
            },
            "certificates": certificates,
        })),
        _ => {
            let mut out = String::new();
            writeln!(out, "system: k = {}, |alphabet| = {}", sys.k(), sys.alphabet_size())
                .unwrap();
            writeln!(
                out,
                "relation K: irreducible = {}, primitive = {}, period = {}",
                rel.is_irreducible(),
                rel.is_primitive(),
                period.map_or("-".into(), |p| p.to_string()),
            )
            .unwrap();
            if let Some(rho) = rho {
                writeln!(out, "spectral radius = {rho:.12}").unwrap();
            }
            writeln!(
                out,
                "classification: hom = {}, full row = {}, constant row sum = {}, free-group rank = {}",
                cls.is_hom,
                cls.full_row_index.map_or("-".into(), |i| (i + 1).to_string()),
                cls.constant_row_sum.map_or("-".into(), |m| m.to_string()),
                cls.free_group_shape.map_or("-".into(), |r| r.to_string()),
            )
            .unwrap();
            writeln!(
                out,
                "graph representation: {} vertices, {} edges, strongly connected = {sc}",
                graph.vertex_count(),
                graph.edge_count()
            )
            .unwrap();
            match &pivot {
                Some(p) => writeln!(
                    out,
                    "pivot: ({}, s{}) reaching s{} at walk length {}",
                    cfg.alphabet[p.symbol],
                    p.generator + 1,
                    p.target_generator + 1,
                    p.walk_length
                )
                .unwrap(),
                None => writeln!(out, "pivot: none found").unwrap(),
            }
            writeln!(out, "certificates ({}):", certificates.len()).unwrap();
            for c in &certificates {
                let facts: Vec<String> =
                    c.evidence.iter().map(|(k, v)| format!("{k}={v}")).collect();
                writeln!(out, "  {} [{}]", c.kind.name(), facts.join(", ")).unwrap();
            }
            out
        }
    };
    CommandOutput {
        stdout,
        warnings,
        exit_code: EXIT_OK,
    }
}

fn certify_output(sys: &MarkovSystem, flags: &Flags, warnings: Vec<String>) -> CommandOutput {
    let certificates = existence_certificate(sys);
    let exit_code = if certificates.is_empty() {
        EXIT_NO_CERTIFICATE
    } else {
        EXIT_OK
    };
    let stdout = match flags.format {
        Format::Json => json_report(&serde_json::json!({
            "command": "certify",
            "certificates": certificates,
        })),
        _ => {
            let mut out = String::new();
            if certificates.is_empty() {
                writeln!(out, "no certificate applies (existence is not ruled out)").unwrap();
            }
            for c in &certificates {
                let facts: Vec<String> =
                    c.evidence.iter().map(|(k, v)| format!("{k}={v}")).collect();
                writeln!(out, "{} [{}]", c.kind.name(), facts.join(", ")).unwrap();
            }
            out
        }
    };
    CommandOutput {
        stdout,
        warnings,
        exit_code,
    }
}

fn oracle_output(sys: &MarkovSystem, flags: &Flags, warnings: Vec<String>) -> CommandOutput {
    let depth = flags.depth.unwrap_or(3);
    let exact = match exact_ball_counts(sys, depth) {
        Ok(t) => t,
        Err(e) => return CommandOutput::failure(e.to_string()),
    };
    let brute = match brute_force_counts(sys, depth) {
        Ok(t) => t,
        Err(e) => return CommandOutput::failure(e.to_string()),
    };
    let mismatches = exact.diff(&brute);
    let pass = mismatches.is_empty();

    let stdout = match flags.format {
        Format::Json => {
            let stems: Vec<serde_json::Value> = (0..=depth)
                .map(|n| {
                    let per_gen: Vec<Vec<String>> = (0..sys.k())
                        .map(|j| {
                            exact
                                .stem_counts(n, j)
                                .iter()
                                .map(|c| c.to_string())
                                .collect()
                        })
                        .collect();
                    serde_json::json!({
                        "n": n,
                        "stem_counts": per_gen,
                        "ball_total": exact.ball_total(n).map(|b| b.to_string()),
                    })
                })
                .collect();
            json_report(&serde_json::json!({
                "command": "oracle",
                "depth": depth,
                "pass": pass,
                "mismatches": mismatches,
                "tables": stems,
            }))
        }
        _ => {
            let mut out = String::new();
            writeln!(out, "oracle comparison to depth {depth}").unwrap();
            for n in 0..=depth {
                for j in 0..sys.k() {
                    let counts: Vec<String> = exact
                        .stem_counts(n, j)
                        .iter()
                        .map(|c| c.to_string())
                        .collect();
                    writeln!(out, "  p^(s{})_{n} = ({})", j + 1, counts.join(",")).unwrap();
                }
                if let Some(b) = exact.ball_total(n) {
                    writeln!(out, "  ball total p_{n} = {b}").unwrap();
                }
            }
            for m in &mismatches {
                writeln!(out, "MISMATCH {m}").unwrap();
            }
            writeln!(out, "{}", if pass { "PASS" } else { "FAIL" }).unwrap();
            out
        }
    };
    CommandOutput {
        stdout,
        warnings,
        exit_code: if pass { EXIT_OK } else { EXIT_INVALID },
    }
}

pub fn run(command: Command, config_path: &Path, flags: &Flags) -> CommandOutput {
    let (cfg, sys, base_opts) = match load_config(config_path) {
        Ok(parts) => parts,
        Err(e) => return CommandOutput::failure(e.to_string()),
    };
    let (opts, warnings) = resolve_options(&cfg.options, base_opts, flags);
    let names = generator_names(&cfg, &sys);

    match command {
        Command::Analyze => analyze_output(&cfg, &sys, flags, warnings),
        Command::Stem => entropy_output("stem", stem_entropy(&sys, &opts), &names, flags, warnings),
        Command::Top => entropy_output(
            "top",
            topological_entropy_cayley(&sys, &opts),
            &names,
            flags,
            warnings,
        ),
        Command::Fulltree => entropy_output(
            "fulltree",
            fulltree_entropy(sys.transitions(), &opts),
            &names,
            flags,
            warnings,
        ),
        Command::Oracle => oracle_output(&sys, flags, warnings),
        Command::Certify => certify_output(&sys, flags, warnings),
    }
}

/// Runs the command over every `.json` file in a directory, in file-name
/// order; the exit code is the worst individual code.
pub fn run_batch(command: Command, dir: &Path, flags: &Flags) -> CommandOutput {
    let entries = match std::fs::read_dir(dir) {
        Ok(entries) => entries,
        Err(e) => {
            return CommandOutput::failure(format!("cannot read {}: {e}", dir.display()));
        }
    };
    let mut paths: Vec<_> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "json"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return CommandOutput::failure(format!("no .json configs in {}", dir.display()));
    }

    let mut stdout = String::new();
    let mut warnings = Vec::new();
    let mut exit_code = EXIT_OK;
    for path in &paths {
        let name = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        let out = run(command, path, flags);
        writeln!(stdout, "== {name} ==").unwrap();
        stdout.push_str(&out.stdout);
        warnings.extend(out.warnings.into_iter().map(|w| format!("{name}: {w}")));
        exit_code = exit_code.max(out.exit_code);
    }
    CommandOutput {
        stdout,
        warnings,
        exit_code,
    }
}
