//! Command line front end and JSON run configuration.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::Value;

use crate::covers::{Condition, Partition};
use crate::error::{Error, Result};
use crate::geometry::{build_system, parse_params, Anchor, Param, SystemOptions};
use crate::indexing::{FlagShape, Space};
use crate::multposet::{build_poset, export_hasse, table1, table1_csv, HasseFormat, ProblemSpec};
use crate::presets::{parse_isotropic, parse_partitions, preset};
use crate::solver::{solve, sweep, SolutionSet, TrackerConfig};

/// Largest `r` of the (2,1) table with independently known values.
pub const TABLE1_VERIFIED_MAX: usize = 11;

#[derive(Debug, Parser)]
#[command(name = "schubert", version, about = "Schubert problems by chain counting and homotopy continuation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Number of chains to the target, counted with multiplicity
    Deg(ProblemArgs),
    /// Number of chains to the target with an odd multiplicity
    Odd(ProblemArgs),
    /// deg and odd for Gr(3,7) with r conditions (2,1), as CSV
    Table1(Table1Args),
    /// Hasse diagram of the multiplicity poset
    Poset(PosetArgs),
    /// Polynomial system in local coordinates
    System(SolveArgs),
    /// Solve one instance by homotopy continuation
    Solve(SolveArgs),
    /// Solve many instances and tabulate real solution counts
    Sweep(SweepArgs),
    /// List the named problems
    Presets,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ProblemArgs {
    /// fl, gr, og, lg, a shorthand such as lg3, or a preset name
    #[arg(long)]
    pub space: Option<String>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Flag dimensions, e.g. 2,3
    #[arg(long)]
    pub d: Option<String>,
    /// Grassmannian condition repeated --copies times, e.g. 2,1
    #[arg(long)]
    pub mu: Option<String>,
    #[arg(long)]
    pub copies: Option<usize>,
    /// Flag: subspace dimensions; Gr: partitions separated by ';'
    #[arg(long)]
    pub conditions: Option<String>,
    /// Target cell; defaults to the top cell when the codimensions add up
    #[arg(long)]
    pub target: Option<String>,
    /// JSON run configuration
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct Table1Args {
    #[arg(long, default_value_t = TABLE1_VERIFIED_MAX)]
    pub rmax: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct PosetArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// dot or json
    #[arg(long, default_value = "dot")]
    pub format: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// Osculation points, e.g. 1,2,3 or 1/2,inf
    #[arg(long, allow_hyphen_values = true)]
    pub params: Option<String>,
    /// 0 or inf
    #[arg(long)]
    pub anchor: Option<String>,
    /// Allow non-simple Grassmannian conditions
    #[arg(long)]
    pub general: bool,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub tol_real: Option<f64>,
    #[arg(long)]
    pub tol_newton: Option<f64>,
    /// text or json
    #[arg(long, default_value = "text")]
    pub format: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub solve: SolveArgs,
    /// One parameter list per line
    #[arg(long)]
    pub params_file: Option<PathBuf>,
    /// Use every subset of these values of the right size
    #[arg(long, allow_hyphen_values = true)]
    pub subsets_of: Option<String>,
    /// Number of random parameter sets of distinct integers
    #[arg(long)]
    pub random: Option<usize>,
    /// Integer range for --random
    #[arg(long, default_value_t = 20)]
    pub range: i64,
}

/// Problem description read from a JSON file; command line flags take precedence.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// A space object, or a string naming a preset or shorthand
    pub space: Option<Value>,
    #[serde(default)]
    pub conditions: Vec<Value>,
    pub copies: Option<usize>,
    pub target: Option<String>,
    pub anchor: Option<String>,
    pub params: Option<Vec<Value>>,
    pub param_sets: Option<Vec<Vec<Value>>>,
    #[serde(default)]
    pub general: bool,
    pub seed: Option<u64>,
    pub tracker: Option<TrackerConfig>,
}

impl RunConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("config: {e}")))
    }
}

/// Everything needed to run a command, after merging presets, config and flags.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub spec: ProblemSpec,
    pub params: Vec<Param>,
    pub param_sets: Vec<Vec<Param>>,
    pub options: SystemOptions,
    pub tracker: TrackerConfig,
}

fn value_text(v: &Value) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        other => Err(Error::Parse(format!("expected a number or string, got {other}"))),
    }
}

fn values_to_params(values: &[Value]) -> Result<Vec<Param>> {
    values.iter().map(|v| value_text(v)?.parse()).collect()
}

fn parse_usize_list(text: &str) -> Result<Vec<usize>> {
    text.split(|c: char| c == ',' || c == ';' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| Error::Parse(format!("not a dimension: {t:?}"))))
        .collect()
}

fn condition_from_text(space: &Space, text: &str) -> Result<Condition> {
    let t = text.trim();
    match space {
        Space::Flag { .. } => {
            let dim: usize = t.parse().map_err(|_| Error::Parse(format!("not a subspace dimension: {t:?}")))?;
            Ok(Condition::Stage(space.flag_shape()?.stage_of_dim(dim)?))
        }
        Space::Grassmannian { .. } => Ok(Condition::Schur(Partition::parse(t)?)),
        Space::Orthogonal { .. } | Space::Lagrangian { .. } => match t {
            "simple" | "s" | "1" => Ok(Condition::Simple),
            _ => Err(Error::Parse(format!("isotropic conditions are simple, got {t:?}"))),
        },
    }
}

fn conditions_from_text(space: &Space, text: &str) -> Result<Vec<Condition>> {
    match space {
        Space::Grassmannian { .. } => Ok(parse_partitions(text)?.into_iter().map(Condition::Schur).collect()),
        _ => text
            .split(|c: char| c == ',' || c == ';' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| condition_from_text(space, t))
            .collect(),
    }
}

/// Space named by `--space` together with `--k`, `--n` and `--d`.
pub fn space_from_flags(kind: &str, a: &ProblemArgs) -> Result<Space> {
    let kind = kind.to_ascii_lowercase();
    if let Ok(p) = preset(&kind) {
        return Ok(p.spec.space);
    }
    if let Some(space) = parse_isotropic(&kind) {
        space.validate()?;
        return Ok(space);
    }
    let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| Error::Spec(format!("--space {kind} needs --{flag}")));
    let space = match kind.as_str() {
        "fl" | "flag" => {
            let n = need(a.n, "n")?;
            let d = match &a.d {
                Some(text) => parse_usize_list(text)?,
                None => (1..n).collect(),
            };
            FlagShape::new(n, d.clone())?;
            Space::Flag { n, d }
        }
        "gr" | "grassmannian" => Space::Grassmannian { k: need(a.k, "k")?, n: need(a.n, "n")? },
        "og" => Space::Orthogonal { n: need(a.n, "n")? },
        "lg" => Space::Lagrangian { n: need(a.n, "n")? },
        _ => return Err(Error::Spec(format!("unknown space {kind:?}"))),
    };
    space.validate()?;
    Ok(space)
}

/// Merges a preset or config file with command line flags.
pub fn resolve(args: &ProblemArgs, params: Option<&str>, anchor: Option<&str>, general: bool, seed: Option<u64>) -> Result<Resolved> {
    let config = match &args.config {
        Some(path) => RunConfig::from_path(path)?,
        None => RunConfig::default(),
    };
    let mut preset_params = Vec::new();
    let mut preset_anchor = None;
    let mut preset_spec = None;
    let space_name = args.space.clone().or_else(|| match &config.space {
        Some(Value::String(s)) => Some(s.clone()),
        _ => None,
    });
    let space = match (&space_name, &config.space) {
        (Some(name), _) => {
            let lower = name.to_ascii_lowercase();
            if let Ok(p) = preset(&lower) {
                preset_params = p.params;
                preset_anchor = p.anchor;
                let space = p.spec.space.clone();
                preset_spec = Some(p.spec);
                space
            } else if let Some(space) = parse_isotropic(&lower) {
                space.validate()?;
                space
            } else {
                space_from_flags(&lower, args)?
            }
        }
        (None, Some(value)) => {
            let space: Space = serde_json::from_value(value.clone()).map_err(|e| Error::Parse(format!("config space: {e}")))?;
            space.validate()?;
            space
        }
        (None, None) => return Err(Error::Spec("no space given; use --space or --config".into())),
    };

    let copies = args.copies.or(config.copies);
    let explicit = if let Some(text) = &args.conditions {
        Some(conditions_from_text(&space, text)?)
    } else if let Some(mu) = &args.mu {
        let c = Condition::Schur(Partition::parse(mu)?);
        Some(vec![c; copies.ok_or_else(|| Error::Spec("--mu needs --copies".into()))?])
    } else if !config.conditions.is_empty() {
        let list = config.conditions.iter().map(|v| condition_from_text(&space, &value_text(v)?)).collect::<Result<Vec<_>>>()?;
        Some(match copies {
            Some(c) if list.len() == 1 => vec![list[0].clone(); c],
            _ => list,
        })
    } else {
        None
    };
    let mut spec = match (explicit, preset_spec) {
        (Some(conditions), _) => ProblemSpec::new(space.clone(), conditions),
        (None, Some(spec)) => spec,
        (None, None) => match &space {
            Space::Orthogonal { .. } | Space::Lagrangian { .. } => {
                let count = match copies {
                    Some(c) => c,
                    None => space.dimension()?,
                };
                ProblemSpec::repeated(space.clone(), Condition::Simple, count)
            }
            _ => return Err(Error::Spec("no conditions given; use --conditions or --mu with --copies".into())),
        },
    };
    if let Some(t) = args.target.as_ref().or(config.target.as_ref()) {
        spec.target = Some(space.parse_index(t)?);
    }
    spec.validate()?;

    let params = match (params, &config.params) {
        (Some(text), _) => parse_params(text)?,
        (None, Some(values)) => values_to_params(values)?,
        (None, None) => preset_params,
    };
    let param_sets = match &config.param_sets {
        Some(sets) => sets.iter().map(|s| values_to_params(s)).collect::<Result<_>>()?,
        None => Vec::new(),
    };
    let anchor = match anchor.map(str::to_string).or(config.anchor.clone()) {
        Some(text) => Some(text.parse::<Anchor>()?),
        None => preset_anchor,
    };
    let mut tracker = config.tracker.clone().unwrap_or_default();
    let seed = seed.or(config.seed);
    if let Some(s) = seed {
        tracker.seed = s;
    }
    let options = SystemOptions { anchor, allow_general: general || config.general, seed: seed.unwrap_or(1) };
    Ok(Resolved { spec, params, param_sets, options, tracker })
}

fn emit(text: &str, out: Option<&PathBuf>, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Error::Parse(format!("{}: {e}", path.display()))),
        None => stdout.write_all(text.as_bytes()).map_err(|e| Error::Parse(e.to_string())),
    }
}

fn apply_tolerances(tracker: &mut TrackerConfig, a: &SolveArgs) -> Result<()> {
    if let Some(t) = a.tol_real {
        tracker.reality_tol = t;
    }
    if let Some(t) = a.tol_newton {
        tracker.newton_tol = t;
    }
    tracker.validate()
}

fn format_complex(z: num_complex::Complex64, real: bool) -> String {
    if real {
        format!("{:.12e}", z.re)
    } else {
        format!("{:.12e}{:+.12e}i", z.re, z.im)
    }
}

/// Plain text report of a solve run.
pub fn solve_report(r: &Resolved, names: &[String], set: &SolutionSet, expected: &str) -> String {
    let params: Vec<String> = r.params.iter().map(Param::to_string).collect();
    let mut out = format!("space {}\nparams {}\n", r.spec.space, params.join(","));
    out += &format!(
        "paths {} finite {} at_infinity {} failed {} duplicates {} spurious {}\n",
        set.paths,
        set.total() + set.duplicates + set.spurious,
        set.at_infinity,
        set.failed,
        set.duplicates,
        set.spurious
    );
    out += &format!("solutions {} expected {} real {} pairs {}\n", set.total(), expected, set.n_real, set.n_pairs);
    out += &format!("max_residual {:.1e}\n", set.max_residual());
    for w in &set.warnings {
        out += &format!("warning {w}\n");
    }
    out += &format!("# {}\n", names.join(" "));
    for s in &set.solutions {
        let coords: Vec<String> = s.coords.iter().map(|&z| format_complex(z, s.is_real)).collect();
        out += &format!("{} {}\n", if s.is_real { "real" } else { "complex" }, coords.join(" "));
    }
    out
}

fn subsets(values: &[Param], k: usize) -> Vec<Vec<Param>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > values.len() {
        return out;
    }
    loop {
        out.push(idx.iter().map(|&i| values[i].clone()).collect());
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + values.len() - k) else { break };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
    out
}

fn random_sets(count: usize, size: usize, range: i64, seed: u64) -> Result<Vec<Vec<Param>>> {
    if range < 1 || (2 * range + 1) < size as i64 {
        return Err(Error::Parameter(format!("range {range} too small for {size} distinct values")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..count)
        .map(|_| {
            let mut set: Vec<i64> = Vec::with_capacity(size);
            while set.len() < size {
                let v = rng.random_range(-range..=range);
                if v != 0 && !set.contains(&v) {
                    set.push(v);
                }
            }
            set.sort_unstable();
            set.into_iter().map(Param::int).collect()
        })
        .collect())
}

fn read_params_file(path: &Path) -> Result<Vec<Vec<Param>>> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| parse_params(&l.split_whitespace().collect::<Vec<_>>().join(",").replace(",,", ",")))
        .collect()
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Solver(_) | Error::Degenerate(_) => 2,
        _ => 1,
    }
}

fn execute(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let io = |e: std::io::Error| Error::Parse(e.to_string());
    match cli.command {
        Command::Deg(a) => {
            let r = resolve(&a, None, None, false, None)?;
            writeln!(stdout, "{}", build_poset(&r.spec)?.deg_target()).map_err(io)?;
        }
        Command::Odd(a) => {
            let r = resolve(&a, None, None, false, None)?;
            writeln!(stdout, "{}", build_poset(&r.spec)?.odd_target()).map_err(io)?;
        }
        Command::Table1(a) => {
            if a.rmax < 2 {
                return Err(Error::Parameter("--rmax must be at least 2".into()));
            }
            if a.rmax > TABLE1_VERIFIED_MAX {
                writeln!(stderr, "warning: rows with r > {TABLE1_VERIFIED_MAX} are unverified").map_err(io)?;
            }
            emit(&table1_csv(&table1(a.rmax)?), a.out.as_ref(), stdout)?;
        }
        Command::Poset(a) => {
            let format: HasseFormat = a.format.parse()?;
            let r = resolve(&a.problem, None, None, false, None)?;
            let mut text = export_hasse(&build_poset(&r.spec)?, format);
            if !text.ends_with('\n') {
                text.push('\n');
            }
            emit(&text, a.out.as_ref(), stdout)?;
        }
        Command::System(a) => {
            let r = resolve(&a.problem, a.params.as_deref(), a.anchor.as_deref(), a.general, a.seed)?;
            let sys = build_system(&r.spec, &r.params, &r.options)?;
            emit(&sys.render(), a.out.as_ref(), stdout)?;
        }
        Command::Solve(a) => {
            if !matches!(a.format.as_str(), "text" | "json") {
                return Err(Error::Format(a.format.clone()));
            }
            let mut r = resolve(&a.problem, a.params.as_deref(), a.anchor.as_deref(), a.general, a.seed)?;
            apply_tolerances(&mut r.tracker, &a)?;
            let expected = build_poset(&r.spec)?.deg_target().to_string();
            let sys = build_system(&r.spec, &r.params, &r.options)?;
            let set = solve(&sys, &r.tracker)?;
            let text = if a.format == "json" {
                let v = serde_json::json!({
                    "space": r.spec.space,
                    "params": r.params.iter().map(Param::to_string).collect::<Vec<_>>(),
                    "variables": sys.names,
                    "expected": expected,
                    "result": set.to_json(),
                });
                serde_json::to_string_pretty(&v).map_err(|e| Error::Parse(e.to_string()))? + "\n"
            } else {
                solve_report(&r, &sys.names, &set, &expected)
            };
            emit(&text, a.out.as_ref(), stdout)?;
            if set.total().to_string() != expected {
                writeln!(stderr, "found {} solutions, expected {expected}", set.total()).map_err(io)?;
                return Ok(2);
            }
        }
        Command::Sweep(a) => {
            let s = &a.solve;
            let mut r = resolve(&s.problem, s.params.as_deref(), s.anchor.as_deref(), s.general, s.seed)?;
            apply_tolerances(&mut r.tracker, s)?;
            let size = r.spec.conditions.len();
            let mut sets = r.param_sets.clone();
            if let Some(path) = &a.params_file {
                sets.extend(read_params_file(path)?);
            }
            if let Some(values) = &a.subsets_of {
                sets.extend(subsets(&parse_params(values)?, size));
            }
            if let Some(count) = a.random {
                sets.extend(random_sets(count, size, a.range, r.tracker.seed)?);
            }
            if sets.is_empty() {
                return Err(Error::Parameter("no parameter sets; use --params-file, --subsets-of or --random".into()));
            }
            let report = sweep(&r.spec, &sets, &r.options, &r.tracker)?;
            emit(&report.to_csv(), s.out.as_ref(), stdout)?;
            let range = match (report.min_real, report.max_real) {
                (Some(lo), Some(hi)) => format!("{lo}..{hi}"),
                _ => "none".into(),
            };
            writeln!(stderr, "rows {} mismatches {} real {range}", report.rows.len(), report.mismatches()).map_err(io)?;
            if report.mismatches() > 0 {
                return Ok(2);
            }
        }
        Command::Presets => {
            for name in crate::presets::PRESET_NAMES {
                let p = preset(name)?;
                writeln!(stdout, "{name:8} {}", p.description).map_err(io)?;
            }
        }
    }
    Ok(0)
}

/// Runs the command line; returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}
