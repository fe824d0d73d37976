//! Command-line front end for `vlattice`.
//!
//! Every subcommand produces a [`RunReport`]: JSON on stdout, a one-line
//! summary on stderr. Exit code 0 is clean, 1 means a law violation or a
//! failed certificate, 2 means the input was unusable.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use vlattice::algebra::{check_positive_multiplication, family_alpha, poison_verdict, wickstead_family};
use vlattice::certify::{certify_meet, transfer_check};
use vlattice::error::Error;
use vlattice::operator::{op_meet, operator_pnorm, Exponent, RegularOperator};
use vlattice::projection::search::{feasibility_search, Budget, SearchVerdict};
use vlattice::projection::{
    acts_freely, analyze, block_projection, generate_group, group_average, orbit_sizes, parse_cycles,
    recover_partition, stochastic_normalize, structure_report, sweep, Family, Partition, Permutation,
};
use vlattice::scalar::{format_scalar, parse_scalar, reciprocal_of_integer, to_f64, Scalar};

pub const EXIT_CLEAN: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "vlattice", version, about = "Exact analysis of positive projections on finite vector lattices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Positivity, idempotence, diagonal and the constant-diagonal law.
    Analyze {
        #[arg(long)]
        op: PathBuf,
        #[arg(long)]
        stochastic_normalize: bool,
        #[arg(long)]
        structure: bool,
    },
    /// Operator meet of two positive operators.
    Meet {
        #[arg(long)]
        lhs: PathBuf,
        #[arg(long)]
        rhs: PathBuf,
        /// Check every column against the Riesz-Kantorovich LP.
        #[arg(long)]
        certify: bool,
    },
    /// Averaging projection of a permutation group given by generators.
    Group {
        #[arg(long)]
        n: usize,
        /// Cycle notation, e.g. "(1 2 3)(4 5)"; repeat or separate with ';'.
        #[arg(long, required = true)]
        gens: Vec<String>,
    },
    /// Block-averaging projection of a partition such as "1,3;2,4".
    Blocks {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        partition: String,
    },
    /// Block partition of a contractive positive lp projection.
    Recover {
        #[arg(long)]
        op: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        p: String,
    },
    /// Seeded instances of a generator family, each analyzed.
    Sweep(SweepArgs),
    /// Floating-point search for a nonnegative idempotent with diagonal alpha.
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        alpha: String,
        #[arg(long, default_value_t = Budget::default().restarts)]
        restarts: usize,
        #[arg(long, default_value_t = Budget::default().iterations)]
        iters: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Certificate that id ∧ T = 0 on the range of E.
    Transfer {
        #[arg(long)]
        e: PathBuf,
        #[arg(long)]
        t: PathBuf,
    },
    /// The two-dimensional algebra with cone {0 <= x, beta x <= y <= x}.
    Family {
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
        #[arg(long)]
        verdict: bool,
    },
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// block, group, conjugated-block, direct-sum, rank-one or all
    #[arg(long)]
    family: String,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Value,
    pub results: Value,
    pub violations: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub exit_code: i32,
}

impl RunReport {
    fn new(command: &str, inputs: Value) -> Self {
        RunReport {
            command: command.to_string(),
            inputs,
            results: Value::Null,
            violations: Vec::new(),
            error: None,
            exit_code: EXIT_CLEAN,
        }
    }

    fn finish(mut self, outcome: Result<Value, Error>) -> Self {
        match outcome {
            Ok(results) => {
                self.results = results;
                self.exit_code = if self.violations.is_empty() { EXIT_CLEAN } else { EXIT_VIOLATION };
            }
            Err(Error::TheoremViolation(why)) => {
                self.violations.push(format!("THEOREM_VIOLATION: {why}"));
                self.exit_code = EXIT_VIOLATION;
            }
            Err(e) => {
                self.error = Some(e.to_string());
                self.exit_code = EXIT_INPUT;
            }
        }
        self
    }

    /// Single-line human summary.
    pub fn summary(&self) -> String {
        match (&self.error, self.violations.len()) {
            (Some(e), _) => format!("{}: input error: {e}", self.command),
            (None, 0) => format!("{}: ok", self.command),
            (None, k) => format!("{}: {k} violation(s); first: {}", self.command, self.violations[0]),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn input_error(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

/// Reads an operator from a file. Accepts `{"space", "matrix"}`, a bare
/// matrix (standard cone), `{"matrix"}` alone, or a run report whose
/// `results.operator` holds one.
pub fn load_operator(path: &Path) -> Result<RegularOperator, Error> {
    let text = fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    operator_from_value(value).map_err(|e| match e {
        Error::Parse(msg) => input_error(format!("{}: {msg}", path.display())),
        other => other,
    })
}

fn operator_from_value(value: Value) -> Result<RegularOperator, Error> {
    let value = match value {
        Value::Object(mut map) if map.contains_key("results") => {
            map.remove("results").and_then(|mut r| r.get_mut("operator").map(Value::take)).unwrap_or(Value::Null)
        }
        other => other,
    };
    let value = match value {
        Value::Array(_) => json!({ "matrix": value }),
        other => other,
    };
    if value.get("matrix").is_some() && value.get("space").is_none() {
        let rows: Vec<Vec<Value>> =
            serde_json::from_value(value["matrix"].clone()).map_err(|e| input_error(e.to_string()))?;
        let n = rows.len();
        let space = json!({ "dim": n, "basis": identity_json(n) });
        return operator_from_value(json!({ "space": space, "matrix": value["matrix"].clone() }));
    }
    serde_json::from_value(value).map_err(|e| input_error(e.to_string()))
}

fn identity_json(n: usize) -> Value {
    Value::Array((0..n).map(|i| Value::Array((0..n).map(|j| json!(i32::from(i == j))).collect())).collect())
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn parse_partition(n: usize, text: &str) -> Result<Partition, Error> {
    let p = Partition::parse(text)?;
    if p.dim() != n {
        return Err(Error::BadPartition(format!("partition covers {} points, expected {n}", p.dim())));
    }
    Ok(p)
}

fn parse_generators(n: usize, specs: &[String]) -> Result<Vec<Permutation>, Error> {
    specs
        .iter()
        .flat_map(|s| s.split(';'))
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_cycles(n, s))
        .collect()
}

fn projection_payload(op: &RegularOperator, report: &mut RunReport) -> Value {
    let analysis = analyze(op);
    report.violations.extend(analysis.violations.iter().map(|v| v.to_string()));
    json!({ "operator": to_value(op), "analysis": to_value(&analysis) })
}

fn run_analyze(op: &Path, normalize: bool, structure: bool, report: &mut RunReport) -> Result<Value, Error> {
    let p = load_operator(op)?;
    let analysis = analyze(&p);
    report.violations.extend(analysis.violations.iter().map(|v| v.to_string()));
    let mut out = json!({ "analysis": to_value(&analysis) });
    let mut markov = None;
    if normalize || structure {
        match stochastic_normalize(&p) {
            Ok(n) => {
                out["normalized"] = json!({
                    "support": n.support.iter().map(|i| i + 1).collect::<Vec<_>>(),
                    "q": to_value(&n.q),
                });
                markov = Some(n.q);
            }
            Err(e) => out["normalized"] = json!({ "skipped": e.to_string() }),
        }
    }
    if structure {
        let ones = vec![Scalar::from_integer(1.into()); p.dim()];
        let target = if p.space().is_standard() && p.matrix().mul_vec(&ones) == ones { Some(p.clone()) } else { markov };
        out["structure"] = match target.map(|q| structure_report(&q)) {
            Some(Ok(s)) => {
                report.violations.extend(s.violations.iter().map(|v| format!("STRUCTURE_BROKEN: {v}")));
                to_value(&s)
            }
            Some(Err(e)) => json!({ "skipped": e.to_string() }),
            None => json!({ "skipped": "no Markov projection to inspect" }),
        };
    }
    Ok(out)
}

fn run_meet(lhs: &Path, rhs: &Path, certify: bool, report: &mut RunReport) -> Result<Value, Error> {
    let s = load_operator(lhs)?;
    let t = load_operator(rhs)?;
    let meet = op_meet(&s, &t)?;
    let mut out = json!({ "meet": to_value(&meet) });
    if certify {
        let mut certs = Vec::new();
        for j in 0..meet.dim() {
            let g = meet.space().cone().generator(j);
            let (value, cert) = certify_meet(&s, &t, &g)?;
            if !cert.holds || value != meet.apply(&g)? {
                report.violations.push(format!("CERTIFICATE_FAILED: generator {}", j + 1));
            }
            certs.push(json!({ "generator": j + 1, "certificate": to_value(&cert) }));
        }
        out["certificates"] = Value::Array(certs);
    }
    Ok(out)
}

fn run_group(n: usize, gens: &[String], report: &mut RunReport) -> Result<Value, Error> {
    let gens = parse_generators(n, gens)?;
    let order = generate_group(n, &gens)?.len();
    let p = group_average(n, &gens)?;
    let mut out = projection_payload(&p, report);
    out["group_order"] = json!(order);
    out["orbit_sizes"] = json!(orbit_sizes(n, &gens)?);
    out["acts_freely"] = json!(acts_freely(n, &gens)?);
    Ok(out)
}

fn run_blocks(n: usize, partition: &str, report: &mut RunReport) -> Result<Value, Error> {
    let partition = parse_partition(n, partition)?;
    let p = block_projection(n, &partition)?;
    let mut out = projection_payload(&p, report);
    out["partition"] = to_value(&partition);
    Ok(out)
}

fn run_recover(op: &Path, p: &str) -> Result<Value, Error> {
    let exponent: Exponent = p.parse()?;
    let op = load_operator(op)?;
    let partition = recover_partition(&op, &exponent)?;
    let norm = operator_pnorm(&op, &exponent)?;
    Ok(json!({
        "partition": to_value(&partition),
        "partition_text": partition.to_string(),
        "norm": to_value(&norm),
    }))
}

fn run_sweep(args: &SweepArgs, report: &mut RunReport) -> Result<Value, Error> {
    let families: Vec<Family> =
        if args.family == "all" { Family::ALL.to_vec() } else { vec![args.family.parse()?] };
    let mut per_family = Vec::new();
    for family in families {
        let entries = sweep(family, args.n, args.count, args.seed)?;
        let mut alphas: Vec<String> = Vec::new();
        let mut instances = Vec::with_capacity(entries.len());
        for entry in &entries {
            let r = &entry.report;
            for v in &r.violations {
                report.violations.push(format!("{} seed {}: {v}", family.name(), entry.seed));
            }
            let alpha = r.alpha.as_ref().map(format_scalar);
            if let Some(a) = &alpha {
                if !alphas.contains(a) {
                    alphas.push(a.clone());
                }
            }
            instances.push(json!({
                "seed": entry.seed,
                "alpha": alpha,
                "rank": r.rank,
                "violations": to_value(&r.violations),
            }));
        }
        alphas.sort();
        per_family.push(json!({
            "family": family.name(),
            "count": entries.len(),
            "alphas": alphas,
            "instances": instances,
        }));
    }
    Ok(json!({ "families": per_family }))
}

/// `alpha = 1/m` with `m | n`.
fn alpha_permitted(n: usize, alpha: &Scalar) -> bool {
    reciprocal_of_integer(alpha).is_some_and(|m| m as usize <= n && n % m as usize == 0)
}

fn run_search(
    n: usize,
    alpha: &str,
    budget: Budget,
    seed: u64,
    report: &mut RunReport,
) -> Result<Value, Error> {
    let exact = parse_scalar(alpha)?;
    let outcome = feasibility_search(n, to_f64(&exact), budget, seed)?;
    let permitted = alpha_permitted(n, &exact);
    if outcome.verdict == SearchVerdict::ConstructionFound && !permitted {
        report.violations.push(format!("CONSTRUCTION_FOR_FORBIDDEN_ALPHA: n = {n}, alpha = {alpha}"));
    }
    let mut out = to_value(&outcome);
    out["alpha_permitted"] = json!(permitted);
    Ok(out)
}

fn run_transfer(e: &Path, t: &Path, report: &mut RunReport) -> Result<Value, Error> {
    let e = load_operator(e)?;
    let t = load_operator(t)?;
    let cert = transfer_check(&e, &t)?;
    if !cert.holds {
        report.violations.push("CERTIFICATE_FAILED: disjointness transfer".into());
    }
    Ok(json!({ "certificate": to_value(&cert) }))
}

fn run_family(beta: &str, verdict: bool) -> Result<Value, Error> {
    let beta = parse_scalar(beta)?;
    let algebra = wickstead_family(&beta)?;
    let alpha = family_alpha(&beta)?;
    let cone = algebra.space().cone();
    let mut out = json!({
        "beta": format_scalar(&beta),
        "alpha": format_scalar(&alpha),
        "algebra": to_value(&algebra),
        "generators": [to_value(&ScalarVec(cone.generator(0))), to_value(&ScalarVec(cone.generator(1)))],
        "positive_multiplication": check_positive_multiplication(&algebra),
    });
    if verdict {
        let one = Scalar::from_integer(1.into());
        let zero = Scalar::from_integer(0.into());
        let v = poison_verdict(&algebra, &[one.clone(), one.clone()], &[one, zero])?;
        out["verdict"] = to_value(&v);
    }
    Ok(out)
}

#[derive(Serialize)]
struct ScalarVec(#[serde(with = "vlattice::scalar::serde_rat::vec")] Vec<Scalar>);

fn describe(command: &Command) -> (&'static str, Value) {
    match command {
        Command::Analyze { op, stochastic_normalize, structure } => (
            "analyze",
            json!({ "op": op, "stochastic_normalize": stochastic_normalize, "structure": structure }),
        ),
        Command::Meet { lhs, rhs, certify } => ("meet", json!({ "lhs": lhs, "rhs": rhs, "certify": certify })),
        Command::Group { n, gens } => ("group", json!({ "n": n, "gens": gens })),
        Command::Blocks { n, partition } => ("blocks", json!({ "n": n, "partition": partition })),
        Command::Recover { op, p } => ("recover", json!({ "op": op, "p": p })),
        Command::Sweep(a) => {
            ("sweep", json!({ "family": a.family, "n": a.n, "count": a.count, "seed": a.seed }))
        }
        Command::Search { n, alpha, restarts, iters, seed } => (
            "search",
            json!({ "n": n, "alpha": alpha, "restarts": restarts, "iters": iters, "seed": seed }),
        ),
        Command::Transfer { e, t } => ("transfer", json!({ "e": e, "t": t })),
        Command::Family { beta, verdict } => ("family", json!({ "beta": beta, "verdict": verdict })),
    }
}

/// Executes a parsed command.
pub fn execute(command: &Command) -> RunReport {
    let (name, inputs) = describe(command);
    let mut report = RunReport::new(name, inputs);
    let outcome = match command {
        Command::Analyze { op, stochastic_normalize, structure } => {
            run_analyze(op, *stochastic_normalize, *structure, &mut report)
        }
        Command::Meet { lhs, rhs, certify } => run_meet(lhs, rhs, *certify, &mut report),
        Command::Group { n, gens } => run_group(*n, gens, &mut report),
        Command::Blocks { n, partition } => run_blocks(*n, partition, &mut report),
        Command::Recover { op, p } => run_recover(op, p),
        Command::Sweep(args) => run_sweep(args, &mut report),
        Command::Search { n, alpha, restarts, iters, seed } => {
            run_search(*n, alpha, Budget { restarts: *restarts, iterations: *iters }, *seed, &mut report)
        }
        Command::Transfer { e, t } => run_transfer(e, t, &mut report),
        Command::Family { beta, verdict } => run_family(beta, *verdict),
    };
    report.finish(outcome)
}

/// Parses `argv` (program name first) and executes it. Usage errors come
/// back as a report with exit code 2; `--help` and `--version` as `Err`
/// with the text clap would print.
pub fn run<I, T>(argv: I) -> Result<RunReport, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(argv) {
        Ok(cli) => Ok(execute(&cli.command)),
        Err(e) if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) => {
            Err(e)
        }
        Err(e) => {
            let mut report = RunReport::new("", Value::Null);
            report.error = Some(e.render().to_string().trim().to_string());
            report.exit_code = EXIT_INPUT;
            Ok(report)
        }
    }
}
