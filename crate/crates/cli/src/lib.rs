//! The `maxcsp` command line: argument parsing, file I/O and report rendering.
//!
//! Exit codes: 0 for success, a tractable verdict or a passed verification;
//! 2 for an APX-complete verdict or a failed verification; 1 for usage and
//! I/O errors.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use maxcsp_casegen::{generate_case1, generate_case2, search_case3, CaseItem, CaseReport, Continuation, Options};
use maxcsp_core::{format, ConstraintLanguage, Instance};
use maxcsp_hcolor::{build_list_hcoloring_instance, classify_digraph, Digraph, DigraphClassification, ListSpec};
use maxcsp_impls::{check_consequence, verify_catalog, verify_strict_implementation, ConsequenceCheck, StrictImplementation, VerifyReport};
use maxcsp_monge::{
    anti_monge_violation, decompose_01_amonge, find_amonge_permutation, AmongeResult, CheckMethod, MongeDecomposition,
    Quadruple, SquareMatrix,
};
use maxcsp_solver::{approx_solve, brute_force_opt, Solution};
use maxcsp_supermod::{classify_with_fixed_values, ClassificationReport, Verdict};

#[derive(Parser, Debug)]
#[command(name = "maxcsp", version, about = "Max CSP classification, a-Monge recognition and strict implementations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Classify a constraint language together with all fixed-value constraints.
    Classify {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Anti-Monge checks on a square matrix.
    Monge {
        #[command(subcommand)]
        action: MongeCommand,
    },
    /// Exhaustively verify a strict implementation, or the whole shipped catalog.
    VerifyImpl {
        #[arg(required_unless_present = "catalog", conflicts_with = "catalog")]
        file: Option<PathBuf>,
        #[arg(long)]
        catalog: bool,
        #[arg(long)]
        json: bool,
    },
    /// Re-run one of the computer-generated case analyses.
    Reproduce {
        case: Case,
        /// Worker threads; 0 uses all cores.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Record the outcome of every candidate.
        #[arg(long)]
        audit: bool,
        /// Domain size for case3 (2 to 4).
        #[arg(long, default_value_t = 4)]
        domain: usize,
        #[arg(long)]
        json: bool,
    },
    /// Solve a weighted instance.
    Solve {
        file: PathBuf,
        #[arg(long, value_enum)]
        method: Method,
        #[arg(long)]
        json: bool,
    },
    /// Digraphs as binary predicates.
    Hcolor {
        #[command(subcommand)]
        action: HcolorCommand,
    },
}

#[derive(Subcommand, Debug)]
pub enum MongeCommand {
    /// Test the matrix under its given row and column order.
    Check {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Search for a simultaneous row/column permutation making it a-Monge.
    Permute {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum HcolorCommand {
    /// Classify List H-coloring optimization for a digraph H.
    Classify {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Build the List H-coloring optimization instance for G into H.
    Instance {
        g: PathBuf,
        h: PathBuf,
        /// Lists, scores and arc weights.
        #[arg(long)]
        lists: Option<PathBuf>,
        /// Also solve the instance exhaustively.
        #[arg(long)]
        solve: bool,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Case {
    Case1,
    Case2,
    Case3,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Brute,
    Approx,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: format::FormatError },
    #[error("{0}")]
    Failed(String),
}

fn failed(e: impl std::fmt::Display) -> CliError {
    CliError::Failed(e.to_string())
}

/// Rendered output of one command.
pub struct Outcome {
    pub human: String,
    pub json: String,
    /// False for an APX-complete verdict or a failed verification.
    pub positive: bool,
}

impl Outcome {
    fn new<T: Serialize>(human: String, body: &T, positive: bool) -> Outcome {
        Outcome { human, json: format::render(body), positive }
    }
}

pub fn read_document<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
    format::parse(&text).map_err(|source| CliError::Parse { path: path.into(), source })
}

/// Parses `args`, runs the command and writes its report; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    let json = cli.command.json();
    match execute(&cli.command) {
        Ok(o) => {
            let text = if json { o.json } else { o.human };
            let _ = writeln!(out, "{}", text.trim_end());
            if o.positive {
                0
            } else {
                2
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

impl Command {
    fn json(&self) -> bool {
        match self {
            Command::Classify { json, .. }
            | Command::VerifyImpl { json, .. }
            | Command::Reproduce { json, .. }
            | Command::Solve { json, .. } => *json,
            Command::Monge { action: MongeCommand::Check { json, .. } | MongeCommand::Permute { json, .. } } => *json,
            Command::Hcolor { action: HcolorCommand::Classify { json, .. } | HcolorCommand::Instance { json, .. } } => {
                *json
            }
        }
    }
}

pub fn execute(cmd: &Command) -> Result<Outcome, CliError> {
    match cmd {
        Command::Classify { file, .. } => classify(&read_document(file)?),
        Command::Monge { action: MongeCommand::Check { file, .. } } => monge_check(&read_document(file)?),
        Command::Monge { action: MongeCommand::Permute { file, .. } } => monge_permute(&read_document(file)?),
        Command::VerifyImpl { file: Some(file), .. } => verify_impl(&read_document(file)?),
        Command::VerifyImpl { file: None, .. } => catalog(),
        Command::Reproduce { case, jobs, audit, domain, .. } => {
            let opts = Options { jobs: *jobs, audit: *audit };
            let report = match case {
                Case::Case1 => generate_case1(&opts),
                Case::Case2 => generate_case2(&opts),
                Case::Case3 => search_case3(*domain, &opts),
            }
            .map_err(failed)?;
            Ok(reproduce(&report))
        }
        Command::Solve { file, method, .. } => solve(&read_document(file)?, *method),
        Command::Hcolor { action: HcolorCommand::Classify { file, .. } } => hcolor_classify(&read_document(file)?),
        Command::Hcolor { action: HcolorCommand::Instance { g, h, lists, solve, .. } } => {
            let spec: HcolorLists = match lists {
                Some(p) => read_document(p)?,
                None => HcolorLists::default(),
            };
            hcolor_instance(&read_document(g)?, &read_document(h)?, &spec, *solve)
        }
    }
}

pub fn classify(lang: &ConstraintLanguage) -> Result<Outcome, CliError> {
    let r = classify_with_fixed_values(lang).map_err(failed)?;
    Ok(Outcome::new(classify_human(&r), &r, r.is_tractable()))
}

fn classify_human(r: &ClassificationReport) -> String {
    let mut s = String::new();
    match (&r.chain, &r.witness) {
        (Some(chain), _) => {
            let _ = writeln!(s, "tractable, chain {chain}");
            let _ = writeln!(s, "every predicate is supermodular on this chain; common a-Monge permutation of all binary slices");
        }
        (None, Some(w)) => {
            let _ = writeln!(s, "APX-complete, witness sub-domain {:?}", w.sub_domain);
            let _ = writeln!(s, "the restricted slices below share no a-Monge permutation:");
            for p in &w.slice_provenance {
                let _ = write!(s, "  {} free positions {:?}", p.predicate, p.free);
                if !p.fixed_positions.is_empty() {
                    let _ = write!(s, ", fixed {:?} = {:?}", p.fixed_positions, p.fixed_constants);
                }
                let _ = write!(s, ", slice {}", p.slice.to_rows_string());
                for st in &p.stripped {
                    let _ = write!(s, ", stripped all-ones {:?} {}", st.axis, st.index);
                }
                s.push('\n');
            }
        }
        (None, None) => s.push_str("no verdict\n"),
    }
    let _ = writeln!(s, "note: {}", r.note);
    s
}

#[derive(Serialize)]
struct MongeCheckBody {
    a_monge: bool,
    violation: Option<Quadruple>,
    /// For 0-1 matrices: the L/R structure, when a-Monge.
    decomposition: Option<MongeDecomposition>,
}

pub fn monge_check(m: &SquareMatrix) -> Result<Outcome, CliError> {
    let violation = anti_monge_violation(m, CheckMethod::Full);
    let decomposition = if violation.is_none() && m.is_01() { Some(decompose_01_amonge(m).map_err(failed)?) } else { None };
    let mut human = String::new();
    match &violation {
        None => {
            let _ = writeln!(human, "a-Monge under the given order");
        }
        Some(q) => {
            let _ = writeln!(
                human,
                "not a-Monge: rows {}, {} and columns {}, {} violate the quadrangle inequality",
                q.i, q.j, q.k, q.l
            );
        }
    }
    if let Some(d) = &decomposition {
        let _ = writeln!(human, "0-1 structure: {}", decomposition_text(d));
    }
    let body = MongeCheckBody { a_monge: violation.is_none(), violation, decomposition };
    Ok(Outcome::new(human, &body, body.a_monge))
}

fn decomposition_text(d: &MongeDecomposition) -> String {
    match d {
        MongeDecomposition::L { p, q } => format!("L^({p},{q})"),
        MongeDecomposition::R { s, t } => format!("R^({s},{t})"),
        MongeDecomposition::LplusR { p, q, s, t } => format!("L^({p},{q}) + R^({s},{t})"),
        MongeDecomposition::AllZero => "all zero".into(),
        MongeDecomposition::HasAllOnesLine { axis, index } => format!("all-ones {axis:?} {index}"),
        MongeDecomposition::NotAMonge { .. } => "not a-Monge".into(),
    }
}

pub fn monge_permute(m: &SquareMatrix) -> Result<Outcome, CliError> {
    let r = find_amonge_permutation(m).map_err(failed)?;
    let human = match &r {
        AmongeResult::Permutation { permutation } => format!("a-Monge under order {permutation}\n"),
        AmongeResult::BadWitness { indices } => {
            format!("no a-Monge permutation; the principal submatrix on {indices:?} already has none\n")
        }
    };
    let positive = matches!(r, AmongeResult::Permutation { .. });
    Ok(Outcome::new(human, &r, positive))
}

#[derive(Serialize)]
struct VerifyBody<'a> {
    source: Option<&'a str>,
    alpha: u32,
    report: VerifyReport,
    consequence: ConsequenceCheck,
}

pub fn verify_impl(si: &StrictImplementation) -> Result<Outcome, CliError> {
    let report = verify_strict_implementation(si).map_err(failed)?;
    let consequence = check_consequence(si).map_err(failed)?;
    let mut human = String::new();
    let name = si.source.as_deref().unwrap_or("implementation");
    if report.verified {
        let _ = writeln!(human, "{name}: verified strict {}-implementation ({} evaluations)", si.alpha, report.evaluations);
    } else if let Some(f) = &report.failure {
        let _ = writeln!(
            human,
            "{name}: NOT verified; at primary values {:?} the maximum is {}, expected {}",
            f.primary_values, f.achieved, f.expected
        );
    }
    let _ = writeln!(human, "consequence {}: {}", if consequence.holds { "holds" } else { "FAILS" }, consequence.detail);
    let positive = report.verified && consequence.holds;
    Ok(Outcome::new(human, &VerifyBody { source: si.source.as_deref(), alpha: si.alpha, report, consequence }, positive))
}

pub fn catalog() -> Result<Outcome, CliError> {
    let r = verify_catalog().map_err(failed)?;
    let mut human = format!("{}/{} verified\n{}/{} consequences hold\n", r.verified, r.total, r.consequences_hold, r.total);
    for i in r.items.iter().filter(|i| !i.verified || !i.consequence_holds) {
        let _ = writeln!(human, "  {}: verified {}, consequence {}: {}", i.source, i.verified, i.consequence_holds, i.detail);
    }
    Ok(Outcome::new(human, &r, r.all_ok()))
}

pub fn reproduce(r: &CaseReport) -> Outcome {
    let mut s = String::new();
    let domain: Vec<String> = (0..r.domain_size).map(|v| v.to_string()).collect();
    let kind = match r.case {
        1 => "classes",
        2 => "pair classes",
        _ => "triples",
    };
    let _ = write!(s, "case {} on {{{}}}: {} {kind}", r.case, domain.join(","), r.items.len());
    if let Some(c) = &r.comparison {
        let _ = write!(s, ", {}/{} match {}", c.matched, c.expected, c.reference);
        if !c.passed {
            let _ = write!(s, "; FAILED, expected {} classes", c.expected);
        }
    }
    s.push('\n');
    let _ = writeln!(s, "stages:");
    let width = r.stages.iter().map(|st| st.name.len()).max().unwrap_or(0);
    for st in &r.stages {
        let _ = writeln!(s, "  {:width$}  {:>8} -> {:>6}  (rejected {})", st.name, st.input, st.remaining, st.rejected);
    }
    let _ = writeln!(s, "items:");
    for (n, item) in r.items.iter().enumerate() {
        let _ = writeln!(s, "  {n:>3}  {}", item_text(item));
    }
    if let Some(c) = r.comparison.as_ref().filter(|c| !c.diff.is_empty()) {
        let _ = writeln!(s, "audit diff:");
        for line in &c.diff {
            let _ = writeln!(s, "  {line}");
        }
    }
    if let Some(p) = &r.provenance {
        let _ = writeln!(s, "provenance ({} candidates):", p.len());
        for e in p {
            let _ = writeln!(s, "  {}  {}", e.candidate, e.outcome);
        }
    }
    let _ = writeln!(s, "elapsed {} ms", r.timing.elapsed_ms);
    Outcome::new(s, r, r.passed())
}

fn item_text(item: &CaseItem) -> String {
    match item {
        CaseItem::Predicate { representative, orbit_size, reference, .. } => format!(
            "{}  orbit {orbit_size:>2}  {}",
            representative.to_rows_string(),
            reference.as_deref().unwrap_or("(no reference)")
        ),
        CaseItem::Pair { first, second, raw_members, continuation, .. } => {
            let how = match continuation {
                Continuation::Catalog { items, verified } => format!("{} (verified: {verified})", items.join(", ")),
                Continuation::Reduction { via, implemented, target_class, verified, .. } => format!(
                    "relabelled {via} implements {}{} (verified: {verified})",
                    implemented.to_rows_string(),
                    target_class.map(|c| format!(", class {c}")).unwrap_or_default()
                ),
                Continuation::None => "no continuation".into(),
            };
            format!("({first:>3}, {})  {raw_members:>2} raw  {how}", second.to_rows_string())
        }
        CaseItem::Triple { predicates } => {
            predicates.iter().map(|p| p.to_rows_string()).collect::<Vec<_>>().join("  ")
        }
    }
}

#[derive(Serialize)]
struct SolveBody {
    method: Method,
    cost: u64,
    total_weight: u64,
    /// `total_weight / domain_size^max_arity` as a reduced fraction, for the approximation.
    guarantee: Option<(u64, u64)>,
    assignment: BTreeMap<String, usize>,
}

pub fn solve(inst: &Instance, method: Method) -> Result<Outcome, CliError> {
    let s: Solution = match method {
        Method::Brute => brute_force_opt(inst),
        Method::Approx => approx_solve(inst),
    }
    .map_err(failed)?;
    let guarantee = (method == Method::Approx).then(|| {
        let den = (inst.domain_size() as u64).saturating_pow(inst.max_arity() as u32);
        let g = gcd(inst.total_weight(), den);
        (inst.total_weight() / g.max(1), den / g.max(1))
    });
    let mut human = match method {
        Method::Brute => format!("optimum {} of total weight {}\n", s.cost, inst.total_weight()),
        Method::Approx => format!("approximate value {} of total weight {}\n", s.cost, inst.total_weight()),
    };
    if let Some((n, d)) = guarantee {
        let _ = writeln!(human, "guaranteed at least {n}/{d}");
    }
    for (v, x) in &s.assignment.values {
        let _ = writeln!(human, "  {v} = {x}");
    }
    let body = SolveBody { method, cost: s.cost, total_weight: inst.total_weight(), guarantee, assignment: s.assignment.values };
    Ok(Outcome::new(human, &body, true))
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn hcolor_classify(h: &Digraph) -> Result<Outcome, CliError> {
    let c: DigraphClassification = classify_digraph(h).map_err(failed)?;
    let mut human = String::new();
    for st in &c.stripped {
        let _ = writeln!(human, "stripped all-ones {:?} {}", st.axis, st.index);
    }
    match (&c.ordering, &c.witness) {
        (Some(o), _) => {
            let _ = writeln!(human, "tractable, vertex order {o}");
        }
        (None, Some(w)) => {
            let _ = writeln!(human, "APX-complete, no a-Monge order on vertices {w:?}");
        }
        _ => {}
    }
    Ok(Outcome::new(human, &c, c.verdict == Verdict::Tractable))
}

/// Lists file for `hcolor instance`.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct HcolorLists {
    #[serde(default, deserialize_with = "maxcsp_hcolor::keyed::lists")]
    pub lists: BTreeMap<usize, std::collections::BTreeSet<usize>>,
    #[serde(default, deserialize_with = "maxcsp_hcolor::keyed::scores")]
    pub scores: BTreeMap<usize, BTreeMap<usize, u64>>,
    #[serde(default)]
    pub arc_weights: Option<Vec<u64>>,
}

#[derive(Serialize)]
struct HcolorInstanceBody {
    instance: Instance,
    solution: Option<Solution>,
}

pub fn hcolor_instance(g: &Digraph, h: &Digraph, spec: &HcolorLists, solve: bool) -> Result<Outcome, CliError> {
    let lists = ListSpec { lists: spec.lists.clone(), scores: spec.scores.clone() };
    let instance = build_list_hcoloring_instance(g, h, &lists, spec.arc_weights.as_deref()).map_err(failed)?;
    let solution = if solve { Some(brute_force_opt(&instance).map_err(failed)?) } else { None };
    let mut human = format::render(&instance);
    human.push('\n');
    if let Some(s) = &solution {
        let _ = writeln!(human, "optimum {} of total weight {}", s.cost, instance.total_weight());
        for (v, x) in &s.assignment.values {
            let _ = writeln!(human, "  {v} -> {x}");
        }
    }
    Ok(Outcome::new(human, &HcolorInstanceBody { instance, solution }, true))
}
