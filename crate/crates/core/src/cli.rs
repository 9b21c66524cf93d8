//! The `pinsk` command line.
//!
//! Every subcommand builds a [`Report`]: an ordered tree of exact values
//! rendered either as `key = value` lines or, with `--json`, as JSON.
//! Exit status is 0 on success, 1 for invalid input, 2 for a malformed
//! graph file or `--set`, 3 when a configured cap is exceeded and 4 when a
//! verdict fails.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::graph::{parse_graph_file, GraphFile, Multigraph, TerminalSet};
use crate::helper::{self, HelperOptions, DEFAULT_BOX_LIMIT};
use crate::omniscience::{
    int_omn_with, omn_with, partition_bound, OmniscienceOptions, DEFAULT_MAX_TERMINALS,
};
use crate::packing::{mu_f_with, mu_with, PackingOptions, DEFAULT_TREE_CAP};
use crate::protocol::{
    default_epsilon, extract_key, omniscience_lengths, packing_protocol, random_lco,
    verify_perfect_secrecy, write_scheme, KeyMap, LinearScheme, RandomLco, SecrecyReport,
    DEFAULT_BRUTE_FORCE_CAP, DEFAULT_SEED,
};
use crate::rational::{int, ratio, render, Rational};

pub const SCHEMA_VERSION: u64 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_CAP: i32 = 3;
pub const EXIT_VERDICT: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "pinsk", version, about = "Secret-key capacity and tree packing for pairwise independent networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Emit JSON instead of key-value lines.
    #[arg(long, global = true)]
    pub json: bool,
    /// Append wall-clock timing to the report.
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(flatten)]
    pub caps: Caps,
}

#[derive(Args, Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Largest terminal count for the exponential enumerations.
    #[arg(long = "cap-terminals", global = true, default_value_t = DEFAULT_MAX_TERMINALS)]
    pub terminals: usize,
    /// Largest number of Steiner trees to enumerate.
    #[arg(long = "cap-trees", global = true, default_value_t = DEFAULT_TREE_CAP)]
    pub trees: usize,
    /// Largest source length for exhaustive protocol verification.
    #[arg(long = "cap-bits", global = true, default_value_t = DEFAULT_BRUTE_FORCE_CAP)]
    pub bits: usize,
    /// Largest integer box enumerated by the helper bounds.
    #[arg(long = "cap-box", global = true, default_value_t = DEFAULT_BOX_LIMIT)]
    pub box_points: u128,
}

impl Default for Caps {
    fn default() -> Self {
        Self {
            terminals: DEFAULT_MAX_TERMINALS,
            trees: DEFAULT_TREE_CAP,
            bits: DEFAULT_BRUTE_FORCE_CAP,
            box_points: DEFAULT_BOX_LIMIT,
        }
    }
}

impl Caps {
    fn omniscience(&self) -> OmniscienceOptions {
        OmniscienceOptions { max_terminals: self.terminals, ..Default::default() }
    }

    fn packing(&self) -> PackingOptions {
        PackingOptions { tree_cap: self.trees, max_terminals: self.terminals }
    }

    fn helper(&self) -> HelperOptions {
        HelperOptions { box_limit: self.box_points, packing: self.packing() }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Omniscience rate, secret-key capacity and the partition bound.
    Capacity(GraphArgs),
    /// Integer and fractional Steiner tree packing of `G^(n)`.
    Packing {
        #[command(flatten)]
        input: GraphArgs,
        #[arg(long, default_value_t = 1)]
        n: u64,
        #[arg(long, value_enum, default_value_t = Mode::Both)]
        mode: Mode,
    },
    /// Build a linear key-agreement protocol and optionally verify it.
    Protocol {
        #[command(flatten)]
        input: GraphArgs,
        #[arg(long, default_value_t = 1)]
        n: u64,
        #[arg(long, value_enum, default_value_t = SchemeKind::Packing)]
        scheme: SchemeKind,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Seeds tried, counting up from `--seed`, for a random scheme.
        #[arg(long, default_value_t = 1)]
        retries: u64,
        /// Check recoverability and secrecy over every source realisation.
        #[arg(long)]
        verify: bool,
        /// Write the scheme and key map in text form.
        #[arg(long, value_name = "PATH")]
        scheme_out: Option<PathBuf>,
    },
    /// Single-helper analysis; the helper must be the last terminal.
    Helper(GraphArgs),
    /// Recompute the built-in three-helper network.
    ReproduceExample {
        /// Also pack `G^(n)` and compare the rate with the fractional optimum.
        #[arg(long)]
        n: Option<u64>,
        /// Also build and verify the packing protocol at `n = 1`.
        #[arg(long)]
        verify_protocol: bool,
    },
}

#[derive(Args, Debug, Clone)]
pub struct GraphArgs {
    #[arg(long, value_name = "PATH")]
    pub graph: PathBuf,
    /// Override the file's set, e.g. `1,3`.
    #[arg(long)]
    pub set: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Integer,
    Fractional,
    Both,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SchemeKind {
    Packing,
    Random,
}

/// An ordered report with an optional overall verdict.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    fields: Map<String, Value>,
    verdict: Option<bool>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        let mut fields = Map::new();
        fields.insert("schema_version".into(), json!(SCHEMA_VERSION));
        fields.insert("command".into(), json!(command));
        Self { fields, verdict: None }
    }

    pub fn insert(&mut self, key: &str, value: Value) {
        self.fields.insert(key.into(), value);
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.fields.get(key)
    }

    /// Looks up a dotted path such as `results.capacity`.
    pub fn lookup(&self, path: &str) -> Option<&Value> {
        let mut parts = path.split('.');
        let mut v = self.fields.get(parts.next()?)?;
        for part in parts {
            v = match v {
                Value::Object(map) => map.get(part)?,
                Value::Array(items) => items.get(part.parse::<usize>().ok()?)?,
                _ => return None,
            };
        }
        Some(v)
    }

    fn set_verdict(&mut self, passed: bool) {
        self.verdict = Some(passed);
        self.insert("verdict", json!(if passed { "pass" } else { "fail" }));
    }

    /// `false` only when a verdict was recorded and failed.
    pub fn passed(&self) -> bool {
        self.verdict != Some(false)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&Value::Object(self.fields.clone())).expect("values serialise") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.fields {
            flatten(k, v, &mut out);
        }
        out
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("none".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut String) {
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                flatten(&format!("{prefix}.{k}"), child, out);
            }
        }
        Value::Array(items) => match items.iter().map(scalar).collect::<Option<Vec<_>>>() {
            Some(parts) => out.push_str(&format!("{prefix} = [{}]\n", parts.join(", "))),
            None => {
                for (k, child) in items.iter().enumerate() {
                    flatten(&format!("{prefix}.{k}"), child, out);
                }
            }
        },
        _ => out.push_str(&format!("{prefix} = {}\n", scalar(v).expect("scalar"))),
    }
}

fn rat(q: &Rational) -> Value {
    Value::String(render(q))
}

fn rats(qs: &[Rational]) -> Value {
    Value::Array(qs.iter().map(rat).collect())
}

fn edge_list(g: &Multigraph) -> String {
    g.edges().map(|(i, j, e)| format!("{}-{}:{e}", i + 1, j + 1)).collect::<Vec<_>>().join(" ")
}

fn digest(file: &GraphFile) -> Value {
    json!({
        "m": file.graph.m(),
        "edges": file.graph.edge_count(),
        "set": file.set.to_string(),
    })
}

/// The three-helper network: user `t` on top, helpers `h1..h3` in the
/// middle and users `b1..b3` at the bottom, numbered `t = 1`, `h1..h3 =
/// 2..4`, `b1..b3 = 5..7`.
pub fn reference_network() -> GraphFile {
    let edges = [(0, 1), (0, 2), (0, 3), (4, 1), (4, 2), (5, 1), (5, 3), (6, 2), (6, 3)];
    let edges: Vec<(usize, usize, i64)> = edges.iter().map(|&(i, j)| (i, j, 1)).collect();
    GraphFile {
        graph: Multigraph::from_edges(7, &edges).expect("valid edges"),
        set: TerminalSet::from([0, 4, 5, 6]),
    }
}

pub fn cmd_capacity(file: &GraphFile, caps: &Caps) -> Result<Report> {
    let (g, a) = (&file.graph, file.set);
    let sol = omn_with(g, a, &caps.omniscience())?;
    let capacity = int(g.edge_count() as i64) - sol.value.clone();
    let bound = partition_bound(g, a)?;
    let consistent = capacity <= bound.value;
    let mut r = Report::new("capacity");
    r.insert("graph", digest(file));
    r.insert(
        "results",
        json!({
            "capacity": rat(&capacity),
            "omn": rat(&sol.value),
            "partition_bound": rat(&bound.value),
            "capacity_within_partition_bound": consistent,
        }),
    );
    r.insert(
        "witnesses",
        json!({ "rates": rats(&sol.rates), "partition": bound.partition.to_string() }),
    );
    r.set_verdict(consistent);
    Ok(r)
}

pub fn cmd_packing(file: &GraphFile, n: u64, mode: Mode, caps: &Caps) -> Result<Report> {
    let (g, a) = (&file.graph, file.set);
    let blown = g.blow_up(n)?;
    let omn = omn_with(&blown, a, &caps.omniscience())?;
    let capacity = int(blown.edge_count() as i64) - omn.value;
    let int_value = int_omn_with(g, a, n, &caps.omniscience())?.value;
    let integer_bound = blown.edge_count() - int_value;
    let mut results = Map::new();
    let mut witnesses = Map::new();
    results.insert("n".into(), json!(n));
    results.insert("capacity".into(), rat(&capacity));
    results.insert("integer_bound".into(), json!(integer_bound));
    let mut passed = true;
    if mode != Mode::Fractional {
        let p = mu_with(&blown, a, &caps.packing())?;
        passed &= p.value <= integer_bound;
        results.insert("mu".into(), json!(p.value));
        results.insert("mu_attains_integer_bound".into(), json!(p.value == integer_bound));
        results.insert("trees_considered".into(), json!(p.stats.trees_considered));
        results.insert("search_nodes".into(), json!(p.stats.nodes));
        witnesses.insert(
            "packing".into(),
            p.trees.iter().map(|(t, c)| json!(format!("{c} x {t}"))).collect(),
        );
    }
    if mode != Mode::Integer {
        let f = mu_f_with(&blown, a, &caps.packing())?;
        let sandwich = capacity.clone() * ratio(1, 2) <= f.value && f.value <= capacity;
        passed &= sandwich;
        results.insert("mu_f".into(), rat(&f.value));
        results.insert("mu_f_within_capacity_bounds".into(), json!(sandwich));
        witnesses.insert(
            "fractional".into(),
            f.trees.iter().zip(&f.weights).map(|(t, w)| json!(format!("{} x {t}", render(w)))).collect(),
        );
    }
    let mut r = Report::new("packing");
    r.insert("graph", digest(file));
    r.insert("results", Value::Object(results));
    r.insert("witnesses", Value::Object(witnesses));
    r.set_verdict(passed);
    Ok(r)
}

fn secrecy_value(s: &SecrecyReport) -> Value {
    json!({
        "recoverable": s.recoverable.iter().map(|(j, ok)| json!(format!("{}:{ok}", j + 1))).collect::<Vec<_>>(),
        "uniform_conditional": s.uniform_conditional,
        "key_length_consistent": s.key_length_consistent,
        "security_index_zero": s.security_index_zero,
        "security_index_display": s.security_index.map(|v| format!("{v:.6}")),
        "witnesses": s.witnesses.iter().map(|w| json!(format!("{w:?}"))).collect::<Vec<_>>(),
        "passed": s.passed(),
    })
}

/// Options for [`cmd_protocol`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProtocolRequest {
    pub n: u64,
    pub scheme: SchemeKind,
    pub seed: u64,
    pub retries: u64,
    pub verify: bool,
    pub scheme_out: Option<PathBuf>,
}

impl Default for ProtocolRequest {
    fn default() -> Self {
        Self { n: 1, scheme: SchemeKind::Packing, seed: DEFAULT_SEED, retries: 1, verify: false, scheme_out: None }
    }
}

pub fn cmd_protocol(file: &GraphFile, req: &ProtocolRequest, caps: &Caps) -> Result<Report> {
    let (g, a) = (&file.graph, file.set);
    let mut results = Map::new();
    results.insert("n".into(), json!(req.n));
    let mut passed = true;
    let built: Option<(LinearScheme, KeyMap)> = match req.scheme {
        SchemeKind::Packing => {
            let p = packing_protocol(g, a, req.n)?;
            results.insert("scheme".into(), json!("packing"));
            results.insert("mu".into(), json!(p.packing.value));
            Some((p.scheme, p.key_map))
        }
        SchemeKind::Random => {
            let rates = omn_with(g, a, &caps.omniscience())?.rates;
            let lengths = omniscience_lengths(&rates, req.n, &default_epsilon());
            results.insert("scheme".into(), json!("random"));
            results.insert("requested_lengths".into(), json!(lengths));
            let mut accepted = None;
            let mut attempts = 0;
            for k in 0..req.retries.max(1) {
                attempts += 1;
                let seed = req.seed.wrapping_add(k);
                if let RandomLco::Accepted(s) = random_lco(g, a, req.n, &lengths, seed)? {
                    accepted = Some((s, seed));
                    break;
                }
            }
            results.insert("attempts".into(), json!(attempts));
            results.insert("accepted".into(), json!(accepted.is_some()));
            match accepted {
                Some((s, seed)) => {
                    results.insert("seed".into(), json!(seed));
                    let key = extract_key(&s);
                    Some((s, key))
                }
                None => {
                    passed = false;
                    None
                }
            }
        }
    };
    if let Some((scheme, key)) = &built {
        results.insert("source_bits".into(), json!(scheme.layout().total()));
        results.insert("lengths".into(), json!(scheme.lengths()));
        results.insert("communication_bits".into(), json!(scheme.total_length()));
        results.insert("key_bits".into(), json!(key.key_len()));
        if let Some(path) = &req.scheme_out {
            std::fs::write(path, write_scheme(scheme, Some(key)))
                .map_err(|e| Error::Precondition(format!("{}: {e}", path.display())))?;
        }
        if req.verify {
            let s = verify_perfect_secrecy(scheme, key, a, caps.bits)?;
            passed &= s.passed();
            results.insert("secrecy".into(), secrecy_value(&s));
        }
    }
    let mut r = Report::new("protocol");
    r.insert("graph", digest(file));
    r.insert("results", Value::Object(results));
    r.set_verdict(passed);
    Ok(r)
}

pub fn cmd_helper(file: &GraphFile, caps: &Caps) -> Result<Report> {
    let g = &file.graph;
    helper::single_helper(g, file.set)?;
    let options = caps.helper();
    let lp = helper::weak_helper_lp(g)?;
    let ilp = helper::weak_helper_ilp(g)?;
    let check = helper::equality_check_with(g, &options)?;
    let mut bounds = Map::new();
    for (name, row) in check.bounds.rows() {
        bounds.insert(
            name.into(),
            json!({ "lhs": rat(&row.lhs), "rhs": rat(&row.rhs), "holds": row.holds, "split": rats(row.split.weights()) }),
        );
    }
    let mut passed = check.bounds.all_hold() && check.consistent();
    let chain = if ilp.holds {
        let c = helper::reduce_to_spanning_with(g, &options)?;
        passed &= c.certifies();
        let steps: Vec<Value> = c
            .steps
            .iter()
            .map(|s| {
                json!({
                    "graph": edge_list(&s.graph),
                    "lengths": s.lengths,
                    "int": s.int,
                    "invariant": s.invariant,
                    "split": s.split.as_ref().map(|x| format!("{}-{}", x.u + 1, x.v + 1)),
                })
            })
            .collect();
        json!({ "steps": steps, "final_mu": c.final_mu, "certified": c.certifies() })
    } else {
        Value::Null
    };
    let mut r = Report::new("helper");
    r.insert("graph", digest(file));
    r.insert(
        "results",
        json!({
            "weak_lp": { "holds": lp.holds, "omn": rat(&lp.unconstrained), "constrained": rat(&lp.constrained), "rates": rats(&lp.witness) },
            "weak_ilp": { "holds": ilp.holds, "int": ilp.unconstrained, "constrained": ilp.constrained, "lengths": ilp.witness },
            "fractional_equality": check.fractional_equality,
            "integer_equality": check.integer_equality,
            "mu_f": rat(&check.mu_f),
            "capacity": rat(&check.capacity),
            "mu": check.mu,
            "integer_bound": check.integer_bound,
            "packing_attains_capacity": check.packing_attains_capacity,
            "packing_attains_integer_bound": check.packing_attains_integer_bound,
            "bounds": bounds,
        }),
    );
    r.insert("chain", chain);
    r.set_verdict(passed);
    Ok(r)
}

pub fn cmd_reproduce_example(n: Option<u64>, verify_protocol: bool, caps: &Caps) -> Result<Report> {
    let file = reference_network();
    let (g, a) = (&file.graph, file.set);
    let (expected_capacity, expected_mu_f) = (int(2), ratio(9, 5));
    let omn = omn_with(g, a, &caps.omniscience())?.value;
    let capacity = int(g.edge_count() as i64) - omn.clone();
    let mu_f = mu_f_with(g, a, &caps.packing())?.value;
    let mut passed = capacity == expected_capacity && mu_f == expected_mu_f;
    let mut results = Map::new();
    results.insert("capacity".into(), rat(&capacity));
    results.insert("omn".into(), rat(&omn));
    results.insert("mu_f".into(), rat(&mu_f));
    results.insert("expected_capacity".into(), rat(&expected_capacity));
    results.insert("expected_mu_f".into(), rat(&expected_mu_f));
    if let Some(n) = n {
        let mu = mu_with(&g.blow_up(n)?, a, &caps.packing())?.value;
        let rate = ratio(mu as i64, n as i64);
        let within = rate <= mu_f;
        passed &= within;
        results.insert("n".into(), json!(n));
        results.insert("mu".into(), json!(mu));
        results.insert("rate".into(), rat(&rate));
        results.insert("rate_within_mu_f".into(), json!(within));
    }
    if verify_protocol {
        let p = packing_protocol(g, a, 1)?;
        let s = verify_perfect_secrecy(&p.scheme, &p.key_map, a, caps.bits)?;
        passed &= s.passed();
        results.insert("protocol_key_bits".into(), json!(p.key_map.key_len()));
        results.insert("protocol_communication_bits".into(), json!(p.scheme.total_length()));
        results.insert("secrecy".into(), secrecy_value(&s));
    }
    let mut r = Report::new("reproduce-example");
    r.insert("graph", digest(&file));
    r.insert("results", Value::Object(results));
    r.set_verdict(passed);
    Ok(r)
}

/// Parses a one-based terminal list such as `1,3` or `1 3`.
pub fn parse_set(text: &str, m: usize) -> Result<TerminalSet> {
    let mut set = TerminalSet::EMPTY;
    for token in text.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
        let v: usize = token
            .parse()
            .map_err(|_| Error::Parse { line: 0, message: format!("--set: bad terminal {token:?}") })?;
        if v == 0 || v > m {
            return Err(Error::Parse { line: 0, message: format!("--set: terminal {v} outside 1..={m}") });
        }
        set.insert(v - 1);
    }
    Ok(set)
}

fn load(args: &GraphArgs) -> std::result::Result<GraphFile, (i32, String)> {
    let text = std::fs::read_to_string(&args.graph)
        .map_err(|e| (EXIT_INVALID, format!("{}: {e}", args.graph.display())))?;
    let mut file = parse_graph_file(&text).map_err(|e| located(&args.graph, e))?;
    if let Some(s) = &args.set {
        file.set = parse_set(s, file.graph.m()).map_err(|e| (EXIT_PARSE, e.to_string()))?;
    }
    Ok(file)
}

fn located(path: &Path, e: Error) -> (i32, String) {
    (exit_code(&e), format!("{}: {e}", path.display()))
}

/// Exit status for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } => EXIT_PARSE,
        Error::TooManyTerminals { .. }
        | Error::TreeCapExceeded { .. }
        | Error::BruteForceCap { .. }
        | Error::BoxTooLarge { .. } => EXIT_CAP,
        _ => EXIT_INVALID,
    }
}

/// Captured result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn dispatch(cli: &Cli) -> std::result::Result<Report, (i32, String)> {
    let caps = &cli.caps;
    let with_file = |args: &GraphArgs, f: &dyn Fn(&GraphFile) -> Result<Report>| {
        let file = load(args)?;
        f(&file).map_err(|e| located(&args.graph, e))
    };
    match &cli.command {
        Command::Capacity(args) => with_file(args, &|f| cmd_capacity(f, caps)),
        Command::Packing { input, n, mode } => with_file(input, &|f| cmd_packing(f, *n, *mode, caps)),
        Command::Protocol { input, n, scheme, seed, retries, verify, scheme_out } => {
            let req = ProtocolRequest {
                n: *n,
                scheme: *scheme,
                seed: *seed,
                retries: *retries,
                verify: *verify,
                scheme_out: scheme_out.clone(),
            };
            with_file(input, &|f| cmd_protocol(f, &req, caps))
        }
        Command::Helper(args) => with_file(args, &|f| cmd_helper(f, caps)),
        Command::ReproduceExample { n, verify_protocol } => {
            cmd_reproduce_example(*n, *verify_protocol, caps).map_err(|e| (exit_code(&e), e.to_string()))
        }
    }
}

/// Runs `pinsk` on `args` (program name first).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code, stdout: String::new(), stderr: text }
            } else {
                Outcome { code, stdout: text, stderr: String::new() }
            };
        }
    };
    let start = Instant::now();
    match dispatch(&cli) {
        Ok(mut report) => {
            if cli.timing {
                report.insert("timing", json!({ "elapsed_ms": start.elapsed().as_millis() as u64 }));
            }
            let stdout = if cli.json { report.to_json() } else { report.to_text() };
            let code = if report.passed() { EXIT_OK } else { EXIT_VERDICT };
            Outcome { code, stdout, stderr: String::new() }
        }
        Err((code, message)) => Outcome { code, stdout: String::new(), stderr: format!("error: {message}\n") },
    }
}
