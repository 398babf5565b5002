//! The `rospace` command line.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graph::{dimension_report, enumerate_maximal, Budget, MarkedMetricAGraph};
use crate::system::{cross_check, resolve_tree, SystemK};
use crate::tree::{
    boundary_simplex, convergence, q_rank_report, total_index, tree_from_point, validate_very_small, verify_prop41,
    GraphOfGroupsTree,
};
use crate::verify::{run_all, DEFAULT_SEED};
use crate::word::{word_ball, FreeFactorSystem};

#[derive(Parser, Debug)]
#[command(
    name = "rospace",
    version,
    about = "Relative outer space: dimensions, trees, index and Q-rank checks"
)]
pub struct Cli {
    /// Print the JSON document instead of a table.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct SystemArgs {
    /// File holding a free factor system (or any document with a `system` field).
    #[arg(short = 's', long = "system", value_name = "PATH", conflicts_with_all = ["n", "factors"])]
    pub system: Option<PathBuf>,
    /// Rank of the free group.
    #[arg(long)]
    pub n: Option<usize>,
    /// Factor ranks, comma separated (empty for none).
    #[arg(long, value_delimiter = ',')]
    pub factors: Vec<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct TreeArgs {
    /// Tree or marked graph document.
    #[arg(long, value_name = "PATH")]
    pub tree: PathBuf,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// V, E and the dimensions of outer space and its spine.
    Dims(SystemArgs),
    /// Check a marked graph, tree or system-of-isometries file.
    Validate {
        #[arg(long, value_name = "PATH", required_unless_present = "system")]
        tree: Option<PathBuf>,
        #[arg(short = 's', long, value_name = "PATH")]
        system: Option<PathBuf>,
    },
    /// Isomorphism classes of maximal collapsed graphs.
    Enumerate {
        #[command(flatten)]
        system: SystemArgs,
        /// Also count valid shapes of every vertex count.
        #[arg(long)]
        all: bool,
    },
    /// Translation lengths of words.
    Length {
        #[command(flatten)]
        tree: TreeArgs,
        #[arg(long)]
        word: Vec<String>,
        /// Every reduced word up to this length.
        #[arg(long)]
        ball: Option<usize>,
    },
    /// Branch orbits and the total index.
    Index(TreeArgs),
    /// Q-rank of the length lattice against its bounds.
    Qrank {
        #[command(flatten)]
        tree: TreeArgs,
        /// Radius for the branch-distance lattice.
        #[arg(long)]
        depth: Option<usize>,
    },
    /// The generation statements for L and Λ.
    Prop41 {
        #[command(flatten)]
        tree: TreeArgs,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// A boundary family with one extra elliptic generator.
    Boundary(SystemArgs),
    /// Sheared middle points against the rose.
    Converge {
        #[arg(long, default_value_t = 8)]
        n_max: i64,
        #[arg(long, default_value_t = 4)]
        ball: usize,
    },
    /// Cut a system of isometries from a tree and rebuild a ball of it.
    Resolve {
        #[command(flatten)]
        tree: TreeArgs,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// Run the acceptance suite on the built-in fixtures.
    Verify {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Fail,
    Error,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Fail => 1,
            Status::Error => 2,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Fail => "fail",
            Status::Error => "error",
        }
    }
}

pub struct CommandResult {
    pub status: Status,
    pub payload: Value,
    pub human: String,
}

impl CommandResult {
    fn new(ok: bool, payload: Value, human: String) -> Self {
        CommandResult {
            status: if ok { Status::Ok } else { Status::Fail },
            payload,
            human,
        }
    }

    fn error(e: &Error) -> Self {
        CommandResult {
            status: if e.is_property_failure() {
                Status::Fail
            } else {
                Status::Error
            },
            payload: json!({"error": e.to_string()}),
            human: format!("error: {e}\n"),
        }
    }

    /// The JSON document, stamped with the format version and status.
    pub fn document(&self, command: &str) -> String {
        let mut v = json!({"rospace_format": 1, "command": command, "status": self.status.name()});
        if let (Value::Object(out), Value::Object(p)) = (&mut v, &self.payload) {
            for (k, x) in p {
                out.insert(k.clone(), x.clone());
            }
        } else {
            v["result"] = self.payload.clone();
        }
        let mut s = serde_json::to_string_pretty(&v).expect("JSON values serialize");
        s.push('\n');
        s
    }
}

fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::schema("$", format!("{}: {e}", path.display())))
}

enum Document {
    System(FreeFactorSystem),
    Point(Box<MarkedMetricAGraph>),
    Tree(Box<GraphOfGroupsTree>),
    Isometries(Box<SystemK>),
}

fn load(path: &Path) -> Result<Document> {
    let v = read_json(path)?;
    let has = |k: &str| v.get(k).is_some();
    if has("maps") {
        Ok(Document::Isometries(Box::new(SystemK::from_json(&v)?)))
    } else if has("vertex_labels") {
        Ok(Document::Tree(Box::new(GraphOfGroupsTree::from_json(&v)?)))
    } else if has("wedge_cycles") {
        Ok(Document::Point(Box::new(MarkedMetricAGraph::from_json(&v)?)))
    } else if has("system") {
        serde_json::from_value(v["system"].clone())
            .map(Document::System)
            .map_err(|e| Error::schema("$.system", e.to_string()))
    } else if has("n") {
        serde_json::from_value(v)
            .map(Document::System)
            .map_err(|e| Error::schema("$", e.to_string()))
    } else {
        Err(Error::schema(
            "$",
            "not a system, marked graph, tree or system of isometries",
        ))
    }
}

fn load_tree(args: &TreeArgs) -> Result<GraphOfGroupsTree> {
    match load(&args.tree)? {
        Document::Tree(t) => Ok(*t),
        Document::Point(x) => tree_from_point(&x),
        _ => Err(Error::schema(
            "$",
            format!("{} is not a tree or marked graph", args.tree.display()),
        )),
    }
}

fn load_system(args: &SystemArgs) -> Result<FreeFactorSystem> {
    if let Some(path) = &args.system {
        return match load(path)? {
            Document::System(s) => Ok(s),
            Document::Point(x) => Ok(x.system),
            Document::Tree(t) => Ok(t.system),
            Document::Isometries(k) => Ok(k.system),
        };
    }
    let n = args
        .n
        .ok_or_else(|| Error::Domain("give --system PATH or --n with --factors".into()))?;
    FreeFactorSystem::standard(n, &args.factors)
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn dims(args: &SystemArgs) -> Result<CommandResult> {
    let sys = load_system(args)?;
    let d = dimension_report(&sys);
    let human = format!(
        "system     {}\nV          {}\nE          {}\ndim CV     {}\ndim spine  {}\n",
        sys.describe(),
        d.v_max,
        d.e_max,
        d.dim_cv,
        d.dim_spine
    );
    Ok(CommandResult::new(
        true,
        json!({"system": sys, "V": d.v_max, "E": d.e_max, "dim_cv": d.dim_cv, "dim_spine": d.dim_spine}),
        human,
    ))
}

fn validate(tree: Option<&Path>, system: Option<&Path>) -> Result<CommandResult> {
    let path = tree.or(system).expect("clap requires one input");
    match load(path)? {
        Document::System(s) => Ok(CommandResult::new(
            true,
            json!({"kind": "factor_system", "system": s}),
            format!("factor system {}: ok\n", s.describe()),
        )),
        Document::Point(x) => {
            let r = x.validate()?;
            let human = format!(
                "marked graph: {}{}\n",
                if r.ok { "ok" } else { "fail" },
                detail(&r.detail)
            );
            Ok(CommandResult::new(
                r.ok,
                json!({"kind": "marked_graph", "report": r}),
                human,
            ))
        }
        Document::Tree(t) => {
            let r = validate_very_small(&t);
            let human = format!("tree: very small {}{}\n", yes(r.ok), detail(&r.detail));
            Ok(CommandResult::new(
                r.ok,
                json!({"kind": "tree", "very_small": r}),
                human,
            ))
        }
        Document::Isometries(k) => Ok(CommandResult::new(
            true,
            json!({"kind": "system_of_isometries", "vertices": k.vertex_count()}),
            format!("system of isometries on {} vertices: ok\n", k.vertex_count()),
        )),
    }
}

fn detail(d: &str) -> String {
    if d.is_empty() {
        String::new()
    } else {
        format!(" ({d})")
    }
}

fn enumerate(args: &SystemArgs, all: bool) -> Result<CommandResult> {
    let sys = load_system(args)?;
    let en = enumerate_maximal(&sys, all, Budget::default())?;
    let mut human = format!("{}: {} maximal classes\n", sys.describe(), en.maximal.len());
    for (i, sh) in en.maximal.iter().enumerate() {
        let edges: Vec<String> = sh.edges.iter().map(|(a, b)| format!("{a}-{b}")).collect();
        let _ = writeln!(
            human,
            "  {:>3}  V={} E={}  {}",
            i + 1,
            sh.vertices,
            sh.edges.len(),
            edges.join(" ")
        );
    }
    if let Some(counts) = &en.valid_by_vertices {
        for (v, c) in counts {
            let _ = writeln!(human, "  valid shapes with {v} vertices: {c}");
        }
    }
    Ok(CommandResult::new(
        true,
        json!({"system": sys, "maximal": en.maximal, "count": en.maximal.len(), "valid_by_vertices": en.valid_by_vertices}),
        human,
    ))
}

fn length(args: &TreeArgs, words: &[String], ball: Option<usize>) -> Result<CommandResult> {
    let t = load_tree(args)?;
    let sys = &t.system;
    let mut list = Vec::new();
    for s in words {
        list.push(sys.parse_word(s)?);
    }
    if let Some(r) = ball {
        list.extend(word_ball(sys.gen_count(), r).into_iter().filter(|w| !w.is_identity()));
    }
    if list.is_empty() {
        return Err(Error::Domain("give --word or --ball".into()));
    }
    let mut rows = Vec::new();
    let mut human = String::new();
    for w in &list {
        let name = sys.format_word(w);
        let l = t.translation_length(w)?;
        let _ = writeln!(human, "{name:<16} {l}");
        rows.push(json!({"word": name, "length": l}));
    }
    Ok(CommandResult::new(true, json!({"lengths": rows}), human))
}

fn index(args: &TreeArgs) -> Result<CommandResult> {
    let t = load_tree(args)?;
    let r = total_index(&t)?;
    let mut human = String::from("vertex      stabilizer  rk  v1  index\n");
    for o in &r.orbits {
        let _ = writeln!(
            human,
            "{:<11} {:<11} {:>2}  {:>2}  {:>5}",
            o.vertex, o.stabilizer, o.rk_st, o.v1, o.index
        );
    }
    let _ = writeln!(
        human,
        "total {}  expected 2n+2k-2-2Σs = {}  equality {}",
        r.total,
        r.expected,
        yes(r.equality)
    );
    let ok = r.equality && r.all_nonnegative && r.orbit_count_within_bound;
    Ok(CommandResult::new(
        ok,
        serde_json::to_value(&r).expect("report serializes"),
        human,
    ))
}

fn qrank(args: &TreeArgs, depth: Option<usize>) -> Result<CommandResult> {
    let t = load_tree(args)?;
    let r = q_rank_report(&t, depth)?;
    let human = format!(
        "r_Q                    {}\nbranch orbits b        {}\nn-Σs+b-1               {}\n3n+2k-3-3Σs            {}\nequality               {}\nonly factors elliptic  {}\n",
        r.r_q,
        r.b,
        r.cor43,
        r.theorem,
        yes(r.equality),
        yes(r.only_factors_elliptic)
    );
    Ok(CommandResult::new(
        true,
        serde_json::to_value(&r).expect("report serializes"),
        human,
    ))
}

fn prop41(args: &TreeArgs, depth: Option<usize>) -> Result<CommandResult> {
    let t = load_tree(args)?;
    let p = verify_prop41(&t, depth)?;
    let ok = p.lengths_generate_l_mod_2lambda && p.distances_generate_lambda_mod_l && p.lambda_mod_2lambda_bound;
    let human = format!(
        "lengths generate L mod 2Λ    {}\ndistances generate Λ mod L   {}\nrank Λ/2Λ ≤ n-Σs+b-1         {} ({} ≤ {})\n",
        yes(p.lengths_generate_l_mod_2lambda),
        yes(p.distances_generate_lambda_mod_l),
        yes(p.lambda_mod_2lambda_bound),
        p.two_torsion_rank,
        p.bound
    );
    Ok(CommandResult::new(
        ok,
        serde_json::to_value(&p).expect("report serializes"),
        human,
    ))
}

fn boundary(args: &SystemArgs) -> Result<CommandResult> {
    let sys = load_system(args)?;
    let fam = boundary_simplex(&sys, Budget::default())?;
    let mut human = format!(
        "{} with {} elliptic: {} simplices of dimension {}\n",
        sys.describe(),
        fam.elliptic,
        fam.simplices.len(),
        fam.dim
    );
    for (i, s) in fam.simplices.iter().enumerate() {
        let _ = writeln!(
            human,
            "  {:>3}  members checked {}  all pass {}",
            i + 1,
            s.checks.len(),
            yes(s.checks.iter().all(|c| c.ok()))
        );
    }
    let mut payload = fam.to_json();
    if let Value::Object(m) = &mut payload {
        m.remove("rospace_format");
    }
    Ok(CommandResult::new(fam.all_pass(), payload, human))
}

fn converge(n_max: i64, ball: usize) -> Result<CommandResult> {
    let rows = convergence(n_max, ball)?;
    let mut human = String::from("  N  to rose   to middle\n");
    for r in &rows {
        let _ = writeln!(
            human,
            "{:>3}  {:<9} {}",
            r.n,
            crate::scalar::format_rational(&r.to_rose.max),
            crate::scalar::format_rational(&r.to_middle.max)
        );
    }
    Ok(CommandResult::new(true, json!({"ball": ball, "rows": rows}), human))
}

fn resolve(args: &TreeArgs, depth: usize) -> Result<CommandResult> {
    let t = load_tree(args)?;
    let res = resolve_tree(&t)?;
    let c = cross_check(&res, depth)?;
    let human = format!(
        "K: {} vertices, {} edges\nball depth {}: {} points, {} edges\ntree {}  K isometric {}  embeds {}  word criterion {}\n",
        res.k.vertex_count(),
        res.k.edges.len(),
        depth,
        c.points,
        c.edges,
        yes(c.is_tree),
        yes(c.k_isometric),
        yes(c.well_defined && c.injective && c.edges_isometric),
        yes(c.word_criterion)
    );
    let mut k = res.k.to_json();
    if let Value::Object(m) = &mut k {
        m.remove("rospace_format");
    }
    Ok(CommandResult::new(c.ok(), json!({"k": k, "cross_check": c}), human))
}

fn verify(seed: u64) -> CommandResult {
    let reports = run_all(seed);
    let human: String = reports.iter().map(|r| r.line() + "\n").collect();
    let ok = reports.iter().all(|r| r.pass);
    CommandResult::new(ok, json!({"seed": seed, "criteria": reports}), human)
}

pub fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Dims(_) => "dims",
        Command::Validate { .. } => "validate",
        Command::Enumerate { .. } => "enumerate",
        Command::Length { .. } => "length",
        Command::Index(_) => "index",
        Command::Qrank { .. } => "qrank",
        Command::Prop41 { .. } => "prop41",
        Command::Boundary(_) => "boundary",
        Command::Converge { .. } => "converge",
        Command::Resolve { .. } => "resolve",
        Command::Verify { .. } => "verify",
    }
}

pub fn execute(command: &Command) -> CommandResult {
    let out = match command {
        Command::Dims(s) => dims(s),
        Command::Validate { tree, system } => validate(tree.as_deref(), system.as_deref()),
        Command::Enumerate { system, all } => enumerate(system, *all),
        Command::Length { tree, word, ball } => length(tree, word, *ball),
        Command::Index(t) => index(t),
        Command::Qrank { tree, depth } => qrank(tree, *depth),
        Command::Prop41 { tree, depth } => prop41(tree, *depth),
        Command::Boundary(s) => boundary(s),
        Command::Converge { n_max, ball } => converge(*n_max, *ball),
        Command::Resolve { tree, depth } => resolve(tree, *depth),
        Command::Verify { seed } => Ok(verify(*seed)),
    };
    out.unwrap_or_else(|e| CommandResult::error(&e))
}

/// Parses `args` (program name first) and runs the command: exit code,
/// stdout, stderr.
pub fn run<I, S>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                (0, text, String::new())
            } else {
                (2, String::new(), text)
            };
        }
    };
    let result = execute(&cli.command);
    let name = command_name(&cli.command);
    let code = result.status.code();
    if result.status == Status::Error {
        let err = if cli.json { result.document(name) } else { result.human };
        return (code, String::new(), err);
    }
    let out = if cli.json { result.document(name) } else { result.human };
    (code, out, String::new())
}
