//! The `legcost` command line.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::cost::{cost_simple, CostKind, CostResult, Provenance};
use crate::front::{classical_invariants, connect_sum, parse_front, ClassicalInvariants, OrientedFront};
use crate::graph::{build_cost_graph, verify_metric};
use crate::isotopy::{cost_search, lr_equivalent, SearchBudget};
use crate::knot_types::{builtin_descriptor, e_front, peak_fronts, standard_front, KnotTypeDescriptor};
use crate::moves::{stabilize, Sign};

/// A comment line marking a front file as carrying the reversed orientation.
/// Front files are otherwise unoriented and read with the canonical one.
pub const REVERSED_MARK: &str = "# orientation: reversed";

#[derive(Parser, Debug)]
#[command(name = "legcost", version, about = "Legendrian fronts, isotopy search and the stabilization cost")]
struct Cli {
    /// Worker threads for the isotopy search (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Classical invariants of a front, as JSON.
    Invariants { front: PathBuf },
    /// Stabilizes a front once.
    Stabilize {
        front: PathBuf,
        #[arg(long, value_parser = parse_sign, allow_hyphen_values = true)]
        sign: Sign,
        /// Segment to stabilize on.
        #[arg(long, default_value_t = 0)]
        site: usize,
    },
    /// Connected sum of two fronts.
    Sum { a: PathBuf, b: PathBuf },
    /// Bounded search for a Legendrian isotopy.
    Isotopy {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Cost between two fronts by bounded search.
    Cost {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Cost between two classes of a simple type, from the invariants.
    CostSimple {
        #[command(flatten)]
        ty: TypeArgs,
        #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
        a: (i64, i64),
        #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
        b: (i64, i64),
    },
    /// Prints a built-in front.
    Gen {
        kind: GenKind,
        /// `K,L` for `e`, `P,Q` for `torus`.
        params: Option<String>,
        /// Stabilize down to this class.
        #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
        class: Option<(i64, i64)>,
    },
    /// The cost graph of a simple type.
    Graph {
        #[command(flatten)]
        ty: TypeArgs,
        #[arg(long, allow_hyphen_values = true)]
        floor: i64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Checks the metric axioms on the cost graph.
    Verify {
        #[command(flatten)]
        ty: TypeArgs,
        #[arg(long, allow_hyphen_values = true)]
        floor: i64,
    },
}

#[derive(Args, Debug)]
struct BudgetArgs {
    #[arg(long, default_value_t = SearchBudget::default().max_width)]
    max_width: u32,
    #[arg(long, default_value_t = SearchBudget::default().max_events)]
    max_events: usize,
    #[arg(long, default_value_t = SearchBudget::default().max_states)]
    max_states: usize,
    #[arg(long, default_value_t = SearchBudget::default().max_cost)]
    max_cost: u64,
}

impl BudgetArgs {
    fn budget(&self) -> SearchBudget {
        SearchBudget {
            max_width: self.max_width,
            max_events: self.max_events,
            max_states: self.max_states,
            max_cost: self.max_cost,
        }
    }
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct TypeArgs {
    /// Built-in type: unknot, trefoil-r, trefoil-l or torus(P,Q).
    #[arg(long = "type")]
    name: Option<String>,
    /// Descriptor JSON file.
    #[arg(long)]
    desc: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GenKind {
    Unknot,
    TrefoilR,
    TrefoilL,
    E,
    Torus,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Dot,
    Json,
}

fn parse_sign(s: &str) -> Result<Sign, String> {
    match s {
        "+" | "plus" => Ok(Sign::Plus),
        "-" | "minus" => Ok(Sign::Minus),
        _ => Err(format!("expected + or -, got {s:?}")),
    }
}

fn parse_pair(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected A,B, got {s:?}"))?;
    let num = |t: &str| t.trim().parse::<i64>().map_err(|e| format!("{t:?}: {e}"));
    Ok((num(a)?, num(b)?))
}

/// Domain failure, reported with exit status 1.
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

fn type_name(name: &str) -> &str {
    match name {
        "trefoil-r" => "right_trefoil",
        "trefoil-l" => "left_trefoil",
        other => other,
    }
}

fn descriptor(ty: &TypeArgs) -> Result<KnotTypeDescriptor, Failure> {
    match (&ty.name, &ty.desc) {
        (Some(n), _) => Ok(builtin_descriptor(type_name(n))?),
        (None, Some(p)) => {
            let text = fs::read_to_string(p).map_err(|e| Failure(format!("{}: {e}", p.display())))?;
            Ok(KnotTypeDescriptor::from_json(&text)?)
        }
        (None, None) => unreachable!("clap requires one of --type, --desc"),
    }
}

pub fn read_front(path: &Path) -> Result<OrientedFront, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    front_from_text(&text).map_err(|e| format!("{}: {e}", path.display()))
}

/// Parses front text, honouring [`REVERSED_MARK`].
pub fn front_from_text(text: &str) -> Result<OrientedFront, crate::front::FrontError> {
    let reversed = text.lines().any(|l| l.trim() == REVERSED_MARK);
    Ok(OrientedFront::new(parse_front(text)?, reversed))
}

pub fn front_to_text(f: &OrientedFront) -> String {
    if f.is_reversed() {
        format!("{REVERSED_MARK}\n{}\n", f.word())
    } else {
        format!("{}\n", f.word())
    }
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize") + "\n"
}

fn gen(kind: GenKind, params: Option<&str>, class: Option<(i64, i64)>) -> Result<OrientedFront, Failure> {
    let pair = |what: &str| -> Result<(u32, u32), Failure> {
        let p = params.ok_or_else(|| Failure(format!("{what} needs parameters")))?;
        let (a, b) = parse_pair(p).map_err(Failure)?;
        let conv = |x: i64| u32::try_from(x).map_err(|_| Failure(format!("parameter {x} out of range")));
        Ok((conv(a)?, conv(b)?))
    };
    let name = match kind {
        GenKind::Unknot => "unknot".to_string(),
        GenKind::TrefoilR => "right_trefoil".to_string(),
        GenKind::TrefoilL => "left_trefoil".to_string(),
        GenKind::E => {
            let (k, l) = pair("e")?;
            e_front(k, l)?;
            format!("e({k},{l})")
        }
        GenKind::Torus => {
            let (p, q) = pair("torus")?;
            format!("torus({p},{q})")
        }
    };
    match class {
        Some((tb, rot)) => Ok(standard_front(&name, tb, rot)?),
        None => Ok(peak_fronts(&name)?.remove(0)),
    }
}

fn execute(cmd: Cmd) -> Result<String, Failure> {
    Ok(match cmd {
        Cmd::Invariants { front } => classical_invariants(&read_front(&front)?).to_json() + "\n",
        Cmd::Stabilize { front, sign, site } => front_to_text(&stabilize(&read_front(&front)?, sign, site)?),
        Cmd::Sum { a, b } => front_to_text(&connect_sum(&read_front(&a)?, &read_front(&b)?)),
        Cmd::Isotopy { a, b, budget } => {
            let v = lr_equivalent(&read_front(&a)?, &read_front(&b)?, &budget.budget())?;
            pretty(&v.to_json())
        }
        Cmd::Cost { a, b, budget } => {
            let c = cost_search(&read_front(&a)?, &read_front(&b)?, &budget.budget())?;
            pretty(&c.to_json())
        }
        Cmd::CostSimple { ty, a, b } => {
            let d = descriptor(&ty)?;
            if !d.is_simple() {
                return Err(Failure(format!("{} is not known to be Legendrian simple", d.name)));
            }
            for (tb, rot) in [a, b] {
                if !d.reaches(tb, rot) {
                    return Err(Failure(format!("({tb}, {rot}) is not a class of {}", d.name)));
                }
            }
            let (x, y) = (ClassicalInvariants::from_pair(a.0, a.1), ClassicalInvariants::from_pair(b.0, b.1));
            let r = CostResult::formula(CostKind::Exact(cost_simple(&x, &y)), Provenance::SimpleFormula);
            pretty(&r.to_json())
        }
        Cmd::Gen { kind, params, class } => front_to_text(&gen(kind, params.as_deref(), class)?),
        Cmd::Graph { ty, floor, format } => {
            let g = build_cost_graph(&descriptor(&ty)?, floor)?;
            match format {
                Format::Dot => g.to_dot(),
                Format::Json => pretty(&g.to_json()),
            }
        }
        Cmd::Verify { ty, floor } => {
            let g = build_cost_graph(&descriptor(&ty)?, floor)?;
            let report = verify_metric(&g);
            let text = pretty(&json!(report));
            if !report.ok() {
                return Err(Failure(format!("{text}metric check failed")));
            }
            text
        }
    })
}

/// Runs the command line on `argv` (program name first) and returns the exit
/// status: 0 on success, 1 on domain errors, 2 on usage errors.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            let _ = writeln!(err, "error: --threads must be positive");
            return 2;
        }
        // a second call in one process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match execute(cli.cmd) {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            0
        }
        Err(Failure(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
    }
}
