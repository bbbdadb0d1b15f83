//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::classify::{self, ClassifyError, Evidence, Evidenced, Report};
use crate::constructions::{
    chein_double, cyclic_group, dihedral_group, direct_product, symmetric_group_3, verify_claims,
    FiniteGroup, PaperExample,
};
use crate::eval::{self, profile, CompiledLaw, Variety};
use crate::loops::FiniteLoop;
use crate::search::{self, Law, Mode, SearchResult, SearchSpec};
use crate::term::{enumerate_all, parse_name_or_identity, Identity};

/// Exit code for a result that contradicts the reference data.
pub const EXIT_MISMATCH: i32 = 1;
/// Exit code for bad arguments or unreadable input.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "bolmoufang",
    version,
    about = "Identities of Bol-Moufang type over finite loops"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Canonical Xij name and class of an identity such as "x((yy)z)=((xy)y)z".
    Name { identity: String },
    /// Dual of an Xij name or identity.
    Dual { identity: String },
    /// Check a .loop file against identities or varieties.
    Check(CheckArgs),
    /// Report which of the 60 identities and 15 variety laws a loop satisfies.
    Profile { file: PathBuf },
    /// Search for a loop satisfying some laws and violating others.
    Find(FindArgs),
    /// List every normalized loop of an order.
    Enumerate {
        #[arg(long)]
        order: usize,
        #[arg(long)]
        count_only: bool,
    },
    /// Re-derive a piece of the classification and compare with the reference data.
    Reproduce(ReproduceArgs),
}

#[derive(Debug, Args)]
struct CheckArgs {
    file: PathBuf,
    /// An Xij name or identity string.
    #[arg(long, conflicts_with_all = ["variety", "all"])]
    identity: Option<String>,
    /// A variety abbreviation (GR, EL, ML, ..., 3PA).
    #[arg(long, conflicts_with = "all")]
    variety: Option<String>,
    /// All 60 identities and 15 variety laws (the default).
    #[arg(long)]
    all: bool,
}

#[derive(Debug, Args)]
struct FindArgs {
    /// Order to search; with --max-order, the smallest order tried.
    #[arg(long)]
    order: Option<usize>,
    /// Comma-separated Xij names or variety abbreviations to satisfy.
    #[arg(long, value_delimiter = ',')]
    require: Vec<String>,
    /// Comma-separated Xij names or variety abbreviations to violate.
    #[arg(long, value_delimiter = ',')]
    forbid: Vec<String>,
    /// Return the lexicographically least table.
    #[arg(long)]
    minimal: bool,
    /// Try every order up to this bound and stop at the first hit.
    #[arg(long)]
    max_order: Option<usize>,
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Target {
    Examples,
    Table2,
    Table3,
    Figure1,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Records,
}

#[derive(Debug, Args)]
struct ReproduceArgs {
    target: Target,
    /// Catalog bound for table3 and figure1.
    #[arg(long, default_value_t = classify::DEFAULT_MAX_ORDER)]
    max_order: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads for catalog profiling (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
}

struct Failure(i32, String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Failure {
        Failure(EXIT_USAGE, e.to_string())
    }
}

/// Runs the command line `args` (including the program name), writing
/// results to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    match cmd {
        Command::Name { identity } => {
            let id: Identity = identity.parse()?;
            let name = id.name();
            let class = classify::classify_identity(name);
            writeln!(out, "{name} ({} class)", class.member_name())?;
            writeln!(out, "{}", name.decode())?;
            Ok(0)
        }
        Command::Dual { identity } => {
            let name = parse_name_or_identity(&identity)?;
            let dual = name.dual();
            writeln!(out, "{dual} {}", dual.decode())?;
            if identity.contains('=') {
                let id: Identity = identity.parse()?;
                writeln!(out, "read backwards: {}", id.dual())?;
            }
            Ok(0)
        }
        Command::Check(args) => check(args, out),
        Command::Profile { file } => {
            let l = read_loop(&file)?;
            write_profile(&l, out)?;
            Ok(0)
        }
        Command::Find(args) => find(args, out),
        Command::Enumerate { order, count_only } => {
            let loops = search::enumerate_loops(order)?;
            if count_only {
                writeln!(out, "{}", loops.count())?;
            } else {
                for (i, l) in loops.enumerate() {
                    writeln!(out, "# loop {i}")?;
                    write!(out, "{l}")?;
                }
            }
            Ok(0)
        }
        Command::Reproduce(args) => reproduce(args, out),
    }
}

fn read_loop(path: &PathBuf) -> Result<FiniteLoop, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure(EXIT_USAGE, format!("{}: {e}", path.display())))?;
    text.parse::<FiniteLoop>()
        .map_err(|e| Failure(EXIT_USAGE, format!("{}: {e}", path.display())))
}

/// Parses an Xij name, identity string, or variety abbreviation.
fn parse_law(s: &str) -> Result<Law, Failure> {
    if let Ok(v) = s.parse::<Variety>() {
        return Ok(v.into());
    }
    Ok(parse_name_or_identity(s)?.into())
}

fn check(args: CheckArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let l = read_loop(&args.file)?;
    let laws: Vec<CompiledLaw> = if let Some(id) = &args.identity {
        vec![CompiledLaw::from_name(parse_name_or_identity(id)?)]
    } else if let Some(v) = &args.variety {
        vec![CompiledLaw::from_variety(v.parse()?)]
    } else {
        enumerate_all()
            .into_iter()
            .map(CompiledLaw::from_name)
            .chain(Variety::ALL.into_iter().map(CompiledLaw::from_variety))
            .collect()
    };
    let mut failures = 0;
    for law in &laws {
        match law.counterexample(&l) {
            None => writeln!(out, "pass {}", law.label())?,
            Some(w) => {
                failures += 1;
                writeln!(out, "FAIL {w}")?;
            }
        }
    }
    let explicit = args.identity.is_some() || args.variety.is_some();
    Ok(if explicit && failures > 0 { EXIT_MISMATCH } else { 0 })
}

fn write_profile(l: &FiniteLoop, out: &mut dyn Write) -> std::io::Result<()> {
    let p = profile(l);
    writeln!(out, "order {}", l.order())?;
    for chunk in enumerate_all().chunks(10) {
        let cells: Vec<String> = chunk
            .iter()
            .map(|&n| format!("{n}:{}", u8::from(p.holds(n))))
            .collect();
        writeln!(out, "{}", cells.join(" "))?;
    }
    let vs: Vec<String> = Variety::ALL
        .iter()
        .map(|&v| format!("{v}:{}", u8::from(p.in_variety(v))))
        .collect();
    writeln!(out, "{}", vs.join(" "))?;
    let members: Vec<&str> = Variety::ALL
        .iter()
        .filter(|&&v| p.in_variety(v))
        .map(|v| v.abbrev())
        .collect();
    writeln!(out, "varieties: {}", members.join(" "))?;
    Ok(())
}

fn find(args: FindArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let require = args
        .require
        .iter()
        .filter(|s| !s.is_empty())
        .map(|s| parse_law(s))
        .collect::<Result<Vec<_>, _>>()?;
    let forbid = args
        .forbid
        .iter()
        .filter(|s| !s.is_empty())
        .map(|s| parse_law(s))
        .collect::<Result<Vec<_>, _>>()?;
    let mode = if args.minimal {
        Mode::Minimal
    } else {
        Mode::FirstFound
    };
    let (from, to) = match (args.order, args.max_order) {
        (Some(n), None) => (n, n),
        (n, Some(m)) => (n.unwrap_or(1), m),
        (None, None) => (1, search::DEFAULT_MAX_ORDER),
    };
    if to > search::DEFAULT_MAX_ORDER {
        writeln!(
            out,
            "# note: orders above {} may take a long time",
            search::DEFAULT_MAX_ORDER
        )?;
    }
    for order in from..=to {
        let spec = SearchSpec {
            order,
            require: require.clone(),
            forbid: forbid.clone(),
            mode,
            threads: args.threads,
        };
        match search::find(&spec)? {
            SearchResult::Found {
                table,
                witnesses,
                nodes,
            } => {
                writeln!(out, "# found at order {order} after {nodes} search nodes")?;
                for w in witnesses {
                    writeln!(out, "# {w}")?;
                }
                write!(out, "{table}")?;
                return Ok(0);
            }
            SearchResult::Exhausted { nodes, .. } => {
                writeln!(out, "# order {order}: no such loop ({nodes} search nodes)")?;
            }
        }
    }
    writeln!(out, "# none found up to order {to}")?;
    Ok(0)
}

fn reproduce(args: ReproduceArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let threads = args.threads.unwrap_or_else(|| {
        std::thread::available_parallelism().map_or(1, |n| n.get())
    });
    if threads == 0 {
        return Err(Failure(EXIT_USAGE, "thread budget must be positive".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Failure(EXIT_USAGE, e.to_string()))?;
    let targets: &[Target] = match args.target {
        Target::All => &[Target::Examples, Target::Table2, Target::Table3, Target::Figure1],
        ref t => std::slice::from_ref(t),
    };
    let needs_catalog = targets
        .iter()
        .any(|t| matches!(t, Target::Table3 | Target::Figure1));
    let evidence = needs_catalog.then(|| pool.install(|| Evidence::new(args.max_order)));
    let mut consistent = true;
    for target in targets {
        let report = match target {
            Target::Examples => examples_report(),
            Target::Table2 => classify::verify_table2(),
            Target::Table3 => pool.install(|| {
                classify::verify_table3(evidence.as_ref().expect("catalog"), args.max_order)
            }),
            Target::Figure1 => classify::verify_figure1(evidence.as_ref().expect("catalog")),
            Target::All => unreachable!("expanded above"),
        };
        consistent &= report.is_consistent();
        match args.format {
            Format::Text => write!(out, "{}", report.render_text())?,
            Format::Records => write!(out, "{}", report.render_records())?,
        }
    }
    Ok(if consistent { 0 } else { EXIT_MISMATCH })
}

/// Caption claims of the example loops and the behaviour of Chein's
/// construction.
fn examples_report() -> Report {
    let mut report = Report::new("example loops");
    let mut record = |subject: String, claim: String, ok: bool| {
        if ok {
            report.certify(claim, Evidenced::Checked { subject });
        } else {
            report
                .mismatches
                .push(ClassifyError::ClaimFailed { subject, claim });
        }
    };
    for ex in PaperExample::ALL {
        for c in verify_claims(ex) {
            record(ex.to_string(), format!("{ex} {}", c.statement), c.ok);
        }
    }
    let groups: Vec<(&str, FiniteGroup)> = vec![
        ("S3", symmetric_group_3()),
        ("D4", dihedral_group(8)),
        ("Z2", cyclic_group(2)),
        ("Z4", cyclic_group(4)),
        ("Z2xZ2", direct_product(&cyclic_group(2), &cyclic_group(2))),
    ];
    for (label, g) in groups {
        let m = chein_double(&g);
        let moufang = eval::satisfies_variety(&m, Variety::ML);
        let ok = moufang && m.is_associative() == g.is_abelian();
        let kind = if g.is_abelian() {
            "associative"
        } else {
            "not associative"
        };
        record(
            format!("M({label},2)"),
            format!("M({label},2) is Moufang and {kind}"),
            ok,
        );
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut argv = vec!["bolmoufang"];
        argv.extend_from_slice(args);
        let code = run(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn name_command() {
        let (code, out, _) = run_str(&["name", "x((yy)z)=((xy)y)z"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("C25 (RC-loop class)"), "{out}");
    }

    #[test]
    fn dual_command() {
        let (code, out, _) = run_str(&["dual", "B35"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("E13 x(y(zy))=(xy)(zy)"), "{out}");
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run_str(&["name", "x(yz)=x(yz)"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["check", "/nonexistent.loop"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["enumerate", "--order", "0"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["find", "--order", "3", "--require", "QQ"]).0, EXIT_USAGE);
    }

    #[test]
    fn enumerate_counts() {
        let (code, out, _) = run_str(&["enumerate", "--order", "5", "--count-only"]);
        assert_eq!(code, 0);
        assert_eq!(out.trim(), "56");
    }
}
