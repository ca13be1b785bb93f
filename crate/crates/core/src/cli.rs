//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::files;
use crate::reduce::{self, BorderPolicy, Constants, GraphSystem, PipelineOptions};
use crate::verify::{self, CheckEntry, Report, Variety};

#[derive(Debug, Parser)]
#[command(
    name = "kappa-reduce",
    version,
    about = "Build kappa-term solutions of graph equation systems over V*D"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a graph file, its semigroup, and delta(eta) = phi.
    Validate(Common),
    /// Print the constants n_S, p_eta, ell_eta, L, E, Q, q_Q, M, k and the borders.
    Constants(Common),
    /// Print the confinality classes, z_v per vertex and the borders.
    Borders(Common),
    /// Construct eta' and verify it.
    Reduce(ReduceArgs),
    /// Verify a labeling of the graph.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Policy {
    Periodic,
    Longest,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Graph file; it names its semigroup file.
    pub graph: PathBuf,
    /// Cap for the search of E.
    #[arg(long)]
    pub ecap: Option<usize>,
    /// Choice of class representatives.
    #[arg(long, value_enum, default_value = "periodic")]
    pub policy: Policy,
}

#[derive(Debug, Args)]
pub struct Checking {
    /// sl, g, or sample:<path> for a file of [[member]] tables.
    #[arg(long, default_value = "sl")]
    pub variety: String,
    /// Largest k' for the V*D_k' checks (default 2k).
    #[arg(long)]
    pub kmax: Option<usize>,
    /// Write the JSON report here instead of standard output.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReduceArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub checking: Checking,
    /// Labels replacing eta'_k on the simplified graph.
    #[arg(long)]
    pub eta_k: Option<PathBuf>,
    /// Print splitting factorizations and reduced forms to standard error.
    #[arg(long)]
    pub trace: bool,
    /// Write eta' as a labeling file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub checking: Checking,
    /// Labeling file to check against the graph.
    #[arg(long)]
    pub labels: PathBuf,
}

#[derive(Serialize)]
struct NamedTerm {
    name: String,
    term: String,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    command: &'static str,
    passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    constants: Option<&'a Constants>,
    #[serde(skip_serializing_if = "Option::is_none")]
    eta_prime: Option<Vec<NamedTerm>>,
    entries: &'a [CheckEntry],
}

fn parse_variety(s: &str) -> Result<Variety> {
    match s {
        "sl" => Ok(Variety::Sl),
        "g" => Ok(Variety::G),
        _ => match s.strip_prefix("sample:") {
            Some(p) => Ok(Variety::Sample(files::load_sample(&PathBuf::from(p))?)),
            None => Err(Error::input(format!(
                "unknown variety {s:?}; expected sl, g or sample:<path>"
            ))),
        },
    }
}

fn policy(p: Policy) -> BorderPolicy {
    match p {
        Policy::Periodic => BorderPolicy::Periodic,
        Policy::Longest => BorderPolicy::Longest,
    }
}

fn context(g: &GraphSystem, c: &Common) -> Result<(GraphSystem, reduce::ReductionContext)> {
    let (s, _) = reduce::simplify(g).map_err(|e| e.in_stage("simplify"))?;
    let ctx = reduce::compute_context(&s, reduce::ell_eta(g), policy(c.policy), c.ecap)
        .map_err(|e| e.in_stage("constants"))?;
    Ok((s, ctx))
}

fn emit_report(
    out: &mut dyn Write,
    path: &Option<PathBuf>,
    command: &'static str,
    report: &Report,
    constants: Option<&Constants>,
    eta_prime: Option<Vec<NamedTerm>>,
) -> Result<()> {
    let doc = JsonReport {
        command,
        passed: report.passed(),
        constants,
        eta_prime,
        entries: &report.entries,
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("report serializes");
    text.push('\n');
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn status(report: &Report) -> i32 {
    if report.passed() {
        0
    } else {
        1
    }
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Validate(c) => {
            let g = files::load_graph(&c.graph)?;
            writeln!(
                out,
                "ok: {} vertices, {} edges, semigroup of size {}",
                g.vertices.len(),
                g.edges.len(),
                g.delta.semigroup.size()
            )?;
            Ok(0)
        }
        Command::Constants(c) => {
            let g = files::load_graph(&c.graph)?;
            let (_, ctx) = context(&g, &c)?;
            out.write_all(ctx.describe(g.delta.alphabet()).as_bytes())?;
            Ok(0)
        }
        Command::Borders(c) => {
            let g = files::load_graph(&c.graph)?;
            let (s, ctx) = context(&g, &c)?;
            let a = g.delta.alphabet();
            for (i, cl) in ctx.classes.iter().enumerate() {
                writeln!(out, "class {}: y = {}", i + 1, a.show_inf(&cl.y))?;
                for (v, z) in &cl.members {
                    writeln!(out, "  {}: z = {}", s.vertices[*v], a.show(z))?;
                }
                let b = &ctx.borders[i];
                writeln!(
                    out,
                    "  border (M = {}): {}{}",
                    ctx.constants.m,
                    a.show(&b.word),
                    b.root.as_ref().map_or(String::new(), |u| format!(
                        ", periodic with root {}",
                        a.show(u)
                    ))
                )?;
            }
            Ok(0)
        }
        Command::Reduce(r) => {
            let g = files::load_graph(&r.common.graph)?;
            let mut opts = PipelineOptions::new(parse_variety(&r.checking.variety)?);
            opts.policy = policy(r.common.policy);
            opts.ecap = r.common.ecap;
            opts.kmax = r.checking.kmax;
            opts.trace = r.trace;
            if let Some(p) = &r.eta_k {
                let (s, _) = reduce::simplify(&g).map_err(|e| e.in_stage("simplify"))?;
                opts.eta_k = Some(files::load_labeling(p, &s, &s.eta)?);
            }
            let res = reduce::pipeline(&g, &opts)?;
            if r.trace {
                err.write_all(res.trace.as_bytes())?;
            }
            let a = g.delta.alphabet();
            let named = res.eta_prime.as_ref().map(|l| {
                g.elements()
                    .map(|el| NamedTerm {
                        name: g.name(el).to_string(),
                        term: l.get(el).show(a),
                    })
                    .collect()
            });
            if let (Some(p), Some(l)) = (&r.out, &res.eta_prime) {
                std::fs::write(p, files::labeling_to_toml(&g, l))?;
            }
            emit_report(
                out,
                &r.checking.report,
                "reduce",
                &res.report,
                Some(&res.context.constants),
                named,
            )?;
            Ok(status(&res.report))
        }
        Command::Verify(v) => {
            let g = files::load_graph(&v.common.graph)?;
            let (_, ctx) = context(&g, &v.common)?;
            let labels = files::load_labeling(&v.labels, &g, &g.eta)?;
            let variety = parse_variety(&v.checking.variety)?;
            let mut report = verify::check_delta(&g, &labels);
            report.extend(verify::check_c1(&g, &labels));
            report.extend(verify::check_c2(&g, &labels));
            report.extend(verify::check_c3(&g, &labels, ctx.l()));
            report.extend(verify::check_equations(
                &g,
                &labels,
                &variety,
                v.checking.kmax.unwrap_or(2 * ctx.k()),
            ));
            emit_report(
                out,
                &v.checking.report,
                "verify",
                &report,
                Some(&ctx.constants),
                None,
            )?;
            Ok(status(&report))
        }
    }
}

/// Runs the command line `args` and returns the exit status: 0 success,
/// 1 failed check, 2 input error, 3 internal error.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 {
                write!(out, "{e}")
            } else {
                write!(err, "{e}")
            };
            return code;
        }
    };
    match execute(cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
