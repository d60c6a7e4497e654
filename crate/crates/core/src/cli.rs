//! The `namefix` command-line front end.
//!
//! Exit status: 0 success, 1 bad input, 2 file I/O, 3 alpha-check mismatch,
//! 4 internal invariant violation, 64 usage.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::dot::{graph_to_dot, trace_to_dot};
use crate::equiv::alpha_equiv;
use crate::error::Error;
use crate::fix::{find_capture, name_fix, CaptureSet};
use crate::graph::NameGraph;
use crate::lambda::{parse_lambda, pretty_lambda, LambdaResolver};
use crate::resolver::Resolver;
use crate::simpl::{
    inline_raw, lambda_lift_raw, parse_simpl, parse_simpl_exp, pretty_simpl, resolve_simpl,
    subst_p, SimplProgram, SimplResolver,
};
use crate::stm::{compile, parse_stm, resolve_stm, StmResolver};
use crate::term::{Label, Term};

pub const EXIT_INPUT: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;
pub const EXIT_INVARIANT: i32 = 4;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(name = "namefix", version, about = "Capture-free program transformations")]
pub struct Cli {
    /// Print the raw transformation output and report its capture on stderr.
    #[arg(long, global = true)]
    pub no_fix: bool,
    /// Write DOT files for the source graph, target graph and each fix iteration.
    #[arg(long, global = true)]
    pub emit_graphs: bool,
    /// Print names as `name@id`.
    #[arg(long, global = true)]
    pub debug_labels: bool,
    /// Log each fix iteration on stderr.
    #[arg(long, global = true)]
    pub trace: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compile a state machine (.stm) to SIMPL.
    Compile { input: PathBuf },
    /// Substitute an expression for a variable in a SIMPL program.
    Subst {
        input: PathBuf,
        var: String,
        expr: String,
    },
    /// Inline all calls of a top-level function.
    Inline { input: PathBuf, function: String },
    /// Lift local functions to the top level.
    Lift { input: PathBuf },
    /// Print the name graph of a .lam, .spl or .stm file as DOT.
    Graph { input: PathBuf },
    /// Exit 0 iff two programs are alpha-equivalent.
    Alphacheck { a: PathBuf, b: PathBuf },
    /// Fix a lambda term against the graph of a source term; labels are matched by pin.
    Trace { source: PathBuf, target: PathBuf },
}

/// Everything an invocation produced.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Output {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
enum Failure {
    Io(String),
    Input(String),
    Mismatch,
    Invariant(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::IterationBudgetExceeded { .. }
            | Error::LabelNotFound(_)
            | Error::InconsistentLabel { .. } => Failure::Invariant(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<crate::error::ParseError> for Failure {
    fn from(e: crate::error::ParseError) -> Self {
        Failure::Input(format!("parse error at {e}"))
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli),
        Err(e) => {
            let status = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let text = e.render().to_string();
            if e.use_stderr() {
                Output {
                    status,
                    stderr: text,
                    ..Output::default()
                }
            } else {
                Output {
                    status,
                    stdout: text,
                    ..Output::default()
                }
            }
        }
    }
}

pub fn execute(cli: &Cli) -> Output {
    let mut out = Output::default();
    let result = Session { cli, out: &mut out }.dispatch();
    match result {
        Ok(()) => {}
        Err(Failure::Mismatch) => out.status = EXIT_MISMATCH,
        Err(Failure::Io(m)) => {
            out.status = EXIT_IO;
            out.stderr.push_str(&format!("error: {m}\n"));
        }
        Err(Failure::Input(m)) => {
            out.status = EXIT_INPUT;
            out.stderr.push_str(&format!("error: {m}\n"));
        }
        Err(Failure::Invariant(m)) => {
            out.status = EXIT_INVARIANT;
            out.stderr.push_str(&format!("internal error: {m}\n"));
        }
    }
    out
}

struct Session<'a> {
    cli: &'a Cli,
    out: &'a mut Output,
}

/// The pieces a transformation command hands to [`Session::finish`].
struct Job<'a> {
    input: &'a Path,
    source: Term,
    source_graph: NameGraph,
    source_decls: BTreeSet<Label>,
    raw: Term,
    resolver: &'a dyn Resolver,
    show: &'a dyn Fn(&Term, bool) -> Result<String, Error>,
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn with_suffix(input: &Path, suffix: &str) -> PathBuf {
    let mut s = input.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn show_simpl(t: &Term, labels: bool) -> Result<String, Error> {
    Ok(pretty_simpl(&SimplProgram::from_term(t)?, labels))
}

fn show_lambda(t: &Term, labels: bool) -> Result<String, Error> {
    Ok(pretty_lambda(t, labels) + "\n")
}

enum Lang {
    Lambda,
    Simpl,
    Stm,
}

fn lang_of(path: &Path) -> Result<Lang, Failure> {
    match path.extension().and_then(|e| e.to_str()) {
        Some("lam") => Ok(Lang::Lambda),
        Some("spl") => Ok(Lang::Simpl),
        Some("stm") => Ok(Lang::Stm),
        _ => Err(Failure::Input(format!(
            "{}: unknown file type (expected .lam, .spl or .stm)",
            path.display()
        ))),
    }
}

fn load(path: &Path) -> Result<(Term, &'static dyn Resolver), Failure> {
    let lang = lang_of(path)?;
    let src = read(path)?;
    Ok(match lang {
        Lang::Lambda => (parse_lambda(&src)?, &LambdaResolver),
        Lang::Simpl => (parse_simpl(&src)?.to_term(), &SimplResolver),
        Lang::Stm => (parse_stm(&src)?.to_term(), &StmResolver),
    })
}

impl Session<'_> {
    fn dispatch(&mut self) -> Result<(), Failure> {
        match &self.cli.command {
            Command::Compile { input } => {
                let m = parse_stm(&read(input)?)?;
                let raw = compile(&m).to_term();
                self.finish(Job {
                    input,
                    source: m.to_term(),
                    source_graph: resolve_stm(&m),
                    source_decls: StmResolver.declarations(&m.to_term())?,
                    raw,
                    resolver: &SimplResolver,
                    show: &show_simpl,
                })
            }
            Command::Subst { input, var, expr } => {
                let p = parse_simpl(&read(input)?)?;
                let e = parse_simpl_exp(expr)?;
                self.simpl_job(input, &p, subst_p(&p, var, &e))
            }
            Command::Inline { input, function } => {
                let p = parse_simpl(&read(input)?)?;
                let raw = inline_raw(&p, function)?;
                self.simpl_job(input, &p, raw)
            }
            Command::Lift { input } => {
                let p = parse_simpl(&read(input)?)?;
                self.simpl_job(input, &p, lambda_lift_raw(&p))
            }
            Command::Graph { input } => {
                let (t, r) = load(input)?;
                let g = r.resolve(&t)?;
                let name = input.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
                self.out.stdout.push_str(&graph_to_dot(
                    &name,
                    &g,
                    &t,
                    &r.declarations(&t)?,
                    &CaptureSet::default(),
                ));
                Ok(())
            }
            Command::Alphacheck { a, b } => {
                let (ta, r) = load(a)?;
                let (tb, _) = load(b)?;
                if r.language() != lang_of(b).map(|l| lang_name(&l))? {
                    return Err(Failure::Input("alphacheck needs two files of the same language".into()));
                }
                let (ta, tb) = (ta.relabel_by_position(1), tb.relabel_by_position(1));
                if alpha_equiv(&ta, &tb, r)? {
                    self.out.stdout.push_str("alpha-equivalent\n");
                    Ok(())
                } else {
                    self.out.stdout.push_str("not alpha-equivalent\n");
                    Err(Failure::Mismatch)
                }
            }
            Command::Trace { source, target } => {
                let s = parse_lambda(&read(source)?)?;
                let t = parse_lambda(&read(target)?)?;
                let gs = LambdaResolver.resolve(&s)?;
                let decls = LambdaResolver.declarations(&s)?;
                let (fixed, trace) = name_fix(&gs, &t, &LambdaResolver)?;
                self.out.stdout.push_str(&trace.log());
                self.out.stdout.push_str(&format!("iterations: {}\n", trace.len()));
                self.out.stdout.push_str(&show_lambda(&fixed, true)?);
                if self.cli.emit_graphs {
                    self.emit(target, &s, &gs, &decls, &t, &LambdaResolver, &trace)?;
                }
                Ok(())
            }
        }
    }

    fn simpl_job(&mut self, input: &Path, p: &SimplProgram, raw: SimplProgram) -> Result<(), Failure> {
        let source = p.to_term();
        self.finish(Job {
            input,
            source_graph: resolve_simpl(p),
            source_decls: SimplResolver.declarations(&source)?,
            source,
            raw: raw.to_term(),
            resolver: &SimplResolver,
            show: &show_simpl,
        })
    }

    fn finish(&mut self, job: Job<'_>) -> Result<(), Failure> {
        let labels = self.cli.debug_labels;
        let (result, trace) = if self.cli.no_fix {
            let gt = job.resolver.resolve(&job.raw)?;
            let capture = find_capture(&job.source_graph, &gt);
            self.out.stderr.push_str(&format!("capture: {capture}\n"));
            for e in capture.iter() {
                self.out.stderr.push_str(&format!("  {e}\n"));
            }
            (job.raw.clone(), None)
        } else {
            let (t, trace) = name_fix(&job.source_graph, &job.raw, job.resolver)?;
            if self.cli.trace {
                self.out.stderr.push_str(&trace.log());
                self.out.stderr.push_str(&format!("iterations: {}\n", trace.len()));
            }
            (t, Some(trace))
        };
        self.out.stdout.push_str(&(job.show)(&result, labels)?);
        if self.cli.emit_graphs {
            let trace = trace.unwrap_or_default();
            self.emit(
                job.input,
                &job.source,
                &job.source_graph,
                &job.source_decls,
                &job.raw,
                job.resolver,
                &trace,
            )?;
        }
        Ok(())
    }

    #[allow(clippy::too_many_arguments)]
    fn emit(
        &mut self,
        input: &Path,
        source: &Term,
        gs: &NameGraph,
        source_decls: &BTreeSet<Label>,
        raw: &Term,
        r: &dyn Resolver,
        trace: &crate::fix::FixTrace,
    ) -> Result<(), Failure> {
        write(
            &with_suffix(input, ".src.dot"),
            &graph_to_dot("source", gs, source, source_decls, &CaptureSet::default()),
        )?;
        let gt = r.resolve(raw)?;
        let target_decls = r.declarations(raw)?;
        let capture = find_capture(gs, &gt);
        write(
            &with_suffix(input, ".tgt.dot"),
            &graph_to_dot("target", &gt, raw, &target_decls, &capture),
        )?;
        for (k, dot) in trace_to_dot(trace, &target_decls).iter().enumerate() {
            write(&with_suffix(input, &format!(".fix{}.dot", k + 1)), dot)?;
        }
        Ok(())
    }
}

fn lang_name(l: &Lang) -> &'static str {
    match l {
        Lang::Lambda => LambdaResolver.language(),
        Lang::Simpl => SimplResolver.language(),
        Lang::Stm => StmResolver.language(),
    }
}
