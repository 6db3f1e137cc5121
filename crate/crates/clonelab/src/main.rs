use clap::{Parser, Subcommand, ValueEnum};
use clonelab::emit::{self, Format};
use clonelab::format::{parse_literals, print_form, print_relation, Literal};
use clonelab::suites::{self, Check};
use clonelab::{budget, build_fig1_parallel, config};
use clonelab_core::canonical::classify;
use clonelab_core::closure::{member, pp_closure, qpp_closure, Verdict};
use clonelab_core::galois::{inv_bounded, pol_bounded, KOperation};
use clonelab_core::lattice::derive_post;
use clonelab_core::{to_disjunctive_form, Relation};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "clonelab", version, about = "Multi-sorted Boolean relational clones")]
struct Cli {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Pp,
    Qpp,
}

#[derive(Clone, Copy, ValueEnum)]
enum GaloisOp {
    Pol,
    Spol,
    Inv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Fig1,
    Post,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Lemmas,
    Galois,
    Canonical,
    Fig1,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the canonical disjunctive form of a key relation.
    Key { file: PathBuf },
    /// Print the canonical descriptor a relation is similar to.
    Classify { file: PathBuf },
    /// Print closure representatives of a language.
    Closure {
        #[arg(long, value_enum, default_value = "qpp")]
        mode: Mode,
        #[arg(long, default_value_t = 4)]
        cap: usize,
        file: PathBuf,
    },
    /// Decide whether a relation lies in the quantified clone of a language.
    Member {
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        lang: PathBuf,
        #[arg(long, default_value_t = 6)]
        cap: usize,
        #[arg(long, default_value_t = 4)]
        pol_cap: usize,
    },
    /// Bounded polymorphisms and invariants of a language.
    Galois {
        #[arg(value_enum)]
        op: GaloisOp,
        #[arg(long, default_value_t = 2)]
        cap: usize,
        /// Largest invariant arity for `inv`.
        #[arg(long, default_value_t = 2)]
        arity: usize,
        file: PathBuf,
    },
    /// Build the 1-sorted quantified clone lattice or its Post refinement.
    Lattice {
        #[arg(value_enum)]
        which: Which,
        #[arg(long, default_value_t = 4)]
        trunc: usize,
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
}

enum Failure {
    Property(String),
    Usage(String),
}

impl From<clonelab_core::Error> for Failure {
    fn from(e: clonelab_core::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn read_language(path: &Path) -> Result<Vec<Relation>, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let lits = parse_literals(&text).map_err(|e| Failure::Usage(format!("{}:{e}", path.display())))?;
    if lits.is_empty() {
        return Err(Failure::Usage(format!("{}: no relation literal", path.display())));
    }
    let rels: Vec<Relation> = lits.iter().map(Literal::relation).collect();
    if rels.iter().any(|r| r.k() != rels[0].k()) {
        return Err(Failure::Usage(format!("{}: literals disagree on k", path.display())));
    }
    Ok(rels)
}

fn read_one(path: &Path) -> Result<Relation, Failure> {
    let mut rels = read_language(path)?;
    if rels.len() != 1 {
        return Err(Failure::Usage(format!("{}: expected one relation literal, found {}", path.display(), rels.len())));
    }
    Ok(rels.remove(0))
}

fn print_op(f: &KOperation) -> String {
    let n = 1usize << f.arity();
    let tables: Vec<String> = (0..f.k())
        .map(|s| (0..n).map(|x| if f.value(s + 1, x) { '1' } else { '0' }).collect())
        .collect();
    format!("op k={} arity={} : {}", f.k(), f.arity(), tables.join(","))
}

fn report(checks: &[Check]) -> Result<String, Failure> {
    let mut out = String::new();
    for c in checks {
        let _ = writeln!(out, "{c}");
    }
    if suites::all_pass(checks) {
        Ok(out)
    } else {
        print!("{out}");
        Err(Failure::Property(format!("{} of {} checks failed", checks.iter().filter(|c| !c.pass).count(), checks.len())))
    }
}

fn write_to(path: &Path, lattice: &clonelab_core::lattice::Lattice, format: Format) -> Result<(), Failure> {
    emit::write(lattice, format, path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn run(cmd: Cmd) -> Result<String, Failure> {
    match cmd {
        Cmd::Key { file } => {
            let rel = read_one(&file)?;
            match to_disjunctive_form(&rel) {
                Some(f) => Ok(format!("{}\n", print_form(&f))),
                None => Err(Failure::Property("not a key relation".into())),
            }
        }
        Cmd::Classify { file } => {
            let rel = read_one(&file)?;
            match classify(&rel) {
                Some(d) => Ok(format!("{d}\n")),
                None => {
                    println!("none");
                    Err(Failure::Property("not similar to a canonical relation".into()))
                }
            }
        }
        Cmd::Closure { mode, cap, file } => {
            let langs = read_language(&file)?;
            let cfg = config(langs[0].k(), cap, 1);
            let cl = match mode {
                Mode::Pp => pp_closure(&langs, &cfg)?,
                Mode::Qpp => qpp_closure(&langs, &cfg)?,
            };
            let mut out = String::new();
            for r in cl.base().sorted() {
                let _ = writeln!(out, "{}", print_relation(&r));
            }
            Ok(out)
        }
        Cmd::Member { target, lang, cap, pol_cap } => {
            let t = read_one(&target)?;
            let langs = read_language(&lang)?;
            if t.k() != langs[0].k() {
                return Err(Failure::Usage("target and language disagree on k".into()));
            }
            let v = member(&t, &langs, &config(t.k(), cap, pol_cap))?;
            Ok(match v {
                Verdict::In => "IN\n",
                Verdict::Out => "OUT\n",
                Verdict::Undecided => "UNDECIDED\n",
            }
            .to_string())
        }
        Cmd::Galois { op, cap, arity, file } => {
            let langs = read_language(&file)?;
            let k = langs[0].k();
            let mut out = String::new();
            match op {
                GaloisOp::Pol | GaloisOp::Spol => {
                    for f in pol_bounded(&langs, k, cap, matches!(op, GaloisOp::Spol), budget())? {
                        let _ = writeln!(out, "{}", print_op(&f));
                    }
                }
                GaloisOp::Inv => {
                    let ops = pol_bounded(&langs, k, cap, true, budget())?;
                    for r in inv_bounded(&ops, k, arity, budget())? {
                        let _ = writeln!(out, "{}", print_relation(&r));
                    }
                }
            }
            Ok(out)
        }
        Cmd::Lattice { which, trunc, dot, json } => {
            let cfg = config(1, trunc.max(4) + 2, 4);
            let fig1 = build_fig1_parallel(trunc, &cfg)?;
            let post;
            let lat = match which {
                Which::Fig1 => &fig1,
                Which::Post => {
                    post = derive_post(&fig1, &cfg)?;
                    post.lattice()
                }
            };
            if let Some(p) = &dot {
                write_to(p, lat, Format::Dot)?;
            }
            if let Some(p) = &json {
                write_to(p, lat, Format::Json)?;
            }
            if dot.is_none() && json.is_none() {
                Ok(emit::render(lat, Format::Dot))
            } else {
                Ok(format!("{} nodes, {} edges\n", lat.len(), lat.edges().len()))
            }
        }
        Cmd::Verify { suite, k } => {
            if k == 0 {
                return Err(Failure::Usage("--k must be at least 1".into()));
            }
            let checks = match suite {
                Suite::Lemmas => suites::lemmas(k)?,
                Suite::Galois => suites::galois(k, 1, budget())?,
                Suite::Canonical => suites::canonical(k, budget())?,
                Suite::Fig1 => suites::fig1(4, &config(1, 6, 4), budget())?,
            };
            report(&checks)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            if !e.use_stderr() {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            eprintln!("error: {}", first.trim_start_matches("error: "));
            return ExitCode::from(2);
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 || rayon::ThreadPoolBuilder::new().num_threads(n).build_global().is_err() {
            eprintln!("error: cannot start {n} worker threads");
            return ExitCode::from(2);
        }
    }
    match run(cli.cmd) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Property(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
