use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use hyperseq::calculus::{RuleId, SystemId};
use hyperseq::checker::{
    axiom_template, check_proof, hilbert_to_hyperseq, proof_to_string, read_proof, AxiomName, HilbertProof,
    HilbertStep, Proof,
};
use hyperseq::search::{prove_counted, SearchConfig, SearchOutcome};
use hyperseq::semantics::{valid_in, Validity};
use hyperseq::syntax::{hyper_image, parse_formula, parse_hypersequent, Formula};
use hyperseq::transform::{self, Engine, Options, TransformTrace};

macro_rules! say {
    ($($t:tt)*) => {
        put(&format!("{}\n", format_args!($($t)*)))
    };
}

#[derive(Parser)]
#[command(name = "hyperseq", version, about = "Two-sorted hypersequent calculi for modal logics")]
struct Cli {
    /// key=value defaults for system, fuel and depth.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Commands,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Atomize,
    T2Elim,
    Regularize,
    ToStd,
    #[value(name = "restrict-52")]
    Restrict52,
    ReduceCut,
    CutElim,
}

#[derive(Subcommand)]
enum Commands {
    /// Check a proof file.
    Check {
        #[arg(long)]
        system: Option<String>,
        file: PathBuf,
    },
    /// Print the formula image of a hypersequent.
    Image { hypersequent: String },
    /// Print the proof of an axiom instance.
    Expand {
        /// One of K, T, D, 4, B, 5.
        #[arg(long)]
        axiom: String,
        /// Formula arguments in order.
        #[arg(long = "arg")]
        args: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Translate a Hilbert proof into a hypersequent proof.
    Bridge {
        #[arg(long)]
        system: Option<String>,
        /// One step per line: `taut F`, `axiom NAME F; ...`, `mp I J`, `nec I`.
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a proof transformation.
    Transform {
        #[arg(value_enum)]
        kind: Kind,
        #[arg(long)]
        system: Option<String>,
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long)]
        assert_each_step: bool,
        #[arg(long)]
        fuel: Option<u64>,
    },
    /// Search for a cut-free proof.
    Prove {
        #[arg(long)]
        system: Option<String>,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long)]
        no_loop_check: bool,
        /// Extra rules to allow; only `cut` is recognised.
        #[arg(long)]
        allow: Vec<String>,
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long)]
        emit: Option<PathBuf>,
        goal: String,
    },
    /// Check the image of a hypersequent on small Kripke models.
    Validate {
        #[arg(long)]
        system: Option<String>,
        #[arg(long, default_value_t = 3)]
        worlds: usize,
        hypersequent: String,
    },
    /// Golden corpus.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
}

#[derive(Subcommand)]
enum CorpusAction {
    /// Check every proof listed in DIR/manifest.
    Run {
        #[arg(default_value = "proofs")]
        dir: PathBuf,
    },
    /// Write the built-in corpus to DIR.
    Write {
        #[arg(default_value = "proofs")]
        dir: PathBuf,
    },
}

enum Fail {
    Usage(String),
    Failed(String),
}

type Res = Result<(), Fail>;

fn usage<E: std::fmt::Display>(e: E) -> Fail {
    Fail::Usage(e.to_string())
}

fn failed<E: std::fmt::Display>(e: E) -> Fail {
    Fail::Failed(e.to_string())
}

#[derive(Default)]
struct Config {
    system: Option<String>,
    fuel: Option<u64>,
    depth: Option<usize>,
}

impl Config {
    fn load(path: Option<&Path>) -> Result<Config, Fail> {
        let mut c = Config::default();
        if let Some(path) = path {
            let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            for (n, line) in text.lines().enumerate() {
                let line = line.split('#').next().unwrap_or("").trim();
                if line.is_empty() || line.starts_with('[') {
                    continue;
                }
                let (k, v) = line
                    .split_once('=')
                    .ok_or_else(|| usage(format!("{}:{}: expected key = value", path.display(), n + 1)))?;
                let v = v.trim().trim_matches('"');
                let bad = |_| usage(format!("{}:{}: bad value {v}", path.display(), n + 1));
                match k.trim() {
                    "system" => c.system = Some(v.to_string()),
                    "fuel" => c.fuel = Some(v.parse().map_err(bad)?),
                    "depth" => c.depth = Some(v.parse().map_err(bad)?),
                    other => return Err(usage(format!("{}:{}: unknown key {other}", path.display(), n + 1))),
                }
            }
        }
        if let Ok(v) = std::env::var("HYPERSEQ_FUEL") {
            c.fuel = Some(v.parse().map_err(|_| usage(format!("HYPERSEQ_FUEL: bad value {v}")))?);
        }
        Ok(c)
    }

    fn system(&self, flag: &Option<String>) -> Result<SystemId, Fail> {
        let name = flag
            .as_ref()
            .or(self.system.as_ref())
            .ok_or_else(|| usage("no system given (use --system or a config file)"))?;
        name.parse().map_err(usage)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let r = Config::load(cli.config.as_deref()).and_then(|cfg| run(&cli, &cfg));
    match r {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail::Failed(m)) => {
            if !m.is_empty() {
                eprintln!("{m}");
            }
            ExitCode::from(1)
        }
        Err(Fail::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli, cfg: &Config) -> Res {
    let fmt = cli.format;
    match &cli.command {
        Commands::Check { system, file } => {
            let sys = cfg.system(system)?;
            let p = read_proof(file).map_err(usage)?;
            check(&p, sys, fmt)
        }
        Commands::Image { hypersequent } => {
            let h = parse_hypersequent(hypersequent).map_err(usage)?;
            let img = hyper_image(&h);
            emit(fmt, &img.to_string(), json!({ "image": img.to_string() }));
            Ok(())
        }
        Commands::Expand { axiom, args, out } => {
            let name: AxiomName = axiom.parse().map_err(usage)?;
            let fs = args.iter().map(|a| parse_formula(a)).collect::<Result<Vec<_>, _>>().map_err(usage)?;
            let p = axiom_template(name, &fs).map_err(usage)?;
            output_proof(&p, out.as_deref())
        }
        Commands::Bridge { system, file, out } => {
            let sys = cfg.system(system)?;
            let text = fs::read_to_string(file).map_err(|e| usage(format!("{}: {e}", file.display())))?;
            let hp = parse_hilbert(&text)?;
            let p = hilbert_to_hyperseq(&hp, sys).map_err(failed)?;
            output_proof(&p, out.as_deref())
        }
        Commands::Transform {
            kind,
            system,
            file,
            out,
            trace,
            assert_each_step,
            fuel,
        } => {
            let sys = cfg.system(system)?;
            let p = read_proof(file).map_err(usage)?;
            let opts = Options {
                fuel: fuel.or(cfg.fuel).unwrap_or(transform::DEFAULT_FUEL),
                assert_each_step: *assert_each_step,
            };
            run_transform(*kind, sys, &p, opts, out.as_deref(), trace.as_deref())
        }
        Commands::Prove {
            system,
            depth,
            no_loop_check,
            allow,
            budget,
            emit: out,
            goal,
        } => {
            let sys = cfg.system(system)?;
            let goal = parse_hypersequent(goal).map_err(usage)?;
            let mut sc = SearchConfig::for_system(sys).depth(depth.or(cfg.depth).unwrap_or(12));
            sc.loop_check = !no_loop_check;
            if let Some(b) = budget {
                sc.node_budget = *b;
            }
            for r in allow {
                match r.as_str() {
                    "cut" => {
                        sc.allow_rules.insert(RuleId::Cut);
                    }
                    other => return Err(usage(format!("--allow: unknown rule {other}"))),
                }
            }
            let (res, nodes) = prove_counted(&goal, sys, &sc);
            match res {
                SearchOutcome::Found(p) => {
                    emit(
                        fmt,
                        &format!("proof found ({} nodes, {nodes} goals visited)", p.node_count()),
                        json!({ "outcome": "found", "nodes": p.node_count(), "visited": nodes }),
                    );
                    if let Some(path) = out {
                        write_file(path, &proof_to_string(&p))?;
                    }
                    Ok(())
                }
                SearchOutcome::ExhaustedBound => Err(report_fail(fmt, "no proof within bound", nodes)),
                SearchOutcome::BudgetExceeded => {
                    Err(report_fail(fmt, "no proof within bound (node budget exceeded)", nodes))
                }
            }
        }
        Commands::Validate {
            system,
            worlds,
            hypersequent,
        } => {
            let sys = cfg.system(system)?;
            if !(1..=5).contains(worlds) {
                return Err(usage("--worlds must be in 1..=5"));
            }
            let h = parse_hypersequent(hypersequent)
                .or_else(|_| parse_formula(hypersequent).map(|f| parse_hypersequent(&format!("-> {f}")).unwrap()))
                .map_err(usage)?;
            let v = valid_in(&hyper_image(&h), sys, *worlds);
            let text = v.to_string();
            emit(fmt, text.trim_end(), json!({ "valid": v.is_valid(), "report": text.trim_end() }));
            match v {
                Validity::Valid { .. } => Ok(()),
                Validity::Countermodel(_) => Err(Fail::Failed(String::new())),
            }
        }
        Commands::Corpus { action } => match action {
            CorpusAction::Run { dir } => corpus_run(dir, fmt),
            CorpusAction::Write { dir } => corpus_write(dir),
        },
    }
}

fn report_fail(fmt: Format, msg: &str, nodes: usize) -> Fail {
    match fmt {
        Format::Text => Fail::Failed(format!("{msg} ({nodes} goals visited)")),
        Format::Json => {
            say!("{}", json!({ "outcome": msg, "visited": nodes }));
            Fail::Failed(String::new())
        }
    }
}

/// Write to stdout, ignoring a closed pipe.
fn put(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn emit(fmt: Format, text: &str, value: serde_json::Value) {
    match fmt {
        Format::Text => say!("{text}"),
        Format::Json => say!("{value}"),
    }
}

fn write_file(path: &Path, text: &str) -> Res {
    fs::write(path, text).map_err(|e| failed(format!("{}: {e}", path.display())))
}

fn output_proof(p: &Proof, out: Option<&Path>) -> Res {
    let text = proof_to_string(p);
    match out {
        Some(path) => write_file(path, &text),
        None => {
            put(&text);
            Ok(())
        }
    }
}

fn check(p: &Proof, sys: SystemId, fmt: Format) -> Res {
    let r = check_proof(p, sys);
    let rules: BTreeMap<String, usize> = r.rules_used.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    let failure = r.first_failure();
    let text = match &failure {
        None => format!("ok: {} nodes in {sys}, end {}", r.node_count, p.conclusion),
        Some(m) => format!("FAILED in {sys}: {m}"),
    };
    emit(
        fmt,
        &text,
        json!({
            "ok": r.ok,
            "system": sys.to_string(),
            "nodes": r.node_count,
            "rules": rules,
            "failure": failure,
        }),
    );
    if r.ok {
        Ok(())
    } else {
        Err(Fail::Failed(String::new()))
    }
}

fn run_transform(kind: Kind, sys: SystemId, p: &Proof, opts: Options, out: Option<&Path>, trace: Option<&Path>) -> Res {
    use transform::{atomize_initials, cut, five, regular, t2, to_standard};
    let mut eng = Engine::new(sys, opts);
    let result = match kind {
        Kind::Atomize => atomize_initials(p),
        Kind::T2Elim => t2::eliminate_t2_in(&mut eng, p),
        Kind::Regularize => regular::regularize_in(&mut eng, p),
        Kind::Restrict52 => five::restrict_52_in(&mut eng, p),
        Kind::ReduceCut => cut::reduce_in(&mut eng, p),
        Kind::CutElim => cut::eliminate_cut_in(&mut eng, p),
        Kind::ToStd => {
            let r = to_standard(p, sys);
            write_trace(trace, &eng.trace)?;
            let s = r.map_err(failed)?;
            return match out {
                Some(path) => write_file(path, &s.to_string()),
                None => {
                    put(&s.to_string());
                    Ok(())
                }
            };
        }
    };
    write_trace(trace, &eng.trace)?;
    let q = result.map_err(failed)?;
    let r = check_proof(&q, sys);
    if !r.ok {
        return Err(failed(format!("result does not check: {}", r.first_failure().unwrap_or_default())));
    }
    output_proof(&q, out)
}

fn write_trace(path: Option<&Path>, t: &TransformTrace) -> Res {
    match path {
        Some(path) => write_file(path, &t.to_string()),
        None => Ok(()),
    }
}

fn parse_hilbert(text: &str) -> Result<HilbertProof, Fail> {
    let mut steps = vec![];
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |m: &str| usage(format!("line {}: {m}", n + 1));
        let (head, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        let index = |s: &str| s.parse::<usize>().map_err(|_| err("expected a step number"));
        let formula = |s: &str| parse_formula(s.trim()).map_err(|e| err(&e.to_string()));
        let step = match head {
            "taut" => HilbertStep::Tautology {
                formula: formula(rest)?,
                proof: None,
            },
            "axiom" => {
                let (name, args) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
                let name: AxiomName = name.parse().map_err(|e: hyperseq::calculus::UnknownName| err(&e.to_string()))?;
                let args = args
                    .split(';')
                    .filter(|s| !s.trim().is_empty())
                    .map(formula)
                    .collect::<Result<Vec<Formula>, _>>()?;
                HilbertStep::Axiom { name, args }
            }
            "mp" => {
                let ij: Vec<&str> = rest.split_whitespace().collect();
                if ij.len() != 2 {
                    return Err(err("mp takes two step numbers"));
                }
                HilbertStep::ModusPonens(index(ij[0])?, index(ij[1])?)
            }
            "nec" => HilbertStep::Necessitation(index(rest)?),
            other => return Err(err(&format!("unknown step kind {other}"))),
        };
        steps.push(step);
    }
    Ok(HilbertProof::new(steps))
}

fn corpus_run(dir: &Path, fmt: Format) -> Res {
    let manifest = dir.join("manifest");
    let text = fs::read_to_string(&manifest).map_err(|e| usage(format!("{}: {e}", manifest.display())))?;
    let mut rows = vec![];
    let mut all = true;
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        let (name, sys) = line
            .split_once(char::is_whitespace)
            .ok_or_else(|| usage(format!("bad manifest line: {line}")))?;
        let sys: SystemId = sys.trim().parse().map_err(usage)?;
        let (ok, detail) = match read_proof(dir.join(format!("{name}.proof"))) {
            Err(e) => (false, e.to_string()),
            Ok(p) => {
                let r = check_proof(&p, sys);
                let d = r.first_failure().unwrap_or_else(|| format!("{} nodes", r.node_count));
                (r.ok, d)
            }
        };
        all &= ok;
        rows.push((name.to_string(), sys, ok, detail));
    }
    match fmt {
        Format::Text => {
            for (name, sys, ok, detail) in &rows {
                say!("{name:<18} {:<5} {} {detail}", sys.to_string(), if *ok { "PASS" } else { "FAIL" });
            }
        }
        Format::Json => {
            let v: Vec<_> = rows
                .iter()
                .map(|(n, s, ok, d)| json!({ "name": n, "system": s.to_string(), "ok": ok, "detail": d }))
                .collect();
            say!("{}", serde_json::Value::Array(v));
        }
    }
    if all {
        Ok(())
    } else {
        Err(Fail::Failed(String::new()))
    }
}

fn corpus_write(dir: &Path) -> Res {
    fs::create_dir_all(dir).map_err(|e| failed(format!("{}: {e}", dir.display())))?;
    let mut manifest = String::new();
    for fg in hyperseq::corpus::figures() {
        write_file(&dir.join(format!("{}.proof", fg.name)), &proof_to_string(&fg.proof))?;
        manifest.push_str(&format!("{} {}\n", fg.name, fg.system));
    }
    write_file(&dir.join("manifest"), &manifest)
}
