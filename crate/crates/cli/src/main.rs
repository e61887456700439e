use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use sovcat_core::diagram::{self, Environment};
use sovcat_core::fusiondata::{self, FusionData};
use sovcat_core::groupmodel::{self, GroupZooEntry};
use sovcat_core::indicator;
use sovcat_core::numerics::{self, CMat, Scalar};
use sovcat_core::pairing::{self, PairingOptions, PairingReport};
use sovcat_core::{zoo, Error, ObjectWord, RepCategory, Tolerance};

const EXIT_VIOLATION: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NOT_APPLICABLE: u8 = 3;

#[derive(Parser)]
#[command(name = "sovcat", version, about = "Pairings, indicators and evenness audits for sovereign tensor categories")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Tolerance for numerical equality
    #[arg(long, global = true, default_value_t = 1e-8)]
    eps_eq: f64,
    /// Singular-value cutoff for rank decisions
    #[arg(long, global = true, default_value_t = 1e-9)]
    eps_rank: f64,
    /// Print machine-readable JSON instead of text
    #[arg(long, global = true)]
    json: bool,
    /// Also write the JSON report to this file
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Group zoo entry or group JSON file
    #[arg(long)]
    zoo: Option<String>,
    /// Fusion zoo entry or fusion JSON file
    #[arg(long)]
    fusion: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Frobenius–Schur indicators, categorical and from characters
    Indicators {
        #[command(flatten)]
        source: Source,
    },
    /// The pairing on Hom(1, X₁ ⊗ ... ⊗ X_ℓ)
    Pairing {
        #[arg(long)]
        zoo: String,
        /// Comma-separated labels, `^` for duals
        #[arg(long)]
        objects: String,
        /// σ = reversal and c = id; requires a palindromic tuple
        #[arg(long)]
        palindrome: bool,
        /// Adjacent transpositions s_k as comma-separated k (1-based)
        #[arg(long)]
        braid_word: Option<String>,
    },
    /// Exhaustive evenness audit over multisets of simples
    Scan {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 4)]
        max_len: usize,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Evaluate a diagram expression
    Eval {
        #[arg(long)]
        zoo: String,
        #[arg(long)]
        expr: String,
    },
    /// Seeded consistency checks on random intertwiners
    Selftest {
        /// Restrict to one group zoo entry
        #[arg(long)]
        zoo: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random intertwiners per word pair
        #[arg(long, default_value_t = 3)]
        samples: usize,
    },
    /// Write the fusion ring of a group zoo entry
    ExportFusion {
        #[arg(long)]
        zoo: String,
    },
}

enum Outcome {
    Ok,
    Violation,
    NotApplicable,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Violation) => ExitCode::from(EXIT_VIOLATION),
        Ok(Outcome::NotApplicable) => ExitCode::from(EXIT_NOT_APPLICABLE),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    let tol = Tolerance::new(cli.eps_eq, cli.eps_rank)?;
    match &cli.command {
        Command::Indicators { source } => indicators(cli, source, &tol),
        Command::Pairing {
            zoo,
            objects,
            palindrome,
            braid_word,
        } => pairing_cmd(cli, zoo, objects, *palindrome, braid_word.as_deref(), &tol),
        Command::Scan { source, max_len, jobs } => scan(cli, source, *max_len, *jobs, &tol),
        Command::Eval { zoo, expr } => eval(cli, zoo, expr, &tol),
        Command::Selftest { zoo, seed, samples } => selftest(cli, zoo.as_deref(), *seed, *samples, &tol),
        Command::ExportFusion { zoo } => export_fusion(cli, zoo, &tol),
    }
}

fn emit<T: Serialize>(cli: &Cli, report: &T, text: impl FnOnce() -> String) -> Result<(), Error> {
    let json = serde_json::to_string_pretty(report)?;
    if let Some(path) = &cli.out {
        std::fs::write(path, format!("{json}\n"))?;
    }
    if cli.json {
        println!("{json}");
    } else {
        print!("{}", text());
    }
    Ok(())
}

fn category(name: &str, tol: &Tolerance) -> Result<RepCategory, Error> {
    Ok(RepCategory::new(zoo::group_from_arg(name, tol)?, *tol))
}

#[derive(Serialize)]
struct GroupIndicatorRow {
    label: String,
    nu_categorical: i32,
    nu_character_oracle: i32,
    agree: bool,
}

#[derive(Serialize)]
struct FusionIndicatorRow {
    label: String,
    nu_file: i32,
}

fn indicators(cli: &Cli, source: &Source, tol: &Tolerance) -> Result<Outcome, Error> {
    if let Some(f) = &source.fusion {
        let fd = zoo::fusion_from_arg(f, tol)?;
        let rows: Vec<FusionIndicatorRow> = fd
            .labels
            .iter()
            .zip(&fd.nu)
            .map(|(l, nu)| FusionIndicatorRow {
                label: l.clone(),
                nu_file: nu.value(),
            })
            .collect();
        emit(cli, &rows, || {
            let mut s = format!("{:<12} {:>4}\n", "label", "nu");
            for r in &rows {
                s += &format!("{:<12} {:>4}\n", r.label, r.nu_file);
            }
            s
        })?;
        return Ok(Outcome::Ok);
    }
    let cat = category(source.zoo.as_deref().expect("one source"), tol)?;
    let mut rows = Vec::new();
    for x in cat.simples() {
        let categorical = indicator::fs_indicator(&cat, &x)?.value();
        let oracle = groupmodel::fs_indicator_character_oracle(cat.entry(), &x.label, tol)?;
        rows.push(GroupIndicatorRow {
            label: x.label.clone(),
            nu_categorical: categorical,
            nu_character_oracle: oracle,
            agree: categorical == oracle,
        });
    }
    emit(cli, &rows, || {
        let mut s = format!("{:<12} {:>6} {:>6} {:>6}\n", "label", "nu", "oracle", "agree");
        for r in &rows {
            let agree = if r.agree { "yes" } else { "NO" };
            s += &format!("{:<12} {:>6} {:>6} {:>6}\n", r.label, r.nu_categorical, r.nu_character_oracle, agree);
        }
        s
    })?;
    Ok(if rows.iter().all(|r| r.agree) {
        Outcome::Ok
    } else {
        Outcome::Violation
    })
}

fn parse_word_list(s: &str) -> Result<Vec<usize>, Error> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| Error::Schema(format!("bad braid generator `{t}`")))
        })
        .collect()
}

fn pairing_cmd(
    cli: &Cli,
    zoo: &str,
    objects: &str,
    palindrome: bool,
    braid_word: Option<&str>,
    tol: &Tolerance,
) -> Result<Outcome, Error> {
    let cat = category(zoo, tol)?;
    let tuple: ObjectWord = objects.parse()?;
    let result = if palindrome {
        pairing::pairing_palindrome(&cat, tuple.factors())
    } else {
        let opts = PairingOptions {
            pi: None,
            braid_word: braid_word.map(parse_word_list).transpose()?,
        };
        pairing::pairing_matrix(&cat, tuple.factors(), &opts)
    };
    let report = match result {
        Ok(r) => r,
        Err(Error::NotApplicable(msg)) => {
            eprintln!("not applicable: {msg}");
            return Ok(Outcome::NotApplicable);
        }
        Err(e) => return Err(e),
    };
    emit(cli, &report, || pairing_text(&report))?;
    Ok(if report.theorem_holds(tol) {
        Outcome::Ok
    } else {
        Outcome::Violation
    })
}

fn one_based(v: &[usize]) -> String {
    let items: Vec<String> = v.iter().map(|i| (i + 1).to_string()).collect();
    format!("[{}]", items.join(","))
}

fn pairing_text(r: &PairingReport) -> String {
    let word: Vec<String> = r.braid_word.iter().map(|k| format!("s{k}")).collect();
    let mut s = String::new();
    s += &format!("tuple          {}\n", ObjectWord(r.tuple.clone()));
    s += &format!("dim_H          {}\n", r.dim_h);
    s += &format!("nu             {:+}\n", r.nu);
    s += &format!("symmetry       {:?}\n", r.symmetry).to_lowercase();
    s += &format!("nondegenerate  {}\n", r.nondegenerate);
    s += &format!("even_ok        {}\n", r.even_ok);
    s += &format!("pi             {}\n", one_based(&r.pi));
    s += &format!("sigma          {}\n", one_based(&r.sigma));
    s += &format!("p              {:?}\n", r.p);
    s += &format!("braid word     {}\n", if word.is_empty() { "id".to_string() } else { word.join(" ") });
    if r.dim_h > 0 {
        s += "gram\n";
        s += &format_matrix(&r.gram);
    }
    s
}

fn scan(cli: &Cli, source: &Source, max_len: usize, jobs: usize, tol: &Tolerance) -> Result<Outcome, Error> {
    if max_len == 0 {
        return Err(Error::Schema("--max-len must be at least 1".into()));
    }
    let violations = if let Some(f) = &source.fusion {
        let fd = zoo::fusion_from_arg(f, tol)?;
        let report = fd.evenness_scan(max_len);
        emit(cli, &report, || {
            let mut s = String::new();
            for r in report.violations() {
                s += &format!("violation: ({}) nu = {} dim = {}\n", r.tuple.join(","), r.nu, r.dim);
            }
            let m = &report.summary;
            s += &format!(
                "{}: {} tuples, {} skipped (no pi), {} with nu = -1, {} violations\n",
                report.name, m.tuples_scanned, m.skipped_no_pi, m.nu_minus_one, m.violations
            );
            s
        })?;
        report.summary.violations
    } else {
        let cat = category(source.zoo.as_deref().expect("one source"), tol)?;
        let report = pairing::scan_group(&cat, max_len, jobs)?;
        emit(cli, &report, || {
            let mut s = String::new();
            for r in report.rows.iter().filter(|r| r.violation) {
                s += &format!("violation: {} dim = {}\n", ObjectWord(r.tuple.clone()), r.dim_h);
            }
            let m = &report.summary;
            s += &format!(
                "{}: {} tuples, {} skipped (no pi), {} with nu = -1 ({} with dim_H > 0), {} violations\n",
                report.group, m.tuples_scanned, m.skipped_no_pi, m.nu_minus_one, m.nu_minus_one_nonzero_dim, m.violations
            );
            s
        })?;
        report.summary.violations
    };
    Ok(if violations == 0 { Outcome::Ok } else { Outcome::Violation })
}

fn format_scalar(z: Scalar) -> String {
    let clean = |x: f64| if x.abs() < 1e-12 { 0.0 } else { x };
    let (re, im) = (clean(z.re), clean(z.im));
    if im == 0.0 {
        format!("{re:.6}")
    } else {
        format!("{re:.6}{im:+.6}i")
    }
}

fn format_matrix(m: &CMat) -> String {
    let cells: Vec<Vec<String>> = (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| format_scalar(m[(i, j)])).collect())
        .collect();
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(0);
    let mut s = String::new();
    for row in cells {
        let row: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
        s += &format!("  {}\n", row.join("  "));
    }
    s
}

#[derive(Serialize)]
struct EvalReport {
    dom: ObjectWord,
    cod: ObjectWord,
    rows: usize,
    cols: usize,
    matrix: Vec<Vec<[f64; 2]>>,
}

fn eval(cli: &Cli, zoo: &str, expr: &str, tol: &Tolerance) -> Result<Outcome, Error> {
    let cat = category(zoo, tol)?;
    let m = diagram::eval_str(expr, &Environment::new(), &cat)?;
    let report = EvalReport {
        dom: m.dom().clone(),
        cod: m.cod().clone(),
        rows: m.mat().nrows(),
        cols: m.mat().ncols(),
        matrix: numerics::to_pairs(m.mat()),
    };
    emit(cli, &report, || {
        format!(
            "dom {}\ncod {}\nmatrix {}x{}\n{}",
            report.dom,
            report.cod,
            report.rows,
            report.cols,
            format_matrix(m.mat())
        )
    })?;
    Ok(Outcome::Ok)
}

#[derive(Serialize, Default)]
struct SelftestReport {
    groups: Vec<String>,
    seed: u64,
    zigzags: usize,
    sovereignty: usize,
    indicators: usize,
    failures: Vec<String>,
}

fn selftest(cli: &Cli, zoo_name: Option<&str>, seed: u64, samples: usize, tol: &Tolerance) -> Result<Outcome, Error> {
    let names: Vec<String> = match zoo_name {
        Some(n) => vec![n.to_string()],
        None => zoo::GROUP_NAMES.iter().map(|s| s.to_string()).collect(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SelftestReport {
        seed,
        ..Default::default()
    };
    for name in &names {
        let entry: GroupZooEntry = zoo::group_from_arg(name, tol)?;
        let cat = RepCategory::new(entry, *tol);
        report.groups.push(cat.entry().name().to_string());
        let simples = cat.simples();
        for x in &simples {
            for x in [x.clone(), x.dual()] {
                let w = ObjectWord::simple(x.clone());
                let (id, idd) = (cat.identity(&w)?, cat.identity(&w.dual())?);
                let b = cat.coevaluation(&x)?;
                let d = cat.evaluation(&x)?;
                let bl = cat.coevaluation_left(&x)?;
                let dl = cat.evaluation_left(&x)?;
                let checks = [
                    (id.tensor(&d).compose(&b.tensor(&id))?, &id),
                    (d.tensor(&idd).compose(&idd.tensor(&b))?, &idd),
                    (dl.tensor(&id).compose(&id.tensor(&bl))?, &id),
                    (idd.tensor(&dl).compose(&bl.tensor(&idd))?, &idd),
                ];
                for (k, (lhs, rhs)) in checks.iter().enumerate() {
                    report.zigzags += 1;
                    if !lhs.approx_eq(rhs, tol) {
                        report.failures.push(format!("{name}: zig-zag {k} fails for {x}"));
                    }
                }
            }
            let nu = indicator::fs_indicator(&cat, x)?.value();
            let oracle = groupmodel::fs_indicator_character_oracle(cat.entry(), &x.label, tol)?;
            report.indicators += 1;
            if nu != oracle {
                report.failures.push(format!("{name}: indicator of {x} is {nu}, oracle {oracle}"));
            }
        }
        let words: Vec<ObjectWord> = simples
            .iter()
            .flat_map(|x| [ObjectWord::simple(x.clone()), ObjectWord::simple(x.dual())])
            .chain(simples.iter().map(|x| ObjectWord(vec![x.clone(), x.dual()])))
            .collect();
        for dom in &words {
            for cod in &words {
                if cat.word_dim(dom)? * cat.word_dim(cod)? > 64 {
                    continue;
                }
                for _ in 0..samples {
                    let f = cat.random_intertwiner(dom, cod, &mut rng)?;
                    report.sovereignty += 1;
                    let right = cat.dual_morphism(&f)?;
                    let left = cat.dual_morphism_left(&f)?;
                    if !right.approx_eq(&left, tol) || !cat.is_intertwiner(&right)? {
                        report.failures.push(format!("{name}: left and right duals differ on {dom} -> {cod}"));
                    }
                }
            }
        }
    }
    let ok = report.failures.is_empty();
    emit(cli, &report, || {
        let mut s = String::new();
        for f in &report.failures {
            s += &format!("FAIL {f}\n");
        }
        s += &format!(
            "{} group{}, seed {}: {} zig-zags, {} sovereignty checks, {} indicators, {} failures\n",
            report.groups.len(),
            if report.groups.len() == 1 { "" } else { "s" },
            report.seed,
            report.zigzags,
            report.sovereignty,
            report.indicators,
            report.failures.len()
        );
        s
    })?;
    Ok(if ok { Outcome::Ok } else { Outcome::Violation })
}

fn export_fusion(cli: &Cli, zoo_name: &str, tol: &Tolerance) -> Result<Outcome, Error> {
    let entry = zoo::group_from_arg(zoo_name, tol)?;
    let fd: FusionData = fusiondata::repg_to_fusion(&entry, tol)?;
    let json = fd.to_json();
    match &cli.out {
        Some(path) => std::fs::write(path, &json)?,
        None => print!("{json}"),
    }
    Ok(Outcome::Ok)
}

