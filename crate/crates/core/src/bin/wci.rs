use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use wci::bounds::{self, BoundsOutcome, BoundsQuery};
use wci::enumerate::{self, SearchParams};
use wci::fixture;
use wci::record::{self, CheckOutcome};
use wci::rational::{self, Rational};
use wci::singularity::{KltParams, PointAnalysis};
use wci::{FamilyRecord, Mode};

/// Quasismooth weighted complete intersections: checks, bounds and enumeration.
#[derive(Parser)]
#[command(name = "wci", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify one family.
    Check {
        #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        weights: Vec<i64>,
        #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        degrees: Vec<i64>,
        #[arg(long, value_parser = parse_rational)]
        epsilon: Option<Rational>,
        #[arg(long)]
        mode: Option<Mode>,
        /// Print the JSON record instead of a report.
        #[arg(long)]
        json: bool,
    },
    /// Write every family with the given shape to a JSONL file.
    Enumerate {
        #[arg(long)]
        dim: usize,
        #[arg(long, allow_negative_numbers = true)]
        amplitude: i64,
        #[arg(long, value_delimiter = ',')]
        codim: Vec<usize>,
        #[arg(long)]
        max_degree: Option<u64>,
        #[arg(long)]
        max_weight: Option<u64>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        mode: Option<Mode>,
        #[arg(long, value_parser = parse_rational)]
        epsilon: Option<Rational>,
        /// Volume lower bound used to derive the degree cap.
        #[arg(long, value_parser = parse_rational)]
        volume_lb: Option<Rational>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate the codimension, top weight and top degree bounds.
    Bounds {
        #[arg(long)]
        dim: usize,
        #[arg(long, allow_negative_numbers = true)]
        amplitude: i64,
        #[arg(long)]
        codim: Option<usize>,
        #[arg(long, value_parser = parse_rational)]
        volume_lb: Rational,
        #[arg(long, value_parser = parse_rational)]
        epsilon: Option<Rational>,
    },
    /// Instantiate the X_{2ks} ⊂ P(2, kb_1, kb_2, kb_3, ks−1) families.
    Jk {
        #[arg(long, value_delimiter = ',', required = true)]
        k: Vec<u64>,
        /// `auto`, or a file with one `b1,b2,b3` per line.
        #[arg(long, default_value = "auto")]
        triples: String,
        #[arg(long, value_parser = parse_rational)]
        epsilon: Option<Rational>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Compare a result file against a fixture.
    Diff {
        #[arg(long)]
        ours: PathBuf,
        #[arg(long)]
        fixture: PathBuf,
    },
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    rational::parse(s).map_err(|e| e.to_string())
}

fn klt(eps: Option<Rational>) -> Result<Option<KltParams>> {
    Ok(eps.map(KltParams::new).transpose()?)
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn check(weights: &[i64], degrees: &[i64], eps: Option<Rational>, mode: Option<Mode>, json: bool) -> Result<bool> {
    let params = klt(eps)?;
    let shown_eps = params.as_ref().map_or_else(|| rational::int(1), |p| p.epsilon().clone());
    let rep = record::check_one(weights, degrees, params, mode)?;
    let c = match &rep.outcome {
        CheckOutcome::Ambient(w) => {
            if json {
                println!("{{\"degenerate\":true,\"weights\":[{}]}}", join(w));
            } else {
                println!("family: {}", rep.input);
                println!("every equation is linear: X = P({})", join(w));
            }
            return Ok(false);
        }
        CheckOutcome::Classified(c) => c,
    };
    let r = &c.record;
    if json {
        println!("{}", r.to_json());
        return Ok(rep.passed());
    }
    println!("family: {}", rep.input);
    for s in &rep.steps {
        println!("linear cone: removed weight and degree {}", s.value);
    }
    if !rep.steps.is_empty() {
        println!("reduced: X_{{{}}} in P({})", join(&r.degrees), join(&r.weights));
    }
    println!("dim {}  codim {}  amplitude {}  delta {}", r.dim, r.codim, r.amplitude, r.delta);
    println!("O(1)^{} = {}  K^{} = {}", r.dim, r.o1_volume, r.dim, r.k_volume);
    match c.wellformedness.witness {
        None => println!("wellformed: yes"),
        Some(s) => println!("wellformed: no, stratum {s}"),
    }
    println!("quasismooth: {} ({})", r.quasismooth, r.qs_mode);
    for f in &c.verdict.failing_subsets {
        println!("  fails at E = {}", f.subset);
    }
    for p in &c.points {
        match p {
            PointAnalysis::Quotient(s) => {
                let review = if s.needs_review() { "  [review: zero residues dropped]" } else { "" };
                println!("{s}  q = {}{review}", rational::to_pq(&s.discrepancy));
            }
            PointAnalysis::NoStructure => println!("coordinate point on X without local structure"),
            PointAnalysis::NotOnX => {}
        }
    }
    match &c.witness {
        Some(w) => println!(
            "klt (eps = {}): witness at P_{}, generator {}, q = {}",
            rational::display(&shown_eps),
            w.singularity.point_index,
            w.generator,
            rational::to_pq(&w.discrepancy)
        ),
        None => println!("klt (eps = {}): {}", rational::display(&shown_eps), r.klt_status.as_str()),
    }
    Ok(rep.passed())
}

fn write_jsonl(records: &[FamilyRecord], out: impl Write) -> Result<()> {
    let mut out = BufWriter::new(out);
    for r in records {
        writeln!(out, "{}", r.to_json())?;
    }
    out.flush()?;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn run_enumerate(
    dim: usize,
    amplitude: i64,
    codim: Vec<usize>,
    max_degree: Option<u64>,
    max_weight: Option<u64>,
    jobs: usize,
    mode: Option<Mode>,
    epsilon: Option<Rational>,
    volume_lb: Option<Rational>,
    out: PathBuf,
) -> Result<()> {
    let codims = if codim.is_empty() {
        (1..=bounds::codim_bound(dim, amplitude)).collect()
    } else {
        codim
    };
    let epsilon = klt(epsilon)?;
    let d_max = match max_degree {
        Some(d) => d,
        None => enumerate::default_degree_cap(dim, amplitude, &codims, volume_lb, epsilon.clone())?,
    };
    let params = SearchParams { m: dim, alpha: amplitude, codims, d_max, a_max: max_weight, jobs, mode, epsilon };
    let records = enumerate::enumerate(&params)?;
    let file = fs::File::create(&out).with_context(|| format!("creating {}", out.display()))?;
    write_jsonl(&records, file)?;
    eprintln!("{} families, d_c <= {d_max}", records.len());
    Ok(())
}

fn run_bounds(dim: usize, amplitude: i64, codim: Option<usize>, b: Rational, eps: Option<Rational>) -> Result<()> {
    let q = BoundsQuery { m: dim, alpha: amplitude, c: codim, b, epsilon: klt(eps)? };
    match bounds::dc_bound(&q)? {
        BoundsOutcome::NoEffectiveBound { codim_max } => {
            println!("codim_max = {codim_max}");
            println!("no effective bound for amplitude 0; pass --max-degree to enumerate");
        }
        BoundsOutcome::Bounds(r) => {
            println!("codim = {}", r.codim);
            println!("codim_max = {}", r.codim_max);
            println!("epsilon = {}", rational::display(&r.epsilon));
            println!("N = {}", rational::display(&r.n));
            println!("delta_max = {}", rational::display(&r.delta_max));
            println!("an_strict_sup = {}", rational::display(&r.an_strict_sup));
            println!("dc_max = {}", rational::display(&r.dc_max));
        }
    }
    Ok(())
}

fn read_triples(path: &str) -> Result<Vec<[u64; 3]>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let v: Vec<u64> = line
            .split(',')
            .map(|t| t.trim().parse())
            .collect::<Result<_, _>>()
            .with_context(|| format!("{path}:{}: bad triple", i + 1))?;
        let Ok(mut t) = <[u64; 3]>::try_from(v) else {
            bail!("{path}:{}: expected three entries", i + 1);
        };
        t.sort_unstable();
        out.push(t);
    }
    Ok(out)
}

fn run_jk(k: Vec<u64>, triples: String, eps: Option<Rational>, jobs: usize) -> Result<()> {
    let triples = if triples == "auto" { enumerate::auto_triples(jobs)? } else { read_triples(&triples)? };
    let records = enumerate::jk_templates(&k, &triples, klt(eps)?)?;
    write_jsonl(&records, io::stdout().lock())?;
    eprintln!("{} triples, {} families", triples.len(), records.len());
    Ok(())
}

fn run_diff(ours: PathBuf, fixture_path: PathBuf) -> Result<bool> {
    let read = |p: &PathBuf| fs::read_to_string(p).with_context(|| format!("reading {}", p.display()));
    let ours_list = fixture::parse_auto(&read(&ours)?);
    let fix_list = fixture::parse_fixture(&read(&fixture_path)?);
    for (name, list) in [(&ours, &ours_list), (&fixture_path, &fix_list)] {
        for e in &list.errors {
            eprintln!("{}: {e}", name.display());
        }
        for e in &list.duplicates {
            eprintln!("{}: warning: {e}", name.display());
        }
    }
    let report = fixture::diff(&ours_list.families, &fix_list.families);
    print!("{report}");
    eprintln!(
        "{} ours, {} fixture, {} ours-only, {} fixture-only",
        ours_list.families.len(),
        fix_list.families.len(),
        report.ours_only.len(),
        report.fixture_only.len()
    );
    Ok(report.is_empty())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Check { weights, degrees, epsilon, mode, json } => check(&weights, &degrees, epsilon, mode, json),
        Command::Enumerate { dim, amplitude, codim, max_degree, max_weight, jobs, mode, epsilon, volume_lb, out } => {
            run_enumerate(dim, amplitude, codim, max_degree, max_weight, jobs, mode, epsilon, volume_lb, out)
                .map(|()| true)
        }
        Command::Bounds { dim, amplitude, codim, volume_lb, epsilon } => {
            run_bounds(dim, amplitude, codim, volume_lb, epsilon).map(|()| true)
        }
        Command::Jk { k, triples, epsilon, jobs } => run_jk(k, triples, epsilon, jobs).map(|()| true),
        Command::Diff { ours, fixture } => run_diff(ours, fixture),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
