use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use permutadkit::barkoszul::{
    dual_bar, dual_quotient, generating_series, gk_functional_check, koszulity_check, xi_check, zeta_check,
    KoszulReport,
};
use permutadkit::combinat::{all_surjections, substitute, Surjection};
use permutadkit::percat::morphisms_from;
use permutadkit::permutad::{
    terminal_presentation, twisted_presentation, PresentationJson, QuadraticPresentation, Quotient,
};
use permutadkit::peroperads::{
    anti_associative_presentation, koszulity_check_peroperad, minimal_model_complex, one_per_presentation,
    BinaryPresentation, PerKoszulReport,
};
use permutadkit::shperm::generate_relation;

const PERMUTAD_NMAX: usize = 7;
const PEROPERAD_NMAX: usize = 6;
const VERIFY_NMAX: usize = 6;
const MINMODEL_CARD: usize = 8;

#[derive(Parser)]
#[command(name = "permutadkit", version, about = "Koszulity and minimal-model computations for permutads and Per-operads")]
struct Cli {
    #[command(flatten)]
    output: OutputArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutputArgs {
    /// Emit the JSON report.
    #[arg(long, global = true, conflicts_with = "table")]
    json: bool,
    /// Emit a plain-text table (the default).
    #[arg(long, global = true)]
    table: bool,
    /// Lift the runtime caps on nmax and cardinality.
    #[arg(long = "unsafe", global = true)]
    unsafe_limits: bool,
    /// Write the output to FILE instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// List Surj(n,k) with partitions, signs and block sizes.
    Enumerate { n: usize, k: usize },
    /// Compare H(D(A^!)) with A: peras, twisted, oneper, anti or file:PATH.
    Koszul {
        target: String,
        #[arg(long, default_value_t = 5)]
        nmax: usize,
    },
    /// Run the invariant suite.
    Verify {
        #[arg(long, default_value_t = 4)]
        nmax: usize,
    },
    /// Generating series of peras or twisted, with the functional-equation check.
    Series {
        target: String,
        #[arg(long, default_value_t = 6)]
        terms: usize,
    },
    /// The sh-permutad relation at ALPHA, e.g. '1 2 1'.
    Shrel {
        alpha: String,
        #[arg(long)]
        primed: bool,
    },
    /// Dimensions and homology of the minimal model at ALPHA.
    Minmodel { alpha: String },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Compute(String),
}

impl From<permutadkit::Error> for Failure {
    fn from(e: permutadkit::Error) -> Self {
        match e {
            permutadkit::Error::Parse(_) => Failure::Usage(e.to_string()),
            _ => Failure::Compute(e.to_string()),
        }
    }
}

#[derive(Serialize)]
struct Report {
    command: String,
    parameters: Value,
    results: Value,
    verdict: String,
}

struct Outcome {
    report: Report,
    table: String,
    success: bool,
}

fn usage<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Usage(msg.into()))
}

fn cap(value: usize, limit: usize, what: &str, unsafe_limits: bool) -> Result<(), Failure> {
    if value > limit && !unsafe_limits {
        return usage(format!("{what} {value} exceeds the cap {limit}; pass --unsafe to override"));
    }
    Ok(())
}

fn parse_alpha(text: &str) -> Result<Surjection, Failure> {
    text.parse().map_err(|e: permutadkit::Error| Failure::Usage(e.to_string()))
}

fn to_value(x: impl Serialize) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn enumerate(n: usize, k: usize) -> Result<Outcome, Failure> {
    if !(1 <= k && k <= n && n <= 9) {
        return usage(format!("need 1 ≤ k ≤ n ≤ 9, got n = {n}, k = {k}"));
    }
    let mut rows = Vec::new();
    let mut table = String::from("images\tpartition\tsign\tblocks\n");
    for r in all_surjections(n, k)? {
        let partition = r.to_partition().to_string();
        let blocks = r.block_sizes();
        let _ = writeln!(table, "{r}\t{partition}\t{:+}\t{blocks:?}", r.shuffle_sign());
        rows.push(json!({
            "images": r.images(),
            "partition": partition,
            "sign": r.shuffle_sign(),
            "block_sizes": blocks,
        }));
    }
    let count = rows.len();
    Ok(Outcome {
        report: Report {
            command: "enumerate".into(),
            parameters: json!({"n": n, "k": k}),
            results: json!({"count": count, "rows": rows}),
            verdict: "ok".into(),
        },
        table,
        success: true,
    })
}

enum KoszulTarget {
    Permutad(QuadraticPresentation),
    PerOperad(BinaryPresentation),
}

fn koszul_target(target: &str) -> Result<KoszulTarget, Failure> {
    Ok(match target {
        "peras" => KoszulTarget::Permutad(terminal_presentation(PERMUTAD_NMAX)),
        "twisted" => KoszulTarget::Permutad(twisted_presentation(PERMUTAD_NMAX)),
        "oneper" => KoszulTarget::PerOperad(one_per_presentation()),
        "anti" => KoszulTarget::PerOperad(anti_associative_presentation()),
        other => {
            let Some(path) = other.strip_prefix("file:") else {
                return usage(format!("unknown target {other:?}; use peras, twisted, oneper, anti or file:PATH"));
            };
            let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{path}: {e}")))?;
            let value: Value = serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{path}: {e}")))?;
            let is_permutad = value["generators"].as_array().is_some_and(|g| g.iter().any(|x| x.get("arity").is_some()));
            if is_permutad {
                let json: PresentationJson =
                    serde_json::from_value(value).map_err(|e| Failure::Usage(format!("{path}: {e}")))?;
                KoszulTarget::Permutad(QuadraticPresentation::from_json(&json).map_err(|e| Failure::Usage(e.to_string()))?)
            } else {
                KoszulTarget::PerOperad(BinaryPresentation::from_json(&text).map_err(|e| Failure::Usage(e.to_string()))?)
            }
        }
    })
}

fn permutad_table(r: &KoszulReport) -> String {
    let mut t = String::from("n\tdims\tbetti\texpected\tmatch\n");
    for a in &r.per_arity {
        let _ = writeln!(t, "{}\t{:?}\t{:?}\t{:?}\t{}", a.n, a.dims, a.betti, a.expected, a.matches);
    }
    t
}

fn peroperad_table(r: &PerKoszulReport) -> String {
    let mut t = String::from("alpha\tdims\tbetti\texpected\tmatch\n");
    for o in &r.per_object {
        let _ = writeln!(t, "{}\t{:?}\t{:?}\t{:?}\t{}", o.alpha, o.dims, o.betti, o.expected, o.matches);
    }
    t
}

fn koszul(target: &str, nmax: usize, unsafe_limits: bool) -> Result<Outcome, Failure> {
    if nmax == 0 {
        return usage("nmax must be positive");
    }
    let parameters = json!({"target": target, "nmax": nmax});
    let (results, mut table, koszul) = match koszul_target(target)? {
        KoszulTarget::Permutad(pres) => {
            cap(nmax, PERMUTAD_NMAX, "nmax", unsafe_limits)?;
            let r = koszulity_check(&pres, nmax)?;
            let mut results = to_value(&r);
            results["first_failure"] = to_value(r.first_failure());
            (results, permutad_table(&r), r.koszul)
        }
        KoszulTarget::PerOperad(pres) => {
            cap(nmax, PEROPERAD_NMAX, "nmax", unsafe_limits)?;
            let r = koszulity_check_peroperad(&pres, nmax)?;
            let mut results = to_value(&r);
            results["first_failure"] = to_value(r.first_failure().map(|o| o.alpha.clone()));
            (results, peroperad_table(&r), r.koszul)
        }
    };
    let verdict = if koszul { "koszul" } else { "not koszul" };
    let _ = writeln!(table, "verdict: {verdict} through {nmax}");
    Ok(Outcome {
        report: Report { command: "koszul".into(), parameters, results, verdict: verdict.into() },
        table,
        success: koszul,
    })
}

fn check_all(nmax: usize) -> Result<Vec<(&'static str, bool, String)>, Failure> {
    let mut checks = Vec::new();
    let dual = dual_quotient(&terminal_presentation(nmax.max(2)), nmax.max(2))?;
    let mut squares = true;
    for n in 1..=nmax {
        squares &= dual_bar(&dual, n)?.complex.is_complex()?;
    }
    checks.push(("d_squared_zero", squares, format!("D(perAs^!)(n) for n ≤ {nmax}")));

    let k = koszulity_check(&terminal_presentation(nmax.max(2)), nmax)?;
    checks.push(("peras_koszul", k.koszul, format!("first failure {:?}", k.first_failure())));

    let xi = (1..=nmax).map(xi_check).collect::<Result<Vec<_>, _>>()?;
    checks.push(("xi", xi.iter().all(|&x| x), format!("{xi:?}")));

    let zeta = (1..=nmax).map(zeta_check).collect::<Result<Vec<_>, _>>()?;
    let iso = zeta.iter().all(|z| z.chain_iso);
    let witness = nmax < 2 || zeta.last().is_some_and(|z| z.witness.is_some());
    checks.push(("zeta", iso && witness, format!("chain iso {iso}, witness {witness}")));

    let plain = Quotient::new(terminal_presentation(nmax.max(2)))?;
    let mut dims = BTreeMap::new();
    let mut dual_dims = BTreeMap::new();
    for n in 1..=nmax {
        for (d, v) in plain.dims_by_degree(n)? {
            dims.insert((n, d), v);
        }
        for (d, v) in dual.dims_by_degree(n)? {
            dual_dims.insert((n, d), v);
        }
    }
    let gk = gk_functional_check(&generating_series(&dims, nmax), &generating_series(&dual_dims, nmax), nmax)?;
    checks.push(("generating_series", gk, format!("through t^{nmax}")));

    let mut minimal = true;
    for card in 1..=nmax {
        let looped = Surjection::new((1..=card).chain([1]).collect())?;
        for alpha in [Surjection::identity(card), looped] {
            let m = minimal_model_complex(&alpha)?;
            minimal &= m.is_complex()? && m.betti()? == BTreeMap::from([(0, 1)]);
        }
    }
    checks.push(("minimal_model", minimal, format!("|α| ≤ {nmax}")));

    let mut round_trips = 0usize;
    let mut fibers_ok = true;
    for n in 1..=nmax {
        for k in 1..=n {
            for alpha in all_surjections(n, k)? {
                for f in morphisms_from(&alpha) {
                    round_trips += 1;
                    fibers_ok &= substitute(f.target(), &f.fibers())? == *f.source();
                }
            }
        }
    }
    checks.push(("substitution_fibers", fibers_ok, format!("{round_trips} morphisms")));
    Ok(checks)
}

fn verify(nmax: usize, unsafe_limits: bool) -> Result<Outcome, Failure> {
    if nmax == 0 {
        return usage("nmax must be positive");
    }
    cap(nmax, VERIFY_NMAX, "nmax", unsafe_limits)?;
    let checks = check_all(nmax)?;
    let passed = checks.iter().all(|c| c.1);
    let mut table = String::from("check\tresult\tdetail\n");
    for (name, ok, detail) in &checks {
        let _ = writeln!(table, "{name}\t{}\t{detail}", if *ok { "pass" } else { "FAIL" });
    }
    let failing: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
    let results = json!({
        "checks": checks.iter().map(|(name, ok, detail)| json!({"name": name, "passed": ok, "detail": detail})).collect::<Vec<_>>(),
        "failing": failing,
    });
    Ok(Outcome {
        report: Report {
            command: "verify".into(),
            parameters: json!({"nmax": nmax}),
            results,
            verdict: if passed { "pass" } else { "fail" }.into(),
        },
        table,
        success: passed,
    })
}

fn series(target: &str, terms: usize) -> Result<Outcome, Failure> {
    if !(1..=10).contains(&terms) {
        return usage("terms must be in 1..=10");
    }
    let pres = match target {
        "peras" => terminal_presentation(terms.max(2)),
        "twisted" => twisted_presentation(terms.max(2)),
        other => return usage(format!("unknown series target {other:?}; use peras or twisted")),
    };
    let a = Quotient::new(pres.clone())?;
    let dual = dual_quotient(&pres, terms)?;
    let mut dims = BTreeMap::new();
    let mut dual_dims = BTreeMap::new();
    for n in 1..=terms {
        for (d, v) in a.dims_by_degree(n)? {
            dims.insert((n, d), v);
        }
        for (d, v) in dual.dims_by_degree(n)? {
            dual_dims.insert((n, d), v);
        }
    }
    let f = generating_series(&dims, terms);
    let g = generating_series(&dual_dims, terms);
    let gk = gk_functional_check(&f, &g, terms)?;
    let show = |s: &permutadkit::barkoszul::PowerSeries| s.coeffs()[1..].iter().map(|c| c.to_string()).collect::<Vec<_>>();
    let coefficients = show(&f);
    let table = format!("f_A: {}\nf_A!: {}\nfunctional equation: {gk}\n", coefficients.join(", "), show(&g).join(", "));
    Ok(Outcome {
        report: Report {
            command: "series".into(),
            parameters: json!({"target": target, "terms": terms}),
            results: json!({"coefficients": coefficients, "dual_coefficients": show(&g), "functional_equation": gk}),
            verdict: if gk { "pass" } else { "fail" }.into(),
        },
        table,
        success: gk,
    })
}

fn shrel(alpha: &str, primed: bool) -> Result<Outcome, Failure> {
    let alpha = parse_alpha(alpha)?;
    let rel = generate_relation(&alpha, primed).map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(Outcome {
        report: Report {
            command: "shrel".into(),
            parameters: json!({"alpha": alpha.bracketed(), "primed": primed}),
            results: rel.to_json(),
            verdict: "ok".into(),
        },
        table: format!("{}\n", rel.render()),
        success: true,
    })
}

fn minmodel(alpha: &str, unsafe_limits: bool) -> Result<Outcome, Failure> {
    let alpha = parse_alpha(alpha)?;
    cap(alpha.codomain_size(), MINMODEL_CARD, "|α|", unsafe_limits)?;
    let m = minimal_model_complex(&alpha)?;
    let square_zero = m.is_complex()?;
    let betti = if square_zero { m.betti()? } else { BTreeMap::new() };
    let acyclic = square_zero && betti == BTreeMap::from([(0, 1)]);
    let table = format!("dims: {:?}\nbetti: {betti:?}\n∂² = 0: {square_zero}\n", m.dims());
    Ok(Outcome {
        report: Report {
            command: "minmodel".into(),
            parameters: json!({"alpha": alpha.bracketed()}),
            results: json!({"dims": m.dims(), "betti": betti, "d_squared_zero": square_zero}),
            verdict: if acyclic { "pass" } else { "fail" }.into(),
        },
        table,
        success: acyclic,
    })
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let unsafe_limits = cli.output.unsafe_limits;
    match &cli.command {
        Command::Enumerate { n, k } => enumerate(*n, *k),
        Command::Koszul { target, nmax } => koszul(target, *nmax, unsafe_limits),
        Command::Verify { nmax } => verify(*nmax, unsafe_limits),
        Command::Series { target, terms } => series(target, *terms),
        Command::Shrel { alpha, primed } => shrel(alpha, *primed),
        Command::Minmodel { alpha } => minmodel(alpha, unsafe_limits),
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("PERMUTADKIT_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    let start = Instant::now();
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
        Err(Failure::Compute(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };
    let text = if cli.output.json {
        let mut s = serde_json::to_string_pretty(&outcome.report).expect("reports serialize");
        s.push('\n');
        s
    } else {
        outcome.table
    };
    match &cli.output.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    eprintln!("elapsed: {:.3}s", start.elapsed().as_secs_f64());
    if outcome.success {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
