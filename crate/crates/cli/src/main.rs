use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use hqcf::cf::CfExpansion;
use hqcf::conjecture::{
    approximation_exponent, derive_frobenius_relation, verify_conjecture1, verify_conjecture2,
    verify_conjecture2_with_l, ClosedForm, VerdictSummary,
};
use hqcf::ff::{Fp, PrimeField};
use hqcf::hyperquadratic::{
    a_degree, a_sequence, corollary1_generate, match_a_multiple, prop1_verify, prop2_verify, theorem1_generate,
    IndexSequence, PQConstants, PerfectExpansionSpec, Prop2Outcome,
};
use hqcf::io::{CfJson, PolyJson};
use hqcf::mkaouar::{expand_root, AlgebraicState};
use hqcf::parse::parse_polynomial;
use hqcf::poly::Polynomial;
use hqcf::sweep::{map_ordered, Execution};
use hqcf::{Error, Result};

#[derive(Parser)]
#[command(
    name = "hqcf",
    version,
    about = "Continued fractions of hyperquadratic power series over F_p(T)"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Partial quotients of the dominant root of a polynomial in X.
    Expand(ExpandArgs),
    /// Perfect expansion from its defining scalars.
    Generate(GenerateArgs),
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Windowed approximation exponent of an expansion.
    Exponent(ExponentArgs),
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Continued fraction of P_k/Q_k and the A_{i,k} identities.
    Prop1(Prop1Args),
    /// Continued fraction of P_{kp-i}/Q_k^p.
    Prop2(Prop2Args),
    /// Frobenius relation of the quartic root for p = 1 mod 3.
    Conj1(ConjArgs),
    /// Degree p^2 relation of the quartic root for p = 2 mod 3.
    Conj2(Conj2Args),
}

#[derive(Args)]
struct Common {
    /// Odd prime modulus.
    #[arg(long)]
    p: u64,
    /// Emit JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// -X^4/12 - T X^3 + X^2 + 1.
    #[arg(long)]
    quartic: bool,
    /// Expression in X and T, or a JSON list of X-coefficient polynomials.
    #[arg(long, allow_hyphen_values = true)]
    poly: Option<String>,
}

#[derive(Args)]
struct ExpandArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    source: Source,
    #[arg(long, default_value_t = 200)]
    n: usize,
    /// Annotate quotients that are multiples of A_{i,k}.
    #[arg(long)]
    k: Option<usize>,
}

#[derive(Args)]
struct GenerateArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 200)]
    n: usize,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    e1: i64,
    #[arg(long, allow_hyphen_values = true)]
    e2: i64,
    /// lambda_1..lambda_l, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    lambdas: Option<Vec<i64>>,
    /// Type (p, 1, 1) with a_1 a multiple of A_{i,1}, used when no lambdas are given.
    #[arg(long)]
    i: Option<u32>,
}

#[derive(Args)]
struct Prop1Args {
    #[command(flatten)]
    common: Common,
    /// Single k; all 1 <= k < p/2 when omitted.
    #[arg(long)]
    k: Option<usize>,
}

#[derive(Args)]
struct Prop2Args {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    i: Option<usize>,
}

#[derive(Args)]
struct ConjArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 200)]
    n: usize,
}

#[derive(Args)]
struct Conj2Args {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 200)]
    n: usize,
    /// Override l = (p+1)^2/3.
    #[arg(long)]
    l: Option<usize>,
}

#[derive(Args)]
struct ExponentArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    source: Source,
    /// Number of partial quotients; the window is n - 1.
    #[arg(long, default_value_t = 200)]
    n: usize,
    /// Closed form for type (p, l, k) with linear initial quotients.
    #[arg(long, requires = "k")]
    l: Option<u64>,
    #[arg(long, requires = "l")]
    k: Option<u64>,
    /// Closed form for type (p, 1, 1) with a_1 a multiple of A_{i,1}.
    #[arg(long, conflicts_with = "l")]
    i: Option<u32>,
}

struct Outcome {
    out: String,
    pass: bool,
}

impl Outcome {
    fn ok(out: String) -> Self {
        Outcome { out, pass: true }
    }
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string(v).expect("serializable");
    s.push('\n');
    s
}

fn field(p: u64) -> Result<PrimeField> {
    PrimeField::new(p)
}

fn positive(n: usize, what: &str) -> Result<usize> {
    if n == 0 {
        return Err(Error::OutOfRange(format!("{what} must be positive")));
    }
    Ok(n)
}

fn source_state(f: PrimeField, src: &Source) -> Result<AlgebraicState> {
    match &src.poly {
        None => AlgebraicState::quartic(f),
        Some(text) if text.trim_start().starts_with('[') => {
            let list: Vec<PolyJson> = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
            let coeffs = list.iter().map(PolyJson::to_poly).collect::<Result<Vec<_>>>()?;
            if coeffs.iter().any(|c| c.field() != f) {
                return Err(Error::FieldMismatch);
            }
            AlgebraicState::new(f, coeffs)
        }
        Some(text) => parse_polynomial(text, f),
    }
}

/// `A_{0,k} .. A_{i,k}` with `deg A_{i,k} >= max_deg`.
fn a_polys_covering(f: PrimeField, k: usize, max_deg: usize) -> Result<Vec<Polynomial>> {
    let p = f.modulus() as u64;
    let mut i = 0;
    while (a_degree(p, k as u64, i) as usize) < max_deg && i < 8 {
        i += 1;
    }
    a_sequence(f, k, i as usize)
}

fn write_quotients(out: &mut String, cf: &CfExpansion, k: Option<usize>) -> Result<()> {
    let f = cf.field();
    let a_polys = match k {
        Some(k) => {
            let max_deg = cf.degrees().into_iter().max().unwrap_or(1).max(1) as usize;
            a_polys_covering(f, k, max_deg)?
        }
        None => Vec::new(),
    };
    for (n, a) in cf.partial_quotients().iter().enumerate() {
        write!(out, "a_{} = {a}", n + 1).unwrap();
        if let (Some(k), Some((lambda, i))) = (k, match_a_multiple(a, &a_polys)) {
            write!(out, " = {lambda}·A_{{{i},{k}}}").unwrap();
        }
        out.push('\n');
    }
    Ok(())
}

fn expand(args: &ExpandArgs) -> Result<Outcome> {
    let f = field(args.common.p)?;
    let n = positive(args.n, "--n")?;
    let state = source_state(f, &args.source)?;
    let cf = expand_root(&state, n)?;
    if args.common.json {
        return Ok(Outcome::ok(json(&CfJson::from(&cf))));
    }
    let mut out = format!("p = {}, {} partial quotients\n", f.modulus(), cf.len());
    write_quotients(&mut out, &cf, args.k)?;
    Ok(Outcome::ok(out))
}

#[derive(Serialize)]
struct GeneratedJson {
    p: u32,
    l: usize,
    k: usize,
    eps1: u32,
    eps2: u32,
    pq: Vec<PolyJson>,
    lambdas: Vec<u32>,
    deltas: Vec<u32>,
    indices: Vec<u32>,
}

fn values(xs: &[Fp]) -> Vec<u32> {
    xs.iter().map(|x| x.value()).collect()
}

fn generate(args: &GenerateArgs) -> Result<Outcome> {
    let f = field(args.common.p)?;
    let n = positive(args.n, "--n")?;
    let (e1, e2) = (f.elem(args.e1), f.elem(args.e2));
    let (g, l, k) = match (&args.lambdas, args.i) {
        (Some(lams), _) => {
            let k = args
                .k
                .ok_or_else(|| Error::OutOfRange("--k is required with --lambdas".into()))?;
            let lams: Vec<Fp> = lams.iter().map(|&x| f.elem(x)).collect();
            let l = lams.len();
            let spec = PerfectExpansionSpec::new(f, k, e1, e2, lams, IndexSequence::zeros(l, k)?)?;
            (theorem1_generate(&spec, n)?, l, k)
        }
        (None, Some(i)) => (corollary1_generate(f, i, e1, e2, n)?, 1, 1),
        (None, None) => return Err(Error::OutOfRange("give --lambdas (with --k) or --i".into())),
    };
    if args.common.json {
        return Ok(Outcome::ok(json(&GeneratedJson {
            p: f.modulus(),
            l,
            k,
            eps1: e1.value(),
            eps2: e2.value(),
            pq: g.cf.partial_quotients().iter().map(PolyJson::from).collect(),
            lambdas: values(&g.lambdas),
            deltas: values(&g.deltas),
            indices: g.indices.clone(),
        })));
    }
    let mut out = format!("type (p, l, k) = ({}, {l}, {k}), e1 = {e1}, e2 = {e2}\n", f.modulus());
    for (n, a) in g.cf.partial_quotients().iter().enumerate() {
        writeln!(out, "a_{} = {a} = {}·A_{{{},{k}}}", n + 1, g.lambdas[n], g.indices[n]).unwrap();
    }
    Ok(Outcome::ok(out))
}

fn k_range(f: PrimeField) -> std::ops::RangeInclusive<usize> {
    1..=(f.modulus() as usize - 1) / 2
}

#[derive(Serialize)]
struct Prop1Json {
    #[serde(flatten)]
    report: hqcf::hyperquadratic::Prop1Report,
    v: Vec<u32>,
    pass: bool,
}

fn prop1(args: &Prop1Args) -> Result<Outcome> {
    let f = field(args.common.p)?;
    let ks: Vec<usize> = match args.k {
        Some(k) => vec![k],
        None => k_range(f).collect(),
    };
    let reports = map_ordered(Execution::Parallel, &ks, |&k| -> Result<Prop1Json> {
        let report = prop1_verify(f, k)?;
        let v = values(&PQConstants::new(f, k)?.v);
        let pass = report.passed();
        Ok(Prop1Json { report, v, pass })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let pass = reports.iter().all(|r| r.pass);
    if args.common.json {
        return Ok(Outcome {
            out: json(&reports),
            pass,
        });
    }
    let mut out = String::new();
    for r in &reports {
        let v: Vec<String> = r.v.iter().map(u32::to_string).collect();
        writeln!(
            out,
            "p = {}, k = {}: {}  theta_{} = {}  v = [{}]",
            r.report.p,
            r.report.k,
            if r.pass { "pass" } else { "FAIL" },
            r.report.k,
            r.report.theta,
            v.join(", ")
        )
        .unwrap();
        if !r.pass {
            writeln!(
                out,
                "  cf_matches = {}, reversal = {}, a_identity = {:?}, first mismatch = {:?}",
                r.report.cf_matches, r.report.reversal_holds, r.report.a_identity, r.report.first_mismatch
            )
            .unwrap();
        }
    }
    Ok(Outcome { out, pass })
}

fn prop2(args: &Prop2Args) -> Result<Outcome> {
    let f = field(args.common.p)?;
    let ks: Vec<usize> = args.k.map_or_else(|| k_range(f).collect(), |k| vec![k]);
    let is: Vec<usize> = args.i.map_or_else(|| k_range(f).collect(), |i| vec![i]);
    let grid: Vec<(usize, usize)> = ks.iter().flat_map(|&k| is.iter().map(move |&i| (k, i))).collect();
    let reports = map_ordered(Execution::Parallel, &grid, |&(k, i)| prop2_verify(f, k, i))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let pass = reports.iter().all(|r| !matches!(r.outcome, Prop2Outcome::Fail { .. }));
    if args.common.json {
        return Ok(Outcome {
            out: json(&reports),
            pass,
        });
    }
    let mut out = String::new();
    for r in &reports {
        let status = match &r.outcome {
            Prop2Outcome::Pass => "pass".to_string(),
            Prop2Outcome::Undefined { j } => format!("excluded: delta_{j} undefined"),
            Prop2Outcome::Fail {
                first_mismatch,
                reversal_holds,
            } => {
                format!("FAIL (first mismatch {first_mismatch:?}, reversal {reversal_holds})")
            }
        };
        writeln!(out, "p = {}, k = {}, i = {}: {status}", r.p, r.k, r.i).unwrap();
    }
    Ok(Outcome { out, pass })
}

fn fmt_opt(x: Option<u32>) -> String {
    x.map_or_else(|| "-".into(), |v| v.to_string())
}

fn summary_text(s: &VerdictSummary) -> String {
    format!(
        "p = {}: {}\n(e1, e2, a) = ({}, {}, {})\na = 8/27: {}\ncompared terms: {}\n",
        s.p,
        if s.pass { "pass" } else { "FAIL" },
        fmt_opt(s.epsilon1),
        fmt_opt(s.epsilon2),
        fmt_opt(s.a),
        s.a_equals_8_27.map_or_else(|| "-".into(), |b| b.to_string()),
        s.compared_terms
    )
}

fn conj1(args: &ConjArgs) -> Result<Outcome> {
    let f = field(args.common.p)?;
    let v = verify_conjecture1(f, positive(args.n, "--n")?)?;
    let s = VerdictSummary::from(&v);
    if args.common.json {
        return Ok(Outcome {
            out: json(&s),
            pass: s.pass,
        });
    }
    let mut out = summary_text(&s);
    if let Some(t) = &v.trace {
        writeln!(out, "(l, k) = ({}, {})", t.l, t.k).unwrap();
    }
    if let Some(fl) = &v.failure {
        writeln!(out, "failed at {}: {}", fl.stage, fl.message).unwrap();
    }
    Ok(Outcome { out, pass: s.pass })
}

fn conj2(args: &Conj2Args) -> Result<Outcome> {
    let f = field(args.common.p)?;
    let n = positive(args.n, "--n")?;
    let v = match args.l {
        Some(l) => verify_conjecture2_with_l(f, n, l)?,
        None => verify_conjecture2(f, n)?,
    };
    let s = VerdictSummary::from(&v);
    if args.common.json {
        return Ok(Outcome {
            out: json(&s),
            pass: s.pass,
        });
    }
    let mut out = summary_text(&s);
    writeln!(out, "(l, k', k) = ({}, {}, {})", v.l, v.k_prime, v.k).unwrap();
    writeln!(out, "solutions: {}", v.all_solutions.len()).unwrap();
    if let Some(o) = &v.obstruction {
        writeln!(out, "obstruction: {o}").unwrap();
    }
    Ok(Outcome { out, pass: s.pass })
}

fn exponent(args: &ExponentArgs) -> Result<Outcome> {
    let f = field(args.common.p)?;
    let p = f.modulus() as u64;
    let n = positive(args.n, "--n")?;
    if n < 2 {
        return Err(Error::OutOfRange("--n must be at least 2".into()));
    }
    let state = source_state(f, &args.source)?;
    let cf = expand_root(&state, n)?;
    let closed = match (args.l, args.k, args.i) {
        (Some(l), Some(k), _) => Some(ClosedForm::ZeroInitial { p, l, k }),
        (_, _, Some(i)) => Some(ClosedForm::TypeOneOne { p, i }),
        _ if args.source.quartic && p % 3 == 1 => {
            let t = derive_frobenius_relation(f)?;
            Some(ClosedForm::ZeroInitial {
                p,
                l: t.l as u64,
                k: t.k as u64,
            })
        }
        _ => None,
    };
    let r = approximation_exponent(&cf, n - 1, closed)?;
    if args.common.json {
        return Ok(Outcome::ok(json(&r)));
    }
    let mut out = format!(
        "window = {}\nnu0 (empirical max) = {} at n+1 = {}\nnu (empirical) = {}\n",
        r.window, r.nu0_empirical, r.argmax, r.nu_empirical
    );
    match (r.nu0_closed, r.nu_closed) {
        (Some(a), Some(b)) => writeln!(out, "nu0 (closed form) = {a}\nnu (closed form) = {b}").unwrap(),
        _ => writeln!(out, "closed form: none").unwrap(),
    }
    Ok(Outcome::ok(out))
}

fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.cmd {
        Cmd::Expand(a) => expand(a),
        Cmd::Generate(a) => generate(a),
        Cmd::Verify(VerifyCmd::Prop1(a)) => prop1(a),
        Cmd::Verify(VerifyCmd::Prop2(a)) => prop2(a),
        Cmd::Verify(VerifyCmd::Conj1(a)) => conj1(a),
        Cmd::Verify(VerifyCmd::Conj2(a)) => conj2(a),
        Cmd::Exponent(a) => exponent(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(o) => {
            print!("{}", o.out);
            ExitCode::from(if o.pass { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
