//! `kbessel`: evaluations, sweeps, verification suites and Eisenstein
//! reports as CSV.

mod range;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use kbessel::asymptotics::evaluate_with;
use kbessel::eisenstein::{
    bound_shape_check_with, direct_coset_sum, EisensteinOptions, FourierData, KernelSource,
    ShapeOptions,
};
use kbessel::oracle::{k_contour_with, k_series_with, ContourOptions, SERIES_MAX_ABS_T};
use kbessel::verify::{run_suite, Suite};
use kbessel::{ComplexValue, Error, EvalResult, PrecisionPolicy, RegimeThresholds};

use range::Range;

const SCHEMA: &str = "# schema=1";
const SIG_DIGITS: usize = 17;

#[derive(Parser, Debug)]
#[command(name = "kbessel", version, about = "K-Bessel functions of large complex order")]
struct Cli {
    /// Write CSV here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Decimal digits for the extended-precision oracles.
    #[arg(long, global = true)]
    digits: Option<u32>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// One evaluation of K_{r+it}(y).
    Eval(EvalArgs),
    /// Evaluations over a grid of r, t and y.
    Sweep(SweepArgs),
    /// Run verification suites.
    Verify(VerifyArgs),
    /// Eisenstein series for the modular group.
    Eisenstein(EisensteinArgs),
}

#[derive(Args, Debug, Clone, Copy)]
struct ThresholdArgs {
    /// Half-width of the band |t/y − 1| routed to the uniform expansions.
    #[arg(long)]
    coalescence_width: Option<f64>,
    /// Largest admissible |r|.
    #[arg(long)]
    max_abs_r: Option<f64>,
}

impl ThresholdArgs {
    fn thresholds(&self) -> Result<RegimeThresholds, Failure> {
        let mut th = RegimeThresholds::default();
        if let Some(w) = self.coalescence_width {
            th.coalescence_width = w;
        }
        if let Some(m) = self.max_abs_r {
            th.max_abs_r = m;
        }
        th.validate().map_err(|e| Failure::Usage(e.to_string()))?;
        Ok(th)
    }
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[arg(long, allow_negative_numbers = true)]
    r: f64,
    #[arg(long, allow_negative_numbers = true)]
    t: f64,
    #[arg(long, allow_negative_numbers = true)]
    y: f64,
    /// Also evaluate the extended-precision oracle.
    #[arg(long)]
    with_oracle: bool,
    #[command(flatten)]
    thresholds: ThresholdArgs,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// `start:step:stop`, a comma list, or a single value.
    #[arg(long, allow_hyphen_values = true)]
    r: Range,
    /// Imaginary part of the order; give exactly one of --t, --theta, --mu.
    #[arg(long, allow_hyphen_values = true)]
    t: Option<Range>,
    /// Sets t = y sin θ.
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<Range>,
    /// Sets t = y cosh μ.
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<Range>,
    #[arg(long, allow_hyphen_values = true)]
    y: Range,
    #[arg(long)]
    with_oracle: bool,
    #[command(flatten)]
    thresholds: ThresholdArgs,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Suite name, `acceptance` (criteria suites) or `all`.
    #[arg(long, default_value = "acceptance")]
    suite: String,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum KernelArg {
    Oracle,
    Asymptotic,
}

#[derive(Args, Debug)]
struct EisensteinArgs {
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    x: Range,
    /// Defaults to 1, or to 0.5,2,8,32,128 with --shape-check.
    #[arg(long, allow_hyphen_values = true)]
    y: Option<Range>,
    #[arg(long)]
    r: f64,
    #[arg(long, allow_hyphen_values = true, default_value = "30")]
    t: Range,
    /// Compare against the coset sum (needs r > 1).
    #[arg(long, conflicts_with = "shape_check")]
    cross_check: bool,
    /// Rows c <= BOUND of the coset sum are summed exactly.
    #[arg(long, default_value_t = 1000)]
    bound: u64,
    /// Table of residuals against the bound shapes (x fixed, grid over t and y).
    #[arg(long)]
    shape_check: bool,
    /// Source of the K values; defaults to `oracle`, or `asymptotic` for --shape-check.
    #[arg(long, value_enum)]
    kernel: Option<KernelArg>,
    /// Fail if the estimated relative error exceeds this.
    #[arg(long)]
    target: Option<f64>,
    /// ε in the bound shapes.
    #[arg(long, default_value_t = 0.0)]
    epsilon: f64,
    /// Smallest admissible |t|.
    #[arg(long, default_value_t = kbessel::eisenstein::DEFAULT_T0)]
    t0: f64,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Domain(Error),
    Verify(Vec<&'static str>),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(e.into())
    }
}

type Table = Vec<Vec<String>>;

fn num(v: f64) -> String {
    format!("{v}")
}

fn sci(v: &ComplexValue) -> (String, String) {
    v.to_sci(SIG_DIGITS)
}

fn abs_sci(v: &ComplexValue) -> String {
    if v.is_zero() {
        return "0e0".into();
    }
    sci(&ComplexValue::from_polar_ln(v.ln_abs(), 0.0)).0
}

fn write_table(out: &Option<PathBuf>, header: &[&str], rows: &Table) -> Result<(), Failure> {
    let sink: Box<dyn Write> = match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let mut sink = sink;
    writeln!(sink, "{SCHEMA}")?;
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Clone, Copy)]
struct Precision {
    policy: PrecisionPolicy,
    contour: ContourOptions,
}

impl Precision {
    fn new(digits: Option<u32>) -> Result<Self, Failure> {
        let mut p = Precision {
            policy: PrecisionPolicy::default(),
            contour: ContourOptions::default(),
        };
        if let Some(d) = digits {
            if !(1..=1000).contains(&d) {
                return Err(Failure::Usage(format!("--digits {d} not in [1, 1000]")));
            }
            p.policy.working_digits = Some(d);
            p.contour.digits = d;
        }
        Ok(p)
    }

    /// Series where it is well conditioned, contour quadrature otherwise.
    fn oracle(&self, r: f64, t: f64, y: f64) -> Result<ComplexValue, Error> {
        let nu = ComplexValue::new(r, t);
        let integer = t == 0.0 && r.fract() == 0.0;
        if y < 2.0 && t.abs() <= SERIES_MAX_ABS_T && !integer {
            Ok(k_series_with(nu, y, &self.policy)?.to_value())
        } else {
            Ok(k_contour_with(nu, y, &self.contour)?.value.to_value())
        }
    }
}

const EVAL_HEADER: [&str; 11] = [
    "r", "t", "y", "regime", "method", "re", "im", "error_order", "oracle_re", "oracle_im",
    "rel_deviation",
];

fn eval_row(r: f64, t: f64, y: f64, th: &RegimeThresholds, oracle: Option<&Precision>) -> Result<Vec<String>, Failure> {
    if !(y > 0.0 && y.is_finite()) {
        return Err(Failure::Usage(format!("y = {y} must be positive and finite")));
    }
    if !(r.is_finite() && t.is_finite()) {
        return Err(Failure::Usage("r and t must be finite".into()));
    }
    let mut k: EvalResult = evaluate_with(r, t, y, th)?;
    if let Some(p) = oracle {
        k = k.with_oracle(p.oracle(r, t, y)?);
    }
    let (re, im) = sci(&k.value);
    let orders: Vec<String> = k.error_order.iter().map(|o| o.to_string()).collect();
    let (ore, oim) = k.oracle.as_ref().map(sci).unwrap_or_default();
    Ok(vec![
        num(r),
        num(t),
        num(y),
        k.regime.tag().into(),
        format!("{:?}", k.method),
        re,
        im,
        orders.join(";"),
        ore,
        oim,
        k.rel_deviation().map(|d| format!("{d:e}")).unwrap_or_default(),
    ])
}

fn cmd_eval(a: &EvalArgs, prec: &Precision) -> Result<(Table, &'static [&'static str]), Failure> {
    let th = a.thresholds.thresholds()?;
    let row = eval_row(a.r, a.t, a.y, &th, a.with_oracle.then_some(prec))?;
    Ok((vec![row], &EVAL_HEADER))
}

fn cmd_sweep(a: &SweepArgs, prec: &Precision) -> Result<(Table, &'static [&'static str]), Failure> {
    let th = a.thresholds.thresholds()?;
    let given = [a.t.is_some(), a.theta.is_some(), a.mu.is_some()];
    if given.iter().filter(|&&g| g).count() != 1 {
        return Err(Failure::Usage("give exactly one of --t, --theta, --mu".into()));
    }
    let mut points = Vec::new();
    for &r in a.r.values() {
        for &y in a.y.values() {
            if let Some(t) = &a.t {
                points.extend(t.values().iter().map(|&t| (r, t, y)));
            } else if let Some(th) = &a.theta {
                points.extend(th.values().iter().map(|&th| (r, y * th.sin(), y)));
            } else if let Some(mu) = &a.mu {
                points.extend(mu.values().iter().map(|&mu| (r, y * mu.cosh(), y)));
            }
        }
    }
    // deterministic order: sorted by (r, t, y)
    points.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.total_cmp(&q.1)).then(p.2.total_cmp(&q.2)));
    let oracle = a.with_oracle.then_some(prec);
    let rows = points
        .par_iter()
        .map(|&(r, t, y)| eval_row(r, t, y, &th, oracle))
        .collect::<Result<Table, Failure>>()?;
    Ok((rows, &EVAL_HEADER))
}

const VERIFY_HEADER: [&str; 6] = ["suite", "case", "metric", "value", "bound", "pass"];

fn cmd_verify(a: &VerifyArgs) -> Result<(Table, &'static [&'static str], Vec<&'static str>), Failure> {
    let suites: Vec<Suite> = match a.suite.as_str() {
        "all" => Suite::ALL.to_vec(),
        "acceptance" => Suite::ACCEPTANCE.to_vec(),
        name => vec![Suite::from_name(name).ok_or_else(|| {
            let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
            Failure::Usage(format!("unknown suite {name:?}; expected one of {}, acceptance, all", names.join(", ")))
        })?],
    };
    let mut rows = Vec::new();
    let mut failed = Vec::new();
    for s in suites {
        let rep = run_suite(s)?;
        if !rep.pass {
            failed.push(s.name());
        }
        for row in &rep.rows {
            rows.push(vec![
                s.name().to_string(),
                row.case.clone(),
                row.metric.to_string(),
                format!("{:e}", row.value),
                row.bound.map(|b| format!("{b:e}")).unwrap_or_default(),
                row.pass.to_string(),
            ]);
        }
    }
    Ok((rows, &VERIFY_HEADER, failed))
}

const EISENSTEIN_HEADER: [&str; 11] = [
    "x", "y", "r", "t", "n_terms", "kernel", "re", "im", "accuracy", "constant_re", "constant_im",
];
const CROSS_HEADER: [&str; 15] = [
    "x", "y", "r", "t", "n_terms", "kernel", "re", "im", "accuracy", "constant_re", "constant_im",
    "coset_re", "coset_im", "coset_tail", "rel_deviation",
];
const SHAPE_HEADER: [&str; 9] = ["x", "r", "t", "y", "case", "n_terms", "abs_residual", "ratio", "alt_ratio"];

fn cmd_eisenstein(a: &EisensteinArgs, digits: Option<u32>) -> Result<(Table, &'static [&'static str]), Failure> {
    if !(a.r.is_finite()) {
        return Err(Failure::Usage("r must be finite".into()));
    }
    let ys = match &a.y {
        Some(y) => y.clone(),
        None if a.shape_check => "0.5,2,8,32,128".parse().map_err(Failure::Usage)?,
        None => "1".parse().map_err(Failure::Usage)?,
    };
    if ys.values().iter().any(|&y| !(y > 0.0 && y.is_finite())) {
        return Err(Failure::Usage("y must be positive and finite".into()));
    }
    let kernel = match a.kernel {
        Some(KernelArg::Oracle) => KernelSource::Oracle,
        Some(KernelArg::Asymptotic) => KernelSource::Asymptotic,
        None if a.shape_check => KernelSource::Asymptotic,
        None => KernelSource::Oracle,
    };
    let mut opts = EisensteinOptions {
        kernel,
        t0: a.t0,
        ..EisensteinOptions::default()
    };
    if let Some(d) = digits {
        opts.digits = d;
    }

    if a.shape_check {
        let xs = a.x.values();
        if xs.len() != 1 {
            return Err(Failure::Usage("--shape-check takes a single --x".into()));
        }
        let sopts = ShapeOptions {
            epsilon: a.epsilon,
            x: xs[0],
            eval: opts,
            ..ShapeOptions::default()
        };
        let reports = a
            .t
            .values()
            .par_iter()
            .map(|&t| bound_shape_check_with(a.r, &[t], ys.values(), &sopts))
            .collect::<Result<Vec<_>, Error>>()?;
        let rows = reports
            .iter()
            .flat_map(|rep| rep.rows.iter())
            .map(|w| {
                vec![
                    num(sopts.x),
                    num(w.r),
                    num(w.t),
                    num(w.y),
                    w.case.tag().to_string(),
                    w.n_terms.to_string(),
                    abs_sci(&w.residual),
                    format!("{:e}", w.ratio),
                    w.alt_ratio.map(|q| format!("{q:e}")).unwrap_or_default(),
                ]
            })
            .collect();
        return Ok((rows, &SHAPE_HEADER));
    }

    if a.cross_check && a.r <= 1.0 {
        return Err(Failure::Domain(Error::Divergence(a.r)));
    }
    let mut cells = Vec::new();
    for &t in a.t.values() {
        for &y in ys.values() {
            cells.push((t, y));
        }
    }
    let per_cell = cells
        .par_iter()
        .map(|&(t, y)| {
            let s = ComplexValue::new(a.r, t);
            let data = FourierData::new(y, s, &opts)?;
            a.x.values()
                .iter()
                .map(|&x| {
                    let p = data.point(x);
                    if let Some(target) = a.target {
                        if p.accuracy > target {
                            return Err(Error::Accuracy { achieved: p.accuracy });
                        }
                    }
                    let (re, im) = sci(&p.value);
                    let (cre, cim) = sci(&p.constant_term);
                    let mut row = vec![
                        num(x),
                        num(y),
                        num(a.r),
                        num(t),
                        p.n_terms.to_string(),
                        p.kernel.tag().to_string(),
                        re,
                        im,
                        format!("{:e}", p.accuracy),
                        cre,
                        cim,
                    ];
                    if a.cross_check {
                        let c = direct_coset_sum(x, y, s, a.bound)?;
                        let (qre, qim) = sci(&c.value);
                        row.extend([
                            qre,
                            qim,
                            format!("{:e}", c.tail_estimate),
                            format!("{:e}", p.value.rel_deviation(&c.value)),
                        ]);
                    }
                    Ok(row)
                })
                .collect::<Result<Table, Error>>()
        })
        .collect::<Result<Vec<Table>, Error>>()?;
    let rows = per_cell.into_iter().flatten().collect();
    Ok((rows, if a.cross_check { &CROSS_HEADER } else { &EISENSTEIN_HEADER }))
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let prec = Precision::new(cli.digits)?;
    match &cli.command {
        Command::Eval(a) => {
            let (rows, header) = cmd_eval(a, &prec)?;
            write_table(&cli.out, header, &rows)
        }
        Command::Sweep(a) => {
            let (rows, header) = cmd_sweep(a, &prec)?;
            write_table(&cli.out, header, &rows)
        }
        Command::Verify(a) => {
            let (rows, header, failed) = cmd_verify(a)?;
            write_table(&cli.out, header, &rows)?;
            if failed.is_empty() {
                Ok(())
            } else {
                Err(Failure::Verify(failed))
            }
        }
        Command::Eisenstein(a) => {
            let (rows, header) = cmd_eisenstein(a, cli.digits)?;
            write_table(&cli.out, header, &rows)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Verify(names)) => {
            eprintln!("verification failed: {}", names.join(", "));
            ExitCode::from(3)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
