//! The `weilbench` command line.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::json;

use crate::birational::{classify, compare_k_order, BirationalError, DiscrepancyVector};
use crate::finite_field::{FieldError, DEFAULT_ENUMERATION_CAP};
use crate::gallery::{self, GalleryError};
use crate::padic::{binomial_is_irreducible, snc_measure_with, MeasureReport, PadicError, ResolutionModel};
use crate::varieties::{
    count_points_with, count_sequence_with, CountOptions, CountSequence, SequenceOptions, StratifiedVariety,
    VarietyError,
};
use crate::verify;
use crate::zeta::report::{zeta_display, ZetaReport};
use crate::zeta::{
    compare, counting_polynomial, fit_recurrence, fit_recurrence_with_hint, weil_structure, zeta_function,
    WeilDecomposition, ZetaFunction,
};

/// Environment variable holding the default worker count.
pub const WORKERS_ENV: &str = "WEILBENCH_WORKERS";

const GALLERY_SCHEME: &str = "gallery:";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "weilbench", version, about = "Point counts, zeta functions and p-adic measures of varieties")]
pub struct Cli {
    #[command(flatten)]
    pub run: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Counting threads.
    #[arg(long, global = true, env = WORKERS_ENV, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    pub workers: u32,
    /// Wall-clock budget per count, in seconds.
    #[arg(long, global = true, value_parser = positive_f64)]
    pub budget: Option<f64>,
    /// Largest field order that may be enumerated.
    #[arg(long, global = true, default_value_t = DEFAULT_ENUMERATION_CAP, value_parser = clap::value_parser!(u64).range(2..))]
    pub cap: u64,
}

fn positive_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        _ => Err(format!("`{s}` is not a positive number of seconds")),
    }
}

#[derive(Debug, Clone, Args)]
pub struct FieldArgs {
    /// Characteristic.
    #[arg(long)]
    pub p: u64,
    /// Base field degree: counts are over F_{p^(r k)}.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    pub r: u32,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count points over one field.
    Count {
        input: String,
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        k: u32,
    },
    /// Count N_1..N_K, fit the zeta function and read off its weights.
    Zeta(ZetaArgs),
    /// Betti numbers and purity flags only.
    Betti(ZetaArgs),
    /// Canonical measure of a resolution model.
    Measure {
        input: String,
        #[arg(long)]
        p: u64,
        /// Degree of the base extension of F_p.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
        r_ext: u32,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
        k: u32,
    },
    /// Singularity class of a model or discrepancy vector.
    Classify { input: String },
    /// K-order between two discrepancy vectors or models.
    Korder { a: String, b: String },
    /// Compare the counts and zeta functions of two varieties.
    Compare {
        a: String,
        b: String,
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        terms: u32,
    },
    /// Builtin examples.
    Gallery {
        #[command(subcommand)]
        action: GalleryAction,
    },
    /// Run the acceptance suite.
    Verify,
}

#[derive(Debug, Clone, Args)]
pub struct ZetaArgs {
    pub input: String,
    #[command(flatten)]
    pub field: FieldArgs,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub terms: u32,
    /// Expected total Betti number; used as the recurrence order.
    #[arg(long)]
    pub betti_hint: Option<usize>,
    /// Also check Poincare duality (smooth proper varieties only).
    #[arg(long)]
    pub duality: bool,
}

#[derive(Debug, Subcommand)]
pub enum GalleryAction {
    List,
    Run {
        id: String,
        /// Comma-separated primes; defaults to the entry's good primes up to 7.
        #[arg(long, value_delimiter = ',')]
        primes: Option<Vec<u64>>,
    },
    Export {
        id: String,
        /// Write here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug)]
pub enum CliError {
    /// Malformed input or arguments.
    Input(String),
    /// Time budget or enumeration cap exceeded.
    Budget(String),
    /// A check ran and failed.
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Input(_) => 2,
            CliError::Budget(_) => 3,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Failed(_) => "check_failed",
            CliError::Input(_) => "input",
            CliError::Budget(_) => "budget",
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Budget(m) | CliError::Failed(m) => m,
        }
    }
}

impl From<VarietyError> for CliError {
    fn from(e: VarietyError) -> Self {
        match e {
            VarietyError::TimedOut { .. } | VarietyError::Expired | VarietyError::Field(FieldError::FieldTooLarge { .. }) => {
                CliError::Budget(e.to_string())
            }
            e => CliError::Input(e.to_string()),
        }
    }
}

impl From<PadicError> for CliError {
    fn from(e: PadicError) -> Self {
        match e {
            PadicError::Variety(v) => v.into(),
            e => CliError::Input(e.to_string()),
        }
    }
}

impl From<GalleryError> for CliError {
    fn from(e: GalleryError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<BirationalError> for CliError {
    fn from(e: BirationalError) -> Self {
        CliError::Input(e.to_string())
    }
}

/// Standard output of a successful command, plus warnings for standard
/// error.
#[derive(Debug, Default)]
pub struct Output {
    pub stdout: String,
    pub warnings: Vec<String>,
    /// Set when the command ran but its checks failed.
    pub failed: Option<String>,
}

fn read_source(input: &str) -> Result<String, CliError> {
    std::fs::read_to_string(input).map_err(|e| CliError::Input(format!("cannot read `{input}`: {e}")))
}

pub fn load_variety(input: &str) -> Result<StratifiedVariety, CliError> {
    if let Some(id) = input.strip_prefix(GALLERY_SCHEME) {
        return Ok(gallery::load_variety(id)?);
    }
    Ok(StratifiedVariety::from_json(&read_source(input)?)?)
}

pub fn load_model(input: &str) -> Result<ResolutionModel, CliError> {
    if let Some(id) = input.strip_prefix(GALLERY_SCHEME) {
        return Ok(gallery::load_model(id)?);
    }
    Ok(ResolutionModel::from_json(&read_source(input)?)?)
}

/// A model file, or a bare `{"r": .., "entries": [..]}` discrepancy vector.
fn load_discrepancies(input: &str) -> Result<(String, DiscrepancyVector), CliError> {
    if input.starts_with(GALLERY_SCHEME) {
        let m = load_model(input)?;
        return Ok((m.name.clone(), m.discrepancies()));
    }
    let text = read_source(input)?;
    if let Ok(d) = serde_json::from_str::<DiscrepancyVector>(&text) {
        d.validate()?;
        return Ok((input.to_string(), d));
    }
    let m = ResolutionModel::from_json(&text)?;
    Ok((m.name.clone(), m.discrepancies()))
}

impl RunConfig {
    fn count_options(&self) -> CountOptions {
        CountOptions {
            workers: self.workers as usize,
            ..CountOptions::default()
        }
    }

    fn sequence_options(&self) -> SequenceOptions {
        SequenceOptions {
            cap: self.cap,
            count: self.count_options(),
            per_k_budget: self.budget.map(Duration::from_secs_f64),
        }
    }

    fn deadline_options(&self) -> CountOptions {
        let mut o = self.count_options();
        o.deadline = self.budget.map(|b| std::time::Instant::now() + Duration::from_secs_f64(b));
        o
    }
}

fn to_json<T: Serialize>(x: &T) -> String {
    serde_json::to_string_pretty(x).expect("serializable")
}

fn csv_line(fields: &[String]) -> String {
    let quoted: Vec<String> = fields
        .iter()
        .map(|f| {
            if f.contains([',', '"', '\n']) {
                format!("\"{}\"", f.replace('"', "\"\""))
            } else {
                f.clone()
            }
        })
        .collect();
    quoted.join(",") + "\n"
}

fn csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = csv_line(&header.iter().map(|s| s.to_string()).collect::<Vec<_>>());
    for r in rows {
        out += &csv_line(r);
    }
    out
}

fn cmd_count(run: &RunConfig, input: &str, field: &FieldArgs, k: u32) -> Result<Output, CliError> {
    let v = load_variety(input)?;
    let c = count_points_with(&v, field.p, field.r, k, run.cap, &run.deadline_options())?;
    let q = BigInt::from(field.p).pow(field.r * k);
    let mut out = Output::default();
    if let Some(w) = &c.warning {
        out.warnings.push(w.to_string());
    }
    out.stdout = match run.format {
        Format::Table => format!("{}\n", c.count),
        Format::Json => {
            to_json(&json!({
                "variety": v.name, "p": field.p, "r": field.r, "k": k, "q": q.to_string(),
                "count": c.count.to_string(), "warning": c.warning.as_ref().map(|w| w.to_string()),
            })) + "\n"
        }
        Format::Csv => csv(
            &["variety", "p", "r", "k", "q", "count"],
            &[vec![
                v.name.clone(),
                field.p.to_string(),
                field.r.to_string(),
                k.to_string(),
                q.to_string(),
                c.count.to_string(),
            ]],
        ),
    };
    Ok(out)
}

struct ZetaRun {
    seq: CountSequence,
    report: ZetaReport,
    zeta: Option<ZetaFunction>,
    weil: Option<WeilDecomposition>,
}

fn zeta_pipeline(run: &RunConfig, a: &ZetaArgs, v: &StratifiedVariety) -> Result<ZetaRun, CliError> {
    let seq = count_sequence_with(v, a.field.p, a.field.r, a.terms, &run.sequence_options())?;
    let mut report = ZetaReport::new(&seq);
    let fitted = match a.betti_hint {
        Some(h) => fit_recurrence_with_hint(&seq, h),
        None => fit_recurrence(&seq),
    };
    let (mut zeta, mut weil) = (None, None);
    match fitted {
        Ok(rec) => {
            report = report.with_recurrence(&rec);
            match zeta_function(&rec, &seq) {
                Ok(z) => {
                    let w = weil_structure(&z, v.claims.dim, a.duality);
                    report = match &w {
                        Ok(w) => report.with_zeta(&z, Some(w)),
                        Err(e) => report.with_zeta(&z, None).with_error(e),
                    };
                    weil = w.ok();
                    zeta = Some(z);
                }
                Err(e) => report = report.with_error(&e),
            }
        }
        Err(e) => report = report.with_error(&e),
    }
    if let Ok(cp) = counting_polynomial(&seq, v.claims.dim) {
        report = report.with_counting_polynomial(&cp);
    }
    Ok(ZetaRun {
        seq,
        report,
        zeta,
        weil,
    })
}

fn zeta_failure(r: &ZetaReport) -> Option<String> {
    (!r.errors.is_empty()).then(|| r.errors.join("; "))
}

fn cmd_zeta(run: &RunConfig, a: &ZetaArgs) -> Result<Output, CliError> {
    let v = load_variety(&a.input)?;
    let z = zeta_pipeline(run, a, &v)?;
    let mut out = Output {
        failed: zeta_failure(&z.report),
        ..Output::default()
    };
    if !v.is_good_prime(a.field.p) {
        out.warnings
            .push(format!("p = {} is not among the good primes of `{}`", a.field.p, v.name));
    }
    let r = &z.report;
    out.stdout = match run.format {
        Format::Json => r.to_json() + "\n",
        Format::Csv => {
            let rows: Vec<Vec<String>> = r
                .counts
                .iter()
                .enumerate()
                .map(|(i, n)| vec![r.variety.clone(), r.p.to_string(), r.r.to_string(), (i + 1).to_string(), n.clone()])
                .collect();
            csv(&["variety", "p", "r", "k", "count"], &rows)
        }
        Format::Table => {
            let mut s = String::new();
            writeln!(s, "variety   {}", r.variety).unwrap();
            writeln!(s, "q         {}", r.q).unwrap();
            writeln!(s, "counts    {}", r.counts.join(" ")).unwrap();
            if let Some(rec) = &r.recurrence {
                writeln!(s, "order     {}", rec.order).unwrap();
            }
            if let Some(zf) = &z.zeta {
                writeln!(s, "zeta      {}", zeta_display(zf)).unwrap();
            }
            if let Some(w) = &z.weil {
                write_weil(&mut s, w);
            }
            if let Some(cp) = &r.counting_polynomial {
                writeln!(s, "count     {cp}").unwrap();
            }
            for e in &r.errors {
                writeln!(s, "error     {e}").unwrap();
            }
            s
        }
    };
    Ok(out)
}

fn write_weil(s: &mut String, w: &WeilDecomposition) {
    let b: Vec<String> = w.betti.iter().map(u64::to_string).collect();
    writeln!(s, "betti     {}", b.join(" ")).unwrap();
    writeln!(s, "euler     {}", w.euler).unwrap();
    writeln!(s, "purity    {}", if w.purity_ok { "ok" } else { "violated" }).unwrap();
    if let Some(d) = w.duality_ok {
        writeln!(s, "duality   {}", if d { "ok" } else { "violated" }).unwrap();
    }
}

fn cmd_betti(run: &RunConfig, a: &ZetaArgs) -> Result<Output, CliError> {
    let v = load_variety(&a.input)?;
    let z = zeta_pipeline(run, a, &v)?;
    let mut out = Output {
        failed: zeta_failure(&z.report),
        ..Output::default()
    };
    let r = &z.report;
    out.stdout = match (run.format, &z.weil) {
        (Format::Json, _) => {
            to_json(&json!({
                "schema": r.schema, "variety": r.variety, "p": r.p, "r": r.r, "q": r.q,
                "weil": r.weil, "conditional_on_good_reduction": true, "errors": r.errors,
            })) + "\n"
        }
        (Format::Csv, Some(w)) => {
            let rows: Vec<Vec<String>> = w
                .betti
                .iter()
                .enumerate()
                .map(|(j, h)| vec![r.variety.clone(), j.to_string(), h.to_string()])
                .collect();
            csv(&["variety", "degree", "betti"], &rows)
        }
        (Format::Csv, None) => csv(&["variety", "degree", "betti"], &[]),
        (Format::Table, w) => {
            let mut s = String::new();
            if let Some(w) = w {
                write_weil(&mut s, w);
            }
            for e in &r.errors {
                writeln!(s, "error     {e}").unwrap();
            }
            s
        }
    };
    Ok(out)
}

fn cmd_measure(run: &RunConfig, input: &str, p: u64, r_ext: u32, k: u32) -> Result<Output, CliError> {
    let m = load_model(input)?;
    let s = snc_measure_with(&m, p, r_ext, k, run.cap, &run.deadline_options())?;
    let report = MeasureReport::new(&m, p, r_ext, k, &s);
    let mut out = Output::default();
    if !binomial_is_irreducible(m.r, &s.q) {
        out.warnings.push(format!(
            "x^{} - {} is reducible; values are reduced modulo the minimal polynomial of {}^(1/{})",
            m.r, s.q, s.q, m.r
        ));
    }
    if let Some(w) = &report.warning {
        out.warnings.push(w.clone());
    }
    out.stdout = match run.format {
        Format::Json => report.to_json() + "\n",
        Format::Csv => csv(
            &["model", "p", "r_ext", "k", "q", "r", "result", "symbolic", "decimal"],
            &[vec![
                report.model.clone(),
                p.to_string(),
                r_ext.to_string(),
                k.to_string(),
                report.q.clone(),
                report.r.to_string(),
                report.result.to_string(),
                report.symbolic.clone().unwrap_or_default(),
                report.decimal.clone().unwrap_or_default(),
            ]],
        ),
        Format::Table => match (&report.symbolic, &report.decimal) {
            (Some(sym), Some(dec)) => format!("{sym}\n{dec}\n"),
            _ => "infinite\n".to_string(),
        },
    };
    Ok(out)
}

fn cmd_classify(run: &RunConfig, input: &str) -> Result<Output, CliError> {
    let (name, d) = load_discrepancies(input)?;
    let label = classify(&d);
    let stdout = match run.format {
        Format::Table => format!("{label}\n"),
        Format::Json => to_json(&json!({"input": name, "r": d.r, "label": label})) + "\n",
        Format::Csv => csv(&["input", "r", "label"], &[vec![name, d.r.to_string(), label.to_string()]]),
    };
    Ok(Output {
        stdout,
        ..Output::default()
    })
}

fn cmd_korder(run: &RunConfig, a: &str, b: &str) -> Result<Output, CliError> {
    let (na, da) = load_discrepancies(a)?;
    let (nb, db) = load_discrepancies(b)?;
    let order = compare_k_order(&da, &db)?;
    let stdout = match run.format {
        Format::Table => format!("{order}\n"),
        Format::Json => to_json(&json!({"a": na, "b": nb, "verdict": order, "display": order.to_string()})) + "\n",
        Format::Csv => csv(&["a", "b", "verdict"], &[vec![na, nb, format!("{order:?}")]]),
    };
    Ok(Output {
        stdout,
        ..Output::default()
    })
}

fn cmd_compare(run: &RunConfig, a: &str, b: &str, field: &FieldArgs, terms: u32) -> Result<Output, CliError> {
    let (va, vb) = (load_variety(a)?, load_variety(b)?);
    let args = |input: &str| ZetaArgs {
        input: input.to_string(),
        field: field.clone(),
        terms,
        betti_hint: None,
        duality: false,
    };
    let za = zeta_pipeline(run, &args(a), &va)?;
    let zb = zeta_pipeline(run, &args(b), &vb)?;
    let cmp = compare(&za.seq, &zb.seq).map_err(|e| CliError::Input(e.to_string()))?;
    let zeta_equal = match (&za.zeta, &zb.zeta) {
        (Some(x), Some(y)) => Some(x.numerator == y.numerator && x.denominator == y.denominator),
        _ => None,
    };
    let euler = |w: &Option<WeilDecomposition>| w.as_ref().map(|w| w.euler);
    let margins: Vec<(u32, String)> = cmp.margins.iter().map(|(k, m)| (*k, m.to_string())).collect();
    let stdout = match run.format {
        Format::Json => {
            to_json(&json!({
                "a": va.name, "b": vb.name, "p": field.p, "r": field.r, "terms": terms,
                "verdict": cmp.verdict,
                "margins": margins.iter().map(|(k, m)| json!({"k": k, "b_minus_a": m})).collect::<Vec<_>>(),
                "zeta_equal": zeta_equal,
                "euler": [euler(&za.weil), euler(&zb.weil)],
            })) + "\n"
        }
        Format::Csv => {
            let rows: Vec<Vec<String>> = za
                .report
                .counts
                .iter()
                .zip(&zb.report.counts)
                .zip(&margins)
                .map(|((x, y), (k, m))| vec![k.to_string(), x.clone(), y.clone(), m.clone()])
                .collect();
            csv(&["k", "a", "b", "b_minus_a"], &rows)
        }
        Format::Table => {
            let mut s = String::new();
            writeln!(s, "verdict     {:?}", cmp.verdict).unwrap();
            for ((x, y), (k, m)) in za.report.counts.iter().zip(&zb.report.counts).zip(&margins) {
                writeln!(s, "k={k:<3} {x} vs {y} (b - a = {m})").unwrap();
            }
            let show = |o: Option<bool>| o.map_or("unavailable".to_string(), |b| b.to_string());
            writeln!(s, "zeta equal  {}", show(zeta_equal)).unwrap();
            if let (Some(x), Some(y)) = (euler(&za.weil), euler(&zb.weil)) {
                writeln!(s, "euler       {x} vs {y}").unwrap();
            }
            s
        }
    };
    Ok(Output {
        stdout,
        ..Output::default()
    })
}

fn cmd_gallery(run: &RunConfig, action: &GalleryAction) -> Result<Output, CliError> {
    let mut out = Output::default();
    match action {
        GalleryAction::List => {
            let list = gallery::list_entries();
            out.stdout = match run.format {
                Format::Json => to_json(&list) + "\n",
                Format::Csv => csv(
                    &["id", "kind", "title"],
                    &list
                        .iter()
                        .map(|e| vec![e.id.clone(), e.kind.to_string(), e.title.clone()])
                        .collect::<Vec<_>>(),
                ),
                Format::Table => list
                    .iter()
                    .map(|e| format!("{:<26} {:<8} {}\n", e.id, e.kind, e.title))
                    .collect(),
            };
        }
        GalleryAction::Run { id, primes } => {
            let report = gallery::run_checks_with(id, primes.as_deref(), &run.count_options())?;
            if !report.passed {
                out.failed = Some(format!("gallery entry `{id}` failed"));
            }
            out.stdout = match run.format {
                Format::Json => to_json(&report) + "\n",
                Format::Csv => csv(
                    &["check", "p", "passed", "expected", "actual", "basis"],
                    &report
                        .outcomes
                        .iter()
                        .map(|o| {
                            vec![
                                o.check.to_string(),
                                o.p.map_or(String::new(), |p| p.to_string()),
                                o.passed.to_string(),
                                o.expected.clone(),
                                o.actual.clone(),
                                o.basis.clone(),
                            ]
                        })
                        .collect::<Vec<_>>(),
                ),
                Format::Table => {
                    let mut s = String::new();
                    for o in &report.outcomes {
                        let p = o.p.map_or("-".to_string(), |p| p.to_string());
                        let mark = if o.passed { "pass" } else { "FAIL" };
                        writeln!(s, "{mark} {:<18} p={p:<3} {}", o.check, o.actual).unwrap();
                        if !o.passed {
                            writeln!(s, "     expected {} ({})", o.expected, o.basis).unwrap();
                        }
                    }
                    s
                }
            };
        }
        GalleryAction::Export { id, out: path } => {
            let text = gallery::export(id)? + "\n";
            match path {
                Some(p) => std::fs::write(p, &text)
                    .map_err(|e| CliError::Input(format!("cannot write `{}`: {e}", p.display())))?,
                None => out.stdout = text,
            }
        }
    }
    Ok(out)
}

fn cmd_verify(run: &RunConfig) -> Result<Output, CliError> {
    let report = verify::run_all();
    let stdout = match run.format {
        Format::Json => report.to_json() + "\n",
        Format::Csv => csv(
            &["criterion", "name", "passed", "summary"],
            &report
                .criteria
                .iter()
                .map(|c| vec![c.id.to_string(), c.name.to_string(), c.passed.to_string(), c.summary.clone()])
                .collect::<Vec<_>>(),
        ),
        Format::Table => {
            let mut s = String::new();
            for c in &report.criteria {
                let mark = if c.passed { "PASS" } else { "FAIL" };
                writeln!(s, "{:>2} {mark} {:<38} {}", c.id, c.name, c.summary).unwrap();
                for f in &c.failures {
                    writeln!(s, "        {f}").unwrap();
                }
            }
            s
        }
    };
    Ok(Output {
        stdout,
        failed: (!report.passed).then(|| "acceptance criteria failed".to_string()),
        ..Output::default()
    })
}

pub fn execute(cli: &Cli) -> Result<Output, CliError> {
    let run = &cli.run;
    match &cli.command {
        Command::Count { input, field, k } => cmd_count(run, input, field, *k),
        Command::Zeta(a) => cmd_zeta(run, a),
        Command::Betti(a) => cmd_betti(run, a),
        Command::Measure { input, p, r_ext, k } => cmd_measure(run, input, *p, *r_ext, *k),
        Command::Classify { input } => cmd_classify(run, input),
        Command::Korder { a, b } => cmd_korder(run, a, b),
        Command::Compare { a, b, field, terms } => cmd_compare(run, a, b, field, *terms),
        Command::Gallery { action } => cmd_gallery(run, action),
        Command::Verify => cmd_verify(run),
    }
}

fn report_error(format: Format, e: &CliError) {
    if format == Format::Json {
        let line = json!({"error": e.kind(), "message": e.message(), "exit_code": e.exit_code()});
        eprintln!("{line}");
    } else {
        eprintln!("error: {}", e.message());
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return 0;
        }
        Err(e) => {
            let wants_json = args
                .windows(2)
                .any(|w| w[0] == "--format" && w[1] == "json")
                || args.iter().any(|a| a == "--format=json");
            if wants_json {
                let text = e.to_string();
                let msg: Vec<&str> = text
                    .lines()
                    .map(str::trim)
                    .filter(|l| !l.is_empty() && !l.starts_with("For more information"))
                    .collect();
                let msg = msg.join(" ");
                report_error(Format::Json, &CliError::Input(msg.trim_start_matches("error: ").to_string()));
            } else {
                let _ = e.print();
            }
            return 2;
        }
    };
    let format = cli.run.format;
    match execute(&cli) {
        Ok(out) => {
            print!("{}", out.stdout);
            for w in &out.warnings {
                if format == Format::Json {
                    eprintln!("{}", json!({"warning": w}));
                } else {
                    eprintln!("warning: {w}");
                }
            }
            match out.failed {
                Some(m) => {
                    let e = CliError::Failed(m);
                    report_error(format, &e);
                    e.exit_code()
                }
                None => 0,
            }
        }
        Err(e) => {
            report_error(format, &e);
            e.exit_code()
        }
    }
}

pub fn main() -> i32 {
    run_from(std::env::args_os())
}
