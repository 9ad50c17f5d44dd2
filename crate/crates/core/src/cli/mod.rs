//! Command-line front end.
//!
//! Every subcommand renders its result into a string first, so the output
//! is byte-identical for identical flags and can be tested without a process.

mod output;
pub mod presets;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

pub use output::num;
use output::{json, Csv};
use presets::{preset, FigureId, FigurePreset};

use crate::compose::{transmission_probability, two_point_amplitudes};
use crate::resonance::{
    classify, find_resonances, incidental_resonance, resonance_rhs, IncidentalResonance,
    ResonanceClass, ResonanceKind, ResonanceRoot, DEFAULT_CLASSIFY_TOL, DEFAULT_SCAN_GRID,
};
use crate::single_scatter::probabilities;
use crate::u2param::{canonicalize, ExtendedLength, InteractionSpec, PointInteraction, RawInteraction};
use crate::verify::{run_all, Evaluators, VerifyConfig};
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "pointscatter", version, about = "Plane-wave scattering through point interactions on a line")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output file, or `-` for stdout
    #[arg(long, global = true, default_value = "-")]
    pub out: String,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// T1 and R1 of one interaction over a k grid
    Single {
        #[command(flatten)]
        sweep: SweepArgs,
        #[command(flatten)]
        first: FirstArgs,
        #[command(flatten)]
        params: ParamsArg,
    },
    /// T2 of a pair over a k grid
    Spectrum {
        #[command(flatten)]
        sweep: SweepArgs,
        #[command(flatten)]
        pair: PairArgs,
        /// Add the real and imaginary parts of A, B, C, D
        #[arg(long)]
        amplitudes: bool,
    },
    /// Classification, quartic and every perfect-transmission k
    Resonances {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value_t = 1e-3)]
        k_min: f64,
        #[arg(long, default_value_t = 10.0)]
        k_max: f64,
        /// Points in the bracketing and residual scan
        #[arg(long, default_value_t = DEFAULT_SCAN_GRID)]
        grid: usize,
        #[arg(long, default_value_t = DEFAULT_CLASSIFY_TOL)]
        tol: f64,
    },
    /// Which perfect-transmission case a pair belongs to
    Classify {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value_t = DEFAULT_CLASSIFY_TOL)]
        tol: f64,
    },
    /// Data behind one of the stock figures
    Figure {
        #[arg(value_enum)]
        id: FigureId,
        #[arg(long)]
        k_min: Option<f64>,
        #[arg(long)]
        k_max: Option<f64>,
        #[arg(long, default_value_t = 2000)]
        steps: usize,
    },
    /// Randomized property suites; exits 2 on any violation
    Verify {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
    },
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 1e-3)]
    pub k_min: f64,
    #[arg(long, default_value_t = 10.0)]
    pub k_max: f64,
    #[arg(long, default_value_t = 2000)]
    pub steps: usize,
}

#[derive(Debug, Clone, Args)]
pub struct FirstArgs {
    #[arg(long = "Lp1", allow_hyphen_values = true)]
    pub lp1: Option<ExtendedLength>,
    #[arg(long = "Lm1", allow_hyphen_values = true)]
    pub lm1: Option<ExtendedLength>,
    #[arg(long, allow_hyphen_values = true)]
    pub mu1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub nu1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub xi1: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct SecondArgs {
    #[arg(long = "Lp2", allow_hyphen_values = true)]
    pub lp2: Option<ExtendedLength>,
    #[arg(long = "Lm2", allow_hyphen_values = true)]
    pub lm2: Option<ExtendedLength>,
    #[arg(long, allow_hyphen_values = true)]
    pub mu2: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub nu2: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub xi2: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct ParamsArg {
    /// JSON file with one interaction object, or an array of two
    #[arg(long)]
    pub params: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct PairArgs {
    #[command(flatten)]
    pub first: FirstArgs,
    #[command(flatten)]
    pub second: SecondArgs,
    #[command(flatten)]
    pub params: ParamsArg,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Validation(String),
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => EXIT_VALIDATION,
            CliError::Numerical(_) => EXIT_NUMERICAL,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Validation(m) | CliError::Numerical(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::OpaqueInteraction { .. }
            | Error::DegenerateDenominator { .. }
            | Error::PoleAt(_)
            | Error::IllConditioned { .. }
            | Error::DegenerateQuartic
            | Error::NoPositiveRoot => CliError::Numerical(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Rendered output and whether a property suite found a violation.
#[derive(Debug, Clone, PartialEq)]
pub struct Rendered {
    pub text: String,
    pub violation: bool,
}

impl Rendered {
    fn ok(text: String) -> Self {
        Rendered {
            text,
            violation: false,
        }
    }
}

fn interaction_from_flags(
    lp: Option<ExtendedLength>,
    lm: Option<ExtendedLength>,
    mu: Option<f64>,
    nu: Option<f64>,
    xi: Option<f64>,
    index: u8,
    default_xi: f64,
) -> CliResult<PointInteraction> {
    let missing = |name: &str| CliError::Validation(format!("missing --{name}{index} (or give --params)"));
    let raw = RawInteraction {
        l_plus: lp.ok_or_else(|| missing("Lp"))?,
        l_minus: lm.ok_or_else(|| missing("Lm"))?,
        mu: mu.ok_or_else(|| missing("mu"))?,
        nu: nu.unwrap_or(0.0),
        xi: xi.unwrap_or(default_xi),
    };
    Ok(canonicalize(raw)?)
}

impl FirstArgs {
    fn any(&self) -> bool {
        self.lp1.is_some() || self.lm1.is_some() || self.mu1.is_some() || self.nu1.is_some() || self.xi1.is_some()
    }

    fn interaction(&self) -> CliResult<PointInteraction> {
        interaction_from_flags(self.lp1, self.lm1, self.mu1, self.nu1, self.xi1, 1, 0.0)
    }
}

impl SecondArgs {
    fn any(&self) -> bool {
        self.lp2.is_some() || self.lm2.is_some() || self.mu2.is_some() || self.nu2.is_some() || self.xi2.is_some()
    }

    fn interaction(&self) -> CliResult<PointInteraction> {
        interaction_from_flags(self.lp2, self.lm2, self.mu2, self.nu2, self.xi2, 2, 1.0)
    }
}

fn read_params(path: &PathBuf) -> CliResult<Vec<PointInteraction>> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    let specs: Vec<InteractionSpec> = if value.is_array() {
        serde_json::from_value(value)
    } else {
        serde_json::from_value(value).map(|s| vec![s])
    }
    .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    specs
        .iter()
        .map(|s| s.to_interaction().map_err(CliError::from))
        .collect()
}

fn single_interaction(first: &FirstArgs, params: &ParamsArg) -> CliResult<PointInteraction> {
    match &params.params {
        Some(path) => {
            if first.any() {
                return Err(CliError::Validation("give either --params or inline flags, not both".into()));
            }
            match read_params(path)?.as_slice() {
                [p] => Ok(*p),
                other => Err(CliError::Validation(format!(
                    "expected one interaction in {}, found {}",
                    path.display(),
                    other.len()
                ))),
            }
        }
        None => first.interaction(),
    }
}

impl PairArgs {
    fn interactions(&self) -> CliResult<(PointInteraction, PointInteraction)> {
        let (p1, p2) = match &self.params.params {
            Some(path) => {
                if self.first.any() || self.second.any() {
                    return Err(CliError::Validation("give either --params or inline flags, not both".into()));
                }
                match read_params(path)?.as_slice() {
                    [a, b] => (*a, *b),
                    other => {
                        return Err(CliError::Validation(format!(
                            "expected an array of two interactions in {}, found {}",
                            path.display(),
                            other.len()
                        )))
                    }
                }
            }
            None => (self.first.interaction()?, self.second.interaction()?),
        };
        if p1.xi() >= p2.xi() {
            return Err(Error::BadOrdering {
                left: p1.xi(),
                right: p2.xi(),
            }
            .into());
        }
        Ok((p1, p2))
    }
}

/// Linear grid with both endpoints exact.
pub fn k_grid(k_min: f64, k_max: f64, steps: usize) -> CliResult<Vec<f64>> {
    if !(k_min > 0.0 && k_min.is_finite() && k_max > k_min && k_max.is_finite() && steps >= 2) {
        return Err(Error::InvalidRange {
            k_min,
            k_max,
            grid: steps,
        }
        .into());
    }
    let step = (k_max - k_min) / (steps - 1) as f64;
    Ok((0..steps)
        .map(|j| if j + 1 == steps { k_max } else { k_min + step * j as f64 })
        .collect())
}

fn single_rows(p: &PointInteraction, ks: &[f64]) -> CliResult<Vec<[f64; 3]>> {
    ks.iter()
        .map(|&k| {
            let (t1, r1) = probabilities(p, k)?;
            Ok([k, t1, r1])
        })
        .collect()
}

fn cmd_single(p: &PointInteraction, sweep: &SweepArgs, format: Format) -> CliResult<String> {
    let rows = single_rows(p, &k_grid(sweep.k_min, sweep.k_max, sweep.steps)?)?;
    Ok(match format {
        Format::Csv => {
            let mut csv = Csv::new(&["k", "T1", "R1"]);
            for r in &rows {
                csv.row(r);
            }
            csv.finish()
        }
        Format::Json => json(
            &rows
                .iter()
                .map(|r| json!({"k": r[0], "T1": r[1], "R1": r[2]}))
                .collect::<Vec<_>>(),
        ),
    })
}

const AMPLITUDE_COLUMNS: [&str; 8] = ["ReA", "ImA", "ReB", "ImB", "ReC", "ImC", "ReD", "ImD"];

fn cmd_spectrum(
    p1: &PointInteraction,
    p2: &PointInteraction,
    sweep: &SweepArgs,
    amplitudes: bool,
    format: Format,
) -> CliResult<String> {
    let ks = k_grid(sweep.k_min, sweep.k_max, sweep.steps)?;
    let mut header = vec!["k", "T2"];
    if amplitudes {
        header.extend(AMPLITUDE_COLUMNS);
    }
    let mut rows = Vec::with_capacity(ks.len());
    for &k in &ks {
        let mut row = vec![k, transmission_probability(p1, p2, k)?];
        if amplitudes {
            let s = two_point_amplitudes(p1, p2, k)?;
            for z in [s.a, s.b, s.c, s.d] {
                row.extend([z.re, z.im]);
            }
        }
        rows.push(row);
    }
    Ok(match format {
        Format::Csv => {
            let mut csv = Csv::new(&header);
            for r in &rows {
                csv.row(r);
            }
            csv.finish()
        }
        Format::Json => json(
            &rows
                .iter()
                .map(|r| {
                    header
                        .iter()
                        .zip(r)
                        .map(|(h, v)| (h.to_string(), json!(v)))
                        .collect::<serde_json::Map<_, _>>()
                })
                .collect::<Vec<_>>(),
        ),
    })
}

#[derive(Debug, Serialize)]
struct ClassifyReport<'a> {
    classification: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    k_squared: Option<f64>,
    infinite_lengths: bool,
    quartic: Option<crate::QuarticCoefficients>,
    matches: &'a [crate::resonance::CaseMatch],
}

fn classify_report(class: &ResonanceClass) -> ClassifyReport<'_> {
    ClassifyReport {
        classification: class.kind.label(),
        k_squared: match class.kind {
            ResonanceKind::Incidental { k_squared } => Some(k_squared),
            _ => None,
        },
        infinite_lengths: class.infinite_lengths,
        quartic: class.quartic,
        matches: &class.matches,
    }
}

fn cmd_classify(p1: &PointInteraction, p2: &PointInteraction, tol: f64, format: Format) -> CliResult<String> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(CliError::Validation(format!("--tol must be positive, got {tol}")));
    }
    let class = classify(p1, p2, tol);
    Ok(match format {
        Format::Json => json(&classify_report(&class)),
        Format::Csv => {
            let mut csv = Csv::new(&["case", "check", "residual", "holds"]);
            for m in &class.matches {
                for c in &m.checks {
                    csv.row_str([m.case.clone(), c.name.clone(), num(c.residual), c.holds.to_string()]);
                }
            }
            csv.finish()
        }
    })
}

#[derive(Debug, Serialize)]
pub struct ResonanceReport {
    pub classification: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_squared: Option<f64>,
    pub quartic: Option<crate::QuarticCoefficients>,
    pub roots: Vec<ResonanceRoot>,
    /// The smallest-k isolated resonance, if the quartic allows one.
    pub incidental: Option<IncidentalResonance>,
}

pub fn resonance_report(
    p1: &PointInteraction,
    p2: &PointInteraction,
    k_min: f64,
    k_max: f64,
    grid: usize,
    tol: f64,
) -> CliResult<ResonanceReport> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(CliError::Validation(format!("--tol must be positive, got {tol}")));
    }
    let class = classify(p1, p2, tol);
    let roots = find_resonances(p1, p2, k_min, k_max, grid)?;
    let incidental = incidental_resonance(p1, p2).ok().and_then(|v| v.into_iter().next());
    Ok(ResonanceReport {
        classification: class.kind.label(),
        k_squared: match class.kind {
            ResonanceKind::Incidental { k_squared } => Some(k_squared),
            _ => None,
        },
        quartic: class.quartic,
        roots,
        incidental,
    })
}

fn roots_csv(roots: &[ResonanceRoot]) -> String {
    let mut csv = Csv::new(&["k", "residual_T2", "branch"]);
    for r in roots {
        csv.row_str([
            num(r.k),
            num(r.residual_t2),
            r.branch.map(|b| b.to_string()).unwrap_or_default(),
        ]);
    }
    csv.finish()
}

fn cmd_figure(
    fig: &FigurePreset,
    k_min: f64,
    k_max: f64,
    steps: usize,
    format: Format,
) -> CliResult<String> {
    let ks = k_grid(k_min, k_max, steps)?;
    let single = fig.variants[0].p2.is_none();
    match format {
        Format::Csv => {
            let mut header = vec!["k".to_string()];
            for v in &fig.variants {
                header.push(if single { "T1".into() } else { format!("T2_{}", v.label) });
            }
            let first = &fig.variants[0];
            let class = first.p2.map(|p2| classify(&first.p1, &p2, DEFAULT_CLASSIFY_TOL));
            let tangent = class.as_ref().is_some_and(|c| c.kind.is_family());
            if tangent {
                header.push("tan_kd".into());
                header.push("rhs".into());
            }
            let refs: Vec<&str> = header.iter().map(String::as_str).collect();
            let mut csv = Csv::new(&refs);
            for &k in &ks {
                let mut row = vec![k];
                for v in &fig.variants {
                    row.push(match v.p2 {
                        None => probabilities(&v.p1, k)?.0,
                        Some(p2) => transmission_probability(&v.p1, &p2, k)?,
                    });
                }
                if let (true, Some(class), Some(p2)) = (tangent, &class, first.p2) {
                    row.push((k * (p2.xi() - first.p1.xi())).tan());
                    row.push(resonance_rhs(class, &first.p1, &p2, k).unwrap_or(f64::NAN));
                }
                csv.row(&row);
            }
            Ok(csv.finish())
        }
        Format::Json => {
            let mut variants = Vec::new();
            for v in &fig.variants {
                variants.push(match v.p2 {
                    None => {
                        let rows = single_rows(&v.p1, &ks)?;
                        let peak = rows
                            .iter()
                            .max_by(|a, b| a[1].total_cmp(&b[1]))
                            .expect("grid has at least two points");
                        json!({"label": v.label, "p1": v.p1, "peak": {"k": peak[0], "T1": peak[1]}})
                    }
                    Some(p2) => {
                        let report = resonance_report(&v.p1, &p2, k_min, k_max, DEFAULT_SCAN_GRID, DEFAULT_CLASSIFY_TOL)?;
                        json!({"label": v.label, "p1": v.p1, "p2": p2, "report": report})
                    }
                });
            }
            Ok(json(&json!({"figure": fig.id.as_str(), "variants": variants})))
        }
    }
}

fn cmd_verify(seed: u64, trials: usize, format: Format) -> Rendered {
    let config = VerifyConfig {
        seed,
        trials,
        ..VerifyConfig::default()
    };
    let report = run_all(&config, &Evaluators::default());
    let text = match format {
        Format::Json => json(&report),
        Format::Csv => {
            let mut csv = Csv::new(&["property", "samples", "max_residual", "tolerance", "failures", "passed"]);
            for p in &report.properties {
                csv.row_str([
                    p.name.clone(),
                    p.samples.to_string(),
                    num(p.max_residual),
                    num(p.tolerance),
                    p.failures.to_string(),
                    p.passed.to_string(),
                ]);
            }
            csv.finish()
        }
    };
    Rendered {
        text,
        violation: !report.all_passed(),
    }
}

/// Runs a parsed command and returns its output without writing it anywhere.
pub fn execute(cli: &Cli) -> CliResult<Rendered> {
    let fmt = |default: Format| cli.format.unwrap_or(default);
    match &cli.command {
        Command::Single { sweep, first, params } => {
            let p = single_interaction(first, params)?;
            cmd_single(&p, sweep, fmt(Format::Csv)).map(Rendered::ok)
        }
        Command::Spectrum {
            sweep,
            pair,
            amplitudes,
        } => {
            let (p1, p2) = pair.interactions()?;
            cmd_spectrum(&p1, &p2, sweep, *amplitudes, fmt(Format::Csv)).map(Rendered::ok)
        }
        Command::Resonances {
            pair,
            k_min,
            k_max,
            grid,
            tol,
        } => {
            let (p1, p2) = pair.interactions()?;
            let report = resonance_report(&p1, &p2, *k_min, *k_max, *grid, *tol)?;
            Ok(Rendered::ok(match fmt(Format::Json) {
                Format::Json => json(&report),
                Format::Csv => roots_csv(&report.roots),
            }))
        }
        Command::Classify { pair, tol } => {
            let (p1, p2) = pair.interactions()?;
            cmd_classify(&p1, &p2, *tol, fmt(Format::Json)).map(Rendered::ok)
        }
        Command::Figure {
            id,
            k_min,
            k_max,
            steps,
        } => {
            let fig = preset(*id);
            cmd_figure(
                &fig,
                k_min.unwrap_or(fig.k_min),
                k_max.unwrap_or(fig.k_max),
                *steps,
                fmt(Format::Csv),
            )
            .map(Rendered::ok)
        }
        Command::Verify { seed, trials } => Ok(cmd_verify(*seed, *trials as usize, fmt(Format::Json))),
    }
}

fn write_output(out: &str, text: &str) -> std::io::Result<()> {
    if out == "-" {
        let mut stdout = std::io::stdout().lock();
        stdout.write_all(text.as_bytes())?;
        stdout.flush()
    } else {
        fs::write(out, text)
    }
}

/// Parses `args` (including the program name), runs the command, writes the
/// output and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(rendered) => {
            if let Err(e) = write_output(&cli.out, &rendered.text) {
                eprintln!("error: cannot write {}: {e}", cli.out);
                return EXIT_VALIDATION;
            }
            if rendered.violation {
                eprintln!("error: property violation");
                EXIT_VIOLATION
            } else {
                EXIT_OK
            }
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}
