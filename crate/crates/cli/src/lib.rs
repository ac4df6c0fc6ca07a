//! Command-line front end of the Hopf-zero toolkit: input parsing, pipeline
//! orchestration, and report and data emission.
//!
//! Exit codes: `0` for determinate verdicts, `2` for undetermined or candidate
//! verdicts, `1` for input errors.

pub mod input;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hopf3_core::blowup::TreeReport;
use hopf3_core::classifier::{classify, Case, CertificatePayload, Classification, ClassifyOptions, CycleCertificate, OrderReport, TraceReport, SCHEMA};
use hopf3_core::field::parse_rational;
use hopf3_core::normal_form::{detect_hopf, isolated_singularity_check, takens_normal_form, HopfCase, Isolation};
use hopf3_core::poincare::{cycle_field, poincare_jet};
use hopf3_core::CoreError;
use hopf3_numlab::cycles::seed_points;
use hopf3_numlab::surfaces::{match_cycles, CycleMatch, SurfaceMap};
use hopf3_numlab::{
    csv_out, detect_cycles, integrate, numeric_poincare, validate_classification, DetectOptions, F64Field, NumericCycle, OdeOptions,
    Region, Section, ValidateOptions,
};
use input::{Diagnostic, InputOptions, LoadedInput};
use serde::Serialize;
use std::path::{Path, PathBuf};

/// Exit code of determinate verdicts.
pub const EXIT_DETERMINATE: i32 = 0;
/// Exit code of input errors.
pub const EXIT_INPUT: i32 = 1;
/// Exit code of undetermined or candidate verdicts.
pub const EXIT_UNDETERMINED: i32 = 2;

/// Hopf-zero singularities in R³: normal forms, blow-ups, Poincaré jets and
/// the classification of the local cycle-locus.
#[derive(Debug, Parser)]
#[command(name = "hopf3", version, about)]
pub struct Cli {
    /// Subcommand.
    #[command(subcommand)]
    pub command: Command,
}

/// Output format of reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    /// Pretty-printed JSON.
    #[default]
    Json,
    /// TOML.
    Toml,
}

/// Options shared by all subcommands.
#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Input file (`.toml` or `.json`) or a built-in fixture name.
    pub input: String,
    /// Normal-form order ℓ.
    #[arg(long)]
    pub order: Option<u32>,
    /// Blow-up budget of the resolution.
    #[arg(long)]
    pub budget: Option<u32>,
    /// Box margin ε around divisor points (exact rational).
    #[arg(long)]
    pub epsilon: Option<String>,
    /// Initial box height δ (exact rational).
    #[arg(long)]
    pub delta: Option<String>,
    /// Maximal Poincaré jet order K for FIX decisions.
    #[arg(long = "fix-order")]
    pub fix_order: Option<u32>,
    /// Random seed of the numeric lab.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write outputs into this directory instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Subcommands.
#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rotational normal form `T, R, Z` through order ℓ and the change φ_ℓ.
    NormalForm(Common),
    /// Resolution trace and blow-up tree.
    Resolve(Common),
    /// Poincaré jet, verdict and cone of one characteristic cycle.
    Poincare {
        /// Shared options.
        #[command(flatten)]
        common: Common,
        /// Cycle label, e.g. `(2)` or `1,-inf,1`.
        #[arg(long)]
        cycle: String,
        /// Order of the printed Poincaré jet (default: the classifier's order).
        #[arg(long = "jet-order")]
        jet_order: Option<u32>,
    },
    /// Full classification report.
    Classify(Common),
    /// Numeric lab: trajectories, detected cycles and certificate validation.
    Simulate {
        /// Shared options.
        #[command(flatten)]
        common: Common,
        /// Number of random seeds.
        #[arg(long)]
        seeds: Option<usize>,
        /// Radius of the sampling ball (default: the certified region).
        #[arg(long)]
        region: Option<f64>,
    },
}

/// Result of a command: text for standard output, files written, exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    /// Standard output.
    pub stdout: String,
    /// Standard error.
    pub stderr: String,
    /// Files written.
    pub files: Vec<PathBuf>,
    /// Process exit code.
    pub code: i32,
}

impl Outcome {
    fn input_error(d: impl std::fmt::Display) -> Outcome {
        Outcome { stdout: String::new(), stderr: format!("error: {d}\n"), files: Vec::new(), code: EXIT_INPUT }
    }
}

/// Renders a serializable value in the requested format.
pub fn render<T: Serialize>(value: &T, format: Format) -> Result<String, String> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(value).map_err(|e| e.to_string())?;
            s.push('\n');
            Ok(s)
        }
        Format::Toml => {
            let mut v = serde_json::to_value(value).map_err(|e| e.to_string())?;
            strip_nulls(&mut v);
            toml::to_string_pretty(&v).map_err(|e| e.to_string())
        }
    }
}

fn strip_nulls(v: &mut serde_json::Value) {
    match v {
        serde_json::Value::Object(m) => {
            m.retain(|_, x| !x.is_null());
            m.values_mut().for_each(strip_nulls);
        }
        serde_json::Value::Array(a) => a.iter_mut().for_each(strip_nulls),
        _ => {}
    }
}

fn exit_for(case: Case) -> i32 {
    if case.is_determinate() {
        EXIT_DETERMINATE
    } else {
        EXIT_UNDETERMINED
    }
}

struct Settings {
    loaded: LoadedInput,
    classify: ClassifyOptions,
    file: InputOptions,
}

fn settings(c: &Common) -> Result<Settings, Diagnostic> {
    let loaded = input::load(&c.input)?;
    let file = loaded.options.clone();
    let mut o = ClassifyOptions::default();
    let flag_err = |flag: &str, e: CoreError| Diagnostic { source: format!("--{flag}"), position: None, message: e.to_string() };
    if let Some(v) = c.order.or(file.order) {
        o.order = v;
    }
    if let Some(v) = c.budget.or(file.budget) {
        o.budget = v;
    }
    if let Some(v) = c.fix_order.or(file.fix_order) {
        o.fix_order = v;
    }
    if let Some(s) = c.epsilon.as_ref().or(file.epsilon.as_ref()) {
        o.epsilon = Some(parse_rational(s).map_err(|e| flag_err("epsilon", e))?);
    }
    if let Some(s) = c.delta.as_ref().or(file.delta.as_ref()) {
        o.delta = Some(parse_rational(s).map_err(|e| flag_err("delta", e))?);
    }
    Ok(Settings { loaded, classify: o, file })
}

fn emit<T: Serialize>(value: &T, c: &Common, name: &str, code: i32) -> Outcome {
    let text = match render(value, c.format) {
        Ok(t) => t,
        Err(e) => return Outcome::input_error(format!("cannot render the output: {e}")),
    };
    match &c.out {
        None => Outcome { stdout: text, stderr: String::new(), files: Vec::new(), code },
        Some(dir) => {
            let ext = match c.format {
                Format::Json => "json",
                Format::Toml => "toml",
            };
            let path = dir.join(format!("{name}.{ext}"));
            match std::fs::create_dir_all(dir).and_then(|_| std::fs::write(&path, text)) {
                Ok(()) => Outcome { stdout: String::new(), stderr: format!("wrote {}\n", path.display()), files: vec![path], code },
                Err(e) => Outcome::input_error(format!("{}: {e}", path.display())),
            }
        }
    }
}

fn core_failure(source: &str, e: CoreError) -> Outcome {
    match e {
        CoreError::Input(_) | CoreError::NotHopf(_) => Outcome::input_error(format!("{source}: {e}")),
        _ => Outcome { stdout: String::new(), stderr: format!("undetermined: {source}: {e}\n"), files: Vec::new(), code: EXIT_UNDETERMINED },
    }
}

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::NormalForm(c) => cmd_normal_form(c),
        Command::Resolve(c) => cmd_resolve(c),
        Command::Poincare { common, cycle, jet_order } => cmd_poincare(common, cycle, *jet_order),
        Command::Classify(c) => cmd_classify(c),
        Command::Simulate { common, seeds, region } => cmd_simulate(common, *seeds, *region),
    }
}

/// Output of `normal-form`.
#[derive(Debug, Serialize)]
pub struct NormalFormOutput {
    /// Schema version.
    pub schema: &'static str,
    /// Input name.
    pub input: String,
    /// Rotation speed `b`.
    pub b: String,
    /// Order ℓ.
    pub order: u32,
    /// True when the input is already rotationally symmetric.
    pub exact: bool,
    /// `T(u, v)` with `u = x² + y²`, `v = z`.
    pub t: String,
    /// `R(u, v)`.
    pub r: String,
    /// `Z(u, v)`.
    pub z: String,
    /// Components of the near-identity change φ_ℓ.
    pub phi: [String; 3],
    /// Isolation of the singularity along the z-axis.
    pub isolation: Isolation,
}

fn cmd_normal_form(c: &Common) -> Outcome {
    let s = match settings(c) {
        Ok(s) => s,
        Err(d) => return Outcome::input_error(d),
    };
    let src = &s.loaded.source;
    let h = match detect_hopf(&s.loaded.field) {
        Ok(h) => h,
        Err(e) => return core_failure(src, e),
    };
    if h.case == HopfCase::SemiHyperbolic {
        return core_failure(src, CoreError::SemiHyperbolic(h.c.render()));
    }
    let nf = match takens_normal_form(&s.loaded.field, &h, s.classify.order) {
        Ok(nf) => nf,
        Err(e) => return core_failure(src, e),
    };
    let out = NormalFormOutput {
        schema: SCHEMA,
        input: src.clone(),
        b: h.b.render(),
        order: nf.order,
        exact: nf.exact,
        t: nf.t.render(),
        r: nf.r.render(),
        z: nf.z.render(),
        phi: [0, 1, 2].map(|i| nf.phi[i].render()),
        isolation: isolated_singularity_check(&nf, nf.order),
    };
    emit(&out, c, "normal-form", EXIT_DETERMINATE)
}

/// Output of `resolve`.
#[derive(Debug, Serialize)]
pub struct ResolveOutput {
    /// Schema version.
    pub schema: &'static str,
    /// Input name.
    pub input: String,
    /// Case of the classification the resolution belongs to.
    pub case: Case,
    /// Resolution trace.
    pub trace: Option<TraceReport>,
    /// Jet orders.
    pub orders: Option<OrderReport>,
    /// Resolved tree.
    pub tree: Option<TreeReport>,
    /// Tree after the cone openings.
    pub opened: Option<TreeReport>,
}

fn classified(c: &Common) -> Result<(Settings, Classification), Outcome> {
    let s = settings(c).map_err(Outcome::input_error)?;
    let cls = classify(&s.loaded.field, &s.classify).map_err(|e| core_failure(&s.loaded.source, e))?;
    Ok((s, cls))
}

fn cmd_resolve(c: &Common) -> Outcome {
    let (s, cls) = match classified(c) {
        Ok(v) => v,
        Err(o) => return o,
    };
    let out = ResolveOutput {
        schema: SCHEMA,
        input: s.loaded.source,
        case: cls.report.case,
        trace: cls.report.trace.clone(),
        orders: cls.report.orders.clone(),
        tree: cls.tree.as_ref().map(|t| t.report()),
        opened: cls.opened.as_ref().map(|t| t.report()),
    };
    emit(&out, c, "resolve", exit_for(cls.report.case))
}

/// Output of `poincare`.
#[derive(Debug, Serialize)]
pub struct PoincareOutput {
    /// Schema version.
    pub schema: &'static str,
    /// Input name.
    pub input: String,
    /// Cycle label.
    pub cycle: String,
    /// Location of the cycle on its divisor line.
    pub omega: String,
    /// Order of the printed jet.
    pub jet_order: u32,
    /// `z ∘ P` in coordinates translated to the cycle.
    pub z: String,
    /// `ρ ∘ P`.
    pub rho: String,
    /// Verdict and cone of the classifier.
    pub certificate: CycleCertificate,
}

fn normalize_label(s: &str) -> String {
    let inner: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let inner = inner.trim_start_matches('(').trim_end_matches(')').replace('∞', "inf");
    format!("({inner})")
}

fn cmd_poincare(c: &Common, cycle: &str, jet_order: Option<u32>) -> Outcome {
    let (s, cls) = match classified(c) {
        Ok(v) => v,
        Err(o) => return o,
    };
    let wanted = normalize_label(cycle);
    let found = cls.report.certificates.iter().find_map(|cert| match &cert.certificate {
        CertificatePayload::Cycle(cc) if cert.element.to_string() == wanted => Some((cert, cc)),
        _ => None,
    });
    let Some((cert, cc)) = found else {
        let known: Vec<String> = cls
            .report
            .certificates
            .iter()
            .filter(|c| matches!(c.certificate, CertificatePayload::Cycle(_)))
            .map(|c| c.element.to_string())
            .collect();
        return Outcome::input_error(format!("--cycle {cycle}: no non-corner cycle with that label (cycles: {})", known.join(", ")));
    };
    let tree = cls.tree.as_ref().expect("cycles come with a tree");
    let e = tree.find(&cert.element).expect("certified element exists");
    let order = jet_order.unwrap_or(cc.jet_order);
    let jet = match cycle_field(tree, e).and_then(|cf| poincare_jet(&cf, order)) {
        Ok(j) => j,
        Err(err) => return core_failure(&s.loaded.source, err),
    };
    let code = if cc.cone.is_some() { EXIT_DETERMINATE } else { EXIT_UNDETERMINED };
    let out = PoincareOutput {
        schema: SCHEMA,
        input: s.loaded.source,
        cycle: wanted,
        omega: cert.omega.clone(),
        jet_order: jet.order,
        z: jet.z.render_with(|p| p.render()),
        rho: jet.rho.render_with(|p| p.render()),
        certificate: (**cc).clone(),
    };
    emit(&out, c, "poincare", code)
}

fn cmd_classify(c: &Common) -> Outcome {
    let (_, cls) = match classified(c) {
        Ok(v) => v,
        Err(o) => return o,
    };
    let code = exit_for(cls.report.case);
    match c.format {
        // The report's own serializer is the canonical byte-stable form.
        Format::Json if c.out.is_none() => {
            Outcome { stdout: cls.report.to_json(), stderr: String::new(), files: Vec::new(), code }
        }
        _ => emit(&cls.report, c, "report", code),
    }
}

/// Counts of the numeric cycle search.
#[derive(Debug, Serialize)]
pub struct DetectionSummary {
    /// Seeds drawn.
    pub seeds: usize,
    /// Seeds that produced an admissible section point.
    pub admitted: usize,
    /// Refinements that converged.
    pub converged: usize,
    /// Distinct cycles.
    pub cycles: usize,
}

/// Aggregate of the certificate validations.
#[derive(Debug, Serialize)]
pub struct ValidationSummary {
    /// Certificates and boxes validated.
    pub total: usize,
    /// How many passed.
    pub passed: usize,
    /// Smallest margin over all validations.
    pub min_margin: Option<f64>,
    /// Subjects that failed.
    pub failed: Vec<String>,
}

/// Output of `simulate`.
#[derive(Debug, Serialize)]
pub struct SimulateOutput {
    /// Schema version.
    pub schema: &'static str,
    /// Input name.
    pub input: String,
    /// Symbolic case.
    pub case: Case,
    /// Radius of the sampling ball.
    pub region: f64,
    /// Random seed.
    pub seed: u64,
    /// Cycle search counts.
    pub detection: DetectionSummary,
    /// Detected cycles.
    pub cycles: Vec<NumericCycle>,
    /// Distance of each detected cycle to the reported surfaces.
    pub matches: Vec<CycleMatch>,
    /// Certificate validation.
    pub validation: ValidationSummary,
    /// CSV files written.
    pub files: Vec<String>,
}

fn write_csv(dir: &Path, name: &str, f: impl FnOnce(std::fs::File) -> hopf3_numlab::Result<()>) -> Result<PathBuf, String> {
    let path = dir.join(name);
    let file = std::fs::File::create(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    f(file).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(path)
}

fn cmd_simulate(c: &Common, seeds: Option<usize>, region: Option<f64>) -> Outcome {
    let (s, cls) = match classified(c) {
        Ok(v) => v,
        Err(o) => return o,
    };
    let seeds = seeds.or(s.file.seeds).unwrap_or(1000);
    let seed = c.seed.or(s.file.seed).unwrap_or(0);
    let radius = region
        .or(s.file.region)
        .unwrap_or_else(|| cls.report.region.as_ref().map_or(0.25, |r| r.radius).min(0.5));
    if !(radius > 0.0 && radius.is_finite()) {
        return Outcome::input_error(format!("--region {radius}: the radius must be positive"));
    }
    let field = F64Field::ambient(&s.loaded.field);
    let section = match Section::from_change(cls.ambient.change) {
        Ok(sec) => sec,
        Err(e) => return Outcome::input_error(e),
    };
    let reg = Region::ball(radius);
    let detection = detect_cycles(&field, &section, &reg, &DetectOptions { seeds, seed, ..DetectOptions::default() });
    let surfaces = SurfaceMap::all(&cls, radius);
    let matches = match_cycles(&surfaces, &detection.cycles);
    let validations = match validate_classification(&cls, &ValidateOptions::default()) {
        Ok(v) => v,
        Err(e) => return Outcome::input_error(e),
    };
    let validation = ValidationSummary {
        total: validations.len(),
        passed: validations.iter().filter(|v| v.passed).count(),
        min_margin: validations.iter().map(|v| v.margin).reduce(f64::min),
        failed: validations.iter().filter(|v| !v.passed).map(|v| format!("{} {}", v.kind, v.subject)).collect(),
    };

    let dir = c.out.clone().unwrap_or_else(|| PathBuf::from("hopf3-simulate"));
    if let Err(e) = std::fs::create_dir_all(&dir) {
        return Outcome::input_error(format!("{}: {e}", dir.display()));
    }
    let starts = seed_points(&reg, seeds.min(8), seed);
    let ode = OdeOptions::default();
    let trajectories: Vec<_> = starts
        .iter()
        .map(|&p| integrate(|_, y| Some(field.eval(y)), p, (0.0, 4.0 * std::f64::consts::PI), ode, "ambient"))
        .collect();
    let sections: Vec<_> = starts.iter().map(|&p| numeric_poincare(&field, &section, p, 10, ode).points).collect();
    let sampled: Vec<(String, Vec<[f64; 3]>)> = surfaces
        .iter()
        .map(|m| {
            let pts = (0..36)
                .flat_map(|i| (1..=10).map(move |j| (i as f64 * std::f64::consts::TAU / 36.0, m.rho_max * j as f64 / 10.0)))
                .map(|(th, rho)| m.point(th, rho))
                .collect();
            (m.label(), pts)
        })
        .collect();
    let written = [
        write_csv(&dir, "trajectories.csv", |f| csv_out::write_trajectories(f, &trajectories)),
        write_csv(&dir, "sections.csv", |f| csv_out::write_sections(f, &sections)),
        write_csv(&dir, "surfaces.csv", |f| csv_out::write_surfaces(f, &sampled)),
        write_csv(&dir, "cycles.csv", |f| csv_out::write_cycles(f, &detection.cycles)),
    ];
    let mut files = Vec::new();
    for w in written {
        match w {
            Ok(p) => files.push(p),
            Err(e) => return Outcome::input_error(e),
        }
    }
    let out = SimulateOutput {
        schema: SCHEMA,
        input: s.loaded.source,
        case: cls.report.case,
        region: radius,
        seed,
        detection: DetectionSummary {
            seeds: detection.seeds,
            admitted: detection.admitted,
            converged: detection.converged,
            cycles: detection.cycles.len(),
        },
        cycles: detection.cycles.clone(),
        matches,
        validation,
        files: files.iter().map(|p| p.display().to_string()).collect(),
    };
    let code = exit_for(cls.report.case);
    let text = match render(&out, c.format) {
        Ok(t) => t,
        Err(e) => return Outcome::input_error(format!("cannot render the output: {e}")),
    };
    Outcome { stdout: text, stderr: String::new(), files, code }
}
