//! Command-line interface: argument definitions, settings resolution (flags
//! over config file over defaults) and the subcommands.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use scarmps_core::embedding::{SchemeKind, DEFAULT_GHZ_A};
use scarmps_core::hamiltonian::DEFAULT_DENSE_CAP;
use scarmps_core::mps::{Family, MpsDefinition};
use scarmps_core::spectral;
use scarmps_core::sweep::{
    self, gap_and_entropy_track, ComplementMode, PerturbationKind, PerturbationSpec, PointResult, SweepConfig,
    SweepPlan, SweepResult,
};

use crate::cache::ChainCache;
use crate::config::ConfigFile;
use crate::error::{as_usage, Result, ToolError};
use crate::parallel;
use crate::plot::{entropy_color, Colors, Plot, Series};
use crate::table::{write_bytes, Cell, Format, Table};
use crate::verify::{run_verify, VerifyOptions};

#[derive(Debug, Parser)]
#[command(name = "scarmps", version, about = "Exact MPS embeddings: observables, spectra, sweeps and checks")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args)]
pub struct GlobalArgs {
    /// Model family: ghz or z2.
    #[arg(long, global = true, value_parser = parse_family)]
    pub model: Option<Family>,
    /// Coefficient scheme: scar or ground.
    #[arg(long, global = true, value_parser = parse_scheme)]
    pub embedding: Option<SchemeKind>,
    /// Number of sites.
    #[arg(short = 'L', long = "sites", global = true)]
    pub sites: Option<usize>,
    /// Single parameter value.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub g: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub g_min: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub g_max: Option<f64>,
    /// Number of grid points (endpoints included).
    #[arg(long, global = true)]
    pub steps: Option<usize>,
    /// Free parameter of the analytic GHZ complement, in (0, 1).
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub a: Option<f64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output file; stdout if absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// SVG plot drawn from the written rows.
    #[arg(long, global = true)]
    pub plot: Option<PathBuf>,
    /// Flat key = value file; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads for per-g diagonalizations.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
}

fn parse_family(s: &str) -> std::result::Result<Family, String> {
    s.parse().map_err(|e: scarmps_core::Error| e.to_string())
}

fn parse_scheme(s: &str) -> std::result::Result<SchemeKind, String> {
    s.parse().map_err(|e: scarmps_core::Error| e.to_string())
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// <sigma_x> closed forms against the finite-ring transfer-matrix value.
    Observables(ObservablesArgs),
    /// Zero-momentum spectrum with entropies and MPS overlaps at one g.
    Spectrum(SpectrumArgs),
    /// Spectra over a g grid.
    Sweep(SweepArgs),
    /// Perturbation robustness of the embedded state.
    Perturb(PerturbArgs),
    /// Runs the invariant suite at L = 6, 8, 10.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct ObservablesArgs {
    /// One row per (g, observable): g, observable_name, L, value_re, value_im.
    #[arg(long)]
    pub long: bool,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SpectrumArgs {
    /// Also write the dense Hamiltonian (row-major [re, im] f64 pairs).
    #[arg(long)]
    pub dump_dense: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ComplementArg {
    Analytic,
    Numerical,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SweepArgs {
    /// Per-g scar neighbourhood summary.
    #[arg(long)]
    pub summary: Option<PathBuf>,
    /// Basis-chain cache: read if present, written otherwise.
    #[arg(long)]
    pub chain_cache: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub complement: Option<ComplementArg>,
    /// Procrustes step (default: a quarter of the grid spacing).
    #[arg(long)]
    pub chain_step: Option<f64>,
    /// Energy window around the scar, as a fraction of the spectral range.
    #[arg(long, default_value_t = sweep::DEFAULT_ENERGY_WINDOW)]
    pub window: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Within,
    Generic,
}

#[derive(Debug, Clone, Args)]
pub struct PerturbArgs {
    #[arg(long, value_enum, default_value = "generic")]
    pub kind: KindArg,
    /// Comma-separated strengths.
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.0, 0.05, 0.1, 0.2, 0.4])]
    pub epsilon: Vec<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct VerifyArgs {
    /// Haar samples for the Page check.
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, hide = true)]
    pub inject_non_hermitian: bool,
}

/// Global options after merging flags, config file and defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub family: Family,
    pub scheme: SchemeKind,
    pub sites: usize,
    pub g: Option<f64>,
    pub g_min: f64,
    pub g_max: f64,
    pub steps: usize,
    pub a: f64,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub plot: Option<PathBuf>,
    pub workers: Option<usize>,
}

impl Settings {
    pub fn resolve(args: &GlobalArgs) -> Result<Self> {
        let file = match &args.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        let family = match args.model {
            Some(f) => f,
            None => file.get("model")?.unwrap_or(Family::Ghz),
        };
        let scheme = match args.embedding {
            Some(s) => s,
            None => match file.raw("embedding") {
                Some(s) => s.parse().map_err(as_usage)?,
                None => SchemeKind::Scar,
            },
        };
        let g = args.g.or(file.get("g")?);
        let g_min = args.g_min.or(file.get("g-min")?);
        let g_max = args.g_max.or(file.get("g-max")?);
        let steps = args.steps.or(file.get("steps")?);
        if g.is_some() && (g_min.is_some() || g_max.is_some()) {
            return Err(ToolError::usage("--g cannot be combined with --g-min/--g-max"));
        }
        let (g_min, g_max, steps) = match g {
            Some(g) if steps.unwrap_or(1) == 1 => (g, g, 1),
            Some(_) => return Err(ToolError::usage("--g selects a single point; use --g-min/--g-max with --steps")),
            None => (g_min.unwrap_or(-1.0), g_max.unwrap_or(1.0), steps.unwrap_or(41)),
        };
        let settings = Self {
            family,
            scheme,
            sites: args.sites.or(file.get("sites")?).unwrap_or(12),
            g,
            g_min,
            g_max,
            steps,
            a: args.a.or(file.get("a")?).unwrap_or(DEFAULT_GHZ_A),
            seed: args.seed.or(file.get("seed")?).unwrap_or(0),
            out: args.out.clone().or(file.raw("out").map(PathBuf::from)),
            format: match args.format {
                Some(f) => f,
                None => file.get("format")?.unwrap_or_default(),
            },
            plot: args.plot.clone().or(file.raw("plot").map(PathBuf::from)),
            workers: args.workers.or(file.get("workers")?),
        };
        settings.validate_common()?;
        Ok(settings)
    }

    fn validate_common(&self) -> Result<()> {
        if self.steps == 0 {
            return Err(ToolError::usage("--steps must be at least 1"));
        }
        if !self.g_min.is_finite() || !self.g_max.is_finite() {
            return Err(ToolError::usage("g values must be finite"));
        }
        if self.steps >= 2 && !(self.g_min < self.g_max) {
            return Err(ToolError::usage("need --g-min < --g-max"));
        }
        if !(self.a > 0.0 && self.a < 1.0) {
            return Err(ToolError::usage("--a must lie in (0, 1)"));
        }
        if self.sites < 3 {
            return Err(ToolError::usage("-L must be at least 3"));
        }
        if self.workers == Some(0) {
            return Err(ToolError::usage("--workers must be positive"));
        }
        Ok(())
    }

    pub fn grid(&self) -> Vec<f64> {
        sweep::linspace(self.g_min, self.g_max, self.steps)
    }

    /// Sweep configuration for the spectral commands; rejects odd or
    /// oversized chains before any computation.
    pub fn sweep_config(&self) -> Result<SweepConfig> {
        let mut cfg = SweepConfig::new(self.family, self.scheme, self.sites).with_range(self.g_min, self.g_max, self.steps);
        cfg.a = self.a;
        cfg.seed = self.seed;
        cfg.validate().map_err(as_usage)?;
        Ok(cfg)
    }
}

/// Runs a parsed command line; `Ok(1)` signals failed checks.
pub fn run(cli: &Cli) -> Result<u8> {
    let settings = Settings::resolve(&cli.global)?;
    match &cli.command {
        Command::Observables(args) => observables(&settings, args),
        Command::Spectrum(args) => spectrum(&settings, args),
        Command::Sweep(args) => sweep_command(&settings, args),
        Command::Perturb(args) => perturb(&settings, args),
        Command::Verify(args) => verify(&settings, args),
    }
}

fn write_plot(path: Option<&Path>, plot: &Plot) -> Result<()> {
    match path {
        Some(path) => write_bytes(Some(path), plot.render().as_bytes()),
        None => Ok(()),
    }
}

pub fn observables_table(settings: &Settings) -> Result<Table> {
    let rows = sweep::sigma_x_curve(settings.family, &settings.grid(), settings.sites)?;
    let mut table = Table::new(&["g", "sigmax_closed", "sigmax_finite_L", "difference", "sigmax_closed_alt"]);
    for r in rows {
        table.push(vec![
            r.g.into(),
            r.closed_form.into(),
            r.finite.into(),
            r.difference().into(),
            r.closed_form_variant.into(),
        ]);
    }
    Ok(table)
}

fn column(table: &Table, x: &str, y: &str) -> Vec<(f64, f64)> {
    let (xi, yi) = (table.column(x).expect("column"), table.column(y).expect("column"));
    let value = |c: &Cell| match c {
        Cell::Float(v) => *v,
        Cell::Int(n) => *n as f64,
        _ => f64::NAN,
    };
    table.rows.iter().map(|r| (value(&r[xi]), value(&r[yi]))).collect()
}

/// Long layout. `sigmax_closed_as_printed` is the published closed form;
/// the thermodynamic value is omitted where the dominant transfer
/// eigenvalue is degenerate.
pub fn observables_long_table(settings: &Settings) -> Result<Table> {
    let rows = sweep::sigma_x_curve(settings.family, &settings.grid(), settings.sites)?;
    let mut table = Table::new(&["g", "observable_name", "L", "value_re", "value_im"]);
    let sigma_x = scarmps_core::mps::ops::pauli_x();
    for r in rows {
        let mut push = |name: &str, sites: usize, re: f64, im: f64| {
            table.push(vec![r.g.into(), name.into(), sites.into(), re.into(), im.into()]);
        };
        push("sigmax_closed_as_printed", 0, r.closed_form, 0.0);
        push("sigmax_closed_alt", 0, r.closed_form_variant, 0.0);
        let mps = MpsDefinition::model(settings.family, r.g)?;
        let finite = mps.correlation(settings.sites, std::slice::from_ref(&sigma_x))?;
        push("sigmax_finite_L", settings.sites, finite.re, finite.im);
        match mps.thermodynamic_correlation(std::slice::from_ref(&sigma_x)) {
            Ok(z) => push("sigmax_thermodynamic", 0, z.re, z.im),
            Err(scarmps_core::Error::AtTransition { .. }) => {}
            Err(e) => return Err(e.into()),
        }
    }
    Ok(table)
}

fn observables(settings: &Settings, args: &ObservablesArgs) -> Result<u8> {
    let table = observables_table(settings)?;
    if args.long {
        observables_long_table(settings)?.emit(settings.format, settings.out.as_deref())?;
    } else {
        table.emit(settings.format, settings.out.as_deref())?;
    }
    eprintln!("note: sigmax_closed is the closed form as printed; sigmax_closed_alt is 4g/(1+g)^2");
    let mut plot = Plot::new(
        &format!("<sigma_x>, {} family, L = {}", settings.family, settings.sites),
        "g",
        "<sigma_x>",
    );
    plot.series.push(Series::line("closed form (printed)", column(&table, "g", "sigmax_closed"), "#d62728", false));
    plot.series.push(Series::line("4g/(1+g)^2", column(&table, "g", "sigmax_closed_alt"), "#1f77b4", true));
    plot.series.push(Series::markers(
        &format!("L = {}", settings.sites),
        column(&table, "g", "sigmax_finite_L"),
        "#000000",
    ));
    write_plot(settings.plot.as_deref(), &plot)?;
    Ok(0)
}

pub const SPECTRUM_COLUMNS: &[&str] = &[
    "g", "L", "sector", "state_index", "energy", "entropy", "page_entropy", "mps_overlap", "is_scar", "is_low_entropy",
];

pub fn spectrum_table(point: &PointResult, sites: usize) -> Table {
    let page = spectral::page_entropy(sites);
    let mut table = Table::new(SPECTRUM_COLUMNS);
    for r in &point.records {
        table.push(vec![
            r.g.into(),
            sites.into(),
            0usize.into(),
            r.state_index.into(),
            r.energy.into(),
            r.entropy.into(),
            page.into(),
            r.mps_overlap.into(),
            r.is_scar.into(),
            r.is_low_entropy.into(),
        ]);
    }
    table
}

fn spectrum_plot(point: &PointResult, settings: &Settings) -> Plot {
    let page = spectral::page_entropy(settings.sites);
    let mut plot = Plot::new(
        &format!("k = 0 spectrum, {} {} , L = {}, g = {}", settings.family, settings.scheme, settings.sites, point.g),
        "E",
        "S",
    );
    let thermal: Vec<_> = point.records.iter().filter(|r| !r.is_scar).collect();
    plot.series.push(Series {
        label: String::new(),
        points: thermal.iter().map(|r| (r.energy, r.entropy)).collect(),
        style: crate::plot::Style::Markers { radius: 2.5 },
        colors: Colors::PerPoint(thermal.iter().map(|r| entropy_color(r.entropy / page)).collect()),
    });
    let scar = point.scar_record();
    plot.series.push(Series {
        label: "embedded state".into(),
        points: vec![(scar.energy, scar.entropy)],
        style: crate::plot::Style::Markers { radius: 5.0 },
        colors: Colors::Uniform("#000000".into()),
    });
    plot.guides.push((page, "S_Page".into()));
    plot.entropy_bar = true;
    plot
}

fn spectrum(settings: &Settings, args: &SpectrumArgs) -> Result<u8> {
    if settings.g.is_none() && settings.steps != 1 {
        return Err(ToolError::usage("spectrum needs a single --g"));
    }
    let cfg = settings.sweep_config()?;
    let plan = SweepPlan::prepare(&cfg)?;
    if let Some(path) = &args.dump_dense {
        let h = plan.hamiltonian(0)?;
        if h.dimension() > DEFAULT_DENSE_CAP {
            return Err(ToolError::usage(format!(
                "dense dump needs 2^L <= {DEFAULT_DENSE_CAP}, got {}",
                h.dimension()
            )));
        }
        crate::dense::write(path, &h.dense_matrix(DEFAULT_DENSE_CAP)?)?;
    }
    let point = plan.evaluate(0)?;
    spectrum_table(&point, settings.sites).emit(settings.format, settings.out.as_deref())?;
    write_plot(settings.plot.as_deref(), &spectrum_plot(&point, settings))?;
    eprintln!(
        "embedded state: index {}, energy {:.3e}, overlap {:.12}, entropy {:.6}{}",
        point.scar_index,
        point.scar_energy,
        point.scar_overlap,
        point.scar_entropy,
        if point.degenerate { " (zero-energy eigenspace projection)" } else { "" }
    );
    let violations = point.violations(cfg.scheme);
    report_violations(violations.iter().map(|v| (point.g, v.0, v.1, v.2)))
}

fn report_violations(violations: impl Iterator<Item = (f64, &'static str, f64, f64)>) -> Result<u8> {
    let mut failed = false;
    for (g, check, observed, bound) in violations {
        failed = true;
        eprintln!("invariant violated at g = {g}: {check} observed {observed:.3e}, bound {bound:.3e}");
    }
    Ok(u8::from(failed))
}

pub const RECORD_COLUMNS: &[&str] = &[
    "g",
    "state_index",
    "energy",
    "entropy",
    "mps_overlap",
    "is_scar",
    "is_low_entropy",
    "degenerate",
    "continuity_lost",
    "rank_deficient",
];

pub fn records_table(result: &SweepResult) -> Table {
    let mut table = Table::new(RECORD_COLUMNS);
    for r in result.records() {
        table.push(vec![
            r.g.into(),
            r.state_index.into(),
            r.energy.into(),
            r.entropy.into(),
            r.mps_overlap.into(),
            r.is_scar.into(),
            r.is_low_entropy.into(),
            r.degenerate.into(),
            r.continuity_lost.into(),
            r.rank_deficient.into(),
        ]);
    }
    table
}

pub fn summary_table(result: &SweepResult, window: f64) -> Table {
    let records: Vec<_> = result.records().copied().collect();
    let mut table = Table::new(&[
        "g",
        "scar_energy",
        "min_gap",
        "low_entropy_neighbors",
        "min_neighbor_entropy",
        "spectral_range",
        "window",
    ]);
    for s in gap_and_entropy_track(&records, window) {
        table.push(vec![
            s.g.into(),
            s.scar_energy.into(),
            s.min_gap.into(),
            s.low_entropy_neighbors.into(),
            s.min_neighbor_entropy.into(),
            s.spectral_range.into(),
            s.window.into(),
        ]);
    }
    table
}

/// Builds the plan, reusing or writing the chain cache.
fn prepare_with_cache(cfg: &SweepConfig, cache: Option<&Path>) -> Result<SweepPlan> {
    let Some(path) = cache else {
        return Ok(SweepPlan::prepare(cfg)?);
    };
    if path.exists() {
        let cached = ChainCache::load(path)?;
        let mismatch = |message: String| ToolError::Format {
            path: path.into(),
            message,
        };
        if cached.family != cfg.family.label() {
            return Err(mismatch(format!("cache holds the {} family", cached.family)));
        }
        let points = cached.prepared_points().map_err(mismatch)?;
        return SweepPlan::from_prepared(cfg, points, Vec::new())
            .map_err(|e| mismatch(format!("cache does not fit this sweep: {e}")));
    }
    let plan = SweepPlan::prepare(cfg)?;
    ChainCache::new(cfg.family, cfg.effective_chain_step(), cfg.chain_start, &plan.points).save(path)?;
    Ok(plan)
}

fn sweep_command(settings: &Settings, args: &SweepArgs) -> Result<u8> {
    let mut cfg = settings.sweep_config()?;
    if let Some(mode) = args.complement {
        cfg.complement = match mode {
            ComplementArg::Analytic => ComplementMode::Analytic,
            ComplementArg::Numerical => ComplementMode::Numerical,
        };
    }
    cfg.chain_step = args.chain_step;
    cfg.energy_window = args.window;
    cfg.validate().map_err(as_usage)?;

    let plan = prepare_with_cache(&cfg, args.chain_cache.as_deref())?;
    let result = parallel::run_plan(plan, settings.workers)?;
    let table = records_table(&result);
    table.emit(settings.format, settings.out.as_deref())?;
    if let Some(path) = &args.summary {
        summary_table(&result, cfg.energy_window).emit(settings.format, Some(path))?;
    }
    if settings.plot.is_some() {
        let page = cfg.page_entropy();
        let mut plot = Plot::new(
            &format!("k = 0 spectra, {} {}, L = {}", cfg.family, cfg.scheme, cfg.sites),
            "g",
            "E",
        );
        let records: Vec<_> = result.records().collect();
        plot.series.push(Series {
            label: String::new(),
            points: records.iter().map(|r| (r.g, r.energy)).collect(),
            style: crate::plot::Style::Markers { radius: 1.5 },
            colors: Colors::PerPoint(records.iter().map(|r| entropy_color(r.entropy / page)).collect()),
        });
        plot.series.push(Series::line(
            "embedded state",
            result.points.iter().map(|p| (p.g, p.scar_energy)).collect(),
            "#000000",
            true,
        ));
        plot.entropy_bar = true;
        write_plot(settings.plot.as_deref(), &plot)?;
    }
    let lost = result.chain_steps.iter().filter(|s| s.continuity_lost).count();
    if lost > 0 {
        eprintln!("warning: basis continuity lost in {lost} chain steps");
    }
    report_violations(result.violations().into_iter())
}

fn perturb(settings: &Settings, args: &PerturbArgs) -> Result<u8> {
    let cfg = settings.sweep_config()?;
    let kind = match args.kind {
        KindArg::Within => PerturbationKind::WithinComplement,
        KindArg::Generic => PerturbationKind::Generic,
    };
    let specs = args
        .epsilon
        .iter()
        .map(|&e| PerturbationSpec::new(kind, e, settings.seed).map_err(as_usage))
        .collect::<Result<Vec<_>>>()?;
    let reports = parallel::map_ordered(&specs, settings.workers, |spec| {
        Ok(sweep::perturbation_experiment(&cfg, spec)?)
    })?;
    let mut table = Table::new(&["g", "kind", "epsilon", "max_overlap", "index", "energy", "residual"]);
    let label = match kind {
        PerturbationKind::WithinComplement => "within",
        PerturbationKind::Generic => "generic",
    };
    for r in reports.iter().flatten() {
        table.push(vec![
            r.g.into(),
            label.into(),
            r.epsilon.into(),
            r.max_overlap.into(),
            r.index.into(),
            r.energy.into(),
            r.residual.into(),
        ]);
    }
    table.emit(settings.format, settings.out.as_deref())?;
    if settings.plot.is_some() {
        let mut plot = Plot::new("Overlap with the embedded state", "epsilon", "max overlap");
        for point in 0..cfg.steps {
            let curve: Vec<_> = reports.iter().map(|r| (r[point].epsilon, r[point].max_overlap)).collect();
            plot.series.push(Series::line(&format!("g = {}", reports[0][point].g), curve, "#1f77b4", false));
        }
        write_plot(settings.plot.as_deref(), &plot)?;
    }
    Ok(0)
}

fn verify(settings: &Settings, args: &VerifyArgs) -> Result<u8> {
    let mut options = VerifyOptions::new(settings.family);
    options.a = settings.a;
    options.seed = settings.seed;
    options.page_samples = args.samples;
    options.inject_non_hermitian = args.inject_non_hermitian;
    let report = run_verify(&options)?;
    write_bytes(settings.out.as_deref(), report.to_string().as_bytes())?;
    Ok(u8::from(!report.passed()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("scarmps").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn defaults_and_single_points() {
        let s = Settings::resolve(&parse(&["observables"]).global).unwrap();
        assert_eq!((s.family, s.scheme, s.sites, s.steps), (Family::Ghz, SchemeKind::Scar, 12, 41));
        assert_eq!(s.a, DEFAULT_GHZ_A);
        let s = Settings::resolve(&parse(&["spectrum", "--g", "-0.5", "--model", "z2"]).global).unwrap();
        assert_eq!((s.g_min, s.g_max, s.steps), (-0.5, -0.5, 1));
        assert_eq!(s.family, Family::Z2);
    }

    #[test]
    fn contradictory_flags_are_usage_errors() {
        for args in [
            &["observables", "--g", "0.1", "--g-min", "0.0"][..],
            &["observables", "--a", "1.5"],
            &["observables", "--g-min", "1", "--g-max", "0"],
            &["observables", "--steps", "0"],
        ] {
            let err = Settings::resolve(&parse(args).global).unwrap_err();
            assert_eq!(err.exit_code(), 2, "{args:?}");
        }
        let s = Settings::resolve(&parse(&["sweep", "-L", "7"]).global).unwrap();
        assert_eq!(s.sweep_config().unwrap_err().exit_code(), 2);
    }

    #[test]
    fn flags_override_config_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        std::fs::write(&path, "model = z2\nL = 8\nsteps = 5\n").unwrap();
        let cli = parse(&["sweep", "--config", path.to_str().unwrap(), "-L", "6"]);
        let s = Settings::resolve(&cli.global).unwrap();
        assert_eq!((s.family, s.sites, s.steps), (Family::Z2, 6, 5));
    }
}
