//! Command-line front end: invariant suites, outcome densities, sampling,
//! compound-extension reports, and table exporters.
//!
//! Exit codes: 0 on success, 1 when a numerical check fails its bound,
//! 2 on configuration errors.

mod config;
mod formats;
mod suites;
mod threads;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use su11kit::coherent::{coherent_state, resolution_of_identity, DiskPoint, HalfPlanePoint};
use su11kit::extension::{
    heterodyne_extension, isometric_extension, lambda_gt1_extension, symmetric_extension_report,
};
use su11kit::halfline::{basis_fn, AffineParams, Grid};
use su11kit::povm::{sample, DiskDensity, HalfPlaneDensity};
use su11kit::rep::{
    build_annihilation_pair, build_ladder, build_skew_triplet, casimir, cayley_transform,
};
use su11kit::squeezed::{multiparticle_reduction, squeezed_vacuum, SqueezeParams};
use su11kit::{BasisTag, LowestWeight, StateVector, ToleranceProfile};

use config::{merge, parse_complex, parse_nodes, parse_state, parse_tolerances, FileConfig};
use formats::{
    ExtensionReportDoc, NaimarkDoc, OperatorTable, ReductionRowDoc, ReductionTable,
    ResolutionDefects, Sink, SpectrumDoc, SuiteReport,
};

#[derive(Parser)]
#[command(name = "su11kit", version, about = "Numerics for lowest-weight su(1,1) representations, their measurement densities, and compound-system extensions")]
struct Cli {
    /// JSON config file; explicit flags take precedence over its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct NumericFlags {
    /// Lowest weight of the representation.
    #[arg(long, allow_negative_numbers = true)]
    lambda: Option<f64>,
    /// Half-line parameter (lowest weight 2k+1).
    #[arg(long, allow_negative_numbers = true)]
    k: Option<f64>,
    /// Truncation dimension of the number basis.
    #[arg(long)]
    dim: Option<usize>,
    /// Boson Fock truncation.
    #[arg(long)]
    boson_dim: Option<usize>,
    /// Half-line grid flavor.
    #[arg(long, value_enum)]
    grid: Option<GridKind>,
    /// Half-line grid node count.
    #[arg(long)]
    grid_size: Option<usize>,
    /// Disk cutoff radius, strictly below one.
    #[arg(long)]
    r_max: Option<f64>,
    /// Node counts as RxA, e.g. 400x64.
    #[arg(long)]
    nodes: Option<String>,
    /// State specification: basis index, "i:re[,im];..." components, or
    /// "squeezed" with --mu/--nu.
    #[arg(long)]
    state: Option<String>,
    /// Squeeze parameter mu as RE,IM.
    #[arg(long)]
    mu: Option<String>,
    /// Squeeze parameter nu as RE,IM.
    #[arg(long)]
    nu: Option<String>,
    /// Number of samples / particles, per command.
    #[arg(long)]
    n: Option<usize>,
    /// Random seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Tolerance overrides NAME=VALUE (algebraic, quadrature, grid).
    #[arg(long)]
    tol: Vec<String>,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format where both are supported.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum, Default, PartialEq)]
enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum, Default, PartialEq)]
enum GridKind {
    #[default]
    Log,
    Uniform,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum Domain {
    Disk,
    Halfplane,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum Construction {
    Heterodyne,
    Lambda1,
    Isometric,
    #[value(name = "lambda_gt1", alias = "lambda-gt1")]
    LambdaGt1,
}

#[derive(Subcommand)]
enum Command {
    /// Run invariant suites and emit a JSON report; exit 1 on failure.
    Verify {
        /// Suite: repkit, coherent, povm, halfline, squeezed, extension, all.
        #[arg(long, default_value = "all")]
        suite: String,
        #[command(flatten)]
        flags: NumericFlags,
    },
    /// Evaluate an outcome density on a cartesian grid (CSV: re, im, density).
    Density {
        #[arg(long, value_enum, default_value_t = Domain::Disk)]
        domain: Domain,
        /// Half-plane plotting extent.
        #[arg(long, default_value_t = 12.0)]
        extent: f64,
        #[command(flatten)]
        flags: NumericFlags,
    },
    /// Draw outcomes from a disk density (CSV: re, im).
    Sample {
        #[command(flatten)]
        flags: NumericFlags,
    },
    /// Build a compound-system extension and report residuals (JSON).
    Extension {
        #[arg(long, value_enum)]
        construction: Construction,
        #[command(flatten)]
        flags: NumericFlags,
    },
    /// Exporters for operator tables and coefficient dumps.
    Dump {
        #[command(subcommand)]
        what: DumpCommand,
    },
}

#[derive(Subcommand)]
enum DumpCommand {
    /// Operator table as JSON {dim, basis_tag, entries}.
    Operator {
        /// One of l0, lplus, lminus, e0, eplus, eminus, a, astar, cayley, casimir.
        #[arg(long)]
        which: String,
        #[command(flatten)]
        flags: NumericFlags,
    },
    /// Coherent-state coefficients (CSV: n, re, im).
    Coherent {
        /// Disk label as RE,IM.
        #[arg(long)]
        zeta: String,
        #[command(flatten)]
        flags: NumericFlags,
    },
    /// Squeezed-vacuum coefficients in the boson basis (CSV: n, re, im).
    Squeezed {
        #[command(flatten)]
        flags: NumericFlags,
    },
    /// Multi-particle reduction table (JSON).
    Reduction {
        #[command(flatten)]
        flags: NumericFlags,
    },
    /// Resolution-of-identity diagonal defect table (JSON or CSV).
    Resolution {
        #[command(flatten)]
        flags: NumericFlags,
    },
    /// Half-line basis function samples (CSV: x, re, im).
    GridBasis {
        #[command(flatten)]
        flags: NumericFlags,
    },
    /// Naimark dilation of a seeded random POVM (JSON matrices).
    Naimark {
        #[command(flatten)]
        flags: NumericFlags,
    },
    /// Operator spectrum as JSON (which: a, astar, cayley, l0,
    /// symmetric_extension).
    Spectrum {
        #[arg(long)]
        which: String,
        #[command(flatten)]
        flags: NumericFlags,
    },
}

struct Settings {
    lambda: f64,
    k: f64,
    dim: usize,
    boson_dim: usize,
    grid_kind: GridKind,
    grid_size: usize,
    r_max: f64,
    nodes: (usize, usize),
    state: String,
    mu: Option<Complex64>,
    nu: Option<Complex64>,
    n: usize,
    seed: u64,
    tol: ToleranceProfile,
    out: Option<PathBuf>,
    format: Format,
}

fn settings(flags: &NumericFlags, file: &FileConfig) -> Result<Settings, String> {
    let nodes_spec = merge(flags.nodes.clone(), file.nodes.clone(), "400x64".into());
    let tol_entries: Vec<String> = if flags.tol.is_empty() {
        file.tol.clone().unwrap_or_default()
    } else {
        flags.tol.clone()
    };
    let grid_kind = match (flags.grid, file.grid.as_deref()) {
        (Some(g), _) => g,
        (None, Some("uniform")) => GridKind::Uniform,
        (None, Some("log")) | (None, None) => GridKind::Log,
        (None, Some(other)) => return Err(format!("unknown grid kind '{other}' in config")),
    };
    Ok(Settings {
        lambda: merge(flags.lambda, file.lambda, 2.0),
        k: merge(flags.k, file.k, 0.5),
        dim: merge(flags.dim, file.dim, 64),
        boson_dim: merge(flags.boson_dim, file.boson_dim, 32),
        grid_kind,
        grid_size: merge(flags.grid_size, file.grid_size, 2048),
        r_max: merge(flags.r_max, file.r_max, 0.999),
        nodes: parse_nodes(&nodes_spec)?,
        state: merge(flags.state.clone(), file.state.clone(), "0".into()),
        mu: flags.mu.as_deref().map(parse_complex).transpose()?,
        nu: flags.nu.as_deref().map(parse_complex).transpose()?,
        n: merge(flags.n, file.n, 1000),
        seed: merge(flags.seed, file.seed, 42),
        tol: parse_tolerances(&tol_entries)?,
        out: flags.out.clone(),
        format: flags.format,
    })
}

impl Settings {
    fn weight(&self) -> Result<LowestWeight, String> {
        LowestWeight::new(self.lambda).map_err(|e| e.to_string())
    }

    fn squeeze_label(&self) -> Option<Complex64> {
        match (self.mu, self.nu) {
            (Some(mu), Some(nu)) => Some(nu / mu),
            _ => None,
        }
    }

    fn density_state(&self) -> Result<StateVector, String> {
        parse_state(
            &self.state,
            self.dim,
            BasisTag::Su11Number,
            self.squeeze_label(),
            self.lambda,
        )
    }

    fn sink(&self) -> Result<Sink, String> {
        Sink::create(self.out.as_deref()).map_err(|e| e.to_string())
    }
}

/// Configuration problems exit with 2, failed numerical checks with 1.
enum CliError {
    Config(String),
    CheckFailed(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::CheckFailed(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::CheckFailed(m) => m,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let file = FileConfig::load(cli.config.as_deref()).map_err(CliError::Config)?;
    match cli.command {
        Command::Verify { suite, flags } => cmd_verify(&suite, &settings(&flags, &file).map_err(CliError::Config)?),
        Command::Density { domain, extent, flags } => {
            cmd_density(domain, extent, &settings(&flags, &file).map_err(CliError::Config)?)
        }
        Command::Sample { flags } => cmd_sample(&settings(&flags, &file).map_err(CliError::Config)?),
        Command::Extension { construction, flags } => {
            cmd_extension(construction, &settings(&flags, &file).map_err(CliError::Config)?)
        }
        Command::Dump { what } => cmd_dump(what, &file),
    }
}

fn cmd_verify(suite: &str, s: &Settings) -> Result<(), CliError> {
    s.weight().map_err(CliError::Config)?;
    let params = suites::SuiteParams {
        lambda: s.lambda,
        k: s.k,
        dim: s.dim,
        boson_dim: s.boson_dim,
        grid_size: s.grid_size,
        seed: s.seed,
        tol: s.tol,
    };
    let names: Vec<&str> = if suite == "all" {
        suites::ALL_SUITES.to_vec()
    } else {
        vec![suite]
    };
    let mut reports: Vec<SuiteReport> = Vec::new();
    for name in names {
        reports.push(suites::run_suite(name, &params).map_err(CliError::Config)?);
    }
    let all_pass = reports.iter().all(|r| r.pass);
    let mut sink = s.sink().map_err(CliError::Config)?;
    sink.write_json(&reports)
        .map_err(|e| CliError::Config(e.to_string()))?;
    if all_pass {
        Ok(())
    } else {
        let failing: Vec<String> = reports
            .iter()
            .filter(|r| !r.pass)
            .map(|r| r.suite.clone())
            .collect();
        Err(CliError::CheckFailed(format!(
            "verify failed in: {}",
            failing.join(", ")
        )))
    }
}

fn cmd_density(domain: Domain, extent: f64, s: &Settings) -> Result<(), CliError> {
    let weight = s.weight().map_err(CliError::Config)?;
    if s.lambda <= 1.0 {
        return Err(CliError::Config(format!(
            "outcome density requires lowest weight > 1 (got {}); the effect family is not normalizable",
            s.lambda
        )));
    }
    let psi = s.density_state().map_err(CliError::Config)?;
    let (nx, ny) = s.nodes;
    let metadata = vec![
        format!("lambda = {}", s.lambda),
        format!("state = {}", s.state),
        format!("domain = {}", if domain == Domain::Disk { "disk" } else { "halfplane" }),
        format!("cutoff r_max = {} (disk), extent = {} (half-plane)", s.r_max, extent),
        format!("grid = {nx} x {ny} cartesian"),
    ];
    let mut sink = s.sink().map_err(CliError::Config)?;
    match domain {
        Domain::Disk => {
            let density = DiskDensity::new(weight, &psi).map_err(|e| CliError::Config(e.to_string()))?;
            let dx = 2.0 * s.r_max / nx as f64;
            let dy = 2.0 * s.r_max / ny as f64;
            let rows = threads::parallel_map(nx * ny, |idx| {
                let ix = idx / ny;
                let iy = idx % ny;
                let re = -s.r_max + dx * (ix as f64 + 0.5);
                let im = -s.r_max + dy * (iy as f64 + 0.5);
                let z = Complex64::new(re, im);
                if z.norm() < s.r_max {
                    Some(vec![re, im, density.density(DiskPoint::new(z).unwrap())])
                } else {
                    None
                }
            });
            sink.write_csv(
                &metadata,
                &["re", "im", "density"],
                rows.into_iter().flatten(),
            )
            .map_err(|e| CliError::Config(e.to_string()))?;
        }
        Domain::Halfplane => {
            let density =
                HalfPlaneDensity::new(weight, &psi).map_err(|e| CliError::Config(e.to_string()))?;
            let dx = 2.0 * extent / nx as f64;
            let dy = extent / ny as f64;
            let rows = threads::parallel_map(nx * ny, |idx| {
                let ix = idx / ny;
                let iy = idx % ny;
                let re = -extent + dx * (ix as f64 + 0.5);
                let im = dy * (iy as f64 + 0.5);
                let q = density.density(HalfPlanePoint::new(Complex64::new(re, im)).unwrap());
                vec![re, im, q]
            });
            sink.write_csv(&metadata, &["re", "im", "density"], rows.into_iter())
                .map_err(|e| CliError::Config(e.to_string()))?;
        }
    }
    Ok(())
}

fn cmd_sample(s: &Settings) -> Result<(), CliError> {
    let weight = s.weight().map_err(CliError::Config)?;
    if s.lambda <= 1.0 {
        return Err(CliError::Config(format!(
            "sampling requires lowest weight > 1, got {}",
            s.lambda
        )));
    }
    if s.n == 0 {
        return Err(CliError::Config("need at least one draw (--n >= 1)".into()));
    }
    let psi = s.density_state().map_err(CliError::Config)?;
    let density = DiskDensity::new(weight, &psi).map_err(|e| CliError::Config(e.to_string()))?;
    // Outcomes are conditioned on |zeta| <= r_max; the header records it.
    let r_max = s.r_max;
    let batch =
        sample(&density, s.n, s.seed, r_max).map_err(|e| CliError::CheckFailed(e.to_string()))?;
    let metadata = vec![
        format!("lambda = {}", s.lambda),
        format!("state = {}", s.state),
        format!("n = {}, seed = {}", s.n, s.seed),
        format!("r_max = {r_max}"),
        format!("acceptance_rate = {:.6}", batch.acceptance_rate),
    ];
    let mut sink = s.sink().map_err(CliError::Config)?;
    sink.write_csv(
        &metadata,
        &["re", "im"],
        batch.outcomes.iter().map(|z| vec![z.re, z.im]),
    )
    .map_err(|e| CliError::Config(e.to_string()))?;
    Ok(())
}

fn cmd_extension(construction: Construction, s: &Settings) -> Result<(), CliError> {
    let (report, violation, bounds) = match construction {
        Construction::Heterodyne => {
            let (_, r) = heterodyne_extension(s.boson_dim)
                .map_err(|e| CliError::Config(e.to_string()))?;
            (r, None, (s.tol.algebraic, s.tol.algebraic))
        }
        Construction::Lambda1 => {
            let grid = Grid::log(1e-6, 60.0, s.grid_size)
                .map_err(|e| CliError::Config(e.to_string()))?;
            let r = symmetric_extension_report(&grid)
                .map_err(|e| CliError::Config(e.to_string()))?;
            (
                r.report,
                Some(r.domain_violation_residual),
                (s.tol.quadrature, s.tol.quadrature),
            )
        }
        Construction::Isometric => {
            let shift = build_annihilation_pair(LowestWeight::new(1.0).unwrap(), s.dim)
                .map_err(|e| CliError::Config(e.to_string()))?
                .creation;
            let (_, r) = isometric_extension(&shift, 1, &s.tol)
                .map_err(|e| CliError::Config(e.to_string()))?;
            (r, None, (s.tol.algebraic, s.tol.algebraic))
        }
        Construction::LambdaGt1 => {
            let params = AffineParams::new(s.k).map_err(|e| CliError::Config(e.to_string()))?;
            let grid = Grid::log(1e-6, 60.0, s.grid_size)
                .map_err(|e| CliError::Config(e.to_string()))?;
            let r = lambda_gt1_extension(params, &grid, &s.tol)
                .map_err(|e| CliError::Config(e.to_string()))?;
            (r, None, (s.tol.grid, s.tol.grid))
        }
    };
    let pass = report.normality_residual <= bounds.0 && report.extension_residual <= bounds.1;
    let doc = ExtensionReportDoc {
        construction: report.construction.clone(),
        dims: report.dims.clone(),
        normality_residual: report.normality_residual,
        extension_residual: report.extension_residual,
        ancilla: report.ancilla.clone(),
        test_family: report.test_family.clone(),
        grid_spec: report.grid_spec.clone(),
        domain_violation_residual: violation,
        normality_bound: bounds.0,
        extension_bound: bounds.1,
        pass,
    };
    let mut sink = s.sink().map_err(CliError::Config)?;
    sink.write_json(&doc)
        .map_err(|e| CliError::Config(e.to_string()))?;
    if pass {
        Ok(())
    } else {
        Err(CliError::CheckFailed(format!(
            "extension residuals exceed bounds: normality {:.3e} (<= {:.1e}), extension {:.3e} (<= {:.1e})",
            report.normality_residual, bounds.0, report.extension_residual, bounds.1
        )))
    }
}

fn cmd_dump(what: DumpCommand, file: &FileConfig) -> Result<(), CliError> {
    match what {
        DumpCommand::Operator { which, flags } => {
            let s = settings(&flags, file).map_err(CliError::Config)?;
            let weight = s.weight().map_err(CliError::Config)?;
            let op = match which.as_str() {
                "l0" => build_ladder(weight, s.dim).map(|l| l.l0),
                "lplus" => build_ladder(weight, s.dim).map(|l| l.l_plus),
                "lminus" => build_ladder(weight, s.dim).map(|l| l.l_minus),
                "e0" => build_ladder(weight, s.dim).map(|l| build_skew_triplet(&l).e0),
                "eplus" => build_ladder(weight, s.dim).map(|l| build_skew_triplet(&l).e_plus),
                "eminus" => build_ladder(weight, s.dim).map(|l| build_skew_triplet(&l).e_minus),
                "a" => build_annihilation_pair(weight, s.dim).map(|p| p.annihilation),
                "astar" => build_annihilation_pair(weight, s.dim).map(|p| p.creation),
                "cayley" => cayley_transform(weight, s.dim, &s.tol).map(|t| t.op),
                "casimir" => casimir(weight, s.dim).map(|c| c.normal_ordered),
                other => {
                    return Err(CliError::Config(format!("unknown operator '{other}'")));
                }
            }
            .map_err(|e| CliError::Config(e.to_string()))?;
            let mut sink = s.sink().map_err(CliError::Config)?;
            sink.write_json(&OperatorTable::from_operator(&op))
                .map_err(|e| CliError::Config(e.to_string()))
        }
        DumpCommand::Coherent { zeta, flags } => {
            let s = settings(&flags, file).map_err(CliError::Config)?;
            let weight = s.weight().map_err(CliError::Config)?;
            let z = parse_complex(&zeta).map_err(CliError::Config)?;
            let point = DiskPoint::new(z).map_err(|e| CliError::Config(e.to_string()))?;
            let state = coherent_state(weight, point, s.dim, &s.tol)
                .map_err(|e| CliError::Config(e.to_string()))?;
            let metadata = vec![
                format!("lambda = {}", s.lambda),
                format!("zeta = {z}"),
                format!("dim = {}", s.dim),
                format!("tail_mass = {:.3e}", state.tail_mass()),
            ];
            let mut sink = s.sink().map_err(CliError::Config)?;
            sink.write_csv(
                &metadata,
                &["n", "re", "im"],
                state
                    .coeffs()
                    .iter()
                    .enumerate()
                    .map(|(n, c)| vec![n as f64, c.re, c.im]),
            )
            .map_err(|e| CliError::Config(e.to_string()))
        }
        DumpCommand::Squeezed { flags } => {
            let s = settings(&flags, file).map_err(CliError::Config)?;
            let (mu, nu) = match (s.mu, s.nu) {
                (Some(mu), Some(nu)) => (mu, nu),
                _ => {
                    return Err(CliError::Config(
                        "squeezed dump needs --mu RE,IM and --nu RE,IM".into(),
                    ))
                }
            };
            let params = SqueezeParams::new(mu, nu, &s.tol)
                .map_err(|e| CliError::Config(e.to_string()))?;
            let state = squeezed_vacuum(&params, s.boson_dim, &s.tol)
                .map_err(|e| CliError::Config(e.to_string()))?;
            let metadata = vec![
                format!("mu = {mu}, nu = {nu}"),
                format!("disk label = {}", params.disk_label()),
                format!("boson_dim = {}", s.boson_dim),
            ];
            let mut sink = s.sink().map_err(CliError::Config)?;
            sink.write_csv(
                &metadata,
                &["n", "re", "im"],
                state
                    .coeffs()
                    .iter()
                    .enumerate()
                    .map(|(n, c)| vec![n as f64, c.re, c.im]),
            )
            .map_err(|e| CliError::Config(e.to_string()))
        }
        DumpCommand::Reduction { flags } => {
            let s = settings(&flags, file).map_err(CliError::Config)?;
            let rows = (1..=s.n.max(1))
                .map(|n| {
                    multiparticle_reduction(n).map(|r| ReductionRowDoc {
                        particles: r.particles,
                        k: r.k,
                        lambda: r.lambda,
                        subnormal: r.subnormal,
                    })
                })
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| CliError::Config(e.to_string()))?;
            let mut sink = s.sink().map_err(CliError::Config)?;
            sink.write_json(&ReductionTable { rows })
                .map_err(|e| CliError::Config(e.to_string()))
        }
        DumpCommand::Resolution { flags } => {
            let s = settings(&flags, file).map_err(CliError::Config)?;
            let weight = s.weight().map_err(CliError::Config)?;
            let (radial, angular) = s.nodes;
            let res = resolution_of_identity(weight, s.dim.min(32), radial, angular, s.r_max)
                .map_err(|e| CliError::Config(e.to_string()))?;
            let dim = res.op.dim();
            let mut max_off = 0.0f64;
            for i in 0..dim {
                for j in 0..dim {
                    if i != j {
                        max_off = max_off.max(res.op.entry(i, j).norm());
                    }
                }
            }
            let doc = ResolutionDefects {
                lambda: s.lambda,
                dim,
                radial_nodes: radial,
                angular_nodes: angular,
                r_max: s.r_max,
                diagonal: (0..dim).map(|n| res.op.entry(n, n).re).collect(),
                analytic_defect: res.analytic_defect.clone(),
                max_off_diagonal: max_off,
            };
            let mut sink = s.sink().map_err(CliError::Config)?;
            match s.format {
                Format::Json => sink
                    .write_json(&doc)
                    .map_err(|e| CliError::Config(e.to_string())),
                Format::Csv => sink
                    .write_csv(
                        &[format!("lambda = {}", s.lambda), format!("r_max = {}", s.r_max)],
                        &["n", "diagonal", "analytic_defect"],
                        (0..dim).map(|n| {
                            vec![n as f64, doc.diagonal[n], doc.analytic_defect[n]]
                        }),
                    )
                    .map_err(|e| CliError::Config(e.to_string())),
            }
        }
        DumpCommand::Naimark { flags } => {
            let s = settings(&flags, file).map_err(CliError::Config)?;
            let effects = s.n.clamp(1, 8);
            let povm = su11kit::povm::random_finite_povm(s.dim.min(8), effects, s.seed, &s.tol)
                .map_err(|e| CliError::Config(e.to_string()))?;
            let dilation = su11kit::povm::naimark_dilate(&povm, &s.tol)
                .map_err(|e| CliError::Config(e.to_string()))?;
            let mut isometry = Vec::with_capacity(dilation.isometry.len());
            for i in 0..dilation.isometry.nrows() {
                for j in 0..dilation.isometry.ncols() {
                    let z = dilation.isometry[(i, j)];
                    isometry.push([z.re, z.im]);
                }
            }
            let doc = NaimarkDoc {
                dim: povm.dim(),
                effects: povm.len(),
                isometry,
                projective: dilation
                    .projective
                    .effects()
                    .iter()
                    .map(OperatorTable::from_operator)
                    .collect(),
                reconstruction_error: dilation.reconstruction_error,
                isometry_defect: dilation.isometry_defect,
            };
            let mut sink = s.sink().map_err(CliError::Config)?;
            sink.write_json(&doc)
                .map_err(|e| CliError::Config(e.to_string()))
        }
        DumpCommand::Spectrum { which, flags } => {
            let s = settings(&flags, file).map_err(CliError::Config)?;
            let (eigs, dim, params): (Vec<num_complex::Complex64>, usize, Vec<(String, f64)>) =
                match which.as_str() {
                    "l0" | "a" | "astar" | "cayley" => {
                        let weight = s.weight().map_err(CliError::Config)?;
                        let op = match which.as_str() {
                            "l0" => build_ladder(weight, s.dim)
                                .map(|l| l.l0)
                                .map_err(|e| CliError::Config(e.to_string()))?,
                            "a" => build_annihilation_pair(weight, s.dim)
                                .map(|p| p.annihilation)
                                .map_err(|e| CliError::Config(e.to_string()))?,
                            "astar" => build_annihilation_pair(weight, s.dim)
                                .map(|p| p.creation)
                                .map_err(|e| CliError::Config(e.to_string()))?,
                            _ => cayley_transform(weight, s.dim, &s.tol)
                                .map(|t| t.op)
                                .map_err(|e| CliError::Config(e.to_string()))?,
                        };
                        (
                            su11kit::linalg::eigenvalues(op.matrix()),
                            s.dim,
                            vec![("lambda".into(), s.lambda)],
                        )
                    }
                    "symmetric_extension" => {
                        let g = s.grid_size.min(256);
                        let grid = Grid::log(1e-4, 40.0, g)
                            .map_err(|e| CliError::Config(e.to_string()))?;
                        let ext = su11kit::extension::SymmetricExtension::new(&grid)
                            .map_err(|e| CliError::Config(e.to_string()))?;
                        let m = ext
                            .materialize()
                            .map_err(|e| CliError::Config(e.to_string()))?;
                        (
                            su11kit::linalg::eigenvalues(&m),
                            2 * g,
                            vec![("grid_size".into(), g as f64)],
                        )
                    }
                    other => {
                        return Err(CliError::Config(format!(
                            "unknown spectrum target '{other}'"
                        )))
                    }
                };
            let doc = SpectrumDoc {
                which,
                dim,
                parameters: params,
                eigenvalues: eigs.iter().map(|z| [z.re, z.im]).collect(),
            };
            let mut sink = s.sink().map_err(CliError::Config)?;
            sink.write_json(&doc)
                .map_err(|e| CliError::Config(e.to_string()))
        }
        DumpCommand::GridBasis { flags } => {
            let s = settings(&flags, file).map_err(CliError::Config)?;
            let params = AffineParams::new(s.k).map_err(|e| CliError::Config(e.to_string()))?;
            let grid = match s.grid_kind {
                GridKind::Log => Grid::log(1e-6, 60.0, s.grid_size),
                GridKind::Uniform => Grid::uniform(1e-3, 60.0, s.grid_size),
            }
            .map_err(|e| CliError::Config(e.to_string()))?;
            let n = s.n.min(32);
            let f = basis_fn(n, params, &grid, &s.tol)
                .map_err(|e| CliError::Config(e.to_string()))?;
            let metadata = vec![
                format!("k = {}", s.k),
                format!("n = {n}"),
                format!("grid = {} ({} nodes)", grid.scheme().name(), grid.len()),
            ];
            let mut sink = s.sink().map_err(CliError::Config)?;
            sink.write_csv(
                &metadata,
                &["x", "re", "im"],
                grid.nodes()
                    .iter()
                    .zip(f.values().iter())
                    .map(|(&x, v)| vec![x, v.re, v.im]),
            )
            .map_err(|e| CliError::Config(e.to_string()))
        }
    }
}
