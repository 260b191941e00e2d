use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use conflab::confvol::{conformal_volume, ConfVolConfig};
use conflab::geomcore::{load_mesh, AmbientHint, Fixture};
use conflab::harness::{
    check_index_bound, constants, index_catalog, natural_immersion, verify, Bundle, ConstantsTable, MeshSource,
    Theorem, VerifyConfig, SCHEMA_VERSION,
};
use conflab::packing::{gny_decompose, GnyConfig};
use conflab::spectral::{assemble_laplacian, eigen_spectrum_with, weyl_fit, EigenOptions};

#[derive(Parser, Debug)]
#[command(name = "conflab", version, about = "Eigenvalue bounds and conformal volume on triangulated surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Lowest Laplace eigenvalues of a mesh.
    Spectrum {
        #[command(flatten)]
        source: SourceArgs,
        /// Number of eigenvalues, counting lambda_0.
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Conformal volume estimate with the optimizer trace.
    Confvol {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, default_value_t = 6)]
        starts: usize,
        #[arg(long, default_value_t = 50.0)]
        max_t: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Disjoint-annuli decomposition of the push-forward volume measure.
    Gny {
        #[command(flatten)]
        source: SourceArgs,
        /// Number of annuli.
        #[arg(short, long)]
        k: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Runs the inequality checks on a mesh.
    Verify {
        /// `all` or one of: liyau, reilly, tcv, reilly_k, grei, witnesses,
        /// willmore, esi, schro, index, genus.
        theorem: String,
        #[command(flatten)]
        source: SourceArgs,
        /// Largest k for the bounds on all eigenvalues.
        #[arg(long, default_value_t = 30)]
        kmax: usize,
        /// Largest k for which test functions are built.
        #[arg(long, default_value_t = 8)]
        witness_kmax: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Index bound on the catalogue of minimal hypersurfaces of S^3.
    Index {
        /// Icosphere level of the equator.
        #[arg(long, default_value_t = 3)]
        level: u32,
        /// Grid size of the Clifford torus.
        #[arg(long, default_value_t = 32)]
        grid: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Explicit constants of the eigenvalue bounds.
    Constants {
        #[arg(short = 'n', long, default_value_t = 2)]
        n: usize,
        #[arg(short = 'm', long, default_value_t = 2)]
        m: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Series of lambda_k Vol against k with a Weyl-law fit.
    PlotData {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, default_value_t = 61)]
        count: usize,
        /// First k of the fit range; the range ends at count - 1.
        #[arg(long, default_value_t = 20)]
        fit_from: usize,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Args, Debug)]
struct SourceArgs {
    /// Built-in fixture, e.g. `icosphere:4`, `clifford:64`.
    #[arg(long, conflicts_with = "mesh", required_unless_present = "mesh")]
    fixture: Option<String>,
    /// OFF file.
    #[arg(long)]
    mesh: Option<PathBuf>,
    /// Treat the OFF coordinates as points of the unit sphere.
    #[arg(long, requires = "mesh")]
    on_sphere: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct OutArgs {
    /// Directory for the output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

impl Format {
    fn ext(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

type CliResult<T> = Result<T, String>;

/// Shortest round-trip decimal, with an exponent for very large or small
/// magnitudes.
fn num(x: f64) -> String {
    serde_json::Number::from_f64(x).map_or_else(|| x.to_string(), |n| n.to_string())
}

fn context<T>(what: &str, r: conflab::Result<T>) -> CliResult<T> {
    r.map_err(|e| format!("{what}: {e}"))
}

impl SourceArgs {
    fn load(&self) -> CliResult<MeshSource> {
        match (&self.fixture, &self.mesh) {
            (Some(f), None) => {
                let fixture: Fixture = context("--fixture", f.parse())?;
                context(&format!("building {fixture}"), MeshSource::fixture(fixture))
            }
            (None, Some(p)) => {
                let hint = if self.on_sphere { AmbientHint::UnitSphere } else { AmbientHint::Euclidean };
                let mesh = context(&format!("reading {}", p.display()), load_mesh(p, Some(hint)))?;
                Ok(MeshSource { label: p.display().to_string(), mesh, fixture: None })
            }
            _ => Err("exactly one of --fixture and --mesh is required".into()),
        }
    }
}

#[derive(Serialize)]
struct Versioned<'a, T: Serialize> {
    schema_version: u32,
    #[serde(flatten)]
    body: &'a T,
}

fn json<T: Serialize>(body: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(&Versioned { schema_version: SCHEMA_VERSION, body })
        .map_err(|e| format!("serializing output: {e}"))?;
    s.push('\n');
    Ok(s)
}

/// Writes to `<dir>/<name>.<ext>` through a temporary file, with the
/// timing in a side file, or prints to stdout.
fn emit(out: &OutArgs, name: &str, text: &str, started: Instant) -> CliResult<()> {
    let Some(dir) = &out.out else {
        print!("{text}");
        return Ok(());
    };
    fs::create_dir_all(dir).map_err(|e| format!("creating {}: {e}", dir.display()))?;
    let path = dir.join(format!("{name}.{}", out.format.ext()));
    write_atomic(&path, text)?;
    let now = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let meta = format!(
        "{{\n  \"output\": \"{}\",\n  \"finished_unix\": {now},\n  \"elapsed_seconds\": {:.3}\n}}\n",
        path.file_name().and_then(|s| s.to_str()).unwrap_or_default(),
        started.elapsed().as_secs_f64()
    );
    write_atomic(&dir.join(format!("{name}.meta.json")), &meta)?;
    eprintln!("wrote {}", path.display());
    Ok(())
}

fn write_atomic(path: &Path, text: &str) -> CliResult<()> {
    let tmp = path.with_extension("tmp");
    let mut f = fs::File::create(&tmp).map_err(|e| format!("creating {}: {e}", tmp.display()))?;
    f.write_all(text.as_bytes()).map_err(|e| format!("writing {}: {e}", tmp.display()))?;
    f.sync_all().map_err(|e| format!("writing {}: {e}", tmp.display()))?;
    fs::rename(&tmp, path).map_err(|e| format!("renaming to {}: {e}", path.display()))
}

fn run_spectrum(source: &SourceArgs, count: usize, out: &OutArgs) -> CliResult<()> {
    let started = Instant::now();
    let src = source.load()?;
    let ops = context("assembling the Laplacian", assemble_laplacian(&src.mesh))?;
    let opts = EigenOptions { seed: source.seed ^ EigenOptions::default().seed, ..EigenOptions::default() };
    let spec = context("computing the spectrum", eigen_spectrum_with(&ops, count, &opts))?;
    let text = match out.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Out<'a> {
                fixture: &'a str,
                volume: f64,
                eigenvalues: &'a [f64],
                residuals: &'a [f64],
            }
            json(&Out { fixture: &src.label, volume: ops.total_mass(), eigenvalues: &spec.eigenvalues, residuals: &spec.residuals })?
        }
        Format::Csv => {
            let mut s = String::from("k,eigenvalue,residual\n");
            for (k, (l, r)) in spec.eigenvalues.iter().zip(&spec.residuals).enumerate() {
                let _ = writeln!(s, "{k},{},{}", num(*l), num(*r));
            }
            s
        }
    };
    emit(out, "spectrum", &text, started)
}

fn run_confvol(source: &SourceArgs, starts: usize, max_t: f64, out: &OutArgs) -> CliResult<()> {
    let started = Instant::now();
    let src = source.load()?;
    let imm = context("building the sphere immersion", natural_immersion(&src.mesh))?
        .ok_or("the mesh has no coordinates to map into a sphere")?;
    let cfg = ConfVolConfig { starts, max_t, seed: source.seed ^ ConfVolConfig::default().seed, ..ConfVolConfig::default() };
    let cv = context("optimizing the pull-back volume", conformal_volume(&imm, &cfg))?;
    let text = match out.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Out<'a> {
                fixture: &'a str,
                result: &'a conflab::confvol::ConformalVolumeResult,
            }
            json(&Out { fixture: &src.label, result: &cv })?
        }
        Format::Csv => {
            let mut s = format!("# value={} identity={} evaluations={}\nstart,volume,w\n", cv.value, cv.identity_value, cv.evaluations);
            for p in &cv.trace {
                let w: Vec<String> = p.w.iter().map(|x| num(*x)).collect();
                let _ = writeln!(s, "{},{},{}", p.start, num(p.volume), w.join(" "));
            }
            s
        }
    };
    emit(out, "confvol", &text, started)
}

fn run_gny(source: &SourceArgs, k: usize, out: &OutArgs) -> CliResult<()> {
    let started = Instant::now();
    let src = source.load()?;
    let imm = context("building the sphere immersion", natural_immersion(&src.mesh))?
        .ok_or("the mesh has no coordinates to map into a sphere")?;
    let mu = context("push-forward measure", imm.pushforward(None))?;
    let cfg = GnyConfig { seed: source.seed ^ GnyConfig::default().seed, ..GnyConfig::default() };
    let fam = context("annulus decomposition", gny_decompose(&mu, k, &cfg))?;
    let text = match out.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Out<'a> {
                fixture: &'a str,
                k: usize,
                family: &'a conflab::packing::AnnulusFamily,
            }
            json(&Out { fixture: &src.label, k, family: &fam })?
        }
        Format::Csv => {
            let mut s = format!("# c_achieved={} c_theory={}\ni,center,inner,outer,mass\n", fam.c_achieved, fam.c_theory);
            for (i, (a, m)) in fam.annuli.iter().zip(&fam.masses).enumerate() {
                let c: Vec<String> = a.center.coords().iter().map(|x| num(*x)).collect();
                let _ = writeln!(s, "{i},{},{},{},{}", c.join(" "), num(a.inner), num(a.outer), num(*m));
            }
            s
        }
    };
    emit(out, "gny", &text, started)
}

fn bundle_csv(b: &Bundle) -> String {
    let mut s = String::from("theorem,fixture,k,lhs,rhs,slack,error_bars,passed,conclusive\n");
    for r in &b.reports {
        let k = r.k.map(|k| k.to_string()).unwrap_or_default();
        let _ = writeln!(
            s,
            "{},{},{k},{},{},{},{},{},{}",
            r.name,
            r.fixture,
            num(r.lhs),
            num(r.rhs),
            num(r.slack),
            num(r.error_bars.total()),
            r.passed,
            r.conclusive
        );
    }
    s
}

fn run_verify(theorem: &str, source: &SourceArgs, kmax: usize, witness_kmax: usize, out: &OutArgs) -> CliResult<u8> {
    let started = Instant::now();
    let theorems: Vec<Theorem> = if theorem == "all" {
        Theorem::ALL.to_vec()
    } else {
        vec![context("theorem", theorem.parse())?]
    };
    let src = source.load()?;
    let cfg = VerifyConfig { seed: source.seed, k_max: kmax, witness_k: (1..=witness_kmax).collect(), ..VerifyConfig::default() };
    let bundle = context(&format!("verify {theorem}"), verify(&src, &theorems, &cfg))?;
    let text = match out.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&bundle).map_err(|e| format!("serializing output: {e}"))?;
            s.push('\n');
            s
        }
        Format::Csv => bundle_csv(&bundle),
    };
    emit(out, "verify", &text, started)?;
    for r in bundle.reports.iter().filter(|r| !r.passed) {
        eprintln!("FAILED {} on {} (k = {:?}): lhs {} > rhs {} + {}", r.name, r.fixture, r.k, r.lhs, r.rhs, r.error_bars.total());
    }
    Ok(if !bundle.counterexamples.is_empty() {
        2
    } else if !bundle.all_passed {
        3
    } else {
        0
    })
}

fn run_index(level: u32, grid: usize, out: &OutArgs) -> CliResult<()> {
    let started = Instant::now();
    let consts = context("constants", constants(2, 3))?;
    let entries = context("index catalogue", index_catalog(level, grid))?;
    let reports = entries
        .iter()
        .map(|e| context(&format!("index of {}", e.name), check_index_bound(e, &consts)))
        .collect::<CliResult<Vec<_>>>()?;
    let text = match out.format {
        Format::Json => json(&serde_json::json!({ "entries": reports }))?,
        Format::Csv => {
            let mut s = String::from("name,n,index,lhs,shape_integral,passed\n");
            for (e, r) in entries.iter().zip(&reports) {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{}",
                    e.name,
                    e.n,
                    r.index.count,
                    num(r.report.lhs),
                    num(r.shape_integral),
                    r.report.passed
                );
            }
            s
        }
    };
    emit(out, "index", &text, started)
}

fn constants_csv(t: &ConstantsTable) -> CliResult<String> {
    let v = serde_json::to_value(t).map_err(|e| e.to_string())?;
    let mut s = String::from("key,value\n");
    if let Some(map) = v.as_object() {
        for (k, v) in map {
            let v = match v {
                serde_json::Value::String(x) => x.clone(),
                other => other.to_string(),
            };
            let _ = writeln!(s, "{k},{v}");
        }
    }
    Ok(s)
}

fn run_constants(n: usize, m: usize, out: &OutArgs) -> CliResult<()> {
    let started = Instant::now();
    let t = context("constants", constants(n, m))?;
    let text = match out.format {
        Format::Json => json(&t)?,
        Format::Csv => constants_csv(&t)?,
    };
    emit(out, "constants", &text, started)
}

fn run_plot_data(source: &SourceArgs, count: usize, fit_from: usize, out: &OutArgs) -> CliResult<()> {
    let started = Instant::now();
    let src = source.load()?;
    let ops = context("assembling the Laplacian", assemble_laplacian(&src.mesh))?;
    let opts = EigenOptions { seed: source.seed ^ EigenOptions::default().seed, ..EigenOptions::default() };
    let spec = context("computing the spectrum", eigen_spectrum_with(&ops, count, &opts))?;
    let vol = ops.total_mass();
    let fit = context("Weyl fit", weyl_fit(&spec.eigenvalues, vol, 2, fit_from..=count.saturating_sub(1)))?;
    let text = match out.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Out<'a> {
                fixture: &'a str,
                volume: f64,
                lambda_vol: Vec<f64>,
                fit: &'a conflab::spectral::WeylFit,
            }
            json(&Out {
                fixture: &src.label,
                volume: vol,
                lambda_vol: spec.eigenvalues.iter().map(|l| l * vol).collect(),
                fit: &fit,
            })?
        }
        Format::Csv => {
            let mut s = format!(
                "# {}: slope={} intercept={} weyl_constant={} fit_range={}..={}\nk,lambda_k_vol,fit\n",
                src.label,
                fit.slope,
                fit.intercept,
                fit.weyl_constant,
                fit_from,
                count.saturating_sub(1)
            );
            for (k, l) in spec.eigenvalues.iter().enumerate() {
                let _ = writeln!(s, "{k},{},{}", num(l * vol), num(fit.intercept + fit.slope * k as f64));
            }
            s
        }
    };
    emit(out, "plot_data", &text, started)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Spectrum { source, count, out } => run_spectrum(source, *count, out).map(|_| 0),
        Command::Confvol { source, starts, max_t, out } => run_confvol(source, *starts, *max_t, out).map(|_| 0),
        Command::Gny { source, k, out } => run_gny(source, *k, out).map(|_| 0),
        Command::Verify { theorem, source, kmax, witness_kmax, out } => {
            run_verify(theorem, source, *kmax, *witness_kmax, out)
        }
        Command::Index { level, grid, out } => run_index(*level, *grid, out).map(|_| 0),
        Command::Constants { n, m, out } => run_constants(*n, *m, out).map(|_| 0),
        Command::PlotData { source, count, fit_from, out } => run_plot_data(source, *count, *fit_from, out).map(|_| 0),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
