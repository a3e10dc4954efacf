use std::path::PathBuf;
use std::process::ExitCode;

use cdefl::deflation::KrylovMethod;
use cdefl::model::{convdiff_matrix, ConvDiffSpec};
use cdefl::multigrid::CycleKind;
use cdefl::oracle::{count_inside, write_eigenvalues_csv};
use cdefl::sparse::{mm_write, mm_write_vector};
use cdefl_cli::mg::{run_mg, MgConfig, SmootherChoice};
use cdefl_cli::{bench_table, exit, format_table, run, spectrum, CliError, Computation, Disk, Manifest, MatrixSource, Precond, Rhs, RunConfig, Stage};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "cdefl", version, about = "Deflated Krylov solvers with contour-integral subspaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one system and write a JSON report.
    Run(RunArgs),
    /// Export the eigenvalues of a matrix as re,im CSV.
    Spectrum(SpectrumArgs),
    /// Run plain, contour-deflated and eigenvector-deflated solves for every manifest row.
    Bench(BenchArgs),
    /// Multigrid solve of the convection-diffusion model problem.
    Mg(MgArgs),
    /// Write the convection-diffusion model problem as Matrix Market files.
    Gen(GenArgs),
}

#[derive(Args)]
struct RunArgs {
    /// JSON config; flags given alongside it override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Matrix Market path or `convdiff:n=<n>,re=<Re>[,upwind]`.
    #[arg(long)]
    matrix: Option<MatrixSource>,
    /// `ones` for b = A 1, or a Matrix Market vector file.
    #[arg(long)]
    rhs: Option<Rhs>,
    #[arg(long, value_enum)]
    precond: Option<Precond>,
    #[arg(long, value_enum)]
    computation: Option<Computation>,
    /// Disk `c_re,c_im,r`.
    #[arg(long, allow_hyphen_values = true)]
    contour: Option<Disk>,
    #[arg(short, long)]
    m: Option<usize>,
    #[arg(short, long)]
    q: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    solver: Option<KrylovMethod>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    maxit: Option<usize>,
    #[arg(long)]
    count_eigs: bool,
    #[arg(long)]
    name: Option<String>,
    /// JSON report path; stdout when absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long)]
    history_csv: Option<PathBuf>,
}

impl RunArgs {
    fn into_config(self) -> Result<RunConfig, CliError> {
        let mut cfg = match (&self.config, self.matrix.clone()) {
            (Some(path), _) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::input(Stage::Config, format!("{}: {e}", path.display())))?;
                RunConfig::from_json(&text)?
            }
            (None, Some(m)) => RunConfig::new(m),
            (None, None) => return Err(CliError::input(Stage::Config, "either --config or --matrix is required")),
        };
        if let Some(v) = self.matrix {
            cfg.matrix = v;
        }
        macro_rules! set {
            ($($f:ident),*) => { $( if let Some(v) = self.$f { cfg.$f = v; } )* };
        }
        set!(rhs, precond, computation, q, seed, solver, tol);
        macro_rules! set_opt {
            ($($f:ident),*) => { $( if self.$f.is_some() { cfg.$f = self.$f; } )* };
        }
        set_opt!(contour, m, maxit, name, output, history_csv);
        cfg.count_eigs |= self.count_eigs;
        Ok(cfg)
    }
}

#[derive(Args)]
struct SpectrumArgs {
    #[arg(long)]
    matrix: MatrixSource,
    #[arg(long, value_enum, default_value_t = Precond::None)]
    precond: Precond,
    /// CSV path.
    #[arg(short, long)]
    output: PathBuf,
    /// Report how many eigenvalues lie inside this disk `c_re,c_im,r`.
    #[arg(long, allow_hyphen_values = true)]
    contour: Option<Disk>,
}

#[derive(Args)]
struct BenchArgs {
    /// JSON manifest `{"rows": [RunConfig, ...]}`.
    #[arg(long)]
    manifest: PathBuf,
    /// Machine-readable rows.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum CycleArg {
    V,
    W,
}

#[derive(Args)]
struct MgArgs {
    #[arg(long, default_value_t = 31)]
    n: usize,
    #[arg(long, default_value_t = 0.0)]
    re: f64,
    #[arg(long)]
    upwind: bool,
    #[arg(long, default_value_t = 4)]
    levels: usize,
    #[arg(long, value_enum, default_value = "v")]
    cycle: CycleArg,
    #[arg(long, value_enum, default_value = "jacobi")]
    smoother: SmootherChoice,
    #[arg(long)]
    pre: Option<usize>,
    #[arg(long)]
    post: Option<usize>,
    #[arg(long, default_value_t = 0.8)]
    omega: f64,
    #[arg(long, default_value_t = 3)]
    ks: usize,
    #[arg(long, default_value_t = 8)]
    nev: usize,
    #[arg(long, default_value_t = 32)]
    rougher_q: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long, default_value_t = 50)]
    max_cycles: usize,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0.0)]
    re: f64,
    #[arg(long)]
    upwind: bool,
    /// Matrix Market output for A.
    #[arg(long)]
    out: PathBuf,
    /// Matrix Market output for the manufactured right-hand side.
    #[arg(long)]
    rhs: Option<PathBuf>,
}

fn write_json(path: Option<&PathBuf>, value: &impl serde::Serialize) -> Result<(), CliError> {
    let json = serde_json::to_string_pretty(value).map_err(|e| CliError::internal(Stage::Output, e))? + "\n";
    match path {
        Some(p) => std::fs::write(p, json).map_err(|e| CliError::input(Stage::Output, e)),
        None => {
            print!("{json}");
            Ok(())
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Run(args) => {
            let cfg = args.into_config()?;
            let report = run(&cfg)?;
            if cfg.output.is_none() {
                write_json(None, &report)?;
            }
            eprintln!(
                "{} {}: {} iterations, converged={}, Err={:.2e}, true relres={:.2e}",
                report.matrix, report.computation, report.iterations, report.converged, report.err, report.true_relres
            );
            Ok(if report.converged { exit::SUCCESS } else { exit::NOT_CONVERGED })
        }
        Command::Spectrum(args) => {
            let ev = spectrum(&args.matrix, args.precond)?;
            write_eigenvalues_csv(&args.output, &ev).map_err(|e| CliError::input(Stage::Output, e))?;
            eprintln!("{} eigenvalues written to {}", ev.len(), args.output.display());
            if let Some(d) = args.contour {
                let c = count_inside(&ev, &d.contour(2)?);
                eprintln!("inside {d}: {} ({} within roundoff of the boundary)", c.inside, c.near_boundary);
            }
            Ok(exit::SUCCESS)
        }
        Command::Bench(args) => {
            let manifest = Manifest::load(&args.manifest)?;
            let rows = bench_table(&manifest);
            print!("{}", format_table(&rows));
            if let Some(p) = &args.json {
                write_json(Some(p), &rows)?;
            }
            Ok(exit::SUCCESS)
        }
        Command::Mg(a) => {
            let cfg = MgConfig {
                n: a.n,
                re: a.re,
                upwind: a.upwind,
                levels: a.levels,
                kind: match a.cycle {
                    CycleArg::V => CycleKind::V,
                    CycleArg::W => CycleKind::W,
                },
                smoother: a.smoother,
                pre_smooth: a.pre,
                post_smooth: a.post,
                omega: a.omega,
                ks: a.ks,
                nev: a.nev,
                rougher_q: a.rougher_q,
                seed: a.seed,
                tol: a.tol,
                max_cycles: a.max_cycles,
            };
            let report = run_mg(&cfg)?;
            write_json(a.output.as_ref(), &report)?;
            eprintln!(
                "{} cycles, relres {:.2e}, converged={}",
                report.solve.iterations, report.solve.final_relres, report.solve.converged
            );
            Ok(if report.solve.converged { exit::SUCCESS } else { exit::NOT_CONVERGED })
        }
        Command::Gen(a) => {
            let spec = ConvDiffSpec::new(a.n, a.re).with_upwind(a.upwind);
            let (m, b) = convdiff_matrix(&spec).map_err(|e| CliError::input(Stage::Config, e))?;
            let create = |p: &PathBuf| {
                std::fs::File::create(p).map(std::io::BufWriter::new).map_err(|e| CliError::input(Stage::Output, e))
            };
            mm_write(&m, create(&a.out)?).map_err(|e| CliError::input(Stage::Output, e))?;
            if let Some(p) = &a.rhs {
                mm_write_vector(&b, create(p)?).map_err(|e| CliError::input(Stage::Output, e))?;
            }
            Ok(exit::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
