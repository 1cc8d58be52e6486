use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use torus_isect::bench::{benchmark_sweep, sweep_csv};
use torus_isect::render::trace_image;
use torus_isect::scene::parse_scene;

const EXIT_CONFIG: u8 = 1;
const EXIT_UNSOUND: u8 = 2;

/// Ray-torus intersection renderer and culling benchmark.
#[derive(Parser)]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Render a scene file to a binary PPM.
    Render {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long, default_value = "render.ppm")]
        out: PathBuf,
        /// Write ray statistics as CSV here instead of to stderr.
        #[arg(long)]
        stats: Option<PathBuf>,
        /// Accepted for symmetry with `bench`; rendering draws no random numbers.
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Compare bounding-volume rejection rates across nu = R/r.
    Bench {
        /// Comma-separated list of ratios, each > 1.
        #[arg(long, value_delimiter = ',', required = true)]
        nu: Vec<f64>,
        #[arg(long)]
        rays: u64,
        /// Write the CSV here instead of to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

enum Failure {
    Config(String),
    Unsound(String),
}

fn render(scene: PathBuf, out: PathBuf, stats: Option<PathBuf>) -> Result<(), Failure> {
    let text = fs::read_to_string(&scene).map_err(|e| Failure::Config(format!("{}: {e}", scene.display())))?;
    let cfg = parse_scene(&text).map_err(|e| Failure::Config(format!("{}: {e}", scene.display())))?;
    let (image, record) = trace_image(&cfg).map_err(|e| Failure::Config(e.to_string()))?;

    let file = File::create(&out).map_err(|e| Failure::Config(format!("{}: {e}", out.display())))?;
    image
        .write_ppm(BufWriter::new(file))
        .map_err(|e| Failure::Config(format!("{}: {e}", out.display())))?;
    match stats {
        Some(path) => {
            fs::write(&path, record.to_csv()).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?
        }
        None => eprint!("{}", record.to_csv()),
    }
    Ok(())
}

fn bench(nu: Vec<f64>, rays: u64, out: Option<PathBuf>, seed: u64) -> Result<(), Failure> {
    let rows = benchmark_sweep(&nu, rays, seed).map_err(|e| Failure::Config(e.to_string()))?;
    let csv = sweep_csv(&rows);
    match out {
        Some(path) => fs::write(&path, &csv).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?,
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(csv.as_bytes())
                .map_err(|e| Failure::Config(e.to_string()))?;
        }
    }

    let bad: Vec<_> = rows.iter().flat_map(|r| &r.false_rejects).collect();
    if let Some(first) = bad.first() {
        return Err(Failure::Unsound(format!(
            "{} false reject(s); first: nu={} bundle={} ray {} anchor={:?} dir={:?}",
            bad.len(),
            first.nu,
            first.bundle,
            first.index,
            first.ray.anchor,
            first.ray.dir
        )));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Render { scene, out, stats, seed: _ } => render(scene, out, stats),
        Command::Bench { nu, rays, out, seed } => bench(nu, rays, out, seed),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::Unsound(msg)) => {
            eprintln!("soundness violation: {msg}");
            ExitCode::from(EXIT_UNSOUND)
        }
    }
}
