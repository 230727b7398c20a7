use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ncforms::exec;
use ncforms::frontend::{self, Command, Options, PRESETS};

#[derive(Parser)]
#[command(name = "ncforms", version, about = "Exact checks for hom-connections and integral forms")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// Longest normal word used by truncated checks.
    #[arg(long, global = true)]
    max_len: Option<usize>,
    /// Degree bound for overlap checks.
    #[arg(long, global = true)]
    max_degree: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Random cases per property check.
    #[arg(long, global = true, default_value_t = 100)]
    cases: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads; 1 runs everything sequentially.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Record wall time per check (makes reports non-reproducible).
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Cmd {
    /// Every suite that applies to the input.
    Verify { input: String },
    /// Free-ness identities for σ, σ̄, σ̂.
    InvertSigma { input: String },
    /// Hom-connection law, optionally ∇ of a hom-form literal.
    Nabla {
        input: String,
        #[arg(long)]
        hom: Option<String>,
    },
    /// Curvature checks, optionally F of a hom-form literal.
    Flatness {
        input: String,
        #[arg(long)]
        hom: Option<String>,
    },
    /// Ranks of ∇ per block and integral values.
    Integral {
        input: String,
        #[arg(long, allow_hyphen_values = true)]
        degree: Option<i64>,
    },
    /// Ladder between the de Rham and integral complexes.
    IsoCheck { input: String },
    /// Ω¹ = A dA witnesses.
    Density { input: String },
    Sphere {
        #[command(subcommand)]
        action: SphereCmd,
    },
    Matrix {
        #[command(subcommand)]
        action: MatrixCmd,
    },
    Preset {
        #[command(subcommand)]
        action: PresetCmd,
    },
}

#[derive(Subcommand)]
enum SphereCmd {
    /// Descended hom-connection on the Podleś sphere.
    Verify {
        #[arg(default_value = "preset:podles-sphere")]
        input: String,
    },
}

#[derive(Subcommand)]
enum MatrixCmd {
    /// Inner calculus on M_n.
    Verify {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(default_value = "preset:matrix-m2")]
        input: String,
    },
}

#[derive(Subcommand)]
enum PresetCmd {
    /// Built-in presets.
    List,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut opts = Options {
        max_len: cli.max_len,
        max_degree: cli.max_degree,
        seed: cli.seed,
        cases: cli.cases,
        timings: cli.timings,
        ..Options::default()
    };
    let (cmd, input) = match cli.command {
        Cmd::Verify { input } => (Command::Verify, input),
        Cmd::InvertSigma { input } => (Command::InvertSigma, input),
        Cmd::Nabla { input, hom } => {
            opts.hom = hom;
            (Command::Nabla, input)
        }
        Cmd::Flatness { input, hom } => {
            opts.hom = hom;
            (Command::Flatness, input)
        }
        Cmd::Integral { input, degree } => {
            opts.degree = degree;
            (Command::Integral, input)
        }
        Cmd::IsoCheck { input } => (Command::IsoCheck, input),
        Cmd::Density { input } => (Command::Density, input),
        Cmd::Sphere { action: SphereCmd::Verify { input } } => (Command::SphereVerify, input),
        Cmd::Matrix { action: MatrixCmd::Verify { n, input } } => {
            if n != 2 {
                eprintln!("error: only n = 2 is available (the Pauli basis)");
                return ExitCode::from(2);
            }
            (Command::MatrixVerify, input)
        }
        Cmd::Preset { action: PresetCmd::List } => {
            for p in &PRESETS {
                println!("{:<14} {}", p.name, p.description);
            }
            return ExitCode::SUCCESS;
        }
    };

    if cli.jobs == Some(1) {
        exec::set_sequential(true);
    }
    let result = exec::with_jobs(cli.jobs, || frontend::run(cmd, &input, &opts));
    match result {
        Ok(report) => {
            match cli.format {
                Format::Json => println!("{}", report.to_json()),
                Format::Text => print!("{}", report.to_text()),
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
