use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use foliage::cli::{run_text, Op, Options};
use foliage::par::Exec;

/// Vector fields, foliations and Anosov-suspension checks.
#[derive(Parser, Debug)]
#[command(name = "foliage", version)]
struct Args {
    /// Operation to run.
    #[arg(value_enum)]
    op: Op,

    /// Problem file; read from standard input when absent.
    file: Option<PathBuf>,

    /// Seed for the random samples of `anosov`.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Truncation order of `flow-series`.
    #[arg(long, default_value_t = 8)]
    order: usize,

    /// Grid box size for the leaf density check.
    #[arg(long, default_value_t = 0.05)]
    epsilon: f64,

    /// Length of the traversed leaf.
    #[arg(long = "arc-length", default_value_t = 2000.0)]
    arc_length: f64,

    /// Number of random states for the contraction bounds.
    #[arg(long, default_value_t = 50)]
    samples: usize,

    /// Time horizon for the contraction bounds.
    #[arg(long = "t-max", default_value_t = 100.0)]
    t_max: f64,

    /// Acting field; defaults to the first declared field.
    #[arg(long)]
    field: Option<String>,

    /// Exchange the two coordinates before the planar analysis.
    #[arg(long)]
    swap: bool,

    /// Run sampling on a single thread.
    #[arg(long)]
    sequential: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let text = if args.op.needs_problem() {
        let read = match &args.file {
            Some(path) => std::fs::read_to_string(path),
            None => {
                let mut s = String::new();
                std::io::stdin().read_to_string(&mut s).map(|_| s)
            }
        };
        match read {
            Ok(t) => t,
            Err(e) => {
                eprintln!("foliage: cannot read problem: {e}");
                return ExitCode::FAILURE;
            }
        }
    } else {
        String::new()
    };
    let opts = Options {
        seed: args.seed,
        order: args.order,
        epsilon: args.epsilon,
        arc_length: args.arc_length,
        samples: args.samples,
        t_max: args.t_max,
        field: args.field,
        swap: args.swap,
        exec: if args.sequential {
            Exec::Sequential
        } else {
            Exec::Parallel
        },
    };
    let report = run_text(args.op, &text, &opts);
    print!("{}", report.to_json());
    if report.is_ok() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
