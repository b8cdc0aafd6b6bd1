use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use netdomain::pipeline::{Outcome, Overrides, Pipeline, PipelineConfig, Stage};
use netdomain::{Error, Result};

/// Run one pipeline stage, or `all` of them in order.
#[derive(Parser, Debug)]
#[command(name = "netdomain", version)]
struct Args {
    /// ingest, measure, assemble, filter, select, report, embed or all
    stage: String,
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    undersample_cap: Option<usize>,
    #[arg(long)]
    auto_project: bool,
    /// Worker threads (default: one per core)
    #[arg(long)]
    jobs: Option<usize>,
}

fn run(args: &Args) -> Result<()> {
    let stages: Vec<Stage> = if args.stage == "all" {
        Stage::ALL.to_vec()
    } else {
        vec![args.stage.parse()?]
    };
    let overrides = Overrides {
        seed: args.seed,
        undersample_cap: args.undersample_cap,
        auto_project: args.auto_project,
    };
    let config = PipelineConfig::load(&args.config, overrides)?;
    let pipeline = Pipeline::new(config)?;
    for stage in stages {
        let run = pipeline.run_stage(stage)?;
        let status = match run.outcome {
            Outcome::Ran => "done",
            Outcome::UpToDate => "up to date",
        };
        println!("{stage}: {status} ({})", &run.artifact.content_digest[..12]);
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = Args::parse();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = args.jobs {
        builder = builder.num_threads(jobs.max(1));
    }
    let result = match builder.build() {
        Ok(pool) => pool.install(|| run(&args)),
        Err(e) => Err(Error::InvalidArgument(e.to_string())),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, Error::PolicyEmpty(_)) {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
