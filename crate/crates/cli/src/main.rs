//! `ampcg`: separators, learners, generators and benchmarks for AMP chain
//! graphs.
//!
//! Exit codes: 0 success, 1 usage error, 2 input or format error,
//! 3 violated algorithmic precondition.

mod graph;
mod io;
mod learn;
mod minsep;
mod synth;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use crate::io::Outcome;

#[derive(Parser)]
#[command(name = "ampcg", version, about = "AMP chain graph toolkit")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Separator queries on a graph file
    #[command(subcommand)]
    Minsep(minsep::MinsepCmd),
    /// Learn a chain graph from data or an oracle
    Learn(learn::LearnArgs),
    /// Generate a random AMP chain graph
    Gen(synth::GenArgs),
    /// Draw a Gaussian sample from a chain graph
    Sample(synth::SampleArgs),
    /// Score a learned graph against the truth
    Eval(synth::EvalArgs),
    /// Run a benchmark grid
    Bench(synth::BenchArgs),
    /// Graph file utilities
    #[command(subcommand)]
    Graph(graph::GraphCmd),
}

fn dispatch(cmd: &Cmd) -> Outcome {
    match cmd {
        Cmd::Minsep(c) => minsep::run(c),
        Cmd::Learn(a) => learn::run(a),
        Cmd::Gen(a) => synth::gen(a),
        Cmd::Sample(a) => synth::sample(a),
        Cmd::Eval(a) => synth::eval(a),
        Cmd::Bench(a) => synth::bench(a),
        Cmd::Graph(c) => graph::run(c),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match dispatch(&cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
