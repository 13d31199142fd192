use clap::Parser;
use optlim::cli::{run, Cli};

fn main() {
    std::process::exit(run(Cli::parse()));
}
