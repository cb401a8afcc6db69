use clap::Parser;
use discobond::cli::{run, Cli};

fn main() {
    if let Some(n) = std::env::var("DISCOBOND_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    std::process::exit(run(Cli::parse()));
}
