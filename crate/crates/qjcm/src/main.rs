use clap::Parser;

fn main() {
    if let Ok(threads) = std::env::var("QJCM_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
    let cli = qjcm::cli::Cli::parse();
    std::process::exit(qjcm::cli::run(cli));
}
