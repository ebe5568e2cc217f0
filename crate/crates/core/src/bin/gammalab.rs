fn main() {
    if let Some(n) = std::env::var("GAMMALAB_THREADS")
        .ok()
        .and_then(|v| v.parse().ok())
    {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    std::process::exit(gammalab::cli::run_from_args(std::env::args_os()));
}
