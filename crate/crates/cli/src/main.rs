use std::io::Write;

fn main() {
    if let Some(n) = std::env::var("QHH_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            rayon::ThreadPoolBuilder::new().num_threads(n).build_global().ok();
        }
    }
    let out = qhh_cli::run(std::env::args().skip(1));
    std::io::stdout().write_all(out.stdout.as_bytes()).ok();
    std::io::stderr().write_all(out.stderr.as_bytes()).ok();
    std::process::exit(out.code);
}
