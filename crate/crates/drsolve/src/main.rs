use std::io::Write;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let result = drsolve::dispatch(&args);
    print!("{}", result.stdout);
    let _ = std::io::stdout().flush();
    eprint!("{}", result.stderr);
    std::process::exit(result.code);
}
