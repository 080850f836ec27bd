use std::io::Write;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let mut stdout = std::io::stdout().lock();
    let code = agspec_cli::run(&args, &mut stdout);
    let _ = stdout.flush();
    std::process::exit(code);
}
