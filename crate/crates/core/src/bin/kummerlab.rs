use std::io::Write;

fn main() {
    let exit = kummerlab::report::cli::run(std::env::args_os());
    if !exit.stdout.is_empty() {
        let mut out = std::io::stdout().lock();
        let _ = out.write_all(exit.stdout.as_bytes());
        let _ = out.flush();
    }
    if !exit.stderr.is_empty() {
        eprint!("{}", exit.stderr);
    }
    std::process::exit(exit.code);
}
