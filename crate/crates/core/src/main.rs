use std::io::{stderr, stdout};

fn main() {
    let argv: Vec<String> = std::env::args().collect();
    let code = limcycle::cli::dispatch(&argv, &mut stdout().lock(), &mut stderr().lock());
    std::process::exit(code);
}
