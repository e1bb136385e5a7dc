use clap::Parser;

use lambdad::cli::{run, Cli};

fn main() {
    let config = Cli::parse().into_config();
    let code = run(&config, &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    std::process::exit(code);
}
