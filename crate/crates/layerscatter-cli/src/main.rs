mod commands;
mod report;

use clap::Parser;

fn main() {
    let cli = commands::Cli::parse();
    let code = commands::run(cli);
    std::process::exit(code);
}
