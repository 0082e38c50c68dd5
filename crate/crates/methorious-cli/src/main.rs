use clap::Parser;

fn main() {
    let cli = methorious_cli::cli::Cli::parse();
    std::process::exit(methorious_cli::cli::run(cli));
}
