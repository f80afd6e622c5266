use clap::Parser;

fn main() {
    let cli = ncforce_cli::Cli::parse();
    std::process::exit(ncforce_cli::run(cli));
}
