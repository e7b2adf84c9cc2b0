use clap::Parser;

fn main() {
    let cli = superclt::cli::Cli::parse();
    std::process::exit(superclt::cli::run(cli));
}
