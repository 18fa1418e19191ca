use clap::Parser;
use dirac_cli::args::Cli;

fn main() {
    let cli = Cli::parse();
    if let Err(e) = dirac_cli::run(&cli) {
        eprintln!("dirac: {e}");
        std::process::exit(e.exit_code());
    }
}
