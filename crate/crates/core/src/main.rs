use clap::Parser;
use hamming_witness::cli::{main_with, Cli};

fn main() {
    // clap exits with 2 on usage errors
    let cli = Cli::parse();
    std::process::exit(main_with(cli));
}
