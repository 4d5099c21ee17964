use clap::Parser;

fn main() {
    let cli = bellcheck::cli::Cli::parse();
    std::process::exit(bellcheck::cli::run(cli));
}
