use clap::Parser;

fn main() {
    let cli = ckm::cli::Cli::parse();
    let code = ckm::cli::run(cli, &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    std::process::exit(code);
}
