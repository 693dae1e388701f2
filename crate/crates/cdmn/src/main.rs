use clap::Parser;

fn main() {
    let cli = cdmn::cli::Cli::parse();
    let code = cdmn::cli::run(&cli, &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    std::process::exit(code);
}
