use clap::Parser;

fn main() {
    let cli = borank_cli::Cli::parse();
    let code = match borank_cli::run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            borank_cli::exit_code(&e)
        }
    };
    std::process::exit(code);
}
