use clap::Parser;
use tdm_cli::Cli;

fn main() {
    let cli = Cli::parse();
    let code = match tdm_cli::run(
        &cli,
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    ) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("tdm: {e}");
            e.exit_code()
        }
    };
    std::process::exit(code);
}
