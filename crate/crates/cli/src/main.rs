use std::process::ExitCode;

use clap::Parser;

use losmimo_cli::{run, Cli};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli, &mut std::io::stdout().lock()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("losmimo: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
