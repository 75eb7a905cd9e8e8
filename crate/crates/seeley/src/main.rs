use std::process::ExitCode;

use clap::Parser;

use seeley::args::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = seeley::init_threads()
        .and_then(|()| seeley::run(cli.command))
        .and_then(|outcome| seeley::emit(&outcome));
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("seeley: verification failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("seeley: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
