use std::process::ExitCode;

fn main() -> ExitCode {
    let stdout = std::io::stdout();
    match holemap::cli::run(std::env::args_os(), &mut stdout.lock()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("holemap: {e}");
            ExitCode::from(1)
        }
    }
}
