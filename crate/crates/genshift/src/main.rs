use std::process::ExitCode;

use genshift::Exit;

fn main() -> ExitCode {
    let stdout = std::io::stdout();
    match genshift::run(std::env::args_os().collect(), &mut stdout.lock()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Exit::Info(text)) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(Exit::Usage(msg)) => {
            eprintln!("genshift: usage error: {msg} (see --help)");
            ExitCode::from(2)
        }
        Err(Exit::Failure(msg)) => {
            eprintln!("genshift: error: {msg}");
            ExitCode::from(1)
        }
    }
}
