use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let (code, out) = leavitt_cli::run(std::env::args_os());
    // A closed pipe (e.g. `| head`) is not an error worth reporting.
    let _ = if code == 0 {
        writeln!(std::io::stdout(), "{out}")
    } else {
        writeln!(std::io::stderr(), "{out}")
    };
    ExitCode::from(code as u8)
}
