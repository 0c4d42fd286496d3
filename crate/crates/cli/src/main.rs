use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let out = qexp_cli::run(std::env::args_os());
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(out.stdout.as_bytes());
    let _ = stdout.flush();
    if let Some(msg) = &out.stderr {
        let msg = msg.trim_end();
        eprintln!("{msg}");
    }
    ExitCode::from(out.code as u8)
}
