use std::process::ExitCode;

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let mut out = std::io::stdout();
    let code = absup_cli::run(&args, &mut out);
    ExitCode::from(code as u8)
}
