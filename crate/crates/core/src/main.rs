use std::process::ExitCode;

fn main() -> ExitCode {
    let out = wblow::iface::run_cli(std::env::args_os());
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    ExitCode::from(out.code as u8)
}
