use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(janus_core::cli::main_entry() as u8)
}
