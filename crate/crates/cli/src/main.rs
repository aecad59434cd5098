use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use cosan_cli::{build_plan, render, run, CliError};

fn main() -> ExitCode {
    let plan = match build_plan(std::env::args_os().skip(1)) {
        Ok(plan) => plan,
        Err(CliError::Usage(e)) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            if let CliError::Usage(clap_err) = &e {
                let _ = clap_err.print();
            }
            print!("{}", render(&e.to_json()));
            return ExitCode::from(2);
        }
    };
    let exec = run(&plan);
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(render(&exec.document).as_bytes());
    let _ = stdout.flush();
    ExitCode::from(exec.code as u8)
}
