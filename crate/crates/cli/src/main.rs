use std::process::ExitCode;

fn main() -> ExitCode {
    match vlattice_cli::run(std::env::args_os()) {
        Ok(report) => {
            println!("{}", report.to_json());
            eprintln!("{}", report.summary());
            ExitCode::from(report.exit_code as u8)
        }
        Err(shown) => {
            let _ = shown.print();
            ExitCode::SUCCESS
        }
    }
}
