use std::io;
use std::process::ExitCode;
use std::thread;

// Deep formulas are dropped recursively, so the work runs on a thread with
// room for that.
const STACK_SIZE: usize = 1 << 30;

fn main() -> ExitCode {
    let worker = thread::Builder::new()
        .stack_size(STACK_SIZE)
        .spawn(|| ocbsl::cli::run(std::env::args_os(), &mut io::stdout().lock(), &mut io::stderr().lock()))
        .expect("spawn worker thread");
    let code = worker.join().unwrap_or(101);
    ExitCode::from(code as u8)
}
