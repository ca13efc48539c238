use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = skeltrop::execute(std::env::args_os());
    print!("{}", outcome.stdout);
    ExitCode::from(outcome.exit)
}
