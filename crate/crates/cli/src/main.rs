use std::path::PathBuf;
use std::process::ExitCode;

fn main() -> ExitCode {
    let mut argv = Vec::new();
    for a in std::env::args_os() {
        match a.into_string() {
            Ok(s) => argv.push(s),
            Err(a) => {
                eprintln!("error: argument is not valid UTF-8: {a:?}");
                return ExitCode::from(cmpl::EXIT_INPUT as u8);
            }
        }
    }
    let env = std::env::var_os("CMPL_CACHE_DIR").map(PathBuf::from);
    let code = cmpl::run(&argv, env, &mut std::io::stdout(), &mut std::io::stderr());
    ExitCode::from(code as u8)
}
