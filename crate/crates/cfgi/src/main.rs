use std::process::ExitCode;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("CFGI_LOG"))
        .format_timestamp(None)
        .init();
    ExitCode::from(cfgi::cli::run(std::env::args_os()))
}
