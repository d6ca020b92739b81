use clap::Parser;

fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("SPIRALKIT_LOG", "warn")).init();
    let code = spiralkit::cli::run(spiralkit::cli::Cli::parse());
    std::process::exit(code);
}
