fn main() -> std::process::ExitCode {
    tvkit::cli::run(std::env::args_os())
}
