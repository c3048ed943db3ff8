fn main() -> std::process::ExitCode {
    hopfdouble::cli::main_with(std::env::args_os())
}
