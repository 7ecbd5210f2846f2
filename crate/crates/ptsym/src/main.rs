fn main() -> std::process::ExitCode {
    ptsym::cli::main_with_args(std::env::args_os())
}
