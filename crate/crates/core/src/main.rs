fn main() -> std::process::ExitCode {
    bblab::cli::main()
}
