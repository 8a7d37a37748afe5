fn main() -> std::process::ExitCode {
    homogen::cli::main()
}
