fn main() -> std::process::ExitCode {
    hankelops::cli::main()
}
