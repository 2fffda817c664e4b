fn main() -> std::process::ExitCode {
    dpfilter::cli::main_entry()
}
