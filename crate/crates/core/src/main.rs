fn main() {
    std::process::exit(agreement_lab::cli::main_entry());
}
