fn main() {
    std::process::exit(analytic_content::cli::run(std::env::args_os()));
}
