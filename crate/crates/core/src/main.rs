fn main() {
    std::process::exit(oscar::cli::run(std::env::args_os()));
}
