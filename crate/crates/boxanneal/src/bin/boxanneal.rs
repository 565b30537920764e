//! Thin binary wrapper around the library's CLI dispatcher.

fn main() {
    std::process::exit(boxanneal::cli::run(std::env::args_os()));
}
