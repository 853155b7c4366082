use std::process::exit;

fn main() {
    exit(polysub::cli::dispatch(std::env::args()));
}
