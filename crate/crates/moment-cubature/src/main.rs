use moment_cubature::cli;

fn main() {
    std::process::exit(cli::run());
}
