fn main() {
    std::process::exit(conway_skein::cli::run());
}
