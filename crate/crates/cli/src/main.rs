fn main() {
    std::process::exit(csi_ibbs_cli::cli::run());
}
