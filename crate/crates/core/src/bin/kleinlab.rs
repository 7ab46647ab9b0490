fn main() {
    let code = kleinlab::cli::cli_run(std::env::args_os(), &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}
