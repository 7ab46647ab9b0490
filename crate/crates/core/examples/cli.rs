//! The command-line front end driven in-process.

fn main() {
    let mut out = Vec::new();
    let mut err = Vec::new();
    for args in [&["kleinlab", "witt", "5"][..], &["kleinlab", "kummer"], &["kleinlab", "volume", "--terms", "100000"]] {
        let code = kleinlab::cli::cli_run(args.iter().copied(), &mut out, &mut err);
        println!("$ {} -> exit {code}", args[1..].join(" "));
        print!("{}", String::from_utf8_lossy(&out));
        out.clear();
    }
}
