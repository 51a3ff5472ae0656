use clap::Parser;
use graphsplice_core::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let code = run(cli, &mut out);
    drop(out);
    std::process::exit(code);
}
