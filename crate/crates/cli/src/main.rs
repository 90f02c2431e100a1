use clap::error::ErrorKind;
use clap::Parser;
use offslice_cli::{run, RunConfig, EXIT_CONFIG};

fn main() {
    let config = match RunConfig::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => e.exit(),
        Err(e) => {
            let _ = e.print();
            std::process::exit(EXIT_CONFIG);
        }
    };
    match run(&config) {
        Ok(code) => std::process::exit(code),
        Err(f) => {
            eprintln!("offslice: {}", f.message);
            std::process::exit(f.code);
        }
    }
}
