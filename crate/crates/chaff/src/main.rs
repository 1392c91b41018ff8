use clap::error::ErrorKind;
use clap::Parser;

fn main() {
    let cli = match chaff::cli::Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1, // bad arguments are usage errors
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    std::process::exit(chaff::cli::run(cli));
}
