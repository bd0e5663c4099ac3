use clap::Parser;

fn main() {
    let cli = match fmetric_cli::Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                fmetric_cli::EXIT_USAGE
            } else {
                0
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    std::process::exit(fmetric_cli::execute(&cli));
}
