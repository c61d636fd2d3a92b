use clap::Parser;
use zrp_cli::args::Cli;

fn main() {
    let cli = Cli::parse();
    let (mut out, mut err) = (std::io::stdout().lock(), std::io::stderr());
    if let Err(e) = zrp_cli::run(cli, &mut out, &mut err) {
        eprintln!("error: {e}");
        std::process::exit(match e {
            zrp_cli::CliError::Verification { .. } => 1,
            _ => 2,
        });
    }
}
