use std::io::IsTerminal;

use wd_epsilon::frontend::cli;

fn main() {
    let stdout = std::io::stdout();
    let color = std::env::var_os("NO_COLOR").is_none() && stdout.is_terminal();
    let code = cli::run(
        std::env::args_os(),
        &mut stdout.lock(),
        &mut std::io::stderr(),
        color,
    );
    std::process::exit(code);
}
