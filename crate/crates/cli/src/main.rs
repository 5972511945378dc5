use clap::Parser;

fn main() {
    let cli = match sl2amen_cli::Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage errors are input errors; 2 is reserved for refusals
            std::process::exit(if e.use_stderr() { sl2amen_cli::EXIT_INPUT } else { 0 });
        }
    };
    std::process::exit(sl2amen_cli::run(cli));
}
