mod cli;
mod commands;
mod failure;
mod manifest;
mod table;

use clap::Parser;

use cli::{Cli, Command};

fn configure_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("HEILBRONN_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("HEILBRONN_THREADS must be a positive integer, got {v:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn real_main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("usage error: {e}");
        return 2;
    }
    if let Command::Run(r) = &cli.command {
        return manifest::run_manifest(&r.manifest);
    }
    match commands::execute(&cli.command, cli.seed, cli.out.as_deref()) {
        Ok(rep) => {
            let csv = rep.table.to_csv();
            match (&cli.out, rep.stdout_only) {
                (Some(path), false) => {
                    if let Err(f) = commands::write_file(path, &csv) {
                        eprintln!("{f}");
                        return f.code();
                    }
                }
                _ => print!("{csv}"),
            }
            rep.code
        }
        Err(f) => {
            eprintln!("{f}");
            f.code()
        }
    }
}

fn main() {
    std::process::exit(real_main());
}
