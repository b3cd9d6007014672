//! TOML run manifests.
//!
//! ```toml
//! command = "two-ends"
//! args = []            # positional arguments, e.g. ["basic"]
//! seed = 0
//! output = "out"       # directory, relative to the manifest
//! [inputs]
//! tubes = "family.tubes"
//! [params]
//! delta = 0.004
//! Delta = 0.125
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::Parser;
use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::cli::{Cli, Command};
use crate::commands::{execute, write_file};
use crate::failure::{Failure, Outcome};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub command: String,
    #[serde(default)]
    pub args: Vec<String>,
    #[serde(default)]
    pub seed: u64,
    pub output: PathBuf,
    #[serde(default)]
    pub inputs: BTreeMap<String, PathBuf>,
    #[serde(default)]
    pub params: BTreeMap<String, toml::Value>,
}

impl Manifest {
    /// Command line equivalent, with paths resolved against `base`.
    pub fn argv(&self, base: &Path) -> Outcome<Vec<String>> {
        if self.command == "run" {
            return Err(Failure::Usage("a manifest cannot run another manifest".into()));
        }
        let mut argv = vec!["heilbronn".to_string(), self.command.clone()];
        argv.extend(self.args.iter().cloned());
        argv.push("--seed".into());
        argv.push(self.seed.to_string());
        for (k, p) in &self.inputs {
            let p = base.join(p);
            if !p.exists() {
                return Err(Failure::Validation(format!("input {k} = {} does not exist", p.display())));
            }
            argv.push(format!("--{k}"));
            argv.push(p.display().to_string());
        }
        for (k, v) in &self.params {
            let v = match v {
                toml::Value::Boolean(true) => {
                    argv.push(format!("--{k}"));
                    continue;
                }
                toml::Value::Boolean(false) => continue,
                toml::Value::String(s) => s.clone(),
                toml::Value::Integer(i) => i.to_string(),
                toml::Value::Float(f) => f.to_string(),
                other => return Err(Failure::Usage(format!("parameter {k} must be a scalar, got {other}"))),
            };
            argv.push(format!("--{k}"));
            argv.push(v);
        }
        Ok(argv)
    }
}

fn primary_name(cmd: &Command) -> String {
    match cmd {
        Command::Gen(g) => format!("gen.{}", g.kind.extension()),
        c => format!("{}.csv", c.name()),
    }
}

/// Runs a manifest; returns the exit code. The primary output goes to
/// `<output>/<command>.csv` (or `gen.<ext>`), the run log to `run.log`, and
/// one line per run is appended to `ledger.csv`.
pub fn run_manifest(path: &Path) -> i32 {
    let start = Instant::now();
    let bytes = match std::fs::read(path) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("validation failure: {}: {e}", path.display());
            return 3;
        }
    };
    let hash = hex::encode(Sha256::digest(&bytes));
    let manifest: Manifest = match std::str::from_utf8(&bytes)
        .map_err(|e| e.to_string())
        .and_then(|s| toml::from_str(s).map_err(|e| e.to_string()))
    {
        Ok(m) => m,
        Err(e) => {
            eprintln!("usage error: bad manifest {}: {e}", path.display());
            return 2;
        }
    };
    let base = path.parent().unwrap_or(Path::new("."));
    let out_dir = base.join(&manifest.output);
    let result = run_parsed(&manifest, base, &out_dir);
    let code = match &result {
        Ok(c) => *c,
        Err(f) => {
            eprintln!("{f}");
            f.code()
        }
    };
    let wall = start.elapsed().as_secs_f64();
    let log = format!(
        "version = \"{}\"\ncommand = \"{}\"\nmanifest = \"{}\"\nmanifest_sha256 = \"{hash}\"\nseed = {}\nexit_status = {code}\nwall_time_s = {wall:.6}\n",
        env!("CARGO_PKG_VERSION"),
        manifest.command,
        path.display(),
        manifest.seed,
    );
    let ledger = out_dir.join("ledger.csv");
    let line = format!("{hash},{},{},{code},{wall:.6}\n", manifest.command, manifest.seed);
    let logged = std::fs::create_dir_all(&out_dir)
        .and_then(|_| std::fs::write(out_dir.join("run.log"), log))
        .and_then(|_| {
            use std::io::Write;
            let fresh = !ledger.exists();
            let mut f = std::fs::OpenOptions::new().create(true).append(true).open(&ledger)?;
            if fresh {
                f.write_all(b"manifest_sha256,command,seed,exit_status,wall_time_s\n")?;
            }
            f.write_all(line.as_bytes())
        });
    if let Err(e) = logged {
        eprintln!("warning: could not write run log: {e}");
    }
    code
}

fn run_parsed(m: &Manifest, base: &Path, out_dir: &Path) -> Outcome<i32> {
    let argv = m.argv(base)?;
    let cli = Cli::try_parse_from(&argv).map_err(|e| Failure::Usage(e.to_string().trim_start_matches("error: ").trim_end().to_string()))?;
    let out = cli.out.clone().unwrap_or_else(|| out_dir.join(primary_name(&cli.command)));
    let report = execute(&cli.command, cli.seed, Some(&out))?;
    if !report.stdout_only {
        write_file(&out, &report.table.to_csv())?;
    }
    Ok(report.code)
}
