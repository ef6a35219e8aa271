mod args;
mod commands;
mod output;

use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Global};
use diophlab::{Config, Error, Result};

fn read_config(path: &Path) -> Result<Config> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("cannot read config {}: {e}", path.display())))?;
    Config::from_toml(&text)
}

/// Defaults, then the DIOPHLAB_CONFIG file or `--config`, then flags.
fn effective_config(g: &Global) -> Result<Config> {
    let mut cfg = match (&g.config, std::env::var_os("DIOPHLAB_CONFIG")) {
        (Some(p), _) => read_config(p)?,
        (None, Some(p)) if !p.is_empty() => read_config(Path::new(&p))?,
        _ => Config::default(),
    };
    if let Some(p) = g.precision {
        cfg.precision_bits = p;
        cfg.precision_cap = cfg.precision_cap.max(p);
    }
    if let Some(t) = g.tolerance {
        cfg.tolerance = t;
    }
    if let Some(h) = g.height {
        cfg.height_bound = h;
    }
    if let Some(d) = g.dmax {
        cfg.degree_bound = d;
    }
    if let Some(c) = g.enumeration_cap {
        cfg.enumeration_cap = c;
    }
    if let Some(s) = g.seed {
        cfg.seed = s;
    }
    if g.sequential {
        cfg.parallel = false;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes());
    let _ = out.flush();
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => ExitCode::SUCCESS,
                _ => ExitCode::from(2),
            };
        }
    };
    let name = commands::command_name(&cli.command);
    let pretty = cli.global.pretty;
    let cfg = match effective_config(&cli.global) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("diophlab: {e}");
            emit(&output::failure(&name, &Config::default(), &e, pretty));
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match commands::run(&cli.command, &cfg) {
        Ok(v) => {
            emit(&output::success(&name, &cfg, &v, pretty));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("diophlab: {e}");
            emit(&output::failure(&name, &cfg, &e, pretty));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
