//! Command-line front end for `corescope`: configuration, file formats and
//! report writers.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::Path;

use clap::{Arg, ArgAction, ArgMatches};

pub use config::{Command, RunConfig};
pub use error::{CliError, Result};

pub fn load_graph(path: &Path) -> Result<corescope::Graph> {
    let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
    corescope::generators::load_edge_list(&text).map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))
}

fn cli() -> clap::Command {
    let mut app = clap::Command::new("corescope")
        .about("Geodesic traffic, asymptotic cores and boundary measures on growing graph families")
        .version(env!("CARGO_PKG_VERSION"))
        .subcommand_required(true)
        .arg_required_else_help(true);
    for cmd in Command::ALL {
        let mut sub = clap::Command::new(cmd.name()).about(cmd.about()).arg(
            Arg::new("config")
                .long("config")
                .value_name("FILE")
                .action(ArgAction::Set)
                .help("key=value file; flags override its values"),
        );
        for (key, help) in config::KEYS {
            sub = sub.arg(Arg::new(*key).long(*key).value_name("VALUE").action(ArgAction::Set).help(*help));
        }
        app = app.subcommand(sub);
    }
    app
}

fn flags(m: &ArgMatches) -> BTreeMap<String, String> {
    config::KEYS.iter().filter_map(|(k, _)| m.get_one::<String>(k).map(|v| (k.to_string(), v.clone()))).collect()
}

/// Parses arguments (including the program name) into a resolved config.
pub fn parse_args<I, T>(args: I) -> Result<RunConfig>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = cli().try_get_matches_from(args).map_err(|e| match e.kind() {
        clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => CliError::Usage(String::new()),
        _ => {
            let text = e.to_string();
            CliError::Usage(text.trim_start_matches("error: ").trim_end().to_string())
        }
    })?;
    let (name, sub) = matches.subcommand().expect("subcommand is required");
    let command = Command::from_name(name).expect("registered subcommand");
    let file = match sub.get_one::<String>("config") {
        Some(path) => {
            let text =
                std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("config file {path}: {e}")))?;
            config::parse_config_text(&text, path)?
        }
        None => BTreeMap::new(),
    };
    RunConfig::resolve(command, file, flags(sub))
}

/// Runs the CLI and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<T> = args.into_iter().collect();
    if let Err(e) = cli().try_get_matches_from(args.clone()) {
        if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) {
            let _ = e.print();
            return 0;
        }
    }
    match parse_args(args).and_then(|cfg| commands::run(&cfg)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
