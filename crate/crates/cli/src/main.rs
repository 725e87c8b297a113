use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Arg, ArgMatches, Command as ClapCommand};

use qnas_cli::{execute, CliError, Command, RunManifest, Settings};

fn cli() -> ClapCommand {
    let out = Arg::new("out")
        .long("out")
        .value_name("DIR")
        .value_parser(clap::value_parser!(PathBuf))
        .required(true)
        .help("output directory");
    let mut app = ClapCommand::new("qnas")
        .version(env!("CARGO_PKG_VERSION"))
        .about("Training-free quantum circuit architecture search")
        .subcommand_required(true)
        .arg_required_else_help(true);
    for cmd in Command::ALL {
        let mut sub = ClapCommand::new(cmd.name())
            .about(cmd.about())
            .arg(
                Arg::new("config")
                    .long("config")
                    .value_name("FILE")
                    .value_parser(clap::value_parser!(PathBuf))
                    .help("flat key = value settings file; flags take precedence"),
            )
            .arg(out.clone());
        for (key, default, help) in cmd.keys() {
            let help = if default.is_empty() {
                help.to_string()
            } else {
                format!("{help} [default: {default}]")
            };
            let mut arg = Arg::new(key).long(key).value_name("VALUE").help(help);
            if key.contains('_') {
                arg = arg.alias(key.replace('_', "-"));
            }
            sub = sub.arg(arg);
        }
        app = app.subcommand(sub);
    }
    app.subcommand(
        ClapCommand::new("replay")
            .about("Re-run the command recorded in a run manifest")
            .arg(
                Arg::new("manifest")
                    .required(true)
                    .value_parser(clap::value_parser!(PathBuf)),
            )
            .arg(out),
    )
}

fn settings_from(cmd: Command, m: &ArgMatches) -> Result<Settings, CliError> {
    let mut s = Settings::new(cmd);
    if let Some(path) = m.get_one::<PathBuf>("config") {
        s.apply_file(path)?;
    }
    for (key, _, _) in cmd.keys() {
        if let Some(v) = m.get_one::<String>(key) {
            s.set(key, v)?;
        }
    }
    Ok(s)
}

fn run() -> Result<(), CliError> {
    let matches = cli().get_matches();
    let (name, sub) = matches.subcommand().expect("subcommand required");
    let out = sub.get_one::<PathBuf>("out").expect("required").clone();
    let settings = if name == "replay" {
        RunManifest::load(sub.get_one::<PathBuf>("manifest").expect("required"))?.settings()?
    } else {
        settings_from(name.parse()?, sub)?
    };
    let outcome = execute(&settings, &out)?;
    println!("{}", serde_json::to_string_pretty(&outcome.summary)?);
    Ok(())
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qnas: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
