//! Command line driver: `compile` (full pipeline with emitters), `check`
//! (pipeline without emitters), `libdoc` (library listing). Exit codes:
//! 0 ok, 1 check failures, 2 compile error, 3 usage/config error.

use crate::check::{run_checks, Report};
use crate::elaborate::{elaborate, RefinementConfig, DEFAULT_MAX_ITERATIONS};
use crate::error::{Error, Result};
use crate::frontend::load_design;
use crate::model::Design;
use crate::netlist::{emit_dot, emit_json, emit_kicad, flatten};
use crate::stdlib::Library;
use clap::{Args, Parser, Subcommand};
use std::io::Write;
use std::path::{Path as FsPath, PathBuf};

#[derive(Debug, Parser)]
#[command(
    name = "bhdlc",
    about = "Board-level HDL compiler",
    disable_help_subcommand = true
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compile a design and write the requested outputs.
    Compile(CompileArgs),
    /// Compile and run checks without writing netlist outputs.
    Check(CheckArgs),
    /// List the block library.
    Libdoc,
}

#[derive(Debug, Args)]
struct CompileArgs {
    /// Input `.bhdl` source file.
    source: PathBuf,
    /// Name of the top-level block definition.
    #[arg(long)]
    top: String,
    /// Refinement config (JSON with `path` and `class` maps).
    #[arg(long)]
    refinements: Option<PathBuf>,
    /// Write a KiCad-style S-expression netlist here.
    #[arg(long)]
    netlist: Option<PathBuf>,
    /// Write the JSON netlist here.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Write a DOT block diagram here.
    #[arg(long)]
    dot: Option<PathBuf>,
    /// Write the JSON check report here.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Elaboration round budget.
    #[arg(long, default_value_t = DEFAULT_MAX_ITERATIONS)]
    max_iterations: usize,
    /// Hierarchy depth rendered in DOT clusters (0 = unlimited).
    #[arg(long, default_value_t = 0)]
    dot_depth: usize,
}

#[derive(Debug, Args)]
struct CheckArgs {
    source: PathBuf,
    #[arg(long)]
    top: String,
    #[arg(long)]
    refinements: Option<PathBuf>,
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_MAX_ITERATIONS)]
    max_iterations: usize,
}

pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // help/version are not usage errors
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 3,
            };
            if code == 0 {
                let _ = write!(stdout, "{e}");
            } else {
                let _ = write!(stderr, "{e}");
            }
            return code;
        }
    };
    match cli.command {
        Command::Libdoc => {
            let _ = write!(stdout, "{}", libdoc(&Library::standard()));
            0
        }
        Command::Check(args) => {
            let args = CompileArgs {
                source: args.source,
                top: args.top,
                refinements: args.refinements,
                netlist: None,
                json: None,
                dot: None,
                report: args.report,
                max_iterations: args.max_iterations,
                dot_depth: 0,
            };
            run_compile(&args, stdout, stderr)
        }
        Command::Compile(args) => run_compile(&args, stdout, stderr),
    }
}

pub fn libdoc(lib: &Library) -> String {
    let mut out = String::new();
    for name in lib.names() {
        let def = lib.lookup(name).expect("listed name resolves");
        let ports: Vec<String> = lib
            .effective_ports(name)
            .expect("listed name resolves")
            .into_iter()
            .map(|(n, _)| n)
            .collect();
        out.push_str(&format!(
            "{name} {} {} ports: {}\n",
            def.kind_name(),
            def.parent.as_deref().unwrap_or("-"),
            ports.join(", ")
        ));
    }
    out
}

fn run_compile(args: &CompileArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    // usage/config stage: missing inputs and malformed configs are exit 3
    let source = match std::fs::read_to_string(&args.source) {
        Ok(text) => text,
        Err(e) => {
            let _ = writeln!(stderr, "error[E_IO] at {}: {e}", args.source.display());
            return 3;
        }
    };
    let mut lib = Library::standard();
    let config = match load_refinements(args.refinements.as_deref(), &lib) {
        Ok(c) => c,
        Err(e) => {
            let loc = args
                .refinements
                .as_ref()
                .map(|p| p.display().to_string())
                .unwrap_or_default();
            let _ = writeln!(stderr, "error[{}] at {loc}: {e}", e.code());
            return 3;
        }
    };

    let outcome = (|| -> Result<(Design, Report, Library)> {
        load_design(&source, &mut lib)?;
        let design = elaborate(&lib, &args.top, &config, args.max_iterations)?;
        let report = run_checks(&design);
        Ok((design, report, lib))
    })();
    let (design, report, lib) = match outcome {
        Ok(v) => v,
        Err(e) => {
            let loc = match e.location() {
                Some((line, col)) => format!("{}:{line}:{col}", args.source.display()),
                None => args.source.display().to_string(),
            };
            let _ = writeln!(stderr, "error[{}] at {loc}: {e}", e.code());
            return 2;
        }
    };

    let emitted = (|| -> Result<()> {
        if args.netlist.is_some() || args.json.is_some() {
            let netlist = flatten(&design, &lib)?;
            if let Some(path) = &args.netlist {
                write_atomically(path, &emit_kicad(&netlist))?;
            }
            if let Some(path) = &args.json {
                write_atomically(path, &emit_json(&netlist))?;
            }
        }
        if let Some(path) = &args.dot {
            write_atomically(path, &emit_dot(&design, &lib, args.dot_depth)?)?;
        }
        if let Some(path) = &args.report {
            write_atomically(path, &report.to_json())?;
        }
        Ok(())
    })();
    if let Err(e) = emitted {
        let _ = writeln!(
            stderr,
            "error[{}] at {}: {e}",
            e.code(),
            args.source.display()
        );
        return 2;
    }

    let _ = writeln!(
        stdout,
        "checks: {} pass, {} fail, {} unresolved",
        report.summary.pass, report.summary.fail, report.summary.unresolved
    );
    if report.summary.fail > 0 {
        1
    } else {
        0
    }
}

pub fn load_refinements(path: Option<&FsPath>, lib: &Library) -> Result<RefinementConfig> {
    let Some(path) = path else {
        return Ok(RefinementConfig::default());
    };
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(e.to_string()))?;
    let config = RefinementConfig::from_json(&text)?;
    config.validate(lib)?;
    Ok(config)
}

/// Write via a temp file in the same directory plus rename, so a failed
/// compile never leaves a truncated output behind.
fn write_atomically(path: &FsPath, contents: &str) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(&format!(".tmp{}", std::process::id()));
    let tmp = PathBuf::from(tmp);
    std::fs::write(&tmp, contents).map_err(|e| Error::Io(e.to_string()))?;
    std::fs::rename(&tmp, path).map_err(|e| {
        let _ = std::fs::remove_file(&tmp);
        Error::Io(e.to_string())
    })?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn libdoc_lists_stdlib() {
        let text = libdoc(&Library::standard());
        assert!(
            text.contains("BuckConverter abstract PowerConverter ports: pwr_in, pwr_out, gnd\n")
        );
        assert!(text.contains("IndicatorLed generator Block ports: io, gnd\n"));
        let mut lines: Vec<&str> = text.lines().collect();
        let original = lines.clone();
        lines.sort();
        assert_eq!(lines, original);
        assert_eq!(text, libdoc(&Library::standard()));
    }
}
