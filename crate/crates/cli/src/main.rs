use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use oddjacobi::algebroid::{algebroid_chain, weight_report};
use oddjacobi::VerificationReport;
use oddjacobi_cli::catalog::{self, NAMES};
use oddjacobi_cli::emit::EXIT_INVALID;
use oddjacobi_cli::{datafile, elab, elaborate, emit, exit_code, parse, parse::parse_expr, run, Format, Options};

#[derive(Parser)]
#[command(name = "oddjacobi", version, about = "Check odd Jacobi structures written in a small DSL")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(clap::Args)]
struct RunArgs {
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
    /// Seed for the random sample triples.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Maximum degree of the random sample functions.
    #[arg(long, default_value_t = 3)]
    max_degree: u32,
    /// Run directives on separate threads.
    #[arg(long)]
    parallel: bool,
}

impl RunArgs {
    fn options(&self) -> Options {
        Options {
            seed: self.seed,
            max_degree: self.max_degree,
            parallel: self.parallel,
            ..Options::default()
        }
    }

    fn format(&self) -> Format {
        match self.format {
            FormatArg::Text => Format::Text,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run every directive of a DSL file.
    Verify {
        file: PathBuf,
        #[command(flatten)]
        args: RunArgs,
    },
    /// List or run the built-in examples.
    Examples {
        #[command(subcommand)]
        action: ExamplesAction,
    },
    /// Print the odd Jacobi bracket of two functions under a structure of a DSL file.
    Bracket {
        file: PathBuf,
        name: String,
        f: String,
        g: String,
    },
    /// Check algebroid structure functions given as a plain data file.
    Algebroid {
        file: PathBuf,
        #[command(flatten)]
        args: RunArgs,
    },
}

#[derive(Subcommand)]
enum ExamplesAction {
    List,
    /// Run an example, e.g. `odd_contact(2)`.
    Run {
        name: String,
        #[command(flatten)]
        args: RunArgs,
        /// Print the DSL source instead of running it.
        #[arg(long)]
        source: bool,
    },
}

fn fail(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_INVALID as u8)
}

fn read(file: &PathBuf) -> Result<String, ExitCode> {
    std::fs::read_to_string(file).map_err(|e| fail(format!("{}: {e}", file.display())))
}

fn report(reports: &[VerificationReport], format: Format) -> ExitCode {
    print!("{}", emit(reports, format));
    ExitCode::from(exit_code(reports) as u8)
}

fn verify(source: &str, args: &RunArgs) -> ExitCode {
    let program = match parse(source).and_then(|m| elaborate(&m)) {
        Ok(p) => p,
        Err(e) => return fail(e),
    };
    report(&run(&program, &args.options()), args.format())
}

fn bracket(source: &str, name: &str, f: &str, g: &str) -> ExitCode {
    let program = match parse(source).and_then(|m| elaborate(&m)) {
        Ok(p) => p,
        Err(e) => return fail(e),
    };
    let Some(b) = program.structure(name) else {
        return fail(format!("unknown structure `{name}`"));
    };
    let Some(j) = b.value.jacobi() else {
        return fail(format!("`{name}` has no bracket"));
    };
    let args = match (parse_expr(f), parse_expr(g)) {
        (Ok(f), Ok(g)) => (f, g),
        (Err(e), _) | (_, Err(e)) => return fail(e),
    };
    let polys = match (elab::expr(&b.base, &args.0), elab::expr(&b.base, &args.1)) {
        (Ok(f), Ok(g)) => (f.0, g.0),
        (Err(e), _) | (_, Err(e)) => return fail(e),
    };
    match j.bracket(&polys.0, &polys.1) {
        Ok(v) => {
            println!("{v}");
            ExitCode::SUCCESS
        }
        Err(e) => fail(e),
    }
}

fn algebroid(source: &str, args: &RunArgs) -> ExitCode {
    let data = match datafile::parse_algebroid(source) {
        Ok(d) => d,
        Err(e) => return fail(e),
    };
    let reports = algebroid_chain(&data).and_then(|mut r| {
        r.absorb("", weight_report(&data)?);
        Ok(vec![r])
    });
    match reports {
        Ok(r) => report(&r, args.format()),
        Err(e) => fail(e),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let source = |file: &PathBuf| read(file);
    match cli.command {
        Command::Verify { file, args } => match source(&file) {
            Ok(s) => verify(&s, &args),
            Err(code) => code,
        },
        Command::Bracket { file, name, f, g } => match source(&file) {
            Ok(s) => bracket(&s, &name, &f, &g),
            Err(code) => code,
        },
        Command::Algebroid { file, args } => match source(&file) {
            Ok(s) => algebroid(&s, &args),
            Err(code) => code,
        },
        Command::Examples { action } => match action {
            ExamplesAction::List => {
                for name in NAMES {
                    let tag = if catalog::NEGATIVE.contains(&name) { "  (negative)" } else { "" };
                    println!("{name}{tag}");
                }
                ExitCode::SUCCESS
            }
            ExamplesAction::Run { name, args, source } => match catalog::source(&name) {
                Ok(text) if source => {
                    print!("{text}");
                    ExitCode::SUCCESS
                }
                Ok(text) => verify(&text, &args),
                Err(e) => fail(e),
            },
        },
    }
}
