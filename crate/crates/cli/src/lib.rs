//! Command-line surface: file formats, subcommands and the exit-code
//! taxonomy (0 ok, 2 parse, 3 cap, 4 non-Morse, 5 verification failure).

pub mod commands;
pub mod error;
pub mod files;

use anick_core::Field;
use clap::{Parser, Subcommand, ValueEnum};

pub use commands::{Format, Output};
pub use error::{CliError, CliResult, EXIT_CAP, EXIT_NOT_MORSE, EXIT_OK, EXIT_PARSE, EXIT_VERIFICATION};
pub use files::{ComplexFile, DatumFile, PresentationFile};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    #[default]
    Text,
    #[value(alias = "json")]
    Structured,
}

#[derive(Debug, Parser)]
#[command(name = "anick", version, about = "Two-sided Anick resolutions via algebraic Morse theory")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t)]
    pub format: FormatArg,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Checks reducedness of the basis and resolves its overlaps.
    CheckGsb {
        file: String,
        /// Verify overlaps up to this composite degree.
        #[arg(long)]
        max_degree: Option<usize>,
    },
    /// Lists Anick chains by weight.
    Chains {
        file: String,
        #[arg(long)]
        max_weight: usize,
        #[arg(long)]
        max_degree: Option<usize>,
    },
    /// Computes the two-sided Anick resolution and checks d∘d = 0.
    Resolve {
        file: String,
        #[arg(long)]
        length: usize,
        #[arg(long)]
        max_degree: Option<usize>,
        /// Also compute and verify the comparison maps to the bar resolution.
        #[arg(long)]
        transfer_maps: bool,
    },
    /// Runs the minimality criterion and the direct check.
    Minimality {
        file: String,
        #[arg(long)]
        length: usize,
        #[arg(long)]
        max_degree: Option<usize>,
    },
    /// Betti numbers of the resolution.
    Betti {
        file: String,
        #[arg(long)]
        length: usize,
        #[arg(long)]
        max_degree: Option<usize>,
    },
    /// Global dimension, exact or as bounds.
    Gldim {
        file: String,
        #[arg(long)]
        length: Option<usize>,
        #[arg(long)]
        max_degree: Option<usize>,
    },
    /// Reduces a based complex along its matching and verifies the equivalence.
    Morse { file: String },
    /// Verifies the perturbation lemma on a datum file or on seeded random data.
    Hpl {
        #[arg(required_unless_present = "random", conflicts_with = "random")]
        file: Option<String>,
        /// Number of random trials.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Prints a built-in presentation file.
    Builtin {
        /// example42, chinese:<n>, iyudu-shkarin:<K>, jw-counterexample or algebra-b.
        name: String,
        #[arg(long, default_value = "Q")]
        field: String,
    },
}

/// Runs a parsed command; file paths are read relative to the process.
pub fn run(cli: &Cli) -> CliResult<Output> {
    use files::{read, read_presentation};
    match &cli.command {
        Command::CheckGsb { file, max_degree } => commands::check_gsb(&read_presentation(file)?, *max_degree),
        Command::Chains { file, max_weight, max_degree } => {
            commands::chains(&read_presentation(file)?, *max_weight, *max_degree)
        }
        Command::Resolve { file, length, max_degree, transfer_maps } => {
            commands::resolve(&read_presentation(file)?, *length, *max_degree, *transfer_maps)
        }
        Command::Minimality { file, length, max_degree } => {
            commands::minimality(&read_presentation(file)?, *length, *max_degree)
        }
        Command::Betti { file, length, max_degree } => commands::betti_cmd(&read_presentation(file)?, *length, *max_degree),
        Command::Gldim { file, length, max_degree } => commands::gldim_cmd(&read_presentation(file)?, *length, *max_degree),
        Command::Morse { file } => commands::morse(&ComplexFile::parse(&read(file)?)?),
        Command::Hpl { file, random, seed } => match (file, random) {
            (_, Some(t)) => commands::hpl_random(*t, *seed),
            (Some(f), None) => commands::hpl_file(&DatumFile::parse(&read(f)?)?),
            (None, None) => Err(CliError::Usage("give a datum file or --random".into())),
        },
        Command::Builtin { name, field } => commands::builtin(name, Field::parse_name(field)?),
    }
}

impl Cli {
    pub fn output_format(&self) -> Format {
        match self.format {
            FormatArg::Text => Format::Text,
            FormatArg::Structured => Format::Structured,
        }
    }
}

/// Parses arguments, runs, prints, and returns the exit code.
pub fn main_with<I, T>(args: I, out: &mut dyn std::io::Write, err: &mut dyn std::io::Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match run(&cli) {
        Ok(o) => {
            let _ = out.write_all(o.render(cli.output_format()).as_bytes());
            if o.ok {
                EXIT_OK
            } else {
                EXIT_VERIFICATION
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
