//! Command-line front end: algebra files, the builtin corpus, and one
//! subcommand per computation, reporting JSON or CSV.

pub mod builtin;
pub mod commands;
pub mod format;
pub mod report;

use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use qhh::{Field, Presentation};

pub use format::{parse_algebra, print_algebra, AlgebraFile, ParseError};
pub use report::{OutputFormat, Report, Status};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_CERTIFICATION: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "qhh", version, about = "Hochschild cohomology of quiver algebras")]
pub struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value = "json", global = true)]
    pub format: OutputFormat,
    /// Include the elapsed wall-clock time (makes reports run-dependent).
    #[arg(long, global = true)]
    pub timings: bool,
    #[command(subcommand)]
    pub command: Command,
}

/// How to obtain the algebra.
#[derive(Debug, Clone, Args)]
pub struct AlgebraArgs {
    /// Path to an algebra file, or `builtin:<id>`.
    pub algebra: String,
    /// Ground field, `GF(p)` or `QQ`; overrides the file's field.
    #[arg(long)]
    pub field: Option<String>,
    /// Parameter `q` of `builtin:bgms`, an integer or fraction.
    #[arg(long, default_value = "2")]
    pub q: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Normal-form basis, per degree.
    Basis {
        #[command(flatten)]
        alg: AlgebraArgs,
        /// Truncate at this degree (required for infinite-dimensional algebras).
        #[arg(long)]
        max_deg: Option<usize>,
    },
    /// Hochschild cohomology dimensions from the bar complex.
    Hh {
        #[command(flatten)]
        alg: AlgebraArgs,
        #[arg(long)]
        max_deg: usize,
        /// Also compute the ring modulo certified nilpotents.
        #[arg(long)]
        mod_nilpotents: bool,
        /// Check graded commutativity of cup products of classes.
        #[arg(long)]
        check_commutativity: bool,
        /// Compare HH⁰ with the centre and HH¹ with outer derivations.
        #[arg(long)]
        cross_check: bool,
        /// Largest number of cochain coordinates per degree.
        #[arg(long, default_value_t = qhh::hochschild::DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Verify the explicit minimal resolution of the counterexample algebra.
    ResolutionCheck {
        #[command(flatten)]
        alg: AlgebraArgs,
        #[arg(long)]
        max_deg: usize,
    },
    /// (D, A)-stacked test for monomial algebras.
    Stacked {
        #[command(flatten)]
        alg: AlgebraArgs,
        #[arg(long)]
        max_deg: usize,
    },
    /// Quadratic dual on the opposite quiver.
    Dual {
        #[command(flatten)]
        alg: AlgebraArgs,
    },
    /// Graded centre, optionally modulo certified nilpotents.
    Centre {
        #[command(flatten)]
        alg: AlgebraArgs,
        #[arg(long)]
        max_deg: usize,
        #[arg(long)]
        mod_nilpotents: bool,
    },
    /// Number of Bardzell summands between each vertex pair in one degree.
    ExtTable {
        #[command(flatten)]
        alg: AlgebraArgs,
        #[arg(long)]
        deg: usize,
    },
    /// New algebra generators per degree of a ring modulo nilpotents.
    ProbeFingen {
        #[command(flatten)]
        alg: AlgebraArgs,
        #[arg(long)]
        max_deg: usize,
        /// Which ring to probe.
        #[arg(long, value_enum, default_value = "centre")]
        source: commands::ProbeSource,
    },
}

/// What a run produced: the exit code and the text for each stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Input problems (exit code 1).
#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("{path}:{source}")]
    Parse { path: String, source: ParseError },
    #[error("cannot read `{0}`: {1}")]
    Io(String, std::io::Error),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] qhh::Error),
}

impl AlgebraArgs {
    fn field_override(&self) -> Result<Option<Field>, InputError> {
        self.field.as_deref().map(|f| f.parse::<Field>().map_err(InputError::from)).transpose()
    }

    /// Loads the algebra named on the command line.
    pub fn load(&self) -> Result<Presentation, InputError> {
        let field = self.field_override()?;
        if let Some(id) = self.algebra.strip_prefix("builtin:") {
            let f = field.unwrap_or(Field::Rational);
            let q = parse_scalar(&self.q, f)?;
            return builtin::builtin(id, f, &q).map_err(InputError::Invalid);
        }
        let text = std::fs::read_to_string(&self.algebra).map_err(|e| InputError::Io(self.algebra.clone(), e))?;
        let file = format::parse_algebra_with_field(&text, field)
            .map_err(|e| InputError::Parse { path: self.algebra.clone(), source: e })?;
        Ok(file.presentation)
    }
}

fn parse_scalar(text: &str, f: Field) -> Result<qhh::Scalar, InputError> {
    let bad = || InputError::Invalid(format!("bad scalar `{text}`"));
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim().parse::<i64>().map_err(|_| bad())?, d.trim().parse::<i64>().map_err(|_| bad())?),
        None => (text.trim().parse::<i64>().map_err(|_| bad())?, 1),
    };
    Ok(f.from_fraction(num, den)?)
}

/// Parses `args` (without the program name) and runs the command.
pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let args: Vec<String> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(std::iter::once("qhh".to_string()).chain(args.iter().cloned())) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code, stdout: String::new(), stderr: text }
            } else {
                Outcome { code, stdout: text, stderr: String::new() }
            };
        }
    };
    let start = Instant::now();
    match commands::execute(&cli.command, args) {
        Ok(mut report) => {
            if cli.timings {
                report.elapsed_us = Some(start.elapsed().as_micros());
            }
            let code = match report.status {
                Status::Ok => EXIT_OK,
                Status::CertificationFailed => EXIT_CERTIFICATION,
            };
            Outcome { code, stdout: report.render(cli.format), stderr: String::new() }
        }
        Err(e) => Outcome { code: EXIT_INPUT, stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}
