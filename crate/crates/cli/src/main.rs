//! `k3n`: classify admissible triples, inspect genera and glue data, and
//! verify lattice isometries.

mod commands;
mod report;

use clap::{Args, Parser, Subcommand};
use commands::CliError;
use report::{Format, Report};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "k3n", version, about = "Admissible triples for odd prime order non-symplectic automorphisms of K3^[n]-type manifolds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate admissible triples, optionally diffing against the bundled tables.
    Classify {
        #[arg(long)]
        n: i64,
        #[arg(long)]
        p: Option<i64>,
        /// Compare against the bundled reference table for (n, p); p defaults to 3.
        #[arg(long)]
        golden: bool,
        /// Compare against a reference table file (golden schema) instead of the bundled one.
        #[arg(long)]
        golden_file: Option<PathBuf>,
        /// K3 data file (golden schema) used to corroborate natural splittings.
        #[arg(long)]
        k3_data: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Decide a single triple and print its certificate.
    Triple {
        #[arg(long)]
        n: i64,
        #[arg(long)]
        p: i64,
        #[arg(long)]
        m: i64,
        #[arg(long)]
        a: i64,
        #[command(flatten)]
        output: Output,
    },
    /// Rank, signature, determinant and discriminant form of a lattice expression or Gram matrix.
    Genus {
        expr: String,
        #[command(flatten)]
        output: Output,
    },
    /// Gluing cases of S into L with both computations of q_T.
    Glue {
        #[arg(long)]
        n: i64,
        #[arg(long)]
        p: i64,
        #[arg(long)]
        m: i64,
        #[arg(long)]
        a: i64,
        #[command(flatten)]
        output: Output,
    },
    /// Order, invariant lattices, discriminant action and spinor norm of an isometry.
    VerifyIsometry {
        /// Lattice expression, Gram matrix literal, or a file holding either.
        lattice: String,
        /// Matrix literal (columns are images), `rho0`, `id`, `-id`, or a file.
        #[arg(allow_hyphen_values = true)]
        matrix: String,
        #[command(flatten)]
        output: Output,
    },
    /// Search a primitive vector whose orthogonal complement has a given genus.
    Induced {
        #[arg(long)]
        ambient: String,
        #[arg(long)]
        square: i64,
        /// Lattice whose genus the complement must have.
        #[arg(long)]
        target: String,
        /// Restrict the vector to the coordinates START..END.
        #[arg(long, value_parser = commands::parse_range)]
        coords: Option<std::ops::Range<usize>>,
        #[arg(long, default_value_t = 5)]
        bound: i64,
        #[command(flatten)]
        output: Output,
    },
}

fn run(command: Command) -> (Format, Result<Report, CliError>) {
    match command {
        Command::Classify { n, p, golden, golden_file, k3_data, output } => {
            (output.format, commands::classify(n, p, golden, golden_file.as_deref(), k3_data.as_deref()))
        }
        Command::Triple { n, p, m, a, output } => (output.format, commands::triple(n, p, m, a)),
        Command::Genus { expr, output } => (output.format, commands::genus(&expr)),
        Command::Glue { n, p, m, a, output } => (output.format, commands::glue(n, p, m, a)),
        Command::VerifyIsometry { lattice, matrix, output } => {
            (output.format, commands::verify_isometry(&lattice, &matrix))
        }
        Command::Induced { ambient, square, target, coords, bound, output } => {
            (output.format, commands::induced(&ambient, square, &target, coords, bound))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (format, result) = run(cli.command);
    let report = match result {
        Ok(mut r) => {
            r.format = format;
            r
        }
        Err(e) => {
            let mut r = Report::new("error", &[]);
            r.format = format;
            r.status = e.code;
            r.errors.push(e.message);
            if format != Format::Json {
                eprint!("{}", r.render());
                return ExitCode::from(e.code as u8);
            }
            r
        }
    };
    print!("{}", report.render());
    ExitCode::from(report.status as u8)
}
