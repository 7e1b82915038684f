use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "cmbasin", version, about = "CM points, basins and intersection multiplicities on Lubin-Tate spaces")]
pub struct Cli {
    /// Worker threads; 1 runs everything sequentially.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..=1024))]
    pub threads: Option<u32>,

    /// Write the output here (atomically) instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Normalize a CM datum and report its conductor.
    Conductor {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        tau: String,
    },
    /// The component class whose basin contains a datum.
    Basin {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        tau: String,
        #[arg(long)]
        level: String,
        /// Also test membership of this row vector.
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
    },
    /// Orbits of the level subgroup on P^1.
    Components {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        level: String,
    },
    /// The certified Haar integral.
    Integral {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        tau: String,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long)]
        level: String,
    },
    /// The intersection multiplicity report.
    Intersect {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        tau: String,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long)]
        level: String,
        #[arg(long, value_enum, default_value_t = VariantArg::Corollary)]
        variant: VariantArg,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
        residue_degree: u32,
    },
    /// Degree of the quasi-canonical lift of level s.
    Msdegree {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        s: u32,
    },
    /// Proximity exponents along the diagonal conductor family.
    Equidist {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        level: String,
        /// Inclusive range `a..b`.
        #[arg(long)]
        s_range: String,
        /// Optional fixed g0 in GL2(Z_p) composed with the family.
        #[arg(long)]
        tau: Option<String>,
        /// CSV path; defaults to the --out path with a .csv extension.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Run the embedded golden grid and oracle cross-checks.
    Selftest {
        #[arg(long, hide = true)]
        inject_fault: Option<String>,
    },
}

#[derive(Debug, Args)]
pub struct FieldArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long, value_enum, default_value_t = ExtArg::Unramified)]
    pub ext: ExtArg,
    /// Defaults to the least nonresidue (unramified) or p (ramified).
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExtArg {
    Unramified,
    Ramified,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Corollary,
    #[value(name = "theorem_b", alias = "theorem-b")]
    TheoremB,
}
