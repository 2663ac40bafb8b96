use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use dynforms::fourier::{self, FourierSeries, SlopeSpec};
use dynforms::models::{builtin_models, instantiate, load_model_file, ModelFile, ModelSpec, DEFAULT_GENUS};
use dynforms::report::{self, Fault, Report, VerifyOptions, SCHEMA_VERSION};
use dynforms::sl2::NumericParams;
use dynforms::Error;

#[derive(Parser)]
#[command(name = "dynforms", version, about = "Cohomology of flows on finite form models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Built-in model families.
    Models {
        #[command(subcommand)]
        action: ModelsAction,
    },
    /// Full verification report for one model.
    Report {
        #[arg(long, required_unless_present = "model_file")]
        model: Option<String>,
        /// JSON model file instead of a built-in model.
        #[arg(long, conflicts_with = "model")]
        model_file: Option<PathBuf>,
        /// Dimension for torus families.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_GENUS)]
        genus: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Solve (∂x + α∂y) f = g on the 2-torus by Fourier inversion.
    SolveTorus {
        /// Slope: golden, p/q, decimal, sqrt(d), (a+b*sqrt(d))/c, liouville:K.
        #[arg(long)]
        alpha: String,
        /// JSON list of {m, n, re, im} records.
        #[arg(long)]
        coeffs: PathBuf,
        #[arg(long)]
        subtract_mean: bool,
        /// Where to write the solution series; diagnostics go to stdout.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Runs the whole invariant suite.
    VerifyAll {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = NumericParams::default().samples)]
        samples: usize,
        #[arg(long, default_value_t = NumericParams::default().step)]
        step: f64,
        #[arg(long, default_value_t = NumericParams::default().tolerance)]
        tolerance: f64,
        #[arg(long, default_value_t = DEFAULT_GENUS)]
        genus: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long, value_enum, hide = true)]
        inject_fault: Option<FaultArg>,
    },
}

#[derive(Subcommand)]
enum ModelsAction {
    List,
    Show {
        name: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_GENUS)]
        genus: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum FaultArg {
    CorruptTable,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Resonance { .. } => 3,
        Error::Obstruction { .. } => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn emit(report: &Report, format: Format) -> u8 {
    match format {
        Format::Text => print!("{}", report.to_text()),
        Format::Json => println!("{}", report.to_json()),
    }
    if report.pass {
        0
    } else {
        for name in report.failed_sections() {
            eprintln!("failed: {name}");
        }
        1
    }
}

fn run(command: Command) -> dynforms::Result<u8> {
    match command {
        Command::Models { action: ModelsAction::List } => {
            for (name, about) in builtin_models() {
                println!("{name:<24}{about}");
            }
            Ok(0)
        }
        Command::Models {
            action: ModelsAction::Show { name, n, genus, format },
        } => {
            let model = instantiate(&ModelSpec::parse(&name, n)?.with_genus(genus))?;
            match format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&ModelFile::from_model(&model))?),
                Format::Text => {
                    let calc = model.calculus();
                    println!("{}", model.name);
                    if !model.field().symbols.is_empty() {
                        println!("symbols: {}", model.field().symbols.join(", "));
                    }
                    for (i, g) in model.generator_names.iter().enumerate() {
                        println!(
                            "d{g} = {}    i_X({g}) = {}",
                            model.format(&calc.d_values()[i]),
                            model.field().format(&calc.ix_values()[i])
                        );
                    }
                    if let Some(b) = &model.betti {
                        println!("betti: {b:?}");
                    }
                }
            }
            Ok(0)
        }
        Command::Report {
            model,
            model_file,
            n,
            genus,
            format,
        } => {
            let report = match (model, model_file) {
                (_, Some(path)) => report::model_report(&load_model_file(&path)?, None)?,
                (Some(name), None) => report::spec_report(&ModelSpec::parse(&name, n)?.with_genus(genus))?,
                (None, None) => unreachable!("clap requires one of them"),
            };
            Ok(emit(&report, format))
        }
        Command::SolveTorus {
            alpha,
            coeffs,
            subtract_mean,
            output,
            format,
        } => {
            let slope = SlopeSpec::parse(&alpha)?;
            let g = FourierSeries::load(&coeffs)?;
            let (f, diag) = fourier::solve_cohomological(&slope, &g, subtract_mean)?;
            if let Some(path) = &output {
                fs::write(path, f.to_json())?;
            }
            match format {
                Format::Json => {
                    let out = serde_json::json!({
                        "schema_version": SCHEMA_VERSION,
                        "alpha": { "spec": alpha, "value": slope.value() },
                        "diagnostics": diag,
                        "solution": if output.is_none() { Some(f.records()) } else { None },
                    });
                    println!("{}", serde_json::to_string_pretty(&out)?);
                }
                Format::Text => {
                    println!("alpha = {} ≈ {:.15}", alpha, slope.value());
                    println!("terms: {}", f.terms.len());
                    println!("min |m + αn| = {:.6e} at {:?}", diag.min_denominator, diag.min_frequency);
                    println!("max amplification = {:.6e}", diag.max_amplification);
                    println!("obstruction = {:.6e} + {:.6e}i", diag.obstruction_re, diag.obstruction_im);
                    println!("mean subtracted: {}", diag.mean_subtracted);
                    println!("residual = {:.3e}", diag.residual);
                    println!("real input {}, real output {}", diag.real_input, diag.real_output);
                    if output.is_none() {
                        println!("{}", f.to_json());
                    }
                }
            }
            Ok(0)
        }
        Command::VerifyAll {
            seed,
            samples,
            step,
            tolerance,
            genus,
            format,
            inject_fault,
        } => {
            let opts = VerifyOptions {
                numeric: NumericParams {
                    seed,
                    samples,
                    step,
                    tolerance,
                },
                genus,
                fault: inject_fault.map(|FaultArg::CorruptTable| Fault::CorruptTable),
                ..VerifyOptions::default()
            };
            Ok(emit(&report::verify_all(&opts)?, format))
        }
    }
}
