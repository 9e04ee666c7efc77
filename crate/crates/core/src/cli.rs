//! The `homographic` command line.
//!
//! Exit codes: 0 success, 1 usage error, 2 I/O or format error, 3 a
//! numerical or degeneracy error. Diagnostics go to standard error only.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{EnhanceError, PgmError};
use crate::image_io::{read_pgm_with_format, write_pgm, GrayImage, PgmFormat};
use crate::pipeline::{enhance, fit_image, format_real, EnhanceReport};
use crate::plots::{curve_csv, curve_svg, histogram_csv, histogram_svg};
use crate::statistics::IterationConfig;
use crate::transfer::TargetLevels;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_MATH: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "homographic",
    version,
    about = "Gray-level contrast enhancement with a generalized homographic transfer curve"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Enhance a PGM image.
    Enhance {
        input: PathBuf,
        output: PathBuf,
        #[command(flatten)]
        fit: FitArgs,
        /// Also write the JSON report to this path.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Output flavor; defaults to the input's.
        #[arg(long, value_enum)]
        format: Option<ImageFormat>,
    },
    /// Print the JSON report without writing an image.
    Analyze {
        input: PathBuf,
        #[command(flatten)]
        fit: FitArgs,
        /// Include both histograms.
        #[arg(long)]
        full: bool,
    },
    /// Write the fitted transfer curve.
    Curve {
        input: PathBuf,
        output: PathBuf,
        #[command(flatten)]
        fit: FitArgs,
        #[arg(long, value_enum, default_value_t = PlotFormat::Csv)]
        format: PlotFormat,
        /// Rows in CSV output.
        #[arg(long, default_value_t = 256, value_parser = clap::value_parser!(u32).range(2..))]
        samples: u32,
    },
    /// Write the histogram of the original or enhanced image.
    Histogram {
        input: PathBuf,
        output: PathBuf,
        #[command(flatten)]
        fit: FitArgs,
        #[arg(long, value_enum, default_value_t = PlotFormat::Csv)]
        format: PlotFormat,
        #[arg(long, value_enum, default_value_t = Which::Original)]
        which: Which,
    },
}

#[derive(Debug, Args)]
struct FitArgs {
    /// Stopping threshold for the node iteration (unit gray scale).
    #[arg(long, default_value_t = 1e-4, value_parser = parse_epsilon)]
    epsilon: f64,
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u32).range(1..))]
    max_iters: u32,
    /// Output levels for x1, c1, c2, x2 as `g1,gc1,gc2,g2`.
    #[arg(long, value_parser = parse_targets)]
    targets: Option<TargetLevels>,
}

impl FitArgs {
    fn config(&self) -> IterationConfig {
        IterationConfig {
            epsilon: self.epsilon,
            max_iters: self.max_iters as usize,
            ..IterationConfig::default()
        }
    }

    fn targets(&self) -> TargetLevels {
        self.targets.unwrap_or_default()
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ImageFormat {
    P2,
    P5,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PlotFormat {
    Csv,
    Svg,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Which {
    Original,
    Enhanced,
}

fn parse_epsilon(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("epsilon must be positive, got {s}"))
    }
}

fn parse_targets(s: &str) -> Result<TargetLevels, String> {
    let values = s
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| format!("{e}"))?;
    let [g1, gc1, gc2, g2] = values[..] else {
        return Err(format!(
            "expected four comma-separated values, got {}",
            values.len()
        ));
    };
    TargetLevels::new(g1, gc1, gc2, g2).map_err(|e| e.to_string())
}

#[derive(Debug)]
enum Failure {
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    Format(PgmError),
    Math(EnhanceError),
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Io { .. } | Failure::Format(_) => EXIT_IO,
            Failure::Math(_) => EXIT_MATH,
        }
    }

    fn diagnostic(&self) -> String {
        match self {
            Failure::Io { path, source } => format!("Io: {}: {source}", path.display()),
            Failure::Format(e) => e.to_string(),
            Failure::Math(e) => e.to_string(),
        }
    }
}

impl From<PgmError> for Failure {
    fn from(e: PgmError) -> Self {
        Failure::Format(e)
    }
}

impl From<EnhanceError> for Failure {
    fn from(e: EnhanceError) -> Self {
        Failure::Math(e)
    }
}

fn load(path: &Path) -> Result<(GrayImage, PgmFormat), Failure> {
    let bytes = std::fs::read(path).map_err(|source| Failure::Io {
        path: path.to_owned(),
        source,
    })?;
    Ok(read_pgm_with_format(&bytes)?)
}

fn store(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    std::fs::write(path, bytes).map_err(|source| Failure::Io {
        path: path.to_owned(),
        source,
    })
}

fn emit(out: &mut dyn Write, bytes: &[u8]) -> Result<(), Failure> {
    out.write_all(bytes).map_err(|source| Failure::Io {
        path: PathBuf::from("<stdout>"),
        source,
    })
}

fn execute(command: Command, stdout: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::Enhance {
            input,
            output,
            fit,
            report,
            format,
        } => {
            let (img, input_format) = load(&input)?;
            let (enhanced, rep) = enhance(&img, &fit.targets(), &fit.config())?;
            let format = match format {
                Some(ImageFormat::P2) => PgmFormat::P2,
                Some(ImageFormat::P5) => PgmFormat::P5,
                None => input_format,
            };
            store(&output, &write_pgm(&enhanced, format))?;
            if let Some(path) = report {
                store(&path, &rep.serialize())?;
            }
            emit(stdout, parameter_lines(&rep).as_bytes())
        }
        Command::Analyze { input, fit, full } => {
            let (img, _) = load(&input)?;
            let (_, rep) = enhance(&img, &fit.targets(), &fit.config())?;
            let bytes = if full {
                rep.serialize()
            } else {
                rep.serialize_summary()
            };
            emit(stdout, &bytes)
        }
        Command::Curve {
            input,
            output,
            fit,
            format,
            samples,
        } => {
            let (img, _) = load(&input)?;
            let (transfer, _) = fit_image(&img, &fit.targets(), &fit.config())?;
            let bytes = match format {
                PlotFormat::Csv => curve_csv(&transfer, samples as usize),
                PlotFormat::Svg => curve_svg(&transfer),
            };
            store(&output, &bytes)
        }
        Command::Histogram {
            input,
            output,
            fit,
            format,
            which,
        } => {
            let (img, _) = load(&input)?;
            let hist = match which {
                Which::Original => crate::statistics::histogram(&img),
                Which::Enhanced => {
                    enhance(&img, &fit.targets(), &fit.config())?
                        .1
                        .histogram_after
                }
            };
            let bytes = match format {
                PlotFormat::Csv => histogram_csv(&hist),
                PlotFormat::Svg => histogram_svg(&hist),
            };
            store(&output, &bytes)
        }
    }
}

/// `key=value` lines for the fitted parameters and nodes.
fn parameter_lines(rep: &EnhanceReport) -> String {
    let [x1, c1, c2, x2] = rep.nodes.as_array();
    [
        ("gamma", rep.gamma),
        ("alpha1", rep.alpha1),
        ("alpha2", rep.alpha2),
        ("x1", x1),
        ("c1", c1),
        ("c2", c2),
        ("x2", x2),
    ]
    .iter()
    .map(|(k, v)| format!("{k}={}\n", format_real(*v)))
    .collect()
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(rendered.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = stderr.write_all(rendered.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(cli.command, stdout) {
        Ok(()) => EXIT_OK,
        Err(failure) => {
            let _ = writeln!(stderr, "error: {}", failure.diagnostic());
            failure.exit_code()
        }
    }
}
