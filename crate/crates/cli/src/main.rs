//! Batch front end: one subcommand, one JSON input, one JSON output.
//!
//! Exit codes: 0 on success, 1 for malformed input or usage, 2 when the
//! input is well formed but violates a precondition (e.g. not reflexive).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, ValueEnum};
use serde_json::{json, Value};

use toric_mirror::divisor::{aut_dimension, class_group, class_in, divisor_class, roots, sections};
use toric_mirror::fan::{cpl_cone, normal_fan, subdivide};
use toric_mirror::io;
use toric_mirror::linalg::Rat;
use toric_mirror::mirror::{
    correspondence, dominance_status, h11_toric, hd11_poly, make_pair, MirrorPair,
};
use toric_mirror::secondary::{chamber_of, enumerate_chambers_with_limit, DEFAULT_MAX_POINTS};
use toric_mirror::Error;

const MAX_POINTS_VAR: &str = "TORIC_MIRROR_MAX_POINTS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Command {
    /// Whether a polytope is reflexive.
    Reflexive,
    /// Polar polytope in the dual lattice.
    Polar,
    /// All lattice points.
    Points,
    /// Interior, facet-interior and other boundary points.
    Classify,
    /// Normal fan of a polytope.
    Normalfan,
    /// Simplicial refinement of a fan with the rays from --rays.
    Subdivide,
    /// Class group of a fan, or of a divisor's fan with its class.
    Classgroup,
    /// Roots of a complete fan and the dominance status.
    Roots,
    /// Global sections of a divisor.
    Sections,
    /// Monomial-divisor correspondence of a reflexive polytope.
    Mdmm,
    /// Toric and polynomial Hodge ranks of a reflexive polytope.
    Hodge,
    /// Cone of convex piecewise-linear functions on a fan.
    Cpl,
    /// Lifted point configuration, or its chambers with --chambers.
    Secondary,
    /// Chamber and phase selected by --heights.
    Phase,
}

#[derive(Debug, Parser)]
#[command(
    name = "toric-mirror",
    version,
    about = "Exact mirror-symmetry combinatorics of reflexive polytopes"
)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    input: PathBuf,
    /// JSON array of lattice points used as rays.
    #[arg(long)]
    rays: Option<PathBuf>,
    /// JSON array of rational heights (integers or "p/q" strings).
    #[arg(long)]
    heights: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the result here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Enumerate all chambers of the secondary fan.
    #[arg(long)]
    chambers: bool,
}

enum Failure {
    Input(String),
    Precondition(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_input_error() {
            Failure::Input(e.to_string())
        } else {
            Failure::Precondition(e.to_string())
        }
    }
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok(io::parse(&text)?)
}

fn optional_points(path: Option<&Path>) -> Result<Option<Vec<Vec<i64>>>, Failure> {
    path.map(|p| Ok(io::parse_points(&read_json(p)?)?))
        .transpose()
}

fn optional_heights(path: Option<&Path>) -> Result<Option<Vec<Rat>>, Failure> {
    path.map(|p| Ok(io::parse_rat_list(&read_json(p)?)?))
        .transpose()
}

fn max_points() -> Result<usize, Failure> {
    match std::env::var(MAX_POINTS_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Input(format!("{MAX_POINTS_VAR} must be a count, got {v:?}"))),
        Err(_) => Ok(DEFAULT_MAX_POINTS),
    }
}

impl Cli {
    fn pair(&self, input: &Value) -> Result<MirrorPair, Failure> {
        let p = io::polytope_from_json(input)?;
        let rays = optional_points(self.rays.as_deref())?;
        let heights = optional_heights(self.heights.as_deref())?;
        Ok(make_pair(
            &p,
            rays.as_deref(),
            heights.as_deref(),
            self.seed,
        )?)
    }

    fn run(&self) -> Result<Value, Failure> {
        let input = read_json(&self.input)?;
        let out = match self.command {
            Command::Reflexive => {
                json!({ "reflexive": io::polytope_from_json(&input)?.is_reflexive() })
            }
            Command::Polar => io::polytope_to_json(&io::polytope_from_json(&input)?.polar()?),
            Command::Points => {
                json!({ "points": io::polytope_from_json(&input)?.lattice_points() })
            }
            Command::Classify => {
                io::classification_to_json(&io::polytope_from_json(&input)?.classify_points()?)
            }
            Command::Normalfan => io::fan_to_json(&normal_fan(&io::polytope_from_json(&input)?)?),
            Command::Subdivide => {
                let fan = io::fan_from_json(&input)?;
                let rays =
                    optional_points(self.rays.as_deref())?.unwrap_or_else(|| fan.rays().to_vec());
                let heights = optional_heights(self.heights.as_deref())?;
                io::fan_to_json(&subdivide(&fan, &rays, heights.as_deref(), self.seed)?)
            }
            Command::Classgroup => {
                let (fan, divisor) = match input.get("coefficients") {
                    Some(_) => {
                        let d = io::divisor_from_json(&input, None)?;
                        (d.fan().clone(), Some(d))
                    }
                    None => (io::fan_from_json(&input)?, None),
                };
                let g = class_group(&fan)?;
                let ray_classes: Vec<Value> = (0..fan.rays().len())
                    .map(|i| {
                        let mut e = vec![0; fan.rays().len()];
                        e[i] = 1;
                        io::class_to_json(&class_in(&g, &e))
                    })
                    .collect();
                let mut out = io::presentation_to_json(&g);
                out["ray_classes"] = Value::Array(ray_classes);
                if let Some(d) = divisor {
                    out["class"] = io::class_to_json(&divisor_class(&d)?);
                }
                out
            }
            Command::Roots => {
                let fan = io::fan_from_json(&input)?;
                json!({
                    "roots": roots(&fan)?,
                    "aut_dimension": aut_dimension(&fan)?,
                    "dominance": dominance_status(&fan)?.as_str(),
                })
            }
            Command::Sections => {
                io::sections_to_json(&sections(&io::divisor_from_json(&input, None)?)?)
            }
            Command::Mdmm => io::correspondence_to_json(&correspondence(&self.pair(&input)?)?),
            Command::Hodge => {
                let pair = self.pair(&input)?;
                json!({ "h11_toric": h11_toric(&pair)?, "hd11_poly": hd11_poly(&pair)? })
            }
            Command::Cpl => io::cpl_to_json(&cpl_cone(&io::fan_from_json(&input)?)?),
            Command::Secondary => {
                let config = io::configuration_from_json(&input)?;
                if self.chambers {
                    let chambers = enumerate_chambers_with_limit(&config, max_points()?)?;
                    json!({ "chambers": chambers.iter().map(io::chamber_to_json).collect::<Vec<_>>() })
                } else {
                    io::configuration_to_json(&config)
                }
            }
            Command::Phase => {
                let config = io::configuration_from_json(&input)?;
                let heights = optional_heights(self.heights.as_deref())?
                    .ok_or_else(|| Failure::Input("phase needs --heights".into()))?;
                if heights.len() != config.len() {
                    return Err(Error::DimensionMismatch {
                        expected: config.len(),
                        found: heights.len(),
                    }
                    .into());
                }
                io::chamber_to_json(&chamber_of(&config, &heights)?)
            }
        };
        Ok(out)
    }
}

fn emit(cli: &Cli, value: &Value) -> Result<(), Failure> {
    let mut text = serde_json::to_string(value).expect("JSON values serialize");
    text.push('\n');
    match &cli.out {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match cli.run().and_then(|v| emit(&cli, &v)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Precondition(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
