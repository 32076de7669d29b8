//! Command-line front end: transforms, discrimination sweeps,
//! purification trajectories, sphere maps and measurement dumps, as CSV
//! or JSON. Runs are bit-reproducible: the same argument vector
//! (including the seed) always produces byte-identical output.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value};

use output::{density_matrix_json, fmt_f64, json_document, json_f64, Csv, Meta};
use rhosq::discrimination::{build_pair, optimal_povm, simulate_trials, symmetric_pair, Strategy};
use rhosq::purification::{iterate, Variant};
use rhosq::states::DensityMatrixJson;
use rhosq::transform::{sphere_map, square_elements, TwoQubitGate};
use rhosq::{overlap, DensityMatrix, PureState};

#[derive(Parser)]
#[command(
    name = "rhosq",
    version,
    about = "Nonlinear spin-1/2 state transformations: element squaring by XOR \
             filtering, unambiguous state discrimination, entanglement purification",
    after_help = "Angles are radians unless --degrees is given; they are echoed in radians.\n\
                  The default seed is 0 and can be overridden with the RHOSQ_SEED \
                  environment variable. Identical invocations produce byte-identical output."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,

    /// Output file; stdout when omitted
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Seed for Monte Carlo sampling, recorded in every output
    #[arg(long, env = "RHOSQ_SEED", default_value_t = 0, global = true)]
    seed: u64,

    /// Interpret angle arguments as degrees
    #[arg(long, global = true)]
    degrees: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Square the entries of one spin-1/2 state by the filtering pipeline
    Transform {
        /// Polar angle of a pure input state, in [0, pi]
        #[arg(long, required_unless_present = "rho", conflicts_with = "rho")]
        theta: Option<f64>,
        /// Azimuth of the pure input state
        #[arg(long, default_value_t = 0.0, conflicts_with = "rho")]
        phi: f64,
        /// JSON file with the input density matrix {"dim", "re", "im"}
        #[arg(long)]
        rho: Option<PathBuf>,
    },
    /// Discriminate the constrained pair at a polar angle, analytically and by simulation
    Discriminate {
        /// Polar angle of state 1, in [0, pi]; state 2 sits at (theta+pi, phi+pi/2)
        #[arg(long)]
        theta: f64,
        /// Azimuth of state 1
        #[arg(long, default_value_t = 0.0)]
        phi: f64,
        /// Strategy to run; `all` runs every strategy with the same seed
        #[arg(long, value_enum, default_value_t = Method::All)]
        method: Method,
        /// Monte Carlo trials per strategy, >= 1
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
    },
    /// Iterate the purification step from an isotropic state and report fidelities
    Purify {
        /// Initial singlet fidelity, in [0, 1]
        #[arg(long)]
        f0: f64,
        /// Number of iterations, >= 1
        #[arg(long)]
        iterations: usize,
        /// Which target outcomes to keep
        #[arg(long, value_enum, default_value_t = VariantArg::MinusOnly)]
        variant: VariantArg,
    },
    /// Evaluate the filtering map over a grid of pure states
    Sphere {
        /// Coupling unitary
        #[arg(long, value_enum, default_value_t = Gate::Xor)]
        gate: Gate,
        /// Polar grid points (0 to pi inclusive), >= 2
        #[arg(long, default_value_t = 32)]
        n_theta: usize,
        /// Azimuthal grid points (0 to 2*pi exclusive), >= 2
        #[arg(long, default_value_t = 64)]
        n_phi: usize,
    },
    /// Dump the optimal unambiguous-discrimination measurement for a symmetric pair
    Povm {
        /// Pair half-angle; the overlap is cos(alpha), in (0, pi/2)
        #[arg(long)]
        alpha: f64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Nonlinear,
    Lige2,
    LigeProduct,
    Povm,
    All,
}

impl Method {
    fn name(&self) -> &'static str {
        match self {
            Method::Nonlinear => "nonlinear",
            Method::Lige2 => "lige2",
            Method::LigeProduct => "lige-product",
            Method::Povm => "povm",
            Method::All => "all",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Gate {
    Xor,
    ExpZx,
}

impl Gate {
    fn name(&self) -> &'static str {
        match self {
            Gate::Xor => "xor",
            Gate::ExpZx => "exp-zx",
        }
    }

    fn build(&self) -> TwoQubitGate {
        match self {
            Gate::Xor => TwoQubitGate::xor(),
            Gate::ExpZx => TwoQubitGate::exp_zx(),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    MinusOnly,
    Both,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::MinusOnly => Variant::MinusOnly,
            VariantArg::Both => Variant::Both,
        }
    }
}

enum CliError {
    Usage(String),
    Io(String),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<rhosq::Error> for CliError {
    fn from(e: rhosq::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
        Err(CliError::Io(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let angle_scale = if cli.degrees {
        std::f64::consts::PI / 180.0
    } else {
        1.0
    };
    let text = match &cli.command {
        Command::Transform { theta, phi, rho } => {
            run_transform(&cli, *theta, *phi, rho.as_deref(), angle_scale)?
        }
        Command::Discriminate {
            theta,
            phi,
            method,
            trials,
        } => run_discriminate(
            &cli,
            theta * angle_scale,
            phi * angle_scale,
            *method,
            *trials,
        )?,
        Command::Purify {
            f0,
            iterations,
            variant,
        } => run_purify(&cli, *f0, *iterations, (*variant).into())?,
        Command::Sphere {
            gate,
            n_theta,
            n_phi,
        } => run_sphere(&cli, *gate, *n_theta, *n_phi)?,
        Command::Povm { alpha } => run_povm(&cli, alpha * angle_scale)?,
    };
    match &cli.out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => Ok(std::fs::write(path, text)?),
    }
}

fn check(condition: bool, message: &str) -> Result<(), CliError> {
    if condition {
        Ok(())
    } else {
        Err(CliError::Usage(message.into()))
    }
}

fn run_transform(
    cli: &Cli,
    theta: Option<f64>,
    phi: f64,
    rho_path: Option<&std::path::Path>,
    angle_scale: f64,
) -> Result<String, CliError> {
    let (input, params): (DensityMatrix, Vec<(&'static str, String)>) = match rho_path {
        Some(path) => {
            let raw = std::fs::read_to_string(path)?;
            let json: DensityMatrixJson = serde_json::from_str(&raw)
                .map_err(|e| CliError::Usage(format!("invalid density matrix JSON: {e}")))?;
            let rho = DensityMatrix::try_from(json)?;
            check(rho.dim() == 2, "transform expects a 2x2 density matrix")?;
            (rho, vec![("rho", path.display().to_string())])
        }
        None => {
            let theta = theta.expect("clap enforces theta unless --rho is given") * angle_scale;
            let phi = phi * angle_scale;
            check(
                (0.0..=std::f64::consts::PI).contains(&theta),
                "polar angle must lie in [0, pi]",
            )?;
            (
                PureState::from_angles(theta, phi).density(),
                vec![("theta", fmt_f64(theta)), ("phi", fmt_f64(phi))],
            )
        }
    };
    let result = square_elements(&input);
    let meta = Meta {
        command: "transform",
        params,
        seed: cli.seed,
    };
    Ok(match cli.format {
        Format::Json => {
            let mut doc = meta.json_envelope();
            doc.insert("rho_out".into(), density_matrix_json(&result.rho_out));
            doc.insert(
                "success_probability".into(),
                json_f64(result.success_probability),
            );
            doc.insert("factored".into(), Value::Bool(result.factored));
            json_document(doc)
        }
        Format::Csv => {
            let extra = vec![
                format!(
                    "success_probability: {}",
                    fmt_f64(result.success_probability)
                ),
                format!("factored: {}", result.factored),
            ];
            let mut csv = Csv::new(&meta, &extra, "row,col,re,im");
            let d = result.rho_out.dim();
            for i in 0..d {
                for j in 0..d {
                    let entry = result.rho_out.get(i, j);
                    csv.row(&[
                        i.to_string(),
                        j.to_string(),
                        fmt_f64(entry.re),
                        fmt_f64(entry.im),
                    ]);
                }
            }
            csv.finish()
        }
    })
}

fn run_discriminate(
    cli: &Cli,
    theta: f64,
    phi: f64,
    method: Method,
    trials: u64,
) -> Result<String, CliError> {
    check(
        (0.0..=std::f64::consts::PI).contains(&theta),
        "polar angle must lie in [0, pi]",
    )?;
    check(trials >= 1, "trial count must be >= 1")?;
    let pair = build_pair(theta, phi)?;
    let s = overlap(&pair.psi1, &pair.psi2)?;
    let alpha = s.clamp(0.0, 1.0).acos();

    let selected: Vec<Method> = match method {
        Method::All => vec![
            Method::Nonlinear,
            Method::Lige2,
            Method::LigeProduct,
            Method::Povm,
        ],
        single => vec![single],
    };

    struct Row {
        method: &'static str,
        analytic: f64,
        empirical: f64,
    }
    if pair.degenerate && selected.contains(&Method::Povm) {
        return Err(CliError::Usage(
            "the pair is already orthogonal at theta in {0, pi}; the povm method needs \
             theta strictly inside (0, pi)"
                .into(),
        ));
    }

    let mut rows = Vec::new();
    for m in &selected {
        let strategy = match m {
            Method::Nonlinear => Strategy::Nonlinear(pair.clone()),
            Method::Lige2 => Strategy::LigeTwoCopies { alpha },
            Method::LigeProduct => Strategy::LigeProduct { alpha },
            Method::Povm => Strategy::OptimalPovm {
                psi1: pair.psi1.tensor(&pair.psi1),
                psi2: pair.psi2.tensor(&pair.psi2),
            },
            Method::All => unreachable!("expanded above"),
        };
        let stats = simulate_trials(&strategy, trials, cli.seed)?;
        rows.push(Row {
            method: strategy.name(),
            analytic: stats.analytic_success,
            empirical: stats.empirical_success,
        });
    }

    let meta = Meta {
        command: "discriminate",
        params: vec![
            ("theta", fmt_f64(theta)),
            ("phi", fmt_f64(phi)),
            ("method", method.name().to_string()),
            ("trials", trials.to_string()),
        ],
        seed: cli.seed,
    };
    Ok(match cli.format {
        Format::Csv => {
            let mut csv = Csv::new(
                &meta,
                &[],
                "theta,overlap,method,analytic_success,empirical_success,n_trials,seed",
            );
            for row in &rows {
                csv.row(&[
                    fmt_f64(theta),
                    fmt_f64(s),
                    row.method.to_string(),
                    fmt_f64(row.analytic),
                    fmt_f64(row.empirical),
                    trials.to_string(),
                    cli.seed.to_string(),
                ]);
            }
            csv.finish()
        }
        Format::Json => {
            let mut doc = meta.json_envelope();
            let rows_json: Vec<Value> = rows
                .iter()
                .map(|row| {
                    let mut obj = Map::new();
                    obj.insert("theta".into(), json_f64(theta));
                    obj.insert("overlap".into(), json_f64(s));
                    obj.insert("method".into(), Value::String(row.method.into()));
                    obj.insert("analytic_success".into(), json_f64(row.analytic));
                    obj.insert("empirical_success".into(), json_f64(row.empirical));
                    obj.insert("n_trials".into(), Value::Number(trials.into()));
                    obj.insert("seed".into(), Value::Number(cli.seed.into()));
                    Value::Object(obj)
                })
                .collect();
            doc.insert("rows".into(), Value::Array(rows_json));
            json_document(doc)
        }
    })
}

fn run_purify(cli: &Cli, f0: f64, iterations: usize, variant: Variant) -> Result<String, CliError> {
    check((0.0..=1.0).contains(&f0), "f0 must lie in [0, 1]")?;
    check(iterations >= 1, "iteration count must be >= 1")?;
    let trajectory = iterate(f0, iterations, variant)?;
    let meta = Meta {
        command: "purify",
        params: vec![
            ("f0", fmt_f64(f0)),
            ("iterations", iterations.to_string()),
            ("variant", variant.as_str().to_string()),
        ],
        seed: cli.seed,
    };
    Ok(match cli.format {
        Format::Csv => {
            let mut csv = Csv::new(
                &meta,
                &[],
                "iteration,fidelity,yield,cumulative_yield,variant,f0",
            );
            for step in &trajectory.steps {
                csv.row(&[
                    step.iteration.to_string(),
                    fmt_f64(step.fidelity),
                    fmt_f64(step.step_yield),
                    fmt_f64(step.cumulative_yield),
                    variant.as_str().to_string(),
                    fmt_f64(f0),
                ]);
            }
            csv.finish()
        }
        Format::Json => {
            let mut doc = meta.json_envelope();
            let steps: Vec<Value> = trajectory
                .steps
                .iter()
                .map(|step| {
                    let mut obj = Map::new();
                    obj.insert("iteration".into(), Value::Number(step.iteration.into()));
                    obj.insert("fidelity".into(), json_f64(step.fidelity));
                    obj.insert("yield".into(), json_f64(step.step_yield));
                    obj.insert("cumulative_yield".into(), json_f64(step.cumulative_yield));
                    obj.insert("variant".into(), Value::String(variant.as_str().into()));
                    obj.insert("f0".into(), json_f64(f0));
                    Value::Object(obj)
                })
                .collect();
            doc.insert("steps".into(), Value::Array(steps));
            doc.insert(
                "final_state".into(),
                density_matrix_json(&trajectory.final_state),
            );
            json_document(doc)
        }
    })
}

fn run_sphere(cli: &Cli, gate: Gate, n_theta: usize, n_phi: usize) -> Result<String, CliError> {
    check(
        n_theta >= 2 && n_phi >= 2,
        "grid needs at least 2 points per axis",
    )?;
    let points = sphere_map(&gate.build(), n_theta, n_phi);
    let meta = Meta {
        command: "sphere",
        params: vec![
            ("gate", gate.name().to_string()),
            ("n_theta", n_theta.to_string()),
            ("n_phi", n_phi.to_string()),
        ],
        seed: cli.seed,
    };
    Ok(match cli.format {
        Format::Csv => {
            let mut csv = Csv::new(
                &meta,
                &[],
                "theta,phi,in_x,in_y,in_z,out_x,out_y,out_z,out_nx,out_ny,out_nz,p_success",
            );
            for p in &points {
                csv.row(&[
                    fmt_f64(p.theta),
                    fmt_f64(p.phi),
                    fmt_f64(p.input.x),
                    fmt_f64(p.input.y),
                    fmt_f64(p.input.z),
                    fmt_f64(p.output.x),
                    fmt_f64(p.output.y),
                    fmt_f64(p.output.z),
                    fmt_f64(p.output_normalized.x),
                    fmt_f64(p.output_normalized.y),
                    fmt_f64(p.output_normalized.z),
                    fmt_f64(p.success_probability),
                ]);
            }
            csv.finish()
        }
        Format::Json => {
            let mut doc = meta.json_envelope();
            let rows: Vec<Value> = points
                .iter()
                .map(|p| {
                    let mut obj = Map::new();
                    obj.insert("theta".into(), json_f64(p.theta));
                    obj.insert("phi".into(), json_f64(p.phi));
                    obj.insert("in_x".into(), json_f64(p.input.x));
                    obj.insert("in_y".into(), json_f64(p.input.y));
                    obj.insert("in_z".into(), json_f64(p.input.z));
                    obj.insert("out_x".into(), json_f64(p.output.x));
                    obj.insert("out_y".into(), json_f64(p.output.y));
                    obj.insert("out_z".into(), json_f64(p.output.z));
                    obj.insert("out_nx".into(), json_f64(p.output_normalized.x));
                    obj.insert("out_ny".into(), json_f64(p.output_normalized.y));
                    obj.insert("out_nz".into(), json_f64(p.output_normalized.z));
                    obj.insert("p_success".into(), json_f64(p.success_probability));
                    Value::Object(obj)
                })
                .collect();
            doc.insert("rows".into(), Value::Array(rows));
            json_document(doc)
        }
    })
}

fn run_povm(cli: &Cli, alpha: f64) -> Result<String, CliError> {
    check(
        alpha > 0.0 && alpha < std::f64::consts::FRAC_PI_2,
        "alpha must lie in (0, pi/2)",
    )?;
    let (psi1, psi2) = symmetric_pair(alpha);
    let povm = optimal_povm(&psi1, &psi2)?;
    let s = overlap(&psi1, &psi2)?;
    let x = 1.0 / (1.0 + s);
    let meta = Meta {
        command: "povm",
        params: vec![("alpha", fmt_f64(alpha))],
        seed: cli.seed,
    };
    Ok(match cli.format {
        Format::Json => {
            let mut doc = meta.json_envelope();
            doc.insert("overlap".into(), json_f64(s));
            doc.insert("x".into(), json_f64(x));
            let elements: Vec<Value> = povm
                .elements()
                .iter()
                .map(|(label, op)| {
                    let d = op.dim();
                    let component = |f: &dyn Fn(usize, usize) -> f64| -> Value {
                        Value::Array(
                            (0..d)
                                .map(|i| Value::Array((0..d).map(|j| json_f64(f(i, j))).collect()))
                                .collect(),
                        )
                    };
                    let mut obj = Map::new();
                    obj.insert("label".into(), Value::String(label.as_str().into()));
                    obj.insert("dim".into(), Value::Number(d.into()));
                    obj.insert("re".into(), component(&|i, j| op.get(i, j).re));
                    obj.insert("im".into(), component(&|i, j| op.get(i, j).im));
                    Value::Object(obj)
                })
                .collect();
            doc.insert("elements".into(), Value::Array(elements));
            json_document(doc)
        }
        Format::Csv => {
            let extra = vec![
                format!("overlap: {}", fmt_f64(s)),
                format!("x: {}", fmt_f64(x)),
            ];
            let mut csv = Csv::new(&meta, &extra, "label,row,col,re,im");
            for (label, op) in povm.elements() {
                for i in 0..op.dim() {
                    for j in 0..op.dim() {
                        let entry = op.get(i, j);
                        csv.row(&[
                            label.as_str().to_string(),
                            i.to_string(),
                            j.to_string(),
                            fmt_f64(entry.re),
                            fmt_f64(entry.im),
                        ]);
                    }
                }
            }
            csv.finish()
        }
    })
}
