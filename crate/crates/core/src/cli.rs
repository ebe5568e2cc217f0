//! Command-line front end. Every subcommand reads JSON (inline or from a
//! file), writes JSON or CSV to stdout or `--out`, and reports its verdict
//! through the exit status:
//!
//! | code | meaning                                        |
//! |------|------------------------------------------------|
//! | 0    | pass / VALID / HOLDS (also INCONCLUSIVE)       |
//! | 1    | refutation, INVALID, VIOLATION, EXTERIOR       |
//! | 2    | input error, unmet hypotheses                  |
//! | 3    | numerical failure                              |

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gamma_geom::{
    classify_point, desymmetrize, symmetrize, GammaPoint, PointLabel, DEFAULT_TOL,
};
use crate::interplay::{counterexample_demo, pushforward_variety_on};
use crate::io::{c_to_wire, parse_json, read_json_arg, to_json_pretty, ComplexList};
use crate::joint_spectrum::{joint_eigs, MatrixTuple};
use crate::numerics::C64;
use crate::op_theory::{
    build_model, classify_tuple, compress_model, coordinate_inclusion, dilation_check, fo_tuple,
    isometry_relations_check, Evidence, OperatorTuple, TupleLabel, FO_RANK_TOL,
};
use crate::variety::{
    polydisc_sample_from, sample_variety_tol, separating_poly, validate_pencil, DiscGrid,
    PencilFamily, PolydiscPoint, VarietySample, Verdict, DET_TOL,
};
use crate::vn_check::{vn_experiment, ReferenceVariety, TrialVerdict, VnConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REFUTED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Reference {
    Adjoint,
    Literal,
}

fn parse_grid(s: &str) -> std::result::Result<(usize, usize), String> {
    let (r, a) = s
        .split_once(',')
        .ok_or_else(|| format!("expected R,A, got {s:?}"))?;
    let r = r.trim().parse().map_err(|e| format!("radii: {e}"))?;
    let a = a.trim().parse().map_err(|e| format!("angles: {e}"))?;
    Ok((r, a))
}

/// Parsed command line. `JSON` arguments are file paths or inline JSON.
#[derive(Parser, Debug)]
#[command(
    name = "gammalab",
    version,
    about = "Numerical lab for the symmetrized polydisc"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Classification / comparison tolerance (each command has its own default).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Polar grid on the closed disc: number of radii, number of angles.
    #[arg(long, global = true, value_parser = parse_grid, value_name = "R,A")]
    pub grid: Option<(usize, usize)>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true)]
    pub degree: Option<usize>,
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Run `vn` even when the hypothesis gate fails (results are exploratory).
    #[arg(long, global = true)]
    pub override_hypotheses: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Classify a point {"n", "s", "p"}.
    Point { point: String },
    /// Elementary symmetric image of a list [[re, im], ...].
    Sym { z: String },
    /// Roots of the polynomial attached to a point.
    Desym { point: String },
    /// Joint eigenvalues of a commuting tuple {"order", "matrices"}.
    Jspec { tuple: String },
    /// Validate a pencil family {"n", "order", "matrices"}.
    PencilCheck { pencil: String },
    /// Sample the variety of a pencil family over the polar grid.
    PencilSample {
        pencil: String,
        /// Add the polydisc lift of every sampled point.
        #[arg(long)]
        polydisc: bool,
        /// Also write the wide plotting CSV here.
        #[arg(long)]
        plot_data: Option<PathBuf>,
        /// Re-check the determinant residuals of a previously written JSON sample.
        #[arg(long, value_name = "SAMPLE_JSON")]
        verify: Option<String>,
    },
    /// Fundamental operator tuple of {"n", "order", "S", "P"}.
    Fo {
        tuple: String,
        #[arg(long, default_value_t = FO_RANK_TOL)]
        rank_tol: f64,
    },
    /// Decide the class of an operator tuple, with a witness when refuted.
    Classify { tuple: String },
    /// Truncated Toeplitz model of a pencil family on K blocks.
    Model {
        pencil: String,
        #[arg(long = "blocks", short = 'K', default_value_t = 4)]
        k: usize,
    },
    /// Compression of the K-block model to its first K' blocks, as an operator tuple.
    Compress {
        pencil: String,
        #[arg(long = "blocks", short = 'K', default_value_t = 5)]
        k: usize,
        #[arg(long = "keep", default_value_t = 4)]
        k_prime: usize,
    },
    /// Random von Neumann inequality trials for an operator tuple.
    Vn {
        tuple: String,
        /// Compare against this pencil's variety instead of the one built from the tuple.
        #[arg(long)]
        pencil: Option<String>,
        #[arg(long, value_enum, default_value_t = Reference::Adjoint)]
        reference: Reference,
        /// Matrix size of the polynomial coefficients.
        #[arg(long, default_value_t = 1)]
        block_order: usize,
    },
    /// Push a three-variable variety down to two variables.
    Push32 { pencil: String },
    /// The fixed exterior point whose twisted projections all land inside.
    Counterexample,
    /// Defining polynomial separating a point from a variety.
    Separate { pencil: String, point: String },
}

struct Outcome {
    body: String,
    code: i32,
}

fn json<T: Serialize>(v: &T, code: i32) -> Result<Outcome> {
    let mut body = to_json_pretty(v)?;
    body.push('\n');
    Ok(Outcome { body, code })
}

fn no_csv(cmd: &str) -> Error {
    Error::InvalidArgument(format!("`{cmd}` has no CSV output; use --format json"))
}

impl RunConfig {
    fn grid(&self, default: DiscGrid) -> DiscGrid {
        match self.grid {
            Some((r, a)) => DiscGrid {
                radii: r,
                angles: a,
                ..default
            },
            None => default,
        }
    }

    fn tol(&self) -> f64 {
        self.tol.unwrap_or(DEFAULT_TOL)
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_from_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match RunConfig::try_parse_from(args) {
        Ok(cfg) => run(&cfg),
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                EXIT_INPUT
            } else {
                EXIT_OK
            }
        }
    }
}

pub fn run(cfg: &RunConfig) -> i32 {
    match execute(cfg).and_then(|o| write_out(cfg.out.as_deref(), &o.body).map(|_| o.code)) {
        Ok(code) => code,
        Err(e) => {
            if e.is_numerical() {
                let payload = serde_json::json!({ "error": "numerical", "message": e.to_string() });
                eprintln!("{payload}");
                EXIT_NUMERICAL
            } else {
                eprintln!("error: {e}");
                EXIT_INPUT
            }
        }
    }
}

fn write_out(path: Option<&Path>, body: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, body).map_err(Error::from),
        None => {
            use std::io::Write;
            match std::io::stdout().lock().write_all(body.as_bytes()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
                _ => Ok(()),
            }
        }
    }
}

fn execute(cfg: &RunConfig) -> Result<Outcome> {
    let csv = cfg.format == Format::Csv;
    match &cfg.command {
        Command::Point { point } => {
            if csv {
                return Err(no_csv("point"));
            }
            let x: GammaPoint = read_json_arg(point)?;
            let c = classify_point(&x, cfg.tol());
            #[derive(Serialize)]
            struct Out<'a> {
                point: &'a GammaPoint,
                label: PointLabel,
                margin: f64,
                conditioning: f64,
            }
            let code = if c.label == PointLabel::Exterior {
                EXIT_REFUTED
            } else {
                EXIT_OK
            };
            json(
                &Out {
                    point: &x,
                    label: c.label,
                    margin: c.margin,
                    conditioning: c.conditioning,
                },
                code,
            )
        }
        Command::Sym { z } => {
            if csv {
                return Err(no_csv("sym"));
            }
            let z: ComplexList = read_json_arg(z)?;
            json(&symmetrize(&z.to_complex())?, EXIT_OK)
        }
        Command::Desym { point } => {
            if csv {
                return Err(no_csv("desym"));
            }
            let x: GammaPoint = read_json_arg(point)?;
            json(&ComplexList::from_complex(&desymmetrize(&x)?), EXIT_OK)
        }
        Command::Jspec { tuple } => {
            let t: MatrixTuple = read_json_arg(tuple)?;
            let js = joint_eigs(&t, cfg.seed)?;
            if csv {
                let mut body = String::from("point,i,re,im,residual\n");
                for (j, pt) in js.points.iter().enumerate() {
                    for (i, z) in pt.iter().enumerate() {
                        let _ = writeln!(
                            body,
                            "{j},{},{:.17e},{:.17e},{:.6e}",
                            i + 1,
                            z.re,
                            z.im,
                            js.residuals[j]
                        );
                    }
                }
                return Ok(Outcome {
                    body,
                    code: EXIT_OK,
                });
            }
            #[derive(Serialize)]
            struct Out {
                points: Vec<Vec<[f64; 2]>>,
                residuals: Vec<f64>,
                method: crate::joint_spectrum::Triangularization,
            }
            json(
                &Out {
                    points: js
                        .points
                        .iter()
                        .map(|p| p.iter().map(|&z| c_to_wire(z)).collect())
                        .collect(),
                    residuals: js.residuals,
                    method: js.method,
                },
                EXIT_OK,
            )
        }
        Command::PencilCheck { pencil } => {
            if csv {
                return Err(no_csv("pencil-check"));
            }
            let pf: PencilFamily = read_json_arg(pencil)?;
            let r = validate_pencil(&pf, &cfg.grid(DiscGrid::default()), cfg.tol());
            let code = match r.verdict {
                Verdict::Invalid { .. } => EXIT_REFUTED,
                _ => EXIT_OK,
            };
            json(&r, code)
        }
        Command::PencilSample {
            pencil,
            polydisc,
            plot_data,
            verify,
        } => {
            let pf: PencilFamily = read_json_arg(pencil)?;
            if let Some(v) = verify {
                if csv {
                    return Err(no_csv("pencil-sample --verify"));
                }
                let r = verify_sample(&pf, v)?;
                let code = if r.pass { EXIT_OK } else { EXIT_REFUTED };
                return json(&r, code);
            }
            let sample =
                sample_variety_tol(&pf, &cfg.grid(DiscGrid::default()), cfg.seed, cfg.tol())?;
            let lift = if *polydisc {
                Some(polydisc_sample_from(&pf, &sample)?)
            } else {
                None
            };
            if let Some(path) = plot_data {
                write_out(Some(path), &plot_data_csv(&sample, lift.as_deref())?)?;
            }
            if csv {
                let body = match &lift {
                    Some(l) => plot_data_csv(&sample, Some(l))?,
                    None => sample.to_csv(),
                };
                return Ok(Outcome {
                    body,
                    code: EXIT_OK,
                });
            }
            #[derive(Serialize)]
            struct Out<'a> {
                pencil: &'a PencilFamily,
                sample: &'a VarietySample,
                #[serde(skip_serializing_if = "Option::is_none")]
                polydisc: Option<&'a [PolydiscPoint]>,
            }
            json(
                &Out {
                    pencil: &pf,
                    sample: &sample,
                    polydisc: lift.as_deref(),
                },
                EXIT_OK,
            )
        }
        Command::Fo { tuple, rank_tol } => {
            if csv {
                return Err(no_csv("fo"));
            }
            let t: OperatorTuple = read_json_arg(tuple)?;
            let fo = fo_tuple(&t, *rank_tol)?;
            let code = if fo.solved { EXIT_OK } else { EXIT_NUMERICAL };
            json(&fo, code)
        }
        Command::Classify { tuple } => {
            if csv {
                return Err(no_csv("classify"));
            }
            let t: OperatorTuple = read_json_arg(tuple)?;
            let d = Evidence::default();
            let ev = Evidence {
                trials: cfg.trials.unwrap_or(d.trials),
                max_degree: cfg.degree.unwrap_or(d.max_degree),
                seed: cfg.seed,
                tol: cfg.tol(),
                ..d
            };
            let c = classify_tuple(&t, &ev);
            let code = if c.label == TupleLabel::Refuted {
                EXIT_REFUTED
            } else {
                EXIT_OK
            };
            json(&c, code)
        }
        Command::Model { pencil, k } => {
            if csv {
                return Err(no_csv("model"));
            }
            let pf: PencilFamily = read_json_arg(pencil)?;
            let m = build_model(&pf, *k)?;
            #[derive(Serialize)]
            struct Out<'a> {
                model: &'a crate::op_theory::ToeplitzModel,
                isometry_defects: crate::op_theory::IsometryDefects,
            }
            json(
                &Out {
                    isometry_defects: isometry_relations_check(&m),
                    model: &m,
                },
                EXIT_OK,
            )
        }
        Command::Compress { pencil, k, k_prime } => {
            if csv {
                return Err(no_csv("compress"));
            }
            let pf: PencilFamily = read_json_arg(pencil)?;
            let m = build_model(&pf, *k)?;
            let t = compress_model(&m, *k_prime)?;
            // the compression must dilate to the model up to degree K - K'
            let e = coordinate_inclusion(m.dim(), t.dim());
            let d = dilation_check(&t, &m, &e, k - k_prime)?;
            if d.max_residual > 1e-10 {
                return Err(Error::InvalidArgument(format!(
                    "compression does not dilate: residual {:.3e} at {:?}",
                    d.max_residual, d.worst_alpha
                )));
            }
            json(&t, EXIT_OK)
        }
        Command::Vn {
            tuple,
            pencil,
            reference,
            block_order,
        } => {
            let t: OperatorTuple = read_json_arg(tuple)?;
            let pf: Option<PencilFamily> = pencil.as_deref().map(read_json_arg).transpose()?;
            let d = VnConfig::default();
            let vc = VnConfig {
                trials: cfg.trials.unwrap_or(d.trials),
                max_degree: cfg.degree.unwrap_or(d.max_degree),
                block_order: *block_order,
                grid: cfg.grid(d.grid),
                tol: cfg.tol.unwrap_or(d.tol),
                seed: cfg.seed,
                override_hypotheses: cfg.override_hypotheses,
                reference: match reference {
                    Reference::Adjoint => ReferenceVariety::Adjoint,
                    Reference::Literal => ReferenceVariety::Literal,
                },
                ..d
            };
            let r = vn_experiment(&t, pf.as_ref(), &vc)?;
            let code = if r.verdict == TrialVerdict::Holds {
                EXIT_OK
            } else {
                EXIT_REFUTED
            };
            if csv {
                return Ok(Outcome {
                    body: r.to_csv(),
                    code,
                });
            }
            json(&r, code)
        }
        Command::Push32 { pencil } => {
            if csv {
                return Err(no_csv("push32"));
            }
            let pf: PencilFamily = read_json_arg(pencil)?;
            let r = pushforward_variety_on(&pf, &cfg.grid(DiscGrid::default()), cfg.seed)?;
            let ok = r.images.pass && r.omega < 1.0 && !r.g2.check.verdict.is_invalid();
            json(&r, if ok { EXIT_OK } else { EXIT_REFUTED })
        }
        Command::Counterexample => {
            let r = counterexample_demo();
            let code = if r.images_exterior == 0 && r.source_class.label == PointLabel::Exterior {
                EXIT_OK
            } else {
                EXIT_REFUTED
            };
            if csv {
                let mut body =
                    String::from("k,re_omega,im_omega,re_s,im_s,re_p,im_p,class,ay_slack\n");
                for i in &r.images {
                    let _ = writeln!(
                        body,
                        "{},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{},{:.6e}",
                        i.k,
                        i.omega[0],
                        i.omega[1],
                        i.s[0],
                        i.s[1],
                        i.p[0],
                        i.p[1],
                        i.label,
                        i.ay_slack
                    );
                }
                return Ok(Outcome { body, code });
            }
            json(&r, code)
        }
        Command::Separate { pencil, point } => {
            if csv {
                return Err(no_csv("separate"));
            }
            let pf: PencilFamily = read_json_arg(pencil)?;
            let x: GammaPoint = read_json_arg(point)?;
            json(&separating_poly(&pf, &x, cfg.tol())?, EXIT_OK)
        }
    }
}

/// Wide plotting table: one row per sampled fiber point in grid order, then
/// branch; with a polydisc lift the `z` coordinates are appended.
pub fn plot_data_csv(sample: &VarietySample, lift: Option<&[PolydiscPoint]>) -> Result<String> {
    let points: Vec<_> = sample.points().collect();
    if points.is_empty() {
        return Err(Error::InvalidArgument(
            "empty sample: nothing to plot".into(),
        ));
    }
    let m = sample.n - 1;
    let mut out = String::from("re_p,im_p,branch");
    for i in 1..=m {
        let _ = write!(out, ",re_s{i},im_s{i}");
    }
    out.push_str(",class");
    if lift.is_some() {
        for i in 1..=sample.n {
            let _ = write!(out, ",re_z{i},im_z{i}");
        }
    }
    out.push('\n');
    if let Some(l) = lift {
        if l.len() != points.len() {
            return Err(Error::Dimension(format!(
                "lift has {} points, sample has {}",
                l.len(),
                points.len()
            )));
        }
    }
    for (j, (r, k)) in points.into_iter().enumerate() {
        let _ = write!(out, "{:.17e},{:.17e},{k}", r.p.re, r.p.im);
        for s in &r.fiber[k] {
            let _ = write!(out, ",{:.17e},{:.17e}", s.re, s.im);
        }
        let _ = write!(out, ",{}", r.classes[k].label);
        if let Some(l) = lift {
            for z in &l[j].z {
                let _ = write!(out, ",{:.17e},{:.17e}", z.re, z.im);
            }
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn emit_plot_data(sample: &VarietySample, path: &Path) -> Result<()> {
    std::fs::write(path, plot_data_csv(sample, None)?).map_err(Error::from)
}

#[derive(Deserialize)]
struct RecordWire {
    p: C64,
    fiber: Vec<Vec<C64>>,
}

#[derive(Deserialize)]
struct SampleWire {
    records: Vec<RecordWire>,
}

#[derive(Deserialize)]
struct SampleFile {
    sample: SampleWire,
}

#[derive(Clone, Debug, Serialize)]
pub struct SampleVerification {
    pub points: usize,
    /// Largest `max_i |f_i(s, p)|` divided by the determinant scale.
    pub max_relative_residual: f64,
    pub threshold: f64,
    pub failures: usize,
    pub pass: bool,
}

/// Re-evaluates the defining determinants at every point of a sample written
/// by `pencil-sample`. Coincident fiber points may carry the relaxed residual.
fn verify_sample(pf: &PencilFamily, arg: &str) -> Result<SampleVerification> {
    let trimmed = arg.trim_start();
    let text = if trimmed.starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg)?
    };
    let file: SampleFile = parse_json(&text, arg)?;
    let scale = pf.det_scale();
    let threshold = DET_TOL * crate::variety::COLLISION_RELAX;
    let mut out = SampleVerification {
        points: 0,
        max_relative_residual: 0.0,
        threshold,
        failures: 0,
        pass: false,
    };
    for r in &file.sample.records {
        for s in &r.fiber {
            let res = pf
                .defining_values(s, r.p)?
                .iter()
                .map(|v| v.norm())
                .fold(0.0, f64::max)
                / scale;
            out.points += 1;
            out.max_relative_residual = out.max_relative_residual.max(res);
            out.failures += (res > threshold) as usize;
        }
    }
    out.pass = out.points > 0 && out.failures == 0;
    Ok(out)
}
