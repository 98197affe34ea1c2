use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use unlikely_core::anomalous::{anomalous_discs, remark_bound};
use unlikely_core::coleman::{buium_bound, log_f_disc_series, ramification_bound, verify_slopes};
use unlikely_core::curve::{DiscPoint, PlaneCurve, RationalFunction};
use unlikely_core::fmt as pfmt;
use unlikely_core::hunt::relation_solve;
use unlikely_core::newton::{negative_slopes, newton_polygon, NewtonPolygon, ValuedSeries};
use unlikely_core::padic::PadicScalar;
use unlikely_core::pipeline::{finiteness_stage, run_pipeline, StageStatus};
use unlikely_core::spec::{Model, TorusCurveSpec};

#[derive(Parser)]
#[command(name = "unlikely", version, about = "p-adic tools for points of curves in rank-one subgroups of G_m^3")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(clap::Args)]
struct DiscArgs {
    /// Curve specification (JSON).
    spec: PathBuf,
    /// x-coordinate of the centre (the parameter t for rational models).
    #[arg(long, allow_hyphen_values = true)]
    x: i64,
    /// y-coordinate of the centre; defaults to x for rational models.
    #[arg(long, allow_hyphen_values = true)]
    y: Option<i64>,
    /// Which function (1-based).
    #[arg(long, default_value_t = 1)]
    function: usize,
    /// Series truncation order.
    #[arg(long, default_value_t = 30)]
    order: usize,
}

#[derive(Subcommand)]
enum Cmd {
    /// Newton polygon of a series file.
    Np {
        series: PathBuf,
        /// Truncate the series to this order first.
        #[arg(long)]
        order: Option<usize>,
    },
    /// log f expanded on a residue disc, with its Newton polygon.
    LogDisc(DiscArgs),
    /// Compare the polygon of log f on a disc with the predicted slopes.
    VerifySlopes(DiscArgs),
    /// Finiteness verdicts for the image of each pair of functions.
    Voloch { spec: PathBuf },
    /// Anomalous residue points.
    Anomalous { spec: PathBuf },
    /// Points lying in rank-one subgroups within the spec's search region.
    Hunt { spec: PathBuf },
    /// The three bounds for genus g, boundary degree d and prime p.
    Bounds {
        #[arg(long)]
        genus: u64,
        #[arg(long)]
        degree: u64,
        #[arg(long)]
        prime: u64,
        /// Number of functions, for the anomalous bound.
        #[arg(long, default_value_t = 3)]
        functions: u32,
    },
    /// Every stage on one spec.
    Pipeline { spec: PathBuf },
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Coefficient {
    Int(i64),
    Text(String),
    Pair(i64, i64),
}

impl Coefficient {
    fn value(&self) -> Result<BigRational> {
        Ok(match self {
            Coefficient::Int(v) => BigRational::from_integer(BigInt::from(*v)),
            Coefficient::Text(s) => BigRational::from_str(s.trim()).map_err(|_| anyhow::anyhow!("bad rational {s:?}"))?,
            Coefficient::Pair(n, d) => {
                if *d == 0 {
                    bail!("zero denominator");
                }
                BigRational::new(BigInt::from(*n), BigInt::from(*d))
            }
        })
    }
}

/// `{"prime": 5, "coefficients": [0, 1, "-1/2", [1, 3]], "exact": false}`
#[derive(Deserialize)]
struct SeriesFile {
    prime: u64,
    coefficients: Vec<Coefficient>,
    #[serde(default)]
    exact: bool,
}

struct Output {
    json: Value,
    text: String,
    ok: bool,
}

fn load_spec(path: &Path) -> Result<TorusCurveSpec> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(TorusCurveSpec::from_json(&text)?)
}

fn polygon_text(np: &NewtonPolygon) -> String {
    let mut s = String::from("vertices:");
    for v in &np.vertices {
        s += &format!(" ({}, {})", v.n, v.v);
    }
    if !np.provisional_vertices.is_empty() {
        s += "\nprovisional:";
        for v in &np.provisional_vertices {
            s += &format!(" ({}, {})", v.n, v.v);
        }
    }
    s += "\nslopes (lambda, length):";
    for (l, n) in negative_slopes(np) {
        s += &format!(" ({l}, {n})");
    }
    s + "\n"
}

fn disc(args: &DiscArgs) -> Result<(PlaneCurve, RationalFunction, DiscPoint)> {
    let spec = load_spec(&args.spec)?;
    let (c, fs) = spec.plane()?;
    let y = match (&spec.model, args.y) {
        (_, Some(y)) => y,
        (Model::Rational(_), None) => args.x,
        (Model::Plane { .. }, None) => bail!("--y is required for plane models"),
    };
    let f = fs
        .get(args.function.wrapping_sub(1))
        .cloned()
        .with_context(|| format!("no function {}", args.function))?;
    let z0 = DiscPoint::from_ints(&c, args.x, y)?;
    Ok((c, f, z0))
}

fn run(cli: &Cli) -> Result<Output> {
    Ok(match &cli.cmd {
        Cmd::Np { series, order } => {
            let text = fs::read_to_string(series).with_context(|| format!("reading {}", series.display()))?;
            let f: SeriesFile = serde_json::from_str(&text)?;
            let coeffs = f.coefficients.iter().map(|c| c.value()).collect::<Result<Vec<_>>>()?;
            if coeffs.is_empty() {
                bail!("empty series");
            }
            let mut s = if f.exact {
                ValuedSeries::polynomial(coeffs, f.prime)
            } else {
                ValuedSeries::truncated(coeffs, f.prime)
            };
            if let Some(m) = order {
                s = s.to_order(*m);
            }
            let np = newton_polygon(&s)?;
            let slopes: Vec<(String, usize)> = negative_slopes(&np).iter().map(|(l, n)| (l.to_string(), *n)).collect();
            Output {
                text: polygon_text(&np),
                json: json!({"polygon": np, "negative_slopes": slopes}),
                ok: true,
            }
        }
        Cmd::LogDisc(a) => {
            let (c, f, z0) = disc(a)?;
            let s = log_f_disc_series(&c, &f, &z0, a.order)?;
            let np = newton_polygon(&s)?;
            let recs: Vec<_> = s.coeffs.iter().map(PadicScalar::to_record).collect();
            let mut text = String::new();
            for (i, x) in s.coeffs.iter().enumerate() {
                text += &format!("a_{i}: valuation {}\n", x.valuation());
            }
            text += &polygon_text(&np);
            Output {
                text,
                json: json!({"axis": z0.axis, "series": recs, "polygon": np}),
                ok: true,
            }
        }
        Cmd::VerifySlopes(a) => {
            let (c, f, z0) = disc(a)?;
            let r = verify_slopes(&c, &f, &z0, a.order)?;
            let text = format!(
                "k = {:?}, v = {}\nverdict: {:?}\n{}{}",
                r.k,
                r.v,
                r.verdict,
                polygon_text(&r.computed),
                r.notes.iter().map(|n| format!("note: {n}\n")).collect::<String>()
            );
            Output {
                text,
                json: serde_json::to_value(&r)?,
                ok: true,
            }
        }
        Cmd::Voloch { spec } => {
            let st = finiteness_stage(&load_spec(spec)?)?;
            let mut text = st.summary.join("\n") + "\n";
            for e in &st.errors {
                text += &format!("error: {e}\n");
            }
            Output {
                text,
                ok: st.status != StageStatus::Failed,
                json: st.data,
            }
        }
        Cmd::Anomalous { spec } => {
            let spec = load_spec(spec)?;
            let (c, fs) = spec.plane()?;
            let r = anomalous_discs(&c, &fs)?;
            let mut text = format!(
                "p = {}, {} classes, {} points, bound {} (within bound: {})\n",
                r.p,
                r.classes.len(),
                r.total,
                r.bound,
                r.within_bound
            );
            for cl in r.classes.iter().filter(|c| !c.orbits.is_empty()) {
                text += &format!("class {:?}:", cl.class);
                for o in &cl.orbits {
                    text += &format!(" [x {:?}, y {:?}: {} points]", o.x_minpoly, o.y_factor, o.size);
                }
                text += "\n";
            }
            Output {
                text,
                json: serde_json::to_value(&r)?,
                ok: true,
            }
        }
        Cmd::Hunt { spec } => {
            let spec = load_spec(spec)?;
            let Model::Rational(fs) = &spec.model else {
                bail!("the relation search needs a rational parametrization");
            };
            let r = relation_solve(fs, spec.b, spec.m)?;
            let mut text = format!(
                "region: |n_i| <= {}, torsion order <= {} ({} exponent vectors, {} roots of unity mod {})\n",
                r.region.b, r.region.m, r.region.exponent_vectors, r.region.roots_of_unity, r.region.fingerprint_prime
            );
            for c in &r.certificates {
                let rel = |k: usize| format!("{:?} order {}", c.relations[k].exponents, c.relations[k].order);
                text += &format!(
                    "{} = 0 root {}: {} ; {}\n",
                    pfmt::upoly(&c.minimal_polynomial(), "t"),
                    c.root_label,
                    rel(0),
                    rel(1)
                );
            }
            text += &format!("{} certificates\n", r.certificates.len());
            Output {
                text,
                json: serde_json::to_value(&r)?,
                ok: true,
            }
        }
        Cmd::Bounds {
            genus,
            degree,
            prime,
            functions,
        } => {
            let rb = ramification_bound(*genus, *degree, *prime);
            let bb = buium_bound(*genus, *prime).map(|b| b.to_string()).map_err(|e| e.to_string());
            let ab = remark_bound(*prime, *functions, *genus as u32, *degree as u32).to_string();
            let text = format!(
                "ramification degree bound: {} (valid: {})\nFrobenius-lift point bound: {}\nanomalous point bound: {}\n",
                rb.bound,
                rb.valid,
                match &bb {
                    Ok(v) => v.clone(),
                    Err(e) => format!("not applicable ({e})"),
                },
                ab
            );
            Output {
                text,
                json: json!({"ramification": rb, "frobenius_lift": bb, "anomalous": ab}),
                ok: true,
            }
        }
        Cmd::Pipeline { spec } => {
            let r = run_pipeline(&load_spec(spec)?)?;
            Output {
                text: r.to_text(),
                ok: r.halted_at.is_none() && r.stages.iter().all(|s| s.status != StageStatus::Failed),
                json: serde_json::to_value(&r)?,
            }
        }
    })
}

fn emit<T: Serialize>(cli: &Cli, json: &T, text: &str) -> Result<()> {
    let body = match cli.format {
        Format::Json => serde_json::to_string_pretty(json)? + "\n",
        Format::Text => text.to_string(),
    };
    match &cli.out {
        Some(p) => fs::write(p, body).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{body}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli).and_then(|o| emit(&cli, &o.json, &o.text).map(|_| o.ok)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
