//! The full run on a curve specification, assembled into one report.
//!
//! Stages run in a fixed order: independence, anomalous discs, pair finiteness,
//! relation search, per-certificate checks, bounds. A dependence failure in the
//! first stage halts the run; other failures are recorded and the run goes on.

use std::collections::BTreeMap;

use num_integer::Integer;
use serde::Serialize;
use serde_json::{json, Value};

use crate::anomalous::{anomalous_discs, remark_bound};
use crate::buium::{dlog_independent, finiteness_verdict, Witt2Polynomial};
use crate::certify::{classify_ramification, padic_rank_filter, FilterTarget};
use crate::coleman::{buium_bound, ramification_bound};
use crate::curve::{PlaneCurve, RationalFunction};
use crate::error::{Error, Result};
use crate::fmt;
use crate::hunt::{multiplicative_rank, relation_solve, HuntResult};
use crate::implicit::image_curve;
use crate::spec::{Model, TorusCurveSpec, UniRational};
use crate::zpoly;

/// Largest total degree tried when implicitizing a pair image.
pub const IMAGE_DEGREE_CAP: u32 = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StageStatus {
    Ok,
    Failed,
    Skipped,
}

#[derive(Clone, Debug, Serialize)]
pub struct Stage {
    pub name: &'static str,
    /// The step of the finiteness argument this stage instantiates.
    pub role: &'static str,
    pub status: StageStatus,
    pub summary: Vec<String>,
    pub errors: Vec<String>,
    pub data: Value,
}

impl Stage {
    fn new(name: &'static str, role: &'static str) -> Self {
        Stage {
            name,
            role,
            status: StageStatus::Ok,
            summary: Vec::new(),
            errors: Vec::new(),
            data: Value::Null,
        }
    }

    fn fail(&mut self, e: impl ToString) {
        self.status = StageStatus::Failed;
        self.errors.push(e.to_string());
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct InputSummary {
    pub p: u64,
    pub precision: u32,
    pub residue_degree: u32,
    pub genus: u32,
    pub boundary_degree: u32,
    pub b: u32,
    pub m: u32,
    pub model: String,
    pub curve: String,
    pub functions: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub input: InputSummary,
    pub stages: Vec<Stage>,
    /// Name of the stage that stopped the run.
    pub halted_at: Option<String>,
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).unwrap_or(Value::Null)
}

fn describe_function(f: &RationalFunction, rational: bool) -> String {
    let (x, y) = if rational { ("t", "_") } else { ("x", "y") };
    let num = fmt::bipoly(&f.num, x, y);
    let den = fmt::bipoly(&f.den, x, y);
    if den == "1" {
        num
    } else {
        format!("({num})/({den})")
    }
}

fn input_summary(spec: &TorusCurveSpec, c: &PlaneCurve, fs: &[RationalFunction]) -> InputSummary {
    let rational = matches!(spec.model, Model::Rational(_));
    InputSummary {
        p: spec.p,
        precision: spec.n,
        residue_degree: spec.f_deg,
        genus: spec.genus,
        boundary_degree: spec.boundary_degree,
        b: spec.b,
        m: spec.m,
        model: if rational { "rational" } else { "plane" }.into(),
        curve: if rational {
            "rational curve with parameter t".into()
        } else {
            format!("{} = 0", fmt::bipoly(&c.h, "x", "y"))
        },
        functions: fs.iter().map(|f| describe_function(f, rational)).collect(),
    }
}

/// The largest k with f a k-th power up to a constant.
fn power_index(f: &UniRational) -> u32 {
    let mut g = 0u32;
    for part in [&f.num, &f.den] {
        for (h, e) in zpoly::factor(part) {
            if h.degree().unwrap_or(0) > 0 {
                g = g.gcd(&e);
            }
        }
    }
    g.max(1)
}

fn independence(spec: &TorusCurveSpec, c: &PlaneCurve, fs: &[RationalFunction]) -> Stage {
    let mut s = Stage::new("independence", "multiplicative independence of the functions modulo constants");
    let mut pairs = Vec::new();
    let mut dependent_pair = None;
    for i in 0..fs.len() {
        for j in i + 1..fs.len() {
            let r = dlog_independent(c, &fs[i], &fs[j]);
            match &r {
                Ok(true) => {}
                Ok(false) => {
                    dependent_pair.get_or_insert((i, j));
                }
                Err(e) => s.errors.push(format!("dlog check on ({}, {}): {e}", i + 1, j + 1)),
            }
            pairs.push(json!({"pair": [i + 1, j + 1], "dlog_independent_mod_p": r.ok()}));
        }
    }
    let mut data = json!({ "pairs": pairs });
    match &spec.model {
        Model::Rational(us) => {
            let rank = multiplicative_rank(us);
            data["multiplicative_rank"] = json!(rank);
            s.summary.push(format!("multiplicative rank modulo constants: {rank} of {}", us.len()));
            if rank < us.len() {
                s.fail(Error::DependentFunctions(format!("rank {rank} < {}", us.len())));
            }
            let notes: Vec<String> = us
                .iter()
                .enumerate()
                .filter_map(|(i, f)| {
                    let k = power_index(f);
                    (k > 1).then(|| format!("f{} is a perfect power (exponent {k}) up to a constant; the system is not minimal", i + 1))
                })
                .collect();
            s.summary.extend(notes.iter().cloned());
            data["minimality_notes"] = json!(notes);
        }
        Model::Plane { .. } => {
            if let Some((i, j)) = dependent_pair {
                s.fail(Error::DependentFunctions(format!(
                    "dlog f{} and dlog f{} are proportional on the reduction",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    if let Some((i, j)) = dependent_pair {
        s.summary.push(format!("dlog f{} and dlog f{} are proportional mod p", i + 1, j + 1));
    } else {
        s.summary.push("all pairs dlog-independent mod p".into());
    }
    s.data = data;
    s
}

fn anomalous(c: &PlaneCurve, fs: &[RationalFunction]) -> Stage {
    let mut s = Stage::new("anomalous_discs", "residue points where a dlog combination vanishes mod p");
    match anomalous_discs(c, fs) {
        Ok(r) => {
            s.summary.push(format!(
                "{} classes, {} anomalous points (bound {}, within bound: {})",
                r.classes.len(),
                r.total,
                r.bound,
                r.within_bound
            ));
            s.summary.push("only affine points are scanned; points at infinity are not examined".into());
            s.data = to_value(&r);
        }
        Err(e) => s.fail(e),
    }
    s
}

fn finiteness(spec: &TorusCurveSpec, c: &PlaneCurve, fs: &[RationalFunction]) -> Stage {
    let mut s = Stage::new(
        "finiteness",
        "Frobenius-lift divisibility test on the image of each coordinate pair",
    );
    let mut out = Vec::new();
    for i in 0..fs.len() {
        for j in i + 1..fs.len() {
            let label = format!("(f{}, f{})", i + 1, j + 1);
            let r = image_curve(&c.h, &fs[i], &fs[j], IMAGE_DEGREE_CAP).and_then(|h| {
                let w = Witt2Polynomial::from_integer(&h, spec.p, spec.f_deg)?;
                Ok((h.clone(), finiteness_verdict(&w)?))
            });
            match r {
                Ok((h, v)) => {
                    let image = format!("{} = 0", fmt::bipoly(&h, "X", "Y"));
                    let word = match &v {
                        crate::buium::FinitenessVerdict::Finite { .. } => "finite",
                        crate::buium::FinitenessVerdict::Degenerate { .. } => "degenerate",
                    };
                    s.summary.push(format!("{label}: image {image}, {word}"));
                    out.push(json!({"pair": [i + 1, j + 1], "image": image, "verdict": to_value(&v)}));
                }
                Err(e) => {
                    s.fail(format!("{label}: {e}"));
                    out.push(json!({"pair": [i + 1, j + 1], "error": e.to_string()}));
                }
            }
        }
    }
    s.data = Value::Array(out);
    s
}

fn search(spec: &TorusCurveSpec) -> (Stage, Option<HuntResult>) {
    let mut s = Stage::new("relation_search", "points lying in rank-one subgroups within the search region");
    let Model::Rational(us) = &spec.model else {
        s.status = StageStatus::Skipped;
        s.summary.push("relation search needs a rational parametrization".into());
        return (s, None);
    };
    match relation_solve(us, spec.b, spec.m) {
        Ok(r) => {
            let mut by_point: BTreeMap<String, usize> = BTreeMap::new();
            for c in &r.certificates {
                *by_point.entry(fmt::upoly(&c.minimal_polynomial(), "t")).or_default() += 1;
            }
            s.summary.push(format!(
                "region |n_i| <= {}, torsion order <= {}: {} exponent vectors, {} roots of unity",
                r.region.b, r.region.m, r.region.exponent_vectors, r.region.roots_of_unity
            ));
            s.summary.push(format!(
                "{} certificates at {} points",
                r.certificates.len(),
                by_point.len()
            ));
            for (k, v) in &by_point {
                s.summary.push(format!("  {k} = 0 ({v} conjugates)"));
            }
            s.data = to_value(&r);
            (s, Some(r))
        }
        Err(e) => {
            s.fail(e);
            (s, None)
        }
    }
}

fn certificate_checks(spec: &TorusCurveSpec, hunt: Option<&HuntResult>) -> Stage {
    let mut s = Stage::new(
        "certificate_checks",
        "p-adic log-rank filter and ramification type at p for each certificate",
    );
    let (Some(h), Model::Rational(us)) = (hunt, &spec.model) else {
        s.status = StageStatus::Skipped;
        s.summary.push("no certificates to check".into());
        return s;
    };
    let mut out = Vec::new();
    let mut passed = 0;
    let mut ram_cache: BTreeMap<Vec<String>, Value> = BTreeMap::new();
    for c in &h.certificates {
        let phi = c.minimal_polynomial();
        let filter = padic_rank_filter(&phi, us, FilterTarget::Relations(&c.relations), spec.p, spec.n);
        let ram = ram_cache
            .entry(c.minimal_polynomial.clone())
            .or_insert_with(|| {
                match classify_ramification(&phi, spec.p, spec.n, spec.genus as u64, spec.boundary_degree as u64) {
                    Ok(r) => to_value(&r),
                    Err(e) => json!({"error": e.to_string()}),
                }
            })
            .clone();
        let fv = match &filter {
            Ok(f) => {
                if f.verdict.passed() {
                    passed += 1;
                } else {
                    s.fail(format!("filter rejects certificate at {}", fmt::upoly(&phi, "t")));
                }
                to_value(f)
            }
            Err(e) => {
                s.errors.push(format!("{}: {e}", fmt::upoly(&phi, "t")));
                json!({"error": e.to_string()})
            }
        };
        out.push(json!({
            "point": fmt::upoly(&phi, "t"),
            "root_label": c.root_label,
            "filter": fv,
            "ramification": ram,
        }));
    }
    let n = h.certificates.len();
    s.summary.push(if passed == n {
        format!("all {n} filters pass")
    } else {
        format!("{passed} of {n} filters pass")
    });
    for (k, v) in &ram_cache {
        let class = v.get("class").and_then(|c| c.get("class")).and_then(|c| c.as_str()).unwrap_or("error");
        let phi = zpoly::zpoly(&k.iter().map(|x| x.parse::<i64>().unwrap_or(0)).collect::<Vec<_>>());
        s.summary.push(format!("  {} = 0: {class}", fmt::upoly(&phi, "t")));
    }
    s.data = Value::Array(out);
    s
}

fn bounds(spec: &TorusCurveSpec, n_functions: usize) -> Stage {
    let mut s = Stage::new(
        "bounds",
        "ramification degree bound, Frobenius-lift point bound and anomalous point bound",
    );
    let (g, d, p) = (spec.genus as u64, spec.boundary_degree as u64, spec.p);
    let rb = ramification_bound(g, d, p);
    s.summary.push(format!("ramification degree <= 2g + d = {} (valid: {})", rb.bound, rb.valid));
    let bb = buium_bound(g, p);
    match &bb {
        Ok(v) => s.summary.push(format!("Frobenius-lift point bound: {v}")),
        Err(e) => s.summary.push(format!("Frobenius-lift point bound not applicable: {e}")),
    }
    let ab = remark_bound(p, n_functions as u32, spec.genus, spec.boundary_degree);
    s.summary.push(format!("anomalous point bound: {ab}"));
    s.data = json!({
        "ramification": to_value(&rb),
        "validity": rb.valid,
        "frobenius_lift": bb.as_ref().map(|v| v.to_string()).map_err(|e| e.to_string()),
        "anomalous": ab.to_string(),
    });
    s
}

/// The pair-image finiteness stage on its own.
pub fn finiteness_stage(spec: &TorusCurveSpec) -> Result<Stage> {
    let (c, fs) = spec.plane()?;
    Ok(finiteness(spec, &c, &fs))
}

pub fn run_pipeline(spec: &TorusCurveSpec) -> Result<Report> {
    let (c, fs) = spec.plane()?;
    let mut stages = vec![independence(spec, &c, &fs)];
    if stages[0].status == StageStatus::Failed {
        return Ok(Report {
            input: input_summary(spec, &c, &fs),
            stages,
            halted_at: Some("independence".into()),
        });
    }
    stages.push(anomalous(&c, &fs));
    stages.push(finiteness(spec, &c, &fs));
    let (st, hunt) = search(spec);
    stages.push(st);
    stages.push(certificate_checks(spec, hunt.as_ref()));
    stages.push(bounds(spec, fs.len()));
    Ok(Report {
        input: input_summary(spec, &c, &fs),
        stages,
        halted_at: None,
    })
}

impl Report {
    pub fn stage(&self, name: &str) -> Option<&Stage> {
        self.stages.iter().find(|s| s.name == name)
    }

    pub fn to_text(&self) -> String {
        let i = &self.input;
        let mut out = format!(
            "p = {}, N = {}, residue degree {}, g = {}, d = {}, B = {}, M = {}\n{}\n",
            i.p, i.precision, i.residue_degree, i.genus, i.boundary_degree, i.b, i.m, i.curve
        );
        for (k, f) in i.functions.iter().enumerate() {
            out += &format!("f{} = {f}\n", k + 1);
        }
        for s in &self.stages {
            let status = match s.status {
                StageStatus::Ok => "ok",
                StageStatus::Failed => "FAILED",
                StageStatus::Skipped => "skipped",
            };
            out += &format!("\n[{}] {status}\n  {}\n", s.name, s.role);
            for l in &s.summary {
                out += &format!("  {l}\n");
            }
            for e in &s.errors {
                out += &format!("  error: {e}\n");
            }
        }
        if let Some(h) = &self.halted_at {
            out += &format!("\nhalted at {h}\n");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(fs: &str, p: u64, b: u32, m: u32) -> TorusCurveSpec {
        TorusCurveSpec::from_json(&format!(
            r#"{{"prime": {p}, "precision": 10, "genus": 0, "boundary_degree": 4,
                "bounds": {{"B": {b}, "M": {m}}}, "model": {{"rational": {fs}}}}}"#
        ))
        .unwrap()
    }

    const LINE: &str = r#"[{"num": [[1, 1]]}, {"num": [[0, 1], [1, -1]]}, {"num": [[0, 1], [1, 1]]}]"#;

    #[test]
    fn line_family_report() {
        let r = run_pipeline(&spec(LINE, 7, 1, 6)).unwrap();
        assert_eq!(r.halted_at, None);
        assert_eq!(r.stages.len(), 6);
        let checks = r.stage("certificate_checks").unwrap();
        assert_eq!(checks.status, StageStatus::Ok, "{:?}", checks.errors);
        assert!(r.to_text().contains("[bounds] ok"));
    }

    #[test]
    fn square_halts_at_independence() {
        let fs = r#"[{"num": [[1, 1]]}, {"num": [[2, 1]]}, {"num": [[0, 1], [1, 1]]}]"#;
        let r = run_pipeline(&spec(fs, 7, 1, 2)).unwrap();
        assert_eq!(r.halted_at.as_deref(), Some("independence"));
        assert!(r.stages[0].errors[0].contains("dependent"));
    }

    #[test]
    fn small_prime_marks_bound_invalid() {
        let r = run_pipeline(&spec(LINE, 3, 1, 2)).unwrap();
        assert_eq!(r.stage("bounds").unwrap().data["validity"], json!(false));
    }
}
