//! Curve specification files (JSON).
//!
//! ```json
//! {
//!   "prime": 7, "precision": 10, "genus": 0, "boundary_degree": 4,
//!   "bounds": { "B": 6, "M": 12 },
//!   "model": { "rational": [
//!     { "num": [[1, 1]] },
//!     { "num": [[0, 1], [1, -1]] },
//!     { "num": [[0, 1], [1, 1]], "den": [[0, 1]] }
//!   ] }
//! }
//! ```
//!
//! Univariate terms are `[exponent, coefficient]`; plane models use
//! `{"plane": {"h": [[[i, j], c], ...], "functions": [{"num": ..., "den": ...}]}}`
//! with bivariate terms `[[i, j], c]`. Coefficients are integers or decimal strings.

use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::bipoly::BiPoly;
use crate::curve::{PlaneCurve, RationalFunction};
use crate::error::{Error, Result};
use crate::padic::{make_context, PadicContext};
use crate::upoly::UPoly;
use crate::zpoly::ZPoly;

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(untagged)]
pub enum Coef {
    Int(i64),
    Big(String),
}

impl Coef {
    fn value(&self) -> Result<BigInt> {
        match self {
            Coef::Int(v) => Ok(BigInt::from(*v)),
            Coef::Big(s) => BigInt::from_str(s.trim()).map_err(|_| Error::Parse(format!("bad integer {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct UniFunction {
    pub num: Vec<(u32, Coef)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub den: Option<Vec<(u32, Coef)>>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct BiFunction {
    pub num: Vec<((u32, u32), Coef)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub den: Option<Vec<((u32, u32), Coef)>>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct PlaneModel {
    pub h: Vec<((u32, u32), Coef)>,
    pub functions: Vec<BiFunction>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelFile {
    Rational(Vec<UniFunction>),
    Plane(PlaneModel),
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct Bounds {
    #[serde(rename = "B")]
    pub b: u32,
    #[serde(rename = "M")]
    pub m: u32,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct SpecFile {
    pub prime: u64,
    pub precision: u32,
    #[serde(default = "one_u32")]
    pub residue_degree: u32,
    pub genus: u32,
    pub boundary_degree: u32,
    pub bounds: Bounds,
    pub model: ModelFile,
}

fn one_u32() -> u32 {
    1
}

/// A rational function num/den of the parameter t.
#[derive(Clone, Debug, PartialEq)]
pub struct UniRational {
    pub num: ZPoly,
    pub den: ZPoly,
}

impl UniRational {
    pub fn new(num: ZPoly, den: ZPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Err(Error::ZeroFunction);
        }
        Ok(UniRational { num, den })
    }

    pub fn poly(num: ZPoly) -> Self {
        UniRational {
            num,
            den: UPoly::constant(BigInt::one()),
        }
    }

    pub fn is_constant(&self) -> bool {
        // num·den' − num'·den = 0
        self.num.mul(&self.den.derivative()).sub(&self.num.derivative().mul(&self.den)).is_zero()
    }

    /// The same function in the x-coordinate of the plane model y = x.
    pub fn in_x(&self) -> RationalFunction {
        let lift = |f: &ZPoly| {
            BiPoly::from_terms(
                f.coeffs
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(i, c)| ((i as u32, 0), c.clone())),
            )
        };
        RationalFunction {
            num: lift(&self.num),
            den: lift(&self.den),
        }
    }
}

#[derive(Clone, Debug)]
pub enum Model {
    Rational(Vec<UniRational>),
    Plane { h: BiPoly<BigInt>, functions: Vec<RationalFunction> },
}

/// A validated specification.
#[derive(Clone, Debug)]
pub struct TorusCurveSpec {
    pub p: u64,
    pub n: u32,
    pub f_deg: u32,
    pub genus: u32,
    pub boundary_degree: u32,
    pub b: u32,
    pub m: u32,
    pub model: Model,
}

fn uni(terms: &[(u32, Coef)]) -> Result<ZPoly> {
    let mut c: Vec<BigInt> = Vec::new();
    for (e, v) in terms {
        let e = *e as usize;
        if c.len() <= e {
            c.resize(e + 1, BigInt::zero());
        }
        c[e] += v.value()?;
    }
    Ok(UPoly::new(c))
}

fn bi(terms: &[((u32, u32), Coef)]) -> Result<BiPoly<BigInt>> {
    let mut out = BiPoly::zero();
    for (k, v) in terms {
        out.add_term(*k, v.value()?);
    }
    Ok(out)
}

impl TorusCurveSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let f: SpecFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_file(&f)
    }

    pub fn from_file(f: &SpecFile) -> Result<Self> {
        let model = match &f.model {
            ModelFile::Rational(fs) => {
                let mut out = Vec::new();
                for g in fs {
                    let num = uni(&g.num)?;
                    let den = match &g.den {
                        Some(d) => uni(d)?,
                        None => UPoly::constant(BigInt::one()),
                    };
                    let r = UniRational::new(num, den)?;
                    if r.is_constant() {
                        return Err(Error::InvalidInput("constant function in model".into()));
                    }
                    out.push(r);
                }
                Model::Rational(out)
            }
            ModelFile::Plane(pm) => {
                let h = bi(&pm.h)?;
                if h.total_degree() < 1 {
                    return Err(Error::InvalidInput("plane curve must be nonconstant".into()));
                }
                let mut out = Vec::new();
                for g in &pm.functions {
                    let num = bi(&g.num)?;
                    let den = match &g.den {
                        Some(d) => bi(d)?,
                        None => BiPoly::constant(BigInt::one()),
                    };
                    out.push(RationalFunction::new(num, den)?);
                }
                Model::Plane { h, functions: out }
            }
        };
        let s = TorusCurveSpec {
            p: f.prime,
            n: f.precision,
            f_deg: f.residue_degree,
            genus: f.genus,
            boundary_degree: f.boundary_degree,
            b: f.bounds.b,
            m: f.bounds.m,
            model,
        };
        if s.function_count() == 0 {
            return Err(Error::InvalidInput("no functions".into()));
        }
        s.context()?;
        Ok(s)
    }

    pub fn function_count(&self) -> usize {
        match &self.model {
            Model::Rational(fs) => fs.len(),
            Model::Plane { functions, .. } => functions.len(),
        }
    }

    pub fn context(&self) -> Result<Arc<PadicContext>> {
        make_context(self.p, self.n, self.f_deg, None)
    }

    /// The plane model: y − x for a rational parametrization (t = x).
    pub fn plane(&self) -> Result<(PlaneCurve, Vec<RationalFunction>)> {
        let ctx = self.context()?;
        let (h, fs) = match &self.model {
            Model::Rational(fs) => (
                BiPoly::from_int_terms(&[((0, 1), 1), ((1, 0), -1)]),
                fs.iter().map(|f| f.in_x()).collect(),
            ),
            Model::Plane { h, functions } => (h.clone(), functions.clone()),
        };
        Ok((PlaneCurve::new(h, self.genus, self.boundary_degree, ctx)?, fs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zpoly::zpoly;

    const LINE: &str = r#"{
        "prime": 7, "precision": 10, "genus": 0, "boundary_degree": 4,
        "bounds": {"B": 6, "M": 12},
        "model": {"rational": [
            {"num": [[1, 1]]},
            {"num": [[0, 1], [1, -1]]},
            {"num": [[0, 1], [1, 1]], "den": [[0, "1"]]}
        ]}
    }"#;

    #[test]
    fn parses_rational_spec() {
        let s = TorusCurveSpec::from_json(LINE).unwrap();
        assert_eq!((s.p, s.n, s.f_deg, s.b, s.m), (7, 10, 1, 6, 12));
        let Model::Rational(fs) = &s.model else { panic!() };
        assert_eq!(fs[1].num, zpoly(&[1, -1]));
        let (c, gs) = s.plane().unwrap();
        assert_eq!(c.h.deg_y(), 1);
        assert_eq!(gs.len(), 3);
    }

    #[test]
    fn rejects_constants() {
        let bad = LINE.replace(r#"{"num": [[1, 1]]}"#, r#"{"num": [[0, 3]]}"#);
        assert!(TorusCurveSpec::from_json(&bad).is_err());
    }
}
