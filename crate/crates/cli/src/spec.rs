//! JSON system description files.
//!
//! Entries may be a JSON number (real), a `[re, im]` pair of numbers, a
//! rational string such as `"-3/4"` or `"0.25"`, or a pair of such strings.
//! Strings and integers are exact; other JSON numbers are floating point and
//! are refused where exact arithmetic is required.

use std::path::Path;

use lqs_core::exact::{GaussianRational as Q, QMat};
use lqs_core::feedback::QuadPlantParams;
use lqs_core::numeric::CMatrix;
use lqs_core::system::{
    build_exact_state_space, build_state_space, ExactParams, ExactStateSpace, QSystemParams, Representation, StateSpace,
};
use lqs_core::Complex;
use serde_json::Value;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone)]
struct Entry {
    value: Complex,
    exact: Option<Q>,
}

fn parse_real(v: &Value) -> Option<(f64, Option<Q>)> {
    match v {
        Value::Number(n) => {
            let f = n.as_f64()?;
            let exact = n.as_i64().map(Q::from_int);
            Some((f, exact))
        }
        Value::String(s) => {
            let q = Q::parse_pair(s, "0").ok()?;
            Some((q.to_complex().re, Some(q)))
        }
        _ => None,
    }
}

fn parse_entry(v: &Value, field: &str, i: usize, j: usize) -> CliResult<Entry> {
    let bad = || {
        CliError::input(format!(
            "field `{field}` entry ({i}, {j}): expected a number, a rational string, or a [re, im] pair"
        ))
    };
    if let Value::Array(pair) = v {
        if pair.len() != 2 {
            return Err(bad());
        }
        let (re, qre) = parse_real(&pair[0]).ok_or_else(bad)?;
        let (im, qim) = parse_real(&pair[1]).ok_or_else(bad)?;
        let exact = match (qre, qim) {
            (Some(a), Some(b)) => Some(&a + &b.mul_i()),
            _ => None,
        };
        return Ok(Entry {
            value: Complex::new(re, im),
            exact,
        });
    }
    let (re, exact) = parse_real(v).ok_or_else(bad)?;
    Ok(Entry {
        value: Complex::new(re, 0.0),
        exact,
    })
}

struct EntryMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Entry>,
    field: String,
}

impl EntryMatrix {
    fn float(&self) -> CliResult<CMatrix> {
        CMatrix::new(self.rows, self.cols, self.data.iter().map(|e| e.value).collect()).map_err(CliError::from)
    }

    fn exact(&self) -> Result<QMat, String> {
        let mut out = QMat::zeros(self.rows, self.cols);
        for (k, e) in self.data.iter().enumerate() {
            let q = e.exact.clone().ok_or_else(|| {
                format!(
                    "field `{}` entry ({}, {}) is a floating-point number; give it as a rational string",
                    self.field,
                    k / self.cols,
                    k % self.cols
                )
            })?;
            out.set(k / self.cols, k % self.cols, q);
        }
        Ok(out)
    }
}

fn field<'a>(obj: &'a Value, name: &str) -> CliResult<&'a Value> {
    obj.get(name)
        .ok_or_else(|| CliError::input(format!("missing field `{name}`")))
}

fn parse_matrix(obj: &Value, name: &str) -> CliResult<EntryMatrix> {
    let rows = field(obj, name)?
        .as_array()
        .ok_or_else(|| CliError::input(format!("field `{name}` must be an array of rows")))?;
    if rows.is_empty() {
        return Err(CliError::input(format!("field `{name}` has no rows")));
    }
    let mut data = Vec::new();
    let mut cols = None;
    for (i, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| CliError::input(format!("field `{name}` row {i} must be an array")))?;
        match cols {
            None => cols = Some(row.len()),
            Some(c) if c != row.len() => {
                return Err(CliError::input(format!(
                    "field `{name}` row {i} has {} entries, expected {c}",
                    row.len()
                )))
            }
            _ => {}
        }
        for (j, v) in row.iter().enumerate() {
            data.push(parse_entry(v, name, i, j)?);
        }
    }
    let cols = cols.unwrap_or(0);
    if cols == 0 {
        return Err(CliError::input(format!("field `{name}` has empty rows")));
    }
    Ok(EntryMatrix {
        rows: rows.len(),
        cols,
        data,
        field: name.to_string(),
    })
}

fn parse_scalar(obj: &Value, name: &str) -> CliResult<Entry> {
    parse_entry(field(obj, name)?, name, 0, 0)
}

fn expect_dim(obj: &Value, name: &str, got: usize) -> CliResult<()> {
    if let Some(v) = obj.get(name) {
        let want = v
            .as_u64()
            .ok_or_else(|| CliError::input(format!("field `{name}` must be a non-negative integer")))?;
        if want as usize != got {
            return Err(CliError::input(format!(
                "field `{name}` says {want} but the matrices imply {got}"
            )));
        }
    }
    Ok(())
}

/// A linear quantum system with its floating-point realization and, when
/// every entry was exact, the exact one.
#[derive(Debug, Clone)]
pub struct LoadedSystem {
    pub float: StateSpace,
    pub exact: Result<ExactStateSpace, String>,
}

impl LoadedSystem {
    pub fn require_exact(&self) -> CliResult<&ExactStateSpace> {
        self.exact.as_ref().map_err(|e| CliError::Exactness(e.clone()))
    }
}

#[derive(Debug, Clone)]
pub enum SpecKind {
    System(LoadedSystem),
    QuadPlant(QuadPlantParams),
}

#[derive(Debug, Clone)]
pub struct Spec {
    pub path: String,
    pub raw: Value,
    pub kind: SpecKind,
}

impl Spec {
    pub fn system(&self) -> CliResult<&LoadedSystem> {
        match &self.kind {
            SpecKind::System(s) => Ok(s),
            SpecKind::QuadPlant(_) => Err(CliError::Usage(format!(
                "{}: a quadrature_plant spec only works with the feedback command",
                self.path
            ))),
        }
    }

    pub fn quad_plant(&self) -> CliResult<&QuadPlantParams> {
        match &self.kind {
            SpecKind::QuadPlant(p) => Ok(p),
            SpecKind::System(_) => Err(CliError::Usage(format!(
                "{}: the feedback command needs a quadrature_plant spec",
                self.path
            ))),
        }
    }
}

pub fn load(path: &Path) -> CliResult<Spec> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    parse(&text, &path.display().to_string())
}

pub fn parse(text: &str, path: &str) -> CliResult<Spec> {
    let raw: Value = serde_json::from_str(text).map_err(|e| CliError::input(format!("{path}: {e}")))?;
    let kind = parse_value(&raw).map_err(|e| match e {
        CliError::Input(m) => CliError::Input(format!("{path}: {m}")),
        other => other,
    })?;
    Ok(Spec {
        path: path.to_string(),
        raw,
        kind,
    })
}

fn parse_value(raw: &Value) -> CliResult<SpecKind> {
    let repr = field(raw, "representation")?
        .as_str()
        .ok_or_else(|| CliError::input("field `representation` must be a string"))?;
    match repr {
        "params" => parse_params(raw).map(SpecKind::System),
        "annihilation" => parse_matrices(raw, Representation::Annihilation).map(SpecKind::System),
        "quadrature" => parse_matrices(raw, Representation::Quadrature).map(SpecKind::System),
        "quadrature_plant" => parse_quad_plant(raw).map(SpecKind::QuadPlant),
        other => Err(CliError::input(format!(
            "unknown representation `{other}` (expected params, annihilation, quadrature or quadrature_plant)"
        ))),
    }
}

fn parse_params(raw: &Value) -> CliResult<LoadedSystem> {
    let om = parse_matrix(raw, "omega_minus")?;
    let op = parse_matrix(raw, "omega_plus")?;
    let cm = parse_matrix(raw, "c_minus")?;
    let cp = parse_matrix(raw, "c_plus")?;
    expect_dim(raw, "n", om.rows)?;
    expect_dim(raw, "m", cm.rows)?;
    let kappa = match raw.get("coupling_scale_sq") {
        Some(v) => Some(parse_entry(v, "coupling_scale_sq", 0, 0)?),
        None => None,
    };
    let exact = (|| -> Result<ExactStateSpace, String> {
        let k = match &kappa {
            Some(e) => e
                .exact
                .clone()
                .ok_or("field `coupling_scale_sq` is a floating-point number")?,
            None => Q::one(),
        };
        let p = ExactParams::new(om.exact()?, op.exact()?, cm.exact()?, cp.exact()?, k).map_err(|e| e.to_string())?;
        build_exact_state_space(&p).map_err(|e| e.to_string())
    })();
    let mut c_minus = cm.float()?;
    let mut c_plus = cp.float()?;
    if let Some(k) = &kappa {
        if k.value.im != 0.0 || k.value.re <= 0.0 {
            return Err(CliError::input("field `coupling_scale_sq` must be a positive real"));
        }
        let s = k.value.re.sqrt();
        c_minus = c_minus.scale_real(s);
        c_plus = c_plus.scale_real(s);
    }
    let params = QSystemParams::new(om.float()?, op.float()?, c_minus, c_plus)?;
    Ok(LoadedSystem {
        float: build_state_space(&params)?,
        exact,
    })
}

fn parse_matrices(raw: &Value, repr: Representation) -> CliResult<LoadedSystem> {
    let mats = ["A", "B", "C", "D"]
        .iter()
        .map(|n| parse_matrix(raw, n))
        .collect::<CliResult<Vec<_>>>()?;
    let float = StateSpace::new(
        mats[0].float()?,
        mats[1].float()?,
        mats[2].float()?,
        mats[3].float()?,
        repr,
    )?;
    let exact = (|| -> Result<ExactStateSpace, String> {
        ExactStateSpace::new(
            mats[0].exact()?,
            mats[1].exact()?,
            mats[2].exact()?,
            mats[3].exact()?,
            repr,
        )
        .map_err(|e| e.to_string())
    })();
    Ok(LoadedSystem { float, exact })
}

fn exact_scalar(obj: &Value, name: &str) -> CliResult<Q> {
    parse_scalar(obj, name)?.exact.ok_or_else(|| {
        CliError::Exactness(format!(
            "field `{name}` is a floating-point number; feedback analysis is exact, give it as a rational string"
        ))
    })
}

fn parse_quad_plant(raw: &Value) -> CliResult<QuadPlantParams> {
    let omega = exact_scalar(raw, "omega_plus")?;
    let p = match (raw.get("c_q"), raw.get("c_p"), raw.get("coupling")) {
        (Some(_), Some(_), None) => QuadPlantParams::new(omega, exact_scalar(raw, "c_q")?, exact_scalar(raw, "c_p")?)?,
        (None, None, Some(_)) => QuadPlantParams::from_coupling(omega, exact_scalar(raw, "coupling")?)?,
        _ => {
            return Err(CliError::input(
                "give either both `c_q` and `c_p`, or `coupling` (their product)",
            ))
        }
    };
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entries_and_exactness() {
        let s = parse(
            r#"{"representation":"annihilation","A":[[["-1/2","1"]]],"B":[[1]],"C":[[0.5]],"D":[["1"]]}"#,
            "t",
        )
        .unwrap();
        let sys = s.system().unwrap();
        assert_eq!(sys.float.a[(0, 0)], Complex::new(-0.5, 1.0));
        assert!(sys.exact.is_err());
        assert!(sys.require_exact().is_err());
    }

    #[test]
    fn params_spec_builds_exact_and_float() {
        let s = parse(
            r#"{"representation":"params","n":1,"m":1,"omega_minus":[[0]],"omega_plus":[[["0","1/2"]]],
                "c_minus":[[1]],"c_plus":[[0]],"coupling_scale_sq":"2"}"#,
            "t",
        )
        .unwrap();
        let sys = s.system().unwrap();
        let e = sys.require_exact().unwrap().to_float().unwrap();
        assert!((&e.a - &sys.float.a).max_abs() < 1e-15);
    }

    #[test]
    fn errors_carry_context() {
        let e = parse(r#"{"representation":"params","omega_minus":[[1,2]]}"#, "x.json").unwrap_err();
        assert!(e.to_string().contains("x.json"));
        let e = parse("{ nope", "y.json").unwrap_err();
        assert!(e.to_string().contains("line 1"));
        let e = parse(r#"{"representation":"annihilation","A":[[1,2],[3]]}"#, "z").unwrap_err();
        assert!(e.to_string().contains("row 1"));
    }

    #[test]
    fn quadrature_plant() {
        let s = parse(
            r#"{"representation":"quadrature_plant","omega_plus":["0","-3"],"coupling":"2"}"#,
            "p",
        )
        .unwrap();
        assert_eq!(s.quad_plant().unwrap().coupling(), &Q::from_int(2));
        let e = parse(
            r#"{"representation":"quadrature_plant","omega_plus":[0,-3],"coupling":0.5}"#,
            "p",
        )
        .unwrap_err();
        assert!(matches!(e, CliError::Exactness(_)));
    }
}
