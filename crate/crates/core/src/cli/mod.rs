//! Command layer: parses a foliation file, runs one computation and builds
//! a JSON report. The binary crate only handles argv, files and exit codes.

pub mod dsl;

use std::time::Instant;

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::holonomy::{
    artin_rees_certify, default_cap, holonomy_filtration, isotropy_algebra_to, linear_holonomy, semisimple_holonomy,
    ArtinReesOutcome, IsotropyData,
};
use crate::liealg::{LieAlgebra, Subspace};
use crate::linalg::dense::Matrix;
use crate::levinorm::{linearize, radical_foliation, verify_connection, DefectReport, JetField, LeviConnection};
use crate::modalg::{FoliationModule, Involutivity};
use crate::poly::{format_rational, parse_rational, Rational};
use crate::vecfield::PolyVectorField;

pub use dsl::{parse_field, parse_spec, FoliationSpec};

/// Exit status for a successful run.
pub const EXIT_OK: i32 = 0;
/// Exit status when the input is rejected.
pub const EXIT_INPUT: i32 = 2;
/// Exit status when an internal invariant check fails.
pub const EXIT_INTERNAL: i32 = 3;

pub fn exit_code(e: &Error) -> i32 {
    if e.is_internal() {
        EXIT_INTERNAL
    } else {
        EXIT_INPUT
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    CheckInvolutive,
    Isotropy,
    Filtration,
    LinearHolonomy,
    Levi,
    ArtinRees { max_degree: Option<u32> },
    Linearize { order: Option<u32> },
    RadicalFoliation { order: Option<u32> },
    /// `connection` is the JSON text of a connection file.
    Verify { connection: String, order: Option<u32> },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::CheckInvolutive => "check-involutive",
            Command::Isotropy => "isotropy",
            Command::Filtration => "filtration",
            Command::LinearHolonomy => "linear-holonomy",
            Command::Levi => "levi",
            Command::ArtinRees { .. } => "artin-rees",
            Command::Linearize { .. } => "linearize",
            Command::RadicalFoliation { .. } => "radical-foliation",
            Command::Verify { .. } => "verify",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: String,
    pub input_hash: String,
    pub payload: Value,
    pub certification: Value,
    pub elapsed_ms: u128,
}

impl Report {
    /// Deterministic part of the report (everything except timing).
    pub fn to_value(&self, with_timing: bool) -> Value {
        let mut m = Map::new();
        m.insert("command".into(), json!(self.command));
        m.insert("input_hash".into(), json!(self.input_hash));
        m.insert("payload".into(), self.payload.clone());
        m.insert("certification".into(), self.certification.clone());
        if with_timing {
            m.insert("timing".into(), json!({ "elapsed_ms": self.elapsed_ms as u64 }));
        }
        Value::Object(m)
    }

    pub fn to_json(&self, with_timing: bool) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value(with_timing)).expect("report serialization");
        s.push('\n');
        s
    }
}

pub fn input_hash(source: &str) -> String {
    hex::encode(Sha256::digest(source.as_bytes()))
}

fn q(x: &Rational) -> Value {
    json!(format_rational(x))
}

fn qvec(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(q).collect())
}

fn qmat(m: &Matrix) -> Value {
    Value::Array(m.iter().map(|r| qvec(r)).collect())
}

fn field(x: &PolyVectorField, names: &[String]) -> Value {
    json!(x.render(names))
}

fn subspace(s: &Subspace) -> Value {
    Value::Array(s.basis().iter().map(|v| qvec(v)).collect())
}

/// Nonzero brackets `[e_i, e_j]` with `i < j`.
pub fn structure_json(g: &LieAlgebra) -> Value {
    let mut out = Vec::new();
    for i in 0..g.dim() {
        for j in i + 1..g.dim() {
            let c = g.constant(i, j);
            if c.iter().any(|x| !num_traits::Zero::is_zero(x)) {
                out.push(json!({ "i": i, "j": j, "bracket": qvec(c) }));
            }
        }
    }
    json!({ "dim": g.dim(), "brackets": out })
}

fn parse_q(v: &Value) -> Result<Rational> {
    v.as_str()
        .and_then(parse_rational)
        .ok_or_else(|| Error::InvalidInput(format!("expected a rational string, found {v}")))
}

/// Inverse of [`structure_json`].
pub fn structure_from_json(v: &Value) -> Result<LieAlgebra> {
    let bad = |m: &str| Error::InvalidInput(format!("structure constants: {m}"));
    let dim = v["dim"].as_u64().ok_or_else(|| bad("missing dim"))? as usize;
    let mut table = vec![vec![vec![Rational::from_integer(0.into()); dim]; dim]; dim];
    for b in v["brackets"].as_array().ok_or_else(|| bad("missing brackets"))? {
        let i = b["i"].as_u64().ok_or_else(|| bad("missing i"))? as usize;
        let j = b["j"].as_u64().ok_or_else(|| bad("missing j"))? as usize;
        let c: Vec<Rational> = b["bracket"]
            .as_array()
            .ok_or_else(|| bad("missing bracket"))?
            .iter()
            .map(parse_q)
            .collect::<Result<_>>()?;
        if i >= dim || j >= dim || c.len() != dim {
            return Err(bad("index out of range"));
        }
        table[j][i] = c.iter().map(|x| -x).collect();
        table[i][j] = c;
    }
    LieAlgebra::new(table)
}

/// Serializable form of a connection.
pub fn connection_json(conn: &LeviConnection, names: &[String]) -> Value {
    json!({
        "variables": names,
        "order": conn.order(),
        "certified_order": conn.certified_order,
        "semisimple": structure_json(&conn.semisimple),
        "images": conn.images.iter().map(|s| field(s.field(), names)).collect::<Vec<_>>(),
        "euler": field(conn.euler.field(), names),
    })
}

/// Reads a connection written by [`connection_json`]. The stored certified
/// order is kept as a claim; `verify` recomputes the defects.
pub fn connection_from_json(text: &str) -> Result<LeviConnection> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("connection file: {e}")))?;
    let bad = |m: &str| Error::InvalidInput(format!("connection file: {m}"));
    let names: Vec<String> = v["variables"]
        .as_array()
        .ok_or_else(|| bad("missing variables"))?
        .iter()
        .map(|x| x.as_str().map(String::from).ok_or_else(|| bad("variable names must be strings")))
        .collect::<Result<_>>()?;
    if names.is_empty() {
        return Err(bad("no variables"));
    }
    let order = v["order"].as_u64().ok_or_else(|| bad("missing order"))? as u32;
    let certified_order = v["certified_order"].as_u64().unwrap_or(0) as u32;
    let semisimple = structure_from_json(&v["semisimple"])?;
    let images: Vec<JetField> = v["images"]
        .as_array()
        .ok_or_else(|| bad("missing images"))?
        .iter()
        .map(|s| {
            let s = s.as_str().ok_or_else(|| bad("images must be strings"))?;
            Ok(JetField::new(&parse_field(s, &names)?, order))
        })
        .collect::<Result<_>>()?;
    if images.len() != semisimple.dim() {
        return Err(bad("one image per basis element required"));
    }
    let euler = parse_field(v["euler"].as_str().ok_or_else(|| bad("missing euler"))?, &names)?;
    Ok(LeviConnection {
        semisimple,
        images,
        euler: JetField::new(&euler, order),
        certified_order,
        classes: Vec::new(),
    })
}

fn defects_json(r: &DefectReport) -> Value {
    Value::Array(
        r.rows
            .iter()
            .map(|d| json!({ "degree": d.degree, "linearity": d.linearity, "flatness": d.flatness }))
            .collect(),
    )
}

fn isotropy_json(iso: &IsotropyData, names: &[String]) -> Value {
    json!({
        "dim": iso.dim(),
        "abelian": iso.algebra.is_abelian(),
        "representatives": iso.representatives.iter().map(|r| field(r, names)).collect::<Vec<_>>(),
        "structure": structure_json(&iso.algebra),
        "linearization": iso.linearization.iter().map(qmat).collect::<Vec<_>>(),
        "filtration_dims": iso.filtration.iter().map(|s| s.dim()).collect::<Vec<_>>(),
        "linear_dim": iso.lin.algebra.dim(),
        "radical_dim": iso.radical.dim(),
        "semisimple_dim": iso.ss.algebra.dim(),
    })
}

fn module_of(spec: &FoliationSpec) -> Result<FoliationModule> {
    FoliationModule::new(spec.generators.clone())
}

/// Parses `source` and runs `command`.
pub fn run(command: &Command, source: &str) -> Result<Report> {
    let start = Instant::now();
    let spec = parse_spec(source)?;
    let names = spec.variables.clone();
    let f = module_of(&spec)?;
    let opt = |o: &Option<u32>, key: &str, default: u32| o.or(spec.options.get(key).copied()).unwrap_or(default);
    let cap = default_cap(&f);
    let (payload, certification) = match command {
        Command::CheckInvolutive => match f.check_involutive()? {
            Involutivity::Closed => (json!({ "closed": true }), json!({ "pairs_checked": pairs(&f) })),
            Involutivity::Witness {
                i,
                j,
                bracket,
                certificate,
            } => (
                json!({
                    "closed": false,
                    "witness": {
                        "i": i,
                        "j": j,
                        "bracket": field(&bracket, &names),
                        "remainder": certificate.remainder().map(|r| field(r, &names)),
                    }
                }),
                json!({ "pairs_checked": pairs(&f) }),
            ),
        },
        Command::Isotropy => {
            let iso = isotropy_algebra_to(&f, cap)?;
            (isotropy_json(&iso, &names), json!({ "filtration_degree_cap": cap }))
        }
        Command::Filtration => {
            let iso = isotropy_algebra_to(&f, cap)?;
            let fil = holonomy_filtration(&f, &iso, cap)?;
            (
                json!({
                    "dims": fil.pieces.iter().map(|s| s.dim()).collect::<Vec<_>>(),
                    "vanishes_at": fil.vanishes_at,
                    "pieces": fil.pieces.iter().map(subspace).collect::<Vec<_>>(),
                }),
                json!({ "degree_cap": cap, "bracket_law_checked": true }),
            )
        }
        Command::LinearHolonomy => {
            let iso = isotropy_algebra_to(&f, cap)?;
            let lin = linear_holonomy(&iso);
            (
                json!({
                    "dim": lin.algebra.dim(),
                    "structure": structure_json(&lin.algebra),
                    "matrices": lin.matrices.iter().map(qmat).collect::<Vec<_>>(),
                    "projection": qmat(&lin.projection),
                }),
                json!({ "kernel_equals_g2": true, "degree_cap": cap }),
            )
        }
        Command::Levi => {
            let iso = isotropy_algebra_to(&f, cap)?;
            let levi = iso.levi()?;
            let ss = semisimple_holonomy(&iso);
            (
                json!({
                    "isotropy_dim": iso.dim(),
                    "radical": subspace(&levi.radical),
                    "semisimple": structure_json(&ss.algebra),
                    "levi_basis": subspace(&levi.levi_basis),
                    "section": qmat(&levi.section),
                    "projection": qmat(&ss.from_isotropy),
                    "from_linear": qmat(&ss.from_linear),
                }),
                json!({ "section_identities": true, "triangle_commutes": true }),
            )
        }
        Command::ArtinRees { max_degree } => {
            let n = opt(max_degree, "max_degree", cap);
            match artin_rees_certify(&f, n)? {
                ArtinReesOutcome::Certified(c) => (
                    json!({
                        "bound": c.bound,
                        "witness": c.witness_lower.as_ref().map(|w| field(&w.field, &names)),
                        "witness_remainder": c.witness_lower.as_ref().map(|w| field(&w.remainder, &names)),
                    }),
                    json!({ "checked_up_to": c.checked_up_to, "unbounded": false }),
                ),
                ArtinReesOutcome::Unbounded { checked_up_to } => (
                    json!({ "bound": Value::Null, "witness": Value::Null, "witness_remainder": Value::Null }),
                    json!({ "checked_up_to": checked_up_to, "unbounded": true }),
                ),
            }
        }
        Command::Linearize { order } => {
            let n = opt(order, "order", 5);
            let iso = isotropy_algebra_to(&f, cap.max(n))?;
            let conn = linearize(&f, &iso, n)?;
            let defects = verify_connection(&conn, n);
            (
                json!({
                    "connection": connection_json(&conn, &names),
                    "defects": defects_json(&defects),
                }),
                json!({
                    "certified_order": conn.certified_order,
                    "statement": format!("flat and linear through order {}", conn.certified_order),
                }),
            )
        }
        Command::RadicalFoliation { order } => {
            let n = opt(order, "order", 5);
            let iso = isotropy_algebra_to(&f, cap.max(n))?;
            let conn = linearize(&f, &iso, n)?;
            let r = radical_foliation(&f, &iso, &conn, n)?;
            (
                json!({
                    "generators": r.generators.iter().map(|g| field(g, &names)).collect::<Vec<_>>(),
                    "per_degree": r.per_degree.iter().map(|d| json!({
                        "degree": d.degree, "module": d.module, "levi_span": d.levi_span, "radical": d.radical,
                    })).collect::<Vec<_>>(),
                    "invariant": r.invariant,
                }),
                json!({ "order": n, "connection_certified_order": conn.certified_order, "degraded": r.degraded }),
            )
        }
        Command::Verify { connection, order } => {
            let conn = connection_from_json(connection)?;
            if conn.nvars() != f.nvars() {
                return Err(Error::DimensionMismatch {
                    expected: f.nvars(),
                    found: conn.nvars(),
                });
            }
            let n = opt(order, "order", conn.order()).min(conn.order());
            let defects = verify_connection(&conn, n);
            let in_module = crate::levinorm::images_in_module(&conn, &f);
            (
                json!({ "defects": defects_json(&defects), "images_in_module": in_module }),
                json!({
                    "order": n,
                    "first_nonzero_degree": defects.first_nonzero(),
                    "claimed_certified_order": conn.certified_order,
                }),
            )
        }
    };
    Ok(Report {
        command: command.name().to_string(),
        input_hash: input_hash(source),
        payload,
        certification,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

fn pairs(f: &FoliationModule) -> usize {
    let r = f.generators().len();
    r * r.saturating_sub(1) / 2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isotropy_of_circles() {
        let r = run(&Command::Isotropy, "vars: x, y; gen: -1*y*dx + x*dy;").unwrap();
        assert_eq!(r.payload["dim"], json!(1));
        assert_eq!(r.payload["abelian"], json!(true));
        assert_eq!(r.payload["semisimple_dim"], json!(0));
    }

    #[test]
    fn exit_codes() {
        let e = run(&Command::Isotropy, "vars: x; gen: dx;").unwrap_err();
        assert_eq!(exit_code(&e), EXIT_INPUT);
        assert_eq!(exit_code(&Error::internal("x")), EXIT_INTERNAL);
    }

    #[test]
    fn reports_are_deterministic() {
        let src = "vars: x, y; gen: x*dy; gen: y*dx; gen: x*dx - y*dy;";
        let a = run(&Command::Levi, src).unwrap();
        let b = run(&Command::Levi, src).unwrap();
        assert_eq!(a.to_json(false), b.to_json(false));
        let back: Value = serde_json::from_str(&a.to_json(false)).unwrap();
        assert_eq!(back, a.to_value(false));
    }

    #[test]
    fn connection_round_trip() {
        let src = "vars: x, y; gen: x*dy; gen: y*dx; gen: x*dx - y*dy;";
        let r = run(&Command::Linearize { order: Some(3) }, src).unwrap();
        let text = serde_json::to_string(&r.payload["connection"]).unwrap();
        let conn = connection_from_json(&text).unwrap();
        assert_eq!(conn.images.len(), 3);
        let v = run(
            &Command::Verify {
                connection: text,
                order: None,
            },
            src,
        )
        .unwrap();
        assert_eq!(v.certification["first_nonzero_degree"], Value::Null);
    }
}
