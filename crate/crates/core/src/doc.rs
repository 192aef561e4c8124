//! JSON documents: pp-divisors, morphisms, Galois actions and downgrade
//! inputs. Every document carries `"version": "ppdiv/1"` and a `"kind"`;
//! unknown fields are rejected and rationals are exact `"p/q"` strings.

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::base::{BaseVariety, PrimeDivisor, RationalFunction, SemilinearBaseMap, Twist};
use crate::convex::{Coefficient, Cone, TailedPolyhedron, ToricFan};
use crate::downgrade::DowngradeInput;
use crate::exactnum::rational::{format_rational, parse_rational};
use crate::exactnum::{Field, Poly, QuadElement, Rational};
use crate::galois::{ActionGroup, SemilinearAction};
use crate::lattice::{LatticeMorphism, LatticeVector};
use crate::ppdiv::{PPDivMorphism, Plurifunction, PolyhedralDivisor};

pub const VERSION: &str = "ppdiv/1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DocError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported version {0:?}, expected \"ppdiv/1\"")]
    Version(String),
    #[error("unknown document kind {0:?}")]
    UnknownKind(String),
    #[error("expected a {expected} document, found {found:?}")]
    WrongKind { expected: &'static str, found: String },
    #[error("{}", render_issues(.0))]
    Invalid(Vec<String>),
}

fn render_issues(issues: &[String]) -> String {
    let mut s = format!("{} validation error(s)", issues.len());
    for i in issues {
        s.push_str("\n  - ");
        s.push_str(i);
    }
    s
}

impl From<serde_json::Error> for DocError {
    fn from(e: serde_json::Error) -> Self {
        let full = e.to_string();
        // serde_json appends " at line L column C"
        let message = full
            .rsplit_once(" at line ")
            .map_or(full.as_str(), |(m, _)| m)
            .to_string();
        DocError::Parse {
            line: e.line(),
            column: e.column(),
            message,
        }
    }
}

fn invalid(msg: impl std::fmt::Display) -> DocError {
    DocError::Invalid(vec![msg.to_string()])
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PPDivDoc {
    pub note: Option<String>,
    pub divisor: PolyhedralDivisor,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismDoc {
    pub note: Option<String>,
    pub morphism: PPDivMorphism,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionDoc {
    pub note: Option<String>,
    pub field: Field,
    pub action: SemilinearAction,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DowngradeDoc {
    pub note: Option<String>,
    pub input: DowngradeInput,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Document {
    PPDivisor(PPDivDoc),
    Morphism(MorphismDoc),
    Action(ActionDoc),
    DowngradeInput(DowngradeDoc),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::PPDivisor(_) => "ppdivisor",
            Document::Morphism(_) => "morphism",
            Document::Action(_) => "action",
            Document::DowngradeInput(_) => "downgrade-input",
        }
    }

    pub fn parse(text: &str) -> Result<Document, DocError> {
        let header: Header = serde_json::from_str(text)?;
        if header.version != VERSION {
            return Err(DocError::Version(header.version));
        }
        match header.kind.as_str() {
            "ppdivisor" => Ok(Document::PPDivisor(serde_json::from_str::<RawPPDiv>(text)?.build()?)),
            "morphism" => Ok(Document::Morphism(serde_json::from_str::<RawMorphism>(text)?.build()?)),
            "action" => Ok(Document::Action(serde_json::from_str::<RawAction>(text)?.build()?)),
            "downgrade-input" => Ok(Document::DowngradeInput(
                serde_json::from_str::<RawDowngrade>(text)?.build()?,
            )),
            other => Err(DocError::UnknownKind(other.to_string())),
        }
    }

    /// Indented JSON with a trailing newline; arrays of numbers and strings
    /// stay on one line. Deterministic.
    pub fn to_json(&self) -> String {
        let v = match self {
            Document::PPDivisor(d) => serde_json::to_value(RawPPDiv::from_doc(d)),
            Document::Morphism(d) => serde_json::to_value(RawMorphism::from_doc(d)),
            Document::Action(d) => serde_json::to_value(RawAction::from_doc(d)),
            Document::DowngradeInput(d) => serde_json::to_value(RawDowngrade::from_doc(d)),
        };
        let mut out = String::new();
        write_value(&v.expect("documents serialize"), 0, &mut out);
        out.push('\n');
        out
    }

    pub fn into_ppdivisor(self) -> Result<PPDivDoc, DocError> {
        match self {
            Document::PPDivisor(d) => Ok(d),
            other => Err(DocError::WrongKind {
                expected: "ppdivisor",
                found: other.kind().into(),
            }),
        }
    }

    pub fn into_morphism(self) -> Result<MorphismDoc, DocError> {
        match self {
            Document::Morphism(d) => Ok(d),
            other => Err(DocError::WrongKind {
                expected: "morphism",
                found: other.kind().into(),
            }),
        }
    }

    pub fn into_action(self) -> Result<ActionDoc, DocError> {
        match self {
            Document::Action(d) => Ok(d),
            other => Err(DocError::WrongKind {
                expected: "action",
                found: other.kind().into(),
            }),
        }
    }

    pub fn into_downgrade_input(self) -> Result<DowngradeDoc, DocError> {
        match self {
            Document::DowngradeInput(d) => Ok(d),
            other => Err(DocError::WrongKind {
                expected: "downgrade-input",
                found: other.kind().into(),
            }),
        }
    }
}

pub fn ppdivisor_to_json(d: &PolyhedralDivisor, note: Option<String>) -> String {
    Document::PPDivisor(PPDivDoc {
        note,
        divisor: d.clone(),
    })
    .to_json()
}

fn is_flat(v: &serde_json::Value) -> bool {
    use serde_json::Value;
    match v {
        Value::Array(items) => items.iter().all(|x| !matches!(x, Value::Object(_)) && is_flat(x)),
        Value::Object(_) => false,
        _ => true,
    }
}

fn write_value(v: &serde_json::Value, indent: usize, out: &mut String) {
    use serde_json::Value;
    let pad = "  ".repeat(indent + 1);
    match v {
        Value::Object(map) if !map.is_empty() => {
            out.push_str("{\n");
            for (i, (k, x)) in map.iter().enumerate() {
                out.push_str(&pad);
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_value(x, indent + 1, out);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&"  ".repeat(indent));
            out.push('}');
        }
        Value::Array(items) if !is_flat(v) => {
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                out.push_str(&pad);
                write_value(x, indent + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&"  ".repeat(indent));
            out.push(']');
        }
        Value::Array(items) => {
            out.push('[');
            for (i, x) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_value(x, indent, out);
            }
            out.push(']');
        }
        other => out.push_str(&other.to_string()),
    }
}

#[derive(Deserialize)]
struct Header {
    version: String,
    kind: String,
}

fn is_false(b: &bool) -> bool {
    !*b
}

// ---- scalars -------------------------------------------------------------

fn rational(s: &str) -> Result<Rational, DocError> {
    parse_rational(s).map_err(invalid)
}

fn element(s: &str, field: Field) -> Result<QuadElement, DocError> {
    let x = QuadElement::parse(s).map_err(invalid)?;
    if !field.contains(&x) {
        return Err(invalid(format!("{s:?} does not lie in {field}")));
    }
    Ok(x.in_field(field))
}

fn field_name(f: Field) -> String {
    match f {
        Field::Rationals => "Q".into(),
        Field::Quadratic(d) => format!("Q(sqrt {d})"),
    }
}

fn field_from(s: &str) -> Result<Field, DocError> {
    Field::parse(s).map_err(invalid)
}

fn cone_from(rank: usize, gens: &[Vec<i64>], what: &str) -> Result<Cone, DocError> {
    if let Some(g) = gens.iter().find(|g| g.len() != rank) {
        return Err(invalid(format!("{what}: generator {g:?} does not have rank {rank}")));
    }
    let g: Vec<LatticeVector> = gens.iter().map(|g| LatticeVector(g.clone())).collect();
    Cone::new(rank, &g).map_err(|e| invalid(format!("{what}: {e}")))
}

fn cone_to(c: &Cone) -> Vec<Vec<i64>> {
    c.generators().into_iter().map(|v| v.0).collect()
}

fn matrix_from(rows: &[Vec<i64>], what: &str) -> Result<LatticeMorphism, DocError> {
    let cols = rows.first().map_or(0, Vec::len);
    if rows.is_empty() || cols == 0 {
        return Err(invalid(format!("{what}: empty matrix")));
    }
    LatticeMorphism::from_rows(rows, cols).map_err(|e| invalid(format!("{what}: {e}")))
}

fn poly_from(coeffs: &[String], field: Field) -> Result<Poly, DocError> {
    let c: Result<Vec<QuadElement>, DocError> = coeffs.iter().map(|s| element(s, field)).collect();
    Ok(Poly::new(c?))
}

fn poly_to(p: &Poly) -> Vec<String> {
    p.coeffs().iter().map(ToString::to_string).collect()
}

// ---- points and functions ------------------------------------------------

#[derive(Serialize, Deserialize, Clone, Debug)]
#[serde(untagged)]
enum RawPoint {
    Named(String),
    At(AtPoint),
    Poly(PolyPoint),
    Ray(RayPoint),
}

#[derive(Serialize, Deserialize, Clone, Debug)]
#[serde(deny_unknown_fields)]
struct AtPoint {
    at: String,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
#[serde(deny_unknown_fields)]
struct PolyPoint {
    poly: Vec<String>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
#[serde(deny_unknown_fields)]
struct RayPoint {
    ray: usize,
}

impl RawPoint {
    fn build(&self, field: Field) -> Result<PrimeDivisor, DocError> {
        match self {
            RawPoint::Named(s) if s == "inf" => Ok(PrimeDivisor::Infinity),
            RawPoint::Named(s) => Err(invalid(format!(
                "unknown point {s:?}; use \"inf\", {{\"at\": …}} or {{\"poly\": […]}}"
            ))),
            RawPoint::At(a) => Ok(PrimeDivisor::at(&element(&a.at, field)?)),
            RawPoint::Poly(p) => {
                let q = poly_from(&p.poly, field)?;
                if q.degree().unwrap_or(0) == 0 {
                    return Err(invalid("a point polynomial must be nonconstant"));
                }
                Ok(PrimeDivisor::Point(q.monic()))
            }
            RawPoint::Ray(r) => Ok(PrimeDivisor::Ray(r.ray)),
        }
    }

    fn from_prime(p: &PrimeDivisor) -> RawPoint {
        match p {
            PrimeDivisor::Infinity => RawPoint::Named("inf".into()),
            PrimeDivisor::Ray(i) => RawPoint::Ray(RayPoint { ray: *i }),
            PrimeDivisor::Point(q) if q.degree() == Some(1) => RawPoint::At(AtPoint {
                at: (-&q.coeff(0)).to_string(),
            }),
            PrimeDivisor::Point(q) => RawPoint::Poly(PolyPoint { poly: poly_to(q) }),
        }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug)]
#[serde(deny_unknown_fields)]
struct RawFactor {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    at: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    poly: Option<Vec<String>>,
    exp: i64,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
#[serde(deny_unknown_fields)]
struct RawFunction {
    #[serde(default = "one_string")]
    constant: String,
    #[serde(default)]
    factors: Vec<RawFactor>,
}

fn one_string() -> String {
    "1".into()
}

impl RawFunction {
    fn build(&self, field: Field) -> Result<RationalFunction, DocError> {
        let c = element(&self.constant, field)?;
        if c.is_zero() {
            return Err(invalid("the constant of a rational function must be nonzero"));
        }
        let mut factors = Vec::new();
        for f in &self.factors {
            let p = match (&f.at, &f.poly) {
                (Some(a), None) => Poly::linear(&element(a, field)?),
                (None, Some(p)) => poly_from(p, field)?,
                _ => return Err(invalid("a factor needs exactly one of \"at\" and \"poly\"")),
            };
            if p.is_zero() {
                return Err(invalid("a factor must be a nonzero polynomial"));
            }
            factors.push((p, f.exp));
        }
        Ok(RationalFunction::from_factors(c, factors))
    }

    fn from_function(f: &RationalFunction) -> RawFunction {
        RawFunction {
            constant: f.constant_part().to_string(),
            factors: f
                .factors()
                .iter()
                .map(|(p, &e)| {
                    if p.degree() == Some(1) {
                        RawFactor {
                            at: Some((-&p.coeff(0)).to_string()),
                            poly: None,
                            exp: e,
                        }
                    } else {
                        RawFactor {
                            at: None,
                            poly: Some(poly_to(p)),
                            exp: e,
                        }
                    }
                })
                .collect(),
        }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug)]
#[serde(deny_unknown_fields)]
struct RawPluriTerm {
    v: Vec<i64>,
    f: RawFunction,
}

fn pluri_from(rank: usize, terms: &[RawPluriTerm], field: Field) -> Result<Plurifunction, DocError> {
    let mut out = Vec::new();
    for t in terms {
        if t.v.len() != rank {
            return Err(invalid(format!(
                "plurifunction vector {:?} does not have rank {rank}",
                t.v
            )));
        }
        out.push((LatticeVector(t.v.clone()), t.f.build(field)?));
    }
    Plurifunction::new(rank, out).map_err(invalid)
}

fn pluri_to(p: &Plurifunction) -> Vec<RawPluriTerm> {
    p.terms()
        .iter()
        .map(|(v, f)| RawPluriTerm {
            v: v.0.clone(),
            f: RawFunction::from_function(f),
        })
        .collect()
}

fn moebius_from(m: &[[String; 2]; 2], twist: &str, field: Field) -> Result<SemilinearBaseMap, DocError> {
    let twist = match twist {
        "id" => Twist::Identity,
        "conj" => Twist::Conjugation,
        other => return Err(invalid(format!("unknown twist {other:?}; use \"id\" or \"conj\""))),
    };
    if twist == Twist::Conjugation && field == Field::Rationals {
        return Err(invalid("the twist \"conj\" needs a quadratic field"));
    }
    let e = |s: &String| element(s, field);
    let matrix = [[e(&m[0][0])?, e(&m[0][1])?], [e(&m[1][0])?, e(&m[1][1])?]];
    SemilinearBaseMap::new(matrix, twist, field).map_err(invalid)
}

fn moebius_to(psi: &SemilinearBaseMap) -> [[String; 2]; 2] {
    let m = &psi.matrix;
    [
        [m[0][0].to_string(), m[0][1].to_string()],
        [m[1][0].to_string(), m[1][1].to_string()],
    ]
}

// ---- pp-divisors ---------------------------------------------------------

#[derive(Serialize, Deserialize, Clone, Debug)]
#[serde(deny_unknown_fields)]
struct RawBase {
    kind: String,
    field: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    removed: Vec<RawPoint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    fan: Option<ToricFan>,
}

impl RawBase {
    fn build(&self) -> Result<BaseVariety, DocError> {
        let field = field_from(&self.field)?;
        let base = match (self.kind.as_str(), &self.fan) {
            ("P1", None) => BaseVariety::ProjLine(field),
            ("A1", None) => BaseVariety::AffLine(field),
            ("toric", Some(fan)) => {
                fan.validate().map_err(|e| invalid(format!("base fan: {e}")))?;
                if !self.removed.is_empty() {
                    return Err(invalid("a toric base has no removed points"));
                }
                return Ok(BaseVariety::Toric {
                    fan: fan.clone(),
                    field,
                });
            }
            ("toric", None) => return Err(invalid("a toric base needs a \"fan\"")),
            (k @ ("P1" | "A1"), Some(_)) => return Err(invalid(format!("a {k} base has no fan"))),
            (other, _) => {
                return Err(invalid(format!(
                    "unknown base kind {other:?}; use \"P1\", \"A1\" or \"toric\""
                )))
            }
        };
        let removed: Result<Vec<PrimeDivisor>, DocError> = self.removed.iter().map(|p| p.build(field)).collect();
        base.remove(&removed?).map_err(invalid)
    }

    fn from_base(b: &BaseVariety) -> RawBase {
        let field = field_name(b.field());
        match b {
            BaseVariety::ProjLine(_) => RawBase {
                kind: "P1".into(),
                field,
                removed: Vec::new(),
                fan: None,
            },
            BaseVariety::AffLine(_) => RawBase {
                kind: "A1".into(),
                field,
                removed: Vec::new(),
                fan: None,
            },
            BaseVariety::Punctured { removed, .. } => RawBase {
                kind: "P1".into(),
                field,
                removed: removed.iter().map(RawPoint::from_prime).collect(),
                fan: None,
            },
            BaseVariety::Toric { fan, .. } => RawBase {
                kind: "toric".into(),
                field,
                removed: Vec::new(),
                fan: Some(fan.clone()),
            },
        }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug)]
#[serde(deny_unknown_fields)]
struct RawPolyhedron {
    vertices: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tail: Option<Vec<Vec<i64>>>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
#[serde(untagged)]
enum RawCoefficient {
    Empty(String),
    Polyhedron(RawPolyhedron),
}

#[derive(Serialize, Deserialize, Clone, Debug)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    divisor: RawPoint,
    polyhedron: RawCoefficient,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
#[serde(deny_unknown_fields)]
struct RawPPDiv {
    version: String,
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    note: Option<String>,
    lattice_rank: usize,
    tail: Vec<Vec<i64>>,
    base: RawBase,
    entries: Vec<RawEntry>,
    #[serde(default, skip_serializing_if = "is_false")]
    proper_by_construction: bool,
}

impl RawPPDiv {
    fn build(&self) -> Result<PPDivDoc, DocError> {
        let rank = self.lattice_rank;
        let tail = cone_from(rank, &self.tail, "tail")?;
        if !tail.is_pointed() {
            return Err(invalid("tail: the tail cone must be pointed"));
        }
        let base = self.base.build()?;
        let field = base.field();
        let mut issues = Vec::new();
        let mut entries: Vec<(PrimeDivisor, Coefficient)> = Vec::new();
        for (i, e) in self.entries.iter().enumerate() {
            let label = |p: Option<&PrimeDivisor>| match p {
                Some(p) => format!("entry {i} ({p})"),
                None => format!("entry {i}"),
            };
            let p = match e.divisor.build(field) {
                Ok(p) => p,
                Err(err) => {
                    issues.push(format!("{}: {err}", label(None)));
                    continue;
                }
            };
            if let Err(err) = base.check_divisor(&p) {
                issues.push(format!("{}: {err}", label(Some(&p))));
            }
            if entries.iter().any(|(q, _)| *q == p) {
                issues.push(format!("{}: duplicate divisor", label(Some(&p))));
            }
            match build_coefficient(&e.polyhedron, rank, &tail) {
                Ok(c) => entries.push((p, c)),
                Err(msg) => issues.push(format!("{}: {msg}", label(Some(&p)))),
            }
        }
        if !issues.is_empty() {
            return Err(DocError::Invalid(issues));
        }
        let mut d = PolyhedralDivisor::new(rank, tail, base, entries).map_err(invalid)?;
        if self.proper_by_construction {
            d = d.mark_proper_by_construction();
        }
        Ok(PPDivDoc {
            note: self.note.clone(),
            divisor: d,
        })
    }

    fn from_doc(doc: &PPDivDoc) -> RawPPDiv {
        let d = &doc.divisor;
        RawPPDiv {
            version: VERSION.into(),
            kind: "ppdivisor".into(),
            note: doc.note.clone(),
            lattice_rank: d.lattice_rank(),
            tail: cone_to(d.tail()),
            base: RawBase::from_base(d.base()),
            entries: d
                .entries()
                .iter()
                .map(|(p, c)| RawEntry {
                    divisor: RawPoint::from_prime(p),
                    polyhedron: match c.as_polyhedron() {
                        None => RawCoefficient::Empty("empty".into()),
                        Some(poly) => RawCoefficient::Polyhedron(RawPolyhedron {
                            vertices: poly
                                .vertices()
                                .iter()
                                .map(|v| v.iter().map(format_rational).collect())
                                .collect(),
                            tail: None,
                        }),
                    },
                })
                .collect(),
            proper_by_construction: d.proper_by_construction(),
        }
    }
}

fn build_coefficient(c: &RawCoefficient, rank: usize, tail: &Cone) -> Result<Coefficient, String> {
    match c {
        RawCoefficient::Empty(s) if s == "empty" => Ok(Coefficient::Empty {
            rank,
            tail: tail.clone(),
        }),
        RawCoefficient::Empty(s) => Err(format!("unknown coefficient {s:?}; use \"empty\" or a polyhedron")),
        RawCoefficient::Polyhedron(p) => {
            if let Some(t) = &p.tail {
                let own = cone_from(rank, t, "polyhedron tail").map_err(|e| e.to_string())?;
                if own != *tail {
                    return Err(format!("tail cone {own} differs from the divisor tail {tail}"));
                }
            }
            if p.vertices.is_empty() {
                return Err("a polyhedron needs at least one vertex".into());
            }
            let mut pts = Vec::new();
            for v in &p.vertices {
                if v.len() != rank {
                    return Err(format!("vertex {v:?} does not have rank {rank}"));
                }
                let q: Result<Vec<Rational>, DocError> = v.iter().map(|s| rational(s)).collect();
                pts.push(q.map_err(|e| e.to_string())?);
            }
            TailedPolyhedron::new(rank, &pts, tail)
                .map(Coefficient::Polyhedron)
                .map_err(|e| e.to_string())
        }
    }
}

// ---- morphisms and actions -----------------------------------------------

#[derive(Serialize, Deserialize, Clone, Debug)]
#[serde(deny_unknown_fields)]
struct RawMorphism {
    version: String,
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    note: Option<String>,
    field: String,
    moebius: [[String; 2]; 2],
    twist: String,
    #[serde(rename = "F")]
    lattice_map: Vec<Vec<i64>>,
    #[serde(default)]
    plurifunction: Vec<RawPluriTerm>,
}

impl RawMorphism {
    fn build(&self) -> Result<MorphismDoc, DocError> {
        let field = field_from(&self.field)?;
        let psi = moebius_from(&self.moebius, &self.twist, field)?;
        let f = matrix_from(&self.lattice_map, "F")?;
        let pluri = pluri_from(f.target_rank(), &self.plurifunction, field)?;
        Ok(MorphismDoc {
            note: self.note.clone(),
            morphism: PPDivMorphism::new(psi, f, pluri).map_err(invalid)?,
        })
    }

    fn from_doc(doc: &MorphismDoc) -> RawMorphism {
        let m = &doc.morphism;
        RawMorphism {
            version: VERSION.into(),
            kind: "morphism".into(),
            note: doc.note.clone(),
            field: field_name(m.psi.field),
            moebius: moebius_to(&m.psi),
            twist: m.psi.twist.to_string(),
            lattice_map: m.lattice_map.rows(),
            plurifunction: pluri_to(&m.pluri),
        }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug)]
#[serde(deny_unknown_fields)]
struct RawGenerator {
    moebius: [[String; 2]; 2],
    twist: String,
    #[serde(rename = "F")]
    lattice_map: Vec<Vec<i64>>,
    #[serde(default)]
    plurifunction: Vec<RawPluriTerm>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
#[serde(deny_unknown_fields)]
struct RawAction {
    version: String,
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    note: Option<String>,
    d: i64,
    generator: RawGenerator,
}

impl RawAction {
    fn build(&self) -> Result<ActionDoc, DocError> {
        let field = Field::quadratic(self.d).map_err(invalid)?;
        let g = &self.generator;
        let psi = moebius_from(&g.moebius, &g.twist, field)?;
        let f = matrix_from(&g.lattice_map, "F")?;
        let pluri = pluri_from(f.target_rank(), &g.plurifunction, field)?;
        let generator = PPDivMorphism::new(psi, f, pluri).map_err(invalid)?;
        let group = match generator.psi.twist {
            Twist::Conjugation => ActionGroup::Z2,
            Twist::Identity => ActionGroup::Trivial,
        };
        Ok(ActionDoc {
            note: self.note.clone(),
            field,
            action: SemilinearAction { group, generator },
        })
    }

    fn from_doc(doc: &ActionDoc) -> RawAction {
        let g = &doc.action.generator;
        RawAction {
            version: VERSION.into(),
            kind: "action".into(),
            note: doc.note.clone(),
            d: doc.field.radicand(),
            generator: RawGenerator {
                moebius: moebius_to(&g.psi),
                twist: g.psi.twist.to_string(),
                lattice_map: g.lattice_map.rows(),
                plurifunction: pluri_to(&g.pluri),
            },
        }
    }
}

// ---- downgrade inputs ----------------------------------------------------

#[derive(Serialize, Deserialize, Clone, Debug)]
#[serde(deny_unknown_fields)]
struct RawDowngrade {
    version: String,
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    note: Option<String>,
    sigma: Vec<Vec<i64>>,
    #[serde(rename = "F")]
    inclusion: Vec<Vec<i64>>,
    #[serde(rename = "P", default, skip_serializing_if = "Option::is_none")]
    projection: Option<Vec<Vec<i64>>>,
    #[serde(rename = "s", default, skip_serializing_if = "Option::is_none")]
    section: Option<Vec<Vec<i64>>>,
}

impl RawDowngrade {
    fn build(&self) -> Result<DowngradeDoc, DocError> {
        let inclusion = matrix_from(&self.inclusion, "F")?;
        let n = inclusion.target_rank();
        let sigma = cone_from(n, &self.sigma, "sigma")?;
        let projection = self.projection.as_deref().map(|p| matrix_from(p, "P")).transpose()?;
        let section = self.section.as_deref().map(|s| matrix_from(s, "s")).transpose()?;
        if projection.as_ref().is_some_and(|p| p.source_rank() != n) {
            return Err(invalid(format!("P: must have {n} columns")));
        }
        if section
            .as_ref()
            .is_some_and(|s| s.source_rank() != n || s.target_rank() != inclusion.source_rank())
        {
            return Err(invalid(format!("s: must be a {}×{n} matrix", inclusion.source_rank())));
        }
        Ok(DowngradeDoc {
            note: self.note.clone(),
            input: DowngradeInput {
                sigma,
                inclusion,
                projection,
                section,
            },
        })
    }

    fn from_doc(doc: &DowngradeDoc) -> RawDowngrade {
        let i = &doc.input;
        RawDowngrade {
            version: VERSION.into(),
            kind: "downgrade-input".into(),
            note: doc.note.clone(),
            sigma: cone_to(&i.sigma),
            inclusion: i.inclusion.rows(),
            projection: i.projection.as_ref().map(LatticeMorphism::rows),
            section: i.section.as_ref().map(LatticeMorphism::rows),
        }
    }
}
