//! Text formats: matrix literals, `g(sigma=..., h=...)`, group-spec and
//! subalgebra JSON.

use std::fmt;

use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, ParseError, Result};
use crate::family::{Alpha, FamilyKind, HFamily};
use crate::linalg::SymSpan;
use crate::matrix::{Mat2, Mat4, SymMat2};
use crate::parabolic::QElement;
use crate::scalar::Scalar;
use crate::subalgebra::{Ambient, LieSub};
use crate::triple::{ClosedTau, TauMap, Triple};

pub const SCHEMA_VERSION: u32 = 1;

// ---------------------------------------------------------------------------
// Matrix literals

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.src[self.pos..].chars().next().map_or(1, char::len_utf8);
        }
    }

    fn eat(&mut self, c: char, expected: &'static str) -> Result<(), ParseError> {
        self.skip_ws();
        if self.src[self.pos..].starts_with(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(ParseError::Syntax { pos: self.pos, expected })
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn number(&mut self) -> Result<Scalar, ParseError> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let end = rest.find([',', ']']).unwrap_or(rest.len());
        if end == 0 {
            return Err(ParseError::Syntax { pos: self.pos, expected: "a number" });
        }
        let x = rest[..end].parse()?;
        self.pos += end;
        Ok(x)
    }

    fn row(&mut self) -> Result<Vec<Scalar>, ParseError> {
        self.eat('[', "`[`")?;
        let mut out = vec![self.number()?];
        while self.peek() == Some(',') {
            self.pos += 1;
            out.push(self.number()?);
        }
        self.eat(']', "`,` or `]`")?;
        Ok(out)
    }

    fn matrix(&mut self) -> Result<Vec<Vec<Scalar>>, ParseError> {
        self.eat('[', "`[`")?;
        let mut rows = vec![self.row()?];
        while self.peek() == Some(',') {
            self.pos += 1;
            rows.push(self.row()?);
        }
        self.eat(']', "`,` or `]`")?;
        Ok(rows)
    }
}

/// Parses `[[a,b,...],...]` with integer, `p/q` or decimal entries.
pub fn parse_matrix(s: &str) -> Result<Vec<Vec<Scalar>>, ParseError> {
    let mut c = Cursor { src: s, pos: 0 };
    let m = c.matrix()?;
    c.skip_ws();
    if c.pos != s.len() {
        return Err(ParseError::Syntax { pos: c.pos, expected: "end of input" });
    }
    Ok(m)
}

fn square<const N: usize>(rows: Vec<Vec<Scalar>>, name: &'static str) -> Result<[[Scalar; N]; N], ParseError> {
    let shape = ParseError::Shape {
        expected: name,
        rows: rows.len(),
        cols: rows.iter().map(Vec::len).max().unwrap_or(0),
    };
    if rows.len() != N || rows.iter().any(|r| r.len() != N) {
        return Err(shape);
    }
    let v: Vec<[Scalar; N]> = rows
        .into_iter()
        .map(|r| r.try_into().expect("checked length"))
        .collect();
    v.try_into().map_err(|_| shape)
}

pub fn parse_mat2(s: &str) -> Result<Mat2, ParseError> {
    Ok(Mat2(square::<2>(parse_matrix(s)?, "2x2")?))
}

pub fn parse_mat4(s: &str) -> Result<Mat4, ParseError> {
    Ok(Mat4(square::<4>(parse_matrix(s)?, "4x4")?))
}

fn sym_from(m: Mat2, field: &str) -> Result<SymMat2, ParseError> {
    m.to_sym(0.0).ok_or_else(|| ParseError::Field {
        field: field.into(),
        message: format!("{m} is not symmetric"),
    })
}

pub fn parse_sym(s: &str) -> Result<SymMat2, ParseError> {
    sym_from(parse_mat2(s)?, "matrix")
}

/// Parses the `Display` form `g(sigma=[[..]], h=[[..]])`.
pub fn parse_qelement(s: &str) -> Result<QElement> {
    let t = s.trim();
    let inner = t
        .strip_prefix("g(")
        .and_then(|r| r.strip_suffix(')'))
        .ok_or(ParseError::Syntax { pos: 0, expected: "`g(sigma=..., h=...)`" })?;
    let inner = inner.trim_start();
    let body = inner
        .strip_prefix("sigma=")
        .ok_or(ParseError::Syntax { pos: 2, expected: "`sigma=`" })?;
    let split = body
        .find("]]")
        .ok_or(ParseError::Syntax { pos: 2, expected: "`]]`" })?
        + 2;
    let sigma = parse_sym(&body[..split])?;
    let rest = body[split..].trim_start();
    let rest = rest
        .strip_prefix(',')
        .map(str::trim_start)
        .and_then(|r| r.strip_prefix("h="))
        .ok_or(ParseError::Syntax { pos: 2 + split, expected: "`, h=`" })?;
    let h = parse_mat2(rest)?;
    QElement::new(sigma, h)
}

// ---------------------------------------------------------------------------
// JSON

/// A JSON number or a string holding `p/q`, a decimal or `inf`.
#[derive(Clone, Debug, PartialEq)]
pub enum Num {
    Finite(Scalar),
    Inf,
}

impl Num {
    fn scalar(&self, field: &str) -> Result<Scalar, ParseError> {
        match self {
            Num::Finite(x) => Ok(x.clone()),
            Num::Inf => Err(ParseError::Field { field: field.into(), message: "`inf` not allowed".into() }),
        }
    }
}

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        let text = match &v {
            serde_json::Value::Number(n) => n.to_string(),
            serde_json::Value::String(s) => s.trim().to_string(),
            other => return Err(de::Error::custom(format!("expected a number, found {other}"))),
        };
        if text == "inf" {
            return Ok(Num::Inf);
        }
        text.parse().map(Num::Finite).map_err(de::Error::custom)
    }
}

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Num::Inf => s.serialize_str("inf"),
            Num::Finite(x) => match x.as_rational() {
                Some(r) if r.is_integer() => match i64::try_from(r.numer()) {
                    Ok(i) => s.serialize_i64(i),
                    Err(_) => s.serialize_str(&x.to_string()),
                },
                _ => s.serialize_str(&x.to_string()),
            },
        }
    }
}

type MatLit = Vec<Vec<Num>>;

fn mat2_of(m: &MatLit, field: &str) -> Result<Mat2, ParseError> {
    let rows = m
        .iter()
        .map(|r| r.iter().map(|x| x.scalar(field)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    square::<2>(rows, "2x2").map(Mat2).map_err(|e| ParseError::Field { field: field.into(), message: e.to_string() })
}

fn lit_of(m: &Mat2) -> MatLit {
    m.0.iter().map(|r| r.iter().map(|x| Num::Finite(x.clone())).collect()).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HFamilySpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Num>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Num>,
    #[serde(default)]
    pub transposed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conjugator: Option<MatLit>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TauSpec {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau0: Option<MatLit>,
}

/// Group-spec file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    pub schema_version: u32,
    pub sigma_basis: Vec<MatLit>,
    pub h_family: HFamilySpec,
    pub tau: TauSpec,
}

pub const FAMILY_NAMES: [&str; 13] = [
    "Hfull_sigma1",
    "Halpha_sigma1",
    "Hfull_sigma2",
    "Halpha_sigma2",
    "T0",
    "H0_sigma3",
    "H1_sigma3",
    "Hinf_sigma3",
    "Hgamma0_sigma3",
    "K0_sigma3",
    "Kinf_sigma3",
    "L_sigma3",
    "trivial",
];

pub const TAU_KINDS: [&str; 3] = ["zero", "coboundary", "off_diagonal_log"];

fn field(name: &str, message: impl Into<String>) -> ParseError {
    ParseError::Field { field: name.into(), message: message.into() }
}

impl HFamilySpec {
    fn kind(&self) -> Result<FamilyKind, ParseError> {
        use FamilyKind::*;
        let alpha = || -> Result<Alpha, ParseError> {
            match &self.alpha {
                Some(Num::Inf) => Ok(Alpha::Infinity),
                Some(Num::Finite(a)) => Ok(Alpha::Finite(a.clone())),
                None => Err(field("h_family.alpha", "required by this family")),
            }
        };
        let gamma = || -> Result<Scalar, ParseError> {
            self.gamma
                .as_ref()
                .ok_or_else(|| field("h_family.gamma", "required by this family"))?
                .scalar("h_family.gamma")
        };
        let kind = match self.name.as_str() {
            "Hfull_sigma1" => Sigma1Full,
            "Halpha_sigma1" => Sigma1Alpha(alpha()?),
            "Hfull_sigma2" => Sigma2Full,
            "Halpha_sigma2" => Sigma2Alpha(alpha()?),
            "T0" => TriFull,
            "H0_sigma3" => TriUnipotent,
            "H1_sigma3" => TriOne,
            "Hinf_sigma3" => TriScalar,
            "Hgamma0_sigma3" => TriDiag(gamma()?),
            "K0_sigma3" => K0,
            "Kinf_sigma3" => KInf,
            "L_sigma3" => L(gamma()?),
            "trivial" => Trivial,
            other => {
                return Err(ParseError::UnknownFamily {
                    name: other.into(),
                    valid: FAMILY_NAMES.iter().map(|s| s.to_string()).collect(),
                })
            }
        };
        let takes_alpha = matches!(kind, Sigma1Alpha(_) | Sigma2Alpha(_));
        let takes_gamma = matches!(kind, TriDiag(_) | L(_));
        if self.alpha.is_some() && !takes_alpha {
            return Err(field("h_family.alpha", format!("`{}` takes no alpha", self.name)));
        }
        if self.gamma.is_some() && !takes_gamma {
            return Err(field("h_family.gamma", format!("`{}` takes no gamma", self.name)));
        }
        Ok(kind)
    }

    pub fn to_family(&self) -> Result<HFamily, ParseError> {
        let conjugator = match &self.conjugator {
            Some(m) => {
                let c = mat2_of(m, "h_family.conjugator")?;
                if c.det().is_zero() {
                    return Err(field("h_family.conjugator", "singular"));
                }
                Some(c)
            }
            None => None,
        };
        Ok(HFamily { kind: self.kind()?, transposed: self.transposed, conjugator })
    }

    pub fn from_family(h: &HFamily) -> Self {
        let (alpha, gamma) = match &h.kind {
            FamilyKind::Sigma1Alpha(a) | FamilyKind::Sigma2Alpha(a) => (
                Some(match a {
                    Alpha::Infinity => Num::Inf,
                    Alpha::Finite(x) => Num::Finite(x.clone()),
                }),
                None,
            ),
            FamilyKind::TriDiag(g) | FamilyKind::L(g) => (None, Some(Num::Finite(g.clone()))),
            _ => (None, None),
        };
        HFamilySpec {
            name: h.kind.name().into(),
            alpha,
            gamma,
            transposed: h.transposed,
            conjugator: h.conjugator.as_ref().map(lit_of),
        }
    }
}

impl GroupSpec {
    pub fn from_json(s: &str) -> Result<Self, ParseError> {
        let spec: GroupSpec = serde_json::from_str(s).map_err(|e| ParseError::Json(e.to_string()))?;
        if spec.schema_version != SCHEMA_VERSION {
            return Err(field(
                "schema_version",
                format!("unsupported version {} (expected {SCHEMA_VERSION})", spec.schema_version),
            ));
        }
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }

    pub fn from_triple(t: &Triple) -> Result<Self, ParseError> {
        let tau = match &t.tau {
            TauMap::Zero => TauSpec { kind: "zero".into(), tau0: None },
            TauMap::Coboundary(t0) => TauSpec { kind: "coboundary".into(), tau0: Some(lit_of(&t0.to_mat2())) },
            TauMap::Homomorphic(ClosedTau::OffDiagonalLog) => {
                TauSpec { kind: "off_diagonal_log".into(), tau0: None }
            }
            TauMap::Sampled(_) => return Err(field("tau", "sampled tau tables are not serializable")),
        };
        Ok(GroupSpec {
            schema_version: SCHEMA_VERSION,
            sigma_basis: t.sigma.basis().iter().map(|s| lit_of(&s.to_mat2())).collect(),
            h_family: HFamilySpec::from_family(&t.h),
            tau,
        })
    }

    pub fn to_triple(&self) -> Result<Triple, ParseError> {
        let basis = self
            .sigma_basis
            .iter()
            .enumerate()
            .map(|(i, m)| {
                let name = format!("sigma_basis[{i}]");
                sym_from(mat2_of(m, &name)?, &name)
            })
            .collect::<Result<Vec<_>, _>>()?;
        let sigma = SymSpan::new(&basis).map_err(|e| field("sigma_basis", e.to_string()))?;
        let h = self.h_family.to_family()?;
        let tau0 = || -> Result<SymMat2, ParseError> {
            let m = self.tau.tau0.as_ref().ok_or_else(|| field("tau.tau0", "required for coboundary"))?;
            sym_from(mat2_of(m, "tau.tau0")?, "tau.tau0")
        };
        if self.tau.kind != "coboundary" && self.tau.tau0.is_some() {
            return Err(field("tau.tau0", format!("not used by kind `{}`", self.tau.kind)));
        }
        let tau = match self.tau.kind.as_str() {
            "zero" => TauMap::Zero,
            "coboundary" => TauMap::Coboundary(tau0()?),
            "off_diagonal_log" => TauMap::Homomorphic(ClosedTau::OffDiagonalLog),
            other => {
                return Err(field("tau.kind", format!("unknown kind `{other}`; valid kinds: {}", TAU_KINDS.join(", "))))
            }
        };
        Ok(Triple::new(sigma, h, tau))
    }
}

/// Parses a group-spec file straight to a triple.
pub fn parse_group_spec(s: &str) -> Result<Triple, ParseError> {
    GroupSpec::from_json(s)?.to_triple()
}

/// Inline generator form for the subalgebra classifier.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubalgebraSpec {
    pub ambient: String,
    pub generators: Vec<MatLit>,
}

impl SubalgebraSpec {
    pub fn from_json(s: &str) -> Result<Self, ParseError> {
        serde_json::from_str(s).map_err(|e| ParseError::Json(e.to_string()))
    }

    pub fn ambient(&self) -> Result<Ambient, ParseError> {
        match self.ambient.as_str() {
            "sigma1" => Ok(Ambient::Sigma1),
            "sigma2" => Ok(Ambient::Sigma2),
            "sigma3" => Ok(Ambient::Sigma3),
            other => Err(field("ambient", format!("unknown ambient `{other}`; valid: sigma1, sigma2, sigma3"))),
        }
    }

    pub fn to_liesub(&self, tol: f64) -> Result<LieSub> {
        let ambient = self.ambient()?;
        let gens = self
            .generators
            .iter()
            .enumerate()
            .map(|(i, m)| mat2_of(m, &format!("generators[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        LieSub::new(ambient, gens, tol)
    }
}

pub fn parse_subalgebra(s: &str, tol: f64) -> Result<LieSub> {
    SubalgebraSpec::from_json(s).map_err(Error::from)?.to_liesub(tol)
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_json())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::{sigma3, sigma5};

    #[test]
    fn matrix_literals() {
        let m = parse_mat2("[[1,0],[0,-1]]").unwrap();
        assert_eq!(m, Mat2::from_ints(1, 0, 0, -1));
        let m = parse_mat2(" [ [1/2, 0], [0, 2.5] ] ").unwrap();
        assert_eq!(m.get(0, 0), &Scalar::ratio(1, 2));
        assert_eq!(m.get(1, 1), &Scalar::ratio(5, 2));
        assert!(matches!(parse_mat2("[[1,2,3],[4,5,6]]"), Err(ParseError::Shape { .. })));
        assert!(matches!(parse_mat2("[[1,2],[3,4]] x"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_mat2("[[1,2],[3,]]"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_mat2("[[1/0,2],[3,4]]"), Err(ParseError::ZeroDenominator)));
        assert!(parse_sym("[[1,2],[3,4]]").is_err());
        assert_eq!(parse_mat4("[[1,0,0,0],[0,0,0,-1],[0,0,1,0],[0,1,0,0]]").unwrap(), crate::constants::w0());
    }

    #[test]
    fn qelement_round_trip() {
        let g = QElement::new(SymMat2::from_ints(1, -2, 3), Mat2::new(
            Scalar::ratio(1, 2), Scalar::zero(), Scalar::ratio(-3, 7), Scalar::int(5),
        ))
        .unwrap();
        let text = g.to_string();
        assert_eq!(parse_qelement(&text).unwrap(), g);
        assert_eq!(parse_qelement(&text).unwrap().to_string(), text);
        assert!(parse_qelement("g(sigma=[[1,0],[0,1]])").is_err());
        assert!(parse_qelement("g(sigma=[[1,0],[0,1]], h=[[0,0],[0,0]])").is_err());
    }

    const HINF: &str = r#"{
        "schema_version": 1,
        "sigma_basis": [[[1,0],[0,0]]],
        "h_family": {"name": "Hinf_sigma3"},
        "tau": {"kind": "zero"}
    }"#;

    #[test]
    fn group_spec_parses() {
        let t = parse_group_spec(HINF).unwrap();
        assert!(t.sigma.same_span(&SymSpan::new(&[sigma3()]).unwrap(), 0.0));
        assert_eq!(t.h.kind, FamilyKind::TriScalar);
        let spec = GroupSpec::from_json(HINF).unwrap();
        assert_eq!(GroupSpec::from_json(&spec.to_json()).unwrap(), spec);
        let back = GroupSpec::from_triple(&t).unwrap();
        assert_eq!(back.to_triple().unwrap(), t);
    }

    #[test]
    fn group_spec_errors() {
        let unknown = HINF.replace("Hinf_sigma3", "Hbogus");
        match parse_group_spec(&unknown) {
            Err(ParseError::UnknownFamily { valid, .. }) => assert!(valid.contains(&"L_sigma3".to_string())),
            other => panic!("{other:?}"),
        }
        let extra = HINF.replace("\"tau\"", "\"extra\": 1, \"tau\"");
        assert!(matches!(parse_group_spec(&extra), Err(ParseError::Json(_))));
        let version = HINF.replace("\"schema_version\": 1", "\"schema_version\": 9");
        assert!(matches!(parse_group_spec(&version), Err(ParseError::Field { .. })));
        let missing = HINF.replace("Hinf_sigma3", "L_sigma3");
        assert!(matches!(parse_group_spec(&missing), Err(ParseError::Field { .. })));
        let cob = HINF.replace(r#"{"kind": "zero"}"#, r#"{"kind": "coboundary"}"#);
        assert!(matches!(parse_group_spec(&cob), Err(ParseError::Field { .. })));
    }

    #[test]
    fn group_spec_with_parameters() {
        let s = r#"{"schema_version":1,"sigma_basis":[[[0,1],[1,0]],[[0,0],[0,1]]],
            "h_family":{"name":"L_sigma3","gamma":"-1/3","transposed":true,"conjugator":[[1,0],[2,1]]},
            "tau":{"kind":"coboundary","tau0":[[1,0],[0,-1]]}}"#;
        let t = parse_group_spec(s).unwrap();
        assert_eq!(t.h.kind, FamilyKind::L(Scalar::ratio(-1, 3)));
        assert!(t.h.transposed);
        assert!(t.sigma.contains(&sigma5(), 0.0));
        let spec = GroupSpec::from_triple(&t).unwrap();
        assert_eq!(spec.to_triple().unwrap(), t);
        let alpha = r#"{"schema_version":1,"sigma_basis":[[[1,0],[0,1]]],
            "h_family":{"name":"Halpha_sigma1","alpha":"inf"},"tau":{"kind":"zero"}}"#;
        assert_eq!(parse_group_spec(alpha).unwrap().h.kind, FamilyKind::Sigma1Alpha(Alpha::Infinity));
    }

    #[test]
    fn subalgebra_spec() {
        let s = r#"{"ambient":"sigma3","generators":[[[0,0],[1,0]]]}"#;
        let sub = parse_subalgebra(s, 1e-9).unwrap();
        assert_eq!(sub.dim(), 1);
        assert!(parse_subalgebra(r#"{"ambient":"sigma9","generators":[]}"#, 1e-9).is_err());
        assert!(parse_subalgebra(r#"{"ambient":"sigma3","generators":[[[0,1],[0,0]]]}"#, 1e-9).is_err());
    }
}
