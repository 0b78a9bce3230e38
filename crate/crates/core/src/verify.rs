//! The full verification sweep behind `verify-theorem`.
//!
//! Every claim is a pure function of `(grid, tol)`; claims are emitted in a
//! fixed order so reports diff cleanly.

use std::collections::{BTreeMap, BTreeSet};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::canonical::{ma_reduce, EntryParam, MaId, MaPoint, ParamKind};
use crate::error::{Error, Result};
use crate::family::{param_grid, Alpha};
use crate::identities::{all_checks, count_failures};
use crate::scalar::Scalar;
use crate::spclassify::{
    fold_gamma, gamma_dual, gamma_l, sp_classify, theorem_label, w0_obstruction, w0_outcomes,
    SpClassLabel, ThmId, W0Outcome,
};
use crate::triple::{dual, is_class_e};

pub const TABLE_VERSION: u32 = 1;

/// Parameters used for the case rows, independent of the sampling grid.
pub fn case_gammas() -> Vec<Scalar> {
    [(-2, 1), (-1, 1), (-1, 2), (-1, 4), (0, 1), (1, 3), (1, 1), (2, 1)]
        .iter()
        .map(|&(p, q)| Scalar::ratio(p, q))
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct Claim {
    pub section: &'static str,
    pub name: String,
    pub pass: bool,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyRow {
    pub label: String,
    pub dim: u8,
    pub representative: String,
    pub description: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MappingRow {
    pub source: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a0: Option<String>,
    pub target: String,
}

/// The regression table: reached families, counts and every source -> target
/// mapping.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TheoremTable {
    pub schema_version: u32,
    pub families: Vec<FamilyRow>,
    pub counts: BTreeMap<String, usize>,
    pub duality: Vec<MappingRow>,
    pub cases: Vec<MappingRow>,
}

impl TheoremTable {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let t: TheoremTable = serde_json::from_str(s)
            .map_err(|e| Error::Parse(crate::error::ParseError::Json(e.to_string())))?;
        if t.schema_version != TABLE_VERSION {
            return Err(Error::Parse(crate::error::ParseError::Field {
                field: "schema_version".into(),
                message: format!("expected {TABLE_VERSION}, got {}", t.schema_version),
            }));
        }
        Ok(t)
    }

    /// Human-readable differences against `golden`; empty when equal.
    pub fn diff(&self, golden: &TheoremTable) -> Vec<String> {
        let mut out = Vec::new();
        if self.counts != golden.counts {
            out.push(format!("counts: got {:?}, golden {:?}", self.counts, golden.counts));
        }
        diff_rows(&mut out, "family", &self.families, &golden.families, |r| r.label.clone());
        diff_rows(&mut out, "duality", &self.duality, &golden.duality, row_key);
        diff_rows(&mut out, "case", &self.cases, &golden.cases, row_key);
        out
    }
}

fn row_key(r: &MappingRow) -> String {
    match &r.a0 {
        Some(a) => format!("{} a0={a}", r.source),
        None => r.source.clone(),
    }
}

fn diff_rows<T: PartialEq + std::fmt::Debug>(
    out: &mut Vec<String>,
    what: &str,
    got: &[T],
    golden: &[T],
    key: impl Fn(&T) -> String,
) {
    let g: BTreeMap<String, &T> = got.iter().map(|r| (key(r), r)).collect();
    let w: BTreeMap<String, &T> = golden.iter().map(|r| (key(r), r)).collect();
    for (k, r) in &w {
        match g.get(k) {
            None => out.push(format!("{what} {k}: missing")),
            Some(x) if x != r => out.push(format!("{what} {k}: got {x:?}, golden {r:?}")),
            _ => {}
        }
    }
    for k in g.keys().filter(|k| !w.contains_key(*k)) {
        out.push(format!("{what} {k}: not in golden table"));
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoremReport {
    pub grid: usize,
    pub tol: f64,
    pub claims: Vec<Claim>,
    pub table: TheoremTable,
    pub worst_residual: f64,
}

impl TheoremReport {
    pub fn pass(&self) -> bool {
        self.claims.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Claim> {
        self.claims.iter().filter(|c| !c.pass)
    }

    /// Appends the golden-table comparison as a claim.
    pub fn check_golden(&mut self, golden: &TheoremTable) {
        let d = self.table.diff(golden);
        let detail = if d.is_empty() { "table matches".to_string() } else { d.join("; ") };
        self.claims.push(Claim {
            section: "golden",
            name: "theorem table".into(),
            pass: d.is_empty(),
            detail,
            residual: None,
        });
    }
}

/// Catalog groups swept for `id` on the sampling grid.
pub fn sweep_points(id: MaId, grid: &[Scalar]) -> Vec<MaPoint> {
    let params: Vec<Option<EntryParam>> = match id.param_kind() {
        ParamKind::None => vec![None],
        ParamKind::Gamma => grid.iter().map(|g| Some(EntryParam::Gamma(g.clone()))).collect(),
        ParamKind::Alpha => {
            let mut seen: Vec<Scalar> = Vec::new();
            for g in grid {
                let a = g.abs();
                if !seen.iter().any(|s| s == &a) {
                    seen.push(a);
                }
            }
            seen.sort_by(|a, b| a.cmp_value(b));
            seen.into_iter()
                .map(|a| Some(EntryParam::Alpha(Alpha::Finite(a))))
                .chain(std::iter::once(Some(EntryParam::Alpha(Alpha::Infinity))))
                .collect()
        }
    };
    params.into_iter().map(|param| MaPoint::new(id, param).expect("kind matches")).collect()
}

fn case_points(id: MaId) -> Vec<MaPoint> {
    match id.param_kind() {
        ParamKind::Gamma => case_gammas()
            .into_iter()
            .map(|g| MaPoint::new(id, Some(EntryParam::Gamma(g))).expect("gamma entry"))
            .collect(),
        _ => sweep_points(id, &[Scalar::one()]),
    }
}

fn exact_params(a: &Option<EntryParam>, b: &Option<EntryParam>) -> bool {
    match (a, b) {
        (None, None) => true,
        (Some(EntryParam::Gamma(x)), Some(EntryParam::Gamma(y))) => {
            x.is_exact() && y.is_exact() && x == y
        }
        (Some(EntryParam::Alpha(x)), Some(EntryParam::Alpha(y))) => x == y,
        _ => false,
    }
}

fn same_point(a: &MaPoint, b: &MaPoint) -> bool {
    a.id == b.id && exact_params(&a.param, &b.param)
}

fn same_label(a: &SpClassLabel, b: &SpClassLabel) -> bool {
    a.id == b.id && exact_params(&a.param, &b.param)
}

fn group_dim(p: &MaPoint) -> u8 {
    let t = p.triple();
    (t.sigma.dim() + t.h.dim()) as u8
}

/// What the w0 step with `a0 = 0` is expected to produce.
#[derive(Clone, Debug)]
enum Expect {
    Reached(MaPoint),
    Crazytau,
    NotInE,
}

fn expected_a0_zero(p: &MaPoint) -> Expect {
    let pt = |l, i, param| Expect::Reached(MaPoint { id: MaId::new(l, i), param });
    let gamma = |g: Scalar| Some(EntryParam::Gamma(g));
    let half = Scalar::ratio(-1, 2);
    let g = match &p.param {
        Some(EntryParam::Gamma(g)) => Some(g.clone()),
        _ => None,
    };
    let is_half = g.as_ref().is_some_and(|g| *g == half);
    match p.id.item {
        1 => pt(3, 14, None),
        2 => Expect::NotInE,
        3 | 11 => Expect::Crazytau,
        4 => pt(3, 5, gamma(half)),
        5 if is_half => pt(3, 4, None),
        5 => pt(3, 5, gamma(gamma_dual(&g.unwrap()).unwrap())),
        6 => pt(3, 6, None),
        7 => pt(3, 13, gamma(half)),
        8 if is_half => pt(3, 12, None),
        8 => pt(3, 13, gamma(gamma_l(&g.unwrap()).unwrap())),
        9 => pt(3, 9, None),
        10 => pt(3, 10, None),
        12 => pt(3, 8, gamma(half)),
        13 if is_half => pt(3, 7, None),
        13 => pt(3, 8, gamma(gamma_l(&g.unwrap()).unwrap())),
        14 => pt(3, 1, None),
        15 => pt(3, 16, gamma(half)),
        16 if is_half => pt(3, 15, None),
        16 => pt(3, 16, gamma(gamma_dual(&g.unwrap()).unwrap())),
        _ => unreachable!("list 3 has 16 entries"),
    }
}

/// Outcomes with `a0 != 0` that are stated explicitly.
fn expected_a0_one(p: &MaPoint) -> Option<MaPoint> {
    let minus_one = Some(EntryParam::Gamma(Scalar::int(-1)));
    match p.id.item {
        2 => Some(p.clone()),
        8 if p.param == minus_one => Some(p.clone()),
        _ => None,
    }
}

fn claim(section: &'static str, name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Claim {
    Claim { section, name: name.into(), pass, detail: detail.into(), residual: None }
}

struct Sweep {
    claims: Vec<Claim>,
    reached: BTreeSet<ThmId>,
    worst: f64,
}

fn sweep(grid: &[Scalar], tol: f64) -> Sweep {
    let mut out = Sweep { claims: Vec::new(), reached: BTreeSet::new(), worst: 0.0 };
    for id in MaId::all() {
        let mut problems = Vec::new();
        let mut labels = BTreeSet::new();
        let mut worst: f64 = 0.0;
        let points = sweep_points(id, grid);
        for p in &points {
            let (expected, _) = theorem_label(p, tol.max(1e-12));
            match sp_classify(&p.triple(), grid, tol) {
                Ok(c) => {
                    worst = worst.max(c.residual);
                    if !same_label(&c.label, &expected) {
                        problems.push(format!("{p}: got {}, expected {expected}", c.label));
                    } else if c.label.dim() != group_dim(p) {
                        problems.push(format!("{p}: label dimension {} != {}", c.label.dim(), group_dim(p)));
                    } else {
                        out.reached.insert(c.label.id);
                        labels.insert(c.label.id.to_string());
                    }
                }
                Err(e) => problems.push(format!("{p}: {e}")),
            }
        }
        out.worst = out.worst.max(worst);
        let detail = if problems.is_empty() {
            let l: Vec<String> = labels.into_iter().collect();
            format!("{} groups -> {}", points.len(), l.join(", "))
        } else {
            problems.join("; ")
        };
        let mut c = claim("sweep", format!("classify {id}"), problems.is_empty(), detail);
        c.residual = Some(worst);
        out.claims.push(c);
    }
    out
}

fn catalog_invariants(grid: &[Scalar], tol: f64) -> Vec<Claim> {
    let mut problems = Vec::new();
    let mut n = 0;
    for id in MaId::all() {
        for p in sweep_points(id, grid) {
            n += 1;
            let t = p.triple();
            if !t.is_h_invariant() {
                problems.push(format!("{p}: Sigma not H-invariant"));
            }
            if !is_class_e(&t, grid, tol) {
                problems.push(format!("{p}: not in class E"));
            }
            match ma_reduce(&t, grid, tol) {
                Ok(r) if same_point(&r.entry, &p) => {}
                Ok(r) => problems.push(format!("{p}: reduces to {}", r.entry)),
                Err(e) => problems.push(format!("{p}: {e}")),
            }
        }
    }
    let detail = if problems.is_empty() {
        format!("{n} groups: H-invariant, class E, MA-reduction idempotent")
    } else {
        problems.join("; ")
    };
    let mut out = vec![claim("catalog", "MA-catalog invariants", problems.is_empty(), detail)];

    // groups whose normal factor forbids any w0-conjugation
    let mut problems = Vec::new();
    for id in MaId::all().into_iter().filter(|id| id.list < 3) {
        let t = MaPoint::new(id, sweep_points(id, grid)[0].param.clone()).expect("kind").triple();
        let b = t.sigma.basis();
        let det_sign = |s: &crate::matrix::SymMat2| s.det().signum();
        let ok = match (id.list, id.is_dual()) {
            // one-dimensional and indefinite: only the sigma5 branch is reachable
            (2, false) => det_sign(&b[0]) < 0,
            // det restricted to the plane is negative definite
            (1, true) => {
                let (du, dv) = (b[0].det(), b[1].det());
                let cross = &(&(&b[0] + &b[1]).det() - &du) - &dv;
                let disc = &(&(&du * &dv) * &Scalar::int(4)) - &(&cross * &cross);
                du.signum() < 0 && disc.signum() > 0
            }
            _ => {
                let mut cands = b.clone();
                if b.len() == 2 {
                    cands.push(&b[0] + &b[1]);
                    cands.push(&b[0] - &b[1]);
                }
                cands.iter().any(|s| det_sign(s) > 0)
            }
        };
        if !ok || w0_obstruction(&MaPoint { id, param: None }).is_none() {
            problems.push(id.to_string());
        }
    }
    let detail = if problems.is_empty() {
        "lists 1 and 2 admit only MA-conjugations".to_string()
    } else {
        format!("obstruction not found for {}", problems.join(", "))
    };
    out.push(claim("catalog", "w0 obstructions", problems.is_empty(), detail));
    out
}

fn duality(grid: &[Scalar], tol: f64) -> (Vec<Claim>, Vec<MappingRow>) {
    let mut claims = Vec::new();
    let mut rows = Vec::new();
    for list in 1..=2u8 {
        for (a, b) in [(1u8, 3u8), (2, 4)] {
            let mut problems = Vec::new();
            for p in sweep_points(MaId::new(list, a), grid) {
                let want = MaPoint { id: MaId::new(list, b), param: p.param.clone() };
                let got = dual(&p.triple()).and_then(|d| ma_reduce(&d, grid, tol));
                let back = dual(&want.triple()).and_then(|d| ma_reduce(&d, grid, tol));
                match (got, back) {
                    (Ok(g), Ok(k)) if same_point(&g.entry, &want) && same_point(&k.entry, &p) => {}
                    (Ok(g), Ok(k)) => problems.push(format!("{p} -> {}, {want} -> {}", g.entry, k.entry)),
                    (Err(e), _) | (_, Err(e)) => problems.push(format!("{p}: {e}")),
                }
            }
            let name = format!("dual {} <-> {}", MaId::new(list, a), MaId::new(list, b));
            rows.push(MappingRow {
                source: MaId::new(list, a).to_string(),
                a0: None,
                target: MaId::new(list, b).to_string(),
            });
            let detail = if problems.is_empty() { "involution on the sweep".to_string() } else { problems.join("; ") };
            claims.push(claim("duality", name, problems.is_empty(), detail));
        }
    }
    (claims, rows)
}

fn cases(grid: &[Scalar], tol: f64) -> (Vec<Claim>, Vec<MappingRow>) {
    let mut claims = Vec::new();
    let mut rows = Vec::new();
    for item in 1..=16u8 {
        let id = MaId::new(3, item);
        let mut problems = Vec::new();
        let mut summary = Vec::new();
        for p in case_points(id) {
            let outcomes = match w0_outcomes(&p, grid, tol) {
                Ok(o) => o,
                Err(e) => {
                    problems.push(format!("{p}: {e}"));
                    continue;
                }
            };
            let (label, _) = theorem_label(&p, tol.max(1e-12));
            for (a0, o) in &outcomes {
                rows.push(MappingRow { source: p.to_string(), a0: Some(a0.to_string()), target: o.to_string() });
                if a0.is_zero() {
                    let ok = match (expected_a0_zero(&p), o) {
                        (Expect::Reached(want), W0Outcome::Reached(got)) => same_point(&want, got),
                        (Expect::Crazytau, W0Outcome::Crazytau(t)) => {
                            t.to_string().ends_with("(crazytau) are not satisfied")
                        }
                        (Expect::NotInE, W0Outcome::NotInE(_)) => true,
                        _ => false,
                    };
                    if !ok {
                        problems.push(format!("{p} a0=0: got {o}, expected {:?}", expected_a0_zero(&p)));
                    }
                } else if let Some(want) = expected_a0_one(&p) {
                    if !matches!(o, W0Outcome::Reached(got) if same_point(&want, got)) {
                        problems.push(format!("{p} a0={a0}: got {o}, expected {want}"));
                    }
                }
                // an image inside E must carry the source's label
                if let W0Outcome::Reached(got) = o {
                    let (l, _) = theorem_label(got, tol.max(1e-12));
                    if !same_label(&l, &label) {
                        problems.push(format!("{p} a0={a0}: image {got} has label {l}, source {label}"));
                    }
                }
                summary.push(format!("{p} ~ {o}"));
            }
            if outcomes.is_empty() {
                problems.push(format!("{p}: no a0 candidate"));
            }
        }
        let detail = if problems.is_empty() { summary.join("; ") } else { problems.join("; ") };
        claims.push(claim("case", format!("case {id}"), problems.is_empty(), detail));
    }
    (claims, rows)
}

fn dictionary() -> Vec<Claim> {
    let values: Vec<Scalar> = case_gammas()
        .into_iter()
        .chain([(-3, 1), (-2, 3), (-1, 3), (5, 7)].iter().map(|&(p, q)| Scalar::ratio(p, q)))
        .collect();
    let half = Scalar::ratio(-1, 2);
    let mut problems = Vec::new();
    for g in values.iter().filter(|g| **g != half) {
        let d = gamma_dual(g).expect("off -1/2");
        if gamma_dual(&d).as_ref() != Some(g) {
            problems.push(format!("gamma_dual not an involution at {g}"));
        }
        let fixed = d == *g;
        let expect_fixed = g.is_zero() || *g == Scalar::int(-1);
        if fixed != expect_fixed {
            problems.push(format!("fixed point mismatch at {g}"));
        }
        let l = gamma_l(g).expect("off -1/2");
        if gamma_l(&l).as_ref() != Some(g) {
            problems.push(format!("gamma_l not an involution at {g}"));
        }
        let f = fold_gamma(g);
        if f.cmp_value(&Scalar::int(-1)).is_lt() || f.cmp_value(&Scalar::zero()).is_gt() {
            problems.push(format!("fold of {g} is {f}, outside [-1,0]"));
        }
    }
    if gamma_dual(&half).is_some() || gamma_l(&half).is_some() {
        problems.push("-1/2 must have no image".into());
    }
    let detail = if problems.is_empty() {
        format!("{} rationals: involutions, fixed points {{0,-1}}, fold into [-1,0]", values.len())
    } else {
        problems.join("; ")
    };
    vec![claim("dictionary", "gamma dictionary", problems.is_empty(), detail)]
}

/// Exact identity checks on `n` random rational instances each.
pub fn identity_claims(n: usize, seed: u64) -> Vec<Claim> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    all_checks::<ChaCha8Rng>()
        .into_iter()
        .map(|(name, f)| {
            let bad = count_failures(&mut rng, n, f);
            claim("identity", name, bad == 0, format!("{bad}/{n} failures"))
        })
        .collect()
}

pub fn build_table(reached: &BTreeSet<ThmId>, duality: Vec<MappingRow>, cases: Vec<MappingRow>) -> TheoremTable {
    let families: Vec<FamilyRow> = reached
        .iter()
        .map(|id| FamilyRow {
            label: id.to_string(),
            dim: id.dim,
            representative: id.representative_id().to_string(),
            description: id.description().to_string(),
        })
        .collect();
    let mut counts = BTreeMap::new();
    for f in &families {
        *counts.entry(format!("{}D", f.dim)).or_insert(0) += 1;
    }
    TheoremTable { schema_version: TABLE_VERSION, families, counts, duality, cases }
}

/// Runs every claim. `grid` is the number of parameter samples per family.
pub fn verify_theorem(grid: usize, tol: f64) -> Result<TheoremReport> {
    if grid < 3 {
        return Err(Error::InsufficientSamples { needed: 3, got: grid });
    }
    if !(tol >= 0.0) {
        return Err(Error::PreconditionViolated(format!("tolerance must be >= 0, got {tol}")));
    }
    let g = param_grid(grid);
    let sw = sweep(&g, tol);
    let mut claims = sw.claims;

    let all: BTreeSet<ThmId> = ThmId::all().into_iter().collect();
    let missing: Vec<String> = all.difference(&sw.reached).map(|i| i.to_string()).collect();
    claims.push(claim(
        "families",
        "families reached",
        missing.is_empty() && sw.reached.len() == 19,
        if missing.is_empty() {
            format!("{}/19", sw.reached.len())
        } else {
            format!("{}/19, missing {}", sw.reached.len(), missing.join(", "))
        },
    ));

    claims.extend(catalog_invariants(&g, tol));
    let (dc, drows) = duality(&g, tol);
    claims.extend(dc);
    let (cc, crows) = cases(&g, tol);
    claims.extend(cc);
    claims.extend(dictionary());
    claims.extend(identity_claims(1000, 0x5eed));

    let table = build_table(&sw.reached, drows, crows);
    let counts: Vec<usize> = ["2D", "3D", "4D", "5D"].iter().map(|k| table.counts.get(*k).copied().unwrap_or(0)).collect();
    claims.insert(
        MaId::all().len() + 1,
        claim(
            "families",
            "dimension counts",
            counts == [5, 9, 4, 1],
            format!("{}/{}/{}/{} (2D/3D/4D/5D)", counts[0], counts[1], counts[2], counts[3]),
        ),
    );

    // the label map merges these; reported rather than guessed
    let note = "(3.i) Sigma3 x| T0 and (3.xiv) Sigma3^perp x| K0 share label (4.1)";
    let merged = theorem_label(&MaPoint { id: MaId::new(3, 14), param: None }, 1e-12).0.id == ThmId::new(4, 1)
        && theorem_label(&MaPoint { id: MaId::new(3, 1), param: None }, 1e-12).0.id == ThmId::new(4, 1);
    claims.push(claim("families", "label merge", merged, note));

    Ok(TheoremReport { grid, tol, claims, table, worst_residual: sw.worst })
}
