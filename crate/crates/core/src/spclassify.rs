//! Sp(2,R)-conjugacy: Bruhat cells, the w0 machinery and the final labels.

use std::fmt;

use nalgebra::DMatrix;

use crate::canonical::{ma_reduce, EntryParam, MaId, MaPoint};
use crate::constants::{b_mat, sigma3, sigma4, sigma5, w0};
use crate::error::{Error, Result};
use crate::family::{Alpha, FamilyKind, HFamily};
use crate::linalg::{negligible, rank, SymSpan};
use crate::matrix::{dagger, Mat2, Mat4, SymMat2};
use crate::parabolic::{q_member, QElement};
use crate::scalar::Scalar;
use crate::subalgebra::{classify_subalgebra, exponentiate, Ambient, LieSub};
use crate::triple::{build_group_element, is_class_e, TauMap, Triple};

// ---------------------------------------------------------------------------
// Weyl group and Bruhat cells

/// Upper-left block `S+` of a Weyl representative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SPlus {
    /// `diag(1, 0)`.
    S0,
    /// `diag(0, 1)`.
    S1,
    Id,
    Zero,
}

impl SPlus {
    fn mat(self) -> Mat2 {
        match self {
            SPlus::S0 => Mat2::from_ints(1, 0, 0, 0),
            SPlus::S1 => Mat2::from_ints(0, 0, 0, 1),
            SPlus::Id => Mat2::identity(),
            SPlus::Zero => Mat2::zero(),
        }
    }
}

/// `[[S+, -S-], [S-, S+]] diag(pi, pi)` with `S- = I - S+`, `pi` in `{I, sigma_5}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct WeylElement {
    pub s_plus: SPlus,
    /// `pi = sigma_5`.
    pub swap: bool,
}

impl WeylElement {
    pub const IDENTITY: WeylElement = WeylElement { s_plus: SPlus::Id, swap: false };
    pub const W0: WeylElement = WeylElement { s_plus: SPlus::S0, swap: false };

    pub fn all() -> Vec<WeylElement> {
        [SPlus::Id, SPlus::S0, SPlus::S1, SPlus::Zero]
            .into_iter()
            .flat_map(|s| [false, true].map(|swap| WeylElement { s_plus: s, swap }))
            .collect()
    }

    pub fn realize(&self) -> Mat4 {
        let sp = self.s_plus.mat();
        let sm = &Mat2::identity() - &sp;
        let m = Mat4::from_blocks(&sp, &-&sm, &sm, &sp);
        if self.swap {
            let pi = sigma5().to_mat2();
            &m * &Mat4::from_blocks(&pi, &Mat2::zero(), &Mat2::zero(), &pi)
        } else {
            m
        }
    }

    /// Rank profile identifying the double coset `P w P`.
    fn profile(&self) -> [[usize; 4]; 4] {
        rank_profile(&self.realize(), 0.0)
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.s_plus {
            SPlus::S0 => "s0",
            SPlus::S1 => "s1",
            SPlus::Id => "I",
            SPlus::Zero => "0",
        };
        write!(f, "w(S+={s}, pi={})", if self.swap { "sigma5" } else { "I" })
    }
}

/// Reordering `(1, 2, 4, 3)` turns the minimal parabolic into lower
/// triangular matrices.
const ORDER: [usize; 4] = [0, 1, 3, 2];

fn svd_rank(rows: &[Vec<Scalar>], tol: f64) -> usize {
    let (r, c) = (rows.len(), rows[0].len());
    let m = DMatrix::from_fn(r, c, |i, j| rows[i][j].to_f64());
    m.singular_values().iter().filter(|s| **s > tol).count()
}

/// `rank(rows 1..=i, cols j..=4)` of the reordered matrix. Lower triangular
/// factors on either side leave every entry unchanged.
fn rank_profile(g: &Mat4, tol: f64) -> [[usize; 4]; 4] {
    let exact = g.is_exact();
    let scale = tol * g.norm_inf().max(1.0);
    let mut out = [[0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let rows: Vec<Vec<Scalar>> = (0..=i)
                .map(|a| (j..4).map(|b| g.0[ORDER[a]][ORDER[b]].clone()).collect())
                .collect();
            out[i][j] = if exact { rank(&rows, 0.0) } else { svd_rank(&rows, scale) };
        }
    }
    out
}

pub fn bruhat_cell(g: &Mat4, tol: f64) -> Result<WeylElement> {
    let t = if g.is_exact() { 0.0 } else { tol };
    if !g.is_symplectic(t) {
        return Err(Error::NotSymplectic);
    }
    let p = rank_profile(g, tol);
    WeylElement::all()
        .into_iter()
        .find(|w| w.profile() == p)
        .ok_or_else(|| Error::Inconsistent(format!("rank profile {p:?} matches no Weyl element")))
}

// ---------------------------------------------------------------------------
// Psi and the crazytau conditions

/// `(alpha, beta, delta)` of `h = [[alpha, 0], [beta alpha, delta]]`.
fn tri_params(h: &Mat2) -> Result<(Scalar, Scalar, Scalar)> {
    let m = &h.0;
    if !m[0][1].is_zero() || m[0][0].is_zero() || m[1][1].is_zero() {
        return Err(Error::NotLowerTriangular);
    }
    Ok((m[0][0].clone(), &m[1][0] / &m[0][0], m[1][1].clone()))
}

pub fn psi(s: &SymMat2, h: &Mat2, a0: &Scalar, a1: &Scalar, b1: &Scalar) -> Result<Scalar> {
    if !s.a.is_zero() {
        return Err(Error::SigmaNotInSigma4Perp);
    }
    let (alpha, beta, delta) = tri_params(h)?;
    let one = Scalar::one();
    let shift = &(a0 * &beta) + &s.b;
    Ok(&(&beta - &(b1 * &(&one - &(&delta / &alpha)))) + &(&(a1 * &shift) * &(&delta * &delta)))
}

fn in_span(gens: &[Mat2], x: &Mat2, tol: f64) -> bool {
    let flat = |m: &Mat2| m.0.iter().flatten().cloned().collect::<Vec<_>>();
    let mut rows: Vec<Vec<Scalar>> = gens.iter().map(flat).collect();
    let before = rank(&rows, tol);
    rows.push(flat(x));
    rank(&rows, tol) == before
}

fn check_w0_preconditions(sigma: &SymSpan, h: &HFamily) -> Result<()> {
    if sigma.basis().iter().any(|s| !s.a.is_zero()) {
        return Err(Error::PreconditionViolated("Sigma is not inside sigma_4^perp".into()));
    }
    if h.generators().iter().any(|x| !x.is_lower_triangular()) {
        return Err(Error::PreconditionViolated("H is not inside T".into()));
    }
    Ok(())
}

/// `{0}` when some sampled `delta(h) != 1`, else `{0, 1}`.
pub fn a0_candidates(h: &HFamily, grid: &[Scalar], tol: f64) -> Vec<Scalar> {
    let moves = h.samples(grid).iter().any(|(_, m)| !negligible(&(&m.0[1][1] - &Scalar::one()), tol));
    if moves {
        vec![Scalar::zero()]
    } else {
        vec![Scalar::zero(), Scalar::one()]
    }
}

/// One evaluated sample of the crazytau conditions.
#[derive(Clone, Debug, PartialEq)]
pub struct CrazytauRow {
    pub params: Vec<Scalar>,
    pub sigma: SymMat2,
    pub psi: Scalar,
    pub delta_ok: bool,
    pub unipotent_in_h: bool,
    pub sigma5_ok: bool,
}

impl CrazytauRow {
    pub fn pass(&self) -> bool {
        self.delta_ok && self.unipotent_in_h && self.sigma5_ok
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CrazytauTranscript {
    pub a0: Scalar,
    /// Best `(a', b')` found by least squares.
    pub candidate: (Scalar, Scalar),
    pub rows: Vec<CrazytauRow>,
    pub satisfied: bool,
}

impl fmt::Display for CrazytauTranscript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "a0 = {}, a' = {}, b' = {}", self.a0, self.candidate.0, self.candidate.1)?;
        for r in self.rows.iter().filter(|r| !r.pass()).take(4) {
            let p: Vec<String> = r.params.iter().map(|x| format!("{:.6}", x.to_f64())).collect();
            writeln!(
                f,
                "  h({}) sigma={}: Psi = {:.6}; [[1,0],[Psi,1]] {} H",
                p.join(","),
                r.sigma,
                r.psi.to_f64(),
                if r.unipotent_in_h { "in" } else { "not in" }
            )?;
        }
        if self.satisfied {
            write!(f, "(crazytau) are satisfied")
        } else {
            write!(f, "(crazytau) are not satisfied")
        }
    }
}

fn clean(v: f64, tol: f64) -> Scalar {
    if v.abs() <= tol {
        Scalar::zero()
    } else if (v - v.round()).abs() <= tol {
        Scalar::int(v.round() as i64)
    } else {
        Scalar::float(v)
    }
}

/// Searches `(a', b')` for one value of `a0`: the first condition and, when
/// needed, `Psi = 0` are linear in `(a', b')`.
pub fn crazytau_transcript(
    sigma: &SymSpan,
    h: &HFamily,
    a0: &Scalar,
    grid: &[Scalar],
    tol: f64,
) -> Result<CrazytauTranscript> {
    check_w0_preconditions(sigma, h)?;
    let gens = h.generators();
    let has_b = in_span(&gens, &b_mat(), tol);
    let has_s5 = sigma.contains(&sigma5(), tol);
    let psi_must_vanish = !has_b || (!a0.is_zero() && !has_s5);
    let mut sigmas = vec![SymMat2::zero()];
    sigmas.extend(sigma.basis());
    let samples = h.samples(grid);

    let mut eqs: Vec<([f64; 2], f64)> = Vec::new();
    for (_, m) in &samples {
        let (alpha, beta, delta) = tri_params(m)?;
        let d2 = (&delta * &delta).to_f64();
        eqs.push(([1.0 - d2, 0.0], 0.0));
        if psi_must_vanish {
            for s in &sigmas {
                let shift = (&(a0 * &beta) + &s.b).to_f64();
                let col_b = -(1.0 - (&delta / &alpha).to_f64());
                eqs.push(([shift * d2, col_b], -beta.to_f64()));
            }
        }
    }
    let a = DMatrix::from_fn(eqs.len(), 2, |i, j| eqs[i].0[j]);
    let rhs = nalgebra::DVector::from_fn(eqs.len(), |i, _| eqs[i].1);
    let x = a
        .svd(true, true)
        .solve(&rhs, 1e-12)
        .map_err(|e| Error::Inconsistent(e.to_string()))?;
    let (a1, b1) = (clean(x[0], tol), clean(x[1], tol));

    let mut rows = Vec::new();
    for (p, m) in &samples {
        let delta = &m.0[1][1];
        let delta_ok = negligible(&(&a1 * &(&Scalar::one() - &(delta * delta))), tol);
        for s in &sigmas {
            let v = psi(s, m, a0, &a1, &b1)?;
            let uni = Mat2::new(Scalar::one(), Scalar::zero(), v.clone(), Scalar::one());
            let unipotent_in_h = negligible(&v, tol) || (has_b && h.contains(&uni, tol));
            let sigma5_ok = negligible(&(a0 * &v), tol) || has_s5;
            rows.push(CrazytauRow {
                params: p.clone(),
                sigma: s.clone(),
                psi: v,
                delta_ok,
                unipotent_in_h,
                sigma5_ok,
            });
        }
    }
    let satisfied = rows.iter().all(CrazytauRow::pass);
    Ok(CrazytauTranscript { a0: a0.clone(), candidate: (a1, b1), rows, satisfied })
}

/// `(a', b')` satisfying the crazytau conditions on the grid, if any.
pub fn crazytau_check(
    sigma: &SymSpan,
    h: &HFamily,
    a0: &Scalar,
    grid: &[Scalar],
    tol: f64,
) -> Result<Option<(Scalar, Scalar)>> {
    let t = crazytau_transcript(sigma, h, a0, grid, tol)?;
    Ok(t.satisfied.then_some(t.candidate))
}

/// Which generator `t^dagger[Sigma]` reaches for one-dimensional `Sigma`
/// inside `sigma_4^perp`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WCanonical {
    Sigma3,
    Sigma5,
}

/// `t` in `T` with `t^dagger[Sigma]` spanned by `sigma_3` or `sigma_5`.
pub fn wcanonical_reduce(sigma: &SymSpan) -> Result<(Mat2, WCanonical)> {
    if sigma.dim() != 1 {
        return Err(Error::PreconditionViolated("Sigma must be one-dimensional".into()));
    }
    let s = &sigma.basis()[0];
    if !s.a.is_zero() {
        return Err(Error::SigmaNotInSigma4Perp);
    }
    if s.b.is_zero() {
        return Ok((Mat2::identity(), WCanonical::Sigma3));
    }
    // t = [[1,0],[c/2, b]] gives t^dagger[sigma] = sigma_5
    let t = Mat2::new(Scalar::one(), Scalar::zero(), &s.c / &Scalar::int(2), s.b.clone());
    let img = dagger(&t, s)?;
    let tol = if img.is_exact() { 0.0 } else { 1e-12 };
    if !img.approx_eq(&sigma5(), tol) {
        return Err(Error::Inconsistent(format!("t^dagger[{s}] = {img}")));
    }
    Ok((t, WCanonical::Sigma5))
}

// ---------------------------------------------------------------------------
// Conjugation by w0

/// `w0 (Sigma, H, tau_{a0}) w0^-1` read off the Bruhat decomposition.
#[derive(Clone, Debug)]
pub struct W0Image {
    pub a0: Scalar,
    pub sigma: SymSpan,
    /// Lie algebra of `H'`.
    pub h_algebra: Vec<Mat2>,
    /// `H'` re-identified through the subalgebra catalog.
    pub h: HFamily,
    /// `H'` samples read off the conjugated 4x4 matrices.
    pub h_samples: Vec<Mat2>,
    /// Matrix of the coboundary `tau'`.
    pub tau: SymMat2,
    pub transcript: CrazytauTranscript,
}

impl W0Image {
    /// The class-E group `g(-tau', I) w0 G w0^-1 g(tau', I)`.
    pub fn triple(&self) -> Triple {
        Triple::new(self.sigma.clone(), self.h.clone(), TauMap::Zero)
    }
}

fn independent(gens: Vec<Mat2>, tol: f64) -> Vec<Mat2> {
    let mut out: Vec<Mat2> = Vec::new();
    for g in gens {
        if !in_span(&out, &g, tol) {
            out.push(g);
        }
    }
    out
}

fn identify(gens: &[Mat2], tol: f64) -> Result<HFamily> {
    if gens.is_empty() {
        return Ok(HFamily::new(FamilyKind::Trivial));
    }
    let sub = LieSub::new(Ambient::Sigma3, gens.to_vec(), tol)?;
    let c = classify_subalgebra(&sub, tol)?;
    exponentiate(&c.label).conjugate(&c.witness.invert()?)
}

/// `g(s, I)` as a 4x4 matrix.
pub(crate) fn shift(s: &SymMat2) -> Mat4 {
    QElement::translation(s.clone()).realization().clone()
}

pub fn w0_conjugate(
    sigma: &SymSpan,
    h: &HFamily,
    a0: &Scalar,
    grid: &[Scalar],
    tol: f64,
) -> Result<W0Image> {
    let transcript = crazytau_transcript(sigma, h, a0, grid, tol)?;
    if !transcript.satisfied {
        return Err(Error::CrazytauFailed(transcript.to_string()));
    }
    let (a1, b1) = transcript.candidate.clone();
    let tau = SymMat2::new(Scalar::zero(), b1, a1);
    let gens = h.generators();
    let has_b = in_span(&gens, &b_mat(), tol);
    let basis = sigma.basis();

    // Sigma': lower-left blocks over the elements with h' = I
    let mut sp = Vec::new();
    if sigma.contains(&sigma3(), tol) {
        sp.push(sigma3());
    }
    if has_b {
        let s = if a0.is_zero() {
            Some(SymMat2::zero())
        } else {
            basis.iter().find(|s| !s.b.is_zero()).map(|s| s.scale(&(-a0 / &s.b)))
        };
        if let Some(s) = s {
            sp.push(SymMat2::new(&s.c + &s.b, Scalar::one(), Scalar::zero()));
        }
    }
    let sigma_p = SymSpan::span_of(&sp, tol);

    // h': differential of (sigma, h) -> [[alpha,0],[-(a0 beta + b) alpha, 1/delta]]
    let z = Scalar::zero;
    let mut hp: Vec<Mat2> = gens
        .iter()
        .map(|x| Mat2::new(x.0[0][0].clone(), z(), -&(a0 * &x.0[1][0]), -&x.0[1][1]))
        .collect();
    hp.extend(basis.iter().filter(|s| !s.b.is_zero()).map(|s| Mat2::new(z(), z(), -&s.b, z())));
    let h_algebra = independent(hp, tol);
    let h_p = identify(&h_algebra, tol)?;

    // direct check on 4x4 samples
    let w = w0();
    let w_inv = w.invert()?;
    let pre = shift(&sigma4().scale(a0));
    let pre_inv = shift(&sigma4().scale(&-a0));
    let mut sigmas = vec![SymMat2::zero()];
    sigmas.extend(basis.iter().cloned());
    let mut h_samples = Vec::new();
    for (p, m) in h.samples(grid) {
        let (alpha, beta, delta) = tri_params(&m)?;
        for s in &sigmas {
            let g = QElement::new(s.clone(), m.clone())?;
            let x = &(&(&w * &pre) * g.realization()) * &(&pre_inv * &w_inv);
            let q = q_member(&x, tol.max(1e-12))?;
            let shift_b = &(a0 * &beta) + &s.b;
            let expect = Mat2::new(alpha.clone(), z(), -&(&shift_b * &alpha), delta.recip());
            let hq = q.h().clone();
            if !hq.approx_eq(&expect, tol * expect.norm_inf().max(1.0)) {
                return Err(Error::Inconsistent(format!("h' at {p:?} is {hq}, expected {expect}")));
            }
            if !h_p.contains(&hq, tol) {
                return Err(Error::Inconsistent(format!("h' = {hq} is outside {h_p}")));
            }
            let tau_h = &tau - &dagger(&hq, &tau)?;
            let rest = q.sigma() - &tau_h;
            if sigma_p.distance(&rest) > tol * rest.norm_inf().max(1.0) {
                return Err(Error::Inconsistent(format!("sigma' = {rest} is outside {sigma_p}")));
            }
            h_samples.push(hq);
        }
    }
    Ok(W0Image {
        a0: a0.clone(),
        sigma: sigma_p,
        h_algebra,
        h: h_p,
        h_samples,
        tau,
        transcript,
    })
}

// ---------------------------------------------------------------------------
// Labels

/// A family of the final list, printed `(3.5)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ThmId {
    /// `dim Sigma + dim H`.
    pub dim: u8,
    pub item: u8,
}

impl ThmId {
    pub const fn new(dim: u8, item: u8) -> Self {
        ThmId { dim, item }
    }

    pub fn all() -> Vec<ThmId> {
        [(2, 5), (3, 9), (4, 4), (5, 1)]
            .into_iter()
            .flat_map(|(d, n)| (1..=n).map(move |i| ThmId::new(d, i)))
            .collect()
    }

    /// The MA-catalog entry standing for this family.
    pub fn representative_id(self) -> MaId {
        let (l, i) = match (self.dim, self.item) {
            (2, 1) => (1, 2),
            (2, 2) => (2, 2),
            (2, 3) => (3, 2),
            (2, 4) => (3, 3),
            (2, 5) => (3, 5),
            (3, 1) => (1, 1),
            (3, 2) => (2, 1),
            (3, 3) => (3, 6),
            (3, 4) => (3, 7),
            (3, 5) => (3, 8),
            (3, 6) => (1, 4),
            (3, 7) => (2, 4),
            (3, 8) => (3, 10),
            (3, 9) => (3, 11),
            (4, 1) => (3, 1),
            (4, 2) => (1, 3),
            (4, 3) => (2, 3),
            (4, 4) => (3, 16),
            (5, 1) => (3, 9),
            _ => unreachable!("not a family of the list"),
        };
        MaId::new(l, i)
    }

    pub fn description(self) -> &'static str {
        match (self.dim, self.item) {
            (2, 1) => "Sigma1 x| H_alpha(sigma1), alpha in [0,inf]",
            (2, 2) => "Sigma2 x| H_alpha(sigma2), alpha in [0,inf]",
            (2, 3) => "Sigma3 x| H_0(sigma3)",
            (2, 4) => "Sigma3 x| H_1(sigma3)",
            (2, 5) => "Sigma3 x| H_{alpha,0}(sigma3), alpha in [-1,0]",
            (3, 1) => "Sigma1 x| H^0(sigma1)",
            (3, 2) => "Sigma2 x| H^0(sigma2)",
            (3, 3) => "Sigma3 x| K_0(sigma3)",
            (3, 4) => "Sigma3 x| K_inf(sigma3)",
            (3, 5) => "Sigma3 x| L_gamma(sigma3), gamma in R",
            (3, 6) => "Sigma1^perp x| H_alpha(sigma1), alpha in [0,inf]",
            (3, 7) => "Sigma2^perp x| H_alpha(sigma2), alpha in [0,inf]",
            (3, 8) => "Sigma3^perp x| tH_0(sigma3)",
            (3, 9) => "Sigma3^perp x| tH_1(sigma3)",
            (4, 1) => "Sigma3 x| H^0(sigma3)",
            (4, 2) => "Sigma1^perp x| H^0(sigma1)",
            (4, 3) => "Sigma2^perp x| H^0(sigma2)",
            (4, 4) => "Sigma3^perp x| tL_gamma(sigma3), gamma in [-1,0]",
            (5, 1) => "Sigma3^perp x| tH^0(sigma3)",
            _ => unreachable!("not a family of the list"),
        }
    }
}

impl fmt::Display for ThmId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}.{})", self.dim, self.item)
    }
}

impl std::str::FromStr for ThmId {
    type Err = crate::error::ParseError;
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let bad = || crate::error::ParseError::Field {
            field: "label".into(),
            message: format!("unknown family `{s}`"),
        };
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let (d, i) = inner.split_once('.').ok_or_else(bad)?;
        let id = ThmId::new(d.parse().map_err(|_| bad())?, i.parse().map_err(|_| bad())?);
        ThmId::all().contains(&id).then_some(id).ok_or_else(bad)
    }
}

/// Family plus parameter, inside the range printed in the final list.
#[derive(Clone, Debug, PartialEq)]
pub struct SpClassLabel {
    pub id: ThmId,
    pub param: Option<EntryParam>,
}

impl fmt::Display for SpClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.param {
            // (2.5) is printed with the name used in the list
            Some(EntryParam::Gamma(g)) if self.id == ThmId::new(2, 5) => write!(f, "{} alpha={g}", self.id),
            Some(p) => write!(f, "{} {p}", self.id),
            None => write!(f, "{}", self.id),
        }
    }
}

impl SpClassLabel {
    pub fn dim(&self) -> u8 {
        self.id.dim
    }

    pub fn representative(&self) -> MaPoint {
        MaPoint { id: self.id.representative_id(), param: self.param.clone() }
    }

    /// Exact equality for rational parameters, `tol` otherwise.
    pub fn approx_eq(&self, other: &SpClassLabel, tol: f64) -> bool {
        self.id == other.id && params_match(&self.param, &other.param, tol)
    }
}

fn params_match(a: &Option<EntryParam>, b: &Option<EntryParam>, tol: f64) -> bool {
    match (a, b) {
        (None, None) => true,
        (Some(EntryParam::Gamma(x)), Some(EntryParam::Gamma(y))) => x.approx_eq(y, tol),
        (Some(EntryParam::Alpha(Alpha::Infinity)), Some(EntryParam::Alpha(Alpha::Infinity))) => true,
        (Some(EntryParam::Alpha(Alpha::Finite(x))), Some(EntryParam::Alpha(Alpha::Finite(y)))) => {
            x.approx_eq(y, tol)
        }
        _ => false,
    }
}

/// `gamma -> -gamma/(2 gamma + 1)`; an involution off `-1/2`.
pub fn gamma_dual(g: &Scalar) -> Option<Scalar> {
    let den = &(g * &Scalar::int(2)) + &Scalar::one();
    (!den.is_zero()).then(|| -&(g / &den))
}

/// `gamma -> -(gamma + 1)/(2 gamma + 1)`, relating `L_gamma` to the
/// `H_{gamma',0}` of the dual normal factor.
pub fn gamma_l(g: &Scalar) -> Option<Scalar> {
    let den = &(g * &Scalar::int(2)) + &Scalar::one();
    (!den.is_zero()).then(|| -&(&(g + &Scalar::one()) / &den))
}

fn in_unit_interval(g: &Scalar) -> bool {
    g.cmp_value(&Scalar::int(-1)).is_ge() && g.cmp_value(&Scalar::zero()).is_le()
}

/// Representative of `{gamma, gamma_dual(gamma)}` in `[-1, 0]`.
pub fn fold_gamma(g: &Scalar) -> Scalar {
    if in_unit_interval(g) {
        g.clone()
    } else {
        gamma_dual(g).expect("-1/2 lies in [-1,0]")
    }
}

fn is_minus_half(g: &Scalar, tol: f64) -> bool {
    g.approx_eq(&Scalar::ratio(-1, 2), tol)
}

/// Final label of an MA-catalog group and, when it is not itself the
/// representative, the catalog group the w0 route reaches.
pub fn theorem_label(p: &MaPoint, tol: f64) -> (SpClassLabel, Option<MaPoint>) {
    let lab = |d, i, param| SpClassLabel { id: ThmId::new(d, i), param };
    let gamma = |g: Scalar| Some(EntryParam::Gamma(g));
    let pt = |l, i, param| MaPoint { id: MaId::new(l, i), param };
    let g = match &p.param {
        Some(EntryParam::Gamma(g)) => Some(g.clone()),
        _ => None,
    };
    let half = || Scalar::ratio(-1, 2);
    let (label, route) = match (p.id.list, p.id.item) {
        (1, 1) => (lab(3, 1, None), None),
        (1, 2) => (lab(2, 1, p.param.clone()), None),
        (1, 3) => (lab(4, 2, None), None),
        (1, 4) => (lab(3, 6, p.param.clone()), None),
        (2, 1) => (lab(3, 2, None), None),
        (2, 2) => (lab(2, 2, p.param.clone()), None),
        (2, 3) => (lab(4, 3, None), None),
        (2, 4) => (lab(3, 7, p.param.clone()), None),
        (3, 1) => (lab(4, 1, None), None),
        (3, 2) => (lab(2, 3, None), None),
        (3, 3) => (lab(2, 4, None), None),
        (3, 4) => (lab(2, 5, gamma(half())), Some(pt(3, 5, gamma(half())))),
        (3, 5) => {
            let g = g.expect("validated");
            let f = fold_gamma(&g);
            let route = (!in_unit_interval(&g)).then(|| pt(3, 5, gamma(f.clone())));
            (lab(2, 5, gamma(f)), route)
        }
        (3, 6) => (lab(3, 3, None), None),
        (3, 7) => (lab(3, 4, None), None),
        (3, 8) => (lab(3, 5, p.param.clone()), None),
        (3, 9) => (lab(5, 1, None), None),
        (3, 10) => (lab(3, 8, None), None),
        (3, 11) => (lab(3, 9, None), None),
        (3, 12) => (lab(3, 5, gamma(half())), Some(pt(3, 8, gamma(half())))),
        (3, 13) => {
            let g = g.expect("validated");
            if is_minus_half(&g, tol) {
                (lab(3, 4, None), Some(pt(3, 7, None)))
            } else {
                let l = gamma_l(&g).expect("gamma != -1/2");
                (lab(3, 5, gamma(l.clone())), Some(pt(3, 8, gamma(l))))
            }
        }
        (3, 14) => (lab(4, 1, None), Some(pt(3, 1, None))),
        (3, 15) => (lab(4, 4, gamma(half())), Some(pt(3, 16, gamma(half())))),
        (3, 16) => {
            let g = g.expect("validated");
            let f = fold_gamma(&g);
            let route = (!in_unit_interval(&g)).then(|| pt(3, 16, gamma(f.clone())));
            (lab(4, 4, gamma(f)), route)
        }
        _ => unreachable!("validated id"),
    };
    (label, route)
}

// ---------------------------------------------------------------------------
// Witnesses and the classifier

#[derive(Clone, Debug, PartialEq)]
pub struct WitnessFactor {
    pub name: String,
    pub matrix: Mat4,
}

/// Factors in the order they are applied; `composed` is their product
/// (last factor leftmost).
#[derive(Clone, Debug, PartialEq)]
pub struct ConjugacyWitness {
    pub factors: Vec<WitnessFactor>,
    pub composed: Mat4,
}

impl Default for ConjugacyWitness {
    fn default() -> Self {
        ConjugacyWitness { factors: Vec::new(), composed: Mat4::identity() }
    }
}

impl ConjugacyWitness {
    pub fn identity() -> Self {
        Self::default()
    }

    /// Appends a factor unless it is the identity.
    pub fn then(&mut self, name: impl Into<String>, m: Mat4) {
        if m == Mat4::identity() {
            return;
        }
        self.composed = &m * &self.composed;
        self.factors.push(WitnessFactor { name: name.into(), matrix: m });
    }

    pub fn extend(&mut self, other: &ConjugacyWitness) {
        for f in &other.factors {
            self.then(f.name.clone(), f.matrix.clone());
        }
    }

    pub fn is_identity(&self) -> bool {
        self.factors.is_empty()
    }
}

impl fmt::Display for ConjugacyWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "identity");
        }
        let names: Vec<&str> = self.factors.iter().rev().map(|x| x.name.as_str()).collect();
        write!(f, "{} = {}", names.join(" . "), self.composed)
    }
}

fn linear(h: &Mat2) -> Result<Mat4> {
    Ok(QElement::linear(h.clone())?.realization().clone())
}

/// Worst residual of `W g W^-1` against `target` over sampled elements `g`
/// of `source`; infinite when some image leaves Q.
pub fn witness_residual(
    source: &Triple,
    w: &Mat4,
    target: &Triple,
    grid: &[Scalar],
    tol: f64,
) -> Result<f64> {
    let w_inv = w.invert()?;
    let basis = source.sigma.basis();
    let n = grid.len().max(1);
    let mut worst = 0.0f64;
    for (i, (p, _)) in source.h.samples(grid).into_iter().enumerate() {
        let mut s = SymMat2::zero();
        for (k, b) in basis.iter().enumerate() {
            let c = grid.get((i + k) % n).cloned().unwrap_or_else(Scalar::one);
            s = &s + &b.scale(&c);
        }
        let g = build_group_element(source, &s, &p)?;
        let x = &(w * g.realization()) * &w_inv;
        let Ok(q) = q_member(&x, tol.max(1e-12)) else { return Ok(f64::INFINITY) };
        let d_sigma = target.sigma.distance(q.sigma()) / q.sigma().norm_inf().max(1.0);
        let d_h = match target.h.locate(q.h(), f64::INFINITY) {
            Some(pp) => crate::family::residual(&target.h.element(&pp), q.h()),
            None => f64::INFINITY,
        };
        worst = worst.max(d_sigma).max(d_h);
    }
    Ok(worst)
}

/// Why only MA-conjugations can act on a catalog group, if that is the case.
pub fn w0_obstruction(p: &MaPoint) -> Option<&'static str> {
    match (p.id.list, p.id.is_dual()) {
        (1, false) | (2, true) => Some("Sigma contains a definite element (determinants not all <= 0)"),
        (1, true) => Some("every nonzero element of Sigma has det < 0, but sigma4^perp contains sigma3"),
        (2, false) => Some("Sigma can only reach span{sigma5} inside sigma4^perp, which is ruled out"),
        _ => None,
    }
}

/// The w0 step applied to a catalog group.
#[derive(Clone, Debug)]
pub struct W0Route {
    pub source: MaPoint,
    /// `g(0, sigma_5)` applied first (dual normal factor).
    pub pre_swap: bool,
    pub image: W0Image,
    /// MA-reduction of the image.
    pub target: MaPoint,
    pub witness: ConjugacyWitness,
}

/// `(Sigma, H)` of a list-3 group moved into `sigma_4^perp x| T`.
pub fn w0_frame(p: &MaPoint) -> Result<(SymSpan, HFamily, bool)> {
    if let Some(why) = w0_obstruction(p) {
        return Err(Error::PreconditionViolated(why.into()));
    }
    let t = p.triple();
    if !p.id.is_dual() {
        let (tt, branch) = wcanonical_reduce(&t.sigma)?;
        debug_assert_eq!(tt, Mat2::identity());
        if branch != WCanonical::Sigma3 {
            return Err(Error::PreconditionViolated("sigma_5 branch".into()));
        }
        return Ok((t.sigma, t.h, false));
    }
    let s5 = sigma5().to_mat2();
    Ok((t.sigma.act(&s5)?, t.h.conjugate(&s5)?, true))
}

pub fn w0_route(p: &MaPoint, grid: &[Scalar], tol: f64) -> Result<W0Route> {
    let (sigma, h, pre_swap) = w0_frame(p)?;
    let mut last = None;
    for a0 in a0_candidates(&h, grid, tol) {
        let image = match w0_conjugate(&sigma, &h, &a0, grid, tol) {
            Ok(i) => i,
            Err(e) => {
                last = Some(e);
                continue;
            }
        };
        let red = match ma_reduce(&image.triple(), grid, tol) {
            Ok(r) => r,
            Err(e) => {
                last = Some(e);
                continue;
            }
        };
        let mut witness = ConjugacyWitness::identity();
        if pre_swap {
            witness.then("g(0,sigma5)", linear(&sigma5().to_mat2())?);
        }
        witness.then(format!("g({a0} sigma4,I)"), shift(&sigma4().scale(&a0)));
        witness.then("w0", w0());
        witness.then("g(-tau',I)", shift(&-&image.tau));
        witness.then("g(0,k')", red.conjugator.realization().clone());
        return Ok(W0Route { source: p.clone(), pre_swap, image, target: red.entry, witness });
    }
    Err(last.unwrap_or_else(|| Error::Inconsistent("no a0 candidate".into())))
}

/// Crazytau transcripts of a list-3 group for every admissible `a0`.
pub fn w0_transcripts(p: &MaPoint, grid: &[Scalar], tol: f64) -> Result<Vec<CrazytauTranscript>> {
    let (sigma, h, _) = w0_frame(p)?;
    a0_candidates(&h, grid, tol)
        .iter()
        .map(|a0| crazytau_transcript(&sigma, &h, a0, grid, tol))
        .collect()
}

/// What conjugation by w0 does to a catalog group for one value of `a0`.
#[derive(Clone, Debug)]
pub enum W0Outcome {
    Reached(MaPoint),
    Crazytau(CrazytauTranscript),
    /// The image is not a class-E group (e.g. trivial `H'`).
    NotInE(String),
}

impl fmt::Display for W0Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            W0Outcome::Reached(p) => write!(f, "{p}"),
            W0Outcome::Crazytau(_) => write!(f, "crazytau fails"),
            W0Outcome::NotInE(why) => write!(f, "not in E ({why})"),
        }
    }
}

/// Outcome of the w0 step for every admissible `a0`.
pub fn w0_outcomes(p: &MaPoint, grid: &[Scalar], tol: f64) -> Result<Vec<(Scalar, W0Outcome)>> {
    let (sigma, h, _) = w0_frame(p)?;
    let mut out = Vec::new();
    for a0 in a0_candidates(&h, grid, tol) {
        let o = match w0_conjugate(&sigma, &h, &a0, grid, tol) {
            Err(Error::CrazytauFailed(_)) => {
                W0Outcome::Crazytau(crazytau_transcript(&sigma, &h, &a0, grid, tol)?)
            }
            Err(e) => return Err(e),
            Ok(img) if img.h.dim() == 0 => W0Outcome::NotInE("H' is trivial".into()),
            Ok(img) => match ma_reduce(&img.triple(), grid, tol) {
                Ok(r) => W0Outcome::Reached(r.entry),
                Err(e @ (Error::NotClassE(_) | Error::SigmaDimZero)) => W0Outcome::NotInE(e.to_string()),
                Err(e) => return Err(e),
            },
        };
        out.push((a0, o));
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct SpClassification {
    pub label: SpClassLabel,
    pub witness: ConjugacyWitness,
    /// MA-catalog group of the input.
    pub entry: MaPoint,
    pub route: Option<W0Route>,
    /// Worst sampled residual of the witness.
    pub residual: f64,
}

fn points_match(a: &MaPoint, b: &MaPoint, tol: f64) -> bool {
    a.id == b.id && params_match(&a.param, &b.param, tol)
}

pub fn sp_classify(t: &Triple, grid: &[Scalar], tol: f64) -> Result<SpClassification> {
    if !is_class_e(t, grid, tol) {
        return Err(Error::NotClassE("tau is not equivalent to zero or a factor is trivial".into()));
    }
    let red = ma_reduce(t, grid, tol)?;
    let (label, via) = theorem_label(&red.entry, tol);
    let mut witness = ConjugacyWitness::identity();
    witness.then("g(0,h)", red.conjugator.realization().clone());
    let route = match via {
        None => None,
        Some(expected) => {
            let r = w0_route(&red.entry, grid, tol)?;
            if !points_match(&r.target, &expected, tol.max(1e-9)) {
                return Err(Error::Inconsistent(format!(
                    "w0 route from {} reached {}, expected {expected}",
                    red.entry, r.target
                )));
            }
            witness.extend(&r.witness);
            Some(r)
        }
    };
    let residual = witness_residual(t, &witness.composed, &label.representative().triple(), grid, tol)?;
    if residual > tol {
        return Err(Error::Inconsistent(format!(
            "witness residual {residual:.3e} exceeds {tol:.1e} for {label}"
        )));
    }
    Ok(SpClassification { label, witness, entry: red.entry, route, residual })
}

/// Discriminating invariant for two groups with different labels.
#[derive(Clone, Debug)]
pub enum NonConjugacy {
    /// `dim Sigma + dim H` differ.
    Dimension(u8, u8),
    /// One representative admits only MA-conjugations, and distinct catalog
    /// groups are not MA-conjugate.
    MaOnly { entry: MaPoint, reason: &'static str },
    /// Conjugation by w0 leaves the coboundary class for every `a0`.
    Crazytau { entry: MaPoint, transcripts: Vec<CrazytauTranscript> },
    /// Every catalog group reachable from `entry`; the other one is absent.
    W0Orbit { entry: MaPoint, orbit: Vec<MaPoint>, other: MaPoint },
}

impl fmt::Display for NonConjugacy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NonConjugacy::Dimension(a, b) => write!(f, "group dimensions differ: {a} vs {b}"),
            NonConjugacy::MaOnly { entry, reason } => {
                write!(f, "{entry} admits only MA-conjugations: {reason}")
            }
            NonConjugacy::Crazytau { entry, transcripts } => {
                writeln!(f, "{entry}: w0-conjugation leaves the coboundary class")?;
                let parts: Vec<String> = transcripts.iter().map(|t| t.to_string()).collect();
                write!(f, "{}", parts.join("\n"))
            }
            NonConjugacy::W0Orbit { entry, orbit, other } => {
                let o: Vec<String> = orbit.iter().map(|p| p.to_string()).collect();
                write!(f, "{entry} reaches only {{{}}}, not {other}", o.join(", "))
            }
        }
    }
}

/// `None` when both classify to the same label.
pub fn non_conjugacy(
    a: &SpClassLabel,
    b: &SpClassLabel,
    grid: &[Scalar],
    tol: f64,
) -> Result<Option<NonConjugacy>> {
    if a.approx_eq(b, tol.max(1e-9)) {
        return Ok(None);
    }
    if a.dim() != b.dim() {
        return Ok(Some(NonConjugacy::Dimension(a.dim(), b.dim())));
    }
    let (ra, rb) = (a.representative(), b.representative());
    for x in [&ra, &rb] {
        if let Some(reason) = w0_obstruction(x) {
            return Ok(Some(NonConjugacy::MaOnly { entry: x.clone(), reason }));
        }
    }
    match w0_route(&ra, grid, tol) {
        Ok(r) => {
            let orbit = vec![ra.clone(), r.target];
            if orbit.iter().any(|p| points_match(p, &rb, tol.max(1e-9))) {
                return Err(Error::Inconsistent(format!("{ra} reaches {rb}")));
            }
            Ok(Some(NonConjugacy::W0Orbit { entry: ra, orbit, other: rb }))
        }
        Err(Error::CrazytauFailed(_)) => {
            let transcripts = w0_transcripts(&ra, grid, tol)?;
            Ok(Some(NonConjugacy::Crazytau { entry: ra, transcripts }))
        }
        Err(e) => Err(e),
    }
}

/// Conjugator carrying `a` onto `b` when they share a label, otherwise a
/// certificate that they are not conjugate.
pub enum Comparison {
    Conjugate { witness: Mat4, residual: f64 },
    Distinct(NonConjugacy),
}

pub fn compare(a: &Triple, b: &Triple, grid: &[Scalar], tol: f64) -> Result<Comparison> {
    let ca = sp_classify(a, grid, tol)?;
    let cb = sp_classify(b, grid, tol)?;
    if let Some(cert) = non_conjugacy(&ca.label, &cb.label, grid, tol)? {
        return Ok(Comparison::Distinct(cert));
    }
    let w = &cb.witness.composed.invert()? * &ca.witness.composed;
    let residual = witness_residual(a, &w, b, grid, tol)?;
    if residual > tol {
        return Err(Error::Inconsistent(format!("composed witness residual {residual:.3e}")));
    }
    Ok(Comparison::Conjugate { witness: w, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::sigma1;
    use crate::family::param_grid;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q(p: i64, r: i64) -> Scalar {
        Scalar::ratio(p, r)
    }

    fn point(s: &str, param: Option<EntryParam>) -> MaPoint {
        MaPoint::new(s.parse().unwrap(), param).unwrap()
    }

    fn gamma(p: i64, r: i64) -> Option<EntryParam> {
        Some(EntryParam::Gamma(q(p, r)))
    }

    fn rat(rng: &mut ChaCha8Rng, nonzero: bool) -> Scalar {
        loop {
            let x = Scalar::ratio(rng.gen_range(-5..=5), rng.gen_range(1..=3));
            if !(nonzero && x.is_zero()) {
                return x;
            }
        }
    }

    fn random_p(rng: &mut ChaCha8Rng) -> Mat4 {
        let h = Mat2::new(rat(rng, true), Scalar::zero(), rat(rng, false), rat(rng, true));
        let s = SymMat2::new(rat(rng, false), rat(rng, false), rat(rng, false));
        QElement::new(s, h).unwrap().realization().clone()
    }

    #[test]
    fn weyl_group_shape() {
        let all = WeylElement::all();
        assert_eq!(all.len(), 8);
        for w in &all {
            assert!(w.realize().is_symplectic(0.0), "{w}");
        }
        for (i, a) in all.iter().enumerate() {
            for b in &all[i + 1..] {
                assert_ne!(a.profile(), b.profile(), "{a} vs {b}");
            }
        }
        assert_eq!(WeylElement::W0.realize(), w0());
    }

    #[test]
    fn bruhat_examples() {
        assert_eq!(bruhat_cell(&w0(), 0.0).unwrap(), WeylElement::W0);
        let j = Mat4::symplectic_form();
        let neg_j = Mat4(j.0.map(|r| r.map(|x| -&x)));
        let w = bruhat_cell(&neg_j, 0.0).unwrap();
        assert_eq!(w, WeylElement { s_plus: SPlus::Zero, swap: false });
        let g = QElement::new(SymMat2::from_ints(1, 2, 3), Mat2::from_ints(2, 0, 5, 1)).unwrap();
        assert_eq!(bruhat_cell(g.realization(), 0.0).unwrap(), WeylElement::IDENTITY);
        let bad = Mat4::from_ints([[2, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]);
        assert_eq!(bruhat_cell(&bad, 0.0), Err(Error::NotSymplectic));
    }

    #[test]
    fn bruhat_double_cosets() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for w in WeylElement::all() {
            for _ in 0..10 {
                let g = &(&random_p(&mut rng) * &w.realize()) * &random_p(&mut rng);
                assert_eq!(bruhat_cell(&g, 0.0).unwrap(), w);
            }
        }
    }

    #[test]
    fn bruhat_float_input() {
        let t = Scalar::float(0.3);
        let h = Mat2::new(t.exp(), Scalar::zero(), t.clone(), (-&t).exp());
        let g = QElement::linear(h).unwrap();
        let x = &w0() * g.realization();
        assert_eq!(bruhat_cell(&x, 1e-9).unwrap(), WeylElement::W0);
    }

    #[test]
    fn psi_examples() {
        let z = Scalar::zero();
        let h = Mat2::new(q(2, 1), z.clone(), q(6, 1), q(3, 1));
        assert_eq!(psi(&sigma3(), &h, &z, &z, &z).unwrap(), q(3, 1));
        let e = Scalar::float(0.7).exp();
        let h = Mat2::scalar(e.clone());
        assert!(psi(&sigma3(), &h, &z, &z, &z).unwrap().is_zero());
        let t = Scalar::float(0.7);
        let h = Mat2::new(e.clone(), z.clone(), &t * &e, e);
        assert!(psi(&sigma3(), &h, &z, &z, &z).unwrap().approx_eq(&t, 1e-12));
        assert_eq!(psi(&sigma4(), &h, &z, &z, &z), Err(Error::SigmaNotInSigma4Perp));
        let upper = Mat2::from_ints(1, 1, 0, 1);
        assert_eq!(psi(&sigma3(), &upper, &z, &z, &z), Err(Error::NotLowerTriangular));
    }

    #[test]
    fn crazytau_examples() {
        let grid = param_grid(7);
        let s3 = SymSpan::new(&[sigma3()]).unwrap();
        let z = Scalar::zero();
        let t0 = HFamily::new(FamilyKind::TriFull);
        assert_eq!(crazytau_check(&s3, &t0, &z, &grid, 1e-9).unwrap(), Some((z.clone(), z.clone())));
        let h1 = HFamily::new(FamilyKind::TriOne);
        assert_eq!(crazytau_check(&s3, &h1, &z, &grid, 1e-9).unwrap(), None);
        let tr = crazytau_transcript(&s3, &h1, &z, &grid, 1e-9).unwrap();
        assert!(tr.to_string().ends_with("(crazytau) are not satisfied"));
        let l = HFamily::new(FamilyKind::L(q(-1, 1)));
        assert_eq!(a0_candidates(&l, &grid, 1e-9).len(), 2);
        let one = Scalar::one();
        let (a1, b1) = crazytau_check(&s3, &l, &one, &grid, 1e-9).unwrap().unwrap();
        assert!(a1.approx_eq(&q(-1, 1), 1e-9) && b1.is_zero(), "{a1} {b1}");
        let off = SymSpan::new(&[sigma1()]).unwrap();
        assert!(matches!(
            crazytau_check(&off, &t0, &z, &grid, 1e-9),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn wcanonical_examples() {
        let span = |s: SymMat2| SymSpan::new(&[s]).unwrap();
        assert_eq!(wcanonical_reduce(&span(sigma3())).unwrap(), (Mat2::identity(), WCanonical::Sigma3));
        assert_eq!(wcanonical_reduce(&span(sigma5())).unwrap().1, WCanonical::Sigma5);
        let s0 = SymMat2::from_ints(4, 1, 0);
        let (t, b) = wcanonical_reduce(&span(s0.clone())).unwrap();
        assert_eq!(b, WCanonical::Sigma5);
        // closed form of t^dagger[[[c,b],[b,0]]] for t = [[al,0],[al be,de]]
        let (al, de) = (t.get(0, 0).clone(), t.get(1, 1).clone());
        let be = t.get(1, 0) / &al;
        let (c, bb) = (q(4, 1), q(1, 1));
        let corner = &(&(&c * &de) - &(&(&q(2, 1) * &bb) * &(&al * &be))) / &(&(&al * &al) * &de);
        let off = &bb / &(&al * &de);
        assert!(corner.is_zero() && !off.is_zero());
        let img = dagger(&t, &s0).unwrap();
        assert_eq!(img, sigma5().scale(&off));
        assert_eq!(wcanonical_reduce(&span(sigma4())), Err(Error::SigmaNotInSigma4Perp));
    }

    #[test]
    fn w0_conjugate_examples() {
        let grid = param_grid(7);
        let z = Scalar::zero();
        let s3 = SymSpan::new(&[sigma3()]).unwrap();
        let perp4 = SymSpan::new(&[sigma3(), sigma5()]).unwrap();

        let img = w0_conjugate(&s3, &HFamily::new(FamilyKind::TriFull), &z, &grid, 1e-9).unwrap();
        assert!(img.sigma.same_span(&perp4, 0.0));
        assert_eq!(img.h.kind, FamilyKind::K0);

        let img = w0_conjugate(&s3, &HFamily::new(FamilyKind::TriDiag(q(1, 1))), &z, &grid, 1e-9).unwrap();
        assert!(img.sigma.same_span(&s3, 0.0));
        assert_eq!(img.h.kind, FamilyKind::TriDiag(q(-1, 3)));
        for h in &img.h_samples {
            let e = h.get(0, 0).to_f64();
            assert!((h.get(1, 1).to_f64() - e.powi(-2)).abs() < 1e-9);
        }

        let img = w0_conjugate(&s3, &HFamily::new(FamilyKind::K0), &z, &grid, 1e-9).unwrap();
        assert!(img.sigma.same_span(&s3, 0.0));
        assert_eq!(img.h.kind, FamilyKind::K0);

        let err = w0_conjugate(&s3, &HFamily::new(FamilyKind::TriOne), &z, &grid, 1e-9).unwrap_err();
        assert!(matches!(err, Error::CrazytauFailed(_)));
    }

    #[test]
    fn l_minus_one_is_fixed_with_nonzero_a0() {
        let grid = param_grid(7);
        let s3 = SymSpan::new(&[sigma3()]).unwrap();
        let img = w0_conjugate(&s3, &HFamily::new(FamilyKind::L(q(-1, 1))), &Scalar::one(), &grid, 1e-9)
            .unwrap();
        assert!(img.sigma.same_span(&s3, 0.0));
        assert_eq!(img.h.kind, FamilyKind::L(q(-1, 1)));
    }

    #[test]
    fn gamma_dictionary() {
        for (p, r) in [(-2, 1), (-1, 1), (-1, 4), (0, 1), (1, 3), (1, 1), (2, 1), (5, 7)] {
            let g = q(p, r);
            assert_eq!(gamma_dual(&gamma_dual(&g).unwrap()).unwrap(), g);
            assert_eq!(gamma_l(&gamma_l(&g).unwrap()).unwrap(), g);
            assert!(in_unit_interval(&fold_gamma(&g)));
            assert_eq!(gamma_dual(&g).unwrap() == g, g.is_zero() || g == q(-1, 1));
        }
        assert_eq!(gamma_dual(&q(-1, 2)), None);
        assert_eq!(fold_gamma(&q(1, 1)), q(-1, 3));
    }

    #[test]
    fn theorem_list_shape() {
        let all = ThmId::all();
        assert_eq!(all.len(), 19);
        let count = |d| all.iter().filter(|x| x.dim == d).count();
        assert_eq!([count(2), count(3), count(4), count(5)], [5, 9, 4, 1]);
        for id in all {
            assert_eq!(id.to_string().parse::<ThmId>().unwrap(), id);
        }
    }

    #[test]
    fn classify_examples() {
        let grid = param_grid(7);
        let c = sp_classify(&point("(3.iv)", None).triple(), &grid, 1e-9).unwrap();
        assert_eq!(c.label, SpClassLabel { id: ThmId::new(2, 5), param: gamma(-1, 2) });
        assert!(c.route.is_some() && c.residual <= 1e-9);

        let c = sp_classify(&point("(3.xv)", None).triple(), &grid, 1e-9).unwrap();
        assert_eq!(c.label, SpClassLabel { id: ThmId::new(4, 4), param: gamma(-1, 2) });

        let a3 = Some(EntryParam::Alpha(Alpha::Finite(q(3, 1))));
        let c = sp_classify(&point("(1.ii)", a3.clone()).triple(), &grid, 1e-9).unwrap();
        assert_eq!(c.label, SpClassLabel { id: ThmId::new(2, 1), param: a3 });
        assert!(c.witness.is_identity());

        let c = sp_classify(&point("(3.xvi)", gamma(1, 1)).triple(), &grid, 1e-9).unwrap();
        assert_eq!(c.label, SpClassLabel { id: ThmId::new(4, 4), param: gamma(-1, 3) });
        assert!(bruhat_cell(&c.witness.composed, 1e-9).unwrap() != WeylElement::IDENTITY);
    }

    #[test]
    fn every_catalog_group_classifies() {
        let grid = param_grid(7);
        let gammas = [q(-2, 1), q(-1, 1), q(-1, 2), q(-1, 4), q(0, 1), q(1, 3), q(2, 1)];
        for id in MaId::all() {
            let params: Vec<Option<EntryParam>> = match id.param_kind() {
                crate::canonical::ParamKind::None => vec![None],
                crate::canonical::ParamKind::Alpha => vec![
                    Some(EntryParam::Alpha(Alpha::Finite(q(0, 1)))),
                    Some(EntryParam::Alpha(Alpha::Finite(q(1, 2)))),
                    Some(EntryParam::Alpha(Alpha::Infinity)),
                ],
                crate::canonical::ParamKind::Gamma => gammas.iter().map(|g| Some(EntryParam::Gamma(g.clone()))).collect(),
            };
            for param in params {
                let p = MaPoint::new(id, param).unwrap();
                let c = sp_classify(&p.triple(), &grid, 1e-9).unwrap_or_else(|e| panic!("{p}: {e}"));
                let t = p.triple();
                assert_eq!(c.label.dim() as usize, t.sigma.dim() + t.h.dim(), "{p}");
            }
        }
    }

    #[test]
    fn crazytau_failures_for_h1() {
        let grid = param_grid(7);
        for s in ["(3.iii)", "(3.xi)"] {
            let p = point(s, None);
            assert!(w0_route(&p, &grid, 1e-9).is_err());
            let tr = w0_transcripts(&p, &grid, 1e-9).unwrap();
            assert!(tr.iter().all(|t| !t.satisfied), "{s}");
        }
        assert!(w0_obstruction(&point("(2.i)", None)).is_some());
    }

    #[test]
    fn certificates() {
        let grid = param_grid(7);
        let lab = |d, i, p| SpClassLabel { id: ThmId::new(d, i), param: p };
        let c = non_conjugacy(&lab(2, 3, None), &lab(4, 1, None), &grid, 1e-9).unwrap().unwrap();
        assert!(matches!(c, NonConjugacy::Dimension(2, 4)));
        let c = non_conjugacy(&lab(2, 4, None), &lab(2, 3, None), &grid, 1e-9).unwrap().unwrap();
        assert!(matches!(c, NonConjugacy::Crazytau { .. }));
        assert!(c.to_string().contains("(crazytau) are not satisfied"));
        let c = non_conjugacy(&lab(3, 3, None), &lab(3, 4, None), &grid, 1e-9).unwrap().unwrap();
        assert!(matches!(c, NonConjugacy::W0Orbit { .. }), "{c}");
        let c = non_conjugacy(&lab(3, 1, None), &lab(3, 3, None), &grid, 1e-9).unwrap().unwrap();
        assert!(matches!(c, NonConjugacy::MaOnly { .. }));
        assert!(non_conjugacy(&lab(3, 3, None), &lab(3, 3, None), &grid, 1e-9).unwrap().is_none());
    }

    #[test]
    fn compare_builds_conjugator() {
        let grid = param_grid(7);
        let a = point("(3.xiv)", None).triple();
        let b = point("(3.i)", None).triple();
        match compare(&a, &b, &grid, 1e-9).unwrap() {
            Comparison::Conjugate { witness, residual } => {
                assert!(residual <= 1e-9);
                assert!(witness.is_symplectic(1e-9));
            }
            Comparison::Distinct(c) => panic!("{c}"),
        }
    }
}
