//! Sylvester reduction of a symmetric generator, the symmetrizer groups
//! H(sigma), and the catalog of class-E groups up to MA-conjugation.

use std::fmt;
use std::str::FromStr;

use crate::constants::{lambda, sigma, sigma5};
use crate::error::{Error, ParseError, Result};
use crate::family::{param_grid, Alpha, FamilyKind, HFamily};
use crate::linalg::SymSpan;
use crate::matrix::{dagger, Mat2, SymMat2};
use crate::parabolic::QElement;
use crate::scalar::Scalar;
use crate::subalgebra::{alpha_from_invariants, classify_subalgebra, Ambient, LieSub, SubLabel};
use crate::triple::{is_class_e, lie_invariant, TauMap, Triple};

/// Inertia `(p, q, r)` normalized to `p >= q`, with a witness `g`
/// satisfying `g^dagger[I_pqr] = sign * sigma`.
#[derive(Clone, Debug, PartialEq)]
pub struct Signature {
    pub p: u8,
    pub q: u8,
    pub r: u8,
    pub witness: Mat2,
    /// `-1` when the input had `q > p` and was negated.
    pub sign: i32,
}

impl Signature {
    /// `I_pqr`.
    pub fn metric(&self) -> SymMat2 {
        let d = |i: u8| {
            if i < self.p {
                Scalar::one()
            } else if i < self.p + self.q {
                Scalar::int(-1)
            } else {
                Scalar::zero()
            }
        };
        SymMat2::new(d(0), Scalar::zero(), d(1))
    }

    /// The canonical representative `sigma_1`, `sigma_2` or `sigma_3`.
    pub fn canonical_index(&self) -> Option<usize> {
        match (self.p, self.q, self.r) {
            (2, 0, 0) => Some(1),
            (1, 1, 0) => Some(2),
            (1, 0, 1) => Some(3),
            _ => None,
        }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.p, self.q, self.r)
    }
}

pub fn sylvester_reduce(s: &SymMat2) -> Signature {
    if s.is_zero() {
        return Signature { p: 0, q: 0, r: 2, witness: Mat2::identity(), sign: 1 };
    }
    let (det, tr) = (s.det(), s.trace());
    let sign = match det.signum() {
        0 | 1 => tr.signum(),
        _ => 1,
    };
    let s = s.scale(&Scalar::int(sign as i64));

    // basis change making the (1,1) entry nonzero
    let e = if !s.c.is_zero() {
        Mat2::identity()
    } else if !s.a.is_zero() {
        sigma5().to_mat2()
    } else {
        Mat2::from_ints(1, 0, 1, 1)
    };
    let m = &(&e.transpose() * &s.to_mat2()) * &e;
    let (c, b, a) = (m.0[0][0].clone(), m.0[0][1].clone(), m.0[1][1].clone());
    // t^U diag(d1, d2) U with U = [[1, b/c], [0, 1]]
    let u = Mat2::new(Scalar::one(), &b / &c, Scalar::zero(), Scalar::one());
    let d1 = c.clone();
    let d2 = &a - &(&(&b * &b) / &c);
    let root = |d: &Scalar| if d.is_zero() { Scalar::one() } else { d.abs().sqrt() };
    let scale = Mat2::diag(root(&d1), root(&d2));
    // order the diagonal signs as (+, -, 0)
    let rank_key = |d: &Scalar| match d.signum() {
        1 => 0,
        -1 => 1,
        _ => 2,
    };
    let perm = if rank_key(&d1) > rank_key(&d2) {
        sigma5().to_mat2()
    } else {
        Mat2::identity()
    };
    let einv = e.invert().expect("basis change is invertible");
    let m = &(&perm * &scale) * &(&u * &einv);
    let witness = m.invert().expect("reduction is invertible");

    let count = |k: i32| [&d1, &d2].iter().filter(|d| d.signum() == k).count() as u8;
    Signature { p: count(1), q: count(-1), r: count(0), witness, sign }
}

/// `lambda` with `h^dagger[sigma] = lambda sigma`, if any.
pub fn symmetrizer_membership(h: &Mat2, s: &SymMat2, tol: f64) -> Result<Option<Scalar>> {
    if s.is_zero() {
        return Err(Error::PreconditionViolated("sigma must be nonzero".into()));
    }
    let img = dagger(h, s)?;
    let (sc, ic) = (s.coords(), img.coords());
    let k = (0..3)
        .max_by(|&i, &j| sc[i].to_f64().abs().total_cmp(&sc[j].to_f64().abs()))
        .expect("three coordinates");
    let lam = &ic[k] / &sc[k];
    let scaled = s.scale(&lam);
    let tol = tol * img.norm_inf().max(1.0);
    Ok(img.approx_eq(&scaled, tol).then_some(lam))
}

/// `h = phi(e^s, f)` with `f = e^{s/2} h` in `F(sigma)`: returns
/// `(e^s, f, epsilon)` where `f^dagger[sigma] = epsilon sigma`.
pub fn iso_split(h: &Mat2, s: &SymMat2, tol: f64) -> Result<(Scalar, Mat2, i32)> {
    let lam = symmetrizer_membership(h, s, tol)?.ok_or(Error::NotInHSigma)?;
    let es = lam.abs();
    let f = h.scale(&es.sqrt());
    Ok((es, f, lam.signum()))
}

/// Identifier of an MA-catalog entry, printed as `(3.vii)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MaId {
    pub list: u8,
    pub item: u8,
}

const ROMAN: [&str; 16] = [
    "i", "ii", "iii", "iv", "v", "vi", "vii", "viii", "ix", "x", "xi", "xii", "xiii", "xiv",
    "xv", "xvi",
];

impl MaId {
    pub const fn new(list: u8, item: u8) -> Self {
        MaId { list, item }
    }

    pub fn all() -> Vec<MaId> {
        (1..=2)
            .flat_map(|l| (1..=4).map(move |i| MaId::new(l, i)))
            .chain((1..=16).map(|i| MaId::new(3, i)))
            .collect()
    }

    pub fn param_kind(self) -> ParamKind {
        match (self.list, self.item) {
            (1 | 2, 2 | 4) => ParamKind::Alpha,
            (3, 5 | 8 | 13 | 16) => ParamKind::Gamma,
            _ => ParamKind::None,
        }
    }

    /// Whether the normal factor is `Sigma_i^perp` rather than `Sigma_i`.
    pub fn is_dual(self) -> bool {
        match self.list {
            3 => self.item > 8,
            _ => self.item > 2,
        }
    }
}

impl fmt::Display for MaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}.{})", self.list, ROMAN[(self.item - 1) as usize])
    }
}

impl FromStr for MaId {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, ParseError> {
        let bad = || ParseError::Field { field: "entry".into(), message: format!("unknown entry `{s}`") };
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let (l, r) = inner.split_once('.').ok_or_else(bad)?;
        let list: u8 = l.parse().map_err(|_| bad())?;
        let item = ROMAN.iter().position(|x| *x == r).ok_or_else(bad)? as u8 + 1;
        let id = MaId::new(list, item);
        MaId::all().contains(&id).then_some(id).ok_or_else(bad)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParamKind {
    None,
    /// `alpha in [0, inf]`.
    Alpha,
    /// `gamma in R`.
    Gamma,
}

#[derive(Clone, Debug, PartialEq)]
pub enum EntryParam {
    Alpha(Alpha),
    Gamma(Scalar),
}

impl fmt::Display for EntryParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EntryParam::Alpha(a) => write!(f, "alpha={a}"),
            EntryParam::Gamma(g) => write!(f, "gamma={g}"),
        }
    }
}

/// A concrete catalog group: entry plus its parameter.
#[derive(Clone, Debug, PartialEq)]
pub struct MaPoint {
    pub id: MaId,
    pub param: Option<EntryParam>,
}

impl fmt::Display for MaPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.param {
            Some(p) => write!(f, "{} {p}", self.id),
            None => write!(f, "{}", self.id),
        }
    }
}

impl MaPoint {
    pub fn new(id: MaId, param: Option<EntryParam>) -> Result<Self> {
        match (id.param_kind(), &param) {
            (ParamKind::None, None)
            | (ParamKind::Alpha, Some(EntryParam::Alpha(_)))
            | (ParamKind::Gamma, Some(EntryParam::Gamma(_))) => {}
            _ => {
                return Err(Error::PreconditionViolated(format!(
                    "entry {id} takes parameter kind {:?}",
                    id.param_kind()
                )))
            }
        }
        if let Some(EntryParam::Alpha(Alpha::Finite(a))) = &param {
            if a.signum() < 0 {
                return Err(Error::PreconditionViolated("alpha must be >= 0".into()));
            }
        }
        Ok(MaPoint { id, param })
    }

    fn alpha(&self) -> Alpha {
        match &self.param {
            Some(EntryParam::Alpha(a)) => a.clone(),
            _ => unreachable!("validated"),
        }
    }

    fn gamma(&self) -> Scalar {
        match &self.param {
            Some(EntryParam::Gamma(g)) => g.clone(),
            _ => unreachable!("validated"),
        }
    }

    pub fn triple(&self) -> Triple {
        use FamilyKind::*;
        let MaId { list, item } = self.id;
        let base = SymSpan::new(&[sigma(list as usize).expect("list in 1..=3")]).expect("nonzero");
        let sig = if self.id.is_dual() { base.perp() } else { base };
        let fam = |k| HFamily::new(k);
        let tr = |k| HFamily { kind: k, transposed: true, conjugator: None };
        let h = match (list, item) {
            (1, 1 | 3) => fam(Sigma1Full),
            (1, 2 | 4) => fam(Sigma1Alpha(self.alpha())),
            (2, 1 | 3) => fam(Sigma2Full),
            (2, 2 | 4) => fam(Sigma2Alpha(self.alpha())),
            (3, 1) => fam(TriFull),
            (3, 2) => fam(TriUnipotent),
            (3, 3) => fam(TriOne),
            (3, 4 | 12) => fam(TriScalar),
            (3, 5 | 13) => fam(TriDiag(self.gamma())),
            (3, 6 | 14) => fam(K0),
            (3, 7) => fam(KInf),
            (3, 8) => fam(L(self.gamma())),
            (3, 9) => tr(TriFull),
            (3, 10) => tr(TriUnipotent),
            (3, 11) => tr(TriOne),
            (3, 15) => tr(KInf),
            (3, 16) => tr(L(self.gamma())),
            _ => unreachable!("validated id"),
        };
        Triple::new(sig, h, TauMap::Zero)
    }
}

/// Catalog listing: identifier, parameter kind and a textual description.
#[derive(Clone, Debug, PartialEq)]
pub struct MaEntry {
    pub id: MaId,
    pub param: ParamKind,
    pub description: String,
}

pub fn ma_catalog() -> Vec<MaEntry> {
    MaId::all()
        .into_iter()
        .map(|id| {
            let sample = match id.param_kind() {
                ParamKind::None => None,
                ParamKind::Alpha => Some(EntryParam::Alpha(Alpha::Finite(Scalar::zero()))),
                ParamKind::Gamma => Some(EntryParam::Gamma(Scalar::zero())),
            };
            let t = MaPoint::new(id, sample).expect("matching kind").triple();
            let sig = match (id.list, id.is_dual()) {
                (l, false) => format!("Sigma{l}"),
                (l, true) => format!("Sigma{l}^perp"),
            };
            let h = t.h.to_string();
            let h = match id.param_kind() {
                ParamKind::Alpha => h.replace("H_0", "H_alpha"),
                ParamKind::Gamma => h.replace("{0,0}", "{gamma,0}").replace("L_0", "L_gamma"),
                ParamKind::None => h,
            };
            let range = match id.param_kind() {
                ParamKind::Alpha => ", alpha in [0,inf]",
                ParamKind::Gamma => ", gamma in R",
                ParamKind::None => "",
            };
            MaEntry { id, param: id.param_kind(), description: format!("{sig} x| {h}{range}") }
        })
        .collect()
}

/// Result of [`ma_reduce`]: `g(0, h) G g(0, h)^-1` is the catalog group.
#[derive(Clone, Debug, PartialEq)]
pub struct MaReduction {
    pub entry: MaPoint,
    pub conjugator: QElement,
}

fn sigma_invariant(t: &Triple, grid: &[Scalar], tol: f64) -> bool {
    let gens = t.h.generators();
    if t.sigma.is_exact() && gens.iter().all(Mat2::is_exact) {
        lie_invariant(&t.sigma, &gens)
    } else {
        t.sampled_invariance_defect(grid) <= tol
    }
}

/// Rescales a rank-one sigma so the Sylvester witness stays rational.
fn rank_one_normalized(s: &SymMat2) -> SymMat2 {
    if !s.det().is_zero() {
        return s.clone();
    }
    let pivot = if !s.c.is_zero() {
        s.c.clone()
    } else if !s.a.is_zero() {
        s.a.clone()
    } else {
        &s.b * &Scalar::int(2)
    };
    s.scale(&pivot.abs().recip())
}

/// Reduces a one-dimensional-Sigma triple: returns the label, ambient and
/// conjugator `h` with `h^dagger[Sigma] = Sigma_i`.
fn reduce_dim1(t: &Triple, tol: f64) -> Result<(Ambient, SubLabel, Mat2)> {
    let s = rank_one_normalized(&t.sigma.basis()[0]);
    let sig = sylvester_reduce(&s);
    let ambient = match sig.canonical_index() {
        Some(1) => Ambient::Sigma1,
        Some(2) => Ambient::Sigma2,
        Some(3) => Ambient::Sigma3,
        _ => return Err(Error::SigmaDimZero),
    };
    let k = sig.witness.invert()?;
    let gens = t.h.generators();
    let conj = gens.iter().map(|x| k.conj(x)).collect::<Result<Vec<_>>>()?;
    let sub = LieSub::new(ambient, conj, tol)
        .map_err(|e| Error::NotClassE(format!("H does not normalize Sigma: {e}")))?;
    let mut c = classify_subalgebra(&sub, tol)?;
    // alpha is a conjugation invariant: read it off the original generator
    if gens.len() == 1 {
        if let SubLabel::Sigma1Alpha(Alpha::Finite(_)) | SubLabel::Sigma2Alpha(Alpha::Finite(_)) =
            &c.label
        {
            let a = alpha_from_invariants(&gens[0], ambient);
            c.label = match ambient {
                Ambient::Sigma1 => SubLabel::Sigma1Alpha(a),
                _ => SubLabel::Sigma2Alpha(a),
            };
        }
    }
    Ok((ambient, c.label, &c.witness * &k))
}

fn entry_for(ambient: Ambient, label: &SubLabel, dual: bool) -> Result<MaPoint> {
    use SubLabel::*;
    let off = if dual { 8 } else { 0 };
    let small = if dual { 2 } else { 0 };
    let (id, param) = match (ambient, label) {
        (Ambient::Sigma1, Full(_)) => (MaId::new(1, 1 + small), None),
        (Ambient::Sigma1, Sigma1Alpha(a)) => (MaId::new(1, 2 + small), Some(EntryParam::Alpha(a.clone()))),
        (Ambient::Sigma2, Full(_)) => (MaId::new(2, 1 + small), None),
        (Ambient::Sigma2, Sigma2Alpha(a)) => (MaId::new(2, 2 + small), Some(EntryParam::Alpha(a.clone()))),
        (Ambient::Sigma3, Full(_)) => (MaId::new(3, 1 + off), None),
        (Ambient::Sigma3, H0) => (MaId::new(3, 2 + off), None),
        (Ambient::Sigma3, H1) => (MaId::new(3, 3 + off), None),
        (Ambient::Sigma3, HInf) => (MaId::new(3, 4 + off), None),
        (Ambient::Sigma3, HGamma0(g)) => (MaId::new(3, 5 + off), Some(EntryParam::Gamma(g.clone()))),
        (Ambient::Sigma3, K0) => (MaId::new(3, 6 + off), None),
        (Ambient::Sigma3, KInf) => (MaId::new(3, 7 + off), None),
        (Ambient::Sigma3, L(g)) => (MaId::new(3, 8 + off), Some(EntryParam::Gamma(g.clone()))),
        _ => return Err(Error::Inconsistent(format!("label {label} outside {ambient}"))),
    };
    MaPoint::new(id, param)
}

/// Checks on samples that `g(0,h)` carries `t` onto `target`.
pub fn verify_linear_conjugation(
    t: &Triple,
    h: &Mat2,
    target: &Triple,
    grid: &[Scalar],
    tol: f64,
) -> Result<()> {
    for s in t.sigma.basis() {
        let img = dagger(h, &s)?;
        if target.sigma.distance(&img) > tol * img.norm_inf().max(1.0) {
            return Err(Error::Inconsistent(format!("{s} maps outside {}", target.sigma)));
        }
    }
    if t.sigma.dim() != target.sigma.dim() {
        return Err(Error::Inconsistent("Sigma dimensions differ".into()));
    }
    for (p, x) in t.h.samples(grid) {
        let y = h.conj(&x)?;
        if !target.h.contains(&y, tol) {
            return Err(Error::Inconsistent(format!("H sample at {p:?} maps outside {}", target.h)));
        }
    }
    Ok(())
}

pub fn ma_reduce(t: &Triple, grid: &[Scalar], tol: f64) -> Result<MaReduction> {
    match t.sigma.dim() {
        0 => return Err(Error::SigmaDimZero),
        1 | 2 => {}
        _ => return Err(Error::NotClassE("dim Sigma must be 1 or 2".into())),
    }
    if !is_class_e(t, grid, tol) {
        return Err(Error::NotClassE("tau is not equivalent to zero or H is trivial".into()));
    }
    if !sigma_invariant(t, grid, tol) {
        return Err(Error::NotClassE("Sigma is not H-invariant".into()));
    }
    let zero_tau = Triple::new(t.sigma.clone(), t.h.clone(), TauMap::Zero);
    let (entry, h) = if t.sigma.dim() == 1 {
        let (ambient, label, h) = reduce_dim1(&zero_tau, tol)?;
        (entry_for(ambient, &label, false)?, h)
    } else {
        let d = crate::triple::dual(&zero_tau)?;
        let (ambient, label, h1) = reduce_dim1(&d, tol)?;
        let mut h = h1.sharp()?;
        // t H_alpha(sigma_1) = H_{-alpha}(sigma_1); Lambda restores the sign
        if matches!(label, SubLabel::Sigma1Alpha(Alpha::Finite(ref a)) if !a.is_zero()) {
            h = &lambda() * &h;
        }
        (entry_for(ambient, &label, true)?, h)
    };
    verify_linear_conjugation(t, &h, &entry.triple(), grid, tol.max(1e-9))?;
    Ok(MaReduction { entry, conjugator: QElement::linear(h)? })
}

/// [`ma_reduce`] on the default grid.
pub fn ma_reduce_default(t: &Triple, tol: f64) -> Result<MaReduction> {
    ma_reduce(t, &param_grid(7), tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::{ell, sigma1, sigma2, sigma3, sigma4};

    fn q(p: i64, r: i64) -> Scalar {
        Scalar::ratio(p, r)
    }

    fn check_witness(s: &SymMat2, sig: &Signature) {
        let img = dagger(&sig.witness, &sig.metric()).unwrap();
        let target = s.scale(&Scalar::int(sig.sign as i64));
        let tol = if img.is_exact() { 0.0 } else { 1e-12 };
        assert!(img.approx_eq(&target, tol), "{s}: {img}");
    }

    #[test]
    fn sylvester_examples() {
        let s = sylvester_reduce(&sigma5());
        assert_eq!((s.p, s.q, s.r), (1, 1, 0));
        check_witness(&sigma5(), &s);

        let d = SymMat2::from_ints(2, 0, 0);
        let s = sylvester_reduce(&d);
        assert_eq!((s.p, s.q, s.r), (1, 0, 1));
        assert!(s
            .witness
            .approx_eq(&Mat2::diag(Scalar::float(0.5f64.sqrt()), Scalar::one()), 1e-15));
        check_witness(&d, &s);

        let s = sylvester_reduce(&sigma1());
        assert_eq!((s.p, s.q, s.r), (2, 0, 0));
        assert_eq!(s.witness, Mat2::identity());

        let z = sylvester_reduce(&SymMat2::zero());
        assert_eq!((z.p, z.q, z.r), (0, 0, 2));
    }

    #[test]
    fn sylvester_negative_inputs_flip() {
        for s in [SymMat2::from_ints(-1, 0, -4), SymMat2::from_ints(0, 0, -3)] {
            let sig = sylvester_reduce(&s);
            assert_eq!(sig.sign, -1);
            assert!(sig.p >= sig.q);
            check_witness(&s, &sig);
        }
        let s = SymMat2::from_ints(0, 3, 0);
        check_witness(&s, &sylvester_reduce(&s));
        let s = SymMat2::from_ints(0, 0, 9);
        let sig = sylvester_reduce(&s);
        assert!(sig.witness.is_exact());
        check_witness(&s, &sig);
    }

    #[test]
    fn symmetrizer_examples() {
        let three = Mat2::scalar(Scalar::int(3));
        assert_eq!(
            symmetrizer_membership(&three, &SymMat2::from_ints(1, 2, 5), 0.0).unwrap(),
            Some(q(1, 9))
        );
        let l = ell(Scalar::int(2), Scalar::int(-1), Scalar::int(3));
        assert!(symmetrizer_membership(&l, &sigma3(), 0.0).unwrap().is_some());
        let r = crate::constants::rot(&Scalar::float(std::f64::consts::FRAC_PI_4));
        assert_eq!(symmetrizer_membership(&r, &sigma3(), 1e-9).unwrap(), None);
    }

    #[test]
    fn iso_split_examples() {
        let (es, f, eps) = iso_split(&Mat2::scalar(Scalar::int(2)), &sigma1(), 0.0).unwrap();
        assert_eq!((es, f, eps), (q(1, 4), Mat2::identity(), 1));

        let r = crate::constants::rot(&Scalar::float(0.3));
        let (es, f, eps) = iso_split(&r, &sigma1(), 1e-12).unwrap();
        assert!(es.approx_eq(&Scalar::one(), 1e-12));
        assert!(f.approx_eq(&r, 1e-12));
        assert_eq!(eps, 1);

        let a = crate::constants::boost(&Scalar::float(0.7));
        let h = a.scale(&Scalar::float(std::f64::consts::E));
        let (es, f, _) = iso_split(&h, &sigma2(), 1e-12).unwrap();
        assert!(es.approx_eq(&Scalar::float((-2.0f64).exp()), 1e-12));
        assert!(f.approx_eq(&a, 1e-12));

        // sigma_5 swaps the sign of sigma_2: an element of O*(1,1)
        let (_, _, eps) = iso_split(&sigma5().to_mat2(), &sigma2(), 0.0).unwrap();
        assert_eq!(eps, -1);
        assert_eq!(
            iso_split(&sigma5().to_mat2(), &sigma3(), 0.0),
            Err(Error::NotInHSigma)
        );
    }

    #[test]
    fn catalog_shape() {
        let cat = ma_catalog();
        assert_eq!(cat.len(), 24);
        assert_eq!(cat[1].id.to_string(), "(1.ii)");
        assert!(cat[1].description.starts_with("Sigma1 x| H_alpha(sigma1)"));
        let vii = cat.iter().find(|e| e.id == MaId::new(3, 7)).unwrap();
        assert_eq!(vii.description, "Sigma3 x| Kinf(sigma3)");
        let xvi = cat.iter().find(|e| e.id == MaId::new(3, 16)).unwrap();
        assert!(xvi.description.starts_with("Sigma3^perp x| tL_gamma(sigma3)"));
        for id in MaId::all() {
            assert_eq!(id.to_string().parse::<MaId>().unwrap(), id);
        }
        assert!("(3.xvii)".parse::<MaId>().is_err());
        assert!("(2.v)".parse::<MaId>().is_err());
    }

    fn sample_points() -> Vec<MaPoint> {
        MaId::all()
            .into_iter()
            .flat_map(|id| {
                let params: Vec<Option<EntryParam>> = match id.param_kind() {
                    ParamKind::None => vec![None],
                    ParamKind::Alpha => vec![
                        Some(EntryParam::Alpha(Alpha::Finite(Scalar::zero()))),
                        Some(EntryParam::Alpha(Alpha::Finite(q(3, 2)))),
                        Some(EntryParam::Alpha(Alpha::Infinity)),
                    ],
                    ParamKind::Gamma => [q(-2, 1), q(-1, 1), q(-1, 2), q(0, 1), q(1, 1)]
                        .into_iter()
                        .map(|g| Some(EntryParam::Gamma(g)))
                        .collect(),
                };
                params.into_iter().map(move |p| MaPoint::new(id, p).unwrap())
            })
            .collect()
    }

    #[test]
    fn catalog_entries_are_class_e_and_invariant() {
        let grid = param_grid(7);
        for p in sample_points() {
            let t = p.triple();
            assert!(is_class_e(&t, &grid, 1e-9), "{p}");
            assert!(t.is_h_invariant(), "{p}");
        }
    }

    #[test]
    fn ma_reduce_is_idempotent_on_catalog() {
        for p in sample_points() {
            let r = ma_reduce_default(&p.triple(), 1e-9).unwrap_or_else(|e| panic!("{p}: {e}"));
            assert_eq!(r.entry, p);
        }
    }

    #[test]
    fn ma_reduce_examples() {
        // conjugated unipotent family over span{diag(2,0)}
        let c = Mat2::diag(Scalar::float(0.5f64.sqrt()), Scalar::one()).invert().unwrap();
        let t = Triple::new(
            SymSpan::new(&[SymMat2::from_ints(2, 0, 0)]).unwrap(),
            HFamily::new(FamilyKind::TriUnipotent).conjugate(&c).unwrap(),
            TauMap::Zero,
        );
        assert_eq!(ma_reduce_default(&t, 1e-9).unwrap().entry.id, MaId::new(3, 2));

        let t = Triple::new(
            SymSpan::new(&[sigma1()]).unwrap(),
            HFamily::new(FamilyKind::Sigma1Alpha(Alpha::Finite(Scalar::int(-2)))),
            TauMap::Zero,
        );
        let r = ma_reduce_default(&t, 1e-9).unwrap();
        assert_eq!(
            r.entry,
            MaPoint::new(MaId::new(1, 2), Some(EntryParam::Alpha(Alpha::Finite(Scalar::int(2)))))
                .unwrap()
        );
        assert_eq!(r.conjugator.h(), &lambda());

        let t = Triple::new(
            SymSpan::new(&[sigma2()]).unwrap(),
            HFamily::new(FamilyKind::Sigma2Alpha(Alpha::Infinity)),
            TauMap::Zero,
        );
        let r = ma_reduce_default(&t, 1e-9).unwrap();
        assert_eq!(r.entry.id, MaId::new(2, 2));
        assert_eq!(r.conjugator, QElement::identity());
    }

    #[test]
    fn ma_reduce_general_position() {
        // sigma rank one off the axes, family conjugated to match
        let g = Mat2::from_ints(1, 2, 0, 1);
        let s = dagger(&g, &sigma3()).unwrap();
        let t = Triple::new(
            SymSpan::new(&[s]).unwrap(),
            HFamily::new(FamilyKind::L(q(1, 3))).conjugate(&g).unwrap(),
            TauMap::Zero,
        );
        let r = ma_reduce_default(&t, 1e-9).unwrap();
        assert_eq!(
            r.entry,
            MaPoint::new(MaId::new(3, 8), Some(EntryParam::Gamma(q(1, 3)))).unwrap()
        );
        assert!(r.conjugator.is_exact());

        // two-dimensional sigma through the dual
        let t = Triple::new(
            SymSpan::new(&[sigma4(), sigma5()]).unwrap().act(&g).unwrap(),
            HFamily { kind: FamilyKind::KInf, transposed: true, conjugator: None }
                .conjugate(&g)
                .unwrap(),
            TauMap::Zero,
        );
        let r = ma_reduce_default(&t, 1e-9).unwrap();
        assert_eq!(r.entry.id, MaId::new(3, 15));
    }

    #[test]
    fn ma_reduce_errors() {
        let t = Triple::new(SymSpan::zero(), HFamily::new(FamilyKind::TriScalar), TauMap::Zero);
        assert_eq!(ma_reduce_default(&t, 1e-9), Err(Error::SigmaDimZero));
        let t = Triple::new(
            SymSpan::new(&[sigma3()]).unwrap(),
            HFamily::new(FamilyKind::Trivial),
            TauMap::Zero,
        );
        assert!(matches!(ma_reduce_default(&t, 1e-9), Err(Error::NotClassE(_))));
        let t = Triple::new(
            SymSpan::new(&[sigma4()]).unwrap(),
            HFamily::new(FamilyKind::TriUnipotent),
            TauMap::Zero,
        );
        assert!(matches!(ma_reduce_default(&t, 1e-9), Err(Error::NotClassE(_))));
    }
}
