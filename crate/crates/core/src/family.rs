//! Closed-form catalog of the connected subgroups H of GL(2,R) that occur
//! as homogeneous components, with Transposed / Conjugated wrappers.

use std::fmt;

use crate::constants::{b_mat, boost, j2, rot, sigma4, sigma5};
use crate::error::Result;
use crate::matrix::{dagger, Mat2, SymMat2};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub enum Alpha {
    Finite(Scalar),
    Infinity,
}

impl Alpha {
    pub fn neg(&self) -> Alpha {
        match self {
            Alpha::Finite(a) => Alpha::Finite(-a),
            Alpha::Infinity => Alpha::Infinity,
        }
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Alpha::Finite(a) => write!(f, "{a}"),
            Alpha::Infinity => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum FamilyKind {
    /// `e^s R_t`, params `(t, s)`.
    Sigma1Full,
    /// `e^t R_{alpha t}`; `R_t` at infinity.
    Sigma1Alpha(Alpha),
    /// `e^s A_t`, params `(t, s)`.
    Sigma2Full,
    /// `e^t A_{alpha t}`; `A_t` at infinity.
    Sigma2Alpha(Alpha),
    /// `[[e^t, 0], [u, e^s]]`, params `(t, s, u)`.
    TriFull,
    /// `[[1, 0], [t, 1]]`.
    TriUnipotent,
    /// `e^t [[1, 0], [t, 1]]`.
    TriOne,
    /// `e^t I`.
    TriScalar,
    /// `diag(e^{gamma t}, e^{(gamma+1) t})`.
    TriDiag(Scalar),
    /// `diag(e^t, e^s)`.
    K0,
    /// `[[e^t, 0], [s, e^t]]`.
    KInf,
    /// `[[e^{gamma t}, 0], [s, e^{(gamma+1) t}]]`.
    L(Scalar),
    Trivial,
}

impl FamilyKind {
    pub fn n_params(&self) -> usize {
        use FamilyKind::*;
        match self {
            Trivial => 0,
            Sigma1Alpha(_) | Sigma2Alpha(_) | TriUnipotent | TriOne | TriScalar | TriDiag(_) => 1,
            Sigma1Full | Sigma2Full | K0 | KInf | L(_) => 2,
            TriFull => 3,
        }
    }

    /// Name used in group-spec files.
    pub fn name(&self) -> &'static str {
        use FamilyKind::*;
        match self {
            Sigma1Full => "Hfull_sigma1",
            Sigma1Alpha(_) => "Halpha_sigma1",
            Sigma2Full => "Hfull_sigma2",
            Sigma2Alpha(_) => "Halpha_sigma2",
            TriFull => "T0",
            TriUnipotent => "H0_sigma3",
            TriOne => "H1_sigma3",
            TriScalar => "Hinf_sigma3",
            TriDiag(_) => "Hgamma0_sigma3",
            K0 => "K0_sigma3",
            KInf => "Kinf_sigma3",
            L(_) => "L_sigma3",
            Trivial => "trivial",
        }
    }

    fn base(&self, p: &[Scalar]) -> Mat2 {
        use FamilyKind::*;
        let z = Scalar::zero;
        match self {
            Sigma1Full => rot(&p[0]).scale(&p[1].exp()),
            Sigma1Alpha(Alpha::Finite(a)) => rot(&(a * &p[0])).scale(&p[0].exp()),
            Sigma1Alpha(Alpha::Infinity) => rot(&p[0]),
            Sigma2Full => boost(&p[0]).scale(&p[1].exp()),
            Sigma2Alpha(Alpha::Finite(a)) => boost(&(a * &p[0])).scale(&p[0].exp()),
            Sigma2Alpha(Alpha::Infinity) => boost(&p[0]),
            TriFull => Mat2::new(p[0].exp(), z(), p[2].clone(), p[1].exp()),
            TriUnipotent => Mat2::new(Scalar::one(), z(), p[0].clone(), Scalar::one()),
            TriOne => {
                let e = p[0].exp();
                Mat2::new(e.clone(), z(), &e * &p[0], e)
            }
            TriScalar => Mat2::scalar(p[0].exp()),
            TriDiag(g) => Mat2::diag((g * &p[0]).exp(), (&(g + &Scalar::one()) * &p[0]).exp()),
            K0 => Mat2::diag(p[0].exp(), p[1].exp()),
            KInf => {
                let e = p[0].exp();
                Mat2::new(e.clone(), z(), p[1].clone(), e)
            }
            L(g) => Mat2::new(
                (g * &p[0]).exp(),
                z(),
                p[1].clone(),
                (&(g + &Scalar::one()) * &p[0]).exp(),
            ),
            Trivial => Mat2::identity(),
        }
    }

    fn base_generators(&self) -> Vec<Mat2> {
        use FamilyKind::*;
        let id = Mat2::identity;
        let s4 = sigma4().to_mat2();
        let diag_gen = |g: &Scalar| &Mat2::scalar(g.clone()) + &s4;
        match self {
            Sigma1Full => vec![j2(), id()],
            Sigma1Alpha(Alpha::Finite(a)) => vec![&id() + &j2().scale(a)],
            Sigma1Alpha(Alpha::Infinity) => vec![j2()],
            Sigma2Full => vec![sigma5().to_mat2(), id()],
            Sigma2Alpha(Alpha::Finite(a)) => vec![&id() + &sigma5().to_mat2().scale(a)],
            Sigma2Alpha(Alpha::Infinity) => vec![sigma5().to_mat2()],
            TriFull => vec![id(), s4, b_mat()],
            TriUnipotent => vec![b_mat()],
            TriOne => vec![&id() + &b_mat()],
            TriScalar => vec![id()],
            TriDiag(g) => vec![diag_gen(g)],
            K0 => vec![id(), s4],
            KInf => vec![id(), b_mat()],
            L(g) => vec![b_mat(), diag_gen(g)],
            Trivial => vec![],
        }
    }

    /// Parameters of `h` assuming `h` lies in the base family; the caller
    /// re-evaluates to confirm.
    fn invert(&self, h: &Mat2) -> Option<Vec<Scalar>> {
        use FamilyKind::*;
        let m = &h.0;
        let ln = |x: &Scalar| (x.signum() > 0).then(|| x.ln());
        let half = Scalar::ratio(1, 2);
        let log_det_half = || ln(&h.det()).map(|l| &l * &half);
        Some(match self {
            Sigma1Full | Sigma2Full => {
                let s = log_det_half()?;
                let r = h.scale(&s.exp().recip());
                let t = if matches!(self, Sigma1Full) {
                    atan2(&r.0[0][1], &r.0[0][0])
                } else {
                    atanh(&r.0[0][1], &r.0[0][0])?
                };
                vec![t, s]
            }
            Sigma1Alpha(Alpha::Finite(_)) | Sigma2Alpha(Alpha::Finite(_)) => vec![log_det_half()?],
            Sigma1Alpha(Alpha::Infinity) => vec![atan2(&m[0][1], &m[0][0])],
            Sigma2Alpha(Alpha::Infinity) => vec![atanh(&m[0][1], &m[0][0])?],
            TriFull => vec![ln(&m[0][0])?, ln(&m[1][1])?, m[1][0].clone()],
            TriUnipotent => vec![m[1][0].clone()],
            TriOne | TriScalar => vec![ln(&m[0][0])?],
            TriDiag(_) => vec![ln(&(&m[1][1] / &m[0][0]))?],
            K0 => vec![ln(&m[0][0])?, ln(&m[1][1])?],
            KInf => vec![ln(&m[0][0])?, m[1][0].clone()],
            L(_) => vec![ln(&(&m[1][1] / &m[0][0]))?, m[1][0].clone()],
            Trivial => vec![],
        })
    }

    /// `(x, y)` with `base(p) = diag(e^x, e^y)`, for diagonal kinds.
    fn diag_exponents(&self, p: &[Scalar]) -> Option<(Scalar, Scalar)> {
        use FamilyKind::*;
        match self {
            TriScalar => Some((p[0].clone(), p[0].clone())),
            TriDiag(g) => Some((g * &p[0], &(g + &Scalar::one()) * &p[0])),
            K0 => Some((p[0].clone(), p[1].clone())),
            _ => None,
        }
    }

    /// One-parameter subgroups (and `K0`): `base(p) base(q) = base(p + q)`.
    fn is_additive(&self) -> bool {
        use FamilyKind::*;
        matches!(
            self,
            Sigma1Alpha(_) | Sigma2Alpha(_) | TriUnipotent | TriOne | TriScalar | TriDiag(_) | K0 | Trivial
        )
    }

    /// Whether the base family is closed under transposition, and what it
    /// becomes.
    fn transposed_kind(&self) -> Option<FamilyKind> {
        use FamilyKind::*;
        match self {
            Sigma1Alpha(a) => Some(Sigma1Alpha(a.neg())),
            Sigma1Full | Sigma2Full | Sigma2Alpha(_) | TriScalar | TriDiag(_) | K0 | Trivial => {
                Some(self.clone())
            }
            _ => None,
        }
    }
}

fn atan2(y: &Scalar, x: &Scalar) -> Scalar {
    if y.is_exact() && y.is_zero() && x.signum() > 0 {
        Scalar::zero()
    } else {
        Scalar::float(y.to_f64().atan2(x.to_f64()))
    }
}

fn atanh(y: &Scalar, x: &Scalar) -> Option<Scalar> {
    if x.signum() <= 0 {
        return None;
    }
    if y.is_exact() && y.is_zero() {
        return Some(Scalar::zero());
    }
    let r = y.to_f64() / x.to_f64();
    (r.abs() < 1.0).then(|| Scalar::float(r.atanh()))
}

/// `c * (t?)base(params) * c^-1`.
#[derive(Clone, Debug, PartialEq)]
pub struct HFamily {
    pub kind: FamilyKind,
    pub transposed: bool,
    pub conjugator: Option<Mat2>,
}

impl HFamily {
    pub fn new(kind: FamilyKind) -> Self {
        HFamily { kind, transposed: false, conjugator: None }
    }

    pub fn n_params(&self) -> usize {
        self.kind.n_params()
    }

    pub fn dim(&self) -> usize {
        self.n_params()
    }

    pub fn element(&self, params: &[Scalar]) -> Mat2 {
        assert_eq!(params.len(), self.n_params(), "wrong number of parameters");
        let mut x = self.kind.base(params);
        if self.transposed {
            x = x.transpose();
        }
        match &self.conjugator {
            Some(c) => c.conj(&x).expect("conjugator is invertible"),
            None => x,
        }
    }

    /// Exact Lie algebra basis.
    pub fn generators(&self) -> Vec<Mat2> {
        self.kind
            .base_generators()
            .into_iter()
            .map(|x| if self.transposed { x.transpose() } else { x })
            .map(|x| match &self.conjugator {
                Some(c) => c.conj(&x).expect("conjugator is invertible"),
                None => x,
            })
            .collect()
    }

    /// `t H` (as a set), normalized back to an untransposed kind when the
    /// base family is transpose-closed.
    pub fn transpose(&self) -> HFamily {
        let conjugator = self
            .conjugator
            .as_ref()
            .map(|c| c.sharp().expect("conjugator is invertible"));
        match (self.transposed, self.kind.transposed_kind()) {
            (false, Some(k)) => HFamily { kind: k, transposed: false, conjugator },
            (true, _) => HFamily { kind: self.kind.clone(), transposed: false, conjugator },
            (false, None) => HFamily { kind: self.kind.clone(), transposed: true, conjugator },
        }
    }

    /// `g H g^-1`.
    pub fn conjugate(&self, g: &Mat2) -> Result<HFamily> {
        g.invert()?;
        let c = match &self.conjugator {
            Some(c) => g * c,
            None => g.clone(),
        };
        Ok(HFamily {
            kind: self.kind.clone(),
            transposed: self.transposed,
            conjugator: if c == Mat2::identity() { None } else { Some(c) },
        })
    }

    /// Parameters of `h(p) h(q)` when the family is additive in its parameters.
    pub fn compose_params(&self, p: &[Scalar], q: &[Scalar]) -> Option<Vec<Scalar>> {
        self.kind
            .is_additive()
            .then(|| p.iter().zip(q).map(|(a, b)| a + b).collect())
    }

    /// `(x, y)` with `h(p) = diag(e^x, e^y)`, when the family is diagonal.
    pub fn log_diag(&self, p: &[Scalar]) -> Option<(Scalar, Scalar)> {
        if self.conjugator.is_some() {
            return None;
        }
        self.kind.diag_exponents(p)
    }

    /// `h(p)^dagger[s]`. On diagonal families the exponents are combined
    /// before exponentiating, so cancelling weights stay exact.
    pub fn dagger_at(&self, p: &[Scalar], s: &SymMat2) -> SymMat2 {
        match self.log_diag(p) {
            Some((x, y)) => {
                let e = |z: Scalar| (-z).exp();
                SymMat2::new(
                    &s.c * &e(&x + &x),
                    &s.b * &e(&x + &y),
                    &s.a * &e(&y + &y),
                )
            }
            None => dagger(&self.element(p), s).expect("family elements are invertible"),
        }
    }

    /// Parameters of `h` in this family, if `h` is a member within `tol`
    /// (relative residual `||h - h(p)|| / max(1, ||h||)`).
    pub fn locate(&self, h: &Mat2, tol: f64) -> Option<Vec<Scalar>> {
        let mut x = match &self.conjugator {
            Some(c) => c.invert().ok()?.conj(h).ok()?,
            None => h.clone(),
        };
        if self.transposed {
            x = x.transpose();
        }
        let p = self.kind.invert(&x)?;
        (residual(&self.element(&p), h) <= tol).then_some(p)
    }

    pub fn contains(&self, h: &Mat2, tol: f64) -> bool {
        self.locate(h, tol).is_some()
    }

    /// Parameter tuples on the sampling grid.
    pub fn sample_params(&self, grid: &[Scalar]) -> Vec<Vec<Scalar>> {
        let n = grid.len();
        match self.n_params() {
            0 => vec![vec![]],
            1 => grid.iter().map(|t| vec![t.clone()]).collect(),
            2 => (0..n * n)
                .map(|i| vec![grid[i % n].clone(), grid[i / n].clone()])
                .collect(),
            _ => (0..n * n)
                .map(|i| {
                    vec![grid[i % n].clone(), grid[i / n].clone(), grid[(i + i / n) % n].clone()]
                })
                .collect(),
        }
    }

    pub fn samples(&self, grid: &[Scalar]) -> Vec<(Vec<Scalar>, Mat2)> {
        self.sample_params(grid)
            .into_iter()
            .map(|p| {
                let h = self.element(&p);
                (p, h)
            })
            .collect()
    }
}

pub fn residual(got: &Mat2, reference: &Mat2) -> f64 {
    let diff = got
        .0
        .iter()
        .flatten()
        .zip(reference.0.iter().flatten())
        .map(|(a, b)| match (a, b) {
            (Scalar::Exact(x), Scalar::Exact(y)) if x == y => 0.0,
            _ => (a.to_f64() - b.to_f64()).abs(),
        })
        .fold(0.0, f64::max);
    diff / reference.norm_inf().max(1.0)
}

/// The default sampling grid `{-2, -1, -1/2, 0, 1/2, 1, 2}`; other sizes use
/// evenly spaced rationals on `[-2, 2]`.
pub fn param_grid(n: usize) -> Vec<Scalar> {
    if n == 7 {
        return [(-2, 1), (-1, 1), (-1, 2), (0, 1), (1, 2), (1, 1), (2, 1)]
            .iter()
            .map(|&(p, q)| Scalar::ratio(p, q))
            .collect();
    }
    if n == 1 {
        return vec![Scalar::zero()];
    }
    let d = (n - 1) as i64;
    (0..=d).map(|k| Scalar::ratio(-2 * d + 4 * k, d)).collect()
}

impl fmt::Display for HFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use FamilyKind::*;
        let base = match &self.kind {
            Sigma1Full => "H0(sigma1)".to_string(),
            Sigma1Alpha(Alpha::Infinity) => "Hinf(sigma1)".to_string(),
            Sigma1Alpha(a) => format!("H_{a}(sigma1)"),
            Sigma2Full => "H0(sigma2)".to_string(),
            Sigma2Alpha(Alpha::Infinity) => "Hinf(sigma2)".to_string(),
            Sigma2Alpha(a) => format!("H_{a}(sigma2)"),
            TriFull => "T0".to_string(),
            TriUnipotent => "H0(sigma3)".to_string(),
            TriOne => "H1(sigma3)".to_string(),
            TriScalar => "Hinf(sigma3)".to_string(),
            TriDiag(g) => format!("H_{{{g},0}}(sigma3)"),
            K0 => "K0(sigma3)".to_string(),
            KInf => "Kinf(sigma3)".to_string(),
            L(g) => format!("L_{g}(sigma3)"),
            Trivial => "{I}".to_string(),
        };
        let base = if self.transposed { format!("t{base}") } else { base };
        match &self.conjugator {
            Some(c) => write!(f, "{c}.{base}.{c}^-1"),
            None => write!(f, "{base}"),
        }
    }
}
