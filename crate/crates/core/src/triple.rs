//! The (Sigma, H, tau) description of subgroups of Q: a symmetric span, a
//! homogeneous family and a cocycle tau with G = {g(sigma + tau(h), h)}.

use std::fmt;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::family::HFamily;
use crate::linalg::{negligible, SymSpan};
use crate::matrix::{dagger, Mat2, Mat4, SymMat2};
use crate::parabolic::{q_member, QElement};
use crate::scalar::Scalar;

/// Closed-form homomorphic cocycles (tau(hh') = tau(h) + h^dagger[tau(h')]).
#[derive(Clone, Debug, PartialEq)]
pub enum ClosedTau {
    /// `h -> -log(h_11) sigma_5` on diagonal `h`: strictly homomorphic but
    /// not a coboundary.
    OffDiagonalLog,
}

impl ClosedTau {
    fn eval(&self, h: &Mat2) -> Option<SymMat2> {
        match self {
            ClosedTau::OffDiagonalLog => {
                let h11 = h.get(0, 0);
                (h11.signum() > 0).then(|| {
                    let l = -h11.ln();
                    SymMat2::new(Scalar::zero(), l, Scalar::zero())
                })
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum TauMap {
    Zero,
    /// `tau(h) = tau0 - h^dagger[tau0]`.
    Coboundary(SymMat2),
    Homomorphic(ClosedTau),
    /// Table keyed by family parameters.
    Sampled(Vec<(Vec<Scalar>, SymMat2)>),
}

fn params_close(a: &[Scalar], b: &[Scalar], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.approx_eq(y, tol))
}

impl TauMap {
    /// `tau(h)`; `params` are only consulted by the sampled variant.
    pub fn eval(&self, h: &Mat2, params: &[Scalar]) -> Option<SymMat2> {
        match self {
            TauMap::Zero => Some(SymMat2::zero()),
            TauMap::Coboundary(t0) => Some(t0 - &dagger(h, t0).ok()?),
            TauMap::Homomorphic(c) => c.eval(h),
            TauMap::Sampled(table) => table
                .iter()
                .find(|(p, _)| params_close(p, params, 1e-9))
                .map(|(_, s)| s.clone()),
        }
    }

    /// `tau(h(params))` for a member of `family`, avoiding round trips
    /// through `exp`/`ln` where the family allows it.
    pub fn eval_on(&self, family: &HFamily, params: &[Scalar]) -> Option<SymMat2> {
        match self {
            TauMap::Coboundary(t0) => Some(t0 - &family.dagger_at(params, t0)),
            TauMap::Homomorphic(ClosedTau::OffDiagonalLog) => match family.log_diag(params) {
                Some((x, _)) => Some(SymMat2::new(Scalar::zero(), -x, Scalar::zero())),
                None => self.eval(&family.element(params), params),
            },
            _ => self.eval(&family.element(params), params),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, TauMap::Zero)
    }
}

impl fmt::Display for TauMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TauMap::Zero => write!(f, "0"),
            TauMap::Coboundary(t0) => write!(f, "coboundary({t0})"),
            TauMap::Homomorphic(ClosedTau::OffDiagonalLog) => write!(f, "-log(h11)*sigma5"),
            TauMap::Sampled(t) => write!(f, "sampled[{}]", t.len()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Triple {
    pub sigma: SymSpan,
    pub h: HFamily,
    pub tau: TauMap,
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.sigma, self.h, self.tau)
    }
}

/// `-(X^t s + s X)`: the derivative of `exp(tX)^dagger[s]` at `t = 0`.
pub fn lie_dagger(x: &Mat2, s: &SymMat2) -> SymMat2 {
    let m = &(&x.transpose() * &s.to_mat2()) + &(&s.to_mat2() * x);
    -&SymMat2::new(m.0[0][0].clone(), m.0[0][1].clone(), m.0[1][1].clone())
}

/// Exact infinitesimal H-invariance of Sigma.
pub fn lie_invariant(sigma: &SymSpan, gens: &[Mat2]) -> bool {
    gens.iter()
        .all(|x| sigma.basis().iter().all(|s| sigma.contains(&lie_dagger(x, s), 0.0)))
}

/// Pairs of parameter tuples used for cocycle and closure checks.
fn sample_pairs(h: &HFamily, grid: &[Scalar]) -> Vec<(Vec<Scalar>, Vec<Scalar>)> {
    let ps = h.sample_params(grid);
    let n = ps.len();
    if n <= grid.len() {
        ps.iter()
            .flat_map(|p| ps.iter().map(move |q| (p.clone(), q.clone())))
            .collect()
    } else {
        (0..n).map(|i| (ps[i].clone(), ps[(3 * i + 1) % n].clone())).collect()
    }
}

impl Triple {
    pub fn new(sigma: SymSpan, h: HFamily, tau: TauMap) -> Self {
        Triple { sigma, h, tau }
    }

    /// `tau` at the family element with parameters `params`.
    fn tau_at(&self, params: &[Scalar], h: &Mat2) -> Option<SymMat2> {
        self.tau.eval(h, params)
    }

    /// `tau(h)` for an arbitrary member `h` (located in the family first).
    fn tau_of(&self, h: &Mat2, tol: f64) -> Option<SymMat2> {
        match &self.tau {
            TauMap::Sampled(_) => {
                let p = self.h.locate(h, tol)?;
                self.tau.eval(h, &p)
            }
            t => t.eval(h, &[]),
        }
    }

    /// Lie-level check that `h^dagger[Sigma] = Sigma` for all of H.
    pub fn is_h_invariant(&self) -> bool {
        lie_invariant(&self.sigma, &self.h.generators())
    }

    /// H-invariance on the sampling grid, as the worst distance.
    pub fn sampled_invariance_defect(&self, grid: &[Scalar]) -> f64 {
        let basis = self.sigma.basis();
        self.h
            .samples(grid)
            .iter()
            .flat_map(|(_, h)| basis.iter().map(move |s| (h, s)))
            .map(|(h, s)| {
                let img = dagger(h, s).expect("family elements are invertible");
                self.sigma.distance(&img) / s.norm_inf().max(img.norm_inf()).max(1.0)
            })
            .fold(0.0, f64::max)
    }
}

/// `g(sigma + tau(h(params)), h(params))`.
pub fn build_group_element(t: &Triple, sigma: &SymMat2, params: &[Scalar]) -> Result<QElement> {
    if !t.sigma.contains(sigma, 1e-12) {
        return Err(Error::SigmaNotInSpan);
    }
    let h = t.h.element(params);
    let tau = t
        .tau_at(params, &h)
        .ok_or_else(|| Error::PreconditionViolated("tau undefined at these parameters".into()))?;
    QElement::new(sigma + &tau, h)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CocycleReport {
    pub pass: bool,
    pub pairs: usize,
    /// Largest distance of `tau(h) + h^dagger[tau(h')] - tau(hh')` from Sigma.
    pub worst_defect: f64,
    pub worst_pair: Option<(Vec<Scalar>, Vec<Scalar>)>,
}

pub fn check_cocycle(t: &Triple, grid: &[Scalar], tol: f64) -> CocycleReport {
    let mut report = CocycleReport { pass: true, pairs: 0, worst_defect: 0.0, worst_pair: None };
    for (p, q) in sample_pairs(&t.h, grid) {
        let h1 = t.h.element(&p);
        let h2 = t.h.element(&q);
        let h12 = &h1 * &h2;
        report.pairs += 1;
        let defect = (|| {
            if let Some(r) = t.h.compose_params(&p, &q) {
                let a = t.tau.eval_on(&t.h, &p)?;
                let b = t.h.dagger_at(&p, &t.tau.eval_on(&t.h, &q)?);
                let c = t.tau.eval_on(&t.h, &r)?;
                return Some(&(&a + &b) - &c);
            }
            let a = t.tau_at(&p, &h1)?;
            let b = dagger(&h1, &t.tau_at(&q, &h2)?).ok()?;
            let c = t.tau_of(&h12, tol)?;
            Some(&(&a + &b) - &c)
        })();
        let dist = match defect {
            Some(d) => t.sigma.distance(&d),
            None => f64::INFINITY,
        };
        if dist > report.worst_defect || report.worst_pair.is_none() {
            report.worst_defect = dist;
            report.worst_pair = Some((p.clone(), q.clone()));
        }
        if dist > tol {
            report.pass = false;
        }
    }
    report
}

/// `tau'(h) - tau(h) in Sigma` on the sampled elements of `h`.
pub fn tau_equivalent(
    t1: &TauMap,
    t2: &TauMap,
    sigma: &SymSpan,
    h: &HFamily,
    grid: &[Scalar],
    tol: f64,
) -> bool {
    h.samples(grid).iter().all(|(p, m)| {
        match (t1.eval(m, p), t2.eval(m, p)) {
            (Some(a), Some(b)) => sigma.distance(&(&b - &a)) <= tol,
            _ => false,
        }
    })
}

/// Solves `tau(h_i) = tau0 - h_i^dagger[tau0]` for `tau0` in the least-squares
/// sense; returns it when the residual is within `tol`.
pub fn detect_coboundary(
    tau: &TauMap,
    samples: &[(Vec<Scalar>, Mat2)],
    tol: f64,
) -> Result<Option<SymMat2>> {
    if samples.len() < 3 {
        return Err(Error::InsufficientSamples { needed: 3, got: samples.len() });
    }
    let unit = [
        SymMat2::from_ints(1, 0, 0),
        SymMat2::from_ints(0, 1, 0),
        SymMat2::from_ints(0, 0, 1),
    ];
    let mut a = DMatrix::<f64>::zeros(3 * samples.len(), 3);
    let mut rhs = DVector::<f64>::zeros(3 * samples.len());
    for (i, (p, h)) in samples.iter().enumerate() {
        let Some(target) = tau.eval(h, p) else { return Ok(None) };
        for (j, e) in unit.iter().enumerate() {
            let col = e - &dagger(h, e)?;
            for (k, x) in col.coords().iter().enumerate() {
                a[(3 * i + k, j)] = x.to_f64();
            }
        }
        for (k, x) in target.coords().iter().enumerate() {
            rhs[3 * i + k] = x.to_f64();
        }
    }
    let svd = a.clone().svd(true, true);
    let x = svd
        .solve(&rhs, 1e-12)
        .map_err(|e| Error::Inconsistent(e.to_string()))?;
    let res = (&a * &x - &rhs).amax();
    let scale = rhs.amax().max(1.0);
    if res > tol * scale {
        return Ok(None);
    }
    let clean = |v: f64| {
        let s = Scalar::float(v);
        if negligible(&s, tol) { Scalar::zero() } else { s }
    };
    Ok(Some(SymMat2::new(clean(x[0]), clean(x[1]), clean(x[2]))))
}

pub fn is_class_e(t: &Triple, grid: &[Scalar], tol: f64) -> bool {
    t.sigma.dim() >= 1
        && t.h.dim() >= 1
        && tau_equivalent(&TauMap::Zero, &t.tau, &t.sigma, &t.h, grid, tol)
}

/// `(Sigma^perp, tH, 0)`.
pub fn dual(t: &Triple) -> Result<Triple> {
    if !t.tau.is_zero() {
        return Err(Error::TauNotZero);
    }
    Ok(Triple::new(t.sigma.perp(), t.h.transpose(), TauMap::Zero))
}

#[derive(Clone, Debug, PartialEq)]
pub enum Diagnostic {
    /// The sigma-parts over `h = I` do not look like a vector space (a
    /// nonzero one appears without its negative).
    DiscreteSigma,
    TrivialSigma,
    TrivialH,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Diagnostic::DiscreteSigma => "DiscreteSigma",
            Diagnostic::TrivialSigma => "TrivialSigma",
            Diagnostic::TrivialH => "TrivialH",
        };
        f.write_str(s)
    }
}

/// What can be read off a finite sample of a subgroup of Q.
#[derive(Clone, Debug, PartialEq)]
pub struct Extracted {
    pub sigma: SymSpan,
    /// Distinct homogeneous parts, in order of first appearance.
    pub h_samples: Vec<Mat2>,
    /// One section value `tau(h)` per entry of `h_samples` (sigma-part of
    /// the first element over `h`).
    pub tau: Vec<SymMat2>,
    pub diagnostics: Vec<Diagnostic>,
}

pub fn extract_triple(elements: &[Mat4], tol: f64) -> Result<Extracted> {
    let qs = elements
        .iter()
        .map(|m| q_member(m, tol).map_err(|e| Error::NotInQ(Box::new(e))))
        .collect::<Result<Vec<_>>>()?;
    let id = Mat2::identity();
    let kernel: Vec<&SymMat2> = qs
        .iter()
        .filter(|g| g.h().approx_eq(&id, tol))
        .map(|g| g.sigma())
        .collect();
    let sigma = SymSpan::span_of(&kernel.iter().map(|s| (*s).clone()).collect::<Vec<_>>(), tol);

    let mut h_samples: Vec<Mat2> = Vec::new();
    let mut tau = Vec::new();
    for g in &qs {
        if !h_samples.iter().any(|h| h.approx_eq(g.h(), tol)) {
            h_samples.push(g.h().clone());
            tau.push(g.sigma().clone());
        }
    }

    let mut diagnostics = Vec::new();
    let discrete = kernel.iter().any(|s| {
        s.norm_inf() > tol && !kernel.iter().any(|t| t.approx_eq(&-*s, tol))
    });
    if discrete {
        diagnostics.push(Diagnostic::DiscreteSigma);
    }
    if sigma.dim() == 0 {
        diagnostics.push(Diagnostic::TrivialSigma);
    }
    if h_samples.iter().all(|h| h.approx_eq(&id, tol)) {
        diagnostics.push(Diagnostic::TrivialH);
    }
    Ok(Extracted { sigma, h_samples, tau, diagnostics })
}
