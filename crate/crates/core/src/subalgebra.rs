//! Lie subalgebras of the symmetrizer algebras h(sigma_1), h(sigma_2),
//! h(sigma_3) and their classification up to H(sigma_i)-conjugacy.

use std::fmt;

use crate::constants::lambda;
use crate::error::{Error, Result};
use crate::family::{Alpha, FamilyKind, HFamily};
use crate::linalg::{coords_in, negligible, rank, rref};
use crate::matrix::Mat2;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ambient {
    /// `span{J, I}`.
    Sigma1,
    /// `span{sigma_5, I}`.
    Sigma2,
    /// Lower triangular matrices, basis `{I, sigma_4, B}`.
    Sigma3,
}

impl Ambient {
    pub fn name(self) -> &'static str {
        match self {
            Ambient::Sigma1 => "sigma1",
            Ambient::Sigma2 => "sigma2",
            Ambient::Sigma3 => "sigma3",
        }
    }

    pub fn dim(self) -> usize {
        match self {
            Ambient::Sigma3 => 3,
            _ => 2,
        }
    }

    /// Coordinates in the ambient basis, or `None` if `x` is outside:
    /// `(I, J)` / `(I, sigma_5)` coefficients, or `(I, sigma_4, B)`.
    pub fn coords(self, x: &Mat2, tol: f64) -> Option<Vec<Scalar>> {
        let m = &x.0;
        let zero = |v: &Scalar| negligible(v, tol);
        match self {
            Ambient::Sigma1 => (zero(&(&m[0][0] - &m[1][1])) && zero(&(&m[0][1] + &m[1][0])))
                .then(|| vec![m[0][0].clone(), m[0][1].clone()]),
            Ambient::Sigma2 => (zero(&(&m[0][0] - &m[1][1])) && zero(&(&m[0][1] - &m[1][0])))
                .then(|| vec![m[0][0].clone(), m[0][1].clone()]),
            Ambient::Sigma3 => zero(&m[0][1])
                .then(|| vec![m[0][0].clone(), &m[1][1] - &m[0][0], m[1][0].clone()]),
        }
    }
}

impl fmt::Display for Ambient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "h({})", self.name())
    }
}

/// `[x, y] = xy - yx`.
pub fn bracket(x: &Mat2, y: &Mat2) -> Mat2 {
    &(x * y) - &(y * x)
}

fn flat(m: &Mat2) -> Vec<Scalar> {
    m.0.iter().flatten().cloned().collect()
}

/// Whether the spans of two lists of matrices coincide.
pub fn same_span(a: &[Mat2], b: &[Mat2], tol: f64) -> bool {
    let ra = rref(&a.iter().map(flat).collect::<Vec<_>>(), tol);
    let rb = rref(&b.iter().map(flat).collect::<Vec<_>>(), tol);
    ra.len() == rb.len() && b.iter().all(|x| coords_in(&ra, &flat(x), tol).is_some())
}

#[derive(Clone, Debug, PartialEq)]
pub struct LieSub {
    ambient: Ambient,
    basis: Vec<Mat2>,
}

impl LieSub {
    pub fn new(ambient: Ambient, basis: Vec<Mat2>, tol: f64) -> Result<Self> {
        if basis.iter().any(|x| ambient.coords(x, tol).is_none()) {
            return Err(Error::AmbientMismatch(ambient.name()));
        }
        let rows: Vec<Vec<Scalar>> = basis.iter().map(flat).collect();
        if basis.is_empty() || rank(&rows, tol) != basis.len() {
            return Err(Error::InvalidSpan("generators must be nonempty and independent"));
        }
        let span = rref(&rows, tol);
        for x in &basis {
            for y in &basis {
                if coords_in(&span, &flat(&bracket(x, y)), tol).is_none() {
                    return Err(Error::NotASubalgebra);
                }
            }
        }
        Ok(LieSub { ambient, basis })
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn basis(&self) -> &[Mat2] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn conjugate(&self, g: &Mat2) -> Result<Vec<Mat2>> {
        self.basis.iter().map(|x| g.conj(x)).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SubLabel {
    Full(Ambient),
    Sigma1Alpha(Alpha),
    Sigma2Alpha(Alpha),
    /// `span{B}`.
    H0,
    /// `span{I + B}`.
    H1,
    /// `span{I}`.
    HInf,
    /// `span{gamma I + sigma_4}`.
    HGamma0(Scalar),
    /// `span{I, sigma_4}`.
    K0,
    /// `span{I, B}`.
    KInf,
    /// `span{B, gamma I + sigma_4}`.
    L(Scalar),
}

impl fmt::Display for SubLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubLabel::Full(a) => write!(f, "{a}"),
            SubLabel::Sigma1Alpha(a) => write!(f, "h_{a}(sigma1)"),
            SubLabel::Sigma2Alpha(a) => write!(f, "h_{a}(sigma2)"),
            SubLabel::H0 => write!(f, "h_0(sigma3)"),
            SubLabel::H1 => write!(f, "h_1(sigma3)"),
            SubLabel::HInf => write!(f, "h_inf(sigma3)"),
            SubLabel::HGamma0(g) => write!(f, "h_{{{g},0}}(sigma3)"),
            SubLabel::K0 => write!(f, "k_0(sigma3)"),
            SubLabel::KInf => write!(f, "k_inf(sigma3)"),
            SubLabel::L(g) => write!(f, "l_{g}(sigma3)"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Classified {
    pub label: SubLabel,
    /// `l` in H(sigma_i) with `l s l^-1` equal to the canonical span.
    pub witness: Mat2,
}

/// Connected subgroup with the label's canonical Lie algebra.
pub fn exponentiate(label: &SubLabel) -> HFamily {
    HFamily::new(match label {
        SubLabel::Full(Ambient::Sigma1) => FamilyKind::Sigma1Full,
        SubLabel::Full(Ambient::Sigma2) => FamilyKind::Sigma2Full,
        SubLabel::Full(Ambient::Sigma3) => FamilyKind::TriFull,
        SubLabel::Sigma1Alpha(a) => FamilyKind::Sigma1Alpha(a.clone()),
        SubLabel::Sigma2Alpha(a) => FamilyKind::Sigma2Alpha(a.clone()),
        SubLabel::H0 => FamilyKind::TriUnipotent,
        SubLabel::H1 => FamilyKind::TriOne,
        SubLabel::HInf => FamilyKind::TriScalar,
        SubLabel::HGamma0(g) => FamilyKind::TriDiag(g.clone()),
        SubLabel::K0 => FamilyKind::K0,
        SubLabel::KInf => FamilyKind::KInf,
        SubLabel::L(g) => FamilyKind::L(g.clone()),
    })
}

/// `|alpha|` for `X = beta I + alpha Y` (`Y = J` or `sigma_5`) from the
/// conjugation invariants `tr X`, `det X`; exact when a rational square.
pub fn alpha_from_invariants(x: &Mat2, ambient: Ambient) -> Alpha {
    let tr = x.trace();
    if tr.is_zero() {
        return Alpha::Infinity;
    }
    let q = &(&tr * &tr) / &Scalar::int(4);
    let num = match ambient {
        Ambient::Sigma2 => &q - &x.det(),
        _ => &x.det() - &q,
    };
    let ratio = &num / &q;
    if negligible(&ratio, 1e-15) {
        Alpha::Finite(Scalar::zero())
    } else {
        Alpha::Finite(ratio.abs().sqrt())
    }
}

pub fn classify_subalgebra(s: &LieSub, tol: f64) -> Result<Classified> {
    let c = match s.ambient {
        Ambient::Sigma1 | Ambient::Sigma2 => classify_abelian(s, tol),
        Ambient::Sigma3 => classify_sigma3(s, tol)?,
    };
    let canon = exponentiate(&c.label).generators();
    if !same_span(&s.conjugate(&c.witness)?, &canon, tol.max(1e-12)) {
        return Err(Error::Inconsistent(format!("witness does not reach {}", c.label)));
    }
    Ok(c)
}

fn classify_abelian(s: &LieSub, tol: f64) -> Classified {
    let wrap = |a| match s.ambient {
        Ambient::Sigma1 => SubLabel::Sigma1Alpha(a),
        _ => SubLabel::Sigma2Alpha(a),
    };
    if s.dim() == 2 {
        return Classified { label: SubLabel::Full(s.ambient), witness: Mat2::identity() };
    }
    let v = s.ambient.coords(&s.basis[0], tol).expect("validated");
    let (beta, alpha) = (&v[0], &v[1]);
    if negligible(beta, tol) {
        return Classified { label: wrap(Alpha::Infinity), witness: Mat2::identity() };
    }
    let a = alpha / beta;
    let witness = if a.signum() < 0 { lambda() } else { Mat2::identity() };
    Classified { label: wrap(Alpha::Finite(a.abs())), witness }
}

fn lower_unipotent(beta: Scalar) -> Mat2 {
    Mat2::new(Scalar::one(), Scalar::zero(), beta, Scalar::one())
}

fn classify_sigma3(s: &LieSub, tol: f64) -> Result<Classified> {
    let id = Mat2::identity;
    let coords: Vec<Vec<Scalar>> = s
        .basis
        .iter()
        .map(|x| Ambient::Sigma3.coords(x, tol).expect("validated"))
        .collect();
    let done = |label, witness| Ok(Classified { label, witness });
    match s.dim() {
        1 => {
            let (g, sg4, b) = (&coords[0][0], &coords[0][1], &coords[0][2]);
            if !negligible(sg4, tol) {
                done(SubLabel::HGamma0(g / sg4), lower_unipotent(b / sg4))
            } else if !negligible(b, tol) {
                let gamma = g / b;
                if negligible(&gamma, tol) {
                    done(SubLabel::H0, id())
                } else {
                    done(SubLabel::H1, Mat2::diag(Scalar::one(), gamma))
                }
            } else {
                done(SubLabel::HInf, id())
            }
        }
        2 => {
            // reorder coordinates as (b, sigma_4, I) so the rref exposes B
            let rows: Vec<Vec<Scalar>> = coords
                .iter()
                .map(|v| vec![v[2].clone(), v[1].clone(), v[0].clone()])
                .collect();
            let r = rref(&rows, tol);
            let has = |v: [i64; 3]| {
                coords_in(&r, &v.map(Scalar::int), tol).is_some()
            };
            if has([1, 0, 0]) {
                // the other row is gamma' I + s sigma_4 after removing B
                let other = &r[1];
                if negligible(&other[1], tol) {
                    done(SubLabel::KInf, id())
                } else {
                    done(SubLabel::L(&other[2] / &other[1]), id())
                }
            } else if has([0, 0, 1]) {
                // span{I, beta B + sigma_4}: first rref row is (beta', 1, 0)
                // or (1, beta'', 0)
                let x = &r[0];
                if negligible(&x[1], tol) {
                    return Err(Error::NotASubalgebra);
                }
                done(SubLabel::K0, lower_unipotent(&x[0] / &x[1]))
            } else {
                Err(Error::NotASubalgebra)
            }
        }
        _ => done(SubLabel::Full(Ambient::Sigma3), id()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::{b_mat, ell, j2, sigma4, sigma5};

    fn sub(a: Ambient, b: Vec<Mat2>) -> LieSub {
        LieSub::new(a, b, 0.0).unwrap()
    }

    fn s4() -> Mat2 {
        sigma4().to_mat2()
    }

    fn q(p: i64, r: i64) -> Scalar {
        Scalar::ratio(p, r)
    }

    #[test]
    fn bracket_examples() {
        assert_eq!(bracket(&s4(), &b_mat()), b_mat());
        let x = Mat2::from_ints(3, -1, 4, 2);
        assert_eq!(bracket(&Mat2::identity(), &x), Mat2::zero());
        // direct commutator oracle
        let s5 = sigma5().to_mat2();
        let direct = &(&j2() * &s5) - &(&s5 * &j2());
        assert_eq!(bracket(&j2(), &s5), direct);
        assert_eq!(direct, crate::constants::sigma2().to_mat2().scale(&Scalar::int(2)));
    }

    #[test]
    fn sigma1_sign_flip() {
        let x = &Mat2::identity() - &j2().scale(&Scalar::int(3));
        let c = classify_subalgebra(&sub(Ambient::Sigma1, vec![x]), 0.0).unwrap();
        assert_eq!(c.label, SubLabel::Sigma1Alpha(Alpha::Finite(Scalar::int(3))));
        assert_eq!(c.witness, lambda());
        let inf = classify_subalgebra(&sub(Ambient::Sigma1, vec![j2()]), 0.0).unwrap();
        assert_eq!(inf.label, SubLabel::Sigma1Alpha(Alpha::Infinity));
    }

    #[test]
    fn sigma2_labels() {
        let x = &Mat2::identity().scale(&Scalar::int(2)) + &sigma5().to_mat2();
        let c = classify_subalgebra(&sub(Ambient::Sigma2, vec![x]), 0.0).unwrap();
        assert_eq!(c.label, SubLabel::Sigma2Alpha(Alpha::Finite(q(1, 2))));
        let full = sub(Ambient::Sigma2, vec![Mat2::identity(), sigma5().to_mat2()]);
        assert_eq!(classify_subalgebra(&full, 0.0).unwrap().label, SubLabel::Full(Ambient::Sigma2));
    }

    #[test]
    fn h_gamma_normalizes_to_h1() {
        let x = (&Mat2::identity() + &b_mat()).scale(&Scalar::int(5));
        let c = classify_subalgebra(&sub(Ambient::Sigma3, vec![x]), 0.0).unwrap();
        assert_eq!(c.label, SubLabel::H1);
        let y = &Mat2::identity().scale(&q(2, 3)) + &b_mat();
        let c = classify_subalgebra(&sub(Ambient::Sigma3, vec![y]), 0.0).unwrap();
        assert_eq!(c.label, SubLabel::H1);
        assert_eq!(c.witness, ell(q(2, 3), Scalar::zero(), Scalar::one()));
    }

    #[test]
    fn k0_witness_from_b_coefficient() {
        let x = &b_mat().scale(&Scalar::int(7)) + &s4();
        let c = classify_subalgebra(&sub(Ambient::Sigma3, vec![Mat2::identity(), x]), 0.0).unwrap();
        assert_eq!(c.label, SubLabel::K0);
        assert_eq!(c.witness, ell(Scalar::one(), Scalar::int(7), Scalar::one()));
    }

    #[test]
    fn l_gamma_preserved() {
        let x = &Mat2::identity().scale(&q(-1, 2)) + &s4();
        let c = classify_subalgebra(&sub(Ambient::Sigma3, vec![b_mat(), x]), 0.0).unwrap();
        assert_eq!(c.label, SubLabel::L(q(-1, 2)));
        // mixing B into the second generator changes nothing
        let y = &(&Mat2::identity().scale(&Scalar::int(3)) + &s4()) + &b_mat();
        let c = classify_subalgebra(&sub(Ambient::Sigma3, vec![y, b_mat()]), 0.0).unwrap();
        assert_eq!(c.label, SubLabel::L(Scalar::int(3)));
    }

    #[test]
    fn one_dim_sigma3_labels_distinct() {
        let id = Mat2::identity();
        let cases = [
            (b_mat(), SubLabel::H0),
            (&id + &b_mat(), SubLabel::H1),
            (id.clone(), SubLabel::HInf),
            (&s4() + &b_mat().scale(&Scalar::int(4)), SubLabel::HGamma0(Scalar::zero())),
            (&id.scale(&Scalar::int(2)) + &s4().scale(&Scalar::int(2)), SubLabel::HGamma0(Scalar::one())),
        ];
        for (x, want) in cases {
            let c = classify_subalgebra(&sub(Ambient::Sigma3, vec![x.clone()]), 0.0).unwrap();
            assert_eq!(c.label, want, "{x}");
        }
    }

    #[test]
    fn full_and_kinf() {
        let full = sub(Ambient::Sigma3, vec![Mat2::identity(), s4(), b_mat()]);
        assert_eq!(classify_subalgebra(&full, 0.0).unwrap().label, SubLabel::Full(Ambient::Sigma3));
        let kinf = sub(Ambient::Sigma3, vec![b_mat(), Mat2::identity()]);
        assert_eq!(classify_subalgebra(&kinf, 0.0).unwrap().label, SubLabel::KInf);
    }

    #[test]
    fn validation_errors() {
        assert_eq!(
            LieSub::new(Ambient::Sigma3, vec![Mat2::from_ints(0, 1, 0, 0)], 0.0),
            Err(Error::AmbientMismatch("sigma3"))
        );
        // span{sigma_4, I + B}: [sigma_4, I + B] = B escapes
        assert_eq!(
            LieSub::new(Ambient::Sigma3, vec![s4(), &Mat2::identity() + &b_mat()], 0.0),
            Err(Error::NotASubalgebra)
        );
        assert!(LieSub::new(Ambient::Sigma1, vec![j2(), j2()], 0.0).is_err());
    }

    #[test]
    fn exponentiate_examples() {
        let a = Alpha::Finite(Scalar::int(2));
        assert_eq!(
            exponentiate(&SubLabel::Sigma2Alpha(a.clone())),
            HFamily::new(FamilyKind::Sigma2Alpha(a))
        );
        assert_eq!(exponentiate(&SubLabel::H0), HFamily::new(FamilyKind::TriUnipotent));
        assert_eq!(
            exponentiate(&SubLabel::L(Scalar::zero())),
            HFamily::new(FamilyKind::L(Scalar::zero()))
        );
    }

    #[test]
    fn alpha_invariants() {
        let x = &Mat2::identity().scale(&Scalar::int(2)) + &j2().scale(&Scalar::int(-3));
        assert_eq!(alpha_from_invariants(&x, Ambient::Sigma1), Alpha::Finite(q(3, 2)));
        assert_eq!(alpha_from_invariants(&j2(), Ambient::Sigma1), Alpha::Infinity);
    }
}
