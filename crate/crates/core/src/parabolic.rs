//! The maximal parabolic subgroup Q = {g(sigma, h)} of Sp(2,R).

use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::{dagger, Mat2, Mat4, SymMat2};
use crate::scalar::Scalar;

/// `g(sigma, h) = [[h, 0], [sigma h, h^#]]`.
#[derive(Clone, Debug, PartialEq)]
pub struct QElement {
    sigma: SymMat2,
    h: Mat2,
    realization: Mat4,
}

impl QElement {
    pub fn new(sigma: SymMat2, h: Mat2) -> Result<Self> {
        let sharp = h.sharp()?;
        let lower = &sigma.to_mat2() * &h;
        let realization = Mat4::from_blocks(&h, &Mat2::zero(), &lower, &sharp);
        Ok(QElement { sigma, h, realization })
    }

    pub fn identity() -> Self {
        QElement::new(SymMat2::zero(), Mat2::identity()).expect("identity is invertible")
    }

    /// `g(sigma, I)`.
    pub fn translation(sigma: SymMat2) -> Self {
        QElement::new(sigma, Mat2::identity()).expect("identity is invertible")
    }

    /// `g(0, h)`.
    pub fn linear(h: Mat2) -> Result<Self> {
        QElement::new(SymMat2::zero(), h)
    }

    pub fn sigma(&self) -> &SymMat2 {
        &self.sigma
    }

    pub fn h(&self) -> &Mat2 {
        &self.h
    }

    pub fn realization(&self) -> &Mat4 {
        &self.realization
    }

    pub fn is_exact(&self) -> bool {
        self.sigma.is_exact() && self.h.is_exact()
    }

    pub fn approx_eq(&self, other: &QElement, tol: f64) -> bool {
        self.sigma.approx_eq(&other.sigma, tol) && self.h.approx_eq(&other.h, tol)
    }
}

impl fmt::Display for QElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g(sigma={}, h={})", self.sigma, self.h)
    }
}

/// `g(s1, h1) g(s2, h2) = g(s1 + h1^dagger[s2], h1 h2)`.
pub fn q_compose(g1: &QElement, g2: &QElement) -> QElement {
    let sigma = &g1.sigma + &dagger(&g1.h, &g2.sigma).expect("h1 is invertible");
    QElement::new(sigma, &g1.h * &g2.h).expect("product of invertibles")
}

/// `g(sigma, h)^-1 = g(-h^t sigma h, h^-1)`.
pub fn q_invert(g: &QElement) -> QElement {
    let h = &g.h;
    let m = &(&h.transpose() * &g.sigma.to_mat2()) * h;
    let sigma = SymMat2::new(m.0[0][0].clone(), m.0[0][1].clone(), m.0[1][1].clone());
    QElement::new(-&sigma, h.invert().expect("h is invertible")).expect("inverse is invertible")
}

/// `a b a^-1`.
pub fn q_conj(a: &QElement, b: &QElement) -> QElement {
    q_compose(&q_compose(a, b), &q_invert(a))
}

/// Recovers `(sigma, h)` from a 4x4 matrix in Q.
pub fn q_member(m: &Mat4, tol: f64) -> Result<QElement> {
    let h = m.block(0, 0);
    if !m.block(0, 1).approx_eq(&Mat2::zero(), tol) {
        return Err(Error::NotBlockTriangular);
    }
    let hinv = h.invert().map_err(|_| Error::NotBlockTriangular)?;
    if !m.is_symplectic(tol) {
        return Err(Error::NotSymplectic);
    }
    let sigma = (&m.block(1, 0) * &hinv)
        .to_sym(tol)
        .ok_or(Error::NotSymmetric)?;
    QElement::new(sigma, h)
}

#[derive(Clone, Debug, PartialEq)]
pub enum LanglandsFactor {
    /// `g(0, m)` with `|det m| = 1`.
    M(Mat2),
    /// `g(0, lambda I)` with `lambda > 0`.
    A(Scalar),
    /// `g(sigma, I)`.
    N(SymMat2),
}

impl LanglandsFactor {
    pub fn to_q(&self) -> QElement {
        match self {
            LanglandsFactor::M(m) => QElement::linear(m.clone()).expect("|det| = 1"),
            LanglandsFactor::A(l) => {
                QElement::linear(Mat2::scalar(l.clone())).expect("lambda > 0")
            }
            LanglandsFactor::N(s) => QElement::translation(s.clone()),
        }
    }
}

/// `g = n m a`, with `lambda = |det h|^(1/2)` (exact when a rational square).
pub fn langlands_split(g: &QElement) -> (LanglandsFactor, LanglandsFactor, LanglandsFactor) {
    let lambda = g.h.det().abs().sqrt();
    let m = g.h.scale(&lambda.recip());
    (
        LanglandsFactor::M(m),
        LanglandsFactor::A(lambda),
        LanglandsFactor::N(g.sigma.clone()),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::{rot, sigma3, sigma5};

    fn d(a: i64, b: i64) -> Mat2 {
        Mat2::diag(Scalar::int(a), Scalar::int(b))
    }

    #[test]
    fn compose_examples() {
        let g = q_compose(&QElement::translation(sigma3()), &QElement::linear(d(2, 1)).unwrap());
        assert_eq!(g, QElement::new(sigma3(), d(2, 1)).unwrap());

        let h = QElement::linear(d(2, 1)).unwrap();
        let c = q_conj(&h, &QElement::translation(sigma5()));
        let half = SymMat2::new(Scalar::zero(), Scalar::ratio(1, 2), Scalar::zero());
        assert_eq!(c, QElement::translation(half));
        // 4x4 product oracle
        let direct = &(h.realization() * QElement::translation(sigma5()).realization())
            * q_invert(&h).realization();
        assert_eq!(&direct, c.realization());
    }

    #[test]
    fn conjugating_by_translation_gives_coboundary_shift() {
        let tau0 = SymMat2::from_ints(1, 2, -1);
        let g = QElement::new(sigma5(), Mat2::from_ints(1, 0, 3, 2)).unwrap();
        let c = q_conj(&QElement::translation(tau0.clone()), &g);
        let expect = &(&sigma5() + &tau0) - &dagger(g.h(), &tau0).unwrap();
        assert_eq!(c, QElement::new(expect, g.h().clone()).unwrap());
    }

    #[test]
    fn invert_examples() {
        assert_eq!(q_invert(&QElement::identity()), QElement::identity());
        assert_eq!(
            q_invert(&QElement::translation(sigma3())),
            QElement::translation(-&sigma3())
        );
        let g = QElement::new(sigma5(), d(2, 1)).unwrap();
        let inv = q_invert(&g);
        assert_eq!(
            inv,
            QElement::new(
                SymMat2::from_ints(0, -2, 0),
                Mat2::diag(Scalar::ratio(1, 2), Scalar::one())
            )
            .unwrap()
        );
        assert_eq!(q_compose(&g, &inv), QElement::identity());
    }

    #[test]
    fn realization_is_symplectic_and_factors() {
        let g = QElement::new(SymMat2::from_ints(3, -1, 2), Mat2::from_ints(1, 2, 3, 5)).unwrap();
        assert!(g.realization().is_symplectic(0.0));
        assert_eq!(g.realization().block(0, 1), Mat2::zero());
        let f = q_compose(
            &QElement::translation(g.sigma().clone()),
            &QElement::linear(g.h().clone()).unwrap(),
        );
        assert_eq!(f, g);
    }

    #[test]
    fn member_examples() {
        assert_eq!(q_member(&Mat4::identity(), 0.0).unwrap(), QElement::identity());

        let (t, s) = (1.0f64, 2.0f64);
        let (e, ei) = (t.exp(), (-t).exp());
        let f = Scalar::float;
        let m = Mat4([
            [f(e), f(0.0), f(0.0), f(0.0)],
            [f(0.0), f(ei), f(0.0), f(0.0)],
            [f(s * e), f(-t * ei), f(ei), f(0.0)],
            [f(-t * e), f(0.0), f(0.0), f(e)],
        ]);
        let g = q_member(&m, 1e-9).unwrap();
        assert!(g.sigma().approx_eq(&SymMat2::from_ints(2, -1, 0), 1e-9));
        assert!(g.h().approx_eq(&Mat2::diag(f(e), f(ei)), 1e-12));

        let minus_j = Mat4::from_ints([[0, 0, -1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, 1, 0, 0]]);
        assert_eq!(q_member(&minus_j, 0.0), Err(Error::NotBlockTriangular));

        let bad = Mat4::from_ints([[1, 0, 0, 0], [1, 1, 0, 0], [1, 1, 1, -1], [2, 0, 0, 1]]);
        assert_eq!(q_member(&bad, 0.0), Err(Error::NotSymplectic));
    }

    #[test]
    fn langlands_examples() {
        let (m, a, n) = langlands_split(&QElement::linear(d(4, 1)).unwrap());
        assert_eq!(a, LanglandsFactor::A(Scalar::int(2)));
        assert_eq!(m, LanglandsFactor::M(Mat2::diag(Scalar::int(2), Scalar::ratio(1, 2))));
        assert_eq!(n, LanglandsFactor::N(SymMat2::zero()));

        let (m, a, n) = langlands_split(&QElement::translation(sigma5()));
        assert_eq!(m, LanglandsFactor::M(Mat2::identity()));
        assert_eq!(a, LanglandsFactor::A(Scalar::one()));
        assert_eq!(n, LanglandsFactor::N(sigma5()));

        let theta = Scalar::float(std::f64::consts::FRAC_PI_3);
        let (m, a, _) = langlands_split(&QElement::linear(rot(&theta)).unwrap());
        assert!(matches!(a, LanglandsFactor::A(l) if l.approx_eq(&Scalar::one(), 1e-12)));
        assert!(matches!(m, LanglandsFactor::M(r) if r.approx_eq(&rot(&theta), 1e-12)));
    }

    #[test]
    fn langlands_recomposes() {
        let g = QElement::new(SymMat2::from_ints(1, 1, 0), Mat2::from_ints(2, 0, 1, -3)).unwrap();
        let (m, a, n) = langlands_split(&g);
        let r = q_compose(&q_compose(&n.to_q(), &m.to_q()), &a.to_q());
        assert!(r.approx_eq(&g, 1e-12));
    }
}
