//! Row reduction over [`Scalar`] for the tiny systems that appear here
//! (at most 4 coordinates), and the canonical symmetric span type.

use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::{dagger, Mat2, SymMat2};
use crate::scalar::Scalar;

/// Exact zero test for exact scalars, `|x| <= tol` for floats.
pub fn negligible(x: &Scalar, tol: f64) -> bool {
    match x {
        Scalar::Exact(_) => x.is_zero(),
        Scalar::Float(f) => f.abs() <= tol,
    }
}

/// Reduced row echelon form; zero rows are dropped and pivots are 1.
/// Pivots are chosen by magnitude so float inputs stay well conditioned.
pub fn rref(rows: &[Vec<Scalar>], tol: f64) -> Vec<Vec<Scalar>> {
    let mut m: Vec<Vec<Scalar>> = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..ncols {
        if r == m.len() {
            break;
        }
        let pivot = (r..m.len())
            .filter(|&i| !negligible(&m[i][col], tol))
            .max_by(|&i, &j| {
                m[i][col]
                    .to_f64()
                    .abs()
                    .total_cmp(&m[j][col].to_f64().abs())
            });
        let Some(p) = pivot else { continue };
        m.swap(r, p);
        let inv = m[r][col].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        m[r][col] = Scalar::one();
        for i in 0..m.len() {
            if i == r || (m[i][col].is_exact() && m[i][col].is_zero()) {
                continue;
            }
            let f = m[i][col].clone();
            for j in 0..ncols {
                let v = &m[i][j] - &(&f * &m[r][j]);
                m[i][j] = v;
            }
            m[i][col] = Scalar::zero();
        }
        r += 1;
    }
    m.truncate(r);
    // tidy float dust left by elimination
    for row in m.iter_mut() {
        for x in row.iter_mut() {
            if !x.is_exact() && negligible(x, tol) {
                *x = Scalar::zero();
            }
        }
    }
    m
}

pub fn rank(rows: &[Vec<Scalar>], tol: f64) -> usize {
    rref(rows, tol).len()
}

fn pivot_col(row: &[Scalar]) -> usize {
    row.iter()
        .position(|x| !x.is_zero())
        .expect("rref rows are nonzero")
}

/// Coefficients of `v` on the rows of an rref basis, or `None` when `v`
/// is not in their span (residual above `tol`).
pub fn coords_in(basis: &[Vec<Scalar>], v: &[Scalar], tol: f64) -> Option<Vec<Scalar>> {
    let mut rem = v.to_vec();
    let mut coeffs = Vec::with_capacity(basis.len());
    for row in basis {
        let c = rem[pivot_col(row)].clone();
        for (x, b) in rem.iter_mut().zip(row) {
            *x = &*x - &(&c * b);
        }
        coeffs.push(c);
    }
    let scale = v.iter().map(|x| x.to_f64().abs()).fold(1.0, f64::max);
    rem.iter()
        .all(|x| negligible(x, tol * scale))
        .then_some(coeffs)
}

/// Basis of `{x : rows . x = 0}`.
pub fn nullspace(rows: &[Vec<Scalar>], ncols: usize, tol: f64) -> Vec<Vec<Scalar>> {
    let r = rref(rows, tol);
    let pivots: Vec<usize> = r.iter().map(|row| pivot_col(row)).collect();
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Scalar::zero(); ncols];
            v[free] = Scalar::one();
            for (row, &p) in r.iter().zip(&pivots) {
                v[p] = -&row[free];
            }
            v
        })
        .collect()
}

/// A subspace of Sym(2,R), stored as the rref basis over coordinates
/// `(c, b, a)` of `[[c, b], [b, a]]`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymSpan {
    rows: Vec<Vec<Scalar>>,
}

impl SymSpan {
    /// Requires a linearly independent basis.
    pub fn new(basis: &[SymMat2]) -> Result<Self> {
        let span = SymSpan::span_of(basis, 0.0);
        if span.dim() != basis.len() {
            return Err(Error::InvalidSpan("basis is linearly dependent"));
        }
        Ok(span)
    }

    /// Span of arbitrary vectors; dependent ones are absorbed.
    pub fn span_of(vectors: &[SymMat2], tol: f64) -> Self {
        let rows: Vec<Vec<Scalar>> = vectors.iter().map(|s| s.coords().to_vec()).collect();
        SymSpan { rows: rref(&rows, tol) }
    }

    pub fn zero() -> Self {
        SymSpan { rows: Vec::new() }
    }

    pub fn full() -> Self {
        SymSpan::span_of(
            &[
                SymMat2::from_ints(1, 0, 0),
                SymMat2::from_ints(0, 1, 0),
                SymMat2::from_ints(0, 0, 1),
            ],
            0.0,
        )
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> Vec<SymMat2> {
        self.rows
            .iter()
            .map(|r| SymMat2::new(r[0].clone(), r[1].clone(), r[2].clone()))
            .collect()
    }

    pub fn is_exact(&self) -> bool {
        self.rows.iter().flatten().all(Scalar::is_exact)
    }

    pub fn contains(&self, s: &SymMat2, tol: f64) -> bool {
        coords_in(&self.rows, &s.coords(), tol).is_some()
    }

    /// Coefficients of `s` on [`SymSpan::basis`].
    pub fn coords_of(&self, s: &SymMat2, tol: f64) -> Option<Vec<Scalar>> {
        coords_in(&self.rows, &s.coords(), tol)
    }

    /// Orthogonal complement for the trace pairing `cc' + 2bb' + aa'`.
    pub fn perp(&self) -> SymSpan {
        let weighted: Vec<Vec<Scalar>> = self
            .rows
            .iter()
            .map(|r| vec![r[0].clone(), &r[1] * &Scalar::int(2), r[2].clone()])
            .collect();
        let null = nullspace(&weighted, 3, 0.0);
        SymSpan { rows: rref(&null, 0.0) }
    }

    /// `h^dagger[Sigma]`.
    pub fn act(&self, h: &Mat2) -> Result<SymSpan> {
        let imgs = self
            .basis()
            .iter()
            .map(|s| dagger(h, s))
            .collect::<Result<Vec<_>>>()?;
        Ok(SymSpan::span_of(&imgs, 1e-12))
    }

    /// Size (max-abs entry) of the component of `s` orthogonal to the span
    /// for the trace pairing; exactly 0 for exact members.
    pub fn distance(&self, s: &SymMat2) -> f64 {
        if s.is_exact() && self.is_exact() && self.contains(s, 0.0) {
            return 0.0;
        }
        let perp = self.perp().basis();
        if perp.is_empty() {
            return 0.0;
        }
        let n = perp.len();
        let pair = |x: &SymMat2, y: &SymMat2| x.pairing(y).to_f64();
        let g = nalgebra::DMatrix::from_fn(n, n, |i, j| pair(&perp[i], &perp[j]));
        let r = nalgebra::DVector::from_fn(n, |i, _| pair(&perp[i], s));
        let c = g.lu().solve(&r).expect("perp basis is independent");
        let mut comp = [0.0f64; 3];
        for (k, p) in perp.iter().enumerate() {
            for (slot, x) in comp.iter_mut().zip(p.coords()) {
                *slot += c[k] * x.to_f64();
            }
        }
        comp.iter().map(|x| x.abs()).fold(0.0, f64::max)
    }

    pub fn same_span(&self, other: &SymSpan, tol: f64) -> bool {
        self.dim() == other.dim() && other.basis().iter().all(|s| self.contains(s, tol))
    }
}

impl fmt::Display for SymSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "span{{")?;
        for (i, s) in self.basis().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::{sigma1, sigma2, sigma3, sigma4, sigma5};

    fn ints(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| Scalar::int(x)).collect()
    }

    #[test]
    fn rref_exact() {
        let r = rref(&[ints(&[2, 4, 0]), ints(&[1, 2, 1]), ints(&[3, 6, 1])], 0.0);
        assert_eq!(r, vec![ints(&[1, 2, 0]), ints(&[0, 0, 1])]);
    }

    #[test]
    fn nullspace_is_orthogonal() {
        let rows = vec![ints(&[1, 2, 3]), ints(&[0, 1, 1])];
        let n = nullspace(&rows, 3, 0.0);
        assert_eq!(n.len(), 1);
        for r in &rows {
            let dot = r.iter().zip(&n[0]).fold(Scalar::zero(), |acc, (a, b)| acc + a * b);
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn perp_examples() {
        let s3 = SymSpan::new(&[sigma3()]).unwrap();
        assert!(s3.perp().same_span(&SymSpan::new(&[sigma4(), sigma5()]).unwrap(), 0.0));
        // canonical order of the rref basis: sigma_5 then sigma_4
        assert_eq!(s3.perp().basis(), vec![sigma5(), sigma4()]);
        let s1 = SymSpan::new(&[sigma1()]).unwrap();
        assert!(s1.perp().same_span(&SymSpan::new(&[sigma2(), sigma5()]).unwrap(), 0.0));
        let s2 = SymSpan::new(&[sigma2()]).unwrap();
        assert!(s2.perp().same_span(&SymSpan::new(&[sigma1(), sigma5()]).unwrap(), 0.0));
        assert_eq!(s3.perp().perp(), s3);
        assert_eq!(SymSpan::zero().perp(), SymSpan::full());
    }

    #[test]
    fn dependent_basis_rejected() {
        assert!(SymSpan::new(&[sigma3(), sigma3().scale(&Scalar::int(2))]).is_err());
        assert_eq!(SymSpan::new(&[-&sigma3()]).unwrap().basis(), vec![sigma3()]);
    }

    #[test]
    fn membership_and_coords() {
        let s = SymSpan::new(&[sigma1(), sigma5()]).unwrap();
        let v = SymMat2::from_ints(3, 2, 3);
        assert!(s.contains(&v, 0.0));
        assert!(!s.contains(&sigma3(), 0.0));
        let c = s.coords_of(&v, 0.0).unwrap();
        let back = s
            .basis()
            .iter()
            .zip(&c)
            .fold(SymMat2::zero(), |acc, (b, k)| &acc + &b.scale(k));
        assert_eq!(back, v);
    }

    #[test]
    fn distance_to_span() {
        let s = SymSpan::new(&[sigma3()]).unwrap();
        assert_eq!(s.distance(&sigma3().scale(&Scalar::int(5))), 0.0);
        let off = SymMat2::new(Scalar::float(1.0), Scalar::float(0.25), Scalar::float(-0.5));
        assert!((s.distance(&off) - 0.5).abs() < 1e-12);
        assert_eq!(SymSpan::full().distance(&off), 0.0);
    }

    #[test]
    fn float_membership_uses_tol() {
        let s = SymSpan::new(&[sigma3()]).unwrap();
        let near = SymMat2::new(Scalar::float(2.0), Scalar::float(1e-12), Scalar::zero());
        assert!(s.contains(&near, 1e-9));
        assert!(!s.contains(&near, 1e-14));
    }
}
