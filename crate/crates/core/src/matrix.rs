//! Fixed-size 2x2 and 4x4 matrices over [`Scalar`], plus the symmetric 2x2
//! type used for the vector component of Q.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Default tolerance for comparisons involving floats.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct Mat2(pub [[Scalar; 2]; 2]);

impl Mat2 {
    pub fn new(a11: Scalar, a12: Scalar, a21: Scalar, a22: Scalar) -> Self {
        Mat2([[a11, a12], [a21, a22]])
    }

    pub fn from_ints(a11: i64, a12: i64, a21: i64, a22: i64) -> Self {
        Mat2::new(a11.into(), a12.into(), a21.into(), a22.into())
    }

    pub fn identity() -> Self {
        Mat2::from_ints(1, 0, 0, 1)
    }

    pub fn zero() -> Self {
        Mat2::from_ints(0, 0, 0, 0)
    }

    pub fn diag(d1: Scalar, d2: Scalar) -> Self {
        Mat2::new(d1, Scalar::zero(), Scalar::zero(), d2)
    }

    pub fn scalar(s: Scalar) -> Self {
        Mat2::diag(s.clone(), s)
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.0[i][j]
    }

    pub fn is_exact(&self) -> bool {
        self.0.iter().flatten().all(Scalar::is_exact)
    }

    pub fn transpose(&self) -> Self {
        let m = &self.0;
        Mat2::new(m[0][0].clone(), m[1][0].clone(), m[0][1].clone(), m[1][1].clone())
    }

    pub fn det(&self) -> Scalar {
        let m = &self.0;
        &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0]
    }

    pub fn trace(&self) -> Scalar {
        &self.0[0][0] + &self.0[1][1]
    }

    pub fn invert(&self) -> Result<Self> {
        let det = self.det();
        if det.is_zero() {
            return Err(Error::SingularMatrix);
        }
        let m = &self.0;
        let inv = det.recip();
        Ok(Mat2::new(
            &m[1][1] * &inv,
            -(&m[0][1] * &inv),
            -(&m[1][0] * &inv),
            &m[0][0] * &inv,
        ))
    }

    /// `h^# = (h^t)^-1`.
    pub fn sharp(&self) -> Result<Self> {
        Ok(self.invert()?.transpose())
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        Mat2(self.0.clone().map(|row| row.map(|x| &x * s)))
    }

    /// Inner conjugation `self * x * self^-1`.
    pub fn conj(&self, x: &Mat2) -> Result<Mat2> {
        Ok(&(self * x) * &self.invert()?)
    }

    pub fn is_lower_triangular(&self) -> bool {
        self.0[0][1].is_zero()
    }

    pub fn norm_inf(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|x| x.to_f64().abs())
            .fold(0.0, f64::max)
    }

    /// Exact equality when `tol == 0` and both sides are exact, otherwise
    /// `||self - other||_inf <= tol`.
    pub fn approx_eq(&self, other: &Mat2, tol: f64) -> bool {
        self.0
            .iter()
            .flatten()
            .zip(other.0.iter().flatten())
            .all(|(a, b)| a.approx_eq(b, tol))
    }

    pub fn to_f64(&self) -> [[f64; 2]; 2] {
        self.0.clone().map(|r| r.map(|x| x.to_f64()))
    }

    /// Symmetric part read off the entries; `None` when the off-diagonal
    /// entries differ.
    pub fn to_sym(&self, tol: f64) -> Option<SymMat2> {
        let m = &self.0;
        if !m[0][1].approx_eq(&m[1][0], tol) {
            return None;
        }
        Some(SymMat2::new(m[0][0].clone(), m[0][1].clone(), m[1][1].clone()))
    }
}

impl<'a> Mul<&'a Mat2> for &'a Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: &'a Mat2) -> Mat2 {
        let a = &self.0;
        let b = &rhs.0;
        let e = |i: usize, j: usize| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j];
        Mat2::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }
}

impl<'a> Add<&'a Mat2> for &'a Mat2 {
    type Output = Mat2;
    fn add(self, rhs: &'a Mat2) -> Mat2 {
        let a = &self.0;
        let b = &rhs.0;
        Mat2::new(
            &a[0][0] + &b[0][0],
            &a[0][1] + &b[0][1],
            &a[1][0] + &b[1][0],
            &a[1][1] + &b[1][1],
        )
    }
}

impl<'a> Sub<&'a Mat2> for &'a Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: &'a Mat2) -> Mat2 {
        self + &(-rhs)
    }
}

impl Neg for &Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        self.scale(&Scalar::int(-1))
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.0;
        write!(f, "[[{},{}],[{},{}]]", m[0][0], m[0][1], m[1][0], m[1][1])
    }
}

/// Symmetric 2x2 matrix `[[c, b], [b, a]]`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMat2 {
    pub c: Scalar,
    pub b: Scalar,
    pub a: Scalar,
}

impl SymMat2 {
    pub fn new(c: Scalar, b: Scalar, a: Scalar) -> Self {
        SymMat2 { c, b, a }
    }

    pub fn from_ints(c: i64, b: i64, a: i64) -> Self {
        SymMat2::new(c.into(), b.into(), a.into())
    }

    pub fn zero() -> Self {
        SymMat2::from_ints(0, 0, 0)
    }

    pub fn coords(&self) -> [Scalar; 3] {
        [self.c.clone(), self.b.clone(), self.a.clone()]
    }

    pub fn from_coords(v: &[Scalar; 3]) -> Self {
        SymMat2::new(v[0].clone(), v[1].clone(), v[2].clone())
    }

    pub fn to_mat2(&self) -> Mat2 {
        Mat2::new(self.c.clone(), self.b.clone(), self.b.clone(), self.a.clone())
    }

    pub fn is_exact(&self) -> bool {
        self.c.is_exact() && self.b.is_exact() && self.a.is_exact()
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_zero() && self.b.is_zero() && self.a.is_zero()
    }

    pub fn det(&self) -> Scalar {
        &self.c * &self.a - &self.b * &self.b
    }

    pub fn trace(&self) -> Scalar {
        &self.c + &self.a
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        SymMat2::new(&self.c * s, &self.b * s, &self.a * s)
    }

    /// Trace pairing `<s, t> = tr(s t)`.
    pub fn pairing(&self, other: &SymMat2) -> Scalar {
        &self.c * &other.c + Scalar::int(2) * (&self.b * &other.b) + &self.a * &other.a
    }

    pub fn norm_inf(&self) -> f64 {
        self.coords()
            .iter()
            .map(|x| x.to_f64().abs())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &SymMat2, tol: f64) -> bool {
        self.c.approx_eq(&other.c, tol)
            && self.b.approx_eq(&other.b, tol)
            && self.a.approx_eq(&other.a, tol)
    }
}

impl<'a> Add<&'a SymMat2> for &'a SymMat2 {
    type Output = SymMat2;
    fn add(self, rhs: &'a SymMat2) -> SymMat2 {
        SymMat2::new(&self.c + &rhs.c, &self.b + &rhs.b, &self.a + &rhs.a)
    }
}

impl<'a> Sub<&'a SymMat2> for &'a SymMat2 {
    type Output = SymMat2;
    fn sub(self, rhs: &'a SymMat2) -> SymMat2 {
        SymMat2::new(&self.c - &rhs.c, &self.b - &rhs.b, &self.a - &rhs.a)
    }
}

impl Neg for &SymMat2 {
    type Output = SymMat2;
    fn neg(self) -> SymMat2 {
        self.scale(&Scalar::int(-1))
    }
}

impl fmt::Display for SymMat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_mat2().fmt(f)
    }
}

/// The action `h^dagger[sigma] = (h^t)^-1 sigma h^-1`.
pub fn dagger(h: &Mat2, sigma: &SymMat2) -> Result<SymMat2> {
    let inv = h.invert()?;
    let m = &(&inv.transpose() * &sigma.to_mat2()) * &inv;
    // symmetric by construction; keep the upper triangle
    Ok(SymMat2::new(m.0[0][0].clone(), m.0[0][1].clone(), m.0[1][1].clone()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Mat4(pub [[Scalar; 4]; 4]);

impl Mat4 {
    pub fn zero() -> Self {
        Mat4(std::array::from_fn(|_| std::array::from_fn(|_| Scalar::zero())))
    }

    pub fn identity() -> Self {
        let mut m = Mat4::zero();
        for i in 0..4 {
            m.0[i][i] = Scalar::one();
        }
        m
    }

    pub fn from_ints(rows: [[i64; 4]; 4]) -> Self {
        Mat4(rows.map(|r| r.map(Scalar::int)))
    }

    /// `[[a, b], [c, d]]` in 2x2 blocks.
    pub fn from_blocks(a: &Mat2, b: &Mat2, c: &Mat2, d: &Mat2) -> Self {
        let mut m = Mat4::zero();
        for i in 0..2 {
            for j in 0..2 {
                m.0[i][j] = a.0[i][j].clone();
                m.0[i][j + 2] = b.0[i][j].clone();
                m.0[i + 2][j] = c.0[i][j].clone();
                m.0[i + 2][j + 2] = d.0[i][j].clone();
            }
        }
        m
    }

    /// Block `(bi, bj)` with `bi, bj` in `{0, 1}`.
    pub fn block(&self, bi: usize, bj: usize) -> Mat2 {
        let e = |i: usize, j: usize| self.0[2 * bi + i][2 * bj + j].clone();
        Mat2::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }

    /// The standard symplectic form `[[0, I], [-I, 0]]`.
    pub fn symplectic_form() -> Self {
        Mat4::from_blocks(
            &Mat2::zero(),
            &Mat2::identity(),
            &(-&Mat2::identity()),
            &Mat2::zero(),
        )
    }

    pub fn is_exact(&self) -> bool {
        self.0.iter().flatten().all(Scalar::is_exact)
    }

    pub fn transpose(&self) -> Self {
        Mat4(std::array::from_fn(|i| {
            std::array::from_fn(|j| self.0[j][i].clone())
        }))
    }

    /// Gauss-Jordan with partial pivoting on magnitude.
    pub fn invert(&self) -> Result<Self> {
        let mut a = self.0.clone();
        let mut inv = Mat4::identity().0;
        for col in 0..4 {
            let pivot = (col..4)
                .filter(|&r| !a[r][col].is_zero())
                .max_by(|&r, &s| {
                    a[r][col]
                        .to_f64()
                        .abs()
                        .partial_cmp(&a[s][col].to_f64().abs())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
                .ok_or(Error::SingularMatrix)?;
            a.swap(col, pivot);
            inv.swap(col, pivot);
            let p = a[col][col].recip();
            for j in 0..4 {
                a[col][j] = &a[col][j] * &p;
                inv[col][j] = &inv[col][j] * &p;
            }
            for r in 0..4 {
                if r == col || a[r][col].is_zero() && a[r][col].is_exact() {
                    continue;
                }
                let f = a[r][col].clone();
                for j in 0..4 {
                    a[r][j] = &a[r][j] - &(&f * &a[col][j]);
                    inv[r][j] = &inv[r][j] - &(&f * &inv[col][j]);
                }
            }
        }
        Ok(Mat4(inv))
    }

    pub fn norm_inf(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|x| x.to_f64().abs())
            .fold(0.0, f64::max)
    }

    pub fn dist_inf(&self, other: &Mat4) -> f64 {
        self.0
            .iter()
            .flatten()
            .zip(other.0.iter().flatten())
            .map(|(a, b)| match (a, b) {
                (Scalar::Exact(x), Scalar::Exact(y)) if x == y => 0.0,
                _ => (a.to_f64() - b.to_f64()).abs(),
            })
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Mat4, tol: f64) -> bool {
        self.0
            .iter()
            .flatten()
            .zip(other.0.iter().flatten())
            .all(|(a, b)| a.approx_eq(b, tol))
    }

    /// `||m^t J m - J||_inf <= tol` (exact comparison at `tol == 0`).
    pub fn is_symplectic(&self, tol: f64) -> bool {
        let j = Mat4::symplectic_form();
        let lhs = &(&self.transpose() * &j) * self;
        lhs.approx_eq(&j, tol)
    }

    /// `self * x * self^-1`.
    pub fn conj(&self, x: &Mat4) -> Result<Mat4> {
        Ok(&(self * x) * &self.invert()?)
    }
}

impl<'a> Mul<&'a Mat4> for &'a Mat4 {
    type Output = Mat4;
    fn mul(self, rhs: &'a Mat4) -> Mat4 {
        Mat4(std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                (0..4).fold(Scalar::zero(), |acc, k| acc + &self.0[i][k] * &rhs.0[k][j])
            })
        }))
    }
}

impl fmt::Display for Mat4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[{},{},{},{}]", row[0], row[1], row[2], row[3])?;
        }
        write!(f, "]")
    }
}
