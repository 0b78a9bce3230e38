//! Named matrices used throughout: the five symmetric generators, the
//! rotation/boost one-parameter groups, and the Weyl element `w0`.

use crate::matrix::{Mat2, Mat4, SymMat2};
use crate::scalar::Scalar;

/// `I`.
pub fn sigma1() -> SymMat2 {
    SymMat2::from_ints(1, 0, 1)
}

/// `diag(1, -1)`; also written `Lambda` when used as a group element.
pub fn sigma2() -> SymMat2 {
    SymMat2::from_ints(1, 0, -1)
}

pub fn sigma3() -> SymMat2 {
    SymMat2::from_ints(1, 0, 0)
}

pub fn sigma4() -> SymMat2 {
    SymMat2::from_ints(0, 0, 1)
}

pub fn sigma5() -> SymMat2 {
    SymMat2::from_ints(0, 1, 0)
}

/// `sigma_i` for `i` in `1..=5`.
pub fn sigma(i: usize) -> Option<SymMat2> {
    match i {
        1 => Some(sigma1()),
        2 => Some(sigma2()),
        3 => Some(sigma3()),
        4 => Some(sigma4()),
        5 => Some(sigma5()),
        _ => None,
    }
}

pub fn lambda() -> Mat2 {
    sigma2().to_mat2()
}

/// Nilpotent `[[0,0],[1,0]]`.
pub fn b_mat() -> Mat2 {
    Mat2::from_ints(0, 0, 1, 0)
}

/// `[[0,1],[-1,0]]`.
pub fn j2() -> Mat2 {
    Mat2::from_ints(0, 1, -1, 0)
}

/// `R_t = [[cos t, sin t], [-sin t, cos t]]`.
pub fn rot(t: &Scalar) -> Mat2 {
    let (c, s) = (t.cos(), t.sin());
    Mat2::new(c.clone(), s.clone(), -s, c)
}

/// `A_t = [[cosh t, sinh t], [sinh t, cosh t]]`.
pub fn boost(t: &Scalar) -> Mat2 {
    let (c, s) = (t.cosh(), t.sinh());
    Mat2::new(c.clone(), s.clone(), s, c)
}

/// `l_{a,b,c} = [[c,0],[b,a]]`.
pub fn ell(a: Scalar, b: Scalar, c: Scalar) -> Mat2 {
    Mat2::new(c, Scalar::zero(), b, a)
}

pub fn w0() -> Mat4 {
    Mat4::from_ints([[1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0], [0, 1, 0, 0]])
}
