//! Exact matrix identities checked on random rational instances.

use rand::Rng;

use crate::constants::{b_mat, ell, sigma3, sigma4, sigma5, w0};
use crate::matrix::{dagger, Mat2, Mat4, SymMat2};
use crate::parabolic::QElement;
use crate::scalar::Scalar;

pub fn rational<R: Rng>(rng: &mut R) -> Scalar {
    Scalar::ratio(rng.gen_range(-9..=9), rng.gen_range(1..=6))
}

pub fn nonzero<R: Rng>(rng: &mut R) -> Scalar {
    loop {
        let x = rational(rng);
        if !x.is_zero() {
            return x;
        }
    }
}

pub fn random_sym<R: Rng>(rng: &mut R) -> SymMat2 {
    SymMat2::new(rational(rng), rational(rng), rational(rng))
}

pub fn random_gl<R: Rng>(rng: &mut R) -> Mat2 {
    loop {
        let m = Mat2::new(rational(rng), rational(rng), rational(rng), rational(rng));
        if !m.det().is_zero() {
            return m;
        }
    }
}

pub fn random_lower<R: Rng>(rng: &mut R) -> Mat2 {
    Mat2::new(nonzero(rng), Scalar::zero(), rational(rng), nonzero(rng))
}

fn g(s: &SymMat2, h: &Mat2) -> Mat4 {
    QElement::new(s.clone(), h.clone()).expect("invertible").realization().clone()
}

/// `g(s,h) g(s',h') = g(s + h^dagger[s'], h h')`.
pub fn group_law<R: Rng>(rng: &mut R) -> bool {
    let (s1, h1, s2, h2) = (random_sym(rng), random_gl(rng), random_sym(rng), random_gl(rng));
    let lhs = &g(&s1, &h1) * &g(&s2, &h2);
    let rhs = g(&(&s1 + &dagger(&h1, &s2).unwrap()), &(&h1 * &h2));
    lhs == rhs
}

/// `g(s,h)^-1 = g(-th s h, h^-1)`.
pub fn inverse<R: Rng>(rng: &mut R) -> bool {
    let (s, h) = (random_sym(rng), random_gl(rng));
    let th = h.transpose();
    let m = &(&th * &s.to_mat2()) * &h;
    let minus = m.to_sym(0.0).expect("congruence preserves symmetry");
    g(&s, &h).invert().unwrap() == g(&-&minus, &h.invert().unwrap())
}

/// `(hk)^dagger = h^dagger k^dagger` and `I^dagger = id`.
pub fn dagger_action<R: Rng>(rng: &mut R) -> bool {
    let (s, h, k) = (random_sym(rng), random_gl(rng), random_gl(rng));
    let lhs = dagger(&(&h * &k), &s).unwrap();
    let rhs = dagger(&h, &dagger(&k, &s).unwrap()).unwrap();
    lhs == rhs && dagger(&Mat2::identity(), &s).unwrap() == s
}

/// `<(th)^dagger[t], s> = <t, h^dagger[s]>`.
pub fn perp_pairing<R: Rng>(rng: &mut R) -> bool {
    let (s, t, h) = (random_sym(rng), random_sym(rng), random_gl(rng));
    dagger(&h.transpose(), &t).unwrap().pairing(&s) == t.pairing(&dagger(&h, &s).unwrap())
}

/// `w0 g(b sigma5 + c sigma3, I) w0^-1` is the displayed lower-triangular element.
pub fn shear<R: Rng>(rng: &mut R) -> bool {
    let (b, c) = (rational(rng), rational(rng));
    let s = &sigma5().scale(&b) + &sigma3().scale(&c);
    let w = w0();
    let lhs = &(&w * &g(&s, &Mat2::identity())) * &w.invert().unwrap();
    let (z, o) = (Scalar::zero, Scalar::one);
    let rhs = Mat4([
        [o(), z(), z(), z()],
        [-&b, o(), z(), z()],
        [c, z(), o(), b.clone()],
        [z(), z(), z(), o()],
    ]);
    lhs == rhs
}

/// `diag(s5,s5) [[s0,-s1],[s1,s0]] diag(s5,s5) = [[s1,-s0],[s0,s1]]`.
pub fn weyl_swap() -> bool {
    let s0 = Mat2::from_ints(1, 0, 0, 0);
    let s1 = Mat2::from_ints(0, 0, 0, 1);
    let p = sigma5().to_mat2();
    let z = Mat2::zero();
    let pp = Mat4::from_blocks(&p, &z, &z, &p);
    let lhs = &(&pp * &Mat4::from_blocks(&s0, &-&s1, &s1, &s0)) * &pp;
    lhs == Mat4::from_blocks(&s1, &-&s0, &s0, &s1)
}

/// `tau_1(h) h = a0 (sigma4 h - h^sharp sigma4) = a0 [[0, b/(a d)], [b, d - 1/d]]`.
pub fn tau_one<R: Rng>(rng: &mut R) -> bool {
    let a0 = rational(rng);
    let h = random_lower(rng);
    let (al, be, de) = (h.get(0, 0).clone(), h.get(1, 0).clone(), h.get(1, 1).clone());
    let tau = (&sigma4() - &dagger(&h, &sigma4()).unwrap()).scale(&a0);
    let lhs = &tau.to_mat2() * &h;
    let s4 = sigma4().to_mat2();
    let mid = &(&s4 * &h) - &(&h.sharp().unwrap() * &s4);
    let closed = Mat2::new(Scalar::zero(), &be / &(&al * &de), be.clone(), &de - &de.recip());
    lhs == mid.scale(&a0) && lhs == closed.scale(&a0)
}

/// `l B l^-1 = (a/c) B` and `l sigma4 l^-1 = -(b/c) B + sigma4` for `l = l_{a,b,c}`.
pub fn ell_conjugation<R: Rng>(rng: &mut R) -> bool {
    let (a, b, c) = (nonzero(rng), rational(rng), nonzero(rng));
    let l = ell(a.clone(), b.clone(), c.clone());
    let bb = b_mat();
    let one = l.conj(&bb).unwrap() == bb.scale(&(&a / &c));
    let two = l.conj(&sigma4().to_mat2()).unwrap() == &bb.scale(&-&(&b / &c)) + &sigma4().to_mat2();
    one && two
}

/// Named identity checks, in report order.
pub fn all_checks<R: Rng>() -> Vec<(&'static str, fn(&mut R) -> bool)> {
    vec![
        ("group law", group_law::<R>),
        ("inverse", inverse::<R>),
        ("dagger action", dagger_action::<R>),
        ("perp pairing", perp_pairing::<R>),
        ("w0 shear", shear::<R>),
        ("weyl swap", |_| weyl_swap()),
        ("tau_1 corner", tau_one::<R>),
        ("ell conjugation", ell_conjugation::<R>),
    ]
}

/// Number of failures of `check` over `n` instances.
pub fn count_failures<R: Rng>(rng: &mut R, n: usize, check: fn(&mut R) -> bool) -> usize {
    (0..n).filter(|_| !check(rng)).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identities_hold() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for (name, f) in all_checks::<ChaCha8Rng>() {
            assert_eq!(count_failures(&mut rng, 50, f), 0, "{name}");
        }
    }

    #[test]
    fn broken_law_is_detected() {
        // dropping the dagger in the group law must fail
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let bad = |rng: &mut ChaCha8Rng| {
            let (s1, h1, s2, h2) = (random_sym(rng), random_gl(rng), random_sym(rng), random_gl(rng));
            &g(&s1, &h1) * &g(&s2, &h2) == g(&(&s1 + &s2), &(&h1 * &h2))
        };
        assert!(count_failures(&mut rng, 20, bad) > 0);
    }
}
