//! Independent oracles for the integration tests: coefficient-list
//! arithmetic that never touches the word-level fast paths under test.

#![allow(dead_code)]

use gf2collatz::gf2poly::Poly;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn coeffs_of(p: &Poly) -> Vec<bool> {
    match p.degree() {
        None => Vec::new(),
        Some(d) => (0..=d).map(|k| p.coeff(k)).collect(),
    }
}

pub fn poly_from_coeffs(coeffs: &[bool]) -> Poly {
    let mut acc = Poly::zero();
    for (k, &bit) in coeffs.iter().enumerate() {
        if bit {
            acc = acc + Poly::monomial(k);
        }
    }
    acc
}

/// Schoolbook O(n^2) convolution over coefficient lists.
pub fn naive_mul(a: &Poly, b: &Poly) -> Poly {
    let (Some(da), Some(db)) = (a.degree(), b.degree()) else {
        return Poly::zero();
    };
    let mut out = vec![false; da + db + 1];
    for i in 0..=da {
        if !a.coeff(i) {
            continue;
        }
        for j in 0..=db {
            if b.coeff(j) {
                out[i + j] ^= true;
            }
        }
    }
    poly_from_coeffs(&out)
}

/// Coefficient-level long division.
pub fn schoolbook_div_rem(p: &Poly, d: &Poly) -> (Poly, Poly) {
    let dd = d.degree().expect("nonzero divisor");
    let mut rem = coeffs_of(p);
    let mut quot = vec![false; rem.len().saturating_sub(dd)];
    loop {
        let rdeg = match rem.iter().rposition(|&b| b) {
            Some(r) if r >= dd => r,
            _ => break,
        };
        let shift = rdeg - dd;
        quot[shift] = true;
        for j in 0..=dd {
            if d.coeff(j) {
                rem[shift + j] ^= true;
            }
        }
    }
    (poly_from_coeffs(&quot), poly_from_coeffs(&rem))
}

/// `p(x+1)` by expanding each monomial: the sum of `(x+1)^k` over set bits,
/// powers built by repeated naive multiplication.
pub fn bar_by_expansion(p: &Poly) -> Poly {
    let Some(deg) = p.degree() else {
        return Poly::zero();
    };
    let x_plus_1: Poly = "x+1".parse().unwrap();
    let mut acc = Poly::zero();
    let mut power = Poly::one();
    for k in 0..=deg {
        if p.coeff(k) {
            acc = acc + power.clone();
        }
        if k < deg {
            power = naive_mul(&power, &x_plus_1);
        }
    }
    acc
}

/// Valuation at `x+1` by repeated schoolbook division.
pub fn val_x1_by_division(p: &Poly) -> usize {
    let x_plus_1: Poly = "x+1".parse().unwrap();
    let mut cur = p.clone();
    let mut count = 0;
    loop {
        let (q, r) = schoolbook_div_rem(&cur, &x_plus_1);
        if !r.is_zero() {
            return count;
        }
        cur = q;
        count += 1;
    }
}

/// Uniformly random polynomial of degree exactly `degree`.
pub fn random_poly<R: Rng>(rng: &mut R, degree: usize) -> Poly {
    Poly::random(degree, rng)
}

/// Random polynomial of degree at most `max_degree` (degree chosen
/// uniformly).
pub fn random_poly_up_to<R: Rng>(rng: &mut R, max_degree: usize) -> Poly {
    let degree = rng.random_range(0..=max_degree);
    Poly::random(degree, rng)
}
