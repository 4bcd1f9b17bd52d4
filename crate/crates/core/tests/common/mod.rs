#![allow(dead_code)]

use frobpow_core::{Monomial, MonomialIdeal};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn ideal(gens: &[&[u64]]) -> MonomialIdeal {
    MonomialIdeal::from_exponents(gens).unwrap()
}

pub fn square_cube() -> MonomialIdeal {
    ideal(&[&[2, 2, 0], &[0, 3, 3]])
}

pub fn mono(e: &[u64]) -> Monomial {
    Monomial::new(e.to_vec())
}

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// At most 3 variables, at most 3 generators, exponents at most `max_exp`,
/// never the unit ideal.
pub fn random_ideal(rng: &mut ChaCha8Rng, max_exp: u64) -> MonomialIdeal {
    let m = rng.gen_range(1..=3);
    let n = rng.gen_range(1..=3);
    let gens: Vec<Monomial> = (0..n)
        .map(|_| loop {
            let e: Vec<u64> = (0..m).map(|_| rng.gen_range(0..=max_exp)).collect();
            if e.iter().any(|&x| x > 0) {
                break Monomial::new(e);
            }
        })
        .collect();
    frobpow_core::minimalize(gens).unwrap()
}

/// Every exponent vector with `0 <= b_i <= bounds[i]`.
pub fn grid(bounds: &[u64]) -> Vec<Monomial> {
    let mut out = vec![Vec::new()];
    for &bd in bounds {
        out = out
            .into_iter()
            .flat_map(|v: Vec<u64>| {
                (0..=bd).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out.into_iter().map(Monomial::new).collect()
}
