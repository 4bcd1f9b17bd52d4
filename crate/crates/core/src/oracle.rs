//! Definition-level Frobenius powers, used as ground truth.
//!
//! `I^[k/q]` is generated by the monomials `x^floor(A·u/q)` over all
//! `u` with `|u| = k` whose multinomial coefficient is nonzero mod `p`, i.e.
//! whose coordinates add to `k` without carries. Those `u` are enumerated
//! digit by digit: the base-`p` digit `k_j` of `k` is split into `n` parts in
//! every possible way and the parts become digit `j` of the coordinates.

use std::collections::HashSet;

use rayon::prelude::*;

use crate::base_p::{check_prime, log_p, PAdicRational};
use crate::error::{Error, Result};
use crate::ideal::{minimal_elements, ExponentMatrix, Monomial, MonomialIdeal};
use crate::limits::{Limits, Meter};

/// Base-`p` digits of `k`, least significant first.
pub(crate) fn digits_of(mut k: u64, p: u64) -> Vec<u64> {
    let mut out = Vec::new();
    while k > 0 {
        out.push(k % p);
        k /= p;
    }
    out
}

/// All `u ∈ N^n` with `|u| = total`, in lexicographically decreasing order.
pub(crate) fn compositions(total: u64, n: usize) -> Vec<Vec<u64>> {
    fn go(rest: u64, slot: usize, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if slot + 1 == cur.len() {
            cur[slot] = rest;
            out.push(cur.clone());
            return;
        }
        for x in (0..=rest).rev() {
            cur[slot] = x;
            go(rest - x, slot + 1, cur, out);
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(total, 0, &mut vec![0; n], &mut out);
    out
}

/// `I^[k]` for an integer `k`: `I^{k_0} (I^{k_1})^[p] ... (I^{k_r})^[p^r]`.
pub fn integer_frobenius_power(ideal: &MonomialIdeal, k: u64, p: u64) -> Result<MonomialIdeal> {
    check_prime(p, &Limits::default())?;
    let mut acc = MonomialIdeal::unit(ideal.num_vars());
    let mut scale = 1u64;
    for (j, &kj) in digits_of(k, p).iter().enumerate() {
        if j > 0 {
            scale = scale.checked_mul(p).ok_or(Error::Overflow("p^j"))?;
        }
        if kj > 0 {
            acc = acc.multiply(&ideal.ordinary_power(kj)?.bracket_power(scale)?)?;
        }
    }
    Ok(acc)
}

/// Brute-force evaluator of `I^[k/q]` for a fixed proper ideal and prime.
#[derive(Debug, Clone)]
pub struct Oracle {
    ideal: MonomialIdeal,
    matrix: ExponentMatrix,
    p: u64,
    limits: Limits,
}

/// A maximal run `[start, end)` of scanned exponents on which the scanned
/// power is constant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanRun {
    pub start: PAdicRational,
    pub end: PAdicRational,
    pub ideal: MonomialIdeal,
}

impl Oracle {
    pub fn new(ideal: &MonomialIdeal, p: u64) -> Result<Self> {
        Self::with_limits(ideal, p, Limits::default())
    }

    pub fn with_limits(ideal: &MonomialIdeal, p: u64, limits: Limits) -> Result<Self> {
        check_prime(p, &limits)?;
        Ok(Self {
            ideal: ideal.clone(),
            matrix: ideal.exponent_matrix()?,
            p,
            limits,
        })
    }

    pub fn ideal(&self) -> &MonomialIdeal {
        &self.ideal
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    /// For each nonzero digit position, the vectors `p^j · A·c` over all
    /// splittings `c` of that digit, highest position first.
    fn digit_layers(&self, k: u64, meter: &mut Meter) -> Result<Vec<Vec<Vec<u128>>>> {
        let n = self.matrix.cols();
        let mut layers = Vec::new();
        let mut scale = 1u128;
        for (j, &kj) in digits_of(k, self.p).iter().enumerate() {
            if j > 0 {
                scale = scale
                    .checked_mul(self.p as u128)
                    .ok_or(Error::Overflow("p^j"))?;
            }
            if kj == 0 {
                continue;
            }
            let comps = compositions(kj, n);
            meter.tick(comps.len() as u64)?;
            let layer = comps
                .iter()
                .map(|c| {
                    self.matrix.apply(c)?.into_iter().map(|x| {
                        x.checked_mul(scale).ok_or(Error::Overflow("A·u"))
                    }).collect()
                })
                .collect::<Result<Vec<Vec<u128>>>>()?;
            layers.push(layer);
        }
        layers.reverse();
        Ok(layers)
    }

    /// `I^[k/q]` from the generator formula.
    pub fn power(&self, k: u64, q: u64) -> Result<MonomialIdeal> {
        log_p(q, self.p)?;
        let mut meter = self.limits.meter();
        let layers = self.digit_layers(k, &mut meter)?;
        let m = self.matrix.rows();
        let mut found: HashSet<Monomial> = HashSet::new();
        let mut stack: Vec<(usize, Vec<u128>)> = vec![(0, vec![0; m])];
        while let Some((depth, acc)) = stack.pop() {
            meter.tick(1)?;
            if depth == layers.len() {
                let exps = acc
                    .iter()
                    .map(|&x| u64::try_from(x / q as u128).map_err(|_| Error::Overflow("exponent")))
                    .collect::<Result<Vec<_>>>()?;
                found.insert(Monomial::new(exps));
                continue;
            }
            for contrib in &layers[depth] {
                let next = acc
                    .iter()
                    .zip(contrib)
                    .map(|(a, b)| a.checked_add(*b).ok_or(Error::Overflow("A·u")))
                    .collect::<Result<Vec<_>>>()?;
                stack.push((depth + 1, next));
            }
        }
        MonomialIdeal::new(m, minimal_elements(found.into_iter().collect()))
    }

    /// `x^b ∈ I^[k/q]`, decided without materialising the power: some
    /// carry-free `u` with `|u| = k` must satisfy `A·u < q(b+1)`.
    pub fn member(&self, b: &Monomial, k: u64, q: u64) -> Result<bool> {
        log_p(q, self.p)?;
        if b.num_vars() != self.matrix.rows() {
            return Err(Error::LengthMismatch {
                expected: self.matrix.rows(),
                found: b.num_vars(),
            });
        }
        let bound = b
            .exponents()
            .iter()
            .map(|&x| {
                (x as u128 + 1)
                    .checked_mul(q as u128)
                    .ok_or(Error::Overflow("q(b+1)"))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut meter = self.limits.meter();
        let layers = self.digit_layers(k, &mut meter)?;
        let mut stack: Vec<(usize, Vec<u128>)> = vec![(0, vec![0; bound.len()])];
        while let Some((depth, acc)) = stack.pop() {
            meter.tick(1)?;
            if depth == layers.len() {
                return Ok(true);
            }
            for contrib in &layers[depth] {
                let next: Vec<u128> = acc.iter().zip(contrib).map(|(a, b)| a + b).collect();
                if next.iter().zip(&bound).all(|(x, bd)| x < bd) {
                    stack.push((depth + 1, next));
                }
            }
        }
        Ok(false)
    }

    /// `I^[k/q]` for `q = p^e` and `k = 0..q`, merged into constant runs.
    pub fn scan(&self, e: u32) -> Result<Vec<ScanRun>> {
        let q = (self.p as u128).pow(e);
        if q > self.limits.max_states as u128 {
            return Err(Error::BudgetExceeded(self.limits.max_states));
        }
        let q = q as u64;
        let powers = (0..q)
            .into_par_iter()
            .map(|k| self.power(k, q))
            .collect::<Result<Vec<_>>>()?;
        let mut runs: Vec<ScanRun> = Vec::new();
        for (k, ideal) in powers.into_iter().enumerate() {
            let at = PAdicRational::from_parts(self.p, k as u64, e);
            match runs.last_mut() {
                Some(last) if last.ideal == ideal => {}
                Some(last) => {
                    last.end = at.clone();
                    runs.push(ScanRun {
                        start: at.clone(),
                        end: at,
                        ideal,
                    });
                }
                None => runs.push(ScanRun {
                    start: at.clone(),
                    end: at,
                    ideal,
                }),
            }
        }
        if let Some(last) = runs.last_mut() {
            last.end = PAdicRational::from_parts(self.p, 1, 0);
        }
        Ok(runs)
    }
}

/// `I^[k/q]` with default limits.
pub fn padic_power(ideal: &MonomialIdeal, k: u64, q: u64, p: u64) -> Result<MonomialIdeal> {
    Oracle::new(ideal, p)?.power(k, q)
}

pub fn member(ideal: &MonomialIdeal, b: &Monomial, k: u64, q: u64, p: u64) -> Result<bool> {
    Oracle::new(ideal, p)?.member(b, k, q)
}

pub fn scan_powers(ideal: &MonomialIdeal, p: u64, e: u32) -> Result<Vec<ScanRun>> {
    Oracle::new(ideal, p)?.scan(e)
}
