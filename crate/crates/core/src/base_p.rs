//! Exact base-`p` arithmetic on nonnegative rationals.
//!
//! Expansions are computed by long division: the remainder after each digit
//! is recorded with its position, and the first repeated remainder marks the
//! start of the period. A `p`-adic rational `k/p^e` has two expansions, the
//! terminating one (period `0`) and the one ending in repeating `p-1`
//! digits. Truncation and the closed Sierpinski simplex both depend on the
//! second one.
//!
//! Admissibility only examines finitely many digit columns: past the longest
//! preperiod, every entry is periodic, so the column sums repeat with period
//! equal to the lcm of the entry periods. Checking `L + lcm` columns, where
//! `L` is the longest preperiod, therefore covers every column.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::limits::Limits;

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p.is_multiple_of(2) {
        return p == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Accepts `p` iff it is a prime within `limits.max_prime`.
pub fn check_prime(p: u64, limits: &Limits) -> Result<()> {
    if p > limits.max_prime {
        return Err(Error::PrimeTooLarge {
            p,
            limit: limits.max_prime,
        });
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(())
}

/// Exponent `e` with `q = p^e`, or an error if `q` is not a power of `p`.
pub fn log_p(q: u64, p: u64) -> Result<u32> {
    let mut e = 0;
    let mut x = q;
    if x == 0 {
        return Err(Error::NotPowerOfP { q, p });
    }
    while x.is_multiple_of(p) {
        x /= p;
        e += 1;
    }
    if x == 1 {
        Ok(e)
    } else {
        Err(Error::NotPowerOfP { q, p })
    }
}

/// A rational `k / p^e` kept in lowest terms over `p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PAdicRational {
    p: u64,
    k: BigUint,
    e: u32,
}

impl PAdicRational {
    pub fn new(p: u64, k: BigUint, e: u32) -> Self {
        let mut k = k;
        let mut e = e;
        let bp = BigUint::from(p);
        while e > 0 && !k.is_zero() && (&k % &bp).is_zero() {
            k /= &bp;
            e -= 1;
        }
        if k.is_zero() {
            e = 0;
        }
        Self { p, k, e }
    }

    pub fn zero(p: u64) -> Self {
        Self {
            p,
            k: BigUint::zero(),
            e: 0,
        }
    }

    pub fn from_parts(p: u64, k: u64, e: u32) -> Self {
        Self::new(p, BigUint::from(k), e)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn numerator(&self) -> &BigUint {
        &self.k
    }

    pub fn exponent(&self) -> u32 {
        self.e
    }

    pub fn denominator(&self) -> BigUint {
        BigUint::from(self.p).pow(self.e)
    }

    pub fn is_zero(&self) -> bool {
        self.k.is_zero()
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.k.clone().into(), self.denominator().into())
    }

    /// Recover a `p`-adic rational, or `None` if the denominator has another
    /// prime factor or the value is negative.
    pub fn from_rational(r: &BigRational, p: u64) -> Option<Self> {
        if r.is_negative() {
            return None;
        }
        let mut d = r.denom().magnitude().clone();
        let bp = BigUint::from(p);
        let mut e = 0u32;
        while (&d % &bp).is_zero() {
            d /= &bp;
            e += 1;
        }
        if !d.is_one() {
            return None;
        }
        Some(Self::new(p, r.numer().magnitude().clone(), e))
    }
}

impl PartialOrd for PAdicRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PAdicRational {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.k * other.denominator()).cmp(&(&other.k * self.denominator()))
    }
}

impl fmt::Display for PAdicRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.k, self.denominator())
    }
}

/// Which of the two expansions of a `p`-adic rational to produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Representation {
    /// Terminating form (period `0`) for `p`-adic rationals.
    Canonical,
    /// Form ending in repeating `p-1` digits for positive `p`-adic rationals.
    Nonterminating,
}

/// An eventually periodic base-`p` expansion
/// `int_part . preperiod (period)(period)...`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BasePExpansion {
    pub p: u64,
    pub int_part: BigUint,
    pub preperiod: Vec<u64>,
    pub period: Vec<u64>,
}

/// A vector of expansions, one per coordinate.
pub type DigitVector = Vec<BasePExpansion>;

impl BasePExpansion {
    /// Build an expansion from digits, validating their range.
    pub fn new(p: u64, int_part: BigUint, preperiod: Vec<u64>, period: Vec<u64>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::Invalid("period must be nonempty".into()));
        }
        if let Some(&d) = preperiod.iter().chain(&period).find(|&&d| d >= p) {
            return Err(Error::Invalid(format!("digit {d} out of range for base {p}")));
        }
        Ok(Self {
            p,
            int_part,
            preperiod,
            period,
        })
    }

    pub fn zero(p: u64) -> Self {
        Self {
            p,
            int_part: BigUint::zero(),
            preperiod: Vec::new(),
            period: vec![0],
        }
    }

    /// Digit in place `i` after the point, `i >= 1`.
    pub fn digit(&self, i: usize) -> u64 {
        assert!(i >= 1, "places are numbered from 1");
        let i = i - 1;
        if i < self.preperiod.len() {
            self.preperiod[i]
        } else {
            self.period[(i - self.preperiod.len()) % self.period.len()]
        }
    }

    pub fn is_terminating(&self) -> bool {
        self.period.iter().all(|&d| d == 0)
    }

    pub fn to_rational(&self) -> BigRational {
        to_rational(self)
    }

    /// Integer part followed by the first `e` digits, as given.
    pub fn truncate(&self, e: u32) -> PAdicRational {
        let bp = BigUint::from(self.p);
        let mut k = self.int_part.clone();
        for i in 1..=e as usize {
            k = k * &bp + BigUint::from(self.digit(i));
        }
        PAdicRational::new(self.p, k, e)
    }
}

fn fmt_digits(digits: &[u64], p: u64) -> String {
    let sep = if p > 10 { "," } else { "" };
    digits
        .iter()
        .map(u64::to_string)
        .collect::<Vec<_>>()
        .join(sep)
}

impl fmt::Display for BasePExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}.{}(bar)({})_{}",
            self.int_part,
            fmt_digits(&self.preperiod, self.p),
            fmt_digits(&self.period, self.p),
            self.p
        )
    }
}

impl FromStr for BasePExpansion {
    type Err = Error;

    /// Parses `<int>.<digits>(bar)(<digits>)_<p>`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Syntax {
            pos: 0,
            msg: format!("{msg} in expansion {s:?}"),
        };
        let (body, p) = s.rsplit_once("_").ok_or_else(|| bad("missing base"))?;
        let p: u64 = p.parse().map_err(|_| bad("bad base"))?;
        let (int_part, rest) = body.split_once('.').ok_or_else(|| bad("missing point"))?;
        let (pre, per) = rest.split_once("(bar)").ok_or_else(|| bad("missing (bar)"))?;
        let per = per
            .strip_prefix('(')
            .and_then(|x| x.strip_suffix(')'))
            .ok_or_else(|| bad("period not parenthesised"))?;
        let digits = |t: &str| -> Result<Vec<u64>> {
            if t.is_empty() {
                return Ok(Vec::new());
            }
            if p > 10 {
                t.split(',')
                    .map(|d| d.parse().map_err(|_| bad("bad digit")))
                    .collect()
            } else {
                t.chars()
                    .map(|c| c.to_digit(10).map(u64::from).ok_or_else(|| bad("bad digit")))
                    .collect()
            }
        };
        let int_part: BigUint = int_part.parse().map_err(|_| bad("bad integer part"))?;
        Self::new(p, int_part, digits(pre)?, digits(per)?)
    }
}

/// Expand a nonnegative rational in base `p`.
///
/// `Nonterminating` only differs from `Canonical` for positive `p`-adic
/// rationals; zero has a single expansion and is returned as `0.(0)`.
pub fn expand(r: &BigRational, p: u64, repr: Representation) -> Result<BasePExpansion> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if r.is_negative() {
        return Err(Error::Negative(r.to_string()));
    }
    let num = r.numer().magnitude();
    let den = r.denom().magnitude();
    let (int_part, mut rem) = num.div_rem(den);
    let bp = BigUint::from(p);
    let mut seen: HashMap<BigUint, usize> = HashMap::new();
    let mut digits = Vec::new();
    let start = loop {
        if let Some(&pos) = seen.get(&rem) {
            break pos;
        }
        seen.insert(rem.clone(), digits.len());
        let (d, next) = (&rem * &bp).div_rem(den);
        digits.push(d.to_u64().expect("digit below p"));
        rem = next;
    };
    let period = digits.split_off(start);
    let mut x = BasePExpansion {
        p,
        int_part,
        preperiod: digits,
        period,
    };
    if repr == Representation::Nonterminating && x.is_terminating() && !r.is_zero() {
        match x.preperiod.last_mut() {
            Some(d) => *d -= 1,
            None => x.int_part -= 1u32,
        }
        x.period = vec![p - 1];
    }
    Ok(x)
}

/// Sum the expansion exactly as a geometric series.
pub fn to_rational(x: &BasePExpansion) -> BigRational {
    let bp = BigUint::from(x.p);
    let value = |digits: &[u64]| {
        digits
            .iter()
            .fold(BigUint::zero(), |acc, &d| acc * &bp + BigUint::from(d))
    };
    let pre_scale = bp.clone().pow(x.preperiod.len());
    let per_scale = bp.clone().pow(x.period.len()) - 1u32;
    let mut r = BigRational::from_integer(x.int_part.clone().into());
    r += BigRational::new(value(&x.preperiod).into(), pre_scale.clone().into());
    r += BigRational::new(value(&x.period).into(), (pre_scale * per_scale).into());
    r
}

/// `trunc_e(z)`: the nonterminating expansion of `z` cut after `e` places.
pub fn trunc(z: &BigRational, p: u64, e: u32) -> Result<PAdicRational> {
    if z.is_negative() {
        return Err(Error::Negative(z.to_string()));
    }
    if z.is_zero() {
        return if e == 0 {
            Ok(PAdicRational::zero(p))
        } else {
            Err(Error::TruncOfZero)
        };
    }
    Ok(expand(z, p, Representation::Nonterminating)?.truncate(e))
}

/// Componentwise digit truncation of the given expansions.
pub fn tau(v: &[BasePExpansion], e: u32) -> Vec<PAdicRational> {
    v.iter().map(|x| x.truncate(e)).collect()
}

/// `true` iff no digit column of the matrix (rows = addends, columns =
/// places) sums to `p` or more.
pub fn carry_free_sum(digits: &[Vec<u64>], p: u64) -> bool {
    let width = digits.iter().map(Vec::len).max().unwrap_or(0);
    (0..width).all(|j| {
        digits
            .iter()
            .map(|row| row.get(j).copied().unwrap_or(0) as u128)
            .sum::<u128>()
            < p as u128
    })
}

/// `binom(k; u) != 0 mod p`, decided by carry-free base-`p` addition.
pub fn multinomial_nonzero(k: u64, u: &[u64], p: u64) -> bool {
    if u.iter().map(|&x| x as u128).sum::<u128>() != k as u128 {
        return false;
    }
    let mut u = u.to_vec();
    while u.iter().any(|&x| x > 0) {
        let column: u128 = u.iter().map(|&x| (x % p) as u128).sum();
        if column >= p as u128 {
            return false;
        }
        for x in &mut u {
            *x /= p;
        }
    }
    true
}

fn check_unit_interval(v: &[BigRational]) -> Result<()> {
    for x in v {
        if x.is_negative() || *x > BigRational::one() {
            return Err(Error::OutOfRange {
                value: x.to_string(),
                range: "[0, 1]",
            });
        }
    }
    Ok(())
}

fn columns_carry_free(reps: &[&BasePExpansion], p: u64) -> bool {
    let int_sum: BigUint = reps.iter().map(|x| x.int_part.clone()).sum();
    if int_sum >= BigUint::from(p) {
        return false;
    }
    let pre = reps.iter().map(|x| x.preperiod.len()).max().unwrap_or(0);
    let per = reps
        .iter()
        .map(|x| x.period.len())
        .fold(1usize, |a, b| a.lcm(&b));
    (1..=pre + per).all(|i| reps.iter().map(|x| x.digit(i) as u128).sum::<u128>() < p as u128)
}

/// Closed Sierpinski simplex membership: some choice of expansions for the
/// entries adds without carries.
pub fn admissible(v: &[BigRational], p: u64) -> Result<bool> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    check_unit_interval(v)?;
    let mut options: Vec<Vec<BasePExpansion>> = Vec::with_capacity(v.len());
    for x in v {
        let canonical = expand(x, p, Representation::Canonical)?;
        let mut reps = vec![canonical.clone()];
        if canonical.is_terminating() && !x.is_zero() {
            reps.push(expand(x, p, Representation::Nonterminating)?);
        }
        options.push(reps);
    }
    let mut choice = vec![0usize; v.len()];
    loop {
        let reps: Vec<&BasePExpansion> = options.iter().zip(&choice).map(|(o, &c)| &o[c]).collect();
        if columns_carry_free(&reps, p) {
            return Ok(true);
        }
        // advance the mixed-radix counter over representation choices
        let mut i = 0;
        loop {
            if i == choice.len() {
                return Ok(false);
            }
            choice[i] += 1;
            if choice[i] < options[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// Open Sierpinski simplex membership for rationals: every entry terminates
/// in base `p` and the terminating expansions add without carries.
pub fn carry_free_canonical(v: &[BigRational], p: u64) -> Result<bool> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    check_unit_interval(v)?;
    let mut reps = Vec::with_capacity(v.len());
    for x in v {
        let c = expand(x, p, Representation::Canonical)?;
        if !c.is_terminating() {
            return Ok(false);
        }
        reps.push(c);
    }
    Ok(columns_carry_free(&reps.iter().collect::<Vec<_>>(), p))
}
