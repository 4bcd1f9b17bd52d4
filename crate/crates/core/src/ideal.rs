//! Monomials, monomial ideals and the exponent matrix.
//!
//! A monomial is stored by its exponent vector. Ideals keep only their
//! minimal generators, sorted in descending lexicographic order, so two
//! ideals are equal exactly when their generator lists are equal. The unit
//! ideal is the ideal generated by the zero vector.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Monomial {
    exponents: Vec<u64>,
}

impl Monomial {
    pub fn new(exponents: Vec<u64>) -> Self {
        Self { exponents }
    }

    /// The monomial 1 in `num_vars` variables.
    pub fn one(num_vars: usize) -> Self {
        Self {
            exponents: vec![0; num_vars],
        }
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn num_vars(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_one(&self) -> bool {
        self.exponents.iter().all(|&a| a == 0)
    }

    pub fn degree(&self) -> u128 {
        self.exponents.iter().map(|&a| a as u128).sum()
    }

    /// Componentwise `self <= other`.
    pub fn divides(&self, other: &Monomial) -> Result<bool> {
        check_len(self.num_vars(), other.num_vars())?;
        Ok(self.divides_unchecked(other))
    }

    #[inline]
    pub(crate) fn divides_unchecked(&self, other: &Monomial) -> bool {
        self.exponents
            .iter()
            .zip(&other.exponents)
            .all(|(a, b)| a <= b)
    }

    pub fn mul(&self, other: &Monomial) -> Result<Monomial> {
        check_len(self.num_vars(), other.num_vars())?;
        let exponents = self
            .exponents
            .iter()
            .zip(&other.exponents)
            .map(|(a, b)| a.checked_add(*b).ok_or(Error::Overflow("monomial product")))
            .collect::<Result<_>>()?;
        Ok(Monomial { exponents })
    }

    /// Exponent-wise difference, `None` unless `other` divides `self`.
    pub fn quotient(&self, other: &Monomial) -> Option<Monomial> {
        if self.num_vars() != other.num_vars() || !other.divides_unchecked(self) {
            return None;
        }
        Some(Monomial::new(
            self.exponents
                .iter()
                .zip(&other.exponents)
                .map(|(a, b)| a - b)
                .collect(),
        ))
    }
}

impl From<Vec<u64>> for Monomial {
    fn from(exponents: Vec<u64>) -> Self {
        Monomial::new(exponents)
    }
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::LengthMismatch { expected, found })
    }
}

/// `true` iff `a` divides `b`.
pub fn divides(a: &Monomial, b: &Monomial) -> Result<bool> {
    a.divides(b)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonomialIdeal {
    num_vars: usize,
    generators: Vec<Monomial>,
}

/// Reduce a generating set to its minimal generators in canonical order.
pub fn minimalize(gens: Vec<Monomial>) -> Result<MonomialIdeal> {
    let num_vars = gens.first().ok_or(Error::EmptyGenerators)?.num_vars();
    for g in &gens {
        check_len(num_vars, g.num_vars())?;
    }
    Ok(MonomialIdeal {
        num_vars,
        generators: minimal_elements(gens),
    })
}

/// Divisibility-minimal elements of a nonempty, length-checked list.
pub(crate) fn minimal_elements(mut gens: Vec<Monomial>) -> Vec<Monomial> {
    gens.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| b.cmp(a)));
    gens.dedup();
    let mut kept: Vec<Monomial> = Vec::with_capacity(gens.len());
    for g in gens {
        if !kept.iter().any(|k| k.divides_unchecked(&g)) {
            kept.push(g);
        }
    }
    kept.sort_by(|a, b| b.cmp(a));
    kept
}

impl MonomialIdeal {
    /// Build an ideal from any generating set; the result is minimalized.
    pub fn new(num_vars: usize, gens: Vec<Monomial>) -> Result<Self> {
        if num_vars == 0 {
            return Err(Error::Invalid("an ideal needs at least one variable".into()));
        }
        if let Some(g) = gens.iter().find(|g| g.num_vars() != num_vars) {
            return Err(Error::LengthMismatch {
                expected: num_vars,
                found: g.num_vars(),
            });
        }
        minimalize(gens)
    }

    pub fn from_exponents(gens: &[&[u64]]) -> Result<Self> {
        let num_vars = gens.first().ok_or(Error::EmptyGenerators)?.len();
        Self::new(num_vars, gens.iter().map(|g| Monomial::new(g.to_vec())).collect())
    }

    pub fn unit(num_vars: usize) -> Self {
        Self {
            num_vars,
            generators: vec![Monomial::one(num_vars)],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn generators(&self) -> &[Monomial] {
        &self.generators
    }

    pub fn is_unit(&self) -> bool {
        self.generators.len() == 1 && self.generators[0].is_one()
    }

    pub fn contains(&self, b: &Monomial) -> Result<bool> {
        check_len(self.num_vars, b.num_vars())?;
        Ok(self.contains_unchecked(b))
    }

    #[inline]
    pub(crate) fn contains_unchecked(&self, b: &Monomial) -> bool {
        self.generators.iter().any(|g| g.divides_unchecked(b))
    }

    /// `self ⊆ other`.
    pub fn is_subset_of(&self, other: &MonomialIdeal) -> Result<bool> {
        check_len(self.num_vars, other.num_vars)?;
        Ok(self.generators.iter().all(|g| other.contains_unchecked(g)))
    }

    /// The `m × n` matrix whose columns are the generator exponent vectors.
    pub fn exponent_matrix(&self) -> Result<ExponentMatrix> {
        if self.generators.iter().any(Monomial::is_one) {
            return Err(Error::UnitIdeal);
        }
        let m = self.num_vars;
        let n = self.generators.len();
        let mut data = vec![0u64; m * n];
        for (j, g) in self.generators.iter().enumerate() {
            for (i, &a) in g.exponents().iter().enumerate() {
                data[i * n + j] = a;
            }
        }
        Ok(ExponentMatrix {
            rows: m,
            cols: n,
            data,
        })
    }

    pub fn multiply(&self, other: &MonomialIdeal) -> Result<MonomialIdeal> {
        check_len(self.num_vars, other.num_vars)?;
        let mut gens = Vec::with_capacity(self.generators.len() * other.generators.len());
        for a in &self.generators {
            for b in &other.generators {
                gens.push(a.mul(b)?);
            }
        }
        minimalize(gens)
    }

    /// `I^k`; `I^0` is the unit ideal.
    pub fn ordinary_power(&self, k: u64) -> Result<MonomialIdeal> {
        let mut acc = MonomialIdeal::unit(self.num_vars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.multiply(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.multiply(&base)?;
            }
        }
        Ok(acc)
    }

    /// `I^[q]`: every generator raised to the `q`-th power.
    pub fn bracket_power(&self, q: u64) -> Result<MonomialIdeal> {
        let gens = self
            .generators
            .iter()
            .map(|g| {
                g.exponents()
                    .iter()
                    .map(|&a| a.checked_mul(q).ok_or(Error::Overflow("bracket power")))
                    .collect::<Result<Vec<_>>>()
                    .map(Monomial::new)
            })
            .collect::<Result<Vec<_>>>()?;
        minimalize(gens)
    }

    /// `I^[1/q]`: generator-wise floor division of exponents by `q`.
    pub fn bracket_root(&self, q: u64) -> Result<MonomialIdeal> {
        if q == 0 {
            return Err(Error::Invalid("bracket root by zero".into()));
        }
        let gens = self
            .generators
            .iter()
            .map(|g| Monomial::new(g.exponents().iter().map(|&a| a / q).collect()))
            .collect();
        minimalize(gens)
    }
}

/// Column-major view of the generator exponents: entry `(i, j)` is the
/// exponent of variable `i` in generator `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl ExponentMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn row_max(&self, i: usize) -> u64 {
        self.row(i).iter().copied().max().unwrap_or(0)
    }

    pub fn max_entry(&self) -> u64 {
        self.data.iter().copied().max().unwrap_or(0)
    }

    /// `A·v` in 128-bit arithmetic.
    pub fn apply(&self, v: &[u64]) -> Result<Vec<u128>> {
        check_len(self.cols, v.len())?;
        (0..self.rows)
            .map(|i| {
                self.row(i).iter().zip(v).try_fold(0u128, |acc, (&a, &x)| {
                    (a as u128)
                        .checked_mul(x as u128)
                        .and_then(|t| acc.checked_add(t))
                        .ok_or(Error::Overflow("matrix product"))
                })
            })
            .collect()
    }
}

impl fmt::Display for ExponentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(u64::to_string).collect();
            writeln!(f, "({})", row.join(", "))?;
        }
        Ok(())
    }
}

/// Variable names attached to a polynomial ring.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ring {
    vars: Vec<String>,
}

impl Ring {
    pub fn new(vars: Vec<String>) -> Result<Self> {
        if vars.is_empty() {
            return Err(Error::Invalid("a ring needs at least one variable".into()));
        }
        for (i, v) in vars.iter().enumerate() {
            if !is_ident(v) {
                return Err(Error::Invalid(format!("invalid variable name {v:?}")));
            }
            if vars[..i].contains(v) {
                return Err(Error::Invalid(format!("duplicate variable {v:?}")));
            }
        }
        Ok(Self { vars })
    }

    /// `x, y, z, w` for up to four variables, otherwise `x1, x2, ...`.
    pub fn standard(num_vars: usize) -> Self {
        let vars = if num_vars <= 4 {
            ["x", "y", "z", "w"][..num_vars]
                .iter()
                .map(|s| s.to_string())
                .collect()
        } else {
            (1..=num_vars).map(|i| format!("x{i}")).collect()
        };
        Self { vars }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn format_monomial(&self, b: &Monomial) -> String {
        let factors: Vec<String> = self
            .vars
            .iter()
            .zip(b.exponents())
            .filter(|(_, &a)| a > 0)
            .map(|(v, &a)| if a == 1 { v.clone() } else { format!("{v}^{a}") })
            .collect();
        if factors.is_empty() {
            "1".to_string()
        } else {
            factors.join("*")
        }
    }

    pub fn format_ideal(&self, ideal: &MonomialIdeal) -> String {
        ideal
            .generators()
            .iter()
            .map(|g| self.format_monomial(g))
            .collect::<Vec<_>>()
            .join(", ")
    }

    pub fn ideal_json(&self, ideal: &MonomialIdeal) -> IdealJson {
        IdealJson {
            vars: self.vars.clone(),
            gens: ideal
                .generators()
                .iter()
                .map(|g| g.exponents().to_vec())
                .collect(),
        }
    }
}

/// The JSON form `{"vars":[...],"gens":[[...],...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealJson {
    pub vars: Vec<String>,
    pub gens: Vec<Vec<u64>>,
}

impl IdealJson {
    pub fn into_ideal(self) -> Result<ParsedIdeal> {
        let ring = Ring::new(self.vars)?;
        let gens = self.gens.into_iter().map(Monomial::new).collect::<Vec<_>>();
        if gens.is_empty() {
            return Err(Error::EmptyGenerators);
        }
        let ideal = MonomialIdeal::new(ring.num_vars(), gens)?;
        Ok(ParsedIdeal { ring, ideal })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedIdeal {
    pub ring: Ring,
    pub ideal: MonomialIdeal,
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parse an ideal from `"x^2*y^2, y^3*z^3"` or from its JSON form.
///
/// Without an explicit variable list, variables are numbered in order of
/// first appearance.
pub fn parse_ideal(text: &str, vars: Option<&[String]>) -> Result<ParsedIdeal> {
    if text.trim_start().starts_with('{') {
        let json: IdealJson = serde_json::from_str(text)
            .map_err(|e| Error::Syntax {
                pos: e.column().saturating_sub(1),
                msg: e.to_string(),
            })?;
        if let Some(vs) = vars {
            if vs != json.vars.as_slice() {
                return Err(Error::Invalid(
                    "explicit variable list disagrees with the JSON vars".into(),
                ));
            }
        }
        return json.into_ideal();
    }
    let mut parser = Parser::new(text, vars.map(|v| v.to_vec()));
    let terms = parser.ideal()?;
    let ring = Ring::new(parser.vars.clone()).map_err(|_| Error::Syntax {
        pos: 0,
        msg: "no variables given".into(),
    })?;
    let m = ring.num_vars();
    let gens = terms
        .into_iter()
        .map(|t| {
            let mut e = t;
            e.resize(m, 0);
            Monomial::new(e)
        })
        .collect();
    let ideal = MonomialIdeal::new(m, gens)?;
    Ok(ParsedIdeal { ring, ideal })
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: Vec<String>,
    fixed_vars: bool,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, vars: Option<Vec<String>>) -> Self {
        let fixed_vars = vars.is_some();
        Self {
            src: text.as_bytes(),
            pos: 0,
            vars: vars.unwrap_or_default(),
            fixed_vars,
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn ideal(&mut self) -> Result<Vec<Vec<u64>>> {
        let mut terms = Vec::new();
        self.skip_ws();
        if self.peek().is_none() {
            return Err(Error::EmptyGenerators);
        }
        loop {
            terms.push(self.monomial()?);
            self.skip_ws();
            match self.peek() {
                None => break,
                Some(b',') => {
                    self.pos += 1;
                    self.skip_ws();
                    if self.peek().is_none() {
                        return self.err("expected a monomial after ','");
                    }
                }
                Some(c) => return self.err(format!("unexpected character {:?}", c as char)),
            }
        }
        Ok(terms)
    }

    fn monomial(&mut self) -> Result<Vec<u64>> {
        let mut exps: Vec<u64> = vec![0; self.vars.len()];
        self.factor(&mut exps)?;
        loop {
            let before = self.pos;
            self.skip_ws();
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    self.skip_ws();
                    self.factor(&mut exps)?;
                }
                Some(c) if c.is_ascii_alphabetic() || c == b'_' || c.is_ascii_digit() => {
                    if self.pos == before {
                        return self.err("expected '*' or whitespace between factors");
                    }
                    self.factor(&mut exps)?;
                }
                _ => return Ok(exps),
            }
        }
    }

    fn factor(&mut self, exps: &mut Vec<u64>) -> Result<()> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                let n = self.uint()?;
                if n != 1 {
                    self.pos = start;
                    return self.err("only the coefficient 1 is allowed");
                }
                Ok(())
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos])
                    .expect("ascii")
                    .to_string();
                let idx = match self.vars.iter().position(|v| *v == name) {
                    Some(i) => i,
                    None if self.fixed_vars => {
                        self.pos = start;
                        return self.err(format!("unknown variable {name:?}"));
                    }
                    None => {
                        self.vars.push(name);
                        self.vars.len() - 1
                    }
                };
                if exps.len() < self.vars.len() {
                    exps.resize(self.vars.len(), 0);
                }
                let mut power = 1u64;
                let after_name = self.pos;
                self.skip_ws();
                if self.peek() != Some(b'^') {
                    self.pos = after_name;
                } else {
                    self.pos += 1;
                    self.skip_ws();
                    if self.peek() == Some(b'-') {
                        return Err(Error::NegativeExponent { pos: self.pos });
                    }
                    power = self.uint()?;
                }
                exps[idx] = exps[idx]
                    .checked_add(power)
                    .ok_or(Error::Overflow("parsed exponent"))?;
                Ok(())
            }
            Some(c) => self.err(format!("expected a variable, found {:?}", c as char)),
            None => self.err("expected a variable, found end of input"),
        }
    }

    fn uint(&mut self) -> Result<u64> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected an unsigned integer");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        s.parse().map_err(|_| Error::Syntax {
            pos: start,
            msg: format!("exponent {s} is too large"),
        })
    }
}
