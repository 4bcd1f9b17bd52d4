//! Critical exponents `λ_b(I)` by digit-by-digit refinement.
//!
//! The base-`p` digits of a witness are chosen one column at a time. Each
//! candidate carries an integer remainder vector, `r_0 = b + 1` and
//! `r_i = p·r_{i-1} - A·d_i` for digit column `d_i`; the next column must
//! satisfy `A·d ≺ p·r` with `|d| < p`, and only columns of maximal norm are
//! kept. Every surviving candidate at a level has the same norm, so the
//! running value `λ_e` is a single digit string.
//!
//! A remainder entry that reaches `Ω = (p-1)·max(A)` can never constrain a
//! later column again, so entries are clamped to `Ω`. The state space is then
//! finite and every candidate eventually revisits a remainder. When that
//! happens the digits between the two visits repeat forever, which yields an
//! eventually periodic witness and an exact rational norm. `λ_b` is the
//! largest such norm.
//!
//! `power_at` evaluates `I^[t]` for `t < 1` by testing `t < λ_b` on every
//! `b` in the box `0 <= b_i <= max_j A[i][j] - 1`: a generator of `I^[k/q]`
//! with `k < q` has exponents `floor((A·u)_i / q) < max_j A[i][j]`.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};
use rayon::prelude::*;
use serde_json::json;

use crate::base_p::{check_prime, expand, trunc, BasePExpansion, DigitVector, PAdicRational, Representation};
use crate::error::{Error, Result};
use crate::ideal::{minimal_elements, ExponentMatrix, Monomial, MonomialIdeal};
use crate::limits::{Limits, Meter};
use crate::oracle::Oracle;

/// The remainder cap `(p-1)·max(A)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Omega(pub u128);

impl Omega {
    pub fn new(a: &ExponentMatrix, p: u64) -> Self {
        Omega((p as u128 - 1) * a.max_entry() as u128)
    }

    pub fn value(self) -> u128 {
        self.0
    }
}

/// All `v ∈ N^n` of maximal norm subject to `A·v ≺ p·r` and `|v| <= p-1`,
/// in ascending lexicographic order.
pub fn max_digit_vectors(a: &ExponentMatrix, r: &[u128], p: u64) -> Vec<Vec<u64>> {
    max_digit_vectors_metered(a, r, p, &mut Limits::default().with_max_states(u64::MAX).meter())
        .expect("unbounded meter")
}

fn max_digit_vectors_metered(
    a: &ExponentMatrix,
    r: &[u128],
    p: u64,
    meter: &mut Meter,
) -> Result<Vec<Vec<u64>>> {
    debug_assert!(r.iter().all(|&x| x >= 1));
    let n = a.cols();
    let slack: Vec<u128> = r
        .iter()
        .map(|&x| x.checked_mul(p as u128).map(|y| y - 1))
        .collect::<Option<_>>()
        .ok_or(Error::Overflow("p·r"))?;

    struct Search<'a> {
        a: &'a ExponentMatrix,
        cap: u64,
        best: u64,
        found: Vec<Vec<u64>>,
        cur: Vec<u64>,
    }

    fn upper(a: &ExponentMatrix, slack: &[u128], j: usize, cap: u64) -> u64 {
        let mut ub = cap as u128;
        for (i, &s) in slack.iter().enumerate() {
            let aij = a.get(i, j) as u128;
            if aij > 0 {
                ub = ub.min(s / aij);
            }
        }
        ub as u64
    }

    fn go(s: &mut Search, j: usize, norm: u64, slack: &mut [u128], meter: &mut Meter) -> Result<()> {
        meter.tick(1)?;
        let n = s.cur.len();
        if j == n {
            match norm.cmp(&s.best) {
                Ordering::Greater => {
                    s.best = norm;
                    s.found.clear();
                    s.found.push(s.cur.clone());
                }
                Ordering::Equal => s.found.push(s.cur.clone()),
                Ordering::Less => {}
            }
            return Ok(());
        }
        let room = s.cap - norm;
        let rest: u64 = (j + 1..n)
            .map(|jj| upper(s.a, slack, jj, room))
            .fold(0u64, |acc, x| acc.saturating_add(x));
        let hi = upper(s.a, slack, j, room);
        for x in (0..=hi).rev() {
            if norm + x + rest.min(room - x) < s.best {
                break;
            }
            s.cur[j] = x;
            for (i, sl) in slack.iter_mut().enumerate() {
                *sl -= s.a.get(i, j) as u128 * x as u128;
            }
            let res = go(s, j + 1, norm + x, slack, meter);
            for (i, sl) in slack.iter_mut().enumerate() {
                *sl += s.a.get(i, j) as u128 * x as u128;
            }
            res?;
        }
        s.cur[j] = 0;
        Ok(())
    }

    let mut search = Search {
        a,
        cap: p - 1,
        best: 0,
        found: Vec::new(),
        cur: vec![0; n],
    };
    let mut slack = slack;
    go(&mut search, 0, 0, &mut slack, meter)?;
    let mut found = search.found;
    found.sort();
    found.dedup();
    Ok(found)
}

/// One node of the candidate tree: digit column `level` and the remainder
/// `r_level` after it. The root (level 0) holds `r_0` and no digits.
#[derive(Debug)]
struct Node {
    level: usize,
    column: Vec<u64>,
    remainder: Vec<u128>,
    parent: Option<Rc<Node>>,
}

impl Node {
    fn ancestors(&self) -> impl Iterator<Item = &Node> {
        std::iter::successors(self.parent.as_deref(), |n| n.parent.as_deref())
    }

    /// Digit columns `1..=level`.
    fn columns(&self) -> Vec<Vec<u64>> {
        let mut cols: Vec<Vec<u64>> = std::iter::once(self)
            .chain(self.ancestors())
            .filter(|n| n.level > 0)
            .map(|n| n.column.clone())
            .collect();
        cols.reverse();
        cols
    }

    /// Remainders `r_0..=r_level`.
    fn history(&self) -> Vec<Vec<u128>> {
        let mut h: Vec<Vec<u128>> = std::iter::once(self)
            .chain(self.ancestors())
            .map(|n| n.remainder.clone())
            .collect();
        h.reverse();
        h
    }

    /// Level of an earlier node with the same remainder.
    fn repeated_at(&self) -> Option<usize> {
        self.ancestors()
            .find(|n| n.remainder == self.remainder)
            .map(|n| n.level)
    }
}

/// A witness in progress: `digits[j]` are the base-`p` digits of
/// coordinate `j`, `history` the remainders `r_0..r_e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub digits: Vec<Vec<u64>>,
    pub norm: PAdicRational,
    pub history: Vec<Vec<u128>>,
}

impl Candidate {
    fn from_node(node: &Node, n: usize, p: u64) -> Self {
        let cols = node.columns();
        let digits: Vec<Vec<u64>> = (0..n).map(|j| cols.iter().map(|c| c[j]).collect()).collect();
        let bp = BigUint::from(p);
        let k = cols.iter().fold(BigUint::zero(), |acc, c| {
            acc * &bp + BigUint::from(c.iter().sum::<u64>())
        });
        Candidate {
            digits,
            norm: PAdicRational::new(p, k, cols.len() as u32),
            history: node.history(),
        }
    }
}

/// Options for the refinement process.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[derive(Default)]
pub struct StepperOptions {
    /// Clamp remainder entries to `Ω`.
    pub cap: bool,
    /// Merge same-level candidates with equal remainders.
    pub dedup: bool,
}


#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepLevel {
    pub e: usize,
    /// `λ_e` as `numerator / p^e`, not reduced.
    pub numerator: BigUint,
    pub denominator: BigUint,
    pub candidates: Vec<Candidate>,
}

impl StepLevel {
    pub fn lambda_e(&self) -> BigRational {
        BigRational::new(self.numerator.clone().into(), self.denominator.clone().into())
    }
}

/// Shared per-level expansion: children of every node, pruned to the
/// maximal column norm. Returns the children and that norm.
fn expand_level(
    nodes: &[Rc<Node>],
    a: &ExponentMatrix,
    p: u64,
    cap: Option<u128>,
    dedup: bool,
    meter: &mut Meter,
) -> Result<(Vec<Rc<Node>>, u64)> {
    let mut children: Vec<(u64, Rc<Node>)> = Vec::new();
    let mut best = 0u64;
    for node in nodes {
        for v in max_digit_vectors_metered(a, &node.remainder, p, meter)? {
            let norm: u64 = v.iter().sum();
            if norm < best {
                continue;
            }
            best = norm;
            let av = a.apply(&v)?;
            let remainder = node
                .remainder
                .iter()
                .zip(&av)
                .map(|(&r, &x)| {
                    let next = r
                        .checked_mul(p as u128)
                        .ok_or(Error::Overflow("remainder"))?
                        - x;
                    Ok(match cap {
                        Some(c) => next.min(c),
                        None => next,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            meter.tick(1)?;
            children.push((
                norm,
                Rc::new(Node {
                    level: node.level + 1,
                    column: v,
                    remainder,
                    parent: Some(Rc::clone(node)),
                }),
            ));
        }
    }
    let mut kept: Vec<Rc<Node>> = children
        .into_iter()
        .filter(|(norm, _)| *norm == best)
        .map(|(_, node)| node)
        .collect();
    if dedup {
        let mut seen = std::collections::HashSet::new();
        kept.retain(|node| seen.insert(node.remainder.clone()));
    }
    Ok((kept, best))
}

/// The unbounded refinement process: level `e` holds every `e`-witness of
/// maximal norm. Never terminates on its own.
pub struct Stepper {
    matrix: ExponentMatrix,
    p: u64,
    cap: Option<u128>,
    dedup: bool,
    nodes: Vec<Rc<Node>>,
    numerator: BigUint,
    denominator: BigUint,
    meter: Meter,
}

impl Stepper {
    pub fn new(ideal: &MonomialIdeal, b: &Monomial, p: u64, options: StepperOptions) -> Result<Self> {
        Self::with_limits(ideal, b, p, options, Limits::default())
    }

    pub fn with_limits(
        ideal: &MonomialIdeal,
        b: &Monomial,
        p: u64,
        options: StepperOptions,
        limits: Limits,
    ) -> Result<Self> {
        check_prime(p, &limits)?;
        let matrix = ideal.exponent_matrix()?;
        check_b(ideal, b)?;
        let omega = Omega::new(&matrix, p);
        let cap = options.cap.then_some(omega.0);
        let root = Node {
            level: 0,
            column: Vec::new(),
            remainder: initial_remainder(b, cap),
            parent: None,
        };
        Ok(Self {
            matrix,
            p,
            cap,
            dedup: options.dedup,
            nodes: vec![Rc::new(root)],
            numerator: BigUint::zero(),
            denominator: BigUint::one(),
            meter: limits.meter(),
        })
    }

    fn step(&mut self) -> Result<StepLevel> {
        let (nodes, best) =
            expand_level(&self.nodes, &self.matrix, self.p, self.cap, self.dedup, &mut self.meter)?;
        self.nodes = nodes;
        self.numerator = &self.numerator * self.p + best;
        self.denominator *= self.p;
        let n = self.matrix.cols();
        Ok(StepLevel {
            e: self.nodes[0].level,
            numerator: self.numerator.clone(),
            denominator: self.denominator.clone(),
            candidates: self
                .nodes
                .iter()
                .map(|node| Candidate::from_node(node, n, self.p))
                .collect(),
        })
    }
}

impl Iterator for Stepper {
    type Item = Result<StepLevel>;

    fn next(&mut self) -> Option<Self::Item> {
        Some(self.step())
    }
}

fn check_b(ideal: &MonomialIdeal, b: &Monomial) -> Result<()> {
    if b.num_vars() != ideal.num_vars() {
        return Err(Error::LengthMismatch {
            expected: ideal.num_vars(),
            found: b.num_vars(),
        });
    }
    if ideal.contains_unchecked(b) {
        return Err(Error::MonomialInIdeal(format!("{:?}", b.exponents())));
    }
    Ok(())
}

fn initial_remainder(b: &Monomial, cap: Option<u128>) -> Vec<u128> {
    b.exponents()
        .iter()
        .map(|&x| {
            let r = x as u128 + 1;
            cap.map_or(r, |c| r.min(c))
        })
        .collect()
}

/// One line of the per-level log.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceLevel {
    pub e: usize,
    pub numerator: BigUint,
    pub denominator: BigUint,
    pub candidates: usize,
    pub cycles: usize,
}

impl fmt::Display for TraceLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "e={} lambda_e={}/{} candidates={} cycles={}",
            self.e, self.numerator, self.denominator, self.candidates, self.cycles
        )
    }
}

/// An exact critical exponent with a periodic witness family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriticalResult {
    pub p: u64,
    pub lambda: BigRational,
    /// Canonical base-`p` expansion of `lambda`.
    pub expansion: BasePExpansion,
    /// One eventually periodic expansion per generator; its digits add
    /// without carries and their sum is `lambda`.
    pub witness: DigitVector,
    /// Number of generator subtractions applied before the computation.
    pub reduced_by: u64,
    pub trace: Vec<TraceLevel>,
}

impl CriticalResult {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "p": self.p,
            "lambda": fmt_rational(&self.lambda),
            "expansion": self.expansion.to_string(),
            "witness": self.witness.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "reduced_by": self.reduced_by,
            "trace": self.trace.iter().map(|t| json!({
                "e": t.e,
                "lambda_e": format!("{}/{}", t.numerator, t.denominator),
                "candidates": t.candidates,
                "cycles": t.cycles,
            })).collect::<Vec<_>>(),
        })
    }
}

/// `num/den` in lowest terms, `1/1` for one.
pub fn fmt_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// A retired candidate: digit columns `1..=level`, repeating from
/// column `start + 1`.
struct Periodic {
    columns: Vec<Vec<u64>>,
    start: usize,
    norm: BigRational,
}

impl Periodic {
    fn from_node(node: &Node, start: usize, p: u64) -> Self {
        let columns = node.columns();
        let sums: Vec<u64> = columns.iter().map(|c| c.iter().sum()).collect();
        let norm = BasePExpansion {
            p,
            int_part: BigUint::zero(),
            preperiod: sums[..start].to_vec(),
            period: sums[start..].to_vec(),
        }
        .to_rational();
        Periodic { columns, start, norm }
    }

    fn witness(&self, n: usize, p: u64) -> DigitVector {
        (0..n)
            .map(|j| {
                simplify(BasePExpansion {
                    p,
                    int_part: BigUint::zero(),
                    preperiod: self.columns[..self.start].iter().map(|c| c[j]).collect(),
                    period: self.columns[self.start..].iter().map(|c| c[j]).collect(),
                })
            })
            .collect()
    }
}

/// Shortest preperiod and period describing the same digit stream.
fn simplify(mut x: BasePExpansion) -> BasePExpansion {
    let len = x.period.len();
    if let Some(d) = (1..=len).find(|&d| len.is_multiple_of(d) && (d..len).all(|i| x.period[i] == x.period[i - d])) {
        x.period.truncate(d);
    }
    while let Some(&last) = x.preperiod.last() {
        if last != *x.period.last().expect("nonempty period") {
            break;
        }
        x.preperiod.pop();
        x.period.rotate_right(1);
    }
    x
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverOptions {
    /// Subtract dividing generators when `x^b ∈ I`.
    pub reduce: bool,
    /// Merge same-level candidates with equal remainders.
    pub dedup: bool,
    /// Record the per-level log.
    pub trace: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            reduce: false,
            dedup: true,
            trace: false,
        }
    }
}

/// Generator subtractions that bring `x^b` out of `I`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkodaReduction {
    /// End of the path that always subtracts the first dividing generator.
    pub reduced: Monomial,
    pub shift: u64,
    /// Minimal generators dividing `x^b` itself.
    pub branches: Vec<Monomial>,
    /// Every reachable `(b', shift)` with `x^b' ∉ I`, sorted.
    pub leaves: Vec<(Monomial, u64)>,
}

/// Repeatedly subtract dividing generators while `x^b ∈ I`.
pub fn skoda_reduce(ideal: &MonomialIdeal, b: &Monomial) -> Result<SkodaReduction> {
    if b.num_vars() != ideal.num_vars() {
        return Err(Error::LengthMismatch {
            expected: ideal.num_vars(),
            found: b.num_vars(),
        });
    }
    if ideal.generators().iter().any(Monomial::is_one) {
        return Err(Error::UnitIdeal);
    }
    let dividing = |x: &Monomial| -> Vec<Monomial> {
        ideal
            .generators()
            .iter()
            .filter(|g| g.divides_unchecked(x))
            .cloned()
            .collect()
    };
    let branches = dividing(b);

    let mut reduced = b.clone();
    let mut shift = 0;
    while let Some(g) = dividing(&reduced).into_iter().next() {
        reduced = reduced.quotient(&g).expect("generator divides");
        shift += 1;
    }

    let mut leaves = std::collections::BTreeSet::new();
    let mut seen = std::collections::HashSet::new();
    let mut stack = vec![(b.clone(), 0u64)];
    while let Some((x, s)) = stack.pop() {
        if !seen.insert((x.clone(), s)) {
            continue;
        }
        let gens = dividing(&x);
        if gens.is_empty() {
            leaves.insert((x, s));
            continue;
        }
        for g in gens {
            stack.push((x.quotient(&g).expect("generator divides"), s + 1));
        }
    }
    Ok(SkodaReduction {
        reduced,
        shift,
        branches,
        leaves: leaves.into_iter().collect(),
    })
}

/// Computes critical exponents of one ideal in one characteristic.
#[derive(Debug, Clone)]
pub struct CriticalSolver {
    ideal: MonomialIdeal,
    matrix: ExponentMatrix,
    p: u64,
    omega: Omega,
    options: SolverOptions,
    limits: Limits,
}

impl CriticalSolver {
    pub fn new(ideal: &MonomialIdeal, p: u64) -> Result<Self> {
        Self::with_options(ideal, p, SolverOptions::default(), Limits::default())
    }

    pub fn with_options(
        ideal: &MonomialIdeal,
        p: u64,
        options: SolverOptions,
        limits: Limits,
    ) -> Result<Self> {
        check_prime(p, &limits)?;
        let matrix = ideal.exponent_matrix()?;
        let omega = Omega::new(&matrix, p);
        Ok(Self {
            ideal: ideal.clone(),
            matrix,
            p,
            omega,
            options,
            limits,
        })
    }

    pub fn ideal(&self) -> &MonomialIdeal {
        &self.ideal
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn omega(&self) -> Omega {
        self.omega
    }

    /// Upper bound `Ω^m + 1` on the number of levels.
    pub fn level_bound(&self) -> u128 {
        self.omega
            .0
            .checked_pow(self.matrix.rows() as u32)
            .map_or(u128::MAX, |x| x.saturating_add(1))
    }

    /// `λ_b(I)`. With `reduce`, monomials inside `I` are first moved out by
    /// subtracting dividing generators, and the largest branch value wins.
    pub fn lambda_b(&self, b: &Monomial) -> Result<CriticalResult> {
        if b.num_vars() != self.ideal.num_vars() {
            return Err(Error::LengthMismatch {
                expected: self.ideal.num_vars(),
                found: b.num_vars(),
            });
        }
        if !self.ideal.contains_unchecked(b) {
            return self.solve(b);
        }
        if !self.options.reduce {
            return Err(Error::MonomialInIdeal(format!("{:?}", b.exponents())));
        }
        let reduction = skoda_reduce(&self.ideal, b)?;
        let mut memo: HashMap<Monomial, CriticalResult> = HashMap::new();
        let mut best: Option<CriticalResult> = None;
        for (leaf, shift) in &reduction.leaves {
            if !memo.contains_key(leaf) {
                memo.insert(leaf.clone(), self.solve(leaf)?);
            }
            let base = &memo[leaf];
            let lambda = &base.lambda + BigRational::from_integer((*shift).into());
            let better = match &best {
                None => true,
                Some(cur) => lambda > cur.lambda || (lambda == cur.lambda && *shift > cur.reduced_by),
            };
            if better {
                let mut r = base.clone();
                r.expansion = expand(&lambda, self.p, Representation::Canonical)?;
                r.lambda = lambda;
                r.reduced_by = *shift;
                best = Some(r);
            }
        }
        Ok(best.expect("reduction has at least one leaf"))
    }

    /// `lce(I) = λ_0(I)`.
    pub fn lce(&self) -> Result<CriticalResult> {
        self.solve(&Monomial::one(self.ideal.num_vars()))
    }

    fn solve(&self, b: &Monomial) -> Result<CriticalResult> {
        check_b(&self.ideal, b)?;
        let mut meter = self.limits.meter();
        let cap = Some(self.omega.0);
        let mut nodes = vec![Rc::new(Node {
            level: 0,
            column: Vec::new(),
            remainder: initial_remainder(b, cap),
            parent: None,
        })];
        let mut retired: Vec<Periodic> = Vec::new();
        let mut trace = Vec::new();
        let mut numerator = BigUint::zero();
        let mut denominator = BigUint::one();
        let bound = self.level_bound();
        let mut e = 0usize;
        loop {
            e += 1;
            if e as u128 > bound {
                return Err(Error::Invalid(format!(
                    "level {e} exceeds the termination bound {bound}"
                )));
            }
            let mut live = Vec::with_capacity(nodes.len());
            let mut cycles = 0;
            for node in nodes {
                match node.repeated_at() {
                    Some(c) => {
                        retired.push(Periodic::from_node(&node, c, self.p));
                        cycles += 1;
                    }
                    None => live.push(node),
                }
            }
            let (next, best) =
                expand_level(&live, &self.matrix, self.p, cap, self.options.dedup, &mut meter)?;
            denominator *= self.p;
            if next.is_empty() {
                if self.options.trace {
                    trace.push(TraceLevel {
                        e,
                        numerator: BigUint::zero(),
                        denominator: denominator.clone(),
                        candidates: 0,
                        cycles,
                    });
                }
                break;
            }
            numerator = &numerator * self.p + best;
            if self.options.trace {
                trace.push(TraceLevel {
                    e,
                    numerator: numerator.clone(),
                    denominator: denominator.clone(),
                    candidates: next.len(),
                    cycles,
                });
            }
            nodes = next;
        }

        let n = self.matrix.cols();
        let winner = retired
            .iter()
            .max_by(|x, y| {
                x.norm
                    .cmp(&y.norm)
                    .then_with(|| (&y.columns, y.start).cmp(&(&x.columns, x.start)))
            })
            .expect("every candidate path ends in a cycle");
        let lambda = winner.norm.clone();
        if let Some(last) = trace.last_mut() {
            if last.candidates == 0 {
                last.numerator = trunc(&lambda, self.p, last.e as u32)?
                    .to_rational()
                    .mul_pow(self.p, last.e);
            }
        }
        Ok(CriticalResult {
            p: self.p,
            expansion: expand(&lambda, self.p, Representation::Canonical)?,
            witness: winner.witness(n, self.p),
            lambda,
            reduced_by: 0,
            trace,
        })
    }

    /// The box `0 <= b_i <= max(row_max(i) - 1, 0)`.
    pub fn candidate_box(&self) -> Vec<Monomial> {
        let bounds: Vec<u64> = (0..self.matrix.rows())
            .map(|i| self.matrix.row_max(i).saturating_sub(1))
            .collect();
        let mut out = Vec::new();
        let mut cur = vec![0u64; bounds.len()];
        loop {
            out.push(Monomial::new(cur.clone()));
            let mut i = 0;
            loop {
                if i == cur.len() {
                    return out;
                }
                if cur[i] < bounds[i] {
                    cur[i] += 1;
                    break;
                }
                cur[i] = 0;
                i += 1;
            }
        }
    }

    /// `λ_b` for every box point outside `I`; points inside `I` map to `None`.
    pub fn box_lambdas(&self) -> Result<Vec<(Monomial, Option<BigRational>)>> {
        let cells = self.candidate_box();
        let size = cells.len() as u64;
        if size > self.limits.max_states {
            return Err(Error::BudgetExceeded(self.limits.max_states));
        }
        let quiet = Self {
            options: SolverOptions {
                trace: false,
                ..self.options
            },
            ..self.clone()
        };
        cells
            .into_par_iter()
            .map(|b| {
                if quiet.ideal.contains_unchecked(&b) {
                    Ok((b, None))
                } else {
                    quiet.solve(&b).map(|r| (b, Some(r.lambda)))
                }
            })
            .collect()
    }

    /// `I^[t]` for rational `t ∈ [0, 1)`.
    pub fn power_at(&self, t: &BigRational) -> Result<MonomialIdeal> {
        check_t(t)?;
        ideal_below(&self.box_lambdas()?, t, self.ideal.num_vars())
    }

    /// Jumps of `t ↦ I^[t]` on `(0, 1]` and the constant value on each
    /// interval, cross-checked against the oracle scan at depth
    /// `check_depth` (pass 0 to skip).
    pub fn jumps(&self, check_depth: u32) -> Result<JumpTable> {
        let lambdas = self.box_lambdas()?;
        let mut jumps: Vec<BigRational> = lambdas
            .iter()
            .filter_map(|(_, l)| l.clone())
            .filter(|l| *l <= BigRational::one())
            .collect();
        jumps.sort();
        jumps.dedup();
        let mut starts = vec![BigRational::zero()];
        starts.extend(jumps.iter().filter(|j| **j < BigRational::one()).cloned());
        let mut intervals = Vec::with_capacity(starts.len());
        for (i, start) in starts.iter().enumerate() {
            let end = starts.get(i + 1).cloned().unwrap_or_else(BigRational::one);
            intervals.push(JumpInterval {
                ideal: ideal_below(&lambdas, start, self.ideal.num_vars())?,
                start: start.clone(),
                end,
            });
        }
        let table = JumpTable {
            jumps,
            intervals,
            checked_depth: check_depth,
        };
        if check_depth > 0 {
            let oracle = Oracle::with_limits(&self.ideal, self.p, self.limits)?;
            let q = BigRational::from_integer(num_bigint::BigInt::from(self.p).pow(check_depth));
            for run in oracle.scan(check_depth)? {
                // the run holds the sample points start, start + 1/q, ..., end - 1/q
                let first = run.start.to_rational();
                let last = run.end.to_rational() - q.recip();
                for iv in &table.intervals {
                    let overlaps = iv.start <= last && first < iv.end;
                    if overlaps && iv.ideal != run.ideal {
                        return Err(Error::CrossCheck(format!(
                            "interval [{}, {}) disagrees with the scan on [{}, {})",
                            fmt_rational(&iv.start),
                            fmt_rational(&iv.end),
                            run.start,
                            run.end
                        )));
                    }
                }
            }
        }
        Ok(table)
    }
}

trait MulPow {
    fn mul_pow(self, p: u64, e: usize) -> BigUint;
}

impl MulPow for BigRational {
    /// `self · p^e`, which must be an integer.
    fn mul_pow(self, p: u64, e: usize) -> BigUint {
        let scaled = self * BigRational::from_integer(num_bigint::BigInt::from(p).pow(e));
        scaled.to_integer().magnitude().clone()
    }
}

fn check_t(t: &BigRational) -> Result<()> {
    if t.is_negative() || *t >= BigRational::one() {
        return Err(Error::OutOfRange {
            value: fmt_rational(t),
            range: "[0, 1)",
        });
    }
    Ok(())
}

fn ideal_below(
    lambdas: &[(Monomial, Option<BigRational>)],
    t: &BigRational,
    num_vars: usize,
) -> Result<MonomialIdeal> {
    let gens: Vec<Monomial> = lambdas
        .iter()
        .filter(|(_, l)| l.as_ref().is_none_or(|l| t < l))
        .map(|(b, _)| b.clone())
        .collect();
    if gens.is_empty() {
        return Err(Error::Invalid(format!(
            "no box monomial lies in the power at t = {}",
            fmt_rational(t)
        )));
    }
    MonomialIdeal::new(num_vars, minimal_elements(gens))
}

/// `I^[t] = ideal` for `t ∈ [start, end)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JumpInterval {
    pub start: BigRational,
    pub end: BigRational,
    pub ideal: MonomialIdeal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JumpTable {
    /// Critical exponents in `(0, 1]`, ascending.
    pub jumps: Vec<BigRational>,
    /// Consecutive intervals covering `[0, 1)`.
    pub intervals: Vec<JumpInterval>,
    pub checked_depth: u32,
}

impl JumpTable {
    pub fn ideal_at(&self, t: &BigRational) -> Option<&MonomialIdeal> {
        self.intervals
            .iter()
            .find(|iv| iv.start <= *t && *t < iv.end)
            .map(|iv| &iv.ideal)
    }
}

/// Deepest scan with `p^e <= 4096`, at most 4.
pub fn default_check_depth(p: u64) -> u32 {
    (0..=4u32)
        .rev()
        .find(|&e| (p as u128).pow(e) <= 4096)
        .unwrap_or(0)
}

pub fn lambda_b(ideal: &MonomialIdeal, b: &Monomial, p: u64) -> Result<CriticalResult> {
    CriticalSolver::new(ideal, p)?.lambda_b(b)
}

pub fn lce(ideal: &MonomialIdeal, p: u64) -> Result<CriticalResult> {
    CriticalSolver::new(ideal, p)?.lce()
}

pub fn power_at(ideal: &MonomialIdeal, t: &BigRational, p: u64) -> Result<MonomialIdeal> {
    check_t(t)?;
    if ideal.is_unit() {
        return Ok(ideal.clone());
    }
    CriticalSolver::new(ideal, p)?.power_at(t)
}

pub fn jumps_unit_interval(ideal: &MonomialIdeal, p: u64) -> Result<JumpTable> {
    CriticalSolver::new(ideal, p)?.jumps(default_check_depth(p))
}
