//! Sierpinski simplices and pictures of the `q × q` subdivision.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::base_p::{admissible, carry_free_canonical, check_prime, PAdicRational};
use crate::error::{Error, Result};
use crate::ideal::{ExponentMatrix, Monomial, MonomialIdeal, Ring};
use crate::limits::Limits;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimplexSpec {
    pub p: u64,
    pub d: usize,
    pub depth: u32,
}

impl SimplexSpec {
    pub fn new(p: u64, d: usize, depth: u32) -> Result<Self> {
        check_prime(p, &Limits::default())?;
        if d == 0 {
            return Err(Error::OutOfRange {
                value: d.to_string(),
                range: "d >= 1",
            });
        }
        if depth == 0 {
            return Err(Error::OutOfRange {
                value: depth.to_string(),
                range: "depth >= 1",
            });
        }
        Ok(Self { p, d, depth })
    }

    /// `binom(p+d-1, d)^depth`.
    pub fn point_count(&self) -> BigUint {
        binomial(self.p + self.d as u64 - 1, self.d as u64).pow(self.depth)
    }
}

fn binomial(n: u64, k: u64) -> BigUint {
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// Points of `{x ∈ N^d : Σx_i < p}`.
fn base_digits(p: u64, d: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut cur = vec![0u64; d];
    fn go(j: usize, room: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if j == cur.len() {
            out.push(cur.clone());
            return;
        }
        for x in 0..=room {
            cur[j] = x;
            go(j + 1, room - x, cur, out);
        }
        cur[j] = 0;
    }
    go(0, p - 1, &mut cur, &mut out);
    out
}

/// The level-`depth` approximation `S_depth = {v + p^-depth w}` of the open
/// simplex, built from `S_0 = {0}`.
pub fn sierpinski_points(spec: &SimplexSpec) -> Result<BTreeSet<Vec<PAdicRational>>> {
    sierpinski_points_with_limits(spec, &Limits::default())
}

pub fn sierpinski_points_with_limits(
    spec: &SimplexSpec,
    limits: &Limits,
) -> Result<BTreeSet<Vec<PAdicRational>>> {
    let total = spec.point_count();
    if total > BigUint::from(limits.max_states) {
        return Err(Error::BudgetExceeded(limits.max_states));
    }
    let p = spec.p;
    let digits = base_digits(p, spec.d);
    let mut numerators: Vec<Vec<BigUint>> = vec![vec![BigUint::zero(); spec.d]];
    for _ in 0..spec.depth {
        numerators = numerators
            .iter()
            .flat_map(|v| {
                digits.iter().map(move |w| {
                    v.iter().zip(w).map(|(x, &y)| x * p + y).collect::<Vec<_>>()
                })
            })
            .collect();
    }
    Ok(numerators
        .into_iter()
        .map(|v| v.into_iter().map(|k| PAdicRational::new(p, k, spec.depth)).collect())
        .collect())
}

/// Membership in the open simplex: terminating expansions adding without
/// carries.
pub fn open_member(v: &[PAdicRational], p: u64) -> Result<bool> {
    let rationals: Vec<BigRational> = v.iter().map(|x| check_base(x, p).map(|_| x.to_rational())).collect::<Result<_>>()?;
    carry_free_canonical(&rationals, p)
}

/// Membership in the closed simplex.
pub fn closed_member(v: &[BigRational], p: u64) -> Result<bool> {
    admissible(v, p)
}

fn check_base(x: &PAdicRational, p: u64) -> Result<()> {
    if x.prime() != p && !x.is_zero() {
        return Err(Error::Invalid(format!("{x} is not written in base {p}")));
    }
    Ok(())
}

/// `log_p binom(p+d-1, d)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dimension {
    pub p: u64,
    /// The integer whose base-`p` logarithm is the dimension.
    pub count: BigUint,
    pub value: f64,
}

pub fn dimension(p: u64, d: usize) -> Result<Dimension> {
    check_prime(p, &Limits::default())?;
    let count = binomial(p + d as u64 - 1, d as u64);
    let value = ln_big(&count) / (p as f64).ln();
    Ok(Dimension { p, count, value })
}

fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits < 1000 {
        return x.to_f64().expect("finite").ln();
    }
    let shift = bits - 64;
    (x >> shift).to_f64().expect("finite").ln() + shift as f64 * std::f64::consts::LN_2
}

/// Drawing constants for [`plot_subdivision`].
pub mod style {
    pub const SIDE: f64 = 480.0;
    pub const MARGIN: f64 = 60.0;
    pub const GRID: &str = "#dddddd";
    pub const AXIS: &str = "#000000";
    pub const CONSTRAINT: &str = "#444444";
    pub const DASH: &str = "6,4";
    /// Multiples beyond the row maximum, drawn only to separate labels.
    pub const DOT: &str = "1,3";
    pub const OVERLAY: &str = "#c0392b";
    pub const FONT: &str = "serif";
    pub const LABEL_SIZE: u32 = 16;
    pub const TICK_SIZE: u32 = 12;
    /// Grid lines are drawn only up to this many per side.
    pub const MAX_GRID: u64 = 64;
}

/// A constraint line `a·u = c`.
#[derive(Debug, Clone)]
struct Line {
    a: [BigRational; 2],
    c: BigRational,
    row: usize,
    multiple: u64,
}

impl Line {
    fn eval(&self, u: &[BigRational; 2]) -> BigRational {
        &self.a[0] * &u[0] + &self.a[1] * &u[1] - &self.c
    }
}

type Point = [BigRational; 2];

/// A convex region of the subdivision and its label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub vertices: Vec<(BigRational, BigRational)>,
    pub sample: (BigRational, BigRational),
    pub label: Monomial,
}

fn int(x: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// Lines `(A·u)_i = c·q` for `c = 1..=max_j A[i][j]`, then, with `all`, the
/// further multiples up to `Σ_j A[i][j]` that still meet the square.
fn constraint_lines(a: &ExponentMatrix, q: u64, all: bool) -> Vec<Line> {
    let mut lines = Vec::new();
    for i in 0..a.rows() {
        let top = if all { a.row(i).iter().sum() } else { a.row_max(i) };
        for c in 1..=top {
            lines.push(Line {
                a: [int(a.get(i, 0)), int(a.get(i, 1))],
                c: int(c * q),
                row: i,
                multiple: c,
            });
        }
    }
    lines
}

fn split(poly: &[Point], line: &Line) -> (Vec<Point>, Vec<Point>) {
    let mut below = Vec::new();
    let mut above = Vec::new();
    let n = poly.len();
    for k in 0..n {
        let cur = &poly[k];
        let next = &poly[(k + 1) % n];
        let s = line.eval(cur);
        let t = line.eval(next);
        if !s.is_positive() {
            below.push(cur.clone());
        }
        if !s.is_negative() {
            above.push(cur.clone());
        }
        if (s.is_negative() && t.is_positive()) || (s.is_positive() && t.is_negative()) {
            let lambda = &s / (&s - &t);
            let x = [
                &cur[0] + &lambda * (&next[0] - &cur[0]),
                &cur[1] + &lambda * (&next[1] - &cur[1]),
            ];
            below.push(x.clone());
            above.push(x);
        }
    }
    (below, above)
}

fn twice_area(poly: &[Point]) -> BigRational {
    let n = poly.len();
    (0..n)
        .map(|k| {
            let (a, b) = (&poly[k], &poly[(k + 1) % n]);
            &a[0] * &b[1] - &b[0] * &a[1]
        })
        .fold(BigRational::zero(), |acc, x| acc + x)
        .abs()
}

/// The regions of `[0,q]^2` cut out by the lines `(A·u)_i = c·q`, each
/// labeled by `x^floor(A·u/q)` at its vertex average.
pub fn subdivision_cells(ideal: &MonomialIdeal, q: u64) -> Result<Vec<Cell>> {
    let a = plot_matrix(ideal, q)?;
    let side = int(q);
    let square = vec![
        [BigRational::zero(), BigRational::zero()],
        [side.clone(), BigRational::zero()],
        [side.clone(), side.clone()],
        [BigRational::zero(), side],
    ];
    let mut polys = vec![square];
    for line in constraint_lines(&a, q, true) {
        polys = polys
            .iter()
            .flat_map(|poly| {
                let (b, c) = split(poly, &line);
                [b, c]
            })
            .filter(|poly| poly.len() >= 3 && !twice_area(poly).is_zero())
            .collect();
    }
    let qr = int(q);
    Ok(polys
        .into_iter()
        .map(|poly| {
            let count = int(poly.len() as u64);
            let sx = poly.iter().fold(BigRational::zero(), |acc, v| acc + &v[0]) / &count;
            let sy = poly.iter().fold(BigRational::zero(), |acc, v| acc + &v[1]) / &count;
            let label = (0..a.rows())
                .map(|i| {
                    let val = (int(a.get(i, 0)) * &sx + int(a.get(i, 1)) * &sy) / &qr;
                    val.floor().to_integer().to_u64().expect("nonnegative")
                })
                .collect();
            Cell {
                vertices: poly.into_iter().map(|[x, y]| (x, y)).collect(),
                sample: (sx, sy),
                label: Monomial::new(label),
            }
        })
        .collect())
}

fn plot_matrix(ideal: &MonomialIdeal, q: u64) -> Result<ExponentMatrix> {
    let a = ideal.exponent_matrix()?;
    if a.cols() != 2 {
        return Err(Error::LengthMismatch {
            expected: 2,
            found: a.cols(),
        });
    }
    if q == 0 {
        return Err(Error::OutOfRange {
            value: "0".into(),
            range: "q >= 1",
        });
    }
    Ok(a)
}

fn px(x: &BigRational, q: u64) -> f64 {
    style::MARGIN + x.to_f64().expect("finite") / q as f64 * style::SIDE
}

fn py(y: &BigRational, q: u64) -> f64 {
    style::MARGIN + style::SIDE - y.to_f64().expect("finite") / q as f64 * style::SIDE
}

/// Clip `a·u = c` to `[0,q]^2`.
fn clip(line: &Line, q: u64) -> Option<(Point, Point)> {
    let side = int(q);
    let corners = [
        [BigRational::zero(), BigRational::zero()],
        [side.clone(), BigRational::zero()],
        [side.clone(), side.clone()],
        [BigRational::zero(), side],
    ];
    let mut hits: Vec<Point> = Vec::new();
    for k in 0..4 {
        let (u, v) = (&corners[k], &corners[(k + 1) % 4]);
        let (s, t) = (line.eval(u), line.eval(v));
        if s.is_zero() {
            hits.push(u.clone());
        } else if (s.is_negative() && t.is_positive()) || (s.is_positive() && t.is_negative()) {
            let l = &s / (&s - &t);
            hits.push([&u[0] + &l * (&v[0] - &u[0]), &u[1] + &l * (&v[1] - &u[1])]);
        }
    }
    hits.dedup();
    if hits.len() >= 2 && hits.first() != hits.last() {
        let last = hits.pop().expect("two points");
        Some((hits.swap_remove(0), last))
    } else {
        None
    }
}

fn fmt_fraction(c: u64, d: u64) -> String {
    let g = num_integer::gcd(c, d);
    match (c / g, d / g) {
        (1, 1) => "q".into(),
        (n, 1) => format!("{n}q"),
        (1, d) => format!("q/{d}"),
        (n, d) => format!("{n}q/{d}"),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlotOptions {
    /// Write `x^floor(A·u/q)` inside each cell.
    pub labels: bool,
    /// Variable names for labels; `x, y, z, w` by default.
    pub ring: Option<Ring>,
    /// Level lines `u1 + u2 = t·q`, `t ∈ [0, 2]`.
    pub overlay: Vec<BigRational>,
}

impl Default for PlotOptions {
    fn default() -> Self {
        Self {
            labels: true,
            ring: None,
            overlay: Vec::new(),
        }
    }
}

/// Renders the subdivision of `[0,q]^2` as SVG, with optional level lines
/// `u1 + u2 = t·q`.
pub fn plot_subdivision(ideal: &MonomialIdeal, q: u64, overlay: &[BigRational]) -> Result<String> {
    plot_subdivision_with(
        ideal,
        q,
        &PlotOptions {
            overlay: overlay.to_vec(),
            ..Default::default()
        },
    )
}

pub fn plot_subdivision_with(ideal: &MonomialIdeal, q: u64, options: &PlotOptions) -> Result<String> {
    let overlay = &options.overlay;
    let a = plot_matrix(ideal, q)?;
    let cells = subdivision_cells(ideal, q)?;
    let ring = match &options.ring {
        Some(r) if r.num_vars() == ideal.num_vars() => r.clone(),
        Some(r) => {
            return Err(Error::LengthMismatch {
                expected: ideal.num_vars(),
                found: r.num_vars(),
            })
        }
        None => Ring::standard(ideal.num_vars()),
    };
    let total = style::SIDE + 2.0 * style::MARGIN;
    let mut svg = String::new();
    let w = &mut svg;
    let _ = writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{total}" height="{total}" viewBox="0 0 {total} {total}" font-family="{}">"#,
        style::FONT
    );
    let _ = writeln!(w, r#"<rect width="{total}" height="{total}" fill="white"/>"#);

    let _ = writeln!(w, r#"<g stroke="{}" stroke-width="0.5">"#, style::GRID);
    if q <= style::MAX_GRID {
        for k in 0..=q {
            let x = px(&int(k), q);
            let y = py(&int(k), q);
            let _ = writeln!(
                w,
                r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}"/>"#,
                py(&int(0), q),
                py(&int(q), q)
            );
            let _ = writeln!(
                w,
                r#"<line x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}"/>"#,
                px(&int(0), q),
                px(&int(q), q)
            );
        }
    }
    let _ = writeln!(w, "</g>");

    let origin = (px(&int(0), q), py(&int(0), q));
    let end = style::MARGIN + style::SIDE + 20.0;
    let _ = writeln!(w, r#"<g stroke="{}" stroke-width="1.5">"#, style::AXIS);
    let _ = writeln!(
        w,
        r#"<line x1="{:.2}" y1="{:.2}" x2="{end:.2}" y2="{:.2}"/>"#,
        origin.0 - 20.0,
        origin.1,
        origin.1
    );
    let _ = writeln!(
        w,
        r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/>"#,
        origin.0,
        origin.1 + 20.0,
        origin.0,
        style::MARGIN - 20.0
    );
    let _ = writeln!(w, "</g>");
    let _ = writeln!(
        w,
        r#"<text x="{:.2}" y="{:.2}" font-size="{}">u1</text>"#,
        end + 4.0,
        origin.1 + 4.0,
        style::TICK_SIZE
    );
    let _ = writeln!(
        w,
        r#"<text x="{:.2}" y="{:.2}" font-size="{}" text-anchor="middle">u2</text>"#,
        origin.0,
        style::MARGIN - 24.0,
        style::TICK_SIZE
    );

    let lines = constraint_lines(&a, q, false);
    let extra: Vec<Line> = constraint_lines(&a, q, true)
        .into_iter()
        .filter(|l| l.multiple > a.row_max(l.row))
        .collect();
    for (group, dash, width) in [(&lines, style::DASH, 1.5), (&extra, style::DOT, 0.75)] {
        let _ = writeln!(
            w,
            r#"<g stroke="{}" stroke-width="{width}" stroke-dasharray="{dash}" fill="none">"#,
            style::CONSTRAINT,
        );
        for line in group.iter() {
            if let Some((s, e)) = clip(line, q) {
                let _ = writeln!(
                    w,
                    r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" data-row="{}" data-multiple="{}"/>"#,
                    px(&s[0], q),
                    py(&s[1], q),
                    px(&e[0], q),
                    py(&e[1], q),
                    line.row,
                    line.multiple
                );
            }
        }
        let _ = writeln!(w, "</g>");
    }

    let _ = writeln!(w, r#"<g font-size="{}">"#, style::TICK_SIZE);
    for line in &lines {
        let (a0, a1) = (a.get(line.row, 0), a.get(line.row, 1));
        if a1 == 0 {
            let _ = writeln!(
                w,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
                px(&(line.c.clone() / int(a0)), q),
                origin.1 + 16.0,
                fmt_fraction(line.multiple, a0)
            );
        } else if a0 == 0 {
            let _ = writeln!(
                w,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
                origin.0 - 6.0,
                py(&(line.c.clone() / int(a1)), q) + 4.0,
                fmt_fraction(line.multiple, a1)
            );
        }
    }
    let _ = writeln!(w, "</g>");

    let _ = writeln!(w, r#"<g font-size="{}" text-anchor="middle">"#, style::LABEL_SIZE);
    for cell in cells.iter().filter(|_| options.labels) {
        let _ = writeln!(
            w,
            r#"<text x="{:.2}" y="{:.2}">{}</text>"#,
            px(&cell.sample.0, q),
            py(&cell.sample.1, q) + style::LABEL_SIZE as f64 / 3.0,
            ring.format_monomial(&cell.label)
        );
    }
    let _ = writeln!(w, "</g>");

    if !overlay.is_empty() {
        let _ = writeln!(w, r#"<g stroke="{}" stroke-width="2">"#, style::OVERLAY);
        for t in overlay {
            if t.is_negative() || *t > int(2) {
                return Err(Error::OutOfRange {
                    value: format!("{}/{}", t.numer(), t.denom()),
                    range: "[0, 2]",
                });
            }
            let line = Line {
                a: [BigRational::one(), BigRational::one()],
                c: t * int(q),
                row: 0,
                multiple: 0,
            };
            if let Some((s, e)) = clip(&line, q) {
                let _ = writeln!(
                    w,
                    r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" data-t="{}/{}"/>"#,
                    px(&s[0], q),
                    py(&s[1], q),
                    px(&e[0], q),
                    py(&e[1], q),
                    t.numer(),
                    t.denom()
                );
            }
        }
        let _ = writeln!(w, "</g>");
    }
    let _ = writeln!(w, "</svg>");
    Ok(svg)
}
