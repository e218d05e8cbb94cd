//! Rational normal curves, osculating flags, Schubert cell charts, and the
//! determinantal systems cut out by Schubert conditions on osculating flags.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::covers::Condition;
use crate::error::{Error, Result};
use crate::indexing::{Index, Space};
use crate::multposet::ProblemSpec;
use crate::poly::{determinant, minor, parse_rational, pfaffian, pfaffian_on, rat, ratio, to_f64, Poly};

/// A point of the projective line: a finite rational or infinity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Param {
    Finite(BigRational),
    Infinity,
}

impl Param {
    pub fn int(n: i64) -> Self {
        Param::Finite(rat(n))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Param::Infinity)
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Param::Finite(q) => to_f64(q),
            Param::Infinity => f64::INFINITY,
        }
    }
}

impl FromStr for Param {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" | "oo" => Ok(Param::Infinity),
            other => parse_rational(other).map(Param::Finite),
        }
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Param::Finite(q) => write!(f, "{q}"),
            Param::Infinity => f.write_str("inf"),
        }
    }
}

/// Parses a comma separated list of parameters.
pub fn parse_params(text: &str) -> Result<Vec<Param>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',').map(str::parse).collect()
}

/// Where the fixed Schubert condition of a chart is placed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Anchor {
    Zero,
    Infinity,
}

impl Anchor {
    pub fn param(self) -> Param {
        match self {
            Anchor::Zero => Param::int(0),
            Anchor::Infinity => Param::Infinity,
        }
    }

    /// Zero for flag manifolds and Grassmannians, infinity for isotropic spaces.
    pub fn default_for(space: &Space) -> Self {
        match space {
            Space::Flag { .. } | Space::Grassmannian { .. } => Anchor::Zero,
            Space::Orthogonal { .. } | Space::Lagrangian { .. } => Anchor::Infinity,
        }
    }
}

impl FromStr for Anchor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.parse::<Param>()? {
            Param::Infinity => Ok(Anchor::Infinity),
            Param::Finite(q) if q.is_zero() => Ok(Anchor::Zero),
            _ => Err(Error::Parse(format!("anchor must be 0 or inf, got {s:?}"))),
        }
    }
}

impl fmt::Display for Anchor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Anchor::Zero => "0",
            Anchor::Infinity => "inf",
        })
    }
}

/// The rational normal curve whose osculating flags define the conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CurveKind {
    /// `(1, s, s^2/2!, ..., s^(n-1)/(n-1)!)` in `C^n`.
    Plain(usize),
    /// Isotropic for `sum x_i y_(2n+2-i)` in `C^(2n+1)`.
    Orthogonal(usize),
    /// Isotropic for the alternating form `sum_(i<=n) x_i y_(2n+1-i) - y_i x_(2n+1-i)` in `C^(2n)`.
    Symplectic(usize),
}

impl CurveKind {
    pub fn for_space(space: &Space) -> Self {
        match space {
            Space::Flag { n, .. } | Space::Grassmannian { n, .. } => CurveKind::Plain(*n),
            Space::Orthogonal { n } => CurveKind::Orthogonal(*n),
            Space::Lagrangian { n } => CurveKind::Symplectic(*n),
        }
    }

    pub fn ambient(self) -> usize {
        match self {
            CurveKind::Plain(n) => n,
            CurveKind::Orthogonal(n) => 2 * n + 1,
            CurveKind::Symplectic(n) => 2 * n,
        }
    }

    fn sign(self, j: usize) -> i64 {
        match self {
            CurveKind::Plain(_) => 1,
            CurveKind::Orthogonal(n) | CurveKind::Symplectic(n) => {
                if j > n && (j - n) % 2 == 1 {
                    -1
                } else {
                    1
                }
            }
        }
    }

    /// The bilinear form preserved by the isotropic variants (zero for plain curves).
    pub fn form(self, x: &[BigRational], y: &[BigRational]) -> BigRational {
        let m = self.ambient();
        let mut total = BigRational::zero();
        match self {
            CurveKind::Plain(_) => {}
            CurveKind::Orthogonal(_) => {
                for i in 0..m {
                    total += &x[i] * &y[m - 1 - i];
                }
            }
            CurveKind::Symplectic(n) => {
                for i in 0..n {
                    total += &x[i] * &y[m - 1 - i] - &y[i] * &x[m - 1 - i];
                }
            }
        }
        total
    }

    /// Sign `w(c)` with `form(x, y) = sum_c w(c) x_c y_(m+1-c)` (1-based `c`).
    fn form_sign(self, c: usize) -> i64 {
        match self {
            CurveKind::Symplectic(n) if c > n => -1,
            _ => 1,
        }
    }
}

/// The flag osculating a curve at a parameter, one spanning vector per row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OsculatingFlag {
    pub kind: CurveKind,
    pub param: Param,
    rows: Vec<Vec<BigRational>>,
}

fn factorials(m: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::one()];
    for i in 1..=m {
        let next = &out[i - 1] * BigInt::from(i);
        out.push(next);
    }
    out
}

pub fn osculating_flag(kind: CurveKind, s: &Param) -> OsculatingFlag {
    let m = kind.ambient();
    let rows = match s {
        Param::Infinity => (0..m)
            .map(|k| (0..m).map(|j| if j == m - 1 - k { BigRational::one() } else { BigRational::zero() }).collect())
            .collect(),
        Param::Finite(s) => {
            let fact = factorials(m);
            let powers: Vec<BigRational> = (0..m).map(|p| num_traits::pow(s.clone(), p)).collect();
            (0..m)
                .map(|k| {
                    (0..m)
                        .map(|j| {
                            if j < k {
                                return BigRational::zero();
                            }
                            let denom = &fact[j - k] * &fact[k];
                            &powers[j - k] * BigRational::new(BigInt::from(kind.sign(j)), denom)
                        })
                        .collect()
                })
                .collect()
        }
    };
    OsculatingFlag { kind, param: s.clone(), rows }
}

impl OsculatingFlag {
    pub fn ambient(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<BigRational>] {
        &self.rows
    }

    /// Spanning rows of the `i`-dimensional member `F_i`.
    pub fn subspace(&self, i: usize) -> &[Vec<BigRational>] {
        &self.rows[..i]
    }
}

/// How chart coordinates enter the represented subspace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChartKind {
    /// Echelon rows whose entries are coordinates, linear combinations of them, or constants.
    Echelon,
    /// Maximal isotropic graphs `[I | c | S - cc^T/2]` in the orthogonal case.
    Spinor,
}

/// Affine coordinates on an open Schubert cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellChart {
    pub space: Space,
    pub base: Index,
    pub anchor: Anchor,
    pub kind: ChartKind,
    rows: Vec<Vec<Poly>>,
    nvars: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Slot {
    Zero,
    One,
    Entry,
}

/// Relation between two entries `a`, `b` of an isotropic echelon pattern: `b = ratio * a`.
#[derive(Debug, Clone, Copy)]
enum Relation {
    Tie { a: (usize, usize), b: (usize, usize), ratio: i64 },
    Vanish((usize, usize)),
}

fn echelon_pattern(m: usize, pivots: &[usize], exclude_all_pivots: bool) -> Vec<Vec<Slot>> {
    pivots
        .iter()
        .enumerate()
        .map(|(j, &p)| {
            (1..=m)
                .map(|c| {
                    if c == p {
                        Slot::One
                    } else if c < p && !pivots[..if exclude_all_pivots { pivots.len() } else { j }].contains(&c) {
                        Slot::Entry
                    } else {
                        Slot::Zero
                    }
                })
                .collect()
        })
        .collect()
}

/// Pivot columns of the cell of `LG(n)` indexed by `lam`, relative to the standard flag.
fn lagrangian_pivots(n: usize, lam: &[usize]) -> Vec<usize> {
    let mut p: Vec<usize> = lam.iter().map(|l| n + l).collect();
    p.extend((1..=n).filter(|k| !lam.contains(k)).map(|k| n + 1 - k));
    p.sort_unstable();
    p
}

fn isotropy_relations(kind: CurveKind, pattern: &[Vec<Slot>], pivots: &[usize]) -> Vec<Relation> {
    let m = kind.ambient();
    let mut out = Vec::new();
    for i in 0..pattern.len() {
        for k in i + 1..pattern.len() {
            // terms of <r_i, r_k> that pair a pivot with an entry
            let mut terms = Vec::new();
            let c = m + 1 - pivots[i];
            if pattern[k][c - 1] == Slot::Entry {
                terms.push(((k, c - 1), kind.form_sign(pivots[i])));
            }
            let c = m + 1 - pivots[k];
            if pattern[i][c - 1] == Slot::Entry {
                terms.push(((i, c - 1), kind.form_sign(c)));
            }
            match terms.as_slice() {
                [] => {}
                [(pos, _)] => out.push(Relation::Vanish(*pos)),
                [(a, wa), (b, wb)] => out.push(Relation::Tie { a: *a, b: *b, ratio: -wa * wb }),
                _ => unreachable!(),
            }
        }
    }
    out
}

/// Chart on the cell `X°_w F(anchor)` of `space`, with `dim(w)` coordinates.
pub fn cell_chart(space: &Space, base: &Index, anchor: Anchor) -> Result<CellChart> {
    space.validate()?;
    if !space.contains(base) {
        return Err(Error::Shape(format!("index {base} does not belong to {space}")));
    }
    let kind = CurveKind::for_space(space);
    let m = kind.ambient();
    let (pattern, relations, reverse_rows) = match (space, base) {
        (Space::Flag { d, .. }, Index::Perm(w)) => {
            let rows = *d.last().expect("validated shape");
            let pivots = &w.word()[..rows];
            let pattern = pivots
                .iter()
                .enumerate()
                .map(|(j, &p)| {
                    (1..=m)
                        .map(|c| {
                            if c == p {
                                Slot::One
                            } else if c < p && !pivots[..j].contains(&c) {
                                Slot::Entry
                            } else {
                                Slot::Zero
                            }
                        })
                        .collect()
                })
                .collect();
            (pattern, Vec::new(), false)
        }
        (Space::Grassmannian { .. }, Index::Grass(a)) => (echelon_pattern(m, a.alpha(), true), Vec::new(), true),
        (Space::Lagrangian { n }, Index::Strict(l)) => {
            let pivots = lagrangian_pivots(*n, l.parts());
            let pattern = echelon_pattern(m, &pivots, true);
            let relations = isotropy_relations(kind, &pattern, &pivots);
            (pattern, relations, true)
        }
        (Space::Orthogonal { n }, Index::Strict(l)) => {
            if l.parts() != space.top()?.as_strict().expect("strict top").parts() {
                return Err(Error::Capability(format!(
                    "{space} charts are only available on the open cell, not on {base}"
                )));
            }
            return Ok(spinor_chart(space, base, *n, anchor));
        }
        _ => unreachable!("index checked against the space"),
    };

    // orient: anchor infinity mirrors the columns
    let rows = pattern.len();
    let place = |(r, c): (usize, usize)| -> (usize, usize) {
        match anchor {
            Anchor::Zero => (r, c),
            Anchor::Infinity => (if reverse_rows { rows - 1 - r } else { r }, m - 1 - c),
        }
    };
    let mut oriented = vec![vec![Slot::Zero; m]; rows];
    for (r, row) in pattern.iter().enumerate() {
        for (c, &slot) in row.iter().enumerate() {
            let (r2, c2) = place((r, c));
            oriented[r2][c2] = slot;
        }
    }
    let mut partner: HashMap<(usize, usize), ((usize, usize), i64)> = HashMap::new();
    let mut vanish = Vec::new();
    for rel in &relations {
        match *rel {
            Relation::Tie { a, b, ratio } => {
                let (a, b) = (place(a), place(b));
                partner.insert(a, (b, ratio));
                partner.insert(b, (a, ratio));
            }
            Relation::Vanish(p) => vanish.push(place(p)),
        }
    }

    // coordinates are assigned in row-major order of the oriented matrix
    let mut slots: Vec<Vec<Option<(usize, i64)>>> = vec![vec![None; m]; rows];
    let mut nvars = 0;
    for r in 0..rows {
        for c in 0..m {
            if oriented[r][c] != Slot::Entry || vanish.contains(&(r, c)) {
                continue;
            }
            match partner.get(&(r, c)) {
                Some(&((pr, pc), ratio)) if slots[pr][pc].is_some() => {
                    let (v, sign) = slots[pr][pc].expect("assigned partner");
                    slots[r][c] = Some((v, sign * ratio));
                }
                _ => {
                    slots[r][c] = Some((nvars, 1));
                    nvars += 1;
                }
            }
        }
    }
    let dim = crate::indexing::dimension(base);
    if nvars != dim {
        return Err(Error::Degenerate(format!("chart for {base} has {nvars} coordinates, expected {dim}")));
    }
    let matrix = (0..rows)
        .map(|r| {
            (0..m)
                .map(|c| match (oriented[r][c], slots[r][c]) {
                    (Slot::One, _) => Poly::one(nvars),
                    (Slot::Entry, Some((v, sign))) => Poly::var(nvars, v).scale(&rat(sign)),
                    _ => Poly::zero(nvars),
                })
                .collect()
        })
        .collect();
    Ok(CellChart { space: space.clone(), base: base.clone(), anchor, kind: ChartKind::Echelon, rows: matrix, nvars })
}

/// Index of the coordinate `S_ij` (`i < j`, 0-based) of the spinor chart of `OG(n)`.
fn spinor_var(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    n + i * n - i * (i + 1) / 2 + (j - i - 1)
}

fn spinor_chart(space: &Space, base: &Index, n: usize, anchor: Anchor) -> CellChart {
    let m = 2 * n + 1;
    let nvars = n * (n + 1) / 2;
    let c = |i: usize| Poly::var(nvars, i);
    let s = |i: usize, j: usize| -> Poly {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => Poly::var(nvars, spinor_var(n, i, j)),
            std::cmp::Ordering::Greater => -&Poly::var(nvars, spinor_var(n, j, i)),
            std::cmp::Ordering::Equal => Poly::zero(nvars),
        }
    };
    let half = ratio(1, 2);
    let mut rows = vec![vec![Poly::zero(nvars); m]; n];
    for i in 0..n {
        rows[i][i] = Poly::one(nvars);
        rows[i][n] = c(i);
        for j in 0..n {
            // column 2n+2-j (1-based) holds B_ij = S_ij - c_i c_j / 2
            rows[i][2 * n - j] = &s(i, j) - &(&c(i) * &c(j)).scale(&half);
        }
    }
    if anchor == Anchor::Zero {
        rows = rows.into_iter().rev().map(|row| row.into_iter().rev().collect()).collect();
    }
    CellChart { space: space.clone(), base: base.clone(), anchor, kind: ChartKind::Spinor, rows, nvars }
}

impl CellChart {
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn rows(&self) -> &[Vec<Poly>] {
        &self.rows
    }

    pub fn variable_names(&self) -> Vec<String> {
        match self.kind {
            ChartKind::Echelon => Poly::default_names(self.nvars),
            ChartKind::Spinor => {
                let n = self.rows.len();
                let mut names: Vec<String> = (1..=n).map(|i| format!("c{i}")).collect();
                for i in 1..=n {
                    for j in i + 1..=n {
                        names.push(format!("s{i}_{j}"));
                    }
                }
                names
            }
        }
    }

    /// The represented subspace (or flag rows) at a rational point of the chart.
    pub fn evaluate(&self, x: &[BigRational]) -> Vec<Vec<BigRational>> {
        self.rows.iter().map(|row| row.iter().map(|p| p.eval(x)).collect()).collect()
    }

    pub fn evaluate_complex(&self, x: &[Complex64]) -> Vec<Vec<Complex64>> {
        self.rows.iter().map(|row| row.iter().map(|p| p.eval_complex(x)).collect()).collect()
    }

    /// `[[S, c], [-c^T, 0]]` for the spinor chart.
    fn spinor_matrix(&self) -> Vec<Vec<Poly>> {
        let n = self.rows.len();
        let v = self.nvars;
        let mut a = vec![vec![Poly::zero(v); n + 1]; n + 1];
        for i in 0..n {
            a[i][n] = Poly::var(v, i);
            a[n][i] = -&Poly::var(v, i);
            for j in i + 1..n {
                a[i][j] = Poly::var(v, spinor_var(n, i, j));
                a[j][i] = -&a[i][j];
            }
        }
        a
    }
}

fn constant_rows(rows: &[Vec<BigRational>], nvars: usize) -> Vec<Vec<Poly>> {
    rows.iter().map(|r| r.iter().map(|q| Poly::constant(nvars, q.clone())).collect()).collect()
}

/// Polynomials whose common zeros in the chart are the points meeting `condition` on `flag`.
pub fn condition_polynomials(chart: &CellChart, condition: &Condition, flag: &OsculatingFlag) -> Result<Vec<Poly>> {
    condition.check(&chart.space)?;
    if flag.kind != CurveKind::for_space(&chart.space) {
        return Err(Error::Shape(format!("flag of {:?} does not live in {}", flag.kind, chart.space)));
    }
    if flag.param == chart.anchor.param() {
        return Err(Error::Parameter(format!("condition placed at the chart anchor {}", chart.anchor)));
    }
    let v = chart.nvars;
    let m = flag.ambient();
    let stacked = |flag_rows: usize, chart_rows: usize| -> Vec<Vec<Poly>> {
        let mut rows = constant_rows(flag.subspace(flag_rows), v);
        rows.extend(chart.rows[..chart_rows].iter().cloned());
        rows
    };
    match (&chart.space, condition) {
        (Space::Flag { n, d }, Condition::Stage(i)) => {
            let di = d[i - 1];
            Ok(vec![determinant(&stacked(n - di, di))?])
        }
        (Space::Grassmannian { k, n }, Condition::Schur(mu)) if mu.parts() == [1] => {
            Ok(vec![determinant(&stacked(n - k, *k))?])
        }
        (Space::Grassmannian { k, n }, Condition::Schur(mu)) => {
            // dim(E ∩ F_a) >= i with a = n-k+i-mu_i, as vanishing minors of [F_a; E]
            let mut out = Vec::new();
            for (i0, &part) in mu.parts().iter().enumerate() {
                let i = i0 + 1;
                let a = n - k + i - part;
                let size = a + k - i + 1;
                let matrix = stacked(a, *k);
                for rows in crate::indexing::combinations(matrix.len(), size) {
                    for cols in crate::indexing::combinations(m, size) {
                        let rows: Vec<usize> = rows.iter().map(|r| r - 1).collect();
                        let cols: Vec<usize> = cols.iter().map(|c| c - 1).collect();
                        let p = minor(&matrix, &rows, &cols, v);
                        if !p.is_zero() && !out.contains(&p) && !out.contains(&-&p) {
                            out.push(p);
                        }
                    }
                }
            }
            Ok(out)
        }
        (Space::Lagrangian { n }, Condition::Simple) => Ok(vec![determinant(&stacked(*n, *n))?]),
        (Space::Orthogonal { n }, Condition::Simple) => orthogonal_condition(chart, flag, *n).map(|g| vec![g]),
        _ => Err(Error::Spec(format!("condition {condition} does not apply to {}", chart.space))),
    }
}

/// Row-reduces `rows` so the first `rows.len()` columns form the identity.
fn normalize_leading(mut rows: Vec<Vec<BigRational>>) -> Option<Vec<Vec<BigRational>>> {
    let n = rows.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !rows[r][col].is_zero())?;
        rows.swap(col, pivot);
        let inv = rows[col][col].recip();
        for x in rows[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != col && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                let pivot_row = rows[col].clone();
                for (x, p) in rows[r].iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
            }
        }
    }
    Some(rows)
}

/// The condition `H ∩ F_n(s) != 0` on the spinor chart of `OG(n)`, as a square root of
/// the pairing determinant `det(H J F_n^T)`.
fn orthogonal_condition(chart: &CellChart, flag: &OsculatingFlag, n: usize) -> Result<Poly> {
    let v = chart.nvars;
    let mut fixed: Vec<Vec<BigRational>> = flag.subspace(n).to_vec();
    if chart.anchor == Anchor::Zero {
        fixed = fixed.into_iter().map(|row| row.into_iter().rev().collect()).collect();
    }
    let t = normalize_leading(fixed)
        .ok_or_else(|| Error::Degenerate(format!("F_{n}({}) is not in the open cell of the chart", flag.param)))?;
    let cs: Vec<BigRational> = (0..n).map(|i| t[i][n].clone()).collect();
    let half = ratio(1, 2);
    let mut a = chart.spinor_matrix();
    for i in 0..n {
        a[i][n] = &a[i][n] - &Poly::constant(v, cs[i].clone());
        a[n][i] = &a[n][i] + &Poly::constant(v, cs[i].clone());
        for j in 0..n {
            if i != j {
                let sij = &t[i][2 * n - j] + &cs[i] * &cs[j] * &half;
                a[i][j] = &a[i][j] - &Poly::constant(v, sij);
            }
        }
    }
    if n % 2 == 1 {
        return Ok(pfaffian(&a, v));
    }
    // odd size: the kernel vector is given by signed principal sub-Pfaffians
    let mut memo = HashMap::new();
    let kernel: Vec<Poly> = (0..=n)
        .map(|i| {
            let idx: Vec<usize> = (0..=n).filter(|&j| j != i).collect();
            let p = pfaffian_on(&a, &idx, v, &mut memo);
            if i % 2 == 0 {
                p
            } else {
                -&p
            }
        })
        .collect();
    let mut g = kernel[n].clone();
    for j in 0..n {
        g = &g - &kernel[j].scale(&(&cs[j] * &half));
    }
    Ok(g)
}

/// Options for [`build_system`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemOptions {
    /// Anchor of the base condition; defaults per space.
    pub anchor: Option<Anchor>,
    /// Allow non-simple Grassmannian conditions, squared up by random combinations.
    pub allow_general: bool,
    /// Seed for the random combinations of overdetermined conditions.
    pub seed: u64,
}

impl Default for SystemOptions {
    fn default() -> Self {
        SystemOptions { anchor: None, allow_general: false, seed: 1 }
    }
}

/// A square polynomial system with its provenance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolySystem {
    pub space: Space,
    pub base: Index,
    pub anchor: Anchor,
    pub stages: Vec<(Condition, Param)>,
    pub names: Vec<String>,
    pub polys: Vec<Poly>,
    /// Equations every genuine solution satisfies; nonempty when `polys` were squared up.
    pub checks: Vec<Poly>,
    pub chart: CellChart,
}

impl PolySystem {
    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.polys.iter().map(Poly::degree).collect()
    }

    pub fn bezout(&self) -> u128 {
        self.degrees().iter().map(|&d| d as u128).product()
    }

    /// Whether every coefficient is real (always, since parameters are rational).
    pub fn is_real(&self) -> bool {
        true
    }

    /// Human-readable text, one equation per line after a commented header.
    pub fn render(&self) -> String {
        let mut out = format!(
            "# space {}\n# base {} at {}\n# variables {}\n",
            self.space,
            crate::multposet::label(&self.base),
            self.anchor,
            self.names.join(", ")
        );
        for (i, p) in self.polys.iter().enumerate() {
            if let Some((c, s)) = self.stages.get(i) {
                out += &format!("# {c} at {s}\n");
            }
            out += &p.render(&self.names);
            out.push('\n');
        }
        for p in &self.checks {
            out += &format!("# check: {}\n", p.render(&self.names));
        }
        out
    }
}

/// Builds the system for `spec` with the `i`-th condition on the flag osculating at `params[i]`.
pub fn build_system(spec: &ProblemSpec, params: &[Param], options: &SystemOptions) -> Result<PolySystem> {
    spec.validate()?;
    let base = spec
        .resolved_target()?
        .ok_or_else(|| Error::Spec("conditions do not determine a zero-dimensional problem; give a target".into()))?;
    if params.len() != spec.conditions.len() {
        return Err(Error::Parameter(format!(
            "{} parameters for {} conditions",
            params.len(),
            spec.conditions.len()
        )));
    }
    for (i, p) in params.iter().enumerate() {
        if params[..i].contains(p) {
            return Err(Error::Parameter(format!("parameter {p} is repeated")));
        }
    }
    let anchor = options.anchor.unwrap_or_else(|| Anchor::default_for(&spec.space));
    if params.contains(&anchor.param()) {
        return Err(Error::Parameter(format!("parameter {} coincides with the anchor", anchor.param())));
    }
    let chart = cell_chart(&spec.space, &base, anchor)?;
    let kind = CurveKind::for_space(&spec.space);
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut polys = Vec::new();
    let mut checks = Vec::new();
    let mut stages = Vec::new();
    for (condition, s) in spec.conditions.iter().zip(params) {
        let flag = osculating_flag(kind, s);
        let eqs = condition_polynomials(&chart, condition, &flag)?;
        let codim = condition.codimension();
        if eqs.len() == codim {
            polys.extend(eqs);
        } else {
            if !options.allow_general {
                return Err(Error::Capability(format!(
                    "condition {condition} gives {} equations for codimension {codim}; enable general conditions",
                    eqs.len()
                )));
            }
            for _ in 0..codim {
                let mut combo = Poly::zero(chart.nvars);
                for e in &eqs {
                    let w = ratio(rng.random_range(-1000..=1000), 1000);
                    combo = &combo + &e.scale(&w);
                }
                polys.push(combo);
            }
            checks.extend(eqs);
        }
        stages.extend(std::iter::repeat_n((condition.clone(), s.clone()), codim));
    }
    if polys.len() != chart.nvars {
        return Err(Error::Spec(format!("{} equations in {} unknowns", polys.len(), chart.nvars)));
    }
    Ok(PolySystem { space: spec.space.clone(), base, anchor, stages, names: chart.variable_names(), polys, checks, chart })
}

/// An element `re + im * sqrt(-3)` of `Q(sqrt(-3))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QSqrtMinus3 {
    pub re: BigRational,
    pub im: BigRational,
}

impl QSqrtMinus3 {
    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(to_f64(&self.re), to_f64(&self.im) * 3f64.sqrt())
    }
}

/// The two points of the `LG(2)` problem with conditions at `s`, `t` and the cell at infinity,
/// in the coordinates `(x, y)` of its chart, exactly.
pub fn lg2_closed_form_exact(s: &BigRational, t: &BigRational) -> Result<[(QSqrtMinus3, QSqrtMinus3); 2]> {
    if s == t {
        return Err(Error::Degenerate("the two parameters coincide".into()));
    }
    let sixth = ratio(1, 6);
    let x_re = (s + t) * ratio(1, 2);
    let x_im = (s - t) * &sixth;
    let y_re = (s * s * t + s * t * t) * &sixth;
    let y_im = (s * s * t - s * t * t) * &sixth;
    let root = |sign: i64| {
        let sign = rat(sign);
        (
            QSqrtMinus3 { re: x_re.clone(), im: &x_im * &sign },
            QSqrtMinus3 { re: y_re.clone(), im: &y_im * &sign },
        )
    };
    Ok([root(1), root(-1)])
}

pub fn lg2_closed_form(s: f64, t: f64) -> Result<[(Complex64, Complex64); 2]> {
    let exact = lg2_closed_form_exact(&crate::poly::rational_from_f64(s)?, &crate::poly::rational_from_f64(t)?)?;
    Ok(exact.map(|(x, y)| (x.to_complex(), y.to_complex())))
}

fn permutations(items: &mut Vec<usize>, k: usize, visit: &mut dyn FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, visit);
        items.swap(k, i);
    }
}

/// `sum over w in S_6 of (s_w1 - s_w2)^2 (s_w3 - s_w4)^2 (s_w5 - s_w6)^2`, exactly.
pub fn og3_discriminant_exact(s: &[BigRational; 6]) -> BigRational {
    let mut total = BigRational::zero();
    permutations(&mut (0..6).collect(), 0, &mut |w| {
        let mut term = BigRational::one();
        for pair in w.chunks(2) {
            let d = &s[pair[0]] - &s[pair[1]];
            term *= &d * &d;
        }
        total += term;
    });
    total
}

pub fn og3_discriminant(s: &[f64; 6]) -> f64 {
    let mut total = 0.0;
    permutations(&mut (0..6).collect(), 0, &mut |w| {
        total += w.chunks(2).map(|p| (s[p[0]] - s[p[1]]).powi(2)).product::<f64>();
    });
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covers::Partition;
    use crate::indexing::StrictPartition;
    use num_traits::Signed;

    fn pairing_determinant(kind: CurveKind, h: &[Vec<BigRational>], f: &[Vec<BigRational>]) -> BigRational {
        let entries: Vec<Vec<Poly>> = h
            .iter()
            .map(|hr| f.iter().map(|fr| Poly::constant(0, kind.form(hr, fr))).collect())
            .collect();
        determinant(&entries).unwrap().constant_term()
    }

    fn proportional(p: &Poly, q: &Poly) -> bool {
        let Some((e, a)) = p.terms().next() else {
            return q.is_zero();
        };
        let b = q.coefficient(e);
        !b.is_zero() && (p - &q.scale(&(a / &b))).is_zero()
    }

    fn q(n: i64) -> BigRational {
        rat(n)
    }

    #[test]
    fn plain_flag_at_zero_is_standard() {
        let f = osculating_flag(CurveKind::Plain(4), &Param::int(0));
        let fact = [1, 1, 2, 6];
        for (i, row) in f.rows().iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                assert_eq!(x, &if i == j { ratio(1, fact[i]) } else { q(0) });
            }
        }
        let inf = osculating_flag(CurveKind::Plain(4), &Param::Infinity);
        assert_eq!(inf.rows()[0][3], q(1));
        assert_eq!(inf.rows()[1][2], q(1));
    }

    #[test]
    fn symplectic_flag_rows() {
        let f = osculating_flag(CurveKind::Symplectic(2), &Param::int(3));
        let s = q(3);
        let want = [
            [q(1), s.clone(), &s * &s / q(2), -(&s * &s * &s) / q(6)],
            [q(0), q(1), s.clone(), -(&s * &s) / q(2)],
        ];
        assert_eq!(f.subspace(2), &want.map(|r| r.to_vec()));
    }

    #[test]
    fn osculating_flags_are_isotropic() {
        for n in 1..=4 {
            for kind in [CurveKind::Orthogonal(n), CurveKind::Symplectic(n)] {
                let m = kind.ambient();
                for s in [Param::int(0), Param::int(-2), Param::Finite(ratio(3, 7)), Param::Infinity] {
                    let f = osculating_flag(kind, &s);
                    for i in 1..m {
                        for a in f.subspace(i) {
                            for b in f.subspace(m - i) {
                                assert!(kind.form(a, b).is_zero(), "{kind:?} at {s}, i={i}");
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn lagrangian_chart_of_the_worked_example() {
        let space = Space::Lagrangian { n: 2 };
        let base = Index::Strict(StrictPartition::new(vec![2], 2).unwrap());
        let chart = cell_chart(&space, &base, Anchor::Infinity).unwrap();
        assert_eq!(chart.nvars(), 2);
        let rendered: Vec<Vec<String>> =
            chart.rows().iter().map(|r| r.iter().map(|p| p.to_string()).collect()).collect();
        assert_eq!(rendered, [["1", "x0", "0", "x1"], ["0", "0", "1", "-x0"]]);

        let flag = osculating_flag(CurveKind::Symplectic(2), &Param::Finite(ratio(5, 2)));
        let g = condition_polynomials(&chart, &Condition::Simple, &flag).unwrap();
        // -y + s x^2 - x s^2 + s^3/3 at s = 5/2
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let s = ratio(5, 2);
        let want = &(&(-&y + (&x * &x).scale(&s)) - &x.scale(&(&s * &s))) + &Poly::constant(2, &s * &s * &s / q(3));
        assert_eq!(g, [want]);

        let at_zero = condition_polynomials(&chart, &Condition::Simple, &osculating_flag(CurveKind::Symplectic(2), &Param::int(0))).unwrap();
        assert_eq!(at_zero, [-&y]);
    }

    #[test]
    fn lagrangian_charts_are_isotropic() {
        for n in 1..=4 {
            let space = Space::Lagrangian { n };
            for base in crate::indexing::enumerate_indices(&space).unwrap() {
                for anchor in [Anchor::Zero, Anchor::Infinity] {
                    let chart = cell_chart(&space, &base, anchor).unwrap();
                    let kind = CurveKind::Symplectic(n);
                    let point: Vec<BigRational> = (0..chart.nvars()).map(|i| q(i as i64 * 3 - 5)).collect();
                    let h = chart.evaluate(&point);
                    for a in &h {
                        for b in &h {
                            assert!(kind.form(a, b).is_zero(), "{base} at {anchor}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn echelon_chart_sizes() {
        let gr = Space::Grassmannian { k: 2, n: 4 };
        let top = gr.top().unwrap();
        let chart = cell_chart(&gr, &top, Anchor::Zero).unwrap();
        let rendered: Vec<Vec<String>> =
            chart.rows().iter().map(|r| r.iter().map(|p| p.to_string()).collect()).collect();
        assert_eq!(rendered, [["x0", "x1", "1", "0"], ["x2", "x3", "0", "1"]]);

        let fl = Space::Flag { n: 5, d: vec![2, 3] };
        let chart = cell_chart(&fl, &fl.top().unwrap(), Anchor::Zero).unwrap();
        assert_eq!(chart.nvars(), 8);
        assert_eq!(chart.rows().len(), 3);
        for base in crate::indexing::enumerate_indices(&fl).unwrap() {
            let chart = cell_chart(&fl, &base, Anchor::Infinity).unwrap();
            assert_eq!(chart.nvars(), crate::indexing::dimension(&base));
        }
    }

    #[test]
    fn grassmann_condition_at_zero_is_a_minor() {
        let gr = Space::Grassmannian { k: 2, n: 4 };
        let chart = cell_chart(&gr, &gr.top().unwrap(), Anchor::Infinity).unwrap();
        let flag = osculating_flag(CurveKind::Plain(4), &Param::int(0));
        let g = condition_polynomials(&chart, &Condition::Schur(Partition::new(vec![1]).unwrap()), &flag).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g[0].degree(), 2);
        assert_eq!(g[0].term_count(), 2);
    }

    #[test]
    fn flag_condition_degrees() {
        let fl = Space::Flag { n: 5, d: vec![2, 3] };
        let chart = cell_chart(&fl, &fl.top().unwrap(), Anchor::Zero).unwrap();
        let flag = osculating_flag(CurveKind::Plain(5), &Param::int(2));
        assert_eq!(condition_polynomials(&chart, &Condition::Stage(2), &flag).unwrap()[0].degree(), 3);
        assert_eq!(condition_polynomials(&chart, &Condition::Stage(1), &flag).unwrap()[0].degree(), 2);
    }

    /// `H J F_n^T` for a chart point and a flag, compared against the square of the condition.
    fn check_orthogonal_square(n: usize, anchor: Anchor) {
        let space = Space::Orthogonal { n };
        let chart = cell_chart(&space, &space.top().unwrap(), anchor).unwrap();
        let kind = CurveKind::Orthogonal(n);
        let param = if anchor == Anchor::Zero { Param::Infinity } else { Param::Finite(ratio(-3, 2)) };
        let flag = osculating_flag(kind, &param);
        let finite = osculating_flag(kind, &Param::int(2));
        let g_inf = condition_polynomials(&chart, &Condition::Simple, &flag).unwrap().remove(0);
        let g = condition_polynomials(&chart, &Condition::Simple, &finite).unwrap().remove(0);
        assert_eq!(g.degree() as usize, n.div_ceil(2));
        let mut ratios = Vec::new();
        for seed in 0..4i64 {
            let point: Vec<BigRational> = (0..chart.nvars()).map(|i| ratio((i as i64 * 7 + seed * 5) % 11 - 5, 3)).collect();
            let h = chart.evaluate(&point);
            for a in &h {
                for b in &h {
                    assert!(kind.form(a, b).is_zero());
                }
            }
            for (poly, fl) in [(&g, &finite), (&g_inf, &flag)] {
                let det = pairing_determinant(kind, &h, fl.subspace(n));
                let val = poly.eval(&point);
                if val.is_zero() {
                    assert!(det.is_zero());
                } else {
                    ratios.push((fl.param.clone(), det / (&val * &val)));
                }
            }
        }
        for (p, r) in &ratios {
            let first = ratios.iter().find(|(p2, _)| p2 == p).unwrap();
            assert_eq!(r, &first.1, "OG({n}) at {p}");
        }
    }

    #[test]
    fn orthogonal_condition_is_a_square_root() {
        for n in 1..=4 {
            check_orthogonal_square(n, Anchor::Infinity);
            check_orthogonal_square(n, Anchor::Zero);
        }
    }

    #[test]
    fn og1_condition() {
        let space = Space::Orthogonal { n: 1 };
        let chart = cell_chart(&space, &space.top().unwrap(), Anchor::Infinity).unwrap();
        let g = condition_polynomials(&chart, &Condition::Simple, &osculating_flag(CurveKind::Orthogonal(1), &Param::int(4))).unwrap();
        let c = Poly::var(1, 0);
        assert!(proportional(&g[0], &(&c - &Poly::constant(1, q(4)))));
    }

    #[test]
    fn build_system_checks_parameters() {
        let spec = ProblemSpec::repeated(Space::Lagrangian { n: 2 }, Condition::Simple, 3);
        let opts = SystemOptions::default();
        assert!(matches!(build_system(&spec, &[Param::int(1), Param::int(1), Param::int(2)], &opts), Err(Error::Parameter(_))));
        assert!(matches!(build_system(&spec, &[Param::int(1), Param::Infinity, Param::int(2)], &opts), Err(Error::Parameter(_))));
        assert!(matches!(build_system(&spec, &[Param::int(1)], &opts), Err(Error::Parameter(_))));
        let sys = build_system(&spec, &[Param::int(1), Param::int(2), Param::int(3)], &opts).unwrap();
        assert_eq!(sys.nvars(), 3);
        assert_eq!(sys.degrees(), [2, 2, 2]);
        assert!(sys.render().contains("# simple at 2"));
    }

    #[test]
    fn worked_example_system() {
        let space = Space::Lagrangian { n: 2 };
        let spec = ProblemSpec::repeated(space.clone(), Condition::Simple, 2).with_target(space.parse_index("2").unwrap());
        let sys = build_system(&spec, &[Param::int(0), Param::int(1)], &SystemOptions::default()).unwrap();
        assert_eq!(sys.polys[0].to_string(), "-x1");
        assert_eq!(sys.polys[1].to_string(), "x0^2 - x0 - x1 + 1/3");
    }

    #[test]
    fn flag_system_degrees_alternate() {
        let fl = Space::Flag { n: 5, d: vec![2, 3] };
        let conds: Vec<Condition> = [1, 2, 1, 2, 1, 2, 1, 2].iter().map(|&i| Condition::Stage(i)).collect();
        let params: Vec<Param> = [-8, -4, -2, -1, 1, 2, 4, 8].iter().map(|&s| Param::int(s)).collect();
        let sys = build_system(&ProblemSpec::new(fl, conds), &params, &SystemOptions::default()).unwrap();
        assert_eq!(sys.degrees(), [2, 3, 2, 3, 2, 3, 2, 3]);
        assert_eq!(sys.bezout(), 1296);
    }

    #[test]
    fn general_conditions_are_gated() {
        let gr = Space::Grassmannian { k: 2, n: 4 };
        let conds = vec![
            Condition::Schur(Partition::new(vec![2]).unwrap()),
            Condition::Schur(Partition::new(vec![1]).unwrap()),
            Condition::Schur(Partition::new(vec![1]).unwrap()),
        ];
        let spec = ProblemSpec::new(gr, conds);
        let params = [Param::int(1), Param::int(2), Param::int(3)];
        assert!(matches!(build_system(&spec, &params, &SystemOptions::default()), Err(Error::Capability(_))));
        let opts = SystemOptions { allow_general: true, ..SystemOptions::default() };
        let sys = build_system(&spec, &params, &opts).unwrap();
        assert_eq!(sys.polys.len(), 4);
        assert!(!sys.checks.is_empty());
    }

    #[test]
    fn closed_form_specializations() {
        let [(x, y), _] = lg2_closed_form_exact(&q(0), &q(1)).unwrap();
        assert_eq!((x.re, x.im), (ratio(1, 2), ratio(-1, 6)));
        assert!(y.re.is_zero() && y.im.is_zero());
        let [(x, y), _] = lg2_closed_form_exact(&q(1), &q(2)).unwrap();
        assert_eq!((x.re, x.im), (ratio(3, 2), ratio(-1, 6)));
        assert_eq!((y.re, y.im), (q(1), ratio(-1, 3)));
        assert!(lg2_closed_form(2.0, 2.0).is_err());
    }

    #[test]
    fn discriminant_values() {
        let s = [1, 2, 3, 4, 5, 6].map(q);
        assert!(og3_discriminant_exact(&s).is_positive());
        assert!(og3_discriminant_exact(&[7, 7, 7, 7, 1, 2].map(q)).is_zero());
        assert!(og3_discriminant_exact(&[0, 0, 0, 1, 2, 3].map(q)).is_positive());
        assert_eq!(og3_discriminant(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]), to_f64(&og3_discriminant_exact(&s)));
    }
}
