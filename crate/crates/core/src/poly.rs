//! Sparse multivariate polynomials with exact rational coefficients.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Exponent = Vec<u32>;

/// A polynomial in `nvars` variables `x0, x1, ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Exponent, BigRational>,
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Reads `"3"`, `"-2/7"`, `"0.125"` or `"1e-3"` as an exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let t = text.trim();
    let bad = || Error::Parse(format!("cannot read number {text:?}"));
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    if let Ok(n) = t.parse::<BigInt>() {
        return Ok(BigRational::from_integer(n));
    }
    let x: f64 = t.parse().map_err(|_| bad())?;
    // decimal strings are read through their shortest round-trip form, so 0.1 is 1/10
    let shortest = format!("{x:e}");
    let (mantissa, exp) = shortest.split_once('e').ok_or_else(bad)?;
    let exp: i32 = exp.parse().map_err(|_| bad())?;
    let (sign, digits) = mantissa.strip_prefix('-').map_or((1, mantissa), |m| (-1, m));
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    let numer: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        BigRational::from_integer(numer * ten.pow(scale as u32))
    } else {
        BigRational::new(numer, ten.pow((-scale) as u32))
    };
    Ok(if sign < 0 { -value } else { value })
}

pub fn rational_from_f64(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or_else(|| Error::Parse(format!("{x} is not finite")))
}

pub fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Poly::constant(nvars, BigRational::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable x{i} out of range");
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Poly::zero(nvars);
        p.terms.insert(e, BigRational::one());
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exponent, BigRational)>) -> Self {
        let mut p = Poly::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent length");
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Exponent, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &BigRational)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; the zero polynomial has degree 0.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn coefficient(&self, e: &[u32]) -> BigRational {
        self.terms.get(e).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn constant_term(&self) -> BigRational {
        self.coefficient(&vec![0; self.nvars])
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect() }
    }

    pub fn max_abs_coefficient(&self) -> BigRational {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_else(BigRational::zero)
    }

    pub fn eval(&self, x: &[BigRational]) -> BigRational {
        assert_eq!(x.len(), self.nvars);
        let mut total = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &k) in x.iter().zip(e) {
                if k > 0 {
                    t *= num_traits::pow(xi.clone(), k as usize);
                }
            }
            total += t;
        }
        total
    }

    pub fn eval_complex(&self, x: &[Complex64]) -> Complex64 {
        assert_eq!(x.len(), self.nvars);
        self.terms
            .iter()
            .map(|(e, c)| {
                x.iter().zip(e).fold(Complex64::new(to_f64(c), 0.0), |acc, (xi, &k)| acc * xi.powu(k))
            })
            .sum()
    }

    /// Replaces variable `i` by the constant `c`, keeping the variable count.
    pub fn substitute(&self, i: usize, c: &BigRational) -> Self {
        let mut out = Poly::zero(self.nvars);
        for (e, v) in &self.terms {
            let mut e2 = e.clone();
            let k = std::mem::take(&mut e2[i]);
            out.add_term(e2, v * num_traits::pow(c.clone(), k as usize));
        }
        out
    }

    /// Text form with variable names taken from `names`.
    pub fn render(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        // highest degree first, then lexicographically largest exponent
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| {
            let (da, db) = (a.iter().sum::<u32>(), b.iter().sum::<u32>());
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        for (i, (e, c)) in terms.into_iter().enumerate() {
            let monomial: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(j, &k)| if k == 1 { names[j].clone() } else { format!("{}^{k}", names[j]) })
                .collect();
            let negative = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out += if negative { " - " } else { " + " };
            }
            if monomial.is_empty() {
                out += &mag.to_string();
            } else {
                if !mag.is_one() {
                    out += &format!("{mag}*");
                }
                out += &monomial.join("*");
            }
        }
        out
    }

    pub fn default_names(nvars: usize) -> Vec<String> {
        (0..nvars).map(|i| format!("x{i}")).collect()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&Poly::default_names(self.nvars)))
    }
}

impl Add for &Poly {
    type Output = Poly;

    fn add(self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;

    fn sub(self, other: &Poly) -> Poly {
        self + &(-other)
    }
}

impl Neg for &Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }
}

impl Mul for &Poly {
    type Output = Poly;

    fn mul(self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars);
        let mut acc: HashMap<Exponent, BigRational> = HashMap::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let e: Exponent = a.iter().zip(b).map(|(x, y)| x + y).collect();
                *acc.entry(e).or_insert_with(BigRational::zero) += ca * cb;
            }
        }
        Poly { nvars: self.nvars, terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Poly {
            type Output = Poly;

            fn $m(self, other: Poly) -> Poly {
                (&self).$m(&other)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Determinant by Laplace expansion over column subsets, one row at a time.
pub fn determinant(m: &[Vec<Poly>]) -> Result<Poly> {
    let size = m.len();
    let Some(nvars) = m.first().map(|row| row.first().map_or(0, Poly::nvars)) else {
        return Err(Error::Shape("determinant of an empty matrix".into()));
    };
    if m.iter().any(|row| row.len() != size) {
        return Err(Error::Shape(format!("determinant needs a square matrix, got {size} rows of lengths {:?}", m.iter().map(Vec::len).collect::<Vec<_>>())));
    }
    if size > 24 {
        return Err(Error::Size(format!("determinant of size {size}")));
    }
    Ok(minor(m, &(0..size).collect::<Vec<_>>(), &(0..size).collect::<Vec<_>>(), nvars))
}

/// Determinant of the submatrix on the given rows and columns.
pub fn minor(m: &[Vec<Poly>], rows: &[usize], cols: &[usize], nvars: usize) -> Poly {
    assert_eq!(rows.len(), cols.len());
    // minors of the first r rows, keyed by the bitmask of columns used
    let mut layer: HashMap<u32, Poly> = HashMap::from([(0u32, Poly::one(nvars))]);
    for &row in rows {
        let mut next: HashMap<u32, Poly> = HashMap::new();
        for (mask, value) in &layer {
            if value.is_zero() {
                continue;
            }
            for (j, &col) in cols.iter().enumerate() {
                if mask & (1 << j) != 0 || m[row][col].is_zero() {
                    continue;
                }
                // sign from the number of chosen columns to the right of j
                let right = (mask >> (j + 1)).count_ones();
                let mut term = &m[row][col] * value;
                if right % 2 == 1 {
                    term = -&term;
                }
                let slot = next.entry(mask | (1 << j)).or_insert_with(|| Poly::zero(nvars));
                *slot = &*slot + &term;
            }
        }
        layer = next;
    }
    layer.remove(&((1u32 << cols.len()) - 1)).unwrap_or_else(|| Poly::zero(nvars))
}

/// Pfaffian of an antisymmetric matrix of even size (zero for odd size).
pub fn pfaffian(m: &[Vec<Poly>], nvars: usize) -> Poly {
    let idx: Vec<usize> = (0..m.len()).collect();
    pfaffian_on(m, &idx, nvars, &mut HashMap::new())
}

/// Pfaffian of the principal submatrix on `idx`.
pub fn pfaffian_on(m: &[Vec<Poly>], idx: &[usize], nvars: usize, memo: &mut HashMap<Vec<usize>, Poly>) -> Poly {
    if idx.is_empty() {
        return Poly::one(nvars);
    }
    if idx.len() % 2 == 1 {
        return Poly::zero(nvars);
    }
    if let Some(p) = memo.get(idx) {
        return p.clone();
    }
    let mut total = Poly::zero(nvars);
    let first = idx[0];
    for j in 1..idx.len() {
        let a = &m[first][idx[j]];
        if a.is_zero() {
            continue;
        }
        let rest: Vec<usize> = idx.iter().enumerate().filter(|&(t, _)| t != 0 && t != j).map(|(_, &v)| v).collect();
        let sub = pfaffian_on(m, &rest, nvars, memo);
        let term = a * &sub;
        total = if j % 2 == 1 { &total + &term } else { &total - &term };
    }
    memo.insert(idx.to_vec(), total.clone());
    total
}
