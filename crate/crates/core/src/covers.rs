//! Cover relations with multiplicities: the structure constants of a Schubert
//! class times a condition class, restricted to the classes one condition lower.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::indexing::{dimension, FlagPermutation, GrassIndex, Index, Space, StrictPartition};

/// An integer partition with trailing zeros removed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if parts.windows(2).any(|p| p[0] < p[1]) {
            return Err(Error::InvalidIndex(format!("{parts:?} is not weakly decreasing")));
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    /// Part `i` (0-based), zero past the end.
    pub fn part(&self, i: usize) -> usize {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn fits(&self, rows: usize, cols: usize) -> bool {
        self.0.len() <= rows && self.part(0) <= cols
    }

    pub fn contains(&self, other: &Partition) -> bool {
        other.len() <= self.len() && other.0.iter().zip(&self.0).all(|(a, b)| a <= b)
    }

    /// Codimension partition of a Grassmannian index: `l_i = n - k + i - a_i`.
    pub fn of_grass(alpha: &GrassIndex) -> Self {
        let (k, n) = (alpha.k(), alpha.n());
        let parts = alpha.alpha().iter().enumerate().map(|(i, a)| n - k + i + 1 - a).collect();
        Partition::new(parts).expect("codimension partition is decreasing")
    }

    /// Inverse of [`Partition::of_grass`] inside the `k x (n-k)` box.
    pub fn to_grass(&self, k: usize, n: usize) -> Result<GrassIndex> {
        if !self.fits(k, n - k) {
            return Err(Error::InvalidIndex(format!("{self} does not fit in a {k}x{} box", n - k)));
        }
        GrassIndex::new((0..k).map(|i| n - k + i + 1 - self.part(i)).collect(), n)
    }

    /// Parses `"2,1"` or `"21"`.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() || text == "∅" {
            return Ok(Partition::empty());
        }
        let bad = || Error::Parse(format!("cannot read partition {text:?}"));
        let parts: Result<Vec<usize>> = if text.contains(',') {
            text.split(',').map(|t| t.trim().parse().map_err(|_| bad())).collect()
        } else {
            text.chars().map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(bad)).collect()
        };
        Partition::new(parts?)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A condition class imposed at one stage of an enumerative problem.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Condition {
    /// The simple class `tau_i` of a partial flag manifold (1-based stage).
    Stage(usize),
    /// A Schubert class `sigma_mu` of a Grassmannian.
    Schur(Partition),
    /// The unique simple class of `OG(n)` or `LG(n)`.
    Simple,
}

impl Condition {
    pub fn codimension(&self) -> usize {
        match self {
            Condition::Stage(_) | Condition::Simple => 1,
            Condition::Schur(mu) => mu.size(),
        }
    }

    pub fn is_simple(&self) -> bool {
        match self {
            Condition::Schur(mu) => mu.parts() == [1],
            _ => true,
        }
    }

    pub fn check(&self, space: &Space) -> Result<()> {
        match (space, self) {
            (Space::Flag { d, .. }, Condition::Stage(i)) => {
                if *i == 0 || *i > d.len() {
                    Err(Error::Stage { stage: *i, max: d.len() })
                } else {
                    Ok(())
                }
            }
            (Space::Grassmannian { k, n }, Condition::Schur(mu)) => {
                if mu.is_empty() || !mu.fits(*k, n - k) {
                    Err(Error::Spec(format!("condition {mu} must be nonempty and fit in a {k}x{} box", n - k)))
                } else {
                    Ok(())
                }
            }
            (Space::Orthogonal { .. } | Space::Lagrangian { .. }, Condition::Simple) => Ok(()),
            _ => Err(Error::Spec(format!("condition {self:?} does not apply to {space}"))),
        }
    }
}

/// The classes `v` appearing in `[X_w] * [Y]` with their multiplicities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverList {
    pub source: Index,
    pub covers: Vec<(Index, u64)>,
}

impl CoverList {
    pub fn multiplicity(&self, target: &Index) -> u64 {
        self.covers.iter().find(|(v, _)| v == target).map_or(0, |(_, m)| *m)
    }

    pub fn targets(&self) -> impl Iterator<Item = &Index> {
        self.covers.iter().map(|(v, _)| v)
    }
}

fn sorted(source: Index, mut covers: Vec<(Index, u64)>) -> CoverList {
    covers.sort();
    CoverList { source, covers }
}

/// Monk's formula for the simple class `tau_i` at stage `i`.
pub fn monk_covers(w: &FlagPermutation, stage: usize) -> Result<CoverList> {
    let shape = w.shape();
    if stage == 0 || stage > shape.stages() {
        return Err(Error::Stage { stage, max: shape.stages() });
    }
    let di = shape.dims()[stage - 1];
    let word = w.word();
    let n = shape.n();
    let mut covers = Vec::new();
    for j in 1..=di {
        for k in di + 1..=n {
            let (wj, wk) = (word[j - 1], word[k - 1]);
            if wj <= wk {
                continue;
            }
            let swapped = w.swapped_word(j, k);
            if (j + 1..k).all(|l| word[l - 1] > wj || wk > word[l - 1]) && shape.is_minimal(&swapped) {
                let v = FlagPermutation::new(swapped, shape.clone())?;
                covers.push((Index::Perm(v), 1));
            }
        }
    }
    Ok(sorted(Index::Perm(w.clone()), covers))
}

/// Littlewood-Richardson coefficient `c^nu_{lam, mu}`, counted as skew tableaux of
/// shape `nu/lam` and content `mu` whose reverse reading word is a lattice word.
pub fn lr_coefficient(nu: &Partition, lam: &Partition, mu: &Partition) -> u64 {
    if nu.size() != lam.size() + mu.size() || !nu.contains(lam) {
        return 0;
    }
    if mu.is_empty() {
        return 1;
    }
    let rows = nu.len();
    let mut filling: Vec<Vec<usize>> = (0..rows).map(|r| vec![0; nu.part(r)]).collect();
    let mut counts = vec![0usize; mu.len() + 1];
    let cells: Vec<(usize, usize)> = (0..rows)
        .flat_map(|r| (lam.part(r)..nu.part(r)).rev().map(move |c| (r, c)))
        .collect();
    count_lr(&cells, 0, lam, mu, &mut filling, &mut counts)
}

fn count_lr(
    cells: &[(usize, usize)],
    at: usize,
    lam: &Partition,
    mu: &Partition,
    filling: &mut Vec<Vec<usize>>,
    counts: &mut Vec<usize>,
) -> u64 {
    let Some(&(r, c)) = cells.get(at) else {
        return 1;
    };
    let mut total = 0;
    // rows weakly increase left to right, and the cell to the right is already filled
    let upper = if c + 1 < filling[r].len() { filling[r][c + 1] } else { mu.len() };
    // columns strictly increase downward
    let lower = if r > 0 && c >= lam.part(r - 1) { filling[r - 1][c] + 1 } else { 1 };
    for v in lower..=upper.min(mu.len()) {
        if counts[v] == mu.part(v - 1) || (v > 1 && counts[v] == counts[v - 1]) {
            continue;
        }
        counts[v] += 1;
        filling[r][c] = v;
        total += count_lr(cells, at + 1, lam, mu, filling, counts);
        counts[v] -= 1;
    }
    filling[r][c] = 0;
    total
}

/// Memoizing wrapper around [`lr_coefficient`], owned by a single computation.
#[derive(Debug, Default)]
pub struct LrCache {
    table: HashMap<(Partition, Partition, Partition), u64>,
}

impl LrCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn coefficient(&mut self, nu: &Partition, lam: &Partition, mu: &Partition) -> u64 {
        let key = (nu.clone(), lam.clone(), mu.clone());
        if let Some(&c) = self.table.get(&key) {
            return c;
        }
        let c = lr_coefficient(nu, lam, mu);
        self.table.insert(key, c);
        c
    }
}

/// Classes `v` in `[X_w] * sigma_mu` on a Grassmannian, weighted by LR coefficients.
pub fn grassmann_covers(w: &GrassIndex, mu: &Partition) -> Result<CoverList> {
    grassmann_covers_cached(w, mu, &mut LrCache::new())
}

pub fn grassmann_covers_cached(w: &GrassIndex, mu: &Partition, cache: &mut LrCache) -> Result<CoverList> {
    let (k, n) = (w.k(), w.n());
    if !mu.fits(k, n - k) {
        return Err(Error::Spec(format!("{mu} does not fit in Gr({k},{n})")));
    }
    let source = Index::Grass(w.clone());
    if mu.size() > w.dimension() {
        return Ok(CoverList { source, covers: Vec::new() });
    }
    let lam = Partition::of_grass(w);
    let mut covers = Vec::new();
    let mut nu = vec![0; k];
    grow(&lam, mu.size(), n - k, 0, &mut nu, &mut |nu| {
        let nu = Partition::new(nu.to_vec()).expect("grown partitions are decreasing");
        let c = cache.coefficient(&nu, &lam, mu);
        if c > 0 {
            covers.push((Index::Grass(nu.to_grass(k, n).expect("grown inside the box")), c));
        }
    });
    Ok(sorted(source, covers))
}

/// Visits every partition `nu` in the box that contains `lam` with `|nu| = |lam| + extra`.
fn grow(lam: &Partition, extra: usize, cols: usize, row: usize, nu: &mut [usize], visit: &mut dyn FnMut(&[usize])) {
    if row == nu.len() {
        if extra == 0 {
            visit(nu);
        }
        return;
    }
    let base = lam.part(row);
    let cap = if row == 0 { cols } else { nu[row - 1] };
    for add in 0..=extra {
        if base + add > cap {
            break;
        }
        nu[row] = base + add;
        grow(lam, extra - add, cols, row + 1, nu, visit);
    }
}

/// Strict partitions covered by `lam` in the componentwise order: decrease one
/// part by one while staying strict (a part equal to 1 is removed).
fn strict_lower_covers(lam: &StrictPartition) -> Vec<StrictPartition> {
    let parts = lam.parts();
    let mut out = Vec::new();
    for i in 0..parts.len() {
        let next = parts.get(i + 1).copied().unwrap_or(0);
        if parts[i] - 1 > next || parts[i] == 1 {
            let mut p = parts.to_vec();
            p[i] -= 1;
            if p[i] == 0 {
                p.pop();
            }
            out.push(StrictPartition::new(p, lam.n()).expect("cover of a strict partition is strict"));
        }
    }
    out
}

/// Chevalley formula on `OG(n)`: every cover with multiplicity one.
pub fn og_covers(lam: &StrictPartition) -> CoverList {
    let covers = strict_lower_covers(lam).into_iter().map(|mu| (Index::Strict(mu), 1)).collect();
    sorted(Index::Strict(lam.clone()), covers)
}

/// Chevalley formula on `LG(n)`: multiplicity 2 exactly when `mu` and `lam` have the same length.
pub fn lg_covers(lam: &StrictPartition) -> CoverList {
    let covers = strict_lower_covers(lam)
        .into_iter()
        .map(|mu| {
            let m = if mu.len() == lam.len() { 2 } else { 1 };
            (Index::Strict(mu), m)
        })
        .collect();
    sorted(Index::Strict(lam.clone()), covers)
}

/// Dispatches to the cover rule appropriate for `space` and `condition`.
pub fn covers(space: &Space, w: &Index, condition: &Condition, cache: &mut LrCache) -> Result<CoverList> {
    condition.check(space)?;
    if !space.contains(w) {
        return Err(Error::Shape(format!("index {w} does not belong to {space}")));
    }
    match (space, w, condition) {
        (Space::Flag { .. }, Index::Perm(p), Condition::Stage(i)) => monk_covers(p, *i),
        (Space::Grassmannian { .. }, Index::Grass(a), Condition::Schur(mu)) => grassmann_covers_cached(a, mu, cache),
        (Space::Orthogonal { .. }, Index::Strict(l), Condition::Simple) => Ok(og_covers(l)),
        (Space::Lagrangian { .. }, Index::Strict(l), Condition::Simple) => Ok(lg_covers(l)),
        _ => unreachable!("condition and index checked against the space"),
    }
    .inspect(|list| {
        debug_assert!(list
            .targets()
            .all(|v| dimension(v) + condition.codimension() == dimension(w)));
    })
}
