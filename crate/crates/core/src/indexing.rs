//! Index sets and Bruhat orders for partial flag manifolds, Grassmannians and
//! the maximal isotropic Grassmannians `OG(n)` and `LG(n)`.
//!
//! Every index carries enough of its ambient shape to be validated on its own,
//! and all indices order first by dimension and then lexicographically, so any
//! list built from them is reproducible.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default bound on the ambient dimension accepted by [`enumerate_indices`].
pub const DEFAULT_ENUMERATION_CAP: usize = 16;

/// Hard bound on the number of indices materialized at once.
const MAX_INDEX_COUNT: u128 = 20_000_000;

/// Dimension vector `0 < d_1 < ... < d_m < n` of a partial flag manifold.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FlagShape {
    n: usize,
    d: Vec<usize>,
}

impl FlagShape {
    pub fn new(n: usize, d: Vec<usize>) -> Result<Self> {
        if d.is_empty() {
            return Err(Error::Shape("flag shape needs at least one subspace".into()));
        }
        if d[0] == 0 || *d.last().unwrap() >= n || d.windows(2).any(|p| p[0] >= p[1]) {
            return Err(Error::Shape(format!(
                "dimensions {d:?} must be strictly increasing inside (0, {n})"
            )));
        }
        Ok(FlagShape { n, d })
    }

    /// The complete flag manifold of `C^n`.
    pub fn full(n: usize) -> Result<Self> {
        Self::new(n, (1..n).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dims(&self) -> &[usize] {
        &self.d
    }

    /// Number of stages `m`.
    pub fn stages(&self) -> usize {
        self.d.len()
    }

    /// Block sizes `d_1, d_2 - d_1, ..., n - d_m`.
    pub fn blocks(&self) -> Vec<usize> {
        let mut prev = 0;
        let mut out = Vec::with_capacity(self.d.len() + 1);
        for &x in self.d.iter().chain(std::iter::once(&self.n)) {
            out.push(x - prev);
            prev = x;
        }
        out
    }

    pub fn dimension(&self) -> usize {
        let total = self.n * (self.n - 1) / 2;
        total - self.blocks().iter().map(|b| b * b.saturating_sub(1) / 2).sum::<usize>()
    }

    /// `|I_d|`, the multinomial coefficient `n! / prod(block!)`.
    pub fn index_count(&self) -> u128 {
        let mut count: u128 = 1;
        let mut placed: u128 = 0;
        for b in self.blocks() {
            for j in 1..=b as u128 {
                placed += 1;
                count = count * placed / j;
            }
        }
        count
    }

    /// 1-based stage whose subspace has dimension `dim`.
    pub fn stage_of_dim(&self, dim: usize) -> Result<usize> {
        self.d
            .iter()
            .position(|&x| x == dim)
            .map(|p| p + 1)
            .ok_or_else(|| Error::Shape(format!("no subspace of dimension {dim} in {:?}", self.d)))
    }

    /// Whether `word` has all its descents at positions in `d`.
    pub fn is_minimal(&self, word: &[usize]) -> bool {
        (1..word.len()).all(|i| word[i - 1] < word[i] || self.d.contains(&i))
    }

    fn check_stage(&self, stage: usize) -> Result<usize> {
        if stage == 0 || stage > self.d.len() {
            return Err(Error::Stage { stage, max: self.d.len() });
        }
        Ok(self.d[stage - 1])
    }
}

/// Minimal coset representative in `I_d`: a permutation whose descents lie in `d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FlagPermutation {
    word: Vec<usize>,
    shape: FlagShape,
}

impl FlagPermutation {
    pub fn new(word: Vec<usize>, shape: FlagShape) -> Result<Self> {
        let n = shape.n;
        if word.len() != n {
            return Err(Error::InvalidIndex(format!("{word:?} has length {} but n = {n}", word.len())));
        }
        let mut seen = vec![false; n + 1];
        for &x in &word {
            if x == 0 || x > n || seen[x] {
                return Err(Error::InvalidIndex(format!("{word:?} is not a permutation of 1..{n}")));
            }
            seen[x] = true;
        }
        for i in 1..n {
            if word[i - 1] > word[i] && !shape.d.contains(&i) {
                return Err(Error::InvalidIndex(format!(
                    "{word:?} has a descent at {i}, outside {:?}",
                    shape.d
                )));
            }
        }
        Ok(FlagPermutation { word, shape })
    }

    pub fn identity(shape: &FlagShape) -> Self {
        FlagPermutation { word: (1..=shape.n).collect(), shape: shape.clone() }
    }

    /// Longest element of `I_d`: each block holds the largest remaining values in increasing order.
    pub fn longest(shape: &FlagShape) -> Self {
        let mut word = Vec::with_capacity(shape.n);
        let mut top = shape.n;
        for b in shape.blocks() {
            word.extend(top + 1 - b..=top);
            top -= b;
        }
        FlagPermutation { word, shape: shape.clone() }
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn shape(&self) -> &FlagShape {
        &self.shape
    }

    /// Number of inversions.
    pub fn length(&self) -> usize {
        inversions(&self.word)
    }

    /// The permutation `w(j,k)` obtained by swapping positions `j` and `k` (1-based).
    /// The result need not lie in `I_d`; callers check membership.
    pub(crate) fn swapped_word(&self, j: usize, k: usize) -> Vec<usize> {
        let mut v = self.word.clone();
        v.swap(j - 1, k - 1);
        v
    }
}

pub(crate) fn inversions(word: &[usize]) -> usize {
    let mut count = 0;
    for i in 0..word.len() {
        for j in i + 1..word.len() {
            if word[i] > word[j] {
                count += 1;
            }
        }
    }
    count
}

/// Schubert index of `Gr(k, n)`: an increasing sequence `1 <= a_1 < ... < a_k <= n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GrassIndex {
    n: usize,
    alpha: Vec<usize>,
}

impl GrassIndex {
    pub fn new(alpha: Vec<usize>, n: usize) -> Result<Self> {
        if alpha.is_empty() || alpha.len() > n {
            return Err(Error::InvalidIndex(format!("{alpha:?} is not a valid index of Gr(_, {n})")));
        }
        if alpha[0] == 0 || *alpha.last().unwrap() > n || alpha.windows(2).any(|p| p[0] >= p[1]) {
            return Err(Error::InvalidIndex(format!("{alpha:?} must be strictly increasing in 1..={n}")));
        }
        Ok(GrassIndex { n, alpha })
    }

    pub fn bottom(k: usize, n: usize) -> Self {
        GrassIndex { n, alpha: (1..=k).collect() }
    }

    pub fn top(k: usize, n: usize) -> Self {
        GrassIndex { n, alpha: (n - k + 1..=n).collect() }
    }

    pub fn k(&self) -> usize {
        self.alpha.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> &[usize] {
        &self.alpha
    }

    /// `sum(a_i - i)`.
    pub fn dimension(&self) -> usize {
        self.alpha.iter().enumerate().map(|(i, a)| a - (i + 1)).sum()
    }

    /// `sum(n - k + i - a_i)`.
    pub fn codimension(&self) -> usize {
        let k = self.k();
        k * (self.n - k) - self.dimension()
    }
}

/// Strict partition `n >= l_1 > ... > l_r > 0`, indexing Schubert cells of `OG(n)` and `LG(n)`.
/// The empty partition is the point class.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StrictPartition {
    n: usize,
    parts: Vec<usize>,
}

impl StrictPartition {
    pub fn new(parts: Vec<usize>, n: usize) -> Result<Self> {
        if parts.iter().any(|&p| p == 0 || p > n) || parts.windows(2).any(|p| p[0] <= p[1]) {
            return Err(Error::InvalidIndex(format!(
                "{parts:?} is not a strict partition with parts in 1..={n}"
            )));
        }
        Ok(StrictPartition { n, parts })
    }

    pub fn empty(n: usize) -> Self {
        StrictPartition { n, parts: Vec::new() }
    }

    /// `(n, n-1, ..., 1)`.
    pub fn staircase(n: usize) -> Self {
        StrictPartition { n, parts: (1..=n).rev().collect() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Componentwise comparison, missing parts read as zero.
    pub fn contained_in(&self, other: &StrictPartition) -> bool {
        self.parts.len() <= other.parts.len()
            && self.parts.iter().zip(&other.parts).all(|(a, b)| a <= b)
    }
}

/// The ambient space whose Schubert cells are being indexed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Space {
    /// Partial flag manifold `Fl_d` of `C^n`.
    Flag { n: usize, d: Vec<usize> },
    /// Grassmannian of `k`-planes in `C^n`.
    Grassmannian { k: usize, n: usize },
    /// Maximal isotropic subspaces of a `2n+1`-dimensional orthogonal space.
    #[serde(rename = "og")]
    Orthogonal { n: usize },
    /// Lagrangian subspaces of a `2n`-dimensional symplectic space.
    #[serde(rename = "lg")]
    Lagrangian { n: usize },
}

impl Space {
    pub fn flag(shape: &FlagShape) -> Self {
        Space::Flag { n: shape.n, d: shape.d.clone() }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Space::Flag { .. } => self.flag_shape().map(|_| ()),
            Space::Grassmannian { k, n } => {
                if *k == 0 || k >= n {
                    Err(Error::Shape(format!("Gr({k},{n}) needs 0 < k < n")))
                } else {
                    Ok(())
                }
            }
            Space::Orthogonal { n } | Space::Lagrangian { n } => {
                if *n == 0 {
                    Err(Error::Shape("isotropic Grassmannian needs n >= 1".into()))
                } else {
                    Ok(())
                }
            }
        }
    }

    pub fn flag_shape(&self) -> Result<FlagShape> {
        match self {
            Space::Flag { n, d } => FlagShape::new(*n, d.clone()),
            _ => Err(Error::Shape(format!("{self} is not a partial flag manifold"))),
        }
    }

    /// Ambient dimension used by the enumeration cap.
    pub fn ambient(&self) -> usize {
        match self {
            Space::Flag { n, .. } | Space::Grassmannian { n, .. } => *n,
            Space::Orthogonal { n } | Space::Lagrangian { n } => *n,
        }
    }

    pub fn dimension(&self) -> Result<usize> {
        self.validate()?;
        Ok(match self {
            Space::Flag { .. } => self.flag_shape()?.dimension(),
            Space::Grassmannian { k, n } => k * (n - k),
            Space::Orthogonal { n } | Space::Lagrangian { n } => n * (n + 1) / 2,
        })
    }

    /// The point class `0̂`.
    pub fn bottom(&self) -> Result<Index> {
        self.validate()?;
        Ok(match self {
            Space::Flag { .. } => Index::Perm(FlagPermutation::identity(&self.flag_shape()?)),
            Space::Grassmannian { k, n } => Index::Grass(GrassIndex::bottom(*k, *n)),
            Space::Orthogonal { n } | Space::Lagrangian { n } => Index::Strict(StrictPartition::empty(*n)),
        })
    }

    /// The fundamental class `1̂`.
    pub fn top(&self) -> Result<Index> {
        self.validate()?;
        Ok(match self {
            Space::Flag { .. } => Index::Perm(FlagPermutation::longest(&self.flag_shape()?)),
            Space::Grassmannian { k, n } => Index::Grass(GrassIndex::top(*k, *n)),
            Space::Orthogonal { n } | Space::Lagrangian { n } => Index::Strict(StrictPartition::staircase(*n)),
        })
    }

    pub fn index_count(&self) -> Result<u128> {
        self.validate()?;
        Ok(match self {
            Space::Flag { .. } => self.flag_shape()?.index_count(),
            Space::Grassmannian { k, n } => binomial(*n as u128, *k as u128),
            Space::Orthogonal { n } | Space::Lagrangian { n } => 1u128 << *n,
        })
    }

    /// Whether `index` is an index of this space.
    pub fn contains(&self, index: &Index) -> bool {
        match (self, index) {
            (Space::Flag { n, d }, Index::Perm(w)) => w.shape.n == *n && &w.shape.d == d,
            (Space::Grassmannian { k, n }, Index::Grass(a)) => a.k() == *k && a.n == *n,
            (Space::Orthogonal { n }, Index::Strict(l)) | (Space::Lagrangian { n }, Index::Strict(l)) => {
                l.n == *n
            }
            _ => false,
        }
    }

    fn check(&self, index: &Index) -> Result<()> {
        if self.contains(index) {
            Ok(())
        } else {
            Err(Error::Shape(format!("index {index} does not belong to {self}")))
        }
    }

    /// Parse the text encoding of an index of this space.
    ///
    /// Permutations and strict partitions are digit strings (`"23145"`, `"321"`,
    /// `""` for the empty partition); Grassmannian indices are comma lists
    /// (`"3,5,7"`). Comma lists are accepted everywhere, and a bare digit string
    /// is accepted for Grassmannian indices when `n < 10`.
    pub fn parse_index(&self, text: &str) -> Result<Index> {
        self.validate()?;
        let text = text.trim();
        let values = parse_list(text)?;
        match self {
            Space::Flag { .. } => Ok(Index::Perm(FlagPermutation::new(values, self.flag_shape()?)?)),
            Space::Grassmannian { k, n } => {
                let idx = GrassIndex::new(values, *n)?;
                if idx.k() != *k {
                    return Err(Error::InvalidIndex(format!("{text:?} has {} entries, expected {k}", idx.k())));
                }
                Ok(Index::Grass(idx))
            }
            Space::Orthogonal { n } | Space::Lagrangian { n } => {
                let parts = if text == "∅" { Vec::new() } else { values };
                Ok(Index::Strict(StrictPartition::new(parts, *n)?))
            }
        }
    }
}

fn parse_list(text: &str) -> Result<Vec<usize>> {
    if text.is_empty() || text == "∅" {
        return Ok(Vec::new());
    }
    let bad = || Error::Parse(format!("cannot read index {text:?}"));
    if text.contains(',') {
        text.split(',').map(|t| t.trim().parse::<usize>().map_err(|_| bad())).collect()
    } else {
        text.chars().map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(bad)).collect()
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Space::Flag { n, d } => {
                let d: Vec<String> = d.iter().map(|x| x.to_string()).collect();
                write!(f, "Fl({};{})", d.join(","), n)
            }
            Space::Grassmannian { k, n } => write!(f, "Gr({k},{n})"),
            Space::Orthogonal { n } => write!(f, "OG({n})"),
            Space::Lagrangian { n } => write!(f, "LG({n})"),
        }
    }
}

/// A Schubert index of any of the supported spaces.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Index {
    Perm(FlagPermutation),
    Grass(GrassIndex),
    Strict(StrictPartition),
}

impl Index {
    pub fn as_perm(&self) -> Option<&FlagPermutation> {
        match self {
            Index::Perm(w) => Some(w),
            _ => None,
        }
    }

    pub fn as_grass(&self) -> Option<&GrassIndex> {
        match self {
            Index::Grass(a) => Some(a),
            _ => None,
        }
    }

    pub fn as_strict(&self) -> Option<&StrictPartition> {
        match self {
            Index::Strict(l) => Some(l),
            _ => None,
        }
    }

    fn lex_key(&self) -> &[usize] {
        match self {
            Index::Perm(w) => &w.word,
            Index::Grass(a) => &a.alpha,
            Index::Strict(l) => &l.parts,
        }
    }
}

impl PartialOrd for Index {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Index {
    fn cmp(&self, other: &Self) -> Ordering {
        dimension(self)
            .cmp(&dimension(other))
            .then_with(|| self.lex_key().cmp(other.lex_key()))
    }
}

fn join_values(values: &[usize], sep_always: bool) -> String {
    if !sep_always && values.iter().all(|&v| v < 10) {
        values.iter().map(|v| v.to_string()).collect()
    } else {
        values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Index::Perm(w) => f.write_str(&join_values(&w.word, false)),
            Index::Grass(a) => f.write_str(&join_values(&a.alpha, true)),
            Index::Strict(l) => f.write_str(&join_values(&l.parts, false)),
        }
    }
}

/// `|w|`, the dimension of the Schubert variety `X_w`.
pub fn dimension(w: &Index) -> usize {
    match w {
        Index::Perm(p) => p.length(),
        Index::Grass(a) => a.dimension(),
        Index::Strict(l) => l.size(),
    }
}

/// Bruhat order `u <= w`.
///
/// Permutations are compared with the tableau criterion: for each `d_i`, the
/// sorted first `d_i` entries of `u` are componentwise at most those of `w`.
pub fn bruhat_leq(u: &Index, w: &Index, space: &Space) -> Result<bool> {
    space.check(u)?;
    space.check(w)?;
    Ok(match (u, w) {
        (Index::Perm(u), Index::Perm(w)) => u.shape.d.iter().all(|&k| {
            let mut a = u.word[..k].to_vec();
            let mut b = w.word[..k].to_vec();
            a.sort_unstable();
            b.sort_unstable();
            a.iter().zip(&b).all(|(x, y)| x <= y)
        }),
        (Index::Grass(u), Index::Grass(w)) => u.alpha.iter().zip(&w.alpha).all(|(x, y)| x <= y),
        (Index::Strict(u), Index::Strict(w)) => u.contained_in(w),
        _ => unreachable!("space check admits only matching index kinds"),
    })
}

/// `a(w)`: the first `d_i` entries of `w`, sorted.
pub fn alpha_of_w(w: &FlagPermutation, stage: usize) -> Result<GrassIndex> {
    let k = w.shape.check_stage(stage)?;
    let mut alpha = w.word[..k].to_vec();
    alpha.sort_unstable();
    GrassIndex::new(alpha, w.shape.n)
}

/// The Grassmannian permutation `w(a)` with its only descent at `k`.
pub fn w_of_alpha(alpha: &GrassIndex) -> Result<FlagPermutation> {
    let (k, n) = (alpha.k(), alpha.n);
    if k >= n {
        return Err(Error::Shape(format!("w(a) needs k < n, got k = {k}, n = {n}")));
    }
    let mut word = alpha.alpha.clone();
    word.extend((1..=n).filter(|x| !alpha.alpha.contains(x)));
    FlagPermutation::new(word, FlagShape::new(n, vec![k])?)
}

/// All indices of `space`, sorted by dimension then lexicographically.
pub fn enumerate_indices(space: &Space) -> Result<Vec<Index>> {
    enumerate_indices_with_cap(space, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_indices_with_cap(space: &Space, cap: usize) -> Result<Vec<Index>> {
    space.validate()?;
    if space.ambient() > cap {
        return Err(Error::Size(format!("{space} exceeds the enumeration cap n <= {cap}")));
    }
    let count = space.index_count()?;
    if count > MAX_INDEX_COUNT {
        return Err(Error::Size(format!("{space} has {count} indices")));
    }
    let mut out: Vec<Index> = match space {
        Space::Flag { .. } => {
            let shape = space.flag_shape()?;
            let mut words = Vec::with_capacity(count as usize);
            let blocks = shape.blocks();
            let mut used = vec![false; shape.n + 1];
            let mut word = Vec::with_capacity(shape.n);
            fill_blocks(&blocks, 0, &mut used, &mut word, &mut words);
            words
                .into_iter()
                .map(|word| Index::Perm(FlagPermutation { word, shape: shape.clone() }))
                .collect()
        }
        Space::Grassmannian { k, n } => combinations(*n, *k)
            .into_iter()
            .map(|alpha| Index::Grass(GrassIndex { n: *n, alpha }))
            .collect(),
        Space::Orthogonal { n } | Space::Lagrangian { n } => (0u32..1 << *n)
            .map(|mask| {
                let parts = (1..=*n).rev().filter(|p| mask & (1 << (p - 1)) != 0).collect();
                Index::Strict(StrictPartition { n: *n, parts })
            })
            .collect(),
    };
    out.sort();
    Ok(out)
}

fn fill_blocks(blocks: &[usize], b: usize, used: &mut [bool], word: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if b == blocks.len() {
        out.push(word.clone());
        return;
    }
    let free: Vec<usize> = (1..used.len()).filter(|&x| !used[x]).collect();
    for subset in combinations(free.len(), blocks[b]) {
        let chosen: Vec<usize> = subset.iter().map(|&i| free[i - 1]).collect();
        for &x in &chosen {
            used[x] = true;
        }
        word.extend(&chosen);
        fill_blocks(blocks, b + 1, used, word, out);
        word.truncate(word.len() - chosen.len());
        for &x in &chosen {
            used[x] = false;
        }
    }
}

/// Increasing `k`-subsets of `1..=n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (1..=k).collect();
    loop {
        out.push(cur.clone());
        let mut i = k;
        while i > 0 && cur[i - 1] == n - k + i {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        cur[i - 1] += 1;
        for j in i..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

pub(crate) fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(s: &str, n: usize, d: &[usize]) -> Index {
        Space::Flag { n, d: d.to_vec() }.parse_index(s).unwrap()
    }

    #[test]
    fn grassmannian_componentwise_order() {
        let gr = Space::Grassmannian { k: 3, n: 7 };
        let u = gr.parse_index("1,3,5").unwrap();
        let w = gr.parse_index("3,5,7").unwrap();
        assert!(bruhat_leq(&u, &w, &gr).unwrap());
        assert!(!bruhat_leq(&w, &u, &gr).unwrap());
        assert_eq!(dimension(&w), 9);
    }

    #[test]
    fn strict_partitions_three_and_two_one_are_incomparable() {
        let og = Space::Orthogonal { n: 3 };
        let a = og.parse_index("3").unwrap();
        let b = og.parse_index("21").unwrap();
        assert!(!bruhat_leq(&a, &b, &og).unwrap());
        assert!(!bruhat_leq(&b, &a, &og).unwrap());
        assert_eq!(dimension(&og.parse_index("321").unwrap()), 6);
    }

    #[test]
    fn tableau_criterion_example() {
        let d = [2, 3];
        let sp = Space::Flag { n: 5, d: d.to_vec() };
        assert!(bruhat_leq(&perm("13245", 5, &d), &perm("23145", 5, &d), &sp).unwrap());
    }

    #[test]
    fn mismatched_shapes_are_rejected() {
        let a = perm("123", 3, &[1, 2]);
        let b = perm("123", 3, &[1]);
        let sp = Space::Flag { n: 3, d: vec![1, 2] };
        assert!(matches!(bruhat_leq(&a, &b, &sp), Err(Error::Shape(_))));
    }

    #[test]
    fn projections() {
        let shape = FlagShape::new(5, vec![2, 3]).unwrap();
        let w = FlagPermutation::new(vec![2, 3, 1, 4, 5], shape.clone()).unwrap();
        assert_eq!(alpha_of_w(&w, 1).unwrap().alpha(), &[2, 3]);
        assert_eq!(alpha_of_w(&w, 2).unwrap().alpha(), &[1, 2, 3]);
        let w = FlagPermutation::new(vec![4, 5, 1, 2, 3], shape).unwrap();
        assert_eq!(alpha_of_w(&w, 1).unwrap().alpha(), &[4, 5]);
        assert!(matches!(alpha_of_w(&w, 3), Err(Error::Stage { .. })));

        let w = w_of_alpha(&GrassIndex::new(vec![2, 4], 4).unwrap()).unwrap();
        assert_eq!(w.word(), &[2, 4, 1, 3]);
        let w = w_of_alpha(&GrassIndex::new(vec![1, 2, 3], 7).unwrap()).unwrap();
        assert_eq!(w.word(), &[1, 2, 3, 4, 5, 6, 7]);
        let w = w_of_alpha(&GrassIndex::new(vec![3, 5, 7], 7).unwrap()).unwrap();
        assert_eq!(w.word(), &[3, 5, 7, 1, 2, 4, 6]);
    }

    #[test]
    fn enumeration_examples() {
        let sp2 = enumerate_indices(&Space::Orthogonal { n: 2 }).unwrap();
        let labels: Vec<String> = sp2.iter().map(|i| i.to_string()).collect();
        assert_eq!(labels, ["", "1", "2", "21"]);
        assert_eq!(enumerate_indices(&Space::Lagrangian { n: 3 }).unwrap().len(), 8);
        let s3 = enumerate_indices(&Space::Flag { n: 3, d: vec![1, 2] }).unwrap();
        assert_eq!(s3.len(), 6);
        assert!(matches!(
            enumerate_indices(&Space::Orthogonal { n: 17 }),
            Err(Error::Size(_))
        ));
    }

    #[test]
    fn longest_element_dimension() {
        let shape = FlagShape::new(5, vec![2, 3]).unwrap();
        let top = FlagPermutation::longest(&shape);
        assert_eq!(top.word(), &[4, 5, 3, 1, 2]);
        assert_eq!(top.length(), 8);
        assert_eq!(shape.dimension(), 8);
    }

    #[test]
    fn text_round_trip() {
        let gr = Space::Grassmannian { k: 3, n: 7 };
        assert_eq!(gr.parse_index("357").unwrap().to_string(), "3,5,7");
        let lg = Space::Lagrangian { n: 3 };
        assert_eq!(lg.parse_index("").unwrap(), lg.bottom().unwrap());
        assert!(lg.parse_index("12").is_err());
        assert!(Space::Flag { n: 4, d: vec![2] }.parse_index("2143").is_err());
    }
}
