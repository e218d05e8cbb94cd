//! Reference computations that share no code with the library.

#![allow(dead_code)]

use std::collections::BTreeMap;

pub type Part = Vec<usize>;

fn trimmed(mut p: Part) -> Part {
    while p.last() == Some(&0) {
        p.pop();
    }
    p
}

/// All partitions `mu` with `mu / lam` a horizontal strip of `a` boxes.
pub fn pieri(lam: &[usize], a: usize) -> Vec<Part> {
    fn go(lam: &[usize], i: usize, left: usize, cur: &mut Part, out: &mut Vec<Part>) {
        if i == lam.len() + 1 {
            if left == 0 {
                out.push(trimmed(cur.clone()));
            }
            return;
        }
        let base = lam.get(i).copied().unwrap_or(0);
        let cap = if i == 0 { base + left } else { lam[i - 1] };
        for row in base..=cap.min(base + left) {
            cur.push(row);
            go(lam, i + 1, left - (row - base), cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(lam, 0, a, &mut Vec::new(), &mut out);
    out
}

fn permutations(n: usize) -> Vec<(Vec<usize>, i128)> {
    if n == 0 {
        return vec![(Vec::new(), 1)];
    }
    let mut out = Vec::new();
    for (p, sign) in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            let s = if (p.len() - pos) % 2 == 0 { sign } else { -sign };
            out.push((q, s));
        }
    }
    out
}

/// `s_lam * s_mu` by Jacobi-Trudi for `s_mu` and repeated Pieri, dropping
/// partitions outside a `rows x cols` box when one is given.
pub fn schur_product(lam: &[usize], mu: &[usize], bound: Option<(usize, usize)>) -> BTreeMap<Part, i128> {
    let fits = |p: &Part| bound.is_none_or(|(r, c)| p.len() <= r && p.first().is_none_or(|&x| x <= c));
    let l = mu.len();
    let mut out: BTreeMap<Part, i128> = BTreeMap::new();
    for (sigma, sign) in permutations(l) {
        let mut hs = Vec::with_capacity(l);
        let mut ok = true;
        for i in 0..l {
            let h = mu[i] as i64 - i as i64 + sigma[i] as i64;
            if h < 0 {
                ok = false;
                break;
            }
            hs.push(h as usize);
        }
        if !ok {
            continue;
        }
        let mut terms: BTreeMap<Part, i128> = BTreeMap::from([(trimmed(lam.to_vec()), 1)]);
        for a in hs {
            let mut next = BTreeMap::new();
            for (p, c) in terms {
                for q in pieri(&p, a) {
                    if fits(&q) {
                        *next.entry(q).or_insert(0) += c;
                    }
                }
            }
            terms = next;
        }
        for (p, c) in terms {
            *out.entry(p).or_insert(0) += sign * c;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// Coefficient of the point class in `sigma_mu^r` on `Gr(k, n)`.
pub fn grassmann_power_top(k: usize, n: usize, mu: &[usize], r: usize) -> i128 {
    let mut cls: BTreeMap<Part, i128> = BTreeMap::from([(Vec::new(), 1)]);
    for _ in 0..r {
        let mut next = BTreeMap::new();
        for (p, c) in cls {
            for (q, d) in schur_product(&p, mu, Some((k, n - k))) {
                *next.entry(q).or_insert(0) += c * d;
            }
        }
        cls = next;
    }
    cls.get(&vec![n - k; k]).copied().unwrap_or(0)
}

pub fn inversions(w: &[i64]) -> usize {
    (0..w.len()).flat_map(|i| (i + 1..w.len()).map(move |j| (i, j))).filter(|&(i, j)| w[i] > w[j]).count()
}

pub fn has_descents_in(w: &[usize], d: &[usize]) -> bool {
    (1..w.len()).all(|i| w[i - 1] < w[i] || d.contains(&i))
}

/// Transpositions `(j, k)` with `j <= d_i < k` that lower the length by exactly one
/// and stay in the set of minimal representatives.
pub fn monk_down(w: &[usize], d: &[usize], stage: usize) -> Vec<Vec<usize>> {
    let di = d[stage - 1];
    let len = inversions(&w.iter().map(|&x| x as i64).collect::<Vec<_>>());
    let mut out = Vec::new();
    for j in 1..=di {
        for k in di + 1..=w.len() {
            let mut v = w.to_vec();
            v.swap(j - 1, k - 1);
            let lv = inversions(&v.iter().map(|&x| x as i64).collect::<Vec<_>>());
            if lv + 1 == len && has_descents_in(&v, d) {
                out.push(v);
            }
        }
    }
    out.sort();
    out
}

/// Every permutation of `1..=n`.
pub fn all_words(n: usize) -> Vec<Vec<usize>> {
    permutations(n).into_iter().map(|(p, _)| p.into_iter().map(|x| x + 1).collect()).collect()
}

/// Coefficient of the point class in the product of simple classes at the given stages
/// on `Fl_d`, multiplying up from the fundamental class with the Chevalley rule.
pub fn flag_product_top(n: usize, d: &[usize], stages: &[usize]) -> i128 {
    let words: Vec<Vec<usize>> = all_words(n).into_iter().filter(|w| has_descents_in(w, d)).collect();
    let len = |w: &[usize]| inversions(&w.iter().map(|&x| x as i64).collect::<Vec<_>>());
    let top = words.iter().max_by_key(|w| len(w)).unwrap().clone();
    let mut cls: BTreeMap<Vec<usize>, i128> = BTreeMap::from([((1..=n).collect(), 1)]);
    for &stage in stages {
        let mut next = BTreeMap::new();
        for (w, c) in cls {
            for v in words.iter().filter(|v| len(v) == len(&w) + 1) {
                if monk_down(v, d, stage).contains(&w) {
                    *next.entry(v.clone()).or_insert(0) += c;
                }
            }
        }
        cls = next;
    }
    cls.get(&top).copied().unwrap_or(0)
}

/// Length of a signed permutation in types B and C.
pub fn signed_length(w: &[i64]) -> usize {
    inversions(w) + w.iter().filter(|&&x| x < 0).map(|&x| (-x) as usize).sum::<usize>()
}

/// Coefficient of the point class in `sigma_1^N` on `LG(n)` (`lagrangian`) or `OG(n)`,
/// from the Chevalley formula on signed permutations.
pub fn isotropic_power_top(n: usize, lagrangian: bool) -> i128 {
    let increasing = |w: &[i64]| w.windows(2).all(|p| p[0] < p[1]);
    let steps = n * (n + 1) / 2;
    let start: Vec<i64> = (1..=n as i64).collect();
    let top: Vec<i64> = (1..=n as i64).rev().map(|x| -x).collect();
    let mut cls: BTreeMap<Vec<i64>, i128> = BTreeMap::from([(start, 1)]);
    for _ in 0..steps {
        let mut next = BTreeMap::new();
        for (w, c) in cls {
            let l = signed_length(&w);
            let mut push = |v: Vec<i64>, m: i128| {
                if m > 0 && increasing(&v) && signed_length(&v) == l + 1 {
                    *next.entry(v).or_insert(0) += c * m;
                }
            };
            for i in 0..n {
                let mut v = w.clone();
                v[i] = -v[i];
                push(v, 1);
                for j in i + 1..n {
                    let mut v = w.clone();
                    v.swap(i, j);
                    push(v.clone(), 0);
                    v[i] = -v[i];
                    v[j] = -v[j];
                    push(v, if lagrangian { 2 } else { 1 });
                }
            }
        }
        cls = next;
    }
    cls.get(&top).copied().unwrap_or(0)
}
