//! Total-degree homotopy continuation for square polynomial systems.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{build_system, Param, PolySystem, SystemOptions};
use crate::multposet::{build_poset, ProblemSpec};
use crate::poly::{to_f64, Poly};

/// Step-size and tolerance settings for path tracking.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrackerConfig {
    pub initial_step: f64,
    pub max_step: f64,
    pub min_step: f64,
    pub corrector_tol: f64,
    pub max_corrector_iters: usize,
    pub newton_tol: f64,
    pub dedup_radius: f64,
    pub reality_tol: f64,
    pub infinity_norm: f64,
    pub max_steps: usize,
    pub seed: u64,
}

impl Default for TrackerConfig {
    fn default() -> Self {
        TrackerConfig {
            initial_step: 0.01,
            max_step: 0.05,
            min_step: 1e-13,
            corrector_tol: 1e-9,
            max_corrector_iters: 3,
            newton_tol: 1e-10,
            dedup_radius: 1e-6,
            reality_tol: 1e-8,
            infinity_norm: 1e8,
            max_steps: 50_000,
            seed: 0x5eed,
        }
    }
}

impl TrackerConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            self.initial_step,
            self.max_step,
            self.min_step,
            self.corrector_tol,
            self.newton_tol,
            self.dedup_radius,
            self.reality_tol,
            self.infinity_norm,
        ];
        if positive.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
            return Err(Error::Spec("tracker tolerances must be positive".into()));
        }
        if self.min_step >= self.initial_step || self.initial_step > self.max_step {
            return Err(Error::Spec("tracker steps need min_step < initial_step <= max_step".into()));
        }
        if self.max_corrector_iters == 0 {
            return Err(Error::Spec("at least one corrector iteration is needed".into()));
        }
        Ok(())
    }
}

/// A homogeneous or affine polynomial with floating coefficients, compiled for evaluation.
#[derive(Debug, Clone)]
struct CPoly {
    terms: Vec<(Complex64, Vec<(usize, u32)>)>,
    max_exp: u32,
}

impl CPoly {
    /// Coefficients are scaled so the largest has modulus one. With `homogenize`, the
    /// variable `0` is the homogenizing coordinate and the original `x_i` become `z_(i+1)`.
    fn compile(p: &Poly, homogenize: bool) -> Self {
        let d = p.degree();
        let scale = to_f64(&p.max_abs_coefficient()).max(f64::MIN_POSITIVE);
        let mut max_exp = 0;
        let terms = p
            .terms()
            .map(|(e, c)| {
                let mut vars: Vec<(usize, u32)> = Vec::new();
                let offset = usize::from(homogenize);
                if homogenize {
                    let deficit = d - e.iter().sum::<u32>();
                    if deficit > 0 {
                        vars.push((0, deficit));
                    }
                }
                vars.extend(e.iter().enumerate().filter(|(_, &k)| k > 0).map(|(i, &k)| (i + offset, k)));
                max_exp = max_exp.max(vars.iter().map(|v| v.1).max().unwrap_or(0));
                (Complex64::new(to_f64(c) / scale, 0.0), vars)
            })
            .collect();
        CPoly { terms, max_exp }
    }

    fn start(i: usize, d: u32, b: Complex64) -> Self {
        CPoly { terms: vec![(Complex64::new(1.0, 0.0), vec![(i + 1, d)]), (-b, vec![(0, d)])], max_exp: d }
    }

    fn eval(&self, pw: &[Vec<Complex64>]) -> Complex64 {
        self.terms
            .iter()
            .map(|(c, vars)| vars.iter().fold(*c, |acc, &(v, k)| acc * pw[v][k as usize]))
            .sum()
    }

    /// Value and gradient, accumulated into `grad`.
    fn eval_grad(&self, pw: &[Vec<Complex64>], grad: &mut [Complex64], weight: Complex64) -> Complex64 {
        let mut value = Complex64::new(0.0, 0.0);
        for (c, vars) in &self.terms {
            let mut prod = *c;
            for &(v, k) in vars {
                prod *= pw[v][k as usize];
            }
            value += prod;
            for (a, &(v, k)) in vars.iter().enumerate() {
                let mut partial = *c * k as f64 * pw[v][k as usize - 1];
                for (b, &(u, l)) in vars.iter().enumerate() {
                    if a != b {
                        partial *= pw[u][l as usize];
                    }
                }
                grad[v] += weight * partial;
            }
        }
        value
    }

    fn magnitude(&self, pw: &[Vec<Complex64>]) -> f64 {
        self.terms
            .iter()
            .map(|(c, vars)| vars.iter().fold(c.norm(), |acc, &(v, k)| acc * pw[v][k as usize].norm()))
            .sum()
    }
}

fn powers(z: &[Complex64], max_exp: u32) -> Vec<Vec<Complex64>> {
    z.iter()
        .map(|&x| {
            let mut row = Vec::with_capacity(max_exp as usize + 1);
            let mut acc = Complex64::new(1.0, 0.0);
            for _ in 0..=max_exp {
                row.push(acc);
                acc *= x;
            }
            row
        })
        .collect()
}

fn norm(z: &[Complex64]) -> f64 {
    z.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// `H(z, t) = (1 - t) F(z) + t gamma G(z)` with the affine patch `a . z = 1` appended.
struct Homotopy {
    target: Vec<CPoly>,
    start: Vec<CPoly>,
    gamma: Complex64,
    patch: Vec<Complex64>,
    max_exp: u32,
}

impl Homotopy {
    fn dim(&self) -> usize {
        self.patch.len()
    }

    /// Returns `H`, `dH/dz` and `dH/dt`.
    fn evaluate(&self, z: &[Complex64], t: f64) -> (DVector<Complex64>, DMatrix<Complex64>, DVector<Complex64>) {
        let n = self.dim();
        let pw = powers(z, self.max_exp);
        let mut h = DVector::zeros(n);
        let mut jac = DMatrix::zeros(n, n);
        let mut ht = DVector::zeros(n);
        let one = Complex64::new(1.0, 0.0);
        let a = one * (1.0 - t);
        let b = self.gamma * t;
        let mut grad = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..n - 1 {
            grad.iter_mut().for_each(|g| *g = Complex64::new(0.0, 0.0));
            let f = self.target[i].eval_grad(&pw, &mut grad, a);
            let g = self.start[i].eval_grad(&pw, &mut grad, b);
            h[i] = a * f + b * g;
            ht[i] = self.gamma * g - f;
            for (j, v) in grad.iter().enumerate() {
                jac[(i, j)] = *v;
            }
        }
        let last = n - 1;
        h[last] = self.patch.iter().zip(z).map(|(p, x)| p * x).sum::<Complex64>() - one;
        for j in 0..n {
            jac[(last, j)] = self.patch[j];
        }
        (h, jac, ht)
    }

    fn newton_step(&self, z: &[Complex64], t: f64) -> Option<(Vec<Complex64>, f64)> {
        let (h, jac, _) = self.evaluate(z, t);
        let dz = jac.lu().solve(&(-h))?;
        let next: Vec<Complex64> = z.iter().zip(dz.iter()).map(|(a, b)| a + b).collect();
        Some((next, dz.norm()))
    }
}

struct PathEnd {
    z: Vec<Complex64>,
}

fn track(hom: &Homotopy, start: Vec<Complex64>, cfg: &TrackerConfig) -> PathEnd {
    let mut z = start;
    let mut t = 1.0f64;
    let mut h = cfg.initial_step;
    let mut streak = 0;
    for _ in 0..cfg.max_steps {
        if t <= 0.0 {
            break;
        }
        let step = h.min(t);
        let t_next = if step >= t { 0.0 } else { t - step };
        let (_, jac, ht) = hom.evaluate(&z, t);
        let Some(dz) = jac.lu().solve(&(-ht)) else {
            h /= 2.0;
            streak = 0;
            if h < cfg.min_step {
                break;
            }
            continue;
        };
        // dz/dt, stepping toward t = 0
        let mut w: Vec<Complex64> = z.iter().zip(dz.iter()).map(|(a, d)| a - d * step).collect();
        let mut ok = false;
        let mut previous = f64::INFINITY;
        for _ in 0..cfg.max_corrector_iters {
            let Some((next, delta)) = hom.newton_step(&w, t_next) else {
                break;
            };
            w = next;
            if delta > previous {
                break;
            }
            previous = delta;
            if delta <= cfg.corrector_tol * (1.0 + norm(&w)) {
                ok = true;
                break;
            }
        }
        if ok && w.iter().all(|x| x.re.is_finite() && x.im.is_finite()) {
            z = w;
            t = t_next;
            streak += 1;
            if streak >= 3 {
                h = (h * 2.0).min(cfg.max_step);
                streak = 0;
            }
        } else {
            h /= 2.0;
            streak = 0;
            if h < cfg.min_step || h < 1e-7 * t {
                break;
            }
        }
    }
    PathEnd { z }
}

/// A root of the system in chart coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub coords: Vec<Complex64>,
    pub residual: f64,
    pub is_real: bool,
    pub path: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionSet {
    pub solutions: Vec<Solution>,
    pub paths: usize,
    pub at_infinity: usize,
    pub failed: usize,
    pub duplicates: usize,
    pub spurious: usize,
    pub n_real: usize,
    pub n_pairs: usize,
    pub warnings: Vec<String>,
}

impl SolutionSet {
    pub fn total(&self) -> usize {
        self.solutions.len()
    }

    pub fn max_residual(&self) -> f64 {
        self.solutions.iter().map(|s| s.residual).fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let sols: Vec<_> = self
            .solutions
            .iter()
            .map(|s| {
                serde_json::json!({
                    "coords": s.coords.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
                    "residual": s.residual,
                    "real": s.is_real,
                    "path": s.path,
                })
            })
            .collect();
        serde_json::json!({
            "total": self.total(),
            "real": self.n_real,
            "pairs": self.n_pairs,
            "paths": self.paths,
            "at_infinity": self.at_infinity,
            "failed": self.failed,
            "duplicates": self.duplicates,
            "spurious": self.spurious,
            "warnings": self.warnings,
            "solutions": sols,
        })
    }
}

fn is_real_point(z: &[Complex64], tol: f64) -> bool {
    z.iter().all(|x| x.im.abs() / (1.0 + x.norm()) < tol)
}

fn distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    let d = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt();
    d / (1.0 + norm(a).max(norm(b)))
}

/// Counts real points and conjugate pairs; points without a partner are reported as warnings.
pub fn classify_reality(sols: &[Solution], radius: f64) -> (usize, usize, Vec<String>) {
    let real = sols.iter().filter(|s| s.is_real).count();
    let complex: Vec<&Solution> = sols.iter().filter(|s| !s.is_real).collect();
    let mut used = vec![false; complex.len()];
    let mut pairs = 0;
    let mut warnings = Vec::new();
    for i in 0..complex.len() {
        if used[i] {
            continue;
        }
        let conj: Vec<Complex64> = complex[i].coords.iter().map(|z| z.conj()).collect();
        let partner = (i + 1..complex.len()).find(|&j| !used[j] && distance(&conj, &complex[j].coords) < radius);
        used[i] = true;
        match partner {
            Some(j) => {
                used[j] = true;
                pairs += 1;
            }
            None => warnings.push(format!("solution from path {} has no conjugate partner", complex[i].path)),
        }
    }
    (real, pairs, warnings)
}

fn affine_newton(polys: &[CPoly], x: &mut Vec<Complex64>, iters: usize, tol: f64) -> f64 {
    let n = x.len();
    let max_exp = polys.iter().map(|p| p.max_exp).max().unwrap_or(1);
    let residual = |x: &[Complex64]| {
        let pw = powers(x, max_exp);
        polys.iter().map(|p| p.eval(&pw).norm()).fold(0.0, f64::max)
    };
    let mut best = residual(x);
    for _ in 0..iters {
        if best < tol * 1e-3 {
            break;
        }
        let pw = powers(x, max_exp);
        let mut jac = DMatrix::zeros(n, n);
        let mut f = DVector::zeros(n);
        let mut grad = vec![Complex64::new(0.0, 0.0); n];
        for (i, p) in polys.iter().enumerate() {
            grad.iter_mut().for_each(|g| *g = Complex64::new(0.0, 0.0));
            f[i] = p.eval_grad(&pw, &mut grad, Complex64::new(1.0, 0.0));
            for j in 0..n {
                jac[(i, j)] = grad[j];
            }
        }
        let Some(dx) = jac.lu().solve(&(-f)) else {
            break;
        };
        let candidate: Vec<Complex64> = x.iter().zip(dx.iter()).map(|(a, b)| a + b).collect();
        let r = residual(&candidate);
        if r.is_nan() || r > best {
            break;
        }
        *x = candidate;
        best = r;
    }
    best
}

/// Solves a square system by tracking every path of the total-degree homotopy.
pub fn solve(system: &PolySystem, cfg: &TrackerConfig) -> Result<SolutionSet> {
    cfg.validate()?;
    let n = system.nvars();
    if system.polys.len() != n {
        return Err(Error::Shape(format!("{} equations in {n} unknowns", system.polys.len())));
    }
    if n == 0 {
        return Ok(SolutionSet {
            solutions: vec![Solution { coords: Vec::new(), residual: 0.0, is_real: true, path: 0 }],
            paths: 1,
            at_infinity: 0,
            failed: 0,
            duplicates: 0,
            spurious: 0,
            n_real: 1,
            n_pairs: 0,
            warnings: Vec::new(),
        });
    }
    let degrees = system.degrees();
    if degrees.contains(&0) {
        return Err(Error::Degenerate("an equation of the system is constant".into()));
    }
    let paths: u128 = degrees.iter().map(|&d| d as u128).product();
    if paths > 5_000_000 {
        return Err(Error::Size(format!("{paths} homotopy paths")));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut unit = || Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
    let gamma = unit();
    let b: Vec<Complex64> = (0..n).map(|_| unit()).collect();
    let patch: Vec<Complex64> = (0..=n).map(|_| unit()).collect();
    let target: Vec<CPoly> = system.polys.iter().map(|p| CPoly::compile(p, true)).collect();
    let start: Vec<CPoly> = (0..n).map(|i| CPoly::start(i, degrees[i], b[i])).collect();
    let max_exp = target.iter().chain(&start).map(|p| p.max_exp).max().unwrap_or(1);
    let hom = Homotopy { target, start, gamma, patch, max_exp };
    let affine: Vec<CPoly> = system.polys.iter().map(|p| CPoly::compile(p, false)).collect();
    let checks: Vec<CPoly> = system.checks.iter().map(|p| CPoly::compile(p, false)).collect();

    let ends: Vec<(usize, PathEnd)> = (0..paths as usize)
        .into_par_iter()
        .map(|k| {
            // start point: the k-th tuple of roots b_i^(1/d_i) * exp(2 pi i j / d_i)
            let mut rest = k;
            let mut z = vec![Complex64::new(1.0, 0.0)];
            for i in 0..n {
                let d = degrees[i] as usize;
                let j = rest % d;
                rest /= d;
                let arg = (b[i].arg() + std::f64::consts::TAU * j as f64) / d as f64;
                z.push(Complex64::from_polar(1.0, arg));
            }
            let s: Complex64 = hom.patch.iter().zip(&z).map(|(p, x)| p * x).sum();
            let z: Vec<Complex64> = z.iter().map(|x| x / s).collect();
            (k, track(&hom, z, cfg))
        })
        .collect();

    let mut set = SolutionSet {
        solutions: Vec::new(),
        paths: paths as usize,
        at_infinity: 0,
        failed: 0,
        duplicates: 0,
        spurious: 0,
        n_real: 0,
        n_pairs: 0,
        warnings: Vec::new(),
    };
    for (k, end) in ends {
        let z0 = end.z[0];
        let tracked: Vec<Complex64> = end.z[1..].iter().map(|v| v / z0).collect();
        if z0.norm() == 0.0 || !tracked.iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
            set.at_infinity += 1;
            continue;
        }
        let mut x = tracked.clone();
        let residual = affine_newton(&affine, &mut x, 30, cfg.newton_tol);
        let settled = residual <= cfg.newton_tol && distance(&tracked, &x) < 1e-4 && norm(&x) <= cfg.infinity_norm;
        if !settled {
            // endpoints close to the hyperplane at infinity are diverging paths cut short
            if norm(&tracked) > cfg.infinity_norm || z0.norm() < 1e-2 * norm(&end.z) {
                set.at_infinity += 1;
            } else {
                set.failed += 1;
            }
            continue;
        }
        if !checks.is_empty() {
            let pw = powers(&x, checks.iter().map(|p| p.max_exp).max().unwrap_or(1));
            let off = checks.iter().map(|p| p.eval(&pw).norm() / (1.0 + p.magnitude(&pw)).max(1.0)).fold(0.0, f64::max);
            if off > cfg.newton_tol.sqrt() {
                set.spurious += 1;
                continue;
            }
        }
        if set.solutions.iter().any(|s| distance(&s.coords, &x) < cfg.dedup_radius) {
            set.duplicates += 1;
            continue;
        }
        let is_real = is_real_point(&x, cfg.reality_tol);
        set.solutions.push(Solution { coords: x, residual, is_real, path: k });
    }
    if set.solutions.is_empty() && set.failed == set.paths {
        return Err(Error::Solver(format!("all {} paths failed", set.paths)));
    }
    let (real, pairs, warnings) = classify_reality(&set.solutions, cfg.dedup_radius);
    set.n_real = real;
    set.n_pairs = pairs;
    set.warnings = warnings;
    if set.failed > 0 {
        set.warnings.push(format!("{} paths failed", set.failed));
    }
    if set.duplicates > 0 {
        set.warnings.push(format!("{} paths converged to an already found solution", set.duplicates));
    }
    Ok(set)
}

/// One line of a parameter sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub params: Vec<String>,
    pub total: usize,
    pub expected: String,
    pub real: usize,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    pub min_real: Option<usize>,
    pub max_real: Option<usize>,
}

impl SweepReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("params,total,expected,real\n");
        for row in &self.rows {
            let total = if row.error.is_some() { "error".to_string() } else { row.total.to_string() };
            out += &format!("{},{},{},{}\n", row.params.join(" "), total, row.expected, row.real);
        }
        out
    }

    /// Rows whose solution count differs from the expected degree, or that failed.
    pub fn mismatches(&self) -> usize {
        self.rows.iter().filter(|r| r.error.is_some() || r.total.to_string() != r.expected).count()
    }
}

/// Solves the problem once per parameter set; failures are recorded per row.
pub fn sweep(
    spec: &ProblemSpec,
    parameter_sets: &[Vec<Param>],
    options: &SystemOptions,
    cfg: &TrackerConfig,
) -> Result<SweepReport> {
    let expected = build_poset(spec)?.deg_target().to_string();
    let rows: Vec<SweepRow> = parameter_sets
        .iter()
        .map(|params| {
            let names = params.iter().map(|p| p.to_string()).collect();
            match build_system(spec, params, options).and_then(|sys| solve(&sys, cfg)) {
                Ok(set) => SweepRow { params: names, total: set.total(), expected: expected.clone(), real: set.n_real, error: None },
                Err(e) => SweepRow { params: names, total: 0, expected: expected.clone(), real: 0, error: Some(e.to_string()) },
            }
        })
        .collect();
    let reals = rows.iter().filter(|r| r.error.is_none()).map(|r| r.real);
    let min_real = reals.clone().min();
    let max_real = reals.max();
    Ok(SweepReport { rows, min_real, max_real })
}
