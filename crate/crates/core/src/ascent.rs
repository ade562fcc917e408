//! Multi-start projected gradient ascent on the positive part of the
//! `ℓ^n_q` sphere, and a magnitude/phase ascent for sup norms. Shared by the
//! `polynorms` solvers; deterministic given a seed (per-restart streams are
//! derived from `(seed, restart index)` and the reduction breaks ties by
//! restart index).

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

use crate::kahan::Kahan;
use crate::spaces::{magnitude_norm, Exponent};

#[derive(Debug, Clone, Copy)]
pub(crate) struct AscentOptions {
    pub restarts: usize,
    pub max_iters: usize,
    pub seed: u64,
}

impl Default for AscentOptions {
    fn default() -> Self {
        Self {
            restarts: 12,
            max_iters: 300,
            seed: 0x5EED_0001,
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct AscentOutcome<W> {
    pub value: f64,
    pub witness: W,
    /// Best restart values, descending; used to flag optimizer disagreement.
    pub restart_values: Vec<f64>,
}

fn restart_rng(seed: u64, restart: usize) -> ChaCha12Rng {
    let derived = seed ^ (restart as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    ChaCha12Rng::seed_from_u64(derived)
}

/// Terms of a weighted monomial objective `f(t) = Σ w_α Π t_i^{α_i}`,
/// `w_α >= 0`.
pub(crate) struct MonomialTerms {
    pub exponents: Vec<Vec<u32>>,
    pub weights: Vec<f64>,
    pub n: usize,
}

impl MonomialTerms {
    pub fn value(&self, t: &[f64]) -> f64 {
        let mut acc = Kahan::default();
        for (alpha, &w) in self.exponents.iter().zip(&self.weights) {
            let mut term = w;
            for (&e, &ti) in alpha.iter().zip(t) {
                if e > 0 {
                    term *= ti.powi(e as i32);
                }
            }
            acc.add(term);
        }
        acc.value()
    }

    fn gradient(&self, t: &[f64], grad: &mut [f64]) {
        grad.fill(0.0);
        for (alpha, &w) in self.exponents.iter().zip(&self.weights) {
            for i in 0..self.n {
                let e_i = alpha[i];
                if e_i == 0 {
                    continue;
                }
                let mut g = w * f64::from(e_i);
                for (j, (&e, &tj)) in alpha.iter().zip(t).enumerate() {
                    let pow = if j == i { e - 1 } else { e };
                    if pow > 0 {
                        g *= tj.powi(pow as i32);
                    }
                }
                grad[i] += g;
            }
        }
    }
}

fn project_positive_sphere(t: &mut [f64], q: Exponent) {
    for x in t.iter_mut() {
        if *x < 0.0 {
            *x = 0.0;
        }
    }
    let norm = magnitude_norm(t, q);
    if norm <= 1e-300 {
        let n = t.len() as f64;
        let uniform = match q {
            Exponent::Infinity => 1.0,
            Exponent::Finite(qv) => n.powf(-1.0 / qv),
        };
        t.fill(uniform);
    } else {
        for x in t.iter_mut() {
            *x /= norm;
        }
    }
}

/// Maximize `Σ w_α t^α` over `{t >= 0, ‖t‖_q = 1}` for finite `q`.
///
/// Multi-start: structured starts (uniform, each corner, weight-aligned)
/// followed by random sphere magnitudes. Returns the best value and its
/// feasible witness; the value is therefore always a valid lower bound of
/// the supremum.
pub(crate) fn maximize_weighted_monomials(
    terms: &MonomialTerms,
    q: Exponent,
    opts: &AscentOptions,
) -> AscentOutcome<Vec<f64>> {
    let n = terms.n;
    let starts = build_positive_starts(terms, q, opts);

    let mut results: Vec<(f64, usize, Vec<f64>)> = starts
        .into_par_iter()
        .enumerate()
        .map(|(idx, mut t)| {
            let value = ascend_positive(terms, q, &mut t, opts.max_iters);
            (value, idx, t)
        })
        .collect();
    results.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let restart_values = results.iter().map(|r| r.0).collect();
    let best = results.into_iter().next().unwrap_or((0.0, 0, vec![0.0; n]));
    AscentOutcome {
        value: best.0,
        witness: best.2,
        restart_values,
    }
}

fn build_positive_starts(
    terms: &MonomialTerms,
    q: Exponent,
    opts: &AscentOptions,
) -> Vec<Vec<f64>> {
    let n = terms.n;
    let mut starts: Vec<Vec<f64>> = Vec::new();

    let mut uniform = vec![1.0; n];
    project_positive_sphere(&mut uniform, q);
    starts.push(uniform);

    for i in 0..n {
        let mut corner = vec![0.0; n];
        corner[i] = 1.0;
        starts.push(corner);
    }

    // Weight-aligned: t_i proportional to the total weight touching coordinate i.
    let mut aligned = vec![0.0; n];
    for (alpha, &w) in terms.exponents.iter().zip(&terms.weights) {
        for (i, &e) in alpha.iter().enumerate() {
            aligned[i] += w * f64::from(e);
        }
    }
    if aligned.iter().any(|&x| x > 0.0) {
        project_positive_sphere(&mut aligned, q);
        starts.push(aligned);
    }

    let random_needed = opts.restarts.saturating_sub(starts.len());
    for r in 0..random_needed {
        let mut rng = restart_rng(opts.seed, r + 1000);
        let mut t: Vec<f64> = (0..n).map(|_| rng.gen_range(0.01..1.0)).collect();
        project_positive_sphere(&mut t, q);
        starts.push(t);
    }
    starts
}

fn ascend_positive(terms: &MonomialTerms, q: Exponent, t: &mut Vec<f64>, max_iters: usize) -> f64 {
    let n = terms.n;
    let mut grad = vec![0.0; n];
    let mut value = terms.value(t);
    let mut step = 0.1;
    for _ in 0..max_iters {
        terms.gradient(t, &mut grad);
        let gnorm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
        if gnorm <= 1e-300 {
            break;
        }
        let mut candidate: Vec<f64> = t
            .iter()
            .zip(&grad)
            .map(|(&ti, &gi)| ti + step * gi / gnorm)
            .collect();
        project_positive_sphere(&mut candidate, q);
        let cand_value = terms.value(&candidate);
        if cand_value > value {
            *t = candidate;
            value = cand_value;
            step = (step * 1.3).min(0.5);
        } else {
            step *= 0.5;
            if step < 1e-14 {
                break;
            }
        }
    }
    value
}

/// A point parametrized as magnitudes and phases: `z_i = t_i e^{2πi φ_i}`.
fn assemble_point(t: &[f64], phases: &[f64]) -> Vec<Complex64> {
    t.iter()
        .zip(phases)
        .map(|(&ti, &p)| Complex64::from_polar(ti, 2.0 * std::f64::consts::PI * p))
        .collect()
}

/// Maximize `objective(z)` over the sphere `‖z‖_q = 1` in magnitudes and
/// phases by finite-difference projected ascent. For `q = ∞` the magnitudes
/// are pinned to 1 (suprema on the polydisk are attained on the torus), so
/// only phases move.
pub(crate) fn maximize_on_sphere<F>(
    objective: F,
    n: usize,
    q: Exponent,
    opts: &AscentOptions,
) -> AscentOutcome<Vec<Complex64>>
where
    F: Fn(&[Complex64]) -> f64 + Sync,
{
    let objective = &objective;
    let mut results: Vec<(f64, usize, Vec<Complex64>)> = (0..opts.restarts.max(1))
        .into_par_iter()
        .map(|restart| {
            let mut rng = restart_rng(opts.seed, restart);
            let (mut t, mut phases) = initial_point(n, q, restart, &mut rng);
            let value = ascend_sup(objective, q, &mut t, &mut phases, opts.max_iters);
            (value, restart, assemble_point(&t, &phases))
        })
        .collect();
    results.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let restart_values = results.iter().map(|r| r.0).collect();
    let best = results.into_iter().next().expect("at least one restart");
    AscentOutcome {
        value: best.0,
        witness: best.2,
        restart_values,
    }
}

fn initial_point(
    n: usize,
    q: Exponent,
    restart: usize,
    rng: &mut ChaCha12Rng,
) -> (Vec<f64>, Vec<f64>) {
    let mut t = if q.is_infinite() {
        vec![1.0; n]
    } else if restart == 0 {
        let mut u = vec![1.0; n];
        project_positive_sphere(&mut u, q);
        u
    } else {
        let mut u: Vec<f64> = (0..n).map(|_| rng.gen_range(0.01..1.0)).collect();
        project_positive_sphere(&mut u, q);
        u
    };
    if !q.is_infinite() {
        project_positive_sphere(&mut t, q);
    }
    let phases: Vec<f64> = if restart == 0 {
        vec![0.0; n]
    } else {
        (0..n).map(|_| rng.gen_range(0.0..1.0)).collect()
    };
    (t, phases)
}

fn ascend_sup<F>(
    objective: &F,
    q: Exponent,
    t: &mut Vec<f64>,
    phases: &mut Vec<f64>,
    max_iters: usize,
) -> f64
where
    F: Fn(&[Complex64]) -> f64,
{
    let n = t.len();
    let eval = |t: &[f64], p: &[f64]| objective(&assemble_point(t, p));
    let mut value = eval(t, phases);
    let mut step = 0.15;
    let h = 1e-5;
    let move_magnitudes = !q.is_infinite();

    for _ in 0..max_iters {
        // Central finite differences; magnitudes re-projected per probe.
        let mut grad_t = vec![0.0; n];
        if move_magnitudes {
            for i in 0..n {
                let mut tp = t.clone();
                tp[i] += h;
                project_positive_sphere(&mut tp, q);
                let mut tm = t.clone();
                tm[i] = (tm[i] - h).max(0.0);
                project_positive_sphere(&mut tm, q);
                grad_t[i] = (eval(&tp, phases) - eval(&tm, phases)) / (2.0 * h);
            }
        }
        let mut grad_p = vec![0.0; n];
        for i in 0..n {
            let mut pp = phases.clone();
            pp[i] += h;
            let mut pm = phases.clone();
            pm[i] -= h;
            grad_p[i] = (eval(t, &pp) - eval(t, &pm)) / (2.0 * h);
        }

        let gnorm = (grad_t.iter().chain(&grad_p).map(|g| g * g).sum::<f64>()).sqrt();
        if gnorm <= 1e-300 {
            break;
        }
        let mut cand_t = t.clone();
        if move_magnitudes {
            for i in 0..n {
                cand_t[i] += step * grad_t[i] / gnorm;
            }
            project_positive_sphere(&mut cand_t, q);
        }
        let cand_p: Vec<f64> = phases
            .iter()
            .zip(&grad_p)
            .map(|(&p, &g)| p + step * g / gnorm)
            .collect();
        let cand_value = eval(&cand_t, &cand_p);
        if cand_value > value {
            *t = cand_t;
            *phases = cand_p;
            value = cand_value;
            step = (step * 1.3).min(0.5);
        } else {
            step *= 0.5;
            if step < 1e-13 {
                break;
            }
        }
    }
    value
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_objective_on_l2_sphere() {
        // max 3 t1 + 4 t2 on the unit 2-sphere is 5.
        let terms = MonomialTerms {
            exponents: vec![vec![1, 0], vec![0, 1]],
            weights: vec![3.0, 4.0],
            n: 2,
        };
        let out =
            maximize_weighted_monomials(&terms, Exponent::Finite(2.0), &AscentOptions::default());
        assert!((out.value - 5.0).abs() < 1e-9, "got {}", out.value);
    }

    #[test]
    fn bilinear_objective_on_l2_sphere() {
        // max t1 t2 on the unit 2-sphere is 1/2 at t = (1/sqrt2, 1/sqrt2).
        let terms = MonomialTerms {
            exponents: vec![vec![1, 1]],
            weights: vec![1.0],
            n: 2,
        };
        let out =
            maximize_weighted_monomials(&terms, Exponent::Finite(2.0), &AscentOptions::default());
        assert!((out.value - 0.5).abs() < 1e-9, "got {}", out.value);
    }

    #[test]
    fn sup_ascent_aligns_phases() {
        // |z1 + z2| on the torus: maximum 2 at equal phases.
        let objective = |z: &[Complex64]| (z[0] + z[1]).norm();
        let out = maximize_on_sphere(objective, 2, Exponent::Infinity, &AscentOptions::default());
        assert!((out.value - 2.0).abs() < 1e-6, "got {}", out.value);
    }

    #[test]
    fn deterministic_given_seed() {
        let terms = MonomialTerms {
            exponents: vec![vec![2, 0], vec![1, 1], vec![0, 2]],
            weights: vec![0.3, 1.1, 0.7],
            n: 2,
        };
        let opts = AscentOptions::default();
        let a = maximize_weighted_monomials(&terms, Exponent::Finite(2.0), &opts);
        let b = maximize_weighted_monomials(&terms, Exponent::Finite(2.0), &opts);
        assert_eq!(a.value, b.value);
        assert_eq!(a.witness, b.witness);
    }
}
