//! Vector-valued homogeneous polynomials, truncated power series, and their
//! `‖·‖_∞`, `‖·‖_1`, `‖·‖_2` norms.
//!
//! On the polydisk (`q = ∞`) the coefficient norms have closed forms and the
//! sup norm admits a mesh certificate. For finite `q` the coefficient norms
//! are suprema of weighted monomial sums over the positive part of the
//! sphere; they are enclosed by multi-start projected ascent whose lower end
//! is witness-backed and whose upper end is heuristic and flagged as such.
//! Suprema over `∂B` and over the closed ball agree for all three norms
//! because the summands are monotone in every `|z_i|`.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::ascent::{
    maximize_on_sphere, maximize_weighted_monomials, AscentOptions, MonomialTerms,
};
use crate::interval::{BoundInterval, Status};
use crate::kahan::{Kahan, KahanComplex};
use crate::multiindex::{monomial_eval, MultiIndex};
use crate::spaces::{Exponent, SpaceSpec};
use crate::{Error, Result};

/// Mesh certification guard: `n·mesh^n` evaluations must stay affordable.
const MESH_GUARD_N: usize = 3;
const MESH_GUARD_MESH: usize = 64;

/// Default optimizer effort for the finite-`q` norm enclosures.
fn default_ascent() -> AscentOptions {
    AscentOptions::default()
}

fn validate_coefficients(
    spec: &SpaceSpec,
    coefficients: &BTreeMap<MultiIndex, Vec<Complex64>>,
    degree: Option<u32>,
    max_degree: Option<u32>,
) -> Result<()> {
    for (alpha, x) in coefficients {
        if alpha.len() != spec.domain_dim {
            return Err(Error::DimensionMismatch {
                expected: spec.domain_dim,
                got: alpha.len(),
            });
        }
        if x.len() != spec.codomain_dim {
            return Err(Error::DimensionMismatch {
                expected: spec.codomain_dim,
                got: x.len(),
            });
        }
        if let Some(m) = degree {
            if alpha.degree() != m {
                return Err(Error::InvalidParameter(format!(
                    "coefficient index {alpha} has degree {} but the polynomial is {m}-homogeneous",
                    alpha.degree()
                )));
            }
        }
        if let Some(cap) = max_degree {
            if alpha.degree() > cap {
                return Err(Error::InvalidParameter(format!(
                    "coefficient index {alpha} exceeds the truncation degree {cap}"
                )));
            }
        }
    }
    Ok(())
}

fn drop_zero_vectors(coefficients: &mut BTreeMap<MultiIndex, Vec<Complex64>>) {
    coefficients.retain(|_, x| x.iter().any(|c| c.re != 0.0 || c.im != 0.0));
}

fn evaluate_map(
    coefficients: &BTreeMap<MultiIndex, Vec<Complex64>>,
    d: usize,
    z: &[Complex64],
) -> Vec<Complex64> {
    let mut acc = vec![KahanComplex::default(); d];
    for (alpha, x) in coefficients {
        let mono = monomial_eval(alpha, z);
        for (a, &xk) in acc.iter_mut().zip(x) {
            a.add(xk * mono);
        }
    }
    acc.into_iter().map(|a| a.value()).collect()
}

/// Anything that evaluates like a polynomial map into the codomain.
pub trait PolyEval: Sync {
    fn spec(&self) -> &SpaceSpec;
    fn evaluate_at(&self, z: &[Complex64]) -> Vec<Complex64>;
}

/// An `m`-homogeneous polynomial `Q(z) = Σ_{|α|=m} x_α z^α` with `x_α ∈ ℂ^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneousPolynomial {
    degree: u32,
    spec: SpaceSpec,
    coefficients: BTreeMap<MultiIndex, Vec<Complex64>>,
}

impl HomogeneousPolynomial {
    pub fn new(
        degree: u32,
        spec: SpaceSpec,
        coefficients: impl IntoIterator<Item = (MultiIndex, Vec<Complex64>)>,
    ) -> Result<Self> {
        let mut coefficients: BTreeMap<_, _> = coefficients.into_iter().collect();
        validate_coefficients(&spec, &coefficients, Some(degree), None)?;
        drop_zero_vectors(&mut coefficients);
        Ok(Self {
            degree,
            spec,
            coefficients,
        })
    }

    /// The declared zero polynomial of degree `m`.
    pub fn zero(degree: u32, spec: SpaceSpec) -> Self {
        Self {
            degree,
            spec,
            coefficients: BTreeMap::new(),
        }
    }

    /// Single-monomial polynomial `x · z^α`.
    pub fn monomial(spec: SpaceSpec, alpha: MultiIndex, x: Vec<Complex64>) -> Result<Self> {
        let degree = alpha.degree();
        Self::new(degree, spec, [(alpha, x)])
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn spec(&self) -> &SpaceSpec {
        &self.spec
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Coefficients in ascending lexicographic index order (deterministic).
    pub fn coefficients(&self) -> impl Iterator<Item = (&MultiIndex, &[Complex64])> {
        self.coefficients.iter().map(|(a, x)| (a, x.as_slice()))
    }

    pub fn coefficient(&self, alpha: &MultiIndex) -> Option<&[Complex64]> {
        self.coefficients.get(alpha).map(Vec::as_slice)
    }

    pub fn num_terms(&self) -> usize {
        self.coefficients.len()
    }

    /// `Σ_α x_α z^α` with compensated summation per codomain coordinate.
    pub fn evaluate(&self, z: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(z.len(), self.spec.domain_dim, "evaluate: point length");
        evaluate_map(&self.coefficients, self.spec.codomain_dim, z)
    }

    /// All coefficients multiplied by `c`.
    pub fn scaled(&self, c: Complex64) -> Self {
        let coefficients = self
            .coefficients
            .iter()
            .map(|(a, x)| (a.clone(), x.iter().map(|&v| v * c).collect()))
            .collect();
        Self {
            degree: self.degree,
            spec: self.spec,
            coefficients,
        }
    }
}

impl PolyEval for HomogeneousPolynomial {
    fn spec(&self) -> &SpaceSpec {
        &self.spec
    }

    fn evaluate_at(&self, z: &[Complex64]) -> Vec<Complex64> {
        self.evaluate(z)
    }
}

/// A power series truncated at total degree `M`: coefficients for all
/// `|α| <= M`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedPowerSeries {
    max_degree: u32,
    spec: SpaceSpec,
    coefficients: BTreeMap<MultiIndex, Vec<Complex64>>,
}

impl TruncatedPowerSeries {
    pub fn new(
        max_degree: u32,
        spec: SpaceSpec,
        coefficients: impl IntoIterator<Item = (MultiIndex, Vec<Complex64>)>,
    ) -> Result<Self> {
        let mut coefficients: BTreeMap<_, _> = coefficients.into_iter().collect();
        validate_coefficients(&spec, &coefficients, None, Some(max_degree))?;
        drop_zero_vectors(&mut coefficients);
        Ok(Self {
            max_degree,
            spec,
            coefficients,
        })
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn spec(&self) -> &SpaceSpec {
        &self.spec
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn coefficients(&self) -> impl Iterator<Item = (&MultiIndex, &[Complex64])> {
        self.coefficients.iter().map(|(a, x)| (a, x.as_slice()))
    }

    pub fn coefficient(&self, alpha: &MultiIndex) -> Option<&[Complex64]> {
        self.coefficients.get(alpha).map(Vec::as_slice)
    }

    /// The constant coefficient `x_0` (zero vector when absent).
    pub fn constant_term(&self) -> Vec<Complex64> {
        let zero_index = MultiIndex::new(vec![0; self.spec.domain_dim]).expect("n >= 1");
        self.coefficients
            .get(&zero_index)
            .cloned()
            .unwrap_or_else(|| vec![Complex64::new(0.0, 0.0); self.spec.codomain_dim])
    }

    /// The degree-`m` slice as a homogeneous polynomial.
    pub fn degree_slice(&self, m: u32) -> HomogeneousPolynomial {
        let coefficients: BTreeMap<_, _> = self
            .coefficients
            .iter()
            .filter(|(a, _)| a.degree() == m)
            .map(|(a, x)| (a.clone(), x.clone()))
            .collect();
        HomogeneousPolynomial {
            degree: m,
            spec: self.spec,
            coefficients,
        }
    }

    pub fn evaluate(&self, z: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(z.len(), self.spec.domain_dim, "evaluate: point length");
        evaluate_map(&self.coefficients, self.spec.codomain_dim, z)
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        let coefficients = self
            .coefficients
            .iter()
            .map(|(a, x)| (a.clone(), x.iter().map(|&v| v * c).collect()))
            .collect();
        Self {
            max_degree: self.max_degree,
            spec: self.spec,
            coefficients,
        }
    }
}

impl PolyEval for TruncatedPowerSeries {
    fn spec(&self) -> &SpaceSpec {
        &self.spec
    }

    fn evaluate_at(&self, z: &[Complex64]) -> Vec<Complex64> {
        self.evaluate(z)
    }
}

/// `(Σ_α ‖x_α z^α‖²)^{1/2}` at a fixed point `z`; invariant along torus
/// orbits of `z`.
pub fn l2_coefficient_aggregate(q: &HomogeneousPolynomial, z: &[Complex64]) -> f64 {
    let mut acc = Kahan::default();
    for (alpha, x) in q.coefficients() {
        let w = q.spec.codomain_norm(x) * monomial_eval(alpha, z).norm();
        acc.add(w * w);
    }
    acc.value().sqrt()
}

fn monomial_terms(q: &HomogeneousPolynomial, squared: bool) -> MonomialTerms {
    let mut exponents = Vec::with_capacity(q.coefficients.len());
    let mut weights = Vec::with_capacity(q.coefficients.len());
    for (alpha, x) in q.coefficients() {
        let w = q.spec.codomain_norm(x);
        if squared {
            exponents.push(alpha.entries().iter().map(|&e| 2 * e).collect());
            weights.push(w * w);
        } else {
            exponents.push(alpha.entries().to_vec());
            weights.push(w);
        }
    }
    MonomialTerms {
        exponents,
        weights,
        n: q.spec.domain_dim,
    }
}

/// Widen the heuristic upper end when the restarts disagree, so optimizer
/// non-convergence is visible in the interval instead of silent.
fn heuristic_interval(value: f64, restart_values: &[f64]) -> BoundInterval {
    let spread = if restart_values.len() >= 2 {
        let median = restart_values[restart_values.len() / 2];
        ((value - median) / value.max(1e-300)).max(0.0)
    } else {
        0.0
    };
    let spread = if spread > 1e-6 { spread } else { 0.0 };
    BoundInterval {
        lo: value,
        hi: value * (1.0 + spread),
        status: Status::Heuristic,
    }
}

/// `‖Q‖_1 = sup_{‖z‖_q = 1} Σ_α ‖x_α z^α‖`.
///
/// Exact closed form `Σ_α ‖x_α‖` on the polydisk; witness-backed ascent
/// enclosure otherwise.
pub fn norm_one(q: &HomogeneousPolynomial) -> Result<BoundInterval> {
    norm_one_with(q, &default_ascent())
}

pub(crate) fn norm_one_with(
    q: &HomogeneousPolynomial,
    opts: &AscentOptions,
) -> Result<BoundInterval> {
    if q.is_zero() {
        return Ok(BoundInterval::degenerate(0.0, Status::Certified));
    }
    match q.spec.domain_exponent {
        Exponent::Infinity => {
            let mut acc = Kahan::default();
            for (_, x) in q.coefficients() {
                acc.add(q.spec.codomain_norm(x));
            }
            Ok(BoundInterval::degenerate(acc.value(), Status::Certified))
        }
        qexp @ Exponent::Finite(_) => {
            let terms = monomial_terms(q, false);
            let out = maximize_weighted_monomials(&terms, qexp, opts);
            Ok(heuristic_interval(out.value, &out.restart_values))
        }
    }
}

/// `‖Q‖_2 = sup_{‖z‖_q = 1} (Σ_α ‖x_α z^α‖²)^{1/2}`.
pub fn norm_two(q: &HomogeneousPolynomial) -> Result<BoundInterval> {
    norm_two_with(q, &default_ascent())
}

pub(crate) fn norm_two_with(
    q: &HomogeneousPolynomial,
    opts: &AscentOptions,
) -> Result<BoundInterval> {
    if q.is_zero() {
        return Ok(BoundInterval::degenerate(0.0, Status::Certified));
    }
    match q.spec.domain_exponent {
        Exponent::Infinity => {
            let mut acc = Kahan::default();
            for (_, x) in q.coefficients() {
                let w = q.spec.codomain_norm(x);
                acc.add(w * w);
            }
            Ok(BoundInterval::degenerate(
                acc.value().sqrt(),
                Status::Certified,
            ))
        }
        qexp @ Exponent::Finite(_) => {
            let terms = monomial_terms(q, true);
            let out = maximize_weighted_monomials(&terms, qexp, opts);
            let sq = heuristic_interval(out.value, &out.restart_values);
            Ok(BoundInterval {
                lo: sq.lo.max(0.0).sqrt(),
                hi: sq.hi.max(0.0).sqrt(),
                status: Status::Heuristic,
            })
        }
    }
}

/// Heuristic lower bound of `‖P‖_∞ = sup_{‖z‖_q = 1} ‖P(z)‖` with its
/// feasible witness.
///
/// Multi-start projected ascent over magnitudes and phases; the returned
/// value is `‖P(z*)‖` at the witness, hence always a valid lower bound.
/// Deterministic given the seed, and non-decreasing in `restarts` (restart
/// streams are independent, so a larger count explores a superset).
pub fn norm_sup_heuristic<P: PolyEval>(p: &P, restarts: usize, seed: u64) -> (f64, Vec<Complex64>) {
    let spec = *p.spec();
    let objective = move |z: &[Complex64]| spec.codomain_norm(&p.evaluate_at(z));
    let opts = AscentOptions {
        restarts: restarts.max(1),
        max_iters: 300,
        seed,
    };
    let out = maximize_on_sphere(objective, spec.domain_dim, spec.domain_exponent, &opts);
    (out.value, out.witness)
}

/// Certified two-sided enclosure of `‖Q‖_∞` on the polydisk.
///
/// `lo` is the exact maximum over the phase mesh `θ_j = 2πk/mesh`; `hi` adds
/// the Lipschitz slack `L·δ` with `L = m·Σ_α ‖x_α‖` and `δ = π/mesh`. The
/// one-variable chain rule gives `‖∂F/∂θ_j‖ <= Σ_α α_j ‖x_α‖` for
/// `F(θ) = Q(e^{iθ_1}, …, e^{iθ_n})`, so moving coordinate-wise from the
/// nearest mesh point (at most `π/mesh` away in each phase, in radians)
/// changes `‖F‖` by at most `Σ_j Σ_α α_j ‖x_α‖ · π/mesh = L·δ`. Suprema over
/// `∂B_{ℓ^n_∞}` are attained on the torus by the maximum principle applied
/// per coordinate.
pub fn norm_sup_certified(q: &HomogeneousPolynomial, mesh: usize) -> Result<BoundInterval> {
    if !q.spec.domain_exponent.is_infinite() {
        return Err(Error::Precondition(
            "norm_sup_certified requires q = inf (polydisk)".into(),
        ));
    }
    let mut lipschitz = 0.0;
    for (_, x) in q.coefficients() {
        lipschitz += q.spec.codomain_norm(x);
    }
    lipschitz *= f64::from(q.degree);
    mesh_certified_sup(&q.coefficients, &q.spec, lipschitz, mesh)
}

/// Series variant of [`norm_sup_certified`] with the degree-weighted
/// Lipschitz constant `L = Σ_α |α|·‖x_α‖`.
pub fn norm_sup_certified_series(f: &TruncatedPowerSeries, mesh: usize) -> Result<BoundInterval> {
    if !f.spec.domain_exponent.is_infinite() {
        return Err(Error::Precondition(
            "norm_sup_certified_series requires q = inf (polydisk)".into(),
        ));
    }
    let mut lipschitz = 0.0;
    for (alpha, x) in f.coefficients() {
        lipschitz += f64::from(alpha.degree()) * f.spec.codomain_norm(x);
    }
    mesh_certified_sup(&f.coefficients, &f.spec, lipschitz, mesh)
}

fn mesh_certified_sup(
    coefficients: &BTreeMap<MultiIndex, Vec<Complex64>>,
    spec: &SpaceSpec,
    lipschitz: f64,
    mesh: usize,
) -> Result<BoundInterval> {
    let n = spec.domain_dim;
    if n > MESH_GUARD_N || !(2..=MESH_GUARD_MESH).contains(&mesh) {
        return Err(Error::MeshBudget {
            n,
            mesh,
            max_n: MESH_GUARD_N,
            max_mesh: MESH_GUARD_MESH,
        });
    }
    if coefficients.is_empty() {
        return Ok(BoundInterval::degenerate(0.0, Status::Certified));
    }

    let roots: Vec<Complex64> = (0..mesh)
        .map(|k| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / mesh as f64))
        .collect();

    let mut lo: f64 = 0.0;
    let mut counter = vec![0usize; n];
    let mut z = vec![roots[0]; n];
    loop {
        let value = spec.codomain_norm(&evaluate_map(coefficients, spec.codomain_dim, &z));
        if value > lo {
            lo = value;
        }
        // odometer over [0, mesh)^n
        let mut pos = 0;
        loop {
            if pos == n {
                let delta = std::f64::consts::PI / mesh as f64;
                // Outward slack for the floating-point evaluation itself.
                let fp = (lo.abs() * 1e-13).max(1e-300);
                let hi = lo + lipschitz * delta + fp;
                return BoundInterval::certified((lo - fp).max(0.0), hi);
            }
            counter[pos] += 1;
            if counter[pos] < mesh {
                z[pos] = roots[counter[pos]];
                break;
            }
            counter[pos] = 0;
            z[pos] = roots[0];
            pos += 1;
        }
    }
}

/// Enclosure of `sup_{‖z‖_q <= 1} Σ_α ‖x_α‖ r^{|α|} |z^α|`, the coefficient
/// majorant of `f` at radius `r`.
pub fn coefficient_majorant(f: &TruncatedPowerSeries, r: f64) -> Result<BoundInterval> {
    coefficient_majorant_with(f, r, &default_ascent())
}

pub(crate) fn coefficient_majorant_with(
    f: &TruncatedPowerSeries,
    r: f64,
    opts: &AscentOptions,
) -> Result<BoundInterval> {
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::InvalidParameter(format!(
            "majorant radius r = {r} outside [0, 1]"
        )));
    }
    let x0_norm = f.spec.codomain_norm(&f.constant_term());
    if r == 0.0 || f.is_zero() {
        return Ok(BoundInterval::degenerate(x0_norm, Status::Certified));
    }
    match f.spec.domain_exponent {
        Exponent::Infinity => {
            let mut acc = Kahan::default();
            for (alpha, x) in f.coefficients() {
                acc.add(f.spec.codomain_norm(x) * r.powi(alpha.degree() as i32));
            }
            Ok(BoundInterval::degenerate(acc.value(), Status::Certified))
        }
        qexp @ Exponent::Finite(_) => {
            // Lower end: ascent on the full radially-scaled objective.
            let mut exponents = Vec::new();
            let mut weights = Vec::new();
            for (alpha, x) in f.coefficients() {
                exponents.push(alpha.entries().to_vec());
                weights.push(f.spec.codomain_norm(x) * r.powi(alpha.degree() as i32));
            }
            let terms = MonomialTerms {
                exponents,
                weights,
                n: f.spec.domain_dim,
            };
            let out = maximize_weighted_monomials(&terms, qexp, opts);
            let lo = out.value.max(x0_norm);

            // Upper end: degree-slice norms scaled by r^m. The sup of a sum
            // is at most the sum of per-degree sups; each slice sup comes
            // from the same ascent machinery, so the end stays heuristic.
            let mut hi = x0_norm;
            for m in 1..=f.max_degree {
                let slice = f.degree_slice(m);
                if slice.is_zero() {
                    continue;
                }
                let slice_norm = norm_one_with(&slice, opts)?;
                hi += slice_norm.hi * r.powi(m as i32);
            }
            Ok(BoundInterval {
                lo,
                hi: hi.max(lo),
                status: Status::Heuristic,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::{sample_sphere, torus_orbit};
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn scalar(v: f64) -> Vec<Complex64> {
        vec![c(v, 0.0)]
    }

    fn idx(entries: &[u32]) -> MultiIndex {
        MultiIndex::new(entries.to_vec()).unwrap()
    }

    /// Scalar polynomial with random complex coefficients on all of Λ(m,n).
    fn random_poly(m: u32, spec: SpaceSpec, rng: &mut ChaCha12Rng) -> HomogeneousPolynomial {
        let indices = crate::multiindex::enumerate_indices(m, spec.domain_dim as u32).unwrap();
        let coeffs: Vec<_> = indices
            .into_iter()
            .map(|a| {
                let x: Vec<Complex64> = (0..spec.codomain_dim)
                    .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                    .collect();
                (a, x)
            })
            .collect();
        HomogeneousPolynomial::new(m, spec, coeffs).unwrap()
    }

    #[test]
    fn evaluate_zero_and_simple() {
        let spec = SpaceSpec::scalar_polydisk(2);
        let zero = HomogeneousPolynomial::zero(2, spec);
        let v = zero.evaluate(&[c(0.3, 0.1), c(0.2, -0.4)]);
        assert_eq!(v, vec![c(0.0, 0.0)]);

        // Q = z1 z2 at (1, 1) -> 1
        let q = HomogeneousPolynomial::new(2, spec, [(idx(&[1, 1]), scalar(1.0))]).unwrap();
        let v = q.evaluate(&[c(1.0, 0.0), c(1.0, 0.0)]);
        assert!((v[0] - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn rejects_wrong_degree_or_dims() {
        let spec = SpaceSpec::scalar_polydisk(2);
        assert!(HomogeneousPolynomial::new(2, spec, [(idx(&[1, 0]), scalar(1.0))]).is_err());
        assert!(HomogeneousPolynomial::new(2, spec, [(idx(&[1, 1, 0]), scalar(1.0))]).is_err());
        assert!(
            HomogeneousPolynomial::new(2, spec, [(idx(&[1, 1]), vec![c(1.0, 0.0); 2])]).is_err()
        );
    }

    #[test]
    fn torus_orbit_preserves_l2_aggregate() {
        let spec = SpaceSpec::scalar(3, Exponent::Finite(2.0));
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        let q = random_poly(2, spec, &mut rng);
        let z = &sample_sphere(&spec, 17, 1)[0];
        let base = l2_coefficient_aggregate(&q, z);
        for k in 0..30 {
            let theta: Vec<f64> = (0..3).map(|j| ((k * 3 + j) as f64 * 0.137) % 1.0).collect();
            let v = torus_orbit(z, &theta);
            assert!((l2_coefficient_aggregate(&q, &v) - base).abs() <= 1e-12 * base.max(1.0));
        }
    }

    #[test]
    fn norm_one_polydisk_closed_form() {
        // Q = z1^2 + z2^2 -> 2, exactly, attained at |z1| = |z2| = 1.
        let spec = SpaceSpec::scalar_polydisk(2);
        let q = HomogeneousPolynomial::new(
            2,
            spec,
            [(idx(&[2, 0]), scalar(1.0)), (idx(&[0, 2]), scalar(1.0))],
        )
        .unwrap();
        let norm = norm_one(&q).unwrap();
        assert_eq!(norm.lo, 2.0);
        assert_eq!(norm.hi, 2.0);
        assert!(norm.status.is_certified());
    }

    #[test]
    fn norm_one_l2_linear_is_euclidean_norm() {
        // m=1, coefficients (3, 4), q=2: Cauchy-Schwarz equality gives 5.
        let spec = SpaceSpec::scalar(2, Exponent::Finite(2.0));
        let q = HomogeneousPolynomial::new(
            1,
            spec,
            [(idx(&[1, 0]), scalar(3.0)), (idx(&[0, 1]), scalar(4.0))],
        )
        .unwrap();
        let norm = norm_one(&q).unwrap();
        assert_relative_eq!(norm.lo, 5.0, max_relative = 1e-9);
        assert_eq!(norm.status, Status::Heuristic);
    }

    /// Dense grid over the positive quarter-sphere of ℓ²₂ — the independent
    /// oracle for the finite-q ascent (n = 2 only).
    fn grid_oracle_q2(terms: &MonomialTerms, resolution: usize) -> f64 {
        let mut best: f64 = 0.0;
        for k in 0..=resolution {
            let theta = std::f64::consts::FRAC_PI_2 * k as f64 / resolution as f64;
            let t = [theta.cos(), theta.sin()];
            best = best.max(terms.value(&t));
        }
        best
    }

    #[test]
    fn norm_one_matches_grid_oracle() {
        let spec = SpaceSpec::scalar(2, Exponent::Finite(2.0));
        let mut rng = ChaCha12Rng::seed_from_u64(99);
        for _ in 0..10 {
            let q = random_poly(2, spec, &mut rng);
            let terms = monomial_terms(&q, false);
            let oracle = grid_oracle_q2(&terms, 1571); // ~1e-3 resolution in angle
            let norm = norm_one(&q).unwrap();
            assert!(
                (norm.lo - oracle).abs() <= 1e-4,
                "ascent {} vs grid {}",
                norm.lo,
                oracle
            );
        }
    }

    #[test]
    fn norm_two_polydisk_and_grid() {
        let spec = SpaceSpec::scalar_polydisk(2);
        // z1 + z2 -> sqrt(2)
        let q = HomogeneousPolynomial::new(
            1,
            spec,
            [(idx(&[1, 0]), scalar(1.0)), (idx(&[0, 1]), scalar(1.0))],
        )
        .unwrap();
        let norm = norm_two(&q).unwrap();
        assert_relative_eq!(norm.lo, std::f64::consts::SQRT_2, max_relative = 1e-15);

        // single monomial: ‖x_α‖ · max |z^α| = 0.7 on the polydisk
        let q = HomogeneousPolynomial::new(3, spec, [(idx(&[2, 1]), scalar(0.7))]).unwrap();
        let norm = norm_two(&q).unwrap();
        assert_relative_eq!(norm.lo, 0.7, max_relative = 1e-15);

        // q = 2 random instance against the grid oracle
        let spec2 = SpaceSpec::scalar(2, Exponent::Finite(2.0));
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for _ in 0..5 {
            let q = random_poly(2, spec2, &mut rng);
            let terms = monomial_terms(&q, true);
            let oracle = grid_oracle_q2(&terms, 1571).sqrt();
            let norm = norm_two(&q).unwrap();
            assert!(
                (norm.lo - oracle).abs() <= 1e-4,
                "ascent {} vs grid {}",
                norm.lo,
                oracle
            );
        }
    }

    #[test]
    fn sup_heuristic_examples() {
        // Q = z1^m on the polydisk: sup 1 with |z1| = 1.
        let spec = SpaceSpec::scalar_polydisk(2);
        let q = HomogeneousPolynomial::new(3, spec, [(idx(&[3, 0]), scalar(1.0))]).unwrap();
        let (value, witness) = norm_sup_heuristic(&q, 4, 42);
        assert!((value - 1.0).abs() < 1e-9);
        assert!((witness[0].norm() - 1.0).abs() < 1e-9);

        // Q = z1 z2 on the l2 sphere: closed-form optimum 1/2.
        let spec = SpaceSpec::scalar(2, Exponent::Finite(2.0));
        let q = HomogeneousPolynomial::new(2, spec, [(idx(&[1, 1]), scalar(1.0))]).unwrap();
        let (value, witness) = norm_sup_heuristic(&q, 6, 42);
        assert!((value - 0.5).abs() < 1e-6, "got {value}");
        assert!((spec.domain_norm(&witness) - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn sup_heuristic_monotone_in_restarts() {
        let spec = SpaceSpec::scalar(3, Exponent::Finite(2.0));
        let mut rng = ChaCha12Rng::seed_from_u64(23);
        let q = random_poly(2, spec, &mut rng);
        let mut prev = 0.0;
        for restarts in [1, 2, 4, 8] {
            let (value, _) = norm_sup_heuristic(&q, restarts, 7);
            assert!(
                value >= prev - 1e-15,
                "restarts {restarts}: {value} < {prev}"
            );
            prev = value;
        }
    }

    #[test]
    fn certified_sup_examples() {
        let spec = SpaceSpec::scalar_polydisk(2);
        // z1^m: interval containing 1 with width <= L*delta.
        let q = HomogeneousPolynomial::new(4, spec, [(idx(&[4, 0]), scalar(1.0))]).unwrap();
        let enc = norm_sup_certified(&q, 32).unwrap();
        assert!(enc.contains(1.0));
        assert!(enc.width() <= 4.0 * std::f64::consts::PI / 32.0 + 1e-12);
        assert!(enc.status.is_certified());

        // z1 + z2: contains 2 (aligned phases are on the mesh).
        let q = HomogeneousPolynomial::new(
            1,
            spec,
            [(idx(&[1, 0]), scalar(1.0)), (idx(&[0, 1]), scalar(1.0))],
        )
        .unwrap();
        let enc = norm_sup_certified(&q, 16).unwrap();
        assert!(enc.contains(2.0));
        assert!((enc.lo - 2.0).abs() <= 1e-12);
    }

    #[test]
    fn certified_sup_contains_heuristic_lower() {
        let spec = SpaceSpec::scalar_polydisk(2);
        let mut rng = ChaCha12Rng::seed_from_u64(31);
        for _ in 0..10 {
            let q = random_poly(2, spec, &mut rng);
            let enc = norm_sup_certified(&q, 64).unwrap();
            let (heur, _) = norm_sup_heuristic(&q, 6, 3);
            assert!(
                heur <= enc.hi + 1e-9,
                "heuristic {heur} above certified hi {}",
                enc.hi
            );
            assert!(enc.lo <= heur + 1e-9);
        }
    }

    #[test]
    fn certified_sup_guard() {
        let spec = SpaceSpec::scalar_polydisk(4);
        let q = HomogeneousPolynomial::new(1, spec, [(idx(&[1, 0, 0, 0]), scalar(1.0))]).unwrap();
        assert!(matches!(
            norm_sup_certified(&q, 16),
            Err(Error::MeshBudget { .. })
        ));
        let spec2 = SpaceSpec::scalar_polydisk(2);
        let q2 = HomogeneousPolynomial::new(1, spec2, [(idx(&[1, 0]), scalar(1.0))]).unwrap();
        assert!(matches!(
            norm_sup_certified(&q2, 65),
            Err(Error::MeshBudget { .. })
        ));
        let spec3 = SpaceSpec::scalar(2, Exponent::Finite(2.0));
        let q3 = HomogeneousPolynomial::new(1, spec3, [(idx(&[1, 0]), scalar(1.0))]).unwrap();
        assert!(matches!(
            norm_sup_certified(&q3, 16),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn majorant_examples() {
        // r = 0 -> ‖x_0‖ exactly.
        let spec = SpaceSpec::scalar_polydisk(1);
        let f = TruncatedPowerSeries::new(
            3,
            spec,
            [
                (idx(&[0]), scalar(0.25)),
                (idx(&[1]), scalar(1.0)),
                (idx(&[2]), scalar(1.0)),
                (idx(&[3]), scalar(1.0)),
            ],
        )
        .unwrap();
        let at0 = coefficient_majorant(&f, 0.0).unwrap();
        assert_eq!(at0.lo, 0.25);
        assert!(at0.status.is_certified());

        // unit coefficients up to degree M, n = 1, q = inf: geometric partial sum.
        let spec = SpaceSpec::scalar_polydisk(1);
        let m = 6u32;
        let coeffs: Vec<_> = (0..=m).map(|k| (idx(&[k]), scalar(1.0))).collect();
        let f = TruncatedPowerSeries::new(m, spec, coeffs).unwrap();
        let r: f64 = 0.5;
        let expect: f64 = (0..=m).map(|k| r.powi(k as i32)).sum();
        let enc = coefficient_majorant(&f, r).unwrap();
        assert_relative_eq!(enc.lo, expect, max_relative = 1e-14);
        assert_relative_eq!(enc.hi, expect, max_relative = 1e-14);
    }

    #[test]
    fn majorant_monotone_in_radius() {
        let spec = SpaceSpec::scalar(2, Exponent::Finite(2.0));
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        let q = random_poly(2, spec, &mut rng);
        let coeffs: Vec<_> = q
            .coefficients()
            .map(|(a, x)| (a.clone(), x.to_vec()))
            .collect();
        let f = TruncatedPowerSeries::new(2, spec, coeffs).unwrap();
        let mut prev = 0.0;
        for &r in &[0.1, 0.3, 0.5, 0.8, 1.0] {
            let enc = coefficient_majorant(&f, r).unwrap();
            assert!(enc.lo >= prev - 1e-12);
            prev = enc.lo;
        }
    }

    #[test]
    fn norm_scaling_is_absolutely_homogeneous() {
        let specs = [
            SpaceSpec::scalar_polydisk(2),
            SpaceSpec::scalar(2, Exponent::Finite(2.0)),
        ];
        let mut rng = ChaCha12Rng::seed_from_u64(8);
        for spec in specs {
            let q = random_poly(2, spec, &mut rng);
            let factor = c(-0.6, 0.45);
            let scaled = q.scaled(factor);
            let (a, b) = (norm_one(&q).unwrap(), norm_one(&scaled).unwrap());
            assert_relative_eq!(b.lo, a.lo * factor.norm(), max_relative = 1e-9);
            let (a, b) = (norm_two(&q).unwrap(), norm_two(&scaled).unwrap());
            assert_relative_eq!(b.lo, a.lo * factor.norm(), max_relative = 1e-9);
            let (va, _) = norm_sup_heuristic(&q, 4, 5);
            let (vb, _) = norm_sup_heuristic(&scaled, 4, 5);
            assert_relative_eq!(vb, va * factor.norm(), max_relative = 1e-6);
        }
    }

    #[test]
    fn zero_polynomial_norms_are_zero() {
        for spec in [
            SpaceSpec::scalar_polydisk(2),
            SpaceSpec::scalar(2, Exponent::Finite(2.0)),
        ] {
            let zero = HomogeneousPolynomial::zero(2, spec);
            assert_eq!(norm_one(&zero).unwrap().hi, 0.0);
            assert_eq!(norm_two(&zero).unwrap().hi, 0.0);
        }
    }

    #[test]
    fn degree_slice_extracts_valid_polynomials() {
        let spec = SpaceSpec::scalar_polydisk(2);
        let f = TruncatedPowerSeries::new(
            2,
            spec,
            [
                (idx(&[0, 0]), scalar(0.5)),
                (idx(&[1, 0]), scalar(1.5)),
                (idx(&[1, 1]), scalar(-2.0)),
            ],
        )
        .unwrap();
        let s1 = f.degree_slice(1);
        assert_eq!(s1.degree(), 1);
        assert_eq!(s1.num_terms(), 1);
        let s2 = f.degree_slice(2);
        assert_eq!(s2.coefficient(&idx(&[1, 1])).unwrap()[0], c(-2.0, 0.0));
        assert!(f.degree_slice(5).is_zero());
        assert_eq!(f.constant_term(), scalar(0.5));
    }
}
