//! Norms, duality, and sampling for the domain ball `B_{ℓ^n_q}` and the
//! codomain `X = ℓ^d_p`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::kahan::Kahan;
use crate::{Error, Result};

/// An `ℓ_p` exponent: a finite real `>= 1` or infinity.
///
/// Modeled as a sum type rather than a magic `f64` so the `q = ∞` closed
/// forms cannot be reached by accident ("inf" in flags and files, numbers
/// otherwise).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub fn new(p: f64) -> Result<Self> {
        if p.is_infinite() && p > 0.0 {
            return Ok(Exponent::Infinity);
        }
        if !p.is_finite() || p < 1.0 {
            return Err(Error::InvalidExponent(p));
        }
        Ok(Exponent::Finite(p))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Exponent::Infinity)
    }

    pub fn as_f64(&self) -> f64 {
        match self {
            Exponent::Finite(p) => *p,
            Exponent::Infinity => f64::INFINITY,
        }
    }

    /// Conjugate exponent: `1/p + 1/p' = 1`, with `1' = ∞` and `∞' = 1`.
    pub fn dual(&self) -> Exponent {
        match self {
            Exponent::Infinity => Exponent::Finite(1.0),
            Exponent::Finite(p) if *p == 1.0 => Exponent::Infinity,
            Exponent::Finite(p) => Exponent::Finite(p / (p - 1.0)),
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "Inf" | "INF" | "infinity" => Ok(Exponent::Infinity),
            other => {
                let p: f64 = other.parse().map_err(|_| {
                    Error::InvalidParameter(format!("unparseable exponent {other:?}"))
                })?;
                Exponent::new(p)
            }
        }
    }
}

// Serialized as a JSON number, or the string "inf" for infinity.
impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Exponent::Finite(p) => serializer.serialize_f64(*p),
            Exponent::Infinity => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(f64),
            Text(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Number(p) => Exponent::new(p).map_err(D::Error::custom),
            Raw::Text(s) => s.parse().map_err(D::Error::custom),
        }
    }
}

/// Domain `ℓ^n_q` and codomain `X = ℓ^d_p`.
///
/// `d = 1` with any `p` recovers the scalar case `X = ℂ`. Every `ℓ^d_p`
/// satisfies the standing 1-unconditionality assumption on the canonical
/// basis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaceSpec {
    pub domain_dim: usize,
    pub domain_exponent: Exponent,
    pub codomain_dim: usize,
    pub codomain_exponent: Exponent,
}

impl SpaceSpec {
    pub fn new(n: usize, q: Exponent, d: usize, p: Exponent) -> Result<Self> {
        if n < 1 || d < 1 {
            return Err(Error::InvalidParameter(format!(
                "dimensions must be >= 1 (n = {n}, d = {d})"
            )));
        }
        Ok(Self {
            domain_dim: n,
            domain_exponent: q,
            codomain_dim: d,
            codomain_exponent: p,
        })
    }

    /// Scalar-valued functions on the polydisk: `q = ∞`, `X = ℂ`.
    pub fn scalar_polydisk(n: usize) -> Self {
        Self {
            domain_dim: n,
            domain_exponent: Exponent::Infinity,
            codomain_dim: 1,
            codomain_exponent: Exponent::Finite(2.0),
        }
    }

    /// Scalar-valued functions on `B_{ℓ^n_q}`.
    pub fn scalar(n: usize, q: Exponent) -> Self {
        Self {
            domain_dim: n,
            domain_exponent: q,
            codomain_dim: 1,
            codomain_exponent: Exponent::Finite(2.0),
        }
    }

    /// Codomain norm of a coefficient vector.
    pub fn codomain_norm(&self, v: &[Complex64]) -> f64 {
        vector_norm(v, self.codomain_exponent)
    }

    /// Domain norm of a point.
    pub fn domain_norm(&self, z: &[Complex64]) -> f64 {
        vector_norm(z, self.domain_exponent)
    }
}

/// `(Σ |v_i|^q)^{1/q}` for finite `q`, `max |v_i|` for `q = ∞`.
///
/// The max case is exact; finite exponents accumulate in a fixed order with
/// compensation.
pub fn vector_norm(v: &[Complex64], exponent: Exponent) -> f64 {
    assert!(!v.is_empty(), "vector_norm: empty vector");
    match exponent {
        Exponent::Infinity => v.iter().map(|z| z.norm()).fold(0.0, f64::max),
        Exponent::Finite(q) => {
            if q == 1.0 {
                let mut acc = Kahan::default();
                for z in v {
                    acc.add(z.norm());
                }
                acc.value()
            } else if q == 2.0 {
                let mut acc = Kahan::default();
                for z in v {
                    acc.add(z.norm_sqr());
                }
                acc.value().sqrt()
            } else {
                let mut acc = Kahan::default();
                for z in v {
                    acc.add(z.norm().powf(q));
                }
                acc.value().powf(1.0 / q)
            }
        }
    }
}

/// Norm of the magnitudes vector (non-negative reals) in the `q`-norm.
pub(crate) fn magnitude_norm(t: &[f64], exponent: Exponent) -> f64 {
    match exponent {
        Exponent::Infinity => t.iter().fold(0.0f64, |a, &x| a.max(x.abs())),
        Exponent::Finite(q) => {
            let mut acc = Kahan::default();
            for &x in t {
                acc.add(x.abs().powf(q));
            }
            acc.value().powf(1.0 / q)
        }
    }
}

/// See [`Exponent::dual`]; the free-function spelling used where a dual norm
/// realizes a supremum over `B_{X*}`.
pub fn dual_exponent(p: Exponent) -> Exponent {
    p.dual()
}

/// Deterministic sample of `count` points on the unit sphere of `ℓ^n_q`.
///
/// Independent complex Gaussians normalized in the `q`-norm. This is not
/// uniform in surface measure for `q ≠ 2`; samples only seed multi-start
/// optimization, never measure-dependent estimates. Phases of each
/// coordinate are exactly uniform on the circle by symmetry of the Gaussian.
pub fn sample_sphere(spec: &SpaceSpec, seed: u64, count: usize) -> Vec<Vec<Complex64>> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let n = spec.domain_dim;
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        loop {
            let mut z: Vec<Complex64> = (0..n)
                .map(|_| Complex64::new(standard_normal(&mut rng), standard_normal(&mut rng)))
                .collect();
            let norm = vector_norm(&z, spec.domain_exponent);
            if norm > 1e-8 {
                for zi in &mut z {
                    *zi /= norm;
                }
                out.push(z);
                break;
            }
        }
    }
    out
}

// Box-Muller; two uniforms per normal keeps the stream layout simple and
// reproducible across rand versions.
fn standard_normal<R: Rng>(rng: &mut R) -> f64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Rotate each coordinate independently: `(z_1 e^{2πiθ_1}, …, z_n e^{2πiθ_n})`.
///
/// Preserves every `|z_i|` and hence every `q`-norm.
pub fn torus_orbit(z: &[Complex64], theta: &[f64]) -> Vec<Complex64> {
    assert_eq!(
        z.len(),
        theta.len(),
        "torus_orbit: point length {} != phase length {}",
        z.len(),
        theta.len()
    );
    z.iter()
        .zip(theta)
        .map(|(&zi, &t)| zi * Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * t))
        .collect()
}
