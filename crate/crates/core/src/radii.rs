//! Certified evaluation of the coefficient power series `H_n` and `H̃_n`,
//! bisection for the radius roots `β_n` and the `γ_n` enclosure, and report
//! assembly.
//!
//! `β_n` is the unique root in `(0,1)` of `x + Σ_{m>=2} √N_m(n) x^m = λ/2`;
//! `γ_n` replaces `√N_m(n)` by the Sidon constants `S̃(m,n)` and is enclosed
//! from a two-sided coefficient table (larger coefficients give smaller
//! roots, so the upper-side table bounds `γ_n` from below and the lower-side
//! table from above). Both series have coefficient 1 at `m = 1` — the `γ`
//! series because `S̃(1,n) = 1` exactly.

use serde::Serialize;

use crate::interval::{BoundInterval, Status};
use crate::kahan::Kahan;
use crate::sidon::CoefficientBounds;
use crate::spaces::{Exponent, SpaceSpec};
use crate::{Error, Result};

/// Which side of a coefficient table drives a series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableSide {
    Lower,
    Upper,
}

/// Coefficient source for the radius series.
#[derive(Debug, Clone)]
pub enum CoefficientSource {
    /// `c_1 = 1`, `c_m = √N_m(n)` for `m >= 2` (the `β_n` series).
    SqrtN,
    /// Table entries for `m <= m_max`; the tail policy supplies
    /// `√N_m(n)` (upper side) or 1 (lower side) beyond.
    Table {
        bounds: CoefficientBounds,
        side: TableSide,
    },
}

/// One radius equation: `Σ_m c_m x^m = λ/2` in dimension `n`.
#[derive(Debug, Clone)]
pub struct SeriesSpec {
    pub n: usize,
    pub source: CoefficientSource,
    pub lambda: f64,
}

impl SeriesSpec {
    pub fn sqrt_n(n: usize, lambda: f64) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidParameter("series needs n >= 1".into()));
        }
        if lambda < 1.0 {
            return Err(Error::InvalidParameter(format!("lambda = {lambda} < 1")));
        }
        Ok(Self {
            n,
            source: CoefficientSource::SqrtN,
            lambda,
        })
    }

    pub fn from_table(bounds: CoefficientBounds, side: TableSide, lambda: f64) -> Result<Self> {
        if lambda < 1.0 {
            return Err(Error::InvalidParameter(format!("lambda = {lambda} < 1")));
        }
        Ok(Self {
            n: bounds.n(),
            source: CoefficientSource::Table { bounds, side },
            lambda,
        })
    }

    fn is_certified(&self) -> bool {
        match &self.source {
            CoefficientSource::SqrtN => true,
            CoefficientSource::Table { bounds, .. } => bounds.is_certified(),
        }
    }

    /// Coefficient for `m >= 2` given the running `√N_m(n)` value.
    fn coefficient(&self, m: u32, sqrt_count: f64) -> f64 {
        match &self.source {
            CoefficientSource::SqrtN => sqrt_count,
            CoefficientSource::Table { bounds, side } => match bounds.entry(m) {
                Some((l, u)) => match side {
                    TableSide::Lower => l,
                    TableSide::Upper => u,
                },
                None => match side {
                    TableSide::Lower => 1.0,
                    TableSide::Upper => sqrt_count,
                },
            },
        }
    }

    /// Whether the tail beyond the table decays like the `√N` series (true)
    /// or is constant 1 (false).
    fn sqrt_tail(&self) -> bool {
        !matches!(
            &self.source,
            CoefficientSource::Table {
                side: TableSide::Lower,
                ..
            }
        )
    }

    fn table_m_max(&self) -> u32 {
        match &self.source {
            CoefficientSource::SqrtN => 1,
            CoefficientSource::Table { bounds, .. } => bounds.m_max(),
        }
    }
}

const MAX_TERMS: u32 = 10_000_000;
/// Relative width floor: requested absolute tolerances below
/// `|sum| * REL_FLOOR` are not attainable in f64 and are relaxed to it (the
/// root solvers operate far from this regime; it matters only for
/// divergence probes at `x → 1`).
const REL_FLOOR: f64 = 1e-12;

/// Enclosure of the infinite sum `Σ_m c_m x^m` of width `<= max(tol,
/// |sum|·1e-12)`.
///
/// Truncation at `M` with a certified geometric tail: the `√N` coefficient
/// ratios `√(N_{m+1}(n)/N_m(n)) = √((n+m)/(m+1))` — the binomial identity
/// `N_{m+1}/N_m = (n+m)/(m+1)` follows from `C(n+m, m+1)/C(n+m−1, m)` —
/// decrease to 1, so with `ρ_M = √((n+M)/(M+1))` and `ρ_M·x < 1` the tail is
/// at most `c_{M+1} x^{M+1}/(1 − ρ_M x)`. The all-ones tail of a lower-side
/// table is the plain geometric `x^{M+1}/(1−x)`.
pub fn eval_series(s: &SeriesSpec, x: f64, tol: f64) -> Result<BoundInterval> {
    if !(0.0..1.0).contains(&x) {
        return Err(Error::InvalidParameter(format!(
            "series argument x = {x} outside [0, 1) (the series diverges at 1)"
        )));
    }
    if tol <= 0.0 {
        return Err(Error::InvalidParameter(format!("tol = {tol} must be > 0")));
    }
    if x == 0.0 {
        return Ok(BoundInterval::degenerate(0.0, status_of(s)));
    }

    let n = s.n as f64;
    let mut sum = Kahan::default();
    sum.add(x); // m = 1, coefficient 1 in every mode
    let mut x_pow = x;
    let mut sqrt_count = n.sqrt(); // √N_1(n)
    let mut m: u32 = 1;
    let tail_bound;
    loop {
        // Tail from the current M = m (only once every explicit table entry
        // is folded in).
        if m >= s.table_m_max() {
            let mf = f64::from(m);
            let candidate = if s.sqrt_tail() {
                let rho = ((n + mf) / (mf + 1.0)).sqrt();
                if rho * x < 1.0 {
                    let next_coeff = sqrt_count * rho;
                    Some(next_coeff * x_pow * x / (1.0 - rho * x))
                } else {
                    None
                }
            } else {
                Some(x_pow * x / (1.0 - x))
            };
            if let Some(t) = candidate {
                let eff_tol = tol.max(sum.value().abs() * REL_FLOOR);
                if t <= eff_tol * 0.5 {
                    tail_bound = t;
                    break;
                }
            }
        }
        if m >= MAX_TERMS {
            return Err(Error::NonConvergence { iterations: m });
        }
        m += 1;
        let mf = f64::from(m);
        sqrt_count *= ((n + mf - 1.0) / mf).sqrt();
        x_pow *= x;
        sum.add(s.coefficient(m, sqrt_count) * x_pow);
    }

    let total = sum.value();
    // Accumulated floating-point slack: ~2 rounded operations per term.
    let fp_slack = total.abs() * (f64::from(m) * 4.0 * f64::EPSILON) + 1e-300;
    BoundInterval::new(
        total - fp_slack,
        total + tail_bound + fp_slack,
        status_of(s),
    )
}

fn status_of(s: &SeriesSpec) -> Status {
    if s.is_certified() {
        Status::Certified
    } else {
        Status::Heuristic
    }
}

/// A solved root with solver diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct RootSolve {
    pub interval: BoundInterval,
    pub iterations: u32,
    pub evaluations: u64,
}

/// Certified enclosure of width `<= tol` of the unique root of
/// `series = λ/2` in `(0, 1)`.
///
/// Bisection with interval-valued evaluations: the bracket shrinks only when
/// an evaluation lies strictly on one side of `λ/2`; a straddling evaluation
/// is retried at tighter tolerance, and localized directly through the slope
/// bound `H'(x) >= 1` (the series has `c_1 = 1` and non-negative
/// coefficients, so values transfer to roots one-to-one).
pub fn solve_root(s: &SeriesSpec, tol: f64) -> Result<BoundInterval> {
    solve_root_detailed(s, tol).map(|r| r.interval)
}

pub fn solve_root_detailed(s: &SeriesSpec, tol: f64) -> Result<RootSolve> {
    if tol <= 0.0 {
        return Err(Error::InvalidParameter(format!("tol = {tol} must be > 0")));
    }
    let target = s.lambda * 0.5;
    let status = status_of(s);

    // All coefficients are >= 1, so series(x) >= x/(1−x) and the root is at
    // most λ/(λ+2); pad the bracket a little past it.
    let trivial_root = s.lambda / (s.lambda + 2.0);
    let mut lo = 0.0f64;
    let mut hi = (trivial_root + (10.0 * tol).min(1e-3)).min(0.5 * (1.0 + trivial_root));
    let mut eval_tol = (tol / 8.0).max(1e-15);
    let mut evaluations: u64 = 0;

    // The bracket top must evaluate strictly above the target.
    loop {
        let e = eval_series(s, hi, eval_tol)?;
        evaluations += 1;
        if e.lo > target {
            break;
        }
        hi = 0.5 * (hi + 1.0);
        if hi > 1.0 - 1e-12 {
            return Err(Error::NonConvergence { iterations: 0 });
        }
    }

    let mut iterations = 0u32;
    while hi - lo > tol {
        if iterations >= 200 {
            return Err(Error::NonConvergence { iterations });
        }
        iterations += 1;
        let mid = 0.5 * (lo + hi);
        let e = eval_series(s, mid, eval_tol)?;
        evaluations += 1;
        if e.hi < target {
            lo = mid;
        } else if e.lo > target {
            hi = mid;
        } else {
            // Straddle: localize through the slope bound, then tighten the
            // evaluation if still too wide.
            let loc_lo = (mid - (e.hi - target).max(0.0)).max(lo);
            let loc_hi = (mid + (target - e.lo).max(0.0)).min(hi);
            if loc_hi - loc_lo <= tol {
                return Ok(RootSolve {
                    interval: BoundInterval::new(loc_lo, loc_hi, status)?,
                    iterations,
                    evaluations,
                });
            }
            if eval_tol <= 1e-15 {
                return Err(Error::ToleranceTooTight {
                    tol,
                    floor: loc_hi - loc_lo,
                });
            }
            eval_tol = (eval_tol / 8.0).max(1e-15);
        }
    }

    Ok(RootSolve {
        interval: BoundInterval::new(lo, hi, status)?,
        iterations,
        evaluations,
    })
}

/// The `γ_n` enclosure from a two-sided coefficient table.
#[derive(Debug, Clone, Copy)]
pub struct GammaBounds {
    /// Root of the upper-side series: a lower bound for `γ_n`.
    pub lo: BoundInterval,
    /// Root of the lower-side series: an upper bound for `γ_n`,
    /// at most `λ/(λ+2)`.
    pub hi: BoundInterval,
}

/// Solve both `γ` side-roots. Larger coefficients give smaller roots, so the
/// upper-side root bounds `γ_n` from below and the lower-side root from
/// above; the latter never exceeds `λ/(λ+2)` because every lower coefficient
/// is at least 1.
pub fn solve_gamma_bounds(
    n: usize,
    lambda: f64,
    table: &CoefficientBounds,
    tol: f64,
) -> Result<GammaBounds> {
    if table.n() != n {
        return Err(Error::InvalidParameter(format!(
            "table is for n = {}, requested n = {n}",
            table.n()
        )));
    }
    let upper_series = SeriesSpec::from_table(table.clone(), TableSide::Upper, lambda)?;
    let lower_series = SeriesSpec::from_table(table.clone(), TableSide::Lower, lambda)?;
    let gamma_lo = solve_root(&upper_series, tol)?;
    let gamma_hi = solve_root(&lower_series, tol)?;
    let cap = (lambda / (lambda + 2.0)).next_up();
    Ok(GammaBounds {
        lo: gamma_lo,
        hi: gamma_hi.intersect_range(0.0, cap)?,
    })
}

/// Shift of the `γ` enclosure when the table is truncated two degrees
/// earlier; extending by trivial entries is a no-op because the tail policy
/// already supplies them, so only the reduction is informative.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TailSensitivity {
    pub reduced_m_max: u32,
    pub gamma_lo_shift: f64,
    pub gamma_hi_shift: f64,
}

/// The assembled theorem chain for one `(n, λ, space)`:
/// `β_n < γ_n <= K^n <= min(K_disk, γ_n / K_disk)`.
#[derive(Debug, Clone)]
pub struct BohrReport {
    pub n: usize,
    pub lambda: f64,
    pub spec: SpaceSpec,
    pub beta: BoundInterval,
    pub gamma: GammaBounds,
    /// Certified lower bound for the Bohr radius `K^n`.
    pub k_lower: f64,
    /// Upper bound `min(K_disk, γ_hi/K_disk)`; absent without a supplied
    /// `K(𝔻, X, λ)` (no formula for it exists here — it is an input).
    pub k_upper: Option<f64>,
    /// `(ln n / n)^{1 − 1/min(q,2)}` for `n >= 2`.
    pub asymptotic_ref: Option<f64>,
    pub tail_sensitivity: Option<TailSensitivity>,
    pub flags: Vec<String>,
}

/// Assemble the full report. `k_disk`, when given, must lie in `(0, 1]`.
pub fn bohr_bounds_report(
    n: usize,
    lambda: f64,
    spec: &SpaceSpec,
    table: &CoefficientBounds,
    k_disk: Option<f64>,
    tol: f64,
) -> Result<BohrReport> {
    if let Some(kd) = k_disk {
        if !(kd > 0.0 && kd <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "K_disk = {kd} outside (0, 1]"
            )));
        }
    }
    if spec.domain_dim != n {
        return Err(Error::InvalidParameter(format!(
            "spec.domain_dim = {} disagrees with n = {n}",
            spec.domain_dim
        )));
    }

    let beta = solve_root(&SeriesSpec::sqrt_n(n, lambda)?, tol)?;
    let gamma = solve_gamma_bounds(n, lambda, table, tol)?;

    // Internal ordering checks (up to enclosure widths).
    let slack = 2.0 * tol;
    if beta.hi > gamma.lo.hi + slack
        || gamma.lo.lo > gamma.hi.hi + slack
        || gamma.hi.hi > lambda / (lambda + 2.0) + slack
    {
        return Err(Error::Precondition(format!(
            "radius ordering violated: beta = {beta}, gamma_lo = {}, gamma_hi = {}",
            gamma.lo, gamma.hi
        )));
    }

    // Both β_n and the γ lower side bound K^n from below.
    let k_lower = beta.lo.max(gamma.lo.lo);
    let k_upper = k_disk.map(|kd| kd.min(gamma.hi.hi / kd));

    let asymptotic_ref = if n >= 2 {
        Some(asymptotic_reference(n, spec.domain_exponent)?)
    } else {
        None
    };

    let tail_sensitivity = if table.m_max() >= 3 {
        let reduced = table.truncated(table.m_max() - 2)?;
        let reduced_gamma = solve_gamma_bounds(n, lambda, &reduced, tol)?;
        Some(TailSensitivity {
            reduced_m_max: table.m_max() - 2,
            gamma_lo_shift: gamma.lo.lo - reduced_gamma.lo.lo,
            gamma_hi_shift: reduced_gamma.hi.hi - gamma.hi.hi,
        })
    } else {
        None
    };

    let mut flags = Vec::new();
    if lambda >= 2.0 {
        flags.push("lambda >= 2".to_string());
    }
    if !table.is_certified() {
        flags.push("table not certified".to_string());
    }

    Ok(BohrReport {
        n,
        lambda,
        spec: *spec,
        beta,
        gamma,
        k_lower,
        k_upper,
        asymptotic_ref,
        tail_sensitivity,
        flags,
    })
}

/// The comparison curve `(ln n / n)^{1 − 1/min(q,2)}` (natural logarithm).
pub fn asymptotic_reference(n: usize, q: Exponent) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidParameter(
            "asymptotic reference needs n >= 2".into(),
        ));
    }
    let qmin = match q {
        Exponent::Infinity => 2.0,
        Exponent::Finite(v) => v.min(2.0),
    };
    let exponent = 1.0 - 1.0 / qmin;
    Ok(((n as f64).ln() / n as f64).powf(exponent))
}
