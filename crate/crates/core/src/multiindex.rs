//! Multi-index enumeration, exact counting, and monomial evaluation.
//!
//! `Λ(m,n)` is the set of exponent tuples `α ∈ ℕ₀^n` with `|α| = m`; its
//! cardinality is `N_m(n) = C(n+m−1, m)`. Counting is exact in `u128` with
//! explicit overflow errors (never wrapping) because the radius solvers take
//! square roots of these counts deep into series tails.

use num_complex::Complex64;

use crate::{Error, Result};

/// Enumeration guard: `enumerate_indices` refuses sets larger than this.
const ENUMERATION_BUDGET: u128 = 50_000_000;

/// An exponent tuple `α ∈ ℕ₀^n`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidParameter(
                "multi-index must have at least one entry".into(),
            ));
        }
        Ok(Self(entries))
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total degree `|α| = Σ α_i`.
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `m·e_j`: the corner index with `m` at position `j` and zeros elsewhere.
    pub fn corner(n: usize, j: usize, m: u32) -> Result<Self> {
        if j >= n {
            return Err(Error::InvalidParameter(format!(
                "corner position {j} out of range for n = {n}"
            )));
        }
        let mut entries = vec![0u32; n];
        entries[j] = m;
        Self::new(entries)
    }
}

impl std::fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// `N_m(n) = C(n+m−1, m)`, exactly.
///
/// Errors on `u128` overflow rather than wrapping; the incremental
/// numerator/denominator scheme keeps every intermediate value equal to a
/// binomial coefficient, so overflow is reported only when the result (or a
/// prefix binomial) genuinely exceeds the width.
pub fn count_multi_indices(m: u32, n: u32) -> Result<u128> {
    if n < 1 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    let top = u64::from(n) + u64::from(m) - 1;
    binomial(top, u64::from(m))
}

/// `C(top, k)` in exact u128 arithmetic with overflow detection.
pub fn binomial(top: u64, k: u64) -> Result<u128> {
    if k > top {
        return Ok(0);
    }
    let k = k.min(top - k);
    let mut result: u128 = 1;
    for i in 1..=k {
        // result = C(top - k + i, i) stays integral at every step.
        result = result
            .checked_mul(u128::from(top - k + i))
            .ok_or(Error::CountOverflow { top, k })?;
        result /= u128::from(i);
    }
    Ok(result)
}

/// All of `Λ(m,n)` in descending lexicographic order.
///
/// Descending lexicographic means `(m,0,…,0)` first and `(0,…,0,m)` last;
/// the fixed order makes coefficient vectors reproducible and diffable.
pub fn enumerate_indices(m: u32, n: u32) -> Result<Vec<MultiIndex>> {
    let count = count_multi_indices(m, n)?;
    if count > ENUMERATION_BUDGET {
        return Err(Error::EnumerationTooLarge {
            count,
            budget: ENUMERATION_BUDGET,
        });
    }
    let n = n as usize;
    let mut out = Vec::with_capacity(count as usize);
    let mut current = vec![0u32; n];
    fill_desc(m, 0, &mut current, &mut out);
    Ok(out)
}

fn fill_desc(remaining: u32, pos: usize, current: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
    if pos + 1 == current.len() {
        current[pos] = remaining;
        out.push(MultiIndex(current.clone()));
        return;
    }
    for k in (0..=remaining).rev() {
        current[pos] = k;
        fill_desc(remaining - k, pos + 1, current, out);
    }
    current[pos] = 0;
}

/// `z^α = Π z_i^{α_i}`; the empty product is 1.
///
/// Panics on a length mismatch (a programming error, not a data error).
pub fn monomial_eval(alpha: &MultiIndex, z: &[Complex64]) -> Complex64 {
    assert_eq!(
        alpha.len(),
        z.len(),
        "monomial_eval: index length {} != point length {}",
        alpha.len(),
        z.len()
    );
    let mut acc = Complex64::new(1.0, 0.0);
    for (&e, &zi) in alpha.entries().iter().zip(z) {
        if e > 0 {
            acc *= zi.powu(e);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn counts_match_closed_forms() {
        assert_eq!(count_multi_indices(2, 2).unwrap(), 3);
        assert_eq!(count_multi_indices(0, 7).unwrap(), 1);
        assert_eq!(count_multi_indices(3, 3).unwrap(), 10);
        assert_eq!(count_multi_indices(5, 4).unwrap(), 56);
        assert_eq!(count_multi_indices(1, 1).unwrap(), 1);
    }

    #[test]
    fn count_overflow_is_an_error() {
        // C(2^63, 2) > u128::MAX
        let err = binomial(u64::MAX, u64::MAX / 2).unwrap_err();
        assert!(matches!(err, Error::CountOverflow { .. }));
    }

    #[test]
    fn large_counts_stay_exact() {
        // N_30(30) = C(59, 30), comfortably past 10^16.
        assert_eq!(count_multi_indices(30, 30).unwrap(), 59_132_290_782_430_712);
    }

    #[test]
    fn enumeration_order_small_cases() {
        let idx = enumerate_indices(1, 2).unwrap();
        let entries: Vec<_> = idx.iter().map(|a| a.entries().to_vec()).collect();
        assert_eq!(entries, vec![vec![1, 0], vec![0, 1]]);

        let idx = enumerate_indices(2, 2).unwrap();
        let entries: Vec<_> = idx.iter().map(|a| a.entries().to_vec()).collect();
        assert_eq!(entries, vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
    }

    #[test]
    fn enumeration_is_complete_and_duplicate_free() {
        let idx = enumerate_indices(3, 3).unwrap();
        assert_eq!(idx.len(), 10);
        let set: std::collections::BTreeSet<_> = idx.iter().cloned().collect();
        assert_eq!(set.len(), idx.len());
        for a in &idx {
            assert_eq!(a.degree(), 3);
            assert_eq!(a.len(), 3);
        }
        // Descending lexicographic order.
        for pair in idx.windows(2) {
            assert!(pair[0] > pair[1]);
        }
    }

    #[test]
    fn enumeration_length_matches_count_grid() {
        for m in 1..=8u32 {
            for n in 1..=8u32 {
                let idx = enumerate_indices(m, n).unwrap();
                assert_eq!(idx.len() as u128, count_multi_indices(m, n).unwrap());
            }
        }
    }

    #[test]
    fn pascal_identity() {
        for m in 1..=12u32 {
            for n in 2..=12u32 {
                let lhs = count_multi_indices(m, n).unwrap();
                let rhs =
                    count_multi_indices(m, n - 1).unwrap() + count_multi_indices(m - 1, n).unwrap();
                assert_eq!(lhs, rhs, "Pascal identity failed at m={m}, n={n}");
            }
        }
    }

    #[test]
    fn monomial_eval_examples() {
        let zero = MultiIndex::new(vec![0, 0, 0]).unwrap();
        let z = [
            Complex64::new(2.0, 1.0),
            Complex64::new(-1.0, 0.5),
            Complex64::new(0.0, 3.0),
        ];
        assert_eq!(monomial_eval(&zero, &z), Complex64::new(1.0, 0.0));

        // (i)^2 * 2 = -2
        let alpha = MultiIndex::new(vec![2, 1]).unwrap();
        let z = [Complex64::new(0.0, 1.0), Complex64::new(2.0, 0.0)];
        let v = monomial_eval(&alpha, &z);
        assert!((v - Complex64::new(-2.0, 0.0)).norm() < 1e-14);
    }

    proptest! {
        #[test]
        fn monomial_modulus_is_product_of_moduli(
            exps in proptest::collection::vec(0u32..5, 1..5),
            seeds in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 5),
        ) {
            let n = exps.len();
            let z: Vec<Complex64> = seeds[..n]
                .iter()
                .map(|&(re, im)| Complex64::new(re, im))
                .collect();
            let alpha = MultiIndex::new(exps.clone()).unwrap();
            let lhs = monomial_eval(&alpha, &z).norm();
            let rhs: f64 = z
                .iter()
                .zip(&exps)
                .map(|(zi, &e)| zi.norm().powi(e as i32))
                .product();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1.0));
        }
    }
}
