//! Residues `m_n = M_{k²n−kn+k} mod k` and empirical period detection.
//!
//! Since every hook length of a complete k-ary tree is `≡ 1 (mod k)`, the
//! weighted sum `f(n)` and `M` agree modulo `k`. The binomial-product form
//! of `f(n)` therefore gives the residues without forming the enormous
//! factorials in `M`; where the budget allows, `M` itself is computed as a
//! cross-check.

use num_traits::ToPrimitive;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::exactnum::{expected_congruence, Congruence};

use super::{f_factor, m_from_l, require_arity, LRecurrence};

/// A period observed in a finite prefix. Nothing is claimed about the rest
/// of the sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PeriodCandidate {
    /// Index where the repeating part starts (0, or 1 when only the tail
    /// from `n = 1` repeats).
    pub offset: usize,
    pub period: usize,
    /// Full periods observed in the examined part.
    pub repetitions: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueReport {
    pub k: u64,
    /// `m_n` for `n = 0..=n_max`.
    pub residues: Vec<u64>,
    /// Congruence predicted for `n ≥ 1`.
    pub expected: Congruence,
    pub period: Option<PeriodCandidate>,
    /// Number of leading `n` for which `M mod k` was also computed directly.
    pub cross_checked: usize,
}

/// Smallest `p ≥ 1` with `seq[i] = seq[i+p]` throughout, provided at least
/// two full periods are present. Returns `(period, ⌊len/p⌋)`.
pub fn detect_period<T: PartialEq>(seq: &[T]) -> Option<(usize, usize)> {
    (1..=seq.len() / 2)
        .find(|&p| seq.iter().zip(&seq[p..]).all(|(a, b)| a == b))
        .map(|p| (p, seq.len() / p))
}

/// `f(n) mod k` for `n = 0..=n_max` from the binomial-product form.
///
/// With `b_i = C(ik+k−1, k−1)`, `f(n) = ∏_{i ≤ (k−1)n} b_i · ∏_{j < n} b_j`,
/// so one prefix product of the `b_i` (each formed exactly, then reduced)
/// serves every `n`.
pub fn f_residues(k: u64, n_max: u64) -> Result<Vec<u64>> {
    require_arity(k)?;
    let modulus = u128::from(k);
    let last = (k - 1) * n_max;
    let mut prefix = Vec::with_capacity(last as usize + 1);
    let mut acc: u128 = 1;
    for i in 0..=last {
        let b = (f_factor(k, i) % k).to_u64().expect("residue below k");
        acc = acc * u128::from(b) % modulus;
        prefix.push(acc);
    }
    Ok((0..=n_max)
        .map(|n| {
            let main = prefix[((k - 1) * n) as usize];
            let tail = if n == 0 { 1 } else { prefix[(n - 1) as usize] };
            (main * tail % modulus) as u64
        })
        .collect())
}

/// Residues of `M` modulo `k`, with direct cross-checks, the predicted
/// congruence, and any period visible in the computed prefix.
pub fn m_residues(k: u64, n_max: u64, budget: &Budget) -> Result<ResidueReport> {
    let residues = f_residues(k, n_max)?;
    let expected = expected_congruence(k)?;

    let mut cross_checked = 0;
    let mut rec = LRecurrence::new(k)?;
    for n in 0..=n_max {
        if n > 0 {
            match rec.advance(budget) {
                Ok(_) => {}
                Err(Error::Budget { .. }) => break,
                Err(e) => return Err(e),
            }
        }
        let m = match m_from_l(k, n, &rec.values()[n as usize], budget) {
            Ok(m) => m,
            Err(Error::Budget { .. }) => break,
            Err(e) => return Err(e),
        };
        let direct = (m % k).to_u64().expect("residue below k");
        if direct != residues[n as usize] {
            return Err(Error::verification(format!(
                "k={k}, n={n}: M mod k = {direct} but f(n) mod k = {}",
                residues[n as usize]
            )));
        }
        cross_checked += 1;
    }

    for (n, &r) in residues.iter().enumerate().skip(1) {
        if !expected.holds_u64(r) {
            return Err(Error::verification(format!(
                "k={k}, n={n}: m_n = {r} violates the predicted congruence {expected}"
            )));
        }
    }

    let period = [0usize, 1].into_iter().find_map(|offset| {
        let tail = residues.get(offset..)?;
        detect_period(tail).map(|(period, repetitions)| PeriodCandidate { offset, period, repetitions })
    });

    Ok(ResidueReport { k, residues, expected, period, cross_checked })
}
