//! Integer sequences attached to complete k-ary trees.
//!
//! Index conventions: entry `n` of each sequence is
//!
//! | sequence | entry `n` |
//! |----------|-----------|
//! | tangent  | `T_{2n+1}` |
//! | Genocchi | `G_{2n+2}` |
//! | `L`      | `L_{kn+1}`, increasing labelled complete k-ary trees |
//! | `M`      | `M_{k²n−kn+k}` |
//! | Fuss-Catalan | `C_k(n)` |
//! | weighted | `f(n)` |

mod gf;
mod residues;

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::exactnum::{
    binomial, double_factorial, exact_div, factorial, leaf_count_expanded, range_product, Compositions, Nat,
};

pub use gf::{phi_coefficients, psi_coefficients, verify_corollary_ode, SeriesCoeffs, SeriesKind};
pub use residues::{detect_period, f_residues, m_residues, PeriodCandidate, ResidueReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SeqName {
    Tangent,
    Genocchi,
    L,
    M,
    FussCatalan,
    WeightedF,
}

impl fmt::Display for SeqName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SeqName::Tangent => "T",
            SeqName::Genocchi => "G",
            SeqName::L => "L",
            SeqName::M => "M",
            SeqName::FussCatalan => "FussCatalan",
            SeqName::WeightedF => "f",
        })
    }
}

/// A named sequence with its values for `n = 0, 1, …`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeqRecord {
    pub name: SeqName,
    pub k: u64,
    pub values: Vec<Nat>,
}

impl SeqRecord {
    /// Subscript carried by entry `i` in the usual notation, e.g. `2i+1`
    /// for tangent numbers. Fuss-Catalan and `f` are indexed by `i` itself.
    pub fn index_of(&self, i: u64) -> u64 {
        let k = self.k;
        match self.name {
            SeqName::Tangent => 2 * i + 1,
            SeqName::Genocchi => 2 * i + 2,
            SeqName::L => k * i + 1,
            SeqName::M => leaf_count_expanded(k, i),
            SeqName::FussCatalan | SeqName::WeightedF => i,
        }
    }

    /// Column heading, e.g. `M_{6n+3}` for `k = 3`.
    pub fn column_label(&self) -> String {
        let k = self.k;
        match self.name {
            SeqName::Tangent => "T_{2n+1}".to_string(),
            SeqName::Genocchi => "G_{2n+2}".to_string(),
            SeqName::L => format!("L_{{{k}n+1}}"),
            SeqName::M => format!("M_{{{}n+{k}}}", k * k - k),
            SeqName::FussCatalan => format!("C_{k}(n)"),
            SeqName::WeightedF => "f(n)".to_string(),
        }
    }
}

fn require_arity(k: u64) -> Result<()> {
    if k < 2 {
        Err(Error::invalid(format!("k must be at least 2, got {k}")))
    } else {
        Ok(())
    }
}

/// `T_{2n+1}` for `n = 0..=n_max`, read off the `k = 2` solution of
/// `φ' = 1 + φ²`.
pub fn tangent_numbers(n_max: u64) -> SeqRecord {
    let phi = phi_coefficients(2, 2 * n_max + 1).expect("k = 2 is a valid arity");
    SeqRecord { name: SeqName::Tangent, k: 2, values: phi.support_values() }
}

/// `G_{2n+2} = (n+1) T_{2n+1} / 2^{2n}`; the division must be exact.
pub fn genocchi_numbers(n_max: u64) -> Result<SeqRecord> {
    let tangents = tangent_numbers(n_max);
    let values = tangents
        .values
        .into_iter()
        .enumerate()
        .map(|(n, t)| {
            let n = n as u64;
            exact_div(Nat::from(n + 1) * t, &(Nat::one() << (2 * n))).map_err(|_| {
                Error::invariant(format!("2^{} does not divide (n+1)·T_{} at n={n}", 2 * n, 2 * n + 1))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SeqRecord { name: SeqName::Genocchi, k: 2, values })
}

/// Incremental evaluation of
/// `L_{kn+1} = Σ_{n₁+⋯+n_k = n−1} (kn; kn₁+1, …, kn_k+1) ∏ L_{kn_i+1}`,
/// visiting compositions in lexicographic order.
#[derive(Debug, Clone)]
pub struct LRecurrence {
    k: u64,
    values: Vec<Nat>,
    // (km+1)! for every computed m.
    part_factorials: Vec<Nat>,
}

impl LRecurrence {
    pub fn new(k: u64) -> Result<Self> {
        require_arity(k)?;
        Ok(LRecurrence { k, values: vec![Nat::one()], part_factorials: vec![Nat::one()] })
    }

    pub fn values(&self) -> &[Nat] {
        &self.values
    }

    /// Computes the next entry, subject to the composition and factorial
    /// budgets.
    pub fn advance(&mut self, budget: &Budget) -> Result<&Nat> {
        let k = self.k;
        let n = self.values.len() as u64;
        let parts = k as usize;
        budget.check_compositions(
            || format!("L recurrence for k={k}, n={n}"),
            u128::try_from(&Compositions::count(n - 1, parts)).unwrap_or(u128::MAX),
        )?;
        budget.check_factorial(|| format!("L recurrence for k={k}, n={n}"), u128::from(k * n))?;

        let top = factorial(k * n);
        let mut sum = Nat::zero();
        for comp in Compositions::new(n - 1, parts) {
            let mut weight = Nat::one();
            let mut denom = Nat::one();
            for &m in comp.iter().filter(|&&m| m > 0) {
                weight *= &self.values[m as usize];
                denom *= &self.part_factorials[m as usize];
            }
            let coeff = exact_div(top.clone(), &denom)
                .map_err(|_| Error::invariant("multinomial in the L recurrence is not integral"))?;
            sum += coeff * weight;
        }
        self.values.push(sum);
        self.part_factorials.push(factorial(k * n + 1));
        Ok(self.values.last().expect("just pushed"))
    }
}

/// `L_{kn+1}` for `n = 0..=n_max` by the multinomial recurrence.
pub fn l_numbers(k: u64, n_max: u64, budget: &Budget) -> Result<SeqRecord> {
    let mut rec = LRecurrence::new(k)?;
    for _ in 0..n_max {
        rec.advance(budget)?;
    }
    Ok(SeqRecord { name: SeqName::L, k, values: rec.values })
}

/// `M_{k²n−kn+k} = (k²n−kn+k)! L_{kn+1} / ((k!)^{kn+1} (kn+1)!)` for a single
/// `n`, given `L_{kn+1}`.
pub fn m_from_l(k: u64, n: u64, l: &Nat, budget: &Budget) -> Result<Nat> {
    let top = leaf_count_expanded(k, n);
    budget.check_factorial(|| format!("M for k={k}, n={n}"), u128::from(top))?;
    let vertices = k * n + 1;
    // (k²n−kn+k)! / (kn+1)! as a single range product.
    let numerator = range_product(vertices + 1, top) * l;
    let divisor = factorial(k).pow(vertices as u32);
    exact_div(numerator, &divisor).map_err(|_| {
        Error::verification(format!(
            "(k!)^(kn+1)(kn+1)! does not divide (k²n−kn+k)!·L_(kn+1) for k={k}, n={n}"
        ))
    })
}

/// `M_{k²n−kn+k}` for `n = 0..=n_max`; each quotient must be exact.
pub fn m_numbers(k: u64, n_max: u64, budget: &Budget) -> Result<SeqRecord> {
    let l = l_numbers(k, n_max, budget)?;
    let values = l
        .values
        .iter()
        .enumerate()
        .map(|(n, l)| m_from_l(k, n as u64, l, budget))
        .collect::<Result<Vec<_>>>()?;
    Ok(SeqRecord { name: SeqName::M, k, values })
}

/// `C_k(n) = (kn)! / (n! (kn−n+1)!)`, the number of complete k-ary shapes
/// with `n` internal vertices.
pub fn fuss_catalan(k: u64, n: u64) -> Nat {
    assert!(k >= 2, "k must be at least 2, got {k}");
    exact_div(factorial(k * n), &(factorial(n) * factorial(k * n - n + 1)))
        .expect("Fuss-Catalan quotient is integral")
}

pub fn fuss_catalan_numbers(k: u64, n_max: u64) -> Result<SeqRecord> {
    require_arity(k)?;
    let values = (0..=n_max).map(|n| fuss_catalan(k, n)).collect();
    Ok(SeqRecord { name: SeqName::FussCatalan, k, values })
}

/// `C(ik+k−1, k−1)`: the factor contributed by index `i` in the product
/// form of `f(n)`.
pub(crate) fn f_factor(k: u64, i: u64) -> Nat {
    binomial(i * k + k - 1, k - 1)
}

/// The weighted sum `f(n) = Σ H(class) M(class)` in closed form.
///
/// Evaluated three ways which must agree: the factorial quotient
/// `(k²n−kn+k)! (kn)! / ((k!)^{kn+1} (kn−n+1)! n!)`, the binomial product
/// `∏_{i=0}^{kn−n} C(ik+k−1, k−1) · ∏_{j=0}^{n−1} C(jk+k−1, k−1)`, and for
/// `k = 2` the double factorials `(2n−1)!! (2n+1)!!`.
pub fn f_closed_form(k: u64, n: u64) -> Result<Nat> {
    require_arity(k)?;
    let kk = factorial(k);
    let numerator = factorial(leaf_count_expanded(k, n)) * factorial(k * n);
    let denominator = kk.pow((k * n + 1) as u32) * factorial(k * n - n + 1) * factorial(n);
    let (factorial_form, rem) = numerator.div_rem(&denominator);
    if !rem.is_zero() {
        return Err(Error::verification(format!(
            "factorial form of f(n) is not integral for k={k}, n={n}"
        )));
    }

    let product_form = (0..=k * n - n).map(|i| f_factor(k, i)).product::<Nat>()
        * (0..n).map(|j| f_factor(k, j)).product::<Nat>();
    if factorial_form != product_form {
        return Err(Error::verification(format!(
            "f(n) forms disagree for k={k}, n={n}: factorial {factorial_form}, product {product_form}"
        )));
    }

    if k == 2 {
        let n = n as i64;
        let odd = double_factorial(2 * n - 1)? * double_factorial(2 * n + 1)?;
        if odd != product_form {
            return Err(Error::verification(format!(
                "f({n}) = {product_form} differs from (2n−1)!!(2n+1)!! = {odd}"
            )));
        }
    }
    Ok(product_form)
}

pub fn f_numbers(k: u64, n_max: u64) -> Result<SeqRecord> {
    let values = (0..=n_max).map(|n| f_closed_form(k, n)).collect::<Result<Vec<_>>>()?;
    Ok(SeqRecord { name: SeqName::WeightedF, k, values })
}

/// Counts permutations `a₁ < a₂ > a₃ < ⋯` of `{1, …, len}` by exhaustive
/// backtracking.
pub fn count_alternating_permutations(len: usize) -> u64 {
    fn extend(prefix_last: Option<usize>, pos: usize, len: usize, used: &mut [bool]) -> u64 {
        if pos == len {
            return 1;
        }
        let mut total = 0;
        for v in 0..len {
            if used[v] {
                continue;
            }
            let ok = match prefix_last {
                None => true,
                // pos is 0-based; an ascent is required into odd positions.
                Some(prev) if pos % 2 == 1 => v > prev,
                Some(prev) => v < prev,
            };
            if ok {
                used[v] = true;
                total += extend(Some(v), pos + 1, len, used);
                used[v] = false;
            }
        }
        total
    }
    extend(None, 0, len, &mut vec![false; len])
}
