//! Exponential generating functions `φ` (of `L`) and `ψ` (of `M`).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{binomial, factorial, leaf_count_expanded, Nat};

use super::require_arity;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesKind {
    Phi,
    Psi,
}

/// Truncated exponential generating function: `coeffs[m]` is the integer
/// multiplying `x^m / m!`, for `m = 0..=order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesCoeffs {
    pub k: u64,
    pub kind: SeriesKind,
    pub order: u64,
    pub coeffs: Vec<Nat>,
}

impl SeriesCoeffs {
    /// Exponent carrying sequence entry `n`.
    pub fn support_exponent(&self, n: u64) -> u64 {
        match self.kind {
            SeriesKind::Phi => self.k * n + 1,
            SeriesKind::Psi => leaf_count_expanded(self.k, n),
        }
    }

    pub fn is_support(&self, m: u64) -> bool {
        match self.kind {
            SeriesKind::Phi => m % self.k == 1 % self.k && m >= 1,
            SeriesKind::Psi => m >= self.k && (m - self.k).is_multiple_of(self.k * self.k - self.k),
        }
    }

    /// Coefficients at the support exponents, i.e. the sequence entries.
    pub fn support_values(&self) -> Vec<Nat> {
        (0..)
            .map(|n| self.support_exponent(n))
            .take_while(|&m| m <= self.order)
            .map(|m| self.coeffs[m as usize].clone())
            .collect()
    }

    fn check_support(&self) -> Result<()> {
        for (m, c) in self.coeffs.iter().enumerate() {
            if !self.is_support(m as u64) && !c.is_zero() {
                return Err(Error::invariant(format!(
                    "{:?} series for k={} has non-zero coefficient at off-support exponent {m}",
                    self.kind, self.k
                )));
            }
        }
        Ok(())
    }
}

/// Solves `φ' = 1 + φ^k`, `φ(0) = 0` coefficient by coefficient up to
/// `x^order`.
///
/// In the exponential convention, the coefficient of `x^m/m!` in a product
/// `A·B` is `Σ C(m, i) a_i b_{m−i}`. Keeping every power `φ^j`, `j ≤ k`,
/// current up to degree `m` gives `a_{m+1} = [m = 0] + (φ^k)_m`.
pub fn phi_coefficients(k: u64, order: u64) -> Result<SeriesCoeffs> {
    require_arity(k)?;
    let len = order as usize + 1;
    let k = k as usize;
    let mut a = vec![Nat::zero(); len];
    // powers[j - 1][m] = coefficient of x^m/m! in φ^j
    let mut powers: Vec<Vec<Nat>> = vec![vec![Nat::zero(); len]; k];

    for m in 0..len {
        if m == 1 {
            a[1] = Nat::one() + &powers[k - 1][0];
        } else if m > 1 {
            a[m] = powers[k - 1][m - 1].clone();
        }
        powers[0][m] = a[m].clone();
        for j in 1..k {
            let mut c = Nat::zero();
            for i in 1..=m {
                if a[i].is_zero() || powers[j - 1][m - i].is_zero() {
                    continue;
                }
                c += binomial(m as u64, i as u64) * &a[i] * &powers[j - 1][m - i];
            }
            powers[j][m] = c;
        }
    }

    let series = SeriesCoeffs { k: k as u64, kind: SeriesKind::Phi, order, coeffs: a };
    series.check_support()?;
    Ok(series)
}

fn to_rational(n: &Nat) -> BigRational {
    BigRational::from_integer(BigInt::from(n.clone()))
}

/// Ordinary (not exponential) coefficients of `ψ(x) = x·φ(x^{k−1}/k!)`.
fn psi_ordinary(k: u64, order: u64) -> Result<Vec<BigRational>> {
    let len = order as usize + 1;
    let mut out = vec![BigRational::zero(); len];
    if order < 1 {
        return Ok(out);
    }
    // x·y^j with y = x^{k−1}/k! lands on exponent (k−1)j + 1.
    let phi_order = (order - 1) / (k - 1);
    let phi = phi_coefficients(k, phi_order)?;
    let kk = to_rational(&factorial(k));
    for (j, a) in phi.coeffs.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let j = j as u64;
        let exponent = ((k - 1) * j + 1) as usize;
        let ordinary = to_rational(a) / to_rational(&factorial(j));
        out[exponent] = ordinary / num_traits::pow(kk.clone(), j as usize);
    }
    Ok(out)
}

fn truncated_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let len = a.len();
    let mut out = vec![BigRational::zero(); len];
    for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
        for (j, y) in b.iter().take(len - i).enumerate().filter(|(_, y)| !y.is_zero()) {
            out[i + j] += x * y;
        }
    }
    out
}

/// Checks `x ψ' − ψ = ((k−1)/k!) (x^k + ψ^k)` coefficient-wise up to
/// `x^order`, with `ψ` given by ordinary coefficients.
fn check_corollary_ode(k: u64, psi: &[BigRational]) -> Result<()> {
    let len = psi.len();
    let mut psi_pow = psi.to_vec();
    for _ in 1..k {
        psi_pow = truncated_mul(&psi_pow, psi);
    }
    let scale = BigRational::new(BigInt::from(k - 1), BigInt::from(factorial(k)));
    for m in 0..len {
        let lhs = &psi[m] * BigRational::from_integer(BigInt::from(m as i64 - 1));
        let mut bracket = psi_pow[m].clone();
        if m as u64 == k {
            bracket += BigRational::one();
        }
        let rhs = &scale * bracket;
        if lhs != rhs {
            return Err(Error::verification(format!(
                "ψ ODE fails at x^{m} for k={k}: left {lhs}, right {rhs}"
            )));
        }
    }
    Ok(())
}

/// Checks the first-order ODE satisfied by `ψ` up to `x^order`.
pub fn verify_corollary_ode(k: u64, order: u64) -> Result<()> {
    require_arity(k)?;
    check_corollary_ode(k, &psi_ordinary(k, order)?)
}

/// `ψ(x) = x·φ(x^{k−1}/k!)` up to `x^order`, substituted in exact rational
/// arithmetic. Every exponential coefficient must come out integral, and the
/// ODE for `ψ` is checked along the way.
pub fn psi_coefficients(k: u64, order: u64) -> Result<SeriesCoeffs> {
    require_arity(k)?;
    let ordinary = psi_ordinary(k, order)?;
    check_corollary_ode(k, &ordinary)?;

    let coeffs = ordinary
        .iter()
        .enumerate()
        .map(|(m, c)| {
            let egf = c * to_rational(&factorial(m as u64));
            if !egf.is_integer() || egf.is_negative() {
                return Err(Error::verification(format!(
                    "coefficient of x^{m}/{m}! in ψ is {egf}, not a non-negative integer (k={k})"
                )));
            }
            Ok(egf.to_integer().to_biguint().expect("checked non-negative"))
        })
        .collect::<Result<Vec<_>>>()?;

    let series = SeriesCoeffs { k, kind: SeriesKind::Psi, order, coeffs };
    series.check_support()?;
    Ok(series)
}
