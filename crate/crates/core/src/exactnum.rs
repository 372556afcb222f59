//! Exact combinatorial arithmetic and the elementary number theory used by
//! the divisibility arguments.

use std::fmt;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision non-negative integer.
pub type Nat = BigUint;

/// Factorials up to this argument are kept in the shared table. Beyond it,
/// `n!` is assembled from the last cached entry and a product tree.
const MEMO_LIMIT: u64 = 20_000;

static FACTORIALS: OnceLock<RwLock<Vec<Nat>>> = OnceLock::new();

fn factorial_table() -> &'static RwLock<Vec<Nat>> {
    FACTORIALS.get_or_init(|| RwLock::new(vec![Nat::one()]))
}

fn memo_factorial(n: u64) -> Nat {
    debug_assert!(n <= MEMO_LIMIT);
    let idx = n as usize;
    {
        let table = factorial_table().read().expect("factorial table poisoned");
        if let Some(v) = table.get(idx) {
            return v.clone();
        }
    }
    let mut table = factorial_table().write().expect("factorial table poisoned");
    while table.len() <= idx {
        let next = table.last().expect("table starts non-empty") * Nat::from(table.len());
        table.push(next);
    }
    table[idx].clone()
}

/// `n!`.
pub fn factorial(n: u64) -> Nat {
    if n <= MEMO_LIMIT {
        memo_factorial(n)
    } else {
        memo_factorial(MEMO_LIMIT) * range_product(MEMO_LIMIT + 1, n)
    }
}

/// Product `lo · (lo+1) ··· hi`; the empty product (`lo > hi`) is 1.
pub fn range_product(lo: u64, hi: u64) -> Nat {
    if lo > hi {
        return Nat::one();
    }
    if hi - lo < 32 {
        let mut acc = Nat::from(lo);
        for i in lo + 1..=hi {
            acc *= i;
        }
        return acc;
    }
    let mid = lo + (hi - lo) / 2;
    range_product(lo, mid) * range_product(mid + 1, hi)
}

/// `n!!` for `n ≥ -1`, with `(-1)!! = 0!! = 1`.
pub fn double_factorial(n: i64) -> Result<Nat> {
    if n < -1 {
        return Err(Error::invalid(format!("double factorial needs n >= -1, got {n}")));
    }
    let mut acc = Nat::one();
    let mut m = n;
    while m > 1 {
        acc *= m as u64;
        m -= 2;
    }
    Ok(acc)
}

/// `C(n, r)`, zero when `r > n`.
pub fn binomial(n: u64, r: u64) -> Nat {
    if r > n {
        return Nat::zero();
    }
    let r = r.min(n - r);
    exact_div(range_product(n - r + 1, n), &factorial(r))
        .expect("falling factorial is divisible by r!")
}

/// `n! / ∏ parts_i!`, requiring `Σ parts = n`.
pub fn multinomial(n: u64, parts: &[u64]) -> Result<Nat> {
    let total: u128 = parts.iter().map(|&p| u128::from(p)).sum();
    if total != u128::from(n) {
        return Err(Error::invalid(format!(
            "multinomial parts sum to {total}, expected {n}"
        )));
    }
    let denom = parts
        .iter()
        .filter(|&&p| p > 1)
        .fold(Nat::one(), |acc, &p| acc * factorial(p));
    exact_div(factorial(n), &denom)
        .map_err(|_| Error::invariant("multinomial coefficient is not integral"))
}

/// Exact division; `Err` carries the remainder when it is non-zero.
pub fn exact_div(num: Nat, den: &Nat) -> std::result::Result<Nat, Nat> {
    let (q, r) = num.div_rem(den);
    if r.is_zero() {
        Ok(q)
    } else {
        Err(r)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Trial-division factorization, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Sum of the base-`base` digits of `n`.
pub fn digit_sum(mut n: u64, base: u64) -> u64 {
    assert!(base >= 2, "digit_sum base must be at least 2, got {base}");
    let mut s = 0;
    while n > 0 {
        s += n % base;
        n /= base;
    }
    s
}

/// Exponent of the prime `p` in `n!`.
///
/// Both closed forms are evaluated: the floor sum `Σ ⌊n/pⁱ⌋` and the digit
/// form `(n − β(n)) / (p − 1)`. They must agree.
pub fn legendre_valuation(n: u64, p: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::invalid(format!("{p} is not prime")));
    }
    let mut floor_sum = 0;
    let mut q = n / p;
    while q > 0 {
        floor_sum += q;
        q /= p;
    }
    let beta = digit_sum(n, p);
    let digit_form = (n - beta) / (p - 1);
    if !(n - beta).is_multiple_of(p - 1) || digit_form != floor_sum {
        return Err(Error::verification(format!(
            "Legendre forms disagree for n={n}, p={p}: floor sum {floor_sum}, digit form {digit_form}"
        )));
    }
    Ok(floor_sum)
}

/// Which congruence case an arity `k` falls into.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KClassification {
    Prime { p: u64 },
    PrimePower { p: u64, t: u32 },
    MultiplePrimeFactors { k: u64 },
}

impl KClassification {
    pub fn k(&self) -> u64 {
        match *self {
            KClassification::Prime { p } => p,
            KClassification::PrimePower { p, t } => p.pow(t),
            KClassification::MultiplePrimeFactors { k } => k,
        }
    }
}

impl fmt::Display for KClassification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            KClassification::Prime { p } => write!(f, "prime {p}"),
            KClassification::PrimePower { p, t } => write!(f, "prime power {p}^{t}"),
            KClassification::MultiplePrimeFactors { k } => write!(f, "{k} has several prime factors"),
        }
    }
}

pub fn classify_k(k: u64) -> Result<KClassification> {
    if k < 2 {
        return Err(Error::invalid(format!("k must be at least 2, got {k}")));
    }
    let factors = factorize(k);
    Ok(match factors.as_slice() {
        [(p, 1)] => KClassification::Prime { p: *p },
        [(p, t)] => KClassification::PrimePower { p: *p, t: *t },
        _ => KClassification::MultiplePrimeFactors { k },
    })
}

/// `value ≡ residue (mod modulus)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Congruence {
    pub modulus: u64,
    pub residue: u64,
}

impl Congruence {
    pub fn holds(&self, value: &Nat) -> bool {
        (value % self.modulus) == Nat::from(self.residue)
    }

    pub fn holds_u64(&self, value: u64) -> bool {
        value % self.modulus == self.residue
    }
}

impl fmt::Display for Congruence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "≡ {} (mod {})", self.residue, self.modulus)
    }
}

/// Congruence the generalized Genocchi numbers `M` (n ≥ 1) satisfy for
/// arity `k`.
pub fn expected_congruence(k: u64) -> Result<Congruence> {
    Ok(match classify_k(k)? {
        KClassification::Prime { p } => Congruence { modulus: p, residue: 1 },
        KClassification::PrimePower { p, .. } => Congruence { modulus: p * p, residue: 1 },
        KClassification::MultiplePrimeFactors { k } => Congruence { modulus: k, residue: 0 },
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductCongruenceReport {
    pub p: u64,
    pub k_max: u64,
    /// First `k` for which the product fails, if any.
    pub first_failure: Option<u64>,
}

impl ProductCongruenceReport {
    pub fn passed(&self) -> bool {
        self.first_failure.is_none()
    }
}

/// Checks `(pk+1)(pk+2)···(pk+p−1) ≡ (p−1)! (mod p²)` for `k = 0..=k_max`.
pub fn verify_lemma_p2(p: u64, k_max: u64) -> Result<ProductCongruenceReport> {
    if !is_prime(p) {
        return Err(Error::invalid(format!("{p} is not prime")));
    }
    if p < 3 {
        return Err(Error::invalid("the mod p² product congruence needs p >= 3"));
    }
    let p2 = Nat::from(p * p);
    let target = factorial(p - 1) % &p2;
    let first_failure = (0..=k_max).find(|&k| {
        let base = p * k;
        range_product(base + 1, base + p - 1) % &p2 != target
    });
    Ok(ProductCongruenceReport { p, k_max, first_failure })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffIdentityReport {
    pub k: u64,
    pub n: u64,
    /// `(k²n−kn+k)! / ((kn+1)! ((k−1)!)^{kn+1})`, `None` if not integral.
    pub factorial_form: Option<Nat>,
    /// `(k²n−kn+k) · ∏_{i=1}^{kn+1} C(i(k−1)−1, k−2)`.
    pub product_form: Nat,
}

impl CoeffIdentityReport {
    pub fn passed(&self) -> bool {
        self.factorial_form.as_ref() == Some(&self.product_form)
    }
}

/// Checks that `(k−1)!^{kn+1}` divides `(k²n−kn+k)!/(kn+1)!` with the
/// binomial-product quotient.
pub fn verify_coeff_identity(k: u64, n: u64) -> Result<CoeffIdentityReport> {
    if k < 2 || n < 1 {
        return Err(Error::invalid(format!("need k >= 2 and n >= 1, got k={k}, n={n}")));
    }
    let big = leaf_count_expanded(k, n);
    let vertices = k * n + 1;
    let denom = factorial(vertices) * factorial(k - 1).pow(vertices as u32);
    let factorial_form = exact_div(factorial(big), &denom).ok();
    let product_form = (1..=vertices).fold(Nat::from(big), |acc, i| {
        acc * binomial(i * (k - 1) - 1, k - 2)
    });
    Ok(CoeffIdentityReport { k, n, factorial_form, product_form })
}

/// `k²n − kn + k`: the number of leaves after expanding every leaf of an
/// n-internal-node complete k-ary tree, and the index of `M`.
pub fn leaf_count_expanded(k: u64, n: u64) -> u64 {
    k * k * n - k * n + k
}

/// Compositions of `total` into exactly `parts` non-negative parts, in
/// lexicographic order from `(0, …, 0, total)` to `(total, 0, …, 0)`.
#[derive(Debug, Clone)]
pub struct Compositions {
    current: Option<Vec<u64>>,
}

impl Compositions {
    pub fn new(total: u64, parts: usize) -> Self {
        let current = (parts > 0).then(|| {
            let mut v = vec![0; parts];
            v[parts - 1] = total;
            v
        });
        let current = match current {
            None if total == 0 => Some(Vec::new()),
            other => other,
        };
        Compositions { current }
    }

    /// `C(total + parts − 1, parts − 1)`.
    pub fn count(total: u64, parts: usize) -> Nat {
        match parts {
            0 => Nat::from(u8::from(total == 0)),
            _ => binomial(total + parts as u64 - 1, parts as u64 - 1),
        }
    }
}

impl Iterator for Compositions {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        let out = self.current.take()?;
        // Move one unit from the last non-zero part (other than the first)
        // into its left neighbour, pushing the rest of it to the end.
        if let Some(r) = (1..out.len()).rev().find(|&i| out[i] > 0) {
            let mut next = out.clone();
            let carried = next[r];
            next[r] = 0;
            next[r - 1] += 1;
            let last = next.len() - 1;
            next[last] += carried - 1;
            self.current = Some(next);
        }
        Some(out)
    }
}
