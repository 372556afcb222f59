//! Name-keyed registries of sequence generators and verification checks.
//!
//! The command-line front end selects a [`SequenceSource`] by its `--kind`
//! name and runs every [`Check`] registered under the requested [`Scope`].
//! Additional generators or checks can be registered at runtime.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::exactnum::{
    double_factorial, expected_congruence, leaf_count_expanded, legendre_valuation, verify_coeff_identity,
    verify_lemma_p2, Nat,
};
use crate::series::{self, SeqRecord};
use crate::trees;

/// Produces one sequence for given `k` and `n_max`.
pub trait SequenceSource: Send + Sync {
    fn name(&self) -> &'static str;
    /// Whether the sequence depends on the arity `k` (tangent and Genocchi
    /// numbers are fixed at `k = 2`).
    fn uses_k(&self) -> bool {
        true
    }
    fn generate(&self, k: u64, n_max: u64, budget: &Budget) -> Result<SeqRecord>;
}

struct Tangent;
struct Genocchi;
struct LNumbers;
struct MNumbers;
struct FussCatalan;
struct WeightedF;

impl SequenceSource for Tangent {
    fn name(&self) -> &'static str {
        "tangent"
    }
    fn uses_k(&self) -> bool {
        false
    }
    fn generate(&self, _k: u64, n_max: u64, _budget: &Budget) -> Result<SeqRecord> {
        Ok(series::tangent_numbers(n_max))
    }
}

impl SequenceSource for Genocchi {
    fn name(&self) -> &'static str {
        "genocchi"
    }
    fn uses_k(&self) -> bool {
        false
    }
    fn generate(&self, _k: u64, n_max: u64, _budget: &Budget) -> Result<SeqRecord> {
        series::genocchi_numbers(n_max)
    }
}

impl SequenceSource for LNumbers {
    fn name(&self) -> &'static str {
        "l"
    }
    fn generate(&self, k: u64, n_max: u64, budget: &Budget) -> Result<SeqRecord> {
        series::l_numbers(k, n_max, budget)
    }
}

impl SequenceSource for MNumbers {
    fn name(&self) -> &'static str {
        "m"
    }
    fn generate(&self, k: u64, n_max: u64, budget: &Budget) -> Result<SeqRecord> {
        series::m_numbers(k, n_max, budget)
    }
}

impl SequenceSource for FussCatalan {
    fn name(&self) -> &'static str {
        "fuss-catalan"
    }
    fn generate(&self, k: u64, n_max: u64, _budget: &Budget) -> Result<SeqRecord> {
        series::fuss_catalan_numbers(k, n_max)
    }
}

impl SequenceSource for WeightedF {
    fn name(&self) -> &'static str {
        "f"
    }
    fn generate(&self, k: u64, n_max: u64, _budget: &Budget) -> Result<SeqRecord> {
        series::f_numbers(k, n_max)
    }
}

#[derive(Default)]
pub struct SequenceRegistry {
    sources: BTreeMap<&'static str, Box<dyn SequenceSource>>,
}

impl SequenceRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_builtins() -> Self {
        let mut reg = Self::new();
        reg.register(Box::new(Tangent));
        reg.register(Box::new(Genocchi));
        reg.register(Box::new(LNumbers));
        reg.register(Box::new(MNumbers));
        reg.register(Box::new(FussCatalan));
        reg.register(Box::new(WeightedF));
        reg
    }

    pub fn register(&mut self, source: Box<dyn SequenceSource>) {
        self.sources.insert(source.name(), source);
    }

    pub fn get(&self, name: &str) -> Option<&dyn SequenceSource> {
        self.sources.get(name).map(|b| b.as_ref())
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.sources.keys().copied()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Scope {
    Theorem1,
    Theorem2,
    Theorem3,
    Lemmas,
}

impl Scope {
    pub const ALL: [Scope; 4] = [Scope::Theorem1, Scope::Theorem2, Scope::Theorem3, Scope::Lemmas];

    pub fn name(self) -> &'static str {
        match self {
            Scope::Theorem1 => "theorem1",
            Scope::Theorem2 => "theorem2",
            Scope::Theorem3 => "theorem3",
            Scope::Lemmas => "lemmas",
        }
    }
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scope::ALL
            .into_iter()
            .find(|scope| scope.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown scope {s:?}")))
    }
}

/// Ranges and budget shared by every check in a run.
#[derive(Debug, Clone)]
pub struct CheckParams {
    pub k_range: RangeInclusive<u64>,
    /// `None` selects the per-check default.
    pub n_range: Option<RangeInclusive<u64>>,
    pub budget: Budget,
}

impl Default for CheckParams {
    fn default() -> Self {
        CheckParams { k_range: 2..=4, n_range: None, budget: Budget::default() }
    }
}

impl CheckParams {
    fn n_range_or(&self, default: RangeInclusive<u64>) -> RangeInclusive<u64> {
        self.n_range.clone().unwrap_or(default)
    }

    /// `n` values for arity `k`: the explicit range if one was given,
    /// otherwise `0..=default_n_max(k)`.
    fn n_range_for(&self, k: u64) -> RangeInclusive<u64> {
        self.n_range_or(0..=default_n_max(k))
    }
}

/// Default largest `n` for `L`/`M` computations at arity `k`.
pub fn default_n_max(k: u64) -> u64 {
    match k {
        0..=2 => 8,
        3 => 5,
        4 => 4,
        _ => 3,
    }
}

/// One line of a verification run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub check: &'static str,
    pub case: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn new(check: &'static str, case: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        CheckOutcome { check, case: case.into(), passed, detail: detail.into() }
    }

    /// Turns a verification failure into a failed row; other errors
    /// (usage, budget) abort the run.
    fn from_result(check: &'static str, case: impl Into<String>, result: Result<String>) -> Result<Self> {
        match result {
            Ok(detail) => Ok(Self::new(check, case, true, detail)),
            Err(Error::Verification(msg)) | Err(Error::Invariant(msg)) => Ok(Self::new(check, case, false, msg)),
            Err(e) => Err(e),
        }
    }
}

pub trait Check: Send + Sync {
    fn name(&self) -> &'static str;
    fn scope(&self) -> Scope;
    fn run(&self, params: &CheckParams) -> Result<Vec<CheckOutcome>>;
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::verification(msg()))
    }
}

fn arities(params: &CheckParams) -> Result<RangeInclusive<u64>> {
    if *params.k_range.start() < 2 {
        return Err(Error::invalid("k-range must start at 2 or above"));
    }
    Ok(params.k_range.clone())
}

/// Tangent numbers agree across the ODE, the `L` recurrence and the class
/// decomposition, and `2^n | T_{2n+1}`.
struct TangentAgreement;

impl Check for TangentAgreement {
    fn name(&self) -> &'static str {
        "tangent-routes-agree"
    }
    fn scope(&self) -> Scope {
        Scope::Theorem1
    }
    fn run(&self, params: &CheckParams) -> Result<Vec<CheckOutcome>> {
        let range = params.n_range_or(0..=8);
        let n_max = *range.end();
        let tangent = series::tangent_numbers(n_max);
        let l = series::l_numbers(2, n_max, &params.budget)?;
        let mut out = Vec::new();
        for n in range {
            let t = &tangent.values[n as usize];
            let result = (|| {
                ensure(t == &l.values[n as usize], || format!("ODE gives {t}, recurrence {}", l.values[n as usize]))?;
                let classes = trees::pivot_classes(2, n, &params.budget)?;
                let total = trees::class_total_sum(&classes);
                ensure(&total == t, || format!("class totals sum to {total}, T = {t}"))?;
                ensure((t % (Nat::one() << n)).is_zero(), || format!("2^{n} does not divide {t}"))?;
                Ok(format!("T_{} = {t}", 2 * n + 1))
            })();
            out.push(CheckOutcome::from_result(self.name(), format!("n={n}"), result)?);
        }
        Ok(out)
    }
}

/// `(n+1) T_{2n+1} / 2^{2n}` is an odd integer.
struct GenocchiOdd;

impl Check for GenocchiOdd {
    fn name(&self) -> &'static str {
        "genocchi-odd-integer"
    }
    fn scope(&self) -> Scope {
        Scope::Theorem1
    }
    fn run(&self, params: &CheckParams) -> Result<Vec<CheckOutcome>> {
        let range = params.n_range_or(0..=12);
        let g = series::genocchi_numbers(*range.end());
        let mut out = Vec::new();
        for n in range {
            let result = g.clone().and_then(|g| {
                let v = &g.values[n as usize];
                ensure(v.is_odd(), || format!("G_{} = {v} is even", 2 * n + 2))?;
                Ok(format!("G_{} = {v}", 2 * n + 2))
            });
            out.push(CheckOutcome::from_result(self.name(), format!("n={n}"), result)?);
        }
        Ok(out)
    }
}

/// Brute-force count of alternating permutations equals `T_{2n+1}`.
struct AlternatingPermutations;

impl Check for AlternatingPermutations {
    fn name(&self) -> &'static str {
        "alternating-permutations"
    }
    fn scope(&self) -> Scope {
        Scope::Theorem1
    }
    fn run(&self, params: &CheckParams) -> Result<Vec<CheckOutcome>> {
        // Exhaustive search over (2n+1)! permutations; capped at n = 4.
        let range = params.n_range_or(0..=4);
        let hi = (*range.end()).min(4);
        let tangent = series::tangent_numbers(hi);
        let mut out = Vec::new();
        for n in *range.start()..=hi {
            let count = series::count_alternating_permutations(2 * n as usize + 1);
            let t = &tangent.values[n as usize];
            let result = ensure(&Nat::from(count) == t, || format!("brute force {count}, T = {t}"))
                .map(|_| format!("{count} permutations"));
            out.push(CheckOutcome::from_result(self.name(), format!("n={n}"), result)?);
        }
        Ok(out)
    }
}

/// Per-class divisibility for complete binary trees.
struct BinaryClassDivisibility;

impl Check for BinaryClassDivisibility {
    fn name(&self) -> &'static str {
        "binary-class-divisibility"
    }
    fn scope(&self) -> Scope {
        Scope::Theorem1
    }
    fn run(&self, params: &CheckParams) -> Result<Vec<CheckOutcome>> {
        let mut out = Vec::new();
        for n in params.n_range_or(0..=8) {
            let result = (|| {
                let report = trees::verify_class_divisibility(2, n, &params.budget)?;
                let g = series::genocchi_numbers(n)?.values.pop().expect("n_max entry");
                let sum = report.quotient_sum();
                ensure(sum == g, || format!("class quotients sum to {sum}, G = {g}"))?;
                Ok(format!("{} classes, quotients sum to {sum}", report.classes.len()))
            })();
            out.push(CheckOutcome::from_result(self.name(), format!("n={n}"), result)?);
        }
        Ok(out)
    }
}

/// Per-class divisibility for general k, with quotient sums equal to `M`.
struct KaryClassDivisibility;

impl Check for KaryClassDivisibility {
    fn name(&self) -> &'static str {
        "class-divisibility"
    }
    fn scope(&self) -> Scope {
        Scope::Theorem2
    }
    fn run(&self, params: &CheckParams) -> Result<Vec<CheckOutcome>> {
        let mut out = Vec::new();
        for k in arities(params)? {
            let range = params.n_range_for(k);
            let m = series::m_numbers(k, *range.end(), &params.budget);
            for n in range {
                let result = (|| {
                    let m = m.clone()?;
                    let report = trees::verify_class_divisibility(k as usize, n, &params.budget)?;
                    let sum = report.quotient_sum();
                    let expected = &m.values[n as usize];
                    ensure(&sum == expected, || format!("class quotients sum to {sum}, M = {expected}"))?;
                    Ok(format!("{} classes, M_{} = {sum}", report.classes.len(), leaf_count_expanded(k, n)))
                })();
                out.push(CheckOutcome::from_result(self.name(), format!("k={k} n={n}"), result)?);
            }
        }
        Ok(out)
    }
}

/// `M` is integral and satisfies the predicted congruence for `n ≥ 1`.
struct MCongruence;

impl Check for MCongruence {
    fn name(&self) -> &'static str {
        "m-congruence"
    }
    fn scope(&self) -> Scope {
        Scope::Theorem2
    }
    fn run(&self, params: &CheckParams) -> Result<Vec<CheckOutcome>> {
        let mut out = Vec::new();
        for k in arities(params)? {
            let range = params.n_range_for(k);
            let cong = expected_congruence(k)?;
            let m = series::m_numbers(k, *range.end(), &params.budget);
            for n in range.filter(|&n| n >= 1) {
                let result = m.clone().and_then(|m| {
                    let v = &m.values[n as usize];
                    ensure(cong.holds(v), || format!("M = {v} is not {cong}"))?;
                    Ok(format!("M mod {} = {}", cong.modulus, v % cong.modulus))
                });
                out.push(CheckOutcome::from_result(self.name(), format!("k={k} n={n}"), result)?);
            }
        }
        Ok(out)
    }
}

/// Generating functions reproduce the recurrences and `ψ` obeys its ODE.
struct GeneratingFunctions;

impl Check for GeneratingFunctions {
    fn name(&self) -> &'static str {
        "generating-functions"
    }
    fn scope(&self) -> Scope {
        Scope::Theorem2
    }
    fn run(&self, params: &CheckParams) -> Result<Vec<CheckOutcome>> {
        let mut out = Vec::new();
        for k in arities(params)? {
            let n_max = *params.n_range_for(k).end();
            let result = (|| {
                let l = series::l_numbers(k, n_max, &params.budget)?;
                let m = series::m_numbers(k, n_max, &params.budget)?;
                let phi = series::phi_coefficients(k, k * n_max + 1)?;
                ensure(phi.support_values() == l.values, || "φ coefficients differ from L".into())?;
                let psi = series::psi_coefficients(k, leaf_count_expanded(k, n_max))?;
                ensure(psi.support_values() == m.values, || "ψ coefficients differ from M".into())?;
                Ok(format!("orders φ {}, ψ {}", phi.order, psi.order))
            })();
            out.push(CheckOutcome::from_result(self.name(), format!("k={k} n<={n_max}"), result)?);
        }
        Ok(out)
    }
}

/// Weighted class sums equal the closed form, `(2n−1)!!(2n+1)!!` for
/// binary trees.
struct WeightedSum;

impl Check for WeightedSum {
    fn name(&self) -> &'static str {
        "weighted-class-sum"
    }
    fn scope(&self) -> Scope {
        Scope::Theorem3
    }
    fn run(&self, params: &CheckParams) -> Result<Vec<CheckOutcome>> {
        let mut out = Vec::new();
        for n in params.n_range_or(0..=8) {
            let result = (|| {
                let sum = trees::class_weighted_sum(2, n, &params.budget)?;
                let n = n as i64;
                let odd = double_factorial(2 * n - 1)? * double_factorial(2 * n + 1)?;
                ensure(sum == odd, || format!("class sum {sum}, (2n−1)!!(2n+1)!! = {odd}"))?;
                Ok(format!("f({n}) = {sum}"))
            })();
            out.push(CheckOutcome::from_result(self.name(), format!("k=2 n={n}"), result)?);
        }
        Ok(out)
    }
}

/// For `k > 2`: the weighted class sum matches the closed form, and
/// `f(n) | f(n+1)`. Both feed the congruence for `M`.
struct WeightedSumKary;

impl Check for WeightedSumKary {
    fn name(&self) -> &'static str {
        "weighted-sum-kary"
    }
    fn scope(&self) -> Scope {
        Scope::Theorem2
    }
    fn run(&self, params: &CheckParams) -> Result<Vec<CheckOutcome>> {
        let mut out = Vec::new();
        for k in arities(params)?.filter(|&k| k > 2) {
            for n in params.n_range_for(k) {
                let result = (|| {
                    let f = trees::class_weighted_sum(k as usize, n, &params.budget)?;
                    let next = series::f_closed_form(k, n + 1)?;
                    ensure((&next % &f).is_zero(), || format!("f(n) = {f} does not divide f(n+1)"))?;
                    Ok(format!("f({n}) = {f}"))
                })();
                out.push(CheckOutcome::from_result(self.name(), format!("k={k} n={n}"), result)?);
            }
        }
        Ok(out)
    }
}

struct LegendreSweep;

impl Check for LegendreSweep {
    fn name(&self) -> &'static str {
        "legendre-dual-forms"
    }
    fn scope(&self) -> Scope {
        Scope::Lemmas
    }
    fn run(&self, _params: &CheckParams) -> Result<Vec<CheckOutcome>> {
        [2u64, 3, 5, 7, 11]
            .into_iter()
            .map(|p| {
                let result = (0..=10_000u64)
                    .try_for_each(|n| legendre_valuation(n, p).map(drop))
                    .map(|_| "n = 0..=10000".to_string());
                CheckOutcome::from_result(self.name(), format!("p={p}"), result)
            })
            .collect()
    }
}

struct ProductCongruence;

impl Check for ProductCongruence {
    fn name(&self) -> &'static str {
        "product-congruence-mod-p2"
    }
    fn scope(&self) -> Scope {
        Scope::Lemmas
    }
    fn run(&self, _params: &CheckParams) -> Result<Vec<CheckOutcome>> {
        [3u64, 5, 7]
            .into_iter()
            .map(|p| {
                let result = verify_lemma_p2(p, 50).and_then(|r| match r.first_failure {
                    None => Ok("k = 0..=50".to_string()),
                    Some(k) => Err(Error::verification(format!("fails at k={k}"))),
                });
                CheckOutcome::from_result(self.name(), format!("p={p}"), result)
            })
            .collect()
    }
}

struct CoefficientIdentity;

impl Check for CoefficientIdentity {
    fn name(&self) -> &'static str {
        "coefficient-identity"
    }
    fn scope(&self) -> Scope {
        Scope::Lemmas
    }
    fn run(&self, _params: &CheckParams) -> Result<Vec<CheckOutcome>> {
        let mut out = Vec::new();
        for k in 2..=6 {
            for n in 1..=5 {
                let result = verify_coeff_identity(k, n).and_then(|r| {
                    ensure(r.passed(), || {
                        format!("factorial form {:?}, product form {}", r.factorial_form, r.product_form)
                    })?;
                    Ok(format!("value {}", r.product_form))
                });
                out.push(CheckOutcome::from_result(self.name(), format!("k={k} n={n}"), result)?);
            }
        }
        Ok(out)
    }
}

#[derive(Default)]
pub struct CheckRegistry {
    checks: Vec<Box<dyn Check>>,
}

impl CheckRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_builtins() -> Self {
        let mut reg = Self::new();
        reg.register(Box::new(TangentAgreement));
        reg.register(Box::new(GenocchiOdd));
        reg.register(Box::new(AlternatingPermutations));
        reg.register(Box::new(BinaryClassDivisibility));
        reg.register(Box::new(KaryClassDivisibility));
        reg.register(Box::new(MCongruence));
        reg.register(Box::new(GeneratingFunctions));
        reg.register(Box::new(WeightedSum));
        reg.register(Box::new(WeightedSumKary));
        reg.register(Box::new(LegendreSweep));
        reg.register(Box::new(ProductCongruence));
        reg.register(Box::new(CoefficientIdentity));
        reg
    }

    pub fn register(&mut self, check: Box<dyn Check>) {
        self.checks.push(check);
    }

    pub fn get(&self, name: &str) -> Option<&dyn Check> {
        self.checks.iter().find(|c| c.name() == name).map(|c| c.as_ref())
    }

    /// Checks in `scopes`, in registration order.
    pub fn in_scopes<'a>(&'a self, scopes: &'a [Scope]) -> impl Iterator<Item = &'a dyn Check> + 'a {
        self.checks.iter().filter(move |c| scopes.contains(&c.scope())).map(|c| c.as_ref())
    }

    /// Runs every check in `scopes`.
    pub fn run(&self, scopes: &[Scope], params: &CheckParams) -> Result<Vec<CheckOutcome>> {
        let mut rows = Vec::new();
        for check in self.in_scopes(scopes) {
            rows.extend(check.run(params)?);
        }
        Ok(rows)
    }
}
