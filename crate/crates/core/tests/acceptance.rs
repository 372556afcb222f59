//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any failed.
//!
//! Golden values are the published tables. Everything else is compared
//! against small oracles defined below, which share no code with the
//! library beyond the public API under test.

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use tangenocchi::exactnum::{
    expected_congruence, legendre_valuation, verify_coeff_identity, verify_lemma_p2, Congruence,
};
use tangenocchi::series::{
    count_alternating_permutations, f_closed_form, genocchi_numbers, l_numbers, m_numbers, m_residues,
    phi_coefficients, psi_coefficients, tangent_numbers, verify_corollary_ode,
};
use tangenocchi::trees::{
    class_total_sum, class_weighted_sum, enumerate_shapes, labelings_by_bruteforce, labelings_by_formula,
    pivot_classes, verify_class_divisibility,
};
use tangenocchi::Budget;

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn nat(s: &str) -> BigUint {
    s.parse().expect("decimal literal")
}

fn nats(v: &[&str]) -> Vec<BigUint> {
    v.iter().map(|s| nat(s)).collect()
}

// ---------------------------------------------------------------- oracles

fn fact(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

fn double_fact(n: i64) -> u128 {
    (1..=n.max(0)).rev().step_by(2).map(|i| i as u128).product()
}

/// Euler zigzag numbers E_0..E_len via the boustrophedon triangle.
fn zigzag(len: usize) -> Vec<u128> {
    let mut out = vec![1u128];
    let mut row = vec![1u128];
    for n in 1..=len {
        let mut next = vec![0u128; n + 1];
        for i in 1..=n {
            next[i] = next[i - 1] + row[n - i];
        }
        out.push(next[n]);
        row = next;
    }
    out
}

/// Alternating (up-down) permutations of length `len`, by lexicographic
/// enumeration of every permutation.
fn alternating_by_permutation(len: usize) -> u64 {
    let mut perm: Vec<usize> = (0..len).collect();
    let mut count = 0;
    loop {
        if perm.windows(2).enumerate().all(|(i, w)| (w[0] < w[1]) == (i % 2 == 0)) {
            count += 1;
        }
        // next permutation
        let Some(i) = (1..len).rev().find(|&i| perm[i - 1] < perm[i]) else {
            return count;
        };
        let j = (i..len).rev().find(|&j| perm[j] > perm[i - 1]).unwrap();
        perm.swap(i - 1, j);
        perm[i..].reverse();
    }
}

/// Ordinary coefficients of the solution of `y' = 1 + y^k`, `y(0) = 0`,
/// then `L_{kn+1} = (kn+1)! · [x^{kn+1}] y`.
fn l_by_ordinary_ode(k: u64, n_max: u64) -> Vec<BigUint> {
    let order = (k * n_max + 1) as usize;
    let mut y = vec![BigRational::zero(); order + 1];
    for m in 0..order {
        // [x^m] y^k from the coefficients known so far.
        let mut pow = vec![BigRational::zero(); m + 1];
        pow[0] = BigRational::one();
        for _ in 0..k {
            let mut next = vec![BigRational::zero(); m + 1];
            for (i, a) in pow.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
                for j in 0..=m - i {
                    next[i + j] += a * &y[j];
                }
            }
            pow = next;
        }
        let rhs = if m == 0 { BigRational::one() + &pow[0] } else { pow[m].clone() };
        y[m + 1] = rhs / BigRational::from_integer(BigInt::from(m + 1));
    }
    (0..=n_max)
        .map(|n| {
            let e = k * n + 1;
            let v = &y[e as usize] * BigRational::from_integer(BigInt::from(fact(e)));
            assert!(v.is_integer());
            v.to_integer().to_biguint().unwrap()
        })
        .collect()
}

fn m_from_l_oracle(k: u64, n: u64, l: &BigUint) -> BigUint {
    let top = k * k * n - k * n + k;
    let num = fact(top) * l;
    let den = num_traits::pow(fact(k), (k * n + 1) as usize) * fact(k * n + 1);
    assert!((&num % &den).is_zero(), "M not integral for k={k}, n={n}");
    num / den
}

/// Case split on `k`: prime, prime power, several prime factors.
fn congruence_oracle(k: u64) -> (u64, u64) {
    let p = (2..=k).find(|d| k.is_multiple_of(*d)).unwrap();
    let mut rest = k;
    while rest.is_multiple_of(p) {
        rest /= p;
    }
    match (rest, k == p) {
        (1, true) => (p, 1),
        (1, false) => (p * p, 1),
        _ => (k, 0),
    }
}

fn valuation_by_counting(n: u64, p: u64) -> u64 {
    (1..=n)
        .map(|mut i| {
            let mut v = 0;
            while i % p == 0 {
                i /= p;
                v += 1;
            }
            v
        })
        .sum()
}

fn to_rational(n: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(n.clone()))
}

/// Checks `x ψ' − ψ = ((k−1)/k!)(x^k + ψ^k)` on exponential coefficients.
fn corollary_ode_oracle(k: u64, egf: &[BigUint]) -> Outcome {
    let len = egf.len();
    let psi: Vec<BigRational> =
        egf.iter().enumerate().map(|(m, c)| to_rational(c) / to_rational(&fact(m as u64))).collect();
    let mut pow = vec![BigRational::zero(); len];
    pow[0] = BigRational::one();
    for _ in 0..k {
        let mut next = vec![BigRational::zero(); len];
        for (i, a) in pow.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in psi.iter().enumerate().take(len - i) {
                next[i + j] += a * b;
            }
        }
        pow = next;
    }
    let scale = BigRational::new(BigInt::from(k - 1), BigInt::from(fact(k)));
    for m in 0..len {
        let lhs = &psi[m] * BigRational::from_integer(BigInt::from(m as i64 - 1));
        let mut bracket = pow[m].clone();
        if m as u64 == k {
            bracket += BigRational::one();
        }
        ensure!(lhs == &scale * bracket, "ODE fails at x^{m} for k={k}");
    }
    Ok(())
}

// ---------------------------------------------------------------- criteria

fn c1_tangent_genocchi() -> Outcome {
    let t = tangent_numbers(6).values;
    let g = genocchi_numbers(6).map_err(|e| e.to_string())?.values;
    let golden_t = nats(&["1", "2", "16", "272", "7936", "353792", "22368256"]);
    let golden_g = nats(&["1", "1", "3", "17", "155", "2073", "38227"]);
    ensure!(t == golden_t, "T = {t:?}");
    ensure!(g == golden_g, "G = {g:?}");
    let z = zigzag(13);
    for n in 0..=6u64 {
        ensure!(t[n as usize] == BigUint::from(z[2 * n as usize + 1]), "T_{} differs from zigzag", 2 * n + 1);
        let g_oracle = ((n as u128 + 1) * z[2 * n as usize + 1]) >> (2 * n);
        ensure!(g[n as usize] == BigUint::from(g_oracle), "G_{} differs from (n+1)T/4^n", 2 * n + 2);
    }
    Ok(())
}

fn c2_kary_tables() -> Outcome {
    let b = Budget::default();
    let tables: [(u64, &[&str], &[&str]); 2] = [
        (
            3,
            &["1", "6", "540", "184680", "157600080", "270419925600"],
            &["1", "70", "500500", "43001959000", "21100495466050000", "39781831724228093500000"],
        ),
        (
            4,
            &["1", "24", "32256", "285272064", "8967114326016"],
            &[
                "1",
                "525525",
                "10258577044340625",
                "42645955937142729593062265625",
                "6992644904557760596067178252404694486328125",
            ],
        ),
    ];
    for (k, l_gold, m_gold) in tables {
        let n_max = l_gold.len() as u64 - 1;
        let l = l_numbers(k, n_max, &b).map_err(|e| e.to_string())?.values;
        let m = m_numbers(k, n_max, &b).map_err(|e| e.to_string())?.values;
        ensure!(l == nats(l_gold), "k={k}: L = {l:?}");
        ensure!(m == nats(m_gold), "k={k}: M = {m:?}");
        ensure!(l == l_by_ordinary_ode(k, n_max), "k={k}: L differs from the ODE oracle");
        for n in 0..=n_max {
            ensure!(m[n as usize] == m_from_l_oracle(k, n, &l[n as usize]), "k={k} n={n}: M oracle");
        }
    }
    Ok(())
}

fn c3_class_tables() -> Outcome {
    let b = Budget::default();
    let classes = pivot_classes(2, 4, &b).map_err(|e| e.to_string())?;
    let col = |f: fn(&tangenocchi::trees::PivotClass) -> &BigUint| -> Vec<u64> {
        classes.iter().map(|c| f(c).to_u64().unwrap()).collect()
    };
    ensure!(col(|c| &c.class_size) == [8, 2, 4], "class sizes {:?}", col(|c| &c.class_size));
    ensure!(col(|c| &c.hook_product) == [3 * 5 * 7 * 9, 3 * 3 * 7 * 9, 3 * 3 * 5 * 9], "hook products");
    ensure!(col(|c| &c.labelings) == [384, 640, 896], "labelings {:?}", col(|c| &c.labelings));
    ensure!(col(|c| &c.total) == [3072, 1280, 3584], "totals {:?}", col(|c| &c.total));
    ensure!(col(|c| &c.quotient) == [60, 25, 70], "quotients {:?}", col(|c| &c.quotient));
    ensure!(class_total_sum(&classes) == BigUint::from(7936u32), "total sum");
    let q: u64 = col(|c| &c.quotient).iter().sum();
    ensure!(q == 155, "quotient sum {q}");

    let classes = pivot_classes(2, 3, &b).map_err(|e| e.to_string())?;
    let totals: Vec<u64> = classes.iter().map(|c| c.total.to_u64().unwrap()).collect();
    ensure!(totals == [192, 80], "n=3 totals {totals:?}");
    ensure!(class_total_sum(&classes) == BigUint::from(272u32), "T_7");
    Ok(())
}

fn c4_weighted_sum() -> Outcome {
    let b = Budget::default();
    for n in 0..=8i64 {
        let oracle = BigUint::from(double_fact(2 * n - 1) * double_fact(2 * n + 1));
        let classes = class_weighted_sum(2, n as u64, &b).map_err(|e| e.to_string())?;
        let closed = f_closed_form(2, n as u64).map_err(|e| e.to_string())?;
        ensure!(classes == oracle && closed == oracle, "n={n}: classes {classes}, closed {closed}, oracle {oracle}");
    }
    ensure!(f_closed_form(2, 4).unwrap() == BigUint::from(99225u32), "f(4)");
    ensure!(99225 == (3 * 5 * 7u32).pow(2) * 9, "f(4) factorization");
    Ok(())
}

fn c5_class_divisibility() -> Outcome {
    let b = Budget::default();
    let cases = (0..=7).map(|n| (2, n)).chain((0..=4).map(|n| (3, n))).chain((0..=3).map(|n| (4, n)));
    for (k, n) in cases {
        let report = verify_class_divisibility(k, n, &b).map_err(|e| format!("k={k} n={n}: {e}"))?;
        let m = m_numbers(k as u64, n, &b).map_err(|e| e.to_string())?.values.pop().unwrap();
        ensure!(report.quotient_sum() == m, "k={k} n={n}: quotient sum {} != M {m}", report.quotient_sum());

        // Independent recomputation from the class totals.
        let k64 = k as u64;
        let top = fact(k64 * k64 * n - k64 * n + k64);
        let den = num_traits::pow(fact(k64), (k64 * n + 1) as usize);
        let mut sum = BigUint::zero();
        for c in pivot_classes(k, n, &b).map_err(|e| e.to_string())? {
            let scaled = &top * &c.total;
            let inner = fact(k64 * n + 1);
            ensure!((&scaled % &inner).is_zero(), "k={k} n={n}: (kn+1)! does not divide");
            let inner = scaled / inner;
            ensure!((&inner % &den).is_zero(), "k={k} n={n} class {}: (k!)^(kn+1) does not divide", c.canonical);
            let q = inner / &den;
            ensure!(q == c.quotient, "k={k} n={n}: quotient mismatch");
            sum += q;
        }
        ensure!(sum == m, "k={k} n={n}: oracle quotient sum");
    }
    Ok(())
}

fn c6_congruences() -> Outcome {
    let b = Budget::default();
    for k in 2..=12u64 {
        let n_max = match k {
            2..=4 => 6,
            5..=8 => 4,
            _ => 3,
        };
        let (modulus, residue) = congruence_oracle(k);
        let expected = expected_congruence(k).map_err(|e| e.to_string())?;
        ensure!(expected == Congruence { modulus, residue }, "k={k}: expected {expected}");
        let m = m_numbers(k, n_max, &b).map_err(|e| e.to_string())?.values;
        for (n, v) in m.iter().enumerate().skip(1) {
            ensure!(v % modulus == BigUint::from(residue), "k={k} n={n}: M mod {modulus} = {}", v % modulus);
        }
    }
    Ok(())
}

fn c7_residue_periods() -> Outcome {
    let b = Budget::default();
    let cases: [(u64, &[u64], usize); 4] = [
        (8, &[1, 1, 5, 5, 1, 1, 5, 5], 4),
        (27, &[1, 1, 10, 1, 1, 10, 1, 1, 10], 3),
        (16, &[1, 1, 13, 5, 9, 9, 5, 13, 1, 1, 13, 5, 9, 9, 5, 13], 8),
        (625, &[1, 1, 126, 376, 126, 1, 1, 126, 376, 126], 5),
    ];
    for (k, golden, period) in cases {
        let report = m_residues(k, golden.len() as u64 - 1, &b).map_err(|e| format!("k={k}: {e}"))?;
        ensure!(report.residues == golden, "k={k}: residues {:?}", report.residues);
        let p = report.period.ok_or_else(|| format!("k={k}: no period detected"))?;
        ensure!(p.period == period && p.repetitions >= 2, "k={k}: period {p:?}");
        ensure!(report.cross_checked >= 2, "k={k}: only {} terms cross-checked", report.cross_checked);
    }
    Ok(())
}

fn c8_oracles() -> Outcome {
    let b = Budget::default();
    for (k, max_vertices) in [(2usize, 13u64), (3, 10)] {
        let l = l_numbers(k as u64, (max_vertices - 1) / k as u64, &b).map_err(|e| e.to_string())?.values;
        for n in 0..=(max_vertices - 1) / k as u64 {
            let mut sum = BigUint::zero();
            for shape in enumerate_shapes(k, n, &b).map_err(|e| e.to_string())? {
                let brute = labelings_by_bruteforce(&shape, &b).map_err(|e| e.to_string())?;
                let formula = labelings_by_formula(&shape).map_err(|e| e.to_string())?;
                ensure!(brute == formula, "k={k} shape {shape}: brute {brute}, formula {formula}");
                sum += brute;
            }
            ensure!(sum == l[n as usize], "k={k} n={n}: labelings sum {sum}");
        }
    }
    let t = tangent_numbers(4).values;
    for (n, t) in t.iter().enumerate() {
        let lib = count_alternating_permutations(2 * n + 1);
        let oracle = alternating_by_permutation(2 * n + 1);
        ensure!(lib == oracle && &BigUint::from(lib) == t, "n={n}: library {lib}, oracle {oracle}, T {t}");
    }
    Ok(())
}

fn c9_generating_functions() -> Outcome {
    let b = Budget::default();
    for (k, order) in [(2u64, 30u64), (3, 25)] {
        verify_corollary_ode(k, order).map_err(|e| e.to_string())?;
        let psi = psi_coefficients(k, order).map_err(|e| e.to_string())?;
        corollary_ode_oracle(k, &psi.coeffs)?;
        let m_count = psi.support_values().len() as u64;
        let m = m_numbers(k, m_count - 1, &b).map_err(|e| e.to_string())?.values;
        ensure!(psi.support_values() == m, "k={k}: ψ support differs from M");

        let phi = phi_coefficients(k, order).map_err(|e| e.to_string())?;
        let l_count = phi.support_values().len() as u64;
        let l = l_numbers(k, l_count - 1, &b).map_err(|e| e.to_string())?.values;
        ensure!(phi.support_values() == l, "k={k}: φ support differs from L");
        ensure!(l == l_by_ordinary_ode(k, l_count - 1), "k={k}: φ differs from the ODE oracle");
    }
    Ok(())
}

fn c10_sweeps() -> Outcome {
    for p in [2u64, 3, 5, 7, 11] {
        let mut counted = 0;
        for n in 0..=10_000u64 {
            if n > 0 {
                counted += valuation_by_counting(n, p) - valuation_by_counting(n - 1, p);
            }
            let v = legendre_valuation(n, p).map_err(|e| e.to_string())?;
            ensure!(v == counted, "p={p} n={n}: {v} != {counted}");
        }
    }
    for p in [3u64, 5, 7] {
        let report = verify_lemma_p2(p, 50).map_err(|e| e.to_string())?;
        ensure!(report.passed(), "p={p}: product congruence fails at {:?}", report.first_failure);
        let p2 = u128::from(p * p);
        let target: u128 = (1..p).map(u128::from).product::<u128>() % p2;
        for k in 0..=50u64 {
            let prod = (1..p).fold(1u128, |acc, i| acc * u128::from(p * k + i) % p2);
            ensure!(prod == target, "p={p} k={k}: oracle disagrees");
        }
    }
    for k in 2..=6u64 {
        for n in 1..=5u64 {
            let r = verify_coeff_identity(k, n).map_err(|e| e.to_string())?;
            let top = k * k * n - k * n + k;
            let den = fact(k * n + 1) * num_traits::pow(fact(k - 1), (k * n + 1) as usize);
            let num = fact(top);
            ensure!((&num % &den).is_zero(), "k={k} n={n}: factorial form not integral");
            let oracle = num / den;
            ensure!(r.passed() && r.product_form == oracle, "k={k} n={n}: {r:?} vs {oracle}");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("tangent and Genocchi golden values", c1_tangent_genocchi),
        ("k-ary L and M golden tables", c2_kary_tables),
        ("binary pivot-class tables", c3_class_tables),
        ("weighted sums equal double factorials", c4_weighted_sum),
        ("per-class divisibility and quotient sums", c5_class_divisibility),
        ("congruences of M for k = 2..12", c6_congruences),
        ("residue sequences and periods", c7_residue_periods),
        ("brute-force labelling oracles", c8_oracles),
        ("generating functions and ODE", c9_generating_functions),
        ("number-theory sweeps", c10_sweeps),
    ];
    panic::set_hook(Box::new(|_| {}));
    let suite = Instant::now();
    let mut failed = 0;
    for (i, (name, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("criterion {:>2} PASS  {name} ({secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({secs:.2}s): {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} of 10 passed in {:.1}s", 10 - failed, suite.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
