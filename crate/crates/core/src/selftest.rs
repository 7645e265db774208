//! Self-contained invariant suites behind the `selftest` CLI command.
//!
//! Each suite runs a deterministic batch of checks and reports how many
//! cases passed. The numeric suites here run at a reduced truncation so the
//! whole run stays interactive; the integration test suite exercises the
//! same invariants at full strength.

use std::f64::consts::PI;
use std::fmt;

use num_traits::Zero;

use crate::arith::{binomial, bernoulli, rat, ratio, Rational};
use crate::index::{
    classify, depth2_regular_condition, depth3_regular_condition, IndexPoint,
};
use crate::numerics::{EvalConfig, Evaluator};
use crate::reduce::{
    bound_check, closed_form_depth2, closed_form_depth3, stuffle_expand, MzvCombination,
    MzvIndex, PivotStrategy, Reducer,
};
use crate::stuffle::{
    harmonic_product, hopf_defect, prop_1_10_sides, telescoped_word_sum, HPoly, LinearForm, Word,
};

/// SplitMix64; a tiny deterministic generator so suite corpora are identical
/// on every platform and run.
#[derive(Clone, Debug)]
pub struct Rng(u64);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in 0..bound.
    pub fn below(&mut self, bound: u64) -> u64 {
        self.next_u64() % bound
    }

    /// Uniform in lo..=hi.
    pub fn range_i64(&mut self, lo: i64, hi: i64) -> i64 {
        lo + self.below((hi - lo + 1) as u64) as i64
    }
}

/// A random letter over at most 3 variables with coefficients at most 3.
pub fn random_form(rng: &mut Rng) -> LinearForm {
    let n_vars = 1 + rng.below(2) as usize;
    let mut pairs = Vec::with_capacity(n_vars);
    for _ in 0..n_vars {
        pairs.push((1 + rng.below(3) as u32, 1 + rng.below(3) as u32));
    }
    LinearForm::from_pairs(pairs)
}

/// A random word with length drawn from min_len..=max_len.
pub fn random_word(rng: &mut Rng, min_len: usize, max_len: usize) -> Word {
    let len = min_len + rng.below((max_len - min_len + 1) as u64) as usize;
    Word::new((0..len).map(|_| random_form(rng)).collect())
}

/// A random admissible index of the given depth and entry bound.
pub fn random_admissible(rng: &mut Rng, depth: usize, max_entry: i64) -> MzvIndex {
    let mut entries: Vec<i64> = (0..depth).map(|_| rng.range_i64(1, max_entry)).collect();
    let last = entries.last_mut().unwrap();
    if *last < 2 {
        *last = 2;
    }
    MzvIndex::new(entries).unwrap()
}

#[derive(Clone, Debug)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub passed: usize,
    pub failed: usize,
}

impl fmt::Display for SuiteOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.failed == 0 { "ok" } else { "FAILED" };
        write!(
            f,
            "{:<28} {:>5}/{:<5} {status}",
            self.name,
            self.passed,
            self.passed + self.failed
        )
    }
}

#[derive(Clone, Debug, Default)]
pub struct SelftestReport {
    pub suites: Vec<SuiteOutcome>,
}

impl SelftestReport {
    pub fn all_passed(&self) -> bool {
        self.suites.iter().all(|s| s.failed == 0)
    }
}

impl fmt::Display for SelftestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for suite in &self.suites {
            writeln!(f, "{suite}")?;
        }
        let (passed, failed) = self
            .suites
            .iter()
            .fold((0, 0), |(p, q), s| (p + s.passed, q + s.failed));
        write!(f, "total: {passed} passed, {failed} failed")
    }
}

struct Counter {
    passed: usize,
    failed: usize,
}

impl Counter {
    fn new() -> Self {
        Counter {
            passed: 0,
            failed: 0,
        }
    }

    fn check(&mut self, ok: bool) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
        }
    }

    fn outcome(self, name: &'static str) -> SuiteOutcome {
        SuiteOutcome {
            name,
            passed: self.passed,
            failed: self.failed,
        }
    }
}

fn suite_bernoulli() -> SuiteOutcome {
    let mut c = Counter::new();
    for n in 0..=30u64 {
        let mut acc = Rational::zero();
        for k in 0..=n {
            acc += binomial(n + 1, k).unwrap() * bernoulli(k as usize);
        }
        let expected = if n == 0 { rat(1) } else { Rational::zero() };
        c.check(acc == expected);
    }
    for n in (3..=29).step_by(2) {
        c.check(bernoulli(n).is_zero());
    }
    c.check(bernoulli(1) == ratio(-1, 2));
    c.check(bernoulli(12) == ratio(-691, 2730));
    c.outcome("bernoulli-recurrence")
}

fn suite_rational_axioms() -> SuiteOutcome {
    let mut c = Counter::new();
    let mut rng = Rng::new(11);
    for _ in 0..200 {
        let q = |rng: &mut Rng| ratio(rng.range_i64(-50, 50), rng.range_i64(1, 40));
        let (x, y, z) = (q(&mut rng), q(&mut rng), q(&mut rng));
        c.check((&x + &y) + &z == &x + (&y + &z));
        c.check(&x * (&y + &z) == &x * &y + &x * &z);
        c.check(&x + (-&x) == Rational::zero());
    }
    c.outcome("rational-field-axioms")
}

fn suite_hopf_identity() -> SuiteOutcome {
    let mut c = Counter::new();
    let mut rng = Rng::new(23);
    for _ in 0..150 {
        let w = random_word(&mut rng, 1, 4);
        c.check(hopf_defect(&w).is_zero());
    }
    c.check(hopf_defect(&Word::unit()) == HPoly::unit());
    c.outcome("hopf-identity")
}

fn suite_word_identities() -> SuiteOutcome {
    let mut c = Counter::new();
    let mut rng = Rng::new(37);
    for _ in 0..60 {
        let letters: Vec<LinearForm> = (0..1 + rng.below(4)).map(|_| random_form(&mut rng)).collect();
        c.check(telescoped_word_sum(&letters).is_zero());
    }
    for _ in 0..60 {
        let w = random_word(&mut rng, 0, 2);
        let u = random_form(&mut rng);
        let vs: Vec<LinearForm> = (0..1 + rng.below(3)).map(|_| random_form(&mut rng)).collect();
        let (lhs, rhs) = prop_1_10_sides(&w, &u, &vs);
        c.check(lhs == rhs);
    }
    // product commutativity over the same corpus
    for _ in 0..40 {
        let a = HPoly::from_word(random_word(&mut rng, 0, 3));
        let b = HPoly::from_word(random_word(&mut rng, 0, 3));
        c.check(harmonic_product(&a, &b) == harmonic_product(&b, &a));
    }
    c.outcome("word-identities")
}

fn suite_classifier() -> SuiteOutcome {
    let mut c = Counter::new();
    for n1 in -10..=10 {
        for n2 in -10..=10 {
            let got = classify(&IndexPoint::new(vec![n1, n2])).is_regular();
            c.check(got == depth2_regular_condition(n1, n2));
        }
    }
    for n1 in -6..=6 {
        for n2 in -6..=6 {
            for n3 in -6..=6 {
                let p = IndexPoint::new(vec![n1, n2, n3]);
                let got = classify(&p).is_regular();
                c.check(got == depth3_regular_condition(n1, n2, n3));
                if n1 <= 0 && n2 <= 0 && n3 <= 0 {
                    c.check(!got);
                }
            }
        }
    }
    c.outcome("singularity-classifier")
}

fn suite_depth2_oracle() -> SuiteOutcome {
    let mut c = Counter::new();
    let mut reducer = Reducer::new();
    for n1 in -6..=8 {
        for n2 in -6..=8 {
            let p = IndexPoint::new(vec![n1, n2]);
            if !classify(&p).is_regular() {
                continue;
            }
            let right = reducer.reduce(&p, PivotStrategy::Rightmost);
            let left = reducer.reduce(&p, PivotStrategy::Leftmost);
            let cf = closed_form_depth2(n1, n2);
            match (right, left, cf) {
                (Ok(r), Ok(l), Ok(f)) => {
                    c.check(r == f && l == f && bound_check(&p, &r));
                }
                _ => c.check(false),
            }
        }
    }
    c.outcome("depth2-oracle-equivalence")
}

fn suite_depth3_consistency() -> SuiteOutcome {
    let mut c = Counter::new();
    let mut reducer = Reducer::new();
    let mut ev = Evaluator::new();
    let cfg = EvalConfig::new(100_000).unwrap();
    let tol = 1e-4;
    for n1 in -3..=4 {
        for n2 in -3..=4 {
            for n3 in -3..=4 {
                let p = IndexPoint::new(vec![n1, n2, n3]);
                if !classify(&p).is_regular() || (n1 >= 1 && n2 >= 1 && n3 >= 1) {
                    continue;
                }
                let right = reducer.reduce(&p, PivotStrategy::Rightmost);
                let left = reducer.reduce(&p, PivotStrategy::Leftmost);
                let cf = closed_form_depth3(n1, n2, n3);
                match (right, left, cf) {
                    (Ok(r), Ok(l), Ok(f)) => {
                        let vr = ev.eval_combination(&r, &cfg).value;
                        let vl = ev.eval_combination(&l, &cfg).value;
                        let vf = ev.eval_combination(&f, &cfg).value;
                        c.check(
                            (vr - vl).abs() < tol
                                && (vr - vf).abs() < tol
                                && bound_check(&p, &r)
                                && bound_check(&p, &l),
                        );
                    }
                    _ => c.check(false),
                }
            }
        }
    }
    c.outcome("depth3-consistency")
}

fn suite_trace_replay() -> SuiteOutcome {
    let mut c = Counter::new();
    let mut reducer = Reducer::new();
    for entries in [
        vec![2, -3],
        vec![-2, 5],
        vec![0, -3],
        vec![-1, 2, 4],
        vec![2, 6, -3],
        vec![-1, 4, -2, 5],
        vec![-1, 3, -2, 6],
    ] {
        let p = IndexPoint::new(entries);
        match reducer.reduce_traced(&p, PivotStrategy::Rightmost) {
            Ok((combo, trace)) => c.check(trace.replay() == combo),
            Err(_) => c.check(false),
        }
    }
    c.outcome("trace-replay")
}

fn suite_numeric_identities() -> SuiteOutcome {
    let mut c = Counter::new();
    let mut ev = Evaluator::new();
    let cfg = EvalConfig::new(100_000).unwrap();
    let tol = 1e-4;

    let zeta2 = ev
        .eval_mzv(&MzvIndex::new(vec![2]).unwrap(), &cfg)
        .value;
    c.check((zeta2 - PI * PI / 6.0).abs() < 1e-6);

    let mut rng = Rng::new(53);
    for _ in 0..8 {
        let depth_a = 1 + rng.below(2) as usize;
        let a = random_admissible(&mut rng, depth_a, 4);
        let depth_b = 1 + rng.below(2) as usize;
        let b = random_admissible(&mut rng, depth_b, 4);
        if a.weight() + b.weight() > 8 {
            continue;
        }
        let product = ev.eval_mzv(&a, &cfg).value * ev.eval_mzv(&b, &cfg).value;
        let expanded = ev.eval_combination(&stuffle_expand(&a, &b), &cfg).value;
        c.check((product - expanded).abs() < tol);
    }
    c.outcome("numeric-stuffle")
}

fn suite_json_round_trip() -> SuiteOutcome {
    let mut c = Counter::new();
    let mut reducer = Reducer::new();
    for entries in [vec![2, -3], vec![-2, 5], vec![-1, 2, 4], vec![3, 0]] {
        let p = IndexPoint::new(entries);
        match reducer.reduce(&p, PivotStrategy::Rightmost) {
            Ok(combo) => {
                let parsed = MzvCombination::from_json(&combo.to_json());
                c.check(parsed.as_ref() == Ok(&combo));
            }
            Err(_) => c.check(false),
        }
    }
    c.outcome("json-round-trip")
}

/// Runs every suite and collects the outcomes.
pub fn run() -> SelftestReport {
    SelftestReport {
        suites: vec![
            suite_bernoulli(),
            suite_rational_axioms(),
            suite_hopf_identity(),
            suite_word_identities(),
            suite_classifier(),
            suite_depth2_oracle(),
            suite_depth3_consistency(),
            suite_trace_replay(),
            suite_numeric_identities(),
            suite_json_round_trip(),
        ],
    }
}
