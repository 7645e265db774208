//! Exact rational arithmetic: Bernoulli numbers, binomial coefficients and
//! the Riemann zeta function at non-positive integers.
//!
//! Everything here is exact; no floating point is involved. Rationals are
//! arbitrary-precision and always kept in lowest terms with a positive
//! denominator (guaranteed by `num_rational`).

use std::fmt::Write as _;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use once_cell::sync::Lazy;
use thiserror::Error;

/// Exact rational scalar used throughout the crate.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("binomial({n}, {k}) is undefined: k exceeds n")]
    BinomialOutOfRange { n: u64, k: u64 },
    #[error("cannot parse rational from {input:?}")]
    RationalParse { input: String },
}

/// Rational from an integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rational p/q from a pair of integers, q != 0.
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Renders a rational as `"p/q"` in lowest terms, or `"p"` alone when the
/// denominator is 1. This is the wire format used in all JSON output.
pub fn format_rational(q: &Rational) -> String {
    let mut s = String::new();
    write!(s, "{}", q.numer()).unwrap();
    if !q.denom().is_one() {
        write!(s, "/{}", q.denom()).unwrap();
    }
    s
}

/// Parses the `"p/q"` (or `"p"`) wire format back into a rational.
pub fn parse_rational(input: &str) -> Result<Rational, ArithError> {
    let err = || ArithError::RationalParse {
        input: input.to_string(),
    };
    let (p, q) = match input.split_once('/') {
        Some((p, q)) => (p, q),
        None => (input, "1"),
    };
    let p: BigInt = p.trim().parse().map_err(|_| err())?;
    let q: BigInt = q.trim().parse().map_err(|_| err())?;
    if q.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(p, q))
}

pub(crate) fn binomial_int(n: u64, k: u64) -> BigInt {
    debug_assert!(k <= n);
    // C(n, k) = prod_{i=1..k} (n-k+i)/i, integral at every step.
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 1..=k {
        acc = acc * BigInt::from(n - k + i) / BigInt::from(i);
    }
    acc
}

/// Binomial coefficient C(n, k) as an exact rational.
pub fn binomial(n: u64, k: u64) -> Result<Rational, ArithError> {
    if k > n {
        return Err(ArithError::BinomialOutOfRange { n, k });
    }
    Ok(Rational::from_integer(binomial_int(n, k)))
}

/// Monotone table of Bernoulli numbers under the convention B_1 = -1/2
/// (generating function t/(e^t - 1)).
///
/// Entries are filled by the defining recurrence
/// `sum_{k=0}^{n} C(n+1, k) B_k = 0` and never recomputed.
#[derive(Debug, Default)]
pub struct BernoulliTable {
    values: Vec<Rational>,
}

impl BernoulliTable {
    pub fn new() -> Self {
        Self { values: Vec::new() }
    }

    /// B_n, extending the table as needed.
    pub fn get(&mut self, n: usize) -> Rational {
        while self.values.len() <= n {
            let m = self.values.len();
            let value = if m == 0 {
                Rational::one()
            } else {
                // B_m = -1/(m+1) * sum_{k=0}^{m-1} C(m+1, k) B_k
                let mut acc = Rational::zero();
                for (k, b) in self.values.iter().enumerate() {
                    acc += Rational::from_integer(binomial_int(m as u64 + 1, k as u64)) * b;
                }
                -acc / rat(m as i64 + 1)
            };
            self.values.push(value);
        }
        self.values[n].clone()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

static BERNOULLI: Lazy<Mutex<BernoulliTable>> = Lazy::new(|| Mutex::new(BernoulliTable::new()));

/// B_n from the shared process-wide table (B_1 = -1/2).
pub fn bernoulli(n: usize) -> Rational {
    BERNOULLI.lock().unwrap().get(n)
}

/// The analytic value zeta(-n) for n >= 0.
///
/// zeta(0) = -1/2; for n >= 1, zeta(-n) = -B_{n+1}/(n+1), which vanishes at
/// even n >= 2 (trivial zeros). Note that blindly substituting n = 0 into the
/// Bernoulli formula would give +1/2 under the B_1 = -1/2 convention; the
/// analytic value is what every recurrence in this crate consumes.
pub fn zeta_nonpositive(n: usize) -> Rational {
    if n == 0 {
        ratio(-1, 2)
    } else {
        -bernoulli(n + 1) / rat(n as i64 + 1)
    }
}
