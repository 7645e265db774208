//! Integer argument tuples and the singularity classification.
//!
//! A depth-r integer point is singular exactly when one of the following
//! holds, and regular otherwise:
//!   (a) the last entry is 1;
//!   (b) the sum of the last two entries lies in {2, 1, 0} or is an even
//!       negative integer;
//!   (c) for some k in 3..=r, the sum of the last k entries is <= k.
//! The scan order (a), (b), then (c) with increasing k fixes which witness a
//! singular verdict reports.

use std::fmt;

/// An integer argument tuple (n_1, ..., n_r), r >= 1.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexPoint(Vec<i64>);

impl IndexPoint {
    pub fn new(entries: Vec<i64>) -> Self {
        assert!(!entries.is_empty(), "an index point has depth at least 1");
        IndexPoint(entries)
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Display for IndexPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (pos, n) in self.0.iter().enumerate() {
            if pos > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for IndexPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Which singularity condition fired.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SingularCondition {
    /// (a): last entry equals 1.
    LastEntryOne,
    /// (b): the trailing pair sum is in {2, 1, 0} or even negative.
    TrailingPairSum,
    /// (c): a trailing k-sum is <= k for some k >= 3.
    TrailingPartialSum,
}

impl SingularCondition {
    pub fn code(self) -> char {
        match self {
            SingularCondition::LastEntryOne => 'a',
            SingularCondition::TrailingPairSum => 'b',
            SingularCondition::TrailingPartialSum => 'c',
        }
    }
}

/// The first violated singularity condition in scan order, with the number
/// of trailing entries it involves.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SingularityWitness {
    pub condition: SingularCondition,
    pub k: usize,
}

impl fmt::Display for SingularityWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "condition ({}) with k = {}", self.condition.code(), self.k)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RegularityVerdict {
    Regular,
    Singular(SingularityWitness),
}

impl RegularityVerdict {
    pub fn is_regular(&self) -> bool {
        matches!(self, RegularityVerdict::Regular)
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            RegularityVerdict::Regular => serde_json::json!({ "status": "regular" }),
            RegularityVerdict::Singular(w) => serde_json::json!({
                "status": "singular",
                "condition": w.condition.code().to_string(),
                "k": w.k,
            }),
        }
    }
}

impl fmt::Display for RegularityVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegularityVerdict::Regular => write!(f, "regular"),
            RegularityVerdict::Singular(w) => write!(f, "singular, {w}"),
        }
    }
}

/// Classifies an integer point against the singularity set.
pub fn classify(p: &IndexPoint) -> RegularityVerdict {
    let e = p.entries();
    let r = e.len();
    if e[r - 1] == 1 {
        return RegularityVerdict::Singular(SingularityWitness {
            condition: SingularCondition::LastEntryOne,
            k: 1,
        });
    }
    if r >= 2 {
        let s = e[r - 2] + e[r - 1];
        if matches!(s, 0..=2) || (s <= -2 && s % 2 == 0) {
            return RegularityVerdict::Singular(SingularityWitness {
                condition: SingularCondition::TrailingPairSum,
                k: 2,
            });
        }
    }
    let mut tail_sum: i64 = if r >= 2 { e[r - 2] + e[r - 1] } else { e[r - 1] };
    for k in 3..=r {
        tail_sum += e[r - k];
        if tail_sum <= k as i64 {
            return RegularityVerdict::Singular(SingularityWitness {
                condition: SingularCondition::TrailingPartialSum,
                k,
            });
        }
    }
    RegularityVerdict::Regular
}

/// True when every entry is >= 1 and the last is >= 2, i.e. the point names
/// a convergent multiple zeta value.
pub fn is_admissible_mzv(p: &IndexPoint) -> bool {
    let e = p.entries();
    e.iter().all(|&n| n >= 1) && e[e.len() - 1] >= 2
}

/// (count, sum) of the strictly positive entries; (0, 0) when there are none.
pub fn positive_part_stats(p: &IndexPoint) -> (usize, i64) {
    let mut depth = 0;
    let mut weight = 0;
    for &n in p.entries() {
        if n > 0 {
            depth += 1;
            weight += n;
        }
    }
    (depth, weight)
}

/// Regularity for depth 2 as stated directly: n2 != 1 and n1+n2 either > 2
/// or a negative odd integer. Used as an oracle against `classify`.
pub fn depth2_regular_condition(n1: i64, n2: i64) -> bool {
    let s = n1 + n2;
    n2 != 1 && (s > 2 || (s < 0 && s % 2 != 0))
}

/// Regularity for depth 3 as stated directly: n3 != 1, n2+n3 > 2 or negative
/// odd, and n1+n2+n3 > 3. Used as an oracle against `classify`.
pub fn depth3_regular_condition(n1: i64, n2: i64, n3: i64) -> bool {
    let s23 = n2 + n3;
    n3 != 1 && (s23 > 2 || (s23 < 0 && s23 % 2 != 0)) && (n1 + n2 + n3 > 3)
}
