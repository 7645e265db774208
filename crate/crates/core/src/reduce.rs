//! Recursive reduction of multiple zeta function values at regular integer
//! points to exact rational combinations of admissible multiple zeta values.
//!
//! The engine applies one recurrence step at a chosen non-positive coordinate
//! ("pivot") j of a depth-r point, producing depth-(r-1) child points with
//! exact rational multipliers:
//!
//!   - a left boundary child  (j >= 2):  -1/(m+1), neighbor n_{j-1} - m - 1
//!   - a right boundary child (j <= r-1): +1/(m+1), neighbor n_{j+1} - m - 1
//!   - left sum children  (j >= 2):  +C(m,k) zeta(-k), neighbor n_{j-1} - m + k
//!   - right sum children (j <= r-1): -C(m,k) zeta(-k), neighbor n_{j+1} - m + k
//!   - the product child (j = 1 < r): zeta(n_1) times the remaining tail
//!   - the merge child (j <= r-1): -1, neighbor n_{j+1} - m
//!
//! with m = -n_j >= 0 and k = 0..=m. Multipliers are computed before any
//! recursion and zero multipliers prune the child entirely; this is what
//! keeps the recursion away from singular sub-points. A child that is
//! singular *and* carries a nonzero multiplier is a contract violation and
//! aborts the reduction.
//!
//! Closed forms for depths 2 and 3 are provided as independent oracles, as is
//! the depth/weight bound check on the output and the stuffle expansion of a
//! product of two zeta values.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::arith::{binomial_int, format_rational, parse_rational, rat, ratio, zeta_nonpositive, Rational};
use crate::index::{classify, positive_part_stats, IndexPoint, RegularityVerdict, SingularityWitness};
use crate::stuffle::{harmonic_product, HPoly, LinearForm, Word};

/// An admissible multiple zeta index: positive entries with last entry >= 2,
/// or the empty index standing for the rational unit.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MzvIndex(Vec<i64>);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("not an admissible multiple zeta index: {0:?}")]
pub struct InvalidMzvIndex(pub Vec<i64>);

impl MzvIndex {
    pub fn empty() -> Self {
        MzvIndex(Vec::new())
    }

    pub fn new(entries: Vec<i64>) -> Result<Self, InvalidMzvIndex> {
        if let Some(last) = entries.last() {
            if *last < 2 || entries.iter().any(|&n| n < 1) {
                return Err(InvalidMzvIndex(entries));
            }
        }
        Ok(MzvIndex(entries))
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn weight(&self) -> i64 {
        self.0.iter().sum()
    }
}

impl fmt::Display for MzvIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "zeta()");
        }
        write!(f, "zeta(")?;
        for (pos, n) in self.0.iter().enumerate() {
            if pos > 0 {
                write!(f, ",")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for MzvIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A finite rational combination of admissible multiple zeta values, in
/// canonical form (no zero coefficients, indices ordered lexicographically
/// with the empty index first).
#[derive(Clone, PartialEq, Eq, Default)]
pub struct MzvCombination(BTreeMap<MzvIndex, Rational>);

impl MzvCombination {
    pub fn zero() -> Self {
        MzvCombination(BTreeMap::new())
    }

    /// The rational `q` as a combination (coefficient of the empty index).
    pub fn constant(q: Rational) -> Self {
        let mut c = Self::zero();
        c.add_term(MzvIndex::empty(), q);
        c
    }

    pub fn single(index: MzvIndex) -> Self {
        let mut c = Self::zero();
        c.add_term(index, rat(1));
        c
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of stored terms.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MzvIndex, &Rational)> {
        self.0.iter()
    }

    pub fn coefficient(&self, index: &MzvIndex) -> Rational {
        self.0.get(index).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, index: MzvIndex, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.0.entry(index) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &MzvCombination, scale: &Rational) {
        if scale.is_zero() {
            return;
        }
        for (i, c) in &other.0 {
            self.add_term(i.clone(), c * scale);
        }
    }

    pub fn scale(&self, scale: &Rational) -> MzvCombination {
        let mut out = Self::zero();
        out.add_scaled(self, scale);
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .0
            .iter()
            .map(|(i, c)| {
                serde_json::json!({
                    "index": i.entries(),
                    "coeff": format_rational(c),
                })
            })
            .collect();
        serde_json::json!({ "terms": terms })
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self, CombinationParseError> {
        let terms = value
            .get("terms")
            .and_then(|t| t.as_array())
            .ok_or(CombinationParseError::Shape)?;
        let mut out = Self::zero();
        for term in terms {
            let index = term
                .get("index")
                .and_then(|i| i.as_array())
                .ok_or(CombinationParseError::Shape)?
                .iter()
                .map(|n| n.as_i64().ok_or(CombinationParseError::Shape))
                .collect::<Result<Vec<i64>, _>>()?;
            let coeff = term
                .get("coeff")
                .and_then(|c| c.as_str())
                .ok_or(CombinationParseError::Shape)?;
            let index = MzvIndex::new(index)?;
            let coeff = parse_rational(coeff)?;
            out.add_term(index, coeff);
        }
        Ok(out)
    }

    /// LaTeX rendering such as `\frac{1}{6} + \frac{1}{120}\zeta(2)`.
    pub fn to_latex(&self) -> String {
        self.render(
            |q| {
                if q.denom().is_one() {
                    format!("{}", q.numer())
                } else {
                    format!("\\frac{{{}}}{{{}}}", q.numer(), q.denom())
                }
            },
            |i| {
                let args: Vec<String> = i.entries().iter().map(|n| n.to_string()).collect();
                format!("\\zeta({})", args.join(","))
            },
            "",
        )
    }

    /// Plain-text rendering such as `1/6 + 1/120*zeta(2)`.
    pub fn to_plain(&self) -> String {
        self.render(
            format_rational,
            |i| {
                let args: Vec<String> = i.entries().iter().map(|n| n.to_string()).collect();
                format!("zeta({})", args.join(","))
            },
            "*",
        )
    }

    fn render(
        &self,
        coeff_fmt: impl Fn(&Rational) -> String,
        symbol_fmt: impl Fn(&MzvIndex) -> String,
        product_sep: &str,
    ) -> String {
        if self.0.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (pos, (index, coeff)) in self.0.iter().enumerate() {
            let negative = coeff.is_negative();
            let magnitude = coeff.abs();
            if pos == 0 {
                if negative {
                    out.push('-');
                }
            } else if negative {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            if index.is_empty() {
                out.push_str(&coeff_fmt(&magnitude));
            } else if magnitude.is_one() {
                out.push_str(&symbol_fmt(index));
            } else {
                out.push_str(&coeff_fmt(&magnitude));
                out.push_str(product_sep);
                out.push_str(&symbol_fmt(index));
            }
        }
        out
    }
}

impl fmt::Display for MzvCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_plain())
    }
}

impl fmt::Debug for MzvCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_plain())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CombinationParseError {
    #[error("combination JSON must be {{\"terms\": [{{\"index\": [...], \"coeff\": \"p/q\"}}]}}")]
    Shape,
    #[error(transparent)]
    Index(#[from] InvalidMzvIndex),
    #[error(transparent)]
    Coeff(#[from] crate::arith::ArithError),
}

/// Which non-positive coordinate the recurrence is applied at.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub enum PivotStrategy {
    /// The rightmost non-positive coordinate (default).
    #[default]
    Rightmost,
    /// The leftmost non-positive coordinate.
    Leftmost,
    /// The 1-based coordinate j, whenever it is in range and non-positive;
    /// falls back to the rightmost non-positive coordinate otherwise.
    Explicit(usize),
}

impl fmt::Display for PivotStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PivotStrategy::Rightmost => write!(f, "rightmost"),
            PivotStrategy::Leftmost => write!(f, "leftmost"),
            PivotStrategy::Explicit(j) => write!(f, "j={j}"),
        }
    }
}

impl std::str::FromStr for PivotStrategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "rightmost" => Ok(PivotStrategy::Rightmost),
            "leftmost" => Ok(PivotStrategy::Leftmost),
            _ => {
                if let Some(j) = s.strip_prefix("j=") {
                    let j: usize = j
                        .parse()
                        .map_err(|_| format!("invalid pivot coordinate in {s:?}"))?;
                    if j == 0 {
                        return Err("pivot coordinates are 1-based".to_string());
                    }
                    Ok(PivotStrategy::Explicit(j))
                } else {
                    Err(format!(
                        "unknown pivot strategy {s:?} (expected rightmost, leftmost or j=K)"
                    ))
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReduceError {
    #[error("cannot reduce singular point {point} ({witness})")]
    SingularInput {
        point: IndexPoint,
        witness: SingularityWitness,
    },
    #[error(
        "regularity violation: reducing {parent} at pivot {pivot} produced singular child {child} \
         ({witness}) with nonzero multiplier {multiplier}; path {ancestry:?}"
    )]
    RegularityViolation {
        parent: IndexPoint,
        pivot: usize,
        child: IndexPoint,
        multiplier: String,
        witness: SingularityWitness,
        ancestry: Vec<IndexPoint>,
    },
}

/// One expansion step of the recurrence at a point.
enum Node {
    /// All entries positive: the point itself is an admissible value.
    Admissible(MzvIndex),
    /// Depth 1 at a non-positive integer: an exact rational.
    DepthOneValue(Rational),
    /// A pivot step with the (child, multiplier) list; zero multipliers are
    /// already pruned.
    Pivot {
        j: usize,
        terms: Vec<(IndexPoint, Rational)>,
    },
}

fn choose_pivot(entries: &[i64], strategy: PivotStrategy) -> usize {
    let rightmost = || {
        entries
            .iter()
            .rposition(|&n| n <= 0)
            .expect("pivot requested on an all-positive point")
    };
    match strategy {
        PivotStrategy::Rightmost => rightmost(),
        PivotStrategy::Leftmost => entries
            .iter()
            .position(|&n| n <= 0)
            .expect("pivot requested on an all-positive point"),
        PivotStrategy::Explicit(j) => {
            if j >= 1 && j <= entries.len() && entries[j - 1] <= 0 {
                j - 1
            } else {
                rightmost()
            }
        }
    }
}

/// C(m, k) * zeta(-k) as an exact rational.
fn sum_multiplier(m: u64, k: u64) -> Rational {
    Rational::from_integer(binomial_int(m, k)) * zeta_nonpositive(k as usize)
}

/// Expands one recurrence step. The point must be regular.
fn expand(p: &IndexPoint, strategy: PivotStrategy) -> Node {
    let e = p.entries();
    let r = e.len();
    if e.iter().all(|&n| n >= 1) {
        let index = MzvIndex::new(e.to_vec())
            .expect("a regular all-positive point is an admissible index");
        return Node::Admissible(index);
    }
    if r == 1 {
        return Node::DepthOneValue(zeta_nonpositive((-e[0]) as usize));
    }

    let idx = choose_pivot(e, strategy);
    let m = (-e[idx]) as u64;
    let inv = ratio(1, m as i64 + 1);
    let child_with = |position: usize, value: i64| -> IndexPoint {
        let mut v = Vec::with_capacity(r - 1);
        v.extend_from_slice(&e[..idx]);
        v.extend_from_slice(&e[idx + 1..]);
        v[position] = value;
        IndexPoint::new(v)
    };

    let mut terms: Vec<(IndexPoint, Rational)> = Vec::new();
    let mut push = |point: IndexPoint, mult: Rational| {
        if !mult.is_zero() {
            terms.push((point, mult));
        }
    };

    if idx >= 1 {
        // boundary and sum terms acting on the left neighbor
        let base = e[idx - 1];
        push(child_with(idx - 1, base - m as i64 - 1), -inv.clone());
        for k in 0..=m {
            push(
                child_with(idx - 1, base - m as i64 + k as i64),
                sum_multiplier(m, k),
            );
        }
    }
    if idx + 1 < r {
        // boundary, sum and merge terms acting on the right neighbor; the
        // pivot slot collapses into position idx of the child
        let base = e[idx + 1];
        push(child_with(idx, base - m as i64 - 1), inv.clone());
        for k in 0..=m {
            push(
                child_with(idx, base - m as i64 + k as i64),
                -sum_multiplier(m, k),
            );
        }
        push(child_with(idx, base - m as i64), rat(-1));
    }
    if idx == 0 && r >= 2 {
        // product term: zeta(n_1) times the tail
        push(
            IndexPoint::new(e[1..].to_vec()),
            zeta_nonpositive(m as usize),
        );
    }

    Node::Pivot { j: idx + 1, terms }
}

/// One recorded term of a trace step.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum TraceTerm {
    /// A recursive child point.
    Child(IndexPoint),
    /// A terminal symbol contribution (admissible index or the empty index).
    Symbol(MzvIndex),
}

/// One expansion step of a reduction.
#[derive(Clone, PartialEq, Debug)]
pub struct TraceStep {
    pub point: IndexPoint,
    /// 1-based pivot coordinate; None on terminal steps.
    pub pivot: Option<usize>,
    pub terms: Vec<(TraceTerm, Rational)>,
}

/// The full expansion record of a top-level reduction: one step per distinct
/// point encountered, root first, in depth-first order.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct ReductionTrace {
    pub steps: Vec<TraceStep>,
}

impl ReductionTrace {
    /// Recombines the trace multipliers into the output combination.
    pub fn replay(&self) -> MzvCombination {
        let by_point: HashMap<&[i64], &TraceStep> = self
            .steps
            .iter()
            .map(|s| (s.point.entries(), s))
            .collect();
        let mut memo: HashMap<Vec<i64>, MzvCombination> = HashMap::new();
        fn eval(
            entries: &[i64],
            by_point: &HashMap<&[i64], &TraceStep>,
            memo: &mut HashMap<Vec<i64>, MzvCombination>,
        ) -> MzvCombination {
            if let Some(hit) = memo.get(entries) {
                return hit.clone();
            }
            let step = by_point
                .get(entries)
                .unwrap_or_else(|| panic!("trace is missing a step for {entries:?}"));
            let mut acc = MzvCombination::zero();
            for (term, mult) in &step.terms {
                match term {
                    TraceTerm::Symbol(index) => acc.add_term(index.clone(), mult.clone()),
                    TraceTerm::Child(child) => {
                        let sub = eval(child.entries(), by_point, memo);
                        acc.add_scaled(&sub, mult);
                    }
                }
            }
            memo.insert(entries.to_vec(), acc.clone());
            acc
        }
        match self.steps.first() {
            None => MzvCombination::zero(),
            Some(root) => eval(root.point.entries(), &by_point, &mut memo),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let steps: Vec<serde_json::Value> = self
            .steps
            .iter()
            .map(|s| {
                let terms: Vec<serde_json::Value> = s
                    .terms
                    .iter()
                    .map(|(t, c)| match t {
                        TraceTerm::Child(p) => serde_json::json!({
                            "child": p.entries(),
                            "coeff": format_rational(c),
                        }),
                        TraceTerm::Symbol(i) => serde_json::json!({
                            "symbol": i.entries(),
                            "coeff": format_rational(c),
                        }),
                    })
                    .collect();
                serde_json::json!({
                    "point": s.point.entries(),
                    "pivot": s.pivot,
                    "terms": terms,
                })
            })
            .collect();
        serde_json::json!({ "steps": steps })
    }
}

/// The reduction engine. Results are memoized per (point, strategy); traces
/// are assembled per top-level call only.
#[derive(Default)]
pub struct Reducer {
    memo: HashMap<(Vec<i64>, PivotStrategy), MzvCombination>,
}

impl Reducer {
    pub fn new() -> Self {
        Self::default()
    }

    /// Reduces a regular integer point to a combination of admissible
    /// multiple zeta values.
    pub fn reduce(
        &mut self,
        p: &IndexPoint,
        strategy: PivotStrategy,
    ) -> Result<MzvCombination, ReduceError> {
        self.check_regular(p)?;
        let mut ancestry = Vec::new();
        self.reduce_inner(p, strategy, &mut ancestry)
    }

    /// Like [`reduce`](Self::reduce), also returning the expansion trace.
    pub fn reduce_traced(
        &mut self,
        p: &IndexPoint,
        strategy: PivotStrategy,
    ) -> Result<(MzvCombination, ReductionTrace), ReduceError> {
        let combination = self.reduce(p, strategy)?;
        // The value pass above has validated every reachable expansion, so
        // the trace pass can re-expand without error handling.
        let mut steps = Vec::new();
        let mut seen = HashSet::new();
        trace_visit(p, strategy, &mut steps, &mut seen);
        Ok((combination, ReductionTrace { steps }))
    }

    fn check_regular(&self, p: &IndexPoint) -> Result<(), ReduceError> {
        match classify(p) {
            RegularityVerdict::Regular => Ok(()),
            RegularityVerdict::Singular(witness) => Err(ReduceError::SingularInput {
                point: p.clone(),
                witness,
            }),
        }
    }

    fn reduce_inner(
        &mut self,
        p: &IndexPoint,
        strategy: PivotStrategy,
        ancestry: &mut Vec<IndexPoint>,
    ) -> Result<MzvCombination, ReduceError> {
        let key = (p.entries().to_vec(), strategy);
        if let Some(hit) = self.memo.get(&key) {
            return Ok(hit.clone());
        }
        let combination = match expand(p, strategy) {
            Node::Admissible(index) => MzvCombination::single(index),
            Node::DepthOneValue(q) => MzvCombination::constant(q),
            Node::Pivot { j, terms } => {
                let mut acc = MzvCombination::zero();
                ancestry.push(p.clone());
                for (child, mult) in terms {
                    if let RegularityVerdict::Singular(witness) = classify(&child) {
                        return Err(ReduceError::RegularityViolation {
                            parent: p.clone(),
                            pivot: j,
                            child,
                            multiplier: format_rational(&mult),
                            witness,
                            ancestry: ancestry.clone(),
                        });
                    }
                    let sub = self.reduce_inner(&child, strategy, ancestry)?;
                    acc.add_scaled(&sub, &mult);
                }
                ancestry.pop();
                acc
            }
        };
        self.memo.insert(key, combination.clone());
        Ok(combination)
    }
}

fn trace_visit(
    p: &IndexPoint,
    strategy: PivotStrategy,
    steps: &mut Vec<TraceStep>,
    seen: &mut HashSet<Vec<i64>>,
) {
    if !seen.insert(p.entries().to_vec()) {
        return;
    }
    match expand(p, strategy) {
        Node::Admissible(index) => steps.push(TraceStep {
            point: p.clone(),
            pivot: None,
            terms: vec![(TraceTerm::Symbol(index), rat(1))],
        }),
        Node::DepthOneValue(q) => {
            let terms = if q.is_zero() {
                Vec::new()
            } else {
                vec![(TraceTerm::Symbol(MzvIndex::empty()), q)]
            };
            steps.push(TraceStep {
                point: p.clone(),
                pivot: None,
                terms,
            });
        }
        Node::Pivot { j, terms } => {
            let children: Vec<IndexPoint> = terms.iter().map(|(c, _)| c.clone()).collect();
            steps.push(TraceStep {
                point: p.clone(),
                pivot: Some(j),
                terms: terms
                    .into_iter()
                    .map(|(c, q)| (TraceTerm::Child(c), q))
                    .collect(),
            });
            for child in &children {
                trace_visit(child, strategy, steps, seen);
            }
        }
    }
}

/// zeta at a depth-1 integer argument, as a combination: a symbol for
/// n >= 2, an exact rational for n <= 0. The argument 1 is the pole; a
/// caller reaching it with a nonzero multiplier reports the violation.
fn zeta1(n: i64) -> Option<MzvCombination> {
    if n == 1 {
        return None;
    }
    Some(if n >= 2 {
        MzvCombination::single(MzvIndex::new(vec![n]).unwrap())
    } else {
        MzvCombination::constant(zeta_nonpositive((-n) as usize))
    })
}

fn violation(parent: &IndexPoint, pivot: usize, child: IndexPoint, mult: &Rational) -> ReduceError {
    let witness = match classify(&child) {
        RegularityVerdict::Singular(w) => w,
        RegularityVerdict::Regular => unreachable!("violation reported on a regular child"),
    };
    ReduceError::RegularityViolation {
        parent: parent.clone(),
        pivot,
        child,
        multiplier: format_rational(mult),
        witness,
        ancestry: vec![parent.clone()],
    }
}

/// Depth-2 closed form, dispatching on the sign pattern of (n1, n2):
///
///   (i)   both positive: the double zeta value itself;
///   (ii)  n1 >= 1, n2 <= 0, with m = -n2:
///         -1/(m+1) zeta(n1+n2-1) + sum_k C(m,k) zeta(-k) zeta(n1+n2+k);
///   (iii) n1 <= 0, n2 >= 2, with m = -n1:
///         +1/(m+1) zeta(n1+n2-1) - sum_k C(m,k) zeta(-k) zeta(n1+n2+k)
///         + zeta(n1) zeta(n2) - zeta(n1+n2);
///   (iv)  both <= 0, n1 != 0: -1/2 zeta(n1+n2) (an exact rational);
///   (v)   n1 = 0, n2 <= 0: -zeta(n2) (an exact rational; note the sign —
///         the deconcatenation count gives zeta_2(0, s) = zeta(s-1) - zeta(s),
///         and zeta(n2-1) vanishes at these regular points).
pub fn closed_form_depth2(n1: i64, n2: i64) -> Result<MzvCombination, ReduceError> {
    let p = IndexPoint::new(vec![n1, n2]);
    if let RegularityVerdict::Singular(witness) = classify(&p) {
        return Err(ReduceError::SingularInput { point: p, witness });
    }

    if n1 >= 1 && n2 >= 1 {
        return Ok(MzvCombination::single(
            MzvIndex::new(vec![n1, n2]).expect("regular all-positive depth-2 point"),
        ));
    }

    let mut acc = MzvCombination::zero();
    let mut add = |coeff: Rational, arg: i64, pivot: usize| -> Result<(), ReduceError> {
        if coeff.is_zero() {
            return Ok(());
        }
        let inner = zeta1(arg)
            .ok_or_else(|| violation(&p, pivot, IndexPoint::new(vec![arg]), &coeff))?;
        acc.add_scaled(&inner, &coeff);
        Ok(())
    };

    if n1 >= 1 {
        // (ii): pivot at the second coordinate
        let m = (-n2) as u64;
        add(-ratio(1, m as i64 + 1), n1 + n2 - 1, 2)?;
        for k in 0..=m {
            add(sum_multiplier(m, k), n1 + n2 + k as i64, 2)?;
        }
    } else if n2 >= 1 {
        // (iii): pivot at the first coordinate
        let m = (-n1) as u64;
        add(ratio(1, m as i64 + 1), n1 + n2 - 1, 1)?;
        for k in 0..=m {
            add(-sum_multiplier(m, k), n1 + n2 + k as i64, 1)?;
        }
        add(zeta_nonpositive(m as usize), n2, 1)?;
        add(rat(-1), n1 + n2, 1)?;
    } else if n1 == 0 {
        // (v): zeta_2(0, n2) = zeta(n2-1) - zeta(n2) with zeta(n2-1) = 0 here
        acc.add_term(MzvIndex::empty(), -zeta_nonpositive((-n2) as usize));
    } else {
        // (iv), which also covers n2 = 0
        acc.add_term(
            MzvIndex::empty(),
            ratio(-1, 2) * zeta_nonpositive((-(n1 + n2)) as usize),
        );
    }
    Ok(acc)
}

/// Depth-3 closed form, dispatching on the sign pattern of (n1, n2, n3).
/// Each case applies one recurrence step at the pivot the pattern calls for
/// (last, middle, or first coordinate) and resolves the resulting depth-2
/// values through [`closed_form_depth2`]:
///
///   (i)             all positive: the triple zeta value itself;
///   (ii), (v), (vi) last coordinate non-positive: pivot j = 3;
///   (iii)           (+, -, +): pivot j = 2;
///   (iv), (vii)     first coordinate non-positive, last positive: pivot j = 1.
pub fn closed_form_depth3(n1: i64, n2: i64, n3: i64) -> Result<MzvCombination, ReduceError> {
    let p = IndexPoint::new(vec![n1, n2, n3]);
    if let RegularityVerdict::Singular(witness) = classify(&p) {
        return Err(ReduceError::SingularInput { point: p, witness });
    }

    if n1 >= 1 && n2 >= 1 && n3 >= 1 {
        return Ok(MzvCombination::single(
            MzvIndex::new(vec![n1, n2, n3]).expect("regular all-positive depth-3 point"),
        ));
    }

    let mut acc = MzvCombination::zero();
    let mut add = |coeff: Rational, a: i64, b: i64, pivot: usize| -> Result<(), ReduceError> {
        if coeff.is_zero() {
            return Ok(());
        }
        let inner = closed_form_depth2(a, b).map_err(|e| match e {
            ReduceError::SingularInput { point, .. } => violation(&p, pivot, point, &coeff),
            other => other,
        })?;
        acc.add_scaled(&inner, &coeff);
        Ok(())
    };

    if n3 <= 0 {
        // cases (ii), (v), (vi): pivot at the last coordinate
        let m = (-n3) as u64;
        add(-ratio(1, m as i64 + 1), n1, n2 + n3 - 1, 3)?;
        for k in 0..=m {
            add(sum_multiplier(m, k), n1, n2 + n3 + k as i64, 3)?;
        }
    } else if n2 <= 0 {
        if n1 >= 1 {
            // case (iii): pivot at the middle coordinate
            let m = (-n2) as u64;
            add(-ratio(1, m as i64 + 1), n1 + n2 - 1, n3, 2)?;
            add(ratio(1, m as i64 + 1), n1, n2 + n3 - 1, 2)?;
            for k in 0..=m {
                add(sum_multiplier(m, k), n1 + n2 + k as i64, n3, 2)?;
                add(-sum_multiplier(m, k), n1, n2 + n3 + k as i64, 2)?;
            }
            add(rat(-1), n1, n2 + n3, 2)?;
        } else {
            // case (vii): pivot at the first coordinate
            let m = (-n1) as u64;
            add(ratio(1, m as i64 + 1), n1 + n2 - 1, n3, 1)?;
            for k in 0..=m {
                add(-sum_multiplier(m, k), n1 + n2 + k as i64, n3, 1)?;
            }
            add(zeta_nonpositive(m as usize), n2, n3, 1)?;
            add(rat(-1), n1 + n2, n3, 1)?;
        }
    } else {
        // case (iv): pivot at the first coordinate
        let m = (-n1) as u64;
        add(ratio(1, m as i64 + 1), n1 + n2 - 1, n3, 1)?;
        for k in 0..=m {
            add(-sum_multiplier(m, k), n1 + n2 + k as i64, n3, 1)?;
        }
        add(zeta_nonpositive(m as usize), n2, n3, 1)?;
        add(rat(-1), n1 + n2, n3, 1)?;
    }
    Ok(acc)
}

/// Checks the depth/weight bound: every index of `c` must have depth at most
/// the number of positive entries of `p` and weight at most their sum.
pub fn bound_check(p: &IndexPoint, c: &MzvCombination) -> bool {
    let (depth, weight) = positive_part_stats(p);
    c.terms()
        .all(|(i, _)| i.depth() <= depth && i.weight() <= weight)
}

fn index_to_word(index: &MzvIndex) -> Word {
    Word::new(
        index
            .entries()
            .iter()
            .map(|&n| LinearForm::scaled(1, n as u32))
            .collect(),
    )
}

fn word_to_index(word: &Word) -> MzvIndex {
    let entries: Vec<i64> = word
        .letters()
        .iter()
        .map(|letter| {
            let mut coeffs = letter.coefficients();
            let (var, a) = coeffs.next().expect("letters are nonempty");
            debug_assert!(var == 1 && coeffs.next().is_none());
            a as i64
        })
        .collect();
    MzvIndex::new(entries).expect("stuffle of admissible indices stays admissible")
}

/// Expands the product zeta(a) * zeta(b) of two admissible values as a
/// combination of admissible values, via the harmonic product on words with
/// concrete positive-integer letters.
pub fn stuffle_expand(a: &MzvIndex, b: &MzvIndex) -> MzvCombination {
    let product = harmonic_product(
        &HPoly::from_word(index_to_word(a)),
        &HPoly::from_word(index_to_word(b)),
    );
    let mut out = MzvCombination::zero();
    for (word, coeff) in product.terms() {
        out.add_term(word_to_index(word), coeff.clone());
    }
    out
}
