//! The harmonic (stuffle) algebra on words of formal linear forms.
//!
//! Letters are non-negative integer combinations of formal variables s_i with
//! positive total weight; words are finite sequences of letters; polynomials
//! are Q-linear combinations of words. On top of the harmonic product the
//! module provides the deconcatenation coproduct, the antipode (a signed sum
//! of reversed block-weight words), and the word identities used to validate
//! the whole structure: the antipode convolution identity, the telescoping
//! word sum, and the general product expansion.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::arith::{rat, Rational};

/// A letter: a finite sum `a_1 s_{i_1} + ... + a_k s_{i_k}` with all `a_j > 0`
/// and at least one term. Addition of letters adds coefficients pointwise.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinearForm(BTreeMap<u32, u32>);

impl LinearForm {
    /// The variable s_i.
    pub fn var(i: u32) -> Self {
        Self::scaled(i, 1)
    }

    /// The letter a * s_i, a >= 1.
    pub fn scaled(i: u32, a: u32) -> Self {
        assert!(a > 0, "letter coefficients must be positive");
        let mut m = BTreeMap::new();
        m.insert(i, a);
        LinearForm(m)
    }

    /// Builds a letter from (variable, coefficient) pairs; zero coefficients
    /// are dropped and the result must be nonempty.
    pub fn from_pairs<I: IntoIterator<Item = (u32, u32)>>(pairs: I) -> Self {
        let mut m = BTreeMap::new();
        for (i, a) in pairs {
            if a > 0 {
                *m.entry(i).or_insert(0) += a;
            }
        }
        assert!(!m.is_empty(), "a linear form needs positive total weight");
        LinearForm(m)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut m = self.0.clone();
        for (i, a) in &other.0 {
            *m.entry(*i).or_insert(0) += a;
        }
        LinearForm(m)
    }

    pub fn coefficients(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.0.iter().map(|(i, a)| (*i, *a))
    }

    /// Total weight, i.e. the sum of all coefficients.
    pub fn total(&self) -> u32 {
        self.0.values().sum()
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (pos, (i, a)) in self.0.iter().enumerate() {
            if pos > 0 {
                write!(f, "+")?;
            }
            if *a == 1 {
                write!(f, "s{i}")?;
            } else {
                write!(f, "{a}s{i}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A word: a finite, possibly empty sequence of letters. The empty word is
/// the unit of the harmonic product.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(Vec<LinearForm>);

impl Word {
    pub fn unit() -> Self {
        Word(Vec::new())
    }

    pub fn new(letters: Vec<LinearForm>) -> Self {
        Word(letters)
    }

    pub fn single(letter: LinearForm) -> Self {
        Word(vec![letter])
    }

    /// Word length l(w); zero for the unit.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[LinearForm] {
        &self.0
    }

    /// Total weight |w|, the sum of all letters; None for the unit word.
    pub fn weight(&self) -> Option<LinearForm> {
        let (first, rest) = self.0.split_first()?;
        Some(rest.iter().fold(first.clone(), |acc, l| acc.add(l)))
    }

    pub fn rev(&self) -> Self {
        Word(self.0.iter().rev().cloned().collect())
    }

    pub fn appended(&self, letter: &LinearForm) -> Self {
        let mut v = self.0.clone();
        v.push(letter.clone());
        Word(v)
    }

    pub fn concat(&self, other: &Word) -> Self {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        Word(v)
    }

    fn split_last(&self) -> Option<(Word, &LinearForm)> {
        let (last, init) = self.0.split_last()?;
        Some((Word(init.to_vec()), last))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        write!(f, "(")?;
        for (pos, l) in self.0.iter().enumerate() {
            if pos > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A Q-linear combination of words in canonical form: zero coefficients are
/// never stored, so equality is plain map equality.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct HPoly(BTreeMap<Word, Rational>);

impl HPoly {
    pub fn zero() -> Self {
        HPoly(BTreeMap::new())
    }

    /// The unit word with coefficient 1.
    pub fn unit() -> Self {
        HPoly::from_word(Word::unit())
    }

    pub fn from_word(w: Word) -> Self {
        let mut m = BTreeMap::new();
        m.insert(w, rat(1));
        HPoly(m)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Rational)> {
        self.0.iter()
    }

    pub fn coefficient(&self, w: &Word) -> Rational {
        self.0.get(w).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, w: Word, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.0.entry(w);
        match entry {
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

    pub fn add(&self, other: &HPoly) -> HPoly {
        let mut out = self.clone();
        for (w, c) in &other.0 {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn add_scaled(&mut self, other: &HPoly, scale: &Rational) {
        if scale.is_zero() {
            return;
        }
        for (w, c) in &other.0 {
            self.add_term(w.clone(), c * scale);
        }
    }

    pub fn scale(&self, scale: &Rational) -> HPoly {
        let mut out = HPoly::zero();
        out.add_scaled(self, scale);
        out
    }

    pub fn neg(&self) -> HPoly {
        self.scale(&rat(-1))
    }

    /// Appends a letter to every word of the polynomial.
    pub fn append_letter(&self, letter: &LinearForm) -> HPoly {
        let mut out = HPoly::zero();
        for (w, c) in &self.0 {
            out.add_term(w.appended(letter), c.clone());
        }
        out
    }
}

impl fmt::Display for HPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        for (pos, (w, c)) in self.0.iter().enumerate() {
            if pos > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}*{w}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for HPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A Q-linear combination of word pairs, the codomain of the coproduct.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct TensorPoly(BTreeMap<(Word, Word), Rational>);

impl TensorPoly {
    pub fn zero() -> Self {
        TensorPoly(BTreeMap::new())
    }

    pub fn add_term(&mut self, left: Word, right: Word, c: Rational) {
        if c.is_zero() {
            return;
        }
        let key = (left, right);
        let total = self.0.get(&key).cloned().unwrap_or_else(Rational::zero) + c;
        if total.is_zero() {
            self.0.remove(&key);
        } else {
            self.0.insert(key, total);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Word, Word), &Rational)> {
        self.0.iter()
    }
}

fn word_product(w1: &Word, w2: &Word) -> HPoly {
    if w1.is_empty() {
        return HPoly::from_word(w2.clone());
    }
    if w2.is_empty() {
        return HPoly::from_word(w1.clone());
    }
    let (a, u1) = w1.split_last().unwrap();
    let (b, u2) = w2.split_last().unwrap();
    // (a, u1) * (b, u2) = ({a * (b,u2)}, u1) + ({(a,u1) * b}, u2) + ({a * b}, u1+u2)
    let mut acc = word_product(&a, w2).append_letter(u1);
    acc = acc.add(&word_product(w1, &b).append_letter(u2));
    acc = acc.add(&word_product(&a, &b).append_letter(&u1.add(u2)));
    acc
}

/// The harmonic product, extended bilinearly to polynomials.
pub fn harmonic_product(a: &HPoly, b: &HPoly) -> HPoly {
    let mut out = HPoly::zero();
    for (w1, c1) in a.terms() {
        for (w2, c2) in b.terms() {
            out.add_scaled(&word_product(w1, w2), &(c1 * c2));
        }
    }
    out
}

/// Deconcatenation coproduct: the sum of prefix (x) suffix over all l(w)+1
/// split positions, each with coefficient 1.
pub fn coproduct(w: &Word) -> TensorPoly {
    let mut out = TensorPoly::zero();
    for split in 0..=w.len() {
        let left = Word::new(w.letters()[..split].to_vec());
        let right = Word::new(w.letters()[split..].to_vec());
        out.add_term(left, right, rat(1));
    }
    out
}

/// All ordered decompositions of `w` into nonempty consecutive blocks, each
/// contributing the reversal of its block-weight word.
fn block_sum(w: &Word) -> HPoly {
    let l = w.len();
    debug_assert!(l >= 1);
    let mut out = HPoly::zero();
    // A composition is a subset of the l-1 interior cut positions.
    for mask in 0u64..(1 << (l - 1)) {
        let mut weights: Vec<LinearForm> = Vec::new();
        let mut current = w.letters()[0].clone();
        for pos in 1..l {
            if mask & (1 << (pos - 1)) != 0 {
                weights.push(current);
                current = w.letters()[pos].clone();
            } else {
                current = current.add(&w.letters()[pos]);
            }
        }
        weights.push(current);
        weights.reverse();
        out.add_term(Word::new(weights), rat(1));
    }
    out
}

/// The unsigned block sum f of the antipode identity: f(1) = 1, and for
/// nonempty words the sum of reversed block-weight words over all
/// decompositions, so that S(w) = (-1)^{l(w)} f(w).
pub fn f_map(w: &Word) -> HPoly {
    if w.is_empty() {
        return HPoly::unit();
    }
    block_sum(w)
}

/// The antipode S: S(1) = 1 and S(w) = (-1)^{l(w)} f(w) otherwise.
pub fn antipode(w: &Word) -> HPoly {
    if w.is_empty() {
        return HPoly::unit();
    }
    let sign = if w.len().is_multiple_of(2) { rat(1) } else { rat(-1) };
    block_sum(w).scale(&sign)
}

/// The Hopf convolution `* ∘ (S ⊗ id) ∘ Δ` applied to a word: equals 1 on
/// the unit word and the zero polynomial on every nonempty word.
pub fn hopf_defect(w: &Word) -> HPoly {
    let mut out = HPoly::zero();
    for ((left, right), c) in coproduct(w).terms() {
        let s_left = antipode(left);
        out.add_scaled(&harmonic_product(&s_left, &HPoly::from_word(right.clone())), c);
    }
    out
}

/// All 2^{n-1} words `(u_n •_n ... •_2 u_1)` obtained by choosing, between
/// each consecutive pair, either a comma (new letter) or a plus (merge).
/// `letters` is given in ascending subscript order u_1 ... u_n; the produced
/// words run from u_n down to u_1.
fn bullet_words(letters: &[LinearForm]) -> Vec<Word> {
    let n = letters.len();
    assert!(n >= 1);
    let mut out = Vec::with_capacity(1 << (n - 1));
    for mask in 0u64..(1 << (n - 1)) {
        let mut word: Vec<LinearForm> = Vec::new();
        let mut current = letters[n - 1].clone();
        for (t, next) in letters[..n - 1].iter().rev().enumerate() {
            if mask & (1 << t) != 0 {
                word.push(current);
                current = next.clone();
            } else {
                current = current.add(next);
            }
        }
        word.push(current);
        out.push(Word::new(word));
    }
    out
}

/// The telescoping word sum
/// `(u_1,...,u_r) + sum_{i=1}^{r} (-1)^i sum_bullets (u_i • ... • u_1) * (u_{i+1},...,u_r)`,
/// which is identically zero.
pub fn telescoped_word_sum(letters: &[LinearForm]) -> HPoly {
    assert!(!letters.is_empty());
    let r = letters.len();
    let mut acc = HPoly::from_word(Word::new(letters.to_vec()));
    for i in 1..=r {
        let sign = if i.is_multiple_of(2) { rat(1) } else { rat(-1) };
        let tail = HPoly::from_word(Word::new(letters[i..].to_vec()));
        for bw in bullet_words(&letters[..i]) {
            acc.add_scaled(&harmonic_product(&HPoly::from_word(bw), &tail), &sign);
        }
    }
    acc
}

/// Both sides of the product expansion
/// `(w,u) * (v_1,...,v_n) = (w,u,v_1,...,v_n) + (w,u+v_1,v_2,...,v_n)
/// + sum_{i=1}^{n} (-1)^{i-1} sum_bullets ({w * (v_i • ... • v_1)}, u) * (v_{i+1},...,v_n)`.
///
/// The two returned polynomials are equal.
pub fn prop_1_10_sides(w: &Word, u: &LinearForm, vs: &[LinearForm]) -> (HPoly, HPoly) {
    assert!(!vs.is_empty());
    let n = vs.len();
    let lhs = harmonic_product(
        &HPoly::from_word(w.appended(u)),
        &HPoly::from_word(Word::new(vs.to_vec())),
    );

    let mut rhs = HPoly::from_word(w.appended(u).concat(&Word::new(vs.to_vec())));
    let mut merged = w.appended(&u.add(&vs[0]));
    merged = merged.concat(&Word::new(vs[1..].to_vec()));
    rhs.add_term(merged, rat(1));
    let w_poly = HPoly::from_word(w.clone());
    for i in 1..=n {
        let sign = if i % 2 == 1 { rat(1) } else { rat(-1) };
        let tail = HPoly::from_word(Word::new(vs[i..].to_vec()));
        for bw in bullet_words(&vs[..i]) {
            let inner = harmonic_product(&w_poly, &HPoly::from_word(bw)).append_letter(u);
            rhs.add_scaled(&harmonic_product(&inner, &tail), &sign);
        }
    }
    (lhs, rhs)
}
