//! Exact arithmetic in free products of finitely generated abelian groups.
//!
//! Elements are kept in normal form as alternating syllable lists. Each
//! syllable lives in one factor; a factor is `Z^rank x Z/m_1 x ... x Z/m_k`
//! and its elements are coordinate vectors with the torsion part reduced.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// One abelian free factor: `Z^rank x Z/m_1 x ... x Z/m_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianFactor {
    pub rank: usize,
    pub torsion: Vec<u64>,
}

impl AbelianFactor {
    pub fn free(rank: usize) -> Self {
        AbelianFactor { rank, torsion: Vec::new() }
    }

    /// Coordinate vector length for elements of this factor.
    pub fn dims(&self) -> usize {
        self.rank + self.torsion.len()
    }

    /// Reduce torsion coordinates into `[0, m_i)`.
    fn canonicalize(&self, coords: &mut [BigInt]) {
        for (i, &m) in self.torsion.iter().enumerate() {
            let m = BigInt::from(m);
            let c = &mut coords[self.rank + i];
            *c = ((&*c % &m) + &m) % &m;
        }
    }
}

/// An ordered family of abelian factors; the index is the parabolic tag ω.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupSpec {
    pub factors: Vec<AbelianFactor>,
}

impl GroupSpec {
    pub fn new(factors: Vec<AbelianFactor>) -> Self {
        assert!(!factors.is_empty(), "at least one factor required");
        GroupSpec { factors }
    }

    pub fn factor(&self, omega: usize) -> Result<&AbelianFactor> {
        self.factors.get(omega).ok_or(Error::MalformedElement(omega))
    }
}

/// A maximal single-factor segment of a normal form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Syllable {
    pub factor: usize,
    pub coords: Vec<BigInt>,
}

impl Syllable {
    pub fn is_identity(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }
}

/// Group element in free-product normal form: no identity syllables and
/// adjacent syllables in distinct factors. The empty list is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GroupElement {
    pub syllables: Vec<Syllable>,
}

impl GroupElement {
    pub fn identity() -> Self {
        GroupElement { syllables: Vec::new() }
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Build a single-syllable element (or the identity) from raw coords.
    pub fn from_syllable(spec: &GroupSpec, omega: usize, coords: Vec<i64>) -> Result<Self> {
        let factor = spec.factor(omega)?;
        assert_eq!(coords.len(), factor.dims(), "coordinate length mismatch");
        let mut coords: Vec<BigInt> = coords.into_iter().map(BigInt::from).collect();
        factor.canonicalize(&mut coords);
        let syl = Syllable { factor: omega, coords };
        if syl.is_identity() {
            Ok(GroupElement::identity())
        } else {
            Ok(GroupElement { syllables: vec![syl] })
        }
    }

    /// Normal form of a raw syllable sequence: canonicalize, merge adjacent
    /// same-factor syllables and drop identities, cascading.
    pub fn from_syllables(spec: &GroupSpec, raw: Vec<Syllable>) -> Result<Self> {
        let mut out: Vec<Syllable> = Vec::with_capacity(raw.len());
        for mut syl in raw {
            let factor = spec.factor(syl.factor)?;
            if syl.coords.len() != factor.dims() {
                return Err(Error::MalformedElement(syl.factor));
            }
            factor.canonicalize(&mut syl.coords);
            push_merge(spec, &mut out, syl)?;
        }
        Ok(GroupElement { syllables: out })
    }

    pub fn syllable_count(&self) -> usize {
        self.syllables.len()
    }
}

fn push_merge(spec: &GroupSpec, out: &mut Vec<Syllable>, syl: Syllable) -> Result<()> {
    if syl.is_identity() {
        return Ok(());
    }
    match out.last_mut() {
        Some(top) if top.factor == syl.factor => {
            for (a, b) in top.coords.iter_mut().zip(&syl.coords) {
                *a += b;
            }
            let factor = spec.factor(syl.factor)?;
            factor.canonicalize(&mut top.coords);
            if top.is_identity() {
                out.pop();
            }
        }
        _ => out.push(syl),
    }
    Ok(())
}

/// Normal-form product `ab`.
pub fn multiply(a: &GroupElement, b: &GroupElement, spec: &GroupSpec) -> Result<GroupElement> {
    for s in a.syllables.iter().chain(&b.syllables) {
        spec.factor(s.factor)?;
    }
    let mut out = a.syllables.clone();
    for syl in &b.syllables {
        push_merge(spec, &mut out, syl.clone())?;
    }
    Ok(GroupElement { syllables: out })
}

/// Inverse: reversed syllables with negated coordinates.
pub fn invert(a: &GroupElement, spec: &GroupSpec) -> GroupElement {
    let syllables = a
        .syllables
        .iter()
        .rev()
        .map(|s| {
            let mut coords: Vec<BigInt> = s.coords.iter().map(|c| -c).collect();
            if let Ok(factor) = spec.factor(s.factor) {
                factor.canonicalize(&mut coords);
            }
            Syllable { factor: s.factor, coords }
        })
        .collect();
    GroupElement { syllables }
}

/// Number of syllables; equals the relative word length for letters drawn
/// from the parabolic factors.
pub fn syllable_count(a: &GroupElement) -> usize {
    a.syllables.len()
}

/// A letter of a marked alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Letter {
    pub symbol: String,
    pub element: GroupElement,
    /// Parabolic tag: `Some(ω)` iff the element is a single syllable of factor ω.
    pub parabolic: Option<usize>,
}

/// Finite indexed letter set over a group spec.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedAlphabet {
    pub letters: Vec<Letter>,
    pub inverse_closed: bool,
    index: HashMap<String, usize>,
}

impl MarkedAlphabet {
    /// Validates: no identity letters, unique symbols, tags consistent with
    /// the elements. Letters whose element is a single syllable are tagged
    /// with its factor automatically; declared tags are checked.
    pub fn new(spec: &GroupSpec, letters: Vec<(String, GroupElement, Option<usize>)>) -> Result<Self> {
        let mut out = Vec::with_capacity(letters.len());
        let mut index = HashMap::new();
        for (symbol, element, declared) in letters {
            if element.is_identity() {
                return Err(Error::IdentityLetter(symbol));
            }
            let inferred = if element.syllable_count() == 1 {
                Some(element.syllables[0].factor)
            } else {
                None
            };
            if let Some(omega) = declared {
                spec.factor(omega)?;
                if inferred != Some(omega) {
                    return Err(Error::BadParabolicTag { symbol, omega });
                }
            }
            if index.insert(symbol.clone(), out.len()).is_some() {
                return Err(Error::DuplicateSymbol(symbol));
            }
            out.push(Letter { symbol, element, parabolic: inferred });
        }
        let mut alphabet = MarkedAlphabet { letters: out, inverse_closed: false, index };
        alphabet.inverse_closed = alphabet.compute_inverse_closed(spec);
        Ok(alphabet)
    }

    fn compute_inverse_closed(&self, spec: &GroupSpec) -> bool {
        self.letters.iter().all(|l| {
            let inv = invert(&l.element, spec);
            self.letters.iter().any(|m| m.element == inv)
        })
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letter(&self, i: usize) -> &Letter {
        &self.letters[i]
    }

    pub fn symbol_index(&self, symbol: &str) -> Result<usize> {
        self.index.get(symbol).copied().ok_or_else(|| Error::UnknownSymbol(symbol.to_string()))
    }

    /// Index of the letter evaluating to the inverse of letter `i`, if present.
    pub fn inverse_letter(&self, spec: &GroupSpec, i: usize) -> Option<usize> {
        let inv = invert(&self.letters[i].element, spec);
        self.letters.iter().position(|l| l.element == inv)
    }

    /// All letters carry a parabolic tag.
    pub fn purely_parabolic(&self) -> bool {
        self.letters.iter().all(|l| l.parabolic.is_some())
    }

    /// Letter indices tagged with factor ω, in alphabet order.
    pub fn factor_letters(&self, omega: usize) -> Vec<usize> {
        (0..self.letters.len()).filter(|&i| self.letters[i].parabolic == Some(omega)).collect()
    }

    /// Parse a whitespace-separated word; `^-1` suffixes select inverse letters.
    pub fn parse_word(&self, spec: &GroupSpec, text: &str) -> Result<Word> {
        let mut out = Vec::new();
        for tok in text.split_whitespace() {
            if let Some(base) = tok.strip_suffix("^-1") {
                let i = self.symbol_index(base)?;
                let j = self
                    .inverse_letter(spec, i)
                    .ok_or_else(|| Error::UnknownSymbol(tok.to_string()))?;
                out.push(j as u32);
            } else {
                out.push(self.symbol_index(tok)? as u32);
            }
        }
        Ok(Word(out))
    }

    pub fn format_word(&self, w: &Word) -> String {
        w.0.iter().map(|&i| self.letters[i as usize].symbol.as_str()).collect::<Vec<_>>().join(" ")
    }
}

/// A word: a sequence of letter indices over a marked alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(pub Vec<u32>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Cyclic shift by `r`: `PQ -> QP` with `P` the length-`r` prefix.
    pub fn cyclic_shift(&self, r: usize) -> Word {
        let n = self.0.len();
        if n == 0 {
            return Word::empty();
        }
        let r = r % n;
        let mut v = Vec::with_capacity(n);
        v.extend_from_slice(&self.0[r..]);
        v.extend_from_slice(&self.0[..r]);
        Word(v)
    }

    pub fn prefix(&self, n: usize) -> Word {
        Word(self.0[..n].to_vec())
    }

    /// The formal inverse word, valid for inverse-closed alphabets.
    pub fn inverse(&self, alphabet: &MarkedAlphabet, spec: &GroupSpec) -> Result<Word> {
        let mut v = Vec::with_capacity(self.0.len());
        for &i in self.0.iter().rev() {
            let j = alphabet
                .inverse_letter(spec, i as usize)
                .ok_or_else(|| Error::UnknownSymbol(alphabet.letter(i as usize).symbol.clone()))?;
            v.push(j as u32);
        }
        Ok(Word(v))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// The monoid morphism `X* -> G`.
pub fn evaluate(w: &Word, alphabet: &MarkedAlphabet, spec: &GroupSpec) -> Result<GroupElement> {
    let mut acc = GroupElement::identity();
    for &i in &w.0 {
        let letter = alphabet
            .letters
            .get(i as usize)
            .ok_or(Error::AlphabetMismatch { expected: alphabet.len(), got: i as usize })?;
        acc = multiply(&acc, &letter.element, spec)?;
    }
    Ok(acc)
}

/// Image of an element in the direct sum of the free parts of all factors,
/// a conjugation invariant. Torsion coordinates are dropped.
pub fn abelianization(g: &GroupElement, spec: &GroupSpec) -> Vec<BigInt> {
    let mut offsets = Vec::with_capacity(spec.factors.len());
    let mut total = 0usize;
    for f in &spec.factors {
        offsets.push(total);
        total += f.rank;
    }
    let mut out = vec![BigInt::zero(); total];
    for s in &g.syllables {
        let off = offsets[s.factor];
        for (i, c) in s.coords.iter().take(spec.factors[s.factor].rank).enumerate() {
            out[off + i] += c;
        }
    }
    out
}

/// Render an element as e.g. `[0:(1,-2)][1:(3)]`; identity renders as `1`.
pub fn format_element(g: &GroupElement) -> String {
    if g.is_identity() {
        return "1".to_string();
    }
    let mut s = String::new();
    for syl in &g.syllables {
        let coords: Vec<String> = syl.coords.iter().map(|c| c.to_string()).collect();
        s.push_str(&format!("[{}:({})]", syl.factor, coords.join(",")));
    }
    s
}

#[allow(unused)]
fn abs_sum(coords: &[BigInt]) -> BigInt {
    coords.iter().map(|c| c.abs()).sum()
}
