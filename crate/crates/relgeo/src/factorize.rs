//! Word factorization into parabolic blocks, derived words over the
//! relative alphabet, and special words.

use std::fmt;

use crate::error::{Error, Result};
use crate::group::{evaluate, format_element, GroupElement, MarkedAlphabet, Word};
use crate::metric::Metric;

/// Alternating decomposition `A_0 U_1 A_1 … U_n A_n`: each `U_i` is a
/// maximal run of letters tagged with one factor, each `A_i` collects the
/// untagged letters in between (possibly empty).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    /// A_0 … A_n (always one more than `blocks`)
    pub base: Vec<Word>,
    /// U_1 … U_n with their factor
    pub blocks: Vec<(usize, Word)>,
}

impl Factorization {
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Concatenate the segments back into the original word.
    pub fn reassemble(&self) -> Word {
        let mut out = self.base[0].clone();
        for (i, (_, u)) in self.blocks.iter().enumerate() {
            out = out.concat(u);
            out = out.concat(&self.base[i + 1]);
        }
        out
    }
}

/// Letter of a derived word: either an ordinary alphabet letter or a
/// parabolic element standing for a whole block.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RelLetter {
    Base(u32),
    Parabolic(usize, GroupElement),
}

/// Word over the relative alphabet `X ∪ ⋃_ω H_ω`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelativeWord(pub Vec<RelLetter>);

impl RelativeWord {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn display<'a>(&'a self, alphabet: &'a MarkedAlphabet) -> RelativeWordDisplay<'a> {
        RelativeWordDisplay { word: self, alphabet }
    }
}

pub struct RelativeWordDisplay<'a> {
    word: &'a RelativeWord,
    alphabet: &'a MarkedAlphabet,
}

impl fmt::Display for RelativeWordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .word
            .0
            .iter()
            .map(|l| match l {
                RelLetter::Base(i) => self.alphabet.letter(*i as usize).symbol.clone(),
                RelLetter::Parabolic(omega, g) => format!("({omega}:{})", format_element(g)),
            })
            .collect();
        write!(f, "{}", parts.join(" | "))
    }
}

/// The unique factorization of `w`: consecutive letters sharing a factor
/// tag form the blocks, everything else the base segments.
pub fn factorize(w: &Word, alphabet: &MarkedAlphabet) -> Factorization {
    let mut base = vec![Word::default()];
    let mut blocks: Vec<(usize, Word)> = Vec::new();
    // true while the trailing base segment may still absorb letters and no
    // block has been opened since it was created
    let mut in_block_tail = false;
    for &i in &w.0 {
        let tag = alphabet.letter(i as usize).parabolic;
        match tag {
            None => {
                base.last_mut().unwrap().0.push(i);
                in_block_tail = false;
            }
            Some(omega) => {
                let extend = in_block_tail
                    && blocks.last().map(|(o, _)| *o) == Some(omega)
                    && base.last().unwrap().is_empty();
                if extend {
                    blocks.last_mut().unwrap().1 .0.push(i);
                } else {
                    blocks.push((omega, Word(vec![i])));
                    base.push(Word::default());
                    in_block_tail = true;
                }
            }
        }
    }
    Factorization { base, blocks }
}

/// True when some block is non-geodesic inside its own factor.
pub fn has_parabolic_shortening(f: &Factorization, metric: &Metric) -> Result<bool> {
    for (omega, u) in &f.blocks {
        if !metric.is_factor_geodesic(*omega, u)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Collapse each block to the single parabolic letter it evaluates to.
/// Defined only for words without parabolic shortenings.
pub fn derive(w: &Word, metric: &Metric) -> Result<RelativeWord> {
    let f = factorize(w, &metric.alphabet);
    if has_parabolic_shortening(&f, metric)? {
        return Err(Error::ParabolicShortening);
    }
    let mut out = Vec::new();
    for &i in &f.base[0].0 {
        out.push(RelLetter::Base(i));
    }
    for (k, (omega, u)) in f.blocks.iter().enumerate() {
        let h = evaluate(u, &metric.alphabet, &metric.spec)?;
        out.push(RelLetter::Parabolic(*omega, h));
        for &i in &f.base[k + 1].0 {
            out.push(RelLetter::Base(i));
        }
    }
    Ok(RelativeWord(out))
}

fn rel_letter_element(l: &RelLetter, metric: &Metric) -> GroupElement {
    match l {
        RelLetter::Base(i) => metric.alphabet.letter(*i as usize).element.clone(),
        RelLetter::Parabolic(_, g) => g.clone(),
    }
}

/// True when some contiguous run of at least two relative letters
/// multiplies into a single factor (or to the identity).
pub fn vertex_backtracks(r: &RelativeWord, metric: &Metric) -> Result<bool> {
    let n = r.len();
    for start in 0..n {
        let mut acc = GroupElement::identity();
        for end in start..n {
            let next = rel_letter_element(&r.0[end], metric);
            acc = crate::group::multiply(&acc, &next, &metric.spec)?;
            if end > start && acc.syllable_count() <= 1 {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Per-factor language membership test; `f(omega, block)` decides whether
/// a word over the ω-letters belongs to the chosen factor language L_ω.
pub type FactorLanguages<'a> = &'a dyn Fn(usize, &Word) -> Result<bool>;

/// Membership in the relative language: every maximal block lies in its
/// factor language. Cross-checked against the automaton construction in
/// the language tests.
pub fn in_rel(w: &Word, alphabet: &MarkedAlphabet, langs: FactorLanguages) -> Result<bool> {
    for (omega, u) in &factorize(w, alphabet).blocks {
        if !langs(*omega, u)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Geodesic representatives of `evaluate(w)` that also lie in the
/// relative language.
fn rel_geodesic_representatives(
    g: &GroupElement,
    metric: &Metric,
    langs: FactorLanguages,
) -> Result<Vec<Word>> {
    let mut out = Vec::new();
    for w in metric.enumerate_geodesics(g)? {
        if in_rel(&w, &metric.alphabet, langs)? {
            out.push(w);
        }
    }
    Ok(out)
}

/// A word is special when it is a geodesic relative-language word whose
/// leading block is as long as possible among all such representatives of
/// its element, recursively for the remainder after the leading block.
pub fn is_special(w: &Word, metric: &Metric, langs: FactorLanguages) -> Result<bool> {
    if !metric.is_geodesic(w)? || !in_rel(w, &metric.alphabet, langs)? {
        return Ok(false);
    }
    let f = factorize(w, &metric.alphabet);
    if f.is_empty() {
        return Ok(true);
    }
    let g = evaluate(w, &metric.alphabet, &metric.spec)?;
    let reps = rel_geodesic_representatives(&g, metric, langs)?;
    let max_first = reps
        .iter()
        .map(|r| factorize(r, &metric.alphabet))
        .filter(|fr| !fr.is_empty())
        .map(|fr| fr.blocks[0].1.len())
        .max()
        .unwrap_or(0);
    if f.blocks[0].1.len() < max_first {
        return Ok(false);
    }
    let mut tail = f.base[1].clone();
    for (k, (_, u)) in f.blocks.iter().enumerate().skip(1) {
        tail = tail.concat(u);
        tail = tail.concat(&f.base[k + 1]);
    }
    is_special(&tail, metric, langs)
}

/// Lexicographically least special word representing `g`.
pub fn special_representative(
    g: &GroupElement,
    metric: &Metric,
    langs: FactorLanguages,
) -> Result<Word> {
    for w in metric.enumerate_geodesics(g)? {
        if is_special(&w, metric, langs)? {
            return Ok(w);
        }
    }
    // every element has a special representative when each factor language
    // hits every factor element; reaching this line means the languages
    // violate that assumption
    Err(Error::L1Violation { omega: 0, witness: None })
}
