//! Generating-set constructions: enlarging an alphabet by a whole ball,
//! enlarging only the parabolic sub-alphabets, and collecting bounded
//! parabolic elements.

use std::collections::{BTreeMap, HashSet};

use crate::error::{Error, Result};
use crate::group::{format_element, GroupElement, GroupSpec, MarkedAlphabet};
use crate::metric::BallTable;

fn symbol_for(alphabet: &MarkedAlphabet, g: &GroupElement) -> String {
    for l in &alphabet.letters {
        if &l.element == g {
            return l.symbol.clone();
        }
    }
    format_element(g)
}

/// Alphabet whose letters are every nontrivial element of `X`-length at
/// most `m`. Existing letter symbols are kept; new elements get their
/// canonical rendering as symbol. Letters are ordered by length, then by
/// normal form.
pub fn ball_enlarge(
    spec: &GroupSpec,
    alphabet: &MarkedAlphabet,
    m: u32,
    ball: &BallTable,
) -> Result<MarkedAlphabet> {
    if m == 0 {
        return Err(Error::EmptyAlphabet);
    }
    if m > ball.radius {
        return Err(Error::OutOfRange { radius: ball.radius });
    }
    let mut letters = Vec::new();
    for k in 1..=m as usize {
        for g in ball.sphere(k) {
            letters.push((symbol_for(alphabet, g), g.clone(), None));
        }
    }
    MarkedAlphabet::new(spec, letters)
}

/// `Y` extended by every factor element of factor-length at most `k`,
/// for each factor that `Y` touches. Original letters come first and keep
/// their symbols and tags.
pub fn parabolic_enlarge(
    spec: &GroupSpec,
    alphabet: &MarkedAlphabet,
    k: u32,
    factor_balls: &BTreeMap<usize, BallTable>,
) -> Result<MarkedAlphabet> {
    let mut letters: Vec<(String, GroupElement, Option<usize>)> = alphabet
        .letters
        .iter()
        .map(|l| (l.symbol.clone(), l.element.clone(), l.parabolic))
        .collect();
    let mut seen: HashSet<GroupElement> =
        alphabet.letters.iter().map(|l| l.element.clone()).collect();
    for omega in 0..spec.factors.len() {
        let ball = match factor_balls.get(&omega) {
            Some(b) => b,
            None => continue,
        };
        if k > ball.radius {
            return Err(Error::OutOfRange { radius: ball.radius });
        }
        for r in 1..=k as usize {
            for g in ball.sphere(r) {
                if seen.insert(g.clone()) {
                    letters.push((format_element(g), g.clone(), Some(omega)));
                }
            }
        }
    }
    MarkedAlphabet::new(spec, letters)
}

/// All nontrivial parabolic elements of length at most `t`, sorted by
/// length then normal form.
pub fn theta(t: u32, factor_balls: &BTreeMap<usize, BallTable>) -> Result<Vec<GroupElement>> {
    let mut out = Vec::new();
    for r in 1..=t as usize {
        let mut sphere = Vec::new();
        for ball in factor_balls.values() {
            if (t as u32) > ball.radius {
                return Err(Error::OutOfRange { radius: ball.radius });
            }
            sphere.extend(ball.sphere(r).iter().cloned());
        }
        sphere.sort_unstable();
        out.extend(sphere);
    }
    Ok(out)
}
