//! Standard example groups used by the test suite and the CLI demos.

use crate::group::{AbelianFactor, GroupElement, GroupSpec, MarkedAlphabet, Syllable};
use num_bigint::BigInt;

fn letter(
    spec: &GroupSpec,
    symbol: &str,
    syllables: Vec<(usize, Vec<i64>)>,
) -> (String, GroupElement, Option<usize>) {
    let raw = syllables
        .into_iter()
        .map(|(f, coords)| Syllable { factor: f, coords: coords.into_iter().map(BigInt::from).collect() })
        .collect();
    let element = GroupElement::from_syllables(spec, raw).unwrap();
    (symbol.to_string(), element, None)
}

/// Z with generators {+1, -1}.
pub fn zline() -> (GroupSpec, MarkedAlphabet) {
    let spec = GroupSpec::new(vec![AbelianFactor::free(1)]);
    let letters = vec![letter(&spec, "s", vec![(0, vec![1])]), letter(&spec, "s^-1", vec![(0, vec![-1])])];
    let alphabet = MarkedAlphabet::new(&spec, letters).unwrap();
    (spec, alphabet)
}

/// Z^2 with generators {±e1, ±e2}, ordered e1 < e2 < e1^-1 < e2^-1.
pub fn zsquare() -> (GroupSpec, MarkedAlphabet) {
    let spec = GroupSpec::new(vec![AbelianFactor::free(2)]);
    let letters = vec![
        letter(&spec, "e1", vec![(0, vec![1, 0])]),
        letter(&spec, "e2", vec![(0, vec![0, 1])]),
        letter(&spec, "e1^-1", vec![(0, vec![-1, 0])]),
        letter(&spec, "e2^-1", vec![(0, vec![0, -1])]),
    ];
    let alphabet = MarkedAlphabet::new(&spec, letters).unwrap();
    (spec, alphabet)
}

/// F2 = Z * Z with generators {a, b} and inverses.
pub fn free2() -> (GroupSpec, MarkedAlphabet) {
    let spec = GroupSpec::new(vec![AbelianFactor::free(1), AbelianFactor::free(1)]);
    let letters = vec![
        letter(&spec, "a", vec![(0, vec![1])]),
        letter(&spec, "b", vec![(1, vec![1])]),
        letter(&spec, "a^-1", vec![(0, vec![-1])]),
        letter(&spec, "b^-1", vec![(1, vec![-1])]),
    ];
    let alphabet = MarkedAlphabet::new(&spec, letters).unwrap();
    (spec, alphabet)
}

/// Z^2 * Z with the union of the standard factor generating sets.
pub fn zsq_star_z() -> (GroupSpec, MarkedAlphabet) {
    let spec = GroupSpec::new(vec![AbelianFactor::free(2), AbelianFactor::free(1)]);
    let letters = vec![
        letter(&spec, "e1", vec![(0, vec![1, 0])]),
        letter(&spec, "e2", vec![(0, vec![0, 1])]),
        letter(&spec, "t", vec![(1, vec![1])]),
        letter(&spec, "e1^-1", vec![(0, vec![-1, 0])]),
        letter(&spec, "e2^-1", vec![(0, vec![0, -1])]),
        letter(&spec, "t^-1", vec![(1, vec![-1])]),
    ];
    let alphabet = MarkedAlphabet::new(&spec, letters).unwrap();
    (spec, alphabet)
}

/// F2 with an extra untagged generator t = ab.
pub fn free2_t() -> (GroupSpec, MarkedAlphabet) {
    let spec = GroupSpec::new(vec![AbelianFactor::free(1), AbelianFactor::free(1)]);
    let letters = vec![
        letter(&spec, "a", vec![(0, vec![1])]),
        letter(&spec, "b", vec![(1, vec![1])]),
        letter(&spec, "t", vec![(0, vec![1]), (1, vec![1])]),
        letter(&spec, "a^-1", vec![(0, vec![-1])]),
        letter(&spec, "b^-1", vec![(1, vec![-1])]),
        letter(&spec, "t^-1", vec![(1, vec![-1]), (0, vec![-1])]),
    ];
    let alphabet = MarkedAlphabet::new(&spec, letters).unwrap();
    (spec, alphabet)
}

/// Names for the five standard test groups, as used by the CLI.
pub const SAMPLE_NAMES: [&str; 5] = ["z", "z2", "f2", "z2xz", "f2t"];

pub fn by_name(name: &str) -> Option<(GroupSpec, MarkedAlphabet)> {
    match name {
        "z" => Some(zline()),
        "z2" => Some(zsquare()),
        "f2" => Some(free2()),
        "z2xz" => Some(zsq_star_z()),
        "f2t" => Some(free2_t()),
        _ => None,
    }
}
