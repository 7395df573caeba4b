//! Geodesic languages, growth series, and conjugacy decision for free
//! products of finitely generated abelian groups.

pub mod automata;
pub mod conjugacy;
pub mod error;
pub mod factorize;
pub mod fellow;
pub mod poly;
pub mod genset;
pub mod langmach;
pub mod group;
pub mod metric;
pub mod samples;

pub use error::{Error, Result};
pub use group::{
    abelianization, evaluate, format_element, invert, multiply, syllable_count, AbelianFactor,
    GroupElement, GroupSpec, Letter, MarkedAlphabet, Syllable, Word,
};
pub use metric::{
    alphabet_hash, build_ball, enumerate_geodesics, is_geodesic, word_length, BallTable, Metric,
};
