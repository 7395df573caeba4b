//! JSON group descriptions: factors, named alphabets, optional letter
//! order. Loading canonicalizes elements and validates declared
//! parabolic tags; emitting a loaded description round-trips.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use relgeo::group::{AbelianFactor, GroupElement, GroupSpec, MarkedAlphabet, Syllable};

use crate::{CliError, CliResult};

#[derive(Debug, Serialize, Deserialize)]
pub struct GroupFile {
    pub factors: Vec<FactorSpec>,
    pub alphabets: BTreeMap<String, Vec<LetterSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<Vec<String>>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct FactorSpec {
    pub rank: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub torsion: Vec<u64>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct LetterSpec {
    pub symbol: String,
    /// Syllable list: pairs of factor index and coordinate vector.
    pub element: Vec<(usize, Vec<i64>)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parabolic: Option<usize>,
}

impl GroupFile {
    pub fn read(path: &Path) -> CliResult<GroupFile> {
        let text = fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn spec(&self) -> GroupSpec {
        GroupSpec::new(
            self.factors
                .iter()
                .map(|f| AbelianFactor { rank: f.rank, torsion: f.torsion.clone() })
                .collect(),
        )
    }

    /// Build the named alphabet, applying the optional letter order and
    /// verifying any declared parabolic tags against the letters the
    /// alphabet derives itself.
    pub fn alphabet(&self, name: &str) -> CliResult<(GroupSpec, MarkedAlphabet)> {
        let spec = self.spec();
        let letters = self
            .alphabets
            .get(name)
            .ok_or_else(|| CliError::usage(format!("no alphabet named {name:?}")))?;
        let mut ordered: Vec<&LetterSpec> = letters.iter().collect();
        if let Some(order) = &self.order {
            let pos = |s: &str| order.iter().position(|o| o == s);
            for l in letters {
                if pos(&l.symbol).is_none() {
                    return Err(CliError::usage(format!(
                        "symbol {:?} missing from the order list",
                        l.symbol
                    )));
                }
            }
            ordered.sort_by_key(|l| pos(&l.symbol));
        }
        let mut raw = Vec::with_capacity(ordered.len());
        for l in &ordered {
            let syllables = l
                .element
                .iter()
                .map(|(omega, coords)| Syllable {
                    factor: *omega,
                    coords: coords.iter().map(|&c| BigInt::from(c)).collect(),
                })
                .collect();
            let g = GroupElement::from_syllables(&spec, syllables)?;
            raw.push((l.symbol.clone(), g, None));
        }
        let alphabet = MarkedAlphabet::new(&spec, raw)?;
        for (l, built) in ordered.iter().zip(&alphabet.letters) {
            if let Some(omega) = l.parabolic {
                if built.parabolic != Some(omega) {
                    return Err(relgeo::Error::BadParabolicTag {
                        symbol: l.symbol.clone(),
                        omega,
                    }
                    .into());
                }
            }
        }
        Ok((spec, alphabet))
    }
}

/// Serialize a spec and one alphabet back into the file schema.
pub fn to_group_file(spec: &GroupSpec, alphabet: &MarkedAlphabet, name: &str) -> CliResult<GroupFile> {
    let factors = spec
        .factors
        .iter()
        .map(|f| FactorSpec { rank: f.rank, torsion: f.torsion.clone() })
        .collect();
    let mut letters = Vec::with_capacity(alphabet.letters.len());
    for l in &alphabet.letters {
        let element = l
            .element
            .syllables
            .iter()
            .map(|s| {
                let coords = s
                    .coords
                    .iter()
                    .map(|c| {
                        i64::try_from(c).map_err(|_| {
                            CliError::usage(format!(
                                "coordinate {c} of {:?} exceeds the file format range",
                                l.symbol
                            ))
                        })
                    })
                    .collect::<CliResult<Vec<i64>>>()?;
                Ok((s.factor, coords))
            })
            .collect::<CliResult<Vec<_>>>()?;
        letters.push(LetterSpec { symbol: l.symbol.clone(), element, parabolic: l.parabolic });
    }
    let mut alphabets = BTreeMap::new();
    alphabets.insert(name.to_string(), letters);
    Ok(GroupFile { factors, alphabets, order: None })
}
