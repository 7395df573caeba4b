//! Word-length oracles: BFS ball tables, geodesic membership and
//! enumeration, and a syllable-additive fast path for purely parabolic
//! alphabets.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use std::collections::{BTreeMap, HashMap};
use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::group::{
    evaluate, invert, multiply, GroupElement, GroupSpec, MarkedAlphabet, Syllable, Word,
};

/// Exact length table for the ball of a given radius, built by BFS.
#[derive(Debug, Clone)]
pub struct BallTable {
    pub radius: u32,
    pub lengths: HashMap<GroupElement, u32>,
    /// sphere k = elements of length exactly k, sorted for reproducibility
    pub spheres: Vec<Vec<GroupElement>>,
}

impl BallTable {
    /// BFS over the Cayley graph restricted to the given letters
    /// (`None` = all letters). `max_elements` caps memory; exceeding it
    /// yields a capacity error carrying the last completed radius.
    pub fn build(
        spec: &GroupSpec,
        alphabet: &MarkedAlphabet,
        letters: Option<&[usize]>,
        radius: u32,
        max_elements: usize,
    ) -> Result<BallTable> {
        let all: Vec<usize>;
        let letters = match letters {
            Some(l) => l,
            None => {
                all = (0..alphabet.len()).collect();
                &all
            }
        };
        let gens: Vec<&GroupElement> = letters.iter().map(|&i| &alphabet.letter(i).element).collect();
        let mut lengths = HashMap::new();
        lengths.insert(GroupElement::identity(), 0u32);
        let mut spheres = vec![vec![GroupElement::identity()]];
        let mut frontier = vec![GroupElement::identity()];
        for r in 1..=radius {
            let mut next = Vec::new();
            for g in &frontier {
                for gen in &gens {
                    let h = multiply(g, gen, spec)?;
                    if !lengths.contains_key(&h) {
                        lengths.insert(h.clone(), r);
                        next.push(h);
                        if lengths.len() > max_elements {
                            return Err(Error::Capacity { completed: r - 1 });
                        }
                    }
                }
            }
            next.sort_unstable();
            spheres.push(next.clone());
            frontier = next;
        }
        Ok(BallTable { radius, lengths, spheres })
    }

    pub fn length(&self, g: &GroupElement) -> Option<u32> {
        self.lengths.get(g).copied()
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.lengths.contains_key(g)
    }

    pub fn sphere(&self, k: usize) -> &[GroupElement] {
        &self.spheres[k]
    }

    pub fn sphere_sizes(&self) -> Vec<usize> {
        self.spheres.iter().map(|s| s.len()).collect()
    }

    /// Serialize to the versioned binary cache format (magic "GWB1").
    pub fn write_cache<W: Write>(&self, out: &mut W, alphabet_hash: u64) -> Result<()> {
        let io = |e: std::io::Error| Error::Cache(e.to_string());
        out.write_all(b"GWB1").map_err(io)?;
        out.write_all(&alphabet_hash.to_le_bytes()).map_err(io)?;
        out.write_all(&self.radius.to_le_bytes()).map_err(io)?;
        out.write_all(&(self.lengths.len() as u64).to_le_bytes()).map_err(io)?;
        for (k, sphere) in self.spheres.iter().enumerate() {
            for g in sphere {
                write_element(out, g).map_err(io)?;
                out.write_all(&(k as u32).to_le_bytes()).map_err(io)?;
            }
        }
        Ok(())
    }

    /// Read a cache file; fails when the magic, alphabet hash or radius
    /// does not match.
    pub fn read_cache<R: Read>(input: &mut R, alphabet_hash: u64, radius: u32) -> Result<BallTable> {
        let io = |e: std::io::Error| Error::Cache(e.to_string());
        let mut magic = [0u8; 4];
        input.read_exact(&mut magic).map_err(io)?;
        if &magic != b"GWB1" {
            return Err(Error::Cache("bad magic".into()));
        }
        let mut buf8 = [0u8; 8];
        input.read_exact(&mut buf8).map_err(io)?;
        if u64::from_le_bytes(buf8) != alphabet_hash {
            return Err(Error::Cache("alphabet hash mismatch".into()));
        }
        let mut buf4 = [0u8; 4];
        input.read_exact(&mut buf4).map_err(io)?;
        let file_radius = u32::from_le_bytes(buf4);
        if file_radius != radius {
            return Err(Error::Cache(format!("radius mismatch: cache has {file_radius}")));
        }
        input.read_exact(&mut buf8).map_err(io)?;
        let count = u64::from_le_bytes(buf8) as usize;
        let mut lengths = HashMap::with_capacity(count);
        let mut spheres: Vec<Vec<GroupElement>> = vec![Vec::new(); radius as usize + 1];
        for _ in 0..count {
            let g = read_element(input).map_err(io)?;
            input.read_exact(&mut buf4).map_err(io)?;
            let len = u32::from_le_bytes(buf4);
            if len > radius {
                return Err(Error::Cache("length beyond radius".into()));
            }
            spheres[len as usize].push(g.clone());
            lengths.insert(g, len);
        }
        for s in &mut spheres {
            s.sort_unstable();
        }
        Ok(BallTable { radius, lengths, spheres })
    }
}

fn write_element<W: Write>(out: &mut W, g: &GroupElement) -> std::io::Result<()> {
    out.write_all(&(g.syllables.len() as u32).to_le_bytes())?;
    for s in &g.syllables {
        out.write_all(&(s.factor as u32).to_le_bytes())?;
        out.write_all(&(s.coords.len() as u32).to_le_bytes())?;
        for c in &s.coords {
            let v = c.to_i64().ok_or_else(|| {
                std::io::Error::new(std::io::ErrorKind::InvalidData, "coordinate exceeds i64")
            })?;
            out.write_all(&v.to_le_bytes())?;
        }
    }
    Ok(())
}

fn read_element<R: Read>(input: &mut R) -> std::io::Result<GroupElement> {
    let mut b4 = [0u8; 4];
    let mut b8 = [0u8; 8];
    input.read_exact(&mut b4)?;
    let nsyl = u32::from_le_bytes(b4) as usize;
    let mut syllables = Vec::with_capacity(nsyl);
    for _ in 0..nsyl {
        input.read_exact(&mut b4)?;
        let factor = u32::from_le_bytes(b4) as usize;
        input.read_exact(&mut b4)?;
        let ncoord = u32::from_le_bytes(b4) as usize;
        let mut coords = Vec::with_capacity(ncoord);
        for _ in 0..ncoord {
            input.read_exact(&mut b8)?;
            coords.push(BigInt::from(i64::from_le_bytes(b8)));
        }
        syllables.push(Syllable { factor, coords });
    }
    Ok(GroupElement { syllables })
}

/// Stable hash of (spec, alphabet) used to key cache files. FNV-1a over a
/// canonical rendering.
pub fn alphabet_hash(spec: &GroupSpec, alphabet: &MarkedAlphabet) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    let mut eat = |bytes: &[u8]| {
        for &b in bytes {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
    };
    for f in &spec.factors {
        eat(&(f.rank as u64).to_le_bytes());
        for &m in &f.torsion {
            eat(&m.to_le_bytes());
        }
        eat(b"|");
    }
    for l in &alphabet.letters {
        eat(l.symbol.as_bytes());
        eat(b"=");
        eat(crate::group::format_element(&l.element).as_bytes());
        eat(b";");
    }
    h
}

/// Bundle of the oracles backing all length queries for one alphabet:
/// an optional full-alphabet ball plus one ball per parabolic factor.
#[derive(Debug, Clone)]
pub struct Metric {
    pub spec: GroupSpec,
    pub alphabet: MarkedAlphabet,
    pub ball: Option<BallTable>,
    pub factor_balls: BTreeMap<usize, BallTable>,
}

pub const DEFAULT_MAX_ELEMENTS: usize = 20_000_000;

impl Metric {
    pub fn build(
        spec: GroupSpec,
        alphabet: MarkedAlphabet,
        radius: u32,
        factor_radius: u32,
    ) -> Result<Metric> {
        let mut factor_balls = BTreeMap::new();
        for omega in 0..spec.factors.len() {
            let letters = alphabet.factor_letters(omega);
            if letters.is_empty() {
                continue;
            }
            let ball =
                BallTable::build(&spec, &alphabet, Some(&letters), factor_radius, DEFAULT_MAX_ELEMENTS)?;
            factor_balls.insert(omega, ball);
        }
        let ball = if radius > 0 {
            Some(BallTable::build(&spec, &alphabet, None, radius, DEFAULT_MAX_ELEMENTS)?)
        } else {
            None
        };
        Ok(Metric { spec, alphabet, ball, factor_balls })
    }

    /// Fast-path applicability: every letter carries a parabolic tag.
    pub fn purely_parabolic(&self) -> bool {
        self.alphabet.purely_parabolic()
    }

    fn max_radius(&self) -> u32 {
        self.ball.as_ref().map(|b| b.radius).unwrap_or(0)
    }

    /// Exact `|g|_X`. Purely parabolic alphabets use per-syllable factor
    /// lengths; otherwise the BFS ball answers, failing out-of-range.
    pub fn word_length(&self, g: &GroupElement) -> Result<u32> {
        if self.purely_parabolic() {
            if let Some(n) = self.syllable_additive_length(g) {
                return Ok(n);
            }
        }
        if let Some(ball) = &self.ball {
            if let Some(n) = ball.length(g) {
                return Ok(n);
            }
        }
        Err(Error::OutOfRange { radius: self.max_radius() })
    }

    fn syllable_additive_length(&self, g: &GroupElement) -> Option<u32> {
        let mut total = 0u32;
        for s in &g.syllables {
            let ball = self.factor_balls.get(&s.factor)?;
            let single = GroupElement { syllables: vec![s.clone()] };
            total += ball.length(&single)?;
        }
        Some(total)
    }

    /// Factor length `|h|_{X ∩ H_ω}` for a single-factor element.
    pub fn factor_length(&self, omega: usize, h: &GroupElement) -> Result<u32> {
        let ball = self
            .factor_balls
            .get(&omega)
            .ok_or(Error::OutOfRange { radius: 0 })?;
        ball.length(h).ok_or(Error::OutOfRange { radius: ball.radius })
    }

    pub fn is_geodesic(&self, w: &Word) -> Result<bool> {
        let g = evaluate(w, &self.alphabet, &self.spec)?;
        Ok(self.word_length(&g)? as usize == w.len())
    }

    /// Geodesic membership within a single factor for a word over the
    /// factor letters.
    pub fn is_factor_geodesic(&self, omega: usize, w: &Word) -> Result<bool> {
        let g = evaluate(w, &self.alphabet, &self.spec)?;
        Ok(self.factor_length(omega, &g)? as usize == w.len())
    }

    /// All geodesic words for `g`, in lexicographic order by letter index.
    pub fn enumerate_geodesics(&self, g: &GroupElement) -> Result<Vec<Word>> {
        let n = self.word_length(g)?;
        let mut out = Vec::new();
        let mut prefix = Vec::new();
        self.geodesic_dfs(g.clone(), n, &mut prefix, &mut out)?;
        Ok(out)
    }

    fn geodesic_dfs(
        &self,
        remainder: GroupElement,
        remaining: u32,
        prefix: &mut Vec<u32>,
        out: &mut Vec<Word>,
    ) -> Result<()> {
        if remaining == 0 {
            debug_assert!(remainder.is_identity());
            out.push(Word(prefix.clone()));
            return Ok(());
        }
        for i in 0..self.alphabet.len() {
            let inv = invert(&self.alphabet.letter(i).element, &self.spec);
            let next = multiply(&inv, &remainder, &self.spec)?;
            let ok = match self.word_length(&next) {
                Ok(len) => len == remaining - 1,
                Err(_) => false, // beyond the ball hence longer than remaining
            };
            if ok {
                prefix.push(i as u32);
                self.geodesic_dfs(next, remaining - 1, prefix, out)?;
                prefix.pop();
            }
        }
        Ok(())
    }

    /// All words of exactly `len` letters evaluating to `g`, pruned by the
    /// length oracle (every prefix stays completable).
    pub fn enumerate_words_for(&self, g: &GroupElement, len: u32) -> Result<Vec<Word>> {
        let mut out = Vec::new();
        let mut prefix = Vec::new();
        self.word_dfs(g.clone(), len, &mut prefix, &mut out)?;
        Ok(out)
    }

    fn word_dfs(
        &self,
        remainder: GroupElement,
        remaining: u32,
        prefix: &mut Vec<u32>,
        out: &mut Vec<Word>,
    ) -> Result<()> {
        if remaining == 0 {
            if remainder.is_identity() {
                out.push(Word(prefix.clone()));
            }
            return Ok(());
        }
        for i in 0..self.alphabet.len() {
            let inv = invert(&self.alphabet.letter(i).element, &self.spec);
            let next = multiply(&inv, &remainder, &self.spec)?;
            let reachable = match self.word_length(&next) {
                Ok(len) => len <= remaining - 1,
                Err(_) => false,
            };
            if reachable {
                prefix.push(i as u32);
                self.word_dfs(next, remaining - 1, prefix, out)?;
                prefix.pop();
            }
        }
        Ok(())
    }

    /// Element counts per sphere for a purely parabolic alphabet, computed
    /// from the factor spheres by alternation. Cross-checked against direct
    /// BFS in the tests.
    pub fn free_product_sphere_counts(&self, n_max: u32) -> Result<Vec<BigUint>> {
        if !self.purely_parabolic() {
            return Err(Error::OutOfRange { radius: self.max_radius() });
        }
        let omegas: Vec<usize> = self.factor_balls.keys().copied().collect();
        for &w in &omegas {
            if self.factor_balls[&w].radius < n_max {
                return Err(Error::OutOfRange { radius: self.factor_balls[&w].radius });
            }
        }
        // counts of factor elements of exact length k
        let factor_counts: BTreeMap<usize, Vec<BigUint>> = omegas
            .iter()
            .map(|&w| {
                (w, self.factor_balls[&w].sphere_sizes().iter().map(|&n| BigUint::from(n)).collect())
            })
            .collect();
        // ends[w][n]: elements of length n whose last syllable is in factor w
        let n_max = n_max as usize;
        let mut ends: BTreeMap<usize, Vec<BigUint>> =
            omegas.iter().map(|&w| (w, vec![BigUint::zero(); n_max + 1])).collect();
        for n in 1..=n_max {
            for &w in &omegas {
                let mut acc = BigUint::zero();
                for k in 1..=n {
                    if k >= factor_counts[&w].len() {
                        continue;
                    }
                    let s = &factor_counts[&w][k];
                    let mut prev = if n == k { BigUint::one() } else { BigUint::zero() };
                    for &m in &omegas {
                        if m != w && n > k {
                            prev += ends[&m][n - k].clone();
                        }
                    }
                    acc += s * prev;
                }
                ends.get_mut(&w).unwrap()[n] = acc;
            }
        }
        let mut out = vec![BigUint::one()];
        for n in 1..=n_max {
            let mut total = BigUint::zero();
            for &w in &omegas {
                total += ends[&w][n].clone();
            }
            out.push(total);
        }
        Ok(out)
    }
}

/// Free-function forms matching the operation contracts.
pub fn build_ball(
    spec: &GroupSpec,
    alphabet: &MarkedAlphabet,
    radius: u32,
) -> Result<BallTable> {
    BallTable::build(spec, alphabet, None, radius, DEFAULT_MAX_ELEMENTS)
}

pub fn word_length(g: &GroupElement, metric: &Metric) -> Result<u32> {
    metric.word_length(g)
}

pub fn is_geodesic(w: &Word, metric: &Metric) -> Result<bool> {
    metric.is_geodesic(w)
}

pub fn enumerate_geodesics(g: &GroupElement, metric: &Metric) -> Result<Vec<Word>> {
    metric.enumerate_geodesics(g)
}
