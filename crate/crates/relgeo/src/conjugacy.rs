//! Conjugacy machinery: cyclic reduction of words, an exact free-product
//! conjugacy oracle, a bounded-conjugator decision procedure, and
//! empirical sweeps for the bounded-conjugacy-diagram and
//! neighboring-shorter-conjugate constants.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::factorize::factorize;
use crate::fellow::minimal_nongeodesics;
use crate::group::{evaluate, invert, multiply, GroupElement, GroupSpec, Syllable, Word};
use crate::langmach::{self, is_cyclic_geodesic};
use crate::metric::Metric;

/// Rewriting table for cyclic word reduction: each pattern is a
/// non-geodesic word paired with a strictly shorter word for the same
/// element. Complete only up to the recorded length bound.
#[derive(Debug, Clone, Default)]
pub struct PhiSet {
    /// (pattern, replacement) pairs, sorted by pattern.
    pub replacements: Vec<(Word, Word)>,
    /// Every non-geodesic pattern of length up to this bound that the
    /// builder admits is present.
    pub complete_to: usize,
}

impl PhiSet {
    pub fn empty() -> Self {
        PhiSet { replacements: Vec::new(), complete_to: 0 }
    }

    fn max_pattern_len(&self) -> usize {
        self.replacements.iter().map(|(p, _)| p.len()).max().unwrap_or(0)
    }

    /// Replacement for an exact pattern match, via binary search on the
    /// sorted table.
    fn lookup(&self, slice: &[u32]) -> Option<&Word> {
        self.replacements
            .binary_search_by(|(p, _)| p.0.as_slice().cmp(slice))
            .ok()
            .map(|i| &self.replacements[i].1)
    }
}

/// All minimal non-geodesic words of length at most `l_max` whose
/// parabolic blocks are factor-geodesic (shorter words would already be
/// caught by block shortening), each mapped to the lexicographically
/// least geodesic word for its element.
pub fn build_phi(metric: &Metric, l_max: usize) -> Result<PhiSet> {
    let mut replacements = Vec::new();
    for w in minimal_nongeodesics(metric, l_max)? {
        let f = factorize(&w, &metric.alphabet);
        let mut shortening = false;
        for (omega, u) in &f.blocks {
            if !metric.is_factor_geodesic(*omega, u)? {
                shortening = true;
                break;
            }
        }
        if shortening {
            continue;
        }
        let g = evaluate(&w, &metric.alphabet, &metric.spec)?;
        let rep = lex_least_geodesic(metric, &g)?;
        debug_assert!(rep.len() < w.len());
        replacements.push((w, rep));
    }
    replacements.sort();
    Ok(PhiSet { replacements, complete_to: l_max })
}

/// Greedy lexicographically least geodesic word for `g`: at each step the
/// smallest letter that brings the remainder one unit closer.
pub fn lex_least_geodesic(metric: &Metric, g: &GroupElement) -> Result<Word> {
    let mut remaining = metric.word_length(g)?;
    let mut cur = g.clone();
    let mut out = Vec::with_capacity(remaining as usize);
    'step: while remaining > 0 {
        for i in 0..metric.alphabet.len() {
            let inv = invert(&metric.alphabet.letter(i).element, &metric.spec);
            let next = multiply(&inv, &cur, &metric.spec)?;
            if matches!(metric.word_length(&next), Ok(l) if l == remaining - 1) {
                out.push(i as u32);
                cur = next;
                remaining -= 1;
                continue 'step;
            }
        }
        // a geodesic always has a first letter; only a truncated oracle
        // can fail to see it
        return Err(Error::OutOfRange {
            radius: metric.ball.as_ref().map(|b| b.radius).unwrap_or(0),
        });
    }
    Ok(Word(out))
}

/// Same as `lex_least_geodesic` inside one parabolic factor.
fn lex_least_factor_geodesic(metric: &Metric, omega: usize, g: &GroupElement) -> Result<Word> {
    let letters = metric.alphabet.factor_letters(omega);
    let mut remaining = metric.factor_length(omega, g)?;
    let mut cur = g.clone();
    let mut out = Vec::with_capacity(remaining as usize);
    'step: while remaining > 0 {
        for &i in &letters {
            let inv = invert(&metric.alphabet.letter(i).element, &metric.spec);
            let next = multiply(&inv, &cur, &metric.spec)?;
            if matches!(metric.factor_length(omega, &next), Ok(l) if l == remaining - 1) {
                out.push(i as u32);
                cur = next;
                remaining -= 1;
                continue 'step;
            }
        }
        return Err(Error::OutOfRange {
            radius: metric.factor_balls.get(&omega).map(|b| b.radius).unwrap_or(0),
        });
    }
    Ok(Word(out))
}

/// Outcome of cyclic word reduction.
#[derive(Debug, Clone)]
pub struct Reduction {
    /// The reduced word: no cyclic shift has a non-geodesic parabolic
    /// block or contains a pattern from the rewriting table.
    pub word: Word,
    /// Word `c` with `c⁻¹·input·c = word` as group elements.
    pub conjugator: Word,
    /// Some intermediate word exceeded the table's completeness bound, so
    /// irreducibility is not certified.
    pub incomplete_phi: bool,
}

/// Shrink `w` within its conjugacy class: repeatedly shorten non-geodesic
/// parabolic blocks, apply table rewrites, and rotate whenever a cyclic
/// shift would expose either. Terminates because every rotation is
/// immediately followed by a strict shortening.
pub fn reduce(w: &Word, metric: &Metric, phi: &PhiSet) -> Result<Reduction> {
    let mut cur = w.clone();
    let mut conj = Word::empty();
    let mut incomplete = false;
    loop {
        if cur.len() > phi.complete_to {
            incomplete = true;
        }
        if apply_block_shortening(&mut cur, metric)? {
            continue;
        }
        if apply_rewrite(&mut cur, phi) {
            continue;
        }
        match seam_rotation(&cur, metric, phi)? {
            Some(r) => {
                conj = conj.concat(&cur.prefix(r));
                cur = cur.cyclic_shift(r);
            }
            None => break,
        }
    }
    Ok(Reduction { word: cur, conjugator: conj, incomplete_phi: incomplete })
}

/// Replace the first non-geodesic parabolic block by the lex-least
/// factor geodesic for its element.
fn apply_block_shortening(cur: &mut Word, metric: &Metric) -> Result<bool> {
    let f = factorize(cur, &metric.alphabet);
    for (bi, (omega, u)) in f.blocks.iter().enumerate() {
        if metric.is_factor_geodesic(*omega, u)? {
            continue;
        }
        let g = evaluate(u, &metric.alphabet, &metric.spec)?;
        let rep = lex_least_factor_geodesic(metric, *omega, &g)?;
        let mut out = f.base[0].clone();
        for (i, (_, blk)) in f.blocks.iter().enumerate() {
            out = out.concat(if i == bi { &rep } else { blk });
            out = out.concat(&f.base[i + 1]);
        }
        *cur = out;
        return Ok(true);
    }
    Ok(false)
}

/// Apply the leftmost (then shortest) table rewrite, if any.
fn apply_rewrite(cur: &mut Word, phi: &PhiSet) -> bool {
    let max_len = phi.max_pattern_len();
    for p in 0..cur.len() {
        for k in 1..=max_len.min(cur.len() - p) {
            if let Some(rep) = phi.lookup(&cur.0[p..p + k]) {
                let mut v = cur.0[..p].to_vec();
                v.extend_from_slice(&rep.0);
                v.extend_from_slice(&cur.0[p + k..]);
                *cur = Word(v);
                return true;
            }
        }
    }
    false
}

/// A rotation amount whose shift exposes a reduction across the seam
/// (a non-geodesic merged parabolic block or a wrapped table pattern),
/// for a word already irreducible in the linear sense. Every block of
/// every cyclic shift is either a block of `cur` or the single
/// seam-merged block, so checking the seam suffices.
fn seam_rotation(cur: &Word, metric: &Metric, phi: &PhiSet) -> Result<Option<usize>> {
    let n = cur.len();
    if n < 2 {
        return Ok(None);
    }
    let tag = |i: usize| metric.alphabet.letter(cur.0[i] as usize).parabolic;
    if let (Some(omega), last) = (tag(0), tag(n - 1)) {
        if last == Some(omega) {
            let mut h = 1;
            while h < n && tag(h) == Some(omega) {
                h += 1;
            }
            let mut t = 1;
            while t < n - h && tag(n - 1 - t) == Some(omega) {
                t += 1;
            }
            // h + t == n means the whole word lies in one abelian factor:
            // every rotation evaluates to the same element, nothing to do
            if h + t < n {
                let merged =
                    Word(cur.0[n - t..].iter().chain(&cur.0[..h]).copied().collect());
                if !metric.is_factor_geodesic(omega, &merged)? {
                    return Ok(Some(h));
                }
            }
        }
    }
    // patterns wrapping the seam: scan the doubled boundary window
    let max_len = phi.max_pattern_len().min(n);
    if max_len >= 2 {
        let m = max_len - 1;
        let window: Vec<u32> =
            cur.0[n - m..].iter().chain(&cur.0[..m]).copied().collect();
        for q in 0..m {
            for k in 2..=max_len.min(window.len() - q) {
                // only occurrences actually crossing position m wrap
                if q + k > m && phi.lookup(&window[q..q + k]).is_some() {
                    return Ok(Some(n - m + q));
                }
            }
        }
    }
    Ok(None)
}

/// True when every subword (blocks at factor level, patterns literally)
/// is irreducible without rotating: no non-geodesic parabolic block and
/// no table pattern occurs.
pub fn is_linearly_reduced(w: &Word, metric: &Metric, phi: &PhiSet) -> Result<bool> {
    let f = factorize(w, &metric.alphabet);
    for (omega, u) in &f.blocks {
        if !metric.is_factor_geodesic(*omega, u)? {
            return Ok(false);
        }
    }
    let mut probe = w.clone();
    Ok(!apply_rewrite(&mut probe, phi))
}

/// Cyclic reduction at the syllable level: conjugate by leading syllables
/// until the first and last syllables lie in distinct factors (or at
/// most one remains). Returns `(core, p)` with `core = p⁻¹ g p`.
pub fn cyclic_core(g: &GroupElement, spec: &GroupSpec) -> Result<(GroupElement, GroupElement)> {
    let mut core = g.clone();
    let mut p = GroupElement::identity();
    while core.syllable_count() >= 2
        && core.syllables.first().unwrap().factor == core.syllables.last().unwrap().factor
    {
        let s = GroupElement { syllables: vec![core.syllables[0].clone()] };
        let si = invert(&s, spec);
        core = multiply(&multiply(&si, &core, spec)?, &s, spec)?;
        p = multiply(&p, &s, spec)?;
    }
    Ok((core, p))
}

/// Exact conjugacy oracle from the free-product normal form: cyclically
/// reduced syllable sequences are conjugate precisely when one is a
/// rotation of the other (abelian factors make within-factor conjugacy
/// equality). Returns a conjugator `c` with `c⁻¹ g c = h`.
pub fn conjugate_exact(
    g: &GroupElement,
    h: &GroupElement,
    spec: &GroupSpec,
) -> Result<Option<GroupElement>> {
    let (cg, pg) = cyclic_core(g, spec)?;
    let (ch, ph) = cyclic_core(h, spec)?;
    let d = if cg.syllable_count() <= 1 || ch.syllable_count() <= 1 {
        if cg == ch {
            Some(GroupElement::identity())
        } else {
            None
        }
    } else if cg.syllable_count() != ch.syllable_count() {
        None
    } else {
        let k = cg.syllable_count();
        let mut found = None;
        for r in 0..k {
            let rotated: Vec<&Syllable> =
                cg.syllables[r..].iter().chain(&cg.syllables[..r]).collect();
            if rotated.into_iter().eq(ch.syllables.iter()) {
                let mut d = GroupElement::identity();
                for s in &cg.syllables[..r] {
                    let s = GroupElement { syllables: vec![s.clone()] };
                    d = multiply(&d, &s, spec)?;
                }
                found = Some(d);
                break;
            }
        }
        found
    };
    match d {
        Some(d) => {
            let c = multiply(&multiply(&pg, &d, spec)?, &invert(&ph, spec), spec)?;
            Ok(Some(c))
        }
        None => Ok(None),
    }
}

/// Elements of all cyclic shifts of `w`: index `i` holds the value of
/// the shift moving the length-`i` prefix to the end. Computed
/// incrementally, one letter conjugation per step.
pub fn shift_elements(w: &Word, metric: &Metric) -> Result<Vec<GroupElement>> {
    let spec = &metric.spec;
    let mut g = evaluate(w, &metric.alphabet, spec)?;
    let mut out = Vec::with_capacity(w.len().max(1));
    out.push(g.clone());
    for &li in w.0.iter().take(w.len().saturating_sub(1)) {
        let x = &metric.alphabet.letter(li as usize).element;
        g = multiply(&multiply(&invert(x, spec), &g, spec)?, x, spec)?;
        out.push(g.clone());
    }
    Ok(out)
}

/// Decide whether `u` and `v` represent conjugate elements: reduce both,
/// then look for a conjugator of length at most `b` taking some cyclic
/// shift of the one to some cyclic shift of the other. Candidates are
/// tried by length, then lexicographically; the first hit is assembled
/// into a word `c` with `c⁻¹ π(u) c = π(v)`. Complete only when `b`
/// dominates the conjugacy-diagram constant for the reduced lengths
/// involved.
pub fn decide_conjugacy(
    u: &Word,
    v: &Word,
    metric: &Metric,
    phi: &PhiSet,
    b: u32,
) -> Result<Option<Word>> {
    let ru = reduce(u, metric, phi)?;
    let rv = reduce(v, metric, phi)?;
    let us = shift_elements(&ru.word, metric)?;
    let vs = shift_elements(&rv.word, metric)?;
    let mut vmap: HashMap<&GroupElement, usize> = HashMap::with_capacity(vs.len());
    for (j, e) in vs.iter().enumerate() {
        vmap.entry(e).or_insert(j);
    }
    let assemble = |i: usize, dw: &Word, j: usize| -> Result<Word> {
        let mut c = ru.conjugator.concat(&ru.word.prefix(i)).concat(dw);
        c = c.concat(&rv.word.prefix(j).inverse(&metric.alphabet, &metric.spec)?);
        c = c.concat(&rv.conjugator.inverse(&metric.alphabet, &metric.spec)?);
        Ok(c)
    };
    for (i, ue) in us.iter().enumerate() {
        if let Some(&j) = vmap.get(ue) {
            return Ok(Some(assemble(i, &Word::empty(), j)?));
        }
    }
    if b > 0 {
        let ball = metric.ball.as_ref().ok_or(Error::OutOfRange { radius: 0 })?;
        if ball.radius < b {
            return Err(Error::OutOfRange { radius: ball.radius });
        }
        for k in 1..=b {
            let mut cands: Vec<(Word, &GroupElement)> = ball
                .sphere(k as usize)
                .iter()
                .map(|e| Ok((lex_least_geodesic(metric, e)?, e)))
                .collect::<Result<_>>()?;
            cands.sort();
            for (dw, d) in &cands {
                let di = invert(d, &metric.spec);
                for (i, ue) in us.iter().enumerate() {
                    let t = multiply(&multiply(&di, ue, &metric.spec)?, d, &metric.spec)?;
                    if let Some(&j) = vmap.get(&t) {
                        return Ok(Some(assemble(i, dw, j)?));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// `decide_conjugacy` with the verdict cross-checked against the exact
/// oracle and the returned conjugator verified; any discrepancy raises a
/// soundness alert.
pub fn decide_conjugacy_checked(
    u: &Word,
    v: &Word,
    metric: &Metric,
    phi: &PhiSet,
    b: u32,
) -> Result<Option<Word>> {
    let got = decide_conjugacy(u, v, metric, phi, b)?;
    let gu = evaluate(u, &metric.alphabet, &metric.spec)?;
    let gv = evaluate(v, &metric.alphabet, &metric.spec)?;
    let oracle = conjugate_exact(&gu, &gv, &metric.spec)?;
    match (&got, &oracle) {
        (Some(c), Some(_)) => {
            let ce = evaluate(c, &metric.alphabet, &metric.spec)?;
            let lhs = multiply(&multiply(&invert(&ce, &metric.spec), &gu, &metric.spec)?, &ce, &metric.spec)?;
            if lhs != gv {
                return Err(Error::SoundnessAlert);
            }
        }
        (None, None) => {}
        _ => return Err(Error::SoundnessAlert),
    }
    Ok(got)
}

/// Minimal generator length over the conjugacy class of `g`. Purely
/// parabolic alphabets are syllable-additive, so the cyclic core is
/// already minimal; otherwise the minimum over syllable rotations of the
/// core is taken (rotations exhaust the cyclically reduced class
/// members).
pub fn min_conj_length(g: &GroupElement, metric: &Metric) -> Result<u32> {
    let (core, _) = cyclic_core(g, &metric.spec)?;
    if metric.purely_parabolic() || core.syllable_count() <= 1 {
        return metric.word_length(&core);
    }
    let k = core.syllable_count();
    let mut best: Option<u32> = None;
    for r in 0..k {
        // ends lie in distinct factors, so the rotation is a valid
        // normal form as-is
        let syl: Vec<Syllable> =
            core.syllables[r..].iter().chain(&core.syllables[..r]).cloned().collect();
        let rot = GroupElement { syllables: syl };
        match metric.word_length(&rot) {
            // a rotation beyond the ball is longer than any in-ball one
            Err(Error::OutOfRange { .. }) if best.is_some() => {}
            other => best = Some(best.unwrap_or(u32::MAX).min(other?)),
        }
    }
    best.ok_or(Error::OutOfRange {
        radius: metric.ball.as_ref().map(|b| b.radius).unwrap_or(0),
    })
}

/// The word realizes the minimal length in its conjugacy class.
pub fn is_conjugacy_geodesic(w: &Word, metric: &Metric) -> Result<bool> {
    langmach::is_conjugacy_geodesic(w, metric, &|g| min_conj_length(g, metric))
}

/// All words of length ≤ `l_max` all of whose cyclic shifts are
/// geodesic, in sorted order.
pub fn cyclic_geodesics(metric: &Metric, l_max: usize) -> Result<Vec<Word>> {
    let mut out = Vec::new();
    let mut stack = vec![Word::empty()];
    while let Some(w) = stack.pop() {
        if is_cyclic_geodesic(&w, metric)? {
            out.push(w.clone());
        }
        if w.len() < l_max {
            for i in 0..metric.alphabet.len() as u32 {
                let mut v = w.clone();
                v.0.push(i);
                // cyclic geodesics are geodesic, so geodesy prunes safely
                if metric.is_geodesic(&v)? {
                    stack.push(v);
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Canonical conjugacy-class key: the lexicographically least rotation
/// of the cyclic core's syllable sequence.
pub fn class_key(g: &GroupElement, spec: &GroupSpec) -> Result<Vec<Syllable>> {
    let (core, _) = cyclic_core(g, spec)?;
    let k = core.syllable_count();
    if k <= 1 {
        return Ok(core.syllables);
    }
    let mut best: Option<Vec<Syllable>> = None;
    for r in 0..k {
        let rot: Vec<Syllable> =
            core.syllables[r..].iter().chain(&core.syllables[..r]).cloned().collect();
        if best.as_ref().map_or(true, |b| rot < *b) {
            best = Some(rot);
        }
    }
    Ok(best.unwrap())
}

/// Smallest conjugator length realizing `d⁻¹ u_i d = v_j` over all shift
/// pairs, capped at `cap`: 0 when some shifts already coincide, else a
/// sphere-by-sphere search. Returns `cap` when no shorter conjugator is
/// found within the ball.
fn shift_conjugator_length(
    us: &[GroupElement],
    vset: &HashMap<&GroupElement, usize>,
    metric: &Metric,
    cap: u32,
) -> Result<u32> {
    if us.iter().any(|u| vset.contains_key(u)) {
        return Ok(0);
    }
    if let Some(ball) = &metric.ball {
        for k in 1..cap.min(ball.radius + 1) {
            for d in ball.sphere(k as usize) {
                let di = invert(d, &metric.spec);
                for u in us {
                    let t = multiply(&multiply(&di, u, &metric.spec)?, d, &metric.spec)?;
                    if vset.contains_key(&t) {
                        return Ok(k);
                    }
                }
            }
        }
    }
    Ok(cap)
}

/// Least `k ≤ k_max` bounding, for every pair of cyclic geodesics of
/// length ≤ `l_max` with conjugate values, the smaller of the pair's
/// longer length and the shortest shift-pair conjugator. `None` when the
/// bound is exceeded. Empirical: valid only up to `l_max`.
pub fn check_bcd(metric: &Metric, l_max: usize, k_max: u32) -> Result<Option<u32>> {
    let words = cyclic_geodesics(metric, l_max)?;
    let mut classes: HashMap<Vec<Syllable>, Vec<usize>> = HashMap::new();
    let mut shifts: Vec<Vec<GroupElement>> = Vec::with_capacity(words.len());
    for (idx, w) in words.iter().enumerate() {
        let g = evaluate(w, &metric.alphabet, &metric.spec)?;
        classes.entry(class_key(&g, &metric.spec)?).or_default().push(idx);
        shifts.push(shift_elements(w, metric)?);
    }
    let pairs: Vec<(usize, usize)> = classes
        .values()
        .flat_map(|m| {
            m.iter().flat_map(move |&a| m.iter().filter(move |&&b| b >= a).map(move |&b| (a, b)))
        })
        .collect();
    let worst = pairs
        .par_iter()
        .map(|&(a, b)| {
            let cap = words[a].len().max(words[b].len()) as u32;
            if cap == 0 {
                return Ok(0u32);
            }
            let mut vset: HashMap<&GroupElement, usize> = HashMap::new();
            for (j, e) in shifts[b].iter().enumerate() {
                vset.entry(e).or_insert(j);
            }
            shift_conjugator_length(&shifts[a], &vset, metric, cap)
        })
        .try_reduce(|| 0u32, |x, y| Ok(x.max(y)))?;
    Ok(if worst <= k_max { Some(worst) } else { None })
}

/// Least `B ≤ b_max` such that every cyclic geodesic `U` of length in
/// `[B, l_max]` that is not a conjugacy geodesic admits a shift `U'` and
/// `|d| ≤ B` with `|d·π(U')·d⁻¹|` shorter than `U`. Requires the ball
/// radius to reach `l_max` (conjugates escaping the ball count as not
/// shorter). `None` when no such bound exists below `b_max`.
pub fn check_nsc(metric: &Metric, l_max: usize, b_max: u32) -> Result<Option<u32>> {
    let ball = metric.ball.as_ref().ok_or(Error::OutOfRange { radius: 0 })?;
    if (ball.radius as usize) < l_max {
        return Err(Error::OutOfRange { radius: ball.radius });
    }
    let words = cyclic_geodesics(metric, l_max)?;
    // (word length, least conjugator bound shortening it) per cyclic
    // geodesic that is not already a conjugacy geodesic
    let data: Vec<(u32, Option<u32>)> = words
        .par_iter()
        .map(|w| -> Result<Option<(u32, Option<u32>)>> {
            let len = w.len() as u32;
            let g = evaluate(w, &metric.alphabet, &metric.spec)?;
            if min_conj_length(&g, metric)? >= len {
                return Ok(None);
            }
            let us = shift_elements(w, metric)?;
            let mut needed = None;
            'search: for k in 1..=b_max.min(ball.radius) {
                for d in ball.sphere(k as usize) {
                    let di = invert(d, &metric.spec);
                    for u in &us {
                        let t = multiply(&multiply(d, u, &metric.spec)?, &di, &metric.spec)?;
                        if matches!(ball.length(&t), Some(l) if l < len) {
                            needed = Some(k);
                            break 'search;
                        }
                    }
                }
            }
            Ok(Some((len, needed)))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    for b in 0..=b_max {
        let ok = data
            .iter()
            .all(|&(len, needed)| len < b || matches!(needed, Some(k) if k <= b));
        if ok {
            return Ok(Some(b));
        }
    }
    Ok(None)
}
