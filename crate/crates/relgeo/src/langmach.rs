//! Language machinery specific to the group metric: the geodesic
//! acceptor built from fellow-traveler data, the relative language over
//! factor languages, and deciders for cyclic/conjugacy geodesics and
//! shortlex normal forms.

use std::collections::{BTreeMap, HashMap, VecDeque};

use crate::automata::Dfa;
use crate::error::{Error, Result};
use crate::factorize::in_rel;
use crate::group::{evaluate, invert, multiply, GroupElement, Word};
use crate::metric::{BallTable, Metric};

/// Geodesic acceptor with its per-state distance profiles kept for
/// diagnostics: state i ↦ map φ over the ball of radius C, φ(g) being the
/// predicted length change when the path is extended by g.
#[derive(Debug, Clone)]
pub struct NsAutomaton {
    /// unminimized machine; state indices match `phis`
    pub dfa: Dfa,
    /// nontrivial ball elements of length ≤ C, the domain of every φ
    pub domain: Vec<GroupElement>,
    /// None marks the fail state
    pub phis: Vec<Option<Vec<i32>>>,
    pub c: u32,
}

fn ns_build(
    metric: &Metric,
    allowed: &[usize],
    ball: &BallTable,
    c: u32,
) -> Result<NsAutomaton> {
    if c == 0 {
        return Err(Error::DegenerateConstant);
    }
    if ball.radius < 2 * c + 1 {
        return Err(Error::OutOfRange { radius: ball.radius });
    }
    let spec = &metric.spec;
    let mut domain: Vec<GroupElement> = Vec::new();
    for k in 1..=c as usize {
        domain.extend(ball.sphere(k).iter().cloned());
    }
    let index_of: HashMap<&GroupElement, usize> =
        domain.iter().enumerate().map(|(i, g)| (g, i)).collect();
    let d = domain.len();
    let cc = c as i32;

    // per (allowed letter, domain position): either the domain index of
    // x·g, or the domain indices of its ball neighbors (with the identity
    // contributing value 0 directly)
    enum Move {
        Identity,
        Inside(usize),
        Outside { neighbors: Vec<usize>, identity_close: bool },
    }
    let mut moves: Vec<Vec<Move>> = Vec::with_capacity(allowed.len());
    let mut letter_pos: Vec<usize> = Vec::with_capacity(allowed.len());
    for &li in allowed {
        let x = &metric.alphabet.letter(li).element;
        let xi = *index_of
            .get(x)
            .ok_or(Error::OutOfRange { radius: ball.radius })?;
        letter_pos.push(xi);
        let mut row = Vec::with_capacity(d);
        for g in &domain {
            let xg = multiply(x, g, spec)?;
            if xg.is_identity() {
                row.push(Move::Identity);
                continue;
            }
            match index_of.get(&xg) {
                Some(&j) => row.push(Move::Inside(j)),
                None => {
                    let mut neighbors = Vec::new();
                    let mut identity_close = false;
                    let dist_le_1 = |h: &GroupElement| -> Result<bool> {
                        let diff = multiply(&invert(h, spec), &xg, spec)?;
                        Ok(ball.length(&diff).is_some_and(|l| l <= 1))
                    };
                    if ball.length(&xg).is_some_and(|l| l <= 1) {
                        identity_close = true;
                    }
                    for (j, h) in domain.iter().enumerate() {
                        if dist_le_1(h)? {
                            neighbors.push(j);
                        }
                    }
                    row.push(Move::Outside { neighbors, identity_close });
                }
            }
        }
        moves.push(row);
    }

    let start_phi: Vec<i32> = domain.iter().map(|g| ball.length(g).unwrap() as i32).collect();
    let mut states: HashMap<Vec<i32>, usize> = HashMap::new();
    let mut phis = vec![Some(start_phi.clone())];
    states.insert(start_phi, 0);
    let fail = usize::MAX; // patched after discovery
    let k = metric.alphabet.len();
    let mut delta: Vec<Vec<usize>> = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(s) = queue.pop_front() {
        let phi = phis[s].clone().unwrap();
        let mut row = vec![fail; k];
        for (ai, &li) in allowed.iter().enumerate() {
            if phi[letter_pos[ai]] != 1 {
                continue; // fail
            }
            let mut next = Vec::with_capacity(d);
            for gi in 0..d {
                let val = match &moves[ai][gi] {
                    Move::Identity => -1,
                    Move::Inside(j) => phi[*j] - 1,
                    Move::Outside { neighbors, identity_close } => {
                        let mut best = if *identity_close { Some(0) } else { None };
                        for &j in neighbors {
                            best = Some(best.map_or(phi[j], |b: i32| b.min(phi[j])));
                        }
                        best.unwrap_or(cc)
                    }
                };
                next.push(val.clamp(-cc, cc));
            }
            let id = match states.get(&next) {
                Some(&id) => id,
                None => {
                    let id = phis.len();
                    states.insert(next.clone(), id);
                    phis.push(Some(next));
                    queue.push_back(id);
                    id
                }
            };
            row[li] = id;
        }
        while delta.len() <= s {
            delta.push(Vec::new());
        }
        delta[s] = row;
    }
    let fail_id = phis.len();
    phis.push(None);
    delta.push(vec![fail_id; k]);
    for row in &mut delta {
        for t in row.iter_mut() {
            if *t == fail {
                *t = fail_id;
            }
        }
    }
    let mut accept = vec![true; fail_id];
    accept.push(false);
    let dfa = Dfa::new(k, 0, accept, delta);
    Ok(NsAutomaton { dfa, domain, phis, c })
}

/// Geodesic-word acceptor for the whole group: sound and complete exactly
/// when C is a valid falsification constant for the alphabet.
pub fn ns_automaton_full(metric: &Metric, c: u32) -> Result<NsAutomaton> {
    let ball = metric.ball.as_ref().ok_or(Error::OutOfRange { radius: 0 })?;
    let allowed: Vec<usize> = (0..metric.alphabet.len()).collect();
    ns_build(metric, &allowed, ball, c)
}

/// Minimized geodesic acceptor.
pub fn ns_automaton(metric: &Metric, c: u32) -> Result<Dfa> {
    Ok(ns_automaton_full(metric, c)?.dfa.minimize())
}

/// Geodesic acceptor for words over a single factor's letters, as a DFA
/// over the full alphabet (other letters reject).
pub fn factor_geodesic_dfa(metric: &Metric, omega: usize, c: u32) -> Result<Dfa> {
    let ball = metric
        .factor_balls
        .get(&omega)
        .ok_or(Error::OutOfRange { radius: 0 })?;
    let allowed = metric.alphabet.factor_letters(omega);
    Ok(ns_build(metric, &allowed, ball, c)?.dfa.minimize())
}

/// Words over a factor's letters with non-decreasing letter indices.
pub fn sorted_letters_dfa(metric: &Metric, omega: usize) -> Dfa {
    let k = metric.alphabet.len();
    let allowed = metric.alphabet.factor_letters(omega);
    // state 0 = start; state 1+i = "last letter had rank i"; sink last
    let n = allowed.len() + 1;
    let sink = n;
    let mut delta = vec![vec![sink; k]; n + 1];
    for (rank, &li) in allowed.iter().enumerate() {
        delta[0][li] = rank + 1;
        for prev in 0..=rank {
            delta[prev + 1][li] = rank + 1;
        }
    }
    Dfa::new(k, 0, vec![true; n].into_iter().chain([false]).collect(), delta).minimize()
}

/// Shortlex factor language: geodesic and letter-sorted. For the standard
/// abelian alphabets this picks exactly one word per factor element.
pub fn shortlex_factor_dfa(metric: &Metric, omega: usize, c: u32) -> Result<Dfa> {
    factor_geodesic_dfa(metric, omega, c)?.intersect(&sorted_letters_dfa(metric, omega))
}

/// Intersection of the geodesic acceptor with a prefix-closed regular
/// language.
pub fn restricted_geodesics(geo: &Dfa, l: &Dfa) -> Result<Dfa> {
    if !l.is_prefix_closed() {
        return Err(Error::NotPrefixClosed);
    }
    geo.intersect(l)
}

/// Depth of the exhaustive factor-language sanity check.
const L1_CHECK_LEN: usize = 5;

/// Verify that a factor language is geodesic and covers every factor
/// element in range: ε accepted, every accepted word is factor-geodesic,
/// every factor-ball element has an accepted geodesic representative.
pub fn check_l1(metric: &Metric, omega: usize, lang: &Dfa) -> Result<()> {
    let violation = |witness: Option<Word>| Error::L1Violation { omega, witness };
    if !lang.accepts(&Word::default()) {
        return Err(violation(Some(Word::default())));
    }
    let ball = metric
        .factor_balls
        .get(&omega)
        .ok_or(Error::OutOfRange { radius: 0 })?;
    let depth = L1_CHECK_LEN.min(ball.radius as usize);
    // every accepted word up to the check depth is a factor geodesic
    let mut stack = vec![Word::default()];
    while let Some(w) = stack.pop() {
        if lang.accepts(&w) {
            let only_factor =
                w.0.iter().all(|&i| metric.alphabet.letter(i as usize).parabolic == Some(omega));
            if !only_factor || !metric.is_factor_geodesic(omega, &w)? {
                return Err(violation(Some(w)));
            }
        }
        if w.len() < depth {
            for i in 0..metric.alphabet.len() as u32 {
                let mut v = w.clone();
                v.0.push(i);
                stack.push(v);
            }
        }
    }
    // coverage on the factor ball
    for k in 0..=depth {
        for h in ball.sphere(k) {
            let covered = factor_geodesics(metric, omega, h)?.iter().any(|w| lang.accepts(w));
            if !covered {
                return Err(violation(None));
            }
        }
    }
    Ok(())
}

/// All factor-geodesic words for a factor element.
fn factor_geodesics(metric: &Metric, omega: usize, h: &GroupElement) -> Result<Vec<Word>> {
    let n = metric.factor_length(omega, h)?;
    let allowed = metric.alphabet.factor_letters(omega);
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    factor_geo_dfs(metric, omega, &allowed, h.clone(), n, &mut prefix, &mut out)?;
    Ok(out)
}

fn factor_geo_dfs(
    metric: &Metric,
    omega: usize,
    allowed: &[usize],
    remainder: GroupElement,
    remaining: u32,
    prefix: &mut Vec<u32>,
    out: &mut Vec<Word>,
) -> Result<()> {
    if remaining == 0 {
        out.push(Word(prefix.clone()));
        return Ok(());
    }
    for &i in allowed {
        let inv = invert(&metric.alphabet.letter(i).element, &metric.spec);
        let next = multiply(&inv, &remainder, &metric.spec)?;
        if metric.factor_length(omega, &next).is_ok_and(|l| l == remaining - 1) {
            prefix.push(i as u32);
            factor_geo_dfs(metric, omega, allowed, next, remaining - 1, prefix, out)?;
            prefix.pop();
        }
    }
    Ok(())
}

/// DFA accepting exactly the single letters in `letters`.
fn letters_once(k: usize, letters: &[usize]) -> Dfa {
    let mut delta = vec![vec![2usize; k]; 3];
    for &l in letters {
        delta[0][l] = 1;
    }
    Dfa::new(k, 0, vec![false, true, false], delta)
}

/// The relative language: all words whose factorization blocks lie in the
/// given factor languages. Built by complementing the explicit
/// bad-block pattern union.
pub fn rel_language(metric: &Metric, factor_langs: &BTreeMap<usize, Dfa>) -> Result<Dfa> {
    let k = metric.alphabet.len();
    for (&omega, lang) in factor_langs {
        check_l1(metric, omega, lang)?;
    }
    let all = Dfa::all_words(k);
    let untagged: Vec<usize> =
        (0..k).filter(|&i| metric.alphabet.letter(i).parabolic.is_none()).collect();
    let mut bad = Dfa::empty(k);
    for (&omega, lang) in factor_langs {
        let factor_letters = metric.alphabet.factor_letters(omega);
        let factor_star = Dfa::letters_star(k, &factor_letters);
        // words over the factor letters that the language rejects
        let lc = factor_star.difference(lang)?;
        // letters that end a block on the right
        let s_letters: Vec<usize> =
            (0..k).filter(|&i| metric.alphabet.letter(i).parabolic != Some(omega)).collect();
        let s = letters_once(k, &s_letters);
        // separators that can precede a block: a nonempty run over some
        // other factor, or an untagged letter
        let mut p = letters_once(k, &untagged);
        for (&mu, _) in factor_langs {
            if mu == omega {
                continue;
            }
            let mu_letters = metric.alphabet.factor_letters(mu);
            let mu_star = Dfa::letters_star(k, &mu_letters);
            let mu_nonempty = mu_star.difference(&Dfa::epsilon(k))?;
            p = p.union(&mu_nonempty)?;
        }
        // also factors without an explicit language contribute separators
        for mu in 0..metric.spec.factors.len() {
            if mu == omega || factor_langs.contains_key(&mu) {
                continue;
            }
            let mu_letters = metric.alphabet.factor_letters(mu);
            if mu_letters.is_empty() {
                continue;
            }
            let mu_star = Dfa::letters_star(k, &mu_letters);
            p = p.union(&mu_star.difference(&Dfa::epsilon(k))?)?;
        }
        let xp = all.concat(&p)?;
        let sx = s.concat(&all)?;
        let t1 = xp.concat(&lc)?.concat(&sx)?;
        let t2 = xp.concat(&lc)?;
        let t3 = lc.concat(&sx)?;
        let t4 = lc;
        bad = bad.union(&t1)?.union(&t2)?.union(&t3)?.union(&t4)?;
    }
    Ok(bad.complement())
}

/// Direct decider for the same language, used to cross-check the automaton.
pub fn in_rel_language(
    w: &Word,
    metric: &Metric,
    factor_langs: &BTreeMap<usize, Dfa>,
) -> Result<bool> {
    let langs = |omega: usize, u: &Word| -> Result<bool> {
        match factor_langs.get(&omega) {
            Some(l) => Ok(l.accepts(u)),
            None => Ok(true),
        }
    };
    in_rel(w, &metric.alphabet, &langs)
}

pub fn is_cyclic_geodesic(w: &Word, metric: &Metric) -> Result<bool> {
    for i in 0..w.len().max(1) {
        if !metric.is_geodesic(&w.cyclic_shift(i))? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// True when the word's length equals the minimum over its conjugacy
/// class; the class minimum is supplied by the caller.
pub fn is_conjugacy_geodesic(
    w: &Word,
    metric: &Metric,
    class_min: &dyn Fn(&GroupElement) -> Result<u32>,
) -> Result<bool> {
    let g = evaluate(w, &metric.alphabet, &metric.spec)?;
    Ok(w.len() as u32 == class_min(&g)?)
}

/// True when the word is the lexicographically least geodesic of its
/// element (letter order = alphabet order).
pub fn is_shortlex(w: &Word, metric: &Metric) -> Result<bool> {
    if !metric.is_geodesic(w)? {
        return Ok(false);
    }
    let g = evaluate(w, &metric.alphabet, &metric.spec)?;
    let geodesics = metric.enumerate_geodesics(&g)?;
    Ok(geodesics.first() == Some(w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factorize::factorize;
    use crate::group::{GroupSpec, MarkedAlphabet};
    use crate::samples;

    fn metric(sample: (GroupSpec, MarkedAlphabet), radius: u32) -> Metric {
        Metric::build(sample.0, sample.1, radius, radius).unwrap()
    }

    /// Exhaustive language equality up to the given length.
    fn agrees_with(
        dfa: &Dfa,
        metric: &Metric,
        max_len: usize,
        truth: impl Fn(&Word) -> bool,
    ) -> bool {
        let k = metric.alphabet.len() as u32;
        let mut stack = vec![Word::default()];
        while let Some(w) = stack.pop() {
            if dfa.accepts(&w) != truth(&w) {
                return false;
            }
            if w.len() < max_len {
                for i in 0..k {
                    let mut v = w.clone();
                    v.0.push(i);
                    stack.push(v);
                }
            }
        }
        true
    }

    #[test]
    fn geodesic_acceptor_z() {
        let m = metric(samples::zline(), 9);
        let a = ns_automaton(&m, 1).unwrap();
        assert!(agrees_with(&a, &m, 8, |w| m.is_geodesic(w).unwrap()));
        assert!(a.accepts(&Word::default()));
    }

    #[test]
    fn geodesic_acceptor_f2() {
        let m = metric(samples::free2(), 6);
        let a = ns_automaton(&m, 1).unwrap();
        assert!(agrees_with(&a, &m, 6, |w| m.is_geodesic(w).unwrap()));
        assert_eq!(a.minimize().state_count(), 6, "start, 4 last-letter, sink");
    }

    #[test]
    fn geodesic_acceptor_z2_needs_c2() {
        let m = metric(samples::zsquare(), 6);
        // C=1 already recognizes the geodesics here (single-letter length
        // changes are all the automaton needs in an abelian group), and so
        // does the certified C=2
        let a1 = ns_automaton(&m, 1).unwrap();
        assert!(agrees_with(&a1, &m, 6, |w| m.is_geodesic(w).unwrap()));
        let a2 = ns_automaton(&m, 2).unwrap();
        assert!(agrees_with(&a2, &m, 6, |w| m.is_geodesic(w).unwrap()));
    }

    #[test]
    fn degenerate_constant_rejected() {
        let m = metric(samples::zline(), 4);
        assert!(matches!(ns_automaton(&m, 0), Err(Error::DegenerateConstant)));
        assert!(matches!(ns_automaton(&m, 3), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn acceptor_profile_semantics() {
        // at every state reached by a geodesic word, φ predicts the exact
        // length change |Wg| − |W| for each ball element g
        let m = metric(samples::free2_t(), 7);
        let ns = ns_automaton_full(&m, 2).unwrap();
        let k = m.alphabet.len() as u32;
        let mut stack = vec![Word::default()];
        while let Some(w) = stack.pop() {
            let s = ns.dfa.state_after(&w);
            if let Some(phi) = &ns.phis[s] {
                let gw = evaluate(&w, &m.alphabet, &m.spec).unwrap();
                for (gi, g) in ns.domain.iter().enumerate() {
                    let wg = multiply(&gw, g, &m.spec).unwrap();
                    let diff = m.word_length(&wg).unwrap() as i32 - w.len() as i32;
                    assert_eq!(diff, phi[gi], "word {w}, g {}", crate::group::format_element(g));
                }
            }
            if w.len() < 5 {
                for i in 0..k {
                    let mut v = w.clone();
                    v.0.push(i);
                    stack.push(v);
                }
            }
        }
    }

    #[test]
    fn restricted_geodesics_examples() {
        let m = metric(samples::free2(), 5);
        let geo = ns_automaton(&m, 1).unwrap();
        let all = Dfa::all_words(4);
        assert!(restricted_geodesics(&geo, &all).unwrap().equivalent(&geo).unwrap());
        let eps = Dfa::epsilon(4);
        assert!(restricted_geodesics(&geo, &eps).unwrap().equivalent(&eps).unwrap());
        // words avoiding b and b^-1: counts 1,2,2,2,...
        let b = m.alphabet.symbol_index("b").unwrap();
        let binv = m.alphabet.inverse_letter(&m.spec, b).unwrap();
        let avoid: Vec<usize> = (0..4).filter(|&i| i != b && i != binv).collect();
        let l = Dfa::letters_star(4, &avoid);
        let r = restricted_geodesics(&geo, &l).unwrap();
        assert_eq!(r.count_words(0), 1u32.into());
        for n in 1..=6 {
            assert_eq!(r.count_words(n), 2u32.into());
        }
        // non-prefix-closed restriction rejected
        let single = Dfa::single_word(4, &m.alphabet.parse_word(&m.spec, "a b").unwrap());
        assert!(matches!(restricted_geodesics(&geo, &single), Err(Error::NotPrefixClosed)));
    }

    #[test]
    fn factor_geodesic_and_shortlex_machines() {
        let m = metric(samples::zsq_star_z(), 5);
        let geo0 = factor_geodesic_dfa(&m, 0, 2).unwrap();
        let truth = |w: &Word| {
            w.0.iter().all(|&i| m.alphabet.letter(i as usize).parabolic == Some(0))
                && m.is_factor_geodesic(0, w).unwrap()
        };
        assert!(agrees_with(&geo0, &m, 5, truth));
        // shortlex picks exactly one word per factor element
        let sl = shortlex_factor_dfa(&m, 0, 2).unwrap();
        let fb = &m.factor_balls[&0];
        for r in 0..=4usize {
            for h in fb.sphere(r) {
                let hits: Vec<Word> = factor_geodesics(&m, 0, h)
                    .unwrap()
                    .into_iter()
                    .filter(|w| sl.accepts(w))
                    .collect();
                assert_eq!(hits.len(), 1, "element {}", crate::group::format_element(h));
            }
        }
    }

    #[test]
    fn l1_check_rejects_bad_languages() {
        let m = metric(samples::zsquare(), 5);
        let geo = factor_geodesic_dfa(&m, 0, 2).unwrap();
        assert!(check_l1(&m, 0, &geo).is_ok());
        // no ε: fails immediately
        let noeps = geo.difference(&Dfa::epsilon(4)).unwrap();
        assert!(matches!(check_l1(&m, 0, &noeps), Err(Error::L1Violation { .. })));
        // all words: contains non-geodesics
        assert!(matches!(check_l1(&m, 0, &Dfa::all_words(4)), Err(Error::L1Violation { .. })));
        // missing coverage: drop words containing e2
        let e2 = m.alphabet.symbol_index("e2").unwrap();
        let e2inv = m.alphabet.inverse_letter(&m.spec, e2).unwrap();
        let avoid: Vec<usize> = (0..4).filter(|&i| i != e2 && i != e2inv).collect();
        let partial = geo.intersect(&Dfa::letters_star(4, &avoid)).unwrap();
        assert!(matches!(check_l1(&m, 0, &partial), Err(Error::L1Violation { .. })));
    }

    #[test]
    fn rel_language_geodesic_factors() {
        // with L_ω = factor geodesics, Rel = "no parabolic shortenings"
        let m = metric(samples::zsq_star_z(), 5);
        let mut langs = BTreeMap::new();
        langs.insert(0usize, factor_geodesic_dfa(&m, 0, 2).unwrap());
        langs.insert(1usize, factor_geodesic_dfa(&m, 1, 1).unwrap());
        let rel = rel_language(&m, &langs).unwrap();
        let truth = |w: &Word| {
            let f = factorize(w, &m.alphabet);
            !crate::factorize::has_parabolic_shortening(&f, &m).unwrap()
        };
        assert!(agrees_with(&rel, &m, 5, truth));
    }

    #[test]
    fn rel_language_single_factor_is_factor_language() {
        let m = metric(samples::zsquare(), 5);
        let geo = factor_geodesic_dfa(&m, 0, 2).unwrap();
        let mut langs = BTreeMap::new();
        langs.insert(0usize, geo.clone());
        let rel = rel_language(&m, &langs).unwrap();
        assert!(rel.equivalent(&geo).unwrap());
    }

    #[test]
    fn rel_language_shortlex_blocks() {
        let m = metric(samples::zsq_star_z(), 5);
        let mut langs = BTreeMap::new();
        langs.insert(0usize, shortlex_factor_dfa(&m, 0, 2).unwrap());
        langs.insert(1usize, factor_geodesic_dfa(&m, 1, 1).unwrap());
        let rel = rel_language(&m, &langs).unwrap();
        let w = m.alphabet.parse_word(&m.spec, "e2 e1 t").unwrap();
        assert!(!rel.accepts(&w), "block e2·e1 is not sorted");
        let w = m.alphabet.parse_word(&m.spec, "e1 e2 t").unwrap();
        assert!(rel.accepts(&w));
        // automaton vs direct decider, exhaustive
        let mut stack = vec![Word::default()];
        while let Some(w) = stack.pop() {
            assert_eq!(rel.accepts(&w), in_rel_language(&w, &m, &langs).unwrap(), "word {w}");
            if w.len() < 5 {
                for i in 0..m.alphabet.len() as u32 {
                    let mut v = w.clone();
                    v.0.push(i);
                    stack.push(v);
                }
            }
        }
    }

    #[test]
    fn rel_language_untagged_separators() {
        // in F2+t, an untagged t between blocks separates them
        let m = metric(samples::free2_t(), 5);
        let mut langs = BTreeMap::new();
        langs.insert(0usize, factor_geodesic_dfa(&m, 0, 1).unwrap());
        langs.insert(1usize, factor_geodesic_dfa(&m, 1, 1).unwrap());
        let rel = rel_language(&m, &langs).unwrap();
        let truth = |w: &Word| {
            let f = factorize(w, &m.alphabet);
            !crate::factorize::has_parabolic_shortening(&f, &m).unwrap()
        };
        assert!(agrees_with(&rel, &m, 5, truth));
    }

    #[test]
    fn cyclic_geodesic_examples() {
        let m = metric(samples::free2(), 5);
        let w = m.alphabet.parse_word(&m.spec, "a b a^-1").unwrap();
        assert!(m.is_geodesic(&w).unwrap());
        assert!(!is_cyclic_geodesic(&w, &m).unwrap());
        let w = m.alphabet.parse_word(&m.spec, "a b").unwrap();
        assert!(is_cyclic_geodesic(&w, &m).unwrap());
        // abelian: every geodesic is cyclically geodesic
        let m = metric(samples::zsquare(), 5);
        let k = m.alphabet.len() as u32;
        let mut stack = vec![Word::default()];
        while let Some(w) = stack.pop() {
            if m.is_geodesic(&w).unwrap() {
                assert!(is_cyclic_geodesic(&w, &m).unwrap());
            }
            if w.len() < 4 {
                for i in 0..k {
                    let mut v = w.clone();
                    v.0.push(i);
                    stack.push(v);
                }
            }
        }
    }

    #[test]
    fn shortlex_examples() {
        let m = metric(samples::zsquare(), 4);
        let w = m.alphabet.parse_word(&m.spec, "e1 e2").unwrap();
        assert!(is_shortlex(&w, &m).unwrap());
        let w = m.alphabet.parse_word(&m.spec, "e2 e1").unwrap();
        assert!(!is_shortlex(&w, &m).unwrap());
        assert!(is_shortlex(&Word::default(), &m).unwrap());
        // free group: every freely reduced word is shortlex
        let m = metric(samples::free2(), 6);
        let k = m.alphabet.len() as u32;
        let mut stack = vec![Word::default()];
        while let Some(w) = stack.pop() {
            if m.is_geodesic(&w).unwrap() {
                assert!(is_shortlex(&w, &m).unwrap(), "word {w}");
            }
            if w.len() < 6 {
                for i in 0..k {
                    let mut v = w.clone();
                    v.0.push(i);
                    stack.push(v);
                }
            }
        }
    }
}
