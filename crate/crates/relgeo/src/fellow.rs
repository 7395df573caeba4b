//! Fellow-traveler machinery: synchronous and asynchronous distance
//! between word paths, the empirical falsification constant, and the
//! quantified fellow-traveling checks for normal-form languages.

use crate::error::{Error, Result};
use crate::group::{evaluate, invert, multiply, GroupElement, Word};
use crate::metric::Metric;

/// Vertices of the path spelled by `w` starting at `start`.
pub fn path_elements(w: &Word, metric: &Metric, start: &GroupElement) -> Result<Vec<GroupElement>> {
    let mut out = Vec::with_capacity(w.len() + 1);
    let mut g = start.clone();
    out.push(g.clone());
    for &i in &w.0 {
        g = multiply(&g, &metric.alphabet.letter(i as usize).element, &metric.spec)?;
        out.push(g.clone());
    }
    Ok(out)
}

fn dist(a: &GroupElement, b: &GroupElement, metric: &Metric) -> Result<u32> {
    let diff = multiply(&invert(a, &metric.spec), b, &metric.spec)?;
    metric.word_length(&diff)
}

/// Max over time of the distance between the two paths, shorter path
/// waiting at its endpoint; paths may start at different group elements.
pub fn sync_distance_from(
    u: &Word,
    start_u: &GroupElement,
    v: &Word,
    start_v: &GroupElement,
    metric: &Metric,
) -> Result<u32> {
    let p = path_elements(u, metric, start_u)?;
    let q = path_elements(v, metric, start_v)?;
    let mut max = 0;
    for t in 0..p.len().max(q.len()) {
        let a = &p[t.min(p.len() - 1)];
        let b = &q[t.min(q.len() - 1)];
        max = max.max(dist(a, b, metric)?);
    }
    Ok(max)
}

pub fn sync_distance(u: &Word, v: &Word, metric: &Metric) -> Result<u32> {
    let id = GroupElement::identity();
    sync_distance_from(u, &id, v, &id, metric)
}

/// Monotone staircase witnessing asynchronous K-fellow travel, as grid
/// positions from (0,0) to (ℓU, ℓV); None when the paths do not K-fellow
/// travel.
pub fn async_witness_from(
    u: &Word,
    start_u: &GroupElement,
    v: &Word,
    start_v: &GroupElement,
    k: u32,
    metric: &Metric,
) -> Result<Option<Vec<(usize, usize)>>> {
    let p = path_elements(u, metric, start_u)?;
    let q = path_elements(v, metric, start_v)?;
    let n = p.len();
    let m = q.len();
    let mut close = vec![vec![false; m]; n];
    for i in 0..n {
        for j in 0..m {
            close[i][j] = dist(&p[i], &q[j], metric)? <= k;
        }
    }
    if !close[0][0] || !close[n - 1][m - 1] {
        return Ok(None);
    }
    // predecessor direction for path reconstruction
    let mut from = vec![vec![None::<(usize, usize)>; m]; n];
    let mut reach = vec![vec![false; m]; n];
    reach[0][0] = true;
    for i in 0..n {
        for j in 0..m {
            if !reach[i][j] || !close[i][j] {
                reach[i][j] = reach[i][j] && close[i][j];
                continue;
            }
            for (di, dj) in [(1, 0), (0, 1), (1, 1)] {
                let (a, b) = (i + di, j + dj);
                if a < n && b < m && close[a][b] && !reach[a][b] {
                    reach[a][b] = true;
                    from[a][b] = Some((i, j));
                }
            }
        }
    }
    if !reach[n - 1][m - 1] {
        return Ok(None);
    }
    let mut path = vec![(n - 1, m - 1)];
    while let Some(prev) = from[path.last().unwrap().0][path.last().unwrap().1] {
        path.push(prev);
    }
    path.reverse();
    Ok(Some(path))
}

pub fn async_fellow_from(
    u: &Word,
    start_u: &GroupElement,
    v: &Word,
    start_v: &GroupElement,
    k: u32,
    metric: &Metric,
) -> Result<bool> {
    Ok(async_witness_from(u, start_u, v, start_v, k, metric)?.is_some())
}

pub fn async_fellow(u: &Word, v: &Word, k: u32, metric: &Metric) -> Result<bool> {
    let id = GroupElement::identity();
    async_fellow_from(u, &id, v, &id, k, metric)
}

/// Non-geodesic words all of whose proper subwords are geodesic, up to the
/// given length.
pub fn minimal_nongeodesics(metric: &Metric, l_max: usize) -> Result<Vec<Word>> {
    let mut out = Vec::new();
    let mut stack = vec![Word::default()];
    while let Some(w) = stack.pop() {
        if w.len() >= l_max {
            continue;
        }
        for i in 0..metric.alphabet.len() as u32 {
            let mut v = w.clone();
            v.0.push(i);
            if metric.is_geodesic(&v)? {
                stack.push(v);
            } else {
                // prefix is geodesic by construction; minimality needs the
                // long suffix geodesic too (then all proper subwords are)
                let suffix = Word(v.0[1..].to_vec());
                if metric.is_geodesic(&suffix)? {
                    out.push(v);
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Least K ≤ k_max such that every minimal non-geodesic word of length
/// ≤ l_max asynchronously K-fellow travels a strictly shorter word with
/// the same endpoints. The certificate is empirical, valid only up to
/// l_max.
pub fn fftp_constant(metric: &Metric, l_max: usize, k_max: u32) -> Result<Option<u32>> {
    let mut needed = 0u32;
    for w in minimal_nongeodesics(metric, l_max)? {
        let g = evaluate(&w, &metric.alphabet, &metric.spec)?;
        let glen = metric.word_length(&g)?;
        let mut candidates: Vec<Word> = Vec::new();
        for len in glen..w.len() as u32 {
            candidates.extend(metric.enumerate_words_for(&g, len)?);
        }
        let mut found = None;
        'search: for k in 1..=k_max {
            for v in &candidates {
                if async_fellow(&w, v, k, metric)? {
                    found = Some(k);
                    break 'search;
                }
            }
        }
        match found {
            Some(k) => needed = needed.max(k),
            None => return Ok(None),
        }
    }
    Ok(Some(needed.max(1)))
}

/// Outcome of a coverage/geodesy check for a factor language decider.
#[derive(Debug, Clone)]
pub struct L1Report {
    pub holds: bool,
    /// an accepted non-geodesic word, when geodesy fails
    pub bad_word: Option<Word>,
    /// an uncovered element, when coverage fails
    pub uncovered: Option<GroupElement>,
}

/// Check that a factor language decider accepts only factor geodesics and
/// covers every element of the factor ball up to `depth`.
pub fn check_l1_decider(
    metric: &Metric,
    omega: usize,
    decider: &dyn Fn(&Word) -> Result<bool>,
    depth: usize,
) -> Result<L1Report> {
    let ball = metric
        .factor_balls
        .get(&omega)
        .ok_or(Error::OutOfRange { radius: 0 })?;
    let depth = depth.min(ball.radius as usize);
    let allowed = metric.alphabet.factor_letters(omega);
    let mut stack = vec![Word::default()];
    while let Some(w) = stack.pop() {
        if decider(&w)? && !metric.is_factor_geodesic(omega, &w)? {
            return Ok(L1Report { holds: false, bad_word: Some(w), uncovered: None });
        }
        if w.len() < depth {
            for &i in &allowed {
                let mut v = w.clone();
                v.0.push(i as u32);
                stack.push(v);
            }
        }
    }
    for r in 0..=depth {
        for h in ball.sphere(r) {
            let mut covered = false;
            for cand in metric.enumerate_geodesics(h)? {
                if cand.0.iter().all(|&i| allowed.contains(&(i as usize))) && decider(&cand)? {
                    covered = true;
                    break;
                }
            }
            if !covered {
                return Ok(L1Report { holds: false, bad_word: None, uncovered: Some(h.clone()) });
            }
        }
    }
    Ok(L1Report { holds: true, bad_word: None, uncovered: None })
}

/// Report of a quantified fellow-traveling sweep.
#[derive(Debug, Clone)]
pub struct FellowReport {
    pub holds: bool,
    /// max constant observed over all checked instances
    pub max_constant: u32,
    /// instance that needed the max constant (or failed): (W, companion)
    pub witness: Option<(Word, Word)>,
    /// word length bound of the sweep
    pub bound: usize,
}

enum Quantifier {
    ForAll,
    Exists,
}

fn check_quantified(
    metric: &Metric,
    decider: &dyn Fn(&Word) -> Result<bool>,
    bound: usize,
    k_cap: u32,
    q: Quantifier,
) -> Result<FellowReport> {
    let mut max_constant = 0u32;
    let mut witness = None;
    let id = GroupElement::identity();
    let mut members = Vec::new();
    let mut stack = vec![Word::default()];
    while let Some(w) = stack.pop() {
        if decider(&w)? {
            if !metric.is_geodesic(&w)? {
                return Ok(FellowReport {
                    holds: false,
                    max_constant: 0,
                    witness: Some((w.clone(), w)),
                    bound,
                });
            }
            members.push(w.clone());
        }
        if w.len() < bound {
            for i in 0..metric.alphabet.len() as u32 {
                let mut v = w.clone();
                v.0.push(i);
                stack.push(v);
            }
        }
    }
    for w in &members {
        let gw = evaluate(w, &metric.alphabet, &metric.spec)?;
        for li in 0..metric.alphabet.len() {
            let x = metric.alphabet.letter(li).element.clone();
            // left case: companions U with U = x⁻¹·W, path of U starting at x
            let left_target = multiply(&invert(&x, &metric.spec), &gw, &metric.spec)?;
            // right case: companions V with V = W·x⁻¹, both paths from 1
            let right_target = multiply(&gw, &invert(&x, &metric.spec), &metric.spec)?;
            for (target, start_u) in [(left_target, x.clone()), (right_target, id.clone())] {
                let mut companions = Vec::new();
                for cand in metric.enumerate_geodesics(&target)? {
                    if decider(&cand)? {
                        companions.push(cand);
                    }
                }
                let result: Option<u32> = match q {
                    Quantifier::ForAll => {
                        let mut worst = 0u32;
                        let mut ok = true;
                        for u in &companions {
                            let mut needed = None;
                            for k in 0..=k_cap {
                                if async_fellow_from(w, &id, u, &start_u, k, metric)? {
                                    needed = Some(k);
                                    break;
                                }
                            }
                            match needed {
                                Some(k) => worst = worst.max(k),
                                None => {
                                    ok = false;
                                    break;
                                }
                            }
                        }
                        // no companions: vacuously true
                        if ok {
                            Some(worst)
                        } else {
                            None
                        }
                    }
                    Quantifier::Exists => {
                        let mut best = None;
                        'outer: for k in 0..=k_cap {
                            for u in &companions {
                                if async_fellow_from(w, &id, u, &start_u, k, metric)? {
                                    best = Some(k);
                                    break 'outer;
                                }
                            }
                        }
                        best
                    }
                };
                match result {
                    Some(k) => {
                        if k > max_constant {
                            max_constant = k;
                            witness = companions.first().map(|u| (w.clone(), u.clone()));
                        }
                    }
                    None => {
                        return Ok(FellowReport {
                            holds: false,
                            max_constant,
                            witness: Some((w.clone(), Word::default())),
                            bound,
                        });
                    }
                }
            }
        }
    }
    Ok(FellowReport { holds: true, max_constant, witness, bound })
}

/// Every equal-element companion in the language must fellow-travel after
/// a single-letter multiplication on either side.
pub fn check_lforall(
    metric: &Metric,
    decider: &dyn Fn(&Word) -> Result<bool>,
    bound: usize,
    k_cap: u32,
) -> Result<FellowReport> {
    check_quantified(metric, decider, bound, k_cap, Quantifier::ForAll)
}

/// Some equal-element companion in the language must fellow-travel after
/// a single-letter multiplication on either side.
pub fn check_lexists(
    metric: &Metric,
    decider: &dyn Fn(&Word) -> Result<bool>,
    bound: usize,
    k_cap: u32,
) -> Result<FellowReport> {
    check_quantified(metric, decider, bound, k_cap, Quantifier::Exists)
}

/// Max synchronous fellow-traveling constant over W in the language,
/// letters x, y (or nothing) on either side, and all language companions
/// U with U = xWy; the path of U starts at 1 and the path of W at x.
pub fn biautomatic_fellow_check(
    metric: &Metric,
    decider: &dyn Fn(&Word) -> Result<bool>,
    bound: usize,
) -> Result<FellowReport> {
    let id = GroupElement::identity();
    let mut members = Vec::new();
    let mut stack = vec![Word::default()];
    while let Some(w) = stack.pop() {
        if decider(&w)? {
            if !metric.is_geodesic(&w)? {
                return Ok(FellowReport {
                    holds: false,
                    max_constant: 0,
                    witness: Some((w.clone(), w)),
                    bound,
                });
            }
            members.push(w.clone());
        }
        if w.len() < bound {
            for i in 0..metric.alphabet.len() as u32 {
                let mut v = w.clone();
                v.0.push(i);
                stack.push(v);
            }
        }
    }
    let mut side_elements = vec![id.clone()];
    for li in 0..metric.alphabet.len() {
        side_elements.push(metric.alphabet.letter(li).element.clone());
    }
    let mut max_constant = 0;
    let mut witness = None;
    for w in &members {
        let gw = evaluate(w, &metric.alphabet, &metric.spec)?;
        for x in &side_elements {
            for y in &side_elements {
                let target = multiply(&multiply(x, &gw, &metric.spec)?, y, &metric.spec)?;
                for u in metric.enumerate_geodesics(&target)? {
                    if !decider(&u)? {
                        continue;
                    }
                    let m = sync_distance_from(&u, &id, w, x, metric)?;
                    if m > max_constant {
                        max_constant = m;
                        witness = Some((w.clone(), u.clone()));
                    }
                }
            }
        }
    }
    Ok(FellowReport { holds: true, max_constant, witness, bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{GroupSpec, MarkedAlphabet};
    use crate::samples;

    fn metric(sample: (GroupSpec, MarkedAlphabet), radius: u32) -> Metric {
        Metric::build(sample.0, sample.1, radius, radius).unwrap()
    }

    #[test]
    fn sync_distance_examples() {
        let m = metric(samples::zsquare(), 4);
        let u = m.alphabet.parse_word(&m.spec, "e1 e2").unwrap();
        let v = m.alphabet.parse_word(&m.spec, "e2 e1").unwrap();
        assert_eq!(sync_distance(&u, &u, &m).unwrap(), 0);
        assert_eq!(sync_distance(&u, &v, &m).unwrap(), 2);
        let m = metric(samples::free2(), 4);
        let u = m.alphabet.parse_word(&m.spec, "a b").unwrap();
        let v = m.alphabet.parse_word(&m.spec, "a").unwrap();
        assert_eq!(sync_distance(&u, &v, &m).unwrap(), 1);
    }

    #[test]
    fn async_examples() {
        let m = metric(samples::free2(), 6);
        let u = m.alphabet.parse_word(&m.spec, "a b").unwrap();
        assert!(async_fellow(&u, &u, 0, &m).unwrap());
        let abab = m.alphabet.parse_word(&m.spec, "a b a b").unwrap();
        let ab = m.alphabet.parse_word(&m.spec, "a b").unwrap();
        assert!(!async_fellow(&abab, &ab, 1, &m).unwrap());
        assert!(async_fellow(&abab, &ab, 2, &m).unwrap());
        let m = metric(samples::zsquare(), 4);
        let u = m.alphabet.parse_word(&m.spec, "e1 e2").unwrap();
        let v = m.alphabet.parse_word(&m.spec, "e2 e1").unwrap();
        assert!(async_fellow(&u, &v, 2, &m).unwrap());
    }

    #[test]
    fn sync_bounds_async() {
        let m = metric(samples::free2_t(), 5);
        let words = ["a b", "t", "a b a", "t a", "b^-1 a", "a a b"];
        for u in &words {
            for v in &words {
                let u = m.alphabet.parse_word(&m.spec, u).unwrap();
                let v = m.alphabet.parse_word(&m.spec, v).unwrap();
                let k = sync_distance(&u, &v, &m).unwrap();
                assert!(async_fellow(&u, &v, k, &m).unwrap());
            }
        }
    }

    #[test]
    fn staircase_matches_reparametrization() {
        // the grid witness yields monotone time changes φ, ψ under which
        // the paths stay K-close
        let m = metric(samples::free2_t(), 6);
        let u = m.alphabet.parse_word(&m.spec, "a b a b").unwrap();
        let v = m.alphabet.parse_word(&m.spec, "t t").unwrap();
        let id = GroupElement::identity();
        let k = 1;
        let path = async_witness_from(&u, &id, &v, &id, k, &m).unwrap().unwrap();
        assert_eq!(*path.first().unwrap(), (0, 0));
        assert_eq!(*path.last().unwrap(), (u.len(), v.len()));
        let p = path_elements(&u, &m, &id).unwrap();
        let q = path_elements(&v, &m, &id).unwrap();
        let mut prev = (0usize, 0usize);
        for (t, &(i, j)) in path.iter().enumerate() {
            if t > 0 {
                assert!(i >= prev.0 && j >= prev.1, "monotone");
                assert!(i - prev.0 <= 1 && j - prev.1 <= 1, "unit steps");
            }
            prev = (i, j);
            assert!(dist(&p[i], &q[j], &m).unwrap() <= k);
        }
    }

    #[test]
    fn minimal_nongeodesic_structure() {
        let m = metric(samples::free2(), 6);
        let minimal = minimal_nongeodesics(&m, 5).unwrap();
        // in a free group exactly the xx⁻¹ pairs
        assert_eq!(minimal.len(), 4);
        for w in &minimal {
            assert_eq!(w.len(), 2);
        }
        let m = metric(samples::free2_t(), 6);
        for w in minimal_nongeodesics(&m, 4).unwrap() {
            assert!(!m.is_geodesic(&w).unwrap());
            for start in 0..w.len() {
                for end in start + 1..=w.len() {
                    if end - start < w.len() {
                        let sub = Word(w.0[start..end].to_vec());
                        assert!(m.is_geodesic(&sub).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn fftp_constants() {
        let m = metric(samples::zline(), 10);
        assert_eq!(fftp_constant(&m, 8, 8).unwrap(), Some(1));
        let m = metric(samples::free2(), 8);
        assert_eq!(fftp_constant(&m, 6, 8).unwrap(), Some(1));
        let m = metric(samples::zsquare(), 8);
        // minimal non-geodesics here are the "x … x⁻¹" bridges, which stay
        // one step from their shortening; the commutator square is not
        // minimal (its prefix already fails)
        let k = fftp_constant(&m, 6, 8).unwrap().unwrap();
        assert!(k <= 2);
    }

    #[test]
    fn l1_decider_reports() {
        let m = metric(samples::zsquare(), 5);
        let geo = |w: &Word| m.is_factor_geodesic(0, w);
        let r = check_l1_decider(&m, 0, &geo, 4).unwrap();
        assert!(r.holds);
        let bad = |_: &Word| Ok(true);
        let r = check_l1_decider(&m, 0, &bad, 4).unwrap();
        assert!(!r.holds);
        assert!(r.bad_word.is_some());
        let partial = |w: &Word| {
            Ok(m.is_factor_geodesic(0, w)?
                && w.0.iter().all(|&i| m.alphabet.letter(i as usize).symbol.starts_with("e1")))
        };
        let r = check_l1_decider(&m, 0, &partial, 4).unwrap();
        assert!(!r.holds);
        assert!(r.uncovered.is_some());
    }

    #[test]
    fn shortlex_z2_is_uniform_bicombing() {
        let m = metric(samples::zsquare(), 6);
        let sl = |w: &Word| crate::langmach::is_shortlex(w, &m);
        let r = check_lforall(&m, &sl, 4, 6).unwrap();
        assert!(r.holds);
        assert!(r.max_constant <= 2, "observed {}", r.max_constant);
        let r2 = check_lexists(&m, &sl, 4, 6).unwrap();
        assert!(r2.holds);
        assert!(r2.max_constant <= r.max_constant);
    }

    #[test]
    fn geodesics_satisfy_exists() {
        let m = metric(samples::free2(), 6);
        let geo = |w: &Word| m.is_geodesic(w);
        let r = check_lexists(&m, &geo, 3, 6).unwrap();
        assert!(r.holds);
        assert!(r.max_constant <= 1);
    }

    #[test]
    fn biautomatic_check_z() {
        let m = metric(samples::zline(), 8);
        let geo = |w: &Word| m.is_geodesic(w);
        let r = biautomatic_fellow_check(&m, &geo, 4).unwrap();
        assert!(r.holds);
        assert_eq!(r.max_constant, 1);
        let eps_only = |w: &Word| Ok(w.is_empty());
        let r = biautomatic_fellow_check(&m, &eps_only, 0).unwrap();
        assert!(r.holds);
        assert_eq!(r.max_constant, 1, "x·ε·1 companions sit one letter away");
    }

    #[test]
    fn sync_constant_stable_for_close_geodesic_pairs() {
        // geodesic pairs with endpoints ≤ 1 apart that asynchronously
        // 2-fellow travel: the synchronous constant stays small as the
        // length bound grows
        let m = metric(samples::free2_t(), 8);
        let max_at = |bound: usize| -> u32 {
            let mut max = 0;
            let mut stack = vec![Word::default()];
            let mut words = Vec::new();
            while let Some(w) = stack.pop() {
                if m.is_geodesic(&w).unwrap() {
                    words.push(w.clone());
                    if w.len() < bound {
                        for i in 0..m.alphabet.len() as u32 {
                            let mut v = w.clone();
                            v.0.push(i);
                            stack.push(v);
                        }
                    }
                }
            }
            for u in &words {
                let gu = evaluate(u, &m.alphabet, &m.spec).unwrap();
                for v in &words {
                    if v.len() + 2 < u.len() {
                        continue;
                    }
                    let gv = evaluate(v, &m.alphabet, &m.spec).unwrap();
                    if dist(&gu, &gv, &m).unwrap() <= 1
                        && async_fellow(u, v, 2, &m).unwrap()
                    {
                        max = max.max(sync_distance(u, v, &m).unwrap());
                    }
                }
            }
            max
        };
        let m3 = max_at(3);
        let m4 = max_at(4);
        assert!(m4 <= m3 + 2, "sync constant drifting: {m3} -> {m4}");
    }
}
