//! Horizon-bounded certification and search of blocking words along curves.
//!
//! The set of all contents of the dependency cone of a strip, over every
//! configuration of a cylinder, is carried forward in time as a layered
//! automaton. A word is certified blocking at horizon `T` when the strip has
//! a single possible content at each time `t ≤ T`; otherwise two concrete
//! cylinder fillings that disagree on the strip are reconstructed.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::layered::Layered;
use crate::rule::{iterate, product_rule, table_extents, Extents, LocalRule};
use crate::symbolic::{PeriodicConfig, Word};

/// Default cap on the width of a dependency cone, in cells.
pub const DEFAULT_CONE_CAP: usize = 64;

const STATE_CAP: usize = 1 << 22;

/// Two fillings of the time-0 cone, both in the cylinder, whose strips differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub time: u64,
    /// Absolute cell at time `time` where the two images differ.
    pub cell: i64,
    /// First cell of `first` and `second`.
    pub window_start: i64,
    pub first: Vec<u8>,
    pub second: Vec<u8>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BlockingKind {
    StrongBlocking,
    NotBlocking(Box<Witness>),
}

#[derive(Clone, Debug)]
pub struct BlockingVerdict {
    pub word: Word,
    pub offset: i64,
    pub curve: Curve,
    pub horizon: u64,
    /// Strip width actually checked: `max(M, 1)`.
    pub strip: usize,
    pub kind: BlockingKind,
    /// Strip contents for `t = 0..=horizon`, when strongly blocking.
    pub colors: Vec<Vec<u8>>,
    /// One-sided properties, checked when strong blocking fails; `None` when
    /// the one-sided cone exceeds the cap before the horizon.
    pub left_blocking: Option<bool>,
    pub right_blocking: Option<bool>,
}

impl BlockingVerdict {
    pub fn is_strong(&self) -> bool {
        self.kind == BlockingKind::StrongBlocking
    }
}

fn minimal_extents(rule: &LocalRule) -> (i64, i64) {
    match table_extents(rule) {
        Extents::Span {
            memory,
            anticipation,
        } => (memory, anticipation),
        Extents::Constant(_) => (rule.memory(), rule.anticipation()),
    }
}

/// `M = max(-r_- + max_t(h(t) - h(t+1)), r_+ + max_t(h(t+1) - h(t)))` with
/// the minimal extents of the rule, clamped at 0.
pub fn strip_width(rule: &LocalRule, h: &Curve) -> usize {
    let (r_minus, r_plus) = minimal_extents(rule);
    let (lo, hi) = h.increment_range();
    (-r_minus - lo).max(r_plus + hi).max(0) as usize
}

/// Windows `[a_t, b_t)` needed at each time so that the targets are exactly
/// computable from time 0.
fn cone(rule: &LocalRule, targets: &[Option<(i64, i64)>]) -> Vec<Option<(i64, i64)>> {
    let mut out = vec![None; targets.len()];
    let mut cur: Option<(i64, i64)> = None;
    for t in (0..targets.len()).rev() {
        let need = cur.map(|(a, b)| (a + rule.memory(), b + rule.anticipation()));
        cur = match (need, targets[t]) {
            (Some((a, b)), Some((p, q))) => Some((a.min(p), b.max(q))),
            (x, None) => x,
            (None, y) => y,
        };
        out[t] = cur;
    }
    out
}

fn cone_width(windows: &[Option<(i64, i64)>]) -> usize {
    windows
        .first()
        .copied()
        .flatten()
        .map_or(0, |(a, b)| (b - a).max(0) as usize)
}

/// Largest horizon `T' ≤ horizon` whose cone fits the cap.
fn feasible_horizon(
    rule: &LocalRule,
    horizon: u64,
    cap: usize,
    targets: impl Fn(u64) -> Option<(i64, i64)>,
) -> (u64, Vec<Option<(i64, i64)>>, usize) {
    let all: Vec<_> = (0..=horizon).map(&targets).collect();
    let full = cone(rule, &all);
    let full_width = cone_width(&full);
    if full_width <= cap {
        return (horizon, full, full_width);
    }
    let mut t = horizon;
    loop {
        let c = cone(rule, &all[..=t as usize]);
        if cone_width(&c) <= cap || t == 0 {
            return (t, c, full_width);
        }
        t -= 1;
    }
}

enum Run {
    Held(Vec<Vec<u8>>),
    Failed(Witness),
}

/// Carries the cone contents forward and checks each target with `check`,
/// which returns the offending layer range on failure.
fn run_cone<C>(
    rule: &LocalRule,
    windows: &[Option<(i64, i64)>],
    targets: &[Option<(i64, i64)>],
    initial: Layered,
    mut check: C,
) -> Result<std::result::Result<Vec<Vec<u8>>, (usize, Vec<Layered>)>>
where
    C: FnMut(usize, &Layered, usize, usize) -> std::result::Result<Option<Vec<u8>>, ()>,
{
    let mut history: Vec<Layered> = Vec::with_capacity(windows.len());
    let mut contents = Vec::with_capacity(windows.len());
    let mut current = initial;
    for t in 0..windows.len() {
        let Some((a, b)) = windows[t] else { break };
        if t > 0 {
            let (pa, _) = windows[t - 1].expect("cone windows are contiguous");
            current = current.image(pa, rule, a, (b - a) as usize, STATE_CAP)?;
        }
        history.push(current.clone());
        if let Some((p, q)) = targets[t] {
            let lo = (p - a) as usize;
            let hi = (q - a) as usize;
            match check(t, &current, lo, hi) {
                Ok(Some(c)) => contents.push(c),
                Ok(None) => {}
                Err(()) => return Ok(Err((t, history))),
            }
        }
    }
    Ok(Ok(contents))
}

/// Rebuilds the time-0 cone filling leading to `final_word` at time `t`.
fn backtrack(
    rule: &LocalRule,
    windows: &[Option<(i64, i64)>],
    history: &[Layered],
    t: usize,
    final_word: Vec<u8>,
) -> Vec<u8> {
    let mut word = final_word;
    for tau in (1..=t).rev() {
        let (pa, _) = windows[tau - 1].unwrap();
        let (a, _) = windows[tau].unwrap();
        word = history[tau - 1]
            .preimage_of(pa, rule, a, &word)
            .expect("every word of an image has a preimage");
    }
    word
}

fn cylinder_cells(q: usize, window: (i64, i64), u: &[u8], s: i64, free: &[u8]) -> Vec<Vec<u8>> {
    (window.0..window.1)
        .map(|i| {
            let k = i - s;
            if k >= 0 && (k as usize) < u.len() {
                vec![u[k as usize]]
            } else {
                debug_assert!(free.iter().all(|&a| (a as usize) < q));
                free.to_vec()
            }
        })
        .collect()
}

fn strong_run(
    rule: &LocalRule,
    h: &Curve,
    u: &[u8],
    s: i64,
    horizon: u64,
    strip: usize,
    cap: usize,
) -> Result<Run> {
    let q = rule.alphabet().len();
    let target = |t: u64| Some((h.eval(t), h.eval(t) + strip as i64));
    let (reach, windows, full_width) = feasible_horizon(rule, horizon, cap, target);
    let targets: Vec<_> = (0..=reach).map(target).collect();
    let all: Vec<u8> = (0..q as u8).collect();
    let initial = Layered::from_cells(q, &cylinder_cells(q, windows[0].unwrap(), u, s, &all));
    let outcome = run_cone(rule, &windows, &targets, initial, |_, set, lo, hi| {
        let words = set.words_between(lo, hi, 2);
        if words.len() == 1 {
            Ok(Some(words.into_iter().next().unwrap()))
        } else {
            Err(())
        }
    })?;
    match outcome {
        Ok(colors) => {
            if reach < horizon {
                Err(Error::ConeTooWide {
                    width: full_width,
                    cap,
                    horizon,
                })
            } else {
                Ok(Run::Held(colors))
            }
        }
        Err((t, history)) => {
            let (a, _) = windows[t].unwrap();
            let (p, _) = targets[t].unwrap();
            let lo = (p - a) as usize;
            let set = &history[t];
            let pair = set.words_between(lo, lo + strip, 2);
            let diff = (0..strip).find(|&k| pair[0][k] != pair[1][k]).unwrap();
            let first_final = set.word_through(lo, &pair[0]).unwrap();
            let second_final = set.word_through(lo, &pair[1]).unwrap();
            Ok(Run::Failed(Witness {
                time: t as u64,
                cell: p + diff as i64,
                window_start: windows[0].unwrap().0,
                first: backtrack(rule, &windows, &history, t, first_final),
                second: backtrack(rule, &windows, &history, t, second_final),
            }))
        }
    }
}

#[derive(Clone, Copy)]
enum Side {
    Left,
    Right,
}

/// One-sided check on the pair rule `F × F`: the two copies agree on the
/// word and on one side of it, and must agree on the corresponding side of
/// the curve. Returns `None` when the cone exceeds the cap before `horizon`.
fn one_sided(
    rule: &LocalRule,
    h: &Curve,
    u: &[u8],
    s: i64,
    horizon: u64,
    cap: usize,
    side: Side,
) -> Result<Option<bool>> {
    let q = rule.alphabet().len();
    let pair = product_rule(rule, rule)?;
    let (r_minus, r_plus) = (rule.memory(), rule.anticipation());
    let end = s + u.len() as i64;
    // Cells on the checked side of the curve that can still see the free side.
    let target = move |t: u64| -> Option<(i64, i64)> {
        let t_i = t as i64;
        let (lo, hi) = match side {
            Side::Right => (h.eval(t), s - t_i * r_minus),
            Side::Left => (end - t_i * r_plus, h.eval(t) + 1),
        };
        (lo < hi).then_some((lo, hi))
    };
    let all: Vec<_> = (0..=horizon).map(target).collect();
    let windows = cone(rule, &all);
    if cone_width(&windows) > cap {
        return Ok(None);
    }
    let diagonal: Vec<u8> = (0..q).map(|a| (a * q + a) as u8).collect();
    let free: Vec<u8> = (0..(q * q) as u8).collect();
    // Earlier windows are filled by backward propagation, so the first one
    // is present whenever any target is.
    let Some(w0) = windows.first().copied().flatten() else {
        return Ok(Some(true));
    };
    let cells: Vec<Vec<u8>> = (w0.0..w0.1)
        .map(|i| {
            let k = i - s;
            if k >= 0 && (k as usize) < u.len() {
                vec![diagonal[u[k as usize] as usize]]
            } else {
                let free_side = match side {
                    Side::Right => i < s,
                    Side::Left => i >= end,
                };
                if free_side {
                    free.clone()
                } else {
                    diagonal.clone()
                }
            }
        })
        .collect();
    run_pair(&pair, q, &windows, &all, Layered::from_cells(q * q, &cells))
}

fn run_pair(
    pair: &LocalRule,
    q: usize,
    windows: &[Option<(i64, i64)>],
    targets: &[Option<(i64, i64)>],
    initial: Layered,
) -> Result<Option<bool>> {
    let outcome = run_cone(pair, windows, targets, initial, |_, set, lo, hi| {
        match set.find_letter(lo, hi, |a| (a as usize) / q == (a as usize) % q) {
            None => Ok(None),
            Some(_) => Err(()),
        }
    })?;
    Ok(Some(outcome.is_ok()))
}

/// Certifies `(u, s)` along `h` up to `horizon`, with the default cone cap.
pub fn verify_blocking(rule: &LocalRule, h: &Curve, u: &Word, s: i64, horizon: u64) -> Result<BlockingVerdict> {
    verify_blocking_capped(rule, h, u, s, horizon, DEFAULT_CONE_CAP)
}

pub fn verify_blocking_capped(
    rule: &LocalRule,
    h: &Curve,
    u: &Word,
    s: i64,
    horizon: u64,
    cap: usize,
) -> Result<BlockingVerdict> {
    rule.alphabet().check_same(u.alphabet())?;
    if horizon == 0 {
        return Err(Error::InvalidHorizon("horizon must be at least 1".into()));
    }
    let strip = strip_width(rule, h).max(1);
    let mut verdict = BlockingVerdict {
        word: u.clone(),
        offset: s,
        curve: h.clone(),
        horizon,
        strip,
        kind: BlockingKind::StrongBlocking,
        colors: Vec::new(),
        left_blocking: None,
        right_blocking: None,
    };
    match strong_run(rule, h, u.letters(), s, horizon, strip, cap)? {
        Run::Held(colors) => verdict.colors = colors,
        Run::Failed(witness) => {
            verdict.right_blocking = one_sided(rule, h, u.letters(), s, horizon, cap, Side::Right)?;
            verdict.left_blocking = one_sided(rule, h, u.letters(), s, horizon, cap, Side::Left)?;
            verdict.kind = BlockingKind::NotBlocking(Box::new(witness));
        }
    }
    Ok(verdict)
}

/// Strong check only: `Some(colors)` when certified, `None` on a failure.
fn strongly_blocks(
    rule: &LocalRule,
    h: &Curve,
    u: &[u8],
    s: i64,
    horizon: u64,
    strip: usize,
    cap: usize,
) -> Result<bool> {
    Ok(matches!(strong_run(rule, h, u, s, horizon, strip, cap)?, Run::Held(_)))
}

/// All `(word, offset)` with `|word| ≤ max_len` and offset in
/// `[-max_len - M, M]` certified strongly blocking at `horizon`, in
/// lexicographic order.
pub fn search_blocking(rule: &LocalRule, h: &Curve, max_len: usize, horizon: u64) -> Result<Vec<(Word, i64)>> {
    search_blocking_capped(rule, h, max_len, horizon, DEFAULT_CONE_CAP)
}

pub fn search_blocking_capped(
    rule: &LocalRule,
    h: &Curve,
    max_len: usize,
    horizon: u64,
    cap: usize,
) -> Result<Vec<(Word, i64)>> {
    if max_len == 0 {
        return Err(Error::Precondition("maximal word length must be at least 1".into()));
    }
    if horizon == 0 {
        return Err(Error::InvalidHorizon("horizon must be at least 1".into()));
    }
    let q = rule.alphabet().len();
    let strip = strip_width(rule, h).max(1);
    let m = strip as i64;
    let mut candidates: Vec<(Vec<u8>, i64)> = Vec::new();
    for len in 1..=max_len {
        let count = q.pow(len as u32);
        for code in 0..count {
            let mut w = vec![0u8; len];
            let mut c = code;
            for k in (0..len).rev() {
                w[k] = (c % q) as u8;
                c /= q;
            }
            for s in (-(max_len as i64) - m)..=m {
                candidates.push((w.clone(), s));
            }
        }
    }
    candidates.sort();
    let results: Vec<Result<bool>> = candidates
        .par_iter()
        .map(|(w, s)| strongly_blocks(rule, h, w, *s, horizon, strip, cap))
        .collect();
    let mut hits = Vec::new();
    for ((w, s), r) in candidates.into_iter().zip(results) {
        if r? {
            hits.push((Word::new(rule.alphabet().clone(), w), s));
        }
    }
    Ok(hits)
}

/// Symbols `z` with `f(w) = z` for every window `w` containing `z`, after
/// padding a diameter-1 rule with a dead leading coordinate.
pub fn detect_spreading(rule: &LocalRule) -> BTreeSet<u8> {
    let q = rule.alphabet().len();
    let padded;
    let r = if rule.diameter() == 1 {
        padded = LocalRule::from_fn(
            rule.alphabet().clone(),
            rule.memory() - 1,
            rule.anticipation(),
            usize::MAX,
            |w| rule.apply(&w[1..]),
        )
        .expect("padded table is small");
        &padded
    } else {
        rule
    };
    let d = r.diameter();
    let mut window = vec![0u8; d];
    let mut spreading: BTreeSet<u8> = (0..q as u8).collect();
    for code in 0..r.table().len() {
        let mut c = code;
        for k in (0..d).rev() {
            window[k] = (c % q) as u8;
            c /= q;
        }
        let out = r.table()[code];
        spreading.retain(|&z| !window.contains(&z) || out == z);
    }
    spreading
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WedgeReport {
    pub horizon: u64,
    pub checked_cells: usize,
    /// `(t, j, expected, found)`.
    pub first_violation: Option<(u64, i64, u8, u8)>,
}

impl WedgeReport {
    pub fn passed(&self) -> bool {
        self.first_violation.is_none()
    }
}

/// Checks `F^t(z)_j = a_{u,h'}(t)` for `j ∈ [h'(t) + |v| - s', h''(t) - s'')`
/// and `t ≤ horizon`. Both blocking facts are certified first.
#[allow(clippy::too_many_arguments)]
pub fn monochrome_wedge_check(
    rule: &LocalRule,
    u: &Word,
    h1: &Curve,
    s1: i64,
    v: &Word,
    h2: &Curve,
    s2: i64,
    z: &PeriodicConfig,
    horizon: u64,
) -> Result<WedgeReport> {
    rule.alphabet().check_same(z.alphabet())?;
    let cu = verify_blocking(rule, h1, u, s1, horizon)?;
    if !cu.is_strong() {
        return Err(Error::Uncertified(format!("`{}` is not blocking along {h1} with offset {s1}", u)));
    }
    let cv = verify_blocking(rule, h2, v, s2, horizon)?;
    if !cv.is_strong() {
        return Err(Error::Uncertified(format!("`{}` is not blocking along {h2} with offset {s2}", v)));
    }
    if !z.in_cylinder(v.letters(), 0) {
        return Err(Error::Precondition("z must lie in the cylinder [v]_0".into()));
    }
    let mut report = WedgeReport {
        horizon,
        checked_cells: 0,
        first_violation: None,
    };
    let mut x = z.clone();
    for t in 0..=horizon {
        if t > 0 {
            x = iterate(rule, &x, 1)?;
        }
        let color = cu.colors[t as usize][0];
        let lo = h1.eval(t) + v.len() as i64 - s1;
        let hi = h2.eval(t) - s2;
        for j in lo..hi {
            report.checked_cells += 1;
            let found = x.cell(j);
            if found != color {
                report.first_violation = Some((t, j, color, found));
                return Ok(report);
            }
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MonochromeProbe {
    Reached { time: u64, symbol: u8 },
    NotReached,
}

/// First time `T0 ≤ horizon` at which `F^{T0} σ^{h(T0)}(z)` is monochrome.
pub fn periodic_monochrome_probe(
    rule: &LocalRule,
    h: &Curve,
    u: &Word,
    z: &PeriodicConfig,
    horizon: u64,
) -> Result<MonochromeProbe> {
    rule.alphabet().check_same(z.alphabet())?;
    if !z.contains_word(u.letters()) {
        return Err(Error::Precondition(format!("`{u}` does not occur in {z}")));
    }
    let mut x = z.clone();
    let mut reached = None;
    for t in 0..=horizon {
        if t > 0 {
            x = iterate(rule, &x, 1)?;
        }
        let shifted = x.shifted(h.eval(t));
        match reached {
            None if shifted.is_monochrome() => reached = Some((t, shifted.cell(0))),
            Some(_) => assert!(shifted.is_monochrome(), "monochrome configurations stay monochrome"),
            None => {}
        }
    }
    Ok(match reached {
        Some((time, symbol)) => MonochromeProbe::Reached { time, symbol },
        None => MonochromeProbe::NotReached,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rule::{shift_composed_rule, step};
    use crate::symbolic::Alphabet;

    fn bin() -> Alphabet {
        Alphabet::from_chars("01").unwrap()
    }

    fn min_rule() -> LocalRule {
        LocalRule::from_fn(bin(), 0, 1, 16, |w| w[0].min(w[1])).unwrap()
    }

    fn shift() -> LocalRule {
        LocalRule::from_fn(bin(), 1, 1, 16, |w| w[0]).unwrap()
    }

    fn word(s: &str) -> Word {
        bin().parse_word(s).unwrap()
    }

    /// Simulates a time-0 cone filling embedded in a periodic configuration.
    fn strip_at(rule: &LocalRule, start: i64, cells: &[u8], t: u64, cell: i64) -> u8 {
        let x = PeriodicConfig::new(rule.alphabet().clone(), cells.to_vec(), start).unwrap();
        iterate(rule, &x, t).unwrap().cell(cell)
    }

    #[test]
    fn strip_width_examples() {
        assert_eq!(strip_width(&min_rule(), &Curve::slope(0, 1)), 1);
        assert_eq!(strip_width(&min_rule(), &Curve::slope(-1, 1)), 1);
        let sym = LocalRule::from_fn(bin(), -1, 1, 64, |w| w[1]).unwrap();
        let sym = LocalRule::from_fn(bin(), -1, 1, 64, |w| w[0] ^ w[2] ^ sym.apply(w)).unwrap();
        assert_eq!(strip_width(&sym, &Curve::slope(0, 1)), 1);
    }

    #[test]
    fn min_zero_blocks_vertically() {
        let v = verify_blocking(&min_rule(), &Curve::slope(0, 1), &word("0"), 0, 50).unwrap();
        assert!(v.is_strong());
        assert_eq!(v.colors.len(), 51);
        assert!(v.colors.iter().all(|c| c == &vec![0]));
    }

    #[test]
    fn shift_is_not_blocking_and_witness_replays() {
        let rule = shift();
        let v = verify_blocking(&rule, &Curve::slope(0, 1), &word("00"), 0, 20).unwrap();
        let BlockingKind::NotBlocking(w) = &v.kind else {
            panic!("expected a witness, got {:?}", v.kind)
        };
        assert!(w.time <= 3);
        // Cells right of the curve only see cells right of the word.
        assert_eq!(v.right_blocking, Some(true));
        assert_eq!(v.left_blocking, Some(false));
        let a = strip_at(&rule, w.window_start, &w.first, w.time, w.cell);
        let b = strip_at(&rule, w.window_start, &w.second, w.time, w.cell);
        assert_ne!(a, b);
        for filling in [&w.first, &w.second] {
            assert_eq!(&filling[(0 - w.window_start) as usize..][..2], &[0, 0]);
        }
    }

    #[test]
    fn min_oblique_is_not_blocking() {
        let v = verify_blocking(&min_rule(), &Curve::slope(2, 1), &word("0"), 0, 30).unwrap();
        let BlockingKind::NotBlocking(w) = v.kind else {
            panic!("expected a witness")
        };
        let a = strip_at(&min_rule(), w.window_start, &w.first, w.time, w.cell);
        let b = strip_at(&min_rule(), w.window_start, &w.second, w.time, w.cell);
        assert_ne!(a, b);
    }

    #[test]
    fn shift_along_its_direction_is_one_sided_free() {
        // Along slope -1 the shift is the identity: every word blocks.
        let v = verify_blocking(&shift(), &Curve::slope(-1, 1), &word("1"), 0, 10).unwrap();
        assert!(v.is_strong());
    }

    #[test]
    fn min_is_right_blocking_along_slope_one() {
        // F^t(x)_j for j ≥ t only reads cells right of the word.
        let v = verify_blocking(&min_rule(), &Curve::slope(1, 1), &word("0"), 0, 10).unwrap();
        assert!(!v.is_strong());
        assert_eq!(v.right_blocking, Some(true));
    }

    #[test]
    fn search_examples() {
        let hits = search_blocking(&min_rule(), &Curve::slope(-1, 2), 1, 40).unwrap();
        assert!(hits.iter().any(|(w, s)| w.letters() == [0] && *s == 0));
        let zero = LocalRule::from_fn(bin(), 0, 0, 4, |_| 0).unwrap();
        let hits = search_blocking(&zero, &Curve::slope(0, 1), 1, 10).unwrap();
        let words: BTreeSet<Vec<u8>> = hits.iter().map(|(w, _)| w.letters().to_vec()).collect();
        assert_eq!(words, BTreeSet::from([vec![0], vec![1]]));
    }

    #[test]
    fn spreading_examples() {
        assert_eq!(detect_spreading(&min_rule()), BTreeSet::from([0]));
        assert!(detect_spreading(&shift()).is_empty());
        let zero = LocalRule::from_fn(bin(), 0, 0, 4, |_| 0).unwrap();
        assert_eq!(detect_spreading(&zero), BTreeSet::from([0]));
    }

    #[test]
    fn wedge_on_min() {
        let z = PeriodicConfig::new(bin(), vec![0, 1, 1, 1, 1, 1, 1, 1], 0).unwrap();
        let r = monochrome_wedge_check(
            &min_rule(),
            &word("0"),
            &Curve::slope(-1, 1),
            0,
            &word("0"),
            &Curve::slope(0, 1),
            0,
            &z,
            5,
        )
        .unwrap();
        assert!(r.passed());
        assert_eq!(r.checked_cells, (0..=5).map(|t: usize| t.saturating_sub(1)).sum::<usize>());
    }

    #[test]
    fn wedge_refuses_uncertified() {
        let z = PeriodicConfig::new(bin(), vec![0, 1], 0).unwrap();
        let r = monochrome_wedge_check(
            &shift(),
            &word("0"),
            &Curve::slope(0, 1),
            0,
            &word("0"),
            &Curve::slope(0, 1),
            0,
            &z,
            5,
        );
        assert!(matches!(r, Err(Error::Uncertified(_))));
    }

    #[test]
    fn monochrome_probe_examples() {
        let z = PeriodicConfig::new(bin(), vec![0, 1, 1, 1], 0).unwrap();
        assert_eq!(
            periodic_monochrome_probe(&min_rule(), &Curve::slope(0, 1), &word("0"), &z, 10).unwrap(),
            MonochromeProbe::Reached { time: 3, symbol: 0 }
        );
        let ones = PeriodicConfig::monochrome(bin(), 1).unwrap();
        assert!(periodic_monochrome_probe(&min_rule(), &Curve::slope(0, 1), &word("0"), &ones, 10).is_err());
        let zero = LocalRule::from_fn(bin(), 0, 0, 4, |_| 0).unwrap();
        assert_eq!(
            periodic_monochrome_probe(&zero, &Curve::slope(0, 1), &word("1"), &z, 1).unwrap(),
            MonochromeProbe::Reached { time: 1, symbol: 0 }
        );
    }

    #[test]
    fn three_neighbor_min_blocks() {
        let m3 = shift_composed_rule(&crate::rule::power_rule(&min_rule(), 2).unwrap(), -1);
        let v = verify_blocking(&m3, &Curve::slope(0, 1), &word("0"), 0, 20).unwrap();
        assert!(v.is_strong());
        let x = PeriodicConfig::new(bin(), vec![0, 1, 1], 0).unwrap();
        assert_eq!(step(&m3, &x).unwrap().cell(0), 0);
    }
}
