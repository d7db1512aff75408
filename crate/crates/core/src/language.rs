//! Image languages `L_t ∩ A^ℓ`, limit-set approximations, exact surjectivity
//! and nilpotency probes, and Monte Carlo sampling along a direction.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::layered::Layered;
use crate::measure::BernoulliMeasure;
use crate::rng::SplitMix64;
use crate::rule::{LocalRule, DEFAULT_TABLE_CAP};
use crate::symbolic::{FiniteLanguage, Word};

/// Automaton of `F^t(A^Z)` restricted to `length` consecutive cells.
fn image_automaton(rule: &LocalRule, t: u64, length: usize) -> Result<Layered> {
    let q = rule.alphabet().len();
    let d = rule.diameter();
    let mut len = length + t as usize * (d - 1);
    let mut set = Layered::full(q, len);
    for _ in 0..t {
        len -= d - 1;
        set = set.image(0, rule, -rule.memory(), len, DEFAULT_TABLE_CAP)?;
    }
    Ok(set)
}

/// `{w ∈ A^ℓ : w has a preimage under F^t}`.
pub fn image_language(rule: &LocalRule, t: u64, length: usize) -> Result<FiniteLanguage> {
    if length == 0 {
        return Err(Error::Precondition("word length must be at least 1".into()));
    }
    let set = image_automaton(rule, t, length)?;
    FiniteLanguage::from_letters(rule.alphabet().clone(), length, set.all_words())
}

#[derive(Clone, Debug)]
pub struct LanguageTrace {
    pub rule: LocalRule,
    pub word_length: usize,
    pub per_time: Vec<FiniteLanguage>,
}

impl LanguageTrace {
    pub fn compute(rule: &LocalRule, horizon: u64, length: usize) -> Result<Self> {
        let per_time = (0..=horizon)
            .into_par_iter()
            .map(|t| image_language(rule, t, length))
            .collect::<Result<Vec<_>>>()?;
        Ok(LanguageTrace {
            rule: rule.clone(),
            word_length: length,
            per_time,
        })
    }
}

#[derive(Clone, Debug)]
pub struct LimitApprox {
    pub horizon: u64,
    /// `L_T ∩ A^ℓ`, an over-approximation of the limit language.
    pub language: FiniteLanguage,
    /// `L_T = L_{T-1}` on this length. Informational: it does not prove
    /// equality with the limit language.
    pub stabilized: bool,
}

pub fn limit_language_approx(rule: &LocalRule, horizon: u64, length: usize) -> Result<LimitApprox> {
    let language = image_language(rule, horizon, length)?;
    let stabilized = horizon > 0 && image_language(rule, horizon - 1, length)? == language;
    Ok(LimitApprox {
        horizon,
        language,
        stabilized,
    })
}

/// Shortest word without preimage (least in lexicographic order among the
/// shortest), found by subset construction on the de Bruijn graph.
pub fn find_orphan(rule: &LocalRule) -> Option<Word> {
    let q = rule.alphabet().len();
    let d = rule.diameter();
    let vertices = q.pow(d as u32 - 1);
    let words = vertices.div_ceil(64);
    let table = rule.table();
    let start = {
        let mut s = vec![0u64; words];
        for v in 0..vertices {
            s[v / 64] |= 1 << (v % 64);
        }
        s
    };
    // Predecessor links to rebuild the orphan.
    let mut seen: HashMap<Vec<u64>, Option<(usize, u8)>> = HashMap::new();
    let mut order: Vec<Vec<u64>> = Vec::new();
    seen.insert(start.clone(), None);
    order.push(start);
    let mut queue = VecDeque::from([0usize]);
    while let Some(idx) = queue.pop_front() {
        let set = order[idx].clone();
        for out in 0..q as u8 {
            let mut next = vec![0u64; words];
            for v in 0..vertices {
                if set[v / 64] >> (v % 64) & 1 == 0 {
                    continue;
                }
                for a in 0..q {
                    let code = v * q + a;
                    if table[code] == out {
                        let w = code % vertices;
                        next[w / 64] |= 1 << (w % 64);
                    }
                }
            }
            if seen.contains_key(&next) {
                continue;
            }
            seen.insert(next.clone(), Some((idx, out)));
            let empty = next.iter().all(|&b| b == 0);
            order.push(next);
            if empty {
                let mut letters = Vec::new();
                let mut cur = order.len() - 1;
                while let Some((prev, a)) = seen[&order[cur]] {
                    letters.push(a);
                    cur = prev;
                }
                letters.reverse();
                return Some(Word::new(rule.alphabet().clone(), letters));
            }
            queue.push_back(order.len() - 1);
        }
    }
    None
}

/// Exact: a one-dimensional CA is surjective iff it has no orphan word.
pub fn is_surjective(rule: &LocalRule) -> bool {
    find_orphan(rule).is_none()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NonNilpotencyNote {
    /// Surjective rules on two or more symbols are never nilpotent.
    Surjective,
    /// Two distinct monochrome fixed points exist.
    TwoFixedPoints(u8, u8),
    /// No exact argument; evidence only.
    None,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NilpotencyProbe {
    NilpotentAt { time: u64, symbol: u8 },
    NotNilpotentYet { note: NonNilpotencyNote },
}

pub fn nilpotency_probe(rule: &LocalRule, horizon: u64) -> Result<NilpotencyProbe> {
    let last = image_language(rule, horizon, 2)?;
    let singleton = |l: &FiniteLanguage| {
        let mut it = l.iter();
        match (it.next(), it.next()) {
            (Some(w), None) if w[0] == w[1] => Some(w[0]),
            _ => None,
        }
    };
    if singleton(&last).is_some() {
        // Images nest, so the first time is found by scanning upwards.
        for t in 0..=horizon {
            let l = image_language(rule, t, 2)?;
            if let Some(symbol) = singleton(&l) {
                return Ok(NilpotencyProbe::NilpotentAt { time: t, symbol });
            }
        }
    }
    let q = rule.alphabet().len();
    let fixed: Vec<u8> = (0..q as u8)
        .filter(|&a| rule.apply(&vec![a; rule.diameter()]) == a)
        .collect();
    let note = if q >= 2 && is_surjective(rule) {
        NonNilpotencyNote::Surjective
    } else if fixed.len() >= 2 {
        NonNilpotencyNote::TwoFixedPoints(fixed[0], fixed[1])
    } else {
        NonNilpotencyNote::None
    };
    Ok(NilpotencyProbe::NotNilpotentYet { note })
}

#[derive(Clone, Debug)]
pub struct SampledLanguage {
    pub rule: LocalRule,
    pub curve: Curve,
    pub measure: BernoulliMeasure,
    pub samples: usize,
    pub t_min: u64,
    pub t_max: u64,
    pub window_length: usize,
    pub period: usize,
    pub seed: u64,
    pub histogram: BTreeMap<Vec<u8>, u64>,
}

impl SampledLanguage {
    pub fn total(&self) -> u64 {
        self.histogram.values().sum()
    }

    pub fn support(&self) -> FiniteLanguage {
        FiniteLanguage::from_letters(
            self.rule.alphabet().clone(),
            self.window_length,
            self.histogram.keys().cloned(),
        )
        .expect("observed words have the window length")
    }

    pub fn count(&self, w: &[u8]) -> u64 {
        self.histogram.get(w).copied().unwrap_or(0)
    }

    /// Observations that are a single repeated symbol.
    pub fn monochrome_count(&self) -> u64 {
        self.histogram
            .iter()
            .filter(|(w, _)| w.windows(2).all(|p| p[0] == p[1]))
            .map(|(_, c)| c)
            .sum()
    }

    /// Lines `word<TAB>count`, then the footer.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let alphabet = self.rule.alphabet();
        for (w, c) in &self.histogram {
            let _ = writeln!(out, "{}\t{c}", alphabet.format_letters(w));
        }
        let _ = writeln!(
            out,
            "# seed={} samples={} t=[{},{}] w={}",
            self.seed, self.samples, self.t_min, self.t_max, self.window_length
        );
        out
    }
}

/// One cyclic step of the rule on a period word.
fn cyclic_step(rule: &LocalRule, x: &[u8], out: &mut [u8]) {
    let p = x.len() as i64;
    let q = rule.alphabet().len();
    let d = rule.diameter();
    let table = rule.table();
    let r = rule.memory();
    for (i, slot) in out.iter_mut().enumerate() {
        let mut code = 0usize;
        for k in 0..d as i64 {
            code = code * q + x[(i as i64 + r + k).rem_euclid(p) as usize] as usize;
        }
        *slot = table[code];
    }
}

/// Observes `(F^t σ^{h(t)} x)_{[0,w)}` for `t ∈ [t_min, t_max]` on random
/// periodic configurations wide enough that the window never sees the wrap.
#[allow(clippy::too_many_arguments)]
pub fn generic_limit_sample(
    rule: &LocalRule,
    h: &Curve,
    measure: &BernoulliMeasure,
    samples: usize,
    t_min: u64,
    t_max: u64,
    window_length: usize,
    seed: u64,
) -> Result<SampledLanguage> {
    rule.alphabet().check_same(measure.alphabet())?;
    if t_min > t_max {
        return Err(Error::InvalidHorizon("t_min exceeds t_max".into()));
    }
    if window_length == 0 {
        return Err(Error::Precondition("window length must be at least 1".into()));
    }
    let radius = rule.memory().unsigned_abs().max(rule.anticipation().unsigned_abs()) as usize;
    let variation = h.max_variation(t_max.max(1))? as usize;
    let t = t_max as usize;
    let period = 2 * (window_length + radius * t + variation * t) + 1;
    let cumulative = measure.cumulative();
    let observations: Vec<Vec<Vec<u8>>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut g = SplitMix64::new(seed ^ (i as u64 + 1));
            let mut x: Vec<u8> = (0..period).map(|_| g.weighted(&cumulative) as u8).collect();
            let mut buf = vec![0u8; period];
            let mut seen = Vec::with_capacity((t_max - t_min + 1) as usize);
            for step in 0..=t_max {
                if step > 0 {
                    cyclic_step(rule, &x, &mut buf);
                    std::mem::swap(&mut x, &mut buf);
                }
                if step >= t_min {
                    let start = h.eval(step);
                    let w: Vec<u8> = (0..window_length as i64)
                        .map(|k| x[(start + k).rem_euclid(period as i64) as usize])
                        .collect();
                    seen.push(w);
                }
            }
            seen
        })
        .collect();
    let mut histogram = BTreeMap::new();
    for w in observations.into_iter().flatten() {
        *histogram.entry(w).or_insert(0u64) += 1;
    }
    Ok(SampledLanguage {
        rule: rule.clone(),
        curve: h.clone(),
        measure: measure.clone(),
        samples,
        t_min,
        t_max,
        window_length,
        period,
        seed,
        histogram,
    })
}
