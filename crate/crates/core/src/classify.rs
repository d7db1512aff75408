//! Assembles exact certificates and horizon-bounded evidence into one of the
//! directional classes of cellular automata.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use num_rational::Rational64;

use crate::blocking::{detect_spreading, search_blocking};
use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::language::{generic_limit_sample, is_surjective, nilpotency_probe, NilpotencyProbe, NonNilpotencyNote};
use crate::measure::BernoulliMeasure;
use crate::rule::{table_extents, Extents, LocalRule};
use crate::symbolic::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Verdict {
    /// Nilpotent.
    Class1,
    /// Equicontinuous along a single direction.
    Class2,
    /// Almost equicontinuous along a nondegenerate interval.
    Class3,
    /// Almost equicontinuous along a single direction, infinite generic
    /// limit set there.
    Class4,
    /// Almost equicontinuous along a single direction with a finite generic
    /// limit set there.
    Class4p,
    /// Sensitive in every direction.
    Class5,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::Class1 => "Class1",
            Verdict::Class2 => "Class2",
            Verdict::Class3 => "Class3",
            Verdict::Class4 => "Class4",
            Verdict::Class4p => "Class4p",
            Verdict::Class5 => "Class5",
            Verdict::Inconclusive => "Inconclusive",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Confidence {
    Certified,
    HorizonBounded,
}

impl fmt::Display for Confidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Confidence::Certified => "Certified",
            Confidence::HorizonBounded => "HorizonBounded",
        })
    }
}

#[derive(Clone, Debug)]
pub struct SamplingParams {
    pub measure: Option<BernoulliMeasure>,
    pub samples: usize,
    pub time: u64,
    pub window: usize,
    pub seed: u64,
}

impl Default for SamplingParams {
    fn default() -> Self {
        SamplingParams {
            measure: None,
            samples: 200,
            time: 60,
            window: 5,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ClassifyParams {
    pub slope_grid: Vec<Rational64>,
    pub word_len: usize,
    pub horizon: u64,
    pub sampling: SamplingParams,
}

/// Minimal extents, or the declared ones for a constant table.
pub fn effective_extents(rule: &LocalRule) -> (i64, i64) {
    match table_extents(rule) {
        Extents::Span {
            memory,
            anticipation,
        } => (memory, anticipation),
        Extents::Constant(_) => (rule.memory(), rule.anticipation()),
    }
}

/// Multiples of 1/4 spanning `[-r_+ - 1, -r_- + 1]`.
pub fn default_grid(rule: &LocalRule) -> Vec<Rational64> {
    let (r_minus, r_plus) = effective_extents(rule);
    let lo = 4 * (-r_plus - 1);
    let hi = 4 * (-r_minus + 1);
    (lo..=hi).map(|k| Rational64::new(k, 4)).collect()
}

impl ClassifyParams {
    pub fn defaults_for(rule: &LocalRule) -> Self {
        ClassifyParams {
            slope_grid: default_grid(rule),
            word_len: 2,
            horizon: 30,
            sampling: SamplingParams::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SlopeStatus {
    Searched,
    /// The dependency cone exceeded the cap before a decision.
    ConeTooWide,
}

#[derive(Clone, Debug)]
pub struct SlopeFinding {
    pub slope: Rational64,
    pub status: SlopeStatus,
    pub hits: Vec<(Word, i64)>,
    /// Every word of length `L` blocks at one common offset.
    pub equicontinuity_evidence: bool,
}

#[derive(Clone, Debug)]
pub struct ClassReport {
    pub rule_id: String,
    pub verdict: Verdict,
    pub confidence: Confidence,
    pub surjective: bool,
    pub spreading: BTreeSet<u8>,
    pub nilpotency: NilpotencyProbe,
    pub slopes: Vec<SlopeFinding>,
    pub ae_slopes: Vec<Rational64>,
    pub equicontinuous_slopes: Vec<Rational64>,
    /// Fraction of monochrome windows along the single AE slope.
    pub monochrome_rate: Option<f64>,
    pub flags: Vec<String>,
    pub word_len: usize,
    pub horizon: u64,
    alphabet_symbols: Vec<String>,
}

fn slope_list(slopes: &[Rational64]) -> String {
    if slopes.is_empty() {
        return "none".into();
    }
    slopes.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(",")
}

impl ClassReport {
    pub fn spreading_symbols(&self) -> Vec<&str> {
        self.spreading
            .iter()
            .map(|&a| self.alphabet_symbols[a as usize].as_str())
            .collect()
    }

    /// Human-readable text followed by the `key=value` block.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "rule: {}", self.rule_id);
        let _ = writeln!(out, "parameters: word length {}, horizon {}", self.word_len, self.horizon);
        let _ = writeln!(out, "surjective (exact): {}", self.surjective);
        let spreading = self.spreading_symbols();
        let _ = writeln!(
            out,
            "spreading states (exact): {}",
            if spreading.is_empty() { "none".to_string() } else { spreading.join(" ") }
        );
        let nil = match &self.nilpotency {
            NilpotencyProbe::NilpotentAt { time, symbol } => {
                format!("nilpotent at t={time} onto {}", self.alphabet_symbols[*symbol as usize])
            }
            NilpotencyProbe::NotNilpotentYet { note } => match note {
                NonNilpotencyNote::Surjective => "not nilpotent (surjective)".into(),
                NonNilpotencyNote::TwoFixedPoints(a, b) => format!(
                    "not nilpotent (fixed points {} and {})",
                    self.alphabet_symbols[*a as usize], self.alphabet_symbols[*b as usize]
                ),
                NonNilpotencyNote::None => format!("not nilpotent up to t={}", self.horizon),
            },
        };
        let _ = writeln!(out, "nilpotency: {nil}");
        for f in &self.slopes {
            let status = match f.status {
                SlopeStatus::Searched => format!("{} blocking (word, offset) pairs", f.hits.len()),
                SlopeStatus::ConeTooWide => "undecided: cone too wide".into(),
            };
            let example = f
                .hits
                .first()
                .map(|(w, s)| format!(", e.g. `{w}` at {s}"))
                .unwrap_or_default();
            let eq = if f.equicontinuity_evidence { ", equicontinuity evidence" } else { "" };
            let _ = writeln!(out, "  slope {:>5}: {status}{example}{eq}", f.slope.to_string());
        }
        if let Some(rate) = self.monochrome_rate {
            let _ = writeln!(out, "monochrome convergence rate: {rate:.4}");
        }
        for flag in &self.flags {
            let _ = writeln!(out, "flag: {flag}");
        }
        let _ = writeln!(out, "verdict={};", self.verdict);
        let _ = writeln!(out, "confidence={};", self.confidence);
        let _ = writeln!(out, "ae_slopes={};", slope_list(&self.ae_slopes));
        let _ = writeln!(out, "equicontinuous_slopes={};", slope_list(&self.equicontinuous_slopes));
        let _ = writeln!(out, "surjective={};", self.surjective);
        let _ = writeln!(
            out,
            "spreading={};",
            if spreading.is_empty() { "none".to_string() } else { spreading.join(",") }
        );
        if let Some(rate) = self.monochrome_rate {
            let _ = writeln!(out, "monochrome_rate={rate:.4};");
        }
        out
    }
}

fn equicontinuity_evidence(hits: &[(Word, i64)], q: usize, len: usize) -> bool {
    let mut per_offset: BTreeMap<i64, usize> = BTreeMap::new();
    for (w, s) in hits {
        if w.len() == len {
            *per_offset.entry(*s).or_insert(0) += 1;
        }
    }
    let all = q.pow(len as u32);
    per_offset.values().any(|&c| c == all)
}

pub fn classify(rule: &LocalRule, rule_id: &str, params: &ClassifyParams) -> Result<ClassReport> {
    if params.slope_grid.is_empty() {
        return Err(Error::Precondition("slope grid must be nonempty".into()));
    }
    let (r_minus, r_plus) = effective_extents(rule);
    let lo = Rational64::from_integer(-r_plus - 1);
    let hi = Rational64::from_integer(-r_minus + 1);
    if params.slope_grid.iter().any(|s| *s < lo || *s > hi) {
        return Err(Error::Precondition(format!("slopes must lie in [{lo}, {hi}]")));
    }
    let q = rule.alphabet().len();
    let nilpotency = nilpotency_probe(rule, params.horizon)?;
    let surjective = is_surjective(rule);
    let spreading = detect_spreading(rule);

    let mut grid = params.slope_grid.clone();
    grid.sort();
    grid.dedup();
    let mut slopes = Vec::with_capacity(grid.len());
    for &slope in &grid {
        let h = Curve::linear(slope);
        let finding = match search_blocking(rule, &h, params.word_len, params.horizon) {
            Ok(hits) => SlopeFinding {
                slope,
                status: SlopeStatus::Searched,
                equicontinuity_evidence: equicontinuity_evidence(&hits, q, params.word_len),
                hits,
            },
            Err(Error::ConeTooWide { .. }) => SlopeFinding {
                slope,
                status: SlopeStatus::ConeTooWide,
                hits: Vec::new(),
                equicontinuity_evidence: false,
            },
            Err(e) => return Err(e),
        };
        slopes.push(finding);
    }

    let ae_idx: Vec<usize> = (0..slopes.len()).filter(|&i| !slopes[i].hits.is_empty()).collect();
    let ae_slopes: Vec<Rational64> = ae_idx.iter().map(|&i| slopes[i].slope).collect();
    let equicontinuous_slopes: Vec<Rational64> = slopes
        .iter()
        .filter(|f| f.equicontinuity_evidence)
        .map(|f| f.slope)
        .collect();
    let contiguous = ae_idx.windows(2).all(|w| w[1] == w[0] + 1);
    let mut flags = Vec::new();
    for f in &slopes {
        if f.status == SlopeStatus::ConeTooWide {
            flags.push(format!("slope {} undecided: dependency cone exceeds the cap", f.slope));
        }
    }

    let mut monochrome_rate = None;
    let (verdict, confidence) = if let NilpotencyProbe::NilpotentAt { .. } = nilpotency {
        (Verdict::Class1, Confidence::Certified)
    } else if !spreading.is_empty() {
        (Verdict::Class3, Confidence::Certified)
    } else if !contiguous {
        flags.push("almost equicontinuous slopes are not contiguous on the grid".into());
        (Verdict::Inconclusive, Confidence::HorizonBounded)
    } else if ae_slopes.len() >= 2 {
        if surjective {
            flags.push("blocking on an interval contradicts surjectivity".into());
            (Verdict::Inconclusive, Confidence::HorizonBounded)
        } else {
            (Verdict::Class3, Confidence::HorizonBounded)
        }
    } else if equicontinuous_slopes.len() == 1 {
        (Verdict::Class2, Confidence::HorizonBounded)
    } else if ae_slopes.len() == 1 {
        let s = &params.sampling;
        let measure = s
            .measure
            .clone()
            .unwrap_or_else(|| BernoulliMeasure::uniform(rule.alphabet().clone()));
        let sample = generic_limit_sample(
            rule,
            &Curve::linear(ae_slopes[0]),
            &measure,
            s.samples,
            s.time,
            s.time,
            s.window,
            s.seed,
        )?;
        let total = sample.total();
        let rate = if total == 0 {
            0.0
        } else {
            sample.monochrome_count() as f64 / total as f64
        };
        monochrome_rate = Some(rate);
        if rate >= 0.95 && !surjective {
            (Verdict::Class4p, Confidence::HorizonBounded)
        } else {
            (Verdict::Class4, Confidence::HorizonBounded)
        }
    } else {
        (Verdict::Class5, Confidence::HorizonBounded)
    };

    Ok(ClassReport {
        rule_id: rule_id.to_string(),
        verdict,
        confidence,
        surjective,
        spreading,
        nilpotency,
        slopes,
        ae_slopes,
        equicontinuous_slopes,
        monochrome_rate,
        flags,
        word_len: params.word_len,
        horizon: params.horizon,
        alphabet_symbols: rule.alphabet().symbols().to_vec(),
    })
}

