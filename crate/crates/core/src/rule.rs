//! Local rules and exact simulation of periodic configurations.
//!
//! A [`LocalRule`] is a lookup table `f : A^d → A` with memory `r_-` and
//! anticipation `r_+`, so that `F(x)_i = f(x_{i+r_-}, …, x_{i+r_+})`. Window
//! codes are big-endian base `|A|`: the leftmost cell is the most significant
//! digit.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::symbolic::{Alphabet, PeriodicConfig, Word};

/// Default bound on the number of table entries a rule may have.
pub const DEFAULT_TABLE_CAP: usize = 1 << 24;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LocalRule {
    alphabet: Alphabet,
    memory: i64,
    anticipation: i64,
    table: Arc<[u8]>,
}

/// Minimal memory and anticipation of an iterate, or the constant case.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Extents {
    Constant(u8),
    Span { memory: i64, anticipation: i64 },
}

pub(crate) fn table_size(q: usize, d: usize, cap: usize) -> Result<usize> {
    let entries = (q as u128).checked_pow(d as u32).unwrap_or(u128::MAX);
    if entries > cap as u128 {
        return Err(Error::TableTooLarge { entries, cap });
    }
    Ok(entries as usize)
}

fn decode(mut code: usize, q: usize, d: usize, out: &mut [u8]) {
    for k in (0..d).rev() {
        out[k] = (code % q) as u8;
        code /= q;
    }
}

impl LocalRule {
    pub fn new(alphabet: Alphabet, memory: i64, anticipation: i64, table: Vec<u8>) -> Result<Self> {
        if anticipation < memory {
            return Err(Error::InvalidExtents {
                memory,
                anticipation,
            });
        }
        let d = (anticipation - memory + 1) as usize;
        let size = table_size(alphabet.len(), d, usize::MAX)?;
        if table.len() != size {
            return Err(Error::Precondition(format!(
                "table has {} entries, expected {size}",
                table.len()
            )));
        }
        if table.iter().any(|&a| a as usize >= alphabet.len()) {
            return Err(Error::Precondition("table output out of range".into()));
        }
        Ok(LocalRule {
            alphabet,
            memory,
            anticipation,
            table: table.into(),
        })
    }

    /// Builds the table by evaluating `f` on every window.
    pub fn from_fn(
        alphabet: Alphabet,
        memory: i64,
        anticipation: i64,
        cap: usize,
        mut f: impl FnMut(&[u8]) -> u8,
    ) -> Result<Self> {
        if anticipation < memory {
            return Err(Error::InvalidExtents {
                memory,
                anticipation,
            });
        }
        let q = alphabet.len();
        let d = (anticipation - memory + 1) as usize;
        let size = table_size(q, d, cap)?;
        let mut window = vec![0u8; d];
        let table = (0..size)
            .map(|code| {
                decode(code, q, d, &mut window);
                f(&window)
            })
            .collect();
        Self::new(alphabet, memory, anticipation, table)
    }

    pub fn identity(alphabet: Alphabet) -> Self {
        let table = (0..alphabet.len() as u8).collect();
        Self::new(alphabet, 0, 0, table).expect("identity table is well formed")
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn memory(&self) -> i64 {
        self.memory
    }

    pub fn anticipation(&self) -> i64 {
        self.anticipation
    }

    pub fn diameter(&self) -> usize {
        (self.anticipation - self.memory + 1) as usize
    }

    pub fn table(&self) -> &[u8] {
        &self.table
    }

    pub fn lookup(&self, code: usize) -> u8 {
        self.table[code]
    }

    pub fn window_code(&self, window: &[u8]) -> usize {
        debug_assert_eq!(window.len(), self.diameter());
        let q = self.alphabet.len();
        window.iter().fold(0, |acc, &l| acc * q + l as usize)
    }

    pub fn apply(&self, window: &[u8]) -> u8 {
        self.table[self.window_code(window)]
    }

    /// One step on a finite word: output cell `k` is
    /// `f(word[k..k+d])`; the result is shorter by `d - 1`.
    pub fn apply_word(&self, word: &[u8]) -> Vec<u8> {
        let d = self.diameter();
        if word.len() < d {
            return Vec::new();
        }
        word.windows(d).map(|w| self.apply(w)).collect()
    }

    /// Serializes to the rule file format.
    pub fn to_rule_text(&self) -> String {
        let q = self.alphabet.len();
        let d = self.diameter();
        let mut out = String::new();
        out.push_str(&format!("alphabet: {}\n", self.alphabet.symbols().join(" ")));
        out.push_str(&format!("memory: {}\n", self.memory));
        out.push_str(&format!("anticipation: {}\n", self.anticipation));
        out.push_str("table:\n");
        let mut window = vec![0u8; d];
        for (code, &a) in self.table.iter().enumerate() {
            decode(code, q, d, &mut window);
            out.push_str(&format!(
                "{} -> {}\n",
                self.alphabet.format_letters(&window),
                self.alphabet.symbol(a)
            ));
        }
        out
    }
}

impl fmt::Debug for LocalRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "LocalRule(A={}, r-={}, r+={}, {} entries)",
            self.alphabet,
            self.memory,
            self.anticipation,
            self.table.len()
        )
    }
}

fn parse_int(line: usize, key: &str, value: &str) -> Result<i64> {
    value.trim().parse().map_err(|_| Error::Parse {
        line,
        msg: format!("`{key}` expects an integer, got `{}`", value.trim()),
    })
}

/// Parses the rule file format:
///
/// ```text
/// alphabet: 0 1
/// memory: 0
/// anticipation: 1
/// table:
/// 00 -> 0
/// ...
/// ```
pub fn parse_rule(text: &str) -> Result<LocalRule> {
    let mut alphabet: Option<Alphabet> = None;
    let mut memory: Option<i64> = None;
    let mut anticipation: Option<i64> = None;
    let mut in_table = false;
    let mut rows: Vec<(usize, String, String)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if in_table {
            let (lhs, rhs) = line.split_once("->").ok_or_else(|| Error::Parse {
                line: lineno,
                msg: format!("expected `w -> a`, got `{line}`"),
            })?;
            rows.push((lineno, lhs.trim().to_string(), rhs.trim().to_string()));
            continue;
        }
        let (key, value) = line.split_once(':').ok_or_else(|| Error::Parse {
            line: lineno,
            msg: format!("expected `key: value`, got `{line}`"),
        })?;
        match key.trim() {
            "alphabet" => alphabet = Some(Alphabet::new(value.split_whitespace())?),
            "memory" => memory = Some(parse_int(lineno, "memory", value)?),
            "anticipation" => anticipation = Some(parse_int(lineno, "anticipation", value)?),
            "table" => in_table = true,
            other => {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("unknown key `{other}`"),
                })
            }
        }
    }

    let missing = |what: &str| Error::Parse {
        line: 0,
        msg: format!("missing `{what}` line"),
    };
    let alphabet = alphabet.ok_or_else(|| missing("alphabet"))?;
    let memory = memory.ok_or_else(|| missing("memory"))?;
    let anticipation = anticipation.ok_or_else(|| missing("anticipation"))?;
    if !in_table {
        return Err(missing("table"));
    }
    if anticipation < memory {
        return Err(Error::InvalidExtents {
            memory,
            anticipation,
        });
    }
    let q = alphabet.len();
    let d = (anticipation - memory + 1) as usize;
    let size = table_size(q, d, DEFAULT_TABLE_CAP)?;
    let mut table: Vec<Option<u8>> = vec![None; size];
    let mut seen: HashMap<usize, usize> = HashMap::new();
    for (lineno, lhs, rhs) in rows {
        let window = alphabet.parse_letters(&lhs)?;
        if window.len() != d {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("window `{lhs}` has {} symbols, expected {d}", window.len()),
            });
        }
        let out = alphabet.index_of(&rhs)?;
        let code = window.iter().fold(0, |acc, &l| acc * q + l as usize);
        if seen.insert(code, lineno).is_some() {
            return Err(Error::DuplicateRow(lhs));
        }
        table[code] = Some(out);
    }
    let absent: Vec<usize> = (0..size).filter(|&c| table[c].is_none()).collect();
    if let Some(&first) = absent.first() {
        let mut w = vec![0u8; d];
        decode(first, q, d, &mut w);
        return Err(Error::IncompleteTable {
            missing: absent.len(),
            total: size,
            first: alphabet.format_letters(&w),
        });
    }
    LocalRule::new(
        alphabet,
        memory,
        anticipation,
        table.into_iter().map(Option::unwrap).collect(),
    )
}

/// Exact image of a periodic configuration.
pub fn step(rule: &LocalRule, x: &PeriodicConfig) -> Result<PeriodicConfig> {
    rule.alphabet.check_same(x.alphabet())?;
    let p = x.period() as i64;
    let phase = x.phase();
    let d = rule.diameter();
    let out: Vec<u8> = (0..p)
        .map(|k| rule.apply(&x.window(phase + k + rule.memory, d)))
        .collect();
    PeriodicConfig::new(x.alphabet().clone(), out, phase)
}

/// `F^t(x)`.
pub fn iterate(rule: &LocalRule, x: &PeriodicConfig, t: u64) -> Result<PeriodicConfig> {
    let mut cur = x.clone();
    for _ in 0..t {
        cur = step(rule, &cur)?;
    }
    Ok(cur)
}

/// Space-time diagram of `F^t σ^{h(t)}` restricted to `[-W, W]`.
#[derive(Clone, Debug)]
pub struct OrbitTrace {
    pub rule: LocalRule,
    pub curve: Curve,
    pub initial: PeriodicConfig,
    pub half_window: usize,
    /// `rows[t]` is `(F^t σ^{h(t)} x)_{[-W, W]}`.
    pub rows: Vec<Vec<u8>>,
}

impl OrbitTrace {
    pub fn width(&self) -> usize {
        2 * self.half_window + 1
    }

    pub fn steps(&self) -> usize {
        self.rows.len() - 1
    }

    /// One line per time step, oldest first.
    pub fn to_text(&self) -> String {
        let a = self.rule.alphabet();
        let mut out = String::new();
        for row in &self.rows {
            out.push_str(&a.format_letters(row));
            out.push('\n');
        }
        out
    }
}

pub fn directional_orbit(
    rule: &LocalRule,
    h: &Curve,
    x: &PeriodicConfig,
    steps: u64,
    half_window: usize,
) -> Result<OrbitTrace> {
    rule.alphabet.check_same(x.alphabet())?;
    let w = half_window as i64;
    let mut rows = Vec::with_capacity(steps as usize + 1);
    let mut cur = x.clone();
    for t in 0..=steps {
        if t > 0 {
            cur = step(rule, &cur)?;
        }
        rows.push(cur.window(h.eval(t) - w, 2 * half_window + 1));
    }
    Ok(OrbitTrace {
        rule: rule.clone(),
        curve: h.clone(),
        initial: x.clone(),
        half_window,
        rows,
    })
}

pub fn power_rule(rule: &LocalRule, t: u64) -> Result<LocalRule> {
    power_rule_capped(rule, t, DEFAULT_TABLE_CAP)
}

/// Lookup table of `F^t` with memory `t·r_-` and anticipation `t·r_+`.
/// `t = 0` gives the identity of diameter 1.
pub fn power_rule_capped(rule: &LocalRule, t: u64, cap: usize) -> Result<LocalRule> {
    let q = rule.alphabet.len();
    if t == 0 {
        return Ok(LocalRule::identity(rule.alphabet.clone()));
    }
    let d = rule.diameter();
    let big_d = (t as usize)
        .checked_mul(d - 1)
        .and_then(|v| v.checked_add(1))
        .ok_or(Error::TableTooLarge {
            entries: u128::MAX,
            cap,
        })?;
    table_size(q, big_d, cap)?;
    let mut current = rule.clone();
    for _ in 1..t {
        current = compose(rule, &current, cap)?;
    }
    Ok(current)
}

/// Table of `outer ∘ inner` on windows of width `d_inner + d_outer - 1`.
fn compose(outer: &LocalRule, inner: &LocalRule, cap: usize) -> Result<LocalRule> {
    let q = outer.alphabet.len();
    let d_in = inner.diameter();
    let d_out = outer.diameter();
    let d = d_in + d_out - 1;
    let size = table_size(q, d, cap)?;
    let sub = q.pow(d_in as u32);
    let mut table = Vec::with_capacity(size);
    for code in 0..size {
        let mut acc = 0usize;
        for k in 0..d_out {
            let shift = q.pow((d - k - d_in) as u32);
            let inner_code = (code / shift) % sub;
            acc = acc * q + inner.table[inner_code] as usize;
        }
        table.push(outer.table[acc]);
    }
    LocalRule::new(
        outer.alphabet.clone(),
        inner.memory + outer.memory,
        inner.anticipation + outer.anticipation,
        table,
    )
}

fn coordinate_is_dead(rule: &LocalRule, coord: usize) -> bool {
    let q = rule.alphabet.len();
    let d = rule.diameter();
    let stride = q.pow((d - 1 - coord) as u32);
    (0..rule.table.len())
        .filter(|code| (code / stride) % q == 0)
        .all(|code| {
            let base = rule.table[code];
            (1..q).all(|a| rule.table[code + a * stride] == base)
        })
}

/// Minimal memory and anticipation of a table: dead leading and trailing
/// coordinates are stripped.
pub fn table_extents(rule: &LocalRule) -> Extents {
    let first = rule.table[0];
    if rule.table.iter().all(|&a| a == first) {
        return Extents::Constant(first);
    }
    let d = rule.diameter();
    let lead = (0..d).take_while(|&c| coordinate_is_dead(rule, c)).count();
    let trail = (0..d)
        .rev()
        .take_while(|&c| coordinate_is_dead(rule, c))
        .count();
    Extents::Span {
        memory: rule.memory + lead as i64,
        anticipation: rule.anticipation - trail as i64,
    }
}

/// Iterated memory and anticipation `(r'_-(t), r'_+(t))` of `F^t`.
pub fn iterated_extents(rule: &LocalRule, t: u64) -> Result<Extents> {
    Ok(table_extents(&power_rule(rule, t)?))
}

/// Cartesian product acting componentwise on `A × B`; symbols are `a|b`.
pub fn product_rule(a: &LocalRule, b: &LocalRule) -> Result<LocalRule> {
    let qa = a.alphabet.len();
    let qb = b.alphabet.len();
    let mut symbols = Vec::with_capacity(qa * qb);
    for sa in a.alphabet.symbols() {
        for sb in b.alphabet.symbols() {
            symbols.push(format!("{sa}|{sb}"));
        }
    }
    let alphabet = Alphabet::new(symbols)?;
    let memory = a.memory.min(b.memory);
    let anticipation = a.anticipation.max(b.anticipation);
    let oa = (a.memory - memory) as usize;
    let ob = (b.memory - memory) as usize;
    let (da, db) = (a.diameter(), b.diameter());
    let mut wa = vec![0u8; da];
    let mut wb = vec![0u8; db];
    LocalRule::from_fn(alphabet, memory, anticipation, DEFAULT_TABLE_CAP, |w| {
        for k in 0..da {
            wa[k] = w[oa + k] / qb as u8;
        }
        for k in 0..db {
            wb[k] = w[ob + k] % qb as u8;
        }
        a.apply(&wa) * qb as u8 + b.apply(&wb)
    })
}

/// The rule of `σ^k ∘ F`.
pub fn shift_composed_rule(rule: &LocalRule, k: i64) -> LocalRule {
    LocalRule {
        alphabet: rule.alphabet.clone(),
        memory: rule.memory + k,
        anticipation: rule.anticipation + k,
        table: rule.table.clone(),
    }
}

/// Two configurations represented as the pair-alphabet product, convenient
/// for tests on product rules.
pub fn pair_config(x: &PeriodicConfig, y: &PeriodicConfig, alphabet: &Alphabet) -> Result<PeriodicConfig> {
    let qb = y.alphabet().len();
    let n = num_integer::lcm(x.period(), y.period());
    let word: Vec<u8> = (0..n as i64)
        .map(|i| x.cell(i) * qb as u8 + y.cell(i))
        .collect();
    PeriodicConfig::new(alphabet.clone(), word, 0)
}

pub fn word_of(rule: &LocalRule, letters: Vec<u8>) -> Word {
    Word::new(rule.alphabet.clone(), letters)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MIN: &str = "alphabet: 0 1\nmemory: 0\nanticipation: 1\ntable:\n00 -> 0\n01 -> 0\n10 -> 0\n11 -> 1\n";
    const SHIFT: &str = "# the shift\nalphabet: 0 1\nmemory: 1\nanticipation: 1\ntable:\n0 -> 0\n1 -> 1\n";

    fn pc(rule: &LocalRule, w: &str, phase: i64) -> PeriodicConfig {
        PeriodicConfig::from_word(&rule.alphabet().parse_word(w).unwrap(), phase).unwrap()
    }

    #[test]
    fn parse_examples() {
        let min = parse_rule(MIN).unwrap();
        assert_eq!(min.diameter(), 2);
        assert_eq!(min.apply(&[1, 1]), 1);
        assert_eq!(min.apply(&[1, 0]), 0);
        let shift = parse_rule(SHIFT).unwrap();
        assert_eq!(shift.diameter(), 1);
        assert_eq!((shift.memory(), shift.anticipation()), (1, 1));
    }

    #[test]
    fn parse_errors() {
        let incomplete = MIN.replace("11 -> 1\n", "");
        assert!(matches!(
            parse_rule(&incomplete),
            Err(Error::IncompleteTable { missing: 1, .. })
        ));
        let dup = MIN.replace("11 -> 1", "10 -> 1");
        assert!(matches!(parse_rule(&dup), Err(Error::DuplicateRow(_))));
        let unknown = MIN.replace("11 -> 1", "11 -> 2");
        assert!(matches!(parse_rule(&unknown), Err(Error::UnknownSymbol(_))));
        let backwards = MIN.replace("anticipation: 1", "anticipation: -1");
        assert!(matches!(
            parse_rule(&backwards),
            Err(Error::InvalidExtents { .. })
        ));
        let spaced = MIN.replace("00 -> 0", "0 0 -> 0");
        assert!(parse_rule(&spaced).is_ok());
    }

    #[test]
    fn rule_text_round_trips() {
        let min = parse_rule(MIN).unwrap();
        assert_eq!(parse_rule(&min.to_rule_text()).unwrap(), min);
    }

    #[test]
    fn step_examples() {
        let min = parse_rule(MIN).unwrap();
        assert_eq!(step(&min, &pc(&min, "01", 0)).unwrap(), pc(&min, "0", 0));
        assert_eq!(step(&min, &pc(&min, "1", 0)).unwrap(), pc(&min, "1", 0));
        let shift = parse_rule(SHIFT).unwrap();
        assert_eq!(
            step(&shift, &pc(&shift, "001", 0)).unwrap(),
            pc(&shift, "010", 0)
        );
    }

    #[test]
    fn orbit_examples() {
        let min = parse_rule(MIN).unwrap();
        let x = pc(&min, "0111", 0);
        let tr = directional_orbit(&min, &Curve::slope(0, 1), &x, 3, 1).unwrap();
        assert_eq!(tr.rows[3], vec![0, 0, 0]);
        assert_eq!(tr.rows.len(), 4);
        let tr0 = directional_orbit(&min, &Curve::slope(0, 1), &x, 0, 2).unwrap();
        assert_eq!(tr0.rows, vec![x.window(-2, 5)]);

        let shift = parse_rule(SHIFT).unwrap();
        let y = pc(&shift, "0010111", 3);
        let tr = directional_orbit(&shift, &Curve::slope(-1, 1), &y, 12, 4).unwrap();
        assert!(tr.rows.iter().all(|r| r == &tr.rows[0]));
    }

    #[test]
    fn power_examples() {
        let min = parse_rule(MIN).unwrap();
        let min2 = power_rule(&min, 2).unwrap();
        assert_eq!((min2.memory(), min2.anticipation()), (0, 2));
        for code in 0..8 {
            let w = [(code >> 2) as u8 & 1, (code >> 1) as u8 & 1, code as u8 & 1];
            assert_eq!(min2.apply(&w), *w.iter().min().unwrap());
        }
        assert_eq!(power_rule(&min, 1).unwrap(), min);
        assert_eq!(power_rule(&min, 0).unwrap(), LocalRule::identity(min.alphabet().clone()));
        let shift = parse_rule(SHIFT).unwrap();
        let s3 = power_rule(&shift, 3).unwrap();
        assert_eq!((s3.memory(), s3.anticipation()), (3, 3));
        assert_eq!(s3.table(), &[0, 1]);
        assert!(matches!(
            power_rule_capped(&min, 30, 1 << 10),
            Err(Error::TableTooLarge { .. })
        ));
    }

    #[test]
    fn extents_examples() {
        let min = parse_rule(MIN).unwrap();
        assert_eq!(
            iterated_extents(&min, 2).unwrap(),
            Extents::Span {
                memory: 0,
                anticipation: 2
            }
        );
        let shift = parse_rule(SHIFT).unwrap();
        assert_eq!(
            iterated_extents(&shift, 3).unwrap(),
            Extents::Span {
                memory: 3,
                anticipation: 3
            }
        );
        let c0 = LocalRule::new(min.alphabet().clone(), 0, 0, vec![0, 0]).unwrap();
        assert_eq!(iterated_extents(&c0, 1).unwrap(), Extents::Constant(0));
        // a padded shift: f(a, b) = b
        let padded = LocalRule::from_fn(min.alphabet().clone(), 0, 1, 16, |w| w[1]).unwrap();
        assert_eq!(
            table_extents(&padded),
            Extents::Span {
                memory: 1,
                anticipation: 1
            }
        );
    }

    #[test]
    fn shift_composition() {
        let min = parse_rule(MIN).unwrap();
        let smin = shift_composed_rule(&min, -1);
        assert_eq!((smin.memory(), smin.anticipation()), (-1, 0));
        assert_eq!(shift_composed_rule(&min, 0), min);
        let shift = parse_rule(SHIFT).unwrap();
        assert_eq!(
            shift_composed_rule(&shift, -1),
            LocalRule::identity(shift.alphabet().clone())
        );
    }

    #[test]
    fn product_with_identity() {
        let min = parse_rule(MIN).unwrap();
        let id = LocalRule::identity(min.alphabet().clone());
        let idid = product_rule(&id, &id).unwrap();
        assert_eq!(idid, LocalRule::identity(idid.alphabet().clone()));
        assert_eq!(idid.alphabet().symbols()[1], "0|1");
    }

    #[test]
    fn product_with_trivial_factor_matches_orbits() {
        let min = parse_rule(MIN).unwrap();
        let one = Alphabet::new(["*"]).unwrap();
        let triv = LocalRule::identity(one.clone());
        let prod = product_rule(&min, &triv).unwrap();
        assert_eq!(prod.alphabet().len(), 2);
        let x = pc(&min, "0111010", 2);
        let star = PeriodicConfig::monochrome(one, 0).unwrap();
        let xp = pair_config(&x, &star, prod.alphabet()).unwrap();
        let a = iterate(&min, &x, 5).unwrap();
        let b = iterate(&prod, &xp, 5).unwrap();
        for i in -10..10 {
            assert_eq!(a.cell(i), b.cell(i));
        }
    }
}
