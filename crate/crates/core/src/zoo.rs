//! Built-in example rules with their expected classes and the Just Gliders
//! balance predicates.

use num_rational::Rational64;

use crate::classify::Verdict;
use crate::error::{Error, Result};
use crate::rule::{parse_rule, power_rule, product_rule, shift_composed_rule, LocalRule};
use crate::symbolic::{Alphabet, PeriodicConfig, Word};

const JUST_GLIDERS: &str = include_str!("../fixtures/just-gliders.rule");

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expected {
    pub verdict: Verdict,
    /// Closed interval of almost equicontinuous slopes; `None` when there is
    /// none, or when every slope is (nilpotent rules).
    pub ae_slopes: Option<(Rational64, Rational64)>,
}

#[derive(Clone, Debug)]
pub struct ZooEntry {
    pub name: &'static str,
    pub rule: LocalRule,
    pub expected: Expected,
    pub notes: &'static str,
}

pub const NAMES: [&str; 9] = [
    "shift",
    "identity",
    "min",
    "min3",
    "just-gliders",
    "lonely-gliders",
    "min-x-sminv",
    "sminv-x-shift",
    "const0",
];

fn bin() -> Alphabet {
    Alphabet::from_chars("01").expect("binary alphabet")
}

fn min_rule() -> LocalRule {
    LocalRule::from_fn(bin(), 0, 1, 16, |w| w[0].min(w[1])).expect("small table")
}

fn shift_rule() -> LocalRule {
    LocalRule::from_fn(bin(), 1, 1, 16, |w| w[0]).expect("small table")
}

/// The Just Gliders alphabet `← 0 →`.
pub fn gliders_alphabet() -> Alphabet {
    Alphabet::new(["←", "0", "→"]).expect("three distinct tokens")
}

const LEFT: u8 = 0;
const RIGHT: u8 = 2;

/// Just Gliders built from its three cases rather than the frozen table.
pub fn just_gliders_from_cases() -> LocalRule {
    LocalRule::from_fn(gliders_alphabet(), -1, 1, 64, |w| {
        let (l, c, r) = (w[0], w[1], w[2]);
        if l == RIGHT && c != LEFT && (r != LEFT || c == RIGHT) {
            RIGHT
        } else if r == LEFT && c != RIGHT && (l != RIGHT || c == LEFT) {
            LEFT
        } else {
            1
        }
    })
    .expect("small table")
}

/// Lonely Gliders over `cr cl ar al` (`> < → ←`).
fn lonely_gliders() -> LocalRule {
    const CR: u8 = 0;
    const CL: u8 = 1;
    const AR: u8 = 2;
    const AL: u8 = 3;
    let alphabet = Alphabet::new(["cr", "cl", "ar", "al"]).expect("distinct tokens");
    LocalRule::from_fn(alphabet, -1, 1, 64, |w| {
        let (l, c, r) = (w[0], w[1], w[2]);
        match () {
            _ if l == AR && c == CL => AR,
            _ if l != CR && c == AL => AR,
            _ if l == CR && c == AL => CL,
            _ if c == AR && r == CL => CR,
            _ if c == AR && r != CL => AL,
            _ if c == CR && r == AL => AL,
            _ => c,
        }
    })
    .expect("small table")
}

fn interval(lo: (i64, i64), hi: (i64, i64)) -> Option<(Rational64, Rational64)> {
    Some((Rational64::new(lo.0, lo.1), Rational64::new(hi.0, hi.1)))
}

pub fn builtin(name: &str) -> Result<ZooEntry> {
    let entry = match name {
        "shift" => ZooEntry {
            name: "shift",
            rule: shift_rule(),
            expected: Expected {
                verdict: Verdict::Class2,
                ae_slopes: interval((-1, 1), (-1, 1)),
            },
            notes: "σ(x)_i = x_{i+1}; the identity along slope -1",
        },
        "identity" => ZooEntry {
            name: "identity",
            rule: LocalRule::identity(bin()),
            expected: Expected {
                verdict: Verdict::Class2,
                ae_slopes: interval((0, 1), (0, 1)),
            },
            notes: "the identity on {0,1}",
        },
        "min" => ZooEntry {
            name: "min",
            rule: min_rule(),
            expected: Expected {
                verdict: Verdict::Class3,
                ae_slopes: interval((-1, 1), (0, 1)),
            },
            notes: "Min(x)_i = min(x_i, x_{i+1}); 0 is spreading",
        },
        "min3" => ZooEntry {
            name: "min3",
            rule: shift_composed_rule(&power_rule(&min_rule(), 2)?, -1),
            expected: Expected {
                verdict: Verdict::Class3,
                ae_slopes: interval((-1, 1), (1, 1)),
            },
            notes: "three-neighbour Min, σ^-1 Min^2(x)_i = min(x_{i-1}, x_i, x_{i+1})",
        },
        "just-gliders" => ZooEntry {
            name: "just-gliders",
            rule: parse_rule(JUST_GLIDERS)?,
            expected: Expected {
                verdict: Verdict::Class5,
                ae_slopes: None,
            },
            notes: "particles → and ← at speed one that annihilate on contact; sensitive in every direction",
        },
        "lonely-gliders" => ZooEntry {
            name: "lonely-gliders",
            rule: lonely_gliders(),
            expected: Expected {
                verdict: Verdict::Class4,
                ae_slopes: interval((0, 1), (0, 1)),
            },
            notes: "one arrow per zone bouncing between walls; reversible, invalid patterns block",
        },
        "min-x-sminv" => ZooEntry {
            name: "min-x-sminv",
            rule: product_rule(&min_rule(), &shift_composed_rule(&min_rule(), -1))?,
            expected: Expected {
                verdict: Verdict::Class4p,
                ae_slopes: interval((0, 1), (0, 1)),
            },
            notes: "Min × σ^-1 Min; almost equicontinuous only along slope 0",
        },
        "sminv-x-shift" => ZooEntry {
            name: "sminv-x-shift",
            rule: product_rule(&shift_composed_rule(&min_rule(), -1), &shift_rule())?,
            expected: Expected {
                verdict: Verdict::Class5,
                ae_slopes: None,
            },
            notes: "σ^-1 Min × σ; no almost equicontinuous direction",
        },
        "const0" => ZooEntry {
            name: "const0",
            rule: LocalRule::from_fn(bin(), 0, 0, 4, |_| 0)?,
            expected: Expected {
                verdict: Verdict::Class1,
                ae_slopes: None,
            },
            notes: "the constant map onto ∞0∞",
        },
        other => return Err(Error::UnknownName(other.to_string())),
    };
    Ok(entry)
}

/// Resolves `zoo:NAME` or a bare zoo name.
pub fn resolve(name: &str) -> Result<ZooEntry> {
    builtin(name.strip_prefix("zoo:").unwrap_or(name))
}

fn check_gliders(alphabet: &Alphabet) -> Result<()> {
    if alphabet.symbols() != gliders_alphabet().symbols() {
        return Err(Error::WrongAlphabet(format!(
            "expected the Just Gliders alphabet `← 0 →`, got `{alphabet}`"
        )));
    }
    Ok(())
}

fn gamma(a: u8) -> i64 {
    a as i64 - 1
}

/// Every prefix sum of `γ(→) = 1, γ(0) = 0, γ(←) = -1` is nonnegative.
pub fn is_right_balanced(w: &Word) -> Result<bool> {
    check_gliders(w.alphabet())?;
    Ok(right_balanced(w.letters()))
}

/// Every suffix sum of `γ` is nonpositive.
pub fn is_left_balanced(w: &Word) -> Result<bool> {
    check_gliders(w.alphabet())?;
    let mut sum = 0;
    for &a in w.letters().iter().rev() {
        sum += gamma(a);
        if sum > 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

fn right_balanced(letters: &[u8]) -> bool {
    let mut sum = 0;
    letters.iter().all(|&a| {
        sum += gamma(a);
        sum >= 0
    })
}

/// `F^t(x)_k = →` iff `x_{k-t} = →` and `x_{[k-t+1, k+t]}` is right-balanced.
pub fn gliders_arrow_oracle(x: &PeriodicConfig, t: u64, k: i64) -> Result<bool> {
    check_gliders(x.alphabet())?;
    let t = t as i64;
    Ok(x.cell(k - t) == RIGHT && right_balanced(&x.window(k - t + 1, 2 * t as usize)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rule::iterate;

    fn gw(s: &str) -> Word {
        gliders_alphabet().parse_word(s).unwrap()
    }

    #[test]
    fn frozen_table_matches_cases() {
        assert_eq!(builtin("just-gliders").unwrap().rule.table(), just_gliders_from_cases().table());
    }

    #[test]
    fn builtin_examples() {
        let min = builtin("min").unwrap().rule;
        assert_eq!((min.memory(), min.anticipation()), (0, 1));
        let jg = builtin("just-gliders").unwrap().rule;
        assert_eq!(jg.apply(&[2, 1, 1]), 2);
        assert_eq!(jg.apply(&[2, 1, 0]), 1);
        assert_eq!(builtin("nope").unwrap_err(), Error::UnknownName("nope".into()));
        for name in NAMES {
            assert_eq!(builtin(name).unwrap().name, name);
        }
    }

    #[test]
    fn balance_examples() {
        assert!(is_right_balanced(&gw("")).unwrap());
        assert!(is_right_balanced(&gw("→←")).unwrap());
        assert!(!is_right_balanced(&gw("←")).unwrap());
        assert!(is_left_balanced(&gw("→←")).unwrap());
        assert!(!is_left_balanced(&gw("→")).unwrap());
        let bin = Word::new(bin(), vec![0]);
        assert!(matches!(is_right_balanced(&bin), Err(Error::WrongAlphabet(_))));
    }

    #[test]
    fn oracle_examples() {
        let a = gliders_alphabet();
        let one = PeriodicConfig::new(a.clone(), vec![2, 1, 1, 1, 1], -1).unwrap();
        assert!(gliders_arrow_oracle(&one, 1, 0).unwrap());
        let jg = builtin("just-gliders").unwrap().rule;
        assert_eq!(iterate(&jg, &one, 1).unwrap().cell(0), 2);
        let empty = PeriodicConfig::monochrome(a.clone(), 1).unwrap();
        assert!(!gliders_arrow_oracle(&empty, 3, 1).unwrap());
        let meet = PeriodicConfig::new(a, vec![2, 1, 0, 1, 1], -1).unwrap();
        assert!(!gliders_arrow_oracle(&meet, 1, 0).unwrap());
        assert_eq!(iterate(&jg, &meet, 1).unwrap().cell(0), 1);
    }
}
