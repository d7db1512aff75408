//! Bernoulli measures and exact probabilities of words at time `t`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::curve::parse_rational;
use crate::error::{Error, Result};
use crate::layered::Layered;
use crate::rule::{LocalRule, DEFAULT_TABLE_CAP};
use crate::symbolic::{Alphabet, Word};

/// An i.i.d. product measure, stored as integer numerators over a common
/// denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BernoulliMeasure {
    alphabet: Alphabet,
    numerators: Vec<u64>,
    denominator: u64,
}

impl BernoulliMeasure {
    pub fn uniform(alphabet: Alphabet) -> Self {
        let n = alphabet.len() as u64;
        BernoulliMeasure {
            alphabet,
            numerators: vec![1; n as usize],
            denominator: n,
        }
    }

    /// Weights as `(numerator, denominator)` pairs in alphabet order.
    pub fn new(alphabet: Alphabet, weights: &[(i64, i64)]) -> Result<Self> {
        if weights.len() != alphabet.len() {
            return Err(Error::InvalidWeights(format!(
                "expected {} weights, got {}",
                alphabet.len(),
                weights.len()
            )));
        }
        let mut denominator: u64 = 1;
        for &(n, d) in weights {
            if n <= 0 || d <= 0 {
                return Err(Error::InvalidWeights("weights must be strictly positive".into()));
            }
            let d = (d / n.gcd(&d)) as u64;
            denominator = denominator
                .checked_mul(d / denominator.gcd(&d))
                .filter(|&v| v <= 1 << 62)
                .ok_or_else(|| Error::InvalidWeights("common denominator too large".into()))?;
        }
        let numerators: Vec<u64> = weights
            .iter()
            .map(|&(n, d)| {
                let g = n.gcd(&d);
                let (n, d) = ((n / g) as u64, (d / g) as u64);
                n * (denominator / d)
            })
            .collect();
        if numerators.iter().sum::<u64>() != denominator {
            return Err(Error::InvalidWeights("weights must sum to 1".into()));
        }
        Ok(BernoulliMeasure {
            alphabet,
            numerators,
            denominator,
        })
    }

    /// `uniform` or comma-separated rationals in alphabet order.
    pub fn parse(alphabet: Alphabet, text: &str) -> Result<Self> {
        let text = text.trim();
        if text == "uniform" {
            return Ok(Self::uniform(alphabet));
        }
        let weights = text
            .split(',')
            .map(|w| {
                let r = parse_rational(w.trim()).map_err(|_| Error::InvalidWeights(format!("bad weight `{w}`")))?;
                Ok((*r.numer(), *r.denom()))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(alphabet, &weights)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn weight(&self, a: u8) -> BigRational {
        BigRational::new(self.numerators[a as usize].into(), self.denominator.into())
    }

    pub fn numerators(&self) -> &[u64] {
        &self.numerators
    }

    pub fn denominator(&self) -> u64 {
        self.denominator
    }

    pub(crate) fn cumulative(&self) -> Vec<u64> {
        self.numerators
            .iter()
            .scan(0u64, |acc, &n| {
                *acc += n;
                Some(*acc)
            })
            .collect()
    }
}

impl std::fmt::Display for BernoulliMeasure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = (0..self.numerators.len())
            .map(|a| self.weight(a as u8).to_string())
            .collect();
        write!(f, "{}", parts.join(","))
    }
}

/// `μ(F^{-t}[w]_0)` as an integer numerator over `D^{|w| + t(d-1)}`, from
/// the minimized automaton of all `t`-fold preimages of `w`.
fn preimage_weight(rule: &LocalRule, mu: &BernoulliMeasure, t: u64, w: &[u8]) -> Result<BigUint> {
    let q = rule.alphabet().len();
    let cells: Vec<Vec<u8>> = w.iter().map(|&a| vec![a]).collect();
    let mut set = Layered::from_cells(q, &cells);
    for _ in 0..t {
        set = set.preimage(rule, DEFAULT_TABLE_CAP)?;
    }
    Ok(set.weighted_count(&mu.numerators))
}

fn to_probability(count: &BigUint, mu: &BernoulliMeasure, n: usize) -> BigRational {
    let denom = BigUint::from(mu.denominator).pow(n as u32);
    BigRational::new(count.clone().into(), denom.into())
}

/// `μ(F^{-t}[w]_0)`, exactly.
pub fn mu_word_probability(rule: &LocalRule, mu: &BernoulliMeasure, w: &Word, t: u64) -> Result<BigRational> {
    rule.alphabet().check_same(mu.alphabet())?;
    rule.alphabet().check_same(w.alphabet())?;
    if w.is_empty() {
        return Ok(BigRational::one());
    }
    let n = w.len() + t as usize * (rule.diameter() - 1);
    let count = preimage_weight(rule, mu, t, w.letters())?;
    Ok(to_probability(&count, mu, n))
}

/// `P[t][w]` for all `w ∈ A^ℓ` and `t ≤ horizon`.
#[derive(Clone, Debug)]
pub struct MuTable {
    pub alphabet: Alphabet,
    pub length: usize,
    pub rows: Vec<BTreeMap<Vec<u8>, BigRational>>,
}

impl MuTable {
    pub fn probability(&self, t: usize, w: &[u8]) -> BigRational {
        self.rows[t].get(w).cloned().unwrap_or_else(BigRational::zero)
    }

    /// TSV lines `t<TAB>word<TAB>p_exact<TAB>p_float`, zero rows omitted.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (t, row) in self.rows.iter().enumerate() {
            for (w, p) in row {
                let f = p.numer().to_f64().unwrap_or(f64::NAN) / p.denom().to_f64().unwrap_or(f64::NAN);
                let _ = writeln!(out, "{t}\t{}\t{p}\t{f:.12}", self.alphabet.format_letters(w));
            }
        }
        out
    }
}

pub fn mu_limit_probe(rule: &LocalRule, mu: &BernoulliMeasure, length: usize, horizon: u64) -> Result<MuTable> {
    rule.alphabet().check_same(mu.alphabet())?;
    if length == 0 {
        return Err(Error::Precondition("word length must be at least 1".into()));
    }
    let q = rule.alphabet().len();
    let rows = (0..=horizon)
        .into_par_iter()
        .map(|t| {
            let n = length + t as usize * (rule.diameter() - 1);
            let mut row = BTreeMap::new();
            for code in 0..q.pow(length as u32) {
                let mut w = vec![0u8; length];
                let mut c = code;
                for k in (0..length).rev() {
                    w[k] = (c % q) as u8;
                    c /= q;
                }
                let count = preimage_weight(rule, mu, t, &w)?;
                if !count.is_zero() {
                    row.insert(w, to_probability(&count, mu, n));
                }
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MuTable {
        alphabet: rule.alphabet().clone(),
        length,
        rows,
    })
}
