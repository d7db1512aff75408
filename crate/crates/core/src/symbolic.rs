//! Alphabets, words, periodic configurations, the Cantor metric and
//! subshifts of finite type.
//!
//! Symbols are stored as `u8` indices into an [`Alphabet`]; the alphabet
//! order fixes the index of every symbol and, downstream, palettes and the
//! lexicographic order of languages.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::sync::Arc;

use num_integer::Integer;

use crate::error::{Error, Result};

/// Largest alphabet representable with `u8` letters.
pub const MAX_ALPHABET: usize = 256;

/// An ordered finite set of symbol tokens.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Arc<[String]>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(symbols: impl IntoIterator<Item = S>) -> Result<Self> {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(Error::InvalidAlphabet("alphabet must not be empty".into()));
        }
        if symbols.len() > MAX_ALPHABET {
            return Err(Error::InvalidAlphabet(format!(
                "{} symbols, at most {MAX_ALPHABET} supported",
                symbols.len()
            )));
        }
        let mut seen = HashSet::new();
        for s in &symbols {
            if s.is_empty() || s.chars().any(char::is_whitespace) || s.contains('#') {
                return Err(Error::InvalidAlphabet(format!("bad symbol token `{s}`")));
            }
            if !seen.insert(s.as_str()) {
                return Err(Error::InvalidAlphabet(format!("duplicate symbol `{s}`")));
            }
        }
        Ok(Alphabet {
            symbols: symbols.into(),
        })
    }

    /// One symbol per character of `chars`, e.g. `Alphabet::from_chars("01")`.
    pub fn from_chars(chars: &str) -> Result<Self> {
        Self::new(chars.chars().map(String::from))
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn symbol(&self, index: u8) -> &str {
        &self.symbols[index as usize]
    }

    pub fn index_of(&self, token: &str) -> Result<u8> {
        self.symbols
            .iter()
            .position(|s| s == token)
            .map(|i| i as u8)
            .ok_or_else(|| Error::UnknownSymbol(token.to_string()))
    }

    /// True when every token is a single character, so words can be written
    /// without separators.
    pub fn is_compact(&self) -> bool {
        self.symbols.iter().all(|s| s.chars().count() == 1)
    }

    /// Parses a word. Whitespace-separated tokens are always accepted;
    /// without whitespace the text is split greedily on the longest
    /// matching token.
    pub fn parse_letters(&self, text: &str) -> Result<Vec<u8>> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Vec::new());
        }
        if text.contains(char::is_whitespace) {
            return text.split_whitespace().map(|t| self.index_of(t)).collect();
        }
        let mut out = Vec::new();
        let mut rest = text;
        while !rest.is_empty() {
            let best = self
                .symbols
                .iter()
                .enumerate()
                .filter(|(_, s)| rest.starts_with(s.as_str()))
                .max_by_key(|(_, s)| s.len());
            match best {
                Some((i, s)) => {
                    out.push(i as u8);
                    rest = &rest[s.len()..];
                }
                None => return Err(Error::UnknownSymbol(rest.to_string())),
            }
        }
        Ok(out)
    }

    pub fn parse_word(&self, text: &str) -> Result<Word> {
        Ok(Word::new(self.clone(), self.parse_letters(text)?))
    }

    pub fn format_letters(&self, letters: &[u8]) -> String {
        let sep = if self.is_compact() { "" } else { " " };
        letters
            .iter()
            .map(|&l| self.symbol(l))
            .collect::<Vec<_>>()
            .join(sep)
    }

    pub(crate) fn check_same(&self, other: &Alphabet) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch(format!("{self} vs {other}")))
        }
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.symbols.join(","))
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Alphabet{self}")
    }
}

/// A finite word over an alphabet.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Word {
    alphabet: Alphabet,
    letters: Vec<u8>,
}

impl Word {
    /// Panics if a letter is out of range.
    pub fn new(alphabet: Alphabet, letters: Vec<u8>) -> Self {
        assert!(
            letters.iter().all(|&l| (l as usize) < alphabet.len()),
            "letter out of range for {alphabet}"
        );
        Word { alphabet, letters }
    }

    pub fn empty(alphabet: Alphabet) -> Self {
        Word {
            alphabet,
            letters: Vec::new(),
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.alphabet.format_letters(&self.letters))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self:?})", self = self.to_string())
    }
}

/// Contiguous-factor test on raw letters.
pub fn contains_factor(haystack: &[u8], needle: &[u8]) -> bool {
    needle.is_empty() || haystack.windows(needle.len()).any(|w| w == needle)
}

/// `v ⊑ u`: true iff `v` occurs as a contiguous factor of `u`.
pub fn is_subword(v: &Word, u: &Word) -> Result<bool> {
    v.alphabet.check_same(&u.alphabet)?;
    Ok(contains_factor(&u.letters, &v.letters))
}

/// A spatially periodic configuration, kept in normal form: minimal period
/// word and phase in `[0, p)`. `cell(i) = period[(i - phase) mod p]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PeriodicConfig {
    alphabet: Alphabet,
    period: Vec<u8>,
    phase: i64,
}

impl PeriodicConfig {
    pub fn new(alphabet: Alphabet, period_word: Vec<u8>, phase: i64) -> Result<Self> {
        if period_word.is_empty() {
            return Err(Error::Precondition("period word must be nonempty".into()));
        }
        if period_word.iter().any(|&l| l as usize >= alphabet.len()) {
            return Err(Error::Precondition("letter out of range".into()));
        }
        let n = period_word.len();
        let p = (1..=n)
            .filter(|p| n % p == 0)
            .find(|&p| (0..n).all(|i| period_word[i] == period_word[(i + p) % n]))
            .unwrap_or(n);
        // Canonical rotation: the lexicographically least one.
        let mut period = period_word;
        period.truncate(p);
        let r = (0..p)
            .min_by(|&i, &j| period[i..].iter().chain(&period[..i]).cmp(period[j..].iter().chain(&period[..j])))
            .unwrap_or(0);
        period.rotate_left(r);
        Ok(PeriodicConfig {
            alphabet,
            period,
            phase: (phase + r as i64).rem_euclid(p as i64),
        })
    }

    pub fn from_word(word: &Word, phase: i64) -> Result<Self> {
        Self::new(word.alphabet.clone(), word.letters.clone(), phase)
    }

    pub fn monochrome(alphabet: Alphabet, symbol: u8) -> Result<Self> {
        Self::new(alphabet, vec![symbol], 0)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Minimal period word, starting at cell `phase`.
    pub fn period_word(&self) -> &[u8] {
        &self.period
    }

    pub fn period(&self) -> usize {
        self.period.len()
    }

    pub fn phase(&self) -> i64 {
        self.phase
    }

    pub fn cell(&self, i: i64) -> u8 {
        let p = self.period.len() as i64;
        self.period[(i - self.phase).rem_euclid(p) as usize]
    }

    /// Cells `[start, start + len)`.
    pub fn window(&self, start: i64, len: usize) -> Vec<u8> {
        (0..len as i64).map(|k| self.cell(start + k)).collect()
    }

    /// `σ^k`: the configuration `i ↦ x_{i+k}`.
    pub fn shifted(&self, k: i64) -> Self {
        PeriodicConfig {
            alphabet: self.alphabet.clone(),
            period: self.period.clone(),
            phase: (self.phase - k).rem_euclid(self.period.len() as i64),
        }
    }

    pub fn is_monochrome(&self) -> bool {
        self.period.len() == 1
    }

    /// True iff `u` occurs somewhere in the configuration.
    pub fn contains_word(&self, u: &[u8]) -> bool {
        if u.is_empty() {
            return true;
        }
        let p = self.period.len();
        let reps = u.len() / p + 2;
        let unrolled: Vec<u8> = self.period.iter().copied().cycle().take(p * reps).collect();
        contains_factor(&unrolled, u)
    }

    /// True iff `u` occupies cells `[s, s + |u|)`.
    pub fn in_cylinder(&self, u: &[u8], s: i64) -> bool {
        u.iter()
            .enumerate()
            .all(|(k, &a)| self.cell(s + k as i64) == a)
    }
}

impl fmt::Display for PeriodicConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = self.alphabet.format_letters(&self.period);
        write!(f, "^inf({w})^inf@{}", self.phase)
    }
}

impl fmt::Debug for PeriodicConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A value of the Cantor metric: either 0 or `2^-n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Distance(Option<u32>);

impl Distance {
    pub const ZERO: Distance = Distance(None);

    pub fn pow2_neg(n: u32) -> Self {
        Distance(Some(n))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_none()
    }

    /// `Some(n)` for `2^-n`, `None` for zero.
    pub fn exponent(&self) -> Option<u32> {
        self.0
    }

    pub fn as_f64(&self) -> f64 {
        match self.0 {
            None => 0.0,
            Some(n) => 2f64.powi(-(n as i32)),
        }
    }

    /// `2·d`, or `None` when the product exceeds 1 (outside the metric range).
    pub fn doubled(&self) -> Distance {
        match self.0 {
            None => Distance(None),
            Some(0) => Distance(Some(0)),
            Some(n) => Distance(Some(n - 1)),
        }
    }
}

impl Ord for Distance {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.0, other.0) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Less,
            (Some(_), None) => Ordering::Greater,
            (Some(a), Some(b)) => b.cmp(&a),
        }
    }
}

impl PartialOrd for Distance {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            None => f.write_str("0"),
            Some(n) => write!(f, "2^-{n}"),
        }
    }
}

/// `d(x, y) = 2^-n` with `n` the least `i ≥ 0` such that `x_i ≠ y_i` or
/// `x_{-i} ≠ y_{-i}`.
pub fn metric_distance(x: &PeriodicConfig, y: &PeriodicConfig) -> Result<Distance> {
    x.alphabet.check_same(&y.alphabet)?;
    let span = x.period().lcm(&y.period()) as i64;
    // Scanning i in [0, span] on both sides visits every residue class.
    for i in 0..=span {
        if x.cell(i) != y.cell(i) || x.cell(-i) != y.cell(-i) {
            return Ok(Distance::pow2_neg(i as u32));
        }
    }
    Ok(Distance::ZERO)
}

/// A set of words of one fixed length.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteLanguage {
    alphabet: Alphabet,
    word_length: usize,
    words: BTreeSet<Vec<u8>>,
}

impl FiniteLanguage {
    pub fn empty(alphabet: Alphabet, word_length: usize) -> Self {
        FiniteLanguage {
            alphabet,
            word_length,
            words: BTreeSet::new(),
        }
    }

    /// All `|A|^ℓ` words.
    pub fn full(alphabet: Alphabet, word_length: usize) -> Self {
        let q = alphabet.len();
        let mut lang = Self::empty(alphabet, word_length);
        let total = q.pow(word_length as u32);
        for mut code in 0..total {
            let mut w = vec![0u8; word_length];
            for k in (0..word_length).rev() {
                w[k] = (code % q) as u8;
                code /= q;
            }
            lang.words.insert(w);
        }
        lang
    }

    pub fn from_letters(
        alphabet: Alphabet,
        word_length: usize,
        words: impl IntoIterator<Item = Vec<u8>>,
    ) -> Result<Self> {
        let mut lang = Self::empty(alphabet, word_length);
        for w in words {
            lang.insert(w)?;
        }
        Ok(lang)
    }

    pub fn insert(&mut self, word: Vec<u8>) -> Result<bool> {
        if word.len() != self.word_length {
            return Err(Error::Precondition(format!(
                "word of length {} in a language of length {}",
                word.len(),
                self.word_length
            )));
        }
        Ok(self.words.insert(word))
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn word_length(&self) -> usize {
        self.word_length
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains_letters(&self, w: &[u8]) -> bool {
        self.words.contains(w)
    }

    pub fn contains(&self, w: &Word) -> bool {
        w.alphabet == self.alphabet && self.words.contains(&w.letters)
    }

    /// Words in lexicographic symbol order.
    pub fn iter(&self) -> impl Iterator<Item = &Vec<u8>> {
        self.words.iter()
    }

    pub fn is_full(&self) -> bool {
        self.words.len() as u128 == (self.alphabet.len() as u128).pow(self.word_length as u32)
    }

    pub fn is_subset(&self, other: &FiniteLanguage) -> bool {
        self.word_length == other.word_length && self.words.is_subset(&other.words)
    }

    /// Rendered words, one per entry, in lexicographic order.
    pub fn formatted(&self) -> Vec<String> {
        self.words
            .iter()
            .map(|w| self.alphabet.format_letters(w))
            .collect()
    }
}

impl fmt::Debug for FiniteLanguage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.formatted()).finish()
    }
}

/// A subshift of finite type given by forbidden words of length ≤ order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sft {
    alphabet: Alphabet,
    order: usize,
    forbidden: Vec<Vec<u8>>,
}

impl Sft {
    pub fn new(alphabet: Alphabet, order: usize, forbidden: Vec<Vec<u8>>) -> Result<Self> {
        if order == 0 {
            return Err(Error::Precondition("SFT order must be at least 1".into()));
        }
        for w in &forbidden {
            if w.len() > order {
                return Err(Error::Precondition(format!(
                    "forbidden word of length {} exceeds order {order}",
                    w.len()
                )));
            }
            if w.iter().any(|&l| l as usize >= alphabet.len()) {
                return Err(Error::Precondition("letter out of range".into()));
            }
        }
        Ok(Sft {
            alphabet,
            order,
            forbidden,
        })
    }

    /// Convenience constructor from textual forbidden words; the order is the
    /// longest forbidden word (at least 1).
    pub fn from_forbidden(alphabet: Alphabet, forbidden: &[&str]) -> Result<Self> {
        let words = forbidden
            .iter()
            .map(|w| alphabet.parse_letters(w))
            .collect::<Result<Vec<_>>>()?;
        let order = words.iter().map(Vec::len).max().unwrap_or(1).max(1);
        Self::new(alphabet, order, words)
    }

    pub fn full_shift(alphabet: Alphabet) -> Self {
        Sft {
            alphabet,
            order: 1,
            forbidden: Vec::new(),
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn forbidden(&self) -> &[Vec<u8>] {
        &self.forbidden
    }

    /// No forbidden word occurs as a factor of `w`.
    pub fn is_admissible(&self, w: &[u8]) -> bool {
        self.forbidden.iter().all(|f| !contains_factor(w, f))
    }
}

/// Admissible `order`-blocks that survive on bi-infinite paths of the
/// follower graph on `(order-1)`-blocks.
fn essential_blocks(sft: &Sft) -> Vec<Vec<u8>> {
    let k = sft.order;
    let full = FiniteLanguage::full(sft.alphabet.clone(), k);
    let mut edges: Vec<Vec<u8>> = full
        .iter()
        .filter(|w| sft.is_admissible(w))
        .cloned()
        .collect();
    loop {
        let heads: HashSet<&[u8]> = edges.iter().map(|e| &e[1..]).collect();
        let tails: HashSet<&[u8]> = edges.iter().map(|e| &e[..k - 1]).collect();
        let kept: Vec<Vec<u8>> = edges
            .iter()
            .filter(|e| heads.contains(&e[..k - 1]) && tails.contains(&e[1..]))
            .cloned()
            .collect();
        if kept.len() == edges.len() {
            return kept;
        }
        edges = kept;
    }
}

/// `L(Σ) ∩ A^ℓ`: words of length ℓ that occur in some bi-infinite point of
/// the SFT.
pub fn sft_language(sft: &Sft, length: usize) -> FiniteLanguage {
    let k = sft.order;
    let edges = essential_blocks(sft);
    let mut lang = FiniteLanguage::empty(sft.alphabet.clone(), length);
    if edges.is_empty() {
        return lang;
    }
    if length <= k {
        for e in &edges {
            for start in 0..=(k - length) {
                lang.words.insert(e[start..start + length].to_vec());
            }
        }
        return lang;
    }
    let edge_set: HashSet<&[u8]> = edges.iter().map(Vec::as_slice).collect();
    let mut frontier: Vec<Vec<u8>> = edges.clone();
    for _ in k..length {
        let mut next = Vec::new();
        for w in &frontier {
            let mut probe = w[w.len() - (k - 1)..].to_vec();
            probe.push(0);
            for a in 0..sft.alphabet.len() as u8 {
                *probe.last_mut().unwrap() = a;
                if edge_set.contains(probe.as_slice()) {
                    let mut ext = w.clone();
                    ext.push(a);
                    next.push(ext);
                }
            }
        }
        frontier = next;
    }
    lang.words.extend(frontier);
    lang
}

/// Membership of a periodic point: all `p` windows of length `order` starting
/// in one period are admissible.
pub fn sft_contains(sft: &Sft, x: &PeriodicConfig) -> Result<bool> {
    sft.alphabet.check_same(&x.alphabet)?;
    let k = sft.order as usize;
    Ok((0..x.period() as i64).all(|i| sft.is_admissible(&x.window(i, k))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bin() -> Alphabet {
        Alphabet::from_chars("01").unwrap()
    }

    fn pc(w: &str, phase: i64) -> PeriodicConfig {
        PeriodicConfig::from_word(&bin().parse_word(w).unwrap(), phase).unwrap()
    }

    #[test]
    fn alphabet_rejects_bad_tokens() {
        assert!(Alphabet::new(Vec::<String>::new()).is_err());
        assert!(Alphabet::new(["a", "a"]).is_err());
        assert!(Alphabet::new(["a b"]).is_err());
        assert!(Alphabet::new([""]).is_err());
    }

    #[test]
    fn parse_multichar_tokens() {
        let a = Alphabet::new(["cr", "cl", "ar", "al"]).unwrap();
        assert_eq!(a.parse_letters("cr al").unwrap(), vec![0, 3]);
        assert_eq!(a.parse_letters("cral").unwrap(), vec![0, 3]);
        assert_eq!(a.format_letters(&[2, 1]), "ar cl");
        assert!(a.parse_letters("xx").is_err());
    }

    #[test]
    fn normal_form_collapses_period() {
        let x = pc("1010", 2);
        assert_eq!(x.period_word(), &[0, 1]);
        assert_eq!(x.phase(), 1);
        assert_eq!(x, pc("10", 0));
        for i in -5..5 {
            assert_eq!(x.cell(i), pc("1010", 2).cell(i));
        }
    }

    #[test]
    fn distance_examples() {
        assert_eq!(metric_distance(&pc("01", 0), &pc("01", 0)).unwrap(), Distance::ZERO);
        assert_eq!(
            metric_distance(&pc("0", 0), &pc("1", 0)).unwrap(),
            Distance::pow2_neg(0)
        );
        // x_3 = 1 and x_{-1} = 1 while y is all zeros; first mismatch at i = 1.
        assert_eq!(
            metric_distance(&pc("0001", 0), &pc("0", 0)).unwrap(),
            Distance::pow2_neg(1)
        );
        let other = Alphabet::from_chars("ab").unwrap();
        let z = PeriodicConfig::new(other, vec![0], 0).unwrap();
        assert!(metric_distance(&pc("0", 0), &z).is_err());
    }

    #[test]
    fn subword_examples() {
        let w = |s: &str| bin().parse_word(s).unwrap();
        assert!(is_subword(&w(""), &w("0110")).unwrap());
        assert!(is_subword(&w("11"), &w("0110")).unwrap());
        assert!(!is_subword(&w("101"), &w("0110")).unwrap());
    }

    #[test]
    fn sft_language_examples() {
        let golden = Sft::from_forbidden(bin(), &["11"]).unwrap();
        let l3 = sft_language(&golden, 3);
        assert_eq!(l3.formatted(), ["000", "001", "010", "100", "101"]);

        let full = Sft::full_shift(bin());
        assert_eq!(sft_language(&full, 2).len(), 4);

        let empty = Sft::from_forbidden(bin(), &["0", "1"]).unwrap();
        assert!(sft_language(&empty, 1).is_empty());
    }

    #[test]
    fn sft_language_drops_non_extendable_words() {
        // "01" is admissible but 1 can never be followed: no bi-infinite point
        // contains a 1.
        let sft = Sft::from_forbidden(bin(), &["10", "11"]).unwrap();
        assert_eq!(sft_language(&sft, 2).formatted(), ["00"]);
        assert_eq!(sft_language(&sft, 0).len(), 1);
    }

    #[test]
    fn sft_contains_examples() {
        let golden = Sft::from_forbidden(bin(), &["11"]).unwrap();
        assert!(sft_contains(&golden, &pc("01", 0)).unwrap());
        assert!(!sft_contains(&golden, &pc("011", 0)).unwrap());
        assert!(sft_contains(&Sft::full_shift(bin()), &pc("0111", 2)).unwrap());
    }
}
