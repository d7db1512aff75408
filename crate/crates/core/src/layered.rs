//! Sets of equal-length words stored as minimized layered automata.
//!
//! Layer `i` holds the states reached after reading `i` letters; every state
//! is reachable from the single start state and can reach the single accept
//! state at the last layer. The image of such a set under a local rule is
//! again a layered automaton (subset construction over `(state, last d-1
//! letters)` pairs), which lets cylinder images and image languages be
//! computed without enumerating preimages.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rule::LocalRule;

pub(crate) const NONE: u32 = u32::MAX;

#[derive(Clone, Debug)]
pub(crate) struct Layered {
    q: usize,
    /// `layers[i][v * q + a]` is the successor of state `v` on letter `a`.
    layers: Vec<Vec<u32>>,
}

impl Layered {
    /// The product set `allowed[0] × allowed[1] × …`.
    pub fn from_cells(q: usize, allowed: &[Vec<u8>]) -> Self {
        let layers = allowed
            .iter()
            .map(|cell| {
                let mut row = vec![NONE; q];
                for &a in cell {
                    row[a as usize] = 0;
                }
                row
            })
            .collect();
        Layered { q, layers }.minimized()
    }

    pub fn full(q: usize, len: usize) -> Self {
        let all: Vec<u8> = (0..q as u8).collect();
        Self::from_cells(q, &vec![all; len])
    }

    pub fn len(&self) -> usize {
        self.layers.len()
    }

    pub fn is_empty(&self) -> bool {
        !self.layers.is_empty() && self.layers[0].is_empty()
    }

    fn nodes(&self, layer: usize) -> usize {
        if layer == self.layers.len() {
            usize::from(!self.is_empty())
        } else {
            self.layers[layer].len() / self.q
        }
    }

    #[cfg(test)]
    pub fn state_count(&self) -> usize {
        (0..=self.layers.len()).map(|i| self.nodes(i)).sum()
    }

    #[inline]
    fn next(&self, layer: usize, node: u32, a: usize) -> u32 {
        self.layers[layer][node as usize * self.q + a]
    }

    /// Merges states with equal right languages and drops useless ones.
    pub fn minimized(self) -> Self {
        let q = self.q;
        let n = self.layers.len();
        let mut layers = self.layers;
        // Backward pass: canonical ids per layer, dead states map to NONE.
        let mut next_map: Vec<u32> = vec![0];
        for i in (0..n).rev() {
            let count = layers[i].len() / q;
            let mut ids: HashMap<Vec<u32>, u32> = HashMap::new();
            let mut new_layer = Vec::new();
            let mut map = vec![NONE; count];
            for (v, slot) in map.iter_mut().enumerate() {
                let row: Vec<u32> = layers[i][v * q..(v + 1) * q]
                    .iter()
                    .map(|&t| if t == NONE { NONE } else { next_map[t as usize] })
                    .collect();
                if row.iter().all(|&t| t == NONE) {
                    continue;
                }
                let fresh = ids.len() as u32;
                let id = *ids.entry(row.clone()).or_insert_with(|| {
                    new_layer.extend_from_slice(&row);
                    fresh
                });
                *slot = id;
            }
            layers[i] = new_layer;
            next_map = map;
        }
        if n == 0 {
            return Layered { q, layers };
        }
        let start = next_map.first().copied().unwrap_or(NONE);
        if start == NONE {
            return Layered {
                q,
                layers: vec![Vec::new(); n],
            };
        }
        // Forward pass: keep reachable states, start state first.
        let mut out = Vec::with_capacity(n);
        let mut current: Vec<u32> = vec![start];
        for layer in layers.iter() {
            let mut renum: HashMap<u32, u32> = HashMap::new();
            let mut order: Vec<u32> = Vec::new();
            let mut rows = Vec::with_capacity(current.len() * q);
            for &v in &current {
                for a in 0..q {
                    let t = layer[v as usize * q + a];
                    if t == NONE {
                        rows.push(NONE);
                    } else {
                        let id = *renum.entry(t).or_insert_with(|| {
                            order.push(t);
                            order.len() as u32 - 1
                        });
                        rows.push(id);
                    }
                }
            }
            out.push(rows);
            current = order;
        }
        Layered { q, layers: out }
    }

    /// The image of this set (positions `[in_start, in_start + len)`) under
    /// `rule`, restricted to output cells `[out_start, out_start + out_len)`.
    /// Output cell `j` reads input cells `[j + r_-, j + r_+]`.
    pub fn image(
        &self,
        in_start: i64,
        rule: &LocalRule,
        out_start: i64,
        out_len: usize,
        state_cap: usize,
    ) -> Result<Layered> {
        let q = self.q;
        let d = rule.diameter();
        let k0 = out_start + rule.memory() - in_start;
        assert!(k0 >= 0, "output window reads before the input window");
        let k0 = k0 as usize;
        assert!(
            k0 + out_len + d - 1 <= self.len(),
            "output window reads past the input window"
        );
        if self.is_empty() {
            return Ok(Layered {
                q,
                layers: vec![Vec::new(); out_len],
            });
        }
        let buf_mod = q.pow(d as u32 - 1) as u32;
        let table = rule.table();

        // Existential projection of the skipped prefix, then fill the buffer.
        let mut set: Vec<(u32, u32)> = (0..self.nodes(k0) as u32).map(|v| (v, 0)).collect();
        for layer in k0..k0 + d - 1 {
            let mut next = Vec::new();
            for &(v, buf) in &set {
                for a in 0..q {
                    let t = self.next(layer, v, a);
                    if t != NONE {
                        next.push((t, (buf * q as u32 + a as u32) % buf_mod));
                    }
                }
            }
            next.sort_unstable();
            next.dedup();
            set = next;
        }

        let mut layers: Vec<Vec<u32>> = Vec::with_capacity(out_len);
        let mut frontier: Vec<Vec<(u32, u32)>> = vec![set];
        let mut total_states = 1usize;
        for i in 0..out_len {
            let layer = k0 + d - 1 + i;
            let last = i + 1 == out_len;
            let mut ids: HashMap<Vec<(u32, u32)>, u32> = HashMap::new();
            let mut next_frontier: Vec<Vec<(u32, u32)>> = Vec::new();
            let mut rows = vec![NONE; frontier.len() * q];
            let mut buckets: Vec<Vec<(u32, u32)>> = vec![Vec::new(); q];
            for (sid, subset) in frontier.iter().enumerate() {
                for b in buckets.iter_mut() {
                    b.clear();
                }
                for &(v, buf) in subset {
                    for a in 0..q {
                        let t = self.next(layer, v, a);
                        if t == NONE {
                            continue;
                        }
                        let code = buf as usize * q + a;
                        let out = table[code] as usize;
                        buckets[out].push((t, (code as u32) % buf_mod));
                    }
                }
                for (out, bucket) in buckets.iter_mut().enumerate() {
                    if bucket.is_empty() {
                        continue;
                    }
                    if last {
                        rows[sid * q + out] = 0;
                        continue;
                    }
                    bucket.sort_unstable();
                    bucket.dedup();
                    let fresh = ids.len() as u32;
                    let id = *ids.entry(bucket.clone()).or_insert_with(|| {
                        next_frontier.push(bucket.clone());
                        fresh
                    });
                    rows[sid * q + out] = id;
                }
            }
            total_states += next_frontier.len();
            if total_states > state_cap {
                return Err(Error::TableTooLarge {
                    entries: total_states as u128,
                    cap: state_cap,
                });
            }
            layers.push(rows);
            frontier = next_frontier;
        }
        Ok(Layered { q, layers }.minimized())
    }

    /// The set of words `v` of length `len + d - 1` whose image under `rule`
    /// lies in this set. Deterministic, so no subset construction is needed.
    pub fn preimage(&self, rule: &LocalRule, state_cap: usize) -> Result<Layered> {
        let q = self.q;
        let d = rule.diameter();
        let n = self.len();
        let total = n + d - 1;
        if self.is_empty() {
            return Ok(Layered {
                q,
                layers: vec![Vec::new(); total],
            });
        }
        let buf_mod = q.pow(d as u32 - 1);
        let table = rule.table();
        let mut layers: Vec<Vec<u32>> = Vec::with_capacity(total);
        // States are (node of self, code of the last d-1 letters).
        let mut current: Vec<(u32, usize)> = vec![(0, 0)];
        let mut states = 1usize;
        for i in 0..total {
            let last = i + 1 == total;
            let mut ids: HashMap<(u32, usize), u32> = HashMap::new();
            let mut next: Vec<(u32, usize)> = Vec::new();
            let mut rows = vec![NONE; current.len() * q];
            for (sid, &(node, buf)) in current.iter().enumerate() {
                for a in 0..q {
                    let code = buf * q + a;
                    let target = if i + 1 < d {
                        (node, code)
                    } else {
                        let t = self.next(i + 1 - d, node, table[code] as usize);
                        if t == NONE {
                            continue;
                        }
                        (t, code % buf_mod)
                    };
                    if last {
                        rows[sid * q + a] = 0;
                        continue;
                    }
                    let fresh = ids.len() as u32;
                    let id = *ids.entry(target).or_insert_with(|| {
                        next.push(target);
                        fresh
                    });
                    rows[sid * q + a] = id;
                }
            }
            states += next.len();
            if states > state_cap {
                return Err(Error::TableTooLarge {
                    entries: states as u128,
                    cap: state_cap,
                });
            }
            layers.push(rows);
            current = next;
        }
        Ok(Layered { q, layers }.minimized())
    }

    /// `Σ_{v accepted} Π_i weights[v_i]`.
    pub fn weighted_count(&self, weights: &[u64]) -> BigUint {
        if self.is_empty() {
            return BigUint::zero();
        }
        let n = self.len();
        let mut value: Vec<BigUint> = vec![BigUint::one()];
        for layer in (0..n).rev() {
            let count = self.nodes(layer);
            let mut here = vec![BigUint::zero(); count];
            for (v, slot) in here.iter_mut().enumerate() {
                for (a, &w) in weights.iter().enumerate() {
                    let t = self.next(layer, v as u32, a);
                    if t != NONE {
                        *slot += &value[t as usize] * w;
                    }
                }
            }
            value = here;
        }
        value.swap_remove(0)
    }

    /// Distinct words read on layers `[lo, hi)`, at most `limit` of them, in
    /// lexicographic order.
    pub fn words_between(&self, lo: usize, hi: usize, limit: usize) -> Vec<Vec<u8>> {
        let mut out = Vec::new();
        if self.is_empty() || limit == 0 {
            return out;
        }
        let start: Vec<u32> = (0..self.nodes(lo) as u32).collect();
        let mut prefix = Vec::with_capacity(hi - lo);
        self.collect_words(lo, hi, &start, &mut prefix, &mut out, limit);
        out
    }

    fn collect_words(
        &self,
        layer: usize,
        hi: usize,
        set: &[u32],
        prefix: &mut Vec<u8>,
        out: &mut Vec<Vec<u8>>,
        limit: usize,
    ) {
        if out.len() >= limit {
            return;
        }
        if layer == hi {
            out.push(prefix.clone());
            return;
        }
        for a in 0..self.q {
            let mut next: Vec<u32> = set
                .iter()
                .map(|&v| self.next(layer, v, a))
                .filter(|&t| t != NONE)
                .collect();
            if next.is_empty() {
                continue;
            }
            next.sort_unstable();
            next.dedup();
            prefix.push(a as u8);
            self.collect_words(layer + 1, hi, &next, prefix, out, limit);
            prefix.pop();
            if out.len() >= limit {
                return;
            }
        }
    }

    pub fn all_words(&self) -> Vec<Vec<u8>> {
        self.words_between(0, self.len(), usize::MAX)
    }

    /// First `(layer, letter)` on `[lo, hi)` that violates `ok`, if any.
    pub fn find_letter(&self, lo: usize, hi: usize, ok: impl Fn(u8) -> bool) -> Option<(usize, u8)> {
        for layer in lo..hi {
            for (idx, &t) in self.layers[layer].iter().enumerate() {
                let a = (idx % self.q) as u8;
                if t != NONE && !ok(a) {
                    return Some((layer, a));
                }
            }
        }
        None
    }

    /// An accepted word that reads `segment` on layers starting at `lo`.
    pub fn word_through(&self, lo: usize, segment: &[u8]) -> Option<Vec<u8>> {
        let n = self.len();
        if self.is_empty() {
            return None;
        }
        // back[i][v] = (predecessor, letter) for the first discovery of v.
        let mut back: Vec<HashMap<u32, (u32, u8)>> = Vec::with_capacity(n);
        let mut current: Vec<u32> = vec![0];
        for layer in 0..n {
            let mut seen: HashMap<u32, (u32, u8)> = HashMap::new();
            let mut order = Vec::new();
            for &v in &current {
                for a in 0..self.q {
                    if layer >= lo && layer < lo + segment.len() && segment[layer - lo] as usize != a {
                        continue;
                    }
                    let t = self.next(layer, v, a);
                    if t != NONE && !seen.contains_key(&t) {
                        seen.insert(t, (v, a as u8));
                        order.push(t);
                    }
                }
            }
            back.push(seen);
            current = order;
        }
        if current.is_empty() {
            return None;
        }
        let mut word = vec![0u8; n];
        let mut v = current[0];
        for layer in (0..n).rev() {
            let (p, a) = back[layer][&v];
            word[layer] = a;
            v = p;
        }
        Some(word)
    }

    /// An accepted word `v` (positions from `in_start`) whose image under
    /// `rule` reads `target` on cells `[target_start, target_start + |target|)`.
    pub fn preimage_of(
        &self,
        in_start: i64,
        rule: &LocalRule,
        target_start: i64,
        target: &[u8],
    ) -> Option<Vec<u8>> {
        let q = self.q;
        let n = self.len();
        let d = rule.diameter();
        let buf_mod = q.pow(d as u32 - 1);
        if self.is_empty() {
            return None;
        }
        // Completing a window at input position p produces output cell
        // p + in_start - r_+.
        let mut back: Vec<HashMap<(u32, usize), ((u32, usize), u8)>> = Vec::with_capacity(n);
        let mut current: Vec<(u32, usize)> = vec![(0, 0)];
        for p in 0..n {
            let out_cell = p as i64 + in_start - rule.anticipation();
            let want = if p + 1 >= d {
                let k = out_cell - target_start;
                if k >= 0 && (k as usize) < target.len() {
                    Some(target[k as usize])
                } else {
                    None
                }
            } else {
                None
            };
            let mut seen: HashMap<(u32, usize), ((u32, usize), u8)> = HashMap::new();
            let mut order = Vec::new();
            for &(v, buf) in &current {
                for a in 0..q {
                    let t = self.next(p, v, a);
                    if t == NONE {
                        continue;
                    }
                    let code = buf * q + a;
                    if let Some(w) = want {
                        if rule.lookup(code) != w {
                            continue;
                        }
                    }
                    let key = (t, code % buf_mod.max(1));
                    if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(key) {
                        e.insert(((v, buf), a as u8));
                        order.push(key);
                    }
                }
            }
            back.push(seen);
            current = order;
        }
        let mut key = *current.first()?;
        let mut word = vec![0u8; n];
        for p in (0..n).rev() {
            let (prev, a) = back[p][&key];
            word[p] = a;
            key = prev;
        }
        Some(word)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::Alphabet;

    fn min_rule() -> LocalRule {
        let a = Alphabet::from_chars("01").unwrap();
        LocalRule::from_fn(a, 0, 1, 16, |w| w[0].min(w[1])).unwrap()
    }

    #[test]
    fn full_set_is_one_state_per_layer() {
        let f = Layered::full(3, 4);
        assert_eq!(f.state_count(), 5);
        assert_eq!(f.all_words().len(), 81);
    }

    #[test]
    fn product_cells_enumerate_in_order() {
        let s = Layered::from_cells(2, &[vec![0, 1], vec![1], vec![0, 1]]);
        assert_eq!(
            s.all_words(),
            vec![vec![0, 1, 0], vec![0, 1, 1], vec![1, 1, 0], vec![1, 1, 1]]
        );
        assert_eq!(s.words_between(1, 2, 10), vec![vec![1]]);
    }

    #[test]
    fn image_matches_brute_force() {
        let rule = min_rule();
        let full = Layered::full(2, 5);
        let img = full.image(0, &rule, 0, 4, usize::MAX).unwrap();
        let mut brute: Vec<Vec<u8>> = Layered::full(2, 5)
            .all_words()
            .iter()
            .map(|w| rule.apply_word(w))
            .collect();
        brute.sort();
        brute.dedup();
        assert_eq!(img.all_words(), brute);
    }

    #[test]
    fn preimage_round_trip() {
        let rule = min_rule();
        let cyl = Layered::from_cells(2, &[vec![0, 1], vec![1], vec![0, 1], vec![0, 1]]);
        let img = cyl.image(0, &rule, 0, 3, usize::MAX).unwrap();
        for w in img.all_words() {
            let v = cyl.preimage_of(0, &rule, 0, &w).unwrap();
            assert_eq!(v[1], 1);
            assert_eq!(rule.apply_word(&v), w);
        }
        assert!(cyl.preimage_of(0, &rule, 0, &[1, 0, 1]).is_none());
    }

    #[test]
    fn word_through_respects_segment() {
        let s = Layered::from_cells(2, &[vec![0, 1], vec![0, 1], vec![1]]);
        let w = s.word_through(0, &[1, 0]).unwrap();
        assert_eq!(w, vec![1, 0, 1]);
        assert!(s.word_through(2, &[0]).is_none());
    }
}
