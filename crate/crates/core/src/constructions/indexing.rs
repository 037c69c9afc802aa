use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::automata::{
    growth_class, min_ll_at_least, succ_ll, Alphabet, Dfa, GrowthClass, Symbol, Word,
};
use crate::engine::EngineError;

use super::bettors::construction;
use super::family::AutomaticFamily;

/// Largest slice bound accepted; the index alphabet has `2^c` letters.
pub const MAX_SLICE_BOUND: u64 = 6;

/// Indexing of the finite subsets of a bounded-slice domain by words over an
/// alphabet of characteristic tuples.
#[derive(Clone, Debug)]
pub struct FiniteSetIndexing {
    domain: Dfa,
    bound: usize,
    family: AutomaticFamily,
}

impl FiniteSetIndexing {
    /// Slice bound `c`.
    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn family(&self) -> &AutomaticFamily {
        &self.family
    }

    pub fn index_alphabet(&self) -> &Alphabet {
        self.family.index().alphabet()
    }

    /// Domain words of length `n` in lexicographic order.
    pub fn slice(&self, n: usize) -> Vec<Word> {
        slice(&self.domain, n)
    }

    /// `φ(F) = k₀k₁…k_r`, where bit `i` of `k_n` says whether the `i`-th word
    /// of the length-`n` slice is in `F`, and `r` is the last length with
    /// `F ∩ Dₙ ≠ ∅`.
    pub fn encode(&self, set: &[Word]) -> Result<Word, EngineError> {
        let mut by_len: HashMap<usize, Vec<&Word>> = HashMap::new();
        for w in set {
            if !self.domain.contains(w) {
                return Err(EngineError::OutsideDomain(w.clone()));
            }
            by_len.entry(w.len()).or_default().push(w);
        }
        let Some(&top) = by_len.keys().max() else {
            return Ok(Word::empty());
        };
        let mut out = Vec::with_capacity(top + 1);
        for n in 0..=top {
            let members = by_len.get(&n).map(Vec::as_slice).unwrap_or(&[]);
            let letter = self
                .slice(n)
                .iter()
                .enumerate()
                .filter(|(_, y)| members.contains(y))
                .fold(0u8, |acc, (i, _)| acc | (1 << i));
            out.push(letter);
        }
        Ok(Word::from_letters(out))
    }

    pub fn decode(&self, index: &Word) -> Result<BTreeSet<Word>, EngineError> {
        let mut out = BTreeSet::new();
        for (n, &k) in index.letters().iter().enumerate() {
            if k as usize >= 1 << self.bound {
                return Err(construction(format!(
                    "letter {} is not a {}-tuple",
                    k, self.bound
                )));
            }
            let slice = self.slice(n);
            for i in 0..self.bound {
                if k & (1 << i) != 0 {
                    let w = slice
                        .get(i)
                        .ok_or_else(|| construction(format!("slice {} has no word {}", n, i)))?;
                    out.insert(w.clone());
                }
            }
        }
        Ok(out)
    }
}

fn slice(domain: &Dfa, n: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut cur = min_ll_at_least(domain, n).ok();
    while let Some(w) = cur.filter(|w| w.len() == n) {
        cur = succ_ll(domain, &w).ok();
        out.push(w);
    }
    out
}

/// Runs of `x` so far plus, per domain state, how many same-length words
/// lexicographically below the prefix read so far reach it (capped at `c`).
#[derive(Clone, PartialEq, Eq, Hash)]
enum Track {
    Reading { state: usize, below: Vec<u8> },
    Accept,
}

/// The automatic family of all finite subsets of a domain with
/// `|D ∩ Σⁿ| ≤ c` for every `n`.
pub fn finite_set_indexing(domain: &Dfa) -> Result<FiniteSetIndexing, EngineError> {
    if domain.arity() != 1 {
        return Err(construction("the domain must read one track"));
    }
    let bound = match growth_class(domain)? {
        GrowthClass::BoundedSlices(c) if c <= MAX_SLICE_BOUND => c as usize,
        GrowthClass::BoundedSlices(c) => {
            return Err(construction(format!(
                "slice bound {} exceeds {}",
                c, MAX_SLICE_BOUND
            )))
        }
        other => {
            return Err(construction(format!(
                "domain is not bounded-slice ({:?})",
                other
            )))
        }
    };
    let index_alphabet = Alphabet::sized(1 << bound);
    let index = Dfa::universal(index_alphabet.clone());
    let relation = relation(domain, bound, &index_alphabet)?;
    let family = AutomaticFamily::new(index, relation)?;
    Ok(FiniteSetIndexing {
        domain: domain.clone(),
        bound,
        family,
    })
}

/// Reads `(x, e)`: tracks the rank of `x` in its slice while both rows have
/// letters, then at the first column past `x` accepts iff `x ∈ D` and the
/// index letter there has the rank's bit set.
fn relation(domain: &Dfa, bound: usize, index_alphabet: &Alphabet) -> Result<Dfa, EngineError> {
    let sigma = domain.alphabet().track_size(0);
    let alphabet = Alphabet::new(vec![
        domain.alphabet().track(0).to_vec(),
        index_alphabet.track(0).to_vec(),
    ])?;
    let alive = domain.co_reachable();
    let cap = bound as u8;
    let n = domain.state_count();
    let start = Track::Reading {
        state: domain.start(),
        below: vec![0; n],
    };
    let mut ids: HashMap<Track, usize> = HashMap::from([(start.clone(), 0)]);
    let mut queue = VecDeque::from([start]);
    let mut tracks = vec![];
    let mut edges = Vec::new();
    let intern =
        |t: Track, ids: &mut HashMap<Track, usize>, queue: &mut VecDeque<Track>| -> usize {
            let len = ids.len();
            *ids.entry(t.clone()).or_insert_with(|| {
                queue.push_back(t);
                len
            })
        };
    while let Some(t) = queue.pop_front() {
        let id = ids[&t];
        tracks.push(t.clone());
        match &t {
            Track::Accept => {
                for k in 0..index_alphabet.track_size(0) {
                    let col = alphabet.encode_column(&[Symbol::Pad, Symbol::Letter(k as u8)]);
                    edges.push((id, col, id));
                }
            }
            Track::Reading { state, below } => {
                for a in 0..sigma {
                    let mut next = vec![0u8; n];
                    for q in 0..n {
                        for b in 0..sigma {
                            let r = domain.next(q, b);
                            next[r] = next[r].saturating_add(below[q]).min(cap);
                        }
                    }
                    for b in 0..a {
                        let r = domain.next(*state, b);
                        next[r] = next[r].saturating_add(1).min(cap);
                    }
                    for (q, c) in next.iter_mut().enumerate() {
                        if !alive[q] {
                            *c = 0;
                        }
                    }
                    let to = intern(
                        Track::Reading {
                            state: domain.next(*state, a),
                            below: next,
                        },
                        &mut ids,
                        &mut queue,
                    );
                    for k in 0..index_alphabet.track_size(0) {
                        let col = alphabet
                            .encode_column(&[Symbol::Letter(a as u8), Symbol::Letter(k as u8)]);
                        edges.push((id, col, to));
                    }
                }
                if domain.is_accepting(*state) {
                    let rank: usize = (0..n)
                        .filter(|&q| domain.is_accepting(q))
                        .map(|q| below[q] as usize)
                        .sum();
                    if rank < bound {
                        let to = intern(Track::Accept, &mut ids, &mut queue);
                        for k in 0..index_alphabet.track_size(0) {
                            if k & (1 << rank) != 0 {
                                let col =
                                    alphabet.encode_column(&[Symbol::Pad, Symbol::Letter(k as u8)]);
                                edges.push((id, col, to));
                            }
                        }
                    }
                }
            }
        }
    }
    let accepting: Vec<usize> = tracks
        .iter()
        .enumerate()
        .filter(|(_, t)| **t == Track::Accept)
        .map(|(i, _)| ids[&tracks[i]])
        .collect();
    Ok(Dfa::from_edges(alphabet, ids.len(), 0, &accepting, &edges)?)
}
