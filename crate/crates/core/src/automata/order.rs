//! Length-lexicographic navigation and counting on one-track automata.
//!
//! Everything here works on per-length path counts, so `count_leq_ll` stays
//! polynomial in `|w|` even when the answer is exponential.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::dfa::Dfa;
use super::word::Word;
use super::AutomataError;

fn require_one_track(d: &Dfa) -> Result<(), AutomataError> {
    if d.arity() != 1 {
        return Err(AutomataError::ArityMismatch {
            expected: 1,
            found: d.arity(),
        });
    }
    Ok(())
}

fn letters(d: &Dfa) -> usize {
    d.alphabet().track_size(0)
}

/// `reach[r][q]`: some accepted word of length exactly `r` starts at `q`.
fn completable(d: &Dfa, max_len: usize) -> Vec<Vec<bool>> {
    let n = d.state_count();
    let k = letters(d);
    let mut out = Vec::with_capacity(max_len + 1);
    out.push((0..n).map(|q| d.is_accepting(q)).collect::<Vec<_>>());
    for r in 1..=max_len {
        let prev = &out[r - 1];
        let row = (0..n).map(|q| (0..k).any(|c| prev[d.next(q, c)])).collect();
        out.push(row);
    }
    out
}

/// Least word of length `len` accepted from `q`, given completability data.
fn least_completion(d: &Dfa, mut q: usize, len: usize, reach: &[Vec<bool>]) -> Word {
    let mut w = Word::empty();
    for r in (0..len).rev() {
        let c = (0..letters(d))
            .find(|&c| reach[r][d.next(q, c)])
            .expect("completable state");
        w.push(c as u8);
        q = d.next(q, c);
    }
    w
}

/// The ll-least accepted word.
pub fn min_ll(d: &Dfa) -> Result<Word, AutomataError> {
    require_one_track(d)?;
    // Shortest accepted word has length < state count.
    let n = d.state_count();
    let reach = completable(d, n);
    let len = (0..=n)
        .find(|&r| reach[r][d.start()])
        .ok_or(AutomataError::EmptyLanguage)?;
    Ok(least_completion(d, d.start(), len, &reach))
}

/// The ll-least accepted word strictly above `w`.
pub fn succ_ll(d: &Dfa, w: &Word) -> Result<Word, AutomataError> {
    require_one_track(d)?;
    d.alphabet().check_word(0, w)?;
    let n = d.state_count();
    let len = w.len();
    let reach = completable(d, len + n);
    // Same length: keep the longest prefix of `w` that admits a larger letter.
    let mut run = Vec::with_capacity(len + 1);
    run.push(d.start());
    for &a in w.letters() {
        run.push(d.next(*run.last().unwrap(), a as usize));
    }
    for i in (0..len).rev() {
        let rest = len - i - 1;
        let q = run[i];
        let bigger =
            ((w.letters()[i] as usize + 1)..letters(d)).find(|&c| reach[rest][d.next(q, c)]);
        if let Some(c) = bigger {
            let mut out = w.slice(0, i);
            out.push(c as u8);
            let tail = least_completion(d, d.next(q, c), rest, &reach);
            return Ok(out.concat(&tail));
        }
    }
    // Longer: if any member is longer than `w`, one has length within `n`
    // of it (remove cycles of length at most `n`).
    (len + 1..=len + n)
        .find(|&r| reach[r][d.start()])
        .map(|r| least_completion(d, d.start(), r, &reach))
        .ok_or(AutomataError::NoSuccessor)
}

/// The first `limit` accepted words in ll-order.
pub fn enumerate_ll(d: &Dfa, limit: usize) -> Result<Vec<Word>, AutomataError> {
    require_one_track(d)?;
    Ok(LlIter::new(d).take(limit).collect())
}

/// Iterator over a one-track language in increasing ll-order.
pub struct LlIter<'a> {
    dfa: &'a Dfa,
    next: Option<Word>,
}

impl<'a> LlIter<'a> {
    pub fn new(dfa: &'a Dfa) -> Self {
        LlIter {
            dfa,
            next: min_ll(dfa).ok(),
        }
    }
}

impl Iterator for LlIter<'_> {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        let cur = self.next.take()?;
        self.next = succ_ll(self.dfa, &cur).ok();
        Some(cur)
    }
}

/// Owned variant of [`LlIter`], for texts that outlive a borrow.
pub struct OwnedLlIter {
    dfa: Dfa,
    next: Option<Word>,
}

impl OwnedLlIter {
    pub fn new(dfa: Dfa) -> Self {
        let next = min_ll(&dfa).ok();
        OwnedLlIter { dfa, next }
    }
}

impl Iterator for OwnedLlIter {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        let cur = self.next.take()?;
        self.next = succ_ll(&self.dfa, &cur).ok();
        Some(cur)
    }
}

/// Number of accepted words of each length `0..=max_len`.
pub fn slice_counts(d: &Dfa, max_len: usize) -> Result<Vec<BigUint>, AutomataError> {
    require_one_track(d)?;
    let n = d.state_count();
    let k = letters(d);
    // Forward counts: paths of length r from the start ending in each state.
    let mut cur = vec![BigUint::zero(); n];
    cur[d.start()] = BigUint::one();
    let mut out = Vec::with_capacity(max_len + 1);
    for r in 0..=max_len {
        let total = (0..n)
            .filter(|&q| d.is_accepting(q))
            .fold(BigUint::zero(), |acc, q| acc + &cur[q]);
        out.push(total);
        if r == max_len {
            break;
        }
        let mut next = vec![BigUint::zero(); n];
        for q in 0..n {
            if cur[q].is_zero() {
                continue;
            }
            for c in 0..k {
                next[d.next(q, c)] += &cur[q];
            }
        }
        cur = next;
    }
    Ok(out)
}

/// `l(w) = |{v ∈ L(d) : v ≤_ll w}|`, computed by per-length path counting.
///
/// Walks `w` right to left so that only one vector of suffix counts is live
/// at a time: `suffix[q]` is the number of accepted words of the current
/// remaining length starting in `q`.
pub fn count_leq_ll(d: &Dfa, w: &Word) -> Result<BigUint, AutomataError> {
    require_one_track(d)?;
    d.alphabet().check_word(0, w)?;
    let n = d.state_count();
    let k = letters(d);
    let len = w.len();
    let mut run = Vec::with_capacity(len + 1);
    run.push(d.start());
    for &a in w.letters() {
        run.push(d.next(*run.last().unwrap(), a as usize));
    }
    let mut total = BigUint::zero();
    if d.is_accepting(run[len]) {
        total += 1u32;
    }
    let mut suffix: Vec<BigUint> = (0..n)
        .map(|q| {
            if d.is_accepting(q) {
                BigUint::one()
            } else {
                BigUint::zero()
            }
        })
        .collect();
    // `rest` is the number of letters after position `i`.
    for rest in 0..len {
        // Words shorter than |w| with exactly `rest` letters.
        total += &suffix[d.start()];
        let i = len - 1 - rest;
        let q = run[i];
        for c in 0..w.letters()[i] as usize {
            total += &suffix[d.next(q, c)];
        }
        let mut next = vec![BigUint::zero(); n];
        for (q, slot) in next.iter_mut().enumerate() {
            for c in 0..k {
                *slot += &suffix[d.next(q, c)];
            }
        }
        suffix = next;
    }
    Ok(total)
}

/// Least accepted word of length at least `min_len`, if any.
pub fn min_ll_at_least(d: &Dfa, min_len: usize) -> Result<Word, AutomataError> {
    require_one_track(d)?;
    let n = d.state_count();
    let reach = completable(d, min_len + n);
    (min_len..=min_len + n)
        .find(|&r| reach[r][d.start()])
        .map(|r| least_completion(d, d.start(), r, &reach))
        .ok_or(AutomataError::NoSuccessor)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::examples;

    fn brute_members(d: &Dfa, max_len: usize) -> Vec<Word> {
        let mut out = Vec::new();
        for len in 0..=max_len {
            for bits in 0..(1u64 << len) {
                let w =
                    Word::from_letters((0..len).rev().map(|i| ((bits >> i) & 1) as u8).collect());
                if d.contains(&w) {
                    out.push(w);
                }
            }
        }
        out
    }

    #[test]
    fn min_and_successor_examples() {
        let s = examples::sigma_star();
        assert_eq!(min_ll(&s).unwrap(), Word::empty());
        assert_eq!(succ_ll(&s, &Word::bits("1")).unwrap(), Word::bits("00"));
        let zo = examples::zeros_then_ones();
        assert_eq!(succ_ll(&zo, &Word::bits("01")).unwrap(), Word::bits("11"));
        assert_eq!(min_ll(&examples::one_then_any()).unwrap(), Word::bits("1"));
    }

    #[test]
    fn empty_and_exhausted() {
        let e = Dfa::empty(crate::automata::Alphabet::binary());
        assert_eq!(min_ll(&e), Err(AutomataError::EmptyLanguage));
        let f = Dfa::finite(crate::automata::Alphabet::binary(), &[Word::bits("01")]).unwrap();
        assert_eq!(
            succ_ll(&f, &Word::bits("01")),
            Err(AutomataError::NoSuccessor)
        );
        assert_eq!(succ_ll(&f, &Word::bits("")).unwrap(), Word::bits("01"));
        assert!(enumerate_ll(&e, 5).unwrap().is_empty());
    }

    #[test]
    fn enumerate_examples() {
        let s = examples::sigma_star();
        let got: Vec<String> = enumerate_ll(&s, 4)
            .unwrap()
            .iter()
            .map(|w| w.to_string())
            .collect();
        assert_eq!(got, ["", "0", "1", "00"]);
        let one_zeros = examples::one_then_zeros();
        let got: Vec<String> = enumerate_ll(&one_zeros, 3)
            .unwrap()
            .iter()
            .map(|w| w.to_string())
            .collect();
        assert_eq!(got, ["1", "10", "100"]);
    }

    #[test]
    fn count_examples() {
        assert_eq!(
            count_leq_ll(&examples::sigma_star(), &Word::bits("11")).unwrap(),
            7u32.into()
        );
        assert_eq!(
            count_leq_ll(&examples::zeros(), &Word::bits("000")).unwrap(),
            4u32.into()
        );
        assert_eq!(
            count_leq_ll(&examples::zeros_then_ones(), &Word::bits("11")).unwrap(),
            6u32.into()
        );
    }

    #[test]
    fn successor_and_count_agree_with_brute_force() {
        for d in examples::corpus() {
            let members = brute_members(&d.dfa, 10);
            let firsts: Vec<Word> = members.iter().take(50).cloned().collect();
            for (i, w) in firsts.iter().enumerate() {
                if let Some(next) = members.get(i + 1) {
                    if next.len() <= 9 {
                        assert_eq!(&succ_ll(&d.dfa, w).unwrap(), next, "{}", d.name);
                    }
                }
            }
            for len in 0..=10usize {
                for bits in 0..(1u64 << len) {
                    let w = Word::from_letters(
                        (0..len).rev().map(|i| ((bits >> i) & 1) as u8).collect(),
                    );
                    let expected = members.iter().filter(|v| **v <= w).count();
                    assert_eq!(
                        count_leq_ll(&d.dfa, &w).unwrap(),
                        BigUint::from(expected),
                        "{} {:?}",
                        d.name,
                        w
                    );
                }
            }
        }
    }

    #[test]
    fn slice_counts_match_enumeration() {
        for d in examples::corpus() {
            let counts = slice_counts(&d.dfa, 8).unwrap();
            let members = brute_members(&d.dfa, 8);
            for (len, c) in counts.iter().enumerate() {
                assert_eq!(
                    *c,
                    BigUint::from(members.iter().filter(|w| w.len() == len).count())
                );
            }
        }
    }

    #[test]
    fn least_member_of_length_at_least() {
        let even = examples::even_zeros();
        assert_eq!(min_ll_at_least(&even, 3).unwrap(), Word::bits("0000"));
        assert_eq!(
            min_ll_at_least(&examples::sigma_star(), 2).unwrap(),
            Word::bits("00")
        );
    }
}
