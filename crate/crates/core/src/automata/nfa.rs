use std::collections::{BTreeSet, HashMap, VecDeque};

use super::dfa::Dfa;
use super::word::{Alphabet, Word};
use super::AutomataError;

/// Nondeterministic automaton with ε-moves, used as an intermediate for
/// projection, concatenation and star.
#[derive(Clone, Debug)]
pub struct Nfa {
    alphabet: Alphabet,
    start: usize,
    accepting: Vec<bool>,
    edges: Vec<Vec<(usize, usize)>>,
    eps: Vec<Vec<usize>>,
}

impl Nfa {
    pub fn new(alphabet: Alphabet, states: usize, start: usize) -> Nfa {
        Nfa {
            alphabet,
            start,
            accepting: vec![false; states],
            edges: vec![Vec::new(); states],
            eps: vec![Vec::new(); states],
        }
    }

    /// Accepts exactly the one-track word `w`.
    pub fn literal(alphabet: Alphabet, w: &Word) -> Nfa {
        let mut n = Nfa::new(alphabet, w.len() + 1, 0);
        for (i, &a) in w.letters().iter().enumerate() {
            n.add_edge(i, a as usize, i + 1);
        }
        n.set_accepting(w.len());
        n
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.accepting.len()
    }

    pub fn add_state(&mut self) -> usize {
        self.accepting.push(false);
        self.edges.push(Vec::new());
        self.eps.push(Vec::new());
        self.accepting.len() - 1
    }

    pub fn set_accepting(&mut self, q: usize) {
        self.accepting[q] = true;
    }

    pub fn add_edge(&mut self, from: usize, col: usize, to: usize) {
        self.edges[from].push((col, to));
    }

    pub fn add_epsilon(&mut self, from: usize, to: usize) {
        self.eps[from].push(to);
    }

    /// Copies `other`'s states into `self`, returning the offset.
    fn absorb(&mut self, other: &Nfa) -> usize {
        let off = self.state_count();
        for q in 0..other.state_count() {
            self.add_state();
            if other.accepting[q] {
                self.accepting[off + q] = true;
            }
        }
        for q in 0..other.state_count() {
            for &(c, r) in &other.edges[q] {
                self.edges[off + q].push((c, off + r));
            }
            for &r in &other.eps[q] {
                self.eps[off + q].push(off + r);
            }
        }
        off
    }

    pub fn concat(&self, other: &Nfa) -> Result<Nfa, AutomataError> {
        if self.alphabet != other.alphabet {
            return Err(AutomataError::AlphabetMismatch);
        }
        let mut out = self.clone();
        let off = out.absorb(other);
        for q in 0..self.state_count() {
            if self.accepting[q] {
                out.accepting[q] = false;
                out.add_epsilon(q, off + other.start);
            }
        }
        Ok(out)
    }

    /// Kleene star.
    pub fn star(&self) -> Nfa {
        let mut out = Nfa::new(self.alphabet.clone(), 1, 0);
        out.set_accepting(0);
        let off = out.absorb(self);
        out.add_epsilon(0, off + self.start);
        for q in 0..self.state_count() {
            if self.accepting[q] {
                out.add_epsilon(off + q, 0);
            }
        }
        out
    }

    /// Removes the listed tracks; columns that become all-pad turn into
    /// ε-moves.
    pub fn project(&self, coords: &[usize]) -> Result<Nfa, AutomataError> {
        for &c in coords {
            if c >= self.alphabet.arity() {
                return Err(AutomataError::ArityMismatch {
                    expected: self.alphabet.arity(),
                    found: c + 1,
                });
            }
        }
        let target = self.alphabet.without(coords)?;
        let mut out = Nfa::new(target.clone(), self.state_count(), self.start);
        out.accepting = self.accepting.clone();
        out.eps = self.eps.clone();
        for q in 0..self.state_count() {
            for &(c, r) in &self.edges[q] {
                let col: Vec<_> = self
                    .alphabet
                    .decode_column(c)
                    .into_iter()
                    .enumerate()
                    .filter(|(i, _)| !coords.contains(i))
                    .map(|(_, s)| s)
                    .collect();
                let nc = target.encode_column(&col);
                if nc == target.all_pad_column() {
                    out.add_epsilon(q, r);
                } else {
                    out.add_edge(q, nc, r);
                }
            }
        }
        Ok(out)
    }

    fn closure(&self, set: &mut BTreeSet<usize>) {
        let mut stack: Vec<usize> = set.iter().copied().collect();
        while let Some(q) = stack.pop() {
            for &r in &self.eps[q] {
                if set.insert(r) {
                    stack.push(r);
                }
            }
        }
    }

    pub fn accepts_word(&self, w: &Word) -> bool {
        let mut cur = BTreeSet::from([self.start]);
        self.closure(&mut cur);
        for &a in w.letters() {
            let mut next = BTreeSet::new();
            for &q in &cur {
                for &(c, r) in &self.edges[q] {
                    if c == a as usize {
                        next.insert(r);
                    }
                }
            }
            self.closure(&mut next);
            cur = next;
        }
        cur.iter().any(|&q| self.accepting[q])
    }
}

/// Subset construction.
pub fn determinize(nfa: &Nfa) -> Dfa {
    let alphabet = nfa.alphabet.clone();
    let cols = alphabet.column_count();
    let pad = alphabet.all_pad_column();
    let mut start = BTreeSet::from([nfa.start]);
    nfa.closure(&mut start);
    let mut index: HashMap<BTreeSet<usize>, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    index.insert(start.clone(), 0);
    queue.push_back(start);
    let mut table = Vec::new();
    let mut accepting = Vec::new();
    while let Some(set) = queue.pop_front() {
        accepting.push(set.iter().any(|&q| nfa.accepting[q]));
        let mut by_col: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); cols];
        for &q in &set {
            for &(c, r) in &nfa.edges[q] {
                by_col[c].insert(r);
            }
        }
        by_col[pad].clear();
        for mut next in by_col {
            nfa.closure(&mut next);
            let n = index.len();
            let id = *index.entry(next.clone()).or_insert_with(|| {
                queue.push_back(next);
                n
            });
            table.push(id);
        }
    }
    Dfa::from_parts(alphabet, 0, accepting, table)
}
