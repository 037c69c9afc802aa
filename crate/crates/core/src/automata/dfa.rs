use std::collections::{HashMap, VecDeque};

use super::nfa::Nfa;
use super::word::{convolve, Alphabet, ConvolvedWord, Symbol, Word};
use super::AutomataError;

/// Boolean combination of two languages.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoolOp {
    And,
    Or,
    Minus,
    Xor,
}

impl BoolOp {
    fn apply(self, a: bool, b: bool) -> bool {
        match self {
            BoolOp::And => a && b,
            BoolOp::Or => a || b,
            BoolOp::Minus => a && !b,
            BoolOp::Xor => a != b,
        }
    }
}

/// A complete deterministic automaton over the columns of an [`Alphabet`].
///
/// The transition table is total; construction adds a rejecting trap state
/// for any missing entry. The all-pad column always leads to a rejecting
/// sink, so only well-padded inputs can be accepted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    alphabet: Alphabet,
    start: usize,
    accepting: Vec<bool>,
    table: Vec<usize>,
}

impl Dfa {
    /// Builds a DFA from a partial edge list `(from, column, to)`.
    ///
    /// Missing transitions (and the all-pad column) go to an added trap state.
    pub fn from_edges(
        alphabet: Alphabet,
        states: usize,
        start: usize,
        accepting: &[usize],
        edges: &[(usize, usize, usize)],
    ) -> Result<Dfa, AutomataError> {
        if states == 0 || start >= states {
            return Err(AutomataError::Format(format!(
                "start state {} out of range for {} states",
                start, states
            )));
        }
        let cols = alphabet.column_count();
        let pad = alphabet.all_pad_column();
        let trap = states;
        let mut table = vec![usize::MAX; (states + 1) * cols];
        for &(from, col, to) in edges {
            if from >= states || to >= states {
                return Err(AutomataError::Format(format!(
                    "transition {} -> {} references a missing state",
                    from, to
                )));
            }
            if col >= pad {
                return Err(AutomataError::Format(format!(
                    "illegal column index {}",
                    col
                )));
            }
            let slot = &mut table[from * cols + col];
            if *slot != usize::MAX && *slot != to {
                return Err(AutomataError::Format(format!(
                    "nondeterministic transition from state {} on column {}",
                    from,
                    alphabet.render_column(col)
                )));
            }
            *slot = to;
        }
        let mut acc = vec![false; states + 1];
        for &a in accepting {
            if a >= states {
                return Err(AutomataError::Format(format!(
                    "accepting state {} out of range",
                    a
                )));
            }
            acc[a] = true;
        }
        for (i, slot) in table.iter_mut().enumerate() {
            if *slot == usize::MAX || i % cols == pad {
                *slot = trap;
            }
        }
        Ok(Dfa {
            alphabet,
            start,
            accepting: acc,
            table,
        }
        .reachable())
    }

    /// Builds a DFA over a single track from a per-letter successor function.
    pub fn from_fn(
        alphabet: Alphabet,
        states: usize,
        start: usize,
        accepting: &[usize],
        delta: impl Fn(usize, usize) -> Option<usize>,
    ) -> Dfa {
        let mut edges = Vec::new();
        for q in 0..states {
            for c in alphabet.legal_columns() {
                if let Some(r) = delta(q, c) {
                    edges.push((q, c, r));
                }
            }
        }
        Dfa::from_edges(alphabet, states, start, accepting, &edges).expect("well-formed DFA")
    }

    pub(crate) fn from_parts(
        alphabet: Alphabet,
        start: usize,
        accepting: Vec<bool>,
        table: Vec<usize>,
    ) -> Dfa {
        debug_assert_eq!(table.len(), accepting.len() * alphabet.column_count());
        Dfa {
            alphabet,
            start,
            accepting,
            table,
        }
    }

    /// All well-formed convolutions over `alphabet` (for one track, `Σ*`).
    pub fn universal(alphabet: Alphabet) -> Dfa {
        well_formed(alphabet)
    }

    pub fn empty(alphabet: Alphabet) -> Dfa {
        Dfa::from_edges(alphabet, 1, 0, &[], &[]).unwrap()
    }

    /// The finite language `words` over one track.
    pub fn finite(alphabet: Alphabet, words: &[Word]) -> Result<Dfa, AutomataError> {
        if alphabet.arity() != 1 {
            return Err(AutomataError::ArityMismatch {
                expected: 1,
                found: alphabet.arity(),
            });
        }
        // Trie.
        let mut edges = Vec::new();
        let mut accepting = Vec::new();
        let mut children: HashMap<(usize, u8), usize> = HashMap::new();
        let mut states = 1;
        for w in words {
            alphabet.check_word(0, w)?;
            let mut q = 0;
            for &a in w.letters() {
                q = *children.entry((q, a)).or_insert_with(|| {
                    states += 1;
                    edges.push((q, a as usize, states - 1));
                    states - 1
                });
            }
            accepting.push(q);
        }
        Dfa::from_edges(alphabet, states, 0, &accepting, &edges)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn arity(&self) -> usize {
        self.alphabet.arity()
    }

    pub fn state_count(&self) -> usize {
        self.accepting.len()
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting[q]
    }

    pub fn accepting_states(&self) -> impl Iterator<Item = usize> + '_ {
        self.accepting
            .iter()
            .enumerate()
            .filter(|(_, a)| **a)
            .map(|(q, _)| q)
    }

    #[inline]
    pub fn next(&self, q: usize, col: usize) -> usize {
        self.table[q * self.alphabet.column_count() + col]
    }

    pub fn run_columns(&self, cols: impl IntoIterator<Item = usize>) -> usize {
        cols.into_iter().fold(self.start, |q, c| self.next(q, c))
    }

    /// State reached from `q` after reading a one-track word.
    pub fn run_from(&self, q: usize, w: &Word) -> usize {
        w.letters().iter().fold(q, |q, &a| self.next(q, a as usize))
    }

    pub fn accepts(&self, w: &ConvolvedWord) -> Result<bool, AutomataError> {
        if w.arity() != self.arity() {
            return Err(AutomataError::ArityMismatch {
                expected: self.arity(),
                found: w.arity(),
            });
        }
        for col in w.columns() {
            for (i, s) in col.iter().enumerate() {
                if let Symbol::Letter(a) = s {
                    if *a as usize >= self.alphabet.track_size(i) {
                        return Err(AutomataError::InvalidLetter(format!("index {}", a)));
                    }
                }
            }
        }
        let q = self.run_columns(w.columns().iter().map(|c| self.alphabet.encode_column(c)));
        Ok(self.accepting[q])
    }

    /// Membership of a tuple of words, convolved on the fly.
    pub fn accepts_tuple(&self, words: &[&Word]) -> Result<bool, AutomataError> {
        self.accepts(&convolve(words))
    }

    pub fn accepts_word(&self, w: &Word) -> Result<bool, AutomataError> {
        if self.arity() != 1 {
            return Err(AutomataError::ArityMismatch {
                expected: self.arity(),
                found: 1,
            });
        }
        self.alphabet.check_word(0, w)?;
        Ok(self.contains(w))
    }

    /// Unchecked membership for one-track automata.
    ///
    /// Letters outside the track alphabet are rejected; panics in debug
    /// builds when the automaton has more than one track.
    pub fn contains(&self, w: &Word) -> bool {
        debug_assert_eq!(self.arity(), 1);
        let n = self.alphabet.track_size(0);
        let mut q = self.start;
        for &a in w.letters() {
            if a as usize >= n {
                return false;
            }
            q = self.next(q, a as usize);
        }
        self.accepting[q]
    }

    fn same_alphabet(&self, other: &Dfa) -> Result<(), AutomataError> {
        if self.alphabet.arity() != other.alphabet.arity() {
            return Err(AutomataError::ArityMismatch {
                expected: self.arity(),
                found: other.arity(),
            });
        }
        if self.alphabet != other.alphabet {
            return Err(AutomataError::AlphabetMismatch);
        }
        Ok(())
    }

    /// Product construction for a boolean operation on the two languages.
    pub fn combine(&self, other: &Dfa, op: BoolOp) -> Result<Dfa, AutomataError> {
        self.same_alphabet(other)?;
        let cols = self.alphabet.column_count();
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut queue = VecDeque::new();
        let mut table = Vec::new();
        let mut accepting = Vec::new();
        index.insert((self.start, other.start), 0);
        queue.push_back((self.start, other.start));
        while let Some((p, q)) = queue.pop_front() {
            accepting.push(op.apply(self.accepting[p], other.accepting[q]));
            for c in 0..cols {
                let pair = (self.next(p, c), other.next(q, c));
                let n = index.len();
                let id = *index.entry(pair).or_insert_with(|| {
                    queue.push_back(pair);
                    n
                });
                table.push(id);
            }
        }
        Ok(Dfa::from_parts(self.alphabet.clone(), 0, accepting, table))
    }

    /// `universe \ self`.
    pub fn complement(&self, universe: &Dfa) -> Result<Dfa, AutomataError> {
        universe.combine(self, BoolOp::Minus)
    }

    /// Complement relative to all well-formed inputs.
    pub fn negate(&self) -> Dfa {
        self.complement(&Dfa::universal(self.alphabet.clone()))
            .expect("same alphabet")
    }

    pub fn to_nfa(&self) -> Nfa {
        let cols = self.alphabet.column_count();
        let mut nfa = Nfa::new(self.alphabet.clone(), self.state_count(), self.start);
        for q in 0..self.state_count() {
            if self.accepting[q] {
                nfa.set_accepting(q);
            }
            for c in 0..cols {
                if c != self.alphabet.all_pad_column() {
                    nfa.add_edge(q, c, self.next(q, c));
                }
            }
        }
        nfa
    }

    /// Existential projection: removes the listed tracks.
    ///
    /// The automaton is first restricted to well-formed convolutions, so the
    /// all-pad columns created by the projection only occur as a suffix and
    /// can be read as ε-moves.
    pub fn project(&self, coords: &[usize]) -> Result<Nfa, AutomataError> {
        let restricted = self.combine(&well_formed(self.alphabet.clone()), BoolOp::And)?;
        restricted.to_nfa().project(coords)
    }

    /// Keeps only states reachable from the start, renumbered in BFS order.
    pub fn reachable(&self) -> Dfa {
        let cols = self.alphabet.column_count();
        let mut index = vec![usize::MAX; self.state_count()];
        let mut order = vec![self.start];
        index[self.start] = 0;
        let mut i = 0;
        while i < order.len() {
            let q = order[i];
            for c in 0..cols {
                let r = self.next(q, c);
                if index[r] == usize::MAX {
                    index[r] = order.len();
                    order.push(r);
                }
            }
            i += 1;
        }
        let table = order
            .iter()
            .flat_map(|&q| (0..cols).map(move |c| (q, c)))
            .map(|(q, c)| index[self.next(q, c)])
            .collect();
        let accepting = order.iter().map(|&q| self.accepting[q]).collect();
        Dfa::from_parts(self.alphabet.clone(), 0, accepting, table)
    }

    /// States from which some accepting state is reachable.
    pub fn co_reachable(&self) -> Vec<bool> {
        let n = self.state_count();
        let mut rev: Vec<Vec<usize>> = vec![Vec::new(); n];
        for q in 0..n {
            for c in self.alphabet.legal_columns() {
                rev[self.next(q, c)].push(q);
            }
        }
        let mut live = self.accepting.clone();
        let mut stack: Vec<usize> = self.accepting_states().collect();
        while let Some(q) = stack.pop() {
            for &p in &rev[q] {
                if !live[p] {
                    live[p] = true;
                    stack.push(p);
                }
            }
        }
        live
    }

    /// States that are reachable and co-reachable ("useful").
    pub fn useful_states(&self) -> Vec<bool> {
        let mut seen = vec![false; self.state_count()];
        let mut stack = vec![self.start];
        seen[self.start] = true;
        while let Some(q) = stack.pop() {
            for c in self.alphabet.legal_columns() {
                let r = self.next(q, c);
                if !seen[r] {
                    seen[r] = true;
                    stack.push(r);
                }
            }
        }
        let live = self.co_reachable();
        seen.iter().zip(live).map(|(a, b)| *a && b).collect()
    }

    pub fn useful_state_count(&self) -> usize {
        self.useful_states().iter().filter(|u| **u).count()
    }

    pub fn is_empty_language(&self) -> bool {
        !self.useful_states()[self.start]
    }

    /// Whether the two automata accept the same well-formed inputs.
    pub fn equivalent(&self, other: &Dfa) -> Result<bool, AutomataError> {
        Ok(self.combine(other, BoolOp::Xor)?.is_empty_language())
    }
}

/// Accepts exactly the well-padded convolutions over `alphabet`.
pub(crate) fn well_formed(alphabet: Alphabet) -> Dfa {
    let k = alphabet.arity();
    assert!(k < 16, "too many tracks");
    // State = bitmask of rows that have ended; one extra trap state.
    let states = 1usize << k;
    let trap = states;
    let cols = alphabet.column_count();
    let mut table = Vec::with_capacity((states + 1) * cols);
    for mask in 0..states {
        for c in 0..cols {
            let col = alphabet.decode_column(c);
            let mut next = mask;
            let mut ok = c != alphabet.all_pad_column();
            for (r, s) in col.iter().enumerate() {
                match s {
                    Symbol::Pad => next |= 1 << r,
                    Symbol::Letter(_) if mask & (1 << r) != 0 => ok = false,
                    Symbol::Letter(_) => {}
                }
            }
            table.push(if ok { next } else { trap });
        }
    }
    table.extend(std::iter::repeat(trap).take(cols));
    let mut accepting = vec![true; states];
    accepting.push(false);
    Dfa::from_parts(alphabet, 0, accepting, table).reachable()
}
