use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::automata::Alphabet;

use super::{Cfg, GSymbol, Production};

/// A grammar with rules `X → YZ` and `X → a` only; `empty` records whether
/// ε is in the language (the optional `S → ε`).
///
/// Every nonterminal of a `CnfGrammar` built by [`to_cnf`] is reachable and
/// generating, except a start symbol with no rules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfGrammar {
    alphabet: Alphabet,
    names: Vec<String>,
    start: usize,
    terminal: Vec<(usize, u8)>,
    binary: Vec<(usize, usize, usize)>,
    empty: bool,
}

impl CnfGrammar {
    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn nonterminal_count(&self) -> usize {
        self.names.len()
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn terminal_rules(&self) -> &[(usize, u8)] {
        &self.terminal
    }

    pub fn binary_rules(&self) -> &[(usize, usize, usize)] {
        &self.binary
    }

    pub fn accepts_empty(&self) -> bool {
        self.empty
    }

    pub fn rule_count(&self) -> usize {
        self.terminal.len() + self.binary.len() + usize::from(self.empty)
    }

    /// `2^|V|`: every member at least this long has a parse tree with a
    /// repeated nonterminal on its longest path. Saturates at `usize::MAX`.
    pub fn pumping_bound(&self) -> usize {
        1usize
            .checked_shl(self.names.len() as u32)
            .unwrap_or(usize::MAX)
    }

    pub fn to_cfg(&self) -> Cfg {
        let mut productions: Vec<Production> = self
            .terminal
            .iter()
            .map(|&(x, a)| Production {
                lhs: x,
                rhs: vec![GSymbol::T(a)],
            })
            .collect();
        productions.extend(self.binary.iter().map(|&(x, y, z)| Production {
            lhs: x,
            rhs: vec![GSymbol::N(y), GSymbol::N(z)],
        }));
        if self.empty {
            productions.push(Production {
                lhs: self.start,
                rhs: vec![],
            });
        }
        Cfg::new(
            self.alphabet.clone(),
            self.names.clone(),
            self.start,
            productions,
        )
        .expect("a CNF grammar is a valid grammar")
    }
}

impl fmt::Display for CnfGrammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rule_count() == 0 {
            return writeln!(f, "// {} generates nothing", self.names[self.start]);
        }
        write!(f, "{}", self.to_cfg())
    }
}

fn fresh(names: &mut Vec<String>, base: String) -> usize {
    let mut name = base.clone();
    let mut k = 1;
    while names.contains(&name) {
        k += 1;
        name = format!("{}{}", base, k);
    }
    names.push(name);
    names.len() - 1
}

/// Rules of length at most two whose length-two right sides are nonterminals.
type Short = Vec<(usize, Vec<GSymbol>)>;

fn shorten(g: &Cfg, names: &mut Vec<String>) -> Short {
    let letters = g.alphabet().track(0);
    let mut for_letter: HashMap<u8, usize> = HashMap::new();
    let mut out = Vec::new();
    for p in g.productions() {
        if p.rhs.len() <= 1 {
            out.push((p.lhs, p.rhs.clone()));
            continue;
        }
        let mut rhs = Vec::with_capacity(p.rhs.len());
        for s in &p.rhs {
            rhs.push(match *s {
                GSymbol::T(a) => {
                    let x = *for_letter.entry(a).or_insert_with(|| {
                        let x = fresh(names, format!("<{}>", letters[a as usize]));
                        out.push((x, vec![GSymbol::T(a)]));
                        x
                    });
                    GSymbol::N(x)
                }
                n => n,
            });
        }
        let mut lhs = p.lhs;
        while rhs.len() > 2 {
            let head = rhs.remove(0);
            let rest = fresh(names, format!("{}'", names[p.lhs]));
            out.push((lhs, vec![head, GSymbol::N(rest)]));
            lhs = rest;
        }
        out.push((lhs, rhs));
    }
    out
}

fn nullable(rules: &Short, n: usize) -> Vec<bool> {
    let mut out = vec![false; n];
    loop {
        let mut changed = false;
        for (lhs, rhs) in rules {
            if !out[*lhs] && rhs.iter().all(|s| matches!(s, GSymbol::N(x) if out[*x])) {
                out[*lhs] = true;
                changed = true;
            }
        }
        if !changed {
            return out;
        }
    }
}

/// Language-equivalent Chomsky normal form: long right sides are split,
/// terminals in long rules get their own nonterminals, ε-rules and unit
/// rules are eliminated, and useless nonterminals are dropped.
pub fn to_cnf(g: &Cfg) -> CnfGrammar {
    let mut names = g.names().to_vec();
    let rules = shorten(g, &mut names);
    let n = names.len();
    let null = nullable(&rules, n);

    let mut terminal: BTreeSet<(usize, u8)> = BTreeSet::new();
    let mut binary: BTreeSet<(usize, usize, usize)> = BTreeSet::new();
    let mut unit: Vec<Vec<usize>> = vec![vec![]; n];
    for (lhs, rhs) in &rules {
        match rhs.as_slice() {
            [GSymbol::T(a)] => {
                terminal.insert((*lhs, *a));
            }
            [GSymbol::N(y)] => unit[*lhs].push(*y),
            [GSymbol::N(y), GSymbol::N(z)] => {
                binary.insert((*lhs, *y, *z));
                if null[*y] {
                    unit[*lhs].push(*z);
                }
                if null[*z] {
                    unit[*lhs].push(*y);
                }
            }
            _ => {}
        }
    }

    // Unit closure: X inherits the non-unit rules of every Y with X ⇒* Y.
    let mut closed_t = BTreeSet::new();
    let mut closed_b = BTreeSet::new();
    for x in 0..n {
        let mut seen = vec![false; n];
        let mut stack = vec![x];
        seen[x] = true;
        while let Some(y) = stack.pop() {
            for &z in &unit[y] {
                if !seen[z] {
                    seen[z] = true;
                    stack.push(z);
                }
            }
        }
        for y in (0..n).filter(|&y| seen[y]) {
            closed_t.extend(terminal.range((y, 0)..=(y, u8::MAX)).map(|&(_, a)| (x, a)));
            closed_b.extend(
                binary
                    .range((y, 0, 0)..=(y, usize::MAX, usize::MAX))
                    .map(|&(_, l, r)| (x, l, r)),
            );
        }
    }

    trim(
        g.alphabet().clone(),
        names,
        g.start(),
        closed_t,
        closed_b,
        null[g.start()],
    )
}

/// Drops non-generating and unreachable nonterminals and renumbers the rest
/// in their original order.
fn trim(
    alphabet: Alphabet,
    names: Vec<String>,
    start: usize,
    terminal: BTreeSet<(usize, u8)>,
    binary: BTreeSet<(usize, usize, usize)>,
    empty: bool,
) -> CnfGrammar {
    let n = names.len();
    let mut generating = vec![false; n];
    for &(x, _) in &terminal {
        generating[x] = true;
    }
    loop {
        let mut changed = false;
        for &(x, y, z) in &binary {
            if !generating[x] && generating[y] && generating[z] {
                generating[x] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let binary: Vec<_> = binary
        .into_iter()
        .filter(|&(x, y, z)| generating[x] && generating[y] && generating[z])
        .collect();
    let mut reachable = vec![false; n];
    reachable[start] = true;
    let mut stack = vec![start];
    while let Some(x) = stack.pop() {
        for &(_, y, z) in binary.iter().filter(|r| r.0 == x) {
            for c in [y, z] {
                if !reachable[c] {
                    reachable[c] = true;
                    stack.push(c);
                }
            }
        }
    }
    let keep: Vec<usize> = (0..n)
        .filter(|&x| x == start || (reachable[x] && generating[x]))
        .collect();
    let mut renumber = vec![usize::MAX; n];
    for (i, &x) in keep.iter().enumerate() {
        renumber[x] = i;
    }
    CnfGrammar {
        alphabet,
        names: keep.iter().map(|&x| names[x].clone()).collect(),
        start: renumber[start],
        terminal: terminal
            .into_iter()
            .filter(|&(x, _)| renumber[x] != usize::MAX)
            .map(|(x, a)| (renumber[x], a))
            .collect(),
        binary: binary
            .into_iter()
            .filter(|&(x, _, _)| renumber[x] != usize::MAX)
            .map(|(x, y, z)| (renumber[x], renumber[y], renumber[z]))
            .collect(),
        empty,
    }
}
