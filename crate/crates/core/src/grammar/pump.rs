use std::collections::BTreeSet;

use crate::automata::Word;

use super::{cyk_member, parse, CnfGrammar, GrammarError, ParseTree};

/// `y = abcde` with `|bd| ≥ 1` and `a bⁿ c dⁿ e` generated for every `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pump {
    pub a: Word,
    pub b: Word,
    pub c: Word,
    pub d: Word,
    pub e: Word,
}

impl Pump {
    pub fn pumped(&self, n: usize) -> Word {
        self.a
            .concat(&self.b.pow(n))
            .concat(&self.c)
            .concat(&self.d.pow(n))
            .concat(&self.e)
    }
}

/// Successors of each nonterminal in the rule graph of `g`.
fn successors(g: &CnfGrammar) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]; g.nonterminal_count()];
    for &(x, y, z) in g.binary_rules() {
        out[x].push(y);
        out[x].push(z);
    }
    out
}

/// Topological order (children first), or `None` on a cycle.
fn topological(g: &CnfGrammar) -> Option<Vec<usize>> {
    let succ = successors(g);
    let n = succ.len();
    // 0 = unvisited, 1 = on the stack, 2 = done.
    let mut mark = vec![0u8; n];
    let mut order = Vec::with_capacity(n);
    for root in 0..n {
        if mark[root] != 0 {
            continue;
        }
        let mut stack = vec![(root, 0usize)];
        mark[root] = 1;
        while let Some(top) = stack.last_mut() {
            let (x, i) = *top;
            if i < succ[x].len() {
                top.1 += 1;
                let y = succ[x][i];
                match mark[y] {
                    0 => {
                        mark[y] = 1;
                        stack.push((y, 0));
                    }
                    1 => return None,
                    _ => {}
                }
            } else {
                mark[x] = 2;
                order.push(x);
                stack.pop();
            }
        }
    }
    Some(order)
}

/// A trimmed CNF grammar has no ε- or unit rules, so a cycle among its
/// nonterminals is a derivation `X ⇒⁺ αXβ` with `αβ ≠ ε`.
pub fn is_finite_cfl(g: &CnfGrammar) -> bool {
    topological(g).is_some()
}

/// All members of a finite language, or `None` if it is infinite.
pub fn finite_language(g: &CnfGrammar) -> Option<BTreeSet<Word>> {
    let order = topological(g)?;
    let mut lang: Vec<BTreeSet<Word>> = vec![BTreeSet::new(); g.nonterminal_count()];
    for &(x, a) in g.terminal_rules() {
        lang[x].insert(Word::from_letters(vec![a]));
    }
    for x in order {
        for &(_, y, z) in g.binary_rules().iter().filter(|r| r.0 == x) {
            let mut add = BTreeSet::new();
            for l in &lang[y] {
                for r in &lang[z] {
                    add.insert(l.concat(r));
                }
            }
            lang[x].extend(add);
        }
    }
    let mut out = std::mem::take(&mut lang[g.start()]);
    if g.accepts_empty() {
        out.insert(Word::empty());
    }
    Some(out)
}

/// Pumping split of `y` from the lowest repeated nonterminal on a longest
/// root-to-leaf path of its parse tree, checked for `n ≤ 4`.
pub fn pump_cfl(g: &CnfGrammar, y: &Word) -> Result<Pump, GrammarError> {
    let tree = parse(g, y)?;
    // (nonterminal, span start, span end) along the path.
    let mut path = Vec::new();
    let mut node = &tree;
    let mut from = 0;
    loop {
        let len = node.yield_word().len();
        path.push((node.nonterminal(), from, from + len));
        match node {
            ParseTree::Node { left, right, .. } => {
                if left.height() >= right.height() {
                    node = left;
                } else {
                    from += left.yield_word().len();
                    node = right;
                }
            }
            _ => break,
        }
    }
    let mut seen: Vec<Option<usize>> = vec![None; g.nonterminal_count()];
    let mut split = None;
    for (i, &(nt, _, _)) in path.iter().enumerate().rev() {
        match seen[nt] {
            Some(lower) => {
                split = Some((i, lower));
                break;
            }
            None => seen[nt] = Some(i),
        }
    }
    let (upper, lower) = split.ok_or(GrammarError::TooShort { len: y.len() })?;
    let (_, s1, e1) = path[upper];
    let (_, s2, e2) = path[lower];
    let p = Pump {
        a: y.slice(0, s1),
        b: y.slice(s1, s2),
        c: y.slice(s2, e2),
        d: y.slice(e2, e1),
        e: y.slice(e1, y.len()),
    };
    if p.b.len() + p.d.len() == 0 {
        return Err(GrammarError::PumpCheck("|bd| = 0".into()));
    }
    for n in 0..=4 {
        let w = p.pumped(n);
        if !cyk_member(g, &w) {
            return Err(GrammarError::PumpCheck(format!(
                "a b^{} c d^{} e = {} is not generated",
                n, n, w
            )));
        }
    }
    Ok(p)
}
