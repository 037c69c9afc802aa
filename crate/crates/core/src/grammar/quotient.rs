use crate::automata::{AutomataError, Dfa, Word};

use super::{to_cnf, Cfg, CnfGrammar, GSymbol, GrammarError, Production};

#[derive(Clone, Copy)]
enum End {
    Left,
    Right,
}

/// `a⁻¹L` or `La⁻¹`: every nonterminal `X` gets a dotted copy `Ẋ` deriving
/// the words of `X` with `a` removed at the chosen end.
fn single(g: &CnfGrammar, a: u8, end: End) -> CnfGrammar {
    let n = g.nonterminal_count();
    let mut names = g.names().to_vec();
    names.extend(g.names().iter().map(|x| format!("{}.", x)));
    let dot = |x: usize| n + x;
    let mut productions = g.to_cfg().productions().to_vec();
    productions.retain(|p| !p.rhs.is_empty());
    for &(x, b) in g.terminal_rules() {
        if a == b {
            productions.push(Production {
                lhs: dot(x),
                rhs: vec![],
            });
        }
    }
    for &(x, y, z) in g.binary_rules() {
        let rhs = match end {
            End::Left => vec![GSymbol::N(dot(y)), GSymbol::N(z)],
            End::Right => vec![GSymbol::N(y), GSymbol::N(dot(z))],
        };
        productions.push(Production { lhs: dot(x), rhs });
    }
    let cfg = Cfg::new(g.alphabet().clone(), names, dot(g.start()), productions)
        .expect("dotted grammar is well formed");
    to_cnf(&cfg)
}

/// `{w : uw ∈ L}`, one letter at a time.
pub fn left_quotient(g: &CnfGrammar, u: &Word) -> CnfGrammar {
    u.letters()
        .iter()
        .fold(g.clone(), |h, &a| single(&h, a, End::Left))
}

/// `{w : wv ∈ L}`, one letter at a time from the end of `v`.
pub fn right_quotient(g: &CnfGrammar, v: &Word) -> CnfGrammar {
    v.letters()
        .iter()
        .rev()
        .fold(g.clone(), |h, &a| single(&h, a, End::Right))
}

/// `L' = {w : uwv ∈ L}`.
pub fn quotient(g: &CnfGrammar, u: &Word, v: &Word) -> CnfGrammar {
    right_quotient(&left_quotient(g, u), v)
}

/// `L ∩ R` by the product grammar on triples `(p, X, q)`, where `(p, X, q)`
/// derives the words of `X` leading the automaton from `p` to `q`.
pub fn intersect_regular(g: &CnfGrammar, r: &Dfa) -> Result<CnfGrammar, GrammarError> {
    if r.arity() != 1 {
        return Err(AutomataError::ArityMismatch {
            expected: 1,
            found: r.arity(),
        }
        .into());
    }
    if r.alphabet().track(0) != g.alphabet().track(0) {
        return Err(AutomataError::AlphabetMismatch.into());
    }
    let v = g.nonterminal_count();
    let q = r.state_count();
    let id = |p: usize, x: usize, s: usize| (p * v + x) * q + s;
    let mut names = Vec::with_capacity(q * q * v + 1);
    for p in 0..q {
        for x in 0..v {
            for s in 0..q {
                names.push(format!("[{},{},{}]", p, g.names()[x], s));
            }
        }
    }
    names.push("S'".into());
    let start = names.len() - 1;
    let mut productions = Vec::new();
    for &(x, a) in g.terminal_rules() {
        for p in 0..q {
            productions.push(Production {
                lhs: id(p, x, r.next(p, a as usize)),
                rhs: vec![GSymbol::T(a)],
            });
        }
    }
    for &(x, y, z) in g.binary_rules() {
        for p in 0..q {
            for m in 0..q {
                for s in 0..q {
                    productions.push(Production {
                        lhs: id(p, x, s),
                        rhs: vec![GSymbol::N(id(p, y, m)), GSymbol::N(id(m, z, s))],
                    });
                }
            }
        }
    }
    for f in r.accepting_states() {
        productions.push(Production {
            lhs: start,
            rhs: vec![GSymbol::N(id(r.start(), g.start(), f))],
        });
    }
    if g.accepts_empty() && r.is_accepting(r.start()) {
        productions.push(Production {
            lhs: start,
            rhs: vec![],
        });
    }
    let cfg = Cfg::new(g.alphabet().clone(), names, start, productions)?;
    Ok(to_cnf(&cfg))
}
