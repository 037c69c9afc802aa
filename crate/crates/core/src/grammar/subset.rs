use crate::automata::{
    determinize, min_ll_at_least, pump_decompose, pumping_constant, AutomataError, BoolOp, Dfa,
    Nfa, Word,
};
use crate::constructions::{subset_bettor, Side};
use crate::engine::Setup;

use super::{
    cyk_member, finite_language, intersect_regular, is_finite_cfl, pump_cfl, quotient, to_cnf, Cfg,
    CnfGrammar, GrammarError,
};

/// Powers of `v` tried when looking for a pumpable member of `N ⊆ v*`.
const MAX_POWER: usize = 256;

/// An infinite regular subset of the domain lying entirely inside or
/// entirely outside a context-free language.
#[derive(Clone, Debug)]
pub struct RegularSubset {
    pub dfa: Dfa,
    pub side: Side,
    pub x: Word,
    pub u: Word,
    pub v: Word,
    pub w: Word,
    /// The finite `L ∩ uv*w` removed on the outside branch.
    pub excluded: Vec<Word>,
    /// `(m, k)` with `r = u · v^{m + kn} · w` on the inside branch.
    pub progression: Option<(usize, usize)>,
}

impl RegularSubset {
    /// The `n`-th word `u v^{m+kn} w` of an inside progression.
    pub fn progression_word(&self, n: usize) -> Option<Word> {
        let (m, k) = self.progression?;
        Some(self.u.concat(&self.v.pow(m + k * n)).concat(&self.w))
    }
}

fn literal(d: &Dfa, w: &Word) -> Nfa {
    Nfa::literal(d.alphabet().clone(), w)
}

/// `prefix · period* · suffix` as a DFA.
fn progression(
    domain: &Dfa,
    prefix: &Word,
    period: &Word,
    suffix: &Word,
) -> Result<Dfa, AutomataError> {
    let nfa = literal(domain, prefix)
        .concat(&literal(domain, period).star())?
        .concat(&literal(domain, suffix))?;
    Ok(determinize(&nfa))
}

/// Finds an infinite regular `r ⊆ D` with `r ⊆ L` or `r ∩ L = ∅`.
///
/// `x` is the ll-least domain word of length at least the pumping constant
/// and `x = uvw` its pumping split. If `M = L ∩ uv*w` is finite the result is
/// `uv*w ∖ M` on the outside. Otherwise `N = {y : uyw ∈ M} ⊆ v*`; the
/// ll-least member of `N` with a pumpable parse gives `|bd| = k|v|`, and the
/// result is `u · v^{m+kn} · w` on the inside.
pub fn infinite_regular_subset(
    g: &CnfGrammar,
    domain: &Dfa,
) -> Result<RegularSubset, GrammarError> {
    let p = pumping_constant(domain);
    let x = match min_ll_at_least(domain, p.max(1)) {
        Ok(x) => x,
        Err(AutomataError::EmptyLanguage | AutomataError::NoSuccessor) => {
            return Err(GrammarError::FiniteDomain)
        }
        Err(e) => return Err(e.into()),
    };
    let (u, v, w) = pump_decompose(domain, &x)?;
    let uvw = progression(domain, &u, &v, &w)?;
    let m = intersect_regular(g, &uvw)?;
    if let Some(members) = finite_language(&m) {
        let excluded: Vec<Word> = members.into_iter().collect();
        let finite = Dfa::finite(domain.alphabet().clone(), &excluded)?;
        let dfa = uvw.combine(&finite, BoolOp::Minus)?;
        return Ok(RegularSubset {
            dfa,
            side: Side::Outside,
            x,
            u,
            v,
            w,
            excluded,
            progression: None,
        });
    }
    let n = quotient(&m, &u, &w);
    debug_assert!(!is_finite_cfl(&n));
    for j in 0..=MAX_POWER {
        let y = v.pow(j);
        if !cyk_member(&n, &y) {
            continue;
        }
        let pump = match pump_cfl(&n, &y) {
            Ok(p) => p,
            Err(GrammarError::TooShort { .. } | GrammarError::PumpCheck(_)) => continue,
            Err(e) => return Err(e),
        };
        let bd = pump.b.len() + pump.d.len();
        if bd % v.len() != 0 {
            return Err(GrammarError::Indivisible { bd, v: v.len() });
        }
        let k = bd / v.len();
        let start = j - k;
        let dfa = progression(domain, &u.concat(&v.pow(start)), &v.pow(k), &w)?;
        return Ok(RegularSubset {
            dfa,
            side: Side::Inside,
            x,
            u,
            v,
            w,
            excluded: Vec::new(),
            progression: Some((start, k)),
        });
    }
    Err(GrammarError::NoPump {
        searched: MAX_POWER + 1,
    })
}

/// The subset bettor on the extracted regular set: it wins 3/2 on every
/// member of `r`, so it succeeds on `L` under every text listing `r`.
pub fn cfl_nonrandom_pipeline(
    g: &Cfg,
    domain: &Dfa,
) -> Result<(Setup, RegularSubset), GrammarError> {
    let cnf = to_cnf(g);
    let subset = infinite_regular_subset(&cnf, domain)?;
    Ok((subset_bettor(&subset.dfa, subset.side), subset))
}
