//! Pumping decompositions and the bounded / polynomial / exponential growth
//! classification of regular languages.

use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::dfa::Dfa;
use super::order::slice_counts;
use super::word::Word;
use super::AutomataError;

/// How fast `|L ∩ Σⁿ|` grows with `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "class", content = "bound")]
pub enum GrowthClass {
    /// `|L ∩ Σⁿ| ≤ c` for all `n`, with `c` the least such bound.
    BoundedSlices(u64),
    Polynomial,
    Exponential,
}

/// Splits an accepted `x` as `uvw` with `|v| ≥ 1`, where `u` and `uv` end in
/// the same state, so `u vⁿ w y ∈ L ⇔ x y ∈ L` for every `n` and suffix `y`.
///
/// The pumping constant is the number of useful states of `d`.
pub fn pump_decompose(d: &Dfa, x: &Word) -> Result<(Word, Word, Word), AutomataError> {
    if !d.accepts_word(x)? {
        return Err(AutomataError::NotAMember);
    }
    let p = pumping_constant(d);
    if x.len() < p {
        return Err(AutomataError::WordTooShort {
            len: x.len(),
            needed: p,
        });
    }
    let mut first_seen = vec![usize::MAX; d.state_count()];
    let mut q = d.start();
    first_seen[q] = 0;
    for (j, &a) in x.letters().iter().enumerate() {
        q = d.next(q, a as usize);
        let i = first_seen[q];
        if i != usize::MAX {
            return Ok((x.slice(0, i), x.slice(i, j + 1), x.slice(j + 1, x.len())));
        }
        first_seen[q] = j + 1;
    }
    unreachable!("an accepted run of length ≥ useful state count repeats a state")
}

/// Number of useful (reachable and co-reachable) states.
pub fn pumping_constant(d: &Dfa) -> usize {
    d.useful_state_count()
}

struct Components {
    /// Component id per useful state; `usize::MAX` for useless states.
    comp: Vec<usize>,
    size: Vec<usize>,
    edges: Vec<usize>,
}

fn useful_components(d: &Dfa) -> Components {
    let useful = d.useful_states();
    let n = d.state_count();
    let k = d.alphabet().track_size(0);
    let succ = |q: usize| {
        (0..k)
            .map(move |c| d.next(q, c))
            .filter(|&r| useful[r])
            .collect::<Vec<_>>()
    };

    // Iterative Tarjan.
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comp = vec![usize::MAX; n];
    let mut ncomp = 0;
    let mut counter = 0;
    for root in (0..n).filter(|&q| useful[q]) {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, Vec<usize>, usize)> = vec![(root, succ(root), 0)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some((v, children, pos)) = call.last_mut() {
            let v = *v;
            if *pos < children.len() {
                let w = children[*pos];
                *pos += 1;
                if index[w] == usize::MAX {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    let cs = succ(w);
                    call.push((w, cs, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some((parent, _, _)) = call.last() {
                    let p = *parent;
                    low[p] = low[p].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp[w] = ncomp;
                        if w == v {
                            break;
                        }
                    }
                    ncomp += 1;
                }
            }
        }
    }
    let mut size = vec![0; ncomp];
    let mut edges = vec![0; ncomp];
    for q in (0..n).filter(|&q| useful[q]) {
        size[comp[q]] += 1;
        for c in 0..k {
            let r = d.next(q, c);
            if useful[r] && comp[r] == comp[q] {
                edges[comp[q]] += 1;
            }
        }
    }
    Components { comp, size, edges }
}

/// Classifies a one-track language by the cycle structure of its useful part.
///
/// A strongly connected component with more internal edges than states
/// carries two distinct cycles and gives exponential growth. Otherwise each
/// cyclic component is a single simple cycle; if some path crosses two of
/// them the growth is polynomial and unbounded, else slices are bounded.
pub fn growth_class(d: &Dfa) -> Result<GrowthClass, AutomataError> {
    if d.arity() != 1 {
        return Err(AutomataError::ArityMismatch {
            expected: 1,
            found: d.arity(),
        });
    }
    if d.is_empty_language() {
        return Ok(GrowthClass::BoundedSlices(0));
    }
    let comps = useful_components(d);
    let ncomp = comps.size.len();
    if (0..ncomp).any(|c| comps.edges[c] > comps.size[c]) {
        return Ok(GrowthClass::Exponential);
    }
    let cyclic: Vec<bool> = (0..ncomp).map(|c| comps.edges[c] > 0).collect();

    // Longest chain of cyclic components along the component DAG. Tarjan
    // numbers components in reverse topological order, so successors have
    // smaller ids.
    let k = d.alphabet().track_size(0);
    let mut best = vec![0usize; ncomp];
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); ncomp];
    for q in 0..d.state_count() {
        if comps.comp[q] != usize::MAX {
            members[comps.comp[q]].push(q);
        }
    }
    for c in 0..ncomp {
        let mut after = 0;
        for &q in &members[c] {
            for a in 0..k {
                let r = d.next(q, a);
                let rc = comps.comp[r];
                if rc != usize::MAX && rc != c {
                    after = after.max(best[rc]);
                }
            }
        }
        best[c] = after + usize::from(cyclic[c]);
    }
    let chain = best[comps.comp[d.start()]];
    if chain >= 2 {
        return Ok(GrowthClass::Polynomial);
    }
    // Slice counts are periodic past the acyclic prefix, with period the lcm
    // of the cycle lengths.
    let period = (0..ncomp)
        .filter(|&c| cyclic[c])
        .fold(1usize, |acc, c| acc.lcm(&comps.size[c]));
    let horizon = d.state_count() + 2 * period;
    let counts = slice_counts(d, horizon)?;
    let bound = counts
        .iter()
        .map(|c| c.to_u64().expect("bounded slice count fits in u64"))
        .max()
        .unwrap_or(0);
    Ok(GrowthClass::BoundedSlices(bound))
}

/// For an exponential-growth language, an integer `k` with
/// `|L ∩ Σ^{<nk}| ≥ 2ⁿ` for every `n ≥ 1`.
///
/// Picks a useful state `q` with two distinct cycles through it, of lengths
/// `ℓ1` and `ℓ2`. The closed walks `C1^{ℓ2}` and `C2^{ℓ1}` both have length
/// `T = ℓ1ℓ2` and differ in their first letter, so a shortest path to `q`, any
/// sequence of `n` such blocks and a shortest path to acceptance give `2ⁿ`
/// distinct members of length `a + nT + b`; `k = a + b + T + 1` suffices.
pub fn exponential_witness(d: &Dfa) -> Result<Option<usize>, AutomataError> {
    if growth_class(d)? != GrowthClass::Exponential {
        return Ok(None);
    }
    let comps = useful_components(d);
    let k = d.alphabet().track_size(0);
    let n = d.state_count();
    let in_comp =
        |q: usize, r: usize| comps.comp[r] != usize::MAX && comps.comp[r] == comps.comp[q];
    // BFS distance inside q's component.
    let dist_within = |from: usize, to: usize| -> Option<usize> {
        let mut dist = vec![usize::MAX; n];
        dist[from] = 0;
        let mut queue = std::collections::VecDeque::from([from]);
        while let Some(v) = queue.pop_front() {
            if v == to {
                return Some(dist[v]);
            }
            for c in 0..k {
                let r = d.next(v, c);
                if in_comp(v, r) && dist[r] == usize::MAX {
                    dist[r] = dist[v] + 1;
                    queue.push_back(r);
                }
            }
        }
        None
    };
    let mut best: Option<usize> = None;
    for q in 0..n {
        if comps.comp[q] == usize::MAX || comps.edges[comps.comp[q]] <= comps.size[comps.comp[q]] {
            continue;
        }
        let inner: Vec<usize> = (0..k)
            .map(|c| d.next(q, c))
            .filter(|&r| in_comp(q, r))
            .collect();
        if inner.len() < 2 {
            continue;
        }
        let l1 = 1 + dist_within(inner[0], q).expect("same component");
        let l2 = 1 + dist_within(inner[1], q).expect("same component");
        let a = shortest(d, d.start(), |v| v == q);
        let b = shortest(d, q, |v| d.is_accepting(v));
        let k_val = a + b + l1 * l2 + 1;
        best = Some(best.map_or(k_val, |x: usize| x.min(k_val)));
    }
    Ok(best)
}

fn shortest(d: &Dfa, from: usize, goal: impl Fn(usize) -> bool) -> usize {
    let k = d.alphabet().track_size(0);
    let mut dist = vec![usize::MAX; d.state_count()];
    dist[from] = 0;
    let mut queue = std::collections::VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        if goal(v) {
            return dist[v];
        }
        for c in 0..k {
            let r = d.next(v, c);
            if dist[r] == usize::MAX {
                dist[r] = dist[v] + 1;
                queue.push_back(r);
            }
        }
    }
    panic!("goal unreachable from a useful state")
}
