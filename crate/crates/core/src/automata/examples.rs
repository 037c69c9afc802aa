//! Small named automata used throughout the docs, tests and CLI.

use super::dfa::Dfa;
use super::word::Alphabet;

fn build(
    alphabet: Alphabet,
    states: usize,
    accepting: &[usize],
    edges: &[(usize, &str, usize)],
) -> Dfa {
    let edges: Vec<_> = edges
        .iter()
        .map(|&(p, col, q)| (p, alphabet.parse_column(col).expect("valid column"), q))
        .collect();
    Dfa::from_edges(alphabet, states, 0, accepting, &edges).expect("valid example automaton")
}

fn binary(states: usize, accepting: &[usize], edges: &[(usize, &str, usize)]) -> Dfa {
    build(Alphabet::binary(), states, accepting, edges)
}

/// `{0,1}*`
pub fn sigma_star() -> Dfa {
    binary(1, &[0], &[(0, "0", 0), (0, "1", 0)])
}

/// `0*`
pub fn zeros() -> Dfa {
    binary(1, &[0], &[(0, "0", 0)])
}

/// `1*`
pub fn ones() -> Dfa {
    binary(1, &[0], &[(0, "1", 0)])
}

/// `0*1*`
pub fn zeros_then_ones() -> Dfa {
    binary(2, &[0, 1], &[(0, "0", 0), (0, "1", 1), (1, "1", 1)])
}

/// `(00)*`
pub fn even_zeros() -> Dfa {
    binary(2, &[0], &[(0, "0", 1), (1, "0", 0)])
}

/// `0* ∪ 1*`
pub fn zeros_or_ones() -> Dfa {
    binary(
        3,
        &[0, 1, 2],
        &[(0, "0", 1), (0, "1", 2), (1, "0", 1), (2, "1", 2)],
    )
}

/// `1{0,1}*`
pub fn one_then_any() -> Dfa {
    binary(2, &[1], &[(0, "1", 1), (1, "0", 1), (1, "1", 1)])
}

/// `10*`
pub fn one_then_zeros() -> Dfa {
    binary(2, &[1], &[(0, "1", 1), (1, "0", 1)])
}

/// `0*1*0*`
pub fn zeros_ones_zeros() -> Dfa {
    binary(
        3,
        &[0, 1, 2],
        &[
            (0, "0", 0),
            (0, "1", 1),
            (1, "1", 1),
            (1, "0", 2),
            (2, "0", 2),
        ],
    )
}

/// `(0 | 11)*`
pub fn zero_or_double_one() -> Dfa {
    binary(2, &[0], &[(0, "0", 0), (0, "1", 1), (1, "1", 0)])
}

/// `(01)*`
pub fn alternating() -> Dfa {
    binary(2, &[0], &[(0, "0", 1), (1, "1", 0)])
}

/// `0*10*`: words with exactly one `1`.
pub fn single_one() -> Dfa {
    binary(2, &[1], &[(0, "0", 0), (0, "1", 1), (1, "0", 1)])
}

/// `{ε, 01, 110}`
pub fn small_finite() -> Dfa {
    binary(
        6,
        &[0, 2, 5],
        &[
            (0, "0", 1),
            (1, "1", 2),
            (0, "1", 3),
            (3, "1", 4),
            (4, "0", 5),
        ],
    )
}

/// Pairs `(x, y)` with `|x| < |y|`.
pub fn shorter() -> Dfa {
    build(
        Alphabet::binary_tracks(2),
        2,
        &[1],
        &[
            (0, "00", 0),
            (0, "01", 0),
            (0, "10", 0),
            (0, "11", 0),
            (0, "#0", 1),
            (0, "#1", 1),
            (1, "#0", 1),
            (1, "#1", 1),
        ],
    )
}

/// Pairs `(x, x)`.
pub fn equality() -> Dfa {
    build(
        Alphabet::binary_tracks(2),
        1,
        &[0],
        &[(0, "00", 0), (0, "11", 0)],
    )
}

/// Pairs `(x, e)` with `e` a prefix of `x`; the membership relation of the
/// prefix family `L_e = e{0,1}*`.
pub fn prefix_relation() -> Dfa {
    build(
        Alphabet::binary_tracks(2),
        2,
        &[0, 1],
        &[
            (0, "00", 0),
            (0, "11", 0),
            (0, "0#", 1),
            (0, "1#", 1),
            (1, "0#", 1),
            (1, "1#", 1),
        ],
    )
}

/// A named one-track domain.
#[derive(Clone, Debug)]
pub struct NamedDfa {
    pub name: &'static str,
    pub dfa: Dfa,
}

/// Looks up a one-track example by its name in [`corpus`].
pub fn by_name(name: &str) -> Option<Dfa> {
    corpus().into_iter().find(|d| d.name == name).map(|d| d.dfa)
}

/// A spread of one-track domains covering all three growth classes.
pub fn corpus() -> Vec<NamedDfa> {
    let named = |name, dfa| NamedDfa { name, dfa };
    vec![
        named("sigma*", sigma_star()),
        named("0*", zeros()),
        named("1*", ones()),
        named("0*1*", zeros_then_ones()),
        named("(00)*", even_zeros()),
        named("0*|1*", zeros_or_ones()),
        named("1(0|1)*", one_then_any()),
        named("10*", one_then_zeros()),
        named("0*1*0*", zeros_ones_zeros()),
        named("(0|11)*", zero_or_double_one()),
        named("(01)*", alternating()),
        named("0*10*", single_one()),
        named("{e,01,110}", small_finite()),
    ]
}
