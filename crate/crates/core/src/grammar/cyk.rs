use crate::automata::Word;

use super::{CnfGrammar, GrammarError};

/// A derivation tree of a [`CnfGrammar`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseTree {
    /// `S → ε` at the root.
    Empty {
        nt: usize,
    },
    Leaf {
        nt: usize,
        letter: u8,
    },
    Node {
        nt: usize,
        left: Box<ParseTree>,
        right: Box<ParseTree>,
    },
}

impl ParseTree {
    pub fn nonterminal(&self) -> usize {
        match self {
            ParseTree::Empty { nt } | ParseTree::Leaf { nt, .. } | ParseTree::Node { nt, .. } => {
                *nt
            }
        }
    }

    pub fn yield_word(&self) -> Word {
        let mut out = Vec::new();
        self.collect(&mut out);
        Word::from_letters(out)
    }

    fn collect(&self, out: &mut Vec<u8>) {
        match self {
            ParseTree::Empty { .. } => {}
            ParseTree::Leaf { letter, .. } => out.push(*letter),
            ParseTree::Node { left, right, .. } => {
                left.collect(out);
                right.collect(out);
            }
        }
    }

    /// Number of nonterminal nodes on a longest root-to-leaf path.
    pub fn height(&self) -> usize {
        match self {
            ParseTree::Empty { .. } | ParseTree::Leaf { .. } => 1,
            ParseTree::Node { left, right, .. } => 1 + left.height().max(right.height()),
        }
    }
}

/// `table[len-1][i]` holds, per nonterminal, the first rule and split that
/// derive `w[i..i+len]`.
struct Chart {
    table: Vec<Vec<Vec<Option<Back>>>>,
}

#[derive(Clone, Copy)]
enum Back {
    Letter(u8),
    Split {
        left: usize,
        right: usize,
        at: usize,
    },
}

fn chart(g: &CnfGrammar, w: &[u8]) -> Chart {
    let n = w.len();
    let v = g.nonterminal_count();
    let mut by_left: Vec<Vec<(usize, usize)>> = vec![vec![]; v];
    for &(x, y, z) in g.binary_rules() {
        by_left[y].push((x, z));
    }
    let mut table = vec![vec![vec![None; v]; n]; n];
    let mut members: Vec<Vec<Vec<usize>>> = vec![vec![vec![]; n]; n];
    for (i, &a) in w.iter().enumerate() {
        for &(x, b) in g.terminal_rules() {
            if a == b && table[0][i][x].is_none() {
                table[0][i][x] = Some(Back::Letter(a));
                members[0][i].push(x);
            }
        }
    }
    for len in 2..=n {
        for i in 0..=n - len {
            for at in 1..len {
                if members[len - at - 1][i + at].is_empty() {
                    continue;
                }
                for li in 0..members[at - 1][i].len() {
                    let y = members[at - 1][i][li];
                    for &(x, z) in &by_left[y] {
                        if table[len - 1][i][x].is_none()
                            && table[len - at - 1][i + at][z].is_some()
                        {
                            table[len - 1][i][x] = Some(Back::Split {
                                left: y,
                                right: z,
                                at,
                            });
                            members[len - 1][i].push(x);
                        }
                    }
                }
            }
        }
    }
    Chart { table }
}

/// Exact membership by the Cocke–Younger–Kasami algorithm.
pub fn cyk_member(g: &CnfGrammar, w: &Word) -> bool {
    if w.is_empty() {
        return g.accepts_empty();
    }
    let c = chart(g, w.letters());
    c.table[w.len() - 1][0][g.start()].is_some()
}

/// One derivation of `w`.
pub fn parse(g: &CnfGrammar, w: &Word) -> Result<ParseTree, GrammarError> {
    if w.is_empty() {
        return if g.accepts_empty() {
            Ok(ParseTree::Empty { nt: g.start() })
        } else {
            Err(GrammarError::NotAMember)
        };
    }
    let c = chart(g, w.letters());
    if c.table[w.len() - 1][0][g.start()].is_none() {
        return Err(GrammarError::NotAMember);
    }
    Ok(build(&c, g.start(), 0, w.len()))
}

fn build(c: &Chart, nt: usize, i: usize, len: usize) -> ParseTree {
    match c.table[len - 1][i][nt].expect("derivable span") {
        Back::Letter(letter) => ParseTree::Leaf { nt, letter },
        Back::Split { left, right, at } => ParseTree::Node {
            nt,
            left: Box::new(build(c, left, i, at)),
            right: Box::new(build(c, right, i + at, len - at)),
        },
    }
}
