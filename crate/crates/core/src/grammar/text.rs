use std::str::FromStr;

use crate::automata::Alphabet;

use super::{Cfg, GSymbol, GrammarError, Production};

impl Cfg {
    /// Reads lines `NT -> rhs | rhs`. Right-hand sides are whitespace
    /// separated tokens: a token naming a left-hand side is a nonterminal,
    /// any other token is a run of terminal letters, and `#eps` is ε. The
    /// first left-hand side is the start symbol. Blank lines and lines
    /// starting with `//` are skipped.
    pub fn parse(alphabet: Alphabet, text: &str) -> Result<Cfg, GrammarError> {
        let mut lines = Vec::new();
        let mut names: Vec<String> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with("//") {
                continue;
            }
            let (lhs, rhs) = line.split_once("->").ok_or_else(|| GrammarError::Parse {
                line: i + 1,
                detail: "expected `->`".into(),
            })?;
            let lhs = lhs.trim();
            if lhs.is_empty() || lhs.contains(char::is_whitespace) {
                return Err(GrammarError::Parse {
                    line: i + 1,
                    detail: format!("bad nonterminal {:?}", lhs),
                });
            }
            if alphabet.arity() == 1 && lhs.chars().all(|c| alphabet.track(0).contains(&c)) {
                return Err(GrammarError::Parse {
                    line: i + 1,
                    detail: format!("nonterminal {:?} is spelled with terminal letters", lhs),
                });
            }
            if !names.iter().any(|n| n == lhs) {
                names.push(lhs.to_string());
            }
            lines.push((i + 1, lhs.to_string(), rhs.to_string()));
        }
        if names.is_empty() {
            return Err(GrammarError::Parse {
                line: 0,
                detail: "no productions".into(),
            });
        }
        if alphabet.arity() != 1 {
            return Err(GrammarError::Invalid(
                "terminals must come from a one-track alphabet".into(),
            ));
        }
        let letters = alphabet.track(0);
        let mut productions = Vec::new();
        for (line, lhs, rhs) in lines {
            let lhs = names.iter().position(|n| *n == lhs).expect("declared");
            for alt in rhs.split('|') {
                let mut out = Vec::new();
                let tokens: Vec<&str> = alt.split_whitespace().collect();
                if tokens.is_empty() {
                    return Err(GrammarError::Parse {
                        line,
                        detail: "empty alternative (write #eps for ε)".into(),
                    });
                }
                if tokens == ["#eps"] {
                    productions.push(Production { lhs, rhs: out });
                    continue;
                }
                for tok in tokens {
                    if let Some(x) = names.iter().position(|n| n == tok) {
                        out.push(GSymbol::N(x));
                        continue;
                    }
                    for c in tok.chars() {
                        let a = letters.iter().position(|&l| l == c).ok_or_else(|| {
                            GrammarError::Parse {
                                line,
                                detail: format!("unknown symbol {:?}", tok),
                            }
                        })?;
                        out.push(GSymbol::T(a as u8));
                    }
                }
                productions.push(Production { lhs, rhs: out });
            }
        }
        Cfg::new(alphabet, names, 0, productions)
    }
}

impl FromStr for Cfg {
    type Err = GrammarError;

    /// Parses over the binary alphabet.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Cfg::parse(Alphabet::binary(), s)
    }
}
