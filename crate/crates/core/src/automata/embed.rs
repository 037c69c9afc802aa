//! Embedding languages over a larger alphabet into tuples of binary words.

use super::dfa::Dfa;
use super::word::{convolve, Alphabet, ConvolvedWord, Symbol, Word};
use super::AutomataError;

/// Letter-wise binary code `φ: Γ → {0,1}^k` for an alphabet of `m` letters,
/// with `k` the least width such that `m ≤ 2^k` (and at least 1).
///
/// Letter `i` is written as `k` bits, most significant first, forming one
/// column of the `k`-track image; row `r` of `φ(w)` collects bit `r` of every
/// letter of `w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    letters: usize,
    width: usize,
}

impl Embedding {
    pub fn new(letters: usize) -> Result<Self, AutomataError> {
        if letters == 0 {
            return Err(AutomataError::Format("alphabet must be nonempty".into()));
        }
        let mut width = 1;
        while (1usize << width) < letters {
            width += 1;
        }
        Ok(Embedding { letters, width })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn letters(&self) -> usize {
        self.letters
    }

    /// The `k` bits of letter `a`, most significant first.
    pub fn letter_code(&self, a: u8) -> Vec<u8> {
        (0..self.width)
            .map(|r| ((a as usize >> (self.width - 1 - r)) & 1) as u8)
            .collect()
    }

    /// The `k` rows of `φ(w)`.
    pub fn encode(&self, w: &Word) -> Result<Vec<Word>, AutomataError> {
        if let Some(&a) = w.letters().iter().find(|&&a| a as usize >= self.letters) {
            return Err(AutomataError::InvalidLetter(format!("index {}", a)));
        }
        Ok((0..self.width)
            .map(|r| {
                Word::from_letters(
                    w.letters()
                        .iter()
                        .map(|&a| ((a as usize >> (self.width - 1 - r)) & 1) as u8)
                        .collect(),
                )
            })
            .collect())
    }

    pub fn encode_convolved(&self, w: &Word) -> Result<ConvolvedWord, AutomataError> {
        let rows = self.encode(w)?;
        let refs: Vec<&Word> = rows.iter().collect();
        Ok(convolve(&refs))
    }

    /// Inverts [`Embedding::encode`] on its image.
    pub fn decode(&self, rows: &[Word]) -> Result<Word, AutomataError> {
        if rows.len() != self.width {
            return Err(AutomataError::ArityMismatch {
                expected: self.width,
                found: rows.len(),
            });
        }
        let len = rows[0].len();
        if rows.iter().any(|r| r.len() != len) {
            return Err(AutomataError::Format(
                "rows of an encoded word differ in length".into(),
            ));
        }
        let mut out = Word::empty();
        for j in 0..len {
            let mut a = 0usize;
            for row in rows {
                let bit = row.letters()[j];
                if bit > 1 {
                    return Err(AutomataError::InvalidLetter(format!("index {}", bit)));
                }
                a = (a << 1) | bit as usize;
            }
            if a >= self.letters {
                return Err(AutomataError::Format(format!("code {} is not a letter", a)));
            }
            out.push(a as u8);
        }
        Ok(out)
    }
}

/// Re-expresses a one-track language over `m` letters as a `k`-track relation
/// over `{0,1}`, accepting exactly the images `φ(w)` of its members.
pub fn embed_alphabet(d: &Dfa) -> Result<(Dfa, Embedding), AutomataError> {
    if d.arity() != 1 {
        return Err(AutomataError::ArityMismatch {
            expected: 1,
            found: d.arity(),
        });
    }
    let emb = Embedding::new(d.alphabet().track_size(0))?;
    let target = Alphabet::binary_tracks(emb.width);
    let mut edges = Vec::new();
    for q in 0..d.state_count() {
        for a in 0..emb.letters {
            let col: Vec<Symbol> = emb
                .letter_code(a as u8)
                .into_iter()
                .map(Symbol::Letter)
                .collect();
            edges.push((q, target.encode_column(&col), d.next(q, a)));
        }
    }
    let accepting: Vec<usize> = d.accepting_states().collect();
    let out = Dfa::from_edges(target, d.state_count(), d.start(), &accepting, &edges)?;
    Ok((out, emb))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_words(letters: u8, max_len: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        let mut frontier = vec![Word::empty()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &frontier {
                for a in 0..letters {
                    let mut v = w.clone();
                    v.push(a);
                    next.push(v);
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }

    #[test]
    fn three_letters_use_two_rows() {
        let e = Embedding::new(3).unwrap();
        assert_eq!(e.width(), 2);
        assert_eq!(e.letter_code(0), vec![0, 0]);
        assert_eq!(e.letter_code(1), vec![0, 1]);
        assert_eq!(e.letter_code(2), vec![1, 0]);
        let rows = e.encode(&Word::from_letters(vec![0, 1])).unwrap();
        assert_eq!(rows, vec![Word::bits("00"), Word::bits("01")]);
    }

    #[test]
    fn binary_alphabet_is_identity() {
        let e = Embedding::new(2).unwrap();
        assert_eq!(e.width(), 1);
        let w = Word::bits("0110");
        assert_eq!(e.encode(&w).unwrap(), vec![w]);
        assert_eq!(Embedding::new(1).unwrap().width(), 1);
    }

    #[test]
    fn roundtrip_up_to_length_six() {
        for m in [1u8, 2, 3, 5] {
            let e = Embedding::new(m as usize).unwrap();
            for w in all_words(m, 6) {
                assert_eq!(e.decode(&e.encode(&w).unwrap()).unwrap(), w);
            }
        }
    }

    #[test]
    fn embedded_language_matches_source() {
        // Words over {a,b,c} with no two consecutive c's.
        let gamma = Alphabet::new(vec![vec!['a', 'b', 'c']]).unwrap();
        let d = Dfa::from_fn(gamma, 2, 0, &[0, 1], |q, c| match (q, c) {
            (_, 0) | (_, 1) => Some(0),
            (0, 2) => Some(1),
            _ => None,
        });
        let (img, e) = embed_alphabet(&d).unwrap();
        assert_eq!(img.arity(), 2);
        for w in all_words(3, 6) {
            let c = e.encode_convolved(&w).unwrap();
            assert_eq!(img.accepts(&c).unwrap(), d.contains(&w), "{:?}", w);
        }
        // Code 11 is not a letter, so nothing using it is accepted.
        let bad = convolve(&[&Word::bits("1"), &Word::bits("1")]);
        assert!(!img.accepts(&bad).unwrap());
    }
}
