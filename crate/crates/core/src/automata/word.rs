//! Words, track alphabets and the convolution of word tuples.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use super::AutomataError;

/// A letter index on one track, or the padding mark `#`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Letter(u8),
    Pad,
}

impl Symbol {
    pub fn letter(self) -> Option<u8> {
        match self {
            Symbol::Letter(a) => Some(a),
            Symbol::Pad => None,
        }
    }
}

/// A finite word, stored as letter indices into its track alphabet.
///
/// Words are ordered length-lexicographically: shorter words first, ties
/// broken by letter index (so over `{0,1}` the order is `ε, 0, 1, 00, ...`).
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: Vec<u8>) -> Self {
        Word(letters)
    }

    /// Parses a word over `{0,1}`. Panics on any other character; use
    /// [`str::parse`] for a fallible version.
    pub fn bits(s: &str) -> Self {
        s.parse().expect("binary word")
    }

    /// `letter` repeated `n` times.
    pub fn repeat(letter: u8, n: usize) -> Self {
        Word(vec![letter; n])
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<u8> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, letter: u8) {
        self.0.push(letter);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn slice(&self, from: usize, to: usize) -> Word {
        Word(self.0[from..to].to_vec())
    }

    pub fn pow(&self, n: usize) -> Word {
        Word(self.0.repeat(n))
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }

    /// Renders the word with the given letter names.
    pub fn render(&self, letters: &[char]) -> String {
        self.0.iter().map(|&a| letters[a as usize]).collect()
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl FromStr for Word {
    type Err = AutomataError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(AutomataError::InvalidLetter(other.to_string())),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &a in &self.0 {
            match a {
                0..=9 => write!(f, "{}", a)?,
                _ => write!(f, "<{}>", a)?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            write!(f, "ε")
        } else {
            write!(f, "\"{}\"", self)
        }
    }
}

/// The letters available on each track of a (convolved) alphabet.
///
/// Track `i` has `letters[i].len()` letters plus the padding mark. Columns are
/// numbered in mixed radix, track 0 least significant, with the pad taking the
/// highest digit on each track; the all-pad column is the last column index and
/// is never a legal input.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    tracks: Vec<Vec<char>>,
}

impl Alphabet {
    pub fn binary() -> Self {
        Alphabet::binary_tracks(1)
    }

    pub fn binary_tracks(k: usize) -> Self {
        Alphabet {
            tracks: vec![vec!['0', '1']; k],
        }
    }

    pub fn new(tracks: Vec<Vec<char>>) -> Result<Self, AutomataError> {
        if tracks.is_empty() {
            return Err(AutomataError::NoTracks);
        }
        for t in &tracks {
            if t.is_empty() || t.len() > 255 {
                return Err(AutomataError::Format(format!(
                    "track alphabet must have 1..=255 letters, got {}",
                    t.len()
                )));
            }
            if t.contains(&'#') {
                return Err(AutomataError::Format(
                    "'#' is reserved for padding".to_string(),
                ));
            }
            let mut sorted = t.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != t.len() {
                return Err(AutomataError::Format(
                    "duplicate letter in track alphabet".to_string(),
                ));
            }
        }
        Ok(Alphabet { tracks })
    }

    /// One track with `n` letters named `0-9a-z...`.
    pub fn sized(n: usize) -> Self {
        Alphabet {
            tracks: vec![default_letter_names(n)],
        }
    }

    pub fn arity(&self) -> usize {
        self.tracks.len()
    }

    pub fn track(&self, i: usize) -> &[char] {
        &self.tracks[i]
    }

    pub fn tracks(&self) -> &[Vec<char>] {
        &self.tracks
    }

    pub fn track_size(&self, i: usize) -> usize {
        self.tracks[i].len()
    }

    /// Number of column indices, including the illegal all-pad column.
    pub fn column_count(&self) -> usize {
        self.tracks.iter().map(|t| t.len() + 1).product()
    }

    pub fn all_pad_column(&self) -> usize {
        self.column_count() - 1
    }

    /// Column indices that may appear in a convolved word.
    pub fn legal_columns(&self) -> std::ops::Range<usize> {
        0..self.all_pad_column()
    }

    pub fn encode_column(&self, col: &[Symbol]) -> usize {
        debug_assert_eq!(col.len(), self.arity());
        let mut idx = 0;
        let mut radix = 1;
        for (t, sym) in self.tracks.iter().zip(col) {
            let digit = match sym {
                Symbol::Letter(a) => *a as usize,
                Symbol::Pad => t.len(),
            };
            idx += digit * radix;
            radix *= t.len() + 1;
        }
        idx
    }

    pub fn decode_column(&self, mut idx: usize) -> Vec<Symbol> {
        self.tracks
            .iter()
            .map(|t| {
                let r = t.len() + 1;
                let digit = idx % r;
                idx /= r;
                if digit == t.len() {
                    Symbol::Pad
                } else {
                    Symbol::Letter(digit as u8)
                }
            })
            .collect()
    }

    pub fn render_column(&self, idx: usize) -> String {
        self.decode_column(idx)
            .iter()
            .zip(&self.tracks)
            .map(|(s, t)| match s {
                Symbol::Letter(a) => t[*a as usize],
                Symbol::Pad => '#',
            })
            .collect()
    }

    pub fn parse_column(&self, s: &str) -> Result<usize, AutomataError> {
        let chars: Vec<char> = s.chars().collect();
        if chars.len() != self.arity() {
            return Err(AutomataError::ArityMismatch {
                expected: self.arity(),
                found: chars.len(),
            });
        }
        let col = chars
            .iter()
            .zip(&self.tracks)
            .map(|(c, t)| {
                if *c == '#' {
                    Ok(Symbol::Pad)
                } else {
                    t.iter()
                        .position(|l| l == c)
                        .map(|p| Symbol::Letter(p as u8))
                        .ok_or_else(|| AutomataError::InvalidLetter(c.to_string()))
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.encode_column(&col))
    }

    /// Parses a word over track `i`'s letter names.
    pub fn parse_word(&self, track: usize, s: &str) -> Result<Word, AutomataError> {
        let t = &self.tracks[track];
        s.chars()
            .map(|c| {
                t.iter()
                    .position(|&l| l == c)
                    .map(|p| p as u8)
                    .ok_or_else(|| AutomataError::InvalidLetter(c.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }

    pub fn render_word(&self, track: usize, w: &Word) -> String {
        w.render(&self.tracks[track])
    }

    /// The alphabet with the listed tracks removed.
    pub fn without(&self, coords: &[usize]) -> Result<Alphabet, AutomataError> {
        let tracks: Vec<_> = self
            .tracks
            .iter()
            .enumerate()
            .filter(|(i, _)| !coords.contains(i))
            .map(|(_, t)| t.clone())
            .collect();
        Alphabet::new(tracks)
    }

    /// Concatenation of the tracks of `self` and `other`.
    pub fn join(&self, other: &Alphabet) -> Alphabet {
        let mut tracks = self.tracks.clone();
        tracks.extend(other.tracks.iter().cloned());
        Alphabet { tracks }
    }

    pub(crate) fn check_word(&self, track: usize, w: &Word) -> Result<(), AutomataError> {
        let n = self.tracks[track].len();
        match w.letters().iter().find(|&&a| a as usize >= n) {
            Some(a) => Err(AutomataError::InvalidLetter(format!("index {}", a))),
            None => Ok(()),
        }
    }
}

pub(crate) fn default_letter_names(n: usize) -> Vec<char> {
    const NAMES: &str = "0123456789abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";
    let mut out: Vec<char> = NAMES.chars().take(n).collect();
    // Beyond the printable table fall back to the Latin-1 supplement.
    let mut code = 0xC0u32;
    while out.len() < n {
        out.push(char::from_u32(code).unwrap());
        code += 1;
    }
    out
}

/// A tuple of words written as columns, shorter rows padded with `#`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConvolvedWord {
    arity: usize,
    columns: Vec<Vec<Symbol>>,
}

impl ConvolvedWord {
    /// Builds a convolved word from explicit columns, checking that padding
    /// is a suffix of each row and that no column is entirely padding.
    pub fn from_columns(arity: usize, columns: Vec<Vec<Symbol>>) -> Result<Self, AutomataError> {
        if arity == 0 {
            return Err(AutomataError::NoTracks);
        }
        let mut ended = vec![false; arity];
        for col in &columns {
            if col.len() != arity {
                return Err(AutomataError::ArityMismatch {
                    expected: arity,
                    found: col.len(),
                });
            }
            if col.iter().all(|s| *s == Symbol::Pad) {
                return Err(AutomataError::Format("all-# column".to_string()));
            }
            for (r, s) in col.iter().enumerate() {
                match s {
                    Symbol::Pad => ended[r] = true,
                    Symbol::Letter(_) if ended[r] => {
                        return Err(AutomataError::Format(format!(
                            "row {} has a letter after padding",
                            r
                        )))
                    }
                    Symbol::Letter(_) => {}
                }
            }
        }
        Ok(ConvolvedWord { arity, columns })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn columns(&self) -> &[Vec<Symbol>] {
        &self.columns
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    /// Recovers the row words.
    pub fn rows(&self) -> Vec<Word> {
        (0..self.arity)
            .map(|r| Word(self.columns.iter().filter_map(|c| c[r].letter()).collect()))
            .collect()
    }
}

/// Writes a tuple of words in block form: column `j` holds the `j`-th letter
/// of every word, `#` where a word has already ended.
pub fn convolve(words: &[&Word]) -> ConvolvedWord {
    assert!(!words.is_empty(), "convolution needs at least one row");
    let len = words.iter().map(|w| w.len()).max().unwrap_or(0);
    let columns = (0..len)
        .map(|j| {
            words
                .iter()
                .map(|w| match w.letters().get(j) {
                    Some(&a) => Symbol::Letter(a),
                    None => Symbol::Pad,
                })
                .collect()
        })
        .collect();
    ConvolvedWord {
        arity: words.len(),
        columns,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(a: u8) -> Symbol {
        Symbol::Letter(a)
    }

    #[test]
    fn convolve_pads_shorter_rows() {
        let c = convolve(&[&Word::bits("01"), &Word::bits("1")]);
        assert_eq!(c.columns(), &[vec![l(0), l(1)], vec![l(1), Symbol::Pad]]);

        let c = convolve(&[&Word::bits("0"), &Word::bits("011")]);
        assert_eq!(
            c.columns(),
            &[
                vec![l(0), l(0)],
                vec![Symbol::Pad, l(1)],
                vec![Symbol::Pad, l(1)]
            ]
        );
        assert_eq!(c.rows(), vec![Word::bits("0"), Word::bits("011")]);
    }

    #[test]
    fn convolve_empty_rows() {
        let e = Word::empty();
        assert!(convolve(&[&e, &e]).is_empty());
    }

    #[test]
    fn from_columns_rejects_bad_padding() {
        let bad = vec![vec![Symbol::Pad, l(0)], vec![l(1), l(1)]];
        assert!(ConvolvedWord::from_columns(2, bad).is_err());
        let trailing = vec![vec![l(0), l(0)], vec![Symbol::Pad, Symbol::Pad]];
        assert!(ConvolvedWord::from_columns(2, trailing).is_err());
    }

    #[test]
    fn ll_order() {
        let mut ws: Vec<Word> = ["11", "", "0", "10", "1", "00"]
            .iter()
            .map(|s| Word::bits(s))
            .collect();
        ws.sort();
        let rendered: Vec<String> = ws.iter().map(|w| w.to_string()).collect();
        assert_eq!(rendered, ["", "0", "1", "00", "10", "11"]);
    }

    #[test]
    fn column_codec() {
        let a = Alphabet::new(vec![vec!['0', '1'], vec!['a', 'b', 'c']]).unwrap();
        assert_eq!(a.column_count(), 12);
        for idx in 0..a.column_count() {
            assert_eq!(a.encode_column(&a.decode_column(idx)), idx);
        }
        assert_eq!(a.parse_column("#c").unwrap(), 2 + 3 * 2);
        assert_eq!(a.render_column(a.all_pad_column()), "##");
    }
}
