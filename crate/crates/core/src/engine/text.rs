use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use super::{DataPoint, EngineError, MState};
use crate::automata::{min_ll, Dfa, OwnedLlIter, Word};

/// Default number of consecutive pauses tolerated before a text is invalid.
pub const DEFAULT_BUDGET: usize = 10_000;

/// Membership oracle for the target language.
pub type Oracle = Arc<dyn Fn(&Word) -> bool + Send + Sync>;

/// Next text element as a function of the current martingale state.
pub type Generator = Arc<dyn Fn(&MState) -> TextItem + Send + Sync>;

pub fn oracle_from_dfa(d: &Dfa) -> Oracle {
    let d = d.clone();
    Arc::new(move |w: &Word| d.contains(w))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TextItem {
    Word(Word),
    Pause,
}

impl From<Word> for TextItem {
    fn from(w: Word) -> Self {
        TextItem::Word(w)
    }
}

/// A sequence of domain words and pauses.
///
/// A text may pause for at most `budget` consecutive stages; a longer run of
/// pauses is reported as an error when it happens.
pub struct Text {
    source: Box<dyn Iterator<Item = TextItem> + Send>,
    budget: usize,
    pauses: usize,
    stage: usize,
}

impl fmt::Debug for Text {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Text")
            .field("budget", &self.budget)
            .field("stage", &self.stage)
            .finish()
    }
}

impl Text {
    pub fn from_iter(iter: impl Iterator<Item = TextItem> + Send + 'static) -> Text {
        Text {
            source: Box::new(iter),
            budget: DEFAULT_BUDGET,
            pauses: 0,
            stage: 0,
        }
    }

    /// The domain in increasing length-lexicographic order.
    pub fn ll(domain: &Dfa) -> Result<Text, EngineError> {
        min_ll(domain).map_err(|_| EngineError::EmptyDomain)?;
        Ok(Text::from_iter(
            OwnedLlIter::new(domain.clone()).map(TextItem::Word),
        ))
    }

    /// A finite text; reading past its end is an error.
    pub fn from_sequence(items: Vec<TextItem>) -> Text {
        Text::from_iter(items.into_iter())
    }

    pub fn with_budget(mut self, budget: usize) -> Text {
        self.budget = budget;
        self
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn next_item(&mut self) -> Result<TextItem, EngineError> {
        let item = self
            .source
            .next()
            .ok_or(EngineError::TextExhausted { stage: self.stage })?;
        self.stage += 1;
        match item {
            TextItem::Pause => {
                self.pauses += 1;
                if self.pauses > self.budget {
                    return Err(EngineError::Budget {
                        stage: self.stage - 1,
                        budget: self.budget,
                    });
                }
            }
            TextItem::Word(_) => self.pauses = 0,
        }
        Ok(item)
    }
}

/// A text labeled by the target language.
pub struct Stream {
    text: Text,
    oracle: Oracle,
    domain: Option<Dfa>,
}

impl Stream {
    pub fn new(text: Text, oracle: Oracle) -> Stream {
        Stream {
            text,
            oracle,
            domain: None,
        }
    }

    /// Rejects words outside `domain`.
    pub fn within(mut self, domain: &Dfa) -> Stream {
        self.domain = Some(domain.clone());
        self
    }

    pub fn next_point(&mut self) -> Result<DataPoint, EngineError> {
        match self.text.next_item()? {
            TextItem::Pause => Ok(DataPoint::Pause),
            TextItem::Word(w) => {
                if let Some(d) = &self.domain {
                    if !d.contains(&w) {
                        return Err(EngineError::OutsideDomain(w));
                    }
                }
                let label = (self.oracle)(&w);
                Ok(DataPoint::Labeled { word: w, label })
            }
        }
    }

    pub fn budget(&self) -> usize {
        self.text.budget()
    }
}

/// Properties of a text that a finite prefix can exhibit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TextFlags {
    /// No word occurs twice.
    pub repetition_free: bool,
    /// Every domain word of length at most the bound occurs.
    pub exhaustive: bool,
    pub distinct_words: usize,
    /// The second half of the prefix contains a word not seen in the first
    /// half.
    pub infinite_range_evidence: bool,
}

pub fn classify_text_prefix(prefix: &[TextItem], domain: &Dfa, length_bound: usize) -> TextFlags {
    let words: Vec<&Word> = prefix
        .iter()
        .filter_map(|t| match t {
            TextItem::Word(w) => Some(w),
            TextItem::Pause => None,
        })
        .collect();
    let distinct: HashSet<&Word> = words.iter().copied().collect();
    let half = prefix.len() / 2;
    let early: HashSet<&Word> = prefix[..half]
        .iter()
        .filter_map(|t| match t {
            TextItem::Word(w) => Some(w),
            TextItem::Pause => None,
        })
        .collect();
    let infinite_range_evidence = prefix[half..].iter().any(|t| match t {
        TextItem::Word(w) => !early.contains(w),
        TextItem::Pause => false,
    });
    let exhaustive = OwnedLlIter::new(domain.clone())
        .take_while(|w| w.len() <= length_bound)
        .all(|w| distinct.contains(&w));
    TextFlags {
        repetition_free: distinct.len() == words.len(),
        exhaustive,
        distinct_words: distinct.len(),
        infinite_range_evidence,
    }
}
