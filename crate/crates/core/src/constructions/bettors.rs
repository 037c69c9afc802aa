use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::automata::{Dfa, Word};
use crate::dyadic::Dyadic;
use crate::engine::{DataPoint, EngineError, MState, Setup};

pub(crate) fn three_halves() -> Dyadic {
    Dyadic::new(3, 1)
}

pub(crate) fn one_half() -> Dyadic {
    Dyadic::pow2(-1)
}

/// Factor for a bet of 3/2 on `guess` when the true label is `label`.
pub(crate) fn bet(guess: bool, label: bool) -> Dyadic {
    if guess == label {
        three_halves()
    } else {
        one_half()
    }
}

pub(crate) fn betting_factors() -> Vec<Dyadic> {
    vec![three_halves(), one_half()]
}

/// Bets 3/2 of its capital on the verdict of `l` for every word.
///
/// The single memory word stays empty.
pub fn regular_bettor(l: &Dfa) -> Setup {
    let l = l.clone();
    Setup::primitive(
        "regular",
        MState::new(Dyadic::one(), vec![Word::empty()]),
        betting_factors(),
        move |s, p| match p {
            DataPoint::Pause => Ok(s.clone()),
            DataPoint::Labeled { word, label } => Ok(s.scaled(&bet(l.contains(word), *label))),
        },
    )
}

/// Which side of the target language a regular subset lies on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Inside,
    Outside,
}

impl Side {
    /// The label a member of the subset carries.
    pub fn label(self) -> bool {
        self == Side::Inside
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Inside => "inside",
            Side::Outside => "outside",
        })
    }
}

impl FromStr for Side {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "inside" => Ok(Side::Inside),
            "outside" => Ok(Side::Outside),
            other => Err(format!(
                "unknown side {:?} (expected inside or outside)",
                other
            )),
        }
    }
}

/// Bets 3/2 on `side.label()` for members of `r` and nothing elsewhere.
pub fn subset_bettor(r: &Dfa, side: Side) -> Setup {
    let r = r.clone();
    let mut factors = betting_factors();
    factors.push(Dyadic::one());
    Setup::primitive(
        format!("subset-{}", side),
        MState::new(Dyadic::one(), vec![Word::empty()]),
        factors,
        move |s, p| match p {
            DataPoint::Labeled { word, label } if r.contains(word) => {
                Ok(s.scaled(&bet(side.label(), *label)))
            }
            _ => Ok(s.clone()),
        },
    )
}

pub(crate) fn construction(msg: impl Into<String>) -> EngineError {
    EngineError::Construction(msg.into())
}
