use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::automata::{enumerate_ll, Dfa, Word};
use crate::dyadic::Dyadic;
use crate::engine::{truncated_sum, DataPoint, EngineError, MState, Setup};

use super::bettors::construction;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateEntry {
    pub w: String,
    pub bit: u8,
    pub capital: Dyadic,
}

/// Membership table of the constructed language together with the capital of
/// the truncated sum `d_w` at each word's position.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagonalCertificate {
    pub words: Vec<CertificateEntry>,
    pub enum_hash: String,
}

impl DiagonalCertificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    pub fn max_capital(&self) -> Option<&Dyadic> {
        self.words.iter().map(|e| &e.capital).max()
    }
}

/// Hex SHA-256 of the setup names, one per line.
pub fn enumeration_hash(setups: &[Setup]) -> String {
    let mut h = Sha256::new();
    for d in setups {
        h.update(d.name().as_bytes());
        h.update(b"\n");
    }
    hex::encode(h.finalize())
}

fn weight(i: usize) -> Dyadic {
    Dyadic::pow2(-2 * i as i64)
}

/// Number of components summed at position `l` (1-based).
fn components(l: usize, n: usize) -> usize {
    (l + 1).min(n)
}

/// Fixes the membership of the first `words` domain words so that the
/// truncated sums `d_w = Σ_{i ≤ l(w)} 4^{-i} dᵢ` never climb by more than
/// `2^{-l(w)}`; ties go to label 0.
pub fn diagonalize(
    setups: &[Setup],
    domain: &Dfa,
    words: usize,
) -> Result<DiagonalCertificate, EngineError> {
    if setups.is_empty() {
        return Err(construction("diagonalization needs at least one setup"));
    }
    if let Some(d) = setups.iter().find(|d| !d.is_normed()) {
        return Err(construction(format!("{} is not normed", d.name())));
    }
    let ws = enumerate_ll(domain, words)?;
    if ws.len() < words {
        return Err(construction(format!("domain has only {} words", ws.len())));
    }
    let n = setups.len();
    let mut states: Vec<MState> = setups.iter().map(|d| d.start().clone()).collect();
    let mut entries = Vec::with_capacity(words);
    for (j, w) in ws.iter().enumerate() {
        let l = j + 1;
        let mut next = Vec::with_capacity(n);
        for (i, (d, s)) in setups.iter().zip(&states).enumerate() {
            let zero = d.step(s, &DataPoint::labeled(w.clone(), false))?;
            let one = d.step(s, &DataPoint::labeled(w.clone(), true))?;
            if &zero.capital + &one.capital != s.capital.scale_pow2(1) {
                return Err(EngineError::Fairness {
                    stage: l,
                    detail: format!("component {} ({}) is unfair on {:?}", i, d.name(), w),
                });
            }
            next.push((zero, one));
        }
        let sum = |pick: &dyn Fn(&(MState, MState)) -> Dyadic, k: usize| -> Dyadic {
            next.iter()
                .take(k)
                .enumerate()
                .map(|(i, p)| pick(p).scale_const(&weight(i)))
                .sum()
        };
        let prev = components(l - 1, n);
        let if_zero = sum(&|p| p.0.capital.clone(), prev);
        let if_one = sum(&|p| p.1.capital.clone(), prev);
        let bit = if_one < if_zero;
        states = next
            .into_iter()
            .map(|(z, o)| if bit { o } else { z })
            .collect();
        let capital: Dyadic = states
            .iter()
            .take(components(l, n))
            .enumerate()
            .map(|(i, s)| s.capital.scale_const(&weight(i)))
            .sum();
        entries.push(CertificateEntry {
            w: domain.alphabet().render_word(0, w),
            bit: u8::from(bit),
            capital,
        });
    }
    Ok(DiagonalCertificate {
        words: entries,
        enum_hash: enumeration_hash(setups),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CertificateError {
    #[error("enumeration hash {found} does not match the setups ({expected})")]
    Hash { expected: String, found: String },
    #[error("entry {index}: {detail}")]
    Malformed { index: usize, detail: String },
    #[error("word {word}: capital {capital} exceeds 2")]
    Bound { word: String, capital: Dyadic },
    #[error("word {word}: bit {bit} is not the diagonal choice")]
    Choice { word: String, bit: u8 },
    #[error("word {word}: recorded capital {recorded}, replay gives {replayed}")]
    Mismatch {
        word: String,
        recorded: Dyadic,
        replayed: Dyadic,
    },
    #[error("replay failed: {0}")]
    Replay(String),
}

impl CertificateError {
    /// The word the failure is attached to, if any.
    pub fn word(&self) -> Option<&str> {
        match self {
            CertificateError::Bound { word, .. }
            | CertificateError::Choice { word, .. }
            | CertificateError::Mismatch { word, .. } => Some(word),
            _ => None,
        }
    }
}

struct Replay<'a> {
    words: &'a [Word],
    bits: &'a [bool],
}

impl Replay<'_> {
    /// Runs `sum` over the first `upto` labeled words, handing each stage
    /// `l` (1-based) the state before and after.
    fn walk(
        &self,
        sum: &Setup,
        upto: usize,
        mut visit: impl FnMut(usize, &MState, &MState) -> Result<(), CertificateError>,
    ) -> Result<(), CertificateError> {
        let mut s = sum.start().clone();
        for l in 1..=upto {
            let point = DataPoint::labeled(self.words[l - 1].clone(), self.bits[l - 1]);
            let next = sum
                .step(&s, &point)
                .map_err(|e| CertificateError::Replay(e.to_string()))?;
            visit(l, &s, &next)?;
            s = next;
        }
        Ok(())
    }
}

/// Replays a certificate with the engine's weighted sums: checks the hash,
/// the bound, each label against the diagonal choice and each capital
/// against the replayed truncated sum.
pub fn verify_certificate(
    cert: &DiagonalCertificate,
    setups: &[Setup],
    domain: &Dfa,
) -> Result<(), CertificateError> {
    let expected = enumeration_hash(setups);
    if cert.enum_hash != expected {
        return Err(CertificateError::Hash {
            expected,
            found: cert.enum_hash.clone(),
        });
    }
    let w = cert.words.len();
    let ws = enumerate_ll(domain, w).map_err(|e| CertificateError::Replay(e.to_string()))?;
    let mut bits = Vec::with_capacity(w);
    for (index, (entry, word)) in cert.words.iter().zip(&ws).enumerate() {
        let parsed =
            domain
                .alphabet()
                .parse_word(0, &entry.w)
                .map_err(|e| CertificateError::Malformed {
                    index,
                    detail: e.to_string(),
                })?;
        if &parsed != word {
            return Err(CertificateError::Malformed {
                index,
                detail: format!(
                    "expected word {} in ll-order",
                    domain.alphabet().render_word(0, word)
                ),
            });
        }
        if entry.bit > 1 {
            return Err(CertificateError::Malformed {
                index,
                detail: format!("bit {}", entry.bit),
            });
        }
        if entry.capital > Dyadic::from_int(2) {
            return Err(CertificateError::Bound {
                word: entry.w.clone(),
                capital: entry.capital.clone(),
            });
        }
        bits.push(entry.bit == 1);
    }
    if ws.len() < w {
        return Err(CertificateError::Malformed {
            index: ws.len(),
            detail: "more entries than domain words".into(),
        });
    }
    let replay = Replay {
        words: &ws,
        bits: &bits,
    };
    let n = setups.len();
    let quarter = Dyadic::pow2(-2);
    // Stage l chooses with the sum of size components(l-1) and records the
    // sum of size components(l); sizes below n are needed at one stage each.
    let mut failures: Vec<(usize, CertificateError)> = Vec::new();
    for k in 1..=n {
        let sum = truncated_sum(&setups[..k], &quarter);
        let upto = if k < n { k.min(w) } else { w };
        let outcome = replay.walk(&sum, upto, |l, before, after| {
            let entry = &cert.words[l - 1];
            if components(l - 1, n) == k {
                let word = &ws[l - 1];
                let step = |b| {
                    sum.step(before, &DataPoint::labeled(word.clone(), b))
                        .map_err(|e| CertificateError::Replay(e.to_string()))
                };
                let choice = step(true)?.capital < step(false)?.capital;
                if choice != bits[l - 1] {
                    return Err(CertificateError::Choice {
                        word: entry.w.clone(),
                        bit: entry.bit,
                    });
                }
            }
            if components(l, n) == k && after.capital != entry.capital {
                return Err(CertificateError::Mismatch {
                    word: entry.w.clone(),
                    recorded: entry.capital.clone(),
                    replayed: after.capital.clone(),
                });
            }
            Ok(())
        });
        if let Err(e) = outcome {
            let at = cert
                .words
                .iter()
                .position(|x| Some(x.w.as_str()) == e.word())
                .unwrap_or(usize::MAX);
            failures.push((at, e));
        }
    }
    // Report the earliest divergent word.
    match failures.into_iter().min_by_key(|(at, _)| *at) {
        Some((_, e)) => Err(e),
        None => Ok(()),
    }
}

impl fmt::Display for DiagonalCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.words {
            writeln!(
                f,
                "{:>8} {} {}",
                if e.w.is_empty() { "ε" } else { &e.w },
                e.bit,
                e.capital
            )?;
        }
        Ok(())
    }
}
