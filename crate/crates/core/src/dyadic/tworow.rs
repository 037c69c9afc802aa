//! The two-row presentation of dyadic rationals and the automatic operations
//! on it.
//!
//! `x = (-1)^s · Σ aᵢ 2ⁱ` is written as two rows
//!
//! ```text
//! a₀  a₁  a₂ … aₙ
//! s   a₋₁ a₋₂ … a₋ₘ
//! ```
//!
//! The top row holds the integer part least significant bit first, the bottom
//! row the sign followed by the fractional bits, most significant first.
//! Column `j` of the block therefore holds the bits of weight `2^j` and
//! `2^-j`. Neither row carries trailing zeros, the top row is at least `0`,
//! and zero has sign `0`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{Dyadic, DyadicError};
use crate::automata::{convolve, Symbol, Word};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TwoRowCode {
    top: Vec<u8>,
    bottom: Vec<u8>,
}

impl TwoRowCode {
    /// Builds a code from its rows, checking the normal form.
    pub fn new(top: Vec<u8>, bottom: Vec<u8>) -> Result<Self, DyadicError> {
        let bad = |m: &str| Err(DyadicError::MalformedCode(m.to_string()));
        if top.is_empty() || bottom.is_empty() {
            return bad("rows must be nonempty");
        }
        if top.iter().chain(&bottom).any(|&b| b > 1) {
            return bad("rows must be bit strings");
        }
        if top.len() > 1 && *top.last().unwrap() == 0 {
            return bad("trailing zero in the integer row");
        }
        if bottom.len() > 1 && *bottom.last().unwrap() == 0 {
            return bad("trailing zero in the fraction row");
        }
        let zero = top == [0] && bottom.len() == 1;
        if zero && bottom[0] == 1 {
            return bad("zero must have sign 0");
        }
        Ok(TwoRowCode { top, bottom })
    }

    pub fn top(&self) -> &[u8] {
        &self.top
    }

    pub fn bottom(&self) -> &[u8] {
        &self.bottom
    }

    pub fn sign(&self) -> u8 {
        self.bottom[0]
    }

    /// The rows as binary words, ready for convolution.
    pub fn rows(&self) -> (Word, Word) {
        (
            Word::from_letters(self.top.clone()),
            Word::from_letters(self.bottom.clone()),
        )
    }
}

fn bits_str(bits: &[u8]) -> String {
    bits.iter()
        .map(|b| if *b == 1 { '1' } else { '0' })
        .collect()
}

impl fmt::Display for TwoRowCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", bits_str(&self.top), bits_str(&self.bottom))
    }
}

impl fmt::Debug for TwoRowCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for TwoRowCode {
    type Err = DyadicError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (t, b) = s
            .split_once('|')
            .ok_or_else(|| DyadicError::MalformedCode(format!("missing '|' in {:?}", s)))?;
        let parse = |r: &str| {
            r.chars()
                .map(|c| match c {
                    '0' => Ok(0),
                    '1' => Ok(1),
                    _ => Err(DyadicError::MalformedCode(format!("bad bit {:?}", c))),
                })
                .collect::<Result<Vec<u8>, _>>()
        };
        TwoRowCode::new(parse(t)?, parse(b)?)
    }
}

pub fn encode_tworow(x: &Dyadic) -> TwoRowCode {
    let sign = u8::from(x.is_negative());
    let mag = x.numerator().magnitude().clone();
    let exp = x.exponent();
    let int = &mag >> exp;
    let mut top: Vec<u8> = (0..int.bits()).map(|i| u8::from(int.bit(i))).collect();
    if top.is_empty() {
        top.push(0);
    }
    let mut bottom = vec![sign];
    // Fraction bits a₋₁ … a₋ₑ are bits e-1 … 0 of the magnitude.
    for i in (0..exp).rev() {
        bottom.push(u8::from(mag.bit(i)));
    }
    while bottom.len() > 1 && *bottom.last().unwrap() == 0 {
        bottom.pop();
    }
    TwoRowCode { top, bottom }
}

pub fn decode_tworow(c: &TwoRowCode) -> Dyadic {
    let m = (c.bottom.len() - 1) as u64;
    let mut num = BigInt::zero();
    for (i, &b) in c.top.iter().enumerate() {
        if b == 1 {
            num += BigInt::one() << (i as u64 + m);
        }
    }
    for (j, &b) in c.bottom.iter().enumerate().skip(1) {
        if b == 1 {
            num += BigInt::one() << (m - j as u64);
        }
    }
    if c.sign() == 1 {
        num = -num;
    }
    Dyadic::new(num, m)
}

/// Bits of one column of the convolution `(a.top, a.bottom, b.top, b.bottom)`,
/// with padding read as `0`.
struct Column {
    a_int: u8,
    a_low: u8,
    b_int: u8,
    b_low: u8,
}

fn columns(a: &TwoRowCode, b: &TwoRowCode) -> Vec<Column> {
    let (at, ab) = a.rows();
    let (bt, bb) = b.rows();
    let conv = convolve(&[&at, &ab, &bt, &bb]);
    let bit = |s: &Symbol| s.letter().unwrap_or(0);
    conv.columns()
        .iter()
        .map(|c| Column {
            a_int: bit(&c[0]),
            a_low: bit(&c[1]),
            b_int: bit(&c[2]),
            b_low: bit(&c[3]),
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Mode {
    /// Equal signs: magnitudes add.
    Sum,
    /// Different signs, guessing that `a` (or `b`) has the larger magnitude
    /// (for `b`, strictly larger).
    Diff { a_larger: bool },
}

/// One nondeterministic run of the addition automaton.
#[derive(Clone, Debug)]
struct Run {
    mode: Mode,
    sign: u8,
    /// Carry (or borrow) into the next integer bit.
    int_carry: u8,
    /// Carry promised into the fractional position read last, still to be
    /// produced by the position below it.
    promised: u8,
    top: Vec<u8>,
    bottom: Vec<u8>,
}

/// Resource use of one streaming addition.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct AddTrace {
    /// Largest carry or borrow value held by any run (a one-bit register
    /// never exceeds 1).
    pub max_carry: u8,
    /// Largest number of simultaneously live runs.
    pub max_runs: usize,
    /// Number of columns read, including the final flush.
    pub columns: usize,
}

/// One digit of `x + y + c` or `x - y - c`: (output bit, carry out).
fn digit(mode: &Mode, x: u8, y: u8, c: u8) -> (u8, u8) {
    match mode {
        Mode::Sum => {
            let s = x + y + c;
            (s & 1, s >> 1)
        }
        Mode::Diff { .. } => {
            let s = x as i8 - y as i8 - c as i8;
            if s < 0 {
                ((s + 2) as u8, 1)
            } else {
                (s as u8, 0)
            }
        }
    }
}

/// Adds two codes in a single left-to-right pass over their convolution.
///
/// The integer row is read least significant bit first, so its carry flows
/// with the reading direction. The fractional row is read most significant
/// bit first, so each run guesses the carry arriving from the next lower
/// position and checks the guess one column later. The sign case is guessed
/// in the first column. Every run keeps a bounded amount of state (mode,
/// sign, two one-bit carries); wrong guesses die, and exactly one run
/// survives.
pub fn tworow_add(a: &TwoRowCode, b: &TwoRowCode) -> TwoRowCode {
    tworow_add_traced(a, b).0
}

pub fn tworow_add_traced(a: &TwoRowCode, b: &TwoRowCode) -> (TwoRowCode, AddTrace) {
    let cols = columns(a, b);
    let mut trace = AddTrace::default();
    let (sa, sb) = (a.sign(), b.sign());
    let mut runs: Vec<Run> = Vec::new();
    let modes = if sa == sb {
        vec![(Mode::Sum, sa)]
    } else {
        vec![
            (Mode::Diff { a_larger: true }, sa),
            (Mode::Diff { a_larger: false }, sb),
        ]
    };
    for (mode, sign) in modes {
        for guess in 0..=1 {
            runs.push(Run {
                mode: mode.clone(),
                sign,
                int_carry: guess,
                promised: guess,
                top: Vec::new(),
                bottom: Vec::new(),
            });
        }
    }
    let order = |run: &Run, col: &Column, int: bool| -> (u8, u8) {
        let (ai, bi) = if int {
            (col.a_int, col.b_int)
        } else {
            (col.a_low, col.b_low)
        };
        match run.mode {
            Mode::Diff { a_larger: false } => (bi, ai),
            _ => (ai, bi),
        }
    };
    for (j, col) in cols.iter().enumerate() {
        let mut next = Vec::new();
        for run in runs {
            // Integer bit j.
            let (x, y) = order(&run, col, true);
            let (out_int, carry) = digit(&run.mode, x, y, run.int_carry);
            if j == 0 {
                let mut r = run.clone();
                r.top.push(out_int);
                r.int_carry = carry;
                trace.max_carry = trace.max_carry.max(carry);
                // The bottom entry of column 0 is the sign, fixed at the end.
                r.bottom.push(0);
                next.push(r);
                continue;
            }
            // Fractional bit -j, for each guess of the carry from below.
            let (x, y) = order(&run, col, false);
            for guess in 0..=1 {
                let (out_low, carry_out) = digit(&run.mode, x, y, guess);
                if carry_out != run.promised {
                    continue;
                }
                let mut r = run.clone();
                r.top.push(out_int);
                r.int_carry = carry;
                r.bottom.push(out_low);
                r.promised = guess;
                trace.max_carry = trace.max_carry.max(guess).max(carry);
                next.push(r);
            }
        }
        runs = next;
        trace.max_runs = trace.max_runs.max(runs.len());
        trace.columns += 1;
    }
    // Flush: nothing lies below the last fractional position, and the
    // integer carry either becomes a new top bit or (for a difference)
    // refutes the magnitude guess.
    trace.columns += 1;
    let mut survivors: Vec<TwoRowCode> = Vec::new();
    for mut run in runs {
        if run.promised != 0 {
            continue;
        }
        match run.mode {
            Mode::Sum => {
                if run.int_carry == 1 {
                    run.top.push(1);
                }
            }
            Mode::Diff { .. } if run.int_carry == 1 => continue,
            Mode::Diff { .. } => {}
        }
        while run.top.len() > 1 && *run.top.last().unwrap() == 0 {
            run.top.pop();
        }
        while run.bottom.len() > 1 && *run.bottom.last().unwrap() == 0 {
            run.bottom.pop();
        }
        let zero = run.top == [0] && run.bottom.len() == 1;
        if zero && run.mode == (Mode::Diff { a_larger: false }) {
            continue;
        }
        run.bottom[0] = if zero { 0 } else { run.sign };
        survivors.push(TwoRowCode {
            top: run.top,
            bottom: run.bottom,
        });
    }
    assert_eq!(
        survivors.len(),
        1,
        "the addition automaton has exactly one accepting run"
    );
    (survivors.pop().unwrap(), trace)
}

/// `x = 0`: every bit outside the sign position is `0`.
pub fn rel_z(c: &TwoRowCode) -> bool {
    let zero_row = |row: &[u8]| row.iter().all(|&b| b == 0);
    zero_row(&c.top) && zero_row(&c.bottom[1..])
}

/// `x > 0`: sign `0` and not zero.
pub fn rel_p(c: &TwoRowCode) -> bool {
    c.sign() == 0 && !rel_z(c)
}

/// `a < b`, by one scan over the convolution of the two codes.
///
/// Integer bits arrive least significant first, so the last differing integer
/// column decides; fractional bits arrive most significant first, so the first
/// differing fractional column decides. The signs then orient the magnitude
/// verdict.
pub fn rel_l(a: &TwoRowCode, b: &TwoRowCode) -> bool {
    use std::cmp::Ordering::*;
    let mut int_verdict = Equal;
    let mut frac_verdict = Equal;
    for (j, col) in columns(a, b).iter().enumerate() {
        if col.a_int != col.b_int {
            int_verdict = col.a_int.cmp(&col.b_int);
        }
        if j > 0 && frac_verdict == Equal && col.a_low != col.b_low {
            frac_verdict = col.a_low.cmp(&col.b_low);
        }
    }
    let magnitude = int_verdict.then(frac_verdict);
    match (a.sign(), b.sign()) {
        (0, 0) => magnitude == Less,
        (1, 1) => magnitude == Greater,
        (1, 0) => true,
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::super::testing::{boundary, random};
    use super::*;
    use crate::Lcg;

    fn d(s: &str) -> Dyadic {
        s.parse().unwrap()
    }

    #[test]
    fn encode_examples() {
        assert_eq!(encode_tworow(&Dyadic::zero()).to_string(), "0|0");
        // 5/2 = 10.1 in binary: a₁ = 1, a₀ = 0, a₋₁ = 1.
        assert_eq!(encode_tworow(&d("5/2^1")).to_string(), "01|01");
        assert_eq!(encode_tworow(&d("-3/2^2")).to_string(), "0|111");
        assert_eq!(encode_tworow(&d("6")).to_string(), "011|0");
    }

    #[test]
    fn malformed_codes_are_rejected() {
        for s in ["0|1", "10|0", "0|10", "|0", "0|", "2|0", "00"] {
            assert!(s.parse::<TwoRowCode>().is_err(), "{}", s);
        }
        assert!("1|1".parse::<TwoRowCode>().is_ok());
    }

    #[test]
    fn roundtrip() {
        let mut rng = Lcg::new(3);
        for _ in 0..10_000 {
            let x = random(&mut rng);
            let c = encode_tworow(&x);
            assert_eq!(decode_tworow(&c), x);
            assert_eq!(c.to_string().parse::<TwoRowCode>().unwrap(), c);
        }
        for x in boundary() {
            assert_eq!(decode_tworow(&encode_tworow(&x)), x);
        }
    }

    #[test]
    fn every_short_code_roundtrips() {
        // encode ∘ decode is the identity on well-formed codes.
        for tl in 1..=4 {
            for bl in 1..=4 {
                for t in 0..(1u32 << tl) {
                    for b in 0..(1u32 << bl) {
                        let top: Vec<u8> = (0..tl).map(|i| ((t >> i) & 1) as u8).collect();
                        let bottom: Vec<u8> = (0..bl).map(|i| ((b >> i) & 1) as u8).collect();
                        if let Ok(c) = TwoRowCode::new(top, bottom) {
                            assert_eq!(encode_tworow(&decode_tworow(&c)), c);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn add_examples() {
        let half = encode_tworow(&d("1/2^1"));
        assert_eq!(tworow_add(&half, &half), encode_tworow(&Dyadic::one()));
        let x = encode_tworow(&d("-37/2^5"));
        assert_eq!(tworow_add(&x, &encode_tworow(&Dyadic::zero())), x);
        assert_eq!(
            tworow_add(&x, &encode_tworow(&d("37/2^5"))),
            encode_tworow(&Dyadic::zero())
        );
    }

    fn check_pair(x: &Dyadic, y: &Dyadic) {
        let (cx, cy) = (encode_tworow(x), encode_tworow(y));
        let (sum, trace) = tworow_add_traced(&cx, &cy);
        assert_eq!(decode_tworow(&sum), x + y, "{} + {}", x, y);
        assert!(trace.max_carry <= 1);
        assert_eq!(rel_l(&cx, &cy), x < y, "{} < {}", x, y);
    }

    #[test]
    fn streaming_operations_agree_with_exact_arithmetic() {
        let mut rng = Lcg::new(4);
        for _ in 0..10_000 {
            let (x, y) = (random(&mut rng), random(&mut rng));
            check_pair(&x, &y);
            let c = encode_tworow(&x);
            assert_eq!(rel_z(&c), x.is_zero());
            assert_eq!(rel_p(&c), x.is_positive());
        }
    }

    #[test]
    fn boundary_set() {
        let b = boundary();
        for x in &b {
            for y in &b {
                check_pair(x, y);
            }
            let c = encode_tworow(x);
            assert_eq!(rel_z(&c), x.is_zero());
            assert_eq!(rel_p(&c), x.is_positive());
        }
        assert!(rel_z(&encode_tworow(&Dyadic::zero())));
        assert!(!rel_z(&encode_tworow(&d("1/2^2"))));
        assert!(!rel_p(&encode_tworow(&d("-1/2^1"))));
    }

    #[test]
    fn run_count_stays_small() {
        let mut rng = Lcg::new(5);
        for _ in 0..1000 {
            let (x, y) = (random(&mut rng), random(&mut rng));
            let (_, trace) = tworow_add_traced(&encode_tworow(&x), &encode_tworow(&y));
            assert!(trace.max_runs <= 8, "{}", trace.max_runs);
        }
    }
}
