//! Random checks of the two-row presentation against plain big-integer
//! arithmetic: each code is read back from its rows here, not through the
//! library's decoder.

use std::cmp::Ordering;

use automart::dyadic::{encode_tworow, rel_l, rel_p, rel_z, tworow_add_traced, Dyadic, TwoRowCode};
use automart::Lcg;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

/// `value · 2^exp` as an integer pair.
#[derive(Clone, Debug)]
struct Scaled {
    num: BigInt,
    exp: u64,
}

impl Scaled {
    fn of(x: &Dyadic) -> Scaled {
        Scaled {
            num: x.numerator().clone(),
            exp: x.exponent(),
        }
    }

    /// Integer row `top[i]·2^i`, fraction row `bottom[j]·2^-j` for `j ≥ 1`,
    /// sign in `bottom[0]`.
    fn of_code(c: &TwoRowCode) -> Scaled {
        let exp = (c.bottom().len() - 1) as u64;
        let mut num = BigInt::zero();
        for (i, &b) in c.top().iter().enumerate() {
            if b == 1 {
                num += BigInt::one() << (i as u64 + exp);
            }
        }
        for (j, &b) in c.bottom().iter().enumerate().skip(1) {
            if b == 1 {
                num += BigInt::one() << (exp - j as u64);
            }
        }
        if c.bottom()[0] == 1 {
            num = -num;
        }
        Scaled { num, exp }
    }

    fn lifted(&self, exp: u64) -> BigInt {
        &self.num << (exp - self.exp)
    }

    fn cmp(&self, other: &Scaled) -> Ordering {
        let e = self.exp.max(other.exp);
        self.lifted(e).cmp(&other.lifted(e))
    }

    fn add(&self, other: &Scaled) -> Scaled {
        let e = self.exp.max(other.exp);
        Scaled {
            num: self.lifted(e) + other.lifted(e),
            exp: e,
        }
    }
}

/// Random dyadic with a numerator below `2^40` in magnitude and an exponent
/// below 30.
pub fn random_dyadic(rng: &mut Lcg) -> Dyadic {
    let mag = rng.next_u64() >> (24 + rng.below(40));
    let num = if rng.coin() {
        -BigInt::from(mag)
    } else {
        BigInt::from(mag)
    };
    Dyadic::new(num, rng.below(30))
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct DyadicAuditReport {
    pub samples: usize,
    pub seed: u64,
    pub encode_mismatches: usize,
    pub add_mismatches: usize,
    pub zero_mismatches: usize,
    pub positive_mismatches: usize,
    pub less_mismatches: usize,
    pub max_carry: u8,
    pub max_runs: usize,
    /// First few failing inputs, as `a, b`.
    pub examples: Vec<String>,
}

impl DyadicAuditReport {
    pub fn passed(&self) -> bool {
        self.encode_mismatches == 0
            && self.add_mismatches == 0
            && self.zero_mismatches == 0
            && self.positive_mismatches == 0
            && self.less_mismatches == 0
            && self.max_carry <= 1
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }
}

/// Checks addition, `= 0`, `> 0` and `<` on `samples` random pairs.
/// Every fourth pair reuses `a` or `-a` as `b` to hit equal and cancelling
/// operands.
pub fn dyadic_audit(samples: usize, seed: u64) -> DyadicAuditReport {
    let mut rng = Lcg::new(seed);
    let mut r = DyadicAuditReport {
        samples,
        seed,
        ..Default::default()
    };
    let note = |r: &mut DyadicAuditReport, a: &Dyadic, b: &Dyadic| {
        if r.examples.len() < 8 {
            r.examples.push(format!("{}, {}", a, b));
        }
    };
    for i in 0..samples {
        let a = random_dyadic(&mut rng);
        let b = match i % 8 {
            3 => a.clone(),
            7 => -a.clone(),
            _ => random_dyadic(&mut rng),
        };
        let (ea, eb) = (encode_tworow(&a), encode_tworow(&b));
        let (sa, sb) = (Scaled::of(&a), Scaled::of(&b));
        if Scaled::of_code(&ea).cmp(&sa) != Ordering::Equal {
            r.encode_mismatches += 1;
            note(&mut r, &a, &b);
        }
        let (sum, trace) = tworow_add_traced(&ea, &eb);
        r.max_carry = r.max_carry.max(trace.max_carry);
        r.max_runs = r.max_runs.max(trace.max_runs);
        if Scaled::of_code(&sum).cmp(&sa.add(&sb)) != Ordering::Equal {
            r.add_mismatches += 1;
            note(&mut r, &a, &b);
        }
        if rel_z(&ea) != sa.num.is_zero() {
            r.zero_mismatches += 1;
            note(&mut r, &a, &b);
        }
        if rel_p(&ea) != sa.num.is_positive() {
            r.positive_mismatches += 1;
            note(&mut r, &a, &b);
        }
        if rel_l(&ea, &eb) != (sa.cmp(&sb) == Ordering::Less) {
            r.less_mismatches += 1;
            note(&mut r, &a, &b);
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_audit_passes_and_is_reproducible() {
        let a = dyadic_audit(400, 3);
        assert!(a.passed(), "{:?}", a.examples);
        assert_eq!(a.to_json(), dyadic_audit(400, 3).to_json());
    }

    #[test]
    fn oracle_reads_codes_back() {
        for x in ["0", "5", "-3/2^4", "13/2^2", "-1"] {
            let d: Dyadic = x.parse().unwrap();
            let s = Scaled::of_code(&encode_tworow(&d));
            assert_eq!(s.cmp(&Scaled::of(&d)), Ordering::Equal, "{}", x);
        }
    }
}
