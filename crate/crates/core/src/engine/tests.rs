use std::sync::Arc;

use super::*;
use crate::automata::{examples, Word};
use crate::dyadic::Dyadic;
use crate::Lcg;

fn d(s: &str) -> Dyadic {
    s.parse().unwrap()
}

/// Bets 3/2 that a word's label equals its last letter; neutral on ε.
/// Remembers the last word seen.
fn last_letter_bettor() -> Setup {
    let factors = vec![d("3/2^1"), d("1/2^1"), Dyadic::one()];
    Setup::primitive(
        "last-letter",
        MState::new(Dyadic::one(), vec![Word::empty()]),
        factors,
        |s, p| match p {
            DataPoint::Pause => Ok(s.clone()),
            DataPoint::Labeled { word, label } => {
                let f = match word.letters().last() {
                    None => Dyadic::one(),
                    Some(&a) if (a == 1) == *label => d("3/2^1"),
                    Some(_) => d("1/2^1"),
                };
                Ok(s.with_memory(&f, vec![word.clone()]))
            }
        },
    )
}

/// Bets everything on label 1 for words of even length.
fn even_length_bettor() -> Setup {
    Setup::primitive(
        "even-length",
        MState::new(Dyadic::one(), vec![]),
        vec![Dyadic::from_int(2), Dyadic::zero(), Dyadic::one()],
        |s, p| match p {
            DataPoint::Labeled { word, label } if word.len() % 2 == 0 => Ok(s.scaled(&if *label {
                Dyadic::from_int(2)
            } else {
                Dyadic::zero()
            })),
            _ => Ok(s.clone()),
        },
    )
}

fn broken() -> Setup {
    Setup::primitive(
        "broken",
        MState::new(Dyadic::one(), vec![]),
        vec![d("3/2^1"), d("3/2^2")],
        |s, p| match p {
            DataPoint::Pause => Ok(s.clone()),
            DataPoint::Labeled { label, .. } => {
                Ok(s.scaled(&if *label { d("3/2^1") } else { d("3/2^2") }))
            }
        },
    )
}

fn random_stream(seed: u64, len: usize) -> Stream {
    let mut rng = Lcg::new(seed);
    let items: Vec<TextItem> = (0..len)
        .map(|_| {
            if rng.below(5) == 0 {
                TextItem::Pause
            } else {
                let n = rng.below(6) as usize;
                TextItem::Word(Word::from_letters(
                    (0..n).map(|_| rng.below(2) as u8).collect(),
                ))
            }
        })
        .collect();
    let mut rng2 = Lcg::new(seed ^ 0xabc);
    let table: Vec<bool> = (0..200).map(|_| rng2.coin()).collect();
    let oracle: Oracle = Arc::new(move |w: &Word| {
        let idx = w
            .letters()
            .iter()
            .fold(1usize, |acc, &a| acc * 2 + a as usize);
        table[idx % table.len()]
    });
    Stream::new(Text::from_sequence(items), oracle)
}

#[test]
fn zero_steps_give_the_start_capital() {
    let mut z = random_stream(1, 5);
    let t = run(&last_letter_bettor(), &mut z, 0, &RunOptions::default()).unwrap();
    assert_eq!(t.capitals(), vec![Dyadic::one()]);
}

#[test]
fn pauses_keep_capital() {
    let mut items = vec![TextItem::Pause; 5];
    items.push(TextItem::Word(Word::bits("1")));
    let oracle = oracle_from_dfa(&examples::sigma_star());
    let mut z = Stream::new(Text::from_sequence(items), oracle);
    let t = run(&last_letter_bettor(), &mut z, 6, &RunOptions::default()).unwrap();
    let caps = t.capitals();
    assert!(caps[..6].iter().all(|c| *c == Dyadic::one()));
    assert_eq!(caps[6], d("3/2^1"));
}

#[test]
fn broken_setup_is_caught() {
    let report = audit_fairness(&broken(), &[Word::bits("0")], &AuditOptions::default());
    assert!(!report.passed());
    assert!(matches!(
        report.violations[0].kind,
        ViolationKind::Unfair { .. }
    ));
    let json = report.to_json();
    assert!(json.contains("unfair"));
    let mut z2 = Stream::new(
        Text::from_sequence(vec![TextItem::Word(Word::bits("0"))]),
        oracle_from_dfa(&examples::sigma_star()),
    );
    assert!(matches!(
        run(&broken(), &mut z2, 1, &RunOptions::default()),
        Err(EngineError::Fairness { stage: 1, .. })
    ));
}

#[test]
fn fair_setups_pass_audit() {
    let probes: Vec<Word> = crate::automata::enumerate_ll(&examples::sigma_star(), 31).unwrap();
    for setup in [last_letter_bettor(), even_length_bettor()] {
        let report = audit_fairness(&setup, &probes, &AuditOptions { max_states: 50 });
        assert!(report.passed(), "{:?}", report.violations);
        assert!(report.transitions_checked > 100);
    }
}

#[test]
fn undeclared_factor_is_rejected() {
    let sneaky = Setup::primitive(
        "sneaky",
        MState::new(Dyadic::one(), vec![]),
        vec![d("3/2^1"), d("1/2^1")],
        |s, _| Ok(s.scaled(&d("5/2^2"))),
    );
    let p = DataPoint::labeled(Word::bits("0"), true);
    assert!(matches!(
        sneaky.step(sneaky.start(), &p),
        Err(EngineError::Discipline { .. })
    ));
}

#[test]
fn zero_capital_is_legal_and_stays() {
    let setup = even_length_bettor();
    let items = vec![
        TextItem::Word(Word::bits("00")),
        TextItem::Word(Word::bits("11")),
    ];
    let mut z = Stream::new(
        Text::from_sequence(items),
        oracle_from_dfa(&examples::ones()),
    );
    let t = run(&setup, &mut z, 2, &RunOptions::default()).unwrap();
    assert_eq!(
        t.capitals(),
        vec![Dyadic::one(), Dyadic::zero(), Dyadic::zero()]
    );
}

#[test]
fn success_threshold() {
    let mut z = Stream::new(
        Text::from_sequence(vec![
            TextItem::Word(Word::bits("1")),
            TextItem::Word(Word::bits("01")),
        ]),
        oracle_from_dfa(&examples::sigma_star()),
    );
    let t = run(&last_letter_bettor(), &mut z, 2, &RunOptions::default()).unwrap();
    assert_eq!(t.capitals(), vec![Dyadic::one(), d("3/2^1"), d("9/2^2")]);
    assert!(succeeded(&t, &Dyadic::from_int(2)));
    let mut z = Stream::new(
        Text::from_sequence(vec![TextItem::Pause; 3]),
        oracle_from_dfa(&examples::sigma_star()),
    );
    let flat = run(&last_letter_bettor(), &mut z, 3, &RunOptions::default()).unwrap();
    assert!(!succeeded(&flat, &d("3/2^1")));
}

#[test]
fn setup_algebra_traces() {
    let a = last_letter_bettor();
    let b = even_length_bettor();
    let sum = add_setups(&a, &b);
    let c = d("3/2^3");
    let scaled = scale_setup(&c, &a);
    assert_eq!(sum.start().capital, Dyadic::from_int(2));
    for seed in 0..20 {
        let opts = RunOptions::default();
        let ta = run(&a, &mut random_stream(seed, 50), 50, &opts).unwrap();
        let tb = run(&b, &mut random_stream(seed, 50), 50, &opts).unwrap();
        let ts = run(&sum, &mut random_stream(seed, 50), 50, &opts).unwrap();
        let tc = run(&scaled, &mut random_stream(seed, 50), 50, &opts).unwrap();
        for i in 0..=50 {
            assert_eq!(
                ts.entries[i].capital,
                &ta.entries[i].capital + &tb.entries[i].capital
            );
            assert_eq!(tc.entries[i].capital, ta.entries[i].capital.scale_const(&c));
        }
    }
    let id = scale_setup(&Dyadic::one(), &a);
    let t1 = run(&a, &mut random_stream(99, 30), 30, &RunOptions::default()).unwrap();
    let t2 = run(&id, &mut random_stream(99, 30), 30, &RunOptions::default()).unwrap();
    assert_eq!(t1.capitals(), t2.capitals());
}

#[test]
fn truncated_sum_weights() {
    let parts = vec![
        last_letter_bettor(),
        even_length_bettor(),
        last_letter_bettor(),
    ];
    let quarter = d("1/2^2");
    let s = truncated_sum(&parts, &quarter);
    assert_eq!(s.start().capital, d("21/2^4"));
    let single = truncated_sum(&parts[..1], &quarter);
    let t1 = run(
        &parts[0],
        &mut random_stream(5, 30),
        30,
        &RunOptions::default(),
    )
    .unwrap();
    let t2 = run(
        &single,
        &mut random_stream(5, 30),
        30,
        &RunOptions::default(),
    )
    .unwrap();
    assert_eq!(t1.capitals(), t2.capitals());

    let traces: Vec<_> = parts
        .iter()
        .map(|p| run(p, &mut random_stream(6, 30), 30, &RunOptions::default()).unwrap())
        .collect();
    let ts = run(&s, &mut random_stream(6, 30), 30, &RunOptions::default()).unwrap();
    for i in 0..=30 {
        let mut expected = Dyadic::zero();
        let mut w = Dyadic::one();
        for t in &traces {
            expected += &t.entries[i].capital.scale_const(&w);
            w = w.scale_const(&quarter);
        }
        assert_eq!(ts.entries[i].capital, expected);
    }
    assert_eq!(s.arity(), (2 + 1) + (2 + 0) + (2 + 1));
}

#[test]
fn sum_memory_carries_component_capitals() {
    let s = add_setups(&last_letter_bettor(), &even_length_bettor());
    assert_eq!(s.arity(), (2 + 1) + (2 + 0));
    assert!(s.factors().is_none());
    assert_eq!(last_letter_bettor().factors().unwrap().len(), 3);
}

#[test]
fn budget_violation() {
    let text = Text::from_sequence(vec![TextItem::Pause; 4]).with_budget(3);
    let mut z = Stream::new(text, oracle_from_dfa(&examples::sigma_star()));
    let err = run(&last_letter_bettor(), &mut z, 4, &RunOptions::default()).unwrap_err();
    assert_eq!(
        err,
        EngineError::Budget {
            stage: 3,
            budget: 3
        }
    );
}

#[test]
fn finite_text_runs_out() {
    let mut z = Stream::new(
        Text::from_sequence(vec![]),
        oracle_from_dfa(&examples::sigma_star()),
    );
    assert_eq!(
        run(&last_letter_bettor(), &mut z, 1, &RunOptions::default()).unwrap_err(),
        EngineError::TextExhausted { stage: 0 }
    );
}

#[test]
fn dynamic_run_respects_budget() {
    let g: Generator = Arc::new(|_| TextItem::Pause);
    let oracle = oracle_from_dfa(&examples::sigma_star());
    let opts = RunOptions {
        budget: 5,
        ..RunOptions::default()
    };
    assert!(run_dynamic(&last_letter_bettor(), &g, &oracle, 5, &opts).is_ok());
    assert!(matches!(
        run_dynamic(&last_letter_bettor(), &g, &oracle, 6, &opts),
        Err(EngineError::Budget { stage: 6, .. })
    ));
}

#[test]
fn ll_text_and_domain_check() {
    let mut t = Text::ll(&examples::sigma_star()).unwrap();
    let first: Vec<TextItem> = (0..4).map(|_| t.next_item().unwrap()).collect();
    let expected: Vec<TextItem> = ["", "0", "1", "00"]
        .iter()
        .map(|s| TextItem::Word(Word::bits(s)))
        .collect();
    assert_eq!(first, expected);
    let empty = crate::automata::Dfa::empty(crate::automata::Alphabet::binary());
    assert!(matches!(Text::ll(&empty), Err(EngineError::EmptyDomain)));

    let mut z = Stream::new(
        Text::from_sequence(vec![TextItem::Word(Word::bits("1"))]),
        oracle_from_dfa(&examples::sigma_star()),
    )
    .within(&examples::zeros());
    assert!(matches!(z.next_point(), Err(EngineError::OutsideDomain(_))));
}

#[test]
fn prefix_classification() {
    let w = |s: &str| TextItem::Word(Word::bits(s));
    let flags = classify_text_prefix(
        &[w("0"), TextItem::Pause, w("0")],
        &examples::sigma_star(),
        1,
    );
    assert!(!flags.repetition_free);
    assert!(!flags.exhaustive);
    assert_eq!(flags.distinct_words, 1);

    let prefix: Vec<TextItem> = ["", "0", "1", "00", "01", "10", "11"]
        .iter()
        .map(|s| w(s))
        .collect();
    let flags = classify_text_prefix(&prefix, &examples::sigma_star(), 2);
    assert!(flags.repetition_free && flags.exhaustive && flags.infinite_range_evidence);
    let flags = classify_text_prefix(
        &[w("1"), w("1"), w("1"), w("1")],
        &examples::sigma_star(),
        0,
    );
    assert!(!flags.infinite_range_evidence);
}

#[test]
fn trace_serialization() {
    let items = vec![TextItem::Word(Word::bits("1")), TextItem::Pause];
    let mut z = Stream::new(
        Text::from_sequence(items),
        oracle_from_dfa(&examples::zeros()),
    );
    let t = run(&last_letter_bettor(), &mut z, 2, &RunOptions::default()).unwrap();
    assert_eq!(
        t.to_csv(),
        "stage,word,label,num,exp\n0,,,1,0\n1,1,0,1,1\n2,#,,1,1\n"
    );
    let json: serde_json::Value = serde_json::from_str(&t.to_json()).unwrap();
    assert_eq!(json[1]["capital"], "1/2^1");
    assert_eq!(json[2]["word"], "#");
    assert!(json[0]["label"].is_null());
}

proptest::proptest! {
    #[test]
    fn successors_bracket_the_capital(n in 0i64..1000, e in 0u64..10, bits in proptest::collection::vec(0u8..2, 0..6)) {
        let setup = last_letter_bettor();
        let s = MState::new(Dyadic::new(n, e), vec![Word::empty()]);
        let x = Word::from_letters(bits);
        let zero = setup.step(&s, &DataPoint::labeled(x.clone(), false)).unwrap().capital;
        let one = setup.step(&s, &DataPoint::labeled(x, true)).unwrap().capital;
        proptest::prop_assert!(zero.clone().min(one.clone()) <= s.capital);
        proptest::prop_assert!(s.capital <= zero.max(one));
    }
}
