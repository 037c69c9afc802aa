use std::sync::Arc;

use proptest::prelude::*;

use super::*;
use crate::automata::{enumerate_ll, examples, min_ll_at_least, Alphabet, Dfa, Word};
use crate::constructions::Side;
use crate::dyadic::Dyadic;
use crate::engine::{run, RunOptions, Stream, Text};

fn g(text: &str) -> Cfg {
    text.parse().unwrap()
}

/// Binary words of length at most `max_len` in ll-order.
fn words_upto(max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    for n in 1..=max_len {
        for bits in 0..(1u32 << n) {
            out.push(Word::from_letters(
                (0..n).rev().map(|i| ((bits >> i) & 1) as u8).collect(),
            ));
        }
    }
    out
}

fn zeros_ones_equal(w: &Word, min: usize) -> bool {
    let n = w.len();
    n % 2 == 0
        && n / 2 >= min
        && w.letters()[..n / 2].iter().all(|&a| a == 0)
        && w.letters()[n / 2..].iter().all(|&a| a == 1)
}

fn grammars() -> Vec<Cfg> {
    vec![
        Cfg::equal_blocks(0),
        Cfg::equal_blocks(1),
        g("S -> 0 S 0 | 1 S 1 | 0 | 1 | #eps"),
        g("S -> S S | 0 S 1 | #eps"),
        g("S -> A | 0\nA -> S | 1 A"),
        g("S -> 0 1 S 1 0 | A B\nA -> #eps | 0\nB -> A A 1"),
        g("S -> A B | B A\nA -> 0 | 0 A 0 | 0 A 1 | 1 A 0 | 1 A 1\nB -> 1 | 0 B 0 | 0 B 1 | 1 B 0 | 1 B 1"),
        g("S -> 0 S"),
        g("S -> #eps"),
    ]
}

#[test]
fn text_format_roundtrips() {
    for cfg in grammars() {
        let back: Cfg = cfg.to_string().parse().unwrap();
        assert_eq!(back.productions(), cfg.productions());
    }
}

#[test]
fn parse_errors_carry_line_numbers() {
    let e = "S -> 0 S 1\nS => 1".parse::<Cfg>().unwrap_err();
    assert_eq!(
        e,
        GrammarError::Parse {
            line: 2,
            detail: "expected `->`".into()
        }
    );
    assert!(matches!(
        "S -> 0 X".parse::<Cfg>(),
        Err(GrammarError::Parse { line: 1, .. })
    ));
    assert!(matches!(
        "S -> 0 |".parse::<Cfg>(),
        Err(GrammarError::Parse { line: 1, .. })
    ));
}

#[test]
fn derives_matches_closed_form() {
    let cfg = Cfg::equal_blocks(1);
    for w in words_upto(8) {
        assert_eq!(cfg.derives(&w), zeros_ones_equal(&w, 1), "{}", w);
    }
}

#[test]
fn cnf_preserves_membership_up_to_length_8() {
    let all = words_upto(8);
    for cfg in grammars() {
        let cnf = to_cnf(&cfg);
        for w in &all {
            assert_eq!(cyk_member(&cnf, w), cfg.derives(w), "{}\non {}", cfg, w);
        }
    }
}

#[test]
fn cnf_of_equal_blocks() {
    let cnf = to_cnf(&Cfg::equal_blocks(1));
    assert!(cyk_member(&cnf, &Word::bits("0011")));
    assert!(!cyk_member(&cnf, &Word::bits("010")));
    assert!(!cyk_member(&cnf, &Word::empty()));
    assert!(cyk_member(&to_cnf(&Cfg::equal_blocks(0)), &Word::empty()));
}

#[test]
fn cnf_of_empty_language_has_no_generating_start() {
    let cnf = to_cnf(&g("S -> 0 S\nA -> 1"));
    assert_eq!(cnf.rule_count(), 0);
    assert_eq!(cnf.nonterminal_count(), 1);
    assert!(!cyk_member(&cnf, &Word::empty()));
}

#[test]
fn cnf_of_empty_word_only() {
    let cnf = to_cnf(&g("S -> #eps"));
    assert!(cnf.accepts_empty());
    assert_eq!(cnf.rule_count(), 1);
    assert!(cnf.terminal_rules().is_empty() && cnf.binary_rules().is_empty());
}

#[test]
fn parse_fails_on_non_members() {
    let cnf = to_cnf(&Cfg::equal_blocks(1));
    assert_eq!(
        parse(&cnf, &Word::bits("010")),
        Err(GrammarError::NotAMember)
    );
    assert_eq!(parse(&cnf, &Word::empty()), Err(GrammarError::NotAMember));
}

fn dyck(moves: &[bool]) -> Word {
    let mut out = Vec::new();
    let mut depth = 0;
    for &open in moves {
        if open || depth == 0 {
            out.push(0);
            depth += 1;
        } else {
            out.push(1);
            depth -= 1;
        }
    }
    out.extend(std::iter::repeat(1).take(depth));
    Word::from_letters(out)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn parse_yield_is_the_input(moves in prop::collection::vec(any::<bool>(), 0..12)) {
        let cnf = to_cnf(&g("S -> S S | 0 S 1 | #eps"));
        let w = dyck(&moves);
        let tree = parse(&cnf, &w).unwrap();
        prop_assert_eq!(tree.yield_word(), w);
        prop_assert_eq!(tree.nonterminal(), cnf.start());
    }

    #[test]
    fn pumps_regenerate(moves in prop::collection::vec(any::<bool>(), 4..14)) {
        let cfg = g("S -> S S | 0 S 1 | #eps");
        let cnf = to_cnf(&cfg);
        let w = dyck(&moves);
        if let Ok(p) = pump_cfl(&cnf, &w) {
            prop_assert!(p.b.len() + p.d.len() >= 1);
            prop_assert_eq!(p.pumped(1), w);
            for n in 0..=4 {
                prop_assert!(cfg.derives(&p.pumped(n)));
            }
        }
    }
}

#[test]
fn quotient_by_one_zero() {
    let cnf = to_cnf(&Cfg::equal_blocks(1));
    let q = quotient(&cnf, &Word::bits("0"), &Word::empty());
    assert!(cyk_member(&q, &Word::bits("1")));
    assert!(cyk_member(&q, &Word::bits("011")));
    assert!(!cyk_member(&q, &Word::bits("01")));
}

#[test]
fn quotient_matches_oracle_up_to_length_6() {
    let cases = [
        ("0", ""),
        ("", "1"),
        ("00", "1"),
        ("01", "10"),
        ("1", "1"),
        ("000", "111"),
    ];
    let all = words_upto(6);
    for cfg in grammars() {
        let cnf = to_cnf(&cfg);
        for (u, v) in cases {
            let (u, v) = (Word::bits(u), Word::bits(v));
            let q = quotient(&cnf, &u, &v);
            for w in &all {
                let uwv = u.concat(w).concat(&v);
                assert_eq!(
                    cyk_member(&q, w),
                    cyk_member(&cnf, &uwv),
                    "{}\nu={} v={} w={}",
                    cfg,
                    u,
                    v,
                    w
                );
            }
        }
    }
}

#[test]
fn trivial_quotient_is_identity() {
    let all = words_upto(8);
    for cfg in grammars() {
        let cnf = to_cnf(&cfg);
        let q = quotient(&cnf, &Word::empty(), &Word::empty());
        for w in &all {
            assert_eq!(cyk_member(&q, w), cyk_member(&cnf, w));
        }
    }
}

#[test]
fn quotient_by_long_prefix_is_empty() {
    let cnf = to_cnf(&g("S -> 01 | 0011"));
    let q = quotient(&cnf, &Word::bits("00000"), &Word::empty());
    assert_eq!(finite_language(&q).unwrap().len(), 0);
}

#[test]
fn finiteness() {
    assert!(!is_finite_cfl(&to_cnf(&Cfg::equal_blocks(1))));
    assert!(is_finite_cfl(&to_cnf(&g("S -> #eps"))));
    assert!(is_finite_cfl(&to_cnf(&g("S -> 0\nA -> 0 A | 1"))));
    assert!(is_finite_cfl(&to_cnf(&g("S -> 0 | A\nA -> 0 A"))));
    assert!(!is_finite_cfl(&to_cnf(&g("S -> A\nA -> B 0 | 1\nB -> A"))));
}

#[test]
fn finite_language_matches_enumeration() {
    let cfg = g("S -> A A | 1\nA -> 0 | 01 | #eps");
    let cnf = to_cnf(&cfg);
    let listed = finite_language(&cnf).unwrap();
    let brute: Vec<Word> = words_upto(6)
        .into_iter()
        .filter(|w| cfg.derives(w))
        .collect();
    assert_eq!(listed.into_iter().collect::<Vec<_>>(), {
        let mut b = brute;
        b.sort();
        b
    });
    assert!(finite_language(&to_cnf(&Cfg::equal_blocks(0))).is_none());
}

#[test]
fn pump_of_0011() {
    let cnf = to_cnf(&Cfg::equal_blocks(1));
    let p = pump_cfl(&cnf, &Word::bits("0011")).unwrap();
    assert_eq!(p.a, Word::empty());
    assert_eq!(p.e, Word::empty());
    assert_eq!(p.b, Word::bits("0"));
    assert_eq!(p.d, Word::bits("1"));
    assert_eq!(p.c, Word::bits("01"));
    for n in 0..=4 {
        let w = p.pumped(n);
        assert!(zeros_ones_equal(&w, 1), "{}", w);
        assert!(cyk_member(&cnf, &w));
    }
}

#[test]
fn pump_rejects_short_and_non_members() {
    let cnf = to_cnf(&Cfg::equal_blocks(1));
    assert_eq!(
        pump_cfl(&cnf, &Word::bits("01")),
        Err(GrammarError::TooShort { len: 2 })
    );
    assert_eq!(
        pump_cfl(&cnf, &Word::bits("0010")),
        Err(GrammarError::NotAMember)
    );
}

#[test]
fn intersection_with_regular_matches_oracle() {
    let all = words_upto(8);
    let langs = [
        examples::zeros_then_ones(),
        examples::even_zeros(),
        examples::ones(),
    ];
    for cfg in grammars() {
        let cnf = to_cnf(&cfg);
        for r in &langs {
            let m = intersect_regular(&cnf, r).unwrap();
            for w in &all {
                assert_eq!(cyk_member(&m, w), cfg.derives(w) && r.contains(w), "{}", w);
            }
        }
    }
}

fn zeros_plus() -> Dfa {
    Dfa::from_edges(Alphabet::binary(), 2, 0, &[1], &[(0, 0, 1), (1, 0, 1)]).unwrap()
}

#[test]
fn subset_outside_equal_blocks() {
    let cnf = to_cnf(&Cfg::equal_blocks(0));
    let r = infinite_regular_subset(&cnf, &examples::sigma_star()).unwrap();
    assert_eq!(r.side, Side::Outside);
    assert_eq!(r.excluded, vec![Word::empty()]);
    assert!(r.dfa.equivalent(&zeros_plus()).unwrap());
    for w in enumerate_ll(&r.dfa, 100).unwrap() {
        assert!(!zeros_ones_equal(&w, 0), "{}", w);
        assert!(!cyk_member(&cnf, &w));
    }
}

#[test]
fn subset_inside_zeros() {
    let cfg = g("S -> 0 S | #eps");
    let cnf = to_cnf(&cfg);
    let r = infinite_regular_subset(&cnf, &examples::sigma_star()).unwrap();
    assert_eq!(r.side, Side::Inside);
    let (m, k) = r.progression.unwrap();
    assert!(k >= 1);
    let members = enumerate_ll(&r.dfa, 100).unwrap();
    assert_eq!(members.len(), 100);
    for (n, w) in members.iter().enumerate() {
        assert!(w.letters().iter().all(|&a| a == 0));
        assert_eq!(w.len(), r.u.len() + r.w.len() + r.v.len() * (m + k * n));
        assert_eq!(Some(w.clone()), r.progression_word(n));
    }
}

#[test]
fn subsets_are_sound_and_infinite() {
    let domains = [
        examples::sigma_star(),
        examples::zeros_then_ones(),
        examples::even_zeros(),
        examples::one_then_any(),
        examples::alternating(),
    ];
    for cfg in grammars() {
        let cnf = to_cnf(&cfg);
        for domain in &domains {
            let r = infinite_regular_subset(&cnf, domain).unwrap();
            assert!(min_ll_at_least(&r.dfa, r.dfa.state_count()).is_ok());
            let members = enumerate_ll(&r.dfa, 30).unwrap();
            assert_eq!(members.len(), 30);
            for w in &members {
                assert!(domain.contains(w));
                let inside = if w.len() <= 10 {
                    cfg.derives(w)
                } else {
                    cyk_member(&cnf, w)
                };
                assert_eq!(
                    inside,
                    r.side == Side::Inside,
                    "{}\n{} on {:?}",
                    cfg,
                    w,
                    r.side
                );
            }
        }
    }
}

#[test]
fn finite_domain_is_rejected() {
    let cnf = to_cnf(&Cfg::equal_blocks(0));
    assert_eq!(
        infinite_regular_subset(&cnf, &examples::small_finite()).unwrap_err(),
        GrammarError::FiniteDomain
    );
}

#[test]
fn pipeline_wins_on_every_member_of_r() {
    let domain = examples::sigma_star();
    let (setup, r) = cfl_nonrandom_pipeline(&Cfg::equal_blocks(0), &domain).unwrap();
    let oracle = Arc::new(|w: &Word| zeros_ones_equal(w, 0));
    // ll-order reaches 0^6 at position 2^6.
    let mut stream = Stream::new(Text::ll(&domain).unwrap(), oracle).within(&domain);
    let trace = run(&setup, &mut stream, 64, &RunOptions::default()).unwrap();
    let hits = enumerate_ll(&domain, 64)
        .unwrap()
        .iter()
        .filter(|w| r.dfa.contains(w))
        .count();
    assert_eq!(hits, 6);
    let mut expected = Dyadic::one();
    for _ in 0..hits {
        expected = expected.scale_const(&Dyadic::new(3, 1));
    }
    assert_eq!(trace.last_capital(), &expected);
}

#[test]
fn pipeline_is_neutral_off_r() {
    let domain = examples::sigma_star();
    let (setup, _) = cfl_nonrandom_pipeline(&Cfg::equal_blocks(0), &domain).unwrap();
    let oracle = Arc::new(|w: &Word| zeros_ones_equal(w, 0));
    let text: Vec<_> = (0..50)
        .map(|n| crate::engine::TextItem::Word(Word::bits("1").concat(&Word::repeat(0, n))))
        .collect();
    let mut stream = Stream::new(Text::from_sequence(text), oracle).within(&domain);
    let trace = run(&setup, &mut stream, 50, &RunOptions::default()).unwrap();
    assert!(trace.capitals().iter().all(|c| *c == Dyadic::one()));
}
