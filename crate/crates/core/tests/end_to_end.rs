use automart::automata::{examples, Dfa, Word};
use automart::constructions::{
    adversarial_text, diagonalize, family_learner, regular_bettor, subset_bettor,
    verify_certificate, Adversary, AutomaticFamily, DiagonalCertificate, Side, TextMode,
    DEFAULT_SEARCH_BOUND,
};
use automart::dyadic::Dyadic;
use automart::engine::{
    add_setups, audit_fairness, oracle_from_dfa, run, scale_setup, AuditOptions, RunOptions, Setup,
    Stream, Text, TextItem,
};
use automart::Lcg;
use num_bigint::BigInt;
use proptest::prelude::*;

fn infinite_corpus() -> Vec<(String, Dfa)> {
    examples::corpus()
        .into_iter()
        .filter(|d| !d.name.starts_with('{'))
        .map(|d| (d.name.to_string(), d.dfa))
        .collect()
}

fn three_halves_pow(n: usize) -> Dyadic {
    Dyadic::new(BigInt::from(3).pow(n as u32), n as u64)
}

fn random_text(domain: &Dfa, rng: &mut Lcg, len: usize) -> Vec<TextItem> {
    let pool = automart::automata::enumerate_ll(domain, 64).unwrap();
    (0..len)
        .map(|_| {
            if rng.below(5) == 0 {
                TextItem::Pause
            } else {
                TextItem::Word(pool[rng.below(pool.len() as u64) as usize].clone())
            }
        })
        .collect()
}

fn trace_on(d: &Setup, items: &[TextItem], truth: &Dfa, domain: &Dfa) -> Vec<Dyadic> {
    let mut stream =
        Stream::new(Text::from_sequence(items.to_vec()), oracle_from_dfa(truth)).within(domain);
    run(d, &mut stream, items.len(), &RunOptions::default())
        .unwrap()
        .capitals()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn bettor_on_its_own_language_grows_by_three_halves(
        di in 0usize..12, li in 0usize..12, n in 1usize..40,
    ) {
        let corpus = infinite_corpus();
        let domain = &corpus[di % corpus.len()].1;
        let language = &corpus[li % corpus.len()].1;
        let mut stream = Stream::new(Text::ll(domain).unwrap(), oracle_from_dfa(language))
            .within(domain);
        let t = run(&regular_bettor(language), &mut stream, n, &RunOptions::default()).unwrap();
        prop_assert_eq!(t.last_capital(), &three_halves_pow(n));
    }

    #[test]
    fn sums_and_scalings_track_their_components(
        seed in any::<u64>(), i in 0usize..12, j in 0usize..12, k in 1i64..9, e in 0u64..4,
    ) {
        let corpus = infinite_corpus();
        let sigma = examples::sigma_star();
        let truth = &corpus[(i + j) % corpus.len()].1;
        let d1 = regular_bettor(&corpus[i % corpus.len()].1);
        let d2 = subset_bettor(&corpus[j % corpus.len()].1, Side::Outside);
        let c = Dyadic::new(k, e);
        let items = random_text(&sigma, &mut Lcg::new(seed), 30);
        let a = trace_on(&d1, &items, truth, &sigma);
        let b = trace_on(&d2, &items, truth, &sigma);
        let sum = trace_on(&add_setups(&d1, &d2), &items, truth, &sigma);
        let scaled = trace_on(&scale_setup(&c, &d1), &items, truth, &sigma);
        for t in 0..=items.len() {
            prop_assert_eq!(&sum[t], &(&a[t] + &b[t]));
            prop_assert_eq!(&scaled[t], &a[t].scale_const(&c));
        }
    }
}

#[test]
fn combined_setups_stay_fair() {
    let zeros = examples::by_name("0*").unwrap();
    let pairs = examples::by_name("(01)*").unwrap();
    let sum = add_setups(
        &regular_bettor(&zeros),
        &scale_setup(
            &Dyadic::new(3, 2),
            &family_learner(&AutomaticFamily::prefixes()).unwrap(),
        ),
    );
    let probes = automart::automata::enumerate_ll(&examples::sigma_star(), 12).unwrap();
    let report = audit_fairness(&sum, &probes, &AuditOptions::default());
    assert!(report.passed(), "{:?}", report.violations);
    let report = audit_fairness(
        &subset_bettor(&pairs, Side::Inside),
        &probes,
        &AuditOptions::default(),
    );
    assert!(report.passed());
}

#[test]
fn adversarial_text_holds_every_bettor_down() {
    let sigma = examples::sigma_star();
    let truth = oracle_from_dfa(&examples::by_name("(01)*").unwrap());
    for (name, l) in infinite_corpus() {
        let d = regular_bettor(&l);
        match adversarial_text(&d, &truth, &sigma, TextMode::Any, 40, DEFAULT_SEARCH_BOUND).unwrap()
        {
            Adversary::Text { capitals, .. } => {
                assert!(capitals.iter().all(|c| *c <= Dyadic::one()), "{}", name);
            }
            Adversary::Stall(_) => assert_eq!(name, "(01)*"),
        }
    }
}

#[test]
fn certificates_survive_serialization() {
    let sigma = examples::sigma_star();
    let setups = vec![
        regular_bettor(&examples::by_name("0*1*").unwrap()),
        subset_bettor(&examples::by_name("1(0|1)*").unwrap(), Side::Inside),
        family_learner(&AutomaticFamily::prefixes()).unwrap(),
    ];
    let cert = diagonalize(&setups, &sigma, 20).unwrap();
    let back = DiagonalCertificate::from_json(&cert.to_json()).unwrap();
    assert_eq!(back.to_json(), cert.to_json());
    verify_certificate(&back, &setups, &sigma).unwrap();

    let mut shuffled = setups.clone();
    shuffled.swap(0, 2);
    assert!(verify_certificate(&back, &shuffled, &sigma).is_err());

    let first: Vec<Word> = back
        .words
        .iter()
        .take(3)
        .map(|e| sigma.alphabet().parse_word(0, &e.w).unwrap())
        .collect();
    assert_eq!(first, automart::automata::enumerate_ll(&sigma, 3).unwrap());
}
