mod common;

use accent_core::bundled;
use accent_core::harness::{self, score, two_way_anova, Condition, RateTable, SpeakerTranscript};
use accent_core::hmm::{
    forward_likelihood, recognize, viterbi_align, Constants, ModelParams, Recognition, WordHmm, TIE_TOLERANCE,
};
use accent_core::lexicon::Lexicon;
use accent_core::phonology::{FeatureSpace, PhoneFeatures};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

fn space() -> FeatureSpace {
    FeatureSpace::standard()
}

fn any_vector() -> impl Strategy<Value = PhoneFeatures> {
    (0..714usize).prop_map(|i| space().get(i).unwrap())
}

fn paragraph_params() -> (Lexicon, ModelParams) {
    let lex = bundled::paragraph_lexicon();
    let params = ModelParams::naive(&lex.inventory(), &space());
    (lex, params)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn naive_params_are_stochastic(
        p_ins in 1e-4..0.5f64,
        p_del in 1e-4..0.5f64,
        sigma in 0.1..5.0f64,
        prior_weight in 0.1..100.0f64,
    ) {
        let lex = bundled::paragraph_lexicon();
        let c = Constants { p_ins, p_del, sigma, prior_weight };
        let params = ModelParams::naive_with(&lex.inventory(), &space(), c).unwrap();
        prop_assert!(params.check().is_ok());
    }

    #[test]
    fn forward_bounds_viterbi(word_idx in 0..55usize, obs in prop::collection::vec(any_vector(), 0..7)) {
        let (lex, params) = paragraph_params();
        let form = lex.entries().nth(word_idx).unwrap();
        let hmm = WordHmm::new(form).unwrap();
        let fwd = forward_likelihood(&hmm, &obs, &params).unwrap();
        let vit = viterbi_align(&hmm, &obs, &params).unwrap();
        prop_assert!(fwd >= vit.log_probability - 1e-12);
        prop_assert!(fwd <= 1e-12);
        prop_assert_eq!(vit.emitted(), obs);
        prop_assert_eq!(vit.spelled_phonemes(), form.phonemes.clone());
    }

    #[test]
    fn tie_set_is_exactly_the_near_maximal_words(obs in prop::collection::vec(any_vector(), 1..6)) {
        let (lex, params) = paragraph_params();
        let r = recognize(&obs, &lex, &params).unwrap();
        let best = r.ranking[0].1;
        let expected: Vec<String> = {
            let mut w: Vec<String> =
                r.ranking.iter().filter(|(_, lp)| best - lp <= TIE_TOLERANCE).map(|(w, _)| w.clone()).collect();
            w.sort();
            w
        };
        prop_assert_eq!(&r.tie_set, &expected);
        prop_assert_eq!(r.ranking.len(), lex.len());
        // Independent of the order scores arrive in.
        let mut reversed = r.ranking.clone();
        reversed.reverse();
        prop_assert_eq!(Recognition::from_scores(reversed), r);
    }

    #[test]
    fn score_is_order_free_and_bounded(
        items in prop::collection::vec(("[a-c]", prop::collection::vec("[a-c]", 0..3)), 0..40),
        seed in any::<u64>(),
    ) {
        let items: Vec<(String, Vec<String>)> = items;
        let r = score(Condition::After, &items);
        prop_assert!((0.0..=100.0).contains(&r.rate));
        let mut shuffled = items.clone();
        shuffled.shuffle(&mut StdRng::seed_from_u64(seed));
        let r2 = score(Condition::After, &shuffled);
        prop_assert_eq!(r.correct, r2.correct);
        prop_assert_eq!(r.rate, r2.rate);
    }

    #[test]
    fn anova_is_shift_invariant(
        values in prop::collection::vec(0.0..100.0f64, 12),
        shift in -50.0..50.0f64,
    ) {
        let table = |d: f64| RateTable {
            cells: [
                [values[0..3].iter().map(|x| x + d).collect(), values[3..6].iter().map(|x| x + d).collect()],
                [values[6..9].iter().map(|x| x + d).collect(), values[9..12].iter().map(|x| x + d).collect()],
            ],
        };
        let a = two_way_anova(&table(0.0)).unwrap();
        let b = two_way_anova(&table(shift)).unwrap();
        for (x, y) in [(a.learning, b.learning), (a.speakers, b.speakers), (a.interaction, b.interaction)] {
            prop_assert!(x.f >= 0.0);
            prop_assert!((x.f - y.f).abs() <= 1e-6 * x.f.max(1.0), "{} vs {}", x.f, y.f);
        }
    }

    #[test]
    fn symbol_strings_parse(idx in prop::collection::vec(0..1000usize, 1..6)) {
        let table = bundled::symbol_table();
        let symbols: Vec<&str> = table.symbols().map(|s| s.0).collect();
        let text: String = idx.iter().map(|i| symbols[i % symbols.len()]).collect();
        let phones = table.parse_word_transcription(&text).unwrap();
        prop_assert!(!phones.is_empty());
        prop_assert!(phones.len() <= text.chars().count());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    /// The before condition only sees naive parameters and test words.
    #[test]
    fn before_ignores_training_words(swaps in prop::collection::vec((0..35usize, 0..35usize), 1..10)) {
        let table = bundled::symbol_table();
        let lex = bundled::experiment_lexicon();
        let t = SpeakerTranscript::parse("French8", bundled::transcript("French8").unwrap(), &table).unwrap();
        let mut scrambled = t.clone();
        for (a, b) in swaps {
            let obs = scrambled.entries[a].observed.clone();
            scrambled.entries[a].observed = scrambled.entries[b].observed.clone();
            scrambled.entries[b].observed = obs;
        }
        let x = harness::evaluate_speaker(&t, &lex, Constants::default()).unwrap();
        let y = harness::evaluate_speaker(&scrambled, &lex, Constants::default()).unwrap();
        prop_assert_eq!(x.before, y.before);
    }
}

#[test]
fn snapshot_round_trip_is_value_identical() {
    let (_, params) = paragraph_params();
    let back = ModelParams::from_json(&params.to_json()).unwrap();
    assert_eq!(back, params);
    let adapted = harness::evaluate_speaker(
        &harness::bundled_transcripts()
            .into_iter()
            .find(|t| t.speaker == "French8")
            .unwrap(),
        &bundled::experiment_lexicon(),
        Constants::default(),
    )
    .unwrap()
    .adapted;
    assert_eq!(ModelParams::from_json(&adapted.to_json()).unwrap(), adapted);
}

#[test]
fn snapshot_schema_errors() {
    let (_, params) = paragraph_params();
    let json = params.to_json();
    assert!(ModelParams::from_json("{}").is_err());
    assert!(ModelParams::from_json(&json.replace("accent-params/1", "accent-params/9")).is_err());
    let mut v: serde_json::Value = serde_json::from_str(&json).unwrap();
    v["emit_ins"][0] = serde_json::json!(0.5);
    assert!(ModelParams::from_json(&v.to_string()).is_err());
}

#[test]
fn french8_adaptation_moves_eth_towards_d() {
    let lex = bundled::experiment_lexicon();
    let table = bundled::symbol_table();
    let t = SpeakerTranscript::parse("French8", bundled::transcript("French8").unwrap(), &table).unwrap();
    let naive = ModelParams::naive(&lex.inventory(), &space());
    let e = harness::evaluate_speaker_with(&t, &lex, &naive).unwrap();
    let eth = table.parse_word_transcription("ð").unwrap()[0];
    let d = table.parse_word_transcription("d").unwrap()[0];
    assert_eq!(e.counts.productions(&eth, &d), 3);
    let before = naive.emit(&eth).unwrap()[d.index()];
    let after = e.adapted.emit(&eth).unwrap()[d.index()];
    assert!(after > 2.0 * before, "{before} -> {after}");
    assert!(e.after.rate > e.before.rate);
}
