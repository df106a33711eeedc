use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::strategy::Strategy as _;
use shelf_guess::exact::{joint_pmf, xn_pmf};
use shelf_guess::montecarlo::{simulate, SimConfig};
use shelf_guess::oracle::{conditional_by_enumeration, conditional_closed_form, enumerate_all};
use shelf_guess::shuffle::{deck_from_placements, position_matrix, PlacementSequence};
use shelf_guess::strategy::{play_game, play_totals, Classification, GuesserState, Strategy};
use shelf_guess::{Bias, ShuffledDeck};

type Q = BigRational;

fn bias_strategy() -> impl proptest::strategy::Strategy<Value = Bias> {
    (1i64..=40, 1i64..=40).prop_map(|(a, b)| {
        let (num, den) = if a <= b { (a, b) } else { (b, a) };
        Bias::ratio(num, den).unwrap()
    })
}

fn all_decks(n: usize) -> impl Iterator<Item = ShuffledDeck> {
    (0..1u64 << (n - 1)).map(move |i| deck_from_placements(n, &PlacementSequence::from_index(n, i)).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn placements_round_trip(flips in proptest::collection::vec(any::<bool>(), 0..40)) {
        let n = flips.len() + 1;
        let seq = PlacementSequence::new(flips);
        let deck = deck_from_placements(n, &seq).unwrap();
        prop_assert_eq!(deck.placements(), seq);
        prop_assert!(ShuffledDeck::from_order(deck.order().to_vec()).is_ok());
    }

    #[test]
    fn position_matrix_is_doubly_stochastic(n in 1usize..30, bias in bias_strategy()) {
        prop_assert!(position_matrix::<Q>(n, &bias).unwrap().is_doubly_stochastic());
    }

    #[test]
    fn totals_split_into_luck_and_certified(flips in proptest::collection::vec(any::<bool>(), 0..60), bias in bias_strategy()) {
        let n = flips.len() + 1;
        let deck = deck_from_placements(n, &PlacementSequence::new(flips)).unwrap();
        let record = play_game(&deck, &bias).unwrap();
        let t = record.totals;
        prop_assert_eq!(t.x, t.l + t.c);
        let hits = record.guesses.iter().zip(&record.shown).filter(|(g, s)| g == s).count();
        prop_assert_eq!(t.x, hits);
        prop_assert_eq!(play_totals(deck.order(), &Strategy::optimal(&bias).unwrap()), t);
    }

    #[test]
    fn exact_laws_are_normalised(n in 1usize..40, bias in bias_strategy()) {
        prop_assert!(xn_pmf::<Q>(n, &bias).unwrap().total().is_one());
        let joint = joint_pmf::<Q>(n, &bias).unwrap();
        prop_assert!(joint.total().is_one());
        prop_assert_eq!(joint.total_law(), xn_pmf::<Q>(n, &bias).unwrap());
    }

    #[test]
    fn simulation_is_reproducible(seed in any::<u64>(), n in 1usize..30) {
        let config = SimConfig::new(n, Bias::ratio(3, 5).unwrap(), 500, seed);
        prop_assert_eq!(simulate(&config).unwrap().summary, simulate(&config).unwrap().summary);
    }

    #[test]
    fn posterior_forms_agree(index in any::<u64>(), n in 1usize..=9, cut in 0usize..9, bias in bias_strategy()) {
        let deck = deck_from_placements(n, &PlacementSequence::from_index(n, index % (1 << (n - 1)))).unwrap();
        let prefix = &deck.order()[..cut.min(n - 1)];
        prop_assume!(!bias.is_one() || deck.is_identity());
        prop_assert_eq!(
            conditional_closed_form(n, &bias, prefix).unwrap(),
            conditional_by_enumeration(n, &bias, prefix).unwrap()
        );
    }
}

#[test]
fn every_deck_has_the_shelf_shape() {
    for n in 1..=12 {
        let mut seen = std::collections::HashSet::new();
        for deck in all_decks(n) {
            let order = deck.order();
            let peak = order.iter().position(|&x| x == n).unwrap();
            assert!(order[..=peak].windows(2).all(|w| w[0] < w[1]));
            assert!(order[peak..].windows(2).all(|w| w[0] > w[1]));
            assert!(seen.insert(order.to_vec()), "placements are not injective at n = {n}");
        }
    }
}

#[test]
fn certified_means_posterior_probability_one() {
    for bias in [Bias::half(), Bias::ratio(3, 10).unwrap(), Bias::ratio(3, 4).unwrap()] {
        let strategy = Strategy::optimal(&bias).unwrap();
        for n in 1..=12 {
            for deck in all_decks(n) {
                let mut state = GuesserState::new(n, strategy).unwrap();
                for (k, &card) in deck.order().iter().enumerate() {
                    let guess = state.next_guess().unwrap();
                    let law = if n <= 8 {
                        conditional_by_enumeration(n, &bias, &deck.order()[..k]).unwrap()
                    } else {
                        conditional_closed_form(n, &bias, &deck.order()[..k]).unwrap()
                    };
                    let certain = law.iter().any(|(l, x)| *l == guess && x.is_one());
                    let class = state.observe(card, guess).unwrap();
                    if class.is_correct() {
                        assert_eq!(class == Classification::CertifiedCorrect, certain, "deck {:?} step {k}", deck.order());
                    } else {
                        assert!(!certain);
                    }
                }
            }
        }
    }
}

#[test]
fn perfect_score_only_on_identity() {
    for bias in [Bias::half(), Bias::ratio(3, 4).unwrap()] {
        for n in 1..=12 {
            for deck in all_decks(n) {
                let x = play_game(&deck, &bias).unwrap().totals.x;
                assert_eq!(x == n, deck.is_identity(), "n = {n}, deck {:?}", deck.order());
            }
        }
    }
}

#[test]
fn enumeration_mass_is_one() {
    for bias in [Bias::half(), Bias::ratio(1, 5).unwrap(), Bias::ratio(1, 1).unwrap()] {
        for n in 1..=10 {
            let r = enumerate_all(n, &bias).unwrap();
            assert!(r.total_mass().is_one());
            assert!(r.first_card.iter().all(|x| !x.is_zero() || bias.is_one()));
        }
    }
}
