use bipartid::algebra::PochhammerSpec;
use bipartid::automata::*;
use bipartid::partitions::{enumerate_2colored, gen_fun, Conditions, TwoColoredPartition};

const GOLDEN_DFA: &str = include_str!("../data/golden/bir_dfa.json");
const GOLDEN_SYSTEM: &str = include_str!("../data/golden/bir_system.txt");

fn golden_dfa() -> Dfa {
    Dfa::from_json(&serde_json::from_str(GOLDEN_DFA).unwrap()).unwrap()
}

fn built() -> Dfa {
    build_avoidance_dfa(&bir_forbidden_words()).unwrap()
}

#[test]
fn built_automaton_matches_printed_table() {
    let g = golden_dfa();
    let b = built();
    assert_eq!(b, g.canonical());
    assert!(b.isomorphism(&g).is_some());
    assert_eq!(g.minimize(), b);
}

#[test]
fn transfer_matrix_matches_printed_system() {
    let g = golden_dfa();
    let b = built();
    let iso = b.isomorphism(&g).unwrap();
    let sys = derive_transfer_system(&b);
    let (names, rows) = parse_system_table(GOLDEN_SYSTEM).unwrap();
    let label = |s: usize| Dfa::state_name(iso[s]);
    let printed_index = |s: usize| names.iter().position(|n| *n == label(s)).unwrap();
    assert_eq!(sys.states.len(), 5);
    for (i, &u) in sys.states.iter().enumerate() {
        for (j, &v) in sys.states.iter().enumerate() {
            assert_eq!(sys.matrix[i][j], rows[printed_index(u)][printed_index(v)], "entry ({}, {})", label(u), label(v));
        }
    }
}

fn state_for(name: &str) -> usize {
    let g = golden_dfa();
    let iso = built().isomorphism(&g).unwrap();
    let target = g.to_json().states.iter().position(|s| s == name).unwrap();
    iso.iter().position(|&t| t == target).unwrap()
}

#[test]
fn start_language_is_bir_and_q2_language_is_birp() {
    let n = 26;
    let sys = derive_transfer_system(&built());
    let family = sys.solve(n).unwrap();
    assert_eq!(sys.residual(&family).unwrap(), None);
    let row = |name: &str| sys.states.iter().position(|&s| s == state_for(name)).unwrap();
    let bir = gen_fun(&enumerate_2colored(n as u32 - 1, Conditions::BIR), n).unwrap();
    let birp = gen_fun(&enumerate_2colored(n as u32 - 1, Conditions::BIRP), n).unwrap();
    assert_eq!(family[row("q0")], bir);
    assert_eq!(family[row("q2")], birp);
    assert_eq!(bir.at_x_one(), PochhammerSpec::bir().expand(n).unwrap());
    assert_eq!(birp.at_x_one(), PochhammerSpec::birp().expand(n).unwrap());
    assert!(family[row("q0")].slices().values().all(|s| s.coeffs().iter().all(|c| c.sign() != num_bigint::Sign::Minus)));
}

#[test]
fn avoidance_matches_conditions_up_to_18() {
    let words = bir_forbidden_words();
    for lambda in enumerate_2colored(18, Conditions::NONE) {
        match encode(&lambda) {
            Ok(w) => {
                assert_eq!(decode(&w), lambda);
                let in_bir = bipartid::partitions::check_condition(&lambda, Conditions::BIR);
                assert_eq!(in_bir, !contains_factor(&w, &words), "{lambda} encoded as {w}");
            }
            // Non-encodable partitions have a block that is no block image,
            // which already breaks the difference conditions.
            Err(_) => assert!(!bipartid::partitions::check_condition(&lambda, Conditions::BIR), "{lambda}"),
        }
    }
}

#[test]
fn decode_is_injective_on_short_words() {
    let mut seen = std::collections::HashMap::<TwoColoredPartition, Word>::new();
    let letters: Vec<Letter> = Letter::all().collect();
    for x in &letters {
        for y in &letters {
            for z in &letters {
                let w = Word(vec![*x, *y, *z]).trimmed();
                if let Some(prev) = seen.insert(decode(&w), w.clone()) {
                    assert_eq!(prev, w);
                }
            }
        }
    }
}

#[test]
fn order_one_language_is_one() {
    let sys = derive_transfer_system(&built());
    assert_eq!(language_series(&sys, 0, 1).unwrap(), bipartid::algebra::BiSeries::one(1));
}
