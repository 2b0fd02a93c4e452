use fdes_core::verdict::{check_wrt, failure_events, oracle_check};
use fdes_core::{A2Status, Diagnoser, FailureTypeId, OracleBounds, OracleOutcome, Trace};
use fdes_testkit::properties::{
    cycle_certainty_uniform, cycle_labels_agree, diagnosers, edges_follow_propagation,
    states_match_strings,
};
use fdes_testkit::{fixture, random_fuzzy_model};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const EXAMPLES: [&str; 4] = ["example1", "example2", "example3", "example4"];

#[test]
fn edges_follow_propagation_on_examples() {
    for name in EXAMPLES {
        let m = fixture(name);
        for d in diagnosers(&m) {
            edges_follow_propagation(&m, &d).unwrap();
        }
    }
}

#[test]
fn property_5_literal_on_examples() {
    for name in EXAMPLES {
        let m = fixture(name);
        for d in diagnosers(&m) {
            cycle_labels_agree(&m, &d).unwrap();
            cycle_certainty_uniform(&m, &d).unwrap();
        }
    }
}

/// Diagnoser states against every string of length at most 10.
#[test]
fn properties_2_to_4_by_enumeration() {
    for name in EXAMPLES {
        let m = fixture(name);
        for d in diagnosers(&m) {
            states_match_strings(&m, &d, 10).unwrap_or_else(|e| panic!("{name}: {e}"));
        }
    }
}

#[test]
fn rebuilding_is_deterministic() {
    for name in EXAMPLES {
        let m = fixture(name);
        for s in m.events() {
            if let Ok(d) = Diagnoser::build(&m, s) {
                assert_eq!(d, Diagnoser::build(&m, s).unwrap());
                let all: Vec<FailureTypeId> = m.failure_types().collect();
                assert_eq!(
                    d.to_dot(&m, &all),
                    Diagnoser::build(&m, s).unwrap().to_dot(&m, &all)
                );
            }
        }
    }
}

#[test]
fn random_models_properties() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let bounds = OracleBounds::default();
    let mut definite = 0;
    for n in 0..200 {
        let m = random_fuzzy_model(&mut rng);
        for d in diagnosers(&m) {
            edges_follow_propagation(&m, &d).unwrap_or_else(|e| panic!("model {n}: {e}"));
            cycle_certainty_uniform(&m, &d).unwrap_or_else(|e| panic!("model {n}: {e}"));
        }
        for i in m.failure_types() {
            for s in failure_events(&m, i) {
                if m.check_a2(s) != A2Status::Strict {
                    continue;
                }
                let theorem = check_wrt(&m, s, i).unwrap().diagnosable.unwrap();
                match oracle_check(&m, s, i, bounds).unwrap() {
                    OracleOutcome::HoldsWithDelay(_) => {
                        assert!(theorem, "model {n}\n{}", m.to_json_pretty())
                    }
                    OracleOutcome::FailsWithWitness(_) => {
                        assert!(!theorem, "model {n}\n{}", m.to_json_pretty())
                    }
                    OracleOutcome::Inconclusive(_) => continue,
                }
                definite += 1;
            }
        }
    }
    assert!(definite > 100, "only {definite} definite oracle answers");
}

mod invariants {
    use fdes_testkit::{random_model, RandomShape};
    use proptest::prelude::*;
    use rand::SeedableRng;

    use super::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn language_algebra(seed in any::<u64>()) {
            let m = random_model(&mut ChaCha8Rng::seed_from_u64(seed), RandomShape::default(), false);
            let mut strings = Vec::new();
            m.for_each_positive_trace(4, |s, _| { strings.push(Trace::new(s.to_vec())); true });
            for s in strings.iter().take(12) {
                for t in strings.iter().take(12) {
                    let st = s.concat(t);
                    if let (Some(q), Some(end)) = (m.run_from(m.initial(), s), m.run_from(m.initial(), &st)) {
                        prop_assert_eq!(m.run_from(q, t), Some(end));
                    }
                    prop_assert_eq!(m.failure_profile(&st), m.failure_profile(s).join(&m.failure_profile(t)));
                    prop_assert_eq!(
                        m.obs_degree_of_trace(&st),
                        m.obs_degree_of_trace(s).min(m.obs_degree_of_trace(t))
                    );
                }
                for sigma in m.events() {
                    let p = m.sigma_project(s, sigma);
                    prop_assert!(p.len() <= s.len());
                    prop_assert_eq!(m.sigma_project(&p, sigma), p);
                }
            }
        }

        #[test]
        fn closure_is_bounded(seed in any::<u64>()) {
            let m = random_model(&mut ChaCha8Rng::seed_from_u64(seed), RandomShape::default(), false);
            let limit = m.state_count() * 7usize.pow(m.failure_type_count() as u32);
            for q in m.states() {
                for sigma in m.events() {
                    prop_assert!(m.silent_closure(q, sigma).len() <= limit);
                }
            }
        }
    }
}

/// On crisp models with no silent cycles the fuzzy verdict per type
/// coincides with classical diagnosability.
#[test]
fn crisp_models_match_classical_diagnosability() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let (mut yes, mut no) = (0, 0);
    for n in 0..20 {
        let m = fdes_testkit::random_crisp_model(&mut rng);
        for i in m.failure_types() {
            let fuzzy = fdes_core::verdict::check_type(&m, i)
                .aggregate
                .expect("A2 holds");
            assert_eq!(
                fuzzy,
                fdes_testkit::classical_diagnosable(&m, i),
                "model {n}\n{}",
                m.to_json_pretty()
            );
            if fuzzy {
                yes += 1;
            } else {
                no += 1;
            }
        }
    }
    assert!(yes > 0 && no > 0, "{yes} diagnosable, {no} not");
}
