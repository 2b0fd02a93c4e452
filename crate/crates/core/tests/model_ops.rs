use fdes_core::model::validation::ValidationIssue;
use fdes_core::possibility::{degree_max, degree_min, max_min_compose};
use fdes_core::{
    A2Status, DegreeProfile, EventMatrix, FdesModel, FuzzyStateVec, ModelDocument, Trace,
};
use fdes_testkit::{deg, enumerate_l_a, fixture, fixture_text};

fn v(xs: &[&str]) -> FuzzyStateVec {
    FuzzyStateVec::new(xs.iter().map(|x| deg(x)).collect())
}

fn traces(m: &FdesModel, list: &[&str]) -> Vec<Trace> {
    let mut out: Vec<Trace> = list.iter().map(|s| m.parse_trace(s).unwrap()).collect();
    out.sort();
    out
}

fn profile(m: &FdesModel, values: &[&str]) -> DegreeProfile {
    assert_eq!(values.len(), m.failure_type_count());
    DegreeProfile::new(values.iter().map(|x| deg(x)).collect())
}

#[test]
fn compose_reproduces_example_two() {
    let m = fixture("example2");
    let alpha = m.event_id("alpha").unwrap();
    let q0 = m.vector(m.initial());
    assert_eq!(
        max_min_compose(q0, m.matrix(alpha)).unwrap(),
        v(&["0.4", "0.9", "0.4"])
    );
    assert_eq!(max_min_compose(q0, &EventMatrix::identity(3)).unwrap(), *q0);
    assert_eq!(
        max_min_compose(&FuzzyStateVec::zeros(3), m.matrix(alpha)).unwrap(),
        FuzzyStateVec::zeros(3)
    );
}

#[test]
fn degree_folds() {
    assert_eq!(
        degree_min([deg("0.8"), deg("0.5"), deg("0.7")]),
        Some(deg("0.5"))
    );
    assert_eq!(degree_max([deg("0.2"), deg("0.1")]), Some(deg("0.2")));
    assert_eq!(degree_min([deg("0.4")]), Some(deg("0.4")));
    assert_eq!(degree_min(std::iter::empty()), None);
}

#[test]
fn example_vectors_match() {
    let m1 = fixture("example1");
    for (q, want) in [
        ("q1", ["0.8", "0.4"]),
        ("q2", ["0.4", "0.8"]),
        ("q3", ["0.8", "0.6"]),
        ("q4", ["0.4", "0.4"]),
    ] {
        assert_eq!(m1.vector(m1.state_id(q).unwrap()), &v(&want), "{q}");
    }
    let m2 = fixture("example2");
    let run = |s: &str| m2.run(&m2.parse_trace(s).unwrap()).cloned();
    assert_eq!(run("alpha"), Some(v(&["0.4", "0.9", "0.4"])));
    assert_eq!(run("alpha,beta"), Some(v(&["0.9", "0.4", "0.4"])));
    assert_eq!(run("alpha,beta,gamma"), Some(v(&["0.9", "0.9", "0.4"])));
    assert_eq!(run("beta"), Some(v(&["0.4", "0.1", "0"])));
    assert_eq!(run("beta,alpha"), Some(v(&["0.4", "0.4", "0.4"])));
    assert_eq!(run(""), Some(v(&["0.9", "0.1", "0"])));
    assert_eq!(run("gamma"), None);
}

#[test]
fn validation_reports() {
    for name in ["example1", "example2", "example3", "example4"] {
        assert!(fixture(name).validate().is_valid(), "{name}");
    }

    let bad_vector = fixture_text("example2").replace(
        r#""q1": ["0.4", "0.9", "0.4"]"#,
        r#""q1": ["0.5", "0.9", "0.4"]"#,
    );
    let doc = ModelDocument::from_json(&bad_vector).unwrap();
    let report = FdesModel::from_document(&doc).unwrap().validate();
    let edges: Vec<_> = report
        .issues
        .iter()
        .filter_map(|i| match i {
            ValidationIssue::VectorInconsistent {
                source,
                event,
                target,
                ..
            } => Some((source.as_str(), event.as_str(), target.as_str())),
            _ => None,
        })
        .collect();
    assert!(edges.contains(&("q0", "alpha", "q1")), "{report}");

    let bound = fixture_text("example2").replace(
        r#""observability": "0.6",
      "failures": { "f1": "0.1" }"#,
        r#""observability": "0.6",
      "failures": { "f1": "0.5" }"#,
    );
    let doc = ModelDocument::from_json(&bound).unwrap();
    let report = FdesModel::from_document(&doc).unwrap().validate();
    assert!(
        report
            .issues
            .iter()
            .any(|i| matches!(i, ValidationIssue::FailureBound { event, .. } if event == "alpha")),
        "{report}"
    );
}

#[test]
fn positivity_and_degrees() {
    let m = fixture("example2");
    assert!(m.language_positive(&m.parse_trace("alpha,beta").unwrap()));
    assert!(!m.language_positive(&m.parse_trace("gamma").unwrap()));
    assert!(m.language_positive(&Trace::empty()));
    assert_eq!(
        m.obs_degree_of_trace(&m.parse_trace("alpha,beta,gamma").unwrap()),
        deg("0.4")
    );
    assert_eq!(m.obs_degree_of_trace(&Trace::empty()), deg("0"));
    assert_eq!(
        m.obs_degree_of_trace(&m.parse_trace("gamma").unwrap()),
        deg("0.7")
    );
    assert_eq!(
        m.failure_profile(&m.parse_trace("beta,alpha").unwrap()),
        profile(&m, &["0.2"])
    );
    assert_eq!(m.failure_profile(&Trace::empty()), profile(&m, &["0"]));

    let m4 = fixture("example4");
    let f1 = m4.failure_type_id("f1").unwrap();
    assert_eq!(
        m4.failure_profile(&m4.parse_trace("beta,gamma").unwrap())
            .get(f1),
        deg("0.3")
    );
}

#[test]
fn maximal_observable_and_qualification() {
    let m2 = fixture("example2");
    let names = |m: &FdesModel| {
        m.maximal_observable_set()
            .iter()
            .map(|&e| m.event_name(e).to_string())
            .collect::<Vec<_>>()
    };
    assert_eq!(names(&m2), ["gamma"]);
    assert_eq!(names(&fixture("example1")), ["alpha"]);

    let flat = fixture_text("example2")
        .replace("\"0.6\"", "\"0.4\"")
        .replace("\"0.7\"", "\"0.4\"");
    let flat = FdesModel::from_document(&ModelDocument::from_json(&flat).unwrap()).unwrap();
    assert_eq!(names(&flat), ["alpha", "beta", "gamma"]);

    let e = |n: &str| m2.event_id(n).unwrap();
    assert!(m2.qualifies(e("alpha"), e("beta")));
    assert!(!m2.qualifies(e("beta"), e("beta")));
    assert!(m2.qualifies(e("gamma"), e("gamma")));
}

#[test]
fn projections() {
    let m2 = fixture("example2");
    let beta = m2.event_id("beta").unwrap();
    let s = m2.parse_trace("alpha,beta,gamma,alpha").unwrap();
    let p = m2.sigma_project(&s, beta);
    assert_eq!(p, m2.parse_trace("alpha,gamma,alpha").unwrap());
    assert_eq!(m2.sigma_project(&p, beta), p);

    let m1 = fixture("example1");
    let b1 = m1.event_id("beta").unwrap();
    let y = m1.sigma_project(&m1.parse_trace("alpha,beta,tau,theta").unwrap(), b1);
    assert_eq!(y, m1.parse_trace("alpha,theta").unwrap());

    let five = m1.inverse_project_bounded(&y, b1, 5);
    assert_eq!(
        five,
        traces(
            &m1,
            &[
                "alpha,beta,tau,theta",
                "alpha,beta,beta,theta",
                "alpha,beta,gamma,theta"
            ]
        )
    );
    // One more θ changes the projection, so a longer bound adds nothing for
    // this y; the k=2 family belongs to y·θ.
    assert_eq!(m1.inverse_project_bounded(&y, b1, 6), five);
    let y2 = m1.parse_trace("alpha,theta,theta").unwrap();
    assert_eq!(
        m1.inverse_project_bounded(&y2, b1, 6),
        traces(
            &m1,
            &[
                "alpha,beta,tau,theta,theta",
                "alpha,beta,beta,theta,theta",
                "alpha,beta,gamma,theta,theta"
            ]
        )
    );
    assert_eq!(
        m1.inverse_project_bounded(&Trace::empty(), b1, 0),
        vec![Trace::empty()]
    );
}

#[test]
fn psi_sets() {
    let m1 = fixture("example1");
    let beta = m1.event_id("beta").unwrap();
    let f2 = m1.failure_type_id("f2").unwrap();
    assert_eq!(
        m1.psi_bounded(beta, f2, 4),
        traces(
            &m1,
            &[
                "alpha,beta",
                "alpha,beta,beta",
                "alpha,beta,tau",
                "alpha,beta,gamma"
            ]
        )
    );
    assert!(m1.psi_bounded(beta, f2, 0).is_empty());

    let m2 = fixture("example2");
    let gamma = m2.event_id("gamma").unwrap();
    let f1 = m2.failure_type_id("f1").unwrap();
    assert_eq!(
        m2.psi_bounded(gamma, f1, 3),
        traces(&m2, &["alpha,beta,gamma"])
    );
}

#[test]
fn silent_closures() {
    let m = fixture("example2");
    let (q0, q1, q4, q5) = ["q0", "q1", "q4", "q5"]
        .map(|q| m.state_id(q).unwrap())
        .into();
    let e = |n: &str| m.event_id(n).unwrap();
    let closure = m.silent_closure(q0, e("beta"));
    assert_eq!(
        closure.into_iter().collect::<Vec<_>>(),
        vec![(q0, profile(&m, &["0"])), (q4, profile(&m, &["0.2"]))]
    );
    let closure = m.silent_closure(q4, e("alpha"));
    assert_eq!(
        closure.into_iter().collect::<Vec<_>>(),
        vec![(q4, profile(&m, &["0"])), (q5, profile(&m, &["0.1"]))]
    );

    let m1 = fixture("example1");
    let q3 = m1.state_id("q3").unwrap();
    let alpha = m1.event_id("alpha").unwrap();
    assert_eq!(
        m1.silent_closure(q3, alpha).len(),
        1 + 1,
        "θ self-loop adds one (q3, θ-profile) node"
    );
    let q0_1 = m1.initial();
    let theta = m1.event_id("theta").unwrap();
    assert_eq!(
        m1.silent_closure(q0_1, theta)
            .into_iter()
            .collect::<Vec<_>>(),
        vec![(q0_1, profile(&m1, &["0", "0"]))]
    );

    let via = m.reach_via_l_a(q0, e("beta"), e("alpha")).unwrap();
    assert_eq!(
        via.into_iter().collect::<Vec<_>>(),
        vec![(q1, profile(&m, &["0.1"])), (q5, profile(&m, &["0.2"]))]
    );
    let q3 = m.state_id("q3").unwrap();
    let via = m.reach_via_l_a(q1, e("beta"), e("gamma")).unwrap();
    assert_eq!(
        via.into_iter().collect::<Vec<_>>(),
        vec![(q3, profile(&m, &["0.3"]))]
    );
    assert!(m
        .reach_via_l_a(q5, e("beta"), e("gamma"))
        .unwrap()
        .is_empty());
    assert!(m.reach_via_l_a(q0, e("beta"), e("beta")).is_err());
}

#[test]
fn reach_matches_string_enumeration() {
    for name in ["example1", "example2", "example3", "example4"] {
        let m = fixture(name);
        for sigma in m.events() {
            for a in m.events().filter(|&a| m.qualifies(a, sigma)) {
                for q in m.states() {
                    assert_eq!(
                        m.reach_via_l_a(q, sigma, a).unwrap(),
                        enumerate_l_a(&m, q, sigma, a, 6),
                        "{name} q={} σ={} a={}",
                        m.state_name(q),
                        m.event_name(sigma),
                        m.event_name(a)
                    );
                }
            }
        }
    }
}

#[test]
fn liveness() {
    assert!(fixture("example2").check_a1());
    assert!(fixture("example3").check_a1());
    let dead = fixture_text("example2").replace(
        r#",
    ["q5", "alpha", "q5"]"#,
        "",
    );
    let dead = FdesModel::from_json(&dead).unwrap();
    assert!(!dead.check_a1());
}

#[test]
fn unobserved_runs() {
    let m3 = fixture("example3");
    assert_eq!(m3.check_a2(m3.event_id("tau").unwrap()), A2Status::Strict);
    let m2 = fixture("example2");
    assert_eq!(
        m2.check_a2(m2.event_id("alpha").unwrap()),
        A2Status::Vacuous
    );
    let m1 = fixture("example1");
    assert_eq!(
        m1.check_a2(m1.event_id("theta").unwrap()),
        A2Status::Vacuous
    );

    // An α self-loop at q3 (q3 ⊙ α = q3) gives the θ loop a qualifying exit.
    let mutant = fixture_text("example1").replace(
        r#"["q3", "theta", "q3"]"#,
        r#"["q3", "theta", "q3"], ["q3", "alpha", "q3"]"#,
    );
    let mutant = FdesModel::from_json(&mutant).unwrap();
    let theta = mutant.event_id("theta").unwrap();
    let check = mutant.check_a2_detailed(theta);
    assert_eq!(check.status, A2Status::Violated);
    assert_eq!(mutant.format_cycle(&check.cycle.unwrap()), "q3 -theta-> q3");
}

#[test]
fn json_round_trip() {
    for name in ["example1", "example2", "example3", "example4"] {
        let m = fixture(name);
        let again = FdesModel::from_json(&m.to_json_pretty()).unwrap();
        assert_eq!(again.to_document(), m.to_document(), "{name}");
    }
}
