mod common;

use std::collections::BTreeSet;

use common::oracle::{self, Graph, Kind};
use common::{fired, gen, mutants};
use fpd_core::rules::STATE_TO_STATE_MESSAGE;
use fpd_core::{
    check_rule, fixtures, validate, ConnectorKind, ConnectorNode, Flow, Model, RuleConfig, RuleId, Severity,
};
use proptest::prelude::*;

#[test]
fn fixtures_are_clean() {
    assert!(validate(&fixtures::collar(), &RuleConfig::default()).is_empty());
    assert!(validate(&fixtures::collar_decomposed(), &RuleConfig::default()).is_empty());
}

#[test]
fn state_link_message() {
    let m = mutants::all().into_iter().find(|m| m.target == RuleId::R1).unwrap();
    let r1 = check_rule(&m.model, RuleId::R1);
    assert_eq!(r1.len(), 1);
    assert_eq!(r1[0].message, STATE_TO_STATE_MESSAGE);
    assert_eq!(r1[0].elements, ["bad", "st1", "st4"]);
    assert_eq!(r1[0].process_id, "proc1");
}

#[test]
fn mutation_suite() {
    let all = mutants::all();
    let targets: BTreeSet<RuleId> = all.iter().map(|m| m.target).collect();
    assert_eq!(targets.len(), 13);
    for m in all {
        assert!(m.expected.contains(&m.target));
        assert_eq!(fired(&m.model), m.expected, "{:?}: {}", m.target, m.description);
        assert!(!check_rule(&m.model, m.target).is_empty());
    }
}

#[test]
fn r9_reported_under_parent() {
    let m = mutants::all().into_iter().find(|m| m.target == RuleId::R9).unwrap();
    let d = check_rule(&m.model, RuleId::R9);
    assert_eq!(d.len(), 1);
    assert_eq!(d[0].process_id, "collar_screwing");
    assert_eq!(d[0].elements[0], "acs");
}

#[test]
fn unreachable_connector_cycle_is_flagged() {
    let mut p = fixtures::collar().into_processes().remove(0);
    p.connectors.push(ConnectorNode::new("c1", "", ConnectorKind::Fork));
    p.connectors.push(ConnectorNode::new("c2", "", ConnectorKind::Join));
    p.flows.push(Flow::new("x1", "c1", "c2"));
    p.flows.push(Flow::new("x2", "c2", "c1"));
    let model = Model::build(vec![p]).unwrap();
    let d = check_rule(&model, RuleId::R10);
    let flagged: Vec<&str> = d.iter().map(|d| d.elements[0].as_str()).collect();
    assert_eq!(flagged, ["c1", "c2"]);
}

#[test]
fn isolated_connector_is_not_an_alternation_problem() {
    let mut p = fixtures::collar().into_processes().remove(0);
    p.connectors.push(ConnectorNode::new("c", "", ConnectorKind::Merge));
    let model = Model::build(vec![p]).unwrap();
    assert!(check_rule(&model, RuleId::R10).is_empty());
    assert_eq!(check_rule(&model, RuleId::R12).len(), 1);
}

#[test]
fn r10_matches_oracle_on_three_nodes() {
    for kinds in oracle::kind_multisets(3) {
        oracle::for_each_edge_subset(&kinds, |g| {
            let engine = !check_rule(&g.to_model(), RuleId::R10).is_empty();
            assert_eq!(engine, oracle::violates(&g), "{g:?}");
        });
    }
}

#[test]
fn oracle_sanity() {
    use Kind::*;
    let g = |kinds: &[Kind], edges: &[(usize, usize)]| Graph {
        kinds: kinds.to_vec(),
        edges: edges.to_vec(),
    };
    assert!(!oracle::violates(&g(&[State, Operator], &[(0, 1)])));
    assert!(oracle::violates(&g(&[State, State], &[(0, 1)])));
    assert!(!oracle::violates(&g(&[State, Fork, Operator], &[(0, 1), (1, 2)])));
    assert!(oracle::violates(&g(&[State, Fork, Operator], &[(0, 1)])));
    assert!(oracle::violates(&g(&[State, Fork], &[(0, 1), (1, 0)])));
    assert!(oracle::violates(&g(&[Fork, Join], &[(0, 1), (1, 0)])));
    assert!(!oracle::violates(&g(&[Fork], &[])));
    assert_eq!(oracle::kind_multisets(4).len(), 4 + 10 + 20 + 35);
}

#[test]
fn diagnostics_are_sorted_and_complete() {
    for seed in 0..200 {
        let m = gen::random_model(seed);
        let d = validate(&m, &RuleConfig::default());
        assert_eq!(d, validate(&m, &RuleConfig::default()));
        for w in d.windows(2) {
            let key = |x: &fpd_core::Diagnostic| (x.process_id.clone(), x.rule, x.elements.first().cloned());
            assert!(key(&w[0]) <= key(&w[1]));
        }
        for diag in &d {
            assert!(!diag.elements.is_empty());
            assert!(m.process(&diag.process_id).is_some());
            assert_eq!(diag.severity, diag.rule.default_severity());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn config_restriction_filters(seed in any::<u64>(), mask in 0u16..(1 << 13)) {
        let m = gen::random_model(seed);
        let chosen: Vec<RuleId> = RuleId::ALL.into_iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, r)| r).collect();
        let full = validate(&m, &RuleConfig::default());
        let part = validate(&m, &RuleConfig::only(chosen.clone()));
        let filtered: Vec<_> = full.into_iter().filter(|d| chosen.contains(&d.rule)).collect();
        prop_assert_eq!(part, filtered);
    }

    #[test]
    fn severity_override_only_changes_severity(seed in any::<u64>()) {
        let m = gen::random_model(seed);
        let mut config = RuleConfig::default();
        for r in RuleId::ALL {
            config.set_severity(r, Severity::Warning);
        }
        let base = validate(&m, &RuleConfig::default());
        let over = validate(&m, &config);
        prop_assert_eq!(base.len(), over.len());
        for (a, b) in base.iter().zip(&over) {
            prop_assert_eq!((&a.rule, &a.elements, &a.message), (&b.rule, &b.elements, &b.message));
            prop_assert_eq!(b.severity, Severity::Warning);
        }
    }

    #[test]
    fn r10_matches_oracle_on_random_graphs(
        kinds in prop::collection::vec(prop::sample::select(Kind::ALL.to_vec()), 1..6),
        bits in any::<u32>(),
    ) {
        let n = kinds.len();
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b))).collect();
        let edges = pairs.into_iter().enumerate().filter(|(i, _)| bits.rotate_left(*i as u32 * 7) & 3 == 0).map(|(_, e)| e).collect();
        let g = Graph { kinds, edges };
        prop_assert_eq!(!check_rule(&g.to_model(), RuleId::R10).is_empty(), oracle::violates(&g));
    }
}

#[test]
fn every_rule_fires_on_some_random_model() {
    let mut seen = BTreeSet::new();
    for seed in 0..300 {
        seen.extend(fired(&gen::random_model(seed)));
    }
    let missing: Vec<_> = RuleId::ALL.into_iter().filter(|r| !seen.contains(r)).collect();
    assert!(missing.is_empty(), "{missing:?}");
}

#[test]
fn process_order_does_not_change_findings() {
    let mut ps = fixtures::collar_decomposed().into_processes();
    ps.reverse();
    let reversed = Model::build(ps).unwrap();
    assert!(validate(&reversed, &RuleConfig::default()).is_empty());
}
