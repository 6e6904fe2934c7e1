use std::collections::{BTreeMap, BTreeSet};

use dng_core::audit::{corpus, verify, Family, WinFilter, DEFAULT_AUDIT_BUDGET};
use dng_core::closed_forms::deficiency_classes;
use dng_core::game::nim_game;
use dng_core::structure::{
    maximal_nongenerating, option_relation, solve_types, solve_types_with, IntersectionLattice, OptionMethod,
};
use dng_core::Subset;

#[test]
fn option_methods_agree() {
    let mut games = 0;
    for (family, max_n) in [
        (Family::TreeVertex, 6),
        (Family::TreeEdge, 5),
        (Family::Affine1d, 6),
        (Family::Affine2d, 4),
    ] {
        for cg in corpus(family, max_n) {
            for spec in cg.games(WinFilter::All) {
                let Ok(lattice) = IntersectionLattice::for_game(&spec) else { continue };
                let a = option_relation(&lattice, &spec, OptionMethod::Exhaustive);
                let b = option_relation(&lattice, &spec, OptionMethod::Representative);
                assert_eq!(a, b, "{}", cg.encode(spec.winning()));
                let da = solve_types_with(&lattice, &spec, OptionMethod::Exhaustive).unwrap();
                assert_eq!(da.game_nim(), nim_game(&spec).unwrap());
                games += 1;
            }
        }
    }
    assert!(games > 1000);
}

#[test]
fn deficiency_drops_by_one_along_options() {
    for cg in corpus(Family::TreeVertex, 8) {
        for spec in cg.games(WinFilter::All).filter(|s| s.winning().len() >= 2) {
            let classes = deficiency_classes(&spec).unwrap();
            let delta: BTreeMap<Subset, usize> = classes
                .iter()
                .filter(|c| !c.a.is_empty())
                .map(|c| (c.m_a, c.delta))
                .collect();
            let lattice = IntersectionLattice::for_game(&spec).unwrap();
            let members: BTreeSet<Subset> = lattice.members().iter().copied().collect();
            assert_eq!(members, delta.keys().copied().collect(), "{}", cg.encode(spec.winning()));
            let diagram = solve_types(&lattice, &spec).unwrap();
            for &(i, j) in diagram.edges() {
                let (from, to) = (diagram.classes()[i], diagram.classes()[j]);
                assert_eq!(delta[&to] + 1, delta[&from], "{}", cg.encode(spec.winning()));
            }
        }
    }
}

#[test]
fn single_winner_family_is_the_components() {
    for cg in corpus(Family::TreeVertex, 8).into_iter().filter(|cg| cg.size() > 1) {
        let g = &cg.geometry;
        for w in 0..g.size() {
            let spec = dng_core::GameSpec::new(g.clone(), Subset::singleton(w)).unwrap();
            let family = maximal_nongenerating(&spec);
            let mut got: Vec<Subset> = family.sets().to_vec();
            got.sort();
            let mut expected = g.removal_components(w).unwrap();
            expected.sort();
            assert_eq!(got, expected, "{}", cg.encode(spec.winning()));
            for (i, a) in got.iter().enumerate() {
                for b in &got[i + 1..] {
                    assert!(a.intersection(*b).is_empty());
                }
            }
        }
    }
}

#[test]
fn extreme_winners_give_point_deletions() {
    for (family, max_n) in [(Family::Affine2d, 5), (Family::TreeVertex, 7), (Family::TreeEdge, 6)] {
        for cg in corpus(family, max_n) {
            let g = &cg.geometry;
            let ex = g.extreme_points(g.full());
            for w in ex.subsets().filter(|w| !w.is_empty()) {
                let spec = dng_core::GameSpec::new(g.clone(), w).unwrap();
                let got: BTreeSet<Subset> = maximal_nongenerating(&spec).sets().iter().copied().collect();
                let expected: BTreeSet<Subset> = w.iter().map(|v| g.full().without(v)).collect();
                assert_eq!(got, expected, "{}", cg.encode(w));
            }
        }
    }
}

#[test]
fn audits_find_no_solver_or_reduction_disagreements() {
    for (family, max_n) in [
        (Family::TreeVertex, 7),
        (Family::TreeEdge, 6),
        (Family::Affine1d, 8),
        (Family::Affine2d, 4),
    ] {
        let r = verify(family, max_n, DEFAULT_AUDIT_BUDGET).unwrap();
        assert_eq!(r.unexplained(), 0, "{family}");
        assert_eq!(r.quotient_checks, r.instances);
        assert!(r
            .entries
            .iter()
            .all(|e| e.case_id != "quotient" && !e.case_id.starts_with("reduction.") && !e.case_id.starts_with("extreme.")));
    }
}
