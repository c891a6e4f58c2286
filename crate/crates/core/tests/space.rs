mod common;

use std::sync::Arc;

use ionad::fincat::catalog::enumerate_categories;
use ionad::fincat::{FinCategory, PointFamily};
use ionad::morphism::specialisation_category;
use ionad::space::{
    alexandroff, enumerate_topologies, equivariant, interior_operator, lambda, sigma, FinTopSpace,
    GroupAction,
};
use proptest::prelude::*;

/// Preorders on `n` points, counted over all relations.
fn count_preorders(n: usize) -> usize {
    let cells = n * n;
    (0u64..1 << cells)
        .filter(|&r| {
            let le = |a: usize, b: usize| r & (1 << (a * n + b)) != 0;
            (0..n).all(|a| le(a, a))
                && (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| !le(a, b) || !le(b, c) || le(a, c))))
        })
        .count()
}

#[test]
fn topology_counts_match_preorder_counts() {
    for n in 0..=4 {
        assert_eq!(enumerate_topologies(n).len(), count_preorders(n), "{n} points");
    }
    let counts: Vec<usize> = (0..=4).map(|n| enumerate_topologies(n).len()).collect();
    assert_eq!(counts, vec![1, 1, 4, 29, 355]);
}

#[test]
fn lambda_sigma_is_the_identity_on_small_spaces() {
    for n in 0..=3 {
        for space in enumerate_topologies(n) {
            assert_eq!(lambda(&sigma(&space)).unwrap(), space);
        }
    }
}

#[test]
fn interior_operator_laws_on_the_corpus() {
    for (name, ion) in common::corpus() {
        let n = ion.points();
        let full = (1u64 << n) - 1;
        let interior: Vec<u64> = (0..=full).map(|u| interior_operator(&ion, u).unwrap()).collect();
        assert_eq!(interior[full as usize], full, "{name}");
        for u in 0..=full {
            let i = interior[u as usize];
            assert_eq!(i & !u, 0, "{name}: deflationary");
            assert_eq!(interior[i as usize], i, "{name}: idempotent");
            for v in 0..=full {
                let j = interior[v as usize];
                assert_eq!(interior[(u & v) as usize], i & j, "{name}: meets");
                if u & !v == 0 {
                    assert_eq!(i & !j, 0, "{name}: monotone");
                }
            }
        }
    }
}

#[test]
fn alexandroff_opens_are_the_up_closed_sets() {
    for cat in enumerate_categories(3, 5) {
        let n = cat.object_count();
        let space = lambda(&alexandroff(&cat)).unwrap();
        let up_closed = |u: u64| {
            (0..n).all(|x| u & (1 << x) == 0 || (0..n).all(|y| !cat.reachable(x, y) || u & (1 << y) != 0))
        };
        let expected: Vec<u64> = (0..1u64 << n).filter(|&u| up_closed(u)).collect();
        assert_eq!(space.opens(), expected.as_slice(), "{cat:?}");
    }
}

#[test]
fn specialisation_category_of_a_space_is_its_preorder() {
    for n in 1..=3 {
        for space in enumerate_topologies(n) {
            let v = specialisation_category(&sigma(&space)).unwrap();
            let le = space.specialisation_preorder();
            for x in 0..n {
                for y in 0..n {
                    assert_eq!(v.category.hom(x, y).len(), usize::from(le[x][y]), "{space:?}");
                }
            }
        }
    }
}

#[test]
fn trivial_actions_recover_the_space() {
    let trivial = Arc::new(FinCategory::terminal());
    for n in 0..=3 {
        for space in enumerate_topologies(n) {
            let action = GroupAction::new(trivial.clone(), space.clone(), vec![(0..n).collect()]).unwrap();
            let ion = equivariant(&action);
            assert_eq!(lambda(&ion).unwrap(), space);
            let spatial = sigma(&space);
            for a in ionad::site::small_families(n, 2) {
                assert_eq!(
                    ion.interior(&a).unwrap().carrier(),
                    spatial.interior(&a).unwrap().carrier()
                );
            }
        }
    }
}

#[test]
fn equivariant_opens_are_the_invariant_opens() {
    for action in common::z2_actions() {
        let space = action.space();
        let expected: Vec<u64> = space
            .opens()
            .iter()
            .copied()
            .filter(|&u| (0..action.group().morphism_count()).all(|g| action.translate(g, u) == u))
            .collect();
        assert_eq!(lambda(&equivariant(&action)).unwrap().opens(), expected.as_slice());
    }
}

#[test]
fn equivariant_bases_are_flat() {
    let z3 = Arc::new(FinCategory::cyclic_group(3));
    let rotation = GroupAction::new(
        z3,
        FinTopSpace::discrete(3),
        vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]],
    )
    .unwrap();
    let ion = equivariant(&rotation);
    assert!(ion.basis().is_flat());
    assert_eq!(lambda(&ion).unwrap(), FinTopSpace::indiscrete(3));
    for action in common::z2_actions() {
        assert!(equivariant(&action).basis().is_flat());
    }
}

#[test]
fn invalid_spaces_and_actions_are_rejected() {
    assert!(FinTopSpace::new(2, [0b00, 0b01, 0b10]).is_err());
    assert!(FinTopSpace::new(2, [0b01, 0b11]).is_err());
    let z2 = Arc::new(FinCategory::cyclic_group(2));
    // swapping the points of the Sierpiński space is not continuous
    assert!(GroupAction::new(z2, FinTopSpace::sierpinski(), vec![vec![0, 1], vec![1, 0]]).is_err());
}

#[test]
fn products_and_coproducts_of_spaces() {
    let s = FinTopSpace::sierpinski();
    let p = s.product(&s).unwrap();
    assert_eq!(p.points(), 4);
    // opens of S × S are the up-sets of the square of the two-element order
    assert_eq!(p.opens().len(), 6);
    let c = FinTopSpace::coproduct(&[s.clone(), s]).unwrap();
    assert_eq!(c.opens().len(), 9);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn spatial_interior_is_the_classical_interior(index in 0usize..29, subset in 0u64..8) {
        let space = &enumerate_topologies(3)[index];
        let ion = sigma(space);
        prop_assert_eq!(interior_operator(&ion, subset).unwrap(), space.interior(subset));
        let ia = ion.interior(&PointFamily::indicator(3, subset)).unwrap();
        prop_assert!(ia.carrier().fibers().iter().all(|&k| k <= 1));
    }

    #[test]
    fn continuity_matches_preimages(i in 0usize..29, j in 0usize..29, map in proptest::collection::vec(0usize..3, 3)) {
        let spaces = enumerate_topologies(3);
        let (s, t) = (&spaces[i], &spaces[j]);
        let oracle = t.opens().iter().all(|&v| {
            let pre = (0..3).filter(|&x| v & (1 << map[x]) != 0).fold(0u64, |acc, x| acc | (1 << x));
            s.opens().contains(&pre)
        });
        prop_assert_eq!(s.is_continuous(t, &map), oracle);
    }
}
