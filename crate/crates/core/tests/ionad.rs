mod common;

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use ionad::fincat::catalog::enumerate_categories;
use ionad::fincat::{
    enumerate_set_functors, FamilyMap, FinCategory, HomSpace, PointFamily, SetFunctor, Variance,
};
use ionad::ionad::probe::{basis_diagrams, cartesianness_probe, tensor_probe};
use ionad::ionad::sample::{flat_point_functors, random_family, random_flat_basis};

use ionad::ionad::{
    formal_eq, hom_presheaf, tensor_presheaf, BasisFunctor, CoalgebraViolation, FlatnessCondition,
    InteriorValue, Ionad, Term,
};
use ionad::site::small_families;
use ionad::space::{alexandroff, enumerate_topologies, sigma};
use ionad::Budget;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Classes of the coend `∫^b Hom(M b, A) × M(b)(x)`, by a plain union–find over
/// explicitly listed triples. Returns, per point, the class root of every
/// triple `(b, φ, s)` keyed by `(b, φ index, s)`.
fn coend_oracle(m: &BasisFunctor, a: &PointFamily) -> Vec<HashMap<(usize, u64, usize), usize>> {
    let cat = m.shape();
    let homs: Vec<HomSpace> = (0..m.object_count())
        .map(|b| HomSpace::new(m.value(b), a).unwrap())
        .collect();
    (0..m.points())
        .map(|x| {
            let mut index = HashMap::new();
            for (b, hom) in homs.iter().enumerate() {
                for k in 0..hom.count().unwrap() {
                    for s in 0..m.value(b).size(x) {
                        let next = index.len();
                        index.insert((b, k, s), next);
                    }
                }
            }
            let mut parent: Vec<usize> = (0..index.len()).collect();
            fn root(parent: &mut [usize], mut i: usize) -> usize {
                while parent[i] != i {
                    i = parent[i];
                }
                i
            }
            for g in 0..cat.morphism_count() {
                let (b, b2) = (cat.src(g), cat.dst(g));
                for phi in homs[b2].iter() {
                    let restricted = phi.after(m.action(g)).unwrap();
                    let k = homs[b].encode(restricted.components());
                    let k2 = homs[b2].encode(phi.components());
                    for s in 0..m.value(b).size(x) {
                        let i = root(&mut parent, index[&(b, k, s)]);
                        let j = root(&mut parent, index[&(b2, k2, m.act(g, x, s))]);
                        parent[i] = j;
                    }
                }
            }
            index
                .into_iter()
                .map(|(key, i)| (key, root(&mut parent, i)))
                .collect()
        })
        .collect()
}

/// The interior partitions triples exactly as the oracle does.
fn assert_matches_oracle(m: &BasisFunctor, a: &PointFamily) {
    let ia = InteriorValue::compute(m, a, &Budget::default()).unwrap();
    for (x, roots) in coend_oracle(m, a).iter().enumerate() {
        let mut forward: HashMap<usize, usize> = HashMap::new();
        let mut backward: HashMap<usize, usize> = HashMap::new();
        for (&(b, k, s), &r) in roots {
            let c = ia.class(x, b, k, s);
            assert_eq!(*forward.entry(r).or_insert(c), c, "oracle class split at {x}");
            assert_eq!(*backward.entry(c).or_insert(r), r, "oracle classes merged at {x}");
        }
        assert_eq!(forward.len(), ia.carrier().size(x));
    }
}

fn families_for(ion: &Ionad) -> Vec<PointFamily> {
    let max = if ion.points() <= 2 { 3 } else { 2 };
    small_families(ion.points(), max)
}

#[test]
fn interior_agrees_with_the_coend_oracle_on_the_corpus() {
    for (_, ion) in common::corpus() {
        for a in small_families(ion.points(), 2) {
            assert_matches_oracle(ion.basis(), &a);
        }
    }
}

#[test]
fn comonad_laws_hold_on_the_corpus() {
    for (name, ion) in common::corpus() {
        for a in families_for(&ion) {
            let verdict = ion.check_comonad_laws(&a).unwrap();
            assert!(verdict.is_ok(), "{name} at {a:?}: {}", verdict.unwrap_err());
        }
    }
}

#[test]
fn spatial_interior_is_a_product_over_the_minimal_neighbourhood() {
    // for a space with all opens as basis, I A(x) = ∏ A(y) over the least open containing x
    for n in 0..=3 {
        for space in enumerate_topologies(n) {
            let ion = sigma(&space);
            let le = space.specialisation_preorder();
            for a in small_families(n, 2) {
                let ia = ion.interior(&a).unwrap();
                for x in 0..n {
                    let expected: usize = (0..n)
                        .filter(|&y| le[x][y])
                        .map(|y| a.size(y))
                        .product();
                    assert_eq!(ia.carrier().size(x), expected, "{space:?} {a:?} at {x}");
                }
            }
        }
    }
}

#[test]
fn alexandroff_interior_is_a_power_over_outgoing_arrows() {
    // I A(x) = ∏_y A(y)^{C(x, y)}
    for cat in enumerate_categories(2, 4) {
        if cat.object_count() == 0 {
            continue;
        }
        let ion = alexandroff(&cat);
        for a in small_families(cat.object_count(), 2) {
            let ia = ion.interior(&a).unwrap();
            for x in 0..cat.object_count() {
                let expected: usize = (0..cat.object_count())
                    .map(|y| a.size(y).pow(cat.hom(x, y).len() as u32))
                    .product();
                assert_eq!(ia.carrier().size(x), expected);
            }
        }
    }
}

#[test]
fn dual_path_agrees_with_the_interior_on_the_corpus() {
    let budget = Budget::default();
    for (_, ion) in common::corpus() {
        let m = ion.basis();
        for a in small_families(ion.points(), 2) {
            let ia = ion.interior(&a).unwrap();
            let t = tensor_presheaf(m, &hom_presheaf(m, &a, &budget).unwrap(), &budget).unwrap();
            assert_eq!(&t.carrier, ia.carrier());
            for x in 0..ion.points() {
                let left: Vec<usize> = ia.class_table(x).iter().map(|&c| c as usize).collect();
                assert_eq!(left, t.class_table(x));
            }
        }
    }
}

#[test]
fn materialized_comultiplication_agrees_with_formal_terms() {
    let mut checked = 0;
    for (name, ion) in common::corpus() {
        let m = ion.basis();
        for a in small_families(ion.points(), 2) {
            let ia = ion.interior(&a).unwrap();
            let Ok(iia) = ion.interior(ia.carrier()) else { continue };
            let delta = ia.comultiplication(m, &iia).unwrap();
            let id = FamilyMap::identity(ia.carrier());
            // ε_{IA} ∘ Δ and I(ε_A) ∘ Δ
            assert_eq!(iia.counit().after(&delta).unwrap(), id, "{name}");
            let lowered = iia.map_along(&ia.counit(), &ia).unwrap();
            assert_eq!(lowered.after(&delta).unwrap(), id, "{name}");
            for x in 0..ion.points() {
                // formal equality of witnesses coincides with equality of classes
                let terms: Vec<Term> = iia.witnesses(x).iter().map(Term::from_witness).collect();
                for (i, s) in terms.iter().enumerate() {
                    for (j, t) in terms.iter().enumerate() {
                        assert_eq!(formal_eq(m, x, s, t), i == j, "{name} at {x}");
                    }
                }
                // Δ(c) as a formal term is the materialized class
                for (c, w) in ia.witnesses(x).iter().enumerate() {
                    let psi = ia.transpose(w.object, w.map_index, m);
                    let formal = Term::from_indices(w.object, &psi, w.element);
                    assert!(formal_eq(m, x, &formal, &terms[delta.apply(x, c)]));
                }
            }
            // coassociativity, materialized, where I I I A is small
            if let Ok(iiia) = ion.interior(iia.carrier()) {
                let delta2 = iia.comultiplication(m, &iiia).unwrap();
                let i_delta = iia.map_along(&delta, &iiia).unwrap();
                assert_eq!(delta2.after(&delta).unwrap(), i_delta.after(&delta).unwrap(), "{name}");
                checked += 1;
            }
        }
    }
    assert!(checked > 50, "only {checked} materialized checks fit the budget");
}

#[test]
fn parallel_arrows_basis_is_not_flat_yet_its_interior_is_cartesian() {
    let shape = Arc::new(FinCategory::new(2, vec![(0, 0), (1, 1), (0, 1), (0, 1)], vec![0, 1], |g, f| match (g, f) {
        (0, 0) | (2, 0) | (3, 0) => Some(g),
        (1, 1) | (1, 2) | (1, 3) => Some(f),
        _ => None,
    })
    .unwrap());
    let one = PointFamily::terminal(1);
    let actions = (0..4).map(|_| FamilyMap::identity(&one)).collect();
    let m = BasisFunctor::new(shape, 1, vec![one.clone(), one], actions).unwrap();
    let failure = m.flatness_check().unwrap_err();
    assert!(matches!(failure.condition, FlatnessCondition::NoEqualizer { .. }));
    assert!(Ionad::new(m.clone()).is_err());
    let budget = Budget::default();
    assert!(tensor_probe(&m, &budget).unwrap().is_err());
    assert!(cartesianness_probe(&m, &basis_diagrams(&m), &budget).unwrap().is_ok());
}

#[test]
fn flatness_conditions_are_reported() {
    // empty category of elements at the second point
    let shape = Arc::new(FinCategory::terminal());
    let value = PointFamily::new(vec![1, 0]);
    let m = BasisFunctor::new(shape, 2, vec![value.clone()], vec![FamilyMap::identity(&value)]).unwrap();
    let failure = m.flatness_check().unwrap_err();
    assert_eq!(failure.point, 1);
    assert_eq!(failure.condition.label(), "(i)");
    // two disjoint elements with no common source
    let shape = Arc::new(FinCategory::discrete(2));
    let one = PointFamily::terminal(1);
    let m = BasisFunctor::new(
        shape,
        1,
        vec![one.clone(), one.clone()],
        vec![FamilyMap::identity(&one), FamilyMap::identity(&one)],
    )
    .unwrap();
    assert_eq!(m.flatness_check().unwrap_err().condition.label(), "(ii)");
    assert!(tensor_probe(&m, &Budget::default()).unwrap().is_err());
}

#[test]
fn corpus_bases_pass_both_probes() {
    let budget = Budget::default();
    for (name, ion) in common::corpus() {
        let m = ion.basis();
        assert!(tensor_probe(m, &budget).unwrap().is_ok(), "{name}");
        assert!(cartesianness_probe(m, &basis_diagrams(m), &budget).unwrap().is_ok(), "{name}");
    }
}

#[test]
fn alexandroff_arrow_coalgebra_counts() {
    let ion = alexandroff(&FinCategory::arrow());
    let none = ion.enumerate_coalgebra_structures(&PointFamily::new(vec![1, 0])).unwrap();
    assert_eq!(none.len(), 0);
    let two = ion.enumerate_coalgebra_structures(&PointFamily::new(vec![1, 2])).unwrap();
    assert_eq!(two.len(), 2);
}

#[test]
fn alexandroff_coalgebras_are_covariant_functors() {
    let budget = Budget::default();
    for cat in enumerate_categories(2, 4) {
        let shape = Arc::new(cat.clone());
        let ion = alexandroff(&cat);
        for a in small_families(cat.object_count(), 2) {
            let functors = enumerate_set_functors(&shape, Variance::Covariant, a.fibers(), &budget).unwrap();
            let structures = ion.enumerate_coalgebra_structures(&a).unwrap();
            assert_eq!(structures.len(), functors.len(), "{cat:?} {a:?}");
            for c in &structures {
                assert!(ion.coalgebra_check(c).is_ok());
            }
        }
    }
}

#[test]
fn non_coassociative_choice_is_detected() {
    // over the idempotent monoid, a counital structure on a 2-element set is an
    // arbitrary endomap of it; only the idempotent ones are coassociative
    let ion = alexandroff(&common::idempotent_monoid());
    let a = PointFamily::new(vec![2]);
    let ia = ion.interior(&a).unwrap();
    let counit = ia.counit();
    let candidates: Vec<Vec<usize>> = (0..2)
        .map(|e| (0..ia.carrier().size(0)).filter(|&c| counit.apply(0, c) == e).collect())
        .collect();
    let mut coassociative = 0;
    let mut failures = 0;
    for &c0 in &candidates[0] {
        for &c1 in &candidates[1] {
            let structure = FamilyMap::new(a.clone(), ia.carrier().clone(), vec![vec![c0, c1]]).unwrap();
            let coalgebra = ion.coalgebra(structure).unwrap();
            match ion.coalgebra_check(&coalgebra) {
                Ok(()) => coassociative += 1,
                Err(CoalgebraViolation::Coassociativity { point: 0, .. }) => failures += 1,
                Err(other) => panic!("unexpected violation {other}"),
            }
        }
    }
    assert_eq!((coassociative, failures), (3, 1));
    assert_eq!(ion.enumerate_coalgebra_structures(&a).unwrap().len(), 3);
}

#[test]
fn coalgebra_structures_are_stable_under_carrier_automorphisms() {
    for (name, ion) in common::corpus() {
        for a in small_families(ion.points(), 2) {
            let Some(x) = (0..a.points()).find(|&x| a.size(x) == 2) else { continue };
            let mut swap: Vec<Vec<usize>> = a.fibers().iter().map(|&n| (0..n).collect()).collect();
            swap[x] = vec![1, 0];
            let sigma = FamilyMap::new(a.clone(), a.clone(), swap).unwrap();
            let ia = ion.interior(&a).unwrap();
            let i_sigma = ia.map_along(&sigma, &ia).unwrap();
            let structures = ion.enumerate_coalgebra_structures(&a).unwrap();
            for c in &structures {
                let moved = i_sigma.after(c.structure()).unwrap().after(&sigma).unwrap();
                assert!(
                    structures.iter().any(|d| d.structure() == &moved),
                    "{name}: transported structure missing"
                );
            }
        }
    }
}

#[test]
fn cofree_and_colimit_coalgebras() {
    for (name, ion) in common::corpus() {
        for a in small_families(ion.points(), 1) {
            let cofree = ion.cofree(&a).unwrap();
            assert!(ion.coalgebra_check(&cofree).is_ok(), "{name}");
        }
        let structures: Vec<_> = small_families(ion.points(), 1)
            .iter()
            .flat_map(|a| ion.enumerate_coalgebra_structures(a).unwrap())
            .collect();
        // binary coproducts: carriers add up
        for p in &structures {
            for q in &structures {
                let (sum, legs) = ion.coalgebra_colimit(&[p.clone(), q.clone()], &[]).unwrap();
                for x in 0..ion.points() {
                    assert_eq!(sum.carrier().size(x), p.carrier().size(x) + q.carrier().size(x));
                }
                assert!(ion.is_coalgebra_morphism(p, &sum, &legs[0]));
                assert!(ion.is_coalgebra_morphism(q, &sum, &legs[1]));
            }
        }
    }
}

#[test]
fn coequalizer_of_the_two_points_of_a_sierpinski_coalgebra() {
    // Σ(Sierpiński): the open {1} and the whole space, both as coalgebras; the
    // inclusion followed by nothing else gives a one-edge colimit equal to the target
    let ion = common::sierpinski();
    let small = ion.lift_basis(1).unwrap();
    let whole = ion.lift_basis(2).unwrap();
    let inclusion = FamilyMap::new(
        small.carrier().clone(),
        whole.carrier().clone(),
        vec![vec![], vec![0]],
    )
    .unwrap();
    let (colim, _) = ion
        .coalgebra_colimit(&[small, whole.clone()], &[(0, 1, inclusion)])
        .unwrap();
    assert_eq!(colim.carrier(), whole.carrier());
}

fn shapes() -> &'static (Vec<Arc<FinCategory>>, Vec<Vec<SetFunctor>>) {
    static SHAPES: OnceLock<(Vec<Arc<FinCategory>>, Vec<Vec<SetFunctor>>)> = OnceLock::new();
    SHAPES.get_or_init(|| {
        let shapes: Vec<Arc<FinCategory>> = enumerate_categories(3, 5)
            .into_iter()
            .filter(|c| c.object_count() > 0)
            .map(Arc::new)
            .collect();
        let flat = shapes
            .iter()
            .map(|s| flat_point_functors(s, 2, &Budget::default()).unwrap())
            .collect();
        (shapes, flat)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_flat_bases_satisfy_the_laws(seed in any::<u64>()) {
        let (shapes, flat) = shapes();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_flat_basis(&mut rng, shapes, flat, 3);
        let a = random_family(&mut rng, m.points(), 2);
        assert_matches_oracle(&m, &a);
        let ion = Ionad::new(m).unwrap();
        prop_assert!(ion.check_comonad_laws(&a).unwrap().is_ok());
        prop_assert!(tensor_probe(ion.basis(), &Budget::default()).unwrap().is_ok());
        let budget = Budget::default();
        let ia = ion.interior(&a).unwrap();
        let t = tensor_presheaf(ion.basis(), &hom_presheaf(ion.basis(), &a, &budget).unwrap(), &budget).unwrap();
        prop_assert_eq!(&t.carrier, ia.carrier());
    }

    #[test]
    fn counit_is_natural(seed in any::<u64>()) {
        let (shapes, flat) = shapes();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ion = Ionad::new(random_flat_basis(&mut rng, shapes, flat, 2)).unwrap();
        let a = random_family(&mut rng, ion.points(), 2);
        let b = random_family(&mut rng, ion.points(), 2);
        let (ia, ib) = (ion.interior(&a).unwrap(), ion.interior(&b).unwrap());
        for f in HomSpace::new(&a, &b).unwrap().iter().take(16) {
            let i_f = ia.map_along(&f, &ib).unwrap();
            prop_assert_eq!(ib.counit().after(&i_f).unwrap(), f.after(&ia.counit()).unwrap());
        }
    }
}
