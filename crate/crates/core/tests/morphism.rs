mod common;

use std::sync::Arc;

use ionad::fincat::catalog::{enumerate_categories, find_isomorphism};
use ionad::fincat::{functor_category, FamilyMap, FinCategory, PointFamily};
use ionad::ionad::Ionad;
use ionad::morphism::{
    check_comonad_morphism, check_continuous, check_rho, compose, continuous_point_maps,
    enumerate_specialisations, from_comonad_morphism, hom_category, is_specialisation, point_maps,
    rho_presentation, sigma_map, specialisation_category, specialisation_from_rho,
    to_comonad_morphism, ContinuousMap, ContinuityViolation,
};
use ionad::site::small_families;
use ionad::space::{alexandroff, enumerate_topologies, lambda, sigma};
use ionad::Error;

fn small_spaces(max_points: usize) -> Vec<ionad::space::FinTopSpace> {
    (0..=max_points).flat_map(enumerate_topologies).collect()
}

#[test]
fn sigma_is_functorial() {
    let spaces = small_spaces(2);
    for s in &spaces {
        let xs = sigma(s);
        assert_eq!(
            sigma_map(&xs, &xs, &(0..s.points()).collect::<Vec<_>>()).unwrap(),
            ContinuousMap::identity(&xs).unwrap()
        );
        for t in &spaces {
            let xt = sigma(t);
            for f in point_maps(s.points(), t.points()) {
                let lifted = sigma_map(&xs, &xt, &f);
                if !s.is_continuous(t, &f) {
                    assert!(matches!(lifted, Err(Error::NoLifting(_))));
                    continue;
                }
                let sf = lifted.unwrap();
                assert!(check_continuous(&sf).is_ok());
                for u in &spaces {
                    let xu = sigma(u);
                    for g in continuous_point_maps(t, u) {
                        let sg = sigma_map(&xt, &xu, &g).unwrap();
                        let gf: Vec<usize> = f.iter().map(|&y| g[y]).collect();
                        assert_eq!(compose(&sg, &sf).unwrap(), sigma_map(&xs, &xu, &gf).unwrap());
                    }
                }
            }
        }
    }
}

#[test]
fn maps_into_a_spatial_ionad_are_continuous_maps_out_of_lambda() {
    for (name, x) in common::corpus() {
        let lx = lambda(&x).unwrap();
        for t in small_spaces(2) {
            let y = sigma(&t);
            let hom = hom_category(&x, &y).unwrap();
            let mut lifted: Vec<Vec<usize>> = hom.maps.iter().map(|m| m.point_map().to_vec()).collect();
            let count = lifted.len();
            lifted.dedup();
            assert_eq!(lifted.len(), count, "{name}: liftings are unique");
            assert_eq!(lifted, continuous_point_maps(&lx, &t), "{name} → {t:?}");
        }
    }
}

#[test]
fn alexandroff_is_fully_faithful_on_small_categories() {
    let cats: Vec<Arc<FinCategory>> = enumerate_categories(2, 3).into_iter().map(Arc::new).collect();
    for c in &cats {
        for d in &cats {
            let hom = hom_category(&alexandroff(c), &alexandroff(d)).unwrap();
            let fc = functor_category(c, d).unwrap();
            assert!(
                find_isomorphism(&Arc::new(hom.category), &Arc::new(fc.category)).is_some(),
                "{c:?} → {d:?}"
            );
        }
    }
}

#[test]
fn specialisation_category_inverts_alexandroff() {
    for cat in enumerate_categories(3, 5) {
        let c = Arc::new(cat);
        let v = specialisation_category(&alexandroff(&c)).unwrap();
        assert!(find_isomorphism(&Arc::new(v.category), &c).is_some(), "{c:?}");
    }
}

#[test]
fn points_are_maps_from_the_terminal_ionad() {
    for (name, x) in common::corpus() {
        let hom = hom_category(&Ionad::terminal(), &x).unwrap();
        let v = specialisation_category(&x).unwrap();
        assert!(
            find_isomorphism(&Arc::new(hom.category), &Arc::new(v.category)).is_some(),
            "{name}"
        );
        let to_one = hom_category(&x, &Ionad::terminal()).unwrap();
        assert_eq!(to_one.category.object_count(), 1, "{name}");
        assert_eq!(to_one.maps[0], ContinuousMap::to_terminal(&x).unwrap());
    }
}

#[test]
fn composition_is_associative_and_unital() {
    let corpus = common::corpus();
    let pick = [1usize, 5, 6, 9];
    for &i in &pick {
        for &j in &pick {
            let (x, y) = (&corpus[i].1, &corpus[j].1);
            let xy = hom_category(x, y).unwrap().maps;
            for f in &xy {
                assert_eq!(&compose(&ContinuousMap::identity(y).unwrap(), f).unwrap(), f);
                assert_eq!(&compose(f, &ContinuousMap::identity(x).unwrap()).unwrap(), f);
            }
            for &k in &pick {
                let z = &corpus[k].1;
                let yz = hom_category(y, z).unwrap().maps;
                for f in xy.iter().take(4) {
                    for g in yz.iter().take(4) {
                        let gf = compose(g, f).unwrap();
                        assert!(check_continuous(&gf).is_ok());
                        for h in ContinuousMap::enumerate(z, z, &(0..z.points()).collect::<Vec<_>>())
                            .unwrap()
                            .iter()
                            .take(2)
                        {
                            assert_eq!(
                                compose(h, &gf).unwrap(),
                                compose(&compose(h, g).unwrap(), f).unwrap()
                            );
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn comonad_morphism_round_trip_and_corruption() {
    let mut corrupted = 0;
    for (name, x) in common::corpus() {
        for (_, y) in common::corpus().into_iter().take(6) {
            for m in hom_category(&x, &y).unwrap().maps.iter().take(6) {
                let probes = small_families(y.points(), 2);
                let p = to_comonad_morphism(m, &probes).unwrap();
                assert_eq!(&from_comonad_morphism(&x, &y, &p).unwrap(), m, "{name}");
                // move one entry of one stored δ to another element
                for (i, delta) in p.deltas.iter().enumerate() {
                    let spot = (0..x.points())
                        .find_map(|pt| (!delta.component(pt).is_empty() && delta.dst().size(pt) > 1).then_some(pt));
                    let Some(pt) = spot else { continue };
                    let mut comps = delta.components().to_vec();
                    comps[pt][0] = (comps[pt][0] + 1) % delta.dst().size(pt);
                    let mut bad = p.clone();
                    bad.deltas[i] = FamilyMap::new(delta.src().clone(), delta.dst().clone(), comps).unwrap();
                    let verdict = check_comonad_morphism(&x, &y, &bad).unwrap();
                    assert!(verdict.is_err(), "{name}: corrupted δ at family {i} accepted");
                    corrupted += 1;
                    break;
                }
            }
        }
    }
    assert!(corrupted > 10, "{corrupted}");
}

#[test]
fn corrupted_liftings_are_rejected() {
    let x = alexandroff(&common::idempotent_monoid());
    let y = alexandroff(&common::idempotent_monoid());
    let maps = hom_category(&x, &y).unwrap().maps;
    assert!(!maps.is_empty());
    let m = &maps[0];
    // a lifting structure replaced by a counital but non-coassociative one
    let carrier = PointFamily::new(vec![2]);
    let ia = x.interior(&carrier).unwrap();
    let counit = ia.counit();
    let pick = |e: usize, skip: usize| {
        (0..ia.carrier().size(0)).filter(|&c| counit.apply(0, c) == e).nth(skip).unwrap()
    };
    for (s0, s1) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
        let structure = FamilyMap::new(carrier.clone(), ia.carrier().clone(), vec![vec![pick(0, s0), pick(1, s1)]]).unwrap();
        let c = x.coalgebra(structure).unwrap();
        if x.coalgebra_check(&c).is_ok() {
            continue;
        }
        let mut liftings = m.liftings().to_vec();
        if liftings[0].carrier() != &carrier {
            continue;
        }
        liftings[0] = c;
        let bad = ContinuousMap::from_parts(x.clone(), y.clone(), m.point_map().to_vec(), liftings);
        assert!(matches!(check_continuous(&bad), Err(ContinuityViolation::Lifting { object: 0, .. })));
        return;
    }
    panic!("no corrupted lifting constructed");
}

#[test]
fn specialisations_compose_and_match_rho() {
    let mut corrupted = 0;
    for (name, x) in common::corpus() {
        for (_, y) in common::corpus() {
            let hom = hom_category(&x, &y).unwrap();
            if hom.maps.len() > 12 {
                continue;
            }
            for f in &hom.maps {
                for g in &hom.maps {
                    let cells = enumerate_specialisations(f, g).unwrap();
                    for alpha in &cells {
                        for h in &hom.maps {
                            for beta in enumerate_specialisations(g, h).unwrap() {
                                assert!(is_specialisation(f, h, &beta.after(alpha).unwrap()), "{name}");
                            }
                        }
                        let probes = small_families(y.points(), 2);
                        let p = rho_presentation(f, g, alpha, &probes).unwrap();
                        assert_eq!(&specialisation_from_rho(f, g, &p).unwrap(), alpha);
                        // perturb a stored component at a probe family
                        let b = y.basis().object_count();
                        for i in b..p.components.len() {
                            let rho = &p.components[i];
                            let spot = (0..x.points()).find(|&pt| {
                                !rho.component(pt).is_empty() && rho.dst().size(pt) > 1
                            });
                            let Some(pt) = spot else { continue };
                            let mut comps = rho.components().to_vec();
                            comps[pt][0] = (comps[pt][0] + 1) % rho.dst().size(pt);
                            let mut bad = p.clone();
                            bad.components[i] = FamilyMap::new(rho.src().clone(), rho.dst().clone(), comps).unwrap();
                            assert!(check_rho(f, g, &bad).unwrap().is_err(), "{name}: corrupted ρ accepted");
                            corrupted += 1;
                            break;
                        }
                    }
                }
            }
        }
    }
    assert!(corrupted > 10, "{corrupted}");
}
