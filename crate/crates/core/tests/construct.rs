mod common;

use ionad::construct::{
    coproduct, cotensor_arrow, pair_maps, product, projections, tensor, terminal_ionad, unpair,
};
use ionad::fincat::catalog::enumerate_categories;
use ionad::fincat::FinCategory;
use ionad::ionad::Ionad;
use ionad::morphism::{check_continuous, compose, hom_category, ContinuousMap};
use ionad::site::small_families;
use ionad::space::{alexandroff, enumerate_topologies, lambda, sigma, FinTopSpace};

fn small_spaces(max_points: usize) -> Vec<FinTopSpace> {
    (1..=max_points).flat_map(enumerate_topologies).collect()
}

fn sources() -> Vec<Ionad> {
    vec![
        terminal_ionad(),
        common::sierpinski(),
        sigma(&FinTopSpace::discrete(2)),
        alexandroff(&FinCategory::arrow()),
    ]
}

#[test]
fn products_of_spaces_are_classical() {
    for s in small_spaces(2) {
        for t in small_spaces(2) {
            let w = product(&sigma(&s), &sigma(&t)).unwrap();
            assert_eq!(lambda(&w.product).unwrap(), s.product(&t).unwrap());
        }
    }
}

#[test]
fn pairing_is_a_bijection() {
    for z in sources() {
        for s in small_spaces(2) {
            for t in small_spaces(2) {
                let (x, y) = (sigma(&s), sigma(&t));
                let w = product(&x, &y).unwrap();
                let left = hom_category(&z, &x).unwrap().maps;
                let right = hom_category(&z, &y).unwrap().maps;
                let into = hom_category(&z, &w.product).unwrap().maps;
                assert_eq!(into.len(), left.len() * right.len());
                let (p, q) = projections(&w).unwrap();
                for f in &left {
                    for g in &right {
                        let h = pair_maps(&w, f, g).unwrap();
                        assert!(check_continuous(&h).is_ok());
                        assert_eq!(&compose(&p, &h).unwrap(), f);
                        assert_eq!(&compose(&q, &h).unwrap(), g);
                        assert_eq!(unpair(&w, &h).unwrap(), (f.clone(), g.clone()));
                    }
                }
                for h in &into {
                    let (f, g) = unpair(&w, h).unwrap();
                    assert_eq!(&pair_maps(&w, &f, &g).unwrap(), h);
                }
            }
        }
    }
}

#[test]
fn pairing_into_non_spatial_factors() {
    let x = alexandroff(&FinCategory::cyclic_group(2));
    let y = common::sierpinski();
    let w = product(&x, &y).unwrap();
    for z in [terminal_ionad(), alexandroff(&FinCategory::cyclic_group(2))] {
        let left = hom_category(&z, &x).unwrap().maps;
        let right = hom_category(&z, &y).unwrap().maps;
        let into = hom_category(&z, &w.product).unwrap().maps;
        assert_eq!(into.len(), left.len() * right.len());
        for h in &into {
            let (f, g) = unpair(&w, h).unwrap();
            assert_eq!(&pair_maps(&w, &f, &g).unwrap(), h);
        }
    }
}

#[test]
fn terminal_ionad_is_a_unit_for_products() {
    for (name, x) in common::corpus() {
        let w = product(&x, &terminal_ionad()).unwrap();
        assert_eq!(lambda(&w.product).unwrap(), lambda(&x).unwrap(), "{name}");
        for a in small_families(x.points(), 2) {
            assert_eq!(
                w.product.interior(&a).unwrap().carrier(),
                x.interior(&a).unwrap().carrier(),
                "{name}"
            );
        }
    }
}

#[test]
fn coproduct_routes_agree() {
    for s in small_spaces(2) {
        for t in small_spaces(2) {
            let c = coproduct(&[sigma(&s), sigma(&t)]);
            let expected = FinTopSpace::coproduct(&[s.clone(), t.clone()]).unwrap();
            assert_eq!(c.lambda().unwrap(), expected);
            assert_eq!(lambda(&c.ionad()).unwrap(), expected);
            let joined = c.ionad();
            for a in small_families(c.points(), 2) {
                assert_eq!(&c.interior(&a).unwrap().carrier, joined.interior(&a).unwrap().carrier());
            }
        }
    }
}

#[test]
fn maps_out_of_a_coproduct_are_pairs_of_maps() {
    let parts = [common::sierpinski(), alexandroff(&FinCategory::arrow())];
    let c = coproduct(&parts);
    let sum = c.ionad();
    for (name, z) in common::corpus().into_iter().take(6) {
        let out = hom_category(&sum, &z).unwrap().maps;
        let left = hom_category(&parts[0], &z).unwrap().maps;
        let right = hom_category(&parts[1], &z).unwrap().maps;
        assert_eq!(out.len(), left.len() * right.len(), "{name}");
        let (i, j) = (c.injection(0).unwrap(), c.injection(1).unwrap());
        for h in &out {
            assert!(left.contains(&compose(h, &i).unwrap()));
            assert!(right.contains(&compose(h, &j).unwrap()));
        }
    }
}

#[test]
fn tensors_are_products_with_alexandroff_ionads() {
    for cat in enumerate_categories(2, 3) {
        for (name, x) in common::corpus().into_iter().take(6) {
            let t = tensor(&cat, &x).unwrap();
            let p = product(&alexandroff(&cat), &x).unwrap();
            assert_eq!(t.basis(), p.product.basis(), "{name} {cat:?}");
        }
        let t = tensor(&cat, &terminal_ionad()).unwrap();
        assert_eq!(lambda(&t).unwrap(), lambda(&alexandroff(&cat)).unwrap());
    }
}

#[test]
fn cotensor_points_and_evaluations() {
    for s in small_spaces(2) {
        let x = sigma(&s);
        let w = cotensor_arrow(&x).unwrap();
        let le = s.specialisation_preorder();
        let pairs = (0..s.points())
            .flat_map(|a| (0..s.points()).map(move |b| (a, b)))
            .filter(|&(a, b)| le[a][b])
            .count();
        assert_eq!(w.ionad.points(), pairs);
        let ends = w.specialisations.category.endpoints().to_vec();
        for end in [false, true] {
            let e = w.evaluation(end).unwrap();
            assert!(check_continuous(&e).is_ok());
            for (p, &(a, b)) in ends.iter().enumerate() {
                assert_eq!(e.point_map()[p], if end { b } else { a });
            }
        }
    }
}

#[test]
fn maps_into_a_cotensor_are_specialisations() {
    for x in [common::sierpinski(), sigma(&FinTopSpace::discrete(2)), alexandroff(&FinCategory::arrow())] {
        let w = cotensor_arrow(&x).unwrap();
        for z in [terminal_ionad(), common::sierpinski(), sigma(&FinTopSpace::discrete(2))] {
            let arrows = hom_category(&z, &x).unwrap().category.morphism_count();
            let maps = hom_category(&z, &w.ionad).unwrap().maps.len();
            assert_eq!(maps, arrows);
        }
    }
}

#[test]
fn identity_factors_through_the_cotensor_diagonal() {
    // the identity specialisation of the identity map is a point of the cotensor
    // over each point, and both evaluations send it back there
    let x = alexandroff(&FinCategory::arrow());
    let w = cotensor_arrow(&x).unwrap();
    let id = ContinuousMap::identity(&x).unwrap();
    assert!(check_continuous(&id).is_ok());
    let ends = w.specialisations.category.endpoints();
    let loops = (0..x.points())
        .filter(|&p| ends.iter().any(|&(a, b)| a == p && b == p))
        .count();
    assert_eq!(loops, x.points());
}
