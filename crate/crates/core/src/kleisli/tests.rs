use super::*;
use crate::comonads::{build, KleisliMorphism};
use crate::structures::{find_isomorphism, product, Signature};

fn a(i: u32) -> Term {
    Term::Atom(i)
}

fn left(x: Term) -> Term {
    Term::inj(0, x)
}

fn right(x: Term) -> Term {
    Term::inj(1, x)
}

fn edge() -> Structure {
    Structure::digraph(2, &[(0, 1)]).unwrap()
}

fn pointed(s: Structure) -> Structure {
    s.with_point(Some(0)).unwrap()
}

#[test]
fn coproduct_restricts_to_the_last_summand() {
    let l = law("coproduct-pebble", 2, None).unwrap();
    let t = Term::Pebbled(vec![(0, left(a(0))), (1, right(a(1))), (0, left(a(2)))]);
    assert_eq!(
        l.kappa_term(&t).unwrap(),
        left(Term::Pebbled(vec![(0, a(0)), (0, a(2))]))
    );
    let single = Term::Pebbled(vec![(1, right(a(5)))]);
    assert_eq!(l.kappa_term(&single).unwrap(), right(Term::Pebbled(vec![(1, a(5))])));
    let l = law("coproduct-ef", 2, None).unwrap();
    let inside = Term::Word(vec![left(a(0)), left(a(1))]);
    assert_eq!(l.kappa_term(&inside).unwrap(), left(Term::Word(vec![a(0), a(1)])));
    let m = kappa_coproduct(Kind::Ef, 2, &edge(), &edge()).unwrap();
    let src = &m.instance.source.carrier.structure;
    assert!(m.map.is_homomorphism(src, &m.target.structure).unwrap());
}

#[test]
fn merge_drops_the_first_step() {
    let a1 = pointed(Structure::digraph(2, &[(0, 1)]).unwrap());
    let a2 = pointed(Structure::new(Signature::graph(), 1));
    let m = kappa_merge(1, &a1, &a2, "E").unwrap();
    let l = &m.instance.law;
    let star_path = Term::path(Term::Star, vec![]);
    assert_eq!(l.kappa_term(&star_path).unwrap(), Term::Star);
    let one = Term::path(Term::Star, vec![(0, left(a(0)))]);
    assert_eq!(l.kappa_term(&one).unwrap(), left(Term::path(a(0), vec![])));
    // The longest source paths (k+1 steps) fit in M_k.
    let two = Term::path(Term::Star, vec![(0, left(a(0))), (0, left(a(1)))]);
    assert_eq!(l.kappa_term(&two).unwrap(), left(Term::path(a(0), vec![(0, a(1))])));
    let src = &m.instance.source.carrier.structure;
    assert!(m.map.is_homomorphism(src, &m.target.structure).unwrap());
    assert_eq!(m.map.apply(src.point().unwrap()), m.target.structure.point().unwrap());
}

#[test]
fn product_projects_letterwise() {
    let l = law("product-ef", 2, None).unwrap();
    let t = Term::Word(vec![Term::Tuple(vec![a(0), a(1)]), Term::Tuple(vec![a(2), a(3)])]);
    assert_eq!(
        l.kappa_term(&t).unwrap(),
        Term::Tuple(vec![Term::Word(vec![a(0), a(2)]), Term::Word(vec![a(1), a(3)])])
    );
    // A unary family: κ is the identity up to the naming of 1-tuples.
    let m = kappa_product(Kind::Ef, 2, &[edge()]).unwrap();
    let c = build(Kind::Ef, &edge(), 2, None).unwrap();
    for (i, t) in m.instance.source.carrier.labels().iter().enumerate() {
        let img = m.target.label(m.map.apply(i as u32));
        let flat = crate::comonads::fmap_term(t, |x| match x {
            Term::Tuple(v) => Ok(v[0].clone()),
            _ => unreachable!(),
        })
        .unwrap();
        assert_eq!(img, &Term::Tuple(vec![flat.clone()]));
        assert!(c.carrier.index_of(&flat).is_some());
    }
}

#[test]
fn product_projections_commute() {
    // π_i ∘ κ = C(π_i) on every element, checked against index-level
    // projections of the materialised product.
    let family = [edge(), Structure::digraph(2, &[(1, 1)]).unwrap()];
    for kind in [Kind::Ef, Kind::Pebble] {
        let m = kappa_product(kind, 2, &family).unwrap();
        let prod = product(&family).unwrap();
        assert!(find_isomorphism(&prod, &m.instance.composite.structure).is_some());
        for (i, t) in m.instance.source.carrier.labels().iter().enumerate() {
            let Term::Tuple(parts) = m.target.label(m.map.apply(i as u32)) else {
                panic!()
            };
            for (j, part) in parts.iter().enumerate() {
                let projected = crate::comonads::fmap_term(t, |x| match x {
                    Term::Tuple(v) => Ok(v[j].clone()),
                    _ => unreachable!(),
                })
                .unwrap();
                assert_eq!(part, &projected);
            }
        }
    }
}

#[test]
fn comonad_morphisms() {
    let l = law("ef-pebble", 3, None).unwrap();
    let w = Term::Word(vec![a(0), a(1), a(2)]);
    assert_eq!(
        l.kappa_term(&w).unwrap(),
        Term::Pebbled(vec![(0, a(0)), (1, a(1)), (2, a(2))])
    );
    let l = law("modal-p2", 3, None).unwrap();
    assert_eq!(
        l.kappa_term(&Term::path(a(0), vec![])).unwrap(),
        Term::Pebbled(vec![(0, a(0))])
    );
    let p = Term::path(a(0), vec![(0, a(1)), (0, a(0)), (0, a(1))]);
    let pebbles: Vec<u8> = match l.kappa_term(&p).unwrap() {
        Term::Pebbled(w) => w.iter().map(|(q, _)| *q).collect(),
        _ => panic!(),
    };
    assert_eq!(pebbles, vec![0, 1, 0, 1]);
    let cycle = pointed(Structure::digraph(2, &[(0, 1), (1, 0)]).unwrap());
    let m = morphism_modal_to_p2(3, &cycle).unwrap();
    assert!(m
        .map
        .is_homomorphism(&m.instance.source.carrier.structure, &m.target.structure)
        .unwrap());

    let l = law("cos-p3", 1, None).unwrap();
    let tri = Term::Walk(vec![a(0), a(1), a(2)], 0);
    assert_eq!(l.kappa_term(&tri).unwrap(), Term::Pebbled(vec![(2, a(0))]));
    let sq = Term::Walk(vec![a(0), a(1), a(2), a(3)], 2);
    assert_eq!(
        l.kappa_term(&sq).unwrap(),
        Term::Pebbled(vec![(2, a(0)), (1, a(1)), (0, a(2))])
    );
    let c4 = Structure::graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
    let m = morphism_cos_to_p3(&c4, 4).unwrap();
    assert!(m
        .map
        .is_homomorphism(&m.instance.source.carrier.structure, &m.target.structure)
        .unwrap());
}

#[test]
fn registered_laws_pass_on_small_bases() {
    let sig = Signature::graph();
    for name in LAW_NAMES {
        let ks: &[usize] = if name == "cos-p3" { &[1] } else { &[1, 2] };
        for &k in ks {
            let l = law(name, k, None).unwrap();
            let max = match name {
                "cos-p3" => 3,
                "coproduct-pebble" | "product-pebble" if k == 2 => 1,
                _ => 2,
            };
            let bases = exhaustive_bases(&l, &sig, max).unwrap();
            let r = check_kleisli_law(&l, &bases, 2, 11).unwrap();
            assert!(r.passed(), "{name} k={k}: {r:#?}");
            assert_eq!(
                r.truncated,
                name.contains("pebble") || name.contains("p2") || name.contains("p3")
            );
        }
    }
}

#[test]
fn swapped_outputs_are_detected() {
    let sig = Signature::graph();
    for name in ["coproduct-ef", "product-ef", "merge-modal", "ef-pebble"] {
        let l = law(name, 2, None).unwrap();
        let bases = exhaustive_bases(&l, &sig, 2).unwrap();
        // Two elements with different counits.
        let (x, y) = bases
            .iter()
            .find_map(|tuple| {
                let inst = l.instantiate(tuple).unwrap();
                let labels = inst.source.carrier.labels().to_vec();
                labels.iter().find_map(|x| {
                    labels
                        .iter()
                        .find(|y| counit_term(x).unwrap() != counit_term(y).unwrap())
                        .map(|y| (x.clone(), y.clone()))
                })
            })
            .unwrap();
        let (x, y) = (&x, &y);
        let broken = l.clone().with_fault(x.clone(), y.clone());
        let r = check_kleisli_law(&broken, &bases, 2, 5).unwrap();
        assert!(!r.passed(), "{name}");
        let k1 = r.check(LAW_K1).unwrap();
        assert!(!k1.passed());
        assert!(
            k1.counterexample.as_ref().unwrap().contains(&x.to_string())
                || k1.counterexample.as_ref().unwrap().contains(&y.to_string())
        );
    }
}

#[test]
fn composed_witnesses_are_homomorphisms() {
    let l = law("coproduct-ef", 1, None).unwrap();
    let a1 = edge();
    let a2 = Structure::digraph(1, &[(0, 0)]).unwrap();
    let c1 = build(Kind::Ef, &a1, 1, None).unwrap();
    let c2 = build(Kind::Ef, &a2, 1, None).unwrap();
    // Counits compose to κ followed by the counits.
    let w = fvm_compose_witness(&l, &[KleisliMorphism::counit(&c1), KleisliMorphism::counit(&c2)]).unwrap();
    assert!(w.is_homomorphism);
    assert_eq!(w.map, w.source.counit);
    // Constants into a loop give a constant per summand.
    let lp = Labeled::plain(a2.clone());
    let f1 = KleisliMorphism::new(c1.clone(), lp.clone(), StructureMap::constant(c1.size(), 0)).unwrap();
    let f2 = KleisliMorphism::new(c2.clone(), lp.clone(), StructureMap::constant(c2.size(), 0)).unwrap();
    let w = fvm_compose_witness(&l, &[f1, f2]).unwrap();
    assert!(w.is_homomorphism);
    for (i, t) in w.source.carrier.labels().iter().enumerate() {
        let Term::Inj(tag, _) = counit_term(t).unwrap() else {
            panic!()
        };
        assert_eq!(w.target.label(w.map.apply(i as u32)), &Term::inj(*tag, a(0)));
    }
    assert!(fvm_compose_witness(&l, &[KleisliMorphism::counit(&c1)]).is_err());
}

#[test]
fn unknown_laws_are_rejected() {
    assert!(law("coproduct-modal", 1, None).is_err());
    assert!(law("ef-pebble", 3, Some(2)).is_err());
    assert!(kappa_coproduct(Kind::Modal, 1, &edge(), &edge()).is_err());
}
