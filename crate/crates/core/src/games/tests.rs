use super::*;
use crate::comonads::{build, Params};
use crate::structures::{enumerate_pointed, enumerate_structures, EnumerateOptions, Signature};

fn isolated(n: usize) -> Structure {
    Structure::new(Signature::graph(), n)
}

fn lp() -> Structure {
    Structure::digraph(1, &[(0, 0)]).unwrap()
}

fn edge() -> Structure {
    Structure::digraph(2, &[(0, 1)]).unwrap()
}

fn pointed_path(len: usize) -> Structure {
    let edges: Vec<(u32, u32)> = (0..len as u32).map(|i| (i, i + 1)).collect();
    Structure::digraph(len + 1, &edges)
        .unwrap()
        .with_point(Some(0))
        .unwrap()
}

#[test]
fn hom_exists_examples() {
    let a = Structure::digraph(3, &[(0, 1), (1, 2)]).unwrap();
    for k in 1..=3 {
        let c = build(Kind::Ef, &a, k, None).unwrap();
        let v = hom_exists(&c, &a).unwrap();
        assert!(v.result);
        assert!(replay(&v, &a, &a).unwrap());
    }
    let c = build(Kind::Ef, &edge(), 2, None).unwrap();
    assert!(hom_exists(&c, &lp()).unwrap().result);
    // E_1 of a loop still has a loop: the word [a] is prefix-comparable with
    // itself, so the rank-1 sentence ∃x E(x,x) separates the two.
    for k in 1..=2 {
        let c = build(Kind::Ef, &lp(), k, None).unwrap();
        assert!(!hom_exists(&c, &edge()).unwrap().result);
        assert!(!pe_forth(Kind::Ef, &lp(), &edge(), k).unwrap().result);
    }
    let c = Params::new(Kind::Pebble, 2).build(&edge()).unwrap();
    assert!(matches!(hom_exists(&c, &edge()), Err(Error::Unsupported(m)) if m.contains("pebble_forth")));
}

#[test]
fn pe_examples() {
    for kind in [Kind::Ef, Kind::Pebble] {
        for k in 1..=3 {
            assert!(pe_forth(kind, &isolated(2), &isolated(1), k).unwrap().result);
            assert!(pe_forth(kind, &isolated(1), &isolated(2), k).unwrap().result);
            assert!(pe_forth(kind, &edge(), &edge(), k).unwrap().result);
        }
    }
    let (p2, p1) = (pointed_path(2), pointed_path(1));
    assert!(!pe_forth(Kind::Modal, &p2, &p1, 2).unwrap().result);
    assert!(pe_forth(Kind::Modal, &p1, &p2, 2).unwrap().result);
    assert!(pe_forth(Kind::Modal, &p2, &p1, 1).unwrap().result);
}

#[test]
fn exist_examples() {
    let lp_plus = Structure::digraph(2, &[(0, 0)]).unwrap();
    assert!(exist_forth(Kind::Ef, &lp(), &lp_plus, 1).unwrap().result);
    assert!(!exist_forth(Kind::Ef, &isolated(1), &lp(), 1).unwrap().result);
    assert!(exist_forth(Kind::Pebble, &lp(), &lp_plus, 2).unwrap().result);
    assert!(!exist_forth(Kind::Pebble, &isolated(1), &lp(), 2).unwrap().result);
    assert!(matches!(
        exist_forth(Kind::Modal, &pointed_path(1), &pointed_path(1), 1),
        Err(Error::Unsupported(_))
    ));
}

#[test]
fn full_and_count_examples() {
    for kind in [Kind::Ef, Kind::Pebble] {
        assert!(!full_equiv(kind, &lp(), &isolated(1), 1).unwrap().result);
        for k in 1..=3 {
            assert!(full_equiv(kind, &isolated(2), &isolated(1), k).unwrap().result);
            assert!(!count_equiv(kind, &isolated(2), &isolated(1), k).unwrap().result);
            let a = Structure::digraph(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
            let b = a.permute(&[2, 0, 1]);
            assert!(count_equiv(kind, &a, &b, k).unwrap().result);
            assert!(full_equiv(kind, &a, &b, k).unwrap().result);
        }
    }
}

#[test]
fn bijective_backend_needs_small_inputs() {
    let big = isolated(BIJECTIVE_PEBBLE_MAX + 1);
    assert!(matches!(
        count_equiv(Kind::Pebble, &big, &big, 2),
        Err(Error::GuardExceeded { .. })
    ));
    let v = count_equiv_with(Kind::Pebble, &big, &big, 2, CountBackend::Wl).unwrap();
    assert!(v.result);
    assert_eq!(v.backend, Backend::Wl);
}

#[test]
fn kleisli_search_examples() {
    let c = build(Kind::Ef, &edge(), 2, None).unwrap();
    let v = kleisli_iso_search(&c, &c).unwrap();
    assert!(v.result);
    assert!(replay(&v, &edge(), &edge()).unwrap());
    let c2 = build(Kind::Ef, &isolated(2), 1, None).unwrap();
    let c1 = build(Kind::Ef, &isolated(1), 1, None).unwrap();
    assert!(!kleisli_iso_search(&c2, &c1).unwrap().result);
    let big = build(Kind::Ef, &isolated(4), 1, None).unwrap();
    assert!(matches!(
        kleisli_iso_search(&big, &big),
        Err(Error::GuardExceeded { .. })
    ));
}

#[test]
fn pe_game_matches_homomorphisms_into_the_carrier() {
    let all = enumerate_structures(&Signature::graph(), &EnumerateOptions::new(2)).unwrap();
    for k in 1..=2 {
        for a in &all {
            let c = build(Kind::Ef, a, k, None).unwrap();
            for b in &all {
                let game = pe_forth(Kind::Ef, a, b, k).unwrap().result;
                assert_eq!(game, hom_exists(&c, b).unwrap().result, "{a:?} {b:?} k={k}");
            }
        }
    }
    let pointed = enumerate_pointed(&Signature::graph(), &EnumerateOptions::new(2)).unwrap();
    for k in 1..=2 {
        for a in &pointed {
            let c = build(Kind::Modal, a, k, None).unwrap();
            for b in &pointed {
                let game = pe_forth(Kind::Modal, a, b, k).unwrap().result;
                assert_eq!(game, hom_exists(&c, b).unwrap().result, "{a:?} {b:?} k={k}");
            }
        }
    }
}

#[test]
fn counting_games_match_kleisli_isomorphisms() {
    let all = enumerate_structures(&Signature::graph(), &EnumerateOptions::new(2)).unwrap();
    for k in 1..=2 {
        for a in &all {
            let ca = build(Kind::Ef, a, k, None).unwrap();
            for b in &all {
                let cb = build(Kind::Ef, b, k, None).unwrap();
                let search = kleisli_iso_search(&ca, &cb).unwrap();
                assert_eq!(
                    count_equiv(Kind::Ef, a, b, k).unwrap().result,
                    search.result,
                    "{a:?} {b:?}"
                );
                if search.result {
                    assert!(replay(&search, a, b).unwrap());
                }
            }
        }
    }
    let sig = Signature::new([("R", 2), ("P", 1)]).unwrap();
    let pointed = enumerate_pointed(&sig, &EnumerateOptions::new(2).up_to_iso()).unwrap();
    for k in 1..=2 {
        for a in &pointed {
            let ca = build(Kind::Modal, a, k, None).unwrap();
            for b in &pointed {
                let cb = build(Kind::Modal, b, k, None).unwrap();
                let search = kleisli_iso_search(&ca, &cb).unwrap().result;
                assert_eq!(
                    count_equiv(Kind::Modal, a, b, k).unwrap().result,
                    search,
                    "{a:?} {b:?} k={k}"
                );
            }
        }
    }
}

#[test]
fn pebble_backends_agree_on_small_graphs() {
    let all = enumerate_structures(&Signature::graph(), &EnumerateOptions::new(3).up_to_iso()).unwrap();
    for k in 1..=3 {
        for a in &all {
            for b in &all {
                let exact = count_equiv_with(Kind::Pebble, a, b, k, CountBackend::Bijective).unwrap();
                let wl = count_equiv_with(Kind::Pebble, a, b, k, CountBackend::Wl).unwrap();
                assert_eq!(exact.result, wl.result, "{a:?} {b:?} k={k}");
            }
        }
    }
}

#[test]
fn witnesses_replay() {
    let all = enumerate_structures(&Signature::graph(), &EnumerateOptions::new(2)).unwrap();
    for fragment in Fragment::ALL {
        for kind in [Kind::Ef, Kind::Pebble] {
            for a in &all {
                for b in &all {
                    let v = decide(&Query::new(fragment, kind, 2).with_witness(true), a, b).unwrap();
                    assert_eq!(v.witness.is_some(), v.result);
                    if v.result {
                        assert!(replay(&v, a, b).unwrap(), "{fragment} {kind} {a:?} {b:?}");
                        // The certificate is for this pair only.
                        if !decide(&Query::new(fragment, kind, 2), b, a).unwrap().result {
                            assert!(!replay(&v, b, a).unwrap_or(false));
                        }
                    }
                }
            }
        }
    }
    let pointed = enumerate_pointed(&Signature::graph(), &EnumerateOptions::new(2)).unwrap();
    for fragment in [Fragment::Pe, Fragment::Count, Fragment::Full] {
        for a in &pointed {
            for b in &pointed {
                let v = decide(&Query::new(fragment, Kind::Modal, 2).with_witness(true), a, b).unwrap();
                if v.result {
                    assert!(replay(&v, a, b).unwrap());
                }
            }
        }
    }
}

#[test]
fn equality_is_invisible_but_counting_is_not() {
    // Without equality one element cannot be told from two copies of it.
    for k in 1..=3 {
        for kind in [Kind::Ef, Kind::Pebble] {
            assert!(
                full_equiv(
                    kind,
                    &lp(),
                    &Structure::digraph(2, &[(0, 0), (1, 1), (0, 1), (1, 0)]).unwrap(),
                    k
                )
                .unwrap()
                .result
            );
        }
    }
}

#[test]
fn pointed_pebble_games_start_on_the_points() {
    let a = Structure::digraph(2, &[(0, 0)]).unwrap();
    let at_loop = a.clone().with_point(Some(0)).unwrap();
    let off_loop = a.with_point(Some(1)).unwrap();
    assert!(!full_equiv(Kind::Pebble, &at_loop, &off_loop, 2).unwrap().result);
    assert!(full_equiv(Kind::Pebble, &at_loop, &at_loop, 2).unwrap().result);
    assert!(pe_forth(Kind::Pebble, &off_loop, &at_loop, 2).unwrap().result);
    assert!(!pe_forth(Kind::Pebble, &at_loop, &off_loop, 2).unwrap().result);
}

#[test]
fn input_validation() {
    let sig = Signature::new([("E", 2), ("P", 1)]).unwrap();
    let other = Structure::new(sig, 1);
    assert!(matches!(
        pe_forth(Kind::Ef, &lp(), &other, 1),
        Err(Error::IncompatibleSignatures)
    ));
    assert!(matches!(
        pe_forth(Kind::Modal, &lp(), &lp(), 1),
        Err(Error::Pointedness(_))
    ));
    let p = lp().with_point(Some(0)).unwrap();
    assert!(matches!(pe_forth(Kind::Ef, &p, &p, 1), Err(Error::Pointedness(_))));
    assert!(matches!(
        pe_forth(Kind::Ef, &lp(), &lp(), 0),
        Err(Error::InvalidInput(_))
    ));
}

#[test]
fn verdicts_are_deterministic() {
    let a = Structure::digraph(3, &[(0, 1), (1, 2), (2, 2)]).unwrap();
    let b = Structure::digraph(3, &[(0, 1), (1, 1), (2, 2)]).unwrap();
    for fragment in Fragment::ALL {
        let q = Query::new(fragment, Kind::Ef, 3).with_witness(true);
        assert_eq!(decide(&q, &a, &b).unwrap(), decide(&q, &a, &b).unwrap());
    }
}
