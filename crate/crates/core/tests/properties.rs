//! Property tests of the public API against brute-force oracles.

use fvm_core::comonads::Kind;
use fvm_core::games::{decide, Fragment, Query};
use fvm_core::spectra::char_poly;
use fvm_core::structures::{
    canonical_code, disjoint_union, find_homomorphism, parse_structure, product, serialize_structure,
};
use fvm_core::Structure;
use num_bigint::BigInt;
use proptest::prelude::*;

/// A digraph on `1..=max` vertices, edges drawn from a bit mask.
fn digraph(max: usize) -> impl Strategy<Value = Structure> {
    (1..=max).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
            let edges: Vec<(u32, u32)> = (0..n * n)
                .filter(|&i| bits[i])
                .map(|i| ((i / n) as u32, (i % n) as u32))
                .collect();
            Structure::digraph(n, &edges).unwrap()
        })
    })
}

/// A loopless undirected graph on `1..=max` vertices.
fn graph(max: usize) -> impl Strategy<Value = Structure> {
    (1..=max).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let pairs: Vec<(u32, u32)> = (0..n as u32)
                .flat_map(|i| (i + 1..n as u32).map(move |j| (i, j)))
                .collect();
            let edges: Vec<(u32, u32)> = pairs
                .into_iter()
                .zip(bits)
                .filter(|(_, b)| *b)
                .map(|(p, _)| p)
                .collect();
            Structure::graph(n, &edges).unwrap()
        })
    })
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<u32>> {
    Just((0..n as u32).collect::<Vec<_>>()).prop_shuffle()
}

fn edge(s: &Structure, x: u32, y: u32) -> bool {
    s.holds(0, &[x, y])
}

/// Tries every map from `a` to `b`.
fn brute_force_hom(a: &Structure, b: &Structure) -> bool {
    let (n, m) = (a.size(), b.size());
    (0..m.pow(n as u32)).any(|mut code| {
        let f: Vec<u32> = (0..n)
            .map(|_| {
                let v = (code % m) as u32;
                code /= m;
                v
            })
            .collect();
        (0..n as u32).all(|x| (0..n as u32).all(|y| !edge(a, x, y) || edge(b, f[x as usize], f[y as usize])))
    })
}

fn undirected_edges(g: &Structure) -> usize {
    g.tuples(0).len() / 2
}

fn triangles(g: &Structure) -> usize {
    let n = g.size() as u32;
    let mut t = 0;
    for x in 0..n {
        for y in x + 1..n {
            for z in y + 1..n {
                if edge(g, x, y) && edge(g, y, z) && edge(g, x, z) {
                    t += 1;
                }
            }
        }
    }
    t
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn json_round_trips(s in digraph(4)) {
        prop_assert_eq!(parse_structure(&serialize_structure(&s)).unwrap(), s);
    }

    #[test]
    fn canonical_code_ignores_relabelling((s, perm) in digraph(4).prop_flat_map(|s| {
        let n = s.size();
        (Just(s), permutation(n))
    })) {
        prop_assert_eq!(canonical_code(&s.permute(&perm)), canonical_code(&s));
    }

    #[test]
    fn relabelled_copies_are_equivalent((s, perm) in digraph(3).prop_flat_map(|s| {
        let n = s.size();
        (Just(s), permutation(n))
    })) {
        let t = s.permute(&perm);
        for fragment in [Fragment::Full, Fragment::Count] {
            let v = decide(&Query::new(fragment, Kind::Ef, 2), &s, &t).unwrap();
            prop_assert!(v.result);
        }
    }

    #[test]
    fn homomorphism_search_matches_brute_force(a in digraph(3), b in digraph(3)) {
        prop_assert_eq!(find_homomorphism(&a, &b).unwrap().is_some(), brute_force_hom(&a, &b));
    }

    /// With as many rounds as `a` has elements, the canonical conjunctive
    /// query of `a` is available, so preservation is exactly a homomorphism.
    #[test]
    fn full_depth_pe_preservation_is_homomorphism(a in digraph(3), b in digraph(3)) {
        let v = decide(&Query::new(Fragment::Pe, Kind::Ef, a.size()), &a, &b).unwrap();
        prop_assert_eq!(v.result, brute_force_hom(&a, &b));
    }

    #[test]
    fn product_counts_multiply(a in digraph(3), b in digraph(3)) {
        let p = product(&[a.clone(), b.clone()]).unwrap();
        prop_assert_eq!(p.size(), a.size() * b.size());
        prop_assert_eq!(p.tuples(0).len(), a.tuples(0).len() * b.tuples(0).len());
    }

    /// The leading coefficients of det(xI - A) are 1, 0, -|E| and -2·triangles.
    #[test]
    fn characteristic_polynomial_counts_edges_and_triangles(g in graph(6)) {
        let p = char_poly(&g).unwrap();
        let c = &p.coefficients;
        prop_assert_eq!(p.degree(), g.size());
        prop_assert_eq!(&c[0], &BigInt::from(1));
        if g.size() >= 2 {
            prop_assert_eq!(&c[1], &BigInt::from(0));
            prop_assert_eq!(&c[2], &-BigInt::from(undirected_edges(&g)));
        }
        if g.size() >= 3 {
            prop_assert_eq!(&c[3], &-BigInt::from(2 * triangles(&g)));
        }
    }

    #[test]
    fn characteristic_polynomial_ignores_relabelling((g, perm) in graph(6).prop_flat_map(|g| {
        let n = g.size();
        (Just(g), permutation(n))
    })) {
        prop_assert_eq!(char_poly(&g.permute(&perm)).unwrap(), char_poly(&g).unwrap());
    }

    /// The spectrum of a disjoint union is the union of the spectra.
    #[test]
    fn characteristic_polynomial_of_a_union_is_a_product(g in graph(4), h in graph(4)) {
        let (pg, ph) = (char_poly(&g).unwrap(), char_poly(&h).unwrap());
        let mut expected = vec![BigInt::from(0); pg.coefficients.len() + ph.coefficients.len() - 1];
        for (i, a) in pg.coefficients.iter().enumerate() {
            for (j, b) in ph.coefficients.iter().enumerate() {
                expected[i + j] += a * b;
            }
        }
        let union = disjoint_union(&g, &h).unwrap();
        prop_assert_eq!(char_poly(&union).unwrap().coefficients, expected);
    }
}
