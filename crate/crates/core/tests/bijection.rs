use std::collections::HashSet;

use hypercat_core::plane::{
    admissible_labelings, alpha, beta, canonical_tour, convert, enumerate_plane_trees,
    enumerate_tours, equivalent_tours, CatalanObject,
};
use hypercat_core::trees::catalog;
use hypercat_core::{BallotSequence, DyckPath, FreeTree, MLabeling, TourWord};

const TOUR_LIMIT: usize = 1_000_000;

/// For every tree and tour, alpha lands on an admissible labeling and beta
/// brings back an equivalent tour on the same tree.
fn tours_roundtrip(max_vertices: usize, m: usize) -> usize {
    let mut checked = 0;
    for n in 1..=max_vertices {
        for t in catalog(n, None).unwrap() {
            for v in 0..n {
                for w in enumerate_tours(&t, v, m, TOUR_LIMIT).unwrap() {
                    let (pt, lab) = alpha(&t, &w).unwrap();
                    assert_eq!(pt.k(), (n - 1) * m + 1);
                    assert!(lab.is_admissible(&pt));
                    let (t2, w2) = beta(&pt, &lab).unwrap();
                    assert_eq!(t2, t);
                    assert!(equivalent_tours(&t, &w, &w2).unwrap(), "{t:?} {w:?} {w2:?}");
                    checked += 1;
                }
            }
        }
    }
    checked
}

/// For every admissibly labeled plane tree, beta then alpha is the identity.
fn labelings_roundtrip(max_edges: usize, m: usize) {
    for n in 0..=max_edges {
        for pt in enumerate_plane_trees(n * m + 1).unwrap() {
            for lab in admissible_labelings(&pt, m) {
                let (t, w) = beta(&pt, &lab).unwrap();
                assert_eq!(t.n(), n + 1);
                let (pt2, lab2) = alpha(&t, &w).unwrap();
                assert_eq!(pt2, pt);
                // the empty walk on one vertex is a tour for every m
                assert_eq!(lab2.blocks(), lab.blocks());
                if n > 0 {
                    assert_eq!(lab2, lab);
                }
            }
        }
    }
}

#[test]
fn roundtrips_m1() {
    assert!(tours_roundtrip(5, 1) > 0);
    labelings_roundtrip(4, 1);
}

#[test]
fn roundtrips_m2() {
    assert!(tours_roundtrip(4, 2) > 0);
    labelings_roundtrip(3, 2);
}

#[test]
fn orbits_of_tours_match_labeled_plane_trees() {
    // distinct (tree, tour) classes up to automorphism correspond one to one
    // with admissibly labeled plane trees
    for m in 1..=2usize {
        let max_vertices = if m == 1 { 5 } else { 4 };
        for n in 1..=max_vertices {
            let mut classes = HashSet::new();
            for t in catalog(n, None).unwrap() {
                for v in 0..n {
                    for w in enumerate_tours(&t, v, m, TOUR_LIMIT).unwrap() {
                        classes.insert((t.clone(), canonical_tour(&t, &w).unwrap()));
                    }
                }
            }
            let labeled: usize = enumerate_plane_trees((n - 1) * m + 1)
                .unwrap()
                .map(|pt| admissible_labelings(&pt, m).len())
                .sum();
            assert_eq!(classes.len(), labeled, "n={n} m={m}");
        }
    }
}

#[test]
fn spider_walk() {
    // center v = 0 with legs a = 1 (extended by d = 4), b = 2, c = 3
    let edges = [(0, 1), (1, 4), (0, 2), (0, 3)];
    let (t, relabel) = FreeTree::from_edges(5, &edges).unwrap();
    let (v, a, b, c, d) = (0, 1, 2, 3, 4);
    let walk = [v, a, d, a, v, b, v, a, d, a, v, c, v, b, v, c, v];
    let w = TourWord::new(walk.iter().map(|&x| relabel[x]).collect());
    assert_eq!(w.validate(&t).unwrap(), 2);
    let (pt, lab) = alpha(&t, &w).unwrap();
    assert_eq!(pt.k(), 9);
    assert_eq!(pt.to_dyck().to_string(), "UUDDUDUUDDUDUDUD");
    assert_eq!(lab.blocks().len(), 4);
    assert!(lab.is_admissible(&pt));
    let (t2, w2) = beta(&pt, &lab).unwrap();
    assert_eq!(t2, t);
    assert!(equivalent_tours(&t, &w, &w2).unwrap());
}

#[test]
fn encodings_roundtrip() {
    for k in 1..=9 {
        let mut seen = HashSet::new();
        for pt in enumerate_plane_trees(k).unwrap() {
            let path = pt.to_dyck();
            let ballot = path.to_ballot();
            for obj in [
                CatalanObject::Tree(pt.clone()),
                CatalanObject::Dyck(path.clone()),
                CatalanObject::Ballot(ballot.clone()),
            ] {
                let (t2, p2, b2) = convert(&obj);
                assert_eq!((t2, &p2, &b2), (pt.clone(), &path, &ballot));
            }
            assert_eq!(path.to_string().parse::<DyckPath>().unwrap(), path);
            assert_eq!(
                BallotSequence::new(ballot.entries().to_vec()).unwrap(),
                ballot
            );
            assert!(seen.insert(path));
        }
    }
}

#[test]
fn slabs_and_pairs_carry_the_levels() {
    for pt in enumerate_plane_trees(8).unwrap() {
        let path = pt.to_dyck();
        // non-root vertices in preorder line up with up-steps
        let levels: Vec<u32> = (1..pt.k()).map(|v| pt.level(v)).collect();
        let parents: Vec<Option<usize>> = (1..pt.k())
            .map(|v| pt.parent(v).filter(|&p| p != 0).map(|p| p - 1))
            .collect();
        let slabs = path.slabs();
        assert_eq!(slabs.iter().map(|s| s.0).collect::<Vec<_>>(), levels);
        assert_eq!(slabs.iter().map(|s| s.1).collect::<Vec<_>>(), parents);
        let pairs = path.to_ballot().pairs();
        assert_eq!(pairs.iter().map(|p| p.2).collect::<Vec<_>>(), levels);
        for &(i, j, _) in &pairs {
            assert!(i < j);
        }
    }
}

#[test]
fn labeling_rejects_non_partition() {
    let pt = enumerate_plane_trees(5).unwrap().last().unwrap();
    // star: root with four children 1..=4
    let lab = MLabeling::new(2, vec![vec![1, 2], vec![3, 4]]).unwrap();
    assert!(lab.is_admissible(&pt));
    let partial = MLabeling::new(2, vec![vec![1, 2]]).unwrap();
    assert!(!partial.is_admissible(&pt));
    assert!(beta(&pt, &partial).is_err());
}
