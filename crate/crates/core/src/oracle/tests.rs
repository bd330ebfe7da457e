use super::*;
use crate::pcp::{cyclic4, dihedral8};

const SEQ: Execution = Execution::Sequential;

/// Table of a permutation group given as a list of permutations with the
/// identity first; `x * y` applies `x` then `y`.
fn perm_group(perms: &[Vec<usize>]) -> FiniteGroup {
    let compose = |a: &Vec<usize>, b: &Vec<usize>| a.iter().map(|&k| b[k]).collect::<Vec<_>>();
    let table = perms
        .iter()
        .map(|a| {
            perms
                .iter()
                .map(|b| perms.iter().position(|c| *c == compose(a, b)).expect("closed"))
                .collect()
        })
        .collect();
    let labels = (0..perms.len()).map(|k| ExponentVector(vec![k as i64])).collect();
    FiniteGroup::from_table(table, labels).unwrap()
}

fn s3() -> FiniteGroup {
    perm_group(&[
        vec![0, 1, 2],
        vec![1, 0, 2],
        vec![0, 2, 1],
        vec![2, 1, 0],
        vec![1, 2, 0],
        vec![2, 0, 1],
    ])
}

#[test]
fn cyclic_four() {
    let g = enumerate(&cyclic4(), DEFAULT_GUARD, SEQ).unwrap();
    assert_eq!(g.order(), 4);
    assert_eq!(exponent(&g), 4);
    assert_eq!(involutions(&g).len(), 1);
    assert!(is_abelian(&g, &(0..4).collect::<Vec<_>>()));
    assert_eq!(derived_length(&g, &(0..4).collect::<Vec<_>>()), 1);
    let r2 = right_2_engel_set(&g, SEQ);
    assert_eq!(r2.order(), 4);
    let rep = check_lemma(&g, SEQ).unwrap();
    assert!(rep.lemma_pass);
    assert_eq!(rep.quotient_order, 1);
}

#[test]
fn dihedral_matches_symmetries_of_the_square() {
    let g = enumerate(&dihedral8(), DEFAULT_GUARD, SEQ).unwrap();
    assert_eq!(g.order(), 8);
    assert_eq!(collector_disagreement(&g, &dihedral8(), SEQ).unwrap(), None);
    // independent model: s = (0 1)(2 3), t = (1 3); g0 -> s, g1 -> t, g2 -> [t, s]
    let s = vec![1, 0, 3, 2];
    let t = vec![0, 3, 2, 1];
    let compose = |a: &[usize], b: &[usize]| a.iter().map(|&k| b[k]).collect::<Vec<usize>>();
    let inv = |a: &[usize]| {
        let mut o = vec![0; 4];
        for (k, &x) in a.iter().enumerate() {
            o[x] = k;
        }
        o
    };
    let z = compose(&compose(&compose(&inv(&t), &inv(&s)), &t), &s);
    let id = vec![0, 1, 2, 3];
    let perm_of = |v: &ExponentVector| {
        let mut acc = id.clone();
        for (k, m) in [&s, &t, &z].iter().enumerate() {
            for _ in 0..v.0[k] {
                acc = compose(&acc, m);
            }
        }
        acc
    };
    let perms: Vec<Vec<usize>> = g.labels().iter().map(perm_of).collect();
    let model = perm_group(&perms);
    for a in 0..8 {
        for b in 0..8 {
            assert_eq!(model.mul(a, b), g.mul(a, b));
        }
    }
    let all: Vec<usize> = (0..8).collect();
    assert_eq!(nilpotency_class_of_subgroup(&g, &all), Some(2));
    assert_eq!(derived_length(&g, &all), 2);
    assert_eq!(exponent(&g), 4);
    assert_eq!(right_2_engel_set(&g, SEQ).order(), 8);
    assert!(check_lemma(&g, SEQ).unwrap().lemma_pass);
}

#[test]
fn symmetric_group_of_degree_three() {
    let g = s3();
    let all: Vec<usize> = (0..6).collect();
    assert_eq!(nilpotency_class_of_subgroup(&g, &all), None);
    assert_eq!(derived_length(&g, &all), 2);
    let r2 = right_2_engel_set(&g, SEQ);
    assert_eq!(r2.members, vec![0]);
    // a transposition generates a subgroup that is not normal
    let h = SubgroupWitness::new(&g, generated_subgroup(&g, &[1]), vec![1], SEQ);
    assert!(h.is_subgroup && !h.is_normal);
    assert_eq!(quotient(&g, &h, SEQ).unwrap_err(), OracleError::NotNormal);
    let a3 = SubgroupWitness::new(&g, generated_subgroup(&g, &[4]), vec![4], SEQ);
    assert!(a3.is_normal);
    assert_eq!(quotient(&g, &a3, SEQ).unwrap().order(), 2);
    assert_eq!(check_lemma(&g, SEQ).unwrap_err(), OracleError::ExponentTooLarge(6));
    let not_sub = SubgroupWitness::new(&g, vec![0, 1, 2], vec![], SEQ);
    assert!(!not_sub.is_subgroup);
    assert_eq!(not_sub.nilpotency_class, None);
}

#[test]
fn trivial_and_full_quotients() {
    let g = enumerate(&dihedral8(), DEFAULT_GUARD, SEQ).unwrap();
    let one = SubgroupWitness::new(&g, vec![0], vec![], SEQ);
    let q = quotient(&g, &one, SEQ).unwrap();
    assert!(q.same_table(&g));
    let all = SubgroupWitness::new(&g, (0..8).collect(), vec![], SEQ);
    assert_eq!(quotient(&g, &all, SEQ).unwrap().order(), 1);
}

#[test]
fn engel_involutions_have_abelian_closures() {
    for g in [enumerate(&dihedral8(), 64, SEQ).unwrap(), enumerate(&cyclic4(), 64, SEQ).unwrap()] {
        let invs = involutions(&g);
        assert_eq!((invs.len() + 1) % 2, 0);
        for u in invs {
            let nc = normal_closure(&g, u, SEQ);
            assert!(nc.is_normal && nc.contains(u));
            assert_eq!(is_left_2_engel(&g, u), is_abelian(&g, &nc.members));
        }
    }
}

#[test]
fn guards_and_bad_tables() {
    assert!(matches!(
        enumerate(&dihedral8(), 4, SEQ),
        Err(OracleError::TooLarge { .. })
    ));
    let bad = vec![vec![0, 1], vec![1, 1]];
    let labels = vec![ExponentVector(vec![0]), ExponentVector(vec![1])];
    assert!(FiniteGroup::from_table(bad, labels.clone()).is_err());
    let swapped = vec![vec![1, 0], vec![0, 1]];
    assert!(FiniteGroup::from_table(swapped, labels).is_err());
}

#[test]
fn rewriting_reaches_normal_forms() {
    let p = dihedral8();
    // (g0 g1)^4 = 1
    assert!(rewrite_word(&p, &[0, 1, 0, 1, 0, 1, 0, 1]).unwrap().is_identity());
    assert_eq!(rewrite_word(&p, &[1, 0]).unwrap(), ExponentVector(vec![1, 1, 1]));
    assert!(rewrite_word(&cyclic4(), &[0, 0, 0, 0]).unwrap().is_identity());
}
