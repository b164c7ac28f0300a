use std::collections::HashSet;

use proptest::prelude::*;

use super::*;
use crate::relation::Domain;

fn z2xz2() -> Operation {
    // element e = 2*a + b stands for (a, b)
    Operation::from_fn(3, 4, |x| {
        let a = x.iter().map(|&e| e >> 1).sum::<u8>() % 2;
        let b = x.iter().map(|&e| e & 1).sum::<u8>() % 2;
        2 * a + b
    })
    .unwrap()
}

/// Every partition of `elems`.
fn partitions(elems: &[u8]) -> Vec<Vec<Domain>> {
    if elems.is_empty() {
        return vec![Vec::new()];
    }
    let (first, rest) = elems.split_first().unwrap();
    let mut out = Vec::new();
    for p in partitions(rest) {
        for k in 0..p.len() {
            let mut q = p.clone();
            q[k].insert(*first);
            out.push(q);
        }
        let mut q = p.clone();
        q.push(Domain::singleton(*first));
        out.push(q);
    }
    out
}

/// Preservation by applying `w` to every pair of related argument tuples.
fn brute_preserved(c: &Congruence, w: &Operation) -> bool {
    let elems = c.domain().to_vec();
    let pairs: Vec<(u8, u8)> = elems
        .iter()
        .flat_map(|&a| elems.iter().map(move |&b| (a, b)))
        .filter(|&(a, b)| c.related(a, b))
        .collect();
    let m = w.arity();
    let mut idx = vec![0usize; m];
    loop {
        let xs: Vec<u8> = idx.iter().map(|&i| pairs[i].0).collect();
        let ys: Vec<u8> = idx.iter().map(|&i| pairs[i].1).collect();
        if !c.related(w.apply(&xs), w.apply(&ys)) {
            return false;
        }
        let mut j = m;
        loop {
            if j == 0 {
                return true;
            }
            j -= 1;
            idx[j] += 1;
            if idx[j] < pairs.len() {
                break;
            }
            idx[j] = 0;
        }
    }
}

fn brute_congruences(d: Domain, w: &Operation) -> Vec<Congruence> {
    let mut out: Vec<Congruence> = partitions(&d.to_vec())
        .into_iter()
        .map(|p| Congruence::from_classes(d, p).unwrap())
        .filter(|c| brute_preserved(c, w))
        .collect();
    out.sort();
    out
}

#[test]
fn congruence_examples() {
    let maj = Operation::majority();
    assert_eq!(congruences(Domain::full(2), &maj).len(), 2);
    let xor = Operation::sum_mod(2, 3);
    assert_eq!(congruences(Domain::full(2), &xor).len(), 2);
    let v = z2xz2();
    let all = congruences(Domain::full(4), &v);
    assert_eq!(all.len(), 5);
    assert_eq!(all, brute_congruences(Domain::full(4), &v));
    assert_eq!(maximal_congruences(&all).len(), 3);
}

#[test]
fn linear_examples() {
    let xor = Operation::sum_mod(2, 3);
    let s = is_linear(&xor).unwrap();
    assert_eq!(s.primes, vec![2]);
    assert_eq!(s.coords, vec![vec![0], vec![1]]);
    assert!(is_linear(&Operation::majority()).is_none());
    let one = Operation::from_fn(3, 1, |_| 0).unwrap();
    assert_eq!(is_linear(&one).unwrap().primes, Vec::<u8>::new());
    let s = is_linear(&z2xz2()).unwrap();
    assert_eq!(s.primes, vec![2, 2]);
    assert!(s.verify(&z2xz2()));
    let z3 = Operation::sum_mod(3, 4);
    assert_eq!(is_linear(&z3).unwrap().primes, vec![3]);
    // Z_6 = Z_2 x Z_3 under a 7-ary sum
    let z6 = Operation::sum_mod(6, 7);
    assert_eq!(is_linear(&z6).unwrap().primes, vec![2, 3]);
    // Z_4 has exponent 4
    assert!(is_linear(&Operation::sum_mod(4, 5)).is_none());
}

#[test]
fn minimal_linear_examples() {
    let d = Domain::full(2);
    let xor = Operation::sum_mod(2, 3);
    let (c, _) = minimal_linear_congruence(&congruences(d, &xor), &xor, d).unwrap();
    assert!(c.is_identity());
    let maj = Operation::majority();
    let (c, s) = minimal_linear_congruence(&congruences(d, &maj), &maj, d).unwrap();
    assert!(c.is_full());
    assert!(s.primes.is_empty());
    let v = z2xz2();
    let d4 = Domain::full(4);
    let (c, _) = minimal_linear_congruence(&congruences(d4, &v), &v, d4).unwrap();
    assert!(c.is_identity());
}

#[test]
fn irreducibility_examples() {
    let d = Domain::full(2);
    let xor = Operation::sum_mod(2, 3);
    let star = sigma_star(&Congruence::identity(d), &xor, 2).unwrap();
    assert!(star.is_full());
    let maj = Operation::majority();
    assert!(!is_irreducible(&Congruence::identity(d), &maj, 2));
    assert!(sigma_star(&Congruence::full(d), &maj, 2).is_none());
}

#[test]
fn absorption_examples() {
    let d = Domain::full(2);
    let b = CloneBudget::default();
    let maj = Operation::majority();
    let t = find_ternary_absorbing(d, &maj, b).unwrap().unwrap();
    assert_eq!(t.subset, Domain::singleton(0));
    assert!(t.verify(d, 3));
    // the other singleton also absorbs
    let pts = super::absorption::absorption_points(Domain::singleton(1), d, 3);
    assert!(pts.iter().all(|p| Domain::singleton(1).contains(maj.apply(p))));
    assert!(find_binary_absorbing(d, &maj, b).unwrap().is_none());
    let xor = Operation::sum_mod(2, 3);
    assert!(find_binary_absorbing(d, &xor, b).unwrap().is_none());
    assert!(find_ternary_absorbing(d, &xor, b).unwrap().is_none());
}

#[test]
fn classification_examples() {
    let maj = Algebra::new(Operation::majority());
    match maj.classify(Domain::full(2)).unwrap().unwrap() {
        DomainClassification::TernaryAbsorbing(a) => assert_eq!(a.subset, Domain::singleton(0)),
        other => panic!("unexpected {other:?}"),
    }
    let xor = Algebra::new(Operation::sum_mod(2, 3));
    match xor.classify(Domain::full(2)).unwrap().unwrap() {
        DomainClassification::LinearQuotient(c, s) => {
            assert!(c.is_identity());
            assert_eq!(s.primes, vec![2]);
        }
        other => panic!("unexpected {other:?}"),
    }
    assert!(xor.classify(Domain::singleton(0)).unwrap().is_none());
    // a semilattice has a binary absorbing singleton (its bottom)
    let min = Algebra::new(Operation::min3(3));
    assert!(matches!(
        min.classify(Domain::full(3)).unwrap().unwrap(),
        DomainClassification::BinaryAbsorbing(a) if a.subset == Domain::singleton(0)
    ));
}

#[test]
fn affine_majority_structure() {
    let alg = Algebra::new(Operation::affine_majority());
    let info = alg.info(Domain::full(3)).unwrap();
    // {0,1}|{2} is the only nontrivial congruence
    assert_eq!(info.congruences.len(), 3);
    let c = alg.classify(Domain::full(3)).unwrap().unwrap();
    assert!(c.to_json().contains(c.kind()));
}

/// Random idempotent ternary operation on `n` elements.
fn idempotent_op() -> impl Strategy<Value = Operation> {
    (2usize..=4).prop_flat_map(|n| {
        proptest::collection::vec(0..n as u8, n * n * n).prop_map(move |mut t| {
            for a in 0..n {
                t[a * n * n + a * n + a] = a as u8;
            }
            Operation::new(3, n, t).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn congruences_match_partition_filter(w in idempotent_op()) {
        let d = Domain::full(w.size());
        let all = congruences(d, &w);
        prop_assert_eq!(&all, &brute_congruences(d, &w));
        let set: HashSet<&Congruence> = all.iter().collect();
        for a in &all {
            prop_assert!(a.is_preserved_by(&w));
            for b in &all {
                prop_assert!(set.contains(&a.meet(b)));
                prop_assert!(set.contains(&a.join(b)));
            }
        }
    }

    #[test]
    fn linear_structures_round_trip(w in idempotent_op()) {
        if let Some(s) = is_linear(&w) {
            prop_assert!(s.verify(&w));
        }
    }

    #[test]
    fn sigma_star_matches_enumeration(w in idempotent_op()) {
        let d = Domain::full(w.size());
        prop_assume!(w.size() <= 3);
        for sigma in congruences(d, &w) {
            if sigma.is_full() {
                continue;
            }
            // all binary subuniverses of D^2 that contain sigma and are
            // unions of sigma-blocks
            let blocks: Vec<(u8, u8)> = (0..sigma.num_classes() as u8)
                .flat_map(|a| (0..sigma.num_classes() as u8).map(move |b| (a, b)))
                .filter(|(a, b)| a != b)
                .collect();
            let mut strict = Vec::new();
            for mask in 1u32..(1 << blocks.len()) {
                let pairs: HashSet<(u8, u8)> = (0..sigma.num_classes() as u8).map(|a| (a, a))
                    .chain(blocks.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p))
                    .collect();
                let rel = sigma.lift(w.size(), &pairs);
                if rel.preserved_by(&w).unwrap() {
                    strict.push(rel);
                }
            }
            let sigma_rel = sigma.to_relation(w.size());
            let meet = strict.iter().skip(1).fold(strict.first().cloned(), |acc, r| acc.map(|a| a.intersect(r)));
            let irreducible = meet.as_ref().is_some_and(|m| *m != sigma_rel);
            let star = sigma_star(&sigma, &w, w.size());
            prop_assert_eq!(star.is_some(), irreducible);
            if let Some(s) = star {
                prop_assert!(strict.iter().all(|r| s.is_subset(r)));
                prop_assert!(strict.contains(&s));
            }
        }
    }
}

#[test]
fn derives_special_wnu_on_three_elements() {
    // symmetric idempotent WNU; x∘y = w(x,x,y) is not special here
    let table = vec![0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 2];
    let w = Operation::new(3, 3, table).unwrap();
    assert!(w.is_wnu() && !w.is_special_wnu());
    let s = derive_special_wnu(&w, CloneBudget::default()).unwrap();
    assert!(s.is_special_wnu());
    assert_eq!(s.arity(), 3);
    let points = super::clone::tuples_over(Domain::full(3), 3);
    let member = search_clone(&w, &points, 3, CloneBudget::default(), |f| f == s.table()).unwrap();
    assert!(member.is_some());
    assert!(derive_special_wnu(&Operation::from_fn(3, 2, |a| a[0]).unwrap(), CloneBudget::default()).is_err());
}
