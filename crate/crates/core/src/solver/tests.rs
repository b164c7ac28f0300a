use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::algebra::Operation;
use crate::harness::{all_solutions, brute_force_solve};
use crate::instance::Constraint;
use crate::relation::Relation;
use crate::testutil::{algebra, cstr, eq2, instance, neq2, rel, sample};

fn neq_path(n: usize, cycle: bool) -> Instance {
    let mut cs: Vec<Constraint> = (0..n - 1).map(|i| cstr(&[i, i + 1], &neq2())).collect();
    if cycle {
        cs.push(cstr(&[n - 1, 0], &neq2()));
    }
    instance(2, n, cs)
}

fn oracle_sat(inst: &Instance) -> bool {
    brute_force_solve(inst, 1 << 24).unwrap().is_some()
}

fn check_bounds(s: &Solver<'_>) {
    for (&k, &d) in &s.stats().max_depth {
        let kind = match k {
            1 => RecursionKind::DomainReduction,
            2 => RecursionKind::NonLinked,
            3 => RecursionKind::Weakened,
            _ => RecursionKind::LinearReduction,
        };
        assert!(d <= s.depth_bound(kind), "kind {k} reached depth {d}");
    }
}

#[test]
fn small_examples() {
    for name in ["maj3", "sum3"] {
        let alg = algebra(name);
        let mut s = Solver::new(&alg);
        let w = s.solve(&neq_path(3, false)).unwrap().unwrap();
        assert!(w == [0, 1, 0] || w == [1, 0, 1], "{w:?}");
        assert_eq!(s.decide(&neq_path(3, true)).unwrap(), Decision::Unsat);
        assert_eq!(s.solve(&neq_path(5, true)).unwrap(), None);
        assert!(s.decide(&neq_path(6, true)).unwrap().is_sat());

        let empty = instance(2, 4, vec![]);
        let w = s.solve(&empty).unwrap().unwrap();
        assert_eq!(w.len(), 4);

        let chain = instance(2, 3, vec![cstr(&[0, 1], &eq2(2)), cstr(&[1, 2], &eq2(2))]);
        let w = s.solve(&chain).unwrap().unwrap();
        assert!(w == [0, 0, 0] || w == [1, 1, 1]);

        let dead = instance(2, 2, vec![cstr(&[0], &Relation::uniform(2, Domain::full(2), 1, Vec::<Vec<u8>>::new()).unwrap())]);
        assert_eq!(s.decide(&dead).unwrap(), Decision::Unsat);
        check_bounds(&s);
    }
}

#[test]
fn depth_bounds() {
    let alg = algebra("maj3");
    let s = Solver::new(&alg);
    assert_eq!(s.depth_bound(RecursionKind::NonLinked), 2);
    assert_eq!(s.depth_bound(RecursionKind::LinearReduction), 2);
    assert_eq!(s.depth_bound(RecursionKind::Weakened), 15);
    let alg = algebra("min3");
    let s = Solver::new(&alg);
    assert_eq!(s.depth_bound(RecursionKind::Weakened), 511);
}

#[test]
fn rejects_bad_input() {
    let alg = algebra("maj3");
    let mut s = Solver::new(&alg);
    let three = instance(3, 2, vec![cstr(&[0, 1], &eq2(3))]);
    assert!(matches!(s.decide(&three), Err(crate::Error::Usage(_))));

    // {0, 1} is not closed under the 4-ary sum mod 3.
    let alg = algebra("zsum3");
    let mut s = Solver::new(&alg);
    let inst = Instance::new(3, vec![Domain::from_bits(0b11), Domain::full(3)], vec![]).unwrap();
    assert!(matches!(s.decide(&inst), Err(crate::Error::Usage(_))));
}

#[test]
fn agrees_with_oracle_on_samples() {
    for (name, density, count) in
        [("maj3", 0.7, 300), ("sum3", 0.7, 300), ("min3", 0.4, 120), ("affmaj", 0.4, 120), ("median3", 0.4, 120), ("zsum3", 0.4, 120)]
    {
        let alg = algebra(name);
        let mut sat = 0;
        for inst in sample(&alg, count, 5, density) {
            let mut s = Solver::new(&alg);
            let got = s.solve(&inst).unwrap();
            let want = oracle_sat(&inst);
            assert_eq!(got.is_some(), want, "{name}: {inst:?}");
            if let Some(w) = got {
                assert!(inst.is_solution(&w));
                sat += 1;
            }
            check_bounds(&s);
        }
        assert!(sat > 0 && sat < count, "{name}: {sat} of {count} satisfiable");
    }
}

#[test]
fn audited_reductions_hold() {
    for name in ["maj3", "sum3", "min3", "affmaj"] {
        let alg = algebra(name);
        let density = if alg.size() == 2 { 0.7 } else { 0.4 };
        let mut events = 0;
        for inst in sample(&alg, 60, 5, density) {
            let config = SolverConfig { audit_max_vars: Some(8), ..SolverConfig::default() };
            let mut s = Solver::with_config(&alg, config);
            s.decide(&inst).unwrap();
            for e in &s.audit_log().events {
                events += 1;
                let before = all_solutions(&e.before, 1 << 24).unwrap();
                match (&e.after, e.kind) {
                    (None, _) => assert!(before.is_empty(), "{}: {:?}", e.step, e.before),
                    (Some(after), AuditKind::Solutions) => {
                        assert_eq!(all_solutions(after, 1 << 24).unwrap(), before, "{}", e.step)
                    }
                    (Some(after), AuditKind::Satisfiability) => {
                        assert_eq!(oracle_sat(after), !before.is_empty(), "{}", e.step)
                    }
                }
            }
        }
        assert!(events > 0, "{name}");
    }
}

#[test]
fn solve_is_deterministic() {
    let alg = algebra("median3");
    for inst in sample(&alg, 20, 5, 0.4) {
        let a = Solver::new(&alg).solve(&inst).unwrap();
        let b = Solver::new(&alg).solve(&inst).unwrap();
        assert_eq!(a, b);
    }
}

/// Random systems of equations mod 4; each constraint is the solution set
/// of one equation on two or three variables.
fn z4_system(rng: &mut ChaCha8Rng, n: usize, m: usize) -> Instance {
    let cs = (0..m)
        .map(|_| {
            let k = rng.gen_range(2..=3usize.min(n));
            let mut scope: Vec<usize> = Vec::new();
            while scope.len() < k {
                let v = rng.gen_range(0..n);
                if !scope.contains(&v) {
                    scope.push(v);
                }
            }
            let coeffs: Vec<u32> = (0..k).map(|_| rng.gen_range(0..4)).collect();
            let rhs = rng.gen_range(0..4u32);
            let mut tuples = Vec::new();
            for code in 0..4usize.pow(k as u32) {
                let t: Vec<u8> = (0..k).map(|i| (code / 4usize.pow(i as u32) % 4) as u8).collect();
                if t.iter().zip(&coeffs).map(|(&a, &c)| a as u32 * c).sum::<u32>() % 4 == rhs {
                    tuples.push(t);
                }
            }
            let r = Relation::uniform(4, Domain::full(4), k, tuples).unwrap();
            Constraint::new(scope, r).unwrap()
        })
        .collect();
    instance(4, n, cs)
}

#[test]
fn z4_systems_match_oracle() {
    let w = Operation::from_fn(5, 4, |x| (x.iter().map(|&a| a as u32).sum::<u32>() % 4) as u8).unwrap();
    let alg = crate::algebra::Algebra::new(w);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut linear = 0;
    let mut outcomes = [0usize; 2];
    for _ in 0..120 {
        let n = rng.gen_range(4..=7);
        let m = rng.gen_range(2..=4);
        let inst = z4_system(&mut rng, n, m);
        let mut s = Solver::new(&alg);
        let got = s.solve(&inst).unwrap();
        assert_eq!(got.is_some(), oracle_sat(&inst), "{inst:?}");
        if let Some(w) = &got {
            assert!(inst.is_solution(w));
        }
        outcomes[got.is_some() as usize] += 1;
        linear += s.stats().steps.get("9:linear").copied().unwrap_or(0);
        check_bounds(&s);
    }
    assert!(outcomes[0] > 0 && outcomes[1] > 0, "{outcomes:?}");
    assert!(linear > 0);
}

#[test]
fn linear_phase_on_parity() {
    // x0 + x1 + x2 = 1 and x2 + x3 + x0 = 0 over Z_2.
    let alg = algebra("sum3");
    let odd = rel(2, 3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 1]]);
    let even = rel(2, 3, &[&[0, 0, 0], &[1, 1, 0], &[1, 0, 1], &[0, 1, 1]]);
    let inst = instance(2, 4, vec![cstr(&[0, 1, 2], &odd), cstr(&[2, 3, 0], &even)]);
    let mut s = Solver::new(&alg);
    let w = s.solve(&inst).unwrap().unwrap();
    assert!(inst.is_solution(&w));
    assert!(s.stats().steps.contains_key("9:linear"), "{:?}", s.stats().steps);

    // Adding x1 + x3 = 0 makes it inconsistent: the sum of all three is 1 = 0.
    let inst = instance(2, 4, vec![cstr(&[0, 1, 2], &odd), cstr(&[2, 3, 0], &even), cstr(&[1, 3], &eq2(2))]);
    assert_eq!(Solver::new(&alg).decide(&inst).unwrap(), Decision::Unsat);
}
