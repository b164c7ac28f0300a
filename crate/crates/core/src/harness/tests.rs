use super::*;
use crate::instance::Instance;
use crate::relation::{Domain, Relation};
use crate::testutil::{algebra, cstr, eq2, instance, neq2, rel};

#[test]
fn oracle_examples() {
    let chain = instance(2, 3, vec![cstr(&[0, 1], &eq2(2)), cstr(&[1, 2], &eq2(2))]);
    assert_eq!(brute_force_solve(&chain, DEFAULT_ORACLE_CAP).unwrap(), Some(vec![0, 0, 0]));
    assert_eq!(all_solutions(&chain, DEFAULT_ORACLE_CAP).unwrap(), vec![vec![0, 0, 0], vec![1, 1, 1]]);

    let empty = Relation::uniform(2, Domain::full(2), 1, Vec::<Vec<u8>>::new()).unwrap();
    let dead = instance(2, 1, vec![cstr(&[0], &empty)]);
    assert_eq!(brute_force_solve(&dead, DEFAULT_ORACLE_CAP).unwrap(), None);

    let path = instance(2, 3, vec![cstr(&[0, 1], &neq2()), cstr(&[1, 2], &neq2())]);
    assert_eq!(brute_force_solve(&path, DEFAULT_ORACLE_CAP).unwrap(), Some(vec![0, 1, 0]));

    let big = instance(2, 30, vec![]);
    assert!(matches!(brute_force_solve(&big, DEFAULT_ORACLE_CAP), Err(crate::Error::Resource(_))));
    assert!(matches!(all_solutions(&big, 1 << 20), Err(crate::Error::Resource(_))));
    assert_eq!(brute_force_solve(&instance(2, 0, vec![]), 1).unwrap(), Some(vec![]));
}

#[test]
fn oracles_agree() {
    let alg = algebra("min3");
    for seed in 0..200 {
        let cfg = GeneratorConfig { seed, vars: 5, constraints: 6, max_arity: 3, density: 0.35, restrict: 0.2 };
        let inst = generate_instance(&alg, &cfg).unwrap();
        let first = brute_force_solve(&inst, DEFAULT_ORACLE_CAP).unwrap();
        let all = all_solutions(&inst, DEFAULT_ORACLE_CAP).unwrap();
        assert_eq!(first, all.first().cloned());
    }
}

#[test]
fn generator_is_deterministic_and_preserved() {
    for name in NAMED_OPERATIONS {
        let alg = algebra(name);
        for seed in 0..20 {
            let cfg = GeneratorConfig { seed, restrict: 0.3, ..GeneratorConfig::default() };
            let a = generate_instance(&alg, &cfg).unwrap();
            assert_eq!(a, generate_instance(&alg, &cfg).unwrap());
            assert_eq!(a.num_vars(), cfg.vars);
            assert_eq!(a.constraints.len(), cfg.constraints);
            for c in &a.constraints {
                assert!(c.arity() <= cfg.max_arity);
                assert!(c.relation.preserved_by(alg.operation()).unwrap(), "{name}");
                let mut s = c.scope.clone();
                s.sort();
                s.dedup();
                assert_eq!(s.len(), c.arity());
            }
            for d in &a.domains {
                assert!(alg.is_subuniverse(*d));
            }
        }
    }
    let alg = algebra("maj3");
    let bad = GeneratorConfig { density: 1.5, ..GeneratorConfig::default() };
    assert!(generate_instance(&alg, &bad).is_err());
}

#[test]
fn full_density_is_satisfiable() {
    for name in ["maj3", "min3"] {
        let alg = algebra(name);
        for seed in 0..10 {
            let cfg = GeneratorConfig { seed, density: 1.0, ..GeneratorConfig::default() };
            let inst = generate_instance(&alg, &cfg).unwrap();
            assert!(inst.constraints.iter().all(|c| c.relation.is_full()));
            assert!(brute_force_solve(&inst, DEFAULT_ORACLE_CAP).unwrap().is_some());
        }
    }
}

#[test]
fn singleton_closed_under_parity() {
    let w = named_operation("sum3").unwrap();
    let r = rel(2, 2, &[&[0, 1]]);
    assert_eq!(r.close_under(&w).unwrap(), r);
    let two = rel(2, 2, &[&[0, 1], &[1, 1]]);
    assert_eq!(two.close_under(&w).unwrap(), two);
    let three = rel(2, 2, &[&[0, 0], &[0, 1], &[1, 1]]);
    assert!(three.close_under(&w).unwrap().is_full());
}

#[test]
fn write_then_parse_round_trips() {
    for name in ["maj3", "sum3", "median3", "zsum3"] {
        let alg = algebra(name);
        for seed in 0..15 {
            let cfg = GeneratorConfig { seed, restrict: 0.3, ..GeneratorConfig::default() };
            let inst = generate_instance(&alg, &cfg).unwrap();
            let text = write_instance(alg.operation(), &inst);
            let file = parse_instance(&text).unwrap();
            assert_eq!(file.instance, inst);
            assert_eq!(&file.declared, alg.operation());
            assert!(file.operation.is_special_wnu());
            assert_eq!(write_instance(&file.declared, &file.instance), text);
        }
    }
}

const MAJ: &str = "CSPv1
# majority on two elements
algebra 2 3
w 0 0 0 0
w 0 0 1 0
w 0 1 0 0
w 0 1 1 1
w 1 0 0 0
w 1 0 1 1
w 1 1 0 1
w 1 1 1 1
";

#[test]
fn parses_named_items() {
    let text = format!("{MAJ}var a 0 1\nvar b 0 1\nvar c 1\nrel ne 2 2\n0 1\n1 0\ncstr ne a b\ncstr ne b c\n");
    let f = parse_instance(&text).unwrap();
    assert_eq!(f.var_names, ["a", "b", "c"]);
    assert_eq!(f.rel_names, ["ne"]);
    assert_eq!(f.instance.domains[2], Domain::from_bits(0b10));
    let sol = brute_force_solve(&f.instance, DEFAULT_ORACLE_CAP).unwrap();
    assert_eq!(sol, Some(vec![1, 0, 1]));
    assert_eq!(format_outcome(&f.var_names, sol.as_deref()), "SAT\na = 1\nb = 0\nc = 1\n");
    assert_eq!(format_outcome(&f.var_names, None), "UNSAT\n");
}

#[test]
fn parse_errors() {
    let cases = [
        String::new(),
        "CSPv2\n".to_string(),
        "CSPv1\nvar a 0\n".to_string(),
        format!("{MAJ}var a 0 2\n"),
        format!("{MAJ}var a 0\nvar a 1\n"),
        format!("{MAJ}var a 0 1\ncstr r a\n"),
        format!("{MAJ}var a 0 1\nrel r 1 1\n0\ncstr r a a\n"),
        format!("{MAJ}var a 0 1\nvar b 0 1\nrel r 2 1\n0 1\ncstr r a a\n"),
        format!("{MAJ}rel r 2 3\n0 1\n"),
        // Even parity: the majority of 011, 101, 110 is 111.
        format!("{MAJ}rel x 3 4\n0 0 0\n0 1 1\n1 0 1\n1 1 0\n"),
        format!("{MAJ}bogus\n"),
        "CSPv1\nalgebra 2 3\nw 0 0 0 0\nw 0 0 1 0\n".to_string(),
        MAJ.replace("w 0 0 1 0\nw 0 1 0 0", "w 0 1 0 0\nw 0 0 1 0"),
        // The first projection is idempotent but not a WNU.
        "CSPv1\nalgebra 2 2\nw 0 0 0\nw 0 1 0\nw 1 0 1\nw 1 1 1\n".to_string(),
    ];
    for text in &cases {
        let err = parse_instance(text);
        assert!(matches!(err, Err(crate::Error::Input(_))), "{text:?} gave {err:?}");
    }
}

#[test]
fn parse_rejects_unclosed_domain() {
    // Sum mod 3 of four arguments does not keep {0, 1}.
    let w = named_operation("zsum3").unwrap();
    let inst = Instance::new(3, vec![Domain::from_bits(0b11)], vec![]).unwrap();
    let text = write_instance(&w, &inst);
    assert!(matches!(parse_instance(&text), Err(crate::Error::Input(_))));
}

#[test]
fn diff_run_examples() {
    let alg = algebra("maj3");
    let cfg = GeneratorConfig { density: 0.7, ..GeneratorConfig::default() };
    let empty = diff_run(&alg, &cfg, 0, DEFAULT_ORACLE_CAP).unwrap();
    assert!(empty.passed());
    assert_eq!((empty.runs, empty.sat, empty.unsat), (0, 0, 0));

    let report = diff_run(&alg, &cfg, 200, DEFAULT_ORACLE_CAP).unwrap();
    assert!(report.passed(), "{:?}", report.mismatches);
    assert_eq!(report.runs, 200);
    assert_eq!(report.sat + report.unsat, 200);
    assert!(report.sat > 0 && report.unsat > 0);
}

#[test]
fn analyze_reports_every_domain_and_relation() {
    let text = format!("{MAJ}var a 0 1\nvar b 0 1\nrel ne 2 2\n0 1\n1 0\ncstr ne a b\n");
    let f = parse_instance(&text).unwrap();
    let report = analyze(&f).unwrap();
    assert!(report.contains("ne"), "{report}");
    assert!(!report.is_empty());
}
