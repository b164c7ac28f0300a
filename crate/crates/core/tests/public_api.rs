mod common;

use common::*;
use csp_core::algebra::Algebra;
use csp_core::harness::{brute_force_solve, format_outcome, generate_instance, named_operation, parse_instance, write_instance, GeneratorConfig};
use csp_core::solver::Solver;
use csp_core::{Decision, Instance};

const PARITY: &str = "CSPv1
algebra 2 3
w 0 0 0 0
w 0 0 1 1
w 0 1 0 1
w 0 1 1 0
w 1 0 0 1
w 1 0 1 0
w 1 1 0 0
w 1 1 1 1
var a 0 1
var b 0 1
var c 0 1
rel ne 2 2
0 1
1 0
cstr ne a b
cstr ne b c
";

#[test]
fn file_to_verdict() {
    let file = parse_instance(PARITY).unwrap();
    let alg = Algebra::new(file.operation.clone());
    let sol = Solver::new(&alg).solve(&file.instance).unwrap();
    let x = sol.as_deref().unwrap();
    assert!(file.instance.is_solution(x));
    let text = format_outcome(&file.var_names, sol.as_deref());
    assert!(text.starts_with("SAT\na = "), "{text}");

    let odd = format!("{PARITY}cstr ne c a\n");
    let file = parse_instance(&odd).unwrap();
    assert_eq!(Solver::new(&alg).decide(&file.instance).unwrap(), Decision::Unsat);
}

#[test]
fn empty_instance_is_satisfiable() {
    let alg = Algebra::new(named_operation("median3").unwrap());
    let inst = Instance::new(3, vec![csp_core::relation::Domain::full(3); 3], vec![]).unwrap();
    let x = Solver::new(&alg).solve(&inst).unwrap().unwrap();
    assert_eq!(x.len(), 3);
}

#[test]
fn generated_files_replay() {
    let alg = Algebra::new(named_operation("affmaj").unwrap());
    for seed in 0..40 {
        let cfg = GeneratorConfig { seed, density: 0.4, restrict: 0.2, ..GeneratorConfig::default() };
        let inst = generate_instance(&alg, &cfg).unwrap();
        let file = parse_instance(&write_instance(alg.operation(), &inst)).unwrap();
        let a = Solver::new(&alg).solve(&inst).unwrap();
        let b = Solver::new(&Algebra::new(file.operation.clone())).solve(&file.instance).unwrap();
        assert_eq!(a.is_some(), b.is_some());
        assert_eq!(a.is_some(), brute_force_solve(&inst, 1 << 20).unwrap().is_some());
    }
}

#[test]
fn neq_paths_and_cycles() {
    let alg = Algebra::new(named_operation("sum3").unwrap());
    let x = Solver::new(&alg).solve(&neq_chain(3, false)).unwrap().unwrap();
    assert!(x == [0, 1, 0] || x == [1, 0, 1]);
    for n in 3..=9 {
        let got = Solver::new(&alg).decide(&neq_chain(n, true)).unwrap();
        assert_eq!(got.is_sat(), n % 2 == 0);
    }
}
