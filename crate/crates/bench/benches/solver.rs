use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use seqsat_bench::random_3sat;
use seqsat_core::{Solver, SolverConfig};

fn random_3sat_threshold(c: &mut Criterion) {
    let mut group = c.benchmark_group("random_3sat");
    for vars in [50u32, 100, 150] {
        let clauses = (vars as f64 * 4.26) as usize;
        let formulas: Vec<_> = (0..8).map(|seed| random_3sat(vars, clauses, seed)).collect();
        group.bench_with_input(BenchmarkId::from_parameter(vars), &formulas, |b, formulas| {
            b.iter(|| {
                for cnf in formulas {
                    let config = SolverConfig { check_models: false, ..SolverConfig::default() };
                    Solver::from_cnf(cnf, config).solve(&[]);
                }
            })
        });
    }
    group.finish();
}

fn incremental_assumptions(c: &mut Criterion) {
    let cnf = random_3sat(120, 400, 7);
    c.bench_function("assumption_sweep", |b| {
        b.iter(|| {
            let mut solver = Solver::from_cnf(&cnf, SolverConfig { check_models: false, ..SolverConfig::default() });
            for v in 1..=40i64 {
                let lit = seqsat_core::Lit::from_dimacs(if v % 2 == 0 { v } else { -v }).unwrap();
                solver.solve(&[lit]);
            }
        })
    });
}

criterion_group!(benches, random_3sat_threshold, incremental_assumptions);
criterion_main!(benches);
