//! Acceptance criteria, one line each. Runs without the libtest harness so
//! the verdict lines are always printed; exits non-zero if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use common::{point, rng, variants};
use drslab::catalog::{catalog, CatalogProblem};
use drslab::linalg::{rank, sym_eigenvalues};
use drslab::mono::{classify_resolvent, drs_map_matrix, sample_cycles, skew_three_cycle};
use drslab::sampling::{gaussian_matrix, psd_matrix};
use drslab::{
    compare_formulations, BlockSystem64, DrsProblem64, Matrix, OperatorSpec64, PpaSystem64, Vector,
    Verdict,
};
use nalgebra::{dmatrix, dvector};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn problems() -> Vec<CatalogProblem<f64>> {
    catalog::<f64>()
}

fn block_of(p: &DrsProblem64) -> BlockSystem64 {
    BlockSystem64::new(p.a().clone(), p.b().clone(), p.tau(), p.dim()).unwrap()
}

fn formulation_equivalence() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut direct = 0;
    let cat = problems();
    for c in &cat {
        let p = &c.problem;
        let block = block_of(p);
        let mut r = rng(100);
        for _ in 0..10 {
            let z0 = point(&mut r, p.dim(), 3.0);
            let report =
                compare_formulations(p, &z0, 100).map_err(|e| format!("{}: {e}", c.name))?;
            worst = worst.max(report.max_deviation);
            if report.fallback.is_none() {
                direct += 1;
            }
            // Reduced path through the splitting evaluation, available for every problem.
            let mut z = z0.clone();
            let mut v = &z0 / block.sqrt_tau();
            for _ in 0..100 {
                z = p.step(&z).unwrap();
                v = block.reduced_resolvent_via_drs(&v).unwrap();
                worst = worst.max((&z - &v * block.sqrt_tau()).norm());
            }
        }
    }
    let elapsed = start.elapsed();
    check(
        worst <= 1e-8 && elapsed < Duration::from_secs(5) && cat.len() >= 6,
        format!(
            "{} problems x 10 starts x 100 iters, max deviation {worst:.3e} (tol 1e-8), {direct} runs with dense reduced path, {:.2}s",
            cat.len(),
            elapsed.as_secs_f64()
        ),
    )
}

fn ppa_residual_and_metric() -> Outcome {
    let mut worst = 0.0f64;
    let mut rank_ok = true;
    for c in problems() {
        let p = &c.problem;
        let sys = PpaSystem64::new(p.a().clone(), p.b().clone(), p.tau(), p.dim()).unwrap();
        let mut r = rng(200);
        for _ in 0..10 {
            let mut state = drslab::PpaState64::from_z(point(&mut r, p.dim(), 3.0));
            for _ in 0..100 {
                let next = sys.step(&state).unwrap();
                worst = worst.max(sys.inclusion_residual(&state, &next).unwrap());
                state = next;
            }
        }
        let q = sys.metric_matrix();
        let n = sys.n();
        let kernel = sym_eigenvalues(&q).iter().filter(|e| **e == 0.0).count();
        rank_ok &= rank(&q, 1e-12) == n && kernel == 2 * n;
    }
    check(
        worst <= 1e-8 && rank_ok,
        format!(
            "max inclusion residual {worst:.3e} (tol 1e-8), metric rank n / kernel 2n: {rank_ok}"
        ),
    )
}

fn resolvent_validity() -> Outcome {
    let mut min_eig = f64::INFINITY;
    let mut linear = 0;
    for c in problems().into_iter().filter(|c| c.linear) {
        let t = drs_map_matrix(&c.problem).map_err(|e| format!("{}: {e}", c.name))?;
        let cl = classify_resolvent(&t).map_err(|e| format!("{}: {e}", c.name))?;
        min_eig = min_eig.min(cl.min_sym_eigenvalue);
        linear += 1;
    }
    let mut worst_slack = f64::NEG_INFINITY;
    for c in problems() {
        let p = &c.problem;
        let mut r = rng(300);
        for _ in 0..1000 {
            let x = point(&mut r, p.dim(), 3.0);
            let y = point(&mut r, p.dim(), 3.0);
            let d = p.step(&x).unwrap() - p.step(&y).unwrap();
            worst_slack = worst_slack.max(d.norm_squared() - d.dot(&(&x - &y)));
        }
    }
    check(
        min_eig >= -1e-8 && worst_slack <= 1e-10,
        format!(
            "{linear} linear problems, min eig of sym(T^-1 - I) {min_eig:.3e} (tol -1e-8); firm nonexpansiveness worst excess {worst_slack:.3e} (slack 1e-10)"
        ),
    )
}

fn proximality_verdicts() -> Outcome {
    let cat = problems();
    let skew = cat.iter().find(|c| c.name == "skew_zero").unwrap();
    let cl = classify_resolvent(&drs_map_matrix(&skew.problem).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let m_err = (&cl.recovered_m - dmatrix![0.0, -1.0; 1.0, 0.0]).amax();
    let skew_ok = cl.verdict == Verdict::NotProximal && cl.symmetry_defect >= 1.0 && m_err <= 1e-10;
    let mut one_d = 0;
    let mut one_d_ok = true;
    for c in cat.iter().filter(|c| c.linear && c.problem.dim() == 1) {
        let cl = classify_resolvent(&drs_map_matrix(&c.problem).unwrap()).unwrap();
        one_d_ok &= cl.verdict == Verdict::Proximal;
        one_d += 1;
    }
    check(
        skew_ok && one_d_ok && one_d > 0,
        format!(
            "skew: {:?}, defect {:.3}, |M - skew|_max {m_err:.1e} (tol 1e-10); {one_d} one-dimensional problems Proximal: {one_d_ok}",
            cl.verdict, cl.symmetry_defect
        ),
    )
}

fn skew_witness() -> Outcome {
    let w = skew_three_cycle::<f64>(&dmatrix![1.0], &dvector![1.0], &dvector![0.0])
        .map_err(|e| e.to_string())?;
    let xi = w.xi.unwrap();
    let exact = (xi - 2.0).abs() <= 1e-12 && (w.cycle_sum - 2.0).abs() <= 1e-12;
    let mut worst_gap = (xi - w.cycle_sum).abs();
    let mut min_xi = f64::INFINITY;
    let mut r = rng(500);
    let mut draws = 0;
    while draws < 100 {
        let (n1, n2) = (1 + draws % 4, 1 + (draws / 4) % 3);
        let c: Matrix<f64> = gaussian_matrix(&mut r, n2, n1);
        let a1 = point(&mut r, n1, 1.0);
        if (&c * &a1).norm() == 0.0 {
            continue;
        }
        let b1 = point(&mut r, n2, 1.0);
        let w = skew_three_cycle(&c, &a1, &b1).unwrap();
        let xi = w.xi.unwrap();
        min_xi = min_xi.min(xi);
        worst_gap = worst_gap.max((xi - w.cycle_sum).abs());
        draws += 1;
    }
    check(
        exact && min_xi > 0.0 && worst_gap <= 1e-10,
        format!(
            "unit case xi = {xi}, cycle sum = {} (tol 1e-12); 100 draws min xi {min_xi:.3e}; max |xi - cycle sum| {worst_gap:.1e} (tol 1e-10)",
            w.cycle_sum
        ),
    )
}

fn cyclic_dichotomy() -> Outcome {
    let mut r = rng(600);
    let q: Matrix<f64> = psd_matrix(&mut r, 3);
    let sym: Matrix<f64> = psd_matrix(&mut r, 4);
    let specs = [
        ("l1", OperatorSpec64::l1(0.8).unwrap()),
        (
            "quadratic",
            OperatorSpec64::quadratic(q, dvector![1.0, -0.5, 0.0]).unwrap(),
        ),
        (
            "box",
            OperatorSpec64::indicator_box(dvector![-1.0, 0.0], dvector![1.0, 2.0]).unwrap(),
        ),
        (
            "affine",
            OperatorSpec64::indicator_affine(dmatrix![1.0, 2.0, -1.0], dvector![0.5]).unwrap(),
        ),
        ("symmetric_psd", OperatorSpec64::linear(sym).unwrap()),
    ];
    let mut false_alarms = Vec::new();
    for (name, op) in &specs {
        if sample_cycles(op, 6, 10_000, 42)
            .map_err(|e| e.to_string())?
            .is_some()
        {
            false_alarms.push(*name);
        }
    }
    let skew = OperatorSpec64::linear(dmatrix![0.0, -1.0; 1.0, 0.0]).unwrap();
    let found = sample_cycles(&skew, 3, 1000, 7).map_err(|e| e.to_string())?;
    let sum = found.as_ref().map_or(f64::NAN, |w| w.cycle_sum);
    check(
        false_alarms.is_empty() && sum > 1e-8,
        format!(
            "{} cyclically monotone specs, violations found on {false_alarms:?}; skew witness cycle sum {sum:.3e} (need > 1e-8)",
            specs.len()
        ),
    )
}

fn moreau_and_fukushima() -> Outcome {
    let mut worst_moreau = 0.0f64;
    for (_, op, n) in variants() {
        let mut r = rng(700);
        for tau in [0.1, 1.0, 10.0] {
            for _ in 0..100 {
                worst_moreau =
                    worst_moreau.max(op.moreau_residual(tau, &point(&mut r, n, 3.0)).unwrap());
            }
        }
    }
    let mut worst_fuku = 0.0f64;
    let mut systems = 0;
    for c in problems() {
        let block = block_of(&c.problem);
        if block.l_matrix().is_err() {
            continue;
        }
        systems += 1;
        let mut r = rng(701);
        for _ in 0..100 {
            let v = point(&mut r, block.n(), 2.0);
            let a = block.reduced_resolvent_fukushima(&v).unwrap();
            let b = block.reduced_resolvent_via_drs(&v).unwrap();
            worst_fuku = worst_fuku.max((a - b).norm());
        }
    }
    check(
        worst_moreau <= 1e-10 && worst_fuku <= 1e-10 && systems > 0,
        format!(
            "max Moreau residual {worst_moreau:.3e} (tol 1e-10); Fukushima vs splitting on {systems} invertible systems {worst_fuku:.3e} (tol 1e-10)"
        ),
    )
}

fn averagedness() -> Outcome {
    let mut worst = f64::NEG_INFINITY;
    for c in problems() {
        for gamma in [0.5, 1.0, 1.5, 1.9] {
            let p = c.problem.clone().with_gamma(gamma).unwrap();
            let alpha = gamma / 2.0;
            let mut r = rng(800);
            for _ in 0..1000 {
                let x = point(&mut r, p.dim(), 3.0);
                let y = point(&mut r, p.dim(), 3.0);
                let tx = p.relaxed_step(&x).unwrap();
                let ty = p.relaxed_step(&y).unwrap();
                let lhs = (&tx - &ty).norm_squared();
                let rhs = (&x - &y).norm_squared()
                    - (1.0 - alpha) / alpha * ((&x - &tx) - (&y - &ty)).norm_squared();
                worst = worst.max(lhs - rhs);
            }
        }
    }
    check(
        worst <= 1e-10,
        format!("gamma in {{0.5, 1, 1.5, 1.9}}, 1000 pairs per problem, worst excess {worst:.3e} (slack 1e-10)"),
    )
}

fn end_to_end_solve() -> Outcome {
    let start = Instant::now();
    let p = DrsProblem64::new(
        OperatorSpec64::l1(1.0).unwrap(),
        OperatorSpec64::quadratic(dmatrix![1.0], dvector![-1.0]).unwrap(),
        1,
    )
    .unwrap()
    .with_stop_tol(1e-10)
    .unwrap();
    let rec = p.run(&Vector::zeros(1)).map_err(|e| e.to_string())?;
    let x = p.solution(&rec.final_z).unwrap()[0];
    let cert = p
        .solution_certificate(&rec.final_z, 100.0 * p.stop_tol())
        .unwrap();
    let elapsed = start.elapsed();
    check(
        rec.converged() && x.abs() <= 1e-8 && cert && elapsed < Duration::from_secs(1),
        format!(
            "{:?} after {} iterations, x = {x:.3e} (tol 1e-8), certificate {cert}, {:.4}s",
            rec.status,
            rec.iterations(),
            elapsed.as_secs_f64()
        ),
    )
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("formulation equivalence", formulation_equivalence),
        (
            "lifted inclusion residual and degenerate metric",
            ppa_residual_and_metric,
        ),
        ("splitting map is a resolvent", resolvent_validity),
        ("proximality verdicts", proximality_verdicts),
        ("skew three-cycle witness", skew_witness),
        ("cyclic monotonicity dichotomy", cyclic_dichotomy),
        ("Moreau and Fukushima identities", moreau_and_fukushima),
        ("relaxed averagedness", averagedness),
        ("end-to-end L1 + quadratic solve", end_to_end_solve),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let (tag, detail) = match f() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("[{tag}] {}. {name}: {detail}", i + 1);
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
