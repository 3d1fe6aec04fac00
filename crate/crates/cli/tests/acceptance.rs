//! Acceptance criteria 1-9. Every criterion runs, prints one PASS/FAIL line,
//! and the process exits nonzero if any failed.

use std::fs;
use std::path::Path;
use std::time::Instant;

use rand::Rng;

use haarquench::bounds::{corollary1_bound, expected_purity, solvable_timescale_bound, BoundStatus};
use haarquench::dynamics::QuadratureGrid;
use haarquench::haar::{haar_unitary_from_rng, SeedStream};
use haarquench::model::{
    basis_vector, random_local_hamiltonian, separable_mixture, spectrum_from_solvable, DensityMatrix, LatticeSpec,
    SeparableComponent, SolvableSpectrumSpec, SpectrumTable, SubsystemSplit,
};
use haarquench::montecarlo::{estimate_delta, estimate_purity, estimate_trace_distance, markov_empirical_check, InitialState};
use haarquench::partition::{
    appendix_ledger, build_partition, constants_for, derivation_csv, replay_derivation_csv, solvable_constants,
    LedgerConfig, Partition,
};
use haarquench::spectral::{phi_direct, phi_solvable_abs, sigma2_from_spectrum};
use haarquench::CMatrix;

const MASTER_SEED: u64 = 20_240_601;
/// Standard errors allowed in every Monte Carlo comparison.
const SE_GATE: f64 = 4.0;
const IDENTITY_TOL: f64 = 1e-12;
const PHI_TOL: f64 = 1e-12;
const GAUSS_TOL: f64 = 1e-12;
const SIGMA2_TOL: f64 = 1e-12;
const LEDGER_TOL: f64 = 1e-9;
const MOMENT_REL_TOL: f64 = 1e-8;
const INTEGRAL_TOL: f64 = 1e-6;
/// Binomial standard errors of slack in the Markov frequency check.
const MARKOV_SE: f64 = 3.0;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn random_spectrum(d: usize, tag: u64) -> SpectrumTable<f64> {
    let mut rng = SeedStream::new(MASTER_SEED).auxiliary(tag);
    SpectrumTable::new((0..d).map(|_| rng.random_range(-2.0..2.0)).collect()).unwrap()
}

fn criterion_1() -> Outcome {
    let times: Vec<f64> = (1..=10).map(|k| 0.4 * k as f64).collect();
    let mut worst = 0.0f64;
    let mut comparisons = 0;
    let mut pass = true;
    for (tag, db) in [(1u64, 4usize), (2, 8)] {
        let split = SubsystemSplit::new(2, db).unwrap();
        let spec = random_spectrum(2 * db, tag);
        let psi_s = basis_vector::<f64>(2, 0);
        let psi_b = basis_vector::<f64>(db, 0);
        let est = estimate_purity(&spec, &split, &psi_s, &psi_b, &times, 10_000, &SeedStream::new(MASTER_SEED + tag))
            .unwrap();
        for (t, p) in times.iter().zip(&est.points) {
            let want = expected_purity(&split, phi_direct(&spec, *t), phi_direct(&spec, 2.0 * t)).unwrap();
            let z = (p.mean - want).abs() / p.std_error;
            worst = worst.max(z);
            pass &= z <= SE_GATE;
            comparisons += 1;
        }
    }
    outcome(pass, format!("{comparisons} comparisons, worst |MC - formula| = {worst:.2} SE (gate {SE_GATE})"))
}

fn criterion_2() -> Outcome {
    let mut worst = 0.0f64;
    for ds in 2..=16 {
        for db in 2..=16 {
            let s = SubsystemSplit::new(ds, db).unwrap();
            let one = expected_purity(&s, 1.0.into(), 1.0.into()).unwrap();
            let zero = expected_purity(&s, 0.0.into(), 0.0.into()).unwrap();
            let limit = s.delta() as f64 / (1.0 + s.d() as f64);
            worst = worst.max((one - 1.0).abs()).max((zero - limit).abs());
        }
    }
    outcome(worst <= IDENTITY_TOL, format!("max deviation {worst:.2e} over 225 splits (tol {IDENTITY_TOL:e})"))
}

fn random_density(d: usize, rng: &mut impl Rng) -> DensityMatrix<f64> {
    let u: CMatrix<f64> = haar_unitary_from_rng(d, rng).unwrap();
    let w: Vec<f64> = (0..d).map(|_| rng.random_range(0.0..1.0)).collect();
    let total: f64 = w.iter().sum();
    let mut m = u.clone();
    for j in 0..d {
        for i in 0..d {
            m[(i, j)] *= w[j] / total;
        }
    }
    DensityMatrix::new(m * u.adjoint()).unwrap()
}

fn criterion_3() -> Outcome {
    let split = SubsystemSplit::new(2, 16).unwrap();
    let spec = random_spectrum(32, 3);
    let mut rng = SeedStream::new(MASTER_SEED).auxiliary(4);
    let comps: Vec<SeparableComponent<f64>> = [0.5, 0.3, 0.2]
        .iter()
        .map(|&weight| SeparableComponent {
            weight,
            rho_s: random_density(2, &mut rng),
            rho_b: random_density(16, &mut rng),
        })
        .collect();
    let state = InitialState::Mixed(separable_mixture(&comps).unwrap());
    let times: Vec<f64> = (1..=10).map(|k| 0.5 * k as f64).collect();
    let est = estimate_trace_distance(&spec, &split, &state, &times, 1_000, &SeedStream::new(MASTER_SEED + 3)).unwrap();
    let mut worst_margin = f64::INFINITY;
    for (t, p) in times.iter().zip(&est.points) {
        let bound = corollary1_bound(&split, phi_direct(&spec, *t).norm().min(1.0)).unwrap();
        worst_margin = worst_margin.min(bound + SE_GATE * p.std_error - p.mean);
    }
    outcome(worst_margin >= 0.0, format!("min (bound + {SE_GATE} SE - mean) = {worst_margin:.4} over 10 times"))
}

fn criterion_4() -> Outcome {
    let mut rng = SeedStream::new(MASTER_SEED).auxiliary(5);
    let (mut phi_err, mut s2_err) = (0.0f64, 0.0f64);
    let (mut gauss_bad, mut gauss_total) = (0usize, 0usize);
    let (mut inner_bad, mut inner_total) = (0usize, 0usize);
    let mut worst_excess = 0.0f64;
    for _ in 0..50 {
        let n = rng.random_range(1..=12);
        let eps: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
        let spec = SolvableSpectrumSpec::new(eps.clone()).unwrap();
        let table = spectrum_from_solvable(&spec).unwrap();
        let emax = spec.eps_max();
        let want_s2 = 0.25 * eps.iter().map(|e| e * e).sum::<f64>();
        s2_err = s2_err.max((sigma2_from_spectrum(&table).sigma2 - want_s2).abs());
        let reach = 2.0 * std::f64::consts::PI / emax;
        for k in 0..100 {
            let t = -reach + 2.0 * reach * k as f64 / 99.0;
            let prod = phi_solvable_abs(&spec, t);
            phi_err = phi_err.max((prod - phi_direct(&table, t).norm()).abs());
            let excess = prod - (-want_s2 * t * t / 2.0).exp();
            gauss_total += 1;
            if excess > GAUSS_TOL {
                gauss_bad += 1;
                worst_excess = worst_excess.max(excess);
            }
            // per factor |cos x| <= exp(-x^2/2) holds for |x| <= 1.7
            if t.abs() * emax <= 3.4 {
                inner_total += 1;
                inner_bad += usize::from(excess > GAUSS_TOL);
            }
        }
    }
    let pass = phi_err <= PHI_TOL && s2_err <= SIGMA2_TOL && gauss_bad == 0;
    println!(
        "    info: on |t| eps_max <= 3.4 the Gaussian domination fails at {inner_bad}/{inner_total} points"
    );
    outcome(
        pass,
        format!(
            "product vs direct {phi_err:.1e}, sigma^2 {s2_err:.1e}; Gaussian domination on |t| eps_max <= 2pi \
             violated at {gauss_bad}/{gauss_total} points (max excess {worst_excess:.3})"
        ),
    )
}

fn criterion_5() -> Outcome {
    let modes = 10;
    let spec = SolvableSpectrumSpec::new(vec![1.0; modes]).unwrap();
    let table = spectrum_from_solvable(&spec).unwrap();
    let split = SubsystemSplit::new(2, 1 << 9).unwrap();
    let y = 4.0;
    let forecast = solvable_timescale_bound(&spec, &split, 0.25, 4.0, y).unwrap();
    let grid = QuadratureGrid::resolving(forecast.t, table.bandwidth()).unwrap();
    let state = InitialState::Pure(basis_vector::<f64>(split.d(), 0));
    let est = estimate_delta(&table, &split, &state, &grid, 200, &SeedStream::new(MASTER_SEED + 5)).unwrap();
    let c = forecast.mean_delta_bound();
    let dominated = est.mean <= c + SE_GATE * est.std_error;
    let markov = markov_empirical_check(&est.samples, c, y);
    let hits = est.samples.iter().filter(|&&s| s <= y * c).count();
    outcome(
        dominated && markov.satisfied(),
        format!(
            "T = {:.4}, mean Delta = {:.4} +- {:.4}, sqrt(bound) = {c:.4}; Markov y = 4: {hits}/200 below yc vs floor 0.75 - {MARKOV_SE} SE",
            forecast.t, est.mean, est.std_error
        ),
    )
}

fn criterion_6() -> Outcome {
    let mut checked = 0;
    let mut windows = 0;
    let mut failures = Vec::new();
    for dim in [1usize, 2] {
        for m in 10..=64 {
            for r in [1usize, 2] {
                let lat = LatticeSpec::new(dim, m, r).unwrap();
                let Ok(p) = build_partition(lat) else { continue };
                let c = p.check();
                checked += 1;
                let mut ok = c.disjoint_cover && c.separated && c.min_block_distance >= 2 * r + 1;
                if c.applicable {
                    windows += 1;
                    ok &= c.block_lower && c.block_upper && c.buffer_upper && c.k_lower && c.k_upper;
                }
                if !ok {
                    failures.push(format!("D={dim} M={m} R={r}"));
                }
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!("{checked} lattices with K >= 1, size windows on {windows}; failures: {failures:?}"),
    )
}

fn criterion_7() -> Outcome {
    let mut rng = SeedStream::new(MASTER_SEED).auxiliary(7);
    let (mut pass_n, mut na_n, mut fail_n) = (0, 0, 0);
    let mut worst_moment = 0.0f64;
    let mut min_slack = f64::INFINITY;
    for n in [8usize, 9, 10, 11, 12, 8, 9, 10, 11, 12] {
        let lat = LatticeSpec::chain(n, 1).unwrap();
        let spec = random_local_hamiltonian(lat.clone(), 1.0, true, &mut rng).unwrap();
        let a = n / 2 - 1;
        let halves = Partition::custom(lat.clone(), vec![(0..a).collect(), (a + 2..n).collect()]).unwrap();
        for p in [Partition::single_block(lat.clone()), halves] {
            let led = appendix_ledger(&spec, &p, &LedgerConfig::default()).unwrap();
            worst_moment = worst_moment.max(led.max_moment_error());
            for r in &led.reports {
                match r.status() {
                    BoundStatus::Pass => {
                        pass_n += 1;
                        min_slack = min_slack.min(r.slack().unwrap());
                    }
                    BoundStatus::Fail => fail_n += 1,
                    _ => na_n += 1,
                }
            }
        }
    }
    outcome(
        fail_n == 0 && worst_moment <= MOMENT_REL_TOL && min_slack >= -LEDGER_TOL,
        format!(
            "{pass_n} pass, {fail_n} fail, {na_n} gated off; min slack {min_slack:.2e}; contraction vs dense {worst_moment:.1e} relative"
        ),
    )
}

/// Composite Simpson on `[0, upper]` of `(t^2 + 1) exp(-t^2/36)`.
fn tail_integral_oracle(upper: f64, intervals: usize) -> f64 {
    let f = |t: f64| (t * t + 1.0) * (-t * t / 36.0).exp();
    let h = upper / intervals as f64;
    let mut s = f(0.0) + f(upper);
    for k in 1..intervals {
        s += f(k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

fn criterion_8() -> Outcome {
    let k = constants_for(1, 1, 1.0).unwrap();
    let integral = tail_integral_oracle(120.0, 200_000);
    let closed = 57.0 * std::f64::consts::PI.sqrt();
    let mut log = k.log.clone();
    log.extend(solvable_constants());
    let csv = derivation_csv(&log);
    let mismatched = replay_derivation_csv(&csv).unwrap();
    let pass = k.c2 == 5.0
        && k.c4 == 1685.0
        && (integral - closed).abs() <= INTEGRAL_TOL
        && mismatched.is_empty()
        && log.iter().all(|d| d.recompute().map(|v| v.to_bits() == d.value.to_bits()).unwrap_or(false));
    outcome(
        pass,
        format!(
            "c2 = {}, c4 = {}, integral - 57 sqrt(pi) = {:.1e}, {} logged derivations, {} replay mismatches",
            k.c2,
            k.c4,
            integral - closed,
            log.len(),
            mismatched.len()
        ),
    )
}

fn run_cli(out: &Path, args: &[&str]) -> i32 {
    let mut argv = vec!["haarquench".to_string(), "--seed".to_string(), MASTER_SEED.to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    argv.push("--out".into());
    argv.push(out.display().to_string());
    haarquench_cli::main_with(argv)
}

fn dir_bytes(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap())
        })
        .collect();
    files.sort();
    files
}

fn criterion_9() -> Outcome {
    let runs: [&[&str]; 8] = [
        &["phi", "solvable_eps_energy=1,2,0.5", "t_points=50"],
        &["bounds", "lattice_size=32", "sigma_bar2_energy2=1", "d_s=2", "d_b=512", "epsilon=0.05"],
        &["quench", "random_spectrum_dim=64", "d_s=2", "t_points=40"],
        &["montecarlo", "random_spectrum_dim=8", "d_s=2", "t_points=10", "t_max_inverse_energy=4", "n_samples=2000"],
        &["montecarlo", "random_spectrum_dim=32", "d_s=2", "state=separable", "estimator=trace_distance", "t_points=10", "n_samples=500"],
        &["montecarlo", "solvable_eps_energy=1,1,1,1,1,1", "d_s=2", "estimator=delta", "T_inverse_energy=0.6", "n_samples=100"],
        &["verify-appendix", "lattice_size=9", "partition=custom", "blocks=0-3;6-8"],
        &["partition", "lattice_dim=2", "lattice_size=40"],
    ];
    let tmp = tempfile::tempdir().unwrap();
    let mut identical = 0;
    let mut problems = Vec::new();
    for (k, args) in runs.iter().enumerate() {
        let a = tmp.path().join(format!("{k}a"));
        let b = tmp.path().join(format!("{k}b"));
        let mut second: Vec<&str> = args.to_vec();
        second.extend(["--threads", "1"]);
        let (ca, cb) = (run_cli(&a, args), run_cli(&b, &second));
        if ca != 0 || cb != 0 {
            problems.push(format!("{} exit {ca}/{cb}", args[0]));
            continue;
        }
        if dir_bytes(&a) == dir_bytes(&b) {
            identical += 1;
        } else {
            problems.push(format!("{} differs", args[0]));
        }
    }
    outcome(problems.is_empty(), format!("{identical}/{} runs byte-identical on rerun; {problems:?}", runs.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("purity formula vs Monte Carlo", criterion_1),
        ("identity and limit cases", criterion_2),
        ("separable-state trace-distance dominance", criterion_3),
        ("solvable-system chain", criterion_4),
        ("thermalization at the solvable time scale", criterion_5),
        ("partition correctness", criterion_6),
        ("inequality ledger on random chains", criterion_7),
        ("constant provenance", criterion_8),
        ("determinism", criterion_9),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = f();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {}: {verdict} {name}: {} [{:.1}s]", k + 1, o.detail, start.elapsed().as_secs_f64());
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
