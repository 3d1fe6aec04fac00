//! The subcommands. Each maps a resolved configuration to output files.

use rand::Rng;

use haarquench::bounds::{
    corollary1_bound, corollary2_forecast, expected_purity, fmt_float, markov_forecast, separable_purity_gap_bound,
    solvable_gaussian_phi_bound, solvable_timescale_bound, theorem1_time_and_phi_bound, BoundReport,
    ThermalizationForecast,
};
use haarquench::dynamics::{
    distance_to_maximally_mixed, partial_trace_b, purity, EvolutionCache, PureEvolution, QuadratureGrid,
};
use haarquench::haar::{randomized_hamiltonian, SeedStream};
use haarquench::model::{
    basis_vector, random_local_hamiltonian, separable_mixture, spectrum_from_solvable, DensityMatrix, LatticeSpec,
    LocalHamiltonianSpec, SeparableComponent, SolvableSpectrumSpec, SpectrumTable, SubsystemSplit,
};
use haarquench::montecarlo::{
    estimate_delta, estimate_purity, estimate_trace_distance, markov_empirical_check, InitialState, DOMINANCE_SE,
    MAX_MC_DIM,
};
use haarquench::partition::{
    appendix_ledger, build_partition, derivation_csv, lemma_constants, solvable_constants, LedgerConfig, Partition,
};
use haarquench::spectral::{phi_direct, phi_solvable_abs};

use crate::config::RunConfig;
use crate::{CliError, OutFile, RunProduct};

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// `t_points` equally spaced times on `[0, t_max]`; one point means `t_max`.
pub fn time_grid(cfg: &RunConfig) -> Vec<f64> {
    let t_max = cfg.real("t_max_inverse_energy").unwrap_or(10.0);
    let n = cfg.int("t_points").unwrap_or(101);
    match n {
        0 => Vec::new(),
        1 => vec![t_max],
        _ => (0..n).map(|k| t_max * k as f64 / (n - 1) as f64).collect(),
    }
}

struct Loaded {
    table: SpectrumTable<f64>,
    split: Option<SubsystemSplit>,
    solvable: Option<SolvableSpectrumSpec<f64>>,
}

fn load_spectrum(cfg: &RunConfig) -> Result<Loaded, CliError> {
    let sources = ["spectrum_path", "solvable_eps_energy", "random_spectrum_dim"];
    let given: Vec<&str> = sources.iter().copied().filter(|k| cfg.has(k)).collect();
    if given.len() != 1 {
        return Err(usage(format!("give exactly one of {}", sources.join(", "))));
    }
    match given[0] {
        "spectrum_path" => {
            let path = cfg.text("spectrum_path").expect("present");
            let (table, split) = SpectrumTable::parse(&std::fs::read_to_string(path)?)?;
            Ok(Loaded { table, split, solvable: None })
        }
        "solvable_eps_energy" => {
            let spec = SolvableSpectrumSpec::new(cfg.reals("solvable_eps_energy").expect("present"))?;
            Ok(Loaded {
                table: spectrum_from_solvable(&spec)?,
                split: None,
                solvable: Some(spec),
            })
        }
        _ => {
            let d = cfg.require_int("random_spectrum_dim")?;
            let w = cfg.real("random_spectrum_half_width_energy").unwrap_or(2.0);
            if d == 0 || !(w > 0.0) {
                return Err(usage("random spectrum needs dim >= 1 and half width > 0"));
            }
            let mut rng = SeedStream::new(cfg.seed()).auxiliary(0);
            let energies = (0..d).map(|_| rng.random_range(-w..=w)).collect();
            Ok(Loaded {
                table: SpectrumTable::new(energies)?,
                split: None,
                solvable: None,
            })
        }
    }
}

fn resolve_split(cfg: &RunConfig, loaded: &Loaded) -> Result<SubsystemSplit, CliError> {
    let split = match (cfg.int("d_s"), cfg.int("d_b"), &loaded.split) {
        (Some(ds), Some(db), _) => SubsystemSplit::new(ds, db)?,
        (None, None, Some(s)) => s.clone(),
        (Some(ds), None, _) if ds > 0 && loaded.table.dim() % ds == 0 => {
            SubsystemSplit::new(ds, loaded.table.dim() / ds)?
        }
        _ => return Err(usage("give d_s and d_b (or a spectrum file header)")),
    };
    if split.d() != loaded.table.dim() {
        return Err(usage(format!("d_s * d_b = {} but the spectrum has {} levels", split.d(), loaded.table.dim())));
    }
    Ok(split)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum StateKind {
    Product,
    MixedSubsystem,
    Separable,
}

/// `product`: `|s> (x) |b>`; `mixed_subsystem`: `(1/dS) (x) |b><b|`;
/// `separable`: equal mixture of `|s><s| (x) |b><b|` and the product of the
/// next basis states.
fn initial_state(
    cfg: &RunConfig,
    split: &SubsystemSplit,
) -> Result<(InitialState<f64>, StateKind, usize, usize), CliError> {
    let (ds, db) = (split.d_s(), split.d_b());
    let s = cfg.int("psi_s_index").unwrap_or(0);
    let b = cfg.int("psi_b_index").unwrap_or(0);
    if s >= ds || b >= db {
        return Err(usage("psi_s_index / psi_b_index out of range"));
    }
    let kind = match cfg.text("state").unwrap_or("product") {
        "product" => StateKind::Product,
        "mixed_subsystem" => StateKind::MixedSubsystem,
        "separable" => StateKind::Separable,
        other => return Err(usage(format!("unknown state {other:?}"))),
    };
    let state = match kind {
        StateKind::Product => InitialState::Pure(basis_vector(ds, s).kronecker(&basis_vector(db, b))),
        StateKind::MixedSubsystem => {
            let rho_b = DensityMatrix::pure(&basis_vector(db, b))?;
            InitialState::Mixed(DensityMatrix::maximally_mixed(ds)?.kron(&rho_b))
        }
        StateKind::Separable => {
            let comp = |i: usize, j: usize| -> Result<SeparableComponent<f64>, CliError> {
                Ok(SeparableComponent {
                    weight: 0.5,
                    rho_s: DensityMatrix::pure(&basis_vector(ds, i % ds))?,
                    rho_b: DensityMatrix::pure(&basis_vector(db, j % db))?,
                })
            };
            InitialState::Mixed(separable_mixture(&[comp(s, b)?, comp(s + 1, b + 1)?])?)
        }
    };
    Ok((state, kind, s, b))
}

fn csv_of_reports(reports: &[BoundReport]) -> String {
    let mut out = String::from(BoundReport::CSV_HEADER);
    out.push('\n');
    for r in reports {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

pub fn phi(cfg: &RunConfig) -> Result<RunProduct, CliError> {
    let loaded = load_spectrum(cfg)?;
    let mut out = String::from("t,re_phi,im_phi,abs_phi");
    if loaded.solvable.is_some() {
        out.push_str(",abs_phi_product,gaussian_bound");
    }
    out.push('\n');
    for t in time_grid(cfg) {
        let z = phi_direct(&loaded.table, t);
        out.push_str(&format!("{},{},{},{}", fmt_float(t), fmt_float(z.re), fmt_float(z.im), fmt_float(z.norm())));
        if let Some(s) = &loaded.solvable {
            let g = (-s.variance() * t * t / 2.0).exp();
            out.push_str(&format!(",{},{}", fmt_float(phi_solvable_abs(s, t)), fmt_float(g)));
        }
        out.push('\n');
    }
    Ok(RunProduct {
        files: vec![OutFile::csv("phi.csv", out)],
        failure: None,
    })
}

fn value_report(name: &str, value: f64) -> BoundReport {
    BoundReport::new(name, None, value)
}

fn forecast_reports(prefix: &str, f: &ThermalizationForecast) -> Vec<BoundReport> {
    let with_pre = |mut r: BoundReport| {
        for p in &f.preconditions {
            r = r.with_precondition(p.description.clone(), p.satisfied);
        }
        r
    };
    vec![
        with_pre(value_report(&format!("{prefix}_T"), f.t)),
        with_pre(value_report(&format!("{prefix}_bound_e_delta2"), f.bound_on_e_delta2)),
        with_pre(value_report(&format!("{prefix}_distance_threshold"), f.distance_threshold)),
        with_pre(value_report(&format!("{prefix}_probability_floor"), f.probability_floor.value))
            .with_precondition("floor > 0", !f.probability_floor.vacuous),
        with_pre(value_report(&format!("{prefix}_fraction_floor"), f.fraction_floor.value))
            .with_precondition("floor > 0", !f.fraction_floor.vacuous),
    ]
}

pub fn bounds(cfg: &RunConfig) -> Result<RunProduct, CliError> {
    let mut reports = Vec::new();
    let mut log = Vec::new();
    let h = cfg.real("h_energy").unwrap_or(1.0);
    let split = match (cfg.int("d_s"), cfg.int("d_b")) {
        (Some(ds), Some(db)) => Some(SubsystemSplit::new(ds, db)?),
        (None, None) => None,
        _ => return Err(usage("give both d_s and d_b")),
    };
    if let Some(m) = cfg.int("lattice_size") {
        let lattice = LatticeSpec::new(cfg.int("lattice_dim").unwrap_or(1), m, cfg.int("radius").unwrap_or(1))?;
        let consts = lemma_constants(&lattice, h)?;
        reports.push(value_report("const_beta_2R", consts.beta_2r as f64));
        reports.push(value_report("const_beta_4R", consts.beta_4r as f64));
        reports.push(value_report("const_c2", consts.c2));
        reports.push(value_report("const_c4", consts.c4));
        reports.push(value_report("const_x", consts.x));
        reports.push(value_report("const_lemma_a0", consts.lemma_a0));
        reports.push(value_report("const_lemma_b0", consts.lemma_b0));
        reports.push(value_report("const_theorem_a0", consts.theorem_a0));
        reports.push(value_report("const_theorem_b0", consts.theorem_b0));
        reports.push(value_report("const_corollary_b0", consts.corollary_b0));
        log.extend(consts.log.iter().cloned());
        if let Some(s2) = cfg.real("sigma_bar2_energy2") {
            let th = theorem1_time_and_phi_bound(&lattice, s2, h)?;
            let mut time = value_report("theorem1_T", th.t);
            for p in th.report.preconditions() {
                time = time.with_precondition(p.description.clone(), p.satisfied);
            }
            reports.push(time);
            reports.push(th.report);
            if let (Some(split), Some(eps)) = (&split, cfg.real("epsilon")) {
                let f = corollary2_forecast(&lattice, split, s2, h, eps)?;
                reports.extend(forecast_reports("corollary2", &f));
            }
        }
    }
    if let (Some(split), Some(p)) = (&split, cfg.real("phi_abs")) {
        reports.push(value_report("separable_purity_gap", separable_purity_gap_bound(split, p)?));
        reports.push(value_report("corollary1", corollary1_bound(split, p)?));
    }
    if let (Some(c), Some(y)) = (cfg.real("markov_c"), cfg.real("markov_y")) {
        let m = markov_forecast(c, y)?;
        reports.push(value_report("markov_threshold", m.threshold));
        reports.push(
            value_report("markov_probability_floor", m.probability_floor.value)
                .with_precondition("floor > 0", !m.probability_floor.vacuous),
        );
    }
    if let Some(eps) = cfg.reals("solvable_eps_energy") {
        let spec = SolvableSpectrumSpec::new(eps)?;
        let t = cfg.real("solvable_t_inverse_energy").unwrap_or(1.0);
        reports.push(solvable_gaussian_phi_bound(&spec, t));
        if let (Some(split), Some(e)) = (&split, cfg.real("solvable_exponent")) {
            let x = cfg.real("solvable_x").unwrap_or(4.0);
            let y = cfg.real("solvable_y").unwrap_or(4.0);
            let f = solvable_timescale_bound(&spec, split, e, x, y)?;
            reports.extend(forecast_reports("solvable", &f));
            log.extend(solvable_constants());
        }
    }
    Ok(RunProduct {
        files: vec![
            OutFile::csv("bounds.csv", csv_of_reports(&reports)),
            OutFile::csv("constants.csv", derivation_csv(&log)),
        ],
        failure: None,
    })
}

fn check_capacity(d: usize) -> Result<(), CliError> {
    if d > MAX_MC_DIM {
        return Err(haarquench::Error::Capacity {
            what: "Hilbert-space dimension",
            value: d,
            limit: MAX_MC_DIM,
        }
        .into());
    }
    Ok(())
}

pub fn quench(cfg: &RunConfig) -> Result<RunProduct, CliError> {
    let loaded = load_spectrum(cfg)?;
    check_capacity(loaded.table.dim())?;
    let split = resolve_split(cfg, &loaded)?;
    let (state, _, _, _) = initial_state(cfg, &split)?;
    let index = cfg.int("sample_index").unwrap_or(0) as u64;
    let h = randomized_hamiltonian(&loaded.table, &SeedStream::new(cfg.seed()).sample(index))?;
    let times = time_grid(cfg);
    let mut out = String::from("t,trace_distance,purity\n");
    let mut row = |t: f64, rho: &DensityMatrix<f64>| {
        out.push_str(&format!(
            "{},{},{}\n",
            fmt_float(t),
            fmt_float(distance_to_maximally_mixed(rho)),
            fmt_float(purity(rho))
        ));
    };
    match &state {
        InitialState::Pure(psi) => {
            let ev = PureEvolution::new(&h, psi)?;
            let map = split.index_map();
            for &t in &times {
                row(t, &ev.reduced(t, &split, &map));
            }
        }
        InitialState::Mixed(rho0) => {
            let cache = EvolutionCache::new(&h, rho0)?;
            for &t in &times {
                row(t, &partial_trace_b(&cache.at(t), &split)?);
            }
        }
    }
    Ok(RunProduct {
        files: vec![OutFile::csv("quench.csv", out)],
        failure: None,
    })
}

pub fn montecarlo(cfg: &RunConfig) -> Result<RunProduct, CliError> {
    let loaded = load_spectrum(cfg)?;
    check_capacity(loaded.table.dim())?;
    let split = resolve_split(cfg, &loaded)?;
    let (state, kind, s, b) = initial_state(cfg, &split)?;
    let seeds = SeedStream::new(cfg.seed());
    let estimator = cfg.text("estimator").unwrap_or("purity");
    let mut files = Vec::new();
    let mut failure = None;
    match estimator {
        "purity" | "trace_distance" => {
            let n = cfg.int("n_samples").unwrap_or(if estimator == "purity" { 10_000 } else { 1_000 });
            let times = time_grid(cfg);
            let (est, bound): (_, Vec<f64>) = if estimator == "purity" {
                if kind != StateKind::Product {
                    return Err(usage("the purity estimator needs state = product"));
                }
                let est = estimate_purity(
                    &loaded.table,
                    &split,
                    &basis_vector(split.d_s(), s),
                    &basis_vector(split.d_b(), b),
                    &times,
                    n,
                    &seeds,
                )?;
                let want = times
                    .iter()
                    .map(|&t| expected_purity(&split, phi_direct(&loaded.table, t), phi_direct(&loaded.table, 2.0 * t)))
                    .collect::<Result<_, _>>()?;
                (est, want)
            } else {
                let est = estimate_trace_distance(&loaded.table, &split, &state, &times, n, &seeds)?;
                let bound = times
                    .iter()
                    .map(|&t| corollary1_bound(&split, phi_direct(&loaded.table, t).norm().min(1.0)))
                    .collect::<Result<_, _>>()?;
                (est, bound)
            };
            let violated = est.points.iter().zip(&bound).filter(|(p, &b)| {
                if estimator == "purity" {
                    !p.agrees_with(b)
                } else {
                    !p.dominated_by(b)
                }
            });
            let count = violated.count();
            if count > 0 {
                failure = Some(format!("{count} time point(s) outside {DOMINANCE_SE} standard errors"));
            }
            files.push(OutFile::csv("montecarlo.csv", est.csv(&bound)));
            if times.len() > 20 {
                let note = format!(
                    "{} comparisons at {DOMINANCE_SE} SE each; family-wise false-alarm rate up to {:.1e}\n",
                    times.len(),
                    times.len() as f64 * 6.3e-5
                );
                files.push(OutFile { name: "notes.txt", schema_version: 1, contents: note });
            }
        }
        "delta" => {
            let n = cfg.int("n_samples").unwrap_or(1_000);
            let forecast = match (&loaded.solvable, cfg.real("solvable_exponent")) {
                (Some(spec), Some(e)) => Some(solvable_timescale_bound(spec, &split, e, 4.0, 4.0)?),
                _ => None,
            };
            let t_max = match (cfg.real("T_inverse_energy"), &forecast) {
                (Some(t), _) => t,
                (None, Some(f)) => f.t,
                (None, None) => return Err(usage("delta needs T_inverse_energy or solvable_exponent")),
            };
            let grid = match cfg.int("quadrature_intervals") {
                Some(k) => QuadratureGrid::new(t_max, k)?,
                None => QuadratureGrid::resolving(t_max, loaded.table.bandwidth())?,
            };
            let est = estimate_delta(&loaded.table, &split, &state, &grid, n, &seeds)?;
            let bound = forecast.as_ref().map(|f| f.mean_delta_bound());
            let mut out = String::from("T,mean,std_error,n,bound_value,dominance_flag\n");
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                fmt_float(t_max),
                fmt_float(est.mean),
                fmt_float(est.std_error),
                est.n_samples,
                bound.map(fmt_float).unwrap_or_default(),
                bound.map(|b| est.dominated_by(b).to_string()).unwrap_or_default()
            ));
            files.push(OutFile::csv("montecarlo.csv", out));
            let mut samples = String::from("sample,delta\n");
            for (k, v) in est.samples.iter().enumerate() {
                samples.push_str(&format!("{k},{}\n", fmt_float(*v)));
            }
            files.push(OutFile::csv("samples.csv", samples));
            if let Some(c) = bound {
                if !est.dominated_by(c) {
                    failure = Some("mean Delta(T) exceeds the bound".to_string());
                }
                let y = cfg.real("markov_y").unwrap_or(4.0);
                let m = markov_empirical_check(&est.samples, c, y);
                if m.status() == haarquench::bounds::BoundStatus::Fail {
                    failure = Some("Markov frequency below its floor".to_string());
                }
                files.push(OutFile::csv("markov.csv", csv_of_reports(&[m])));
            }
        }
        other => return Err(usage(format!("unknown estimator {other:?}"))),
    }
    Ok(RunProduct { files, failure })
}

/// `0-2;5,7` -> `[[0, 1, 2], [5, 7]]`.
pub fn parse_blocks(text: &str) -> Result<Vec<Vec<usize>>, CliError> {
    let bad = || usage(format!("cannot parse blocks {text:?}"));
    text.split(';')
        .map(|block| {
            let mut sites = Vec::new();
            for tok in block.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                match tok.split_once('-') {
                    Some((a, b)) => {
                        let (a, b): (usize, usize) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
                        if a > b {
                            return Err(bad());
                        }
                        sites.extend(a..=b);
                    }
                    None => sites.push(tok.parse().map_err(|_| bad())?),
                }
            }
            Ok(sites)
        })
        .collect()
}

fn lattice_of(cfg: &RunConfig) -> Result<LatticeSpec, CliError> {
    Ok(LatticeSpec::new(
        cfg.int("lattice_dim").unwrap_or(1),
        cfg.require_int("lattice_size")?,
        cfg.int("radius").unwrap_or(1),
    )?)
}

fn load_hamiltonian(cfg: &RunConfig) -> Result<LocalHamiltonianSpec<f64>, CliError> {
    if let Some(path) = cfg.text("hamiltonian_path") {
        return Ok(LocalHamiltonianSpec::parse(&std::fs::read_to_string(path)?)?);
    }
    let lattice = lattice_of(cfg)?;
    let mut rng = SeedStream::new(cfg.seed()).auxiliary(1);
    Ok(random_local_hamiltonian(lattice, cfg.real("h_energy").unwrap_or(1.0), true, &mut rng)?)
}

fn partition_of(cfg: &RunConfig, lattice: &LatticeSpec) -> Result<Partition, CliError> {
    match cfg.text("partition").unwrap_or("single") {
        "single" => Ok(Partition::single_block(lattice.clone())),
        "slabs" => Ok(build_partition(lattice.clone())?),
        "custom" => {
            let blocks = parse_blocks(cfg.text("blocks").ok_or_else(|| usage("partition = custom needs blocks"))?)?;
            Ok(Partition::custom(lattice.clone(), blocks)?)
        }
        other => Err(usage(format!("unknown partition {other:?}"))),
    }
}

/// Largest relative gap tolerated between contraction and dense moments.
pub const MOMENT_TOLERANCE: f64 = 1e-8;

pub fn verify_appendix(cfg: &RunConfig) -> Result<RunProduct, CliError> {
    let spec = load_hamiltonian(cfg)?;
    let partition = partition_of(cfg, spec.lattice())?;
    let config = LedgerConfig {
        rhs_scale: cfg.real("rhs_scale").unwrap_or(1.0),
        quadrature_intervals: cfg.int("quadrature_intervals").unwrap_or(2000),
        ..LedgerConfig::default()
    };
    let ledger = appendix_ledger(&spec, &partition, &config)?;
    let failures = ledger.failures();
    let mut failure = None;
    if !failures.is_empty() {
        let names: Vec<&str> = failures.iter().map(|r| r.name()).collect();
        failure = Some(format!("{} inequalities fail: {}", names.len(), names.join(" ")));
    } else if ledger.max_moment_error() > MOMENT_TOLERANCE {
        failure = Some(format!("contraction moments off by {:.3e} relative", ledger.max_moment_error()));
    }
    Ok(RunProduct {
        files: vec![
            OutFile::csv("ledger.csv", ledger.csv()),
            OutFile::csv("moments.csv", ledger.moment_csv()),
            OutFile::csv("constants.csv", derivation_csv(&ledger.constants.log)),
        ],
        failure,
    })
}

pub fn partition(cfg: &RunConfig) -> Result<RunProduct, CliError> {
    let lattice = lattice_of(cfg)?;
    let p = build_partition(lattice.clone())?;
    let mut role = vec![("buffer", 0usize); lattice.n_sites()];
    for (k, b) in p.buffers().iter().enumerate() {
        for &s in b {
            role[s] = ("buffer", k);
        }
    }
    for (k, b) in p.blocks().iter().enumerate() {
        for &s in b {
            role[s] = ("block", k);
        }
    }
    let mut sites = String::from("site,coords,role,index\n");
    for (s, (r, k)) in role.iter().enumerate() {
        let coords: Vec<String> = lattice.coords(s).iter().map(|c| c.to_string()).collect();
        sites.push_str(&format!("{s},{},{r},{k}\n", coords.join(":")));
    }
    let c = p.check();
    let mut check = String::from("check,value\n");
    for (name, v) in [
        ("K", p.k().to_string()),
        ("max_block", p.max_block().to_string()),
        ("block_sites", p.block_sites().to_string()),
        ("buffer_sites", p.buffer_sites().to_string()),
        ("min_block_distance", c.min_block_distance.to_string()),
        ("disjoint_cover", c.disjoint_cover.to_string()),
        ("separated", c.separated.to_string()),
        ("applicable", c.applicable.to_string()),
        ("k_window_preconditions", c.k_window_preconditions.to_string()),
        ("block_lower", c.block_lower.to_string()),
        ("block_upper", c.block_upper.to_string()),
        ("buffer_upper", c.buffer_upper.to_string()),
        ("k_lower", c.k_lower.to_string()),
        ("k_upper", c.k_upper.to_string()),
        ("passes", c.passes().to_string()),
    ] {
        check.push_str(&format!("{name},{v}\n"));
    }
    let failure = (!c.passes()).then(|| "partition check failed".to_string());
    Ok(RunProduct {
        files: vec![OutFile::csv("partition.csv", sites), OutFile::csv("partition_check.csv", check)],
        failure,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::PHI_KEYS;

    #[test]
    fn grid_shapes() {
        let cfg = RunConfig::parse("t_points = 0\n", PHI_KEYS).unwrap();
        assert!(time_grid(&cfg).is_empty());
        let cfg = RunConfig::parse("t_points = 3\nt_max_inverse_energy = 2\n", PHI_KEYS).unwrap();
        assert_eq!(time_grid(&cfg), vec![0.0, 1.0, 2.0]);
    }

    #[test]
    fn block_syntax() {
        assert_eq!(parse_blocks("0-2;5,7").unwrap(), vec![vec![0, 1, 2], vec![5, 7]]);
        assert!(parse_blocks("3-1").is_err());
        assert!(parse_blocks("a").is_err());
    }
}
