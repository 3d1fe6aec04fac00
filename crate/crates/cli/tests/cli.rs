use std::fs;
use std::path::Path;

use haarquench_cli::main_with;

fn run(out: &Path, args: &[&str]) -> i32 {
    let mut argv = vec!["haarquench".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    argv.push("--out".into());
    argv.push(out.display().to_string());
    main_with(argv)
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap()
}

fn column(csv: &str, name: &str) -> Vec<String> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let k = header.iter().position(|h| *h == name).unwrap();
    lines.map(|l| l.split(',').nth(k).unwrap().to_string()).collect()
}

fn row<'a>(csv: &'a str, name: &str) -> Vec<&'a str> {
    csv.lines().find(|l| l.starts_with(&format!("{name},"))).unwrap().split(',').collect()
}

#[test]
fn phi_examples() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("flat.txt");
    fs::write(&spec, "0.5\n0.5\n0.5\n").unwrap();
    let out = dir.path().join("a");
    assert_eq!(run(&out, &["phi", &format!("spectrum_path={}", spec.display()), "t_points=5"]), 0);
    let abs = column(&read(&out, "phi.csv"), "abs_phi");
    assert_eq!(abs.len(), 5);
    assert!(abs.iter().all(|v| (v.parse::<f64>().unwrap() - 1.0).abs() < 1e-15));

    let out = dir.path().join("b");
    assert_eq!(run(&out, &["phi", "solvable_eps_energy=1,2", "t_points=0"]), 0);
    assert_eq!(read(&out, "phi.csv").lines().count(), 1);

    let out = dir.path().join("c");
    assert_eq!(run(&out, &["phi", "solvable_eps_energy=1,2", "t_points=1", "t_max_inverse_energy=1"]), 0);
    let csv = read(&out, "phi.csv");
    let a: f64 = column(&csv, "abs_phi")[0].parse().unwrap();
    let p: f64 = column(&csv, "abs_phi_product")[0].parse().unwrap();
    assert!((a - 0.474_159_881_779_038).abs() < 1e-12 && (a - p).abs() < 1e-12);
}

#[test]
fn parse_errors_exit_one_with_line() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("bad.txt");
    fs::write(&spec, "0.1\nnot-a-number\n").unwrap();
    assert_eq!(run(&dir.path().join("o"), &["phi", &format!("spectrum_path={}", spec.display())]), 1);
    let cfg = dir.path().join("bad.cfg");
    fs::write(&cfg, "t_points = 3\nmystery = 4\n").unwrap();
    let cfg_arg = cfg.display().to_string();
    assert_eq!(run(&dir.path().join("o"), &["phi", "--config", &cfg_arg]), 1);
    assert_eq!(run(&dir.path().join("o"), &["nonsense"]), 1);
}

#[test]
fn bounds_examples() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("a");
    let args = ["bounds", "lattice_size=32", "sigma_bar2_energy2=1", "markov_c=0.2", "markov_y=1"];
    assert_eq!(run(&out, &args), 0);
    let csv = read(&out, "bounds.csv");
    assert_eq!(row(&csv, "const_c2")[2].parse::<f64>().unwrap(), 5.0);
    assert_eq!(row(&csv, "const_c4")[2].parse::<f64>().unwrap(), 1685.0);
    assert_eq!(row(&csv, "theorem1_phi_average")[3], "bound_only");
    assert_eq!(row(&csv, "markov_probability_floor")[2].parse::<f64>().unwrap(), 0.0);
    assert!(haarquench::partition::replay_derivation_csv(&read(&out, "constants.csv")).unwrap().is_empty());

    let out = dir.path().join("b");
    assert_eq!(run(&out, &["bounds", "lattice_size=16", "sigma_bar2_energy2=1"]), 0);
    assert_eq!(row(&read(&out, "bounds.csv"), "theorem1_phi_average")[3], "not_applicable");
}

#[test]
fn quench_examples_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("a");
    let args = ["quench", "random_spectrum_dim=8", "d_s=2", "state=mixed_subsystem", "t_points=1", "t_max_inverse_energy=0"];
    assert_eq!(run(&out, &args), 0);
    let d: f64 = column(&read(&out, "quench.csv"), "trace_distance")[0].parse().unwrap();
    assert!(d.abs() < 1e-12);

    let flat = dir.path().join("flat.txt");
    fs::write(&flat, "# d=8 dS=2 dB=4\n".to_string() + &"1.25\n".repeat(8)).unwrap();
    let out = dir.path().join("b");
    assert_eq!(run(&out, &["quench", &format!("spectrum_path={}", flat.display()), "t_points=6"]), 0);
    let dist = column(&read(&out, "quench.csv"), "trace_distance");
    let first: f64 = dist[0].parse().unwrap();
    assert!(dist.iter().all(|v| (v.parse::<f64>().unwrap() - first).abs() < 1e-10));

    let args = ["quench", "random_spectrum_dim=16", "d_s=4", "t_points=7", "--seed", "5"];
    let (x, y) = (dir.path().join("x"), dir.path().join("y"));
    assert_eq!(run(&x, &args), 0);
    assert_eq!(run(&y, &args), 0);
    assert_eq!(read(&x, "quench.csv"), read(&y, "quench.csv"));
    let snapshot = x.join("config.txt").display().to_string();
    let z = dir.path().join("z");
    assert_eq!(run(&z, &["quench", "--config", &snapshot]), 0);
    assert_eq!(read(&x, "quench.csv"), read(&z, "quench.csv"));
    assert_eq!(read(&z, "seed.txt"), "5\n");
}

#[test]
fn capacity_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(&dir.path().join("o"), &["quench", "random_spectrum_dim=8192", "d_s=2"]), 2);
}

#[test]
fn montecarlo_purity_run() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("a");
    let args = ["montecarlo", "random_spectrum_dim=8", "d_s=2", "t_points=3", "t_max_inverse_energy=2", "n_samples=2000"];
    assert_eq!(run(&out, &args), 0);
    let flags = column(&read(&out, "montecarlo.csv"), "dominance_flag");
    assert_eq!(flags.len(), 3);
}

#[test]
fn verify_appendix_examples() {
    let dir = tempfile::tempdir().unwrap();
    let ham = dir.path().join("zero.txt");
    let mut text = String::from("lattice D=1 M=6 R=1\nsite_dims 2\nh 1.0\nterm 3\noffsets 0;1\n");
    text.push_str(&"0 0  0 0  0 0  0 0\n".repeat(4));
    text.push_str("end\n");
    fs::write(&ham, text).unwrap();
    let out = dir.path().join("zero");
    assert_eq!(run(&out, &["verify-appendix", &format!("hamiltonian_path={}", ham.display())]), 0);
    assert!(column(&read(&out, "ledger.csv"), "status").iter().all(|s| s != "false"));

    let out = dir.path().join("chain");
    assert_eq!(run(&out, &["verify-appendix", "lattice_size=12", "--seed", "3"]), 0);
    let ledger = read(&out, "ledger.csv");
    assert!(column(&ledger, "status").iter().any(|s| s == "true"));

    let out = dir.path().join("custom");
    assert_eq!(run(&out, &["verify-appendix", "lattice_size=8", "partition=custom", "blocks=0-2;5-7"]), 0);

    let out = dir.path().join("forced");
    assert_eq!(run(&out, &["verify-appendix", "lattice_size=8", "rhs_scale=1e-6"]), 3);
    assert!(out.join("ledger.csv").exists());
}

#[test]
fn partition_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("a");
    assert_eq!(run(&out, &["partition", "lattice_size=32"]), 0);
    let check = read(&out, "partition_check.csv");
    assert_eq!(row(&check, "K")[1], "3");
    assert_eq!(row(&check, "passes")[1], "true");
    assert_eq!(read(&out, "partition.csv").lines().count(), 33);
    assert_eq!(run(&dir.path().join("b"), &["partition", "lattice_size=3", "radius=2"]), 1);
}
