//! Explicit constants of the local-Hamiltonian bounds, each with a
//! derivation record that can be replayed from its logged inputs.

use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::model::LatticeSpec;

use super::geometry::{ball_constant, beta_r};

/// One derived constant: `value = formula(inputs)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Derivation {
    pub name: &'static str,
    pub value: f64,
    pub formula: &'static str,
    pub inputs: Vec<(&'static str, f64)>,
}

impl Derivation {
    fn new(name: &'static str, inputs: Vec<(&'static str, f64)>) -> Self {
        let value = evaluate(name, &inputs).expect("known constant");
        Self {
            name,
            value,
            formula: formula_of(name).expect("known constant"),
            inputs,
        }
    }

    /// Recomputes the value from the logged inputs.
    pub fn recompute(&self) -> Result<f64> {
        evaluate(self.name, &self.inputs)
    }
}

fn formula_of(name: &str) -> Option<&'static str> {
    Some(match name {
        "beta_2R" => "sum_k 2^k C(D;k) C(2R;k)",
        "beta_4R" => "sum_k 2^k C(D;k) C(4R;k)",
        "c_D" => "max_{1<=r<=4R} (beta_r - 1) / r^D",
        "c2" => "h^2 beta_2R",
        "c4" => "h^4 (3 beta_2R beta_4R^2 + beta_2R^3 + 6 beta_2R beta_4R + 3 beta_2R^2)",
        "x" => "min(c2^(-3/2); 22 / (6 sqrt(c2 c4)))",
        "tail_integral" => "int_0^inf (t^2 + 1) exp(-t^2/36) dt = 57 sqrt(pi)",
        "lemma_a0" => "x",
        "lemma_b0" => "max(h^2 (1 + 3 beta_2R) / 6; tail_integral; (3 c2)^(1/3))",
        "theorem_a0" => "x / 8",
        "theorem_b0" => "lemma_b0 max(2 (R + 1) (x/8)^2 c2^2; 8 / x)",
        "corollary_b0" => "max(2 theorem_b0; 8)",
        "gaussian_integral" => "int_0^inf exp(-s^2) ds = sqrt(pi) / 2",
        "solvable_a0" => "max(2 gaussian_integral; 8)",
        _ => return None,
    })
}

fn input(inputs: &[(&str, f64)], key: &str) -> Result<f64> {
    inputs
        .iter()
        .find(|(k, _)| *k == key)
        .map(|(_, v)| *v)
        .ok_or_else(|| Error::validation(format!("derivation input {key} missing")))
}

/// Evaluates a named constant from explicit inputs.
pub fn evaluate(name: &str, inputs: &[(&str, f64)]) -> Result<f64> {
    let get = |k: &str| input(inputs, k);
    Ok(match name {
        "beta_2R" => beta_r(get("D")? as usize, 2 * get("R")? as usize) as f64,
        "beta_4R" => beta_r(get("D")? as usize, 4 * get("R")? as usize) as f64,
        "c_D" => ball_constant(get("D")? as usize, 4 * get("R")? as usize),
        "c2" => {
            let h = get("h")?;
            h * h * get("beta_2R")?
        }
        "c4" => {
            let (h, b2, b4) = (get("h")?, get("beta_2R")?, get("beta_4R")?);
            h.powi(4) * (3.0 * b2 * b4 * b4 + b2 * b2 * b2 + 6.0 * b2 * b4 + 3.0 * b2 * b2)
        }
        "x" => {
            let (c2, c4) = (get("c2")?, get("c4")?);
            (1.0 / (c2 * c2 * c2).sqrt()).min(22.0 / (6.0 * (c2 * c4).sqrt()))
        }
        "tail_integral" => 57.0 * PI.sqrt(),
        "lemma_a0" => get("x")?,
        "lemma_b0" => {
            let (h, b2, c2) = (get("h")?, get("beta_2R")?, get("c2")?);
            (h * h * (1.0 + 3.0 * b2) / 6.0)
                .max(get("tail_integral")?)
                .max((3.0 * c2).cbrt())
        }
        "theorem_a0" => get("x")? / 8.0,
        "theorem_b0" => {
            let (b0, r, x, c2) = (get("lemma_b0")?, get("R")?, get("x")?, get("c2")?);
            let y = x / 8.0;
            b0 * (2.0 * (r + 1.0) * y * y * c2 * c2).max(8.0 / x)
        }
        "corollary_b0" => (2.0 * get("theorem_b0")?).max(8.0),
        "gaussian_integral" => PI.sqrt() / 2.0,
        "solvable_a0" => (2.0 * get("gaussian_integral")?).max(8.0),
        other => return Err(Error::validation(format!("unknown constant {other}"))),
    })
}

/// Constants of the block-factorization bounds for interaction radius `R`,
/// norm bound `h` and lattice dimension `D`.
#[derive(Debug, Clone, PartialEq)]
pub struct LemmaConstants {
    pub dim: usize,
    pub radius: usize,
    pub h: f64,
    pub beta_2r: u64,
    pub beta_4r: u64,
    /// Smallest `c_D` with `1 + c_D r^D` dominating the ball counts up to `4R`.
    pub c_d: f64,
    pub c2: f64,
    pub c4: f64,
    pub x: f64,
    /// Time-window constant: the block bound holds for `T <= a0 sigma^2 / (|A| max|A_n|^{1/2})`.
    pub lemma_a0: f64,
    pub lemma_b0: f64,
    /// `T = a0 sigma_bar^2 N^{1/(5D) - 1/2}` for the slab partition.
    pub theorem_a0: f64,
    pub theorem_b0: f64,
    pub corollary_b0: f64,
    pub log: Vec<Derivation>,
}

pub fn lemma_constants(lattice: &LatticeSpec, h: f64) -> Result<LemmaConstants> {
    constants_for(lattice.dim(), lattice.radius(), h)
}

pub fn constants_for(dim: usize, radius: usize, h: f64) -> Result<LemmaConstants> {
    if dim == 0 || radius == 0 {
        return Err(Error::domain("dimension and radius must be positive"));
    }
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::domain(format!("norm bound h = {h} must be positive")));
    }
    let (d, r) = (dim as f64, radius as f64);
    let mut log = Vec::new();
    let mut push = |name, inputs| -> f64 {
        let entry = Derivation::new(name, inputs);
        let v = entry.value;
        log.push(entry);
        v
    };
    let b2 = push("beta_2R", vec![("D", d), ("R", r)]);
    let b4 = push("beta_4R", vec![("D", d), ("R", r)]);
    let c_d = push("c_D", vec![("D", d), ("R", r)]);
    let c2 = push("c2", vec![("h", h), ("beta_2R", b2)]);
    let c4 = push("c4", vec![("h", h), ("beta_2R", b2), ("beta_4R", b4)]);
    let x = push("x", vec![("c2", c2), ("c4", c4)]);
    let tail = push("tail_integral", vec![]);
    let lemma_a0 = push("lemma_a0", vec![("x", x)]);
    let lemma_b0 = push(
        "lemma_b0",
        vec![("h", h), ("beta_2R", b2), ("c2", c2), ("tail_integral", tail)],
    );
    let theorem_a0 = push("theorem_a0", vec![("x", x)]);
    let theorem_b0 = push(
        "theorem_b0",
        vec![("lemma_b0", lemma_b0), ("R", r), ("x", x), ("c2", c2)],
    );
    let corollary_b0 = push("corollary_b0", vec![("theorem_b0", theorem_b0)]);
    Ok(LemmaConstants {
        dim,
        radius,
        h,
        beta_2r: b2 as u64,
        beta_4r: b4 as u64,
        c_d,
        c2,
        c4,
        x,
        lemma_a0,
        lemma_b0,
        theorem_a0,
        theorem_b0,
        corollary_b0,
        log,
    })
}

/// Constant `a0` of the solvable-spectrum bound
/// `E[Delta(T)]^2 <= a0 dS (1/(T sigma) + 1/dB)`.
pub fn solvable_constants() -> Vec<Derivation> {
    let g = Derivation::new("gaussian_integral", vec![]);
    let a0 = Derivation::new("solvable_a0", vec![("gaussian_integral", g.value)]);
    vec![g, a0]
}

/// `name,value,formula,inputs` rows; floats carry 17 significant digits.
pub fn derivation_csv(log: &[Derivation]) -> String {
    let mut out = String::from("name,value,formula,inputs\n");
    for d in log {
        let inputs: Vec<String> = d.inputs.iter().map(|(k, v)| format!("{k}={v:.16e}")).collect();
        let _ = writeln!(out, "{},{:.16e},{},{}", d.name, d.value, d.formula, inputs.join(";"));
    }
    out
}

/// Parses [`derivation_csv`] output and recomputes every row, returning the
/// names whose recomputed value differs from the logged one.
pub fn replay_derivation_csv(text: &str) -> Result<Vec<String>> {
    let mut mismatched = Vec::new();
    for (ln, line) in text.lines().enumerate().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.splitn(4, ',').collect();
        if cols.len() != 4 {
            return Err(Error::parse(ln + 1, "expected 4 columns"));
        }
        let value: f64 = cols[1].parse().map_err(|_| Error::parse(ln + 1, "bad value"))?;
        let mut inputs: Vec<(&str, f64)> = Vec::new();
        for kv in cols[3].split(';').filter(|s| !s.is_empty()) {
            let (k, v) = kv.split_once('=').ok_or_else(|| Error::parse(ln + 1, "bad input"))?;
            inputs.push((k, v.parse().map_err(|_| Error::parse(ln + 1, "bad input value"))?));
        }
        if evaluate(cols[0], &inputs)?.to_bits() != value.to_bits() {
            mismatched.push(cols[0].to_string());
        }
    }
    Ok(mismatched)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Composite Simpson rule on `[0, b]` with `n` (even) panels.
    fn simpson(f: impl Fn(f64) -> f64, b: f64, n: usize) -> f64 {
        let h = b / n as f64;
        let mut acc = f(0.0) + f(b);
        for k in 1..n {
            acc += if k % 2 == 1 { 4.0 } else { 2.0 } * f(k as f64 * h);
        }
        acc * h / 3.0
    }

    #[test]
    fn chain_constants() {
        let c = constants_for(1, 1, 1.0).unwrap();
        assert_eq!((c.beta_2r, c.beta_4r), (5, 9));
        assert_eq!(c.c2, 5.0);
        assert_eq!(c.c4, 1685.0);
        assert_eq!(c.c_d, 2.0);
        assert!(c.x <= 1.0 / c.c2.powf(1.5));
        assert!((c.c2 * c.c4).sqrt() * c.x <= 22.0 / 6.0 + 1e-15);
        assert_eq!(c.lemma_a0, c.x);
        assert_eq!(c.theorem_a0, c.x / 8.0);
        assert!(c.corollary_b0 >= 2.0 * c.theorem_b0);
        for v in [c.x, c.lemma_b0, c.theorem_b0, c.corollary_b0] {
            assert!(v > 0.0 && v.is_finite());
        }
    }

    #[test]
    fn homogeneity_in_h() {
        let a = constants_for(2, 1, 1.0).unwrap();
        let b = constants_for(2, 1, 2.0).unwrap();
        assert_eq!(b.c2, 4.0 * a.c2);
        assert_eq!(b.c4, 16.0 * a.c4);
    }

    #[test]
    fn tail_integral_by_quadrature() {
        let q = simpson(|t| (t * t + 1.0) * (-t * t / 36.0).exp(), 400.0, 400_000);
        assert!((q - 57.0 * PI.sqrt()).abs() < 1e-6);
        let g = simpson(|s| (-s * s).exp(), 40.0, 40_000);
        assert!((g - PI.sqrt() / 2.0).abs() < 1e-9);
        assert_eq!(solvable_constants()[1].value, 8.0);
    }

    #[test]
    fn derivation_log_replays() {
        for (d, r, h) in [(1, 1, 1.0), (2, 2, 0.37), (3, 1, 5.5)] {
            let c = constants_for(d, r, h).unwrap();
            for entry in &c.log {
                assert_eq!(entry.recompute().unwrap().to_bits(), entry.value.to_bits());
            }
            let csv = derivation_csv(&c.log);
            assert!(replay_derivation_csv(&csv).unwrap().is_empty());
        }
        let tampered = "name,value,formula,inputs\nc2,5.0000000000000001e0,h^2 beta_2R,h=1e0;beta_2R=6e0\n";
        assert_eq!(replay_derivation_csv(tampered).unwrap(), vec!["c2".to_string()]);
    }

    #[test]
    fn invalid_inputs() {
        assert!(constants_for(1, 1, 0.0).is_err());
        assert!(constants_for(0, 1, 1.0).is_err());
        assert!(evaluate("c2", &[("h", 1.0)]).is_err());
    }
}
