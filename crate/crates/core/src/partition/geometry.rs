/// Number of points of `Z^D` within l1 distance `r` of the origin,
/// `sum_k 2^k C(D, k) C(r, k)`.
pub fn beta_r(dim: usize, r: usize) -> u64 {
    (0..=dim.min(r))
        .map(|k| (1u64 << k) * binomial(dim, k) * binomial(r, k))
        .sum()
}

fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i as u64 + 1))
}

/// Smallest `c_D` with `1 + c_D r^D >= beta_r` for all `1 <= r <= r_max`.
pub fn ball_constant(dim: usize, r_max: usize) -> f64 {
    (1..=r_max.max(1))
        .map(|r| (beta_r(dim, r) - 1) as f64 / (r as f64).powi(dim as i32))
        .fold(0.0, f64::max)
}

/// `a^p <= b^q` decided in exact integer arithmetic, falling back to
/// logarithms only if the powers overflow `u128`.
pub(crate) fn pow_le(a: u128, p: u32, b: u128, q: u32) -> bool {
    scaled_pow_le(a, p, 1, b, q)
}

/// `a^p <= c b^q`.
pub(crate) fn scaled_pow_le(a: u128, p: u32, c: u128, b: u128, q: u32) -> bool {
    let lhs = a.checked_pow(p);
    let rhs = b.checked_pow(q).and_then(|x| x.checked_mul(c));
    match (lhs, rhs) {
        (Some(x), Some(y)) => x <= y,
        _ => p as f64 * (a as f64).ln() <= (c as f64).ln() + q as f64 * (b as f64).ln(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force count of `|x_1| + ... + |x_D| <= r`.
    fn enumerate(dim: usize, r: i64) -> u64 {
        fn rec(d: usize, budget: i64) -> u64 {
            if d == 0 {
                return 1;
            }
            (-budget..=budget).map(|x| rec(d - 1, budget - x.abs())).sum()
        }
        rec(dim, r)
    }

    #[test]
    fn ball_counts() {
        assert_eq!(beta_r(1, 2), 5);
        assert_eq!(beta_r(2, 1), 5);
        assert_eq!(beta_r(2, 2), 13);
        assert_eq!(beta_r(1, 4), 9);
        assert_eq!(beta_r(3, 0), 1);
        for d in 1..=4 {
            for r in 0..=8 {
                assert_eq!(beta_r(d, r), enumerate(d, r as i64), "D = {d}, r = {r}");
            }
        }
    }

    #[test]
    fn ball_constant_dominates() {
        for d in 1..=3 {
            for rmax in [4, 8] {
                let c = ball_constant(d, rmax);
                for r in 1..=rmax {
                    assert!(1.0 + c * (r as f64).powi(d as i32) >= beta_r(d, r) as f64);
                }
            }
        }
        assert_eq!(ball_constant(1, 4), 2.0);
    }

    #[test]
    fn exact_power_comparison() {
        assert!(pow_le(8, 5, 32, 3));
        assert!(!pow_le(8, 5, 31, 3));
        assert!(pow_le(2, 200, 3, 200));
        assert!(!pow_le(3, 200, 2, 200));
    }
}
