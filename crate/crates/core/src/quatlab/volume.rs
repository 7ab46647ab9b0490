//! `vol(M_0) = 8√2/π² · ζ_K(2)` for `K = Q(√-2)`.

use serde::Serialize;

use crate::error::{param, Result};

/// Kronecker symbol `(-8/n)`.
pub fn chi_m8(n: u64) -> i32 {
    match n % 8 {
        1 | 3 => 1,
        5 | 7 => -1,
        _ => 0,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VolumeReport {
    pub terms: u64,
    pub zeta2: f64,
    pub l2_chi: f64,
    pub zeta_k2: f64,
    /// `vol(M_0)`.
    pub volume: f64,
    /// `vol(M_0') = 2 vol(M_0)`.
    pub volume_prime: f64,
    /// Bound on the truncation error of `volume`.
    pub error_bound: f64,
}

pub const MIN_TERMS: u64 = 1000;

/// `Σ_{n<=N} 1/n^2` plus the midpoint of the tail interval `[1/(N+1), 1/N]`,
/// with half its width as error bound.
pub fn zeta2_series(terms: u64) -> (f64, f64) {
    let s: f64 = (1..=terms).rev().map(|n| 1.0 / (n as f64 * n as f64)).sum();
    let n = terms as f64;
    let (lo, hi) = (1.0 / (n + 1.0), 1.0 / n);
    (s + (lo + hi) / 2.0, (hi - lo) / 2.0)
}

/// `Σ_{n<=N} χ(n)/n^2`; the partial sums of `χ` lie in `[0, 2]`, so the tail is below `2/N^2`.
pub fn l2_chi_series(terms: u64) -> (f64, f64) {
    let s: f64 = (1..=terms).rev().filter(|n| n % 2 == 1).map(|n| chi_m8(n) as f64 / (n as f64 * n as f64)).sum();
    (s, 2.0 / (terms as f64 * terms as f64))
}

pub fn volume_constant(terms: u64) -> Result<VolumeReport> {
    if terms < MIN_TERMS {
        return param(format!("at least {MIN_TERMS} terms required"));
    }
    let (zeta2, e1) = zeta2_series(terms);
    let (l2_chi, e2) = l2_chi_series(terms);
    let zeta_k2 = zeta2 * l2_chi;
    let c = 8.0 * std::f64::consts::SQRT_2 / (std::f64::consts::PI * std::f64::consts::PI);
    let volume = c * zeta_k2;
    let error_bound = c * (e1 * l2_chi + e2 * zeta2 + e1 * e2) + 1e-15 * volume;
    Ok(VolumeReport { terms, zeta2, l2_chi, zeta_k2, volume, volume_prime: 2.0 * volume, error_bound })
}

/// Slow cross-check: `ζ_K(2) = Σ_I N(I)^-2` over ideals of norm `<= max_norm`,
/// counting ideals as generators `x + y√-2` up to sign.
pub fn zeta_k2_ideal_count(max_norm: u64) -> f64 {
    let mut counts = vec![0u32; max_norm as usize + 1];
    let mut y = 0u64;
    while 2 * y * y <= max_norm {
        let mut x = 0u64;
        while x * x + 2 * y * y <= max_norm {
            let n = (x * x + 2 * y * y) as usize;
            // points (±x, ±y), each ideal hit twice
            let mult = if x == 0 { 1 } else { 2 } * if y == 0 { 1 } else { 2 };
            counts[n] += mult;
            x += 1;
        }
        y += 1;
    }
    (1..=max_norm as usize).rev().map(|n| counts[n] as f64 / 2.0 / (n as f64 * n as f64)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    const REFERENCE: f64 = 2.007_682_006_682_396_3;

    #[test]
    fn volume_digits() {
        let r = volume_constant(10_000_000).unwrap();
        assert!((r.volume - REFERENCE).abs() < 1e-11, "{}", r.volume);
        assert!(r.error_bound < 1e-11);
        assert!((r.zeta2 - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-13);
        assert_eq!(r.volume_prime / r.volume, 2.0);
        assert!(volume_constant(999).is_err());
    }

    #[test]
    fn ideal_count_oracle() {
        let series = volume_constant(1_000_000).unwrap().zeta_k2;
        let n = 200_000;
        let slow = zeta_k2_ideal_count(n);
        // the missing tail is about (residue at 1)/N with residue π/√8 < 1.2
        assert!(series > slow && series - slow < 1.2 / n as f64, "{series} {slow}");
    }

    #[test]
    fn decades_converge() {
        let v: Vec<f64> = (3..=7).map(|e| volume_constant(10u64.pow(e)).unwrap().volume).collect();
        let diffs: Vec<f64> = v.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
        for d in diffs.windows(2) {
            assert!(d[1] <= d[0], "{diffs:?}");
        }
    }
}
