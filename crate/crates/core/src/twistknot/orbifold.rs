//! Twist-knot orbifolds `T(n, k)` and their orbifold fundamental groups.

use serde::{Deserialize, Serialize};

use crate::error::{param, Result};
use crate::fpcore::{Presentation, Word};

/// Twist parameter columns of the reference table.
pub const TABLE_N: [i32; 7] = [-4, -3, -2, -1, 2, 3, 4];
/// Cone label rows of the reference table.
pub const TABLE_K: [u32; 5] = [3, 4, 5, 6, 7];

/// Percentage of `Γ_0(p)` covers with `β_1 > 0` over norms up to 10 000,
/// indexed `[k - 3][column of n]`; `None` where `T(n, k)` is not hyperbolic.
pub const REFERENCE_PERCENT: [[Option<f64>; 7]; 5] = [
    [Some(0.9), Some(49.0), Some(55.5), None, Some(40.8), Some(41.6), Some(1.3)],
    [Some(1.0), Some(0.8), Some(55.0), Some(40.7), Some(65.5), Some(1.5), Some(0.5)],
    [Some(0.8), Some(0.7), Some(0.8), Some(54.8), Some(56.8), Some(0.9), Some(0.9)],
    [Some(1.1), Some(0.8), Some(0.7), Some(36.3), Some(26.0), Some(0.7), Some(1.6)],
    [Some(0.9), Some(0.9), Some(0.7), Some(2.0), Some(1.7), Some(0.4), Some(1.1)],
];

/// Arithmetic cells of the reference table.
const ARITHMETIC: [(i32, u32); 11] =
    [(-3, 3), (-2, 3), (2, 3), (3, 3), (-2, 4), (-1, 4), (2, 4), (-1, 5), (2, 5), (-1, 6), (2, 6)];

/// Exceptional norms published for the non-arithmetic orbifolds (norms ≤ 10 000).
pub fn reference_exceptional_norms(n: i32, k: u32) -> Option<&'static [u64]> {
    let list: &'static [u64] = match (n, k) {
        (-4, 3) => &[157, 197, 239, 243, 256, 257, 271, 293, 349, 7507],
        (4, 3) => &[13, 29, 41, 53, 61, 73, 89, 125, 127, 128, 151, 173, 233, 587, 1201],
        (-4, 4) => &[73, 79, 103, 233, 1999],
        (-3, 4) => &[103, 113, 121, 167, 7759],
        (3, 4) => &[31, 41, 79, 97, 103, 137, 167],
        (4, 4) => &[23, 103],
        (-4, 5) => &[64, 79, 101, 131, 169, 191, 239, 241],
        (-3, 5) => &[19, 29, 49, 71, 79, 139, 311, 761],
        (-2, 5) => &[29, 49, 71, 79, 89, 256, 379, 625],
        (3, 5) => &[49, 59, 61, 71, 79, 101, 131, 169, 271, 881],
        (4, 5) => &[11, 19, 59, 61, 89, 121, 131, 239, 1361, 2099, 4049],
        (-4, 6) => &[25, 59, 97, 107, 181, 256, 6659],
        (-3, 6) => &[11, 61, 71, 349, 2053],
        (-2, 6) => &[25, 157, 181, 937],
        (3, 6) => &[23, 71, 647, 5209],
        (4, 6) => &[23, 47, 71, 83, 97, 128, 131, 229],
        (-4, 7) => &[13, 27, 29, 41, 43, 97, 127, 449, 1093, 2633],
        (-3, 7) => &[13, 29, 41, 43, 49, 113, 139, 1483],
        (-2, 7) => &[13, 27, 127, 181, 503, 2401],
        (-1, 7) => &[64, 83, 113, 169, 181, 211, 239, 729, 841, 1681, 1849, 5041, 9409],
        (2, 7) => &[13, 29, 41, 49, 83, 97, 113, 127, 139, 181, 349, 463, 6007],
        (3, 7) => &[13, 113, 211, 307, 617],
        (4, 7) => &[29, 41, 43, 97, 127, 139, 379, 1721],
        _ => return None,
    };
    Some(list)
}

/// A hyperbolic twist-knot orbifold from the examined range `|n| <= 4`, `3 <= k <= 7`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrbifoldSpec {
    pub n: i32,
    pub k: u32,
}

impl OrbifoldSpec {
    pub fn new(n: i32, k: u32) -> Result<Self> {
        if !Self::is_allowed(n, k) {
            return param(format!("T({n},{k}) is outside the hyperbolic allowlist"));
        }
        Ok(OrbifoldSpec { n, k })
    }

    /// `n ∈ {-4..4} \ {0, 1}`, `k ∈ 3..=7`, excluding `(-1, 3)`.
    pub fn is_allowed(n: i32, k: u32) -> bool {
        TABLE_N.contains(&n) && TABLE_K.contains(&k) && (n, k) != (-1, 3)
    }

    pub fn all() -> Vec<OrbifoldSpec> {
        TABLE_K
            .iter()
            .flat_map(|&k| TABLE_N.iter().map(move |&n| (n, k)))
            .filter(|&(n, k)| Self::is_allowed(n, k))
            .map(|(n, k)| OrbifoldSpec { n, k })
            .collect()
    }

    pub fn is_arithmetic(&self) -> bool {
        ARITHMETIC.contains(&(self.n, self.k))
    }

    pub fn reference_percent(&self) -> Option<f64> {
        let col = TABLE_N.iter().position(|&n| n == self.n)?;
        REFERENCE_PERCENT[(self.k - 3) as usize][col]
    }

    pub fn reference_exceptional_norms(&self) -> Option<&'static [u64]> {
        reference_exceptional_norms(self.n, self.k)
    }
}

impl std::fmt::Display for OrbifoldSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "T({},{})", self.n, self.k)
    }
}

/// `w = b a^-1 b^-1 a`.
pub fn twist_word() -> Word {
    Word(vec![2, -1, -2, 1])
}

/// `⟨a, b | a^k, b^k, w^n a w^-n b^-1⟩`, the last relator cyclically reduced.
pub fn twist_presentation(spec: &OrbifoldSpec) -> Presentation {
    let k = spec.k as i64;
    let wn = twist_word().pow(spec.n as i64);
    let third = wn.concat(&Word(vec![1])).concat(&wn.inverse()).concat(&Word(vec![-2]));
    Presentation::new(2, vec![Word(vec![1]).pow(k), Word(vec![2]).pow(k), third.cyclically_reduced()])
        .expect("letters are in range")
}
