//! Abelianization via integer Smith normal form.
//!
//! The elimination runs first in checked `i64` arithmetic and restarts in
//! `BigInt` if any intermediate entry overflows.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::sparse::rank_mod_p_dense;
use super::word::Presentation;
use crate::arith::is_prime;
use crate::error::{param, Result};

/// Free rank and torsion invariants `d1 | d2 | ...` (all > 1) of a finitely generated abelian group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianInvariants {
    pub betti: usize,
    pub torsion: Vec<BigInt>,
}

impl AbelianInvariants {
    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().fold(BigInt::from(1), |acc, d| acc * d)
    }

    pub fn is_finite(&self) -> bool {
        self.betti == 0
    }
}

trait SnfScalar: Clone + PartialEq {
    fn is_nil(&self) -> bool;
    fn abs_less(&self, other: &Self) -> bool;
    fn quot(&self, other: &Self) -> Self;
    /// `self - q * other`, or `None` on overflow.
    fn sub_mul(&self, q: &Self, other: &Self) -> Option<Self>;
}

impl SnfScalar for i64 {
    fn is_nil(&self) -> bool {
        *self == 0
    }
    fn abs_less(&self, other: &Self) -> bool {
        self.unsigned_abs() < other.unsigned_abs()
    }
    fn quot(&self, other: &Self) -> Self {
        self / other
    }
    fn sub_mul(&self, q: &Self, other: &Self) -> Option<Self> {
        self.checked_sub(q.checked_mul(*other)?)
    }
}

impl SnfScalar for BigInt {
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn abs_less(&self, other: &Self) -> bool {
        self.abs() < other.abs()
    }
    fn quot(&self, other: &Self) -> Self {
        self / other
    }
    fn sub_mul(&self, q: &Self, other: &Self) -> Option<Self> {
        Some(self - q * other)
    }
}

/// Diagonalizes `m` by unimodular row and column operations; returns the
/// nonzero diagonal, or `None` if the scalar type overflowed.
fn diagonalize<T: SnfScalar>(mut m: Vec<Vec<T>>, ncols: usize) -> Option<Vec<T>> {
    let nrows = m.len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < nrows.min(ncols) {
        // global minimum of the remaining block as first pivot
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in m.iter().enumerate().skip(t) {
            for (j, v) in row.iter().enumerate().skip(t) {
                if !v.is_nil() && best.map_or(true, |(bi, bj)| v.abs_less(&m[bi][bj])) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut clean = true;
            for i in t + 1..nrows {
                if !m[i][t].is_nil() {
                    let q = m[i][t].quot(&m[t][t]);
                    for j in t..ncols {
                        let v = m[i][j].sub_mul(&q, &m[t][j])?;
                        m[i][j] = v;
                    }
                    if !m[i][t].is_nil() {
                        clean = false;
                    }
                }
            }
            for j in t + 1..ncols {
                if !m[t][j].is_nil() {
                    let q = m[t][j].quot(&m[t][t]);
                    for row in m.iter_mut().skip(t) {
                        let v = row[j].sub_mul(&q, &row[t])?;
                        row[j] = v;
                    }
                    if !m[t][j].is_nil() {
                        clean = false;
                    }
                }
            }
            if clean {
                break;
            }
            // smallest remainder in the pivot row/column becomes the new pivot
            let mut best = (t, t);
            for i in t + 1..nrows {
                if !m[i][t].is_nil() && m[i][t].abs_less(&m[best.0][best.1]) {
                    best = (i, t);
                }
            }
            for j in t + 1..ncols {
                if !m[t][j].is_nil() && m[t][j].abs_less(&m[best.0][best.1]) {
                    best = (t, j);
                }
            }
            if best.1 == t {
                m.swap(t, best.0);
            } else {
                for row in m.iter_mut() {
                    row.swap(t, best.1);
                }
            }
        }
        diag.push(m[t][t].clone());
        t += 1;
    }
    Some(diag)
}

/// Invariant factors (absolute values, divisibility-ordered) of an integer
/// matrix with `ncols` columns, including unit factors, excluding zeros.
pub fn smith_invariants(rows: &[Vec<i64>], ncols: usize) -> Vec<BigInt> {
    let diag: Vec<BigInt> = match diagonalize(rows.to_vec(), ncols) {
        Some(d) => d.into_iter().map(BigInt::from).collect(),
        None => {
            let big: Vec<Vec<BigInt>> =
                rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
            diagonalize(big, ncols).expect("BigInt elimination cannot overflow")
        }
    };
    let mut d: Vec<BigInt> = diag.into_iter().map(|v| v.abs()).collect();
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            let g = d[i].gcd(&d[j]);
            let l = d[i].lcm(&d[j]);
            d[i] = g;
            d[j] = l;
        }
    }
    d
}

/// Integer abelianization `H_1` of a presentation.
pub fn abelianization(pres: &Presentation) -> AbelianInvariants {
    abelian_invariants_of(&pres.exponent_matrix(), pres.ngens())
}

/// Abelian group with `ngens` generators and the given relation rows.
pub fn abelian_invariants_of(rows: &[Vec<i64>], ngens: usize) -> AbelianInvariants {
    let inv = smith_invariants(rows, ngens);
    let one = BigInt::from(1);
    AbelianInvariants {
        betti: ngens - inv.len(),
        torsion: inv.into_iter().filter(|d| *d != one).collect(),
    }
}

/// `dim H_1(G; F_P)`.
pub fn mod_p_rank_h1(pres: &Presentation, p: u64) -> Result<usize> {
    if !is_prime(p) {
        return param(format!("{p} is not prime"));
    }
    let rows: Vec<Vec<u64>> = pres
        .exponent_matrix()
        .iter()
        .map(|r| r.iter().map(|&v| v.rem_euclid(p as i64) as u64).collect())
        .collect();
    Ok(pres.ngens() - rank_mod_p_dense(rows, pres.ngens(), p))
}

/// Convenience for reporting small torsion values.
pub fn torsion_as_u64(inv: &AbelianInvariants) -> Option<Vec<u64>> {
    inv.torsion.iter().map(|d| d.to_u64()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpcore::word::Word;
    use proptest::prelude::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn cyclic_and_free() {
        let z = Presentation::free(1).unwrap();
        assert_eq!(abelianization(&z), AbelianInvariants { betti: 1, torsion: vec![] });
        let c4 = Presentation::from_letters(1, &["aaaa"]).unwrap();
        assert_eq!(abelianization(&c4).torsion, big(&[4]));
    }

    #[test]
    fn twist_44_exponent_rows() {
        // rows (4,0),(0,4),(1,-1): hand SNF gives Z/4
        let inv = abelian_invariants_of(&[vec![4, 0], vec![0, 4], vec![1, -1]], 2);
        assert_eq!(inv, AbelianInvariants { betti: 0, torsion: big(&[4]) });
    }

    #[test]
    fn divisibility_chain_normalized() {
        let inv = abelian_invariants_of(&[vec![6, 0], vec![0, 4]], 2);
        assert_eq!(inv.torsion, big(&[2, 12]));
    }

    #[test]
    fn overflow_falls_back_to_bigint() {
        let huge = i64::MAX / 3;
        let rows = vec![vec![huge, huge - 1, 7], vec![huge - 5, 3, huge], vec![11, huge, huge - 2]];
        let a = abelian_invariants_of(&rows, 3);
        // determinant check through BigInt arithmetic
        let m: Vec<Vec<BigInt>> = rows.iter().map(|r| big(r)).collect();
        let det = &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1])
            - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
            + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0]);
        assert_eq!(a.betti, 0);
        assert_eq!(a.torsion_order(), det.abs());
    }

    #[test]
    fn mod_p_examples() {
        assert_eq!(mod_p_rank_h1(&Presentation::free(2).unwrap(), 31991).unwrap(), 2);
        let c2 = Presentation::from_letters(1, &["aa"]).unwrap();
        assert_eq!(mod_p_rank_h1(&c2, 2).unwrap(), 1);
        assert_eq!(mod_p_rank_h1(&c2, 3).unwrap(), 0);
        assert!(mod_p_rank_h1(&c2, 4).is_err());
    }

    fn random_pres() -> impl Strategy<Value = Presentation> {
        (1usize..=4).prop_flat_map(|n| {
            prop::collection::vec(
                prop::collection::vec((1..=n as i32, any::<bool>()), 0..=12),
                0..=5,
            )
            .prop_map(move |rels| {
                let words = rels
                    .into_iter()
                    .map(|r| Word(r.into_iter().map(|(g, s)| if s { g } else { -g }).collect()))
                    .collect();
                Presentation::new(n, words).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn betti_matches_mod_p_rank(pres in random_pres()) {
            let inv = abelianization(&pres);
            for p in [31991u64, 65537] {
                let divides = inv.torsion.iter().any(|d| (d % BigInt::from(p)).is_zero());
                if !divides {
                    prop_assert_eq!(mod_p_rank_h1(&pres, p).unwrap(), inv.betti);
                }
            }
            for w in inv.torsion.windows(2) {
                prop_assert!((&w[1] % &w[0]).is_zero());
            }
        }
    }
}
