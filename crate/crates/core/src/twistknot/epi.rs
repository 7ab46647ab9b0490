//! Epimorphisms `π_1(T(n,k)) → PSL_2(F_q)` up to automorphism, and their `Γ_0` covers.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::orbifold::{twist_presentation, OrbifoldSpec};
use super::rep::{build_rep_from, conjugate_to_base_field, relator_image};
use crate::arith::prime_power;
use crate::error::{param, Error, Result};
use crate::finfield::{order_k_traces_in, Extension, FqCtx, FqElem, Mat2, QuadraticSolver};
use crate::fpcore::{betti_proxy_cover, order_at_least, Permutation};

pub const DEFAULT_PROXY_PRIME: u64 = 31991;
pub const CROSS_CHECK_PRIME: u64 = 65537;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EpiOptions {
    /// Require `ρ(a)` of order exactly `k` instead of any divisor `k' >= 2`.
    pub exact: bool,
}

impl Default for EpiOptions {
    fn default() -> Self {
        EpiOptions { exact: false }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EpiClass {
    pub q: u64,
    pub p: u64,
    pub m: usize,
    pub n: i32,
    pub k: u32,
    /// Minimum of `index(x) * q + index(y)` over Frobenius and `x ↦ -x`.
    pub canonical_key: u64,
    pub x: FqElem,
    pub y: FqElem,
    pub t: FqElem,
    pub semisimple: bool,
    /// Projective order of `ρ(a)`.
    pub a_order: u64,
    pub a0: Mat2,
    pub b0: Mat2,
    pub order_verified: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverRecord {
    pub q: u64,
    pub canonical_key: u64,
    pub betti_proxy: usize,
    pub proxy_prime: u64,
}

/// `|PSL_2(F_q)| = q (q^2 - 1) / gcd(2, q - 1)`.
pub fn psl2_order(q: u64) -> BigUint {
    let o = BigUint::from(q) * BigUint::from(q * q - 1);
    if q % 2 == 1 {
        o / 2u32
    } else {
        o
    }
}

/// Per-field data reused across orbifolds.
pub struct FieldData {
    pub ext: Extension,
    pub solver: QuadraticSolver,
}

impl FieldData {
    pub fn new(q: u64) -> Result<Self> {
        let Some((p, m)) = prime_power(q) else {
            return param(format!("{q} is not a prime power"));
        };
        let f = FqCtx::new(p, m as usize)?;
        let solver = QuadraticSolver::new(&f);
        Ok(FieldData { ext: f.quadratic_extension()?, solver })
    }

    pub fn field(&self) -> &FqCtx {
        &self.ext.small
    }
}

fn dedupe_key(f: &FqCtx, x: &FqElem, y: &FqElem) -> u64 {
    let q = f.q();
    let mut best = u64::MAX;
    let (mut fx, mut fy) = (*x, *y);
    for _ in 0..f.m() {
        for xx in [fx, f.neg(&fx)] {
            best = best.min(f.index(&xx) * q + f.index(&fy));
        }
        fx = f.frobenius(&fx);
        fy = f.frobenius(&fy);
    }
    best
}

/// Permutations of `P^1(F_q)` for a right action: generator `g` moves a point by `ρ(g)^-1`.
pub fn right_action_images(f: &FqCtx, a0: &Mat2, b0: &Mat2) -> Result<Vec<Permutation>> {
    Ok(vec![
        crate::finfield::p1_action(f, &a0.inverse_sl2(f))?,
        crate::finfield::p1_action(f, &b0.inverse_sl2(f))?,
    ])
}

pub fn enumerate_epimorphisms(spec: &OrbifoldSpec, q: u64, opts: &EpiOptions) -> Result<Vec<EpiClass>> {
    let data = FieldData::new(q)?;
    enumerate_with(spec, &data, opts)
}

pub fn enumerate_with(spec: &OrbifoldSpec, data: &FieldData, opts: &EpiOptions) -> Result<Vec<EpiClass>> {
    let ext = &data.ext;
    let f = &ext.small;
    let q = f.q();
    let target = psl2_order(q);
    let mut classes: Vec<EpiClass> = Vec::new();
    let mut rejected: Vec<u64> = Vec::new();
    for trace in order_k_traces_in(ext, spec.k as u64, opts.exact)? {
        for t in f.elements() {
            let Ok(cand) = build_rep_from(spec, ext, &trace, &t)? else { continue };
            let key = dedupe_key(f, &cand.x, &cand.y);
            if rejected.contains(&key) || classes.iter().any(|c| c.canonical_key == key) {
                continue;
            }
            let (a0, b0) = conjugate_to_base_field(f, &data.solver, &cand.x, &cand.y)?;
            if !relator_image(f, spec.n, &a0, &b0).is_plus_minus_identity(f) {
                return Err(Error::Invariant(format!("relator fails after conjugation, q={q}")));
            }
            let images = right_action_images(f, &a0, &b0)?;
            if !order_at_least(&images, &target)? {
                rejected.push(key);
                continue;
            }
            classes.push(EpiClass {
                q,
                p: f.p(),
                m: f.m(),
                n: spec.n,
                k: spec.k,
                canonical_key: key,
                x: cand.x,
                y: cand.y,
                t,
                semisimple: cand.semisimple,
                a_order: trace.order,
                a0,
                b0,
                order_verified: true,
            });
        }
    }
    classes.sort_by_key(|c| c.canonical_key);
    Ok(classes)
}

/// Rebuilds the field context of a class.
pub fn class_field(epi: &EpiClass) -> Result<FqCtx> {
    FqCtx::new(epi.p, epi.m)
}

/// `β_1` proxy of `Γ_0` (stabilizer of the point `(1:0)`) over `F_P`.
pub fn cover_betti(epi: &EpiClass, proxy_prime: u64) -> Result<CoverRecord> {
    let f = class_field(epi)?;
    cover_betti_at(epi, &f, proxy_prime, epi.q as usize)
}

/// As [`cover_betti`] with an explicit stabilized point.
pub fn cover_betti_at(epi: &EpiClass, f: &FqCtx, proxy_prime: u64, point: usize) -> Result<CoverRecord> {
    let spec = OrbifoldSpec { n: epi.n, k: epi.k };
    let images = right_action_images(f, &epi.a0, &epi.b0)?;
    let betti_proxy = betti_proxy_cover(&twist_presentation(&spec), &images, point, proxy_prime)?;
    Ok(CoverRecord { q: epi.q, canonical_key: epi.canonical_key, betti_proxy, proxy_prime })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpcore::{abelianized_rewriting_matrix, schreier_sims_order};
    use std::collections::{HashMap, HashSet};

    /// Brute-force oracle: count surjective pairs in PSL_2(F_q) satisfying the
    /// relators, divided by |Aut PSL_2(F_q)| = m q (q^2 - 1), on which they are a free orbit set.
    struct BruteGroup {
        mul: Vec<Vec<u32>>,
        inv: Vec<usize>,
        identity: usize,
    }

    fn brute_group(f: &FqCtx) -> BruteGroup {
        // PSL_2 elements: SL_2 matrices with a normalized sign
        let q = f.q();
        let mut elems: Vec<Mat2> = Vec::new();
        let mut index: HashMap<Mat2, usize> = HashMap::new();
        let norm = |m: &Mat2| -> Mat2 {
            let neg = Mat2::new(f.neg(&m.a11), f.neg(&m.a12), f.neg(&m.a21), f.neg(&m.a22));
            let key = |m: &Mat2| [m.a11, m.a12, m.a21, m.a22].map(|e| f.index(&e));
            if key(&neg) < key(m) { neg } else { *m }
        };
        for a in 0..q {
            for b in 0..q {
                for c in 0..q {
                    for d in 0..q {
                        let m = Mat2::new(f.elem(a), f.elem(b), f.elem(c), f.elem(d));
                        if m.det(f) == f.one() {
                            let m = norm(&m);
                            if !index.contains_key(&m) {
                                index.insert(m, elems.len());
                                elems.push(m);
                            }
                        }
                    }
                }
            }
        }
        let g = elems.len();
        let mul: Vec<Vec<u32>> = elems
            .iter()
            .map(|x| elems.iter().map(|y| index[&norm(&x.mul(f, y))] as u32).collect())
            .collect();
        let identity = index[&norm(&Mat2::identity(f))];
        let inv: Vec<usize> = (0..g).map(|x| (0..g).find(|&y| mul[x][y] as usize == identity).unwrap()).collect();
        BruteGroup { mul, inv, identity }
    }

    fn brute_force_classes(spec: &OrbifoldSpec, group: &BruteGroup, f: &FqCtx) -> u64 {
        let (mul, inv, identity) = (&group.mul, &group.inv, group.identity);
        let g = mul.len();
        let q = f.q();
        let power = |x: usize, e: u32| (0..e).fold(identity, |acc, _| mul[acc][x] as usize);
        let k = spec.k;
        let order_ok: Vec<usize> = (0..g).filter(|&x| power(x, k) == identity).collect();
        let mut surjective = 0u64;
        for &a in &order_ok {
            for &b in &order_ok {
                let w = mul[mul[mul[b][inv[a]] as usize][inv[b]] as usize][a] as usize;
                let w = if spec.n < 0 { inv[w] } else { w };
                let wn = power(w, spec.n.unsigned_abs());
                let r = mul[mul[mul[wn][a] as usize][inv[wn]] as usize][inv[b]] as usize;
                if r != identity {
                    continue;
                }
                // closure of <a, b>
                let mut seen = HashSet::from([identity]);
                let mut frontier = vec![identity];
                while let Some(x) = frontier.pop() {
                    for gen in [a, b] {
                        let y = mul[x][gen] as usize;
                        if seen.insert(y) {
                            frontier.push(y);
                        }
                    }
                }
                if seen.len() == g {
                    surjective += 1;
                }
            }
        }
        let aut = f.m() as u64 * q * (q * q - 1);
        assert_eq!(surjective % aut, 0, "automorphisms act freely");
        surjective / aut
    }

    #[test]
    fn class_counts_match_brute_force() {
        let specs = [(2, 3), (-2, 3), (3, 3), (4, 4), (-3, 4), (2, 5), (-1, 5), (3, 6), (-4, 7)];
        for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13] {
            let data = FieldData::new(q).unwrap();
            let group = brute_group(data.field());
            for &(n, k) in &specs {
                let spec = OrbifoldSpec::new(n, k).unwrap();
                let ours = enumerate_with(&spec, &data, &EpiOptions::default()).unwrap();
                let brute = brute_force_classes(&spec, &group, data.field());
                assert_eq!(ours.len() as u64, brute, "T({n},{k}) q={q}");
            }
        }
    }

    #[test]
    fn small_fields() {
        // S_3 is a quotient of π_1(T(4,4)) (one class; checked against the brute-force count),
        // but not of π_1(T(-4,4))
        let spec = OrbifoldSpec::new(4, 4).unwrap();
        assert_eq!(enumerate_epimorphisms(&spec, 2, &EpiOptions::default()).unwrap().len(), 1);
        let other = OrbifoldSpec::new(-4, 4).unwrap();
        assert!(enumerate_epimorphisms(&other, 2, &EpiOptions::default()).unwrap().is_empty());
        assert!(enumerate_epimorphisms(&spec, 3, &EpiOptions { exact: true }).unwrap().is_empty());
        assert!(enumerate_epimorphisms(&spec, 6, &EpiOptions::default()).is_err());
    }

    #[test]
    fn class_invariants_and_determinism() {
        for (n, k, q) in [(4, 4, 23u64), (3, 4, 31), (-4, 3, 27), (-1, 5, 16), (3, 5, 49)] {
            let spec = OrbifoldSpec::new(n, k).unwrap();
            let classes = enumerate_epimorphisms(&spec, q, &EpiOptions::default()).unwrap();
            let again = enumerate_epimorphisms(&spec, q, &EpiOptions::default()).unwrap();
            assert_eq!(classes, again);
            assert!(!classes.is_empty());
            let f = FqCtx::new(classes[0].p, classes[0].m).unwrap();
            for c in &classes {
                assert!(relator_image(&f, n, &c.a0, &c.b0).is_plus_minus_identity(&f));
                let images = right_action_images(&f, &c.a0, &c.b0).unwrap();
                assert_eq!(schreier_sims_order(&images).unwrap(), psl2_order(q));
                let orbit = crate::fpcore::orbit_and_transversal(&images, q as usize).unwrap();
                assert_eq!(orbit.points.len() as u64, q + 1);
                let pres = twist_presentation(&spec);
                let (_, ngens) = abelianized_rewriting_matrix(&pres, &images, q as usize, DEFAULT_PROXY_PRIME).unwrap();
                assert_eq!(ngens as u64, q + 2);
            }
        }
    }

    #[test]
    fn proxy_independent_of_stabilized_point() {
        for (n, k, q) in [(4, 4, 23u64), (-2, 3, 13), (2, 4, 17), (3, 4, 31), (-1, 5, 11)] {
            let spec = OrbifoldSpec::new(n, k).unwrap();
            for c in enumerate_epimorphisms(&spec, q, &EpiOptions::default()).unwrap() {
                let f = class_field(&c).unwrap();
                let at_inf = cover_betti(&c, DEFAULT_PROXY_PRIME).unwrap().betti_proxy;
                let at_zero = cover_betti_at(&c, &f, DEFAULT_PROXY_PRIME, 0).unwrap().betti_proxy;
                assert_eq!(at_inf, at_zero, "T({n},{k}) q={q}");
            }
        }
    }

    #[test]
    fn cover_matches_full_snf_oracle() {
        let spec = OrbifoldSpec::new(4, 4).unwrap();
        for q in [5u64, 7, 9, 13] {
            for c in enumerate_epimorphisms(&spec, q, &EpiOptions::default()).unwrap() {
                let f = class_field(&c).unwrap();
                let images = right_action_images(&f, &c.a0, &c.b0).unwrap();
                let pres = twist_presentation(&spec);
                let (h1, _) = crate::fpcore::rewrite::oracle::subgroup_h1(&pres, &images, q as usize);
                let proxy = cover_betti(&c, DEFAULT_PROXY_PRIME).unwrap().betti_proxy;
                assert_eq!(proxy, h1.betti, "q={q}");
            }
        }
    }

    #[test]
    fn t44_exceptional_primes() {
        let spec = OrbifoldSpec::new(4, 4).unwrap();
        for q in [23u64, 103] {
            let classes = enumerate_epimorphisms(&spec, q, &EpiOptions::default()).unwrap();
            assert!(!classes.is_empty());
            let positive = classes.iter().any(|c| cover_betti(c, DEFAULT_PROXY_PRIME).unwrap().betti_proxy > 0);
            assert!(positive, "q={q}");
        }
    }
}
