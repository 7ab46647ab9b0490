//! Traces of elements of prescribed projective order, and table-driven
//! quadratic solving over `F_q`.

use super::field::{Extension, FqCtx, FqElem};
use crate::arith::gcd;
use crate::error::{param, Result};

/// A trace `x = ζ + ζ^-1` of an element of `PSL_2(F_q)` with its eigenvalue.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrderTrace {
    pub x: FqElem,
    pub semisimple: bool,
    /// Least-index root of `z^2 - x z + 1` in `F_{q^2}`.
    pub root: FqElem,
    /// Projective order of the corresponding matrices.
    pub order: u64,
}

fn divisors(k: u64) -> Vec<u64> {
    (1..=k).filter(|d| k % d == 0).collect()
}

/// Traces of `SL_2(F_q)` elements whose image in `PSL_2(F_q)` has order exactly `k`,
/// or any order `k' | k` with `k' >= 2` when `exact` is false. Sorted by index of `x`.
pub fn order_k_traces_in(ext: &Extension, k: u64, exact: bool) -> Result<Vec<OrderTrace>> {
    if k < 2 {
        return param(format!("order {k} must be at least 2"));
    }
    let small = &ext.small;
    let big = &ext.big;
    let q = small.q();
    let p = small.p();
    let big_order = q * q - 1;
    let orders: Vec<u64> = if exact { vec![k] } else { divisors(k).into_iter().filter(|&d| d >= 2).collect() };
    let mut out: Vec<OrderTrace> = Vec::new();
    for &kk in &orders {
        // ord(ζ^2) = kk  ⇔  ord ζ = 2kk, or ord ζ = kk with kk odd
        let zeta_orders: Vec<u64> = if kk % 2 == 1 { vec![kk, 2 * kk] } else { vec![2 * kk] };
        for d in zeta_orders {
            if (q - 1) % d != 0 && (q + 1) % d != 0 {
                continue;
            }
            let step = big_order / d;
            let base = big.pow(&ext.gen, step);
            let mut zeta = big.one();
            for j in 1..d {
                zeta = big.mul(&zeta, &base);
                if gcd(j, d) != 1 {
                    continue;
                }
                let zinv = big.inv(&zeta)?;
                let xbig = big.add(&zeta, &zinv);
                let x = ext.project(&xbig).expect("ζ + ζ^-1 lies in F_q");
                let root = if big.index(&zeta) <= big.index(&zinv) { zeta } else { zinv };
                match out.iter_mut().find(|o| o.x == x) {
                    Some(o) => {
                        if big.index(&root) < big.index(&o.root) {
                            o.root = root;
                        }
                    }
                    None => out.push(OrderTrace { x, semisimple: true, root, order: kk }),
                }
            }
        }
        let unipotent_order = if p == 2 { 2 } else { p };
        if kk == unipotent_order {
            for sign in [1i64, -1] {
                let x = small.from_int(2 * sign);
                if !out.iter().any(|o| o.x == x) {
                    out.push(OrderTrace { x, semisimple: false, root: big.from_int(sign), order: kk });
                }
            }
        }
    }
    out.sort_by_key(|o| small.index(&o.x));
    Ok(out)
}

/// `order_k_traces(ctx, k, exact)` as `(x, semisimple)` pairs.
pub fn order_k_traces(ctx: &FqCtx, k: u64, exact: bool) -> Result<Vec<(FqElem, bool)>> {
    if k < 2 {
        return param(format!("order {k} must be at least 2"));
    }
    let ext = ctx.quadratic_extension()?;
    Ok(order_k_traces_in(&ext, k, exact)?.into_iter().map(|o| (o.x, o.semisimple)).collect())
}

/// Root tables for solving monic quadratics over `F_q` in `O(1)` per query.
pub struct QuadraticSolver {
    ctx: FqCtx,
    /// least-index square root by index, `u32::MAX` for non-squares
    sqrt: Vec<u32>,
    /// characteristic 2 only: least-index `W` with `W^2 + W = c`
    artin_schreier: Vec<u32>,
}

impl QuadraticSolver {
    pub fn new(ctx: &FqCtx) -> Self {
        let q = ctx.q() as usize;
        let mut sqrt = vec![u32::MAX; q];
        let mut artin_schreier = Vec::new();
        if ctx.p() == 2 {
            artin_schreier = vec![u32::MAX; q];
        }
        for i in 0..q as u64 {
            let w = ctx.elem(i);
            let sq = ctx.square(&w);
            let si = ctx.index(&sq) as usize;
            if sqrt[si] == u32::MAX {
                sqrt[si] = i as u32;
            }
            if ctx.p() == 2 {
                let c = ctx.index(&ctx.add(&sq, &w)) as usize;
                if artin_schreier[c] == u32::MAX {
                    artin_schreier[c] = i as u32;
                }
            }
        }
        QuadraticSolver { ctx: ctx.clone(), sqrt, artin_schreier }
    }

    pub fn sqrt(&self, a: &FqElem) -> Option<FqElem> {
        let r = self.sqrt[self.ctx.index(a) as usize];
        (r != u32::MAX).then(|| self.ctx.elem(r as u64))
    }

    /// A root of `Z^2 - s Z + p0` in `F_q`, if any.
    pub fn root(&self, s: &FqElem, p0: &FqElem) -> Option<FqElem> {
        let ctx = &self.ctx;
        if ctx.p() == 2 {
            if s.is_zero() {
                return self.sqrt(p0);
            }
            // Z = s W with W^2 + W = p0 / s^2
            let c = ctx.div(p0, &ctx.square(s)).ok()?;
            let w = self.artin_schreier[ctx.index(&c) as usize];
            return (w != u32::MAX).then(|| ctx.mul(s, &ctx.elem(w as u64)));
        }
        let disc = ctx.sub(&ctx.square(s), &ctx.mul(&ctx.from_int(4), p0));
        let r = self.sqrt(&disc)?;
        let half = ctx.inv(&ctx.from_int(2)).ok()?;
        Some(ctx.mul(&ctx.add(s, &r), &half))
    }
}
