//! 2×2 matrices over `F_q` and the Möbius action on `P^1(F_q)`.

use serde::{Deserialize, Serialize};

use super::field::{FqCtx, FqElem};
use crate::error::{domain, Result};
use crate::fpcore::Permutation;

/// Row-major `[[a11, a12], [a21, a22]]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Mat2 {
    pub a11: FqElem,
    pub a12: FqElem,
    pub a21: FqElem,
    pub a22: FqElem,
}

impl Mat2 {
    pub fn new(a11: FqElem, a12: FqElem, a21: FqElem, a22: FqElem) -> Self {
        Mat2 { a11, a12, a21, a22 }
    }

    pub fn from_ints(ctx: &FqCtx, v: [[i64; 2]; 2]) -> Self {
        Mat2::new(ctx.from_int(v[0][0]), ctx.from_int(v[0][1]), ctx.from_int(v[1][0]), ctx.from_int(v[1][1]))
    }

    pub fn identity(ctx: &FqCtx) -> Self {
        Mat2::from_ints(ctx, [[1, 0], [0, 1]])
    }

    pub fn scalar(ctx: &FqCtx, s: &FqElem) -> Self {
        Mat2::new(*s, ctx.zero(), ctx.zero(), *s)
    }

    pub fn mul(&self, ctx: &FqCtx, o: &Mat2) -> Mat2 {
        let f = |a: &FqElem, b: &FqElem, c: &FqElem, d: &FqElem| ctx.add(&ctx.mul(a, b), &ctx.mul(c, d));
        Mat2 {
            a11: f(&self.a11, &o.a11, &self.a12, &o.a21),
            a12: f(&self.a11, &o.a12, &self.a12, &o.a22),
            a21: f(&self.a21, &o.a11, &self.a22, &o.a21),
            a22: f(&self.a21, &o.a12, &self.a22, &o.a22),
        }
    }

    pub fn det(&self, ctx: &FqCtx) -> FqElem {
        ctx.sub(&ctx.mul(&self.a11, &self.a22), &ctx.mul(&self.a12, &self.a21))
    }

    pub fn trace(&self, ctx: &FqCtx) -> FqElem {
        ctx.add(&self.a11, &self.a22)
    }

    fn adjugate(&self, ctx: &FqCtx) -> Mat2 {
        Mat2 { a11: self.a22, a12: ctx.neg(&self.a12), a21: ctx.neg(&self.a21), a22: self.a11 }
    }

    /// Inverse; the adjugate when `det = 1`.
    pub fn inverse(&self, ctx: &FqCtx) -> Result<Mat2> {
        let d = self.det(ctx);
        let adj = self.adjugate(ctx);
        if d == ctx.one() {
            return Ok(adj);
        }
        if d.is_zero() {
            return domain("singular matrix has no inverse");
        }
        let di = ctx.inv(&d)?;
        Ok(Mat2 {
            a11: ctx.mul(&adj.a11, &di),
            a12: ctx.mul(&adj.a12, &di),
            a21: ctx.mul(&adj.a21, &di),
            a22: ctx.mul(&adj.a22, &di),
        })
    }

    /// Inverse of a matrix assumed to have determinant 1.
    pub fn inverse_sl2(&self, ctx: &FqCtx) -> Mat2 {
        debug_assert_eq!(self.det(ctx), ctx.one());
        self.adjugate(ctx)
    }

    pub fn pow(&self, ctx: &FqCtx, e: i64) -> Result<Mat2> {
        let base = if e < 0 { self.inverse(ctx)? } else { *self };
        let mut acc = Mat2::identity(ctx);
        let mut sq = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(ctx, &sq);
            }
            sq = sq.mul(ctx, &sq);
            k >>= 1;
        }
        Ok(acc)
    }

    /// `tr(A B A^-1 B^-1)`.
    pub fn commutator_trace(&self, ctx: &FqCtx, b: &Mat2) -> Result<FqElem> {
        let c = self.mul(ctx, b).mul(ctx, &self.inverse(ctx)?).mul(ctx, &b.inverse(ctx)?);
        Ok(c.trace(ctx))
    }

    pub fn is_identity(&self, ctx: &FqCtx) -> bool {
        *self == Mat2::identity(ctx)
    }

    /// `±I`, i.e. trivial in `PSL_2`.
    pub fn is_plus_minus_identity(&self, ctx: &FqCtx) -> bool {
        let one = ctx.one();
        let minus = ctx.neg(&one);
        self.a12.is_zero() && self.a21.is_zero() && self.a11 == self.a22 && (self.a11 == one || self.a11 == minus)
    }

    /// Scales every entry.
    pub fn scale(&self, ctx: &FqCtx, s: &FqElem) -> Mat2 {
        Mat2 {
            a11: ctx.mul(&self.a11, s),
            a12: ctx.mul(&self.a12, s),
            a21: ctx.mul(&self.a21, s),
            a22: ctx.mul(&self.a22, s),
        }
    }
}

/// Action of `M` on `P^1(F_q)`: point `i < q` is `(elem(i) : 1)`, point `q` is `(1 : 0)`,
/// and `M` sends `z` to `(a z + b) / (c z + d)`.
pub fn p1_action(ctx: &FqCtx, mat: &Mat2) -> Result<Permutation> {
    if mat.det(ctx).is_zero() {
        return domain("singular matrix does not act on the projective line");
    }
    let q = ctx.q();
    let infinity = q as u32;
    let mut images = Vec::with_capacity(q as usize + 1);
    for i in 0..q {
        let z = ctx.elem(i);
        let num = ctx.add(&ctx.mul(&mat.a11, &z), &mat.a12);
        let den = ctx.add(&ctx.mul(&mat.a21, &z), &mat.a22);
        images.push(if den.is_zero() { infinity } else { ctx.index(&ctx.div(&num, &den)?) as u32 });
    }
    images.push(if mat.a21.is_zero() { infinity } else { ctx.index(&ctx.div(&mat.a11, &mat.a21)?) as u32 });
    Ok(Permutation::from_images_unchecked(images))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finfield::field::fq_context;
    use proptest::prelude::*;

    #[test]
    fn basic_suite() {
        let f = fq_context(7, 1).unwrap();
        let u = Mat2::from_ints(&f, [[1, 1], [0, 1]]);
        assert_eq!(u.det(&f), f.one());
        assert_eq!(u.inverse(&f).unwrap(), Mat2::from_ints(&f, [[1, -1], [0, 1]]));
        assert!(Mat2::from_ints(&f, [[1, 2], [2, 4]]).inverse(&f).is_err());
        let m = Mat2::from_ints(&f, [[2, 0], [0, 1]]);
        assert!(m.mul(&f, &m.inverse(&f).unwrap()).is_identity(&f));
        assert_eq!(u.pow(&f, 7).unwrap(), Mat2::identity(&f));
        assert_eq!(u.pow(&f, -3).unwrap(), Mat2::from_ints(&f, [[1, -3], [0, 1]]));
        assert!(Mat2::from_ints(&f, [[-1, 0], [0, -1]]).is_plus_minus_identity(&f));
    }

    #[test]
    fn commutator_trace_of_canonical_pair() {
        // oracle: expand tr[A,B] directly for every s, t in F_7 with s != 0
        let f = fq_context(7, 1).unwrap();
        for si in 1..7 {
            for ti in 0..7 {
                let s = f.elem(si);
                let t = f.elem(ti);
                let sinv = f.inv(&s).unwrap();
                let a = Mat2::new(s, f.one(), f.zero(), sinv);
                let b = Mat2::new(s, f.zero(), t, sinv);
                let x = f.add(&s, &sinv);
                // 2 + t (t + x^2 - 4)
                let expect = f.add(
                    &f.from_int(2),
                    &f.mul(&t, &f.add(&t, &f.sub(&f.square(&x), &f.from_int(4)))),
                );
                assert_eq!(a.commutator_trace(&f, &b).unwrap(), expect);
                // hand expansion of the product entries
                let ai = a.inverse(&f).unwrap();
                let bi = b.inverse(&f).unwrap();
                let c = a.mul(&f, &b).mul(&f, &ai).mul(&f, &bi);
                assert_eq!(c.trace(&f), expect);
            }
        }
    }

    #[test]
    fn p1_examples() {
        let f2 = fq_context(2, 1).unwrap();
        let p = p1_action(&f2, &Mat2::from_ints(&f2, [[1, 1], [0, 1]])).unwrap();
        assert_eq!(p.images(), &[1, 0, 2]);
        let f3 = fq_context(3, 1).unwrap();
        let p = p1_action(&f3, &Mat2::from_ints(&f3, [[0, -1], [1, 0]])).unwrap();
        assert_eq!(p.images(), &[3, 2, 1, 0]);
        assert!(p1_action(&f3, &Mat2::identity(&f3)).unwrap().is_identity());
        assert!(p1_action(&f3, &Mat2::from_ints(&f3, [[1, 1], [1, 1]])).is_err());
    }

    fn ctx_and_mats() -> impl Strategy<Value = (FqCtx, [Mat2; 2])> {
        prop::sample::select(vec![(2u64, 1usize), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2), (11, 1), (13, 1), (5, 2)])
            .prop_flat_map(|(p, m)| {
                let ctx = fq_context(p, m).unwrap();
                let q = ctx.q();
                (Just(ctx), prop::collection::vec(0..q, 8))
            })
            .prop_filter_map("singular", |(ctx, v)| {
                let mk = |o: usize| Mat2::new(ctx.elem(v[o]), ctx.elem(v[o + 1]), ctx.elem(v[o + 2]), ctx.elem(v[o + 3]));
                let (a, b) = (mk(0), mk(4));
                if a.det(&ctx).is_zero() || b.det(&ctx).is_zero() {
                    None
                } else {
                    Some((ctx, [a, b]))
                }
            })
    }

    proptest! {
        #[test]
        fn p1_action_is_a_homomorphism((ctx, [m, n]) in ctx_and_mats()) {
            let pm = p1_action(&ctx, &m).unwrap();
            let pn = p1_action(&ctx, &n).unwrap();
            let pmn = p1_action(&ctx, &m.mul(&ctx, &n)).unwrap();
            // action(MN) = action(M) ∘ action(N)
            prop_assert_eq!(pmn, pn.then(&pm));
            prop_assert!(Permutation::new(pm.images().to_vec()).is_ok());
        }
    }
}
