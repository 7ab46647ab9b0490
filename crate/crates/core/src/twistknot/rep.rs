//! Candidate representations `ρ(a) = A`, `ρ(b) = B` over `F_{q^2}` and their
//! conjugation into `SL_2(F_q)`.

use super::orbifold::OrbifoldSpec;
use crate::error::{param, Error, Result};
use crate::finfield::{order_k_traces_in, Extension, FqCtx, FqElem, Mat2, OrderTrace, QuadraticSolver};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepCandidate {
    pub x: FqElem,
    pub t: FqElem,
    /// `tr(AB)`, read back from the matrices and projected to `F_q`.
    pub y: FqElem,
    pub semisimple: bool,
    /// Over `F_{q^2}`.
    pub a: Mat2,
    pub b: Mat2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rejection {
    /// `t ∈ {0, 4 - x^2}` or `tr[A,B] = 2`.
    Reducible,
    /// `w^n A w^-n B^-1 ≠ ±I`.
    Relator,
}

/// `W^n A W^-n B^-1` for `W = B A^-1 B^-1 A` (all of determinant 1).
pub fn relator_image(ctx: &FqCtx, n: i32, a: &Mat2, b: &Mat2) -> Mat2 {
    let ai = a.inverse_sl2(ctx);
    let bi = b.inverse_sl2(ctx);
    let w = b.mul(ctx, &ai).mul(ctx, &bi).mul(ctx, a);
    let w = if n < 0 { w.inverse_sl2(ctx) } else { w };
    let mut wn = Mat2::identity(ctx);
    for _ in 0..n.unsigned_abs() {
        wn = wn.mul(ctx, &w);
    }
    wn.mul(ctx, a).mul(ctx, &wn.inverse_sl2(ctx)).mul(ctx, &bi)
}

/// Builds the canonical pair for a known trace entry; no parameter validation.
pub fn build_rep_from(
    spec: &OrbifoldSpec,
    ext: &Extension,
    trace: &OrderTrace,
    t: &FqElem,
) -> Result<std::result::Result<RepCandidate, Rejection>> {
    let (f, big) = (&ext.small, &ext.big);
    let x = trace.x;
    let reducible_t = f.sub(&f.from_int(4), &f.square(&x));
    if t.is_zero() || *t == reducible_t {
        return Ok(Err(Rejection::Reducible));
    }
    let s = trace.root;
    let tb = ext.embed(t);
    let (a, b) = if trace.semisimple {
        let si = big.inv(&s)?;
        (Mat2::new(s, big.one(), big.zero(), si), Mat2::new(s, big.zero(), tb, si))
    } else {
        (Mat2::new(s, big.one(), big.zero(), s), Mat2::new(s, big.zero(), tb, s))
    };
    if a.commutator_trace(big, &b)? == big.from_int(2) {
        return Ok(Err(Rejection::Reducible));
    }
    if !relator_image(big, spec.n, &a, &b).is_plus_minus_identity(big) {
        return Ok(Err(Rejection::Relator));
    }
    let y = ext
        .project(&a.mul(big, &b).trace(big))
        .ok_or_else(|| Error::Invariant("tr(AB) outside F_q".into()))?;
    Ok(Ok(RepCandidate { x, t: *t, y, semisimple: trace.semisimple, a, b }))
}

/// `build_rep(spec, ctx, x, t)`: `x` must be a trace of order dividing `k`.
pub fn build_rep(
    spec: &OrbifoldSpec,
    ext: &Extension,
    x: &FqElem,
    t: &FqElem,
) -> Result<std::result::Result<RepCandidate, Rejection>> {
    ext.small.check(x)?;
    ext.small.check(t)?;
    let traces = order_k_traces_in(ext, spec.k as u64, false)?;
    let Some(trace) = traces.iter().find(|o| o.x == *x) else {
        return param(format!("{x:?} is not the trace of an element of order dividing {}", spec.k));
    };
    build_rep_from(spec, ext, trace, t)
}

/// Conjugates into `SL_2(F_q)`: `A0 = [[x, -1], [1, 0]]` and `B0 = [[α, β], [γ, x - α]]`
/// with `tr(A0 B0) = y`, scanning `α` in index order.
pub fn conjugate_to_base_field(f: &FqCtx, solver: &QuadraticSolver, x: &FqElem, y: &FqElem) -> Result<(Mat2, Mat2)> {
    let a0 = Mat2::new(*x, f.from_int(-1), f.one(), f.zero());
    for i in 0..f.q() {
        let alpha = f.elem(i);
        let d = f.sub(x, &alpha);
        // β - γ = y - xα and βγ = α(x - α) - 1; u = β, v = -γ are roots of Z^2 - S Z + P
        let s = f.sub(y, &f.mul(x, &alpha));
        let p0 = f.sub(&f.one(), &f.mul(&alpha, &d));
        if let Some(u) = solver.root(&s, &p0) {
            let gamma = f.sub(&u, &s);
            let b0 = Mat2::new(alpha, u, gamma, d);
            return Ok((a0, b0));
        }
    }
    Err(Error::Invariant(format!("no F_q conjugate for traces x={x:?}, y={y:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finfield::fq_context;

    fn setup(p: u64, m: usize) -> (Extension, QuadraticSolver) {
        let f = fq_context(p, m).unwrap();
        let solver = QuadraticSolver::new(&f);
        (f.quadratic_extension().unwrap(), solver)
    }

    #[test]
    fn rejects_reducible() {
        let (ext, _) = setup(7, 1);
        let f = &ext.small;
        let spec = OrbifoldSpec::new(2, 3).unwrap();
        for o in order_k_traces_in(&ext, 3, false).unwrap() {
            assert_eq!(build_rep(&spec, &ext, &o.x, &f.zero()).unwrap(), Err(Rejection::Reducible));
            let t = f.sub(&f.from_int(4), &f.square(&o.x));
            assert_eq!(build_rep(&spec, &ext, &o.x, &t).unwrap(), Err(Rejection::Reducible));
        }
        assert!(build_rep(&spec, &ext, &f.from_int(3), &f.one()).is_err());
    }

    #[test]
    fn candidates_and_base_field_conjugates() {
        for (p, m, n, k) in [(5u64, 1usize, 2i32, 3u32), (7, 1, 4, 4), (3, 2, -2, 4), (2, 3, 3, 7), (13, 1, -3, 3), (3, 1, 2, 3)] {
            let (ext, solver) = setup(p, m);
            let f = &ext.small;
            let big = &ext.big;
            let spec = OrbifoldSpec::new(n, k).unwrap();
            for o in order_k_traces_in(&ext, k as u64, false).unwrap() {
                for t in f.elements() {
                    let Ok(c) = build_rep_from(&spec, &ext, &o, &t).unwrap() else { continue };
                    assert_eq!(c.a.trace(big), ext.embed(&c.x));
                    assert_eq!(c.b.trace(big), ext.embed(&c.x));
                    assert_eq!(c.a.det(big), big.one());
                    assert_eq!(c.b.det(big), big.one());
                    let (a0, b0) = conjugate_to_base_field(f, &solver, &c.x, &c.y).unwrap();
                    assert_eq!(a0.trace(f), c.x);
                    assert_eq!(b0.trace(f), c.x);
                    assert_eq!(a0.mul(f, &b0).trace(f), c.y);
                    assert_eq!(b0.det(f), f.one());
                    assert!(relator_image(f, n, &a0, &b0).is_plus_minus_identity(f));
                }
            }
        }
    }
}
