//! Finite fields `F_{p^m}` in the polynomial basis of a deterministic modulus.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{factorize, is_prime, mul_mod, pow_mod};
use crate::error::{domain, param, Error, Result};

/// Largest extension degree representable (the quadratic extension of a degree-8 field).
pub const MAX_DEGREE: usize = 16;
/// Largest degree accepted for a user-facing field.
pub const MAX_USER_DEGREE: usize = 8;
const MAX_ORDER: u64 = 1 << 62;

/// Field element: coefficients in `0..p`, low degree first.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FqElem {
    c: [u32; MAX_DEGREE],
    len: u8,
}

impl FqElem {
    fn zero_of(m: usize) -> Self {
        FqElem { c: [0; MAX_DEGREE], len: m as u8 }
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.c[..self.len as usize]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs().iter().all(|&x| x == 0)
    }

    /// Builds from coefficients; checking against a context is the caller's job.
    pub fn from_coeffs(coeffs: &[u32]) -> Result<Self> {
        if coeffs.is_empty() || coeffs.len() > MAX_DEGREE {
            return param(format!("{} coefficients", coeffs.len()));
        }
        let mut e = FqElem::zero_of(coeffs.len());
        e.c[..coeffs.len()].copy_from_slice(coeffs);
        Ok(e)
    }
}

impl fmt::Debug for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coeffs())
    }
}

impl Serialize for FqElem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeffs().serialize(s)
    }
}

impl<'de> Deserialize<'de> for FqElem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v: Vec<u32> = Vec::deserialize(d)?;
        FqElem::from_coeffs(&v).map_err(serde::de::Error::custom)
    }
}

/// `F_q`, `q = p^m`, as `F_p[z] / (modulus)`.
#[derive(Clone, Debug)]
pub struct FqCtx {
    p: u64,
    m: usize,
    q: u64,
    /// monic, `m + 1` coefficients, low degree first
    modulus: Vec<u64>,
}

/// Polynomials over `F_p` as low-degree-first coefficient vectors without trailing zeros.
mod poly {
    use super::*;

    pub fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn rem(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
        let mut a = trim(a.to_vec());
        let df = f.len() - 1;
        let lead_inv = pow_mod(f[df], p - 2, p);
        while a.len() > df {
            let top = a.len() - 1;
            let c = mul_mod(a[top], lead_inv, p);
            for j in 0..=df {
                let i = top - df + j;
                a[i] = (a[i] + p - mul_mod(c, f[j], p)) % p;
            }
            a = trim(a);
        }
        a
    }

    pub fn mulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + mul_mod(x, y, p)) % p;
            }
        }
        rem(&out, f, p)
    }

    pub fn powmod(a: &[u64], mut e: u64, f: &[u64], p: u64) -> Vec<u64> {
        let mut acc = vec![1u64];
        let mut base = rem(a, f, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(&acc, &base, f, p);
            }
            base = mulmod(&base, &base, f, p);
            e >>= 1;
        }
        acc
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p)
            .collect();
        trim(out)
    }

    /// Rabin's irreducibility test for a monic `f` of degree `d >= 1`.
    pub fn is_irreducible(f: &[u64], p: u64) -> bool {
        let d = f.len() - 1;
        if d == 1 {
            return true;
        }
        let x = vec![0u64, 1];
        // frob[i] = z^{p^i} mod f
        let mut frob = vec![rem(&x, f, p)];
        for i in 1..=d {
            let next = powmod(&frob[i - 1], p, f, p);
            frob.push(next);
        }
        if sub(&frob[d], &x, p) != Vec::<u64>::new() {
            return false;
        }
        factorize(d as u64).iter().all(|&(r, _)| {
            let g = gcd(&sub(&frob[d / r as usize], &x, p), f, p);
            g.len() == 1
        })
    }
}


impl FqCtx {
    /// User-facing constructor: `p` prime, `1 <= m <= 8`.
    pub fn new(p: u64, m: usize) -> Result<Self> {
        if !(1..=MAX_USER_DEGREE).contains(&m) {
            return param(format!("degree {m} outside 1..={MAX_USER_DEGREE}"));
        }
        Self::with_degree(p, m)
    }

    pub(crate) fn with_degree(p: u64, m: usize) -> Result<Self> {
        if !is_prime(p) || p >= 1 << 32 {
            return param(format!("{p} is not a prime below 2^32"));
        }
        if !(1..=MAX_DEGREE).contains(&m) {
            return param(format!("degree {m} outside 1..={MAX_DEGREE}"));
        }
        let q = (0..m).try_fold(1u64, |acc, _| acc.checked_mul(p).filter(|&v| v <= MAX_ORDER));
        let Some(q) = q else {
            return param(format!("{p}^{m} exceeds 2^62"));
        };
        Ok(FqCtx { p, m, q, modulus: Self::least_irreducible(p, m) })
    }

    /// Least monic irreducible of degree `m`, ordering candidates by the integer
    /// `c_0 + c_1 p + ... + c_{m-1} p^{m-1}` of their lower coefficients.
    fn least_irreducible(p: u64, m: usize) -> Vec<u64> {
        if m == 1 {
            return vec![0, 1];
        }
        // c_0 = 0 means z divides the polynomial
        for n in 1.. {
            if n % p == 0 {
                continue;
            }
            let mut f: Vec<u64> = (0..m).scan(n, |r, _| {
                let d = *r % p;
                *r /= p;
                Some(d)
            }).collect();
            f.push(1);
            if poly::is_irreducible(&f, p) {
                return f;
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Modulus coefficients, low degree first, monic.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn zero(&self) -> FqElem {
        FqElem::zero_of(self.m)
    }

    pub fn one(&self) -> FqElem {
        self.from_int(1)
    }

    pub fn from_int(&self, v: i64) -> FqElem {
        let mut e = self.zero();
        e.c[0] = v.rem_euclid(self.p as i64) as u32;
        e
    }

    /// Element `sum c_j z^j` with `c_j` the base-`p` digits of `i`.
    pub fn elem(&self, mut i: u64) -> FqElem {
        debug_assert!(i < self.q);
        let mut e = self.zero();
        for j in 0..self.m {
            e.c[j] = (i % self.p) as u32;
            i /= self.p;
        }
        e
    }

    pub fn index(&self, e: &FqElem) -> u64 {
        e.coeffs().iter().rev().fold(0u64, |acc, &c| acc * self.p + c as u64)
    }

    pub fn elements(&self) -> impl Iterator<Item = FqElem> + '_ {
        (0..self.q).map(|i| self.elem(i))
    }

    /// Validates an element decoded from outside.
    pub fn check(&self, e: &FqElem) -> Result<()> {
        if e.len as usize != self.m || e.coeffs().iter().any(|&c| c as u64 >= self.p) {
            return param(format!("{e:?} is not an element of F_{}", self.q));
        }
        Ok(())
    }

    /// The generator `z` of the polynomial basis (equal to 0 when `m = 1`).
    pub fn z(&self) -> FqElem {
        if self.m == 1 {
            return self.zero();
        }
        let mut e = self.zero();
        e.c[1] = 1;
        e
    }

    pub fn add(&self, a: &FqElem, b: &FqElem) -> FqElem {
        let mut e = self.zero();
        let p = self.p as u32;
        for j in 0..self.m {
            let s = a.c[j] + b.c[j];
            e.c[j] = if s >= p { s - p } else { s };
        }
        e
    }

    pub fn sub(&self, a: &FqElem, b: &FqElem) -> FqElem {
        let mut e = self.zero();
        let p = self.p as u32;
        for j in 0..self.m {
            e.c[j] = if a.c[j] >= b.c[j] { a.c[j] - b.c[j] } else { a.c[j] + p - b.c[j] };
        }
        e
    }

    pub fn neg(&self, a: &FqElem) -> FqElem {
        self.sub(&self.zero(), a)
    }

    pub fn mul(&self, a: &FqElem, b: &FqElem) -> FqElem {
        let p = self.p;
        let m = self.m;
        if m == 1 {
            let mut e = self.zero();
            e.c[0] = mul_mod(a.c[0] as u64, b.c[0] as u64, p) as u32;
            return e;
        }
        let mut prod = [0u64; 2 * MAX_DEGREE];
        for i in 0..m {
            if a.c[i] == 0 {
                continue;
            }
            for j in 0..m {
                prod[i + j] = (prod[i + j] + a.c[i] as u64 * b.c[j] as u64) % p;
            }
        }
        for top in (m..2 * m - 1).rev() {
            let c = prod[top];
            if c != 0 {
                for j in 0..m {
                    let i = top - m + j;
                    prod[i] = (prod[i] + c * (p - self.modulus[j])) % p;
                }
            }
        }
        let mut e = self.zero();
        for j in 0..m {
            e.c[j] = prod[j] as u32;
        }
        e
    }

    pub fn square(&self, a: &FqElem) -> FqElem {
        self.mul(a, a)
    }

    pub fn pow(&self, a: &FqElem, mut e: u64) -> FqElem {
        let mut acc = self.one();
        let mut base = *a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; zero is a domain error.
    pub fn inv(&self, a: &FqElem) -> Result<FqElem> {
        if a.is_zero() {
            return domain("inverse of zero");
        }
        Ok(self.pow(a, self.q - 2))
    }

    pub fn div(&self, a: &FqElem, b: &FqElem) -> Result<FqElem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn frobenius(&self, a: &FqElem) -> FqElem {
        self.pow(a, self.p)
    }

    /// Multiplicative order via the factorization of `q - 1`.
    pub fn element_order(&self, e: &FqElem) -> Result<u64> {
        if e.is_zero() {
            return domain("zero has no multiplicative order");
        }
        let mut order = self.q - 1;
        for (r, k) in factorize(self.q - 1) {
            for _ in 0..k {
                if self.pow(e, order / r) == self.one() {
                    order /= r;
                } else {
                    break;
                }
            }
        }
        Ok(order)
    }

    /// Least-index generator of the multiplicative group.
    pub fn primitive_element(&self) -> FqElem {
        let factors = factorize(self.q - 1);
        (1..self.q)
            .map(|i| self.elem(i))
            .find(|e| factors.iter().all(|&(r, _)| self.pow(e, (self.q - 1) / r) != self.one()))
            .expect("a finite field has a primitive element")
    }

    /// Evaluates an `F_p`-polynomial at `e`.
    fn eval_prime_poly(&self, f: &[u64], e: &FqElem) -> FqElem {
        f.iter().rev().fold(self.zero(), |acc, &c| self.add(&self.mul(&acc, e), &self.from_int(c as i64)))
    }

    /// Quadratic extension `F_{q^2}` with a fixed embedding of this field.
    pub fn quadratic_extension(&self) -> Result<Extension> {
        if self.q > 1 << 31 {
            return param(format!("q = {} too large for the quadratic extension", self.q));
        }
        let big = FqCtx::with_degree(self.p, 2 * self.m)?;
        let gen = big.primitive_element();
        let root = if self.m == 1 {
            big.zero()
        } else {
            // F_q inside F_{q^2} is {0} together with the powers of gen^{q+1}
            let h = big.pow(&gen, self.q + 1);
            let mut cur = big.one();
            let mut best: Option<(u64, FqElem)> = None;
            for _ in 0..self.q - 1 {
                if big.eval_prime_poly(&self.modulus, &cur).is_zero() {
                    let idx = big.index(&cur);
                    if best.map_or(true, |(b, _)| idx < b) {
                        best = Some((idx, cur));
                    }
                }
                cur = big.mul(&cur, &h);
            }
            best.ok_or_else(|| Error::Invariant("modulus has no root in the extension".into()))?.1
        };
        let mut ext = Extension { small: self.clone(), big, gen, root, back: HashMap::new() };
        let back = self.elements().map(|e| (ext.big.index(&ext.embed(&e)), e)).collect();
        ext.back = back;
        Ok(ext)
    }
}

/// `F_q ⊂ F_{q^2}` with a primitive element of the larger field.
#[derive(Clone, Debug)]
pub struct Extension {
    pub small: FqCtx,
    pub big: FqCtx,
    /// least-index generator of `F_{q^2}^*`
    pub gen: FqElem,
    /// image of the small field's basis generator `z`
    pub root: FqElem,
    back: HashMap<u64, FqElem>,
}

impl Extension {
    pub fn embed(&self, e: &FqElem) -> FqElem {
        let big = &self.big;
        if self.small.m == 1 {
            return big.from_int(e.c[0] as i64);
        }
        e.coeffs()
            .iter()
            .rev()
            .fold(big.zero(), |acc, &c| big.add(&big.mul(&acc, &self.root), &big.from_int(c as i64)))
    }

    /// Preimage of a subfield element, `None` outside `F_q`.
    pub fn project(&self, e: &FqElem) -> Option<FqElem> {
        self.back.get(&self.big.index(e)).copied()
    }
}

/// `fq_context(p, m)`: the field with `p^m` elements.
pub fn fq_context(p: u64, m: usize) -> Result<FqCtx> {
    FqCtx::new(p, m)
}

/// Multiplicative order of a nonzero element.
pub fn element_order(ctx: &FqCtx, e: &FqElem) -> Result<u64> {
    ctx.element_order(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn moduli() {
        assert_eq!(fq_context(3, 1).unwrap().modulus(), &[0, 1]);
        assert_eq!(fq_context(3, 2).unwrap().modulus(), &[1, 0, 1]);
        assert_eq!(fq_context(2, 3).unwrap().modulus(), &[1, 1, 0, 1]);
        assert!(fq_context(4, 1).is_err());
        assert!(fq_context(3, 9).is_err());
        assert!(fq_context(3, 0).is_err());
    }

    #[test]
    fn least_modulus_by_exhaustion() {
        // brute-force oracle: a polynomial of degree <= 3 is irreducible iff it has no root
        for (p, m) in [(2u64, 2usize), (2, 3), (3, 2), (3, 3), (5, 2), (5, 3), (7, 2)] {
            let ctx = fq_context(p, m).unwrap();
            let found = (0..p.pow(m as u32)).find_map(|n| {
                let mut f: Vec<u64> = (0..m as u32).map(|j| n / p.pow(j) % p).collect();
                f.push(1);
                let rootless = (0..p).all(|x| f.iter().rev().fold(0, |acc, &c| (acc * x + c) % p) != 0);
                rootless.then_some(f)
            });
            assert_eq!(ctx.modulus(), found.unwrap().as_slice(), "p={p} m={m}");
        }
    }

    #[test]
    fn orders() {
        let f5 = fq_context(5, 1).unwrap();
        assert_eq!(element_order(&f5, &f5.one()).unwrap(), 1);
        assert_eq!(element_order(&f5, &f5.from_int(2)).unwrap(), 4);
        assert!(element_order(&f5, &f5.zero()).is_err());
        let f9 = fq_context(3, 2).unwrap();
        let max = f9.elements().skip(1).map(|e| element_order(&f9, &e).unwrap()).max().unwrap();
        assert_eq!(max, 8);
        assert_eq!(element_order(&f9, &f9.primitive_element()).unwrap(), 8);
    }

    #[test]
    fn embedding_is_a_homomorphism() {
        for (p, m) in [(2u64, 1usize), (3, 2), (2, 3), (7, 1), (5, 2)] {
            let ctx = fq_context(p, m).unwrap();
            let ext = ctx.quadratic_extension().unwrap();
            assert_eq!(ext.big.q(), ctx.q() * ctx.q());
            for a in ctx.elements() {
                assert_eq!(ext.project(&ext.embed(&a)), Some(a));
                for b in ctx.elements().step_by(3) {
                    assert_eq!(ext.embed(&ctx.mul(&a, &b)), ext.big.mul(&ext.embed(&a), &ext.embed(&b)));
                    assert_eq!(ext.embed(&ctx.add(&a, &b)), ext.big.add(&ext.embed(&a), &ext.embed(&b)));
                }
            }
            let outside = ext.big.elements().filter(|e| ext.project(e).is_none()).count() as u64;
            assert_eq!(outside, ext.big.q() - ctx.q());
        }
    }

    #[test]
    fn serde_round_trip() {
        let ctx = fq_context(3, 2).unwrap();
        let e = ctx.elem(7);
        let s = serde_json::to_string(&e).unwrap();
        assert_eq!(s, "[1,2]");
        let back: FqElem = serde_json::from_str(&s).unwrap();
        assert_eq!(back, e);
        ctx.check(&back).unwrap();
        assert!(ctx.check(&FqElem::from_coeffs(&[3, 0]).unwrap()).is_err());
    }

    fn field() -> impl Strategy<Value = FqCtx> {
        prop::sample::select(vec![(2u64, 1usize), (2, 4), (3, 3), (5, 2), (7, 1), (13, 2), (31991, 1), (2, 8)])
            .prop_map(|(p, m)| fq_context(p, m).unwrap())
    }

    proptest! {
        #[test]
        fn field_axioms(ctx in field(), a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
            let (a, b, c) = (ctx.elem(a % ctx.q()), ctx.elem(b % ctx.q()), ctx.elem(c % ctx.q()));
            prop_assert_eq!(ctx.mul(&a, &ctx.add(&b, &c)), ctx.add(&ctx.mul(&a, &b), &ctx.mul(&a, &c)));
            prop_assert_eq!(ctx.mul(&ctx.mul(&a, &b), &c), ctx.mul(&a, &ctx.mul(&b, &c)));
            prop_assert_eq!(ctx.index(&a), ctx.index(&ctx.elem(ctx.index(&a))));
            if !a.is_zero() {
                prop_assert_eq!(ctx.mul(&a, &ctx.inv(&a).unwrap()), ctx.one());
                prop_assert_eq!((ctx.q() - 1) % ctx.element_order(&a).unwrap(), 0);
            }
            // Frobenius is additive
            prop_assert_eq!(ctx.frobenius(&ctx.add(&a, &b)), ctx.add(&ctx.frobenius(&a), &ctx.frobenius(&b)));
        }
    }
}
