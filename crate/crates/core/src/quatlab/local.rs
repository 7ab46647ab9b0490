//! The local division algebra `(-1, 3 / Q_3)` truncated mod `3^m`, and the
//! unit filtration `1 + Q^n` with `Q = B j`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{param, Result};

/// `x + y ω` in `R_m = (Z/3^m)[ω]`, `ω^2 = -1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Rm {
    pub x: u64,
    pub y: u64,
}

/// `a + b j` with `j^2 = 3` and `j a = ā j`, all mod `3^m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LocalQuat {
    pub m: u32,
    pub a: Rm,
    pub b: Rm,
}

fn v3(mut n: u64, cap: u32) -> u32 {
    if n == 0 {
        return cap;
    }
    let mut v = 0;
    while n % 3 == 0 {
        n /= 3;
        v += 1;
    }
    v.min(cap)
}

impl Rm {
    fn modulus(m: u32) -> u64 {
        3u64.pow(m)
    }

    pub fn add(self, o: Rm, m: u32) -> Rm {
        let md = Self::modulus(m);
        Rm { x: (self.x + o.x) % md, y: (self.y + o.y) % md }
    }

    pub fn mul(self, o: Rm, m: u32) -> Rm {
        let md = Self::modulus(m);
        Rm { x: (self.x * o.x + (md - self.y) * o.y) % md, y: (self.x * o.y + self.y * o.x) % md }
    }

    pub fn conj(self, m: u32) -> Rm {
        Rm { x: self.x, y: (Self::modulus(m) - self.y) % Self::modulus(m) }
    }

    pub fn scale(self, k: u64, m: u32) -> Rm {
        let md = Self::modulus(m);
        Rm { x: self.x * k % md, y: self.y * k % md }
    }

    /// `x^2 + y^2 = a ā`.
    pub fn norm(self, m: u32) -> u64 {
        (self.x * self.x + self.y * self.y) % Self::modulus(m)
    }

    /// `v_3` of the pair; `m` for zero (truncation resolution).
    pub fn valuation(self, m: u32) -> u32 {
        v3(self.x, m).min(v3(self.y, m))
    }
}

impl LocalQuat {
    pub fn new(m: u32, a: Rm, b: Rm) -> Self {
        let md = Rm::modulus(m);
        let r = |z: Rm| Rm { x: z.x % md, y: z.y % md };
        LocalQuat { m, a: r(a), b: r(b) }
    }

    pub fn one(m: u32) -> Self {
        LocalQuat::new(m, Rm { x: 1, y: 0 }, Rm { x: 0, y: 0 })
    }

    /// `(a + bj)(c + dj) = (ac + 3 b d̄) + (ad + b c̄) j`.
    pub fn mul(&self, o: &LocalQuat) -> LocalQuat {
        let m = self.m;
        let a = self.a.mul(o.a, m).add(self.b.mul(o.b.conj(m), m).scale(3, m), m);
        let b = self.a.mul(o.b, m).add(self.b.mul(o.a.conj(m), m), m);
        LocalQuat { m, a, b }
    }

    /// `a ā - 3 b b̄`.
    pub fn reduced_norm(&self) -> u64 {
        let md = Rm::modulus(self.m);
        (self.a.norm(self.m) + md * 3 - 3 * self.b.norm(self.m)) % md
    }

    /// `w(a + bj) = min(2 v(a), 2 v(b) + 1)`, capped at `2m`.
    pub fn valuation(&self) -> u32 {
        (2 * self.a.valuation(self.m)).min(2 * self.b.valuation(self.m) + 1).min(2 * self.m)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LayerReport {
    /// Truncation exponent: elements are taken mod `3^m`.
    pub level: u32,
    /// Order of the image of norm `±1` units in `(B/Q)^×`.
    pub unit_image_order: u64,
    /// `layers[n-1]` = order of the image of norm-1 units in `(1+Q^n)/(1+Q^{n+1})`.
    pub layers: Vec<u64>,
}

pub const MAX_LAYER: usize = 5;

/// Enumerates `R_m × R_m` at `m = ⌈(n_max + 2)/2⌉`.
pub fn local_layer_orders(n_max: usize) -> Result<LayerReport> {
    if !(1..=MAX_LAYER).contains(&n_max) {
        return param(format!("n_max must lie in 1..={MAX_LAYER}"));
    }
    let m = (n_max as u32 + 3) / 2;
    let md = Rm::modulus(m);
    let minus_one = md - 1;
    // counts[n] = #{norm-1 g : w(g - 1) >= n}; residues = classes of a mod 3 among norm ±1 units
    let (counts, residues) = (0..md)
        .into_par_iter()
        .map(|ax| {
            let mut counts = vec![0u64; n_max + 2];
            let mut residues = [false; 9];
            for ay in 0..md {
                let a = Rm { x: ax, y: ay };
                let unit = a.valuation(m) == 0;
                let an = a.norm(m);
                let va1 = Rm { x: (ax + md - 1) % md, y: ay }.valuation(m);
                for bx in 0..md {
                    for by in 0..md {
                        let b = Rm { x: bx, y: by };
                        let n = (an + 3 * md - 3 * b.norm(m)) % md;
                        if unit && (n == 1 || n == minus_one) {
                            residues[((ax % 3) * 3 + ay % 3) as usize] = true;
                        }
                        if n != 1 {
                            continue;
                        }
                        let w = (2 * va1).min(2 * b.valuation(m) + 1).min(2 * m) as usize;
                        for c in counts.iter_mut().take(w.min(n_max + 1) + 1) {
                            *c += 1;
                        }
                    }
                }
            }
            (counts, residues)
        })
        .reduce(
            || (vec![0u64; n_max + 2], [false; 9]),
            |(mut c1, mut r1), (c2, r2)| {
                c1.iter_mut().zip(&c2).for_each(|(x, y)| *x += y);
                r1.iter_mut().zip(r2).for_each(|(x, y)| *x |= y);
                (c1, r1)
            },
        );
    let layers = (1..=n_max).map(|n| counts[n] / counts[n + 1]).collect();
    Ok(LayerReport { level: m, unit_image_order: residues.iter().filter(|&&r| r).count() as u64, layers })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn product_rule() {
        let m = 3;
        let j = LocalQuat::new(m, Rm { x: 0, y: 0 }, Rm { x: 1, y: 0 });
        let w = LocalQuat::new(m, Rm { x: 0, y: 1 }, Rm { x: 0, y: 0 });
        // j^2 = 3, j ω = -ω j
        assert_eq!(j.mul(&j), LocalQuat::new(m, Rm { x: 3, y: 0 }, Rm { x: 0, y: 0 }));
        assert_eq!(j.mul(&w), LocalQuat::new(m, Rm { x: 0, y: 0 }, Rm { x: 0, y: 26 }));
        assert_eq!(w.mul(&j), LocalQuat::new(m, Rm { x: 0, y: 0 }, Rm { x: 0, y: 1 }));
        assert_eq!(j.valuation(), 1);
        assert_eq!(j.mul(&j).valuation(), 2);
        assert_eq!(LocalQuat::one(m).valuation(), 0);
    }

    #[test]
    fn layer_orders() {
        let r = local_layer_orders(4).unwrap();
        assert_eq!(r.level, 3);
        assert_eq!(r.unit_image_order, 8);
        assert_eq!(r.layers, vec![9, 3, 9, 3]);
        assert!(local_layer_orders(0).is_err());
        assert!(local_layer_orders(6).is_err());
    }

    fn elem(m: u32) -> impl Strategy<Value = LocalQuat> {
        let md = 3u64.pow(m);
        (0..md, 0..md, 0..md, 0..md).prop_map(move |(a, b, c, d)| LocalQuat::new(m, Rm { x: a, y: b }, Rm { x: c, y: d }))
    }

    proptest! {
        #[test]
        fn valuation_additive(x in elem(4), y in elem(4)) {
            let (wx, wy) = (x.valuation(), y.valuation());
            if wx + wy < 8 {
                prop_assert_eq!(x.mul(&y).valuation(), wx + wy);
            }
        }

        #[test]
        fn norm_multiplicative(x in elem(3), y in elem(3)) {
            prop_assert_eq!(x.mul(&y).reduced_norm(), x.reduced_norm() * y.reduced_norm() % 27);
        }

        #[test]
        fn associative(x in elem(2), y in elem(2), z in elem(2)) {
            prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
        }
    }
}
