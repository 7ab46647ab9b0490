//! The quaternion algebra `(-1, -3 / K)`, its maximal order and the unit group
//! of the base orbifold.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use serde::Serialize;

use super::kfield::KElem;
use crate::error::{domain, Result};
use crate::fpcore::{Presentation, Word};

/// Coordinates in the basis `{1, i, j, ij}` with `i^2 = -1`, `j^2 = -3`, `ij = -ji`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuatElem {
    pub c: [KElem; 4],
}

const A: i64 = -1;
const B: i64 = -3;

/// `e_p e_q = coef · e_r` for basis indices.
fn basis_product(p: usize, q: usize) -> (i64, usize) {
    match (p, q) {
        (0, r) | (r, 0) => (1, r),
        (1, 1) => (A, 0),
        (2, 2) => (B, 0),
        (3, 3) => (-A * B, 0),
        (1, 2) => (1, 3),
        (2, 1) => (-1, 3),
        (1, 3) => (A, 2),
        (3, 1) => (-A, 2),
        (2, 3) => (-B, 1),
        (3, 2) => (B, 1),
        _ => unreachable!("basis index out of range"),
    }
}

impl QuatElem {
    pub fn new(c1: KElem, ci: KElem, cj: KElem, cij: KElem) -> Self {
        QuatElem { c: [c1, ci, cj, cij] }
    }

    pub fn scalar(k: KElem) -> Self {
        QuatElem::new(k, KElem::zero(), KElem::zero(), KElem::zero())
    }

    pub fn zero() -> Self {
        Self::scalar(KElem::zero())
    }

    pub fn one() -> Self {
        Self::scalar(KElem::one())
    }

    pub fn i() -> Self {
        QuatElem::new(KElem::zero(), KElem::one(), KElem::zero(), KElem::zero())
    }

    pub fn j() -> Self {
        QuatElem::new(KElem::zero(), KElem::zero(), KElem::one(), KElem::zero())
    }

    pub fn ij() -> Self {
        QuatElem::new(KElem::zero(), KElem::zero(), KElem::zero(), KElem::one())
    }

    pub fn scale(&self, k: &KElem) -> Self {
        QuatElem { c: self.c.clone().map(|x| k * &x) }
    }

    pub fn conj(&self) -> Self {
        let [a, b, c, d] = &self.c;
        QuatElem::new(a.clone(), -b, -c, -d)
    }

    /// `n(x) = x · conj(x)`, a scalar.
    pub fn reduced_norm(&self) -> KElem {
        (self * &self.conj()).c[0].clone()
    }

    pub fn reduced_trace(&self) -> KElem {
        &self.c[0] + &self.c[0]
    }

    /// `conj(g) / n(g)`, defined for `n(g) = ±1`.
    pub fn unit_inverse(&self) -> Result<Self> {
        let n = self.reduced_norm();
        match n.sign() {
            Some(s) => Ok(self.conj().scale(&KElem::from_ints(s as i64, 0))),
            None => domain(format!("reduced norm {n} is not ±1")),
        }
    }

    /// `Some(±1)` if this is the scalar `±1`.
    pub fn sign(&self) -> Option<i8> {
        if self.c[1..].iter().all(KElem::is_zero) {
            self.c[0].sign()
        } else {
            None
        }
    }

    /// Coordinates in the order basis `{1, i, e_s, e_t}`.
    pub fn order_coords(&self) -> [KElem; 4] {
        let [c1, ci, cj, cij] = &self.c;
        let two = KElem::from_ints(2, 0);
        [c1 - cij, ci - cj, &two * cj, &two * cij]
    }

    pub fn in_order(&self) -> bool {
        self.order_coords().iter().all(KElem::is_integral)
    }

    /// Image under `i ↦ diag(i, -i)`, `j ↦ [[0, 1], [-3, 0]]`.
    pub fn to_matrix(&self) -> CMat {
        let [a, b, c, d] = self.c.clone().map(|k| k.to_complex());
        let ii = Complex64::i();
        // ij ↦ [[0, i], [3i, 0]]
        [[a + b * ii, c + d * ii], [-3.0 * c + 3.0 * d * ii, a - b * ii]]
    }
}

impl std::fmt::Display for QuatElem {
    /// `(c0) + (c1)i + (c2)j + (c3)ij`, with `r = √-2` and zero terms dropped.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let terms: Vec<String> = self
            .c
            .iter()
            .zip(["", "i", "j", "ij"])
            .filter(|(x, _)| !x.is_zero())
            .map(|(x, e)| format!("({x}){e}"))
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl Add for &QuatElem {
    type Output = QuatElem;
    fn add(self, o: &QuatElem) -> QuatElem {
        QuatElem { c: std::array::from_fn(|k| &self.c[k] + &o.c[k]) }
    }
}

impl Sub for &QuatElem {
    type Output = QuatElem;
    fn sub(self, o: &QuatElem) -> QuatElem {
        QuatElem { c: std::array::from_fn(|k| &self.c[k] - &o.c[k]) }
    }
}

impl Neg for &QuatElem {
    type Output = QuatElem;
    fn neg(self) -> QuatElem {
        QuatElem { c: std::array::from_fn(|k| -&self.c[k]) }
    }
}

impl Mul for &QuatElem {
    type Output = QuatElem;
    fn mul(self, o: &QuatElem) -> QuatElem {
        let mut out = QuatElem::zero();
        for p in 0..4 {
            if self.c[p].is_zero() {
                continue;
            }
            for q in 0..4 {
                let (coef, r) = basis_product(p, q);
                let term = &(&self.c[p] * &o.c[q]) * &KElem::from_ints(coef, 0);
                out.c[r] = &out.c[r] + &term;
            }
        }
        out
    }
}

fn half(k: KElem) -> KElem {
    k.scale(&BigRational::new(BigInt::from(1), BigInt::from(2)))
}

/// `e_s = (i + j) / 2`.
pub fn e_s() -> QuatElem {
    QuatElem::new(KElem::zero(), half(KElem::one()), half(KElem::one()), KElem::zero())
}

/// `e_t = (1 + ij) / 2`.
pub fn e_t() -> QuatElem {
    QuatElem::new(half(KElem::one()), KElem::zero(), KElem::zero(), half(KElem::one()))
}

/// `{1, i, e_s, e_t}`.
pub fn order_basis() -> [QuatElem; 4] {
    [QuatElem::one(), QuatElem::i(), e_s(), e_t()]
}

pub const ORDER_BASIS_NAMES: [&str; 4] = ["1", "i", "e_s", "e_t"];

/// Images of `u, v, x, y`.
pub fn unit_generators() -> [QuatElem; 4] {
    let r = KElem::sqrt_m2();
    let (pi, pib) = (KElem::pi(), KElem::pi_bar());
    let u = QuatElem::i();
    let v = &QuatElem::i().scale(&KElem::from_ints(-2, 0)) + &e_s().scale(&pi);
    let x = &(&(&QuatElem::scalar(r.clone()) + &QuatElem::i().scale(&pi)) + &e_s().scale(&pib)) - &e_t().scale(&r);
    let y = &(&QuatElem::scalar(r.clone()) + &e_s()) - &e_t().scale(&r);
    [u, v, x, y]
}

pub const GENERATOR_NAMES: [&str; 4] = ["u", "v", "x", "y"];

/// The base orbifold group on `u, v, x, y` (letters `a..d`).
pub fn base_presentation() -> Presentation {
    Presentation::from_letters(4, &BASE_RELATORS).expect("fixed relators parse")
}

/// `u^2, v^2, x^4, y^4, y x y^-1 v x^-1 v, x^-1 v x v u y^-1 u y, (u y^-1 u y)^3`.
pub const BASE_RELATORS: [&str; 7] = ["aa", "bb", "cccc", "dddd", "dcDbCb", "CbcbaDad", "aDadaDadaDad"];

/// Evaluates a word on quaternion images, inverting by [`QuatElem::unit_inverse`].
pub fn eval_word(word: &Word, images: &[QuatElem]) -> Result<QuatElem> {
    let mut acc = QuatElem::one();
    for &l in word.letters() {
        let g = &images[(l.unsigned_abs() - 1) as usize];
        let g = if l > 0 { g.clone() } else { g.unit_inverse()? };
        acc = &acc * &g;
    }
    Ok(acc)
}

#[derive(Clone, Debug, Serialize)]
pub struct ProductEntry {
    pub left: &'static str,
    pub right: &'static str,
    /// Coordinates in the order basis.
    pub coords: [String; 4],
    pub integral: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrderClosureReport {
    pub products: Vec<ProductEntry>,
    pub closed: bool,
}

/// Expresses all 16 products of order-basis elements in the order basis.
pub fn verify_order_closure() -> OrderClosureReport {
    let basis = order_basis();
    let mut products = Vec::new();
    for (l, bl) in basis.iter().enumerate() {
        for (r, br) in basis.iter().enumerate() {
            let prod = bl * br;
            products.push(ProductEntry {
                left: ORDER_BASIS_NAMES[l],
                right: ORDER_BASIS_NAMES[r],
                coords: prod.order_coords().map(|k| k.to_string()),
                integral: prod.in_order(),
            });
        }
    }
    let closed = products.iter().all(|p| p.integral);
    OrderClosureReport { products, closed }
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneratorCheck {
    pub name: &'static str,
    pub reduced_norm: String,
    pub in_order: bool,
    pub unit: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RelatorCheck {
    pub relator: String,
    /// `±1` when the word evaluates to a scalar `±1`.
    pub sign: Option<i8>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PresentationUnitsReport {
    pub generators: Vec<GeneratorCheck>,
    pub relators: Vec<RelatorCheck>,
    pub ok: bool,
}

pub fn verify_presentation_units() -> Result<PresentationUnitsReport> {
    let gens = unit_generators();
    let generators: Vec<GeneratorCheck> = gens
        .iter()
        .zip(GENERATOR_NAMES)
        .map(|(g, name)| {
            let n = g.reduced_norm();
            GeneratorCheck { name, unit: n.sign().is_some(), reduced_norm: n.to_string(), in_order: g.in_order() }
        })
        .collect();
    let pres = base_presentation();
    let mut relators = Vec::new();
    for w in pres.relators() {
        let sign = match eval_word(w, &gens) {
            Ok(val) => val.sign(),
            Err(_) => None,
        };
        relators.push(RelatorCheck { relator: w.to_string(), sign });
    }
    let ok = generators.iter().all(|g| g.unit && g.in_order) && relators.iter().all(|r| r.sign.is_some());
    Ok(PresentationUnitsReport { generators, relators, ok })
}

pub type CMat = [[Complex64; 2]; 2];

pub fn cmat_mul(x: &CMat, y: &CMat) -> CMat {
    std::array::from_fn(|r| std::array::from_fn(|c| x[r][0] * y[0][c] + x[r][1] * y[1][c]))
}

pub fn cmat_inv(x: &CMat) -> CMat {
    let det = x[0][0] * x[1][1] - x[0][1] * x[1][0];
    [[x[1][1] / det, -x[0][1] / det], [-x[1][0] / det, x[0][0] / det]]
}

fn cmat_identity() -> CMat {
    let (o, z) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
    [[o, z], [z, o]]
}

/// Distance to the nearer of `±I` in the max norm.
fn dist_pm_identity(x: &CMat) -> f64 {
    let id = cmat_identity();
    [1.0, -1.0]
        .iter()
        .map(|s| (0..2).flat_map(|r| (0..2).map(move |c| (r, c))).map(|(r, c)| (x[r][c] - id[r][c] * s).norm()).fold(0.0, f64::max))
        .fold(f64::INFINITY, f64::min)
}

#[derive(Clone, Debug, Serialize)]
pub struct EmbeddingReport {
    pub tolerance: f64,
    pub relator_errors: Vec<f64>,
    pub trace_errors: Vec<f64>,
    pub ok: bool,
}

/// Floating check of the relators and traces through the matrix embedding.
pub fn numeric_embedding_check(tolerance: f64) -> Result<EmbeddingReport> {
    if !(tolerance > 0.0) {
        return crate::error::param("tolerance must be positive");
    }
    let gens = unit_generators();
    let mats: Vec<CMat> = gens.iter().map(QuatElem::to_matrix).collect();
    let pres = base_presentation();
    let relator_errors: Vec<f64> = pres
        .relators()
        .iter()
        .map(|w| {
            let m = w.letters().iter().fold(cmat_identity(), |acc, &l| {
                let g = &mats[(l.unsigned_abs() - 1) as usize];
                cmat_mul(&acc, &if l > 0 { *g } else { cmat_inv(g) })
            });
            dist_pm_identity(&m)
        })
        .collect();
    let trace_errors: Vec<f64> = gens
        .iter()
        .zip(&mats)
        .map(|(g, m)| (g.reduced_trace().to_complex() - (m[0][0] + m[1][1])).norm())
        .collect();
    let ok = relator_errors.iter().chain(&trace_errors).all(|&e| e <= tolerance);
    Ok(EmbeddingReport { tolerance, relator_errors, trace_errors, ok })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpcore::abelianization;
    use proptest::prelude::*;

    fn k(u: i64, v: i64) -> KElem {
        KElem::from_ints(u, v)
    }

    #[test]
    fn defining_relations() {
        let (i, j, ij) = (QuatElem::i(), QuatElem::j(), QuatElem::ij());
        assert_eq!(&i * &j, ij);
        assert_eq!(&j * &i, -&ij);
        assert_eq!(&i * &i, QuatElem::scalar(k(-1, 0)));
        assert_eq!(&j * &j, QuatElem::scalar(k(-3, 0)));
        assert_eq!(&e_s() * &e_s(), QuatElem::scalar(k(-1, 0)));
        assert_eq!(&QuatElem::one() * &e_s(), e_s());
    }

    #[test]
    fn order_closure() {
        let rep = verify_order_closure();
        assert!(rep.closed);
        assert_eq!(rep.products.len(), 16);
        // e_t^2 = e_t - 1
        assert_eq!(&e_t() * &e_t(), &e_t() - &QuatElem::one());
        // e_s e_t by hand: (i + j)(1 + ij)/4 = (i + j + i·ij + j·ij)/4 = (i + j - j + 3i)/4 = i
        assert_eq!(&e_s() * &e_t(), QuatElem::i());
        let st = rep.products.iter().find(|p| p.left == "e_s" && p.right == "e_t").unwrap();
        assert_eq!(st.coords, ["0", "1", "0", "0"].map(String::from));
    }

    #[test]
    fn y_norm_by_hand() {
        // y = r + (i + j)/2 - r(1 + ij)/2 = r/2 + i/2 + j/2 - (r/2) ij, norm c1^2 + ci^2 + 3cj^2 + 3cij^2
        // = -1/2 + 1/4 + 3/4 - 3/2 = -1
        let y = &unit_generators()[3];
        assert_eq!(y.reduced_norm(), k(-1, 0));
        let [c1, ci, cj, cij] = &y.c;
        let form = &(&(&(c1 * c1) + &(ci * ci)) + &(&k(3, 0) * &(cj * cj))) + &(&k(3, 0) * &(cij * cij));
        assert_eq!(form, k(-1, 0));
    }

    #[test]
    fn presentation_units() {
        let rep = verify_presentation_units().unwrap();
        assert!(rep.ok);
        assert_eq!(rep.relators.len(), 7);
        assert_eq!(rep.relators[0].sign, Some(-1));
        assert_eq!(rep.generators[0].reduced_norm, "1");
        for g in unit_generators() {
            assert_eq!(&g * &g.unit_inverse().unwrap(), QuatElem::one());
        }
        assert!(QuatElem::scalar(k(2, 0)).unit_inverse().is_err());
    }

    #[test]
    fn presentation_abelianizes_with_even_torsion() {
        let h = abelianization(&base_presentation());
        assert_eq!(h.betti, 0);
        assert!(h.torsion.iter().any(|t| t % 2u32 == BigInt::from(0)));
    }

    #[test]
    fn embedding() {
        let rep = numeric_embedding_check(1e-10).unwrap();
        assert!(rep.ok, "{rep:?}");
        let jm = QuatElem::j().to_matrix();
        let j2 = cmat_mul(&jm, &jm);
        assert!((j2[0][0] + 3.0).norm() < 1e-15 && (j2[1][1] + 3.0).norm() < 1e-15 && j2[0][1].norm() < 1e-15);
        assert!(numeric_embedding_check(0.0).is_err());
    }

    /// The matrix of a reduced-norm-1 loxodromic element: its eigenvalue gives
    /// `l + iθ`, and `cosh((l + iθ)/2)` recovers `±tr/2`.
    #[test]
    fn cosh_relation_on_words() {
        let mats: Vec<CMat> = unit_generators().iter().map(QuatElem::to_matrix).collect();
        let words = ["uv", "xy", "vy", "uxvy", "xxy", "xYv"];
        let mut checked = 0;
        for w in words {
            let w = Word::parse_letters(&w.replace('u', "a").replace('v', "b").replace('x', "c").replace('y', "d").replace('Y', "D"))
                .unwrap();
            let gens = unit_generators();
            let g = eval_word(&w, &gens).unwrap();
            if g.reduced_norm() != k(1, 0) {
                continue;
            }
            let m = w.letters().iter().fold(cmat_identity(), |acc, &l| {
                let g = &mats[(l.unsigned_abs() - 1) as usize];
                cmat_mul(&acc, &if l > 0 { *g } else { cmat_inv(g) })
            });
            let tr = m[0][0] + m[1][1];
            let lambda = {
                let d = (tr * tr - 4.0).sqrt();
                let (a, b) = ((tr + d) / 2.0, (tr - d) / 2.0);
                if a.norm() >= b.norm() { a } else { b }
            };
            if (lambda.norm() - 1.0).abs() < 1e-9 {
                continue;
            }
            let lc = 2.0 * lambda.ln();
            let lhs = (lc / 2.0).cosh();
            let err = (lhs - tr / 2.0).norm().min((lhs + tr / 2.0).norm());
            assert!(err < 1e-9, "{w}: {err}");
            assert!((tr - g.reduced_trace().to_complex()).norm() < 1e-9);
            checked += 1;
        }
        assert!(checked >= 2);
    }

    fn small_k() -> impl Strategy<Value = KElem> {
        (-6i64..6, -6i64..6, 1i64..4).prop_map(|(u, v, d)| {
            KElem::new(BigRational::new(u.into(), d.into()), BigRational::new(v.into(), d.into()))
        })
    }

    fn quat() -> impl Strategy<Value = QuatElem> {
        [small_k(), small_k(), small_k(), small_k()].prop_map(|c| QuatElem { c })
    }

    proptest! {
        #[test]
        fn norm_multiplicative_and_conj_anti(g in quat(), h in quat()) {
            let gh = &g * &h;
            prop_assert_eq!(gh.reduced_norm(), &g.reduced_norm() * &h.reduced_norm());
            prop_assert_eq!(gh.conj(), &h.conj() * &g.conj());
        }

        #[test]
        fn unit_words_invert(letters in prop::collection::vec(prop_oneof![1i32..5, -4i32..0], 0..12)) {
            let gens = unit_generators();
            let g = eval_word(&Word(letters), &gens).unwrap();
            prop_assert!(g.in_order());
            prop_assert_eq!(&g * &g.unit_inverse().unwrap(), QuatElem::one());
        }
    }
}
