//! Abelianized Reidemeister–Schreier rewriting for finite-index subgroups
//! given by a permutation action.

use super::perm::{orbit_and_transversal, Permutation};
use super::sparse::{sparse_rank_mod_p, SparseMatModP};
use super::word::Presentation;
use crate::error::{param, Error, Result};

/// Coset bookkeeping shared by the matrix builder: orbit positions and the
/// column index of every non-tree (coset, generator) pair.
struct CosetTable {
    /// orbit point -> coset index
    coset: Vec<usize>,
    points: Vec<usize>,
    /// (coset * ngens + gen) -> column, `None` for tree edges
    column: Vec<Option<u32>>,
    ncols: usize,
}

fn coset_table(images: &[Permutation], point: usize) -> Result<CosetTable> {
    let orbit = orbit_and_transversal(images, point)?;
    let n = orbit.points.len();
    let ngens = images.len();
    let mut tree = vec![false; n * ngens];
    for &x in &orbit.points {
        if let Some(e) = orbit.edges[x] {
            // forward edge: parent·g = x; inverse edge: x·g = parent
            let from = if e.sign > 0 { e.parent } else { x };
            tree[orbit.position[from] * ngens + e.gen] = true;
        }
    }
    let mut column = vec![None; n * ngens];
    let mut ncols = 0u32;
    for (slot, is_tree) in column.iter_mut().zip(&tree) {
        if !is_tree {
            *slot = Some(ncols);
            ncols += 1;
        }
    }
    Ok(CosetTable { coset: orbit.position, points: orbit.points, column, ncols: ncols as usize })
}

/// Relation matrix of the abelianized subgroup `Stab(point)` over `F_P`,
/// with the number of Schreier generators.
///
/// Row `r * n + c` is the exponent vector of relator `r` rewritten from coset
/// `c` (cosets numbered in BFS order, `n` the orbit size).
pub fn abelianized_rewriting_matrix(
    pres: &Presentation,
    images: &[Permutation],
    point: usize,
    p: u64,
) -> Result<(SparseMatModP, usize)> {
    if images.len() != pres.ngens() {
        return param(format!("{} images for {} generators", images.len(), pres.ngens()));
    }
    let degree = images.first().map_or(0, Permutation::degree);
    if point >= degree {
        return param(format!("point {point} outside degree {degree}"));
    }
    let table = coset_table(images, point)?;
    let ngens = pres.ngens();
    let n = table.points.len();
    let inverses: Vec<Permutation> = images.iter().map(Permutation::inverse).collect();
    let mut triplets = Vec::new();
    for (r, rel) in pres.relators().iter().enumerate() {
        for (c, &start) in table.points.iter().enumerate() {
            let row = r * n + c;
            let mut cur = start;
            for &l in rel.letters() {
                let g = l.unsigned_abs() as usize - 1;
                if l > 0 {
                    if let Some(col) = table.column[table.coset[cur] * ngens + g] {
                        triplets.push((row, col as usize, 1));
                    }
                    cur = images[g].apply(cur);
                } else {
                    cur = inverses[g].apply(cur);
                    if let Some(col) = table.column[table.coset[cur] * ngens + g] {
                        triplets.push((row, col as usize, -1));
                    }
                }
            }
            if cur != start {
                return Err(Error::Invariant(format!(
                    "relator {r} does not act trivially at point {start}"
                )));
            }
        }
    }
    let m = SparseMatModP::from_triplets(n * pres.relators().len(), table.ncols, p, triplets)?;
    Ok((m, table.ncols))
}

/// `dim H_1(Stab(point); F_P)`, the first-Betti proxy of the cover.
pub fn betti_proxy_cover(pres: &Presentation, images: &[Permutation], point: usize, p: u64) -> Result<usize> {
    let (m, ngens_schreier) = abelianized_rewriting_matrix(pres, images, point, p)?;
    Ok(ngens_schreier - sparse_rank_mod_p(&m))
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpcore::abelian::mod_p_rank_h1;
    use crate::fpcore::word::Word;
    use num_bigint::BigInt;
    use num_traits::Zero;
    use proptest::prelude::*;

    const P: u64 = 31991;

    #[test]
    fn index_one_is_the_exponent_matrix() {
        let pres = Presentation::from_letters(2, &["aaaa", "bbbb", "aB"]).unwrap();
        let ids = vec![Permutation::identity(1), Permutation::identity(1)];
        let (m, k) = abelianized_rewriting_matrix(&pres, &ids, 0, P).unwrap();
        assert_eq!(k, 2);
        let expect: Vec<Vec<u64>> = pres
            .exponent_matrix()
            .iter()
            .map(|r| r.iter().map(|&v| v.rem_euclid(P as i64) as u64).collect())
            .collect();
        assert_eq!(m.to_dense(), expect);
        assert_eq!(betti_proxy_cover(&pres, &ids, 0, P).unwrap(), mod_p_rank_h1(&pres, P).unwrap());
        assert_eq!(betti_proxy_cover(&pres, &ids, 0, P).unwrap(), 0);
    }

    #[test]
    fn subgroup_of_z() {
        let pres = Presentation::free(1).unwrap();
        let a = Permutation::from_cycles(3, &[&[0, 1, 2]]).unwrap();
        let (m, k) = abelianized_rewriting_matrix(&pres, &[a.clone()], 0, P).unwrap();
        assert_eq!(k, 1);
        assert_eq!(m.nrows(), 0);
        assert_eq!(betti_proxy_cover(&pres, &[a], 0, P).unwrap(), 1);
    }

    #[test]
    fn free_rank_two_index_two() {
        let pres = Presentation::free(2).unwrap();
        let t = Permutation::from_cycles(2, &[&[0, 1]]).unwrap();
        for imgs in [[t.clone(), t.clone()], [t.clone(), Permutation::identity(2)]] {
            let (_, k) = abelianized_rewriting_matrix(&pres, &imgs, 0, P).unwrap();
            assert_eq!(k, 3);
        }
    }

    #[test]
    fn errors() {
        let pres = Presentation::from_letters(1, &["aa"]).unwrap();
        let a = Permutation::from_cycles(3, &[&[0, 1, 2]]).unwrap();
        assert!(matches!(abelianized_rewriting_matrix(&pres, &[a.clone()], 3, P), Err(Error::Parameter(_))));
        assert!(matches!(abelianized_rewriting_matrix(&pres, &[a], 0, P), Err(Error::Invariant(_))));
    }

    fn seeded_perm(n: usize, seed: u64) -> Permutation {
        let mut v: Vec<u32> = (0..n as u32).collect();
        let mut x = seed;
        for i in (1..n).rev() {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            v.swap(i, ((x >> 33) % (i as u64 + 1)) as usize);
        }
        Permutation::new(v).unwrap()
    }

    fn perm_of_word(w: &Word, images: &[Permutation]) -> Permutation {
        let n = images[0].degree();
        let mut acc = Permutation::identity(n);
        for &l in w.letters() {
            let g = &images[l.unsigned_abs() as usize - 1];
            acc = if l > 0 { acc.then(g) } else { acc.then(&g.inverse()) };
        }
        acc
    }

    fn perm_order(p: &Permutation) -> i64 {
        let mut acc = p.clone();
        let mut k = 1;
        while !acc.is_identity() {
            acc = acc.then(p);
            k += 1;
        }
        k
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(96))]
        #[test]
        fn proxy_matches_full_snf(
            degree in 1usize..=8,
            ngens in 1usize..=3,
            seeds in prop::collection::vec(any::<u64>(), 3),
            words in prop::collection::vec(prop::collection::vec((1i32..=3, any::<bool>()), 1..=5), 1..=4),
            point_seed in any::<usize>(),
        ) {
            let images: Vec<Permutation> = (0..ngens).map(|g| seeded_perm(degree, seeds[g])).collect();
            // relators: powers of random words that act trivially
            let rels: Vec<Word> = words.iter().map(|w| {
                let w = Word(w.iter().filter(|(g, _)| *g as usize <= ngens)
                    .map(|&(g, s)| if s { g } else { -g }).collect());
                let o = perm_order(&perm_of_word(&w, &images));
                w.pow(o)
            }).collect();
            let pres = Presentation::new(ngens, rels).unwrap();
            let point = point_seed % degree;
            let (_, k) = abelianized_rewriting_matrix(&pres, &images, point, P).unwrap();
            let n = orbit_and_transversal(&images, point).unwrap().points.len();
            prop_assert_eq!(k, n * (ngens - 1) + 1);
            let proxy = betti_proxy_cover(&pres, &images, point, P).unwrap();
            let (h1, symbols) = oracle::subgroup_h1(&pres, &images, point);
            prop_assert_eq!(symbols, k);
            let p_divides = h1.torsion.iter().any(|d| (d % BigInt::from(P)).is_zero());
            if !p_divides {
                prop_assert_eq!(proxy, h1.betti);
            }
        }
    }
}
