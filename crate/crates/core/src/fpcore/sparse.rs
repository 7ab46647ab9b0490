//! Exact rank of sparse matrices over a prime field.

use crate::arith::{inv_mod, is_prime, mul_mod};
use crate::error::{param, Result};

/// Once the active block fits in this many rows and columns, elimination
/// switches to a dense array.
pub const DENSE_CUTOFF: usize = 400;

/// Sparse matrix over `F_P`, stored as sorted rows of `(column, value)` with
/// nonzero values and at most one entry per position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatModP {
    nrows: usize,
    ncols: usize,
    modulus: u64,
    rows: Vec<Vec<(u32, u64)>>,
}

impl SparseMatModP {
    pub fn zeros(nrows: usize, ncols: usize, modulus: u64) -> Result<Self> {
        if !is_prime(modulus) {
            return param(format!("modulus {modulus} is not prime"));
        }
        Ok(SparseMatModP { nrows, ncols, modulus, rows: vec![Vec::new(); nrows] })
    }

    /// Builds from integer triplets; duplicates are summed and values reduced mod `P`.
    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        modulus: u64,
        triplets: impl IntoIterator<Item = (usize, usize, i64)>,
    ) -> Result<Self> {
        let mut m = Self::zeros(nrows, ncols, modulus)?;
        let mut raw: Vec<Vec<(u32, i64)>> = vec![Vec::new(); nrows];
        for (r, c, v) in triplets {
            if r >= nrows || c >= ncols {
                return param(format!("entry ({r},{c}) outside {nrows}x{ncols}"));
            }
            raw[r].push((c as u32, v));
        }
        for (r, mut entries) in raw.into_iter().enumerate() {
            entries.sort_unstable_by_key(|e| e.0);
            let mut row: Vec<(u32, u64)> = Vec::with_capacity(entries.len());
            let mut acc: Option<(u32, i64)> = None;
            for (c, v) in entries {
                let v = v.rem_euclid(modulus as i64);
                match acc {
                    Some((ac, av)) if ac == c => acc = Some((c, (av + v) % modulus as i64)),
                    Some((ac, av)) => {
                        if av != 0 {
                            row.push((ac, av as u64));
                        }
                        acc = Some((c, v));
                    }
                    None => acc = Some((c, v)),
                }
            }
            if let Some((ac, av)) = acc {
                if av != 0 {
                    row.push((ac, av as u64));
                }
            }
            m.rows[r] = row;
        }
        Ok(m)
    }

    pub fn identity(n: usize, modulus: u64) -> Result<Self> {
        Self::from_triplets(n, n, modulus, (0..n).map(|i| (i, i, 1)))
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn row(&self, r: usize) -> &[(u32, u64)] {
        &self.rows[r]
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |&(c, v)| (r, c as usize, v)))
    }

    pub fn to_dense(&self) -> Vec<Vec<u64>> {
        let mut d = vec![vec![0u64; self.ncols]; self.nrows];
        for (r, c, v) in self.entries() {
            d[r][c] = v;
        }
        d
    }
}

/// Rank over `F_p` of a dense matrix with entries already reduced mod `p`.
///
/// Rows are reduced one at a time against an echelon basis, stopping once the
/// basis spans every column. For `p < 2^20` updates accumulate without
/// reduction until the next entry is inspected or overflow gets close.
pub fn rank_mod_p_dense(rows: Vec<Vec<u64>>, ncols: usize, p: u64) -> usize {
    // combinations of rows lie in the row space, so full rank of a short
    // mixed block proves full column rank; otherwise fall through
    if ncols > 0 && rows.len() > ncols + 2 * MIX_EXTRA {
        let mixed = mixed_rows(&rows, ncols + MIX_EXTRA, p);
        if echelon_rank(mixed, ncols, p) == ncols {
            return ncols;
        }
    }
    echelon_rank(rows, ncols, p)
}

const MIX_EXTRA: usize = 16;

/// `count` rows, each a combination of four rows with pseudo-random nonzero
/// coefficients (fixed seed).
fn mixed_rows(rows: &[Vec<u64>], count: usize, p: u64) -> Vec<Vec<u64>> {
    let mut state = 0x9e37_79b9_7f4a_7c15u64;
    let mut next = move || {
        state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    };
    let n = rows.len() as u64;
    (0..count)
        .map(|_| {
            let mut acc = vec![0u64; rows[0].len()];
            for _ in 0..4 {
                let r = &rows[(next() % n) as usize];
                let coef = 1 + next() % (p - 1).max(1);
                for (a, &x) in acc.iter_mut().zip(r) {
                    *a = (*a + mul_mod(coef, x % p, p)) % p;
                }
            }
            acc
        })
        .collect()
}

fn echelon_rank(rows: Vec<Vec<u64>>, ncols: usize, p: u64) -> usize {
    if p < 1 << 20 {
        return dense_rank_small(rows, ncols, p);
    }
    // pivot_of[c]: basis row with leading 1 in column c, zero before it
    let mut pivot_of: Vec<Option<usize>> = vec![None; ncols];
    let mut basis: Vec<Vec<u64>> = Vec::new();
    for mut v in rows {
        if basis.len() == ncols {
            break;
        }
        let mut lead = None;
        for c in 0..ncols {
            let f = v[c] % p;
            if f == 0 {
                continue;
            }
            let Some(b) = pivot_of[c] else {
                lead = Some(c);
                break;
            };
            let k = p - f;
            for (x, &y) in v[c..].iter_mut().zip(&basis[b][c..]) {
                *x = (*x % p + mul_mod(k, y, p)) % p;
            }
        }
        let Some(c) = lead else { continue };
        let inv = inv_mod(v[c] % p, p);
        for x in v[c..].iter_mut() {
            *x = mul_mod(*x % p, inv, p);
        }
        pivot_of[c] = Some(basis.len());
        basis.push(v);
    }
    basis.len()
}

/// [`echelon_rank`] for `p < 2^20`: basis rows are `u32`, the row
/// being reduced accumulates products in `u64` and is only reduced when an
/// entry is inspected or overflow gets close.
fn dense_rank_small(rows: Vec<Vec<u64>>, ncols: usize, p: u64) -> usize {
    let budget = (u64::MAX - p) / ((p - 1) * (p - 1)).max(1);
    let mut pivot_of: Vec<Option<usize>> = vec![None; ncols];
    let mut basis: Vec<Vec<u32>> = Vec::new();
    for mut v in rows {
        if basis.len() == ncols {
            break;
        }
        let mut pending = 0u64;
        let mut lead = None;
        for c in 0..ncols {
            let f = v[c] % p;
            v[c] = f;
            if f == 0 {
                continue;
            }
            let Some(b) = pivot_of[c] else {
                lead = Some(c);
                break;
            };
            if pending + 1 >= budget {
                v[c..].iter_mut().for_each(|x| *x %= p);
                pending = 0;
            }
            pending += 1;
            let k = (p - f) as u32;
            for (x, &y) in v[c..].iter_mut().zip(&basis[b][c..]) {
                *x += k as u64 * y as u64;
            }
        }
        let Some(c) = lead else { continue };
        let inv = inv_mod(v[c], p);
        let mut row = vec![0u32; ncols];
        for (r, &x) in row[c..].iter_mut().zip(&v[c..]) {
            *r = mul_mod(x % p, inv, p) as u32;
        }
        pivot_of[c] = Some(basis.len());
        basis.push(row);
    }
    basis.len()
}

/// `row - factor * pivot` over sorted sparse rows.
fn axpy(row: &[(u32, u64)], factor: u64, pivot: &[(u32, u64)], p: u64) -> Vec<(u32, u64)> {
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        let take_row = j == pivot.len() || (i < row.len() && row[i].0 < pivot[j].0);
        let take_piv = i == row.len() || (j < pivot.len() && pivot[j].0 < row[i].0);
        if take_row {
            out.push(row[i]);
            i += 1;
        } else if take_piv {
            out.push((pivot[j].0, (p - mul_mod(factor, pivot[j].1, p)) % p));
            j += 1;
        } else {
            let v = (row[i].1 + p - mul_mod(factor, pivot[j].1, p)) % p;
            if v != 0 {
                out.push((row[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Largest active block (rows × columns) handed to the dense kernel early.
const DENSE_MAX_CELLS: usize = 1 << 25;

/// Rank over `F_P` by sparse Gaussian elimination with Markowitz pivoting,
/// finishing densely once the active block is below [`DENSE_CUTOFF`] or has
/// filled in to density 1/8.
pub fn sparse_rank_mod_p(m: &SparseMatModP) -> usize {
    rank_with_cutoff(m, DENSE_CUTOFF, true)
}

fn rank_with_cutoff(m: &SparseMatModP, cutoff: usize, density_switch: bool) -> usize {
    let p = m.modulus;
    // repeated rows add nothing to the rank
    let mut seen = std::collections::HashSet::new();
    let mut rows: Vec<Vec<(u32, u64)>> =
        m.rows.iter().map(|r| if seen.insert(r) { r.clone() } else { Vec::new() }).collect();
    drop(seen);
    let mut active: Vec<usize> = (0..m.nrows).filter(|&r| !rows[r].is_empty()).collect();
    let mut nnz: usize = active.iter().map(|&r| rows[r].len()).sum();
    let mut col_count = vec![0usize; m.ncols];
    let mut col_rows: Vec<Vec<u32>> = vec![Vec::new(); m.ncols];
    for &r in &active {
        for &(c, _) in &rows[r] {
            col_count[c as usize] += 1;
            col_rows[c as usize].push(r as u32);
        }
    }
    let mut rank = 0;
    loop {
        active.retain(|&r| !rows[r].is_empty());
        if active.is_empty() {
            return rank;
        }
        let live_cols = col_count.iter().filter(|&&c| c > 0).count();
        if active.len() <= cutoff && live_cols <= cutoff {
            break;
        }
        let cells = active.len() * live_cols;
        if density_switch && cells <= DENSE_MAX_CELLS && nnz * 8 >= cells {
            break;
        }
        // Markowitz: among the shortest rows, the entry whose column is sparsest
        let min_len = active.iter().map(|&r| rows[r].len()).min().unwrap();
        let mut best: Option<(usize, u32, usize)> = None;
        for &r in active.iter().filter(|&&r| rows[r].len() == min_len).take(8) {
            for &(c, _) in &rows[r] {
                let cost = (min_len - 1) * (col_count[c as usize] - 1);
                if best.map_or(true, |b| cost < b.2) {
                    best = Some((r, c, cost));
                }
            }
        }
        let (pr, pc, _) = best.unwrap();
        let pivot_row = std::mem::take(&mut rows[pr]);
        let pval = pivot_row.iter().find(|e| e.0 == pc).unwrap().1;
        let pinv = inv_mod(pval, p);
        for &(c, _) in &pivot_row {
            col_count[c as usize] -= 1;
        }
        nnz -= pivot_row.len();
        let targets = std::mem::take(&mut col_rows[pc as usize]);
        for &t in &targets {
            let t = t as usize;
            if t == pr {
                continue;
            }
            let Ok(pos) = rows[t].binary_search_by_key(&pc, |e| e.0) else { continue };
            let factor = mul_mod(rows[t][pos].1, pinv, p);
            let old = std::mem::take(&mut rows[t]);
            let new = axpy(&old, factor, &pivot_row, p);
            for &(c, _) in &old {
                col_count[c as usize] -= 1;
            }
            for &(c, _) in &new {
                col_count[c as usize] += 1;
                if old.binary_search_by_key(&c, |e| e.0).is_err() {
                    col_rows[c as usize].push(t as u32);
                }
            }
            nnz = nnz - old.len() + new.len();
            rows[t] = new;
        }
        rank += 1;
    }
    // dense finish on the remaining block
    let mut cols: Vec<usize> = (0..m.ncols).filter(|&c| col_count[c] > 0).collect();
    cols.sort_unstable();
    let mut index = vec![usize::MAX; m.ncols];
    for (i, &c) in cols.iter().enumerate() {
        index[c] = i;
    }
    let dense: Vec<Vec<u64>> = active
        .iter()
        .map(|&r| {
            let mut d = vec![0u64; cols.len()];
            for &(c, v) in &rows[r] {
                d[index[c as usize]] = v;
            }
            d
        })
        .collect();
    rank + rank_mod_p_dense(dense, cols.len(), p)
}
