//! Rank of a sparse matrix over F_p: the boundary map of a cycle graph.

use kleinlab::fpcore::{sparse_rank_mod_p, SparseMatModP};

fn main() -> kleinlab::Result<()> {
    let n = 20_000;
    // edge i joins vertices i and i+1 (mod n): rank n-1
    let triplets: Vec<(usize, usize, i64)> =
        (0..n).flat_map(|i| [(i, i, 1), (i, (i + 1) % n, -1)]).collect();
    let m = SparseMatModP::from_triplets(n, n, 31991, triplets)?;
    println!("{}x{} with {} nonzeros: rank {}", m.nrows(), m.ncols(), m.nnz(), sparse_rank_mod_p(&m));
    Ok(())
}
