//! Lower exponent-p central quotients of finitely presented groups.
//!
//! Class-by-class: the p-covering group of the current quotient is built by
//! adding a central tail to every non-defining relation, consistency and the
//! relators cut the tails down, and the surviving tails become the next layer.
//! New generators are always defined by `[a_j, a_i]` with `a_i` of weight 1
//! and `a_j` of top weight, or by `a_j^p` with `a_j` of top weight; that keeps
//! lifted generators inside the right term of the series, so tails of
//! relations of too high weight can be dropped.

use serde::Serialize;

use super::pc::{Collector, Elt, NormalWord, PcGroup, Rel};
use crate::arith::{inv_mod, is_prime};
use crate::error::{param, Error, Result};
use crate::fpcore::Presentation;

pub const MAX_CLASS: usize = 8;
pub const MAX_LAYER_WIDTH: usize = 512;

/// `d[k-1] = dim P_{k-1}(S)/P_k(S)` over `F_p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LayerRanks {
    pub d: Vec<usize>,
}

impl LayerRanks {
    /// `dim H_1(G; F_p)`.
    pub fn rank(&self) -> usize {
        self.d.first().copied().unwrap_or(0)
    }

    pub fn log_order(&self) -> usize {
        self.d.iter().sum()
    }

    /// The series stopped early: the last layer is zero.
    pub fn stabilized(&self) -> bool {
        self.d.last() == Some(&0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Def {
    Gen(usize),
    Comm(usize, usize),
    Pow(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Source {
    Image(usize),
    Comm(usize, usize),
    Pow(usize),
}

/// Mutable state of the algorithm between classes.
struct State {
    p: u32,
    weights: Vec<u32>,
    power: Vec<NormalWord>,
    comm: Vec<Vec<NormalWord>>,
    defs: Vec<Def>,
    /// Image of each presentation generator as a normal word.
    images: Vec<NormalWord>,
}

impl State {
    fn n(&self) -> usize {
        self.weights.len()
    }

    fn defined_by(&self, s: Source) -> bool {
        self.defs.iter().any(|d| match (d, s) {
            (Def::Gen(a), Source::Image(b)) => *a == b,
            (Def::Comm(a, b), Source::Comm(c, d)) => (*a, *b) == (c, d),
            (Def::Pow(a), Source::Pow(b)) => *a == b,
            _ => false,
        })
    }
}

/// Row reduction over `F_p`; returns the reduced rows with their pivot columns.
fn rref(mut rows: Vec<Vec<u32>>, ncols: usize, p: u32) -> Vec<(usize, Vec<u32>)> {
    let p64 = p as u64;
    let mut out: Vec<(usize, Vec<u32>)> = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(r, piv);
        let inv = inv_mod(rows[r][c] as u64, p64);
        for x in rows[r].iter_mut() {
            *x = (*x as u64 * inv % p64) as u32;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let f = row[c] as u64;
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    *x = ((*x as u64 + (p64 - f) * y as u64) % p64) as u32;
                }
            }
        }
        r += 1;
    }
    rows.truncate(r);
    for row in rows {
        let c = row.iter().position(|&x| x != 0).expect("nonzero reduced row");
        out.push((c, row));
    }
    out
}

/// One class step. Returns the rank of the new layer, or `None` when the width guard trips.
fn extend(st: &mut State, pres: &Presentation, class: u32) -> Result<Option<usize>> {
    let p = st.p;
    let n = st.n();
    let c = class - 1;
    // tail symbols and whether each is an allowed definition of a new generator
    let mut sources: Vec<(Source, bool)> = Vec::new();
    for l in 0..pres.ngens() {
        if !st.defined_by(Source::Image(l)) {
            sources.push((Source::Image(l), c == 0));
        }
    }
    for i in 0..n {
        if st.weights[i] <= c && !st.defined_by(Source::Pow(i)) {
            sources.push((Source::Pow(i), st.weights[i] == c));
        }
    }
    for j in 0..n {
        for i in 0..j {
            let w = st.weights[i] + st.weights[j];
            if w <= c + 1 && !st.defined_by(Source::Comm(j, i)) {
                sources.push((Source::Comm(j, i), st.weights[i] == 1 && st.weights[j] == c));
            }
        }
    }
    let ntails = sources.len();
    let tail_of = |s: Source| sources.iter().position(|&(t, _)| t == s);

    let mut col = Collector {
        p,
        n,
        ntails,
        power: (0..n)
            .map(|i| Rel { word: st.power[i].clone(), tail: tail_of(Source::Pow(i)).map(|t| vec![(t, 1)]).unwrap_or_default() })
            .collect(),
        conj: Vec::with_capacity(n),
    };
    for j in 0..n {
        let row = (0..j)
            .map(|i| {
                let mut w = vec![(j, 1)];
                w.extend_from_slice(&st.comm[j][i]);
                Rel { word: w, tail: tail_of(Source::Comm(j, i)).map(|t| vec![(t, 1)]).unwrap_or_default() }
            })
            .collect();
        col.conj.push(row);
    }

    let mut rows: Vec<Vec<u32>> = Vec::new();
    let mut push_diff = |lhs: &Elt, rhs: &Elt| -> Result<()> {
        if lhs.e != rhs.e {
            return Err(Error::Invariant("class quotient lost consistency".into()));
        }
        let row: Vec<u32> = lhs.t.iter().zip(&rhs.t).map(|(a, b)| (a + p - b) % p).collect();
        if row.iter().any(|&x| x != 0) {
            rows.push(row);
        }
        Ok(())
    };
    for (lhs, rhs) in col.consistency_failures(&st.weights, class) {
        push_diff(&lhs, &rhs)?;
    }
    let images: Vec<Elt> = (0..pres.ngens())
        .map(|l| {
            let mut x = col.identity();
            for &(g, e) in &st.images[l] {
                x.e[g] = e;
            }
            if let Some(t) = tail_of(Source::Image(l)) {
                x.t[t] = 1;
            }
            x
        })
        .collect();
    let inverses: Vec<Elt> = images.iter().map(|x| col.inverse(x)).collect();
    let one = col.identity();
    for r in pres.relators() {
        let mut x = col.identity();
        for &l in r.letters() {
            let g = l.unsigned_abs() as usize - 1;
            col.mul(&mut x, if l > 0 { &images[g] } else { &inverses[g] });
        }
        push_diff(&x, &one)?;
    }

    // definable tails last, so they end up as the free columns
    let mut order: Vec<usize> = (0..ntails).filter(|&t| !sources[t].1).collect();
    let mut definable: Vec<usize> = (0..ntails).filter(|&t| sources[t].1).collect();
    if c == 0 {
        // prefer low-numbered presentation generators as weight-1 generators
        definable.reverse();
    }
    order.extend(definable);
    let permuted: Vec<Vec<u32>> = rows.iter().map(|r| order.iter().map(|&t| r[t]).collect()).collect();
    let reduced = rref(permuted, ntails, p);
    let pivots: Vec<usize> = reduced.iter().map(|(c, _)| *c).collect();
    let free: Vec<usize> = (0..ntails).filter(|c| !pivots.contains(c)).collect();
    if free.iter().any(|&f| !sources[order[f]].1) {
        return Err(Error::Invariant("layer not spanned by definable tails".into()));
    }
    let d = free.len();
    if d > MAX_LAYER_WIDTH {
        return Ok(None);
    }
    // tail symbol -> combination of new generators n..n+d
    let mut subst: Vec<NormalWord> = vec![Vec::new(); ntails];
    for (k, &f) in free.iter().enumerate() {
        subst[order[f]] = vec![(n + k, 1)];
    }
    for (pc, row) in &reduced {
        subst[order[*pc]] = free
            .iter()
            .enumerate()
            .filter(|(_, &f)| row[f] != 0)
            .map(|(k, &f)| (n + k, p - row[f]))
            .collect();
    }
    let extend_word = |w: &NormalWord, s: Option<usize>| -> NormalWord {
        let mut w = w.clone();
        if let Some(t) = s {
            w.extend_from_slice(&subst[t]);
        }
        w
    };
    for i in 0..n {
        st.power[i] = extend_word(&st.power[i], tail_of(Source::Pow(i)));
        for j in i + 1..n {
            st.comm[j][i] = extend_word(&st.comm[j][i], tail_of(Source::Comm(j, i)));
        }
    }
    for l in 0..pres.ngens() {
        st.images[l] = extend_word(&st.images[l], tail_of(Source::Image(l)));
    }
    for &f in &free {
        st.defs.push(match sources[order[f]].0 {
            Source::Image(l) => Def::Gen(l),
            Source::Comm(j, i) => Def::Comm(j, i),
            Source::Pow(i) => Def::Pow(i),
        });
    }
    for k in 0..d {
        st.weights.push(class);
        st.power.push(Vec::new());
        st.comm.push(vec![Vec::new(); n + k]);
    }
    Ok(Some(d))
}

/// Maximal p-quotient of exponent-p class at most `max_class`.
pub fn p_quotient(pres: &Presentation, p: u64, max_class: usize) -> Result<(PcGroup, LayerRanks)> {
    if !is_prime(p) || p > 1 << 16 {
        return param(format!("{p} is not a prime below 2^16"));
    }
    if !(1..=MAX_CLASS).contains(&max_class) {
        return param(format!("class must lie in 1..={MAX_CLASS}"));
    }
    let p = p as u32;
    let mut st = State {
        p,
        weights: Vec::new(),
        power: Vec::new(),
        comm: Vec::new(),
        defs: Vec::new(),
        images: vec![Vec::new(); pres.ngens()],
    };
    let mut d = Vec::new();
    for class in 1..=max_class as u32 {
        match extend(&mut st, pres, class)? {
            None => {
                return Err(Error::Resource {
                    reason: format!("layer {class} wider than {MAX_LAYER_WIDTH} generators"),
                    partial: d,
                })
            }
            Some(k) => {
                d.push(k);
                if k == 0 {
                    break;
                }
            }
        }
    }
    let group = PcGroup::trusted(p, st.weights, st.power, st.comm);
    Ok((group, LayerRanks { d }))
}
