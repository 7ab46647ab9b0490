//! Permutations, orbits with Schreier trees, and Schreier–Sims group orders.
//!
//! Permutations act on the right: `x` goes to `p.apply(x)`, and `p.then(q)`
//! applies `p` first.


use num_bigint::BigUint;
use num_traits::One;

use crate::error::{param, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn new(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            let x = x as usize;
            if x >= n || seen[x] {
                return param("images do not form a bijection");
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    pub(crate) fn from_images_unchecked(images: Vec<u32>) -> Self {
        Permutation { images }
    }

    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n as u32).collect() }
    }

    /// Builds from disjoint cycles on `0..n`.
    pub fn from_cycles(n: usize, cycles: &[&[u32]]) -> Result<Self> {
        let mut images: Vec<u32> = (0..n as u32).collect();
        for cyc in cycles {
            for (i, &x) in cyc.iter().enumerate() {
                if x as usize >= n {
                    return param(format!("point {x} outside degree {n}"));
                }
                images[x as usize] = cyc[(i + 1) % cyc.len()];
            }
        }
        Self::new(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    /// Apply `self`, then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation { images: self.images.iter().map(|&x| other.images[x as usize]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    fn first_moved(&self) -> Option<usize> {
        self.images.iter().enumerate().find(|(i, &x)| *i as u32 != x).map(|(i, _)| i)
    }

    /// In-place `self = self.then(other)`.
    fn then_assign(&mut self, other: &Permutation) {
        for x in self.images.iter_mut() {
            *x = other.images[*x as usize];
        }
    }
}

/// Tree edge: the point is reached from `parent` by generator `gen` (0-based)
/// applied with sign `sign` (+1 forward, -1 inverse).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TreeEdge {
    pub parent: usize,
    pub gen: usize,
    pub sign: i8,
}

/// Orbit in BFS discovery order with the Schreier tree that produced it.
#[derive(Clone, Debug)]
pub struct Orbit {
    pub base: usize,
    pub points: Vec<usize>,
    /// `edges[x]` for every orbit point except the base.
    pub edges: Vec<Option<TreeEdge>>,
    /// Position of each point in `points`, `usize::MAX` if outside the orbit.
    pub position: Vec<usize>,
}

impl Orbit {
    pub fn contains(&self, x: usize) -> bool {
        x < self.position.len() && self.position[x] != usize::MAX
    }

    /// Word (1-based signed generator letters) carrying the base to `x`.
    pub fn transversal_word(&self, x: usize) -> Option<Vec<i32>> {
        if !self.contains(x) {
            return None;
        }
        let mut letters = Vec::new();
        let mut cur = x;
        while let Some(e) = self.edges[cur] {
            letters.push((e.gen as i32 + 1) * e.sign as i32);
            cur = e.parent;
        }
        letters.reverse();
        Some(letters)
    }
}

fn check_degrees(gens: &[Permutation]) -> Result<usize> {
    let n = gens.first().map_or(0, Permutation::degree);
    if gens.iter().any(|g| g.degree() != n) {
        return param("generators have different degrees");
    }
    Ok(n)
}

/// BFS orbit of `base`; generators are tried in index order, forward before inverse.
pub fn orbit_and_transversal(gens: &[Permutation], base: usize) -> Result<Orbit> {
    let n = check_degrees(gens)?.max(if gens.is_empty() { base + 1 } else { 0 });
    if base >= n {
        return param(format!("base point {base} outside degree {n}"));
    }
    let invs: Vec<Permutation> = gens.iter().map(Permutation::inverse).collect();
    let mut position = vec![usize::MAX; n];
    let mut edges = vec![None; n];
    let mut points = vec![base];
    position[base] = 0;
    let mut head = 0;
    while head < points.len() {
        let x = points[head];
        head += 1;
        for (g, (fwd, inv)) in gens.iter().zip(&invs).enumerate() {
            for (sign, perm) in [(1i8, fwd), (-1i8, inv)] {
                let y = perm.apply(x);
                if position[y] == usize::MAX {
                    position[y] = points.len();
                    points.push(y);
                    edges[y] = Some(TreeEdge { parent: x, gen: g, sign });
                }
            }
        }
    }
    Ok(Orbit { base, points, edges, position })
}

struct Level {
    base: usize,
    /// ids into the strong generating set; append-only
    gens: Vec<usize>,
    orbit: Vec<usize>,
    /// (parent, strong generator id) for each orbit point but the base
    tree: Vec<Option<(u32, u32)>>,
    in_orbit: Vec<bool>,
    /// per orbit position: how many of `gens` have had their Schreier generator sifted
    done: Vec<usize>,
}

impl Level {
    fn new(base: usize, n: usize) -> Self {
        let mut in_orbit = vec![false; n];
        in_orbit[base] = true;
        Level { base, gens: Vec::new(), orbit: vec![base], tree: vec![None; n], in_orbit, done: vec![0] }
    }
}

/// Deterministic Schreier–Sims stabilizer chain.
pub struct StabChain {
    n: usize,
    strong: Vec<Permutation>,
    strong_inv: Vec<Permutation>,
    levels: Vec<Level>,
}

impl StabChain {
    /// Builds a complete chain; with `target` set, stops as soon as the
    /// group order is known to be at least `target`.
    fn build(gens: &[Permutation], target: Option<&BigUint>) -> Result<(StabChain, bool)> {
        let n = check_degrees(gens)?;
        let mut chain = StabChain { n, strong: Vec::new(), strong_inv: Vec::new(), levels: Vec::new() };
        for g in gens {
            if !g.is_identity() && chain.sift(g.clone(), 0).0.first_moved().is_some() {
                chain.add_strong(g.clone(), 0);
            }
        }
        if chain.levels.is_empty() {
            return Ok((chain, target.map_or(true, |t| t <= &BigUint::one())));
        }
        let mut i = chain.levels.len() - 1;
        loop {
            chain.extend_orbit(i);
            if let Some(t) = target {
                if &chain.order_lower_bound() >= t {
                    return Ok((chain, true));
                }
            }
            match chain.check_level(i) {
                Some(j) => i = j,
                None if i == 0 => break,
                None => i -= 1,
            }
        }
        let reached = target.map_or(true, |t| &chain.order() >= t);
        Ok((chain, reached))
    }

    fn add_strong(&mut self, g: Permutation, from_level: usize) -> usize {
        let id = self.strong.len();
        self.strong_inv.push(g.inverse());
        // the generator fixes the base points of levels < from_level; find the deepest level it joins
        let mut lvl = from_level;
        while lvl < self.levels.len() && g.apply(self.levels[lvl].base) == self.levels[lvl].base {
            lvl += 1;
        }
        if lvl == self.levels.len() {
            let b = g.first_moved().expect("identity never enters the strong set");
            self.levels.push(Level::new(b, self.n));
        }
        self.strong.push(g);
        for l in 0..=lvl {
            self.levels[l].gens.push(id);
        }
        lvl
    }

    fn extend_orbit(&mut self, i: usize) {
        let level = &mut self.levels[i];
        let mut head = 0;
        while head < level.orbit.len() {
            let x = level.orbit[head];
            head += 1;
            for &gid in &level.gens {
                let y = self.strong[gid].apply(x);
                if !level.in_orbit[y] {
                    level.in_orbit[y] = true;
                    level.tree[y] = Some((x as u32, gid as u32));
                    level.orbit.push(y);
                    level.done.push(0);
                }
            }
        }
    }

    fn transversal(&self, i: usize, x: usize) -> Permutation {
        let level = &self.levels[i];
        let mut path = Vec::new();
        let mut cur = x;
        while let Some((parent, gid)) = level.tree[cur] {
            path.push(gid as usize);
            cur = parent as usize;
        }
        let mut u = Permutation::identity(self.n);
        for &gid in path.iter().rev() {
            u.then_assign(&self.strong[gid]);
        }
        u
    }

    /// Strips `h` through levels `from..`; returns the residue and the level
    /// where it left the chain (`levels.len()` if it passed every level).
    fn sift(&self, mut h: Permutation, from: usize) -> (Permutation, usize) {
        for (i, level) in self.levels.iter().enumerate().skip(from) {
            let mut b = h.apply(level.base);
            if !level.in_orbit[b] {
                return (h, i);
            }
            while let Some((parent, gid)) = level.tree[b] {
                h.then_assign(&self.strong_inv[gid as usize]);
                b = parent as usize;
            }
        }
        let depth = self.levels.len();
        (h, depth)
    }

    /// Sifts unchecked Schreier generators of level `i`. Returns the level
    /// that received a new strong generator, if any.
    fn check_level(&mut self, i: usize) -> Option<usize> {
        for pos in 0..self.levels[i].orbit.len() {
            while self.levels[i].done[pos] < self.levels[i].gens.len() {
                let level = &self.levels[i];
                let x = level.orbit[pos];
                let gid = level.gens[level.done[pos]];
                let s = &self.strong[gid];
                let y = s.apply(x);
                let is_tree_edge = level.tree[y] == Some((x as u32, gid as u32));
                if !is_tree_edge {
                    let mut h = self.transversal(i, x);
                    h.then_assign(s);
                    let (res, j) = self.sift(h, i);
                    // the Schreier generator fixes level i's base, so sifting from i
                    // either passes level i or the orbit is stale
                    if !res.is_identity() {
                        debug_assert!(j > i || !self.levels[i].in_orbit[res.apply(self.levels[i].base)]);
                        let lvl = self.add_strong(res, i + 1);
                        return Some(lvl.max(i + 1).min(self.levels.len() - 1));
                    }
                }
                self.levels[i].done[pos] += 1;
            }
        }
        None
    }

    fn order_lower_bound(&self) -> BigUint {
        self.levels.iter().fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    pub fn order(&self) -> BigUint {
        self.order_lower_bound()
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub fn orbit_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    /// Complete chain for the group generated by `gens`.
    pub fn new(gens: &[Permutation]) -> Result<StabChain> {
        Ok(Self::build(gens, None)?.0)
    }

    /// Membership test against a complete chain.
    pub fn contains(&self, g: &Permutation) -> bool {
        g.degree() == self.n && self.sift(g.clone(), 0).0.is_identity()
    }
}

/// Exact order of the group generated by `gens` (1 for the empty set).
pub fn schreier_sims_order(gens: &[Permutation]) -> Result<BigUint> {
    Ok(StabChain::new(gens)?.order())
}

/// Whether `|<gens>| >= target`, stopping early once the bound is reached.
pub fn order_at_least(gens: &[Permutation], target: &BigUint) -> Result<bool> {
    Ok(StabChain::build(gens, Some(target))?.1)
}
