//! Power-commutator presentations of finite p-groups and collection from the left.
//!
//! Relations may carry a "tail": a vector over `F_p` in a space of central
//! symbols of order `p`. Plain groups have no tail symbols; the p-covering
//! step of the quotient algorithm uses them to track the multiplicator.

use std::fmt;

use serde::Serialize;

use crate::arith::{inv_mod, is_prime};
use crate::error::{param, Error, Result};

/// Normal word `a_{g1}^{e1} a_{g2}^{e2} ...` with increasing generator indices (0-based).
pub type NormalWord = Vec<(usize, u32)>;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub(crate) struct Rel {
    pub word: NormalWord,
    pub tail: Vec<(usize, u32)>,
}

/// Element of a pc group extended by `ntails` central symbols.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Elt {
    pub e: Vec<u32>,
    pub t: Vec<u32>,
}

impl Elt {
    pub fn is_identity(&self) -> bool {
        self.e.iter().all(|&x| x == 0) && self.t.iter().all(|&x| x == 0)
    }

    pub fn lead(&self) -> Option<usize> {
        self.e.iter().position(|&x| x != 0)
    }

    pub fn word(&self) -> NormalWord {
        self.e.iter().enumerate().filter(|(_, &x)| x != 0).map(|(g, &x)| (g, x)).collect()
    }
}

/// The collection machine. `conj[j][i]` (i < j) is `a_j^{a_i} = a_j [a_j, a_i]`.
#[derive(Clone, Debug)]
pub(crate) struct Collector {
    pub p: u32,
    pub n: usize,
    pub ntails: usize,
    pub power: Vec<Rel>,
    pub conj: Vec<Vec<Rel>>,
}

impl Collector {
    pub fn identity(&self) -> Elt {
        Elt { e: vec![0; self.n], t: vec![0; self.ntails] }
    }

    pub fn gen(&self, g: usize) -> Elt {
        let mut x = self.identity();
        x.e[g] = 1;
        x
    }

    pub fn from_rel(&self, r: &Rel) -> Elt {
        let mut x = self.identity();
        for &(g, e) in &r.word {
            x.e[g] = e;
        }
        self.add_tail(&mut x, &r.tail, 1);
        x
    }

    fn add_tail(&self, x: &mut Elt, tail: &[(usize, u32)], times: u32) {
        let p = self.p as u64;
        for &(s, c) in tail {
            x.t[s] = ((x.t[s] as u64 + c as u64 * times as u64) % p) as u32;
        }
    }

    /// `x <- x a_k`.
    pub fn mul_gen(&self, x: &mut Elt, k: usize) {
        let mut stash: Vec<(usize, u32)> = Vec::new();
        for m in k + 1..self.n {
            if x.e[m] != 0 {
                stash.push((m, std::mem::take(&mut x.e[m])));
            }
        }
        x.e[k] += 1;
        if x.e[k] == self.p {
            x.e[k] = 0;
            // positions above k are zero, so the power word is already collected
            let r = &self.power[k];
            for &(g, e) in &r.word {
                x.e[g] = e;
            }
            self.add_tail(x, &r.tail, 1);
        }
        for (m, e) in stash {
            let r = &self.conj[m][k];
            for _ in 0..e {
                self.mul_word(x, &r.word);
            }
            self.add_tail(x, &r.tail, e);
        }
    }

    pub fn mul_word(&self, x: &mut Elt, w: &[(usize, u32)]) {
        for &(g, e) in w {
            if (g + 1..self.n).all(|m| x.e[m] == 0) && x.e[g] + e < self.p {
                x.e[g] += e;
                continue;
            }
            for _ in 0..e {
                self.mul_gen(x, g);
            }
        }
    }

    pub fn mul(&self, x: &mut Elt, y: &Elt) {
        self.mul_word(x, &y.word());
        let p = self.p;
        for (a, b) in x.t.iter_mut().zip(&y.t) {
            *a = (*a + b) % p;
        }
    }

    pub fn product(&self, x: &Elt, y: &Elt) -> Elt {
        let mut z = x.clone();
        self.mul(&mut z, y);
        z
    }

    pub fn inverse(&self, x: &Elt) -> Elt {
        let mut c = x.clone();
        let mut z = self.identity();
        for k in 0..self.n {
            if c.e[k] != 0 {
                let w = [(k, self.p - c.e[k])];
                self.mul_word(&mut c, &w);
                self.mul_word(&mut z, &w);
            }
        }
        // c = x z has trivial exponents; its tail is cancelled by a central correction
        for (a, b) in z.t.iter_mut().zip(&c.t) {
            *a = (*a + self.p - b) % self.p;
        }
        z
    }

    pub fn pow(&self, x: &Elt, e: u64) -> Elt {
        let mut z = self.identity();
        for _ in 0..e {
            self.mul(&mut z, x);
        }
        z
    }

    /// `[x, y] = x^-1 y^-1 x y`.
    pub fn comm(&self, x: &Elt, y: &Elt) -> Elt {
        let mut z = self.inverse(x);
        self.mul(&mut z, &self.inverse(y));
        self.mul(&mut z, x);
        self.mul(&mut z, y);
        z
    }

    fn pair(&self, lhs: Elt, rhs: Elt, out: &mut Vec<(Elt, Elt)>) {
        if lhs != rhs {
            out.push((lhs, rhs));
        }
    }

    /// Runs the standard associativity tests and returns every disagreeing pair.
    /// Triples whose weight sum exceeds `max_weight` are skipped.
    pub fn consistency_failures(&self, weights: &[u32], max_weight: u32) -> Vec<(Elt, Elt)> {
        let mut out = Vec::new();
        let n = self.n;
        for k in 0..n {
            for j in 0..k {
                for i in 0..j {
                    if weights[i] + weights[j] + weights[k] > max_weight {
                        continue;
                    }
                    let mut lhs = self.gen(k);
                    self.mul_gen(&mut lhs, j);
                    self.mul_gen(&mut lhs, i);
                    let mut ji = self.gen(j);
                    self.mul_gen(&mut ji, i);
                    let mut rhs = self.gen(k);
                    self.mul(&mut rhs, &ji);
                    self.pair(lhs, rhs, &mut out);
                }
            }
        }
        for j in 0..n {
            let pj = self.from_rel(&self.power[j]);
            for i in 0..j {
                // (a_j^{p-1} a_j) a_i = a_j^{p-1} (a_j a_i)
                let mut lhs = pj.clone();
                self.mul_gen(&mut lhs, i);
                let mut ji = self.gen(j);
                self.mul_gen(&mut ji, i);
                let mut rhs = self.identity();
                rhs.e[j] = self.p - 1;
                self.mul(&mut rhs, &ji);
                self.pair(lhs, rhs, &mut out);
                // (a_j a_i^{p-1}) a_i = a_j (a_i^p)
                let mut lhs = self.gen(j);
                for _ in 0..self.p {
                    self.mul_gen(&mut lhs, i);
                }
                let mut rhs = self.gen(j);
                self.mul(&mut rhs, &self.from_rel(&self.power[i]));
                self.pair(lhs, rhs, &mut out);
            }
            // a_j^p a_j = a_j a_j^p
            let mut lhs = pj.clone();
            self.mul_gen(&mut lhs, j);
            let mut rhs = self.gen(j);
            self.mul(&mut rhs, &pj);
            self.pair(lhs, rhs, &mut out);
        }
        out
    }
}

/// A finite p-group given by a power-commutator presentation on `ngens` generators.
#[derive(Clone, Debug, Serialize)]
pub struct PcGroup {
    p: u32,
    weights: Vec<u32>,
    /// `a_i^p`.
    power: Vec<NormalWord>,
    /// `comm[j][i] = [a_j, a_i]` for `i < j`.
    comm: Vec<Vec<NormalWord>>,
    consistent: bool,
    #[serde(skip)]
    col: Collector,
}

impl PartialEq for PcGroup {
    fn eq(&self, o: &Self) -> bool {
        (self.p, &self.weights, &self.power, &self.comm) == (o.p, &o.weights, &o.power, &o.comm)
    }
}
impl Eq for PcGroup {}

fn check_word(w: &NormalWord, above: usize, n: usize, p: u32) -> Result<()> {
    let mut last = above;
    for &(g, e) in w {
        if g <= last || g >= n {
            return param(format!("relation word must use increasing generators above a{}", above + 1));
        }
        if e == 0 || e >= p {
            return param(format!("exponent {e} outside 1..{p}"));
        }
        last = g;
    }
    Ok(())
}

fn build_collector(p: u32, power: &[NormalWord], comm: &[Vec<NormalWord>]) -> Collector {
    let n = power.len();
    let conj = (0..n)
        .map(|j| {
            (0..j)
                .map(|i| {
                    let mut w = vec![(j, 1)];
                    w.extend_from_slice(&comm[j][i]);
                    Rel { word: w, tail: Vec::new() }
                })
                .collect()
        })
        .collect();
    Collector {
        p,
        n,
        ntails: 0,
        power: power.iter().map(|w| Rel { word: w.clone(), tail: Vec::new() }).collect(),
        conj,
    }
}

impl PcGroup {
    /// Builds a group from relations and runs the full consistency test.
    /// Words must involve only generators above the relation's own (power: above `i`; commutator: above `j`).
    pub fn new(p: u32, weights: Vec<u32>, power: Vec<NormalWord>, comm: Vec<Vec<NormalWord>>) -> Result<Self> {
        if !is_prime(p as u64) {
            return param(format!("{p} is not prime"));
        }
        let n = power.len();
        if weights.len() != n || comm.len() != n {
            return param("relation tables do not match the generator count");
        }
        for (i, w) in power.iter().enumerate() {
            check_word(w, i, n, p)?;
        }
        for (j, row) in comm.iter().enumerate() {
            if row.len() != j {
                return param(format!("commutator row {} must have {} entries", j + 1, j));
            }
            for w in row {
                check_word(w, j, n, p)?;
            }
        }
        let col = build_collector(p, &power, &comm);
        let consistent = col.consistency_failures(&weights, u32::MAX).is_empty();
        Ok(PcGroup { p, weights, power, comm, consistent, col })
    }

    /// Assembles a group already known to be consistent.
    pub(crate) fn trusted(p: u32, weights: Vec<u32>, power: Vec<NormalWord>, comm: Vec<Vec<NormalWord>>) -> Self {
        let col = build_collector(p, &power, &comm);
        PcGroup { p, weights, power, comm, consistent: true, col }
    }

    /// Elementary abelian or cyclic building blocks: `Z/p^e1 × Z/p^e2 × ...`.
    pub fn abelian(p: u32, exponents: &[u32]) -> Result<Self> {
        let n: u32 = exponents.iter().sum();
        let mut power = Vec::new();
        let mut weights = Vec::new();
        // cyclic factors interleaved by weight would be nicer; a block layout is still a valid pc series
        let mut base = 0usize;
        for &e in exponents {
            for s in 0..e as usize {
                power.push(if s + 1 < e as usize { vec![(base + s + 1, 1)] } else { Vec::new() });
                weights.push(s as u32 + 1);
            }
            base += e as usize;
        }
        let comm = (0..n as usize).map(|j| vec![Vec::new(); j]).collect();
        PcGroup::new(p, weights, power, comm)
    }

    fn collector(&self) -> &Collector {
        &self.col
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn ngens(&self) -> usize {
        self.power.len()
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn is_consistent(&self) -> bool {
        self.consistent
    }

    /// `log_p |S|`.
    pub fn log_order(&self) -> usize {
        self.ngens()
    }

    pub fn power_relation(&self, i: usize) -> &NormalWord {
        &self.power[i]
    }

    /// `[a_j, a_i]`, `i < j`.
    pub fn commutator_relation(&self, j: usize, i: usize) -> &NormalWord {
        &self.comm[j][i]
    }

    pub fn identity(&self) -> Elt {
        self.collector().identity()
    }

    pub fn gen(&self, g: usize) -> Elt {
        self.collector().gen(g)
    }

    pub fn from_exponents(&self, e: Vec<u32>) -> Elt {
        Elt { e, t: Vec::new() }
    }

    pub fn mul(&self, x: &Elt, y: &Elt) -> Elt {
        self.collector().product(x, y)
    }

    pub fn inverse(&self, x: &Elt) -> Elt {
        self.collector().inverse(x)
    }

    pub fn pow(&self, x: &Elt, e: u64) -> Elt {
        self.collector().pow(x, e)
    }

    pub fn comm(&self, x: &Elt, y: &Elt) -> Elt {
        self.collector().comm(x, y)
    }

    /// Re-runs every associativity test (no weight pruning).
    pub fn check_consistency(&self) -> bool {
        self.collector().consistency_failures(&self.weights, u32::MAX).is_empty()
    }

    /// All `p^n` elements in lexicographic exponent order.
    pub fn elements(&self) -> Vec<Elt> {
        let n = self.ngens();
        let total = (self.p as usize).pow(n as u32);
        (0..total)
            .map(|mut idx| {
                let mut e = vec![0u32; n];
                for g in (0..n).rev() {
                    e[g] = (idx % self.p as usize) as u32;
                    idx /= self.p as usize;
                }
                self.from_exponents(e)
            })
            .collect()
    }

    /// Text form read by [`PcGroup::parse`].
    pub fn to_text(&self) -> String {
        let w = |w: &NormalWord| {
            if w.is_empty() {
                "1".to_string()
            } else {
                w.iter().map(|&(g, e)| if e == 1 { format!("{}", g + 1) } else { format!("{}^{}", g + 1, e) }).collect::<Vec<_>>().join(" ")
            }
        };
        let mut s = format!("pc {} {}\n", self.p, self.ngens());
        s.push_str(&format!("weights {}\n", self.weights.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")));
        for (i, r) in self.power.iter().enumerate() {
            if !r.is_empty() {
                s.push_str(&format!("pow {} = {}\n", i + 1, w(r)));
            }
        }
        for (j, row) in self.comm.iter().enumerate() {
            for (i, r) in row.iter().enumerate() {
                if !r.is_empty() {
                    s.push_str(&format!("comm {} {} = {}\n", j + 1, i + 1, w(r)));
                }
            }
        }
        s
    }

    /// Parses `pc P N`, optional `weights w1 .. wN`, then `pow i = word` and `comm j i = word` lines.
    /// Words are space-separated `g` or `g^e` with 1-based generators; `1` is the empty word.
    /// Unlisted relations are trivial.
    pub fn parse(text: &str) -> Result<Self> {
        let perr = |line: usize, msg: String| Error::Parse { line, msg };
        let mut header: Option<(u32, usize)> = None;
        let mut weights: Option<Vec<u32>> = None;
        let mut power = Vec::new();
        let mut comm: Vec<Vec<NormalWord>> = Vec::new();
        for (ln, raw) in text.lines().enumerate() {
            let ln = ln + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (lhs, rhs) = match line.split_once('=') {
                Some((l, r)) => (l.trim(), Some(r.trim())),
                None => (line, None),
            };
            let toks: Vec<&str> = lhs.split_whitespace().collect();
            let num = |s: &str| s.parse::<usize>().map_err(|_| perr(ln, format!("expected a number, found {s:?}")));
            match (toks[0], &header) {
                ("pc", None) if toks.len() == 3 => {
                    let p = num(toks[1])? as u32;
                    let n = num(toks[2])?;
                    header = Some((p, n));
                    power = vec![Vec::new(); n];
                    comm = (0..n).map(|j| vec![Vec::new(); j]).collect();
                }
                ("weights", Some((_, n))) => {
                    let w = toks[1..].iter().map(|t| num(t).map(|x| x as u32)).collect::<Result<Vec<_>>>()?;
                    if w.len() != *n {
                        return Err(perr(ln, format!("expected {n} weights")));
                    }
                    weights = Some(w);
                }
                (kind @ ("pow" | "comm"), Some((p, n))) => {
                    let rhs = rhs.ok_or_else(|| perr(ln, "missing '='".into()))?;
                    let word = parse_word(rhs, *p, *n).map_err(|m| perr(ln, m))?;
                    let idx = toks[1..].iter().map(|t| num(t)).collect::<Result<Vec<_>>>()?;
                    match (kind, idx.as_slice()) {
                        ("pow", [i]) if (1..=*n).contains(i) => power[i - 1] = word,
                        ("comm", [j, i]) if 1 <= *i && i < j && *j <= *n => comm[j - 1][i - 1] = word,
                        _ => return Err(perr(ln, format!("bad relation indices {:?}", idx))),
                    }
                }
                _ => return Err(perr(ln, format!("unexpected line {line:?}"))),
            }
        }
        let (p, n) = header.ok_or_else(|| perr(0, "missing 'pc P N' header".into()))?;
        PcGroup::new(p, weights.unwrap_or_else(|| vec![1; n]), power, comm)
    }
}

fn parse_word(s: &str, p: u32, n: usize) -> std::result::Result<NormalWord, String> {
    if s == "1" {
        return Ok(Vec::new());
    }
    let mut e = vec![0u64; n];
    for tok in s.split_whitespace() {
        let (g, x) = match tok.split_once('^') {
            Some((g, x)) => (g, x.parse::<u64>().map_err(|_| format!("bad exponent in {tok:?}"))?),
            None => (tok, 1),
        };
        let g: usize = g.parse().map_err(|_| format!("bad generator in {tok:?}"))?;
        if !(1..=n).contains(&g) {
            return Err(format!("generator {g} out of range"));
        }
        e[g - 1] += x;
    }
    let mut w = Vec::new();
    for (g, x) in e.into_iter().enumerate() {
        if x % p as u64 != x {
            return Err(format!("exponent of generator {} must be below {p}", g + 1));
        }
        if x != 0 {
            w.push((g, x as u32));
        }
    }
    Ok(w)
}

impl fmt::Display for PcGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Induced pc sequence of a subgroup, indexed by leading generator.
#[derive(Clone, Debug)]
pub struct SubgroupSeq<'a> {
    group: &'a PcGroup,
    table: Vec<Option<Elt>>,
}

impl<'a> SubgroupSeq<'a> {
    /// Closure of `gens`; with `normal`, the normal closure.
    pub fn generate(group: &'a PcGroup, gens: Vec<Elt>, normal: bool) -> Self {
        let mut seq = SubgroupSeq { group, table: vec![None; group.ngens()] };
        let p = group.p as u64;
        let mut queue = gens;
        while let Some(x) = queue.pop() {
            let y = seq.sift(x);
            let Some(l) = y.lead() else { continue };
            let y = group.pow(&y, inv_mod(y.e[l] as u64, p));
            queue.push(group.pow(&y, p));
            for z in seq.table.iter().flatten() {
                queue.push(group.comm(&y, z));
            }
            if normal {
                for g in 0..group.ngens() {
                    queue.push(group.comm(&y, &group.gen(g)));
                }
            }
            seq.table[l] = Some(y);
        }
        seq
    }

    /// Reduces `x` by the sequence; the identity comes back iff `x` is a member.
    pub fn sift(&self, mut x: Elt) -> Elt {
        while let Some(l) = x.lead() {
            match &self.table[l] {
                Some(t) => {
                    let k = self.group.p - x.e[l];
                    x = self.group.mul(&x, &self.group.pow(t, k as u64));
                }
                None => break,
            }
        }
        x
    }

    pub fn contains(&self, x: &Elt) -> bool {
        self.sift(x.clone()).lead().is_none()
    }

    /// `log_p` of the subgroup order.
    pub fn log_order(&self) -> usize {
        self.table.iter().flatten().count()
    }

    pub fn gens(&self) -> Vec<Elt> {
        self.table.iter().flatten().cloned().collect()
    }
}

/// `S/S^p` abelian for odd `p`, `S/S^4` abelian for `p = 2`.
///
/// The relevant power subgroup is the normal closure of the pc generators' powers:
/// it is contained in `S^p` (resp. `S^4`), and for powerful `S` it is all of it.
pub fn is_powerful(s: &PcGroup) -> bool {
    let e = if s.p == 2 { 4 } else { s.p as u64 };
    let powers = (0..s.ngens()).map(|g| s.pow(&s.gen(g), e)).collect();
    let m = SubgroupSeq::generate(s, powers, true);
    (0..s.ngens()).all(|j| (0..j).all(|i| m.contains(&s.comm(&s.gen(j), &s.gen(i)))))
}
