//! Pro-p tools: lower exponent-p central quotients, powerful p-groups, growth of `d_k`.

pub mod analysis;
pub mod pc;
pub mod pquot;

pub use analysis::{
    batch_csv, batch_dir, batch_row, classify, dk_series_and_classify, exhaustion_check, is_p_powerful, witt_cumulative,
    BatchRow, Conclusion, GrowthLabel, Verdict, HYP_BETTI, HYP_COPRIME, HYP_POWERFUL,
};
pub use pc::{is_powerful, Elt, NormalWord, PcGroup, SubgroupSeq};
pub use pquot::{p_quotient, LayerRanks, MAX_CLASS, MAX_LAYER_WIDTH};

#[cfg(test)]
mod oracle_tests {
    use std::collections::{HashMap, HashSet};

    use super::pc::tests::extraspecial27;
    use super::*;
    use crate::fpcore::Presentation;
    use proptest::prelude::*;

    /// Group given by its full multiplication table.
    struct Table {
        p: u32,
        mul: Vec<Vec<usize>>,
        inv: Vec<usize>,
        gens: Vec<usize>,
    }

    impl Table {
        fn from_pc(g: &PcGroup) -> Table {
            let elems = g.elements();
            let index: HashMap<Vec<u32>, usize> = elems.iter().enumerate().map(|(i, x)| (x.e.clone(), i)).collect();
            let mul = elems.iter().map(|x| elems.iter().map(|y| index[&g.mul(x, y).e]).collect()).collect();
            let inv = elems.iter().map(|x| index[&g.inverse(x).e]).collect();
            let gens = (0..g.ngens()).map(|k| index[&g.gen(k).e]).collect();
            Table { p: g.prime(), mul, inv, gens }
        }

        /// Unitriangular 3x3 matrices over `F_3`, stored as `(x, y, z)` for the entries above the diagonal.
        fn heisenberg3() -> Table {
            let elems: Vec<[u32; 3]> =
                (0..27).map(|i| [i / 9, (i / 3) % 3, i % 3]).collect();
            let idx = |m: [u32; 3]| (m[0] * 9 + m[1] * 3 + m[2]) as usize;
            let prod = |a: [u32; 3], b: [u32; 3]| [(a[0] + b[0]) % 3, (a[1] + b[1]) % 3, (a[2] + b[2] + a[0] * b[1]) % 3];
            let mul = elems.iter().map(|&a| elems.iter().map(|&b| idx(prod(a, b))).collect()).collect();
            let inv = elems
                .iter()
                .map(|&a| elems.iter().position(|&b| prod(a, b) == [0, 0, 0]).unwrap())
                .collect();
            Table { p: 3, mul, inv, gens: vec![idx([1, 0, 0]), idx([0, 1, 0])] }
        }

        fn pow(&self, x: usize, e: u32) -> usize {
            (0..e).fold(0, |acc, _| self.mul[acc][x])
        }

        fn comm(&self, x: usize, y: usize) -> usize {
            self.mul[self.mul[self.inv[x]][self.inv[y]]][self.mul[x][y]]
        }

        fn closure(&self, gens: impl IntoIterator<Item = usize>) -> HashSet<usize> {
            let mut set: HashSet<usize> = HashSet::from([0]);
            let gens: Vec<usize> = gens.into_iter().collect();
            let mut frontier = vec![0];
            while let Some(x) = frontier.pop() {
                for &g in &gens {
                    let y = self.mul[x][g];
                    if set.insert(y) {
                        frontier.push(y);
                    }
                }
            }
            set
        }

        /// `S/S^p` (or `S/S^4`) abelian, with `S^p` generated by every p-th power.
        fn powerful_by_definition(&self) -> bool {
            let e = if self.p == 2 { 4 } else { self.p };
            let powers = self.closure((0..self.mul.len()).map(|x| self.pow(x, e)));
            (0..self.mul.len()).all(|x| (0..self.mul.len()).all(|y| powers.contains(&self.comm(x, y))))
        }

        /// `log_p [H : Φ(H)]`.
        fn rank(&self, h: &HashSet<usize>) -> u32 {
            let frattini = self.closure(
                h.iter().map(|&x| self.pow(x, self.p)).chain(h.iter().flat_map(|&x| h.iter().map(move |&y| (x, y))).map(|(x, y)| self.comm(x, y))),
            );
            let mut k = 0;
            let mut ratio = h.len() / frattini.len();
            while ratio > 1 {
                ratio /= self.p as usize;
                k += 1;
            }
            k
        }

        fn subgroups(&self) -> Vec<HashSet<usize>> {
            let mut seen: HashSet<Vec<usize>> = HashSet::new();
            let mut out = Vec::new();
            let mut queue = vec![HashSet::from([0usize])];
            while let Some(h) = queue.pop() {
                let mut key: Vec<usize> = h.iter().copied().collect();
                key.sort_unstable();
                if !seen.insert(key) {
                    continue;
                }
                for x in 0..self.mul.len() {
                    if !h.contains(&x) {
                        queue.push(self.closure(h.iter().copied().chain([x])));
                    }
                }
                out.push(h);
            }
            out
        }
    }

    /// Definitional test without a table: every p-th (or 4th) power of every element,
    /// closed under products, must contain all generator commutators.
    fn powerful_by_enumeration(g: &PcGroup) -> bool {
        let e = if g.prime() == 2 { 4 } else { g.prime() as u64 };
        let powers: HashSet<Vec<u32>> = g.elements().iter().map(|x| g.pow(x, e).e).collect();
        let gens: Vec<Elt> = powers.iter().map(|e| g.from_exponents(e.clone())).collect();
        let mut set: HashSet<Vec<u32>> = HashSet::from([g.identity().e]);
        let mut frontier = vec![g.identity()];
        while let Some(x) = frontier.pop() {
            for y in &gens {
                let z = g.mul(&x, y);
                if set.insert(z.e.clone()) {
                    frontier.push(z);
                }
            }
        }
        (0..g.ngens()).all(|j| (0..j).all(|i| set.contains(&g.comm(&g.gen(j), &g.gen(i)).e)))
    }

    fn pc(text: &str) -> PcGroup {
        let g = PcGroup::parse(text).unwrap();
        assert!(g.is_consistent(), "{text}");
        g
    }

    /// Small powerful groups of order at most 3^4.
    fn powerful_corpus() -> Vec<PcGroup> {
        vec![
            PcGroup::abelian(3, &[2]).unwrap(),
            PcGroup::abelian(3, &[1, 2]).unwrap(),
            PcGroup::abelian(3, &[2, 2]).unwrap(),
            PcGroup::abelian(3, &[1, 3]).unwrap(),
            PcGroup::abelian(3, &[1, 1, 1, 1]).unwrap(),
            // a^9 = b^3 = 1, [b, a] = a^3
            pc("pc 3 3\nweights 1 1 2\npow 1 = 3\ncomm 2 1 = 3\n"),
            // a^9 = b^9 = 1, [b, a] = a^3
            pc("pc 3 4\nweights 1 1 2 2\npow 1 = 3\npow 2 = 4\ncomm 2 1 = 3\n"),
        ]
    }

    #[test]
    fn heisenberg_models_agree() {
        let m = Table::heisenberg3();
        assert!(!m.powerful_by_definition());
        let g = extraspecial27();
        let t = Table::from_pc(&g);
        assert_eq!(t.powerful_by_definition(), is_powerful(&g));
        assert!(!is_powerful(&g));
        // both have exponent 3 and a centre of order 3
        for tab in [&m, &t] {
            assert!((0..27).all(|x| tab.pow(x, 3) == 0));
            let centre = (0..27).filter(|&x| (0..27).all(|y| tab.mul[x][y] == tab.mul[y][x])).count();
            assert_eq!(centre, 3);
        }
        assert_ne!(m.comm(m.gens[0], m.gens[1]), 0);
    }

    #[test]
    fn definitional_agreement_on_corpus() {
        let mut corpus = powerful_corpus();
        corpus.push(extraspecial27());
        corpus.push(p_quotient(&Presentation::free(2).unwrap(), 5, 2).unwrap().0);
        corpus.push(p_quotient(&Presentation::free(2).unwrap(), 2, 2).unwrap().0);
        corpus.push(p_quotient(&Presentation::from_letters(2, &["aaaa", "aaBB", "abaB"]).unwrap(), 2, 3).unwrap().0);
        for g in &corpus {
            assert_eq!(is_powerful(g), powerful_by_enumeration(g), "{g}");
            if g.log_order() <= 5 {
                assert_eq!(is_powerful(g), Table::from_pc(g).powerful_by_definition(), "{g}");
            }
        }
        assert!(powerful_corpus().iter().all(is_powerful));
        // the class-2 free 5-quotient
        assert!(!is_powerful(&corpus[8]));
    }

    #[test]
    fn subgroup_ranks_bounded_in_powerful_groups() {
        for g in powerful_corpus() {
            let t = Table::from_pc(&g);
            assert!(t.powerful_by_definition());
            let whole: HashSet<usize> = (0..t.mul.len()).collect();
            let ds = t.rank(&whole);
            for h in t.subgroups() {
                assert!(t.rank(&h) <= ds, "{g}");
            }
        }
        let t = Table::from_pc(&extraspecial27());
        assert_eq!(t.rank(&(0..27).collect()), 2);
    }

    fn letters() -> impl Strategy<Value = String> {
        proptest::collection::vec(prop_oneof![Just('a'), Just('b'), Just('A'), Just('B')], 1..10)
            .prop_map(|v| v.into_iter().collect())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn random_quotients_match_definition(rels in proptest::collection::vec(letters(), 1..4), class in 1usize..4) {
            let rels: Vec<&str> = rels.iter().map(String::as_str).collect();
            let g = Presentation::from_letters(2, &rels).unwrap();
            let (s, _) = p_quotient(&g, 3, class).unwrap();
            prop_assume!(s.log_order() <= 5);
            prop_assert_eq!(is_powerful(&s), Table::from_pc(&s).powerful_by_definition());
        }
    }
}
