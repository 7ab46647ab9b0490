use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A word in the free group: `+i` is generator `i` (1-based), `-i` its inverse.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<i32>);

impl Word {
    pub fn new(letters: Vec<i32>) -> Self {
        Word(letters)
    }

    pub fn letters(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Checks that every letter is nonzero and at most `ngens` in absolute value.
    pub fn check(&self, ngens: usize) -> Result<()> {
        for &l in &self.0 {
            if l == 0 || l.unsigned_abs() as usize > ngens {
                return Err(Error::MalformedWord { letter: l, ngens });
            }
        }
        Ok(())
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|&l| -l).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// `self^e`; negative exponents use the inverse word.
    pub fn pow(&self, e: i64) -> Word {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut v = Vec::with_capacity(base.len() * e.unsigned_abs() as usize);
        for _ in 0..e.unsigned_abs() {
            v.extend_from_slice(&base.0);
        }
        Word(v)
    }

    /// Free reduction without range checking.
    pub fn reduced(&self) -> Word {
        let mut out: Vec<i32> = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    /// Freely and cyclically reduced conjugate.
    pub fn cyclically_reduced(&self) -> Word {
        let w = self.reduced().0;
        let (mut lo, mut hi) = (0usize, w.len());
        while hi - lo >= 2 && w[lo] == -w[hi - 1] {
            lo += 1;
            hi -= 1;
        }
        Word(w[lo..hi].to_vec())
    }

    /// Exponent sum of each generator, indexed `0..ngens`.
    pub fn exponent_sums(&self, ngens: usize) -> Vec<i64> {
        let mut v = vec![0i64; ngens];
        for &l in &self.0 {
            v[l.unsigned_abs() as usize - 1] += l.signum() as i64;
        }
        v
    }

    /// Parses letters `a..z` (generators 1..26) and `A..Z` (their inverses).
    pub fn parse_letters(s: &str) -> Result<Word> {
        let mut v = Vec::with_capacity(s.len());
        for (i, c) in s.chars().enumerate() {
            let l = match c {
                'a'..='z' => (c as i32) - ('a' as i32) + 1,
                'A'..='Z' => -((c as i32) - ('A' as i32) + 1),
                _ => {
                    return Err(Error::Parse {
                        line: 0,
                        msg: format!("bad letter {c:?} at column {}", i + 1),
                    })
                }
            };
            v.push(l);
        }
        Ok(Word(v))
    }
}

impl fmt::Display for Word {
    /// Letter notation; only meaningful for at most 26 generators.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &l in &self.0 {
            let idx = (l.unsigned_abs() - 1) as u8;
            let c = if l > 0 { b'a' + idx } else { b'A' + idx };
            write!(f, "{}", c as char)?;
        }
        Ok(())
    }
}

/// Returns the freely reduced form of `w`, rejecting letters outside `1..=ngens`.
pub fn free_reduce(w: &Word, ngens: usize) -> Result<Word> {
    w.check(ngens)?;
    Ok(w.reduced())
}

/// A finitely presented group. Relators are freely reduced and nonempty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    ngens: usize,
    relators: Vec<Word>,
}

impl Presentation {
    pub fn new(ngens: usize, relators: Vec<Word>) -> Result<Self> {
        if ngens == 0 {
            return Err(Error::Parameter("a presentation needs at least one generator".into()));
        }
        let mut rels = Vec::with_capacity(relators.len());
        for r in relators {
            let r = free_reduce(&r, ngens)?;
            if !r.is_empty() {
                rels.push(r);
            }
        }
        Ok(Presentation { ngens, relators: rels })
    }

    /// Free group of rank `ngens`.
    pub fn free(ngens: usize) -> Result<Self> {
        Self::new(ngens, Vec::new())
    }

    /// Builds a presentation from relators in letter notation.
    pub fn from_letters(ngens: usize, relators: &[&str]) -> Result<Self> {
        let words = relators
            .iter()
            .map(|r| Word::parse_letters(r))
            .collect::<Result<Vec<_>>>()?;
        Self::new(ngens, words)
    }

    pub fn ngens(&self) -> usize {
        self.ngens
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    /// Relator rows of exponent sums (the relation matrix of the abelianization).
    pub fn exponent_matrix(&self) -> Vec<Vec<i64>> {
        self.relators.iter().map(|r| r.exponent_sums(self.ngens)).collect()
    }

    /// Serializes in the line format: generator count, then one relator per line.
    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.ngens);
        for r in &self.relators {
            s.push_str(&r.to_string());
            s.push('\n');
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let ngens = loop {
            match lines.next() {
                None => return Err(Error::Parse { line: 0, msg: "empty input".into() }),
                Some((i, l)) => {
                    let l = l.trim();
                    if l.is_empty() || l.starts_with('#') {
                        continue;
                    }
                    let n: usize = l.parse().map_err(|_| Error::Parse {
                        line: i + 1,
                        msg: format!("expected generator count, found {l:?}"),
                    })?;
                    if !(1..=26).contains(&n) {
                        return Err(Error::Parse {
                            line: i + 1,
                            msg: format!("generator count {n} outside 1..=26"),
                        });
                    }
                    break n;
                }
            }
        };
        let mut rels = Vec::new();
        for (i, l) in lines {
            let l = l.trim();
            if l.is_empty() || l.starts_with('#') {
                continue;
            }
            if l.chars().any(char::is_whitespace) {
                return Err(Error::Parse { line: i + 1, msg: "whitespace inside relator".into() });
            }
            let w = Word::parse_letters(l).map_err(|e| match e {
                Error::Parse { msg, .. } => Error::Parse { line: i + 1, msg },
                other => other,
            })?;
            w.check(ngens).map_err(|_| Error::Parse {
                line: i + 1,
                msg: format!("relator uses a generator beyond {ngens}"),
            })?;
            rels.push(w);
        }
        Presentation::new(ngens, rels)
    }
}

impl FromStr for Presentation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Presentation::parse(s)
    }
}
