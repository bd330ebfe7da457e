use std::collections::BTreeMap;
use std::fmt;

use super::{AbstractWord, Atom, WordError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Letter { generator, inverse }
    }

    fn cancels(self, other: Letter) -> bool {
        self.generator == other.generator && self.inverse != other.inverse
    }

    fn inverted(self) -> Letter {
        Letter::new(self.generator, !self.inverse)
    }
}

/// Freely reduced word over generator indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct FreeWord(Vec<Letter>);

impl FreeWord {
    pub fn identity() -> Self {
        FreeWord(Vec::new())
    }

    pub fn generator(g: usize) -> Self {
        FreeWord(vec![Letter::new(g, false)])
    }

    /// Builds the reduced form of an arbitrary letter sequence.
    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut w = FreeWord::identity();
        for l in letters {
            w.push(l);
        }
        w
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn push(&mut self, l: Letter) {
        match self.0.last() {
            Some(&last) if last.cancels(l) => {
                self.0.pop();
            }
            _ => self.0.push(l),
        }
    }

    pub fn mul(&self, other: &FreeWord) -> FreeWord {
        let mut out = self.clone();
        for &l in &other.0 {
            out.push(l);
        }
        out
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord(self.0.iter().rev().map(|l| l.inverted()).collect())
    }

    pub fn pow(&self, e: i64) -> FreeWord {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut out = FreeWord::identity();
        for _ in 0..e.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// `u^-1 v^-1 u v`
    pub fn commutator(&self, other: &FreeWord) -> FreeWord {
        self.inverse()
            .mul(&other.inverse())
            .mul(self)
            .mul(other)
    }

    /// Run-length form `(generator, exponent)` with nonzero exponents.
    pub fn syllables(&self) -> Vec<(usize, i64)> {
        let mut out: Vec<(usize, i64)> = Vec::new();
        for l in &self.0 {
            let step = if l.inverse { -1 } else { 1 };
            match out.last_mut() {
                Some((g, e)) if *g == l.generator => *e += step,
                _ => out.push((l.generator, step)),
            }
        }
        out
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (k, (g, e)) in self.syllables().into_iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            if e == 1 {
                write!(f, "g{g}")?;
            } else {
                write!(f, "g{g}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Expands `w` into a freely reduced word, replacing each atom by its
/// image. Commutators expand as `[u,v] = u^-1 v^-1 u v`, left-normed.
pub fn flatten(w: &AbstractWord, subst: &BTreeMap<Atom, FreeWord>) -> Result<FreeWord, WordError> {
    Ok(match w {
        AbstractWord::Identity => FreeWord::identity(),
        AbstractWord::Atom(a) => subst
            .get(a)
            .cloned()
            .ok_or_else(|| WordError::MissingSubstitution(a.to_string()))?,
        AbstractWord::Product(ws) => {
            let mut acc = FreeWord::identity();
            for x in ws {
                acc = acc.mul(&flatten(x, subst)?);
            }
            acc
        }
        AbstractWord::Power(x, e) => flatten(x, subst)?.pow(*e),
        AbstractWord::Commutator(ws) => {
            let mut it = ws.iter();
            let first = it.next().ok_or(WordError::CommutatorTooShort(0))?;
            let mut acc = flatten(first, subst)?;
            let mut count = 1;
            for x in it {
                acc = acc.commutator(&flatten(x, subst)?);
                count += 1;
            }
            if count < 2 {
                return Err(WordError::CommutatorTooShort(count));
            }
            acc
        }
    })
}
