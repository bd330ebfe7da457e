//! Weighted power-commutator presentations of nilpotent groups.
//!
//! Generators are `g_0, ..., g_{n-1}`. Relations are
//! `g_i^{m_i} = w_i` for generators of finite relative order `m_i` and
//! `[g_j, g_i] = w_ji` for `j > i`, where the right-hand sides are normal
//! words in later generators. A presentation is built through
//! [`PcpBuilder`] and is immutable afterwards; the collector tables are
//! derived once at build time.

mod collect;
mod consistency;
mod eval;
pub mod json;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;

pub use consistency::{consistency_tests, consistency_violations, ConsistencyTest, Violation};
pub use eval::evaluate_word;
pub(crate) use eval::evaluate_with;

use collect::Tables;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PcpError {
    #[error("generator index {index} out of range for {n} generators")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("exponent vector has length {found}, expected {expected}")]
    Length { expected: usize, found: usize },
    #[error("exponent overflow during collection")]
    Overflow,
    #[error("invalid presentation: {0}")]
    Invalid(String),
    #[error("no element of order at most {0} found; the cyclic subgroup may be infinite")]
    OrderCap(u64),
    #[error("no value assigned to `{0}`")]
    MissingAssignment(String),
}

/// Sparse normal word: `(generator, exponent)` pairs with increasing
/// generators and nonzero exponents.
pub type SparseWord = Vec<(usize, i64)>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Definition {
    None,
    Power(usize),
    /// `g_k = [g_j, g_i]` with `j > i`.
    Commutator(usize, usize),
}

/// Normal form `g_0^{e_0} ... g_{n-1}^{e_{n-1}}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ExponentVector(pub Vec<i64>);

impl ExponentVector {
    pub fn identity(n: usize) -> Self {
        ExponentVector(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        ExponentVector(v)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn sparse(&self) -> SparseWord {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(i, &e)| (i, e))
            .collect()
    }

    /// Index of the first nonzero exponent.
    pub fn leading(&self) -> Option<usize> {
        self.0.iter().position(|&e| e != 0)
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.sparse();
        if s.is_empty() {
            return f.write_str("id");
        }
        for (k, (g, e)) in s.into_iter().enumerate() {
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

#[derive(Debug, Clone)]
pub struct PcpBuilder {
    weights: Vec<u32>,
    rel_orders: Vec<i64>,
    power_tails: BTreeMap<usize, SparseWord>,
    comm_tails: BTreeMap<(usize, usize), SparseWord>,
    definitions: Vec<Definition>,
}

impl PcpBuilder {
    /// `rel_orders[i] == 0` marks an infinite generator.
    pub fn new(weights: Vec<u32>, rel_orders: Vec<i64>) -> Self {
        let n = weights.len();
        PcpBuilder {
            weights,
            rel_orders,
            power_tails: BTreeMap::new(),
            comm_tails: BTreeMap::new(),
            definitions: vec![Definition::None; n],
        }
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn power(&mut self, i: usize, rhs: SparseWord) -> &mut Self {
        if rhs.is_empty() {
            self.power_tails.remove(&i);
        } else {
            self.power_tails.insert(i, rhs);
        }
        self
    }

    /// Sets `[g_j, g_i] = rhs` for `j > i`.
    pub fn commutator(&mut self, j: usize, i: usize, rhs: SparseWord) -> &mut Self {
        if rhs.is_empty() {
            self.comm_tails.remove(&(j, i));
        } else {
            self.comm_tails.insert((j, i), rhs);
        }
        self
    }

    pub fn define(&mut self, k: usize, def: Definition) -> &mut Self {
        self.definitions[k] = def;
        self
    }

    pub fn build(self) -> Result<PcPresentation, PcpError> {
        let PcpBuilder {
            weights,
            rel_orders,
            power_tails,
            comm_tails,
            definitions,
        } = self;
        let mut p = PcPresentation {
            weights,
            rel_orders,
            power_tails,
            comm_tails,
            definitions,
            tables: Tables::default(),
        };
        p.validate()?;
        p.tables = Tables::build(&p)?;
        Ok(p)
    }
}

#[derive(Clone)]
pub struct PcPresentation {
    weights: Vec<u32>,
    rel_orders: Vec<i64>,
    power_tails: BTreeMap<usize, SparseWord>,
    comm_tails: BTreeMap<(usize, usize), SparseWord>,
    definitions: Vec<Definition>,
    tables: Tables,
}

impl fmt::Debug for PcPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PcPresentation")
            .field("weights", &self.weights)
            .field("rel_orders", &self.rel_orders)
            .field("power_tails", &self.power_tails)
            .field("comm_tails", &self.comm_tails)
            .field("definitions", &self.definitions)
            .finish()
    }
}

impl PartialEq for PcPresentation {
    fn eq(&self, other: &Self) -> bool {
        self.weights == other.weights
            && self.rel_orders == other.rel_orders
            && self.power_tails == other.power_tails
            && self.comm_tails == other.comm_tails
            && self.definitions == other.definitions
    }
}

impl Eq for PcPresentation {}

impl PcPresentation {
    pub fn trivial() -> Self {
        PcpBuilder::new(Vec::new(), Vec::new()).build().expect("empty presentation")
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> u32 {
        self.weights[i]
    }

    pub fn rel_orders(&self) -> &[i64] {
        &self.rel_orders
    }

    pub fn rel_order(&self, i: usize) -> i64 {
        self.rel_orders[i]
    }

    pub fn definitions(&self) -> &[Definition] {
        &self.definitions
    }

    pub fn power_rhs(&self, i: usize) -> &[(usize, i64)] {
        self.power_tails.get(&i).map_or(&[], Vec::as_slice)
    }

    pub fn commutator_rhs(&self, j: usize, i: usize) -> &[(usize, i64)] {
        self.comm_tails.get(&(j, i)).map_or(&[], Vec::as_slice)
    }

    pub fn power_relations(&self) -> &BTreeMap<usize, SparseWord> {
        &self.power_tails
    }

    pub fn commutator_relations(&self) -> &BTreeMap<(usize, usize), SparseWord> {
        &self.comm_tails
    }

    /// Reopens the presentation for editing.
    pub fn to_builder(&self) -> PcpBuilder {
        PcpBuilder {
            weights: self.weights.clone(),
            rel_orders: self.rel_orders.clone(),
            power_tails: self.power_tails.clone(),
            comm_tails: self.comm_tails.clone(),
            definitions: self.definitions.clone(),
        }
    }

    fn validate(&self) -> Result<(), PcpError> {
        let n = self.n();
        let bad = |m: String| Err(PcpError::Invalid(m));
        if self.rel_orders.len() != n || self.definitions.len() != n {
            return bad("per-generator arrays differ in length".into());
        }
        for (i, &w) in self.weights.iter().enumerate() {
            if w == 0 {
                return bad(format!("generator {i} has weight 0"));
            }
            if i > 0 && w < self.weights[i - 1] {
                return bad(format!("weights decrease at generator {i}"));
            }
        }
        for (i, &m) in self.rel_orders.iter().enumerate() {
            if m == 1 || m < 0 {
                return bad(format!("generator {i} has relative order {m}"));
            }
        }
        let check_word = |w: &SparseWord, after: usize, min_weight: u32, what: &str| -> Result<(), PcpError> {
            let mut last = after;
            for &(g, e) in w {
                if g >= n {
                    return Err(PcpError::IndexOutOfRange { index: g, n });
                }
                if g <= last {
                    return Err(PcpError::Invalid(format!("{what}: generator {g} out of order")));
                }
                last = g;
                let m = self.rel_orders[g];
                if e == 0 || (m > 0 && !(0..m).contains(&e)) {
                    return Err(PcpError::Invalid(format!("{what}: exponent {e} of g{g} not normal")));
                }
                if self.weights[g] < min_weight {
                    return Err(PcpError::Invalid(format!(
                        "{what}: g{g} has weight {} below {min_weight}",
                        self.weights[g]
                    )));
                }
            }
            Ok(())
        };
        for (&i, w) in &self.power_tails {
            if i >= n {
                return Err(PcpError::IndexOutOfRange { index: i, n });
            }
            if self.rel_orders[i] == 0 {
                return bad(format!("power relation for infinite generator {i}"));
            }
            check_word(w, i, self.weights[i], &format!("power relation of g{i}"))?;
        }
        for (&(j, i), w) in &self.comm_tails {
            if j >= n {
                return Err(PcpError::IndexOutOfRange { index: j, n });
            }
            if j <= i {
                return bad(format!("commutator key ({j},{i}) not ordered"));
            }
            check_word(
                w,
                j,
                self.weights[i] + self.weights[j],
                &format!("commutator [g{j},g{i}]"),
            )?;
        }
        for (k, d) in self.definitions.iter().enumerate() {
            match *d {
                Definition::None => {}
                Definition::Power(i) if i < k => {}
                Definition::Commutator(j, i) if i < j && j < k => {}
                _ => return bad(format!("definition of g{k} is not acyclic")),
            }
        }
        Ok(())
    }

    /// Checks that definitions form a forest rooted at the weight-1
    /// generators, and that each defining relation names its generator.
    pub fn check_definitions(&self) -> Result<(), PcpError> {
        for (k, d) in self.definitions.iter().enumerate() {
            let ok = match *d {
                Definition::None => self.weights[k] == 1,
                Definition::Power(i) => self.power_rhs(i) == [(k, 1)],
                Definition::Commutator(j, i) => {
                    self.commutator_rhs(j, i) == [(k, 1)] && self.weights[k] == self.weights[j] + self.weights[i]
                }
            };
            if !ok {
                return Err(PcpError::Invalid(format!("definition of g{k} does not match its relation")));
            }
        }
        Ok(())
    }

    /// Product of relative orders, or `None` for an infinite group.
    pub fn group_order(&self) -> Option<BigUint> {
        let mut acc = BigUint::one();
        for &m in &self.rel_orders {
            if m == 0 {
                return None;
            }
            acc *= BigUint::from(m as u64);
        }
        Some(acc)
    }

    /// Largest generator weight; 0 for the trivial group.
    pub fn nilpotency_class(&self) -> u32 {
        self.weights.last().copied().unwrap_or(0)
    }

    pub fn identity(&self) -> ExponentVector {
        ExponentVector::identity(self.n())
    }

    pub fn generator(&self, i: usize) -> ExponentVector {
        ExponentVector::unit(self.n(), i)
    }

    fn check_len(&self, u: &ExponentVector) -> Result<(), PcpError> {
        if u.len() != self.n() {
            return Err(PcpError::Length {
                expected: self.n(),
                found: u.len(),
            });
        }
        Ok(())
    }

    /// Normal form of the word `g_{i_1}^{e_1} g_{i_2}^{e_2} ...`.
    pub fn collect(&self, word: &[(usize, i64)]) -> Result<ExponentVector, PcpError> {
        let mut r = self.identity();
        self.collect_into(&mut r, word)?;
        Ok(r)
    }

    /// Multiplies `r` on the right by `word`, in place.
    pub fn collect_into(&self, r: &mut ExponentVector, word: &[(usize, i64)]) -> Result<(), PcpError> {
        self.check_len(r)?;
        if let Some(&(index, _)) = word.iter().find(|(g, _)| *g >= self.n()) {
            return Err(PcpError::IndexOutOfRange { index, n: self.n() });
        }
        collect::collect_into(self, &self.tables, &mut r.0, word)
    }

    pub fn multiply(&self, u: &ExponentVector, v: &ExponentVector) -> Result<ExponentVector, PcpError> {
        self.check_len(v)?;
        let mut r = u.clone();
        self.collect_into(&mut r, &v.sparse())?;
        Ok(r)
    }

    pub fn inverse(&self, u: &ExponentVector) -> Result<ExponentVector, PcpError> {
        self.check_len(u)?;
        let word: SparseWord = u.sparse().into_iter().rev().map(|(g, e)| (g, -e)).collect();
        self.collect(&word)
    }

    pub fn power(&self, u: &ExponentVector, k: i64) -> Result<ExponentVector, PcpError> {
        let (mut base, mut k) = if k < 0 {
            (self.inverse(u)?, k.unsigned_abs())
        } else {
            (u.clone(), k as u64)
        };
        let mut acc = self.identity();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.multiply(&acc, &base)?;
            }
            k >>= 1;
            if k > 0 {
                base = self.multiply(&base, &base)?;
            }
        }
        Ok(acc)
    }

    /// `[u, v] = u^-1 v^-1 u v`
    pub fn commutator(&self, u: &ExponentVector, v: &ExponentVector) -> Result<ExponentVector, PcpError> {
        let uv = self.multiply(u, v)?;
        let vu = self.multiply(v, u)?;
        self.multiply(&self.inverse(&vu)?, &uv)
    }

    /// `u^v = v^-1 u v`
    pub fn conjugate(&self, u: &ExponentVector, v: &ExponentVector) -> Result<ExponentVector, PcpError> {
        let vu = self.multiply(&self.inverse(v)?, u)?;
        self.multiply(&vu, v)
    }

    /// Least `k >= 1` with `u^k = 1`, searching up to `cap`.
    pub fn element_order(&self, u: &ExponentVector, cap: u64) -> Result<u64, PcpError> {
        self.check_len(u)?;
        let mut acc = u.clone();
        for k in 1..=cap {
            if acc.is_identity() {
                return Ok(k);
            }
            acc = self.multiply(&acc, u)?;
        }
        Err(PcpError::OrderCap(cap))
    }

    /// Normalizes an arbitrary exponent vector, read as the word
    /// `g_0^{e_0} ... g_{n-1}^{e_{n-1}}`.
    pub fn normalize(&self, e: &[i64]) -> Result<ExponentVector, PcpError> {
        if e.len() != self.n() {
            return Err(PcpError::Length {
                expected: self.n(),
                found: e.len(),
            });
        }
        let word: SparseWord = e
            .iter()
            .enumerate()
            .filter(|(_, &x)| x != 0)
            .map(|(i, &x)| (i, x))
            .collect();
        self.collect(&word)
    }

    /// Whether `u` has all exponents in their normal range.
    pub fn is_normal(&self, u: &ExponentVector) -> bool {
        u.len() == self.n()
            && u
                .0
                .iter()
                .zip(&self.rel_orders)
                .all(|(&e, &m)| m == 0 || (0..m).contains(&e))
    }

    /// Drops every generator of weight above `class`.
    pub fn truncate(&self, class: u32) -> Result<PcPresentation, PcpError> {
        let keep = self.weights.iter().take_while(|&&w| w <= class).count();
        let cut = |w: &SparseWord| -> SparseWord { w.iter().copied().filter(|&(g, _)| g < keep).collect() };
        let mut b = PcpBuilder::new(self.weights[..keep].to_vec(), self.rel_orders[..keep].to_vec());
        for (&i, w) in &self.power_tails {
            if i < keep {
                b.power(i, cut(w));
            }
        }
        for (&(j, i), w) in &self.comm_tails {
            if j < keep {
                b.commutator(j, i, cut(w));
            }
        }
        for k in 0..keep {
            b.define(k, self.definitions[k]);
        }
        b.build()
    }
}

/// Dihedral group of order 8 generated by two involutions:
/// `g0^2 = g1^2 = g2^2 = 1`, `[g1, g0] = g2`.
pub fn dihedral8() -> PcPresentation {
    let mut b = PcpBuilder::new(vec![1, 1, 2], vec![2, 2, 2]);
    b.commutator(1, 0, vec![(2, 1)]).define(2, Definition::Commutator(1, 0));
    b.build().expect("valid dihedral presentation")
}

/// Cyclic group of order 4: `g0^2 = g1`, `g1^2 = 1`.
pub fn cyclic4() -> PcPresentation {
    let mut b = PcpBuilder::new(vec![1, 1], vec![2, 2]);
    b.power(0, vec![(1, 1)]).define(1, Definition::Power(0));
    b.build().expect("valid cyclic presentation")
}
