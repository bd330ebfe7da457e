//! Brute-force laboratory for small finite groups.
//!
//! A [`FiniteGroup`] is a full Cayley table over `u16` indices. Groups
//! built by [`enumerate`] list the normal forms of a pc presentation in
//! lexicographic order; their table is derived from a naive rewriting
//! system on the relations and does not use the collector, so comparing
//! it with collection is a genuine cross-check.

mod lemma;
mod subgroup;

use num_traits::ToPrimitive;

pub use lemma::{check_lemma, LemmaReport};
pub use subgroup::{
    derived_length, exponent, generated_subgroup, involutions, is_abelian, is_left_2_engel, nilpotency_class_of_subgroup,
    normal_closure, quotient, right_2_engel_set, satisfies_2_engel, SubgroupWitness,
};

use crate::par::{self, Execution};
use crate::pcp::{ExponentVector, PcPresentation, PcpError};

/// Default element bound for the quadratic scans.
pub const DEFAULT_GUARD: usize = 1 << 12;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("group order {order} exceeds the oracle bound {bound}")]
    TooLarge { order: String, bound: usize },
    #[error("the group is infinite")]
    Infinite,
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("group exponent {0} does not divide 4")]
    ExponentTooLarge(u64),
    #[error("invalid multiplication table: {0}")]
    BadTable(String),
    #[error(transparent)]
    Pcp(#[from] PcpError),
}

#[derive(Debug, Clone)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u16>,
    inv: Vec<u16>,
    labels: Vec<ExponentVector>,
}

impl FiniteGroup {
    /// Group from a full table with the identity at index 0. Checks the
    /// identity and that every row and column is a permutation; checking
    /// associativity is left to the caller.
    pub fn from_table(table: Vec<Vec<usize>>, labels: Vec<ExponentVector>) -> Result<Self, OracleError> {
        let n = table.len();
        if n == 0 || n > u16::MAX as usize + 1 || labels.len() != n {
            return Err(OracleError::BadTable(format!("{n} rows, {} labels", labels.len())));
        }
        let mut flat = Vec::with_capacity(n * n);
        for (a, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(OracleError::BadTable(format!("row {a} has length {}", row.len())));
            }
            flat.extend(row.iter().map(|&x| x as u16));
        }
        let mut g = FiniteGroup {
            order: n,
            table: flat,
            inv: vec![0; n],
            labels,
        };
        g.finish()?;
        Ok(g)
    }

    fn finish(&mut self) -> Result<(), OracleError> {
        let n = self.order;
        for a in 0..n {
            if self.mul(0, a) != a || self.mul(a, 0) != a {
                return Err(OracleError::BadTable("index 0 is not the identity".into()));
            }
            let mut row = vec![false; n];
            let mut col = vec![false; n];
            for b in 0..n {
                let (r, c) = (self.mul(a, b), self.mul(b, a));
                if r >= n || c >= n || row[r] || col[c] {
                    return Err(OracleError::BadTable(format!("row or column {a} is not a permutation")));
                }
                row[r] = true;
                col[c] = true;
                if r == 0 {
                    self.inv[a] = b as u16;
                }
            }
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    /// `[a, b] = a^-1 b^-1 a b`
    #[inline]
    pub fn comm(&self, a: usize, b: usize) -> usize {
        self.mul(self.inv(self.mul(b, a)), self.mul(a, b))
    }

    /// `a^b = b^-1 a b`
    #[inline]
    pub fn conj(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(self.inv(b), a), b)
    }

    pub fn pow(&self, a: usize, k: u64) -> usize {
        (0..k).fold(0, |acc, _| self.mul(acc, a))
    }

    pub fn element_order(&self, a: usize) -> u64 {
        let mut k = 1;
        let mut x = a;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn label(&self, a: usize) -> &ExponentVector {
        &self.labels[a]
    }

    pub fn labels(&self) -> &[ExponentVector] {
        &self.labels
    }

    /// Index of a label; labels are sorted.
    pub fn index_of(&self, v: &ExponentVector) -> Option<usize> {
        self.labels.binary_search(v).ok()
    }

    /// Whether the table equals `other`'s under the identity on labels.
    pub fn same_table(&self, other: &FiniteGroup) -> bool {
        self.labels == other.labels && self.table == other.table
    }
}

/// Normal form of the positive word `letters` by naive rewriting with the
/// relations of `p`, always at the leftmost applicable position:
/// `g_j g_i -> g_i g_j [g_j, g_i]` for `j > i` and `g_i^{m_i} -> w_i`.
pub fn rewrite_word(p: &PcPresentation, letters: &[usize]) -> Result<ExponentVector, OracleError> {
    if p.rel_orders().contains(&0) {
        return Err(OracleError::Infinite);
    }
    let expand = |w: &[(usize, i64)], out: &mut Vec<usize>| {
        for &(g, e) in w {
            // relation words of a finite presentation are in normal form
            out.extend(std::iter::repeat_n(g, e as usize));
        }
    };
    let mut w = letters.to_vec();
    let mut k = 0;
    while k < w.len() {
        let x = w[k];
        if k + 1 < w.len() && w[k + 1] < x {
            let y = w[k + 1];
            let mut rep = vec![y, x];
            expand(p.commutator_rhs(x, y), &mut rep);
            w.splice(k..k + 2, rep);
            k = 0;
            continue;
        }
        let m = p.rel_order(x) as usize;
        if k + m <= w.len() && w[k..k + m].iter().all(|&y| y == x) {
            let mut rep = Vec::new();
            expand(p.power_rhs(x), &mut rep);
            w.splice(k..k + m, rep);
            k = 0;
            continue;
        }
        k += 1;
    }
    let mut e = vec![0i64; p.n()];
    for g in w {
        e[g] += 1;
    }
    Ok(ExponentVector(e))
}

fn letters_of(v: &ExponentVector) -> Vec<usize> {
    v.0.iter()
        .enumerate()
        .flat_map(|(g, &e)| std::iter::repeat_n(g, e as usize))
        .collect()
}

/// All normal forms of `p` in lexicographic order.
pub fn normal_forms(p: &PcPresentation, bound: usize) -> Result<Vec<ExponentVector>, OracleError> {
    let order = p.group_order().ok_or(OracleError::Infinite)?;
    match order.to_usize() {
        Some(o) if o <= bound && o <= u16::MAX as usize + 1 => {}
        _ => {
            return Err(OracleError::TooLarge {
                order: order.to_string(),
                bound,
            })
        }
    }
    let mut out = vec![Vec::new()];
    for &m in p.rel_orders() {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<i64>| {
                (0..m).map(move |e| {
                    let mut v = prefix.clone();
                    v.push(e);
                    v
                })
            })
            .collect();
    }
    Ok(out.into_iter().map(ExponentVector).collect())
}

/// Enumerates the group of a finite consistent presentation with at most
/// `bound` elements.
pub fn enumerate(p: &PcPresentation, bound: usize, exec: Execution) -> Result<FiniteGroup, OracleError> {
    let labels = normal_forms(p, bound)?;
    let n = labels.len();
    let gens = p.n();
    let index = |v: &ExponentVector| labels.binary_search(v).map_err(|_| OracleError::BadTable(format!("{v} is not normal")));
    // right action of each pc generator
    let act: Vec<Vec<usize>> = par::map(exec, &labels, |u| -> Result<Vec<usize>, OracleError> {
        let mut row = Vec::with_capacity(gens);
        let mut w = letters_of(u);
        for g in 0..gens {
            w.push(g);
            row.push(index(&rewrite_word(p, &w)?)?);
            w.pop();
        }
        Ok(row)
    })
    .into_iter()
    .collect::<Result<_, _>>()?;
    // v = parent(v) * g_last, where parent lowers the last nonzero exponent
    let step: Vec<(usize, usize)> = labels
        .iter()
        .map(|v| match v.0.iter().rposition(|&e| e != 0) {
            None => (0, usize::MAX),
            Some(g) => {
                let mut parent = v.clone();
                parent.0[g] -= 1;
                (index(&parent).expect("parent is normal"), g)
            }
        })
        .collect();
    let rows: Vec<Vec<u16>> = par::map_range(exec, n, |u| {
        let mut row = vec![0u16; n];
        for v in 0..n {
            let (parent, g) = step[v];
            row[v] = if g == usize::MAX { u as u16 } else { act[row[parent] as usize][g] as u16 };
        }
        row
    });
    let mut g = FiniteGroup {
        order: n,
        table: rows.concat(),
        inv: vec![0; n],
        labels,
    };
    g.finish()?;
    Ok(g)
}

/// First pair `(u, v)` whose product differs between the table and
/// collection in `p`, if any.
pub fn collector_disagreement(
    g: &FiniteGroup,
    p: &PcPresentation,
    exec: Execution,
) -> Result<Option<(usize, usize)>, OracleError> {
    let n = g.order();
    let rows = par::map_range(exec, n, |u| -> Result<Option<(usize, usize)>, OracleError> {
        for v in 0..n {
            let w = p.multiply(g.label(u), g.label(v))?;
            if g.index_of(&w) != Some(g.mul(u, v)) {
                return Ok(Some((u, v)));
            }
        }
        Ok(None)
    });
    for r in rows {
        if let Some(pair) = r? {
            return Ok(Some(pair));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests;
