//! Overlap tests for power-commutator presentations.

use super::{ExponentVector, PcPresentation, PcpError};
use crate::par::{self, Execution};

/// One overlap; both sides describe the same group element when the
/// presentation is consistent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConsistencyTest {
    /// `(g_k g_j) g_i = g_k (g_j g_i)` for `k > j > i`.
    Associativity { k: usize, j: usize, i: usize },
    /// `(g_j^m) g_i = g_j^{m-1} (g_j g_i)` for `j > i`, `g_j` finite.
    PowerLeft { j: usize, i: usize },
    /// `(g_j g_i^{m-1}) g_i = g_j (g_i^m)` for `j > i`, `g_i` finite.
    PowerRight { j: usize, i: usize },
    /// `(g_i^m) g_i = g_i (g_i^m)`.
    PowerSelf { i: usize },
    /// `(g_j g_i^-1) g_i = g_j` for `j > i`, `g_i` infinite.
    InverseLeft { j: usize, i: usize },
    /// `g_j^-1 (g_j g_i) = g_i` for `j > i`, `g_j` infinite.
    InverseRight { j: usize, i: usize },
}

impl ConsistencyTest {
    pub fn weight(&self, p: &PcPresentation) -> u32 {
        let w = |x: usize| p.weight(x);
        match *self {
            ConsistencyTest::Associativity { k, j, i } => w(k) + w(j) + w(i),
            ConsistencyTest::PowerLeft { j, i }
            | ConsistencyTest::PowerRight { j, i }
            | ConsistencyTest::InverseLeft { j, i }
            | ConsistencyTest::InverseRight { j, i } => w(j) + w(i),
            ConsistencyTest::PowerSelf { i } => 2 * w(i),
        }
    }

    /// Evaluates both association orders.
    pub fn sides(&self, p: &PcPresentation) -> Result<(ExponentVector, ExponentVector), PcpError> {
        let g = |x: usize| p.generator(x);
        let pow = |x: usize| {
            let mut v = p.identity();
            for &(h, e) in p.power_rhs(x) {
                v.0[h] = e;
            }
            v
        };
        let m = |x: usize| p.rel_order(x);
        Ok(match *self {
            ConsistencyTest::Associativity { k, j, i } => {
                let left = p.multiply(&p.collect(&[(k, 1), (j, 1)])?, &g(i))?;
                let right = p.multiply(&g(k), &p.collect(&[(j, 1), (i, 1)])?)?;
                (left, right)
            }
            ConsistencyTest::PowerLeft { j, i } => {
                let left = p.multiply(&pow(j), &g(i))?;
                let mut gj = p.identity();
                gj.0[j] = m(j) - 1;
                let right = p.multiply(&gj, &p.collect(&[(j, 1), (i, 1)])?)?;
                (left, right)
            }
            ConsistencyTest::PowerRight { j, i } => {
                let left = p.multiply(&p.collect(&[(j, 1), (i, m(i) - 1)])?, &g(i))?;
                let right = p.multiply(&g(j), &pow(i))?;
                (left, right)
            }
            ConsistencyTest::PowerSelf { i } => {
                let left = p.multiply(&pow(i), &g(i))?;
                let right = p.multiply(&g(i), &pow(i))?;
                (left, right)
            }
            ConsistencyTest::InverseLeft { j, i } => {
                let left = p.multiply(&p.collect(&[(j, 1), (i, -1)])?, &g(i))?;
                (left, g(j))
            }
            ConsistencyTest::InverseRight { j, i } => {
                let left = p.multiply(&p.collect(&[(j, -1)])?, &p.collect(&[(j, 1), (i, 1)])?)?;
                (left, g(i))
            }
        })
    }
}

/// Test set over the generators `0..upto`, keeping tests of total weight
/// at most `max_weight` when given.
pub fn consistency_tests(p: &PcPresentation, upto: usize, max_weight: Option<u32>) -> Vec<ConsistencyTest> {
    let finite = |x: usize| p.rel_order(x) > 0;
    let mut out = Vec::new();
    for i in 0..upto {
        if finite(i) {
            out.push(ConsistencyTest::PowerSelf { i });
        }
        for j in i + 1..upto {
            if finite(j) {
                out.push(ConsistencyTest::PowerLeft { j, i });
            } else {
                out.push(ConsistencyTest::InverseRight { j, i });
            }
            if finite(i) {
                out.push(ConsistencyTest::PowerRight { j, i });
            } else {
                out.push(ConsistencyTest::InverseLeft { j, i });
            }
            for k in j + 1..upto {
                out.push(ConsistencyTest::Associativity { k, j, i });
            }
        }
    }
    if let Some(bound) = max_weight {
        out.retain(|t| t.weight(p) <= bound);
    }
    out.sort();
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub test: ConsistencyTest,
    pub left: ExponentVector,
    pub right: ExponentVector,
}

/// Failing overlap tests. With `full == false` only tests of weight at
/// most `class + 1` are run, which suffices for presentations whose
/// weights come from the lower central series.
pub fn consistency_violations(p: &PcPresentation, full: bool, exec: Execution) -> Result<Vec<Violation>, PcpError> {
    let bound = (!full).then(|| p.nilpotency_class() + 1);
    let tests = consistency_tests(p, p.n(), bound);
    let results = par::try_map(exec, &tests, |t| t.sides(p).map(|s| (*t, s)))?;
    Ok(results
        .into_iter()
        .filter(|(_, (l, r))| l != r)
        .map(|(test, (left, right))| Violation { test, left, right })
        .collect())
}
