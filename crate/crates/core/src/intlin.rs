//! Exact integer lattice arithmetic: row Hermite normal form and reduction
//! of vectors modulo a row lattice.
//!
//! The echelon builder runs on `i64` with checked arithmetic and promotes
//! itself to `BigInt` the first time an operation would overflow. Both
//! paths produce identical output since the Hermite form of a lattice is
//! unique.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IntLinError {
    #[error("dimension mismatch: expected {expected} columns, got {found}")]
    Dimension { expected: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![<BigInt as Zero>::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows of machine integers. `cols` is needed for
    /// the zero-row case.
    pub fn from_rows<I: Into<BigInt> + Copy>(cols: usize, rows: &[Vec<I>]) -> Result<Self, IntLinError> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(IntLinError::Dimension {
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend(r.iter().map(|&x| x.into()));
        }
        Ok(IntMatrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn from_big_rows(cols: usize, rows: Vec<Vec<BigInt>>) -> Result<Self, IntLinError> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let n = rows.len();
        for r in rows {
            if r.len() != cols {
                return Err(IntLinError::Dimension {
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend(r);
        }
        Ok(IntMatrix { rows: n, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }
}

/// Row Hermite normal form: nonzero rows only, in pivot order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hnf {
    pub matrix: IntMatrix,
    pub pivots: Vec<usize>,
}

impl Hnf {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn cols(&self) -> usize {
        self.matrix.cols
    }

    /// Pivot entry for column `c`, if `c` is a pivot column.
    pub fn pivot_of(&self, c: usize) -> Option<&BigInt> {
        self.pivots
            .iter()
            .position(|&p| p == c)
            .map(|r| self.matrix.get(r, c))
    }
}

pub fn hnf(m: &IntMatrix) -> Hnf {
    let mut b = LatticeBuilder::new(m.cols);
    let mut rows = m.to_rows();
    // canonical insertion order; the result does not depend on it
    rows.sort();
    for r in rows {
        b.insert_big(r);
    }
    b.finish()
}

/// Canonical residue of `v` modulo the row lattice of `h`: zero iff `v`
/// lies in the lattice, with pivot-column entries in `[0, pivot)`.
pub fn reduce_vector(h: &Hnf, v: &[BigInt]) -> Result<Vec<BigInt>, IntLinError> {
    if v.len() != h.matrix.cols {
        return Err(IntLinError::Dimension {
            expected: h.matrix.cols,
            found: v.len(),
        });
    }
    let mut out = v.to_vec();
    for (r, &c) in h.pivots.iter().enumerate() {
        let row = h.matrix.row(r);
        let q = Integer::div_floor(&out[c], &row[c]);
        if !Zero::is_zero(&q) {
            for k in c..out.len() {
                if !Zero::is_zero(&row[k]) {
                    out[k] -= &q * &row[k];
                }
            }
        }
    }
    Ok(out)
}

pub(crate) trait Scalar: Clone + PartialEq + Debug {
    fn zero() -> Self;
    fn from_i64(x: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn neg(&self) -> Option<Self>;
    fn add(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn div_floor(&self, o: &Self) -> Self;
    fn divides(&self, o: &Self) -> bool;
    fn div_exact(&self, o: &Self) -> Self;
    /// `(g, s, t)` with `g = s*a + t*b > 0`.
    fn ext_gcd(a: &Self, b: &Self) -> Option<(Self, Self, Self)>;
    fn to_big(&self) -> BigInt;
}

impl Scalar for i64 {
    fn zero() -> Self {
        0
    }
    fn from_i64(x: i64) -> Self {
        x
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn div_floor(&self, o: &Self) -> Self {
        Integer::div_floor(self, o)
    }
    fn divides(&self, o: &Self) -> bool {
        o % self == 0
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
    fn ext_gcd(a: &Self, b: &Self) -> Option<(Self, Self, Self)> {
        let (mut r0, mut r1) = (*a as i128, *b as i128);
        let (mut s0, mut s1) = (1i128, 0i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0.div_euclid(r1);
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        if r0 < 0 {
            (r0, s0, t0) = (-r0, -s0, -t0);
        }
        Some((r0.try_into().ok()?, s0.try_into().ok()?, t0.try_into().ok()?))
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Scalar for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn from_i64(x: i64) -> Self {
        BigInt::from(x)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn div_floor(&self, o: &Self) -> Self {
        Integer::div_floor(self, o)
    }
    fn divides(&self, o: &Self) -> bool {
        Zero::is_zero(&(o % self))
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
    fn ext_gcd(a: &Self, b: &Self) -> Option<(Self, Self, Self)> {
        let e = a.extended_gcd(b);
        if Signed::is_negative(&e.gcd) {
            Some((-e.gcd, -e.x, -e.y))
        } else {
            Some((e.gcd, e.x, e.y))
        }
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

struct Overflow;

/// `a*x + b*y`, entrywise from column `from`.
fn combine<T: Scalar>(a: &T, x: &[T], b: &T, y: &[T], from: usize) -> Option<Vec<T>> {
    let mut out = vec![T::zero(); x.len()];
    for k in from..x.len() {
        let l = if x[k].is_zero() { T::zero() } else { a.mul(&x[k])? };
        let r = if y[k].is_zero() { T::zero() } else { b.mul(&y[k])? };
        out[k] = l.add(&r)?;
    }
    Some(out)
}

/// Stored echelon row with its nonzero columns, so that eliminating
/// against a sparse row touches only its support.
#[derive(Debug, Clone)]
struct Row<T> {
    v: Vec<T>,
    support: Vec<usize>,
}

impl<T: Scalar> Row<T> {
    fn new(v: Vec<T>) -> Self {
        let support = (0..v.len()).filter(|&k| !v[k].is_zero()).collect();
        Row { v, support }
    }
}

/// `x += m * p` on the support of `p`; leaves `x` untouched on overflow.
fn add_multiple<T: Scalar>(x: &mut [T], m: &T, p: &Row<T>) -> Option<()> {
    let mut updates = Vec::with_capacity(p.support.len());
    for &k in &p.support {
        updates.push((k, x[k].add(&m.mul(&p.v[k])?)?));
    }
    for (k, val) in updates {
        x[k] = val;
    }
    Some(())
}

/// Row echelon basis keyed by pivot column, kept in reduced form: every
/// entry above a pivot lies in `[0, pivot)`. Keeping it reduced after each
/// change is what stops coefficient growth.
#[derive(Debug, Clone)]
struct Echelon<T> {
    cols: usize,
    rows: BTreeMap<usize, Row<T>>,
    dirty: BTreeSet<usize>,
}

impl<T: Scalar> Echelon<T> {
    fn new(cols: usize) -> Self {
        Echelon {
            cols,
            rows: BTreeMap::new(),
            dirty: BTreeSet::new(),
        }
    }

    /// On overflow the lattice spanned by the stored rows plus the
    /// returned vector equals the lattice before the call plus `v`.
    fn insert(&mut self, mut v: Vec<T>) -> Result<(), (Overflow, Vec<T>)> {
        let mut start = 0;
        loop {
            let Some(c) = (start..self.cols).find(|&k| !v[k].is_zero()) else {
                return Ok(());
            };
            let Some(p) = self.rows.get(&c) else {
                if v[c].is_negative() {
                    match combine(&T::from_i64(-1), &v, &T::zero(), &v, c) {
                        Some(n) => v = n,
                        None => return Err((Overflow, v)),
                    }
                }
                self.rows.insert(c, Row::new(v));
                self.dirty.insert(c);
                return Ok(());
            };
            if p.v[c].divides(&v[c]) {
                let q = v[c].div_exact(&p.v[c]);
                let Some(mq) = q.neg() else { return Err((Overflow, v)) };
                if add_multiple(&mut v, &mq, p).is_none() {
                    return Err((Overflow, v));
                }
            } else {
                let step = (|| {
                    let (g, s, t) = T::ext_gcd(&p.v[c], &v[c])?;
                    let new_p = combine(&s, &p.v, &t, &v, c)?;
                    let a = v[c].div_exact(&g);
                    let b = p.v[c].div_exact(&g).neg()?;
                    let new_v = combine(&a, &p.v, &b, &v, c)?;
                    Some((new_p, new_v))
                })();
                match step {
                    Some((new_p, new_v)) => {
                        self.rows.insert(c, Row::new(new_p));
                        self.dirty.insert(c);
                        v = new_v;
                    }
                    None => return Err((Overflow, v)),
                }
            }
            start = c;
        }
    }

    /// Restores the reduced form. Only rows that changed, and entries in
    /// the pivot columns of changed rows, need attention.
    fn reduce(&mut self) -> Result<(), Overflow> {
        if self.dirty.is_empty() {
            return Ok(());
        }
        let pivots: Vec<usize> = self.rows.keys().copied().collect();
        let mut rows: Vec<&mut Row<T>> = self.rows.values_mut().collect();
        let mut dirty: Vec<bool> = pivots.iter().map(|c| self.dirty.contains(c)).collect();
        for k in 0..pivots.len() {
            let c = pivots[k];
            let (above, rest) = rows.split_at_mut(k);
            let prow = &*rest[0];
            let pc = &prow.v[c];
            for (a, row) in above.iter_mut().enumerate() {
                if !dirty[k] && !dirty[a] {
                    continue;
                }
                let x = &row.v[c];
                if !x.is_negative() && x.add(&pc.neg().ok_or(Overflow)?).is_some_and(|d| d.is_negative()) {
                    continue;
                }
                let mq = x.div_floor(pc).neg().ok_or(Overflow)?;
                add_multiple(&mut row.v, &mq, prow).ok_or(Overflow)?;
                **row = Row::new(std::mem::take(&mut row.v));
                dirty[a] = true;
            }
        }
        self.dirty.clear();
        Ok(())
    }

    fn to_big(&self) -> Echelon<BigInt> {
        Echelon {
            cols: self.cols,
            rows: self
                .rows
                .iter()
                .map(|(&c, r)| (c, Row::new(r.v.iter().map(Scalar::to_big).collect())))
                .collect(),
            // conservatively re-check everything after promotion
            dirty: self.rows.keys().copied().collect(),
        }
    }

    fn into_hnf(self) -> Hnf {
        let pivots: Vec<usize> = self.rows.keys().copied().collect();
        let rows: Vec<Vec<BigInt>> = self
            .rows
            .into_values()
            .map(|r| r.v.iter().map(Scalar::to_big).collect())
            .collect();
        Hnf {
            matrix: IntMatrix::from_big_rows(self.cols, rows).expect("rectangular"),
            pivots,
        }
    }
}

#[derive(Debug, Clone)]
enum Backend {
    Small(Echelon<i64>),
    Big(Echelon<BigInt>),
}

/// Incremental row lattice, finished into its Hermite normal form.
#[derive(Debug, Clone)]
pub struct LatticeBuilder {
    backend: Backend,
}

impl LatticeBuilder {
    pub fn new(cols: usize) -> Self {
        LatticeBuilder {
            backend: Backend::Small(Echelon::new(cols)),
        }
    }

    pub fn cols(&self) -> usize {
        match &self.backend {
            Backend::Small(e) => e.cols,
            Backend::Big(e) => e.cols,
        }
    }

    pub fn rank(&self) -> usize {
        match &self.backend {
            Backend::Small(e) => e.rows.len(),
            Backend::Big(e) => e.rows.len(),
        }
    }

    pub fn is_promoted(&self) -> bool {
        matches!(self.backend, Backend::Big(_))
    }

    fn promote(&mut self, pending: Option<Vec<BigInt>>) {
        if let Backend::Small(e) = &self.backend {
            self.backend = Backend::Big(e.to_big());
        }
        if let Backend::Big(e) = &mut self.backend {
            if let Some(v) = pending {
                let _ = e.insert(v);
            }
            let _ = e.reduce();
        }
    }

    fn insert_small(&mut self, row: Vec<i64>) {
        let Backend::Small(e) = &mut self.backend else { unreachable!() };
        match e.insert(row) {
            Err((Overflow, rest)) => self.promote(Some(rest.iter().map(Scalar::to_big).collect())),
            Ok(()) => {
                if e.reduce().is_err() {
                    self.promote(None);
                }
            }
        }
    }

    pub fn insert(&mut self, row: &[i64]) {
        assert_eq!(row.len(), self.cols(), "row length");
        match &mut self.backend {
            Backend::Small(_) => self.insert_small(row.to_vec()),
            Backend::Big(e) => {
                let _ = e.insert(row.iter().map(|&x| BigInt::from(x)).collect());
                let _ = e.reduce();
            }
        }
    }

    pub fn insert_big(&mut self, row: Vec<BigInt>) {
        assert_eq!(row.len(), self.cols(), "row length");
        if let Backend::Small(_) = &self.backend {
            if let Some(small) = row.iter().map(|x| x.to_i64()).collect::<Option<Vec<i64>>>() {
                self.insert_small(small);
                return;
            }
            self.promote(Some(row));
            return;
        }
        if let Backend::Big(e) = &mut self.backend {
            let _ = e.insert(row);
            let _ = e.reduce();
        }
    }

    pub fn finish(self) -> Hnf {
        match self.backend {
            Backend::Small(e) => e.into_hnf(),
            Backend::Big(e) => e.into_hnf(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>], cols: usize) -> IntMatrix {
        IntMatrix::from_rows(cols, rows).unwrap()
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn two_by_two_example() {
        let h = hnf(&m(&[vec![2, 4], vec![6, 8]], 2));
        assert_eq!(h.matrix, m(&[vec![2, 0], vec![0, 4]], 2));
        assert_eq!(h.pivots, vec![0, 1]);
    }

    #[test]
    fn identity_and_empty() {
        assert_eq!(hnf(&IntMatrix::identity(3)).matrix, IntMatrix::identity(3));
        let e = hnf(&IntMatrix::zeros(0, 4));
        assert_eq!(e.matrix, IntMatrix::zeros(0, 4));
        assert!(e.pivots.is_empty());
    }

    #[test]
    fn reduce_examples() {
        let h = hnf(&m(&[vec![2, 0], vec![0, 4]], 2));
        assert_eq!(reduce_vector(&h, &big(&[0, 0])).unwrap(), big(&[0, 0]));
        assert_eq!(reduce_vector(&h, &big(&[2, 4])).unwrap(), big(&[0, 0]));
        assert_eq!(reduce_vector(&h, &big(&[1, 5])).unwrap(), big(&[1, 1]));
        assert!(matches!(
            reduce_vector(&h, &big(&[1])),
            Err(IntLinError::Dimension { expected: 2, found: 1 })
        ));
    }

    #[test]
    fn residue_for_one_five_is_minimal() {
        // brute force: the coset (1,5) + L with L = 2Z x 4Z, scanning a window
        // for the representative with both entries in [0, pivot)
        let mut reps = Vec::new();
        for a in -10i64..=10 {
            for b in -10i64..=10 {
                let (x, y) = (1 + 2 * a, 5 + 4 * b);
                if (0..2).contains(&x) && (0..4).contains(&y) {
                    reps.push((x, y));
                }
            }
        }
        assert_eq!(reps, vec![(1, 1)]);
    }

    #[test]
    fn overflow_promotes_and_matches_bigint() {
        let huge = i64::MAX / 3;
        let rows = vec![vec![huge, 7, 1], vec![huge - 1, 5, 3], vec![3, huge, 2]];
        let mut b = LatticeBuilder::new(3);
        for r in &rows {
            b.insert(r);
        }
        assert!(b.is_promoted());
        let h = b.finish();
        let mut big_only = Echelon::<BigInt>::new(3);
        for r in &rows {
            big_only.insert(big(r)).ok().unwrap();
        }
        big_only.reduce().ok().unwrap();
        assert_eq!(h, big_only.into_hnf());
    }

    #[test]
    fn negative_pivots_are_normalized() {
        let h = hnf(&m(&[vec![-3, 1], vec![0, -2]], 2));
        assert_eq!(h.matrix, m(&[vec![3, 1], vec![0, 2]], 2));
    }
}
