//! One step of the tails method: from a consistent presentation of
//! `G / gamma_{c+1}` to one of `G / gamma_{c+2}`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::instances::instantiate_laws;
use super::{ClassStep, Extension, NqError, NqOptions, NqState};
use crate::intlin::{reduce_vector, Hnf, LatticeBuilder};
use crate::par;
use crate::pcp::{
    consistency_tests, consistency_violations, Definition, ExponentVector, PcPresentation, PcpBuilder, PcpError,
    SparseWord,
};
use crate::words::{AbstractWord, Atom, AtomKind};

/// Where a tail generator is attached.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tail {
    Power(usize),
    Commutator(usize, usize),
    Image(usize),
}

type Row = Vec<(u32, i64)>;

/// Fp generator defining weight-one generator `k`: the first one whose
/// image is exactly `g_k`.
pub(crate) fn defining_images(p: &PcPresentation, images: &[ExponentVector]) -> Vec<bool> {
    let mut seen = vec![false; p.n()];
    images
        .iter()
        .map(|v| match v.sparse().as_slice() {
            [(k, 1)] if p.weight(*k) == 1 && !seen[*k] => {
                seen[*k] = true;
                true
            }
            _ => false,
        })
        .collect()
}

fn tail_columns(p: &PcPresentation, images: &[ExponentVector], class: u32) -> (Vec<Tail>, usize) {
    let target = class + 1;
    let n = p.n();
    let defined: Vec<(usize, usize)> = p
        .definitions()
        .iter()
        .filter_map(|d| match *d {
            Definition::Commutator(j, i) => Some((j, i)),
            _ => None,
        })
        .collect();
    let mut fixed = Vec::new();
    let mut cands = Vec::new();
    for i in 0..n {
        if p.rel_order(i) > 0 {
            fixed.push(Tail::Power(i));
        }
    }
    for j in 0..n {
        for i in 0..j {
            if p.weight(i) + p.weight(j) > target || defined.contains(&(j, i)) {
                continue;
            }
            if p.weight(j) == class && p.weight(i) == 1 {
                cands.push((j, i));
            } else {
                fixed.push(Tail::Commutator(j, i));
            }
        }
    }
    let defining = defining_images(p, images);
    let image_tails = (0..images.len()).filter(|&x| !defining[x]).map(Tail::Image);
    if class == 0 {
        let all: Vec<Tail> = image_tails.collect();
        return (all, 0);
    }
    fixed.extend(image_tails);
    cands.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    let split = fixed.len();
    fixed.extend(cands.into_iter().map(|(j, i)| Tail::Commutator(j, i)));
    (fixed, split)
}

fn with_tail(old: &[(usize, i64)], tail: SparseWord) -> SparseWord {
    let mut w = old.to_vec();
    w.extend(tail);
    w
}

fn widen(v: &ExponentVector, len: usize) -> ExponentVector {
    let mut e = v.0.clone();
    e.resize(len, 0);
    ExponentVector(e)
}

/// Tail part of a collected element, after checking that the rest vanishes.
fn tail_row(v: &ExponentVector, n: usize, what: &dyn Fn() -> String) -> Result<Row, NqError> {
    if v.0[..n].iter().any(|&e| e != 0) {
        return Err(NqError::Engine(format!("{} is nontrivial modulo the new layer", what())));
    }
    Ok(v.0[n..]
        .iter()
        .enumerate()
        .filter(|(_, &e)| e != 0)
        .map(|(k, &e)| (k as u32, e))
        .collect())
}

fn difference(l: &ExponentVector, r: &ExponentVector, n: usize) -> Result<Row, NqError> {
    if l.0[..n] != r.0[..n] {
        return Err(NqError::Engine(
            "consistency test disagrees below the new layer".into(),
        ));
    }
    let mut row = Row::new();
    for (k, (&a, &b)) in l.0[n..].iter().zip(&r.0[n..]).enumerate() {
        let d = a.checked_sub(b).ok_or(PcpError::Overflow)?;
        if d != 0 {
            row.push((k as u32, d));
        }
    }
    Ok(row)
}

fn to_sparse(v: &[BigInt], index: &[Option<usize>]) -> Result<SparseWord, NqError> {
    let mut out = Vec::new();
    for (col, x) in v.iter().enumerate() {
        if x.sign() == num_bigint::Sign::NoSign {
            continue;
        }
        let Some(g) = index[col] else {
            return Err(NqError::Engine(format!("reduced tail has support on eliminated column {col}")));
        };
        out.push((g, x.to_i64().ok_or(PcpError::Overflow)?));
    }
    Ok(out)
}

fn unit(cols: usize, col: usize, scale: i64) -> Vec<BigInt> {
    let mut v = vec![BigInt::from(0); cols];
    v[col] = BigInt::from(scale);
    v
}

/// Extends `state` by one class. The returned state is `None` when the new
/// layer is trivial, i.e. when `state` already presents the largest
/// nilpotent quotient.
pub fn extend_one_class(state: &NqState, opts: &NqOptions) -> Result<Extension, NqError> {
    let started = std::time::Instant::now();
    opts.budget.check_time()?;
    let p = &state.pcp;
    let pres = &state.presentation;
    let n = p.n();
    let class = state.class;
    let target = class + 1;
    let exec = opts.execution;
    let (tails, split) = tail_columns(p, &state.images, class);
    let cols = tails.len();
    let total = n + cols;

    // covering presentation with one central tail per column
    let mut b = PcpBuilder::new(
        p.weights().iter().copied().chain(std::iter::repeat_n(target, cols)).collect(),
        p.rel_orders().iter().copied().chain(std::iter::repeat_n(0, cols)).collect(),
    );
    for k in 0..n {
        b.define(k, p.definitions()[k]);
    }
    for (&i, w) in p.power_relations() {
        b.power(i, w.clone());
    }
    for (&(j, i), w) in p.commutator_relations() {
        b.commutator(j, i, w.clone());
    }
    let mut images: Vec<ExponentVector> = state.images.iter().map(|v| widen(v, total)).collect();
    for (col, t) in tails.iter().enumerate() {
        let g = n + col;
        match *t {
            Tail::Power(i) => {
                b.power(i, with_tail(p.power_rhs(i), vec![(g, 1)]));
            }
            Tail::Commutator(j, i) => {
                b.commutator(j, i, with_tail(p.commutator_rhs(j, i), vec![(g, 1)]));
            }
            Tail::Image(x) => images[x].0[g] += 1,
        }
    }
    let cover = b.build()?;

    let tests = consistency_tests(&cover, n, None);
    let mut rows: Vec<Row> = par::try_map(exec, &tests, |t| {
        let (l, r) = t.sides(&cover)?;
        difference(&l, &r, n)
    })?;
    opts.budget.check_time()?;

    let lookup_gen = |a: &Atom| -> Option<ExponentVector> {
        (a.kind == AtomKind::Generator)
            .then(|| pres.generator_index(&a.name).map(|x| images[x].clone()))
            .flatten()
    };
    let relator_rows = par::try_map(exec, &pres.relators, |r: &AbstractWord| {
        let v = crate::pcp::evaluate_with(&cover, r, &lookup_gen)?;
        tail_row(&v, n, &|| format!("relator {r}"))
    })?;
    rows.extend(relator_rows);

    let instances = instantiate_laws(&pres.laws, p.weights(), cols, target, opts.strategy);
    if let Some(cap) = opts.budget.max_instances {
        if instances.len() > cap {
            return Err(NqError::Budget(format!(
                "{} law instances at class {target} exceed the limit of {cap}",
                instances.len()
            )));
        }
    }
    let law_rows = par::try_map(exec, &instances, |inst| {
        let law = &pres.laws[inst.law];
        let assign: BTreeMap<&Atom, &ExponentVector> = law.variables.iter().zip(&inst.values).collect();
        let lookup = |a: &Atom| -> Option<ExponentVector> {
            if a.is_variable() {
                assign.get(a).map(|v| (*v).clone())
            } else {
                lookup_gen(a)
            }
        };
        let v = crate::pcp::evaluate_with(&cover, &law.body, &lookup)?;
        tail_row(&v, n, &|| format!("law {} at an instance", law.body))
    })?;
    rows.extend(law_rows);
    opts.budget.check_time()?;

    rows.retain(|r| !r.is_empty());
    rows.sort();
    rows.dedup();
    // short rows with small entries first keeps the intermediate echelon small
    rows.sort_by_key(|r| (r.len(), r.iter().map(|x| x.1.unsigned_abs()).max()));
    if let Some(cap) = opts.budget.max_rows {
        if rows.len() > cap {
            return Err(NqError::Budget(format!(
                "{} relation rows at class {target} exceed the limit of {cap}",
                rows.len()
            )));
        }
    }
    let hnf = lattice(cols, &rows, opts)?;

    let mut index = vec![None; cols];
    let mut survivors = Vec::new();
    for col in 0..cols {
        let order = match hnf.pivot_of(col) {
            None => 0,
            Some(d) => d.to_i64().ok_or(PcpError::Overflow)?,
        };
        if order == 1 {
            continue;
        }
        if col < split {
            return Err(NqError::Incomplete(format!(
                "tail of {:?} survives at class {target}; the law instances do not determine the layer",
                tails[col]
            )));
        }
        index[col] = Some(n + survivors.len());
        survivors.push((col, order));
    }
    let step = ClassStep {
        class: target,
        tails: cols,
        consistency_tests: tests.len(),
        law_instances: instances.len(),
        rows: rows.len(),
        rank: hnf.rank(),
        new_rel_orders: survivors.iter().map(|s| s.1).collect(),
        millis: 0,
    };
    if survivors.is_empty() {
        let step = ClassStep {
            millis: started.elapsed().as_millis() as u64,
            ..step
        };
        return Ok(Extension { step, state: None });
    }

    let reduce = |col: usize, scale: i64| -> Result<SparseWord, NqError> {
        let v = reduce_vector(&hnf, &unit(cols, col, scale)).map_err(|e| NqError::Engine(e.to_string()))?;
        to_sparse(&v, &index)
    };
    let r = survivors.len();
    let mut b = PcpBuilder::new(
        p.weights().iter().copied().chain(std::iter::repeat_n(target, r)).collect(),
        p.rel_orders().iter().copied().chain(survivors.iter().map(|s| s.1)).collect(),
    );
    for k in 0..n {
        b.define(k, p.definitions()[k]);
    }
    for (&i, w) in p.power_relations() {
        b.power(i, w.clone());
    }
    for (&(j, i), w) in p.commutator_relations() {
        b.commutator(j, i, w.clone());
    }
    let mut new_images: Vec<ExponentVector> = state.images.iter().map(|v| widen(v, n + r)).collect();
    for (col, t) in tails.iter().enumerate() {
        let tail = reduce(col, 1)?;
        match *t {
            Tail::Power(i) => {
                b.power(i, with_tail(p.power_rhs(i), tail));
            }
            Tail::Commutator(j, i) => {
                b.commutator(j, i, with_tail(p.commutator_rhs(j, i), tail));
            }
            Tail::Image(x) => {
                for (g, e) in tail {
                    new_images[x].0[g] += e;
                }
            }
        }
    }
    for &(col, order) in &survivors {
        let g = index[col].expect("survivor");
        if order > 0 {
            b.power(g, reduce(col, order)?);
        }
        if let Tail::Commutator(j, i) = tails[col] {
            b.define(g, Definition::Commutator(j, i));
        }
    }
    let next = b.build()?;
    if opts.check_consistency {
        let bad = consistency_violations(&next, false, exec)?;
        if let Some(v) = bad.first() {
            return Err(NqError::Engine(format!(
                "class {target} presentation fails {:?}: {} vs {}",
                v.test, v.left, v.right
            )));
        }
    }
    let step = ClassStep {
        millis: started.elapsed().as_millis() as u64,
        ..step
    };
    let mut log = state.log.clone();
    log.push(step.clone());
    Ok(Extension {
        step,
        state: Some(NqState {
            presentation: state.presentation.clone(),
            pcp: next,
            images: new_images,
            class: target,
            truncated: false,
            log,
        }),
    })
}

fn lattice(cols: usize, rows: &[Row], opts: &NqOptions) -> Result<Hnf, NqError> {
    let mut lb = LatticeBuilder::new(cols);
    let mut dense = vec![0i64; cols];
    for (k, row) in rows.iter().enumerate() {
        if k % 1024 == 0 {
            opts.budget.check_time()?;
        }
        dense.iter_mut().for_each(|x| *x = 0);
        for &(c, e) in row {
            dense[c as usize] = e;
        }
        lb.insert(&dense);
    }
    Ok(lb.finish())
}
