//! Substitutions of group elements for law variables.

use crate::pcp::ExponentVector;
use crate::words::Law;

/// How law variables are instantiated at each class step.
///
/// Let `D` be the target class. For every element `x = g^e` the value of a
/// law at `x` lies in the new central layer and depends polynomially on the
/// exponents, with weighted degree at most `D` when `g_i` has weight
/// `w_i`. [`InstanceStrategy::Complete`] evaluates the law on every
/// exponent vector with `sum e_i w_i <= D` (jointly over all variables),
/// which determines that polynomial and hence enforces the law on the whole
/// group. The two cheaper strategies are heuristics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InstanceStrategy {
    /// Single generators per variable, total weight at most `D`.
    Generators,
    /// As `Generators`, plus products `g_i g_j` with `i <= j`.
    Products,
    #[default]
    Complete,
}

impl InstanceStrategy {
    pub fn name(&self) -> &'static str {
        match self {
            InstanceStrategy::Generators => "1",
            InstanceStrategy::Products => "2",
            InstanceStrategy::Complete => "full",
        }
    }
}

impl std::str::FromStr for InstanceStrategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "1" => Ok(InstanceStrategy::Generators),
            "2" => Ok(InstanceStrategy::Products),
            "full" | "complete" => Ok(InstanceStrategy::Complete),
            other => Err(format!("unknown depth `{other}`, expected 1, 2 or full")),
        }
    }
}

/// One substitution: `values[v]` is assigned to `law.variables[v]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LawInstance {
    pub law: usize,
    pub values: Vec<ExponentVector>,
}

/// All exponent vectors `e` over `weights` with `0 < sum e_i w_i <= bound`.
pub fn weighted_box(weights: &[u32], bound: u32) -> Vec<Vec<i64>> {
    fn go(weights: &[u32], k: usize, left: u32, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if k == weights.len() {
            if cur.iter().any(|&e| e != 0) {
                out.push(cur.clone());
            }
            return;
        }
        let w = weights[k].max(1);
        let mut e = 0;
        while e * w <= left {
            cur[k] = e as i64;
            go(weights, k + 1, left - e * w, cur, out);
            e += 1;
        }
        cur[k] = 0;
    }
    let mut out = Vec::new();
    go(weights, 0, bound, &mut vec![0; weights.len()], &mut out);
    out
}

/// Candidate values for one variable under the cheap strategies, paired
/// with their weight.
fn small_values(weights: &[u32], products: bool) -> Vec<(Vec<i64>, u32)> {
    let n = weights.len();
    let mut out = vec![(vec![0; n], 0)];
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = 1;
        out.push((e, weights[i]));
    }
    if products {
        for i in 0..n {
            for j in i..n {
                let mut e = vec![0; n];
                e[i] += 1;
                e[j] += 1;
                out.push((e, weights[i] + weights[j]));
            }
        }
    }
    out
}

/// Law instances over a presentation whose first `weights.len()`
/// generators carry the given weights and whose remaining `extra`
/// generators are central of weight `bound`. Each of those is also
/// substituted alone, with every other variable trivial.
pub fn instantiate_laws(
    laws: &[Law],
    weights: &[u32],
    extra: usize,
    bound: u32,
    strategy: InstanceStrategy,
) -> Vec<LawInstance> {
    let n = weights.len();
    let total = n + extra;
    let widen = |e: &[i64]| {
        let mut v = e.to_vec();
        v.resize(total, 0);
        ExponentVector(v)
    };
    let mut out = Vec::new();
    for (li, law) in laws.iter().enumerate() {
        let k = law.variables.len();
        match strategy {
            InstanceStrategy::Complete => {
                let joint: Vec<u32> = (0..k).flat_map(|_| weights.iter().copied()).collect();
                for e in weighted_box(&joint, bound) {
                    out.push(LawInstance {
                        law: li,
                        values: e.chunks(n).map(widen).collect(),
                    });
                }
            }
            InstanceStrategy::Generators | InstanceStrategy::Products => {
                let vals = small_values(weights, strategy == InstanceStrategy::Products);
                let mut idx = vec![0usize; k];
                'outer: loop {
                    let w: u32 = idx.iter().map(|&x| vals[x].1).sum();
                    if w > 0 && w <= bound {
                        out.push(LawInstance {
                            law: li,
                            values: idx.iter().map(|&x| widen(&vals[x].0)).collect(),
                        });
                    }
                    for d in (0..k).rev() {
                        idx[d] += 1;
                        if idx[d] < vals.len() {
                            continue 'outer;
                        }
                        idx[d] = 0;
                    }
                    break;
                }
            }
        }
        for v in 0..k {
            for t in n..total {
                let mut values = vec![ExponentVector::identity(total); k];
                values[v] = ExponentVector::unit(total, t);
                out.push(LawInstance { law: li, values });
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{AbstractWord, Law};

    #[test]
    fn box_sizes() {
        // partitions-like counts: weights (1,1) up to 2 gives 5 nonzero vectors
        assert_eq!(weighted_box(&[1, 1], 2).len(), 5);
        assert_eq!(weighted_box(&[1, 2], 2).len(), 3);
        assert!(weighted_box(&[], 3).is_empty());
    }

    #[test]
    fn strategies_nest() {
        let law = Law::new(AbstractWord::variable("x").pow(4)).unwrap();
        let w = [1, 1, 2];
        let g = instantiate_laws(std::slice::from_ref(&law), &w, 2, 3, InstanceStrategy::Generators);
        let p = instantiate_laws(std::slice::from_ref(&law), &w, 2, 3, InstanceStrategy::Products);
        let c = instantiate_laws(std::slice::from_ref(&law), &w, 2, 3, InstanceStrategy::Complete);
        assert_eq!(g.len(), 3 + 2);
        for inst in &g {
            assert!(p.contains(inst));
        }
        for inst in &p {
            assert!(c.contains(inst), "{inst:?}");
        }
    }

    #[test]
    fn two_variables_share_the_bound() {
        let law = Law::new(AbstractWord::Commutator(vec![
            AbstractWord::variable("x"),
            AbstractWord::variable("y"),
        ]))
        .unwrap();
        let c = instantiate_laws(std::slice::from_ref(&law), &[1], 0, 2, InstanceStrategy::Complete);
        // (e_x, e_y) with 0 < e_x + e_y <= 2
        assert_eq!(c.len(), 5);
        let t = instantiate_laws(std::slice::from_ref(&law), &[], 1, 1, InstanceStrategy::Complete);
        assert_eq!(t.len(), 2);
    }
}
