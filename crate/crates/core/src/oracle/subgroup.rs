//! Subgroups as sorted member lists, and the exhaustive scans over them.

use num_integer::Integer;

use super::{FiniteGroup, OracleError};
use crate::par::{self, Execution};

/// A subset of a finite group together with exhaustively computed flags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupWitness {
    /// Sorted element indices.
    pub members: Vec<usize>,
    pub generators: Vec<usize>,
    pub is_subgroup: bool,
    pub is_normal: bool,
    /// Only computed for subgroups; `None` if not nilpotent.
    pub nilpotency_class: Option<u32>,
    pub derived_length: Option<u32>,
}

impl SubgroupWitness {
    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    /// Computes every flag for `members` by brute force.
    pub fn new(g: &FiniteGroup, mut members: Vec<usize>, generators: Vec<usize>, exec: Execution) -> Self {
        members.sort_unstable();
        members.dedup();
        let mask = mask(g, &members);
        let is_subgroup = mask[0]
            && par::all_range(exec, members.len(), |a| {
                members.iter().all(|&b| mask[g.mul(members[a], b)])
            });
        let is_normal = is_subgroup
            && par::all_range(exec, g.order(), |x| members.iter().all(|&s| mask[g.conj(s, x)]));
        let (nilpotency_class, derived_length) = if is_subgroup {
            (
                nilpotency_class_of_subgroup(g, &members),
                Some(derived_length(g, &members)),
            )
        } else {
            (None, None)
        };
        SubgroupWitness {
            members,
            generators,
            is_subgroup,
            is_normal,
            nilpotency_class,
            derived_length,
        }
    }
}

fn mask(g: &FiniteGroup, members: &[usize]) -> Vec<bool> {
    let mut m = vec![false; g.order()];
    for &x in members {
        m[x] = true;
    }
    m
}

/// Subgroup generated by `gens`, sorted.
pub fn generated_subgroup(g: &FiniteGroup, gens: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; g.order()];
    seen[0] = true;
    let mut queue = vec![0];
    let mut k = 0;
    while k < queue.len() {
        let x = queue[k];
        k += 1;
        for &s in gens {
            let y = g.mul(x, s);
            if !seen[y] {
                seen[y] = true;
                queue.push(y);
            }
        }
    }
    queue.sort_unstable();
    queue
}

/// Subgroup generated by all `[x, y]` with `x` in `a`, `y` in `b`.
fn commutator_subgroup(g: &FiniteGroup, a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; g.order()];
    let mut gens = Vec::new();
    for &x in a {
        for &y in b {
            let c = g.comm(x, y);
            if !seen[c] {
                seen[c] = true;
                gens.push(c);
            }
        }
    }
    generated_subgroup(g, &gens)
}

/// Class of the subgroup `members`, or `None` if its lower central series
/// stabilizes above the identity.
pub fn nilpotency_class_of_subgroup(g: &FiniteGroup, members: &[usize]) -> Option<u32> {
    let mut gamma = members.to_vec();
    let mut class = 0;
    while gamma.len() > 1 {
        let next = commutator_subgroup(g, &gamma, members);
        if next.len() == gamma.len() {
            return None;
        }
        gamma = next;
        class += 1;
    }
    Some(class)
}

/// Derived length of the subgroup `members`; `u32::MAX` if not solvable.
pub fn derived_length(g: &FiniteGroup, members: &[usize]) -> u32 {
    let mut d = members.to_vec();
    let mut len = 0;
    while d.len() > 1 {
        let next = commutator_subgroup(g, &d, &d);
        if next.len() == d.len() {
            return u32::MAX;
        }
        d = next;
        len += 1;
    }
    len
}

pub fn is_abelian(g: &FiniteGroup, members: &[usize]) -> bool {
    members
        .iter()
        .all(|&x| members.iter().all(|&y| g.mul(x, y) == g.mul(y, x)))
}

/// Whether `[x, y, y] = 1` for all `x, y` in `members`.
pub fn satisfies_2_engel(g: &FiniteGroup, members: &[usize], exec: Execution) -> bool {
    par::all_range(exec, members.len(), |a| {
        let x = members[a];
        members.iter().all(|&y| g.comm(g.comm(x, y), y) == 0)
    })
}

/// `R_2(G) = { a : [a, x, x] = 1 for all x }`.
pub fn right_2_engel_set(g: &FiniteGroup, exec: Execution) -> SubgroupWitness {
    let members = par::filter_range(exec, g.order(), |a| (0..g.order()).all(|x| g.comm(g.comm(a, x), x) == 0));
    SubgroupWitness::new(g, members, Vec::new(), exec)
}

/// Nontrivial elements of order 2.
pub fn involutions(g: &FiniteGroup) -> Vec<usize> {
    (1..g.order()).filter(|&u| g.mul(u, u) == 0).collect()
}

/// Whether `[x, u, u] = 1` for every `x`.
pub fn is_left_2_engel(g: &FiniteGroup, u: usize) -> bool {
    (0..g.order()).all(|x| g.comm(g.comm(x, u), u) == 0)
}

/// Smallest normal subgroup containing `u`.
pub fn normal_closure(g: &FiniteGroup, u: usize, exec: Execution) -> SubgroupWitness {
    let mut conj: Vec<usize> = (0..g.order()).map(|x| g.conj(u, x)).collect();
    conj.sort_unstable();
    conj.dedup();
    let members = generated_subgroup(g, &conj);
    SubgroupWitness::new(g, members, conj, exec)
}

/// Least common multiple of the element orders.
pub fn exponent(g: &FiniteGroup) -> u64 {
    (0..g.order()).fold(1, |acc, a| acc.lcm(&g.element_order(a)))
}

/// `G / N`, with each coset represented by its smallest index. Checks that
/// the product of cosets does not depend on the representatives.
pub fn quotient(g: &FiniteGroup, n: &SubgroupWitness, exec: Execution) -> Result<FiniteGroup, OracleError> {
    if !n.is_subgroup || !n.is_normal {
        return Err(OracleError::NotNormal);
    }
    let mut coset = vec![usize::MAX; g.order()];
    let mut reps = Vec::new();
    for a in 0..g.order() {
        if coset[a] != usize::MAX {
            continue;
        }
        for &s in &n.members {
            coset[g.mul(a, s)] = reps.len();
        }
        reps.push(a);
    }
    let table: Vec<Vec<usize>> = reps
        .iter()
        .map(|&a| reps.iter().map(|&b| coset[g.mul(a, b)]).collect())
        .collect();
    let well_defined = par::all_range(exec, g.order(), |a| {
        (0..g.order()).all(|b| coset[g.mul(a, b)] == table[coset[a]][coset[b]])
    });
    if !well_defined {
        return Err(OracleError::NotNormal);
    }
    let labels = reps.iter().map(|&a| g.label(a).clone()).collect();
    FiniteGroup::from_table(table, labels)
}
