//! The involution lemma for groups of exponent 4: every involution of
//! `G / R_2(G)` is left 2-Engel there.

use serde_json::{json, Value};

use super::subgroup::{exponent, involutions, quotient, right_2_engel_set};
use super::{FiniteGroup, OracleError};
use crate::par::{self, Execution};
use crate::pcp::json::vector_value;
use crate::pcp::ExponentVector;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaReport {
    pub order: usize,
    pub exponent: u64,
    pub r2_order: usize,
    pub quotient_order: usize,
    /// Involutions of the quotient.
    pub involution_count: usize,
    pub lemma_pass: bool,
    /// Pairs `(u, x)` in the quotient with `u^2 = 1` and `[x, u, u] != 1`,
    /// labelled by coset representatives.
    pub witnesses: Vec<(ExponentVector, ExponentVector)>,
}

impl LemmaReport {
    pub fn to_json(&self, group: &str) -> Value {
        json!({
            "group": group,
            "order": self.order.to_string(),
            "exponent": self.exponent.to_string(),
            "r2_order": self.r2_order.to_string(),
            "quotient_order": self.quotient_order.to_string(),
            "involution_count": self.involution_count.to_string(),
            "lemma_pass": self.lemma_pass,
            "witnesses": self.witnesses.iter().map(|(u, x)| json!({"u": vector_value(u), "x": vector_value(x)})).collect::<Vec<_>>(),
        })
    }
}

/// Runs the lemma on `g`. Groups whose exponent does not divide 4 are
/// rejected, since the lemma says nothing about them.
pub fn check_lemma(g: &FiniteGroup, exec: Execution) -> Result<LemmaReport, OracleError> {
    let e = exponent(g);
    if 4 % e != 0 {
        return Err(OracleError::ExponentTooLarge(e));
    }
    let r2 = right_2_engel_set(g, exec);
    let q = quotient(g, &r2, exec)?;
    let invs = involutions(&q);
    let found = par::map(exec, &invs, |&u| (0..q.order()).find(|&x| q.comm(q.comm(x, u), u) != 0));
    let witnesses: Vec<(ExponentVector, ExponentVector)> = invs
        .iter()
        .zip(found)
        .filter_map(|(&u, x)| x.map(|x| (q.label(u).clone(), q.label(x).clone())))
        .collect();
    Ok(LemmaReport {
        order: g.order(),
        exponent: e,
        r2_order: r2.order(),
        quotient_order: q.order(),
        involution_count: invs.len(),
        lemma_pass: witnesses.is_empty(),
        witnesses,
    })
}
