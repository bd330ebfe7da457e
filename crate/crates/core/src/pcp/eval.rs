use std::collections::BTreeMap;

use super::{ExponentVector, PcPresentation, PcpError};
use crate::words::{AbstractWord, Atom};

/// Value of `w` with each atom replaced by its assigned element.
pub fn evaluate_word(
    p: &PcPresentation,
    w: &AbstractWord,
    assignment: &BTreeMap<Atom, ExponentVector>,
) -> Result<ExponentVector, PcpError> {
    evaluate_with(p, w, &|a| assignment.get(a).cloned())
}

pub(crate) fn evaluate_with<F>(p: &PcPresentation, w: &AbstractWord, lookup: &F) -> Result<ExponentVector, PcpError>
where
    F: Fn(&Atom) -> Option<ExponentVector>,
{
    Ok(match w {
        AbstractWord::Identity => p.identity(),
        AbstractWord::Atom(a) => {
            let v = lookup(a).ok_or_else(|| PcpError::MissingAssignment(a.to_string()))?;
            if v.len() != p.n() {
                return Err(PcpError::Length {
                    expected: p.n(),
                    found: v.len(),
                });
            }
            v
        }
        AbstractWord::Product(ws) => {
            let mut acc = p.identity();
            for x in ws {
                let v = evaluate_with(p, x, lookup)?;
                acc = p.multiply(&acc, &v)?;
            }
            acc
        }
        AbstractWord::Power(x, e) => p.power(&evaluate_with(p, x, lookup)?, *e)?,
        AbstractWord::Commutator(ws) => {
            let mut it = ws.iter();
            let mut acc = match it.next() {
                Some(x) => evaluate_with(p, x, lookup)?,
                None => p.identity(),
            };
            for x in it {
                let v = evaluate_with(p, x, lookup)?;
                acc = p.commutator(&acc, &v)?;
            }
            acc
        }
    })
}
