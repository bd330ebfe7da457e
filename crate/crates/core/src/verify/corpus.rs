//! Fixed presentations used across the checks.

use crate::nq::{nilpotent_quotient, NqError, NqOptions, NqState};
use crate::par::Execution;
use crate::words::parse_presentation;

/// The three-generator group with `x^4 = 1` and `[b^2, x, x] = 1`.
pub const N: &str = "group N { gens a,b,c; laws { $x^4; [b^2,$x,$x]; } }";

/// As [`N`] without the Engel-type law; used as a control.
pub const N_CONTROL: &str = "group N0 { gens a,b,c; laws { $x^4; } }";

/// Two-generator Burnside group of exponent 4.
pub const B24: &str = "group B24 { gens a,b; laws { $x^4; } }";

/// Two involutions, each with an abelian normal closure, in exponent 4.
pub const H2: &str = "group H2 { gens x1,x2; rels x1^2, x2^2; laws { $x^4; [$y,x1,x1]; [$y,x2,x2]; } }";

/// One member of the finite corpus: a presentation and an optional class
/// cap producing one of its lower central quotients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub source: &'static str,
    pub max_class: Option<u32>,
}

/// Exponent-4 presentations small enough for the oracle, with truncated
/// variants. Every quotient of an exponent-4 group has exponent dividing 4.
pub fn corpus() -> Vec<CorpusEntry> {
    let e = |name, source, max_class| CorpusEntry {
        name,
        source,
        max_class,
    };
    vec![
        e("C4", "group C4 { gens a; laws { $x^4; } }", None),
        e("D4", "group D4 { gens a,b; rels a^2, b^2; laws { $x^4; } }", None),
        e("D4/c1", "group D4 { gens a,b; rels a^2, b^2; laws { $x^4; } }", Some(1)),
        e("C4xC2", "group A { gens a,b; rels b^2, [a,b]; laws { $x^4; } }", None),
        e("H2", H2, None),
        e("B24", B24, None),
        e("B24/c1", B24, Some(1)),
        e("B24/c2", B24, Some(2)),
        e("B24/c3", B24, Some(3)),
        e("B24/c4", B24, Some(4)),
        e("N/c1", N, Some(1)),
        e("N/c2", N, Some(2)),
    ]
}

impl CorpusEntry {
    /// The quotient this entry stands for.
    pub fn quotient(&self, exec: Execution) -> Result<NqState, NqError> {
        let p = parse_presentation(self.source)?;
        let opts = NqOptions {
            max_class: self.max_class.unwrap_or(32),
            execution: exec,
            ..NqOptions::default()
        };
        nilpotent_quotient(&p, &opts)
    }
}
