//! Nilpotent quotients of finitely presented groups with laws.
//!
//! Starting from the trivial group, [`extend_one_class`] computes a
//! consistent presentation of `G / gamma_{c+2}(G)` from one of
//! `G / gamma_{c+1}(G)` by the tails method: add a central tail to every
//! relation that is not a definition, harvest linear relations among the
//! tails from the overlap tests, the relators and the law instances, and
//! keep the tails that survive the Hermite normal form.

mod instances;
mod step;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

pub use instances::{instantiate_laws, weighted_box, InstanceStrategy, LawInstance};
pub use step::extend_one_class;

use crate::par::{self, Execution};
use crate::pcp::{evaluate_with, json as pcp_json, ExponentVector, PcPresentation, PcpError};
use crate::words::{AbstractWord, Atom, AtomKind, Presentation, WordError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NqError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Pcp(#[from] PcpError),
    /// An internal invariant failed; this indicates a bug.
    #[error("internal error: {0}")]
    Engine(String),
    /// The chosen law instances did not pin down the new layer.
    #[error("incomplete law instances: {0}")]
    Incomplete(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
}

/// Resource limits; `None` means unlimited.
#[derive(Debug, Clone, Copy, Default)]
pub struct Budget {
    pub deadline: Option<Instant>,
    pub max_rows: Option<usize>,
    pub max_instances: Option<usize>,
}

impl Budget {
    pub fn with_seconds(secs: f64) -> Self {
        Budget {
            deadline: Some(Instant::now() + Duration::from_secs_f64(secs)),
            ..Budget::default()
        }
    }

    pub(crate) fn check_time(&self) -> Result<(), NqError> {
        match self.deadline {
            Some(d) if Instant::now() > d => Err(NqError::Budget("time limit reached".into())),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct NqOptions {
    pub max_class: u32,
    pub strategy: InstanceStrategy,
    pub execution: Execution,
    pub budget: Budget,
    /// Re-run the overlap tests on every new presentation.
    pub check_consistency: bool,
}

impl Default for NqOptions {
    fn default() -> Self {
        NqOptions {
            max_class: 20,
            strategy: InstanceStrategy::Complete,
            execution: Execution::default(),
            budget: Budget::default(),
            check_consistency: true,
        }
    }
}

/// Statistics of one class step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassStep {
    pub class: u32,
    pub tails: usize,
    pub consistency_tests: usize,
    pub law_instances: usize,
    pub rows: usize,
    pub rank: usize,
    /// Relative orders of the new generators, `0` for infinite ones.
    pub new_rel_orders: Vec<i64>,
    pub millis: u64,
}

#[derive(Debug, Clone)]
pub struct Extension {
    pub step: ClassStep,
    pub state: Option<NqState>,
}

/// A consistent presentation of a class-`class` quotient together with
/// the images of the presentation generators.
#[derive(Debug, Clone)]
pub struct NqState {
    pub presentation: Presentation,
    pub pcp: PcPresentation,
    /// Indexed like `presentation.generators`.
    pub images: Vec<ExponentVector>,
    pub class: u32,
    /// Set when the computation stopped at the class limit without
    /// confirming that the next layer is trivial.
    pub truncated: bool,
    pub log: Vec<ClassStep>,
}

impl NqState {
    /// The class-0 quotient: the trivial group.
    pub fn initial(presentation: &Presentation) -> Result<Self, NqError> {
        presentation.validate()?;
        Ok(NqState {
            presentation: presentation.clone(),
            pcp: PcPresentation::trivial(),
            images: vec![ExponentVector::identity(0); presentation.generators.len()],
            class: 0,
            truncated: false,
            log: Vec::new(),
        })
    }

    pub fn order(&self) -> Option<BigUint> {
        self.pcp.group_order()
    }

    pub fn image(&self, generator: &str) -> Option<&ExponentVector> {
        self.presentation.generator_index(generator).map(|x| &self.images[x])
    }

    /// Value of a variable-free word in the quotient.
    pub fn evaluate(&self, w: &AbstractWord) -> Result<ExponentVector, NqError> {
        let lookup = |a: &Atom| match a.kind {
            AtomKind::Generator => self.image(&a.name).cloned(),
            AtomKind::Variable => None,
        };
        Ok(evaluate_with(&self.pcp, w, &lookup)?)
    }

    /// Generator names mapped to their images.
    pub fn image_map(&self) -> BTreeMap<String, ExponentVector> {
        self.presentation
            .generators
            .iter()
            .zip(&self.images)
            .map(|(g, v)| (g.name.clone(), v.clone()))
            .collect()
    }

    /// Deterministic JSON summary; contains no timings.
    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("group".into(), json!(self.presentation.name));
        obj.insert("class".into(), json!(self.class.to_string()));
        obj.insert(
            "order".into(),
            match self.order() {
                Some(o) => json!(o.to_string()),
                None => json!("infinite"),
            },
        );
        obj.insert(
            "log2_order".into(),
            match self.order() {
                Some(o) if o.count_ones() == 1 => json!((o.bits() - 1).to_string()),
                _ => Value::Null,
            },
        );
        obj.insert("truncated".into(), json!(self.truncated));
        obj.insert("pcp".into(), pcp_json::to_value(&self.pcp, Some(&self.image_map())));
        let steps: Vec<Value> = self
            .log
            .iter()
            .map(|s| {
                json!({
                    "class": s.class.to_string(),
                    "tails": s.tails.to_string(),
                    "consistency_tests": s.consistency_tests.to_string(),
                    "law_instances": s.law_instances.to_string(),
                    "rows": s.rows.to_string(),
                    "rank": s.rank.to_string(),
                    "new_rel_orders": s.new_rel_orders.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                })
            })
            .collect();
        obj.insert("steps".into(), Value::Array(steps));
        Value::Object(obj)
    }
}

/// Largest nilpotent quotient of class at most `opts.max_class`.
pub fn nilpotent_quotient(presentation: &Presentation, opts: &NqOptions) -> Result<NqState, NqError> {
    let mut state = NqState::initial(presentation)?;
    while state.class < opts.max_class {
        match extend_one_class(&state, opts)?.state {
            Some(next) => state = next,
            None => return Ok(state),
        }
    }
    state.truncated = true;
    Ok(state)
}

/// Class-1 quotient, i.e. the abelianization subject to the laws.
pub fn abelian_quotient(presentation: &Presentation, opts: &NqOptions) -> Result<NqState, NqError> {
    let opts = NqOptions {
        max_class: 1,
        ..opts.clone()
    };
    nilpotent_quotient(presentation, &opts)
}

/// Uniform random element in normal form; infinite generators get
/// exponents in `[-spread, spread]`.
pub fn random_element<R: Rng>(p: &PcPresentation, rng: &mut R, spread: i64) -> ExponentVector {
    ExponentVector(
        p.rel_orders()
            .iter()
            .map(|&m| if m > 0 { rng.gen_range(0..m) } else { rng.gen_range(-spread..=spread) })
            .collect(),
    )
}

/// An instance where a law fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawFailure {
    pub law: usize,
    pub values: Vec<ExponentVector>,
    pub value: ExponentVector,
}

/// Evaluates law `i` at `samples[i]` random substitutions (laws beyond
/// the slice are skipped). Sample `k` is drawn from its own stream of a
/// generator seeded with `seed`, so the result does not depend on the
/// execution mode.
pub fn audit_laws(state: &NqState, samples: &[usize], seed: u64, exec: Execution) -> Result<Vec<LawFailure>, NqError> {
    let p = &state.pcp;
    let mut failures = Vec::new();
    for (li, law) in state.presentation.laws.iter().enumerate() {
        let count = samples.get(li).copied().unwrap_or(0);
        let results = par::map_range(exec, count, |k| -> Result<Option<LawFailure>, NqError> {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(((li as u64) << 40) | k as u64);
            let values: Vec<ExponentVector> = law.variables.iter().map(|_| random_element(p, &mut rng, 3)).collect();
            let assign: BTreeMap<&Atom, &ExponentVector> = law.variables.iter().zip(&values).collect();
            let lookup = |a: &Atom| match a.kind {
                AtomKind::Variable => assign.get(a).map(|v| (*v).clone()),
                AtomKind::Generator => state.image(&a.name).cloned(),
            };
            let value = evaluate_with(p, &law.body, &lookup)?;
            Ok((!value.is_identity()).then_some(LawFailure { law: li, values, value }))
        });
        for r in results {
            if let Some(f) = r? {
                failures.push(f);
            }
        }
    }
    Ok(failures)
}
