//! Expression algebra for presentations: atoms, abstract words, laws, and
//! the text format used to write presentations down.

mod free;
mod parse;

use std::collections::BTreeSet;
use std::fmt;

pub use free::{flatten, FreeWord, Letter};
pub use parse::{parse_presentation, parse_presentations};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WordError {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("undeclared identifier `{name}` at {line}:{column}")]
    Undeclared {
        name: String,
        line: usize,
        column: usize,
    },
    #[error("law `{0}` has no variables; write it as a relator")]
    LawWithoutVariables(String),
    #[error("variable `${name}` used outside a law at {line}:{column}")]
    VariableOutsideLaw {
        name: String,
        line: usize,
        column: usize,
    },
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("no substitution for atom `{0}`")]
    MissingSubstitution(String),
    #[error("left-normed commutator needs at least two entries, got {0}")]
    CommutatorTooShort(usize),
    #[error("expected exactly one group, found {0}")]
    GroupCount(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AtomKind {
    Generator,
    Variable,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub kind: AtomKind,
    pub name: String,
}

impl Atom {
    pub fn generator(name: impl Into<String>) -> Self {
        Atom {
            kind: AtomKind::Generator,
            name: name.into(),
        }
    }

    pub fn variable(name: impl Into<String>) -> Self {
        Atom {
            kind: AtomKind::Variable,
            name: name.into(),
        }
    }

    pub fn is_variable(&self) -> bool {
        self.kind == AtomKind::Variable
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            AtomKind::Generator => write!(f, "{}", self.name),
            AtomKind::Variable => write!(f, "${}", self.name),
        }
    }
}

/// Expression tree over atoms. Commutators are left-normed:
/// `Commutator([w1, w2, w3])` is `[[w1, w2], w3]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AbstractWord {
    Identity,
    Atom(Atom),
    Product(Vec<AbstractWord>),
    Power(Box<AbstractWord>, i64),
    Commutator(Vec<AbstractWord>),
}

impl AbstractWord {
    pub fn generator(name: &str) -> Self {
        AbstractWord::Atom(Atom::generator(name))
    }

    pub fn variable(name: &str) -> Self {
        AbstractWord::Atom(Atom::variable(name))
    }

    pub fn pow(self, exponent: i64) -> Self {
        AbstractWord::Power(Box::new(self), exponent)
    }

    pub fn inverse(self) -> Self {
        self.pow(-1)
    }

    pub fn product(factors: Vec<AbstractWord>) -> Self {
        AbstractWord::Product(factors)
    }

    /// Atoms in order of first occurrence.
    pub fn atoms(&self) -> Vec<Atom> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        self.visit_atoms(&mut |a| {
            if seen.insert(a.clone()) {
                out.push(a.clone());
            }
        });
        out
    }

    pub fn variables(&self) -> Vec<Atom> {
        self.atoms().into_iter().filter(Atom::is_variable).collect()
    }

    pub fn has_variables(&self) -> bool {
        !self.variables().is_empty()
    }

    fn visit_atoms(&self, f: &mut impl FnMut(&Atom)) {
        match self {
            AbstractWord::Identity => {}
            AbstractWord::Atom(a) => f(a),
            AbstractWord::Power(w, _) => w.visit_atoms(f),
            AbstractWord::Product(ws) | AbstractWord::Commutator(ws) => {
                for w in ws {
                    w.visit_atoms(f);
                }
            }
        }
    }

    /// Formal inverse as a tree, without any simplification.
    pub fn formal_inverse(&self) -> AbstractWord {
        self.clone().inverse()
    }
}

/// Builds `[[...[w1, w2], w3]..., wk]`.
pub fn left_normed(ws: Vec<AbstractWord>) -> Result<AbstractWord, WordError> {
    if ws.len() < 2 {
        return Err(WordError::CommutatorTooShort(ws.len()));
    }
    Ok(AbstractWord::Commutator(ws))
}

/// Rewrites an arity-k commutator into nested binary commutators.
pub fn nest_commutators(w: &AbstractWord) -> AbstractWord {
    match w {
        AbstractWord::Identity | AbstractWord::Atom(_) => w.clone(),
        AbstractWord::Power(inner, e) => AbstractWord::Power(Box::new(nest_commutators(inner)), *e),
        AbstractWord::Product(ws) => AbstractWord::Product(ws.iter().map(nest_commutators).collect()),
        AbstractWord::Commutator(ws) => {
            let mut it = ws.iter().map(nest_commutators);
            let mut acc = it.next().expect("commutator arity");
            for next in it {
                acc = AbstractWord::Commutator(vec![acc, next]);
            }
            acc
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Law {
    pub body: AbstractWord,
    pub variables: Vec<Atom>,
}

impl Law {
    pub fn new(body: AbstractWord) -> Result<Self, WordError> {
        let variables = body.variables();
        if variables.is_empty() {
            return Err(WordError::LawWithoutVariables(body.to_string()));
        }
        Ok(Law { body, variables })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub name: String,
    pub generators: Vec<Atom>,
    pub relators: Vec<AbstractWord>,
    pub laws: Vec<Law>,
}

impl Presentation {
    /// Checks the structural invariants and returns the presentation.
    pub fn new(
        name: impl Into<String>,
        generators: Vec<Atom>,
        relators: Vec<AbstractWord>,
        laws: Vec<Law>,
    ) -> Result<Self, WordError> {
        let p = Presentation {
            name: name.into(),
            generators,
            relators,
            laws,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), WordError> {
        let mut names = BTreeSet::new();
        for g in &self.generators {
            if g.is_variable() || !names.insert(g.name.as_str()) {
                return Err(WordError::DuplicateGenerator(g.name.clone()));
            }
        }
        let check = |w: &AbstractWord, allow_vars: bool| -> Result<(), WordError> {
            for a in w.atoms() {
                match a.kind {
                    AtomKind::Generator if !names.contains(a.name.as_str()) => {
                        return Err(WordError::Undeclared {
                            name: a.name,
                            line: 0,
                            column: 0,
                        })
                    }
                    AtomKind::Variable if !allow_vars => {
                        return Err(WordError::VariableOutsideLaw {
                            name: a.name,
                            line: 0,
                            column: 0,
                        })
                    }
                    _ => {}
                }
            }
            Ok(())
        };
        for r in &self.relators {
            check(r, false)?;
        }
        for law in &self.laws {
            check(&law.body, true)?;
            if law.variables.is_empty() {
                return Err(WordError::LawWithoutVariables(law.body.to_string()));
            }
        }
        Ok(())
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, ws: &[AbstractWord], sep: &str) -> fmt::Result {
    for (k, w) in ws.iter().enumerate() {
        if k > 0 {
            f.write_str(sep)?;
        }
        write!(f, "{w}")?;
    }
    Ok(())
}

impl AbstractWord {
    // A factor that can stand on its own to the left of `^` or inside `*`.
    fn fmt_factor(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AbstractWord::Identity | AbstractWord::Atom(_) | AbstractWord::Commutator(_) => {
                write!(f, "{self}")
            }
            AbstractWord::Product(_) | AbstractWord::Power(..) => write!(f, "({self})"),
        }
    }

    fn fmt_term(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AbstractWord::Product(_) => write!(f, "({self})"),
            _ => write!(f, "{self}"),
        }
    }
}

impl fmt::Display for AbstractWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AbstractWord::Identity => f.write_str("1"),
            AbstractWord::Atom(a) => write!(f, "{a}"),
            AbstractWord::Power(w, e) => {
                w.fmt_factor(f)?;
                write!(f, "^{e}")
            }
            AbstractWord::Product(ws) => {
                if ws.len() < 2 {
                    // single or empty products have no direct syntax
                    f.write_str("(")?;
                    match ws.first() {
                        Some(w) => write!(f, "{w}")?,
                        None => f.write_str("1")?,
                    }
                    return f.write_str(")");
                }
                for (k, w) in ws.iter().enumerate() {
                    if k > 0 {
                        f.write_str("*")?;
                    }
                    w.fmt_term(f)?;
                }
                Ok(())
            }
            AbstractWord::Commutator(ws) => {
                f.write_str("[")?;
                write_list(f, ws, ",")?;
                f.write_str("]")
            }
        }
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "group {} {{", self.name)?;
        let gens: Vec<&str> = self.generators.iter().map(|g| g.name.as_str()).collect();
        writeln!(f, "  gens {};", gens.join(","))?;
        if !self.relators.is_empty() {
            f.write_str("  rels ")?;
            write_list(f, &self.relators, ", ")?;
            writeln!(f, ";")?;
        }
        if !self.laws.is_empty() {
            writeln!(f, "  laws {{")?;
            for law in &self.laws {
                writeln!(f, "    {};", law.body)?;
            }
            writeln!(f, "  }}")?;
        }
        writeln!(f, "}}")
    }
}
