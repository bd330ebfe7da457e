//! Recursive-descent parser for the presentation text format.
//!
//! ```text
//! file   := group+
//! group  := "group" NAME "{" "gens" namelist ";" [ "rels" wordlist ";" ]
//!           [ "laws" "{" (word ";")+ "}" ] "}"
//! word   := term ("*" term)*
//! term   := factor [ "^" INT ]
//! factor := NAME | "$" NAME | "1" | "(" word ")" | "[" word ("," word)+ "]"
//! ```

use std::collections::BTreeSet;

use super::{AbstractWord, Atom, Law, Presentation, WordError};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Name(String),
    Int(i64),
    Dollar,
    Sym(char),
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(src: &str) -> Result<Vec<Token>, WordError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let advance = |i: &mut usize, col: &mut usize| {
            *i += 1;
            *col += 1;
        };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
        } else if c.is_whitespace() {
            advance(&mut i, &mut col);
        } else if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                advance(&mut i, &mut col);
            }
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                advance(&mut i, &mut col);
            }
            let name: String = chars[start..i].iter().collect();
            out.push(Token { tok: Tok::Name(name), line: tl, column: tc });
        } else if c.is_ascii_digit() || (c == '-' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            let start = i;
            advance(&mut i, &mut col);
            while i < chars.len() && chars[i].is_ascii_digit() {
                advance(&mut i, &mut col);
            }
            let text: String = chars[start..i].iter().collect();
            let value = text.parse::<i64>().map_err(|_| WordError::Syntax {
                line: tl,
                column: tc,
                message: format!("integer `{text}` out of range"),
            })?;
            out.push(Token { tok: Tok::Int(value), line: tl, column: tc });
        } else if c == '$' {
            advance(&mut i, &mut col);
            out.push(Token { tok: Tok::Dollar, line: tl, column: tc });
        } else if "{}[](),;*^".contains(c) {
            advance(&mut i, &mut col);
            out.push(Token { tok: Tok::Sym(c), line: tl, column: tc });
        } else {
            return Err(WordError::Syntax {
                line: tl,
                column: tc,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    out.push(Token { tok: Tok::Eof, line, column: col });
    Ok(out)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Context {
    Relator,
    Law,
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    gens: BTreeSet<String>,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, WordError> {
        let t = self.peek();
        Err(WordError::Syntax {
            line: t.line,
            column: t.column,
            message: message.into(),
        })
    }

    fn at_sym(&self, c: char) -> bool {
        self.peek().tok == Tok::Sym(c)
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(&self.peek().tok, Tok::Name(n) if n == kw)
    }

    fn expect_sym(&mut self, c: char) -> Result<(), WordError> {
        if self.at_sym(c) {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected `{c}`, found {}", describe(&self.peek().tok)))
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<(), WordError> {
        if self.at_keyword(kw) {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected `{kw}`, found {}", describe(&self.peek().tok)))
        }
    }

    fn name(&mut self) -> Result<String, WordError> {
        match &self.peek().tok {
            Tok::Name(n) => {
                let n = n.clone();
                self.bump();
                Ok(n)
            }
            other => self.error(format!("expected a name, found {}", describe(other))),
        }
    }

    fn group(&mut self) -> Result<Presentation, WordError> {
        self.expect_keyword("group")?;
        let name = self.name()?;
        self.expect_sym('{')?;
        self.expect_keyword("gens")?;
        let mut generators = Vec::new();
        self.gens.clear();
        loop {
            let g = self.name()?;
            if !self.gens.insert(g.clone()) {
                return Err(WordError::DuplicateGenerator(g));
            }
            generators.push(Atom::generator(g));
            if self.at_sym(',') {
                self.bump();
            } else {
                break;
            }
        }
        self.expect_sym(';')?;

        let mut relators = Vec::new();
        if self.at_keyword("rels") {
            self.bump();
            loop {
                relators.push(self.word(Context::Relator)?);
                if self.at_sym(',') {
                    self.bump();
                } else {
                    break;
                }
            }
            self.expect_sym(';')?;
        }

        let mut laws = Vec::new();
        if self.at_keyword("laws") {
            self.bump();
            self.expect_sym('{')?;
            loop {
                let body = self.word(Context::Law)?;
                self.expect_sym(';')?;
                laws.push(Law::new(body)?);
                if self.at_sym('}') {
                    break;
                }
            }
            self.expect_sym('}')?;
        }
        self.expect_sym('}')?;
        Ok(Presentation {
            name,
            generators,
            relators,
            laws,
        })
    }

    fn word(&mut self, ctx: Context) -> Result<AbstractWord, WordError> {
        let mut terms = vec![self.term(ctx)?];
        while self.at_sym('*') {
            self.bump();
            terms.push(self.term(ctx)?);
        }
        Ok(if terms.len() == 1 {
            terms.pop().unwrap()
        } else {
            AbstractWord::Product(terms)
        })
    }

    fn term(&mut self, ctx: Context) -> Result<AbstractWord, WordError> {
        let f = self.factor(ctx)?;
        if self.at_sym('^') {
            self.bump();
            match self.peek().tok {
                Tok::Int(e) => {
                    self.bump();
                    Ok(f.pow(e))
                }
                _ => self.error("expected an integer exponent after `^`"),
            }
        } else {
            Ok(f)
        }
    }

    fn factor(&mut self, ctx: Context) -> Result<AbstractWord, WordError> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Name(n) => {
                self.bump();
                if !self.gens.contains(n) {
                    return Err(WordError::Undeclared {
                        name: n.clone(),
                        line: t.line,
                        column: t.column,
                    });
                }
                Ok(AbstractWord::generator(n))
            }
            Tok::Dollar => {
                self.bump();
                let n = self.name()?;
                if ctx != Context::Law {
                    return Err(WordError::VariableOutsideLaw {
                        name: n,
                        line: t.line,
                        column: t.column,
                    });
                }
                if self.gens.contains(&n) {
                    return self.error(format!("variable `${n}` shadows a generator"));
                }
                Ok(AbstractWord::variable(&n))
            }
            Tok::Int(1) => {
                self.bump();
                Ok(AbstractWord::Identity)
            }
            Tok::Sym('(') => {
                self.bump();
                let w = self.word(ctx)?;
                self.expect_sym(')')?;
                Ok(w)
            }
            Tok::Sym('[') => {
                self.bump();
                let mut ws = vec![self.word(ctx)?];
                while self.at_sym(',') {
                    self.bump();
                    ws.push(self.word(ctx)?);
                }
                if ws.len() < 2 {
                    return self.error("commutator needs at least two entries");
                }
                self.expect_sym(']')?;
                Ok(AbstractWord::Commutator(ws))
            }
            other => self.error(format!("expected a factor, found {}", describe(other))),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Name(n) => format!("`{n}`"),
        Tok::Int(i) => format!("`{i}`"),
        Tok::Dollar => "`$`".into(),
        Tok::Sym(c) => format!("`{c}`"),
        Tok::Eof => "end of input".into(),
    }
}

/// Parses every `group` block in `source`.
pub fn parse_presentations(source: &str) -> Result<Vec<Presentation>, WordError> {
    let mut p = Parser {
        toks: lex(source)?,
        pos: 0,
        gens: BTreeSet::new(),
    };
    let mut out = vec![p.group()?];
    while p.peek().tok != Tok::Eof {
        out.push(p.group()?);
    }
    Ok(out)
}

/// Parses a source holding exactly one `group` block.
pub fn parse_presentation(source: &str) -> Result<Presentation, WordError> {
    let mut all = parse_presentations(source)?;
    if all.len() != 1 {
        return Err(WordError::GroupCount(all.len()));
    }
    Ok(all.pop().unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_the_n_presentation() {
        let p = parse_presentation("group N { gens a,b,c; laws { $x^4; [b^2,$x,$x]; } }").unwrap();
        assert_eq!(p.generators.len(), 3);
        assert!(p.relators.is_empty());
        assert_eq!(p.laws.len(), 2);
        assert_eq!(p.laws[1].body.to_string(), "[b^2,$x,$x]");
    }

    #[test]
    fn parses_free_and_dihedral() {
        let t = parse_presentation("group T { gens a; }").unwrap();
        assert_eq!((t.generators.len(), t.relators.len(), t.laws.len()), (1, 0, 0));
        let d = parse_presentation("group B { gens a,b; rels a^2, b^2, (a*b)^4; }").unwrap();
        assert_eq!(d.relators.len(), 3);
        assert_eq!(d.relators[2].to_string(), "(a*b)^4");
    }

    #[test]
    fn comments_and_multiple_groups() {
        let src = "# two groups\ngroup A { gens a; rels a^-4; }\n group B { gens x,y; rels [x,y]*1; }";
        let ps = parse_presentations(src).unwrap();
        assert_eq!(ps.len(), 2);
        assert_eq!(ps[0].relators[0], AbstractWord::generator("a").pow(-4));
        assert!(matches!(parse_presentation(src), Err(WordError::GroupCount(2))));
    }

    #[test]
    fn error_positions() {
        let e = parse_presentation("group G {\n  gens a;\n  rels a*b; }").unwrap_err();
        assert_eq!(
            e,
            WordError::Undeclared {
                name: "b".into(),
                line: 3,
                column: 10
            }
        );
        let e = parse_presentation("group G { gens a; rels a a; }").unwrap_err();
        assert!(matches!(e, WordError::Syntax { line: 1, column: 26, .. }), "{e:?}");
        let e = parse_presentation("group G { gens a; rels $x; }").unwrap_err();
        assert!(matches!(e, WordError::VariableOutsideLaw { .. }));
        let e = parse_presentation("group G { gens a; laws { a^2; } }").unwrap_err();
        assert!(matches!(e, WordError::LawWithoutVariables(_)));
        let e = parse_presentation("group G { gens a; rels [a]; }").unwrap_err();
        assert!(matches!(e, WordError::Syntax { .. }));
    }

    fn arb_word(vars: bool) -> impl Strategy<Value = AbstractWord> {
        let names = ["a", "b", "c"];
        let leaf = if vars {
            prop_oneof![
                Just(AbstractWord::Identity),
                (0usize..3).prop_map(move |k| AbstractWord::generator(names[k])),
                (0usize..2).prop_map(|k| AbstractWord::variable(["x", "y"][k])),
            ]
            .boxed()
        } else {
            prop_oneof![
                Just(AbstractWord::Identity),
                (0usize..3).prop_map(move |k| AbstractWord::generator(names[k])),
            ]
            .boxed()
        };
        leaf.prop_recursive(4, 24, 4, |inner| {
            prop_oneof![
                prop::collection::vec(inner.clone(), 2..4).prop_map(AbstractWord::Product),
                (inner.clone(), -5i64..6).prop_map(|(w, e)| w.pow(e)),
                prop::collection::vec(inner, 2..4).prop_map(AbstractWord::Commutator),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_then_parse_is_identity(
            rels in prop::collection::vec(arb_word(false), 0..3),
            laws in prop::collection::vec(arb_word(true), 0..3),
        ) {
            let laws: Vec<Law> = laws
                .into_iter()
                .filter_map(|w| Law::new(w).ok())
                .collect();
            let p = Presentation::new(
                "P",
                vec![Atom::generator("a"), Atom::generator("b"), Atom::generator("c")],
                rels,
                laws,
            ).unwrap();
            let text = p.to_string();
            let q = parse_presentation(&text).unwrap();
            prop_assert_eq!(q, p);
        }
    }
}
