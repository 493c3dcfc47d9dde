//! Text syntax for theories and DNF formulas.
//!
//! Theories are Prolog-like: `p(a).`, `h :- b1, b2.`, `h1 ; h2 :- b.`,
//! `:- b1, b2.`. DNF formulas separate cubes with `|` and literals with `,`,
//! negation is a `~` prefix, and `true` / `false` stand for the empty cube
//! and the empty disjunction. Identifiers starting with an uppercase letter
//! or `_` are variables unless immediately followed by `(`. `%` starts a
//! line comment.

use super::syntax::{Atom, ClausalTheory, Clause, Cube, DnfFormula, Literal, Term};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Semi,
    Neck,
    Pipe,
    Tilde,
    Eof,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '#'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

fn lex(text: &str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1, 1);
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
            c
        };
        let tok = match c {
            '%' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    bump(&mut chars);
                }
                continue;
            }
            c if c.is_whitespace() => {
                bump(&mut chars);
                continue;
            }
            '(' => {
                bump(&mut chars);
                Tok::LParen
            }
            ')' => {
                bump(&mut chars);
                Tok::RParen
            }
            ',' => {
                bump(&mut chars);
                Tok::Comma
            }
            '.' => {
                bump(&mut chars);
                Tok::Dot
            }
            ';' => {
                bump(&mut chars);
                Tok::Semi
            }
            '|' => {
                bump(&mut chars);
                Tok::Pipe
            }
            '~' => {
                bump(&mut chars);
                Tok::Tilde
            }
            ':' => {
                bump(&mut chars);
                if chars.peek() == Some(&'-') {
                    bump(&mut chars);
                    Tok::Neck
                } else {
                    return Err(Error::Parse {
                        line: l,
                        column: col,
                        message: "expected ':-'".into(),
                    });
                }
            }
            c if is_ident_start(c) => {
                let mut s = String::new();
                s.push(c);
                bump(&mut chars);
                while let Some(&c) = chars.peek() {
                    if !is_ident_char(c) {
                        break;
                    }
                    s.push(c);
                    bump(&mut chars);
                }
                Tok::Ident(s)
            }
            other => {
                return Err(Error::Parse {
                    line: l,
                    column: col,
                    message: format!("unexpected character {other:?}"),
                })
            }
        };
        out.push(Spanned {
            tok,
            line: l,
            column: col,
        });
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

fn is_variable_name(s: &str) -> bool {
    s.starts_with(|c: char| c.is_ascii_uppercase() || c == '_')
}

impl Parser {
    fn new(text: &str) -> Result<Self> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
        })
    }

    fn at(&self, k: usize) -> &Spanned {
        &self.toks[k.min(self.toks.len() - 1)]
    }

    fn peek(&self) -> &Tok {
        &self.at(self.pos).tok
    }

    fn peek2(&self) -> &Tok {
        &self.at(self.pos + 1).tok
    }

    fn next(&mut self) -> Tok {
        let t = self.peek().clone();
        self.pos += 1;
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        let s = self.at(self.pos);
        Err(Error::Parse {
            line: s.line,
            column: s.column,
            message: message.into(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if *self.peek() == tok {
            self.next();
            Ok(())
        } else {
            self.error(format!("expected {what}, found {:?}", self.peek()))
        }
    }

    fn atom(&mut self) -> Result<Atom> {
        let name = match self.peek() {
            Tok::Ident(s) => s.clone(),
            other => return self.error(format!("expected an atom, found {other:?}")),
        };
        if *self.peek2() != Tok::LParen {
            if is_variable_name(&name) {
                return self.error(format!("variable {name} used as an atom"));
            }
            self.next();
            return Ok(Atom::prop(name));
        }
        self.next();
        self.next();
        let mut args = Vec::new();
        loop {
            match self.next() {
                Tok::Ident(t) if *self.peek() != Tok::LParen => {
                    args.push(if is_variable_name(&t) {
                        Term::Var(t)
                    } else {
                        Term::Const(t)
                    });
                }
                _ => {
                    self.pos -= 1;
                    return self.error("expected a term");
                }
            }
            match self.next() {
                Tok::Comma => continue,
                Tok::RParen => break,
                _ => {
                    self.pos -= 1;
                    return self.error("expected ',' or ')'");
                }
            }
        }
        Ok(Atom::new(name, args))
    }

    fn atom_list(&mut self, sep: Tok) -> Result<Vec<Atom>> {
        let mut atoms = vec![self.atom()?];
        while *self.peek() == sep {
            self.next();
            atoms.push(self.atom()?);
        }
        Ok(atoms)
    }

    fn clause(&mut self) -> Result<Clause> {
        let head = match self.peek() {
            Tok::Ident(_) => self.atom_list(Tok::Semi)?,
            Tok::Neck => Vec::new(),
            other => return self.error(format!("expected a clause, found {other:?}")),
        };
        let mut body = Vec::new();
        if *self.peek() == Tok::Neck {
            self.next();
            if *self.peek() != Tok::Dot {
                body = self.atom_list(Tok::Comma)?;
            }
        }
        self.expect(Tok::Dot, "'.'")?;
        Ok(Clause::new(head, body))
    }

    fn theory(&mut self) -> Result<ClausalTheory> {
        let mut t = ClausalTheory::default();
        while *self.peek() != Tok::Eof {
            t.push(self.clause()?);
        }
        Ok(t)
    }

    fn keyword(&self, word: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == word) && *self.peek2() != Tok::LParen
    }

    fn literal(&mut self) -> Result<Literal> {
        if *self.peek() == Tok::Tilde {
            self.next();
            Ok(Literal::neg(self.atom()?))
        } else {
            Ok(Literal::pos(self.atom()?))
        }
    }

    fn cube(&mut self) -> Result<Cube> {
        if self.keyword("true") {
            self.next();
            return Ok(Cube::default());
        }
        let mut lits = vec![self.literal()?];
        while *self.peek() == Tok::Comma {
            self.next();
            lits.push(self.literal()?);
        }
        Ok(Cube::new(lits))
    }

    fn dnf(&mut self) -> Result<DnfFormula> {
        if self.keyword("false") {
            self.next();
            return Ok(DnfFormula::falsum());
        }
        let mut cubes = vec![self.cube()?];
        while *self.peek() == Tok::Pipe {
            self.next();
            cubes.push(self.cube()?);
        }
        Ok(DnfFormula::new(cubes))
    }

    fn end(&self) -> Result<()> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            self.error(format!("unexpected {:?}", self.peek()))
        }
    }
}

pub fn parse_theory(text: &str) -> Result<ClausalTheory> {
    let mut p = Parser::new(text)?;
    let t = p.theory()?;
    p.end()?;
    Ok(t)
}

pub fn parse_dnf(text: &str) -> Result<DnfFormula> {
    let mut p = Parser::new(text)?;
    let d = p.dnf()?;
    p.end()?;
    Ok(d)
}

/// Parses a single atom such as `brighter(a,b)` or `bird`.
pub fn parse_atom(text: &str) -> Result<Atom> {
    let mut p = Parser::new(text)?;
    let a = p.atom()?;
    p.end()?;
    Ok(a)
}

pub fn serialize_theory(t: &ClausalTheory) -> String {
    t.clauses()
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("\n")
}

pub fn serialize_dnf(d: &DnfFormula) -> String {
    d.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_example3_theory() {
        let t = parse_theory("light(a). polygon(X) :- square(X). :- polygon(X), white(X).").unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t.clauses()[0], Clause::fact(Atom::ground("light", &["a"])));
        let rule = &t.clauses()[1];
        assert_eq!(rule.head, vec![Atom::new("polygon", vec![Term::var("X")])]);
        assert_eq!(rule.body, vec![Atom::new("square", vec![Term::var("X")])]);
        assert!(t.clauses()[2].head.is_empty());
        assert_eq!(t.clauses()[2].body.len(), 2);
    }

    #[test]
    fn parses_example2_hypothesis() {
        let d = parse_dnf("bird, light | red, light").unwrap();
        assert_eq!(d.cubes.len(), 2);
        assert_eq!(
            d.cubes[1],
            Cube::positive(vec![Atom::prop("red"), Atom::prop("light")])
        );
        assert!(d.is_dnf_plus());
    }

    #[test]
    fn disjunctive_heads_and_comments() {
        let t = parse_theory("% background\nred.\nsquare ; light.  % either\n").unwrap();
        assert_eq!(t.clauses()[1].head.len(), 2);
        assert!(!t.is_horn());
    }

    #[test]
    fn malformed_input_reports_position() {
        match parse_theory("p(") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (1, 3)),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(parse_theory("p(a)").is_err());
        assert!(parse_theory("X.").is_err());
        assert!(parse_dnf("a |").is_err());
        match parse_theory("a.\n  b :- .. ") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn uppercase_predicates_need_parentheses() {
        let d = parse_dnf("O(X,Y), I(X,Z), I(Y,Z)").unwrap();
        assert_eq!(d.cubes[0].literals[0].atom.predicate, "O");
        let t = parse_theory("#(b,c). :- #(X,Y), hel(X), hel(Y).").unwrap();
        assert_eq!(t.clauses()[0].head[0].predicate, "#");
    }

    #[test]
    fn keywords_and_negation() {
        assert_eq!(parse_dnf("true").unwrap(), DnfFormula::verum());
        assert_eq!(parse_dnf("false").unwrap(), DnfFormula::falsum());
        let d = parse_dnf("~bird, light").unwrap();
        assert!(!d.cubes[0].literals[0].positive);
        let empty = parse_theory(":- .").unwrap();
        assert!(empty.clauses()[0].is_empty());
    }

    fn arb_atom() -> impl Strategy<Value = Atom> {
        (
            prop::sample::select(vec!["p", "q", "rel", "O"]),
            prop::collection::vec(prop::sample::select(vec!["a", "b", "X", "Y"]), 0..3),
        )
            .prop_map(|(p, args)| {
                let args: Vec<Term> = args
                    .into_iter()
                    .map(|s| {
                        if is_variable_name(s) {
                            Term::var(s)
                        } else {
                            Term::constant(s)
                        }
                    })
                    .collect();
                // uppercase predicates must carry arguments to be readable
                if p == "O" && args.is_empty() {
                    Atom::new(p, vec![Term::constant("a")])
                } else {
                    Atom::new(p, args)
                }
            })
    }

    proptest! {
        #[test]
        fn theory_round_trip(clauses in prop::collection::vec(
            (prop::collection::vec(arb_atom(), 0..3), prop::collection::vec(arb_atom(), 0..3)), 0..4)) {
            let t = ClausalTheory::new(clauses.into_iter().map(|(h, b)| Clause::new(h, b)));
            let text = serialize_theory(&t);
            prop_assert_eq!(parse_theory(&text).unwrap(), t);
        }

        #[test]
        fn dnf_round_trip(cubes in prop::collection::vec(
            prop::collection::vec((arb_atom(), any::<bool>()), 0..3), 0..4)) {
            let d = DnfFormula::new(cubes.into_iter().map(|ls| Cube::new(
                ls.into_iter().map(|(a, s)| Literal { atom: a, positive: s }).collect())).collect());
            let text = serialize_dnf(&d);
            prop_assert_eq!(parse_dnf(&text).unwrap(), d);
        }
    }
}
