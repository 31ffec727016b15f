//! Formula syntax:
//!
//! ```text
//! phi  ::= conj ("->" phi)?
//! conj ::= atom ("&" atom)*
//! atom ::= "T" | "(" phi ")" | ("exists" | "forall") ident ":" set "." phi
//!        | term "=" term | ident "(" term ("," term)* ")" | "Rel" "(" ident ";" terms ")"
//! term ::= ident | ident "(" term ")"
//! ```
//!
//! An identifier applied to arguments is a map application when followed by
//! `=` and a relation otherwise.

use std::collections::BTreeMap;

use excomp::bhk::{Formula, Term};
use excomp::FiniteSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormulaError {
    /// 1-based character column.
    pub column: usize,
    pub message: String,
}

impl std::fmt::Display for FormulaError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "column {}: {}", self.column, self.message)
    }
}

impl std::error::Error for FormulaError {}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Sym(&'static str),
    End,
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, FormulaError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_alphanumeric() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
        } else if c == '-' && chars.get(i + 1) == Some(&'>') {
            out.push((Tok::Sym("->"), col));
            i += 2;
        } else {
            let sym = match c {
                '(' => "(",
                ')' => ")",
                ',' => ",",
                ';' => ";",
                ':' => ":",
                '.' => ".",
                '=' => "=",
                '&' => "&",
                _ => {
                    return Err(FormulaError {
                        column: col,
                        message: format!("unexpected character `{c}`"),
                    })
                }
            };
            out.push((Tok::Sym(sym), col));
            i += 1;
        }
    }
    out.push((Tok::End, chars.len() + 1));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    sets: &'a BTreeMap<String, FiniteSet>,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn col(&self) -> usize {
        self.toks[self.pos].1
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, FormulaError> {
        Err(FormulaError {
            column: self.col(),
            message: message.into(),
        })
    }

    fn eat(&mut self, sym: &str) -> bool {
        if matches!(self.peek(), Tok::Sym(s) if *s == sym) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, sym: &str) -> Result<(), FormulaError> {
        if self.eat(sym) {
            Ok(())
        } else {
            self.err(format!("expected `{sym}`"))
        }
    }

    fn ident(&mut self) -> Result<String, FormulaError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.pos += 1;
                Ok(s)
            }
            _ => self.err("expected an identifier"),
        }
    }

    fn formula(&mut self) -> Result<Formula, FormulaError> {
        let lhs = self.conj()?;
        if self.eat("->") {
            Ok(Formula::implies(lhs, self.formula()?))
        } else {
            Ok(lhs)
        }
    }

    fn conj(&mut self) -> Result<Formula, FormulaError> {
        let mut acc = self.atom()?;
        while self.eat("&") {
            acc = Formula::and(acc, self.atom()?);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Formula, FormulaError> {
        if self.eat("(") {
            let phi = self.formula()?;
            self.expect(")")?;
            return Ok(phi);
        }
        let col = self.col();
        let name = self.ident()?;
        match name.as_str() {
            "T" => return Ok(Formula::Truth),
            "exists" | "forall" => {
                let var = self.ident()?;
                self.expect(":")?;
                let set_col = self.col();
                let set_name = self.ident()?;
                let Some(sort) = self.sets.get(&set_name) else {
                    return Err(FormulaError {
                        column: set_col,
                        message: format!("unknown set `{set_name}`"),
                    });
                };
                let sort = sort.clone();
                self.expect(".")?;
                let body = self.formula()?;
                return Ok(if name == "exists" {
                    Formula::exists(&var, &sort, body)
                } else {
                    Formula::forall(&var, &sort, body)
                });
            }
            "Rel" if matches!(self.peek(), Tok::Sym("(")) => {
                self.expect("(")?;
                let rel = self.ident()?;
                self.expect(";")?;
                let args = self.terms()?;
                self.expect(")")?;
                return Ok(Formula::Rel(rel, args));
            }
            _ => {}
        }
        let (head, args) = if self.eat("(") {
            let args = self.terms()?;
            self.expect(")")?;
            (name, Some(args))
        } else {
            (name, None)
        };
        if self.eat("=") {
            let lhs = match args {
                None => Term::Var(head),
                Some(mut a) if a.len() == 1 => Term::App(head, Box::new(a.remove(0))),
                Some(_) => {
                    return Err(FormulaError {
                        column: col,
                        message: format!("map `{head}` takes one argument"),
                    })
                }
            };
            let rhs = self.term()?;
            return Ok(Formula::Eq(lhs, rhs));
        }
        match args {
            Some(a) => Ok(Formula::Rel(head, a)),
            None => Err(FormulaError {
                column: col,
                message: format!("`{head}` is a term, not a formula"),
            }),
        }
    }

    fn terms(&mut self) -> Result<Vec<Term>, FormulaError> {
        let mut out = vec![self.term()?];
        while self.eat(",") {
            out.push(self.term()?);
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<Term, FormulaError> {
        let name = self.ident()?;
        if self.eat("(") {
            let arg = self.term()?;
            self.expect(")")?;
            Ok(Term::App(name, Box::new(arg)))
        } else {
            Ok(Term::Var(name))
        }
    }
}

pub fn parse_formula(src: &str, sets: &BTreeMap<String, FiniteSet>) -> Result<Formula, FormulaError> {
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
        sets,
    };
    let phi = p.formula()?;
    if *p.peek() != Tok::End {
        return p.err("unexpected input after the formula");
    }
    Ok(phi)
}

/// `x:X, y:Y` into variable and set names.
pub fn parse_context(src: &str) -> Result<Vec<(String, String)>, FormulaError> {
    let mut out = Vec::new();
    let mut offset = 0;
    for part in src.split(',') {
        let col = offset + part.len() - part.trim_start().len() + 1;
        offset += part.len() + 1;
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let Some((v, s)) = part.split_once(':') else {
            return Err(FormulaError {
                column: col,
                message: format!("expected `var:Set`, got `{part}`"),
            });
        };
        out.push((v.trim().to_string(), s.trim().to_string()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sets() -> BTreeMap<String, FiniteSet> {
        BTreeMap::from([("X".to_string(), FiniteSet::numbered("x", 2))])
    }

    #[test]
    fn precedence() {
        let phi = parse_formula("T & x = y -> exists z:X. f(z) = x", &sets()).unwrap();
        assert!(matches!(phi, Formula::Implies(ref a, _) if matches!(**a, Formula::And(..))));
    }

    #[test]
    fn relations_in_both_spellings() {
        let a = parse_formula("R(x, f(y))", &sets()).unwrap();
        let b = parse_formula("Rel(R; x, f(y))", &sets()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn errors_carry_columns() {
        let e = parse_formula("exists z:Nope. T", &sets()).unwrap_err();
        assert_eq!(e.column, 10);
        let e = parse_formula("x = ", &sets()).unwrap_err();
        assert_eq!(e.column, 5);
    }
}
