//! Classical propositional formulas over negated atoms.
//!
//! Negation lives on atoms only; `negate` pushes through conjunction and
//! disjunction by De Morgan duality, so the formula language is closed under
//! it without a negation node.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// Atoms over 20 and exhaustive truth-table checks are out of desk range.
pub const MAX_TAUTOLOGY_ATOMS: usize = 20;

/// `[a-z][a-zA-Z0-9_]*`
pub fn is_valid_atom(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// An atom together with a polarity; `~p` is the negative literal on `p`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    atom: String,
    positive: bool,
}

impl Literal {
    pub fn new(atom: &str, positive: bool) -> Result<Literal> {
        if !is_valid_atom(atom) {
            return Err(Error::Syntax {
                offset: 0,
                message: format!("invalid atom name `{atom}`"),
            });
        }
        Ok(Literal {
            atom: atom.to_string(),
            positive,
        })
    }

    pub fn positive(atom: &str) -> Result<Literal> {
        Literal::new(atom, true)
    }

    pub fn negative(atom: &str) -> Result<Literal> {
        Literal::new(atom, false)
    }

    /// Parses `p` or `~p`.
    pub fn parse(text: &str) -> Result<Literal> {
        match text.strip_prefix('~') {
            Some(rest) => Literal::negative(rest),
            None => Literal::positive(text),
        }
    }

    pub fn atom(&self) -> &str {
        &self.atom
    }

    pub fn is_positive(&self) -> bool {
        self.positive
    }

    /// Same atom, opposite polarity.
    pub fn dual(&self) -> Literal {
        Literal {
            atom: self.atom.clone(),
            positive: !self.positive,
        }
    }

    /// True when `self` and `other` name the same atom with opposite polarity.
    pub fn is_dual_of(&self, other: &Literal) -> bool {
        self.atom == other.atom && self.positive != other.positive
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            write!(f, "~")?;
        }
        write!(f, "{}", self.atom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Lit(Literal),
    True,
    False,
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
}

pub fn lit(atom: &str) -> Formula {
    Formula::Lit(Literal::positive(atom).expect("valid atom name"))
}

pub fn nlit(atom: &str) -> Formula {
    Formula::Lit(Literal::negative(atom).expect("valid atom name"))
}

pub fn and(left: Formula, right: Formula) -> Formula {
    Formula::And(Box::new(left), Box::new(right))
}

pub fn or(left: Formula, right: Formula) -> Formula {
    Formula::Or(Box::new(left), Box::new(right))
}

impl Formula {
    /// Parses the concrete syntax: atoms `[a-z][a-zA-Z0-9_]*`, `~` on atoms
    /// only, `&` binding tighter than `|`, both right-associative, parentheses,
    /// constants `1` and `0`. Whitespace is ignored. Errors carry the byte
    /// offset of the offending position.
    pub fn parse(text: &str) -> Result<Formula> {
        let mut p = Parser {
            bytes: text.as_bytes(),
            pos: 0,
        };
        let f = p.or_expr()?;
        p.skip_ws();
        if p.pos < p.bytes.len() {
            return Err(p.unexpected("end of input"));
        }
        Ok(f)
    }

    /// Fully parenthesised concrete syntax; atoms and constants stand bare.
    /// `parse(render(f)) == f` for every formula.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(&mut out);
        out
    }

    fn render_into(&self, out: &mut String) {
        match self {
            Formula::Lit(l) => out.push_str(&l.to_string()),
            Formula::True => out.push('1'),
            Formula::False => out.push('0'),
            Formula::And(l, r) => {
                out.push('(');
                l.render_into(out);
                out.push('&');
                r.render_into(out);
                out.push(')');
            }
            Formula::Or(l, r) => {
                out.push('(');
                l.render_into(out);
                out.push('|');
                r.render_into(out);
                out.push(')');
            }
        }
    }

    /// De Morgan negation: dualise literals, swap the constants, swap `&`/`|`.
    /// An involution.
    pub fn negate(&self) -> Formula {
        match self {
            Formula::Lit(l) => Formula::Lit(l.dual()),
            Formula::True => Formula::False,
            Formula::False => Formula::True,
            Formula::And(l, r) => or(l.negate(), r.negate()),
            Formula::Or(l, r) => and(l.negate(), r.negate()),
        }
    }

    /// Atom names occurring in the formula, sorted.
    pub fn atoms(&self) -> BTreeSet<String> {
        let mut set = BTreeSet::new();
        self.collect_atoms(&mut set);
        set
    }

    fn collect_atoms(&self, set: &mut BTreeSet<String>) {
        match self {
            Formula::Lit(l) => {
                set.insert(l.atom.clone());
            }
            Formula::True | Formula::False => {}
            Formula::And(l, r) | Formula::Or(l, r) => {
                l.collect_atoms(set);
                r.collect_atoms(set);
            }
        }
    }

    /// Literal occurrences in left-to-right order. Constants contribute none.
    pub fn leaves(&self) -> Vec<Literal> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<Literal>) {
        match self {
            Formula::Lit(l) => out.push(l.clone()),
            Formula::True | Formula::False => {}
            Formula::And(l, r) | Formula::Or(l, r) => {
                l.collect_leaves(out);
                r.collect_leaves(out);
            }
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            Formula::Lit(_) => 1,
            Formula::True | Formula::False => 0,
            Formula::And(l, r) | Formula::Or(l, r) => l.leaf_count() + r.leaf_count(),
        }
    }

    /// Truth value under the assignment; errors on the first atom the
    /// assignment does not cover.
    pub fn evaluate(&self, assignment: &dyn Fn(&str) -> Option<bool>) -> Result<bool> {
        match self {
            Formula::Lit(l) => match assignment(&l.atom) {
                Some(v) => Ok(v == l.positive),
                None => Err(Error::MissingAtom(l.atom.clone())),
            },
            Formula::True => Ok(true),
            Formula::False => Ok(false),
            Formula::And(l, r) => Ok(l.evaluate(assignment)? & r.evaluate(assignment)?),
            Formula::Or(l, r) => Ok(l.evaluate(assignment)? | r.evaluate(assignment)?),
        }
    }

    /// Exhaustive truth-table check over the formula's atoms.
    pub fn is_tautology(&self) -> Result<bool> {
        let atoms: Vec<String> = self.atoms().into_iter().collect();
        if atoms.len() > MAX_TAUTOLOGY_ATOMS {
            return Err(Error::Bound {
                what: "is_tautology atom count",
                limit: MAX_TAUTOLOGY_ATOMS,
                actual: atoms.len(),
            });
        }
        for bits in 0u32..(1u32 << atoms.len()) {
            let lookup = |name: &str| {
                atoms
                    .iter()
                    .position(|a| a == name)
                    .map(|i| bits >> i & 1 == 1)
            };
            if !self.evaluate(&lookup)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn unexpected(&self, wanted: &str) -> Error {
        let message = match self.bytes.get(self.pos) {
            Some(b) => format!("expected {wanted}, found `{}`", *b as char),
            None => format!("expected {wanted}, found end of input"),
        };
        Error::Syntax {
            offset: self.pos,
            message,
        }
    }

    fn or_expr(&mut self) -> Result<Formula> {
        let left = self.and_expr()?;
        if self.peek() == Some(b'|') {
            self.pos += 1;
            let right = self.or_expr()?;
            return Ok(or(left, right));
        }
        Ok(left)
    }

    fn and_expr(&mut self) -> Result<Formula> {
        let left = self.unit_expr()?;
        if self.peek() == Some(b'&') {
            self.pos += 1;
            let right = self.and_expr()?;
            return Ok(and(left, right));
        }
        Ok(left)
    }

    fn unit_expr(&mut self) -> Result<Formula> {
        match self.peek() {
            Some(b'1') => {
                self.pos += 1;
                Ok(Formula::True)
            }
            Some(b'0') => {
                self.pos += 1;
                Ok(Formula::False)
            }
            Some(b'~') => {
                self.pos += 1;
                self.skip_ws();
                let atom = self.atom_name()?;
                Ok(Formula::Lit(Literal {
                    atom,
                    positive: false,
                }))
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.or_expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.unexpected("`)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_lowercase() => {
                let atom = self.atom_name()?;
                Ok(Formula::Lit(Literal {
                    atom,
                    positive: true,
                }))
            }
            _ => Err(self.unexpected("a formula")),
        }
    }

    fn atom_name(&mut self) -> Result<String> {
        match self.bytes.get(self.pos) {
            Some(c) if c.is_ascii_lowercase() => {}
            _ => return Err(self.unexpected("an atom")),
        }
        let start = self.pos;
        while let Some(c) = self.bytes.get(self.pos) {
            if c.is_ascii_alphanumeric() || *c == b'_' {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok(String::from_utf8(self.bytes[start..self.pos].to_vec()).expect("ascii"))
    }
}
