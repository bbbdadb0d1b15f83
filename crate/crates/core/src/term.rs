//! Terms over one binary operation in the variables `x`, `y`, `z`, and the
//! `Xij` naming scheme for identities of Bol-Moufang type.
//!
//! An identity of Bol-Moufang type has four variable occurrences on each
//! side, three distinct variables, and the same left-to-right variable order
//! on both sides. Up to renaming and swapping sides, each one is determined by
//! a variable word (one of six, lettered `A`..`F`) and two distinct
//! bracketings of a four-letter word (numbered `1`..`5`).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors produced while reading terms, identities and names.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("not of Bol-Moufang type: {0}")]
    NotBolMoufang(String),
    #[error("invalid identity name {0:?} (expected [A-F][1-5][1-5] with distinct digits)")]
    BadName(String),
}

/// One of the three variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Var {
    X,
    Y,
    Z,
}

impl Var {
    pub const ALL: [Var; 3] = [Var::X, Var::Y, Var::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Var {
        Var::ALL[i]
    }

    pub fn letter(self) -> char {
        ['x', 'y', 'z'][self.index()]
    }
}

/// A product tree whose leaves are variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Var),
    Mul(Box<Term>, Box<Term>),
}

impl Term {
    pub fn mul(left: Term, right: Term) -> Term {
        Term::Mul(Box::new(left), Box::new(right))
    }

    /// Variables in left-to-right order, with repetition.
    pub fn leaves(&self) -> Vec<Var> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<Var>) {
        match self {
            Term::Var(v) => out.push(*v),
            Term::Mul(l, r) => {
                l.collect_leaves(out);
                r.collect_leaves(out);
            }
        }
    }

    /// The same product read right to left.
    pub fn mirror(&self) -> Term {
        match self {
            Term::Var(v) => Term::Var(*v),
            Term::Mul(l, r) => Term::mul(r.mirror(), l.mirror()),
        }
    }

    pub fn rename(&self, f: &impl Fn(Var) -> Var) -> Term {
        match self {
            Term::Var(v) => Term::Var(f(*v)),
            Term::Mul(l, r) => Term::mul(l.rename(f), r.rename(f)),
        }
    }

    /// Number of products in the tree.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::Mul(l, r) => 1 + l.size() + r.size(),
        }
    }

    /// The bracketing of a four-leaf term, if it has four leaves.
    pub fn bracketing(&self) -> Option<Bracketing> {
        let shape = self.shape();
        Bracketing::ALL.into_iter().find(|b| b.shape() == shape)
    }

    /// The printed form with every variable replaced by `o`.
    fn shape(&self) -> String {
        let mut s = String::new();
        write_term(&mut s, self, &|_| 'o');
        s
    }
}

fn write_term(out: &mut String, t: &Term, letter: &impl Fn(Var) -> char) {
    match t {
        Term::Var(v) => out.push(letter(*v)),
        Term::Mul(l, r) => {
            for side in [l, r] {
                if matches!(**side, Term::Mul(..)) {
                    out.push('(');
                    write_term(out, side, letter);
                    out.push(')');
                } else {
                    write_term(out, side, letter);
                }
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_term(&mut s, self, &Var::letter);
        f.write_str(&s)
    }
}

impl FromStr for Term {
    type Err = TermError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser::new(s);
        let t = p.product()?;
        p.finish()?;
        Ok(t)
    }
}

/// An arbitrary equation between two terms. Used for loop laws that are not
/// of Bol-Moufang type, such as associativity or flexibility.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Equation {
    pub lhs: Term,
    pub rhs: Term,
}

impl Equation {
    pub fn new(lhs: Term, rhs: Term) -> Self {
        Equation { lhs, rhs }
    }

    /// One more than the largest variable index used on either side.
    pub fn arity(&self) -> usize {
        self.lhs
            .leaves()
            .into_iter()
            .chain(self.rhs.leaves())
            .map(|v| v.index() + 1)
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}={}", self.lhs, self.rhs)
    }
}

impl FromStr for Equation {
    type Err = TermError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser::new(s);
        let lhs = p.product()?;
        p.expect('=')?;
        let rhs = p.product()?;
        p.finish()?;
        Ok(Equation { lhs, rhs })
    }
}

/// Recursive-descent reader for products written by juxtaposition, with
/// optional `*` or `·`. Unbracketed chains associate to the left.
struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src, pos: 0 }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, TermError> {
        Err(TermError::Syntax {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn peek(&mut self) -> Option<char> {
        let rest = &self.src[self.pos..];
        let trimmed = rest.trim_start();
        self.pos += rest.len() - trimmed.len();
        trimmed.chars().next()
    }

    fn bump(&mut self) {
        if let Some(c) = self.src[self.pos..].chars().next() {
            self.pos += c.len_utf8();
        }
    }

    fn expect(&mut self, want: char) -> Result<(), TermError> {
        match self.peek() {
            Some(c) if c == want => {
                self.bump();
                Ok(())
            }
            Some(c) => self.err(format!("expected '{want}', found '{c}'")),
            None => self.err(format!("expected '{want}', found end of input")),
        }
    }

    fn finish(&mut self) -> Result<(), TermError> {
        match self.peek() {
            None => Ok(()),
            Some(c) => self.err(format!("unexpected '{c}'")),
        }
    }

    fn product(&mut self) -> Result<Term, TermError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some('*') | Some('·') => {
                    self.bump();
                    let rhs = self.factor()?;
                    acc = Term::mul(acc, rhs);
                }
                Some('x' | 'y' | 'z' | '(') => {
                    let rhs = self.factor()?;
                    acc = Term::mul(acc, rhs);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Term, TermError> {
        match self.peek() {
            Some('x') => {
                self.bump();
                Ok(Term::Var(Var::X))
            }
            Some('y') => {
                self.bump();
                Ok(Term::Var(Var::Y))
            }
            Some('z') => {
                self.bump();
                Ok(Term::Var(Var::Z))
            }
            Some('(') => {
                self.bump();
                let t = self.product()?;
                self.expect(')')?;
                Ok(t)
            }
            Some(c) => self.err(format!("expected a variable x, y, z or '(', found '{c}'")),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Variable word of a Bol-Moufang identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pattern {
    A,
    B,
    C,
    D,
    E,
    F,
}

impl Pattern {
    pub const ALL: [Pattern; 6] = [
        Pattern::A,
        Pattern::B,
        Pattern::C,
        Pattern::D,
        Pattern::E,
        Pattern::F,
    ];

    pub fn word(self) -> [Var; 4] {
        use Var::*;
        match self {
            Pattern::A => [X, X, Y, Z],
            Pattern::B => [X, Y, X, Z],
            Pattern::C => [X, Y, Y, Z],
            Pattern::D => [X, Y, Z, X],
            Pattern::E => [X, Y, Z, Y],
            Pattern::F => [X, Y, Z, Z],
        }
    }

    pub fn from_word(word: &[Var]) -> Option<Pattern> {
        Pattern::ALL.into_iter().find(|p| p.word() == word)
    }

    pub fn letter(self) -> char {
        (b'A' + self as u8) as char
    }

    pub fn from_letter(c: char) -> Option<Pattern> {
        match c.to_ascii_uppercase() {
            'A' => Some(Pattern::A),
            'B' => Some(Pattern::B),
            'C' => Some(Pattern::C),
            'D' => Some(Pattern::D),
            'E' => Some(Pattern::E),
            'F' => Some(Pattern::F),
            _ => None,
        }
    }

    /// The word read backwards, renamed to first-occurrence order.
    pub fn dual(self) -> Pattern {
        match self {
            Pattern::A => Pattern::F,
            Pattern::B => Pattern::E,
            Pattern::C => Pattern::C,
            Pattern::D => Pattern::D,
            Pattern::E => Pattern::B,
            Pattern::F => Pattern::A,
        }
    }
}

/// One of the five ways to bracket a word of length four.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Bracketing(u8);

impl Bracketing {
    pub const ALL: [Bracketing; 5] = [
        Bracketing(1),
        Bracketing(2),
        Bracketing(3),
        Bracketing(4),
        Bracketing(5),
    ];

    pub fn new(k: u8) -> Option<Bracketing> {
        (1..=5).contains(&k).then_some(Bracketing(k))
    }

    pub fn number(self) -> u8 {
        self.0
    }

    pub fn shape(self) -> &'static str {
        match self.0 {
            1 => "o(o(oo))",
            2 => "o((oo)o)",
            3 => "(oo)(oo)",
            4 => "(o(oo))o",
            _ => "((oo)o)o",
        }
    }

    /// Bracket the given four leaves.
    pub fn apply(self, w: [Var; 4]) -> Term {
        let v = |i: usize| Term::Var(w[i]);
        match self.0 {
            1 => Term::mul(v(0), Term::mul(v(1), Term::mul(v(2), v(3)))),
            2 => Term::mul(v(0), Term::mul(Term::mul(v(1), v(2)), v(3))),
            3 => Term::mul(Term::mul(v(0), v(1)), Term::mul(v(2), v(3))),
            4 => Term::mul(Term::mul(v(0), Term::mul(v(1), v(2))), v(3)),
            _ => Term::mul(Term::mul(Term::mul(v(0), v(1)), v(2)), v(3)),
        }
    }

    pub fn dual(self) -> Bracketing {
        Bracketing(6 - self.0)
    }
}

/// The `Xij` code of a Bol-Moufang identity, always stored with `i < j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IdentityName {
    pattern: Pattern,
    left: Bracketing,
    right: Bracketing,
}

impl IdentityName {
    /// Builds a canonical name; the bracketings may be given in either
    /// order but must differ.
    pub fn new(pattern: Pattern, a: Bracketing, b: Bracketing) -> Option<IdentityName> {
        if a == b {
            return None;
        }
        let (left, right) = if a < b { (a, b) } else { (b, a) };
        Some(IdentityName {
            pattern,
            left,
            right,
        })
    }

    pub fn pattern(self) -> Pattern {
        self.pattern
    }

    pub fn left(self) -> Bracketing {
        self.left
    }

    pub fn right(self) -> Bracketing {
        self.right
    }

    /// Position in [`enumerate_all`] order, `0..60`.
    pub fn index(self) -> usize {
        let (i, j) = (self.left.0 as usize, self.right.0 as usize);
        // pairs (i, j) with i < j, numbered lexicographically
        let before_i: usize = (1..i).map(|k| 5 - k).sum();
        self.pattern as usize * 10 + before_i + (j - i - 1)
    }

    pub fn from_index(index: usize) -> Option<IdentityName> {
        enumerate_all().get(index).copied()
    }

    pub fn decode(self) -> Identity {
        let word = self.pattern.word();
        Identity {
            lhs: self.left.apply(word),
            rhs: self.right.apply(word),
        }
    }

    /// `X'j'i'`, re-canonicalized.
    pub fn dual(self) -> IdentityName {
        IdentityName::new(self.pattern.dual(), self.right.dual(), self.left.dual())
            .expect("dual bracketings stay distinct")
    }
}

impl fmt::Display for IdentityName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}", self.pattern.letter(), self.left.0, self.right.0)
    }
}

impl FromStr for IdentityName {
    type Err = TermError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || TermError::BadName(s.to_string());
        let mut chars = s.trim().chars();
        let (Some(p), Some(a), Some(b), None) =
            (chars.next(), chars.next(), chars.next(), chars.next())
        else {
            return Err(bad());
        };
        let pattern = Pattern::from_letter(p).ok_or_else(bad)?;
        let digit = |c: char| {
            c.to_digit(10)
                .and_then(|d| Bracketing::new(d as u8))
                .ok_or_else(bad)
        };
        IdentityName::new(pattern, digit(a)?, digit(b)?).ok_or_else(bad)
    }
}

impl Serialize for IdentityName {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for IdentityName {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// All 60 canonical names, ordered by pattern then bracketing pair.
pub fn enumerate_all() -> Vec<IdentityName> {
    let mut out = Vec::with_capacity(60);
    for pattern in Pattern::ALL {
        for (k, &a) in Bracketing::ALL.iter().enumerate() {
            for &b in &Bracketing::ALL[k + 1..] {
                out.push(IdentityName {
                    pattern,
                    left: a,
                    right: b,
                });
            }
        }
    }
    out
}

/// An identity of Bol-Moufang type, as written (not necessarily canonical).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Identity {
    lhs: Term,
    rhs: Term,
}

impl Identity {
    /// Checks the Bol-Moufang conditions: four occurrences of three distinct
    /// variables on each side, the same variable order on both sides, and
    /// different bracketings.
    pub fn new(lhs: Term, rhs: Term) -> Result<Identity, TermError> {
        let (l, r) = (lhs.leaves(), rhs.leaves());
        if l.len() != 4 || r.len() != 4 {
            return Err(TermError::NotBolMoufang(format!(
                "each side needs 4 variable occurrences, found {} and {}",
                l.len(),
                r.len()
            )));
        }
        if l != r {
            return Err(TermError::NotBolMoufang(
                "variables occur in different orders on the two sides".into(),
            ));
        }
        let mut distinct = l.clone();
        distinct.sort();
        distinct.dedup();
        if distinct.len() != 3 {
            return Err(TermError::NotBolMoufang(format!(
                "needs 3 distinct variables, found {}",
                distinct.len()
            )));
        }
        if lhs.bracketing() == rhs.bracketing() {
            return Err(TermError::NotBolMoufang(
                "both sides are bracketed the same way".into(),
            ));
        }
        Ok(Identity { lhs, rhs })
    }

    pub fn lhs(&self) -> &Term {
        &self.lhs
    }

    pub fn rhs(&self) -> &Term {
        &self.rhs
    }

    pub fn equation(&self) -> Equation {
        Equation::new(self.lhs.clone(), self.rhs.clone())
    }

    /// Renames variables to first-occurrence order and orders the sides.
    pub fn name(&self) -> IdentityName {
        let renamed = self.renamed();
        let word = renamed.lhs.leaves();
        let pattern = Pattern::from_word(&word).expect("validated on construction");
        let a = renamed.lhs.bracketing().expect("four leaves");
        let b = renamed.rhs.bracketing().expect("four leaves");
        IdentityName::new(pattern, a, b).expect("validated on construction")
    }

    /// The identity read backwards: each side mirrored, sides exchanged, then
    /// variables renamed to first-occurrence order.
    pub fn dual(&self) -> Identity {
        Identity {
            lhs: self.rhs.mirror(),
            rhs: self.lhs.mirror(),
        }
        .renamed()
    }

    fn renamed(&self) -> Identity {
        let mut order: Vec<Var> = Vec::with_capacity(3);
        for v in self.lhs.leaves() {
            if !order.contains(&v) {
                order.push(v);
            }
        }
        let map = |v: Var| {
            let pos = order.iter().position(|&u| u == v).expect("leaf of lhs");
            Var::from_index(pos)
        };
        Identity {
            lhs: self.lhs.rename(&map),
            rhs: self.rhs.rename(&map),
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}={}", self.lhs, self.rhs)
    }
}

impl FromStr for Identity {
    type Err = TermError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let eq: Equation = s.parse()?;
        Identity::new(eq.lhs, eq.rhs)
    }
}

/// Accepts either an `Xij` code or an identity string.
pub fn parse_name_or_identity(s: &str) -> Result<IdentityName, TermError> {
    if s.contains('=') {
        Ok(s.parse::<Identity>()?.name())
    } else {
        s.parse()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn name(s: &str) -> IdentityName {
        s.parse().unwrap()
    }

    #[test]
    fn parses_c25() {
        let id: Identity = "x((yy)z)=((xy)y)z".parse().unwrap();
        assert_eq!(id.name(), name("C25"));
    }

    #[test]
    fn rejects_identical_sides() {
        let err = "x(yz)=x(yz)".parse::<Identity>().unwrap_err();
        assert!(matches!(err, TermError::NotBolMoufang(_)));
    }

    #[test]
    fn rejects_malformed_and_wrong_shapes() {
        assert!(matches!(
            "x((yz)=x".parse::<Identity>(),
            Err(TermError::Syntax { .. })
        ));
        assert!(matches!(
            "x(yz)".parse::<Identity>(),
            Err(TermError::Syntax { .. })
        ));
        assert!(matches!(
            "xw=x".parse::<Identity>(),
            Err(TermError::Syntax { .. })
        ));
        // three leaves
        assert!(matches!(
            "x(yz)=(xy)z".parse::<Identity>(),
            Err(TermError::NotBolMoufang(_))
        ));
        // different variable orders
        assert!(matches!(
            "x(y(xz))=(x(xy))z".parse::<Identity>(),
            Err(TermError::NotBolMoufang(_))
        ));
        // only two distinct variables
        assert!(matches!(
            "x(y(xy))=((xy)x)y".parse::<Identity>(),
            Err(TermError::NotBolMoufang(_))
        ));
    }

    #[test]
    fn explicit_operators_and_whitespace() {
        let id: Identity = " x * ((y·y) * z) = ((x y) y) z ".parse().unwrap();
        assert_eq!(id.name(), name("C25"));
    }

    #[test]
    fn parses_e13_from_dual_example() {
        let id: Identity = "x(y(zy))=(xy)(zy)".parse().unwrap();
        assert_eq!(id.name(), name("E13"));
    }

    #[test]
    fn encode_examples() {
        let id: Identity = "(xy)(xz)=((xy)x)z".parse().unwrap();
        assert_eq!(id.name(), name("B35"));
        let id: Identity = "((xy)y)z = x((yy)z)".parse().unwrap();
        assert_eq!(id.name(), name("C25"));
        // renaming to first-occurrence order
        let id: Identity = "(zz)(xy)=(z(zx))y".parse().unwrap();
        assert_eq!(id.name(), name("A34"));
    }

    #[test]
    fn decode_examples() {
        assert_eq!(name("C25").decode().to_string(), "x((yy)z)=((xy)y)z");
        assert_eq!(name("D34").decode().to_string(), "(xy)(zx)=(x(yz))x");
        assert_eq!(name("A12").decode().to_string(), "x(x(yz))=x((xy)z)");
    }

    #[test]
    fn name_syntax_normalizes() {
        assert_eq!(name("C52"), name("C25"));
        assert_eq!(name("c25").to_string(), "C25");
        for bad in ["C22", "G12", "C16", "C2", "C123", ""] {
            assert!(bad.parse::<IdentityName>().is_err(), "{bad}");
        }
    }

    #[test]
    fn dual_name_examples() {
        assert_eq!(name("B35").dual(), name("E13"));
        assert_eq!(name("D15").dual(), name("D15"));
        assert_eq!(name("B14").dual(), name("E25"));
        assert_eq!(name("A34").dual(), name("F23"));
    }

    #[test]
    fn dual_term_examples() {
        let id: Identity = "(xy)(xz)=((xy)x)z".parse().unwrap();
        assert_eq!(id.dual().to_string(), "x(y(zy))=(xy)(zy)");
        let c15 = name("C15").decode();
        assert_eq!(c15.dual().name(), name("C15"));
        assert_eq!(name("A34").decode().dual().name(), name("F23"));
    }

    #[test]
    fn enumerate_all_is_canonical_and_indexed() {
        let all = enumerate_all();
        assert_eq!(all.len(), 60);
        assert_eq!(all[0], name("A12"));
        assert_eq!(all[59], name("F45"));
        for (k, n) in all.iter().enumerate() {
            assert_eq!(n.index(), k);
            assert!(n.left() < n.right());
            assert_eq!(n.dual().dual(), *n);
        }
        let mut sorted = all.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 60);
    }

    #[test]
    fn round_trips_and_commutation_on_all_names() {
        for n in enumerate_all() {
            let id = n.decode();
            assert_eq!(id.name(), n);
            assert_eq!(id.dual().name(), n.dual());
            assert_eq!(id.to_string().parse::<Identity>().unwrap(), id);
            if matches!(n.pattern(), Pattern::C | Pattern::D) {
                assert_eq!(n.dual().pattern(), n.pattern());
            }
        }
    }

    #[test]
    fn equation_arity() {
        let eq: Equation = "x(yx)=(xy)x".parse().unwrap();
        assert_eq!(eq.arity(), 2);
        let eq: Equation = "x(xx)=(xx)x".parse().unwrap();
        assert_eq!(eq.arity(), 1);
    }
}
