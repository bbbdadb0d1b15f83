//! Evaluating identities and variety laws over finite loops.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::loops::FiniteLoop;
use crate::term::{enumerate_all, Equation, Identity, IdentityName, Pattern, Term};

/// The varieties of loops of Bol-Moufang type, plus 3-power associative
/// loops. Declaration order is the row/column order of the separation table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variety {
    GR,
    EL,
    ML,
    CL,
    LB,
    RB,
    LC,
    RC,
    LA,
    FL,
    RA,
    LN,
    MN,
    RN,
    /// 3-power associative loops.
    PA3,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown variety {0:?}")]
pub struct UnknownVariety(pub String);

impl Variety {
    pub const ALL: [Variety; 15] = [
        Variety::GR,
        Variety::EL,
        Variety::ML,
        Variety::CL,
        Variety::LB,
        Variety::RB,
        Variety::LC,
        Variety::RC,
        Variety::LA,
        Variety::FL,
        Variety::RA,
        Variety::LN,
        Variety::MN,
        Variety::RN,
        Variety::PA3,
    ];

    /// The fourteen varieties defined by a single Bol-Moufang identity.
    pub const BOL_MOUFANG: [Variety; 14] = [
        Variety::GR,
        Variety::EL,
        Variety::ML,
        Variety::CL,
        Variety::LB,
        Variety::RB,
        Variety::LC,
        Variety::RC,
        Variety::LA,
        Variety::FL,
        Variety::RA,
        Variety::LN,
        Variety::MN,
        Variety::RN,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn abbrev(self) -> &'static str {
        match self {
            Variety::GR => "GR",
            Variety::EL => "EL",
            Variety::ML => "ML",
            Variety::CL => "CL",
            Variety::LB => "LB",
            Variety::RB => "RB",
            Variety::LC => "LC",
            Variety::RC => "RC",
            Variety::LA => "LA",
            Variety::FL => "FL",
            Variety::RA => "RA",
            Variety::LN => "LN",
            Variety::MN => "MN",
            Variety::RN => "RN",
            Variety::PA3 => "3PA",
        }
    }

    pub fn long_name(self) -> &'static str {
        match self {
            Variety::GR => "groups",
            Variety::EL => "extra loops",
            Variety::ML => "Moufang loops",
            Variety::CL => "C-loops",
            Variety::LB => "left Bol loops",
            Variety::RB => "right Bol loops",
            Variety::LC => "LC-loops",
            Variety::RC => "RC-loops",
            Variety::LA => "left alternative loops",
            Variety::FL => "flexible loops",
            Variety::RA => "right alternative loops",
            Variety::LN => "left nuclear square loops",
            Variety::MN => "middle nuclear square loops",
            Variety::RN => "right nuclear square loops",
            Variety::PA3 => "3-power associative loops",
        }
    }

    /// Singular noun for one member, e.g. "RC-loop".
    pub fn member_name(self) -> &'static str {
        match self {
            Variety::GR => "group",
            Variety::EL => "extra loop",
            Variety::ML => "Moufang loop",
            Variety::CL => "C-loop",
            Variety::LB => "left Bol loop",
            Variety::RB => "right Bol loop",
            Variety::LC => "LC-loop",
            Variety::RC => "RC-loop",
            Variety::LA => "left alternative loop",
            Variety::FL => "flexible loop",
            Variety::RA => "right alternative loop",
            Variety::LN => "left nuclear square loop",
            Variety::MN => "middle nuclear square loop",
            Variety::RN => "right nuclear square loop",
            Variety::PA3 => "3-power associative loop",
        }
    }

    /// The defining law as written in the table of definitions.
    pub fn defining_text(self) -> &'static str {
        match self {
            Variety::GR => "x(yz)=(xy)z",
            Variety::EL => "x(y(zx))=((xy)z)x",
            Variety::ML => "(xy)(zx)=(x(yz))x",
            Variety::LB => "x(y(xz))=(x(yx))z",
            Variety::RB => "x((yz)y)=((xy)z)y",
            Variety::CL => "x(y(yz))=((xy)y)z",
            Variety::LC => "(xx)(yz)=(x(xy))z",
            Variety::RC => "x((yz)z)=(xy)(zz)",
            Variety::LA => "x(xy)=(xx)y",
            Variety::RA => "x(yy)=(xy)y",
            Variety::FL => "x(yx)=(xy)x",
            Variety::LN => "(xx)(yz)=((xx)y)z",
            Variety::MN => "x((yy)z)=(x(yy))z",
            Variety::RN => "x(y(zz))=(xy)(zz)",
            Variety::PA3 => "x(xx)=(xx)x",
        }
    }

    pub fn defining_law(self) -> Equation {
        self.defining_text()
            .parse()
            .expect("defining laws are well formed")
    }

    /// The `Xij` name of the defining law, for varieties defined by one.
    pub fn defining_name(self) -> Option<IdentityName> {
        self.defining_text()
            .parse::<Identity>()
            .ok()
            .map(|id| id.name())
    }

    /// The variety of opposite loops.
    pub fn dual(self) -> Variety {
        match self {
            Variety::LB => Variety::RB,
            Variety::RB => Variety::LB,
            Variety::LC => Variety::RC,
            Variety::RC => Variety::LC,
            Variety::LA => Variety::RA,
            Variety::RA => Variety::LA,
            Variety::LN => Variety::RN,
            Variety::RN => Variety::LN,
            v => v,
        }
    }
}

impl fmt::Display for Variety {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.abbrev())
    }
}

impl FromStr for Variety {
    type Err = UnknownVariety;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        Variety::ALL
            .into_iter()
            .find(|v| v.abbrev().eq_ignore_ascii_case(t) || (t.eq_ignore_ascii_case("PA3") && *v == Variety::PA3))
            .ok_or_else(|| UnknownVariety(s.to_string()))
    }
}

impl Serialize for Variety {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.abbrev())
    }
}

impl<'de> Deserialize<'de> for Variety {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An assignment at which a law fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    /// `Xij` name or the law as text.
    pub law: String,
    /// Values of `x`, `y`, `z`; unused variables are `0`.
    pub assignment: [usize; 3],
    pub lhs_value: usize,
    pub rhs_value: usize,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [x, y, z] = self.assignment;
        write!(
            f,
            "{} fails at x={x}, y={y}, z={z}: {} != {}",
            self.law, self.lhs_value, self.rhs_value
        )
    }
}

#[derive(Debug, Clone, Copy)]
enum Operand {
    Var(usize),
    Slot(usize),
}

/// A term flattened into a list of products; the last product is the value.
#[derive(Debug, Clone)]
pub(crate) struct Program {
    ops: Vec<(Operand, Operand)>,
    leaf: Option<usize>,
}

impl Program {
    pub(crate) fn compile(t: &Term) -> Program {
        let mut ops = Vec::with_capacity(t.size());
        let root = Self::emit(t, &mut ops);
        let leaf = match root {
            Operand::Var(v) => Some(v),
            Operand::Slot(_) => None,
        };
        Program { ops, leaf }
    }

    fn emit(t: &Term, ops: &mut Vec<(Operand, Operand)>) -> Operand {
        match t {
            Term::Var(v) => Operand::Var(v.index()),
            Term::Mul(l, r) => {
                let a = Self::emit(l, ops);
                let b = Self::emit(r, ops);
                ops.push((a, b));
                Operand::Slot(ops.len() - 1)
            }
        }
    }

    #[inline]
    pub(crate) fn eval(&self, l: &FiniteLoop, vars: &[usize; 3], scratch: &mut [usize]) -> usize {
        if let Some(v) = self.leaf {
            return vars[v];
        }
        let get = |o: Operand, scratch: &[usize]| match o {
            Operand::Var(v) => vars[v],
            Operand::Slot(s) => scratch[s],
        };
        for (i, &(a, b)) in self.ops.iter().enumerate() {
            scratch[i] = l.mul(get(a, scratch), get(b, scratch));
        }
        scratch[self.ops.len() - 1]
    }

    /// Evaluates over a partial table, where `cell(a, b)` is `None` for an
    /// undetermined product. Returns the value if determined, otherwise the
    /// pair whose product is missing if that is the final product and both
    /// factors are known.
    #[inline]
    pub(crate) fn eval_partial(
        &self,
        cell: impl Fn(usize, usize) -> Option<usize>,
        vars: &[usize; 3],
        scratch: &mut [Option<usize>],
    ) -> Partial {
        if let Some(v) = self.leaf {
            return Partial::Known(vars[v]);
        }
        let get = |o: Operand, scratch: &[Option<usize>]| match o {
            Operand::Var(v) => Some(vars[v]),
            Operand::Slot(s) => scratch[s],
        };
        let last = self.ops.len() - 1;
        for (i, &(a, b)) in self.ops.iter().enumerate() {
            scratch[i] = match (get(a, scratch), get(b, scratch)) {
                (Some(p), Some(q)) => match cell(p, q) {
                    Some(v) => Some(v),
                    None if i == last => return Partial::Missing(p, q),
                    None => None,
                },
                _ => None,
            };
        }
        match scratch[last] {
            Some(v) => Partial::Known(v),
            None => Partial::Unknown,
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.ops.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Partial {
    Known(usize),
    Missing(usize, usize),
    Unknown,
}

/// A law compiled for repeated evaluation.
#[derive(Debug, Clone)]
pub struct CompiledLaw {
    label: String,
    arity: usize,
    pub(crate) lhs: Program,
    pub(crate) rhs: Program,
}

impl CompiledLaw {
    pub fn new(label: impl Into<String>, eq: &Equation) -> CompiledLaw {
        CompiledLaw {
            label: label.into(),
            arity: eq.arity(),
            lhs: Program::compile(&eq.lhs),
            rhs: Program::compile(&eq.rhs),
        }
    }

    pub fn from_name(name: IdentityName) -> CompiledLaw {
        CompiledLaw::new(name.to_string(), &name.decode().equation())
    }

    pub fn from_variety(v: Variety) -> CompiledLaw {
        CompiledLaw::new(v.abbrev(), &v.defining_law())
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub(crate) fn scratch_len(&self) -> usize {
        self.lhs.len().max(self.rhs.len()).max(1)
    }

    /// Evaluates both sides at one assignment.
    pub fn eval_at(&self, l: &FiniteLoop, vars: [usize; 3]) -> (usize, usize) {
        let mut scratch = vec![0; self.scratch_len()];
        let a = self.lhs.eval(l, &vars, &mut scratch);
        let b = self.rhs.eval(l, &vars, &mut scratch);
        (a, b)
    }

    /// The lexicographically first failing assignment `(x, y, z)`, if any.
    /// Variables the law does not use stay `0`.
    pub fn counterexample(&self, l: &FiniteLoop) -> Option<Witness> {
        let n = l.order();
        let mut scratch = vec![0; self.scratch_len()];
        let bound = |k: usize| if k < self.arity { n } else { 1 };
        for x in 0..bound(0) {
            for y in 0..bound(1) {
                for z in 0..bound(2) {
                    let vars = [x, y, z];
                    let a = self.lhs.eval(l, &vars, &mut scratch);
                    let b = self.rhs.eval(l, &vars, &mut scratch);
                    if a != b {
                        return Some(Witness {
                            law: self.label.clone(),
                            assignment: vars,
                            lhs_value: a,
                            rhs_value: b,
                        });
                    }
                }
            }
        }
        None
    }

    pub fn holds(&self, l: &FiniteLoop) -> bool {
        self.counterexample(l).is_none()
    }
}

fn compiled_names() -> &'static [CompiledLaw] {
    static LAWS: OnceLock<Vec<CompiledLaw>> = OnceLock::new();
    LAWS.get_or_init(|| enumerate_all().into_iter().map(CompiledLaw::from_name).collect())
}

fn compiled_varieties() -> &'static [CompiledLaw] {
    static LAWS: OnceLock<Vec<CompiledLaw>> = OnceLock::new();
    LAWS.get_or_init(|| Variety::ALL.into_iter().map(CompiledLaw::from_variety).collect())
}

/// Whether `l` satisfies the identity; on failure, the lexicographically
/// first witness.
pub fn holds(l: &FiniteLoop, id: &Identity) -> Result<(), Witness> {
    let law = CompiledLaw::new(id.name().to_string(), &id.equation());
    law.counterexample(l).map_or(Ok(()), Err)
}

pub fn holds_name(l: &FiniteLoop, name: IdentityName) -> Result<(), Witness> {
    compiled_names()[name.index()]
        .counterexample(l)
        .map_or(Ok(()), Err)
}

pub fn holds_equation(l: &FiniteLoop, eq: &Equation) -> Result<(), Witness> {
    CompiledLaw::new(eq.to_string(), eq)
        .counterexample(l)
        .map_or(Ok(()), Err)
}

/// Whether both sides of `eq` differ at the given assignment.
pub fn fails_at(l: &FiniteLoop, eq: &Equation, vars: [usize; 3]) -> bool {
    let (a, b) = CompiledLaw::new(eq.to_string(), eq).eval_at(l, vars);
    a != b
}

pub fn variety_counterexample(l: &FiniteLoop, v: Variety) -> Option<Witness> {
    compiled_varieties()[v.index()].counterexample(l)
}

pub fn satisfies_variety(l: &FiniteLoop, v: Variety) -> bool {
    variety_counterexample(l, v).is_none()
}

/// Which of the 60 identities and 15 variety laws a loop satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Profile {
    pub identities: u64,
    pub varieties: u16,
}

const ALL_IDENTITIES: u64 = (1 << 60) - 1;
const ALL_VARIETIES: u16 = (1 << 15) - 1;

impl Profile {
    pub fn holds(&self, name: IdentityName) -> bool {
        self.identities >> name.index() & 1 == 1
    }

    pub fn in_variety(&self, v: Variety) -> bool {
        self.varieties >> v.index() & 1 == 1
    }

    pub fn satisfies_everything(&self) -> bool {
        self.identities == ALL_IDENTITIES && self.varieties == ALL_VARIETIES
    }
}

/// Evaluates all 60 identities in one pass per variable pattern, sharing the
/// partial products common to the five bracketings, then the variety laws.
pub fn profile(l: &FiniteLoop) -> Profile {
    let n = l.order();
    let mut identities = 0u64;
    let pairs: Vec<(usize, usize)> = (0..5)
        .flat_map(|i| (i + 1..5).map(move |j| (i, j)))
        .collect();
    for pattern in Pattern::ALL {
        let word = pattern.word().map(|v| v.index());
        let base = pattern as usize * 10;
        let mut alive = (1u64 << 10) - 1;
        'assign: for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let vars = [x, y, z];
                    let [a, b, c, d] = word.map(|k| vars[k]);
                    let ab = l.mul(a, b);
                    let bc = l.mul(b, c);
                    let cd = l.mul(c, d);
                    let vals = [
                        l.mul(a, l.mul(b, cd)),
                        l.mul(a, l.mul(bc, d)),
                        l.mul(ab, cd),
                        l.mul(l.mul(a, bc), d),
                        l.mul(l.mul(ab, c), d),
                    ];
                    for (k, &(i, j)) in pairs.iter().enumerate() {
                        if vals[i] != vals[j] {
                            alive &= !(1 << k);
                        }
                    }
                    if alive == 0 {
                        break 'assign;
                    }
                }
            }
        }
        identities |= alive << base;
    }
    let mut varieties = 0u16;
    for v in Variety::ALL {
        let sat = match v.defining_name() {
            Some(name) => identities >> name.index() & 1 == 1,
            None => satisfies_variety(l, v),
        };
        if sat {
            varieties |= 1 << v.index();
        }
    }
    Profile {
        identities,
        varieties,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic(n: usize) -> FiniteLoop {
        let rows: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FiniteLoop::from_table(&rows).unwrap()
    }

    const EX_6_6: &str = "5
        0 1 2 3 4
        1 0 3 4 2
        2 4 0 1 3
        3 2 4 0 1
        4 3 1 2 0";

    #[test]
    fn defining_names_match_definitions_table() {
        let expect = [
            (Variety::EL, "D15"),
            (Variety::ML, "D34"),
            (Variety::LB, "B14"),
            (Variety::RB, "E25"),
            (Variety::CL, "C15"),
            (Variety::LC, "A34"),
            (Variety::RC, "F23"),
            (Variety::LN, "A35"),
            (Variety::MN, "C24"),
            (Variety::RN, "F13"),
        ];
        for (v, n) in expect {
            assert_eq!(v.defining_name().unwrap().to_string(), n, "{v}");
        }
        for v in [Variety::GR, Variety::LA, Variety::RA, Variety::FL, Variety::PA3] {
            assert_eq!(v.defining_name(), None);
        }
    }

    #[test]
    fn variety_duals_match_defining_identities() {
        for v in Variety::ALL {
            assert_eq!(v.dual().dual(), v);
            if let (Some(a), Some(b)) = (v.defining_name(), v.dual().defining_name()) {
                // the Moufang law D34 is the one defining identity that is not
                // self-dual; its dual D23 is an equivalent law
                if v != Variety::ML {
                    assert_eq!(a.dual(), b, "{v}");
                }
            }
        }
    }

    #[test]
    fn variety_names_parse() {
        for v in Variety::ALL {
            assert_eq!(v.abbrev().parse::<Variety>().unwrap(), v);
        }
        assert_eq!("3pa".parse::<Variety>().unwrap(), Variety::PA3);
        assert!("XX".parse::<Variety>().is_err());
    }

    #[test]
    fn trivial_loop_satisfies_everything() {
        let p = profile(&FiniteLoop::trivial());
        assert!(p.satisfies_everything());
        for name in enumerate_all() {
            assert!(holds_name(&FiniteLoop::trivial(), name).is_ok());
        }
    }

    #[test]
    fn groups_lie_in_every_variety() {
        for n in 1..=6 {
            let g = cyclic(n);
            for v in Variety::ALL {
                assert!(satisfies_variety(&g, v), "Z{n} {v}");
            }
            assert!(profile(&g).satisfies_everything());
        }
    }

    #[test]
    fn witness_is_lexicographically_first() {
        let l: FiniteLoop = EX_6_6.parse().unwrap();
        let w = variety_counterexample(&l, Variety::LA).unwrap();
        assert_eq!(w.law, "LA");
        // brute force the first failing (x, y)
        let mut first = None;
        'outer: for x in 0..5 {
            for y in 0..5 {
                if l.mul(x, l.mul(x, y)) != l.mul(l.mul(x, x), y) {
                    first = Some([x, y, 0]);
                    break 'outer;
                }
            }
        }
        assert_eq!(Some(w.assignment), first);
        assert_ne!(w.lhs_value, w.rhs_value);
        let (a, b) = CompiledLaw::from_variety(Variety::LA).eval_at(&l, w.assignment);
        assert_eq!((a, b), (w.lhs_value, w.rhs_value));
        assert!(satisfies_variety(&l, Variety::FL));
    }

    #[test]
    fn profile_agrees_with_direct_evaluation() {
        let l: FiniteLoop = EX_6_6.parse().unwrap();
        for ll in [l.clone(), l.opposite()] {
            let p = profile(&ll);
            for name in enumerate_all() {
                assert_eq!(p.holds(name), holds_name(&ll, name).is_ok(), "{name}");
            }
            for v in Variety::ALL {
                assert_eq!(p.in_variety(v), satisfies_variety(&ll, v), "{v}");
            }
        }
    }
}
