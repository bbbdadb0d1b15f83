//! Small groups, Chein's doubling construction, and the example loops used
//! to separate the varieties.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::eval::{satisfies_variety, CompiledLaw, Variety};
use crate::loops::FiniteLoop;
use crate::term::Equation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("not a group: {0}")]
pub struct NotAGroup(pub String);

/// A loop known to be associative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup(FiniteLoop);

impl FiniteGroup {
    pub fn order(&self) -> usize {
        self.0.order()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.0.mul(a, b)
    }

    pub fn inv(&self, a: usize) -> usize {
        self.0.left_div(a, 0)
    }

    pub fn as_loop(&self) -> &FiniteLoop {
        &self.0
    }

    pub fn into_loop(self) -> FiniteLoop {
        self.0
    }

    pub fn is_abelian(&self) -> bool {
        self.0.is_commutative()
    }
}

impl TryFrom<FiniteLoop> for FiniteGroup {
    type Error = NotAGroup;

    fn try_from(l: FiniteLoop) -> Result<Self, Self::Error> {
        if l.is_associative() {
            Ok(FiniteGroup(l))
        } else {
            Err(NotAGroup("multiplication is not associative".into()))
        }
    }
}

fn group_from_fn(n: usize, mul: impl Fn(usize, usize) -> usize) -> FiniteGroup {
    let rows: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| mul(a, b)).collect()).collect();
    let l = FiniteLoop::from_table(&rows).expect("group tables are loops");
    FiniteGroup::try_from(l).expect("associative by construction")
}

/// `Z_n` with `a·b = a + b mod n`.
pub fn cyclic_group(n: usize) -> FiniteGroup {
    assert!(n >= 1, "cyclic group of order 0");
    group_from_fn(n, |a, b| (a + b) % n)
}

/// The dihedral group with `order = 2m` elements: rotations `r^i` are
/// `0..m`, reflections `s r^i` are `m..2m`.
pub fn dihedral_group(order: usize) -> FiniteGroup {
    assert!(order >= 2 && order % 2 == 0, "dihedral order must be even");
    let m = order / 2;
    group_from_fn(order, |a, b| {
        let (sa, i) = (a >= m, a % m);
        let (sb, j) = (b >= m, b % m);
        // r^i r^j = r^(i+j), r^i s r^j = s r^(j-i),
        // s r^i r^j = s r^(i+j), s r^i s r^j = r^(j-i)
        match (sa, sb) {
            (false, false) => (i + j) % m,
            (false, true) => m + (j + m - i) % m,
            (true, false) => m + (i + j) % m,
            (true, true) => (j + m - i) % m,
        }
    })
}

/// Permutations of three points, listed lexicographically by image tuple,
/// composed as `(p·q)(k) = p(q(k))`.
pub fn symmetric_group_3() -> FiniteGroup {
    const PERMS: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    group_from_fn(6, |a, b| {
        let (p, q) = (PERMS[a], PERMS[b]);
        let c = [p[q[0]], p[q[1]], p[q[2]]];
        PERMS.iter().position(|&r| r == c).expect("closed")
    })
}

/// `G × H` with the pair `(g, h)` stored as `g·|H| + h`.
pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> FiniteGroup {
    let k = h.order();
    group_from_fn(g.order() * k, |a, b| {
        g.mul(a / k, b / k) * k + h.mul(a % k, b % k)
    })
}

/// Chein's loop `M(G, 2)` on `G × {0, 1}`, with `(g, s)` stored as
/// `g + |G|·s`:
///
/// ```text
/// (g,0)(h,0) = (gh, 0)       (g,0)(h,1) = (hg, 1)
/// (g,1)(h,0) = (gh⁻¹, 1)     (g,1)(h,1) = (h⁻¹g, 0)
/// ```
///
/// The result is a Moufang loop, associative exactly when `G` is abelian.
pub fn chein_double(g: &FiniteGroup) -> FiniteLoop {
    let n = g.order();
    let rows: Vec<Vec<usize>> = (0..2 * n)
        .map(|a| {
            (0..2 * n)
                .map(|b| {
                    let (x, s) = (a % n, a / n);
                    let (y, t) = (b % n, b / n);
                    match (s, t) {
                        (0, 0) => g.mul(x, y),
                        (0, _) => g.mul(y, x) + n,
                        (_, 0) => g.mul(x, g.inv(y)) + n,
                        _ => g.mul(g.inv(y), x),
                    }
                })
                .collect()
        })
        .collect();
    FiniteLoop::from_table(&rows).expect("M(G,2) is a loop")
}

/// The example loops: two from the section on definitions and eight
/// separating examples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PaperExample {
    E3_1,
    E3_2,
    E6_1,
    E6_2,
    E6_3,
    E6_4,
    E6_5,
    E6_6,
    E6_7,
    E6_8,
}

impl PaperExample {
    pub const ALL: [PaperExample; 10] = [
        PaperExample::E3_1,
        PaperExample::E3_2,
        PaperExample::E6_1,
        PaperExample::E6_2,
        PaperExample::E6_3,
        PaperExample::E6_4,
        PaperExample::E6_5,
        PaperExample::E6_6,
        PaperExample::E6_7,
        PaperExample::E6_8,
    ];

    /// The separating example numbered `k` (1 to 8).
    pub fn separating(k: u8) -> Option<PaperExample> {
        Self::ALL.get(1 + k as usize).copied().filter(|_| k >= 1)
    }

    pub fn label(self) -> &'static str {
        match self {
            PaperExample::E3_1 => "3.1",
            PaperExample::E3_2 => "3.2",
            PaperExample::E6_1 => "6.1",
            PaperExample::E6_2 => "6.2",
            PaperExample::E6_3 => "6.3",
            PaperExample::E6_4 => "6.4",
            PaperExample::E6_5 => "6.5",
            PaperExample::E6_6 => "6.6",
            PaperExample::E6_7 => "6.7",
            PaperExample::E6_8 => "6.8",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            PaperExample::E3_1 => "3-power associative loop that is not power associative",
            PaperExample::E3_2 => "two-sided inverses without either inverse property",
            PaperExample::E6_1 => "extra loop that is not a group, M(D4,2)",
            PaperExample::E6_2 => "Moufang loop, neither LN nor MN, M(S3,2)",
            PaperExample::E6_3 => "C-loop that is neither flexible nor left Bol",
            PaperExample::E6_4 => "left Bol loop, neither flexible nor right alternative",
            PaperExample::E6_5 => "LC-loop, neither right nuclear square nor right alternative",
            PaperExample::E6_6 => "flexible loop that is not left alternative",
            PaperExample::E6_7 => "LN loop, neither MN nor 3-power associative",
            PaperExample::E6_8 => "MN loop that is not 3-power associative",
        }
    }

    fn asset(self) -> Option<&'static str> {
        match self {
            PaperExample::E3_1 => Some(include_str!("../assets/e3_1.loop")),
            PaperExample::E3_2 => Some(include_str!("../assets/e3_2.loop")),
            PaperExample::E6_3 => Some(include_str!("../assets/e6_3.loop")),
            PaperExample::E6_4 => Some(include_str!("../assets/e6_4.loop")),
            PaperExample::E6_5 => Some(include_str!("../assets/e6_5.loop")),
            PaperExample::E6_6 => Some(include_str!("../assets/e6_6.loop")),
            PaperExample::E6_7 => Some(include_str!("../assets/e6_7.loop")),
            PaperExample::E6_8 => Some(include_str!("../assets/e6_8.loop")),
            PaperExample::E6_1 | PaperExample::E6_2 => None,
        }
    }

    pub fn build(self) -> FiniteLoop {
        match self {
            PaperExample::E6_1 => chein_double(&dihedral_group(8)),
            PaperExample::E6_2 => chein_double(&symmetric_group_3()),
            other => other
                .asset()
                .expect("table examples ship an asset")
                .parse()
                .expect("shipped assets are valid loops"),
        }
    }

    /// Varieties the example belongs to, and varieties it avoids together
    /// with the quoted failing assignment where one is given.
    pub fn claims(self) -> Claims {
        use Variety::*;
        let (member, outside): (&[Variety], &[(Variety, Option<[usize; 3]>)]) = match self {
            PaperExample::E3_1 => (&[PA3], &[]),
            PaperExample::E3_2 => (&[], &[]),
            PaperExample::E6_1 => (&[EL], &[(GR, None)]),
            PaperExample::E6_2 => (&[ML], &[(LN, None), (MN, None), (GR, None)]),
            PaperExample::E6_3 => (&[CL], &[(FL, Some([8, 9, 0])), (LB, Some([5, 8, 5]))]),
            PaperExample::E6_4 => (&[LB], &[(FL, Some([1, 2, 0])), (RA, Some([6, 4, 0]))]),
            PaperExample::E6_5 => (&[LC], &[(RN, Some([1, 2, 3])), (RA, Some([1, 2, 0]))]),
            PaperExample::E6_6 => (&[FL], &[(LA, Some([1, 2, 0]))]),
            PaperExample::E6_7 => (&[LN], &[(MN, Some([1, 2, 3])), (PA3, Some([1, 0, 0]))]),
            PaperExample::E6_8 => (&[MN], &[(PA3, Some([1, 0, 0]))]),
        };
        Claims {
            member: member.to_vec(),
            outside: outside.to_vec(),
        }
    }
}

impl fmt::Display for PaperExample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Example {}", self.label())
    }
}

impl FromStr for PaperExample {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().trim_start_matches(['E', 'e']).replace('_', ".");
        PaperExample::ALL
            .into_iter()
            .find(|e| e.label() == t)
            .ok_or_else(|| format!("unknown example {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Claims {
    pub member: Vec<Variety>,
    pub outside: Vec<(Variety, Option<[usize; 3]>)>,
}

/// One checked statement about an example loop.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClaimCheck {
    pub example: PaperExample,
    pub statement: String,
    pub ok: bool,
}

/// Machine-checks every statement made about an example: its varieties,
/// the varieties it avoids, each quoted failing assignment, and the extra
/// properties stated for the two examples of the definitions section.
pub fn verify_claims(ex: PaperExample) -> Vec<ClaimCheck> {
    let l = ex.build();
    let mut out = Vec::new();
    let mut push = |statement: String, ok: bool| {
        out.push(ClaimCheck {
            example: ex,
            statement,
            ok,
        })
    };
    let order = match ex {
        PaperExample::E3_1 => 6,
        PaperExample::E3_2 => 5,
        PaperExample::E6_1 => 16,
        PaperExample::E6_2 => 12,
        PaperExample::E6_3 => 12,
        PaperExample::E6_4 => 8,
        PaperExample::E6_5 => 12,
        PaperExample::E6_6 => 5,
        PaperExample::E6_7 => 6,
        PaperExample::E6_8 => 6,
    };
    push(format!("has order {order}"), l.order() == order);
    let claims = ex.claims();
    for v in &claims.member {
        push(format!("is in {v}"), satisfies_variety(&l, *v));
    }
    for (v, quoted) in &claims.outside {
        push(format!("is not in {v}"), !satisfies_variety(&l, *v));
        if let Some(vars) = quoted {
            let law = CompiledLaw::from_variety(*v);
            let (a, b) = law.eval_at(&l, *vars);
            let shown = &vars[..law.arity()];
            push(
                format!("{v} fails at {shown:?} ({a} != {b})"),
                a != b,
            );
        }
    }
    match ex {
        PaperExample::E3_1 => {
            push(
                "powers associative up to degree 3".into(),
                l.powers_associative_upto(3),
            );
            push(
                "not powers associative up to degree 4".into(),
                !l.powers_associative_upto(4),
            );
            let eq: Equation = "(xx)(xx)=x(x(xx))".parse().expect("law");
            let (a, b) = CompiledLaw::new("(xx)(xx)=x(x(xx))", &eq).eval_at(&l, [1, 0, 0]);
            push(format!("(1·1)(1·1) != 1(1(1·1)) ({a} != {b})"), a != b);
        }
        PaperExample::E3_2 => {
            push("has two-sided inverses".into(), l.has_two_sided_inverses());
            push(
                "lacks the left inverse property".into(),
                !l.has_left_inverse_property(),
            );
            push(
                "lacks the right inverse property".into(),
                !l.has_right_inverse_property(),
            );
            let inv1 = l.inverse(1);
            push(
                "1⁻¹(1·2) != 2".into(),
                inv1.is_some_and(|i| l.mul(i, l.mul(1, 2)) != 2),
            );
            push(
                "(2·1)1⁻¹ != 2".into(),
                inv1.is_some_and(|i| l.mul(l.mul(2, 1), i) != 2),
            );
        }
        PaperExample::E6_1 | PaperExample::E6_2 => {
            push("is not associative".into(), !l.is_associative());
        }
        PaperExample::E6_5 => {
            push(
                "has the left inverse property".into(),
                l.has_left_inverse_property(),
            );
        }
        _ => {}
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_shapes() {
        let z4 = cyclic_group(4);
        assert_eq!(z4.order(), 4);
        assert!(z4.is_abelian());
        let d4 = dihedral_group(8);
        assert_eq!(d4.order(), 8);
        assert!(!d4.is_abelian());
        let s3 = symmetric_group_3();
        assert_eq!(s3.order(), 6);
        assert!(!s3.is_abelian());
        assert!(!dihedral_group(6).is_abelian());
        assert!(dihedral_group(4).is_abelian());
        let k = direct_product(&cyclic_group(2), &cyclic_group(2));
        assert_eq!(k.order(), 4);
        assert!(k.is_abelian());
        assert!((0..4).all(|a| k.mul(a, a) == 0));
    }

    #[test]
    fn not_a_group() {
        let l = PaperExample::E6_6.build();
        assert!(FiniteGroup::try_from(l).is_err());
    }

    #[test]
    fn chein_double_orders_and_associativity() {
        let m = chein_double(&symmetric_group_3());
        assert_eq!(m.order(), 12);
        assert!(!m.is_associative());
        assert!(satisfies_variety(&m, Variety::ML));
        let m = chein_double(&cyclic_group(4));
        assert!(m.is_associative());
    }

    #[test]
    fn example_ids() {
        assert_eq!(PaperExample::separating(1), Some(PaperExample::E6_1));
        assert_eq!(PaperExample::separating(8), Some(PaperExample::E6_8));
        assert_eq!(PaperExample::separating(0), None);
        assert_eq!(PaperExample::separating(9), None);
        assert_eq!("E6_3".parse::<PaperExample>().unwrap(), PaperExample::E6_3);
        assert_eq!("3.2".parse::<PaperExample>().unwrap(), PaperExample::E3_2);
    }

    #[test]
    fn every_claim_checks() {
        for ex in PaperExample::ALL {
            for c in verify_claims(ex) {
                assert!(c.ok, "{ex}: {}", c.statement);
            }
        }
    }
}
