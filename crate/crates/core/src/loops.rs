//! Finite loops stored as normalized Cayley tables.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LoopError {
    #[error("empty table")]
    Empty,
    #[error("row {row} has {len} entries, expected {order}")]
    NotSquare { row: usize, len: usize, order: usize },
    #[error("entry {value} at ({row}, {col}) is outside 0..{order}")]
    OutOfRange {
        row: usize,
        col: usize,
        value: usize,
        order: usize,
    },
    #[error("not a Latin square: {0}")]
    NotLatin(String),
    #[error("no two-sided neutral element")]
    NoNeutral,
    #[error("malformed .loop text at line {line}: {msg}")]
    Format { line: usize, msg: String },
}

/// A loop on `0..order` with neutral element `0`. Entry `(a, b)` of the
/// table is `a·b`; the row index is the left factor.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteLoop {
    order: usize,
    table: Vec<usize>,
    left_div: Vec<usize>,
    right_div: Vec<usize>,
}

impl FiniteLoop {
    /// Validates a square table and normalizes it so the neutral element is
    /// `0`. If the neutral element is some `e != 0`, the labels `0` and `e`
    /// are exchanged.
    pub fn from_table(rows: &[Vec<usize>]) -> Result<FiniteLoop, LoopError> {
        let n = rows.len();
        if n == 0 {
            return Err(LoopError::Empty);
        }
        let mut table = Vec::with_capacity(n * n);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(LoopError::NotSquare {
                    row: r,
                    len: row.len(),
                    order: n,
                });
            }
            for (c, &v) in row.iter().enumerate() {
                if v >= n {
                    return Err(LoopError::OutOfRange {
                        row: r,
                        col: c,
                        value: v,
                        order: n,
                    });
                }
                table.push(v);
            }
        }
        check_latin(n, &table)?;
        let e = (0..n)
            .find(|&e| (0..n).all(|a| table[e * n + a] == a && table[a * n + e] == a))
            .ok_or(LoopError::NoNeutral)?;
        if e != 0 {
            let swap = |v: usize| match v {
                0 => e,
                v if v == e => 0,
                v => v,
            };
            let mut relabeled = vec![0; n * n];
            for a in 0..n {
                for b in 0..n {
                    relabeled[swap(a) * n + swap(b)] = swap(table[a * n + b]);
                }
            }
            table = relabeled;
        }
        Ok(Self::from_normalized(n, table))
    }

    /// Builds from a flat row-major table already known to be a Latin square
    /// with neutral `0`.
    pub(crate) fn from_normalized(n: usize, table: Vec<usize>) -> FiniteLoop {
        debug_assert_eq!(table.len(), n * n);
        let mut left_div = vec![0; n * n];
        let mut right_div = vec![0; n * n];
        for a in 0..n {
            for c in 0..n {
                let b = table[a * n + c];
                // a·c = b  ⇒  a\b = c and b/c = a
                left_div[a * n + b] = c;
                right_div[b * n + c] = a;
            }
        }
        FiniteLoop {
            order: n,
            table,
            left_div,
            right_div,
        }
    }

    pub fn trivial() -> FiniteLoop {
        Self::from_normalized(1, vec![0])
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    /// `a\b`, the unique `c` with `a·c = b`.
    #[inline]
    pub fn left_div(&self, a: usize, b: usize) -> usize {
        self.left_div[a * self.order + b]
    }

    /// `b/a`, the unique `c` with `c·a = b`.
    #[inline]
    pub fn right_div(&self, b: usize, a: usize) -> usize {
        self.right_div[b * self.order + a]
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(<[_]>::to_vec).collect()
    }

    /// The loop with the transposed table, `a∘b = b·a`.
    pub fn opposite(&self) -> FiniteLoop {
        let n = self.order;
        let mut t = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                t[b * n + a] = self.table[a * n + b];
            }
        }
        Self::from_normalized(n, t)
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.order;
        (0..n).all(|a| (a + 1..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn is_associative(&self) -> bool {
        let n = self.order;
        (0..n).all(|a| {
            (0..n).all(|b| {
                let ab = self.mul(a, b);
                (0..n).all(|c| self.mul(ab, c) == self.mul(a, self.mul(b, c)))
            })
        })
    }

    /// `e/x · xy = y` for all `x`, `y`.
    pub fn has_left_inverse_property(&self) -> bool {
        let n = self.order;
        (0..n).all(|x| {
            let inv = self.right_div(0, x);
            (0..n).all(|y| self.mul(inv, self.mul(x, y)) == y)
        })
    }

    /// `yx · x\e = y` for all `x`, `y`.
    pub fn has_right_inverse_property(&self) -> bool {
        let n = self.order;
        (0..n).all(|x| {
            let inv = self.left_div(x, 0);
            (0..n).all(|y| self.mul(self.mul(y, x), inv) == y)
        })
    }

    /// `e/x = x\e` for all `x`.
    pub fn has_two_sided_inverses(&self) -> bool {
        (0..self.order).all(|x| self.right_div(0, x) == self.left_div(x, 0))
    }

    /// The two-sided inverse of `x`, if left and right inverses agree.
    pub fn inverse(&self, x: usize) -> Option<usize> {
        let l = self.right_div(0, x);
        (l == self.left_div(x, 0)).then_some(l)
    }

    /// Checks that every bracketing of `a^m` gives the same element, for every
    /// `a` and every `m <= degree`.
    pub fn powers_associative_upto(&self, degree: usize) -> bool {
        (0..self.order).all(|a| self.power_associative_at(a, degree))
    }

    fn power_associative_at(&self, a: usize, degree: usize) -> bool {
        // powers[m] is the common value of all bracketings of a^m, valid as
        // long as every smaller power was unambiguous
        let mut powers = vec![0usize; degree.max(1) + 1];
        powers[1] = a;
        for m in 2..=degree {
            let first = self.mul(powers[1], powers[m - 1]);
            if (2..m).any(|i| self.mul(powers[i], powers[m - i]) != first) {
                return false;
            }
            powers[m] = first;
        }
        true
    }

    /// Parses the `.loop` text format.
    pub fn parse_loop_text(text: &str) -> Result<FiniteLoop, LoopError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (line, header) = lines.next().ok_or(LoopError::Format {
            line: 1,
            msg: "missing order line".into(),
        })?;
        let order: usize = header.parse().map_err(|_| LoopError::Format {
            line,
            msg: format!("expected the order, found {header:?}"),
        })?;
        let mut rows = Vec::with_capacity(order);
        for (line, l) in lines {
            let row = l
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<usize>().map_err(|_| LoopError::Format {
                        line,
                        msg: format!("not an element: {tok:?}"),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(row);
        }
        if rows.len() != order {
            return Err(LoopError::Format {
                line,
                msg: format!("order {order} but {} rows", rows.len()),
            });
        }
        FiniteLoop::from_table(&rows)
    }

    /// Renders the `.loop` text format.
    pub fn to_loop_text(&self) -> String {
        let width = (self.order.saturating_sub(1)).to_string().len();
        let mut s = format!("{}\n", self.order);
        for row in self.table.chunks(self.order) {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:>width$}")).collect();
            s.push_str(&cells.join(" "));
            s.push('\n');
        }
        s
    }
}

fn check_latin(n: usize, table: &[usize]) -> Result<(), LoopError> {
    let mut seen = vec![false; n];
    for r in 0..n {
        seen.iter_mut().for_each(|s| *s = false);
        for c in 0..n {
            let v = table[r * n + c];
            if std::mem::replace(&mut seen[v], true) {
                return Err(LoopError::NotLatin(format!("row {r} repeats {v}")));
            }
        }
    }
    for c in 0..n {
        seen.iter_mut().for_each(|s| *s = false);
        for r in 0..n {
            let v = table[r * n + c];
            if std::mem::replace(&mut seen[v], true) {
                return Err(LoopError::NotLatin(format!("column {c} repeats {v}")));
            }
        }
    }
    Ok(())
}

impl FromStr for FiniteLoop {
    type Err = LoopError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FiniteLoop::parse_loop_text(s)
    }
}

impl fmt::Debug for FiniteLoop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteLoop")
            .field("order", &self.order)
            .field("rows", &self.rows())
            .finish()
    }
}

impl fmt::Display for FiniteLoop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_loop_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: usize) -> FiniteLoop {
        let rows: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FiniteLoop::from_table(&rows).unwrap()
    }

    const EX_3_2: &str = "5
        0 1 2 3 4
        1 0 3 4 2
        2 4 0 1 3
        3 2 4 0 1
        4 3 1 2 0";

    #[test]
    fn trivial_and_errors() {
        let t = FiniteLoop::from_table(&[vec![0]]).unwrap();
        assert_eq!(t, FiniteLoop::trivial());
        assert!(matches!(
            FiniteLoop::from_table(&[vec![0, 1], vec![1, 1]]),
            Err(LoopError::NotLatin(_))
        ));
        assert!(matches!(
            FiniteLoop::from_table(&[vec![1, 0], vec![0]]),
            Err(LoopError::NotSquare { .. })
        ));
        assert!(matches!(
            FiniteLoop::from_table(&[vec![0, 2], vec![1, 0]]),
            Err(LoopError::OutOfRange { .. })
        ));
        assert_eq!(FiniteLoop::from_table(&[]), Err(LoopError::Empty));
        // Latin but without a neutral element
        let q = vec![vec![0, 2, 1], vec![2, 1, 0], vec![1, 0, 2]];
        assert_eq!(FiniteLoop::from_table(&q), Err(LoopError::NoNeutral));
    }

    #[test]
    fn relabels_neutral_to_zero() {
        // Z3 written with neutral element 2
        let rows = vec![vec![1, 2, 0], vec![2, 0, 1], vec![0, 1, 2]];
        let l = FiniteLoop::from_table(&rows).unwrap();
        assert_eq!(l.rows()[0], vec![0, 1, 2]);
        assert!(l.is_associative());
        assert_eq!(l.rows(), z(3).rows());
    }

    #[test]
    fn division_laws() {
        let l: FiniteLoop = EX_3_2.parse().unwrap();
        let n = l.order();
        for a in 0..n {
            for b in 0..n {
                assert_eq!(l.mul(a, l.left_div(a, b)), b);
                assert_eq!(l.mul(l.right_div(b, a), a), b);
                assert_eq!(l.left_div(a, l.mul(a, b)), b);
                assert_eq!(l.right_div(l.mul(b, a), a), b);
                assert_eq!(l.left_div(l.right_div(a, b), a), b);
                assert_eq!(l.right_div(a, l.left_div(b, a)), b);
            }
        }
    }

    #[test]
    fn inverse_properties_of_example_loop() {
        let l: FiniteLoop = EX_3_2.parse().unwrap();
        assert!(l.has_two_sided_inverses());
        assert!(!l.has_left_inverse_property());
        assert!(!l.has_right_inverse_property());
        let g = z(5);
        assert!(g.has_two_sided_inverses());
        assert!(g.has_left_inverse_property());
        assert!(g.has_right_inverse_property());
    }

    #[test]
    fn opposite_is_involution() {
        let l: FiniteLoop = EX_3_2.parse().unwrap();
        assert_eq!(l.opposite().opposite(), l);
        assert_ne!(l.opposite(), l);
        assert_eq!(z(4).opposite(), z(4));
    }

    #[test]
    fn groups_are_power_associative() {
        assert!(z(6).powers_associative_upto(6));
    }

    #[test]
    fn loop_text_round_trip() {
        let text = "# a comment\n3\n0 1 2 # row zero\n\n1 2 0\n2 0 1\n";
        let l: FiniteLoop = text.parse().unwrap();
        assert_eq!(l, z(3));
        assert_eq!(l.to_loop_text().parse::<FiniteLoop>().unwrap(), l);
        assert!(matches!(
            "3\n0 1 2\n1 2 0\n".parse::<FiniteLoop>(),
            Err(LoopError::Format { .. })
        ));
        assert!(matches!(
            "x\n".parse::<FiniteLoop>(),
            Err(LoopError::Format { .. })
        ));
    }
}
