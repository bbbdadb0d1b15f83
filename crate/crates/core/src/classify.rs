//! Reference classification data and its verification against loop catalogs.
//!
//! Three pieces of reference data are shipped here: the variety defined by
//! each of the sixty identities, the nineteen covering inclusions among the
//! fifteen varieties, and the matrix naming a separating example for every
//! pair of distinct varieties. Each is checked against finite loops:
//! equivalences and inclusions by exhausting every reduced loop table up to
//! some order (an empirical certificate, labelled "exhausted <= n"), and
//! non-equivalences and non-inclusions by exhibiting a separating loop.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::constructions::PaperExample;
use crate::eval::{profile, variety_counterexample, CompiledLaw, Profile, Variety, Witness};
use crate::loops::FiniteLoop;
use crate::search::{self, Law, MinimalResult};
use crate::term::{enumerate_all, Bracketing, IdentityName, Pattern};

/// Default catalog bound for equivalence and inclusion checks.
pub const DEFAULT_MAX_ORDER: usize = 6;

/// Identity classes laid out as three 5×5 grids. In the grid for letters
/// `(U, L)`, the cell in row `i`, column `j` names `Uij` above the diagonal
/// and `Lij` (that is, `Lji` with the sides exchanged) below it.
const CLASS_GRIDS: [(Pattern, Pattern, [&str; 5]); 3] = [
    (
        Pattern::A,
        Pattern::B,
        [
            ".  GR LA LC LC",
            "GR .  GR GR GR",
            "GR EL .  LC LN",
            "LB GR GR .  LA",
            "ML GR GR FL . ",
        ],
    ),
    (
        Pattern::C,
        Pattern::D,
        [
            ".  LA GR LC CL",
            "GR .  GR MN RC",
            "GR ML .  GR GR",
            "GR FL ML .  RA",
            "EL GR GR GR . ",
        ],
    ),
    (
        Pattern::E,
        Pattern::F,
        [
            ".  FL GR GR ML",
            "RA .  GR GR RB",
            "RN RC .  EL GR",
            "GR GR GR .  GR",
            "RC RC RA GR . ",
        ],
    ),
];

/// The nineteen covering inclusions `sub ⊆ super`.
pub const FIGURE1_EDGES: [(Variety, Variety); 19] = {
    use Variety::*;
    [
        (GR, EL),
        (EL, ML),
        (EL, CL),
        (ML, LB),
        (ML, RB),
        (CL, LC),
        (CL, RC),
        (ML, FL),
        (LB, LA),
        (RB, RA),
        (LC, LA),
        (RC, RA),
        (LC, LN),
        (LC, MN),
        (RC, MN),
        (RC, RN),
        (FL, PA3),
        (LA, PA3),
        (RA, PA3),
    ]
};

/// Separating examples, rows and columns in [`Variety::BOL_MOUFANG`] order.
/// `n` names separating example `n`, `n'` its opposite loop, `.` an
/// inclusion.
const TABLE2_ROWS: [&str; 14] = [
    "GR  .  .  .  .  .  .  .  .  .  .  .  .  .  .",
    "EL  1  .  .  .  .  .  .  .  .  .  .  .  .  .",
    "ML  2  2  .  2  .  .  2  2  .  .  .  2  2 2'",
    "CL  3  3  3  .  3 3'  .  .  .  3  .  .  .  .",
    "LB  2  2  4  2  .  4  2  2  .  4  4  2  2 2'",
    "RB  2  2 4'  2 4'  .  2  2 4' 4'  .  2  2 2'",
    "LC  3  3  3  5  3 3'  .  5  .  3  5  .  .  5",
    "RC  3  3  3 5'  3 3' 5'  . 5'  3  . 5'  .  .",
    "LA  2  2  3  2  3 3'  2  2  .  4  5  2  2 2'",
    "FL  2  2  6  2  6 6'  2  2  6  . 6'  2  2 2'",
    "RA  2  2  3  2  3 3'  2  2 5' 4'  .  2  2 2'",
    "LN  3  3  3  7  3 3'  7  7  7  3  7  .  7  5",
    "MN  3  3  3  8  3 3'  8  8  8  3  8 5'  .  5",
    "RN  3  3  3 7'  3 3' 7' 7' 7'  3 7' 5' 7'  .",
];

fn class_table() -> &'static [Variety; 60] {
    static TABLE: OnceLock<[Variety; 60]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut out = [None; 60];
        for (upper, lower, grid) in CLASS_GRIDS {
            for (i, row) in grid.iter().enumerate() {
                for (j, cell) in row.split_whitespace().enumerate() {
                    if i == j {
                        continue;
                    }
                    let pattern = if i < j { upper } else { lower };
                    let b = |k: usize| Bracketing::new(k as u8 + 1).expect("1..=5");
                    let name = IdentityName::new(pattern, b(i), b(j)).expect("i != j");
                    let v: Variety = cell.parse().expect("grid cells are varieties");
                    out[name.index()] = Some(v);
                }
            }
        }
        out.map(|v| v.expect("every identity is listed once"))
    })
}

/// The variety defined by an identity.
pub fn classify_identity(name: IdentityName) -> Variety {
    class_table()[name.index()]
}

/// Identities grouped by the variety they define.
pub fn expected_classes() -> BTreeMap<Variety, Vec<IdentityName>> {
    let mut out: BTreeMap<Variety, Vec<IdentityName>> = BTreeMap::new();
    for name in enumerate_all() {
        out.entry(classify_identity(name)).or_default().push(name);
    }
    out
}

/// Identities whose class disagrees with duality: the class of `I'` must be
/// the dual of the class of `I`.
pub fn dual_inconsistencies() -> Vec<IdentityName> {
    enumerate_all()
        .into_iter()
        .filter(|&n| classify_identity(n.dual()) != classify_identity(n).dual())
        .collect()
}

/// An entry of the separation matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SeparationCell {
    /// The row variety is contained in the column variety.
    Empty,
    /// The example (opposite loop when `dual`) lies in the row variety and
    /// outside the column variety.
    Example { number: u8, dual: bool },
}

impl SeparationCell {
    pub fn example(self) -> Option<(PaperExample, bool)> {
        match self {
            SeparationCell::Empty => None,
            SeparationCell::Example { number, dual } => {
                PaperExample::separating(number).map(|e| (e, dual))
            }
        }
    }
}

impl fmt::Display for SeparationCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeparationCell::Empty => f.write_str("."),
            SeparationCell::Example { number, dual } => {
                write!(f, "{number}{}", if *dual { "'" } else { "" })
            }
        }
    }
}

/// The separation matrix as `cells[row][col]`.
pub fn table2() -> &'static [[SeparationCell; 14]; 14] {
    static TABLE: OnceLock<[[SeparationCell; 14]; 14]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut out = [[SeparationCell::Empty; 14]; 14];
        for (r, line) in TABLE2_ROWS.iter().enumerate() {
            let mut tokens = line.split_whitespace();
            let head: Variety = tokens.next().expect("row label").parse().expect("variety");
            assert_eq!(head, Variety::BOL_MOUFANG[r]);
            for (c, tok) in tokens.enumerate() {
                out[r][c] = if tok == "." {
                    SeparationCell::Empty
                } else {
                    SeparationCell::Example {
                        number: tok.trim_end_matches('\'').parse().expect("example number"),
                        dual: tok.ends_with('\''),
                    }
                };
            }
        }
        out
    })
}

/// Reflexive-transitive closure of the covering inclusions, indexed by
/// [`Variety::index`].
pub fn inclusion_closure() -> [[bool; 15]; 15] {
    closure_of(&FIGURE1_EDGES)
}

fn closure_of(edges: &[(Variety, Variety)]) -> [[bool; 15]; 15] {
    let mut r = [[false; 15]; 15];
    for (i, row) in r.iter_mut().enumerate() {
        row[i] = true;
    }
    for &(a, b) in edges {
        r[a.index()][b.index()] = true;
    }
    for k in 0..15 {
        for i in 0..15 {
            for j in 0..15 {
                if r[i][k] && r[k][j] {
                    r[i][j] = true;
                }
            }
        }
    }
    r
}

/// Covering pairs of a reflexive, transitive, antisymmetric relation.
fn hasse_edges(rel: &[[bool; 15]; 15]) -> BTreeSet<(Variety, Variety)> {
    let mut out = BTreeSet::new();
    for a in Variety::ALL {
        for b in Variety::ALL {
            if a == b || !rel[a.index()][b.index()] {
                continue;
            }
            let covered = Variety::ALL.iter().any(|&c| {
                c != a && c != b && rel[a.index()][c.index()] && rel[c.index()][b.index()]
            });
            if !covered {
                out.insert((a, b));
            }
        }
    }
    out
}

/// Where a loop came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum LoopSource {
    /// The `index`-th reduced table of the given order, in enumeration order.
    Catalog { order: usize, index: usize },
    Example(#[serde(serialize_with = "ser_example")] PaperExample),
    Opposite(#[serde(serialize_with = "ser_example")] PaperExample),
    /// Lexicographically least table found by search.
    Search { order: usize },
}

fn ser_example<S: serde::Serializer>(e: &PaperExample, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(e.label())
}

impl fmt::Display for LoopSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LoopSource::Catalog { order, index } => write!(f, "catalog loop {order}#{index}"),
            LoopSource::Example(e) => write!(f, "{e}"),
            LoopSource::Opposite(e) => write!(f, "opposite of {e}"),
            LoopSource::Search { order } => write!(f, "search result of order {order}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Entry {
    pub source: LoopSource,
    pub table: FiniteLoop,
    pub profile: Profile,
}

/// Profiled loops: every reduced table up to some order, or the example
/// loops and their opposites.
#[derive(Debug, Clone)]
pub struct Catalog {
    pub max_order: usize,
    pub entries: Vec<Entry>,
}

impl Catalog {
    /// Every normalized loop of order `1..=max_order`, profiled in parallel.
    pub fn exhaustive(max_order: usize) -> Catalog {
        let mut entries = Vec::new();
        for order in 1..=max_order {
            let tables: Vec<FiniteLoop> = search::enumerate_loops(order)
                .expect("order within search limits")
                .collect();
            let profiled: Vec<Entry> = tables
                .into_par_iter()
                .enumerate()
                .map(|(index, table)| Entry {
                    source: LoopSource::Catalog { order, index },
                    profile: profile(&table),
                    table,
                })
                .collect();
            entries.extend(profiled);
        }
        Catalog { max_order, entries }
    }

    /// The ten example loops followed by their opposites.
    pub fn examples() -> Catalog {
        let mut entries: Vec<Entry> = Vec::new();
        for e in PaperExample::ALL {
            let table = e.build();
            entries.push(Entry {
                source: LoopSource::Example(e),
                profile: profile(&table),
                table,
            });
        }
        for e in PaperExample::ALL {
            let table = e.build().opposite();
            entries.push(Entry {
                source: LoopSource::Opposite(e),
                profile: profile(&table),
                table,
            });
        }
        let max_order = entries.iter().map(|e| e.table.order()).max().unwrap_or(0);
        Catalog { max_order, entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn find(&self, pred: impl Fn(&Profile) -> bool) -> Option<&Entry> {
        self.entries.iter().find(|e| pred(&e.profile))
    }
}

/// Shared inputs for the verifiers: the exhaustive catalog and the example
/// pool, each profiled once.
#[derive(Debug, Clone)]
pub struct Evidence {
    pub catalog: Catalog,
    pub examples: Catalog,
}

impl Evidence {
    pub fn new(max_order: usize) -> Evidence {
        Evidence {
            catalog: Catalog::exhaustive(max_order),
            examples: Catalog::examples(),
        }
    }

    /// First example-pool loop, then first catalog loop, matching `pred`.
    pub fn find(&self, pred: impl Fn(&Profile) -> bool + Copy) -> Option<&Entry> {
        self.examples.find(pred).or_else(|| self.catalog.find(pred))
    }

    fn all(&self) -> impl Iterator<Item = &Entry> {
        self.examples.entries.iter().chain(&self.catalog.entries)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
pub enum ClassifyError {
    #[error("classification mismatch for {first} vs {second}: {detail}")]
    ClassificationMismatch {
        first: String,
        second: String,
        detail: String,
    },
    #[error("inclusion {sub} ⊆ {sup} violated by {source_loop}: {witness}")]
    InclusionViolated {
        sub: Variety,
        sup: Variety,
        source_loop: String,
        witness: String,
    },
    #[error("missing counterexample for {sub} ⊄ {sup}")]
    MissingCounterexample { sub: Variety, sup: Variety },
    #[error("Hasse diagram differs: {0}")]
    HasseMismatch(String),
    #[error("{subject}: claim failed: {claim}")]
    ClaimFailed { subject: String, claim: String },
    #[error("cell ({row}, {col}): {detail}")]
    CellMismatch {
        row: Variety,
        col: Variety,
        detail: String,
    },
}

/// How a claim was established.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Evidenced {
    /// No counterexample among all reduced tables up to `max_order` plus the
    /// example pool.
    Exhausted { max_order: usize, loops: usize },
    /// A loop separating the two sides.
    Separated {
        source: LoopSource,
        witness: Option<Witness>,
    },
    /// Follows from the covering inclusions.
    Derived { path: Vec<Variety> },
    /// Evaluated directly on the named loop.
    Checked { subject: String },
}

impl fmt::Display for Evidenced {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Evidenced::Exhausted { max_order, loops } => {
                write!(f, "exhausted <= {max_order} ({loops} loops)")
            }
            Evidenced::Separated { source, witness } => {
                write!(f, "separated by {source}")?;
                if let Some(w) = witness {
                    write!(f, "; {w}")?;
                }
                Ok(())
            }
            Evidenced::Derived { path } => {
                let names: Vec<&str> = path.iter().map(|v| v.abbrev()).collect();
                write!(f, "via {}", names.join(" ⊆ "))
            }
            Evidenced::Checked { subject } => write!(f, "checked on {subject}"),
        }
    }
}

/// One line of a verification report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub claim: String,
    #[serde(flatten)]
    pub evidence: Evidenced,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Report {
    pub title: String,
    pub certificates: Vec<Certificate>,
    pub mismatches: Vec<ClassifyError>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Report {
        Report {
            title: title.into(),
            ..Report::default()
        }
    }

    pub fn certify(&mut self, claim: impl Into<String>, evidence: Evidenced) {
        self.certificates.push(Certificate {
            claim: claim.into(),
            evidence,
        });
    }

    pub fn is_consistent(&self) -> bool {
        self.mismatches.is_empty()
    }

    /// The first mismatch as an error.
    pub fn into_result(self) -> Result<Report, ClassifyError> {
        match self.mismatches.first() {
            Some(e) => Err(e.clone()),
            None => Ok(self),
        }
    }

    pub fn render_text(&self) -> String {
        let mut s = format!("== {} ==\n", self.title);
        for c in &self.certificates {
            s.push_str(&format!("ok   {}: {}\n", c.claim, c.evidence));
        }
        for m in &self.mismatches {
            s.push_str(&format!("FAIL {m}\n"));
        }
        s.push_str(&format!(
            "{} certificates, {} mismatches\n",
            self.certificates.len(),
            self.mismatches.len()
        ));
        s
    }

    /// One JSON object per certificate or mismatch.
    pub fn render_records(&self) -> String {
        let mut s = String::new();
        for c in &self.certificates {
            let rec = serde_json::json!({ "report": self.title, "kind": "certificate", "certificate": c });
            s.push_str(&rec.to_string());
            s.push('\n');
        }
        for m in &self.mismatches {
            let rec = serde_json::json!({ "report": self.title, "kind": "mismatch", "mismatch": m, "message": m.to_string() });
            s.push_str(&rec.to_string());
            s.push('\n');
        }
        s
    }
}

fn law_of_variety(v: Variety) -> CompiledLaw {
    CompiledLaw::from_variety(v)
}

/// Checks the identity classes against finite loops.
///
/// Every identity must agree with the defining law of its class, and every
/// two identities of one class must agree, on all reduced tables up to
/// `max_order` and on the example loops. Every two identities of different
/// classes must be separated by some loop: the example pool and catalog are
/// tried first, then a minimal-order search up to `search_cap`.
pub fn verify_table3(evidence: &Evidence, search_cap: usize) -> Report {
    let mut report = Report::new(format!(
        "identity classes (catalog <= {})",
        evidence.catalog.max_order
    ));
    let loops = evidence.catalog.len() + evidence.examples.len();
    let exhausted = Evidenced::Exhausted {
        max_order: evidence.catalog.max_order,
        loops,
    };

    for bad in dual_inconsistencies() {
        report.mismatches.push(ClassifyError::ClassificationMismatch {
            first: bad.to_string(),
            second: bad.dual().to_string(),
            detail: "class of the dual is not the dual class".into(),
        });
    }

    let names = enumerate_all();
    for &name in &names {
        let v = classify_identity(name);
        let disagreement = evidence
            .all()
            .find(|e| e.profile.holds(name) != e.profile.in_variety(v));
        match disagreement {
            None => report.certify(format!("{name} defines {v}"), exhausted.clone()),
            Some(e) => report.mismatches.push(ClassifyError::ClassificationMismatch {
                first: name.to_string(),
                second: v.to_string(),
                detail: format!("disagree on {}", e.source),
            }),
        }
    }

    for (i, &a) in names.iter().enumerate() {
        for &b in &names[i + 1..] {
            let (va, vb) = (classify_identity(a), classify_identity(b));
            if va == vb {
                match evidence.all().find(|e| e.profile.holds(a) != e.profile.holds(b)) {
                    None => report.certify(format!("{a} ≡ {b}"), exhausted.clone()),
                    Some(e) => report.mismatches.push(ClassifyError::ClassificationMismatch {
                        first: a.to_string(),
                        second: b.to_string(),
                        detail: format!("same class {va} but separated by {}", e.source),
                    }),
                }
            } else {
                match separate_identities(evidence, a, b, search_cap) {
                    Some(ev) => report.certify(format!("{a} ≢ {b} ({va} vs {vb})"), ev),
                    None => report.mismatches.push(ClassifyError::ClassificationMismatch {
                        first: a.to_string(),
                        second: b.to_string(),
                        detail: format!("classes {va} and {vb} differ but no separating loop up to order {search_cap}"),
                    }),
                }
            }
        }
    }
    report
}

fn separate_identities(
    evidence: &Evidence,
    a: IdentityName,
    b: IdentityName,
    search_cap: usize,
) -> Option<Evidenced> {
    if let Some(e) = evidence.find(|p| p.holds(a) != p.holds(b)) {
        let failing = if e.profile.holds(a) { b } else { a };
        let witness = CompiledLaw::from_name(failing).counterexample(&e.table);
        return Some(Evidenced::Separated {
            source: e.source,
            witness,
        });
    }
    for (req, forb) in [(a, b), (b, a)] {
        let found = search::find_minimal(&[Law::from(req)], &[Law::from(forb)], search_cap, 1)
            .expect("valid search");
        if let MinimalResult::Found {
            order, witnesses, ..
        } = found
        {
            return Some(Evidenced::Separated {
                source: LoopSource::Search { order },
                witness: witnesses.into_iter().next(),
            });
        }
    }
    None
}

/// Checks the covering inclusions and that no others hold.
///
/// Each edge must hold on every catalog and example loop. Each ordered pair
/// not related by the closure of the edges needs a loop in the first
/// variety and outside the second. Finally, the inclusion relation observed
/// on all loops is reduced to its covering pairs and compared with the
/// edges.
pub fn verify_figure1(evidence: &Evidence) -> Report {
    let mut report = Report::new(format!(
        "inclusion lattice (catalog <= {})",
        evidence.catalog.max_order
    ));
    let loops = evidence.catalog.len() + evidence.examples.len();
    for &(sub, sup) in &FIGURE1_EDGES {
        match evidence
            .all()
            .find(|e| e.profile.in_variety(sub) && !e.profile.in_variety(sup))
        {
            None => report.certify(
                format!("{sub} ⊆ {sup}"),
                Evidenced::Exhausted {
                    max_order: evidence.catalog.max_order,
                    loops,
                },
            ),
            Some(e) => report.mismatches.push(ClassifyError::InclusionViolated {
                sub,
                sup,
                source_loop: e.source.to_string(),
                witness: variety_counterexample(&e.table, sup)
                    .map(|w| w.to_string())
                    .unwrap_or_default(),
            }),
        }
    }

    let closure = inclusion_closure();
    for a in Variety::ALL {
        for b in Variety::ALL {
            if a == b || closure[a.index()][b.index()] {
                continue;
            }
            match evidence.find(|p| p.in_variety(a) && !p.in_variety(b)) {
                Some(e) => report.certify(
                    format!("{a} ⊄ {b}"),
                    Evidenced::Separated {
                        source: e.source,
                        witness: law_of_variety(b).counterexample(&e.table),
                    },
                ),
                None => report
                    .mismatches
                    .push(ClassifyError::MissingCounterexample { sub: a, sup: b }),
            }
        }
    }

    let mut observed = [[true; 15]; 15];
    for e in evidence.all() {
        for a in Variety::ALL {
            if !e.profile.in_variety(a) {
                continue;
            }
            for b in Variety::ALL {
                if !e.profile.in_variety(b) {
                    observed[a.index()][b.index()] = false;
                }
            }
        }
    }
    let antisymmetric = Variety::ALL.iter().all(|&a| {
        Variety::ALL
            .iter()
            .all(|&b| a == b || !(observed[a.index()][b.index()] && observed[b.index()][a.index()]))
    });
    let observed_edges = hasse_edges(&observed);
    let expected: BTreeSet<_> = FIGURE1_EDGES.iter().copied().collect();
    if !antisymmetric {
        report.mismatches.push(ClassifyError::HasseMismatch(
            "observed inclusion relation identifies two varieties".into(),
        ));
    } else if observed_edges != expected {
        let extra: Vec<String> = observed_edges
            .difference(&expected)
            .map(|(a, b)| format!("{a}⊆{b}"))
            .collect();
        let missing: Vec<String> = expected
            .difference(&observed_edges)
            .map(|(a, b)| format!("{a}⊆{b}"))
            .collect();
        report.mismatches.push(ClassifyError::HasseMismatch(format!(
            "extra {extra:?}, missing {missing:?}"
        )));
    } else {
        report.certify(
            "covering pairs of the observed inclusion relation equal the 19 edges",
            Evidenced::Exhausted {
                max_order: evidence.catalog.max_order,
                loops,
            },
        );
    }
    report
}

/// A chain of covering inclusions from `a` to `b`, if any.
fn inclusion_path(a: Variety, b: Variety) -> Option<Vec<Variety>> {
    let mut prev: [Option<Variety>; 15] = [None; 15];
    let mut queue = std::collections::VecDeque::from([a]);
    let mut seen = [false; 15];
    seen[a.index()] = true;
    while let Some(v) = queue.pop_front() {
        if v == b {
            let mut path = vec![b];
            let mut cur = b;
            while let Some(p) = prev[cur.index()] {
                path.push(p);
                cur = p;
            }
            path.reverse();
            return Some(path);
        }
        for &(s, t) in &FIGURE1_EDGES {
            if s == v && !seen[t.index()] {
                seen[t.index()] = true;
                prev[t.index()] = Some(v);
                queue.push_back(t);
            }
        }
    }
    None
}

/// Checks every cell of the separation matrix: each named example (or its
/// opposite) must lie in the row variety and outside the column variety, and
/// each empty off-diagonal cell must follow from the covering inclusions.
pub fn verify_table2() -> Report {
    let mut report = Report::new("separation matrix");
    let cells = table2();
    let mut built: BTreeMap<(PaperExample, bool), FiniteLoop> = BTreeMap::new();
    for (r, &row) in Variety::BOL_MOUFANG.iter().enumerate() {
        for (c, &col) in Variety::BOL_MOUFANG.iter().enumerate() {
            let cell = cells[r][c];
            let claim = format!("({row}, {col}) = {cell}");
            match cell.example() {
                None if matches!(cell, SeparationCell::Example { .. }) => {
                    report.mismatches.push(ClassifyError::CellMismatch {
                        row,
                        col,
                        detail: format!("no example numbered {cell}"),
                    })
                }
                None => {
                    if row == col {
                        continue;
                    }
                    match inclusion_path(row, col) {
                        Some(path) => report.certify(claim, Evidenced::Derived { path }),
                        None => report.mismatches.push(ClassifyError::CellMismatch {
                            row,
                            col,
                            detail: "empty cell but no chain of inclusions".into(),
                        }),
                    }
                }
                Some((ex, dual)) => {
                    let table = built.entry((ex, dual)).or_insert_with(|| {
                        let l = ex.build();
                        if dual {
                            l.opposite()
                        } else {
                            l
                        }
                    });
                    let in_row = law_of_variety(row).holds(table);
                    let witness = law_of_variety(col).counterexample(table);
                    let source = if dual {
                        LoopSource::Opposite(ex)
                    } else {
                        LoopSource::Example(ex)
                    };
                    if in_row && witness.is_some() {
                        report.certify(claim, Evidenced::Separated { source, witness });
                    } else {
                        report.mismatches.push(ClassifyError::CellMismatch {
                            row,
                            col,
                            detail: format!(
                                "{source} is {}in {row} and {}in {col}",
                                if in_row { "" } else { "not " },
                                if witness.is_none() { "" } else { "not " }
                            ),
                        });
                    }
                }
            }
        }
    }
    report
}
