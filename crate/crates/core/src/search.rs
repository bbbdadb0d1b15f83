//! Backtracking search over normalized Cayley tables.
//!
//! Row 0 and column 0 are fixed to the identity permutation, so every table
//! visited is a reduced Latin square. Undetermined cells are filled in
//! row-major order with values in ascending order; the first table produced
//! is therefore the lexicographically least one meeting the constraints.
//!
//! Required laws are propagated on partial tables: an instance whose two
//! sides are both determined must agree, and an instance with one side
//! determined and the other missing only its final product forces that
//! product. Forbidden laws are checked on complete tables only.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::eval::{CompiledLaw, Partial, Variety, Witness};
use crate::loops::FiniteLoop;
use crate::term::{Equation, Identity, IdentityName};

/// Largest order the search accepts. Row and column usage are tracked in
/// 64-bit masks.
pub const MAX_ORDER: usize = 63;

/// Default upper bound for minimal-order searches.
pub const DEFAULT_MAX_ORDER: usize = 16;

const UNSET: u8 = u8::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("order must be between 1 and {MAX_ORDER}, got {0}")]
    BadOrder(usize),
    #[error("thread budget must be positive")]
    NoThreads,
    #[error("{0} is both required and forbidden")]
    Conflict(String),
}

/// A law together with the label used in reports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Law {
    pub label: String,
    pub equation: Equation,
}

impl Law {
    pub fn new(label: impl Into<String>, equation: Equation) -> Law {
        Law {
            label: label.into(),
            equation,
        }
    }

    /// Canonical key used to detect a law that is both required and
    /// forbidden.
    fn key(&self) -> String {
        match Identity::new(self.equation.lhs.clone(), self.equation.rhs.clone()) {
            Ok(id) => id.name().to_string(),
            Err(_) => self.equation.to_string(),
        }
    }
}

impl From<IdentityName> for Law {
    fn from(name: IdentityName) -> Law {
        Law::new(name.to_string(), name.decode().equation())
    }
}

impl From<Variety> for Law {
    fn from(v: Variety) -> Law {
        // a variety defined by an Xij is reported under that name
        match v.defining_name() {
            Some(name) => Law::new(format!("{v} ({name})"), v.defining_law()),
            None => Law::new(v.abbrev(), v.defining_law()),
        }
    }
}

impl From<&Identity> for Law {
    fn from(id: &Identity) -> Law {
        Law::new(id.name().to_string(), id.equation())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Mode {
    /// Return whichever valid table a worker reaches first.
    FirstFound,
    /// Return the lexicographically least valid table (row-major).
    Minimal,
}

#[derive(Debug, Clone)]
pub struct SearchSpec {
    pub order: usize,
    pub require: Vec<Law>,
    pub forbid: Vec<Law>,
    pub mode: Mode,
    pub threads: usize,
}

impl SearchSpec {
    pub fn new(order: usize) -> SearchSpec {
        SearchSpec {
            order,
            require: Vec::new(),
            forbid: Vec::new(),
            mode: Mode::Minimal,
            threads: 1,
        }
    }

    pub fn require(mut self, law: impl Into<Law>) -> Self {
        self.require.push(law.into());
        self
    }

    pub fn forbid(mut self, law: impl Into<Law>) -> Self {
        self.forbid.push(law.into());
        self
    }

    pub fn mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn threads(mut self, threads: usize) -> Self {
        self.threads = threads;
        self
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        if self.order == 0 || self.order > MAX_ORDER {
            return Err(SearchError::BadOrder(self.order));
        }
        if self.threads == 0 {
            return Err(SearchError::NoThreads);
        }
        for r in &self.require {
            if let Some(f) = self.forbid.iter().find(|f| f.key() == r.key()) {
                return Err(SearchError::Conflict(f.label.clone()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub enum SearchResult {
    /// A loop meeting the spec, with one witness per forbidden law.
    Found {
        table: FiniteLoop,
        witnesses: Vec<Witness>,
        nodes: u64,
    },
    /// No loop of this order meets the spec.
    Exhausted { order: usize, nodes: u64 },
}

impl SearchResult {
    pub fn found(&self) -> Option<&FiniteLoop> {
        match self {
            SearchResult::Found { table, .. } => Some(table),
            SearchResult::Exhausted { .. } => None,
        }
    }

    pub fn nodes(&self) -> u64 {
        match self {
            SearchResult::Found { nodes, .. } | SearchResult::Exhausted { nodes, .. } => *nodes,
        }
    }
}

#[derive(Debug, Clone)]
pub enum MinimalResult {
    Found {
        order: usize,
        table: FiniteLoop,
        witnesses: Vec<Witness>,
    },
    NoneUpTo(usize),
}

impl fmt::Display for MinimalResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MinimalResult::Found { order, .. } => write!(f, "found at order {order}"),
            MinimalResult::NoneUpTo(cap) => write!(f, "none up to order {cap}"),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Frame {
    cell: usize,
    next: u32,
    mark: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum State {
    Fresh,
    Running,
    Done,
}

/// Depth-first search state. Each call to [`Solver::next_solution`] resumes
/// where the previous one stopped.
struct Solver {
    n: usize,
    cells: Vec<u8>,
    row_used: Vec<u64>,
    col_used: Vec<u64>,
    trail: Vec<usize>,
    frames: Vec<Frame>,
    laws: Arc<[CompiledLaw]>,
    scratch: Vec<Option<usize>>,
    /// Cells at or beyond this index are never branched on.
    horizon: usize,
    state: State,
    nodes: u64,
}

impl Solver {
    fn new(n: usize, laws: Arc<[CompiledLaw]>) -> Solver {
        let scratch_len = laws.iter().map(CompiledLaw::scratch_len).max().unwrap_or(1);
        let mut s = Solver {
            n,
            cells: vec![UNSET; n * n],
            row_used: vec![0; n],
            col_used: vec![0; n],
            trail: Vec::with_capacity(n * n),
            frames: Vec::with_capacity(n * n),
            laws,
            scratch: vec![None; scratch_len],
            horizon: n * n,
            state: State::Fresh,
            nodes: 0,
        };
        for a in 0..n {
            s.place(a, a as u8);
            if a > 0 {
                s.place(a * n, a as u8);
            }
        }
        s.trail.clear();
        s
    }

    /// Starts from a partial table produced by another solver on the same
    /// laws.
    fn with_prefix(n: usize, laws: Arc<[CompiledLaw]>, prefix: &[u8]) -> Solver {
        let mut s = Solver::new(n, laws);
        for (cell, &v) in prefix.iter().enumerate() {
            if v != UNSET && s.cells[cell] == UNSET {
                s.place(cell, v);
            }
        }
        s.trail.clear();
        s
    }

    #[inline]
    fn place(&mut self, cell: usize, v: u8) {
        let (r, c) = (cell / self.n, cell % self.n);
        self.cells[cell] = v;
        self.row_used[r] |= 1 << v;
        self.col_used[c] |= 1 << v;
        self.trail.push(cell);
    }

    #[inline]
    fn assign(&mut self, cell: usize, v: u8) -> bool {
        let (r, c) = (cell / self.n, cell % self.n);
        if (self.row_used[r] | self.col_used[c]) >> v & 1 == 1 {
            return false;
        }
        self.place(cell, v);
        true
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let cell = self.trail.pop().expect("nonempty trail");
            let (r, c) = (cell / self.n, cell % self.n);
            let v = self.cells[cell];
            self.cells[cell] = UNSET;
            self.row_used[r] &= !(1 << v);
            self.col_used[c] &= !(1 << v);
        }
    }

    fn first_open(&self) -> Option<usize> {
        self.cells
            .iter()
            .position(|&v| v == UNSET)
            .filter(|&c| c < self.horizon)
    }

    /// Applies required laws to a fixpoint. Returns false on a conflict.
    fn propagate(&mut self) -> bool {
        if self.laws.is_empty() {
            return true;
        }
        let n = self.n;
        let laws = Arc::clone(&self.laws);
        loop {
            let mut changed = false;
            for law in laws.iter() {
                let bound = |k: usize| if k < law.arity() { n } else { 1 };
                for x in 0..bound(0) {
                    for y in 0..bound(1) {
                        for z in 0..bound(2) {
                            let vars = [x, y, z];
                            let cells = &self.cells;
                            let cell = |a: usize, b: usize| {
                                let v = cells[a * n + b];
                                (v != UNSET).then_some(v as usize)
                            };
                            let l = law.lhs.eval_partial(cell, &vars, &mut self.scratch);
                            let r = law.rhs.eval_partial(cell, &vars, &mut self.scratch);
                            let forced = match (l, r) {
                                (Partial::Known(a), Partial::Known(b)) => {
                                    if a != b {
                                        return false;
                                    }
                                    None
                                }
                                (Partial::Known(v), Partial::Missing(p, q))
                                | (Partial::Missing(p, q), Partial::Known(v)) => Some((p * n + q, v)),
                                _ => None,
                            };
                            if let Some((cell, v)) = forced {
                                if !self.assign(cell, v as u8) {
                                    return false;
                                }
                                changed = true;
                            }
                        }
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn next_solution(&mut self) -> Option<Vec<u8>> {
        match self.state {
            State::Done => return None,
            State::Fresh => {
                self.state = State::Running;
                if !self.propagate() {
                    self.state = State::Done;
                    return None;
                }
                match self.first_open() {
                    None => {
                        self.state = State::Done;
                        return Some(self.cells.clone());
                    }
                    Some(cell) => self.frames.push(Frame {
                        cell,
                        next: 0,
                        mark: self.trail.len(),
                    }),
                }
            }
            State::Running => {}
        }
        let full = (1u64 << self.n) - 1;
        while let Some(&Frame { cell, next, mark }) = self.frames.last() {
            self.undo_to(mark);
            let (r, c) = (cell / self.n, cell % self.n);
            let avail = !(self.row_used[r] | self.col_used[c]) & full & (u64::MAX << next);
            if avail == 0 {
                self.frames.pop();
                continue;
            }
            let v = avail.trailing_zeros();
            self.frames.last_mut().expect("frame").next = v + 1;
            self.nodes += 1;
            self.place(cell, v as u8);
            if self.propagate() {
                match self.first_open() {
                    None => return Some(self.cells.clone()),
                    Some(next_cell) => self.frames.push(Frame {
                        cell: next_cell,
                        next: 0,
                        mark: self.trail.len(),
                    }),
                }
            }
        }
        self.state = State::Done;
        None
    }
}

fn to_loop(n: usize, cells: &[u8]) -> FiniteLoop {
    FiniteLoop::from_normalized(n, cells.iter().map(|&v| v as usize).collect())
}

/// Every normalized loop of order `n` satisfying the given laws, in
/// lexicographic table order.
pub struct Models {
    n: usize,
    solver: Solver,
}

impl Iterator for Models {
    type Item = FiniteLoop;

    fn next(&mut self) -> Option<FiniteLoop> {
        self.solver
            .next_solution()
            .map(|cells| to_loop(self.n, &cells))
    }
}

fn compile(laws: &[Law]) -> Arc<[CompiledLaw]> {
    laws.iter()
        .map(|l| CompiledLaw::new(l.label.clone(), &l.equation))
        .collect()
}

/// Streams every reduced loop table of order `n` that satisfies `require`.
pub fn models(n: usize, require: &[Law]) -> Result<Models, SearchError> {
    if n == 0 || n > MAX_ORDER {
        return Err(SearchError::BadOrder(n));
    }
    Ok(Models {
        n,
        solver: Solver::new(n, compile(require)),
    })
}

/// Streams every normalized loop of order `n` (reduced Latin squares),
/// each exactly once, in lexicographic order.
pub fn enumerate_loops(n: usize) -> Result<Models, SearchError> {
    models(n, &[])
}

/// Lists the partial tables with the first free row completed. Each one
/// roots an independent subtree; together they partition the search space,
/// in lexicographic order.
fn split_first_row(n: usize, laws: &Arc<[CompiledLaw]>) -> (Vec<Vec<u8>>, u64) {
    let mut s = Solver::new(n, Arc::clone(laws));
    s.horizon = if n > 1 { 2 * n } else { 0 };
    let mut units = Vec::new();
    while let Some(prefix) = s.next_solution() {
        units.push(prefix);
    }
    (units, s.nodes)
}

struct UnitOutcome {
    table: FiniteLoop,
    witnesses: Vec<Witness>,
}

fn search_unit(
    n: usize,
    laws: &Arc<[CompiledLaw]>,
    forbid: &[CompiledLaw],
    prefix: &[u8],
    nodes: &AtomicU64,
) -> Option<UnitOutcome> {
    let mut s = Solver::with_prefix(n, Arc::clone(laws), prefix);
    let mut found = None;
    while let Some(cells) = s.next_solution() {
        let table = to_loop(n, &cells);
        let witnesses: Option<Vec<Witness>> =
            forbid.iter().map(|law| law.counterexample(&table)).collect();
        if let Some(witnesses) = witnesses {
            found = Some(UnitOutcome { table, witnesses });
            break;
        }
    }
    nodes.fetch_add(s.nodes, Ordering::Relaxed);
    found
}

/// Looks for a loop of the given order satisfying every required law and
/// violating every forbidden one.
pub fn find(spec: &SearchSpec) -> Result<SearchResult, SearchError> {
    spec.validate()?;
    let n = spec.order;
    let laws = compile(&spec.require);
    let forbid: Vec<CompiledLaw> = compile(&spec.forbid).iter().cloned().collect();
    let nodes = AtomicU64::new(0);

    let outcome = if spec.threads == 1 {
        search_unit(n, &laws, &forbid, &vec![UNSET; n * n], &nodes)
    } else {
        let (units, split_nodes) = split_first_row(n, &laws);
        nodes.fetch_add(split_nodes, Ordering::Relaxed);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(spec.threads)
            .build()
            .expect("thread pool");
        pool.install(|| {
            let run = |prefix: &Vec<u8>| search_unit(n, &laws, &forbid, prefix, &nodes);
            match spec.mode {
                Mode::Minimal => units.par_iter().find_map_first(run),
                Mode::FirstFound => units.par_iter().find_map_any(run),
            }
        })
    };
    let nodes = nodes.into_inner();
    Ok(match outcome {
        Some(UnitOutcome { table, witnesses }) => {
            debug_assert!(revalidate(&table, spec));
            SearchResult::Found {
                table,
                witnesses,
                nodes,
            }
        }
        None => SearchResult::Exhausted { order: n, nodes },
    })
}

/// Checks a table against a spec using the plain evaluator.
pub fn revalidate(table: &FiniteLoop, spec: &SearchSpec) -> bool {
    let holds = |law: &Law| CompiledLaw::new(law.label.clone(), &law.equation).holds(table);
    table.order() == spec.order
        && spec.require.iter().all(holds)
        && !spec.forbid.iter().any(holds)
}

/// Tries orders `1..=max_order` in turn and returns the first hit.
pub fn find_minimal(
    require: &[Law],
    forbid: &[Law],
    max_order: usize,
    threads: usize,
) -> Result<MinimalResult, SearchError> {
    for order in 1..=max_order {
        let spec = SearchSpec {
            order,
            require: require.to_vec(),
            forbid: forbid.to_vec(),
            mode: Mode::Minimal,
            threads,
        };
        if let SearchResult::Found {
            table, witnesses, ..
        } = find(&spec)?
        {
            return Ok(MinimalResult::Found {
                order,
                table,
                witnesses,
            });
        }
    }
    Ok(MinimalResult::NoneUpTo(max_order))
}
