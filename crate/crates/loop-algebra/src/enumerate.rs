//! Enumeration of small loops, isomorphism testing, builtin tables, and
//! Steiner-loop construction.
//!
//! Generation fills the Cayley table cell by cell with Latin-square
//! backtracking, the identity fixed at 0 and row and column 0 forced.
//! Identity constraints are watched incrementally: each ground instance
//! of a constraint watches the first unfilled cell that blocks its
//! evaluation and is re-evaluated when that cell is assigned. Watches
//! prune; a full check of every constraint on each completed table is
//! the authority.

use crate::error::{Error, Result};
use crate::identity::{Expr, Identity, Verdict};
use crate::morphisms;
use crate::perm::Perm;
use crate::structure;
use crate::table::{Element, LoopTable};

const EMPTY: usize = usize::MAX;

/// Order in which free cells are assigned during generation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CellOrder {
    #[default]
    RowMajor,
    ColMajor,
}

/// Non-equational properties usable as generation post-filters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropFlag {
    NuclearSquare,
    CentrumSquare,
    CentralSquare,
    PowerAssociative,
    ALoop,
    TwoSidedInverses,
}

impl PropFlag {
    pub const NAMES: &'static [(&'static str, PropFlag)] = &[
        ("nuclear_square", PropFlag::NuclearSquare),
        ("centrum_square", PropFlag::CentrumSquare),
        ("central_square", PropFlag::CentralSquare),
        ("power_associative", PropFlag::PowerAssociative),
        ("a_loop", PropFlag::ALoop),
        ("two_sided_inverses", PropFlag::TwoSidedInverses),
    ];

    pub fn parse(name: &str) -> Option<PropFlag> {
        Self::NAMES.iter().find(|(n, _)| *n == name).map(|(_, f)| *f)
    }

    pub fn holds(&self, t: &LoopTable) -> bool {
        match self {
            PropFlag::NuclearSquare => structure::is_nuclear_square(t),
            PropFlag::CentrumSquare => structure::is_centrum_square(t),
            PropFlag::CentralSquare => structure::is_central_square(t),
            PropFlag::PowerAssociative => structure::is_power_associative(t),
            PropFlag::ALoop => morphisms::is_a_loop(t),
            PropFlag::TwoSidedInverses => t.has_two_sided_inverses(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct GenerationSpec {
    pub order: usize,
    pub identities: Vec<Identity>,
    pub flags: Vec<PropFlag>,
    pub limit: Option<usize>,
    pub up_to_isomorphism: bool,
    pub cell_order: CellOrder,
}

impl GenerationSpec {
    pub fn new(order: usize) -> Self {
        GenerationSpec {
            order,
            identities: Vec::new(),
            flags: Vec::new(),
            limit: None,
            up_to_isomorphism: false,
            cell_order: CellOrder::RowMajor,
        }
    }
}

/// Runs the generation, calling `emit` for each table; `emit` returns
/// false to stop early. Returns the number of tables emitted. Orders
/// above the budget require an explicit limit.
pub fn generate(
    spec: &GenerationSpec,
    budget: usize,
    emit: &mut dyn FnMut(&LoopTable) -> bool,
) -> Result<usize> {
    if spec.order > budget && spec.limit.is_none() {
        return Err(Error::BudgetExceeded { order: spec.order, limit: budget });
    }
    if spec.order > 64 {
        return Err(Error::BudgetExceeded { order: spec.order, limit: 64 });
    }
    if spec.order == 0 || spec.limit == Some(0) {
        return Ok(0);
    }
    let mut engine = Engine::new(spec);
    if !engine.seed_instances() {
        return Ok(0);
    }
    let mut emitted = 0;
    engine.search(0, spec, &mut emitted, emit);
    if std::env::var_os("LOOPALG_GEN_STATS").is_some() {
        eprintln!(
            "gen stats: nodes={} forced={} conflicts={} completions={}",
            engine.stat_nodes, engine.stat_forced, engine.stat_conflicts, engine.stat_leaves
        );
    }
    Ok(emitted)
}

pub fn generate_all(spec: &GenerationSpec, budget: usize) -> Result<Vec<LoopTable>> {
    let mut out = Vec::new();
    generate(spec, budget, &mut |t| {
        out.push(t.clone());
        true
    })?;
    Ok(out)
}

/// An identity's term compiled against its sorted variable list.
enum Term {
    Var(usize),
    Neutral,
    Mul(Box<Term>, Box<Term>),
    LeftInv(Box<Term>),
    RightInv(Box<Term>),
    Inv(Box<Term>),
}

fn compile(e: &Expr, vars: &[char]) -> Term {
    match e {
        Expr::Var(c) => Term::Var(vars.iter().position(|v| v == c).unwrap()),
        Expr::Neutral => Term::Neutral,
        Expr::Mul(a, b) => Term::Mul(Box::new(compile(a, vars)), Box::new(compile(b, vars))),
        Expr::LeftInv(a) => Term::LeftInv(Box::new(compile(a, vars))),
        Expr::RightInv(a) => Term::RightInv(Box::new(compile(a, vars))),
        Expr::Inv(a) => Term::Inv(Box::new(compile(a, vars))),
    }
}

struct CompiledIdentity {
    lhs: Term,
    rhs: Term,
    var_count: usize,
}

/// A ground instance of a constraint. `gen` stamps the watcher entries
/// that are still current; entries with older stamps are dropped lazily.
struct Instance {
    identity: usize,
    env: Vec<Element>,
    gen: u32,
}

enum Ev {
    Known(Element),
    Blocked,
    Conflict,
}

enum InstanceStatus {
    Satisfied,
    Violated,
    Blocked,
    Forced(usize, Element),
}

enum ForceOutcome {
    Assign(usize, Element),
    Violated,
    Stuck,
}

/// The partial Cayley table under construction.
struct Board {
    n: usize,
    cells: Vec<usize>,
    row_used: Vec<u64>,
    col_used: Vec<u64>,
}

impl Board {
    /// Evaluates a term on the partial table, recording in `touched`
    /// every cell the walk reads, filled or not. The owning instance is
    /// re-examined whenever one of those cells is assigned, so its
    /// status is recomputed as early as the table allows.
    fn eval(&self, term: &Term, env: &[Element], touched: &mut Vec<usize>) -> Ev {
        match term {
            Term::Var(i) => Ev::Known(env[*i]),
            Term::Neutral => Ev::Known(0),
            Term::Mul(a, b) => {
                let va = match self.eval(a, env, touched) {
                    Ev::Known(v) => v,
                    other => return other,
                };
                let vb = match self.eval(b, env, touched) {
                    Ev::Known(v) => v,
                    other => return other,
                };
                let cell = va * self.n + vb;
                touched.push(cell);
                match self.cells[cell] {
                    EMPTY => Ev::Blocked,
                    v => Ev::Known(v),
                }
            }
            Term::LeftInv(a) => match self.eval(a, env, touched) {
                Ev::Known(v) => self.left_inverse_scan(v, touched),
                other => other,
            },
            Term::RightInv(a) => match self.eval(a, env, touched) {
                Ev::Known(v) => self.right_inverse_scan(v, touched),
                other => other,
            },
            Term::Inv(a) => {
                let v = match self.eval(a, env, touched) {
                    Ev::Known(v) => v,
                    other => return other,
                };
                let left = self.left_inverse_scan(v, touched);
                let right = self.right_inverse_scan(v, touched);
                match (left, right) {
                    (Ev::Known(l), Ev::Known(r)) => {
                        if l == r {
                            Ev::Known(l)
                        } else {
                            Ev::Conflict
                        }
                    }
                    (Ev::Known(l), _) => Ev::Known(l),
                    (_, Ev::Known(r)) => Ev::Known(r),
                    (blocked, _) => blocked,
                }
            }
        }
    }

    /// Solves a*v = 0 on the partial table: scans column v for the value
    /// 0, blocking on the column's first unfilled cell if absent.
    fn left_inverse_scan(&self, v: Element, touched: &mut Vec<usize>) -> Ev {
        if self.col_used[v] & 1 != 0 {
            let r = (0..self.n)
                .find(|&r| self.cells[r * self.n + v] == 0)
                .expect("column marked as containing 0");
            touched.push(r * self.n + v);
            return Ev::Known(r);
        }
        let r = (0..self.n)
            .find(|&r| self.cells[r * self.n + v] == EMPTY)
            .expect("column without 0 has an unfilled cell");
        touched.push(r * self.n + v);
        Ev::Blocked
    }

    /// Solves v*b = 0 on the partial table: scans row v.
    fn right_inverse_scan(&self, v: Element, touched: &mut Vec<usize>) -> Ev {
        if self.row_used[v] & 1 != 0 {
            let c = (0..self.n)
                .find(|&c| self.cells[v * self.n + c] == 0)
                .expect("row marked as containing 0");
            touched.push(v * self.n + c);
            return Ev::Known(c);
        }
        let c = (0..self.n)
            .find(|&c| self.cells[v * self.n + c] == EMPTY)
            .expect("row without 0 has an unfilled cell");
        touched.push(v * self.n + c);
        Ev::Blocked
    }

    fn find_in_row(
        &self,
        row: usize,
        value: Element,
        touched: &mut Vec<usize>,
    ) -> Option<usize> {
        if self.row_used[row] & (1u64 << value) == 0 {
            return None;
        }
        let c = (0..self.n)
            .find(|&c| self.cells[row * self.n + c] == value)
            .expect("row marked as containing value");
        touched.push(row * self.n + c);
        Some(c)
    }

    fn find_in_col(
        &self,
        col: usize,
        value: Element,
        touched: &mut Vec<usize>,
    ) -> Option<usize> {
        if self.col_used[col] & (1u64 << value) == 0 {
            return None;
        }
        let r = (0..self.n)
            .find(|&r| self.cells[r * self.n + col] == value)
            .expect("column marked as containing value");
        touched.push(r * self.n + col);
        Some(r)
    }

    /// Requires `term`, currently blocked, to take the value `needed`.
    /// Descends using Latin cancellation: a product with a known value
    /// and one known argument determines the other argument whenever the
    /// value already appears in that row or column. Ends at a directly
    /// assignable cell, a contradiction, or a dead end.
    fn force(
        &self,
        term: &Term,
        env: &[Element],
        needed: Element,
        touched: &mut Vec<usize>,
    ) -> ForceOutcome {
        match term {
            Term::Var(i) => {
                if env[*i] == needed {
                    ForceOutcome::Stuck
                } else {
                    ForceOutcome::Violated
                }
            }
            Term::Neutral => {
                if needed == 0 {
                    ForceOutcome::Stuck
                } else {
                    ForceOutcome::Violated
                }
            }
            Term::Mul(a, b) => {
                match (self.eval(a, env, touched), self.eval(b, env, touched)) {
                    (Ev::Conflict, _) | (_, Ev::Conflict) => ForceOutcome::Violated,
                    (Ev::Known(va), Ev::Known(vb)) => {
                        ForceOutcome::Assign(va * self.n + vb, needed)
                    }
                    (Ev::Known(va), _) => match self.find_in_row(va, needed, touched) {
                        Some(col) => self.force(b, env, col, touched),
                        None => ForceOutcome::Stuck,
                    },
                    (_, Ev::Known(vb)) => match self.find_in_col(vb, needed, touched) {
                        Some(row) => self.force(a, env, row, touched),
                        None => ForceOutcome::Stuck,
                    },
                    _ => ForceOutcome::Stuck,
                }
            }
            Term::LeftInv(a) | Term::Inv(a) => match self.eval(a, env, touched) {
                Ev::Conflict => ForceOutcome::Violated,
                Ev::Known(va) => ForceOutcome::Assign(needed * self.n + va, 0),
                _ => match self.find_in_row(needed, 0, touched) {
                    Some(col) => self.force(a, env, col, touched),
                    None => ForceOutcome::Stuck,
                },
            },
            Term::RightInv(a) => match self.eval(a, env, touched) {
                Ev::Conflict => ForceOutcome::Violated,
                Ev::Known(va) => ForceOutcome::Assign(va * self.n + needed, 0),
                _ => match self.find_in_col(needed, 0, touched) {
                    Some(row) => self.force(a, env, row, touched),
                    None => ForceOutcome::Stuck,
                },
            },
        }
    }

    fn instance_status(
        &self,
        id: &CompiledIdentity,
        env: &[Element],
        touched: &mut Vec<usize>,
    ) -> InstanceStatus {
        let lhs = self.eval(&id.lhs, env, touched);
        let rhs = self.eval(&id.rhs, env, touched);
        match (lhs, rhs) {
            (Ev::Conflict, _) | (_, Ev::Conflict) => InstanceStatus::Violated,
            (Ev::Known(a), Ev::Known(b)) => {
                if a == b {
                    InstanceStatus::Satisfied
                } else {
                    InstanceStatus::Violated
                }
            }
            (Ev::Known(v), Ev::Blocked) => self.force_to_status(&id.rhs, env, v, touched),
            (Ev::Blocked, Ev::Known(v)) => self.force_to_status(&id.lhs, env, v, touched),
            (Ev::Blocked, Ev::Blocked) => InstanceStatus::Blocked,
        }
    }

    fn force_to_status(
        &self,
        term: &Term,
        env: &[Element],
        value: Element,
        touched: &mut Vec<usize>,
    ) -> InstanceStatus {
        match self.force(term, env, value, touched) {
            ForceOutcome::Assign(cell, v) => {
                touched.push(cell);
                InstanceStatus::Forced(cell, v)
            }
            ForceOutcome::Violated => InstanceStatus::Violated,
            ForceOutcome::Stuck => InstanceStatus::Blocked,
        }
    }
}

struct Engine {
    board: Board,
    fill: Vec<(usize, usize)>,
    identities: Vec<CompiledIdentity>,
    instances: Vec<Instance>,
    watchers: Vec<Vec<(u32, u32)>>,
    touched: Vec<usize>,
    stat_nodes: u64,
    stat_forced: u64,
    stat_conflicts: u64,
    stat_leaves: u64,
}

impl Engine {
    fn new(spec: &GenerationSpec) -> Self {
        let n = spec.order;
        let mut cells = vec![EMPTY; n * n];
        let mut row_used = vec![0u64; n];
        let mut col_used = vec![0u64; n];
        let full: u64 = if n == 64 { u64::MAX } else { (1 << n) - 1 };
        for y in 0..n {
            cells[y] = y;
            col_used[y] = 1 << y;
        }
        for x in 0..n {
            cells[x * n] = x;
            row_used[x] = 1 << x;
        }
        row_used[0] = full;
        col_used[0] = full;
        let mut fill = Vec::with_capacity((n.max(1) - 1) * (n.max(1) - 1));
        match spec.cell_order {
            CellOrder::RowMajor => {
                for x in 1..n {
                    for y in 1..n {
                        fill.push((x, y));
                    }
                }
            }
            CellOrder::ColMajor => {
                for y in 1..n {
                    for x in 1..n {
                        fill.push((x, y));
                    }
                }
            }
        }
        let identities = spec
            .identities
            .iter()
            .map(|id| {
                let vars = id.variables();
                CompiledIdentity {
                    lhs: compile(&id.lhs, &vars),
                    rhs: compile(&id.rhs, &vars),
                    var_count: vars.len(),
                }
            })
            .collect();
        Engine {
            board: Board { n, cells, row_used, col_used },
            fill,
            identities,
            instances: Vec::new(),
            watchers: vec![Vec::new(); n * n],
            touched: Vec::new(),
            stat_nodes: 0,
            stat_forced: 0,
            stat_conflicts: 0,
            stat_leaves: 0,
        }
    }

    /// Creates one watched instance per ground assignment of each
    /// identity, then applies assignments the prefilled row and column
    /// already force. Returns false if some instance is violated
    /// outright, in which case no loop of this order satisfies it.
    /// Instances satisfied at this point read only the immutable first
    /// row and column, so they are dropped.
    fn seed_instances(&mut self) -> bool {
        let mut touched = Vec::new();
        let mut forced = Vec::new();
        for idx in 0..self.identities.len() {
            let k = self.identities[idx].var_count;
            let mut env = vec![0usize; k];
            loop {
                touched.clear();
                let status =
                    self.board.instance_status(&self.identities[idx], &env, &mut touched);
                match status {
                    InstanceStatus::Satisfied => {}
                    InstanceStatus::Violated => return false,
                    InstanceStatus::Blocked => self.add_instance(idx, &env, &mut touched),
                    InstanceStatus::Forced(cell, v) => {
                        self.add_instance(idx, &env, &mut touched);
                        forced.push((cell, v));
                    }
                }
                let mut i = k;
                loop {
                    if i == 0 {
                        break;
                    }
                    i -= 1;
                    env[i] += 1;
                    if env[i] < self.board.n {
                        break;
                    }
                    env[i] = 0;
                }
                if env.iter().all(|&v| v == 0) {
                    break;
                }
                if k == 0 {
                    break;
                }
            }
        }
        let mut trail = Vec::new();
        for (cell, v) in forced {
            if !self.assign(cell, v, &mut trail) {
                return false;
            }
        }
        true
    }

    fn add_instance(&mut self, identity: usize, env: &[Element], touched: &mut Vec<usize>) {
        let idx = self.instances.len() as u32;
        self.instances.push(Instance { identity, env: env.to_vec(), gen: 0 });
        touched.sort_unstable();
        touched.dedup();
        for &tc in touched.iter() {
            self.watchers[tc].push((idx, 0));
        }
    }

    /// Recomputes one instance's status and re-registers it on every
    /// cell its evaluation now reads, under a fresh generation stamp.
    fn refresh_instance(&mut self, idx: usize, touched: &mut Vec<usize>) -> InstanceStatus {
        touched.clear();
        let inst = &self.instances[idx];
        let status =
            self.board.instance_status(&self.identities[inst.identity], &inst.env, touched);
        let gen = self.instances[idx].gen.wrapping_add(1);
        self.instances[idx].gen = gen;
        touched.sort_unstable();
        touched.dedup();
        for &tc in touched.iter() {
            self.watchers[tc].push((idx as u32, gen));
        }
        status
    }

    /// Assigns cell := v together with every assignment the constraint
    /// instances force in consequence. Each new assignment is pushed
    /// onto the trail. Returns false on a conflict; the caller unwinds
    /// the trail either way.
    fn assign(&mut self, cell: usize, v: Element, trail: &mut Vec<usize>) -> bool {
        let mut touched = std::mem::take(&mut self.touched);
        let ok = self.assign_inner(cell, v, trail, &mut touched);
        self.touched = touched;
        ok
    }

    fn assign_inner(
        &mut self,
        cell: usize,
        v: Element,
        trail: &mut Vec<usize>,
        touched: &mut Vec<usize>,
    ) -> bool {
        let mut queue = vec![(cell, v)];
        while let Some((c, val)) = queue.pop() {
            match self.board.cells[c] {
                cur if cur == val => continue,
                EMPTY => {}
                _ => return false,
            }
            let (x, y) = (c / self.board.n, c % self.board.n);
            let bit = 1u64 << val;
            if (self.board.row_used[x] | self.board.col_used[y]) & bit != 0 {
                return false;
            }
            self.board.cells[c] = val;
            self.board.row_used[x] |= bit;
            self.board.col_used[y] |= bit;
            trail.push(c);
            let pending = std::mem::take(&mut self.watchers[c]);
            let mut ok = true;
            let mut i = 0;
            while i < pending.len() {
                let (idx, gen) = pending[i];
                i += 1;
                if self.instances[idx as usize].gen != gen {
                    continue;
                }
                match self.refresh_instance(idx as usize, touched) {
                    InstanceStatus::Satisfied | InstanceStatus::Blocked => {}
                    InstanceStatus::Forced(d, fv) => {
                        self.stat_forced += 1;
                        queue.push((d, fv));
                    }
                    InstanceStatus::Violated => {
                        ok = false;
                        break;
                    }
                }
            }
            if i < pending.len() {
                self.watchers[c].extend_from_slice(&pending[i..]);
            }
            if !ok {
                return false;
            }
        }
        true
    }

    fn undo(&mut self, trail: &[usize]) {
        for &c in trail.iter().rev() {
            let (x, y) = (c / self.board.n, c % self.board.n);
            let bit = 1u64 << self.board.cells[c];
            self.board.cells[c] = EMPTY;
            self.board.row_used[x] &= !bit;
            self.board.col_used[y] &= !bit;
        }
    }

    fn search(
        &mut self,
        depth: usize,
        spec: &GenerationSpec,
        emitted: &mut usize,
        emit: &mut dyn FnMut(&LoopTable) -> bool,
    ) -> bool {
        if depth == self.fill.len() {
            self.stat_leaves += 1;
            return self.complete(spec, emitted, emit);
        }
        let (x, y) = self.fill[depth];
        let cell = x * self.board.n + y;
        if self.board.cells[cell] != EMPTY {
            return self.search(depth + 1, spec, emitted, emit);
        }
        let taken = self.board.row_used[x] | self.board.col_used[y];
        let mut trail = Vec::new();
        for v in 0..self.board.n {
            if taken & (1u64 << v) != 0 {
                continue;
            }
            trail.clear();
            self.stat_nodes += 1;
            let keep_going = if self.assign(cell, v, &mut trail) {
                self.search(depth + 1, spec, emitted, emit)
            } else {
                self.stat_conflicts += 1;
                true
            };
            self.undo(&trail);
            if !keep_going {
                return false;
            }
        }
        true
    }

    fn complete(
        &self,
        spec: &GenerationSpec,
        emitted: &mut usize,
        emit: &mut dyn FnMut(&LoopTable) -> bool,
    ) -> bool {
        let table = LoopTable::from_cells(self.board.n, self.board.cells.clone())
            .expect("backtracking yields valid loops");
        let holds = spec.identities.iter().all(|id| id.check(&table) == Verdict::Holds)
            && spec.flags.iter().all(|f| f.holds(&table));
        if !holds {
            return true;
        }
        if spec.up_to_isomorphism {
            let key = canonical_key(&table);
            let own: Vec<u8> = table.cells().iter().map(|&v| v as u8).collect();
            if key != own {
                return true;
            }
        }
        *emitted += 1;
        if !emit(&table) {
            return false;
        }
        spec.limit != Some(*emitted)
    }
}

/// The lexicographically least cell vector over all relabelings that fix
/// 0. Two loops are isomorphic exactly when their keys are equal.
pub fn canonical_key(t: &LoopTable) -> Vec<u8> {
    let n = t.order();
    debug_assert!(n <= 256);
    let cells = t.cells();
    let mut best: Vec<u8> = cells.iter().map(|&v| v as u8).collect();
    if n <= 2 {
        return best;
    }
    let mut f: Vec<usize> = (0..n).collect();
    let mut finv: Vec<usize> = (0..n).collect();
    let mut scratch = vec![0u8; n * n];
    let m = n - 1;
    let mut c = vec![0usize; m];
    let mut i = 0;
    while i < m {
        if c[i] < i {
            let j = if i % 2 == 0 { 0 } else { c[i] };
            f.swap(1 + j, 1 + i);
            finv[f[1 + j]] = 1 + j;
            finv[f[1 + i]] = 1 + i;
            consider(&mut best, &mut scratch, cells, &f, &finv, n);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    best
}

fn consider(
    best: &mut [u8],
    scratch: &mut [u8],
    cells: &[Element],
    f: &[usize],
    finv: &[usize],
    n: usize,
) {
    let mut better = false;
    for a in 0..n {
        let row = finv[a] * n;
        for b in 0..n {
            let v = f[cells[row + finv[b]]] as u8;
            let idx = a * n + b;
            scratch[idx] = v;
            if !better {
                match v.cmp(&best[idx]) {
                    std::cmp::Ordering::Less => better = true,
                    std::cmp::Ordering::Greater => return,
                    std::cmp::Ordering::Equal => {}
                }
            }
        }
    }
    if better {
        best.copy_from_slice(scratch);
    }
}

/// Finds an isomorphism f with f(0) = 0 and f(x*y) = f(x)∘f(y), if any,
/// by backtracking with product propagation.
pub fn are_isomorphic(s: &LoopTable, t: &LoopTable) -> Result<Option<Perm>> {
    if s.order() != t.order() {
        return Err(Error::OrderMismatch { left: s.order(), right: t.order() });
    }
    let n = s.order();
    let mut f = vec![EMPTY; n];
    let mut used = vec![false; n];
    f[0] = 0;
    used[0] = true;
    if search_iso(s, t, &mut f, &mut used) {
        Ok(Some(Perm::from_image(f).expect("completed image is a bijection")))
    } else {
        Ok(None)
    }
}

fn search_iso(s: &LoopTable, t: &LoopTable, f: &mut [usize], used: &mut [bool]) -> bool {
    let n = s.order();
    let x = match (0..n).find(|&x| f[x] == EMPTY) {
        None => return true,
        Some(x) => x,
    };
    for v in 0..n {
        if used[v] {
            continue;
        }
        let mut trail = Vec::new();
        if set_image(s, t, f, used, &mut trail, x, v) && search_iso(s, t, f, used) {
            return true;
        }
        for &y in trail.iter().rev() {
            used[f[y]] = false;
            f[y] = EMPTY;
        }
    }
    false
}

fn set_image(
    s: &LoopTable,
    t: &LoopTable,
    f: &mut [usize],
    used: &mut [bool],
    trail: &mut Vec<usize>,
    x: usize,
    v: usize,
) -> bool {
    let n = s.order();
    let start = trail.len();
    f[x] = v;
    used[v] = true;
    trail.push(x);
    let mut i = start;
    while i < trail.len() {
        let a = trail[i];
        i += 1;
        for b in 0..n {
            if f[b] == EMPTY {
                continue;
            }
            let checks =
                [(s.mul(a, b), t.mul(f[a], f[b])), (s.mul(b, a), t.mul(f[b], f[a]))];
            for (p, img) in checks {
                if f[p] == EMPTY {
                    if used[img] {
                        return false;
                    }
                    f[p] = img;
                    used[img] = true;
                    trail.push(p);
                } else if f[p] != img {
                    return false;
                }
            }
        }
    }
    true
}

/// A collection of 3-element point sets over points 0..point_count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripleSystem {
    pub point_count: usize,
    pub triples: Vec<[usize; 3]>,
}

/// Builds the Steiner loop of a triple system: a fresh identity 0, each
/// point p becomes p+1, x*x = 0, and for distinct points x*y is the third
/// point of their unique common triple.
pub fn steiner_from_sts(ts: &TripleSystem) -> Result<LoopTable> {
    let v = ts.point_count;
    for triple in &ts.triples {
        let [a, b, c] = *triple;
        if a >= v || b >= v || c >= v || a == b || a == c || b == c {
            let p = *triple.iter().min().unwrap();
            return Err(Error::NotSteinerSystem { a: p, b: p, count: 1 });
        }
    }
    let mut third = vec![EMPTY; v * v];
    let mut count = vec![0usize; v * v];
    for triple in &ts.triples {
        let [a, b, c] = *triple;
        for (x, y, z) in [(a, b, c), (a, c, b), (b, c, a)] {
            count[x * v + y] += 1;
            count[y * v + x] += 1;
            third[x * v + y] = z;
            third[y * v + x] = z;
        }
    }
    for a in 0..v {
        for b in a + 1..v {
            if count[a * v + b] != 1 {
                return Err(Error::NotSteinerSystem { a, b, count: count[a * v + b] });
            }
        }
    }
    let n = v + 1;
    let mut rows = vec![vec![0; n]; n];
    rows[0] = (0..n).collect();
    for x in 1..n {
        rows[x][0] = x;
        rows[x][x] = 0;
        for y in 1..n {
            if y != x {
                rows[x][y] = third[(x - 1) * v + (y - 1)] + 1;
            }
        }
    }
    LoopTable::from_rows(rows)
}

fn fano() -> TripleSystem {
    TripleSystem {
        point_count: 7,
        triples: vec![
            [0, 1, 2],
            [0, 3, 4],
            [0, 5, 6],
            [1, 3, 5],
            [1, 4, 6],
            [2, 3, 6],
            [2, 4, 5],
        ],
    }
}

fn affine_order_9() -> TripleSystem {
    TripleSystem {
        point_count: 9,
        triples: vec![
            [0, 1, 2],
            [3, 4, 5],
            [6, 7, 8],
            [0, 3, 6],
            [1, 4, 7],
            [2, 5, 8],
            [0, 4, 8],
            [1, 5, 6],
            [2, 3, 7],
            [0, 5, 7],
            [1, 3, 8],
            [2, 4, 6],
        ],
    }
}

fn cyclic(k: usize) -> LoopTable {
    let rows = (0..k).map(|x| (0..k).map(|y| (x + y) % k).collect()).collect();
    LoopTable::from_rows(rows).expect("modular addition is a group")
}

fn elem_abelian_2(k: usize) -> LoopTable {
    let n = 1usize << k;
    let rows = (0..n).map(|x| (0..n).map(|y| x ^ y).collect()).collect();
    LoopTable::from_rows(rows).expect("xor is a group")
}

fn sym3() -> LoopTable {
    LoopTable::from_rows(vec![
        vec![0, 1, 2, 3, 4, 5],
        vec![1, 0, 3, 2, 5, 4],
        vec![2, 4, 0, 5, 1, 3],
        vec![3, 5, 1, 4, 0, 2],
        vec![4, 2, 5, 0, 3, 1],
        vec![5, 3, 4, 1, 2, 0],
    ])
    .expect("composition table of the order-6 symmetric group")
}

pub const BUILTIN_NAMES: &[&str] =
    &["cyclic:n", "klein", "elem_abelian_2:k", "sym3", "steiner8", "steiner10"];

/// Returns a named builtin loop: `cyclic:n`, `klein`, `elem_abelian_2:k`
/// (order 2^k), `sym3`, `steiner8` (Fano plane), or `steiner10` (affine
/// plane of order 3).
pub fn builtin(name: &str) -> Result<LoopTable> {
    if let Some(arg) = name.strip_prefix("cyclic:") {
        if let Ok(k) = arg.parse::<usize>() {
            if (1..=256).contains(&k) {
                return Ok(cyclic(k));
            }
        }
        return Err(Error::UnknownName(name.into()));
    }
    if let Some(arg) = name.strip_prefix("elem_abelian_2:") {
        if let Ok(k) = arg.parse::<usize>() {
            if k <= 8 {
                return Ok(elem_abelian_2(k));
            }
        }
        return Err(Error::UnknownName(name.into()));
    }
    match name {
        "klein" => Ok(elem_abelian_2(2)),
        "sym3" => Ok(sym3()),
        "steiner8" => steiner_from_sts(&fano()),
        "steiner10" => steiner_from_sts(&affine_order_9()),
        _ => Err(Error::UnknownName(name.into())),
    }
}

/// Writes tables as concatenated text blocks separated by '%' lines.
pub fn write_stream(tables: &[LoopTable]) -> String {
    let mut out = String::new();
    for (i, t) in tables.iter().enumerate() {
        if i > 0 {
            out.push_str("%\n");
        }
        out.push_str(&t.to_text());
    }
    out
}

/// Reads a '%'-separated stream of tables; chunks with no data lines are
/// skipped, so leading or trailing separators are harmless.
pub fn read_stream(text: &str) -> Result<Vec<LoopTable>> {
    let mut tables = Vec::new();
    let mut chunk = String::new();
    let mut chunk_start = 1;
    let mut has_data = false;
    let mut line_no = 0;
    for line in text.lines().chain(std::iter::once("%")) {
        line_no += 1;
        if line.trim() == "%" {
            if has_data {
                let t = LoopTable::from_text(&chunk).map_err(|e| match e {
                    Error::FileFormat { line, message } => {
                        Error::FileFormat { line: line + chunk_start - 1, message }
                    }
                    other => other,
                })?;
                tables.push(t);
            }
            chunk.clear();
            has_data = false;
            chunk_start = line_no + 1;
        } else {
            let trimmed = line.trim();
            if !trimmed.is_empty() && !trimmed.starts_with('#') {
                has_data = true;
            }
            chunk.push_str(line);
            chunk.push('\n');
        }
    }
    Ok(tables)
}
