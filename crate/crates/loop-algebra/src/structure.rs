//! Structural subsets and distinguished elements of a loop.
//!
//! Nuclei, centrum, and center are computed by exhaustive scans. The
//! commutator (a, b) is the unique solution of ab = (ba)(a, b) and the
//! associator (a, b, c) solves (ab)c = (a(bc))(a, b, c). Subsets are
//! returned as sorted element lists.

use crate::table::{Element, LoopTable};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureReport {
    pub n_lambda: Vec<Element>,
    pub n_rho: Vec<Element>,
    pub n_mu: Vec<Element>,
    pub nucleus: Vec<Element>,
    pub centrum: Vec<Element>,
    pub center: Vec<Element>,
    pub commutator_set: Vec<Element>,
    pub associator_set: Vec<Element>,
    pub square_set: Vec<Element>,
    pub power_associative: bool,
}

pub fn report(t: &LoopTable) -> StructureReport {
    StructureReport {
        n_lambda: left_nucleus(t),
        n_rho: right_nucleus(t),
        n_mu: middle_nucleus(t),
        nucleus: nucleus(t),
        centrum: centrum(t),
        center: center(t),
        commutator_set: commutator_set(t),
        associator_set: associator_set(t),
        square_set: t.squares(),
        power_associative: is_power_associative(t),
    }
}

/// Elements a with (ax)y = a(xy) for all x, y.
pub fn left_nucleus(t: &LoopTable) -> Vec<Element> {
    t.elements()
        .filter(|&a| {
            t.elements().all(|x| {
                t.elements().all(|y| t.mul(t.mul(a, x), y) == t.mul(a, t.mul(x, y)))
            })
        })
        .collect()
}

/// Elements a with y(xa) = (yx)a for all x, y.
pub fn right_nucleus(t: &LoopTable) -> Vec<Element> {
    t.elements()
        .filter(|&a| {
            t.elements().all(|x| {
                t.elements().all(|y| t.mul(y, t.mul(x, a)) == t.mul(t.mul(y, x), a))
            })
        })
        .collect()
}

/// Elements a with (ya)x = y(ax) for all x, y.
pub fn middle_nucleus(t: &LoopTable) -> Vec<Element> {
    t.elements()
        .filter(|&a| {
            t.elements().all(|x| {
                t.elements().all(|y| t.mul(t.mul(y, a), x) == t.mul(y, t.mul(a, x)))
            })
        })
        .collect()
}

pub fn nucleus(t: &LoopTable) -> Vec<Element> {
    let rho = right_nucleus(t);
    let mu = middle_nucleus(t);
    left_nucleus(t)
        .into_iter()
        .filter(|a| rho.binary_search(a).is_ok() && mu.binary_search(a).is_ok())
        .collect()
}

/// Elements commuting with everything.
pub fn centrum(t: &LoopTable) -> Vec<Element> {
    t.elements()
        .filter(|&a| t.elements().all(|x| t.mul(a, x) == t.mul(x, a)))
        .collect()
}

pub fn center(t: &LoopTable) -> Vec<Element> {
    let c = centrum(t);
    nucleus(t).into_iter().filter(|a| c.binary_search(a).is_ok()).collect()
}

/// The unique c with ab = (ba)c.
pub fn commutator(t: &LoopTable, a: Element, b: Element) -> Element {
    t.ldiv(t.mul(b, a), t.mul(a, b))
}

/// The unique d with (ab)c = (a(bc))d.
pub fn associator(t: &LoopTable, a: Element, b: Element, c: Element) -> Element {
    t.ldiv(t.mul(a, t.mul(b, c)), t.mul(t.mul(a, b), c))
}

pub fn commutator_set(t: &LoopTable) -> Vec<Element> {
    let mut present = vec![false; t.order()];
    for a in t.elements() {
        for b in t.elements() {
            present[commutator(t, a, b)] = true;
        }
    }
    t.elements().filter(|&v| present[v]).collect()
}

pub fn associator_set(t: &LoopTable) -> Vec<Element> {
    let mut present = vec![false; t.order()];
    for a in t.elements() {
        for b in t.elements() {
            for c in t.elements() {
                present[associator(t, a, b, c)] = true;
            }
        }
    }
    t.elements().filter(|&v| present[v]).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UniqueKind {
    Commutator,
    Associator,
    Square,
    CommutatorAssociator,
}

/// The element s when the relevant set equals {0, s} with s nonzero.
/// For `CommutatorAssociator` both sets must equal subsets of {0, s}
/// with the same s, and s must actually occur.
pub fn unique_nonidentity(t: &LoopTable, kind: UniqueKind) -> Option<Element> {
    let single = |set: Vec<Element>| -> Option<Element> {
        match set.as_slice() {
            [0, s] => Some(*s),
            _ => None,
        }
    };
    match kind {
        UniqueKind::Commutator => single(commutator_set(t)),
        UniqueKind::Associator => single(associator_set(t)),
        UniqueKind::Square => single(t.squares()),
        UniqueKind::CommutatorAssociator => {
            let mut union: Vec<Element> = commutator_set(t);
            union.extend(associator_set(t));
            union.sort_unstable();
            union.dedup();
            single(union)
        }
    }
}

pub fn is_nuclear_square(t: &LoopTable) -> bool {
    let n = nucleus(t);
    t.squares().iter().all(|s| n.binary_search(s).is_ok())
}

pub fn is_centrum_square(t: &LoopTable) -> bool {
    let c = centrum(t);
    t.squares().iter().all(|s| c.binary_search(s).is_ok())
}

pub fn is_central_square(t: &LoopTable) -> bool {
    let z = center(t);
    t.squares().iter().all(|s| z.binary_search(s).is_ok())
}

/// True when every element generates a cyclic group: for each x of order
/// d, the left-normed powers satisfy x^i * x^j = x^((i+j) mod d).
pub fn is_power_associative(t: &LoopTable) -> bool {
    for x in t.elements() {
        let d = t.element_order(x);
        let mut powers = Vec::with_capacity(d);
        let mut acc = 0;
        for _ in 0..d {
            powers.push(acc);
            acc = t.mul(acc, x);
        }
        for i in 0..d {
            for j in 0..d {
                if t.mul(powers[i], powers[j]) != powers[(i + j) % d] {
                    return false;
                }
            }
        }
    }
    true
}

/// Smallest multiplicatively closed subset containing 0 and the generators.
/// Finite closure under a loop product is automatically closed under both
/// divisions, so the result is a subloop.
pub fn mul_closure(t: &LoopTable, gens: &[Element]) -> Vec<Element> {
    let mut member = vec![false; t.order()];
    member[0] = true;
    let mut queue: Vec<Element> = vec![0];
    for &g in gens {
        if !member[g] {
            member[g] = true;
            queue.push(g);
        }
    }
    let mut i = 0;
    while i < queue.len() {
        let a = queue[i];
        i += 1;
        for j in 0..queue.len() {
            let b = queue[j];
            for p in [t.mul(a, b), t.mul(b, a)] {
                if !member[p] {
                    member[p] = true;
                    queue.push(p);
                }
            }
        }
    }
    t.elements().filter(|&v| member[v]).collect()
}

/// Reinterprets a multiplicatively closed subset containing 0 as a loop in
/// its own right, relabeling elements by their position in the sorted list.
/// Returns None if the subset is not closed or lacks 0.
pub fn subtable(t: &LoopTable, elems: &[Element]) -> Option<LoopTable> {
    if elems.first() != Some(&0) {
        return None;
    }
    let k = elems.len();
    let mut cells = Vec::with_capacity(k * k);
    for &a in elems {
        for &b in elems {
            let p = t.mul(a, b);
            match elems.binary_search(&p) {
                Ok(idx) => cells.push(idx),
                Err(_) => return None,
            }
        }
    }
    LoopTable::from_cells(k, cells).ok()
}
