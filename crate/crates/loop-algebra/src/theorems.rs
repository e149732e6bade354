//! Encoded claims about central loops, evaluated over loop catalogs.
//!
//! Each claim pairs a hypothesis with a conclusion, both decidable on a
//! single Cayley table. `proposition_suite` evaluates all of them across
//! a catalog and reports, per claim, how many loops satisfied the
//! hypothesis, how many were vacuous, and the first counterexample in
//! canonical-key order if any conclusion failed. Encodings that required
//! an interpretive choice carry a note stating the reading.

use rayon::prelude::*;

use crate::enumerate::{self, canonical_key, generate, GenerationSpec};
use crate::error::Result;
use crate::identity::{lookup, Identity, Verdict};
use crate::morphisms::{
    classify_map, gamma_map, is_a_loop, is_autotopism, principal_isotope, t_map,
};
use crate::perm::{AutotopismTriple, Perm};
use crate::structure::{self, StructureReport, UniqueKind};
use crate::table::{Element, LoopTable};

fn named(name: &str) -> Identity {
    lookup(name).expect("registry name")
}

fn fmt_assign(assign: &[(char, Element)]) -> String {
    assign
        .iter()
        .map(|(v, e)| format!("{v}={e}"))
        .collect::<Vec<_>>()
        .join(",")
}

fn identity_witness(name: &str, t: &LoopTable) -> String {
    match named(name).check(t) {
        Verdict::Holds => "holds".into(),
        Verdict::Fails(assign) => fmt_assign(&assign),
        Verdict::Inapplicable { element } => format!("one-sided-inverse-at={element}"),
    }
}

fn key_hex(key: &[u8]) -> String {
    key.iter().map(|b| format!("{b:02x}")).collect()
}

fn in_set(set: &[Element], s: Element) -> bool {
    set.binary_search(&s).is_ok()
}

/// True when the triple (I, L_z², J L_z² J) for `left`, respectively
/// (R_z², I, J R_z² J), is an autotopism for every z. False when the
/// loop lacks two-sided inverses, since J is then undefined.
fn j_family_holds(t: &LoopTable, left: bool) -> bool {
    let Ok(j) = t.inversion_perm() else {
        return false;
    };
    let i = Perm::identity(t.order());
    t.elements().all(|z| {
        let tz = if left { t.left_translation(z) } else { t.right_translation(z) };
        let sq = tz.then(&tz);
        let conj = j.then(&sq).then(&j);
        let trip = if left {
            AutotopismTriple::new(i.clone(), sq, conj)
        } else {
            AutotopismTriple::new(sq, i.clone(), conj)
        }
        .expect("translations share the loop's degree");
        is_autotopism(t, &trip).expect("triple degree matches")
    })
}

fn t_map_injective(t: &LoopTable) -> bool {
    let mut images: Vec<Vec<Element>> =
        t.elements().map(|x| t_map(t, x).image().to_vec()).collect();
    images.sort_unstable();
    images.windows(2).all(|w| w[0] != w[1])
}

fn squaring_image(t: &LoopTable) -> Vec<Element> {
    t.elements().map(|x| t.mul(x, x)).collect()
}

/// Everything the encoded claims ask of one loop, computed once.
struct Facts {
    t: LoopTable,
    structure: StructureReport,
    lc: bool,
    rc: bool,
    c: bool,
    lalt: bool,
    ralt: bool,
    flexible: bool,
    commutative: bool,
    associative: bool,
    lip: bool,
    rip: bool,
    wip: bool,
    cip: bool,
    aip: bool,
    aaip: bool,
    steiner: bool,
    two_sided: bool,
    nuclear_square: bool,
    centrum_square: bool,
    central_square: bool,
    power_associative: bool,
    a_loop: bool,
    exponent: usize,
    every_element_square: bool,
    unique_square: Option<Element>,
    unique_commutator: Option<Element>,
    unique_associator: Option<Element>,
    unique_comm_assoc: Option<Element>,
    family_l: bool,
    family_r: bool,
}

impl Facts {
    fn new(t: &LoopTable) -> Facts {
        let structure = structure::report(t);
        let holds = |name: &str| named(name).holds_on(t);
        let squares = t.squares();
        Facts {
            lc: holds("lc"),
            rc: holds("rc"),
            c: holds("c"),
            lalt: holds("lalt"),
            ralt: holds("ralt"),
            flexible: holds("flexible"),
            commutative: holds("commutative"),
            associative: holds("associative"),
            lip: holds("lip"),
            rip: holds("rip"),
            wip: holds("wip"),
            cip: holds("cip"),
            aip: holds("aip"),
            aaip: holds("aaip"),
            steiner: holds("steiner.sq") && holds("steiner.cancel") && holds("commutative"),
            two_sided: t.has_two_sided_inverses(),
            nuclear_square: squares.iter().all(|&s| in_set(&structure.nucleus, s)),
            centrum_square: squares.iter().all(|&s| in_set(&structure.centrum, s)),
            central_square: squares.iter().all(|&s| in_set(&structure.center, s)),
            power_associative: structure.power_associative,
            a_loop: is_a_loop(t),
            exponent: t.exponent(),
            every_element_square: squares.len() == t.order(),
            unique_square: structure::unique_nonidentity(t, UniqueKind::Square),
            unique_commutator: structure::unique_nonidentity(t, UniqueKind::Commutator),
            unique_associator: structure::unique_nonidentity(t, UniqueKind::Associator),
            unique_comm_assoc: structure::unique_nonidentity(
                t,
                UniqueKind::CommutatorAssociator,
            ),
            family_l: j_family_holds(t, true),
            family_r: j_family_holds(t, false),
            structure,
            t: t.clone(),
        }
    }
}

/// Value attached to one named property in a `PropertyReport`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PropertyVerdict {
    Bool(bool),
    /// The property mentions two-sided inverses the loop does not have.
    Inapplicable,
    Count(usize),
    Element(Option<Element>),
}

impl PropertyVerdict {
    /// Boolean reading used for exit codes: `Inapplicable` counts as
    /// false, numeric entries have no boolean reading.
    pub fn as_bool(&self) -> Option<bool> {
        match self {
            PropertyVerdict::Bool(b) => Some(*b),
            PropertyVerdict::Inapplicable => Some(false),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyEntry {
    pub name: &'static str,
    pub verdict: PropertyVerdict,
    pub witness: Option<String>,
}

/// Every queried property of one loop, each name present exactly once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyReport {
    pub entries: Vec<PropertyEntry>,
}

impl PropertyReport {
    pub fn get(&self, name: &str) -> Option<&PropertyEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn is_true(&self, name: &str) -> bool {
        self.get(name).and_then(|e| e.verdict.as_bool()) == Some(true)
    }
}

pub fn property_report(t: &LoopTable) -> PropertyReport {
    facts_report(&Facts::new(t))
}

fn facts_report(f: &Facts) -> PropertyReport {
    let t = &f.t;
    let ident = |label: &'static str, name: &str| -> PropertyEntry {
        match named(name).check(t) {
            Verdict::Holds => PropertyEntry { name: label, verdict: PropertyVerdict::Bool(true), witness: None },
            Verdict::Fails(assign) => PropertyEntry {
                name: label,
                verdict: PropertyVerdict::Bool(false),
                witness: Some(fmt_assign(&assign)),
            },
            Verdict::Inapplicable { element } => PropertyEntry {
                name: label,
                verdict: PropertyVerdict::Inapplicable,
                witness: Some(format!("one-sided-inverse-at={element}")),
            },
        }
    };
    let both = |label: &'static str, first: &str, second: &str| -> PropertyEntry {
        let a = ident(label, first);
        if a.verdict != PropertyVerdict::Bool(true) {
            return PropertyEntry { witness: a.witness, ..a };
        }
        ident(label, second)
    };
    let flag = |label: &'static str, value: bool, witness: Option<String>| PropertyEntry {
        name: label,
        verdict: PropertyVerdict::Bool(value),
        witness: if value { None } else { witness },
    };
    let square_flag = |label: &'static str, holds: bool, set: &[Element]| {
        let bad = t.squares().into_iter().find(|&s| !in_set(set, s));
        flag(label, holds, bad.map(|s| format!("square={s}")))
    };

    let two_sided_witness = t
        .elements()
        .find(|&x| {
            let (l, r) = t.inverses(x);
            l != r
        })
        .map(|x| format!("x={x}"));
    let non_square = t.elements().find(|x| !in_set(&t.squares(), *x));
    let a_loop_witness = a_loop_witness(t);
    let entries = vec![
        ident("lc", "lc"),
        ident("rc", "rc"),
        ident("c", "c"),
        ident("lalt", "lalt"),
        ident("ralt", "ralt"),
        both("alternative", "lalt", "ralt"),
        ident("flexible", "flexible"),
        ident("commutative", "commutative"),
        ident("associative", "associative"),
        ident("lip", "lip"),
        ident("rip", "rip"),
        both("ip", "lip", "rip"),
        ident("wip", "wip"),
        ident("cip", "cip"),
        ident("aip", "aip"),
        ident("aaip", "aaip"),
        steiner_entry(t),
        flag("two_sided_inverses", f.two_sided, two_sided_witness),
        square_flag("nuclear_square", f.nuclear_square, &f.structure.nucleus),
        square_flag("centrum_square", f.centrum_square, &f.structure.centrum),
        square_flag("central_square", f.central_square, &f.structure.center),
        flag("power_associative", f.power_associative, power_witness(t)),
        flag("a_loop", f.a_loop, a_loop_witness),
        PropertyEntry { name: "exponent", verdict: PropertyVerdict::Count(f.exponent), witness: None },
        PropertyEntry {
            name: "unique_square",
            verdict: PropertyVerdict::Element(f.unique_square),
            witness: None,
        },
        PropertyEntry {
            name: "unique_commutator",
            verdict: PropertyVerdict::Element(f.unique_commutator),
            witness: None,
        },
        PropertyEntry {
            name: "unique_associator",
            verdict: PropertyVerdict::Element(f.unique_associator),
            witness: None,
        },
        PropertyEntry {
            name: "unique_commutator_associator",
            verdict: PropertyVerdict::Element(f.unique_comm_assoc),
            witness: None,
        },
        flag(
            "every_element_square",
            f.every_element_square,
            non_square.map(|x| format!("x={x}")),
        ),
    ];
    PropertyReport { entries }
}

fn steiner_entry(t: &LoopTable) -> PropertyEntry {
    for name in ["steiner.sq", "steiner.cancel", "commutative"] {
        if let Verdict::Fails(assign) = named(name).check(t) {
            return PropertyEntry {
                name: "steiner",
                verdict: PropertyVerdict::Bool(false),
                witness: Some(format!("{name}:{}", fmt_assign(&assign))),
            };
        }
    }
    PropertyEntry { name: "steiner", verdict: PropertyVerdict::Bool(true), witness: None }
}

fn power_witness(t: &LoopTable) -> Option<String> {
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
                    return Some(format!("x={x},i={i},j={j}"));
                }
            }
        }
    }
    None
}

fn a_loop_witness(t: &LoopTable) -> Option<String> {
    for x in t.elements() {
        if !crate::morphisms::is_automorphism(t, &t_map(t, x)) {
            return Some(format!("T(x={x})"));
        }
    }
    for x in t.elements() {
        for y in t.elements() {
            if !crate::morphisms::is_automorphism(t, &crate::morphisms::r_map(t, x, y)) {
                return Some(format!("R(x={x},y={y})"));
            }
            if !crate::morphisms::is_automorphism(t, &crate::morphisms::l_map(t, x, y)) {
                return Some(format!("L(x={x},y={y})"));
            }
        }
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OsbornMethod {
    /// The four equivalent defining conditions built from E_x, A_x, B_x.
    Definitional,
    /// WIP in every principal isotope.
    Universal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OsbornOutcome {
    pub holds: bool,
    /// Failing x (definitional) or failing principal-isotope pair (universal).
    pub witness: Option<String>,
}

pub fn osborn_check(t: &LoopTable, method: OsbornMethod) -> OsbornOutcome {
    let fail = |w: String| OsbornOutcome { holds: false, witness: Some(w) };
    match method {
        OsbornMethod::Definitional => {
            for x in t.elements() {
                let lx = t.left_translation(x);
                let rx = t.right_translation(x);
                let e = rx.then(&lx).then(&rx.inverse()).then(&lx.inverse());
                let e_inv = e.inverse();
                for y in t.elements() {
                    for z in t.elements() {
                        let lhs1 = t.mul(x, t.mul(t.mul(y, z), x));
                        let rhs1 = t.mul(t.mul(x, e.apply(y)), t.mul(z, x));
                        if lhs1 != rhs1 {
                            return fail(format!("x={x},y={y},z={z},form=1"));
                        }
                        let lhs2 = t.mul(t.mul(x, t.mul(y, z)), x);
                        let rhs2 = t.mul(t.mul(x, y), t.mul(e_inv.apply(z), x));
                        if lhs2 != rhs2 {
                            return fail(format!("x={x},y={y},z={z},form=2"));
                        }
                    }
                }
                let a_x = e.then(&lx);
                let b_x = e_inv.then(&rx);
                let first = AutotopismTriple::new(a_x, rx.clone(), rx.then(&lx)).unwrap();
                if !is_autotopism(t, &first).unwrap() {
                    return fail(format!("x={x},triple=(A_x,R_x,R_xL_x)"));
                }
                let second = AutotopismTriple::new(lx.clone(), b_x, lx.then(&rx)).unwrap();
                if !is_autotopism(t, &second).unwrap() {
                    return fail(format!("x={x},triple=(L_x,B_x,L_xR_x)"));
                }
            }
            OsbornOutcome { holds: true, witness: None }
        }
        OsbornMethod::Universal => {
            let wip = named("wip");
            for a in t.elements() {
                for b in t.elements() {
                    let (h, _) = principal_isotope(t, a, b);
                    if !wip.holds_on(&h) {
                        return fail(format!("a={a},b={b}"));
                    }
                }
            }
            OsbornOutcome { holds: true, witness: None }
        }
    }
}

/// Outcome of one encoded claim on one loop.
enum PropStatus {
    Vacuous,
    Holds,
    Fails(String),
}

use PropStatus::{Fails, Holds, Vacuous};

macro_rules! require {
    ($cond:expr, $($w:tt)*) => {
        if !$cond {
            return Fails(format!($($w)*));
        }
    };
}

fn divides(d: usize, n: usize) -> bool {
    n.is_multiple_of(d)
}

fn p01(f: &Facts) -> PropStatus {
    if !(f.c && (f.family_l || f.family_r)) {
        return Vacuous;
    }
    require!(divides(f.exponent, 4), "exponent={}", f.exponent);
    Holds
}

fn p02(f: &Facts) -> PropStatus {
    if !(f.c && f.family_l && f.family_r) {
        return Vacuous;
    }
    require!(f.central_square, "not-central-square");
    require!(divides(f.exponent, 4), "exponent={}", f.exponent);
    Holds
}

fn p03(f: &Facts) -> PropStatus {
    if !(f.c && f.family_l && f.family_r) {
        return Vacuous;
    }
    require!(f.flexible, "flexible:{}", identity_witness("flexible", &f.t));
    let square_comm = Identity::parse("(x*y)*(x*y) = (y*x)*(y*x)").unwrap();
    if let Verdict::Fails(assign) = square_comm.check(&f.t) {
        return Fails(format!("square-commutator:{}", fmt_assign(&assign)));
    }
    let cubing: Vec<Element> = f.t.elements().map(|x| f.t.power(x, 3)).collect();
    let cls = classify_map(&f.t, &cubing).unwrap();
    require!(cls.is_bijection, "cubing-not-bijective");
    require!(cls.is_anti_automorphism, "cubing-not-anti-automorphism");
    Holds
}

fn p04(f: &Facts) -> PropStatus {
    if !(f.c && f.central_square && divides(f.exponent, 4)) {
        return Vacuous;
    }
    require!(f.associative, "associative:{}", identity_witness("associative", &f.t));
    Holds
}

fn p05(f: &Facts) -> PropStatus {
    let unique_sq = f.unique_square.is_some();
    let central_exp4 = f.central_square && divides(f.exponent, 4);
    if !(f.c && (central_exp4 || unique_sq || (f.family_l && f.family_r))) {
        return Vacuous;
    }
    let c = named("c");
    for a in f.t.elements() {
        for b in f.t.elements() {
            let (h, _) = principal_isotope(&f.t, a, b);
            require!(c.holds_on(&h), "isotope(a={a},b={b}):not-c");
            require!(is_a_loop(&h), "isotope(a={a},b={b}):not-a-loop");
        }
    }
    Holds
}

fn p06(f: &Facts) -> PropStatus {
    if !f.c {
        return Vacuous;
    }
    let gamma_trivial = f.t.elements().all(|x| gamma_map(&f.t, x).is_identity());
    require!(
        gamma_trivial == f.central_square,
        "gamma-trivial={gamma_trivial},central-square={}",
        f.central_square
    );
    Holds
}

fn p07(f: &Facts) -> PropStatus {
    if !(f.c && t_map_injective(&f.t)) {
        return Vacuous;
    }
    let exp2 = divides(f.exponent, 2);
    require!(
        exp2 == f.central_square && f.central_square == f.steiner,
        "exponent-2={exp2},central-square={},steiner={}",
        f.central_square,
        f.steiner
    );
    Holds
}

fn p08(f: &Facts) -> PropStatus {
    if !(f.c && f.every_element_square) {
        return Vacuous;
    }
    require!(f.flexible, "flexible:{}", identity_witness("flexible", &f.t));
    Holds
}

fn p09(f: &Facts) -> PropStatus {
    let t_order_2 = || {
        f.t.elements().all(|x| {
            let m = t_map(&f.t, x);
            m.then(&m).is_identity()
        })
    };
    if !(f.c && f.family_l && f.family_r && t_order_2()) {
        return Vacuous;
    }
    require!(f.flexible, "flexible:{}", identity_witness("flexible", &f.t));
    Holds
}

fn p10(f: &Facts) -> PropStatus {
    let t = &f.t;
    let mut applicable = false;
    if f.c {
        if let Some(s) = f.unique_commutator {
            applicable = true;
            require!(t.mul(s, s) == 0, "commutator={s},square={}", t.mul(s, s));
            require!(in_set(&f.structure.centrum, s), "commutator={s},not-in-centrum");
            let closure = structure::mul_closure(t, &t.squares());
            match closure.binary_search(&s) {
                Err(_) => return Fails(format!("commutator={s},outside-square-closure")),
                Ok(pos) => {
                    let sub = structure::subtable(t, &closure)
                        .expect("multiplicative closures are subloops");
                    require!(
                        in_set(&structure::center(&sub), pos),
                        "commutator={s},not-central-in-square-closure"
                    );
                }
            }
        }
        if let Some(s) = f.unique_associator {
            applicable = true;
            require!(in_set(&f.structure.nucleus, s), "associator={s},not-in-nucleus");
        }
        if let Some(s) = f.unique_comm_assoc {
            applicable = true;
            require!(t.mul(s, s) == 0, "commutator-associator={s},square={}", t.mul(s, s));
            require!(
                in_set(&f.structure.center, s),
                "commutator-associator={s},not-in-center"
            );
        }
    }
    if f.lc || f.rc {
        if let Some(s) = f.unique_square {
            applicable = true;
            require!(t.mul(s, s) == 0, "square={s},square={}", t.mul(s, s));
            for x in t.elements() {
                let d = t.element_order(x);
                require!(divides(d, 4), "x={x},order={d}");
            }
            if f.lc {
                require!(in_set(&f.structure.n_lambda, s), "square={s},not-in-left-nucleus");
                require!(in_set(&f.structure.n_mu, s), "square={s},not-in-middle-nucleus");
            }
            if f.rc {
                require!(in_set(&f.structure.n_rho, s), "square={s},not-in-right-nucleus");
                require!(in_set(&f.structure.n_mu, s), "square={s},not-in-middle-nucleus");
            }
        }
    }
    if applicable {
        Holds
    } else {
        Vacuous
    }
}

fn p11(f: &Facts) -> PropStatus {
    let (Some(s), true) = (f.unique_square, f.lc || f.rc) else {
        return Vacuous;
    };
    let t = &f.t;
    for x in t.elements() {
        let (l, r) = t.inverses(x);
        require!(l == r, "x={x},one-sided-inverse");
        let expected = if t.mul(x, x) == s { t.rdiv(x, s) } else { x };
        require!(l == expected, "x={x},inverse={l},expected={expected}");
    }
    Holds
}

fn p12(f: &Facts) -> PropStatus {
    let lc_branch = f.lc && f.rip;
    let rc_branch = f.rc && f.lip;
    let (Some(s), true) = (f.unique_square, lc_branch || rc_branch || f.c) else {
        return Vacuous;
    };
    let t = &f.t;
    require!(in_set(&f.structure.center, s), "square={s},not-central");
    for x in t.elements() {
        let (l, r) = t.inverses(x);
        require!(l == r, "x={x},one-sided-inverse");
        let squared = t.mul(x, x) == s;
        if lc_branch || f.c {
            let expected = if squared { t.mul(x, s) } else { x };
            require!(l == expected, "x={x},inverse={l},expected-xs={expected}");
        }
        if rc_branch || f.c {
            let expected = if squared { t.mul(s, x) } else { x };
            require!(l == expected, "x={x},inverse={l},expected-sx={expected}");
        }
    }
    let cls = classify_map(t, &squaring_image(t)).unwrap();
    require!(!cls.is_automorphism, "squaring-is-automorphism");
    require!(!cls.is_anti_automorphism, "squaring-is-anti-automorphism");
    require!(f.associative || f.steiner, "neither-group-nor-steiner");
    if f.c {
        if !f.commutative {
            require!(
                f.unique_commutator == Some(s),
                "unique-commutator={:?},square={s}",
                f.unique_commutator
            );
        }
        require!(f.associative, "associative:{}", identity_witness("associative", t));
    }
    Holds
}

fn p13(f: &Facts) -> PropStatus {
    let Some(s) = f.unique_square else {
        return Vacuous;
    };
    let t = &f.t;
    for &q in &f.structure.centrum {
        let mut squares: Vec<Element> = t.elements().map(|x| t.ldiv(q, t.mul(x, x))).collect();
        squares.sort_unstable();
        squares.dedup();
        let mut expected = vec![t.ldiv(q, 0), t.ldiv(q, s)];
        expected.sort_unstable();
        require!(
            squares == expected,
            "q={q},image-squares={squares:?},expected={expected:?}"
        );
        require!(in_set(&squares, q), "q={q},image-identity-not-a-square");
    }
    Holds
}

fn p14(f: &Facts) -> PropStatus {
    if !((f.lc || f.rc) && divides(f.exponent, 3)) {
        return Vacuous;
    }
    require!(
        f.centrum_square == f.cip,
        "centrum-square={},cip={}",
        f.centrum_square,
        f.cip
    );
    Holds
}

fn p15(f: &Facts) -> PropStatus {
    let one_sided = (f.lc || f.rc) && divides(f.exponent, 3) && f.centrum_square;
    let central = f.c && divides(f.exponent, 3) && f.central_square;
    if !(one_sided || central) {
        return Vacuous;
    }
    if one_sided {
        require!(f.aip, "aip:{}", identity_witness("aip", &f.t));
        require!(f.aaip, "aaip:{}", identity_witness("aaip", &f.t));
        require!(f.wip, "wip:{}", identity_witness("wip", &f.t));
        require!(
            f.structure.n_lambda == f.structure.n_rho && f.structure.n_rho == f.structure.n_mu,
            "nuclei-differ"
        );
        require!(
            f.structure.nucleus.iter().all(|&n| in_set(&f.structure.center, n)),
            "nucleus-not-central"
        );
    }
    if central {
        require!(f.wip, "wip:{}", identity_witness("wip", &f.t));
        require!(f.cip, "cip:{}", identity_witness("cip", &f.t));
    }
    require!(f.commutative, "commutative:{}", identity_witness("commutative", &f.t));
    require!(f.associative, "associative:{}", identity_witness("associative", &f.t));
    Holds
}

fn p16(f: &Facts) -> PropStatus {
    if !((f.lc || f.rc || f.c) && divides(f.exponent, 3)) {
        return Vacuous;
    }
    require!(f.associative, "associative:{}", identity_witness("associative", &f.t));
    Holds
}

fn p17(f: &Facts) -> PropStatus {
    if !(f.lc || f.rc) {
        return Vacuous;
    }
    if f.lc {
        require!(f.rip == f.wip, "rip={},wip={}", f.rip, f.wip);
    }
    if f.rc {
        require!(f.lip == f.wip, "lip={},wip={}", f.lip, f.wip);
    }
    Holds
}

fn p18(f: &Facts) -> PropStatus {
    let lc_branch = f.lc && f.rip;
    let rc_branch = f.rc && f.lip;
    if !(lc_branch || rc_branch) {
        return Vacuous;
    }
    require!(
        f.structure.n_lambda == f.structure.n_rho && f.structure.n_rho == f.structure.n_mu,
        "nuclei-differ"
    );
    let t = &f.t;
    let i = Perm::identity(t.order());
    for x in t.elements() {
        let xx = t.mul(x, x);
        let lx = t.left_translation(x);
        let rx = t.right_translation(x);
        let lx2 = lx.then(&lx);
        let rx2 = rx.then(&rx);
        let l_xx = t.left_translation(xx);
        let r_xx = t.right_translation(xx);
        let mut triples: Vec<(&str, AutotopismTriple)> = Vec::new();
        if lc_branch {
            triples.push((
                "(I,R_{x^2},R_{x^2})",
                AutotopismTriple::new(i.clone(), r_xx.clone(), r_xx.clone()).unwrap(),
            ));
            triples.push((
                "(L_x^2,R_{x^2},R_{x^2}L_x^2)",
                AutotopismTriple::new(lx2.clone(), r_xx.clone(), r_xx.then(&lx2)).unwrap(),
            ));
        }
        if rc_branch {
            triples.push((
                "(L_{x^2},I,L_{x^2})",
                AutotopismTriple::new(l_xx.clone(), i.clone(), l_xx.clone()).unwrap(),
            ));
            triples.push((
                "(L_{x^2},R_x^2,L_{x^2}R_x^2)",
                AutotopismTriple::new(l_xx.clone(), rx2.clone(), l_xx.then(&rx2)).unwrap(),
            ));
        }
        for (label, trip) in triples {
            require!(is_autotopism(t, &trip).unwrap(), "x={x},triple={label}");
        }
    }
    Holds
}

fn p19(f: &Facts) -> PropStatus {
    if !(f.lc || f.rc) {
        return Vacuous;
    }
    if f.lc {
        let v = [f.rip, f.ralt, f.rc, f.aaip, f.wip, f.c];
        require!(
            v.iter().all(|&b| b == v[0]),
            "rip={},ralt={},rc={},aaip={},wip={},c={}",
            v[0],
            v[1],
            v[2],
            v[3],
            v[4],
            v[5]
        );
    }
    if f.rc {
        let v = [f.lip, f.lalt, f.lc, f.aaip, f.wip, f.c];
        require!(
            v.iter().all(|&b| b == v[0]),
            "lip={},lalt={},lc={},aaip={},wip={},c={}",
            v[0],
            v[1],
            v[2],
            v[3],
            v[4],
            v[5]
        );
    }
    Holds
}

fn p20(f: &Facts) -> PropStatus {
    let hyp = (f.rc && f.lip) || (f.lc && f.rip) || f.c;
    if !(hyp && f.every_element_square) {
        return Vacuous;
    }
    let osborn = osborn_check(&f.t, OsbornMethod::Definitional);
    require!(osborn.holds, "osborn:{}", osborn.witness.unwrap_or_default());
    require!(f.associative, "associative:{}", identity_witness("associative", &f.t));
    Holds
}

type PropFn = fn(&Facts) -> PropStatus;

const PROPS: &[(&str, PropFn, Option<&str>)] = &[
    ("P01", p01, Some("hypothesis takes either translation family alone")),
    ("P02", p02, None),
    ("P03", p03, None),
    ("P04", p04, None),
    ("P05", p05, None),
    ("P06", p06, None),
    ("P07", p07, None),
    ("P08", p08, None),
    (
        "P09",
        p09,
        Some("middle-inner-mapping order is read as dividing 2"),
    ),
    (
        "P10",
        p10,
        Some("s in Z(L^2) is read as: s central in the subloop generated by the squares"),
    ),
    (
        "P11",
        p11,
        Some("inverse formula checked per element: x^2=s forces xJ=x/s, x^2=e forces xJ=x"),
    ),
    (
        "P12",
        p12,
        Some(
            "square inequalities read as: squaring is neither an automorphism nor an \
             anti-automorphism; inverse formula checked per element",
        ),
    ),
    (
        "P13",
        p13,
        Some("image squares compared as the set {eC, sC}; the image identity need not be eC"),
    ),
    ("P14", p14, None),
    ("P15", p15, None),
    ("P16", p16, None),
    ("P17", p17, None),
    ("P18", p18, None),
    ("P19", p19, None),
    ("P20", p20, Some("read as: squaring onto implies Osborn")),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropFailure {
    /// Canonical key of the counterexample, as hex digits.
    pub loop_key: String,
    pub witness: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropositionReport {
    pub id: &'static str,
    /// Catalog loops satisfying the hypothesis.
    pub tested: usize,
    /// Catalog loops the claim says nothing about.
    pub vacuous: usize,
    /// First counterexample in canonical-key order, if any conclusion failed.
    pub failure: Option<PropFailure>,
    pub note: Option<&'static str>,
}

impl PropositionReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }

    pub fn render_line(&self) -> String {
        match &self.failure {
            None => format!("{} PASS tested={} vacuous={}", self.id, self.tested, self.vacuous),
            Some(f) => format!("{} FAIL loop={} witness={}", self.id, f.loop_key, f.witness),
        }
    }
}

/// Evaluates every encoded claim over the catalog. Facts are computed in
/// parallel; aggregation is deterministic, ordered by canonical key and
/// then claim id.
pub fn proposition_suite(catalog: &[LoopTable]) -> Vec<PropositionReport> {
    let mut facts: Vec<(Vec<u8>, Facts)> =
        catalog.par_iter().map(|t| (canonical_key(t), Facts::new(t))).collect();
    facts.sort_by(|(a, _), (b, _)| (a.len(), a).cmp(&(b.len(), b)));
    PROPS
        .iter()
        .map(|&(id, eval, note)| {
            let mut tested = 0;
            let mut vacuous = 0;
            let mut failure = None;
            for (key, f) in &facts {
                match eval(f) {
                    Vacuous => vacuous += 1,
                    Holds => tested += 1,
                    Fails(witness) => {
                        tested += 1;
                        if failure.is_none() {
                            failure = Some(PropFailure { loop_key: key_hex(key), witness });
                        }
                    }
                }
            }
            PropositionReport { id, tested, vacuous, failure, note }
        })
        .collect()
}

/// All loops up to isomorphism with orders `1..=max_order` satisfying the
/// given identities, in deterministic generation order.
pub fn constrained_catalog(
    max_order: usize,
    identities: &[Identity],
) -> Result<Vec<LoopTable>> {
    let mut out = Vec::new();
    for order in 1..=max_order {
        let mut spec = GenerationSpec::new(order);
        spec.identities = identities.to_vec();
        spec.up_to_isomorphism = true;
        generate(&spec, max_order, &mut |t| {
            out.push(t.clone());
            true
        })?;
    }
    Ok(out)
}

pub fn catalog_up_to(max_order: usize) -> Result<Vec<LoopTable>> {
    constrained_catalog(max_order, &[])
}

/// The suite's reference catalog: every loop of order at most `max_order`
/// up to isomorphism, plus the two named Steiner loops.
pub fn verification_catalog(max_order: usize) -> Result<Vec<LoopTable>> {
    let mut out = catalog_up_to(max_order)?;
    out.push(enumerate::builtin("steiner8")?);
    out.push(enumerate::builtin("steiner10")?);
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HuntReport {
    pub found: Option<LoopTable>,
    /// (order, candidate count) per fully exhausted order.
    pub searched: Vec<(usize, usize)>,
}

/// Searches orders `1..=max_order` for a loop satisfying the seeded
/// identities and the target predicate. Candidates are generated up to
/// isomorphism in deterministic order; the first hit is returned. Orders
/// above the budget abort with `BudgetExceeded`.
pub fn counterexample_search(
    max_order: usize,
    budget: usize,
    identities: &[Identity],
    target: &mut dyn FnMut(&LoopTable) -> bool,
) -> Result<HuntReport> {
    let mut searched = Vec::new();
    for order in 1..=max_order {
        let mut spec = GenerationSpec::new(order);
        spec.identities = identities.to_vec();
        spec.up_to_isomorphism = true;
        let mut found = None;
        let mut count = 0usize;
        generate(&spec, budget, &mut |t| {
            count += 1;
            if target(t) {
                found = Some(t.clone());
                false
            } else {
                true
            }
        })?;
        if found.is_some() {
            return Ok(HuntReport { found, searched });
        }
        searched.push((order, count));
    }
    Ok(HuntReport { found: None, searched })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::builtin;
    use crate::morphisms::isotope;

    fn z4() -> LoopTable {
        builtin("cyclic:4").unwrap()
    }

    fn klein() -> LoopTable {
        builtin("klein").unwrap()
    }

    fn sym3() -> LoopTable {
        builtin("sym3").unwrap()
    }

    #[test]
    fn property_report_on_named_loops() {
        let r = property_report(&z4());
        assert!(r.is_true("c") && r.is_true("wip") && r.is_true("cip"));
        assert!(!r.is_true("steiner") && !r.is_true("every_element_square"));
        assert_eq!(r.get("exponent").unwrap().verdict, PropertyVerdict::Count(4));
        assert_eq!(
            r.get("unique_square").unwrap().verdict,
            PropertyVerdict::Element(Some(2))
        );

        let r = property_report(&builtin("steiner8").unwrap());
        assert!(r.is_true("steiner") && r.is_true("c") && r.is_true("cip"));
        assert!(r.is_true("associative"));
        assert_eq!(r.get("exponent").unwrap().verdict, PropertyVerdict::Count(2));

        let r = property_report(&sym3());
        assert!(r.is_true("associative") && !r.is_true("cip"));
        assert!(r.get("cip").unwrap().witness.is_some());

        let mut names: Vec<&str> = r.entries.iter().map(|e| e.name).collect();
        let total = names.len();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), total);
    }

    #[test]
    fn property_report_is_reproducible() {
        let t = builtin("steiner10").unwrap();
        assert_eq!(property_report(&t), property_report(&t));
    }

    #[test]
    fn inapplicable_inverse_properties() {
        let one_sided = LoopTable::from_rows(vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 3, 4, 1, 0],
            vec![3, 4, 0, 2, 1],
            vec![4, 2, 1, 0, 3],
        ])
        .unwrap();
        let r = property_report(&one_sided);
        assert_eq!(r.get("aaip").unwrap().verdict, PropertyVerdict::Inapplicable);
        assert!(!r.is_true("aaip"));
        assert!(!r.is_true("two_sided_inverses"));
    }

    #[test]
    fn osborn_methods_agree_on_small_orders() {
        for t in catalog_up_to(4).unwrap() {
            let d = osborn_check(&t, OsbornMethod::Definitional);
            let u = osborn_check(&t, OsbornMethod::Universal);
            assert_eq!(d.holds, u.holds, "order {}", t.order());
        }
        for name in ["cyclic:4", "sym3", "klein", "steiner10"] {
            let t = builtin(name).unwrap();
            assert!(osborn_check(&t, OsbornMethod::Definitional).holds == osborn_check(&t, OsbornMethod::Universal).holds);
        }
        assert!(osborn_check(&sym3(), OsbornMethod::Definitional).holds);
        assert!(osborn_check(&sym3(), OsbornMethod::Universal).holds);
    }

    #[test]
    fn wip_failure_is_its_own_witness() {
        let mut spec = GenerationSpec::new(5);
        spec.up_to_isomorphism = true;
        let wip = named("wip");
        let t = generate_first(&spec, |t| !wip.holds_on(t));
        let out = osborn_check(&t, OsbornMethod::Universal);
        assert!(!out.holds);
        assert_eq!(out.witness.as_deref(), Some("a=0,b=0"));
    }

    fn generate_first(spec: &GenerationSpec, mut pred: impl FnMut(&LoopTable) -> bool) -> LoopTable {
        let mut hit = None;
        generate(spec, spec.order, &mut |t| {
            if pred(t) {
                hit = Some(t.clone());
                false
            } else {
                true
            }
        })
        .unwrap();
        hit.expect("predicate occurs within the order")
    }

    #[test]
    fn suite_passes_on_z4() {
        let reports = proposition_suite(&[z4()]);
        assert_eq!(reports.len(), 20);
        for r in &reports {
            assert!(r.passed(), "{}", r.render_line());
        }
        let p04 = &reports[3];
        assert_eq!((p04.id, p04.tested, p04.vacuous), ("P04", 1, 0));
        let p13 = &reports[12];
        assert_eq!((p13.id, p13.tested), ("P13", 1));
    }

    #[test]
    fn suite_is_consistent_on_steiner8() {
        let s8 = builtin("steiner8").unwrap();
        let reports = proposition_suite(std::slice::from_ref(&s8));
        for r in &reports {
            assert!(r.passed(), "{}", r.render_line());
        }
        let p07 = &reports[6];
        assert_eq!((p07.tested, p07.vacuous), (0, 1));
        let facts = property_report(&s8);
        assert_eq!(facts.get("exponent").unwrap().verdict, PropertyVerdict::Count(2));
        assert!(facts.is_true("central_square") && facts.is_true("steiner"));
    }

    #[test]
    fn report_lines_render_both_shapes() {
        let pass = PropositionReport { id: "P01", tested: 3, vacuous: 2, failure: None, note: None };
        assert_eq!(pass.render_line(), "P01 PASS tested=3 vacuous=2");
        let fail = PropositionReport {
            id: "P04",
            tested: 1,
            vacuous: 0,
            failure: Some(PropFailure { loop_key: "00".into(), witness: "x=1".into() }),
            note: None,
        };
        assert_eq!(fail.render_line(), "P04 FAIL loop=00 witness=x=1");
    }

    #[test]
    fn image_square_set_is_preserved_not_pointwise() {
        let t = z4();
        let a = Perm::identity(4);
        let c = t.left_translation(1).inverse();
        let iso = isotope(&t, &a, &a, &c).unwrap();
        let (_, original_identity) = iso.as_loop.clone().unwrap();
        assert_eq!(original_identity, 1);
        let mut diag: Vec<Element> = (0..4).map(|x| iso.cells[x * 4 + x]).collect();
        diag.sort_unstable();
        diag.dedup();
        assert_eq!(diag, vec![1, 3]);
        assert_eq!(c.apply(2), 1);
        assert_ne!(vec![c.apply(0), c.apply(2)], vec![3]);
        let suite = proposition_suite(&[t]);
        assert!(suite[12].passed());
    }

    #[test]
    fn loop_producing_same_component_isotopes_are_centrum_shifts() {
        for t in [z4(), klein()] {
            let n = t.order();
            let centrum = structure::centrum(&t);
            let all = all_perms(n);
            let mut produced = 0;
            for a in &all {
                for c in &all {
                    let predicted = centrum
                        .iter()
                        .any(|&q| t.left_translation(q).inverse().then(a) == *c);
                    let iso = isotope(&t, a, a, c).unwrap();
                    assert_eq!(iso.as_loop.is_some(), predicted);
                    if let Some((_, e)) = iso.as_loop {
                        produced += 1;
                        let mut diag: Vec<Element> =
                            (0..n).map(|x| iso.cells[x * n + x]).collect();
                        diag.sort_unstable();
                        diag.dedup();
                        let mut expected: Vec<Element> =
                            t.squares().iter().map(|&s| c.apply(s)).collect();
                        expected.sort_unstable();
                        assert_eq!(diag, expected);
                        assert!(diag.contains(&e));
                    }
                }
            }
            assert_eq!(produced, 24 * centrum.len());
        }
    }

    fn all_perms(n: usize) -> Vec<Perm> {
        let mut out = Vec::new();
        let mut image: Vec<usize> = (0..n).collect();
        permute(&mut image, n, &mut out);
        out
    }

    fn permute(image: &mut Vec<usize>, k: usize, out: &mut Vec<Perm>) {
        if k <= 1 {
            out.push(Perm::from_image(image.clone()).unwrap());
            return;
        }
        for i in 0..k {
            permute(image, k - 1, out);
            if k.is_multiple_of(2) {
                image.swap(i, k - 1);
            } else {
                image.swap(0, k - 1);
            }
        }
    }

    #[test]
    fn search_exhausts_small_central_orders() {
        let assoc = named("associative");
        let report = counterexample_search(6, 6, &[named("c")], &mut |t| !assoc.holds_on(t))
            .unwrap();
        assert!(report.found.is_none());
        assert_eq!(report.searched, vec![(1, 1), (2, 1), (3, 1), (4, 2), (5, 1), (6, 2)]);
    }

    #[test]
    fn osborn_implies_wip_on_small_orders() {
        let wip = named("wip");
        let report = counterexample_search(5, 5, &[], &mut |t| {
            osborn_check(t, OsbornMethod::Definitional).holds && !wip.holds_on(t)
        })
        .unwrap();
        assert!(report.found.is_none());
        assert_eq!(report.searched.iter().map(|&(_, k)| k).sum::<usize>(), 11);
    }

    #[test]
    fn search_respects_budget() {
        let err = counterexample_search(9, 3, &[named("c")], &mut |_| false).unwrap_err();
        assert!(matches!(err, crate::error::Error::BudgetExceeded { order: 4, limit: 3 }));
    }

    #[test]
    fn catalogs_have_frozen_shapes() {
        let plain = catalog_up_to(4).unwrap();
        assert_eq!(plain.len(), 5);
        let with_steiner = verification_catalog(3).unwrap();
        assert_eq!(with_steiner.len(), 5);
        assert_eq!(with_steiner[3].order(), 8);
        assert_eq!(with_steiner[4].order(), 10);
    }
}
