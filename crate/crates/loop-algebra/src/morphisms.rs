//! Autotopisms, isotopes, inner mappings, and map classification.
//!
//! An autotopism of a loop is a permutation triple (U, V, W) with
//! xU * yV = (x*y)W for all x, y. The exhaustive search uses the fact
//! that U and V are determined by W together with a = 0U and b = 0V,
//! so only W is enumerated, with incremental pruning.

use crate::error::{Error, Result};
use crate::perm::{AutotopismTriple, Perm};
use crate::table::{Element, LoopTable};

/// Checks xU * yV = (x*y)W over all pairs.
pub fn is_autotopism(t: &LoopTable, trip: &AutotopismTriple) -> Result<bool> {
    if trip.degree() != t.order() {
        return Err(Error::OrderMismatch { left: t.order(), right: trip.degree() });
    }
    Ok(t.elements().all(|x| {
        t.elements().all(|y| {
            t.mul(trip.u.apply(x), trip.v.apply(y)) == trip.w.apply(t.mul(x, y))
        })
    }))
}

/// Enumerates the full autotopism group, sorted by (W, a, b) where
/// a = 0U and b = 0V. Orders above the budget are rejected.
pub fn autotopism_group(t: &LoopTable, budget: usize) -> Result<Vec<AutotopismTriple>> {
    let n = t.order();
    if n > budget {
        return Err(Error::BudgetExceeded { order: n, limit: budget });
    }
    let mut instances_at: Vec<Vec<(Element, Element)>> = vec![Vec::new(); n];
    for x in 0..n {
        for y in 0..n {
            instances_at[x.max(y).max(t.mul(x, y))].push((x, y));
        }
    }
    let mut out = Vec::new();
    let mut w = vec![0usize; n];
    let mut used = vec![false; n];
    for a in 0..n {
        for b in 0..n {
            w[0] = t.mul(a, b);
            used[w[0]] = true;
            extend_w(t, a, b, 1, &mut w, &mut used, &instances_at, &mut out);
            used[w[0]] = false;
        }
    }
    out.sort_by(|s, t| {
        (s.w.image(), s.u.apply(0), s.v.apply(0)).cmp(&(t.w.image(), t.u.apply(0), t.v.apply(0)))
    });
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn extend_w(
    t: &LoopTable,
    a: Element,
    b: Element,
    k: usize,
    w: &mut Vec<Element>,
    used: &mut Vec<bool>,
    instances_at: &[Vec<(Element, Element)>],
    out: &mut Vec<AutotopismTriple>,
) {
    let n = t.order();
    if k == n {
        let u = Perm::from_image((0..n).map(|x| t.rdiv(w[x], b)).collect()).unwrap();
        let v = Perm::from_image((0..n).map(|y| t.ldiv(a, w[y])).collect()).unwrap();
        let wp = Perm::from_image(w.clone()).unwrap();
        out.push(AutotopismTriple { u, v, w: wp });
        return;
    }
    for cand in 0..n {
        if used[cand] {
            continue;
        }
        w[k] = cand;
        let ok = instances_at[k].iter().all(|&(x, y)| {
            t.mul(t.rdiv(w[x], b), t.ldiv(a, w[y])) == w[t.mul(x, y)]
        });
        if ok {
            used[cand] = true;
            extend_w(t, a, b, k + 1, w, used, instances_at, out);
            used[cand] = false;
        }
    }
}

/// The principal isotope x∘y = (x/b)*(a\y), whose identity a*b is
/// relabeled to 0. Returns the table and the original identity label.
pub fn principal_isotope(t: &LoopTable, a: Element, b: Element) -> (LoopTable, Element) {
    let n = t.order();
    let rows: Vec<Vec<Element>> = (0..n)
        .map(|x| (0..n).map(|y| t.mul(t.rdiv(x, b), t.ldiv(a, y))).collect())
        .collect();
    LoopTable::from_rows_any_identity(rows).expect("principal isotopes are loops")
}

/// A general isotope x∘y = ((x)A⁻¹ * (y)B⁻¹)C: always a quasigroup,
/// and a loop exactly when some element is a two-sided identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Isotope {
    pub n: usize,
    pub cells: Vec<Element>,
    /// The relabeled loop and its original identity, when one exists.
    pub as_loop: Option<(LoopTable, Element)>,
}

pub fn isotope(t: &LoopTable, a: &Perm, b: &Perm, c: &Perm) -> Result<Isotope> {
    let n = t.order();
    for p in [a, b, c] {
        if p.degree() != n {
            return Err(Error::OrderMismatch { left: n, right: p.degree() });
        }
    }
    let (ai, bi) = (a.inverse(), b.inverse());
    let mut cells = vec![0; n * n];
    for x in 0..n {
        for y in 0..n {
            cells[x * n + y] = c.apply(t.mul(ai.apply(x), bi.apply(y)));
        }
    }
    let rows: Vec<Vec<Element>> = (0..n).map(|x| cells[x * n..(x + 1) * n].to_vec()).collect();
    let as_loop = LoopTable::from_rows_any_identity(rows).ok();
    Ok(Isotope { n, cells, as_loop })
}

/// The middle inner mapping T(x) = R_x L_x⁻¹.
pub fn t_map(t: &LoopTable, x: Element) -> Perm {
    t.right_translation(x).then(&t.left_translation(x).inverse())
}

/// The right inner mapping R(x, y) = R_x R_y R_{x*y}⁻¹.
pub fn r_map(t: &LoopTable, x: Element, y: Element) -> Perm {
    t.right_translation(x)
        .then(&t.right_translation(y))
        .then(&t.right_translation(t.mul(x, y)).inverse())
}

/// The left inner mapping L(x, y) = L_x L_y L_{y*x}⁻¹.
pub fn l_map(t: &LoopTable, x: Element, y: Element) -> Perm {
    t.left_translation(x)
        .then(&t.left_translation(y))
        .then(&t.left_translation(t.mul(y, x)).inverse())
}

/// The map y ↦ x*(x*((y/x)/x)), i.e. R_x⁻² L_x².
pub fn gamma_map(t: &LoopTable, x: Element) -> Perm {
    let r_inv = t.right_translation(x).inverse();
    let l = t.left_translation(x);
    r_inv.then(&r_inv).then(&l).then(&l)
}

pub fn is_automorphism(t: &LoopTable, p: &Perm) -> bool {
    p.degree() == t.order()
        && t.elements().all(|x| {
            t.elements().all(|y| t.mul(p.apply(x), p.apply(y)) == p.apply(t.mul(x, y)))
        })
}

/// True when every inner mapping is an automorphism; the generators
/// T(x), R(x, y), L(x, y) suffice.
pub fn is_a_loop(t: &LoopTable) -> bool {
    t.elements().all(|x| is_automorphism(t, &t_map(t, x)))
        && t.elements().all(|x| {
            t.elements().all(|y| {
                is_automorphism(t, &r_map(t, x, y)) && is_automorphism(t, &l_map(t, x, y))
            })
        })
}

/// How a self-map of a loop relates to the multiplication.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapClassification {
    pub is_bijection: bool,
    pub fixes_identity: bool,
    pub is_automorphism: bool,
    pub is_anti_automorphism: bool,
    pub is_semi_automorphism: bool,
    /// All c for which (f, f R_c, f R_c) is an autotopism; empty unless
    /// f is a bijection.
    pub pseudo_automorphism_companions: Vec<Element>,
}

pub fn classify_map(t: &LoopTable, f: &[Element]) -> Result<MapClassification> {
    let n = t.order();
    if f.len() != n {
        return Err(Error::OrderMismatch { left: n, right: f.len() });
    }
    let bijection = Perm::from_image(f.to_vec()).is_ok();
    let fixes_identity = f[0] == 0;
    let homomorphic =
        |pair: &dyn Fn(Element, Element) -> Element| -> bool {
            (0..n).all(|x| (0..n).all(|y| f[t.mul(x, y)] == pair(x, y)))
        };
    let is_automorphism = bijection && homomorphic(&|x, y| t.mul(f[x], f[y]));
    let is_anti_automorphism = bijection && homomorphic(&|x, y| t.mul(f[y], f[x]));
    let is_semi_automorphism = bijection
        && fixes_identity
        && (0..n).all(|z| {
            (0..n).all(|y| {
                f[t.mul(t.mul(z, y), z)] == t.mul(t.mul(f[z], f[y]), f[z])
            })
        });
    let companions = if bijection {
        let fp = Perm::from_image(f.to_vec()).unwrap();
        (0..n)
            .filter(|&c| {
                let side = fp.then(&t.right_translation(c));
                let trip =
                    AutotopismTriple::new(fp.clone(), side.clone(), side).unwrap();
                is_autotopism(t, &trip).unwrap()
            })
            .collect()
    } else {
        Vec::new()
    };
    Ok(MapClassification {
        is_bijection: bijection,
        fixes_identity,
        is_automorphism,
        is_anti_automorphism,
        is_semi_automorphism,
        pseudo_automorphism_companions: companions,
    })
}

/// Verdict for one candidate triple in `special_autotopisms`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    Holds,
    Fails,
    /// The triple mentions J but the loop lacks two-sided inverses.
    Inapplicable,
}

/// Membership in AUT(L) of eight distinguished candidate triples built
/// from the translations of z, the inversion J, and the Osborn maps
/// E_z = R_z L_z R_z⁻¹ L_z⁻¹, A_z = E_z L_z, B_z = E_z⁻¹ R_z.
pub fn special_autotopisms(t: &LoopTable, z: Element) -> Vec<(&'static str, Membership)> {
    let n = t.order();
    let i = Perm::identity(n);
    let lz = t.left_translation(z);
    let rz = t.right_translation(z);
    let lz2 = lz.then(&lz);
    let rz2 = rz.then(&rz);
    let zz = t.mul(z, z);
    let l_zz = t.left_translation(zz);
    let r_zz = t.right_translation(zz);
    let e = rz.then(&lz).then(&rz.inverse()).then(&lz.inverse());
    let a_z = e.then(&lz);
    let b_z = e.inverse().then(&rz);
    let j = t.inversion_perm().ok();

    let verdict = |u: Perm, v: Perm, w: Perm| -> Membership {
        let trip = AutotopismTriple::new(u, v, w).unwrap();
        if is_autotopism(t, &trip).unwrap() {
            Membership::Holds
        } else {
            Membership::Fails
        }
    };
    let mut out = vec![
        ("(L_z^2, I, L_z^2)", verdict(lz2.clone(), i.clone(), lz2.clone())),
        ("(I, R_z^2, R_z^2)", verdict(i.clone(), rz2.clone(), rz2.clone())),
    ];
    out.push((
        "(I, L_z^2, J L_z^2 J)",
        match &j {
            Some(j) => verdict(i.clone(), lz2.clone(), j.then(&lz2).then(j)),
            None => Membership::Inapplicable,
        },
    ));
    out.push((
        "(R_z^2, I, J R_z^2 J)",
        match &j {
            Some(j) => verdict(rz2.clone(), i.clone(), j.then(&rz2).then(j)),
            None => Membership::Inapplicable,
        },
    ));
    out.push((
        "(R_{z^2}, L_z^-2, I)",
        verdict(r_zz.clone(), lz2.inverse(), i.clone()),
    ));
    out.push((
        "(R_z^2, L_{z^2}^-1, I)",
        verdict(rz2.clone(), l_zz.inverse(), i.clone()),
    ));
    out.push(("(A_z, R_z, R_z L_z)", verdict(a_z, rz.clone(), rz.then(&lz))));
    out.push(("(L_z, B_z, L_z R_z)", verdict(lz.clone(), b_z, lz.then(&rz))));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2() -> LoopTable {
        LoopTable::from_rows(vec![vec![0, 1], vec![1, 0]]).unwrap()
    }

    fn z3() -> LoopTable {
        LoopTable::from_rows(vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]]).unwrap()
    }

    fn z4() -> LoopTable {
        LoopTable::from_rows(vec![
            vec![0, 1, 2, 3],
            vec![1, 2, 3, 0],
            vec![2, 3, 0, 1],
            vec![3, 0, 1, 2],
        ])
        .unwrap()
    }

    fn z8() -> LoopTable {
        let rows = (0..8).map(|x| (0..8).map(|y| (x + y) % 8).collect()).collect();
        LoopTable::from_rows(rows).unwrap()
    }

    fn klein() -> LoopTable {
        LoopTable::from_rows(vec![
            vec![0, 1, 2, 3],
            vec![1, 0, 3, 2],
            vec![2, 3, 0, 1],
            vec![3, 2, 1, 0],
        ])
        .unwrap()
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
        .unwrap()
    }

    fn tau() -> Perm {
        Perm::from_image(vec![1, 0]).unwrap()
    }

    #[test]
    fn autotopism_membership() {
        let t = z3();
        assert!(is_autotopism(&t, &AutotopismTriple::identity(3)).unwrap());
        let lx = t.left_translation(1);
        let id = Perm::identity(3);
        let bad = AutotopismTriple::new(lx, id.clone(), id).unwrap();
        assert!(!is_autotopism(&t, &bad).unwrap());
        let two = z2();
        let swap = AutotopismTriple::new(tau(), tau(), Perm::identity(2)).unwrap();
        assert!(is_autotopism(&two, &swap).unwrap());
    }

    #[test]
    fn triple_composition_example() {
        let two = z2();
        let s = AutotopismTriple::new(tau(), Perm::identity(2), tau()).unwrap();
        let t = AutotopismTriple::new(Perm::identity(2), tau(), tau()).unwrap();
        let st = s.compose(&t).unwrap();
        assert_eq!(st, AutotopismTriple::new(tau(), tau(), Perm::identity(2)).unwrap());
        assert!(is_autotopism(&two, &st).unwrap());
    }

    #[test]
    fn autotopism_group_counts() {
        assert_eq!(autotopism_group(&z2(), 8).unwrap().len(), 4);
        assert_eq!(autotopism_group(&z3(), 8).unwrap().len(), 18);
        assert_eq!(autotopism_group(&klein(), 8).unwrap().len(), 96);
    }

    #[test]
    fn autotopism_group_is_a_group() {
        let t = z3();
        let auts = autotopism_group(&t, 8).unwrap();
        assert!(auts.contains(&AutotopismTriple::identity(3)));
        for s in &auts {
            assert!(auts.contains(&s.inverse()));
            for u in &auts {
                assert!(auts.contains(&s.compose(u).unwrap()));
            }
        }
        let sorted: Vec<_> = auts
            .iter()
            .map(|a| (a.w.image().to_vec(), a.u.apply(0), a.v.apply(0)))
            .collect();
        let mut expect = sorted.clone();
        expect.sort();
        assert_eq!(sorted, expect);
    }

    #[test]
    fn budget_is_enforced() {
        assert_eq!(
            autotopism_group(&z3(), 2),
            Err(Error::BudgetExceeded { order: 3, limit: 2 })
        );
    }

    #[test]
    fn principal_isotopes() {
        let t = z4();
        let (same, e) = principal_isotope(&t, 0, 0);
        assert_eq!(same, t);
        assert_eq!(e, 0);
        let (iso, e) = principal_isotope(&t, 1, 2);
        assert_eq!(e, t.mul(1, 2));
        assert_eq!(iso.exponent(), 4);
    }

    #[test]
    fn general_isotopes() {
        let t = z3();
        let i = Perm::identity(3);
        let trivial = isotope(&t, &i, &i, &i).unwrap();
        assert_eq!(trivial.as_loop.as_ref().map(|(l, e)| (l.cells() == t.cells(), *e)), Some((true, 0)));
        let shift = t.left_translation(1);
        let shifted = isotope(&t, &i, &i, &shift).unwrap();
        assert_eq!(shifted.as_loop.map(|(_, e)| e), Some(2));
        let negate = Perm::from_image(vec![0, 2, 1]).unwrap();
        let skew = isotope(&t, &negate, &i, &i).unwrap();
        assert!(skew.as_loop.is_none());
        let mut count = 0;
        let all: Vec<Perm> = permutations(3);
        for a in &all {
            for b in &all {
                for c in &all {
                    if isotope(&t, a, b, c).unwrap().as_loop.is_some() {
                        count += 1;
                    }
                }
            }
        }
        assert_eq!(count, 54);
    }

    fn permutations(n: usize) -> Vec<Perm> {
        let mut out = Vec::new();
        let mut image: Vec<usize> = (0..n).collect();
        heap_permute(&mut image, n, &mut out);
        out.sort_by(|a, b| a.image().cmp(b.image()));
        out
    }

    fn heap_permute(image: &mut Vec<usize>, k: usize, out: &mut Vec<Perm>) {
        if k <= 1 {
            out.push(Perm::from_image(image.clone()).unwrap());
            return;
        }
        for i in 0..k {
            heap_permute(image, k - 1, out);
            if k.is_multiple_of(2) {
                image.swap(i, k - 1);
            } else {
                image.swap(0, k - 1);
            }
        }
    }

    #[test]
    fn inner_maps_fix_identity() {
        let t = sym3();
        for x in t.elements() {
            assert_eq!(t_map(&t, x).apply(0), 0);
            assert_eq!(gamma_map(&t, x).apply(0), 0);
            for y in t.elements() {
                assert_eq!(r_map(&t, x, y).apply(0), 0);
                assert_eq!(l_map(&t, x, y).apply(0), 0);
            }
        }
        assert_eq!(t_map(&t, 2).image(), &[0, 5, 2, 4, 3, 1]);
        for x in z4().elements() {
            assert!(t_map(&z4(), x).is_identity());
            assert!(gamma_map(&z4(), x).is_identity());
        }
    }

    #[test]
    fn groups_are_a_loops() {
        assert!(is_a_loop(&sym3()));
        assert!(is_a_loop(&z4()));
    }

    #[test]
    fn map_classification() {
        let t = z4();
        let j = t.inversion_perm().unwrap();
        let c = classify_map(&t, j.image()).unwrap();
        assert!(c.is_bijection && c.fixes_identity && c.is_automorphism);
        assert!(c.is_anti_automorphism);
        assert_eq!(c.pseudo_automorphism_companions, vec![0, 1, 2, 3]);

        let squaring: Vec<Element> = t.elements().map(|x| t.mul(x, x)).collect();
        let c = classify_map(&t, &squaring).unwrap();
        assert!(!c.is_bijection && !c.is_automorphism && !c.is_anti_automorphism);
        assert!(c.pseudo_automorphism_companions.is_empty());

        let c = classify_map(&sym3(), Perm::identity(6).image()).unwrap();
        assert!(c.is_automorphism && c.is_semi_automorphism && !c.is_anti_automorphism);

        assert_eq!(
            classify_map(&t, &[0, 1]),
            Err(Error::OrderMismatch { left: 4, right: 2 })
        );
    }

    #[test]
    fn special_autotopism_report() {
        let on_z4 = special_autotopisms(&z4(), 1);
        assert!(on_z4.iter().all(|(_, m)| *m == Membership::Holds));
        let on_z8 = special_autotopisms(&z8(), 1);
        let by_label: std::collections::HashMap<_, _> = on_z8.into_iter().collect();
        assert_eq!(by_label["(L_z^2, I, L_z^2)"], Membership::Holds);
        assert_eq!(by_label["(I, L_z^2, J L_z^2 J)"], Membership::Fails);
        assert_eq!(by_label["(R_z^2, I, J R_z^2 J)"], Membership::Fails);
        assert_eq!(by_label["(A_z, R_z, R_z L_z)"], Membership::Holds);
        let one_sided = LoopTable::from_rows(vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 3, 4, 1, 0],
            vec![3, 4, 0, 2, 1],
            vec![4, 2, 1, 0, 3],
        ])
        .unwrap();
        let report = special_autotopisms(&one_sided, 1);
        assert_eq!(report[2].1, Membership::Inapplicable);
        assert_eq!(report[3].1, Membership::Inapplicable);
    }
}
