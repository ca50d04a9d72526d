//! Generated subalgebras, the replica relation ρ on subsets, and the
//! quotient of a power algebra by it.

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::algebra::{for_each_tuple, Elem, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::power::{complex_flags, PowerAlgebra};
use crate::slo::SloAlgebra;
use crate::subset::SubsetElem;
use crate::term::Term;

/// Least superset of `seed` closed under `ops`.
pub(crate) fn close(alg: &FiniteAlgebra, ops: &[usize], seed: &[bool]) -> Vec<bool> {
    let mut flags = seed.to_vec();
    let mut members: Vec<Elem> = (0..flags.len()).filter(|&i| flags[i]).collect();
    loop {
        let mut fresh = Vec::new();
        for &op in ops {
            let k = alg.arity(op);
            let mut args = vec![0; k];
            for_each_tuple(members.len(), k, |idx| {
                for (a, &i) in args.iter_mut().zip(idx) {
                    *a = members[i];
                }
                let r = alg.apply(op, &args);
                if !flags[r] {
                    flags[r] = true;
                    fresh.push(r);
                }
            });
        }
        if fresh.is_empty() {
            return flags;
        }
        members.extend(fresh);
    }
}

fn is_closed(alg: &FiniteAlgebra, ops: &[usize], flags: &[bool]) -> bool {
    let members: Vec<Elem> = (0..flags.len()).filter(|&i| flags[i]).collect();
    ops.iter().all(|&op| {
        let k = alg.arity(op);
        let mut ok = true;
        let mut args = vec![0; k];
        for_each_tuple(members.len(), k, |idx| {
            if ok {
                for (a, &i) in args.iter_mut().zip(idx) {
                    *a = members[i];
                }
                ok = flags[alg.apply(op, &args)];
            }
        });
        ok
    })
}

/// `⟨A⟩` in the Ω-reduct of `base`.
pub fn closure_of(base: &FiniteAlgebra, a: &SubsetElem) -> SubsetElem {
    SubsetElem::from_flags(&close(base, &base.omega_ops(), &a.to_flags(base.size())))
}

/// A subalgebra of the base, optionally marked as carrying the adjoined unit.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubalgebraRep {
    pub carrier: SubsetElem,
    pub with_unit: bool,
}

impl SubalgebraRep {
    pub fn plain(carrier: SubsetElem) -> Self {
        SubalgebraRep {
            carrier,
            with_unit: false,
        }
    }

    /// `⟨a,b⟩`, with a `+1` suffix for the unit marker.
    pub fn label(&self, base: &FiniteAlgebra) -> String {
        let parts: Vec<&str> = self.carrier.members().iter().map(|&e| base.label(e)).collect();
        format!("⟨{}⟩{}", parts.join(","), if self.with_unit { "+1" } else { "" })
    }
}

impl fmt::Display for SubalgebraRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨{}⟩{}", self.carrier, if self.with_unit { "+1" } else { "" })
    }
}

/// The least Ω-closed superset of `a`; `⟨∅⟩ = ∅` unless Ω has constants.
pub fn generated_subalgebra(base: &FiniteAlgebra, a: &SubsetElem) -> SubalgebraRep {
    SubalgebraRep::plain(closure_of(base, a))
}

fn by_size_then_members(a: &SubsetElem, b: &SubsetElem) -> std::cmp::Ordering {
    (a.len(), a.members()).cmp(&(b.len(), b.members()))
}

/// Every Ω-closed subset, ordered by size and then lexicographically.
pub fn enumerate_subalgebras(base: &FiniteAlgebra, include_empty: bool, limits: &Limits) -> Result<Vec<SubalgebraRep>> {
    let n = base.size();
    limits.check_subsets(n)?;
    let ops = base.omega_ops();
    let mut out = Vec::new();
    let mut flags = vec![false; n];
    for mask in 0u64..1 << n {
        if mask == 0 && !include_empty {
            continue;
        }
        for (i, f) in flags.iter_mut().enumerate() {
            *f = mask >> i & 1 == 1;
        }
        if is_closed(base, &ops, &flags) {
            out.push(SubsetElem::from_flags(&flags));
        }
    }
    out.sort_by(by_size_then_members);
    Ok(out.into_iter().map(SubalgebraRep::plain).collect())
}

fn require_idempotent_entropic(base: &FiniteAlgebra) -> Result<()> {
    if let Some((op, x)) = base.idempotency_witness() {
        return Err(Error::Precondition(format!(
            "base is not idempotent: {}({}, …) ≠ {}",
            base.symbol(op),
            base.label(x),
            base.label(x)
        )));
    }
    if let Some((w, p, _)) = base.entropy_witness() {
        return Err(Error::Precondition(format!(
            "base is not entropic: `{}` and `{}` do not commute",
            base.symbol(w),
            base.symbol(p)
        )));
    }
    Ok(())
}

/// `A ρ B ⇔ ⟨A⟩ = ⟨B⟩`, for idempotent entropic bases.
pub fn rho_equivalent(base: &FiniteAlgebra, a: &SubsetElem, b: &SubsetElem) -> Result<bool> {
    require_idempotent_entropic(base)?;
    Ok(closure_of(base, a) == closure_of(base, b))
}

/// Searches for terms `t`, `s` with `A ⊆ t(B,…,B)` and `B ⊆ s(A,…,A)`,
/// trying every term shape up to `depth_bound` over the positive-arity
/// Ω-operations. Witness terms are linear in `x1, x2, …`.
pub fn rho_witness(
    base: &FiniteAlgebra,
    a: &SubsetElem,
    b: &SubsetElem,
    depth_bound: usize,
) -> Result<Option<(Term, Term)>> {
    let t = covering_term(base, b, a, depth_bound);
    let s = covering_term(base, a, b, depth_bound);
    Ok(t.zip(s))
}

/// A linear term `t` with `target ⊆ t(from,…,from)`.
fn covering_term(base: &FiniteAlgebra, from: &SubsetElem, target: &SubsetElem, depth: usize) -> Option<Term> {
    let ops: Vec<usize> = base.omega_ops().into_iter().filter(|&op| base.arity(op) > 0).collect();
    let mut seen: HashSet<SubsetElem> = HashSet::new();
    let mut images: Vec<(SubsetElem, Term)> = vec![(from.clone(), Term::var("x"))];
    seen.insert(from.clone());
    if target.is_subset(from) {
        return Some(number_leaves(&images[0].1));
    }
    let mut level_start = 0;
    for _ in 0..depth {
        let current = images.len();
        let mut fresh = Vec::new();
        for &op in &ops {
            let k = base.arity(op);
            // tuples over all images found so far that use at least one from the last level
            for_each_tuple(current, k, |idx| {
                if idx.iter().all(|&i| i < level_start) {
                    return;
                }
                let slices: Vec<&[Elem]> = idx.iter().map(|&i| images[i].0.members()).collect();
                let img = SubsetElem::from_flags(&complex_flags(base, op, &slices));
                if !seen.insert(img.clone()) {
                    return;
                }
                let term = Term::app(base.symbol(op), idx.iter().map(|&i| images[i].1.clone()).collect());
                fresh.push((img, term));
            });
        }
        if let Some((_, t)) = fresh.iter().find(|(img, _)| target.is_subset(img)) {
            return Some(number_leaves(t));
        }
        if fresh.is_empty() {
            return None;
        }
        level_start = current;
        images.extend(fresh);
    }
    None
}

fn number_leaves(t: &Term) -> Term {
    fn go(t: &Term, next: &mut usize) -> Term {
        match t {
            Term::Var(_) => {
                *next += 1;
                Term::var(format!("x{next}"))
            }
            Term::App(s, args) => Term::App(s.clone(), args.iter().map(|a| go(a, next)).collect()),
        }
    }
    go(t, &mut 0)
}

/// `ω(x₁,…,xₙ) = 1 ⇒ xᵢ = 1` for every Ω-operation, where `1` is the unique unit.
pub fn condition_one_check(base: &FiniteAlgebra) -> Result<bool> {
    let u = base.unique_unit()?;
    Ok(condition_one_witness(base, u).is_none())
}

fn condition_one_witness(base: &FiniteAlgebra, u: Elem) -> Option<(usize, Vec<Elem>)> {
    for op in base.omega_ops() {
        let k = base.arity(op);
        if k == 0 {
            continue;
        }
        let hit = crate::algebra::find_tuple(base.size(), k, |args| {
            (base.apply(op, args) == u && args.iter().any(|&x| x != u)).then(|| args.to_vec())
        });
        if let Some(args) = hit {
            return Some((op, args));
        }
    }
    None
}

/// No member lies in the subalgebra generated by the others.
pub fn is_reduced(base: &FiniteAlgebra, a: &SubsetElem) -> bool {
    a.members()
        .iter()
        .all(|&x| !closure_of(base, &a.without(x)).contains(x))
}

/// All reduced subsets (the empty set included), ordered by size then members.
pub fn reduced_subsets(base: &FiniteAlgebra, limits: &Limits) -> Result<Vec<SubsetElem>> {
    let n = base.size();
    limits.check_subsets(n)?;
    let mut out: Vec<SubsetElem> = (0u64..1 << n)
        .map(SubsetElem::from_mask)
        .filter(|s| is_reduced(base, s))
        .collect();
    out.sort_by(by_size_then_members);
    Ok(out)
}

/// Checks that `A ↦ ⟨A⟩` maps the reduced subsets bijectively onto the
/// subalgebras (the empty one included). Returns a description of the first
/// failure.
pub fn reduced_bijection_failure(base: &FiniteAlgebra, limits: &Limits) -> Result<Option<String>> {
    let reduced = reduced_subsets(base, limits)?;
    let subs = enumerate_subalgebras(base, true, limits)?;
    let mut hit: HashMap<SubsetElem, SubsetElem> = HashMap::new();
    for r in &reduced {
        let c = closure_of(base, r);
        if let Some(prev) = hit.insert(c.clone(), r.clone()) {
            return Ok(Some(format!(
                "not injective: {} and {} both generate {}",
                prev.label(base),
                r.label(base),
                c.label(base)
            )));
        }
    }
    if let Some(s) = subs.iter().find(|s| !hit.contains_key(&s.carrier)) {
        return Ok(Some(format!(
            "not surjective: {} has no reduced generating set",
            s.carrier.label(base)
        )));
    }
    if hit.len() != subs.len() {
        return Ok(Some("closure of a reduced set is not a listed subalgebra".into()));
    }
    Ok(None)
}

/// The power algebra modulo ρ, realized on subalgebra representatives.
#[derive(Clone, Debug)]
pub struct Quotient {
    slo: SloAlgebra,
    classes: Vec<SubalgebraRep>,
    closures: Vec<SubsetElem>,
    projection: Vec<Elem>,
}

impl Quotient {
    pub fn slo(&self) -> &SloAlgebra {
        &self.slo
    }

    pub fn algebra(&self) -> &FiniteAlgebra {
        self.slo.algebra()
    }

    pub fn classes(&self) -> &[SubalgebraRep] {
        &self.classes
    }

    /// Full closure (the unit included) behind each class.
    pub fn closures(&self) -> &[SubsetElem] {
        &self.closures
    }

    /// Class of each power-algebra element.
    pub fn projection(&self) -> &[Elem] {
        &self.projection
    }
}

/// Quotient of a power algebra by `A ρ B ⇔ ⟨A⟩ = ⟨B⟩`:
/// `ω(⟨A₁⟩,…,⟨Aₙ⟩) = ⟨ω(A₁,…,Aₙ)⟩` and `⟨A₁⟩ + ⟨A₂⟩ = ⟨A₁ ∪ A₂⟩`.
///
/// The base must be idempotent and entropic; unit variants also need the
/// base to satisfy `ω(x₁,…,xₙ) = 1 ⇒ xᵢ = 1`. In unit variants each class is
/// stored as its closure without `1` plus a marker telling whether `1` belongs.
pub fn quotient_by_rho(power: &PowerAlgebra) -> Result<Quotient> {
    let base = power.base();
    require_idempotent_entropic(base)?;
    let unit = power.base_unit();
    if let Some(u) = unit {
        if let Some((op, args)) = condition_one_witness(base, u) {
            let shown: Vec<&str> = args.iter().map(|&a| base.label(a)).collect();
            return Err(Error::Precondition(format!(
                "{}({}) = {} but not all arguments are the unit",
                base.symbol(op),
                shown.join(", "),
                base.label(u)
            )));
        }
    }
    let palg = power.algebra();
    let closures_of_power: Vec<SubsetElem> = power.subsets().iter().map(|s| closure_of(base, s)).collect();
    let mut closures: Vec<SubsetElem> = closures_of_power.clone();
    closures.sort_by(by_size_then_members);
    closures.dedup();
    let class_of: HashMap<&SubsetElem, Elem> = closures.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let projection: Vec<Elem> = closures_of_power.iter().map(|c| class_of[c]).collect();
    let rep_elem: Vec<Elem> = closures
        .iter()
        .map(|c| power.element_of(c).expect("closures are power elements"))
        .collect();
    let classes: Vec<SubalgebraRep> = closures
        .iter()
        .map(|c| match unit {
            Some(u) => SubalgebraRep {
                carrier: c.without(u),
                with_unit: c.contains(u),
            },
            None => SubalgebraRep::plain(c.clone()),
        })
        .collect();
    let labels: Vec<String> = classes.iter().map(|c| c.label(base)).collect();
    let mut sig = palg.signature().clone();
    sig.set_name(format!("{}_rho", sig.name()));
    let alg = FiniteAlgebra::from_fn(sig, labels, |op, args| {
        let reps: Vec<Elem> = args.iter().map(|&c| rep_elem[c]).collect();
        projection[palg.apply(op, &reps)]
    })?;
    Ok(Quotient {
        slo: SloAlgebra::new_unchecked(alg),
        classes,
        closures,
        projection,
    })
}

/// Exhaustively checks that ρ is a congruence of the power algebra: replacing
/// one argument by a ρ-equivalent subset never changes the class of the
/// result, for every operation (join included). Returns the first failure.
pub fn rho_congruence_failure(power: &PowerAlgebra) -> Option<String> {
    let base = power.base();
    let palg = power.algebra();
    let n = palg.size();
    let cls: Vec<SubsetElem> = power.subsets().iter().map(|s| closure_of(base, s)).collect();
    for op in 0..palg.signature().ops().len() {
        let k = palg.arity(op);
        for pos in 0..k {
            for a in 0..n {
                for a2 in (a + 1)..n {
                    if cls[a] != cls[a2] {
                        continue;
                    }
                    let mut failure = None;
                    for_each_tuple(n, k, |args| {
                        if failure.is_some() || args[pos] != a {
                            return;
                        }
                        let mut other = args.to_vec();
                        other[pos] = a2;
                        let (r1, r2) = (palg.apply(op, args), palg.apply(op, &other));
                        if cls[r1] != cls[r2] {
                            failure = Some(format!(
                                "{} at position {}: {} ρ {} but the results {} and {} are not related",
                                palg.symbol(op),
                                pos + 1,
                                palg.label(a),
                                palg.label(a2),
                                palg.label(r1),
                                palg.label(r2)
                            ));
                        }
                    });
                    if failure.is_some() {
                        return failure;
                    }
                }
            }
        }
    }
    None
}

/// The ρ relation on a power carrier as a boolean matrix.
pub fn rho_relation(power: &PowerAlgebra) -> Result<Vec<Vec<bool>>> {
    let base = power.base();
    require_idempotent_entropic(base)?;
    let cls: Vec<SubsetElem> = power.subsets().iter().map(|s| closure_of(base, s)).collect();
    Ok(cls.iter().map(|a| cls.iter().map(|b| a == b).collect()).collect())
}

/// Reflexivity, symmetry and transitivity of a relation matrix.
pub fn is_equivalence(rel: &[Vec<bool>]) -> bool {
    let n = rel.len();
    (0..n).all(|a| rel[a][a])
        && (0..n).all(|a| (0..n).all(|b| rel[a][b] == rel[b][a]))
        && (0..n).all(|a| (0..n).all(|b| !rel[a][b] || (0..n).all(|c| !rel[b][c] || rel[a][c])))
}
