//! Extending generator maps out of free models: `h̿(T) = Σ_{t∈T} h̄(t)`.

use std::collections::HashMap;

use crate::algebra::{for_each_tuple, Elem, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::free::FreeModel;
use crate::slo::SloAlgebra;
use crate::term::Term;

/// A map between the carriers of a free model and a target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homomorphism {
    pub map: Vec<Elem>,
}

impl Homomorphism {
    pub fn apply(&self, e: Elem) -> Elem {
        self.map[e]
    }

    /// `label ↦ label` pairs in carrier order.
    pub fn labelled<'a>(&self, from: &'a FiniteAlgebra, to: &'a FiniteAlgebra) -> Vec<(&'a str, &'a str)> {
        self.map
            .iter()
            .enumerate()
            .map(|(e, &v)| (from.label(e), to.label(v)))
            .collect()
    }
}

/// How each symbol of the free model is read in the target: Ω-symbols by
/// name, join, zero and unit by their designations.
struct SymbolMap {
    ops: Vec<(usize, usize)>,
    constants: Vec<(usize, Elem)>,
}

fn match_symbols(free: &FreeModel, target: &SloAlgebra) -> Result<SymbolMap> {
    let (fa, ta) = (free.algebra(), target.algebra());
    let fs = fa.signature();
    let mut ops = Vec::new();
    let mut constants = Vec::new();
    for (i, (sym, arity)) in fs.ops().iter().enumerate() {
        if fs.join_symbol() == Some(sym) {
            ops.push((i, target.join_op()));
        } else if fs.zero_symbol() == Some(sym) {
            constants.push((i, target.zero().ok_or(Error::MissingConstant("zero"))?));
        } else if fs.unit_symbol() == Some(sym) {
            constants.push((i, target.unit().ok_or(Error::MissingConstant("unit"))?));
        } else {
            let j = ta.op_index(sym)?;
            if ta.arity(j) != *arity {
                return Err(Error::ArityMismatch {
                    symbol: sym.clone(),
                    expected: *arity,
                    found: ta.arity(j),
                });
            }
            if *arity == 0 {
                constants.push((i, ta.apply(j, &[])));
            } else {
                ops.push((i, j));
            }
        }
    }
    Ok(SymbolMap { ops, constants })
}

fn eval_in_target(t: &Term, free: &FiniteAlgebra, target: &SloAlgebra, env: &HashMap<&str, Elem>) -> Result<Elem> {
    match t {
        Term::Var(v) => env
            .get(v.as_str())
            .copied()
            .ok_or_else(|| Error::UnboundVariable(v.clone())),
        Term::App(s, args) if args.is_empty() && free.signature().unit_symbol() == Some(s) => {
            target.unit().ok_or(Error::MissingConstant("unit"))
        }
        Term::App(s, args) if args.is_empty() && free.signature().zero_symbol() == Some(s) => {
            target.zero().ok_or(Error::MissingConstant("zero"))
        }
        Term::App(s, args) => {
            let vals = args
                .iter()
                .map(|a| eval_in_target(a, free, target, env))
                .collect::<Result<Vec<_>>>()?;
            target.algebra().apply_symbol(s, &vals)
        }
    }
}

fn resolve_map(free: &FreeModel, h: &[(&str, &str)], target: &SloAlgebra) -> Result<HashMap<String, Elem>> {
    let mut out = HashMap::new();
    for (g, v) in h {
        if !free.generators().iter().any(|(name, _)| name == g) {
            return Err(Error::Precondition(format!(
                "`{g}` is not a generator of the free model"
            )));
        }
        out.insert(g.to_string(), target.algebra().element(v)?);
    }
    if let Some((g, _)) = free.generators().iter().find(|(g, _)| !out.contains_key(g)) {
        return Err(Error::Precondition(format!("the generator map has no image for `{g}`")));
    }
    Ok(out)
}

/// Extends a generator map given by labels; see [`extend_hom_elems`].
pub fn extend_hom(free: &FreeModel, h: &[(&str, &str)], target: &SloAlgebra) -> Result<Homomorphism> {
    let h = resolve_map(free, h, target)?;
    extend_hom_elems(free, &h, target)
}

/// Extends `h: X → target` to the whole free model by evaluating every
/// decomposition part under `h` in the target and joining the values; an
/// element without parts goes to the target zero. The result is checked
/// against every operation, join and constant of the free model, and
/// rejected with a witness if it is not a homomorphism.
pub fn extend_hom_elems(free: &FreeModel, h: &HashMap<String, Elem>, target: &SloAlgebra) -> Result<Homomorphism> {
    let symbols = match_symbols(free, target)?;
    let env: HashMap<&str, Elem> = free
        .generators()
        .iter()
        .map(|(g, _)| {
            h.get(g)
                .map(|&e| (g.as_str(), e))
                .ok_or_else(|| Error::Precondition(format!("the generator map has no image for `{g}`")))
        })
        .collect::<Result<_>>()?;
    let fa = free.algebra();
    let mut map = Vec::with_capacity(free.size());
    for e in 0..free.size() {
        let parts = free
            .decomposition(e)
            .iter()
            .map(|t| eval_in_target(t, fa, target, &env))
            .collect::<Result<Vec<_>>>()?;
        let v = match target.join_all(parts) {
            Some(v) => v,
            None => return Err(Error::MissingConstant("zero")),
        };
        map.push(v);
    }
    let hom = Homomorphism { map };
    if let Some(w) = hom_failure(fa, target.algebra(), &symbols, &hom.map) {
        return Err(Error::NotHomomorphism(w));
    }
    if let Some((g, e)) = free.generators().iter().find(|(g, e)| hom.map[*e] != env[g.as_str()]) {
        return Err(Error::NotHomomorphism(format!(
            "generator {g} ({}) maps to {}, not to its prescribed image",
            fa.label(*e),
            target.algebra().label(hom.map[*e])
        )));
    }
    Ok(hom)
}

fn hom_failure(fa: &FiniteAlgebra, ta: &FiniteAlgebra, symbols: &SymbolMap, map: &[Elem]) -> Option<String> {
    for &(i, c) in &symbols.constants {
        let v = map[fa.apply(i, &[])];
        if v != c {
            return Some(format!(
                "constant {} maps to {}, expected {}",
                fa.symbol(i),
                ta.label(v),
                ta.label(c)
            ));
        }
    }
    for &(i, j) in &symbols.ops {
        let k = fa.arity(i);
        let mut failure = None;
        let mut image = vec![0; k];
        for_each_tuple(fa.size(), k, |args| {
            if failure.is_some() {
                return;
            }
            for (m, &a) in image.iter_mut().zip(args) {
                *m = map[a];
            }
            let (l, r) = (map[fa.apply(i, args)], ta.apply(j, &image));
            if l != r {
                let shown: Vec<&str> = args.iter().map(|&a| fa.label(a)).collect();
                failure = Some(format!(
                    "h({}({})) = {} but {}(h …) = {}",
                    fa.symbol(i),
                    shown.join(", "),
                    ta.label(l),
                    ta.symbol(j),
                    ta.label(r)
                ));
            }
        });
        if failure.is_some() {
            return failure;
        }
    }
    None
}

/// Number of homomorphisms from the free model to the target that agree
/// with `h` on the generators, counted by exhaustive backtracking and
/// stopping once `stop_at` are found.
pub fn count_extensions(
    free: &FreeModel,
    h: &HashMap<String, Elem>,
    target: &SloAlgebra,
    stop_at: usize,
) -> Result<usize> {
    let symbols = match_symbols(free, target)?;
    let (fa, ta) = (free.algebra(), target.algebra());
    let n = fa.size();
    let mut fixed: Vec<Option<Elem>> = vec![None; n];
    for (g, e) in free.generators() {
        let v = *h
            .get(g)
            .ok_or_else(|| Error::Precondition(format!("the generator map has no image for `{g}`")))?;
        match fixed[*e] {
            Some(w) if w != v => return Ok(0),
            _ => fixed[*e] = Some(v),
        }
    }
    for &(i, c) in &symbols.constants {
        let e = fa.apply(i, &[]);
        match fixed[e] {
            Some(w) if w != c => return Ok(0),
            _ => fixed[e] = Some(c),
        }
    }
    // Assign in generation order so each new element is pinned early.
    let mut order: Vec<Elem> = (0..n).filter(|&e| fixed[e].is_some()).collect();
    let mut seen: Vec<bool> = fixed.iter().map(Option::is_some).collect();
    loop {
        let mut fresh = Vec::new();
        for &(i, _) in &symbols.ops {
            for_each_tuple(order.len(), fa.arity(i), |idx| {
                let args: Vec<Elem> = idx.iter().map(|&x| order[x]).collect();
                let r = fa.apply(i, &args);
                if !seen[r] {
                    seen[r] = true;
                    fresh.push(r);
                }
            });
        }
        if fresh.is_empty() {
            break;
        }
        order.extend(fresh);
    }
    order.extend((0..n).filter(|&e| !seen[e]));

    let mut assigned: Vec<Option<Elem>> = vec![None; n];
    let mut count = 0;
    search(fa, ta, &symbols, &order, &fixed, 0, &mut assigned, &mut count, stop_at);
    Ok(count)
}

#[allow(clippy::too_many_arguments)]
fn search(
    fa: &FiniteAlgebra,
    ta: &FiniteAlgebra,
    symbols: &SymbolMap,
    order: &[Elem],
    fixed: &[Option<Elem>],
    depth: usize,
    assigned: &mut Vec<Option<Elem>>,
    count: &mut usize,
    stop_at: usize,
) {
    if *count >= stop_at {
        return;
    }
    if depth == order.len() {
        *count += 1;
        return;
    }
    let e = order[depth];
    let candidates: Vec<Elem> = match fixed[e] {
        Some(v) => vec![v],
        None => (0..ta.size()).collect(),
    };
    for v in candidates {
        assigned[e] = Some(v);
        if consistent(fa, ta, symbols, assigned, e) {
            search(fa, ta, symbols, order, fixed, depth + 1, assigned, count, stop_at);
        }
        assigned[e] = None;
    }
}

/// Checks every fully assigned operation instance that involves `e`.
fn consistent(fa: &FiniteAlgebra, ta: &FiniteAlgebra, symbols: &SymbolMap, assigned: &[Option<Elem>], e: Elem) -> bool {
    let done: Vec<Elem> = (0..fa.size()).filter(|&x| assigned[x].is_some()).collect();
    for &(i, j) in &symbols.ops {
        let k = fa.arity(i);
        let mut ok = true;
        let mut image = vec![0; k];
        for_each_tuple(done.len(), k, |idx| {
            if !ok {
                return;
            }
            let args: Vec<Elem> = idx.iter().map(|&x| done[x]).collect();
            let r = fa.apply(i, &args);
            if !args.contains(&e) && r != e {
                return;
            }
            if let Some(rv) = assigned[r] {
                for (m, &a) in image.iter_mut().zip(&args) {
                    *m = assigned[a].unwrap();
                }
                ok = ta.apply(j, &image) == rv;
            }
        });
        if !ok {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::free::{free_cdis, free_slo_over_semilattices};
    use crate::limits::Limits;
    use crate::power::{build_power, PowerVariant};

    fn lattice(n: usize) -> SloAlgebra {
        SloAlgebra::from_designated(&catalog::chain_lattice(n)).unwrap()
    }

    #[test]
    fn cdis_one_generator_into_two_chain() {
        let free = free_cdis(&["x"], &Limits::default()).unwrap();
        let target = lattice(2);
        let hom = extend_hom(&free, &[("x", "0")], &target).unwrap();
        let shown = hom.labelled(free.algebra(), target.algebra());
        assert_eq!(shown, [("⟨⟩", "0"), ("⟨x⟩", "0"), ("⟨⟩+1", "1"), ("⟨x⟩+1", "1")]);
        let hom = extend_hom(&free, &[("x", "1")], &target).unwrap();
        assert_eq!(hom.map, [0, 1, 1, 1]);
        assert_eq!(hom.labelled(free.algebra(), target.algebra())[1], ("⟨x⟩", "1"));
    }

    #[test]
    fn identity_extension() {
        let free = free_cdis(&["x", "y"], &Limits::default()).unwrap();
        let me = free.slo().clone();
        let h: HashMap<String, Elem> = free.generators().iter().cloned().collect();
        let hom = extend_hom_elems(&free, &h, &me).unwrap();
        assert_eq!(hom.map, (0..free.size()).collect::<Vec<_>>());
    }

    #[test]
    fn uniqueness_count() {
        let free = free_cdis(&["x"], &Limits::default()).unwrap();
        let target = lattice(3);
        for v in 0..3 {
            let h = HashMap::from([("x".to_string(), v)]);
            assert_eq!(count_extensions(&free, &h, &target, 5).unwrap(), 1);
        }
    }

    #[test]
    fn missing_zero_is_rejected() {
        let free = free_slo_over_semilattices(&["x"], PowerVariant::WithEmpty, &Limits::default()).unwrap();
        let target = build_power(
            &catalog::chain_semilattice(2),
            PowerVariant::Nonempty,
            &Limits::default(),
        )
        .unwrap()
        .into_slo();
        let err = extend_hom(&free, &[("x", "{0}")], &target).unwrap_err();
        assert!(matches!(err, Error::MissingConstant("zero")));
    }

    #[test]
    fn non_idempotent_target_is_rejected_with_witness() {
        let free = free_slo_over_semilattices(&["x", "y"], PowerVariant::Nonempty, &Limits::default()).unwrap();
        let fan = build_power(&catalog::fan_semilattice(), PowerVariant::Nonempty, &Limits::default())
            .unwrap()
            .into_slo();
        assert!(extend_hom(&free, &[("x", "{a}"), ("y", "{b}")], &fan).is_ok());
        let err = extend_hom(&free, &[("x", "{a,b}"), ("y", "{b}")], &fan).unwrap_err();
        assert!(matches!(err, Error::NotHomomorphism(_)));
    }

    #[test]
    fn partial_map_is_rejected() {
        let free = free_cdis(&["x", "y"], &Limits::default()).unwrap();
        assert!(extend_hom(&free, &[("x", "0")], &lattice(2)).is_err());
        assert!(extend_hom(&free, &[("x", "0"), ("y", "0"), ("z", "1")], &lattice(2)).is_err());
    }
}
