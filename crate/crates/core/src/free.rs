//! Finite free objects: free semilattices (with and without unit), power
//! algebras over them as free SLO models, the free commutative
//! doubly-idempotent semiring, and cardinality reports.

use std::collections::HashMap;

use serde::Serialize;

use crate::algebra::{for_each_tuple, Counterexample, Elem, FiniteAlgebra};
use crate::closure::{enumerate_subalgebras, reduced_subsets};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::parse::parse_identity;
use crate::power::{build_power, PowerVariant};
use crate::signature::Signature;
use crate::slo::SloAlgebra;
use crate::term::{Identity, Term};

/// `x, y, z, w` for up to four generators, `x1, …, xn` beyond.
pub fn default_generators(n: usize) -> Vec<String> {
    if n <= 4 {
        ["x", "y", "z", "w"][..n].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=n).map(|i| format!("x{i}")).collect()
    }
}

fn check_generators(gens: &[&str]) -> Result<()> {
    for (i, g) in gens.iter().enumerate() {
        if gens[..i].contains(g) {
            return Err(Error::Precondition(format!("generator `{g}` listed twice")));
        }
        if g.is_empty() || g == &"1" {
            return Err(Error::Precondition(format!("`{g}` cannot name a generator")));
        }
    }
    Ok(())
}

/// Label of the free-semilattice element with generator mask `m`: names are
/// concatenated when all are single characters (`xy`), else joined by `*`.
fn sl_label(gens: &[&str], mask: u64) -> String {
    let parts: Vec<&str> = (0..gens.len())
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| gens[i])
        .collect();
    let sep = if gens.iter().all(|g| g.chars().count() == 1) {
        ""
    } else {
        "*"
    };
    parts.join(sep)
}

/// The product of the generators in `mask`, nested to the right.
fn sl_term(gens: &[&str], mask: u64) -> Term {
    let mut vars: Vec<Term> = (0..gens.len())
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| Term::var(gens[i]))
        .collect();
    let mut t = vars.pop().expect("non-empty mask");
    while let Some(v) = vars.pop() {
        t = Term::bin("mul", v, t);
    }
    t
}

fn sl_carrier(gens: &[&str]) -> Result<Vec<u64>> {
    check_generators(gens)?;
    if gens.len() >= 63 {
        return Err(Error::CapExceeded {
            what: "free semilattice generators",
            requested: gens.len(),
            limit: 62,
        });
    }
    Limits::from_env().check_carrier((1usize << gens.len()) - 1)?;
    Ok((1..1u64 << gens.len()).collect())
}

/// `F_SL(X)`: non-empty subsets of X under union, written multiplicatively
/// as `mul`. Element `i` is the subset with generator mask `i + 1`.
pub fn free_semilattice(gens: &[&str]) -> Result<FiniteAlgebra> {
    if gens.is_empty() {
        return Err(Error::Precondition(
            "the free semilattice on no generators is empty; use free_semilattice_unit".into(),
        ));
    }
    let masks = sl_carrier(gens)?;
    let labels = masks.iter().map(|&m| sl_label(gens, m)).collect();
    let sig = Signature::new("SL").with_op("mul", 2);
    FiniteAlgebra::from_fn(sig, labels, |_, a| ((a[0] as u64 + 1) | (a[1] as u64 + 1)) as usize - 1)
}

/// `F_SL(X)` with a unit `1` adjoined as the last element, named by the
/// designated constant `one`.
pub fn free_semilattice_unit(gens: &[&str]) -> Result<FiniteAlgebra> {
    let masks = sl_carrier(gens)?;
    let one = masks.len();
    let mut labels: Vec<String> = masks.iter().map(|&m| sl_label(gens, m)).collect();
    labels.push("1".into());
    let mut sig = Signature::new("SL1").with_op("mul", 2);
    sig.designate_unit("one")?;
    FiniteAlgebra::from_fn(sig, labels, |op, a| match (op, a) {
        (1, _) => one,
        (_, [x, y]) if *x == one => *y,
        (_, [x, y]) if *y == one => *x,
        (_, [x, y]) => ((*x as u64 + 1) | (*y as u64 + 1)) as usize - 1,
        _ => unreachable!(),
    })
}

/// Associativity, commutativity and idempotency of `mul`.
pub fn semilattice_identities(sig: &Signature) -> Result<Vec<Identity>> {
    [
        "mul(x, mul(y, z)) = mul(mul(x, y), z)",
        "mul(x, y) = mul(y, x)",
        "mul(x, x) = x",
    ]
    .iter()
    .map(|s| parse_identity(s, sig))
    .collect()
}

/// A finite SLO algebra together with its free generators and, for every
/// element, the Ω-terms over the generators whose join it is.
#[derive(Clone, Debug)]
pub struct FreeModel {
    underlying: SloAlgebra,
    generators: Vec<(String, Elem)>,
    decomposition: Vec<Vec<Term>>,
}

impl FreeModel {
    pub fn new(underlying: SloAlgebra, generators: Vec<(String, Elem)>, decomposition: Vec<Vec<Term>>) -> Result<Self> {
        if decomposition.len() != underlying.size() {
            return Err(Error::InvalidAlgebra(format!(
                "{} decompositions for {} elements",
                decomposition.len(),
                underlying.size()
            )));
        }
        if let Some((g, _)) = generators.iter().find(|(_, e)| *e >= underlying.size()) {
            return Err(Error::UnknownElement(g.clone()));
        }
        Ok(FreeModel {
            underlying,
            generators,
            decomposition,
        })
    }

    pub fn slo(&self) -> &SloAlgebra {
        &self.underlying
    }

    pub fn algebra(&self) -> &FiniteAlgebra {
        self.underlying.algebra()
    }

    pub fn size(&self) -> usize {
        self.underlying.size()
    }

    pub fn generators(&self) -> &[(String, Elem)] {
        &self.generators
    }

    pub fn generator_elems(&self) -> Vec<Elem> {
        self.generators.iter().map(|(_, e)| *e).collect()
    }

    pub fn decomposition(&self, e: Elem) -> &[Term] {
        &self.decomposition[e]
    }

    /// Evaluates a decomposition part with the generators bound to their elements.
    pub fn eval_part(&self, t: &Term) -> Result<Elem> {
        let env: HashMap<String, Elem> = self.generators.iter().cloned().collect();
        self.algebra().eval_term(t, &env)
    }

    /// The first element whose decomposition does not re-join to it, or has
    /// a part outside the full Ω-subreduct of the generators.
    pub fn decomposition_failure(&self) -> Result<Option<String>> {
        let sub = self.underlying.full_subreduct(&self.generator_elems());
        let alg = self.algebra();
        for e in 0..self.size() {
            let mut parts = Vec::new();
            for t in &self.decomposition[e] {
                let p = self.eval_part(t)?;
                if !sub.contains(&p) {
                    return Ok(Some(format!(
                        "part `{t}` of {} evaluates to {}, outside the full subreduct",
                        alg.label(e),
                        alg.label(p)
                    )));
                }
                parts.push(p);
            }
            match self.underlying.join_all(parts) {
                Some(j) if j == e => {}
                Some(j) => {
                    return Ok(Some(format!("parts of {} re-join to {}", alg.label(e), alg.label(j))));
                }
                None => return Ok(Some(format!("{} has no parts and the model has no zero", alg.label(e)))),
            }
        }
        Ok(None)
    }
}

/// Terms over the generators for every base element, found breadth-first
/// through the Ω-operations. The designated unit is named by its constant.
fn base_terms(base: &FiniteAlgebra, gens: &[(String, Elem)]) -> Result<Vec<Term>> {
    let n = base.size();
    let mut terms: Vec<Option<Term>> = vec![None; n];
    let mut known = Vec::new();
    for (g, e) in gens {
        if terms[*e].is_none() {
            terms[*e] = Some(Term::var(g.clone()));
            known.push(*e);
        }
    }
    if let (Some(u), Some(sym)) = (base.unit(), base.signature().unit_symbol()) {
        if terms[u].is_none() {
            terms[u] = Some(Term::constant(sym));
            known.push(u);
        }
    }
    let ops = base.omega_ops();
    loop {
        let mut fresh = Vec::new();
        for &op in &ops {
            let k = base.arity(op);
            for_each_tuple(known.len(), k, |idx| {
                let args: Vec<Elem> = idx.iter().map(|&i| known[i]).collect();
                let r = base.apply(op, &args);
                if terms[r].is_none() {
                    let sub = args.iter().map(|&a| terms[a].clone().unwrap()).collect();
                    terms[r] = Some(Term::app(base.symbol(op), sub));
                    fresh.push(r);
                }
            });
        }
        if fresh.is_empty() {
            break;
        }
        known.extend(fresh);
    }
    terms
        .into_iter()
        .enumerate()
        .map(|(e, t)| {
            t.ok_or_else(|| Error::NotGenerating {
                target: base.label(e).to_string(),
                achieved: format!("{} of {} elements", known.len(), n),
            })
        })
        .collect()
}

/// The power algebra of `base` as a free model over singleton generators.
pub fn free_power_model(
    base: &FiniteAlgebra,
    gens: &[(String, Elem)],
    variant: PowerVariant,
    limits: &Limits,
) -> Result<FreeModel> {
    let terms = base_terms(base, gens)?;
    let power = build_power(base, variant, limits)?;
    let generators = gens
        .iter()
        .map(|(g, e)| {
            (
                g.clone(),
                power.element_of(&crate::subset::SubsetElem::singleton(*e)).unwrap(),
            )
        })
        .collect();
    let decomposition = power
        .subsets()
        .iter()
        .map(|s| s.members().iter().map(|&m| terms[m].clone()).collect())
        .collect();
    FreeModel::new(power.into_slo(), generators, decomposition)
}

/// The power-of-free model for a free semilattice variant: non-empty subsets
/// of `F_SL(X)`, optionally with `∅`, and for unit variants over `F_SL₁(X)`.
pub fn free_slo_over_semilattices(gens: &[&str], variant: PowerVariant, limits: &Limits) -> Result<FreeModel> {
    let base = if variant.has_unit() {
        free_semilattice_unit(gens)?
    } else {
        free_semilattice(gens)?
    };
    let pairs: Vec<(String, Elem)> = gens
        .iter()
        .enumerate()
        .map(|(i, g)| (g.to_string(), (1usize << i) - 1))
        .collect();
    free_power_model(&base, &pairs, variant, limits)
}

/// The non-empty power model over `base_free`, plus whether its Ω-reduct
/// satisfies `identities` (the identities of the base variety).
#[derive(Clone, Debug)]
pub struct FreeSloNonempty {
    pub model: FreeModel,
    pub in_variety: bool,
    pub failure: Option<(Identity, Counterexample)>,
}

/// The universality carrier built on non-empty subsets of `base_free`. The
/// model is returned even when it falls outside the variety; `failure`
/// carries the first identity that does not lift, with its witness.
pub fn free_slo_nonempty(
    base_free: &FiniteAlgebra,
    gens: &[(String, Elem)],
    identities: &[Identity],
    limits: &Limits,
) -> Result<FreeSloNonempty> {
    let model = free_power_model(base_free, gens, PowerVariant::Nonempty, limits)?;
    let mut failure = None;
    for id in identities {
        if let Some(cx) = model.algebra().satisfies(id)? {
            failure = Some((id.clone(), cx));
            break;
        }
    }
    Ok(FreeSloNonempty {
        model,
        in_variety: failure.is_none(),
        failure,
    })
}

fn union_close(fam: u64) -> u64 {
    // family over F_SL elements 0..m, element i ↔ generator mask i+1
    let mut f = fam;
    loop {
        let mut g = f;
        let mut a = f;
        while a != 0 {
            let i = a.trailing_zeros() as usize;
            a &= a - 1;
            let mut b = f;
            while b != 0 {
                let j = b.trailing_zeros() as usize;
                b &= b - 1;
                g |= 1 << (((i + 1) | (j + 1)) - 1);
            }
        }
        if g == f {
            return f;
        }
        f = g;
    }
}

fn union_closed_families(n: usize, limits: &Limits) -> Result<Vec<u64>> {
    if n > limits.max_generators {
        return Err(Error::CapExceeded {
            what: "free CDIS generators",
            requested: n,
            limit: limits.max_generators,
        });
    }
    let m = (1usize << n) - 1;
    limits.check_subsets(m)?;
    let mut out: Vec<u64> = (0u64..1 << m).filter(|&f| union_close(f) == f).collect();
    out.sort_by_key(|&f| (f.count_ones(), bits(f)));
    Ok(out)
}

fn bits(f: u64) -> Vec<u32> {
    let mut v = Vec::new();
    let mut a = f;
    while a != 0 {
        v.push(a.trailing_zeros());
        a &= a - 1;
    }
    v
}

/// `|F_CDIS(X)|` for `|X| = n`, counted without building the model.
pub fn free_cdis_count(n: usize, limits: &Limits) -> Result<usize> {
    Ok(2 * union_closed_families(n, limits)?.len())
}

/// The free commutative doubly-idempotent semiring with 0 and 1 over `gens`.
///
/// Elements are pairs `(S, m)`: `S` a subalgebra of `F_SL(X)` (possibly empty)
/// and `m` a marker for the unit. With `C·D = {cd}`,
/// `(C,m)·(D,n) = (⟨C·D ∪ [n]C ∪ [m]D⟩, m∧n)` and `(C,m)+(D,n) = (⟨C∪D⟩, m∨n)`;
/// zero is `(∅, no)` and the unit `(∅, yes)`. Elements are ordered by the size
/// of `S ∪ [m]{1}`, then by members with `1` last, and labelled `⟨x,xy⟩+1`.
pub fn free_cdis(gens: &[&str], limits: &Limits) -> Result<FreeModel> {
    check_generators(gens)?;
    let n = gens.len();
    let fams = union_closed_families(n, limits)?;
    limits.check_carrier(2 * fams.len())?;

    let mut elems: Vec<(u64, bool)> = fams.iter().flat_map(|&f| [(f, false), (f, true)]).collect();
    let key = |&(f, u): &(u64, bool)| {
        let mut b: Vec<u32> = bits(f);
        if u {
            b.push(u32::MAX);
        }
        (b.len(), b)
    };
    elems.sort_by_key(key);
    let index: HashMap<(u64, bool), Elem> = elems.iter().enumerate().map(|(i, &p)| (p, i)).collect();

    let labels: Vec<String> = elems
        .iter()
        .map(|&(f, u)| {
            let parts: Vec<String> = bits(f).iter().map(|&i| sl_label(gens, i as u64 + 1)).collect();
            format!("⟨{}⟩{}", parts.join(","), if u { "+1" } else { "" })
        })
        .collect();

    let mut sig = Signature::new(format!("CDIS{n}")).with_op("mul", 2);
    sig.designate_join("join")?;
    sig.designate_zero("zero")?;
    sig.designate_unit("one")?;
    let times = |c: u64, d: u64| {
        let mut p = 0u64;
        for i in bits(c) {
            for j in bits(d) {
                p |= 1 << (((i + 1) | (j + 1)) - 1);
            }
        }
        p
    };
    let alg = FiniteAlgebra::from_fn(sig, labels, |op, a| {
        let r = match op {
            0 => {
                let ((c, mu), (d, nu)) = (elems[a[0]], elems[a[1]]);
                let mut s = times(c, d);
                if nu {
                    s |= c;
                }
                if mu {
                    s |= d;
                }
                (union_close(s), mu && nu)
            }
            1 => {
                let ((c, mu), (d, nu)) = (elems[a[0]], elems[a[1]]);
                (union_close(c | d), mu || nu)
            }
            2 => (0, false),
            _ => (0, true),
        };
        index[&r]
    })?;

    let generators = gens
        .iter()
        .enumerate()
        .map(|(i, g)| (g.to_string(), index[&(1u64 << ((1usize << i) - 1), false)]))
        .collect();
    let decomposition = elems
        .iter()
        .map(|&(f, u)| {
            let mut parts: Vec<Term> = bits(f).iter().map(|&i| sl_term(gens, i as u64 + 1)).collect();
            if u {
                parts.push(Term::constant("one"));
            }
            parts
        })
        .collect();
    FreeModel::new(SloAlgebra::new_unchecked(alg), generators, decomposition)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CardinalityReport {
    pub n_generators: usize,
    pub n_free_sl_elements: usize,
    pub n_subalgebras_incl_empty: usize,
    pub n_reduced_subsets: usize,
    pub n_free_cdis: usize,
    pub bound_2_2n: u64,
}

impl CardinalityReport {
    /// `|F_CDIS| = 2·#subalgebras = 2·#reduced ≤ 2^(2^n)`.
    pub fn consistent(&self) -> bool {
        self.n_free_cdis == 2 * self.n_subalgebras_incl_empty
            && self.n_subalgebras_incl_empty == self.n_reduced_subsets
            && self.n_free_cdis as u64 <= self.bound_2_2n
    }
}

/// Counts for `|X| = n`. Subalgebras and reduced subsets are scanned on
/// `F_SL(X)`; the CDIS size comes from the model when it fits the carrier
/// cap and from a direct family count otherwise.
pub fn cardinality_report(n: usize, limits: &Limits) -> Result<CardinalityReport> {
    if n > limits.max_generators {
        return Err(Error::CapExceeded {
            what: "free CDIS generators",
            requested: n,
            limit: limits.max_generators,
        });
    }
    let gens = default_generators(n);
    let g: Vec<&str> = gens.iter().map(String::as_str).collect();
    let (n_sl, n_sub, n_red) = if n == 0 {
        // F_SL(∅) is empty: its only subalgebra, and only reduced subset, is ∅
        (0, 1, 1)
    } else {
        let sl = free_semilattice(&g)?;
        (
            sl.size(),
            enumerate_subalgebras(&sl, true, limits)?.len(),
            reduced_subsets(&sl, limits)?.len(),
        )
    };
    let n_cdis = match free_cdis(&g, limits) {
        Ok(model) => model.size(),
        Err(Error::CapExceeded { .. }) => free_cdis_count(n, limits)?,
        Err(e) => return Err(e),
    };
    Ok(CardinalityReport {
        n_generators: n,
        n_free_sl_elements: n_sl,
        n_subalgebras_incl_empty: n_sub,
        n_reduced_subsets: n_red,
        n_free_cdis: n_cdis,
        bound_2_2n: 1u64 << (1u64 << n),
    })
}

/// The free normal band on `gens` as triples `(head, content, tail)` with
/// `(a,S,b)(c,T,d) = (a, S∪T, d)`, accepted only after agreeing with a
/// bounded word-rewriting oracle.
#[cfg(feature = "normal-band")]
pub fn free_normal_band(gens: &[&str]) -> Result<FiniteAlgebra> {
    check_generators(gens)?;
    let n = gens.len();
    if n == 0 || n > 3 {
        // the oracle enumerates all words up to length 2n+2; four letters is already ~1.4M words
        return Err(Error::Precondition(
            "the normal-band construction takes 1 to 3 generators".into(),
        ));
    }
    let mut triples = Vec::new();
    for s in 1u64..1 << n {
        for a in bits(s) {
            for b in bits(s) {
                triples.push((a as usize, s, b as usize));
            }
        }
    }
    let index: HashMap<(usize, u64, usize), Elem> = triples.iter().enumerate().map(|(i, &t)| (t, i)).collect();
    let labels = triples
        .iter()
        .map(|&(a, s, b)| format!("({},{},{})", gens[a], sl_label(gens, s), gens[b]))
        .collect();
    let sig = Signature::new("NB").with_op("mul", 2);
    let alg = FiniteAlgebra::from_fn(sig, labels, |_, x| {
        let ((a, s, _), (_, t, d)) = (triples[x[0]], triples[x[1]]);
        index[&(a, s | t, d)]
    })?;
    let oracle = normal_band_oracle(n);
    // evaluation map: word → triple
    let eval = |w: &[usize]| -> Elem {
        let s = w.iter().fold(0u64, |m, &g| m | 1 << g);
        index[&(w[0], s, *w.last().unwrap())]
    };
    let mut image: HashMap<Elem, usize> = HashMap::new();
    for (class, w) in oracle.iter().enumerate() {
        if let Some(prev) = image.insert(eval(w), class) {
            if prev != class {
                return Err(Error::InvalidAlgebra(format!(
                    "two normal-band classes evaluate to the same triple (size {n})"
                )));
            }
        }
    }
    if image.len() != alg.size() {
        return Err(Error::InvalidAlgebra(format!(
            "oracle finds {} classes, the triple algebra has {} elements",
            image.len(),
            alg.size()
        )));
    }
    Ok(alg)
}

/// One representative word per class of words over `n` letters (length at
/// most `2n+2`) under the congruence generated by `uu = u` and
/// `abcd = acbd`, applied to factors within the length bound.
#[cfg(feature = "normal-band")]
fn normal_band_oracle(n: usize) -> Vec<Vec<usize>> {
    let max_len = 2 * n + 2;
    let mut words: Vec<Vec<usize>> = Vec::new();
    let mut frontier: Vec<Vec<usize>> = (0..n).map(|g| vec![g]).collect();
    while !frontier.is_empty() {
        words.extend(frontier.iter().cloned());
        frontier = frontier
            .iter()
            .filter(|w| w.len() < max_len)
            .flat_map(|w| {
                (0..n).map(move |g| {
                    let mut v = w.clone();
                    v.push(g);
                    v
                })
            })
            .collect();
    }
    let id: HashMap<Vec<usize>, usize> = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
    let mut parent: Vec<usize> = (0..words.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (i, w) in words.iter().enumerate() {
        let len = w.len();
        // uu → u for every factor uu
        for start in 0..len {
            for half in 1..=(len - start) / 2 {
                if w[start..start + half] == w[start + half..start + 2 * half] {
                    let mut v = w[..start + half].to_vec();
                    v.extend_from_slice(&w[start + 2 * half..]);
                    let (a, b) = (find(&mut parent, i), find(&mut parent, id[&v]));
                    parent[a] = b;
                }
            }
        }
        // abcd → acbd for factors a, b, c, d of any lengths
        for s in 0..len {
            for e in s + 4..=len {
                let f = &w[s..e];
                for i1 in 1..f.len() {
                    for i2 in i1 + 1..f.len() {
                        for i3 in i2 + 1..f.len() {
                            let mut v = w[..s].to_vec();
                            v.extend_from_slice(&f[..i1]);
                            v.extend_from_slice(&f[i2..i3]);
                            v.extend_from_slice(&f[i1..i2]);
                            v.extend_from_slice(&f[i3..]);
                            v.extend_from_slice(&w[e..]);
                            let (a, b) = (find(&mut parent, i), find(&mut parent, id[&v]));
                            parent[a] = b;
                        }
                    }
                }
            }
        }
    }
    let mut reps: HashMap<usize, Vec<usize>> = HashMap::new();
    for (i, w) in words.iter().enumerate() {
        let r = find(&mut parent, i);
        let e = reps.entry(r).or_insert_with(|| w.clone());
        if (w.len(), w) < (e.len(), &*e) {
            *e = w.clone();
        }
    }
    let mut out: Vec<Vec<usize>> = reps.into_values().collect();
    out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closure::quotient_by_rho;

    fn l() -> Limits {
        Limits::default()
    }

    #[test]
    fn free_semilattice_shapes() {
        let f = free_semilattice(&["x", "y"]).unwrap();
        assert_eq!(f.labels(), ["x", "y", "xy"]);
        assert_eq!(free_semilattice(&["x"]).unwrap().size(), 1);
        assert_eq!(free_semilattice(&["x", "y", "z"]).unwrap().size(), 7);
        assert!(free_semilattice(&[]).is_err());
        assert!(free_semilattice(&["x", "x"]).is_err());
        let g = free_semilattice(&["a1", "b"]).unwrap();
        assert_eq!(g.label(2), "a1*b");
    }

    #[test]
    fn free_semilattice_unit_shapes() {
        let e = free_semilattice_unit(&[]).unwrap();
        assert_eq!(e.labels(), ["1"]);
        let f = free_semilattice_unit(&["x"]).unwrap();
        assert_eq!(f.size(), 2);
        assert_eq!(f.units(), vec![1]);
        assert_eq!(f.unit(), Some(1));
        let ids = semilattice_identities(f.signature()).unwrap();
        assert!(ids.iter().all(|id| f.holds(id).unwrap()));
    }

    #[test]
    fn example_power_of_free_semilattice_leaves_the_variety() {
        let f = free_semilattice(&["x", "y"]).unwrap();
        let ids = semilattice_identities(f.signature()).unwrap();
        let gens = vec![("x".to_string(), 0), ("y".to_string(), 1)];
        let r = free_slo_nonempty(&f, &gens, &ids, &l()).unwrap();
        assert!(!r.in_variety);
        let (id, cx) = r.failure.unwrap();
        assert_eq!(id.to_string(), "mul(x, x) = x");
        assert_eq!(cx.assignment["x"], "{x,y}");
        assert_eq!(cx.lhs, "{x,y,xy}");

        let f1 = free_semilattice(&["x"]).unwrap();
        let r = free_slo_nonempty(&f1, &gens[..1], &ids, &l()).unwrap();
        assert!(r.in_variety);
    }

    #[test]
    fn cdis_sizes() {
        let sizes: Vec<usize> = (0..=3)
            .map(|n| {
                free_cdis(
                    &default_generators(n).iter().map(String::as_str).collect::<Vec<_>>(),
                    &l(),
                )
                .unwrap()
                .size()
            })
            .collect();
        assert_eq!(sizes, [2, 4, 14, 122]);
        assert_eq!(free_cdis_count(4, &l()).unwrap(), 4960);
        assert!(matches!(
            free_cdis(&["x", "y", "z", "w"], &l()),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn cdis_small_carriers() {
        let c0 = free_cdis(&[], &l()).unwrap();
        assert_eq!(c0.algebra().labels(), ["⟨⟩", "⟨⟩+1"]);
        let c1 = free_cdis(&["x"], &l()).unwrap();
        assert_eq!(c1.algebra().labels(), ["⟨⟩", "⟨x⟩", "⟨⟩+1", "⟨x⟩+1"]);
        assert_eq!(c1.slo().zero(), Some(0));
        assert_eq!(c1.slo().unit(), Some(2));
    }

    #[test]
    fn cdis_is_a_valid_slo_and_matches_the_quotient() {
        for n in 0..=2 {
            let gens = default_generators(n);
            let g: Vec<&str> = gens.iter().map(String::as_str).collect();
            let c = free_cdis(&g, &l()).unwrap();
            let checked = SloAlgebra::from_designated(c.algebra()).unwrap();
            assert!(checked.algebra().is_idempotent());
            let base = free_semilattice_unit(&g).unwrap();
            let q = quotient_by_rho(&build_power(&base, PowerVariant::WithEmptyAndUnit, &l()).unwrap()).unwrap();
            assert_eq!(q.algebra().labels(), c.algebra().labels());
            for op in 0..4 {
                assert_eq!(q.algebra().table(op), c.algebra().table(op), "n={n} op={op}");
            }
            assert_eq!(c.decomposition_failure().unwrap(), None);
        }
    }

    #[test]
    fn power_models_decompose() {
        for v in PowerVariant::ALL {
            let m = free_slo_over_semilattices(&["x", "y"], v, &l()).unwrap();
            assert_eq!(m.decomposition_failure().unwrap(), None, "{v}");
        }
    }

    #[test]
    fn reports() {
        let r = cardinality_report(2, &l()).unwrap();
        assert_eq!(
            (
                r.n_free_sl_elements,
                r.n_subalgebras_incl_empty,
                r.n_reduced_subsets,
                r.n_free_cdis,
                r.bound_2_2n
            ),
            (3, 7, 7, 14, 16)
        );
        let r = cardinality_report(0, &l()).unwrap();
        assert_eq!(
            (
                r.n_subalgebras_incl_empty,
                r.n_reduced_subsets,
                r.n_free_cdis,
                r.bound_2_2n
            ),
            (1, 1, 2, 2)
        );
        assert!(r.consistent());
        assert!(cardinality_report(5, &l()).is_err());
    }

    #[cfg(feature = "normal-band")]
    #[test]
    fn normal_band() {
        assert_eq!(free_normal_band(&["x"]).unwrap().size(), 1);
        let nb = free_normal_band(&["x", "y"]).unwrap();
        assert_eq!(nb.size(), 6);
        let sig = nb.signature().clone();
        for s in [
            "mul(x, mul(y, z)) = mul(mul(x, y), z)",
            "mul(x, x) = x",
            "mul(mul(mul(a, b), c), d) = mul(mul(mul(a, c), b), d)",
        ] {
            assert!(nb.holds(&parse_identity(s, &sig).unwrap()).unwrap(), "{s}");
        }
    }
}
