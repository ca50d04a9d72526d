//! Desk-check suites over enumerated and constructed algebras. Every failing
//! entry carries a concrete witness.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::algebra::{Elem, FiniteAlgebra};
use crate::catalog;
use crate::closure::enumerate_subalgebras;
use crate::enumerate::enumerate_models;
use crate::error::{Error, Result};
use crate::free::{cardinality_report, default_generators, free_cdis, free_slo_over_semilattices, FreeModel};
use crate::hom::{count_extensions, extend_hom_elems};
use crate::limits::Limits;
use crate::parse::parse_identity;
use crate::power::{build_power, PowerVariant};
use crate::signature::Signature;
use crate::slo::SloAlgebra;
use crate::term::{linear_preimages, Identity};

/// Free CDIS sizes for 0..=4 generators, pinned by a subset-filter oracle
/// (twice the number of union-closed families on the non-empty subsets).
pub const FREE_CDIS_SIZES: [usize; 5] = [2, 4, 14, 122, 4960];

/// Targets at most this large get the exhaustive uniqueness check.
pub const UNIQUENESS_MAX_TARGET: usize = 8;

#[derive(Clone, Debug, Serialize)]
pub struct SuiteEntry {
    pub instance: String,
    pub pass: bool,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub instances: usize,
    pub passed: usize,
    pub failed: usize,
    pub entries: Vec<SuiteEntry>,
    /// Not serialized, so JSON reports stay byte-identical across runs.
    #[serde(skip)]
    pub wall_time: Duration,
}

impl SuiteReport {
    fn new(suite: &str) -> Self {
        SuiteReport {
            suite: suite.into(),
            instances: 0,
            passed: 0,
            failed: 0,
            entries: Vec::new(),
            wall_time: Duration::ZERO,
        }
    }

    fn pass(&mut self, instance: impl Into<String>, detail: impl Into<String>) {
        self.push(instance.into(), true, detail.into(), None);
    }

    fn fail(&mut self, instance: impl Into<String>, detail: impl Into<String>, witness: impl Into<String>) {
        self.push(instance.into(), false, detail.into(), Some(witness.into()));
    }

    fn push(&mut self, instance: String, pass: bool, detail: String, witness: Option<String>) {
        self.instances += 1;
        if pass {
            self.passed += 1;
        } else {
            self.failed += 1;
        }
        self.entries.push(SuiteEntry {
            instance,
            pass,
            detail,
            witness,
        });
    }

    fn finish(mut self, start: Instant) -> Self {
        self.wall_time = start.elapsed();
        self
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &SuiteEntry> {
        self.entries.iter().filter(|e| !e.pass)
    }
}

fn binary_sig() -> Signature {
    Signature::new("Mul").with_op("mul", 2)
}

fn ids(sig: &Signature) -> Result<[Identity; 3]> {
    Ok([
        parse_identity("mul(x, mul(y, z)) = mul(mul(x, y), z)", sig)?,
        parse_identity("mul(x, y) = mul(y, x)", sig)?,
        parse_identity("mul(x, x) = x", sig)?,
    ])
}

fn table_string(alg: &FiniteAlgebra) -> String {
    let parts: Vec<String> = (0..alg.signature().ops().len())
        .map(|op| {
            let t: Vec<String> = alg
                .table(op)
                .entries()
                .iter()
                .map(|e| alg.label(*e as Elem).to_string())
                .collect();
            format!("{}=[{}]", alg.symbol(op), t.join(","))
        })
        .collect();
    parts.join(" ")
}

fn counterexample(alg: &FiniteAlgebra, id: &Identity) -> Result<Option<String>> {
    Ok(alg.satisfies(id)?.map(|cx| {
        let asg: Vec<String> = cx.assignment.iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!("{} gives {} ≠ {}", asg.join(", "), cx.lhs, cx.rhs)
    }))
}

/// Linear identities lift to power algebras; non-linear ones need not.
///
/// Over every semigroup table up to `max_size`: associativity lifts,
/// commutativity lifts whenever it holds, and idempotency lifts whenever one
/// of its linear preimages holds in the base. The fan semilattice supplies
/// an idempotent base whose power is not idempotent, and none of the linear
/// preimages of idempotency holds there.
pub fn suite_gl(max_size: usize, limits: &Limits) -> Result<SuiteReport> {
    let start = Instant::now();
    let mut r = SuiteReport::new("gl");
    let sig = binary_sig();
    let [assoc, comm, idem] = ids(&sig)?;
    let preimages = linear_preimages(&idem);
    for n in 1..=max_size {
        for (k, base) in enumerate_models(&sig, n, std::slice::from_ref(&assoc), limits)?.enumerate() {
            let name = format!("semigroup n={n} #{k} {}", table_string(&base));
            let power = build_power(&base, PowerVariant::Nonempty, limits)?;
            let p = power.algebra();
            if let Some(w) = counterexample(p, &assoc)? {
                r.fail(&name, "associativity does not lift", w);
                continue;
            }
            let base_comm = base.holds(&comm)?;
            if base_comm {
                if let Some(w) = counterexample(p, &comm)? {
                    r.fail(&name, "commutativity does not lift", w);
                    continue;
                }
            }
            // one direction only: a single power may satisfy more than the
            // identification images (the 2-chain's power is idempotent)
            let power_idem = p.holds(&idem)?;
            if let Some(pre) = preimages.iter().find(|pre| base.holds(pre).unwrap_or(false)) {
                if !power_idem {
                    let w = counterexample(p, &idem)?.unwrap_or_default();
                    r.fail(
                        &name,
                        format!("base satisfies the linear {pre} but idempotency does not lift"),
                        w,
                    );
                    continue;
                }
            }
            r.pass(
                name,
                format!(
                    "assoc lifts{}; idempotent power: {power_idem}",
                    if base_comm { ", comm lifts" } else { "" }
                ),
            );
        }
    }

    let fan = catalog::fan_semilattice();
    let power = build_power(&fan, PowerVariant::Nonempty, limits)?;
    let witness = counterexample(power.algebra(), &idem)?;
    let held: Vec<String> = preimages
        .iter()
        .filter(|pre| fan.holds(pre).unwrap_or(false))
        .map(|p| p.to_string())
        .collect();
    match (fan.is_idempotent(), witness) {
        (true, Some(w)) if held.is_empty() => r.pass(
            "fan semilattice",
            format!("idempotent base, power not idempotent: {w}; no linear preimage of x·x = x holds in the base"),
        ),
        (true, Some(w)) => r.fail(
            "fan semilattice",
            "non-lifting idempotency has a linear preimage in the base",
            format!("{w}; preimages holding: {}", held.join("; ")),
        ),
        (_, w) => r.fail(
            "fan semilattice",
            "expected an idempotent base with a non-idempotent power",
            w.unwrap_or_else(|| "power is idempotent".into()),
        ),
    }
    Ok(r.finish(start))
}

/// For idempotent groupoids: the power algebra is idempotent iff every
/// non-empty subset is a subalgebra.
pub fn suite_cor52(max_size: usize, limits: &Limits) -> Result<SuiteReport> {
    let start = Instant::now();
    let mut r = SuiteReport::new("cor52");
    let sig = binary_sig();
    let [_, _, idem] = ids(&sig)?;
    let mut conservative = (0, 0);
    let mut check = |r: &mut SuiteReport, name: String, base: &FiniteAlgebra| -> Result<()> {
        let power_idem = build_power(base, PowerVariant::Nonempty, limits)?
            .algebra()
            .is_idempotent();
        let subs = enumerate_subalgebras(base, false, limits)?;
        let all_closed = subs.len() == (1usize << base.size()) - 1;
        if base.is_conservative() {
            conservative.0 += 1;
            conservative.1 += usize::from(power_idem && all_closed);
        }
        if power_idem == all_closed {
            r.pass(
                name,
                format!("power idempotent: {power_idem}; all non-empty subsets closed: {all_closed}"),
            );
        } else {
            r.fail(
                name,
                "biconditional fails",
                format!(
                    "power idempotent: {power_idem}, but {} of {} non-empty subsets are closed",
                    subs.len(),
                    (1usize << base.size()) - 1
                ),
            );
        }
        Ok(())
    };
    for n in 1..=max_size {
        for (k, base) in enumerate_models(&sig, n, std::slice::from_ref(&idem), limits)?.enumerate() {
            check(&mut r, format!("idempotent n={n} #{k} {}", table_string(&base)), &base)?;
        }
    }
    check(&mut r, "2-chain".into(), &catalog::chain_semilattice(2))?;
    check(&mut r, "fan semilattice".into(), &catalog::fan_semilattice())?;
    let (seen, ok) = conservative;
    if seen == ok {
        r.pass(
            "conservative bases",
            format!("{seen} conservative algebras, all with idempotent powers"),
        );
    } else {
        r.fail(
            "conservative bases",
            "a conservative algebra has a non-idempotent power",
            format!("{} of {seen} conservative algebras fail", seen - ok),
        );
    }
    Ok(r.finish(start))
}

/// Cardinality reports for `0..=max_generators`, checked against the pinned
/// free CDIS sizes, the subalgebra and reduced-subset counts, and the
/// `2^(2^n)` bound.
pub fn suite_counts(max_generators: usize, limits: &Limits) -> Result<SuiteReport> {
    let start = Instant::now();
    let mut r = SuiteReport::new("counts");
    let mut previous = None;
    for n in 0..=max_generators {
        let rep = cardinality_report(n, limits)?;
        let name = format!("{n} generator(s)");
        let shown = format!(
            "F_SL: {}, subalgebras: {}, reduced: {}, free CDIS: {}, bound: {}",
            rep.n_free_sl_elements,
            rep.n_subalgebras_incl_empty,
            rep.n_reduced_subsets,
            rep.n_free_cdis,
            rep.bound_2_2n
        );
        let expected = FREE_CDIS_SIZES.get(n).copied();
        if !rep.consistent() {
            r.fail(name, "counts are inconsistent", shown);
        } else if expected.is_some_and(|e| e != rep.n_free_cdis) {
            r.fail(
                name,
                format!("expected {} free CDIS elements", expected.unwrap()),
                shown,
            );
        } else if previous.is_some_and(|p| p >= rep.n_free_cdis) {
            r.fail(name, "free CDIS size does not grow", shown);
        } else {
            r.pass(name, shown);
        }
        previous = Some(rep.n_free_cdis);
    }
    Ok(r.finish(start))
}

fn catalog_targets(limits: &Limits) -> Result<Vec<(String, SloAlgebra)>> {
    let slo = |a: &FiniteAlgebra| SloAlgebra::from_designated(a).map_err(|v| Error::InvalidAlgebra(v.to_string()));
    let chain2 = catalog::chain_semilattice(2);
    let mut out = Vec::new();
    for n in 1..=3 {
        out.push((format!("{n}-chain lattice"), slo(&catalog::chain_lattice(n))?));
    }
    out.push(("diamond lattice".into(), slo(&catalog::diamond_lattice())?));
    for v in [PowerVariant::Nonempty, PowerVariant::WithEmptyAndUnit] {
        out.push((format!("P_{v}(2-chain)"), build_power(&chain2, v, limits)?.into_slo()));
    }
    out.push(("free CDIS()".into(), free_cdis(&[], limits)?.slo().clone()));
    out.push(("free CDIS(x)".into(), free_cdis(&["x"], limits)?.slo().clone()));
    Ok(out)
}

fn free_models(limits: &Limits) -> Result<Vec<(String, FreeModel)>> {
    let mut out = Vec::new();
    for n in 0..=2 {
        let gens = default_generators(n);
        let g: Vec<&str> = gens.iter().map(String::as_str).collect();
        out.push((format!("free CDIS({})", gens.join(",")), free_cdis(&g, limits)?));
    }
    for v in PowerVariant::ALL {
        for n in 1..=2 {
            let gens = default_generators(n);
            let g: Vec<&str> = gens.iter().map(String::as_str).collect();
            let base = if v.has_unit() { "F_SL1" } else { "F_SL" };
            out.push((
                format!("P_{v}({base}({}))", gens.join(",")),
                free_slo_over_semilattices(&g, v, limits)?,
            ));
        }
    }
    Ok(out)
}

/// Every generator map from each free model (at most two generators) into
/// each catalog target with the constants the model needs extends to a
/// verified homomorphism, unique on targets of at most eight elements.
pub fn suite_universality(limits: &Limits) -> Result<SuiteReport> {
    let start = Instant::now();
    let mut r = SuiteReport::new("universality");
    let targets = catalog_targets(limits)?;
    for (fname, free) in free_models(limits)? {
        let fa = free.algebra();
        let (needs_zero, needs_unit) = (fa.zero().is_some(), fa.unit().is_some());
        for (tname, target) in &targets {
            if (needs_zero && target.zero().is_none()) || (needs_unit && target.unit().is_none()) {
                continue;
            }
            let name = format!("{fname} → {tname}");
            let gens = free.generators();
            let maps = target.size().pow(gens.len() as u32);
            let mut failure = None;
            for code in 0..maps {
                let mut c = code;
                let h: HashMap<String, Elem> = gens
                    .iter()
                    .map(|(g, _)| {
                        let v = c % target.size();
                        c /= target.size();
                        (g.clone(), v)
                    })
                    .collect();
                let shown = || {
                    let mut parts: Vec<String> = gens
                        .iter()
                        .map(|(g, _)| format!("{g}={}", target.algebra().label(h[g])))
                        .collect();
                    parts.sort();
                    format!("h: {}", parts.join(","))
                };
                if let Err(e) = extend_hom_elems(&free, &h, target) {
                    failure = Some(format!("{}: {e}", shown()));
                    break;
                }
                if target.size() <= UNIQUENESS_MAX_TARGET {
                    let k = count_extensions(&free, &h, target, 2)?;
                    if k != 1 {
                        failure = Some(format!("{}: {k} homomorphisms extend it", shown()));
                        break;
                    }
                }
            }
            match failure {
                None => r.pass(
                    name,
                    format!(
                        "{maps} generator map(s) extend{}",
                        if target.size() <= UNIQUENESS_MAX_TARGET {
                            ", each uniquely"
                        } else {
                            ""
                        }
                    ),
                ),
                Some(w) => r.fail(name, "extension failed", w),
            }
        }
        // the identity embedding of the model into itself
        let h: HashMap<String, Elem> = free.generators().iter().cloned().collect();
        let name = format!("{fname} → itself");
        match extend_hom_elems(&free, &h, free.slo()) {
            Ok(hom) if hom.map.iter().enumerate().all(|(i, &v)| i == v) => r.pass(name, "identity map"),
            Ok(hom) => r.fail(
                name,
                "extension of the inclusion is not the identity",
                format!("{:?}", hom.map),
            ),
            Err(e) => r.fail(name, "inclusion does not extend", e.to_string()),
        }
    }
    // contract: a model with ∅ cannot map into a target without zero
    let free = free_slo_over_semilattices(&["x"], PowerVariant::WithEmpty, limits)?;
    let target = build_power(&catalog::chain_semilattice(2), PowerVariant::Nonempty, limits)?.into_slo();
    let h = HashMap::from([("x".to_string(), 0)]);
    match extend_hom_elems(&free, &h, &target) {
        Err(Error::MissingConstant("zero")) => r.pass(
            "P_with_empty(F_SL(x)) → P_nonempty(2-chain)",
            "rejected: target lacks a zero",
        ),
        other => r.fail(
            "P_with_empty(F_SL(x)) → P_nonempty(2-chain)",
            "expected a missing-zero rejection",
            format!("{other:?}"),
        ),
    }
    Ok(r.finish(start))
}

/// All four suites; `max_size` bounds the enumerated tables.
pub fn suite_all(max_size: usize, limits: &Limits) -> Result<Vec<SuiteReport>> {
    Ok(vec![
        suite_gl(max_size, limits)?,
        suite_cor52(max_size, limits)?,
        suite_counts(limits.max_generators, limits)?,
        suite_universality(limits)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl_small() {
        let r = suite_gl(2, &Limits::default()).unwrap();
        assert!(r.all_passed(), "{:?}", r.failures().collect::<Vec<_>>());
        assert_eq!(r.instances, 1 + 8 + 1);
        let fan = r.entries.last().unwrap();
        assert!(fan.detail.contains("x={a,b}"), "{}", fan.detail);
    }

    #[test]
    fn closed_subset_suite_small() {
        let r = suite_cor52(2, &Limits::default()).unwrap();
        assert!(r.all_passed());
    }

    #[test]
    fn counts_small() {
        let r = suite_counts(2, &Limits::default()).unwrap();
        assert!(r.all_passed());
        assert_eq!(r.instances, 3);
    }

    #[test]
    fn json_is_deterministic() {
        let a = serde_json::to_string(&suite_counts(1, &Limits::default()).unwrap()).unwrap();
        let b = serde_json::to_string(&suite_counts(1, &Limits::default()).unwrap()).unwrap();
        assert_eq!(a, b);
        assert!(!a.contains("wall"));
    }
}
