//! Semilattice ordered algebras: law checking and the order-theoretic tools
//! built on the join.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::{find_tuple, Elem, FiniteAlgebra};
use crate::closure::close;
use crate::error::{Error, Result};
use crate::term::Term;

/// A finite algebra with a designated join over which every Ω-operation
/// distributes, plus optional zero and unit elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SloAlgebra {
    alg: FiniteAlgebra,
    join: usize,
    zero: Option<Elem>,
    unit: Option<Elem>,
}

/// The first law a candidate fails, with a witnessing assignment.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub law: String,
    pub witness: BTreeMap<String, String>,
    pub lhs: String,
    pub rhs: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let w: Vec<String> = self.witness.iter().map(|(k, v)| format!("{k}={v}")).collect();
        write!(f, "{} fails at {}: {} ≠ {}", self.law, w.join(", "), self.lhs, self.rhs)
    }
}

fn violation(alg: &FiniteAlgebra, law: String, vars: &[(&str, Elem)], lhs: Elem, rhs: Elem) -> Box<Violation> {
    Box::new(Violation {
        law,
        witness: vars
            .iter()
            .map(|(v, e)| (v.to_string(), alg.label(*e).to_string()))
            .collect(),
        lhs: alg.label(lhs).to_string(),
        rhs: alg.label(rhs).to_string(),
    })
}

fn var_names(k: usize, prefix: &str) -> Vec<String> {
    (1..=k).map(|i| format!("{prefix}{i}")).collect()
}

/// Validates `candidate` as a semilattice ordered algebra with join `join`
/// and the given optional zero and unit elements. Constants already
/// designated in the signature are checked when not overridden.
///
/// Laws are checked exhaustively in this order: join idempotent, commutative,
/// associative; distributivity of each Ω-operation in each position; zero
/// least and absorbing; unit law.
pub fn check_slo(
    candidate: &FiniteAlgebra,
    join: &str,
    zero: Option<Elem>,
    unit: Option<Elem>,
) -> Result<SloAlgebra, Box<Violation>> {
    let alg = candidate;
    let zero = zero.or(alg.zero());
    let unit = unit.or(alg.unit());
    let j = match alg.signature().index_of(join) {
        Some(j) if alg.arity(j) == 2 => j,
        _ => {
            return Err(Box::new(Violation {
                law: format!("`{join}` is not a binary symbol"),
                witness: BTreeMap::new(),
                lhs: String::new(),
                rhs: String::new(),
            }))
        }
    };
    let n = alg.size();
    let plus = |a: Elem, b: Elem| alg.apply(j, &[a, b]);

    for x in 0..n {
        if plus(x, x) != x {
            return Err(violation(alg, "join idempotent".into(), &[("x", x)], plus(x, x), x));
        }
    }
    for x in 0..n {
        for y in 0..n {
            if plus(x, y) != plus(y, x) {
                return Err(violation(
                    alg,
                    "join commutative".into(),
                    &[("x", x), ("y", y)],
                    plus(x, y),
                    plus(y, x),
                ));
            }
            for z in 0..n {
                let (l, r) = (plus(x, plus(y, z)), plus(plus(x, y), z));
                if l != r {
                    return Err(violation(
                        alg,
                        "join associative".into(),
                        &[("x", x), ("y", y), ("z", z)],
                        l,
                        r,
                    ));
                }
            }
        }
    }

    let mut sig = alg.signature().clone();
    if sig.join_symbol() != Some(join) {
        sig.designate_join(join).expect("binary symbol");
    }
    let omega: Vec<usize> = sig
        .omega_indices()
        .into_iter()
        .filter(|&op| alg.arity(op) > 0)
        .collect();

    for &op in &omega {
        let k = alg.arity(op);
        let names = var_names(k, "x");
        for pos in 0..k {
            // args with slot `pos` holding x, plus y for the other summand
            let hit = find_tuple(n, k + 1, |t| {
                let (args, y) = (&t[..k], t[k]);
                let mut a = args.to_vec();
                a[pos] = plus(args[pos], y);
                let lhs = alg.apply(op, &a);
                let mut b = args.to_vec();
                b[pos] = y;
                let rhs = plus(alg.apply(op, args), alg.apply(op, &b));
                (lhs != rhs).then(|| (t.to_vec(), lhs, rhs))
            });
            if let Some((t, lhs, rhs)) = hit {
                let mut vars: Vec<(&str, Elem)> =
                    names.iter().map(String::as_str).zip(t[..k].iter().copied()).collect();
                vars.push(("y", t[k]));
                let law = format!("{} distributes over {} in position {}", alg.symbol(op), join, pos + 1);
                return Err(violation(alg, law, &vars, lhs, rhs));
            }
        }
    }

    if let Some(z) = zero {
        for x in 0..n {
            if plus(z, x) != x {
                return Err(violation(alg, "zero least".into(), &[("x", x)], plus(z, x), x));
            }
        }
        for &op in &omega {
            let k = alg.arity(op);
            let names = var_names(k, "x");
            for pos in 0..k {
                let hit = find_tuple(n, k, |args| {
                    let mut a = args.to_vec();
                    a[pos] = z;
                    let v = alg.apply(op, &a);
                    (v != z).then_some((a, v))
                });
                if let Some((a, v)) = hit {
                    let vars: Vec<(&str, Elem)> = names.iter().map(String::as_str).zip(a).collect();
                    let law = format!("zero absorbing for {} in position {}", alg.symbol(op), pos + 1);
                    return Err(violation(alg, law, &vars, v, z));
                }
            }
        }
    }

    if let Some(u) = unit {
        for &op in &omega {
            let k = alg.arity(op);
            for pos in 0..k {
                for x in 0..n {
                    let mut a = vec![u; k];
                    a[pos] = x;
                    let v = alg.apply(op, &a);
                    if v != x {
                        let law = format!("unit law for {} in position {}", alg.symbol(op), pos + 1);
                        return Err(violation(alg, law, &[("x", x)], v, x));
                    }
                }
            }
        }
    }

    // Record the designations in the signature so the value is self-describing.
    let mut checked =
        FiniteAlgebra::from_fn(sig, alg.labels().to_vec(), |op, args| alg.apply(op, args)).expect("same tables");
    if let Some(z) = zero {
        if checked.zero() != Some(z) {
            let sym = checked
                .signature()
                .zero_symbol()
                .map(str::to_string)
                .unwrap_or_else(|| checked.signature().fresh_symbol("zero"));
            checked = checked
                .with_designated_constant(crate::algebra::ConstantRole::Zero, &sym, z)
                .expect("fresh constant");
        }
    }
    if let Some(u) = unit {
        if checked.unit() != Some(u) {
            let sym = checked
                .signature()
                .unit_symbol()
                .map(str::to_string)
                .unwrap_or_else(|| checked.signature().fresh_symbol("one"));
            checked = checked
                .with_designated_constant(crate::algebra::ConstantRole::Unit, &sym, u)
                .expect("fresh constant");
        }
    }
    Ok(SloAlgebra::new_unchecked(checked))
}

/// The partial order `x ≤ y ⇔ x + y = y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NaturalOrder {
    n: usize,
    leq: Vec<bool>,
}

impl NaturalOrder {
    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.leq[a * self.n + b]
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn pairs(&self) -> Vec<(Elem, Elem)> {
        (0..self.n)
            .flat_map(|a| (0..self.n).map(move |b| (a, b)))
            .filter(|&(a, b)| self.leq(a, b))
            .collect()
    }
}

impl SloAlgebra {
    /// Wraps an algebra whose signature designates a join, trusting the laws.
    pub(crate) fn new_unchecked(alg: FiniteAlgebra) -> Self {
        let join = alg.join_op().expect("join designated");
        let (zero, unit) = (alg.zero(), alg.unit());
        SloAlgebra { alg, join, zero, unit }
    }

    /// Validates an algebra using the designations already in its signature.
    pub fn from_designated(alg: &FiniteAlgebra) -> Result<SloAlgebra, Box<Violation>> {
        let join = alg.signature().join_symbol().ok_or_else(|| {
            Box::new(Violation {
                law: "no join symbol designated".into(),
                witness: BTreeMap::new(),
                lhs: String::new(),
                rhs: String::new(),
            })
        })?;
        check_slo(alg, join, alg.zero(), alg.unit())
    }

    pub fn algebra(&self) -> &FiniteAlgebra {
        &self.alg
    }

    pub fn size(&self) -> usize {
        self.alg.size()
    }

    pub fn join_op(&self) -> usize {
        self.join
    }

    pub fn zero(&self) -> Option<Elem> {
        self.zero
    }

    pub fn unit(&self) -> Option<Elem> {
        self.unit
    }

    #[inline]
    pub fn join(&self, a: Elem, b: Elem) -> Elem {
        self.alg.apply(self.join, &[a, b])
    }

    /// Join of a list; `None` for an empty list without a zero.
    pub fn join_all(&self, items: impl IntoIterator<Item = Elem>) -> Option<Elem> {
        items
            .into_iter()
            .fold(None, |acc, x| Some(acc.map_or(x, |a| self.join(a, x))))
            .or(self.zero)
    }

    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.join(a, b) == b
    }

    /// Ω-operations of positive arity.
    pub fn omega_ops(&self) -> Vec<usize> {
        self.alg
            .omega_ops()
            .into_iter()
            .filter(|&op| self.alg.arity(op) > 0)
            .collect()
    }

    pub fn natural_order(&self) -> NaturalOrder {
        let n = self.size();
        let mut leq = vec![false; n * n];
        for a in 0..n {
            for b in 0..n {
                leq[a * n + b] = self.leq(a, b);
            }
        }
        NaturalOrder { n, leq }
    }

    /// Operations generating the full Ω-subreduct: the Ω-reduct (constants
    /// included) and the designated unit.
    fn subreduct_ops(&self) -> Vec<usize> {
        let sig = self.alg.signature();
        let mut ops = self.alg.omega_ops();
        if let Some(u) = sig.unit_symbol().and_then(|s| sig.index_of(s)) {
            ops.push(u);
        }
        ops
    }

    /// `⟨X⟩_Ω`: the closure of `xs` under the Ω-operations (join excluded).
    pub fn full_subreduct(&self, xs: &[Elem]) -> Vec<Elem> {
        let mut seed = vec![false; self.size()];
        for &x in xs {
            seed[x] = true;
        }
        let flags = close(&self.alg, &self.subreduct_ops(), &seed);
        (0..self.size()).filter(|&i| flags[i]).collect()
    }

    /// Subalgebra generated by `xs` under every operation, join and constants included.
    pub fn generated(&self, xs: &[Elem]) -> Vec<Elem> {
        let mut seed = vec![false; self.size()];
        for &x in xs {
            seed[x] = true;
        }
        let ops: Vec<usize> = (0..self.alg.signature().ops().len()).collect();
        let flags = close(&self.alg, &ops, &seed);
        (0..self.size()).filter(|&i| flags[i]).collect()
    }

    /// Writes `target` as a join of elements of `⟨X⟩_Ω`.
    ///
    /// Returns the maximal subreduct elements below `target`. The zero, when
    /// present and not otherwise reachable, has the empty decomposition.
    pub fn disjunctive_form(&self, xs: &[Elem], target: Elem) -> Result<DisjunctiveForm> {
        let sub = self.full_subreduct(xs);
        let below: Vec<Elem> = sub.iter().copied().filter(|&u| self.leq(u, target)).collect();
        let achieved = self.join_all(below.iter().copied());
        if achieved != Some(target) {
            return Err(Error::NotGenerating {
                target: self.alg.label(target).to_string(),
                achieved: achieved.map_or_else(|| "nothing".to_string(), |a| self.alg.label(a).to_string()),
            });
        }
        let parts = below
            .iter()
            .copied()
            .filter(|&u| !below.iter().any(|&v| v != u && self.leq(u, v)))
            .collect();
        Ok(DisjunctiveForm { parts, target })
    }

    /// Checks that the word operation of `t` distributes over the join in every
    /// variable position; returns a failing instance if not.
    pub fn word_op_distribution_witness(&self, t: &Term) -> Result<Option<Box<Violation>>> {
        let vars = t.variables();
        let code = self.alg.compile(t, &vars)?;
        let k = vars.len();
        let n = self.size();
        for pos in 0..k {
            let hit = find_tuple(n, k + 1, |tup| {
                let (args, y) = (&tup[..k], tup[k]);
                let mut a = args.to_vec();
                a[pos] = self.join(args[pos], y);
                let lhs = code.eval(&self.alg, &a);
                let mut b = args.to_vec();
                b[pos] = y;
                let rhs = self.join(code.eval(&self.alg, args), code.eval(&self.alg, &b));
                (lhs != rhs).then(|| (tup.to_vec(), lhs, rhs))
            });
            if let Some((tup, lhs, rhs)) = hit {
                let mut named: Vec<(&str, Elem)> = vars.iter().copied().zip(tup[..k].iter().copied()).collect();
                named.push(("y", tup[k]));
                let law = format!("{t} distributes in `{}`", vars[pos]);
                return Ok(Some(violation(&self.alg, law, &named, lhs, rhs)));
            }
        }
        Ok(None)
    }

    pub fn word_op_distributes(&self, t: &Term) -> Result<bool> {
        Ok(self.word_op_distribution_witness(t)?.is_none())
    }

    /// `x + y = Σ ω(z₁,…,zₙ)` over all `zᵢ ∈ {x, y}`, for every x, y.
    pub fn idempotency_criterion(&self, symbol: &str) -> Result<bool> {
        Ok(self.idempotency_criterion_witness(symbol)?.is_none())
    }

    pub fn idempotency_criterion_witness(&self, symbol: &str) -> Result<Option<(Elem, Elem)>> {
        let op = self.alg.op_index(symbol)?;
        let k = self.alg.arity(op);
        if k == 0 {
            return Err(Error::Precondition(format!("`{symbol}` must have positive arity")));
        }
        let n = self.size();
        for x in 0..n {
            for y in 0..n {
                let mut acc = None;
                for pattern in 0..1u64 << k {
                    let args: Vec<Elem> = (0..k).map(|i| if pattern >> i & 1 == 1 { y } else { x }).collect();
                    let v = self.alg.apply(op, &args);
                    acc = Some(acc.map_or(v, |a| self.join(a, v)));
                }
                if acc != Some(self.join(x, y)) {
                    return Ok(Some((x, y)));
                }
            }
        }
        Ok(None)
    }
}

/// `target = parts₁ + … + partsₚ` with every part in the full Ω-subreduct.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DisjunctiveForm {
    pub parts: Vec<Elem>,
    pub target: Elem,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::limits::Limits;
    use crate::parse::parse_term;
    use crate::power::{build_power, PowerVariant};

    fn power(base: &FiniteAlgebra, v: PowerVariant) -> SloAlgebra {
        build_power(base, v, &Limits::default()).unwrap().into_slo()
    }

    #[test]
    fn lattices_are_slo() {
        let l = catalog::two_element_distributive_lattice();
        let s = check_slo(&l, "join", l.zero(), l.unit()).unwrap();
        assert_eq!(s.zero(), Some(0));
        assert_eq!(s.unit(), Some(1));
        assert!(SloAlgebra::from_designated(&catalog::diamond_lattice()).is_ok());
    }

    #[test]
    fn powers_are_slo() {
        for (_, b) in catalog::binary_bases(3) {
            for v in [PowerVariant::Nonempty, PowerVariant::WithEmpty] {
                let p = power(&b, v);
                assert!(SloAlgebra::from_designated(p.algebra()).is_ok());
            }
        }
    }

    #[test]
    fn broken_join_reports_witness() {
        let l = catalog::chain_lattice(3);
        let mut tables: Vec<Vec<Elem>> = (0..l.signature().ops().len())
            .map(|op| l.table(op).entries().iter().map(|&e| e as Elem).collect())
            .collect();
        let j = l.join_op().unwrap();
        tables[j][1] = 0; // 0 + 1 := 0
        let broken = FiniteAlgebra::from_flat(l.signature().clone(), l.labels().to_vec(), tables).unwrap();
        let v = check_slo(&broken, "join", None, None).unwrap_err();
        assert_eq!(v.law, "join commutative");
        assert_eq!(v.witness["x"], "0");
        assert_eq!(v.witness["y"], "1");
        let json = serde_json::to_value(&*v).unwrap();
        assert!(json.get("law").is_some() && json.get("witness").is_some());
    }

    #[test]
    fn zero_and_unit_violations() {
        let l = catalog::chain_lattice(3);
        let v = check_slo(&l, "join", Some(2), None).unwrap_err();
        assert_eq!(v.law, "zero least");
        let v = check_slo(&l, "join", None, Some(1)).unwrap_err();
        assert!(v.law.starts_with("unit law"));
    }

    #[test]
    fn non_distributive_candidate() {
        let mut sig = crate::signature::Signature::new("N").with_op("f", 1);
        sig.designate_join("join").unwrap();
        const F: [Elem; 3] = [2, 0, 2];
        let labels = vec!["0".into(), "1".into(), "2".into()];
        let alg = FiniteAlgebra::from_fn(sig, labels, |op, a| if op == 0 { F[a[0]] } else { a[0].max(a[1]) }).unwrap();
        let v = check_slo(&alg, "join", None, None).unwrap_err();
        assert_eq!(v.law, "f distributes over join in position 1");
        assert_eq!(
            check_slo(&catalog::z2(), "mul", None, None).unwrap_err().law,
            "join idempotent"
        );
    }

    #[test]
    fn order_of_power_is_inclusion() {
        let p = build_power(&catalog::fan_semilattice(), PowerVariant::Nonempty, &Limits::default()).unwrap();
        let ord = p.slo().natural_order();
        for a in 0..p.algebra().size() {
            for b in 0..p.algebra().size() {
                assert_eq!(ord.leq(a, b), p.subset(a).is_subset(p.subset(b)));
            }
        }
        let (a, b) = (p.algebra().element("{a}").unwrap(), p.algebra().element("{b}").unwrap());
        assert!(!ord.leq(a, b) && !ord.leq(b, a));
        let c2 = catalog::chain_lattice(2);
        let s = SloAlgebra::from_designated(&c2).unwrap();
        assert!(s.leq(0, 1) && !s.leq(1, 0));
    }

    #[test]
    fn word_operations() {
        let fan = power(&catalog::fan_semilattice(), PowerVariant::Nonempty);
        let sig = fan.algebra().signature().clone();
        let sq = parse_term("mul(x, x)", &sig).unwrap();
        let w = fan.word_op_distribution_witness(&sq).unwrap().unwrap();
        assert_ne!(w.lhs, w.rhs);
        assert!(fan
            .word_op_distributes(&parse_term("mul(x, mul(y, z))", &sig).unwrap())
            .unwrap());
        let c2 = power(&catalog::chain_semilattice(2), PowerVariant::Nonempty);
        assert!(c2.word_op_distributes(&sq).unwrap());
    }

    #[test]
    fn idempotency_criterion_examples() {
        let c2 = power(&catalog::chain_semilattice(2), PowerVariant::Nonempty);
        assert!(c2.idempotency_criterion("mul").unwrap());
        let fan = power(&catalog::fan_semilattice(), PowerVariant::Nonempty);
        let (x, y) = fan.idempotency_criterion_witness("mul").unwrap().unwrap();
        let labels = (fan.algebra().label(x), fan.algebra().label(y));
        assert_eq!(labels, ("{a}", "{b}"));
        let one = power(&catalog::chain_semilattice(1), PowerVariant::Nonempty);
        assert!(one.idempotency_criterion("mul").unwrap());
    }

    #[test]
    fn subreducts_and_forms() {
        let p = power(&catalog::chain_semilattice(3), PowerVariant::Nonempty);
        let all: Vec<Elem> = (0..p.size()).collect();
        assert_eq!(p.full_subreduct(&all), all);
        let e = power(&catalog::fan_semilattice(), PowerVariant::WithEmpty);
        assert!(e.full_subreduct(&[]).is_empty());
        let singletons: Vec<Elem> = ["{0}", "{a}", "{b}"]
            .iter()
            .map(|l| e.algebra().element(l).unwrap())
            .collect();
        let target = e.algebra().element("{a,b}").unwrap();
        let form = e.disjunctive_form(&singletons, target).unwrap();
        assert_eq!(form.parts.len(), 2);
        let zero = e.zero().unwrap();
        assert!(e.disjunctive_form(&singletons, zero).unwrap().parts.is_empty());
        let err = e.disjunctive_form(&singletons[1..2], target).unwrap_err();
        assert!(matches!(err, Error::NotGenerating { .. }));
    }
}
