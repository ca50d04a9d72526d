//! Complex operations and the four power-algebra variants.

use std::fmt;
use std::str::FromStr;

use crate::algebra::{Elem, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::slo::SloAlgebra;
use crate::subset::SubsetElem;
use crate::term::{is_linear, linearize, Term};

/// Which subsets form the carrier and which constants are designated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PowerVariant {
    /// Non-empty subsets.
    Nonempty,
    /// All subsets, `∅` designated as zero.
    WithEmpty,
    /// Non-empty subsets, `{1}` designated as unit.
    WithUnit,
    /// All subsets with both constants.
    WithEmptyAndUnit,
}

impl PowerVariant {
    pub const ALL: [PowerVariant; 4] = [
        PowerVariant::Nonempty,
        PowerVariant::WithEmpty,
        PowerVariant::WithUnit,
        PowerVariant::WithEmptyAndUnit,
    ];

    pub fn has_empty(self) -> bool {
        matches!(self, PowerVariant::WithEmpty | PowerVariant::WithEmptyAndUnit)
    }

    pub fn has_unit(self) -> bool {
        matches!(self, PowerVariant::WithUnit | PowerVariant::WithEmptyAndUnit)
    }

    pub fn name(self) -> &'static str {
        match self {
            PowerVariant::Nonempty => "nonempty",
            PowerVariant::WithEmpty => "with_empty",
            PowerVariant::WithUnit => "with_unit",
            PowerVariant::WithEmptyAndUnit => "with_empty_and_unit",
        }
    }
}

impl fmt::Display for PowerVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PowerVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PowerVariant::ALL
            .into_iter()
            .find(|v| v.name() == s || v.name().replace('_', "-") == s)
            .ok_or_else(|| {
                Error::Precondition(format!(
                    "unknown variant `{s}` (expected nonempty, with_empty, with_unit or with_empty_and_unit)"
                ))
            })
    }
}

/// Pointwise image `{ω(a₁,…,aₙ) | aᵢ ∈ Aᵢ}` over bit masks; empty if any
/// argument is empty.
pub(crate) fn complex_mask(base: &FiniteAlgebra, op: usize, args: &[u64]) -> u64 {
    fn go(base: &FiniteAlgebra, op: usize, args: &[u64], cur: &mut Vec<Elem>, acc: &mut u64) {
        let i = cur.len();
        if i == args.len() {
            *acc |= 1 << base.apply(op, cur);
            return;
        }
        let mut m = args[i];
        while m != 0 {
            let e = m.trailing_zeros() as Elem;
            m &= m - 1;
            cur.push(e);
            go(base, op, args, cur, acc);
            cur.pop();
        }
    }
    let mut acc = 0;
    go(base, op, args, &mut Vec::with_capacity(args.len()), &mut acc);
    acc
}

/// Pointwise image over index flags, for bases too large for masks.
pub(crate) fn complex_flags(base: &FiniteAlgebra, op: usize, args: &[&[Elem]]) -> Vec<bool> {
    let mut out = vec![false; base.size()];
    let k = args.len();
    if args.iter().any(|a| a.is_empty()) {
        return out;
    }
    let mut idx = vec![0usize; k];
    let mut cur: Vec<Elem> = args.iter().map(|a| a[0]).collect();
    loop {
        out[base.apply(op, &cur)] = true;
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < args[i].len() {
                cur[i] = args[i][idx[i]];
                break;
            }
            idx[i] = 0;
            cur[i] = args[i][0];
        }
    }
}

fn check_members(base: &FiniteAlgebra, s: &SubsetElem) -> Result<()> {
    match s.members().iter().find(|&&e| e >= base.size()) {
        Some(e) => Err(Error::UnknownElement(format!("#{e}"))),
        None => Ok(()),
    }
}

/// The complex operation `ω(A₁,…,Aₙ) = {ω(a₁,…,aₙ) | aᵢ ∈ Aᵢ}`.
pub fn complex_op(base: &FiniteAlgebra, symbol: &str, args: &[SubsetElem]) -> Result<SubsetElem> {
    let op = base.op_index(symbol)?;
    if args.len() != base.arity(op) {
        return Err(Error::ArityMismatch {
            symbol: symbol.to_string(),
            expected: base.arity(op),
            found: args.len(),
        });
    }
    for a in args {
        check_members(base, a)?;
    }
    let slices: Vec<&[Elem]> = args.iter().map(|a| a.members()).collect();
    Ok(SubsetElem::from_flags(&complex_flags(base, op, &slices)))
}

/// A power algebra together with the base it was built from.
#[derive(Clone, Debug)]
pub struct PowerAlgebra {
    base: FiniteAlgebra,
    variant: PowerVariant,
    slo: SloAlgebra,
    subsets: Vec<SubsetElem>,
}

impl PowerAlgebra {
    pub fn base(&self) -> &FiniteAlgebra {
        &self.base
    }

    pub fn variant(&self) -> PowerVariant {
        self.variant
    }

    pub fn slo(&self) -> &SloAlgebra {
        &self.slo
    }

    pub fn algebra(&self) -> &FiniteAlgebra {
        self.slo.algebra()
    }

    pub fn into_slo(self) -> SloAlgebra {
        self.slo
    }

    /// The subset carried by a power element.
    pub fn subset(&self, e: Elem) -> &SubsetElem {
        &self.subsets[e]
    }

    pub fn subsets(&self) -> &[SubsetElem] {
        &self.subsets
    }

    /// The power element carrying `s`, if it belongs to this variant.
    pub fn element_of(&self, s: &SubsetElem) -> Option<Elem> {
        let m = s.mask() as usize;
        if self.variant.has_empty() {
            (m < self.subsets.len()).then_some(m)
        } else {
            (m >= 1 && m <= self.subsets.len()).then(|| m - 1)
        }
    }

    /// The base unit `1` of a unit variant.
    pub fn base_unit(&self) -> Option<Elem> {
        self.slo.unit().map(|u| self.subsets[u].members()[0])
    }
}

/// Builds the power algebra of `base` for the given variant.
///
/// The carrier lists subsets in binary counting order over the base order,
/// operations are complex operations, and a fresh `join` symbol is union.
/// Designated symbols of the base are dropped; the unit variants designate
/// `{1}` for the unique unit of the base.
pub fn build_power(base: &FiniteAlgebra, variant: PowerVariant, limits: &Limits) -> Result<PowerAlgebra> {
    let n = base.size();
    let carrier = if n >= 63 {
        usize::MAX
    } else {
        (1usize << n) - usize::from(!variant.has_empty())
    };
    limits.check_carrier(carrier)?;
    let unit = if variant.has_unit() {
        let u = base.unique_unit()?;
        if let Some(d) = base.unit() {
            if d != u {
                return Err(Error::Precondition("designated unit is not a unit".into()));
            }
        }
        Some(u)
    } else {
        None
    };

    // Ω-reduct of the base, plus join and the variant's constants.
    let mut sig = base.signature().clone();
    for s in [sig.join_symbol(), sig.zero_symbol(), sig.unit_symbol()]
        .into_iter()
        .flatten()
        .map(str::to_string)
        .collect::<Vec<_>>()
    {
        sig.remove_symbol(&s);
    }
    let omega: Vec<usize> = sig.ops().iter().map(|(s, _)| base.op_index(s).unwrap()).collect();
    sig.set_name(format!("P_{}", base.signature().name()));
    let join = sig.fresh_symbol("join");
    sig.designate_join(join)?;
    if variant.has_empty() {
        let z = sig.fresh_symbol("zero");
        sig.designate_zero(z)?;
    }
    if variant.has_unit() {
        let u = base
            .signature()
            .unit_symbol()
            .map(str::to_string)
            .unwrap_or_else(|| sig.fresh_symbol("one"));
        sig.designate_unit(u)?;
    }

    let offset = u64::from(!variant.has_empty());
    let masks: Vec<u64> = (0..carrier as u64).map(|i| i + offset).collect();
    let elem_of = |m: u64| (m - offset) as Elem;
    let subsets: Vec<SubsetElem> = masks.iter().map(|&m| SubsetElem::from_mask(m)).collect();
    let labels: Vec<String> = subsets.iter().map(|s| s.label(base)).collect();

    let n_omega = omega.len();
    // binary fast path: row images of each base element against each carrier mask
    let rows: Vec<Option<Vec<u64>>> = omega
        .iter()
        .map(|&op| {
            (base.arity(op) == 2).then(|| {
                let mut r = Vec::with_capacity(n * masks.len());
                for a in 0..n {
                    for &m in &masks {
                        r.push(complex_mask(base, op, &[1 << a, m]));
                    }
                }
                r
            })
        })
        .collect();
    let alg = FiniteAlgebra::from_fn(sig, labels, |i, args| {
        if i < n_omega {
            let op = omega[i];
            if let Some(r) = &rows[i] {
                let (mut a, b) = (masks[args[0]], args[1]);
                let mut acc = 0;
                while a != 0 {
                    let e = a.trailing_zeros() as usize;
                    a &= a - 1;
                    acc |= r[e * masks.len() + b];
                }
                return elem_of(acc);
            }
            let ms: Vec<u64> = args.iter().map(|&e| masks[e]).collect();
            elem_of(complex_mask(base, op, &ms))
        } else {
            match i - n_omega {
                0 => elem_of(masks[args[0]] | masks[args[1]]),
                1 if variant.has_empty() => elem_of(0),
                _ => elem_of(1 << unit.expect("unit variant")),
            }
        }
    })?;
    Ok(PowerAlgebra {
        base: base.clone(),
        variant,
        slo: SloAlgebra::new_unchecked(alg),
        subsets,
    })
}

/// Pointwise image of a linear term: `t(A₁,…,Aₙ) = {t(a₁,…,aₙ) | aᵢ ∈ Aᵢ}`,
/// where the arguments follow the variables' first-occurrence order.
pub fn complex_linear_term(base: &FiniteAlgebra, t: &Term, args: &[SubsetElem]) -> Result<SubsetElem> {
    if !is_linear(t) {
        return Err(Error::NonLinearTerm(t.to_string()));
    }
    pointwise(base, t, args)
}

/// `{t(a₁,…,aₘ) | aᵢ ∈ Aᵢ}` with each variable bound once.
pub(crate) fn pointwise(base: &FiniteAlgebra, t: &Term, args: &[SubsetElem]) -> Result<SubsetElem> {
    let vars = t.variables();
    if vars.len() != args.len() {
        return Err(Error::Precondition(format!(
            "term `{t}` has {} variable(s) but {} argument(s) were given",
            vars.len(),
            args.len()
        )));
    }
    for a in args {
        check_members(base, a)?;
    }
    let code = base.compile(t, &vars)?;
    let mut out = vec![false; base.size()];
    let lens: Vec<usize> = args.iter().map(SubsetElem::len).collect();
    let mut env = vec![0; args.len()];
    // odometer over member positions
    if lens.iter().all(|&l| l > 0) {
        let mut pos = vec![0usize; args.len()];
        loop {
            for (i, a) in args.iter().enumerate() {
                env[i] = a.members()[pos[i]];
            }
            out[code.eval(base, &env)] = true;
            let mut i = args.len();
            let mut done = true;
            while i > 0 {
                i -= 1;
                pos[i] += 1;
                if pos[i] < lens[i] {
                    done = false;
                    break;
                }
                pos[i] = 0;
            }
            if done {
                break;
            }
        }
    }
    Ok(SubsetElem::from_flags(&out))
}

/// Result of [`nonlinear_inclusion_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InclusionCheck {
    /// `{t(a₁,…,aₘ) | aᵢ ∈ Aᵢ}`, each variable bound to a single element.
    pub pointwise: SubsetElem,
    /// `t*(A,…,A)`: the linearization evaluated with each occurrence independent.
    pub power_value: SubsetElem,
    pub contained: bool,
    pub proper: bool,
}

/// Compares the pointwise image of `t` with its value in the power algebra.
pub fn nonlinear_inclusion_check(base: &FiniteAlgebra, t: &Term, args: &[SubsetElem]) -> Result<InclusionCheck> {
    let pointwise_img = pointwise(base, t, args)?;
    let lin = linearize(t);
    let vars = t.variables();
    let repeated: Vec<SubsetElem> = lin
        .fresh_order
        .iter()
        .map(|f| {
            let orig = &lin.identification[f];
            let i = vars.iter().position(|v| v == orig).unwrap();
            args[i].clone()
        })
        .collect();
    let power_value = complex_linear_term(base, &lin.linear_term, &repeated)?;
    let contained = pointwise_img.is_subset(&power_value);
    let proper = contained && pointwise_img != power_value;
    Ok(InclusionCheck {
        pointwise: pointwise_img,
        power_value,
        contained,
        proper,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::parse::parse_term;

    fn s(base: &FiniteAlgebra, labels: &[&str]) -> SubsetElem {
        SubsetElem::new(labels.iter().map(|l| base.element(l).unwrap()))
    }

    #[test]
    fn complex_op_examples() {
        let fan = catalog::fan_semilattice();
        let ab = s(&fan, &["a", "b"]);
        assert_eq!(
            complex_op(&fan, "mul", &[ab.clone(), ab.clone()]).unwrap(),
            s(&fan, &["0", "a", "b"])
        );
        assert_eq!(
            complex_op(&fan, "mul", &[ab.clone(), SubsetElem::empty()]).unwrap(),
            SubsetElem::empty()
        );
        assert_eq!(
            complex_op(&fan, "mul", &[s(&fan, &["a"]), s(&fan, &["b"])]).unwrap(),
            s(&fan, &["0"])
        );
        assert!(matches!(
            complex_op(&fan, "mul", std::slice::from_ref(&ab)),
            Err(Error::ArityMismatch { .. })
        ));
        assert!(complex_op(&fan, "mul", &[ab, SubsetElem::singleton(7)]).is_err());
    }

    #[test]
    fn carrier_sizes() {
        let l = Limits::default();
        let c2 = catalog::chain_semilattice(2);
        assert_eq!(
            build_power(&c2, PowerVariant::Nonempty, &l).unwrap().algebra().size(),
            3
        );
        let p = build_power(&c2, PowerVariant::WithEmptyAndUnit, &l).unwrap();
        assert_eq!(p.algebra().labels(), &["{}", "{0}", "{1}", "{0,1}"]);
        assert_eq!(p.slo().zero().map(|z| p.algebra().label(z)), Some("{}"));
        assert_eq!(p.slo().unit().map(|u| p.algebra().label(u)), Some("{1}"));
        let fan = build_power(&catalog::fan_semilattice(), PowerVariant::Nonempty, &l).unwrap();
        assert_eq!(fan.algebra().size(), 7);
        let ab = fan.algebra().element("{a,b}").unwrap();
        let mul = fan.algebra().op_index("mul").unwrap();
        assert_eq!(fan.algebra().label(fan.algebra().apply(mul, &[ab, ab])), "{0,a,b}");
    }

    #[test]
    fn unit_variant_needs_unique_unit() {
        let r = build_power(&catalog::left_zero(2), PowerVariant::WithUnit, &Limits::default());
        assert!(matches!(r, Err(Error::UnitRequired { found: 0 })));
    }

    #[test]
    fn cap_refuses_large_bases() {
        let limits = Limits {
            max_carrier: 100,
            ..Limits::default()
        };
        let r = build_power(&catalog::chain_semilattice(7), PowerVariant::Nonempty, &limits);
        assert!(matches!(r, Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn linear_term_lift() {
        let c2 = catalog::chain_semilattice(2);
        let t = parse_term("mul(x, mul(y, z))", c2.signature()).unwrap();
        let r = complex_linear_term(&c2, &t, &[s(&c2, &["0", "1"]), s(&c2, &["1"]), s(&c2, &["1"])]).unwrap();
        assert_eq!(r, s(&c2, &["0", "1"]));
        let x = Term::var("x");
        assert_eq!(complex_linear_term(&c2, &x, &[s(&c2, &["1"])]).unwrap(), s(&c2, &["1"]));
        let sq = parse_term("mul(x, x)", c2.signature()).unwrap();
        assert!(matches!(
            complex_linear_term(&c2, &sq, &[s(&c2, &["1"])]),
            Err(Error::NonLinearTerm(_))
        ));
    }

    #[test]
    fn square_inclusion_is_proper_on_fan() {
        let fan = catalog::fan_semilattice();
        let sq = parse_term("mul(x, x)", fan.signature()).unwrap();
        let r = nonlinear_inclusion_check(&fan, &sq, &[s(&fan, &["a", "b"])]).unwrap();
        assert_eq!(r.pointwise, s(&fan, &["a", "b"]));
        assert_eq!(r.power_value, s(&fan, &["0", "a", "b"]));
        assert!(r.contained && r.proper);
        let single = nonlinear_inclusion_check(&fan, &sq, &[s(&fan, &["a"])]).unwrap();
        assert!(single.contained && !single.proper);
        let lin = parse_term("mul(x, y)", fan.signature()).unwrap();
        let r = nonlinear_inclusion_check(&fan, &lin, &[s(&fan, &["a", "b"]), s(&fan, &["0", "b"])]).unwrap();
        assert_eq!(r.pointwise, r.power_value);
    }

    #[test]
    fn variant_names() {
        for v in PowerVariant::ALL {
            assert_eq!(v.name().parse::<PowerVariant>().unwrap(), v);
        }
        assert!("both".parse::<PowerVariant>().is_err());
    }
}
