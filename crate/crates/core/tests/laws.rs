use proptest::prelude::*;

use slo_core::io::{algebra_from_json, algebra_to_json, same_by_labels};
use slo_core::{
    build_power, check_slo, closure::closure_of, enumerate_subalgebras, generated_subalgebra, parse_identity,
    rho_equivalent, Elem, FiniteAlgebra, Limits, PowerVariant, Signature, SubsetElem,
};

/// A random algebra with one binary and one unary operation.
fn algebra() -> impl Strategy<Value = FiniteAlgebra> {
    (1usize..=3).prop_flat_map(|n| {
        (prop::collection::vec(0..n, n * n), prop::collection::vec(0..n, n)).prop_map(move |(mul, f)| {
            let sig = Signature::new("R").with_op("mul", 2).with_op("f", 1);
            let labels = (0..n).map(|i| format!("e{i}")).collect();
            FiniteAlgebra::from_flat(sig, labels, vec![mul, f]).unwrap()
        })
    })
}

fn members(mask: u64, n: usize) -> Vec<Elem> {
    (0..n).filter(|i| mask >> i & 1 == 1).collect()
}

/// Smallest superset closed under both operations, by naive iteration.
fn naive_closure(a: &FiniteAlgebra, mut mask: u64) -> u64 {
    loop {
        let ms = members(mask, a.size());
        let mut next = mask;
        for &x in &ms {
            next |= 1 << a.apply_symbol("f", &[x]).unwrap();
            for &y in &ms {
                next |= 1 << a.apply_symbol("mul", &[x, y]).unwrap();
            }
        }
        if next == mask {
            return mask;
        }
        mask = next;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn power_is_slo(a in algebra()) {
        for v in [PowerVariant::Nonempty, PowerVariant::WithEmpty] {
            let p = build_power(&a, v, &Limits::default()).unwrap();
            let pa = p.algebra();
            let join = pa.symbol(p.slo().join_op()).to_string();
            prop_assert!(check_slo(pa, &join, None, None).is_ok());
            // natural order is inclusion
            for x in 0..pa.size() {
                for y in 0..pa.size() {
                    prop_assert_eq!(p.slo().leq(x, y), p.subset(x).is_subset(p.subset(y)));
                }
            }
        }
    }

    #[test]
    fn complex_ops_are_pointwise_images(a in algebra()) {
        let p = build_power(&a, PowerVariant::WithEmpty, &Limits::default()).unwrap();
        let pa = p.algebra();
        let n = a.size();
        for x in 0..pa.size() {
            let xs = members(p.subset(x).mask(), n);
            let img: u64 = xs.iter().map(|&e| 1u64 << a.apply_symbol("f", &[e]).unwrap()).fold(0, |s, b| s | b);
            prop_assert_eq!(p.subset(pa.apply_symbol("f", &[x]).unwrap()).mask(), img);
            for y in 0..pa.size() {
                let mut img = 0u64;
                for &e in &xs {
                    for &g in &members(p.subset(y).mask(), n) {
                        img |= 1 << a.apply_symbol("mul", &[e, g]).unwrap();
                    }
                }
                prop_assert_eq!(p.subset(pa.apply_symbol("mul", &[x, y]).unwrap()).mask(), img);
            }
        }
    }

    #[test]
    fn linear_identities_lift(a in algebra()) {
        let p = build_power(&a, PowerVariant::Nonempty, &Limits::default()).unwrap();
        for src in [
            "mul(mul(x,y),z) = mul(x,mul(y,z))",
            "mul(x,y) = mul(y,x)",
            "f(mul(x,y)) = mul(f(x),f(y))",
            "mul(mul(x,y),mul(z,w)) = mul(mul(x,z),mul(y,w))",
            "f(f(x)) = x",
        ] {
            let id = parse_identity(src, a.signature()).unwrap();
            if a.holds(&id).unwrap() {
                let id = parse_identity(src, p.algebra().signature()).unwrap();
                prop_assert!(p.algebra().holds(&id).unwrap(), "{} lost in the power", src);
            }
        }
    }

    #[test]
    fn closures_match_oracle(a in algebra()) {
        let n = a.size();
        let subs = enumerate_subalgebras(&a, true, &Limits::default()).unwrap();
        let closed: Vec<u64> = (0..1u64 << n).filter(|&m| naive_closure(&a, m) == m).collect();
        let mut got: Vec<u64> = subs.iter().map(|s| s.carrier.mask()).collect();
        got.sort();
        prop_assert_eq!(got, closed);
        for m in 0..1u64 << n {
            let s = SubsetElem::from_mask(m);
            let c = naive_closure(&a, m);
            prop_assert_eq!(closure_of(&a, &s).mask(), c);
            prop_assert_eq!(generated_subalgebra(&a, &s).carrier.mask(), c);
            for m2 in 0..1u64 << n {
                let same = rho_equivalent(&a, &s, &SubsetElem::from_mask(m2));
                if a.is_idempotent() && a.is_entropic() {
                    prop_assert_eq!(same.unwrap(), c == naive_closure(&a, m2));
                } else {
                    prop_assert!(same.is_err());
                }
            }
        }
    }

    #[test]
    fn json_round_trip(a in algebra()) {
        let back = algebra_from_json(&algebra_to_json(&a)).unwrap();
        prop_assert!(same_by_labels(&a, &back));
        let p = build_power(&a, PowerVariant::WithEmpty, &Limits::default()).unwrap();
        let back = algebra_from_json(&algebra_to_json(p.algebra())).unwrap();
        prop_assert!(same_by_labels(p.algebra(), &back));
        prop_assert_eq!(back.join_op(), p.algebra().join_op());
        prop_assert_eq!(back.zero(), p.algebra().zero());
    }
}
