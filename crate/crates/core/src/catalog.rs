//! Small named algebras used throughout the tests and suites.

use crate::algebra::{ConstantRole, FiniteAlgebra};
use crate::signature::Signature;

fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

fn binary(name: &str) -> Signature {
    Signature::new(name).with_op("mul", 2)
}

/// The n-element chain `0 < 1 < … < n-1` under meet (`mul` = min).
pub fn chain_semilattice(n: usize) -> FiniteAlgebra {
    FiniteAlgebra::from_fn(binary("Chain"), labels(n), |_, a| a[0].min(a[1])).unwrap()
}

/// `{0, a, b}` with `a·b = 0`: the meet semilattice of two atoms under a bottom.
pub fn fan_semilattice() -> FiniteAlgebra {
    let l = vec!["0".to_string(), "a".to_string(), "b".to_string()];
    FiniteAlgebra::from_fn(binary("Fan"), l, |_, a| if a[0] == a[1] { a[0] } else { 0 }).unwrap()
}

/// `x·y = x` on n elements.
pub fn left_zero(n: usize) -> FiniteAlgebra {
    FiniteAlgebra::from_fn(binary("LeftZero"), labels(n), |_, a| a[0]).unwrap()
}

/// The cyclic group of order two under addition.
pub fn z2() -> FiniteAlgebra {
    FiniteAlgebra::from_fn(binary("Z2"), labels(2), |_, a| a[0] ^ a[1]).unwrap()
}

/// n elements with the identity map as the single unary operation.
pub fn unary_identity(n: usize) -> FiniteAlgebra {
    let sig = Signature::new("Id").with_op("f", 1);
    FiniteAlgebra::from_fn(sig, labels(n), |_, a| a[0]).unwrap()
}

/// A 3-element band that is not normal (hence not entropic).
pub fn non_normal_band() -> FiniteAlgebra {
    // rows: e·_, a·_, b·_ over (e, a, b)
    const T: [usize; 9] = [0, 0, 0, 0, 1, 2, 2, 2, 2];
    let l = vec!["e".to_string(), "a".to_string(), "b".to_string()];
    FiniteAlgebra::from_fn(binary("Band"), l, |_, a| T[a[0] * 3 + a[1]]).unwrap()
}

/// Alias kept for readability in entropy tests.
pub fn free_band_quotient_non_normal() -> FiniteAlgebra {
    non_normal_band()
}

/// The n-element chain as a lattice: `mul` = meet, designated `join` = max,
/// zero = bottom and unit = top.
pub fn chain_lattice(n: usize) -> FiniteAlgebra {
    assert!(n > 0);
    let mut sig = binary("ChainLattice");
    sig.designate_join("join").unwrap();
    FiniteAlgebra::from_fn(
        sig,
        labels(n),
        |op, a| {
            if op == 0 {
                a[0].min(a[1])
            } else {
                a[0].max(a[1])
            }
        },
    )
    .unwrap()
    .with_designated_constant(ConstantRole::Zero, "zero", 0)
    .unwrap()
    .with_designated_constant(ConstantRole::Unit, "one", n - 1)
    .unwrap()
}

/// The two-element distributive lattice.
pub fn two_element_distributive_lattice() -> FiniteAlgebra {
    chain_lattice(2)
}

/// The four-element Boolean lattice `2×2` with meet as `mul`.
pub fn diamond_lattice() -> FiniteAlgebra {
    let mut sig = binary("Diamond");
    sig.designate_join("join").unwrap();
    let l = vec!["0".into(), "a".into(), "b".into(), "1".into()];
    // elements as bit masks: 0=00, a=01, b=10, 1=11
    FiniteAlgebra::from_fn(sig, l, |op, a| if op == 0 { a[0] & a[1] } else { a[0] | a[1] })
        .unwrap()
        .with_designated_constant(ConstantRole::Zero, "zero", 0)
        .unwrap()
        .with_designated_constant(ConstantRole::Unit, "one", 3)
        .unwrap()
}

/// Catalog bases with a single binary operation and at most `max` elements.
pub fn binary_bases(max: usize) -> Vec<(String, FiniteAlgebra)> {
    let mut out = Vec::new();
    for n in 1..=max {
        out.push((format!("chain{n}"), chain_semilattice(n)));
        out.push((format!("left_zero{n}"), left_zero(n)));
    }
    if max >= 2 {
        out.push(("z2".into(), z2()));
    }
    if max >= 3 {
        out.push(("fan".into(), fan_semilattice()));
        out.push(("non_normal_band".into(), non_normal_band()));
    }
    out
}

/// Every catalog algebra with at most `max` elements: the binary bases, the
/// unary identity algebras, the chain lattices and the diamond.
pub fn small_catalog(max: usize) -> Vec<(String, FiniteAlgebra)> {
    let mut out = binary_bases(max);
    for n in 1..=max {
        out.push((format!("unary_identity{n}"), unary_identity(n)));
        out.push((format!("chain_lattice{n}"), chain_lattice(n)));
    }
    if max >= 4 {
        out.push(("diamond".into(), diamond_lattice()));
    }
    out
}
