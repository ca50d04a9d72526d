//! Brute-force enumeration of operation tables.
//!
//! No isomorphism reduction is done: every labelled table on `0..size` that
//! satisfies the constraints is produced, in lexicographic order of the
//! concatenated tables.

use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::signature::Signature;
use crate::term::Identity;

pub struct Models {
    sig: Signature,
    size: usize,
    constraints: Vec<Identity>,
    cells: Vec<usize>,
    digits: Vec<usize>,
    done: bool,
}

/// All algebras of the given size over `sig` satisfying `constraints`.
pub fn enumerate_models(sig: &Signature, size: usize, constraints: &[Identity], limits: &Limits) -> Result<Models> {
    if size == 0 {
        return Err(Error::Precondition("model size must be at least 1".into()));
    }
    sig.validate()?;
    let cells: Vec<usize> = sig.ops().iter().map(|(_, a)| size.pow(*a as u32)).collect();
    let total_cells: usize = cells.iter().sum();
    let tables = (size as u64).checked_pow(total_cells as u32);
    match tables {
        Some(t) if t <= limits.max_tables => {}
        _ => {
            return Err(Error::CapExceeded {
                what: "operation tables to enumerate",
                requested: tables.map_or(usize::MAX, |t| t as usize),
                limit: limits.max_tables as usize,
            })
        }
    }
    Ok(Models {
        sig: sig.clone(),
        size,
        constraints: constraints.to_vec(),
        cells,
        digits: vec![0; total_cells],
        done: false,
    })
}

impl Models {
    fn current(&self) -> FiniteAlgebra {
        let labels = (0..self.size).map(|i| i.to_string()).collect();
        let mut tables = Vec::with_capacity(self.cells.len());
        let mut at = 0;
        for &c in &self.cells {
            tables.push(self.digits[at..at + c].to_vec());
            at += c;
        }
        FiniteAlgebra::from_flat(self.sig.clone(), labels, tables).expect("valid by construction")
    }

    fn advance(&mut self) {
        for d in self.digits.iter_mut().rev() {
            *d += 1;
            if *d < self.size {
                return;
            }
            *d = 0;
        }
        self.done = true;
    }
}

impl Iterator for Models {
    type Item = FiniteAlgebra;

    fn next(&mut self) -> Option<FiniteAlgebra> {
        while !self.done {
            let alg = self.current();
            self.advance();
            let ok = self.constraints.iter().all(|id| alg.holds(id).unwrap_or(false));
            if ok {
                return Some(alg);
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_identity;

    fn sig() -> Signature {
        Signature::new("G").with_op("mul", 2)
    }

    fn assoc() -> Identity {
        parse_identity("mul(x, mul(y, z)) = mul(mul(x, y), z)", &sig()).unwrap()
    }

    // Independent oracle: raw tables checked with plain index arithmetic.
    fn oracle_semigroups(n: usize) -> usize {
        let cells = n * n;
        let mut count = 0;
        for code in 0..n.pow(cells as u32) {
            let mut t = vec![0; cells];
            let mut c = code;
            for slot in t.iter_mut().rev() {
                *slot = c % n;
                c /= n;
            }
            let m = |a: usize, b: usize| t[a * n + b];
            let ok = (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| m(m(a, b), c) == m(a, m(b, c)))));
            count += ok as usize;
        }
        count
    }

    #[test]
    fn semigroup_counts_match_oracle() {
        let limits = Limits::default();
        for n in 1..=3 {
            let got = enumerate_models(&sig(), n, &[assoc()], &limits).unwrap().count();
            assert_eq!(got, oracle_semigroups(n), "size {n}");
        }
        assert_eq!(oracle_semigroups(2), 8);
        assert_eq!(oracle_semigroups(3), 113);
    }

    #[test]
    fn size_one_satisfies_everything() {
        let odd = parse_identity("mul(x, y) = z", &sig()).unwrap();
        let ms: Vec<_> = enumerate_models(&sig(), 1, &[assoc(), odd], &Limits::default())
            .unwrap()
            .collect();
        assert_eq!(ms.len(), 1);
    }

    #[test]
    fn cap_is_enforced() {
        let limits = Limits {
            max_tables: 100,
            ..Limits::default()
        };
        assert!(matches!(
            enumerate_models(&sig(), 3, &[], &limits),
            Err(Error::CapExceeded { .. })
        ));
        assert!(enumerate_models(&sig(), 0, &[], &limits).is_err());
    }

    #[test]
    fn order_is_deterministic() {
        let a: Vec<_> = enumerate_models(&sig(), 2, &[assoc()], &Limits::default())
            .unwrap()
            .collect();
        let b: Vec<_> = enumerate_models(&sig(), 2, &[assoc()], &Limits::default())
            .unwrap()
            .collect();
        assert_eq!(a, b);
        // the constant-zero table comes first
        assert!(a[0].table(0).entries().iter().all(|&e| e == 0));
    }
}
