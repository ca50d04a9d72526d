use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{Elem, FiniteAlgebra};

/// A finite set of base elements, kept sorted so equal sets compare equal.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SubsetElem(Vec<Elem>);

impl SubsetElem {
    pub fn new(members: impl IntoIterator<Item = Elem>) -> Self {
        let mut v: Vec<Elem> = members.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        SubsetElem(v)
    }

    pub fn empty() -> Self {
        SubsetElem(Vec::new())
    }

    pub fn singleton(e: Elem) -> Self {
        SubsetElem(vec![e])
    }

    pub fn from_mask(mask: u64) -> Self {
        SubsetElem((0..64).filter(|i| mask >> i & 1 == 1).collect())
    }

    /// Bit mask over base indices; panics if an index is 64 or more.
    pub fn mask(&self) -> u64 {
        self.0.iter().fold(0, |m, &e| {
            assert!(e < 64, "element index {e} does not fit a mask");
            m | 1 << e
        })
    }

    pub fn from_flags(flags: &[bool]) -> Self {
        SubsetElem((0..flags.len()).filter(|&i| flags[i]).collect())
    }

    pub fn to_flags(&self, n: usize) -> Vec<bool> {
        let mut f = vec![false; n];
        for &e in &self.0 {
            f[e] = true;
        }
        f
    }

    pub fn members(&self) -> &[Elem] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, e: Elem) -> bool {
        self.0.binary_search(&e).is_ok()
    }

    pub fn is_subset(&self, other: &SubsetElem) -> bool {
        self.0.iter().all(|&e| other.contains(e))
    }

    pub fn union(&self, other: &SubsetElem) -> SubsetElem {
        SubsetElem::new(self.0.iter().chain(&other.0).copied())
    }

    pub fn without(&self, e: Elem) -> SubsetElem {
        SubsetElem(self.0.iter().copied().filter(|&x| x != e).collect())
    }

    /// `{a,b}` using the base labels; the empty set prints as `{}`.
    pub fn label(&self, base: &FiniteAlgebra) -> String {
        let parts: Vec<&str> = self.0.iter().map(|&e| base.label(e)).collect();
        format!("{{{}}}", parts.join(","))
    }

    /// Parses a `{a,b}` label against the base labels.
    pub fn parse_label(label: &str, base: &FiniteAlgebra) -> Option<SubsetElem> {
        let inner = label.trim().strip_prefix('{')?.strip_suffix('}')?;
        if inner.trim().is_empty() {
            return Some(SubsetElem::empty());
        }
        inner
            .split(',')
            .map(|p| base.element(p.trim()).ok())
            .collect::<Option<Vec<_>>>()
            .map(SubsetElem::new)
    }
}

impl fmt::Display for SubsetElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|e| e.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn mask_round_trip(mask in any::<u64>()) {
            prop_assert_eq!(SubsetElem::from_mask(mask).mask(), mask);
        }

        #[test]
        fn union_is_least_upper_bound(a in 0u64..4096, b in 0u64..4096) {
            let (sa, sb) = (SubsetElem::from_mask(a), SubsetElem::from_mask(b));
            let u = sa.union(&sb);
            prop_assert!(sa.is_subset(&u) && sb.is_subset(&u));
            prop_assert_eq!(u.mask(), a | b);
        }
    }

    #[test]
    fn labels() {
        let fan = crate::catalog::fan_semilattice();
        let s = SubsetElem::new([2, 1]);
        assert_eq!(s.label(&fan), "{a,b}");
        assert_eq!(SubsetElem::parse_label("{a, b}", &fan), Some(s));
        assert_eq!(SubsetElem::empty().label(&fan), "{}");
        assert_eq!(SubsetElem::parse_label("{}", &fan), Some(SubsetElem::empty()));
        assert_eq!(SubsetElem::parse_label("{c}", &fan), None);
    }
}
