//! Terms, identities, and the linear/regular classification machinery.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite rooted tree: variable leaves and operation nodes.
///
/// Constants are 0-ary applications.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Term {
    Var(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn constant(name: impl Into<String>) -> Term {
        Term::App(name.into(), Vec::new())
    }

    pub fn app(symbol: impl Into<String>, args: Vec<Term>) -> Term {
        Term::App(symbol.into(), args)
    }

    /// Binary application, the common case.
    pub fn bin(symbol: &str, l: Term, r: Term) -> Term {
        Term::App(symbol.to_string(), vec![l, r])
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    /// Number of operation nodes (constants included).
    pub fn op_count(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => 1 + args.iter().map(Term::op_count).sum::<usize>(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    /// Variable occurrences, left to right, with repetitions.
    pub fn occurrences(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_occurrences(&mut out);
        out
    }

    fn collect_occurrences<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Term::Var(v) => out.push(v),
            Term::App(_, args) => args.iter().for_each(|a| a.collect_occurrences(out)),
        }
    }

    /// Distinct variables in order of first occurrence.
    pub fn variables(&self) -> Vec<&str> {
        let mut seen = HashSet::new();
        self.occurrences().into_iter().filter(|v| seen.insert(*v)).collect()
    }

    pub fn var_set(&self) -> BTreeSet<&str> {
        self.occurrences().into_iter().collect()
    }

    /// Operation symbols used, in first-occurrence order.
    pub fn symbols(&self) -> Vec<&str> {
        fn go<'a>(t: &'a Term, out: &mut Vec<&'a str>) {
            if let Term::App(s, args) = t {
                if !out.contains(&s.as_str()) {
                    out.push(s);
                }
                args.iter().for_each(|a| go(a, out));
            }
        }
        let mut out = Vec::new();
        go(self, &mut out);
        out
    }

    /// Replaces variables according to `f`; unmapped variables are kept.
    pub fn substitute(&self, f: &impl Fn(&str) -> Option<Term>) -> Term {
        match self {
            Term::Var(v) => f(v).unwrap_or_else(|| self.clone()),
            Term::App(s, args) => Term::App(s.clone(), args.iter().map(|a| a.substitute(f)).collect()),
        }
    }

    pub fn rename(&self, map: &HashMap<String, String>) -> Term {
        self.substitute(&|v| map.get(v).map(Term::var))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::App(s, args) if args.is_empty() => f.write_str(s),
            Term::App(s, args) => {
                write!(f, "{s}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// `lhs ≈ rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Identity {
    pub lhs: Term,
    pub rhs: Term,
}

impl Identity {
    pub fn new(lhs: Term, rhs: Term) -> Self {
        Identity { lhs, rhs }
    }

    /// Variables of both sides, lhs first, in first-occurrence order.
    pub fn variables(&self) -> Vec<&str> {
        let mut seen = HashSet::new();
        self.lhs
            .occurrences()
            .into_iter()
            .chain(self.rhs.occurrences())
            .filter(|v| seen.insert(*v))
            .collect()
    }

    pub fn is_linear(&self) -> bool {
        is_linear(&self.lhs) && is_linear(&self.rhs)
    }

    pub fn substitute(&self, f: &impl Fn(&str) -> Option<Term>) -> Identity {
        Identity::new(self.lhs.substitute(f), self.rhs.substitute(f))
    }

    /// Renames variables to `x1, x2, …` by first occurrence (lhs, then rhs),
    /// so alpha-variants become syntactically equal.
    pub fn canonical(&self) -> Identity {
        let map: HashMap<String, String> = self
            .variables()
            .into_iter()
            .enumerate()
            .map(|(i, v)| (v.to_string(), format!("x{}", i + 1)))
            .collect();
        Identity::new(self.lhs.rename(&map), self.rhs.rename(&map))
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

/// True iff no variable occurs twice in `t`.
pub fn is_linear(t: &Term) -> bool {
    let occ = t.occurrences();
    let distinct: HashSet<&str> = occ.iter().copied().collect();
    distinct.len() == occ.len()
}

/// True iff both sides use the same set of variables.
pub fn is_regular(id: &Identity) -> bool {
    id.lhs.var_set() == id.rhs.var_set()
}

/// A linear term together with the identification that recovers the original.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Linearization {
    pub linear_term: Term,
    /// Fresh variable ↦ original variable.
    pub identification: BTreeMap<String, String>,
    /// Original variable ↦ number of occurrences.
    pub multiplicities: BTreeMap<String, usize>,
    /// Fresh variables in left-to-right order.
    pub fresh_order: Vec<String>,
}

impl Linearization {
    /// Applies the identification to the linear term.
    pub fn reconstruct(&self) -> Term {
        self.linear_term
            .substitute(&|v| self.identification.get(v).map(Term::var))
    }
}

fn fresh_name(var: &str, occurrence: usize) -> String {
    format!("{var}_{occurrence}")
}

/// Replaces the `j`-th occurrence of each variable `v` by the fresh variable
/// `v_j` (1-based). Linear terms are returned unchanged.
pub fn linearize(t: &Term) -> Linearization {
    let mut multiplicities: BTreeMap<String, usize> = BTreeMap::new();
    for v in t.occurrences() {
        *multiplicities.entry(v.to_string()).or_default() += 1;
    }
    if multiplicities.values().all(|&k| k == 1) {
        let fresh_order: Vec<String> = t.occurrences().iter().map(|v| v.to_string()).collect();
        return Linearization {
            linear_term: t.clone(),
            identification: fresh_order.iter().map(|v| (v.clone(), v.clone())).collect(),
            multiplicities,
            fresh_order,
        };
    }
    let mut seen: HashMap<String, usize> = HashMap::new();
    let mut identification = BTreeMap::new();
    let mut fresh_order = Vec::new();
    fn go(
        t: &Term,
        seen: &mut HashMap<String, usize>,
        ident: &mut BTreeMap<String, String>,
        order: &mut Vec<String>,
    ) -> Term {
        match t {
            Term::Var(v) => {
                let j = seen.entry(v.clone()).or_default();
                *j += 1;
                let fresh = fresh_name(v, *j);
                ident.insert(fresh.clone(), v.clone());
                order.push(fresh.clone());
                Term::Var(fresh)
            }
            Term::App(s, args) => Term::App(s.clone(), args.iter().map(|a| go(a, seen, ident, order)).collect()),
        }
    }
    let linear_term = go(t, &mut seen, &mut identification, &mut fresh_order);
    Linearization {
        linear_term,
        identification,
        multiplicities,
        fresh_order,
    }
}

/// All set partitions of `0..n` as restricted growth strings.
pub(crate) fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(i: usize, n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for b in 0..=max {
            cur.push(b);
            go(i + 1, n, if b == max { max + 1 } else { max }, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, 0, &mut Vec::new(), &mut out);
    out
}

/// Identities obtained from linear identities by identifying variables.
///
/// Every partition of each identity's variables is applied; results are
/// renamed canonically and deduplicated. At most `max_identifications`
/// identities are returned.
pub fn identification_images(ids: &[Identity], max_identifications: usize) -> Result<Vec<Identity>> {
    if let Some(bad) = ids.iter().find(|id| !id.is_linear()) {
        return Err(Error::NonLinearTerm(bad.to_string()));
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for id in ids {
        let vars: Vec<String> = id.variables().iter().map(|v| v.to_string()).collect();
        for blocks in set_partitions(vars.len()) {
            if out.len() >= max_identifications {
                return Ok(out);
            }
            let rep: HashMap<&str, &str> = vars
                .iter()
                .zip(&blocks)
                .map(|(v, &b)| {
                    let first = blocks.iter().position(|&c| c == b).unwrap();
                    (v.as_str(), vars[first].as_str())
                })
                .collect();
            let image = id.substitute(&|v| rep.get(v).map(|r| Term::var(*r))).canonical();
            if seen.insert(image.clone()) {
                out.push(image);
            }
        }
    }
    Ok(out)
}

/// The linear identities that map onto `id` under an identification of variables.
///
/// Both sides are linearized with disjoint fresh variables; for each original
/// variable, a partial matching between its lhs and rhs occurrences decides
/// which fresh variables are shared across the two sides.
pub fn linear_preimages(id: &Identity) -> Vec<Identity> {
    let lhs_occ: Vec<String> = id.lhs.occurrences().iter().map(|s| s.to_string()).collect();
    let rhs_occ: Vec<String> = id.rhs.occurrences().iter().map(|s| s.to_string()).collect();
    let mut vars: Vec<String> = lhs_occ.iter().chain(&rhs_occ).cloned().collect();
    vars.sort();
    vars.dedup();

    // Per variable: positions in lhs and rhs, and every partial injection lhs→rhs.
    let mut per_var: Vec<Vec<Vec<Option<usize>>>> = Vec::new();
    let mut positions = Vec::new();
    for v in &vars {
        let lp: Vec<usize> = (0..lhs_occ.len()).filter(|&i| &lhs_occ[i] == v).collect();
        let rp: Vec<usize> = (0..rhs_occ.len()).filter(|&i| &rhs_occ[i] == v).collect();
        per_var.push(partial_injections(lp.len(), rp.len()));
        positions.push((lp, rp));
    }

    let mut out = Vec::new();
    let mut choice = vec![0usize; vars.len()];
    loop {
        // Name lhs occurrences l0, l1, …; matched rhs occurrences reuse the lhs name.
        let mut rhs_names: Vec<String> = (0..rhs_occ.len()).map(|i| format!("r{i}")).collect();
        for (k, (lp, rp)) in positions.iter().enumerate() {
            for (a, m) in per_var[k][choice[k]].iter().enumerate() {
                if let Some(b) = m {
                    rhs_names[rp[*b]] = format!("l{}", lp[a]);
                }
            }
        }
        let lhs = relabel_occurrences(&id.lhs, &mut (0..).map(|i| format!("l{i}")));
        let rhs = relabel_occurrences(&id.rhs, &mut rhs_names.into_iter());
        out.push(Identity::new(lhs, rhs).canonical());

        let mut k = 0;
        loop {
            if k == vars.len() {
                return out;
            }
            choice[k] += 1;
            if choice[k] < per_var[k].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

/// Each entry maps left index → optional right index, injective on the right.
fn partial_injections(left: usize, right: usize) -> Vec<Vec<Option<usize>>> {
    fn go(
        i: usize,
        left: usize,
        right: usize,
        used: &mut Vec<bool>,
        cur: &mut Vec<Option<usize>>,
        out: &mut Vec<Vec<Option<usize>>>,
    ) {
        if i == left {
            out.push(cur.clone());
            return;
        }
        cur.push(None);
        go(i + 1, left, right, used, cur, out);
        cur.pop();
        for j in 0..right {
            if !used[j] {
                used[j] = true;
                cur.push(Some(j));
                go(i + 1, left, right, used, cur, out);
                cur.pop();
                used[j] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(0, left, right, &mut vec![false; right], &mut Vec::new(), &mut out);
    out
}

fn relabel_occurrences(t: &Term, names: &mut impl Iterator<Item = String>) -> Term {
    match t {
        Term::Var(_) => Term::Var(names.next().expect("enough names")),
        Term::App(s, args) => Term::App(s.clone(), args.iter().map(|a| relabel_occurrences(a, names)).collect()),
    }
}
