//! Finite algebras given by operation tables.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::signature::Signature;
use crate::term::{Identity, Term};

/// Carrier element, an index into [`FiniteAlgebra::labels`].
pub type Elem = usize;

/// A total table for one operation symbol, stored row-major with the first
/// argument outermost.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpTable {
    arity: usize,
    data: Vec<u32>,
}

impl OpTable {
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn entries(&self) -> &[u32] {
        &self.data
    }
}

/// Visits every tuple in `0..n` of length `k`, in lexicographic order.
pub fn for_each_tuple(n: usize, k: usize, mut f: impl FnMut(&[Elem])) {
    if n == 0 && k > 0 {
        return;
    }
    let mut cur = vec![0; k];
    loop {
        f(&cur);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < n {
                break;
            }
            cur[i] = 0;
        }
    }
}

/// Like [`for_each_tuple`] but stops at the first `Some`.
pub fn find_tuple<T>(n: usize, k: usize, mut f: impl FnMut(&[Elem]) -> Option<T>) -> Option<T> {
    let mut found = None;
    let mut stop = false;
    // for_each_tuple has no early exit; the flag keeps the closure cheap after a hit
    for_each_tuple(n, k, |t| {
        if !stop {
            if let Some(x) = f(t) {
                found = Some(x);
                stop = true;
            }
        }
    });
    found
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteAlgebra {
    sig: Signature,
    labels: Vec<String>,
    index: HashMap<String, Elem>,
    tables: Vec<OpTable>,
}

/// A failing assignment for [`FiniteAlgebra::satisfies`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub assignment: BTreeMap<String, String>,
    pub lhs: String,
    pub rhs: String,
}

impl FiniteAlgebra {
    /// Builds an algebra by tabulating `f(op_index, args)` for every symbol.
    pub fn from_fn(sig: Signature, labels: Vec<String>, mut f: impl FnMut(usize, &[Elem]) -> Elem) -> Result<Self> {
        sig.validate()?;
        let n = labels.len();
        let mut tables = Vec::with_capacity(sig.ops().len());
        for (i, (_, arity)) in sig.ops().iter().enumerate() {
            let mut data = Vec::with_capacity(n.pow(*arity as u32));
            for_each_tuple(n, *arity, |args| data.push(f(i, args) as u32));
            tables.push(OpTable { arity: *arity, data });
        }
        Self::from_tables(sig, labels, tables)
    }

    /// Builds an algebra from flat row-major tables aligned with `sig.ops()`.
    pub fn from_flat(sig: Signature, labels: Vec<String>, tables: Vec<Vec<Elem>>) -> Result<Self> {
        if tables.len() != sig.ops().len() {
            return Err(Error::InvalidAlgebra(format!(
                "{} tables for {} symbols",
                tables.len(),
                sig.ops().len()
            )));
        }
        let tables = sig
            .ops()
            .iter()
            .zip(tables)
            .map(|((_, arity), data)| OpTable {
                arity: *arity,
                data: data.into_iter().map(|e| e as u32).collect(),
            })
            .collect();
        Self::from_tables(sig, labels, tables)
    }

    fn from_tables(sig: Signature, labels: Vec<String>, tables: Vec<OpTable>) -> Result<Self> {
        sig.validate()?;
        let n = labels.len();
        let mut index = HashMap::with_capacity(n);
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::InvalidAlgebra(format!("duplicate element label `{l}`")));
            }
        }
        if n == 0 && sig.ops().iter().any(|(_, a)| *a == 0) {
            return Err(Error::InvalidAlgebra(
                "the empty algebra cannot interpret constants".into(),
            ));
        }
        for ((s, arity), t) in sig.ops().iter().zip(&tables) {
            if t.data.len() != n.pow(*arity as u32) {
                return Err(Error::InvalidAlgebra(format!(
                    "table for `{s}` has {} entries, expected {}",
                    t.data.len(),
                    n.pow(*arity as u32)
                )));
            }
            if let Some(bad) = t.data.iter().find(|&&e| e as usize >= n) {
                return Err(Error::InvalidAlgebra(format!(
                    "table for `{s}` refers to element index {bad}"
                )));
            }
        }
        Ok(FiniteAlgebra {
            sig,
            labels,
            index,
            tables,
        })
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, e: Elem) -> &str {
        &self.labels[e]
    }

    pub fn element(&self, label: &str) -> Result<Elem> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownElement(label.to_string()))
    }

    pub fn table(&self, op: usize) -> &OpTable {
        &self.tables[op]
    }

    pub fn op_index(&self, symbol: &str) -> Result<usize> {
        self.sig
            .index_of(symbol)
            .ok_or_else(|| Error::UnknownSymbol(symbol.to_string()))
    }

    pub fn arity(&self, op: usize) -> usize {
        self.tables[op].arity
    }

    pub fn symbol(&self, op: usize) -> &str {
        &self.sig.ops()[op].0
    }

    #[inline]
    pub fn apply(&self, op: usize, args: &[Elem]) -> Elem {
        let t = &self.tables[op];
        debug_assert_eq!(args.len(), t.arity);
        let n = self.labels.len();
        let idx = args.iter().fold(0, |acc, &a| acc * n + a);
        t.data[idx] as Elem
    }

    pub fn apply_symbol(&self, symbol: &str, args: &[Elem]) -> Result<Elem> {
        let op = self.op_index(symbol)?;
        if args.len() != self.arity(op) {
            return Err(Error::ArityMismatch {
                symbol: symbol.to_string(),
                expected: self.arity(op),
                found: args.len(),
            });
        }
        Ok(self.apply(op, args))
    }

    /// Indices of the Ω-reduct operations.
    pub fn omega_ops(&self) -> Vec<usize> {
        self.sig.omega_indices()
    }

    pub fn join_op(&self) -> Option<usize> {
        self.sig.join_symbol().and_then(|s| self.sig.index_of(s))
    }

    /// The element named by the designated zero symbol.
    pub fn zero(&self) -> Option<Elem> {
        let op = self.sig.index_of(self.sig.zero_symbol()?)?;
        Some(self.apply(op, &[]))
    }

    /// The element named by the designated unit symbol.
    pub fn unit(&self) -> Option<Elem> {
        let op = self.sig.index_of(self.sig.unit_symbol()?)?;
        Some(self.apply(op, &[]))
    }

    /// Returns a copy with an extra 0-ary symbol designated as unit (or zero)
    /// and interpreted as `elem`.
    pub fn with_designated_constant(&self, role: ConstantRole, symbol: &str, elem: Elem) -> Result<Self> {
        let mut sig = self.sig.clone();
        match role {
            ConstantRole::Zero => sig.designate_zero(symbol)?,
            ConstantRole::Unit => sig.designate_unit(symbol)?,
        }
        let mut tables = self.tables.clone();
        if tables.len() < sig.ops().len() {
            tables.push(OpTable {
                arity: 0,
                data: vec![elem as u32],
            });
        } else {
            let i = sig.index_of(symbol).unwrap();
            tables[i].data = vec![elem as u32];
        }
        Self::from_tables(sig, self.labels.clone(), tables)
    }

    /// Renames the algebra's signature.
    pub fn renamed(mut self, name: &str) -> Self {
        self.sig.set_name(name);
        self
    }

    /// Evaluates `t` under `env`.
    pub fn eval_term(&self, t: &Term, env: &HashMap<String, Elem>) -> Result<Elem> {
        match t {
            Term::Var(v) => env.get(v).copied().ok_or_else(|| Error::UnboundVariable(v.clone())),
            Term::App(s, args) => {
                let vals = args
                    .iter()
                    .map(|a| self.eval_term(a, env))
                    .collect::<Result<Vec<_>>>()?;
                self.apply_symbol(s, &vals)
            }
        }
    }

    /// Label-based convenience wrapper around [`FiniteAlgebra::eval_term`].
    pub fn eval_labels(&self, t: &Term, env: &[(&str, &str)]) -> Result<&str> {
        let env = env
            .iter()
            .map(|(v, l)| Ok((v.to_string(), self.element(l)?)))
            .collect::<Result<HashMap<_, _>>>()?;
        Ok(self.label(self.eval_term(t, &env)?))
    }

    /// Compiles `t` for repeated evaluation over positional variables.
    pub fn compile(&self, t: &Term, vars: &[&str]) -> Result<Compiled> {
        Compiled::new(self, t, vars)
    }

    /// Checks `id` under every assignment; returns the first failing one.
    pub fn satisfies(&self, id: &Identity) -> Result<Option<Counterexample>> {
        let vars = id.variables();
        let lhs = self.compile(&id.lhs, &vars)?;
        let rhs = self.compile(&id.rhs, &vars)?;
        let hit = find_tuple(self.size(), vars.len(), |env| {
            let (l, r) = (lhs.eval(self, env), rhs.eval(self, env));
            (l != r).then(|| (env.to_vec(), l, r))
        });
        Ok(hit.map(|(env, l, r)| Counterexample {
            assignment: vars
                .iter()
                .zip(env)
                .map(|(v, e)| (v.to_string(), self.labels[e].clone()))
                .collect(),
            lhs: self.labels[l].clone(),
            rhs: self.labels[r].clone(),
        }))
    }

    pub fn holds(&self, id: &Identity) -> Result<bool> {
        Ok(self.satisfies(id)?.is_none())
    }

    /// ω(x,…,x) = x for every Ω-operation of positive arity.
    pub fn is_idempotent(&self) -> bool {
        self.idempotency_witness().is_none()
    }

    pub fn idempotency_witness(&self) -> Option<(usize, Elem)> {
        for op in self.omega_ops() {
            let k = self.arity(op);
            if k == 0 {
                continue;
            }
            for x in 0..self.size() {
                if self.apply(op, &vec![x; k]) != x {
                    return Some((op, x));
                }
            }
        }
        None
    }

    /// Every pair of Ω-operations commutes: for ω m-ary and φ n-ary and every
    /// m×n matrix, applying φ to rows then ω equals applying ω to columns then φ.
    pub fn is_entropic(&self) -> bool {
        self.entropy_witness().is_none()
    }

    pub fn entropy_witness(&self) -> Option<(usize, usize, Vec<Elem>)> {
        let ops = self.omega_ops();
        for &w in &ops {
            for &p in &ops {
                let (m, n) = (self.arity(w), self.arity(p));
                let hit = find_tuple(self.size(), m * n, |mat| {
                    let rows: Vec<Elem> = (0..m).map(|i| self.apply(p, &mat[i * n..(i + 1) * n])).collect();
                    let cols: Vec<Elem> = (0..n)
                        .map(|j| {
                            let col: Vec<Elem> = (0..m).map(|i| mat[i * n + j]).collect();
                            self.apply(w, &col)
                        })
                        .collect();
                    (self.apply(w, &rows) != self.apply(p, &cols)).then(|| mat.to_vec())
                });
                if let Some(mat) = hit {
                    return Some((w, p, mat));
                }
            }
        }
        None
    }

    /// Every Ω-operation is invariant under permutations of its arguments.
    pub fn is_symmetric(&self) -> bool {
        // adjacent transpositions generate the symmetric group
        self.omega_ops().into_iter().all(|op| {
            let k = self.arity(op);
            find_tuple(self.size(), k, |args| {
                (0..k.saturating_sub(1)).find(|&i| {
                    let mut sw = args.to_vec();
                    sw.swap(i, i + 1);
                    self.apply(op, args) != self.apply(op, &sw)
                })
            })
            .is_none()
        })
    }

    /// Every Ω-operation value lies among its arguments.
    pub fn is_conservative(&self) -> bool {
        self.omega_ops().into_iter().all(|op| {
            let k = self.arity(op);
            k == 0
                || find_tuple(self.size(), k, |args| {
                    (!args.contains(&self.apply(op, args))).then_some(())
                })
                .is_none()
        })
    }

    /// Elements acting as a unit in every slot of every positive-arity Ω-operation.
    pub fn units(&self) -> Vec<Elem> {
        let ops: Vec<usize> = self.omega_ops().into_iter().filter(|&op| self.arity(op) > 0).collect();
        (0..self.size())
            .filter(|&u| {
                ops.iter().all(|&op| {
                    let k = self.arity(op);
                    (0..k).all(|slot| {
                        (0..self.size()).all(|x| {
                            let mut args = vec![u; k];
                            args[slot] = x;
                            self.apply(op, &args) == x
                        })
                    })
                })
            })
            .collect()
    }

    /// The unique unit, or an error naming how many were found.
    pub fn unique_unit(&self) -> Result<Elem> {
        match self.units().as_slice() {
            [u] => Ok(*u),
            us => Err(Error::UnitRequired { found: us.len() }),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstantRole {
    Zero,
    Unit,
}

/// A term flattened to postfix form for fast repeated evaluation.
#[derive(Clone, Debug)]
pub struct Compiled {
    code: Vec<Instr>,
}

#[derive(Clone, Copy, Debug)]
enum Instr {
    Var(usize),
    Op(usize, usize),
}

impl Compiled {
    fn new(alg: &FiniteAlgebra, t: &Term, vars: &[&str]) -> Result<Self> {
        fn go(alg: &FiniteAlgebra, t: &Term, vars: &[&str], code: &mut Vec<Instr>) -> Result<()> {
            match t {
                Term::Var(v) => {
                    let i = vars
                        .iter()
                        .position(|w| w == v)
                        .ok_or_else(|| Error::UnboundVariable(v.clone()))?;
                    code.push(Instr::Var(i));
                }
                Term::App(s, args) => {
                    let op = alg.op_index(s)?;
                    if alg.arity(op) != args.len() {
                        return Err(Error::ArityMismatch {
                            symbol: s.clone(),
                            expected: alg.arity(op),
                            found: args.len(),
                        });
                    }
                    for a in args {
                        go(alg, a, vars, code)?;
                    }
                    code.push(Instr::Op(op, args.len()));
                }
            }
            Ok(())
        }
        let mut code = Vec::new();
        go(alg, t, vars, &mut code)?;
        Ok(Compiled { code })
    }

    pub fn eval(&self, alg: &FiniteAlgebra, env: &[Elem]) -> Elem {
        let mut stack: Vec<Elem> = Vec::with_capacity(self.code.len());
        for ins in &self.code {
            match *ins {
                Instr::Var(i) => stack.push(env[i]),
                Instr::Op(op, k) => {
                    let at = stack.len() - k;
                    let v = alg.apply(op, &stack[at..]);
                    stack.truncate(at);
                    stack.push(v);
                }
            }
        }
        stack[0]
    }
}
