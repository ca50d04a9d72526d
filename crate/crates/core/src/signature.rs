use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finitary type: operation symbols with arities, plus optional designations
/// of a binary join and of the 0-ary zero and unit symbols.
///
/// The designated symbols are listed among [`Signature::ops`] like any other
/// symbol, but they are not part of the Ω-reduct (see [`Signature::is_omega`]).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    name: String,
    ops: Vec<(String, usize)>,
    join: Option<String>,
    zero: Option<String>,
    unit: Option<String>,
}

impl Signature {
    pub fn new(name: impl Into<String>) -> Self {
        Signature {
            name: name.into(),
            ops: Vec::new(),
            join: None,
            zero: None,
            unit: None,
        }
    }

    /// Builder form of [`Signature::push_op`]; panics on a duplicate symbol.
    pub fn with_op(mut self, symbol: impl Into<String>, arity: usize) -> Self {
        self.push_op(symbol, arity).expect("duplicate symbol");
        self
    }

    pub fn push_op(&mut self, symbol: impl Into<String>, arity: usize) -> Result<()> {
        let symbol = symbol.into();
        if self.arity(&symbol).is_some() {
            return Err(Error::DuplicateSymbol(symbol));
        }
        self.ops.push((symbol, arity));
        Ok(())
    }

    fn designate(&mut self, symbol: &str, arity: usize) -> Result<()> {
        match self.arity(symbol) {
            Some(a) if a != arity => Err(Error::BadArity {
                symbol: symbol.to_string(),
                arity: a,
                expected: arity,
            }),
            Some(_) => Ok(()),
            None => self.push_op(symbol, arity),
        }
    }

    /// Marks `symbol` as the join, declaring it as a binary symbol if it is new.
    pub fn designate_join(&mut self, symbol: impl Into<String>) -> Result<()> {
        let symbol = symbol.into();
        self.designate(&symbol, 2)?;
        self.join = Some(symbol);
        Ok(())
    }

    pub fn designate_zero(&mut self, symbol: impl Into<String>) -> Result<()> {
        let symbol = symbol.into();
        self.designate(&symbol, 0)?;
        self.zero = Some(symbol);
        Ok(())
    }

    pub fn designate_unit(&mut self, symbol: impl Into<String>) -> Result<()> {
        let symbol = symbol.into();
        self.designate(&symbol, 0)?;
        self.unit = Some(symbol);
        Ok(())
    }

    /// Drops a designation together with its symbol.
    pub(crate) fn remove_symbol(&mut self, symbol: &str) {
        self.ops.retain(|(s, _)| s != symbol);
        for slot in [&mut self.join, &mut self.zero, &mut self.unit] {
            if slot.as_deref() == Some(symbol) {
                *slot = None;
            }
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn ops(&self) -> &[(String, usize)] {
        &self.ops
    }

    pub fn arity(&self, symbol: &str) -> Option<usize> {
        self.index_of(symbol).map(|i| self.ops[i].1)
    }

    pub fn index_of(&self, symbol: &str) -> Option<usize> {
        self.ops.iter().position(|(s, _)| s == symbol)
    }

    pub fn join_symbol(&self) -> Option<&str> {
        self.join.as_deref()
    }

    pub fn zero_symbol(&self) -> Option<&str> {
        self.zero.as_deref()
    }

    pub fn unit_symbol(&self) -> Option<&str> {
        self.unit.as_deref()
    }

    /// True for the symbols of the Ω-reduct: everything except the designated
    /// join, zero and unit.
    pub fn is_omega(&self, symbol: &str) -> bool {
        self.join_symbol() != Some(symbol) && self.zero_symbol() != Some(symbol) && self.unit_symbol() != Some(symbol)
    }

    /// Indices of the Ω-reduct symbols, in declaration order.
    pub fn omega_indices(&self) -> Vec<usize> {
        (0..self.ops.len()).filter(|&i| self.is_omega(&self.ops[i].0)).collect()
    }

    /// Picks a symbol name not yet used, starting from `base`.
    pub(crate) fn fresh_symbol(&self, base: &str) -> String {
        let mut name = base.to_string();
        while self.arity(&name).is_some() {
            name.push('_');
        }
        name
    }

    pub fn validate(&self) -> Result<()> {
        for (i, (s, _)) in self.ops.iter().enumerate() {
            if self.ops[..i].iter().any(|(t, _)| t == s) {
                return Err(Error::DuplicateSymbol(s.clone()));
            }
        }
        let checks = [(&self.join, 2), (&self.zero, 0), (&self.unit, 0)];
        for (slot, expected) in checks {
            if let Some(s) = slot {
                match self.arity(s) {
                    None => return Err(Error::UnknownSymbol(s.clone())),
                    Some(a) if a != expected => {
                        return Err(Error::BadArity {
                            symbol: s.clone(),
                            arity: a,
                            expected,
                        })
                    }
                    _ => {}
                }
            }
        }
        Ok(())
    }

    /// Renders the signature in the DSL accepted by [`crate::parse_signature`].
    pub fn to_dsl(&self) -> String {
        // names are free text; keep only what the tokenizer reads as a word
        let name: String = self
            .name
            .chars()
            .map(|c| if crate::parse::is_word_char(c) { c } else { '_' })
            .collect();
        let mut out = format!("signature {}", if name.is_empty() { "_" } else { &name });
        for (s, a) in &self.ops {
            if *a == 0 {
                out.push_str(&format!(" const {s}"));
            } else {
                out.push_str(&format!(" op {s}:{a}"));
            }
        }
        if let Some(j) = &self.join {
            out.push_str(&format!(" join {j}"));
        }
        if let Some(z) = &self.zero {
            out.push_str(&format!(" zero {z}"));
        }
        if let Some(u) = &self.unit {
            out.push_str(&format!(" unit {u}"));
        }
        out.push_str(" end");
        out
    }
}
