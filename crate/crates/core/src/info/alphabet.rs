use std::fmt;

use crate::error::{invalid, Result};

/// Ordered set of distinct symbol labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Vec<String>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(symbols: impl IntoIterator<Item = S>) -> Result<Self> {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(invalid("alphabet must be nonempty"));
        }
        for (i, s) in symbols.iter().enumerate() {
            if symbols[..i].contains(s) {
                return Err(invalid(format!("duplicate symbol label {s:?}")));
            }
        }
        Ok(Self { symbols })
    }

    /// `{"0", "1", ..., "size-1"}`.
    pub fn indexed(size: usize) -> Result<Self> {
        Self::new((0..size).map(|i| i.to_string()))
    }

    /// `{prefix0, prefix1, ...}`.
    pub fn labeled(prefix: &str, size: usize) -> Result<Self> {
        Self::new((0..size).map(|i| format!("{prefix}{i}")))
    }

    pub fn binary() -> Self {
        Self::indexed(2).expect("two labels")
    }

    pub fn singleton() -> Self {
        Self::indexed(1).expect("one label")
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn symbol(&self, index: usize) -> &str {
        &self.symbols[index]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s == label)
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.symbols.join(", "))
    }
}
