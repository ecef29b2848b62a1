//! Pivot rules for exact elimination, selectable by name.
//!
//! Every solve in the pipeline that has a free choice (a particular solution,
//! a complement, an exact correction) makes it through a [`PivotRule`]. The
//! default rule scans columns from the lowest basis index; the alternative
//! rule scans from the highest and is used to confirm that quantities which
//! must not depend on that choice really do not.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};

pub trait PivotRule: Send + Sync {
    fn name(&self) -> &'static str;

    /// Order in which columns are offered as pivot candidates.
    fn column_order(&self, ncols: usize) -> Vec<usize>;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct LowestIndexFirst;

impl PivotRule for LowestIndexFirst {
    fn name(&self) -> &'static str {
        "lowest"
    }

    fn column_order(&self, ncols: usize) -> Vec<usize> {
        (0..ncols).collect()
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct HighestIndexFirst;

impl PivotRule for HighestIndexFirst {
    fn name(&self) -> &'static str {
        "highest"
    }

    fn column_order(&self, ncols: usize) -> Vec<usize> {
        (0..ncols).rev().collect()
    }
}

pub struct PivotRegistry {
    rules: BTreeMap<&'static str, Arc<dyn PivotRule>>,
}

impl PivotRegistry {
    pub fn empty() -> Self {
        PivotRegistry {
            rules: BTreeMap::new(),
        }
    }

    pub fn with_builtin() -> Self {
        let mut reg = Self::empty();
        reg.register(Arc::new(LowestIndexFirst));
        reg.register(Arc::new(HighestIndexFirst));
        reg
    }

    pub fn register(&mut self, rule: Arc<dyn PivotRule>) {
        self.rules.insert(rule.name(), rule);
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn PivotRule>> {
        self.rules.get(name).cloned().ok_or_else(|| Error::Unknown {
            kind: "pivot rule",
            name: name.to_string(),
            available: self.names().join(", "),
        })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.rules.keys().copied().collect()
    }
}

impl Default for PivotRegistry {
    fn default() -> Self {
        Self::with_builtin()
    }
}

pub fn default_rule() -> Arc<dyn PivotRule> {
    Arc::new(LowestIndexFirst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_lookup() {
        let reg = PivotRegistry::with_builtin();
        assert_eq!(reg.names(), vec!["highest", "lowest"]);
        assert_eq!(reg.get("highest").unwrap().column_order(3), vec![2, 1, 0]);
        let err = reg.get("random").err().unwrap();
        assert!(err.to_string().contains("lowest"));
    }
}
