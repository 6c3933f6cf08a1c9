//! Pass/fail bookkeeping shared by the structural checks.

use serde::Serialize;

/// Failures kept per clause; the count is always exact.
const MAX_DETAILS: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Clause {
    pub name: String,
    pub checked: usize,
    pub failed: usize,
    pub failures: Vec<String>,
}

impl Clause {
    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Checklist {
    pub clauses: Vec<Clause>,
}

impl Checklist {
    pub fn new() -> Self {
        Self::default()
    }

    fn clause(&mut self, name: &str) -> &mut Clause {
        let pos = match self.clauses.iter().position(|c| c.name == name) {
            Some(p) => p,
            None => {
                self.clauses.push(Clause { name: name.to_string(), checked: 0, failed: 0, failures: Vec::new() });
                self.clauses.len() - 1
            }
        };
        &mut self.clauses[pos]
    }

    /// Registers a clause without evaluating anything.
    pub fn declare(&mut self, name: &str) {
        self.clause(name);
    }

    pub fn check(&mut self, name: &str, ok: bool, detail: impl FnOnce() -> String) {
        let c = self.clause(name);
        c.checked += 1;
        if !ok {
            c.failed += 1;
            if c.failures.len() < MAX_DETAILS {
                c.failures.push(detail());
            }
        }
    }

    pub fn merge(&mut self, other: &Checklist) {
        for o in &other.clauses {
            let c = self.clause(&o.name);
            c.checked += o.checked;
            c.failed += o.failed;
            for f in &o.failures {
                if c.failures.len() < MAX_DETAILS {
                    c.failures.push(f.clone());
                }
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.clauses.iter().all(Clause::passed)
    }

    pub fn failed_clauses(&self) -> Vec<&Clause> {
        self.clauses.iter().filter(|c| !c.passed()).collect()
    }

    pub fn get(&self, name: &str) -> Option<&Clause> {
        self.clauses.iter().find(|c| c.name == name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_and_merges() {
        let mut a = Checklist::new();
        a.check("x", true, || unreachable!());
        a.check("x", false, || "bad".into());
        a.declare("y");
        let mut b = Checklist::new();
        b.check("y", true, String::new);
        b.merge(&a);
        assert_eq!(b.get("x").unwrap().checked, 2);
        assert_eq!(b.get("x").unwrap().failures, vec!["bad".to_string()]);
        assert_eq!(b.get("y").unwrap().checked, 1);
        assert!(!b.passed());
        assert_eq!(b.failed_clauses().len(), 1);
    }
}
