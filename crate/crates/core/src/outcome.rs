//! Pass/fail verdicts with a first witness.

use std::fmt;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Outcome {
    pub name: String,
    /// Number of individual identities checked.
    pub checked: usize,
    pub witness: Option<String>,
}

impl Outcome {
    pub fn new(name: impl Into<String>) -> Self {
        Outcome {
            name: name.into(),
            checked: 0,
            witness: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }

    /// Records one identity; keeps only the first failure.
    pub fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.witness.is_none() {
            self.witness = Some(witness());
        }
    }

    pub fn fail(&mut self, witness: impl Into<String>) {
        self.checked += 1;
        if self.witness.is_none() {
            self.witness = Some(witness.into());
        }
    }

    /// Folds another outcome into this one.
    pub fn absorb(&mut self, other: Outcome) {
        self.checked += other.checked;
        if self.witness.is_none() {
            self.witness = other.witness.map(|w| format!("{}: {w}", other.name));
        }
    }

    pub fn merge_all(name: impl Into<String>, parts: impl IntoIterator<Item = Outcome>) -> Outcome {
        let mut out = Outcome::new(name);
        for p in parts {
            out.absorb(p);
        }
        out
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            None => write!(f, "{}: pass ({} checked)", self.name, self.checked),
            Some(w) => write!(f, "{}: FAIL after {} checked; {w}", self.name, self.checked),
        }
    }
}
