use std::collections::BTreeMap;
use std::fmt::Display;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// The comparison is ill-posed at these parameters (e.g. a value that is
    /// not p-integral where a residue was required).
    Vacuous,
}

/// One checked instance of an identity or congruence.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub theorem: String,
    pub params: BTreeMap<String, String>,
    pub lhs: String,
    pub rhs: String,
    pub status: Status,
    /// Conjectural statements are reported but never count as failures
    /// unless the caller asks for that.
    pub conjecture: bool,
    pub discrepancy: String,
}

impl VerificationReport {
    pub fn new(theorem: &str) -> Self {
        VerificationReport {
            theorem: theorem.to_string(),
            params: BTreeMap::new(),
            lhs: String::new(),
            rhs: String::new(),
            status: Status::Vacuous,
            conjecture: false,
            discrepancy: String::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Display) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn conjecture(mut self) -> Self {
        self.conjecture = true;
        self
    }

    /// Exact equality of two displayed values.
    pub fn exact(mut self, lhs: impl Display, rhs: impl Display, equal: bool, diff: impl Display) -> Self {
        self.lhs = lhs.to_string();
        self.rhs = rhs.to_string();
        self.status = if equal { Status::Pass } else { Status::Fail };
        self.discrepancy = diff.to_string();
        self
    }

    pub fn integers(self, lhs: i128, rhs: i128) -> Self {
        self.exact(lhs, rhs, lhs == rhs, lhs - rhs)
    }

    /// Residues modulo `modulus`; the discrepancy is (lhs - rhs) mod modulus.
    pub fn residues(self, lhs: u64, rhs: u64, modulus: u64) -> Self {
        let diff = (lhs as i128 - rhs as i128).rem_euclid(modulus as i128);
        self.exact(lhs, rhs, diff == 0, diff).param("modulus", modulus)
    }

    /// Approximate comparison: passes when the certified distance is below `tol`.
    pub fn within(mut self, lhs: impl Display, rhs: impl Display, distance: f64, tol: f64) -> Self {
        self.lhs = lhs.to_string();
        self.rhs = rhs.to_string();
        self.status = if distance < tol { Status::Pass } else { Status::Fail };
        self.discrepancy = format!("{distance:.3e}");
        self
    }

    pub fn vacuous(mut self, why: impl Display) -> Self {
        self.status = Status::Vacuous;
        self.discrepancy = why.to_string();
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// A failure that should affect the exit status.
    pub fn is_hard_failure(&self, strict_conjectures: bool) -> bool {
        self.status == Status::Fail && (!self.conjecture || strict_conjectures)
    }
}
