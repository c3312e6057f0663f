use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// One mismatch: `(index, lhs residue, rhs residue)`. The index is the
/// q-exponent for series checks and the evaluation point for scalar checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diff(pub u64, pub u64, pub u64);

/// Machine-readable verdict of a congruence check mod `p^l`.
///
/// The verdict is derived from `diffs` at construction and is `Pass` exactly
/// when no mismatch was recorded.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceCertificate {
    pub p: u64,
    pub l: u32,
    #[serde(rename = "N")]
    pub precision: Option<u64>,
    pub weight_twice_k: Option<u64>,
    verdict: Verdict,
    diffs: Vec<Diff>,
    pub corrected_exponents: Vec<u64>,
    pub check: String,
    pub notes: Vec<String>,
}

impl CongruenceCertificate {
    pub fn new(check: impl Into<String>, p: u64, l: u32, mut diffs: Vec<Diff>) -> Self {
        diffs.sort_by_key(|d| d.0);
        let verdict = if diffs.is_empty() {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        Self {
            p,
            l,
            precision: None,
            weight_twice_k: None,
            verdict,
            diffs,
            corrected_exponents: Vec::new(),
            check: check.into(),
            notes: Vec::new(),
        }
    }

    pub fn with_precision(mut self, n: u64) -> Self {
        self.precision = Some(n);
        self
    }

    pub fn with_weight(mut self, twice_k: u64) -> Self {
        self.weight_twice_k = Some(twice_k);
        self
    }

    pub fn with_corrected(mut self, exponents: Vec<u64>) -> Self {
        self.corrected_exponents = exponents;
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn verdict(&self) -> Verdict {
        self.verdict
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn diffs(&self) -> &[Diff] {
        &self.diffs
    }

    pub fn diff_indices(&self) -> Vec<u64> {
        self.diffs.iter().map(|d| d.0).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serializes")
    }
}
