use serde::{Deserialize, Serialize};

/// Outcome of checking one claimed bound or identity on concrete parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// The claim's hypothesis does not hold for these parameters.
    Inapplicable,
    /// A search cap was reached before both sides were known.
    Unknown,
}

impl CheckStatus {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        }
    }

    pub fn is_ok(&self) -> bool {
        matches!(self, CheckStatus::Pass | CheckStatus::Inapplicable)
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::Inapplicable => "inapplicable",
            CheckStatus::Unknown => "unknown",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremCheck {
    pub id: &'static str,
    pub claim: String,
    pub status: CheckStatus,
    pub detail: String,
}

impl TheoremCheck {
    pub fn new(id: &'static str, claim: String, status: CheckStatus, detail: String) -> Self {
        TheoremCheck {
            id,
            claim,
            status,
            detail,
        }
    }

    pub fn inapplicable(id: &'static str, claim: String, why: String) -> Self {
        Self::new(id, claim, CheckStatus::Inapplicable, why)
    }
}
