use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::specfun::TailProbability;

/// Relative slack used when comparing an actual value against its bound.
pub const BOUND_SLACK: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoundKind {
    /// κ([B, γ(x+y)]) with `x ⊥ span(B)`.
    General,
    /// κ([B, (x+y)/‖x+y‖]) under the ε hypothesis.
    Eps,
    /// σ_max([B, cγ]) through the orthonormal factor.
    SigmaMax,
    /// σ_min([B, cγ]) through the orthonormal factor.
    SigmaMin,
    /// κ([B, cγ]) through κ([Q, c]).
    ViaQ,
    /// κ([B, cγ]) for unit-norm columns.
    UnitColumns,
    /// κ([B, q]) for unit columns and unit `q`.
    UnitQ,
}

impl BoundKind {
    pub fn name(self) -> &'static str {
        match self {
            BoundKind::General => "kappa_general",
            BoundKind::Eps => "kappa_eps",
            BoundKind::SigmaMax => "sigma_max",
            BoundKind::SigmaMin => "sigma_min",
            BoundKind::ViaQ => "kappa_via_q",
            BoundKind::UnitColumns => "kappa_unit_columns",
            BoundKind::UnitQ => "kappa_unit_q",
        }
    }
}

/// Whether the bound caps the quantity from above or below.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Upper,
    Lower,
}

/// Scalar inputs a bound was evaluated from. Fields that do not apply are `None`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct BoundInputs {
    pub sigma_max: Option<f64>,
    pub sigma_min: Option<f64>,
    pub gamma: Option<f64>,
    /// ‖x+y‖
    pub xy_norm: Option<f64>,
    /// ‖Bᵀy‖
    pub bty_norm: Option<f64>,
    pub c_norm: Option<f64>,
    pub r_norm: Option<f64>,
    pub eps: Option<f64>,
    pub kappa_b: Option<f64>,
}

impl BoundInputs {
    fn fields(&self) -> [(&'static str, Option<f64>); 9] {
        [
            ("sigma_max", self.sigma_max),
            ("sigma_min", self.sigma_min),
            ("gamma", self.gamma),
            ("xy_norm", self.xy_norm),
            ("bty_norm", self.bty_norm),
            ("c_norm", self.c_norm),
            ("r_norm", self.r_norm),
            ("eps", self.eps),
            ("kappa_b", self.kappa_b),
        ]
    }
}

/// One evaluated bound with its inputs and, when computable, the true value.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub kind: BoundKind,
    pub relation: Relation,
    /// `+∞` (upper) or `0` (lower) when the formula has no finite value.
    pub bound_value: f64,
    pub actual_value: Option<f64>,
    pub inputs: BoundInputs,
    pub preconditions_met: bool,
    pub explanation: String,
}

impl BoundReport {
    pub const CSV_HEADER: &'static str = "kind,relation,bound,actual,preconditions_met,\
sigma_max,sigma_min,gamma,xy_norm,bty_norm,c_norm,r_norm,eps,kappa_b";

    /// `Some(true)` if the actual value respects the bound within
    /// [`BOUND_SLACK`], `None` when preconditions fail or nothing was measured.
    pub fn holds(&self) -> Option<bool> {
        if !self.preconditions_met {
            return None;
        }
        let actual = self.actual_value?;
        Some(match self.relation {
            Relation::Upper => actual <= self.bound_value * (1.0 + BOUND_SLACK),
            Relation::Lower => actual >= self.bound_value * (1.0 - BOUND_SLACK),
        })
    }

    /// Row matching [`Self::CSV_HEADER`]. Missing values are empty fields.
    pub fn csv_row(&self) -> String {
        use core::fmt::Write;
        let mut s = String::new();
        let rel = match self.relation {
            Relation::Upper => "upper",
            Relation::Lower => "lower",
        };
        let _ = write!(s, "{},{},{},", self.kind.name(), rel, self.bound_value);
        push_opt(&mut s, self.actual_value);
        let _ = write!(s, ",{}", self.preconditions_met);
        for (_, v) in self.inputs.fields() {
            s.push(',');
            push_opt(&mut s, v);
        }
        s
    }

    pub(crate) fn unmet(mut self, why: &str) -> Self {
        self.preconditions_met = false;
        if !self.explanation.is_empty() {
            self.explanation.push_str("; ");
        }
        self.explanation.push_str(why);
        self
    }
}

fn push_opt(s: &mut String, v: Option<f64>) {
    use core::fmt::Write;
    if let Some(v) = v {
        let _ = write!(s, "{v}");
    }
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.relation {
            Relation::Upper => "<=",
            Relation::Lower => ">=",
        };
        writeln!(f, "[{}]", self.kind.name())?;
        match self.actual_value {
            Some(a) => writeln!(f, "  actual {a:.12e} {op} bound {:.12e}", self.bound_value)?,
            None => writeln!(f, "  bound {:.12e}", self.bound_value)?,
        }
        let verdict = match self.holds() {
            Some(true) => "holds",
            Some(false) => "VIOLATED",
            None => "not checked",
        };
        writeln!(f, "  preconditions met: {}  ({verdict})", self.preconditions_met)?;
        for (name, v) in self.inputs.fields() {
            if let Some(v) = v {
                writeln!(f, "  {name:<10} {v:.12e}")?;
            }
        }
        if !self.explanation.is_empty() {
            writeln!(f, "  note: {}", self.explanation)?;
        }
        Ok(())
    }
}

/// Union bound for a chain of noisy orthogonalisation steps.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainBoundReport {
    /// Growth factor for each step `i = 2..=n`.
    pub per_step_factors: Vec<f64>,
    pub kappa_product_bound: f64,
    /// `max(0, 1 − Σ (1 − p_i))`.
    pub probability_lower_bound: f64,
    /// `p_i` for each step, aligned with `per_step_factors`.
    pub step_probabilities: Vec<TailProbability>,
}
