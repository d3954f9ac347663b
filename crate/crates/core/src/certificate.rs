//! Structured verdict records shared by every check in the crate.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Witnesses retained per certificate; further violations are only counted.
pub const MAX_WITNESSES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    /// Conjunction: any failure dominates, then any inconclusive part.
    pub fn and(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (Fail, _) | (_, Fail) => Fail,
            (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
            _ => Pass,
        }
    }

    pub fn is_pass(self) -> bool {
        self == Verdict::Pass
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub vertices: Vec<String>,
    pub value: f64,
    pub note: String,
}

impl Witness {
    pub fn new(vertices: Vec<String>, value: f64, note: impl Into<String>) -> Self {
        Self { vertices, value, note: note.into() }
    }
}

/// Running minimum of a slack quantity (bound minus measured value).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Slack {
    pub min: f64,
    pub argmin: Option<String>,
    pub count: usize,
}

impl Default for Slack {
    fn default() -> Self {
        Slack { min: f64::INFINITY, argmin: None, count: 0 }
    }
}

impl Slack {
    pub fn observe(&mut self, value: f64, at: impl fmt::Display) {
        self.count += 1;
        if value < self.min || self.argmin.is_none() {
            self.min = value;
            self.argmin = Some(at.to_string());
        }
    }

    pub fn merge(&mut self, other: &Slack) {
        self.count += other.count;
        if other.min < self.min || (self.argmin.is_none() && other.argmin.is_some()) {
            self.min = other.min;
            self.argmin = other.argmin.clone();
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub condition: String,
    pub scope: String,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<Witness>,
    #[serde(default)]
    pub violations: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slack: Option<Slack>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub values: Vec<(String, f64)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub parts: Vec<Certificate>,
}

impl Certificate {
    pub fn new(condition: impl Into<String>, scope: impl Into<String>) -> Self {
        Certificate {
            condition: condition.into(),
            scope: scope.into(),
            verdict: Verdict::Pass,
            witnesses: Vec::new(),
            violations: 0,
            slack: None,
            reason: None,
            values: Vec::new(),
            parts: Vec::new(),
        }
    }

    pub fn inconclusive(condition: impl Into<String>, scope: impl Into<String>, reason: impl Into<String>) -> Self {
        let mut c = Certificate::new(condition, scope);
        c.mark_inconclusive(reason);
        c
    }

    /// Records a violation. The first [`MAX_WITNESSES`] are kept verbatim.
    pub fn fail(&mut self, witness: Witness) {
        self.verdict = Verdict::Fail;
        self.violations += 1;
        if self.witnesses.len() < MAX_WITNESSES {
            self.witnesses.push(witness);
        }
    }

    /// Downgrades a passing certificate; failures stay failures.
    pub fn mark_inconclusive(&mut self, reason: impl Into<String>) {
        let reason = reason.into();
        self.verdict = self.verdict.and(Verdict::Inconclusive);
        match &mut self.reason {
            Some(r) if !r.contains(&reason) => {
                r.push_str("; ");
                r.push_str(&reason);
            }
            Some(_) => {}
            None => self.reason = Some(reason),
        }
    }

    pub fn with_value(mut self, name: impl Into<String>, value: f64) -> Self {
        self.values.push((name.into(), value));
        self
    }

    pub fn push_value(&mut self, name: impl Into<String>, value: f64) {
        self.values.push((name.into(), value));
    }

    pub fn value(&self, name: &str) -> Option<f64> {
        self.values.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }

    /// Attaches a sub-certificate and folds its verdict into this one.
    pub fn push_part(&mut self, part: Certificate) {
        match part.verdict {
            Verdict::Pass => {}
            Verdict::Fail => {
                self.verdict = Verdict::Fail;
                self.violations += 1;
                if self.witnesses.len() < MAX_WITNESSES {
                    self.witnesses.push(Witness::new(vec![], f64::NAN, format!("sub-check '{}' failed", part.condition)));
                }
            }
            Verdict::Inconclusive => {
                let why = part.reason.clone().unwrap_or_else(|| "no reason given".into());
                self.mark_inconclusive(format!("{}: {}", part.condition, why));
            }
        }
        self.parts.push(part);
    }

    pub fn is_pass(&self) -> bool {
        self.verdict.is_pass()
    }

    pub fn part(&self, condition: &str) -> Option<&Certificate> {
        self.parts.iter().find(|p| p.condition == condition)
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {} on {}", self.verdict, self.condition, self.scope)?;
        if let Some(r) = &self.reason {
            write!(f, " ({r})")?;
        }
        if let Some(s) = &self.slack {
            write!(f, " min slack {:.3e}", s.min)?;
            if let Some(at) = &s.argmin {
                write!(f, " at {at}")?;
            }
        }
        Ok(())
    }
}
