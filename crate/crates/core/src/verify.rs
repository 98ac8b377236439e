//! Exhaustive checks of a family against the properties its construction
//! promises: complementarity inside each set `k`, the in-phase peak `M L`,
//! and the `p^m` bound between codes of different sets.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::construction::{CodeFamily, FamilyKind};
use crate::correlation::{pair_sweep, report_from_stats, Arithmetic, PairStats};
use crate::error::Result;
use crate::poly::SCHEMA_VERSION;

/// At most this many failures are listed in a report.
pub const MAX_LISTED_FAILURES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    WithinSet,
    ZeroShiftPeak,
    CrossSet,
}

/// A code pair and shift where a check fails.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub check: Check,
    pub codes: [usize; 2],
    pub tau: isize,
    pub magnitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub schema_version: u32,
    pub p: u32,
    pub m: usize,
    pub n: usize,
    pub lambda: u32,
    #[serde(flatten)]
    pub kind: FamilyKind,
    pub codes: usize,
    pub tolerance: f64,
    pub arithmetic: Arithmetic,
    /// Largest nontrivial magnitude between codes of the same set, per `k`.
    pub within_set_theta: BTreeMap<u32, f64>,
    pub within_set_pass: bool,
    pub zero_shift_peak: usize,
    pub zero_shift_peak_pass: bool,
    /// Absent for a single-set family.
    pub cross_set_theta: Option<f64>,
    pub cross_set_bound: usize,
    pub cross_set_pass: bool,
    pub theta1: f64,
    pub theta2: f64,
    pub theta: f64,
    pub pass: bool,
    pub failure_count: usize,
    pub failures: Vec<Failure>,
}

impl VerifyReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

fn set_of(family: &CodeFamily, index: usize) -> u32 {
    match family.codes[index].label() {
        Some(label) => label.k,
        None => match family.kind {
            FamilyKind::Ccc { k } => k,
            FamilyKind::Qccs => 0,
        },
    }
}

/// Sweeps every code pair and shift of `family`.
pub fn verify_family(
    family: &CodeFamily,
    tolerance: f64,
    arithmetic: Arithmetic,
) -> Result<VerifyReport> {
    let stats = pair_sweep(&family.codes, arithmetic)?;
    let summary = report_from_stats(&stats, tolerance, arithmetic);
    let params = family.params;
    let peak = params.flock_size() * params.length();
    let bound = params.length();

    let mut within: BTreeMap<u32, f64> = family.ks().into_iter().map(|k| (k, 0.0)).collect();
    let mut cross: Option<f64> = None;
    let mut failures = Vec::new();
    for s in &stats {
        let (ki, kj) = (set_of(family, s.i), set_of(family, s.j));
        if s.i == s.j && !zero_shift_is_peak(s, peak) {
            failures.push(Failure {
                check: Check::ZeroShiftPeak,
                codes: [s.i, s.j],
                tau: 0,
                magnitude: s.zero_shift.iter().sum::<i64>() as f64,
            });
        }
        if ki == kj {
            let theta = within.entry(ki).or_insert(0.0);
            *theta = theta.max(s.max);
            let failing_tau = match s.exact_nonzero {
                Some((_, first)) => first,
                None => (s.max > tolerance).then_some(s.max_tau),
            };
            if let Some(tau) = failing_tau {
                failures.push(Failure {
                    check: Check::WithinSet,
                    codes: [s.i, s.j],
                    tau,
                    magnitude: s.max,
                });
            }
        } else {
            cross = Some(cross.map_or(s.max, |c: f64| c.max(s.max)));
            if s.max > bound as f64 + tolerance {
                failures.push(Failure {
                    check: Check::CrossSet,
                    codes: [s.i, s.j],
                    tau: s.max_tau,
                    magnitude: s.max,
                });
            }
        }
    }

    let failed = |check: Check| failures.iter().any(|f| f.check == check);
    let within_set_pass = !failed(Check::WithinSet);
    let zero_shift_peak_pass = !failed(Check::ZeroShiftPeak);
    let cross_set_pass = !failed(Check::CrossSet);
    let failure_count = failures.len();
    failures.truncate(MAX_LISTED_FAILURES);
    Ok(VerifyReport {
        schema_version: SCHEMA_VERSION,
        p: params.p,
        m: params.m,
        n: params.n,
        lambda: params.lambda,
        kind: family.kind,
        codes: family.codes.len(),
        tolerance,
        arithmetic,
        within_set_theta: within,
        within_set_pass,
        zero_shift_peak: peak,
        zero_shift_peak_pass,
        cross_set_theta: cross,
        cross_set_bound: bound,
        cross_set_pass,
        theta1: summary.theta1,
        theta2: summary.theta2,
        theta: summary.theta,
        pass: within_set_pass && zero_shift_peak_pass && cross_set_pass,
        failure_count,
        failures,
    })
}

// Every product at zero shift of a code with itself is xi^0.
fn zero_shift_is_peak(s: &PairStats, peak: usize) -> bool {
    s.zero_shift.first() == Some(&(peak as i64)) && s.zero_shift[1..].iter().all(|&c| c == 0)
}
