//! Aperiodic correlation of phase sequences and codes.
//!
//! For `0 <= tau < L` the cross-correlation is
//! `sum_{a=0}^{L-tau-1} a_{a+tau} conj(b_a)` and for `-L < tau < 0` it is
//! `sum_{a=0}^{L+tau-1} a_a conj(b_{a-tau})`; ZERO entries contribute
//! nothing. Each product of two phases is `xi^(x - y)`, so the engine only
//! counts how often each phase difference occurs and realizes the complex
//! value from those counts (see [`crate::cyclotomic`]). The counts are exact,
//! which is what the exact mode tests for zero.

use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::CyclotomicRing;
use crate::error::{Error, Result};
use crate::poly::{Polynomial, Restriction};
use crate::seqgen::{restricted_sequences, sequence_of, PhaseSequence};

/// Default absolute tolerance for treating a correlation value as zero.
pub const DEFAULT_ZERO_TOL: f64 = 1e-6;

/// Magnitudes closer than this are ties for argmax purposes.
const TIE_EPS: f64 = 1e-9;

pub type CorrelationValue = Complex64;

/// How correlation values are tested for zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Arithmetic {
    /// Magnitudes compared against the zero tolerance.
    #[default]
    Float,
    /// Zero decided exactly in `Z[xi_lambda]`.
    Exact,
}

/// `(k, t)` position of a code inside a constructed family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CodeLabel {
    pub k: u32,
    pub t: usize,
}

/// `M x L` matrix of phase sequences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Code {
    rows: Vec<PhaseSequence>,
    label: Option<CodeLabel>,
}

impl Code {
    pub fn new(rows: Vec<PhaseSequence>, label: Option<CodeLabel>) -> Result<Self> {
        let first = rows
            .first()
            .ok_or_else(|| Error::ShapeMismatch("a code needs at least one row".into()))?;
        if let Some(bad) = rows
            .iter()
            .find(|r| r.len() != first.len() || r.lambda() != first.lambda())
        {
            return Err(Error::ShapeMismatch(format!(
                "row of length {} over Z_{} in a code of length {} over Z_{}",
                bad.len(),
                bad.lambda(),
                first.len(),
                first.lambda()
            )));
        }
        Ok(Code { rows, label })
    }

    pub fn rows(&self) -> &[PhaseSequence] {
        &self.rows
    }

    pub fn label(&self) -> Option<CodeLabel> {
        self.label
    }

    /// `M`, the number of rows.
    pub fn flock_size(&self) -> usize {
        self.rows.len()
    }

    /// `L`, the row length.
    pub fn length(&self) -> usize {
        self.rows[0].len()
    }

    pub fn lambda(&self) -> u32 {
        self.rows[0].lambda()
    }
}

fn check_shift(len: usize, tau: isize) -> Result<()> {
    if tau.unsigned_abs() >= len {
        return Err(Error::InvalidInput(format!(
            "shift {tau} outside (-{len}, {len})"
        )));
    }
    Ok(())
}

fn check_pair(a: &PhaseSequence, b: &PhaseSequence) -> Result<()> {
    if a.len() != b.len() || a.lambda() != b.lambda() {
        return Err(Error::ShapeMismatch(format!(
            "length {} over Z_{} vs length {} over Z_{}",
            a.len(),
            a.lambda(),
            b.len(),
            b.lambda()
        )));
    }
    Ok(())
}

fn check_codes(b1: &Code, b2: &Code) -> Result<()> {
    if b1.flock_size() != b2.flock_size()
        || b1.length() != b2.length()
        || b1.lambda() != b2.lambda()
    {
        return Err(Error::ShapeMismatch(format!(
            "{}x{} code over Z_{} vs {}x{} code over Z_{}",
            b1.flock_size(),
            b1.length(),
            b1.lambda(),
            b2.flock_size(),
            b2.length(),
            b2.lambda()
        )));
    }
    Ok(())
}

/// Adds the phase-difference histogram of `a` against `b` at shift `tau`.
/// Shapes and shift are assumed valid.
pub(crate) fn accumulate(
    a: &[Option<u32>],
    b: &[Option<u32>],
    tau: isize,
    lambda: u32,
    counts: &mut [i64],
) {
    let len = a.len();
    let shift = tau.unsigned_abs();
    let (lead, lag) = if tau >= 0 {
        (&a[shift..], &b[..len - shift])
    } else {
        (&a[..len - shift], &b[shift..])
    };
    for (x, y) in lead.iter().zip(lag) {
        if let (Some(x), Some(y)) = (x, y) {
            let mut d = x + lambda - y;
            if d >= lambda {
                d -= lambda;
            }
            counts[d as usize] += 1;
        }
    }
}

/// Exact phase-difference counts of the cross-correlation at `tau`.
pub fn accf_counts(a: &PhaseSequence, b: &PhaseSequence, tau: isize) -> Result<Vec<i64>> {
    check_pair(a, b)?;
    check_shift(a.len(), tau)?;
    let mut counts = vec![0; a.lambda() as usize];
    accumulate(a.entries(), b.entries(), tau, a.lambda(), &mut counts);
    Ok(counts)
}

pub fn accf(a: &PhaseSequence, b: &PhaseSequence, tau: isize) -> Result<CorrelationValue> {
    let counts = accf_counts(a, b, tau)?;
    Ok(CyclotomicRing::new(a.lambda())?.to_complex(&counts))
}

/// Row-wise summed counts of the code cross-correlation at `tau`.
pub fn code_accf_counts(b1: &Code, b2: &Code, tau: isize) -> Result<Vec<i64>> {
    check_codes(b1, b2)?;
    check_shift(b1.length(), tau)?;
    let mut counts = vec![0; b1.lambda() as usize];
    for (r1, r2) in b1.rows.iter().zip(&b2.rows) {
        accumulate(r1.entries(), r2.entries(), tau, b1.lambda(), &mut counts);
    }
    Ok(counts)
}

pub fn code_accf(b1: &Code, b2: &Code, tau: isize) -> Result<CorrelationValue> {
    let counts = code_accf_counts(b1, b2, tau)?;
    Ok(CyclotomicRing::new(b1.lambda())?.to_complex(&counts))
}

/// Checks `Theta(psi(f), psi(f'))(tau) = sum_{c1, c2} Theta(psi(f|c1), psi(f'|c2))(tau)`
/// over `J`, returning the absolute difference of the two sides.
pub fn lemma1_residual(f: &Polynomial, f2: &Polynomial, j: &[usize], tau: isize) -> Result<f64> {
    if f.p() != f2.p() || f.arity() != f2.arity() || f.lambda() != f2.lambda() {
        return Err(Error::ShapeMismatch(
            "functions live on different domains".into(),
        ));
    }
    for r in [f, f2] {
        Restriction::new(j.to_vec(), vec![0; j.len()])?.check_against(r.p(), r.arity())?;
    }
    let whole = accf(&sequence_of(f)?, &sequence_of(f2)?, tau)?;
    let left = restricted_sequences(f, j)?;
    let right = restricted_sequences(f2, j)?;
    let mut split = Complex64::new(0.0, 0.0);
    for a in &left {
        for b in &right {
            split += accf(a, b, tau)?;
        }
    }
    Ok((whole - split).norm())
}

pub fn lemma1_decompose_check(
    f: &Polynomial,
    f2: &Polynomial,
    j: &[usize],
    tau: isize,
    tol: f64,
) -> Result<bool> {
    Ok(lemma1_residual(f, f2, j, tau)? <= tol)
}

/// `|Theta(B1, B2)(tau)|` for every `-L < tau < L`.
pub fn shift_profile(b1: &Code, b2: &Code) -> Result<Vec<(isize, f64)>> {
    check_codes(b1, b2)?;
    let ring = CyclotomicRing::new(b1.lambda())?;
    let len = b1.length() as isize;
    (-(len - 1)..len)
        .map(|tau| {
            let counts = code_accf_counts(b1, b2, tau)?;
            Ok((tau, ring.to_complex(&counts).norm()))
        })
        .collect()
}

/// Per-shift magnitude CSV with columns `tau,|value|`.
pub fn write_shift_profile<W: Write>(profile: &[(isize, f64)], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["tau", "|value|"])?;
    for (tau, mag) in profile {
        w.write_record([tau.to_string(), format!("{mag:.12}")])?;
    }
    w.flush()?;
    Ok(())
}

/// Location of a correlation value inside a family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Argmax {
    pub codes: [usize; 2],
    pub tau: isize,
}

/// Summary of one ordered code pair `(i, j)`, `i <= j`, over all shifts.
#[derive(Debug, Clone)]
pub struct PairStats {
    pub i: usize,
    pub j: usize,
    /// Largest magnitude over the nontrivial shifts (all shifts for
    /// `i != j`, nonzero shifts for `i == j`) and its lowest shift.
    pub max: f64,
    pub max_tau: isize,
    /// Exact counts at `tau = 0`.
    pub zero_shift: Vec<i64>,
    /// Exact mode only: nontrivial shifts whose value is not exactly zero,
    /// and the lowest such shift.
    pub exact_nonzero: Option<(usize, Option<isize>)>,
}

/// Sweeps every pair `i <= j` of `codes` over every shift, in parallel,
/// returning stats in `(i, j)` lexicographic order.
pub fn pair_sweep(codes: &[Code], arithmetic: Arithmetic) -> Result<Vec<PairStats>> {
    let first = codes
        .first()
        .ok_or_else(|| Error::InvalidInput("empty code family".into()))?;
    for c in codes {
        check_codes(first, c)?;
    }
    let ring = CyclotomicRing::new(first.lambda())?;
    let pairs: Vec<(usize, usize)> = (0..codes.len())
        .flat_map(|i| (i..codes.len()).map(move |j| (i, j)))
        .collect();
    Ok(pairs
        .par_iter()
        .map(|&(i, j)| pair_stats(&codes[i], &codes[j], i, j, &ring, arithmetic))
        .collect())
}

fn pair_stats(
    b1: &Code,
    b2: &Code,
    i: usize,
    j: usize,
    ring: &CyclotomicRing,
    arithmetic: Arithmetic,
) -> PairStats {
    let len = b1.length() as isize;
    let lambda = b1.lambda();
    let mut counts = vec![0i64; lambda as usize];
    let mut stats = PairStats {
        i,
        j,
        max: 0.0,
        max_tau: if i == j { 1 } else { -(len - 1) },
        zero_shift: Vec::new(),
        exact_nonzero: (arithmetic == Arithmetic::Exact).then_some((0, None)),
    };
    for tau in -(len - 1)..len {
        counts.iter_mut().for_each(|c| *c = 0);
        for (r1, r2) in b1.rows.iter().zip(&b2.rows) {
            accumulate(r1.entries(), r2.entries(), tau, lambda, &mut counts);
        }
        if tau == 0 {
            stats.zero_shift = counts.clone();
            if i == j {
                continue;
            }
        }
        let mut mag = ring.to_complex(&counts).norm();
        if let Some((nonzero, first)) = stats.exact_nonzero.as_mut() {
            if ring.is_zero(&counts) {
                mag = 0.0;
            } else {
                *nonzero += 1;
                first.get_or_insert(tau);
            }
        }
        if mag > stats.max + TIE_EPS {
            stats.max = mag;
            stats.max_tau = tau;
        }
    }
    stats
}

/// Family-wide maxima over an exhaustive sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationReport {
    /// Max code auto-correlation magnitude over `0 < |tau| < L`.
    pub theta1: f64,
    /// Max code cross-correlation magnitude over distinct codes, all shifts.
    pub theta2: f64,
    pub theta: f64,
    pub argmax: Argmax,
    pub argmax_theta1: Argmax,
    pub argmax_theta2: Option<Argmax>,
    pub tolerance: f64,
    pub arithmetic: Arithmetic,
    /// Whether `theta <= tolerance`, i.e. the family is complementary.
    pub complementary: bool,
}

impl CorrelationReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Reduces pair stats to `theta1`, `theta2`, `theta`. Ties go to the lowest
/// code pair, then the lowest shift.
pub fn report_from_stats(
    stats: &[PairStats],
    zero_tol: f64,
    arithmetic: Arithmetic,
) -> CorrelationReport {
    let mut auto: Option<(f64, Argmax)> = None;
    let mut cross: Option<(f64, Argmax)> = None;
    for s in stats {
        let slot = if s.i == s.j { &mut auto } else { &mut cross };
        let here = Argmax {
            codes: [s.i, s.j],
            tau: s.max_tau,
        };
        match slot {
            Some((best, _)) if s.max <= *best + TIE_EPS => {}
            _ => *slot = Some((s.max, here)),
        }
    }
    let (theta1, argmax_theta1) = auto.expect("every family has at least one code");
    let theta2 = cross.map_or(0.0, |c| c.0);
    let (theta, argmax) = match cross {
        Some((t2, at)) if t2 > theta1 + TIE_EPS => (t2, at),
        _ => (theta1, argmax_theta1),
    };
    CorrelationReport {
        theta1,
        theta2,
        theta,
        argmax,
        argmax_theta1,
        argmax_theta2: cross.map(|c| c.1),
        tolerance: zero_tol,
        arithmetic,
        complementary: theta <= zero_tol,
    }
}

pub fn family_report(
    codes: &[Code],
    zero_tol: f64,
    arithmetic: Arithmetic,
) -> Result<CorrelationReport> {
    let stats = pair_sweep(codes, arithmetic)?;
    Ok(report_from_stats(&stats, zero_tol, arithmetic))
}
