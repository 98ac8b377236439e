//! Correlation lower bounds, the optimality factor, and a brute-force check of
//! the cross-set restriction bound used by the family construction.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::construction::FamilyDescriptor;
use crate::correlation::accumulate;
use crate::cyclotomic::CyclotomicRing;
use crate::error::{Error, Result};
use crate::poly::{is_prime, Params, Polynomial, Restriction};
use crate::seqgen::restricted_sequence;

/// `|rho - 1|` below this counts as optimal.
pub const OPTIMAL_EPS: f64 = 1e-9;

/// Welch lower bound on `theta` for `K` codes of `M` rows of length `L`.
#[allow(non_snake_case)]
pub fn welch_bound(K: usize, M: usize, L: usize) -> Result<f64> {
    if M == 0 || L == 0 || K < M {
        return Err(Error::Domain(format!(
            "need K >= M >= 1 and L >= 1, got ({K}, {M}, {L})"
        )));
    }
    let (k, m, l) = (K as f64, M as f64, L as f64);
    let denom = k * (2.0 * l - 1.0) - 1.0;
    if denom <= 0.0 {
        return Err(Error::Domain(format!(
            "K(2L-1) must exceed 1, got ({K}, {M}, {L})"
        )));
    }
    Ok(m * l * ((k / m - 1.0) / denom).sqrt())
}

/// Whether the Liu bound applies: `K >= 3M`, `M >= 2`, `L >= 2`.
#[allow(non_snake_case)]
pub fn liu_applicable(K: usize, M: usize, L: usize) -> bool {
    K >= 3 * M && M >= 2 && L >= 2
}

/// Liu lower bound, or `None` outside its range of validity.
#[allow(non_snake_case)]
pub fn liu_bound(K: usize, M: usize, L: usize) -> Option<f64> {
    liu_applicable(K, M, L).then(|| {
        let (k, m, l) = (K as f64, M as f64, L as f64);
        (m * l * (1.0 - 2.0 * (m / (3.0 * k)).sqrt())).sqrt()
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    Optimal,
    NearOptimal,
    /// Outside the near-optimal band but inside the regime `p > 3`,
    /// `n = m - 1` where `rho` tends to 1 as `p` grows.
    AsymptoticallyTracked,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Welch,
    Liu,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ThetaSource {
    /// `theta = p^m`, the value the construction guarantees.
    Guaranteed,
    /// Measured on an actual family.
    Measured,
    /// Supplied directly with `(K, M, L)`.
    Given,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct BoundsReport {
    pub K: usize,
    pub M: usize,
    pub L: usize,
    pub theta: f64,
    pub theta_source: ThetaSource,
    pub welch_bound: f64,
    pub liu_bound: Option<f64>,
    /// `theta / welch_bound`; absent when the bound is 0 and `theta` is not.
    pub rho_welch: Option<f64>,
    pub rho_liu: Option<f64>,
    pub applicable_bound: BoundKind,
    pub rho: Option<f64>,
    pub classification: Classification,
    /// Closed-form `rho` for a constructed family with `theta = p^m`.
    pub closed_form_rho: Option<f64>,
    pub closed_form_agrees: Option<bool>,
    pub notes: Vec<String>,
}

impl BoundsReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

fn ratio(theta: f64, bound: f64) -> Option<f64> {
    if bound > 0.0 {
        Some(theta / bound)
    } else if theta == 0.0 {
        Some(1.0)
    } else {
        None
    }
}

fn classify(rho: Option<f64>, asymptotic_regime: bool) -> Classification {
    match rho {
        Some(r) if (r - 1.0).abs() <= OPTIMAL_EPS => Classification::Optimal,
        Some(r) if r > 1.0 && r <= 2.0 => Classification::NearOptimal,
        Some(r) if r > 2.0 && asymptotic_regime => Classification::AsymptoticallyTracked,
        _ => Classification::None,
    }
}

/// Bounds and `rho` for arbitrary `(K, M, L, theta)`. `theta = 0` is only
/// meaningful when the applicable bound is 0 too.
#[allow(non_snake_case)]
pub fn bounds_for(K: usize, M: usize, L: usize, theta: f64) -> Result<BoundsReport> {
    if !theta.is_finite() || theta < 0.0 {
        return Err(Error::Domain(format!(
            "theta must be a nonnegative number, got {theta}"
        )));
    }
    let welch = welch_bound(K, M, L)?;
    let liu = liu_bound(K, M, L);
    let rho_welch = ratio(theta, welch);
    let rho_liu = liu.and_then(|b| ratio(theta, b));
    let (applicable_bound, rho) = match liu {
        Some(_) => (BoundKind::Liu, rho_liu),
        None => (BoundKind::Welch, rho_welch),
    };
    let mut notes = Vec::new();
    if liu.is_none() {
        notes.push("Liu bound needs K >= 3M, M >= 2, L >= 2".to_string());
    }
    if rho.is_none() {
        notes.push("applicable bound is 0 but theta is not".to_string());
    }
    if rho.is_some_and(|r| r < 1.0 - OPTIMAL_EPS) {
        notes.push("theta lies below the lower bound".to_string());
    }
    Ok(BoundsReport {
        K,
        M,
        L,
        theta,
        theta_source: ThetaSource::Given,
        welch_bound: welch,
        liu_bound: liu,
        rho_welch,
        rho_liu,
        applicable_bound,
        rho,
        classification: classify(rho, false),
        closed_form_rho: None,
        closed_form_agrees: None,
        notes,
    })
}

/// Closed-form `rho` of the family for `params` at `theta = p^m`: the Welch
/// form for `p = 3` and the Liu form for `p > 3`.
pub fn closed_form_rho(params: Params) -> f64 {
    let (p, m, n) = (params.p as f64, params.m as i32, params.n as i32);
    if params.p == 3 {
        let flock = 3f64.powi(n + 1);
        (4.0 * 3f64.powi(m - n - 1) - 2.0 / flock - 1.0 / (flock * flock)).sqrt()
    } else {
        p.powf((m - n - 1) as f64 / 2.0) / (1.0 - 2.0 * (1.0 / (3.0 * (p - 1.0))).sqrt()).sqrt()
    }
}

/// Bounds for the family built from `params`, judged at `theta`.
pub fn optimality(params: Params, theta: f64) -> Result<BoundsReport> {
    if theta.is_nan() || theta <= 0.0 || theta.is_infinite() {
        return Err(Error::Domain(format!(
            "theta must be positive, got {theta}"
        )));
    }
    let d = FamilyDescriptor::qccs(params);
    let mut report = bounds_for(d.K, d.M, d.L, theta)?;
    let guaranteed = theta == d.theta_bound as f64;
    report.theta_source = if guaranteed {
        ThetaSource::Guaranteed
    } else {
        ThetaSource::Measured
    };
    let asymptotic =
        params.p > 3 && params.n + 1 == params.m && report.applicable_bound == BoundKind::Liu;
    report.classification = classify(report.rho, asymptotic);
    if guaranteed {
        let closed = closed_form_rho(params);
        report.closed_form_rho = Some(closed);
        report.closed_form_agrees = report.rho.map(|r| (r - closed).abs() <= 1e-9);
    }
    Ok(report)
}

/// One row of the `rho` versus `p` table at `n = m - 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendRow {
    pub p: u32,
    pub m: usize,
    pub n: usize,
    pub rho: f64,
    pub bound: BoundKind,
    pub closed_form_rho: f64,
}

/// `rho` at `theta = p^m`, `n = m - 1`, for each prime in `ps`.
pub fn rho_trend(ps: &[u32], m: usize) -> Result<Vec<TrendRow>> {
    ps.iter()
        .map(|&p| {
            let params = Params::new(p, m, m - 1, p)?;
            let report = optimality(params, params.length() as f64)?;
            Ok(TrendRow {
                p,
                m,
                n: m - 1,
                rho: report.rho.expect("theta and bound are positive"),
                bound: report.applicable_bound,
                closed_form_rho: closed_form_rho(params),
            })
        })
        .collect()
}

/// Parameters of a known family, for side-by-side comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct ComparisonRow {
    pub construction: String,
    pub K: Option<usize>,
    pub M: Option<usize>,
    pub L: Option<usize>,
    pub theta: Option<usize>,
    pub alphabet: Option<usize>,
    pub constraints: String,
}

fn prime_power_base(v: usize) -> Option<usize> {
    let base = (2..=v).find(|d| v.is_multiple_of(*d))?;
    let mut rest = v;
    while rest.is_multiple_of(base) {
        rest /= base;
    }
    (rest == 1).then_some(base)
}

/// Earlier aperiodic QCCS families evaluated at the same length `L` as the
/// family for `params` where their constraints allow, followed by that family.
pub fn comparison_rows(params: Params) -> Vec<ComparisonRow> {
    let len = params.length();
    let row = |name: &str,
               kmlt: Option<(usize, usize, usize, usize)>,
               alphabet: Option<usize>,
               constraints: &str| {
        ComparisonRow {
            construction: name.to_string(),
            K: kmlt.map(|v| v.0),
            M: kmlt.map(|v| v.1),
            L: kmlt.map(|v| v.2),
            theta: kmlt.map(|v| v.3),
            alphabet,
            constraints: constraints.to_string(),
        }
    };
    let u = len;
    let u2 = len + 1;
    let u2_ok = u2 >= 5 && prime_power_base(u2).is_some();
    let smallest_factor = (2..=len).find(|d| len.is_multiple_of(*d)).unwrap_or(len);
    let n_odd_ok = len % 2 == 1 && len >= 5;
    let florentine = is_prime(len as u32).then(|| len - 1);
    let d = FamilyDescriptor::qccs(params);
    vec![
        row(
            "prime power u, K = u(u+1)",
            prime_power_base(u).map(|_| (u * (u + 1), u, u, u)),
            Some(u),
            "u a prime power",
        ),
        row(
            "prime power u, L = u - 1",
            u2_ok.then(|| (u2 * u2, u2, u2 - 1, u2)),
            u2_ok.then_some(u2),
            "u a prime power, u >= 5",
        ),
        row(
            "odd N, K = N(t0 - 1)",
            n_odd_ok.then(|| (len * (smallest_factor - 1), len, len, len)),
            n_odd_ok.then_some(len),
            "N >= 5 odd, t0 its smallest prime factor",
        ),
        row(
            "Florentine rectangle, K = N F(N)",
            florentine.map(|f| (len * f, len, len, len)),
            florentine.map(|_| len),
            "N >= 2, F(N) rows of an N-column Florentine rectangle (evaluated only for prime N)",
        ),
        row(
            "this construction",
            Some((d.K, d.M, d.L, d.theta_bound)),
            Some(params.lambda as usize),
            "p odd prime, 0 <= n <= m - 1, p | lambda",
        ),
    ]
}

/// Result of checking the restriction-sum bound for one `(g, h, k1, k2, w)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Proposition1Outcome {
    pub holds: bool,
    /// `max_tau |sum| / p^(m-w)`.
    pub max_ratio: f64,
    pub worst_tau: isize,
    /// `|S|` as enumerated.
    pub pair_count: usize,
    pub bound: usize,
}

/// Sums `Theta(psi(g | x_J1 = e1), psi(h | x_J1 = e2))(tau)` over all
/// `(e1, e2)` in `Z_p^w x Z_p^w` with `k1 e1 = k2 e2 mod p`, `J1 = (0..w)`,
/// and compares `|sum|` against `p^(m-w)` at every shift.
pub fn proposition1_check(
    g: &Polynomial,
    h: &Polynomial,
    k1: u32,
    k2: u32,
    w: usize,
) -> Result<Proposition1Outcome> {
    let (p, m, lambda) = (g.p(), g.arity(), g.lambda());
    if h.p() != p || h.arity() != m || h.lambda() != lambda {
        return Err(Error::ShapeMismatch(
            "g and h live on different domains".into(),
        ));
    }
    if k1 == k2 || k1 == 0 || k2 == 0 || k1 >= p || k2 >= p {
        return Err(Error::InvalidParams(format!(
            "k1 = {k1}, k2 = {k2} must be distinct and in 1..{p}"
        )));
    }
    if w >= m {
        return Err(Error::InvalidParams(format!(
            "w = {w} must be at most m - 1 = {}",
            m - 1
        )));
    }
    let j1: Vec<usize> = (0..w).collect();
    let all: Vec<Restriction> = Restriction::enumerate(&j1, p).collect();
    let mut pairs = Vec::new();
    for e1 in &all {
        for e2 in &all {
            let related = e1
                .values()
                .iter()
                .zip(e2.values())
                .all(|(&a, &b)| (k1 * a + (p - k2) * b).is_multiple_of(p));
            if related {
                pairs.push((restricted_sequence(g, e1)?, restricted_sequence(h, e2)?));
            }
        }
    }
    let ring = CyclotomicRing::new(lambda)?;
    let bound = crate::poly::checked_pow(p, m - w).expect("p^m already fits");
    let len = crate::poly::checked_pow(p, m).expect("sequence exists") as isize;
    let (worst, worst_tau) = (-(len - 1)..len)
        .into_par_iter()
        .map(|tau| {
            let mut counts = vec![0i64; lambda as usize];
            for (a, b) in &pairs {
                accumulate(a.entries(), b.entries(), tau, lambda, &mut counts);
            }
            (ring.to_complex(&counts).norm(), tau)
        })
        .reduce(
            || (f64::NEG_INFINITY, isize::MAX),
            |x, y| {
                if y.0 > x.0 + 1e-12 || ((y.0 - x.0).abs() <= 1e-12 && y.1 < x.1) {
                    y
                } else {
                    x
                }
            },
        );
    Ok(Proposition1Outcome {
        holds: worst <= bound as f64 + 1e-9,
        max_ratio: worst / bound as f64,
        worst_tau,
        pair_count: pairs.len(),
        bound,
    })
}
