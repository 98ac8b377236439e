//! Integer combinations of `lambda`-th roots of unity.
//!
//! Every aperiodic correlation of phase sequences is a sum of unit vectors
//! `xi^k`, so it is fully described by a count vector `c` with
//! `value = sum_k c_k xi^k`. The count vector is exact; the complex value is
//! realized in double precision only when a magnitude is needed.
//!
//! `sum_k c_k xi^k = 0` iff the polynomial `sum_k c_k x^k` vanishes modulo the
//! cyclotomic polynomial `Phi_lambda`, which is monic with integer
//! coefficients, so the test is plain integer long division.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest modulus accepted for exact arithmetic.
pub const MAX_EXACT_LAMBDA: u32 = 4096;

/// Coefficients (lowest degree first) of the `n`-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    assert!(n >= 1, "cyclotomic polynomial index must be positive");
    let divisors: Vec<u32> = (1..=n).filter(|d| n.is_multiple_of(*d)).collect();
    let mut known: Vec<Vec<i64>> = Vec::with_capacity(divisors.len());
    for (at, &d) in divisors.iter().enumerate() {
        // x^d - 1 = prod_{e | d} Phi_e(x)
        let mut poly = vec![0i64; d as usize + 1];
        poly[0] = -1;
        poly[d as usize] = 1;
        for (e, phi) in divisors[..at].iter().zip(&known) {
            if d % e == 0 {
                poly = divide_exact(&poly, phi);
            }
        }
        known.push(poly);
    }
    known.pop().expect("n divides itself")
}

fn divide_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    debug_assert_eq!(den[dd], 1, "divisor must be monic");
    let mut quot = vec![0i64; rem.len() - dd];
    for i in (0..quot.len()).rev() {
        let q = rem[i + dd];
        quot[i] = q;
        if q != 0 {
            for (k, &c) in den.iter().enumerate() {
                rem[i + k] -= q * c;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0), "division was not exact");
    quot
}

/// Arithmetic context for `Z[xi_lambda]`.
#[derive(Debug, Clone)]
pub struct CyclotomicRing {
    lambda: u32,
    phi: Vec<i64>,
    roots: Vec<Complex64>,
}

impl CyclotomicRing {
    pub fn new(lambda: u32) -> Result<Self> {
        if lambda == 0 || lambda > MAX_EXACT_LAMBDA {
            return Err(Error::InvalidParams(format!(
                "lambda = {lambda} outside [1, {MAX_EXACT_LAMBDA}]"
            )));
        }
        let step = std::f64::consts::TAU / lambda as f64;
        let roots = (0..lambda)
            .map(|k| Complex64::from_polar(1.0, step * k as f64))
            .collect();
        Ok(CyclotomicRing {
            lambda,
            phi: cyclotomic_polynomial(lambda),
            roots,
        })
    }

    pub fn lambda(&self) -> u32 {
        self.lambda
    }

    /// `xi^k` in double precision.
    pub fn root(&self, k: u32) -> Complex64 {
        self.roots[(k % self.lambda) as usize]
    }

    pub fn to_complex(&self, counts: &[i64]) -> Complex64 {
        counts
            .iter()
            .zip(&self.roots)
            .filter(|(&c, _)| c != 0)
            .map(|(&c, &r)| r * c as f64)
            .sum()
    }

    /// Remainder of `sum_k c_k x^k` modulo `Phi_lambda`.
    pub fn reduce(&self, counts: &[i64]) -> Vec<i128> {
        let mut rem: Vec<i128> = counts.iter().map(|&c| c as i128).collect();
        let deg = self.phi.len() - 1;
        for top in (deg..rem.len()).rev() {
            let q = rem[top];
            if q != 0 {
                for (k, &c) in self.phi.iter().enumerate() {
                    rem[top - deg + k] -= q * c as i128;
                }
            }
        }
        rem.truncate(deg);
        rem
    }

    /// Exact test for `sum_k c_k xi^k == 0`.
    pub fn is_zero(&self, counts: &[i64]) -> bool {
        self.reduce(counts).iter().all(|&r| r == 0)
    }
}
