//! Reference implementations written straight from the definitions, sharing
//! no code with the library beyond reading polynomial terms.

#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;
use qccs::Polynomial;
use rand::Rng;

/// Digits of `i` in base `p`, most significant first.
pub fn digits(mut i: usize, p: u32, m: usize) -> Vec<u32> {
    let mut out = vec![0; m];
    for slot in out.iter_mut().rev() {
        *slot = (i % p as usize) as u32;
        i /= p as usize;
    }
    out
}

/// `f(x)` as a plain integer sum of products, reduced mod lambda at the end.
pub fn eval(f: &Polynomial, x: &[u32]) -> u32 {
    let mut total: u128 = 0;
    for (exp, coeff) in f.terms() {
        let mut term = coeff as u128;
        for (xi, &e) in x.iter().zip(exp) {
            term *= (*xi as u128).pow(e);
        }
        total += term;
    }
    (total % f.lambda() as u128) as u32
}

/// Phase sequence of `f`, with `None` off the set where `x_j = c`.
pub fn sequence(f: &Polynomial, restrict: &[(usize, u32)]) -> Vec<Option<u32>> {
    let (p, m) = (f.p(), f.arity());
    let len = (p as usize).pow(m as u32);
    (0..len)
        .map(|i| {
            let x = digits(i, p, m);
            restrict
                .iter()
                .all(|&(j, c)| x[j] == c)
                .then(|| eval(f, &x))
        })
        .collect()
}

pub fn unit(phase: Option<u32>, lambda: u32) -> Complex64 {
    phase.map_or(Complex64::new(0.0, 0.0), |k| {
        Complex64::new(0.0, 2.0 * PI * k as f64 / lambda as f64).exp()
    })
}

/// Aperiodic cross-correlation from its two-branch definition.
pub fn accf(a: &[Option<u32>], b: &[Option<u32>], lambda: u32, tau: isize) -> Complex64 {
    let len = a.len() as isize;
    let mut acc = Complex64::new(0.0, 0.0);
    if tau >= 0 {
        for i in 0..len - tau {
            acc += unit(a[(i + tau) as usize], lambda) * unit(b[i as usize], lambda).conj();
        }
    } else {
        for i in 0..len + tau {
            acc += unit(a[i as usize], lambda) * unit(b[(i - tau) as usize], lambda).conj();
        }
    }
    acc
}

/// Random function over `Z_p^m` with up to `terms` monomials of total degree
/// at most `max_degree`.
pub fn random_polynomial<R: Rng>(
    rng: &mut R,
    p: u32,
    m: usize,
    lambda: u32,
    max_degree: u32,
    terms: usize,
) -> Polynomial {
    let mut list = Vec::new();
    for _ in 0..terms {
        let mut exp = vec![0u32; m];
        let degree = rng.gen_range(0..=max_degree);
        for _ in 0..degree {
            exp[rng.gen_range(0..m)] += 1;
        }
        list.push((exp, rng.gen_range(0..lambda as i64)));
    }
    Polynomial::from_terms(p, m, lambda, list).unwrap()
}
