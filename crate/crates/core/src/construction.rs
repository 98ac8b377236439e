//! Code families built from a seed function satisfying the path condition.
//!
//! For `k` in `1..p`, code `t` of set `k` has one row per `d` in
//! `0..p^(n+1)`, namely the phase sequence of
//! `f + (k lambda/p)(d.x_J + d_n x_first) + (lambda/p)(t.x_J + t_n x_last)`
//! where `d` and `t` are split into `n + 1` base-`p` digits, most significant
//! first, and `x_first`, `x_last` are the endpoints of the seed's path.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::correlation::{Code, CodeLabel};
use crate::error::{Error, Result};
use crate::poly::{certify_hamiltonian_path, Params, PathCertificate, Polynomial};
use crate::seqgen::{index_to_digits, sequence_of};

/// A certified seed: `f`, the restricted index list `J` and the path order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedSpec {
    params: Params,
    f: Polynomial,
    j: Vec<usize>,
    path: PathCertificate,
}

impl SeedSpec {
    /// Certifies `f` over `J`; an invalid certificate is an
    /// [`Error::InvalidSeed`] carrying its failure reason.
    pub fn new(params: Params, f: Polynomial, j: Vec<usize>) -> Result<Self> {
        if f.p() != params.p || f.arity() != params.m || f.lambda() != params.lambda {
            return Err(Error::InvalidSeed(format!(
                "function over (p, m, lambda) = ({}, {}, {}) does not match ({}, {}, {})",
                f.p(),
                f.arity(),
                f.lambda(),
                params.p,
                params.m,
                params.lambda
            )));
        }
        if j.len() != params.n {
            return Err(Error::InvalidSeed(format!(
                "J has {} indices but n = {}",
                j.len(),
                params.n
            )));
        }
        let path = certify_hamiltonian_path(&f, &j)?;
        if !path.valid {
            return Err(Error::InvalidSeed(
                path.failure_reason
                    .clone()
                    .unwrap_or_else(|| "path condition fails".into()),
            ));
        }
        Ok(SeedSpec { params, f, j, path })
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn function(&self) -> &Polynomial {
        &self.f
    }

    pub fn restricted(&self) -> &[usize] {
        &self.j
    }

    pub fn path(&self) -> &PathCertificate {
        &self.path
    }

    /// `l_pi(0)`.
    pub fn pi_first(&self) -> usize {
        self.path.free_vars[0]
    }

    /// `l_pi(m-n-1)`.
    pub fn pi_last(&self) -> usize {
        *self
            .path
            .free_vars
            .last()
            .expect("path covers m - n >= 1 vertices")
    }

    /// The layout under which the cross-set bound is proven:
    /// `J = (0, .., n-1)` and the path starting at `x_n`.
    pub fn check_qccs_constraints(&self) -> Result<()> {
        let n = self.params.n;
        if !self.j.iter().copied().eq(0..n) {
            return Err(Error::Constraint(format!(
                "J must be (0, .., n-1) = {:?}, got {:?}",
                (0..n).collect::<Vec<_>>(),
                self.j
            )));
        }
        if self.pi_first() != n {
            return Err(Error::Constraint(format!(
                "path must start at x{n}, starts at x{}",
                self.pi_first()
            )));
        }
        Ok(())
    }
}

/// Seed `(lambda/p) sum_{a=n}^{m-2} x_a x_{a+1}` with `J = (0, .., n-1)`,
/// plus an optional affine part `sum_a affine[a] x_a + constant`.
pub fn canonical_seed(
    params: Params,
    affine: Option<&[i64]>,
    constant: Option<i64>,
) -> Result<SeedSpec> {
    let Params { p, m, n, lambda } = params;
    let mut f = Polynomial::constant(p, m, lambda, constant.unwrap_or(0))?;
    let weight = params.edge_weight() as i64;
    for a in n..m.saturating_sub(1) {
        let mut exp = vec![0; m];
        exp[a] = 1;
        exp[a + 1] = 1;
        f.add_term(exp, weight)?;
    }
    if let Some(coeffs) = affine {
        if coeffs.len() != m {
            return Err(Error::InvalidInput(format!(
                "affine part has {} coefficients, expected {m}",
                coeffs.len()
            )));
        }
        for (var, &c) in coeffs.iter().enumerate() {
            f.add_linear(var, c)?;
        }
    }
    SeedSpec::new(params, f, (0..n).collect())
}

/// `(K, M, L, theta, alphabet)` of the family built from given parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct FamilyDescriptor {
    pub K: usize,
    pub M: usize,
    pub L: usize,
    pub theta_bound: usize,
    pub alphabet: u32,
}

impl FamilyDescriptor {
    /// Parameters of the union over all `k`.
    pub fn qccs(params: Params) -> Self {
        FamilyDescriptor {
            K: params.flock_size() * (params.p as usize - 1),
            M: params.flock_size(),
            L: params.length(),
            theta_bound: params.length(),
            alphabet: params.lambda,
        }
    }

    /// Parameters of a single complete complementary set.
    pub fn ccc(params: Params) -> Self {
        FamilyDescriptor {
            K: params.flock_size(),
            M: params.flock_size(),
            L: params.length(),
            theta_bound: 0,
            alphabet: params.lambda,
        }
    }
}

/// Which construction a family came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FamilyKind {
    Qccs,
    Ccc { k: u32 },
}

/// Codes in `(k, t)` order together with how they were made.
#[derive(Debug, Clone)]
pub struct CodeFamily {
    pub params: Params,
    pub kind: FamilyKind,
    pub descriptor: FamilyDescriptor,
    pub seed: Polynomial,
    pub j: Vec<usize>,
    pub path: Vec<usize>,
    pub codes: Vec<Code>,
}

impl CodeFamily {
    /// `k` values present in the family, ascending.
    pub fn ks(&self) -> Vec<u32> {
        match self.kind {
            FamilyKind::Qccs => (1..self.params.p).collect(),
            FamilyKind::Ccc { k } => vec![k],
        }
    }
}

fn check_k(p: u32, k: u32) -> Result<()> {
    if k == 0 || k >= p {
        return Err(Error::InvalidParams(format!("k = {k} outside 1..{p}")));
    }
    Ok(())
}

/// Member `d` of `C_t^k`.
pub fn member_function(seed: &SeedSpec, k: u32, t: usize, d: usize) -> Result<Polynomial> {
    let params = seed.params;
    check_k(params.p, k)?;
    let m_size = params.flock_size();
    if t >= m_size || d >= m_size {
        return Err(Error::InvalidParams(format!(
            "t = {t}, d = {d} must lie below p^(n+1) = {m_size}"
        )));
    }
    let n = params.n;
    let d_digits = index_to_digits(d, params.p, n + 1)?;
    let t_digits = index_to_digits(t, params.p, n + 1)?;
    let unit = params.edge_weight() as i64;
    let mut f = seed.f.clone();
    for (a, &var) in seed.j.iter().enumerate() {
        let coeff = unit * (k as i64 * d_digits[a] as i64 + t_digits[a] as i64);
        f.add_linear(var, coeff)?;
    }
    f.add_linear(seed.pi_first(), unit * k as i64 * d_digits[n] as i64)?;
    f.add_linear(seed.pi_last(), unit * t_digits[n] as i64)?;
    Ok(f)
}

/// `psi(C_t^k)`, rows ordered by `d`.
pub fn build_code(seed: &SeedSpec, k: u32, t: usize) -> Result<Code> {
    check_k(seed.params.p, k)?;
    let rows = (0..seed.params.flock_size())
        .into_par_iter()
        .map(|d| sequence_of(&member_function(seed, k, t, d)?))
        .collect::<Result<Vec<_>>>()?;
    Code::new(rows, Some(CodeLabel { k, t }))
}

/// The `p^(n+1)` codes of set `k`, ordered by `t`.
pub fn build_ccc(seed: &SeedSpec, k: u32) -> Result<Vec<Code>> {
    check_k(seed.params.p, k)?;
    (0..seed.params.flock_size())
        .into_par_iter()
        .map(|t| build_code(seed, k, t))
        .collect()
}

fn family(
    seed: &SeedSpec,
    kind: FamilyKind,
    descriptor: FamilyDescriptor,
    codes: Vec<Code>,
) -> CodeFamily {
    CodeFamily {
        params: seed.params,
        kind,
        descriptor,
        seed: seed.f.clone(),
        j: seed.j.clone(),
        path: seed.path.free_vars.clone(),
        codes,
    }
}

/// Set `k` alone, packaged as a family.
pub fn build_ccc_family(seed: &SeedSpec, k: u32) -> Result<CodeFamily> {
    let codes = build_ccc(seed, k)?;
    Ok(family(
        seed,
        FamilyKind::Ccc { k },
        FamilyDescriptor::ccc(seed.params),
        codes,
    ))
}

/// Union of all sets `k = 1..p-1`, in `(k, t)` order.
pub fn build_qccs(seed: &SeedSpec) -> Result<CodeFamily> {
    seed.check_qccs_constraints()?;
    let mut codes = Vec::with_capacity(FamilyDescriptor::qccs(seed.params).K);
    for k in 1..seed.params.p {
        codes.extend(build_ccc(seed, k)?);
    }
    Ok(family(
        seed,
        FamilyKind::Qccs,
        FamilyDescriptor::qccs(seed.params),
        codes,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn seed(p: u32, m: usize, n: usize, lambda: u32) -> SeedSpec {
        canonical_seed(Params::new(p, m, n, lambda).unwrap(), None, None).unwrap()
    }

    #[test]
    fn canonical_seeds() {
        let s = seed(3, 3, 1, 3);
        assert_eq!(s.function().to_string(), "x1x2");
        assert_eq!(s.path().free_vars, vec![1, 2]);
        assert_eq!((s.pi_first(), s.pi_last()), (1, 2));

        let s = seed(3, 3, 2, 3);
        assert!(s.function().is_zero());
        assert_eq!((s.pi_first(), s.pi_last()), (2, 2));

        let s = seed(5, 3, 0, 10);
        assert_eq!(s.function().to_string(), "2x0x1 + 2x1x2");
        assert!(s.check_qccs_constraints().is_ok());

        let with_affine =
            canonical_seed(Params::new(3, 3, 1, 6).unwrap(), Some(&[1, 2, 5]), Some(4)).unwrap();
        assert_eq!(
            with_affine.function().to_string(),
            "2x1x2 + x0 + 2x1 + 5x2 + 4"
        );
        assert!(canonical_seed(Params::new(3, 3, 1, 6).unwrap(), Some(&[1]), None).is_err());
    }

    #[test]
    fn member_function_linear_terms() {
        let s = seed(3, 3, 1, 3);
        assert_eq!(&member_function(&s, 1, 0, 0).unwrap(), s.function());
        // d = 4 = (1, 1) in base 3.
        let f = member_function(&s, 1, 0, 4).unwrap();
        assert_eq!(f.to_string(), "x1x2 + x0 + x1");
        // t = 5 = (1, 2): t_0 x0 + t_1 x_last.
        let f = member_function(&s, 2, 5, 0).unwrap();
        assert_eq!(f.to_string(), "x1x2 + x0 + 2x2");
        assert!(member_function(&s, 0, 0, 0).is_err());
        assert!(member_function(&s, 3, 0, 0).is_err());
        assert!(member_function(&s, 1, 9, 0).is_err());
    }

    #[test]
    fn members_within_a_code_are_distinct() {
        let s = seed(3, 3, 1, 3);
        for k in 1..3 {
            let mut all = HashSet::new();
            for t in 0..9 {
                let rows: HashSet<_> = (0..9)
                    .map(|d| member_function(&s, k, t, d).unwrap())
                    .collect();
                assert_eq!(rows.len(), 9);
                all.extend(rows);
            }
            // Across codes only the linear coefficients (k d_0 + t_0, k d_1, t_1)
            // are visible, so the 81 (t, d) pairs give 27 functions.
            assert_eq!(all.len(), 27);
        }
    }

    #[test]
    fn code_shapes() {
        let s = seed(3, 3, 1, 6);
        let code = build_code(&s, 1, 0).unwrap();
        assert_eq!(code.flock_size(), 9);
        assert_eq!(code.length(), 27);
        assert_eq!(code.lambda(), 6);
        assert_eq!(code.rows()[0], sequence_of(s.function()).unwrap());
        assert!(code.rows().iter().all(|r| r.is_full()));

        let fam = build_qccs(&seed(3, 2, 1, 3)).unwrap();
        assert_eq!(
            fam.descriptor,
            FamilyDescriptor {
                K: 18,
                M: 9,
                L: 9,
                theta_bound: 9,
                alphabet: 3
            }
        );
        assert_eq!(fam.codes.len(), 18);
        let labels: Vec<_> = fam.codes.iter().map(|c| c.label().unwrap()).collect();
        assert_eq!(labels[0], CodeLabel { k: 1, t: 0 });
        assert_eq!(labels[9], CodeLabel { k: 2, t: 0 });
        assert_eq!(labels[17], CodeLabel { k: 2, t: 8 });
    }

    #[test]
    fn qccs_constraints_are_enforced() {
        let params = Params::new(3, 3, 1, 3).unwrap();
        // J = (1) with the path x0 - x2.
        let f = Polynomial::parse(3, 3, 3, "x0x2").unwrap();
        let s = SeedSpec::new(params, f, vec![1]).unwrap();
        assert!(build_ccc(&s, 1).is_ok());
        match build_qccs(&s) {
            Err(Error::Constraint(msg)) => assert!(msg.contains("J must be")),
            other => panic!("expected constraint error, got {other:?}"),
        }
        // J = (0) with the path x2 - x1 - x3, which has x1 in the middle.
        let params = Params::new(3, 4, 1, 3).unwrap();
        let f = Polynomial::parse(3, 4, 3, "x1x2 + x1x3").unwrap();
        let s = SeedSpec::new(params, f, vec![0]).unwrap();
        assert_eq!(s.path().free_vars, vec![2, 1, 3]);
        match build_qccs(&s) {
            Err(Error::Constraint(msg)) => assert!(msg.contains("path must start at x1")),
            other => panic!("expected constraint error, got {other:?}"),
        }
    }

    #[test]
    fn invalid_seeds() {
        let params = Params::new(3, 3, 1, 3).unwrap();
        let looped = Polynomial::parse(3, 3, 3, "x1x2 + x2^2").unwrap();
        match SeedSpec::new(params, looped, vec![0]) {
            Err(Error::InvalidSeed(reason)) => assert!(reason.contains("loop present")),
            other => panic!("expected invalid seed, got {other:?}"),
        }
        let f = Polynomial::parse(3, 3, 3, "x1x2").unwrap();
        assert!(SeedSpec::new(params, f.clone(), vec![]).is_err());
        let other = Params::new(3, 3, 1, 6).unwrap();
        assert!(SeedSpec::new(other, f, vec![0]).is_err());
    }
}
