//! Multivariate functions `Z_p^m -> Z_lambda`.
//!
//! A [`Polynomial`] is a sparse map from exponent vectors to coefficients in
//! `Z_lambda`. Points are taken from the integer box `{0, .., p-1}^m` and
//! monomials are evaluated as integer products before the final reduction,
//! so no `x^p = x` rule is ever applied.
//!
//! [`Restriction`] fixes the variables `x_J` to a constant vector `c`; the
//! restricted polynomial keeps the ambient arity `m` and simply no longer
//! mentions the fixed variables. [`graph`] extracts the quadratic-term graph
//! and certifies the Hamiltonian path condition used by the construction.

pub mod graph;

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seqgen::index_to_digits;

pub use graph::{build_graph, certify_hamiltonian_path, certify_hamiltonian_path_exhaustive};
pub use graph::{FunctionGraph, PathCertificate};

pub(crate) const SCHEMA_VERSION: u32 = 1;

pub fn is_prime(v: u32) -> bool {
    if v < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= v as u64 {
        if v.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Checks the value space shared by every polynomial: odd prime `p`,
/// at least one variable, and `p | lambda`.
pub fn validate_domain(p: u32, m: usize, lambda: u32) -> Result<()> {
    if !is_prime(p) || p == 2 {
        return Err(Error::InvalidParams(format!("p = {p} is not an odd prime")));
    }
    if m == 0 {
        return Err(Error::InvalidParams("m must be at least 1".into()));
    }
    if lambda == 0 || !lambda.is_multiple_of(p) {
        return Err(Error::InvalidParams(format!(
            "lambda = {lambda} is not a positive multiple of p = {p}"
        )));
    }
    Ok(())
}

/// The tuple `(p, m, n, lambda)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Params {
    pub p: u32,
    pub m: usize,
    pub n: usize,
    pub lambda: u32,
}

impl Params {
    pub fn new(p: u32, m: usize, n: usize, lambda: u32) -> Result<Self> {
        validate_domain(p, m, lambda)?;
        if n >= m {
            return Err(Error::InvalidParams(format!(
                "n = {n} must satisfy 0 <= n <= m - 1 = {}",
                m - 1
            )));
        }
        // Sequences are materialized, so the length has to be addressable.
        checked_pow(p, m)
            .ok_or_else(|| Error::InvalidParams(format!("p^m = {p}^{m} does not fit in memory")))?;
        Ok(Params { p, m, n, lambda })
    }

    /// Sequence length `L = p^m`.
    pub fn length(&self) -> usize {
        (self.p as usize).pow(self.m as u32)
    }

    /// Flock size `M = p^(n+1)`.
    pub fn flock_size(&self) -> usize {
        (self.p as usize).pow(self.n as u32 + 1)
    }

    /// Number of restriction vectors `c`, `p^n`.
    pub fn restriction_count(&self) -> usize {
        (self.p as usize).pow(self.n as u32)
    }

    /// Path edge weight `lambda / p`.
    pub fn edge_weight(&self) -> u32 {
        self.lambda / self.p
    }
}

pub(crate) fn checked_pow(p: u32, e: usize) -> Option<usize> {
    let mut acc: usize = 1;
    for _ in 0..e {
        acc = acc.checked_mul(p as usize)?;
    }
    // 2^32 entries is far beyond desk scale; refuse rather than thrash.
    (acc <= 1 << 32).then_some(acc)
}

fn pow_mod(base: u64, exp: u32, modulus: u64) -> u64 {
    let mut result = 1 % modulus;
    let mut b = base % modulus;
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            result = result * b % modulus;
        }
        b = b * b % modulus;
        e >>= 1;
    }
    result
}

/// Sparse multivariate function over `Z_p^m` with values in `Z_lambda`.
///
/// Coefficients are always reduced into `[0, lambda)` and zero terms are never
/// stored, so two polynomials are equal exactly when their term maps are.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    p: u32,
    m: usize,
    lambda: u32,
    terms: BTreeMap<Vec<u32>, u32>,
}

impl Polynomial {
    pub fn zero(p: u32, m: usize, lambda: u32) -> Result<Self> {
        validate_domain(p, m, lambda)?;
        Ok(Polynomial {
            p,
            m,
            lambda,
            terms: BTreeMap::new(),
        })
    }

    pub fn constant(p: u32, m: usize, lambda: u32, value: i64) -> Result<Self> {
        let mut f = Self::zero(p, m, lambda)?;
        f.add_term(vec![0; m], value)?;
        Ok(f)
    }

    pub fn from_terms<I>(p: u32, m: usize, lambda: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, i64)>,
    {
        let mut f = Self::zero(p, m, lambda)?;
        for (exp, coeff) in terms {
            f.add_term(exp, coeff)?;
        }
        Ok(f)
    }

    /// Parses expressions such as `x0x2 + 2x2x1 + 2x1^2 + x2 + 1`.
    ///
    /// Factors may be separated by `*`; integer coefficients may be negative
    /// and are reduced mod `lambda`.
    pub fn parse(p: u32, m: usize, lambda: u32, expr: &str) -> Result<Self> {
        let mut f = Self::zero(p, m, lambda)?;
        let src: Vec<char> = expr.chars().filter(|c| !c.is_whitespace()).collect();
        if src.is_empty() {
            return Err(Error::InvalidInput("empty expression".into()));
        }
        let bad = |pos: usize, what: &str| {
            Error::InvalidInput(format!("cannot parse `{expr}` at {pos}: {what}"))
        };
        let read_number = |pos: &mut usize| -> Option<i64> {
            let start = *pos;
            while *pos < src.len() && src[*pos].is_ascii_digit() {
                *pos += 1;
            }
            (start != *pos).then(|| src[start..*pos].iter().collect::<String>().parse().ok())?
        };

        let mut pos = 0;
        while pos < src.len() {
            let mut sign = 1i64;
            while pos < src.len() && (src[pos] == '+' || src[pos] == '-') {
                if src[pos] == '-' {
                    sign = -sign;
                }
                pos += 1;
            }
            let mut coeff = sign;
            let mut exp = vec![0u32; m];
            let mut saw_factor = false;
            if let Some(c) = read_number(&mut pos) {
                coeff *= c;
                saw_factor = true;
            }
            loop {
                if pos < src.len() && src[pos] == '*' {
                    pos += 1;
                }
                if pos < src.len() && src[pos] == 'x' {
                    pos += 1;
                    let idx = read_number(&mut pos).ok_or_else(|| bad(pos, "variable index"))?;
                    let idx = usize::try_from(idx).map_err(|_| bad(pos, "variable index"))?;
                    if idx >= m {
                        return Err(bad(pos, &format!("variable x{idx} with m = {m}")));
                    }
                    let mut power = 1;
                    if pos < src.len() && src[pos] == '^' {
                        pos += 1;
                        power = read_number(&mut pos).ok_or_else(|| bad(pos, "exponent"))?;
                    }
                    exp[idx] += u32::try_from(power).map_err(|_| bad(pos, "exponent"))?;
                    saw_factor = true;
                } else if pos < src.len() && src[pos].is_ascii_digit() {
                    let c = read_number(&mut pos).ok_or_else(|| bad(pos, "coefficient"))?;
                    coeff *= c;
                    saw_factor = true;
                } else {
                    break;
                }
            }
            if !saw_factor {
                return Err(bad(pos, "empty term"));
            }
            if pos < src.len() && src[pos] != '+' && src[pos] != '-' {
                return Err(bad(pos, "unexpected character"));
            }
            f.add_term(exp, coeff)?;
        }
        Ok(f)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// Number of variables.
    pub fn arity(&self) -> usize {
        self.m
    }

    pub fn lambda(&self) -> u32 {
        self.lambda
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], u32)> + '_ {
        self.terms.iter().map(|(e, &c)| (e.as_slice(), c))
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exp: &[u32]) -> u32 {
        self.terms.get(exp).copied().unwrap_or(0)
    }

    /// Total degree; the zero polynomial has degree 0.
    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    /// Adds `coeff * x^exp`, merging with an existing term.
    pub fn add_term(&mut self, exp: Vec<u32>, coeff: i64) -> Result<()> {
        if exp.len() != self.m {
            return Err(Error::InvalidInput(format!(
                "exponent vector has length {}, expected {}",
                exp.len(),
                self.m
            )));
        }
        let lambda = self.lambda as i64;
        let c = coeff.rem_euclid(lambda) as u32;
        if c == 0 {
            return Ok(());
        }
        match self.terms.entry(exp) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = (*o.get() + c) % self.lambda;
                if sum == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
        Ok(())
    }

    /// Adds `coeff * x_var`.
    pub fn add_linear(&mut self, var: usize, coeff: i64) -> Result<()> {
        if var >= self.m {
            return Err(Error::InvalidInput(format!(
                "variable x{var} out of range for m = {}",
                self.m
            )));
        }
        let mut exp = vec![0; self.m];
        exp[var] = 1;
        self.add_term(exp, coeff)
    }

    pub fn evaluate(&self, point: &[u32]) -> Result<u32> {
        if point.len() != self.m {
            return Err(Error::InvalidInput(format!(
                "point has {} coordinates, expected {}",
                point.len(),
                self.m
            )));
        }
        if let Some(&bad) = point.iter().find(|&&v| v >= self.p) {
            return Err(Error::InvalidInput(format!(
                "coordinate {bad} outside [0, {}]",
                self.p - 1
            )));
        }
        Ok(self.evaluate_unchecked(point))
    }

    pub(crate) fn evaluate_unchecked(&self, point: &[u32]) -> u32 {
        let lambda = self.lambda as u64;
        let mut acc = 0u64;
        for (exp, &coeff) in &self.terms {
            let mut term = coeff as u64;
            for (&x, &e) in point.iter().zip(exp) {
                if e > 0 {
                    term = term * pow_mod(x as u64, e, lambda) % lambda;
                    if term == 0 {
                        break;
                    }
                }
            }
            acc = (acc + term) % lambda;
        }
        acc as u32
    }

    /// Substitutes `x_{j_alpha} := c_alpha` and folds the constants into the
    /// remaining coefficients.
    pub fn restrict(&self, r: &Restriction) -> Result<Polynomial> {
        r.check_against(self.p, self.m)?;
        let lambda = self.lambda as u64;
        let mut out = Polynomial {
            p: self.p,
            m: self.m,
            lambda: self.lambda,
            terms: BTreeMap::new(),
        };
        for (exp, &coeff) in &self.terms {
            let mut c = coeff as u64;
            let mut e = exp.clone();
            for (&j, &v) in r.indices.iter().zip(&r.values) {
                if e[j] > 0 {
                    c = c * pow_mod(v as u64, e[j], lambda) % lambda;
                    e[j] = 0;
                }
            }
            out.add_term(e, c as i64)?;
        }
        Ok(out)
    }

    /// Degree-2 part: square and cross terms only.
    pub fn quadratic_part(&self) -> Polynomial {
        Polynomial {
            p: self.p,
            m: self.m,
            lambda: self.lambda,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().sum::<u32>() == 2)
                .map(|(e, &c)| (e.clone(), c))
                .collect(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&PolynomialFile::from(self))?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: PolynomialFile = serde_json::from_str(s)?;
        Polynomial::try_from(file)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Highest degree first, then by exponent vector for determinism.
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            db.cmp(&da).then_with(|| b.0.cmp(a.0))
        });
        for (i, (exp, &coeff)) in terms.into_iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let constant = exp.iter().all(|&e| e == 0);
            if coeff != 1 || constant {
                write!(f, "{coeff}")?;
            }
            for (var, &e) in exp.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "x{var}")?,
                    _ => write!(f, "x{var}^{e}")?,
                }
            }
        }
        Ok(())
    }
}

/// JSON form: `{"p":3,"m":3,"lambda":3,"terms":[{"exp":[1,0,1],"coeff":1}]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolynomialFile {
    #[serde(default = "default_schema", skip_serializing)]
    pub schema_version: u32,
    pub p: u32,
    pub m: usize,
    pub lambda: u32,
    pub terms: Vec<TermJson>,
}

fn default_schema() -> u32 {
    SCHEMA_VERSION
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: Vec<u32>,
    pub coeff: u32,
}

impl From<&Polynomial> for PolynomialFile {
    fn from(f: &Polynomial) -> Self {
        PolynomialFile {
            schema_version: SCHEMA_VERSION,
            p: f.p,
            m: f.m,
            lambda: f.lambda,
            terms: f
                .terms
                .iter()
                .map(|(e, &c)| TermJson {
                    exp: e.clone(),
                    coeff: c,
                })
                .collect(),
        }
    }
}

impl TryFrom<PolynomialFile> for Polynomial {
    type Error = Error;

    fn try_from(file: PolynomialFile) -> Result<Self> {
        if file.schema_version != SCHEMA_VERSION {
            return Err(Error::Format(format!(
                "unsupported schema_version {}",
                file.schema_version
            )));
        }
        let mut f = Polynomial::zero(file.p, file.m, file.lambda)?;
        for t in file.terms {
            if t.coeff >= file.lambda {
                return Err(Error::Format(format!(
                    "coefficient {} outside [0, {}]",
                    t.coeff,
                    file.lambda - 1
                )));
            }
            f.add_term(t.exp, t.coeff as i64)?;
        }
        Ok(f)
    }
}

impl Serialize for Polynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolynomialFile::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let file = PolynomialFile::deserialize(d)?;
        Polynomial::try_from(file).map_err(serde::de::Error::custom)
    }
}

/// Fixes `x_J = c` with `J = (j_0 < j_1 < ... < j_{n-1})`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Restriction {
    indices: Vec<usize>,
    values: Vec<u32>,
}

impl Restriction {
    pub fn new(indices: Vec<usize>, values: Vec<u32>) -> Result<Self> {
        if indices.len() != values.len() {
            return Err(Error::InvalidInput(format!(
                "|J| = {} but |c| = {}",
                indices.len(),
                values.len()
            )));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput(format!(
                "restriction indices {indices:?} are not strictly increasing"
            )));
        }
        Ok(Restriction { indices, values })
    }

    pub fn empty() -> Self {
        Restriction {
            indices: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn check_against(&self, p: u32, m: usize) -> Result<()> {
        validate_index_set(&self.indices, m)?;
        if let Some(&bad) = self.values.iter().find(|&&v| v >= p) {
            return Err(Error::InvalidInput(format!(
                "restriction value {bad} outside [0, {}]",
                p - 1
            )));
        }
        Ok(())
    }

    /// Variables not in `J`, ascending.
    pub fn free_vars(&self, m: usize) -> Vec<usize> {
        free_vars(&self.indices, m)
    }

    /// Whether a full digit vector agrees with `c` on `J`.
    pub fn matches(&self, digits: &[u32]) -> bool {
        self.indices
            .iter()
            .zip(&self.values)
            .all(|(&j, &v)| digits[j] == v)
    }

    /// Builds the full point from values of the free variables.
    pub fn merge(&self, m: usize, free_point: &[u32]) -> Result<Vec<u32>> {
        let free = self.free_vars(m);
        if free.len() != free_point.len() {
            return Err(Error::InvalidInput(format!(
                "expected {} free coordinates, got {}",
                free.len(),
                free_point.len()
            )));
        }
        let mut point = vec![0; m];
        for (&j, &v) in self.indices.iter().zip(&self.values) {
            point[j] = v;
        }
        for (&l, &v) in free.iter().zip(free_point) {
            point[l] = v;
        }
        Ok(point)
    }

    /// All `p^n` restrictions over `J`, with `c` enumerated most-significant
    /// digit first.
    pub fn enumerate(indices: &[usize], p: u32) -> impl Iterator<Item = Restriction> + '_ {
        let n = indices.len();
        let count = (p as usize).pow(n as u32);
        (0..count).map(move |c| Restriction {
            indices: indices.to_vec(),
            values: index_to_digits(c, p, n).expect("c < p^n"),
        })
    }
}

pub(crate) fn validate_index_set(indices: &[usize], m: usize) -> Result<()> {
    if indices.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput(format!(
            "index set {indices:?} is not strictly increasing"
        )));
    }
    if let Some(&bad) = indices.iter().find(|&&j| j >= m) {
        return Err(Error::InvalidInput(format!(
            "index {bad} out of range for m = {m}"
        )));
    }
    if indices.len() >= m {
        return Err(Error::InvalidInput(format!(
            "restricting {} of {m} variables leaves none free",
            indices.len()
        )));
    }
    Ok(())
}

pub(crate) fn free_vars(indices: &[usize], m: usize) -> Vec<usize> {
    (0..m).filter(|v| !indices.contains(v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn worked_example() -> Polynomial {
        Polynomial::parse(3, 3, 3, "x0x2 + 2x2x1 + 2x1^2 + x2 + 1").unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(Params::new(3, 3, 2, 3).is_ok());
        assert!(Params::new(3, 3, 2, 6).is_ok());
        assert!(Params::new(2, 3, 1, 2).is_err());
        assert!(Params::new(9, 3, 1, 9).is_err());
        assert!(Params::new(3, 3, 3, 3).is_err());
        assert!(Params::new(3, 3, 1, 4).is_err());
        assert!(Params::new(3, 0, 0, 3).is_err());
        let prm = Params::new(5, 3, 1, 10).unwrap();
        assert_eq!(prm.length(), 125);
        assert_eq!(prm.flock_size(), 25);
        assert_eq!(prm.edge_weight(), 2);
    }

    #[test]
    fn evaluate_worked_example() {
        let f = worked_example();
        assert_eq!(f.evaluate(&[0, 0, 0]).unwrap(), 1);
        assert_eq!(f.evaluate(&[2, 2, 2]).unwrap(), 2);
        assert!(f.evaluate(&[0, 0]).is_err());
        assert!(f.evaluate(&[0, 3, 0]).is_err());
    }

    #[test]
    fn zero_polynomial_evaluates_to_zero() {
        let f = Polynomial::zero(5, 2, 10).unwrap();
        for a in 0..5 {
            for b in 0..5 {
                assert_eq!(f.evaluate(&[a, b]).unwrap(), 0);
            }
        }
    }

    #[test]
    fn no_reduction_of_powers() {
        // x^3 over Z_9 at x = 2 is 8, not 2.
        let f = Polynomial::parse(3, 1, 9, "x0^3").unwrap();
        assert_eq!(f.evaluate(&[2]).unwrap(), 8);
    }

    #[test]
    fn canonical_coefficients() {
        let f = Polynomial::parse(3, 2, 6, "4x0x1 + 2x1x0 - 1 + 7x1 - x1").unwrap();
        // 4 + 2 = 6 = 0 mod 6 cancels; -1 -> 5; 7 - 1 = 6 -> 0.
        assert_eq!(f.term_count(), 1);
        assert_eq!(f.coefficient(&[0, 0]), 5);
        assert!(f.terms().all(|(_, c)| c > 0 && c < 6));
    }

    #[test]
    fn restrict_worked_example() {
        let f = worked_example();
        let r = Restriction::new(vec![0, 2], vec![0, 2]).unwrap();
        let g = f.restrict(&r).unwrap();
        let vals: Vec<u32> = (0..3)
            .map(|x1| g.evaluate(&r.merge(3, &[x1]).unwrap()).unwrap())
            .collect();
        assert_eq!(vals, vec![0, 0, 1]);
    }

    #[test]
    fn restrict_empty_is_identity() {
        let f = worked_example();
        assert_eq!(f.restrict(&Restriction::empty()).unwrap(), f);
    }

    #[test]
    fn restrict_single_product() {
        let f = Polynomial::parse(3, 2, 3, "x0x1").unwrap();
        let r = Restriction::new(vec![0], vec![2]).unwrap();
        let expect = Polynomial::parse(3, 2, 3, "2x1").unwrap();
        assert_eq!(f.restrict(&r).unwrap(), expect);
    }

    #[test]
    fn restriction_rejects_bad_input() {
        assert!(Restriction::new(vec![1, 0], vec![0, 0]).is_err());
        assert!(Restriction::new(vec![0], vec![0, 1]).is_err());
        let f = worked_example();
        let r = Restriction::new(vec![0], vec![3]).unwrap();
        assert!(f.restrict(&r).is_err());
        let r = Restriction::new(vec![5], vec![0]).unwrap();
        assert!(f.restrict(&r).is_err());
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let f = worked_example();
        let s = f.to_json().unwrap();
        assert_eq!(
            s,
            r#"{"p":3,"m":3,"lambda":3,"terms":[{"exp":[0,0,0],"coeff":1},{"exp":[0,0,1],"coeff":1},{"exp":[0,1,1],"coeff":2},{"exp":[0,2,0],"coeff":2},{"exp":[1,0,1],"coeff":1}]}"#
        );
        let g = Polynomial::from_json(&s).unwrap();
        assert_eq!(g, f);
        assert_eq!(g.to_json().unwrap(), s);
    }

    #[test]
    fn json_rejects_out_of_range() {
        let s = r#"{"p":3,"m":2,"lambda":3,"terms":[{"exp":[1,0],"coeff":3}]}"#;
        assert!(Polynomial::from_json(s).is_err());
        let s = r#"{"p":3,"m":2,"lambda":3,"terms":[{"exp":[1,0,0],"coeff":1}]}"#;
        assert!(Polynomial::from_json(s).is_err());
        let s = r#"{"p":4,"m":2,"lambda":4,"terms":[]}"#;
        assert!(Polynomial::from_json(s).is_err());
    }

    #[test]
    fn display_and_parse_agree() {
        let f = worked_example();
        let shown = f.to_string();
        assert_eq!(Polynomial::parse(3, 3, 3, &shown).unwrap(), f);
        assert_eq!(Polynomial::zero(3, 1, 3).unwrap().to_string(), "0");
    }

    #[test]
    fn parse_errors() {
        assert!(Polynomial::parse(3, 2, 3, "").is_err());
        assert!(Polynomial::parse(3, 2, 3, "x5").is_err());
        assert!(Polynomial::parse(3, 2, 3, "x0 + y").is_err());
        assert!(Polynomial::parse(3, 2, 3, "x0 + ").is_err());
    }
}
