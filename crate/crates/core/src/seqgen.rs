//! Phase sequences of (restricted) multivariate functions.
//!
//! Entry `i` of a sequence corresponds to the point whose base-`p` digits,
//! most significant first, are `i_0, .., i_{m-1}`, i.e.
//! `i = sum_alpha i_alpha p^(m - alpha - 1)`.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{checked_pow, Polynomial, Restriction};

/// Most-significant-first base-`p` digits of `i`, padded to `m` digits.
pub fn index_to_digits(i: usize, p: u32, m: usize) -> Result<Vec<u32>> {
    let len = checked_pow(p, m)
        .ok_or_else(|| Error::InvalidInput(format!("p^m = {p}^{m} is too large")))?;
    if i >= len {
        return Err(Error::InvalidInput(format!("index {i} outside [0, {len})")));
    }
    let mut digits = vec![0; m];
    let mut rest = i;
    for d in digits.iter_mut().rev() {
        *d = (rest % p as usize) as u32;
        rest /= p as usize;
    }
    Ok(digits)
}

pub fn digits_to_index(digits: &[u32], p: u32) -> Result<usize> {
    let mut acc = 0usize;
    for &d in digits {
        if d >= p {
            return Err(Error::InvalidInput(format!("digit {d} outside [0, {})", p)));
        }
        acc = acc
            .checked_mul(p as usize)
            .and_then(|a| a.checked_add(d as usize))
            .ok_or_else(|| Error::InvalidInput("index overflows".into()))?;
    }
    Ok(acc)
}

/// A length-`p^m` sequence whose entries are either ZERO (`None`) or a
/// phase `k` in `Z_lambda`, standing for `exp(2 pi i k / lambda)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PhaseSequence {
    lambda: u32,
    entries: Vec<Option<u32>>,
}

impl PhaseSequence {
    pub fn new(lambda: u32, entries: Vec<Option<u32>>) -> Result<Self> {
        if lambda == 0 {
            return Err(Error::InvalidInput("lambda must be positive".into()));
        }
        if let Some(bad) = entries.iter().flatten().find(|&&k| k >= lambda) {
            return Err(Error::InvalidInput(format!(
                "phase {bad} outside [0, {}]",
                lambda - 1
            )));
        }
        Ok(PhaseSequence { lambda, entries })
    }

    /// Sequence with no ZERO entries.
    pub fn from_phases(lambda: u32, phases: Vec<u32>) -> Result<Self> {
        Self::new(lambda, phases.into_iter().map(Some).collect())
    }

    pub fn lambda(&self) -> u32 {
        self.lambda
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Option<u32>] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> Option<u32> {
        self.entries[i]
    }

    /// Number of non-ZERO entries.
    pub fn support_size(&self) -> usize {
        self.entries.iter().filter(|e| e.is_some()).count()
    }

    pub fn is_full(&self) -> bool {
        self.entries.iter().all(Option::is_some)
    }

    /// Phases of a full sequence.
    pub fn phases(&self) -> Option<Vec<u32>> {
        self.entries.iter().copied().collect()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["index", "is_zero", "phase"])?;
        for (i, e) in self.entries.iter().enumerate() {
            let (zero, phase) = match e {
                Some(k) => ("0", k.to_string()),
                None => ("1", "-1".to_string()),
            };
            w.write_record([i.to_string().as_str(), zero, phase.as_str()])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// JSON form `{"lambda":3,"entries":[1,-1,...]}` with `-1` for ZERO.
#[derive(Serialize, Deserialize)]
struct SequenceFile {
    lambda: u32,
    entries: Vec<i64>,
}

impl Serialize for PhaseSequence {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SequenceFile {
            lambda: self.lambda,
            entries: self
                .entries
                .iter()
                .map(|e| e.map_or(-1, i64::from))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PhaseSequence {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let file = SequenceFile::deserialize(d)?;
        let entries = file
            .entries
            .into_iter()
            .map(|v| match v {
                -1 => Ok(None),
                v => u32::try_from(v)
                    .map(Some)
                    .map_err(|_| D::Error::custom(format!("invalid entry {v}"))),
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        PhaseSequence::new(file.lambda, entries).map_err(D::Error::custom)
    }
}

fn sequence_length(f: &Polynomial) -> Result<usize> {
    checked_pow(f.p(), f.arity())
        .ok_or_else(|| Error::InvalidInput(format!("p^m = {}^{} is too large", f.p(), f.arity())))
}

/// `psi(f)`: entry `i` is the phase `f(i_0, .., i_{m-1})`.
pub fn sequence_of(f: &Polynomial) -> Result<PhaseSequence> {
    let (p, m) = (f.p(), f.arity());
    let len = sequence_length(f)?;
    let entries = (0..len)
        .into_par_iter()
        .map(|i| {
            let digits = index_to_digits(i, p, m).expect("i < p^m");
            Some(f.evaluate_unchecked(&digits))
        })
        .collect();
    Ok(PhaseSequence {
        lambda: f.lambda(),
        entries,
    })
}

/// `psi(f | x_J = c)`: the phase of `f` where the digits of `i` agree with
/// `c` on `J`, ZERO elsewhere.
pub fn restricted_sequence(f: &Polynomial, r: &Restriction) -> Result<PhaseSequence> {
    let (p, m) = (f.p(), f.arity());
    r.check_against(p, m)?;
    let len = sequence_length(f)?;
    let entries = (0..len)
        .into_par_iter()
        .map(|i| {
            let digits = index_to_digits(i, p, m).expect("i < p^m");
            r.matches(&digits).then(|| f.evaluate_unchecked(&digits))
        })
        .collect();
    Ok(PhaseSequence {
        lambda: f.lambda(),
        entries,
    })
}

/// All `p^n` restricted sequences over `J`, in the order of
/// [`Restriction::enumerate`].
pub fn restricted_sequences(f: &Polynomial, j: &[usize]) -> Result<Vec<PhaseSequence>> {
    let restrictions: Vec<Restriction> = Restriction::enumerate(j, f.p()).collect();
    restrictions
        .par_iter()
        .map(|r| restricted_sequence(f, r))
        .collect()
}

/// Entrywise union of sequences with pairwise disjoint supports.
pub fn superpose(parts: &[PhaseSequence]) -> Result<PhaseSequence> {
    let first = parts
        .first()
        .ok_or_else(|| Error::InvalidInput("nothing to superpose".into()))?;
    let mut entries = vec![None; first.len()];
    for part in parts {
        if part.len() != first.len() || part.lambda != first.lambda {
            return Err(Error::ShapeMismatch(format!(
                "cannot superpose length {} over Z_{} with length {} over Z_{}",
                part.len(),
                part.lambda,
                first.len(),
                first.lambda
            )));
        }
        for (index, (slot, &e)) in entries.iter_mut().zip(&part.entries).enumerate() {
            if let Some(k) = e {
                if slot.is_some() {
                    return Err(Error::InvalidSuperposition { index });
                }
                *slot = Some(k);
            }
        }
    }
    Ok(PhaseSequence {
        lambda: first.lambda,
        entries,
    })
}
