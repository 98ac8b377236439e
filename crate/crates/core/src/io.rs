//! Family files.
//!
//! JSON holds a header and the codes as nested phase arrays. CSV starts with
//! `# ` followed by the same header as compact JSON, then a column row
//! `k,t,d,c0,..,c{L-1}` and one record per `(k, t, d)`. Both are written
//! deterministically and re-serialize to identical bytes after a read.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::construction::{CodeFamily, FamilyDescriptor, FamilyKind};
use crate::correlation::{Code, CodeLabel};
use crate::error::{Error, Result};
use crate::poly::{Params, Polynomial, SCHEMA_VERSION};
use crate::seqgen::PhaseSequence;

/// Everything in a family file except the codes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct FamilyHeader {
    pub schema_version: u32,
    #[serde(flatten)]
    pub kind: FamilyKind,
    pub p: u32,
    pub m: usize,
    pub n: usize,
    pub lambda: u32,
    pub K: usize,
    pub M: usize,
    pub L: usize,
    pub theta_bound: usize,
    pub seed: Polynomial,
    pub J: Vec<usize>,
    pub path: Vec<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
struct CodeJson {
    k: u32,
    t: usize,
    rows: Vec<Vec<u32>>,
}

#[derive(Debug, Serialize, Deserialize)]
struct FamilyJson {
    #[serde(flatten)]
    header: FamilyHeader,
    codes: Vec<CodeJson>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

fn header_of(family: &CodeFamily) -> FamilyHeader {
    let d = family.descriptor;
    FamilyHeader {
        schema_version: SCHEMA_VERSION,
        kind: family.kind,
        p: family.params.p,
        m: family.params.m,
        n: family.params.n,
        lambda: family.params.lambda,
        K: d.K,
        M: d.M,
        L: d.L,
        theta_bound: d.theta_bound,
        seed: family.seed.clone(),
        J: family.j.clone(),
        path: family.path.clone(),
    }
}

fn format_err(msg: impl Into<String>) -> Error {
    Error::Format(msg.into())
}

/// Checks the header against itself and returns the parameters and the
/// expected code labels in file order.
fn check_header(h: &FamilyHeader) -> Result<(Params, Vec<CodeLabel>)> {
    if h.schema_version != SCHEMA_VERSION {
        return Err(format_err(format!(
            "schema_version {} is not supported (expected {SCHEMA_VERSION})",
            h.schema_version
        )));
    }
    let params = Params::new(h.p, h.m, h.n, h.lambda).map_err(|e| format_err(e.to_string()))?;
    let expected = match h.kind {
        FamilyKind::Qccs => FamilyDescriptor::qccs(params),
        FamilyKind::Ccc { k } => {
            if k == 0 || k >= h.p {
                return Err(format_err(format!("k = {k} outside 1..{}", h.p)));
            }
            FamilyDescriptor::ccc(params)
        }
    };
    let given = FamilyDescriptor {
        K: h.K,
        M: h.M,
        L: h.L,
        theta_bound: h.theta_bound,
        alphabet: h.lambda,
    };
    if given != expected {
        return Err(format_err(format!(
            "(K, M, L, theta) = ({}, {}, {}, {}) inconsistent with the parameters, expected ({}, {}, {}, {})",
            h.K, h.M, h.L, h.theta_bound, expected.K, expected.M, expected.L, expected.theta_bound
        )));
    }
    if h.seed.p() != h.p || h.seed.arity() != h.m || h.seed.lambda() != h.lambda {
        return Err(format_err("seed function domain differs from the header"));
    }
    if h.J.len() != h.n || h.J.windows(2).any(|w| w[0] >= w[1]) || h.J.iter().any(|&j| j >= h.m) {
        return Err(format_err(format!(
            "J = {:?} is not an increasing list of n indices",
            h.J
        )));
    }
    let mut covered: Vec<usize> = h.J.iter().chain(&h.path).copied().collect();
    covered.sort_unstable();
    if !covered.iter().copied().eq(0..h.m) {
        return Err(format_err("J and path do not partition the variables"));
    }
    let ks: Vec<u32> = match h.kind {
        FamilyKind::Qccs => (1..h.p).collect(),
        FamilyKind::Ccc { k } => vec![k],
    };
    let labels = ks
        .into_iter()
        .flat_map(|k| (0..params.flock_size()).map(move |t| CodeLabel { k, t }))
        .collect();
    Ok((params, labels))
}

fn row_from(lambda: u32, len: usize, phases: Vec<u32>, at: &str) -> Result<PhaseSequence> {
    if phases.len() != len {
        return Err(format_err(format!(
            "{at}: {} phases, expected {len}",
            phases.len()
        )));
    }
    PhaseSequence::from_phases(lambda, phases).map_err(|e| format_err(format!("{at}: {e}")))
}

fn family_from(header: FamilyHeader, codes: Vec<Code>) -> CodeFamily {
    let params = Params {
        p: header.p,
        m: header.m,
        n: header.n,
        lambda: header.lambda,
    };
    CodeFamily {
        params,
        kind: header.kind,
        descriptor: FamilyDescriptor {
            K: header.K,
            M: header.M,
            L: header.L,
            theta_bound: header.theta_bound,
            alphabet: header.lambda,
        },
        seed: header.seed,
        j: header.J,
        path: header.path,
        codes,
    }
}

fn phases_of(row: &PhaseSequence) -> Result<Vec<u32>> {
    row.phases()
        .ok_or_else(|| Error::InvalidInput("family rows must not contain ZERO entries".into()))
}

fn label_of(code: &Code) -> Result<CodeLabel> {
    code.label()
        .ok_or_else(|| Error::InvalidInput("family codes must carry a (k, t) label".into()))
}

pub fn write_family_json<W: Write>(family: &CodeFamily, mut out: W) -> Result<()> {
    let codes = family
        .codes
        .iter()
        .map(|code| {
            let label = label_of(code)?;
            Ok(CodeJson {
                k: label.k,
                t: label.t,
                rows: code.rows().iter().map(phases_of).collect::<Result<_>>()?,
            })
        })
        .collect::<Result<_>>()?;
    let file = FamilyJson {
        header: header_of(family),
        codes,
    };
    serde_json::to_writer(&mut out, &file)?;
    out.write_all(b"\n")?;
    Ok(())
}

pub fn read_family_json(text: &str) -> Result<CodeFamily> {
    let file: FamilyJson = serde_json::from_str(text)?;
    let (params, labels) = check_header(&file.header)?;
    if file.codes.len() != labels.len() {
        return Err(format_err(format!(
            "{} codes, expected {}",
            file.codes.len(),
            labels.len()
        )));
    }
    let mut codes = Vec::with_capacity(labels.len());
    for (i, (code, label)) in file.codes.into_iter().zip(labels).enumerate() {
        if (code.k, code.t) != (label.k, label.t) {
            return Err(format_err(format!(
                "code {i} is (k, t) = ({}, {}), expected ({}, {})",
                code.k, code.t, label.k, label.t
            )));
        }
        if code.rows.len() != params.flock_size() {
            return Err(format_err(format!(
                "code {i} has {} rows, expected {}",
                code.rows.len(),
                params.flock_size()
            )));
        }
        let rows = code
            .rows
            .into_iter()
            .enumerate()
            .map(|(d, r)| {
                row_from(
                    params.lambda,
                    params.length(),
                    r,
                    &format!("code {i} row {d}"),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        codes.push(Code::new(rows, Some(label))?);
    }
    Ok(family_from(file.header, codes))
}

pub fn write_family_csv<W: Write>(family: &CodeFamily, mut out: W) -> Result<()> {
    writeln!(out, "# {}", serde_json::to_string(&header_of(family))?)?;
    let mut w = csv::Writer::from_writer(out);
    let mut columns = vec!["k".to_string(), "t".into(), "d".into()];
    columns.extend((0..family.params.length()).map(|i| format!("c{i}")));
    w.write_record(&columns)?;
    for code in &family.codes {
        let label = label_of(code)?;
        for (d, row) in code.rows().iter().enumerate() {
            let mut record = vec![label.k.to_string(), label.t.to_string(), d.to_string()];
            record.extend(phases_of(row)?.iter().map(u32::to_string));
            w.write_record(&record)?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn read_family_csv<R: BufRead>(mut input: R) -> Result<CodeFamily> {
    let mut first = String::new();
    input.read_line(&mut first)?;
    let json = first
        .trim_end_matches(['\n', '\r'])
        .strip_prefix("# ")
        .ok_or_else(|| format_err("CSV family must start with a '# ' header line"))?;
    let header: FamilyHeader = serde_json::from_str(json)?;
    let (params, labels) = check_header(&header)?;
    let (len, flock) = (params.length(), params.flock_size());

    let mut reader = csv::Reader::from_reader(input);
    let columns = reader.headers()?.clone();
    let expected_columns = len + 3;
    if columns.len() != expected_columns
        || &columns[0] != "k"
        || &columns[1] != "t"
        || &columns[2] != "d"
    {
        return Err(format_err(format!(
            "column row must be k,t,d,c0..c{} ({expected_columns} columns)",
            len - 1
        )));
    }
    let mut records = reader.records();
    let mut codes = Vec::with_capacity(labels.len());
    for label in labels {
        let mut rows = Vec::with_capacity(flock);
        for d in 0..flock {
            let at = format!("record (k, t, d) = ({}, {}, {d})", label.k, label.t);
            let record = records
                .next()
                .ok_or_else(|| format_err(format!("{at} is missing")))??;
            let field = |i: usize| -> Result<u64> {
                record.get(i).and_then(|s| s.parse().ok()).ok_or_else(|| {
                    format_err(format!("{at}: column {i} is not a nonnegative integer"))
                })
            };
            if (field(0)?, field(1)?, field(2)?) != (label.k as u64, label.t as u64, d as u64) {
                return Err(format_err(format!("{at} out of order")));
            }
            let phases = (3..record.len())
                .map(|i| {
                    field(i).and_then(|v| {
                        u32::try_from(v).map_err(|_| format_err(format!("{at}: phase too large")))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row_from(params.lambda, len, phases, &at)?);
        }
        codes.push(Code::new(rows, Some(label))?);
    }
    if records.next().is_some() {
        return Err(format_err("trailing records after the last code"));
    }
    Ok(family_from(header, codes))
}

/// Reads either format, choosing by the first non-space byte.
pub fn read_family(text: &str) -> Result<CodeFamily> {
    if text.trim_start().starts_with('{') {
        read_family_json(text)
    } else {
        read_family_csv(text.as_bytes())
    }
}

pub fn write_family<W: Write>(family: &CodeFamily, format: Format, out: W) -> Result<()> {
    match format {
        Format::Json => write_family_json(family, out),
        Format::Csv => write_family_csv(family, out),
    }
}
