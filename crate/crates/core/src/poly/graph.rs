//! Quadratic-term graph of a polynomial and the uniform-weight Hamiltonian
//! path condition.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{free_vars, validate_index_set, Polynomial, Restriction};
use crate::error::{Error, Result};

/// Graph on variable indices: an edge `{i, j}` for every nonzero `x_i x_j`
/// coefficient and a loop at `i` for every nonzero `x_i^2` coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FunctionGraph {
    vertices: Vec<usize>,
    edges: BTreeMap<(usize, usize), u32>,
    loops: BTreeMap<usize, u32>,
}

pub fn build_graph(f: &Polynomial) -> Result<FunctionGraph> {
    let all: Vec<usize> = (0..f.arity()).collect();
    FunctionGraph::over(f, &all)
}

impl FunctionGraph {
    /// Graph of `f` restricted to the given vertex set. Every quadratic
    /// monomial must live on that set.
    pub fn over(f: &Polynomial, vertices: &[usize]) -> Result<Self> {
        let degree = f.degree();
        if degree > 2 {
            return Err(Error::NotQuadratic { degree });
        }
        let mut vertices = vertices.to_vec();
        vertices.sort_unstable();
        vertices.dedup();
        let mut edges = BTreeMap::new();
        let mut loops = BTreeMap::new();
        for (exp, coeff) in f.quadratic_part().terms() {
            let vars: Vec<usize> = exp
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(v, _)| v)
                .collect();
            if let Some(&v) = vars.iter().find(|v| vertices.binary_search(v).is_err()) {
                return Err(Error::InvalidInput(format!(
                    "quadratic term touches x{v}, which is not a vertex"
                )));
            }
            match vars.as_slice() {
                [i] => {
                    loops.insert(*i, coeff);
                }
                [i, j] => {
                    edges.insert((*i, *j), coeff);
                }
                _ => unreachable!("degree-2 monomial has one or two variables"),
            }
        }
        Ok(FunctionGraph {
            vertices,
            edges,
            loops,
        })
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    /// Edges keyed by `(i, j)` with `i < j`.
    pub fn edges(&self) -> &BTreeMap<(usize, usize), u32> {
        &self.edges
    }

    pub fn loops(&self) -> &BTreeMap<usize, u32> {
        &self.loops
    }

    pub fn edge_weight(&self, i: usize, j: usize) -> Option<u32> {
        let key = if i < j { (i, j) } else { (j, i) };
        self.edges.get(&key).copied()
    }

    /// Vertex order of the simple path through every vertex, read from the
    /// lower-indexed endpoint. Weights are not inspected.
    pub fn hamiltonian_path(&self) -> std::result::Result<Vec<usize>, String> {
        if let Some((&v, _)) = self.loops.iter().next() {
            return Err(format!("loop present at x{v}"));
        }
        let r = self.vertices.len();
        if r == 0 {
            return Err("graph has no vertices".into());
        }
        if r == 1 {
            return Ok(self.vertices.clone());
        }
        if self.edges.len() != r - 1 {
            return Err(format!(
                "{} edges on {r} vertices, a path needs {}",
                self.edges.len(),
                r - 1
            ));
        }
        let mut adjacency: BTreeMap<usize, Vec<usize>> =
            self.vertices.iter().map(|&v| (v, Vec::new())).collect();
        for &(i, j) in self.edges.keys() {
            adjacency.get_mut(&i).expect("vertex").push(j);
            adjacency.get_mut(&j).expect("vertex").push(i);
        }
        if let Some((v, _)) = adjacency.iter().find(|(_, n)| n.len() > 2) {
            return Err(format!("x{v} has degree greater than 2"));
        }
        if let Some((v, _)) = adjacency.iter().find(|(_, n)| n.is_empty()) {
            return Err(format!("x{v} is isolated"));
        }
        let start = *adjacency
            .iter()
            .find(|(_, n)| n.len() == 1)
            .map(|(v, _)| v)
            .ok_or_else(|| "graph is a cycle, not a path".to_string())?;
        let mut order = vec![start];
        let mut prev = usize::MAX;
        let mut cur = start;
        while let Some(&next) = adjacency[&cur].iter().find(|&&n| n != prev) {
            if order.contains(&next) {
                break;
            }
            order.push(next);
            prev = cur;
            cur = next;
        }
        if order.len() != r {
            return Err("graph is disconnected".into());
        }
        Ok(order)
    }
}

/// Outcome of checking that every restriction of `f` over `J` has a
/// Hamiltonian path with all edge weights `lambda/p`, with one shared order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PathCertificate {
    /// Path order `l_pi(0), ..., l_pi(m-n-1)`; empty when invalid.
    pub free_vars: Vec<usize>,
    pub edge_weight: u32,
    pub valid: bool,
    pub failure_reason: Option<String>,
    pub restrictions_checked: usize,
    /// True when a single restriction was checked because `f` is globally
    /// quadratic.
    pub short_circuited: bool,
}

impl PathCertificate {
    pub fn first(&self) -> Option<usize> {
        self.free_vars.first().copied()
    }

    pub fn last(&self) -> Option<usize> {
        self.free_vars.last().copied()
    }
}

/// Certifies the path condition for `f` over `J`.
///
/// A restriction cannot alter degree-2 coefficients among free variables
/// when `f` itself has degree at most 2, so in that case only `c = 0` is
/// examined.
pub fn certify_hamiltonian_path(f: &Polynomial, j: &[usize]) -> Result<PathCertificate> {
    validate_index_set(j, f.arity())?;
    if f.degree() <= 2 {
        let zero = Restriction::new(j.to_vec(), vec![0; j.len()])?;
        let mut cert = check_restrictions(f, j, std::iter::once(zero));
        cert.short_circuited = true;
        Ok(cert)
    } else {
        Ok(check_restrictions(f, j, Restriction::enumerate(j, f.p())))
    }
}

/// Same as [`certify_hamiltonian_path`] but always walks all `p^n` vectors.
pub fn certify_hamiltonian_path_exhaustive(f: &Polynomial, j: &[usize]) -> Result<PathCertificate> {
    validate_index_set(j, f.arity())?;
    Ok(check_restrictions(f, j, Restriction::enumerate(j, f.p())))
}

fn check_restrictions<I>(f: &Polynomial, j: &[usize], restrictions: I) -> PathCertificate
where
    I: Iterator<Item = Restriction>,
{
    let weight = f.lambda() / f.p();
    let free = free_vars(j, f.arity());
    let mut shared: Option<(Vec<usize>, Vec<u32>)> = None;
    let mut checked = 0;
    let fail = |reason: String, checked: usize| PathCertificate {
        free_vars: Vec::new(),
        edge_weight: weight,
        valid: false,
        failure_reason: Some(reason),
        restrictions_checked: checked,
        short_circuited: false,
    };

    for r in restrictions {
        checked += 1;
        let at = format!("c = {:?}", r.values());
        let g = match f.restrict(&r) {
            Ok(g) => g,
            Err(e) => return fail(format!("{e} at {at}"), checked),
        };
        let graph = match FunctionGraph::over(&g, &free) {
            Ok(graph) => graph,
            Err(Error::NotQuadratic { degree }) => {
                return fail(
                    format!("restriction is not quadratic (degree {degree}) at {at}"),
                    checked,
                )
            }
            Err(e) => return fail(format!("{e} at {at}"), checked),
        };
        let order = match graph.hamiltonian_path() {
            Ok(order) => order,
            Err(reason) => return fail(format!("{reason} at {at}"), checked),
        };
        if let Some((&(a, b), &w)) = graph.edges().iter().find(|(_, &w)| w != weight) {
            return fail(
                format!("edge {{x{a}, x{b}}} has weight {w}, expected lambda/p = {weight} at {at}"),
                checked,
            );
        }
        match &shared {
            None => shared = Some((order, r.values().to_vec())),
            Some((first, c0)) if *first != order => {
                return fail(
                    format!("path order {order:?} at {at} differs from {first:?} at c = {c0:?}"),
                    checked,
                );
            }
            Some(_) => {}
        }
    }

    let (order, _) = shared.expect("at least one restriction is checked");
    PathCertificate {
        free_vars: order,
        edge_weight: weight,
        valid: true,
        failure_reason: None,
        restrictions_checked: checked,
        short_circuited: false,
    }
}
