//! CNF encoding of 2-colourability, cube splitting and model decoding.
//!
//! Each edge `{i, j, k}` contributes `(x_i | x_j | x_k)` and
//! `(-x_i | -x_j | -x_k)`: it must contain a true and a false vertex.

mod dimacs;

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::coloring::Coloring;
use crate::error::{Error, Result};
use crate::hypergraph::TripleSystem;
use crate::triples::UpperBound;
use crate::Vertex;

pub use dimacs::{emit, parse, read_file, write_file};

/// Order-preserving bijection between vertices and variables `1..=n`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct RemapTable {
    forward: BTreeMap<Vertex, u32>,
    backward: Vec<Vertex>,
}

impl RemapTable {
    pub fn from_vertices(vertices: impl IntoIterator<Item = Vertex>) -> Self {
        let backward: Vec<Vertex> = vertices
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let forward = backward
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i as u32 + 1))
            .collect();
        RemapTable { forward, backward }
    }

    pub fn var(&self, v: Vertex) -> Option<u32> {
        self.forward.get(&v).copied()
    }

    pub fn vertex(&self, var: u32) -> Option<Vertex> {
        let i = usize::try_from(var).ok()?.checked_sub(1)?;
        self.backward.get(i).copied()
    }

    pub fn len(&self) -> usize {
        self.backward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.backward.is_empty()
    }

    /// `(vertex, variable)` pairs in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = (Vertex, u32)> + '_ {
        self.forward.iter().map(|(&v, &x)| (v, x))
    }
}

/// A DIMACS formula. Literals are nonzero `i32`s; positive means True.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CnfDocument {
    comments: Vec<String>,
    var_count: u32,
    clauses: Vec<Vec<i32>>,
}

impl CnfDocument {
    pub fn new(comments: Vec<String>, var_count: u32, clauses: Vec<Vec<i32>>) -> Result<Self> {
        if var_count > i32::MAX as u32 {
            return Err(Error::Cnf(format!("{var_count} variables is too many")));
        }
        for (i, clause) in clauses.iter().enumerate() {
            if let Some(&lit) = clause
                .iter()
                .find(|&&l| l == 0 || l.unsigned_abs() > var_count)
            {
                return Err(Error::Cnf(format!(
                    "clause {i} has literal {lit} outside 1..={var_count}"
                )));
            }
        }
        if let Some(c) = comments.iter().find(|c| c.contains('\n')) {
            return Err(Error::Cnf(format!("comment {c:?} spans lines")));
        }
        Ok(CnfDocument {
            comments,
            var_count,
            clauses,
        })
    }

    pub fn comments(&self) -> &[String] {
        &self.comments
    }

    pub fn var_count(&self) -> u32 {
        self.var_count
    }

    pub fn clause_count(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Vec<i32>] {
        &self.clauses
    }

    /// Copy with extra clauses appended; the header follows.
    pub fn with_clauses(&self, extra: impl IntoIterator<Item = Vec<i32>>) -> Result<Self> {
        let mut clauses = self.clauses.clone();
        clauses.extend(extra);
        CnfDocument::new(self.comments.clone(), self.var_count, clauses)
    }

    /// Whether a full assignment (one literal per variable) satisfies
    /// every clause.
    pub fn is_satisfied_by(&self, model: &[i32]) -> bool {
        let mut value = vec![None; self.var_count as usize + 1];
        for &lit in model {
            if let Some(slot) = value.get_mut(lit.unsigned_abs() as usize) {
                *slot = Some(lit > 0);
            }
        }
        self.clauses.iter().all(|c| {
            c.iter()
                .any(|&l| value[l.unsigned_abs() as usize] == Some(l > 0))
        })
    }
}

/// Truth values fixed for the special vertices of one cube.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cube {
    pub assignments: Vec<(Vertex, bool)>,
}

impl Cube {
    /// Index of this cube in [`split`] order.
    pub fn index(&self) -> usize {
        self.assignments
            .iter()
            .fold(0, |acc, &(_, value)| (acc << 1) | usize::from(value))
    }

    /// Assignment bits as a string of `0`/`1`, first special first.
    pub fn bits(&self) -> String {
        self.assignments
            .iter()
            .map(|&(_, b)| if b { '1' } else { '0' })
            .collect()
    }
}

/// Encodes 2-colourability of `sys`. The first comment records `bound`.
pub fn encode(sys: &TripleSystem, bound: UpperBound) -> (CnfDocument, RemapTable) {
    let table = RemapTable::from_vertices(sys.vertices().iter().copied());
    let mut clauses = Vec::with_capacity(2 * sys.edge_count());
    for e in sys.edges() {
        let pos: Vec<i32> = e
            .vertices()
            .iter()
            .map(|&v| table.var(v).expect("edge vertex is in the table") as i32)
            .collect();
        let neg = pos.iter().map(|&x| -x).collect();
        clauses.push(pos);
        clauses.push(neg);
    }
    let doc = CnfDocument::new(vec![bound.to_string()], table.len() as u32, clauses)
        .expect("encoding uses only table variables");
    (doc, table)
}

/// The `2^m` cube documents for `specials`.
///
/// Cube `i` gives the `j`-th special the value of bit `m-1-j` of `i`, so the
/// cubes run through the sign patterns in binary order. Each fixed value is
/// appended as a tripled unit clause `x x x 0`.
pub fn split(
    doc: &CnfDocument,
    table: &RemapTable,
    specials: &[Vertex],
) -> Result<Vec<(Cube, CnfDocument)>> {
    let m = specials.len();
    if m == 0 {
        return Err(Error::Split("at least one special vertex is required".into()));
    }
    if m > 20 {
        return Err(Error::Split(format!("{m} specials would make 2^{m} cubes")));
    }
    if specials.iter().collect::<BTreeSet<_>>().len() != m {
        return Err(Error::Split("special vertices must be distinct".into()));
    }
    let vars = specials
        .iter()
        .map(|&v| {
            table
                .var(v)
                .filter(|&x| x <= doc.var_count())
                .map(|x| x as i32)
                .ok_or_else(|| Error::Split(format!("vertex {v} does not occur in the formula")))
        })
        .collect::<Result<Vec<i32>>>()?;
    (0..1usize << m)
        .map(|i| {
            let assignments: Vec<(Vertex, bool)> = specials
                .iter()
                .enumerate()
                .map(|(j, &v)| (v, (i >> (m - 1 - j)) & 1 == 1))
                .collect();
            let units = assignments.iter().zip(&vars).map(|(&(_, value), &x)| {
                let lit = if value { x } else { -x };
                vec![lit; 3]
            });
            let cube_doc = doc.with_clauses(units)?;
            Ok((Cube { assignments }, cube_doc))
        })
        .collect()
}

/// Translates a model back to a colouring of the table's vertices.
pub fn decode_model(model: &[i32], table: &RemapTable) -> Result<Coloring> {
    let mut value: BTreeMap<u32, bool> = BTreeMap::new();
    for &lit in model {
        if lit != 0 {
            value.insert(lit.unsigned_abs(), lit > 0);
        }
    }
    table
        .iter()
        .map(|(v, x)| {
            value
                .get(&x)
                .map(|&b| (v, b))
                .ok_or(Error::IncompleteModel(x))
        })
        .collect()
}
