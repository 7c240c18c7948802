//! Graded quotients `KQ/I` with an explicit monomial basis: finite-dimensional
//! algebras, or degree truncations of infinite-dimensional ones.

use std::collections::HashMap;
use std::sync::Arc;

use crate::element::AlgebraElement;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{self, SparseVec};
use crate::quiver::{Path, Quiver, VertexIdx};
use crate::rewrite::{FiniteVerdict, RewriteSystem};

/// Largest completion bound tried when searching for the top degree.
const MAX_FINITE_SEARCH: usize = 64;

/// How basis paths are weighted for block decompositions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Grading {
    /// Multiplicity of every arrow (all relations multihomogeneous).
    ArrowCounts,
    /// Path length only.
    Length,
}

#[derive(Clone, Debug)]
pub struct Algebra {
    sys: RewriteSystem,
    basis: Vec<Path>,
    degree_start: Vec<usize>,
    index: HashMap<Path, usize>,
    finite: bool,
    max_degree: usize,
    grading: Grading,
    weights: Vec<Vec<i32>>,
    table: Vec<Option<SparseVec>>,
}

impl Algebra {
    /// Completes `sys` far enough to find the top nonzero degree of a
    /// finite-dimensional graded quotient.
    pub fn finite(sys: &RewriteSystem) -> Result<Algebra> {
        if !sys.is_homogeneous() {
            return Err(Error::NotHomogeneous("finite algebras are built from graded presentations".into()));
        }
        let start = sys.rules().iter().map(|r| r.lead.len()).max().unwrap_or(1) + 1;
        for bound in start..=MAX_FINITE_SEARCH {
            let done = sys.complete(bound)?;
            if let FiniteVerdict::Finite { top_degree, .. } = done.is_finite_dimensional(bound)? {
                return Algebra::build(done, top_degree, true);
            }
        }
        Err(Error::NotFiniteDimensional(MAX_FINITE_SEARCH))
    }

    /// The degree `0..=max_degree` part of the graded quotient.
    pub fn truncated(sys: &RewriteSystem, max_degree: usize) -> Result<Algebra> {
        if !sys.is_homogeneous() {
            return Err(Error::NotHomogeneous("degree truncations need graded presentations".into()));
        }
        let done = sys.complete(max_degree)?;
        Algebra::build(done, max_degree, false)
    }

    fn build(sys: RewriteSystem, max_degree: usize, finite: bool) -> Result<Algebra> {
        let layers = sys.basis_up_to(max_degree)?;
        let mut basis = Vec::new();
        let mut degree_start = Vec::new();
        for layer in layers {
            degree_start.push(basis.len());
            basis.extend(layer);
        }
        degree_start.push(basis.len());
        let index = basis.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let grading = if sys.is_multihomogeneous() { Grading::ArrowCounts } else { Grading::Length };
        let n = sys.quiver().num_arrows();
        let weights = basis
            .iter()
            .map(|p| match grading {
                Grading::ArrowCounts => p.content(n),
                Grading::Length => vec![p.len() as i32],
            })
            .collect();
        let mut alg =
            Algebra { sys, basis, degree_start, index, finite, max_degree, grading, weights, table: Vec::new() };
        alg.table = alg.product_table();
        Ok(alg)
    }

    fn product_table(&self) -> Vec<Option<SparseVec>> {
        let d = self.basis.len();
        let mut table = Vec::with_capacity(d * d);
        for p in &self.basis {
            for q in &self.basis {
                let entry = match p.compose(q) {
                    None => Some(Vec::new()),
                    Some(pq) if pq.len() > self.max_degree => {
                        if self.finite {
                            Some(Vec::new())
                        } else {
                            None
                        }
                    }
                    Some(pq) => Some(self.reduce_to_vec(pq)),
                };
                table.push(entry);
            }
        }
        table
    }

    fn reduce_to_vec(&self, p: Path) -> SparseVec {
        let nf = self.sys.reduce_path(p);
        linalg::from_pairs(nf.terms().map(|(q, c)| (self.index[q], c.clone())))
    }

    pub fn system(&self) -> &RewriteSystem {
        &self.sys
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        self.sys.quiver()
    }

    pub fn field(&self) -> Field {
        self.sys.field()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_finite(&self) -> bool {
        self.finite
    }

    /// Top nonzero degree (finite algebras) or the truncation degree.
    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn grading(&self) -> Grading {
        self.grading
    }

    pub fn basis(&self) -> &[Path] {
        &self.basis
    }

    pub fn path(&self, i: usize) -> &Path {
        &self.basis[i]
    }

    pub fn index_of(&self, p: &Path) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn degree_of(&self, i: usize) -> usize {
        self.basis[i].len()
    }

    /// Basis indices of degree `d`.
    pub fn degree_range(&self, d: usize) -> std::ops::Range<usize> {
        if d > self.max_degree {
            return 0..0;
        }
        self.degree_start[d]..self.degree_start[d + 1]
    }

    pub fn weight(&self, i: usize) -> &[i32] {
        &self.weights[i]
    }

    pub fn weight_len(&self) -> usize {
        match self.grading {
            Grading::ArrowCounts => self.quiver().num_arrows(),
            Grading::Length => 1,
        }
    }

    pub fn origin(&self, i: usize) -> VertexIdx {
        self.basis[i].origin()
    }

    pub fn tail(&self, i: usize) -> VertexIdx {
        self.basis[i].tail()
    }

    /// Basis indices of the trivial paths, by vertex.
    pub fn vertex_index(&self, v: VertexIdx) -> usize {
        self.index[&Path::trivial(v)]
    }

    /// Basis elements of positive degree (the radical).
    pub fn radical(&self) -> std::ops::Range<usize> {
        self.degree_start[1.min(self.max_degree + 1)]..self.basis.len()
    }

    /// Basis indices spanning `e_i Λ e_j`.
    pub fn between(&self, i: VertexIdx, j: VertexIdx) -> Vec<usize> {
        (0..self.basis.len()).filter(|&k| self.origin(k) == i && self.tail(k) == j).collect()
    }

    /// Product of two basis elements in basis coordinates.
    pub fn mul_basis(&self, i: usize, j: usize) -> Result<&SparseVec> {
        self.table[i * self.basis.len() + j].as_ref().ok_or_else(|| Error::DegreeOverflow {
            length: self.degree_of(i) + self.degree_of(j),
            bound: self.max_degree,
        })
    }

    pub fn mul(&self, x: &SparseVec, y: &SparseVec) -> Result<SparseVec> {
        let mut acc = Vec::new();
        for (i, a) in x {
            for (j, b) in y {
                let p = self.mul_basis(*i, *j)?;
                if !p.is_empty() {
                    acc.extend(p.iter().map(|(k, c)| (*k, &(a * b) * c)));
                }
            }
        }
        Ok(linalg::from_pairs(acc))
    }

    pub fn one(&self) -> SparseVec {
        let f = self.field();
        linalg::from_pairs((0..self.quiver().num_vertices() as u32).map(|v| (self.vertex_index(v), f.one())))
    }

    /// Coordinates of an element of `KQ` after reduction.
    pub fn to_vec(&self, x: &AlgebraElement) -> Result<SparseVec> {
        if x.max_len() > self.max_degree && !self.finite {
            return Err(Error::DegreeOverflow { length: x.max_len(), bound: self.max_degree });
        }
        let mut acc = Vec::new();
        for (p, c) in x.terms() {
            if p.len() > self.max_degree {
                continue;
            }
            for (k, d) in self.reduce_to_vec(p.clone()) {
                acc.push((k, c * &d));
            }
        }
        Ok(linalg::from_pairs(acc))
    }

    pub fn to_element(&self, v: &SparseVec) -> AlgebraElement {
        AlgebraElement::from_terms(self.field(), v.iter().map(|(i, c)| (c.clone(), self.basis[*i].clone())))
    }

    pub fn display_vec(&self, v: &SparseVec) -> String {
        self.to_element(v).display(self.quiver())
    }
}
