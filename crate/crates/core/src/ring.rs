//! Degree truncations of graded rings given by a basis per degree and a
//! product table, with certified nilpotence and quotient-by-nilpotents data.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::field::{Field, Scalar};
use crate::linalg::{self, Echelon, SparseVec};

/// Largest number of ordered products tried when testing a whole block.
const BLOCK_PRODUCT_LIMIT: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum NilLabel {
    Nilpotent,
    NotNilpotentUpToN,
    Undetermined,
}

/// Exact access to powers that leave the truncation, for rings able to
/// compute them on demand.
pub trait PowerOracle: Sync {
    /// For `x ∈ R_d` homogeneous for the weight grading, a vector that is
    /// empty iff `x^k = 0`, depending linearly on `x` whenever `x ↦ x^k` is
    /// additive. `None` when out of reach.
    fn power_residual(&self, d: usize, x: &SparseVec, k: usize) -> Option<SparseVec>;

    /// Largest degree the oracle is allowed to reach.
    fn max_degree(&self) -> usize;
}

/// `R_0 ⊕ … ⊕ R_N` with products `R_d × R_e → R_{d+e}` for `d + e ≤ N`.
/// Basis elements are homogeneous for an auxiliary weight grading that the
/// product respects; it is only used to split degrees into smaller blocks.
#[derive(Clone, Debug)]
pub struct GradedRingTruncation {
    field: Field,
    max_degree: usize,
    graded_commutative: bool,
    labels: Vec<Vec<String>>,
    weights: Vec<Vec<Vec<i32>>>,
    /// `table[d][e][i * dim(e) + j]` is `b^d_i · b^e_j`.
    table: Vec<Vec<Vec<SparseVec>>>,
}

impl GradedRingTruncation {
    /// Tabulates every product through `mul(d, i, e, j)`.
    pub fn new<F>(
        field: Field,
        max_degree: usize,
        graded_commutative: bool,
        labels: Vec<Vec<String>>,
        weights: Vec<Vec<Vec<i32>>>,
        mul: F,
    ) -> Result<GradedRingTruncation>
    where
        F: Fn(usize, usize, usize, usize) -> Result<SparseVec> + Sync,
    {
        assert_eq!(labels.len(), max_degree + 1);
        let dims: Vec<usize> = labels.iter().map(Vec::len).collect();
        let mut table = Vec::with_capacity(max_degree + 1);
        for d in 0..=max_degree {
            let mut row = Vec::with_capacity(max_degree + 1 - d);
            for e in 0..=max_degree - d {
                let cells: Vec<SparseVec> = (0..dims[d] * dims[e])
                    .into_par_iter()
                    .map(|k| mul(d, k / dims[e].max(1), e, k % dims[e].max(1)))
                    .collect::<Result<_>>()?;
                row.push(cells);
            }
            table.push(row);
        }
        Ok(GradedRingTruncation { field, max_degree, graded_commutative, labels, weights, table })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn dim(&self, d: usize) -> usize {
        self.labels[d].len()
    }

    pub fn dims(&self) -> Vec<usize> {
        (0..=self.max_degree).map(|d| self.dim(d)).collect()
    }

    pub fn label(&self, d: usize, i: usize) -> &str {
        &self.labels[d][i]
    }

    pub fn weight(&self, d: usize, i: usize) -> &[i32] {
        &self.weights[d][i]
    }

    pub fn mul_basis(&self, d: usize, i: usize, e: usize, j: usize) -> &SparseVec {
        &self.table[d][e][i * self.dim(e) + j]
    }

    /// Product of `x ∈ R_d` and `y ∈ R_e`; `None` beyond the truncation.
    pub fn mul(&self, d: usize, x: &SparseVec, e: usize, y: &SparseVec) -> Option<SparseVec> {
        if d + e > self.max_degree {
            return None;
        }
        let mut acc = Vec::new();
        for (i, a) in x {
            for (j, b) in y {
                let ab = a * b;
                acc.extend(self.mul_basis(d, *i, e, *j).iter().map(|(k, c)| (*k, &ab * c)));
            }
        }
        Some(linalg::from_pairs(acc))
    }

    /// `x^k` for `x ∈ R_d`, if `k·d ≤ N`.
    pub fn pow(&self, d: usize, x: &SparseVec, k: usize) -> Option<SparseVec> {
        if k == 0 {
            return None;
        }
        let mut acc = x.clone();
        for m in 1..k {
            acc = self.mul(m * d, &acc, d, x)?;
        }
        Some(acc)
    }

    /// Groups basis indices of degree `d` by weight, in first-seen order.
    fn blocks(&self, d: usize) -> Vec<Vec<usize>> {
        let mut out: Vec<(Vec<i32>, Vec<usize>)> = Vec::new();
        for i in 0..self.dim(d) {
            let w = &self.weights[d][i];
            match out.iter_mut().find(|(v, _)| v == w) {
                Some((_, idx)) => idx.push(i),
                None => out.push((w.clone(), vec![i])),
            }
        }
        out.into_iter().map(|(_, idx)| idx).collect()
    }

    /// Span of the two-sided ideal generated by `gens` (per degree).
    pub fn ideal_closure(&self, gens: &[Vec<SparseVec>]) -> Vec<Echelon> {
        let mut ideal: Vec<Echelon> = (0..=self.max_degree).map(|_| Echelon::new(self.field)).collect();
        for d in 0..=self.max_degree {
            let mut queue: Vec<SparseVec> = gens[d].clone();
            for e in 1..=d {
                let lower: Vec<SparseVec> = ideal[d - e].basis().cloned().collect();
                for x in &lower {
                    for r in 0..self.dim(e) {
                        let r = linalg::unit(self.field, r);
                        queue.push(self.mul(e, &r, d - e, x).unwrap());
                        queue.push(self.mul(d - e, x, e, &r).unwrap());
                    }
                }
            }
            // degree-0 multiples stay in degree d
            while let Some(v) = queue.pop() {
                if v.is_empty() || !ideal[d].insert_untagged(&v) {
                    continue;
                }
                for r in 0..self.dim(0) {
                    let r = linalg::unit(self.field, r);
                    queue.push(self.mul(0, &r, d, &v).unwrap());
                    queue.push(self.mul(d, &v, 0, &r).unwrap());
                }
            }
        }
        ideal
    }

    /// Nilradical of the finite-dimensional commutative algebra `R_0`.
    fn degree_zero_nilradical(&self) -> Vec<SparseVec> {
        let n = self.dim(0);
        let f = self.field;
        let unit = |i| linalg::unit(f, i);
        match f {
            Field::Prime(p) => {
                // kernel of x ↦ x^(p^j) with p^j ≥ dim R_0 (linear in characteristic p)
                let mut j = 1u32;
                while (p as usize).pow(j) < n.max(1) {
                    j += 1;
                }
                let cols: Vec<SparseVec> = (0..n)
                    .map(|i| {
                        let mut x = unit(i);
                        for _ in 0..j {
                            x = self.pow(0, &x, p as usize).unwrap();
                        }
                        x
                    })
                    .collect();
                linalg::kernel_and_image(f, &cols).0
            }
            Field::Rational => {
                // radical of the trace form (x, y) ↦ tr(L_{xy})
                let trace = |z: &SparseVec| -> Scalar {
                    let mut t = f.zero();
                    for k in 0..n {
                        let col = self.mul(0, z, 0, &unit(k)).unwrap();
                        if let Some((_, c)) = col.iter().find(|(i, _)| *i == k) {
                            t += c;
                        }
                    }
                    t
                };
                let cols: Vec<SparseVec> = (0..n)
                    .map(|i| {
                        linalg::from_pairs((0..n).map(|j| (j, trace(&self.mul(0, &unit(i), 0, &unit(j)).unwrap()))))
                    })
                    .collect();
                linalg::kernel_and_image(f, &cols).0
            }
        }
    }

    /// Whether every ordered `k`-fold product of `block` lies in `ideal`.
    fn block_products_vanish(&self, d: usize, block: &[usize], k: usize, ideal: &[Echelon]) -> bool {
        if block.len().checked_pow(k as u32).is_none_or(|n| n > BLOCK_PRODUCT_LIMIT) {
            return false;
        }
        let mut prods: Vec<SparseVec> = block.iter().map(|&i| linalg::unit(self.field, i)).collect();
        for m in 1..k {
            let mut next = Vec::with_capacity(prods.len() * block.len());
            for p in &prods {
                for &i in block {
                    next.push(self.mul(m * d, p, d, &linalg::unit(self.field, i)).unwrap());
                }
            }
            prods = next;
        }
        prods.iter().all(|v| ideal[k * d].contains(v))
    }

    /// Certifies nilpotent elements and reports the ideal they generate.
    pub fn certify_nilpotence(&self) -> NilpotenceReport {
        self.certify_nilpotence_with(None)
    }

    /// As [`certify_nilpotence`](Self::certify_nilpotence), also trying powers
    /// beyond the truncation through `oracle`.
    pub fn certify_nilpotence_with(&self, oracle: Option<&dyn PowerOracle>) -> NilpotenceReport {
        let n = self.max_degree;
        let f = self.field;
        let mut gens: Vec<Vec<SparseVec>> = vec![Vec::new(); n + 1];
        gens[0] = self.degree_zero_nilradical();
        let mut ideal = self.ideal_closure(&gens);
        loop {
            let mut grew = false;
            for d in 1..=n {
                let k_max = n / d;
                for block in self.blocks(d) {
                    let units: Vec<SparseVec> = block.iter().map(|&i| linalg::unit(f, i)).collect();
                    if units.iter().all(|u| ideal[d].contains(u)) {
                        continue;
                    }
                    let mut found: Vec<SparseVec> = Vec::new();
                    if self.graded_commutative && f.characteristic() != 2 && d % 2 == 1 {
                        // odd elements square to zero by graded commutativity
                        found.extend(units.iter().cloned());
                    } else if (2..=k_max).any(|k| self.block_products_vanish(d, &block, k, &ideal)) {
                        found.extend(units.iter().cloned());
                    } else {
                        if let Field::Prime(p) = f {
                            if self.graded_commutative && (p == 2 || d % 2 == 0) {
                                found.extend(self.frobenius_kernel(d, &block, p as usize, &ideal));
                            }
                        }
                        for u in &units {
                            if (2..=k_max).any(|k| ideal[k * d].contains(&self.pow(d, u, k).unwrap())) {
                                found.push(u.clone());
                            }
                        }
                        if let Some(oracle) = oracle {
                            let mut known = Echelon::new(f);
                            for v in ideal[d].basis().chain(found.iter()) {
                                known.insert_untagged(v);
                            }
                            if units.iter().any(|u| !known.contains(u)) {
                                found.extend(self.beyond_truncation(d, &block, oracle));
                            }
                        }
                    }
                    for v in found {
                        if !ideal[d].contains(&v) {
                            gens[d].push(v);
                            grew = true;
                        }
                    }
                }
                if grew {
                    break;
                }
            }
            if !grew {
                break;
            }
            ideal = self.ideal_closure(&gens);
        }

        let reach = oracle.map_or(n, |o| o.max_degree().max(n));
        let labels = (0..=n)
            .map(|d| {
                (0..self.dim(d))
                    .map(|i| {
                        if ideal[d].contains(&linalg::unit(f, i)) {
                            NilLabel::Nilpotent
                        } else if d == 0 || reach / d >= 2 {
                            NilLabel::NotNilpotentUpToN
                        } else {
                            NilLabel::Undetermined
                        }
                    })
                    .collect()
            })
            .collect();
        let ideal_dims: Vec<usize> = ideal.iter().map(Echelon::rank).collect();
        let quotient_dims = (0..=n).map(|d| self.dim(d) - ideal_dims[d]).collect();
        NilpotenceReport { max_degree: n, labels, ideal_dims, quotient_dims, ideal }
    }

    /// Nilpotents of a block certified by exact powers past degree `N`: the
    /// kernel of a linear Frobenius power where available, otherwise
    /// individual basis elements with vanishing square.
    fn beyond_truncation(&self, d: usize, block: &[usize], oracle: &dyn PowerOracle) -> Vec<SparseVec> {
        let f = self.field;
        let frobenius = match f {
            Field::Prime(p) if self.graded_commutative && (p == 2 || d.is_multiple_of(2)) => Some(p as usize),
            _ => None,
        };
        let squares = |skip: &Echelon| -> Vec<SparseVec> {
            block
                .iter()
                .map(|&i| linalg::unit(f, i))
                .filter(|u| !skip.contains(u))
                .filter(|u| {
                    2 * d <= oracle.max_degree() && oracle.power_residual(d, u, 2).is_some_and(|r| r.is_empty())
                })
                .collect()
        };
        match frobenius {
            Some(p) => {
                let mut q = p;
                let mut best = Vec::new();
                while q * d <= oracle.max_degree() {
                    let cols: Option<Vec<SparseVec>> =
                        block.iter().map(|&i| oracle.power_residual(d, &linalg::unit(f, i), q)).collect();
                    let Some(cols) = cols else { break };
                    let (kernel, _) = linalg::kernel_and_image(f, &cols);
                    let full = kernel.len() == block.len();
                    best = kernel;
                    if full {
                        break;
                    }
                    q *= p;
                }
                let mut out: Vec<SparseVec> =
                    best.into_iter().map(|v| linalg::from_pairs(v.into_iter().map(|(j, c)| (block[j], c)))).collect();
                if out.len() < block.len() && p > 2 {
                    let mut known = Echelon::new(f);
                    for v in &out {
                        known.insert_untagged(v);
                    }
                    out.extend(squares(&known));
                }
                out
            }
            None => squares(&Echelon::new(f)),
        }
    }

    /// Vectors of the block killed by the largest linear Frobenius power
    /// `x ↦ x^(p^j)` that stays inside the truncation.
    fn frobenius_kernel(&self, d: usize, block: &[usize], p: usize, ideal: &[Echelon]) -> Vec<SparseVec> {
        let f = self.field;
        let mut q = p;
        if q * d > self.max_degree {
            return Vec::new();
        }
        while q * p * d <= self.max_degree {
            q *= p;
        }
        let target = &ideal[q * d];
        let cols: Vec<SparseVec> = block
            .iter()
            .map(|&i| {
                let mut x = linalg::unit(f, i);
                let mut deg = d;
                let mut e = 1;
                while e < q {
                    x = self.pow(deg, &x, p).unwrap();
                    deg *= p;
                    e *= p;
                }
                target.reduce(&x).residual
            })
            .collect();
        let (kernel, _) = linalg::kernel_and_image(f, &cols);
        kernel.into_iter().map(|v| linalg::from_pairs(v.into_iter().map(|(j, c)| (block[j], c)))).collect()
    }
}

#[derive(Clone, Debug)]
pub struct NilpotenceReport {
    pub max_degree: usize,
    /// Label of every basis element, per degree.
    pub labels: Vec<Vec<NilLabel>>,
    /// Dimension of the ideal generated by certified nilpotents, per degree.
    pub ideal_dims: Vec<usize>,
    /// `dim R_d − dim I_d`: an upper bound for the quotient by all nilpotents.
    pub quotient_dims: Vec<usize>,
    ideal: Vec<Echelon>,
}

impl NilpotenceReport {
    pub fn ideal(&self, d: usize) -> &Echelon {
        &self.ideal[d]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeReport {
    pub max_degree: usize,
    /// Dimension of degree `d` of the quotient modulo products of elements of
    /// positive lower degree (the unit is not counted in degree 0).
    pub new_generators: Vec<usize>,
}

/// New algebra generators needed in each degree of `R / I`.
pub fn finite_generation_probe(ring: &GradedRingTruncation, nil: &NilpotenceReport) -> ProbeReport {
    let n = ring.max_degree();
    let mut new_generators = vec![nil.quotient_dims[0].saturating_sub(1)];
    for d in 1..=n {
        let mut span = nil.ideal[d].clone();
        for e in 1..d {
            for i in 0..ring.dim(e) {
                for j in 0..ring.dim(d - e) {
                    span.insert_untagged(ring.mul_basis(e, i, d - e, j));
                }
            }
        }
        new_generators.push(ring.dim(d) - span.rank());
    }
    ProbeReport { max_degree: n, new_generators }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `K[x, y]/(y²)` with `x` in degree `dx` and `y` in degree `dy`, monomials
    /// `x^i y^j` as basis, truncated at `n`.
    fn poly(field: Field, n: usize, dx: usize, dy: usize) -> GradedRingTruncation {
        let mut mons: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n + 1];
        for i in 0..=n {
            for j in 0..2 {
                let d = i * dx + j * dy;
                if d <= n && (dx > 0 || i == 0) {
                    mons[d].push((i, j));
                }
            }
        }
        let labels = mons.iter().map(|m| m.iter().map(|(i, j)| format!("x^{i}y^{j}")).collect()).collect();
        let weights = mons.iter().map(|m| m.iter().map(|(i, j)| vec![*i as i32, *j as i32]).collect()).collect();
        let m2 = mons.clone();
        GradedRingTruncation::new(field, n, true, labels, weights, move |d, i, e, j| {
            let (a, b) = (m2[d][i], m2[e][j]);
            let prod = (a.0 + b.0, a.1 + b.1);
            Ok(match m2[d + e].iter().position(|m| *m == prod) {
                Some(k) if prod.1 < 2 => vec![(k, field.one())],
                _ => Vec::new(),
            })
        })
        .unwrap()
    }

    #[test]
    fn polynomial_ring_has_no_nilpotents() {
        let r = poly(Field::Prime(2), 6, 1, 7);
        let nil = r.certify_nilpotence();
        assert_eq!(nil.quotient_dims, vec![1; 7]);
        let probe = finite_generation_probe(&r, &nil);
        assert_eq!(probe.new_generators, vec![0, 1, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn square_zero_class_is_nilpotent() {
        for f in [Field::Prime(2), Field::Prime(3), Field::Rational] {
            let r = poly(f, 6, 2, 2);
            let nil = r.certify_nilpotence();
            assert_eq!(nil.quotient_dims, vec![1, 0, 1, 0, 1, 0, 1], "{f}");
            assert_eq!(nil.labels[2], vec![NilLabel::Nilpotent, NilLabel::NotNilpotentUpToN]);
            assert_eq!(nil.labels[6], vec![NilLabel::Nilpotent, NilLabel::Undetermined]);
        }
    }

    #[test]
    fn trivial_ring() {
        let f = Field::Rational;
        let labels = (0..=6).map(|d| if d == 0 { vec!["1".to_string()] } else { Vec::new() }).collect();
        let weights = (0..=6).map(|d| if d == 0 { vec![vec![]] } else { Vec::new() }).collect();
        let r =
            GradedRingTruncation::new(f, 6, true, labels, weights, |_, _, _, _| Ok(vec![(0, Field::Rational.one())]))
                .unwrap();
        let nil = r.certify_nilpotence();
        assert_eq!(finite_generation_probe(&r, &nil).new_generators, vec![0; 7]);
    }
}
