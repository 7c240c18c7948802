//! Hochschild cohomology of a finite-dimensional `KQ/I` through the reduced
//! bar complex relative to the vertex idempotents.
//!
//! Degree-`n` cochains are indexed by pairs (composable `n`-tuple of radical
//! basis paths, basis path parallel to the tuple). The coboundary preserves
//! the weight `Σ weight(xᵢ) − weight(value)`, so every computation splits into
//! small weight blocks.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::Algebra;
use crate::element::AlgebraElement;
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::linalg::{self, Echelon, SparseVec};
use crate::quiver::VertexIdx;
use std::sync::{Arc, Mutex};

use crate::ring::{GradedRingTruncation, NilpotenceReport, PowerOracle};

/// Default cap on the number of cochain coordinates in one degree.
pub const DEFAULT_BUDGET: usize = 2_000_000;

/// Composable tuples of one degree and the cochain coordinates over them.
#[derive(Clone, Debug)]
pub struct BarBasis {
    pub degree: usize,
    /// Radical basis indices; empty tuples in degree 0, one per vertex.
    pub tuples: Vec<Vec<usize>>,
    ends: Vec<(VertexIdx, VertexIdx)>,
    tuple_index: HashMap<Vec<usize>, usize>,
    /// `(tuple, value basis index)`.
    coords: Vec<(usize, usize)>,
    coord_index: HashMap<(usize, usize), usize>,
    /// Weight → coordinates, in coordinate order.
    blocks: BTreeMap<Vec<i32>, Vec<usize>>,
    coord_weight: Vec<Vec<i32>>,
}

impl BarBasis {
    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coord(&self, i: usize) -> (usize, usize) {
        self.coords[i]
    }

    pub fn weight(&self, i: usize) -> &[i32] {
        &self.coord_weight[i]
    }

    pub fn blocks(&self) -> impl Iterator<Item = (&Vec<i32>, &Vec<usize>)> {
        self.blocks.iter()
    }
}

/// A cochain in coordinates of [`BarBasis`].
#[derive(Clone, Debug, PartialEq)]
pub struct Cochain {
    pub degree: usize,
    pub coords: SparseVec,
}

#[derive(Clone, Debug)]
pub struct BarComplex {
    alg: Algebra,
    radical: Vec<usize>,
    /// For each basis index `z`: radical pairs `(p, q)` with `z` in `pq`, and
    /// the coefficient.
    factor: Vec<Vec<(usize, usize, Scalar)>>,
    starting_at: Vec<Vec<usize>>,
    ending_at: Vec<Vec<usize>>,
    degrees: Vec<BarBasis>,
    budget: usize,
}

impl BarComplex {
    pub fn new(alg: &Algebra) -> Result<BarComplex> {
        BarComplex::with_budget(alg, DEFAULT_BUDGET)
    }

    pub fn with_budget(alg: &Algebra, budget: usize) -> Result<BarComplex> {
        if !alg.is_finite() {
            return Err(Error::Unsupported("the bar complex needs a finite-dimensional algebra".into()));
        }
        let radical: Vec<usize> = alg.radical().collect();
        let mut factor = vec![Vec::new(); alg.dim()];
        for &p in &radical {
            for &q in &radical {
                for (z, c) in alg.mul_basis(p, q)? {
                    factor[*z].push((p, q, c.clone()));
                }
            }
        }
        let nv = alg.quiver().num_vertices();
        let mut starting_at = vec![Vec::new(); nv];
        let mut ending_at = vec![Vec::new(); nv];
        for &x in &radical {
            starting_at[alg.origin(x) as usize].push(x);
            ending_at[alg.tail(x) as usize].push(x);
        }
        let mut cx =
            BarComplex { alg: alg.clone(), radical, factor, starting_at, ending_at, degrees: Vec::new(), budget };
        cx.ensure_degree(0)?;
        Ok(cx)
    }

    pub fn algebra(&self) -> &Algebra {
        &self.alg
    }

    pub fn field(&self) -> Field {
        self.alg.field()
    }

    pub fn basis(&self, n: usize) -> &BarBasis {
        &self.degrees[n]
    }

    /// Builds tuple and coordinate lists through degree `n`.
    pub fn ensure_degree(&mut self, n: usize) -> Result<()> {
        while self.degrees.len() <= n {
            let d = self.degrees.len();
            let tuples: Vec<Vec<usize>> = if d == 0 {
                vec![Vec::new(); self.alg.quiver().num_vertices()]
            } else if d == 1 {
                self.radical.iter().map(|&x| vec![x]).collect()
            } else {
                let mut out = Vec::new();
                for t in &self.degrees[d - 1].tuples {
                    let last = *t.last().unwrap();
                    for &x in &self.starting_at[self.alg.tail(last) as usize] {
                        let mut u = t.clone();
                        u.push(x);
                        out.push(u);
                    }
                }
                out
            };
            let ends: Vec<(VertexIdx, VertexIdx)> = tuples
                .iter()
                .enumerate()
                .map(|(i, t)| match (t.first(), t.last()) {
                    (Some(&f), Some(&l)) => (self.alg.origin(f), self.alg.tail(l)),
                    _ => (i as VertexIdx, i as VertexIdx),
                })
                .collect();
            let wl = self.alg.weight_len();
            let mut coords = Vec::new();
            let mut coord_weight = Vec::new();
            let mut between: HashMap<(VertexIdx, VertexIdx), Vec<usize>> = HashMap::new();
            for (ti, t) in tuples.iter().enumerate() {
                let (o, e) = ends[ti];
                let vals = between.entry((o, e)).or_insert_with(|| self.alg.between(o, e));
                let mut tw = vec![0i32; wl];
                for &x in t {
                    for (k, w) in self.alg.weight(x).iter().enumerate() {
                        tw[k] += w;
                    }
                }
                for &v in vals.iter() {
                    coords.push((ti, v));
                    coord_weight.push(tw.iter().zip(self.alg.weight(v)).map(|(a, b)| a - b).collect::<Vec<i32>>());
                }
                if coords.len() > self.budget {
                    return Err(Error::Budget(format!(
                        "bar complex degree {d} exceeds {} cochain coordinates",
                        self.budget
                    )));
                }
            }
            let tuple_index = tuples.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
            let coord_index = coords.iter().enumerate().map(|(i, c)| (*c, i)).collect();
            let mut blocks: BTreeMap<Vec<i32>, Vec<usize>> = BTreeMap::new();
            for (i, w) in coord_weight.iter().enumerate() {
                blocks.entry(w.clone()).or_default().push(i);
            }
            self.degrees.push(BarBasis {
                degree: d,
                tuples,
                ends,
                tuple_index,
                coords,
                coord_index,
                blocks,
                coord_weight,
            });
        }
        Ok(())
    }

    /// `δ` of the cochain supported on coordinate `i` of degree `n`, in
    /// degree-`n+1` coordinates. Requires degree `n + 1` to be built.
    pub fn column(&self, n: usize, i: usize) -> SparseVec {
        let src = &self.degrees[n];
        let dst = &self.degrees[n + 1];
        let (ti, w) = src.coords[i];
        let mut acc: Vec<(usize, Scalar)> = Vec::new();
        self.emit_coboundary(&src.tuples[ti], src.ends[ti], w, &mut |tuple, vals, c| {
            let tj = dst.tuple_index[tuple];
            for (k, x) in vals {
                acc.push((dst.coord_index[&(tj, *k)], c * x));
            }
        });
        linalg::from_pairs(acc)
    }

    /// Feeds `(tuple, values, coefficient)` terms of `δ` applied to the cochain
    /// sending the tuple `t` (with endpoints `ends`) to basis path `w`.
    fn emit_coboundary(
        &self,
        t: &[usize],
        (o, e): (VertexIdx, VertexIdx),
        w: usize,
        push: &mut dyn FnMut(&[usize], &SparseVec, &Scalar),
    ) {
        let f = self.field();
        let n = t.len();
        let unit_w = linalg::unit(f, w);
        // x·f(y₁ … yₙ)
        for &x in &self.ending_at[o as usize] {
            let mut u = Vec::with_capacity(n + 1);
            u.push(x);
            u.extend_from_slice(t);
            let v = self.alg.mul(&linalg::unit(f, x), &unit_w).unwrap();
            push(&u, &v, &f.one());
        }
        // (−1)^{n+1} f(y₁ … yₙ)·x
        let sign = f.sign(n + 1);
        for &x in &self.starting_at[e as usize] {
            let mut u = t.to_vec();
            u.push(x);
            let v = self.alg.mul(&unit_w, &linalg::unit(f, x)).unwrap();
            push(&u, &v, &sign);
        }
        // (−1)^i f(… xᵢxᵢ₊₁ …), expanded over the radical basis
        for pos in 0..n {
            let sign = f.sign(pos + 1);
            for (p, q, c) in &self.factor[t[pos]] {
                let mut u = Vec::with_capacity(n + 1);
                u.extend_from_slice(&t[..pos]);
                u.push(*p);
                u.push(*q);
                u.extend_from_slice(&t[pos + 1..]);
                push(&u, &unit_w, &(&sign * c));
            }
        }
    }

    /// The Hochschild coboundary.
    pub fn differential(&mut self, f: &Cochain) -> Result<Cochain> {
        self.ensure_degree(f.degree + 1)?;
        let mut acc = Vec::new();
        for (i, c) in &f.coords {
            acc.extend(self.column(f.degree, *i).into_iter().map(|(j, x)| (j, c * &x)));
        }
        Ok(Cochain { degree: f.degree + 1, coords: linalg::from_pairs(acc) })
    }

    /// Cup product `(f⌣g)(x₁ … x_{m+n}) = f(x₁ … x_m)·g(x_{m+1} … x_{m+n})`.
    pub fn cup(&mut self, f: &Cochain, g: &Cochain) -> Result<Cochain> {
        self.ensure_degree(f.degree + g.degree)?;
        self.cup_built(f, g)
    }

    fn cup_built(&self, f: &Cochain, g: &Cochain) -> Result<Cochain> {
        let (m, n) = (f.degree, g.degree);
        let (bf, bg, bh) = (&self.degrees[m], &self.degrees[n], &self.degrees[m + n]);
        let mut acc = Vec::new();
        for (i, a) in &f.coords {
            let (ti, wi) = bf.coords[*i];
            let end = bf.ends[ti].1;
            for (j, b) in &g.coords {
                let (tj, wj) = bg.coords[*j];
                if bg.ends[tj].0 != end {
                    continue;
                }
                let prod = self.alg.mul_basis(wi, wj)?;
                if prod.is_empty() {
                    continue;
                }
                let th = match (m, n) {
                    (0, _) => tj,
                    (_, 0) => ti,
                    _ => {
                        let mut u = bf.tuples[ti].clone();
                        u.extend_from_slice(&bg.tuples[tj]);
                        bh.tuple_index[&u]
                    }
                };
                let ab = a * b;
                for (k, c) in prod {
                    acc.push((bh.coord_index[&(th, *k)], &ab * c));
                }
            }
        }
        Ok(Cochain { degree: m + n, coords: linalg::from_pairs(acc) })
    }

    /// Kernel basis and image echelon of `δⁿ` on one weight block.
    fn block_kernel_image(&self, n: usize, block: &[usize]) -> (Vec<SparseVec>, Echelon) {
        let cols: Vec<SparseVec> = block.iter().map(|&i| self.column(n, i)).collect();
        let (kernel, image) = linalg::kernel_and_image(self.field(), &cols);
        let kernel =
            kernel.into_iter().map(|v| linalg::from_pairs(v.into_iter().map(|(j, c)| (block[j], c)))).collect();
        (kernel, image)
    }

    /// `dim HHⁿ` for `n = 0 ..= max_degree`.
    pub fn hh_dims(&mut self, max_degree: usize) -> Result<Vec<usize>> {
        self.ensure_degree(max_degree + 1)?;
        let ranks: Vec<BTreeMap<Vec<i32>, (usize, usize)>> = (0..=max_degree)
            .map(|n| {
                let blocks: Vec<(&Vec<i32>, &Vec<usize>)> = self.degrees[n].blocks.iter().collect();
                blocks
                    .par_iter()
                    .map(|(w, b)| {
                        let cols: Vec<SparseVec> = b.iter().map(|&i| self.column(n, i)).collect();
                        ((*w).clone(), (b.len(), linalg::rank(self.field(), &cols)))
                    })
                    .collect()
            })
            .collect();
        Ok((0..=max_degree)
            .map(|n| {
                ranks[n]
                    .iter()
                    .map(|(w, (dim, rank))| {
                        let below = if n == 0 { 0 } else { ranks[n - 1].get(w).map_or(0, |r| r.1) };
                        dim - rank - below
                    })
                    .sum()
            })
            .collect())
    }

    /// Representative cocycles for a basis of `HHⁿ`, block by block.
    pub fn class_basis(&mut self, n: usize) -> Result<CohomologyClassBasis> {
        self.ensure_degree(n + 1)?;
        let f = self.field();
        let blocks: Vec<(Vec<i32>, Vec<usize>)> =
            self.degrees[n].blocks.iter().map(|(w, b)| (w.clone(), b.clone())).collect();
        let per_block: Vec<(Vec<i32>, Vec<SparseVec>, Vec<SparseVec>)> = blocks
            .par_iter()
            .map(|(w, b)| {
                let (kernel, _) = self.block_kernel_image(n, b);
                let boundaries: Vec<SparseVec> = match (n, self.degrees.get(n.wrapping_sub(1))) {
                    (0, _) | (_, None) => Vec::new(),
                    (_, Some(prev)) => match prev.blocks.get(w) {
                        Some(pb) => self.block_kernel_image(n - 1, pb).1.basis().cloned().collect(),
                        None => Vec::new(),
                    },
                };
                (w.clone(), kernel, boundaries)
            })
            .collect();
        let mut echelon = Echelon::new(f);
        let mut representatives = Vec::new();
        let mut weights = Vec::new();
        let mut boundary_rank = 0;
        for (_, _, boundaries) in &per_block {
            for v in boundaries {
                if echelon.insert(v, &Vec::new()).is_ok() {
                    boundary_rank += 1;
                }
            }
        }
        for (w, kernel, _) in &per_block {
            for z in kernel {
                let tag = linalg::unit(f, representatives.len());
                if echelon.insert(z, &tag).is_ok() {
                    representatives.push(Cochain { degree: n, coords: z.clone() });
                    weights.push(w.clone());
                }
            }
        }
        Ok(CohomologyClassBasis { degree: n, representatives, weights, boundary_rank, echelon })
    }

    /// `dim HH⁰`, `dim HH¹`, … with classes, products and nilpotence data up
    /// to degree `max_degree`.
    pub fn ring_truncation(&mut self, max_degree: usize) -> Result<HochschildRing> {
        let classes: Vec<CohomologyClassBasis> =
            (0..=max_degree).map(|n| self.class_basis(n)).collect::<Result<_>>()?;
        self.ensure_degree(max_degree + 1)?;
        let labels = classes
            .iter()
            .map(|c| (0..c.representatives.len()).map(|i| format!("h{}_{}", c.degree, i)).collect())
            .collect();
        let weights = classes.iter().map(|c| c.weights.clone()).collect();
        let this = &*self;
        let ring = GradedRingTruncation::new(self.field(), max_degree, true, labels, weights, |d, i, e, j| {
            let prod = this.cup_built(&classes[d].representatives[i], &classes[e].representatives[j])?;
            classes[d + e].coordinates(&prod)
        })?;
        Ok(HochschildRing { classes, ring })
    }
}

/// A cochain written out as `(tuple, value basis index) → coefficient`.
type Explicit = HashMap<(Vec<usize>, usize), Scalar>;

impl BarComplex {
    fn explicit(&self, c: &Cochain) -> Explicit {
        let b = &self.degrees[c.degree];
        c.coords
            .iter()
            .map(|(i, x)| {
                let (t, v) = b.coords[*i];
                ((b.tuples[t].clone(), v), x.clone())
            })
            .collect()
    }

    fn cup_explicit(&self, f: &Explicit, g: &Explicit) -> Explicit {
        let mut out: Explicit = HashMap::new();
        for ((t1, v1), a) in f {
            for ((t2, v2), b) in g {
                let prod = self.alg.mul_basis(*v1, *v2).expect("finite algebra");
                if prod.is_empty() {
                    continue;
                }
                let mut t = t1.clone();
                t.extend_from_slice(t2);
                let ab = a * b;
                for (z, c) in prod {
                    let e = out.entry((t.clone(), *z)).or_insert_with(|| self.field().zero());
                    *e += &(&ab * c);
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// Cochain coordinates of degree `n` and weight `w`, enumerated directly
    /// (without building the whole degree). `None` past the budget.
    fn weight_coords(&self, n: usize, w: &[i32]) -> Option<Vec<(Vec<usize>, usize)>> {
        let mut out = Vec::new();
        for v in 0..self.alg.dim() {
            let target: Vec<i32> = w.iter().zip(self.alg.weight(v)).map(|(a, b)| a + b).collect();
            if target.iter().any(|&x| x < 0) {
                continue;
            }
            let (o, e) = (self.alg.origin(v), self.alg.tail(v));
            if n == 0 {
                if o == e && target.iter().all(|&x| x == 0) {
                    out.push((Vec::new(), v));
                }
                continue;
            }
            let mut stack = Vec::new();
            self.weight_tuples(n, o, e, &target, &mut stack, &mut |t| out.push((t.to_vec(), v)));
            if out.len() > self.budget {
                return None;
            }
        }
        Some(out)
    }

    fn weight_tuples(
        &self,
        left: usize,
        at: VertexIdx,
        end: VertexIdx,
        rest: &[i32],
        stack: &mut Vec<usize>,
        found: &mut dyn FnMut(&[usize]),
    ) {
        if left == 0 {
            if at == end && rest.iter().all(|&x| x == 0) {
                found(stack);
            }
            return;
        }
        if (rest.iter().sum::<i32>() as usize) < left {
            return;
        }
        for &x in &self.starting_at[at as usize] {
            let r: Vec<i32> = rest.iter().zip(self.alg.weight(x)).map(|(a, b)| a - b).collect();
            if r.iter().any(|&y| y < 0) {
                continue;
            }
            stack.push(x);
            self.weight_tuples(left - 1, self.alg.tail(x), end, &r, stack, found);
            stack.pop();
        }
    }

    /// Coboundaries of degree `n` and weight `w`, with the coordinate index.
    fn boundary_slice(&self, n: usize, w: &[i32]) -> Option<BoundarySlice> {
        let coords = self.weight_coords(n, w)?;
        let index: HashMap<(Vec<usize>, usize), usize> = coords.into_iter().enumerate().map(|(i, c)| (c, i)).collect();
        let mut echelon = Echelon::new(self.field());
        if n > 0 {
            for (t, v) in self.weight_coords(n - 1, w)? {
                let ends = match (t.first(), t.last()) {
                    (Some(&a), Some(&b)) => (self.alg.origin(a), self.alg.tail(b)),
                    _ => (self.alg.origin(v), self.alg.origin(v)),
                };
                let mut acc = Vec::new();
                self.emit_coboundary(&t, ends, v, &mut |tuple, vals, c| {
                    for (k, x) in vals {
                        acc.push((index[&(tuple.to_vec(), *k)], c * x));
                    }
                });
                echelon.insert_untagged(&linalg::from_pairs(acc));
            }
        }
        Some(BoundarySlice { index, echelon })
    }
}

struct BoundarySlice {
    index: HashMap<(Vec<usize>, usize), usize>,
    echelon: Echelon,
}

/// Exact powers of classes in degrees past the truncation, computed inside
/// single weight blocks of the bar complex.
pub struct HigherPowers<'a> {
    cx: &'a BarComplex,
    classes: &'a [CohomologyClassBasis],
    max_degree: usize,
    cache: Mutex<HashMap<(usize, Vec<i32>), Option<Arc<BoundarySlice>>>>,
}

impl<'a> HigherPowers<'a> {
    pub fn new(cx: &'a BarComplex, classes: &'a [CohomologyClassBasis], max_degree: usize) -> Self {
        HigherPowers { cx, classes, max_degree, cache: Mutex::new(HashMap::new()) }
    }

    fn slice(&self, n: usize, w: &[i32]) -> Option<Arc<BoundarySlice>> {
        let key = (n, w.to_vec());
        if let Some(s) = self.cache.lock().unwrap().get(&key) {
            return s.clone();
        }
        let s = self.cx.boundary_slice(n, w).map(Arc::new);
        self.cache.lock().unwrap().insert(key, s.clone());
        s
    }
}

impl PowerOracle for HigherPowers<'_> {
    fn power_residual(&self, d: usize, x: &SparseVec, k: usize) -> Option<SparseVec> {
        let cls = &self.classes[d];
        let w = &cls.weights[x.first()?.0];
        if x.iter().any(|(i, _)| &cls.weights[*i] != w) || k * d > self.max_degree {
            return None;
        }
        let mut coords = Vec::new();
        for (i, c) in x {
            coords.extend(cls.representatives[*i].coords.iter().map(|(j, y)| (*j, c * y)));
        }
        let base = self.cx.explicit(&Cochain { degree: d, coords: linalg::from_pairs(coords) });
        let mut acc = base.clone();
        for _ in 1..k {
            acc = self.cx.cup_explicit(&acc, &base);
        }
        let kw: Vec<i32> = w.iter().map(|a| a * k as i32).collect();
        let slice = self.slice(k * d, &kw)?;
        let v = linalg::from_pairs(acc.into_iter().map(|(key, c)| (slice.index[&key], c)));
        Some(slice.echelon.reduce(&v).residual)
    }

    fn max_degree(&self) -> usize {
        self.max_degree
    }
}

#[derive(Clone, Debug)]
pub struct CohomologyClassBasis {
    pub degree: usize,
    pub representatives: Vec<Cochain>,
    /// Weight of each representative.
    pub weights: Vec<Vec<i32>>,
    pub boundary_rank: usize,
    /// Coboundaries (untagged) and representatives (tagged by index).
    echelon: Echelon,
}

impl CohomologyClassBasis {
    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    /// Coordinates of the class of a cocycle in the representative basis.
    pub fn coordinates(&self, z: &Cochain) -> Result<SparseVec> {
        let red = self.echelon.reduce(&z.coords);
        if !red.residual.is_empty() {
            return Err(Error::Unsupported(format!("degree-{} cochain is not a cocycle", self.degree)));
        }
        Ok(red.tag)
    }

    /// Whether a cocycle is a coboundary.
    pub fn is_coboundary(&self, z: &Cochain) -> Result<bool> {
        Ok(self.coordinates(z)?.is_empty())
    }
}

/// Classes, products and the truncated ring of `HH*`.
#[derive(Clone, Debug)]
pub struct HochschildRing {
    pub classes: Vec<CohomologyClassBasis>,
    pub ring: GradedRingTruncation,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CommutativityReport {
    pub pairs_checked: usize,
    /// `((m, i), (n, j))` whose graded commutator is not a coboundary.
    pub failures: Vec<((usize, usize), (usize, usize))>,
    pub odd_squares_checked: usize,
    /// Odd classes whose square is not a coboundary (characteristic ≠ 2).
    pub odd_square_failures: Vec<(usize, usize)>,
}

impl CommutativityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.odd_square_failures.is_empty()
    }
}

impl HochschildRing {
    /// Nilpotence certificates, using exact powers up to degree `reach` of
    /// the bar complex `cx` the ring was built from.
    pub fn certify_nilpotence(&self, cx: &BarComplex, reach: usize) -> NilpotenceReport {
        let oracle = HigherPowers::new(cx, &self.classes, reach);
        self.ring.certify_nilpotence_with(Some(&oracle))
    }

    /// `η⌣θ − (−1)^{mn} θ⌣η` on all basis pairs of total degree ≤ N, and odd
    /// squares in characteristic ≠ 2.
    pub fn check_graded_commutativity(&self) -> CommutativityReport {
        let r = &self.ring;
        let f = r.field();
        let mut rep = CommutativityReport::default();
        for m in 0..=r.max_degree() {
            for n in m..=r.max_degree() - m {
                for i in 0..r.dim(m) {
                    for j in 0..r.dim(n) {
                        if m == n && j < i {
                            continue;
                        }
                        rep.pairs_checked += 1;
                        let lhs = r.mul_basis(m, i, n, j);
                        let rhs = r.mul_basis(n, j, m, i);
                        if !linalg::axpy(lhs, &-f.sign(m * n), rhs).is_empty() {
                            rep.failures.push(((m, i), (n, j)));
                        }
                    }
                }
            }
        }
        if f.characteristic() != 2 {
            for m in (1..=r.max_degree() / 2).filter(|m| m % 2 == 1) {
                for i in 0..r.dim(m) {
                    rep.odd_squares_checked += 1;
                    if !r.mul_basis(m, i, m, i).is_empty() {
                        rep.odd_square_failures.push((m, i));
                    }
                }
            }
        }
        rep
    }
}

/// `dim HHⁿ(Λ)` for `n = 0 ..= max_degree` from the bar complex.
pub fn hh_dims(alg: &Algebra, max_degree: usize) -> Result<Vec<usize>> {
    BarComplex::new(alg)?.hh_dims(max_degree)
}

/// Basis of the centre: solves `zx = xz` for every arrow and every vertex
/// idempotent `x`.
pub fn centre(alg: &Algebra) -> Vec<SparseVec> {
    let f = alg.field();
    let q = alg.quiver();
    let mut gens: Vec<usize> = (0..q.num_vertices() as VertexIdx).map(|v| alg.vertex_index(v)).collect();
    gens.extend((0..q.num_arrows() as u32).map(|a| alg.index_of(&q.arrow_path(a)).expect("arrows are basis paths")));
    let d = alg.dim();
    let cols: Vec<SparseVec> = (0..d)
        .map(|i| {
            let z = linalg::unit(f, i);
            let mut acc = Vec::new();
            for (g, &x) in gens.iter().enumerate() {
                let x = linalg::unit(f, x);
                let comm = linalg::axpy(&alg.mul(&z, &x).unwrap(), &-f.one(), &alg.mul(&x, &z).unwrap());
                acc.extend(comm.into_iter().map(|(k, c)| (g * d + k, c)));
            }
            linalg::from_pairs(acc)
        })
        .collect();
    linalg::kernel_and_image(f, &cols).0
}

#[derive(Clone, Debug)]
pub struct DerivationData {
    /// Coordinates are indexed by `(arrow, basis index of o(α)Λt(α))`.
    pub unknowns: Vec<(u32, usize)>,
    /// Derivations vanishing on the vertex idempotents.
    pub derivations: Vec<SparseVec>,
    /// Spanning set of the inner ones, `[z, −]` for `z ∈ ⊕ eᵢΛeᵢ`, echelonised.
    pub inner: Vec<SparseVec>,
}

impl DerivationData {
    pub fn quotient_dim(&self) -> usize {
        self.derivations.len() - self.inner.len()
    }
}

/// Derivations modulo inner derivations, by two direct linear solves on the
/// values of a derivation on the arrows.
pub fn derivations_mod_inner(alg: &Algebra) -> Result<DerivationData> {
    let f = alg.field();
    let q = alg.quiver().clone();
    let mut unknowns = Vec::new();
    for a in 0..q.num_arrows() as u32 {
        let info = q.arrow_info(a);
        for k in alg.between(info.origin, info.tail) {
            unknowns.push((a, k));
        }
    }
    let pos: HashMap<(u32, usize), usize> = unknowns.iter().enumerate().map(|(i, u)| (*u, i)).collect();
    let d = alg.dim();
    let relations: Vec<AlgebraElement> = alg.system().relations().to_vec();
    let prefix = |arrows: &[u32]| -> Result<SparseVec> {
        if arrows.is_empty() {
            return Ok(Vec::new());
        }
        alg.to_vec(&AlgebraElement::from_path(f, q.path(arrows)?))
    };
    let cols: Vec<SparseVec> = unknowns
        .iter()
        .map(|&(a, k)| {
            let val = linalg::unit(f, k);
            let mut acc = Vec::new();
            for (ri, rel) in relations.iter().enumerate() {
                for (p, c) in rel.terms() {
                    let arrows = p.arrows();
                    for (j, &x) in arrows.iter().enumerate() {
                        if x != a {
                            continue;
                        }
                        let left = &arrows[..j];
                        let right = &arrows[j + 1..];
                        let mut v = val.clone();
                        if !left.is_empty() {
                            v = alg.mul(&prefix(left)?, &v)?;
                        }
                        if !right.is_empty() {
                            v = alg.mul(&v, &prefix(right)?)?;
                        }
                        acc.extend(v.into_iter().map(|(i, y)| (ri * d + i, c * &y)));
                    }
                }
            }
            Ok(linalg::from_pairs(acc))
        })
        .collect::<Result<_>>()?;
    let derivations = linalg::kernel_and_image(f, &cols).0;
    let mut inner = Echelon::new(f);
    for v in 0..q.num_vertices() as VertexIdx {
        for z in alg.between(v, v) {
            let zv = linalg::unit(f, z);
            let mut acc = Vec::new();
            for a in 0..q.num_arrows() as u32 {
                let x = linalg::unit(f, alg.index_of(&q.arrow_path(a)).unwrap());
                let comm = linalg::axpy(&alg.mul(&zv, &x)?, &-f.one(), &alg.mul(&x, &zv)?);
                acc.extend(comm.into_iter().map(|(k, c)| (pos[&(a, k)], c)));
            }
            inner.insert_untagged(&linalg::from_pairs(acc));
        }
    }
    Ok(DerivationData { unknowns, derivations, inner: inner.basis().cloned().collect() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation;

    fn loop_x2(f: Field) -> Algebra {
        presentation::truncated_loop(f, 2).finite_algebra().unwrap()
    }

    #[test]
    fn loop_dims_against_periodic_pattern() {
        assert_eq!(hh_dims(&loop_x2(Field::Prime(2)), 5).unwrap(), vec![2; 6]);
        assert_eq!(hh_dims(&loop_x2(Field::Prime(3)), 5).unwrap(), vec![2, 1, 1, 1, 1, 1]);
    }

    #[test]
    fn bgms_vanishes_above_two() {
        let f = Field::Rational;
        let alg = presentation::bgms(f, f.from_i64(2)).finite_algebra().unwrap();
        let dims = hh_dims(&alg, 6).unwrap();
        assert_eq!(&dims[3..], &[0, 0, 0, 0]);
        assert_eq!(dims[..3].iter().sum::<usize>(), 5);
    }

    #[test]
    fn delta_squared_vanishes() {
        let alg = presentation::xu(Field::Prime(3)).finite_algebra().unwrap();
        let mut cx = BarComplex::new(&alg).unwrap();
        cx.ensure_degree(4).unwrap();
        for n in 0..3 {
            for i in (0..cx.basis(n).len()).step_by(7) {
                let d1 = cx.differential(&Cochain { degree: n, coords: linalg::unit(alg.field(), i) }).unwrap();
                let d2 = cx.differential(&d1).unwrap();
                assert!(d2.coords.is_empty(), "degree {n}, coordinate {i}");
            }
        }
    }

    #[test]
    fn centre_and_derivations() {
        let f = Field::Prime(3);
        let xu = presentation::xu(f).finite_algebra().unwrap();
        assert_eq!(centre(&xu).len(), 3);
        let l2 = loop_x2(Field::Prime(2));
        let der = derivations_mod_inner(&l2).unwrap();
        assert_eq!((der.derivations.len(), der.inner.len()), (2, 0));
        assert_eq!(derivations_mod_inner(&loop_x2(f)).unwrap().quotient_dim(), 1);
        let q2 = presentation::bgms(Field::Rational, Field::Rational.from_i64(2)).finite_algebra().unwrap();
        let c = centre(&q2);
        assert_eq!(c.len(), 2);
    }

    #[test]
    fn loop_ring_modulo_nilpotents() {
        let mut cx = BarComplex::new(&loop_x2(Field::Prime(2))).unwrap();
        let hh = cx.ring_truncation(6).unwrap();
        assert!(hh.check_graded_commutativity().passed());
        let nil = hh.ring.certify_nilpotence();
        assert_eq!(nil.quotient_dims, vec![1; 7]);
        let probe = crate::ring::finite_generation_probe(&hh.ring, &nil);
        assert_eq!(probe.new_generators, vec![0, 1, 0, 0, 0, 0, 0]);

        let mut cx = BarComplex::new(&loop_x2(Field::Prime(3))).unwrap();
        let hh = cx.ring_truncation(6).unwrap();
        assert!(hh.check_graded_commutativity().passed());
        let nil = hh.ring.certify_nilpotence();
        assert_eq!(nil.quotient_dims, vec![1, 0, 1, 0, 1, 0, 1]);
        let probe = crate::ring::finite_generation_probe(&hh.ring, &nil);
        assert_eq!(probe.new_generators, vec![0, 0, 1, 0, 0, 0, 0]);
    }
}
