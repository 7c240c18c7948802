//! Exact sparse linear algebra: incremental row echelon forms with
//! bookkeeping tags, ranks and kernels.

use std::collections::{BTreeMap, HashMap};

use crate::field::{Field, Scalar};

/// Sparse vector: strictly increasing indices, no zero entries.
pub type SparseVec = Vec<(usize, Scalar)>;

pub fn unit(field: Field, i: usize) -> SparseVec {
    vec![(i, field.one())]
}

/// `a + c * b` for sparse vectors.
pub fn axpy(a: &SparseVec, c: &Scalar, b: &SparseVec) -> SparseVec {
    if c.is_zero() {
        return a.clone();
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, c * &b[j].1));
            j += 1;
        } else {
            let v = &a[i].1 + &(c * &b[j].1);
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn scale(v: &SparseVec, c: &Scalar) -> SparseVec {
    if c.is_zero() {
        return Vec::new();
    }
    v.iter().map(|(i, x)| (*i, x * c)).collect()
}

/// Collects `(index, value)` pairs, summing duplicates and dropping zeros.
pub fn from_pairs<I: IntoIterator<Item = (usize, Scalar)>>(pairs: I) -> SparseVec {
    let mut m: BTreeMap<usize, Scalar> = BTreeMap::new();
    for (i, v) in pairs {
        match m.get_mut(&i) {
            Some(x) => *x += &v,
            None => {
                m.insert(i, v);
            }
        }
    }
    m.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

pub fn to_dense(v: &SparseVec, field: Field, len: usize) -> Vec<Scalar> {
    let mut d = vec![field.zero(); len];
    for (i, x) in v {
        d[*i] = x.clone();
    }
    d
}

pub fn from_dense(d: &[Scalar]) -> SparseVec {
    d.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()
}

#[derive(Clone, Debug)]
struct Row {
    vec: SparseVec,
    tag: SparseVec,
}

/// Incrementally maintained echelon basis of a subspace. Each row carries a
/// tag vector recording how it was formed from the inserted vectors' tags.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: Field,
    rows: Vec<Row>,
    pivot: HashMap<usize, usize>,
}

/// Outcome of reducing a vector against an [`Echelon`].
#[derive(Clone, Debug)]
pub struct Reduction {
    /// What is left after eliminating every pivot column.
    pub residual: SparseVec,
    /// Tag combination of the rows used: `v - residual = Σ c_i row_i` and
    /// this is `Σ c_i tag_i`.
    pub tag: SparseVec,
}

impl Echelon {
    pub fn new(field: Field) -> Echelon {
        Echelon { field, rows: Vec::new(), pivot: HashMap::new() }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot.contains_key(&col)
    }

    pub fn reduce(&self, v: &SparseVec) -> Reduction {
        let mut w: BTreeMap<usize, Scalar> = v.iter().cloned().collect();
        let mut tag: SparseVec = Vec::new();
        let mut cursor = 0usize;
        loop {
            let next = w.range(cursor..).find(|(c, _)| self.pivot.contains_key(c)).map(|(c, x)| (*c, x.clone()));
            let Some((col, x)) = next else { break };
            let row = &self.rows[self.pivot[&col]];
            let neg = -&x;
            for (i, r) in &row.vec {
                let add = &neg * r;
                match w.get_mut(i) {
                    Some(e) => {
                        *e += &add;
                        if e.is_zero() {
                            w.remove(i);
                        }
                    }
                    None => {
                        w.insert(*i, add);
                    }
                }
            }
            tag = axpy(&tag, &x, &row.tag);
            cursor = col + 1;
        }
        Reduction { residual: w.into_iter().collect(), tag }
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).residual.is_empty()
    }

    /// Inserts `v` with bookkeeping tag `tag`. Returns `Ok(pivot column)` when
    /// the rank grows, or `Err(relation)` when `v` already lies in the span;
    /// the relation is the tag combination that vanishes, `tag - Σ c_i tag_i`.
    pub fn insert(&mut self, v: &SparseVec, tag: &SparseVec) -> Result<usize, SparseVec> {
        let red = self.reduce(v);
        let rel = axpy(tag, &-self.field.one(), &red.tag);
        if red.residual.is_empty() {
            return Err(rel);
        }
        let lead = red.residual[0].1.inv();
        let col = red.residual[0].0;
        let row = Row { vec: scale(&red.residual, &lead), tag: scale(&rel, &lead) };
        self.pivot.insert(col, self.rows.len());
        self.rows.push(row);
        Ok(col)
    }

    pub fn insert_untagged(&mut self, v: &SparseVec) -> bool {
        self.insert(v, &Vec::new()).is_ok()
    }

    /// The stored basis vectors (normalised, in insertion order).
    pub fn basis(&self) -> impl Iterator<Item = &SparseVec> {
        self.rows.iter().map(|r| &r.vec)
    }
}

/// Rank of the span of the given vectors.
pub fn rank<'a, I: IntoIterator<Item = &'a SparseVec>>(field: Field, vectors: I) -> usize {
    let mut e = Echelon::new(field);
    for v in vectors {
        e.insert_untagged(v);
    }
    e.rank()
}

/// Kernel and image of the linear map sending basis vector `j` to
/// `columns[j]`. The kernel basis is expressed in source coordinates.
pub fn kernel_and_image(field: Field, columns: &[SparseVec]) -> (Vec<SparseVec>, Echelon) {
    let mut image = Echelon::new(field);
    let mut kernel = Vec::new();
    for (j, col) in columns.iter().enumerate() {
        if let Err(rel) = image.insert(col, &unit(field, j)) {
            kernel.push(rel);
        }
    }
    (kernel, image)
}

/// Applies the map with the given columns to a source vector.
pub fn apply(columns: &[SparseVec], v: &SparseVec) -> SparseVec {
    let mut m: BTreeMap<usize, Scalar> = BTreeMap::new();
    for (j, c) in v {
        for (i, x) in &columns[*j] {
            let add = c * x;
            match m.get_mut(i) {
                Some(e) => *e += &add,
                None => {
                    m.insert(*i, add);
                }
            }
        }
    }
    m.into_iter().filter(|(_, x)| !x.is_zero()).collect()
}
