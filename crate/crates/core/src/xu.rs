//! The counterexample algebra `𝒜 = KQ/⟨a², b², ab − ba, ac⟩`: the signed
//! generator sets `gⁿ_r`, its explicit minimal projective bimodule resolution,
//! a mechanical verification of that resolution, and Hochschild cohomology
//! dimensions read off from it.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::Algebra;
use crate::element::{free_multiply, AlgebraElement};
use crate::error::Result;
use crate::field::{Field, Scalar};
use crate::linalg::{self, SparseVec};
use crate::presentation;
use crate::quiver::{ArrowIdx, Path, Quiver, VertexIdx};

const A: ArrowIdx = 0;
const B: ArrowIdx = 1;
const C: ArrowIdx = 2;
const V1: VertexIdx = 0;
const V2: VertexIdx = 1;

#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorElement {
    pub degree: usize,
    pub index: usize,
    /// Element of the free path algebra.
    pub value: AlgebraElement,
    pub origin: VertexIdx,
    pub tail: VertexIdx,
}

fn quiver() -> Quiver {
    (*presentation::xu(Field::Prime(2)).quiver).clone()
}

fn signed(field: Field, q: &Quiver, terms: &[(i64, &[ArrowIdx])]) -> AlgebraElement {
    AlgebraElement::from_terms(field, terms.iter().map(|(c, p)| (field.from_i64(*c), path_of(q, p))))
}

fn path_of(q: &Quiver, arrows: &[ArrowIdx]) -> Path {
    if arrows.is_empty() {
        Path::trivial(V1)
    } else {
        q.path(arrows).expect("path in the quiver of 𝒜")
    }
}

/// The generators `gⁿ_0 … gⁿ_{n+1}` of degree `n` (two vertices when `n = 0`).
pub fn g_sets(field: Field, n: usize) -> Vec<GeneratorElement> {
    let q = quiver();
    let gen = |index, value, origin, tail| GeneratorElement { degree: n, index, value, origin, tail };
    match n {
        0 => vec![
            gen(0, AlgebraElement::from_path(field, Path::trivial(V1)), V1, V1),
            gen(1, AlgebraElement::from_path(field, Path::trivial(V2)), V2, V2),
        ],
        1 => vec![
            gen(0, signed(field, &q, &[(1, &[A])]), V1, V1),
            gen(1, signed(field, &q, &[(-1, &[B])]), V1, V1),
            gen(2, signed(field, &q, &[(1, &[C])]), V1, V2),
        ],
        2 => vec![
            gen(0, signed(field, &q, &[(1, &[A, A])]), V1, V1),
            gen(1, signed(field, &q, &[(1, &[A, B]), (-1, &[B, A])]), V1, V1),
            gen(2, signed(field, &q, &[(-1, &[B, B])]), V1, V1),
            gen(3, signed(field, &q, &[(1, &[A, C])]), V1, V2),
        ],
        _ => {
            let mut out: Vec<GeneratorElement> =
                (0..=n).map(|r| gen(r, closed_form(field, &q, n, r), V1, V1)).collect();
            let mut top = vec![A; n - 1];
            top.push(C);
            out.push(gen(n + 1, AlgebraElement::from_path(field, path_of(&q, &top)), V1, V2));
            out
        }
    }
}

/// `Σ (−1)^s p` over the length-`n` words in `a, b` with `r` letters `b`,
/// where `s` is the sum of the (1-based) positions of the `b`s.
fn closed_form(field: Field, q: &Quiver, n: usize, r: usize) -> AlgebraElement {
    let mut out = AlgebraElement::zero(field);
    for mask in 0u64..(1 << n) {
        if mask.count_ones() as usize != r {
            continue;
        }
        let word: Vec<ArrowIdx> = (0..n).map(|j| if mask >> j & 1 == 1 { B } else { A }).collect();
        let s: usize = (0..n).filter(|j| mask >> j & 1 == 1).map(|j| j + 1).sum();
        out.add_term(&field.sign(s), path_of(q, &word));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecursionCheck {
    pub degree: usize,
    pub index: usize,
    pub identity: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecursionReport {
    pub max_degree: usize,
    pub checks: Vec<RecursionCheck>,
}

impl RecursionReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn first_failure(&self) -> Option<&RecursionCheck> {
        self.checks.iter().find(|c| !c.holds)
    }
}

/// Checks, in the free path algebra, that each `gⁿ_r` is obtained from
/// `gⁿ⁻¹` both by right and by left multiplication, for `2 ≤ n ≤ max_degree`.
pub fn check_g_recursions(field: Field, max_degree: usize) -> RecursionReport {
    let q = quiver();
    let arrow = |x| AlgebraElement::from_path(field, q.arrow_path(x));
    let (a, b, c) = (arrow(A), arrow(B), arrow(C));
    let mul = |x: &AlgebraElement, y: &AlgebraElement| free_multiply(x, y).unwrap();
    let sum = |x: AlgebraElement, s: Scalar, y: AlgebraElement| {
        let mut x = x;
        x.add_scaled(&s, &y);
        x
    };
    let mut checks = Vec::new();
    let mut prev = g_sets(field, 1);
    for n in 2..=max_degree {
        let cur = g_sets(field, n);
        let p = |r: usize| &prev[r].value;
        let sn = field.sign(n);
        for r in 0..=n + 1 {
            let (right, left) = if r == 0 {
                (mul(p(0), &a), mul(&a, p(0)))
            } else if r < n {
                (
                    sum(mul(p(r), &a), sn.clone(), mul(p(r - 1), &b)),
                    sum(mul(&a, p(r)), field.one(), mul(&b, p(r - 1))).scale(&field.sign(r)),
                )
            } else if r == n {
                (mul(p(n - 1), &b).scale(&sn), mul(&b, p(n - 1)).scale(&sn))
            } else {
                (mul(p(0), &c), mul(&a, p(n)))
            };
            let target = &cur[r].value;
            for (side, value) in [("right", right), ("left", left)] {
                checks.push(RecursionCheck {
                    degree: n,
                    index: r,
                    identity: format!("g[{n}][{r}] via {side} factors"),
                    holds: &value == target,
                });
            }
        }
        prev = cur;
    }
    RecursionReport { max_degree, checks }
}

/// `coef · left ⊗_target right`: a term in the summand `target` of the
/// previous projective, with `left`, `right` normal-form paths of `𝒜`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiffTerm {
    pub coef: Scalar,
    pub left: Path,
    pub target: usize,
    pub right: Path,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResolutionSlice {
    pub degree: usize,
    /// `(𝔬(gⁿ_r), 𝔱(gⁿ_r))` for each summand.
    pub summands: Vec<(VertexIdx, VertexIdx)>,
    /// `dⁿ` of each summand generator; empty in degree 0, where `d⁰` is the
    /// multiplication map.
    pub differential: Vec<Vec<DiffTerm>>,
}

/// The resolution `(P*, d*)` of `𝒜` up to some degree.
#[derive(Clone, Debug)]
pub struct XuResolution {
    algebra: Algebra,
    pub slices: Vec<ResolutionSlice>,
}

pub fn build_resolution(field: Field, max_degree: usize) -> Result<XuResolution> {
    let algebra = presentation::xu(field).finite_algebra()?;
    let q = algebra.quiver().clone();
    let e1 = Path::trivial(V1);
    let e2 = Path::trivial(V2);
    let (a, b, c) = (q.arrow_path(A), q.arrow_path(B), q.arrow_path(C));
    let t = |k: i64, l: &Path, r: usize, m: &Path| DiffTerm {
        coef: field.from_i64(k),
        left: l.clone(),
        target: r,
        right: m.clone(),
    };
    let mut slices = Vec::new();
    for n in 0..=max_degree {
        let summands: Vec<(VertexIdx, VertexIdx)> = g_sets(field, n).iter().map(|g| (g.origin, g.tail)).collect();
        let differential = match n {
            0 => vec![Vec::new(), Vec::new()],
            1 => vec![
                vec![t(1, &e1, 0, &a), t(-1, &a, 0, &e1)],
                vec![t(-1, &e1, 0, &b), t(1, &b, 0, &e1)],
                vec![t(1, &e1, 0, &c), t(-1, &c, 1, &e2)],
            ],
            _ => {
                let s = |k: usize| if k.is_multiple_of(2) { 1 } else { -1 };
                let mut d = Vec::new();
                d.push(vec![t(1, &e1, 0, &a), t(s(n), &a, 0, &e1)]);
                for r in 1..n {
                    d.push(vec![
                        t(1, &e1, r, &a),
                        t(s(n), &e1, r - 1, &b),
                        t(s(r + n), &a, r, &e1),
                        t(s(r + n), &b, r - 1, &e1),
                    ]);
                }
                d.push(vec![t(s(n), &e1, n - 1, &b), t(1, &b, n - 1, &e1)]);
                d.push(vec![t(1, &e1, 0, &c), t(s(n), &a, n, &e2)]);
                d
            }
        };
        slices.push(ResolutionSlice { degree: n, summands, differential });
    }
    Ok(XuResolution { algebra, slices })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ComplexReport {
    pub max_degree: usize,
    /// `(n, r)` with `dⁿ⁻¹(dⁿ(gⁿ_r)) ≠ 0` (for `n = 1`, `d⁰` is multiplication).
    pub d_squared_failures: Vec<(usize, usize)>,
    /// `(n, r)` with a term whose factors are both outside the radical.
    pub minimality_failures: Vec<(usize, usize)>,
    /// `(n, r)` with a term `λ ⊗ μ` where `ℓ(λ) + ℓ(μ) ≠ 1`.
    pub linearity_failures: Vec<(usize, usize)>,
}

impl ComplexReport {
    pub fn passed(&self) -> bool {
        self.d_squared_failures.is_empty() && self.minimality_failures.is_empty() && self.linearity_failures.is_empty()
    }
}

impl XuResolution {
    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn max_degree(&self) -> usize {
        self.slices.len() - 1
    }

    fn idx(&self, p: &Path) -> usize {
        self.algebra.index_of(p).expect("differential factors are basis paths")
    }

    /// `x·λ` and `μ·y` style products of a basis path with a vector.
    fn left_mul(&self, p: &Path, v: &SparseVec) -> SparseVec {
        self.algebra.mul(&linalg::unit(self.algebra.field(), self.idx(p)), v).expect("finite algebra")
    }

    fn right_mul(&self, v: &SparseVec, p: &Path) -> SparseVec {
        self.algebra.mul(v, &linalg::unit(self.algebra.field(), self.idx(p))).expect("finite algebra")
    }

    /// `dⁿ⁻¹ ∘ dⁿ` on the generator of summand `r`, as coordinates indexed by
    /// `(target summand, left basis index, right basis index)`.
    fn d_squared(&self, n: usize, r: usize) -> BTreeMap<(usize, usize, usize), Scalar> {
        let field = self.algebra.field();
        let mut acc: BTreeMap<(usize, usize, usize), Scalar> = BTreeMap::new();
        let mut add = |key, c: Scalar| {
            let e = acc.entry(key).or_insert_with(|| field.zero());
            *e += &c;
        };
        for t in &self.slices[n].differential[r] {
            let l = linalg::unit(field, self.idx(&t.left));
            let m = linalg::unit(field, self.idx(&t.right));
            if n == 1 {
                for (k, c) in self.algebra.mul(&l, &m).expect("finite algebra") {
                    add((0, k, 0), &t.coef * &c);
                }
                continue;
            }
            for u in &self.slices[n - 1].differential[t.target] {
                let ll = self.right_mul(&l, &u.left);
                let mm = self.left_mul(&u.right, &m);
                for (i, x) in &ll {
                    for (j, y) in &mm {
                        add((u.target, *i, *j), &(&t.coef * &u.coef) * &(x * y));
                    }
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        acc
    }

    /// Checks `d∘d = 0`, minimality and linearity through the built degree.
    pub fn verify(&self) -> ComplexReport {
        let mut rep = ComplexReport { max_degree: self.max_degree(), ..Default::default() };
        for n in 1..=self.max_degree() {
            for (r, terms) in self.slices[n].differential.iter().enumerate() {
                if !self.d_squared(n, r).is_empty() {
                    rep.d_squared_failures.push((n, r));
                }
                if terms.iter().any(|t| t.left.is_trivial() && t.right.is_trivial()) {
                    rep.minimality_failures.push((n, r));
                }
                if terms.iter().any(|t| t.left.len() + t.right.len() != 1) {
                    rep.linearity_failures.push((n, r));
                }
            }
        }
        rep
    }

    /// Basis of `Hom(Pⁿ, 𝒜) ≅ ⊕_r 𝔬_r 𝒜 𝔱_r` as `(summand, basis index)` pairs.
    pub fn cochain_basis(&self, n: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (r, (o, t)) in self.slices[n].summands.iter().enumerate() {
            for k in self.algebra.between(*o, *t) {
                out.push((r, k));
            }
        }
        out
    }

    /// Columns of the induced map `Hom(Pⁿ, 𝒜) → Hom(Pⁿ⁺¹, 𝒜)`, `φ ↦ φ ∘ dⁿ⁺¹`.
    pub fn cochain_differential(&self, n: usize) -> Vec<SparseVec> {
        let field = self.algebra.field();
        let src = self.cochain_basis(n);
        let dst = self.cochain_basis(n + 1);
        let pos: BTreeMap<(usize, usize), usize> = dst.iter().enumerate().map(|(i, k)| (*k, i)).collect();
        src.iter()
            .map(|&(r, k)| {
                let phi = linalg::unit(field, k);
                let mut acc = Vec::new();
                for (s, terms) in self.slices[n + 1].differential.iter().enumerate() {
                    for t in terms.iter().filter(|t| t.target == r) {
                        let v = self.right_mul(&self.left_mul(&t.left, &phi), &t.right);
                        acc.extend(v.into_iter().map(|(j, c)| (pos[&(s, j)], &t.coef * &c)));
                    }
                }
                linalg::from_pairs(acc)
            })
            .collect()
    }

    /// `dim HHⁿ(𝒜)` for `n = 0 ..= max_degree − 1`.
    pub fn hh_dims(&self) -> Vec<usize> {
        let field = self.algebra.field();
        let top = self.max_degree();
        let ranks: Vec<usize> = (0..top).map(|n| linalg::rank(field, &self.cochain_differential(n))).collect();
        (0..top)
            .map(|n| {
                let dim = self.cochain_basis(n).len();
                let below = if n == 0 { 0 } else { ranks[n - 1] };
                dim - ranks[n] - below
            })
            .collect()
    }
}

/// `dim HHⁿ(𝒜)` for `0 ≤ n ≤ max_degree`, from the explicit resolution.
pub fn hh_dims_from_resolution(field: Field, max_degree: usize) -> Result<Vec<usize>> {
    Ok(build_resolution(field, max_degree + 1)?.hh_dims())
}
