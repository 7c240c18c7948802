//! Quadratic duals `KQ^op/I^⊥` and degreewise graded centres of graded
//! algebras, with nilpotence data for the centre.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;

use crate::algebra::Algebra;
use crate::element::AlgebraElement;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{self, Echelon, SparseVec};
use crate::presentation::Presentation;
use crate::quiver::{enumerate_paths, Path, Quiver, VertexIdx};
use crate::ring::{GradedRingTruncation, NilpotenceReport, PowerOracle};

/// Suffix marking arrows of the opposite quiver.
pub const OPPOSITE_SUFFIX: &str = "°";

/// A quadratic algebra `KQ/⟨R⟩` with `R` a space of length-2 combinations,
/// stored as a reduced basis for each vertex pair `(origin, tail)`.
#[derive(Clone, Debug)]
pub struct QuadraticPresentation {
    pub field: Field,
    pub quiver: Arc<Quiver>,
    pub relations: BTreeMap<(VertexIdx, VertexIdx), Vec<AlgebraElement>>,
}

impl QuadraticPresentation {
    /// Splits every relation into its `e_i r e_j` components. Rejects
    /// relations with a term of length other than 2.
    pub fn new(p: &Presentation) -> Result<QuadraticPresentation> {
        let mut parts: BTreeMap<(VertexIdx, VertexIdx), Vec<AlgebraElement>> = BTreeMap::new();
        for r in &p.relations {
            if let Some((q, _)) = r.terms().find(|(q, _)| q.len() != 2) {
                return Err(Error::NotQuadratic(format!("{} has a term of length {}", r.display(&p.quiver), q.len())));
            }
            let mut split: BTreeMap<(VertexIdx, VertexIdx), AlgebraElement> = BTreeMap::new();
            for (q, c) in r.terms() {
                split
                    .entry((q.origin(), q.tail()))
                    .or_insert_with(|| AlgebraElement::zero(p.field))
                    .add_term(c, q.clone());
            }
            for (key, part) in split {
                parts.entry(key).or_default().push(part);
            }
        }
        Ok(Self::from_parts(p.field, p.quiver.clone(), parts))
    }

    fn from_parts(
        field: Field,
        quiver: Arc<Quiver>,
        parts: BTreeMap<(VertexIdx, VertexIdx), Vec<AlgebraElement>>,
    ) -> QuadraticPresentation {
        let mut relations = BTreeMap::new();
        for ((i, j), rels) in parts {
            let paths = length_two(&quiver, i, j);
            let basis = reduced_span(field, &paths, &rels);
            if !basis.is_empty() {
                relations.insert((i, j), basis);
            }
        }
        QuadraticPresentation { field, quiver, relations }
    }

    /// `dim R(i, j)` for every vertex pair.
    pub fn relation_dims(&self) -> BTreeMap<(VertexIdx, VertexIdx), usize> {
        let n = self.quiver.num_vertices() as VertexIdx;
        let mut out = BTreeMap::new();
        for i in 0..n {
            for j in 0..n {
                out.insert((i, j), self.relations.get(&(i, j)).map_or(0, Vec::len));
            }
        }
        out
    }

    pub fn relation_list(&self) -> Vec<AlgebraElement> {
        self.relations.values().flatten().cloned().collect()
    }

    pub fn to_presentation(&self) -> Presentation {
        Presentation { field: self.field, quiver: self.quiver.clone(), relations: self.relation_list() }
    }

    /// Whether both presentations have the same quiver shape and the same
    /// relation space (arrows identified by declaration index).
    pub fn same_relations(&self, other: &QuadraticPresentation) -> bool {
        let shape = |q: &Quiver| q.arrows().iter().map(|a| (a.origin, a.tail)).collect::<Vec<_>>();
        if shape(&self.quiver) != shape(&other.quiver) || self.relation_dims() != other.relation_dims() {
            return false;
        }
        self.relations.iter().all(|((i, j), rels)| {
            let paths = length_two(&self.quiver, *i, *j);
            let mut ech = Echelon::new(self.field);
            for r in rels {
                ech.insert_untagged(&coords(&paths, r));
            }
            other.relations[&(*i, *j)].iter().all(|r| ech.contains(&coords(&paths, r)))
        })
    }
}

/// `E = KQ^op/R^⊥` together with the quiver it came from.
#[derive(Clone, Debug)]
pub struct DualPresentation {
    pub primal: Arc<Quiver>,
    pub dual: QuadraticPresentation,
}

impl DualPresentation {
    /// Dual relations in the opposite quiver's own left-to-right notation,
    /// e.g. `c°*b°`.
    pub fn relation_strings(&self) -> Vec<String> {
        self.dual.relation_list().iter().map(|r| r.display(&self.dual.quiver)).collect()
    }

    /// Dual relations written through the primal paths they reverse, e.g.
    /// `(b*c)°` for `c°*b°`.
    pub fn reversed_strings(&self) -> Vec<String> {
        self.dual
            .relation_list()
            .iter()
            .map(|r| {
                let mut out = String::new();
                for (k, (p, c)) in r.terms().enumerate() {
                    let neg = c.is_negative_looking();
                    let mag = if neg { -c } else { c.clone() };
                    out.push_str(match (k, neg) {
                        (0, false) => "",
                        (0, true) => "-",
                        (_, false) => " + ",
                        (_, true) => " - ",
                    });
                    if !mag.is_one() {
                        out.push_str(&format!("{mag}*"));
                    }
                    let primal = reverse(&self.primal, p);
                    out.push_str(&format!("({}){}", self.primal.path_to_string(&primal), OPPOSITE_SUFFIX));
                }
                out
            })
            .collect()
    }
}

/// Quadratic dual: for each pair `(i, j)` the annihilator of `R(i, j)` under
/// the pairing `⟨p, q⟩ = δ_{p,q}` of length-2 paths, moved to `Q^op` by
/// sending `xy` to `y°x°`. With this convention the modules over the dual of
/// `a², b², ab − ba, ac` are the right modules over `KQ/⟨ab + ba, bc⟩`.
pub fn quadratic_dual(p: &QuadraticPresentation) -> DualPresentation {
    let f = p.field;
    let q = &p.quiver;
    let op = Arc::new(q.opposite(OPPOSITE_SUFFIX));
    let n = q.num_vertices() as VertexIdx;
    let mut parts = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            let paths = length_two(q, i, j);
            if paths.is_empty() {
                continue;
            }
            let rels = p.relations.get(&(i, j)).map(Vec::as_slice).unwrap_or(&[]);
            // column of path k: its coefficients in the relations
            let cols: Vec<SparseVec> = (0..paths.len())
                .map(|k| linalg::from_pairs(rels.iter().enumerate().map(|(r, rel)| (r, rel.coefficient(&paths[k])))))
                .collect();
            let (kernel, _) = linalg::kernel_and_image(f, &cols);
            let dual: Vec<AlgebraElement> = kernel
                .iter()
                .map(|v| AlgebraElement::from_terms(f, v.iter().map(|(k, c)| (c.clone(), reverse(&op, &paths[*k])))))
                .collect();
            if !dual.is_empty() {
                parts.insert((j, i), dual);
            }
        }
    }
    DualPresentation { primal: q.clone(), dual: QuadraticPresentation::from_parts(f, op, parts) }
}

/// The arrows of `p` in reverse order, read in `target`, a quiver opposite to
/// the one of `p` (arrow indices are shared between `Q` and `Q^op`).
fn reverse(target: &Quiver, p: &Path) -> Path {
    let arrows: Vec<_> = p.arrows().iter().rev().copied().collect();
    target.path(&arrows).expect("reversed path is composable in the opposite quiver")
}

fn length_two(q: &Quiver, i: VertexIdx, j: VertexIdx) -> Vec<Path> {
    enumerate_paths(q, 2).into_iter().filter(|p| p.origin() == i && p.tail() == j).collect()
}

fn coords(paths: &[Path], r: &AlgebraElement) -> SparseVec {
    linalg::from_pairs(paths.iter().enumerate().map(|(k, p)| (k, r.coefficient(p))))
}

fn reduced_span(f: Field, paths: &[Path], rels: &[AlgebraElement]) -> Vec<AlgebraElement> {
    let mut ech = Echelon::new(f);
    for r in rels {
        ech.insert_untagged(&coords(paths, r));
    }
    ech.basis().map(|v| AlgebraElement::from_terms(f, v.iter().map(|(k, c)| (c.clone(), paths[*k].clone())))).collect()
}

/// Degree `n` of the graded centre: a basis of the homogeneous `z` with
/// `zg = (−1)^{n|g|} gz` for all `g`.
#[derive(Clone, Debug)]
pub struct GradedCentreSlice {
    pub degree: usize,
    /// Basis vectors in the coordinates of the ambient algebra.
    pub basis: Vec<SparseVec>,
    /// Weight of each basis vector.
    pub weights: Vec<Vec<i32>>,
}

impl GradedCentreSlice {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

fn supercommutator(alg: &Algebra, z: &SparseVec, n: usize, g: &SparseVec, m: usize) -> Result<SparseVec> {
    let zg = alg.mul(z, g)?;
    let gz = alg.mul(g, z)?;
    let s = alg.field().sign(n * m);
    Ok(linalg::axpy(&zg, &-s, &gz))
}

/// Solves `zα = (−1)^{n|α|} αz` for the vertex idempotents and arrows `α`,
/// one weight block at a time. This is the whole graded centre because a
/// quotient of a path algebra by relations of length ≥ 2 is generated by
/// those elements; the degree-`n + 1` products must lie in the truncation.
pub fn graded_centre_slice(alg: &Algebra, n: usize) -> Result<GradedCentreSlice> {
    if n + 1 > alg.max_degree() && !alg.is_finite() {
        return Err(Error::DegreeOverflow { length: n + 1, bound: alg.max_degree() });
    }
    let f = alg.field();
    if n > alg.max_degree() {
        return Ok(GradedCentreSlice { degree: n, basis: Vec::new(), weights: Vec::new() });
    }
    let q = alg.quiver();
    let gens: Vec<(SparseVec, usize)> = (0..q.num_vertices() as VertexIdx)
        .map(|v| (linalg::unit(f, alg.vertex_index(v)), 0))
        .chain(alg.degree_range(1).map(|i| (linalg::unit(f, i), 1)))
        .collect();
    let mut blocks: BTreeMap<Vec<i32>, Vec<usize>> = BTreeMap::new();
    for i in alg.degree_range(n) {
        blocks.entry(alg.weight(i).to_vec()).or_default().push(i);
    }
    let dim = alg.dim();
    let solved: Vec<(Vec<i32>, Vec<SparseVec>)> = blocks
        .into_par_iter()
        .map(|(w, block)| {
            let cols: Vec<SparseVec> = block
                .iter()
                .map(|&i| {
                    let z = linalg::unit(f, i);
                    let mut col = Vec::new();
                    for (k, (g, m)) in gens.iter().enumerate() {
                        let c = supercommutator(alg, &z, n, g, *m)?;
                        col.extend(c.into_iter().map(|(r, x)| (k * dim + r, x)));
                    }
                    Ok(col)
                })
                .collect::<Result<_>>()?;
            let (kernel, _) = linalg::kernel_and_image(f, &cols);
            let basis =
                kernel.into_iter().map(|v| linalg::from_pairs(v.into_iter().map(|(k, c)| (block[k], c)))).collect();
            Ok((w, basis))
        })
        .collect::<Result<_>>()?;
    let mut basis = Vec::new();
    let mut weights = Vec::new();
    for (w, vs) in solved {
        for v in vs {
            basis.push(v);
            weights.push(w.clone());
        }
    }
    Ok(GradedCentreSlice { degree: n, basis, weights })
}

/// The graded centre of a graded algebra in degrees `0..=N`.
#[derive(Clone, Debug)]
pub struct GradedCentre {
    alg: Algebra,
    max_degree: usize,
    slices: Vec<GradedCentreSlice>,
    /// Echelon of each slice, tagged by slice coordinates.
    coordinates: Vec<Echelon>,
}

impl GradedCentre {
    /// Computes slices `0..=max_degree` of `alg`, which must reach degree
    /// `max_degree + 1` unless it is finite-dimensional.
    pub fn new(alg: Algebra, max_degree: usize) -> Result<GradedCentre> {
        let slices: Vec<GradedCentreSlice> =
            (0..=max_degree).into_par_iter().map(|n| graded_centre_slice(&alg, n)).collect::<Result<_>>()?;
        let f = alg.field();
        let coordinates = slices
            .iter()
            .map(|s| {
                let mut e = Echelon::new(f);
                for (k, v) in s.basis.iter().enumerate() {
                    e.insert(v, &linalg::unit(f, k)).expect("kernel basis is independent");
                }
                e
            })
            .collect();
        Ok(GradedCentre { alg, max_degree, slices, coordinates })
    }

    /// Graded centre of `p` up to degree `max_degree`, inside a truncation of
    /// `p` to degree `reach ≥ max_degree + 1` (used for powers).
    pub fn of_presentation(p: &Presentation, max_degree: usize, reach: usize) -> Result<GradedCentre> {
        let alg = p.truncated_algebra(reach.max(max_degree + 1))?;
        GradedCentre::new(alg, max_degree)
    }

    pub fn algebra(&self) -> &Algebra {
        &self.alg
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn slice(&self, n: usize) -> &GradedCentreSlice {
        &self.slices[n]
    }

    pub fn dims(&self) -> Vec<usize> {
        self.slices.iter().map(GradedCentreSlice::dim).collect()
    }

    /// Coordinates of `z` in the degree-`n` slice, if it lies there.
    pub fn coordinates(&self, n: usize, z: &SparseVec) -> Option<SparseVec> {
        let red = self.coordinates[n].reduce(z);
        red.residual.is_empty().then_some(red.tag)
    }

    fn element(&self, n: usize, x: &SparseVec) -> SparseVec {
        x.iter().fold(Vec::new(), |acc, (i, c)| linalg::axpy(&acc, c, &self.slices[n].basis[*i]))
    }

    /// Pairs `(n, m)` for which some degree-`n` basis element fails to
    /// supercommute with some degree-`m` basis element of the algebra, over
    /// all `n + m ≤ N`.
    pub fn check_supercommutation(&self) -> Result<Vec<(usize, usize)>> {
        let f = self.alg.field();
        let mut failures = Vec::new();
        for n in 0..=self.max_degree {
            for m in 0..=self.max_degree - n {
                for z in &self.slices[n].basis {
                    let bad = self.alg.degree_range(m).try_fold(false, |bad, g| -> Result<bool> {
                        Ok(bad || !supercommutator(&self.alg, z, n, &linalg::unit(f, g), m)?.is_empty())
                    })?;
                    if bad {
                        failures.push((n, m));
                        break;
                    }
                }
            }
        }
        Ok(failures)
    }

    /// Pairs `(n, m)` whose slice product leaves the degree-`n + m` slice.
    pub fn check_closure(&self) -> Result<Vec<(usize, usize)>> {
        let mut failures = Vec::new();
        for n in 0..=self.max_degree {
            for m in 0..=self.max_degree - n {
                'pairs: for x in &self.slices[n].basis {
                    for y in &self.slices[m].basis {
                        if self.coordinates(n + m, &self.alg.mul(x, y)?).is_none() {
                            failures.push((n, m));
                            break 'pairs;
                        }
                    }
                }
            }
        }
        Ok(failures)
    }

    /// The slices as a graded ring with products from the ambient algebra.
    pub fn ring(&self) -> Result<GradedRingTruncation> {
        let labels = self.slices.iter().map(|s| s.basis.iter().map(|v| self.alg.display_vec(v)).collect()).collect();
        let weights = self.slices.iter().map(|s| s.weights.clone()).collect();
        GradedRingTruncation::new(self.alg.field(), self.max_degree, true, labels, weights, |d, i, e, j| {
            let prod = self.alg.mul(&self.slices[d].basis[i], &self.slices[e].basis[j])?;
            self.coordinates(d + e, &prod).ok_or_else(|| {
                Error::Unsupported(format!("product of centre elements in degrees {d}, {e} left the centre"))
            })
        })
    }
}

impl PowerOracle for GradedCentre {
    fn power_residual(&self, d: usize, x: &SparseVec, k: usize) -> Option<SparseVec> {
        if k * d > self.alg.max_degree() && !self.alg.is_finite() {
            return None;
        }
        let z = self.element(d, x);
        let mut acc = z.clone();
        for _ in 1..k {
            acc = self.alg.mul(&acc, &z).ok()?;
        }
        Some(acc)
    }

    fn max_degree(&self) -> usize {
        if self.alg.is_finite() {
            usize::MAX
        } else {
            self.alg.max_degree()
        }
    }
}

/// `Z_gr / 𝒩_Z` in degrees `0..=N`.
#[derive(Clone, Debug)]
pub struct CentreQuotient {
    pub centre: GradedCentre,
    pub ring: GradedRingTruncation,
    pub nilpotence: NilpotenceReport,
}

/// Graded centre of `p` modulo its certified nilpotents up to degree `N`.
/// Powers are checked exactly up to degree `2N`.
pub fn centre_mod_nilpotence(p: &Presentation, max_degree: usize) -> Result<CentreQuotient> {
    let centre = GradedCentre::of_presentation(p, max_degree, 2 * max_degree)?;
    let ring = centre.ring()?;
    let nilpotence = ring.certify_nilpotence_with(Some(&centre));
    Ok(CentreQuotient { centre, ring, nilpotence })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::{truncated_loop, xu, xu_dual};
    use crate::ring::{finite_generation_probe, NilLabel};

    fn dual_of(p: &Presentation) -> DualPresentation {
        quadratic_dual(&QuadraticPresentation::new(p).unwrap())
    }

    #[test]
    fn xu_dual_relations() {
        let d = dual_of(&xu(Field::Prime(3)));
        let mut rev = d.reversed_strings();
        rev.sort();
        assert_eq!(rev, vec!["(b*a)° + (a*b)°", "(b*c)°"]);
        let expected = QuadraticPresentation::new(&xu_dual(Field::Prime(3))).unwrap();
        assert!(d.dual.same_relations(&expected));
    }

    #[test]
    fn dual_of_square_zero_loop_is_free() {
        let d = dual_of(&truncated_loop(Field::Rational, 2));
        assert!(d.dual.relations.is_empty());
    }

    #[test]
    fn bgms_dual_is_one_dimensional() {
        let f = Field::Rational;
        let q = f.from_i64(2);
        let d = dual_of(&crate::presentation::bgms(f, q));
        assert_eq!(d.dual.relation_dims()[&(0, 0)], 1);
        let rel = &d.dual.relations[&(0, 0)][0];
        // orthogonal to x², y², xy + 2yx: proportional to 2·y°x° − x°y°
        let p = |s: &str| d.dual.quiver.parse_path(s).unwrap();
        let a = rel.coefficient(&p("y°*x°"));
        let b = rel.coefficient(&p("x°*y°"));
        assert_eq!(a, &f.from_i64(-2) * &b);
        assert!(rel.coefficient(&p("x°*x°")).is_zero());
    }

    #[test]
    fn double_dual() {
        for p in [
            xu(Field::Prime(2)),
            truncated_loop(Field::Prime(5), 2),
            crate::presentation::bgms(Field::Rational, Field::Rational.from_i64(3)),
        ] {
            let q = QuadraticPresentation::new(&p).unwrap();
            let dd = quadratic_dual(&quadratic_dual(&q).dual);
            assert!(q.same_relations(&dd.dual));
        }
    }

    #[test]
    fn non_quadratic_rejected() {
        assert!(matches!(QuadraticPresentation::new(&truncated_loop(Field::Rational, 3)), Err(Error::NotQuadratic(_))));
    }

    #[test]
    fn low_slices_of_the_dual() {
        let alg2 = xu_dual(Field::Prime(2)).truncated_algebra(3).unwrap();
        let s = graded_centre_slice(&alg2, 1).unwrap();
        assert_eq!(s.dim(), 1);
        assert_eq!(alg2.display_vec(&s.basis[0]), "b°");
        let alg0 = xu_dual(Field::Rational).truncated_algebra(3).unwrap();
        assert_eq!(graded_centre_slice(&alg0, 0).unwrap().dim(), 1);
        assert_eq!(graded_centre_slice(&alg0, 1).unwrap().dim(), 0);
        let s2 = graded_centre_slice(&alg0, 2).unwrap();
        assert_eq!(s2.dim(), 1);
        assert_eq!(alg0.display_vec(&s2.basis[0]), "b°*b°");
        assert!(matches!(graded_centre_slice(&alg0, 3), Err(Error::DegreeOverflow { .. })));
    }

    #[test]
    fn xu_centre_mod_nilpotence() {
        let cases = [
            (Field::Prime(2), vec![1, 1, 2, 3, 4, 5, 6]),
            (Field::Prime(3), vec![1, 0, 1, 0, 2, 0, 3]),
            (Field::Rational, vec![1, 0, 1, 0, 2, 0, 3]),
        ];
        for (f, dims) in cases {
            let q = centre_mod_nilpotence(&xu_dual(f), 6).unwrap();
            assert_eq!(q.nilpotence.quotient_dims, dims, "{f}");
            assert!(q.nilpotence.labels.iter().flatten().all(|l| *l == NilLabel::NotNilpotentUpToN), "{f}");
            assert!(q.centre.check_supercommutation().unwrap().is_empty());
            assert!(q.centre.check_closure().unwrap().is_empty());
        }
    }

    #[test]
    fn polynomial_dual_of_square_zero_loop() {
        let dual = dual_of(&truncated_loop(Field::Prime(2), 2)).dual.to_presentation();
        let q = centre_mod_nilpotence(&dual, 6).unwrap();
        assert_eq!(q.nilpotence.quotient_dims, vec![1; 7]);
        let probe = finite_generation_probe(&q.ring, &q.nilpotence);
        assert_eq!(probe.new_generators, vec![0, 1, 0, 0, 0, 0, 0]);

        let dual = dual_of(&truncated_loop(Field::Prime(3), 2)).dual.to_presentation();
        let q = centre_mod_nilpotence(&dual, 6).unwrap();
        assert_eq!(q.nilpotence.quotient_dims, vec![1, 0, 1, 0, 1, 0, 1]);
    }
}
