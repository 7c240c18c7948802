//! Overlap combinatorics for monomial algebras: the recursive path sets that
//! label the summands of the minimal projective bimodule resolution, Ext
//! multiplicity tables between simples, and the (D, A)-stacked test.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::presentation::Presentation;
use crate::quiver::{ArrowIdx, Path, Quiver, VertexIdx};

/// `q` overlapping `p` with overlap `pu = vq`, where `1 ≤ ℓ(u) < ℓ(q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Overlap {
    pub p: Path,
    pub q: Path,
    pub u: Path,
    pub v: Path,
}

impl Overlap {
    /// `ℓ(v) ≥ 1`.
    pub fn is_proper(&self) -> bool {
        !self.v.is_trivial()
    }

    /// The overlap word `pu`.
    pub fn word(&self) -> Path {
        self.p.compose(&self.u).expect("overlap word is a path")
    }
}

/// All ways in which `q` overlaps `p`, by increasing `ℓ(u)`.
pub fn overlaps(quiver: &Quiver, q: &Path, p: &Path) -> Vec<Overlap> {
    let (pa, qa) = (p.arrows(), q.arrows());
    let mut out = Vec::new();
    if pa.is_empty() || qa.is_empty() {
        return out;
    }
    for k in 1..qa.len() {
        let shared = qa.len() - k;
        if shared > pa.len() || pa[pa.len() - shared..] != qa[..shared] {
            continue;
        }
        out.push(Overlap {
            p: p.clone(),
            q: q.clone(),
            u: q.subpath(quiver, shared, qa.len()),
            v: p.subpath(quiver, 0, pa.len() - shared),
        });
    }
    out
}

/// One element of a path set, with the data of how it was formed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApElement {
    pub path: Path,
    /// Index of the element of the previous degree this one extends.
    pub parent: Option<usize>,
    /// Index into the relation list of the relation that maximally overlaps.
    pub relation: Option<usize>,
    /// Length of the previous element; `path[split..]` is the segment the next
    /// relation must overlap.
    split: usize,
}

/// The sets `ℛ⁰ … ℛᴺ` for a monomial presentation.
#[derive(Clone, Debug)]
pub struct ApSets {
    quiver: Quiver,
    rho: Vec<Path>,
    levels: Vec<Vec<ApElement>>,
}

impl ApSets {
    pub fn from_presentation(pres: &Presentation, n: usize) -> Result<ApSets> {
        let rho = pres
            .monomial_relations()
            .ok_or_else(|| Error::NotMonomial("some relation has more than one term".into()))?;
        build_ap_sets(&pres.quiver, &rho, n)
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    /// The minimal generating relations, in term order.
    pub fn relations(&self) -> &[Path] {
        &self.rho
    }

    pub fn max_degree(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, n: usize) -> &[ApElement] {
        &self.levels[n]
    }

    pub fn paths(&self, n: usize) -> Vec<&Path> {
        self.levels[n].iter().map(|e| &e.path).collect()
    }
}

fn validate_rho(quiver: &Quiver, rho: &[Path]) -> Result<()> {
    for (i, r) in rho.iter().enumerate() {
        if r.len() < 2 {
            return Err(Error::NotAdmissible(format!("relation `{}` has length < 2", quiver.path_to_string(r))));
        }
        for (j, s) in rho.iter().enumerate() {
            if i != j && (r == s || s.contains(r)) {
                return Err(Error::NotMonomial(format!(
                    "relations are not minimal: `{}` lies inside `{}`",
                    quiver.path_to_string(r),
                    quiver.path_to_string(s)
                )));
            }
        }
    }
    Ok(())
}

/// Builds `ℛ⁰ … ℛᴺ` from a minimal set of monomial relations.
pub fn build_ap_sets(quiver: &Quiver, rho: &[Path], n: usize) -> Result<ApSets> {
    validate_rho(quiver, rho)?;
    let mut rho: Vec<Path> = rho.to_vec();
    rho.sort();
    let mut levels: Vec<Vec<ApElement>> = Vec::new();
    levels.push(
        (0..quiver.num_vertices() as VertexIdx)
            .map(|v| ApElement { path: Path::trivial(v), parent: None, relation: None, split: 0 })
            .collect(),
    );
    if n >= 1 {
        levels.push(
            (0..quiver.num_arrows() as ArrowIdx)
                .map(|a| ApElement { path: quiver.arrow_path(a), parent: None, relation: None, split: 0 })
                .collect(),
        );
    }
    if n >= 2 {
        levels.push(
            rho.iter()
                .enumerate()
                .map(|(i, r)| ApElement {
                    path: r.clone(),
                    parent: Some(r.arrows()[0] as usize),
                    relation: Some(i),
                    split: 1,
                })
                .collect(),
        );
    }
    let max_rel = rho.iter().map(Path::len).max().unwrap_or(0);
    for _ in 3..=n {
        let prev = levels.last().unwrap();
        let mut next: Vec<ApElement> = Vec::new();
        for (pi, elt) in prev.iter().enumerate() {
            let p = &elt.path.arrows()[elt.split..];
            let mut u: Vec<ArrowIdx> = Vec::new();
            extend_maximal(quiver, &rho, max_rel, p, elt.path.tail(), &mut u, &mut |u, rel| {
                let mut w = elt.path.arrows().to_vec();
                w.extend_from_slice(u);
                let path = quiver.path(&w).expect("extension is composable");
                if !next.iter().any(|e| e.path == path) {
                    next.push(ApElement { path, parent: Some(pi), relation: Some(rel), split: elt.path.len() });
                }
            });
        }
        next.sort_by(|a, b| a.path.cmp(&b.path));
        let empty = next.is_empty();
        levels.push(next);
        if empty {
            // every later set is empty as well
            while levels.len() <= n {
                levels.push(Vec::new());
            }
            break;
        }
    }
    Ok(ApSets { quiver: quiver.clone(), rho, levels })
}

/// Depth-first search over continuations `u` of `p`, reporting each shortest
/// `u` such that some relation is a suffix of `pu` starting inside `p`.
fn extend_maximal(
    quiver: &Quiver,
    rho: &[Path],
    max_rel: usize,
    p: &[ArrowIdx],
    at: VertexIdx,
    u: &mut Vec<ArrowIdx>,
    found: &mut dyn FnMut(&[ArrowIdx], usize),
) {
    if u.len() + 1 >= max_rel {
        return;
    }
    for (a, info) in quiver.arrows().iter().enumerate() {
        if info.origin != at {
            continue;
        }
        u.push(a as ArrowIdx);
        let mut word = p.to_vec();
        word.extend_from_slice(u);
        let suffix_rel =
            rho.iter().enumerate().find(|(_, r)| r.len() <= word.len() && word[word.len() - r.len()..] == *r.arrows());
        match suffix_rel {
            Some((i, r)) if r.len() > u.len() => found(u, i),
            // a relation inside u alone: no relation through p can end later
            Some(_) => {}
            None => extend_maximal(quiver, rho, max_rel, p, info.tail, u, found),
        }
        u.pop();
    }
}

/// Summand labels `(𝔬(Rⁿ), 𝔱(Rⁿ))` of the degree-`n` projective.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BardzellSlice {
    pub degree: usize,
    pub summands: Vec<(VertexIdx, VertexIdx)>,
}

pub fn bardzell_projectives(sets: &ApSets) -> Vec<BardzellSlice> {
    (0..=sets.max_degree())
        .map(|n| BardzellSlice {
            degree: n,
            summands: sets.levels[n].iter().map(|e| (e.path.origin(), e.path.tail())).collect(),
        })
        .collect()
}

/// Entry `(i, j)` counts the `Rⁿ` from vertex `i` to vertex `j`, which is the
/// dimension of `Extⁿ(S_i, S_j)`.
pub fn ext_table(sets: &ApSets, n: usize) -> Vec<Vec<usize>> {
    let k = sets.quiver.num_vertices();
    let mut t = vec![vec![0; k]; k];
    if n <= sets.max_degree() {
        for e in &sets.levels[n] {
            t[e.path.origin() as usize][e.path.tail() as usize] += 1;
        }
    }
    t
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum StackedVerdict {
    /// Lengths follow the (D, A) pattern through `certified_to`. `a` is `None`
    /// when every set from degree 3 on is empty.
    Stacked {
        d: usize,
        a: Option<usize>,
        certified_to: usize,
    },
    Violation {
        degree: usize,
        expected: usize,
        observed: usize,
    },
}

/// Checks `ℓ(Rⁿ) = (n/2)·D` for even `n` and `((n−1)/2)·D + A` for odd `n`.
pub fn is_da_stacked(sets: &ApSets, n: usize) -> StackedVerdict {
    let n = n.min(sets.max_degree());
    let rho = &sets.rho;
    let d = rho.first().map(Path::len).unwrap_or(0);
    if let Some(bad) = rho.iter().find(|r| r.len() != d) {
        return StackedVerdict::Violation { degree: 2, expected: d, observed: bad.len() };
    }
    let a = sets.levels.get(3).and_then(|l| l.first()).map(|e| e.path.len() - d);
    for k in 2..=n {
        for e in &sets.levels[k] {
            let expected = if k % 2 == 0 { k / 2 * d } else { (k - 1) / 2 * d + a.unwrap_or(0) };
            if e.path.len() != expected {
                return StackedVerdict::Violation { degree: k, expected, observed: e.path.len() };
            }
        }
    }
    StackedVerdict::Stacked { d, a, certified_to: n }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_loop() -> Quiver {
        Quiver::new(&["1"], &[("x", "1", "1")]).unwrap()
    }

    fn xpow(q: &Quiver, k: usize) -> Path {
        if k == 0 {
            return Path::trivial(0);
        }
        q.path(&vec![0; k]).unwrap()
    }

    #[test]
    fn overlaps_on_a_loop() {
        let q = one_loop();
        let o = overlaps(&q, &xpow(&q, 2), &xpow(&q, 2));
        assert_eq!(o.len(), 1);
        assert_eq!(o[0].u.len(), 1);
        assert_eq!(o[0].v.len(), 1);
        assert!(o[0].is_proper());
        assert_eq!(o[0].word().len(), 3);

        let o = overlaps(&q, &xpow(&q, 3), &xpow(&q, 2));
        let us: Vec<usize> = o.iter().map(|x| x.u.len()).collect();
        assert_eq!(us, [1, 2]);
        assert!(!o[0].is_proper());
        assert!(o[1].is_proper());
    }

    #[test]
    fn no_overlap_on_linear_quiver() {
        let q = Quiver::new(&["1", "2", "3"], &[("p", "1", "2"), ("r", "2", "3")]).unwrap();
        let pr = q.parse_path("p*r").unwrap();
        assert!(overlaps(&q, &pr, &pr).is_empty());
        let sets = build_ap_sets(&q, &[pr], 3).unwrap();
        assert!(sets.level(3).is_empty());
        assert_eq!(ext_table(&sets, 3), vec![vec![0; 3]; 3]);
        assert_eq!(ext_table(&sets, 2)[0][2], 1);
        assert_eq!(is_da_stacked(&sets, 3), StackedVerdict::Stacked { d: 2, a: None, certified_to: 3 });
    }

    #[test]
    fn square_zero_loop() {
        let q = one_loop();
        let sets = build_ap_sets(&q, &[xpow(&q, 2)], 5).unwrap();
        for n in 0..=5 {
            assert_eq!(sets.paths(n), vec![&xpow(&q, n)]);
            assert_eq!(ext_table(&sets, n), vec![vec![1]]);
        }
        for s in bardzell_projectives(&sets) {
            assert_eq!(s.summands, vec![(0, 0)]);
        }
    }

    #[test]
    fn cube_zero_loop_lengths() {
        let q = one_loop();
        let sets = build_ap_sets(&q, &[xpow(&q, 3)], 7).unwrap();
        let lens: Vec<usize> = (2..=7).map(|n| sets.level(n)[0].path.len()).collect();
        assert_eq!(lens, [3, 4, 6, 7, 9, 10]);
        assert_eq!(is_da_stacked(&sets, 7), StackedVerdict::Stacked { d: 3, a: Some(1), certified_to: 7 });
        assert_eq!(bardzell_projectives(&sets)[2].summands, vec![(0, 0)]);
    }

    #[test]
    fn mixed_lengths_violate_at_two() {
        let q = Quiver::new(&["1"], &[("x", "1", "1"), ("y", "1", "1")]).unwrap();
        let rho = [q.parse_path("x*x").unwrap(), q.parse_path("y*y*y").unwrap()];
        let sets = build_ap_sets(&q, &rho, 4).unwrap();
        assert!(matches!(is_da_stacked(&sets, 4), StackedVerdict::Violation { degree: 2, .. }));
    }

    #[test]
    fn non_minimal_relations_rejected() {
        let q = one_loop();
        assert!(build_ap_sets(&q, &[xpow(&q, 2), xpow(&q, 3)], 3).is_err());
    }

    #[test]
    fn non_monomial_presentation_rejected() {
        let pres = crate::presentation::xu(crate::Field::Prime(2));
        assert!(matches!(ApSets::from_presentation(&pres, 3), Err(Error::NotMonomial(_))));
    }
}
