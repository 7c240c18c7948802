//! Quiver-and-relations presentations, including the builtin corpus.

use std::sync::Arc;

use crate::algebra::Algebra;
use crate::element::AlgebraElement;
use crate::error::Result;
use crate::field::{Field, Scalar};
use crate::quiver::Quiver;
use crate::rewrite::RewriteSystem;

/// `KQ/I` given by a quiver and a list of generating relations.
#[derive(Clone, Debug, PartialEq)]
pub struct Presentation {
    pub field: Field,
    pub quiver: Arc<Quiver>,
    pub relations: Vec<AlgebraElement>,
}

impl Presentation {
    pub fn new(field: Field, quiver: Quiver, relations: Vec<AlgebraElement>) -> Presentation {
        Presentation { field, quiver: Arc::new(quiver), relations }
    }

    /// Builds a presentation from relation strings such as `"a*b - 2*b*a"`.
    pub fn parse_relations(field: Field, quiver: Quiver, relations: &[&str]) -> Result<Presentation> {
        let rels = relations.iter().map(|r| parse_simple_relation(field, &quiver, r)).collect::<Result<Vec<_>>>()?;
        Ok(Presentation::new(field, quiver, rels))
    }

    pub fn system(&self) -> Result<RewriteSystem> {
        RewriteSystem::new(self.quiver.clone(), self.field, self.relations.clone())
    }

    pub fn finite_algebra(&self) -> Result<Algebra> {
        Algebra::finite(&self.system()?)
    }

    pub fn truncated_algebra(&self, max_degree: usize) -> Result<Algebra> {
        Algebra::truncated(&self.system()?, max_degree)
    }

    /// Same presentation over another field. Coefficients must be integers.
    pub fn with_field(&self, field: Field) -> Presentation {
        let relations = self
            .relations
            .iter()
            .map(|r| {
                AlgebraElement::from_terms(
                    field,
                    r.terms().map(|(p, c)| (field.from_i64(c.to_i64().expect("integer coefficient")), p.clone())),
                )
            })
            .collect();
        Presentation { field, quiver: self.quiver.clone(), relations }
    }

    /// Monomial relations as paths, if every relation is a single path.
    pub fn monomial_relations(&self) -> Option<Vec<crate::quiver::Path>> {
        self.relations.iter().map(|r| (r.len() == 1).then(|| r.leading().unwrap().0.clone())).collect()
    }
}

/// Minimal relation syntax for programmatic builtins: `[coef*]path` terms
/// joined by `+`/`-`, coefficients integers.
fn parse_simple_relation(field: Field, quiver: &Quiver, text: &str) -> Result<AlgebraElement> {
    let mut out = AlgebraElement::zero(field);
    let normalized = text.replace('-', "+-");
    for raw in normalized.split('+') {
        let t = raw.trim();
        if t.is_empty() {
            continue;
        }
        let (neg, t) = match t.strip_prefix('-') {
            Some(rest) => (true, rest.trim()),
            None => (false, t),
        };
        let mut coef = field.one();
        let mut factors: Vec<&str> = t.split('*').map(str::trim).collect();
        while let Some(first) = factors.first() {
            match first.parse::<i64>() {
                Ok(n) => {
                    coef = &coef * &field.from_i64(n);
                    factors.remove(0);
                }
                Err(_) => break,
            }
        }
        if neg {
            coef = -coef;
        }
        let path = quiver.parse_path(&factors.join("*"))?;
        out.add_term(&coef, path);
    }
    Ok(out)
}

/// The counterexample algebra: loops `a`, `b` at vertex 1 and `c: 1 → 2`,
/// modulo `a², b², ab − ba, ac`.
pub fn xu(field: Field) -> Presentation {
    let q = Quiver::new(&["1", "2"], &[("a", "1", "1"), ("b", "1", "1"), ("c", "1", "2")]).unwrap();
    Presentation::parse_relations(field, q, &["a*a", "b*b", "a*b - b*a", "a*c"]).unwrap()
}

/// Quadratic dual of [`xu`], on the opposite quiver with arrows `a°, b°, c°`.
/// Relations are written as left-to-right paths of the opposite quiver:
/// `b°a° + a°b°` and `c°b°`.
pub fn xu_dual(field: Field) -> Presentation {
    let q = Quiver::new(&["1", "2"], &[("a°", "1", "1"), ("b°", "1", "1"), ("c°", "2", "1")]).unwrap();
    Presentation::parse_relations(field, q, &["a°*b° + b°*a°", "c°*b°"]).unwrap()
}

/// `K⟨x, y⟩/(x², xy + q·yx, y²)`.
pub fn bgms(field: Field, q: Scalar) -> Presentation {
    let quiver = Quiver::new(&["1"], &[("x", "1", "1"), ("y", "1", "1")]).unwrap();
    let p = |s: &str| quiver.parse_path(s).unwrap();
    let rels = vec![
        AlgebraElement::from_path(field, p("x*x")),
        AlgebraElement::from_terms(field, [(field.one(), p("x*y")), (q, p("y*x"))]),
        AlgebraElement::from_path(field, p("y*y")),
    ];
    Presentation::new(field, quiver, rels)
}

/// `K[x]/(x^d)` as a one-loop quiver.
pub fn truncated_loop(field: Field, d: usize) -> Presentation {
    truncated_cycle(field, 1, d)
}

/// Oriented cycle on vertices `0..m` with arrows `a0 .. a{m-1}`, all paths of
/// length `d` set to zero.
pub fn truncated_cycle(field: Field, m: usize, d: usize) -> Presentation {
    assert!(m >= 1 && d >= 2);
    let names: Vec<String> = (0..m).map(|i| i.to_string()).collect();
    let arrows: Vec<(String, String, String)> = if m == 1 {
        vec![("x".into(), "0".into(), "0".into())]
    } else {
        (0..m).map(|i| (format!("a{i}"), i.to_string(), ((i + 1) % m).to_string())).collect()
    };
    let q = Quiver::new(&names, &arrows).unwrap();
    let rels = (0..m)
        .map(|start| {
            let ids: Vec<u32> = (0..d).map(|k| ((start + k) % m) as u32).collect();
            AlgebraElement::from_path(field, q.path(&ids).unwrap())
        })
        .collect();
    Presentation::new(field, q, rels)
}

/// A few quadratic monomial algebras used as test inputs, by id.
pub fn quadratic_monomial_samples(field: Field) -> Vec<(&'static str, Presentation)> {
    let linear = Quiver::new(&["1", "2", "3"], &[("p", "1", "2"), ("r", "2", "3")]).unwrap();
    let two_loops = Quiver::new(&["1"], &[("a", "1", "1"), ("b", "1", "1")]).unwrap();
    let kron = Quiver::new(&["1", "2"], &[("u", "1", "2"), ("v", "2", "1"), ("w", "2", "2")]).unwrap();
    vec![
        ("qm-loop", truncated_loop(field, 2)),
        ("qm-linear", Presentation::parse_relations(field, linear, &["p*r"]).unwrap()),
        ("qm-radsq", Presentation::parse_relations(field, two_loops.clone(), &["a*a", "a*b", "b*a", "b*b"]).unwrap()),
        ("qm-ab", Presentation::parse_relations(field, two_loops, &["a*a", "b*b", "a*b"]).unwrap()),
        ("qm-cycle3", truncated_cycle(field, 3, 2)),
        ("qm-loopy", Presentation::parse_relations(field, kron, &["u*v", "v*u", "w*w"]).unwrap()),
    ]
}

/// The selfinjective special biserial algebra on the double cycle with `m`
/// vertices, relations `a_i a_{i+1}`, `ā_{i-1} ā_{i-2}` and
/// `(a_i ā_i)^n − (ā_{i-1} a_{i-1})^n`.
pub fn lambda(field: Field, m: usize, n: usize) -> Presentation {
    assert!(m >= 1 && n >= 1);
    let names: Vec<String> = (0..m).map(|i| i.to_string()).collect();
    let mut arrows = Vec::new();
    for i in 0..m {
        arrows.push((format!("a{i}"), i.to_string(), ((i + 1) % m).to_string()));
    }
    for i in 0..m {
        arrows.push((format!("abar{i}"), ((i + 1) % m).to_string(), i.to_string()));
    }
    let q = Quiver::new(&names, &arrows).unwrap();
    let a = |i: usize| (i % m) as u32;
    let abar = |i: usize| (m + i % m) as u32;
    let mut rels = Vec::new();
    for i in 0..m {
        rels.push(AlgebraElement::from_path(field, q.path(&[a(i), a(i + 1)]).unwrap()));
        rels.push(AlgebraElement::from_path(field, q.path(&[abar(i + m - 1), abar(i + 2 * m - 2)]).unwrap()));
        let left: Vec<u32> = (0..n).flat_map(|_| [a(i), abar(i)]).collect();
        let right: Vec<u32> = (0..n).flat_map(|_| [abar(i + m - 1), a(i + m - 1)]).collect();
        rels.push(AlgebraElement::from_terms(
            field,
            [(field.one(), q.path(&left).unwrap()), (-field.one(), q.path(&right).unwrap())],
        ));
    }
    Presentation::new(field, q, rels)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_dimensions() {
        let f = Field::Prime(3);
        assert_eq!(xu(f).finite_algebra().unwrap().dim(), 7);
        assert_eq!(bgms(Field::Rational, Field::Rational.from_i64(2)).finite_algebra().unwrap().dim(), 4);
        assert_eq!(truncated_loop(f, 2).finite_algebra().unwrap().dim(), 2);
        assert_eq!(truncated_cycle(f, 3, 2).finite_algebra().unwrap().dim(), 6);
        for (id, p) in quadratic_monomial_samples(f) {
            assert!(p.finite_algebra().is_ok(), "{id}");
        }
    }

    #[test]
    fn lambda_one_loop() {
        // one vertex, loops a, ā: a² = ā² = 0, aā = āa: dimension 4
        let p = lambda(Field::Rational, 1, 1);
        assert_eq!(p.finite_algebra().unwrap().dim(), 4);
        let p = lambda(Field::Prime(2), 2, 1);
        assert!(p.finite_algebra().is_ok());
    }
}
