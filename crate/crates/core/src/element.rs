//! Finite linear combinations of paths with exact coefficients.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::quiver::{Path, Quiver};

/// An element of the path algebra `KQ` (or, when kept in normal form, of a
/// quotient `KQ/I`). Terms are kept in term order with no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraElement {
    field: Field,
    terms: BTreeMap<Path, Scalar>,
}

impl AlgebraElement {
    pub fn zero(field: Field) -> Self {
        AlgebraElement { field, terms: BTreeMap::new() }
    }

    pub fn from_path(field: Field, p: Path) -> Self {
        Self::monomial(field.one(), p)
    }

    pub fn monomial(coeff: Scalar, p: Path) -> Self {
        let field = coeff.field();
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(p, coeff);
        }
        AlgebraElement { field, terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Scalar, Path)>>(field: Field, terms: I) -> Self {
        let mut x = Self::zero(field);
        for (c, p) in terms {
            x.add_term(&c, p);
        }
        x
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Path, &Scalar)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Path, Scalar> {
        self.terms
    }

    pub fn coefficient(&self, p: &Path) -> Scalar {
        self.terms.get(p).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// Largest monomial in term order, with its coefficient.
    pub fn leading(&self) -> Option<(&Path, &Scalar)> {
        self.terms.iter().next_back()
    }

    /// The common path length of all terms, if there is one.
    pub fn degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(Path::len);
        let first = it.next()?;
        it.all(|l| l == first).then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.degree().is_some()
    }

    pub fn max_len(&self) -> usize {
        self.terms.keys().map(Path::len).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, c: &Scalar, p: Path) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&p) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&p);
                }
            }
            None => {
                self.terms.insert(p, c.clone());
            }
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, c: &Scalar, other: &AlgebraElement) {
        if c.is_zero() {
            return;
        }
        for (p, v) in &other.terms {
            self.add_term(&(c * v), p.clone());
        }
    }

    pub fn scale(&self, c: &Scalar) -> AlgebraElement {
        let mut out = AlgebraElement::zero(self.field);
        out.add_scaled(c, self);
        out
    }

    pub fn add(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.check_field(other)?;
        let mut out = self.clone();
        out.add_scaled(&self.field.one(), other);
        Ok(out)
    }

    pub fn sub(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.check_field(other)?;
        let mut out = self.clone();
        out.add_scaled(&-self.field.one(), other);
        Ok(out)
    }

    pub fn neg(&self) -> AlgebraElement {
        self.scale(&-self.field.one())
    }

    fn check_field(&self, other: &AlgebraElement) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field, other.field));
        }
        Ok(())
    }

    /// Removes and returns the leading term.
    pub fn pop_leading(&mut self) -> Option<(Path, Scalar)> {
        self.terms.pop_last()
    }

    pub fn display(&self, quiver: &Quiver) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (p, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative_looking();
            let mag = if neg { -c } else { c.clone() };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if !mag.is_one() {
                out.push_str(&mag.to_string());
                out.push('*');
            }
            out.push_str(&quiver.path_to_string(p));
        }
        out
    }
}

/// Product in the free path algebra: bilinear extension of concatenation,
/// with non-composable pairs contributing zero.
pub fn free_multiply(x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement> {
    x.check_field(y)?;
    let mut out = AlgebraElement::zero(x.field);
    for (p, c) in &x.terms {
        for (q, d) in &y.terms {
            if let Some(pq) = p.compose(q) {
                out.add_term(&(c * d), pq);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> (Quiver, Field) {
        let q = Quiver::new(&["1", "2"], &[("a", "1", "1"), ("b", "1", "1"), ("c", "1", "2")]).unwrap();
        (q, Field::Rational)
    }

    fn el(q: &Quiver, f: Field, terms: &[(i64, &str)]) -> AlgebraElement {
        AlgebraElement::from_terms(f, terms.iter().map(|(c, p)| (f.from_i64(*c), q.parse_path(p).unwrap())))
    }

    #[test]
    fn multiply_examples() {
        let (q, f) = setup();
        let a = el(&q, f, &[(1, "a")]);
        let b = el(&q, f, &[(1, "b")]);
        let c = el(&q, f, &[(1, "c")]);
        assert_eq!(free_multiply(&a, &b).unwrap(), el(&q, f, &[(1, "a*b")]));
        let comm = el(&q, f, &[(1, "a*b"), (-1, "b*a")]);
        assert_eq!(free_multiply(&comm, &a).unwrap(), el(&q, f, &[(1, "a*b*a"), (-1, "b*a*a")]));
        assert!(free_multiply(&c, &a).unwrap().is_zero());
    }

    #[test]
    fn field_mismatch_is_an_error() {
        let (q, f) = setup();
        let a = el(&q, f, &[(1, "a")]);
        let b = el(&q, Field::Prime(2), &[(1, "b")]);
        assert!(matches!(free_multiply(&a, &b), Err(Error::FieldMismatch(..))));
    }

    #[test]
    fn no_zero_terms_and_degree() {
        let (q, f) = setup();
        let x = el(&q, f, &[(1, "a*b"), (-1, "a*b")]);
        assert!(x.is_zero());
        let y = el(&q, f, &[(2, "a*b"), (1, "b*c")]);
        assert_eq!(y.degree(), Some(2));
        assert_eq!(y.display(&q), "2*a*b + b*c");
        let z = el(&q, f, &[(1, "a"), (1, "b*c")]);
        assert_eq!(z.degree(), None);
        assert_eq!(z.leading().unwrap().0, &q.parse_path("b*c").unwrap());
    }
}
