//! Degree-truncated noncommutative rewriting in path algebras.
//!
//! Each relation is oriented so that its largest monomial (length, then
//! lexicographic in arrow order) rewrites to the remaining terms. Completion
//! resolves overlap ambiguities up to a fixed path length; it never attempts
//! to produce an unbounded Gröbner basis.

use std::collections::HashMap;
use std::sync::Arc;

use crate::element::AlgebraElement;
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::quiver::{ArrowIdx, Path, Quiver};

/// `lead → tail`, i.e. the relation `lead - tail`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteRule {
    pub lead: Path,
    pub tail: AlgebraElement,
}

impl RewriteRule {
    pub fn as_relation(&self) -> AlgebraElement {
        let mut r = self.tail.neg();
        r.add_term(&self.tail.field().one(), self.lead.clone());
        r
    }
}

/// Limits guarding completion against runaway growth.
#[derive(Clone, Copy, Debug)]
pub struct CompletionLimits {
    pub max_rules: usize,
    /// Numerator plus denominator bit size of any rational coefficient.
    pub max_coefficient_bits: u64,
}

impl Default for CompletionLimits {
    fn default() -> Self {
        CompletionLimits { max_rules: 20_000, max_coefficient_bits: 4096 }
    }
}

/// Rules indexed by lead word for subpath matching.
#[derive(Clone, Debug)]
struct RuleIndex {
    by_lead: HashMap<Vec<ArrowIdx>, usize>,
    lengths: Vec<usize>,
}

impl RuleIndex {
    fn new(rules: &[RewriteRule]) -> RuleIndex {
        let mut by_lead = HashMap::new();
        let mut lengths = Vec::new();
        for (i, r) in rules.iter().enumerate() {
            by_lead.insert(r.lead.arrows().to_vec(), i);
            lengths.push(r.lead.len());
        }
        lengths.sort_unstable();
        lengths.dedup();
        RuleIndex { by_lead, lengths }
    }

    /// Leftmost occurrence of any lead, as `(position, rule)`.
    fn first_match(&self, p: &Path) -> Option<(usize, usize)> {
        let w = p.arrows();
        for start in 0..w.len() {
            for &l in &self.lengths {
                if start + l > w.len() {
                    break;
                }
                if let Some(&r) = self.by_lead.get(&w[start..start + l]) {
                    return Some((start, r));
                }
            }
        }
        None
    }

    fn all_matches(&self, p: &Path) -> Vec<(usize, usize)> {
        let w = p.arrows();
        let mut out = Vec::new();
        for start in 0..w.len() {
            for &l in &self.lengths {
                if start + l > w.len() {
                    break;
                }
                if let Some(&r) = self.by_lead.get(&w[start..start + l]) {
                    out.push((start, r));
                }
            }
        }
        out
    }

    /// True when some lead is a suffix of `w`.
    fn suffix_match(&self, w: &[ArrowIdx]) -> bool {
        self.lengths.iter().take_while(|&&l| l <= w.len()).any(|&l| self.by_lead.contains_key(&w[w.len() - l..]))
    }
}

/// An oriented, inter-reduced generating set of an admissible ideal.
#[derive(Clone, Debug)]
pub struct RewriteSystem {
    quiver: Arc<Quiver>,
    field: Field,
    relations: Vec<AlgebraElement>,
    rules: Vec<RewriteRule>,
    index: RuleIndex,
    degree_bound: usize,
    confluent_up_to: usize,
}

impl RewriteSystem {
    /// Orients and inter-reduces the given relations. Every monomial must have
    /// length at least two and all monomials of a relation must be parallel.
    pub fn new(quiver: Arc<Quiver>, field: Field, relations: Vec<AlgebraElement>) -> Result<RewriteSystem> {
        for r in &relations {
            if r.field() != field {
                return Err(Error::FieldMismatch(field, r.field()));
            }
            check_admissible(&quiver, r)?;
        }
        let rules = interreduce(relations.clone());
        let monomial = rules.iter().all(|r| r.tail.is_zero());
        let degree_bound = rules.iter().map(|r| r.lead.len()).max().unwrap_or(0);
        let index = RuleIndex::new(&rules);
        Ok(RewriteSystem {
            quiver,
            field,
            relations,
            rules,
            index,
            degree_bound,
            // overlaps of monomial rules resolve identically
            confluent_up_to: if monomial { usize::MAX } else { 0 },
        })
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.quiver
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rules(&self) -> &[RewriteRule] {
        &self.rules
    }

    /// The relations the system was built from, before orientation.
    pub fn relations(&self) -> &[AlgebraElement] {
        &self.relations
    }

    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    pub fn confluent_up_to(&self) -> usize {
        self.confluent_up_to
    }

    pub fn is_monomial(&self) -> bool {
        self.rules.iter().all(|r| r.tail.is_zero())
    }

    /// Every rule's tail has the lead's length.
    pub fn is_homogeneous(&self) -> bool {
        self.rules.iter().all(|r| r.tail.terms().all(|(p, _)| p.len() == r.lead.len()))
    }

    /// Every rule's tail monomials use each arrow as often as the lead does,
    /// so the quotient is graded by arrow multiplicities.
    pub fn is_multihomogeneous(&self) -> bool {
        let n = self.quiver.num_arrows();
        self.rules.iter().all(|r| {
            let c = r.lead.content(n);
            r.tail.terms().all(|(p, _)| p.content(n) == c)
        })
    }

    pub fn is_reducible(&self, p: &Path) -> bool {
        self.index.first_match(p).is_some()
    }

    fn check_bound(&self, x: &AlgebraElement) -> Result<()> {
        let l = x.max_len();
        if l > self.degree_bound && !self.is_monomial() {
            return Err(Error::DegreeOverflow { length: l, bound: self.degree_bound });
        }
        Ok(())
    }

    /// The unique reduced representative of `x` modulo the ideal.
    pub fn normal_form(&self, x: &AlgebraElement) -> Result<AlgebraElement> {
        if x.field() != self.field {
            return Err(Error::FieldMismatch(self.field, x.field()));
        }
        self.check_bound(x)?;
        Ok(reduce_with(&self.rules, &self.index, x))
    }

    /// Normal form of a single path, without bound checks.
    pub(crate) fn reduce_path(&self, p: Path) -> AlgebraElement {
        reduce_with(&self.rules, &self.index, &AlgebraElement::from_path(self.field, p))
    }

    /// Reduces in an order dictated by `choose(n)`, which must return an index
    /// below `n`. It picks first the term to rewrite and then the occurrence.
    pub fn normal_form_by<F: FnMut(usize) -> usize>(
        &self,
        x: &AlgebraElement,
        mut choose: F,
    ) -> Result<AlgebraElement> {
        self.check_bound(x)?;
        let mut cur = x.clone();
        loop {
            let reducible: Vec<(Path, Scalar, Vec<(usize, usize)>)> = cur
                .terms()
                .filter_map(|(p, c)| {
                    let m = self.index.all_matches(p);
                    (!m.is_empty()).then(|| (p.clone(), c.clone(), m))
                })
                .collect();
            if reducible.is_empty() {
                return Ok(cur);
            }
            let (p, c, matches) = &reducible[choose(reducible.len()) % reducible.len()];
            let (pos, r) = matches[choose(matches.len()) % matches.len()];
            cur.add_term(&-c, p.clone());
            apply_rule(&self.rules[r], p, pos, c, &mut cur);
        }
    }

    /// Resolves all overlap ambiguities whose combined length is at most
    /// `bound`, adding and inter-reducing rules until none remain.
    pub fn complete(&self, bound: usize) -> Result<RewriteSystem> {
        self.complete_with(bound, CompletionLimits::default())
    }

    pub fn complete_with(&self, bound: usize, limits: CompletionLimits) -> Result<RewriteSystem> {
        let mut rules = self.rules.clone();
        loop {
            let index = RuleIndex::new(&rules);
            let mut fresh = Vec::new();
            for ri in rules.iter() {
                for rj in rules.iter() {
                    for s in overlap_s_polynomials(self.field, ri, rj, bound) {
                        let s = reduce_with(&rules, &index, &s);
                        if !s.is_zero() {
                            fresh.push(s);
                        }
                    }
                }
            }
            if fresh.is_empty() {
                break;
            }
            let mut polys: Vec<AlgebraElement> = rules.iter().map(RewriteRule::as_relation).collect();
            polys.extend(fresh);
            rules = interreduce(polys);
            if rules.len() > limits.max_rules {
                return Err(Error::CompletionLimit(format!("more than {} rules", limits.max_rules)));
            }
            if let Some(bits) = rules.iter().flat_map(|r| r.tail.terms().map(|(_, c)| c.height_bits())).max() {
                if bits > limits.max_coefficient_bits {
                    return Err(Error::CompletionLimit(format!(
                        "coefficient of {bits} bits exceeds the limit of {}",
                        limits.max_coefficient_bits
                    )));
                }
            }
        }
        let index = RuleIndex::new(&rules);
        let monomial = rules.iter().all(|r| r.tail.is_zero());
        Ok(RewriteSystem {
            quiver: self.quiver.clone(),
            field: self.field,
            relations: self.relations.clone(),
            rules,
            index,
            degree_bound: bound.max(self.degree_bound),
            confluent_up_to: if monomial { usize::MAX } else { bound },
        })
    }

    fn check_graded(&self, n: usize) -> Result<()> {
        if !self.is_homogeneous() {
            return Err(Error::NotHomogeneous("per-degree bases need homogeneous relations".into()));
        }
        if n > self.confluent_up_to {
            return Err(Error::NotConfluent { requested: n, certified: self.confluent_up_to });
        }
        Ok(())
    }

    /// Irreducible paths of each length `0..=n`.
    pub fn basis_up_to(&self, n: usize) -> Result<Vec<Vec<Path>>> {
        self.check_graded(n)?;
        let q = &self.quiver;
        let mut out: Vec<Vec<Path>> = vec![(0..q.num_vertices() as u32).map(Path::trivial).collect()];
        if n == 0 {
            return Ok(out);
        }
        let mut layer: Vec<Path> = (0..q.num_arrows() as ArrowIdx).map(|a| q.arrow_path(a)).collect();
        layer.retain(|p| !self.index.suffix_match(p.arrows()));
        out.push(layer);
        for _ in 2..=n {
            let prev = out.last().unwrap();
            let mut next = Vec::new();
            for p in prev {
                for (a, info) in q.arrows().iter().enumerate() {
                    if info.origin != p.tail() {
                        continue;
                    }
                    let mut w = p.arrows().to_vec();
                    w.push(a as ArrowIdx);
                    if !self.index.suffix_match(&w) {
                        next.push(Path::from_parts(p.origin(), info.tail, w));
                    }
                }
            }
            next.sort();
            out.push(next);
        }
        Ok(out)
    }

    /// Decides finiteness from the basis up to degree `n`.
    pub fn is_finite_dimensional(&self, n: usize) -> Result<FiniteVerdict> {
        let basis = self.basis_up_to(n)?;
        match basis.iter().skip(1).position(Vec::is_empty) {
            Some(i) => {
                let top = i; // slots 0..=i are nonempty, slot i+1 empty
                let dim = basis[..=top].iter().map(Vec::len).sum();
                Ok(FiniteVerdict::Finite { dim, top_degree: top })
            }
            None => Ok(FiniteVerdict::Inconclusive { degree: n, basis_at_degree: basis[n].len() }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FiniteVerdict {
    Finite { dim: usize, top_degree: usize },
    Inconclusive { degree: usize, basis_at_degree: usize },
}

fn check_admissible(quiver: &Quiver, r: &AlgebraElement) -> Result<()> {
    let mut ends = None;
    for (p, _) in r.terms() {
        if p.len() < 2 {
            return Err(Error::NotAdmissible(format!("`{}` has a monomial of length {}", r.display(quiver), p.len())));
        }
        match ends {
            None => ends = Some((p.origin(), p.tail())),
            Some(e) if e != (p.origin(), p.tail()) => {
                return Err(Error::NotAdmissible(format!("`{}` mixes non-parallel paths", r.display(quiver))));
            }
            _ => {}
        }
    }
    Ok(())
}

/// Orients a nonzero relation so that its leading monomial becomes the lead.
fn orient(mut r: AlgebraElement) -> RewriteRule {
    let (lead, c) = r.pop_leading().expect("orienting a zero relation");
    let k = -c.inv();
    RewriteRule { lead, tail: r.scale(&k) }
}

/// Replaces the occurrence of `rule.lead` at `pos` inside `p` (carrying
/// coefficient `c`) by the rule's tail, accumulating into `acc`.
fn apply_rule(rule: &RewriteRule, p: &Path, pos: usize, c: &Scalar, acc: &mut AlgebraElement) {
    let w = p.arrows();
    let l = rule.lead.len();
    for (q, d) in rule.tail.terms() {
        let mut arrows = Vec::with_capacity(w.len() - l + q.len());
        arrows.extend_from_slice(&w[..pos]);
        arrows.extend_from_slice(q.arrows());
        arrows.extend_from_slice(&w[pos + l..]);
        let origin = if pos == 0 { q.origin() } else { p.origin() };
        let tail = if pos + l == w.len() { q.tail() } else { p.tail() };
        let np = if arrows.is_empty() { Path::trivial(origin) } else { Path::from_parts(origin, tail, arrows) };
        acc.add_term(&(c * d), np);
    }
}

fn reduce_with(rules: &[RewriteRule], index: &RuleIndex, x: &AlgebraElement) -> AlgebraElement {
    let mut rem = x.clone();
    let mut out = AlgebraElement::zero(x.field());
    while let Some((p, c)) = rem.pop_leading() {
        match index.first_match(&p) {
            Some((pos, r)) => apply_rule(&rules[r], &p, pos, &c, &mut rem),
            None => out.add_term(&c, p),
        }
    }
    out
}

/// S-polynomials of the proper overlaps where a suffix of `ri.lead` equals a
/// prefix of `rj.lead` and the overlap word has length at most `bound`.
fn overlap_s_polynomials(field: Field, ri: &RewriteRule, rj: &RewriteRule, bound: usize) -> Vec<AlgebraElement> {
    let a = ri.lead.arrows();
    let b = rj.lead.arrows();
    let mut out = Vec::new();
    for k in 1..a.len().min(b.len()) {
        if a.len() + b.len() - k > bound {
            continue;
        }
        if a[a.len() - k..] != b[..k] {
            continue;
        }
        // lead_i = A X, lead_j = X B; S = tail_i B - A tail_j
        let prefix = &a[..a.len() - k];
        let suffix = &b[k..];
        let mut s = AlgebraElement::zero(field);
        for (q, d) in ri.tail.terms() {
            let mut w = q.arrows().to_vec();
            w.extend_from_slice(suffix);
            s.add_term(d, Path::from_parts(q.origin(), rj.lead.tail(), w));
        }
        for (q, d) in rj.tail.terms() {
            let mut w = prefix.to_vec();
            w.extend_from_slice(q.arrows());
            s.add_term(&-d, Path::from_parts(ri.lead.origin(), q.tail(), w));
        }
        out.push(s);
    }
    out
}

/// Builds an inter-reduced rule set spanning the same ideal as `polys`:
/// no lead contains another and no tail term is reducible.
fn interreduce(polys: Vec<AlgebraElement>) -> Vec<RewriteRule> {
    let mut pending: Vec<AlgebraElement> = polys.into_iter().filter(|p| !p.is_zero()).collect();
    loop {
        pending.sort_by(|x, y| x.leading().unwrap().0.cmp(y.leading().unwrap().0));
        let mut rules: Vec<RewriteRule> = Vec::new();
        let mut out_of_order = false;
        for p in pending {
            let index = RuleIndex::new(&rules);
            let r = reduce_with(&rules, &index, &p);
            if r.is_zero() {
                continue;
            }
            let rule = orient(r);
            if rules.last().is_some_and(|last| rule.lead <= last.lead) {
                out_of_order = true;
            }
            rules.push(rule);
        }
        if !out_of_order {
            return rules;
        }
        pending = rules.iter().map(RewriteRule::as_relation).collect();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn xu_system(field: Field) -> RewriteSystem {
        let q = Arc::new(Quiver::new(&["1", "2"], &[("a", "1", "1"), ("b", "1", "1"), ("c", "1", "2")]).unwrap());
        let rel = |terms: &[(i64, &str)]| {
            AlgebraElement::from_terms(field, terms.iter().map(|(c, p)| (field.from_i64(*c), q.parse_path(p).unwrap())))
        };
        let rels = vec![rel(&[(1, "a*a")]), rel(&[(1, "b*b")]), rel(&[(1, "a*b"), (-1, "b*a")]), rel(&[(1, "a*c")])];
        RewriteSystem::new(q, field, rels).unwrap()
    }

    fn names(q: &Quiver, ps: &[Path]) -> Vec<String> {
        ps.iter().map(|p| q.path_to_string(p)).collect()
    }

    #[test]
    fn orientation_puts_largest_monomial_first() {
        let sys = xu_system(Field::Rational);
        let q = sys.quiver().clone();
        let leads: Vec<_> = sys.rules().iter().map(|r| q.path_to_string(&r.lead)).collect();
        assert_eq!(leads, ["a*a", "a*c", "b*a", "b*b"]);
    }

    #[test]
    fn xu_completion_adds_only_abc() {
        let sys = xu_system(Field::Rational).complete(4).unwrap();
        let q = sys.quiver().clone();
        let leads: Vec<_> = sys.rules().iter().map(|r| q.path_to_string(&r.lead)).collect();
        assert_eq!(leads, ["a*a", "a*c", "b*a", "b*b", "a*b*c"]);
        assert!(sys.rules()[4].tail.is_zero());
    }

    #[test]
    fn xu_normal_forms() {
        let f = Field::Prime(3);
        let sys = xu_system(f).complete(4).unwrap();
        let q = sys.quiver().clone();
        let p = |s: &str| AlgebraElement::from_path(f, q.parse_path(s).unwrap());
        assert_eq!(sys.normal_form(&p("b*a")).unwrap(), p("a*b"));
        assert!(sys.normal_form(&p("a*a")).unwrap().is_zero());
        assert!(sys.normal_form(&p("a*b*c")).unwrap().is_zero());
        assert!(sys.normal_form(&p("b*a*c")).unwrap().is_zero());
        assert!(matches!(sys.normal_form(&p("a*b*a*b*a")), Err(Error::DegreeOverflow { .. })));
    }

    #[test]
    fn xu_basis() {
        let sys = xu_system(Field::Prime(2)).complete(4).unwrap();
        let q = sys.quiver().clone();
        let b = sys.basis_up_to(3).unwrap();
        assert_eq!(names(&q, &b[0]), ["e_1", "e_2"]);
        assert_eq!(names(&q, &b[1]), ["a", "b", "c"]);
        assert_eq!(names(&q, &b[2]), ["a*b", "b*c"]);
        assert!(b[3].is_empty());
        assert_eq!(sys.is_finite_dimensional(4).unwrap(), FiniteVerdict::Finite { dim: 7, top_degree: 2 });
    }

    #[test]
    fn uncompleted_system_refuses_basis() {
        let sys = xu_system(Field::Prime(2));
        assert!(matches!(sys.basis_up_to(3), Err(Error::NotConfluent { .. })));
    }

    #[test]
    fn free_loop_is_inconclusive() {
        let q = Arc::new(Quiver::new(&["1"], &[("x", "1", "1")]).unwrap());
        let sys = RewriteSystem::new(q, Field::Rational, vec![]).unwrap();
        assert_eq!(
            sys.is_finite_dimensional(5).unwrap(),
            FiniteVerdict::Inconclusive { degree: 5, basis_at_degree: 1 }
        );
    }

    #[test]
    fn truncated_polynomial_is_finite() {
        let f = Field::Rational;
        let q = Arc::new(Quiver::new(&["1"], &[("x", "1", "1")]).unwrap());
        let rel = AlgebraElement::from_path(f, q.parse_path("x*x").unwrap());
        let sys = RewriteSystem::new(q, f, vec![rel]).unwrap();
        assert_eq!(sys.is_finite_dimensional(3).unwrap(), FiniteVerdict::Finite { dim: 2, top_degree: 1 });
    }

    #[test]
    fn inadmissible_relations_rejected() {
        let f = Field::Rational;
        let q = Arc::new(Quiver::new(&["1", "2"], &[("a", "1", "1"), ("c", "1", "2")]).unwrap());
        let lin = AlgebraElement::from_path(f, q.parse_path("a").unwrap());
        assert!(matches!(RewriteSystem::new(q.clone(), f, vec![lin]), Err(Error::NotAdmissible(_))));
        let mixed = AlgebraElement::from_terms(
            f,
            [(f.one(), q.parse_path("a*a").unwrap()), (f.one(), q.parse_path("a*c").unwrap())],
        );
        assert!(matches!(RewriteSystem::new(q, f, vec![mixed]), Err(Error::NotAdmissible(_))));
    }

    #[test]
    fn inclusion_ambiguity_removed_by_interreduction() {
        let f = Field::Rational;
        let q = Arc::new(Quiver::new(&["1"], &[("x", "1", "1")]).unwrap());
        let x2 = AlgebraElement::from_path(f, q.parse_path("x*x").unwrap());
        let x3 = AlgebraElement::from_path(f, q.parse_path("x*x*x").unwrap());
        let sys = RewriteSystem::new(q, f, vec![x3, x2]).unwrap();
        assert_eq!(sys.rules().len(), 1);
        assert_eq!(sys.rules()[0].lead.len(), 2);
    }
}
