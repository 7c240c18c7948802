//! The recursive sets ℛⁿ against a brute-force scan of all paths for greedy
//! maximal overlap chains.

use qhh::monomial::{self, ApSets, StackedVerdict};
use qhh::presentation::{self, Presentation};
use qhh::{enumerate_paths, Field, Path};

/// Occurrences `[start, end)` of relations inside `w`.
fn occurrences(w: &Path, rho: &[Path]) -> Vec<(usize, usize)> {
    let a = w.arrows();
    let mut out = Vec::new();
    for r in rho {
        let b = r.arrows();
        for s in 0..=a.len().saturating_sub(b.len()) {
            if a.len() >= b.len() && a[s..s + b.len()] == *b {
                out.push((s, s + b.len()));
            }
        }
    }
    out
}

/// Number of relations in the chain of `w`, if `w` is exactly covered by a
/// greedy maximal overlap chain starting at its first letter: each next
/// relation starts inside the current one, not before the end of the one
/// before, and ends as early as possible.
fn chain_length(w: &Path, rho: &[Path]) -> Option<usize> {
    let occ = occurrences(w, rho);
    let (mut s, mut e) = *occ.iter().filter(|o| o.0 == 0).min_by_key(|o| o.1)?;
    let mut prev_end = 0;
    let mut count = 1;
    loop {
        let lo = (s + 1).max(prev_end);
        let next = occ.iter().filter(|o| o.0 >= lo && o.0 < e && o.1 > e).min_by_key(|o| o.1);
        match next {
            Some(&(s2, e2)) => {
                prev_end = e;
                s = s2;
                e = e2;
                count += 1;
            }
            None => break,
        }
    }
    (e == w.len()).then_some(count)
}

fn brute_force(p: &Presentation, n: usize, max_len: usize) -> Vec<Vec<Path>> {
    let rho = p.monomial_relations().unwrap();
    let q = &p.quiver;
    let mut levels = vec![Vec::new(); n + 1];
    levels[0] = enumerate_paths(q, 0);
    if n >= 1 {
        levels[1] = enumerate_paths(q, 1);
    }
    for len in 2..=max_len {
        for w in enumerate_paths(q, len) {
            if let Some(k) = chain_length(&w, &rho) {
                if k < n {
                    levels[k + 1].push(w);
                }
            }
        }
    }
    for l in &mut levels {
        l.sort();
    }
    levels
}

fn compare(id: &str, p: &Presentation, n: usize) -> ApSets {
    let rho = p.monomial_relations().unwrap();
    let longest = rho.iter().map(Path::len).max().unwrap();
    // each further relation in a chain adds at most `longest − 1` letters
    let max_len = longest + n.saturating_sub(2) * (longest - 1);
    let sets = ApSets::from_presentation(p, n).unwrap();
    let oracle = brute_force(p, n, max_len);
    for (k, expected) in oracle.iter().enumerate() {
        let mut got: Vec<Path> = sets.paths(k).into_iter().cloned().collect();
        got.sort();
        assert_eq!(&got, expected, "{id}: degree {k}");
    }
    sets
}

#[test]
fn quadratic_monomial_samples_are_two_one_stacked() {
    let f = Field::Prime(2);
    for (id, p) in presentation::quadratic_monomial_samples(f) {
        let sets = compare(id, &p, 7);
        match monomial::is_da_stacked(&sets, 7) {
            StackedVerdict::Stacked { d: 2, a, certified_to: 7 } => {
                assert!(a == Some(1) || (a.is_none() && sets.paths(3).is_empty()), "{id}: A = {a:?}");
            }
            other => panic!("{id}: {other:?}"),
        }
    }
}

#[test]
fn truncated_loops_are_d_one_stacked() {
    for d in [3, 4] {
        let p = presentation::truncated_loop(Field::Rational, d);
        let sets = compare("loop", &p, 7);
        assert_eq!(monomial::is_da_stacked(&sets, 7), StackedVerdict::Stacked { d, a: Some(1), certified_to: 7 });
    }
}

#[test]
fn cycles_and_mixed_lengths() {
    let f = Field::Prime(3);
    compare("cycle(3,2)", &presentation::truncated_cycle(f, 3, 2), 6);
    compare("cycle(2,3)", &presentation::truncated_cycle(f, 2, 3), 6);
    let q = qhh::Quiver::new(&["1"], &[("a", "1", "1"), ("b", "1", "1")]).unwrap();
    let p = Presentation::parse_relations(f, q, &["a*a", "b*a*b"]).unwrap();
    let sets = compare("mixed", &p, 6);
    assert!(matches!(monomial::is_da_stacked(&sets, 6), StackedVerdict::Violation { .. }));
}

#[test]
fn ext_of_square_zero_loop() {
    let p = presentation::truncated_loop(Field::Prime(2), 2);
    let sets = ApSets::from_presentation(&p, 7).unwrap();
    for n in 0..=7 {
        assert_eq!(monomial::ext_table(&sets, n), vec![vec![1]]);
    }
}
