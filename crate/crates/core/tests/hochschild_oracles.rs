//! Bar-complex cohomology against independent computations: the periodic
//! resolution of `K[x]/(x^d)`, the explicit resolution of the counterexample
//! algebra, centres and outer derivations; cochain-level identities.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use qhh::hochschild::{self, BarComplex, Cochain};
use qhh::linalg::{self, SparseVec};
use qhh::presentation::{self, Presentation};
use qhh::ring::finite_generation_probe;
use qhh::{xu, Field};

/// `dim HHⁿ(K[x]/(x^d))` from the 2-periodic resolution: the induced
/// cochain maps on `Hom(Λ^e, Λ) ≅ Λ` alternate between `f ↦ xf − fx` and
/// `f ↦ Σ xⁱ f x^{d−1−i}`.
fn periodic_oracle(f: Field, d: usize, max: usize) -> Vec<usize> {
    let alg = presentation::truncated_loop(f, d).finite_algebra().unwrap();
    let x = linalg::unit(f, alg.degree_range(1).start);
    let power = |k: usize| (0..k).fold(alg.one(), |acc, _| alg.mul(&acc, &x).unwrap());
    let dim = alg.dim();
    let odd_map: Vec<SparseVec> = (0..dim)
        .map(|j| {
            let e = linalg::unit(f, j);
            linalg::axpy(&alg.mul(&x, &e).unwrap(), &-f.one(), &alg.mul(&e, &x).unwrap())
        })
        .collect();
    let even_map: Vec<SparseVec> = (0..dim)
        .map(|j| {
            let e = linalg::unit(f, j);
            (0..d).fold(Vec::new(), |acc, i| {
                let t = alg.mul(&alg.mul(&power(i), &e).unwrap(), &power(d - 1 - i)).unwrap();
                linalg::axpy(&acc, &f.one(), &t)
            })
        })
        .collect();
    let rank = |m: &[SparseVec]| linalg::rank(f, m.iter());
    // δⁿ: Cⁿ → Cⁿ⁺¹ is the odd map for even n and the even map for odd n
    let delta_rank = |n: usize| if n.is_multiple_of(2) { rank(&odd_map) } else { rank(&even_map) };
    (0..=max).map(|n| dim - delta_rank(n) - if n == 0 { 0 } else { delta_rank(n - 1) }).collect()
}

#[test]
fn truncated_polynomials_match_the_periodic_resolution() {
    for f in [Field::Prime(2), Field::Prime(3), Field::Rational] {
        for d in [2, 3] {
            let alg = presentation::truncated_loop(f, d).finite_algebra().unwrap();
            assert_eq!(hochschild::hh_dims(&alg, 5).unwrap(), periodic_oracle(f, d, 5), "{f}, d = {d}");
        }
    }
}

#[test]
fn bar_complex_agrees_with_the_explicit_resolution() {
    for f in [Field::Prime(2), Field::Prime(3)] {
        let alg = presentation::xu(f).finite_algebra().unwrap();
        let bar = hochschild::hh_dims(&alg, 6).unwrap();
        assert_eq!(bar, xu::hh_dims_from_resolution(f, 6).unwrap(), "{f}");
    }
}

fn finite_builtins(f: Field) -> Vec<(String, Presentation)> {
    let mut out = vec![
        ("xu".to_string(), presentation::xu(f)),
        ("bgms".to_string(), presentation::bgms(f, f.from_i64(2))),
        ("loop-x2".to_string(), presentation::truncated_loop(f, 2)),
        ("truncated-loop(3)".to_string(), presentation::truncated_loop(f, 3)),
        ("truncated-cycle(3,2)".to_string(), presentation::truncated_cycle(f, 3, 2)),
        ("truncated-cycle(2,3)".to_string(), presentation::truncated_cycle(f, 2, 3)),
        ("lambda(1,1)".to_string(), presentation::lambda(f, 1, 1)),
        ("lambda(2,1)".to_string(), presentation::lambda(f, 2, 1)),
    ];
    out.extend(presentation::quadratic_monomial_samples(f).into_iter().map(|(id, p)| (id.to_string(), p)));
    out
}

#[test]
fn low_degrees_are_centre_and_outer_derivations() {
    for f in [Field::Prime(2), Field::Prime(3), Field::Rational] {
        for (id, p) in finite_builtins(f) {
            let alg = p.finite_algebra().unwrap();
            let dims = hochschild::hh_dims(&alg, 1).unwrap();
            assert_eq!(dims[0], hochschild::centre(&alg).len(), "{id} over {f}: HH⁰");
            assert_eq!(dims[1], hochschild::derivations_mod_inner(&alg).unwrap().quotient_dim(), "{id} over {f}: HH¹");
        }
    }
    let xu3 = presentation::xu(Field::Prime(3)).finite_algebra().unwrap();
    assert_eq!(hochschild::centre(&xu3).len(), 3);
}

fn random_cochain(cx: &BarComplex, n: usize, rng: &mut StdRng) -> Cochain {
    let f = cx.field();
    let len = cx.basis(n).len();
    let coords =
        linalg::from_pairs((0..len.min(12)).map(|_| (rng.gen_range(0..len), f.from_i64(rng.gen_range(-3..4)))));
    Cochain { degree: n, coords }
}

#[test]
fn coboundary_squares_to_zero_and_satisfies_leibniz() {
    let mut rng = StdRng::seed_from_u64(11);
    for f in [Field::Prime(3), Field::Rational] {
        for p in [presentation::xu(f), presentation::bgms(f, f.from_i64(2)), presentation::truncated_cycle(f, 2, 3)] {
            let alg = p.finite_algebra().unwrap();
            let mut cx = BarComplex::new(&alg).unwrap();
            cx.ensure_degree(5).unwrap();
            for _ in 0..6 {
                let m = rng.gen_range(0..=2);
                let n = rng.gen_range(0..=2);
                let a = random_cochain(&cx, m, &mut rng);
                let b = random_cochain(&cx, n, &mut rng);
                let da = cx.differential(&a).unwrap();
                assert!(cx.differential(&da).unwrap().coords.is_empty());
                // δ(a⌣b) = δa⌣b + (−1)^m a⌣δb
                let ab = cx.cup(&a, &b).unwrap();
                let lhs = cx.differential(&ab).unwrap();
                let db = cx.differential(&b).unwrap();
                let r1 = cx.cup(&da, &b).unwrap();
                let r2 = cx.cup(&a, &db).unwrap();
                let rhs = linalg::axpy(&r1.coords, &f.sign(m), &r2.coords);
                assert_eq!(lhs.coords, rhs);
            }
        }
    }
}

#[test]
fn cup_products_are_graded_commutative() {
    for f in [Field::Prime(2), Field::Prime(3), Field::Rational] {
        for p in [presentation::truncated_loop(f, 2), presentation::xu(f)] {
            let alg = p.finite_algebra().unwrap();
            let mut cx = BarComplex::new(&alg).unwrap();
            let ring = cx.ring_truncation(6).unwrap();
            let rep = ring.check_graded_commutativity();
            assert!(rep.passed(), "{f}: {rep:?}");
            assert!(rep.pairs_checked > 0);
        }
    }
}

#[test]
fn square_zero_loop_modulo_nilpotents() {
    for (f, dims, gens) in [
        (Field::Prime(2), vec![1; 7], vec![0, 1, 0, 0, 0, 0, 0]),
        (Field::Prime(3), vec![1, 0, 1, 0, 1, 0, 1], vec![0, 0, 1, 0, 0, 0, 0]),
    ] {
        let alg = presentation::truncated_loop(f, 2).finite_algebra().unwrap();
        let mut cx = BarComplex::new(&alg).unwrap();
        let ring = cx.ring_truncation(6).unwrap();
        let nil = ring.certify_nilpotence(&cx, 12);
        assert_eq!(nil.quotient_dims, dims, "{f}");
        assert_eq!(finite_generation_probe(&ring.ring, &nil).new_generators, gens, "{f}");
    }
}
