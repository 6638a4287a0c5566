use proptest::prelude::*;
use proptest::strategy::ValueTree;
use signlab::circle::{count_triples, count_triples_in_classes, lattice_count, lattice_count_naive, TripleSpec};
use signlab::graph::{build_graph, sample_profinite, IntegerModel, ResidueModel, SampleSeed};
use signlab::pattern::{match_pattern, SignField, SignPattern};
use signlab::primes::{is_prime, primes_up_to};
use signlab::sieve::{factor_oracle, sieve_mu, sieve_squarefree_w};

/// Free of `p²` for every prime `p ≤ w`, by trial division.
fn rough(v: i64, w: u64) -> bool {
    primes_up_to(w).iter().all(|&p| v % (p * p) as i64 != 0)
}

/// Direct enumeration over all three primes.
fn triples_oracle(spec: &TripleSpec) -> u64 {
    let x = spec.x as i64;
    let mut count = 0;
    for p1 in (x + 1..=3 * x).filter(|&p| is_prime(p as u64)) {
        for p2 in (5 * x + 1..=7 * x).filter(|&p| is_prime(p as u64)) {
            for p3 in (3 * x + 1..=5 * x).filter(|&p| is_prime(p as u64)) {
                if -p1 + p2 - p3 != spec.m {
                    continue;
                }
                let a = spec.shift;
                if !rough(a - p1, spec.w) || !rough(a - p1 + p2, spec.w) {
                    continue;
                }
                if let Some(c) = spec.classes {
                    let k2 = (c.k * c.k) as i64;
                    if (p1 - c.a1).rem_euclid(k2) != 0 || (p2 - c.a2).rem_euclid(k2) != 0 {
                        continue;
                    }
                }
                count += 1;
            }
        }
    }
    count
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn segments_concatenate(start in 1u64..1_000_000, a in 1u64..5000, b in 1u64..5000, w in 2u64..60) {
        let whole = sieve_squarefree_w(start, a + b, w).unwrap();
        let left = sieve_squarefree_w(start, a, w).unwrap();
        let right = sieve_squarefree_w(start + a, b, w).unwrap();
        for n in start..start + a + b {
            let part = if n < start + a { &left } else { &right };
            prop_assert_eq!(whole.mu(n), part.mu(n));
            prop_assert_eq!(whole.lambda(n), part.lambda(n));
            prop_assert_eq!(whole.squarefree_w(n), part.squarefree_w(n));
        }
    }

    #[test]
    fn sieve_agrees_with_factorization(start in 1u64..(1 << 40), len in 1u64..300) {
        let seg = sieve_mu(start, len).unwrap();
        for n in start..start + len {
            let f = factor_oracle(n).unwrap();
            prop_assert_eq!(seg.mu(n), f.mobius(), "mu({})", n);
            prop_assert_eq!(seg.lambda(n), f.liouville(), "lambda({})", n);
        }
    }

    #[test]
    fn lambda_is_completely_multiplicative(m in 1u64..1 << 20, n in 1u64..1 << 20) {
        let l = |v: u64| factor_oracle(v).unwrap().liouville();
        let seg = sieve_mu(m * n, 1).unwrap();
        prop_assert_eq!(seg.lambda(m * n), l(m) * l(n));
    }

    #[test]
    fn restriction_commutes_with_building(master: u64, trial in 0u64..1000, lo in -200i64..200, len in 1i64..200, cut in 0i64..200) {
        let hi = lo + len;
        let model = sample_profinite(500, 50, SampleSeed { master, trial }).unwrap();
        let full = build_graph(&model, (lo, hi)).unwrap();
        let (a, b) = (lo + cut.min(len), hi);
        prop_assert_eq!(full.restrict(a, b).unwrap(), build_graph(&model, (a, b)).unwrap());
    }

    #[test]
    fn edges_are_symmetric_with_odd_prime_gaps(master: u64, trial in 0u64..1000) {
        let model = sample_profinite(400, 50, SampleSeed { master, trial }).unwrap();
        let graph = build_graph(&model, (-100, 300)).unwrap();
        prop_assert!(graph.violations(&model).is_empty());
        for a in graph.vertices() {
            for e in graph.neighbours(a) {
                prop_assert!(e.gap % 2 == 1 && is_prime(e.gap));
                prop_assert_eq!(e.gap, e.to.abs_diff(a));
                prop_assert!(graph.neighbours(e.to).iter().any(|back| back.to == a));
                let lower = a.min(e.to);
                prop_assert!(model.divides(e.gap, lower));
            }
        }
    }

    #[test]
    fn integer_graph_edges_divide_shifted_values(n0 in 1u64..1 << 40) {
        let model = IntegerModel::new(n0, (0, 120)).unwrap();
        let graph = build_graph(&model, (0, 120)).unwrap();
        for (a, b, q) in graph.edges() {
            prop_assert_eq!((n0 as i64 + a.min(b)) % q as i64, 0);
            prop_assert!(factor_oracle(n0 + a as u64).unwrap().is_squarefree());
        }
    }

    #[test]
    fn pattern_matches_are_pointwise(start in 1u64..1 << 30, expr in "[+*-]{0,3}\\^[+-][+*-]{0,3}") {
        let pattern: SignPattern = expr.parse().unwrap();
        let (left, right) = (pattern.left(), pattern.right());
        let seg = sieve_mu(start, 600 + left + right).unwrap();
        let window = (start + left, start + left + 599);
        let hits = match_pattern(&seg, window, &pattern, SignField::Lambda).unwrap();
        for n in window.0..=window.1 {
            let want = n > left
                && pattern.symbols().iter().enumerate().all(|(i, s)| {
                    let v = factor_oracle(n + i as u64 - left).unwrap().liouville();
                    match s {
                        signlab::pattern::Symbol::Plus => v == 1,
                        signlab::pattern::Symbol::Minus => v == -1,
                        signlab::pattern::Symbol::Any => true,
                    }
                });
            prop_assert_eq!(hits.binary_search(&n).is_ok(), want, "n = {}", n);
        }
    }

    #[test]
    fn lattice_closed_form(x in 1u64..30, m in -100i64..100) {
        prop_assert_eq!(lattice_count(m, x), lattice_count_naive(m, x));
    }
}

#[test]
fn triple_counts_match_enumeration() {
    let mut runner = proptest::test_runner::TestRunner::deterministic();
    let strategy = (1u64..=200, 0i64..=400, -300i64..300, 1u64..20);
    for _ in 0..20 {
        let (x, m, shift, w) = strategy.new_tree(&mut runner).unwrap().current();
        let x_i = x as i64;
        let m = m % (2 * x_i + 1) - x_i;
        let m = if m % 2 != 0 { m } else if m < x_i { m + 1 } else { m - 1 };
        let spec = TripleSpec::new(x, m, shift, w).unwrap();
        assert_eq!(count_triples(&spec).unwrap(), triples_oracle(&spec), "{spec:?}");
        let classed = spec.with_classes(3, 1, 2).unwrap();
        assert_eq!(count_triples_in_classes(&classed).unwrap(), triples_oracle(&classed), "{classed:?}");
    }
}

#[test]
fn documented_pattern_examples() {
    let seg = sieve_mu(1, 100).unwrap();
    let hits = |expr: &str| {
        let p: SignPattern = expr.parse().unwrap();
        match_pattern(&seg, (1, 40), &p, SignField::Lambda).unwrap()
    };
    // λ: 1 -1 -1 1 -1 1 -1 -1 1 1 -1 -1 -1 1 1 1 -1 -1 -1 -1
    assert_eq!(&hits("^+-")[..3], &[1, 4, 6]);
    assert_eq!(&hits("-^-")[..2], &[3, 8]);
    let sf: SignPattern = "^++".parse().unwrap();
    let pairs = match_pattern(&seg, (1, 20), &sf, SignField::Squarefree).unwrap();
    assert_eq!(pairs, vec![1, 2, 5, 6, 10, 13, 14]);
}
