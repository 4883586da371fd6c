mod common;

use common::*;
use kgraph::composer::{insert, insert_sums};
use kgraph::leibniz::expand;
use kgraph::poisson::{eval_graph, eval_sum, PolyBivector};
use kgraph::poly::Poly;
use kgraph::*;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

fn args(rng: &mut impl Rng, count: usize) -> Vec<Poly<Rational>> {
    (0..count).map(|_| random_poly(rng, 3, 3, 3)).collect()
}

fn random_sum(rng: &mut impl Rng, m: usize, terms: usize) -> GraphSum<Rational> {
    let mut s = GraphSum::new(m);
    for _ in 0..terms {
        let n = rng.gen_range(0..=3);
        s.push_raw(
            &random_graph(rng, m, n),
            q(rng.gen_range(-3..=3), rng.gen_range(1..=3)),
        );
    }
    s
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn canonical_form_is_constant_on_orbits(seed in any::<u64>(), m in 1usize..=3, n in 0usize..=5) {
        prop_assume!(n == 0 || m + n >= 3);
        let mut r = rng(seed);
        let g = random_graph(&mut r, m, n);
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut r);
        let swaps: Vec<bool> = (0..n).map(|_| r.gen_bool(0.5)).collect();
        let h = g.relabel(&perm, &swaps);
        let (cg, ch) = (g.canonicalize(), h.canonicalize());
        prop_assert_eq!(&cg.graph, &ch.graph);
        prop_assert_eq!(cg.zero, ch.zero);
        if !cg.zero {
            prop_assert_eq!(cg.sign, ch.sign);
        }
        let again = cg.graph.canonicalize();
        prop_assert_eq!(&again.graph, &cg.graph);
        prop_assert_eq!(again.sign, 1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn reduce_is_idempotent_and_linear(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_sum(&mut r, 2, 8);
        let b = random_sum(&mut r, 2, 8);
        let c = q(r.gen_range(-5..=5), r.gen_range(1..=4));
        let ra = a.reduce();
        prop_assert!(ra.is_reduced());
        prop_assert_eq!(&ra.reduce(), &ra);
        let mut ab = a.clone();
        for (g, v) in b.iter() {
            ab.push_raw(g, v.clone());
        }
        prop_assert_eq!(ab.reduce(), ra.add(&b.reduce()).unwrap());
        prop_assert_eq!(a.scale(&c).reduce(), ra.scale(&c));
    }

    #[test]
    fn insert_is_bilinear(seed in any::<u64>(), slot in 0usize..2) {
        let mut r = rng(seed);
        let outer = random_sum(&mut r, 2, 4).reduce();
        let inner = random_sum(&mut r, 2, 4).reduce();
        let mut brute = GraphSum::new(3);
        for (a, ca) in outer.iter() {
            for (b, cb) in inner.iter() {
                brute.add_scaled(&insert(a, slot, b).unwrap(), &(ca.clone() * cb.clone()));
            }
        }
        prop_assert_eq!(insert_sums(&outer, slot, &inner).unwrap(), brute);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn evaluation_respects_canonical_signs(seed in any::<u64>(), m in 1usize..=3, n in 0usize..=3) {
        prop_assume!(n == 0 || m + n >= 3);
        let mut r = rng(seed);
        let p = bivector("quadratic.txt");
        let g = random_graph(&mut r, m, n);
        let a = args(&mut r, m);
        let direct = eval_graph(&g, &p, &a).unwrap();
        let c = g.canonicalize();
        let canonical = eval_graph(&c.graph, &p, &a).unwrap().scale(&q(c.sign as i64, 1));
        if c.zero {
            prop_assert!(direct.is_zero());
        } else {
            prop_assert_eq!(&direct, &canonical);
        }
        if n > 0 {
            let mut swaps = vec![false; n];
            swaps[r.gen_range(0..n)] = true;
            let identity: Vec<usize> = (0..n).collect();
            let mut t = g.relabel(&identity, &swaps);
            t = t.clone().with_sign(g.sign());
            prop_assert_eq!(eval_graph(&t, &p, &a).unwrap(), direct.scale(&q(-1, 1)));
        }
    }

    #[test]
    fn evaluation_is_multilinear(seed in any::<u64>(), n in 0usize..=3) {
        let mut r = rng(seed);
        let p = bivector("quadratic.txt");
        let g = random_graph(&mut r, 2, n);
        let a = args(&mut r, 2);
        let extra = random_poly(&mut r, 3, 3, 3);
        let c = q(r.gen_range(-3..=3), r.gen_range(1..=3));
        let slot = r.gen_range(0..2);
        let mut mixed = a.clone();
        mixed[slot] = a[slot].add(&extra.scale(&c));
        let mut other = a.clone();
        other[slot] = extra;
        let lhs = eval_graph(&g, &p, &mixed).unwrap();
        let rhs = eval_graph(&g, &p, &a)
            .unwrap()
            .add(&eval_graph(&g, &p, &other).unwrap().scale(&c));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn insertion_composes_operators(seed in any::<u64>(), slot in 0usize..2) {
        let mut r = rng(seed);
        let p = bivector("quadratic.txt");
        let n_outer = r.gen_range(0..=2);
        let n_inner = r.gen_range(0..=2);
        let outer = random_graph(&mut r, 2, n_outer);
        let inner = random_graph(&mut r, 2, n_inner);
        let a = args(&mut r, 3);
        let composed = eval_sum(&insert::<Rational>(&outer, slot, &inner).unwrap(), &p, &a).unwrap();
        let inside = eval_graph(&inner, &p, &a[slot..slot + 2]).unwrap();
        let mut outer_args = a[..slot].to_vec();
        outer_args.push(inside);
        outer_args.extend_from_slice(&a[slot + 2..]);
        prop_assert_eq!(composed, eval_graph(&outer, &p, &outer_args).unwrap());
    }
}

#[test]
fn zero_graphs_vanish_everywhere() {
    let mut zeros = Vec::new();
    let mut r = rng(7);
    while zeros.len() < 5 {
        let g = random_graph(&mut r, 2, 3);
        if g.is_zero_graph() {
            zeros.push(g);
        }
    }
    let p = bivector("quadratic.txt");
    for g in &zeros {
        let mut s = GraphSum::<Rational>::new(2);
        s.add_term(g, q(1, 1));
        assert!(s.is_empty(), "{}", g.to_brackets());
        let a = args(&mut r, 2);
        assert!(
            eval_graph(g, &p, &a).unwrap().is_zero(),
            "{}",
            g.to_brackets()
        );
    }
    let first = KGraph::from_brackets(2, "[01;01;23]").unwrap();
    assert!(first.is_zero_graph());
}

#[test]
fn poisson_fixtures_kill_expanded_leibniz_graphs() {
    let mut r = rng(11);
    for (name, vars) in [("symplectic.txt", 2), ("rotation.txt", 3)] {
        let p: PolyBivector<Rational> = bivector(name);
        assert!(p.is_poisson());
        for order in 2..=3 {
            for l in kgraph::leibniz::generate(order, 3).graphs() {
                let a: Vec<_> = (0..3).map(|_| random_poly(&mut r, vars, 4, 4)).collect();
                let e = eval_sum(&expand(l), &p, &a).unwrap();
                assert!(e.is_zero(), "{name} {}", l.to_brackets());
            }
        }
    }
}
