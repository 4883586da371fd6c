#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use kgraph::composer::{associator, insert, StarSeries};
use kgraph::leibniz::{expand, generate, LeibnizBasis};
use kgraph::linalg::Echelon;
use kgraph::poisson::PolyBivector;
use kgraph::poly::Poly;
use kgraph::*;

pub fn q(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

pub fn fixture(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub fn fixture_exists(name: &str) -> bool {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .exists()
}

pub fn star_table() -> WeightTable<KGraph, Rational> {
    WeightTable::parse(&fixture("star_weights.txt"), Convention::Multiplied).unwrap()
}

pub fn star(order: usize) -> StarSeries<Rational> {
    StarSeries::build(&star_table(), order).unwrap()
}

pub fn leibniz_table(name: &str) -> WeightTable<LGraph, Rational> {
    WeightTable::parse(&fixture(name), Convention::Multiplied).unwrap()
}

pub fn bivector(name: &str) -> PolyBivector<Rational> {
    PolyBivector::parse(&fixture(name)).unwrap()
}

pub fn poly(vars: usize, text: &str) -> Poly<Rational> {
    Poly::parse(vars, text).unwrap()
}

/// Every nonzero canonical graph with `m` sinks and `n` wedges, without
/// tadpoles or double edges.
pub fn all_graphs(m: usize, n: usize) -> Vec<KGraph> {
    let total = m + n;
    let pairs: Vec<Vec<[Label; 2]>> = (0..n)
        .map(|v| {
            let me = m + v;
            let mut p = Vec::new();
            for a in 0..total {
                for b in a + 1..total {
                    if a != me && b != me {
                        p.push([a as Label, b as Label]);
                    }
                }
            }
            p
        })
        .collect();
    let mut set = BTreeSet::new();
    let mut pick = vec![0usize; n];
    loop {
        let t: Vec<[Label; 2]> = pick.iter().enumerate().map(|(k, &i)| pairs[k][i]).collect();
        let c = KGraph::new(m, t, 1).unwrap().canonicalize();
        if !c.zero {
            set.insert(c.graph);
        }
        let mut k = 0;
        loop {
            if k == n {
                return set.into_iter().collect();
            }
            pick[k] += 1;
            if pick[k] < pairs[k].len() {
                break;
            }
            pick[k] = 0;
            k += 1;
        }
    }
}

/// Swaps the two sinks.
pub fn mirror(g: &KGraph) -> KGraph {
    let t: Vec<[Label; 2]> = g
        .targets()
        .iter()
        .map(|p| p.map(|v| if v < 2 { 1 - v } else { v }))
        .collect();
    KGraph::new(2, t, g.sign()).unwrap()
}

/// Connected components of the internal vertices, sinks shared.
pub fn components(g: &KGraph) -> Vec<KGraph> {
    let m = g.sinks();
    let n = g.internal();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    for (v, t) in g.targets().iter().enumerate() {
        for &x in t {
            let x = x as usize;
            if x >= m {
                let a = find(&mut parent, v);
                let b = find(&mut parent, x - m);
                parent[a] = b;
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in 0..n {
        let r = find(&mut parent, v);
        groups.entry(r).or_default().push(v);
    }
    groups
        .values()
        .map(|vs| {
            let t: Vec<[Label; 2]> = vs
                .iter()
                .map(|&v| {
                    g.targets()[v].map(|x| {
                        let x = x as usize;
                        if x < m {
                            x as Label
                        } else {
                            (m + vs.iter().position(|&w| w == x - m).unwrap()) as Label
                        }
                    })
                })
                .collect();
            KGraph::new(m, t, 1).unwrap()
        })
        .collect()
}

/// `B∘μ` and `μ∘B` terms through which a new top-order coefficient `B`
/// enters the associator.
pub fn hochschild(g: &KGraph) -> GraphSum<Rational> {
    let mu = KGraph::empty(2);
    let one = q(1, 1);
    let mut s = GraphSum::new(3);
    s.add_scaled(&insert(g, 0, &mu).unwrap(), &one);
    s.add_scaled(&insert(g, 1, &mu).unwrap(), &-one.clone());
    s.add_scaled(&insert(&mu, 0, g).unwrap(), &one);
    s.add_scaled(&insert(&mu, 1, g).unwrap(), &-one);
    s
}

pub struct Hbar4Constraints {
    pub basis: LeibnizBasis,
    pub star_unknowns: usize,
    pub rank: usize,
    pub consistent: bool,
    pub free_star: usize,
    pub free_leibniz: usize,
    /// Leibniz coefficients fixed by the constraints alone.
    pub forced: BTreeMap<LGraph, Rational>,
}

/// Treats every ħ⁴ star coefficient and every ħ⁴ Leibniz coefficient as
/// unknown and imposes: the factorization `A⁽⁴⁾ = Σ c_L expand(L)` with the
/// shipped ħ≤3 weights, the sink-swap symmetry `B(mirror Γ) = B(Γ)`, zero
/// weight for graphs missing a sink, and multiplicativity over components.
pub fn hbar4_constraints() -> Hbar4Constraints {
    let low = star(3);
    let lifted = StarSeries::from_sum(low.sum().clone(), 4).unwrap();
    let cross = associator(&lifted, 4).unwrap().homogeneous(4);
    let g4 = all_graphs(2, 4);
    let basis = generate(4, 3);
    let mut cols: Vec<GraphSum<Rational>> = g4.iter().map(hochschild).collect();
    for l in basis.graphs() {
        cols.push(expand::<Rational>(l).scale(&q(-1, 1)));
    }
    let n = cols.len();
    let mut index: BTreeMap<KGraph, usize> = BTreeMap::new();
    for c in &cols {
        for (g, _) in c.iter() {
            let next = index.len();
            index.entry(g.clone()).or_insert(next);
        }
    }
    for (g, _) in cross.iter() {
        let next = index.len();
        index.entry(g.clone()).or_insert(next);
    }
    let mut a = vec![vec![q(0, 1); n]; index.len()];
    let mut b = vec![q(0, 1); index.len()];
    for (j, c) in cols.iter().enumerate() {
        for (g, v) in c.iter() {
            a[index[g]][j] = v.clone();
        }
    }
    for (g, v) in cross.iter() {
        b[index[g]] = -v.clone();
    }
    let unit = |i: usize, s: Rational| {
        let mut row = vec![q(0, 1); n];
        row[i] = s;
        row
    };
    for (i, g) in g4.iter().enumerate() {
        let mg = mirror(g).canonicalize();
        if mg.zero {
            a.push(unit(i, q(1, 1)));
            b.push(q(0, 1));
        } else {
            let j = g4.binary_search(&mg.graph).unwrap();
            let mut row = unit(i, q(1, 1));
            row[j] = row[j].clone() - q(mg.sign as i64, 1);
            a.push(row);
            b.push(q(0, 1));
        }
        let fixed = if g.in_degrees()[..2].contains(&0) {
            Some(q(0, 1))
        } else {
            let comps = components(g);
            (comps.len() > 1).then(|| {
                let w = comps.iter().fold(q(1, 1), |w, c| {
                    w * low.sum().coefficient(c) * q(c.automorphism_count() as i64, 1)
                });
                w / q(g.automorphism_count() as i64, 1)
            })
        };
        if let Some(v) = fixed {
            a.push(unit(i, q(1, 1)));
            b.push(v);
        }
    }
    let e = Echelon::new(n, a, b);
    let free = e.free_columns();
    let nullspace = e.nullspace();
    let x = e.particular().unwrap_or_else(|| vec![q(0, 1); n]);
    let mut forced = BTreeMap::new();
    for (k, l) in basis.graphs().iter().enumerate() {
        let c = g4.len() + k;
        if nullspace.iter().all(|v| v[c] == q(0, 1)) {
            forced.insert(l.clone(), x[c].clone());
        }
    }
    Hbar4Constraints {
        star_unknowns: g4.len(),
        rank: e.rank(),
        consistent: e.is_consistent(),
        free_star: free.iter().filter(|&&c| c < g4.len()).count(),
        free_leibniz: free.iter().filter(|&&c| c >= g4.len()).count(),
        basis,
        forced,
    }
}

pub fn random_graph(rng: &mut impl rand::Rng, m: usize, n: usize) -> KGraph {
    let total = m + n;
    assert!(n == 0 || total >= 3, "no room for a wedge");
    let targets: Vec<[Label; 2]> = (0..n)
        .map(|v| {
            let me = m + v;
            loop {
                let a = rng.gen_range(0..total);
                let b = rng.gen_range(0..total);
                if a != b && a != me && b != me {
                    return [a as Label, b as Label];
                }
            }
        })
        .collect();
    KGraph::new(m, targets, if rng.gen_bool(0.5) { 1 } else { -1 }).unwrap()
}

/// A sum of at most `terms` monomials of total degree at most `degree` with
/// small integer coefficients.
pub fn random_poly(
    rng: &mut impl rand::Rng,
    vars: usize,
    degree: u32,
    terms: usize,
) -> Poly<Rational> {
    let mut p = Poly::zero(vars);
    for _ in 0..terms {
        let mut e = vec![0u32; vars];
        let d = rng.gen_range(0..=degree);
        for _ in 0..d {
            e[rng.gen_range(0..vars)] += 1;
        }
        p.add_term(e, q(rng.gen_range(-4..=4), 1));
    }
    p
}

pub fn rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}
