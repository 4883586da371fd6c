//! Leibniz graphs: expansion of the Jacobiator vertex into wedges and
//! generation of all Leibniz graphs at a given order.

use std::collections::BTreeSet;

use crate::graph::{KGraph, LGraph, Label, TripleMode};
use crate::scalar::Scalar;
use crate::series::GraphSum;

/// The tripod `[012]`, i.e. `Jac(P)(f, g, h)`.
pub fn tripod() -> LGraph {
    LGraph::new(3, Vec::new(), [0, 1, 2], 1).expect("valid tripod")
}

/// Calls `emit` for each Kontsevich graph in the expansion of `l`, before
/// reduction. With `(a, b, c)` the Jacobiator targets and `J` its label, each
/// cyclic shift `(x, y, z)` yields `J → (x, y)` and `J+1 → (J, z)`, and every
/// edge into `J` is re-aimed at `J` or `J+1`. That gives
/// `3 · 2^indeg(J)` terms.
pub fn for_each_expansion_term(l: &LGraph, mut emit: impl FnMut(KGraph)) {
    let m = l.sinks();
    let j = l.jacobiator_vertex() as Label;
    let [a, b, c] = l.jacobiator();
    let mut holes: Vec<(usize, usize)> = Vec::new();
    for (k, t) in l.wedges().iter().enumerate() {
        for side in 0..2 {
            if t[side] == j {
                holes.push((k, side));
            }
        }
    }
    let mut targets: Vec<[Label; 2]> = l.wedges().to_vec();
    targets.push([0, 0]);
    targets.push([j, 0]);
    let w = l.wedges().len();
    for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
        targets[w] = [x, y];
        targets[w + 1] = [j, z];
        for mask in 0u32..(1 << holes.len()) {
            for (h, &(row, side)) in holes.iter().enumerate() {
                targets[row][side] = if mask >> h & 1 == 1 { j + 1 } else { j };
            }
            emit(KGraph::from_parts(m, targets.clone(), l.sign()));
        }
    }
    debug_assert!(m + w + 2 <= Label::MAX as usize);
}

/// The unreduced expansion as a term list.
pub fn expansion_terms(l: &LGraph) -> Vec<KGraph> {
    let mut out = Vec::new();
    for_each_expansion_term(l, |g| out.push(g));
    out
}

/// The reduced expansion of `l` into Kontsevich graphs.
pub fn expand<C: Scalar>(l: &LGraph) -> GraphSum<C> {
    let mut out = GraphSum::new(l.sinks());
    for_each_expansion_term(l, |g| out.add_term(&g, C::one()));
    out
}

/// `Σ c_L · expand(L)`.
pub fn expand_sum<'a, C: Scalar>(
    sinks: usize,
    terms: impl IntoIterator<Item = (&'a LGraph, &'a C)>,
) -> GraphSum<C> {
    let mut out = GraphSum::new(sinks);
    for (l, c) in terms {
        if c.is_zero() {
            continue;
        }
        for_each_expansion_term(l, |g| out.add_term(&g, c.clone()));
    }
    out
}

/// `2ⁿ · w / #Aut(L)`, the coefficient of `L` in the associator at ħⁿ.
pub fn predicted_coefficient<C: Scalar>(l: &LGraph, weight: &C, order: usize) -> C {
    let num = C::from_i64(1i64 << order);
    num * weight.clone() / C::from_i64(l.automorphism_count() as i64)
}

/// All Leibniz graphs of one ħ-order, canonical modulo wedge relabeling and
/// skew permutations of the Jacobiator triple.
#[derive(Clone, Debug, PartialEq)]
pub struct LeibnizBasis {
    order: usize,
    sinks: usize,
    graphs: Vec<LGraph>,
}

impl LeibnizBasis {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn sinks(&self) -> usize {
        self.sinks
    }

    pub fn graphs(&self) -> &[LGraph] {
        &self.graphs
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    pub fn automorphism_counts(&self) -> Vec<usize> {
        self.graphs.iter().map(LGraph::automorphism_count).collect()
    }

    /// Position of the canonical form of `l`, with the relating sign.
    pub fn position(&self, l: &LGraph) -> Option<(usize, i8)> {
        let canon = l.canonicalize(TripleMode::Skew);
        if canon.zero {
            return None;
        }
        self.graphs
            .binary_search(&canon.graph)
            .ok()
            .map(|i| (i, canon.sign))
    }

    pub fn contains(&self, l: &LGraph) -> bool {
        self.position(l).is_some()
    }
}

/// Every Leibniz graph at ħ^order on `sinks` sinks: `order − 2` wedges and
/// one Jacobiator vertex, without tadpoles, double edges or zero graphs.
/// The enumeration is exhaustive, so it is practical up to order 5.
pub fn generate(order: usize, sinks: usize) -> LeibnizBasis {
    assert!(order >= 2, "Leibniz graphs start at order 2");
    let w = order - 2;
    let total = sinks + w + 1;
    let j = (sinks + w) as Label;
    let pairs: Vec<Vec<[Label; 2]>> = (0..w)
        .map(|k| {
            let me = (sinks + k) as Label;
            let mut out = Vec::new();
            for a in 0..total as Label {
                for b in a + 1..total as Label {
                    if a != me && b != me {
                        out.push([a, b]);
                    }
                }
            }
            out
        })
        .collect();
    let mut triples = Vec::new();
    for a in 0..j {
        for b in a + 1..j {
            for c in b + 1..j {
                triples.push([a, b, c]);
            }
        }
    }
    let mut seen = BTreeSet::new();
    let mut pick = vec![0usize; w];
    loop {
        let wedges: Vec<[Label; 2]> = pick.iter().enumerate().map(|(k, &i)| pairs[k][i]).collect();
        for &t in &triples {
            let l = LGraph::new(sinks, wedges.clone(), t, 1).expect("admissible by construction");
            let canon = l.canonicalize(TripleMode::Skew);
            if !canon.zero {
                seen.insert(canon.graph);
            }
        }
        let mut k = 0;
        loop {
            if k == w {
                return LeibnizBasis {
                    order,
                    sinks,
                    graphs: seen.into_iter().collect(),
                };
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
