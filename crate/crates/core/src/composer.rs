//! The star-product as a graph series, graph insertion, and the associator.

use crate::error::{Error, Result};
use crate::graph::{KGraph, Label};
use crate::scalar::Scalar;
use crate::series::{GraphSum, WeightTable};

/// `μ + Σ ħⁿ Σ_Γ (w_Γ / #Aut Γ) Γ` truncated at a fixed order, on two sinks.
#[derive(Clone, Debug, PartialEq)]
pub struct StarSeries<C> {
    sum: GraphSum<C>,
    order: usize,
}

/// The associator `(f⋆g)⋆h − f⋆(g⋆h)` as a series on three sinks.
pub type AssociatorSeries<C> = GraphSum<C>;

/// The wedge `[01]` on two sinks.
pub fn wedge() -> KGraph {
    KGraph::from_parts(2, vec![[0, 1]], 1)
}

impl<C: Scalar> StarSeries<C> {
    /// Builds the series through ħ^order. The bare product and the wedge are
    /// supplied when the table has no entries at orders 0 and 1; every higher
    /// order up to `order` must be covered by the table.
    pub fn build(weights: &WeightTable<KGraph, C>, order: usize) -> Result<Self> {
        for n in 2..=order {
            if !weights.covers(n) {
                return Err(Error::MissingOrder(n));
            }
        }
        let mut sum = GraphSum::new(2);
        if !weights.covers(0) {
            sum.add_term(&KGraph::empty(2), C::one());
        }
        if order >= 1 && !weights.covers(1) {
            sum.add_term(&wedge(), C::one());
        }
        for (g, w) in weights.iter() {
            if g.sinks() != 2 {
                return Err(Error::SinkMismatch(2, g.sinks()));
            }
            if g.internal() > order {
                continue;
            }
            let aut = C::from_i64(g.automorphism_count() as i64);
            sum.add_term(g, w.clone() / aut);
        }
        Ok(StarSeries { sum, order })
    }

    /// Uses the given two-sink sum as the star-product coefficients directly.
    pub fn from_sum(sum: GraphSum<C>, order: usize) -> Result<Self> {
        if sum.sinks() != 2 {
            return Err(Error::SinkMismatch(2, sum.sinks()));
        }
        let mut truncated = GraphSum::new(2);
        for n in 0..=order {
            truncated.merge(sum.homogeneous(n));
        }
        Ok(StarSeries {
            sum: truncated,
            order,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn sum(&self) -> &GraphSum<C> {
        &self.sum
    }

    /// The ħⁿ coefficient `B_n`.
    pub fn component(&self, n: usize) -> GraphSum<C> {
        self.sum.homogeneous(n)
    }

    /// Number of graphs with nonzero coefficient at each order 0..=order.
    pub fn support_sizes(&self) -> Vec<usize> {
        (0..=self.order).map(|n| self.component(n).len()).collect()
    }
}

/// Calls `emit` for every graph obtained by inserting `inner` into sink
/// `slot` of `outer`. Inner sinks take the place of the slot, later outer
/// sinks shift up, and each edge that pointed at the slot is re-aimed at
/// every vertex of `inner` in turn. Inner internal vertices are labeled
/// before the outer ones. The emitted graphs carry the product sign.
pub fn for_each_insertion(
    outer: &KGraph,
    slot: usize,
    inner: &KGraph,
    mut emit: impl FnMut(KGraph),
) -> Result<()> {
    let mo = outer.sinks();
    if slot >= mo {
        return Err(Error::SlotOutOfRange { slot, sinks: mo });
    }
    let mi = inner.sinks();
    let m = mo + mi - 1;
    let ni = inner.internal();
    let mut targets: Vec<[Label; 2]> = Vec::with_capacity(ni + outer.internal());
    for t in inner.targets() {
        targets.push(t.map(|v| {
            let v = v as usize;
            if v < mi {
                (slot + v) as Label
            } else {
                (m + v - mi) as Label
            }
        }));
    }
    // Outer edges: fixed targets, or None for an edge into the slot.
    let mut holes: Vec<(usize, usize)> = Vec::new();
    for (k, t) in outer.targets().iter().enumerate() {
        let mut row = [0 as Label; 2];
        for side in 0..2 {
            let v = t[side] as usize;
            row[side] = if v < slot {
                v as Label
            } else if v == slot {
                holes.push((ni + k, side));
                0
            } else if v < mo {
                (v + mi - 1) as Label
            } else {
                (m + ni + v - mo) as Label
            };
        }
        targets.push(row);
    }
    let choices: Vec<Label> = (slot..slot + mi)
        .chain(m..m + ni)
        .map(|v| v as Label)
        .collect();
    let sign = outer.sign() * inner.sign();
    if choices.is_empty() {
        if holes.is_empty() {
            emit(KGraph::from_parts(m, targets, sign));
        }
        return Ok(());
    }
    let mut pick = vec![0usize; holes.len()];
    loop {
        for (h, &(row, side)) in holes.iter().enumerate() {
            targets[row][side] = choices[pick[h]];
        }
        emit(KGraph::from_parts(m, targets.clone(), sign));
        let mut h = 0;
        loop {
            if h == pick.len() {
                return Ok(());
            }
            pick[h] += 1;
            if pick[h] < choices.len() {
                break;
            }
            pick[h] = 0;
            h += 1;
        }
    }
}

/// The reduced sum of all insertions of `inner` into sink `slot` of `outer`.
pub fn insert<C: Scalar>(outer: &KGraph, slot: usize, inner: &KGraph) -> Result<GraphSum<C>> {
    let mut out = GraphSum::new(outer.sinks() + inner.sinks() - 1);
    for_each_insertion(outer, slot, inner, |g| out.add_term(&g, C::one()))?;
    Ok(out)
}

/// Bilinear extension of [`insert`] to sums.
pub fn insert_sums<C: Scalar>(
    outer: &GraphSum<C>,
    slot: usize,
    inner: &GraphSum<C>,
) -> Result<GraphSum<C>> {
    let mut out = GraphSum::new(outer.sinks() + inner.sinks() - 1);
    if slot >= outer.sinks() {
        return Err(Error::SlotOutOfRange {
            slot,
            sinks: outer.sinks(),
        });
    }
    for (go, co) in outer.iter() {
        for (gi, ci) in inner.iter() {
            let c = co.clone() * ci.clone();
            for_each_insertion(go, slot, gi, |g| out.add_term(&g, c.clone()))?;
        }
    }
    Ok(out)
}

/// `Assoc(⋆) = (f⋆g)⋆h − f⋆(g⋆h)` through ħ^order, reduced.
pub fn associator<C: Scalar>(star: &StarSeries<C>, order: usize) -> Result<AssociatorSeries<C>> {
    let order = order.min(star.order());
    let parts: Vec<GraphSum<C>> = (0..=order).map(|n| star.component(n)).collect();
    let mut out = GraphSum::new(3);
    for total in 0..=order {
        for i in 0..=total {
            let j = total - i;
            let left = insert_sums(&parts[j], 0, &parts[i])?;
            let right = insert_sums(&parts[j], 1, &parts[i])?;
            out.add_scaled(&left, &C::one());
            out.add_scaled(&right, &-C::one());
        }
    }
    Ok(out)
}
