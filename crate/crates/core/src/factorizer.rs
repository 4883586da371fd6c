//! Factorization of the associator through Leibniz graphs, order by order.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{KGraph, LGraph};
use crate::leibniz::{expand, expand_sum, predicted_coefficient, LeibnizBasis};
use crate::linalg::Echelon;
use crate::scalar::Scalar;
use crate::series::{GraphSum, WeightTable};

/// `assoc − Σ c_L · expand(L)`, reduced.
pub fn verify<'a, C: Scalar>(
    assoc: &GraphSum<C>,
    coefficients: impl IntoIterator<Item = (&'a LGraph, &'a C)>,
) -> GraphSum<C> {
    let rhs = expand_sum(assoc.sinks(), coefficients);
    let mut out = assoc.reduce();
    out.add_scaled(&rhs, &-C::one());
    out
}

/// One homogeneous block of the linear system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockSummary {
    pub signature: Vec<usize>,
    pub rows: usize,
    pub columns: usize,
    pub rank: usize,
}

impl BlockSummary {
    pub fn nullity(&self) -> usize {
        self.columns - self.rank
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FactorizationReport<C> {
    pub order: usize,
    pub basis: Vec<LGraph>,
    pub solution: Vec<C>,
    /// `2ⁿ · w / #Aut` for basis elements listed in the weight table.
    pub predicted: Vec<Option<C>>,
    pub residual: GraphSum<C>,
    pub blocks: Vec<BlockSummary>,
}

impl<C: Scalar> FactorizationReport<C> {
    pub fn nullity(&self) -> usize {
        self.blocks.iter().map(BlockSummary::nullity).sum()
    }

    pub fn is_exact(&self) -> bool {
        self.residual.is_empty()
    }

    /// Coefficient of `l` in the solution, with the sign of the relabeling.
    pub fn coefficient(&self, l: &LGraph) -> C {
        let canon = l.canonicalize(crate::TripleMode::Skew);
        match self.basis.binary_search(&canon.graph) {
            Ok(i) if !canon.zero => self.solution[i].clone() * C::from_i64(canon.sign as i64),
            _ => C::zero(),
        }
    }

    pub fn support(&self) -> usize {
        self.solution.iter().filter(|c| !c.is_zero()).count()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LGraph, &C)> + '_ {
        self.basis.iter().zip(&self.solution)
    }

    /// Basis elements whose solution differs from a listed prediction.
    pub fn mismatches(&self) -> Vec<&LGraph> {
        self.basis
            .iter()
            .zip(&self.solution)
            .zip(&self.predicted)
            .filter(|((_, s), p)| matches!(p, Some(p) if p != *s))
            .map(|((l, _), _)| l)
            .collect()
    }

    /// One row per basis element with a nonzero solution or prediction:
    /// graph, coefficient, predicted coefficient, and whether they agree.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# order {}: basis {}, support {}, nullspace {}, residual {}",
            self.order,
            self.basis.len(),
            self.support(),
            self.nullity(),
            self.residual.len()
        );
        for (l, s, p) in self.rows() {
            let (p, flag) = match p {
                Some(p) => (p.to_string(), if *p == *s { "ok" } else { "MISMATCH" }),
                None => ("-".to_string(), ""),
            };
            let line = format!("{:<16} {:>10} {:>10}  {}", l.to_brackets(), s, p, flag);
            out.push_str(line.trim_end());
            out.push('\n');
        }
        out
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("graph\tcoefficient\tpredicted\tmatch\n");
        for (l, s, p) in self.rows() {
            let (p, flag) = match p {
                Some(p) => (p.to_string(), (*p == *s).to_string()),
                None => (String::new(), String::new()),
            };
            let _ = writeln!(out, "{}\t{}\t{}\t{}", l.to_brackets(), s, p, flag);
        }
        out
    }

    fn rows(&self) -> impl Iterator<Item = (&LGraph, &C, &Option<C>)> + '_ {
        self.basis
            .iter()
            .zip(&self.solution)
            .zip(&self.predicted)
            .filter(|((_, s), p)| !s.is_zero() || p.is_some())
            .map(|((l, s), p)| (l, s, p))
    }
}

/// Predicted coefficients `2ⁿ · w / #Aut` on a basis.
pub fn predicted_vector<C: Scalar>(
    basis: &LeibnizBasis,
    weights: &WeightTable<LGraph, C>,
) -> Vec<Option<C>> {
    basis
        .graphs()
        .iter()
        .map(|l| {
            weights
                .contains(l)
                .then(|| predicted_coefficient(l, &weights.weight(l), basis.order()))
        })
        .collect()
}

/// Solves `assoc = Σ c_L · expand(L)` over `basis`, block by block in the
/// sinks' differential orders. Free variables take the predicted values when
/// a weight table is given and zero otherwise, so a predicted vector that
/// solves the system is returned unchanged.
pub fn solve<C: Scalar>(
    assoc: &GraphSum<C>,
    basis: &LeibnizBasis,
    weights: Option<&WeightTable<LGraph, C>>,
) -> Result<FactorizationReport<C>> {
    if assoc.sinks() != basis.sinks() && !assoc.is_empty() {
        return Err(Error::SinkMismatch(basis.sinks(), assoc.sinks()));
    }
    let assoc = assoc.reduce();
    let predicted = match weights {
        Some(w) => predicted_vector(basis, w),
        None => vec![None; basis.len()],
    };
    let expansions: Vec<GraphSum<C>> = basis.graphs().iter().map(expand).collect();
    let mut by_signature: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for (i, l) in basis.graphs().iter().enumerate() {
        by_signature.entry(l.sink_orders()).or_default().push(i);
    }
    let targets = assoc.split_by_signature();
    for (signature, part) in &targets {
        if !by_signature.contains_key(signature) && !part.is_empty() {
            return Err(Error::Inconsistent {
                block: format!("{signature:?}"),
            });
        }
    }
    let mut solution = vec![C::zero(); basis.len()];
    let mut blocks = Vec::new();
    for (signature, cols) in &by_signature {
        let target = targets.get(signature);
        let mut row_index: BTreeMap<&KGraph, usize> = BTreeMap::new();
        for &c in cols {
            for (g, _) in expansions[c].iter() {
                let next = row_index.len();
                row_index.entry(g).or_insert(next);
            }
        }
        if let Some(t) = target {
            for (g, _) in t.iter() {
                let next = row_index.len();
                row_index.entry(g).or_insert(next);
            }
        }
        let mut a = vec![vec![C::zero(); cols.len()]; row_index.len()];
        let mut b = vec![C::zero(); row_index.len()];
        for (k, &c) in cols.iter().enumerate() {
            for (g, v) in expansions[c].iter() {
                a[row_index[g]][k] = v.clone();
            }
        }
        if let Some(t) = target {
            for (g, v) in t.iter() {
                b[row_index[g]] = v.clone();
            }
        }
        let rows = a.len();
        let e = Echelon::new(cols.len(), a, b);
        let x = e
            .solution_with(|k| predicted[cols[k]].clone().unwrap_or_else(C::zero))
            .ok_or_else(|| Error::Inconsistent {
                block: format!("{signature:?}"),
            })?;
        for (k, &c) in cols.iter().enumerate() {
            solution[c] = x[k].clone();
        }
        blocks.push(BlockSummary {
            signature: signature.clone(),
            rows,
            columns: cols.len(),
            rank: e.rank(),
        });
    }
    let residual = verify(&assoc, basis.graphs().iter().zip(&solution));
    Ok(FactorizationReport {
        order: basis.order(),
        basis: basis.graphs().to_vec(),
        solution,
        predicted,
        residual,
        blocks,
    })
}

/// `c_n` implied by one coefficient: `coefficient · n · #Aut / (6 · 2ⁿ · w)`.
pub fn cn_of<C: Scalar>(l: &LGraph, coefficient: &C, weight: &C, order: usize) -> C {
    let aut = C::from_i64(l.automorphism_count() as i64);
    coefficient.clone() * C::from_i64(order as i64) * aut
        / (C::from_i64(6 << order) * weight.clone())
}

/// The constant `c_n` with `solution(L) = (6 · 2ⁿ / n) · c_n · w_L / #Aut(L)`
/// for every weighted basis element. Graphs of weight zero must have zero
/// coefficient, and every graph in the solution's support must be weighted.
pub fn extract_cn<C: Scalar>(
    report: &FactorizationReport<C>,
    weights: &WeightTable<LGraph, C>,
) -> Result<C> {
    let n = report.order;
    let mut found: Option<(C, &LGraph)> = None;
    for (l, s) in report.terms() {
        if !weights.contains(l) {
            if !s.is_zero() {
                return Err(Error::UncoveredSupport(l.to_brackets()));
            }
            continue;
        }
        let w = weights.weight(l);
        if w.is_zero() {
            if !s.is_zero() {
                return Err(Error::InconsistentCn(
                    format!("{} on zero-weight {}", s, l.to_brackets()),
                    "0".into(),
                ));
            }
            continue;
        }
        let c = cn_of(l, s, &w, n);
        match &found {
            None => found = Some((c, l)),
            Some((first, at)) if *first != c => {
                return Err(Error::InconsistentCn(
                    format!("{} at {}", first, at.to_brackets()),
                    format!("{} at {}", c, l.to_brackets()),
                ))
            }
            Some(_) => {}
        }
    }
    found.map(|(c, _)| c).ok_or(Error::NoWeightedSupport)
}
