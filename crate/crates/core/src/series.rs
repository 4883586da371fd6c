//! Formal sums of graphs with exact coefficients, graded by ħ-degree, and
//! tables of graph weights.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, ParseError, Result};
use crate::graph::{KGraph, LGraph, TripleMode};
use crate::scalar::Scalar;

/// A finite linear combination of Kontsevich graphs on a fixed number of
/// sinks. Terms are grouped by ħ-degree, which for wedge graphs is the number
/// of internal vertices.
///
/// Sums produced by [`GraphSum::reduce`] and by the arithmetic operations
/// store canonical representatives only, with signs folded into the
/// coefficients and no zero coefficients. [`GraphSum::push_raw`] bypasses this
/// so that unreduced expansions can be inspected.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphSum<C> {
    sinks: usize,
    orders: BTreeMap<usize, BTreeMap<KGraph, C>>,
}

impl<C: Scalar> GraphSum<C> {
    pub fn new(sinks: usize) -> Self {
        GraphSum {
            sinks,
            orders: BTreeMap::new(),
        }
    }

    /// Single-term sum, reduced.
    pub fn from_graph(graph: KGraph, coefficient: C) -> Self {
        let mut sum = GraphSum::new(graph.sinks());
        sum.add_term(&graph, coefficient);
        sum
    }

    /// Reduced sum of the given terms.
    pub fn from_terms(sinks: usize, terms: impl IntoIterator<Item = (KGraph, C)>) -> Self {
        let mut sum = GraphSum::new(sinks);
        for (g, c) in terms {
            sum.add_term(&g, c);
        }
        sum
    }

    pub fn sinks(&self) -> usize {
        self.sinks
    }

    pub fn len(&self) -> usize {
        self.orders.values().map(BTreeMap::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn orders(&self) -> impl Iterator<Item = usize> + '_ {
        self.orders
            .iter()
            .filter(|(_, t)| !t.is_empty())
            .map(|(&k, _)| k)
    }

    /// Iterates `(graph, coefficient)` in (degree, graph) order.
    pub fn iter(&self) -> impl Iterator<Item = (&KGraph, &C)> + '_ {
        self.orders.values().flat_map(|t| t.iter())
    }

    pub fn coefficient(&self, graph: &KGraph) -> C {
        let canon = graph.canonicalize();
        if canon.zero {
            return C::zero();
        }
        match self
            .orders
            .get(&graph.internal())
            .and_then(|t| t.get(&canon.graph))
        {
            Some(c) => c.clone() * C::from_i64(canon.sign as i64),
            None => C::zero(),
        }
    }

    /// The ħ^order component.
    pub fn homogeneous(&self, order: usize) -> GraphSum<C> {
        let mut out = GraphSum::new(self.sinks);
        if let Some(t) = self.orders.get(&order) {
            out.orders.insert(order, t.clone());
        }
        out
    }

    /// Terms whose differential orders on the sinks equal `signature`.
    pub fn component(&self, signature: &[usize]) -> GraphSum<C> {
        let mut out = GraphSum::new(self.sinks);
        for (g, c) in self.iter() {
            if g.sink_orders() == signature {
                out.insert_canonical(g.clone(), c.clone());
            }
        }
        out
    }

    /// Splits into components keyed by the sinks' differential orders.
    pub fn split_by_signature(&self) -> BTreeMap<Vec<usize>, GraphSum<C>> {
        let mut out: BTreeMap<Vec<usize>, GraphSum<C>> = BTreeMap::new();
        for (g, c) in self.iter() {
            out.entry(g.sink_orders())
                .or_insert_with(|| GraphSum::new(self.sinks))
                .insert_canonical(g.clone(), c.clone());
        }
        out
    }

    fn check_sinks(&self, graph: &KGraph) {
        assert_eq!(
            graph.sinks(),
            self.sinks,
            "graph with {} sinks added to a sum over {}",
            graph.sinks(),
            self.sinks
        );
    }

    /// Adds `coefficient * graph` after canonicalizing it.
    pub fn add_term(&mut self, graph: &KGraph, coefficient: C) {
        self.check_sinks(graph);
        if coefficient.is_zero() {
            return;
        }
        let canon = graph.canonicalize();
        if canon.zero {
            return;
        }
        let c = if canon.sign < 0 {
            -coefficient
        } else {
            coefficient
        };
        self.insert_canonical(canon.graph, c);
    }

    /// `graph` must already be canonical with sign +1.
    pub(crate) fn insert_canonical(&mut self, graph: KGraph, coefficient: C) {
        let order = graph.internal();
        let terms = self.orders.entry(order).or_default();
        match terms.get_mut(&graph) {
            Some(c) => {
                *c = c.clone() + coefficient;
                if c.is_zero() {
                    terms.remove(&graph);
                }
            }
            None => {
                if !coefficient.is_zero() {
                    terms.insert(graph, coefficient);
                }
            }
        }
        if terms.is_empty() {
            self.orders.remove(&order);
        }
    }

    /// Adds a term without canonicalization; only the graph's own sign is
    /// folded into the coefficient.
    pub fn push_raw(&mut self, graph: &KGraph, coefficient: C) {
        self.check_sinks(graph);
        let c = if graph.sign() < 0 {
            -coefficient
        } else {
            coefficient
        };
        self.insert_canonical(graph.clone().with_sign(1), c);
    }

    /// Canonicalizes every term, folds signs, and drops zero graphs and zero
    /// coefficients.
    pub fn reduce(&self) -> GraphSum<C> {
        let mut out = GraphSum::new(self.sinks);
        for (g, c) in self.iter() {
            out.add_term(g, c.clone());
        }
        out
    }

    pub fn is_reduced(&self) -> bool {
        self.iter().all(|(g, c)| {
            let canon = g.canonicalize();
            !c.is_zero() && !canon.zero && canon.sign == 1 && canon.graph == *g
        })
    }

    /// In-place `self += factor * other`; `other` is taken to be reduced.
    pub fn add_scaled(&mut self, other: &GraphSum<C>, factor: &C) {
        assert_eq!(self.sinks, other.sinks);
        if factor.is_zero() {
            return;
        }
        for (g, c) in other.iter() {
            self.insert_canonical(g.clone(), c.clone() * factor.clone());
        }
    }

    /// Merges another reduced sum into this one.
    pub fn merge(&mut self, other: GraphSum<C>) {
        assert_eq!(self.sinks, other.sinks);
        for (_, terms) in other.orders {
            for (g, c) in terms {
                self.insert_canonical(g, c);
            }
        }
    }

    pub fn add(&self, other: &GraphSum<C>) -> Result<GraphSum<C>> {
        if self.sinks != other.sinks {
            return Err(Error::SinkMismatch(self.sinks, other.sinks));
        }
        let mut out = self.reduce();
        out.merge(other.reduce());
        Ok(out)
    }

    pub fn sub(&self, other: &GraphSum<C>) -> Result<GraphSum<C>> {
        self.add(&other.scale(&-C::one()))
    }

    pub fn scale(&self, factor: &C) -> GraphSum<C> {
        let mut out = GraphSum::new(self.sinks);
        if factor.is_zero() {
            return out;
        }
        for (g, c) in self.iter() {
            out.add_term(g, c.clone() * factor.clone());
        }
        out
    }

    /// Parses a series file: one `encoding coefficient` line per term, `#`
    /// comments and blank lines ignored. Lines without a coefficient count
    /// with coefficient 1. The result is *not* reduced.
    pub fn parse_raw(text: &str) -> Result<GraphSum<C>> {
        let mut sum: Option<GraphSum<C>> = None;
        for (k, line) in text.lines().enumerate() {
            let content = strip_comment(line);
            if content.is_empty() {
                continue;
            }
            let (g, coeff) = KGraph::parse_line(content).map_err(|e| e.at_line(k + 1))?;
            let c = match coeff {
                Some(tok) => parse_coefficient::<C>(&tok).map_err(|e| e.at_line(k + 1))?,
                None => C::one(),
            };
            let s = sum.get_or_insert_with(|| GraphSum::new(g.sinks()));
            if s.sinks != g.sinks() {
                return Err(Error::SinkMismatch(s.sinks, g.sinks()));
            }
            s.push_raw(&g, c);
        }
        Ok(sum.unwrap_or_else(|| GraphSum::new(0)))
    }

    /// Parses and reduces a series file.
    pub fn parse(text: &str) -> Result<GraphSum<C>> {
        Ok(GraphSum::parse_raw(text)?.reduce())
    }

    /// One line per term in deterministic order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (g, c) in self.iter() {
            out.push_str(&g.line_with(c));
            out.push('\n');
        }
        out
    }
}

impl<C: Scalar> fmt::Display for GraphSum<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

pub(crate) fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => line[..i].trim(),
        None => line.trim(),
    }
}

pub(crate) fn parse_coefficient<C: Scalar>(token: &str) -> Result<C, ParseError> {
    C::parse_scalar(token).ok_or_else(|| ParseError::BadToken {
        token: token.to_string(),
        reason: "not a rational number".into(),
    })
}

/// Normalization of the weights stored in a file.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Convention {
    /// `w = (∏ #Star(k)!) · W`, the default.
    #[default]
    Multiplied,
    /// The bare integral `W`.
    Bare,
}

/// Graph types that can key a weight table.
pub trait WeightKey: Clone + Ord + fmt::Display + fmt::Debug {
    /// Canonical representative, sign with `self = sign · canonical`, and
    /// whether the graph equals minus itself.
    fn canonical(&self) -> (Self, i8, bool);
    /// ħ-degree at which the graph carries a weight.
    fn order(&self) -> usize;
    fn sinks(&self) -> usize;
    /// `∏ #Star(k)!` over internal vertices.
    fn star_factor(&self) -> u64;
    fn parse_entry(text: &str) -> Result<Self, ParseError>;
    fn key_text(&self) -> String;
}

impl WeightKey for KGraph {
    fn canonical(&self) -> (Self, i8, bool) {
        let c = self.canonicalize();
        (c.graph, c.sign, c.zero)
    }

    fn order(&self) -> usize {
        self.internal()
    }

    fn sinks(&self) -> usize {
        KGraph::sinks(self)
    }

    fn star_factor(&self) -> u64 {
        2u64.pow(self.internal() as u32)
    }

    fn parse_entry(text: &str) -> Result<Self, ParseError> {
        KGraph::parse(text)
    }

    fn key_text(&self) -> String {
        self.encoding()
    }
}

/// Leibniz-graph weights are keyed modulo skew permutations of the
/// Jacobiator triple.
impl WeightKey for LGraph {
    fn canonical(&self) -> (Self, i8, bool) {
        let c = self.canonicalize(TripleMode::Skew);
        (c.graph, c.sign, c.zero)
    }

    fn order(&self) -> usize {
        LGraph::order(self)
    }

    fn sinks(&self) -> usize {
        LGraph::sinks(self)
    }

    fn star_factor(&self) -> u64 {
        6 * 2u64.pow(self.wedges().len() as u32)
    }

    fn parse_entry(text: &str) -> Result<Self, ParseError> {
        LGraph::parse(text)
    }

    fn key_text(&self) -> String {
        self.to_brackets()
    }
}

/// Weights `w_Γ` keyed by canonical graph.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightTable<G, C> {
    entries: BTreeMap<G, C>,
}

impl<G: WeightKey, C: Scalar> Default for WeightTable<G, C> {
    fn default() -> Self {
        WeightTable {
            entries: BTreeMap::new(),
        }
    }
}

impl<G: WeightKey, C: Scalar> WeightTable<G, C> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts `w(graph) = weight` (in the `w` convention). A duplicate must
    /// agree with the stored value.
    pub fn insert(&mut self, graph: &G, weight: C) -> Result<()> {
        let (canon, sign, zero) = graph.canonical();
        let w = if sign < 0 { -weight } else { weight };
        if zero && !w.is_zero() {
            return Err(Error::Inadmissible {
                key: graph.key_text(),
                order: graph.order(),
            });
        }
        if let Some(first) = self.entries.get(&canon) {
            if *first != w {
                return Err(Error::ConflictingWeight {
                    key: canon.key_text(),
                    first: first.to_string(),
                    second: w.to_string(),
                });
            }
            return Ok(());
        }
        if let Some(other) = self.entries.keys().next() {
            if other.sinks() != canon.sinks() {
                return Err(Error::SinkMismatch(other.sinks(), canon.sinks()));
            }
        }
        self.entries.insert(canon, w);
        Ok(())
    }

    /// Parses `graph weight` lines (`#` comments allowed).
    pub fn parse(text: &str, convention: Convention) -> Result<Self> {
        let mut table = WeightTable::new();
        for (k, line) in text.lines().enumerate() {
            let content = strip_comment(line);
            if content.is_empty() {
                continue;
            }
            let (graph_text, weight_text) = content
                .rsplit_once(char::is_whitespace)
                .ok_or_else(|| ParseError::Syntax("missing weight".into()).at_line(k + 1))?;
            let graph = G::parse_entry(graph_text.trim()).map_err(|e| e.at_line(k + 1))?;
            let mut weight: C = parse_coefficient(weight_text).map_err(|e| e.at_line(k + 1))?;
            if convention == Convention::Bare {
                weight = weight * C::from_i64(graph.star_factor() as i64);
            }
            table.insert(&graph, weight).map_err(|e| match e {
                Error::Parse(p) => Error::Parse(p.at_line(k + 1)),
                other => other,
            })?;
        }
        Ok(table)
    }

    /// `w` for any labeling of the graph; zero when absent.
    pub fn weight(&self, graph: &G) -> C {
        let (canon, sign, zero) = graph.canonical();
        if zero {
            return C::zero();
        }
        match self.entries.get(&canon) {
            Some(w) if sign < 0 => -w.clone(),
            Some(w) => w.clone(),
            None => C::zero(),
        }
    }

    pub fn contains(&self, graph: &G) -> bool {
        self.entries.contains_key(&graph.canonical().0)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries in canonical order (including retained zero weights).
    pub fn iter(&self) -> impl Iterator<Item = (&G, &C)> + '_ {
        self.entries.iter()
    }

    pub fn orders(&self) -> Vec<usize> {
        let mut orders: Vec<usize> = self.entries.keys().map(WeightKey::order).collect();
        orders.sort_unstable();
        orders.dedup();
        orders
    }

    pub fn covers(&self, order: usize) -> bool {
        self.entries.keys().any(|g| g.order() == order)
    }

    /// Entries listed with weight zero.
    pub fn zero_entries(&self) -> Vec<&G> {
        self.entries
            .iter()
            .filter(|(_, w)| w.is_zero())
            .map(|(g, _)| g)
            .collect()
    }

    /// Entries with nonzero weight at the given order.
    pub fn support(&self, order: usize) -> usize {
        self.entries
            .iter()
            .filter(|(g, w)| g.order() == order && !w.is_zero())
            .count()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (g, w) in &self.entries {
            out.push_str(&format!("{}    {}\n", g.key_text(), w));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn k3(text: &str) -> KGraph {
        KGraph::from_brackets(3, text).unwrap()
    }

    #[test]
    fn add_cancels_inverse() {
        let s = GraphSum::from_graph(k3("[01;12;43]"), q(1, 3));
        assert!(s.add(&s.scale(&q(-1, 1))).unwrap().is_empty());
        assert!(s.sub(&s).unwrap().is_empty());
    }

    #[test]
    fn relabeled_graphs_cancel() {
        let a = GraphSum::from_graph(k3("[01;12;43]"), q(1, 3));
        let b = GraphSum::from_graph(k3("[21;01;43]"), q(-1, 3));
        assert!(a.add(&b).unwrap().is_empty());
    }

    #[test]
    fn scale_edge_cases() {
        let s = GraphSum::from_graph(k3("[01;12;43]"), q(1, 3));
        assert!(s.scale(&q(0, 1)).is_empty());
        assert_eq!(s.scale(&q(1, 1)), s);
        assert_eq!(s.scale(&q(2, 1)).coefficient(&k3("[21;01;43]")), q(2, 3));
    }

    #[test]
    fn sink_mismatch_is_an_error() {
        let a: GraphSum<Rational> = GraphSum::from_graph(k3("[01]"), q(1, 1));
        let b = GraphSum::from_graph(KGraph::from_brackets(2, "[01]").unwrap(), q(1, 1));
        assert_eq!(a.add(&b), Err(Error::SinkMismatch(3, 2)));
    }

    #[test]
    fn reduce_is_idempotent_and_folds_signs() {
        let mut raw = GraphSum::new(2);
        raw.push_raw(&KGraph::from_brackets(2, "[10]").unwrap(), q(1, 2));
        raw.push_raw(&KGraph::from_brackets(2, "[01]").unwrap(), q(1, 2));
        assert_eq!(raw.len(), 2);
        let r = raw.reduce();
        assert!(r.is_empty());
        let mut raw = GraphSum::new(2);
        raw.push_raw(&KGraph::from_brackets(2, "[10]").unwrap(), q(1, 2));
        let r = raw.reduce();
        assert!(r.is_reduced());
        assert_eq!(r.reduce(), r);
        assert_eq!(
            r.coefficient(&KGraph::from_brackets(2, "[01]").unwrap()),
            q(-1, 2)
        );
    }

    #[test]
    fn series_text_round_trip() {
        let text = "# header\n3 3 1   0 1 0 1 4 2    2/3\n3 3 1   0 1 1 2 4 0    2/3\n";
        let s: GraphSum<Rational> = GraphSum::parse(text).unwrap();
        assert_eq!(s.len(), 2);
        let again: GraphSum<Rational> = GraphSum::parse(&s.to_text()).unwrap();
        assert_eq!(again, s);
    }

    #[test]
    fn series_parse_reports_line() {
        let err = GraphSum::<Rational>::parse("2 1 1  0 1  1\n2 1 1  0 5  1\n").unwrap_err();
        assert!(err.to_string().starts_with("line 2"), "{err}");
    }

    #[test]
    fn leibniz_weight_table() {
        let text = "# Table\n[01;012] 1/12\n[14;032] 0\n[04;312]   1/48\n";
        let t: WeightTable<LGraph, Rational> =
            WeightTable::parse(text, Convention::Multiplied).unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t.weight(&LGraph::parse("[01;012]").unwrap()), q(1, 12));
        // Odd permutation of the Jacobiator triple.
        assert_eq!(t.weight(&LGraph::parse("[01;102]").unwrap()), q(-1, 12));
        assert_eq!(t.zero_entries().len(), 1);
        assert_eq!(t.support(3), 2);
    }

    #[test]
    fn conflicting_weights_rejected() {
        let text = "[01;012] 1/12\n[01;120] 1/6\n";
        let err = WeightTable::<LGraph, Rational>::parse(text, Convention::Multiplied).unwrap_err();
        assert!(matches!(err, Error::ConflictingWeight { .. }));
        // Agreeing duplicates are accepted.
        let text = "[01;012] 1/12\n[01;120] 1/12\n";
        assert!(WeightTable::<LGraph, Rational>::parse(text, Convention::Multiplied).is_ok());
    }

    #[test]
    fn bare_convention_is_converted() {
        let t: WeightTable<KGraph, Rational> =
            WeightTable::parse("2 1 1  0 1    1/2\n", Convention::Bare).unwrap();
        assert_eq!(
            t.weight(&KGraph::from_brackets(2, "[01]").unwrap()),
            q(1, 1)
        );
    }
}
