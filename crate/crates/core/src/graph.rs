//! Oriented Kontsevich graphs and Leibniz graphs.
//!
//! Vertices are numbered with the sinks first (`0..m`), followed by the
//! internal vertices. Every internal vertex of a [`KGraph`] is a wedge: an
//! ordered pair of targets (Left, Right). A [`LGraph`] additionally carries
//! one trivalent vertex, always numbered last, whose ordered triple of targets
//! receives the Jacobiator.
//!
//! Relabeling internal vertices is free; exchanging the two legs of a wedge
//! costs a sign. Canonical forms are the lexicographically smallest target
//! list over all relabelings, with every wedge written in ascending order.

use std::fmt;

use crate::error::ParseError;

/// Vertex label. Sinks and internal vertices share one numbering.
pub type Label = u8;

/// Largest internal-vertex count handled by the exhaustive canonical search.
pub const MAX_INTERNAL: usize = 8;

/// An oriented graph built of wedges over `sinks` ordered ground vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KGraph {
    sinks: usize,
    targets: Vec<[Label; 2]>,
    sign: i8,
}

/// Result of canonicalization: `original = sign * graph`, where `graph` is the
/// canonical representative (its own sign is `+1`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CanonicalForm {
    pub graph: KGraph,
    pub sign: i8,
    /// Some relabeling maps the graph to minus itself.
    pub zero: bool,
}

fn check_targets(
    sinks: usize,
    internal: usize,
    vertex: usize,
    targets: &[Label],
) -> Result<(), ParseError> {
    let limit = sinks + internal;
    for (k, &t) in targets.iter().enumerate() {
        if t as usize >= limit {
            return Err(ParseError::OutOfRange {
                token: t.to_string(),
                limit,
            });
        }
        if t as usize == vertex {
            return Err(ParseError::Tadpole { vertex });
        }
        if targets[..k].contains(&t) {
            return Err(ParseError::DoubleEdge {
                vertex,
                target: t as usize,
            });
        }
    }
    Ok(())
}

fn parse_label(token: &str) -> Result<Label, ParseError> {
    token.parse::<Label>().map_err(|_| ParseError::BadToken {
        token: token.to_string(),
        reason: "not a vertex label".into(),
    })
}

impl KGraph {
    pub fn new(sinks: usize, targets: Vec<[Label; 2]>, sign: i8) -> Result<Self, ParseError> {
        if sign != 1 && sign != -1 {
            return Err(ParseError::BadToken {
                token: sign.to_string(),
                reason: "sign must be 1 or -1".into(),
            });
        }
        if sinks + targets.len() > Label::MAX as usize {
            return Err(ParseError::Syntax("too many vertices".into()));
        }
        let n = targets.len();
        for (k, pair) in targets.iter().enumerate() {
            check_targets(sinks, n, sinks + k, pair)?;
        }
        Ok(KGraph {
            sinks,
            targets,
            sign,
        })
    }

    /// Caller guarantees the invariants checked by [`KGraph::new`].
    pub(crate) fn from_parts(sinks: usize, targets: Vec<[Label; 2]>, sign: i8) -> Self {
        debug_assert!(KGraph::new(sinks, targets.clone(), sign).is_ok());
        KGraph {
            sinks,
            targets,
            sign,
        }
    }

    /// The bare product on `sinks` arguments: no internal vertices.
    pub fn empty(sinks: usize) -> Self {
        KGraph {
            sinks,
            targets: Vec::new(),
            sign: 1,
        }
    }

    pub fn sinks(&self) -> usize {
        self.sinks
    }

    pub fn internal(&self) -> usize {
        self.targets.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.sinks + self.targets.len()
    }

    pub fn edge_count(&self) -> usize {
        2 * self.targets.len()
    }

    pub fn targets(&self) -> &[[Label; 2]] {
        &self.targets
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn with_sign(mut self, sign: i8) -> Self {
        assert!(sign == 1 || sign == -1);
        self.sign = sign;
        self
    }

    /// Number of edges landing on each vertex.
    pub fn in_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_count()];
        for pair in &self.targets {
            for &t in pair {
                deg[t as usize] += 1;
            }
        }
        deg
    }

    /// Differential orders with respect to the sinks.
    pub fn sink_orders(&self) -> Vec<usize> {
        let mut deg = self.in_degrees();
        deg.truncate(self.sinks);
        deg
    }

    /// Parses a bare encoding line `m n sign  t1L t1R ... tnL tnR` with
    /// exactly `2n` targets.
    pub fn parse(text: &str) -> Result<KGraph, ParseError> {
        match KGraph::parse_line(text)? {
            (g, None) => Ok(g),
            (g, Some(_)) => Err(ParseError::TokenCount {
                expected: format!("{} target entries", g.edge_count()),
                found: g.edge_count() + 1,
            }),
        }
    }

    /// Parses `m n sign  t1L t1R ... tnL tnR [coefficient]`; returns the
    /// trailing coefficient token if present.
    pub fn parse_line(text: &str) -> Result<(KGraph, Option<String>), ParseError> {
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if tokens.len() < 3 {
            return Err(ParseError::TokenCount {
                expected: "at least 3".into(),
                found: tokens.len(),
            });
        }
        let count = |tok: &str| {
            tok.parse::<usize>().map_err(|_| ParseError::BadToken {
                token: tok.to_string(),
                reason: "not a vertex count".into(),
            })
        };
        let m = count(tokens[0])?;
        let n = count(tokens[1])?;
        let sign: i8 = match tokens[2] {
            "1" => 1,
            "-1" => -1,
            other => {
                return Err(ParseError::BadToken {
                    token: other.to_string(),
                    reason: "sign must be 1 or -1".into(),
                })
            }
        };
        let body = &tokens[3..];
        let coefficient = match body.len() {
            l if l == 2 * n => None,
            l if l == 2 * n + 1 => Some(body[2 * n].to_string()),
            l => {
                return Err(ParseError::TokenCount {
                    expected: format!("{} or {} target entries", 2 * n, 2 * n + 1),
                    found: l,
                })
            }
        };
        let mut targets = Vec::with_capacity(n);
        for k in 0..n {
            targets.push([parse_label(body[2 * k])?, parse_label(body[2 * k + 1])?]);
        }
        Ok((KGraph::new(m, targets, sign)?, coefficient))
    }

    /// Encoding line without coefficient, in the spacing used by the
    /// published listings: `m n sign   t1L t1R ...`.
    pub fn encoding(&self) -> String {
        let mut out = format!("{} {} {}", self.sinks, self.internal(), self.sign);
        if !self.targets.is_empty() {
            out.push_str("  ");
            for pair in &self.targets {
                out.push_str(&format!(" {} {}", pair[0], pair[1]));
            }
        }
        out
    }

    /// Encoding line followed by a coefficient.
    pub fn line_with(&self, coefficient: &impl fmt::Display) -> String {
        format!("{}    {}", self.encoding(), coefficient)
    }

    /// Parses `[01;12;43]` with `sinks` ground vertices.
    pub fn from_brackets(sinks: usize, text: &str) -> Result<Self, ParseError> {
        let groups = parse_groups(text)?;
        let mut targets = Vec::with_capacity(groups.len());
        for g in groups {
            match g.as_slice() {
                [a, b] => targets.push([*a, *b]),
                _ => {
                    return Err(ParseError::Syntax(format!(
                        "wedge groups must have two targets in `{text}`"
                    )))
                }
            }
        }
        KGraph::new(sinks, targets, 1)
    }

    /// Bracket form of the target list; the sign is not part of it.
    pub fn to_brackets(&self) -> String {
        format_groups(self.targets.iter().map(|p| p.as_slice()))
    }

    /// Applies a relabeling of internal vertices (`perm[i]` is the new
    /// position of internal vertex `i`) and then swaps the legs of the wedges
    /// whose *new* position is flagged in `swaps`.
    pub fn relabel(&self, perm: &[usize], swaps: &[bool]) -> KGraph {
        let n = self.internal();
        assert_eq!(perm.len(), n);
        assert_eq!(swaps.len(), n);
        let m = self.sinks;
        let map = |t: Label| -> Label {
            let t = t as usize;
            if t < m {
                t as Label
            } else {
                (m + perm[t - m]) as Label
            }
        };
        let mut targets = vec![[0; 2]; n];
        let mut sign = self.sign;
        for (i, pair) in self.targets.iter().enumerate() {
            let p = perm[i];
            let mut mapped = [map(pair[0]), map(pair[1])];
            if swaps[p] {
                mapped.swap(0, 1);
                sign = -sign;
            }
            targets[p] = mapped;
        }
        KGraph {
            sinks: m,
            targets,
            sign,
        }
    }

    /// Exhaustive canonical form over all internal relabelings.
    pub fn canonicalize(&self) -> CanonicalForm {
        let n = self.internal();
        assert!(
            n <= MAX_INTERNAL,
            "canonical search limited to {MAX_INTERNAL} internal vertices"
        );
        let m = self.sinks;
        let mut best: Option<Vec<[Label; 2]>> = None;
        let mut best_signs = (false, false);
        let mut buf = vec![[0 as Label; 2]; n];
        for_each_permutation(n, |perm| {
            let parity = relabel_sorted(&self.targets, m, perm, &mut buf);
            let better = match &best {
                None => true,
                Some(b) => buf.as_slice() < b.as_slice(),
            };
            if better {
                best = Some(buf.clone());
                best_signs = (parity > 0, parity < 0);
            } else if best.as_deref() == Some(buf.as_slice()) {
                if parity > 0 {
                    best_signs.0 = true;
                } else {
                    best_signs.1 = true;
                }
            }
        });
        let targets = best.unwrap_or_default();
        let zero = best_signs.0 && best_signs.1;
        let parity: i8 = if best_signs.0 { 1 } else { -1 };
        CanonicalForm {
            graph: KGraph {
                sinks: m,
                targets,
                sign: 1,
            },
            sign: self.sign * parity,
            zero,
        }
    }

    /// True iff the graph equals minus itself under some relabeling.
    pub fn is_zero_graph(&self) -> bool {
        self.canonicalize().zero
    }

    /// Order of the group of internal relabelings preserving the wedges as
    /// unordered pairs (sinks fixed).
    pub fn automorphism_count(&self) -> usize {
        let n = self.internal();
        let m = self.sinks;
        let mut base = vec![[0 as Label; 2]; n];
        let identity: Vec<usize> = (0..n).collect();
        relabel_sorted(&self.targets, m, &identity, &mut base);
        let mut buf = vec![[0 as Label; 2]; n];
        let mut count = 0;
        for_each_permutation(n, |perm| {
            relabel_sorted(&self.targets, m, perm, &mut buf);
            if buf == base {
                count += 1;
            }
        });
        count
    }

    /// Number of labeled representatives: `2^n * n! / #Aut`.
    pub fn multiplicity(&self) -> u64 {
        let n = self.internal() as u32;
        2u64.pow(n) * factorial(n as usize) / self.automorphism_count() as u64
    }
}

impl fmt::Display for KGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encoding())
    }
}

/// A Leibniz graph: wedges plus one trivalent vertex (numbered last) carrying
/// the Jacobiator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LGraph {
    sinks: usize,
    wedges: Vec<[Label; 2]>,
    jacobiator: [Label; 3],
    sign: i8,
}

/// How the Jacobiator triple takes part in canonicalization.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TripleMode {
    /// The triple order is part of the graph.
    AsWritten,
    /// The triple is read up to permutation, odd permutations costing a sign
    /// (the Jacobiator is totally skew).
    Skew,
}

const TRIPLE_PERMS: [([usize; 3], i8); 6] = [
    ([0, 1, 2], 1),
    ([1, 2, 0], 1),
    ([2, 0, 1], 1),
    ([1, 0, 2], -1),
    ([0, 2, 1], -1),
    ([2, 1, 0], -1),
];

/// Canonical representative of a Leibniz graph with `original = sign * graph`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LCanonicalForm {
    pub graph: LGraph,
    pub sign: i8,
    pub zero: bool,
}

impl LGraph {
    pub fn new(
        sinks: usize,
        wedges: Vec<[Label; 2]>,
        jacobiator: [Label; 3],
        sign: i8,
    ) -> Result<Self, ParseError> {
        if sign != 1 && sign != -1 {
            return Err(ParseError::BadToken {
                token: sign.to_string(),
                reason: "sign must be 1 or -1".into(),
            });
        }
        let internal = wedges.len() + 1;
        if sinks + internal > Label::MAX as usize {
            return Err(ParseError::Syntax("too many vertices".into()));
        }
        for (k, pair) in wedges.iter().enumerate() {
            check_targets(sinks, internal, sinks + k, pair)?;
        }
        check_targets(sinks, internal, sinks + wedges.len(), &jacobiator)?;
        Ok(LGraph {
            sinks,
            wedges,
            jacobiator,
            sign,
        })
    }

    /// Parses the bracket form, e.g. `[01;012]`, on three sinks.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        LGraph::parse_with_sinks(3, text)
    }

    pub fn parse_with_sinks(sinks: usize, text: &str) -> Result<Self, ParseError> {
        let groups = parse_groups(text)?;
        let triples = groups.iter().filter(|g| g.len() == 3).count();
        if triples != 1 {
            return Err(ParseError::TripleCount { found: triples });
        }
        let mut wedges = Vec::new();
        let mut jacobiator = None;
        for (k, g) in groups.iter().enumerate() {
            match g.as_slice() {
                [a, b] => wedges.push([*a, *b]),
                [a, b, c] => {
                    if k + 1 != groups.len() {
                        return Err(ParseError::Syntax(
                            "the three-target group must come last".into(),
                        ));
                    }
                    jacobiator = Some([*a, *b, *c]);
                }
                other => {
                    return Err(ParseError::Syntax(format!(
                        "group with {} targets in `{text}`",
                        other.len()
                    )))
                }
            }
        }
        LGraph::new(sinks, wedges, jacobiator.expect("counted above"), 1)
    }

    pub fn sinks(&self) -> usize {
        self.sinks
    }

    pub fn wedges(&self) -> &[[Label; 2]] {
        &self.wedges
    }

    pub fn jacobiator(&self) -> [Label; 3] {
        self.jacobiator
    }

    /// Label of the trivalent vertex.
    pub fn jacobiator_vertex(&self) -> usize {
        self.sinks + self.wedges.len()
    }

    pub fn internal(&self) -> usize {
        self.wedges.len() + 1
    }

    pub fn vertex_count(&self) -> usize {
        self.sinks + self.internal()
    }

    pub fn edge_count(&self) -> usize {
        2 * self.wedges.len() + 3
    }

    /// The ħ-order at which this graph enters the factorization.
    pub fn order(&self) -> usize {
        self.wedges.len() + 2
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn with_sign(mut self, sign: i8) -> Self {
        assert!(sign == 1 || sign == -1);
        self.sign = sign;
        self
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_count()];
        for pair in &self.wedges {
            for &t in pair {
                deg[t as usize] += 1;
            }
        }
        for &t in &self.jacobiator {
            deg[t as usize] += 1;
        }
        deg
    }

    pub fn sink_orders(&self) -> Vec<usize> {
        let mut deg = self.in_degrees();
        deg.truncate(self.sinks);
        deg
    }

    pub fn to_brackets(&self) -> String {
        format_groups(
            self.wedges
                .iter()
                .map(|p| p.as_slice())
                .chain(std::iter::once(self.jacobiator.as_slice())),
        )
    }

    /// Canonical form: wedges relabeled and sorted, the triple either kept in
    /// order or read up to skew permutation.
    pub fn canonicalize(&self, mode: TripleMode) -> LCanonicalForm {
        let w = self.wedges.len();
        assert!(w < MAX_INTERNAL);
        let m = self.sinks;
        let triple_perms: &[([usize; 3], i8)] = match mode {
            TripleMode::AsWritten => &TRIPLE_PERMS[..1],
            TripleMode::Skew => &TRIPLE_PERMS[..],
        };
        let mut best: Option<(Vec<[Label; 2]>, [Label; 3])> = None;
        let mut best_signs = (false, false);
        let mut buf = vec![[0 as Label; 2]; w];
        for_each_permutation(w, |perm| {
            let parity = relabel_sorted(&self.wedges, m, perm, &mut buf);
            let mapped = self.jacobiator.map(|t| map_label(t, m, perm));
            for (tp, tsign) in triple_perms {
                let triple = [mapped[tp[0]], mapped[tp[1]], mapped[tp[2]]];
                let s = parity * tsign;
                let better = match &best {
                    None => true,
                    Some((bw, bt)) => (buf.as_slice(), &triple) < (bw.as_slice(), bt),
                };
                if better {
                    best = Some((buf.clone(), triple));
                    best_signs = (s > 0, s < 0);
                } else if best
                    .as_ref()
                    .is_some_and(|(bw, bt)| bw.as_slice() == buf.as_slice() && *bt == triple)
                {
                    if s > 0 {
                        best_signs.0 = true;
                    } else {
                        best_signs.1 = true;
                    }
                }
            }
        });
        let (wedges, jacobiator) = best.expect("at least one permutation");
        let parity: i8 = if best_signs.0 { 1 } else { -1 };
        LCanonicalForm {
            graph: LGraph {
                sinks: m,
                wedges,
                jacobiator,
                sign: 1,
            },
            sign: self.sign * parity,
            zero: best_signs.0 && best_signs.1,
        }
    }

    pub fn is_zero_graph(&self, mode: TripleMode) -> bool {
        self.canonicalize(mode).zero
    }

    /// Relabelings of the wedge vertices (the trivalent vertex and the sinks
    /// stay fixed) preserving all target sets.
    pub fn automorphism_count(&self) -> usize {
        let w = self.wedges.len();
        let m = self.sinks;
        let sorted_triple = |t: [Label; 3]| {
            let mut t = t;
            t.sort_unstable();
            t
        };
        let identity: Vec<usize> = (0..w).collect();
        let mut base = vec![[0 as Label; 2]; w];
        relabel_sorted(&self.wedges, m, &identity, &mut base);
        let base_triple = sorted_triple(self.jacobiator);
        let mut buf = vec![[0 as Label; 2]; w];
        let mut count = 0;
        for_each_permutation(w, |perm| {
            relabel_sorted(&self.wedges, m, perm, &mut buf);
            let triple = sorted_triple(self.jacobiator.map(|t| map_label(t, m, perm)));
            if buf == base && triple == base_triple {
                count += 1;
            }
        });
        count
    }

    /// `3! * 2^(#wedges) * (#wedges + 1)! / #Aut`.
    pub fn multiplicity(&self) -> u64 {
        let w = self.wedges.len();
        6 * 2u64.pow(w as u32) * factorial(w + 1) / self.automorphism_count() as u64
    }
}

impl fmt::Display for LGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign < 0 {
            f.write_str("-")?;
        }
        f.write_str(&self.to_brackets())
    }
}

fn map_label(t: Label, sinks: usize, perm: &[usize]) -> Label {
    let t = t as usize;
    if t < sinks {
        t as Label
    } else {
        let k = t - sinks;
        // The trivalent vertex of a Leibniz graph sits past the permuted block.
        if k < perm.len() {
            (sinks + perm[k]) as Label
        } else {
            t as Label
        }
    }
}

/// Writes the relabeled wedge list, each pair sorted ascending, into `out`;
/// returns the sign picked up by the sorting.
fn relabel_sorted(
    targets: &[[Label; 2]],
    sinks: usize,
    perm: &[usize],
    out: &mut [[Label; 2]],
) -> i8 {
    let mut sign = 1;
    for (i, pair) in targets.iter().enumerate() {
        let a = map_label(pair[0], sinks, perm);
        let b = map_label(pair[1], sinks, perm);
        out[perm[i]] = if a < b {
            [a, b]
        } else {
            sign = -sign;
            [b, a]
        };
    }
    sign
}

pub(crate) fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Calls `f` once for every permutation of `0..n` (Heap's algorithm).
pub fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize])) {
    let mut perm: Vec<usize> = (0..n).collect();
    f(&perm);
    let mut c = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            f(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

fn parse_groups(text: &str) -> Result<Vec<Vec<Label>>, ParseError> {
    let inner = text
        .trim()
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| ParseError::Syntax(format!("expected `[...]`, found `{text}`")))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(';')
        .map(|group| {
            let group = group.trim();
            if group.is_empty() {
                return Err(ParseError::Syntax(format!("empty group in `{text}`")));
            }
            if group.contains(',') {
                group.split(',').map(|t| parse_label(t.trim())).collect()
            } else {
                group
                    .chars()
                    .map(|c| {
                        c.to_digit(10)
                            .map(|d| d as Label)
                            .ok_or_else(|| ParseError::BadToken {
                                token: c.to_string(),
                                reason: "not a digit".into(),
                            })
                    })
                    .collect()
            }
        })
        .collect()
}

fn format_groups<'a>(groups: impl Iterator<Item = &'a [Label]>) -> String {
    let parts: Vec<String> = groups
        .map(|g| {
            if g.iter().any(|&t| t >= 10) {
                g.iter()
                    .map(|t| t.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            } else {
                g.iter().map(|t| t.to_string()).collect()
            }
        })
        .collect();
    format!("[{}]", parts.join(";"))
}
