//! Graphs as polydifferential operators on polynomial bivectors.

use std::collections::HashMap;

use crate::composer::StarSeries;
use crate::error::{Error, ParseError, Result};
use crate::graph::{KGraph, LGraph, Label};
use crate::leibniz::{expand, tripod};
use crate::poly::Poly;
use crate::scalar::Scalar;
use crate::series::{strip_comment, GraphSum};

/// An antisymmetric matrix `P^{ij}` of polynomials in `x1..xr`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyBivector<C> {
    dim: usize,
    entries: Vec<Vec<Poly<C>>>,
}

impl<C: Scalar> PolyBivector<C> {
    pub fn new(entries: Vec<Vec<Poly<C>>>) -> Result<Self> {
        let dim = entries.len();
        for row in &entries {
            if row.len() != dim {
                return Err(Error::Dimension {
                    expected: dim,
                    found: row.len(),
                });
            }
            for p in row {
                if p.vars() != dim {
                    return Err(Error::Dimension {
                        expected: dim,
                        found: p.vars(),
                    });
                }
            }
        }
        for i in 0..dim {
            for j in 0..dim {
                if entries[i][j] != entries[j][i].scale(&-C::one()) {
                    return Err(ParseError::Syntax(format!(
                        "bivector is not antisymmetric at ({}, {})",
                        i + 1,
                        j + 1
                    ))
                    .into());
                }
            }
        }
        Ok(PolyBivector { dim, entries })
    }

    /// Builds `P` from its entries above the diagonal.
    pub fn from_upper(dim: usize, mut upper: impl FnMut(usize, usize) -> Poly<C>) -> Self {
        let mut entries = vec![vec![Poly::zero(dim); dim]; dim];
        for i in 0..dim {
            for j in i + 1..dim {
                let p = upper(i, j);
                entries[j][i] = p.scale(&-C::one());
                entries[i][j] = p;
            }
        }
        PolyBivector { dim, entries }
    }

    /// `P^{12} = 1` in dimension 2.
    pub fn symplectic() -> Self {
        PolyBivector::from_upper(2, |_, _| Poly::one(2))
    }

    /// `P^{ij} = ε^{ijk} x_k` in dimension 3.
    pub fn rotation() -> Self {
        PolyBivector::from_upper(3, |i, j| {
            let (k, sign) = match (i, j) {
                (0, 1) => (2, 1),
                (0, 2) => (1, -1),
                _ => (0, 1),
            };
            Poly::var(3, k).scale(&C::from_i64(sign))
        })
    }

    /// A dimension line followed by `r` lines of `r` comma-separated
    /// polynomials; `#` comments allowed.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(k, l)| (k + 1, strip_comment(l)))
            .filter(|(_, l)| !l.is_empty());
        let (k, first) = lines
            .next()
            .ok_or_else(|| ParseError::Syntax("empty bivector file".into()))?;
        let dim: usize = first.parse().map_err(|_| {
            ParseError::BadToken {
                token: first.to_string(),
                reason: "expected the dimension".into(),
            }
            .at_line(k)
        })?;
        let mut entries = Vec::new();
        for (k, line) in lines {
            let row: Vec<Poly<C>> = line
                .split(',')
                .map(|cell| Poly::parse(dim, cell))
                .collect::<Result<_, _>>()
                .map_err(|e| e.at_line(k))?;
            entries.push(row);
        }
        if entries.len() != dim {
            return Err(Error::Dimension {
                expected: dim,
                found: entries.len(),
            });
        }
        PolyBivector::new(entries)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.dim);
        for row in &self.entries {
            let cells: Vec<String> = row.iter().map(Poly::to_string).collect();
            out.push_str(&cells.join(", "));
            out.push('\n');
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn component(&self, i: usize, j: usize) -> &Poly<C> {
        &self.entries[i][j]
    }

    /// `T^{abc} = Σ_ℓ P^{ℓc} ∂_ℓ P^{ab} + P^{ℓa} ∂_ℓ P^{bc} + P^{ℓb} ∂_ℓ P^{ca}`,
    /// the tensor carried by an unexpanded Jacobiator vertex, indexed
    /// `(a·r + b)·r + c`.
    pub fn jacobiator_tensor(&self) -> Vec<Poly<C>> {
        let r = self.dim;
        let mut out = vec![Poly::zero(r); r * r * r];
        let term = |a: usize, b: usize, c: usize| {
            let mut acc = Poly::zero(r);
            for l in 0..r {
                let lhs = &self.entries[l][c];
                if lhs.is_zero() {
                    continue;
                }
                acc.add_assign(&lhs.mul(&self.entries[a][b].derivative(l)));
            }
            acc
        };
        for a in 0..r {
            for b in 0..r {
                for c in 0..r {
                    let mut t = term(a, b, c);
                    t.add_assign(&term(b, c, a));
                    t.add_assign(&term(c, a, b));
                    out[(a * r + b) * r + c] = t;
                }
            }
        }
        out
    }

    pub fn is_poisson(&self) -> bool {
        self.jacobiator_tensor().iter().all(Poly::is_zero)
    }
}

/// `{f, g} = P^{ij} ∂_i f ∂_j g`.
pub fn bracket<C: Scalar>(p: &PolyBivector<C>, f: &Poly<C>, g: &Poly<C>) -> Poly<C> {
    let mut out = Poly::zero(p.dim);
    for i in 0..p.dim {
        let fi = f.derivative(i);
        if fi.is_zero() {
            continue;
        }
        for j in 0..p.dim {
            if p.entries[i][j].is_zero() {
                continue;
            }
            out.add_assign(&p.entries[i][j].mul(&fi).mul(&g.derivative(j)));
        }
    }
    out
}

/// `{{f,g},h} + {{g,h},f} + {{h,f},g}`, computed without graphs.
pub fn jacobiator_direct<C: Scalar>(
    p: &PolyBivector<C>,
    f: &Poly<C>,
    g: &Poly<C>,
    h: &Poly<C>,
) -> Poly<C> {
    let mut out = bracket(p, &bracket(p, f, g), h);
    out.add_assign(&bracket(p, &bracket(p, g, h), f));
    out.add_assign(&bracket(p, &bracket(p, h, f), g));
    out
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Content {
    Sink(usize),
    Bivector(usize),
    Trivector(usize),
}

/// Shared derivative cache for evaluations against one bivector and one
/// argument tuple.
struct Evaluator<'a, C: Scalar> {
    p: &'a PolyBivector<C>,
    args: &'a [Poly<C>],
    trivector: Option<Vec<Poly<C>>>,
    cache: HashMap<(Content, Vec<usize>), Poly<C>>,
}

impl<'a, C: Scalar> Evaluator<'a, C> {
    fn new(p: &'a PolyBivector<C>, args: &'a [Poly<C>]) -> Result<Self> {
        for a in args {
            if a.vars() != p.dim {
                return Err(Error::Dimension {
                    expected: p.dim,
                    found: a.vars(),
                });
            }
        }
        Ok(Evaluator {
            p,
            args,
            trivector: None,
            cache: HashMap::new(),
        })
    }

    fn base(&self, content: Content) -> &Poly<C> {
        let r = self.p.dim;
        match content {
            Content::Sink(s) => &self.args[s],
            Content::Bivector(k) => &self.p.entries[k / r][k % r],
            Content::Trivector(k) => &self.trivector.as_ref().expect("computed on demand")[k],
        }
    }

    fn derived(&mut self, content: Content, mut indices: Vec<usize>) -> Poly<C> {
        indices.sort_unstable();
        if let Some(p) = self.cache.get(&(content, indices.clone())) {
            return p.clone();
        }
        let p = self.base(content).derivatives(&indices);
        self.cache.insert((content, indices), p.clone());
        p
    }

    /// Internal vertices are given by their target lists (length 2 or 3);
    /// vertex `k` has label `sinks + k`.
    fn eval(&mut self, sinks: usize, vertices: &[Vec<Label>]) -> Result<Poly<C>> {
        if self.args.len() != sinks {
            return Err(Error::Dimension {
                expected: sinks,
                found: self.args.len(),
            });
        }
        let r = self.p.dim;
        if vertices.iter().any(|t| t.len() == 3) && self.trivector.is_none() {
            self.trivector = Some(self.p.jacobiator_tensor());
        }
        let mut indegree = vec![0u32; sinks + vertices.len()];
        for t in vertices.iter().flatten() {
            indegree[*t as usize] += 1;
        }
        let bivector_degree = self.p.entries.iter().flatten().map(Poly::degree).max();
        let trivector_degree = self.trivector.iter().flatten().map(Poly::degree).max();
        let vanishes = indegree.iter().enumerate().any(|(v, &d)| {
            let top = if v < sinks {
                (!self.args[v].is_zero()).then(|| self.args[v].degree())
            } else if vertices[v - sinks].len() == 2 {
                bivector_degree
            } else {
                trivector_degree
            };
            top.is_none_or(|top| d > top)
        });
        let mut out = Poly::zero(r);
        if vanishes {
            return Ok(out);
        }
        let total = sinks + vertices.len();
        let mut incoming: Vec<Vec<(usize, u32)>> = vec![Vec::new(); total];
        for (v, targets) in vertices.iter().enumerate() {
            let arity = targets.len() as u32;
            for (slot, &t) in targets.iter().enumerate() {
                incoming[t as usize].push((v, (r as u32).pow(arity - 1 - slot as u32)));
            }
        }
        // A factor is known once its vertex and every source of an edge into
        // it have been assigned indices.
        let mut ready: Vec<Vec<usize>> = vec![Vec::new(); vertices.len() + 1];
        for (u, ins) in incoming.iter().enumerate() {
            let own = u.checked_sub(sinks).map(|v| v + 1).unwrap_or(0);
            let last = ins.iter().map(|&(src, _)| src + 1).fold(own, usize::max);
            ready[last].push(u);
        }
        let plan = Plan {
            sinks,
            vertices,
            incoming,
            ready,
        };
        let mut choice = vec![0; vertices.len()];
        let Some(start) = self.factors(&plan, 0, &choice, Poly::one(r)) else {
            return Ok(out);
        };
        self.walk(&plan, 0, &mut choice, start, &mut out);
        Ok(out)
    }

    fn component(&self, arity: usize, k: usize) -> Content {
        if arity == 2 {
            Content::Bivector(k)
        } else {
            Content::Trivector(k)
        }
    }

    /// Multiplies `acc` by the factors that become known at `stage`, or
    /// returns `None` if one of them vanishes.
    fn factors(
        &mut self,
        plan: &Plan<'_>,
        stage: usize,
        choice: &[usize],
        mut acc: Poly<C>,
    ) -> Option<Poly<C>> {
        let r = self.p.dim;
        for &u in &plan.ready[stage] {
            let content = if u < plan.sinks {
                Content::Sink(u)
            } else {
                let v = u - plan.sinks;
                self.component(plan.vertices[v].len(), choice[v])
            };
            let indices = plan.incoming[u]
                .iter()
                .map(|&(src, place)| choice[src] / place as usize % r)
                .collect();
            let d = self.derived(content, indices);
            if d.is_zero() {
                return None;
            }
            acc = acc.mul(&d);
        }
        Some(acc)
    }

    fn walk(
        &mut self,
        plan: &Plan<'_>,
        v: usize,
        choice: &mut Vec<usize>,
        acc: Poly<C>,
        out: &mut Poly<C>,
    ) {
        if v == plan.vertices.len() {
            out.add_assign(&acc);
            return;
        }
        let arity = plan.vertices[v].len();
        for k in 0..self.p.dim.pow(arity as u32) {
            if self.base(self.component(arity, k)).is_zero() {
                continue;
            }
            choice[v] = k;
            if let Some(next) = self.factors(plan, v + 1, choice, acc.clone()) {
                self.walk(plan, v + 1, choice, next, out);
            }
        }
    }
}

struct Plan<'v> {
    sinks: usize,
    vertices: &'v [Vec<Label>],
    /// `(source vertex, place value of the edge's index in its component)`.
    incoming: Vec<Vec<(usize, u32)>>,
    /// `ready[s]`: vertices whose factor is known after `s` internal vertices
    /// are assigned.
    ready: Vec<Vec<usize>>,
}

fn kgraph_vertices(g: &KGraph) -> Vec<Vec<Label>> {
    g.targets().iter().map(|t| t.to_vec()).collect()
}

fn lgraph_vertices(l: &LGraph) -> Vec<Vec<Label>> {
    let mut v: Vec<Vec<Label>> = l.wedges().iter().map(|t| t.to_vec()).collect();
    v.push(l.jacobiator().to_vec());
    v
}

/// `Σ over edge indices Π_vertices ∂_{incoming} (content)`, times the
/// graph's sign. Sinks carry the arguments, wedges carry `P^{LR}`.
pub fn eval_graph<C: Scalar>(g: &KGraph, p: &PolyBivector<C>, args: &[Poly<C>]) -> Result<Poly<C>> {
    let mut e = Evaluator::new(p, args)?;
    let out = e.eval(g.sinks(), &kgraph_vertices(g))?;
    Ok(out.scale(&C::from_i64(g.sign() as i64)))
}

/// Linear extension of [`eval_graph`].
pub fn eval_sum<C: Scalar>(
    sum: &GraphSum<C>,
    p: &PolyBivector<C>,
    args: &[Poly<C>],
) -> Result<Poly<C>> {
    let mut e = Evaluator::new(p, args)?;
    let mut out = Poly::zero(p.dim);
    for (g, c) in sum.iter() {
        let v = e.eval(g.sinks(), &kgraph_vertices(g))?;
        out.add_assign(&v.scale(&(c.clone() * C::from_i64(g.sign() as i64))));
    }
    if sum.is_empty() && args.len() != sum.sinks() {
        return Err(Error::Dimension {
            expected: sum.sinks(),
            found: args.len(),
        });
    }
    Ok(out)
}

/// Evaluates a Leibniz graph with its Jacobiator vertex left unexpanded,
/// carrying [`PolyBivector::jacobiator_tensor`].
pub fn eval_lgraph<C: Scalar>(
    l: &LGraph,
    p: &PolyBivector<C>,
    args: &[Poly<C>],
) -> Result<Poly<C>> {
    let mut e = Evaluator::new(p, args)?;
    let out = e.eval(l.sinks(), &lgraph_vertices(l))?;
    Ok(out.scale(&C::from_i64(l.sign() as i64)))
}

/// `Σ c_L · L` with unexpanded Jacobiators.
pub fn eval_leibniz_sum<'a, C: Scalar>(
    terms: impl IntoIterator<Item = (&'a LGraph, &'a C)>,
    p: &PolyBivector<C>,
    args: &[Poly<C>],
) -> Result<Poly<C>> {
    let mut e = Evaluator::new(p, args)?;
    let mut out = Poly::zero(p.dim);
    for (l, c) in terms {
        if c.is_zero() {
            continue;
        }
        let v = e.eval(l.sinks(), &lgraph_vertices(l))?;
        out.add_assign(&v.scale(&(c.clone() * C::from_i64(l.sign() as i64))));
    }
    Ok(out)
}

/// `Jac(P)(f, g, h)` as the evaluated expansion of the tripod.
pub fn jacobiator<C: Scalar>(
    p: &PolyBivector<C>,
    f: &Poly<C>,
    g: &Poly<C>,
    h: &Poly<C>,
) -> Result<Poly<C>> {
    eval_sum(&expand(&tripod()), p, &[f.clone(), g.clone(), h.clone()])
}

/// `a · b` for ħ-polynomials `a = Σ ħⁱ a_i`, `b = Σ ħʲ b_j`, through ħ^order,
/// given a bilinear `product(x, y)` returning its ħ-coefficients.
pub fn series_product<C: Scalar>(
    order: usize,
    a: &[Poly<C>],
    b: &[Poly<C>],
    mut product: impl FnMut(&Poly<C>, &Poly<C>) -> Result<Vec<Poly<C>>>,
) -> Result<Vec<Poly<C>>> {
    let vars = a.iter().chain(b).map(Poly::vars).next().unwrap_or(0);
    let mut out = vec![Poly::zero(vars); order + 1];
    for (i, ai) in a.iter().enumerate().take(order + 1) {
        for (j, bj) in b.iter().enumerate().take(order + 1 - i) {
            if ai.is_zero() || bj.is_zero() {
                continue;
            }
            for (l, v) in product(ai, bj)?.iter().enumerate().take(order + 1 - i - j) {
                out[i + j + l].add_assign(v);
            }
        }
    }
    Ok(out)
}

/// The ħ-coefficients of `(f·g)·h − f·(g·h)` through ħ^order.
pub fn associator_with<C: Scalar>(
    order: usize,
    f: &Poly<C>,
    g: &Poly<C>,
    h: &Poly<C>,
    mut product: impl FnMut(&Poly<C>, &Poly<C>) -> Result<Vec<Poly<C>>>,
) -> Result<Vec<Poly<C>>> {
    let one = |x: &Poly<C>| vec![x.clone()];
    let fg = series_product(order, &one(f), &one(g), &mut product)?;
    let gh = series_product(order, &one(g), &one(h), &mut product)?;
    let left = series_product(order, &fg, &one(h), &mut product)?;
    let right = series_product(order, &one(f), &gh, &mut product)?;
    Ok(left.iter().zip(&right).map(|(l, r)| l.sub(r)).collect())
}

/// `f ⋆ g` through the series order.
pub fn star_product<C: Scalar>(
    star: &StarSeries<C>,
    p: &PolyBivector<C>,
    f: &Poly<C>,
    g: &Poly<C>,
) -> Result<Vec<Poly<C>>> {
    (0..=star.order())
        .map(|n| eval_sum(&star.component(n), p, &[f.clone(), g.clone()]))
        .collect()
}

/// The ħ-coefficients of `(f⋆g)⋆h − f⋆(g⋆h)` through the series order,
/// evaluated on polynomials without graph composition.
pub fn check_associativity<C: Scalar>(
    star: &StarSeries<C>,
    p: &PolyBivector<C>,
    f: &Poly<C>,
    g: &Poly<C>,
    h: &Poly<C>,
) -> Result<Vec<Poly<C>>> {
    let parts: Vec<GraphSum<C>> = (0..=star.order()).map(|n| star.component(n)).collect();
    associator_with(star.order(), f, g, h, |a, b| {
        parts
            .iter()
            .map(|s| eval_sum(s, p, &[a.clone(), b.clone()]))
            .collect()
    })
}

/// The Moyal product `exp(ħ P^{ij} ∂_i ⊗ ∂_j)` for constant `P`, through
/// ħ^order, computed on tensor factors without graphs.
pub fn moyal_product<C: Scalar>(
    p: &PolyBivector<C>,
    f: &Poly<C>,
    g: &Poly<C>,
    order: usize,
) -> Result<Vec<Poly<C>>> {
    let r = p.dim;
    let mut consts = vec![vec![C::zero(); r]; r];
    for i in 0..r {
        for j in 0..r {
            let e = &p.entries[i][j];
            if e.degree() > 0 {
                return Err(
                    ParseError::Syntax("Moyal product needs a constant bivector".into()).into(),
                );
            }
            consts[i][j] = e.coefficient(&vec![0; r]);
        }
    }
    let mut pairs = vec![(C::one(), f.clone(), g.clone())];
    let mut out = Vec::with_capacity(order + 1);
    let mut factorial = C::one();
    for n in 0..=order {
        if n > 0 {
            factorial = factorial * C::from_i64(n as i64);
            let mut next = Vec::new();
            for (c, a, b) in &pairs {
                for i in 0..r {
                    let da = a.derivative(i);
                    if da.is_zero() {
                        continue;
                    }
                    for j in 0..r {
                        if consts[i][j].is_zero() {
                            continue;
                        }
                        let db = b.derivative(j);
                        if !db.is_zero() {
                            next.push((c.clone() * consts[i][j].clone(), da.clone(), db));
                        }
                    }
                }
            }
            pairs = next;
        }
        let mut acc = Poly::zero(r);
        for (c, a, b) in &pairs {
            acc.add_assign(&a.mul(b).scale(c));
        }
        out.push(acc.scale(&(C::one() / factorial.clone())));
    }
    Ok(out)
}
