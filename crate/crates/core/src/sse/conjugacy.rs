//! The edge-shift conjugacy induced by an elementary equivalence `A = RS`,
//! `B = SR`.
//!
//! Edges of a multigraph with adjacency matrix `M` are triples
//! `(source, target, copy)` with `1 <= copy <= M(source, target)`, all
//! 1-based. `α` matches the edges `i -> j` of `A` with the two-step paths
//! `r s` of the `R`/`S` bipartite graph, and `β` matches the edges of `B`
//! with the paths `s r`; both bijections enumerate the paths by middle
//! vertex, then `R`-copy, then `S`-copy.

use std::collections::BTreeMap;
use std::fmt;

use super::equivalence::verify_elementary;
use super::matrix::IntMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub src: usize,
    pub tgt: usize,
    pub copy: usize,
}

impl Edge {
    pub fn new(src: usize, tgt: usize, copy: usize) -> Self {
        Edge { src, tgt, copy }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.src, self.tgt, self.copy)
    }
}

/// All edges of the multigraph of `m`, in lexicographic order.
pub fn edges(m: &IntMatrix) -> Result<Vec<Edge>> {
    let mut out = Vec::new();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            for c in 1..=m.small_entry(i, j)? {
                out.push(Edge::new(i + 1, j + 1, c));
            }
        }
    }
    Ok(out)
}

/// A finite path `e_0 e_1 ...` in the edge graph of a square matrix.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeGraphPath {
    pub edges: Vec<Edge>,
}

impl EdgeGraphPath {
    /// Check every edge against `m` and that consecutive edges meet.
    pub fn new(m: &IntMatrix, edges: Vec<Edge>) -> Result<Self> {
        for (k, e) in edges.iter().enumerate() {
            let ok = (1..=m.rows()).contains(&e.src)
                && (1..=m.cols()).contains(&e.tgt)
                && e.copy >= 1
                && e.copy <= m.small_entry(e.src - 1, e.tgt - 1)?;
            if !ok {
                return Err(Error::validation(format!("edges[{k}]"), format!("{e} is not an edge")));
            }
        }
        if let Some(k) = edges.windows(2).position(|w| w[0].tgt != w[1].src) {
            return Err(Error::validation(
                format!("edges[{}]", k + 1),
                format!("{} does not start where {} ends", edges[k + 1], edges[k]),
            ));
        }
        Ok(EdgeGraphPath { edges })
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// The shift: drop the first edge.
    pub fn shift(&self) -> Self {
        EdgeGraphPath {
            edges: self.edges.iter().skip(1).copied().collect(),
        }
    }

    pub fn truncate(&self, len: usize) -> Self {
        EdgeGraphPath {
            edges: self.edges.iter().take(len).copied().collect(),
        }
    }
}

impl fmt::Display for EdgeGraphPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.edges.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(" "))
    }
}

/// Every path of exactly `len` edges in the edge graph of `m`.
pub fn edge_paths(m: &IntMatrix, len: usize) -> Result<Vec<EdgeGraphPath>> {
    let all = edges(m)?;
    let mut out: Vec<Vec<Edge>> = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|p| {
                all.iter()
                    .filter(|e| p.last().is_none_or(|l| l.tgt == e.src))
                    .map(|e| {
                        let mut q = p.clone();
                        q.push(*e);
                        q
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    Ok(out.into_iter().map(|edges| EdgeGraphPath { edges }).collect())
}

/// The two-step paths chosen for one edge: first leg, second leg.
pub type Leg = (Edge, Edge);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugacyPair {
    pub a: IntMatrix,
    pub b: IntMatrix,
    pub r: IntMatrix,
    pub s: IntMatrix,
    /// `α(a) = (r, s)`.
    pub alpha: BTreeMap<Edge, Leg>,
    /// `β(b) = (s, r)`.
    pub beta: BTreeMap<Edge, Leg>,
    alpha_inv: BTreeMap<Leg, Edge>,
    beta_inv: BTreeMap<Leg, Edge>,
}

/// Match edges of `m = first * second` with two-step paths.
fn bijection(
    m: &IntMatrix,
    first: &IntMatrix,
    second: &IntMatrix,
    first_is_r: bool,
) -> Result<BTreeMap<Edge, Leg>> {
    let mut out = BTreeMap::new();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let mut legs = Vec::new();
            for k in 0..first.cols() {
                for c1 in 1..=first.small_entry(i, k)? {
                    for c2 in 1..=second.small_entry(k, j)? {
                        let e1 = Edge::new(i + 1, k + 1, c1);
                        let e2 = Edge::new(k + 1, j + 1, c2);
                        // key: middle vertex, R-copy, S-copy
                        let key = if first_is_r { (k, c1, c2) } else { (k, c2, c1) };
                        legs.push((key, (e1, e2)));
                    }
                }
            }
            legs.sort();
            let count = m.small_entry(i, j)?;
            if legs.len() != count {
                return Err(Error::validation("certificate", "the pair does not factor the matrix"));
            }
            for (c, (_, leg)) in legs.into_iter().enumerate() {
                out.insert(Edge::new(i + 1, j + 1, c + 1), leg);
            }
        }
    }
    Ok(out)
}

pub fn build_conjugacy(r: &IntMatrix, s: &IntMatrix, a: &IntMatrix, b: &IntMatrix) -> Result<ConjugacyPair> {
    if !verify_elementary(a, r, s, b)? {
        return Err(Error::validation("certificate", "A = RS and B = SR do not both hold"));
    }
    let alpha = bijection(a, r, s, true)?;
    let beta = bijection(b, s, r, false)?;
    let invert = |m: &BTreeMap<Edge, Leg>| m.iter().map(|(e, l)| (*l, *e)).collect();
    Ok(ConjugacyPair {
        alpha_inv: invert(&alpha),
        beta_inv: invert(&beta),
        a: a.clone(),
        b: b.clone(),
        r: r.clone(),
        s: s.clone(),
        alpha,
        beta,
    })
}

impl ConjugacyPair {
    /// `φ(a_0 a_1 ...) = b_0 b_1 ...` with `α(a_k) = r_k s_k` and
    /// `β(b_k) = s_k r_{k+1}`; a path of `L` edges gives `L - 1` edges.
    pub fn apply_phi(&self, p: &EdgeGraphPath) -> Result<EdgeGraphPath> {
        let p = EdgeGraphPath::new(&self.a, p.edges.clone())?;
        if p.len() < 2 {
            return Err(Error::Parameter("φ needs a path of at least two edges".into()));
        }
        let legs: Vec<Leg> = p.edges.iter().map(|e| self.alpha[e]).collect();
        let edges = legs.windows(2).map(|w| self.beta_inv[&(w[0].1, w[1].0)]).collect();
        Ok(EdgeGraphPath { edges })
    }

    /// `ψ(b_0 b_1 ...) = a_0 a_1 ...` with `β(b_k) = s_k r_k` and
    /// `α(a_k) = r_k s_{k+1}`, so that `ψφ` and `φψ` are the shifts.
    pub fn apply_psi(&self, p: &EdgeGraphPath) -> Result<EdgeGraphPath> {
        let p = EdgeGraphPath::new(&self.b, p.edges.clone())?;
        if p.len() < 2 {
            return Err(Error::Parameter("ψ needs a path of at least two edges".into()));
        }
        let legs: Vec<Leg> = p.edges.iter().map(|e| self.beta[e]).collect();
        let edges = legs.windows(2).map(|w| self.alpha_inv[&(w[0].1, w[1].0)]).collect();
        Ok(EdgeGraphPath { edges })
    }

    /// `a -> r s` and `b -> s r` lines.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (e, (x, y)) in &self.alpha {
            out.push_str(&format!("alpha {e} -> r{x} s{y}\n"));
        }
        for (e, (x, y)) in &self.beta {
            out.push_str(&format!("beta {e} -> s{x} r{y}\n"));
        }
        out
    }
}
