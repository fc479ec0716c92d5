//! Directed graphs on a countable vertex set and the graph-theoretic
//! predicates that decide the simplicity and pure-infiniteness criteria.
//!
//! Vertices are 1-based. `A(i, j) = 1` permits the transition `i -> j`.
//! Three presentations are supported:
//!
//! * [`Presentation::Finite`]: an explicit `n x n` 0/1 matrix;
//! * [`Presentation::Block`]: vertices grouped into classes with contiguous
//!   ranges, `A(i, j) = block(class(i), class(j))`; only the last class may be
//!   infinite;
//! * [`Presentation::Banded`]: a finite prefix `1..=N` followed by an infinite
//!   tail where `A(i, j) = 1` iff `j - i` is one of the offsets.
//!
//! Every predicate is decided symbolically on the infinite presentations.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// A 1-based vertex identifier.
pub type Vertex = usize;

/// An admissible (or candidate) sequence of vertices.
pub type Word = Vec<Vertex>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cardinality {
    Finite(usize),
    Infinite,
}

/// Out-degree of a vertex, which may be infinite in block presentations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Degree {
    Finite(usize),
    Infinite,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Presentation {
    Finite {
        rows: Vec<Vec<bool>>,
    },
    Block {
        classes: Vec<Cardinality>,
        block: Vec<Vec<bool>>,
    },
    Banded {
        prefix: Vec<Vec<bool>>,
        /// Sorted, distinct, positive.
        offsets: Vec<usize>,
        /// `cross[i][k]`: edge from prefix vertex `i + 1` to `i + 1 + offsets[k]`.
        cross: Vec<Vec<bool>>,
    },
}

/// A validated graph presentation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphSpec {
    presentation: Presentation,
    /// First vertex of every class (block presentations only).
    class_starts: Vec<Vertex>,
}

fn bits(field: &str, rows: Vec<Vec<u8>>) -> Result<Vec<Vec<bool>>> {
    rows.into_iter()
        .enumerate()
        .map(|(r, row)| {
            row.into_iter()
                .enumerate()
                .map(|(c, x)| match x {
                    0 => Ok(false),
                    1 => Ok(true),
                    _ => Err(Error::validation(
                        format!("{field}[{r}][{c}]"),
                        format!("entry {x} is not 0 or 1"),
                    )),
                })
                .collect()
        })
        .collect()
}

fn check_square(field: &str, rows: &[Vec<bool>], n: usize) -> Result<()> {
    if rows.len() != n {
        return Err(Error::validation(
            field,
            format!("expected {n} rows, found {}", rows.len()),
        ));
    }
    for (r, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(Error::validation(
                format!("{field}[{r}]"),
                format!("expected {n} entries, found {}", row.len()),
            ));
        }
    }
    Ok(())
}

impl GraphSpec {
    /// A finite graph from a square 0/1 matrix.
    pub fn finite(rows: Vec<Vec<u8>>) -> Result<Self> {
        let rows = bits("rows", rows)?;
        if rows.is_empty() {
            return Err(Error::validation("rows", "a graph needs at least one vertex"));
        }
        check_square("rows", &rows, rows.len())?;
        Ok(GraphSpec {
            presentation: Presentation::Finite { rows },
            class_starts: Vec::new(),
        })
    }

    pub fn block(classes: Vec<Cardinality>, block: Vec<Vec<u8>>) -> Result<Self> {
        if classes.is_empty() {
            return Err(Error::validation("classes", "at least one class is required"));
        }
        let block = bits("block", block)?;
        check_square("block", &block, classes.len())?;
        let mut starts = Vec::with_capacity(classes.len());
        let mut next = 1;
        for (c, card) in classes.iter().enumerate() {
            starts.push(next);
            match card {
                Cardinality::Finite(0) => {
                    return Err(Error::validation(
                        format!("classes[{c}]"),
                        "class cardinality must be positive",
                    ))
                }
                Cardinality::Finite(k) => next += k,
                Cardinality::Infinite if c + 1 != classes.len() => {
                    return Err(Error::validation(
                        format!("classes[{c}]"),
                        "only the last class may be infinite",
                    ))
                }
                Cardinality::Infinite => {}
            }
        }
        Ok(GraphSpec {
            presentation: Presentation::Block { classes, block },
            class_starts: starts,
        })
    }

    pub fn banded(prefix: Vec<Vec<u8>>, offsets: Vec<usize>, cross: Vec<Vec<u8>>) -> Result<Self> {
        let prefix = bits("prefix", prefix)?;
        let n = prefix.len();
        check_square("prefix", &prefix, n)?;
        if offsets.contains(&0) {
            return Err(Error::validation("offsets", "offsets must be positive"));
        }
        let set: BTreeSet<usize> = offsets.iter().copied().collect();
        if set.len() != offsets.len() {
            return Err(Error::validation("offsets", "offsets must be distinct"));
        }
        // Keep cross columns aligned with the sorted offsets.
        let order: Vec<usize> = {
            let mut idx: Vec<usize> = (0..offsets.len()).collect();
            idx.sort_by_key(|&k| offsets[k]);
            idx
        };
        let cross = bits("cross", cross)?;
        let cross = if cross.is_empty() && (n == 0 || offsets.is_empty()) {
            vec![vec![false; offsets.len()]; n]
        } else {
            if cross.len() != n {
                return Err(Error::validation(
                    "cross",
                    format!("expected {n} rows (one per prefix vertex), found {}", cross.len()),
                ));
            }
            let mut sorted = Vec::with_capacity(n);
            for (r, row) in cross.iter().enumerate() {
                if row.len() != offsets.len() {
                    return Err(Error::validation(
                        format!("cross[{r}]"),
                        format!("expected {} entries (one per offset), found {}", offsets.len(), row.len()),
                    ));
                }
                let row: Vec<bool> = order.iter().map(|&k| row[k]).collect();
                for (k, &bit) in row.iter().enumerate() {
                    let d = offsets[order[k]];
                    if bit && r + 1 + d <= n {
                        return Err(Error::validation(
                            format!("cross[{r}]"),
                            format!("offset {d} from vertex {} lands inside the prefix; use the prefix matrix", r + 1),
                        ));
                    }
                }
                sorted.push(row);
            }
            sorted
        };
        Ok(GraphSpec {
            presentation: Presentation::Banded {
                prefix,
                offsets: set.into_iter().collect(),
                cross,
            },
            class_starts: Vec::new(),
        })
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    /// Number of vertices, or `None` for infinite presentations.
    pub fn vertex_count(&self) -> Option<usize> {
        match &self.presentation {
            Presentation::Finite { rows } => Some(rows.len()),
            Presentation::Block { classes, .. } => {
                let mut total = 0;
                for c in classes {
                    match c {
                        Cardinality::Finite(k) => total += k,
                        Cardinality::Infinite => return None,
                    }
                }
                Some(total)
            }
            Presentation::Banded { .. } => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.vertex_count().is_some()
    }

    pub fn has_vertex(&self, v: Vertex) -> bool {
        v >= 1 && self.vertex_count().is_none_or(|n| v <= n)
    }

    pub(crate) fn check_vertex(&self, v: Vertex) -> Result<()> {
        if self.has_vertex(v) {
            Ok(())
        } else {
            Err(Error::UnknownVertex(v))
        }
    }

    /// 1-based class of a vertex in a block presentation.
    pub fn class_of(&self, v: Vertex) -> Option<usize> {
        match &self.presentation {
            Presentation::Block { .. } if self.has_vertex(v) => {
                Some(self.class_starts.iter().rposition(|&s| s <= v).unwrap() + 1)
            }
            _ => None,
        }
    }

    /// Vertices of a class, `None` when the class is infinite.
    pub fn class_vertices(&self, class: usize) -> Option<std::ops::RangeInclusive<Vertex>> {
        match &self.presentation {
            Presentation::Block { classes, .. } => match classes.get(class.checked_sub(1)?)? {
                Cardinality::Finite(k) => {
                    let s = self.class_starts[class - 1];
                    Some(s..=s + k - 1)
                }
                Cardinality::Infinite => None,
            },
            _ => None,
        }
    }

    pub(crate) fn class_first_vertex(&self, class: usize) -> Vertex {
        self.class_starts[class - 1]
    }

    pub fn classes(&self) -> &[Cardinality] {
        match &self.presentation {
            Presentation::Block { classes, .. } => classes,
            _ => &[],
        }
    }

    /// Size of the banded prefix.
    pub fn cutoff(&self) -> Option<usize> {
        match &self.presentation {
            Presentation::Banded { prefix, .. } => Some(prefix.len()),
            _ => None,
        }
    }

    pub fn edge(&self, i: Vertex, j: Vertex) -> bool {
        if !self.has_vertex(i) || !self.has_vertex(j) {
            return false;
        }
        match &self.presentation {
            Presentation::Finite { rows } => rows[i - 1][j - 1],
            Presentation::Block { block, .. } => {
                block[self.class_of(i).unwrap() - 1][self.class_of(j).unwrap() - 1]
            }
            Presentation::Banded {
                prefix,
                offsets,
                cross,
            } => {
                let n = prefix.len();
                if i <= n && j <= n {
                    prefix[i - 1][j - 1]
                } else if j <= i {
                    false
                } else if i > n {
                    offsets.binary_search(&(j - i)).is_ok()
                } else {
                    offsets
                        .binary_search(&(j - i))
                        .is_ok_and(|k| cross[i - 1][k])
                }
            }
        }
    }

    pub fn out_degree(&self, i: Vertex) -> Degree {
        match &self.presentation {
            Presentation::Finite { rows } => {
                Degree::Finite(rows[i - 1].iter().filter(|&&b| b).count())
            }
            Presentation::Block { classes, block } => {
                let a = self.class_of(i).unwrap() - 1;
                let mut total = 0;
                for (b, card) in classes.iter().enumerate() {
                    if block[a][b] {
                        match card {
                            Cardinality::Finite(k) => total += k,
                            Cardinality::Infinite => return Degree::Infinite,
                        }
                    }
                }
                Degree::Finite(total)
            }
            Presentation::Banded {
                prefix,
                offsets,
                cross,
            } => {
                let n = prefix.len();
                if i > n {
                    Degree::Finite(offsets.len())
                } else {
                    let inner = prefix[i - 1].iter().filter(|&&b| b).count();
                    let outer = cross[i - 1].iter().filter(|&&b| b).count();
                    Degree::Finite(inner + outer)
                }
            }
        }
    }

    /// Successors of `i` in increasing order. Vertices above `window` are
    /// dropped; an infinite successor set without a window is an error.
    pub fn successors(&self, i: Vertex, window: Option<usize>) -> Result<Vec<Vertex>> {
        self.check_vertex(i)?;
        let cap = |v: Vertex| window.is_none_or(|w| v <= w);
        match &self.presentation {
            Presentation::Finite { rows } => Ok(rows[i - 1]
                .iter()
                .enumerate()
                .filter(|&(j, &b)| b && cap(j + 1))
                .map(|(j, _)| j + 1)
                .collect()),
            Presentation::Block { classes, block } => {
                let a = self.class_of(i).unwrap() - 1;
                let mut out = Vec::new();
                for (b, card) in classes.iter().enumerate() {
                    if !block[a][b] {
                        continue;
                    }
                    let start = self.class_starts[b];
                    let end = match (card, window) {
                        (Cardinality::Finite(k), _) => start + k - 1,
                        (Cardinality::Infinite, Some(w)) => w,
                        (Cardinality::Infinite, None) => {
                            return Err(Error::Unsupported(format!(
                                "vertex {i} has infinitely many successors; supply a window"
                            )))
                        }
                    };
                    out.extend((start..=end).filter(|&v| cap(v)));
                }
                Ok(out)
            }
            Presentation::Banded {
                prefix,
                offsets,
                cross,
            } => {
                let n = prefix.len();
                let mut out: Vec<Vertex> = Vec::new();
                if i <= n {
                    out.extend((1..=n).filter(|&j| prefix[i - 1][j - 1]));
                    out.extend(
                        offsets
                            .iter()
                            .zip(&cross[i - 1])
                            .filter(|&(_, &b)| b)
                            .map(|(d, _)| i + d),
                    );
                } else {
                    out.extend(offsets.iter().map(|d| i + d));
                }
                out.retain(|&v| cap(v));
                Ok(out)
            }
        }
    }

    /// The finite set of vertices that can lie on a loop.
    pub(crate) fn loop_carrier(&self) -> Vec<Vertex> {
        match &self.presentation {
            Presentation::Finite { rows } => (1..=rows.len()).collect(),
            Presentation::Block { classes, .. } => classes
                .iter()
                .enumerate()
                .filter_map(|(c, card)| match card {
                    Cardinality::Finite(_) => self.class_vertices(c + 1),
                    Cardinality::Infinite => None,
                })
                .flatten()
                .collect(),
            Presentation::Banded { prefix, .. } => (1..=prefix.len()).collect(),
        }
    }

    /// The 0/1 matrix of a finite graph.
    pub fn adjacency(&self) -> Result<Vec<Vec<bool>>> {
        let n = self.vertex_count().ok_or_else(|| {
            Error::Unsupported("an explicit adjacency matrix needs a finite graph".into())
        })?;
        Ok((1..=n)
            .map(|i| (1..=n).map(|j| self.edge(i, j)).collect())
            .collect())
    }

    fn require_finite(&self, what: &str) -> Result<usize> {
        self.vertex_count()
            .ok_or_else(|| Error::Unsupported(format!("{what} needs a finite graph")))
    }

    /// True iff every vertex has an outgoing edge.
    pub fn has_no_zero_rows(&self) -> bool {
        self.first_zero_row().is_none()
    }

    /// The smallest vertex without outgoing edges.
    pub fn first_zero_row(&self) -> Option<Vertex> {
        match &self.presentation {
            Presentation::Finite { rows } => {
                rows.iter().position(|r| !r.iter().any(|&b| b)).map(|i| i + 1)
            }
            Presentation::Block { block, .. } => block
                .iter()
                .position(|r| !r.iter().any(|&b| b))
                .map(|c| self.class_starts[c]),
            Presentation::Banded {
                prefix,
                offsets,
                cross,
            } => {
                let n = prefix.len();
                (1..=n)
                    .find(|&i| {
                        !prefix[i - 1].iter().any(|&b| b) && !cross[i - 1].iter().any(|&b| b)
                    })
                    .or_else(|| offsets.is_empty().then_some(n + 1))
            }
        }
    }

    /// Condition (L): every loop has an outgoing edge. On failure the witness
    /// is the exitless loop with the smallest base point.
    ///
    /// A loop has no outgoing edge iff every vertex on it has out-degree one,
    /// so it suffices to look for a cycle of the successor function restricted
    /// to out-degree-one vertices.
    pub fn condition_l(&self) -> (bool, Option<Loop>) {
        let carrier = self.loop_carrier();
        let next = |v: Vertex| -> Option<Vertex> {
            if self.out_degree(v) != Degree::Finite(1) {
                return None;
            }
            let w = self.successors(v, None).ok()?[0];
            Some(w)
        };
        let mut on_cycle = BTreeSet::new();
        for &start in &carrier {
            // Walk at most |carrier| steps; if we come back to start it's a cycle.
            let mut v = start;
            for _ in 0..carrier.len() {
                match next(v) {
                    Some(w) => v = w,
                    None => break,
                }
                if v == start {
                    on_cycle.insert(start);
                    break;
                }
            }
        }
        match on_cycle.first() {
            None => (true, None),
            Some(&base) => {
                let mut word = vec![base];
                let mut v = next(base).unwrap();
                while v != base {
                    word.push(v);
                    v = next(v).unwrap();
                }
                word.push(base);
                (false, Some(Loop { vertices: word }))
            }
        }
    }

    /// Strong connectivity. On failure returns the lexicographically smallest
    /// pair `(i, j)` with no path from `i` to `j` (for banded graphs, the
    /// canonical tail pair `(N + 2, N + 1)`).
    pub fn is_irreducible(&self) -> (bool, Option<(Vertex, Vertex)>) {
        match &self.presentation {
            Presentation::Finite { .. } => {
                let n = self.vertex_count().unwrap();
                let reach = closure(n, |i, j| self.edge(i + 1, j + 1));
                for i in 0..n {
                    for j in 0..n {
                        if i != j && !reach[i][j] {
                            return (false, Some((i + 1, j + 1)));
                        }
                    }
                }
                (true, None)
            }
            Presentation::Block { classes, block } => {
                let r = classes.len();
                let reach = closure(r, |a, b| block[a][b]);
                let big = |c: usize| classes[c] != Cardinality::Finite(1);
                let mut best: Option<(Vertex, Vertex)> = None;
                for a in 0..r {
                    for b in 0..r {
                        let fails = if a == b { big(a) && !reach[a][a] } else { !reach[a][b] };
                        if fails {
                            let i = self.class_starts[a];
                            let j = if a == b { i + 1 } else { self.class_starts[b] };
                            if best.is_none_or(|p| (i, j) < p) {
                                best = Some((i, j));
                            }
                        }
                    }
                }
                (best.is_none(), best)
            }
            Presentation::Banded { prefix, .. } => {
                let n = prefix.len();
                (false, Some((n + 2, n + 1)))
            }
        }
    }

    /// True iff every vertex has a path to a vertex lying on a loop; on
    /// failure returns the smallest vertex that cannot reach a loop.
    pub fn every_vertex_reaches_loop(&self) -> (bool, Option<Vertex>) {
        match &self.presentation {
            Presentation::Finite { .. } => {
                let n = self.vertex_count().unwrap();
                let reach = closure(n, |i, j| self.edge(i + 1, j + 1));
                let witness = (0..n).find(|&i| !(0..n).any(|j| (i == j || reach[i][j]) && reach[j][j]));
                (witness.is_none(), witness.map(|i| i + 1))
            }
            Presentation::Block { classes, block } => {
                let r = classes.len();
                let reach = closure(r, |a, b| block[a][b]);
                let witness =
                    (0..r).find(|&a| !(0..r).any(|b| (a == b || reach[a][b]) && reach[b][b]));
                (witness.is_none(), witness.map(|a| self.class_starts[a]))
            }
            Presentation::Banded { prefix, .. } => {
                // The tail never returns, so loops live in the prefix.
                let n = prefix.len();
                let reach = closure(n, |i, j| prefix[i][j]);
                let witness = (0..n)
                    .find(|&i| !(0..n).any(|j| (i == j || reach[i][j]) && reach[j][j]))
                    .map(|i| i + 1)
                    .unwrap_or(n + 1);
                (false, Some(witness))
            }
        }
    }

    /// All loops of length `1..=max_len` at every base point, sorted
    /// lexicographically, each flagged with whether it has an outgoing edge.
    pub fn enumerate_loops(&self, max_len: usize) -> Result<Vec<FlaggedLoop>> {
        let n = self.require_finite("loop enumeration")?;
        let succ: Vec<Vec<Vertex>> = (1..=n)
            .map(|i| self.successors(i, None))
            .collect::<Result<_>>()?;
        let mut out = Vec::new();
        let mut word = Vec::with_capacity(max_len + 1);
        for base in 1..=n {
            word.clear();
            word.push(base);
            loops_from(&succ, base, max_len, &mut word, &mut out);
        }
        out.sort();
        Ok(out
            .into_iter()
            .map(|vertices| {
                let l = Loop { vertices };
                let exit = self.loop_has_exit(&l);
                FlaggedLoop {
                    lp: l,
                    has_outgoing_edge: exit,
                }
            })
            .collect())
    }

    /// A loop has an outgoing edge iff one of its vertices has out-degree at
    /// least two (the next loop vertex is always one successor).
    pub fn loop_has_exit(&self, l: &Loop) -> bool {
        l.vertices[..l.len()]
            .iter()
            .any(|&v| self.out_degree(v) != Degree::Finite(1))
    }

    pub fn classify(&self) -> ClassificationReport {
        let no_zero_rows = self.has_no_zero_rows();
        let condition_l = self.condition_l();
        let irreducible = self.is_irreducible();
        let reaches = self.every_vertex_reaches_loop();

        let verdict = |second: bool, witness: Option<Witness>| {
            if !no_zero_rows {
                Verdict::NotApplicable
            } else if let Some(l) = &condition_l.1 {
                Verdict::CriteriaFailed(Witness::ExitlessLoop(l.clone()))
            } else if !second {
                Verdict::CriteriaFailed(witness.expect("failed predicate carries a witness"))
            } else {
                Verdict::CriteriaMet
            }
        };
        let simple = verdict(
            irreducible.0,
            irreducible.1.map(|(i, j)| Witness::Unreachable(i, j)),
        );
        let purely_infinite = verdict(reaches.0, reaches.1.map(Witness::NoLoopReachable));
        ClassificationReport {
            no_zero_rows,
            zero_row: self.first_zero_row(),
            condition_l,
            irreducible,
            every_vertex_reaches_loop: reaches,
            simple,
            purely_infinite,
        }
    }

    /// Relabel a finite graph: vertex `v` becomes `perm[v - 1]`.
    pub fn relabel(&self, perm: &[Vertex]) -> Result<GraphSpec> {
        let n = self.require_finite("relabeling")?;
        if perm.len() != n {
            return Err(Error::Parameter("permutation length differs from vertex count".into()));
        }
        let mut rows = vec![vec![0u8; n]; n];
        for i in 1..=n {
            for j in 1..=n {
                if self.edge(i, j) {
                    rows[perm[i - 1] - 1][perm[j - 1] - 1] = 1;
                }
            }
        }
        GraphSpec::finite(rows)
    }
}

fn loops_from(
    succ: &[Vec<Vertex>],
    base: Vertex,
    max_len: usize,
    word: &mut Word,
    out: &mut Vec<Word>,
) {
    if word.len() > max_len {
        return;
    }
    let last = *word.last().unwrap();
    for &j in &succ[last - 1] {
        word.push(j);
        if j == base {
            out.push(word.clone());
        }
        loops_from(succ, base, max_len, word, out);
        word.pop();
    }
}

/// Transitive closure for paths of length >= 1 (Warshall).
pub(crate) fn closure(n: usize, edge: impl Fn(usize, usize) -> bool) -> Vec<Vec<bool>> {
    let mut r: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| edge(i, j)).collect()).collect();
    for k in 0..n {
        for i in 0..n {
            if r[i][k] {
                for j in 0..n {
                    if r[k][j] {
                        r[i][j] = true;
                    }
                }
            }
        }
    }
    r
}

/// A closed path `(i_0, ..., i_n = i_0)` with `n >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Loop {
    vertices: Word,
}

impl Loop {
    pub fn new(g: &GraphSpec, vertices: Word) -> Result<Self> {
        if vertices.len() < 2 || vertices.first() != vertices.last() {
            return Err(Error::validation(
                "loop",
                "a loop is a path (i_0, ..., i_n) with n >= 1 and i_n = i_0",
            ));
        }
        for w in vertices.windows(2) {
            if !g.edge(w[0], w[1]) {
                return Err(Error::validation(
                    "loop",
                    format!("{} -> {} is not an edge", w[0], w[1]),
                ));
            }
        }
        Ok(Loop { vertices })
    }

    pub(crate) fn from_closed_word(vertices: Word) -> Self {
        debug_assert!(vertices.len() >= 2 && vertices.first() == vertices.last());
        Loop { vertices }
    }

    /// `(i_0, ..., i_n)` including the repeated base point.
    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    /// The loop length `n`.
    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn base(&self) -> Vertex {
        self.vertices[0]
    }

    /// No vertex repeats except the endpoints.
    pub fn is_simple(&self) -> bool {
        let body = &self.vertices[..self.len()];
        body.iter().collect::<BTreeSet<_>>().len() == body.len()
    }
}

impl fmt::Display for Loop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", join(&self.vertices))
    }
}

pub(crate) fn join(word: &[Vertex]) -> String {
    word.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct FlaggedLoop {
    pub lp: Loop,
    pub has_outgoing_edge: bool,
}

/// Evidence that a criterion failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    ExitlessLoop(Loop),
    /// No path from the first vertex to the second.
    Unreachable(Vertex, Vertex),
    /// The vertex cannot reach any loop.
    NoLoopReachable(Vertex),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::ExitlessLoop(l) => write!(f, "loop {l} has no outgoing edge"),
            Witness::Unreachable(i, j) => write!(f, "no path from {i} to {j}"),
            Witness::NoLoopReachable(v) => write!(f, "vertex {v} reaches no loop"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    CriteriaMet,
    CriteriaFailed(Witness),
    /// The graph has a zero row, so the criteria do not apply.
    NotApplicable,
}

impl Verdict {
    pub fn is_met(&self) -> bool {
        matches!(self, Verdict::CriteriaMet)
    }
}

/// The predicates behind the simplicity and pure-infiniteness criteria.
///
/// Verdicts are statements about the sufficient criteria only:
/// `simple` is met iff condition (L) holds and the graph is irreducible;
/// `purely_infinite` is met iff condition (L) holds and every vertex reaches a
/// loop.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationReport {
    pub no_zero_rows: bool,
    pub zero_row: Option<Vertex>,
    pub condition_l: (bool, Option<Loop>),
    pub irreducible: (bool, Option<(Vertex, Vertex)>),
    pub every_vertex_reaches_loop: (bool, Option<Vertex>),
    pub simple: Verdict,
    pub purely_infinite: Verdict,
}
