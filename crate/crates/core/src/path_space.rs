//! The terminal-path model `X_{A,J}` of a graph with boundary family `J`.
//!
//! A terminal path is either an infinite admissible path or a finite path
//! paired with a boundary set `J` that contains its last letter (the empty
//! path paired with any `J`). The space is the projective limit of the finite
//! spectra `X̃_n = A^(n) ⊔ Y_n ⊔ ... ⊔ Y_1 ⊔ J`, which this module enumerates.
//!
//! Spectrum points carry no level of their own: a full path of `n + 1`
//! letters lives at level `n`, a truncated point `(w; J)` lives at every level
//! `>= |w|`. Operations that depend on the level take it explicitly.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::graph::{join, Cardinality, Degree, GraphSpec, Loop, Presentation, Vertex, Word};

/// A subset of the vertex set: explicit vertices plus whole infinite classes.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct BoundaryPattern {
    finite: BTreeSet<Vertex>,
    classes: BTreeSet<usize>,
}

impl BoundaryPattern {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_vertices(vs: impl IntoIterator<Item = Vertex>) -> Self {
        BoundaryPattern {
            finite: vs.into_iter().collect(),
            classes: BTreeSet::new(),
        }
    }

    /// The whole vertex set `I`.
    pub fn everything(g: &GraphSpec) -> Self {
        match g.presentation() {
            Presentation::Block { classes, .. } => {
                let all: Vec<usize> = (1..=classes.len()).collect();
                Self::raw(Vec::new(), all).canonical(g).unwrap()
            }
            _ => match g.vertex_count() {
                Some(n) => Self::from_vertices(1..=n),
                None => panic!("the vertex set of a banded graph is not a boundary pattern"),
            },
        }
    }

    pub fn raw(finite: Vec<Vertex>, classes: Vec<usize>) -> Self {
        BoundaryPattern {
            finite: finite.into_iter().collect(),
            classes: classes.into_iter().collect(),
        }
    }

    /// Validate against `g` and bring to canonical form: finite classes are
    /// expanded into explicit vertices, and explicit vertices covered by an
    /// infinite class are dropped.
    pub fn canonical(&self, g: &GraphSpec) -> Result<Self> {
        for &v in &self.finite {
            g.check_vertex(v)
                .map_err(|_| Error::validation("finite", format!("vertex {v} does not exist")))?;
        }
        let mut out = BoundaryPattern {
            finite: self.finite.clone(),
            classes: BTreeSet::new(),
        };
        for &c in &self.classes {
            let card = g.classes().get(c.wrapping_sub(1)).ok_or_else(|| {
                Error::validation("classes", format!("class {c} does not exist"))
            })?;
            match card {
                Cardinality::Finite(_) => out.finite.extend(g.class_vertices(c).unwrap()),
                Cardinality::Infinite => {
                    out.classes.insert(c);
                }
            }
        }
        let classes = out.classes.clone();
        out.finite.retain(|&v| !g.class_of(v).is_some_and(|c| classes.contains(&c)));
        Ok(out)
    }

    pub fn contains(&self, g: &GraphSpec, v: Vertex) -> bool {
        self.finite.contains(&v) || g.class_of(v).is_some_and(|c| self.classes.contains(&c))
    }

    pub fn is_empty(&self) -> bool {
        self.finite.is_empty() && self.classes.is_empty()
    }

    pub fn is_finite_set(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn vertices(&self) -> &BTreeSet<Vertex> {
        &self.finite
    }

    pub fn class_ids(&self) -> &BTreeSet<usize> {
        &self.classes
    }

    fn covers_all(&self, g: &GraphSpec) -> bool {
        match g.presentation() {
            Presentation::Banded { .. } => false,
            _ => *self == BoundaryPattern::everything(g),
        }
    }

    /// `I`, `∅`, or a brace list where `Ck` stands for infinite class `k`.
    pub fn render(&self, g: &GraphSpec) -> String {
        if self.is_empty() {
            "∅".into()
        } else if self.covers_all(g) {
            "I".into()
        } else {
            let mut items: Vec<String> = self.finite.iter().map(|v| v.to_string()).collect();
            items.extend(self.classes.iter().map(|c| format!("C{c}")));
            format!("{{{}}}", items.join(","))
        }
    }

    pub fn parse(s: &str, g: &GraphSpec) -> Result<Self> {
        let s = s.trim();
        let bad = |m: &str| Error::Parse {
            line: 1,
            column: 1,
            message: format!("boundary set {s:?}: {m}"),
        };
        match s {
            "I" => return Ok(BoundaryPattern::everything(g)),
            "∅" | "{}" => return Ok(BoundaryPattern::empty()),
            _ => {}
        }
        let inner = s
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .ok_or_else(|| bad("expected I, ∅ or {...}"))?;
        let mut p = BoundaryPattern::empty();
        for item in inner.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            if let Some(c) = item.strip_prefix('C') {
                p.classes.insert(c.parse().map_err(|_| bad("bad class id"))?);
            } else {
                p.finite.insert(item.parse().map_err(|_| bad("bad vertex id"))?);
            }
        }
        p.canonical(g)
    }
}

/// Either the automatic family `J = J_A` or an explicit list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundaryFamily {
    Auto,
    Explicit(Vec<BoundaryPattern>),
}

/// The cluster points of the column net `(A_i = {j : A(j, i) = 1})_i`.
///
/// `J` is a cluster point iff for every finite window `W` infinitely many
/// columns satisfy `A_i ∩ W = J ∩ W`. Finite graphs have none. In a block
/// presentation every vertex of the infinite class has the same column, which
/// is the unique cluster point. In a banded presentation the columns of tail
/// vertices escape every window, so `∅` is the unique cluster point.
pub fn compute_ja(g: &GraphSpec) -> Vec<BoundaryPattern> {
    match g.presentation() {
        Presentation::Finite { .. } => Vec::new(),
        Presentation::Block { classes, block } => {
            match classes.iter().position(|c| *c == Cardinality::Infinite) {
                None => Vec::new(),
                Some(inf) => {
                    let feeders: Vec<usize> = (0..classes.len())
                        .filter(|&b| block[b][inf])
                        .map(|b| b + 1)
                        .collect();
                    vec![BoundaryPattern::raw(Vec::new(), feeders)
                        .canonical(g)
                        .expect("class ids come from the presentation")]
                }
            }
        }
        Presentation::Banded { .. } => vec![BoundaryPattern::empty()],
    }
}

/// Whether `∅` is a cluster point of the columns. If so, the point
/// `(∅; ∅)` lies outside every `U_i` and `V_i`, and the subalgebra generated
/// by the `S_i` alone lives on the path space with that point removed.
pub fn empty_is_cluster_point(g: &GraphSpec) -> bool {
    compute_ja(g).iter().any(BoundaryPattern::is_empty)
}

struct ModelInner {
    graph: GraphSpec,
    boundary: Vec<BoundaryPattern>,
    dense: bool,
    window: Option<usize>,
    spectra: Mutex<BTreeMap<usize, Arc<Vec<SpectrumPoint>>>>,
}

/// A graph together with a validated boundary family. Cheap to clone.
#[derive(Clone)]
pub struct MarkovModel(Arc<ModelInner>);

impl PartialEq for MarkovModel {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.graph == other.0.graph
                && self.0.boundary == other.0.boundary
                && self.0.window == other.0.window)
    }
}

impl Eq for MarkovModel {}

impl fmt::Debug for MarkovModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MarkovModel")
            .field("graph", &self.0.graph)
            .field("boundary", &self.0.boundary)
            .field("dense", &self.0.dense)
            .field("window", &self.0.window)
            .finish()
    }
}

/// Check `J ⊇ J_A` and that every vertex without successors lies in some
/// `J`; the resulting model records whether its domain is dense (`J = J_A`).
pub fn validate_model(g: &GraphSpec, family: &BoundaryFamily) -> Result<MarkovModel> {
    let ja = compute_ja(g);
    let boundary: Vec<BoundaryPattern> = match family {
        BoundaryFamily::Auto => ja.clone(),
        BoundaryFamily::Explicit(list) => {
            let mut set = BTreeSet::new();
            for (k, p) in list.iter().enumerate() {
                let p = p.canonical(g).map_err(|e| match e {
                    Error::Validation { field, message } => {
                        Error::validation(format!("boundary[{k}].{field}"), message)
                    }
                    other => other,
                })?;
                set.insert(p);
            }
            set.into_iter().collect()
        }
    };
    if let Some(missing) = ja.iter().find(|p| !boundary.contains(p)) {
        return Err(Error::validation(
            "boundary",
            format!(
                "the family must contain every cluster point of the columns; missing {}",
                missing.render(g)
            ),
        ));
    }
    if let Some(v) = uncovered_sink(g, &boundary) {
        return Err(Error::validation(
            "boundary",
            format!("vertex {v} has no outgoing edge and lies in no boundary set"),
        ));
    }
    let dense = boundary == ja;
    Ok(MarkovModel(Arc::new(ModelInner {
        graph: g.clone(),
        boundary,
        dense,
        window: None,
        spectra: Mutex::new(BTreeMap::new()),
    })))
}

fn uncovered_sink(g: &GraphSpec, boundary: &[BoundaryPattern]) -> Option<Vertex> {
    let covered = |v: Vertex| boundary.iter().any(|j| j.contains(g, v));
    match g.presentation() {
        Presentation::Finite { .. } => {
            (1..=g.vertex_count().unwrap()).find(|&v| g.out_degree(v) == Degree::Finite(0) && !covered(v))
        }
        Presentation::Block { classes, block } => {
            for (c, card) in classes.iter().enumerate() {
                if block[c].iter().any(|&b| b) {
                    continue;
                }
                match card {
                    Cardinality::Finite(_) => {
                        if let Some(v) = g.class_vertices(c + 1).unwrap().find(|&v| !covered(v)) {
                            return Some(v);
                        }
                    }
                    Cardinality::Infinite => {
                        if !boundary.iter().any(|j| j.class_ids().contains(&(c + 1))) {
                            return Some(g.class_first_vertex(c + 1));
                        }
                    }
                }
            }
            None
        }
        Presentation::Banded { prefix, offsets, .. } => {
            let n = prefix.len();
            (1..=n)
                .find(|&v| g.out_degree(v) == Degree::Finite(0) && !covered(v))
                .or_else(|| offsets.is_empty().then_some(n + 1))
        }
    }
}

impl MarkovModel {
    pub fn graph(&self) -> &GraphSpec {
        &self.0.graph
    }

    /// The boundary family, canonical and sorted.
    pub fn boundary(&self) -> &[BoundaryPattern] {
        &self.0.boundary
    }

    /// `J = J_A`: the domain of the shift is dense.
    pub fn is_dense(&self) -> bool {
        self.0.dense
    }

    pub fn window(&self) -> Option<usize> {
        self.0.window
    }

    /// Restrict enumerations to vertices `<= window`. Results on infinite
    /// graphs are then partial.
    pub fn with_window(&self, window: usize) -> MarkovModel {
        MarkovModel(Arc::new(ModelInner {
            graph: self.0.graph.clone(),
            boundary: self.0.boundary.clone(),
            dense: self.0.dense,
            window: Some(window),
            spectra: Mutex::new(BTreeMap::new()),
        }))
    }

    /// True when enumerations see only part of the vertex set.
    pub fn is_partial(&self) -> bool {
        match (self.0.graph.vertex_count(), self.0.window) {
            (None, _) => true,
            (Some(n), Some(w)) => w < n,
            (Some(_), None) => false,
        }
    }

    /// Largest vertex visible to enumerations.
    pub(crate) fn vertex_bound(&self) -> Result<usize> {
        match (self.0.graph.vertex_count(), self.0.window) {
            (Some(n), Some(w)) => Ok(n.min(w)),
            (Some(n), None) => Ok(n),
            (None, Some(w)) => Ok(w),
            (None, None) => Err(Error::Unsupported(
                "enumerating an infinite graph needs a window".into(),
            )),
        }
    }

    pub(crate) fn successors(&self, v: Vertex) -> Result<Vec<Vertex>> {
        let w = self.vertex_bound()?;
        self.0.graph.successors(v, Some(w))
    }

    /// Boundary sets containing `v`.
    pub fn boundary_sets_with(&self, v: Vertex) -> impl Iterator<Item = &BoundaryPattern> + '_ {
        self.0.boundary.iter().filter(move |j| j.contains(&self.0.graph, v))
    }

    pub fn is_admissible(&self, word: &[Vertex]) -> bool {
        word.iter().all(|&v| self.0.graph.has_vertex(v))
            && word.windows(2).all(|p| self.0.graph.edge(p[0], p[1]))
    }

    /// Check that `p` is a point of `X̃_level`.
    pub fn check_point(&self, p: &SpectrumPoint, level: usize) -> Result<()> {
        let bad = |m: String| Error::validation("point", m);
        match p {
            SpectrumPoint::Path(w) => {
                if w.len() != level + 1 {
                    return Err(bad(format!(
                        "a full path at level {level} has {} letters, found {}",
                        level + 1,
                        w.len()
                    )));
                }
                if !self.is_admissible(w) {
                    return Err(bad(format!("({}) is not an admissible path", join(w))));
                }
            }
            SpectrumPoint::Terminal(w, j) => {
                if w.len() > level {
                    return Err(bad(format!("a truncated word at level {level} has at most {level} letters")));
                }
                if !self.is_admissible(w) {
                    return Err(bad(format!("({}) is not an admissible path", join(w))));
                }
                if !self.0.boundary.contains(j) {
                    return Err(bad(format!("{} is not in the boundary family", j.render(&self.0.graph))));
                }
                if let Some(&last) = w.last() {
                    if !j.contains(&self.0.graph, last) {
                        return Err(bad(format!("last letter {last} is not in {}", j.render(&self.0.graph))));
                    }
                }
            }
        }
        Ok(())
    }

    /// The level-`n` spectrum `X̃_n` in canonical order.
    pub fn spectrum_level(&self, n: usize) -> Result<Spectrum> {
        Ok(Spectrum {
            level: n,
            points: self.spectrum_points(n)?,
            partial: self.is_partial(),
        })
    }

    pub(crate) fn spectrum_points(&self, n: usize) -> Result<Arc<Vec<SpectrumPoint>>> {
        if let Some(s) = self.0.spectra.lock().unwrap().get(&n) {
            return Ok(s.clone());
        }
        let bound = self.vertex_bound()?;
        let mut points = Vec::new();
        for j in &self.0.boundary {
            points.push(SpectrumPoint::Terminal(Vec::new(), j.clone()));
        }
        let mut word = Vec::with_capacity(n + 1);
        for v in 1..=bound {
            word.push(v);
            self.grow(&mut word, n, &mut points)?;
            word.pop();
        }
        points.sort();
        let points = Arc::new(points);
        self.0.spectra.lock().unwrap().insert(n, points.clone());
        Ok(points)
    }

    fn grow(&self, word: &mut Word, n: usize, out: &mut Vec<SpectrumPoint>) -> Result<()> {
        if word.len() == n + 1 {
            out.push(SpectrumPoint::Path(word.clone()));
            return Ok(());
        }
        let last = *word.last().unwrap();
        for j in self.boundary_sets_with(last) {
            out.push(SpectrumPoint::Terminal(word.clone(), j.clone()));
        }
        for s in self.successors(last)? {
            word.push(s);
            self.grow(word, n, out)?;
            word.pop();
        }
        Ok(())
    }

    /// Preimage of a level-`level` point under `π_{level, level+1}`.
    pub fn children(&self, p: &SpectrumPoint, level: usize) -> Result<Vec<SpectrumPoint>> {
        match p {
            SpectrumPoint::Path(w) if w.len() == level + 1 => {
                let last = *w.last().unwrap();
                let mut out: Vec<SpectrumPoint> = self
                    .successors(last)?
                    .into_iter()
                    .map(|s| {
                        let mut x = w.clone();
                        x.push(s);
                        SpectrumPoint::Path(x)
                    })
                    .collect();
                out.extend(
                    self.boundary_sets_with(last)
                        .map(|j| SpectrumPoint::Terminal(w.clone(), j.clone())),
                );
                Ok(out)
            }
            SpectrumPoint::Path(_) => Err(Error::Parameter(format!(
                "full path {p:?} does not live at level {level}"
            ))),
            SpectrumPoint::Terminal(..) => Ok(vec![p.clone()]),
        }
    }

    /// Eventually periodic infinite paths with period `<= max_period` and
    /// preperiod `<= max_preperiod`.
    ///
    /// Strictly periodic points are reported once per orbit (the loop in its
    /// lexicographically smallest rotation); each such record stands for
    /// `period` points. Records with a positive preperiod are single points
    /// `prefix · loop^∞`, the loop based at the entry vertex.
    pub fn periodic_points(
        &self,
        max_period: usize,
        max_preperiod: usize,
    ) -> Result<Vec<PeriodicPointRecord>> {
        let g = &self.0.graph;
        let n = g.vertex_count().ok_or_else(|| {
            Error::Unsupported("periodic points are enumerated on finite graphs only".into())
        })?;
        let succ: Vec<Vec<Vertex>> = (1..=n).map(|v| g.successors(v, None)).collect::<Result<_>>()?;
        let mut orbits: Vec<Word> = Vec::new();
        let mut word = Vec::new();
        for base in 1..=n {
            word.clear();
            word.push(base);
            lyndon_loops(&succ, base, max_period, &mut word, &mut orbits);
        }
        orbits.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));

        let isolated = |body: &[Vertex]| -> bool {
            let l = closed(body);
            !g.loop_has_exit(&l) && body.iter().all(|&v| self.boundary_sets_with(v).next().is_none())
        };

        let mut out = Vec::new();
        for body in &orbits {
            out.push(PeriodicPointRecord {
                preperiod: 0,
                period: body.len(),
                prefix: Vec::new(),
                lp: closed(body),
                isolated: isolated(body),
            });
        }
        for m in 1..=max_preperiod {
            let prefixes = admissible_words(&succ, m);
            for body in &orbits {
                let p = body.len();
                let iso = isolated(body);
                for r in 0..p {
                    let rotated: Word = body[r..].iter().chain(&body[..r]).copied().collect();
                    let entry = rotated[0];
                    let tail = rotated[p - 1];
                    for u in &prefixes {
                        let last = *u.last().unwrap();
                        if last != tail && g.edge(last, entry) {
                            out.push(PeriodicPointRecord {
                                preperiod: m,
                                period: p,
                                prefix: u.clone(),
                                lp: closed(&rotated),
                                isolated: iso,
                            });
                        }
                    }
                }
            }
        }
        out.sort_by(|a, b| {
            (a.preperiod, a.period, &a.prefix, &a.lp).cmp(&(b.preperiod, b.period, &b.prefix, &b.lp))
        });
        Ok(out)
    }

    /// Bounded search for a cylinder on which `T^m0` and `T^n0` agree.
    ///
    /// Cylinders `Z(γ)` with `1 <= |γ| <= depth` are scanned by length, then
    /// lexicographically. `Z(γ)` is a violation when every admissible
    /// extension of `γ` to `depth + |n0 - m0|` letters is consistent with
    /// `x_{m0+k} = x_{n0+k}` and no finite terminal path lies in `Z(γ)`.
    pub fn essential_freeness_scan(
        &self,
        m0: usize,
        n0: usize,
        depth: usize,
    ) -> Result<EssentialFreeness> {
        if m0 == n0 {
            return Err(Error::Parameter("the two powers must differ".into()));
        }
        let (m0, n0) = (m0.min(n0), m0.max(n0));
        if depth < n0 {
            return Err(Error::Parameter(format!(
                "depth {depth} is smaller than the larger power {n0}"
            )));
        }
        let g = &self.0.graph;
        let n = g.vertex_count().ok_or_else(|| {
            Error::Unsupported("the essential-freeness scan needs a finite graph".into())
        })?;
        let succ: Vec<Vec<Vertex>> = (1..=n).map(|v| g.successors(v, None)).collect::<Result<_>>()?;
        let scan = Scan {
            model: self,
            succ: &succ,
            gap: n0 - m0,
            n0,
            target: depth + n0 - m0,
        };
        for len in 1..=depth {
            let mut word = Vec::with_capacity(scan.target);
            for v in 1..=n {
                word.push(v);
                if let Some(w) = scan.cylinders(&mut word, len) {
                    return Ok(EssentialFreeness::Violation(w));
                }
                word.pop();
            }
        }
        Ok(EssentialFreeness::NoViolation)
    }
}

struct Scan<'a> {
    model: &'a MarkovModel,
    succ: &'a [Vec<Vertex>],
    gap: usize,
    n0: usize,
    target: usize,
}

impl Scan<'_> {
    fn fits(&self, word: &[Vertex]) -> bool {
        let t = word.len() - 1;
        t < self.n0 || word[t] == word[t - self.gap]
    }

    /// Enumerate self-consistent words of length `len` under `word`; return
    /// the first one whose cylinder is a violation.
    fn cylinders(&self, word: &mut Word, len: usize) -> Option<Word> {
        if !self.fits(word) {
            return None;
        }
        if word.len() == len {
            return self.all_extensions_agree(word).then(|| word.clone());
        }
        let last = *word.last().unwrap();
        for &s in &self.succ[last - 1] {
            word.push(s);
            let hit = self.cylinders(word, len);
            word.pop();
            if hit.is_some() {
                return hit;
            }
        }
        None
    }

    fn all_extensions_agree(&self, word: &mut Word) -> bool {
        let last = *word.last().unwrap();
        if self.model.boundary_sets_with(last).next().is_some() {
            return false;
        }
        if word.len() >= self.target {
            return true;
        }
        for &s in &self.succ[last - 1] {
            word.push(s);
            let ok = self.fits(word) && self.all_extensions_agree(word);
            word.pop();
            if !ok {
                return false;
            }
        }
        true
    }
}

fn closed(body: &[Vertex]) -> Loop {
    let mut w = body.to_vec();
    w.push(body[0]);
    Loop::from_closed_word(w)
}

/// Closed walks from `base` using only letters `>= base` whose body is a
/// Lyndon word (strictly smaller than each of its proper rotations).
fn lyndon_loops(succ: &[Vec<Vertex>], base: Vertex, max_len: usize, word: &mut Word, out: &mut Vec<Word>) {
    if word.len() > max_len {
        return;
    }
    let last = *word.last().unwrap();
    for &s in &succ[last - 1] {
        if s < base {
            continue;
        }
        if s == base && is_lyndon(word) {
            out.push(word.clone());
        }
        if word.len() < max_len {
            word.push(s);
            lyndon_loops(succ, base, max_len, word, out);
            word.pop();
        }
    }
}

fn is_lyndon(w: &[Vertex]) -> bool {
    let p = w.len();
    (1..p).all(|r| {
        let rot = w[r..].iter().chain(&w[..r]);
        w.iter().lt(rot)
    })
}

fn admissible_words(succ: &[Vec<Vertex>], len: usize) -> Vec<Word> {
    let mut out: Vec<Word> = (1..=succ.len()).map(|v| vec![v]).collect();
    for _ in 1..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                let last = *w.last().unwrap();
                succ[last - 1].iter().map(move |&s| {
                    let mut x = w.clone();
                    x.push(s);
                    x
                })
            })
            .collect();
    }
    out
}

/// Number of points `x` with `T^k x = x`, from strictly periodic orbit records.
pub fn count_period_dividing(records: &[PeriodicPointRecord], k: usize) -> usize {
    records
        .iter()
        .filter(|r| r.preperiod == 0 && k.is_multiple_of(r.period))
        .map(|r| r.period)
        .sum()
}

/// A point of some level spectrum `X̃_n`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SpectrumPoint {
    /// A full path `(i_0, ..., i_n)` at level `n`: the cylinder of all
    /// terminal paths starting with it.
    Path(Word),
    /// The terminal path `(w; J)`; `w` may be empty.
    Terminal(Word, BoundaryPattern),
}

impl SpectrumPoint {
    pub fn word(&self) -> &[Vertex] {
        match self {
            SpectrumPoint::Path(w) | SpectrumPoint::Terminal(w, _) => w,
        }
    }

    /// `π_{n, n+1}` applied to a point of `X̃_{from_level}` (`from_level = n + 1`).
    pub fn project_level(&self, from_level: usize) -> Result<SpectrumPoint> {
        if from_level == 0 {
            return Err(Error::Parameter("level 0 has no projection below it".into()));
        }
        match self {
            SpectrumPoint::Path(w) if w.len() == from_level + 1 => {
                Ok(SpectrumPoint::Path(w[..from_level].to_vec()))
            }
            SpectrumPoint::Path(_) => Err(Error::Parameter(format!(
                "{self:?} is not a full path of level {from_level}"
            ))),
            SpectrumPoint::Terminal(w, _) if w.len() == from_level => Ok(SpectrumPoint::Path(w.clone())),
            SpectrumPoint::Terminal(w, _) if w.len() < from_level => Ok(self.clone()),
            SpectrumPoint::Terminal(..) => Err(Error::Parameter(format!(
                "{self:?} does not live at level {from_level}"
            ))),
        }
    }

    /// The shift `T(i_0, α) = α`; the level drops by one.
    pub fn shift_apply(&self) -> Result<SpectrumPoint> {
        match self {
            SpectrumPoint::Path(w) if w.len() >= 2 => Ok(SpectrumPoint::Path(w[1..].to_vec())),
            SpectrumPoint::Path(_) => Err(Error::Domain(
                "the image of a level-0 cylinder U_i is V_i, not a single point".into(),
            )),
            SpectrumPoint::Terminal(w, j) if !w.is_empty() => {
                Ok(SpectrumPoint::Terminal(w[1..].to_vec(), j.clone()))
            }
            SpectrumPoint::Terminal(..) => Err(Error::Domain(
                "the empty terminal path is not in the domain of the shift".into(),
            )),
        }
    }

    /// Dump format: `1,2,1` for full paths, `1,2;J` for truncated points,
    /// `∅;J` for the empty word.
    pub fn render(&self, g: &GraphSpec) -> String {
        match self {
            SpectrumPoint::Path(w) => join(w),
            SpectrumPoint::Terminal(w, j) if w.is_empty() => format!("∅;{}", j.render(g)),
            SpectrumPoint::Terminal(w, j) => format!("{};{}", join(w), j.render(g)),
        }
    }

    pub fn parse(s: &str, g: &GraphSpec) -> Result<SpectrumPoint> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        let word = |t: &str| -> Result<Word> {
            let t = t.trim();
            if t.is_empty() || t == "∅" {
                return Ok(Vec::new());
            }
            t.split(',')
                .map(|x| {
                    x.trim().parse::<Vertex>().map_err(|_| Error::Parse {
                        line: 1,
                        column: 1,
                        message: format!("bad vertex {x:?} in point {s:?}"),
                    })
                })
                .collect()
        };
        match s.split_once(';') {
            Some((w, j)) => Ok(SpectrumPoint::Terminal(word(w)?, BoundaryPattern::parse(j, g)?)),
            None => Ok(SpectrumPoint::Path(word(s)?)),
        }
    }
}

/// An enumerated level spectrum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spectrum {
    pub level: usize,
    pub points: Arc<Vec<SpectrumPoint>>,
    /// Set when only a window of an infinite graph was enumerated.
    pub partial: bool,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// One point per line.
    pub fn dump(&self, g: &GraphSpec) -> String {
        self.points.iter().map(|p| p.render(g) + "\n").collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicPointRecord {
    pub preperiod: usize,
    pub period: usize,
    /// The first `preperiod` letters.
    pub prefix: Word,
    pub lp: Loop,
    pub isolated: bool,
}

impl PeriodicPointRecord {
    /// Number of points the record stands for.
    pub fn point_count(&self) -> usize {
        if self.preperiod == 0 {
            self.period
        } else {
            1
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EssentialFreeness {
    NoViolation,
    /// `T^m0` and `T^n0` agree on the cylinder of this word.
    Violation(Word),
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(rows: &[&[u8]]) -> GraphSpec {
        GraphSpec::finite(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn model(rows: &[&[u8]], toeplitz: bool) -> MarkovModel {
        let gr = g(rows);
        let fam = if toeplitz {
            BoundaryFamily::Explicit(vec![BoundaryPattern::everything(&gr)])
        } else {
            BoundaryFamily::Auto
        };
        validate_model(&gr, &fam).unwrap()
    }

    const FULL2: &[&[u8]] = &[&[1, 1], &[1, 1]];
    const GOLDEN: &[&[u8]] = &[&[1, 1], &[1, 0]];
    const FLIP: &[&[u8]] = &[&[0, 1], &[1, 0]];

    fn ray() -> GraphSpec {
        GraphSpec::banded(vec![], vec![1], vec![]).unwrap()
    }

    /// Window oracle for cluster points: collect the traces `A_i ∩ W` of the
    /// columns with index in `(far/2, far]`.
    fn window_traces(gr: &GraphSpec, w: usize, far: usize) -> BTreeSet<Vec<Vertex>> {
        (far / 2..=far)
            .map(|i| (1..=w).filter(|&j| gr.edge(j, i)).collect())
            .collect()
    }

    #[test]
    fn ja_examples() {
        assert!(compute_ja(&g(GOLDEN)).is_empty());
        assert_eq!(compute_ja(&ray()), vec![BoundaryPattern::empty()]);
        assert_eq!(window_traces(&ray(), 6, 200), BTreeSet::from([vec![]]));

        let o_inf = GraphSpec::block(vec![Cardinality::Infinite], vec![vec![1]]).unwrap();
        let ja = compute_ja(&o_inf);
        assert_eq!(ja, vec![BoundaryPattern::everything(&o_inf)]);
        assert_eq!(ja[0].render(&o_inf), "I");
        assert_eq!(window_traces(&o_inf, 6, 200), BTreeSet::from([(1..=6).collect()]));
    }

    #[test]
    fn ja_window_oracle_on_block_pattern() {
        // Class 1 = {1,2}, class 2 = {3}, class 3 infinite; columns of the
        // infinite class are fed by classes 1 and 3.
        let b = GraphSpec::block(
            vec![Cardinality::Finite(2), Cardinality::Finite(1), Cardinality::Infinite],
            vec![vec![1, 1, 1], vec![1, 0, 0], vec![0, 1, 1]],
        )
        .unwrap();
        let ja = compute_ja(&b);
        assert_eq!(ja.len(), 1);
        for w in [3, 5, 9] {
            let expect: Vec<Vertex> = (1..=w).filter(|&v| ja[0].contains(&b, v)).collect();
            assert_eq!(window_traces(&b, w, 100), BTreeSet::from([expect]));
        }
        // Invariant under enlarging the window past the cutoff for banded graphs.
        let bt = GraphSpec::banded(vec![vec![1, 1], vec![0, 0]], vec![1, 3], vec![vec![0, 0], vec![1, 1]]).unwrap();
        for w in [4, 8, 16] {
            assert_eq!(window_traces(&bt, w, 400), BTreeSet::from([vec![]]));
        }
        assert_eq!(compute_ja(&bt), vec![BoundaryPattern::empty()]);
    }

    #[test]
    fn model_validation() {
        let m = model(FULL2, false);
        assert!(m.is_dense());
        let m = model(FULL2, true);
        assert!(!m.is_dense());
        let err = validate_model(&ray(), &BoundaryFamily::Explicit(vec![])).unwrap_err();
        assert!(matches!(err, Error::Validation { ref message, .. } if message.contains("missing ∅")));
        let ok = validate_model(&ray(), &BoundaryFamily::Auto).unwrap();
        assert!(ok.is_dense());
        // A sink must be covered by the boundary.
        let sink = g(&[&[0, 1], &[0, 0]]);
        assert!(validate_model(&sink, &BoundaryFamily::Auto).is_err());
        let covered = validate_model(&sink, &BoundaryFamily::Explicit(vec![BoundaryPattern::from_vertices([2])])).unwrap();
        assert!(!covered.is_dense());
    }

    #[test]
    fn spectrum_examples() {
        let t = model(FULL2, true);
        let s = t.spectrum_level(1).unwrap();
        assert_eq!(s.len(), 7);
        let dump = s.dump(t.graph());
        assert_eq!(dump, "1,1\n1,2\n2,1\n2,2\n∅;I\n1;I\n2;I\n");

        assert_eq!(model(FULL2, false).spectrum_level(2).unwrap().len(), 8);
        let gm = model(GOLDEN, false);
        let s = gm.spectrum_level(1).unwrap();
        assert_eq!(s.dump(gm.graph()), "1,1\n1,2\n2,1\n");

        let r = validate_model(&ray(), &BoundaryFamily::Auto).unwrap();
        assert!(matches!(r.spectrum_level(1), Err(Error::Unsupported(_))));
        let s = r.with_window(4).spectrum_level(1).unwrap();
        assert!(s.partial);
        assert_eq!(s.dump(r.graph()), "1,2\n2,3\n3,4\n∅;∅\n");
    }

    #[test]
    fn projection_and_shift() {
        let p = SpectrumPoint::Path(vec![1, 2, 1]);
        assert_eq!(p.project_level(2).unwrap(), SpectrumPoint::Path(vec![1, 2]));
        let gr = g(FULL2);
        let i = BoundaryPattern::everything(&gr);
        let t = SpectrumPoint::Terminal(vec![1], i.clone());
        assert_eq!(t.project_level(2).unwrap(), t);
        // Maximal truncated word loses its boundary set.
        assert_eq!(t.project_level(1).unwrap(), SpectrumPoint::Path(vec![1]));
        let e = SpectrumPoint::Terminal(vec![], i.clone());
        assert_eq!(e.project_level(5).unwrap(), e);

        assert_eq!(
            SpectrumPoint::Path(vec![1, 2, 1, 1]).shift_apply().unwrap(),
            SpectrumPoint::Path(vec![2, 1, 1])
        );
        assert_eq!(t.shift_apply().unwrap(), e);
        assert!(matches!(e.shift_apply(), Err(Error::Domain(_))));
    }

    #[test]
    fn point_text_roundtrip() {
        let t = model(FULL2, true);
        for p in t.spectrum_level(2).unwrap().points.iter() {
            assert_eq!(&SpectrumPoint::parse(&p.render(t.graph()), t.graph()).unwrap(), p);
        }
        assert_eq!(
            SpectrumPoint::parse("(∅;I)", t.graph()).unwrap(),
            SpectrumPoint::Terminal(vec![], BoundaryPattern::everything(t.graph()))
        );
    }

    #[test]
    fn projective_coherence() {
        for (rows, toep) in [(FULL2, true), (GOLDEN, false), (GOLDEN, true), (FLIP, true)] {
            let m = model(rows, toep);
            for n in 0..5 {
                let lo: BTreeSet<_> = m.spectrum_level(n).unwrap().points.iter().cloned().collect();
                let hi = m.spectrum_level(n + 1).unwrap();
                let image: BTreeSet<_> = hi.points.iter().map(|p| p.project_level(n + 1).unwrap()).collect();
                assert_eq!(image, lo);
                // children are exactly the fibres
                for q in &lo {
                    let kids: BTreeSet<_> = m.children(q, n).unwrap().into_iter().collect();
                    let fibre: BTreeSet<_> = hi
                        .points
                        .iter()
                        .filter(|p| &p.project_level(n + 1).unwrap() == q)
                        .cloned()
                        .collect();
                    assert_eq!(kids, fibre);
                }
                // shift commutes with projection where defined
                for p in hi.points.iter() {
                    if let (Ok(sp), Ok(pp)) = (p.shift_apply(), p.project_level(n + 1)) {
                        if let Ok(psp) = pp.shift_apply() {
                            if n >= 1 {
                                assert_eq!(sp.project_level(n).unwrap(), psp);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn periodic_examples() {
        let gm = model(GOLDEN, false);
        let recs = gm.periodic_points(2, 0).unwrap();
        let fixed: Vec<_> = recs.iter().filter(|r| r.period == 1).collect();
        assert_eq!(fixed.len(), 1);
        assert_eq!(fixed[0].lp.vertices(), &[1, 1]);
        assert_eq!(count_period_dividing(&recs, 2), 3);
        assert_eq!(count_period_dividing(&recs, 1), 1);

        let flip = model(FLIP, false);
        let recs = flip.periodic_points(2, 0).unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].point_count(), 2);
        assert!(recs[0].isolated);

        let full = model(FULL2, false);
        let recs = full.periodic_points(1, 0).unwrap();
        assert_eq!(recs.iter().map(|r| r.point_count()).sum::<usize>(), 2);
        assert!(recs.iter().all(|r| !r.isolated));

        // Toeplitz boundary points accumulate at the exitless orbit.
        let recs = model(FLIP, true).periodic_points(2, 0).unwrap();
        assert!(!recs[0].isolated);
    }

    #[test]
    fn preperiodic_points_are_brute_forced() {
        let gm = model(GOLDEN, false);
        let recs = gm.periodic_points(3, 2).unwrap();
        for r in &recs {
            let mut x: Word = r.prefix.clone();
            for _ in 0..4 {
                x.extend_from_slice(&r.lp.vertices()[..r.period]);
            }
            assert!(gm.is_admissible(&x));
            if r.preperiod > 0 {
                assert_ne!(r.prefix.last(), r.lp.vertices().get(r.period - 1));
            }
        }
        for m in 0..=2 {
            let count: usize = recs.iter().filter(|r| r.preperiod == m).map(|r| r.point_count()).sum();
            assert_eq!(count, brute_preperiodic(&g(GOLDEN), m), "preperiod {m}");
        }
    }

    /// Points with minimal preperiod `m` and minimal period `<= 3`, found by
    /// scanning every admissible word of `m + 6` letters. Such a point is
    /// determined by those letters, and six tail letters pin the minimal period.
    fn brute_preperiodic(gr: &GraphSpec, m: usize) -> usize {
        let succ: Vec<Vec<Vertex>> = (1..=gr.vertex_count().unwrap())
            .map(|v| gr.successors(v, None).unwrap())
            .collect();
        admissible_words(&succ, m + 6)
            .into_iter()
            .filter(|w| {
                let d = (1..=3).find(|&d| (m..m + 6 - d).all(|k| w[k] == w[k + d]));
                match d {
                    Some(d) => m == 0 || w[m - 1] != w[m - 1 + d],
                    None => false,
                }
            })
            .count()
    }

    #[test]
    fn essential_freeness_examples() {
        assert_eq!(
            model(FULL2, false).essential_freeness_scan(0, 1, 4).unwrap(),
            EssentialFreeness::NoViolation
        );
        assert_eq!(
            model(FLIP, false).essential_freeness_scan(0, 2, 4).unwrap(),
            EssentialFreeness::Violation(vec![1])
        );
        assert_eq!(
            model(&[&[1]], false).essential_freeness_scan(0, 1, 2).unwrap(),
            EssentialFreeness::Violation(vec![1])
        );
        assert!(matches!(
            model(FULL2, false).essential_freeness_scan(0, 3, 2),
            Err(Error::Parameter(_))
        ));
        // Toeplitz points break agreement everywhere.
        assert_eq!(
            model(FLIP, true).essential_freeness_scan(0, 2, 4).unwrap(),
            EssentialFreeness::NoViolation
        );
    }

    #[test]
    fn four_cycle_escapes_the_small_window() {
        // Exitless 4-cycle: (L) fails, but period 4 divides none of 1, 2, 3.
        let c4 = model(&[&[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1], &[1, 0, 0, 0]], false);
        assert!(!c4.graph().condition_l().0);
        for (m0, n0) in [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)] {
            assert_eq!(c4.essential_freeness_scan(m0, n0, 8).unwrap(), EssentialFreeness::NoViolation);
        }
        assert_eq!(c4.essential_freeness_scan(0, 4, 8).unwrap(), EssentialFreeness::Violation(vec![1]));
    }
}
