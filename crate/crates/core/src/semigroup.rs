//! The inverse semigroup generated by the shift's local inverses.
//!
//! A monomial `S(α, h, β)` is the partial bijection `βx ↦ αx` for `x ∈ h`,
//! where `h` is a clopen set of admissible continuations of both words.
//! Products of generators `S_i = S((i), V_i, ∅)` and their adjoints always
//! reduce to a single monomial. Monomials are kept in normal form, in which
//! `α` and `β` never end in the same letter; two monomials are equal exactly
//! when they induce the same map on cylinders.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::cylinder::{base_sets, ck4_clopen, ck4_symbolic, Ck4Verdict, ClopenSet};
use crate::error::{Error, Result};
use crate::graph::{join, Vertex, Word};
use crate::path_space::{MarkovModel, SpectrumPoint};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monomial {
    alpha: Word,
    h: ClopenSet,
    beta: Word,
}

/// `V_{last(w)}`, or the whole space for the empty word.
fn follower(model: &MarkovModel, w: &[Vertex]) -> Result<ClopenSet> {
    match w.last() {
        None => ClopenSet::whole(model),
        Some(&v) => Ok(base_sets(model, v)?.1),
    }
}

impl Monomial {
    pub fn new(alpha: Word, h: ClopenSet, beta: Word) -> Result<Self> {
        let model = h.model().clone();
        for w in [&alpha, &beta] {
            if !model.is_admissible(w) {
                return Err(Error::Domain(format!("({}) is not an admissible word", join(w))));
            }
        }
        let room = follower(&model, &alpha)?.meet(&follower(&model, &beta)?)?;
        if !h.leq(&room)? {
            return Err(Error::Domain(
                "h must lie in the follower sets of both words".into(),
            ));
        }
        Ok(Monomial { alpha, h, beta }.normalize())
    }

    pub fn zero(model: &MarkovModel) -> Self {
        Monomial {
            alpha: Vec::new(),
            h: ClopenSet::empty(model),
            beta: Vec::new(),
        }
    }

    pub fn identity(model: &MarkovModel) -> Result<Self> {
        Ok(Monomial {
            alpha: Vec::new(),
            h: ClopenSet::whole(model)?,
            beta: Vec::new(),
        })
    }

    pub fn alpha(&self) -> &[Vertex] {
        &self.alpha
    }

    pub fn beta(&self) -> &[Vertex] {
        &self.beta
    }

    pub fn h(&self) -> &ClopenSet {
        &self.h
    }

    pub fn model(&self) -> &MarkovModel {
        self.h.model()
    }

    pub fn is_zero(&self) -> bool {
        self.h.is_empty()
    }

    /// Strip common trailing letters: `S(αj, h, βj) = S(α, jh, β)`.
    pub fn normalize(mut self) -> Self {
        if self.h.is_empty() {
            return Monomial::zero(self.h.model());
        }
        while let (Some(&a), Some(&b)) = (self.alpha.last(), self.beta.last()) {
            if a != b {
                break;
            }
            self.alpha.pop();
            self.beta.pop();
            self.h = self.h.push(&[a]).expect("single letters are admissible");
        }
        self
    }

    pub fn adjoint(&self) -> Self {
        Monomial {
            alpha: self.beta.clone(),
            h: self.h.clone(),
            beta: self.alpha.clone(),
        }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.model() != other.model() {
            return Err(Error::ModelMismatch);
        }
        if self.is_zero() || other.is_zero() {
            return Ok(Monomial::zero(self.model()));
        }
        let out = if let Some(gamma) = other.alpha.strip_prefix(self.beta.as_slice()) {
            let h = other.h.meet(&self.h.pull(gamma)?)?;
            let alpha = self.alpha.iter().chain(gamma).copied().collect();
            (alpha, h, other.beta.clone())
        } else if let Some(gamma) = self.beta.strip_prefix(other.alpha.as_slice()) {
            let h = self.h.meet(&other.h.pull(gamma)?)?;
            let beta = other.beta.iter().chain(gamma).copied().collect();
            (self.alpha.clone(), h, beta)
        } else {
            return Ok(Monomial::zero(self.model()));
        };
        if out.1.is_empty() {
            return Ok(Monomial::zero(self.model()));
        }
        Ok(Monomial {
            alpha: out.0,
            h: out.1,
            beta: out.2,
        }
        .normalize())
    }

    /// `|α| - |β|`.
    pub fn cocycle(&self) -> Result<i64> {
        if self.is_zero() {
            return Err(Error::UndefinedCocycle);
        }
        Ok(self.alpha.len() as i64 - self.beta.len() as i64)
    }

    /// The smallest level at which [`Monomial::evaluate`] is defined; two
    /// monomials are equal iff their evaluations agree at the larger of
    /// their decision levels.
    pub fn decision_level(&self) -> usize {
        self.alpha.len().max(self.beta.len()) + self.h.level()
    }

    /// The map on level-`n` cylinders: `βx ↦ αx` where `βx` ranges over the
    /// level-`n` points of the domain. Images live at level `n + cocycle`.
    pub fn evaluate(&self, n: usize) -> Result<PartialInjection> {
        let model = self.model().clone();
        if self.is_zero() {
            return Ok(PartialInjection::empty(model, n));
        }
        if n < self.decision_level() {
            return Err(Error::Parameter(format!(
                "evaluation needs level >= {}, got {n}",
                self.decision_level()
            )));
        }
        let k = self.beta.len();
        let domain = self.h.push(&self.beta)?.raise_level(n)?;
        let retarget = |w: &[Vertex]| -> Word { self.alpha.iter().chain(&w[k..]).copied().collect() };
        let map = domain
            .into_iter()
            .map(|p| {
                let q = match &p {
                    SpectrumPoint::Path(w) => SpectrumPoint::Path(retarget(w)),
                    SpectrumPoint::Terminal(w, j) => SpectrumPoint::Terminal(retarget(w), j.clone()),
                };
                (p, q)
            })
            .collect();
        Ok(PartialInjection {
            model,
            src_level: n,
            tgt_level: n + self.alpha.len() - k,
            map,
        })
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let w = |w: &[Vertex]| if w.is_empty() { "∅".to_string() } else { format!("({})", join(w)) };
        write!(
            f,
            "S({}, level {} {{{}}}, {})",
            w(&self.alpha),
            self.h.level(),
            self.h.render_members().join(" "),
            w(&self.beta)
        )
    }
}

/// `S_i = S((i), V_i, ∅)`: `x ↦ ix` on `V_i`.
pub fn generator(model: &MarkovModel, i: Vertex) -> Result<Monomial> {
    let (_, v) = base_sets(model, i)?;
    Ok(Monomial {
        alpha: vec![i],
        h: v,
        beta: Vec::new(),
    })
}

/// `P_i = S_i S_i^*`.
pub fn range_projection(model: &MarkovModel, i: Vertex) -> Result<Monomial> {
    let s = generator(model, i)?;
    s.compose(&s.adjoint())
}

/// `Q_i = S_i^* S_i`.
pub fn source_projection(model: &MarkovModel, i: Vertex) -> Result<Monomial> {
    let s = generator(model, i)?;
    s.adjoint().compose(&s)
}

/// A finite injective map from the cylinders of one level to another.
#[derive(Debug, Clone)]
pub struct PartialInjection {
    model: MarkovModel,
    src_level: usize,
    tgt_level: usize,
    map: BTreeMap<SpectrumPoint, SpectrumPoint>,
}

impl PartialInjection {
    pub fn empty(model: MarkovModel, level: usize) -> Self {
        PartialInjection {
            model,
            src_level: level,
            tgt_level: level,
            map: BTreeMap::new(),
        }
    }

    pub fn src_level(&self) -> usize {
        self.src_level
    }

    pub fn tgt_level(&self) -> usize {
        self.tgt_level
    }

    pub fn pairs(&self) -> &BTreeMap<SpectrumPoint, SpectrumPoint> {
        &self.map
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn apply(&self, p: &SpectrumPoint) -> Option<&SpectrumPoint> {
        self.map.get(p)
    }

    pub fn is_injective(&self) -> bool {
        self.map.values().collect::<BTreeSet<_>>().len() == self.map.len()
    }

    /// Refine by `k` levels on both sides.
    pub fn raise(&self, k: usize) -> Result<Self> {
        let mut cur = self.clone();
        for _ in 0..k {
            let mut map = BTreeMap::new();
            for (s, t) in &cur.map {
                for child in self.model.children(s, cur.src_level)? {
                    let image = match &child {
                        SpectrumPoint::Terminal(w, _) if w == s.word() && matches!(s, SpectrumPoint::Terminal(..)) => t.clone(),
                        SpectrumPoint::Path(w) => {
                            let mut x = t.word().to_vec();
                            x.push(*w.last().unwrap());
                            SpectrumPoint::Path(x)
                        }
                        SpectrumPoint::Terminal(_, j) => SpectrumPoint::Terminal(t.word().to_vec(), j.clone()),
                    };
                    map.insert(child, image);
                }
            }
            cur = PartialInjection {
                model: cur.model,
                src_level: cur.src_level + 1,
                tgt_level: cur.tgt_level + 1,
                map,
            };
        }
        Ok(cur)
    }

    pub fn inverse(&self) -> Self {
        PartialInjection {
            model: self.model.clone(),
            src_level: self.tgt_level,
            tgt_level: self.src_level,
            map: self.map.iter().map(|(s, t)| (t.clone(), s.clone())).collect(),
        }
    }

    /// `self ∘ other`, refining whichever side is coarser.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.model != other.model {
            return Err(Error::ModelMismatch);
        }
        let (a, b) = if other.tgt_level >= self.src_level {
            (self.raise(other.tgt_level - self.src_level)?, other.clone())
        } else {
            (self.clone(), other.raise(self.src_level - other.tgt_level)?)
        };
        let map = b
            .map
            .iter()
            .filter_map(|(s, m)| a.map.get(m).map(|t| (s.clone(), t.clone())))
            .collect();
        Ok(PartialInjection {
            model: a.model,
            src_level: b.src_level,
            tgt_level: a.tgt_level,
            map,
        })
    }

    fn offset(&self) -> i64 {
        self.tgt_level as i64 - self.src_level as i64
    }
}

impl PartialEq for PartialInjection {
    fn eq(&self, other: &Self) -> bool {
        if self.model != other.model {
            return false;
        }
        match (self.is_empty(), other.is_empty()) {
            (true, true) => return true,
            (false, false) => {}
            _ => return false,
        }
        if self.offset() != other.offset() {
            return false;
        }
        let n = self.src_level.max(other.src_level);
        match (self.raise(n - self.src_level), other.raise(n - other.src_level)) {
            (Ok(a), Ok(b)) => a.map == b.map,
            _ => false,
        }
    }
}

impl Eq for PartialInjection {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationCheck {
    pub name: &'static str,
    pub passed: bool,
    /// The offending instance, e.g. `i=1, j=2` or `E={1}, F={}`.
    pub instance: Option<String>,
    /// For CK4, the point in the symmetric difference.
    pub witness: Option<SpectrumPoint>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CkReport {
    pub checks: Vec<RelationCheck>,
    /// Only a window of an infinite vertex set was examined.
    pub partial: bool,
}

impl CkReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&RelationCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Largest vertex window for which CK4 is checked over all pairs of
/// disjoint subsets; above it, `|E| + |F| <= 2`.
const CK4_EXHAUSTIVE: usize = 7;

/// Check CK1 to CK4 as exact identities between monomials and clopen sets.
pub fn verify_ck_relations(model: &MarkovModel) -> Result<CkReport> {
    let n = model.vertex_bound()?;
    let vs: Vec<Vertex> = (1..=n).filter(|&v| model.graph().has_vertex(v)).collect();
    let p: Vec<Monomial> = vs.iter().map(|&i| range_projection(model, i)).collect::<Result<_>>()?;
    let q: Vec<Monomial> = vs.iter().map(|&i| source_projection(model, i)).collect::<Result<_>>()?;
    let zero = Monomial::zero(model);
    let pass = |name| RelationCheck {
        name,
        passed: true,
        instance: None,
        witness: None,
    };
    let fail = |name, instance: String, witness| RelationCheck {
        name,
        passed: false,
        instance: Some(instance),
        witness,
    };

    let mut ck1 = pass("CK1");
    'ck1: for a in 0..vs.len() {
        for b in a + 1..vs.len() {
            if q[a].compose(&q[b])? != q[b].compose(&q[a])? {
                ck1 = fail("CK1", format!("i={}, j={}", vs[a], vs[b]), None);
                break 'ck1;
            }
        }
    }

    let mut ck2 = pass("CK2");
    'ck2: for a in 0..vs.len() {
        for b in 0..vs.len() {
            if a != b && p[a].compose(&p[b])? != zero {
                ck2 = fail("CK2", format!("i={}, j={}", vs[a], vs[b]), None);
                break 'ck2;
            }
        }
    }

    let mut ck3 = pass("CK3");
    'ck3: for a in 0..vs.len() {
        for b in 0..vs.len() {
            let (i, j) = (vs[a], vs[b]);
            let want = if model.graph().edge(i, j) { &p[b] } else { &zero };
            if &p[b].compose(&q[a])? != want {
                ck3 = fail("CK3", format!("i={i}, j={j}"), None);
                break 'ck3;
            }
        }
    }

    let exact = model.graph().is_finite() && model.window().is_none();
    let mut ck4 = pass("CK4");
    for (e, f) in ck4_instances(&vs) {
        let verdict = if exact { ck4_clopen(model, &e, &f)? } else { ck4_symbolic(model, &e, &f)? };
        if let Ck4Verdict::Fails(pt) = verdict {
            ck4 = fail("CK4", format!("E={{{}}}, F={{{}}}", join(&e), join(&f)), Some(pt));
            break;
        }
    }

    Ok(CkReport {
        checks: vec![ck1, ck2, ck3, ck4],
        partial: model.is_partial(),
    })
}

/// Pairs of disjoint vertex sets, smallest first.
fn ck4_instances(vs: &[Vertex]) -> Vec<(Vec<Vertex>, Vec<Vertex>)> {
    let mut out = Vec::new();
    if vs.len() <= CK4_EXHAUSTIVE {
        let mut code = vec![0u8; vs.len()];
        loop {
            let pick = |c: u8| -> Vec<Vertex> { vs.iter().zip(&code).filter(|(_, &x)| x == c).map(|(&v, _)| v).collect() };
            out.push((pick(1), pick(2)));
            let mut k = 0;
            while k < code.len() && code[k] == 2 {
                code[k] = 0;
                k += 1;
            }
            if k == code.len() {
                break;
            }
            code[k] += 1;
        }
    } else {
        out.push((Vec::new(), Vec::new()));
        for &a in vs {
            out.push((vec![a], Vec::new()));
            out.push((Vec::new(), vec![a]));
            for &b in vs {
                if a < b {
                    out.push((vec![a, b], Vec::new()));
                    out.push((Vec::new(), vec![a, b]));
                }
                if a != b {
                    out.push((vec![a], vec![b]));
                }
            }
        }
    }
    out.sort_by_key(|(e, f)| (e.len() + f.len(), e.clone(), f.clone()));
    out
}

/// Classes of level-`n` points under `T^k x = T^k y` for some `k <= big_n`.
pub fn rn_partition(model: &MarkovModel, big_n: usize, n: usize) -> Result<Vec<Vec<SpectrumPoint>>> {
    if !model.graph().is_finite() {
        return Err(Error::Unsupported("R_N partitions need a finite graph".into()));
    }
    if n < big_n {
        return Err(Error::Parameter(format!("level {n} is below N = {big_n}")));
    }
    let mut classes: BTreeMap<(usize, SpectrumPoint), Vec<SpectrumPoint>> = BTreeMap::new();
    for p in model.spectrum_points(n)?.iter() {
        let k = big_n.min(p.word().len());
        let tail = match p {
            SpectrumPoint::Path(w) => SpectrumPoint::Path(w[k..].to_vec()),
            SpectrumPoint::Terminal(w, j) => SpectrumPoint::Terminal(w[k..].to_vec(), j.clone()),
        };
        classes.entry((k, tail)).or_default().push(p.clone());
    }
    let mut out: Vec<Vec<SpectrumPoint>> = classes.into_values().collect();
    out.sort();
    Ok(out)
}

/// Parse a product such as `S(1,2)* . S(1)`, `P(1)`, `Q(2)`, `I` or `0`.
/// `S(i,j,...)` abbreviates `S_i S_j ...`, and `*` takes adjoints.
pub fn parse_expression(model: &MarkovModel, text: &str) -> Result<Monomial> {
    let mut p = Parser { s: text.as_bytes(), pos: 0, model };
    let mut acc = p.factor()?;
    loop {
        p.skip_ws();
        if p.pos == p.s.len() {
            return Ok(acc);
        }
        p.expect(b'.')?;
        acc = acc.compose(&p.factor()?)?;
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    model: &'a MarkovModel,
}

impl Parser<'_> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: 1,
            column: self.pos + 1,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        self.skip_ws();
        if self.s.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected '{}'", c as char)))
        }
    }

    fn number(&mut self) -> Result<Vertex> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| {
                self.pos = start;
                self.err("expected a vertex number")
            })
    }

    fn args(&mut self) -> Result<Vec<Vertex>> {
        self.expect(b'(')?;
        let mut out = vec![self.number()?];
        loop {
            self.skip_ws();
            match self.s.get(self.pos) {
                Some(b',') => {
                    self.pos += 1;
                    out.push(self.number()?);
                }
                Some(b')') => {
                    self.pos += 1;
                    return Ok(out);
                }
                _ => return Err(self.err("expected ',' or ')'")),
            }
        }
    }

    fn factor(&mut self) -> Result<Monomial> {
        self.skip_ws();
        let head = *self.s.get(self.pos).ok_or_else(|| self.err("unexpected end of expression"))?;
        self.pos += 1;
        let m = match head {
            b'S' => {
                let mut acc = Monomial::identity(self.model)?;
                for i in self.args()? {
                    acc = acc.compose(&generator(self.model, i)?)?;
                }
                acc
            }
            b'P' | b'Q' => {
                let at = self.pos;
                let a = self.args()?;
                if a.len() != 1 {
                    self.pos = at;
                    return Err(self.err("P and Q take one vertex"));
                }
                if head == b'P' {
                    range_projection(self.model, a[0])?
                } else {
                    source_projection(self.model, a[0])?
                }
            }
            b'I' => Monomial::identity(self.model)?,
            b'0' => Monomial::zero(self.model),
            _ => {
                self.pos -= 1;
                return Err(self.err("expected S(..), P(..), Q(..), I or 0"));
            }
        };
        self.skip_ws();
        if self.s.get(self.pos) == Some(&b'*') {
            self.pos += 1;
            return Ok(m.adjoint());
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphSpec;
    use crate::path_space::{validate_model, BoundaryFamily, BoundaryPattern};
    use proptest::prelude::*;

    fn model(rows: &[&[u8]], toeplitz: bool) -> MarkovModel {
        let g = GraphSpec::finite(rows.iter().map(|r| r.to_vec()).collect()).unwrap();
        let fam = if toeplitz {
            BoundaryFamily::Explicit(vec![BoundaryPattern::everything(&g)])
        } else {
            BoundaryFamily::Auto
        };
        validate_model(&g, &fam).unwrap()
    }

    const FULL2: &[&[u8]] = &[&[1, 1], &[1, 1]];
    const GOLDEN: &[&[u8]] = &[&[1, 1], &[1, 0]];

    fn s(m: &MarkovModel, i: Vertex) -> Monomial {
        generator(m, i).unwrap()
    }

    #[test]
    fn composition_examples() {
        let m = model(FULL2, false);
        let (s1, s2) = (s(&m, 1), s(&m, 2));
        assert!(s1.adjoint().compose(&s2).unwrap().is_zero());
        let q1 = s1.adjoint().compose(&s1).unwrap();
        assert_eq!(q1.alpha(), &[] as &[Vertex]);
        assert_eq!(q1.h(), &base_sets(&m, 1).unwrap().1);
        let s12 = s1.compose(&s2).unwrap();
        assert_eq!(s12.alpha(), &[1, 2]);
        assert_eq!(s12.h(), &base_sets(&m, 2).unwrap().1);
        assert_eq!(s12.cocycle().unwrap(), 2);
        assert_eq!(s12.adjoint().cocycle().unwrap(), -2);
        assert_eq!(s1.cocycle().unwrap(), 1);
        assert_eq!(q1.cocycle().unwrap(), 0);
        assert_eq!(Monomial::zero(&m).cocycle(), Err(Error::UndefinedCocycle));
        let back = s1.compose(&s1.adjoint()).unwrap().compose(&s1).unwrap();
        assert_eq!(back, s1);
    }

    #[test]
    fn generator_examples() {
        let t = model(FULL2, true);
        let e = SpectrumPoint::Terminal(vec![], BoundaryPattern::everything(t.graph()));
        assert!(s(&t, 1).h().contains(&e, 0).unwrap());

        let ray = GraphSpec::banded(vec![], vec![1], vec![]).unwrap();
        let r = validate_model(&ray, &BoundaryFamily::Auto).unwrap().with_window(6);
        assert_eq!(s(&r, 2).h(), &base_sets(&r, 3).unwrap().0);

        let m = model(FULL2, false);
        let f = s(&m, 1).evaluate(1).unwrap();
        assert_eq!(f.len(), 4);
        assert_eq!(f.tgt_level(), 2);
        for (a, b) in f.pairs() {
            assert_eq!(b.word()[0], 1);
            assert_eq!(&b.word()[1..], a.word());
        }
    }

    #[test]
    fn normal_form_examples() {
        let m = model(FULL2, false);
        let h = base_sets(&m, 1).unwrap().1;
        let long = Monomial::new(vec![1, 1], h.clone(), vec![1]).unwrap();
        assert_eq!(long.alpha(), &[1]);
        assert!(long.beta().is_empty());
        let raw = Monomial { alpha: vec![1, 1], h: h.clone(), beta: vec![1] };
        let l = raw.decision_level().max(long.decision_level());
        assert_eq!(raw.evaluate(l).unwrap(), long.evaluate(l).unwrap());
        assert_eq!(long.clone().normalize(), long);
        let z = Monomial::new(vec![1], ClopenSet::empty(&m), vec![]).unwrap();
        assert_eq!(z, Monomial::zero(&m));
        assert!(z.evaluate(3).unwrap().is_empty());
        let id = Monomial::identity(&m).unwrap().evaluate(2).unwrap();
        assert_eq!(id.len(), 8);
        assert!(id.pairs().iter().all(|(a, b)| a == b));
    }

    #[test]
    fn ck_examples() {
        let r = verify_ck_relations(&model(FULL2, false)).unwrap();
        assert!(r.all_passed());
        let r = verify_ck_relations(&model(FULL2, true)).unwrap();
        assert!(r.checks[..3].iter().all(|c| c.passed));
        let ck4 = r.get("CK4").unwrap();
        assert!(!ck4.passed);
        let t = model(FULL2, true);
        assert_eq!(
            ck4.witness.as_ref().unwrap().render(t.graph()),
            "∅;I"
        );
        assert!(verify_ck_relations(&model(GOLDEN, false)).unwrap().all_passed());
    }

    #[test]
    fn rn_examples() {
        let sizes = |m: &MarkovModel, big_n, n| -> Vec<usize> {
            let mut v: Vec<usize> = rn_partition(m, big_n, n).unwrap().iter().map(Vec::len).collect();
            v.sort_unstable_by(|a, b| b.cmp(a));
            v
        };
        let full = model(FULL2, false);
        assert_eq!(sizes(&full, 1, 2), vec![2; 4]);
        assert_eq!(sizes(&full, 0, 2), vec![1; 8]);
        let gm = model(GOLDEN, false);
        assert_eq!(sizes(&gm, 1, 1), vec![2, 1]);
        assert_eq!(sizes(&gm, 1, 2), vec![2, 2, 1]);
        assert!(matches!(rn_partition(&gm, 3, 2), Err(Error::Parameter(_))));
        let full3 = model(&[&[1, 1, 1], &[1, 1, 1], &[1, 1, 1]], false);
        for big_n in 0..=3 {
            for n in big_n..=3 {
                assert!(sizes(&full3, big_n, n).iter().all(|&c| c == 3usize.pow(big_n as u32)));
                // nested
                if big_n > 0 {
                    let coarse = rn_partition(&full3, big_n, n).unwrap();
                    for fine in rn_partition(&full3, big_n - 1, n).unwrap() {
                        assert!(coarse.iter().any(|c| fine.iter().all(|p| c.contains(p))));
                    }
                }
            }
        }
    }

    #[test]
    fn expressions() {
        let m = model(FULL2, false);
        let e = parse_expression(&m, "S(1,2)* . S(1)").unwrap();
        assert_eq!(e, s(&m, 2).adjoint().compose(&s(&m, 1).adjoint()).unwrap().compose(&s(&m, 1)).unwrap());
        assert_eq!(e, s(&m, 2).adjoint());
        assert_eq!(parse_expression(&m, "P(1) . P(2)").unwrap(), Monomial::zero(&m));
        assert_eq!(parse_expression(&m, " I ").unwrap(), Monomial::identity(&m).unwrap());
        match parse_expression(&m, "S(1) . X") {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 8),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_expression(&m, "S(9)"), Err(Error::UnknownVertex(9))));
    }

    #[derive(Debug, Clone)]
    enum Letter {
        S(Vertex),
        Star(Vertex),
    }

    fn product(m: &MarkovModel, word: &[Letter]) -> Monomial {
        word.iter().fold(Monomial::identity(m).unwrap(), |acc, l| {
            let g = match l {
                Letter::S(i) => s(m, *i),
                Letter::Star(i) => s(m, *i).adjoint(),
            };
            acc.compose(&g).unwrap()
        })
    }

    fn arb_case() -> impl Strategy<Value = (MarkovModel, Vec<Letter>, Vec<Letter>)> {
        (1usize..=3, any::<u16>(), any::<bool>()).prop_flat_map(|(n, bits, toep)| {
            let rows: Vec<Vec<u8>> = (0..n)
                .map(|i| (0..n).map(|j| ((bits >> (i * n + j)) & 1) as u8).collect())
                .collect();
            let g = GraphSpec::finite(rows).unwrap();
            let fam = if toep {
                BoundaryFamily::Explicit(vec![BoundaryPattern::everything(&g)])
            } else {
                BoundaryFamily::Auto
            };
            let m = validate_model(&g, &fam)
                .unwrap_or_else(|_| validate_model(&g, &BoundaryFamily::Explicit(vec![BoundaryPattern::everything(&g)])).unwrap());
            let letter = (1..=n, any::<bool>()).prop_map(|(i, st)| if st { Letter::Star(i) } else { Letter::S(i) });
            (
                Just(m),
                proptest::collection::vec(letter.clone(), 0..=6),
                proptest::collection::vec(letter, 0..=6),
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn evaluation_is_a_homomorphism((m, u, v) in arb_case()) {
            let a = product(&m, &u);
            let b = product(&m, &v);
            let ab = a.compose(&b).unwrap();
            let n = a.decision_level().max(b.decision_level()).max(ab.decision_level());
            let (ea, eb) = (a.evaluate(n).unwrap(), b.evaluate(n).unwrap());
            prop_assert!(ea.is_injective());
            prop_assert_eq!(ab.evaluate(n).unwrap(), ea.compose(&eb).unwrap());
            prop_assert_eq!(a.adjoint().evaluate(n).unwrap(), ea.inverse());
            // a different level gives the same semantics
            prop_assert_eq!(a.evaluate(n + 1).unwrap(), ea.clone());
            if !ab.is_zero() {
                prop_assert_eq!(ab.cocycle().unwrap(), a.cocycle().unwrap() + b.cocycle().unwrap());
            }
            if !a.is_zero() {
                prop_assert_eq!(a.adjoint().cocycle().unwrap(), -a.cocycle().unwrap());
            }
            // normal forms decide semantic equality at the decision level
            let l = a.decision_level().max(b.decision_level());
            prop_assert_eq!(a == b, a.evaluate(l).unwrap() == b.evaluate(l).unwrap());
            prop_assert_eq!(a.clone().normalize(), a.clone());
            // inverse-semigroup identity
            prop_assert_eq!(a.compose(&a.adjoint()).unwrap().compose(&a).unwrap(), a);
        }
    }
}
