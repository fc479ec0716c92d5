//! Clopen subsets of the path space, realized as subsets of a level spectrum.
//!
//! A set at level `n` stands for the union of the cylinders of its members.
//! Every set is kept at the lowest level where it can be expressed, so two
//! sets are equal exactly when their levels and member lists are.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{Presentation, Vertex};
use crate::path_space::{MarkovModel, SpectrumPoint};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClopenSet {
    model: MarkovModel,
    level: usize,
    members: BTreeSet<SpectrumPoint>,
}

impl ClopenSet {
    /// The set given by `members` at `level`, brought to canonical form.
    pub fn new(
        model: &MarkovModel,
        level: usize,
        members: impl IntoIterator<Item = SpectrumPoint>,
    ) -> Result<Self> {
        let members: BTreeSet<SpectrumPoint> = members.into_iter().collect();
        for p in &members {
            model.check_point(p, level)?;
        }
        Ok(Self::canonical(model.clone(), level, members))
    }

    pub fn empty(model: &MarkovModel) -> Self {
        ClopenSet {
            model: model.clone(),
            level: 0,
            members: BTreeSet::new(),
        }
    }

    /// The whole space `X`.
    pub fn whole(model: &MarkovModel) -> Result<Self> {
        let pts = model.spectrum_points(0)?;
        Ok(ClopenSet {
            model: model.clone(),
            level: 0,
            members: pts.iter().cloned().collect(),
        })
    }

    pub fn model(&self) -> &MarkovModel {
        &self.model
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn members(&self) -> &BTreeSet<SpectrumPoint> {
        &self.members
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    fn canonical(model: MarkovModel, mut level: usize, mut members: BTreeSet<SpectrumPoint>) -> Self {
        if members.is_empty() {
            level = 0;
        }
        while level > 0 {
            let below = model.spectrum_points(level - 1).expect("level above exists");
            let mut lowered = BTreeSet::new();
            let mut ok = true;
            for q in below.iter() {
                let kids = model.children(q, level - 1).expect("spectrum point");
                let inside = kids.iter().filter(|k| members.contains(k)).count();
                if inside == kids.len() && inside > 0 {
                    lowered.insert(q.clone());
                } else if inside > 0 {
                    ok = false;
                    break;
                }
            }
            if !ok {
                break;
            }
            members = lowered;
            level -= 1;
        }
        ClopenSet { model, level, members }
    }

    /// The same set written at level `n`; the result is not canonical.
    pub fn raise_level(&self, n: usize) -> Result<BTreeSet<SpectrumPoint>> {
        if n < self.level {
            return Err(Error::Parameter(format!(
                "cannot lower a level-{} set to level {n}",
                self.level
            )));
        }
        let mut cur = self.members.clone();
        for l in self.level..n {
            let mut next = BTreeSet::new();
            for p in &cur {
                next.extend(self.model.children(p, l)?);
            }
            cur = next;
        }
        Ok(cur)
    }

    fn same_model(&self, other: &Self) -> Result<()> {
        if self.model == other.model {
            Ok(())
        } else {
            Err(Error::ModelMismatch)
        }
    }

    fn combine(
        &self,
        other: &Self,
        op: impl Fn(&BTreeSet<SpectrumPoint>, &BTreeSet<SpectrumPoint>) -> BTreeSet<SpectrumPoint>,
    ) -> Result<Self> {
        self.same_model(other)?;
        let n = self.level.max(other.level);
        let (a, b) = (self.raise_level(n)?, other.raise_level(n)?);
        Ok(Self::canonical(self.model.clone(), n, op(&a, &b)))
    }

    pub fn meet(&self, other: &Self) -> Result<Self> {
        self.combine(other, |a, b| a & b)
    }

    pub fn join(&self, other: &Self) -> Result<Self> {
        self.combine(other, |a, b| a | b)
    }

    pub fn difference(&self, other: &Self) -> Result<Self> {
        self.combine(other, |a, b| a - b)
    }

    pub fn complement(&self) -> Result<Self> {
        let all: BTreeSet<SpectrumPoint> = self.model.spectrum_points(self.level)?.iter().cloned().collect();
        Ok(Self::canonical(self.model.clone(), self.level, &all - &self.members))
    }

    pub fn leq(&self, other: &Self) -> Result<bool> {
        Ok(self.difference(other)?.is_empty())
    }

    /// Whether the terminal path or cylinder `p` (a point of level `level`)
    /// lies inside the set.
    pub fn contains(&self, p: &SpectrumPoint, level: usize) -> Result<bool> {
        self.model.check_point(p, level)?;
        let single = Self::canonical(self.model.clone(), level, BTreeSet::from([p.clone()]));
        single.leq(self)
    }

    /// `T^{|γ|}(self ∩ Z(γ))`. For the empty word this is the set itself.
    pub fn pull(&self, gamma: &[Vertex]) -> Result<Self> {
        let k = gamma.len();
        if k == 0 {
            return Ok(self.clone());
        }
        let n = self.level.max(k);
        let members = self
            .raise_level(n)?
            .into_iter()
            .filter(|p| p.word().starts_with(gamma))
            .map(|p| match p {
                SpectrumPoint::Path(w) => SpectrumPoint::Path(w[k..].to_vec()),
                SpectrumPoint::Terminal(w, j) => SpectrumPoint::Terminal(w[k..].to_vec(), j),
            })
            .collect();
        Ok(Self::canonical(self.model.clone(), n - k, members))
    }

    /// `{γx : x ∈ self}`, keeping only admissible concatenations.
    pub fn push(&self, gamma: &[Vertex]) -> Result<Self> {
        let Some(&last) = gamma.last() else {
            return Ok(self.clone());
        };
        if !self.model.is_admissible(gamma) {
            return Err(Error::Domain(format!("({}) is not an admissible word", crate::graph::join(gamma))));
        }
        let g = self.model.graph();
        let cat = |w: &[Vertex]| -> Vec<Vertex> { gamma.iter().chain(w).copied().collect() };
        let members = self
            .members
            .iter()
            .filter_map(|p| match p {
                SpectrumPoint::Path(w) => g.edge(last, w[0]).then(|| SpectrumPoint::Path(cat(w))),
                SpectrumPoint::Terminal(w, j) => {
                    let ok = match w.first() {
                        Some(&f) => g.edge(last, f),
                        None => j.contains(g, last),
                    };
                    ok.then(|| SpectrumPoint::Terminal(cat(w), j.clone()))
                }
            })
            .collect();
        Ok(Self::canonical(self.model.clone(), self.level + gamma.len(), members))
    }

    /// Member strings in canonical order.
    pub fn render_members(&self) -> Vec<String> {
        self.members.iter().map(|p| p.render(self.model.graph())).collect()
    }
}

/// The cylinder `Z(γ)` of terminal paths starting with `γ`.
pub fn cylinder(model: &MarkovModel, gamma: &[Vertex]) -> Result<ClopenSet> {
    ClopenSet::whole(model)?.push(gamma)
}

/// `U_i` (paths starting with `i`) and `V_i = T(U_i)`.
pub fn base_sets(model: &MarkovModel, i: Vertex) -> Result<(ClopenSet, ClopenSet)> {
    model.graph().check_vertex(i)?;
    let u = ClopenSet::new(model, 0, [SpectrumPoint::Path(vec![i])])?;
    let v = ClopenSet::whole(model)?.push(&[i])?.pull(&[i])?;
    Ok((u, v))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ck4Verdict {
    Holds,
    /// A point in exactly one side of the identity.
    Fails(SpectrumPoint),
    /// Infinitely many `i` have `A(E, F, i) = 1`, so the relation is void.
    NotFinitelySupported,
}

/// The set identity behind CK4:
/// `∩_{j∈E} V_j ∩ ∩_{k∈F} V_k^c = ∪_{i∈S} U_i` with
/// `S = {i : A(j, i) = 1 for j ∈ E, A(k, i) = 0 for k ∈ F}`.
///
/// Finite models are checked on clopen sets; infinite ones symbolically.
pub fn ck4_identity(model: &MarkovModel, e: &[Vertex], f: &[Vertex]) -> Result<Ck4Verdict> {
    for &v in e.iter().chain(f) {
        model.graph().check_vertex(v)?;
    }
    if model.graph().is_finite() && model.window().is_none() {
        ck4_clopen(model, e, f)
    } else {
        ck4_symbolic(model, e, f)
    }
}

fn in_support(model: &MarkovModel, e: &[Vertex], f: &[Vertex], i: Vertex) -> bool {
    let g = model.graph();
    e.iter().all(|&j| g.edge(j, i)) && f.iter().all(|&k| !g.edge(k, i))
}

pub(crate) fn ck4_clopen(model: &MarkovModel, e: &[Vertex], f: &[Vertex]) -> Result<Ck4Verdict> {
    let mut lhs = ClopenSet::whole(model)?;
    for &j in e {
        lhs = lhs.meet(&base_sets(model, j)?.1)?;
    }
    for &k in f {
        lhs = lhs.difference(&base_sets(model, k)?.1)?;
    }
    let n = model.graph().vertex_count().expect("finite model");
    let rhs = ClopenSet::new(
        model,
        0,
        (1..=n).filter(|&i| in_support(model, e, f, i)).map(|i| SpectrumPoint::Path(vec![i])),
    )?;
    let diff = lhs.difference(&rhs)?.join(&rhs.difference(&lhs)?)?;
    Ok(match diff.members.into_iter().next() {
        None => Ck4Verdict::Holds,
        Some(p) => Ck4Verdict::Fails(p),
    })
}

/// Points with a nonempty word lie on both sides or neither, so the identity
/// can only fail at an empty terminal path `(∅; J)`, which is in the left
/// side iff `E ⊆ J` and `F ∩ J = ∅`.
pub(crate) fn ck4_symbolic(model: &MarkovModel, e: &[Vertex], f: &[Vertex]) -> Result<Ck4Verdict> {
    let g = model.graph();
    let far = match g.presentation() {
        Presentation::Finite { .. } => None,
        Presentation::Block { classes, .. } => (*classes.last().unwrap() == crate::graph::Cardinality::Infinite)
            .then(|| g.class_first_vertex(classes.len())),
        Presentation::Banded { offsets, .. } => {
            let top = e.iter().chain(f).copied().max().unwrap_or(0);
            Some(g.cutoff().unwrap() + top + offsets.last().copied().unwrap_or(0) + 1)
        }
    };
    if let Some(v) = far {
        if in_support(model, e, f, v) {
            return Ok(Ck4Verdict::NotFinitelySupported);
        }
    }
    for j in model.boundary() {
        if e.iter().all(|&v| j.contains(g, v)) && f.iter().all(|&v| !j.contains(g, v)) {
            return Ok(Ck4Verdict::Fails(SpectrumPoint::Terminal(Vec::new(), j.clone())));
        }
    }
    Ok(Ck4Verdict::Holds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Cardinality, GraphSpec};
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

    fn path(w: &[Vertex]) -> SpectrumPoint {
        SpectrumPoint::Path(w.to_vec())
    }

    #[test]
    fn base_set_examples() {
        let m = model(FULL2, false);
        let (u1, v1) = base_sets(&m, 1).unwrap();
        let (u2, _) = base_sets(&m, 2).unwrap();
        assert_eq!(v1, ClopenSet::whole(&m).unwrap());
        assert_eq!(u1.join(&u2).unwrap(), v1);
        assert!(u1.meet(&u2).unwrap().is_empty());
        assert_eq!(ClopenSet::empty(&m).complement().unwrap(), ClopenSet::whole(&m).unwrap());

        let t = model(FULL2, true);
        let (u1, v1) = base_sets(&t, 1).unwrap();
        let (u2, _) = base_sets(&t, 2).unwrap();
        let union = u1.join(&u2).unwrap();
        assert!(union.leq(&v1).unwrap());
        assert_ne!(union, v1);
        let i = BoundaryPattern::everything(t.graph());
        assert!(v1.contains(&SpectrumPoint::Terminal(vec![], i), 0).unwrap());

        let gm = model(GOLDEN, false);
        assert_eq!(base_sets(&gm, 2).unwrap().1, base_sets(&gm, 1).unwrap().0);

        let ray = GraphSpec::banded(vec![], vec![1], vec![]).unwrap();
        let r = validate_model(&ray, &BoundaryFamily::Auto).unwrap().with_window(6);
        for i in 1..5 {
            assert_eq!(base_sets(&r, i).unwrap().1, base_sets(&r, i + 1).unwrap().0);
        }
        assert!(matches!(base_sets(&gm, 3), Err(Error::UnknownVertex(3))));
    }

    #[test]
    fn raising_examples() {
        let m = model(FULL2, false);
        let (u1, _) = base_sets(&m, 1).unwrap();
        assert_eq!(u1.raise_level(1).unwrap(), BTreeSet::from([path(&[1, 1]), path(&[1, 2])]));
        let gm = model(GOLDEN, false);
        let (u2, _) = base_sets(&gm, 2).unwrap();
        assert_eq!(u2.raise_level(1).unwrap(), BTreeSet::from([path(&[2, 1])]));
        let t = model(FULL2, true);
        let e = SpectrumPoint::Terminal(vec![], BoundaryPattern::everything(t.graph()));
        let s = ClopenSet::new(&t, 0, [e.clone()]).unwrap();
        for n in 0..4 {
            assert_eq!(s.raise_level(n).unwrap(), BTreeSet::from([e.clone()]));
        }
        assert!(ClopenSet::new(&t, 3, [e]).unwrap().level() == 0);
        let (u1, _) = base_sets(&t, 1).unwrap();
        assert!(matches!(
            ClopenSet::new(&t, 2, [path(&[1, 2, 1])]).unwrap().meet(&u1).unwrap().raise_level(1),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn model_mismatch() {
        let a = base_sets(&model(FULL2, false), 1).unwrap().0;
        let b = base_sets(&model(FULL2, true), 1).unwrap().0;
        assert_eq!(a.meet(&b), Err(Error::ModelMismatch));
    }

    #[test]
    fn ck4_examples() {
        assert_eq!(ck4_identity(&model(FULL2, false), &[1], &[]).unwrap(), Ck4Verdict::Holds);
        let t = model(FULL2, true);
        let witness = SpectrumPoint::Terminal(vec![], BoundaryPattern::everything(t.graph()));
        assert_eq!(ck4_identity(&t, &[1], &[]).unwrap(), Ck4Verdict::Fails(witness.clone()));
        assert_eq!(ck4_identity(&t, &[1, 2], &[]).unwrap(), Ck4Verdict::Fails(witness));

        let ones = GraphSpec::block(vec![Cardinality::Infinite], vec![vec![1]]).unwrap();
        let o = validate_model(&ones, &BoundaryFamily::Auto).unwrap();
        assert_eq!(ck4_identity(&o, &[1], &[]).unwrap(), Ck4Verdict::NotFinitelySupported);

        let ray = GraphSpec::banded(vec![], vec![1], vec![]).unwrap();
        let r = validate_model(&ray, &BoundaryFamily::Auto).unwrap();
        assert_eq!(ck4_identity(&r, &[3], &[]).unwrap(), Ck4Verdict::Holds);
        assert_eq!(ck4_identity(&r, &[], &[3]).unwrap(), Ck4Verdict::NotFinitelySupported);
    }

    fn subsets(n: usize) -> Vec<Vec<Vertex>> {
        (0..1u32 << n)
            .map(|m| (1..=n).filter(|&v| m >> (v - 1) & 1 == 1).collect())
            .collect()
    }

    fn all_graphs(n: usize) -> impl Iterator<Item = GraphSpec> {
        (0..1u32 << (n * n)).map(move |bits| {
            let rows = (0..n)
                .map(|i| (0..n).map(|j| (bits >> (i * n + j) & 1) as u8).collect())
                .collect();
            GraphSpec::finite(rows).unwrap()
        })
    }

    #[test]
    fn ck4_never_fails_on_dense_models_and_routes_agree() {
        for n in 1..=3 {
            for g in all_graphs(n) {
                let dense = validate_model(&g, &BoundaryFamily::Auto);
                let toeplitz =
                    validate_model(&g, &BoundaryFamily::Explicit(vec![BoundaryPattern::everything(&g)])).unwrap();
                for e in subsets(n) {
                    for f in subsets(n) {
                        if let Ok(m) = &dense {
                            let v = ck4_clopen(m, &e, &f).unwrap();
                            assert_eq!(v, Ck4Verdict::Holds);
                            assert_eq!(v, ck4_symbolic(m, &e, &f).unwrap());
                        }
                        assert_eq!(
                            ck4_clopen(&toeplitz, &e, &f).unwrap(),
                            ck4_symbolic(&toeplitz, &e, &f).unwrap()
                        );
                    }
                }
                let all: Vec<Vertex> = (1..=n).collect();
                assert!(matches!(ck4_identity(&toeplitz, &all, &[]).unwrap(), Ck4Verdict::Fails(_)));
            }
        }
    }

    #[test]
    fn level_independence() {
        let t = model(GOLDEN, true);
        let (u1, v1) = base_sets(&t, 1).unwrap();
        let (u2, v2) = base_sets(&t, 2).unwrap();
        for n in 1..4 {
            let a = ClopenSet::new(&t, n, u1.raise_level(n).unwrap()).unwrap();
            assert_eq!(a, u1);
            let b = ClopenSet::new(&t, n + 1, v2.raise_level(n + 1).unwrap()).unwrap();
            assert_eq!(b, v2);
        }
        assert_eq!(u1.join(&u2).unwrap().join(&v1).unwrap().level(), 0);
    }

    fn arb_set(m: MarkovModel) -> impl Strategy<Value = ClopenSet> {
        let pts: Vec<SpectrumPoint> = m.spectrum_points(2).unwrap().iter().cloned().collect();
        proptest::sample::subsequence(pts.clone(), 0..=pts.len())
            .prop_map(move |s| ClopenSet::new(&m, 2, s).unwrap())
    }

    proptest! {
        #[test]
        fn lattice_laws(
            (a, b, c) in (0..3usize).prop_flat_map(|k| {
                let m = match k {
                    0 => model(FULL2, true),
                    1 => model(GOLDEN, true),
                    _ => model(&[&[0, 1, 1], &[1, 0, 0], &[1, 1, 0]], false),
                };
                (arb_set(m.clone()), arb_set(m.clone()), arb_set(m))
            })
        ) {
            let ac = a.complement().unwrap();
            let bc = b.complement().unwrap();
            prop_assert_eq!(a.join(&b).unwrap().complement().unwrap(), ac.meet(&bc).unwrap());
            prop_assert_eq!(a.meet(&b).unwrap().complement().unwrap(), ac.join(&bc).unwrap());
            prop_assert_eq!(ac.complement().unwrap(), a.clone());
            prop_assert_eq!(
                a.meet(&b.join(&c).unwrap()).unwrap(),
                a.meet(&b).unwrap().join(&a.meet(&c).unwrap()).unwrap()
            );
            prop_assert_eq!(a.difference(&b).unwrap(), a.meet(&bc).unwrap());
            prop_assert!(a.meet(&b).unwrap().leq(&a).unwrap());
            prop_assert!(a.leq(&a.join(&b).unwrap()).unwrap());
            // push then pull is the identity on the follower set
            for i in 1..=2 {
                let v = base_sets(a.model(), i).unwrap().1;
                let h = a.meet(&v).unwrap();
                prop_assert_eq!(h.push(&[i]).unwrap().pull(&[i]).unwrap(), h);
            }
        }
    }
}
