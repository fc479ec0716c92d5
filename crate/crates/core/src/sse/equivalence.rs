//! Elementary, strong and lag-`k` shift equivalence of nonnegative matrices.

use num_bigint::BigInt;

use super::matrix::IntMatrix;
use super::smith::{bowen_franks, charpoly_nonzero_part, BowenFranks, Polynomial};
use crate::error::{Error, Result};

fn check_pair_shapes(a: &IntMatrix, r: &IntMatrix, s: &IntMatrix, b: &IntMatrix) -> Result<()> {
    a.require_square("A")?;
    b.require_square("B")?;
    let (n, m) = (a.rows(), b.rows());
    if (r.rows(), r.cols()) != (n, m) {
        return Err(Error::Shape(format!("R is {}x{}, expected {n}x{m}", r.rows(), r.cols())));
    }
    if (s.rows(), s.cols()) != (m, n) {
        return Err(Error::Shape(format!("S is {}x{}, expected {m}x{n}", s.rows(), s.cols())));
    }
    for (name, x) in [("A", a), ("B", b), ("R", r), ("S", s)] {
        x.require_nonnegative(name)?;
    }
    Ok(())
}

/// `A = RS` and `B = SR`.
pub fn verify_elementary(a: &IntMatrix, r: &IntMatrix, s: &IntMatrix, b: &IntMatrix) -> Result<bool> {
    check_pair_shapes(a, r, s, b)?;
    Ok(&r.mul(s)? == a && &s.mul(r)? == b)
}

/// `AR = RB`, `SA = BS`, `RS = A^k`, `SR = B^k`.
pub fn verify_shift_equivalence(
    a: &IntMatrix,
    b: &IntMatrix,
    r: &IntMatrix,
    s: &IntMatrix,
    k: u32,
) -> Result<bool> {
    if k == 0 {
        return Err(Error::Parameter("the lag must be at least 1".into()));
    }
    check_pair_shapes(a, r, s, b)?;
    Ok(a.mul(r)? == r.mul(b)?
        && s.mul(a)? == b.mul(s)?
        && r.mul(s)? == a.pow(k)?
        && s.mul(r)? == b.pow(k)?)
}

/// Result of checking a chain `A = A_0 ~ A_1 ~ ... ~ A_k = B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChainVerdict {
    Valid,
    /// Step `i` (0-based) has `R_i S_i != A_i`.
    BrokenStep(usize),
    /// The last matrix `S_k R_k` is not `B`.
    WrongEnd,
}

/// Check a strong shift equivalence certificate. Each step supplies `(R, S)`
/// with `R S` equal to the current matrix; the next matrix is `S R`.
pub fn verify_chain(a: &IntMatrix, b: &IntMatrix, chain: &[(IntMatrix, IntMatrix)]) -> Result<ChainVerdict> {
    a.require_square("A")?;
    b.require_square("B")?;
    let mut cur = a.clone();
    for (i, (r, s)) in chain.iter().enumerate() {
        r.require_nonnegative(&format!("chain[{i}].R"))?;
        s.require_nonnegative(&format!("chain[{i}].S"))?;
        if r.rows() != cur.rows() || s.cols() != cur.rows() || r.cols() != s.rows() {
            return Err(Error::Shape(format!("chain[{i}]: R and S do not fit a {0}x{0} matrix", cur.rows())));
        }
        if r.mul(s)? != cur {
            return Ok(ChainVerdict::BrokenStep(i));
        }
        cur = s.mul(r)?;
    }
    Ok(if &cur == b { ChainVerdict::Valid } else { ChainVerdict::WrongEnd })
}

/// The classical invariants of `A` and `B` side by side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantComparison {
    pub a: Invariants,
    pub b: Invariants,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Invariants {
    pub bowen_franks: BowenFranks,
    pub charpoly_nonzero: Polynomial,
}

impl Invariants {
    pub fn of(a: &IntMatrix) -> Result<Self> {
        Ok(Invariants {
            bowen_franks: bowen_franks(a)?,
            charpoly_nonzero: charpoly_nonzero_part(a)?,
        })
    }

    pub fn det(&self) -> &BigInt {
        &self.bowen_franks.det
    }
}

impl InvariantComparison {
    pub fn det_equal(&self) -> bool {
        self.a.det() == self.b.det()
    }

    pub fn bowen_franks_equal(&self) -> bool {
        self.a.bowen_franks.nontrivial_factors() == self.b.bowen_franks.nontrivial_factors()
    }

    pub fn charpoly_equal(&self) -> bool {
        self.a.charpoly_nonzero == self.b.charpoly_nonzero
    }

    /// Whether no listed invariant separates the two matrices.
    pub fn all_equal(&self) -> bool {
        self.det_equal() && self.bowen_franks_equal() && self.charpoly_equal()
    }
}

pub fn compare_invariants(a: &IntMatrix, b: &IntMatrix) -> Result<InvariantComparison> {
    Ok(InvariantComparison {
        a: Invariants::of(a)?,
        b: Invariants::of(b)?,
    })
}

/// Outcome of [`search_elementary`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found { r: IntMatrix, s: IntMatrix },
    /// An invariant differs, so no equivalence exists at all.
    Separated(&'static str),
    /// Nothing within the bounds.
    Exhausted,
}

/// Find the first `(R, S)` with entries `<= entry_bound` such that
/// `A = RS` and `B = SR`.
///
/// The inner dimension of such a pair is the size of `B`, so the search is
/// empty when that exceeds `inner_dim_bound`. `R` is enumerated in row-major
/// lexicographic order; for each `R`, `S` is enumerated column by column,
/// each column in lexicographic order.
pub fn search_elementary(
    a: &IntMatrix,
    b: &IntMatrix,
    inner_dim_bound: usize,
    entry_bound: usize,
) -> Result<SearchOutcome> {
    if inner_dim_bound == 0 || entry_bound == 0 {
        return Err(Error::Parameter("search bounds must be positive".into()));
    }
    a.require_square("A")?;
    b.require_square("B")?;
    a.require_nonnegative("A")?;
    b.require_nonnegative("B")?;
    let inv = compare_invariants(a, b)?;
    if !inv.det_equal() {
        return Ok(SearchOutcome::Separated("det(I - A)"));
    }
    if !inv.bowen_franks_equal() {
        return Ok(SearchOutcome::Separated("Bowen–Franks group"));
    }
    if !inv.charpoly_equal() {
        return Ok(SearchOutcome::Separated("nonzero characteristic polynomial"));
    }
    let (n, m) = (a.rows(), b.rows());
    if m > inner_dim_bound {
        return Ok(SearchOutcome::Exhausted);
    }
    let target: Vec<Vec<i64>> = small(a)?;
    let b_small = small(b)?;
    let bound = entry_bound as i64;
    let mut r = vec![vec![0i64; m]; n];
    loop {
        if let Some(s) = solve_s(&r, &target, &b_small, bound) {
            return Ok(SearchOutcome::Found {
                r: IntMatrix::from_rows(&r)?,
                s: IntMatrix::from_rows(&s)?,
            });
        }
        if !increment(r.iter_mut().flatten(), bound) {
            return Ok(SearchOutcome::Exhausted);
        }
    }
}

fn small(m: &IntMatrix) -> Result<Vec<Vec<i64>>> {
    (0..m.rows())
        .map(|i| {
            m.row(i)
                .iter()
                .map(|x| i64::try_from(x).map_err(|_| Error::Parameter("matrix entries too large to search".into())))
                .collect()
        })
        .collect()
}

/// Odometer step over the entries in order, last entry fastest.
fn increment<'a>(cells: impl DoubleEndedIterator<Item = &'a mut i64>, bound: i64) -> bool {
    for c in cells.rev() {
        if *c < bound {
            *c += 1;
            return true;
        }
        *c = 0;
    }
    false
}

fn solve_s(r: &[Vec<i64>], a: &[Vec<i64>], b: &[Vec<i64>], bound: i64) -> Option<Vec<Vec<i64>>> {
    let (n, m) = (r.len(), b.len());
    // Candidate columns x with R x = A[:, j].
    let mut cands: Vec<Vec<Vec<i64>>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut col = vec![0i64; m];
        let mut found = Vec::new();
        loop {
            if (0..n).all(|i| (0..m).map(|k| r[i][k] * col[k]).sum::<i64>() == a[i][j]) {
                found.push(col.clone());
            }
            if !increment(col.iter_mut(), bound) {
                break;
            }
        }
        if found.is_empty() {
            return None;
        }
        cands.push(found);
    }
    let mut pick = vec![0usize; n];
    loop {
        let s: Vec<Vec<i64>> = (0..m).map(|k| (0..n).map(|j| cands[j][pick[j]][k]).collect()).collect();
        let sr_ok = (0..m).all(|i| (0..m).all(|l| (0..n).map(|j| s[i][j] * r[j][l]).sum::<i64>() == b[i][l]));
        if sr_ok {
            return Some(s);
        }
        let mut j = n;
        loop {
            if j == 0 {
                return None;
            }
            j -= 1;
            pick[j] += 1;
            if pick[j] < cands[j].len() {
                break;
            }
            pick[j] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn elementary_examples() {
        let (a, r, s) = (m(&[vec![2]]), m(&[vec![1, 1]]), m(&[vec![1], vec![1]]));
        let b = m(&[vec![1, 1], vec![1, 1]]);
        assert!(verify_elementary(&a, &r, &s, &b).unwrap());
        assert!(verify_elementary(&a, &m(&[vec![2]]), &m(&[vec![1]]), &a).unwrap());
        assert!(!verify_elementary(&a, &r, &s, &m(&[vec![1, 1], vec![1, 0]])).unwrap());
        assert!(matches!(verify_elementary(&a, &s, &r, &b), Err(Error::Shape(_))));
        assert!(matches!(
            verify_elementary(&a, &m(&[vec![-1, 1]]), &s, &b),
            Err(Error::Negative(ref n)) if n == "R"
        ));
    }

    #[test]
    fn shift_equivalence_examples() {
        let two = m(&[vec![2]]);
        assert!(verify_shift_equivalence(&two, &two, &two, &two, 2).unwrap());
        let (r, s) = (m(&[vec![1, 1]]), m(&[vec![1], vec![1]]));
        let b = m(&[vec![1, 1], vec![1, 1]]);
        assert!(verify_shift_equivalence(&two, &b, &r, &s, 1).unwrap());
        assert!(matches!(verify_shift_equivalence(&two, &b, &r, &s, 0), Err(Error::Parameter(_))));
        let three = m(&[vec![3]]);
        for k in 1..=3 {
            for x in 0..=6 {
                for y in 0..=6 {
                    assert!(!verify_shift_equivalence(&two, &three, &m(&[vec![x]]), &m(&[vec![y]]), k).unwrap());
                }
            }
        }
    }

    #[test]
    fn chains() {
        let a = m(&[vec![2]]);
        let b = m(&[vec![1, 1], vec![1, 1]]);
        let step = (m(&[vec![1, 1]]), m(&[vec![1], vec![1]]));
        assert_eq!(verify_chain(&a, &b, std::slice::from_ref(&step)).unwrap(), ChainVerdict::Valid);
        assert_eq!(verify_chain(&a, &a, &[]).unwrap(), ChainVerdict::Valid);
        let back = (m(&[vec![1], vec![1]]), m(&[vec![1, 1]]));
        assert_eq!(verify_chain(&a, &a, &[step.clone(), back]).unwrap(), ChainVerdict::Valid);
        assert_eq!(verify_chain(&a, &a, std::slice::from_ref(&step)).unwrap(), ChainVerdict::WrongEnd);
        assert_eq!(verify_chain(&m(&[vec![3]]), &b, std::slice::from_ref(&step)).unwrap(), ChainVerdict::BrokenStep(0));
        assert!(matches!(verify_chain(&b, &a, &[step]), Err(Error::Shape(_))));
    }

    #[test]
    fn search_examples() {
        let a = m(&[vec![2]]);
        let b = m(&[vec![1, 1], vec![1, 1]]);
        assert_eq!(
            search_elementary(&a, &b, 2, 1).unwrap(),
            SearchOutcome::Found { r: m(&[vec![1, 1]]), s: m(&[vec![1], vec![1]]) }
        );
        assert_eq!(search_elementary(&a, &m(&[vec![3]]), 4, 3).unwrap(), SearchOutcome::Separated("det(I - A)"));
        let one = m(&[vec![1]]);
        assert_eq!(
            search_elementary(&one, &one, 1, 1).unwrap(),
            SearchOutcome::Found { r: one.clone(), s: one.clone() }
        );
        assert!(matches!(search_elementary(&a, &b, 0, 1), Err(Error::Parameter(_))));
        assert_eq!(search_elementary(&a, &b, 1, 3).unwrap(), SearchOutcome::Exhausted);
    }

    /// Brute-force oracle: try every pair within bounds in the documented order.
    #[test]
    fn search_matches_brute_force() {
        let cases = [
            (vec![vec![1, 1], vec![1, 0]], vec![vec![1, 1], vec![1, 0]]),
            (vec![vec![1, 1], vec![1, 0]], vec![vec![0, 1], vec![1, 1]]),
            (vec![vec![2]], vec![vec![1, 1], vec![1, 1]]),
            (vec![vec![1, 1], vec![1, 1]], vec![vec![2]]),
            (vec![vec![0, 1], vec![1, 0]], vec![vec![0, 1], vec![1, 0]]),
        ];
        for (a, b) in cases {
            let (am, bm) = (m(&a), m(&b));
            let got = search_elementary(&am, &bm, 3, 2).unwrap();
            let (n, k) = (a.len(), b.len());
            let mut expect = SearchOutcome::Exhausted;
            'outer: for rc in 0..3i64.pow((n * k) as u32) {
                let r: Vec<Vec<i64>> = (0..n).map(|i| (0..k).map(|j| digit(rc, n * k - 1 - (i * k + j))).collect()).collect();
                for sc in 0..3i64.pow((n * k) as u32) {
                    // column-major digits, last column fastest
                    let s: Vec<Vec<i64>> = (0..k)
                        .map(|i| (0..n).map(|j| digit(sc, n * k - 1 - (j * k + i))).collect())
                        .collect();
                    if verify_elementary(&am, &m(&r), &m(&s), &bm).unwrap() {
                        expect = SearchOutcome::Found { r: m(&r), s: m(&s) };
                        break 'outer;
                    }
                }
            }
            assert_eq!(got, expect, "{a:?} {b:?}");
        }
    }

    fn digit(code: i64, pos: usize) -> i64 {
        code / 3i64.pow(pos as u32) % 3
    }
}
