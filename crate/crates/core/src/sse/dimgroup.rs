//! The dimension group `G(A) = lim (Z^n --A--> Z^n --A--> ...)` with the
//! shift automorphism `τ_A`.
//!
//! The element `v@m` is the class of `v` in the `m`-th copy of `Z^n`, so
//! `v@m = (Av)@(m+1)`. Two elements at the same level are equal iff
//! `A^k (v - w) = 0` for some `k`; the kernels of the powers of `A` stop
//! growing by `k = n`, which makes `A^n (v - w) = 0` an exact test.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::matrix::IntMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct DimGroupElement {
    base: Arc<IntMatrix>,
    v: Vec<BigInt>,
    level: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Positivity {
    /// `A^k v >= 0` entrywise.
    Positive(usize),
    /// `A^k v <= 0` entrywise.
    Negative(usize),
    Undecided,
}

/// The group of a fixed square nonnegative matrix; elements share its base.
#[derive(Debug, Clone)]
pub struct DimGroup {
    base: Arc<IntMatrix>,
}

impl DimGroup {
    pub fn new(a: &IntMatrix) -> Result<Self> {
        a.require_square("A")?;
        a.require_nonnegative("A")?;
        Ok(DimGroup { base: Arc::new(a.clone()) })
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.base
    }

    pub fn element<T: Into<BigInt> + Clone>(&self, v: &[T], level: usize) -> Result<DimGroupElement> {
        if v.len() != self.base.rows() {
            return Err(Error::Shape(format!(
                "vector of length {} in the group of a {0}x{0} matrix",
                v.len()
            )));
        }
        Ok(DimGroupElement {
            base: self.base.clone(),
            v: v.iter().cloned().map(Into::into).collect(),
            level,
        })
    }
}

impl DimGroupElement {
    pub fn vector(&self) -> &[BigInt] {
        &self.v
    }

    pub fn level(&self) -> usize {
        self.level
    }

    fn same_base(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.base, &other.base) || self.base == other.base {
            Ok(())
        } else {
            Err(Error::ModelMismatch)
        }
    }

    /// The representative at level `m >= self.level`.
    fn lifted(&self, m: usize) -> Vec<BigInt> {
        let mut v = self.v.clone();
        for _ in self.level..m {
            v = self.base.mul_vec(&v).expect("square base");
        }
        v
    }

    pub fn equal(&self, other: &Self) -> Result<bool> {
        self.same_base(other)?;
        let m = self.level.max(other.level);
        let mut d: Vec<BigInt> = self.lifted(m).iter().zip(other.lifted(m)).map(|(a, b)| a - b).collect();
        for _ in 0..self.base.rows() {
            d = self.base.mul_vec(&d)?;
        }
        Ok(d.iter().all(Zero::is_zero))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_base(other)?;
        let m = self.level.max(other.level);
        Ok(DimGroupElement {
            base: self.base.clone(),
            v: self.lifted(m).iter().zip(other.lifted(m)).map(|(a, b)| a + b).collect(),
            level: m,
        })
    }

    pub fn neg(&self) -> Self {
        DimGroupElement {
            base: self.base.clone(),
            v: self.v.iter().map(|x| -x).collect(),
            level: self.level,
        }
    }

    /// `τ(v@m) = (Av)@m`.
    pub fn tau(&self) -> Self {
        DimGroupElement {
            base: self.base.clone(),
            v: self.base.mul_vec(&self.v).expect("square base"),
            level: self.level,
        }
    }

    /// `τ^{-1}(v@m) = v@(m+1)`.
    pub fn tau_inverse(&self) -> Self {
        DimGroupElement {
            base: self.base.clone(),
            v: self.v.clone(),
            level: self.level + 1,
        }
    }

    /// Look for `k <= k_max` with `A^k v` of one sign.
    pub fn positive_bounded(&self, k_max: usize) -> Positivity {
        let mut w = self.v.clone();
        for k in 0..=k_max {
            if w.iter().all(|x| !x.is_negative()) {
                return Positivity::Positive(k);
            }
            if w.iter().all(|x| !x.is_positive()) {
                return Positivity::Negative(k);
            }
            w = self.base.mul_vec(&w).expect("square base");
        }
        Positivity::Undecided
    }
}

impl fmt::Display for DimGroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.v.iter().map(ToString::to_string).collect();
        write!(f, "[{}]@{}", parts.join(","), self.level)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn group(rows: &[Vec<i64>]) -> DimGroup {
        DimGroup::new(&IntMatrix::from_rows(rows).unwrap()).unwrap()
    }

    #[test]
    fn examples() {
        let g = group(&[vec![2]]);
        let e = |v: i64, m| g.element(&[v], m).unwrap();
        assert!(e(1, 0).equal(&e(2, 1)).unwrap());
        assert!(!e(1, 1).equal(&e(1, 0)).unwrap());
        assert!(e(1, 1).add(&e(1, 1)).unwrap().equal(&e(1, 0)).unwrap());
        let gm = group(&[vec![1, 1], vec![1, 0]]);
        assert_eq!(gm.element(&[1, -1], 0).unwrap().positive_bounded(3), Positivity::Positive(1));
        assert_eq!(gm.element(&[-1, 0], 0).unwrap().positive_bounded(3), Positivity::Negative(0));
        let other = group(&[vec![3]]);
        assert_eq!(e(1, 0).equal(&other.element(&[1], 0).unwrap()), Err(Error::ModelMismatch));
    }

    #[test]
    fn nilpotent_part_is_invisible() {
        // A = [[0,1],[0,0]]: every vector dies after two steps.
        let g = group(&[vec![0, 1], vec![0, 0]]);
        assert!(g.element(&[5, 7], 0).unwrap().equal(&g.element(&[0, 0], 3).unwrap()).unwrap());
        let h = group(&[vec![1, 0], vec![1, 0]]);
        assert!(h.element(&[0, 1], 0).unwrap().equal(&h.element(&[0, 0], 0).unwrap()).unwrap());
        assert!(!h.element(&[1, 0], 0).unwrap().equal(&h.element(&[0, 0], 0).unwrap()).unwrap());
    }

    #[test]
    fn tau_is_an_automorphism() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for rows in [vec![vec![2]], vec![vec![1, 1], vec![1, 0]], vec![vec![1, 1, 0], vec![0, 0, 1], vec![1, 0, 0]]] {
            let g = group(&rows);
            let n = rows.len();
            for _ in 0..50 {
                let v: Vec<i64> = (0..n).map(|_| rng.gen_range(-5..=5)).collect();
                let w: Vec<i64> = (0..n).map(|_| rng.gen_range(-5..=5)).collect();
                let x = g.element(&v, rng.gen_range(0..3)).unwrap();
                let y = g.element(&w, rng.gen_range(0..3)).unwrap();
                let z = g.element(&w, rng.gen_range(0..3)).unwrap();
                assert!(x.equal(&x).unwrap());
                assert_eq!(x.equal(&y).unwrap(), y.equal(&x).unwrap());
                if x.equal(&y).unwrap() && y.equal(&z).unwrap() {
                    assert!(x.equal(&z).unwrap());
                }
                assert_eq!(x.equal(&y).unwrap(), x.tau().equal(&y.tau()).unwrap());
                assert!(x.tau().tau_inverse().equal(&x).unwrap());
                assert!(x.tau_inverse().tau().equal(&x).unwrap());
                assert!(x.add(&y).unwrap().tau().equal(&x.tau().add(&y.tau()).unwrap()).unwrap());
                assert!(x.add(&x.neg()).unwrap().equal(&g.element(&vec![0; n], 0).unwrap()).unwrap());
            }
        }
    }
}
