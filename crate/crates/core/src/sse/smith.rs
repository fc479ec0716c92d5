//! Smith normal form, Bowen–Franks groups and characteristic polynomials.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;
use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    /// Diagonal of `D`, each dividing the next; zeros come last.
    pub factors: Vec<BigInt>,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub d: IntMatrix,
}

/// `U · M · V = D` with `U`, `V` unimodular and `D` diagonal.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (r, c) = (m.rows(), m.cols());
    let mut d = m.clone();
    let mut u = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);
    for t in 0..r.min(c) {
        loop {
            let Some((pi, pj)) = smallest_entry(&d, t) else {
                return finish(d, u, v);
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);
            let mut clean = true;
            for i in t + 1..r {
                let q = -(&d[(i, t)] / &d[(t, t)]);
                if !q.is_zero() {
                    d.add_row(i, t, &q);
                    u.add_row(i, t, &q);
                }
                clean &= d[(i, t)].is_zero();
            }
            for j in t + 1..c {
                let q = -(&d[(t, j)] / &d[(t, t)]);
                if !q.is_zero() {
                    d.add_col(j, t, &q);
                    v.add_col(j, t, &q);
                }
                clean &= d[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            let bad_row = (t + 1..r).find(|&i| (t + 1..c).any(|j| !(&d[(i, j)] % &d[(t, t)]).is_zero()));
            match bad_row {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row(t, i, &one);
                    u.add_row(t, i, &one);
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    finish(d, u, v)
}

fn smallest_entry(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..d.rows() {
        for j in t..d.cols() {
            if d[(i, j)].is_zero() {
                continue;
            }
            if best.is_none_or(|(a, b)| d[(i, j)].abs() < d[(a, b)].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

fn finish(d: IntMatrix, u: IntMatrix, v: IntMatrix) -> SmithForm {
    let factors = (0..d.rows().min(d.cols())).map(|i| d[(i, i)].clone()).collect();
    SmithForm { factors, u, v, d }
}

/// The cokernel of `I - A` together with `det(I - A)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BowenFranks {
    /// Invariant factors of `I - A`; the group is `⊕ Z/d`.
    pub factors: Vec<BigInt>,
    pub det: BigInt,
}

impl BowenFranks {
    /// Factors other than 1, which determine the group up to isomorphism.
    pub fn nontrivial_factors(&self) -> Vec<BigInt> {
        self.factors.iter().filter(|d| !d.is_one()).cloned().collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.iter().all(One::is_one)
    }

    /// `0`, `Z/2`, `Z ⊕ Z/3`, ...
    pub fn group(&self) -> String {
        let parts: Vec<String> = self
            .nontrivial_factors()
            .iter()
            .map(|d| if d.is_zero() { "Z".to_string() } else { format!("Z/{d}") })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" ⊕ ")
        }
    }
}

pub fn bowen_franks(a: &IntMatrix) -> Result<BowenFranks> {
    let m = a.identity_minus()?;
    Ok(BowenFranks {
        factors: smith_normal_form(&m).factors,
        det: m.det()?,
    })
}

/// An integer polynomial, coefficients from the constant term up.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial(pub Vec<BigInt>);

impl Polynomial {
    pub fn coefficients(&self) -> &[BigInt] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (k, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(if c.is_negative() { " - " } else { " + " });
            }
            let mono = match k {
                0 => String::new(),
                1 => "x".into(),
                _ => format!("x^{k}"),
            };
            if k == 0 || !mag.is_one() {
                out.push_str(&mag.to_string());
            }
            out.push_str(&mono);
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

/// `det(xI - A)` by the Faddeev–LeVerrier recursion; all divisions are exact.
pub fn charpoly(a: &IntMatrix) -> Result<Polynomial> {
    a.require_square("matrix")?;
    let n = a.rows();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    let mut m = IntMatrix::zeros(n, n);
    for k in 1..=n {
        let mut next = a.mul(&m)?;
        for i in 0..n {
            next[(i, i)] += &coeffs[n - k + 1];
        }
        m = next;
        let tr = a.mul(&m)?.trace()?;
        coeffs[n - k] = -tr / BigInt::from(k);
    }
    Ok(Polynomial(coeffs))
}

/// The characteristic polynomial with every factor `x` removed.
pub fn charpoly_nonzero_part(a: &IntMatrix) -> Result<Polynomial> {
    let p = charpoly(a)?;
    let lead = p.0.iter().take_while(|c| c.is_zero()).count();
    Ok(Polynomial(p.0[lead..].to_vec()))
}
