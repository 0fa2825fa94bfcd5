//! Exact integer linear algebra: Smith normal form with unimodular
//! transforms, integer kernel bases, and congruence solving mod 2 over the
//! rationals.

use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense row-major matrix of arbitrary-precision integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Panics if the rows are ragged.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        IntMatrix { rows: rows.len(), cols, data: rows.iter().flatten().map(|&x| BigInt::from(x)).collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!("{}x{} times {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let p = a * &other[(k, j)];
                    out[(i, j)] += p;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!("{} columns vs vector of {}", self.cols, v.len())));
        }
        Ok((0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        if self.rows != self.cols {
            return Err(Error::Dimension("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                    return Ok(BigInt::zero());
                };
                a.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = v;
                }
            }
            prev = a[(k, k)].clone();
        }
        Ok(if n == 0 { BigInt::one() } else { sign * &a[(n - 1, n - 1)] })
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] -= q * row[src]
    fn row_axpy(&mut self, dst: usize, src: usize, q: &BigInt) {
        for j in 0..self.cols {
            let t = q * &self[(src, j)];
            self[(dst, j)] -= t;
        }
    }

    /// col[dst] -= q * col[src]
    fn col_axpy(&mut self, dst: usize, src: usize, q: &BigInt) {
        for i in 0..self.rows {
            let t = q * &self[(i, src)];
            self[(i, dst)] -= t;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }
}

/// `U * A * V = D` with `U`, `V` unimodular and `D` diagonal with
/// nonnegative entries `d1 | d2 | ...`.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub rank: usize,
}

impl SmithDecomposition {
    /// Diagonal entries, `min(rows, cols)` of them.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols)).map(|i| self.d[(i, i)].clone()).collect()
    }

    /// Rechecks `U A V = D`, the shape of `D` and the divisibility chain.
    pub fn check(&self, a: &IntMatrix) -> bool {
        let Ok(uav) = self.u.mul(a).and_then(|ua| ua.mul(&self.v)) else {
            return false;
        };
        if uav != self.d {
            return false;
        }
        for i in 0..self.d.rows {
            for j in 0..self.d.cols {
                if i != j && !self.d[(i, j)].is_zero() {
                    return false;
                }
            }
        }
        let diag = self.diagonal();
        if diag.iter().any(Signed::is_negative) {
            return false;
        }
        diag.windows(2).all(|w| if w[0].is_zero() { w[1].is_zero() } else { w[1].is_multiple_of(&w[0]) })
    }
}

/// Smith normal form by repeated smallest-pivot elimination.
///
/// ```
/// use xorgame::linalg::{smith_normal_form, IntMatrix};
/// let a = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
/// let snf = smith_normal_form(&a);
/// assert_eq!(snf.diagonal(), vec![1.into(), 6.into()]);
/// assert!(snf.check(&a));
/// ```
pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let (m, n) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    let mut t = 0;
    while t < m.min(n) {
        let Some((pi, pj)) = smallest_entry(&d, t) else {
            break;
        };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);
        loop {
            let p = d[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..m {
                if !d[(i, t)].is_zero() {
                    let q = &d[(i, t)] / &p;
                    d.row_axpy(i, t, &q);
                    u.row_axpy(i, t, &q);
                    clean &= d[(i, t)].is_zero();
                }
            }
            for j in t + 1..n {
                if !d[(t, j)].is_zero() {
                    let q = &d[(t, j)] / &p;
                    d.col_axpy(j, t, &q);
                    v.col_axpy(j, t, &q);
                    clean &= d[(t, j)].is_zero();
                }
            }
            if !clean {
                // a remainder smaller than the pivot is left in row or column t
                let (pi, pj) = smallest_in_cross(&d, t);
                d.swap_rows(t, pi);
                u.swap_rows(t, pi);
                d.swap_cols(t, pj);
                v.swap_cols(t, pj);
                continue;
            }
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !d[(i, j)].is_multiple_of(&p)));
            match bad {
                Some(i) => {
                    // pull the offending row in; the next pass shrinks the pivot
                    let minus_one = -BigInt::one();
                    d.row_axpy(t, i, &minus_one);
                    u.row_axpy(t, i, &minus_one);
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    SmithDecomposition { u, d, v, rank: t }
}

fn smallest_entry(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..d.rows {
        for j in t..d.cols {
            let x = &d[(i, j)];
            if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < d[(bi, bj)].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

fn smallest_in_cross(d: &IntMatrix, t: usize) -> (usize, usize) {
    let mut best = (t, t);
    let better = |x: &BigInt, b: &BigInt| !x.is_zero() && (b.is_zero() || x.abs() < b.abs());
    for i in t + 1..d.rows {
        if better(&d[(i, t)], &d[best]) {
            best = (i, t);
        }
    }
    for j in t + 1..d.cols {
        if better(&d[(t, j)], &d[best]) {
            best = (t, j);
        }
    }
    best
}

/// A lattice basis of `{ z : A z = 0 }`.
///
/// ```
/// use xorgame::linalg::{integer_kernel_basis, IntMatrix};
/// let k = integer_kernel_basis(&IntMatrix::from_rows(&[vec![1, 1]]));
/// assert_eq!(k.len(), 1);
/// assert_eq!(&k[0][0] + &k[0][1], 0.into());
/// ```
pub fn integer_kernel_basis(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let snf = smith_normal_form(a);
    (snf.rank..a.cols).map(|j| snf.v.column(j)).collect()
}

/// Outcome of [`solve_mod2_over_rationals`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Mod2Solution {
    /// Rational `φ`, entries in `[0, 2)`, with `B φ - s ∈ 2 Z^m`.
    Solution(Vec<BigRational>),
    /// Integer `u` with `uᵀ B = 0` and `uᵀ s` odd.
    Obstruction(Vec<BigInt>),
}

/// Bound on the number of equivalent solutions compared when picking the
/// lexicographically smallest one.
const CANDIDATE_LIMIT: u64 = 1 << 12;

/// Solves `B φ ≡ s (mod 2)` over the rationals, or returns a certificate
/// that no solution exists. Exactly one of the two is possible.
///
/// Free coordinates of the Smith basis are set to zero. Among the finitely
/// many remaining solutions modulo 2 the lexicographically smallest is
/// returned (the comparison is skipped when there are more than 4096).
pub fn solve_mod2_over_rationals(b: &IntMatrix, s: &[i64]) -> Result<Mod2Solution> {
    if s.len() != b.rows {
        return Err(Error::Dimension(format!("{} rows vs {} parities", b.rows, s.len())));
    }
    let snf = smith_normal_form(b);
    let s_big: Vec<BigInt> = s.iter().map(|&x| BigInt::from(x)).collect();
    let us = snf.u.mul_vec(&s_big)?;
    let two = BigInt::from(2);
    if let Some(i) = (snf.rank..b.rows).find(|&i| us[i].is_odd()) {
        let row = snf.u.row(i).to_vec();
        let g = row.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        return Ok(Mod2Solution::Obstruction(row.into_iter().map(|x| x / &g).collect()));
    }
    let diag = snf.diagonal();
    let r = snf.rank;
    let count: u64 = diag[..r]
        .iter()
        .try_fold(1u64, |acc, d| {
            let d: u64 = d.try_into().ok()?;
            acc.checked_mul(d)
        })
        .unwrap_or(u64::MAX);
    let choices: Vec<u64> =
        if count <= CANDIDATE_LIMIT { diag[..r].iter().map(|d| d.try_into().unwrap()).collect() } else { vec![1; r] };
    let mut shift = vec![0u64; r];
    let mut best: Option<Vec<BigRational>> = None;
    loop {
        let mut psi = vec![BigRational::zero(); b.cols];
        for i in 0..r {
            psi[i] = BigRational::new(&us[i] + &two * BigInt::from(shift[i]), diag[i].clone());
        }
        let phi: Vec<BigRational> = (0..b.cols)
            .map(|j| {
                let x: BigRational =
                    (0..b.cols).map(|t| BigRational::from_integer(snf.v[(j, t)].clone()) * &psi[t]).sum();
                mod2(&x)
            })
            .collect();
        if best.as_ref().is_none_or(|cur| phi < *cur) {
            best = Some(phi);
        }
        // odometer over shift[i] in 0..choices[i]
        let mut i = 0;
        while i < r {
            shift[i] += 1;
            if shift[i] < choices[i] {
                break;
            }
            shift[i] = 0;
            i += 1;
        }
        if i == r {
            break;
        }
    }
    Ok(Mod2Solution::Solution(best.expect("at least one candidate")))
}

/// Representative of `x` modulo 2 in `[0, 2)`.
pub fn mod2(x: &BigRational) -> BigRational {
    let two = BigRational::from_integer(BigInt::from(2));
    x - &two * (x / &two).floor()
}

/// Exact check that `B φ - s ∈ 2 Z^m`.
pub fn is_mod2_solution(b: &IntMatrix, s: &[i64], phi: &[BigRational]) -> bool {
    if phi.len() != b.cols || s.len() != b.rows {
        return false;
    }
    (0..b.rows).all(|i| {
        let lhs: BigRational = b.row(i).iter().zip(phi).map(|(a, p)| BigRational::from_integer(a.clone()) * p).sum();
        let diff = lhs - BigRational::from_integer(BigInt::from(s[i]));
        diff.is_integer() && diff.to_integer().is_even()
    })
}

/// Exact check that `uᵀ B = 0` and `uᵀ s` is odd.
pub fn is_obstruction(b: &IntMatrix, s: &[i64], u: &[BigInt]) -> bool {
    if u.len() != b.rows || s.len() != b.rows {
        return false;
    }
    let ut_b_zero = (0..b.cols).all(|j| (0..b.rows).map(|i| &u[i] * &b[(i, j)]).sum::<BigInt>().is_zero());
    let ut_s: BigInt = u.iter().zip(s).map(|(a, &x)| a * BigInt::from(x)).sum();
    ut_b_zero && ut_s.is_odd()
}
