//! Exact integer matrix algebra: Smith and Hermite normal forms, integer
//! row-span membership and quotient structure of `Z^n / rowspan(G)`.
//!
//! Subgroups of `Z^n` are handled as generator matrices whose rows span the
//! subgroup. All arithmetic is arbitrary precision.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::Value;

use crate::gf2::{self, BitVector};

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries((0..self.rows).map(|i| {
                self.row(i)
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
            }))
            .finish()
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<Vec<BigInt>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "row length mismatch");
            data.extend(r);
        }
        IntMatrix {
            rows: n,
            cols,
            data,
        }
    }

    /// Convenience constructor; `cols` is taken from the first row (or 0).
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        IntMatrix::from_rows(
            cols,
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn diagonal(entries: &[i64]) -> Self {
        let n = entries.len();
        let mut m = IntMatrix::zeros(n, n);
        for (i, &e) in entries.iter().enumerate() {
            m.set(i, i, BigInt::from(e));
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn push_row(&mut self, row: Vec<BigInt>) {
        assert_eq!(row.len(), self.cols, "row length mismatch");
        self.data.extend(row);
        self.rows += 1;
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn left_mul_vec(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(x.len(), self.rows);
        (0..self.cols)
            .map(|j| (0..self.rows).fold(BigInt::zero(), |acc, i| acc + &x[i] * self.get(i, j)))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                    Some(p) => {
                        a.swap_rows(k, p);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                    a.set(i, j, v);
                }
            }
            prev = a.get(k, k).clone();
        }
        sign * a.get(n - 1, n - 1)
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        hermite_normal_form(self).rows
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            (0..self.rows)
                .map(|i| {
                    Value::Array(
                        self.row(i)
                            .iter()
                            .map(|x| match x.to_i64() {
                                Some(v) => Value::from(v),
                                None => Value::String(x.to_string()),
                            })
                            .collect(),
                    )
                })
                .collect(),
        )
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = self.get(dst, j) + k * self.get(src, j);
            self.set(dst, j, v);
        }
    }

    /// col[dst] += k * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = self.get(i, dst) + k * self.get(i, src);
            self.set(i, dst, v);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }
}

/// `U · M · V = D` with `U`, `V` unimodular and `D` in Smith form.
#[derive(Debug, Clone)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// Nonzero diagonal entries, each dividing the next.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d.get(i, i).clone())
            .take_while(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows, m.cols);
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            let pivot = (t..rows)
                .flat_map(|i| (t..cols).map(move |j| (i, j)))
                .filter(|&(i, j)| !d.get(i, j).is_zero())
                .min_by(|&(a, b), &(c, e)| d.get(a, b).abs().cmp(&d.get(c, e).abs()));
            let Some((pi, pj)) = pivot else {
                return finish_signs(SmithForm { u, d, v });
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                let q = -d.get(i, t).div_floor(d.get(t, t));
                d.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                clean &= d.get(i, t).is_zero();
            }
            for j in t + 1..cols {
                let q = -d.get(t, j).div_floor(d.get(t, t));
                d.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                clean &= d.get(t, j).is_zero();
            }
            if !clean {
                continue;
            }
            // Divisibility chain: fold in a row holding a non-multiple.
            let p = d.get(t, t).clone();
            let offender =
                (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !d.get(i, j).is_multiple_of(&p)));
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
    }
    finish_signs(SmithForm { u, d, v })
}

fn finish_signs(mut snf: SmithForm) -> SmithForm {
    for i in 0..snf.d.rows.min(snf.d.cols) {
        if snf.d.get(i, i).is_negative() {
            snf.d.negate_row(i);
            snf.u.negate_row(i);
        }
    }
    snf
}

/// Row-style Hermite normal form with zero rows dropped: upper echelon,
/// positive pivots, entries above each pivot reduced into `[0, pivot)`.
pub fn hermite_normal_form(m: &IntMatrix) -> IntMatrix {
    let mut a = m.clone();
    let mut row = 0;
    for col in 0..a.cols {
        if row == a.rows {
            break;
        }
        loop {
            let pivot = (row..a.rows)
                .filter(|&i| !a.get(i, col).is_zero())
                .min_by(|&x, &y| a.get(x, col).abs().cmp(&a.get(y, col).abs()));
            let Some(p) = pivot else { break };
            a.swap_rows(row, p);
            let mut done = true;
            for i in row + 1..a.rows {
                let q = -a.get(i, col).div_floor(a.get(row, col));
                a.add_row_multiple(i, row, &q);
                done &= a.get(i, col).is_zero();
            }
            if done {
                break;
            }
        }
        if a.get(row, col).is_zero() {
            continue;
        }
        if a.get(row, col).is_negative() {
            a.negate_row(row);
        }
        for k in 0..row {
            let q = -a.get(k, col).div_floor(a.get(row, col));
            a.add_row_multiple(k, row, &q);
        }
        row += 1;
    }
    IntMatrix {
        rows: row,
        cols: a.cols,
        data: a.data[..row * a.cols].to_vec(),
    }
}

/// Invariant-factor decomposition of `Z^n / rowspan(generators)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientStructure {
    pub free_rank: usize,
    /// Orders of the cyclic torsion factors, each at least 2 and dividing the next.
    pub torsion_orders: Vec<BigInt>,
}

impl QuotientStructure {
    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion_orders.is_empty()
    }
}

pub fn quotient_structure(ambient_rank: usize, generators: &IntMatrix) -> QuotientStructure {
    assert_eq!(generators.cols, ambient_rank, "generator width mismatch");
    let factors = smith_normal_form(generators).invariant_factors();
    QuotientStructure {
        free_rank: ambient_rank - factors.len(),
        torsion_orders: factors.into_iter().filter(|x| !x.is_one()).collect(),
    }
}

/// Integer coefficients `c` with `c · generators = x`, if any exist.
pub fn membership(generators: &IntMatrix, x: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(x.len(), generators.cols, "dimension mismatch");
    // G = U^-1 D V^-1, so x = c G  <=>  x V = (c U^-1) D.
    let snf = smith_normal_form(generators);
    let y = snf.v.left_mul_vec(x);
    let factors = snf.invariant_factors();
    let mut c_prime = vec![BigInt::zero(); generators.rows];
    for (j, yj) in y.iter().enumerate() {
        match factors.get(j) {
            Some(dj) => {
                if !yj.is_multiple_of(dj) {
                    return None;
                }
                c_prime[j] = yj / dj;
            }
            None => {
                if !yj.is_zero() {
                    return None;
                }
            }
        }
    }
    let c = snf.u.left_mul_vec(&c_prime);
    debug_assert_eq!(generators.left_mul_vec(&c), x);
    Some(c)
}

/// Basis (as rows) of the integer left kernel `{c : c · M = 0}`.
pub fn left_kernel(m: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(m);
    let r = snf.rank();
    IntMatrix::from_rows(m.rows, (r..m.rows).map(|i| snf.u.row(i).to_vec()).collect())
}

/// Rank of `m` with entries reduced modulo 2.
pub fn mod2_rank(m: &IntMatrix) -> usize {
    let two = BigInt::from(2);
    let rows: Vec<BitVector> = (0..m.rows)
        .map(|i| {
            let bits: Vec<bool> = m.row(i).iter().map(|x| !x.is_multiple_of(&two)).collect();
            BitVector::from_bits(&bits)
        })
        .collect();
    gf2::rank(&rows)
}
