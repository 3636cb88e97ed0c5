//! Exact elimination kernels over big rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::matrix::Matrix;
use super::scalar::Rational;

/// Rank by fraction-free (Bareiss) elimination on an integer scaling of
/// each row. Every intermediate division is exact.
pub(crate) fn bareiss_rank(m: &Matrix<Rational>) -> usize {
    let (rows, cols) = m.shape();
    let mut a: Vec<Vec<BigInt>> = (0..rows)
        .map(|r| {
            let row = m.row(r);
            let lcm = row
                .iter()
                .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter()
                .map(|x| x.numer() * (&lcm / x.denom()))
                .collect()
        })
        .collect();

    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let (head, tail) = a.split_at_mut(rank + 1);
        let pivot_row = &head[rank];
        let pivot = pivot_row[col].clone();
        for row in tail.iter_mut() {
            let factor = row[col].clone();
            for j in col + 1..cols {
                let v = &row[j] * &pivot - &factor * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[col] = BigInt::zero();
        }
        prev = pivot;
        rank += 1;
    }
    rank
}

/// Reduced row echelon form and pivot columns.
pub(crate) struct Rref {
    pub(crate) m: Matrix<Rational>,
    pub(crate) pivots: Vec<usize>,
}

pub(crate) fn rref(src: &Matrix<Rational>) -> Rref {
    let mut m = src.clone();
    let (rows, cols) = m.shape();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[(i, c)].is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                let tmp = m[(r, j)].clone();
                m[(r, j)] = m[(p, j)].clone();
                m[(p, j)] = tmp;
            }
        }
        let inv = m[(r, c)].recip();
        for j in c..cols {
            m[(r, j)] = &m[(r, j)] * &inv;
        }
        for i in 0..rows {
            if i == r || m[(i, c)].is_zero() {
                continue;
            }
            let factor = m[(i, c)].clone();
            for j in c..cols {
                let v = &m[(i, j)] - &factor * &m[(r, j)];
                m[(i, j)] = v;
            }
        }
        pivots.push(c);
        r += 1;
    }
    Rref { m, pivots }
}

pub(crate) fn kernel_basis(m: &Matrix<Rational>) -> Matrix<Rational> {
    let cols = m.cols();
    let Rref { m: r, pivots } = rref(m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Matrix::zeros(cols, free.len());
    for (k, &f) in free.iter().enumerate() {
        basis[(f, k)] = Rational::one();
        for (row, &pc) in pivots.iter().enumerate() {
            basis[(pc, k)] = -r[(row, f)].clone();
        }
    }
    // Column-reduce so equal kernels always yield identical bases.
    image_basis(&basis)
}

pub(crate) fn image_basis(m: &Matrix<Rational>) -> Matrix<Rational> {
    let Rref { m: r, pivots } = rref(&m.transpose());
    Matrix::from_fn(m.rows(), pivots.len(), |i, k| r[(k, i)].clone())
}

/// Solves the normal equations `aᵀa x = aᵀb`, which are always consistent.
/// Free variables are set to zero.
pub(crate) fn least_squares(a: &Matrix<Rational>, b: &[Rational]) -> Vec<Rational> {
    let at = a.transpose();
    let ata = &at * a;
    let atb = at.mul_vec(b).expect("least-squares shape");
    let aug = ata
        .hstack(&Matrix::column_vector(&atb))
        .expect("least-squares shape");
    let Rref { m: r, pivots } = rref(&aug);
    let n = a.cols();
    let mut x = vec![Rational::zero(); n];
    for (row, &pc) in pivots.iter().enumerate() {
        debug_assert!(pc < n, "normal equations are consistent");
        if pc < n {
            x[pc] = r[(row, n)].clone();
        }
    }
    x
}
