//! Exact linear solves by fraction-free (Bareiss) elimination.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::scalar::Scalar;

/// Solves `A X = B` for square nonsingular `A`; `b` holds the right-hand
/// sides as rows of the augmented block (so `b[i]` is row `i` of `B`).
/// Returns `None` when `A` is singular.
pub fn solve(a: &[Vec<Scalar>], b: &[Vec<Scalar>]) -> Option<Vec<Vec<Scalar>>> {
    let n = a.len();
    let k = b.first().map_or(0, |r| r.len());
    if n == 0 {
        return Some(Vec::new());
    }
    // integer rows: scale each augmented row by the lcm of its denominators
    let m: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let row: Vec<&Scalar> = a[i].iter().chain(b[i].iter()).collect();
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(&x.denom()));
            row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
        })
        .collect();
    let cols = n + k;
    // Hadamard: every minor is at most the product of the row norms; the
    // machine-word path is only worth trying when that bound is modest
    let log_bound: u64 = m.iter().map(|row| row.iter().map(|x| x.bits()).max().unwrap_or(0) + (cols as f64).log2().ceil() as u64).sum();
    let small: Option<Vec<Vec<i128>>> = if log_bound < 2 * 126 {
        m.iter().map(|row| row.iter().map(|x| x.to_i128()).collect()).collect()
    } else {
        None
    };
    if let Some(small) = small {
        match gauss_jordan_i128(small, n, cols) {
            Ok(None) => return None,
            Ok(Some((m, det))) => {
                let x = (0..n).map(|i| (0..k).map(|col| Scalar::from_i128(m[i][n + col], det)).collect()).collect();
                return Some(x);
            }
            Err(Overflow) => {}
        }
    }
    let (m, det) = gauss_jordan_big(m, n, cols)?;
    let x = (0..n)
        .map(|i| (0..k).map(|col| Scalar::new(m[i][n + col].clone(), det.clone())).collect())
        .collect();
    Some(x)
}

struct Overflow;

// Fraction-free Gauss-Jordan: every pivot clears its whole column, so at the
// end the right block of each row is `det·A⁻¹B`, with `det` the last pivot.
// All intermediate entries are minors of the input, which bounds their size.
fn gauss_jordan_i128(mut m: Vec<Vec<i128>>, n: usize, cols: usize) -> Result<Option<(Vec<Vec<i128>>, i128)>, Overflow> {
    let mut prev: i128 = 1;
    for c in 0..n {
        let Some(pivot) = (c..n).find(|&r| m[r][c] != 0) else { return Ok(None) };
        m.swap(pivot, c);
        let prow = std::mem::take(&mut m[c]);
        let p = prow[c];
        for (r, row) in m.iter_mut().enumerate() {
            if r == c {
                continue;
            }
            let factor = std::mem::take(&mut row[c]);
            for j in c + 1..cols {
                let v = row[j]
                    .checked_mul(p)
                    .and_then(|v| factor.checked_mul(prow[j]).and_then(|w| v.checked_sub(w)))
                    .ok_or(Overflow)?;
                row[j] = v / prev;
            }
        }
        prev = p;
        m[c] = prow;
    }
    Ok(Some((m, prev)))
}

fn gauss_jordan_big(mut m: Vec<Vec<BigInt>>, n: usize, cols: usize) -> Option<(Vec<Vec<BigInt>>, BigInt)> {
    let mut prev = BigInt::one();
    for c in 0..n {
        let pivot = (c..n).find(|&r| !m[r][c].is_zero())?;
        m.swap(pivot, c);
        let prow = std::mem::take(&mut m[c]);
        for (r, row) in m.iter_mut().enumerate() {
            if r == c {
                continue;
            }
            let factor = std::mem::take(&mut row[c]);
            for j in c + 1..cols {
                let mut v = &row[j] * &prow[c];
                if !factor.is_zero() && !prow[j].is_zero() {
                    v -= &factor * &prow[j];
                }
                row[j] = if prev.is_one() { v } else { v / &prev };
            }
        }
        prev = prow[c].clone();
        m[c] = prow;
    }
    Some((m, prev))
}

/// Exact inverse, or `None` if singular.
pub fn inverse(a: &[Vec<Scalar>]) -> Option<Vec<Vec<Scalar>>> {
    let n = a.len();
    let id: Vec<Vec<Scalar>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }).collect())
        .collect();
    solve(a, &id)
}

/// Entries of `A⁻¹` on the sparsity pattern of the Cholesky factor of a
/// symmetric positive definite `A`, computed by sparse `LDLᵀ` in
/// minimum-degree order followed by the Takahashi recurrence. Every
/// diagonal entry and every entry at a nonzero of `A` is available.
pub struct PatternInverse {
    entries: HashMap<(usize, usize), Scalar>,
}

impl PatternInverse {
    /// `a[i]` lists the nonzeros of row `i` (both triangles, diagonal included).
    pub fn compute(a: &[HashMap<usize, Scalar>]) -> Option<PatternInverse> {
        let n = a.len();
        let mut work: Vec<HashMap<usize, Scalar>> = a.to_vec();
        let mut alive = vec![true; n];
        // (vertex, pivot, later neighbours with their multipliers)
        let mut steps: Vec<(usize, Scalar, Vec<(usize, Scalar)>)> = Vec::with_capacity(n);
        for _ in 0..n {
            let v = (0..n).filter(|&i| alive[i]).min_by_key(|&i| (work[i].len(), i))?;
            let row = std::mem::take(&mut work[v]);
            alive[v] = false;
            let pivot = row.get(&v).cloned().filter(|x| !x.is_zero())?;
            let nbrs: Vec<(usize, Scalar)> = row.into_iter().filter(|(i, _)| *i != v).collect();
            for (i, aiv) in &nbrs {
                work[*i].remove(&v);
                let scaled = aiv / &pivot;
                for (j, ajv) in &nbrs {
                    let delta = &scaled * ajv;
                    let e = work[*i].entry(*j).or_insert_with(Scalar::zero);
                    *e -= delta;
                }
            }
            let mult = nbrs.into_iter().map(|(i, aiv)| (i, aiv / &pivot)).collect();
            steps.push((v, pivot, mult));
        }
        let mut entries: HashMap<(usize, usize), Scalar> = HashMap::new();
        let key = |x: usize, y: usize| if x <= y { (x, y) } else { (y, x) };
        for (v, pivot, mult) in steps.iter().rev() {
            let mut column = Vec::with_capacity(mult.len());
            for (i, _) in mult {
                let mut z = Scalar::zero();
                for (k, lkv) in mult {
                    z -= &entries[&key(*i, *k)] * lkv;
                }
                column.push((*i, z));
            }
            let mut diag = pivot.recip();
            for ((_, lkv), (_, zkv)) in mult.iter().zip(&column) {
                diag -= lkv * zkv;
            }
            for (i, z) in column {
                entries.insert(key(i, *v), z);
            }
            entries.insert((*v, *v), diag);
        }
        Some(PatternInverse { entries })
    }

    /// `(A⁻¹)_{xy}`, if `(x, y)` lies on the filled pattern.
    pub fn get(&self, x: usize, y: usize) -> Option<&Scalar> {
        self.entries.get(&if x <= y { (x, y) } else { (y, x) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    #[test]
    fn solves_small_system() {
        let a = vec![vec![int(2), int(1)], vec![int(1), int(3)]];
        let b = vec![vec![int(3)], vec![int(5)]];
        let x = solve(&a, &b).unwrap();
        assert_eq!(x, vec![vec![ratio(4, 5)], vec![ratio(7, 5)]]);
    }

    #[test]
    fn pivots_past_zero() {
        let a = vec![vec![int(0), int(1)], vec![int(1), int(0)]];
        let inv = inverse(&a).unwrap();
        assert_eq!(inv, a);
    }

    #[test]
    fn singular_is_none() {
        let a = vec![vec![int(1), int(2)], vec![int(2), int(4)]];
        assert!(inverse(&a).is_none());
    }

    #[test]
    fn rational_entries() {
        let a = vec![
            vec![ratio(1, 2), ratio(1, 3), int(0)],
            vec![ratio(1, 3), int(1), ratio(-1, 7)],
            vec![int(0), ratio(-1, 7), ratio(5, 4)],
        ];
        let inv = inverse(&a).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let s: Scalar = (0..3).map(|k| &a[i][k] * &inv[k][j]).sum();
                assert_eq!(s, if i == j { int(1) } else { int(0) });
            }
        }
    }

    #[test]
    fn pattern_inverse_matches_dense() {
        // path Laplacian plus a chord, grounded: tridiagonal with one extra pair
        let dense = vec![
            vec![int(3), int(-1), int(0), int(-1)],
            vec![int(-1), ratio(5, 2), ratio(-1, 2), int(0)],
            vec![int(0), ratio(-1, 2), int(2), int(-1)],
            vec![int(-1), int(0), int(-1), int(4)],
        ];
        let rows: Vec<HashMap<usize, Scalar>> = dense
            .iter()
            .map(|r| r.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(j, x)| (j, x.clone())).collect())
            .collect();
        let inv = inverse(&dense).unwrap();
        let pattern = PatternInverse::compute(&rows).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                if let Some(z) = pattern.get(i, j) {
                    assert_eq!(z, &inv[i][j]);
                }
                if !dense[i][j].is_zero() {
                    assert!(pattern.get(i, j).is_some());
                }
            }
        }
    }
}
