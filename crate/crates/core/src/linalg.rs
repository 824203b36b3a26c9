//! Small exact linear algebra helpers: integer matrix arithmetic, Smith normal
//! form with transform matrices, integer linear solving, and rational row
//! reduction.  All matrices are dense row-major `Vec<Vec<_>>`; sizes here are
//! bounded by the rank of the root system, so simplicity beats asymptotics.

use num::rational::Ratio;
use num::{One, Zero};

pub(crate) type Rat = Ratio<i64>;

pub(crate) fn identity_i64(n: usize) -> Vec<Vec<i64>> {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

pub(crate) fn mat_mul_i64(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    let m = b[0].len();
    let k = b.len();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..k).map(|t| a[i][t] * b[t][j]).sum())
                .collect()
        })
        .collect()
}

pub(crate) fn mat_vec_i64(a: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(c, x)| c * x).sum())
        .collect()
}

pub(crate) fn mat_vec_rat(a: &[Vec<i64>], v: &[Rat]) -> Vec<Rat> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .map(|(c, x)| Rat::from_integer(*c) * x)
                .fold(Rat::zero(), |s, t| s + t)
        })
        .collect()
}

/// Smith normal form of a square integer matrix: `u * a * v = d` with `u`, `v`
/// unimodular and `d` diagonal, successive diagonal entries dividing the next.
pub(crate) struct Snf {
    pub u: Vec<Vec<i64>>,
    pub v: Vec<Vec<i64>>,
    /// Diagonal entries of `d`, all non-negative.
    pub diag: Vec<i64>,
}

pub(crate) fn smith_normal_form(a: &[Vec<i64>]) -> Snf {
    let n = a.len();
    let mut m: Vec<Vec<i64>> = a.to_vec();
    let mut u = identity_i64(n);
    let mut v = identity_i64(n);

    for k in 0..n {
        loop {
            // Move a minimal-magnitude nonzero entry of the trailing block to (k, k).
            let mut pivot: Option<(usize, usize)> = None;
            for i in k..n {
                for j in k..n {
                    if m[i][j] != 0
                        && pivot.is_none_or(|(pi, pj)| m[i][j].abs() < m[pi][pj].abs())
                    {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else { break };
            if pi != k {
                m.swap(pi, k);
                u.swap(pi, k);
            }
            if pj != k {
                for row in m.iter_mut() {
                    row.swap(pj, k);
                }
                for row in v.iter_mut() {
                    row.swap(pj, k);
                }
            }
            let mut clean = true;
            for i in k + 1..n {
                let q = m[i][k].div_euclid(m[k][k]);
                if q != 0 {
                    for j in 0..n {
                        m[i][j] -= q * m[k][j];
                        u[i][j] -= q * u[k][j];
                    }
                }
                if m[i][k] != 0 {
                    clean = false;
                }
            }
            for j in k + 1..n {
                let q = m[k][j].div_euclid(m[k][k]);
                if q != 0 {
                    for i in 0..n {
                        m[i][j] -= q * m[i][k];
                        v[i][j] -= q * v[i][k];
                    }
                }
                if m[k][j] != 0 {
                    clean = false;
                }
            }
            if clean {
                // Enforce that the pivot divides the rest of the block.
                let mut fixed = true;
                'scan: for i in k + 1..n {
                    for j in k + 1..n {
                        if m[i][j] % m[k][k] != 0 {
                            for t in 0..n {
                                m[k][t] += m[i][t];
                                u[k][t] += u[i][t];
                            }
                            fixed = false;
                            break 'scan;
                        }
                    }
                }
                if fixed {
                    break;
                }
            }
        }
        if m[k][k] < 0 {
            for t in 0..n {
                m[k][t] = -m[k][t];
                u[k][t] = -u[k][t];
            }
        }
    }
    Snf {
        u,
        v,
        diag: (0..n).map(|i| m[i][i]).collect(),
    }
}

/// One integer solution of `a * x = c`, if any exists.
pub(crate) fn solve_integer(a: &[Vec<i64>], c: &[i64]) -> Option<Vec<i64>> {
    let n = a.len();
    let snf = smith_normal_form(a);
    let uc = mat_vec_i64(&snf.u, c);
    let mut y = vec![0i64; n];
    for i in 0..n {
        if snf.diag[i] == 0 {
            if uc[i] != 0 {
                return None;
            }
        } else {
            if uc[i] % snf.diag[i] != 0 {
                return None;
            }
            y[i] = uc[i] / snf.diag[i];
        }
    }
    Some(mat_vec_i64(&snf.v, &y))
}

/// In-place reduced row echelon form; returns the pivot column of each
/// surviving row.  Zero rows are dropped.
pub(crate) fn rref(m: &mut Vec<Vec<Rat>>) -> Vec<usize> {
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(pr) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, pr);
        let inv = Rat::one() / m[row][col];
        for j in col..cols {
            m[row][j] = m[row][j] * inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col];
                for j in col..cols {
                    let sub = f * m[row][j];
                    m[r][j] = m[r][j] - sub;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    m.truncate(row);
    pivots
}

/// Canonical (reduced row echelon) basis of the row space of `rows`.
pub(crate) fn rref_rows(rows: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let mut m = rows.to_vec();
    rref(&mut m);
    m
}

/// Solve `m x = rhs` over the rationals.  Returns a particular solution with
/// all free variables set to zero, plus a canonical basis of the kernel.
pub(crate) fn solve_affine(m: &[Vec<Rat>], rhs: &[Rat]) -> Option<(Vec<Rat>, Vec<Vec<Rat>>)> {
    let cols = m.first().map_or(0, Vec::len);
    let mut aug: Vec<Vec<Rat>> = m
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(*b);
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&cols) {
        return None; // pivot in the augmented column: inconsistent
    }
    let mut x = vec![Rat::zero(); cols];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = aug[r][cols];
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut kernel = Vec::new();
    for &f in &free {
        let mut k = vec![Rat::zero(); cols];
        k[f] = Rat::one();
        for (r, &p) in pivots.iter().enumerate() {
            k[p] = -aug[r][f];
        }
        kernel.push(k);
    }
    Some((x, rref_rows(&kernel)))
}

/// All permutations of `0..n`.
pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Does `v` lie in the span of `basis`?
pub(crate) fn in_span(basis: &[Vec<Rat>], v: &[Rat]) -> bool {
    if v.iter().all(Rat::is_zero) {
        return true;
    }
    let mut m = basis.to_vec();
    m.push(v.to_vec());
    let rank_with = rref(&mut m).len();
    rank_with == rref_rows(basis).len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rv(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| Rat::from_integer(x)).collect()
    }

    #[test]
    fn smith_normal_form_recovers_input() {
        let a = vec![vec![2, -1, 0], vec![-1, 2, -3], vec![0, -1, 2]];
        let snf = smith_normal_form(&a);
        let ua = mat_mul_i64(&snf.u, &a);
        let uav = mat_mul_i64(&ua, &snf.v);
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { snf.diag[i] } else { 0 };
                assert_eq!(uav[i][j], want);
            }
        }
        for w in snf.diag.windows(2) {
            if w[0] != 0 {
                assert_eq!(w[1] % w[0], 0);
            }
        }
    }

    #[test]
    fn integer_solver_finds_and_rejects() {
        // x + 2y = 5, 3x + 4y = 11 has the integer solution (1, 2).
        let a = vec![vec![1, 2], vec![3, 4]];
        let x = solve_integer(&a, &[5, 11]).unwrap();
        assert_eq!(mat_vec_i64(&a, &x), vec![5, 11]);
        // 2x = 1 has no integer solution.
        let b = vec![vec![2, 0], vec![0, 1]];
        assert!(solve_integer(&b, &[1, 0]).is_none());
    }

    #[test]
    fn affine_solver_particular_plus_kernel() {
        // x + y + z = 3 has a 2-dimensional solution space.
        let m = vec![rv(&[1, 1, 1])];
        let (x, kernel) = solve_affine(&m, &rv(&[3])).unwrap();
        assert_eq!(x, rv(&[3, 0, 0]));
        assert_eq!(kernel.len(), 2);
        for k in &kernel {
            let s = k.iter().fold(Rat::zero(), |a, b| a + b);
            assert!(s.is_zero());
        }
        assert!(solve_affine(&[rv(&[0, 0, 0])], &rv(&[1])).is_none());
    }

    #[test]
    fn span_membership() {
        let basis = rref_rows(&[rv(&[1, 1, 0]), rv(&[0, 1, 1])]);
        assert!(in_span(&basis, &rv(&[1, 2, 1])));
        assert!(!in_span(&basis, &rv(&[0, 0, 1])));
        assert!(in_span(&[], &rv(&[0, 0])));
    }
}
