//! Small exact linear algebra over Q(√5): just enough Gaussian elimination
//! for kernel computation and 2×2/4×4 solves.

use crate::algebra::GoldenNum;

/// Reduced row echelon form in place; returns the pivot column of each row.
pub(crate) fn rref(mat: &mut Vec<Vec<GoldenNum>>) -> Vec<usize> {
    let rows = mat.len();
    if rows == 0 {
        return vec![];
    }
    let cols = mat[0].len();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..rows).find(|&r| !mat[r][col].is_zero()) else {
            continue;
        };
        mat.swap(row, p);
        let inv = mat[row][col]
            .checked_recip()
            .expect("pivot is nonzero by construction");
        for c in col..cols {
            mat[row][c] = &mat[row][c] * &inv;
        }
        for r in 0..rows {
            if r != row && !mat[r][col].is_zero() {
                let factor = mat[r][col].clone();
                for c in col..cols {
                    let delta = &factor * &mat[row][c];
                    mat[r][c] = &mat[r][c] - &delta;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == rows {
            break;
        }
    }
    pivots
}

/// Kernel basis of the matrix (list of vectors spanning the null space).
pub(crate) fn kernel(mat: &[Vec<GoldenNum>]) -> Vec<Vec<GoldenNum>> {
    if mat.is_empty() {
        return vec![];
    }
    let cols = mat[0].len();
    let mut work: Vec<Vec<GoldenNum>> = mat.to_vec();
    let pivots = rref(&mut work);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::new();
    for &f in &free {
        let mut v = vec![GoldenNum::zero(); cols];
        v[f] = GoldenNum::one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = -&work[r][f];
        }
        basis.push(v);
    }
    basis
}

/// Solves a square system A x = b exactly; `None` when A is singular.
pub(crate) fn solve(a: &[Vec<GoldenNum>], b: &[GoldenNum]) -> Option<Vec<GoldenNum>> {
    let n = a.len();
    let mut aug: Vec<Vec<GoldenNum>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots.iter().any(|&p| p >= n) {
        return None;
    }
    let mut x = vec![GoldenNum::zero(); n];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = aug[r][n].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn num(v: i64) -> GoldenNum {
        GoldenNum::from_int(v)
    }

    #[test]
    fn solve_2x2() {
        // x + y = 3, x − y = 1 → (2, 1)
        let a = vec![vec![num(1), num(1)], vec![num(1), num(-1)]];
        let b = vec![num(3), num(1)];
        let x = solve(&a, &b).unwrap();
        assert_eq!(x, vec![num(2), num(1)]);
    }

    #[test]
    fn kernel_of_rank_one() {
        // (1, τ) spans the kernel of [[τ, −τ²... ]] — use [[1, −1], [2, −2]] → kernel (1,1)
        let a = vec![vec![num(1), num(-1)], vec![num(2), num(-2)]];
        let k = kernel(&a);
        assert_eq!(k.len(), 1);
        assert_eq!(k[0][0], k[0][1]);
    }

    #[test]
    fn golden_pivots() {
        // τ x = 1 + τ → x = (1+τ)/τ = τ
        let a = vec![vec![GoldenNum::tau()]];
        let b = vec![GoldenNum::one() + GoldenNum::tau()];
        let x = solve(&a, &b).unwrap();
        assert_eq!(x[0], GoldenNum::tau());
    }
}
