//! Dense Gauss–Jordan elimination over a [`Field`].
//!
//! Sizes here are small (at most a few hundred unknowns), so a dense reduced
//! row echelon form is the simplest exact tool.

use crate::scalar::Field;

/// Reduced row echelon form of `m` in place, restricted to pivots in the
/// first `pivot_cols` columns. Returns the pivot columns in row order.
pub fn rref_in_place<F: Field>(m: &mut [Vec<F>], pivot_cols: usize) -> Vec<usize> {
    let rows = m.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..pivot_cols {
        if r == rows {
            break;
        }
        // largest candidate; ties keep the first row so the result is
        // deterministic
        let mut best: Option<(usize, f64)> = None;
        for (i, row) in m.iter().enumerate().skip(r) {
            if row[col].is_negligible() {
                continue;
            }
            let w = row[col].pivot_weight();
            if best.is_none_or(|(_, bw)| w > bw) {
                best = Some((i, w));
            }
        }
        let Some((p, _)) = best else { continue };
        m.swap(r, p);
        let inv = m[r][col].checked_inv().expect("pivot is nonzero");
        for x in m[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x = x.clone() - f.clone() * y.clone();
                }
            }
            row[col] = F::zero();
        }
        pivots.push(col);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(m: &[Vec<F>]) -> usize {
    let Some(cols) = m.first().map(Vec::len) else { return 0 };
    let mut work = m.to_vec();
    rref_in_place(&mut work, cols).len()
}

/// Basis of `{x : A x = 0}`, one vector per free column.
pub fn kernel<F: Field>(a: &[Vec<F>], ncols: usize) -> Vec<Vec<F>> {
    let mut work = a.to_vec();
    let pivots = rref_in_place(&mut work, ncols);
    kernel_from_rref(&work, &pivots, ncols)
}

fn kernel_from_rref<F: Field>(m: &[Vec<F>], pivots: &[usize], ncols: usize) -> Vec<Vec<F>> {
    let mut out = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![F::zero(); ncols];
        v[free] = F::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -m[r][free].clone();
        }
        out.push(v);
    }
    out
}

/// Solution set of `A x = b` for several right-hand sides at once.
#[derive(Clone, Debug)]
pub struct LinearSolution<F> {
    /// One particular solution per right-hand side (free variables zero), or
    /// `None` where that system is inconsistent.
    pub particular: Vec<Option<Vec<F>>>,
    pub kernel: Vec<Vec<F>>,
    pub pivots: Vec<usize>,
}

/// Solve `A x = b_j` for every column `b_j`. `a` is `rows × ncols`; each
/// entry of `rhs` has length `rows`.
pub fn solve_many<F: Field>(a: &[Vec<F>], ncols: usize, rhs: &[Vec<F>]) -> LinearSolution<F> {
    let k = rhs.len();
    let mut work: Vec<Vec<F>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend(rhs.iter().map(|b| b[i].clone()));
            r
        })
        .collect();
    let pivots = rref_in_place(&mut work, ncols);
    let rank = pivots.len();
    let particular = (0..k)
        .map(|j| {
            let inconsistent = work[rank..].iter().any(|row| !row[ncols + j].is_negligible());
            if inconsistent {
                return None;
            }
            let mut x = vec![F::zero(); ncols];
            for (r, &pc) in pivots.iter().enumerate() {
                x[pc] = work[r][ncols + j].clone();
            }
            Some(x)
        })
        .collect();
    let kernel = kernel_from_rref(&work, &pivots, ncols);
    LinearSolution { particular, kernel, pivots }
}

/// Coefficients `c` with `Σ c_i basis_i = v`, if `v` lies in the span.
pub fn span_coefficients<F: Field>(basis: &[Vec<F>], v: &[F]) -> Option<Vec<F>> {
    let n = v.len();
    if basis.is_empty() {
        return v.iter().all(F::is_negligible).then(Vec::new);
    }
    // columns are the basis vectors
    let a: Vec<Vec<F>> = (0..n).map(|i| basis.iter().map(|b| b[i].clone()).collect()).collect();
    let sol = solve_many(&a, basis.len(), &[v.to_vec()]);
    sol.particular.into_iter().next().flatten()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::GaussianRational as G;

    fn g(n: i64) -> G {
        G::from_ints(n, 0)
    }

    #[test]
    fn solves_with_kernel() {
        // x + y = 2, 2x + 2y = 4
        let a = vec![vec![g(1), g(1)], vec![g(2), g(2)]];
        let s = solve_many(&a, 2, &[vec![g(2), g(4)], vec![g(1), g(3)]]);
        assert_eq!(s.kernel.len(), 1);
        let x = s.particular[0].clone().unwrap();
        assert_eq!(x[0].clone() + x[1].clone(), g(2));
        assert!(s.particular[1].is_none());
    }

    #[test]
    fn rank_and_span() {
        let b = vec![vec![g(1), g(0), g(1)], vec![g(0), g(1), g(1)]];
        assert_eq!(rank(&b), 2);
        assert_eq!(span_coefficients(&b, &[g(2), g(3), g(5)]), Some(vec![g(2), g(3)]));
        assert_eq!(span_coefficients(&b, &[g(2), g(3), g(4)]), None);
    }

    #[test]
    fn floats_pick_large_pivots() {
        let a: Vec<Vec<f64>> = vec![vec![1e-20, 1.0], vec![1.0, 1.0]];
        let s = solve_many(&a, 2, &[vec![1.0, 2.0]]);
        let x = s.particular[0].clone().unwrap();
        assert!((x[0] - 1.0).abs() < 1e-12 && (x[1] - 1.0).abs() < 1e-12);
    }
}
