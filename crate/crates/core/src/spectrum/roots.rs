//! Roots of univariate complex polynomials via companion-matrix eigenvalues
//! followed by one Newton step.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// A root and the size of the Newton correction applied to it.
#[derive(Clone, Copy, Debug)]
pub struct PolishedRoot {
    pub value: Complex64,
    pub newton_step: f64,
}

/// `Σ c_j x^j` at `x`, with its derivative.
pub fn horner(coeffs: &[Complex64], x: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

/// All roots of `Σ c_j x^j` (ascending coefficients, last one nonzero).
/// `None` if the eigenvalue iteration fails.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Option<Vec<PolishedRoot>> {
    let d = coeffs.len().checked_sub(1)?;
    if d == 0 {
        return Some(Vec::new());
    }
    let lead = coeffs[d];
    if lead == Complex64::new(0.0, 0.0) {
        return None;
    }
    let raw: Vec<Complex64> = if d == 1 {
        vec![-coeffs[0] / lead]
    } else {
        // companion matrix: subdiagonal ones, last column −c_j/c_d
        let m = DMatrix::from_fn(d, d, |i, j| {
            if j == d - 1 {
                -coeffs[i] / lead
            } else if i == j + 1 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let ev = m.schur().eigenvalues()?;
        ev.iter().copied().collect()
    };
    let mut out = Vec::with_capacity(d);
    for x in raw {
        if !x.re.is_finite() || !x.im.is_finite() {
            return None;
        }
        let (p, dp) = horner(coeffs, x);
        let step = if dp.norm() > 0.0 { p / dp } else { Complex64::new(0.0, 0.0) };
        let step = if step.re.is_finite() && step.im.is_finite() { step } else { Complex64::new(0.0, 0.0) };
        out.push(PolishedRoot { value: x - step, newton_step: step.norm() });
    }
    Some(out)
}
