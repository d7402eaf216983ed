//! The differential realization `p_j = -i ∂/∂q_j` acting on polynomials in
//! `q1, q2`. Used as an independent check of the normal-ordered product and as
//! the basis of the graded oracle.

use std::collections::BTreeMap;

use crate::scalar::ImaginaryUnit;

use super::WeylOperator;

/// A polynomial in `q1, q2`: `(x, y) ↦ coefficient of q1^x q2^y`.
pub type QPolynomial<C> = BTreeMap<(u32, u32), C>;

fn falling(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, j| acc.checked_mul((n - j) as i64).expect("falling factorial overflow"))
}

/// `op f` for a polynomial `f`.
pub fn apply_to_polynomial<C: ImaginaryUnit>(op: &WeylOperator<C>, f: &QPolynomial<C>) -> QPolynomial<C> {
    let mut out: QPolynomial<C> = BTreeMap::new();
    for (m, c) in op.terms() {
        for (&(x, y), fc) in f {
            if m.c > x || m.d > y {
                continue;
            }
            let n = falling(x, m.c) * falling(y, m.d);
            // (-i)^(c+d) = i^(3(c+d))
            let v = (c.clone() * fc.clone()).times_int_ipow(n, (3 * (m.c + m.d)) % 4);
            let key = (x - m.c + m.a, y - m.d + m.b);
            let slot = out.entry(key).or_insert_with(C::zero);
            *slot += v;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::GaussianRational as G;
    use num_traits::One;

    #[test]
    fn momentum_differentiates() {
        let f: QPolynomial<G> = [((3, 1), G::one())].into();
        let out = apply_to_polynomial(&WeylOperator::p(1), &f);
        // -i * 3 q1^2 q2
        assert_eq!(out, [((2, 1), G::from_ints(0, -3))].into());
    }

    #[test]
    fn dilation_scales_by_degree() {
        let d = WeylOperator::<G>::q(1) * WeylOperator::p(1) + WeylOperator::q(2) * WeylOperator::p(2);
        let f: QPolynomial<G> = [((2, 3), G::one())].into();
        assert_eq!(apply_to_polynomial(&d, &f), [((2, 3), G::from_ints(0, -5))].into());
    }
}
