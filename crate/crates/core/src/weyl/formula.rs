//! Infix notation for operators with symbolic parameters.
//!
//! Atoms: `q1 q2 p1 p2 Id`, the angular momentum `C = q1 p2 - q2 p1`, the
//! dilation `D = q1 p1 + q2 p2`, parameters `g1, g2, …` and `i`. Factor order
//! is kept, so `p1 q1` and `q1 p1` differ by `i`.

use num_traits::One;

use crate::error::ParseError;
use crate::expr::parse_with;
use crate::gaussian::GaussianRational;
use crate::poly::{Poly, Var};

use super::{NormalMonomial, ParamOperator, WeylOperator};

fn atom(name: &str) -> Option<ParamOperator> {
    let one = <Poly<GaussianRational> as One>::one();
    Some(match name {
        "q1" => WeylOperator::q(1),
        "q2" => WeylOperator::q(2),
        "p1" => WeylOperator::p(1),
        "p2" => WeylOperator::p(2),
        "Id" => WeylOperator::identity(),
        "C" => WeylOperator::from_terms([
            (NormalMonomial::new(1, 0, 0, 1), one.clone()),
            (NormalMonomial::new(0, 1, 1, 0), -one),
        ]),
        "D" => WeylOperator::from_terms([
            (NormalMonomial::new(1, 0, 1, 0), one.clone()),
            (NormalMonomial::new(0, 1, 0, 1), one),
        ]),
        _ => {
            let v = Var::from_name(name)?;
            v.gamma_index()?;
            WeylOperator::scalar(Poly::var(v))
        }
    })
}

/// Parse an operator such as `p2^2 + g1 q2 p2 + g2 ((q1^2 + q2^2) p2^2 - C^2)`.
pub fn parse_formula(src: &str) -> Result<ParamOperator, ParseError> {
    parse_with(src, atom, |g| WeylOperator::scalar(Poly::constant(g)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_matters() {
        let a = parse_formula("p1 q1").unwrap();
        let b = parse_formula("q1 p1 - i").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn angular_momentum_squared_has_cross_term() {
        let c2 = parse_formula("C^2").unwrap();
        let m = NormalMonomial::new(1, 1, 1, 1);
        assert_eq!(c2.coeff(&m), Poly::constant(GaussianRational::from_ints(-2, 0)));
    }

    #[test]
    fn unknown_atoms_fail() {
        assert!(parse_formula("x1").is_err());
        assert!(parse_formula("n q1").is_err());
    }
}
