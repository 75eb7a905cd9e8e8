//! Closed-form test functions with exact jets.

use alloc::vec;
use alloc::vec::Vec;

use crate::multidual::Scalar;
use crate::source::Analytic;

/// `coef * t^t_power * exp(rate t) * cos(freq . x + phase)`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TrigExpTerm {
    pub coef: f64,
    pub t_power: u32,
    pub rate: f64,
    pub freq: Vec<f64>,
    pub phase: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum TestFunction {
    Constant { value: f64, dim: usize },
    /// `t^power`.
    Monomial { power: u32, dim: usize },
    /// `e^t`.
    Exp { dim: usize },
    /// `e^t cos(x)` on `R x R`.
    ExpCos,
    /// `sum_i coef_i prod_c z_c^{e_ic}`.
    Polynomial { dim: usize, terms: Vec<(f64, Vec<u32>)> },
    TrigExp { dim: usize, terms: Vec<TrigExpTerm> },
    /// `exp(-1/(z_coord - center)^2) e^t`, flat to all orders at `z_coord = center`.
    FlatBump { center: f64, coord: usize, dim: usize },
    /// Components stacked into a vector value.
    Stack(Vec<TestFunction>),
}

impl TestFunction {
    pub fn constant(dim: usize, value: f64) -> Self {
        TestFunction::Constant { value, dim }
    }

    pub fn monomial(dim: usize, power: u32) -> Self {
        TestFunction::Monomial { power, dim }
    }

    /// `x^2 + y` on the plane.
    pub fn disk_sample() -> Self {
        TestFunction::Polynomial {
            dim: 2,
            terms: vec![(1.0, vec![2, 0]), (1.0, vec![0, 1])],
        }
    }

    /// `x^2 + y^2` on the plane.
    pub fn radial_square() -> Self {
        TestFunction::Polynomial {
            dim: 2,
            terms: vec![(1.0, vec![2, 0]), (1.0, vec![0, 2])],
        }
    }

    fn scalar_eval<S: Scalar>(&self, z: &[S]) -> Vec<S> {
        match self {
            TestFunction::Constant { value, .. } => vec![S::from_f64(*value)],
            TestFunction::Monomial { power, .. } => vec![z[0].powi(*power)],
            TestFunction::Exp { .. } => vec![z[0].exp()],
            TestFunction::ExpCos => vec![z[0].exp() * z[1].cos()],
            TestFunction::Polynomial { terms, .. } => {
                let v = terms.iter().fold(S::from_f64(0.0), |acc, (coef, exps)| {
                    let mono = exps
                        .iter()
                        .zip(z)
                        .filter(|(e, _)| **e > 0)
                        .fold(S::from_f64(*coef), |m, (e, v)| m * v.powi(*e));
                    acc + mono
                });
                vec![v]
            }
            TestFunction::TrigExp { terms, .. } => {
                let v = terms.iter().fold(S::from_f64(0.0), |acc, term| {
                    let arg = term
                        .freq
                        .iter()
                        .zip(&z[1..])
                        .fold(S::from_f64(term.phase), |a, (w, x)| a + x.scale(*w));
                    let t = &z[0];
                    let v = t.powi(term.t_power) * t.scale(term.rate).exp() * arg.cos();
                    acc + v.scale(term.coef)
                });
                vec![v]
            }
            TestFunction::FlatBump { center, coord, .. } => {
                let y = z[*coord].clone() - S::from_f64(*center);
                if y.value() == 0.0 {
                    return vec![S::from_f64(0.0)];
                }
                let bump = (S::from_f64(-1.0) / (y.clone() * y)).exp();
                vec![bump * z[0].exp()]
            }
            TestFunction::Stack(parts) => parts.iter().flat_map(|p| p.scalar_eval(z)).collect(),
        }
    }
}

impl Analytic for TestFunction {
    fn dim(&self) -> usize {
        match self {
            TestFunction::Constant { dim, .. }
            | TestFunction::Monomial { dim, .. }
            | TestFunction::Exp { dim }
            | TestFunction::Polynomial { dim, .. }
            | TestFunction::TrigExp { dim, .. }
            | TestFunction::FlatBump { dim, .. } => *dim,
            TestFunction::ExpCos => 2,
            TestFunction::Stack(parts) => parts.first().map_or(0, Analytic::dim),
        }
    }

    fn value_dim(&self) -> usize {
        match self {
            TestFunction::Stack(parts) => parts.iter().map(Analytic::value_dim).sum(),
            _ => 1,
        }
    }

    fn eval<S: Scalar>(&self, z: &[S]) -> Vec<S> {
        self.scalar_eval(z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jets::Tangent;
    use crate::source::analytic_jet;
    use approx::assert_relative_eq;

    #[test]
    fn exp_cos_jets() {
        let f = TestFunction::ExpCos;
        let z = [0.2, 0.4];
        let v = analytic_jet(&f, &z, &[Tangent::new(1.0, &[0.0]), Tangent::new(0.0, &[1.0])]);
        assert_relative_eq!(v[0], -libm::exp(0.2) * libm::sin(0.4), epsilon = 1e-15);
    }

    #[test]
    fn polynomial_and_stack() {
        let f = TestFunction::Stack(vec![TestFunction::disk_sample(), TestFunction::radial_square()]);
        assert_eq!(f.value_dim(), 2);
        assert_eq!(f.eval(&[1.0, 2.0]), vec![3.0, 5.0]);
        let hess = analytic_jet(&f, &[0.3, 0.1], &[Tangent(vec![1.0, 0.0]), Tangent(vec![1.0, 0.0])]);
        assert_relative_eq!(hess[0], 2.0);
        assert_relative_eq!(hess[1], 2.0);
    }

    #[test]
    fn flat_bump_is_flat_on_its_line() {
        let f = TestFunction::FlatBump { center: 0.25, coord: 1, dim: 2 };
        let w = [Tangent::new(0.3, &[1.0]), Tangent::new(-1.0, &[2.0])];
        assert_eq!(analytic_jet(&f, &[-0.5, 0.25], &w), vec![0.0]);
        assert!(analytic_jet(&f, &[-0.5, 0.75], &[])[0] > 0.0);
    }

    #[test]
    fn trig_exp_value() {
        let f = TestFunction::TrigExp {
            dim: 2,
            terms: vec![TrigExpTerm { coef: 2.0, t_power: 1, rate: 0.5, freq: vec![3.0], phase: 0.1 }],
        };
        let expected = 2.0 * -0.4 * libm::exp(-0.2) * libm::cos(0.3 + 0.1);
        assert_relative_eq!(f.eval(&[-0.4, 0.1])[0], expected, epsilon = 1e-15);
    }
}
