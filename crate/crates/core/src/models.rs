//! Parameterized models `f(x, p)`, datasets, residuals and Jacobians.

use alloc::vec;

use crate::linalg::Matrix;
use crate::{Error, Result};

/// A parameterized function family `f: R^m × R^d → R^k`.
///
/// `evaluate` must be deterministic in `(x, p)`.
pub trait ParamModel {
    /// Short identifier recorded in certificates.
    fn kind(&self) -> &str {
        "custom"
    }
    fn param_dim(&self) -> usize;
    fn input_dim(&self) -> usize;
    fn output_dim(&self) -> usize {
        1
    }

    /// Writes `f(x, p)` into `out` (length `output_dim`).
    fn evaluate(&self, x: &[f64], p: &[f64], out: &mut [f64]);

    /// Writes `∇_p f_output(x, p)` into `grad` (length `param_dim`), if the
    /// model knows its derivative in closed form.
    fn analytic_gradient(&self, _x: &[f64], _p: &[f64], _output: usize, _grad: &mut [f64]) -> Result<()> {
        Err(Error::NoEvaluator)
    }
}

impl<M: ParamModel + ?Sized> ParamModel for &M {
    fn kind(&self) -> &str {
        (**self).kind()
    }
    fn param_dim(&self) -> usize {
        (**self).param_dim()
    }
    fn input_dim(&self) -> usize {
        (**self).input_dim()
    }
    fn output_dim(&self) -> usize {
        (**self).output_dim()
    }
    fn evaluate(&self, x: &[f64], p: &[f64], out: &mut [f64]) {
        (**self).evaluate(x, p, out)
    }
    fn analytic_gradient(&self, x: &[f64], p: &[f64], output: usize, grad: &mut [f64]) -> Result<()> {
        (**self).analytic_gradient(x, p, output, grad)
    }
}

/// `f(x, p) = β₀ + β₁x₁ + … + β_m x_m`, with `p = (β₀, …, β_m)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LinearRegression {
    input_dim: usize,
}

impl LinearRegression {
    pub fn new(input_dim: usize) -> Self {
        Self { input_dim }
    }

    /// Model with `d` parameters (`d − 1` inputs).
    pub fn with_param_dim(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidArguments("linear model needs at least an intercept"));
        }
        Ok(Self::new(d - 1))
    }
}

impl ParamModel for LinearRegression {
    fn kind(&self) -> &str {
        "linear-regression"
    }

    fn param_dim(&self) -> usize {
        self.input_dim + 1
    }

    fn input_dim(&self) -> usize {
        self.input_dim
    }

    fn evaluate(&self, x: &[f64], p: &[f64], out: &mut [f64]) {
        out[0] = p[0] + x.iter().zip(&p[1..]).map(|(xi, b)| xi * b).sum::<f64>();
    }

    fn analytic_gradient(&self, x: &[f64], _p: &[f64], _output: usize, grad: &mut [f64]) -> Result<()> {
        grad[0] = 1.0;
        grad[1..].copy_from_slice(x);
        Ok(())
    }
}

/// A model backed by a closure; it has no analytic Jacobian.
pub struct FnModel<F> {
    param_dim: usize,
    input_dim: usize,
    output_dim: usize,
    f: F,
}

impl<F> FnModel<F>
where
    F: Fn(&[f64], &[f64], &mut [f64]),
{
    pub fn new(param_dim: usize, input_dim: usize, output_dim: usize, f: F) -> Self {
        Self { param_dim, input_dim, output_dim, f }
    }
}

impl<F> ParamModel for FnModel<F>
where
    F: Fn(&[f64], &[f64], &mut [f64]),
{
    fn param_dim(&self) -> usize {
        self.param_dim
    }
    fn input_dim(&self) -> usize {
        self.input_dim
    }
    fn output_dim(&self) -> usize {
        self.output_dim
    }
    fn evaluate(&self, x: &[f64], p: &[f64], out: &mut [f64]) {
        (self.f)(x, p, out)
    }
}

/// Training data: `n` rows of inputs `X` (n×m) and responses `Y` (n×k).
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    inputs: Matrix,
    responses: Matrix,
}

impl Dataset {
    pub fn new(inputs: Matrix, responses: Matrix) -> Result<Self> {
        if inputs.rows() == 0 {
            return Err(Error::EmptyInput);
        }
        if inputs.rows() != responses.rows() {
            return Err(Error::DimensionMismatch { expected: inputs.rows(), found: responses.rows() });
        }
        Ok(Self { inputs, responses })
    }

    pub fn inputs(&self) -> &Matrix {
        &self.inputs
    }

    pub fn responses(&self) -> &Matrix {
        &self.responses
    }

    pub fn len(&self) -> usize {
        self.inputs.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn input_dim(&self) -> usize {
        self.inputs.cols()
    }

    pub fn output_dim(&self) -> usize {
        self.responses.cols()
    }
}

fn check_dims<M: ParamModel + ?Sized>(model: &M, data: &Dataset, p: &[f64]) -> Result<()> {
    if p.len() != model.param_dim() {
        return Err(Error::DimensionMismatch { expected: model.param_dim(), found: p.len() });
    }
    if data.input_dim() != model.input_dim() {
        return Err(Error::DimensionMismatch { expected: model.input_dim(), found: data.input_dim() });
    }
    if data.output_dim() != model.output_dim() {
        return Err(Error::DimensionMismatch { expected: model.output_dim(), found: data.output_dim() });
    }
    Ok(())
}

/// Model outputs `f(x_i, p)` stacked row-wise (n×k).
pub fn predictions<M: ParamModel + ?Sized>(model: &M, data: &Dataset, p: &[f64]) -> Result<Matrix> {
    check_dims(model, data, p)?;
    let mut out = Matrix::zeros(data.len(), model.output_dim());
    for i in 0..data.len() {
        model.evaluate(data.inputs.row(i), p, out.row_mut(i));
    }
    Ok(out)
}

/// Error matrix `E[i][j] = Y[i][j] − f_j(x_i, p)`.
pub fn residuals<M: ParamModel + ?Sized>(model: &M, data: &Dataset, p: &[f64]) -> Result<Matrix> {
    let mut e = predictions(model, data, p)?;
    for i in 0..data.len() {
        for (r, y) in e.row_mut(i).iter_mut().zip(data.responses.row(i)) {
            *r = y - *r;
        }
    }
    Ok(e)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum JacobianMethod {
    /// Closed form if the model provides one, forward differences otherwise.
    #[default]
    Auto,
    Analytic,
    FiniteDifference,
}

/// Forward-difference step for parameter value `p`.
pub fn fd_step(p: f64) -> f64 {
    1e-6 * p.abs().max(1.0)
}

/// The n×d Jacobian of output `output_index` with respect to `p`; row `i`
/// is `∇_p f_j(x_i, p)`.
pub fn jacobian<M: ParamModel + ?Sized>(
    model: &M,
    data: &Dataset,
    p: &[f64],
    output_index: usize,
    method: JacobianMethod,
) -> Result<Matrix> {
    check_dims(model, data, p)?;
    let k = model.output_dim();
    if output_index >= k {
        return Err(Error::DimensionMismatch { expected: k, found: output_index });
    }
    let (n, d) = (data.len(), model.param_dim());
    let mut jac = Matrix::zeros(n, d);

    let analytic = match method {
        JacobianMethod::FiniteDifference => false,
        JacobianMethod::Analytic => true,
        JacobianMethod::Auto => {
            let mut probe = vec![0.0; d];
            model.analytic_gradient(data.inputs.row(0), p, output_index, &mut probe).is_ok()
        }
    };

    if analytic {
        for i in 0..n {
            model.analytic_gradient(data.inputs.row(i), p, output_index, jac.row_mut(i))?;
        }
    } else {
        let mut base = vec![0.0; k];
        let mut bumped = vec![0.0; k];
        let mut q = p.to_vec();
        for i in 0..n {
            let x = data.inputs.row(i);
            model.evaluate(x, p, &mut base);
            for l in 0..d {
                let h = fd_step(p[l]);
                q[l] = p[l] + h;
                model.evaluate(x, &q, &mut bumped);
                q[l] = p[l];
                jac[(i, l)] = (bumped[output_index] - base[output_index]) / h;
            }
        }
    }
    if jac.as_slice().iter().all(|v| v.is_finite()) {
        Ok(jac)
    } else {
        Err(Error::NonFiniteValue)
    }
}

/// Header bits in the canonical parameter encoding.
pub const SERIALIZATION_HEADER_BITS: u64 = 128;

/// Bit length of the canonical parameter encoding: a 128-bit header plus one
/// IEEE-754 double per parameter. An upper bound on the information content
/// of the model.
pub fn serialized_bit_length(p: &[f64]) -> u64 {
    64 * p.len() as u64 + SERIALIZATION_HEADER_BITS
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_column(x: &[f64], y: &[f64]) -> Dataset {
        Dataset::new(Matrix::column_vector(x), Matrix::column_vector(y)).unwrap()
    }

    #[test]
    fn residual_examples() {
        let model = LinearRegression::new(1);
        let data = one_column(&[3.0], &[7.0]);
        assert_eq!(residuals(&model, &data, &[1.0, 2.0]).unwrap()[(0, 0)], 0.0);
        let data = one_column(&[1.0, -2.0, 5.5], &[4.0, 0.5, -1.0]);
        assert_eq!(residuals(&model, &data, &[0.0, 0.0]).unwrap(), *data.responses());
        assert_eq!(
            residuals(&model, &data, &[0.0]),
            Err(Error::DimensionMismatch { expected: 2, found: 1 })
        );
    }

    #[test]
    fn linear_jacobian_example() {
        let model = LinearRegression::new(1);
        let data = one_column(&[2.0, 5.0], &[0.0, 0.0]);
        let j = jacobian(&model, &data, &[0.3, -8.0], 0, JacobianMethod::Analytic).unwrap();
        assert_eq!(j, Matrix::from_rows(&[[1.0, 2.0], [1.0, 5.0]]).unwrap());
    }

    #[test]
    fn fd_jacobian_of_square() {
        let model = FnModel::new(1, 1, 1, |_x: &[f64], p: &[f64], out: &mut [f64]| out[0] = p[0] * p[0]);
        let data = one_column(&[0.0], &[0.0]);
        for p1 in [-2.0, 0.5, 3.0] {
            let j = jacobian(&model, &data, &[p1], 0, JacobianMethod::Auto).unwrap();
            assert!((j[(0, 0)] - 2.0 * p1).abs() < 1e-5);
        }
        assert_eq!(jacobian(&model, &data, &[1.0], 0, JacobianMethod::Analytic), Err(Error::NoEvaluator));
    }

    #[test]
    fn constant_model_has_zero_jacobian() {
        let model = FnModel::new(2, 1, 1, |_x: &[f64], _p: &[f64], out: &mut [f64]| out[0] = 4.0);
        let data = one_column(&[1.0, 2.0], &[0.0, 0.0]);
        let j = jacobian(&model, &data, &[1.0, 2.0], 0, JacobianMethod::FiniteDifference).unwrap();
        assert_eq!(j, Matrix::zeros(2, 2));
    }

    #[test]
    fn non_finite_model_is_rejected() {
        let model = FnModel::new(1, 1, 1, |_x: &[f64], p: &[f64], out: &mut [f64]| out[0] = 1.0 / (p[0] - 1.0));
        let data = one_column(&[0.0], &[0.0]);
        assert_eq!(
            jacobian(&model, &data, &[1.0], 0, JacobianMethod::FiniteDifference),
            Err(Error::NonFiniteValue)
        );
    }

    #[test]
    fn bit_lengths() {
        assert_eq!(serialized_bit_length(&[0.0; 6]), 512);
        assert_eq!(serialized_bit_length(&[0.0; 1]), 192);
        assert_eq!(serialized_bit_length(&[0.0; 100]), 6528);
    }

    #[test]
    fn dataset_invariants() {
        assert_eq!(Dataset::new(Matrix::zeros(0, 1), Matrix::zeros(0, 1)), Err(Error::EmptyInput));
        assert!(Dataset::new(Matrix::zeros(2, 1), Matrix::zeros(3, 1)).is_err());
    }
}
