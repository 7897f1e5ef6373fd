//! Gauss–Hermite quadrature, `∫ f(x) e^{-x²} dx ≈ Σ w_i f(x_i)`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct GaussHermite {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussHermite {
    /// Nodes and weights from the eigen-decomposition of the Jacobi matrix of
    /// the physicists' Hermite recurrence (Golub–Welsch).
    pub fn new(order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidInput("quadrature order must be positive".into()));
        }
        let mut jacobi = DMatrix::<f64>::zeros(order, order);
        for i in 1..order {
            let b = (i as f64 / 2.0).sqrt();
            jacobi[(i, i - 1)] = b;
            jacobi[(i - 1, i)] = b;
        }
        let eig = SymmetricEigen::try_new(jacobi, f64::EPSILON, 100 * order.max(10))
            .ok_or_else(|| Error::Numerical("Golub-Welsch eigensolver did not converge".into()))?;
        let mut pairs: Vec<(f64, f64)> = (0..order)
            .map(|i| (eig.eigenvalues[i], PI.sqrt() * eig.eigenvectors[(0, i)].powi(2)))
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (nodes, weights) = pairs.into_iter().unzip();
        Ok(Self { nodes, weights })
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}
