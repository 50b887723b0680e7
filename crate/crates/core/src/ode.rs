//! Fixed-step classic Runge-Kutta. The generators in this crate are small
//! constant linear maps with bounded stiffness, so a fixed step keeps runs
//! bit-reproducible, which the golden-file tests rely on.

use crate::linalg::Matrix2;
use num_complex::Complex64;

pub(crate) trait OdeState: Clone {
    /// self + factor * other, elementwise.
    fn add_scaled(&self, other: &Self, factor: f64) -> Self;
}

pub(crate) fn rk4_step<S, F>(y: &S, t: f64, h: f64, rhs: &F) -> S
where
    S: OdeState,
    F: Fn(f64, &S) -> S,
{
    let k1 = rhs(t, y);
    let k2 = rhs(t + 0.5 * h, &y.add_scaled(&k1, 0.5 * h));
    let k3 = rhs(t + 0.5 * h, &y.add_scaled(&k2, 0.5 * h));
    let k4 = rhs(t + h, &y.add_scaled(&k3, h));
    y.add_scaled(&k1, h / 6.0)
        .add_scaled(&k2, h / 3.0)
        .add_scaled(&k3, h / 3.0)
        .add_scaled(&k4, h / 6.0)
}

impl OdeState for Matrix2 {
    fn add_scaled(&self, other: &Self, factor: f64) -> Self {
        *self + other.scaled_re(factor)
    }
}

impl OdeState for Vec<Complex64> {
    fn add_scaled(&self, other: &Self, factor: f64) -> Self {
        debug_assert_eq!(self.len(), other.len());
        self.iter()
            .zip(other.iter())
            .map(|(a, b)| a + factor * b)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Clone)]
    struct Scalar(f64);

    impl OdeState for Scalar {
        fn add_scaled(&self, other: &Self, factor: f64) -> Self {
            Scalar(self.0 + factor * other.0)
        }
    }

    #[test]
    fn fourth_order_on_exponential_decay() {
        // y' = -y over [0, 1]; error should shrink 16x per halving
        let run = |steps: usize| {
            let h = 1.0 / steps as f64;
            let mut y = Scalar(1.0);
            let mut t = 0.0;
            for _ in 0..steps {
                y = rk4_step(&y, t, h, &|_, s: &Scalar| Scalar(-s.0));
                t += h;
            }
            (y.0 - (-1.0f64).exp()).abs()
        };
        let e1 = run(20);
        let e2 = run(40);
        assert!(e2 < e1 / 12.0, "e1 = {e1:.3e}, e2 = {e2:.3e}");
        assert!(e1 < 1e-7);
    }
}
