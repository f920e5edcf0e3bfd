//! Local polynomial interpolation on a sorted grid.

use num_complex::Complex64;

/// Complex samples on a strictly increasing grid, read back by local
/// Lagrange interpolation through `order` neighbouring nodes.
#[derive(Debug, Clone)]
pub struct Table {
    x: Vec<f64>,
    y: Vec<Complex64>,
    order: usize,
}

impl Table {
    /// Cubic (4-point) table.
    pub fn cubic(x: Vec<f64>, y: Vec<Complex64>) -> Self {
        Self::with_order(x, y, 4)
    }

    pub fn with_order(x: Vec<f64>, y: Vec<Complex64>, order: usize) -> Self {
        assert_eq!(x.len(), y.len());
        assert!(x.len() >= 2);
        assert!(x.windows(2).all(|w| w[0] < w[1]), "grid must be strictly increasing");
        let order = order.min(x.len());
        Self { x, y, order }
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[Complex64] {
        &self.y
    }

    pub fn lo(&self) -> f64 {
        self.x[0]
    }

    pub fn hi(&self) -> f64 {
        *self.x.last().unwrap()
    }

    fn window(&self, t: f64) -> usize {
        let i = self.x.partition_point(|&v| v <= t);
        let half = self.order / 2;
        i.saturating_sub(half).min(self.x.len() - self.order)
    }

    /// Value at `t`; outside the grid the end polynomial is extrapolated.
    pub fn eval(&self, t: f64) -> Complex64 {
        let s = self.window(t);
        let xs = &self.x[s..s + self.order];
        let ys = &self.y[s..s + self.order];
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, (&xj, &yj)) in xs.iter().zip(ys).enumerate() {
            if t == xj {
                return yj;
            }
            let mut w = 1.0;
            for (k, &xk) in xs.iter().enumerate() {
                if k != j {
                    w *= (t - xk) / (xj - xk);
                }
            }
            acc += yj * w;
        }
        acc
    }

    /// Derivative of the local interpolant at `t`.
    pub fn deriv(&self, t: f64) -> Complex64 {
        let s = self.window(t);
        let xs = &self.x[s..s + self.order];
        let ys = &self.y[s..s + self.order];
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, (&xj, &yj)) in xs.iter().zip(ys).enumerate() {
            let mut dw = 0.0;
            for (m, &xm) in xs.iter().enumerate() {
                if m == j {
                    continue;
                }
                let mut p = 1.0 / (xj - xm);
                for (k, &xk) in xs.iter().enumerate() {
                    if k != j && k != m {
                        p *= (t - xk) / (xj - xk);
                    }
                }
                dw += p;
            }
            acc += yj * dw;
        }
        acc
    }
}
