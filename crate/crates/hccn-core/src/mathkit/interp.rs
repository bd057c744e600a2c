//! Shape-preserving piecewise-cubic interpolation (Fritsch-Carlson /
//! Fritsch-Butland construction).
//!
//! Node tangents are weighted harmonic means of adjacent secant slopes,
//! zeroed at local extrema; this keeps the interpolant monotone wherever the
//! data are monotone, which is exactly what tabulated CDFs need: no
//! overshoot above 1, no dips below 0, no spurious wiggles between nodes.

/// A C1 piecewise-cubic Hermite interpolant with shape-preserving tangents.
#[derive(Debug, Clone)]
pub struct MonotoneCubic {
    x: Vec<f64>,
    y: Vec<f64>,
    tangents: Vec<f64>,
}

impl MonotoneCubic {
    /// Build the interpolant from strictly increasing abscissae `x` and
    /// values `y` (`x.len() == y.len() >= 2`, all finite).
    ///
    /// # Panics
    /// Panics on length mismatch, fewer than two nodes, non-finite input or
    /// non-increasing `x`.
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Self {
        assert_eq!(x.len(), y.len(), "x and y must have equal length");
        assert!(x.len() >= 2, "need at least two nodes");
        for w in x.windows(2) {
            assert!(w[0] < w[1], "abscissae must be strictly increasing");
        }
        assert!(
            x.iter().chain(y.iter()).all(|v| v.is_finite()),
            "nodes must be finite"
        );

        let n = x.len();
        let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
        let delta: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();

        let mut tangents = vec![0.0; n];
        for i in 1..n - 1 {
            if delta[i - 1] * delta[i] <= 0.0 {
                // Local extremum or flat spot: flat tangent preserves shape.
                tangents[i] = 0.0;
            } else {
                // Weighted harmonic mean of the adjacent secants; the weights
                // keep the tangent inside the monotonicity region.
                let w1 = 2.0 * h[i] + h[i - 1];
                let w2 = h[i] + 2.0 * h[i - 1];
                tangents[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
            }
        }
        tangents[0] = edge_tangent(h[0], h.get(1).copied().unwrap_or(h[0]), delta[0], {
            *delta.get(1).unwrap_or(&delta[0])
        });
        tangents[n - 1] = edge_tangent(
            h[n - 2],
            if n >= 3 { h[n - 3] } else { h[n - 2] },
            delta[n - 2],
            if n >= 3 { delta[n - 3] } else { delta[n - 2] },
        );

        Self { x, y, tangents }
    }

    /// Smallest abscissa.
    pub fn min_x(&self) -> f64 {
        self.x[0]
    }

    /// Largest abscissa.
    pub fn max_x(&self) -> f64 {
        *self.x.last().expect("non-empty by construction")
    }

    /// Evaluate the interpolant; queries outside the node range clamp to the
    /// boundary values (callers that need different tail semantics check
    /// [`Self::min_x`]/[`Self::max_x`] first).
    pub fn eval(&self, q: f64) -> f64 {
        let n = self.x.len();
        if q <= self.x[0] {
            return self.y[0];
        }
        if q >= self.x[n - 1] {
            return self.y[n - 1];
        }
        // partition_point returns the first index with x > q; the interval
        // index is one less.
        let idx = self.x.partition_point(|&xi| xi <= q) - 1;
        let h = self.x[idx + 1] - self.x[idx];
        let t = (q - self.x[idx]) / h;
        let (t2, t3) = (t * t, t * t * t);
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * self.y[idx]
            + h10 * h * self.tangents[idx]
            + h01 * self.y[idx + 1]
            + h11 * h * self.tangents[idx + 1]
    }
}

/// One-sided three-point tangent estimate for an endpoint, clamped to the
/// shape-preserving region.
fn edge_tangent(h0: f64, h1: f64, delta0: f64, delta1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * delta0 - h0 * delta1) / (h0 + h1);
    if d * delta0 <= 0.0 {
        0.0
    } else if delta0 * delta1 < 0.0 && d.abs() > 3.0 * delta0.abs() {
        3.0 * delta0
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn reproduces_reference_interpolant_values() {
        // Frozen from an independent shape-preserving-cubic implementation.
        let x = vec![0.0, 1.0, 2.5, 3.0, 4.5, 7.0];
        let y = vec![0.0, 0.2, 0.21, 0.75, 0.95, 1.0];
        let c = MonotoneCubic::new(x, y);
        let golden = [
            (0.0, 0.0),
            (0.4, 0.109_014_899_082_568_81),
            (1.7, 0.204_477_129_932_196_02),
            (2.6, 0.262_809_752_753_978_05),
            (2.9, 0.676_631_911_872_705_11),
            (3.7, 0.887_883_051_893_999_3),
            (5.0, 0.967_061_003_861_003_8),
            (6.9, 0.999_908_732_046_332_24),
            (7.0, 1.0),
        ];
        for (q, want) in golden {
            if want == 0.0 {
                assert!(c.eval(q).abs() < 1e-15);
            } else {
                assert_relative_eq!(c.eval(q), want, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn interpolates_nodes_exactly() {
        let x = vec![-2.0, -0.5, 0.0, 0.1, 3.0];
        let y = vec![4.0, 0.25, 0.0, 0.01, 9.0];
        let c = MonotoneCubic::new(x.clone(), y.clone());
        for (xi, yi) in x.iter().zip(y.iter()) {
            assert_relative_eq!(c.eval(*xi), *yi, epsilon = 1e-15);
        }
    }

    #[test]
    fn preserves_monotonicity_between_nodes() {
        // Data with a hard plateau: a naive cubic spline overshoots here.
        let x = vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0];
        let y = vec![0.0, 0.0, 0.0, 1.0, 1.0, 1.0];
        let c = MonotoneCubic::new(x, y);
        let mut prev = f64::NEG_INFINITY;
        for i in 0..=5000 {
            let q = 5.0 * i as f64 / 5000.0;
            let v = c.eval(q);
            assert!(v >= prev - 1e-14, "not monotone at q = {q}");
            assert!((-1e-14..=1.0 + 1e-14).contains(&v), "overshoot at q = {q}");
            prev = v;
        }
    }

    #[test]
    fn clamps_outside_the_node_range() {
        let c = MonotoneCubic::new(vec![1.0, 2.0, 3.0], vec![0.1, 0.4, 0.9]);
        assert_eq!(c.eval(0.0), 0.1);
        assert_eq!(c.eval(10.0), 0.9);
        assert_eq!(c.min_x(), 1.0);
        assert_eq!(c.max_x(), 3.0);
    }

    #[test]
    fn is_exact_on_linear_data() {
        let x: Vec<f64> = (0..10).map(|i| i as f64 * 0.7).collect();
        let y: Vec<f64> = x.iter().map(|v| 3.0 * v - 1.0).collect();
        let c = MonotoneCubic::new(x, y);
        for i in 0..=100 {
            let q = 6.3 * i as f64 / 100.0;
            assert_relative_eq!(c.eval(q), 3.0 * q - 1.0, max_relative = 1e-13);
        }
    }

    #[test]
    #[should_panic(expected = "strictly increasing")]
    fn rejects_unsorted_abscissae() {
        MonotoneCubic::new(vec![0.0, 2.0, 1.0], vec![0.0, 1.0, 2.0]);
    }
}
