//! Quadrature on uniform grids.

/// Composite trapezoid rule for samples on a uniform grid of spacing `dx`.
///
/// For smooth integrands that decay exponentially before the ends of the
/// grid this is spectrally accurate.
pub fn trapezoid(values: &[f64], dx: f64) -> f64 {
    match values.len() {
        0 | 1 => 0.0,
        n => {
            let inner: f64 = values[1..n - 1].iter().sum();
            dx * (inner + 0.5 * (values[0] + values[n - 1]))
        }
    }
}

/// Trapezoid rule for the inner product `∫ f g dx`.
pub fn inner(f: &[f64], g: &[f64], dx: f64) -> f64 {
    assert_eq!(f.len(), g.len());
    let prod: Vec<f64> = f.iter().zip(g).map(|(a, b)| a * b).collect();
    trapezoid(&prod, dx)
}

/// Antiderivative normalized at the right end, `F(x) = ∫_{+∞}^x f`,
/// evaluated by cumulative trapezoid from the last sample. The integrand is
/// assumed negligible beyond the grid.
pub fn antiderivative_from_right(values: &[f64], dx: f64) -> Vec<f64> {
    let n = values.len();
    let mut out = vec![0.0; n];
    for i in (0..n.saturating_sub(1)).rev() {
        out[i] = out[i + 1] - 0.5 * dx * (values[i] + values[i + 1]);
    }
    out
}

/// Composite Simpson rule for `f` on `[a, b]` with `panels` (rounded up to
/// even) subintervals.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    let n = panels.max(2).next_multiple_of(2);
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + i as f64 * h);
    }
    acc * h / 3.0
}
