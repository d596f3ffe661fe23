//! Quadrature tables and convergence-rate fitting.
//!
//! All path and surface integrals in this crate are computed from uniformly
//! sampled integrand tables. Two rules are provided:
//!
//! * cumulative trapezoid sums, used when the integral must match a
//!   trapezoid-form difference equation exactly at the nodes, and
//! * cumulative Simpson sums, the default higher-order rule for line
//!   integrals with an even number of intervals.
//!
//! The cumulative Simpson table is defined by the composite rule on even
//! prefixes and, on odd prefixes, the standard three-point Newton–Cotes
//! half-panel
//!
//! ```text
//! C[2m+1] = C[2m] + h * (5 f[2m] + 8 f[2m+1] - f[2m+2]) / 12
//! ```
//!
//! so that every node carries a high-order running integral: prefixes are
//! exact through cubics at even nodes and through quadratics at odd nodes.

use crate::error::MathError;
use crate::lie::CMatrix;

/// Cumulative trapezoid table: `out[k]` approximates the integral of `f`
/// from node 0 to node `k` on a uniform grid with spacing `h`.
pub fn cumulative_trapezoid(values: &[CMatrix], h: f64) -> Vec<CMatrix> {
    assert!(!values.is_empty(), "empty integrand table");
    let mut out = Vec::with_capacity(values.len());
    let mut acc = CMatrix::zeros(values[0].nrows(), values[0].ncols());
    out.push(acc.clone());
    for k in 1..values.len() {
        acc += (&values[k - 1] + &values[k]) * nalgebra::Complex::new(0.5 * h, 0.0);
        out.push(acc.clone());
    }
    out
}

/// Cumulative Simpson table on a uniform grid with an even number of
/// intervals (odd number of nodes). `out[k]` approximates the integral from
/// node 0 to node `k`.
pub fn cumulative_simpson(values: &[CMatrix], h: f64) -> Result<Vec<CMatrix>, MathError> {
    let n = values.len();
    if n < 3 || n % 2 == 0 {
        return Err(MathError::GridMismatch {
            reason: format!(
                "Simpson table needs an odd number of nodes (even interval count), got {n} nodes"
            ),
        });
    }
    let rows = values[0].nrows();
    let cols = values[0].ncols();
    let mut out = Vec::with_capacity(n);
    let mut even_acc = CMatrix::zeros(rows, cols);
    out.push(even_acc.clone());
    let third = nalgebra::Complex::new(h / 3.0, 0.0);
    let twelfth = nalgebra::Complex::new(h / 12.0, 0.0);
    let c = |x: f64| nalgebra::Complex::new(x, 0.0);
    let mut m = 0usize;
    while 2 * m + 2 < n {
        let f0 = &values[2 * m];
        let f1 = &values[2 * m + 1];
        let f2 = &values[2 * m + 2];
        let odd = &even_acc + (f0 * c(5.0) + f1 * c(8.0) - f2) * twelfth;
        out.push(odd);
        even_acc += (f0 + f1 * c(4.0) + f2) * third;
        out.push(even_acc.clone());
        m += 1;
    }
    Ok(out)
}

/// Total Simpson integral over the whole table (even interval count).
pub fn simpson_total(values: &[CMatrix], h: f64) -> Result<CMatrix, MathError> {
    Ok(cumulative_simpson(values, h)?.pop().expect("nonempty table"))
}

/// Simpson weights for an odd-length node table, including the `h` factor;
/// `sum_k w[k] f[k]` equals [`simpson_total`].
pub fn simpson_weights(n_nodes: usize, h: f64) -> Result<Vec<f64>, MathError> {
    if n_nodes < 3 || n_nodes % 2 == 0 {
        return Err(MathError::GridMismatch {
            reason: format!("Simpson weights need an odd node count, got {n_nodes}"),
        });
    }
    let mut w = vec![0.0; n_nodes];
    for m in 0..(n_nodes - 1) / 2 {
        w[2 * m] += h / 3.0;
        w[2 * m + 1] += 4.0 * h / 3.0;
        w[2 * m + 2] += h / 3.0;
    }
    Ok(w)
}

/// Scalar Simpson total for real-valued tables.
pub fn simpson_total_scalar(values: &[f64], h: f64) -> Result<f64, MathError> {
    let w = simpson_weights(values.len(), h)?;
    Ok(w.iter().zip(values).map(|(wi, fi)| wi * fi).sum())
}

/// Least-squares slope of `log(residual)` against `log(1/n)`.
///
/// Returns the empirical convergence order `p` when residuals behave like
/// `C * n^{-p}`. Residuals at or below `floor` (roundoff-dominated points)
/// are excluded; returns `None` if fewer than two usable points remain.
pub fn fit_convergence_order(ns: &[usize], residuals: &[f64], floor: f64) -> Option<f64> {
    assert_eq!(ns.len(), residuals.len(), "mismatched convergence tables");
    let pts: Vec<(f64, f64)> = ns
        .iter()
        .zip(residuals)
        .filter(|(_, &r)| r.is_finite() && r > floor)
        .map(|(&n, &r)| ((n as f64).ln(), r.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let k = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let denom = k * sxx - sx * sx;
    if denom.abs() < 1e-30 {
        return None;
    }
    // slope of log r vs log n is -p for r ~ C n^{-p}
    Some(-(k * sxy - sx * sy) / denom)
}

/// Uniform grid nodes `0, 1/n, ..., 1`.
pub fn unit_grid(n: usize) -> Vec<f64> {
    (0..=n).map(|k| k as f64 / n as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::Complex;

    fn scalar_table(f: impl Fn(f64) -> f64, n: usize) -> Vec<CMatrix> {
        unit_grid(n)
            .into_iter()
            .map(|t| CMatrix::from_element(1, 1, Complex::new(f(t), 0.0)))
            .collect()
    }

    fn entry(m: &CMatrix) -> f64 {
        m[(0, 0)].re
    }

    #[test]
    fn test_trapezoid_exact_on_linear() {
        // Trapezoid is exact for degree-1 integrands: integral of 2t+1 over
        // [0, T] is T^2 + T.
        let n = 10;
        let table = cumulative_trapezoid(&scalar_table(|t| 2.0 * t + 1.0, n), 1.0 / n as f64);
        for (k, prefix) in table.iter().enumerate() {
            let t = k as f64 / n as f64;
            assert!((entry(prefix) - (t * t + t)).abs() < 1e-14);
        }
    }

    #[test]
    fn test_simpson_exact_on_quadratic_everywhere_cubic_at_even_nodes() {
        // The half-panel rule integrates quadratics exactly, so the whole
        // cumulative table is exact for 3t^2 (integral t^3).
        let n = 8;
        let h = 1.0 / n as f64;
        let table = cumulative_simpson(&scalar_table(|t| 3.0 * t * t, n), h).unwrap();
        for (k, prefix) in table.iter().enumerate() {
            let t = k as f64 * h;
            assert!((entry(prefix) - t.powi(3)).abs() < 1e-14, "node {k}");
        }
        // Classic Simpson panels are exact for cubics, so even prefixes of
        // 4t^3 (integral t^4) are exact; odd prefixes carry the half-panel
        // truncation error h^4 f'''/24 = h^4 for this integrand.
        let table = cumulative_simpson(&scalar_table(|t| 4.0 * t * t * t, n), h).unwrap();
        for (k, prefix) in table.iter().enumerate() {
            let t = k as f64 * h;
            let err = (entry(prefix) - t.powi(4)).abs();
            if k % 2 == 0 {
                assert!(err < 1e-14, "even node {k}: err {err}");
            } else {
                assert!((err - h.powi(4)).abs() < 1e-14, "odd node {k}: err {err}");
            }
        }
    }

    #[test]
    fn test_simpson_weights_match_cumulative_total() {
        let n = 12;
        let h = 1.0 / n as f64;
        let table = scalar_table(|t| (3.0 * t).sin(), n);
        let total = entry(&simpson_total(&table, h).unwrap());
        let w = simpson_weights(n + 1, h).unwrap();
        let weighted: f64 = w.iter().zip(&table).map(|(wi, fi)| wi * entry(fi)).sum();
        assert!((total - weighted).abs() < 1e-14);
        // Frozen reference: integral of sin(3t) on [0,1] is (1 - cos 3)/3;
        // composite Simpson at n = 12 carries a truncation error near 1.45e-5.
        let exact = (1.0 - 3.0f64.cos()) / 3.0;
        let err = (total - exact).abs();
        assert!(err > 1.0e-5 && err < 2.0e-5, "err {err}");
    }

    #[test]
    fn test_simpson_rejects_odd_interval_count() {
        let table = scalar_table(|t| t, 5);
        assert!(matches!(
            cumulative_simpson(&table, 0.2),
            Err(MathError::GridMismatch { .. })
        ));
    }

    #[test]
    fn test_simpson_fourth_order_on_smooth_integrand() {
        // Composite Simpson totals converge at order 4 on exp(t).
        let mut ns = Vec::new();
        let mut errs = Vec::new();
        for n in [8usize, 16, 32, 64] {
            let total = entry(&simpson_total(&scalar_table(f64::exp, n), 1.0 / n as f64).unwrap());
            ns.push(n);
            errs.push((total - (1.0f64.exp() - 1.0)).abs());
        }
        let p = fit_convergence_order(&ns, &errs, 1e-14).unwrap();
        assert!((p - 4.0).abs() < 0.25, "order {p}");
    }

    #[test]
    fn test_cumulative_simpson_interior_third_order() {
        // Running values at interior odd nodes are third-order accurate, so
        // the sup-norm error over all prefixes decays at least at order 3.
        let mut ns = Vec::new();
        let mut errs = Vec::new();
        for n in [8usize, 16, 32, 64] {
            let h = 1.0 / n as f64;
            let table = cumulative_simpson(&scalar_table(f64::exp, n), h).unwrap();
            let worst = table
                .iter()
                .enumerate()
                .map(|(k, pref)| (entry(pref) - ((k as f64 * h).exp() - 1.0)).abs())
                .fold(0.0f64, f64::max);
            ns.push(n);
            errs.push(worst);
        }
        let p = fit_convergence_order(&ns, &errs, 1e-14).unwrap();
        assert!(p > 2.7, "order {p}");
    }

    #[test]
    fn test_fit_convergence_order_recovers_planted_slope() {
        let ns = [50usize, 100, 200, 400];
        let errs: Vec<f64> = ns.iter().map(|&n| 3.7 / (n as f64).powi(2)).collect();
        let p = fit_convergence_order(&ns, &errs, 1e-14).unwrap();
        assert!((p - 2.0).abs() < 1e-10);
    }

    #[test]
    fn test_fit_convergence_order_skips_roundoff_floor() {
        let ns = [50usize, 100, 200, 400];
        let errs = [4.0e-4, 1.0e-4, 1e-16, 1e-16];
        // Only two points survive the floor; the pair slope is exactly 2.
        let p = fit_convergence_order(&ns, &errs, 1e-14).unwrap();
        assert!((p - 2.0).abs() < 1e-10);
        assert!(fit_convergence_order(&ns, &[1e-16; 4], 1e-14).is_none());
    }
}
