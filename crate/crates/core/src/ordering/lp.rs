//! Phase-one simplex for `A x = b, x >= 0` on small dense systems.

const PIVOT_EPS: f64 = 1e-12;

/// Returns a nonnegative `x` with `|A x - b|_1 <= tol`, or `None` when the
/// phase-one optimum exceeds `tol`. `a` is row-major, `rows x cols`.
pub(crate) fn feasible_point(a: &[f64], b: &[f64], cols: usize, tol: f64) -> Option<Vec<f64>> {
    let rows = b.len();
    assert_eq!(a.len(), rows * cols);
    // Tableau columns: original variables, one artificial per row, rhs.
    let width = cols + rows + 1;
    let mut t = vec![0.0; rows * width];
    for r in 0..rows {
        let sign = if b[r] < 0.0 { -1.0 } else { 1.0 };
        for c in 0..cols {
            t[r * width + c] = sign * a[r * cols + c];
        }
        t[r * width + cols + r] = 1.0;
        t[r * width + width - 1] = sign * b[r];
    }
    let mut basis: Vec<usize> = (cols..cols + rows).collect();

    // Reduced costs of the phase-one objective (sum of artificials).
    let reduced = |t: &[f64], basis: &[usize], c: usize| -> f64 {
        let own = if c >= cols && c < cols + rows { 1.0 } else { 0.0 };
        own - (0..rows)
            .map(|r| if basis[r] >= cols { t[r * width + c] } else { 0.0 })
            .sum::<f64>()
    };

    let max_iter = 50 * (rows + cols + 1);
    for _ in 0..max_iter {
        // Bland: lowest-index entering column with negative reduced cost.
        let entering = (0..cols + rows).find(|&c| reduced(&t, &basis, c) < -PIVOT_EPS);
        let Some(e) = entering else { break };
        // Ratio test, Bland tie-break on basis index.
        let mut leave: Option<(usize, f64)> = None;
        for r in 0..rows {
            let coef = t[r * width + e];
            if coef > PIVOT_EPS {
                let ratio = t[r * width + width - 1] / coef;
                match leave {
                    Some((lr, best))
                        if ratio > best + PIVOT_EPS
                            || ((ratio - best).abs() <= PIVOT_EPS && basis[r] > basis[lr]) => {}
                    _ => leave = Some((r, ratio)),
                }
            }
        }
        let Some((l, _)) = leave else { break };
        let piv = t[l * width + e];
        for c in 0..width {
            t[l * width + c] /= piv;
        }
        for r in 0..rows {
            if r == l {
                continue;
            }
            let f = t[r * width + e];
            if f != 0.0 {
                for c in 0..width {
                    t[r * width + c] -= f * t[l * width + c];
                }
            }
        }
        basis[l] = e;
    }

    let mut x = vec![0.0; cols];
    for r in 0..rows {
        if basis[r] < cols {
            x[basis[r]] = t[r * width + width - 1].max(0.0);
        }
    }
    let residual: f64 = (0..rows)
        .map(|r| {
            let ax: f64 = (0..cols).map(|c| a[r * cols + c] * x[c]).sum();
            (ax - b[r]).abs()
        })
        .sum();
    (residual <= tol).then_some(x)
}
