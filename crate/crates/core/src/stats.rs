//! Small statistical helpers: association tests, least squares, rates.
//!
//! P-values are floored at [`P_FLOOR`] so that a threshold of exactly zero
//! never admits a split, even for degenerate perfect-fit data.

use statrs::distribution::{ChiSquared, ContinuousCDF, FisherSnedecor, StudentsT};

/// Smallest p-value any test in this crate reports.
pub const P_FLOOR: f64 = 1e-300;

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sum of squared deviations around the mean, two-pass in input order.
pub fn sse(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum()
}

/// Sample variance (n-1 denominator).
pub fn variance(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return f64::NAN;
    }
    sse(xs) / (xs.len() - 1) as f64
}

fn clamp_p(p: f64) -> f64 {
    if !p.is_finite() {
        return 1.0;
    }
    p.clamp(P_FLOOR, 1.0)
}

/// Two-sided p-value of a t statistic with `df` degrees of freedom.
pub fn t_p_two_sided(t: f64, df: f64) -> f64 {
    if df <= 0.0 || !t.is_finite() {
        return 1.0;
    }
    let dist = match StudentsT::new(0.0, 1.0, df) {
        Ok(d) => d,
        Err(_) => return 1.0,
    };
    clamp_p(2.0 * dist.sf(t.abs()))
}

/// Upper-tail p-value of a chi-square statistic.
pub fn chi_square_p(x: f64, df: f64) -> f64 {
    if df <= 0.0 {
        return 1.0;
    }
    if !x.is_finite() {
        return if x > 0.0 { P_FLOOR } else { 1.0 };
    }
    if x <= 0.0 {
        return 1.0;
    }
    let dist = match ChiSquared::new(df) {
        Ok(d) => d,
        Err(_) => return 1.0,
    };
    clamp_p(dist.sf(x))
}

/// Upper-tail p-value of an F statistic.
pub fn f_p_upper(f: f64, df1: f64, df2: f64) -> f64 {
    if df1 <= 0.0 || df2 <= 0.0 {
        return 1.0;
    }
    if !f.is_finite() {
        return if f > 0.0 { P_FLOOR } else { 1.0 };
    }
    if f <= 0.0 {
        return 1.0;
    }
    let dist = match FisherSnedecor::new(df1, df2) {
        Ok(d) => d,
        Err(_) => return 1.0,
    };
    clamp_p(dist.sf(f))
}

/// Two-sided slope t-test for the simple regression `y ~ x`.
///
/// Degenerate inputs (constant x, constant y, dof exhausted) report p = 1,
/// except a perfect non-trivial linear fit, which reports the floor.
pub fn slope_test_p(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len();
    debug_assert_eq!(n, y.len());
    if n < 3 {
        return 1.0;
    }
    let mx = mean(x);
    let my = mean(y);
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for i in 0..n {
        let dx = x[i] - mx;
        let dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx <= 0.0 || syy <= 0.0 {
        return 1.0;
    }
    let slope = sxy / sxx;
    let rss = (syy - slope * sxy).max(0.0);
    let df = (n - 2) as f64;
    if rss <= 0.0 {
        // perfect fit with a nonzero slope
        return if slope != 0.0 { P_FLOOR } else { 1.0 };
    }
    let se = (rss / df / sxx).sqrt();
    t_p_two_sided(slope / se, df)
}

/// Welch two-sample t-test, two-sided.
pub fn welch_test_p(a: &[f64], b: &[f64]) -> f64 {
    if a.len() < 2 || b.len() < 2 {
        return 1.0;
    }
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (ma, mb) = (mean(a), mean(b));
    let va = variance(a);
    let vb = variance(b);
    let se2 = va / na + vb / nb;
    if se2 <= 0.0 {
        return if ma == mb { 1.0 } else { P_FLOOR };
    }
    let t = (ma - mb) / se2.sqrt();
    let df = se2 * se2
        / ((va / na).powi(2) / (na - 1.0) + (vb / nb).powi(2) / (nb - 1.0));
    t_p_two_sided(t, df)
}

/// One-way ANOVA F-test across groups keyed by dense integer codes.
pub fn oneway_f_p(codes: &[u32], values: &[f64], levels: u32) -> f64 {
    debug_assert_eq!(codes.len(), values.len());
    let n = values.len();
    let l = levels as usize;
    if n < 3 || l < 2 {
        return 1.0;
    }
    let mut count = vec![0usize; l];
    let mut sum = vec![0.0f64; l];
    for (c, v) in codes.iter().zip(values) {
        count[*c as usize] += 1;
        sum[*c as usize] += v;
    }
    let occupied = count.iter().filter(|&&c| c > 0).count();
    if occupied < 2 {
        return 1.0;
    }
    let grand = mean(values);
    let mut ssb = 0.0;
    for g in 0..l {
        if count[g] > 0 {
            let mg = sum[g] / count[g] as f64;
            ssb += count[g] as f64 * (mg - grand) * (mg - grand);
        }
    }
    let mut ssw = 0.0;
    for (c, v) in codes.iter().zip(values) {
        let mg = sum[*c as usize] / count[*c as usize] as f64;
        ssw += (v - mg) * (v - mg);
    }
    let df1 = (occupied - 1) as f64;
    let df2 = (n - occupied) as f64;
    if df2 <= 0.0 {
        return 1.0;
    }
    if ssw <= 0.0 {
        return if ssb > 0.0 { P_FLOOR } else { 1.0 };
    }
    f_p_upper((ssb / df1) / (ssw / df2), df1, df2)
}

/// Ordinary least squares of `y` on the given predictor columns.
#[derive(Debug, Clone)]
pub struct OlsFit {
    pub sse: f64,
    pub rank: usize,
    pub n: usize,
}

/// Solve `y ~ cols` by normal equations with pivot dropping; collinear
/// columns are excluded from the rank. Column count is expected to be small.
pub fn ols(cols: &[&[f64]], y: &[f64]) -> OlsFit {
    let n = y.len();
    let k = cols.len();
    if k == 0 || n == 0 {
        return OlsFit { sse: sse(y), rank: 0, n };
    }
    // X'X and X'y
    let mut xtx = vec![0.0f64; k * k];
    let mut xty = vec![0.0f64; k];
    for a in 0..k {
        for b in a..k {
            let mut s = 0.0;
            for i in 0..n {
                s += cols[a][i] * cols[b][i];
            }
            xtx[a * k + b] = s;
            xtx[b * k + a] = s;
        }
        let mut s = 0.0;
        for i in 0..n {
            s += cols[a][i] * y[i];
        }
        xty[a] = s;
    }
    // Gaussian elimination with partial pivoting; near-zero pivots drop the column.
    let scale: f64 = (0..k).map(|a| xtx[a * k + a].abs()).fold(0.0, f64::max).max(1.0);
    let tol = scale * 1e-12;
    let mut beta = vec![0.0f64; k];
    let mut used = vec![true; k];
    let mut a_mat = xtx.clone();
    let mut b_vec = xty.clone();
    let mut order: Vec<usize> = (0..k).collect();
    let mut rank = 0usize;
    for step in 0..k {
        // pick pivot among remaining rows
        let (mut prow, mut pval) = (step, 0.0f64);
        for r in step..k {
            let v = a_mat[order[r] * k + order[step]].abs();
            if v > pval {
                pval = v;
                prow = r;
            }
        }
        if pval <= tol {
            used[order[step]] = false;
            // zero the column so it contributes nothing
            for r in 0..k {
                a_mat[order[r] * k + order[step]] = 0.0;
            }
            a_mat[order[step] * k + order[step]] = 1.0;
            b_vec[order[step]] = 0.0;
            continue;
        }
        order.swap(step, prow);
        rank += 1;
        let p = order[step];
        for r in (step + 1)..k {
            let q = order[r];
            let factor = a_mat[q * k + p] / a_mat[p * k + p];
            if factor == 0.0 {
                continue;
            }
            for c in step..k {
                let col = order[c];
                a_mat[q * k + col] -= factor * a_mat[p * k + col];
            }
            b_vec[q] -= factor * b_vec[p];
        }
    }
    for step in (0..k).rev() {
        let p = order[step];
        let mut s = b_vec[p];
        for c in (step + 1)..k {
            let col = order[c];
            s -= a_mat[p * k + col] * beta[col];
        }
        beta[p] = if used[p] { s / a_mat[p * k + p] } else { 0.0 };
    }
    let mut rss = 0.0;
    for i in 0..n {
        let mut fit = 0.0;
        for a in 0..k {
            fit += beta[a] * cols[a][i];
        }
        let r = y[i] - fit;
        rss += r * r;
    }
    OlsFit { sse: rss.max(0.0), rank, n }
}

/// F-test of a full model against a nested reduced model.
pub fn nested_f_p(reduced: &OlsFit, full: &OlsFit) -> f64 {
    debug_assert_eq!(reduced.n, full.n);
    let q = full.rank.saturating_sub(reduced.rank) as f64;
    let df2 = full.n as f64 - full.rank as f64;
    if q <= 0.0 || df2 <= 0.0 {
        return 1.0;
    }
    let num = (reduced.sse - full.sse).max(0.0) / q;
    if full.sse <= 0.0 {
        return if num > 0.0 { P_FLOOR } else { 1.0 };
    }
    f_p_upper(num / (full.sse / df2), q, df2)
}

/// Binomial Monte Carlo standard error of a rate estimated from `n` trials.
pub fn binomial_se(rate: f64, n: usize) -> f64 {
    if n == 0 {
        return f64::NAN;
    }
    (rate * (1.0 - rate) / n as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_test_detects_signal_and_ignores_noise() {
        let x: Vec<f64> = (0..50).map(|i| i as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v + 1.0).collect();
        assert!(slope_test_p(&x, &y) <= P_FLOOR);

        let y_flat = vec![3.0; 50];
        assert_eq!(slope_test_p(&x, &y_flat), 1.0);

        let x_flat = vec![1.0; 50];
        assert_eq!(slope_test_p(&x_flat, &y), 1.0);
    }

    #[test]
    fn slope_test_matches_reference_value() {
        // Small fixed case checked against textbook formulas:
        // x = 1..6, y with slope 0.5 and irregular residuals.
        let x = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        let y = [1.1, 1.3, 2.2, 2.1, 3.0, 3.9];
        // b = Sxy/Sxx, t = b / sqrt(rss/df/Sxx); clearly significant slope
        let p = slope_test_p(&x, &y);
        assert!(p > 0.0 && p < 0.01, "p = {p}");
    }

    #[test]
    fn welch_basic() {
        let a = [1.0, 1.1, 0.9, 1.05, 0.95];
        let b = [2.0, 2.1, 1.9, 2.05, 1.95];
        assert!(welch_test_p(&a, &b) < 1e-6);
        assert!(welch_test_p(&a, &a) > 0.99);
    }

    #[test]
    fn oneway_f_groups() {
        let codes = [0u32, 0, 0, 1, 1, 1, 2, 2, 2];
        let strong = [0.0, 0.1, -0.1, 5.0, 5.1, 4.9, 10.0, 10.1, 9.9];
        assert!(oneway_f_p(&codes, &strong, 3) < 1e-6);
        let flat = [1.0; 9];
        assert_eq!(oneway_f_p(&codes, &flat, 3), 1.0);
    }

    #[test]
    fn ols_rank_and_sse() {
        let n = 20;
        let ones = vec![1.0; n];
        let x: Vec<f64> = (0..n).map(|i| i as f64).collect();
        let x2: Vec<f64> = x.iter().map(|v| 2.0 * v).collect(); // collinear
        let y: Vec<f64> = x.iter().map(|v| 3.0 + 0.5 * v).collect();
        let fit = ols(&[&ones, &x, &x2], &y);
        assert_eq!(fit.rank, 2);
        assert!(fit.sse < 1e-18, "sse = {}", fit.sse);
    }

    #[test]
    fn nested_f_detects_interaction() {
        let n = 40;
        let ones = vec![1.0; n];
        let t: Vec<f64> = (0..n).map(|i| (i % 2) as f64).collect();
        let x: Vec<f64> = (0..n).map(|i| (i as f64) / 10.0).collect();
        let tx: Vec<f64> = t.iter().zip(&x).map(|(a, b)| a * b).collect();
        let y: Vec<f64> = (0..n)
            .map(|i| 1.0 + 0.2 * t[i] + 0.1 * x[i] + 2.0 * tx[i] + ((i * 7 % 11) as f64) * 0.01)
            .collect();
        let reduced = ols(&[&ones, &t, &x], &y);
        let full = ols(&[&ones, &t, &x, &tx], &y);
        assert!(nested_f_p(&reduced, &full) < 1e-8);
    }
}
