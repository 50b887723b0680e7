//! Least-squares line fit used for decay-rate extraction.

pub(crate) struct LineFit {
    pub slope: f64,
    #[allow(dead_code)]
    pub intercept: f64,
    pub r_squared: f64,
}

/// Ordinary least squares of y against x. Caller guarantees xs.len() ==
/// ys.len() >= 2 with non-degenerate xs. Constant data fits exactly with
/// slope 0, reported as r_squared = 1.
pub(crate) fn fit_line(xs: &[f64], ys: &[f64]) -> LineFit {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let mut ss_res = 0.0;
    let mut ss_tot = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        let p = slope * x + intercept;
        ss_res += (y - p) * (y - p);
        ss_tot += (y - my) * (y - my);
    }
    let r_squared = if ss_tot == 0.0 {
        1.0
    } else {
        1.0 - ss_res / ss_tot
    };
    LineFit {
        slope,
        intercept,
        r_squared,
    }
}
