//! Number formatting shared by the human-readable renderers.

/// Significant digits kept in expression output.
const SIG_DIGITS: usize = 12;

/// Rounds to twelve significant digits and prints the shortest decimal that
/// reproduces the rounded value, so `0.12000000000000001` prints as `0.12`.
pub(crate) fn fmt_num(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    let rounded: f64 = format!("{:.*e}", SIG_DIGITS - 1, v).parse().unwrap_or(v);
    if rounded == 0.0 {
        return "0".to_string();
    }
    let s = rounded.to_string();
    if s.len() > 24 {
        // very large or small magnitudes
        let e = format!("{rounded:e}");
        return e;
    }
    s
}

pub(crate) fn is_negative_display(v: f64) -> bool {
    v < 0.0 && fmt_num(v) != "0"
}

/// 17 significant digits, lossless for `f64`.
pub(crate) fn fmt_full(v: f64) -> String {
    format!("{v:.16e}")
}

/// `[a, b, c]` with [`fmt_num`] entries.
pub(crate) fn fmt_vec(values: &[f64]) -> String {
    let items: Vec<String> = values.iter().map(|&v| fmt_num(v)).collect();
    format!("[{}]", items.join(", "))
}
