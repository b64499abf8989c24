//! Number formatting shared by the textual renderings.

/// `v` rounded to `digits` significant digits, printed in the shortest form
/// that reads back as the rounded value (`-5`, `35.5`, `0.434258545911`).
pub fn significant(v: f64, digits: usize) -> String {
    if !v.is_finite() {
        return infinite(v);
    }
    let rounded: f64 = format!("{:.*e}", digits.saturating_sub(1), v)
        .parse()
        .expect("formatted float parses");
    // avoid "-0"
    format!("{}", if rounded == 0.0 { 0.0 } else { rounded })
}

/// Round-trip representation with 17 significant digits.
pub fn round_trip(v: f64) -> String {
    if !v.is_finite() {
        return infinite(v);
    }
    format!("{v:.16e}")
}

fn infinite(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v > 0.0 {
        "+inf".into()
    } else {
        "-inf".into()
    }
}
