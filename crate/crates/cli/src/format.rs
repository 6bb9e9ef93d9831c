/// Formats `v` in positional decimal notation, rounded to 12 significant
/// digits with trailing zeros dropped.
///
/// Zero prints as `0`, non-finite values as `nan`, `inf` and `-inf`.
pub fn fmt_num(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if v.is_nan() {
        return "nan".to_string();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    // Scientific formatting rounds first, so the exponent accounts for carries.
    let sci = format!("{:.11e}", v);
    let exp: i32 = sci[sci.find('e').expect("exponent") + 1..]
        .parse()
        .expect("integer exponent");
    let decimals = (11 - exp).max(0) as usize;
    let s = format!("{:.*}", decimals, v);
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}
