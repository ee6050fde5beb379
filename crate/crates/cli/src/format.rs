/// `%.<precision>g`: `precision` significant digits, trailing zeros removed,
/// scientific notation outside `1e-4 ≤ |x| < 10^precision`.
pub fn fmt_g(x: f64, precision: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let p = precision.max(1);
    let sci = format!("{:.*e}", p - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= p as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim(mantissa), exp.abs())
    } else {
        let decimals = (p as i32 - 1 - exp).max(0) as usize;
        trim(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_g() {
        assert_eq!(fmt_g(1.462155051604782, 12), "1.4621550516");
        assert_eq!(fmt_g(1.462155051604782, 13), "1.462155051605");
        assert_eq!(fmt_g(0.5, 12), "0.5");
        assert_eq!(fmt_g(1.0, 6), "1");
        assert_eq!(fmt_g(123456.0, 6), "123456");
        assert_eq!(fmt_g(1234567.0, 6), "1.23457e+06");
        assert_eq!(fmt_g(0.0001, 6), "0.0001");
        assert_eq!(fmt_g(0.00001234, 3), "1.23e-05");
        assert_eq!(fmt_g(-2.5, 3), "-2.5");
        assert_eq!(fmt_g(0.0, 3), "0");
        assert_eq!(fmt_g(f64::INFINITY, 3), "inf");
        assert_eq!(fmt_g(9.9999999, 3), "10");
    }
}
