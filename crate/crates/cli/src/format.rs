/// Fixed 9-significant-digit rendering used for every numeric CSV cell.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0.00000000".into();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        // rounding may carry into a new leading digit
        let digits = s.chars().filter(|c| c.is_ascii_digit()).count();
        let leading = s
            .trim_start_matches('-')
            .chars()
            .take_while(|&c| c == '0' || c == '.')
            .filter(|c| c.is_ascii_digit())
            .count();
        if digits - leading > 9 && decimals > 0 {
            return format!("{x:.prec$}", prec = decimals - 1);
        }
        s
    } else {
        format!("{x:.8e}")
    }
}

pub fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(num(1.0), "1.00000000");
        assert_eq!(num(0.5 * 3f64.log2()), "0.792481250");
        assert_eq!(num(-12.5), "-12.5000000");
        assert_eq!(num(123456789.4), "123456789");
        assert_eq!(num(9.999999999), "10.0000000");
        assert_eq!(num(2.5e-7), "2.50000000e-7");
        assert_eq!(num(0.0), "0.00000000");
        assert_eq!(num(f64::NAN), "NaN");
        assert_eq!(opt(None), "");
    }
}
