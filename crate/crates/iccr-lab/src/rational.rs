use iccr_core::lda_bounds::Rational;

const MAX_FRACTION_DIGITS: usize = 6;

/// Parses `p/q`, an integer, or a decimal with at most six fractional digits
/// into an exact rational. `0.4` becomes `2/5`.
pub fn parse_rational(text: &str) -> Result<Rational, String> {
    let t = text.trim();
    if let Some((p, q)) = t.split_once('/') {
        let p = parse_int(p, text)?;
        let q = parse_int(q, text)?;
        if q == 0 {
            return Err(format!("zero denominator in {text:?}"));
        }
        return Ok(Rational::new(p, q));
    }
    let (sign, body) = match t.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, t.strip_prefix('+').unwrap_or(t)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(format!("malformed number {text:?}"));
    }
    if !(whole.bytes().all(|b| b.is_ascii_digit()) && frac.bytes().all(|b| b.is_ascii_digit())) {
        return Err(format!("malformed number {text:?}"));
    }
    if frac.len() > MAX_FRACTION_DIGITS {
        return Err(format!("{text:?} has more than {MAX_FRACTION_DIGITS} fractional digits"));
    }
    let scale = 10i64.pow(frac.len() as u32);
    let digits = format!("{whole}{frac}");
    let n: i64 = if digits.is_empty() { 0 } else { digits.parse().map_err(|_| format!("{text:?} is out of range"))? };
    Ok(Rational::new(sign * n, scale))
}

fn parse_int(s: &str, text: &str) -> Result<i64, String> {
    let s = s.trim();
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("malformed rational {text:?}"));
    }
    s.parse().map_err(|_| format!("{text:?} is out of range"))
}
