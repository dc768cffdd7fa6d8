//! Exact rational helpers shared by the census and the harness.

use num_rational::Ratio;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RationalError {
    #[error("malformed rational {0:?}: expected \"num/den\" or an integer")]
    Malformed(String),
    #[error("decimal {input:?} is not accepted because decimals are not exact; write it as \"{hint}\"")]
    Decimal { input: String, hint: String },
    #[error("rational {0:?} has a zero denominator")]
    ZeroDenominator(String),
}

/// Parses `"num/den"` or a bare integer into a reduced non-negative rational.
///
/// Decimal literals are rejected with a hint naming the equivalent fraction.
pub fn parse_ratio(input: &str) -> Result<Ratio<u64>, RationalError> {
    let text = input.trim();
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    if let Some((num, den)) = text.split_once('/') {
        let (num, den) = (num.trim(), den.trim());
        if !digits(num) || !digits(den) {
            return Err(RationalError::Malformed(input.to_string()));
        }
        let num: u64 = num.parse().map_err(|_| RationalError::Malformed(input.to_string()))?;
        let den: u64 = den.parse().map_err(|_| RationalError::Malformed(input.to_string()))?;
        if den == 0 {
            return Err(RationalError::ZeroDenominator(input.to_string()));
        }
        return Ok(Ratio::new(num, den));
    }
    if digits(text) {
        let num: u64 = text.parse().map_err(|_| RationalError::Malformed(input.to_string()))?;
        return Ok(Ratio::from_integer(num));
    }
    if let Some(hint) = decimal_hint(text) {
        return Err(RationalError::Decimal {
            input: input.to_string(),
            hint,
        });
    }
    Err(RationalError::Malformed(input.to_string()))
}

fn decimal_hint(text: &str) -> Option<String> {
    let (int, frac) = text.split_once('.')?;
    if !(int.bytes().all(|b| b.is_ascii_digit()) && frac.bytes().all(|b| b.is_ascii_digit())) {
        return None;
    }
    if int.is_empty() && frac.is_empty() || frac.len() > 18 {
        return None;
    }
    let den = 10u64.checked_pow(frac.len() as u32)?;
    let int: u64 = if int.is_empty() { 0 } else { int.parse().ok()? };
    let frac: u64 = if frac.is_empty() { 0 } else { frac.parse().ok()? };
    let num = int.checked_mul(den)?.checked_add(frac)?;
    Some(format_ratio(&Ratio::new(num, den)))
}

/// `"num/den"`, always with an explicit denominator.
pub fn format_ratio(r: &Ratio<u64>) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Truncated decimal expansion of `num/den` with `digits` fractional digits.
pub fn decimal_string(num: u128, den: u128, digits: usize) -> String {
    assert!(den > 0, "zero denominator");
    let mut out = (num / den).to_string();
    let mut rem = num % den;
    if digits > 0 {
        out.push('.');
        for _ in 0..digits {
            rem *= 10;
            out.push(char::from(b'0' + (rem / den) as u8));
            rem %= den;
        }
    }
    out
}
