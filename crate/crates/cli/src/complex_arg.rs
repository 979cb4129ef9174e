use num_complex::Complex64;

/// Parses `re`, `re+imi`, `re-imi`, `imi` or `re,im`.
pub fn parse_complex(raw: &str) -> Result<Complex64, String> {
    let s: String = raw.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("cannot parse {raw:?} as a complex number (use re, re+imi or re,im)");
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((re, im)) = s.split_once(',') {
        let re = re.parse::<f64>().map_err(|_| bad())?;
        let im = im.parse::<f64>().map_err(|_| bad())?;
        return finite(Complex64::new(re, im)).ok_or_else(bad);
    }
    let Some(body) = s.strip_suffix('i').or_else(|| s.strip_suffix('j')) else {
        let re = s.parse::<f64>().map_err(|_| bad())?;
        return finite(Complex64::new(re, 0.0)).ok_or_else(bad);
    };
    // split at the last sign that is not the leading sign or part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => other.parse::<f64>().map_err(|_| bad())?,
    };
    let re = re.parse::<f64>().map_err(|_| bad())?;
    finite(Complex64::new(re, im)).ok_or_else(bad)
}

fn finite(z: Complex64) -> Option<Complex64> {
    z.is_finite().then_some(z)
}
