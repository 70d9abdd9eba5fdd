use crate::arith::PLocal;

/// Renders a sum of terms `coefficient * factor * factor ...`.
///
/// Grammar: terms separated by `" + "` or `" - "`, a leading `-` on a
/// negative first term, unit coefficients omitted in front of factors,
/// fractional coefficients parenthesised as `(13/7)`, factors joined by `*`.
/// The empty sum renders as `0`.
pub fn render_terms(terms: impl IntoIterator<Item = (PLocal, Vec<String>)>) -> String {
    let mut out = String::new();
    for (c, factors) in terms {
        if c.is_zero() {
            continue;
        }
        let negative = c.is_negative();
        if out.is_empty() {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        let c = c.abs();
        let scalar = if c.is_integer() { c.to_string() } else { format!("({c})") };
        if factors.is_empty() {
            out.push_str(&scalar);
        } else {
            if !c.is_one() {
                out.push_str(&scalar);
                out.push('*');
            }
            out.push_str(&factors.join("*"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// `name`, `name^e` or nothing for exponent zero.
pub(crate) fn power_factor(name: &str, e: usize) -> Option<String> {
    match e {
        0 => None,
        1 => Some(name.to_string()),
        _ => Some(format!("{name}^{e}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grammar() {
        let terms = vec![
            (PLocal::one(), vec!["x".to_string()]),
            (PLocal::new(1, 2), vec!["v1".to_string(), "x^2".to_string()]),
            (PLocal::from(-3), vec!["x^3".to_string()]),
            (PLocal::new(-1, 7), vec![]),
        ];
        assert_eq!(render_terms(terms), "x + (1/2)*v1*x^2 - 3*x^3 - (1/7)");
        assert_eq!(render_terms(vec![(PLocal::from(-1), vec!["x".into()])]), "-x");
        assert_eq!(render_terms(Vec::new()), "0");
    }
}
