//! Parsing of integer and real lists such as `2-5`, `0,3,7`, `0.1,1`.

/// Comma-separated items, each a single value or an inclusive `lo-hi`
/// range. Duplicates are dropped and the result is sorted.
pub fn parse_int_list(s: &str) -> Result<Vec<u64>, String> {
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim) {
        if item.is_empty() {
            return Err(format!("empty item in {s:?}"));
        }
        let (lo, hi) = match item.split_once('-') {
            Some((a, b)) => (parse_one(a)?, parse_one(b)?),
            None => {
                let v = parse_one(item)?;
                (v, v)
            }
        };
        if lo > hi {
            return Err(format!("empty range {item:?}"));
        }
        if hi - lo > 1_000_000 {
            return Err(format!("range {item:?} is too long"));
        }
        out.extend(lo..=hi);
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

fn parse_one(s: &str) -> Result<u64, String> {
    s.trim()
        .parse()
        .map_err(|_| format!("not a non-negative integer: {s:?}"))
}

/// Comma-separated finite reals, sorted ascending with duplicates removed.
pub fn parse_real_list(s: &str) -> Result<Vec<f64>, String> {
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim) {
        let v: f64 = item.parse().map_err(|_| format!("not a number: {item:?}"))?;
        if !v.is_finite() {
            return Err(format!("not finite: {item:?}"));
        }
        out.push(v);
    }
    out.sort_by(f64::total_cmp);
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_and_lists() {
        assert_eq!(parse_int_list("2-4").unwrap(), vec![2, 3, 4]);
        assert_eq!(parse_int_list("7,1-2,2").unwrap(), vec![1, 2, 7]);
        assert!(parse_int_list("4-2").is_err());
        assert!(parse_int_list("a").is_err());
        assert!(parse_int_list("1,,2").is_err());
    }

    #[test]
    fn reals() {
        assert_eq!(parse_real_list("1, 0.1,0").unwrap(), vec![0.0, 0.1, 1.0]);
        assert!(parse_real_list("nan").is_err());
    }
}
