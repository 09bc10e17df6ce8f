//! Grid syntax for command-line flags.
//!
//! Reals: `a,b,c` or `start:stop:count` (inclusive, evenly spaced).
//! Counts: `a,b,c` or `start:stop` (inclusive).

use crate::config::linspace;

fn parse_list<T: std::str::FromStr>(text: &str) -> Result<Vec<T>, String> {
    text.split(',')
        .map(|part| {
            let part = part.trim();
            part.parse().map_err(|_| format!("cannot parse `{part}`"))
        })
        .collect()
}

pub fn parse_reals(text: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [_] => parse_list(text),
        [start, stop, count] => {
            let start: f64 = start.trim().parse().map_err(|_| format!("bad start `{start}`"))?;
            let stop: f64 = stop.trim().parse().map_err(|_| format!("bad stop `{stop}`"))?;
            let count: usize = count.trim().parse().map_err(|_| format!("bad count `{count}`"))?;
            if count == 0 {
                return Err("range count must be at least 1".into());
            }
            Ok(linspace(start, stop, count))
        }
        _ => Err(format!("expected `a,b,c` or `start:stop:count`, got `{text}`")),
    }
}

pub fn parse_counts(text: &str) -> Result<Vec<usize>, String> {
    match text.split_once(':') {
        None => parse_list(text),
        Some((start, stop)) => {
            let start: usize = start.trim().parse().map_err(|_| format!("bad start `{start}`"))?;
            let stop: usize = stop.trim().parse().map_err(|_| format!("bad stop `{stop}`"))?;
            if stop < start {
                return Err(format!("empty range `{text}`"));
            }
            Ok((start..=stop).collect())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals() {
        assert_eq!(parse_reals("0.5").unwrap(), vec![0.5]);
        assert_eq!(parse_reals("1, 2,3").unwrap(), vec![1.0, 2.0, 3.0]);
        assert_eq!(parse_reals("0:1:5").unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert!(parse_reals("0:1:0").is_err());
        assert!(parse_reals("x").is_err());
        assert!(parse_reals("0:1").is_err());
    }

    #[test]
    fn counts() {
        assert_eq!(parse_counts("0:3").unwrap(), vec![0, 1, 2, 3]);
        assert_eq!(parse_counts("2,5").unwrap(), vec![2, 5]);
        assert!(parse_counts("3:1").is_err());
        assert!(parse_counts("-1").is_err());
    }
}
