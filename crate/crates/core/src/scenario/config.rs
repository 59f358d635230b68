//! Line-oriented `section.key = value` text with `#` comments.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub key: String,
    pub value: String,
    /// 1-based source line.
    pub line: usize,
}

/// Splits config text into entries in source order. Duplicate keys and
/// lines without `=` are rejected with their line number.
pub fn parse_entries(text: &str) -> Result<Vec<Entry>> {
    let mut out: Vec<Entry> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| Error::Parse {
            line,
            msg: format!("expected `key = value`, got `{content}`"),
        })?;
        let key = key.trim();
        if key.is_empty() || key.contains(char::is_whitespace) {
            return Err(Error::Parse {
                line,
                msg: format!("invalid key `{key}`"),
            });
        }
        if let Some(prev) = out.iter().find(|e| e.key == key) {
            return Err(Error::Parse {
                line,
                msg: format!("duplicate key `{key}` (first set on line {})", prev.line),
            });
        }
        out.push(Entry {
            key: key.to_string(),
            value: value.trim().to_string(),
            line,
        });
    }
    Ok(out)
}

pub fn parse_f64(value: &str, line: usize) -> Result<f64> {
    let v: f64 = value.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("expected a number, got `{value}`"),
    })?;
    if !v.is_finite() {
        return Err(Error::Parse {
            line,
            msg: format!("expected a finite number, got `{value}`"),
        });
    }
    Ok(v)
}

pub fn parse_usize(value: &str, line: usize) -> Result<usize> {
    value.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("expected a non-negative integer, got `{value}`"),
    })
}

pub fn parse_u64(value: &str, line: usize) -> Result<u64> {
    value.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("expected a 64-bit unsigned integer, got `{value}`"),
    })
}

pub fn parse_bool(value: &str, line: usize) -> Result<bool> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(Error::Parse {
            line,
            msg: format!("expected true or false, got `{value}`"),
        }),
    }
}

pub fn parse_list<T>(
    value: &str,
    line: usize,
    item: impl Fn(&str, usize) -> Result<T>,
) -> Result<Vec<T>> {
    if value.is_empty() {
        return Ok(Vec::new());
    }
    value.split(',').map(|s| item(s.trim(), line)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entries_and_comments() {
        let e = parse_entries("# header\n\ncore.b_prev = 1.574  # monitoring\nmc.horizons=1, 2\n")
            .unwrap();
        assert_eq!(e.len(), 2);
        assert_eq!(
            (e[0].key.as_str(), e[0].value.as_str(), e[0].line),
            ("core.b_prev", "1.574", 3)
        );
        assert_eq!(
            parse_list(&e[1].value, 4, parse_f64).unwrap(),
            vec![1.0, 2.0]
        );
    }

    #[test]
    fn errors_carry_lines() {
        assert!(matches!(
            parse_entries("a = 1\nbroken\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_entries("a = 1\na = 2\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_f64("0.0x2", 7),
            Err(Error::Parse { line: 7, .. })
        ));
        assert!(parse_f64("inf", 1).is_err());
        assert!(parse_bool("yes", 1).is_err());
    }
}
