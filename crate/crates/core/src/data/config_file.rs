//! Flat `key = value` configuration files. Blank lines and lines starting
//! with `#` are ignored.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigEntry {
    pub key: String,
    pub value: String,
    pub line: usize,
}

pub fn parse_config(text: &str) -> Result<Vec<ConfigEntry>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Format(format!("config line {}: expected key=value, got {line:?}", i + 1)));
        };
        let key = key.trim();
        if key.is_empty() {
            return Err(Error::Format(format!("config line {}: empty key", i + 1)));
        }
        out.push(ConfigEntry { key: key.to_string(), value: value.trim().to_string(), line: i + 1 });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_reports_lines() {
        let e = parse_config("# run\nepochs = 3\n\n L_q=4 \nmilestones=1,2\n").unwrap();
        assert_eq!(e.len(), 3);
        assert_eq!((e[1].key.as_str(), e[1].value.as_str(), e[1].line), ("L_q", "4", 4));
        assert!(parse_config("epochs 3").is_err());
        assert!(parse_config("=3").is_err());
    }
}
