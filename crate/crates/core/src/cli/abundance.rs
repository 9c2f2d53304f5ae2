//! Observed abundance data: CSV rows `species,count` (optionally under a
//! `species,count` header) or one bare count per line.

use std::collections::HashMap;
use std::io::Read;

use csv::{ReaderBuilder, Trim};
use thiserror::Error;

use crate::conditional::ObservedSample;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct AbundanceError {
    pub line: u64,
    pub message: String,
}

fn fail(line: u64, message: impl Into<String>) -> AbundanceError {
    AbundanceError {
        line,
        message: message.into(),
    }
}

fn parse_count(field: &str, line: u64) -> Result<usize, AbundanceError> {
    match field.parse::<i64>() {
        Ok(c) if c >= 1 => Ok(c as usize),
        Ok(c) => Err(fail(line, format!("count must be positive, got {c}"))),
        Err(_) => Err(fail(line, format!("malformed count '{field}'"))),
    }
}

/// Multiplicities in file order.
pub fn parse_abundance<R: Read>(reader: R) -> Result<ObservedSample, AbundanceError> {
    let mut rdr = ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(Trim::All)
        .from_reader(reader);
    let mut counts = Vec::new();
    let mut seen: HashMap<String, u64> = HashMap::new();
    for (index, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            fail(line, e.to_string())
        })?;
        let line = record.position().map_or(index as u64 + 1, |p| p.line());
        match record.len() {
            1 if record[0].is_empty() => continue,
            1 => counts.push(parse_count(&record[0], line)?),
            2 => {
                let (id, count) = (&record[0], &record[1]);
                if index == 0 && id.eq_ignore_ascii_case("species") && count.eq_ignore_ascii_case("count") {
                    continue;
                }
                if id.is_empty() {
                    return Err(fail(line, "empty species id"));
                }
                if let Some(first) = seen.insert(id.to_string(), line) {
                    return Err(fail(
                        line,
                        format!("duplicate species id '{id}' (first on line {first})"),
                    ));
                }
                counts.push(parse_count(count, line)?);
            }
            n => {
                return Err(fail(
                    line,
                    format!("expected 'species,count' or a bare count, found {n} fields"),
                ))
            }
        }
    }
    if counts.is_empty() {
        return Err(fail(1, "no abundance records"));
    }
    ObservedSample::new(counts).map_err(|e| fail(1, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<ObservedSample, AbundanceError> {
        parse_abundance(text.as_bytes())
    }

    #[test]
    fn accepted_forms() {
        let s = parse("a,3\nb,1\n").unwrap();
        assert_eq!((s.multiplicities(), s.n(), s.j()), (&[3, 1][..], 4, 2));
        let s = parse("2\n2\n1\n").unwrap();
        assert_eq!((s.multiplicities(), s.n(), s.j()), (&[2, 2, 1][..], 5, 3));
        let s = parse("species,count\nx, 4\n\ny,2\n").unwrap();
        assert_eq!(s.multiplicities(), &[4, 2]);
    }

    #[test]
    fn rejected_rows() {
        assert_eq!(parse("a,0\n").unwrap_err().line, 1);
        assert_eq!(parse("a,2\nb,-1\n").unwrap_err().line, 2);
        let dup = parse("a,2\nb,1\na,4\n").unwrap_err();
        assert_eq!(dup.line, 3);
        assert!(dup.message.contains("duplicate"));
        assert_eq!(parse("a,2\nb,x\n").unwrap_err().line, 2);
        assert_eq!(parse("1\n2.5\n").unwrap_err().line, 2);
        assert_eq!(parse("a,1,2\n").unwrap_err().line, 1);
        assert!(parse("").is_err());
        assert!(parse("species,count\n").is_err());
    }
}
