//! Text formats.
//!
//! A partition is written `{1,4|2|3,5}`: elements ascending inside a block,
//! blocks ordered by least element, `|` between blocks. The empty partial
//! partition is `{}`.
//!
//! A family file is a header line `n=<n> k=<k>` followed by one partition per
//! line. Blank lines and lines starting with `#` are ignored.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::partition::{Block, Family, GroundSet, Partition};

/// Parses the partition text format. The result may be partial.
pub fn parse_partition(ground: GroundSet, s: &str) -> Result<Partition> {
    let s = s.trim();
    let inner = s
        .strip_prefix('{')
        .and_then(|r| r.strip_suffix('}'))
        .ok_or_else(|| Error::Parse(format!("expected braces around {s:?}")))?;
    if inner.trim().is_empty() {
        return Ok(Partition::empty(ground));
    }
    let mut blocks = Vec::new();
    for part in inner.split('|') {
        let mut elements = Vec::new();
        for tok in part.split(',') {
            let e: usize = tok
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad element {tok:?} in {s:?}")))?;
            if e == 0 || e > ground.n() {
                return Err(Error::Parse(format!(
                    "element {e} outside [{}]",
                    ground.n()
                )));
            }
            elements.push(e);
        }
        blocks.push(Block::from_elements(elements)?);
    }
    Partition::partial(ground, blocks)
}

/// Parses a full `k`-partition.
pub fn parse_full_partition(ground: GroundSet, k: usize, s: &str) -> Result<Partition> {
    let p = parse_partition(ground, s)?;
    if p.len() != k || !p.is_full() {
        return Err(Error::Parse(format!(
            "{s:?} is not a full {k}-partition of [{}]",
            ground.n()
        )));
    }
    Ok(p)
}

fn parse_header(line: &str) -> Result<(usize, usize)> {
    let mut n = None;
    let mut k = None;
    for tok in line.split_whitespace() {
        if let Some(v) = tok.strip_prefix("n=") {
            n = v.parse().ok();
        } else if let Some(v) = tok.strip_prefix("k=") {
            k = v.parse().ok();
        }
    }
    match (n, k) {
        (Some(n), Some(k)) => Ok((n, k)),
        _ => Err(Error::Parse(format!(
            "bad family header {line:?}, expected `n=<n> k=<k>`"
        ))),
    }
}

pub fn read_family<R: BufRead>(reader: R) -> Result<Family> {
    let mut lines = reader
        .lines()
        .map(|l| l.map_err(Error::from))
        .filter(|l| !matches!(l, Ok(s) if s.trim().is_empty() || s.trim_start().starts_with('#')));
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty family file".into()))??;
    let (n, k) = parse_header(&header)?;
    let ground = GroundSet::new(n)?;
    let mut members = Vec::new();
    for line in lines {
        members.push(parse_full_partition(ground, k, &line?)?);
    }
    Family::new(ground, k, members)
}

pub fn write_family<W: Write>(mut w: W, fam: &Family) -> Result<()> {
    writeln!(w, "n={} k={}", fam.ground().n(), fam.k())?;
    for p in fam {
        writeln!(w, "{p}")?;
    }
    Ok(())
}

pub fn family_to_string(fam: &Family) -> String {
    let mut buf = Vec::new();
    write_family(&mut buf, fam).expect("writing to memory");
    String::from_utf8(buf).expect("ascii")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::enumerate_partitions;

    #[test]
    fn partition_text_roundtrip() {
        let ground = GroundSet::new(5).unwrap();
        let p = parse_partition(ground, "{3,5|1,4|2}").unwrap();
        assert_eq!(p.to_string(), "{1,4|2|3,5}");
        assert_eq!(parse_partition(ground, "{}").unwrap().to_string(), "{}");
        assert!(parse_partition(ground, "{1,2|2}").is_err());
        assert!(parse_partition(ground, "1,2").is_err());
        assert!(parse_partition(ground, "{0}").is_err());
        assert!(parse_full_partition(ground, 2, "{1,2|3}").is_err());
    }

    #[test]
    fn family_file_roundtrip() {
        let ground = GroundSet::new(5).unwrap();
        let fam = Family::new(ground, 3, enumerate_partitions(ground, 3, 100).unwrap()).unwrap();
        let text = family_to_string(&fam);
        assert!(text.starts_with("n=5 k=3\n"));
        let back = read_family(text.as_bytes()).unwrap();
        assert_eq!(back, fam);
    }

    #[test]
    fn family_file_errors() {
        assert!(read_family("".as_bytes()).is_err());
        assert!(read_family("n=4\n{1,2|3,4}\n".as_bytes()).is_err());
        assert!(read_family("n=4 k=2\n{1,2|3}\n".as_bytes()).is_err());
        let f = read_family("# comment\nn=4 k=2\n\n{1,2|3,4}\n".as_bytes()).unwrap();
        assert_eq!(f.len(), 1);
    }
}
