//! Line-oriented importer for length-spectrum listings.
//!
//! Each data line holds `multiplicity length holonomy [self_inverse]`,
//! separated by whitespace. Everything after `#` is a comment, except that a
//! comment of the form `# key: value` (or `# key = value`) with key one of
//! `name`, `volume`, `betti1`, `cutoff` sets dataset metadata.

use std::f64::consts::PI;

use super::{expand_primitives, wrap_angle, PrimitiveGeodesicRecord, SpectrumDataset};
use crate::error::{Error, Result};

/// Metadata overrides and the self-inverse policy for text imports.
///
/// Values given here take precedence over header directives in the file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SnappyImport {
    pub name: Option<String>,
    pub volume: Option<f64>,
    pub betti1: Option<u32>,
    pub cutoff: Option<f64>,
    /// Used for lines without an explicit fourth column. Without it such
    /// lines are rejected, since pairing cannot be inferred from `(ℓ, θ)`.
    pub assume_self_inverse: Option<bool>,
}

#[derive(Default)]
struct Header {
    name: Option<String>,
    volume: Option<f64>,
    betti1: Option<u32>,
    cutoff: Option<f64>,
}

fn parse_bool(token: &str) -> Option<bool> {
    match token.to_ascii_lowercase().as_str() {
        "1" | "true" | "yes" | "y" | "t" => Some(true),
        "0" | "false" | "no" | "n" | "f" => Some(false),
        _ => None,
    }
}

fn parse_num<T: std::str::FromStr>(token: &str, what: &str, line: usize) -> Result<T> {
    token
        .parse()
        .map_err(|_| Error::Parse(format!("line {line}: cannot parse {what} from `{token}`")))
}

fn parse_directive(comment: &str, header: &mut Header, line: usize) -> Result<()> {
    let Some((key, value)) = comment.split_once([':', '=']) else {
        return Ok(());
    };
    let value = value.trim();
    match key.trim().to_ascii_lowercase().as_str() {
        "name" => header.name = Some(value.to_string()),
        "volume" => header.volume = Some(parse_num(value, "volume", line)?),
        "betti1" => header.betti1 = Some(parse_num(value, "betti1", line)?),
        "cutoff" => header.cutoff = Some(parse_num(value, "cutoff", line)?),
        _ => {}
    }
    Ok(())
}

/// Parses a text listing of primitive geodesics and expands it into a
/// dataset of good hyperbolic classes.
pub fn parse_snappy_text(text: &str, import: &SnappyImport) -> Result<SpectrumDataset> {
    let mut header = Header::default();
    let mut records = Vec::new();
    let mut explicit_flags = 0usize;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let (data, comment) = match raw.split_once('#') {
            Some((d, c)) => (d, Some(c)),
            None => (raw, None),
        };
        if let Some(c) = comment {
            parse_directive(c, &mut header, line)?;
        }
        let cols: Vec<&str> = data.split_whitespace().collect();
        if cols.is_empty() {
            continue;
        }
        if !(3..=4).contains(&cols.len()) {
            return Err(Error::Parse(format!(
                "line {line}: expected `multiplicity length holonomy [self_inverse]`, found {} columns",
                cols.len()
            )));
        }
        let multiplicity: u32 = parse_num(cols[0], "multiplicity", line)?;
        let length: f64 = parse_num(cols[1], "length", line)?;
        let holonomy: f64 = parse_num(cols[2], "holonomy", line)?;
        let self_inverse = match cols.get(3) {
            Some(tok) => {
                explicit_flags += 1;
                parse_bool(tok).ok_or_else(|| {
                    Error::Parse(format!("line {line}: cannot parse self-inverse flag `{tok}`"))
                })?
            }
            None => import.assume_self_inverse.ok_or_else(|| {
                Error::Validation(format!(
                    "line {line}: no self-inverse flag and no global self-inverse policy given"
                ))
            })?,
        };
        let holonomy = wrap_angle(holonomy);
        if !(holonomy > -PI && holonomy <= PI) {
            return Err(Error::Parse(format!("line {line}: holonomy is not finite")));
        }
        records.push(PrimitiveGeodesicRecord {
            length,
            holonomy,
            multiplicity,
            self_inverse,
        });
    }

    let volume = import
        .volume
        .or(header.volume)
        .ok_or(Error::MissingMetadata("volume"))?;
    let betti1 = import
        .betti1
        .or(header.betti1)
        .ok_or(Error::MissingMetadata("betti1"))?;
    let cutoff = import
        .cutoff
        .or(header.cutoff)
        .ok_or(Error::MissingMetadata("cutoff"))?;
    let name = import.name.clone().or(header.name).unwrap_or_default();

    let classes = expand_primitives(&records, cutoff)?;
    let policy = match (explicit_flags, import.assume_self_inverse) {
        (n, _) if n == records.len() => "per-record".to_string(),
        (_, Some(v)) => format!("assume-self-inverse={v}"),
        _ => unreachable!("missing flags are rejected above"),
    };
    Ok(SpectrumDataset::new(name, volume, betti1, cutoff, classes)?
        .with_provenance("format", "snappy-text")
        .with_provenance("self_inverse_policy", policy))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::ClassKind;

    #[test]
    fn single_geodesic_with_header() {
        let text = "# name: toy\n# volume: 2.5\n# betti1: 0\n# cutoff: 8\n1 3.0 1.0 false\n";
        let ds = parse_snappy_text(text, &SnappyImport::default()).unwrap();
        assert_eq!(ds.name(), "toy");
        let lengths: Vec<f64> = ds.classes().iter().map(|e| e.length).collect();
        assert_eq!(lengths, vec![3.0, 6.0]);
        for e in ds.classes() {
            assert_eq!(e.weight, 3.0);
            assert!(e.inverse_paired);
            assert_eq!(e.kind, ClassKind::GoodHyperbolic);
        }
        assert!((ds.classes()[1].holonomy - 2.0).abs() < 1e-15);
        assert_eq!(ds.provenance()["self_inverse_policy"], "per-record");
    }

    #[test]
    fn overrides_and_policy() {
        let text = "# volume = 1.0\n  2   1.5  -0.25   # trailing comment\n\n";
        let import = SnappyImport {
            volume: Some(3.0),
            betti1: Some(1),
            cutoff: Some(4.0),
            assume_self_inverse: Some(true),
            ..Default::default()
        };
        let ds = parse_snappy_text(text, &import).unwrap();
        assert_eq!(ds.volume(), 3.0);
        assert_eq!(ds.betti1(), 1);
        assert_eq!(ds.classes().len(), 2);
        assert_eq!(ds.classes()[0].multiplicity, 2);
        assert!(!ds.classes()[0].inverse_paired);
        assert_eq!(ds.provenance()["self_inverse_policy"], "assume-self-inverse=true");
    }

    #[test]
    fn missing_policy_is_rejected() {
        let text = "# volume: 1\n# betti1: 0\n# cutoff: 8\n1 3.0 1.0\n";
        assert!(matches!(
            parse_snappy_text(text, &SnappyImport::default()),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn missing_metadata_and_bad_lines() {
        let import = SnappyImport { assume_self_inverse: Some(false), ..Default::default() };
        assert!(matches!(
            parse_snappy_text("# volume: 1\n# betti1: 0\n1 3 1\n", &import),
            Err(Error::MissingMetadata("cutoff"))
        ));
        assert!(matches!(parse_snappy_text("1 3\n", &import), Err(Error::Parse(_))));
        assert!(matches!(parse_snappy_text("x 3 1\n", &import), Err(Error::Parse(_))));
        assert!(matches!(parse_snappy_text("1 3 1 maybe\n", &import), Err(Error::Parse(_))));
    }
}
