//! Pioneer degree samples and their CSV form.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One pioneer's `(total degree, transmitter degree)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DegreePair {
    pub degree: u32,
    pub transmitter: u32,
}

impl DegreePair {
    pub fn new(degree: u32, transmitter: u32) -> Result<Self> {
        if transmitter > degree {
            return Err(Error::Domain(format!(
                "transmitter degree {transmitter} exceeds degree {degree}"
            )));
        }
        Ok(Self { degree, transmitter })
    }

    pub fn receiver(&self) -> u32 {
        self.degree - self.transmitter
    }
}

/// Non-empty list of degree pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeSample {
    pairs: Vec<DegreePair>,
}

impl DegreeSample {
    pub fn new(pairs: Vec<DegreePair>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::EmptySample);
        }
        Ok(Self { pairs })
    }

    /// Builds from raw `(degree, transmitter)` tuples, validating each.
    pub fn from_tuples<I: IntoIterator<Item = (u32, u32)>>(tuples: I) -> Result<Self> {
        let pairs = tuples
            .into_iter()
            .map(|(d, t)| DegreePair::new(d, t))
            .collect::<Result<Vec<_>>>()?;
        Self::new(pairs)
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[DegreePair] {
        &self.pairs
    }

    pub fn iter(&self) -> impl Iterator<Item = &DegreePair> {
        self.pairs.iter()
    }

    /// Distinct pairs with multiplicities, sorted.
    pub fn grouped(&self) -> Vec<(DegreePair, u64)> {
        let mut sorted = self.pairs.clone();
        sorted.sort_unstable();
        let mut out: Vec<(DegreePair, u64)> = Vec::new();
        for p in sorted {
            match out.last_mut() {
                Some((q, c)) if *q == p => *c += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// Reads `degree,transmitter_degree` rows. Line numbers in errors count
    /// the header as line 1.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let headers = rdr.headers()?.clone();
        if headers.len() != 2 || &headers[0] != "degree" || &headers[1] != "transmitter_degree" {
            return Err(Error::BadRow {
                line: 1,
                message: format!("expected header `degree,transmitter_degree`, got `{}`", headers.iter().collect::<Vec<_>>().join(",")),
            });
        }
        let mut pairs = Vec::new();
        for record in rdr.records() {
            let record = record.map_err(|e| {
                let line = e.position().map(|p| p.line()).unwrap_or(0);
                Error::BadRow { line, message: e.to_string() }
            })?;
            let line = record.position().map(|p| p.line()).unwrap_or(0);
            let field = |i: usize, name: &str| -> Result<u32> {
                record
                    .get(i)
                    .ok_or_else(|| Error::BadRow { line, message: format!("missing {name}") })?
                    .parse::<u32>()
                    .map_err(|e| Error::BadRow { line, message: format!("{name}: {e}") })
            };
            let degree = field(0, "degree")?;
            let transmitter = field(1, "transmitter_degree")?;
            if transmitter > degree {
                return Err(Error::BadRow {
                    line,
                    message: format!("transmitter_degree {transmitter} exceeds degree {degree}"),
                });
            }
            pairs.push(DegreePair { degree, transmitter });
        }
        Self::new(pairs)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["degree", "transmitter_degree"])?;
        for p in &self.pairs {
            w.write_record([p.degree.to_string(), p.transmitter.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}
