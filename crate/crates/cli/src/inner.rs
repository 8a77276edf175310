//! Two-column `(x, v)` tables for the potential floor inside the well.

use std::io::Read;
use std::path::Path;

use anyhow::{bail, Context, Result};
use conformable_wkb::RealFunction;

/// Piecewise-linear interpolant through strictly increasing sample points.
#[derive(Debug, Clone, PartialEq)]
pub struct InnerTable {
    xs: Vec<f64>,
    vs: Vec<f64>,
}

impl InnerTable {
    pub fn from_path(path: &Path) -> Result<Self> {
        let file =
            std::fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
        Self::from_reader(file).with_context(|| format!("in {}", path.display()))
    }

    /// Reads `x,v` rows. A first row that does not parse as numbers is taken as a header.
    pub fn from_reader(reader: impl Read) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .flexible(true)
            .from_reader(reader);
        let (mut xs, mut vs) = (Vec::new(), Vec::new());
        for (i, record) in rdr.records().enumerate() {
            let record = record?;
            let line = record.position().map_or(i as u64 + 1, |p| p.line());
            if record.len() != 2 {
                bail!(
                    "line {line}: expected 2 columns (x, v), found {}",
                    record.len()
                );
            }
            let parsed = (record[0].parse::<f64>(), record[1].parse::<f64>());
            let (x, v) = match parsed {
                (Ok(x), Ok(v)) => (x, v),
                _ if i == 0 => continue,
                _ => bail!(
                    "line {line}: cannot parse '{}', '{}' as numbers",
                    &record[0],
                    &record[1]
                ),
            };
            if !(x.is_finite() && v.is_finite()) {
                bail!("line {line}: values must be finite");
            }
            if let Some(&prev) = xs.last() {
                if x <= prev {
                    bail!("line {line}: x = {x} does not increase (previous {prev})");
                }
            }
            xs.push(x);
            vs.push(v);
        }
        if xs.len() < 2 {
            bail!(
                "inner-potential table needs at least 2 rows, found {}",
                xs.len()
            );
        }
        Ok(Self { xs, vs })
    }

    /// Checks that the table spans the well `[0, L]`.
    pub fn check_covers(&self, length: f64) -> Result<()> {
        let (lo, hi) = (self.xs[0], *self.xs.last().expect("nonempty"));
        if lo > 0.0 || hi < length {
            bail!("inner-potential table spans [{lo}, {hi}] but the well is [0, {length}]");
        }
        Ok(())
    }

    pub fn value(&self, x: f64) -> f64 {
        let i = self
            .xs
            .partition_point(|&t| t <= x)
            .clamp(1, self.xs.len() - 1);
        let (x0, x1) = (self.xs[i - 1], self.xs[i]);
        let t = (x - x0) / (x1 - x0);
        self.vs[i - 1] + t * (self.vs[i] - self.vs[i - 1])
    }

    pub fn into_function(self) -> RealFunction {
        let (lo, hi) = (self.xs[0], *self.xs.last().expect("nonempty"));
        RealFunction::new(move |x| self.value(x)).on_domain(lo, hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_interpolates() {
        let t = InnerTable::from_reader("x,v\n0,0\n0.5,1\n1,0\n".as_bytes()).unwrap();
        assert_eq!(t.value(0.25), 0.5);
        assert_eq!(t.value(0.75), 0.5);
        assert_eq!(t.value(1.0), 0.0);
        t.check_covers(1.0).unwrap();
        assert!(t.check_covers(2.0).is_err());
    }

    #[test]
    fn reports_line_numbers() {
        let err = InnerTable::from_reader("0,0\n0.5,abc\n1,0\n".as_bytes()).unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        let err = InnerTable::from_reader("0,0\n0.5,1,2\n".as_bytes()).unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        let err = InnerTable::from_reader("0,0\n0.5,1\n0.4,2\n".as_bytes()).unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
    }
}
