//! Validated samples and the order-statistic functionals the estimators share.
//!
//! Indexing convention: for a sample of size `n`, `X_{n-j+1,n}` is the j-th
//! largest observation, so [`Sample::top`]`(1)` is the sample maximum and
//! [`Sample::anchor`]`(k)` is `X_{n-k,n}`, the (k+1)-th largest.

use std::io::Read;

use serde::Serialize;

use crate::error::{Error, InputError, Result};

/// Ascending order statistics of strictly positive observations, `n >= 3`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sample {
    values: Vec<f64>,
}

#[allow(clippy::len_without_is_empty)]
impl Sample {
    /// Validates and sorts `raw`. Ties are kept.
    pub fn new(mut raw: Vec<f64>) -> Result<Self> {
        for (index, &value) in raw.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFiniteValue { index, value });
            }
            if value <= 0.0 {
                return Err(Error::NonPositiveValue { index, value });
            }
        }
        if raw.len() < 3 {
            return Err(Error::TooFewObservations { n: raw.len() });
        }
        raw.sort_by(f64::total_cmp);
        Ok(Self { values: raw })
    }

    /// Reads one value per line, or the named column of a headed CSV file.
    ///
    /// A first line that does not parse as a number is taken as a header.
    /// Errors carry the 1-based line number of the offending record.
    pub fn from_csv<R: Read>(reader: R, column: Option<&str>) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(reader);

        let mut values = Vec::new();
        let mut col_idx: Option<usize> = None;
        let mut first = true;
        for rec in rdr.records() {
            let rec = rec.map_err(|e| Error::Input {
                line: e.position().map_or(0, |p| p.line()),
                kind: InputError::Csv(e.to_string()),
            })?;
            let line = rec.position().map_or(0, |p| p.line());
            if rec.iter().all(str::is_empty) {
                continue;
            }
            if first {
                first = false;
                if let Some(name) = column {
                    let idx = rec.iter().position(|h| h == name).ok_or_else(|| Error::Input {
                        line,
                        kind: InputError::MissingColumn(name.to_string()),
                    })?;
                    col_idx = Some(idx);
                    continue;
                }
                if rec.len() > 1 {
                    return Err(Error::Input { line, kind: InputError::AmbiguousColumns(rec.len()) });
                }
                if rec[0].parse::<f64>().is_err() {
                    continue;
                }
            }
            let field = match col_idx {
                Some(i) => rec.get(i).unwrap_or(""),
                None if rec.len() == 1 => &rec[0],
                None => {
                    return Err(Error::Input { line, kind: InputError::AmbiguousColumns(rec.len()) })
                }
            };
            let value: f64 = field
                .parse()
                .map_err(|_| Error::Input { line, kind: InputError::Unparseable(field.to_string()) })?;
            if !value.is_finite() {
                return Err(Error::Input { line, kind: InputError::NonFinite(value) });
            }
            if value <= 0.0 {
                return Err(Error::Input { line, kind: InputError::NonPositive(value) });
            }
            values.push(value);
        }
        Sample::new(values)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Ascending order statistics.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `X_{n-j+1,n}`, the j-th largest observation (1-based).
    #[inline]
    pub fn top(&self, j: usize) -> f64 {
        debug_assert!(j >= 1 && j <= self.len());
        self.values[self.len() - j]
    }

    /// `X_{n-k,n}`, the threshold used with the top `k` excesses.
    #[inline]
    pub fn anchor(&self, k: usize) -> f64 {
        self.top(k + 1)
    }

    pub fn max(&self) -> f64 {
        self.top(1)
    }

    /// The same sample with every observation multiplied by `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidParameter(format!("scale factor must be positive, got {c}")));
        }
        Sample::new(self.values.iter().map(|v| v * c).collect())
    }

    pub fn check_threshold(&self, k: usize) -> Result<()> {
        if k == 0 || k >= self.len() {
            return Err(Error::InvalidThreshold { k, n: self.len() });
        }
        Ok(())
    }
}

/// Convenience wrapper around [`Sample::new`] for borrowed data.
pub fn load_sample(raw: &[f64]) -> Result<Sample> {
    Sample::new(raw.to_vec())
}

/// Trimming pair `(r, k)` with `1 <= r < k < n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TrimSpec {
    r: usize,
    k: usize,
}

impl TrimSpec {
    pub fn new(r: usize, k: usize, n: usize) -> Result<Self> {
        if r < 1 || r >= k || k >= n {
            return Err(Error::InvalidTrim { r, k, n });
        }
        Ok(Self { r, k })
    }

    /// Validates against a concrete sample.
    pub fn for_sample(r: usize, k: usize, s: &Sample) -> Result<Self> {
        Self::new(r, k, s.len())
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of order statistics entering the trimmed mean, `k - r + 1`.
    pub fn k_r(&self) -> usize {
        self.k - self.r + 1
    }

    /// `r / (k + 1)`.
    pub fn lambda(&self) -> f64 {
        self.r as f64 / (self.k as f64 + 1.0)
    }
}

/// First and second moments of the log-excesses over `X_{n-k,n}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogMoments {
    pub m1: f64,
    pub m2: f64,
}

/// The statistics the tail-index equation is built from at one `(r, k)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailStatistics {
    pub h: f64,
    pub ratio: f64,
    pub moments: LogMoments,
}

impl TailStatistics {
    pub fn compute(s: &Sample, t: TrimSpec) -> Self {
        Self {
            h: trimmed_hill(s, t),
            ratio: ratio_r(s, t),
            moments: log_moments_unchecked(s, t.k()),
        }
    }
}

/// `H_{r,k,n}`: mean of `log(X_{n-j+1,n} / X_{n-k,n})` over `j = r..=k`.
pub fn trimmed_hill(s: &Sample, t: TrimSpec) -> f64 {
    let anchor = s.anchor(t.k());
    let sum: f64 = (t.r()..=t.k()).map(|j| (s.top(j) / anchor).ln()).sum();
    sum / t.k_r() as f64
}

/// `R_{r,k,n} = X_{n-k,n} / X_{n-r+1,n}`, in `(0, 1]`.
pub fn ratio_r(s: &Sample, t: TrimSpec) -> f64 {
    s.anchor(t.k()) / s.top(t.r())
}

/// `M^{(1)}` and `M^{(2)}` over the top `k` observations.
pub fn log_moments(s: &Sample, k: usize) -> Result<LogMoments> {
    s.check_threshold(k)?;
    Ok(log_moments_unchecked(s, k))
}

fn log_moments_unchecked(s: &Sample, k: usize) -> LogMoments {
    let anchor = s.anchor(k);
    let (m1, m2) = (1..=k).fold((0.0, 0.0), |(a, b), j| {
        let e = (s.top(j) / anchor).ln();
        (a + e, b + e * e)
    });
    LogMoments { m1: m1 / k as f64, m2: m2 / k as f64 }
}
