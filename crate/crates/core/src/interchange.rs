//! Matrix interchange record shared by every serialized artifact.
//!
//! A matrix is stored as `{"rows": m, "cols": k, "data": [[re, im], ...]}` with
//! `data` in row-major order. Parsing rejects ragged data and non-finite entries.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixRecord {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

impl MatrixRecord {
    pub fn from_matrix(m: &DMatrix<Complex64>) -> Self {
        let mut data = Vec::with_capacity(m.nrows() * m.ncols());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                let z = m[(i, j)];
                data.push([z.re, z.im]);
            }
        }
        MatrixRecord {
            rows: m.nrows(),
            cols: m.ncols(),
            data,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.rows == 0 || self.cols == 0 {
            return Err(Error::Parse(format!(
                "dimensions must be positive, got {}x{}",
                self.rows, self.cols
            )));
        }
        let expected = self
            .rows
            .checked_mul(self.cols)
            .ok_or_else(|| Error::Parse("dimension product overflows".into()))?;
        if self.data.len() != expected {
            return Err(Error::Parse(format!(
                "ragged data: {}x{} needs {} entries, found {}",
                self.rows,
                self.cols,
                expected,
                self.data.len()
            )));
        }
        if let Some(idx) = self
            .data
            .iter()
            .position(|[re, im]| !re.is_finite() || !im.is_finite())
        {
            return Err(Error::Parse(format!("non-finite entry at index {idx}")));
        }
        Ok(())
    }

    pub fn to_matrix(&self) -> Result<DMatrix<Complex64>> {
        self.validate()?;
        Ok(DMatrix::from_fn(self.rows, self.cols, |i, j| {
            let [re, im] = self.data[i * self.cols + j];
            Complex64::new(re, im)
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_major_layout() {
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(1.0, 0.0),
                Complex64::new(2.0, -1.0),
                Complex64::new(3.0, 0.5),
                Complex64::new(4.0, 0.0),
            ],
        );
        let rec = MatrixRecord::from_matrix(&m);
        assert_eq!(rec.data[1], [2.0, -1.0]);
        assert_eq!(rec.data[2], [3.0, 0.5]);
        assert_eq!(rec.to_matrix().unwrap(), m);
    }

    #[test]
    fn rejects_ragged_and_nonfinite() {
        let ragged = MatrixRecord {
            rows: 2,
            cols: 2,
            data: vec![[1.0, 0.0]; 3],
        };
        assert!(matches!(ragged.to_matrix(), Err(Error::Parse(_))));

        let nan = MatrixRecord {
            rows: 1,
            cols: 2,
            data: vec![[1.0, 0.0], [f64::NAN, 0.0]],
        };
        assert!(matches!(nan.to_matrix(), Err(Error::Parse(_))));

        let inf = MatrixRecord {
            rows: 1,
            cols: 1,
            data: vec![[0.0, f64::INFINITY]],
        };
        assert!(inf.validate().is_err());

        let empty = MatrixRecord {
            rows: 0,
            cols: 3,
            data: vec![],
        };
        assert!(empty.validate().is_err());
    }
}
