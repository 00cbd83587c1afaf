//! JSON interchange.
//!
//! Matrices: `{"rows", "cols", "re": [[..]], "im": [[..]]}` with row-major
//! nested arrays. Bipartite vectors are `nm × 1` matrices that also carry
//! `"n"` and `"m"`; Choi matrices likewise. Kraus lists are arrays of
//! matrices. Non-finite entries are rejected.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::choi::{HermitianOperator, KrausList};
use crate::error::{Error, Result};
use crate::linalg::{c64, BipartiteDims, BipartiteVector, CMatrix, CVector};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
}

impl MatrixJson {
    pub fn from_matrix(x: &CMatrix) -> Self {
        let re = (0..x.nrows()).map(|i| (0..x.ncols()).map(|j| x[(i, j)].re).collect()).collect();
        let im = (0..x.nrows()).map(|i| (0..x.ncols()).map(|j| x[(i, j)].im).collect()).collect();
        Self { rows: x.nrows(), cols: x.ncols(), re, im, n: None, m: None }
    }

    fn with_dims(mut self, dims: BipartiteDims) -> Self {
        self.n = Some(dims.n());
        self.m = Some(dims.m());
        self
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        for (name, part) in [("re", &self.re), ("im", &self.im)] {
            if part.len() != self.rows || part.iter().any(|row| row.len() != self.cols) {
                return Err(Error::Parse(format!("\"{name}\" is not a {}x{} array", self.rows, self.cols)));
            }
            if part.iter().flatten().any(|x| !x.is_finite()) {
                return Err(Error::Parse(format!("\"{name}\" contains a non-finite entry")));
            }
        }
        Ok(CMatrix::from_fn(self.rows, self.cols, |i, j| c64(self.re[i][j], self.im[i][j])))
    }

    fn dims(&self) -> Result<BipartiteDims> {
        match (self.n, self.m) {
            (Some(n), Some(m)) => BipartiteDims::new(n, m).map_err(|e| Error::Parse(e.to_string())),
            _ => Err(Error::Parse("missing \"n\" and \"m\"".into())),
        }
    }
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

/// Parses a plain matrix.
pub fn parse_matrix(text: &str) -> Result<CMatrix> {
    parse::<MatrixJson>(text)?.to_matrix()
}

pub fn parse_vector(text: &str) -> Result<BipartiteVector> {
    vector_from_json(&parse(text)?)
}

/// Parses a Hermitian operator. Missing `"n"`/`"m"` default to a square
/// split when the size is a perfect square.
pub fn parse_operator(text: &str) -> Result<HermitianOperator> {
    operator_from_json(&parse(text)?)
}

pub fn parse_kraus(text: &str) -> Result<KrausList> {
    let mats: Vec<MatrixJson> = parse(text)?;
    let ops = mats.iter().map(MatrixJson::to_matrix).collect::<Result<Vec<_>>>()?;
    KrausList::new(ops).map_err(|e| Error::Parse(e.to_string()))
}

fn vector_from_json(j: &MatrixJson) -> Result<BipartiteVector> {
    let dims = j.dims()?;
    if j.cols != 1 || j.rows != dims.total() {
        return Err(Error::Parse(format!(
            "vector must be {}x1 for n = {}, m = {}, got {}x{}",
            dims.total(),
            dims.n(),
            dims.m(),
            j.rows,
            j.cols
        )));
    }
    let x = j.to_matrix()?;
    BipartiteVector::new(dims, CVector::from_column_slice(x.as_slice()))
}

fn operator_from_json(j: &MatrixJson) -> Result<HermitianOperator> {
    let dims = if j.n.is_none() && j.m.is_none() {
        let d = (j.rows as f64).sqrt().round() as usize;
        if d * d != j.rows {
            return Err(Error::Parse(format!("cannot split a {}-dimensional space without \"n\", \"m\"", j.rows)));
        }
        BipartiteDims::square(d).map_err(|e| Error::Parse(e.to_string()))?
    } else {
        j.dims()?
    };
    let x = j.to_matrix()?;
    if x.nrows() != dims.total() || x.ncols() != dims.total() {
        return Err(Error::Parse(format!(
            "operator must be {0}x{0} for n = {1}, m = {2}",
            dims.total(),
            dims.n(),
            dims.m()
        )));
    }
    HermitianOperator::new(dims, x)
}

pub fn vector_to_json(psi: &BipartiteVector) -> MatrixJson {
    let col = CMatrix::from_column_slice(psi.dims().total(), 1, psi.coeffs().as_slice());
    MatrixJson::from_matrix(&col).with_dims(psi.dims())
}

pub fn operator_to_json(w: &HermitianOperator) -> MatrixJson {
    MatrixJson::from_matrix(w.matrix()).with_dims(w.dims())
}

impl Serialize for BipartiteVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        vector_to_json(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for BipartiteVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        vector_from_json(&MatrixJson::deserialize(d)?).map_err(D::Error::custom)
    }
}

impl Serialize for HermitianOperator {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        operator_to_json(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for HermitianOperator {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        operator_from_json(&MatrixJson::deserialize(d)?).map_err(D::Error::custom)
    }
}

impl Serialize for KrausList {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mats: Vec<MatrixJson> = self.ops().iter().map(MatrixJson::from_matrix).collect();
        mats.serialize(s)
    }
}

impl<'de> Deserialize<'de> for KrausList {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let mats = Vec::<MatrixJson>::deserialize(d)?;
        let ops = mats.iter().map(MatrixJson::to_matrix).collect::<Result<Vec<_>>>().map_err(D::Error::custom)?;
        KrausList::new(ops).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::choi::choi_depolarizing;
    use crate::linalg::identity;

    #[test]
    fn vector_roundtrip() {
        let dims = BipartiteDims::new(2, 3).unwrap();
        let psi = BipartiteVector::from_slice(
            dims,
            &[c64(0.1, 0.2), c64(0.3, -0.4), c64(0.0, 0.0), c64(1.0, 0.0), c64(-0.5, 0.5), c64(0.25, 0.0)],
        )
        .unwrap();
        let text = serde_json::to_string(&psi).unwrap();
        assert!(text.contains("\"n\":2") && text.contains("\"m\":3") && text.contains("\"cols\":1"));
        let back: BipartiteVector = serde_json::from_str(&text).unwrap();
        assert_eq!(back, psi);
        assert_eq!(parse_vector(&text).unwrap(), psi);
    }

    #[test]
    fn operator_roundtrip() {
        let w = choi_depolarizing(3, 0.4).unwrap();
        let text = serde_json::to_string(&w).unwrap();
        let back = parse_operator(&text).unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn kraus_roundtrip() {
        let ks = KrausList::new(vec![identity(2), CMatrix::zeros(2, 2)]).unwrap();
        let text = serde_json::to_string(&ks).unwrap();
        assert_eq!(parse_kraus(&text).unwrap(), ks);
    }

    #[test]
    fn square_split_is_inferred() {
        let text = r#"{"rows": 4, "cols": 4,
            "re": [[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]],
            "im": [[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]]}"#;
        let w = parse_operator(text).unwrap();
        assert_eq!(w.dims(), BipartiteDims::square(2).unwrap());
    }

    #[test]
    fn rejects_malformed() {
        assert!(matches!(parse_matrix("{"), Err(Error::Parse(_))));
        assert!(matches!(parse_matrix(r#"{"rows": 1, "cols": 1, "re": [[NaN]], "im": [[0]]}"#), Err(Error::Parse(_))));
        assert!(matches!(parse_matrix(r#"{"rows": 1, "cols": 2, "re": [[1]], "im": [[0]]}"#), Err(Error::Parse(_))));
        assert!(matches!(
            parse_matrix(r#"{"rows": 1, "cols": 1, "re": [[1]], "im": [[0]], "extra": 1}"#),
            Err(Error::Parse(_))
        ));
        assert!(matches!(parse_vector(r#"{"rows": 2, "cols": 1, "re": [[1],[0]], "im": [[0],[0]]}"#), Err(Error::Parse(_))));
        assert!(matches!(parse_operator(r#"{"rows": 3, "cols": 3, "re": [[1,0,0],[0,1,0],[0,0,1]], "im": [[0,0,0],[0,0,0],[0,0,0]]}"#), Err(Error::Parse(_))));
        let non_hermitian = r#"{"rows": 1, "cols": 1, "re": [[1]], "im": [[1]], "n": 1, "m": 1}"#;
        assert!(matches!(parse_operator(non_hermitian), Err(Error::Domain(_))));
    }
}
