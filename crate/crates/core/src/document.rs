//! Stable text forms of laws and matrices.
//!
//! Exact probabilities are written as `"numerator/denominator"` strings
//! (or a bare integer string such as `"1"`), float probabilities as JSON
//! numbers. Zero-probability entries are omitted from laws.
//!
//! ```json
//! {"n": 3, "p": "1/2", "backend": "exact", "entries": [[2, "3/4"], [3, "1/4"]]}
//! ```
//!
//! The compact form `{"2": "3/4", "3": "1/4"}` is also supported for laws
//! of `X_n`.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::exact::{JointPmf, Pmf};
use crate::scalar::{parse_rational, Backend, Bias, Scalar};
use crate::shuffle::PositionMatrix;

/// A probability as written in a document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Prob {
    Exact(String),
    Float(f64),
}

impl Prob {
    pub fn of<T: Scalar>(x: &T) -> Self {
        match T::BACKEND {
            Backend::Exact => Prob::Exact(x.render()),
            Backend::Float => Prob::Float(x.as_f64()),
        }
    }

    pub fn to_rational(&self) -> Result<BigRational> {
        match self {
            Prob::Exact(s) => parse_rational(s),
            Prob::Float(x) => {
                BigRational::from_float(*x).ok_or_else(|| Error::Domain(format!("not a finite probability: {x}")))
            }
        }
    }

    pub fn to_f64(&self) -> Result<f64> {
        match self {
            Prob::Exact(s) => Ok(parse_rational(s)?.as_f64()),
            Prob::Float(x) => Ok(*x),
        }
    }
}

/// `{n, p, backend, entries: [[key, prob], ...]}`. The key is `k` for the
/// law of `X_n` and `[l, c]` for the joint law.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LawDocument<K> {
    pub n: usize,
    pub p: Bias,
    pub backend: Backend,
    pub entries: Vec<(K, Prob)>,
}

pub type PmfDocument = LawDocument<usize>;
pub type JointDocument = LawDocument<[usize; 2]>;

impl PmfDocument {
    pub fn from_pmf<T: Scalar>(law: &Pmf<T>) -> Self {
        LawDocument {
            n: law.n(),
            p: law.bias().clone(),
            backend: T::BACKEND,
            entries: law.entries().map(|(k, x)| (k, Prob::of(x))).collect(),
        }
    }

    pub fn to_exact(&self) -> Result<Pmf<BigRational>> {
        let mut probs = vec![BigRational::from_count(0); self.n + 1];
        for (k, x) in &self.entries {
            *probs.get_mut(*k).ok_or_else(|| out_of_range(*k, self.n))? = x.to_rational()?;
        }
        Ok(Pmf::from_probs(self.n, self.p.clone(), probs))
    }
}

impl JointDocument {
    pub fn from_joint<T: Scalar>(law: &JointPmf<T>) -> Self {
        LawDocument {
            n: law.n(),
            p: law.bias().clone(),
            backend: T::BACKEND,
            entries: law.entries().map(|((l, c), x)| ([l, c], Prob::of(x))).collect(),
        }
    }
}

/// `{n, p, backend, rows}` with `rows[i-1][j-1] = P{card i at position j}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixDocument {
    pub n: usize,
    pub p: Bias,
    pub backend: Backend,
    pub rows: Vec<Vec<Prob>>,
}

impl MatrixDocument {
    pub fn from_matrix<T: Scalar>(matrix: &PositionMatrix<T>, bias: &Bias) -> Self {
        MatrixDocument {
            n: matrix.n(),
            p: bias.clone(),
            backend: T::BACKEND,
            rows: matrix.rows().iter().map(|r| r.iter().map(Prob::of).collect()).collect(),
        }
    }
}

/// `{"k": prob, ...}` in increasing `k`, nonzero entries only.
pub fn pmf_map<T: Scalar>(law: &Pmf<T>) -> Map<String, Value> {
    law.entries()
        .map(|(k, x)| {
            let value = match Prob::of(x) {
                Prob::Exact(s) => Value::String(s),
                Prob::Float(f) => serde_json::json!(f),
            };
            (k.to_string(), value)
        })
        .collect()
}

/// Reads back the output of [`pmf_map`] as an exact law.
pub fn parse_pmf_map(n: usize, bias: &Bias, text: &str) -> Result<Pmf<BigRational>> {
    let map: Map<String, Value> = serde_json::from_str(text).map_err(|e| Error::Domain(e.to_string()))?;
    let mut probs = vec![BigRational::from_count(0); n + 1];
    for (key, value) in map {
        let k: usize = key.parse().map_err(|_| Error::Domain(format!("bad outcome key {key:?}")))?;
        let prob: Prob = serde_json::from_value(value).map_err(|e| Error::Domain(e.to_string()))?;
        *probs.get_mut(k).ok_or_else(|| out_of_range(k, n))? = prob.to_rational()?;
    }
    Ok(Pmf::from_probs(n, bias.clone(), probs))
}

fn out_of_range(k: usize, n: usize) -> Error {
    Error::Domain(format!("outcome {k} outside 0..={n}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{joint_pmf, xn_pmf};
    use crate::shuffle::position_matrix;

    #[test]
    fn pmf_document_text() {
        let law = xn_pmf::<BigRational>(3, &Bias::half()).unwrap();
        let text = serde_json::to_string(&PmfDocument::from_pmf(&law)).unwrap();
        assert_eq!(text, r#"{"n":3,"p":"1/2","backend":"exact","entries":[[2,"3/4"],[3,"1/4"]]}"#);
        let back: PmfDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_exact().unwrap(), law);
    }

    #[test]
    fn compact_map_round_trip() {
        let bias = Bias::half();
        let law = xn_pmf::<BigRational>(4, &bias).unwrap();
        let text = serde_json::to_string(&pmf_map(&law)).unwrap();
        assert_eq!(text, r#"{"2":"1/8","3":"3/4","4":"1/8"}"#);
        assert_eq!(parse_pmf_map(4, &bias, &text).unwrap(), law);
        let law = xn_pmf::<BigRational>(12, &bias).unwrap();
        let text = serde_json::to_string(&pmf_map(&law)).unwrap();
        assert!(text.find("\"9\"").unwrap() < text.find("\"10\"").unwrap());
        assert!(parse_pmf_map(3, &bias, r#"{"7":"1"}"#).is_err());
    }

    #[test]
    fn float_documents_use_numbers() {
        let law = xn_pmf::<f64>(2, &Bias::half()).unwrap();
        let text = serde_json::to_string(&PmfDocument::from_pmf(&law)).unwrap();
        assert_eq!(text, r#"{"n":2,"p":"1/2","backend":"float","entries":[[1,0.5],[2,0.5]]}"#);
    }

    #[test]
    fn joint_and_matrix_documents() {
        let joint = joint_pmf::<BigRational>(2, &Bias::half()).unwrap();
        let text = serde_json::to_string(&JointDocument::from_joint(&joint)).unwrap();
        assert!(text.ends_with(r#""entries":[[[0,1],"1/2"],[[1,1],"1/2"]]}"#), "{text}");
        let m = position_matrix::<BigRational>(3, &Bias::half()).unwrap();
        let doc = MatrixDocument::from_matrix(&m, &Bias::half());
        let row: Vec<_> = doc.rows[1].iter().map(|x| x.to_rational().unwrap()).collect();
        assert_eq!(row, m.rows()[1]);
        assert_eq!(doc.rows[1][0], Prob::Exact("1/4".into()));
    }
}
