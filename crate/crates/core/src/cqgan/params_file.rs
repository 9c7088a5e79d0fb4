//! Trained-parameter file: a `PARAMS k seed loss` header followed by one
//! angle per line in radians, 17 significant digits.

use std::fmt::Write as _;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ParamsFile {
    pub params: Vec<f64>,
    pub seed: u64,
    pub loss: f64,
}

impl ParamsFile {
    pub fn to_text(&self) -> String {
        let mut out = format!("PARAMS {} {} {:.16e}\n", self.params.len(), self.seed, self.loss);
        for p in &self.params {
            writeln!(out, "{p:.16e}").expect("writing to String");
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let err = |line: usize, message: String| Error::Parse { line: line + 1, message };
        let (i, header) = lines.next().ok_or_else(|| err(0, "empty params file".into()))?;
        let f: Vec<&str> = header.split_whitespace().collect();
        let (k, seed, loss) = match f.as_slice() {
            ["PARAMS", k, seed, loss] => (
                k.parse::<usize>().map_err(|e| err(i, format!("count: {e}")))?,
                seed.parse::<u64>().map_err(|e| err(i, format!("seed: {e}")))?,
                loss.parse::<f64>().map_err(|e| err(i, format!("loss: {e}")))?,
            ),
            _ => return Err(err(i, "expected 'PARAMS k seed loss'".into())),
        };
        let params = lines
            .map(|(i, l)| l.trim().parse::<f64>().map_err(|e| err(i, format!("angle: {e}"))))
            .collect::<Result<Vec<f64>>>()?;
        if params.len() != k {
            return Err(Error::ParameterCount { expected: k, found: params.len() });
        }
        Ok(Self { params, seed, loss })
    }
}
