//! Coefficient containers for scalar and vector surface functions.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::HarmonicIndex;

/// Truncated expansion `sum_{l <= lmax} c_l^m Y_l^m`.
///
/// Storage is a dense vector in the order `l^2 + l + m`, which is the
/// natural bound `(lmax + 1)^2` for every field the solvers produce.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "FieldJson", try_from = "FieldJson")]
pub struct CoeffField {
    lmax: usize,
    coeffs: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    l: usize,
    m: isize,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct FieldJson {
    lmax: usize,
    coeffs: Vec<EntryJson>,
}

impl From<CoeffField> for FieldJson {
    fn from(f: CoeffField) -> Self {
        FieldJson {
            lmax: f.lmax,
            coeffs: f
                .iter()
                .filter(|(_, c)| *c != Complex64::new(0.0, 0.0))
                .map(|(i, c)| EntryJson {
                    l: i.ell,
                    m: i.m,
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        }
    }
}

impl TryFrom<FieldJson> for CoeffField {
    type Error = Error;
    fn try_from(j: FieldJson) -> Result<Self> {
        let mut f = CoeffField::zeros(j.lmax);
        for e in j.coeffs {
            let idx = HarmonicIndex::new(e.l, e.m)?;
            if idx.ell > j.lmax {
                return Err(Error::InvalidInput(format!(
                    "coefficient at degree {} exceeds lmax {}",
                    idx.ell, j.lmax
                )));
            }
            if !(e.re.is_finite() && e.im.is_finite()) {
                return Err(Error::InvalidInput(format!("non-finite coefficient at {idx:?}")));
            }
            f.coeffs[idx.linear()] += Complex64::new(e.re, e.im);
        }
        Ok(f)
    }
}

impl CoeffField {
    pub fn zeros(lmax: usize) -> Self {
        CoeffField {
            lmax,
            coeffs: vec![Complex64::new(0.0, 0.0); (lmax + 1) * (lmax + 1)],
        }
    }

    /// A single unit coefficient at `idx`.
    pub fn delta(lmax: usize, idx: HarmonicIndex) -> Self {
        let mut f = Self::zeros(lmax.max(idx.ell));
        f.coeffs[idx.linear()] = Complex64::new(1.0, 0.0);
        f
    }

    pub fn from_fn(lmax: usize, mut c: impl FnMut(HarmonicIndex) -> Complex64) -> Self {
        CoeffField {
            lmax,
            coeffs: HarmonicIndex::iter_upto(lmax).map(&mut c).collect(),
        }
    }

    /// Builds from a dense slice in linear order; its length fixes `lmax`.
    pub fn from_dense(coeffs: Vec<Complex64>) -> Result<Self> {
        let n = coeffs.len();
        let side = (n as f64).sqrt().round() as usize;
        if side == 0 || side * side != n {
            return Err(Error::InvalidInput(format!(
                "dense coefficient length {n} is not a positive square"
            )));
        }
        Ok(CoeffField {
            lmax: side - 1,
            coeffs,
        })
    }

    pub fn lmax(&self) -> usize {
        self.lmax
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    /// Coefficient at `idx`; zero above the truncation.
    pub fn get(&self, idx: HarmonicIndex) -> Complex64 {
        if idx.ell > self.lmax {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[idx.linear()]
        }
    }

    /// Sets a coefficient; panics if `idx` is above the truncation.
    pub fn set(&mut self, idx: HarmonicIndex, v: Complex64) {
        assert!(idx.ell <= self.lmax, "index {idx:?} above lmax {}", self.lmax);
        self.coeffs[idx.linear()] = v;
    }

    pub fn add_at(&mut self, idx: HarmonicIndex, v: Complex64) {
        assert!(idx.ell <= self.lmax, "index {idx:?} above lmax {}", self.lmax);
        self.coeffs[idx.linear()] += v;
    }

    pub fn iter(&self) -> impl Iterator<Item = (HarmonicIndex, Complex64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| (HarmonicIndex::from_linear(i), c))
    }

    /// Copy with a new truncation, padding with zeros or dropping degrees.
    pub fn resized(&self, lmax: usize) -> Self {
        let n = (lmax + 1) * (lmax + 1);
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(n, Complex64::new(0.0, 0.0));
        CoeffField { lmax, coeffs }
    }

    /// Applies a degree-dependent multiplier, i.e. a diagonal operator.
    pub fn map_degree(&self, mut f: impl FnMut(usize) -> Complex64) -> Self {
        let mut out = self.clone();
        for l in 0..=self.lmax {
            let s = f(l);
            for c in &mut out.coeffs[l * l..(l + 1) * (l + 1)] {
                *c *= s;
            }
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> Self {
        CoeffField {
            lmax: self.lmax,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// `self + s * other`, with the larger of the two truncations.
    pub fn axpy(&self, s: Complex64, other: &CoeffField) -> Self {
        let mut out = self.resized(self.lmax.max(other.lmax));
        for (a, b) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *a += s * b;
        }
        out
    }

    pub fn add(&self, other: &CoeffField) -> Self {
        self.axpy(Complex64::new(1.0, 0.0), other)
    }

    pub fn sub(&self, other: &CoeffField) -> Self {
        self.axpy(Complex64::new(-1.0, 0.0), other)
    }

    pub fn norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Coefficient l2 norm, equal to the `L^2(S^2)` norm of the function.
    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// l2 norm of all coefficients with degree `>= from`.
    pub fn tail_norm(&self, from: usize) -> f64 {
        if from > self.lmax {
            return 0.0;
        }
        self.coeffs[from * from..].iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// Three (Cartesian) or four (Cartesian plus one scalar) coefficient fields
/// with a common truncation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<CoeffField>", into = "Vec<CoeffField>")]
pub struct VectorCoeffField {
    components: Vec<CoeffField>,
}

impl From<VectorCoeffField> for Vec<CoeffField> {
    fn from(v: VectorCoeffField) -> Self {
        v.components
    }
}

impl TryFrom<Vec<CoeffField>> for VectorCoeffField {
    type Error = Error;
    fn try_from(c: Vec<CoeffField>) -> Result<Self> {
        VectorCoeffField::new(c)
    }
}

impl VectorCoeffField {
    pub fn new(components: Vec<CoeffField>) -> Result<Self> {
        if !(components.len() == 3 || components.len() == 4) {
            return Err(Error::InvalidInput(format!(
                "vector field needs 3 or 4 components, got {}",
                components.len()
            )));
        }
        let l = components[0].lmax();
        if components.iter().any(|c| c.lmax() != l) {
            return Err(Error::InvalidInput(
                "vector field components have different truncations".into(),
            ));
        }
        Ok(VectorCoeffField { components })
    }

    pub fn zeros(ncomp: usize, lmax: usize) -> Result<Self> {
        Self::new(vec![CoeffField::zeros(lmax); ncomp])
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn lmax(&self) -> usize {
        self.components[0].lmax()
    }

    pub fn component(&self, j: usize) -> &CoeffField {
        &self.components[j]
    }

    pub fn components(&self) -> &[CoeffField] {
        &self.components
    }

    pub fn into_components(self) -> Vec<CoeffField> {
        self.components
    }

    pub fn resized(&self, lmax: usize) -> Self {
        VectorCoeffField {
            components: self.components.iter().map(|c| c.resized(lmax)).collect(),
        }
    }

    pub fn norm(&self) -> f64 {
        self.components.iter().map(|c| c.norm_sq()).sum::<f64>().sqrt()
    }

    pub fn sub(&self, other: &VectorCoeffField) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::InvalidInput("component counts differ".into()));
        }
        Self::new(
            self.components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.sub(b))
                .collect(),
        )
    }

    pub fn tail_norm(&self, from: usize) -> f64 {
        self.components
            .iter()
            .map(|c| c.tail_norm(from).powi(2))
            .sum::<f64>()
            .sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip_drops_zeros() {
        let mut f = CoeffField::zeros(3);
        f.set(HarmonicIndex::new(2, -1).unwrap(), Complex64::new(1.5, -0.25));
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"lmax":3,"coeffs":[{"l":2,"m":-1,"re":1.5,"im":-0.25}]}"#);
        let back: CoeffField = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn json_rejects_invalid_entries() {
        let bad = r#"{"lmax":1,"coeffs":[{"l":2,"m":0,"re":1.0,"im":0.0}]}"#;
        assert!(serde_json::from_str::<CoeffField>(bad).is_err());
        let bad = r#"{"lmax":3,"coeffs":[{"l":1,"m":2,"re":1.0,"im":0.0}]}"#;
        assert!(serde_json::from_str::<CoeffField>(bad).is_err());
    }

    #[test]
    fn vector_fields_validate_shape() {
        assert!(VectorCoeffField::zeros(2, 3).is_err());
        assert!(VectorCoeffField::new(vec![CoeffField::zeros(2), CoeffField::zeros(3), CoeffField::zeros(2)]).is_err());
        let v = VectorCoeffField::zeros(4, 5).unwrap();
        assert_eq!((v.len(), v.lmax()), (4, 5));
    }

    #[test]
    fn tail_norm_counts_high_degrees() {
        let mut f = CoeffField::zeros(4);
        f.set(HarmonicIndex::new(1, 0).unwrap(), Complex64::new(3.0, 0.0));
        f.set(HarmonicIndex::new(4, -4).unwrap(), Complex64::new(0.0, 4.0));
        assert_eq!(f.tail_norm(2), 4.0);
        assert_eq!(f.norm(), 5.0);
        assert_eq!(f.tail_norm(5), 0.0);
    }
}
