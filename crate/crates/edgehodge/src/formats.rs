//! JSON file formats for complexes, edge-space models and fibre spectra, plus
//! CSV spectrum export and two-column profile tables.
//!
//! Matrix entries are exact rationals written as strings (`"3/4"`, `"-2"`),
//! row-major, one nested array per matrix.

use std::fmt::Write as _;
use std::path::Path;

use edgehodge_core::cochain::{CochainComplex, ComplexMap, QMatrix};
use edgehodge_core::fibredec::SpectrumResult;
use edgehodge_core::spectral::{FibreSpectrum, Provenance, Real, SpectralLine};
use edgehodge_core::stratified::EdgeSpaceModel;
use edgehodge_core::{parse_rational, Q};
use serde::{Deserialize, Serialize};

use crate::error::Error;

pub type MatrixFile = Vec<Vec<String>>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_degree: Option<i32>,
    pub dims: Vec<usize>,
    /// `d_k` for each degree, `dims[k+1] × dims[k]`; the last one is `0 × dims[top]`.
    pub differentials: Vec<MatrixFile>,
}

fn matrix_to_file(m: &QMatrix) -> MatrixFile {
    (0..m.rows()).map(|i| m.row(i).iter().map(Q::to_string).collect()).collect()
}

fn matrix_from_file(m: &MatrixFile, rows: usize, cols: usize, what: &str) -> Result<QMatrix, Error> {
    if m.len() != rows || m.iter().any(|r| r.len() != cols) {
        let found_cols = m.first().map_or(0, Vec::len);
        return Err(Error::Model(format!("{what}: expected {rows}×{cols} entries, found {}×{found_cols}", m.len())));
    }
    let mut data = Vec::with_capacity(rows * cols);
    for row in m {
        for entry in row {
            data.push(parse_rational(entry).ok_or_else(|| Error::Model(format!("{what}: bad rational `{entry}`")))?);
        }
    }
    Ok(QMatrix::from_row_major(rows, cols, data).expect("checked shape"))
}

impl ComplexFile {
    pub fn from_complex(c: &CochainComplex) -> Self {
        ComplexFile {
            min_degree: (c.min_degree() != 0).then_some(c.min_degree()),
            dims: c.dims().to_vec(),
            differentials: c.differentials().iter().map(matrix_to_file).collect(),
        }
    }

    pub fn to_complex(&self) -> Result<CochainComplex, Error> {
        let lo = self.min_degree.unwrap_or(0);
        if self.differentials.len() != self.dims.len() {
            return Err(Error::Model(format!("{} dims but {} differentials", self.dims.len(), self.differentials.len())));
        }
        let d = self
            .differentials
            .iter()
            .enumerate()
            .map(|(i, m)| {
                let rows = self.dims.get(i + 1).copied().unwrap_or(0);
                matrix_from_file(m, rows, self.dims[i], &format!("d{}", lo + i as i32))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let c = CochainComplex::new(lo, self.dims.clone(), d)?;
        if !c.verify() {
            return Err(Error::Model("d ∘ d ≠ 0".into()));
        }
        Ok(c)
    }
}

/// An edge-space model: the four complexes, the restriction `M → Y` and the
/// `(base, fibre)` bidegrees of the blocks of `Y` in each degree.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub name: String,
    pub n: usize,
    pub b: usize,
    pub f: usize,
    pub base: ComplexFile,
    pub fibre: ComplexFile,
    pub regular: ComplexFile,
    pub link: ComplexFile,
    /// One matrix per degree of `M`, `dim Y^k × dim M^k`.
    pub restriction: Vec<MatrixFile>,
    pub bigrading: Vec<Vec<[i32; 2]>>,
}

impl ModelFile {
    pub fn from_model(m: &EdgeSpaceModel) -> Self {
        let link = m.link();
        ModelFile {
            name: m.name().to_string(),
            n: m.n(),
            b: m.b(),
            f: m.f(),
            base: ComplexFile::from_complex(m.base()),
            fibre: ComplexFile::from_complex(m.fibre()),
            regular: ComplexFile::from_complex(m.regular()),
            link: ComplexFile::from_complex(link),
            restriction: m.regular().degrees().map(|k| matrix_to_file(&m.restriction().at(k))).collect(),
            bigrading: link.degrees().map(|k| m.bigrading().blocks(k).iter().map(|b| [b.base, b.fibre]).collect()).collect(),
        }
    }

    pub fn to_model(&self) -> Result<EdgeSpaceModel, Error> {
        let base = self.base.to_complex()?;
        let fibre = self.fibre.to_complex()?;
        let regular = self.regular.to_complex()?;
        let link = self.link.to_complex()?;
        let (_, layout) = base.tensor_with_layout(&fibre)?;
        let declared: Vec<Vec<[i32; 2]>> =
            link.degrees().map(|k| layout.blocks(k).iter().map(|b| [b.base, b.fibre]).collect()).collect();
        if declared != self.bigrading {
            return Err(Error::Model("bigrading does not match the blocks of B ⊗ F".into()));
        }
        if regular.min_degree() != 0 || self.restriction.len() != regular.dims().len() {
            return Err(Error::Model("restriction needs one matrix per degree of M".into()));
        }
        let maps = regular
            .degrees()
            .map(|k| matrix_from_file(&self.restriction[k as usize], link.dim(k), regular.dim(k), &format!("restriction in degree {k}")))
            .collect::<Result<Vec<_>, _>>()?;
        let restriction = ComplexMap::new(regular.clone(), link.clone(), 0, maps)?;
        let model = EdgeSpaceModel::new(self.name.clone(), base, fibre, regular, link, restriction, layout)?;
        if (model.n(), model.b(), model.f()) != (self.n, self.b, self.f) {
            return Err(Error::Model(format!(
                "declared (n, b, f) = ({}, {}, {}) but the complexes give ({}, {}, {})",
                self.n,
                self.b,
                self.f,
                model.n(),
                model.b(),
                model.f()
            )));
        }
        Ok(model)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineFile {
    /// Exact rational or decimal string.
    pub value: String,
    /// Absolute error bound; absent for exact values.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub err: Option<f64>,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumFile {
    pub provenance: String,
    pub degrees: Vec<Vec<LineFile>>,
}

impl SpectrumFile {
    pub fn from_spectrum(s: &FibreSpectrum) -> Self {
        let line = |l: &SpectralLine| match &l.value {
            Real::Exact(q) => LineFile { value: q.to_string(), err: None, multiplicity: l.multiplicity },
            Real::Approx { value, err } => LineFile { value: format!("{value:?}"), err: Some(*err), multiplicity: l.multiplicity },
        };
        SpectrumFile {
            provenance: provenance_name(s.provenance()).into(),
            degrees: s.degrees().iter().map(|d| d.iter().map(line).collect()).collect(),
        }
    }

    pub fn to_spectrum(&self) -> Result<FibreSpectrum, Error> {
        let provenance = match self.provenance.as_str() {
            "closed-form" => Provenance::ClosedForm,
            "discrete" => Provenance::Discrete,
            other => return Err(Error::Config(format!("unknown spectrum provenance `{other}`"))),
        };
        let line = |l: &LineFile| -> Result<SpectralLine, Error> {
            let value = match l.err {
                None => Real::Exact(parse_rational(&l.value).ok_or_else(|| Error::Config(format!("bad eigenvalue `{}`", l.value)))?),
                Some(err) => Real::Approx {
                    value: l.value.trim().parse().map_err(|_| Error::Config(format!("bad eigenvalue `{}`", l.value)))?,
                    err,
                },
            };
            Ok(SpectralLine { value, multiplicity: l.multiplicity })
        };
        let degrees = self.degrees.iter().map(|d| d.iter().map(line).collect()).collect::<Result<Vec<Vec<_>>, _>>()?;
        Ok(FibreSpectrum::new(degrees, provenance)?)
    }
}

pub fn provenance_name(p: Provenance) -> &'static str {
    match p {
        Provenance::ClosedForm => "closed-form",
        Provenance::Discrete => "discrete",
    }
}

/// `degree,index,eigenvalue` rows.
pub fn spectrum_csv(results: &[SpectrumResult]) -> String {
    let mut out = String::from("degree,index,eigenvalue\n");
    for r in results {
        for (i, v) in r.eigenvalues.iter().enumerate() {
            writeln!(out, "{},{},{:?}", r.degree, i, v).unwrap();
        }
    }
    out
}

/// Parses whitespace- or comma-separated `(x, value)` rows; `#` starts a comment.
pub fn parse_profile_table(text: &str) -> Result<(Vec<f64>, Vec<f64>), Error> {
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()).collect();
        let parse = |s: &str| s.parse::<f64>().map_err(|_| Error::Config(format!("profile line {}: bad number `{s}`", n + 1)));
        match fields.as_slice() {
            [x, y] => {
                xs.push(parse(x)?);
                ys.push(parse(y)?);
            }
            _ => return Err(Error::Config(format!("profile line {}: expected two columns", n + 1))),
        }
    }
    Ok((xs, ys))
}

pub fn profile_table(xs: &[f64], ys: &[f64]) -> String {
    let mut out = String::new();
    for (x, y) in xs.iter().zip(ys) {
        writeln!(out, "{x:?} {y:?}").unwrap();
    }
    out
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable") + "\n"
}

#[cfg(test)]
mod tests {
    use super::*;
    use edgehodge_core::cochain::standard;
    use edgehodge_core::stratified::builtin;

    #[test]
    fn complex_round_trip() {
        let c = standard::torus().shift_degrees(-1);
        let file = ComplexFile::from_complex(&c);
        let text = to_json(&file);
        let back: ComplexFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_complex().unwrap(), c);
        assert_eq!(to_json(&ComplexFile::from_complex(&back.to_complex().unwrap())), text);
    }

    #[test]
    fn model_round_trip() {
        let m = builtin("edge-torus-over-circle").unwrap();
        let file = ModelFile::from_model(&m);
        let back = file.to_model().unwrap();
        assert_eq!(ModelFile::from_model(&back), file);
        let mut broken = file.clone();
        broken.bigrading[1].reverse();
        assert!(matches!(broken.to_model(), Err(Error::Model(_))));
        let mut broken = file;
        broken.f = 5;
        assert!(matches!(broken.to_model(), Err(Error::Model(_))));
    }

    #[test]
    fn spectrum_round_trip() {
        let s = edgehodge_core::spectral::closed_form::torus(&Q::from_integer(1.into()), &Q::new(1.into(), 3.into()), 2);
        assert_eq!(SpectrumFile::from_spectrum(&s).to_spectrum().unwrap(), s);
        let approx = FibreSpectrum::new(
            vec![vec![SpectralLine { value: Real::Approx { value: 0.1 + 0.2, err: 1e-12 }, multiplicity: 3 }]],
            Provenance::Discrete,
        )
        .unwrap();
        assert_eq!(SpectrumFile::from_spectrum(&approx).to_spectrum().unwrap(), approx);
    }

    #[test]
    fn profile_tables() {
        let (xs, ys) = parse_profile_table("# x a\n0.1, 1\n0.2 2.5\n\n1 3 # end\n").unwrap();
        assert_eq!(xs, [0.1, 0.2, 1.0]);
        assert_eq!(ys, [1.0, 2.5, 3.0]);
        assert_eq!(parse_profile_table(&profile_table(&xs, &ys)).unwrap(), (xs, ys));
        assert!(parse_profile_table("1 2 3").is_err());
    }
}
