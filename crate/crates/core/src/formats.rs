//! File formats: sparse JSON states, count CSV, scan CSV, report JSON.
//!
//! Doubles in CSV output are written with 17 significant digits.

use std::io::{Read, Write};

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{pure_to_density, DensityOperator, PureState, TwoModeBasis};
use crate::linalg::{CMatrix, ZERO};
use crate::multimode::{MultiModeBasis, MultiModeDensity, Occupation};
use crate::optics::CountDistribution;
use crate::settings::Tolerances;
use crate::states::State;
use crate::verify::{CriterionReport, PhaseScan};

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Pure,
    Density,
}

/// `[nA, nB]` for single-mode files, `[[nA_1..nA_m], [nB_1..nB_m]]` for
/// multimode files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OccupationKey {
    Pair([usize; 2]),
    Modes([Vec<usize>; 2]),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateEntry {
    pub row: OccupationKey,
    pub col: Option<OccupationKey>,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    /// Per-port cutoff for single-mode files, total-photon cutoff for
    /// multimode files.
    pub n_max: usize,
    pub kind: StateKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modes: Option<usize>,
    pub entries: Vec<StateEntry>,
}

fn pair(key: &OccupationKey, field: &str) -> Result<(usize, usize)> {
    match key {
        OccupationKey::Pair([a, b]) => Ok((*a, *b)),
        OccupationKey::Modes(_) => Err(Error::field(
            field,
            "expected [nA, nB] (the file has no \"modes\" key)",
        )),
    }
}

fn modes_key(key: &OccupationKey, m: usize, field: &str) -> Result<Occupation> {
    match key {
        OccupationKey::Modes([a, b]) if a.len() == m && b.len() == m => {
            Occupation::new(a.clone(), b.clone())
        }
        _ => Err(Error::field(
            field,
            format!("expected [[nA_1..nA_{m}], [nB_1..nB_{m}]]"),
        )),
    }
}

impl StateFile {
    pub fn into_state(self) -> Result<State> {
        match self.modes {
            None => self.into_single().map(State::Single),
            Some(m) => self.into_multi(m).map(State::Multi),
        }
    }

    fn check_entry(e: &StateEntry, field: &str) -> Result<Complex64> {
        if !e.re.is_finite() || !e.im.is_finite() {
            return Err(Error::field(field, "non-finite amplitude"));
        }
        Ok(Complex64::new(e.re, e.im))
    }

    fn into_single(self) -> Result<DensityOperator> {
        let basis =
            TwoModeBasis::new(self.n_max).map_err(|e| Error::field("n_max", e.to_string()))?;
        let locate = |key: &OccupationKey, field: String| -> Result<usize> {
            let (a, b) = pair(key, &field)?;
            basis
                .index(a, b)
                .map_err(|e| Error::field(field, e.to_string()))
        };
        match self.kind {
            StateKind::Pure => {
                let mut amps = DVector::from_element(basis.dim(), ZERO);
                for (k, e) in self.entries.iter().enumerate() {
                    let field = format!("entries[{k}]");
                    if e.col.is_some() {
                        return Err(Error::field(
                            format!("{field}.col"),
                            "must be null for a pure state",
                        ));
                    }
                    let z = Self::check_entry(e, &field)?;
                    amps[locate(&e.row, format!("{field}.row"))?] += z;
                }
                let psi = PureState::new(basis, amps)?;
                pure_to_density(&psi).map_err(|e| Error::field("entries", e.to_string()))
            }
            StateKind::Density => {
                let mut m = CMatrix::zeros(basis.dim(), basis.dim());
                for (k, e) in self.entries.iter().enumerate() {
                    let field = format!("entries[{k}]");
                    let z = Self::check_entry(e, &field)?;
                    let col = e.col.as_ref().ok_or_else(|| {
                        Error::field(format!("{field}.col"), "required for a density matrix")
                    })?;
                    let i = locate(&e.row, format!("{field}.row"))?;
                    let j = locate(col, format!("{field}.col"))?;
                    m[(i, j)] += z;
                }
                let rho = DensityOperator::from_matrix(basis, m)?;
                crate::fock::validate(&rho)
                    .into_result()
                    .map_err(|e| Error::field("entries", e.to_string()))?;
                Ok(rho)
            }
        }
    }

    fn into_multi(self, m: usize) -> Result<MultiModeDensity> {
        let basis =
            MultiModeBasis::new(m, self.n_max).map_err(|e| Error::field("modes", e.to_string()))?;
        let locate = |key: &OccupationKey, field: String| -> Result<usize> {
            let occ = modes_key(key, m, &field)?;
            basis
                .index(&occ)
                .map_err(|e| Error::field(field, e.to_string()))
        };
        let mut matrix = CMatrix::zeros(basis.dim(), basis.dim());
        match self.kind {
            StateKind::Pure => {
                let mut v = DVector::from_element(basis.dim(), ZERO);
                for (k, e) in self.entries.iter().enumerate() {
                    let field = format!("entries[{k}]");
                    if e.col.is_some() {
                        return Err(Error::field(
                            format!("{field}.col"),
                            "must be null for a pure state",
                        ));
                    }
                    v[locate(&e.row, format!("{field}.row"))?] += Self::check_entry(e, &field)?;
                }
                let n2 = v.norm_squared();
                if (n2 - 1.0).abs() > Tolerances::global().normalization {
                    return Err(Error::field(
                        "entries",
                        format!("pure state has squared norm {n2}"),
                    ));
                }
                matrix = &v * v.adjoint();
            }
            StateKind::Density => {
                for (k, e) in self.entries.iter().enumerate() {
                    let field = format!("entries[{k}]");
                    let z = Self::check_entry(e, &field)?;
                    let col = e.col.as_ref().ok_or_else(|| {
                        Error::field(format!("{field}.col"), "required for a density matrix")
                    })?;
                    let i = locate(&e.row, format!("{field}.row"))?;
                    let j = locate(col, format!("{field}.col"))?;
                    matrix[(i, j)] += z;
                }
            }
        }
        let rho = MultiModeDensity::from_matrix(basis, matrix)?;
        rho.validate()
            .into_result()
            .map_err(|e| Error::field("entries", e.to_string()))?;
        Ok(rho)
    }

    /// Sparse density-matrix file for a single-mode state.
    pub fn from_density(rho: &DensityOperator) -> Self {
        let basis = rho.basis();
        let mut entries = Vec::new();
        for (i, a, b) in basis.iter() {
            for (j, a2, b2) in basis.iter() {
                let z = rho.matrix()[(i, j)];
                if z != ZERO {
                    entries.push(StateEntry {
                        row: OccupationKey::Pair([a, b]),
                        col: Some(OccupationKey::Pair([a2, b2])),
                        re: z.re,
                        im: z.im,
                    });
                }
            }
        }
        Self {
            n_max: basis.n_max(),
            kind: StateKind::Density,
            modes: None,
            entries,
        }
    }

    pub fn from_pure(psi: &PureState) -> Self {
        let entries = psi
            .basis()
            .iter()
            .filter(|&(i, _, _)| psi.amplitudes()[i] != ZERO)
            .map(|(i, a, b)| StateEntry {
                row: OccupationKey::Pair([a, b]),
                col: None,
                re: psi.amplitudes()[i].re,
                im: psi.amplitudes()[i].im,
            })
            .collect();
        Self {
            n_max: psi.basis().n_max(),
            kind: StateKind::Pure,
            modes: None,
            entries,
        }
    }

    pub fn from_multimode(rho: &MultiModeDensity) -> Self {
        let basis = rho.basis();
        let key = |o: &Occupation| {
            OccupationKey::Modes([
                o.port(crate::fock::Port::A).to_vec(),
                o.port(crate::fock::Port::B).to_vec(),
            ])
        };
        let mut entries = Vec::new();
        for (i, ri) in basis.elements().iter().enumerate() {
            for (j, cj) in basis.elements().iter().enumerate() {
                let z = rho.matrix()[(i, j)];
                if z != ZERO {
                    entries.push(StateEntry {
                        row: key(ri),
                        col: Some(key(cj)),
                        re: z.re,
                        im: z.im,
                    });
                }
            }
        }
        Self {
            n_max: basis.n_max_total(),
            kind: StateKind::Density,
            modes: Some(basis.modes()),
            entries,
        }
    }
}

pub fn parse_state_json(text: &str) -> Result<State> {
    let file: StateFile = serde_json::from_str(text)?;
    file.into_state()
}

pub fn state_to_json(state: &State) -> Result<String> {
    let file = match state {
        State::Single(rho) => StateFile::from_density(rho),
        State::Multi(rho) => StateFile::from_multimode(rho),
    };
    Ok(serde_json::to_string_pretty(&file)?)
}

/// `i,j,p` rows for every nonzero entry.
pub fn write_counts_csv<W: Write>(p: &CountDistribution, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["i", "j", "p"]).map_err(csv_err)?;
    for (i, j, prob) in p.entries() {
        w.write_record([i.to_string(), j.to_string(), fmt_f64(prob)])
            .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_counts_csv<R: Read>(input: R) -> Result<CountDistribution> {
    #[derive(Deserialize)]
    struct Row {
        i: usize,
        j: usize,
        p: f64,
    }
    let mut rdr = csv::Reader::from_reader(input);
    let mut rows = Vec::new();
    for (k, rec) in rdr.deserialize::<Row>().enumerate() {
        let row = rec.map_err(|e| {
            let line = e.position().map(|p| p.line()).unwrap_or(k as u64 + 2);
            Error::field(format!("line {line}"), e.to_string())
        })?;
        rows.push(row);
    }
    let n_max = rows.iter().map(|r| r.i.max(r.j)).max().unwrap_or(0).max(2);
    let side = n_max + 1;
    let mut table = vec![0.0; side * side];
    for r in rows {
        table[r.i * side + r.j] += r.p;
    }
    CountDistribution::from_table(n_max, table)
}

/// `phi,lhs,rhs,detected` with `detected` as 0/1.
pub fn write_scan_csv<W: Write>(scan: &PhaseScan, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["phi", "lhs", "rhs", "detected"])
        .map_err(csv_err)?;
    for pt in &scan.points {
        w.write_record([
            fmt_f64(pt.phi),
            fmt_f64(pt.lhs),
            fmt_f64(pt.rhs),
            u8::from(pt.detected).to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn report_to_json(report: &CriterionReport) -> Result<String> {
    Ok(serde_json::to_string_pretty(report)?)
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e.to_string()))
}
