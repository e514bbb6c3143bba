//! Norms, extrema, and the dissipation and energy functionals of a field.
//!
//! Integrals are unnormalized over `[0, 2π)` and evaluated with the trapezoid
//! rule, which is spectrally accurate for smooth periodic integrands.
//!
//! The dissipation functional `𝒟 = ½ ∫ Λu log(u² + (Hu)²) dx` has a local form
//! and a symmetric double-integral form with kernel `1/sin²((x-y)/2)`; both
//! are provided so they can be cross-checked. Along the flow,
//! `d/dt ‖u‖²_{L²} = -2𝒟`.

use std::f64::consts::PI;
use std::io;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{Field, Spectrum};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasicStats {
    pub mass: f64,
    pub l2sq: f64,
    pub min: f64,
    pub max: f64,
}

pub fn basic_stats(field: &Field) -> BasicStats {
    let dx = field.grid().dx();
    let v = field.values();
    BasicStats {
        mass: v.iter().sum::<f64>() * dx,
        l2sq: v.iter().map(|x| x * x).sum::<f64>() * dx,
        min: field.min(),
        max: field.max(),
    }
}

/// `‖u‖_{A^s} = Σ_k |k|^s |û(k)|`. The `k = 0` mode only counts for `s = 0`.
pub fn wiener_norm(field: &Field, s: f64) -> Result<f64> {
    if !(s >= 0.0) {
        return Err(Error::param(
            "s",
            format!("Wiener order must be >= 0, got {s}"),
        ));
    }
    Ok(wiener_norm_of(&field.spectrum(), s))
}

pub(crate) fn wiener_norm_of(spec: &Spectrum, s: f64) -> f64 {
    spec.modes().map(|(k, c)| weight(k, s) * c.norm()).sum()
}

/// `‖u‖_{H^s} = ‖Λ^s u‖_{L²} = (2π Σ_k |k|^{2s} |û(k)|²)^{1/2}`.
pub fn sobolev_norm(field: &Field, s: f64) -> Result<f64> {
    let spec = field.spectrum();
    if s < 0.0 {
        // reuse the mean-zero check of Λ^s
        spec.fractional_lambda(s)?;
    }
    Ok(sobolev_norm_of(&spec, s))
}

pub(crate) fn sobolev_norm_of(spec: &Spectrum, s: f64) -> f64 {
    let sum: f64 = spec
        .modes()
        .map(|(k, c)| weight(k, 2.0 * s) * c.norm_sqr())
        .sum();
    (2.0 * PI * sum).sqrt()
}

fn weight(k: i64, s: f64) -> f64 {
    if k == 0 {
        if s == 0.0 {
            1.0
        } else {
            0.0
        }
    } else {
        (k.abs() as f64).powf(s)
    }
}

fn require_positive(field: &Field) -> Result<()> {
    let min = field.min();
    if min > 0.0 {
        Ok(())
    } else {
        Err(Error::NonPositiveField { min })
    }
}

/// Pointwise `u`, `Hu`, `∂_x u`, `Λu` of a positive field.
struct Primitives {
    u: Vec<f64>,
    hu: Vec<f64>,
    ux: Vec<f64>,
    lu: Vec<f64>,
}

impl Primitives {
    fn of(field: &Field) -> Self {
        let spec = field.spectrum();
        Self {
            u: field.values().to_vec(),
            hu: spec.hilbert().to_field().into_values(),
            ux: spec.derivative().to_field().into_values(),
            lu: spec.lambda().to_field().into_values(),
        }
    }

    fn q(&self, j: usize) -> f64 {
        self.u[j] * self.u[j] + self.hu[j] * self.hu[j]
    }
}

/// `𝒟 = ½ ∫ Λu · log(u² + (Hu)²) dx`.
pub fn dissipation_local(field: &Field) -> Result<f64> {
    require_positive(field)?;
    let p = Primitives::of(field);
    let sum: f64 = (0..field.len()).map(|j| p.lu[j] * p.q(j).ln()).sum();
    Ok(0.5 * sum * field.grid().dx())
}

/// The quotient form `-∫ [u ∂_xu Hu - u² Λu] / (u² + (Hu)²) dx`, equal to
/// [`dissipation_local`] for smooth positive fields.
pub fn dissipation_quotient(field: &Field) -> Result<f64> {
    require_positive(field)?;
    let p = Primitives::of(field);
    let sum: f64 = (0..field.len())
        .map(|j| (p.u[j] * p.ux[j] * p.hu[j] - p.u[j] * p.u[j] * p.lu[j]) / p.q(j))
        .sum();
    Ok(-sum * field.grid().dx())
}

/// `𝒟 = (1/16π) ∫∫ (u(x)-u(y)) (L(x)-L(y)) / sin²((x-y)/2) dx dy` with
/// `L = log(u² + (Hu)²)`, summed over all node pairs. The integrand has a
/// removable singularity on the diagonal; its limit `4 ∂_xu ∂_xL` is used
/// there. O(n²).
pub fn dissipation_symmetric(field: &Field) -> Result<f64> {
    require_positive(field)?;
    let n = field.len();
    let grid = field.grid();
    let dx = grid.dx();
    let p = Primitives::of(field);
    let log_q: Vec<f64> = (0..n).map(|j| p.q(j).ln()).collect();
    // ∂_x L = 2 (u ∂_xu + Hu Λu) / Q, using ∂_x Hu = Λu
    let dlog_q: Vec<f64> = (0..n)
        .map(|j| 2.0 * (p.u[j] * p.ux[j] + p.hu[j] * p.lu[j]) / p.q(j))
        .collect();
    // kernel depends only on the node offset
    let kernel: Vec<f64> = (0..n)
        .map(|d| {
            let s = (0.5 * grid.node(d)).sin();
            if d == 0 {
                0.0
            } else {
                1.0 / (s * s)
            }
        })
        .collect();

    let mut diag = 0.0;
    let mut off = 0.0;
    for j in 0..n {
        diag += 4.0 * p.ux[j] * dlog_q[j];
        for k in (j + 1)..n {
            off += (p.u[j] - p.u[k]) * (log_q[j] - log_q[k]) * kernel[k - j];
        }
    }
    Ok((diag + 2.0 * off) * dx * dx / (16.0 * PI))
}

/// `‖u‖_{H²} := (‖u‖²_{L²} + ‖Λ²u‖²_{L²})^{1/2}`.
pub fn h2_norm(field: &Field) -> f64 {
    let l2sq = basic_stats(field).l2sq;
    let top = sobolev_norm_of(&field.spectrum(), 2.0);
    (l2sq + top * top).sqrt()
}

/// `𝓔 = 1 / min_x u + ‖u‖_{H²}`.
pub fn energy_functional(field: &Field) -> Result<f64> {
    require_positive(field)?;
    Ok(1.0 / field.min() + h2_norm(field))
}

/// One time slice of every tracked quantity. `d_local` and `energy` are only
/// defined for strictly positive fields; `d_sym` only when requested.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsRecord {
    pub t: f64,
    pub mass: f64,
    pub l2sq: f64,
    pub min: f64,
    pub max: f64,
    pub a0: f64,
    pub a1: f64,
    pub hhalf: f64,
    pub d_local: Option<f64>,
    pub d_sym: Option<f64>,
    pub energy: Option<f64>,
}

impl DiagnosticsRecord {
    pub const COLUMNS: [&'static str; 11] = [
        "t", "mass", "l2sq", "min", "max", "a0", "a1", "hhalf", "d_local", "d_sym", "energy",
    ];

    pub fn measure(t: f64, field: &Field, with_symmetric: bool) -> Self {
        let stats = basic_stats(field);
        let fluct = field.spectrum().without_mean();
        let positive = stats.min > 0.0;
        Self {
            t,
            mass: stats.mass,
            l2sq: stats.l2sq,
            min: stats.min,
            max: stats.max,
            a0: wiener_norm_of(&fluct, 0.0),
            a1: wiener_norm_of(&fluct, 1.0),
            hhalf: sobolev_norm_of(&fluct, 0.5),
            d_local: positive.then(|| dissipation_local(field).ok()).flatten(),
            d_sym: (positive && with_symmetric)
                .then(|| dissipation_symmetric(field).ok())
                .flatten(),
            energy: positive.then(|| energy_functional(field).ok()).flatten(),
        }
    }

    /// `mass / 2π`.
    pub fn mean(&self) -> f64 {
        self.mass / (2.0 * PI)
    }
}

/// Writes records as CSV with the fixed column order of
/// [`DiagnosticsRecord::COLUMNS`]; absent values are empty cells.
pub fn write_csv<W: io::Write>(writer: W, records: &[DiagnosticsRecord]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    if records.is_empty() {
        w.write_record(DiagnosticsRecord::COLUMNS)?;
    }
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: io::Read>(reader: R) -> csv::Result<Vec<DiagnosticsRecord>> {
    csv::Reader::from_reader(reader).deserialize().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::PeriodicGrid;

    fn field(n: usize, f: impl Fn(f64) -> f64) -> Field {
        Field::from_fn(PeriodicGrid::new(n).unwrap(), f).unwrap()
    }

    #[test]
    fn stats_of_constant() {
        let s = basic_stats(&field(32, |_| 2.0));
        assert!((s.mass - 4.0 * PI).abs() < 1e-13);
        assert!((s.l2sq - 8.0 * PI).abs() < 1e-13);
        assert_eq!((s.min, s.max), (2.0, 2.0));
    }

    #[test]
    fn stats_of_cosine() {
        let s = basic_stats(&field(64, f64::cos));
        assert!(s.mass.abs() < 1e-13);
        assert!((s.l2sq - PI).abs() < 1e-13);
        assert!((s.min + 1.0).abs() < 1e-12);
        assert!((s.max - 1.0).abs() < 1e-12);
    }

    #[test]
    fn grid_min_hits_node_at_pi() {
        let s = basic_stats(&field(64, |x| 1.0 + 0.5 * x.cos()));
        assert!((s.min - 0.5).abs() < 1e-6);
    }

    #[test]
    fn wiener_examples() {
        let v = field(32, |x| 0.5 * x.cos());
        assert!((wiener_norm(&v, 0.0).unwrap() - 0.5).abs() < 1e-14);
        assert!((wiener_norm(&v, 1.0).unwrap() - 0.5).abs() < 1e-14);
        let v = field(32, |x| 0.5 * (2.0 * x).cos());
        assert!((wiener_norm(&v, 0.0).unwrap() - 0.5).abs() < 1e-14);
        assert!((wiener_norm(&v, 1.0).unwrap() - 1.0).abs() < 1e-14);
        assert!(wiener_norm(&v, -1.0).is_err());
    }

    #[test]
    fn sobolev_half_of_cosine() {
        let h = sobolev_norm(&field(32, f64::cos), 0.5).unwrap();
        assert!((h - PI.sqrt()).abs() < 1e-13);
        assert!(sobolev_norm(&field(32, |x| 1.0 + x.cos()), -0.5).is_err());
    }

    #[test]
    fn dissipation_of_constant_vanishes() {
        let u = field(64, |_| 1.7);
        assert_eq!(dissipation_local(&u).unwrap(), 0.0);
        assert_eq!(dissipation_symmetric(&u).unwrap(), 0.0);
    }

    #[test]
    fn dissipation_requires_positivity() {
        let u = field(64, |x| x.cos());
        assert!(matches!(
            dissipation_local(&u),
            Err(Error::NonPositiveField { .. })
        ));
        assert!(matches!(
            dissipation_symmetric(&u),
            Err(Error::NonPositiveField { .. })
        ));
        assert!(matches!(
            energy_functional(&u),
            Err(Error::NonPositiveField { .. })
        ));
    }

    #[test]
    fn dissipation_forms_agree() {
        let u = field(128, |x| 1.0 + 0.1 * x.cos());
        let local = dissipation_local(&u).unwrap();
        let quot = dissipation_quotient(&u).unwrap();
        let sym = dissipation_symmetric(&u).unwrap();
        assert!(((local - quot) / local).abs() < 1e-8, "{local} vs {quot}");
        assert!(((local - sym) / local).abs() < 1e-3, "{local} vs {sym}");
    }

    #[test]
    fn symmetric_dissipation_self_converges() {
        let a = dissipation_symmetric(&field(128, |x| 1.0 + 0.1 * x.cos())).unwrap();
        let b = dissipation_symmetric(&field(256, |x| 1.0 + 0.1 * x.cos())).unwrap();
        assert!(((a - b) / b).abs() < 1e-3);
    }

    #[test]
    fn energy_of_unit_constant() {
        let e = energy_functional(&field(32, |_| 1.0)).unwrap();
        assert!((e - (1.0 + (2.0 * PI).sqrt())).abs() < 1e-13);
    }

    #[test]
    fn energy_by_direct_quadrature() {
        // u = 2 + cos x: min 1, ∫u² = 9π, ∫(u'')² = ∫cos² = π
        let n = 64;
        let u = field(n, |x| 2.0 + x.cos());
        let dx = 2.0 * PI / n as f64;
        let l2sq: f64 = (0..n)
            .map(|j| {
                let x = j as f64 * dx;
                (2.0 + x.cos()).powi(2)
            })
            .sum::<f64>()
            * dx;
        let top: f64 = (0..n).map(|j| (j as f64 * dx).cos().powi(2)).sum::<f64>() * dx;
        let oracle = 1.0 + (l2sq + top).sqrt();
        assert!((energy_functional(&u).unwrap() - oracle).abs() < 1e-12);
        assert!((oracle - (1.0 + (10.0 * PI).sqrt())).abs() < 1e-12);
    }

    #[test]
    fn record_of_signed_field_omits_positive_only_entries() {
        let r = DiagnosticsRecord::measure(0.0, &field(32, f64::cos), true);
        assert!(r.d_local.is_none() && r.d_sym.is_none() && r.energy.is_none());
        assert!(r.min <= r.mean() && r.mean() <= r.max);
    }

    #[test]
    fn csv_header_and_empty_cells() {
        let u = field(32, |x| 1.0 + 0.2 * x.cos());
        let recs = vec![
            DiagnosticsRecord::measure(0.0, &u, false),
            DiagnosticsRecord::measure(0.5, &u, true),
        ];
        let mut buf = Vec::new();
        write_csv(&mut buf, &recs).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), DiagnosticsRecord::COLUMNS.join(","));
        let first: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(first.len(), 11);
        assert_eq!(first[9], "");
        assert_eq!(read_csv(text.as_bytes()).unwrap(), recs);
    }
}
