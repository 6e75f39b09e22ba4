//! Machine-readable command output with a canonical byte representation.

use std::io;

use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::bk_forms::{CircleLaurentData, Orientation};
use crate::classify::LLDecomposition;
use crate::series::CircleFunction;
use crate::volume::GapRow;

use super::spec::DensitySpec;

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub descriptor: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normal_form: Option<Vec<CircleNormalForm>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub volume_polynomial: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub liouville_volume: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ll_decomposition: Option<LLDecomposition>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub asymptotic_gaps: Option<Vec<GapRow>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gaps_nonincreasing: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classification: Option<Classification>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normalization: Option<Normalization>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub selftest: Option<Vec<SelftestCheck>>,
}

/// Laurent data of one circle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircleNormalForm {
    pub circle: String,
    pub orientation: Orientation,
    pub half_width: f64,
    pub iota_l: CircleFunction,
    /// `alpha[i − 1]` is `α_{−i}`.
    pub alpha: Vec<CircleFunction>,
    pub beta: DensitySpec,
    /// Orientation-signed `∫α_{−i}`, same indexing as `alpha`.
    pub residue_integrals: Vec<f64>,
}

impl CircleNormalForm {
    pub fn from_data(data: &CircleLaurentData) -> Self {
        let k = data.pole_order();
        Self {
            circle: data.circle.clone(),
            orientation: data.orientation,
            half_width: data.half_width,
            iota_l: data.alpha(k).clone(),
            alpha: data.singular.clone(),
            beta: DensitySpec::from_series(&data.smooth),
            residue_integrals: (1..=k).map(|i| data.residue_integral(i)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Classification {
    pub mode: String,
    pub tol: f64,
    pub verdict: String,
    pub exit_code: i32,
    pub invariants: Vec<LLDecomposition>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Normalization {
    /// `(a_{−1}, …, a_{−k})`.
    pub residues: Vec<f64>,
    pub order: usize,
    /// Coefficients of `P`, lowest degree first.
    pub polynomial: Vec<f64>,
    /// `(b_{−k}, …, b_{−1})` of `Σ a_{−i} P'/P^i`.
    pub expansion: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SelftestCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Pretty JSON with every float written as `d.dddddddddddddddde±x`
/// (17 significant digits), so parsing and re-emitting is lossless and
/// byte-stable.
pub struct CanonicalFormatter {
    inner: PrettyFormatter<'static>,
}

impl Default for CanonicalFormatter {
    fn default() -> Self {
        Self {
            inner: PrettyFormatter::with_indent(b"  "),
        }
    }
}

impl Formatter for CanonicalFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            write!(writer, "{value:.16e}")
        } else {
            writer.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.begin_array(writer)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_array(writer)
    }

    fn begin_array_value<W: ?Sized + io::Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.inner.begin_array_value(writer, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_array_value(writer)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.begin_object(writer)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_object(writer)
    }

    fn begin_object_key<W: ?Sized + io::Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.inner.begin_object_key(writer, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.begin_object_value(writer)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_object_value(writer)
    }
}

/// Canonical JSON text of any serializable value, newline-terminated.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, CanonicalFormatter::default());
    value
        .serialize(&mut ser)
        .expect("report types serialize infallibly");
    out.push(b'\n');
    String::from_utf8(out).expect("serde_json writes UTF-8")
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            ..Self::default()
        }
    }

    pub fn to_json(&self) -> String {
        to_canonical_json(self)
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut line = |s: String| {
            out.push_str(&s);
            out.push('\n');
        };
        line(format!("command: {}", self.command));
        if let Some(d) = &self.descriptor {
            if !d.is_empty() {
                line(format!("form: {d}"));
            }
        }
        if let Some(k) = self.k {
            line(format!("pole order k = {k}"));
        }
        if let Some(circles) = &self.normal_form {
            if circles.is_empty() {
                line("normal form: no singular circles".into());
            }
            for c in circles {
                line(format!(
                    "circle {} (orientation {}, R = {})",
                    c.circle,
                    i8::from(c.orientation),
                    c.half_width
                ));
                line(format!("  iota_L = {}", c.iota_l));
                for (i, a) in c.alpha.iter().enumerate() {
                    line(format!(
                        "  alpha_-{} = {}    integral = {}",
                        i + 1,
                        a,
                        c.residue_integrals[i]
                    ));
                }
                let beta: Vec<String> = c
                    .beta
                    .coeffs
                    .iter()
                    .enumerate()
                    .map(|(j, b)| format!("[{b}] y^{j}"))
                    .collect();
                line(format!("  beta = {} + O(y^{})", beta.join(" + "), c.beta.order + 1));
            }
        }
        if let Some(p) = &self.volume_polynomial {
            line(format!("P(t) = {}", format_polynomial(p, "t")));
        }
        if let Some(v) = self.liouville_volume {
            line(format!("Liouville volume: {v}"));
        }
        if let Some(ll) = &self.ll_decomposition {
            line(format!("LL decomposition: volume {}", ll.liouville_volume));
            for (id, row) in ll.circles.iter().zip(&ll.residues) {
                line(format!("  {id}: residues {row:?}"));
            }
        }
        if let Some(gaps) = &self.asymptotic_gaps {
            line("eps  |P(1/eps) - vol_eps|".into());
            for g in gaps {
                line(format!("  {:e}  {:e}", g.eps, g.gap));
            }
        }
        if let Some(mono) = self.gaps_nonincreasing {
            line(format!("gaps nonincreasing: {mono}"));
        }
        if let Some(c) = &self.classification {
            line(format!("mode: {} (tol {:e})", c.mode, c.tol));
            for (n, ll) in c.invariants.iter().enumerate() {
                line(format!("  form {n}: volume {}, residues {:?}", ll.liouville_volume, ll.residues));
            }
            line(format!("verdict: {}", c.verdict));
        }
        if let Some(n) = &self.normalization {
            line(format!("residues (a_-1..a_-k): {:?}", n.residues));
            line(format!("P(y) = {}", format_polynomial(&n.polynomial, "y")));
            line(format!("expansion (b_-k..b_-1): {:?}", n.expansion));
        }
        if let Some(checks) = &self.selftest {
            for c in checks {
                let status = if c.passed { "PASS" } else { "FAIL" };
                line(format!("{status} {}: {}", c.name, c.detail));
            }
        }
        out
    }
}

/// `c₀ + c₁x + c₂x^2 …`, skipping zero terms.
pub fn format_polynomial(coeffs: &[f64], var: &str) -> String {
    let mut out = String::new();
    for (j, &c) in coeffs.iter().enumerate() {
        if c == 0.0 {
            continue;
        }
        let monomial = match j {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{j}"),
        };
        let magnitude = c.abs();
        let body = if j > 0 && magnitude == 1.0 {
            monomial
        } else {
            format!("{magnitude}{monomial}")
        };
        if out.is_empty() {
            if c < 0.0 {
                out.push('-');
            }
        } else {
            out.push_str(if c < 0.0 { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_text() {
        assert_eq!(format_polynomial(&[-2.0, 2.0], "t"), "-2 + 2t");
        assert_eq!(format_polynomial(&[0.0, 0.0], "t"), "0");
        assert_eq!(format_polynomial(&[0.0, 1.0, -1.0], "y"), "y - y^2");
        assert_eq!(format_polynomial(&[0.5, 0.0, 0.0, -3.0], "t"), "0.5 - 3t^3");
    }

    #[test]
    fn floats_use_seventeen_digits() {
        let json = to_canonical_json(&vec![0.1, -2.0, 1e-300]);
        assert!(json.contains("1.0000000000000001e-1"));
        assert!(json.contains("-2.0000000000000000e0"));
        assert!(json.contains("1.0000000000000000e-300"));
    }

    #[test]
    fn report_round_trip_is_byte_identical() {
        let mut r = Report::new("volume");
        r.k = Some(2);
        r.volume_polynomial = Some(vec![-2.0, 2.0 / 3.0]);
        r.liouville_volume = Some(std::f64::consts::PI);
        let text = r.to_json();
        let again = Report::from_json(&text).unwrap();
        assert_eq!(again, r);
        assert_eq!(again.to_json(), text);
    }
}
