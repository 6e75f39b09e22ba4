//! The JSON form specification read by every command.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bk_forms::{BkSurfaceForm, CollarPiece, FormError, Orientation};
use crate::series::{CircleFunction, CollarSeries, PowerSeries};

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("spec is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("circle {circle}: {given} coefficients given but A has order {order}")]
    TooManyCoefficients {
        circle: String,
        given: usize,
        order: usize,
    },
    #[error(transparent)]
    Form(#[from] FormError),
}

/// `A = Σ_j coeffs[j]·y^j`, known up to `y^order`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensitySpec {
    pub order: usize,
    pub coeffs: Vec<CircleFunction>,
}

impl DensitySpec {
    pub fn from_series(series: &CollarSeries) -> Self {
        let mut coeffs = series.coeffs().to_vec();
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| *c == CircleFunction::default()) {
            coeffs.pop();
        }
        Self {
            order: series.order(),
            coeffs,
        }
    }

    fn to_series(&self, circle: &str) -> Result<CollarSeries, SpecError> {
        if self.coeffs.len() > self.order + 1 {
            return Err(SpecError::TooManyCoefficients {
                circle: circle.to_string(),
                given: self.coeffs.len(),
                order: self.order,
            });
        }
        Ok(PowerSeries::new(self.coeffs.clone(), self.order))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircleSpec {
    pub id: String,
    #[serde(rename = "R")]
    pub half_width: f64,
    pub orientation: Orientation,
    #[serde(rename = "A")]
    pub density: DensitySpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormSpec {
    pub k: u32,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub descriptor: String,
    pub circles: Vec<CircleSpec>,
    pub bulk_integral: f64,
}

impl FormSpec {
    pub fn parse(text: &str) -> Result<Self, SpecError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Parses and validates in one step.
    pub fn load(text: &str) -> Result<BkSurfaceForm, SpecError> {
        Self::parse(text)?.to_form()
    }

    pub fn to_form(&self) -> Result<BkSurfaceForm, SpecError> {
        let collars = self
            .circles
            .iter()
            .map(|c| {
                let density = c.density.to_series(&c.id)?;
                Ok(CollarPiece::new(
                    c.id.clone(),
                    c.half_width,
                    self.k,
                    density,
                    c.orientation,
                )?)
            })
            .collect::<Result<Vec<_>, SpecError>>()?;
        Ok(BkSurfaceForm::new(
            self.k,
            self.descriptor.clone(),
            collars,
            self.bulk_integral,
        )?)
    }

    pub fn from_form(form: &BkSurfaceForm) -> Self {
        Self {
            k: form.pole_order(),
            descriptor: form.descriptor().to_string(),
            circles: form
                .collars()
                .iter()
                .map(|c| CircleSpec {
                    id: c.circle().to_string(),
                    half_width: c.half_width(),
                    orientation: c.orientation(),
                    density: DensitySpec::from_series(c.density()),
                })
                .collect(),
            bulk_integral: form.bulk_integral(),
        }
    }
}

/// The torus `T²` with the singular locus `Z = Z₁ ∪ Z₂`, two parallel
/// circles cutting it into two annuli, and a constant-in-θ density on each
/// collar: `A_r = Σ_j z_r[j] y^j`.
pub fn torus_two_circles(
    k: u32,
    z1: &[f64],
    z2: &[f64],
    half_width: f64,
    bulk_integral: f64,
) -> FormSpec {
    let density = |z: &[f64]| DensitySpec {
        order: (z.len().max(1) - 1).max(k as usize),
        coeffs: z.iter().map(|&c| CircleFunction::constant(c)).collect(),
    };
    let circle = |id: &str, z: &[f64]| CircleSpec {
        id: id.to_string(),
        half_width,
        orientation: Orientation::Positive,
        density: density(z),
    };
    FormSpec {
        k,
        descriptor: format!("torus T^2, Z = Z1 ∪ Z2, k = {k}"),
        circles: vec![circle("Z1", z1), circle("Z2", z2)],
        bulk_integral,
    }
}
