//! The complexified prolongation: adapted frame `{X_α, V_α, X_ᾱ, V_ᾱ}`, its
//! brackets, and the torsion and curvature of the Chern-Finsler connection.

mod brackets;
mod curvature;
mod frame;
mod misc;
mod torsion;

pub use brackets::{adapted_brackets, bracket_oracle, horizontal_residual, BracketOracle, BracketTable};
pub use curvature::{curvature_oracle, curvature_table, listing, CurvatureTable, Listing, CURVATURE_FAMILIES};
pub use frame::{apply, conj_coeffs, coordinate_field, FrameKind, FrameVector};
pub use misc::{
    decomposition_residual, differential_decomposition, kahler_residual, metric_compatibility_residual, spray_check,
    Decomposition, SprayCheck,
};
pub use torsion::{torsion_from_definition, torsion_table, ConnectionTable, TorsionTable, TORSION_FAMILIES};

use crate::algebroid::AlgebroidModel;
use crate::calculus::Point;
use crate::chernfinsler::{Depth, PointGeometry};
use crate::error::GeometryError;

/// Everything the prolongation module derives at one point.
#[derive(Clone, Debug)]
pub struct Prolongation {
    pub geometry: PointGeometry,
    pub brackets: BracketTable,
    pub connection: ConnectionTable,
    pub torsion: TorsionTable,
    pub torsion_general: TorsionTable,
    pub curvature: CurvatureTable,
}

impl Prolongation {
    pub fn compute(model: &AlgebroidModel, p: &Point) -> Result<Self, GeometryError> {
        Ok(Self::from_geometry(PointGeometry::compute(model, p, Depth::Full)?))
    }

    pub fn from_geometry(geometry: PointGeometry) -> Self {
        let brackets = adapted_brackets(&geometry);
        let connection = ConnectionTable::new(&geometry);
        let torsion = torsion_table(&geometry, &brackets, true);
        let torsion_general = torsion_table(&geometry, &brackets, false);
        let curvature = curvature_table(&geometry, &brackets);
        Self { geometry, brackets, connection, torsion, torsion_general, curvature }
    }

    pub fn m(&self) -> usize {
        self.geometry.m()
    }

    pub fn curvature_oracle(&self, z: FrameVector, w: FrameVector, v: FrameVector) -> alloc::vec::Vec<num_complex::Complex64> {
        curvature_oracle(&self.geometry, &self.connection, &self.brackets, z, w, v)
    }
}
