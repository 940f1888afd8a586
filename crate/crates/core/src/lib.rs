// `!(a < b)` is how NaN gets rejected
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod angular;
pub mod linalg;
pub mod model;
pub mod scalar;
pub mod spectra;
pub mod superop;
pub mod validate;

pub use linalg::ComplexMatrix;
pub use scalar::{QuadDouble, Real};

/// Double-precision instantiations.
pub mod f64 {
    pub type ComplexMatrix = crate::linalg::ComplexMatrix<f64>;
    pub type ModelParams = crate::model::ModelParams<f64>;
    pub type LindbladSystem = crate::model::LindbladSystem<f64>;
    pub type SuperOperator = crate::superop::SuperOperator<f64>;
    pub type EPReport = crate::spectra::EPReport<f64>;
}

/// Quad-double instantiations, for certification near exceptional points.
pub mod quad {
    use crate::scalar::QuadDouble;

    pub type ComplexMatrix = crate::linalg::ComplexMatrix<QuadDouble>;
    pub type ModelParams = crate::model::ModelParams<QuadDouble>;
    pub type LindbladSystem = crate::model::LindbladSystem<QuadDouble>;
    pub type SuperOperator = crate::superop::SuperOperator<QuadDouble>;
    pub type EPReport = crate::spectra::EPReport<QuadDouble>;
}
