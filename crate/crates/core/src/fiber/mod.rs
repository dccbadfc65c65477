//! Exact HE11 mode of a vacuum-clad nanofiber and its quasi-linearly
//! polarized fields.
//!
//! Coordinates: z along the fiber, atoms in the x–z plane (φ = 0 and φ = π),
//! quantization axis +y.

mod field;
mod mode;

pub use field::{
    write_field_csv, ComplexVector, Configuration, Direction, LightField, PolarGrid, Position, FIELD_CSV_HEADER,
};
pub use mode::{FiberSpec, GuidedMode, SECOND_MODE_CUTOFF};
