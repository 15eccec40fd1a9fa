//! Flat geometry of cylinder chains: vertical decompositions by orbit tracing
//! and the regular 14-gon.

mod polygon;
mod surface;

pub use polygon::{build_veech_14gon, HorizontalCylinder, NormalizedChain, Veech14};
pub use surface::{
    build_chain_surface, moduli_ratio_check, predicted_decomposition, rescale, side_area, vertical_side_decomposition,
    ChainSurface, ModuliRatio, Side, VerticalCylinder,
};
