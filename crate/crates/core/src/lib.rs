//! Computer algebra for differential forms with order-`k` poles along a
//! union of circles in a surface.

pub mod series;
pub mod bk_forms;
pub mod volume;
pub mod normalize;
pub mod classify;
pub mod generate;
pub mod cli;
