//! Points, derivative jets, first-order forward values, finite-difference
//! oracles and seeded sampling.

mod fd;
mod grad;
mod jet;
mod layout;
mod point;
mod sample;

pub use fd::{
    directional_fd, directional_oracle, fd_partial, fd_wirtinger, wirtinger_gradient_fd,
    wirtinger_to_real, FD_STEP,
};
pub use grad::Grad;
pub use jet::{jet, DerivativeCache, Jet, SlotMultiset, MAX_JET_ORDER};
pub use layout::SlotLayout;
pub use point::Point;
pub use sample::{sample_points, Domain, PointSampler};
