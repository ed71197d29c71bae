//! Post-processing of birth cycles: greedy shortening, splitting into
//! connected pieces, and local smoothing.

pub mod connect;
pub mod shorten;
pub mod smooth;

pub use connect::split_disconnected;
pub use shorten::{is_pairwise_minimal, shorten_cycles, ShortenConfig, ShortenReport};
pub use smooth::{smooth_h1, smooth_h2, SmoothMove, SmoothedSurface, SmoothedWalk};
