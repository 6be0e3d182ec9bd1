//! Floating-point Haar sampling and empirical checks against the exact
//! engine.
//!
//! Gaussians come from the Marsaglia polar method on a seeded ChaCha8
//! stream, so every report is reproducible from its `(seed, stream)`.

mod channel;
mod estimate;
mod sampling;

pub use channel::{channel_demo, corner_rank, limit_spectrum, ChannelReport, ChannelSample, CHANNEL_TOLERANCE, MAX_CHANNEL_NK};
pub use estimate::{
    degree_queries, estimate_moment, golden_set, moment_report, trace_clt_demo, GOLDEN_SET, MomentEstimate, MomentReport, MomentRow, TraceCltReport, CHUNK,
    MAX_SAMPLE_N, Z_TOLERANCE,
};
pub use sampling::{
    complex_normal, ginibre, householder_qr, sample_haar_orthogonal, sample_haar_orthogonal_with, sample_haar_unitary,
    sample_haar_unitary_with, sample_unitary_unfixed_with, standard_normal, ComplexMatrix, RngSpec,
};
