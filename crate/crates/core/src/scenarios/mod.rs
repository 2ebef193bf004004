//! End-to-end experiments built on the dynamics and counting layers.

mod beam_splitter;
mod cancellation;
mod cascade;
mod encode;
mod guard;
mod shaped;
mod sweeps;

/// Default anharmonicity for the drive-strength guard, in units of Γ.
pub const DEFAULT_ANHARMONICITY: f64 = 50.0;

pub use beam_splitter::{beam_splitter_evolution, run_beam_splitter, BeamSplitterConfig};
pub use cancellation::{
    cancellation_budget, error_budget, residual_factor, residual_phasor, to_db, CancellationInputs,
    CancellationResult, ErrorBudget,
};
pub use cascade::{
    cascade_evolution, default_sweep_axes, linspace, run_cascade, sweep_cascade, CascadeConfig, CascadeRow, IDLER,
    SIGNAL,
};
pub use encode::{encode_flying_qubit, pulse_fidelity, EncodeConfig, EncodeResult, FlyingQubitTarget};
pub use guard::exceeds_anharmonicity;
pub use shaped::{
    phase_for_rate, run_shaped_release, shape_to_schedule, shape_to_schedule_with_budget, shaped_release_evolution,
    shaped_release_statistics, PacketKind, Release, ShapedReleaseConfig, ShapedReleaseResult, ShapedSchedule,
    WavePacket, DEFAULT_CLIP_BUDGET,
};
pub use sweeps::{sweep_nonradiative, sweep_wait_time, SweepRow, WaitSweepConfig};
