//! Time-dependent model of the driven emitter in front of a mirror.

mod evolution;
mod model;
mod params;
mod schedule;

pub use evolution::{propagator, uniform_times, Evolution, GridSpec, Segment, PULSE_RESOLUTION};
pub use model::{
    build_liouvillian, collapse_operators, effective_coupling, hamiltonian, ladder, output_operators,
    pi_pulse_width, rabi_frequency,
};
pub use params::{LadderRates, Levels, MirrorQubitParams};
pub use schedule::{wrap_phase, DriveSchedule, DriveSegment, PhaseSchedule, PhaseSegment, SampledRamp};
