//! Boson bunching from initial-state overlaps.
//!
//! The bunching parameter `β = p_B/p_D` compares the probability of finding
//! bosons together in one state with the same probability for
//! distinguishable particles. For two particles it depends only on the
//! overlap `I = ⟨ψ₁|ψ₂⟩` of the initial states, `β = 2/(1 + |I|²)`; for `Q`
//! particles it is `Q!/per(G)` with `G` the Gram matrix of overlaps.
//!
//! * [`states`]: pure states, overlaps, unitaries, two-mode parametrization.
//! * [`pair`]: two-particle joint probabilities and `β`.
//! * [`gaussian`]: free Gaussian wavepackets and their coincidence densities.
//! * [`multi`]: Gram matrices, permanents and the `Q`-particle factor.
//! * [`ensemble`]: Monte Carlo distributions of `β` and the analytic density.
//! * [`quad`]: adaptive Gauss–Kronrod quadrature.

pub mod ensemble;
pub mod error;
pub mod gaussian;
pub mod multi;
pub mod pair;
pub mod quad;
pub mod states;

pub use num_complex::Complex64;

pub use ensemble::{BetaHistogram, HistogramSpec, SampleRun, Scenario, SummaryStats};
pub use error::{Error, Result};
pub use gaussian::{GaussianPacket, SpatialDensityPair};
pub use multi::{ComplexMatrix, EnhancementResult, GramMatrix, ParticleKind};
pub use pair::{PairOutcome, PairProbabilities};
pub use states::{PureState, TwoModeParams, UnitaryMatrix};
