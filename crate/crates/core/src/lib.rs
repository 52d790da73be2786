//! Sequential sharing of Bell nonlocality on recycled qubits.
//!
//! Two-valued qubit observables with strength and bias, their square-root
//! (maximally reversible) instruments, CHSH functionals on two-qubit states in
//! the correlation-tensor representation, one-sided monogamy bounds, a
//! differential-evolution search for the optimal tradeoff curve, and chains
//! of many Alices and Bobs.
//!
//! The numerical core is generic over [`Real`] (`f32` or `f64`); the aliases
//! at the crate root fix the scalar to `f64` (and `f32` with a `32` suffix).

pub mod audit;
pub mod bell;
pub mod error;
pub mod instruments;
pub mod linalg;
pub mod monogamy;
pub mod multiparty;
pub mod observables;
pub mod optimizer;
pub mod poly;
pub mod scalar;
pub mod states;

pub use error::{Error, Result};
pub use scalar::Real;

pub use bell::{chsh_value, horodecki_sstar, s0_bound, s0_from_w, w_matrix};
pub use instruments::{apply_chain, apply_local, setting_channel, Side};
pub use linalg::{svd3, Mat3, Vec3};
pub use monogamy::{evaluate_scenario, region1_closed, region1_parametric, region3_curve};
pub use observables::from_reversibility_angle;
pub use optimizer::{boundary_curve, boundary_point, decode_params, BoundaryPoint, SearchMode};

pub type Observable = observables::Observable<f64>;
pub type ReversibilityProfile = observables::ReversibilityProfile<f64>;
pub type TwoQubitState = states::TwoQubitState<f64>;
pub type MeasurementKind = instruments::MeasurementKind<f64>;
pub type DephasingChannel = instruments::DephasingChannel<f64>;
pub type MeasurementPair = bell::MeasurementPair<f64>;
pub type WMatrix = bell::WMatrix<f64>;
pub type ScenarioConfig = monogamy::ScenarioConfig<f64>;
pub type ScenarioResult = monogamy::ScenarioResult<f64>;
pub type ObserverPlan = multiparty::ObserverPlan<f64>;
pub type MultiBobSchedule = multiparty::MultiBobSchedule<f64>;

pub type Observable32 = observables::Observable<f32>;
pub type TwoQubitState32 = states::TwoQubitState<f32>;
pub type MeasurementKind32 = instruments::MeasurementKind<f32>;
pub type MeasurementPair32 = bell::MeasurementPair<f32>;
pub type ScenarioConfig32 = monogamy::ScenarioConfig<f32>;
pub type ScenarioResult32 = monogamy::ScenarioResult<f32>;
