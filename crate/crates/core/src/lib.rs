//! Frenet apparatus, harmonic curvatures and helix classification for
//! curves in E^n.
//!
//! A curve is given by coordinate expressions, by samples, or by
//! prescribed curvature functions. [`frenet::build_apparatus`] computes
//! frames and curvature jets on a grid, [`harmonic`] evaluates the three
//! harmonic systems, and [`classify`] decides whether the curve is an
//! inclined curve, a V_2-slant helix or a V_n-slant helix and recovers the
//! axis.
//!
//! ```
//! use helixkit::prelude::*;
//!
//! let spec = make_circular_helix(2.0, 1.0)?;
//! let app = build_apparatus(&spec, 256, &FrenetConfig::default())?;
//! let h = harmonic_h(&app)?;
//! let v = classify_inclined(&h, Method::Algebraic, &Tolerances::default())?;
//! assert!(v.is_helix);
//! # Ok::<(), helixkit::Error>(())
//! ```

pub mod classify;
mod error;
pub mod expr;
pub mod frenet;
pub mod harmonic;
pub mod io;
pub mod quad;
pub mod report;
pub mod synthesize;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::classify::{
        brute_force_axis, classify_inclined, classify_v2_slant, classify_vn_slant, reconstruct_axis,
        verify_axis, AxisEstimate, HelixKind, Method, Tolerances, Verdict,
    };
    pub use crate::expr::{parse_curve, CurveSpec, Expression, Jet};
    pub use crate::frenet::{build_apparatus, check_nondegenerate, frenet_at, FrenetApparatus, FrenetConfig};
    pub use crate::harmonic::{fit_g_constant, functions_g, harmonic_h, harmonic_hstar, HarmonicProfile};
    pub use crate::report::{analyze, AnalysisConfig, Report};
    pub use crate::synthesize::{integrate_frenet, make_circular_helix, CurvaturePrescription};
    pub use crate::Error;
}
