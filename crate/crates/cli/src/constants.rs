//! External physical inputs used by the scenarios.

/// Mean muon lifetime at rest, in seconds (Particle Data Group review).
pub const MUON_LIFETIME_S: f64 = 2.196_981_1e-6;

/// Speed of light in vacuum, m/s (exact by the SI definition of the metre).
pub const SPEED_OF_LIGHT_SI: f64 = propertime::units::C_SI;
