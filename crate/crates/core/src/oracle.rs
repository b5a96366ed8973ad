//! Closed-form outcome statistics for the correlated two-photon
//! polarization state measured at analyzer angles theta (Alice) and
//! phi (Bob).
//!
//! Every probability here is an exact trigonometric expression; no
//! state-vector simulation is involved. These values are the ground truth
//! that the hidden-variable models in [`crate::model`] are audited against:
//! the joint law puts weight cos^2(phi - theta)/2 on each equal-outcome
//! pair and sin^2(phi - theta)/2 on each unequal one, which makes both
//! single-party marginals exactly 1/2 at every setting pair.

use std::f64::consts::PI;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Tolerance for identities that hold exactly up to f64 round-off.
///
/// Double-precision trig round-off is ~1e-16; 1e-12 leaves four orders of
/// margin for accumulation over grids.
pub const EXACT_TOL: f64 = 1e-12;

// ---------------------------------------------------------------------------
// Angle
// ---------------------------------------------------------------------------

/// A polarization analyzer setting, stored canonically in `[0, pi)`.
///
/// Analyzer settings are axis-like: shifting by pi flips the sign of both
/// basis vectors and leaves every outcome probability unchanged, so angles
/// are reduced mod pi at construction.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Angle {
    radians: f64,
}

impl Angle {
    /// Canonicalizes `radians` into `[0, pi)`.
    pub fn new(radians: f64) -> Self {
        let r = radians.rem_euclid(PI);
        // rem_euclid of a tiny negative rounds up to exactly PI; that point
        // is the same axis as 0.
        let radians = if r >= PI { 0.0 } else { r };
        Angle { radians }
    }

    pub fn from_degrees(degrees: f64) -> Self {
        Self::new(degrees.to_radians())
    }

    pub fn radians(self) -> f64 {
        self.radians
    }

    pub fn degrees(self) -> f64 {
        self.radians.to_degrees()
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.6} rad", self.radians)
    }
}

impl Serialize for Angle {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_f64(self.radians)
    }
}

impl<'de> Deserialize<'de> for Angle {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        f64::deserialize(deserializer).map(Angle::new)
    }
}

// ---------------------------------------------------------------------------
// Outcome
// ---------------------------------------------------------------------------

/// A binary measurement result: `Plus` is polarization along the analyzer
/// axis, `Minus` along the perpendicular one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    pub const BOTH: [Outcome; 2] = [Outcome::Plus, Outcome::Minus];

    pub fn sign(self) -> f64 {
        match self {
            Outcome::Plus => 1.0,
            Outcome::Minus => -1.0,
        }
    }

    pub fn flipped(self) -> Outcome {
        match self {
            Outcome::Plus => Outcome::Minus,
            Outcome::Minus => Outcome::Plus,
        }
    }

    /// Parses the signs `+1` / `-1` (also accepts bare `+` / `-`).
    pub fn from_sign_str(s: &str) -> Option<Outcome> {
        match s.trim() {
            "+1" | "+" | "1" => Some(Outcome::Plus),
            "-1" | "-" => Some(Outcome::Minus),
            _ => None,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Plus => f.write_str("+1"),
            Outcome::Minus => f.write_str("-1"),
        }
    }
}

impl Serialize for Outcome {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_i8(match self {
            Outcome::Plus => 1,
            Outcome::Minus => -1,
        })
    }
}

impl<'de> Deserialize<'de> for Outcome {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        match i8::deserialize(deserializer)? {
            1 => Ok(Outcome::Plus),
            -1 => Ok(Outcome::Minus),
            other => Err(D::Error::custom(format!(
                "outcome must be +1 or -1, got {other}"
            ))),
        }
    }
}

// ---------------------------------------------------------------------------
// Closed-form probabilities
// ---------------------------------------------------------------------------

/// P[X = x, Y = y] at settings (theta, phi).
///
/// cos^2(phi - theta)/2 on the equal-outcome branch, sin^2(phi - theta)/2
/// on the unequal one; the four values sum to 1.
pub fn joint_prob(theta: Angle, phi: Angle, x: Outcome, y: Outcome) -> f64 {
    let d = phi.radians() - theta.radians();
    if x == y {
        0.5 * d.cos().powi(2)
    } else {
        0.5 * d.sin().powi(2)
    }
}

/// Alice's marginal P[X = x], summed from the joint law.
///
/// Equals 1/2 for every setting pair and both outcomes; the debug assertion
/// pins that identity against round-off.
pub fn marginal_x(theta: Angle, phi: Angle, x: Outcome) -> f64 {
    let p = joint_prob(theta, phi, x, Outcome::Plus) + joint_prob(theta, phi, x, Outcome::Minus);
    debug_assert!((p - 0.5).abs() <= EXACT_TOL);
    p
}

/// Bob's marginal P[Y = y], summed from the joint law. Also 1/2 everywhere.
pub fn marginal_y(theta: Angle, phi: Angle, y: Outcome) -> f64 {
    let p = joint_prob(theta, phi, Outcome::Plus, y) + joint_prob(theta, phi, Outcome::Minus, y);
    debug_assert!((p - 0.5).abs() <= EXACT_TOL);
    p
}

/// P[Y = y | X = x] at settings (theta, phi): cos^2(phi - theta) when the
/// outcomes agree, sin^2(phi - theta) when they differ.
pub fn conditional_y_given_x(theta: Angle, phi: Angle, y: Outcome, x: Outcome) -> f64 {
    let d = phi.radians() - theta.radians();
    if y == x {
        d.cos().powi(2)
    } else {
        d.sin().powi(2)
    }
}

/// The correlation E[XY] = cos(2(phi - theta)), in [-1, 1].
pub fn correlation(theta: Angle, phi: Angle) -> f64 {
    (2.0 * (phi.radians() - theta.radians())).cos()
}

/// The Bell-test combination |E(a,b) + E(a,b2) + E(a2,b) - E(a2,b2)|.
///
/// Bounded by 2*sqrt(2) for this state; equal to it at the standard
/// optimal settings (0, pi/4, pi/8, -pi/8).
pub fn chsh_value(a: Angle, a2: Angle, b: Angle, b2: Angle) -> f64 {
    (correlation(a, b) + correlation(a, b2) + correlation(a2, b) - correlation(a2, b2)).abs()
}

// ---------------------------------------------------------------------------
// JointDistribution
// ---------------------------------------------------------------------------

/// The four joint outcome probabilities at one fixed setting pair.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct JointDistribution {
    pub theta: Angle,
    pub phi: Angle,
    pub plus_plus: f64,
    pub plus_minus: f64,
    pub minus_plus: f64,
    pub minus_minus: f64,
}

impl JointDistribution {
    pub fn new(theta: Angle, phi: Angle) -> Self {
        let d = JointDistribution {
            theta,
            phi,
            plus_plus: joint_prob(theta, phi, Outcome::Plus, Outcome::Plus),
            plus_minus: joint_prob(theta, phi, Outcome::Plus, Outcome::Minus),
            minus_plus: joint_prob(theta, phi, Outcome::Minus, Outcome::Plus),
            minus_minus: joint_prob(theta, phi, Outcome::Minus, Outcome::Minus),
        };
        debug_assert!((d.total() - 1.0).abs() <= EXACT_TOL);
        d
    }

    pub fn prob(&self, x: Outcome, y: Outcome) -> f64 {
        match (x, y) {
            (Outcome::Plus, Outcome::Plus) => self.plus_plus,
            (Outcome::Plus, Outcome::Minus) => self.plus_minus,
            (Outcome::Minus, Outcome::Plus) => self.minus_plus,
            (Outcome::Minus, Outcome::Minus) => self.minus_minus,
        }
    }

    pub fn total(&self) -> f64 {
        self.plus_plus + self.plus_minus + self.minus_plus + self.minus_minus
    }

    /// P[X = Y], the agreement probability cos^2(phi - theta).
    pub fn agreement(&self) -> f64 {
        self.plus_plus + self.minus_minus
    }
}
