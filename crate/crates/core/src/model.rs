//! Deterministic hidden-variable models that reproduce the singlet
//! statistics exactly.
//!
//! Both local hidden variables are realized as uniform draws on [0, 1):
//! the unit interval with Lebesgue measure is the canonical carrier, and it
//! makes every set probability an exact interval measure. Alice's outcome
//! is a fixed threshold rule on her draw U; Bob's outcome is membership of
//! his draw V in response sets selected by Alice's outcome, with measures
//! pinned to cos^2 and sin^2 of the setting difference. Two layouts of the
//! response sets are provided: a disjoint partition of [0, 1), and a
//! maximally overlapping pair anchored at the origin.
//!
//! The generic combined-model shape — outcome laws conditioned on a shared
//! nonlocal parameter with a known distribution — is captured by the
//! [`NonlocalParameterModel`] trait. The concrete family instantiates the
//! shared parameter as Alice's outcome itself; no free-standing nonlocal
//! hidden variable is ever constructed.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::IntervalSet;
use crate::oracle::{Angle, Outcome};

// ---------------------------------------------------------------------------
// HVValue
// ---------------------------------------------------------------------------

/// A local hidden-variable draw: a point of [0, 1) under uniform measure.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct HVValue {
    point: f64,
}

impl HVValue {
    pub fn new(point: f64) -> Result<Self> {
        if (0.0..1.0).contains(&point) {
            Ok(HVValue { point })
        } else {
            Err(Error::HiddenVariableOutOfRange(point))
        }
    }

    /// For values already known to lie in [0, 1), e.g. uniform RNG output.
    pub(crate) fn from_unit(point: f64) -> Self {
        debug_assert!((0.0..1.0).contains(&point));
        HVValue { point }
    }

    pub fn point(self) -> f64 {
        self.point
    }
}

impl Serialize for HVValue {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_f64(self.point)
    }
}

impl<'de> Deserialize<'de> for HVValue {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let point = f64::deserialize(deserializer)?;
        HVValue::new(point).map_err(serde::de::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// ResponseSets
// ---------------------------------------------------------------------------

/// The interval families that determine Bob's outcome at fixed settings.
///
/// `plus_if_x_plus` holds the V values producing Y = +1 when X = +1
/// (measure cos^2(phi - theta)); `plus_if_x_minus` those producing Y = +1
/// when X = -1 (measure sin^2(phi - theta)); `plus_for_both` is their
/// exact intersection.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResponseSets {
    pub plus_if_x_plus: IntervalSet,
    pub plus_if_x_minus: IntervalSet,
    pub plus_for_both: IntervalSet,
}

impl ResponseSets {
    /// The set of V values producing Y = +1 for the given X value.
    pub fn plus_set(&self, x: Outcome) -> &IntervalSet {
        match x {
            Outcome::Plus => &self.plus_if_x_plus,
            Outcome::Minus => &self.plus_if_x_minus,
        }
    }

    /// The set of V values producing outcome `y` when Alice's outcome is `x`.
    pub fn y_set(&self, x: Outcome, y: Outcome) -> IntervalSet {
        let plus = self.plus_set(x);
        match y {
            Outcome::Plus => plus.clone(),
            Outcome::Minus => plus.complement(),
        }
    }

    /// Bob's outcome for the draw `v` given Alice's outcome `x`.
    pub fn eval(&self, v: HVValue, x: Outcome) -> Outcome {
        if self.plus_set(x).contains(v.point()) {
            Outcome::Plus
        } else {
            Outcome::Minus
        }
    }

    /// Every span endpoint of the three sets inside [0, 1).
    pub fn endpoints(&self) -> impl Iterator<Item = f64> + '_ {
        self.plus_if_x_plus
            .endpoints()
            .chain(self.plus_if_x_minus.endpoints())
            .chain(self.plus_for_both.endpoints())
    }
}

// ---------------------------------------------------------------------------
// Counter-example model
// ---------------------------------------------------------------------------

/// Which response-set layout the model uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// The two response sets partition [0, 1): every v lies in exactly one.
    Disjoint,
    /// Both sets anchored at 0, so their intersection is the shorter one.
    #[serde(rename = "overlap")]
    MaximalOverlap,
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Variant::Disjoint => f.write_str("disjoint"),
            Variant::MaximalOverlap => f.write_str("overlap"),
        }
    }
}

/// A deterministic two-party model: X is a threshold rule on Alice's local
/// draw, Y is interval membership of Bob's local draw in the response set
/// selected by X.
///
/// For either layout the induced conditional law of Y given X equals the
/// closed-form singlet conditionals exactly, by construction of the set
/// measures. The layouts differ only in how the sets overlap, which is
/// invisible at the observable level and decisive at the hidden-variable
/// level (see [`crate::audit`]).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CounterexampleModel {
    variant: Variant,
}

impl CounterexampleModel {
    pub fn new(variant: Variant) -> Self {
        CounterexampleModel { variant }
    }

    /// The layout of Fig-style disjoint response sets: [0, c) and [c, 1).
    pub fn disjoint() -> Self {
        Self::new(Variant::Disjoint)
    }

    /// Maximally overlapping layout: [0, c) and [0, s), both anchored at 0.
    pub fn maximal_overlap() -> Self {
        Self::new(Variant::MaximalOverlap)
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    /// Alice's outcome: +1 iff u < 1/2, for every setting and either layout.
    ///
    /// The uniform X marginal only requires the +1 set of U values to have
    /// measure 1/2; the fixed threshold is the simplest such rule. The
    /// setting is accepted but unused, and neither phi nor v appears in the
    /// signature at all — that is the locality of X.
    pub fn eval_x(&self, _theta: Angle, u: HVValue) -> Outcome {
        if u.point() < 0.5 {
            Outcome::Plus
        } else {
            Outcome::Minus
        }
    }

    /// The response sets for this layout at settings (theta, phi).
    pub fn response_sets(&self, theta: Angle, phi: Angle) -> ResponseSets {
        let d = phi.radians() - theta.radians();
        let c = d.cos().powi(2);
        let s = d.sin().powi(2);
        let (v1, v2) = match self.variant {
            Variant::Disjoint => (IntervalSet::span(0.0, c), IntervalSet::span(c, 1.0)),
            Variant::MaximalOverlap => (IntervalSet::span(0.0, c), IntervalSet::span(0.0, s)),
        };
        let both = v1.intersection(&v2);
        ResponseSets {
            plus_if_x_plus: v1,
            plus_if_x_minus: v2,
            plus_for_both: both,
        }
    }

    /// Bob's outcome: membership of v in the response set selected by x.
    pub fn eval_y(&self, theta: Angle, phi: Angle, v: HVValue, x: Outcome) -> Outcome {
        self.response_sets(theta, phi).eval(v, x)
    }

    /// One run: draws u then v uniformly from `rng`, returns (X, Y).
    pub fn sample_run<R: Rng + ?Sized>(
        &self,
        theta: Angle,
        phi: Angle,
        rng: &mut R,
    ) -> (Outcome, Outcome) {
        let u = HVValue::from_unit(rng.random::<f64>());
        let v = HVValue::from_unit(rng.random::<f64>());
        let x = self.eval_x(theta, u);
        let y = self.eval_y(theta, phi, v, x);
        (x, y)
    }
}

// ---------------------------------------------------------------------------
// Generic combined-model interface
// ---------------------------------------------------------------------------

/// A model whose outcome laws condition on a shared nonlocal parameter with
/// a known distribution, in addition to the two local hidden variables.
///
/// Only the interface exists for the general case — what a nonlocal hidden
/// variable *is* remains unsettled, so none is constructed here. The
/// counter-example family implements the trait with the shared parameter
/// instantiated as Alice's outcome, distributed uniformly over {+1, -1}.
/// [`averaged_y_conditional`](NonlocalParameterModel::averaged_y_conditional)
/// is the average whose setting independence the audit module puts to the
/// test.
pub trait NonlocalParameterModel {
    /// The shared (nonlocal) parameter type.
    type Shared;

    /// The distribution of the shared parameter at the given settings, as
    /// (value, probability) pairs summing to one.
    fn shared_distribution(&self, theta: Angle, phi: Angle) -> Vec<(Self::Shared, f64)>;

    /// P[X = x | theta, phi, U = u, shared = n].
    fn x_conditional(
        &self,
        theta: Angle,
        phi: Angle,
        u: HVValue,
        shared: &Self::Shared,
        x: Outcome,
    ) -> f64;

    /// P[Y = y | theta, phi, V = v, shared = n].
    fn y_conditional(
        &self,
        theta: Angle,
        phi: Angle,
        v: HVValue,
        shared: &Self::Shared,
        y: Outcome,
    ) -> f64;

    /// The Y conditional averaged over the shared parameter's distribution.
    fn averaged_y_conditional(&self, theta: Angle, phi: Angle, v: HVValue, y: Outcome) -> f64 {
        self.shared_distribution(theta, phi)
            .iter()
            .map(|(n, p)| p * self.y_conditional(theta, phi, v, n, y))
            .sum()
    }
}

impl NonlocalParameterModel for CounterexampleModel {
    type Shared = Outcome;

    /// Alice's outcome plays the shared-parameter role; its marginal is
    /// uniform on {+1, -1}.
    fn shared_distribution(&self, _theta: Angle, _phi: Angle) -> Vec<(Outcome, f64)> {
        vec![(Outcome::Plus, 0.5), (Outcome::Minus, 0.5)]
    }

    /// X is a deterministic function of U alone; the shared parameter is
    /// ignored on Alice's side.
    fn x_conditional(
        &self,
        theta: Angle,
        _phi: Angle,
        u: HVValue,
        _shared: &Outcome,
        x: Outcome,
    ) -> f64 {
        if self.eval_x(theta, u) == x {
            1.0
        } else {
            0.0
        }
    }

    fn y_conditional(
        &self,
        theta: Angle,
        phi: Angle,
        v: HVValue,
        shared: &Outcome,
        y: Outcome,
    ) -> f64 {
        if self.eval_y(theta, phi, v, *shared) == y {
            1.0
        } else {
            0.0
        }
    }
}
