//! Parking rules and single-list simulation.
//!
//! Cars and spots are numbered from 1 at every public boundary.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A preference list `(a_1, ..., a_n)` with every entry in `[1, n]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct PreferenceList(Vec<usize>);

impl PreferenceList {
    pub fn new(prefs: Vec<usize>) -> Result<Self> {
        let n = prefs.len();
        if let Some((idx, &value)) = prefs.iter().enumerate().find(|(_, &a)| a == 0 || a > n) {
            return Err(Error::InvalidPreference {
                car: idx + 1,
                value,
                n,
            });
        }
        Ok(Self(prefs))
    }

    /// Wraps entries already known to lie in `[1, n]`.
    pub(crate) fn from_trusted(prefs: Vec<usize>) -> Self {
        debug_assert!(prefs.iter().all(|&a| a >= 1 && a <= prefs.len()));
        Self(prefs)
    }

    /// The identity list `(1, 2, ..., n)`.
    pub fn identity(n: usize) -> Self {
        Self((1..=n).collect())
    }

    /// Street length, equal to the number of cars.
    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn prefs(&self) -> &[usize] {
        &self.0
    }

    /// Preference of `car` (1-indexed).
    pub fn pref(&self, car: usize) -> usize {
        self.0[car - 1]
    }

    pub fn is_non_decreasing(&self) -> bool {
        self.0.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn is_non_increasing(&self) -> bool {
        self.0.windows(2).all(|w| w[1] <= w[0])
    }
}

impl TryFrom<Vec<usize>> for PreferenceList {
    type Error = Error;

    fn try_from(prefs: Vec<usize>) -> Result<Self> {
        Self::new(prefs)
    }
}

impl From<PreferenceList> for Vec<usize> {
    fn from(list: PreferenceList) -> Self {
        list.0
    }
}

impl fmt::Display for PreferenceList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (idx, a) in self.0.iter().enumerate() {
            if idx > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

/// Which parking rule the cars follow.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RuleKind {
    /// Take the first free spot at or after the preference.
    Classical,
    /// Try the preference `p`, then `p - k`, then `p + k`.
    Vacillating(usize),
}

impl RuleKind {
    /// Checks the step size against a street of length `n`.
    ///
    /// The empty street (`n = 0`) accepts any rule since no car ever moves.
    pub fn validate(self, n: usize) -> Result<()> {
        match self {
            RuleKind::Classical => Ok(()),
            RuleKind::Vacillating(k) if n == 0 || (1..=n).contains(&k) => Ok(()),
            RuleKind::Vacillating(k) => Err(Error::InvalidStep { k, n }),
        }
    }

    /// Picks the spot a car with preference `pref` takes, given which spots
    /// are still free. `None` means the car cannot park.
    pub fn choose_spot(
        self,
        pref: usize,
        n: usize,
        is_free: impl Fn(usize) -> bool,
    ) -> Option<usize> {
        match self {
            RuleKind::Classical => (pref..=n).find(|&s| is_free(s)),
            RuleKind::Vacillating(k) => {
                if is_free(pref) {
                    return Some(pref);
                }
                if pref > k && is_free(pref - k) {
                    return Some(pref - k);
                }
                let forward = pref + k;
                if forward <= n && is_free(forward) {
                    return Some(forward);
                }
                None
            }
        }
    }
}

impl fmt::Display for RuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleKind::Classical => write!(f, "classical"),
            RuleKind::Vacillating(k) => write!(f, "{k}-vacillating"),
        }
    }
}

/// Result of running every car through the street.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Outcome {
    /// `assignment[c]` is the spot taken by car `c + 1`. On failure this
    /// covers exactly the cars before the failing one.
    pub assignment: Vec<usize>,
    /// First car that could not park, if any.
    pub failing_car: Option<usize>,
}

impl Outcome {
    pub fn is_success(&self) -> bool {
        self.failing_car.is_none()
    }

    /// Spot taken by `car` (1-indexed), if it parked.
    pub fn spot_of(&self, car: usize) -> Option<usize> {
        car.checked_sub(1)
            .and_then(|c| self.assignment.get(c))
            .copied()
    }

    /// Car parked in `spot`, if any.
    pub fn car_at(&self, spot: usize) -> Option<usize> {
        self.assignment
            .iter()
            .position(|&s| s == spot)
            .map(|c| c + 1)
    }
}

/// Runs the cars of `prefs` in order under `rule`.
pub fn simulate(prefs: &PreferenceList, rule: RuleKind) -> Result<Outcome> {
    let n = prefs.n();
    rule.validate(n)?;
    let mut occupied = vec![false; n + 1];
    let mut assignment = Vec::with_capacity(n);
    for (idx, &pref) in prefs.prefs().iter().enumerate() {
        match rule.choose_spot(pref, n, |s| !occupied[s]) {
            Some(spot) => {
                occupied[spot] = true;
                assignment.push(spot);
            }
            None => {
                return Ok(Outcome {
                    assignment,
                    failing_car: Some(idx + 1),
                })
            }
        }
    }
    Ok(Outcome {
        assignment,
        failing_car: None,
    })
}

pub fn is_parking_function(prefs: &PreferenceList, rule: RuleKind) -> Result<bool> {
    simulate(prefs, rule).map(|o| o.is_success())
}

/// The car parked in the last spot together with its preference.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LastSpot {
    pub car: usize,
    pub pref: usize,
}

/// Identifies which car ends up in spot `n` and what it preferred.
///
/// Under `Vacillating(k)` the preference is always `n` or `n - k`.
pub fn outcome_statistics(prefs: &PreferenceList, rule: RuleKind) -> Result<LastSpot> {
    let outcome = simulate(prefs, rule)?;
    if let Some(failing_car) = outcome.failing_car {
        return Err(Error::NotParked { failing_car });
    }
    let n = prefs.n();
    let car = outcome.car_at(n).ok_or(Error::InvalidParameters(
        "empty preference list has no last spot".into(),
    ))?;
    Ok(LastSpot {
        car,
        pref: prefs.pref(car),
    })
}
