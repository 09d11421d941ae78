//! The base iterated maps on the unit interval.
//!
//! The central map is the beta shift
//!
//! ```text
//! T_beta(x) = beta*x            for 0 <= x < 1/2
//!           = beta*(x - 1/2)    for 1/2 <= x <= 1
//! ```
//!
//! together with its rescaled twin `t_beta(x) = beta*x mod 1` (the beta
//! transform) and the tent/logistic/sidetent/fliptent/sidetarp variants that
//! share the same beta axis.

use crate::error::{Error, Result};

/// The multiplier, 1 < beta <= 2 for the maps proper.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Beta(f64);

impl Beta {
    /// Strict constructor: rejects values outside (1, 2].
    pub fn new(value: f64) -> Result<Beta> {
        if value > 1.0 && value <= 2.0 {
            Ok(Beta(value))
        } else {
            Err(Error::InvalidParam(format!("beta {value} not in (1, 2]")))
        }
    }

    /// Extended constructor for density scans that sweep beta below 1,
    /// where the invariant density degenerates to a point mass at 0.
    pub fn extended(value: f64) -> Result<Beta> {
        if value > 0.0 && value <= 2.0 {
            Ok(Beta(value))
        } else {
            Err(Error::InvalidParam(format!("beta {value} not in (0, 2]")))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    /// The golden ratio, the first trouble spot.
    pub fn golden() -> Beta {
        Beta((1.0 + 5.0_f64.sqrt()) / 2.0)
    }
}

impl std::fmt::Display for Beta {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A point of the unit interval.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct UnitPoint(f64);

impl UnitPoint {
    pub fn new(x: f64) -> Result<UnitPoint> {
        if (0.0..=1.0).contains(&x) {
            Ok(UnitPoint(x))
        } else {
            Err(Error::InvalidParam(format!("{x} not in [0, 1]")))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

/// Boundary convention for the beta shift at x = 1/2.
///
/// `StrictLess` sends 1/2 to 0 (the second branch claims it); `LessEqual`
/// sends 1/2 to beta/2, turning halted midpoint orbits into periodic ones;
/// `Exclude` removes 0, 1/2 and 1 from the domain altogether.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MidpointRule {
    #[default]
    StrictLess,
    LessEqual,
    Exclude,
}

/// Which of the iterated maps to apply.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MapKind {
    BetaShift(MidpointRule),
    BetaTransform,
    Tent,
    Logistic,
    Sidetent,
    Fliptent,
    Sidetarp,
}

impl MapKind {
    pub fn beta_shift() -> MapKind {
        MapKind::BetaShift(MidpointRule::StrictLess)
    }
}

/// One step of the beta shift with the default strict-less rule.
///
/// The two branches are kept as written so that orbit code and the
/// transfer-operator scaling produce bitwise identical midpoints.
#[inline]
pub fn beta_shift_step(beta: f64, x: f64) -> f64 {
    if x < 0.5 {
        beta * x
    } else {
        beta * (x - 0.5)
    }
}

/// One map step.
pub fn step(kind: MapKind, beta: Beta, x: UnitPoint) -> Result<UnitPoint> {
    let b = beta.get();
    let x = x.get();
    let y = match kind {
        MapKind::BetaShift(rule) => match rule {
            MidpointRule::StrictLess => beta_shift_step(b, x),
            MidpointRule::LessEqual => {
                if x <= 0.5 {
                    b * x
                } else {
                    b * (x - 0.5)
                }
            }
            MidpointRule::Exclude => {
                if x == 0.0 || x == 0.5 || x == 1.0 {
                    return Err(Error::DomainExcluded(x));
                }
                beta_shift_step(b, x)
            }
        },
        MapKind::BetaTransform => {
            let y = b * x;
            if y >= 1.0 {
                y - 1.0
            } else {
                y
            }
        }
        MapKind::Tent => {
            if x < 0.5 {
                b * x
            } else {
                b * (1.0 - x)
            }
        }
        MapKind::Logistic => 2.0 * b * x * (1.0 - x),
        MapKind::Sidetent => {
            if x < (b - 1.0) / b {
                b * (x - 1.0) + 2.0
            } else {
                b * (1.0 - x)
            }
        }
        MapKind::Fliptent => {
            if x < 1.0 / b {
                b * x
            } else {
                2.0 - b * x
            }
        }
        MapKind::Sidetarp => {
            if x < 1.0 / b {
                b * x
            } else {
                b * (1.0 - x)
            }
        }
    };
    // beta * 1 can overshoot 1 by rounding only; clamp the dust
    Ok(UnitPoint(y.clamp(0.0, 1.0)))
}

/// A finite orbit x0, f(x0), ..., f^n(x0).
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub points: Vec<UnitPoint>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn raw(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.get()).collect()
    }
}

/// Orbit of length n+1 starting at x0 (trajectory[0] = x0).
pub fn iterate(kind: MapKind, beta: Beta, x0: UnitPoint, n: usize) -> Result<Trajectory> {
    let mut points = Vec::with_capacity(n + 1);
    points.push(x0);
    let mut x = x0;
    for _ in 0..n {
        x = step(kind, beta, x)?;
        points.push(x);
    }
    Ok(Trajectory { points })
}

/// First n beta-expansion digits of x: bit k is 0 iff T_beta^k(x) < 1/2.
pub fn digits(beta: Beta, x: UnitPoint, n: usize) -> Vec<u8> {
    let b = beta.get();
    let mut out = Vec::with_capacity(n);
    let mut y = x.get();
    for _ in 0..n {
        out.push(if y < 0.5 { 0 } else { 1 });
        y = beta_shift_step(b, y);
    }
    out
}

/// Max residual of the conjugacy T_beta^k(x) = (beta/2) t_beta^k(2x/beta)
/// over 0 <= k <= n.
pub fn conjugate_check(beta: Beta, x: UnitPoint, n: usize) -> Result<f64> {
    let b = beta.get();
    let u0 = 2.0 * x.get() / b;
    if !(0.0..=1.0).contains(&u0) {
        return Err(Error::InvalidParam(format!("2x/beta = {u0} not in [0, 1]")));
    }
    let mut t = x.get();
    let mut u = u0;
    let mut worst: f64 = 0.0;
    for _ in 0..=n {
        worst = worst.max((t - b / 2.0 * u).abs());
        t = beta_shift_step(b, t);
        u = {
            let y = b * u;
            if y >= 1.0 {
                y - 1.0
            } else {
                y
            }
        };
    }
    Ok(worst)
}
