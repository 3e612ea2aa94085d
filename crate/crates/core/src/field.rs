//! Radial field profiles restricted to the negative x-axis.
//!
//! A profile is described by the magnitude `|E(r)|` of a radially outward
//! field that vanishes beyond a cutoff radius `r0`. On the negative axis an
//! outward field points in the `-x` direction, so the scalar field `E(x)` is
//! never positive. The integrator works with the rescaled field
//! `Ē = (3/2) E`, which absorbs the charge and mass of the normalized units.

use std::path::Path;

use crate::error::{Error, Result};

/// The normalized unit system: charge, mass and light speed of the electron.
///
/// With these values the radiation-reaction time constant is exactly one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Normalization;

impl Normalization {
    pub const ELECTRON_CHARGE: f64 = -1.0;
    pub const ELECTRON_MASS: f64 = 2.0 / 3.0;
    pub const LIGHT_SPEED: f64 = 1.0;

    /// Factor turning `E` into `Ē`. Equals `2/(3m)` with the fixed mass, i.e. 3/2.
    pub const FIELD_SCALE: f64 = 1.5;
}

/// Anything that supplies a scalar field on the negative axis.
///
/// [`FieldModel`] is the only production implementor; the trait exists so
/// that verification code can be exercised against deliberately broken
/// fields.
pub trait ScalarField {
    /// Radius beyond which the field vanishes.
    fn cutoff_radius(&self) -> f64;

    /// `Ē(x)`, piecewise: zero for `x <= -r0`.
    fn scalar_field(&self, x: f64) -> Result<f64>;

    /// The continuous extension of the in-field formula across `x = -r0`.
    ///
    /// Used while the particle is inside so that a step touching the cutoff
    /// edge does not see the jump.
    fn interior_field(&self, x: f64) -> Result<f64>;
}

/// Piecewise-linear magnitude profile `|E(r)|` with knots in `(0, r0]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    knots: Vec<(f64, f64)>,
}

impl Profile {
    /// Knots must be strictly ascending in `r`, with `r > 0` and magnitudes `>= 0`.
    /// The last knot's radius becomes the cutoff `r0`.
    pub fn new(knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.is_empty() {
            return Err(Error::domain("tabulated profile needs at least one knot"));
        }
        for (i, &(r, m)) in knots.iter().enumerate() {
            if !(r.is_finite() && r > 0.0) {
                return Err(Error::domain(format!("knot {i}: radius {r} must be positive")));
            }
            if !(m.is_finite() && m >= 0.0) {
                return Err(Error::domain(format!(
                    "knot {i}: magnitude {m} must be finite and >= 0 (field must point outward)"
                )));
            }
            if i > 0 && r <= knots[i - 1].0 {
                return Err(Error::domain(format!("knot {i}: radii must be strictly ascending")));
            }
        }
        Ok(Profile { knots })
    }

    /// Reads a two-column `r magnitude` text file. Blank lines and lines
    /// starting with `#` are skipped.
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut knots = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut cols = line.split_whitespace();
            let mut next = |name: &str| -> Result<f64> {
                let tok = cols.next().ok_or_else(|| {
                    Error::Parse(format!("line {}: missing {name} column", lineno + 1))
                })?;
                tok.parse::<f64>().map_err(|_| {
                    Error::Parse(format!("line {}: cannot parse {name} '{tok}'", lineno + 1))
                })
            };
            let r = next("r")?;
            let m = next("magnitude")?;
            if cols.next().is_some() {
                return Err(Error::Parse(format!("line {}: expected two columns", lineno + 1)));
            }
            knots.push((r, m));
        }
        Profile::new(knots)
    }

    pub fn knots(&self) -> &[(f64, f64)] {
        &self.knots
    }

    pub fn cutoff(&self) -> f64 {
        self.knots[self.knots.len() - 1].0
    }

    /// Multiplies every magnitude by `factor` (must be `>= 0`).
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor.is_finite() && factor >= 0.0) {
            return Err(Error::domain(format!("profile scale {factor} must be >= 0")));
        }
        Profile::new(self.knots.iter().map(|&(r, m)| (r, m * factor)).collect())
    }

    /// `|E(r)|` without the cutoff: constant below the first knot and above the last.
    fn magnitude_extended(&self, r: f64) -> f64 {
        let k = &self.knots;
        if r <= k[0].0 {
            return k[0].1;
        }
        let last = k[k.len() - 1];
        if r >= last.0 {
            return last.1;
        }
        // First knot with radius >= r; r is strictly inside the table here.
        let hi = k.partition_point(|&(kr, _)| kr < r);
        let (r_a, m_a) = k[hi - 1];
        let (r_b, m_b) = k[hi];
        m_a + (m_b - m_a) * (r - r_a) / (r_b - r_a)
    }

    fn magnitude(&self, r: f64) -> f64 {
        if r > self.cutoff() {
            0.0
        } else {
            self.magnitude_extended(r)
        }
    }

    /// Exact `∫_lo^hi |E(r)| dr` for `0 < lo <= hi <= r0`.
    fn magnitude_integral(&self, lo: f64, hi: f64) -> f64 {
        if hi <= lo {
            return 0.0;
        }
        let k = &self.knots;
        let mut total = 0.0;
        // Constant piece below the first knot.
        if lo < k[0].0 {
            total += k[0].1 * (hi.min(k[0].0) - lo);
        }
        for w in k.windows(2) {
            let (r_a, r_b) = (w[0].0, w[1].0);
            let a = lo.max(r_a);
            let b = hi.min(r_b);
            if b > a {
                // Linear on [r_a, r_b]: trapezoid over the clipped sub-interval is exact.
                total += 0.5 * (self.magnitude_extended(a) + self.magnitude_extended(b)) * (b - a);
            }
        }
        total
    }
}

/// A radial field profile: a cutoff Coulomb field or a tabulated magnitude.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldModel {
    /// `|E(r)| = 2Q²/(3r²)` for `r < r0`, zero beyond.
    CutoffCoulomb { q2: f64, r0: f64 },
    Tabulated(Profile),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldKind {
    CutoffCoulomb,
    Tabulated,
}

/// Outcome of [`FieldModel::validate_theorem1_hypotheses`].
#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisCheck {
    pub satisfied: bool,
    /// Names the first failing check; empty when satisfied.
    pub diagnostic: String,
}

impl FieldModel {
    pub fn cutoff_coulomb(q2: f64, r0: f64) -> Result<Self> {
        if !(q2.is_finite() && q2 > 0.0) {
            return Err(Error::domain(format!("Q2 = {q2} must be positive")));
        }
        if !(r0.is_finite() && r0 > 0.0) {
            return Err(Error::domain(format!("r0 = {r0} must be positive")));
        }
        Ok(FieldModel::CutoffCoulomb { q2, r0 })
    }

    pub fn tabulated(knots: Vec<(f64, f64)>) -> Result<Self> {
        Ok(FieldModel::Tabulated(Profile::new(knots)?))
    }

    pub fn kind(&self) -> FieldKind {
        match self {
            FieldModel::CutoffCoulomb { .. } => FieldKind::CutoffCoulomb,
            FieldModel::Tabulated(_) => FieldKind::Tabulated,
        }
    }

    pub fn r0(&self) -> f64 {
        match self {
            FieldModel::CutoffCoulomb { r0, .. } => *r0,
            FieldModel::Tabulated(p) => p.cutoff(),
        }
    }

    /// Coulomb strength, if this is a Coulomb field.
    pub fn q2(&self) -> Option<f64> {
        match self {
            FieldModel::CutoffCoulomb { q2, .. } => Some(*q2),
            FieldModel::Tabulated(_) => None,
        }
    }

    fn check_x(x: f64) -> Result<()> {
        if x < 0.0 {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "x = {x} is not on the negative axis"
            )))
        }
    }

    /// The scalar field `E(x)` in normalized units; never positive.
    pub fn scalar_field_raw(&self, x: f64) -> Result<f64> {
        Self::check_x(x)?;
        let r0 = self.r0();
        if x <= -r0 {
            return Ok(0.0);
        }
        Ok(match self {
            FieldModel::CutoffCoulomb { q2, .. } => -2.0 * q2 / (3.0 * x * x),
            FieldModel::Tabulated(p) => -p.magnitude(-x),
        })
    }

    /// `Ē(x) = (3/2) E(x)`. For the Coulomb field this is `-Q²/x²` inside the cutoff.
    pub fn scalar_field(&self, x: f64) -> Result<f64> {
        Ok(Normalization::FIELD_SCALE * self.scalar_field_raw(x)?)
    }

    fn interior_field_raw(&self, x: f64) -> Result<f64> {
        Self::check_x(x)?;
        Ok(match self {
            FieldModel::CutoffCoulomb { q2, .. } => -2.0 * q2 / (3.0 * x * x),
            FieldModel::Tabulated(p) => -p.magnitude_extended(-x),
        })
    }

    /// `K̄ = ∫_a^b |Ē(x)| dx` for `-r0 <= a <= b < 0`.
    pub fn field_impulse(&self, a: f64, b: f64) -> Result<f64> {
        let r0 = self.r0();
        if !(b < 0.0) {
            return Err(Error::domain(format!("upper limit b = {b} must be negative")));
        }
        if a < -r0 * (1.0 + 1e-12) {
            return Err(Error::domain(format!("lower limit a = {a} lies beyond -r0 = {}", -r0)));
        }
        if a > b {
            return Err(Error::domain(format!("interval [{a}, {b}] is reversed")));
        }
        // Radii: the interval [a, b] maps to r in [-b, -a], clipped to the cutoff.
        let r_lo = -b;
        let r_hi = (-a).min(r0);
        if r_hi <= r_lo {
            return Ok(0.0);
        }
        let raw = match self {
            FieldModel::CutoffCoulomb { q2, .. } => {
                2.0 * q2 / 3.0 * (1.0 / r_lo - 1.0 / r_hi)
            }
            FieldModel::Tabulated(p) => p.magnitude_integral(r_lo, r_hi),
        };
        Ok(Normalization::FIELD_SCALE * raw)
    }

    /// Checks that the field is outward and that every neighbourhood just
    /// inside the cutoff carries a nonzero impulse.
    pub fn validate_theorem1_hypotheses(&self) -> HypothesisCheck {
        let fail = |msg: String| HypothesisCheck { satisfied: false, diagnostic: msg };
        if let FieldModel::Tabulated(p) = self {
            if let Some((r, m)) = p.knots().iter().find(|&&(_, m)| m < 0.0) {
                return fail(format!("magnitude {m} at r = {r} is negative (inward field)"));
            }
        }
        let r0 = self.r0();
        for k in 1..=20 {
            let eps = r0 * 0.5f64.powi(k);
            match self.field_impulse(-r0, -r0 + eps) {
                Ok(v) if v > 0.0 => {}
                Ok(_) => {
                    return fail(format!(
                        "impulse over (r0 - eps, r0) vanishes for eps = r0 * 2^-{k}"
                    ))
                }
                Err(e) => return fail(format!("impulse evaluation failed: {e}")),
            }
        }
        HypothesisCheck { satisfied: true, diagnostic: String::new() }
    }
}

impl ScalarField for FieldModel {
    fn cutoff_radius(&self) -> f64 {
        self.r0()
    }

    fn scalar_field(&self, x: f64) -> Result<f64> {
        FieldModel::scalar_field(self, x)
    }

    fn interior_field(&self, x: f64) -> Result<f64> {
        Ok(Normalization::FIELD_SCALE * self.interior_field_raw(x)?)
    }
}

impl<F: ScalarField + ?Sized> ScalarField for &F {
    fn cutoff_radius(&self) -> f64 {
        (**self).cutoff_radius()
    }
    fn scalar_field(&self, x: f64) -> Result<f64> {
        (**self).scalar_field(x)
    }
    fn interior_field(&self, x: f64) -> Result<f64> {
        (**self).interior_field(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn coulomb(q2: f64, r0: f64) -> FieldModel {
        FieldModel::cutoff_coulomb(q2, r0).unwrap()
    }

    #[test]
    fn coulomb_raw_values() {
        let f = coulomb(1.0, 10.0);
        assert_relative_eq!(f.scalar_field_raw(-2.0).unwrap(), -1.0 / 6.0, max_relative = 1e-15);
        assert_eq!(f.scalar_field_raw(-20.0).unwrap(), 0.0);
        assert_eq!(f.scalar_field_raw(-10.0).unwrap(), 0.0);
    }

    #[test]
    fn coulomb_scaled_values() {
        let f = coulomb(1.0, 10.0);
        assert_relative_eq!(f.scalar_field(-2.0).unwrap(), -0.25, max_relative = 1e-15);
        assert_relative_eq!(f.scalar_field(-1.0).unwrap(), -1.0, max_relative = 1e-15);
        assert_eq!(f.scalar_field(-11.0).unwrap(), 0.0);
    }

    #[test]
    fn nonnegative_x_is_rejected() {
        let f = coulomb(1.0, 10.0);
        assert!(matches!(f.scalar_field(0.0), Err(Error::Domain(_))));
        assert!(matches!(f.scalar_field_raw(3.0), Err(Error::Domain(_))));
        assert!(f.field_impulse(-1.0, 0.0).is_err());
    }

    #[test]
    fn zero_profile_is_zero_everywhere() {
        let f = FieldModel::tabulated(vec![(1.0, 0.0), (5.0, 0.0)]).unwrap();
        for x in [-0.1, -1.0, -3.0, -5.0, -9.0] {
            assert_eq!(f.scalar_field(x).unwrap(), 0.0);
        }
        assert_eq!(f.field_impulse(-5.0, -0.5).unwrap(), 0.0);
    }

    #[test]
    fn coulomb_impulse_closed_form() {
        let f = coulomb(1.0, 2.0);
        assert_relative_eq!(f.field_impulse(-2.0, -1.0).unwrap(), 0.5, max_relative = 1e-14);
        assert_eq!(f.field_impulse(-1.3, -1.3).unwrap(), 0.0);
    }

    #[test]
    fn impulse_rejects_limits_beyond_cutoff() {
        let f = coulomb(1.0, 2.0);
        assert!(f.field_impulse(-2.5, -1.0).is_err());
        assert!(f.field_impulse(-1.0, -1.5).is_err());
    }

    /// Trapezoid rule at 10^6 points on `|Ē|`, evaluated only through `scalar_field`.
    fn trapezoid_impulse(f: &FieldModel, a: f64, b: f64) -> f64 {
        let n = 1_000_000;
        let h = (b - a) / n as f64;
        let g = |x: f64| -f.scalar_field(x).unwrap();
        let mut s = 0.5 * (g(a) + g(b));
        for i in 1..n {
            s += g(a + i as f64 * h);
        }
        s * h
    }

    #[test]
    fn triangle_profile_impulse_matches_trapezoid_oracle() {
        // Peak 1 at 3r0/4, zero at r0/2 and r0.
        let r0 = 4.0;
        let f = FieldModel::tabulated(vec![(2.0, 0.0), (3.0, 1.0), (4.0, 0.0)]).unwrap();
        let exact = f.field_impulse(-r0, -r0 / 2.0).unwrap();
        let oracle = trapezoid_impulse(&f, -r0, -r0 / 2.0);
        assert_relative_eq!(exact, oracle, max_relative = 1e-9);
        // 1.5 * triangle area (base 2, height 1)
        assert_relative_eq!(exact, 1.5, max_relative = 1e-14);
        let partial = f.field_impulse(-3.7, -2.2).unwrap();
        assert_relative_eq!(partial, trapezoid_impulse(&f, -3.7, -2.2), max_relative = 1e-9);
    }

    #[test]
    fn hypotheses() {
        assert!(coulomb(0.3, 7.0).validate_theorem1_hypotheses().satisfied);

        let zero = FieldModel::tabulated(vec![(1.0, 0.0), (2.0, 0.0)]).unwrap();
        let check = zero.validate_theorem1_hypotheses();
        assert!(!check.satisfied);
        assert!(check.diagnostic.contains("vanishes"));

        // Zero on (r0/2, r0], positive below.
        let hollow =
            FieldModel::tabulated(vec![(0.5, 2.0), (1.0, 1.0), (2.0, 0.0), (4.0, 0.0)]).unwrap();
        assert_eq!(hollow.field_impulse(-4.0, -2.0).unwrap(), 0.0);
        assert!(!hollow.validate_theorem1_hypotheses().satisfied);
    }

    #[test]
    fn negative_magnitudes_rejected() {
        assert!(FieldModel::tabulated(vec![(1.0, -0.1)]).is_err());
        assert!(FieldModel::tabulated(vec![(2.0, 1.0), (1.0, 1.0)]).is_err());
        assert!(FieldModel::cutoff_coulomb(0.0, 1.0).is_err());
        assert!(FieldModel::cutoff_coulomb(1.0, -1.0).is_err());
    }

    #[test]
    fn profile_file_format() {
        let text = "# r magnitude\n\n0.5 1.0\n1.0   0.5\n# trailing comment\n2.0\t0.25\n";
        let p = Profile::parse(text).unwrap();
        assert_eq!(p.knots(), &[(0.5, 1.0), (1.0, 0.5), (2.0, 0.25)]);
        assert_eq!(p.cutoff(), 2.0);
        assert!(Profile::parse("1.0\n").is_err());
        assert!(Profile::parse("1.0 2.0 3.0\n").is_err());
        assert!(Profile::parse("1.0 x\n").is_err());
    }

    #[test]
    fn interior_extension_is_continuous_at_cutoff() {
        let f = coulomb(2.0, 3.0);
        let inside = f.scalar_field(-3.0 + 1e-12).unwrap();
        let ext = f.interior_field(-3.0).unwrap();
        assert_relative_eq!(inside, ext, max_relative = 1e-11);
        assert_eq!(f.scalar_field(-3.0).unwrap(), 0.0);
    }
}
