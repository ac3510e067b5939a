//! Polar complex coefficients.
//!
//! [`ComplexCoefficient`] is the currency of this crate: precoding weights,
//! measured wave-quantity ratios, and every correction factor in the
//! calibration chain are amplitude/phase pairs. The amplitude is a linear
//! magnitude, the phase is in degrees and always canonicalized to the
//! half-open interval `(-180, 180]`. Degrees are converted to radians in
//! exactly one place ([`deg_to_rad`]) so the whole crate agrees on the
//! conversion.

use num_complex::Complex64;
use std::fmt;
use std::ops::Mul;

/// Degrees → radians. The single conversion choke point for the crate.
#[inline]
pub fn deg_to_rad(deg: f64) -> f64 {
    deg.to_radians()
}

/// Radians → degrees.
#[inline]
pub fn rad_to_deg(rad: f64) -> f64 {
    rad.to_degrees()
}

/// Wraps a phase in degrees into the canonical interval `(-180, 180]`.
///
/// `-180` maps to `+180`; non-finite inputs are returned unchanged.
#[inline]
pub fn wrap_phase_deg(deg: f64) -> f64 {
    if !deg.is_finite() {
        return deg;
    }
    let mut p = deg % 360.0;
    if p <= -180.0 {
        p += 360.0;
    } else if p > 180.0 {
        p -= 360.0;
    }
    // `+ 0.0` turns a negative zero into a positive one.
    p + 0.0
}

/// A complex value stored in polar form: linear amplitude and phase in
/// degrees.
///
/// Invariants, enforced by every constructor and operation:
/// * `amplitude >= 0`
/// * `phase_deg` lies in `(-180, 180]`
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexCoefficient {
    amplitude: f64,
    phase_deg: f64,
}

impl ComplexCoefficient {
    /// The multiplicative identity, `1∠0°`.
    pub const UNIT: ComplexCoefficient = ComplexCoefficient {
        amplitude: 1.0,
        phase_deg: 0.0,
    };

    /// The zero coefficient, `0∠0°`.
    pub const ZERO: ComplexCoefficient = ComplexCoefficient {
        amplitude: 0.0,
        phase_deg: 0.0,
    };

    /// Builds a coefficient from a linear amplitude and a phase in degrees.
    ///
    /// A negative amplitude is folded into the phase (`-a∠φ` becomes
    /// `a∠(φ+180°)`), and the phase is wrapped into `(-180, 180]`.
    pub fn from_polar(amplitude: f64, phase_deg: f64) -> Self {
        let (amplitude, phase_deg) = if amplitude < 0.0 {
            (-amplitude, phase_deg + 180.0)
        } else {
            (amplitude, phase_deg)
        };
        ComplexCoefficient {
            amplitude,
            phase_deg: wrap_phase_deg(phase_deg),
        }
    }

    /// Builds a coefficient from cartesian real/imaginary parts.
    pub fn from_cartesian(re: f64, im: f64) -> Self {
        ComplexCoefficient {
            amplitude: re.hypot(im),
            phase_deg: wrap_phase_deg(rad_to_deg(im.atan2(re))),
        }
    }

    /// Builds a coefficient from a [`Complex64`].
    pub fn from_complex(z: Complex64) -> Self {
        Self::from_cartesian(z.re, z.im)
    }

    /// Linear amplitude (always ≥ 0).
    #[inline]
    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    /// Phase in degrees, in `(-180, 180]`.
    #[inline]
    pub fn phase_deg(&self) -> f64 {
        self.phase_deg
    }

    /// Squared amplitude, the power carried by this coefficient.
    #[inline]
    pub fn power(&self) -> f64 {
        self.amplitude * self.amplitude
    }

    /// Cartesian view of the coefficient.
    pub fn as_complex(&self) -> Complex64 {
        Complex64::from_polar(self.amplitude, deg_to_rad(self.phase_deg))
    }

    /// Real part.
    pub fn re(&self) -> f64 {
        self.as_complex().re
    }

    /// Imaginary part.
    pub fn im(&self) -> f64 {
        self.as_complex().im
    }

    /// True if the amplitude is exactly zero.
    #[inline]
    pub fn is_zero(&self) -> bool {
        self.amplitude == 0.0
    }

    /// Multiplicative inverse: `1/amplitude ∠ -phase`. `None` for zero
    /// amplitude.
    pub fn inverse(&self) -> Option<Self> {
        if self.amplitude == 0.0 {
            return None;
        }
        Some(ComplexCoefficient {
            amplitude: 1.0 / self.amplitude,
            phase_deg: wrap_phase_deg(-self.phase_deg),
        })
    }

    /// Scales the amplitude by a non-negative factor, leaving the phase
    /// untouched.
    pub fn scale_amplitude(&self, factor: f64) -> Self {
        debug_assert!(factor >= 0.0, "amplitude scale factor must be >= 0");
        ComplexCoefficient {
            amplitude: self.amplitude * factor,
            phase_deg: self.phase_deg,
        }
    }

    /// Rotates the phase by `delta_deg`, wrapping back into the canonical
    /// interval.
    pub fn rotate_deg(&self, delta_deg: f64) -> Self {
        ComplexCoefficient {
            amplitude: self.amplitude,
            phase_deg: wrap_phase_deg(self.phase_deg + delta_deg),
        }
    }
}

impl Mul for ComplexCoefficient {
    type Output = ComplexCoefficient;

    /// Complex multiplication in polar form: amplitudes multiply, phases add
    /// and re-wrap.
    fn mul(self, rhs: ComplexCoefficient) -> ComplexCoefficient {
        ComplexCoefficient {
            amplitude: self.amplitude * rhs.amplitude,
            phase_deg: wrap_phase_deg(self.phase_deg + rhs.phase_deg),
        }
    }
}

impl fmt::Display for ComplexCoefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}∠{}°", self.amplitude, self.phase_deg)
    }
}

/// Parses a complex literal.
///
/// Accepted grammar (whitespace around tokens is ignored):
///
/// ```text
/// complex   := polar | cartesian
/// polar     := float '∠' float ['°']          amplitude ∠ phase in degrees
/// cartesian := term [('+'|'-') term]          at most one real + one imaginary
/// term      := float | imag
/// imag      := 'j' [float] | float 'j'        bare 'j' means 1j
/// ```
///
/// Examples: `0.23`, `-0.6-0.02j`, `j0.7607`, `1.5e-3+2e-4j`, `0.9747∠-162.3`.
pub fn parse_complex(input: &str) -> Result<Complex64, String> {
    let s = input.trim();
    if s.is_empty() {
        return Err("empty complex literal".to_string());
    }

    if let Some(parts) = parse_polar_parts(s) {
        let (amp, phase) = parts?;
        return Ok(Complex64::from_polar(amp, deg_to_rad(phase)));
    }

    // Find the one split point between the real and imaginary terms: a sign
    // that is neither leading nor part of an exponent.
    let mut split = None;
    for (i, c) in s.char_indices() {
        if (c == '+' || c == '-') && i > 0 {
            let prev = s[..i].chars().next_back().unwrap();
            if prev == 'e' || prev == 'E' {
                continue;
            }
            if split.is_some() {
                return Err(format!("malformed complex literal `{s}`"));
            }
            split = Some(i);
        }
    }

    let (first, second) = match split {
        Some(i) => (&s[..i], Some(&s[i..])),
        None => (s, None),
    };

    let mut re = None;
    let mut im = None;
    for term in std::iter::once(first).chain(second) {
        let (value, imaginary) = parse_term(term, s)?;
        let slot = if imaginary { &mut im } else { &mut re };
        if slot.is_some() {
            return Err(format!("duplicate {} term in `{s}`", if imaginary { "imaginary" } else { "real" }));
        }
        *slot = Some(value);
    }

    Ok(Complex64::new(re.unwrap_or(0.0), im.unwrap_or(0.0)))
}

/// Splits an `amplitude∠phase[°]` literal into its two floats. `None` when
/// the literal is not in polar form at all.
fn parse_polar_parts(s: &str) -> Option<Result<(f64, f64), String>> {
    let (amp_s, phase_s) = s.split_once('∠')?;
    let parsed = (|| {
        let amp: f64 = amp_s
            .trim()
            .parse()
            .map_err(|_| format!("bad amplitude in `{s}`"))?;
        let phase_s = phase_s.trim().trim_end_matches('°').trim();
        let phase: f64 = phase_s
            .parse()
            .map_err(|_| format!("bad phase in `{s}`"))?;
        Ok((amp, phase))
    })();
    Some(parsed)
}

/// Parses a complex literal straight into polar storage.
///
/// Same grammar as [`parse_complex`], but a polar literal keeps its
/// amplitude and (wrapped) phase verbatim instead of routing through
/// cartesian space. A literal produced by [`ComplexCoefficient`]'s
/// `Display` therefore reparses to the bitwise-identical coefficient.
/// Non-finite values are rejected.
pub fn parse_coefficient(input: &str) -> Result<ComplexCoefficient, String> {
    let s = input.trim();
    if s.is_empty() {
        return Err("empty complex literal".to_string());
    }
    if let Some(parts) = parse_polar_parts(s) {
        let (amp, phase) = parts?;
        if !amp.is_finite() || !phase.is_finite() {
            return Err(format!("non-finite complex literal `{s}`"));
        }
        return Ok(ComplexCoefficient::from_polar(amp, phase));
    }
    let z = parse_complex(s)?;
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(format!("non-finite complex literal `{s}`"));
    }
    Ok(ComplexCoefficient::from_complex(z))
}

/// Parses one additive term, returning `(value, is_imaginary)`.
fn parse_term(term: &str, whole: &str) -> Result<(f64, bool), String> {
    let t = term.trim();
    if t.is_empty() {
        return Err(format!("malformed complex literal `{whole}`"));
    }
    let (body, imaginary) = if let Some(rest) = t.strip_suffix('j') {
        (rest.trim(), true)
    } else {
        // `j` may also sit right after the sign: `j0.5`, `-j0.5`, `+j`.
        let (sign, unsigned) = match t.strip_prefix('-') {
            Some(r) => ("-", r.trim_start()),
            None => ("+", t.strip_prefix('+').unwrap_or(t).trim_start()),
        };
        match unsigned.strip_prefix('j') {
            Some(rest) => {
                let rest = rest.trim_start();
                let digits = if rest.is_empty() { "1" } else { rest };
                let v: f64 = format!("{sign}{digits}")
                    .parse()
                    .map_err(|_| format!("bad number `{t}` in `{whole}`"))?;
                return Ok((v, true));
            }
            None => (t, false),
        }
    };
    // A bare `j` (possibly signed) means ±1j; real terms need digits.
    let body = if imaginary {
        match body {
            "" => "1",
            "-" => "-1",
            "+" => "1",
            other => other,
        }
    } else {
        body
    };
    let v: f64 = body
        .parse()
        .map_err(|_| format!("bad number `{t}` in `{whole}`"))?;
    Ok((v, imaginary))
}

/// Formats a complex value in the cartesian `a+bj` literal form accepted by
/// [`parse_complex`]. Uses Rust's shortest exact float formatting, so
/// `parse_complex(&format_complex(z)) == z` bit for bit.
pub fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.re == 0.0 {
        format!("{}j", z.im)
    } else if z.im < 0.0 {
        format!("{}-{}j", z.re, -z.im)
    } else {
        format!("{}+{}j", z.re, z.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn wrap_canonical_interval() {
        assert_eq!(wrap_phase_deg(180.0), 180.0);
        assert_eq!(wrap_phase_deg(-180.0), 180.0);
        assert_eq!(wrap_phase_deg(181.0), -179.0);
        assert_eq!(wrap_phase_deg(-181.0), 179.0);
        assert_eq!(wrap_phase_deg(360.0), 0.0);
        assert_eq!(wrap_phase_deg(540.0), 180.0);
        assert_eq!(wrap_phase_deg(-540.0), 180.0);
        assert_eq!(wrap_phase_deg(0.0), 0.0);
        // -0.0 normalizes to +0.0
        assert!(wrap_phase_deg(-0.0).is_sign_positive());
    }

    #[test]
    fn negative_amplitude_folds_into_phase() {
        let c = ComplexCoefficient::from_polar(-1.0, 0.0);
        assert_eq!(c.amplitude(), 1.0);
        assert_eq!(c.phase_deg(), 180.0);
    }

    #[test]
    fn polar_cartesian_round_trip() {
        let cases = [
            (1.026, 162.30),
            (1.186, -158.24),
            (1.248, -138.24),
            (0.77, 0.0),
            (1e-4, 45.0),
            (3.5, 180.0),
        ];
        for (amp, ph) in cases {
            let c = ComplexCoefficient::from_polar(amp, ph);
            let back = ComplexCoefficient::from_complex(c.as_complex());
            let err = (back.as_complex() - c.as_complex()).norm() / c.amplitude();
            assert!(err < 1e-12, "round trip error {err} for {amp}∠{ph}");
        }
    }

    #[test]
    fn multiplication_in_polar_form() {
        let a = ComplexCoefficient::from_polar(2.0, 170.0);
        let b = ComplexCoefficient::from_polar(0.5, 20.0);
        let p = a * b;
        assert_eq!(p.amplitude(), 1.0);
        assert_eq!(p.phase_deg(), -170.0);
    }

    #[test]
    fn inverse_of_zero_is_none() {
        assert!(ComplexCoefficient::ZERO.inverse().is_none());
        let c = ComplexCoefficient::from_polar(2.0, 30.0).inverse().unwrap();
        assert!(close(c.amplitude(), 0.5, 1e-15));
        assert!(close(c.phase_deg(), -30.0, 1e-15));
    }

    #[test]
    fn parse_cartesian_forms() {
        assert_eq!(parse_complex("0.23").unwrap(), Complex64::new(0.23, 0.0));
        assert_eq!(
            parse_complex("-0.6-0.02j").unwrap(),
            Complex64::new(-0.6, -0.02)
        );
        assert_eq!(
            parse_complex("-0.60-j0.02").unwrap(),
            Complex64::new(-0.6, -0.02)
        );
        assert_eq!(parse_complex("j0.7607").unwrap(), Complex64::new(0.0, 0.7607));
        assert_eq!(parse_complex("0.7607j").unwrap(), Complex64::new(0.0, 0.7607));
        assert_eq!(parse_complex("j").unwrap(), Complex64::new(0.0, 1.0));
        assert_eq!(parse_complex("-j").unwrap(), Complex64::new(0.0, -1.0));
        assert_eq!(
            parse_complex("0.0001+j0.0001").unwrap(),
            Complex64::new(0.0001, 0.0001)
        );
        assert_eq!(
            parse_complex("1.5e-3+2e-4j").unwrap(),
            Complex64::new(1.5e-3, 2e-4)
        );
    }

    #[test]
    fn parse_polar_form() {
        let z = parse_complex("0.9747∠-162.30").unwrap();
        let want = Complex64::from_polar(0.9747, deg_to_rad(-162.30));
        assert!((z - want).norm() < 1e-15);
        let z = parse_complex("1∠90°").unwrap();
        assert!((z - Complex64::new(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn parse_rejects_malformed() {
        assert!(parse_complex("").is_err());
        assert!(parse_complex("1+2").is_err());
        assert!(parse_complex("1j+2j").is_err());
        assert!(parse_complex("1+2j+3").is_err());
        assert!(parse_complex("abc").is_err());
        assert!(parse_complex("∠30").is_err());
    }

    #[test]
    fn display_literal_reparses_bitwise() {
        let cases = [
            ComplexCoefficient::from_cartesian(-0.6, -0.02),
            ComplexCoefficient::from_polar(0.5441617094899562, 139.60915243299635),
            ComplexCoefficient::from_polar(1.0, 180.0),
            ComplexCoefficient::UNIT,
            ComplexCoefficient::ZERO,
        ];
        for c in cases {
            let back = parse_coefficient(&c.to_string()).unwrap();
            assert_eq!(back.amplitude().to_bits(), c.amplitude().to_bits(), "{c}");
            assert_eq!(back.phase_deg().to_bits(), c.phase_deg().to_bits(), "{c}");
        }
    }

    #[test]
    fn parse_coefficient_accepts_both_forms_and_rejects_non_finite() {
        let c = parse_coefficient("1.026∠162.3").unwrap();
        assert_eq!(c.amplitude(), 1.026);
        assert_eq!(c.phase_deg(), 162.3);
        let c = parse_coefficient("-0.6-0.02j").unwrap();
        assert!(close(c.re(), -0.6, 1e-12));
        assert!(close(c.im(), -0.02, 1e-12));
        assert!(parse_coefficient("inf∠0").is_err());
        assert!(parse_coefficient("NaN").is_err());
    }

    #[test]
    fn format_round_trips_exactly() {
        let cases = [
            Complex64::new(0.23, 0.0),
            Complex64::new(-0.6, -0.02),
            Complex64::new(0.0, 0.7607),
            Complex64::new(1.0 / 3.0, -2.0 / 7.0),
            Complex64::new(0.0, 0.0),
        ];
        for z in cases {
            let s = format_complex(z);
            let back = parse_complex(&s).unwrap();
            assert_eq!(back, z, "`{s}` did not round trip");
        }
    }
}
