//! M-PSK constellations, per-antenna detection, and detection-wedge geometry.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::{Error, Result};

/// Angular distance from ±π/2 below which `tan` is treated as singular.
pub const SINGULAR_TOL: f64 = 1e-9;

/// Wraps an angle to the principal interval (−π, π].
pub fn wrap_angle(theta: f64) -> f64 {
    let mut x = theta.rem_euclid(2.0 * PI);
    if x > PI {
        x -= 2.0 * PI;
    }
    x
}

fn near_singular(theta: f64) -> bool {
    let t = wrap_angle(theta);
    (t - FRAC_PI_2).abs() < SINGULAR_TOL || (t + FRAC_PI_2).abs() < SINGULAR_TOL
}

/// An M-PSK constellation whose points avoid the tangent singularities at ±π/2.
#[derive(Clone, Debug, PartialEq)]
pub struct Constellation {
    order: usize,
    offset: f64,
    requested_offset: f64,
    points: Vec<Complex64>,
    angles: Vec<f64>,
}

impl Constellation {
    /// Builds an `order`-PSK constellation.
    ///
    /// If any point under `requested_offset` lies within [`SINGULAR_TOL`] of
    /// ±π/2, the offset is advanced by π/M (see [`Constellation::offset_adjusted`]).
    /// Points are indexed by k with angle `offset + 2πk/M`.
    pub fn new(order: usize, requested_offset: f64) -> Result<Self> {
        if order < 2 {
            return Err(Error::InvalidOrder(order));
        }
        let m = order as f64;
        let step = 2.0 * PI / m;
        let hits = |off: f64| (0..order).any(|k| near_singular(off + step * k as f64));
        let mut offset = requested_offset;
        if hits(offset) {
            offset += PI / m;
        }
        debug_assert!(!hits(offset));
        let angles: Vec<f64> = (0..order)
            .map(|k| wrap_angle(offset + step * k as f64))
            .collect();
        let points = angles.iter().map(|&a| Complex64::from_polar(1.0, a)).collect();
        Ok(Self {
            order,
            offset,
            requested_offset,
            points,
            angles,
        })
    }

    /// 8-PSK with the offset π/8, the constellation used throughout the simulations.
    pub fn psk8() -> Self {
        Self::new(8, PI / 8.0).expect("8 >= 2")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// The offset actually applied.
    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn requested_offset(&self) -> f64 {
        self.requested_offset
    }

    /// True when the requested offset was moved off a tangent singularity.
    pub fn offset_adjusted(&self) -> bool {
        self.offset != self.requested_offset
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn point(&self, k: usize) -> Complex64 {
        self.points[k]
    }

    /// Principal-value angle of point `k`.
    pub fn angle(&self, k: usize) -> f64 {
        self.angles[k]
    }

    /// Maps symbol indices to constellation points.
    pub fn symbols(&self, idx: &[usize]) -> crate::CVector {
        crate::CVector::from_iterator(idx.len(), idx.iter().map(|&k| self.points[k]))
    }

    /// Nearest-point detection; ties (within relative 1e-12) go to the lower index.
    pub fn detect(&self, y: Complex64) -> usize {
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (k, p) in self.points.iter().enumerate() {
            let d = (y - p).norm_sqr();
            if d < best_d * (1.0 - 1e-12) {
                best_d = d;
                best = k;
            }
        }
        best
    }

    /// Detects every entry of `y`.
    pub fn detect_all(&self, y: &crate::CVector) -> Vec<usize> {
        y.iter().map(|&v| self.detect(v)).collect()
    }
}

/// `tan(arg s)`, the slope of the phase line through `s`.
pub fn tan_of_phase(s: Complex64) -> Result<f64> {
    let a = s.arg();
    if near_singular(a) {
        return Err(Error::Singularity { angle: a });
    }
    Ok(a.tan())
}

/// Detection-wedge constants for one reference symbol at linear SNR γ.
///
/// With `y` the received sample, the wedge is
/// `Im y − b1·Re y ≥ a1` and `b2·Re y − Im y ≥ −a2`: a cone with apex at
/// `√γ·s0` whose edges run parallel to the two decision boundaries of `s0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RelaxedRegion {
    pub phi: f64,
    pub c1: f64,
    pub c2: f64,
    pub b1: f64,
    pub b2: f64,
    pub a1: f64,
    pub a2: f64,
}

impl RelaxedRegion {
    /// Builds the wedge for `s0` in an `order`-PSK constellation.
    ///
    /// The closed forms assume both edges lie in the first quadrant, so the
    /// phase of `s0` must lie in [π/M, π/2 − π/M); this needs M ≥ 5.
    pub fn new(s0: Complex64, order: usize, gamma: f64) -> Result<Self> {
        if order < 2 {
            return Err(Error::InvalidOrder(order));
        }
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::InvalidParameter(format!("gamma must be positive, got {gamma}")));
        }
        let half = PI / order as f64;
        let phi = s0.arg();
        let (lo, hi) = (phi - half, phi + half);
        for edge in [lo, hi] {
            if near_singular(edge) {
                return Err(Error::Singularity { angle: edge });
            }
        }
        if lo < -1e-12 || hi >= FRAC_PI_2 {
            return Err(Error::InvalidParameter(format!(
                "reference phase {phi:.6} outside [pi/M, pi/2 - pi/M) for M = {order}"
            )));
        }
        let sg = gamma.sqrt();
        let c1 = sg * phi.sin();
        let c2 = sg * phi.cos();
        let b1 = lo.tan();
        let b2 = hi.tan();
        let a1 = c1 - ((lo.cos().powi(-2) - 1.0).max(0.0) * c2 * c2).sqrt();
        let a2 = -b2 * (c2 - ((hi.sin().powi(-2) - 1.0).max(0.0) * c1 * c1).sqrt());
        Ok(Self {
            phi,
            c1,
            c2,
            b1,
            b2,
            a1,
            a2,
        })
    }

    /// Slacks of the two wedge inequalities at `y` (both ≥ 0 inside).
    pub fn slacks(&self, y: Complex64) -> (f64, f64) {
        (
            y.im - self.b1 * y.re - self.a1,
            self.b2 * y.re - y.im + self.a2,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn qpsk_quarter_rotation() {
        let c = Constellation::new(4, FRAC_PI_4).unwrap();
        assert!(!c.offset_adjusted());
        for k in 0..4 {
            let want = Complex64::from_polar(1.0, FRAC_PI_4 + k as f64 * FRAC_PI_2);
            assert_abs_diff_eq!((c.point(k) - want).norm(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn bpsk() {
        let c = Constellation::new(2, 0.0).unwrap();
        assert_abs_diff_eq!((c.point(0) - Complex64::new(1.0, 0.0)).norm(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!((c.point(1) - Complex64::new(-1.0, 0.0)).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn psk8_offset_adjusted() {
        let c = Constellation::new(8, 0.0).unwrap();
        assert!(c.offset_adjusted());
        assert_abs_diff_eq!(c.offset(), PI / 8.0, epsilon = 1e-15);
        assert_eq!(c.points(), Constellation::psk8().points());
    }

    #[test]
    fn order_too_small() {
        assert!(matches!(Constellation::new(1, 0.0), Err(Error::InvalidOrder(1))));
    }

    #[test]
    fn detect_on_axis_and_tie() {
        let c = Constellation::psk8();
        assert_eq!(c.detect(Complex64::from_polar(1.3, PI / 8.0)), 0);
        let mid = Complex64::from_polar(1.0, PI / 8.0 + PI / 8.0);
        assert_eq!(c.detect(mid), 0);
        // Exactly equidistant: on the bisector of points 0 and 1.
        let bis = (c.point(0) + c.point(1)) * 0.5;
        assert_eq!(c.detect(bis), 0);
    }

    #[test]
    fn tan_examples() {
        assert_abs_diff_eq!(tan_of_phase(Complex64::from_polar(1.0, FRAC_PI_4)).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(tan_of_phase(Complex64::new(1.0, 0.0)).unwrap(), 0.0);
        let t = tan_of_phase(Complex64::from_polar(1.0, 3.0 * FRAC_PI_4)).unwrap();
        let u = tan_of_phase(Complex64::from_polar(1.0, -FRAC_PI_4)).unwrap();
        assert_abs_diff_eq!(t, -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(t, u, epsilon = 1e-12);
        assert!(matches!(tan_of_phase(Complex64::new(0.0, 1.0)), Err(Error::Singularity { .. })));
    }

    #[test]
    fn region_psk8_unit_snr() {
        let s0 = Complex64::from_polar(1.0, PI / 8.0);
        let r = RelaxedRegion::new(s0, 8, 1.0).unwrap();
        assert_abs_diff_eq!(r.c1, (PI / 8.0).sin(), epsilon = 1e-12);
        assert_abs_diff_eq!(r.c2, (PI / 8.0).cos(), epsilon = 1e-12);
        assert_abs_diff_eq!(r.b1, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.b2, 1.0, epsilon = 1e-12);
        let r4 = RelaxedRegion::new(s0, 8, 4.0).unwrap();
        assert_abs_diff_eq!(r4.c1, 2.0 * r.c1, epsilon = 1e-12);
        assert_abs_diff_eq!(r4.c2, 2.0 * r.c2, epsilon = 1e-12);
        assert_eq!((r4.b1, r4.b2), (r.b1, r.b2));
    }

    #[test]
    fn region_rejects_qpsk_edge() {
        let s0 = Complex64::from_polar(1.0, FRAC_PI_4);
        assert!(RelaxedRegion::new(s0, 4, 1.0).is_err());
    }

    proptest! {
        #[test]
        fn points_unit_and_sorted(m in 2usize..64, off in -PI..PI) {
            let c = Constellation::new(m, off).unwrap();
            let mut prev = f64::NEG_INFINITY;
            let mut sorted: Vec<f64> = (0..m).map(|k| c.angle(k)).collect();
            sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
            for (k, p) in c.points().iter().enumerate() {
                prop_assert!((p.norm_sqr() - 1.0).abs() < 1e-12);
                prop_assert!(!near_singular(c.angle(k)));
            }
            for a in sorted {
                prop_assert!(a > prev + 1e-9);
                prev = a;
            }
        }

        #[test]
        fn noiseless_detection(m in 2usize..33, k in 0usize..1000, g in 1e-3f64..1e4) {
            let c = Constellation::new(m, 0.0).unwrap();
            let k = k % m;
            prop_assert_eq!(c.detect(c.point(k) * g.sqrt()), k);
        }

        #[test]
        fn tan_balances_phase(a in -PI..PI) {
            let s = Complex64::from_polar(1.0, a);
            prop_assume!(!near_singular(a));
            let t = tan_of_phase(s).unwrap();
            // Relative form: tan grows without bound near the excluded set.
            prop_assert!((s.re * t - s.im).abs() < 1e-12 * t.abs().max(1.0));
        }

        #[test]
        fn nominal_point_inside_wedge(m in 5usize..33, frac in 0.0f64..1.0, g in 1e-2f64..1e4) {
            let half = PI / m as f64;
            let phi = half + frac * (FRAC_PI_2 - 2.0 * half - 1e-6);
            let s0 = Complex64::from_polar(1.0, phi);
            let r = RelaxedRegion::new(s0, m, g).unwrap();
            prop_assert!((r.c1 * r.c1 + r.c2 * r.c2 - g).abs() < 1e-9 * g.max(1.0));
            let (e1, e2) = r.slacks(s0 * g.sqrt());
            let tol = 1e-9 * g.sqrt() * (1.0 + r.b2.abs());
            prop_assert!(e1 >= -tol && e2 >= -tol);
        }
    }
}
