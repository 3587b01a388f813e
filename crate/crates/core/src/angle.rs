//! Angle canonicalization and circular distance.

use core::f64::consts::{PI, TAU};

/// Maps an angle into `[0, 2pi)`.
pub fn canonical(theta: f64) -> f64 {
    let mut t = theta - TAU * libm::floor(theta / TAU);
    if t < 0.0 {
        t += TAU;
    }
    // the subtraction can round up to exactly TAU for tiny negative inputs
    if t >= TAU {
        0.0
    } else {
        t
    }
}

/// Distance between two angles on the circle, in `[0, pi]`.
pub fn circular_distance(a: f64, b: f64) -> f64 {
    let d = canonical(a - b);
    if d > PI {
        TAU - d
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_range() {
        assert_eq!(canonical(0.0), 0.0);
        assert_eq!(canonical(TAU), 0.0);
        assert!((canonical(-0.5) - (TAU - 0.5)).abs() < 1e-15);
        assert_eq!(canonical(-1e-300), 0.0);
        assert!((canonical(7.0 * PI) - PI).abs() < 1e-14);
    }

    #[test]
    fn distance_wraps() {
        assert!((circular_distance(0.1, TAU - 0.1) - 0.2).abs() < 1e-15);
        assert!((circular_distance(0.0, PI) - PI).abs() < 1e-15);
        assert!(circular_distance(3.0, 3.0 + TAU) < 1e-15);
    }
}
