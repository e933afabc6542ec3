//! Orientation and in-circle tests with exact signs.
//!
//! Both predicates evaluate the determinant in floating point first and only
//! fall back to expansion arithmetic when the result is inside the rounding
//! error bound, so the returned sign is always the sign of the exact
//! determinant of the (exactly representable) inputs.

use robust::Coord;

use super::Point2;

/// Sign of an exactly evaluated determinant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Negative = -1,
    Zero = 0,
    Positive = 1,
}

impl Sign {
    fn of(v: f64) -> Sign {
        if v > 0.0 {
            Sign::Positive
        } else if v < 0.0 {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }

    pub fn as_i8(self) -> i8 {
        self as i8
    }
}

#[inline]
fn coord(p: &Point2) -> Coord<f64> {
    Coord { x: p.x(), y: p.y() }
}

/// `Positive` when `a, b, c` turn counter-clockwise, `Zero` when collinear.
pub fn orient2d(a: &Point2, b: &Point2, c: &Point2) -> Sign {
    Sign::of(robust::orient2d(coord(a), coord(b), coord(c)))
}

/// For counter-clockwise `a, b, c`: `Positive` when `d` is strictly inside
/// their circumcircle, `Negative` when strictly outside, `Zero` when the four
/// points are cocircular.
pub fn in_circumcircle(a: &Point2, b: &Point2, c: &Point2, d: &Point2) -> Sign {
    Sign::of(robust::incircle(coord(a), coord(b), coord(c), coord(d)))
}

/// Circumcenter of a non-degenerate triangle, computed relative to `a` to
/// limit cancellation.
pub fn circumcenter(a: &Point2, b: &Point2, c: &Point2) -> Point2 {
    let bx = b.x() - a.x();
    let by = b.y() - a.y();
    let cx = c.x() - a.x();
    let cy = c.y() - a.y();
    let d = 2.0 * (bx * cy - by * cx);
    let b2 = bx * bx + by * by;
    let c2 = cx * cx + cy * cy;
    let ux = (cy * b2 - by * c2) / d;
    let uy = (bx * c2 - cx * b2) / d;
    Point2::raw(a.x() + ux, a.y() + uy)
}
