use num_integer::Integer;
use rand::Rng;

use crate::sl2::Mat2;

/// A random element of `SL(2, Z)` with all entries in `[-bound, bound]`.
///
/// The first column is a random primitive vector; the second is the
/// extended-gcd complement shifted by a multiple of the first to make it
/// short. Columns whose complement cannot be brought within the bound are
/// redrawn.
pub fn random_gamma<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> Mat2<i64> {
    assert!(bound >= 1, "bound must be positive");
    loop {
        let a = rng.gen_range(-bound..=bound);
        let c = rng.gen_range(-bound..=bound);
        if a.gcd(&c) != 1 {
            continue;
        }
        let e = a.extended_gcd(&c);
        let (x, y) = if e.gcd < 0 { (-e.x, -e.y) } else { (e.x, e.y) };
        // a·d - b·c = 1 with d = x, b = -y
        let (mut b, mut d) = (-y, x);
        let k = if a.abs() >= c.abs() {
            (-(b as f64) / a as f64).round() as i64
        } else {
            (-(d as f64) / c as f64).round() as i64
        };
        b += k * a;
        d += k * c;
        if b.abs() <= bound && d.abs() <= bound {
            return Mat2::new(a, b, c, d);
        }
    }
}
