//! Double-double arithmetic: a value is the unevaluated sum `hi + lo` of two
//! f64 words, good for roughly 32 significant decimal digits.
//!
//! The orthonormalization path needs it because Cholesky pivots of moment Gram
//! matrices cancel almost completely near degeneracy; the surviving digits
//! decide rank and defect questions that plain f64 reports as noise. Moment
//! data enters as exact f64 values, so the extended precision is spent purely
//! on the arithmetic.

use num_complex::Complex64;

/// Unevaluated sum `hi + lo`, kept normalized so `|lo|` is at most half an ulp
/// of `hi`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

/// Error-free sum: returns `(s, e)` with `s = fl(a + b)` and `a + b = s + e`
/// exactly.
#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

/// Error-free sum assuming `|a| >= |b|` (or `a == 0`).
#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

/// Error-free product via fused multiply-add: `a * b = p + e` exactly.
#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = a.mul_add(b, -p);
    (p, e)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    fn renorm(hi: f64, lo: f64) -> Dd {
        let (h, l) = quick_two_sum(hi, lo);
        Dd { hi: h, lo: l }
    }

    /// Nearest f64 to the represented value.
    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn add(self, rhs: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, rhs.hi);
        let (t1, t2) = two_sum(self.lo, rhs.lo);
        let s2 = s2 + t1;
        let (s1, s2) = quick_two_sum(s1, s2);
        let s2 = s2 + t2;
        Dd::renorm(s1, s2)
    }

    #[inline]
    pub fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    #[inline]
    pub fn sub(self, rhs: Dd) -> Dd {
        self.add(rhs.neg())
    }

    #[inline]
    pub fn mul(self, rhs: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, rhs.hi);
        let p2 = p2 + self.hi * rhs.lo + self.lo * rhs.hi;
        Dd::renorm(p1, p2)
    }

    #[inline]
    pub fn mul_f64(self, rhs: f64) -> Dd {
        let (p1, p2) = two_prod(self.hi, rhs);
        let p2 = p2 + self.lo * rhs;
        Dd::renorm(p1, p2)
    }

    /// Long division with two correction terms; relative error stays near the
    /// double-double roundoff level.
    pub fn div(self, rhs: Dd) -> Dd {
        let q1 = self.hi / rhs.hi;
        let r = self.sub(rhs.mul_f64(q1));
        let q2 = r.hi / rhs.hi;
        let r = r.sub(rhs.mul_f64(q2));
        let q3 = r.hi / rhs.hi;
        Dd::renorm(q1, q2).add(Dd::from_f64(q3))
    }

    /// Square root by one Newton correction from the f64 seed. Requires a
    /// nonnegative value; exact zero is returned for zero.
    pub fn sqrt(self) -> Dd {
        if self.hi == 0.0 && self.lo == 0.0 {
            return Dd::ZERO;
        }
        debug_assert!(self.hi > 0.0, "sqrt of negative double-double");
        let y = self.hi.sqrt();
        let (p1, p2) = two_prod(y, y);
        let diff = self.sub(Dd { hi: p1, lo: p2 }).hi;
        let corr = diff * (0.5 / y);
        Dd::from_f64(y).add(Dd::from_f64(corr))
    }

}

/// Complex number with double-double components.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct DdC {
    pub re: Dd,
    pub im: Dd,
}

impl DdC {
    pub const ZERO: DdC = DdC { re: Dd::ZERO, im: Dd::ZERO };

    #[inline]
    pub fn from_c64(z: Complex64) -> DdC {
        DdC { re: Dd::from_f64(z.re), im: Dd::from_f64(z.im) }
    }

    #[inline]
    pub fn from_real(x: Dd) -> DdC {
        DdC { re: x, im: Dd::ZERO }
    }

    #[inline]
    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    #[inline]
    pub fn add(self, rhs: DdC) -> DdC {
        DdC { re: self.re.add(rhs.re), im: self.im.add(rhs.im) }
    }

    #[inline]
    pub fn sub(self, rhs: DdC) -> DdC {
        DdC { re: self.re.sub(rhs.re), im: self.im.sub(rhs.im) }
    }

    #[inline]
    pub fn mul(self, rhs: DdC) -> DdC {
        DdC {
            re: self.re.mul(rhs.re).sub(self.im.mul(rhs.im)),
            im: self.re.mul(rhs.im).add(self.im.mul(rhs.re)),
        }
    }

    /// `self * conj(rhs)`.
    #[inline]
    pub fn mul_conj(self, rhs: DdC) -> DdC {
        DdC {
            re: self.re.mul(rhs.re).add(self.im.mul(rhs.im)),
            im: self.im.mul(rhs.re).sub(self.re.mul(rhs.im)),
        }
    }

    /// `|self|^2` as a real double-double.
    #[inline]
    pub fn norm_sqr(self) -> Dd {
        self.re.mul(self.re).add(self.im.mul(self.im))
    }

    #[inline]
    pub fn mul_f64(self, rhs: f64) -> DdC {
        DdC { re: self.re.mul_f64(rhs), im: self.im.mul_f64(rhs) }
    }

    pub fn div_real(self, rhs: Dd) -> DdC {
        DdC { re: self.re.div(rhs), im: self.im.div(rhs) }
    }

}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn addition_preserves_tiny_summands() {
        let x = Dd::from_f64(1.0).add(Dd::from_f64(1e-20));
        assert_eq!(x.hi, 1.0);
        assert_eq!(x.lo, 1e-20);
        let back = x.sub(Dd::from_f64(1.0));
        assert_eq!(back.to_f64(), 1e-20);
    }

    #[test]
    fn product_carries_the_exact_residual() {
        let p = Dd::from_f64(1.1).mul(Dd::from_f64(2.3));
        assert_eq!(p.hi, 2.53);
        assert_eq!(p.lo, 2.0428103653102879e-16);
    }

    #[test]
    fn division_matches_reference_digits() {
        let q = Dd::from_f64(1.0).div(Dd::from_f64(3.0));
        assert_eq!(q.hi, 0.3333333333333333);
        assert!((q.lo - 1.850371707708594e-17).abs() < 1e-32);
    }

    #[test]
    fn sqrt_matches_reference_digits() {
        let r = Dd::from_f64(2.0).sqrt();
        assert_eq!(r.hi, 1.4142135623730951);
        assert!((r.lo - -9.667293313452913e-17).abs() < 1e-31);
        let t = Dd::from_f64(1.0).div(Dd::from_f64(3.0)).sqrt();
        assert_eq!(t.hi, 0.5773502691896257);
        assert!((t.lo - 3.3450280739356345e-17).abs() < 1e-31);
    }

    #[test]
    fn sqrt_squares_back_to_the_input() {
        for &v in &[2.0, 3.0, 10.0, 0.49, 1e-12, 7.25e9] {
            let r = Dd::from_f64(v).sqrt();
            let back = r.mul(r).sub(Dd::from_f64(v));
            assert!(back.to_f64().abs() <= 1e-30 * v, "v = {v}");
        }
    }

    #[test]
    fn complex_product_against_f64_on_exact_cases() {
        let a = DdC::from_c64(Complex64::new(3.0, 4.0));
        let b = DdC::from_c64(Complex64::new(-2.0, 1.0));
        let p = a.mul(b);
        assert_eq!(p.to_c64(), Complex64::new(-10.0, -5.0));
        let q = a.mul_conj(a);
        assert_eq!(q.re.to_f64(), 25.0);
        assert_eq!(q.im.to_f64(), 0.0);
        assert_eq!(a.norm_sqr().to_f64(), 25.0);
    }

    #[test]
    fn cancellation_keeps_thirty_digits() {
        // (1 + h)(1 - h) - 1 = -h^2 exactly, with h^2 far below f64 resolution
        // of the intermediate products.
        let h = 1e-13;
        let a = Dd::from_f64(1.0).add(Dd::from_f64(h));
        let b = Dd::from_f64(1.0).sub(Dd::from_f64(h));
        let r = a.mul(b).sub(Dd::from_f64(1.0));
        assert!((r.to_f64() + 1e-26).abs() < 1e-31);
    }

}
