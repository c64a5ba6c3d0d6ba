//! Minimal double-double arithmetic (~31 significant digits) for the few
//! places where plain f64 loses more accuracy than the verification budgets
//! allow: terminating hypergeometric sums inside the oscillation region and
//! the forward recursion at ℰ = 0, whose polynomial solution is subdominant.

#[derive(Debug, Clone, Copy)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

pub(crate) fn two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    Dd { hi: s, lo: err }
}

pub(crate) fn two_prod(a: f64, b: f64) -> Dd {
    let p = a * b;
    Dd {
        hi: p,
        lo: a.mul_add(b, -p),
    }
}

impl Dd {
    pub fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn add(self, other: Dd) -> Dd {
        let s = two_sum(self.hi, other.hi);
        let lo = s.lo + self.lo + other.lo;
        two_sum(s.hi, lo)
    }

    pub fn sub(self, other: Dd) -> Dd {
        self.add(Dd {
            hi: -other.hi,
            lo: -other.lo,
        })
    }

    pub fn mul(self, other: Dd) -> Dd {
        let p = two_prod(self.hi, other.hi);
        let lo = p.lo + self.hi * other.lo + self.lo * other.hi;
        two_sum(p.hi, lo)
    }

    pub fn mul_f64(self, other: f64) -> Dd {
        self.mul(Dd::from_f64(other))
    }

    pub fn div(self, other: Dd) -> Dd {
        let q1 = self.hi / other.hi;
        let remainder = self.add(other.mul_f64(-q1));
        let q2 = remainder.hi / other.hi;
        two_sum(q1, q2)
    }

    pub fn div_f64(self, other: f64) -> Dd {
        self.div(Dd::from_f64(other))
    }

    pub fn value(self) -> f64 {
        self.hi + self.lo
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_digits() {
        // (1 + 1e−20) − 1 in dd keeps the small part exactly.
        let x = Dd::from_f64(1.0).add(Dd::from_f64(1e-20));
        let d = x.sub(Dd::from_f64(1.0));
        assert_eq!(d.value(), 1e-20);
    }

    #[test]
    fn division_round_trip() {
        let a = Dd::from_f64(std::f64::consts::PI);
        let b = Dd::from_f64(std::f64::consts::E);
        let q = a.div(b).mul(b);
        assert!((q.value() - std::f64::consts::PI).abs() < 1e-30);
        let q = a.div_f64(7.0).mul_f64(7.0);
        assert!((q.value() - std::f64::consts::PI).abs() < 1e-30);
    }
}
