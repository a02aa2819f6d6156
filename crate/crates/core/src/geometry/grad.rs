//! Interval values with interval gradients in the six edge lengths.

use std::ops::{Add, Div, Mul, Neg, Sub};

use super::interval::Interval;
use super::simplex::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grad {
    pub v: Interval,
    pub d: [Interval; 6],
}

const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };

impl Grad {
    fn konst(v: Interval) -> Grad {
        Grad { v, d: [ZERO; 6] }
    }

    /// The six coordinate functions over a box.
    pub fn vars(c: &[Interval; 6]) -> [Grad; 6] {
        std::array::from_fn(|i| {
            let mut d = [ZERO; 6];
            d[i] = Interval::point(1.0);
            Grad { v: c[i], d }
        })
    }

    /// Chain rule with outer derivative `k`.
    fn chain(self, v: Interval, k: Interval) -> Grad {
        Grad {
            v,
            d: self.d.map(|x| if x == ZERO { ZERO } else { x * k }),
        }
    }
}

impl Add for Grad {
    type Output = Grad;
    fn add(self, o: Grad) -> Grad {
        Grad {
            v: self.v + o.v,
            d: std::array::from_fn(|i| sum(self.d[i], o.d[i])),
        }
    }
}

fn sum(a: Interval, b: Interval) -> Interval {
    if a == ZERO {
        b
    } else if b == ZERO {
        a
    } else {
        a + b
    }
}

impl Sub for Grad {
    type Output = Grad;
    fn sub(self, o: Grad) -> Grad {
        self + -o
    }
}

impl Neg for Grad {
    type Output = Grad;
    fn neg(self) -> Grad {
        Grad {
            v: -self.v,
            d: self.d.map(|x| -x),
        }
    }
}

impl Mul for Grad {
    type Output = Grad;
    fn mul(self, o: Grad) -> Grad {
        Grad {
            v: self.v * o.v,
            d: std::array::from_fn(|i| {
                let a = if self.d[i] == ZERO { ZERO } else { self.d[i] * o.v };
                let b = if o.d[i] == ZERO { ZERO } else { self.v * o.d[i] };
                sum(a, b)
            }),
        }
    }
}

impl Div for Grad {
    type Output = Grad;
    fn div(self, o: Grad) -> Grad {
        let q = self.v / o.v;
        Grad {
            v: q,
            d: std::array::from_fn(|i| {
                let num = sum(
                    self.d[i],
                    if o.d[i] == ZERO { ZERO } else { -(q * o.d[i]) },
                );
                if num == ZERO {
                    ZERO
                } else {
                    num / o.v
                }
            }),
        }
    }
}

impl Real for Grad {
    fn c(x: f64) -> Grad {
        Grad::konst(Interval::point(x))
    }
    fn enclose(x: f64) -> Grad {
        Grad::konst(Interval::around(x))
    }
    fn pi() -> Grad {
        Grad::konst(Interval::pi())
    }
    fn sqrt(self) -> Grad {
        let r = self.v.sqrt();
        self.chain(r, Interval::point(1.0) / (Interval::point(2.0) * r))
    }
    fn acos(self) -> Grad {
        let one = Interval::point(1.0);
        let k = -(one / (one - self.v.sq()).sqrt());
        self.chain(self.v.acos(), k)
    }
    fn atan(self) -> Grad {
        let one = Interval::point(1.0);
        self.chain(self.v.atan(), one / (one + self.v.sq()))
    }
    fn sq(self) -> Grad {
        self.chain(self.v.sq(), Interval::point(2.0) * self.v)
    }
}
