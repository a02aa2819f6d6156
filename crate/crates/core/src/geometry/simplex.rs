//! Simplex primitives. Edges `y1..y6`: the first three meet at the
//! distinguished vertex and edge `i+3` is opposite edge `i`. Functions of
//! squared lengths take `x`.

use std::f64::consts::PI;

use super::interval::Interval;

/// Arithmetic shared by point and interval evaluation.
pub trait Real:
    Copy
    + std::ops::Add<Output = Self>
    + std::ops::Sub<Output = Self>
    + std::ops::Mul<Output = Self>
    + std::ops::Div<Output = Self>
    + std::ops::Neg<Output = Self>
{
    fn c(x: f64) -> Self;
    /// A real known to within one ulp of `x`.
    fn enclose(x: f64) -> Self;
    fn pi() -> Self;
    fn sqrt(self) -> Self;
    fn acos(self) -> Self;
    fn atan(self) -> Self;
    fn sq(self) -> Self {
        self * self
    }
}

impl Real for f64 {
    fn c(x: f64) -> f64 {
        x
    }
    fn enclose(x: f64) -> f64 {
        x
    }
    fn pi() -> f64 {
        PI
    }
    fn sqrt(self) -> f64 {
        f64::sqrt(self.max(0.0))
    }
    fn acos(self) -> f64 {
        f64::acos(self.clamp(-1.0, 1.0))
    }
    fn atan(self) -> f64 {
        f64::atan(self)
    }
}

impl Real for Interval {
    fn c(x: f64) -> Interval {
        Interval::point(x)
    }
    fn enclose(x: f64) -> Interval {
        Interval::around(x)
    }
    fn pi() -> Interval {
        Interval::pi()
    }
    fn sqrt(self) -> Interval {
        Interval::sqrt(self)
    }
    fn acos(self) -> Interval {
        Interval::acos(self)
    }
    fn atan(self) -> Interval {
        Interval::atan(self)
    }
    fn sq(self) -> Interval {
        Interval::sq(self)
    }
}

/// `144 vol^2` of the simplex with squared edges `x`.
pub fn delta6<T: Real>(x: [T; 6]) -> T {
    let [x1, x2, x3, x4, x5, x6] = x;
    x1 * x4 * (-x1 + x2 + x3 - x4 + x5 + x6)
        + x2 * x5 * (x1 - x2 + x3 + x4 - x5 + x6)
        + x3 * x6 * (x1 + x2 - x3 + x4 + x5 - x6)
        - x2 * x3 * x4
        - x1 * x3 * x5
        - x1 * x2 * x6
        - x4 * x5 * x6
}

/// `d delta6 / d x4`.
pub fn delta4<T: Real>(x: [T; 6]) -> T {
    let [x1, x2, x3, x4, x5, x6] = x;
    x1 * (-x1 + x2 + x3 - x4 + x5 + x6) - x1 * x4 + x2 * x5 + x3 * x6 - x2 * x3 - x5 * x6
}

/// `16 area^2` of a triangle with squared sides `a, b, c`.
pub fn ups<T: Real>(a: T, b: T, c: T) -> T {
    -a.sq() - b.sq() - c.sq() + T::c(2.0) * (a * b + b * c + c * a)
}

/// Dihedral angle along the first edge.
pub fn dih_x<T: Real>(x: [T; 6]) -> T {
    let [x1, x2, x3, _, x5, x6] = x;
    let denom = (ups(x1, x2, x6) * ups(x1, x3, x5)).sqrt();
    (delta4(x) / denom).acos()
}

pub fn dih2_x<T: Real>(x: [T; 6]) -> T {
    let [x1, x2, x3, x4, x5, x6] = x;
    dih_x([x2, x1, x3, x5, x4, x6])
}

pub fn dih3_x<T: Real>(x: [T; 6]) -> T {
    let [x1, x2, x3, x4, x5, x6] = x;
    dih_x([x3, x1, x2, x6, x4, x5])
}

/// Solid angle at the distinguished vertex.
pub fn sol_x<T: Real>(x: [T; 6]) -> T {
    dih_x(x) + dih2_x(x) + dih3_x(x) - T::pi()
}

fn squares<T: Real>(y: [T; 6]) -> [T; 6] {
    y.map(|v| v.sq())
}

pub fn delta_y<T: Real>(y: [T; 6]) -> T {
    delta6(squares(y))
}

pub fn dih<T: Real>(y: [T; 6]) -> T {
    dih_x(squares(y))
}

pub fn dih2<T: Real>(y: [T; 6]) -> T {
    dih2_x(squares(y))
}

pub fn dih3<T: Real>(y: [T; 6]) -> T {
    dih3_x(squares(y))
}

pub fn sol<T: Real>(y: [T; 6]) -> T {
    sol_x(squares(y))
}

/// Circumradius of a triangle with sides `a, b, c`.
pub fn eta<T: Real>(a: T, b: T, c: T) -> T {
    a * b * c / ups(a.sq(), b.sq(), c.sq()).sqrt()
}

/// Angle opposite `c` in a triangle with sides `a, b, c`.
pub fn arc<T: Real>(a: T, b: T, c: T) -> T {
    ((a.sq() + b.sq() - c.sq()) / (T::c(2.0) * a * b)).acos()
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("edge lengths {0:?} do not form a simplex")]
pub struct Unrealizable(pub [f64; 6]);

/// Places the simplex: vertex 0 at the origin, vertex 1 on the x axis,
/// vertex 2 in the upper xy half plane, vertex 3 with `z >= 0`. Vertex `i`
/// is at distance `y_i` from the origin, `y4 = |v2 v3|`, `y5 = |v1 v3|`,
/// `y6 = |v1 v2|`.
pub fn coordinate_oracle(y: [f64; 6]) -> Result<[[f64; 3]; 4], Unrealizable> {
    let [y1, y2, y3, y4, y5, y6] = y;
    let tol = 1e-12 * (1.0 + y.iter().fold(0.0f64, |a, b| a.max(*b)).powi(2));
    let v1 = [y1, 0.0, 0.0];
    let a = (y1 * y1 + y2 * y2 - y6 * y6) / (2.0 * y1);
    let h2 = y2 * y2 - a * a;
    if h2 < -tol || y1 <= 0.0 {
        return Err(Unrealizable(y));
    }
    let b = h2.max(0.0).sqrt();
    let v2 = [a, b, 0.0];
    let p = (y1 * y1 + y3 * y3 - y5 * y5) / (2.0 * y1);
    if b <= 0.0 {
        return Err(Unrealizable(y));
    }
    // |v3|^2 = y3^2, |v3 - v2|^2 = y4^2
    let q = (y3 * y3 - y4 * y4 + a * a + b * b - 2.0 * a * p) / (2.0 * b);
    let r2 = y3 * y3 - p * p - q * q;
    if r2 < -tol {
        return Err(Unrealizable(y));
    }
    Ok([[0.0; 3], v1, v2, [p, q, r2.max(0.0).sqrt()]])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dist(a: [f64; 3], b: [f64; 3]) -> f64 {
        ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
    }

    #[test]
    fn regular_tetrahedron() {
        let y = [2.0; 6];
        let d = delta_y(y);
        let vol = 8.0 / (6.0 * 2f64.sqrt());
        assert!((d.sqrt() / 12.0 - vol).abs() < 1e-12);
        let a = (1.0f64 / 3.0).acos();
        assert!((dih(y) - a).abs() < 1e-12);
        assert!((dih(y) - 1.230959).abs() < 1e-6);
        assert!((sol(y) - (3.0 * a - PI)).abs() < 1e-12);
        assert!((sol(y) - 0.551286).abs() < 1e-6);
    }

    #[test]
    fn triangles() {
        assert!((arc(2.0, 2.0, 2.0) - PI / 3.0).abs() < 1e-12);
        assert!((eta(2.0, 2.0, 2.0) - 2.0 / 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn oracle_roundtrip() {
        let r8 = 8f64.sqrt();
        for y in [[2.0; 6], [2.0, 2.0, 2.0, r8, r8, r8]] {
            let p = coordinate_oracle(y).unwrap();
            let got = [
                dist(p[0], p[1]),
                dist(p[0], p[2]),
                dist(p[0], p[3]),
                dist(p[2], p[3]),
                dist(p[1], p[3]),
                dist(p[1], p[2]),
            ];
            for i in 0..6 {
                assert!((got[i] - y[i]).abs() < 1e-12, "{y:?}: {got:?}");
            }
        }
        assert!(coordinate_oracle([1.0, 1.0, 1.0, 5.0, 1.0, 1.0]).is_err());
    }
}
