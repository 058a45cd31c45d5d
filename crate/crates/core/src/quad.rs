//! Exact arithmetic in `Z[√2]`, its half-integer extension, and the rank-4
//! lattice of the octagonal cut-and-project scheme.
//!
//! The lattice `𝓛 ⊂ ℝ⁴` has basis matrix
//!
//! ```text
//!     ⎛ 1   1/√2   0  -1/√2 ⎞   direct x
//! B = ⎜ 0   1/√2   1   1/√2 ⎟   direct y
//!     ⎜ 1  -1/√2   0   1/√2 ⎟   internal x
//!     ⎝ 0  -1/√2   1  -1/√2 ⎠   internal y
//! ```
//!
//! Every coordinate of a point of `𝓛` (and of `½𝓛`) has the form
//! `(p + q√2)/2` with integers `p, q`, which is what [`QuadHalf`] stores.
//! Membership and equality never touch floating point.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};

pub const SQRT_2: f64 = std::f64::consts::SQRT_2;

/// Coordinates above this magnitude are rejected by the generators so that
/// all intermediate products fit comfortably in `i128`.
pub const COORDINATE_LIMIT: i64 = 1 << 40;

/// `p + q√2` with integer coefficients.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct QuadInt {
    pub p: i64,
    pub q: i64,
}

impl QuadInt {
    pub const ZERO: QuadInt = QuadInt { p: 0, q: 0 };

    pub const fn new(p: i64, q: i64) -> Self {
        QuadInt { p, q }
    }

    /// Galois conjugate `p - q√2`.
    pub const fn conj(self) -> Self {
        QuadInt {
            p: self.p,
            q: -self.q,
        }
    }

    /// Field norm `p² - 2q²`.
    pub fn norm(self) -> i128 {
        let (p, q) = (self.p as i128, self.q as i128);
        p * p - 2 * q * q
    }

    /// Exact sign of `p + q√2`.
    pub fn signum(self) -> i32 {
        sign_of(self.p as i128, self.q as i128)
    }

    pub fn to_f64(self) -> f64 {
        self.p as f64 + self.q as f64 * SQRT_2
    }

    /// Floor of `self / den` for `den > 0`, together with a flag telling
    /// whether the quotient is an exact integer.
    pub fn div_floor(self, den: i64) -> (i64, bool) {
        assert!(den > 0, "denominator must be positive");
        if self.q == 0 {
            let k = self.p.div_euclid(den);
            return (k, self.p.rem_euclid(den) == 0);
        }
        // Irrational quotient: never an integer. Start from the float guess
        // and correct with exact sign tests.
        let mut k = (self.to_f64() / den as f64).floor() as i64;
        let residue = |k: i64| QuadInt::new(self.p - k * den, self.q).signum();
        while residue(k) < 0 {
            k -= 1;
        }
        while residue(k + 1) >= 0 {
            k += 1;
        }
        (k, false)
    }
}

/// Exact sign of `p + q√2` for wide integers.
fn sign_of(p: i128, q: i128) -> i32 {
    let sp = p.signum() as i32;
    let sq = q.signum() as i32;
    if sq == 0 {
        return sp;
    }
    if sp == 0 || sp == sq {
        return sq;
    }
    // Opposite signs: the larger magnitude wins.
    match (p * p).cmp(&(2 * q * q)) {
        Ordering::Greater => sp,
        Ordering::Less => sq,
        Ordering::Equal => unreachable!("√2 is irrational"),
    }
}

impl Add for QuadInt {
    type Output = QuadInt;
    fn add(self, o: QuadInt) -> QuadInt {
        QuadInt::new(self.p + o.p, self.q + o.q)
    }
}

impl Sub for QuadInt {
    type Output = QuadInt;
    fn sub(self, o: QuadInt) -> QuadInt {
        QuadInt::new(self.p - o.p, self.q - o.q)
    }
}

impl Neg for QuadInt {
    type Output = QuadInt;
    fn neg(self) -> QuadInt {
        QuadInt::new(-self.p, -self.q)
    }
}

impl Mul for QuadInt {
    type Output = QuadInt;
    fn mul(self, o: QuadInt) -> QuadInt {
        QuadInt::new(self.p * o.p + 2 * self.q * o.q, self.p * o.q + self.q * o.p)
    }
}

impl PartialOrd for QuadInt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadInt {
    fn cmp(&self, other: &Self) -> Ordering {
        (*self - *other).signum().cmp(&0)
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:+}√2", self.p, self.q)
    }
}

/// `(p + q√2) / 2` with integer `p, q`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct QuadHalf {
    pub p: i64,
    pub q: i64,
}

impl QuadHalf {
    pub const ZERO: QuadHalf = QuadHalf { p: 0, q: 0 };
    pub const ONE: QuadHalf = QuadHalf { p: 2, q: 0 };
    /// `1/√2 = √2/2`
    pub const INV_SQRT_2: QuadHalf = QuadHalf { p: 0, q: 1 };

    pub const fn new(p: i64, q: i64) -> Self {
        QuadHalf { p, q }
    }

    pub const fn from_int(k: i64) -> Self {
        QuadHalf { p: 2 * k, q: 0 }
    }

    /// Twice the value, as an element of `Z[√2]`.
    pub const fn numerator(self) -> QuadInt {
        QuadInt::new(self.p, self.q)
    }

    pub const fn conj(self) -> Self {
        QuadHalf {
            p: self.p,
            q: -self.q,
        }
    }

    pub fn signum(self) -> i32 {
        self.numerator().signum()
    }

    pub fn to_f64(self) -> f64 {
        self.numerator().to_f64() / 2.0
    }

    pub fn to_surd(self) -> Surd {
        Surd::new(Ratio::new(self.p as i128, 2), Ratio::new(self.q as i128, 2))
    }

    pub fn scale(self, k: i64) -> Self {
        QuadHalf::new(self.p * k, self.q * k)
    }

    pub fn mul_int(self, m: QuadInt) -> Self {
        let prod = self.numerator() * m;
        QuadHalf::new(prod.p, prod.q)
    }

    pub fn abs(self) -> Self {
        if self.signum() < 0 {
            -self
        } else {
            self
        }
    }
}

impl Add for QuadHalf {
    type Output = QuadHalf;
    fn add(self, o: QuadHalf) -> QuadHalf {
        QuadHalf::new(self.p + o.p, self.q + o.q)
    }
}

impl AddAssign for QuadHalf {
    fn add_assign(&mut self, o: QuadHalf) {
        *self = *self + o;
    }
}

impl Sub for QuadHalf {
    type Output = QuadHalf;
    fn sub(self, o: QuadHalf) -> QuadHalf {
        QuadHalf::new(self.p - o.p, self.q - o.q)
    }
}

impl Neg for QuadHalf {
    type Output = QuadHalf;
    fn neg(self) -> QuadHalf {
        QuadHalf::new(-self.p, -self.q)
    }
}

impl Mul for QuadHalf {
    type Output = Surd;
    fn mul(self, o: QuadHalf) -> Surd {
        self.to_surd() * o.to_surd()
    }
}

impl PartialOrd for QuadHalf {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadHalf {
    fn cmp(&self, other: &Self) -> Ordering {
        (*self - *other).signum().cmp(&0)
    }
}

impl fmt::Display for QuadHalf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_surd(), f)
    }
}

pub type Rational = Ratio<i128>;

/// An element `a + b√2` of `ℚ(√2)`.
///
/// Used where denominators are not bounded in advance: covariogram values at
/// star images, autocorrelation coefficients, and the exact inverse of the
/// basis matrix.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Surd {
    pub a: Rational,
    pub b: Rational,
}

impl Surd {
    pub fn new(a: Rational, b: Rational) -> Self {
        Surd { a, b }
    }

    pub fn rational(a: Rational) -> Self {
        Surd {
            a,
            b: Rational::zero(),
        }
    }

    pub fn int(k: i64) -> Self {
        Surd::rational(Rational::from_integer(k as i128))
    }

    pub fn zero() -> Self {
        Surd::int(0)
    }

    pub fn one() -> Self {
        Surd::int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// `Some(r)` when the value is rational.
    pub fn as_rational(&self) -> Option<Rational> {
        self.b.is_zero().then_some(self.a)
    }

    pub fn conj(self) -> Self {
        Surd::new(self.a, -self.b)
    }

    pub fn signum(&self) -> i32 {
        // Clear denominators; the sign is unchanged by a positive factor.
        let l = num_integer_lcm(*self.a.denom(), *self.b.denom());
        let p = self.a.numer() * (l / self.a.denom());
        let q = self.b.numer() * (l / self.b.denom());
        sign_of(p, q)
    }

    pub fn abs(self) -> Self {
        if self.signum() < 0 {
            -self
        } else {
            self
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub fn recip(self) -> Self {
        let n = self.a * self.a - Rational::from_integer(2) * self.b * self.b;
        assert!(!n.is_zero(), "division by zero in Q(√2)");
        Surd::new(self.a / n, -self.b / n)
    }

    pub fn to_f64(&self) -> f64 {
        self.a.to_f64().unwrap_or(f64::NAN) + self.b.to_f64().unwrap_or(f64::NAN) * SQRT_2
    }
}

fn num_integer_lcm(x: i128, y: i128) -> i128 {
    let (mut a, mut b) = (x.abs(), y.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    x.abs() / a * y.abs()
}

impl From<QuadHalf> for Surd {
    fn from(v: QuadHalf) -> Surd {
        v.to_surd()
    }
}

impl From<Rational> for Surd {
    fn from(r: Rational) -> Surd {
        Surd::rational(r)
    }
}

impl From<Ratio<i64>> for Surd {
    fn from(r: Ratio<i64>) -> Surd {
        Surd::rational(Rational::new(*r.numer() as i128, *r.denom() as i128))
    }
}

impl Add for Surd {
    type Output = Surd;
    fn add(self, o: Surd) -> Surd {
        Surd::new(self.a + o.a, self.b + o.b)
    }
}

impl AddAssign for Surd {
    fn add_assign(&mut self, o: Surd) {
        *self = *self + o;
    }
}

impl Sub for Surd {
    type Output = Surd;
    fn sub(self, o: Surd) -> Surd {
        Surd::new(self.a - o.a, self.b - o.b)
    }
}

impl Neg for Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd::new(-self.a, -self.b)
    }
}

impl Mul for Surd {
    type Output = Surd;
    fn mul(self, o: Surd) -> Surd {
        let two = Rational::from_integer(2);
        Surd::new(
            self.a * o.a + two * self.b * o.b,
            self.a * o.b + self.b * o.a,
        )
    }
}

impl Div for Surd {
    type Output = Surd;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Surd) -> Surd {
        self * o.recip()
    }
}

impl PartialOrd for Surd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Surd {
    fn cmp(&self, other: &Self) -> Ordering {
        (*self - *other).signum().cmp(&0)
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Coefficient of √2 without a unit factor: "√2", "-√2", "3/4·√2".
        let root = |b: Rational| {
            if b == Rational::one() {
                "√2".to_string()
            } else if b == -Rational::one() {
                "-√2".to_string()
            } else {
                format!("{b}·√2")
            }
        };
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "{}", root(self.b))
        } else if self.b < Rational::zero() {
            write!(f, "{} - {}", self.a, root(-self.b))
        } else {
            write!(f, "{} + {}", self.a, root(self.b))
        }
    }
}

/// Integer coefficients of a point of `𝓛` with respect to the basis columns.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVector(pub [i64; 4]);

impl LatticeVector {
    pub const ZERO: LatticeVector = LatticeVector([0; 4]);

    pub fn unit(i: usize) -> Self {
        let mut n = [0; 4];
        n[i] = 1;
        LatticeVector(n)
    }

    /// Assemble from the separated axis coordinates `a = n2 - n4`,
    /// `b = n2 + n4`; `None` when the parities disagree.
    pub fn from_axis_pairs(n1: i64, a: i64, n3: i64, b: i64) -> Option<Self> {
        if (a - b).rem_euclid(2) != 0 {
            return None;
        }
        Some(LatticeVector([n1, (a + b) / 2, n3, (b - a) / 2]))
    }
}

impl Add for LatticeVector {
    type Output = LatticeVector;
    fn add(self, o: LatticeVector) -> LatticeVector {
        let mut n = self.0;
        for (x, y) in n.iter_mut().zip(o.0) {
            *x += y;
        }
        LatticeVector(n)
    }
}

impl Sub for LatticeVector {
    type Output = LatticeVector;
    fn sub(self, o: LatticeVector) -> LatticeVector {
        self + (-o)
    }
}

impl Neg for LatticeVector {
    type Output = LatticeVector;
    fn neg(self) -> LatticeVector {
        LatticeVector(self.0.map(|x| -x))
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "({a}, {b}, {c}, {d})")
    }
}

pub type Vec2 = [QuadHalf; 2];

/// Constants of the octagonal scheme.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemeConstants {
    /// Rows 0-1: direct space, rows 2-3: internal space.
    pub basis: [[QuadHalf; 4]; 4],
    pub lattice_density: Ratio<i64>,
    pub dual_scale: Ratio<i64>,
}

const S: QuadHalf = QuadHalf::INV_SQRT_2;
const O: QuadHalf = QuadHalf::ONE;
const Z: QuadHalf = QuadHalf::ZERO;
const fn neg(v: QuadHalf) -> QuadHalf {
    QuadHalf::new(-v.p, -v.q)
}

pub const OCTAGONAL_BASIS: [[QuadHalf; 4]; 4] = [
    [O, S, Z, neg(S)],
    [Z, S, O, S],
    [O, neg(S), Z, S],
    [Z, neg(S), O, neg(S)],
];

impl SchemeConstants {
    pub fn octagonal() -> Self {
        SchemeConstants {
            basis: OCTAGONAL_BASIS,
            lattice_density: Ratio::new(1, 4),
            dual_scale: Ratio::new(1, 2),
        }
    }

    pub fn basis_surd(&self) -> [[Surd; 4]; 4] {
        self.basis.map(|row| row.map(Surd::from))
    }

    /// Exact determinant by fraction-free elimination over `ℚ(√2)`.
    pub fn determinant(&self) -> Surd {
        let mut m = self.basis_surd();
        let mut det = Surd::one();
        for col in 0..4 {
            let Some(pivot) = (col..4).find(|&r| !m[r][col].is_zero()) else {
                return Surd::zero();
            };
            if pivot != col {
                m.swap(pivot, col);
                det = -det;
            }
            let pv = m[col][col];
            det = det * pv;
            for r in col + 1..4 {
                let factor = m[r][col] / pv;
                for c in col..4 {
                    let v = m[col][c];
                    m[r][c] = m[r][c] - factor * v;
                }
            }
        }
        det
    }

    /// Exact inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> [[Surd; 4]; 4] {
        let mut m = self.basis_surd();
        let mut inv = [[Surd::zero(); 4]; 4];
        for (i, row) in inv.iter_mut().enumerate() {
            row[i] = Surd::one();
        }
        for col in 0..4 {
            let pivot = (col..4)
                .find(|&r| !m[r][col].is_zero())
                .expect("basis matrix is singular");
            m.swap(pivot, col);
            inv.swap(pivot, col);
            let pv = m[col][col].recip();
            for c in 0..4 {
                m[col][c] = m[col][c] * pv;
                inv[col][c] = inv[col][c] * pv;
            }
            for r in 0..4 {
                if r == col || m[r][col].is_zero() {
                    continue;
                }
                let factor = m[r][col];
                for c in 0..4 {
                    let (mv, iv) = (m[col][c], inv[col][c]);
                    m[r][c] = m[r][c] - factor * mv;
                    inv[r][c] = inv[r][c] - factor * iv;
                }
            }
        }
        inv
    }

    /// Basis of the dual lattice `𝓛*`, i.e. `(B⁻¹)ᵗ`.
    pub fn dual_basis(&self) -> [[Surd; 4]; 4] {
        let inv = self.inverse();
        let mut t = [[Surd::zero(); 4]; 4];
        for (i, row) in inv.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                t[j][i] = *v;
            }
        }
        t
    }

    fn row_times(&self, row: usize, n: LatticeVector) -> QuadHalf {
        self.basis[row]
            .iter()
            .zip(n.0)
            .fold(QuadHalf::ZERO, |acc, (b, k)| acc + b.scale(k))
    }
}

/// Projection to direct space (rows 1-2 of the basis matrix).
pub fn direct_image(n: LatticeVector) -> Vec2 {
    let [n1, n2, n3, n4] = n.0;
    // Expanded form of the two top rows.
    [
        QuadHalf::new(2 * n1, n2 - n4),
        QuadHalf::new(2 * n3, n2 + n4),
    ]
}

/// Projection to internal space (rows 3-4), computed from the matrix.
pub fn star_image(n: LatticeVector) -> Vec2 {
    let scheme = SchemeConstants::octagonal();
    [scheme.row_times(2, n), scheme.row_times(3, n)]
}

/// Star image via the algebraic route: conjugate every direct coordinate.
pub fn star_by_conjugation(n: LatticeVector) -> Vec2 {
    direct_image(n).map(QuadHalf::conj)
}

/// Star map on the Fourier module `½L`: `n` represents `direct_image(n)/2`.
pub fn star_on_half_module(n: LatticeVector) -> [Surd; 2] {
    let half = Surd::rational(Rational::new(1, 2));
    star_image(n).map(|c| c.to_surd() * half)
}

/// Position of the module point represented by `n`, i.e. `direct_image(n)/2`.
pub fn half_module_position(n: LatticeVector) -> [Surd; 2] {
    let half = Surd::rational(Rational::new(1, 2));
    direct_image(n).map(|c| c.to_surd() * half)
}

/// Inverse embedding: the integer `n` with `B·n = (x, x*)`, if any.
/// Uses `B⁻¹ = Bᵗ/2`.
pub fn solve_coefficients(direct: Vec2, internal: Vec2) -> Option<LatticeVector> {
    let x = [direct[0], direct[1], internal[0], internal[1]];
    let mut n = [0i64; 4];
    let half = Surd::rational(Rational::new(1, 2));
    for (j, slot) in n.iter_mut().enumerate() {
        let mut acc = Surd::zero();
        for (i, xi) in x.iter().enumerate() {
            acc += OCTAGONAL_BASIS[i][j] * *xi;
        }
        let v = (acc * half).as_rational()?;
        if !v.is_integer() {
            return None;
        }
        *slot = v.to_integer().try_into().ok()?;
    }
    Some(LatticeVector(n))
}

pub fn norm_f64(v: Vec2) -> f64 {
    v[0].to_f64().hypot(v[1].to_f64())
}

pub fn to_f64_pair(v: Vec2) -> [f64; 2] {
    v.map(QuadHalf::to_f64)
}

pub fn surd_pair_f64(v: [Surd; 2]) -> [f64; 2] {
    v.map(|c| c.to_f64())
}

/// `|v|²` exactly.
pub fn norm_sq_exact(v: [Surd; 2]) -> Surd {
    v[0] * v[0] + v[1] * v[1]
}
