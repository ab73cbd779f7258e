//! The quantum disc, the complex quantum plane and the stereographic Podleś
//! sphere: `z*z - q² zz* = α(1 - q²)` with `α ∈ {1, 0, -1}`, represented by
//! weighted shifts on a finite window of `ℓ²(ℕ₀)` or `ℓ²(ℤ)`.
//!
//! The calculus is `x dy = ρ(x)[iF, ρ(y)]` with `F = (1-q²)^{-1}(0 z; z* 0)`
//! on `H ⊕ H`, and the 2-cocycle is `τ(x0, x1, x2) = h(π(x0 dx1 ∧ dx2))` where
//! `h(x) = Tr y^{-1} x` and `y = β(α - zz*)`.
//!
//! Inputs are finitely supported matrices.  As long as their support keeps a
//! margin of two indices from every truncated edge of the window, every trace
//! below is an exact finite sum and only floating rounding remains.

pub mod matrix;
pub mod real;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;

use num_rational::BigRational;
use num_traits::{One, Signed};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cocycle::{Algebra, Automorphism, Cochain, Scaled};
pub use matrix::{BlockOp2, Mat, Tracked};
pub use real::{BigFloat, Extended, Precision, Real};

/// Distance kept between input supports and each truncated edge.
pub const MARGIN: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiscError {
    #[error("alpha must be 0, 1 or -1, got {0}")]
    InvalidAlpha(i64),
    #[error("q must lie strictly between 0 and 1, got {0}")]
    InvalidQ(String),
    #[error("invalid window: {0}")]
    InvalidWindow(String),
    #[error("support [{lo}, {hi}) does not fit in [{allowed_lo}, {allowed_hi}); enlarge the window")]
    WindowTooSmall { lo: i64, hi: i64, allowed_lo: i64, allowed_hi: i64 },
    #[error("cannot parse finite-rank element `{0}`")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Alpha {
    MinusOne,
    Zero,
    One,
}

impl Alpha {
    pub const ALL: [Alpha; 3] = [Alpha::One, Alpha::Zero, Alpha::MinusOne];

    pub fn from_i64(a: i64) -> Result<Alpha, DiscError> {
        match a {
            1 => Ok(Alpha::One),
            0 => Ok(Alpha::Zero),
            -1 => Ok(Alpha::MinusOne),
            other => Err(DiscError::InvalidAlpha(other)),
        }
    }

    pub fn value(self) -> i64 {
        match self {
            Alpha::One => 1,
            Alpha::Zero => 0,
            Alpha::MinusOne => -1,
        }
    }

    pub fn beta(self) -> i64 {
        if self == Alpha::One {
            1
        } else {
            -1
        }
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscParams {
    pub alpha: Alpha,
    pub q: BigRational,
}

impl DiscParams {
    pub fn new(alpha: Alpha, q: BigRational) -> Result<Self, DiscError> {
        if !q.is_positive() || q >= BigRational::one() {
            return Err(DiscError::InvalidQ(q.to_string()));
        }
        Ok(DiscParams { alpha, q })
    }
}

/// Basis labels `start, start + 1, ..., start + len - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub start: i64,
    pub len: usize,
}

impl Window {
    /// `[0, len)` on `ℕ₀`, or `[-len/2, len/2)` on `ℤ`.
    pub fn standard(alpha: Alpha, len: usize) -> Window {
        let start = if alpha == Alpha::Zero { -((len / 2) as i64) } else { 0 };
        Window { start, len }
    }

    pub fn label(&self, i: usize) -> i64 {
        self.start + i as i64
    }

    pub fn index(&self, n: i64) -> Option<usize> {
        let i = n - self.start;
        (i >= 0 && (i as usize) < self.len).then_some(i as usize)
    }
}

pub struct TruncatedRep<R: Real> {
    params: DiscParams,
    window: Window,
    q2: R,
    z: Tracked<R>,
    zs: Tracked<R>,
    y: Vec<R>,
    yinv: Vec<R>,
    f: BlockOp2<R>,
}

impl<R: Real> fmt::Debug for TruncatedRep<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruncatedRep(alpha={}, q={}, window={:?}, {})", self.params.alpha, self.params.q, self.window, R::NAME)
    }
}

impl<R: Real> TruncatedRep<R> {
    /// Builds the representation on the standard window of the given length.
    pub fn build(params: &DiscParams, len: usize) -> Result<Self, DiscError> {
        Self::with_window(params, Window::standard(params.alpha, len))
    }

    pub fn with_window(params: &DiscParams, window: Window) -> Result<Self, DiscError> {
        let alpha = params.alpha;
        if alpha != Alpha::Zero && window.start != 0 {
            return Err(DiscError::InvalidWindow(format!("alpha = {alpha} needs a window starting at 0")));
        }
        if window.len < 2 * MARGIN + 4 {
            return Err(DiscError::InvalidWindow(format!("length {} is below {}", window.len, 2 * MARGIN + 4)));
        }
        let n = window.len;
        let q = R::from_rational(&params.q);
        let q2 = q.mul(&q);
        let one = R::one();
        let mut z = Mat::zeros(n);
        let mut y = Vec::with_capacity(n);
        for i in 0..n {
            let l = window.label(i) as i32;
            match alpha {
                Alpha::Zero => {
                    if i + 1 < n {
                        z.set(i + 1, i, q.powi(l + 1));
                    }
                    y.push(q2.powi(l));
                }
                Alpha::One => {
                    if i + 1 < n {
                        z.set(i + 1, i, one.sub(&q2.powi(l + 1)).sqrt());
                    }
                    y.push(q2.powi(l));
                }
                Alpha::MinusOne => {
                    if i >= 1 {
                        z.set(i - 1, i, q2.powi(-l).sub(&one).sqrt());
                    }
                    y.push(q2.powi(-(l + 1)));
                }
            }
        }
        let yinv = y.iter().map(|v| one.div(v)).collect();
        let zs = z.transpose();
        let c = one.div(&one.sub(&q2));
        let zero = Tracked::new(Mat::zeros(n));
        let (z, zs) = (Tracked::new(z), Tracked::new(zs));
        let f = BlockOp2::new([[zero.clone(), z.scale(&c)], [zs.scale(&c), zero]], 0);
        Ok(TruncatedRep { params: params.clone(), window, q2, z, zs, y, yinv, f })
    }

    pub fn params(&self) -> &DiscParams {
        &self.params
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn dim(&self) -> usize {
        self.window.len
    }

    /// Indices on which the defining relation holds exactly for the
    /// truncated matrices.
    pub fn interior(&self) -> Range<usize> {
        let n = self.window.len;
        if self.params.alpha == Alpha::Zero {
            1..n - 1
        } else {
            0..n - 1
        }
    }

    /// Indices at distance at least `depth` from every truncated edge; products
    /// of up to `depth` shift operators are exact there.
    pub fn comparison_range(&self, depth: usize) -> Range<usize> {
        let n = self.window.len;
        if self.params.alpha == Alpha::Zero {
            depth..n - depth
        } else {
            0..n - depth
        }
    }

    /// The range allowed for input supports.
    pub fn support_range(&self) -> Range<usize> {
        let int = self.interior();
        let lo = if self.params.alpha == Alpha::Zero { int.start + MARGIN } else { int.start };
        lo..int.end - MARGIN
    }

    pub fn z(&self) -> &Mat<R> {
        &self.z.value
    }

    pub fn z_star(&self) -> &Mat<R> {
        &self.zs.value
    }

    pub fn y_of(&self) -> &[R] {
        &self.y
    }

    pub fn y_inverse(&self) -> &[R] {
        &self.yinv
    }

    pub fn f_op(&self) -> &BlockOp2<R> {
        &self.f
    }

    fn beta(&self) -> R {
        R::from_f64(self.params.alpha.beta() as f64)
    }

    fn one_minus_q2(&self) -> R {
        R::one().sub(&self.q2)
    }

    pub fn check_support(&self, xs: &[&Mat<R>]) -> Result<(), DiscError> {
        let allowed = self.support_range();
        for x in xs {
            if let Some((lo, hi)) = x.support() {
                if lo < allowed.start || hi > allowed.end {
                    return Err(DiscError::WindowTooSmall {
                        lo: self.window.label(lo),
                        hi: self.window.label(hi),
                        allowed_lo: self.window.label(allowed.start),
                        allowed_hi: self.window.label(allowed.end),
                    });
                }
            }
        }
        Ok(())
    }

    /// `z*z - q² zz* - α(1-q²)` with its rounding shadow.
    pub fn relation_residual(&self) -> Tracked<R> {
        let alpha = R::from_f64(self.params.alpha.value() as f64).mul(&self.one_minus_q2());
        let id = Tracked::new(Mat::identity(self.dim()).scale(&alpha));
        self.zs.mul(&self.z).sub(&self.z.mul(&self.zs).scale(&self.q2)).sub(&id)
    }

    /// `β(α - zz*)` computed from the shift matrices.
    pub fn y_from_shifts(&self) -> Tracked<R> {
        let alpha = Tracked::new(Mat::identity(self.dim()).scale(&R::from_f64(self.params.alpha.value() as f64)));
        alpha.sub(&self.z.mul(&self.zs)).scale(&self.beta())
    }

    pub fn rho(&self, x: &Mat<R>) -> BlockOp2<R> {
        BlockOp2::diagonal(&Tracked::new(x.clone()))
    }

    /// `dx = i[F, ρ(x)]`.
    pub fn d_commutator(&self, x: &Mat<R>) -> BlockOp2<R> {
        let c = self.f.commutator(&self.rho(x));
        BlockOp2::new(c.blocks, 1)
    }

    /// `(∂_z x, ∂_{z*} x)` with `∂_z x = (1-q²)^{-1} β [z*, x] y^{-1}` and
    /// `∂_{z*} x = -(1-q²)^{-1} β [z, x] y^{-1}`.
    pub fn partials(&self, x: &Mat<R>) -> (Mat<R>, Mat<R>) {
        let (a, b) = self.partials_tracked(&Tracked::new(x.clone()));
        (a.value, b.value)
    }

    pub fn partials_tracked(&self, x: &Tracked<R>) -> (Tracked<R>, Tracked<R>) {
        let c = self.beta().div(&self.one_minus_q2());
        let dz = self.zs.commutator(x).right_diag(&self.yinv).scale(&c);
        let dzs = self.z.commutator(x).right_diag(&self.yinv).scale(&c.neg());
        (dz, dzs)
    }

    /// `σ(x) = y x y^{-1}`.
    pub fn sigma(&self, x: &Mat<R>) -> Mat<R> {
        x.left_diag(&self.y).right_diag(&self.yinv)
    }

    fn sigma_tracked(&self, x: &Tracked<R>) -> Tracked<R> {
        x.left_diag(&self.y).right_diag(&self.yinv)
    }

    /// `h(x) = Tr y^{-1} x`, with the sum of absolute terms.
    pub fn h(&self, x: &Mat<R>) -> Result<(R, f64), DiscError> {
        self.check_support(&[x])?;
        let mut v = R::zero();
        let mut s = 0.0;
        for i in 0..self.dim() {
            let t = self.yinv[i].mul(x.get(i, i));
            s += t.to_f64().abs();
            v = v.add(&t);
        }
        Ok((v, s))
    }

    /// The coefficient of `ω` in `x0 dx1 ∧ dx2`:
    /// `x0 (q² ∂_{z*}(x1) σ(∂_z x2) - ∂_z(x1) σ(∂_{z*} x2)) y²`.
    pub fn two_form_coeff(&self, x0: &Mat<R>, x1: &Mat<R>, x2: &Mat<R>) -> Result<Tracked<R>, DiscError> {
        self.check_support(&[x0, x1, x2])?;
        let (a1, b1) = self.partials_tracked(&Tracked::new(x1.clone()));
        let (a2, b2) = self.partials_tracked(&Tracked::new(x2.clone()));
        let inner = b1.mul(&self.sigma_tracked(&a2)).scale(&self.q2).sub(&a1.mul(&self.sigma_tracked(&b2)));
        let y2: Vec<R> = self.y.iter().map(|v| v.mul(v)).collect();
        Ok(Tracked::new(x0.clone()).mul(&inner).right_diag(&y2))
    }

    pub fn tau(&self, x0: &Mat<R>, x1: &Mat<R>, x2: &Mat<R>, route: TauRoute) -> Result<(R, f64), DiscError> {
        self.check_support(&[x0, x1, x2])?;
        match route {
            TauRoute::Form => Ok(self.two_form_coeff(x0, x1, x2)?.left_diag(&self.yinv).trace()),
            TauRoute::Commutator => {
                let t = |x: &Mat<R>| Tracked::new(x.clone());
                let (t1, t2) = (t(x1), t(x2));
                let first = self.z.commutator(&t1).mul(&self.zs.commutator(&t2)).scale(&self.q2.neg());
                let second = self.zs.commutator(&t1).mul(&self.z.commutator(&t2));
                let c = self.one_minus_q2();
                let c = R::one().div(&c.mul(&c));
                Ok(t(x0).mul(&first.add(&second)).left_diag(&self.yinv).scale(&c).trace())
            }
            TauRoute::Trace => {
                let op = self.rho(x0).mul(&self.d_commutator(x1)).mul(&self.d_commutator(x2));
                Ok(self.graded_trace(&op))
            }
        }
    }

    /// `Tr γ_q ρ(y^{-1}) ρ(x0) [F, ρ(x1)] [F, ρ(x2)]` with the bare commutator.
    pub fn tau_trace_literal(&self, x0: &Mat<R>, x1: &Mat<R>, x2: &Mat<R>) -> Result<(R, f64), DiscError> {
        self.check_support(&[x0, x1, x2])?;
        let op = self.rho(x0).mul(&self.f.commutator(&self.rho(x1))).mul(&self.f.commutator(&self.rho(x2)));
        Ok(self.graded_trace(&op))
    }

    /// `Tr γ_q ρ(y^{-1}) T` with `γ_q = diag(q², -1)`.
    fn graded_trace(&self, op: &BlockOp2<R>) -> (R, f64) {
        let mut blocks = op.blocks.clone();
        for row in blocks.iter_mut() {
            for b in row.iter_mut() {
                *b = b.left_diag(&self.yinv);
            }
        }
        BlockOp2::new(blocks, op.phase).scale_blocks([self.q2.clone(), R::one().neg()]).real_trace().expect("even phase")
    }

    /// `Tr y^{-1}([z*, x1][z, x2] - q² [z, x1][z*, x2])`.
    pub fn hinv_check(&self, x1: &Mat<R>, x2: &Mat<R>) -> Result<(R, f64), DiscError> {
        self.check_support(&[x1, x2])?;
        let (t1, t2) = (Tracked::new(x1.clone()), Tracked::new(x2.clone()));
        let a = self.zs.commutator(&t1).mul(&self.z.commutator(&t2));
        let b = self.z.commutator(&t1).mul(&self.zs.commutator(&t2)).scale(&self.q2);
        Ok(a.sub(&b).left_diag(&self.yinv).trace())
    }

    pub fn tau_cochain(&self, route: TauRoute) -> Cochain<'_, Mat<R>, Scaled> {
        Cochain::new(3, move |xs: &[Mat<R>]| match self.tau(&xs[0], &xs[1], &xs[2], route) {
            Ok((v, s)) => Scaled::new(v.to_f64(), s),
            Err(_) => Scaled::new(f64::NAN, 0.0),
        })
    }

    pub fn sigma_automorphism(&self) -> Automorphism<'_, Mat<R>> {
        Automorphism::new(move |x: &Mat<R>| self.sigma(x))
    }

    pub fn embed(&self, x: &FiniteRankOp) -> Result<Mat<R>, DiscError> {
        x.to_mat(self.window)
    }
}

impl<R: Real> Algebra for TruncatedRep<R> {
    type Elem = Mat<R>;

    fn mul(&self, x: &Mat<R>, y: &Mat<R>) -> Mat<R> {
        x.mul(y)
    }

    fn describe(&self, x: &Mat<R>) -> String {
        let mut entries = BTreeMap::new();
        for i in 0..x.dim() {
            for j in 0..x.dim() {
                let v = x.get(i, j).to_f64();
                if v != 0.0 {
                    entries.insert((self.window.label(i), self.window.label(j)), v);
                }
            }
        }
        FiniteRankOp { entries }.to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TauRoute {
    /// `h` of the 2-form coefficient built from `∂_z`, `∂_{z*}` and `σ`.
    Form,
    /// `(1-q²)^{-2} Tr y^{-1} x0 (-q² [z,x1][z*,x2] + [z*,x1][z,x2])`.
    Commutator,
    /// `Tr γ_q ρ(y^{-1}) ρ(x0) dx1 dx2` with `dx = i[F, ρ(x)]`.
    Trace,
}

impl TauRoute {
    pub const ALL: [TauRoute; 3] = [TauRoute::Form, TauRoute::Commutator, TauRoute::Trace];
}

/// A finitely supported operator, `Σ c_{mn} E_{mn}` with basis labels `m, n`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FiniteRankOp {
    entries: BTreeMap<(i64, i64), f64>,
}

impl FiniteRankOp {
    pub fn zero() -> Self {
        FiniteRankOp::default()
    }

    pub fn unit(m: i64, n: i64) -> Self {
        let mut entries = BTreeMap::new();
        entries.insert((m, n), 1.0);
        FiniteRankOp { entries }
    }

    pub fn from_entries(entries: impl IntoIterator<Item = ((i64, i64), f64)>) -> Self {
        FiniteRankOp { entries: entries.into_iter().filter(|(_, v)| *v != 0.0).collect() }
    }

    /// A random element supported on a random sub-box of `[lo, hi)` with
    /// entries uniform in `[-1, 1]`.
    pub fn random<G: Rng>(rng: &mut G, lo: i64, hi: i64) -> Self {
        let size = rng.gen_range(3..=(hi - lo).min(6));
        let start = rng.gen_range(lo..=hi - size);
        let mut entries = BTreeMap::new();
        for m in start..start + size {
            for n in start..start + size {
                if rng.gen_bool(0.7) {
                    entries.insert((m, n), rng.gen_range(-1.0..=1.0));
                }
            }
        }
        if entries.is_empty() {
            entries.insert((start, start), 1.0);
        }
        FiniteRankOp { entries }
    }

    pub fn entries(&self) -> &BTreeMap<(i64, i64), f64> {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Parses `0`, `E<m><n>` with single digits, or `E<m>_<n>`.
    pub fn parse(s: &str) -> Result<Self, DiscError> {
        let s = s.trim();
        if s == "0" {
            return Ok(Self::zero());
        }
        let err = || DiscError::Parse(s.to_string());
        let body = s.strip_prefix('E').ok_or_else(err)?;
        let (m, n) = match body.split_once('_') {
            Some((m, n)) => (m.parse().map_err(|_| err())?, n.parse().map_err(|_| err())?),
            None => {
                let d: Vec<char> = body.chars().collect();
                if d.len() != 2 || !d.iter().all(|c| c.is_ascii_digit()) {
                    return Err(err());
                }
                (d[0].to_digit(10).unwrap() as i64, d[1].to_digit(10).unwrap() as i64)
            }
        };
        Ok(Self::unit(m, n))
    }

    pub fn to_mat<R: Real>(&self, window: Window) -> Result<Mat<R>, DiscError> {
        let mut m = Mat::zeros(window.len);
        for ((i, j), v) in &self.entries {
            match (window.index(*i), window.index(*j)) {
                (Some(a), Some(b)) => m.set(a, b, R::from_f64(*v)),
                _ => {
                    return Err(DiscError::WindowTooSmall {
                        lo: (*i).min(*j),
                        hi: (*i).max(*j) + 1,
                        allowed_lo: window.start,
                        allowed_hi: window.label(window.len),
                    })
                }
            }
        }
        Ok(m)
    }
}

impl fmt::Display for FiniteRankOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "0");
        }
        let shown: Vec<String> = self
            .entries
            .iter()
            .take(3)
            .map(|((m, n), v)| if *v == 1.0 { format!("E({m},{n})") } else { format!("{v:.4}*E({m},{n})") })
            .collect();
        write!(f, "{}", shown.join(" + "))?;
        if self.entries.len() > 3 {
            write!(f, " + ... ({} terms)", self.entries.len())?;
        }
        Ok(())
    }
}

/// Label range used for random samples: `[0, 8)` on `ℕ₀`, `[-4, 4)` on `ℤ`.
pub fn sample_box(alpha: Alpha) -> (i64, i64) {
    if alpha == Alpha::Zero {
        (-4, 4)
    } else {
        (0, 8)
    }
}

/// Largest `|a - b| / (|a| + |b|)` entrywise over `range`, using the shadows
/// as the size of each entry.
pub fn relative_residual<R: Real>(a: &Tracked<R>, b: &Tracked<R>, range: Range<usize>) -> f64 {
    let mut worst = 0.0f64;
    for i in range.clone() {
        for j in range.clone() {
            let d = a.value.get(i, j).sub(b.value.get(i, j)).to_f64().abs();
            if d == 0.0 {
                continue;
            }
            let s = a.shadow.get(i, j) + b.shadow.get(i, j);
            worst = worst.max(if s > 0.0 { d / s } else { f64::INFINITY });
        }
    }
    worst
}

/// Largest relative residual of a tracked matrix that should vanish.
pub fn relative_size<R: Real>(a: &Tracked<R>, range: Range<usize>) -> f64 {
    let zero = Tracked { value: Mat::zeros(a.value.dim()), shadow: Mat::zeros(a.value.dim()) };
    relative_residual(a, &zero, range)
}

/// Blockwise version of [`relative_residual`]; phases must agree.
pub fn block_relative_residual<R: Real>(a: &BlockOp2<R>, b: &BlockOp2<R>, range: Range<usize>) -> f64 {
    if a.phase != b.phase {
        let all_zero = |x: &BlockOp2<R>| x.blocks.iter().flatten().all(|t| t.value.max_abs_on(range.clone()) == 0.0);
        return if all_zero(a) && all_zero(b) { 0.0 } else { f64::INFINITY };
    }
    let mut worst = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            worst = worst.max(relative_residual(&a.blocks[i][j], &b.blocks[i][j], range.clone()));
        }
    }
    worst
}

#[cfg(test)]
mod tests;
