//! Dense square matrices over a window, and 2×2 block operators on `H ⊕ H`.

use super::real::Real;

#[derive(Clone, Debug)]
pub struct Mat<R> {
    n: usize,
    data: Vec<R>,
}

impl<R: Real> Mat<R> {
    pub fn zeros(n: usize) -> Self {
        Mat { n, data: vec![R::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        Self::diag(&vec![R::one(); n])
    }

    pub fn diag(d: &[R]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, v) in d.iter().enumerate() {
            m.set(i, i, v.clone());
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R) {
        self.data[i * self.n + j] = v;
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, R::add)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, R::sub)
    }

    fn zip(&self, other: &Self, f: impl Fn(&R, &R) -> R) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        Mat { n: self.n, data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect() }
    }

    pub fn scale(&self, c: &R) -> Self {
        Mat { n: self.n, data: self.data.iter().map(|a| a.mul(c)).collect() }
    }

    pub fn map(&self, f: impl Fn(&R) -> R) -> Self {
        Mat { n: self.n, data: self.data.iter().map(f).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j).add(&a.mul(b));
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    /// `D · self` for a diagonal `D`.
    pub fn left_diag(&self, d: &[R]) -> Self {
        let n = self.n;
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, d[i].mul(self.get(i, j)));
            }
        }
        out
    }

    /// `self · D` for a diagonal `D`.
    pub fn right_diag(&self, d: &[R]) -> Self {
        let n = self.n;
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, self.get(i, j).mul(&d[j]));
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn trace(&self) -> R {
        (0..self.n).fold(R::zero(), |acc, i| acc.add(self.get(i, i)))
    }

    pub fn abs(&self) -> Mat<f64> {
        Mat { n: self.n, data: self.data.iter().map(|a| a.to_f64().abs()).collect() }
    }

    pub fn to_f64(&self) -> Mat<f64> {
        Mat { n: self.n, data: self.data.iter().map(|a| a.to_f64()).collect() }
    }

    pub fn from_f64(m: &Mat<f64>) -> Self {
        Mat { n: m.n, data: m.data.iter().map(|a| R::from_f64(*a)).collect() }
    }

    /// Rows and columns holding a nonzero entry, as a half-open range.
    pub fn support(&self) -> Option<(usize, usize)> {
        let mut lo = usize::MAX;
        let mut hi = 0;
        for i in 0..self.n {
            for j in 0..self.n {
                if !self.get(i, j).is_zero() {
                    lo = lo.min(i).min(j);
                    hi = hi.max(i + 1).max(j + 1);
                }
            }
        }
        (lo < hi).then_some((lo, hi))
    }

    /// Largest entry of `|self - other|` over rows and columns in `range`.
    pub fn max_diff_on(&self, other: &Self, range: std::ops::Range<usize>) -> f64 {
        let mut m = 0.0f64;
        for i in range.clone() {
            for j in range.clone() {
                m = m.max(self.get(i, j).sub(other.get(i, j)).to_f64().abs());
            }
        }
        m
    }

    pub fn max_abs_on(&self, range: std::ops::Range<usize>) -> f64 {
        let mut m = 0.0f64;
        for i in range.clone() {
            for j in range.clone() {
                m = m.max(self.get(i, j).to_f64().abs());
            }
        }
        m
    }
}

/// A matrix paired with the entrywise-absolute evaluation of the same
/// expression, used as a rounding scale.
#[derive(Clone, Debug)]
pub struct Tracked<R> {
    pub value: Mat<R>,
    pub shadow: Mat<f64>,
}

impl<R: Real> Tracked<R> {
    pub fn new(value: Mat<R>) -> Self {
        let shadow = value.abs();
        Tracked { value, shadow }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Tracked { value: self.value.mul(&other.value), shadow: self.shadow.mul(&other.shadow) }
    }

    pub fn add(&self, other: &Self) -> Self {
        Tracked { value: self.value.add(&other.value), shadow: self.shadow.add(&other.shadow) }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Tracked { value: self.value.sub(&other.value), shadow: self.shadow.add(&other.shadow) }
    }

    pub fn scale(&self, c: &R) -> Self {
        Tracked { value: self.value.scale(c), shadow: self.shadow.scale(&c.to_f64().abs()) }
    }

    pub fn left_diag(&self, d: &[R]) -> Self {
        let ad: Vec<f64> = d.iter().map(|x| x.to_f64().abs()).collect();
        Tracked { value: self.value.left_diag(d), shadow: self.shadow.left_diag(&ad) }
    }

    pub fn right_diag(&self, d: &[R]) -> Self {
        let ad: Vec<f64> = d.iter().map(|x| x.to_f64().abs()).collect();
        Tracked { value: self.value.right_diag(d), shadow: self.shadow.right_diag(&ad) }
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    /// `(Tr value, Tr shadow)`.
    pub fn trace(&self) -> (R, f64) {
        (self.value.trace(), self.shadow.trace())
    }
}

/// An operator `i^phase · (b00 b01; b10 b11)` on `H ⊕ H`.
#[derive(Clone, Debug)]
pub struct BlockOp2<R> {
    pub blocks: [[Tracked<R>; 2]; 2],
    pub phase: u8,
}

impl<R: Real> BlockOp2<R> {
    pub fn new(blocks: [[Tracked<R>; 2]; 2], phase: u8) -> Self {
        BlockOp2 { blocks, phase: phase % 4 }
    }

    pub fn diagonal(x: &Tracked<R>) -> Self {
        let z = Tracked::new(Mat::zeros(x.value.dim()));
        BlockOp2::new([[x.clone(), z.clone()], [z, x.clone()]], 0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let b = |i: usize, j: usize| self.blocks[i][0].mul(&other.blocks[0][j]).add(&self.blocks[i][1].mul(&other.blocks[1][j]));
        BlockOp2::new([[b(0, 0), b(0, 1)], [b(1, 0), b(1, 1)]], self.phase + other.phase)
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.phase, other.phase, "phase mismatch");
        let b = |i: usize, j: usize| self.blocks[i][j].sub(&other.blocks[i][j]);
        BlockOp2::new([[b(0, 0), b(0, 1)], [b(1, 0), b(1, 1)]], self.phase)
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn scale_blocks(&self, c: [R; 2]) -> Self {
        let b = |i: usize, j: usize| self.blocks[i][j].scale(&c[i]);
        BlockOp2::new([[b(0, 0), b(0, 1)], [b(1, 0), b(1, 1)]], self.phase)
    }

    /// Trace of the real operator; `None` when the phase is odd.
    pub fn real_trace(&self) -> Option<(R, f64)> {
        if self.phase % 2 == 1 {
            return None;
        }
        let (a, sa) = self.blocks[0][0].trace();
        let (b, sb) = self.blocks[1][1].trace();
        let t = a.add(&b);
        Some((if self.phase == 2 { t.neg() } else { t }, sa + sb))
    }

    /// Largest block-entry difference on `range`, ignoring phase.
    pub fn max_diff_on(&self, other: &Self, range: std::ops::Range<usize>) -> f64 {
        let mut m = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                m = m.max(self.blocks[i][j].value.max_diff_on(&other.blocks[i][j].value, range.clone()));
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[f64]]) -> Mat<f64> {
        let n = rows.len();
        let mut out = Mat::zeros(n);
        for (i, r) in rows.iter().enumerate() {
            for (j, v) in r.iter().enumerate() {
                out.set(i, j, *v);
            }
        }
        out
    }

    #[test]
    fn products_and_traces() {
        let a = m(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let b = m(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let ab = a.mul(&b);
        assert_eq!(*ab.get(0, 0), 2.0);
        assert_eq!(*ab.get(1, 1), 3.0);
        assert_eq!(a.trace(), 5.0);
        assert_eq!(a.left_diag(&[2.0, 1.0]).trace(), 6.0);
        assert_eq!(a.transpose().get(0, 1), &3.0);
        assert_eq!(a.support(), Some((0, 2)));
        assert_eq!(Mat::<f64>::zeros(3).support(), None);
    }

    #[test]
    fn tracked_shadow_bounds_value() {
        let a = Tracked::new(m(&[&[1.0, -2.0], &[3.0, -4.0]]));
        let b = Tracked::new(m(&[&[-1.0, 1.0], &[0.5, 0.0]]));
        let c = a.commutator(&b);
        let (t, s) = c.trace();
        assert!(t.abs() <= s);
        assert!(s > 0.0);
    }

    #[test]
    fn block_phase_tracks_powers_of_i() {
        let one = Tracked::new(Mat::<f64>::identity(2));
        let zero = Tracked::new(Mat::zeros(2));
        let j = BlockOp2::new([[zero.clone(), one.clone()], [one.clone(), zero.clone()]], 1);
        let jj = j.mul(&j);
        assert_eq!(jj.phase, 2);
        assert_eq!(jj.real_trace().unwrap().0, -4.0);
        assert!(j.real_trace().is_none());
    }
}
