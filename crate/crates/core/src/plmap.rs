//! Elements of Thompson's group F as piecewise-linear maps of `[0,1]`.

use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Mul;

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::interval::{point, DyadicInterval, Interval, IntervalSet, Point};

/// A PL homeomorphism of `[0,1]` with dyadic breakpoints and power-of-two slopes.
///
/// The breakpoint list starts at `(0,0)`, ends at `(1,1)` and never contains a
/// removable breakpoint, so equality is structural. Multiplication follows
/// word order: `f * g` is `f ∘ g`, i.e. `g` acts first.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PLMap {
    bps: Vec<(Dyadic, Dyadic)>,
    slopes: Vec<i64>,
}

impl PLMap {
    pub fn identity() -> Self {
        PLMap { bps: vec![(Dyadic::zero(), Dyadic::zero()), (Dyadic::one(), Dyadic::one())], slopes: vec![0] }
    }

    /// Validates and canonicalizes a breakpoint list.
    pub fn from_breakpoints(bps: Vec<(Dyadic, Dyadic)>) -> Result<Self> {
        let bad = |m: &str| Error::InvalidMap(m.to_string());
        if bps.len() < 2 {
            return Err(bad("need at least two breakpoints"));
        }
        if bps[0] != (Dyadic::zero(), Dyadic::zero()) || bps[bps.len() - 1] != (Dyadic::one(), Dyadic::one()) {
            return Err(bad("map must fix 0 and 1"));
        }
        let mut slopes = Vec::with_capacity(bps.len() - 1);
        for w in bps.windows(2) {
            let (dx, dy) = (&w[1].0 - &w[0].0, &w[1].1 - &w[0].1);
            if dx.signum() <= 0 || dy.signum() <= 0 {
                return Err(bad("breakpoints must be strictly increasing"));
            }
            let k = dy.log2_ratio(&dx).ok_or_else(|| {
                Error::InvalidMap(format!("slope between {:?} and {:?} is not a power of two", w[0], w[1]))
            })?;
            slopes.push(k);
        }
        Ok(PLMap::canonical(bps, slopes))
    }

    /// Drops breakpoints between equal slopes.
    fn canonical(bps: Vec<(Dyadic, Dyadic)>, slopes: Vec<i64>) -> Self {
        let mut out_bps = Vec::with_capacity(bps.len());
        let mut out_slopes: Vec<i64> = Vec::with_capacity(slopes.len());
        let n = bps.len();
        for (i, bp) in bps.into_iter().enumerate() {
            if i > 0 && i + 1 < n && slopes[i - 1] == slopes[i] {
                continue;
            }
            if i + 1 < n {
                out_slopes.push(slopes[i]);
            }
            out_bps.push(bp);
        }
        PLMap { bps: out_bps, slopes: out_slopes }
    }

    /// Builds from points that are known to be increasing with power-of-two slopes.
    fn from_trusted(bps: Vec<(Dyadic, Dyadic)>) -> Self {
        let slopes = bps
            .windows(2)
            .map(|w| (&w[1].1 - &w[0].1).log2_ratio(&(&w[1].0 - &w[0].0)).expect("slope is a power of two"))
            .collect();
        PLMap::canonical(bps, slopes)
    }

    pub fn breakpoints(&self) -> &[(Dyadic, Dyadic)] {
        &self.bps
    }

    /// Slope exponents per segment: segment `i` has slope `2^slopes[i]`.
    pub fn slopes(&self) -> &[i64] {
        &self.slopes
    }

    pub fn is_identity(&self) -> bool {
        self.bps.len() == 2
    }

    fn segment_of(&self, t: &Dyadic) -> usize {
        let idx = self.bps.partition_point(|(x, _)| x <= t);
        idx.saturating_sub(1).min(self.slopes.len() - 1)
    }

    /// `f(t)` for `t` in `[0,1]`.
    pub fn eval(&self, t: &Dyadic) -> Result<Dyadic> {
        if *t < Dyadic::zero() || *t > Dyadic::one() {
            return Err(Error::OutOfRange(t.to_string()));
        }
        Ok(self.apply(t))
    }

    /// `f(t)` without the range check; `t` must lie in `[0,1]`.
    pub fn apply(&self, t: &Dyadic) -> Dyadic {
        let i = self.segment_of(t);
        let (x0, y0) = &self.bps[i];
        y0 + (t - x0).mul_pow2(self.slopes[i])
    }

    /// `f(p)` for an exact rational `p` in `[0,1]`.
    pub fn apply_point(&self, p: &Point) -> Point {
        if let Some(d) = Dyadic::from_rational(p) {
            return point(&self.apply(&d));
        }
        let idx = self.bps.partition_point(|(x, _)| point(x) <= *p);
        let i = idx.saturating_sub(1).min(self.slopes.len() - 1);
        let (x0, y0) = &self.bps[i];
        let k = self.slopes[i];
        let scaled = (p - point(x0)) * point(&Dyadic::pow2(k));
        point(y0) + scaled
    }

    /// `f ∘ g`: `g` acts first.
    pub fn compose(&self, g: &PLMap) -> PLMap {
        let f = self;
        if f.is_identity() {
            return g.clone();
        }
        if g.is_identity() {
            return f.clone();
        }
        // Domain breakpoints: those of g plus preimages of those of f.
        let mut pts: Vec<(Dyadic, Dyadic)> = Vec::with_capacity(f.bps.len() + g.bps.len());
        let mut j = 0;
        for (i, (gx, gy)) in g.bps.iter().enumerate() {
            while j < f.bps.len() && f.bps[j].0 < *gy {
                let fx = &f.bps[j].0;
                let (px, py) = &g.bps[i - 1];
                pts.push((px + (fx - py).mul_pow2(-g.slopes[i - 1]), fx.clone()));
                j += 1;
            }
            if j < f.bps.len() && f.bps[j].0 == *gy {
                j += 1;
            }
            pts.push((gx.clone(), gy.clone()));
        }
        let mut k = 0;
        let mut out = Vec::with_capacity(pts.len());
        let mut slopes = Vec::with_capacity(pts.len());
        for (idx, (x, y)) in pts.into_iter().enumerate() {
            while k + 2 < f.bps.len() && f.bps[k + 1].0 <= y {
                k += 1;
            }
            let (fx, fy) = &f.bps[k];
            let v = fy + (&y - fx).mul_pow2(f.slopes[k]);
            if idx > 0 {
                let (px, pv): &(Dyadic, Dyadic) = &out[idx - 1];
                slopes.push((&v - pv).log2_ratio(&(&x - px)).expect("composite slope is a power of two"));
            }
            out.push((x, v));
        }
        PLMap::canonical(out, slopes)
    }

    pub fn invert(&self) -> PLMap {
        PLMap {
            bps: self.bps.iter().map(|(x, y)| (y.clone(), x.clone())).collect(),
            slopes: self.slopes.iter().map(|k| -k).collect(),
        }
    }

    pub fn pow(&self, n: i64) -> PLMap {
        let base = if n < 0 { self.invert() } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = PLMap::identity();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.compose(&sq);
            }
        }
        acc
    }

    /// `h^-1 f h`; its support is `h^-1(supp f)`.
    pub fn conjugate(&self, h: &PLMap) -> PLMap {
        h.invert().compose(self).compose(h)
    }

    /// `[a,b] = a^-1 b^-1 a b`.
    pub fn commutator(a: &PLMap, b: &PLMap) -> PLMap {
        a.invert().compose(&b.invert()).compose(a).compose(b)
    }

    pub fn commutes_with(&self, other: &PLMap) -> bool {
        self.compose(other) == other.compose(self)
    }

    /// The generator `x_n`.
    pub fn generator(n: u32) -> PLMap {
        let n = n as i64;
        let one = Dyadic::one();
        let a1 = &one - Dyadic::pow2(-n);
        let a2 = &one - Dyadic::pow2(-n - 1);
        let a3 = &one - Dyadic::pow2(-n - 2);
        let v2 = &one - Dyadic::from_int(3).mul_pow2(-n - 2);
        let v3 = a2.clone();
        let mut bps = vec![(Dyadic::zero(), Dyadic::zero())];
        if n > 0 {
            bps.push((a1.clone(), a1));
        }
        bps.extend([(a2, v2), (a3, v3), (one.clone(), one)]);
        PLMap::from_trusted(bps)
    }

    /// `x_{[a,b],n}`: the generator `x_n` rescaled into `[a,b]`, identity outside.
    pub fn subgroup_generator(interval: &DyadicInterval, n: u32) -> Result<PLMap> {
        if !interval.in_unit() {
            return Err(Error::Precondition(format!("interval {interval} not inside [0,1]")));
        }
        let (a, b) = (&interval.lo, &interval.hi);
        let len = b - a;
        let n = n as i64;
        let at = |c: Dyadic| a + &len * &c;
        let one = Dyadic::one();
        let mut bps = vec![(Dyadic::zero(), Dyadic::zero())];
        if a.signum() > 0 {
            bps.push((a.clone(), a.clone()));
        }
        if n > 0 {
            let p = at(&one - Dyadic::pow2(-n));
            bps.push((p.clone(), p));
        }
        bps.push((at(&one - Dyadic::pow2(-n - 1)), at(&one - Dyadic::from_int(3).mul_pow2(-n - 2))));
        bps.push((at(&one - Dyadic::pow2(-n - 2)), at(&one - Dyadic::pow2(-n - 1))));
        bps.push((b.clone(), b.clone()));
        if *b < one {
            bps.push((one.clone(), one));
        }
        Ok(PLMap::from_trusted(bps))
    }

    /// The image of `f` under the natural isomorphism `F -> F_[a,b]`.
    pub fn embed(&self, interval: &DyadicInterval) -> Result<PLMap> {
        if !interval.in_unit() {
            return Err(Error::Precondition(format!("interval {interval} not inside [0,1]")));
        }
        if self.is_identity() {
            return Ok(PLMap::identity());
        }
        let (a, b) = (&interval.lo, &interval.hi);
        let len = b - a;
        let mut bps = Vec::with_capacity(self.bps.len() + 2);
        if a.signum() > 0 {
            bps.push((Dyadic::zero(), Dyadic::zero()));
        }
        bps.extend(self.bps.iter().map(|(x, y)| (a + &len * x, a + &len * y)));
        if *b < Dyadic::one() {
            bps.push((Dyadic::one(), Dyadic::one()));
        }
        Ok(PLMap::from_trusted(bps))
    }

    /// The open set of moved points. Endpoints may be non-dyadic fixed points
    /// in the interior of a segment.
    pub fn support(&self) -> IntervalSet {
        let mut out = Vec::new();
        let mut start: Option<Point> = None;
        for (i, w) in self.bps.windows(2).enumerate() {
            let ((x0, y0), (x1, y1)) = (&w[0], &w[1]);
            let d0 = (y0 - x0).signum();
            let d1 = (y1 - x1).signum();
            if d0 == 0 && d1 == 0 {
                continue;
            }
            if d0 == 0 {
                start = Some(point(x0));
            }
            if d0 * d1 < 0 {
                // Fixed point of t -> y0 + s(t - x0) with s != 1.
                let s = point(&Dyadic::pow2(self.slopes[i]));
                let r = (point(y0) - &s * point(x0)) / (Point::from_integer(1.into()) - s);
                let lo = start.take().expect("open interval before a crossing");
                out.extend(Interval::new(lo, r.clone()));
                start = Some(r);
            }
            if d1 == 0 {
                let lo = start.take().expect("open interval before a fixed point");
                out.extend(Interval::new(lo, point(x1)));
            }
        }
        IntervalSet::from_intervals(out)
    }

    /// Dyadic boundary points of the support strictly inside `(0,1)`.
    pub fn dividing_points(&self) -> Vec<Dyadic> {
        let mut out: Vec<Dyadic> = self
            .support()
            .boundary()
            .iter()
            .filter_map(Dyadic::from_rational)
            .filter(|d| d.signum() > 0 && *d < Dyadic::one())
            .collect();
        out.dedup();
        out
    }

    /// `f` on `[lo,hi]` (which `f` must map onto itself), identity elsewhere.
    pub fn restrict(&self, lo: &Dyadic, hi: &Dyadic) -> PLMap {
        let mut bps = Vec::new();
        bps.push((Dyadic::zero(), Dyadic::zero()));
        if lo.signum() > 0 {
            bps.push((lo.clone(), lo.clone()));
        }
        bps.extend(self.bps.iter().filter(|(x, _)| lo < x && x < hi).cloned());
        if *hi < Dyadic::one() {
            bps.push((hi.clone(), hi.clone()));
        }
        bps.push((Dyadic::one(), Dyadic::one()));
        PLMap::from_trusted(bps)
    }

    /// Splits `f` at its dividing points into non-trivial commuting pieces.
    pub fn defragment(&self) -> Vec<PLMap> {
        let mut cuts = vec![Dyadic::zero()];
        cuts.extend(self.dividing_points());
        cuts.push(Dyadic::one());
        cuts.windows(2).map(|w| self.restrict(&w[0], &w[1])).filter(|g| !g.is_identity()).collect()
    }

    /// Some map sending `xs[i]` to `ys[i]`, affine of slope 1 on pieces where
    /// both partitions agree.
    pub fn partition_map(xs: &[Dyadic], ys: &[Dyadic]) -> Result<PLMap> {
        let bad = |m: &str| Error::InvalidMap(format!("malformed partition: {m}"));
        if xs.len() != ys.len() || xs.len() < 2 {
            return Err(bad("sequences must have equal length at least 2"));
        }
        for s in [xs, ys] {
            if s[0] != Dyadic::zero() || s[s.len() - 1] != Dyadic::one() {
                return Err(bad("must start at 0 and end at 1"));
            }
            if s.windows(2).any(|w| w[0] >= w[1]) {
                return Err(bad("must be strictly increasing"));
            }
        }
        let mut bps = vec![(Dyadic::zero(), Dyadic::zero())];
        for i in 1..xs.len() {
            bps.extend(interval_map(&xs[i - 1], &xs[i], &ys[i - 1], &ys[i]).into_iter().skip(1));
        }
        PLMap::from_breakpoints(bps)
    }

    /// Images of the endpoints: exact image of an open set.
    pub fn image(&self, s: &IntervalSet) -> IntervalSet {
        IntervalSet::from_intervals(s.intervals().iter().map(|iv| Interval {
            lo: self.apply_point(&iv.lo),
            hi: self.apply_point(&iv.hi),
        }))
    }

    /// Whether the support avoids a neighbourhood of 1.
    pub fn trivial_near_one(&self) -> bool {
        *self.slopes.last().expect("non-empty") == 0
    }

    /// Whether the support avoids a neighbourhood of 0.
    pub fn trivial_near_zero(&self) -> bool {
        self.slopes[0] == 0
    }
}

/// Breakpoints of a PL map `[a,b] -> [c,d]` with power-of-two slopes.
///
/// Writes the lengths as `o1 * 2^e1` and `o2 * 2^e2` with odd `o`, cuts each
/// side into its `o` equal pieces and halves pieces on the side with fewer
/// of them until the counts agree.
fn interval_map(a: &Dyadic, b: &Dyadic, c: &Dyadic, d: &Dyadic) -> Vec<(Dyadic, Dyadic)> {
    let pieces = |lo: &Dyadic, hi: &Dyadic, other: &Dyadic| -> Vec<Dyadic> {
        let len = hi - lo;
        let (o, e) = odd_split(&len);
        let (o_other, _) = odd_split(other);
        let unit = Dyadic::pow2(e);
        let mut lengths: Vec<Dyadic> = (0..o).map(|_| unit.clone()).collect();
        let mut extra = o_other.saturating_sub(o);
        let mut i = 0;
        while extra > 0 {
            let h = lengths[i].half();
            lengths[i] = h.clone();
            lengths.insert(i + 1, h);
            i += 2;
            if i >= lengths.len() {
                i = 0;
            }
            extra -= 1;
        }
        lengths
    };
    let dom = pieces(a, b, &(d - c));
    let ran = pieces(c, d, &(b - a));
    let mut out = vec![(a.clone(), c.clone())];
    let (mut x, mut y) = (a.clone(), c.clone());
    for (lx, ly) in dom.iter().zip(&ran) {
        x = &x + lx;
        y = &y + ly;
        out.push((x.clone(), y.clone()));
    }
    out
}

/// `len = o * 2^e` with `o` odd, `o` as a machine integer.
fn odd_split(len: &Dyadic) -> (usize, i64) {
    let n = len.numerator();
    let tz = n.trailing_zeros().unwrap_or(0);
    let odd = n >> tz as usize;
    let o: usize = usize::try_from(&odd).expect("partition length with huge odd part");
    (o, tz as i64 - len.exponent() as i64)
}

impl Mul<&PLMap> for &PLMap {
    type Output = PLMap;
    fn mul(self, rhs: &PLMap) -> PLMap {
        self.compose(rhs)
    }
}

impl Mul<PLMap> for PLMap {
    type Output = PLMap;
    fn mul(self, rhs: PLMap) -> PLMap {
        self.compose(&rhs)
    }
}

impl fmt::Display for PLMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, (x, y)) in self.bps.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({x}, {y})")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for PLMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::rat;

    fn d(s: &str) -> Dyadic {
        s.parse().unwrap()
    }

    fn map(pairs: &[(&str, &str)]) -> PLMap {
        PLMap::from_breakpoints(pairs.iter().map(|(a, b)| (d(a), d(b))).collect()).unwrap()
    }

    fn iv(s: &str) -> DyadicInterval {
        s.parse().unwrap()
    }

    #[test]
    fn generator_tables() {
        assert_eq!(PLMap::generator(0), map(&[("0", "0"), ("1/2", "1/4"), ("3/4", "1/2"), ("1", "1")]));
        assert_eq!(
            PLMap::generator(1),
            map(&[("0", "0"), ("1/2", "1/2"), ("3/4", "5/8"), ("7/8", "3/4"), ("1", "1")])
        );
        let x3 = PLMap::generator(3);
        assert_eq!(x3.apply(&d("7/8")), d("7/8"));
        assert_eq!(x3.apply(&d("3/8")), d("3/8"));
    }

    #[test]
    fn composition_convention() {
        let (x0, x1) = (PLMap::generator(0), PLMap::generator(1));
        assert_eq!(x0.invert().compose(&x1).compose(&x0), PLMap::generator(2));
        assert_ne!(x0.compose(&x1).compose(&x0.invert()), PLMap::generator(2));
    }

    #[test]
    fn eval_examples() {
        let (x0, x1) = (PLMap::generator(0), PLMap::generator(1));
        assert_eq!(x0.eval(&d("1/2")).unwrap(), d("1/4"));
        assert_eq!(x1.eval(&d("3/4")).unwrap(), d("5/8"));
        assert_eq!(x0.invert().eval(&d("1/4")).unwrap(), d("1/2"));
        assert!(x0.eval(&d("3/2")).is_err());
    }

    #[test]
    fn subgroup_generators() {
        assert_eq!(PLMap::subgroup_generator(&iv("[0,1]"), 2).unwrap(), PLMap::generator(2));
        let s = PLMap::subgroup_generator(&iv("[1/2,1]"), 0).unwrap();
        assert_eq!(s.support(), IntervalSet::from_dyadic(&d("1/2"), &d("1")));
        let t = PLMap::subgroup_generator(&iv("[0,1/2]"), 0).unwrap();
        assert_eq!(t.apply(&d("3/4")), d("3/4"));
        let u = PLMap::subgroup_generator(&iv("[1/4,3/8]"), 0).unwrap();
        assert_eq!(u.support(), IntervalSet::from_dyadic(&d("1/4"), &d("3/8")));
        for n in 0..4 {
            for i in ["[0,1/2]", "[1/2,1]", "[1/4,3/8]", "[3/8,1]", "[5/8,3/4]"] {
                let i = iv(i);
                assert_eq!(PLMap::generator(n).embed(&i).unwrap(), PLMap::subgroup_generator(&i, n).unwrap());
            }
        }
    }

    #[test]
    fn support_with_non_dyadic_fixed_point() {
        let f = map(&[("0", "0"), ("1/4", "1/8"), ("5/16", "1/4"), ("3/8", "1/2"), ("1/2", "3/4"), ("1", "1")]);
        let s = f.support();
        assert_eq!(s.len(), 2);
        assert_eq!(s.intervals()[0].hi, rat(1, 3));
        assert_eq!(s.intervals()[1].lo, rat(1, 3));
        assert_eq!(f.apply_point(&rat(1, 3)), rat(1, 3));
        assert!(f.dividing_points().is_empty());
        assert_eq!(f.defragment(), vec![f.clone()]);
    }

    #[test]
    fn dividing_points_and_defragmentation() {
        let a = PLMap::subgroup_generator(&iv("[0,1/4]"), 0).unwrap();
        let b = PLMap::subgroup_generator(&iv("[5/8,3/4]"), 0).unwrap();
        let f = a.compose(&b);
        assert_eq!(f.dividing_points(), vec![d("1/4"), d("5/8"), d("3/4")]);
        assert_eq!(f.defragment(), vec![a, b]);
        assert!(PLMap::identity().dividing_points().is_empty());
        assert!(PLMap::identity().defragment().is_empty());
        assert!(PLMap::generator(0).dividing_points().is_empty());
        assert_eq!(PLMap::generator(0).defragment(), vec![PLMap::generator(0)]);
    }

    #[test]
    fn partition_maps() {
        assert_eq!(PLMap::partition_map(&[d("0"), d("1")], &[d("0"), d("1")]).unwrap(), PLMap::identity());
        let f = PLMap::partition_map(&[d("0"), d("1/2"), d("1")], &[d("0"), d("1/4"), d("1")]).unwrap();
        assert_eq!(f.apply(&d("1/2")), d("1/4"));
        let g = PLMap::partition_map(&[d("0"), d("1/2"), d("3/4"), d("1")], &[d("0"), d("1/2"), d("7/8"), d("1")])
            .unwrap();
        assert_eq!(g.apply(&d("1/4")), d("1/4"));
        assert_eq!(g.breakpoints()[1], (d("1/2"), d("1/2")));
        let h = PLMap::partition_map(&[d("0"), d("3/8"), d("1")], &[d("0"), d("3/4"), d("1")]).unwrap();
        assert_eq!(h.apply(&d("3/8")), d("3/4"));
        assert!(PLMap::partition_map(&[d("0"), d("1")], &[d("0"), d("1/2"), d("1")]).is_err());
    }

    #[test]
    fn validation() {
        assert!(PLMap::from_breakpoints(vec![(d("0"), d("0")), (d("1/2"), d("3/8")), (d("1"), d("1"))]).is_err());
        assert!(PLMap::from_breakpoints(vec![(d("0"), d("0")), (d("1"), d("1/2"))]).is_err());
        let f = map(&[("0", "0"), ("1/4", "1/4"), ("1/2", "1/2"), ("1", "1")]);
        assert!(f.is_identity());
    }

    #[test]
    fn images() {
        let x1 = PLMap::generator(1);
        let half = IntervalSet::from_dyadic(&d("1/2"), &d("1"));
        assert_eq!(x1.invert().image(&half), half);
        let x0 = PLMap::generator(0);
        assert_eq!(x0.image(&half), IntervalSet::from_dyadic(&d("1/4"), &d("1")));
        assert_eq!(x0.invert().image(&x0.image(&half)), half);
    }
}
