//! Open subsets of (0,1) as finite unions of open intervals, and dyadic intervals.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::dyadic::{format_rational, Dyadic};
use crate::error::{Error, Result};

/// Exact point of the unit interval. Support endpoints can be non-dyadic
/// (an isolated fixed point inside a slope-4 segment, say), so sets use
/// rationals while breakpoints stay dyadic.
pub type Point = BigRational;

pub fn point(d: &Dyadic) -> Point {
    d.to_rational()
}

pub fn format_point(p: &Point) -> String {
    format_rational(p)
}

/// Parses a dyadic (`n/2^k`) or an arbitrary fraction `n/d`.
pub fn parse_point(s: &str) -> Result<Point> {
    if let Ok(d) = s.parse::<Dyadic>() {
        return Ok(point(&d));
    }
    s.trim().parse::<Point>().map_err(|_| Error::Parse { position: 0, message: alloc::format!("bad point {s:?}") })
}

pub fn rat(n: i64, d: i64) -> Point {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// An open interval `(lo, hi)` with `lo < hi`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Interval {
    pub lo: Point,
    pub hi: Point,
}

impl Interval {
    pub fn new(lo: Point, hi: Point) -> Option<Interval> {
        (lo < hi).then_some(Interval { lo, hi })
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.lo < *p && *p < self.hi
    }

    pub fn length(&self) -> Point {
        &self.hi - &self.lo
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", format_rational(&self.lo), format_rational(&self.hi))
    }
}

/// A finite union of disjoint open intervals, sorted.
///
/// Two intervals may share an endpoint; that point is then outside the set.
/// [`IntervalSet::regularized`] merges such neighbours.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct IntervalSet {
    intervals: Vec<Interval>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet { intervals: Vec::new() }
    }

    /// The open unit interval `(0,1)`.
    pub fn unit() -> Self {
        IntervalSet::from_interval(Point::zero(), Point::one())
    }

    pub fn from_interval(lo: Point, hi: Point) -> Self {
        IntervalSet::from_intervals(Interval::new(lo, hi))
    }

    pub fn from_dyadic(lo: &Dyadic, hi: &Dyadic) -> Self {
        IntervalSet::from_interval(point(lo), point(hi))
    }

    /// Union of arbitrary open intervals.
    pub fn from_intervals<I: IntoIterator<Item = Interval>>(items: I) -> Self {
        let mut items: Vec<Interval> = items.into_iter().collect();
        items.sort_by(|a, b| a.lo.cmp(&b.lo).then(a.hi.cmp(&b.hi)));
        let mut out: Vec<Interval> = Vec::with_capacity(items.len());
        for iv in items {
            if let Some(last) = out.last_mut() {
                if iv.lo < last.hi {
                    if iv.hi > last.hi {
                        last.hi = iv.hi;
                    }
                    continue;
                }
            }
            out.push(iv);
        }
        IntervalSet { intervals: out }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        IntervalSet::from_intervals(self.intervals.iter().chain(&other.intervals).cloned())
    }

    pub fn intersection(&self, other: &IntervalSet) -> IntervalSet {
        let (a, b) = (&self.intervals, &other.intervals);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < a.len() && j < b.len() {
            let lo = if a[i].lo > b[j].lo { &a[i].lo } else { &b[j].lo };
            let hi = if a[i].hi < b[j].hi { &a[i].hi } else { &b[j].hi };
            if lo < hi {
                out.push(Interval { lo: lo.clone(), hi: hi.clone() });
            }
            if a[i].hi < b[j].hi {
                i += 1;
            } else {
                j += 1;
            }
        }
        IntervalSet { intervals: out }
    }

    /// `int((0,1) \ self)`: the complement of the closure inside `(0,1)`.
    pub fn interior_complement(&self) -> IntervalSet {
        let mut out = Vec::new();
        let mut start = Point::zero();
        for iv in &self.intervals {
            if iv.lo > start {
                out.push(Interval { lo: start, hi: iv.lo.clone() });
            }
            start = iv.hi.clone();
        }
        if start < Point::one() {
            out.push(Interval { lo: start, hi: Point::one() });
        }
        IntervalSet { intervals: out }
    }

    /// `self \ closure(other)`.
    pub fn minus_closure(&self, other: &IntervalSet) -> IntervalSet {
        self.intersection(&other.interior_complement())
    }

    pub fn contains_point(&self, p: &Point) -> bool {
        self.component(p).is_some()
    }

    pub fn closure_contains(&self, p: &Point) -> bool {
        self.intervals.iter().any(|iv| iv.lo <= *p && *p <= iv.hi)
    }

    /// The interval of `self` containing `p`.
    pub fn component(&self, p: &Point) -> Option<&Interval> {
        let idx = self.intervals.partition_point(|iv| iv.hi <= *p);
        self.intervals.get(idx).filter(|iv| iv.contains(p))
    }

    /// Subset test.
    pub fn contains_set(&self, other: &IntervalSet) -> bool {
        other.intervals.iter().all(|iv| {
            let idx = self.intervals.partition_point(|s| s.hi <= iv.lo);
            self.intervals.get(idx).is_some_and(|s| s.lo <= iv.lo && iv.hi <= s.hi)
        })
    }

    pub fn is_disjoint(&self, other: &IntervalSet) -> bool {
        self.intersection(other).is_empty()
    }

    /// Interior of the closure: neighbours sharing an endpoint are merged.
    pub fn regularized(&self) -> IntervalSet {
        let mut out: Vec<Interval> = Vec::with_capacity(self.intervals.len());
        for iv in &self.intervals {
            if let Some(last) = out.last_mut() {
                if last.hi == iv.lo {
                    last.hi = iv.hi.clone();
                    continue;
                }
            }
            out.push(iv.clone());
        }
        IntervalSet { intervals: out }
    }

    /// Endpoints of all intervals.
    pub fn boundary(&self) -> Vec<Point> {
        let mut pts: Vec<Point> = Vec::new();
        for iv in &self.intervals {
            if pts.last() != Some(&iv.lo) {
                pts.push(iv.lo.clone());
            }
            pts.push(iv.hi.clone());
        }
        pts
    }

    /// Sum of interval lengths.
    pub fn measure(&self) -> Point {
        self.intervals.iter().map(Interval::length).fold(Point::zero(), |a, b| a + b)
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.intervals.is_empty() {
            return write!(f, "empty");
        }
        for (i, iv) in self.intervals.iter().enumerate() {
            if i > 0 {
                write!(f, " U ")?;
            }
            write!(f, "{iv}")?;
        }
        Ok(())
    }
}

/// A dyadic interval `[a,b]` or `(a,b)` with `a < b`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct DyadicInterval {
    pub lo: Dyadic,
    pub hi: Dyadic,
    pub closed: bool,
}

impl DyadicInterval {
    pub fn new(lo: Dyadic, hi: Dyadic, closed: bool) -> Result<Self> {
        if lo >= hi {
            return Err(Error::DegenerateInterval(lo.to_string(), hi.to_string()));
        }
        Ok(DyadicInterval { lo, hi, closed })
    }

    pub fn open(lo: Dyadic, hi: Dyadic) -> Result<Self> {
        DyadicInterval::new(lo, hi, false)
    }

    pub fn closed(lo: Dyadic, hi: Dyadic) -> Result<Self> {
        DyadicInterval::new(lo, hi, true)
    }

    /// Both endpoints within `[0,1]`.
    pub fn in_unit(&self) -> bool {
        self.lo >= Dyadic::zero() && self.hi <= Dyadic::one()
    }

    pub fn interior(&self) -> IntervalSet {
        IntervalSet::from_dyadic(&self.lo, &self.hi)
    }

    pub fn length(&self) -> Dyadic {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Dyadic {
        (&self.lo + &self.hi).half()
    }

    /// Whether the two intervals have disjoint point sets.
    pub fn is_disjoint(&self, other: &DyadicInterval) -> bool {
        let (first, second) = if self.lo <= other.lo { (self, other) } else { (other, self) };
        match first.hi.cmp(&second.lo) {
            core::cmp::Ordering::Less => true,
            core::cmp::Ordering::Equal => !(first.closed && second.closed),
            core::cmp::Ordering::Greater => false,
        }
    }
}

impl fmt::Display for DyadicInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (l, r) = if self.closed { ('[', ']') } else { ('(', ')') };
        write!(f, "{l}{}, {}{r}", self.lo, self.hi)
    }
}

impl core::str::FromStr for DyadicInterval {
    type Err = Error;

    /// Parses `a,b` (open), `(a,b)` or `[a,b]`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (closed, body) = if let Some(b) = s.strip_prefix('[').and_then(|b| b.strip_suffix(']')) {
            (true, b)
        } else if let Some(b) = s.strip_prefix('(').and_then(|b| b.strip_suffix(')')) {
            (false, b)
        } else {
            (false, s)
        };
        let (a, b) = body.split_once(',').ok_or_else(|| Error::Parse {
            position: 0,
            message: alloc::format!("expected `a,b` interval, got {s:?}"),
        })?;
        DyadicInterval::new(a.parse()?, b.parse()?, closed)
    }
}
