//! The normal form `x_0^{b_0} … x_n^{b_n} x_n^{-a_n} … x_0^{-a_0}`.

use alloc::vec::Vec;
use core::fmt;

use crate::dyadic::Dyadic;
use crate::plmap::PLMap;

/// Exponents of the normal form. Both vectors have length `n + 1`; the
/// identity has empty vectors.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct NormalForm {
    pub b: Vec<u64>,
    pub a: Vec<u64>,
}

/// A standard dyadic interval `[lo, lo + 2^-depth]`.
#[derive(Clone, Debug)]
struct Leaf {
    lo: Dyadic,
    depth: u32,
}

impl NormalForm {
    /// Computed from the reduced tree pair of `f`: the domain tree is the
    /// coarsest standard dyadic subdivision on which `f` is linear with
    /// standard dyadic image pieces, and leaf exponents of the range and
    /// domain trees give `b` and `a`.
    pub fn of(f: &PLMap) -> NormalForm {
        let mut dom = Vec::new();
        let mut ran = Vec::new();
        subdivide(f, Dyadic::zero(), 0, &mut dom, &mut ran);
        let mut b: Vec<u64> = ran.iter().map(leaf_exponent).collect();
        let mut a: Vec<u64> = dom.iter().map(leaf_exponent).collect();
        while matches!((b.last(), a.last()), (Some(0), Some(0))) {
            b.pop();
            a.pop();
        }
        NormalForm { b, a }
    }

    pub fn is_identity(&self) -> bool {
        self.b.is_empty()
    }

    /// Conditions (i) and (ii) of the normal form.
    pub fn is_valid(&self) -> bool {
        if self.a.len() != self.b.len() {
            return false;
        }
        let Some(n) = self.a.len().checked_sub(1) else {
            return true;
        };
        if (self.a[n] > 0) == (self.b[n] > 0) {
            return false;
        }
        (0..n).all(|k| !(self.a[k] > 0 && self.b[k] > 0) || self.a[k + 1] > 0 || self.b[k + 1] > 0)
    }

    /// Generator letters `(n, exponent)` in written order.
    pub fn letters(&self) -> Vec<(usize, i64)> {
        let mut out = Vec::new();
        for (i, e) in self.b.iter().enumerate() {
            if *e > 0 {
                out.push((i, *e as i64));
            }
        }
        for (i, e) in self.a.iter().enumerate().rev() {
            if *e > 0 {
                out.push((i, -(*e as i64)));
            }
        }
        out
    }

    /// Evaluates the normal-form word.
    pub fn to_map(&self) -> PLMap {
        self.letters().into_iter().fold(PLMap::identity(), |acc, (n, e)| acc.compose(&PLMap::generator(n as u32).pow(e)))
    }
}

fn subdivide(f: &PLMap, lo: Dyadic, depth: u32, dom: &mut Vec<Leaf>, ran: &mut Vec<Leaf>) {
    let width = Dyadic::pow2(-(depth as i64));
    let hi = &lo + &width;
    let linear = !f.breakpoints().iter().any(|(x, _)| lo < *x && *x < hi);
    if linear {
        let (flo, fhi) = (f.apply(&lo), f.apply(&hi));
        let len = &fhi - &flo;
        let k = len.log2_ratio(&Dyadic::one()).expect("image length is a power of two");
        if k <= 0 && flo.mul_pow2(-k).exponent() == 0 {
            dom.push(Leaf { lo, depth });
            ran.push(Leaf { lo: flo, depth: (-k) as u32 });
            return;
        }
    }
    let mid = &lo + &width.half();
    subdivide(f, lo, depth + 1, dom, ran);
    subdivide(f, mid, depth + 1, dom, ran);
}

/// Number of left edges on the path up from the leaf that stays off the
/// right side of the tree.
fn leaf_exponent(leaf: &Leaf) -> u64 {
    let mut depth = leaf.depth;
    let mut count = 0;
    while depth >= 1 && leaf.lo.exponent() < depth {
        let parent = depth - 1;
        if &leaf.lo + &Dyadic::pow2(-(parent as i64)) == Dyadic::one() {
            break;
        }
        count += 1;
        depth = parent;
    }
    count
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letters = self.letters();
        if letters.is_empty() {
            return write!(f, "1");
        }
        for (i, (n, e)) in letters.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            write!(f, "x{n}")?;
            if *e != 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators() {
        assert_eq!(NormalForm::of(&PLMap::generator(0)), NormalForm { b: alloc::vec![1], a: alloc::vec![0] });
        assert_eq!(
            NormalForm::of(&PLMap::generator(3)),
            NormalForm { b: alloc::vec![0, 0, 0, 1], a: alloc::vec![0, 0, 0, 0] }
        );
        let inv = NormalForm::of(&PLMap::generator(1).invert());
        assert_eq!(inv, NormalForm { b: alloc::vec![0, 0], a: alloc::vec![0, 1] });
        assert!(NormalForm::of(&PLMap::identity()).is_identity());
    }

    #[test]
    fn round_trip_small() {
        let x0 = PLMap::generator(0);
        let x1 = PLMap::generator(1);
        let f = x0.compose(&x1.invert()).compose(&x0).compose(&x0).compose(&x1);
        let nf = NormalForm::of(&f);
        assert!(nf.is_valid());
        assert_eq!(nf.to_map(), f);
    }
}
