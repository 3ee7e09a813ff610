//! Relations of markings of F and the marked-group metric.
//!
//! Words over the marked letters are written with variables: the letter
//! `y_i` stands for the i-th marker. Word length counts letters, inverses
//! included.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::plmap::PLMap;
use crate::words::{Letter, Word};

/// Upper bound on the number of words a single enumeration may visit;
/// admits radius 10 for three markers.
pub const ENUMERATION_LIMIT: u128 = 16_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Marking {
    markers: Vec<PLMap>,
}

impl Marking {
    pub fn new(markers: Vec<PLMap>) -> Result<Marking> {
        if markers.is_empty() {
            return Err(Error::Precondition("a marking needs at least one marker".into()));
        }
        Ok(Marking { markers })
    }

    pub fn markers(&self) -> &[PLMap] {
        &self.markers
    }

    pub fn len(&self) -> usize {
        self.markers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.markers.is_empty()
    }
}

/// A reduced word over the markers: `+i` is marker `i` (from 1), `-i` its inverse.
pub type MarkedWord = Vec<i32>;

fn inverse(w: &[i32]) -> MarkedWord {
    w.iter().rev().map(|a| -a).collect()
}

fn canonical(w: &[i32]) -> MarkedWord {
    let inv = inverse(w);
    if inv.as_slice() < w {
        inv
    } else {
        w.to_vec()
    }
}

/// Converts a marked word to a word in the variables `y_1 … y_m`.
pub fn to_word(w: &[i32], m: usize) -> Word {
    Word::new(w.iter().map(|&a| Letter::var(a.unsigned_abs(), a.signum() as i64)).collect(), m as u32)
}

/// Reads a constant-free word in the variables as a marked word.
pub fn from_word(w: &Word) -> Result<MarkedWord> {
    let mut out = Vec::new();
    for l in w.letters() {
        match l {
            Letter::Var { index, power } => {
                let a = *index as i32 * power.signum() as i32;
                out.extend(core::iter::repeat_n(a, power.unsigned_abs() as usize));
            }
            Letter::Const(_) => return Err(Error::Precondition(format!("{w} contains constants"))),
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationSet {
    pub radius: usize,
    pub markers: usize,
    /// Each relation once, as the lesser of itself and its inverse.
    relations: BTreeSet<MarkedWord>,
}

impl RelationSet {
    pub fn contains(&self, w: &[i32]) -> bool {
        self.relations.contains(&canonical(w))
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &MarkedWord> {
        self.relations.iter()
    }

    /// The relations of length at most `r`.
    pub fn truncate(&self, r: usize) -> RelationSet {
        RelationSet {
            radius: r.min(self.radius),
            markers: self.markers,
            relations: self.relations.iter().filter(|w| w.len() <= r).cloned().collect(),
        }
    }

    /// Shortest length at which the two sets differ.
    pub fn first_difference(&self, other: &RelationSet) -> Option<usize> {
        self.relations.symmetric_difference(&other.relations).map(Vec::len).min()
    }

    /// One DSL word per line, shortest first.
    pub fn to_text(&self) -> alloc::string::String {
        let mut words: Vec<&MarkedWord> = self.relations.iter().collect();
        words.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        let mut out = alloc::string::String::new();
        for w in words {
            out.push_str(&crate::dsl::format(&to_word(w, self.markers)));
            out.push('\n');
        }
        out
    }
}

/// Number of reduced words of length 1 to `r` over `m` markers.
pub fn enumeration_cost(m: usize, r: usize) -> u128 {
    let k = 2 * m as u128;
    let mut total = 0u128;
    let mut level = k;
    for _ in 0..r {
        total = total.saturating_add(level);
        level = level.saturating_mul(k - 1);
    }
    total
}

/// All reduced words of length 1 to `r` over the markers that evaluate to the identity.
pub fn relations_up_to(marking: &Marking, r: usize) -> Result<RelationSet> {
    if r == 0 {
        return Err(Error::Precondition("radius must be at least 1".into()));
    }
    let m = marking.len();
    let estimate = enumeration_cost(m, r);
    if estimate > ENUMERATION_LIMIT {
        return Err(Error::RadiusCap { radius: r, estimate, limit: ENUMERATION_LIMIT });
    }
    let mut letters: Vec<(i32, PLMap)> = Vec::with_capacity(2 * m);
    for (i, g) in marking.markers.iter().enumerate() {
        letters.push((i as i32 + 1, g.clone()));
        letters.push((-(i as i32) - 1, g.invert()));
    }
    let mut relations = BTreeSet::new();
    let mut word: Vec<i32> = Vec::with_capacity(r);
    let mut values: Vec<PLMap> = alloc::vec![PLMap::identity()];
    // Depth-first with a stack of per-depth letter cursors.
    let mut cursor: Vec<usize> = alloc::vec![0];
    while let Some(c) = cursor.last_mut() {
        if *c == letters.len() || word.len() == r {
            cursor.pop();
            if word.pop().is_some() {
                values.pop();
            }
            continue;
        }
        let (a, g) = &letters[*c];
        *c += 1;
        if word.last() == Some(&-a) {
            continue;
        }
        let v = values.last().expect("stack").compose(g);
        word.push(*a);
        if v.is_identity() {
            relations.insert(canonical(&word));
        }
        values.push(v);
        cursor.push(0);
    }
    Ok(RelationSet { radius: r, markers: m, relations })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DistanceBound {
    /// The markings share all relations of length at most `radius`, so they are
    /// at distance at most `e^-radius`.
    pub radius: usize,
    /// True when the relation sets differ at length `radius + 1`; false when
    /// the search stopped at `r_max`.
    pub exact: bool,
}

pub fn distance_bound(a: &Marking, b: &Marking, r_max: usize) -> Result<DistanceBound> {
    if a.len() != b.len() {
        return Err(Error::Precondition(format!("marker counts differ: {} and {}", a.len(), b.len())));
    }
    let ra = relations_up_to(a, r_max)?;
    let rb = relations_up_to(b, r_max)?;
    Ok(distance_from_sets(&ra, &rb))
}

pub fn distance_from_sets(ra: &RelationSet, rb: &RelationSet) -> DistanceBound {
    match ra.first_difference(rb) {
        Some(l) => DistanceBound { radius: l - 1, exact: true },
        None => DistanceBound { radius: ra.radius.min(rb.radius), exact: false },
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeReport {
    /// Entry `r - 1` is the first index from which the radius-`r` relation set
    /// stays constant over `window` consecutive terms, if any.
    pub stabilization: Vec<Option<usize>>,
    pub terms: usize,
}

pub fn convergence_probe(seq: &[Marking], r: usize, window: usize) -> Result<ProbeReport> {
    let sets: Vec<RelationSet> = seq.iter().map(|m| relations_up_to(m, r)).collect::<Result<_>>()?;
    let window = window.max(1);
    let stabilization = (1..=r)
        .map(|radius| {
            let cut: Vec<RelationSet> = sets.iter().map(|s| s.truncate(radius)).collect();
            (0..cut.len()).find(|&i| i + window <= cut.len() && cut[i..i + window].iter().all(|s| s == &cut[i]))
        })
        .collect();
    Ok(ProbeReport { stabilization, terms: seq.len() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(n: u32) -> PLMap {
        PLMap::generator(n)
    }

    #[test]
    fn defining_relators_at_radius_ten() {
        let rel = relations_up_to(&Marking::new(alloc::vec![x(0), x(1)]).unwrap(), 10).unwrap();
        // [x0 x1^-1, x0^-1 x1 x0] and [x0 x1^-1, x0^-2 x1 x0^2]
        let a = [1, -2];
        let b1 = [-1, 2, 1];
        let comm = |a: &[i32], b: &[i32]| [inverse(a), inverse(b), a.to_vec(), b.to_vec()].concat();
        assert!(rel.contains(&comm(&a, &b1)));
        assert!(!rel.contains(&[1, 2, -1, -2]));
        assert!(rel.iter().all(|w| w.len() >= 10));
    }

    #[test]
    fn trivial_cases() {
        let id = relations_up_to(&Marking::new(alloc::vec![PLMap::identity()]).unwrap(), 1).unwrap();
        assert_eq!(id.len(), 1);
        assert!(id.contains(&[1]) && id.contains(&[-1]));
        assert!(relations_up_to(&Marking::new(alloc::vec![x(0)]).unwrap(), 10).unwrap().is_empty());
        assert!(Marking::new(Vec::new()).is_err());
        let big = Marking::new(alloc::vec![x(0), x(1), x(2), x(3)]).unwrap();
        assert!(matches!(relations_up_to(&big, 10), Err(Error::RadiusCap { radius: 10, .. })));
    }

    #[test]
    fn distances() {
        let a = Marking::new(alloc::vec![x(0), x(1), x(1)]).unwrap();
        let b = Marking::new(alloc::vec![x(0), x(1), x(2)]).unwrap();
        assert_eq!(distance_bound(&a, &a, 4).unwrap(), DistanceBound { radius: 4, exact: false });
        let d = distance_bound(&a, &b, 4).unwrap();
        assert_eq!(d, DistanceBound { radius: 1, exact: true });
        assert_eq!(distance_bound(&b, &a, 4).unwrap(), d);
        assert!(distance_bound(&a, &Marking::new(alloc::vec![x(0)]).unwrap(), 2).is_err());
    }

    #[test]
    fn probes() {
        let a = Marking::new(alloc::vec![x(0), x(1)]).unwrap();
        let b = Marking::new(alloc::vec![x(0), x(0)]).unwrap();
        let constant = convergence_probe(&[a.clone(), a.clone(), a.clone()], 3, 2).unwrap();
        assert_eq!(constant.stabilization, alloc::vec![Some(0); 3]);
        let alternating = convergence_probe(&[a.clone(), b.clone(), a, b], 3, 2).unwrap();
        assert_eq!(alternating.stabilization[2], None);
    }

    #[test]
    fn word_round_trip() {
        let w = alloc::vec![1, 1, -2, 3];
        assert_eq!(from_word(&to_word(&w, 3)).unwrap(), w);
        assert_eq!(crate::dsl::format(&to_word(&w, 3)), "y1^2 * y2^-1 * y3");
    }
}
