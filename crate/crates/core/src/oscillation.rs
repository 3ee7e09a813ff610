//! Oscillation sets, ε-cells and the oscillating / almost oscillating / rigid
//! classification of words with constants.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::interval::IntervalSet;
use crate::plmap::PLMap;
use crate::words::{Letter, Word};

/// `O_w`: points `p` with `v_i ⋯ v_1(p) ∈ supp(v_{i+1})` for `0 ≤ i < k`.
///
/// Words ending with a variable block are conjugated first. Pure-variable
/// words give `(0,1)`.
pub fn oscillation_set(w: &Word) -> Result<IntervalSet> {
    if w.is_constant() {
        return Err(Error::Precondition(format!("constant word {w} has no oscillation set")));
    }
    Ok(raw_oscillation_set(&w.canonical().0))
}

/// As [`oscillation_set`] but also defined on non-trivial constant words,
/// where it is the support of the constant.
fn raw_oscillation_set(w: &Word) -> IntervalSet {
    let constants = w.segment_form().constants;
    let mut out = IntervalSet::unit();
    let mut prefix = PLMap::identity();
    for v in &constants {
        out = out.intersection(&prefix.invert().image(&v.map().support()));
        if out.is_empty() {
            break;
        }
        prefix = v.map().compose(&prefix);
    }
    out
}

/// Non-trivial word that is pure-variable or has non-empty `O_w`.
pub fn is_oscillating(w: &Word) -> bool {
    !w.is_trivial() && !raw_oscillation_set(&w.canonical().0).is_empty()
}

/// `𝒱_w(A) = ⋃_{j=1}^{k} v_j ⋯ v_1(A)`.
pub fn orbit_set(w: &Word, a: &IntervalSet) -> IntervalSet {
    let mut out = IntervalSet::empty();
    let mut prefix = PLMap::identity();
    for v in &w.segment_form().constants {
        prefix = v.map().compose(&prefix);
        out = out.union(&prefix.image(a));
    }
    out
}

/// `⋃_{j=1}^{k} v_1^{-1} ⋯ v_j^{-1}(A)`.
pub fn orbit_set_inverse(w: &Word, a: &IntervalSet) -> IntervalSet {
    let mut out = IntervalSet::empty();
    let mut prefix = PLMap::identity();
    for v in &w.segment_form().constants {
        prefix = v.map().compose(&prefix);
        out = out.union(&prefix.invert().image(a));
    }
    out
}

/// Prefix images `v_s ⋯ v_1(A)` for `s = 1..k`.
pub fn prefix_images(w: &Word, a: &IntervalSet) -> Vec<IntervalSet> {
    let mut prefix = PLMap::identity();
    w.segment_form()
        .constants
        .iter()
        .map(|v| {
            prefix = v.map().compose(&prefix);
            prefix.image(a)
        })
        .collect()
}

/// One ε-cell `X_ε` of a word and its derived word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsilonCell {
    /// `ε_1, …, ε_k`; `true` keeps the constant `v_i`.
    pub epsilon: Vec<bool>,
    pub region: IntervalSet,
    /// The reduced word `u_k v_k^{ε_k} ⋯ u_1 v_1^{ε_1}` before conjugation.
    pub raw_word: Word,
    /// `raw_word` with a trailing variable block conjugated to the front.
    pub word: Word,
}

/// All non-empty cells `X_ε`, ordered by position in `(0,1)`.
pub fn epsilon_cells(w: &Word) -> Result<Vec<EpsilonCell>> {
    let c = w.canonical().0;
    let constants = c.segment_form().constants;
    if constants.is_empty() {
        return Err(Error::Precondition(format!("word {w} has no constants")));
    }
    let mut sets = Vec::with_capacity(constants.len());
    let mut prefix = PLMap::identity();
    for v in &constants {
        let a = prefix.invert().image(&v.map().support());
        let a0 = a.interior_complement();
        sets.push((a0, a));
        prefix = v.map().compose(&prefix);
    }
    let mut cells = Vec::new();
    let mut eps = Vec::with_capacity(constants.len());
    collect_cells(&c, &sets, IntervalSet::unit(), &mut eps, &mut cells);
    cells.sort_by(|a: &EpsilonCell, b: &EpsilonCell| a.region.intervals()[0].lo.cmp(&b.region.intervals()[0].lo));
    Ok(cells)
}

fn collect_cells(
    w: &Word,
    sets: &[(IntervalSet, IntervalSet)],
    region: IntervalSet,
    eps: &mut Vec<bool>,
    out: &mut Vec<EpsilonCell>,
) {
    let i = eps.len();
    if i == sets.len() {
        let raw_word = derived_word(w, eps);
        let word = raw_word.canonical().0;
        out.push(EpsilonCell { epsilon: eps.clone(), region, raw_word, word });
        return;
    }
    for (bit, set) in [(false, &sets[i].0), (true, &sets[i].1)] {
        let next = region.intersection(set);
        if next.is_empty() {
            continue;
        }
        eps.push(bit);
        collect_cells(w, sets, next, eps, out);
        eps.pop();
    }
}

/// Drops the constants whose `ε` is 0 and reduces.
fn derived_word(w: &Word, eps: &[bool]) -> Word {
    let k = eps.len();
    let mut idx = k;
    let mut letters = Vec::with_capacity(w.letters().len());
    for l in w.letters() {
        match l {
            Letter::Const(_) => {
                idx -= 1;
                if eps[idx] {
                    letters.push(l.clone());
                }
            }
            _ => letters.push(l.clone()),
        }
    }
    Word::new(letters, w.arity())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Oscillating,
    AlmostOscillating,
    Rigid,
}

/// What happened to a cell during the refinement.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CellStatus {
    /// The derived word reduced to the empty word.
    Trivial,
    /// The derived word is oscillating; the cell belongs to `𝒫^os`.
    Oscillating,
    /// Non-oscillating; refined at the next depth.
    Refined,
    /// Non-oscillating, left unrefined because another cell at the same
    /// depth was oscillating.
    Dropped,
}

/// A node of the refinement tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellNode {
    pub depth: usize,
    /// ε-vectors from the root down to this cell.
    pub path: Vec<Vec<bool>>,
    pub region: IntervalSet,
    pub word: Word,
    pub status: CellStatus,
}

/// A member `V` of `𝒫^os` with `O_{w_V}` and `V ∩ O_{w_V}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessCell {
    pub path: Vec<Vec<bool>>,
    pub region: IntervalSet,
    pub word: Word,
    pub word_oscillation_set: IntervalSet,
    pub restricted: IntervalSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub verdict: Verdict,
    /// `O_w` at depth 0, the union of `V ∩ O_{w_V}` over `𝒫^os` for almost
    /// oscillating words, empty for rigid ones.
    pub oscillation_set: IntervalSet,
    pub witness_cells: Vec<WitnessCell>,
    /// Depth at which the refinement stopped.
    pub depth: usize,
    pub cells: Vec<CellNode>,
    pub constants_product: PLMap,
    /// `V_w = supp(v_k ⋯ v_1)`.
    pub product_support: IntervalSet,
}

impl Classification {
    pub fn has_nontrivial_constant_product(&self) -> bool {
        !self.constants_product.is_identity()
    }
}

/// Runs the ε-cell refinement until some derived word oscillates or all
/// derived words are trivial.
pub fn classify(w: &Word) -> Result<Classification> {
    if w.is_constant() {
        return Err(Error::Precondition(format!("constant word {w} cannot be classified")));
    }
    let c = w.canonical().0;
    let (constants_product, product_support) = c.constants_product();
    let mut result = Classification {
        verdict: Verdict::Oscillating,
        oscillation_set: raw_oscillation_set(&c),
        witness_cells: Vec::new(),
        depth: 0,
        cells: Vec::new(),
        constants_product,
        product_support,
    };
    if !result.oscillation_set.is_empty() {
        return Ok(result);
    }
    struct Pending {
        path: Vec<Vec<bool>>,
        region: IntervalSet,
        word: Word,
    }
    let mut level = alloc::vec![Pending { path: Vec::new(), region: IntervalSet::unit(), word: c }];
    let mut depth = 0;
    loop {
        depth += 1;
        let mut next = Vec::new();
        for parent in &level {
            for cell in epsilon_cells(&parent.word).expect("non-oscillating words have constants") {
                let region = parent.region.intersection(&cell.region);
                if region.is_empty() {
                    continue;
                }
                let mut path = parent.path.clone();
                path.push(cell.epsilon);
                next.push(Pending { path, region, word: cell.word });
            }
        }
        let mut witnesses = Vec::new();
        for p in &next {
            if p.word.is_trivial() {
                continue;
            }
            let o = raw_oscillation_set(&p.word);
            if !o.is_empty() {
                let restricted = p.region.intersection(&o);
                witnesses.push(WitnessCell {
                    path: p.path.clone(),
                    region: p.region.clone(),
                    word: p.word.clone(),
                    word_oscillation_set: o,
                    restricted,
                });
            }
        }
        let found = !witnesses.is_empty();
        for p in &next {
            let status = if p.word.is_trivial() {
                CellStatus::Trivial
            } else if witnesses.iter().any(|wc| wc.path == p.path) {
                CellStatus::Oscillating
            } else if found {
                CellStatus::Dropped
            } else {
                CellStatus::Refined
            };
            result.cells.push(CellNode {
                depth,
                path: p.path.clone(),
                region: p.region.clone(),
                word: p.word.clone(),
                status,
            });
        }
        if found {
            result.verdict = Verdict::AlmostOscillating;
            result.oscillation_set = witnesses.iter().fold(IntervalSet::empty(), |acc, wc| acc.union(&wc.restricted));
            result.witness_cells = witnesses;
            result.depth = depth;
            return Ok(result);
        }
        level = next.into_iter().filter(|p| !p.word.is_trivial()).collect();
        if level.is_empty() {
            result.verdict = Verdict::Rigid;
            result.oscillation_set = IntervalSet::empty();
            result.depth = depth;
            return Ok(result);
        }
    }
}

/// Checks the containment property for a region against the sets
/// `v_s ⋯ v_1(O_w)`: meeting one of them implies lying inside it.
///
/// The word must end with a constant (conjugate first otherwise).
pub fn cell_condition_check(region: &IntervalSet, w: &Word) -> Result<bool> {
    if w.is_constant() {
        return Err(Error::Precondition(format!("constant word {w}")));
    }
    if !w.segment_form().trailing.is_empty() && w.has_constants() {
        return Err(Error::Precondition(format!("word {w} ends with a variable block; conjugate it first")));
    }
    let o = raw_oscillation_set(w);
    Ok(prefix_images(w, &o).iter().all(|s| region.is_disjoint(s) || s.contains_set(region)))
}

/// The cells `O_w^ε = ⋂_s (v_s ⋯ v_1(O_w))^{ε_s}` partitioning `(0,1)`.
pub fn orbit_cells(w: &Word) -> Result<Vec<IntervalSet>> {
    let c = w.canonical().0;
    if c.is_constant() {
        return Err(Error::Precondition(format!("constant word {w}")));
    }
    let o = raw_oscillation_set(&c);
    let sets: Vec<(IntervalSet, IntervalSet)> =
        prefix_images(&c, &o).into_iter().map(|s| (s.interior_complement(), s)).collect();
    let mut cells = alloc::vec![IntervalSet::unit()];
    for (s0, s1) in &sets {
        let mut next = Vec::with_capacity(cells.len() * 2);
        for cell in &cells {
            for s in [s0, s1] {
                let r = cell.intersection(s);
                if !r.is_empty() {
                    next.push(r);
                }
            }
        }
        cells = next;
    }
    Ok(cells)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse;
    use crate::interval::{rat, Interval};

    fn w(s: &str) -> Word {
        parse(s).unwrap()
    }

    fn set(items: &[(i64, i64, i64, i64)]) -> IntervalSet {
        IntervalSet::from_intervals(items.iter().map(|&(a, b, c, d)| Interval::new(rat(a, b), rat(c, d)).unwrap()))
    }

    #[test]
    fn worked_oscillation_sets() {
        let w1 = w("y1 * x1 * y1^-1 * x2 * y1^2 * x1^-1");
        assert_eq!(oscillation_set(&w1).unwrap(), set(&[(5, 8, 1, 1)]));
        let w4 = w("y1 * x1 * y1^-1 * x1^-1");
        assert_eq!(oscillation_set(&w4).unwrap(), set(&[(1, 2, 1, 1)]));
        let w5 = w("y1 * x1 * y1^-1 * x[0,1/2]_0 * y1^2 * x1^-1");
        assert!(oscillation_set(&w5).unwrap().is_empty());
        assert_eq!(oscillation_set(&w("y1 * y2")).unwrap(), IntervalSet::unit());
        assert!(oscillation_set(&w("x0")).is_err());
    }

    #[test]
    fn orbit_sets() {
        let w4 = w("y1 * x1 * y1^-1 * x1^-1");
        let half = set(&[(1, 2, 1, 1)]);
        assert_eq!(orbit_set(&w4, &half), half);
        assert!(orbit_set(&w("y1"), &half).is_empty());
        assert!(orbit_set(&w4, &IntervalSet::empty()).is_empty());
    }

    #[test]
    fn rigid_word() {
        let w3 = w("y1^-1 * x1 * y1 * x[0,1/2]_0 * y1^-1 * x1^-1 * y1 * x[0,1/2]_0^-1");
        let cells = epsilon_cells(&w3).unwrap();
        let regions: Vec<IntervalSet> = cells.iter().map(|c| c.region.clone()).collect();
        assert_eq!(regions, alloc::vec![set(&[(0, 1, 1, 2)]), set(&[(1, 2, 1, 1)])]);
        assert!(cells.iter().all(|c| c.word.is_trivial()));
        let c = classify(&w3).unwrap();
        assert_eq!(c.verdict, Verdict::Rigid);
        assert_eq!(c.depth, 1);
    }

    #[test]
    fn two_level_refinement() {
        let w2 = w("x[0,1/2]_0^-1 * y * x[1/2,1]_1^-1 * y^-1 * x[0,1/2]_1 * y * x[0,1/2]_2^-1");
        assert!(oscillation_set(&w2).unwrap().is_empty());
        let cells = epsilon_cells(&w2).unwrap();
        let regions: Vec<IntervalSet> = cells.iter().map(|c| c.region.clone()).collect();
        assert_eq!(
            regions,
            alloc::vec![
                set(&[(0, 1, 1, 4)]),
                set(&[(1, 4, 3, 8)]),
                set(&[(3, 8, 1, 2)]),
                set(&[(1, 2, 3, 4)]),
                set(&[(3, 4, 1, 1)]),
            ]
        );
        let osc: Vec<bool> = cells.iter().map(|c| is_oscillating(&c.word)).collect();
        // Under the fixed composition order the (3/8,1/2) derived word oscillates
        // on (3/8,13/32): supp(x[0,1/2]_0^-1 * x[0,1/2]_1) = (0,7/16).
        assert!(osc.iter().all(|b| *b));
        let c = classify(&w2).unwrap();
        assert_eq!(c.verdict, Verdict::AlmostOscillating);
        assert_eq!(c.depth, 1);
        assert_eq!(c.oscillation_set.regularized(), set(&[(0, 1, 13, 32), (1, 2, 1, 1)]));
    }

    #[test]
    fn unit_cell_condition() {
        let w4 = w("y1 * x1 * y1^-1 * x1^-1");
        for cell in epsilon_cells(&w4).unwrap() {
            assert!(cell_condition_check(&cell.region, &w4).unwrap());
        }
        assert!(cell_condition_check(&IntervalSet::unit(), &w("x1 * y1")).is_err());
    }
}
