//! Constructive solutions of inequalities `w ≠ 1` over F.
//!
//! [`solve_single`] follows the inductive point-tracking construction for
//! oscillating words: a dyadic point `p` is pushed through the word letter by
//! letter, and whenever its image collides with an earlier tracked point one
//! variable is corrected by a power of `x_{[c,d],0}` supported in a small
//! neighbourhood. [`solve_system`] separates several words by disjoint balls
//! and composes single solutions. Every result is re-checked by substitution.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::interval::{point, DyadicInterval, IntervalSet, Point};
use crate::oscillation::{classify, oscillation_set, orbit_set, prefix_images, Verdict};
use crate::plmap::PLMap;
use crate::words::{Step, Word};

/// Which side of a variable a correction was composed on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `g := g ∘ f`; the correction acts before `g`.
    Before,
    /// `g := f ∘ g`.
    After,
}

/// One correction `g_variable := g_variable ∘ f` (or `f ∘ g_variable`) with
/// `f = x_{interval,0}^power`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Correction {
    /// Index into the acting-order step list.
    pub step: usize,
    pub variable: u32,
    pub interval: DyadicInterval,
    pub power: i64,
    pub side: Side,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub tuple: Vec<PLMap>,
    /// The word the point-tracking ran on: the canonical conjugate of the
    /// input, or a derived word for almost oscillating input.
    pub solved: Word,
    pub region: DyadicInterval,
    pub point: Dyadic,
    /// `p` followed by its image after every step of `solved`.
    pub trace: Vec<Dyadic>,
    pub corrections: Vec<Correction>,
}

/// Solves `w ≠ 1` with supports inside `𝒱_w(region) ∪ region`.
///
/// `region` must lie inside `O_w`, or for almost oscillating words inside
/// `V ∩ O_{w_V}` for a cell `V` of the refinement.
pub fn solve_single(w: &Word, region: &DyadicInterval) -> Result<Witness> {
    if w.is_constant() {
        return Err(Error::Precondition(format!("constant word {w}")));
    }
    check_region(region)?;
    let c = w.canonical().0;
    if c.is_constant() {
        // A conjugate of a non-trivial constant never vanishes.
        return Ok(Witness {
            tuple: alloc::vec![PLMap::identity(); w.arity() as usize],
            solved: c,
            region: region.clone(),
            point: region.midpoint(),
            trace: Vec::new(),
            corrections: Vec::new(),
        });
    }
    let open = region.interior();
    if oscillation_set(&c)?.contains_set(&open) {
        return solve_point_tracking(&c, region, &[], w);
    }
    let cls = classify(&c)?;
    match cls.verdict {
        Verdict::AlmostOscillating => {
            for cell in &cls.witness_cells {
                if cell.restricted.contains_set(&open) {
                    let extra = lifting_sets(&c, &cell.region);
                    return solve_point_tracking(&cell.word, region, &extra, w);
                }
            }
            Err(Error::Precondition(format!("region {region} is not inside the oscillation set of {w}")))
        }
        Verdict::Rigid if !cls.has_nontrivial_constant_product() => {
            Err(Error::Unsolvable(format!("{w} is rigid with trivial product of constants")))
        }
        _ => Err(Error::Precondition(format!("region {region} is not inside the oscillation set of {w}"))),
    }
}

fn check_region(region: &DyadicInterval) -> Result<()> {
    if !region.in_unit() {
        return Err(Error::OutOfRange(format!("region {region} is not inside [0,1]")));
    }
    Ok(())
}

/// `U, v_1(U), v_2 v_1(U), …` for the original constants: the sets a
/// derived-word solution has to stabilize to lift back.
fn lifting_sets(w: &Word, cell: &IntervalSet) -> Vec<IntervalSet> {
    let mut sets = alloc::vec![cell.clone()];
    sets.extend(prefix_images(w, cell));
    sets
}

/// Dyadic points of an open set, coarsest first.
pub fn dyadic_points(set: &IntervalSet, limit: usize) -> Vec<Dyadic> {
    let mut out = Vec::new();
    for k in 0u32..64 {
        for iv in set.intervals() {
            let mut x = Dyadic::floor_at(&iv.lo, k) + Dyadic::pow2(-(k as i64));
            while point(&x) < iv.hi {
                if x.exponent() == k {
                    out.push(x.clone());
                    if out.len() >= limit {
                        return out;
                    }
                }
                x = x + Dyadic::pow2(-(k as i64));
            }
        }
    }
    out
}

fn solve_point_tracking(solved: &Word, region: &DyadicInterval, extra: &[IntervalSet], original: &Word) -> Result<Witness> {
    let open = region.interior();
    let primary = if solved.has_constants() { prefix_images(solved, &open) } else { alloc::vec![open.clone()] };
    let mut sets = primary.clone();
    sets.extend(extra.iter().cloned());
    let tracker = Tracker { steps: solved.steps(), primary: &primary, sets: &sets, arity: original.arity().max(solved.arity()) };
    let retries = solved.letter_count() + 1;
    for p in dyadic_points(&open, retries) {
        let Some((tuple, trace, corrections)) = tracker.attempt(&p) else {
            continue;
        };
        let tuple: Vec<PLMap> = tuple.into_iter().take(original.arity() as usize).collect();
        if !original.substitute(&tuple)?.is_identity() {
            return Ok(Witness { tuple, solved: solved.clone(), region: region.clone(), point: p, trace, corrections });
        }
    }
    Err(Error::SearchExhausted(format!("no starting point in {region} gave a solution of {original} after {retries} tries")))
}

struct Tracker<'a> {
    steps: Vec<Step<'a>>,
    primary: &'a [IntervalSet],
    sets: &'a [IntervalSet],
    arity: u32,
}

impl Tracker<'_> {
    fn run(&self, g: &[PLMap], ginv: &[PLMap], p: &Dyadic, upto: usize) -> Vec<Dyadic> {
        let mut pts = Vec::with_capacity(upto + 1);
        pts.push(p.clone());
        let mut cur = p.clone();
        for step in &self.steps[..upto] {
            cur = match step {
                Step::Var { index, inverse: false } => g[*index as usize - 1].apply(&cur),
                Step::Var { index, inverse: true } => ginv[*index as usize - 1].apply(&cur),
                Step::Const(c) => c.map().apply(&cur),
            };
            pts.push(cur.clone());
        }
        pts
    }

    fn attempt(&self, p: &Dyadic) -> Option<(Vec<PLMap>, Vec<Dyadic>, Vec<Correction>)> {
        let t = self.arity as usize;
        let mut g = alloc::vec![PLMap::identity(); t];
        let mut ginv = g.clone();
        let mut corrections = Vec::new();
        for n in 0..self.steps.len() {
            let pts = self.run(&g, &ginv, p, n + 1);
            if distinct(&pts) {
                continue;
            }
            // Correct the current variable before it acts, or for a constant
            // step the variable that produced its input.
            let (at, index, inverse, side_if_direct) = match &self.steps[n] {
                Step::Var { index, inverse } => (n, *index, *inverse, Side::Before),
                Step::Const(_) => match self.steps[..n].last() {
                    Some(Step::Var { index, inverse }) => (n - 1, *index, *inverse, Side::After),
                    _ => return None,
                },
            };
            let q = &pts[n];
            let others: Vec<&Dyadic> = pts[..n].iter().collect();
            let interval = neighbourhood(q, self.primary, self.sets, &others)?;
            let f = PLMap::subgroup_generator(&interval, 0).expect("closed dyadic interval");
            let cap = 2 * pts.len() + 1;
            let i = index as usize - 1;
            let mut fixed = false;
            for m in 1..=cap as i64 {
                let fm = f.pow(m);
                // With inverse letters the correction goes on the other side
                // of g so that it still acts on q.
                let (side, new_g) = match (side_if_direct, inverse) {
                    (Side::Before, false) => (Side::Before, g[i].compose(&fm)),
                    (Side::Before, true) => (Side::After, fm.invert().compose(&g[i])),
                    (Side::After, false) => (Side::After, fm.compose(&g[i])),
                    (Side::After, true) => (Side::Before, g[i].compose(&fm.invert())),
                };
                let mut g2 = g.clone();
                let mut ginv2 = ginv.clone();
                ginv2[i] = new_g.invert();
                g2[i] = new_g;
                if distinct(&self.run(&g2, &ginv2, p, n + 1)) {
                    g = g2;
                    ginv = ginv2;
                    let power = if inverse { -m } else { m };
                    corrections.push(Correction { step: at, variable: index, interval: interval.clone(), power, side });
                    fixed = true;
                    break;
                }
            }
            if !fixed {
                return None;
            }
        }
        let trace = self.run(&g, &ginv, p, self.steps.len());
        distinct(&trace).then_some((g, trace, corrections))
    }
}

fn distinct(pts: &[Dyadic]) -> bool {
    let set: BTreeSet<&Dyadic> = pts.iter().collect();
    set.len() == pts.len()
}

/// A closed dyadic interval around `q` avoiding `others`, inside every set
/// of `sets` containing `q` and away from the closure of the rest. `q` must
/// lie in one of the `primary` sets and on no boundary.
fn neighbourhood(q: &Dyadic, primary: &[IntervalSet], sets: &[IntervalSet], others: &[&Dyadic]) -> Option<DyadicInterval> {
    let qp = point(q);
    if !primary.iter().any(|s| s.contains_point(&qp)) {
        return None;
    }
    let mut lo = Point::from_integer(0.into());
    let mut hi = Point::from_integer(1.into());
    for s in sets {
        if let Some(c) = s.component(&qp) {
            lo = lo.max(c.lo.clone());
            hi = hi.min(c.hi.clone());
        } else if s.closure_contains(&qp) {
            return None;
        } else {
            for iv in s.intervals() {
                if iv.hi <= qp {
                    lo = lo.max(iv.hi.clone());
                } else if iv.lo >= qp {
                    hi = hi.min(iv.lo.clone());
                }
            }
        }
    }
    for y in others {
        let yp = point(y);
        if yp < qp {
            lo = lo.max(yp);
        } else if yp > qp {
            hi = hi.min(yp);
        }
    }
    let mut r = Dyadic::pow2(-(q.exponent() as i64) - 1);
    loop {
        let (c, d) = (q - &r, q + &r);
        if point(&c) > lo && point(&d) < hi {
            return DyadicInterval::closed(c, d).ok();
        }
        r = r.half();
    }
}

/// How one word of a system is made non-trivial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Route {
    /// The constants product moves the ball; the tuple stays trivial there.
    ConstantsProduct,
    Oscillating,
    /// Solved through the derived word of a refinement cell.
    AlmostOscillating { cell: IntervalSet, derived: Word },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ball {
    pub interval: DyadicInterval,
    /// `B ∪ 𝒱_w(B)`, plus the derived word's orbit for almost oscillating words.
    pub footprint: IntervalSet,
    pub route: Route,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemWitness {
    pub tuple: Vec<PLMap>,
    pub balls: Vec<Ball>,
    /// Point-tracking witnesses, `None` for the constants-product route.
    pub witnesses: Vec<Option<Witness>>,
}

struct Plan {
    canonical: Word,
    route: Route,
    target: IntervalSet,
}

fn plan(w: &Word, region: Option<&IntervalSet>) -> Result<Plan> {
    if w.is_constant() {
        return Err(Error::Precondition(format!("constant word {w}")));
    }
    let c = w.canonical().0;
    let restrict = |s: IntervalSet| match region {
        Some(r) => s.intersection(r),
        None => s,
    };
    let (product, support) = c.constants_product();
    let mut candidates = Vec::new();
    if !product.is_identity() {
        candidates.push((Route::ConstantsProduct, restrict(support)));
    }
    let o = oscillation_set(&c)?;
    if !o.is_empty() {
        candidates.push((Route::Oscillating, restrict(o)));
    } else {
        let cls = classify(&c)?;
        if cls.verdict == Verdict::AlmostOscillating {
            for cell in &cls.witness_cells {
                let route = Route::AlmostOscillating { cell: cell.region.clone(), derived: cell.word.clone() };
                candidates.push((route, restrict(cell.restricted.clone())));
            }
        }
    }
    if candidates.is_empty() {
        return Err(Error::Unsolvable(format!("{w} is rigid with trivial product of constants")));
    }
    candidates
        .into_iter()
        .find(|(_, t)| !t.is_empty())
        .map(|(route, target)| Plan { canonical: c, route, target })
        .ok_or_else(|| Error::Precondition(format!("the given region misses every usable set of {w}")))
}

impl Plan {
    fn footprint(&self, b: &IntervalSet) -> IntervalSet {
        let mut f = b.union(&orbit_set(&self.canonical, b));
        if let Route::AlmostOscillating { derived, .. } = &self.route {
            f = f.union(&orbit_set(derived, b));
        }
        f
    }

    fn orbit_points(&self, p: &Dyadic) -> Vec<Dyadic> {
        let mut out = alloc::vec![p.clone()];
        let mut words = alloc::vec![&self.canonical];
        if let Route::AlmostOscillating { derived, .. } = &self.route {
            words.push(derived);
        }
        for w in words {
            let mut cur = p.clone();
            for v in w.segment_form().constants {
                cur = v.map().apply(&cur);
                out.push(cur.clone());
            }
        }
        out
    }
}

/// Solves `w_1 ≠ 1, …, w_m ≠ 1` at once; `regions[j]`, if given, restricts
/// where the ball of `w_j` may sit.
pub fn solve_system(ws: &[Word], regions: Option<&[IntervalSet]>) -> Result<SystemWitness> {
    let arity = ws.iter().map(Word::arity).max().unwrap_or(1);
    if let Some(r) = regions {
        if r.len() != ws.len() {
            return Err(Error::Arity { expected: ws.len(), got: r.len() });
        }
    }
    let plans: Vec<Plan> =
        ws.iter().enumerate().map(|(j, w)| plan(w, regions.map(|r| &r[j]))).collect::<Result<_>>()?;

    // Centers with pairwise disjoint orbit points, then a common radius small
    // enough for disjoint footprints.
    let mut used: BTreeSet<Dyadic> = BTreeSet::new();
    let mut centers = Vec::with_capacity(plans.len());
    for (j, pl) in plans.iter().enumerate() {
        let c = dyadic_points(&pl.target, 4096)
            .into_iter()
            .find(|c| !pl.orbit_points(c).iter().any(|x| used.contains(x)))
            .ok_or_else(|| Error::SearchExhausted(format!("no separated center for word {}", j + 1)))?;
        used.extend(pl.orbit_points(&c));
        centers.push(c);
    }
    let mut balls = None;
    for m in 1..=256i64 {
        let r = Dyadic::pow2(-m);
        let ivs: Vec<DyadicInterval> = centers
            .iter()
            .map(|c| DyadicInterval::open(c - &r, c + &r).expect("positive radius"))
            .collect();
        if !ivs.iter().zip(&plans).all(|(b, pl)| pl.target.contains_set(&b.interior())) {
            continue;
        }
        let feet: Vec<IntervalSet> = ivs.iter().zip(&plans).map(|(b, pl)| pl.footprint(&b.interior())).collect();
        let separated = (0..feet.len()).all(|a| (a + 1..feet.len()).all(|b| feet[a].is_disjoint(&feet[b])));
        if separated {
            balls = Some((ivs, feet));
            break;
        }
    }
    let (ivs, feet) = balls.ok_or_else(|| Error::SearchExhausted("balls could not be separated".into()))?;

    let mut tuple = alloc::vec![PLMap::identity(); arity as usize];
    let mut witnesses = Vec::with_capacity(ws.len());
    let mut out_balls = Vec::with_capacity(ws.len());
    for ((pl, b), foot) in plans.into_iter().zip(ivs).zip(feet) {
        let witness = match &pl.route {
            Route::ConstantsProduct => None,
            Route::Oscillating => Some(solve_point_tracking(&pl.canonical, &b, &[], &pl.canonical)?),
            Route::AlmostOscillating { cell, derived } => {
                let extra = lifting_sets(&pl.canonical, cell);
                Some(solve_point_tracking(derived, &b, &extra, &pl.canonical)?)
            }
        };
        if let Some(wt) = &witness {
            for (g, f) in tuple.iter_mut().zip(&wt.tuple) {
                *g = f.compose(g);
            }
        }
        witnesses.push(witness);
        out_balls.push(Ball { interval: b, footprint: foot, route: pl.route });
    }
    for w in ws {
        let args: Vec<PLMap> = tuple[..w.arity() as usize].to_vec();
        if w.substitute(&args)?.is_identity() {
            return Err(Error::SearchExhausted(format!("combined tuple does not solve {w}")));
        }
    }
    Ok(SystemWitness { tuple, balls: out_balls, witnesses })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupWitness {
    pub tuple: Vec<PLMap>,
    pub interval: DyadicInterval,
    /// Per word, the point moved by the constants product.
    pub points: Vec<Dyadic>,
}

/// Solves the system with `g_i = embed(h_i, U)` for a dyadic `U` missing
/// every constant-prefix image of the tracked points.
pub fn solve_with_subgroup(ws: &[Word], h_gens: &[PLMap]) -> Result<SubgroupWitness> {
    let arity = ws.iter().map(Word::arity).max().unwrap_or(1) as usize;
    if h_gens.len() < arity {
        return Err(Error::Arity { expected: arity, got: h_gens.len() });
    }
    let mut points = Vec::with_capacity(ws.len());
    let mut avoid: BTreeSet<Dyadic> = BTreeSet::new();
    for w in ws {
        let c = w.canonical().0;
        let (product, support) = c.constants_product();
        if w.is_constant() || product.is_identity() {
            return Err(Error::Precondition(format!("{w} does not have non-trivial product of constants")));
        }
        let p = dyadic_points(&support, 1).pop().expect("non-empty support");
        let mut cur = p.clone();
        avoid.insert(cur.clone());
        for v in c.segment_form().constants {
            cur = v.map().apply(&cur);
            avoid.insert(cur.clone());
        }
        points.push(p);
    }
    let mut cuts: Vec<Dyadic> = alloc::vec![Dyadic::zero()];
    cuts.extend(avoid);
    cuts.push(Dyadic::one());
    let (a, b) = cuts
        .windows(2)
        .map(|w| (w[0].clone(), w[1].clone()))
        .max_by(|x, y| (&x.1 - &x.0).cmp(&(&y.1 - &y.0)))
        .expect("at least two cut points");
    let gap = IntervalSet::from_dyadic(&a, &b);
    let mid = dyadic_points(&gap, 1).pop().expect("non-empty gap");
    let mut r = Dyadic::pow2(-(mid.exponent() as i64) - 1);
    while &mid - &r <= a || &mid + &r >= b {
        r = r.half();
    }
    let interval = DyadicInterval::closed(&mid - &r, &mid + &r)?;
    let tuple: Vec<PLMap> = h_gens.iter().map(|h| h.embed(&interval)).collect::<Result<_>>()?;
    for w in ws {
        if w.substitute(&tuple[..w.arity() as usize])?.is_identity() {
            return Err(Error::SearchExhausted(format!("embedded tuple does not solve {w}")));
        }
    }
    Ok(SubgroupWitness { tuple, interval, points })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HnnTerm {
    pub g: PLMap,
    /// `N` with `supp(z_i) ⊆ [0, 1-2^-N]` and `supp(g) ⊆ (1-2^-N, 1)`.
    pub exponent: u32,
}

/// The `n`-th element of a sequence converging to the HNN extension of F
/// over the subgroup of elements trivial near 1.
///
/// `z_pool` enumerates that subgroup and `w_pool` one-variable words whose
/// constants are all outside it; `membership` decides the subgroup.
pub fn hnn_sequence(n: usize, membership: &dyn Fn(&PLMap) -> bool, z_pool: &[PLMap], w_pool: &[Word]) -> Result<HnnTerm> {
    if n == 0 {
        return Ok(HnnTerm { g: PLMap::identity(), exponent: 0 });
    }
    if z_pool.len() < n || w_pool.len() < n {
        return Err(Error::Precondition(format!("pools are shorter than {n}")));
    }
    let zs = &z_pool[..n];
    let ws = &w_pool[..n];
    for z in zs {
        if !membership(z) || !z.trivial_near_one() {
            return Err(Error::Precondition(format!("{z} is not in the subgroup")));
        }
    }
    for w in ws {
        if w.is_constant() || w.arity() != 1 {
            return Err(Error::Precondition(format!("{w} must be a non-constant one-variable word")));
        }
        for v in w.segment_form().constants {
            if membership(v.map()) || v.map().trivial_near_one() {
                return Err(Error::Precondition(format!("{w} has a constant inside the subgroup")));
            }
        }
    }
    let near_one = |k: u32| IntervalSet::from_dyadic(&(Dyadic::one() - Dyadic::pow2(-(k as i64))), &Dyadic::one());
    let canon: Vec<Word> = ws.iter().map(|w| w.canonical().0).collect();
    let oscs: Vec<IntervalSet> = canon.iter().map(oscillation_set).collect::<Result<_>>()?;
    let mut big_n = 1u32;
    loop {
        let tail = near_one(big_n);
        let clear = zs.iter().all(|z| z.support().is_disjoint(&tail));
        if clear && oscs.iter().all(|o| o.contains_set(&tail)) {
            break;
        }
        big_n += 1;
        if big_n > 4096 {
            return Err(Error::SearchExhausted("no neighbourhood of 1 fits the pools".into()));
        }
    }
    let tail = near_one(big_n);
    let mut regions = Vec::with_capacity(n);
    for w in &canon {
        let mut k = big_n;
        while !tail.contains_set(&near_one(k).union(&orbit_set(w, &near_one(k)))) {
            k += 1;
        }
        regions.push(near_one(k));
    }
    let sys = solve_system(ws, Some(&regions))?;
    Ok(HnnTerm { g: sys.tuple.into_iter().next().expect("arity one"), exponent: big_n })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse;

    fn w(s: &str) -> Word {
        parse(s).unwrap()
    }

    fn iv(s: &str) -> DyadicInterval {
        s.parse().unwrap()
    }

    fn stabilizes(g: &PLMap, s: &IntervalSet) -> bool {
        g.image(s) == *s
    }

    #[test]
    fn commutator_with_x1() {
        let w4 = w("y1 * x1 * y1^-1 * x1^-1");
        let wt = solve_single(&w4, &iv("(1/2,1)")).unwrap();
        let g = &wt.tuple[0];
        assert!(!PLMap::commutator(g, &PLMap::generator(1)).is_identity());
        let region = iv("(1/2,1)").interior();
        let allowed = region.union(&orbit_set(&w4.canonical().0, &region));
        assert!(allowed.contains_set(&g.support()));
        for s in prefix_images(&w4.canonical().0, &region) {
            assert!(stabilizes(g, &s));
        }
        assert!(distinct(&wt.trace));
    }

    #[test]
    fn oscillating_example_word() {
        let w1 = w("y1 * x1 * y1^-1 * x2 * y1^2 * x1^-1");
        let wt = solve_single(&w1, &iv("(5/8,1)")).unwrap();
        assert!(!w1.substitute(&wt.tuple).unwrap().is_identity());
    }

    #[test]
    fn pure_variable_word() {
        let wt = solve_single(&w("y1"), &iv("(0,1)")).unwrap();
        assert!(!wt.tuple[0].is_identity());
        let wt = solve_single(&w("comm(y1, y2)"), &iv("(1/4,1/2)")).unwrap();
        assert!(!w("comm(y1, y2)").substitute(&wt.tuple).unwrap().is_identity());
        assert!(iv("(1/4,1/2)").interior().contains_set(&wt.tuple[0].support()));
    }

    #[test]
    fn conjugate_of_a_constant() {
        let wt = solve_single(&w("y1^-1 * x1^-1 * y1"), &iv("(1/2,1)")).unwrap();
        assert!(!w("y1^-1 * x1^-1 * y1").substitute(&wt.tuple).unwrap().is_identity());
    }

    #[test]
    fn region_outside_oscillation_set() {
        let w4 = w("y1 * x1 * y1^-1 * x1^-1");
        assert!(matches!(solve_single(&w4, &iv("(1/4,1/2)")), Err(Error::Precondition(_))));
        let w3 = w("y1^-1 * x1 * y1 * x[0,1/2]_0 * y1^-1 * x1^-1 * y1 * x[0,1/2]_0^-1");
        assert!(matches!(solve_single(&w3, &iv("(0,1)")), Err(Error::Unsolvable(_))));
    }

    #[test]
    fn systems() {
        let w4 = w("y1 * x1 * y1^-1 * x1^-1");
        let w1 = w("y1 * x1 * y1^-1 * x2 * y1^2 * x1^-1");
        let w5 = w("y1 * x1 * y1^-1 * x[0,1/2]_0 * y1^2 * x1^-1");
        let sys = solve_system(&[w4.clone(), w1.clone(), w5.clone()], None).unwrap();
        for word in [&w4, &w1, &w5] {
            assert!(!word.substitute(&sys.tuple).unwrap().is_identity());
        }
        assert_eq!(sys.balls[2].route, Route::ConstantsProduct);
        for a in 0..3 {
            for b in a + 1..3 {
                assert!(sys.balls[a].footprint.is_disjoint(&sys.balls[b].footprint));
            }
        }
        let empty = solve_system(&[], None).unwrap();
        assert!(empty.tuple.iter().all(PLMap::is_identity));
    }

    #[test]
    fn almost_oscillating_system() {
        let w2 = w("x[0,1/2]_0^-1 * y * x[1/2,1]_1^-1 * y^-1 * x[0,1/2]_1 * y * x[0,1/2]_2^-1");
        let sys = solve_system(core::slice::from_ref(&w2), None).unwrap();
        assert!(!w2.substitute(&sys.tuple).unwrap().is_identity());
    }

    #[test]
    fn subgroup_embedding() {
        let w5 = w("y1 * x1 * y1^-1 * x[0,1/2]_0 * y1^2 * x1^-1");
        let s = solve_with_subgroup(core::slice::from_ref(&w5), &[PLMap::generator(0), PLMap::generator(1)]).unwrap();
        assert_eq!(s.tuple[0], PLMap::generator(0).embed(&s.interval).unwrap());
        let s = solve_with_subgroup(&[w5], &[PLMap::identity()]).unwrap();
        assert!(s.tuple[0].is_identity());
        assert!(solve_with_subgroup(&[w("y1 * x1 * y1^-1 * x1^-1")], &[PLMap::generator(0)]).is_err());
    }

    #[test]
    fn hnn_first_term() {
        let z = PLMap::subgroup_generator(&iv("[0,1/2]"), 0).unwrap();
        let member = |f: &PLMap| f.trivial_near_one();
        let t = hnn_sequence(1, &member, core::slice::from_ref(&z), &[w("comm(y1, x0)")]).unwrap();
        assert!(PLMap::commutator(&t.g, &z).is_identity());
        assert!(!PLMap::commutator(&t.g, &PLMap::generator(0)).is_identity());
        let tail = IntervalSet::from_dyadic(&(Dyadic::one() - Dyadic::pow2(-(t.exponent as i64))), &Dyadic::one());
        assert!(tail.contains_set(&t.g.support()));
        assert!(hnn_sequence(0, &member, &[], &[]).unwrap().g.is_identity());
        assert!(hnn_sequence(1, &member, &[PLMap::generator(0)], &[w("comm(y1, x0)")]).is_err());
    }
}
