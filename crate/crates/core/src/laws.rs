//! Laws with constants: words that evaluate to the identity under every
//! substitution from F.

use alloc::format;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::interval::DyadicInterval;
use crate::plmap::PLMap;
use crate::words::{Constant, Letter, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// `[w⁻, w⁺]` from two intervals.
    Lwc2,
    /// `[w₁₄, w₂₃]` from four intervals.
    Lwc4,
    /// Output of [`one_variable_reduction`].
    Reduced,
    User,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawCandidate {
    pub word: Word,
    pub provenance: Provenance,
    pub intervals: Vec<DyadicInterval>,
    pub constants: Vec<PLMap>,
    /// The two commutator factors of the factory constructions; at least one
    /// of them dies under every substitution.
    pub parts: Option<(Word, Word)>,
}

impl LawCandidate {
    pub fn user(word: Word) -> LawCandidate {
        LawCandidate { word, provenance: Provenance::User, intervals: Vec::new(), constants: Vec::new(), parts: None }
    }
}

fn check_constant(h: &PLMap, i: &DyadicInterval) -> Result<()> {
    if h.is_identity() {
        return Err(Error::Precondition("constants must be non-trivial".into()));
    }
    if !i.in_unit() {
        return Err(Error::OutOfRange(format!("interval {i} is not inside [0,1]")));
    }
    if !i.interior().contains_set(&h.support()) {
        return Err(Error::Precondition(format!("{h} is not supported in {i}")));
    }
    Ok(())
}

/// Labels `h` as `x[a,b]_n` when it is a standard generator of the interval.
fn label(h: &PLMap, i: &DyadicInterval) -> Constant {
    let closed = DyadicInterval { closed: true, ..i.clone() };
    (0..8)
        .find(|&n| PLMap::subgroup_generator(&closed, n).is_ok_and(|g| &g == h))
        .map(|n| Constant::labelled(h.clone(), format!("x[{},{}]_{n}", i.lo, i.hi)))
        .unwrap_or_else(|| Constant::new(h.clone()))
}

/// `[h^y, k] = y^-1 h^-1 y k^-1 y^-1 h y k`, or with `y^-1` in place of `y`.
fn conjugate_commutator(h: &Constant, k: &Constant, inverse: bool) -> Word {
    let y = if inverse { Word::var(1).inverse() } else { Word::var(1) };
    let hy = Word::constant(h.clone()).conjugate_by(&y);
    Word::commutator(&hy, &Word::constant(k.clone()))
}

/// `[w⁻, w⁺]` with `w⁻ = [h_1^y, h_2]` and `w⁺ = [h_1^{y^-1}, h_2]`.
pub fn law_lwc2(i1: &DyadicInterval, i2: &DyadicInterval, h1: &PLMap, h2: &PLMap) -> Result<LawCandidate> {
    if i1.lo >= i2.lo {
        return Err(Error::Precondition(format!("{i1} must start left of {i2}")));
    }
    if i1.hi > i2.lo {
        return Err(Error::Precondition(format!("{i1} and {i2} overlap")));
    }
    check_constant(h1, i1)?;
    check_constant(h2, i2)?;
    let (c1, c2) = (label(h1, i1), label(h2, i2));
    let minus = conjugate_commutator(&c1, &c2, false);
    let plus = conjugate_commutator(&c1, &c2, true);
    Ok(LawCandidate {
        word: Word::commutator(&minus, &plus),
        provenance: Provenance::Lwc2,
        intervals: alloc::vec![i1.clone(), i2.clone()],
        constants: alloc::vec![h1.clone(), h2.clone()],
        parts: Some((minus, plus)),
    })
}

/// `[w₁₄, w₂₃]` with `w₁₄ = [h_1^y, h_4]` and `w₂₃ = [h_2^y, h_3]`.
pub fn law_lwc4(intervals: &[DyadicInterval; 4], hs: &[PLMap; 4]) -> Result<LawCandidate> {
    for pair in intervals.windows(2) {
        if pair[0].hi >= pair[1].lo {
            return Err(Error::Precondition(format!("{} and {} are not disjoint and ordered", pair[0], pair[1])));
        }
    }
    for (h, i) in hs.iter().zip(intervals) {
        check_constant(h, i)?;
    }
    let cs: Vec<Constant> = hs.iter().zip(intervals).map(|(h, i)| label(h, i)).collect();
    let w14 = conjugate_commutator(&cs[0], &cs[3], false);
    let w23 = conjugate_commutator(&cs[1], &cs[2], false);
    Ok(LawCandidate {
        word: Word::commutator(&w14, &w23),
        provenance: Provenance::Lwc4,
        intervals: intervals.to_vec(),
        constants: hs.to_vec(),
        parts: Some((w14, w23)),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LawVerdict {
    /// Identity on every tested tuple.
    Pass { tested: usize },
    /// A tuple, as words over `x0, x1`, on which the candidate is not the identity.
    Fail { counterexample: Vec<Word>, values: Vec<PLMap> },
}

impl LawVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, LawVerdict::Pass { .. })
    }
}

/// Generator letters `x0, x0^-1, x1, x1^-1`.
fn alphabet() -> [(Letter, PLMap); 4] {
    let x0 = Constant::labelled(PLMap::generator(0), "x0");
    let x1 = Constant::labelled(PLMap::generator(1), "x1");
    [
        (Letter::Const(x0.clone()), x0.map().clone()),
        (Letter::Const(x0.inverse()), x0.map().invert()),
        (Letter::Const(x1.clone()), x1.map().clone()),
        (Letter::Const(x1.inverse()), x1.map().invert()),
    ]
}

/// Every freely reduced word over `x0^±1, x1^±1` of length at most `len`,
/// with its value, shortest first.
pub fn generator_words(len: usize) -> Vec<(Vec<usize>, PLMap)> {
    let alpha = alphabet();
    let mut out = alloc::vec![(Vec::new(), PLMap::identity())];
    let mut start = 0;
    for _ in 0..len {
        let end = out.len();
        for i in start..end {
            for (a, (_, m)) in alpha.iter().enumerate() {
                if out[i].0.last().is_some_and(|&b| b ^ 1 == a) {
                    continue;
                }
                let mut w = out[i].0.clone();
                w.push(a);
                let v = out[i].1.compose(m);
                out.push((w, v));
            }
        }
        start = end;
    }
    out
}

fn letters_to_word(idx: &[usize]) -> Word {
    let alpha = alphabet();
    Word::new(idx.iter().map(|&a| alpha[a].0.clone()).collect(), 1)
}

/// Tests `w(ḡ) = 1` on all tuples of reduced generator words of total
/// length at most `exhaustive_len`, then on `samples` seeded random tuples of
/// words of length 1 to 32.
pub fn check_law(candidate: &Word, exhaustive_len: usize, samples: usize, seed: u64) -> Result<LawVerdict> {
    if candidate.is_constant() || !candidate.has_constants() {
        return Err(Error::Precondition(format!("{candidate} needs at least one variable and one constant")));
    }
    let t = candidate.arity() as usize;
    let words = generator_words(exhaustive_len);
    let mut tested = 0;
    let mut tuple: Vec<usize> = alloc::vec![0; t];
    let mut fail = None;
    let eval = |idx: &[usize], tested: &mut usize| -> Option<LawVerdict> {
        *tested += 1;
        let args: Vec<PLMap> = idx.iter().map(|&i| words[i].1.clone()).collect();
        let inverses: Vec<PLMap> = args.iter().map(PLMap::invert).collect();
        if candidate.evaluate_with(&args, &inverses).is_identity() {
            return None;
        }
        let counterexample = idx.iter().map(|&i| letters_to_word(&words[i].0)).collect();
        Some(LawVerdict::Fail { counterexample, values: args })
    };
    // Odometer over tuples with total length bounded.
    'outer: loop {
        let total: usize = tuple.iter().map(|&i| words[i].0.len()).sum();
        if total <= exhaustive_len {
            if let Some(v) = eval(&tuple, &mut tested) {
                fail = Some(v);
                break;
            }
        }
        let mut pos = 0;
        loop {
            if pos == t {
                break 'outer;
            }
            tuple[pos] += 1;
            if tuple[pos] < words.len() {
                break;
            }
            tuple[pos] = 0;
            pos += 1;
        }
    }
    if let Some(v) = fail {
        return Ok(v);
    }
    let alpha = alphabet();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let mut idx_words = Vec::with_capacity(t);
        let mut args = Vec::with_capacity(t);
        for _ in 0..t {
            let len = rng.gen_range(1..=32);
            let idx: Vec<usize> = (0..len).map(|_| rng.gen_range(0..4)).collect();
            let v = idx.iter().fold(PLMap::identity(), |acc, &a| acc.compose(&alpha[a].1));
            idx_words.push(idx);
            args.push(v);
        }
        tested += 1;
        if !candidate.substitute(&args)?.is_identity() {
            let counterexample = idx_words.iter().map(|i| letters_to_word(i)).collect();
            return Ok(LawVerdict::Fail { counterexample, values: args });
        }
    }
    Ok(LawVerdict::Pass { tested })
}

/// Turns a law in several variables into a one-variable law.
///
/// The variables are replaced by `y_2^-i y_1 y_2^i`, which generate a free
/// subgroup. Writing `x = y_1`, `y = y_2`, the maximal subwords free of `y`
/// that contain `x` are collected; if some `a` in `pool` makes all of them
/// non-trivial, the result is `w(a, y)`. Otherwise the nested commutator
/// `[[v_1, v_2^{a_2}], …, v_k^{a_k}]` with pool elements `a_j` keeping every
/// stage non-constant is returned.
pub fn one_variable_reduction(candidate: &Word, pool: &[PLMap]) -> Result<LawCandidate> {
    let vars = candidate.variables();
    let wrap = |word: Word| LawCandidate {
        word,
        provenance: Provenance::Reduced,
        intervals: Vec::new(),
        constants: Vec::new(),
        parts: None,
    };
    if vars.len() <= 1 {
        let mut args: Vec<Word> = (0..candidate.arity()).map(|_| Word::var(1)).collect();
        if args.is_empty() {
            args.push(Word::var(1));
        }
        return Ok(wrap(candidate.substitute_words(&args)?.with_arity(1)));
    }
    let x = Word::var(1);
    let y = Word::var(2);
    let free: Vec<Word> = (1..=candidate.arity() as i64).map(|i| x.conjugate_by(&y.pow(i))).collect();
    let two = candidate.substitute_words(&free)?;

    let mut segments: Vec<Word> = Vec::new();
    let mut current: Vec<Letter> = Vec::new();
    let flush = |current: &mut Vec<Letter>, segments: &mut Vec<Word>| {
        if current.iter().any(|l| matches!(l, Letter::Var { index: 1, .. })) {
            segments.push(Word::new(core::mem::take(current), 1));
        }
        current.clear();
    };
    for l in two.letters() {
        if matches!(l, Letter::Var { index: 2, .. }) {
            flush(&mut current, &mut segments);
        } else {
            current.push(l.clone());
        }
    }
    flush(&mut current, &mut segments);
    if segments.is_empty() {
        return Ok(wrap(two.substitute_words(&[Word::empty(1), Word::var(1)])?.with_arity(1)));
    }
    if !two.letters().iter().any(|l| matches!(l, Letter::Var { index: 2, .. })) {
        return Ok(wrap(two.with_arity(1)));
    }

    for a in pool {
        let nontrivial = segments.iter().all(|v| v.substitute(core::slice::from_ref(a)).is_ok_and(|m| !m.is_identity()));
        if nontrivial {
            let w = two.substitute_words(&[Word::constant(Constant::new(a.clone())), Word::var(1)])?;
            if !w.is_constant() {
                return Ok(wrap(w.with_arity(1)));
            }
        }
    }
    let mut stack = segments[0].clone();
    for (j, v) in segments.iter().enumerate().skip(1) {
        let next = pool
            .iter()
            .map(|a| Word::commutator(&stack, &v.conjugate_by(&Word::constant(Constant::new(a.clone())))))
            .find(|w| !w.is_constant())
            .ok_or_else(|| Error::SearchExhausted(format!("no pool element keeps commutator stage {} non-constant", j + 1)))?;
        stack = next;
    }
    Ok(wrap(stack))
}
