//! Words with constants: elements of the free product of a free group on
//! `y_1, …, y_t` with F.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::hash::{Hash, Hasher};

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::interval::IntervalSet;
use crate::normal_form::NormalForm;
use crate::plmap::PLMap;

/// A non-identity element of F appearing in a word, with an optional
/// DSL label used when printing.
///
/// The label is a product of DSL atoms with exponents; it always evaluates
/// to the stored map. Equality ignores the label.
#[derive(Clone)]
pub struct Constant {
    map: PLMap,
    label: Option<Vec<(String, i64)>>,
}

impl Constant {
    pub fn new(map: PLMap) -> Self {
        Constant { map, label: None }
    }

    /// A constant printed as the given DSL atom.
    pub fn labelled(map: PLMap, atom: impl Into<String>) -> Self {
        Constant { map, label: Some(alloc::vec![(atom.into(), 1)]) }
    }

    pub fn map(&self) -> &PLMap {
        &self.map
    }

    pub fn into_map(self) -> PLMap {
        self.map
    }

    pub fn inverse(&self) -> Constant {
        Constant {
            map: self.map.invert(),
            label: self.label.as_ref().map(|l| l.iter().rev().map(|(a, p)| (a.clone(), -p)).collect()),
        }
    }

    /// `self ∘ other`.
    pub fn times(&self, other: &Constant) -> Constant {
        let label = match (&self.label, &other.label) {
            (Some(a), Some(b)) => {
                let mut out = a.clone();
                for (atom, p) in b {
                    match out.last_mut() {
                        Some((last, q)) if last == atom => {
                            *q += p;
                            if *q == 0 {
                                out.pop();
                            }
                        }
                        _ => out.push((atom.clone(), *p)),
                    }
                }
                Some(out)
            }
            _ => None,
        };
        Constant { map: self.map.compose(&other.map), label }
    }

    pub fn pow(&self, p: i64) -> Constant {
        let label = self.label.as_ref().map(|l| {
            if l.len() == 1 {
                alloc::vec![(l[0].0.clone(), l[0].1 * p)]
            } else {
                let base = if p < 0 { self.inverse().label.unwrap() } else { l.clone() };
                let mut out = Vec::new();
                for _ in 0..p.unsigned_abs() {
                    out.extend(base.iter().cloned());
                }
                out
            }
        });
        Constant { map: self.map.pow(p), label }
    }

    /// DSL text: the label if present, else the normal form.
    pub fn text(&self) -> String {
        let parts: Vec<(String, i64)> = match &self.label {
            Some(l) if !l.is_empty() => l.clone(),
            _ => NormalForm::of(&self.map).letters().into_iter().map(|(n, p)| (alloc::format!("x{n}"), p)).collect(),
        };
        let mut out = String::new();
        for (i, (atom, p)) in parts.iter().enumerate() {
            if i > 0 {
                out.push_str(" * ");
            }
            out.push_str(atom);
            if *p != 1 {
                out.push_str(&alloc::format!("^{p}"));
            }
        }
        out
    }
}

impl PartialEq for Constant {
    fn eq(&self, other: &Self) -> bool {
        self.map == other.map
    }
}

impl Eq for Constant {}

impl Hash for Constant {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.map.hash(state)
    }
}

impl fmt::Debug for Constant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.text())
    }
}

/// One syllable of a word.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Letter {
    /// `y_index^power`, index starting at 1.
    Var { index: u32, power: i64 },
    Const(Constant),
}

impl Letter {
    pub fn var(index: u32, power: i64) -> Letter {
        Letter::Var { index, power }
    }

    pub fn constant(map: PLMap) -> Letter {
        Letter::Const(Constant::new(map))
    }

    pub fn inverse(&self) -> Letter {
        match self {
            Letter::Var { index, power } => Letter::Var { index: *index, power: -power },
            Letter::Const(c) => Letter::Const(c.inverse()),
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Letter::Var { .. })
    }
}

/// A pure-variable block `y_{i1}^{p1} … y_{ir}^{pr}`, in written order.
pub type VarBlock = Vec<(u32, i64)>;

/// A reduced word in the free product.
///
/// Letters are stored in written order; under the evaluation convention the
/// rightmost letter acts first.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Word {
    letters: Vec<Letter>,
    arity: u32,
}

/// `w = u_k v_k … u_1 v_1 · trailing`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SegmentForm {
    /// `v_1, …, v_k`, rightmost first.
    pub constants: Vec<Constant>,
    /// `u_1, …, u_k`; `blocks[i]` sits immediately left of `constants[i]`.
    /// Only `u_k` can be empty.
    pub blocks: Vec<VarBlock>,
    /// Variables to the right of `v_1` (the whole word when `k = 0`).
    pub trailing: VarBlock,
}

impl Word {
    /// Reduces the letters; the arity is raised to cover every variable used.
    pub fn new(letters: Vec<Letter>, arity: u32) -> Word {
        let max = letters
            .iter()
            .filter_map(|l| match l {
                Letter::Var { index, .. } => Some(*index),
                _ => None,
            })
            .max()
            .unwrap_or(0);
        Word { letters: reduce_letters(letters), arity: arity.max(max).max(1) }
    }

    pub fn empty(arity: u32) -> Word {
        Word { letters: Vec::new(), arity: arity.max(1) }
    }

    pub fn var(index: u32) -> Word {
        Word::new(alloc::vec![Letter::var(index, 1)], index)
    }

    pub fn constant(c: Constant) -> Word {
        Word::new(alloc::vec![Letter::Const(c)], 1)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn arity(&self) -> u32 {
        self.arity
    }

    pub fn with_arity(mut self, arity: u32) -> Word {
        self.arity = self.arity.max(arity);
        self
    }

    pub fn is_trivial(&self) -> bool {
        self.letters.is_empty()
    }

    /// No variable letters (the empty word included).
    pub fn is_constant(&self) -> bool {
        self.letters.iter().all(|l| !l.is_var())
    }

    pub fn has_constants(&self) -> bool {
        self.letters.iter().any(|l| !l.is_var())
    }

    /// Length counting `y^p` as `|p|` letters and each constant as one.
    pub fn letter_count(&self) -> usize {
        self.letters
            .iter()
            .map(|l| match l {
                Letter::Var { power, .. } => power.unsigned_abs() as usize,
                Letter::Const(_) => 1,
            })
            .sum()
    }

    pub fn variables(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self
            .letters
            .iter()
            .filter_map(|l| match l {
                Letter::Var { index, .. } => Some(*index),
                _ => None,
            })
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn inverse(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(Letter::inverse).collect(), arity: self.arity }
    }

    /// The reduced product `self · other`.
    pub fn times(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().cloned());
        Word::new(letters, self.arity.max(other.arity))
    }

    pub fn pow(&self, p: i64) -> Word {
        let base = if p < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::empty(self.arity);
        for _ in 0..p.unsigned_abs() {
            out = out.times(&base);
        }
        out
    }

    /// `u^-1 · self · u`.
    pub fn conjugate_by(&self, u: &Word) -> Word {
        u.inverse().times(self).times(u)
    }

    /// `[a,b] = a^-1 b^-1 a b`.
    pub fn commutator(a: &Word, b: &Word) -> Word {
        a.inverse().times(&b.inverse()).times(a).times(b)
    }

    pub fn segment_form(&self) -> SegmentForm {
        let mut constants = Vec::new();
        let mut blocks = Vec::new();
        let mut current: VarBlock = Vec::new();
        let mut trailing = None;
        for l in self.letters.iter().rev() {
            match l {
                Letter::Var { index, power } => current.insert(0, (*index, *power)),
                Letter::Const(c) => {
                    let block = core::mem::take(&mut current);
                    if trailing.is_none() {
                        trailing = Some(block);
                    } else {
                        blocks.push(block);
                    }
                    constants.push(c.clone());
                }
            }
        }
        match trailing {
            None => SegmentForm { constants, blocks, trailing: current },
            Some(t) => {
                blocks.push(current);
                SegmentForm { constants, blocks, trailing: t }
            }
        }
    }

    /// Conjugates a trailing variable block to the front: for `w = w̄ u'`
    /// returns `(u' w̄, u')`, so the result ends with a constant unless the
    /// word is pure-variable.
    pub fn canonical(&self) -> (Word, Word) {
        if self.is_constant() || !self.has_constants() {
            return (self.clone(), Word::empty(self.arity));
        }
        let split = self.letters.iter().rposition(|l| !l.is_var()).expect("has constants") + 1;
        if split == self.letters.len() {
            return (self.clone(), Word::empty(self.arity));
        }
        let tail = Word { letters: self.letters[split..].to_vec(), arity: self.arity };
        let head = Word { letters: self.letters[..split].to_vec(), arity: self.arity };
        (tail.times(&head), tail)
    }

    fn check_arity(&self, got: usize) -> Result<()> {
        if got != self.arity as usize {
            return Err(Error::Arity { expected: self.arity as usize, got });
        }
        Ok(())
    }

    /// Evaluates the word in F with `y_i = args[i-1]`.
    pub fn substitute(&self, args: &[PLMap]) -> Result<PLMap> {
        self.check_arity(args.len())?;
        let inverses: Vec<PLMap> = args.iter().map(PLMap::invert).collect();
        Ok(self.evaluate_with(args, &inverses))
    }

    /// Evaluation with precomputed inverses; no arity check.
    pub fn evaluate_with(&self, args: &[PLMap], inverses: &[PLMap]) -> PLMap {
        let mut acc = PLMap::identity();
        for l in &self.letters {
            match l {
                Letter::Var { index, power } => {
                    let i = *index as usize - 1;
                    let base = if *power > 0 { &args[i] } else { &inverses[i] };
                    for _ in 0..power.unsigned_abs() {
                        acc = acc.compose(base);
                    }
                }
                Letter::Const(c) => acc = acc.compose(c.map()),
            }
        }
        acc
    }

    /// Images of `p` after each single step, rightmost letter first:
    /// `[p, ℓ_1(p), ℓ_2 ℓ_1(p), …]`, where `y^3` counts as three steps.
    pub fn trace(&self, args: &[PLMap], p: &Dyadic) -> Result<Vec<Dyadic>> {
        self.check_arity(args.len())?;
        let mut pts = alloc::vec![p.clone()];
        let mut cur = p.clone();
        for step in self.steps() {
            cur = match step {
                Step::Var { index, inverse } => {
                    let g = &args[index as usize - 1];
                    if inverse {
                        g.invert().apply(&cur)
                    } else {
                        g.apply(&cur)
                    }
                }
                Step::Const(c) => c.map().apply(&cur),
            };
            pts.push(cur.clone());
        }
        Ok(pts)
    }

    /// The single-step letters in acting order (rightmost first).
    pub fn steps(&self) -> Vec<Step<'_>> {
        let mut out = Vec::new();
        for l in self.letters.iter().rev() {
            match l {
                Letter::Var { index, power } => {
                    for _ in 0..power.unsigned_abs() {
                        out.push(Step::Var { index: *index, inverse: *power < 0 });
                    }
                }
                Letter::Const(c) => out.push(Step::Const(c)),
            }
        }
        out
    }

    /// `(v_k ⋯ v_1, supp(v_k ⋯ v_1))`.
    pub fn constants_product(&self) -> (PLMap, IntervalSet) {
        let mut acc = PLMap::identity();
        for l in &self.letters {
            if let Letter::Const(c) = l {
                acc = acc.compose(c.map());
            }
        }
        let supp = acc.support();
        (acc, supp)
    }

    /// Replaces each variable `y_i` by the word `args[i-1]`.
    pub fn substitute_words(&self, args: &[Word]) -> Result<Word> {
        self.check_arity(args.len())?;
        let arity = args.iter().map(Word::arity).max().unwrap_or(1);
        let mut letters = Vec::new();
        for l in &self.letters {
            match l {
                Letter::Var { index, power } => {
                    let w = args[*index as usize - 1].pow(*power);
                    letters.extend(w.letters);
                }
                Letter::Const(c) => letters.push(Letter::Const(c.clone())),
            }
        }
        Ok(Word::new(letters, arity))
    }
}

/// One step of the action of a word on a point.
#[derive(Clone, Debug)]
pub enum Step<'a> {
    Var { index: u32, inverse: bool },
    Const(&'a Constant),
}

/// Free-product reduction by a stack pass.
fn reduce_letters(letters: Vec<Letter>) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::with_capacity(letters.len());
    for l in letters {
        match l {
            Letter::Var { power: 0, .. } => {}
            Letter::Const(c) if c.map().is_identity() => {}
            Letter::Var { index, power } => match out.last_mut() {
                Some(Letter::Var { index: i, power: q }) if *i == index => {
                    *q += power;
                    if *q == 0 {
                        out.pop();
                    }
                }
                _ => out.push(Letter::Var { index, power }),
            },
            Letter::Const(c) => match out.last_mut() {
                Some(Letter::Const(d)) => {
                    *d = d.times(&c);
                    if d.map().is_identity() {
                        out.pop();
                    }
                }
                _ => out.push(Letter::Const(c)),
            },
        }
    }
    out
}

/// Reduces an arbitrary letter sequence.
pub fn reduce(letters: Vec<Letter>, arity: u32) -> Word {
    Word::new(letters, arity)
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::dsl::format(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse;

    fn w(s: &str) -> Word {
        parse(s).unwrap()
    }

    #[test]
    fn reduction() {
        assert!(w("y1 * x1 * x1^-1 * y1^-1").is_trivial());
        assert_eq!(w("y1^2 * y1^-1"), w("y1"));
        assert!(w("y1^-1 * y1 * x[0,1/2]_0 * y1^-1 * y1 * x[0,1/2]_0^-1").is_trivial());
        assert_eq!(w("x0 * x1 * y1").letters().len(), 2);
    }

    #[test]
    fn segment_forms() {
        let w1 = w("y1 * x1 * y1^-1 * x2 * y1^2 * x1^-1");
        let sf = w1.segment_form();
        let maps: Vec<PLMap> = sf.constants.iter().map(|c| c.map().clone()).collect();
        assert_eq!(maps, alloc::vec![PLMap::generator(1).invert(), PLMap::generator(2), PLMap::generator(1)]);
        assert_eq!(sf.blocks, alloc::vec![alloc::vec![(1, 2)], alloc::vec![(1, -1)], alloc::vec![(1, 1)]]);
        assert!(sf.trailing.is_empty());
        let pure = w("y1 * y2^3").segment_form();
        assert!(pure.constants.is_empty());
        assert_eq!(pure.trailing, alloc::vec![(1, 1), (2, 3)]);
        let tail = w("x0 * y1 * x1 * y2").segment_form();
        assert_eq!(tail.trailing, alloc::vec![(2, 1)]);
        assert_eq!(tail.blocks, alloc::vec![alloc::vec![(1, 1)], alloc::vec![]]);
    }

    #[test]
    fn canonical_conjugation() {
        let (c, u) = w("y1^-1 * x1 * y1").canonical();
        assert_eq!(c, w("x1"));
        assert_eq!(u, w("y1"));
        let (c, _) = w("x0 * y1 * x1 * y2").canonical();
        assert_eq!(c, w("y2 * x0 * y1 * x1"));
    }

    #[test]
    fn substitution() {
        let w4 = w("y1 * x1 * y1^-1 * x1^-1");
        assert!(w4.substitute(&[PLMap::identity()]).unwrap().is_identity());
        let x0 = PLMap::generator(0);
        let x1 = PLMap::generator(1);
        let direct = x0.compose(&x1).compose(&x0.invert()).compose(&x1.invert());
        assert_eq!(w4.substitute(core::slice::from_ref(&x0)).unwrap(), direct);
        assert!(!direct.is_identity());
        assert!(w4.substitute(&[x0.clone(), x1]).is_err());
        let tr = w4.trace(core::slice::from_ref(&x0), &"3/4".parse().unwrap()).unwrap();
        assert_eq!(tr.len(), 5);
        assert_eq!(tr[4], w4.substitute(&[x0]).unwrap().apply(&"3/4".parse().unwrap()));
    }

    #[test]
    fn constants_products() {
        let (p, s) = w("y1 * x1 * y1^-1 * x1^-1").constants_product();
        assert!(p.is_identity() && s.is_empty());
        let w5 = w("y1 * x1 * y1^-1 * x[0,1/2]_0 * y1^2 * x1^-1");
        let (p, s) = w5.constants_product();
        let half: crate::DyadicInterval = "[0,1/2]".parse().unwrap();
        assert_eq!(p, PLMap::subgroup_generator(&half, 0).unwrap());
        assert_eq!(s, IntervalSet::from_dyadic(&Dyadic::zero(), &"1/2".parse().unwrap()));
        assert!(w("y1 * y2").constants_product().0.is_identity());
    }

    #[test]
    fn word_substitution() {
        let law = w("y1 * y2 * y1^-1 * y2^-1");
        let sub = law.substitute_words(&[w("y1^-1 * y2 * y1"), w("x0")]).unwrap();
        assert_eq!(sub, w("y1^-1 * y2 * y1 * x0 * y1^-1 * y2^-1 * y1 * x0^-1"));
    }
}
