//! Checks against independent, deliberately naive implementations.

mod common;

use common::*;
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thompson_core::interval::point;
use thompson_core::marked::{distance_from_sets, relations_up_to, Marking};
use thompson_core::solver::hnn_sequence;
use thompson_core::{epsilon_cells, oscillation_set, Dyadic, DyadicInterval, PLMap, Word};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `x_0` piece by piece.
fn x0_formula(t: &BigRational) -> BigRational {
    if *t <= q(1, 2) {
        t / q(2, 1)
    } else if *t <= q(3, 4) {
        t - q(1, 4)
    } else {
        t * q(2, 1) - q(1, 1)
    }
}

/// Identity below `1 - 2^-n`, a rescaled `x_0` above.
fn xn_formula(n: u32, t: &BigRational) -> BigRational {
    let len = q(1, 1 << n);
    let a = q(1, 1) - &len;
    if *t <= a {
        return t.clone();
    }
    &a + &len * x0_formula(&((t - &a) / &len))
}

#[test]
fn generators_match_the_formula() {
    for n in 0..6 {
        let g = x(n);
        for k in 0..=256 {
            let t = Dyadic::new(k, 8);
            assert_eq!(point(&g.apply(&t)), xn_formula(n, &point(&t)), "x{n} at {t}");
        }
    }
}

fn grid(k: u32) -> impl Iterator<Item = Dyadic> {
    (1..(1i64 << k)).map(move |i| Dyadic::new(i, k))
}

/// `p ∈ O_w` straight from the definition.
fn oscillates_at(w: &Word, p: &Dyadic) -> bool {
    let mut cur = p.clone();
    for v in w.canonical().0.segment_form().constants {
        if !v.map().support().contains_point(&point(&cur)) {
            return false;
        }
        cur = v.map().apply(&cur);
    }
    true
}

#[test]
fn oscillation_set_matches_pointwise_definition() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let arity = rng.gen_range(1..=2);
        let w = random_word(&mut rng, arity, 3);
        if w.is_constant() {
            continue;
        }
        let o = oscillation_set(&w).unwrap();
        for p in grid(7) {
            assert_eq!(o.contains_point(&point(&p)), oscillates_at(&w, &p), "{w} at {p}");
        }
    }
}

#[test]
fn epsilon_cells_match_pointwise_signatures() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..100 {
        let w = random_word(&mut rng, 1, 3);
        if w.canonical().0.is_constant() {
            continue;
        }
        let cells = epsilon_cells(&w).unwrap();
        let constants = w.canonical().0.segment_form().constants;
        for p in grid(7) {
            // ε_i records whether the running image lies in supp(v_i); a point on
            // a support boundary belongs to no cell.
            let mut eps = Vec::new();
            let mut cur = point(&p);
            let mut boundary = false;
            for v in &constants {
                let s = v.map().support();
                let inside = s.contains_point(&cur);
                if !inside && s.closure_contains(&cur) {
                    boundary = true;
                }
                eps.push(inside);
                cur = v.map().apply_point(&cur);
            }
            let hits: Vec<_> = cells.iter().filter(|c| c.region.contains_point(&point(&p))).collect();
            if boundary {
                assert!(hits.is_empty(), "{w} at {p}");
            } else {
                assert_eq!(hits.len(), 1, "{w} at {p}");
                assert_eq!(hits[0].epsilon, eps, "{w} at {p}");
            }
        }
    }
}

/// A letter of a word over the markers `(g, x0, x1)`, reduced by pinching.
#[derive(Clone)]
enum Item {
    Stable(i32),
    Elem(PLMap),
}

/// Triviality in `⟨F, g | [g, h] = 1, h ∈ H₁⟩`, `H₁` the elements trivial near 1.
fn trivial_in_hnn(word: &[i32]) -> bool {
    let mut items: Vec<Item> = Vec::new();
    for &a in word {
        match a.abs() {
            1 => items.push(Item::Stable(a.signum())),
            i => {
                let f = if a > 0 { x(i as u32 - 2) } else { x(i as u32 - 2).invert() };
                push_elem(&mut items, f);
            }
        }
        // Pinch g^e u g^-e with u in H1, repeatedly.
        loop {
            let n = items.len();
            let pinch = match items.as_slice() {
                [.., Item::Stable(e), Item::Elem(u), Item::Stable(f)] if e == &-f && u.trivial_near_one() => {
                    Some((n - 3, Some(u.clone())))
                }
                [.., Item::Stable(e), Item::Stable(f)] if e == &-f => Some((n - 2, None)),
                _ => None,
            };
            match pinch {
                Some((at, u)) => {
                    items.truncate(at);
                    if let Some(u) = u {
                        push_elem(&mut items, u);
                    }
                }
                None => break,
            }
        }
    }
    match items.as_slice() {
        [] => true,
        [Item::Elem(f)] => f.is_identity(),
        _ => false,
    }
}

fn push_elem(items: &mut Vec<Item>, f: PLMap) {
    if let Some(Item::Elem(last)) = items.last_mut() {
        *last = last.compose(&f);
        if last.is_identity() {
            items.pop();
        }
    } else if !f.is_identity() {
        items.push(Item::Elem(f));
    }
}

fn reduced_words(len: usize) -> Vec<Vec<i32>> {
    let mut out = vec![vec![]];
    let mut frontier = vec![vec![]];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &frontier {
            for a in [1, -1, 2, -2, 3, -3] {
                if w.last() == Some(&-a) {
                    continue;
                }
                let mut v = w.clone();
                v.push(a);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

#[test]
fn britton_oracle_basics() {
    // x0 is not in H1: g x0 g^-1 x0^-1 is not trivial.
    assert!(!trivial_in_hnn(&[1, 2, -1, -2]));
    assert!(trivial_in_hnn(&[1, -1, 2, -2]));
    // Neither is x1.
    assert!(!trivial_in_hnn(&[1, 3, -1, -3]));
}

#[test]
fn hnn_terms_approach_the_limit() {
    const R: usize = 4;
    let n_max = 4;
    let zs: Vec<PLMap> = (1..=n_max as i64)
        .map(|i| {
            let hi = Dyadic::one() - Dyadic::pow2(-i);
            PLMap::subgroup_generator(&DyadicInterval::closed(Dyadic::zero(), hi).unwrap(), 0).unwrap()
        })
        .collect();
    let ws: Vec<Word> = (0..n_max).map(|j| word(&format!("comm(y1, x{j})"))).collect();
    let member = |f: &PLMap| f.trivial_near_one();
    let limit: Vec<Vec<i32>> = reduced_words(R).into_iter().filter(|w| !w.is_empty() && trivial_in_hnn(w)).collect();
    let mut last = 0;
    for n in 1..=n_max {
        let g = hnn_sequence(n, &member, &zs, &ws).unwrap().g;
        let rel = relations_up_to(&Marking::new(vec![g, x(0), x(1)]).unwrap(), R).unwrap();
        for w in &limit {
            assert!(rel.contains(w), "limit relation missing at n = {n}");
        }
        let extra = rel.iter().filter(|w| !trivial_in_hnn(w)).map(Vec::len).min();
        let agree = extra.map_or(R, |l| l - 1);
        assert!(agree >= last, "agreement radius dropped at n = {n}");
        last = agree;
        let self_distance = distance_from_sets(&rel, &rel);
        assert_eq!(self_distance.radius, R);
    }
}
