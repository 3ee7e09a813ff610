#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use thompson_core::words::{Constant, Letter};
use thompson_core::{Dyadic, DyadicInterval, IntervalSet, PLMap, Word};

pub fn iv(s: &str) -> DyadicInterval {
    s.parse().unwrap()
}

pub fn word(s: &str) -> Word {
    thompson_core::dsl::parse(s).unwrap()
}

pub fn x(n: u32) -> PLMap {
    PLMap::generator(n)
}

/// A word in `x0^±1, x1^±1` of length 1 to `max`, with its value.
pub fn generator_word(rng: &mut ChaCha8Rng, max: usize) -> (Vec<(u32, i64)>, PLMap) {
    let len = rng.gen_range(1..=max);
    let mut letters = Vec::with_capacity(len);
    let mut f = PLMap::identity();
    for _ in 0..len {
        let n = rng.gen_range(0..2);
        let p = if rng.gen_bool(0.5) { 1 } else { -1 };
        f = f.compose(&x(n).pow(p));
        letters.push((n, p));
    }
    (letters, f)
}

/// One of `x0, x1, x2, x_{[a,b],0}` or an inverse.
pub fn small_constant(rng: &mut ChaCha8Rng) -> Constant {
    let c = match rng.gen_range(0..4) {
        0..=2 => {
            let n = rng.gen_range(0..3);
            Constant::labelled(x(n), format!("x{n}"))
        }
        _ => {
            let k = rng.gen_range(1..=3);
            let a = Dyadic::new(rng.gen_range(0..(1 << k) - 1), k);
            let b = &a + &Dyadic::pow2(-(k as i64));
            let i = DyadicInterval::closed(a.clone(), b.clone()).unwrap();
            Constant::labelled(PLMap::subgroup_generator(&i, 0).unwrap(), format!("x[{a},{b}]_0"))
        }
    };
    if rng.gen_bool(0.5) {
        c.inverse()
    } else {
        c
    }
}

/// Alternating variable powers and constants; at most `consts` constants.
pub fn random_word(rng: &mut ChaCha8Rng, arity: u32, consts: usize) -> Word {
    let k = rng.gen_range(1..=consts.max(1));
    let mut letters = Vec::new();
    for _ in 0..k {
        let v = rng.gen_range(1..=arity);
        let mut p = rng.gen_range(-2..=2);
        if p == 0 {
            p = 1;
        }
        letters.push(Letter::var(v, p));
        letters.push(Letter::Const(small_constant(rng)));
    }
    if rng.gen_bool(0.5) {
        letters.push(Letter::var(rng.gen_range(1..=arity), 1));
    }
    Word::new(letters, arity)
}

/// A dyadic open interval inside the first component of `s`.
pub fn dyadic_ball_in(s: &IntervalSet) -> Option<DyadicInterval> {
    let first = s.intervals().first()?;
    let m = Dyadic::between(&first.lo, &first.hi);
    let mut r = Dyadic::pow2(-(m.exponent() as i64) - 1);
    loop {
        let lo = &m - &r;
        let hi = &m + &r;
        let ball = DyadicInterval::open(lo, hi).ok()?;
        if s.contains_set(&ball.interior()) {
            return Some(ball);
        }
        r = r.half();
    }
}
