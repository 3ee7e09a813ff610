//! Exact computation in Thompson's group F.
//!
//! Elements of F are piecewise-linear homeomorphisms of `[0,1]` with dyadic
//! breakpoints and power-of-two slopes ([`PLMap`]). On top of that the crate
//! provides words with constants ([`Word`]), the oscillation classification
//! of such words, constructive solvers for inequality systems, laws with
//! constants, and relation enumeration for marked subgroups.
//!
//! Products follow word order: the word `f g` denotes `f ∘ g`, so the
//! rightmost letter acts first and `x0^-1 x1 x0 = x2`.

#![no_std]

extern crate alloc;

pub mod dsl;
pub mod dyadic;
pub mod error;
pub mod interval;
pub mod laws;
pub mod marked;
pub mod normal_form;
pub mod oscillation;
pub mod plmap;
pub mod solver;
pub mod words;

pub use dyadic::Dyadic;
pub use error::{Error, Result};
pub use interval::{DyadicInterval, Interval, IntervalSet, Point};
pub use laws::{check_law, law_lwc2, law_lwc4, one_variable_reduction, LawCandidate, LawVerdict};
pub use marked::{convergence_probe, distance_bound, relations_up_to, DistanceBound, Marking, RelationSet};
pub use normal_form::NormalForm;
pub use oscillation::{classify, epsilon_cells, oscillation_set, Classification, EpsilonCell, Verdict};
pub use plmap::PLMap;
pub use words::{Constant, Letter, SegmentForm, Word};
