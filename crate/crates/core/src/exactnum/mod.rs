//! Exact scalar arithmetic: rationals, integer polynomials, real algebraic
//! numbers, resultants, cyclotomic detection and certified complex root disks.

pub mod algebraic;
pub mod complex;
pub mod cyclotomic;
pub mod interval;
pub mod poly;
pub mod rational;
pub mod resultant;
pub mod trig;

pub use algebraic::{count_roots_closed, isolate_real_roots, AlgebraicReal, RealRoot};
pub use complex::{Ball, ComplexRat};
pub use cyclotomic::{cyclotomic_order, cyclotomic_poly, is_irreducible, roots_of_unity_order, totient};
pub use interval::RatInterval;
pub use poly::IntPoly;
pub use rational::{format_rational, parse_rational, Rational};
pub use resultant::{pairwise_product_poly, resultant};
