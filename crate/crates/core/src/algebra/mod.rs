//! Exact rational arithmetic, the graded base ring `k[a]`, bigraded tables,
//! graded module descriptors and homogeneous matrices.

mod descriptor;
mod hom;
mod linalg;
mod ring;
mod table;

pub use descriptor::GradedModuleDescriptor;
pub use hom::{GradedFreeModule, HomError, HomMatrix};
pub use linalg::{complement_columns, joint_rank, Matrix, Subquotient};
pub use ring::{GradedRing, RingError};
pub use table::{boxtimes, BigradedTable, IndexConvention};

use num_bigint::BigInt;

/// Exact rationals.
pub type Q = num_rational::BigRational;

pub fn q(x: i64) -> Q {
    Q::from_integer(BigInt::from(x))
}

pub fn q_frac(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d == BigInt::from(0) {
                return None;
            }
            Some(Q::new(n, d))
        }
        None => Some(Q::from_integer(s.parse().ok()?)),
    }
}
