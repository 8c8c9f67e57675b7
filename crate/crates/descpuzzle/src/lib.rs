//! Schubert and Grothendieck structure constants from puzzles, for pairs of
//! permutations with separated or almost-separated descents, together with an
//! independent divided-difference oracle.
//!
//! ```
//! use descpuzzle::{sepdesc, Permutation, Theory};
//!
//! let pi: Permutation = "2431".parse().unwrap();
//! let rho: Permutation = "2134".parse().unwrap();
//! let c = sepdesc::sepdesc_constants(&pi, &rho, Theory::KT, 4).unwrap();
//! assert_eq!(c.coeff(&"3421".parse().unwrap()).to_string(), "y2/y1");
//! ```

pub mod almostsep;
pub mod motivic;
pub mod permcore;
pub mod puzzlegrid;
pub mod schubring;
pub mod sepdesc;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use permcore::{Alphabet, EncodedPair, LabelString, Permutation, Symbol};
pub use schubring::{LaurentPoly, SchubertExpansion, Var};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("not a permutation: {0}")]
    BadPermutation(String),
    #[error("bad alphabet: {0}")]
    BadAlphabet(String),
    #[error("bad string: {0}")]
    BadString(String),
    #[error("bad cut positions: {0}")]
    BadCuts(String),
    #[error("descents are not separated: {0}")]
    NotSeparated(String),
    #[error("descents are not almost separated: {0}")]
    NotAlmostSeparated(String),
    #[error("boundary mismatch: {0}")]
    BoundaryMismatch(String),
    #[error("unsupported theory {0} for this rule")]
    UnsupportedTheory(String),
    #[error("basis expansion failed: {0}")]
    MalformedBasis(String),
    #[error("nonzero residual: {0}")]
    ResidualNonzero(String),
    #[error("evaluation hit a pole")]
    PoleHit,
}

/// Cohomology theory of a computation.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize, PartialOrd, Ord)]
pub enum Theory {
    /// ordinary cohomology, single Schubert polynomials
    H,
    /// K-theory, single Grothendieck polynomials
    K,
    /// equivariant cohomology, double Schubert polynomials
    HT,
    /// equivariant K-theory, double Grothendieck polynomials
    KT,
}

impl Theory {
    pub const ALL: [Theory; 4] = [Theory::H, Theory::K, Theory::HT, Theory::KT];

    pub fn is_k(self) -> bool {
        matches!(self, Theory::K | Theory::KT)
    }

    pub fn is_equivariant(self) -> bool {
        matches!(self, Theory::HT | Theory::KT)
    }
}

impl fmt::Display for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Theory::H => "H",
            Theory::K => "K",
            Theory::HT => "HT",
            Theory::KT => "KT",
        };
        write!(f, "{s}")
    }
}

impl FromStr for Theory {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_uppercase().as_str() {
            "H" => Ok(Theory::H),
            "K" => Ok(Theory::K),
            "HT" => Ok(Theory::HT),
            "KT" => Ok(Theory::KT),
            _ => Err(Error::UnsupportedTheory(s.to_string())),
        }
    }
}
