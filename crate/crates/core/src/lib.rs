//! Nilpotent coproducts, bilinear products and their homological invariants,
//! computed exactly.

pub mod exactlin;
pub mod nilgrp;
pub mod operad2;
pub mod nonassoc;
pub mod random;
pub mod homology;
pub mod xmod;

use std::fmt;

use serde::Serialize;

/// The varieties with a binary operation handled by the engines.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Variety {
    Comm,
    Assoc,
    Lie,
    Leib,
}

impl fmt::Display for Variety {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Variety::Comm => "Comm",
            Variety::Assoc => "Assoc",
            Variety::Lie => "Lie",
            Variety::Leib => "Leib",
        };
        write!(f, "{s}")
    }
}
