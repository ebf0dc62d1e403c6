//! Bilinear products of abelian objects, one row per variety.

use nilprod_core::exactlin::FgAbGroup;
use nilprod_core::nilgrp::{bilinear_product_gp, FpGroupPresentation};
use nilprod_core::nonassoc::{bilinear_product_sc, SCAlgebra};
use nilprod_core::operad2::{cosmash2, format_structure, module_operad, preset_operad, BaseRing, Nil2Algebra, Nil2Operad, RModule};
use nilprod_core::Variety;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Table1Error {
    #[error("cyclic orders only make sense over Z")]
    CyclicOverField,
    #[error("cyclic orders must be positive, found {0}")]
    BadOrder(usize),
    #[error(transparent)]
    Engine(#[from] nilprod_core::operad2::Operad2Error),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Table1Row {
    pub variety: &'static str,
    /// what the engines compute
    pub computed: String,
    /// the closed formula in terms of the abelianisations
    pub expected: String,
    pub agrees: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Table1 {
    pub ring: String,
    /// `a` and `b` as ranks, or as cyclic orders
    pub inputs: (String, String),
    pub rows: Vec<Table1Row>,
}

impl Table1 {
    pub fn agrees(&self) -> bool {
        self.rows.iter().all(|r| r.agrees)
    }

    pub fn row(&self, variety: &str) -> Option<&Table1Row> {
        self.rows.iter().find(|r| r.variety == variety)
    }
}

/// `(+)_{i,j} R / (m_i, n_j)`, repeated `copies` times.
fn formula(ring: &BaseRing, a: &[BigInt], b: &[BigInt], copies: usize) -> Vec<BigInt> {
    let mut orders = vec![];
    for _ in 0..copies {
        for m in a {
            for n in b {
                orders.push(m.gcd(n));
            }
        }
    }
    let m = RModule { orders };
    ring.structure(&m)
}

fn row(variety: &'static str, ring: &BaseRing, computed: Vec<BigInt>, expected: Vec<BigInt>) -> Table1Row {
    Table1Row {
        variety,
        agrees: computed == expected,
        computed: format_structure(ring, &computed),
        expected: format_structure(ring, &expected),
    }
}

fn cosmash_of_abelian(op: &Nil2Operad, a: &RModule, b: &RModule) -> Result<Vec<BigInt>, Table1Error> {
    let x = Nil2Algebra::abelian(op, a);
    let y = Nil2Algebra::abelian(op, b);
    Ok(op.ring.structure(&cosmash2(&x, &y)?.algebra.module))
}

fn describe(orders: &[BigInt], cyclic: bool) -> String {
    if cyclic {
        FgAbGroup::from_cyclic_orders(orders).to_string()
    } else {
        orders.len().to_string()
    }
}

/// Rows for abelian inputs of rank `a` and `b`, or with `cyclic` the groups
/// `(+) Z/a_i` and `(+) Z/b_j`. The group row is only produced over `Z`.
pub fn table1(ring: &BaseRing, a: &[usize], b: &[usize], cyclic: bool) -> Result<Table1, Table1Error> {
    let to_orders = |dims: &[usize]| -> Result<Vec<BigInt>, Table1Error> {
        if !cyclic {
            let n: usize = dims.iter().sum();
            return Ok(vec![BigInt::zero(); n]);
        }
        if !ring.is_integers() {
            return Err(Table1Error::CyclicOverField);
        }
        dims.iter()
            .map(|&d| if d == 0 { Err(Table1Error::BadOrder(d)) } else { Ok(BigInt::from(d)) })
            .collect()
    };
    let ao = to_orders(a)?;
    let bo = to_orders(b)?;
    let am = RModule { orders: ao.clone() };
    let bm = RModule { orders: bo.clone() };
    let mut rows = vec![];

    if ring.is_integers() {
        let pres = |orders: &[BigInt]| {
            let gens = FpGroupPresentation::free(orders.len());
            let relators = orders
                .iter()
                .enumerate()
                .filter(|(_, o)| !o.is_zero())
                .map(|(i, o)| {
                    let n: usize = o.try_into().expect("small order");
                    vec![nilprod_core::nilgrp::Letter { gen: i, inverse: false }; n]
                })
                .collect();
            FpGroupPresentation::new(gens.generators, relators).expect("valid presentation")
        };
        let gp = bilinear_product_gp(&pres(&ao), &pres(&bo));
        rows.push(row("Gp", ring, gp.product.factors().to_vec(), formula(ring, &ao, &bo, 1)));
    }

    let presets = [("CRng/CAlg", Variety::Comm, 1), ("Alg", Variety::Assoc, 2), ("Lie", Variety::Lie, 1), ("Leib", Variety::Leib, 2)];
    for (name, v, copies) in presets {
        let op = preset_operad(v, ring)?;
        let computed = cosmash_of_abelian(&op, &am, &bm)?;
        let mut r = row(name, ring, computed.clone(), formula(ring, &ao, &bo, copies));
        if let BaseRing::Field(f) = ring {
            // the structure-constant engine must agree on dimensions
            let x = SCAlgebra::abelian(f, ao.len(), Some(v));
            let y = SCAlgebra::abelian(f, bo.len(), Some(v));
            let sc = bilinear_product_sc(&x, &y).expect("same field and variety");
            r.agrees &= sc.dim == computed.len();
        }
        rows.push(r);
    }
    let op = module_operad(ring);
    rows.push(row("Mod_R", ring, cosmash_of_abelian(&op, &am, &bm)?, vec![]));

    Ok(Table1 { ring: ring.to_string(), inputs: (describe(&ao, cyclic), describe(&bo, cyclic)), rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nilprod_core::exactlin::Field;

    #[test]
    fn z4_tensor_z6() {
        let t = table1(&BaseRing::Integers, &[4], &[6], true).unwrap();
        assert!(t.agrees());
        assert_eq!(t.row("Gp").unwrap().computed, FgAbGroup::cyclic(2).to_string());
        assert_eq!(t.row("Mod_R").unwrap().computed, FgAbGroup::trivial().to_string());
    }

    #[test]
    fn rational_dims() {
        let t = table1(&BaseRing::Field(Field::Rational), &[2], &[3], false).unwrap();
        assert!(t.agrees());
        assert!(t.row("Gp").is_none());
        assert_eq!(t.row("Lie").unwrap().computed, "Q^6");
        assert_eq!(t.row("Leib").unwrap().computed, "Q^12");
        assert_eq!(t.row("Mod_R").unwrap().computed, "Q^0");
    }

    #[test]
    fn cyclic_over_field_is_rejected() {
        let f5 = BaseRing::Field(Field::prime(5).unwrap());
        assert_eq!(table1(&f5, &[2], &[2], true).unwrap_err(), Table1Error::CyclicOverField);
    }
}
