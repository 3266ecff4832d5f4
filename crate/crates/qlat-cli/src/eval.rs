//! Evaluation of lattice expressions to lattices.

use crate::parser::{GlueRef, LatticeExpr, NamedRef, RootRef};
use num_bigint::BigInt;
use qlat::construct::{self, GlueComponent, GlueSpec, RootFamily, RootLatticeId};
use qlat::{lattice, Error, Lattice, RatMat, Result};

fn root_id(r: &RootRef) -> RootLatticeId {
    match r {
        RootRef::I(n) => RootLatticeId::new(RootFamily::I, *n as usize),
        RootRef::A(n) => RootLatticeId::new(RootFamily::A, *n as usize),
        RootRef::D(n) => RootLatticeId::new(RootFamily::D, *n as usize),
        RootRef::DPlus(n) => RootLatticeId::new(RootFamily::DPlus, *n as usize),
        RootRef::E7 => RootLatticeId::new(RootFamily::E7, 7),
        RootRef::E8 => RootLatticeId::new(RootFamily::E8, 8),
    }
}

/// Evaluates an expression; construction errors (non-integral glue, bad
/// parameters) surface unchanged.
pub fn evaluate(expr: &LatticeExpr) -> Result<Lattice> {
    match expr {
        LatticeExpr::Root(r) => construct::root_lattice(root_id(r)),
        LatticeExpr::Scalar(a) => construct::scalar_lattice(BigInt::from(*a)),
        LatticeExpr::Named(n) => match n {
            NamedRef::M(c) => construct::named_m(*c),
            NamedRef::K(d) => construct::named_k(*d),
            NamedRef::Aki(k, i) => construct::named_aki(*k, *i),
            NamedRef::MBig(k) => construct::m_family(*k),
            NamedRef::L12 => construct::l12(),
            NamedRef::L16 => construct::l16(),
            NamedRef::M14 => construct::m14(),
        },
        LatticeExpr::Perp(parts) => {
            let mut lattices = parts.iter().map(evaluate);
            let first = lattices.next().expect("parser enforces arity")?;
            lattices.try_fold(first, |acc, next| Ok(lattice::orthogonal_sum(&acc, &next?)))
        }
        LatticeExpr::Glue { components, glues } => {
            let mut spec = Vec::with_capacity(components.len());
            for (comp, glue_ref) in components.iter().zip(glues) {
                spec.push(resolve_component(comp, glue_ref)?);
            }
            construct::glue(&GlueSpec::new(spec)).map(|l| l.with_label(expr.to_string()))
        }
        LatticeExpr::Literal(rows) => {
            lattice::make_lattice(RatMat::from_rows(rows.clone()))
        }
    }
}

fn resolve_component(comp: &LatticeExpr, glue_ref: &GlueRef) -> Result<GlueComponent> {
    match glue_ref {
        GlueRef::Index(i) => match comp {
            LatticeExpr::Root(r) => {
                let id = root_id(r);
                Ok(GlueComponent::piece(
                    construct::root_lattice(id)?,
                    construct::glue_vector(id, *i)?,
                ))
            }
            other => Err(Error::MalformedSpec(format!(
                "glue index [{i}] requires a root-lattice component, got {other}"
            ))),
        },
        GlueRef::Fraction(m) => match comp {
            LatticeExpr::Scalar(a) => Ok(GlueComponent::Scalar {
                a: BigInt::from(*a),
                m: BigInt::from(*m),
            }),
            other => Err(Error::MalformedSpec(format!(
                "fraction glue 1/{m} requires a scalar component, got {other}"
            ))),
        },
        GlueRef::DualCoords(v) => Ok(GlueComponent::piece(evaluate(comp)?, v.clone())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_expression;
    use qlat::rat::{rat, rat_int};

    fn eval_str(s: &str) -> Result<Lattice> {
        evaluate(&parse_expression(s).unwrap())
    }

    #[test]
    fn evaluates_named_lattices() {
        let l = eval_str("L16").unwrap();
        assert_eq!(l.rank(), 16);
        assert_eq!(lattice::discriminant(&l), rat_int(2));
        let e8 = eval_str("E8").unwrap();
        assert_eq!(lattice::discriminant(&e8), rat_int(1));
        assert!(lattice::is_even(&e8));
    }

    #[test]
    fn non_integral_glue_carries_q() {
        // Q = 2/3 + 1/9.
        match eval_str("glue(A(2), s(9); [1], 1/9)") {
            Err(Error::NonIntegralResult { q }) => assert_eq!(q, rat(2, 3) + rat(1, 9)),
            other => panic!("expected NonIntegralResult, got {other:?}"),
        }
        // Q = 2/3 + 1 = 5/3.
        match eval_str("glue(A(2), s(1); [1], 1/1)") {
            Err(Error::NonIntegralResult { q }) => assert_eq!(q, rat(5, 3)),
            other => panic!("expected NonIntegralResult, got {other:?}"),
        }
    }

    #[test]
    fn perp_evaluates_to_block_sum() {
        let l = eval_str("perp(A(2), s(5))").unwrap();
        assert_eq!(l.rank(), 3);
        assert_eq!(lattice::discriminant(&l), rat_int(15));
    }

    #[test]
    fn index_on_non_root_is_rejected() {
        assert!(matches!(
            eval_str("glue(L12, s(6); [1], 1/3)"),
            Err(Error::MalformedSpec(_))
        ));
    }

    #[test]
    fn dual_coords_glue_works() {
        // L12 (9a - 3) [v 1/3] with v the minimal dual vector of L12 would
        // need its dual coordinates; here check the simpler A2 case with
        // explicit dual coordinates of the glue vector [1] = (0, 1).
        let l = eval_str("glue(A(2), s(3); [0, 1], 1/3)").unwrap();
        assert_eq!(l.rank(), 3);
        assert_eq!(lattice::discriminant(&l), rat_int(1));
    }
}
