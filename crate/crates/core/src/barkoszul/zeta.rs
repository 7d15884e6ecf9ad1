use serde::Serialize;

use crate::combinat::{all_surjections, substitute, Surjection};
use crate::error::Result;
use crate::linalg::{canonicalize, Rational};
use crate::permutad::{terminal_presentation, twisted_presentation};

use super::{dual_bar, dual_quotient, BarCell};

/// A product `x ◊_r y` on which `ζ` fails to be multiplicative.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ZetaWitness {
    pub left: String,
    pub right: String,
    pub r: String,
    /// Sign in `ζ(x ◊_r y)`.
    pub image_of_product: i32,
    /// Sign in `ζ(x) ◊_r ζ(y)`.
    pub product_of_images: i32,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ZetaReport {
    pub n: usize,
    pub chain_iso: bool,
    pub witness: Option<ZetaWitness>,
}

/// `ζ(ẽ_{r₁}⊗⋯⊗ẽ_{r_k}) = ε(r)·(e_{r₁}⊗⋯⊗e_{r_k})` from `D(perÃs^!)` to `D(perAs^!)`.
pub fn zeta_check(n: usize) -> Result<ZetaReport> {
    zeta_check_with(n, |r| r.shuffle_sign())
}

/// As [`zeta_check`] with a replacement for the sign `ε(r)`.
pub fn zeta_check_with(n: usize, zeta: impl Fn(&Surjection) -> i32) -> Result<ZetaReport> {
    let top = n.max(2);
    let plain = dual_quotient(&terminal_presentation(top), top)?;
    let twisted = dual_quotient(&twisted_presentation(top), top)?;
    let target = dual_bar(&plain, n)?.complex;
    let source = dual_bar(&twisted, n)?.complex;
    let mut chain_iso = target.dims() == source.dims();
    for (&d, cells) in source.bases() {
        if !chain_iso {
            break;
        }
        if target.basis(d) != cells.as_slice() {
            chain_iso = false;
            break;
        }
        let sign = |c: &BarCell| Rational::sign(zeta(&c.shape));
        let src = source.boundary(d);
        let tgt = target.boundary(d);
        for (col, cell) in cells.iter().enumerate() {
            // ∂ζ = ζ∂ column by column.
            let lhs = canonicalize(tgt.column(col).iter().map(|(r, c)| (*r, c * &sign(cell))).collect());
            let rhs = canonicalize(
                src.column(col).iter().map(|(r, c)| (*r, c * &sign(&source.basis(d - 1)[*r]))).collect(),
            );
            if lhs != rhs {
                chain_iso = false;
                break;
            }
        }
    }
    Ok(ZetaReport { n, chain_iso, witness: multiplicativity_witness(n, &zeta)? })
}

fn multiplicativity_witness(n: usize, zeta: &impl Fn(&Surjection) -> i32) -> Result<Option<ZetaWitness>> {
    let top = n.max(2);
    let twisted = dual_quotient(&twisted_presentation(top), top)?;
    let cells: Vec<Vec<BarCell>> = (0..top)
        .map(|a| {
            if a == 0 {
                return Ok(Vec::new());
            }
            Ok(dual_bar(&twisted, a)?.complex.bases().values().flatten().cloned().collect())
        })
        .collect::<Result<_>>()?;
    for total in 2..=top {
        for r in all_surjections(total, 2)? {
            let sizes = r.block_sizes();
            for x in &cells[sizes[0]] {
                for y in &cells[sizes[1]] {
                    let product = substitute(&r, &[x.shape.clone(), y.shape.clone()])?;
                    let image_of_product = zeta(&product);
                    let product_of_images = zeta(&x.shape) * zeta(&y.shape);
                    if image_of_product != product_of_images {
                        return Ok(Some(ZetaWitness {
                            left: x.to_string(),
                            right: y.to_string(),
                            r: r.to_string(),
                            image_of_product,
                            product_of_images,
                        }));
                    }
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_iso_but_not_multiplicative() {
        let report = zeta_check(3).unwrap();
        assert!(report.chain_iso);
        let w = report.witness.unwrap();
        assert_eq!((w.left.as_str(), w.right.as_str(), w.r.as_str()), ("[1]", "[1]", "2 1"));
        assert_eq!((w.image_of_product, w.product_of_images), (-1, 1));
    }

    #[test]
    fn trivial_sign_is_not_a_chain_map() {
        let report = zeta_check_with(3, |_| 1).unwrap();
        assert!(!report.chain_iso);
        assert!(report.witness.is_none());
    }
}
