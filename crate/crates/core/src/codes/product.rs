//! Componentwise products of codes for the same network: symbols over the
//! product alphabet split into one digit per part, each part's functions act
//! on their digit, and a product of solutions stays a solution.

use crate::algebra::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::net::code::{Code, CodeParams, EdgeFunction, ProductForm};

/// Combine codes for the same network into one code over the product of
/// their alphabets. The parts must agree on (k, n), assign functions to the
/// same edges, and decode the same demands.
pub fn product_code(parts: &[Code]) -> Result<Code> {
    let Some(first) = parts.first() else {
        return Err(Error::Precondition("a product needs at least one part".into()));
    };
    let (k, n) = (first.params.k, first.params.n);
    for part in parts {
        if part.params.k != k || part.params.n != n {
            return Err(Error::Precondition(format!(
                "parts must share dimensions; found ({}, {}) next to ({k}, {n})",
                part.params.k, part.params.n
            )));
        }
    }
    let edge_keys: Vec<&String> = first.edge_functions.keys().collect();
    let demands: Vec<(&String, &String)> =
        first.decoders.iter().map(|d| (&d.receiver, &d.message)).collect();
    for part in &parts[1..] {
        if part.edge_functions.keys().collect::<Vec<_>>() != edge_keys {
            return Err(Error::Precondition(
                "parts assign functions to different edge sets".into(),
            ));
        }
        let part_demands: Vec<(&String, &String)> =
            part.decoders.iter().map(|d| (&d.receiver, &d.message)).collect();
        if part_demands != demands {
            return Err(Error::Precondition("parts decode different demand sets".into()));
        }
    }

    let factors: Vec<Alphabet> = parts.iter().map(|p| p.params.alphabet.clone()).collect();
    let mut code =
        Code::new(CodeParams { k, n, alphabet: Alphabet::product(factors.clone()) });
    for edge in first.edge_functions.keys() {
        let components: Vec<EdgeFunction> =
            parts.iter().map(|p| p.edge_functions[edge].clone()).collect();
        code.set_edge_function(
            edge.clone(),
            EdgeFunction::Product(ProductForm { factors: factors.clone(), components }),
        );
    }
    // Decoders are kept sorted by (receiver, message) in every code, so the
    // same position refers to the same demand in every part.
    for (pos, d) in first.decoders.iter().enumerate() {
        let components: Vec<EdgeFunction> =
            parts.iter().map(|p| p.decoders[pos].function.clone()).collect();
        code.add_decoder(
            d.receiver.clone(),
            d.message.clone(),
            EdgeFunction::Product(ProductForm { factors: factors.clone(), components }),
        );
    }
    Ok(code)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::linear::n0_scalar_linear;

    #[test]
    fn product_multiplies_alphabet_sizes() {
        let a = n0_scalar_linear(2, Alphabet::ring(2)).unwrap();
        let b = n0_scalar_linear(2, Alphabet::ring(5)).unwrap();
        let code = product_code(&[a, b]).unwrap();
        assert_eq!(code.params.alphabet.size(), 10);
        assert_eq!(code.decoders.len(), 3);
        assert!(code
            .edge_functions
            .values()
            .all(|f| matches!(f, EdgeFunction::Product(_))));
    }

    #[test]
    fn mismatched_dimensions_are_rejected() {
        let a = n0_scalar_linear(2, Alphabet::ring(2)).unwrap();
        let b = n0_scalar_linear(3, Alphabet::ring(2)).unwrap();
        // Same (k, n) but different edge sets (four vs. five bottlenecks).
        assert!(product_code(&[a, b]).is_err());
    }
}
