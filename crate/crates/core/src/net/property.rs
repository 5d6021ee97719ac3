//! Group-translate structure of single-gadget codes.
//!
//! A scalar code on one gadget has this structure when there is a finite
//! abelian group on the alphabet, one permutation per input, and one
//! permutation per all-but-one bottleneck, such that the all-inputs
//! bottleneck carries the group sum of permuted inputs and each all-but-one
//! bottleneck carries a permuted group sum of the remaining permuted inputs.
//! Every solvable code found by exhaustive enumeration on the small gadgets
//! admits such a witness, which is what makes the structured search complete
//! in practice on those instances.

use serde::{Deserialize, Serialize};

use crate::algebra::{FiniteAbelianGroup, Permutation};
use crate::error::{Error, Result};
use crate::net::code::Code;
use crate::net::eval::Evaluator;
use crate::net::network::NetworkSpec;
use crate::net::structure::{block_structure, BlockStructure};

/// A claimed group-translate presentation of a single-gadget code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyPWitness {
    /// Cyclic factors of the abelian group on the alphabet.
    pub group_factors: Vec<u64>,
    /// One permutation of the alphabet per gadget input, position order.
    pub pi: Vec<Permutation>,
    /// One permutation per all-but-one bottleneck, position order.
    pub sigma: Vec<Permutation>,
}

/// Precompute the scalar value tables of a gadget's bottleneck edges.
///
/// Returns (inputs per assignment in position order, partial edge tables,
/// full edge table), where assignment `t` enumerates input tuples in mixed
/// radix with position 0 most significant.
pub(crate) fn gadget_tables(
    net: &NetworkSpec,
    code: &Code,
    structure: &BlockStructure,
) -> Result<(usize, Vec<Vec<u64>>, Vec<u64>)> {
    if structure.blocks.len() != 1 {
        return Err(Error::Precondition(format!(
            "expected a single gadget, found {}",
            structure.blocks.len()
        )));
    }
    let block = &structure.blocks[0];
    let ev = Evaluator::new(net, code)?;
    if ev.k() != 1 || ev.n() != 1 {
        return Err(Error::Precondition(
            "gadget tables are defined for scalar codes only".into(),
        ));
    }
    let size = ev.alphabet_size();
    let m_plus_1 = block.inputs.len();
    let total = (size as u128).pow(m_plus_1 as u32);
    if total > u64::MAX as u128 {
        return Err(Error::Precondition("gadget input space does not fit in 64 bits".into()));
    }
    let total = total as u64;

    let input_ixs: Vec<usize> = block.inputs.iter().map(|m| ev.index.message_index[m]).collect();
    let mut msgs = vec![vec![0u64; 1]; ev.index.message_index.len()];
    let mut scratch = ev.scratch();
    let mut partial = vec![vec![0u64; total as usize]; m_plus_1];
    let mut full = vec![0u64; total as usize];
    for t in 0..total {
        let mut rest = t;
        for pos in (0..m_plus_1).rev() {
            msgs[input_ixs[pos]][0] = rest % size;
            rest /= size;
        }
        ev.eval_edges(&msgs, &mut scratch);
        for (p, edge_id) in block.partial_edges.iter().enumerate() {
            partial[p][t as usize] = ev.edge_value(&scratch, edge_id).expect("bottleneck edge")[0];
        }
        full[t as usize] = ev.edge_value(&scratch, &block.full_edge).expect("bottleneck edge")[0];
    }
    Ok((m_plus_1, partial, full))
}

/// Check whether `witness` is a valid group-translate presentation of `code`
/// on the single gadget of `net`.
pub fn check_property_p(
    net: &NetworkSpec,
    code: &Code,
    witness: &PropertyPWitness,
) -> Result<bool> {
    let structure = block_structure(net)?;
    let (m_plus_1, partial, full) = gadget_tables(net, code, &structure)?;
    if witness.group_factors.iter().any(|&f| f < 1) {
        return Err(Error::Precondition("group factor orders must be positive".into()));
    }
    let group = FiniteAbelianGroup::new(witness.group_factors.clone());
    let size = group.order();
    if witness.pi.len() != m_plus_1 || witness.sigma.len() != m_plus_1 {
        return Err(Error::Precondition(format!(
            "witness has {} input and {} bottleneck permutations, gadget needs {m_plus_1} of each",
            witness.pi.len(),
            witness.sigma.len()
        )));
    }
    for p in witness.pi.iter().chain(witness.sigma.iter()) {
        if p.size() != size {
            return Err(Error::Precondition(format!(
                "witness permutation acts on {} symbols, group has order {size}",
                p.size()
            )));
        }
    }
    let total = partial[0].len() as u64;
    let mut digits = vec![0u64; m_plus_1];
    for t in 0..total {
        let mut rest = t;
        for pos in (0..m_plus_1).rev() {
            digits[pos] = rest % size;
            rest /= size;
        }
        let mut sum_all = group.zero();
        for pos in 0..m_plus_1 {
            sum_all = group.add(sum_all, witness.pi[pos].apply(digits[pos]));
        }
        if full[t as usize] != sum_all {
            return Ok(false);
        }
        for skip in 0..m_plus_1 {
            let mut sum = group.zero();
            for pos in 0..m_plus_1 {
                if pos != skip {
                    sum = group.add(sum, witness.pi[pos].apply(digits[pos]));
                }
            }
            if partial[skip][t as usize] != witness.sigma[skip].apply(sum) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
