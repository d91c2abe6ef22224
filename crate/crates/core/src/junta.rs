//! Zero-influence structure and minimal junta certificates.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::influence::{influence_profile, InfluenceProfile};
use crate::rational::Rational;
use crate::slice::domain::swap_bits;
use crate::slice::SliceFunction;

/// Classes of the relation `Inf_ij = 0` on the coordinates (0-based, sorted).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroInfluencePartition {
    pub classes: Vec<Vec<usize>>,
}

impl ZeroInfluencePartition {
    /// Builds the partition from exact influences and checks that the
    /// relation is transitive and that distinct classes interact.
    pub fn from_profile(profile: &InfluenceProfile) -> Result<Self> {
        let n = profile.domain.n();
        let zero = |i: usize, j: usize| i == j || profile.pairwise[i][j].is_zero();
        let mut class_of = vec![usize::MAX; n];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for i in 0..n {
            if class_of[i] != usize::MAX {
                continue;
            }
            let members: Vec<usize> = (i..n).filter(|&j| zero(i, j)).collect();
            for &j in &members {
                if class_of[j] != usize::MAX {
                    return Err(Error::ClaimViolation(format!(
                        "zero influences are not transitive: coordinate {} joins two classes",
                        j + 1
                    )));
                }
                class_of[j] = classes.len();
            }
            classes.push(members);
        }
        for a in 0..n {
            for b in a + 1..n {
                if (class_of[a] == class_of[b]) != zero(a, b) {
                    return Err(Error::ClaimViolation(format!(
                        "zero influences are not transitive at pair ({}, {})",
                        a + 1,
                        b + 1
                    )));
                }
            }
        }
        Ok(ZeroInfluencePartition { classes })
    }

    pub fn max_class_size(&self) -> usize {
        self.classes.iter().map(Vec::len).max().unwrap_or(0)
    }
}

pub fn zero_influence_partition(f: &SliceFunction) -> Result<ZeroInfluencePartition> {
    ZeroInfluencePartition::from_profile(&influence_profile(f)?)
}

/// A witness set `I` such that `f` only depends on `x|_I`, with the induced
/// table over `{0,1}^I`. Patterns that no slice point realizes are `None`.
#[derive(Clone, Debug, PartialEq)]
pub struct JuntaCertificate {
    /// Sorted 0-based coordinates.
    pub witness: Vec<usize>,
    /// Indexed by pattern: bit `t` is the value of coordinate `witness[t]`.
    pub table: Vec<Option<Rational>>,
}

impl JuntaCertificate {
    pub fn size(&self) -> usize {
        self.witness.len()
    }

    /// Pattern index of `x` restricted to the witness.
    pub fn pattern(&self, bits: u64) -> usize {
        self.witness
            .iter()
            .enumerate()
            .fold(0, |acc, (t, &i)| acc | (((bits >> i) & 1) as usize) << t)
    }

    /// Builds the table for an arbitrary witness, failing if `f` is not a
    /// junta on it.
    pub fn for_witness(f: &SliceFunction, witness: Vec<usize>) -> Result<Self> {
        let dom = f.domain();
        for &i in &witness {
            dom.check_coord(i)?;
        }
        let mut witness = witness;
        witness.sort_unstable();
        witness.dedup();
        if witness.len() > 24 {
            return Err(Error::Capacity {
                what: "junta witness size",
                actual: witness.len() as u64,
                limit: 24,
            });
        }
        let mut cert = JuntaCertificate {
            table: vec![None; 1 << witness.len()],
            witness,
        };
        for (r, p) in dom.points().enumerate() {
            let idx = cert.pattern(p.bits());
            let slot = &mut cert.table[idx];
            match slot {
                None => *slot = Some(f.values()[r].clone()),
                Some(v) if *v == f.values()[r] => {}
                Some(_) => {
                    return Err(Error::Precondition(format!(
                        "function is not a junta on coordinates {:?}",
                        cert.witness.iter().map(|i| i + 1).collect::<Vec<_>>()
                    )))
                }
            }
        }
        Ok(cert)
    }

    /// Checks both junta conditions: invariance under transpositions outside
    /// the witness, and agreement of the table with `f` everywhere.
    pub fn verify(&self, f: &SliceFunction) -> bool {
        let dom = f.domain();
        let n = dom.n();
        let outside: Vec<usize> = (0..n).filter(|i| !self.witness.contains(i)).collect();
        for (a, &i) in outside.iter().enumerate() {
            for &j in &outside[a + 1..] {
                let invariant = dom
                    .points()
                    .enumerate()
                    .all(|(r, p)| &f.values()[r] == f.value_at_bits(swap_bits(p.bits(), i, j)));
                if !invariant {
                    return false;
                }
            }
        }
        dom.points()
            .enumerate()
            .all(|(r, p)| self.table[self.pattern(p.bits())].as_ref() == Some(&f.values()[r]))
    }

    /// True when every pattern over the witness occurs on the slice.
    pub fn is_total(&self) -> bool {
        self.table.iter().all(Option::is_some)
    }
}

/// Smallest junta witness: the complement of a largest zero-influence class.
/// Ties go to the lexicographically smallest witness.
pub fn minimal_junta(f: &SliceFunction) -> Result<JuntaCertificate> {
    let partition = zero_influence_partition(f)?;
    minimal_junta_from_partition(f, &partition)
}

pub fn minimal_junta_from_partition(
    f: &SliceFunction,
    partition: &ZeroInfluencePartition,
) -> Result<JuntaCertificate> {
    let n = f.domain().n();
    let best = partition.max_class_size();
    let witness = partition
        .classes
        .iter()
        .filter(|c| c.len() == best)
        .map(|c| (0..n).filter(|i| !c.contains(i)).collect::<Vec<_>>())
        .min()
        .unwrap_or_default();
    let cert = JuntaCertificate::for_witness(f, witness)?;
    if !cert.verify(f) {
        return Err(Error::ClaimViolation(
            "complement of a zero-influence class failed junta verification".into(),
        ));
    }
    Ok(cert)
}
