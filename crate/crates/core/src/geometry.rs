//! Components of the parameter variety and the extended quotient `T//W`.
//!
//! A component is recorded by the multiset of summand shapes: summands with
//! the same block and the same `Sp` dimension can be permuted, which gives
//! the symmetry group `∏ 𝔖_{r_i}` and the variety `∏ Sym^{r_i}(ℂ^×)`.

use std::collections::BTreeMap;

use num_rational::Rational64;
use thiserror::Error;

use crate::model::{
    ComponentDescriptor, EpsilonFactor, FieldData, ModelError, Part, Sign, SymbolicScalar, WDRep,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("the unramified formula needs n(ψ) = 0, got {0}")]
    NonzeroPsiConductor(i64),
    #[error("permutation {0:?} does not preserve the (block, Sp dimension) classes")]
    NotASymmetry(Vec<usize>),
    #[error("{0:?} is not a permutation of {1} summands")]
    NotAPermutation(Vec<usize>, usize),
    #[error("partition parts must be positive")]
    ZeroPart,
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Partitions of `n` with parts in decreasing order, streamed in
/// lexicographic order from `[1, …, 1]` to `[n]`.
#[derive(Debug, Clone)]
pub struct Partitions {
    current: Option<Vec<u32>>,
}

impl Iterator for Partitions {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        let out = self.current.take()?;
        let len = out.len();
        // rightmost position (not the last) that can grow by one
        let grow = (0..len.saturating_sub(1))
            .rev()
            .find(|&i| i == 0 || out[i] < out[i - 1]);
        if let Some(i) = grow {
            let rest: u32 = out[i + 1..].iter().sum::<u32>() - 1;
            let mut next = out[..=i].to_vec();
            next[i] += 1;
            next.extend(std::iter::repeat_n(1, rest as usize));
            self.current = Some(next);
        }
        Some(out)
    }
}

pub fn partitions_iter(n: u32) -> Partitions {
    Partitions {
        current: (n > 0).then(|| vec![1; n as usize]),
    }
}

pub fn partitions(n: u32) -> Vec<Vec<u32>> {
    partitions_iter(n).collect()
}

/// `(t, r)` pairs of a multiset of part sizes, sorted by `t`.
fn multiplicities(parts: &[u32]) -> Vec<Part> {
    let mut counts: BTreeMap<u32, u32> = BTreeMap::new();
    for &t in parts {
        *counts.entry(t).or_default() += 1;
    }
    counts.into_iter().map(|(t, r)| Part { t, r }).collect()
}

/// Class key of a summand: identical keys may be permuted.
fn class_keys(r: &WDRep) -> Vec<(u32, &str)> {
    r.summands()
        .iter()
        .map(|s| (s.sp_dim, s.block.id.as_str()))
        .collect()
}

/// Component of the orbit of `r`. Block labels are attached unless every
/// block is trivial.
pub fn component_of(r: &WDRep) -> ComponentDescriptor {
    let all_trivial = r.summands().iter().all(|s| s.block.is_trivial());
    if all_trivial {
        let dims: Vec<u32> = r.summands().iter().map(|s| s.sp_dim).collect();
        return ComponentDescriptor {
            parts: multiplicities(&dims),
            block_labels: None,
        };
    }
    let mut counts: BTreeMap<(u32, &str), u32> = BTreeMap::new();
    for key in class_keys(r) {
        *counts.entry(key).or_default() += 1;
    }
    let (parts, labels) = counts
        .into_iter()
        .map(|((t, id), r)| (Part { t, r }, id.to_string()))
        .unzip();
    ComponentDescriptor {
        parts,
        block_labels: Some(labels),
    }
}

/// A permutation of summand positions (0-based images).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(pub Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    /// Transposition of positions `i` and `j` (0-based).
    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        let mut p = Self::identity(n);
        p.0.swap(i, j);
        p
    }

    pub fn is_valid(&self) -> bool {
        let mut seen = vec![false; self.0.len()];
        self.0
            .iter()
            .all(|&i| i < seen.len() && !std::mem::replace(&mut seen[i], true))
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&i| self.0[i]).collect())
    }

    /// Move the coordinate at position `i` to position `self(i)`.
    pub fn act<T: Clone>(&self, values: &[T]) -> Vec<T> {
        let mut out = values.to_vec();
        for (i, &target) in self.0.iter().enumerate() {
            out[target] = values[i].clone();
        }
        out
    }
}

/// Generators of `∏ 𝔖_{r_i}`: transpositions of consecutive members of each
/// (block, Sp dimension) class.
pub fn symmetry_group(r: &WDRep) -> Vec<Permutation> {
    let keys = class_keys(r);
    let m = keys.len();
    let mut classes: BTreeMap<(u32, &str), Vec<usize>> = BTreeMap::new();
    for (i, key) in keys.into_iter().enumerate() {
        classes.entry(key).or_default().push(i);
    }
    classes
        .values()
        .flat_map(|members| {
            members
                .windows(2)
                .map(move |w| Permutation::transposition(m, w[0], w[1]))
        })
        .collect()
}

/// Whether the epsilon factor is fixed by `perm`. Permutations mixing
/// different classes are reported as [`GeometryError::NotASymmetry`].
pub fn check_invariance(
    e: &EpsilonFactor,
    perm: &Permutation,
    r: &WDRep,
) -> Result<bool, GeometryError> {
    if perm.0.len() != r.rank() || !perm.is_valid() {
        return Err(GeometryError::NotAPermutation(perm.0.clone(), r.rank()));
    }
    let keys = class_keys(r);
    if perm.0.iter().enumerate().any(|(i, &j)| keys[i] != keys[j]) {
        return Err(GeometryError::NotASymmetry(perm.0.clone()));
    }
    Ok(perm.act(e.beta()) == e.beta())
}

/// `T//W` for `T = (ℂ^×)^n`, `W = 𝔖_n`: one component per cycle type.
///
/// A permutation with cycle type `λ` fixes the points constant on each
/// cycle, so `T^γ ≅ (ℂ^×)^{ℓ(λ)}`; its centralizer acts there through the
/// permutations of equal-length cycles, leaving `∏ Sym^{r_i}(ℂ^×)`.
pub fn extended_quotient(n: u32) -> Vec<ComponentDescriptor> {
    partitions_iter(n)
        .map(|cycle_type| ComponentDescriptor {
            parts: multiplicities(&cycle_type),
            block_labels: None,
        })
        .collect()
}

/// `e(𝔛, ψ) ∏ z_j^{d_j-1}` with `e = ∏ (-1)^{d_j-1} q^{-(d_j-1)(d_j-2)/2}`,
/// for the component with Sp dimensions `dims` (in coordinate order).
pub fn unramified_epsilon(dims: &[u32], f: &FieldData) -> Result<EpsilonFactor, GeometryError> {
    if f.psi_conductor() != 0 {
        return Err(GeometryError::NonzeroPsiConductor(f.psi_conductor()));
    }
    if dims.contains(&0) {
        return Err(GeometryError::ZeroPart);
    }
    let beta: Vec<i64> = dims.iter().map(|&d| i64::from(d) - 1).collect();
    let sign_exp: i64 = beta.iter().sum();
    let q_exp: i64 = beta.iter().map(|&b| -b * (b - 1) / 2).sum();
    let constant = &SymbolicScalar::from_sign(Sign::power_of_minus_one(sign_exp))
        * &SymbolicScalar::q_power(Rational64::from_integer(q_exp));
    Ok(EpsilonFactor::new(constant, beta))
}

/// The trivial-block representation underlying a component of `T//W`.
pub fn rep_of_component(c: &ComponentDescriptor) -> Result<WDRep, ModelError> {
    let dims: Vec<u32> = c
        .parts
        .iter()
        .flat_map(|p| std::iter::repeat_n(p.t, p.r as usize))
        .collect();
    WDRep::unramified(&dims)
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;
    use std::sync::Arc;

    use super::*;
    use crate::epsilon::epsilon_wd;
    use crate::model::{BlockConstant, GaloisBlock};

    fn parts(p: &[(u32, u32)]) -> Vec<Part> {
        p.iter().map(|&(t, r)| Part { t, r }).collect()
    }

    /// Independent enumerator: recursive, parts bounded by the previous one.
    fn brute_partitions(n: u32, max: u32, prefix: &mut Vec<u32>, out: &mut BTreeSet<Vec<u32>>) {
        if n == 0 {
            out.insert(prefix.clone());
            return;
        }
        for part in (1..=n.min(max)).rev() {
            prefix.push(part);
            brute_partitions(n - part, part, prefix, out);
            prefix.pop();
        }
    }

    #[test]
    fn partition_examples() {
        assert_eq!(partitions(1), vec![vec![1]]);
        assert_eq!(partitions(4).len(), 5);
        assert_eq!(
            partitions(4),
            vec![
                vec![1, 1, 1, 1],
                vec![2, 1, 1],
                vec![2, 2],
                vec![3, 1],
                vec![4]
            ]
        );
        assert!(partitions(19).contains(&vec![7, 3, 3, 2, 2, 2]));
        assert!(partitions(0).is_empty());
    }

    #[test]
    fn partitions_match_brute_force() {
        for n in 1..=16 {
            let mut expected = BTreeSet::new();
            brute_partitions(n, n, &mut Vec::new(), &mut expected);
            let got = partitions(n);
            let as_set: BTreeSet<Vec<u32>> = got.iter().cloned().collect();
            assert_eq!(as_set.len(), got.len(), "duplicates at n = {n}");
            assert_eq!(as_set, expected, "n = {n}");
            assert!(got.iter().all(|p| p.windows(2).all(|w| w[0] >= w[1])));
            assert!(got.windows(2).all(|w| w[0] < w[1]), "not lexicographic");
        }
    }

    #[test]
    fn gl19_component() {
        let r = WDRep::unramified(&[2, 2, 2, 3, 3, 7]).unwrap();
        let c = component_of(&r);
        assert_eq!(c.parts, parts(&[(2, 3), (3, 2), (7, 1)]));
        assert_eq!(c.block_labels, None);
        assert_eq!(c.variety(), "Sym^3(ℂ^×) × Sym^2(ℂ^×) × ℂ^×");
    }

    #[test]
    fn single_summand_component() {
        let c = component_of(&WDRep::unramified(&[5]).unwrap());
        assert_eq!(c.parts, parts(&[(5, 1)]));
        assert_eq!(c.variety(), "ℂ^×");
    }

    fn block(id: &str) -> Arc<GaloisBlock> {
        Arc::new(
            GaloisBlock::new(
                id,
                2,
                3,
                1,
                BlockConstant::Symbolic,
                BlockConstant::Symbolic,
                None,
            )
            .unwrap(),
        )
    }

    #[test]
    fn distinct_blocks_are_not_identified() {
        let r = WDRep::from_parts([(block("A"), 2), (block("B"), 2)]).unwrap();
        let c = component_of(&r);
        assert_eq!(c.parts, parts(&[(2, 1), (2, 1)]));
        assert_eq!(c.block_labels, Some(vec!["A".into(), "B".into()]));
        assert!(symmetry_group(&r).is_empty());
    }

    fn group_order(gens: &[Permutation], n: usize) -> usize {
        let mut seen = BTreeSet::from([Permutation::identity(n)]);
        let mut frontier = vec![Permutation::identity(n)];
        while let Some(p) = frontier.pop() {
            for g in gens {
                let next = g.compose(&p);
                if seen.insert(next.clone()) {
                    frontier.push(next);
                }
            }
        }
        seen.len()
    }

    #[test]
    fn symmetry_group_examples() {
        let gl19 = WDRep::unramified(&[2, 2, 2, 3, 3, 7]).unwrap();
        let gens = symmetry_group(&gl19);
        assert_eq!(gens.len(), 3);
        assert_eq!(group_order(&gens, 6), 12);
        assert_eq!(
            group_order(&gens, 6) as u128,
            component_of(&gl19).symmetry_order()
        );

        assert!(symmetry_group(&WDRep::unramified(&[1, 2, 3]).unwrap()).is_empty());
        let all_same = WDRep::unramified(&[2; 5]).unwrap();
        let gens = symmetry_group(&all_same);
        assert_eq!(gens.len(), 4);
        assert_eq!(group_order(&gens, 5), 120);
    }

    #[test]
    fn invariance_examples() {
        let f = FieldData::new(3, 0).unwrap();
        let r = WDRep::unramified(&[2, 2, 2, 3, 3, 7]).unwrap();
        let e = epsilon_wd(&r, &f);
        assert_eq!(
            check_invariance(&e, &Permutation::transposition(6, 0, 1), &r),
            Ok(true)
        );
        assert_eq!(
            check_invariance(&e, &Permutation::identity(6), &r),
            Ok(true)
        );
        assert!(matches!(
            check_invariance(&e, &Permutation::transposition(6, 2, 5), &r),
            Err(GeometryError::NotASymmetry(_))
        ));
        assert!(matches!(
            check_invariance(&e, &Permutation(vec![0, 0, 1, 2, 3, 4]), &r),
            Err(GeometryError::NotAPermutation(..))
        ));
        for g in symmetry_group(&r) {
            assert_eq!(check_invariance(&e, &g, &r), Ok(true));
        }
    }

    #[test]
    fn extended_quotient_examples() {
        let one = extended_quotient(1);
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].variety(), "ℂ^×");
        let two: Vec<String> = extended_quotient(2).iter().map(|c| c.variety()).collect();
        assert_eq!(two, vec!["Sym^2(ℂ^×)", "ℂ^×"]);
        let nineteen = extended_quotient(19);
        assert!(nineteen
            .iter()
            .any(|c| c.parts == parts(&[(2, 3), (3, 2), (7, 1)])));
        for n in 1..=12 {
            for c in extended_quotient(n) {
                assert_eq!(c.weight(), u64::from(n));
                assert_eq!(component_of(&rep_of_component(&c).unwrap()), c);
            }
        }
    }

    /// Centralizer action on cycles, computed by enumerating 𝔖_n.
    fn brute_component(cycle_type: &[u32]) -> ComponentDescriptor {
        let n: usize = cycle_type.iter().map(|&t| t as usize).sum();
        // γ: consecutive blocks of the cycle type
        let mut gamma = vec![0; n];
        let mut cycles = Vec::new();
        let mut start = 0;
        for &t in cycle_type {
            let t = t as usize;
            for k in 0..t {
                gamma[start + k] = start + (k + 1) % t;
            }
            cycles.push((start..start + t).collect::<Vec<_>>());
            start += t;
        }
        let gamma = Permutation(gamma);
        let cycle_of = |x: usize| cycles.iter().position(|c| c.contains(&x)).unwrap();
        // orbits of the centralizer on the set of cycles
        let mut linked = vec![BTreeSet::new(); cycles.len()];
        let mut induced = BTreeSet::new();
        for perm in all_permutations(n) {
            if perm.compose(&gamma) == gamma.compose(&perm) {
                let on_cycles: Vec<usize> = cycles.iter().map(|c| cycle_of(perm.0[c[0]])).collect();
                for (i, &target) in on_cycles.iter().enumerate() {
                    linked[i].insert(target);
                }
                induced.insert(on_cycles);
            }
        }
        let mut seen = BTreeSet::new();
        let mut found = Vec::new();
        for (i, orbit) in linked.iter().enumerate() {
            if seen.insert(orbit.clone()) {
                found.push(Part {
                    t: cycles[i].len() as u32,
                    r: orbit.len() as u32,
                });
            }
        }
        found.sort();
        let c = ComponentDescriptor {
            parts: found,
            block_labels: None,
        };
        // the induced group is the full ∏ 𝔖_{r_i}, not just transitive on each class
        assert_eq!(induced.len() as u128, c.symmetry_order());
        c
    }

    fn all_permutations(n: usize) -> Vec<Permutation> {
        if n == 0 {
            return vec![Permutation(vec![])];
        }
        let mut out = Vec::new();
        for p in all_permutations(n - 1) {
            for pos in 0..n {
                let mut v = p.0.clone();
                v.insert(pos, n - 1);
                out.push(Permutation(v));
            }
        }
        out
    }

    #[test]
    fn extended_quotient_matches_centralizer_enumeration() {
        for n in 1..=6 {
            let expected: Vec<ComponentDescriptor> =
                partitions(n).iter().map(|p| brute_component(p)).collect();
            assert_eq!(extended_quotient(n), expected, "n = {n}");
        }
    }

    #[test]
    fn unramified_examples() {
        let f = FieldData::new(5, 0).unwrap();
        let gl19 = unramified_epsilon(&[2, 2, 2, 3, 3, 7], &f).unwrap();
        assert_eq!(gl19.constant.sign(), Sign::Minus);
        assert_eq!(gl19.constant.q_exp(), Rational64::from_integer(-17));
        assert_eq!(gl19.beta(), &[1, 1, 1, 2, 2, 6]);

        let ps = unramified_epsilon(&[1; 7], &f).unwrap();
        assert!(ps.constant.is_one());
        assert_eq!(ps.beta(), &[0; 7]);

        for n in 1..10u32 {
            let st = unramified_epsilon(&[n], &f).unwrap();
            let b = i64::from(n) - 1;
            assert_eq!(st.constant.sign(), Sign::power_of_minus_one(b));
            assert_eq!(
                st.constant.q_exp(),
                Rational64::from_integer(-b * (b - 1) / 2)
            );
            assert_eq!(st.beta(), &[b]);
        }

        assert_eq!(
            unramified_epsilon(&[2], &FieldData::new(5, 1).unwrap()),
            Err(GeometryError::NonzeroPsiConductor(1))
        );
        assert_eq!(
            unramified_epsilon(&[2, 0], &f),
            Err(GeometryError::ZeroPart)
        );
    }

    #[test]
    fn unramified_matches_general_formula() {
        let f = FieldData::new(7, 0).unwrap();
        for n in 1..=8 {
            for p in partitions(n) {
                assert_eq!(
                    unramified_epsilon(&p, &f).unwrap(),
                    epsilon_wd(&WDRep::unramified(&p).unwrap(), &f)
                );
            }
        }
    }
}
