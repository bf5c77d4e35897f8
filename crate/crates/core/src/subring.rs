//! One-generated subrings, the compression relation `a ~ b iff <a> = <b>`,
//! and the compressed commuting graphs built on it.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graph::CompressedGraph;
use crate::ring::{Ring, RingError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Nonunital,
    Unital,
}

/// Sorted, deduplicated element ids.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ElementSet(Vec<usize>);

impl ElementSet {
    pub fn from_ids(mut ids: Vec<usize>) -> Self {
        ids.sort_unstable();
        ids.dedup();
        Self(ids)
    }

    pub fn ids(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, id: usize) -> bool {
        self.0.binary_search(&id).is_ok()
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.0.iter().all(|&x| other.contains(x))
    }

    pub fn label(&self, ring: &Ring) -> String {
        let names: Vec<String> = self.0.iter().map(|&x| ring.name(x)).collect();
        format!("{{{}}}", names.join(", "))
    }
}

/// Smallest subset containing `seeds` and closed under `+`, `-` and `*`.
pub fn closure(ring: &Ring, seeds: &[usize]) -> ElementSet {
    closure_extend(ring, &ElementSet::from_ids(vec![ring.zero()]), seeds)
}

/// Closure of `closed ∪ extra`, where `closed` is already a subring. Only
/// products involving at least one new element need to be formed.
pub fn closure_extend(ring: &Ring, closed: &ElementSet, extra: &[usize]) -> ElementSet {
    let n = ring.order();
    let mut member = vec![false; n];
    let mut members: Vec<usize> = Vec::with_capacity(closed.len());
    for &x in closed.ids() {
        member[x] = true;
        members.push(x);
    }
    let mut queue: Vec<usize> = Vec::new();
    let push = |x: usize, member: &mut Vec<bool>, members: &mut Vec<usize>, queue: &mut Vec<usize>| {
        if !member[x] {
            member[x] = true;
            members.push(x);
            queue.push(x);
        }
    };
    if !member[ring.zero()] {
        push(ring.zero(), &mut member, &mut members, &mut queue);
    }
    for &x in extra {
        push(x, &mut member, &mut members, &mut queue);
    }
    while let Some(x) = queue.pop() {
        push(ring.neg(x), &mut member, &mut members, &mut queue);
        // `members` grows while we scan; later arrivals are combined with x
        // when they are popped themselves.
        let mut i = 0;
        while i < members.len() {
            let y = members[i];
            push(ring.add(x, y), &mut member, &mut members, &mut queue);
            push(ring.mul(x, y), &mut member, &mut members, &mut queue);
            push(ring.mul(y, x), &mut member, &mut members, &mut queue);
            i += 1;
        }
    }
    ElementSet::from_ids(members)
}

/// `<a>`, or `<a>_1` in unital mode.
pub fn generated_subring(ring: &Ring, a: usize, mode: Mode) -> Result<ElementSet, RingError> {
    ring.check(a)?;
    Ok(match mode {
        Mode::Nonunital => closure(ring, &[a]),
        Mode::Unital => {
            let one = ring.identity().ok_or(RingError::NotUnital)?;
            closure(ring, &[a, one])
        }
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubringClass {
    pub representative: usize,
    pub members: Vec<usize>,
    pub subring: ElementSet,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassPartition {
    pub ring: String,
    pub mode: Mode,
    /// Ordered by representative.
    pub classes: Vec<SubringClass>,
}

impl ClassPartition {
    /// Class index of every element.
    pub fn class_of(&self) -> Vec<usize> {
        let n = self.classes.iter().map(|c| c.members.len()).sum();
        let mut out = vec![0; n];
        for (i, c) in self.classes.iter().enumerate() {
            for &x in &c.members {
                out[x] = i;
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("partition serializes") + "\n"
    }
}

pub fn compress_classes(ring: &Ring, mode: Mode) -> Result<ClassPartition, RingError> {
    if mode == Mode::Unital && !ring.is_unital() {
        return Err(RingError::NotUnital);
    }
    let subrings: Vec<ElementSet> = ring
        .elements()
        .into_par_iter()
        .map(|a| generated_subring(ring, a, mode))
        .collect::<Result<_, _>>()?;

    let mut by_subring: HashMap<&ElementSet, usize> = HashMap::new();
    let mut classes: Vec<SubringClass> = Vec::new();
    for (a, s) in subrings.iter().enumerate() {
        match by_subring.get(s) {
            Some(&i) => classes[i].members.push(a),
            None => {
                by_subring.insert(s, classes.len());
                classes.push(SubringClass { representative: a, members: vec![a], subring: s.clone() });
            }
        }
    }
    Ok(ClassPartition { ring: ring.descriptor().to_string(), mode, classes })
}

/// `Λ(R)` or `Λ¹(R)`: vertices in the order of [`compress_classes`].
pub fn compressed_commuting_graph(ring: &Ring, mode: Mode) -> Result<CompressedGraph, RingError> {
    let partition = compress_classes(ring, mode)?;
    Ok(graph_of_partition(ring, &partition))
}

pub fn graph_of_partition(ring: &Ring, partition: &ClassPartition) -> CompressedGraph {
    let labels = partition.classes.iter().map(|c| format!("<{}>", ring.name(c.representative))).collect();
    let mut g = CompressedGraph::with_vertices(labels);
    let reps: Vec<usize> = partition.classes.iter().map(|c| c.representative).collect();
    for i in 0..reps.len() {
        g.add_edge(i, i);
        for j in i + 1..reps.len() {
            if ring.commutes(reps[i], reps[j]) {
                g.add_edge(i, j);
            }
        }
    }
    g
}

/// Candidate joins examined before [`unital_subring_lattice`] gives up.
pub const LATTICE_JOIN_CAP: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubringLattice {
    /// Sorted by size, then lexicographically.
    pub subrings: Vec<ElementSet>,
    pub complete: bool,
}

/// All unital subrings. Every unital subring is the join of the
/// one-generated unital subrings of its elements, so closing the atoms
/// under pairwise joins reaches all of them.
pub fn unital_subring_lattice(ring: &Ring) -> Result<SubringLattice, RingError> {
    let partition = compress_classes(ring, Mode::Unital)?;
    let atoms: Vec<ElementSet> = partition.classes.iter().map(|c| c.subring.clone()).collect();
    let mut found: BTreeSet<ElementSet> = atoms.iter().cloned().collect();
    let mut frontier: Vec<ElementSet> = found.iter().cloned().collect();
    let mut joins = 0usize;
    let mut complete = true;

    'outer: while !frontier.is_empty() {
        let mut next = Vec::new();
        for s in &frontier {
            for atom in &atoms {
                if atom.is_subset(s) {
                    continue;
                }
                if joins == LATTICE_JOIN_CAP {
                    complete = false;
                    break 'outer;
                }
                joins += 1;
                let extra: Vec<usize> = atom.ids().iter().copied().filter(|&x| !s.contains(x)).collect();
                let j = closure_extend(ring, s, &extra);
                if found.insert(j.clone()) {
                    next.push(j);
                }
            }
        }
        frontier = next;
    }

    let mut subrings: Vec<ElementSet> = found.into_iter().collect();
    subrings.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(SubringLattice { subrings, complete })
}

/// Class index in `outer` of each class of `inner`, where `inner_ring` is a
/// subring of `outer_ring` via `embed`. `None` if the map is not
/// well-defined.
pub fn induced_class_map(
    inner: &ClassPartition,
    outer: &ClassPartition,
    embed: &[usize],
) -> Option<Vec<usize>> {
    let outer_class = outer.class_of();
    let mut map = Vec::with_capacity(inner.classes.len());
    for c in &inner.classes {
        let targets: BTreeSet<usize> = c.members.iter().map(|&x| outer_class[embed[x]]).collect();
        if targets.len() != 1 {
            return None;
        }
        map.push(*targets.iter().next().unwrap());
    }
    Some(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete_with_loops, disjoint_union, isomorphic, join};
    use crate::ring::{galois_field, matrix_ring, null_ring, z_mod, Budget, MatrixShape};

    /// Additive span of `a, a², ..., a^order`: the polynomial description
    /// of `<a>`, independent of the worklist.
    fn span_of_powers(ring: &Ring, a: usize, with_one: bool) -> ElementSet {
        let mut gens = Vec::new();
        let mut p = a;
        for _ in 0..ring.order() {
            gens.push(p);
            p = ring.mul(p, a);
        }
        if with_one {
            gens.push(ring.identity().unwrap());
        }
        let mut span = BTreeSet::from([ring.zero()]);
        loop {
            let mut grew = false;
            for s in span.clone() {
                for &g in &gens {
                    grew |= span.insert(ring.add(s, g));
                }
            }
            if !grew {
                break;
            }
        }
        ElementSet::from_ids(span.into_iter().collect())
    }

    fn b() -> Budget {
        Budget::default()
    }

    #[test]
    fn closure_matches_span_of_powers() {
        let gf2 = galois_field(2, 1, &b()).unwrap();
        let rings = [
            z_mod(12, &b()).unwrap(),
            galois_field(3, 2, &b()).unwrap(),
            matrix_ring(&gf2, 2, MatrixShape::Full, &b()).unwrap(),
            null_ring(4, &b()).unwrap(),
        ];
        for r in &rings {
            for a in r.elements() {
                assert_eq!(generated_subring(r, a, Mode::Nonunital).unwrap(), span_of_powers(r, a, false));
                if r.is_unital() {
                    assert_eq!(generated_subring(r, a, Mode::Unital).unwrap(), span_of_powers(r, a, true));
                }
            }
        }
    }

    #[test]
    fn generated_subring_examples() {
        let gf4 = galois_field(2, 2, &b()).unwrap();
        // ids are base-2 digits: 2 is the class of x
        assert_eq!(generated_subring(&gf4, 2, Mode::Nonunital).unwrap().len(), 4);
        let z6 = z_mod(6, &b()).unwrap();
        assert_eq!(generated_subring(&z6, 2, Mode::Nonunital).unwrap().ids(), &[0, 2, 4]);
        assert_eq!(generated_subring(&z6, 0, Mode::Nonunital).unwrap().ids(), &[0]);
        let null = null_ring(3, &b()).unwrap();
        assert_eq!(generated_subring(&null, 1, Mode::Unital), Err(RingError::NotUnital));
    }

    #[test]
    fn z4_partitions() {
        let z4 = z_mod(4, &b()).unwrap();
        let p = compress_classes(&z4, Mode::Nonunital).unwrap();
        let members: Vec<Vec<usize>> = p.classes.iter().map(|c| c.members.clone()).collect();
        assert_eq!(members, vec![vec![0], vec![1, 3], vec![2]]);
        assert_eq!(compress_classes(&z4, Mode::Unital).unwrap().classes.len(), 1);
        let zero = z_mod(1, &b()).unwrap();
        assert_eq!(compress_classes(&zero, Mode::Nonunital).unwrap().classes.len(), 1);
    }

    #[test]
    fn upper_triangular_graph() {
        let gf2 = galois_field(2, 1, &b()).unwrap();
        let t2 = matrix_ring(&gf2, 2, MatrixShape::UpperTriangular, &b()).unwrap();
        let g = compressed_commuting_graph(&t2, Mode::Nonunital).unwrap();
        assert_eq!(g.vertex_count(), 8);
        assert!(g.all_looped());
        let k2 = complete_with_loops(2);
        assert!(isomorphic(&g, &join(&k2, &disjoint_union(3, &k2))).is_found());
    }

    #[test]
    fn lattices() {
        let z4 = z_mod(4, &b()).unwrap();
        assert_eq!(unital_subring_lattice(&z4).unwrap().subrings.len(), 1);
        let gf4 = galois_field(2, 2, &b()).unwrap();
        let l = unital_subring_lattice(&gf4).unwrap();
        assert!(l.complete);
        assert_eq!(l.subrings.iter().map(ElementSet::len).collect::<Vec<_>>(), vec![2, 4]);
        // subfields of GF(2^6) are GF(2^d) for d | 6
        let gf64 = galois_field(2, 6, &b()).unwrap();
        let sizes: Vec<usize> = unital_subring_lattice(&gf64).unwrap().subrings.iter().map(ElementSet::len).collect();
        assert_eq!(sizes, vec![2, 4, 8, 64]);
    }

    /// Brute-force lattice: every subset closed under the operations and
    /// containing 1, found by closing every subset of the atoms.
    #[test]
    fn lattice_matches_subset_enumeration() {
        let b2 = b();
        let z2 = z_mod(2, &b2).unwrap();
        let t2 = matrix_ring(&z2, 2, MatrixShape::UpperTriangular, &b2).unwrap();
        let one = t2.identity().unwrap();
        let mut brute = BTreeSet::new();
        for mask in 0u32..(1 << t2.order()) {
            let seeds: Vec<usize> = (0..t2.order()).filter(|&i| mask >> i & 1 == 1).chain([one]).collect();
            brute.insert(closure(&t2, &seeds));
        }
        let lattice: BTreeSet<ElementSet> = unital_subring_lattice(&t2).unwrap().subrings.into_iter().collect();
        assert_eq!(lattice, brute);
    }

    #[test]
    fn partition_json_shape() {
        let z4 = z_mod(4, &b()).unwrap();
        let p = compress_classes(&z4, Mode::Nonunital).unwrap();
        let v: serde_json::Value = serde_json::from_str(&p.to_json()).unwrap();
        assert_eq!(v["classes"][1]["subring"], serde_json::json!([0, 1, 2, 3]));
        assert_eq!(v["mode"], "nonunital");
        let back: ClassPartition = serde_json::from_str(&p.to_json()).unwrap();
        assert_eq!(back, p);
    }
}
