use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::handle::{LocalizedSemidirect, SdElement};
use crate::graph::CompressedGraph;
use crate::localized::LocalizedRational;
use crate::poly::IntPolynomial;

/// Search box for merge witnesses: polynomials of degree at most `degree`
/// with every coefficient in `[-coef, coef]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct WitnessBounds {
    pub degree: usize,
    pub coef: i64,
}

impl Default for WitnessBounds {
    fn default() -> Self {
        Self { degree: 4, coef: 10 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Merge {
    pub from: SdElement,
    pub to: SdElement,
    /// `forward(from) = to` and `backward(to) = from`.
    pub forward: IntPolynomial,
    pub backward: IntPolynomial,
}

#[derive(Debug, Clone, Serialize)]
pub struct Lambda1Report {
    #[serde(skip)]
    pub graph: CompressedGraph,
    /// Candidate `(b, r)` pairs: one per squarefree `b` and `r ∈ I`.
    pub candidates: usize,
    /// `2^s · |I|`.
    pub bound: usize,
    /// Members of each vertex, representative first.
    pub classes: Vec<Vec<SdElement>>,
    pub merges: Vec<Merge>,
    /// Pairs that generate the same unital subring but were not joined by
    /// a witness inside the bounds.
    pub unresolved: Vec<(SdElement, SdElement)>,
    /// Vertex count if every unresolved pair were merged.
    pub exact_vertices: usize,
}

impl Lambda1Report {
    pub fn is_complete(&self) -> bool {
        self.unresolved.is_empty()
    }
}

struct Candidate {
    elem: SdElement,
    /// `P` with `b = 1/P`.
    p: u64,
    /// Second components of `X^j` for `j = 1..`, as far as computed.
    powers: Vec<usize>,
    /// Subgroup of `I` that `r' - r` must lie in for `(b, r') ∈ <X>_1`.
    kernel: Vec<bool>,
}

impl LocalizedSemidirect {
    /// Second components `y_1, y_2, ...` of the powers of `x = (1/p, r)`
    /// until the generating state repeats, plus the membership subgroup
    /// `K = <y_j - p·y_{j+1} : j ≥ 0>` with `y_0 = e`.
    ///
    /// With `t = m/p`, `y_{j+1} = t^j L^j(r) + t Rm(y_j) + y_j r` for
    /// `j ≥ 1`, so `(t^j mod char I, L^j(r), y_j)` determines the rest of the
    /// sequence. Values come from actual multiplication in the ring.
    fn power_kernel(&self, x: &SdElement, p: u64) -> (Vec<usize>, Vec<bool>) {
        let i = self.ideal();
        let c = i.characteristic().max(1);
        let t = self.m() / p;
        let left = &self.data().left;

        let mut ys = vec![self.data().e, x.x];
        let mut power = x.clone();
        let mut state_seen: HashMap<(u64, usize, usize), usize> = HashMap::new();
        let (mut tj, mut lj) = (t % c, left[x.x]);
        loop {
            let j = ys.len() - 1;
            if state_seen.insert((tj, lj, ys[j]), j).is_some() {
                break;
            }
            power = self.mul(&power, x);
            ys.push(power.x);
            tj = tj * t % c;
            lj = left[lj];
        }

        let gens: Vec<usize> = ys
            .windows(2)
            .map(|w| i.sub(w[0], i.scalar_mul_u64(p, w[1])))
            .collect();
        let mut member = vec![false; i.order()];
        member[i.zero()] = true;
        let mut frontier = vec![i.zero()];
        while let Some(s) = frontier.pop() {
            for &g in &gens {
                let n = i.add(s, g);
                if !member[n] {
                    member[n] = true;
                    frontier.push(n);
                }
            }
        }
        ys.remove(0);
        (ys, member)
    }

    /// Witnesses `q` with `q(x) = (b, r')` inside `bounds`, for each `r'` in
    /// `targets`, lowest degree first.
    fn search_merges(
        &self,
        x: &Candidate,
        targets: &[usize],
        bounds: WitnessBounds,
    ) -> BTreeMap<usize, IntPolynomial> {
        let i = self.ideal();
        let e = self.data().e;
        let mut found = BTreeMap::new();
        if targets.is_empty() {
            return found;
        }
        let p = x.p as i128;
        let c = bounds.coef.max(0);
        // y_1 ..= y_degree; the cycle of the power sequence repeats beyond
        // what `power_kernel` stored, so extend by multiplication.
        let mut ys = x.powers.clone();
        let mut power = self.pow(&x.elem, ys.len().max(1));
        while ys.len() < bounds.degree {
            power = self.mul(&power, &x.elem);
            ys.push(power.x);
        }
        let multiple = |k: i64, y: usize| i.scalar_mul(&BigInt::from(k), y);

        for d in 0..=bounds.degree {
            let Some(pd) = p.checked_pow(d as u32) else { break };
            if d == 0 {
                // q = q0 needs b = q0, so b = 1 and q(x) = (1, e)
                if x.p == 1 && c >= 1 && targets.contains(&e) {
                    found.entry(e).or_insert_with(|| IntPolynomial::constant(1));
                }
                continue;
            }
            let mut q = vec![-c; d];
            loop {
                // q[k] is the coefficient of x^(k+1); the top one is nonzero
                if q[d - 1] != 0 {
                    // q0·p^d = p^(d-1) - Σ q_i p^(d-i)
                    let rhs: Option<i128> = (1..=d).try_fold(p.pow(d as u32 - 1), |acc, k| {
                        p.checked_pow((d - k) as u32)
                            .and_then(|pk| pk.checked_mul(q[k - 1] as i128))
                            .and_then(|t| acc.checked_sub(t))
                    });
                    if let Some(rhs) = rhs {
                        if rhs % pd == 0 && (rhs / pd).abs() <= c as i128 {
                            let q0 = (rhs / pd) as i64;
                            let second = (1..=d).fold(multiple(q0, e), |acc, k| i.add(acc, multiple(q[k - 1], ys[k - 1])));
                            if targets.contains(&second) && !found.contains_key(&second) {
                                let mut coeffs = vec![q0];
                                coeffs.extend(&q);
                                found.insert(second, IntPolynomial::from_i64(&coeffs));
                                if found.len() == targets.len() {
                                    return found;
                                }
                            }
                        }
                    }
                }
                let mut k = 0;
                loop {
                    if k == d {
                        break;
                    }
                    if q[k] < c {
                        q[k] += 1;
                        break;
                    }
                    q[k] = -c;
                    k += 1;
                }
                if k == d {
                    break;
                }
            }
        }
        found
    }

    /// `Λ¹(Z[1/m] ⋉ I)`. Candidates `(b, r)` with `b` squarefree cover every
    /// class; distinct `b` never share a class. Two candidates with the same
    /// `b` share a class iff each second component lies in the other's
    /// membership subgroup, which is decided exactly. Such pairs are merged
    /// only once polynomial witnesses in both directions are found inside
    /// `bounds` and verified by evaluation; the rest are reported as
    /// unresolved.
    pub fn lambda1(&self, bounds: WitnessBounds) -> Lambda1Report {
        let i = self.ideal();
        let m = self.m();
        let s = self.support().len();
        let mut candidates: Vec<Candidate> = (0..1u32 << s)
            .flat_map(|mask| {
                let p = self.support().product(mask);
                i.elements().map(move |r| (p, r))
            })
            .map(|(p, r)| Candidate {
                elem: SdElement { z: LocalizedRational::from_parts(m, 1, p).expect("p divides m"), x: r },
                p,
                powers: Vec::new(),
                kernel: Vec::new(),
            })
            .collect();
        candidates.par_iter_mut().for_each(|c| {
            let (ys, k) = self.power_kernel(&c.elem, c.p);
            c.powers = ys;
            c.kernel = k;
        });

        let n = candidates.len();
        let same_class = |a: usize, b: usize| {
            let (x, y) = (&candidates[a], &candidates[b]);
            x.p == y.p && x.kernel[i.sub(y.elem.x, x.elem.x)] && y.kernel[i.sub(x.elem.x, y.elem.x)]
        };
        let partners: Vec<Vec<usize>> = (0..n).map(|a| (0..n).filter(|&b| b != a && same_class(a, b)).collect()).collect();

        let found: Vec<BTreeMap<usize, IntPolynomial>> = (0..n)
            .into_par_iter()
            .map(|a| {
                let targets: Vec<usize> = partners[a].iter().map(|&b| candidates[b].elem.x).collect();
                self.search_merges(&candidates[a], &targets, bounds)
            })
            .collect();

        let mut parent: Vec<usize> = (0..n).collect();
        fn root(parent: &mut [usize], mut a: usize) -> usize {
            while parent[a] != a {
                parent[a] = parent[parent[a]];
                a = parent[a];
            }
            a
        }
        let mut merges = Vec::new();
        for a in 0..n {
            for &b in partners[a].iter().filter(|&&b| b > a) {
                let (x, y) = (&candidates[a].elem, &candidates[b].elem);
                let (Some(fwd), Some(back)) = (found[a].get(&y.x), found[b].get(&x.x)) else {
                    continue;
                };
                assert_eq!(&self.eval(fwd, x), y, "forward witness {fwd} failed");
                assert_eq!(&self.eval(back, y), x, "backward witness {back} failed");
                let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
                if ra != rb {
                    parent[ra.max(rb)] = ra.min(rb);
                    merges.push(Merge { from: x.clone(), to: y.clone(), forward: fwd.clone(), backward: back.clone() });
                }
            }
        }

        let mut exact = vec![usize::MAX; n];
        let mut exact_vertices = 0;
        for a in 0..n {
            if exact[a] == usize::MAX {
                exact[a] = exact_vertices;
                for &b in &partners[a] {
                    exact[b] = exact_vertices;
                }
                exact_vertices += 1;
            }
        }

        let mut unresolved = Vec::new();
        for a in 0..n {
            for &b in partners[a].iter().filter(|&&b| b > a) {
                if root(&mut parent, a) != root(&mut parent, b) {
                    unresolved.push((candidates[a].elem.clone(), candidates[b].elem.clone()));
                }
            }
        }

        let mut index: BTreeMap<usize, usize> = BTreeMap::new();
        let mut classes: Vec<Vec<SdElement>> = Vec::new();
        for a in 0..n {
            let r = root(&mut parent, a);
            let v = *index.entry(r).or_insert_with(|| {
                classes.push(Vec::new());
                classes.len() - 1
            });
            classes[v].push(candidates[a].elem.clone());
        }

        let labels = classes.iter().map(|c| self.name(&c[0])).collect();
        let mut graph = CompressedGraph::with_vertices(labels);
        for u in 0..classes.len() {
            graph.add_edge(u, u);
            for v in u + 1..classes.len() {
                if self.commutes(&classes[u][0], &classes[v][0]) {
                    graph.add_edge(u, v);
                }
            }
        }

        Lambda1Report { graph, candidates: n, bound: (1usize << s) * i.order(), classes, merges, unresolved, exact_vertices }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete_with_loops, isomorphic};
    use crate::ring::{galois_field, matrix_ring, null_ring, z_mod, Budget, MatrixShape};
    use crate::semidirect::SemidirectData;
    use crate::subring::{compressed_commuting_graph, Mode};

    fn b() -> Budget {
        Budget::default()
    }

    fn direct_product_model() -> LocalizedSemidirect {
        let ideal = z_mod(2, &b()).unwrap();
        LocalizedSemidirect::new(SemidirectData { m: 2, ideal, e: 1, left: vec![0, 0], right: vec![0, 0] }).unwrap()
    }

    fn half_negation_model() -> LocalizedSemidirect {
        let ideal = null_ring(3, &b()).unwrap();
        LocalizedSemidirect::new(SemidirectData { m: 2, ideal, e: 0, left: vec![0, 2, 1], right: vec![0, 2, 1] }).unwrap()
    }

    #[test]
    fn direct_product_model_gives_three_vertices() {
        let report = direct_product_model().lambda1(WitnessBounds::default());
        assert!(report.is_complete());
        assert!(isomorphic(&report.graph, &complete_with_loops(3)).is_found());
        assert_eq!(report.exact_vertices, 3);
        assert_eq!(report.bound, 4);
    }

    #[test]
    fn half_negation_model_gives_four_vertices() {
        let report = half_negation_model().lambda1(WitnessBounds::default());
        assert!(report.is_complete(), "{:?}", report.unresolved);
        assert!(isomorphic(&report.graph, &complete_with_loops(4)).is_found());
    }

    #[test]
    fn upper_triangular_instance_is_tight() {
        let gf2 = galois_field(2, 1, &b()).unwrap();
        let t2 = matrix_ring(&gf2, 2, MatrixShape::UpperTriangular, &b()).unwrap();
        let id: Vec<usize> = t2.elements().collect();
        let h = LocalizedSemidirect::new(SemidirectData { m: 1, ideal: t2.clone(), e: t2.zero(), left: id.clone(), right: id }).unwrap();
        let report = h.lambda1(WitnessBounds::default());
        assert_eq!(report.graph.vertex_count(), 8);
        assert_eq!(report.bound, 8);
        let lambda = compressed_commuting_graph(&t2, Mode::Nonunital).unwrap();
        assert!(isomorphic(&report.graph, &lambda).is_found());
    }

    #[test]
    fn degree_zero_leaves_pairs_unresolved() {
        let report = direct_product_model().lambda1(WitnessBounds { degree: 0, coef: 10 });
        assert!(!report.is_complete());
        assert_eq!(report.exact_vertices, 3);
        assert_eq!(report.graph.vertex_count(), 4);
    }

    /// Anything a bounded search reaches must lie in the membership
    /// subgroup; otherwise the exact separation would be wrong.
    #[test]
    fn searched_witnesses_respect_the_kernel() {
        let b2 = b();
        let gf2 = galois_field(2, 1, &b2).unwrap();
        let rings = [
            z_mod(6, &b2).unwrap(),
            null_ring(3, &b2).unwrap(),
            z_mod(4, &b2).unwrap(),
            matrix_ring(&gf2, 2, MatrixShape::UpperTriangular, &b2).unwrap(),
        ];
        let mut checked = 0;
        for r in &rings {
            for m in [1, 2, 3, 6] {
                for data in SemidirectData::enumerate(r, m).into_iter().take(3) {
                    let h = LocalizedSemidirect::new(data).unwrap();
                    for mask in 0..1u32 << h.support().len() {
                        let p = h.support().product(mask);
                        for x in r.elements() {
                            let elem = SdElement { z: LocalizedRational::from_parts(m, 1, p).unwrap(), x };
                            let (powers, kernel) = h.power_kernel(&elem, p);
                            let cand = Candidate { elem, p, powers, kernel };
                            let all: Vec<usize> = r.elements().collect();
                            let found = h.search_merges(&cand, &all, WitnessBounds { degree: 3, coef: 4 });
                            for (&target, q) in &found {
                                assert!(cand.kernel[r.sub(target, x)], "{q} escapes the kernel");
                                let image = h.eval(q, &cand.elem);
                                assert_eq!(image.x, target);
                                assert_eq!(image.z, cand.elem.z);
                                checked += 1;
                            }
                        }
                    }
                }
            }
        }
        assert!(checked > 100);
    }
}
