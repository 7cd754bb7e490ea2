//! The finite Markov chain induced by a deterministic finite-memory profile.
//!
//! Nodes are triples (state, Max memory, Min memory) reachable from the
//! initial states; each node follows the action its owner prescribes.

use std::collections::HashMap;

use num_traits::{One, Zero};
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use crate::arena::{Arena, Player, StateId};
use crate::linalg::{solve, Matrix, SingularSystem};
use crate::rational::Rational;
use crate::strategy::Profile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChainNode {
    pub state: StateId,
    pub max_memory: usize,
    pub min_memory: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainEdge {
    pub target: usize,
    pub prob: Rational,
    pub reward: Rational,
    /// Index of the arena transition taken.
    pub transition: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfileChain {
    nodes: Vec<ChainNode>,
    edges: Vec<Vec<ChainEdge>>,
    initial: Vec<usize>,
}

/// The chain of `profile` started in `s0`.
pub fn build_chain(arena: &Arena, s0: StateId, profile: &Profile) -> ProfileChain {
    build_chain_from(arena, &[s0], profile)
}

/// One chain covering every start state; `initial()[i]` is the node of `starts[i]`.
pub fn build_chain_from(arena: &Arena, starts: &[StateId], profile: &Profile) -> ProfileChain {
    let mut index: HashMap<ChainNode, usize> = HashMap::new();
    let mut nodes = Vec::new();
    let mut edges: Vec<Vec<ChainEdge>> = Vec::new();
    let mut initial = Vec::new();
    let mut stack = Vec::new();
    let (m0, n0) = (profile.max.initial_memory(), profile.min.initial_memory());
    let mut intern = |node: ChainNode, nodes: &mut Vec<ChainNode>, stack: &mut Vec<usize>| -> usize {
        *index.entry(node).or_insert_with(|| {
            nodes.push(node);
            stack.push(nodes.len() - 1);
            nodes.len() - 1
        })
    };
    for &s in starts {
        let id = intern(
            ChainNode {
                state: s,
                max_memory: m0,
                min_memory: n0,
            },
            &mut nodes,
            &mut stack,
        );
        initial.push(id);
        while let Some(u) = stack.pop() {
            let node = nodes[u];
            let action = match arena.owner(node.state) {
                Player::Max => profile.max.action(node.max_memory, node.state),
                Player::Min => profile.min.action(node.min_memory, node.state),
            }
            .expect("profile covers every state of its owner");
            let mv = arena.move_of(node.state, action).expect("prescribed action is available");
            let mut out = Vec::with_capacity(mv.transitions.len());
            for i in mv.transitions.clone() {
                let t = arena.transition(i);
                let next = ChainNode {
                    state: t.target,
                    max_memory: profile.max.next_memory(node.max_memory, i),
                    min_memory: profile.min.next_memory(node.min_memory, i),
                };
                let v = intern(next, &mut nodes, &mut stack);
                out.push(ChainEdge {
                    target: v,
                    prob: t.prob.clone(),
                    reward: t.reward.clone(),
                    transition: i,
                });
            }
            if edges.len() < nodes.len() {
                edges.resize_with(nodes.len(), Vec::new);
            }
            edges[u] = out;
        }
    }
    edges.resize_with(nodes.len(), Vec::new);
    ProfileChain { nodes, edges, initial }
}

impl ProfileChain {
    /// Builds a chain directly; every node needs outgoing edges summing to 1.
    pub fn from_parts(nodes: Vec<ChainNode>, edges: Vec<Vec<ChainEdge>>, initial: Vec<usize>) -> Self {
        assert_eq!(nodes.len(), edges.len());
        ProfileChain { nodes, edges, initial }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[ChainNode] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> ChainNode {
        self.nodes[i]
    }

    pub fn edges(&self, i: usize) -> &[ChainEdge] {
        &self.edges[i]
    }

    pub fn initial(&self) -> &[usize] {
        &self.initial
    }

    /// Expected reward of the next step from each node.
    pub fn expected_rewards(&self) -> Vec<Rational> {
        self.edges
            .iter()
            .map(|es| es.iter().fold(Rational::zero(), |acc, e| acc + &e.prob * &e.reward))
            .collect()
    }

    /// Bottom strongly connected components, each sorted, ordered by smallest node.
    pub fn recurrent_classes(&self) -> Vec<Vec<usize>> {
        let mut g: DiGraph<(), ()> = DiGraph::with_capacity(self.len(), 0);
        let ids: Vec<_> = (0..self.len()).map(|_| g.add_node(())).collect();
        for (u, es) in self.edges.iter().enumerate() {
            for e in es {
                g.add_edge(ids[u], ids[e.target], ());
            }
        }
        let mut comp = vec![usize::MAX; self.len()];
        let sccs = tarjan_scc(&g);
        for (c, members) in sccs.iter().enumerate() {
            for n in members {
                comp[n.index()] = c;
            }
        }
        let mut classes: Vec<Vec<usize>> = sccs
            .iter()
            .enumerate()
            .filter(|(c, members)| members.iter().all(|n| self.edges[n.index()].iter().all(|e| comp[e.target] == *c)))
            .map(|(_, members)| {
                let mut v: Vec<usize> = members.iter().map(|n| n.index()).collect();
                v.sort_unstable();
                v
            })
            .collect();
        classes.sort();
        classes
    }

    /// Solves `x = b + P x` on transient nodes, with `x` fixed to `fixed` on the
    /// recurrent ones. Returns one value per node.
    pub fn absorb(&self, class_of: &[Option<usize>], class_value: &[Rational]) -> Result<Vec<Rational>, SingularSystem> {
        let transient: Vec<usize> = (0..self.len()).filter(|&u| class_of[u].is_none()).collect();
        let mut pos = vec![usize::MAX; self.len()];
        for (i, &u) in transient.iter().enumerate() {
            pos[u] = i;
        }
        let mut m = Matrix::identity(transient.len());
        let mut rhs = vec![Rational::zero(); transient.len()];
        for (i, &u) in transient.iter().enumerate() {
            for e in &self.edges[u] {
                match class_of[e.target] {
                    Some(c) => rhs[i] += &e.prob * &class_value[c],
                    None => *m.get_mut(i, pos[e.target]) -= &e.prob,
                }
            }
        }
        let sol = solve(&m, &[rhs])?.pop().unwrap_or_default();
        Ok((0..self.len())
            .map(|u| match class_of[u] {
                Some(c) => class_value[c].clone(),
                None => sol[pos[u]].clone(),
            })
            .collect())
    }

    /// Stationary distribution of a closed class (in the order of `class`).
    pub fn stationary(&self, class: &[usize]) -> Result<Vec<Rational>, SingularSystem> {
        let k = class.len();
        let mut pos: HashMap<usize, usize> = HashMap::with_capacity(k);
        for (i, &u) in class.iter().enumerate() {
            pos.insert(u, i);
        }
        // Rows are balance equations π_j = Σ_i π_i P(i,j); the last is replaced by Σ π = 1.
        let mut m = Matrix::zeros(k);
        for (i, &u) in class.iter().enumerate() {
            *m.get_mut(i, i) -= Rational::one();
            for e in &self.edges[u] {
                let j = pos[&e.target];
                *m.get_mut(j, i) += &e.prob;
            }
        }
        for i in 0..k {
            m.set(k - 1, i, Rational::one());
        }
        let mut rhs = vec![Rational::zero(); k];
        rhs[k - 1] = Rational::one();
        Ok(solve(&m, &[rhs])?.pop().unwrap_or_default())
    }

    /// Full recurrence and absorption analysis.
    pub fn analyze(&self) -> Result<ChainAnalysis, SingularSystem> {
        let classes = self.recurrent_classes();
        let mut class_of = vec![None; self.len()];
        for (c, members) in classes.iter().enumerate() {
            for &u in members {
                class_of[u] = Some(c);
            }
        }
        let mut absorption = vec![Vec::with_capacity(classes.len()); self.len()];
        for c in 0..classes.len() {
            let indicator: Vec<Rational> = (0..classes.len())
                .map(|d| if d == c { Rational::one() } else { Rational::zero() })
                .collect();
            for (u, p) in self.absorb(&class_of, &indicator)?.into_iter().enumerate() {
                absorption[u].push(p);
            }
        }
        let stationary = classes.iter().map(|c| self.stationary(c)).collect::<Result<_, _>>()?;
        Ok(ChainAnalysis {
            recurrent_classes: classes,
            class_of,
            absorption,
            stationary,
        })
    }

    /// Long-run average reward of each closed class.
    pub fn class_gains(&self, classes: &[Vec<usize>]) -> Result<Vec<Rational>, SingularSystem> {
        let r = self.expected_rewards();
        classes
            .iter()
            .map(|c| {
                let pi = self.stationary(c)?;
                Ok(c.iter().zip(&pi).fold(Rational::zero(), |acc, (&u, p)| acc + p * &r[u]))
            })
            .collect()
    }
}

/// Recurrent classes, absorption probabilities and stationary distributions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainAnalysis {
    pub recurrent_classes: Vec<Vec<usize>>,
    pub class_of: Vec<Option<usize>>,
    /// `absorption[node][class]`.
    pub absorption: Vec<Vec<Rational>>,
    /// Per class, aligned with `recurrent_classes`.
    pub stationary: Vec<Vec<Rational>>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;
    use crate::rational::{int, ratio};
    use crate::strategy::{first_strategy, DSStrategy};

    fn node(i: usize) -> ChainNode {
        ChainNode {
            state: StateId(i),
            max_memory: 0,
            min_memory: 0,
        }
    }

    fn edge(target: usize, prob: Rational) -> ChainEdge {
        ChainEdge {
            target,
            prob,
            reward: int(0),
            transition: 0,
        }
    }

    fn demo_profile(a: &Arena, sigma: &str, tau: &str) -> Profile {
        Profile::new(
            DSStrategy::from_names(a, Player::Max, &[("s", sigma)]).unwrap(),
            DSStrategy::from_names(a, Player::Min, &[("ω", tau)]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn demo_chains() {
        let a = gallery::split_demo();
        let s = a.state_by_name("s").unwrap();
        let c = build_chain(&a, s, &demo_profile(&a, "a", "b"));
        assert_eq!(c.len(), 1);
        assert_eq!(c.edges(0).len(), 1);
        assert_eq!(c.edges(0)[0].target, 0);
        assert_eq!(c.edges(0)[0].prob, int(1));

        let c = build_chain(&a, s, &demo_profile(&a, "b", "b"));
        assert_eq!(c.len(), 2);
        let an = c.analyze().unwrap();
        assert_eq!(an.recurrent_classes, vec![vec![0, 1]]);
        assert_eq!(an.stationary, vec![vec![ratio(1, 2), ratio(1, 2)]]);
        assert_eq!(an.absorption[0], vec![int(1)]);
    }

    #[test]
    fn no_choice_chain_is_the_arena() {
        let l = gallery::one_loop();
        let p = Profile::new(first_strategy(&l, Player::Max), first_strategy(&l, Player::Min)).unwrap();
        let c = build_chain(&l, StateId(0), &p);
        assert_eq!(c.len(), 1);
        let an = c.analyze().unwrap();
        assert_eq!(an.recurrent_classes, vec![vec![0]]);
        assert_eq!(an.stationary, vec![vec![int(1)]]);
    }

    #[test]
    fn branching_absorption() {
        // 0 branches evenly to absorbing 1 and 2
        let c = ProfileChain::from_parts(
            vec![node(0), node(1), node(2)],
            vec![
                vec![edge(1, ratio(1, 2)), edge(2, ratio(1, 2))],
                vec![edge(1, int(1))],
                vec![edge(2, int(1))],
            ],
            vec![0],
        );
        let an = c.analyze().unwrap();
        assert_eq!(an.recurrent_classes, vec![vec![1], vec![2]]);
        assert_eq!(an.absorption[0], vec![ratio(1, 2), ratio(1, 2)]);
        assert_eq!(an.class_of[0], None);
    }

    #[test]
    fn stationary_balance_is_exact() {
        // 0 -> 1 surely, 1 -> 0 w.p. 1/3 and stays w.p. 2/3
        let c = ProfileChain::from_parts(
            vec![node(0), node(1)],
            vec![vec![edge(1, int(1))], vec![edge(0, ratio(1, 3)), edge(1, ratio(2, 3))]],
            vec![0],
        );
        let an = c.analyze().unwrap();
        assert_eq!(an.stationary[0], vec![ratio(1, 4), ratio(3, 4)]);
    }
}
