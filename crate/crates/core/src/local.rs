//! Synchronous message passing on a tree, with rounds counted.
//!
//! Each node runs the same [`NodeProgram`]. Round 0 is local computation on
//! the initial state; every later round delivers the messages sent in the
//! previous round, one optional message per port. A port is an index into
//! [`ColoredTree::neighbors`].

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::decompose::Reason;
use crate::tree::{Color, ColoredTree};

pub type Message = Vec<u8>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NodeInit {
    pub id: u64,
    pub degree: usize,
    pub color: Color,
    pub n: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step<O> {
    /// One slot per port, or empty to send nothing.
    pub outbox: Vec<Option<Message>>,
    pub output: Option<O>,
}

impl<O> Step<O> {
    pub fn silent() -> Self {
        Step {
            outbox: Vec::new(),
            output: None,
        }
    }
}

/// A deterministic per-node state machine. Nodes keep stepping after they
/// output (so they can relay), but only the first output counts.
pub trait NodeProgram {
    type State;
    type Output: Clone;

    fn init(&self, node: &NodeInit) -> Self::State;
    fn step(&self, state: &mut Self::State, inbox: &[Option<Message>]) -> Step<Self::Output>;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IdAssignment {
    /// Node `v` gets id `v + 1`.
    Sequential,
    /// A seeded permutation of `1..=n`.
    Permuted(u64),
    Explicit(Vec<u64>),
}

impl IdAssignment {
    pub fn ids(&self, n: usize) -> Result<Vec<u64>, EngineError> {
        let ids = match self {
            IdAssignment::Sequential => (1..=n as u64).collect(),
            IdAssignment::Permuted(seed) => {
                let mut ids: Vec<u64> = (1..=n as u64).collect();
                ids.shuffle(&mut ChaCha8Rng::seed_from_u64(*seed));
                ids
            }
            IdAssignment::Explicit(ids) => ids.clone(),
        };
        if ids.len() != n {
            return Err(EngineError::BadIds(format!("{} ids for {n} nodes", ids.len())));
        }
        let mut sorted = ids.clone();
        sorted.sort_unstable();
        if sorted.first() == Some(&0) || sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(EngineError::BadIds("ids must be distinct and positive".into()));
        }
        Ok(ids)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundTrace<O> {
    pub rounds_used: usize,
    pub outputs: Vec<O>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EngineError {
    #[error("round cap {cap} exceeded with {pending} nodes still without output")]
    RoundCap { cap: usize, pending: usize },
    #[error("invalid id assignment: {0}")]
    BadIds(String),
    #[error("node {node} sent {got} messages on {degree} ports")]
    Outbox { node: usize, got: usize, degree: usize },
    #[error("views differ: {0}")]
    ViewMismatch(String),
}

/// For every node and port, the port at the other end of that edge.
fn back_ports(tree: &ColoredTree) -> Vec<Vec<usize>> {
    let mut ends = vec![[(0usize, 0usize); 2]; tree.edge_count()];
    let mut seen = vec![0u8; tree.edge_count()];
    for v in 0..tree.len() {
        for (i, a) in tree.neighbors(v).iter().enumerate() {
            ends[a.edge][seen[a.edge] as usize] = (v, i);
            seen[a.edge] += 1;
        }
    }
    (0..tree.len())
        .map(|v| {
            tree.neighbors(v)
                .iter()
                .map(|a| {
                    let [x, y] = ends[a.edge];
                    if x.0 == v {
                        y.1
                    } else {
                        x.1
                    }
                })
                .collect()
        })
        .collect()
}

struct Run<O> {
    outputs: Vec<Option<O>>,
    last_output_round: usize,
    finished: bool,
}

/// Steps every node through rounds `0..=limit`, stopping early once all
/// nodes have output.
fn simulate<P: NodeProgram>(
    tree: &ColoredTree,
    program: &P,
    ids: &[u64],
    limit: usize,
) -> Result<Run<P::Output>, EngineError> {
    let n = tree.len();
    let back = back_ports(tree);
    let mut states: Vec<P::State> = (0..n)
        .map(|v| {
            program.init(&NodeInit {
                id: ids[v],
                degree: tree.degree(v),
                color: tree.color(v),
                n,
            })
        })
        .collect();
    let mut inbox: Vec<Vec<Option<Message>>> = (0..n).map(|v| vec![None; tree.degree(v)]).collect();
    let mut outputs: Vec<Option<P::Output>> = vec![None; n];
    let mut pending = n;
    let mut last_output_round = 0;
    let mut round = 0;
    loop {
        let mut next: Vec<Vec<Option<Message>>> =
            (0..n).map(|v| vec![None; tree.degree(v)]).collect();
        for v in 0..n {
            let step = program.step(&mut states[v], &inbox[v]);
            if !step.outbox.is_empty() && step.outbox.len() != tree.degree(v) {
                return Err(EngineError::Outbox {
                    node: v,
                    got: step.outbox.len(),
                    degree: tree.degree(v),
                });
            }
            for (i, msg) in step.outbox.into_iter().enumerate() {
                if msg.is_some() {
                    let u = tree.neighbors(v)[i].node;
                    next[u][back[v][i]] = msg;
                }
            }
            if outputs[v].is_none() {
                if let Some(o) = step.output {
                    outputs[v] = Some(o);
                    pending -= 1;
                    last_output_round = round;
                }
            }
        }
        if pending == 0 || round == limit {
            return Ok(Run {
                outputs,
                last_output_round,
                finished: pending == 0,
            });
        }
        inbox = next;
        round += 1;
    }
}

pub fn run_sync<P: NodeProgram>(
    tree: &ColoredTree,
    program: &P,
    ids: &IdAssignment,
    max_rounds: usize,
) -> Result<RoundTrace<P::Output>, EngineError> {
    let ids = ids.ids(tree.len())?;
    let run = simulate(tree, program, &ids, max_rounds)?;
    if !run.finished {
        return Err(EngineError::RoundCap {
            cap: max_rounds,
            pending: run.outputs.iter().filter(|o| o.is_none()).count(),
        });
    }
    Ok(RoundTrace {
        rounds_used: run.last_output_round,
        outputs: run.outputs.into_iter().map(Option::unwrap).collect(),
    })
}

/// Round cap used by [`measure_rounds`].
pub fn default_round_cap(tree: &ColoredTree) -> usize {
    64 * (tree.len() + 1)
}

pub fn measure_rounds<P: NodeProgram>(program: &P, tree: &ColoredTree) -> Result<usize, EngineError> {
    run_sync(tree, program, &IdAssignment::Sequential, default_round_cap(tree)).map(|t| t.rounds_used)
}

/// What a node can learn in `radius` rounds: ids, colors and degrees of the
/// ball, plus the port order of every node strictly inside it.
#[derive(Debug, PartialEq, Eq)]
struct View {
    n: usize,
    nodes: BTreeMap<u64, (Color, usize, usize, Vec<u64>)>,
}

fn view(tree: &ColoredTree, ids: &[u64], root: usize, radius: usize) -> View {
    let mut dist = vec![usize::MAX; tree.len()];
    dist[root] = 0;
    let mut order = vec![root];
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        if dist[v] == radius {
            continue;
        }
        for a in tree.neighbors(v) {
            if dist[a.node] == usize::MAX {
                dist[a.node] = dist[v] + 1;
                order.push(a.node);
            }
        }
    }
    let nodes = order
        .iter()
        .map(|&v| {
            let ports = if dist[v] < radius {
                tree.neighbors(v).iter().map(|a| ids[a.node]).collect()
            } else {
                Vec::new()
            };
            (ids[v], (tree.color(v), tree.degree(v), dist[v], ports))
        })
        .collect();
    View {
        n: tree.len(),
        nodes,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Probe {
    Equal,
    Unequal,
}

/// Runs `program` for `radius` rounds on both trees and compares the outputs
/// of `a.1` and `b.1`. The two pointed radius-`radius` views must coincide.
pub fn locality_probe<P: NodeProgram>(
    program: &P,
    a: (&ColoredTree, usize, &IdAssignment),
    b: (&ColoredTree, usize, &IdAssignment),
    radius: usize,
) -> Result<Probe, EngineError>
where
    P::Output: PartialEq,
{
    let ids_a = a.2.ids(a.0.len())?;
    let ids_b = b.2.ids(b.0.len())?;
    let va = view(a.0, &ids_a, a.1, radius);
    let vb = view(b.0, &ids_b, b.1, radius);
    if va != vb {
        return Err(EngineError::ViewMismatch(format!(
            "radius-{radius} views of node {} and node {} differ",
            a.1, b.1
        )));
    }
    let ra = simulate(a.0, program, &ids_a, radius)?;
    let rb = simulate(b.0, program, &ids_b, radius)?;
    Ok(if ra.outputs[a.1] == rb.outputs[b.1] {
        Probe::Equal
    } else {
        Probe::Unequal
    })
}

/// Outputs its own degree without communicating.
pub struct OwnDegree;

impl NodeProgram for OwnDegree {
    type State = usize;
    type Output = usize;

    fn init(&self, node: &NodeInit) -> usize {
        node.degree
    }

    fn step(&self, state: &mut usize, _inbox: &[Option<Message>]) -> Step<usize> {
        Step {
            outbox: Vec::new(),
            output: Some(*state),
        }
    }
}

/// Outputs the largest id within distance `radius`.
pub struct MaxIdWithin {
    pub radius: usize,
}

pub struct MaxIdState {
    best: u64,
    round: usize,
    degree: usize,
}

impl NodeProgram for MaxIdWithin {
    type State = MaxIdState;
    type Output = u64;

    fn init(&self, node: &NodeInit) -> MaxIdState {
        MaxIdState {
            best: node.id,
            round: 0,
            degree: node.degree,
        }
    }

    fn step(&self, st: &mut MaxIdState, inbox: &[Option<Message>]) -> Step<u64> {
        for msg in inbox.iter().flatten() {
            let id = u64::from_le_bytes(msg[..8].try_into().expect("8-byte id"));
            st.best = st.best.max(id);
        }
        let round = st.round;
        st.round += 1;
        if round >= self.radius {
            return Step {
                outbox: Vec::new(),
                output: Some(st.best),
            };
        }
        Step {
            outbox: vec![Some(st.best.to_le_bytes().to_vec()); st.degree],
            output: None,
        }
    }
}

const REMOVED: u8 = 0;
const NEAR: u8 = 1;

/// Ports whose neighbor is still in the residual forest.
fn drop_removed(alive: &mut [bool], inbox: &[Option<Message>]) {
    for (i, msg) in inbox.iter().enumerate() {
        if msg.as_deref() == Some(&[REMOVED]) {
            alive[i] = false;
        }
    }
}

fn broadcast(alive: &[bool], byte: u8) -> Vec<Option<Message>> {
    alive.iter().map(|&a| a.then(|| vec![byte])).collect()
}

/// `DEG(s, t)` as a node program; outputs the layer. Layer `i` is decided in
/// round `i - 1`.
pub struct DegProgram {
    pub s: usize,
    pub t: usize,
}

pub struct PeelState {
    color: Color,
    alive: Vec<bool>,
    round: u32,
    layer: Option<u32>,
}

impl NodeProgram for DegProgram {
    type State = PeelState;
    type Output = u32;

    fn init(&self, node: &NodeInit) -> PeelState {
        PeelState {
            color: node.color,
            alive: vec![true; node.degree],
            round: 0,
            layer: None,
        }
    }

    fn step(&self, st: &mut PeelState, inbox: &[Option<Message>]) -> Step<u32> {
        st.round += 1;
        if st.layer.is_some() {
            return Step::silent();
        }
        drop_removed(&mut st.alive, inbox);
        let deg = st.alive.iter().filter(|&&a| a).count();
        let cap = match st.color {
            Color::White => self.s,
            Color::Black => self.t,
        };
        if deg > cap {
            return Step::silent();
        }
        st.layer = Some(st.round);
        Step {
            outbox: broadcast(&st.alive, REMOVED),
            output: st.layer,
        }
    }
}

/// `ARC(r, Delta)` as a node program. Each layer takes `r + 1` rounds: the
/// first `r` spread "near a high-degree node" through the residual forest,
/// the last one decides removal. Outputs the layer and how the node left.
pub struct ArcProgram {
    pub r: usize,
    pub delta: usize,
}

pub struct ArcState {
    alive: Vec<bool>,
    round: usize,
    near: bool,
    done: bool,
}

impl NodeProgram for ArcProgram {
    type State = ArcState;
    type Output = (u32, Reason);

    fn init(&self, node: &NodeInit) -> ArcState {
        ArcState {
            alive: vec![true; node.degree],
            round: 0,
            near: false,
            done: false,
        }
    }

    fn step(&self, st: &mut ArcState, inbox: &[Option<Message>]) -> Step<(u32, Reason)> {
        let offset = st.round % (self.r + 1);
        let layer = (st.round / (self.r + 1)) as u32 + 1;
        st.round += 1;
        if st.done {
            return Step::silent();
        }
        if offset == 0 {
            drop_removed(&mut st.alive, inbox);
            st.near = st.alive.iter().filter(|&&a| a).count() >= self.delta;
        } else {
            st.near |= inbox.iter().flatten().any(|m| m.as_slice() == [NEAR]);
        }
        if offset < self.r {
            return Step {
                outbox: broadcast(&st.alive, if st.near { NEAR } else { 2 }),
                output: None,
            };
        }
        let leaf = st.alive.iter().filter(|&&a| a).count() <= 1;
        if !leaf && st.near {
            return Step::silent();
        }
        st.done = true;
        Step {
            outbox: broadcast(&st.alive, REMOVED),
            output: Some((layer, if leaf { Reason::Raked } else { Reason::Compressed })),
        }
    }
}
