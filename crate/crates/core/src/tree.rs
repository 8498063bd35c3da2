//! Properly 2-colored trees: construction, generators, the text format, and
//! a few structural queries.
//!
//! Nodes are addressed by dense zero-based indices everywhere in the API. The
//! external identifier of node `v` (in files, dumps, and CLI output) is `v + 1`.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Color {
    White,
    Black,
}

impl Color {
    pub fn opposite(self) -> Color {
        match self {
            Color::White => Color::Black,
            Color::Black => Color::White,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Color::White => 'w',
            Color::Black => 'b',
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("a tree needs at least one node")]
    Empty,
    #[error("expected {expected} edges for {nodes} nodes, found {found}")]
    EdgeCount {
        nodes: usize,
        expected: usize,
        found: usize,
    },
    #[error("node id {id} out of range 1..={n}")]
    IdOutOfRange { id: u64, n: usize },
    #[error("self loop at node {0}")]
    SelfLoop(u64),
    #[error("monochromatic edge ({0}, {1})")]
    MonochromaticEdge(u64, u64),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(u64, u64),
    #[error("graph is disconnected (or contains a cycle)")]
    Disconnected,
    #[error("node set does not induce a connected subgraph")]
    DisconnectedSelection,
    #[error("empty node selection")]
    EmptySelection,
    #[error("incompatible generator parameters: {0}")]
    Incompatible(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// One adjacency entry: the neighbor and the index of the connecting edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Adj {
    pub node: usize,
    pub edge: usize,
}

/// A validated, properly 2-colored tree with immutable structure.
///
/// Edges are stored as `(min, max)` index pairs in lexicographic order, and
/// every adjacency list is sorted by neighbor index.
#[derive(Clone, PartialEq, Eq)]
pub struct ColoredTree {
    colors: Vec<Color>,
    edges: Vec<(usize, usize)>,
    offsets: Vec<usize>,
    adj: Vec<Adj>,
}

impl fmt::Debug for ColoredTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ColoredTree")
            .field("n", &self.len())
            .field("edges", &self.edges.len())
            .finish()
    }
}

impl ColoredTree {
    /// Validates and builds a tree from colors and one-based edge pairs.
    pub fn build(colors: Vec<Color>, edges: &[(u64, u64)]) -> Result<ColoredTree, TreeError> {
        let n = colors.len();
        if n == 0 {
            return Err(TreeError::Empty);
        }
        if edges.len() != n - 1 {
            return Err(TreeError::EdgeCount {
                nodes: n,
                expected: n - 1,
                found: edges.len(),
            });
        }
        let mut pairs = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            for id in [a, b] {
                if id == 0 || id > n as u64 {
                    return Err(TreeError::IdOutOfRange { id, n });
                }
            }
            if a == b {
                return Err(TreeError::SelfLoop(a));
            }
            let (u, v) = ((a - 1) as usize, (b - 1) as usize);
            if colors[u] == colors[v] {
                return Err(TreeError::MonochromaticEdge(a, b));
            }
            pairs.push((u.min(v), u.max(v)));
        }
        pairs.sort_unstable();
        if let Some(w) = pairs.windows(2).find(|w| w[0] == w[1]) {
            return Err(TreeError::DuplicateEdge(w[0].0 as u64 + 1, w[0].1 as u64 + 1));
        }
        let tree = Self::assemble(colors, pairs);
        if tree.bfs_order(0).len() != n {
            return Err(TreeError::Disconnected);
        }
        Ok(tree)
    }

    fn assemble(colors: Vec<Color>, edges: Vec<(usize, usize)>) -> ColoredTree {
        let n = colors.len();
        let mut deg = vec![0usize; n];
        for &(u, v) in &edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        let mut offsets = vec![0usize; n + 1];
        for v in 0..n {
            offsets[v + 1] = offsets[v] + deg[v];
        }
        let mut fill = offsets.clone();
        let mut adj = vec![Adj { node: 0, edge: 0 }; 2 * edges.len()];
        for (e, &(u, v)) in edges.iter().enumerate() {
            adj[fill[u]] = Adj { node: v, edge: e };
            fill[u] += 1;
            adj[fill[v]] = Adj { node: u, edge: e };
            fill[v] += 1;
        }
        for v in 0..n {
            adj[offsets[v]..offsets[v + 1]].sort_unstable_by_key(|a| a.node);
        }
        ColoredTree {
            colors,
            edges,
            offsets,
            adj,
        }
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn color(&self, v: usize) -> Color {
        self.colors[v]
    }

    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn max_degree(&self) -> usize {
        (0..self.len()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn neighbors(&self, v: usize) -> &[Adj] {
        &self.adj[self.offsets[v]..self.offsets[v + 1]]
    }

    /// Edge list as zero-based `(min, max)` pairs.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    /// Index of the edge joining zero-based nodes `u` and `v`.
    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        self.edges.binary_search(&(u.min(v), u.max(v))).ok()
    }

    /// The same tree with white and black exchanged.
    pub fn swapped_colors(&self) -> ColoredTree {
        ColoredTree {
            colors: self.colors.iter().map(|c| c.opposite()).collect(),
            ..self.clone()
        }
    }

    /// The same tree with node `v` renamed to `perm[v]`.
    pub fn relabeled(&self, perm: &[usize]) -> ColoredTree {
        assert_eq!(perm.len(), self.len());
        let mut colors = vec![Color::White; self.len()];
        for (v, &p) in perm.iter().enumerate() {
            colors[p] = self.colors[v];
        }
        let mut edges: Vec<_> = self
            .edges
            .iter()
            .map(|&(u, v)| {
                let (a, b) = (perm[u], perm[v]);
                (a.min(b), a.max(b))
            })
            .collect();
        edges.sort_unstable();
        Self::assemble(colors, edges)
    }

    /// Nodes in breadth-first order from `root`.
    pub fn bfs_order(&self, root: usize) -> Vec<usize> {
        let mut seen = vec![false; self.len()];
        let mut order = Vec::with_capacity(self.len());
        seen[root] = true;
        order.push(root);
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for a in self.neighbors(v) {
                if !seen[a.node] {
                    seen[a.node] = true;
                    order.push(a.node);
                }
            }
        }
        order
    }

    /// Parent of every node when rooted at `root` (`usize::MAX` for the root),
    /// together with the BFS order.
    pub fn rooted(&self, root: usize) -> (Vec<usize>, Vec<usize>) {
        let order = self.bfs_order(root);
        let mut parent = vec![usize::MAX; self.len()];
        for &v in &order {
            for a in self.neighbors(v) {
                if a.node != parent[v] {
                    parent[a.node] = v;
                }
            }
        }
        (parent, order)
    }
}

/// Tree shapes understood by [`generate`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TreeKind {
    Path,
    Star { center: Color },
    /// Breadth-first fill where internal white nodes have degree `white` and
    /// internal black nodes degree `black`; the last level may be ragged.
    Regular {
        white: usize,
        black: usize,
        depth: Option<usize>,
    },
    /// Uniform random recursive attachment under a degree cap.
    Random { cap: usize },
    Caterpillar { spine: usize, leaves: usize },
}

impl TreeKind {
    /// Node count of the complete regular tree of the given depth.
    pub fn complete_regular_size(white: usize, black: usize, depth: usize) -> usize {
        let mut total = 1usize;
        let mut level = 1usize;
        for h in 1..=depth {
            let fan = match (h, h % 2) {
                (1, _) => white,
                (_, 0) => black - 1,
                _ => white - 1,
            };
            level = level.saturating_mul(fan);
            total = total.saturating_add(level);
        }
        total
    }
}

/// Deterministically generates a tree of `n` nodes.
///
/// Random trees use ChaCha8 seeded through `seed_from_u64(seed)`; node `i`
/// attaches to a node drawn uniformly from the earlier nodes whose degree is
/// still below the cap. Colors follow depth parity with a white root.
pub fn generate(kind: TreeKind, n: usize, seed: u64) -> Result<ColoredTree, TreeError> {
    let bad = |msg: &str| Err(TreeError::Incompatible(msg.to_string()));
    let (colors, edges) = match kind {
        TreeKind::Path => {
            if n < 2 {
                return bad("path needs n >= 2");
            }
            let colors = (0..n).map(parity_color).collect();
            let edges = (0..n - 1).map(|i| (i, i + 1)).collect();
            (colors, edges)
        }
        TreeKind::Star { center } => {
            if n < 2 {
                return bad("star needs n >= 2");
            }
            let mut colors = vec![center.opposite(); n];
            colors[0] = center;
            (colors, (1..n).map(|i| (0, i)).collect())
        }
        TreeKind::Regular {
            white,
            black,
            depth,
        } => {
            if white < 2 || black < 2 {
                return bad("regular degrees must be >= 2");
            }
            if n == 0 {
                return bad("n must be positive");
            }
            if let Some(h) = depth {
                let full = TreeKind::complete_regular_size(white, black, h);
                if n > full {
                    return bad(&format!("depth {h} holds only {full} nodes"));
                }
            }
            regular_fill(white, black, n)
        }
        TreeKind::Random { cap } => {
            if cap < 2 && n > 2 {
                return bad("degree cap must be >= 2");
            }
            if n == 0 {
                return bad("n must be positive");
            }
            random_attach(cap.max(1), n, seed)
        }
        TreeKind::Caterpillar { spine, leaves } => {
            if spine == 0 || n != spine * (1 + leaves) {
                return bad("caterpillar needs n = spine * (1 + leaves)");
            }
            let mut colors: Vec<Color> = (0..spine).map(parity_color).collect();
            let mut edges: Vec<(usize, usize)> = (1..spine).map(|i| (i - 1, i)).collect();
            for s in 0..spine {
                for _ in 0..leaves {
                    edges.push((s, colors.len()));
                    colors.push(colors[s].opposite());
                }
            }
            (colors, edges)
        }
    };
    let mut edges: Vec<(usize, usize)> = edges
        .into_iter()
        .map(|(u, v): (usize, usize)| (u.min(v), u.max(v)))
        .collect();
    edges.sort_unstable();
    let tree = ColoredTree::assemble(colors, edges);
    debug_assert_eq!(tree.bfs_order(0).len(), tree.len());
    debug_assert!(tree
        .edges()
        .iter()
        .all(|&(u, v)| tree.color(u) != tree.color(v)));
    Ok(tree)
}

fn parity_color(i: usize) -> Color {
    if i % 2 == 0 {
        Color::White
    } else {
        Color::Black
    }
}

fn regular_fill(white: usize, black: usize, n: usize) -> (Vec<Color>, Vec<(usize, usize)>) {
    let mut colors = vec![Color::White];
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    let mut head = 0;
    while colors.len() < n && head < colors.len() {
        let v = head;
        head += 1;
        let fan = match (v, colors[v]) {
            (0, _) => white,
            (_, Color::White) => white - 1,
            (_, Color::Black) => black - 1,
        };
        for _ in 0..fan {
            if colors.len() == n {
                break;
            }
            edges.push((v, colors.len()));
            colors.push(colors[v].opposite());
        }
    }
    (colors, edges)
}

fn random_attach(cap: usize, n: usize, seed: u64) -> (Vec<Color>, Vec<(usize, usize)>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut colors = vec![Color::White];
    let mut edges = Vec::with_capacity(n - 1);
    let mut deg = vec![0usize; n];
    // Nodes still below the cap, with back-pointers for O(1) removal.
    let mut open = vec![0usize];
    let mut slot = vec![usize::MAX; n];
    slot[0] = 0;
    for i in 1..n {
        let j = open[rng.gen_range(0..open.len())];
        edges.push((j, i));
        colors.push(colors[j].opposite());
        deg[j] += 1;
        deg[i] = 1;
        if deg[j] >= cap {
            let at = slot[j];
            let last = *open.last().unwrap();
            open.swap_remove(at);
            if last != j {
                slot[last] = at;
            }
            slot[j] = usize::MAX;
        }
        if deg[i] < cap {
            slot[i] = open.len();
            open.push(i);
        }
    }
    (colors, edges)
}

const TREE_HEADER: &str = "binlab-tree v1";

/// Serializes a tree in the canonical line format.
pub fn write_tree(tree: &ColoredTree) -> String {
    let mut out = String::with_capacity(16 * tree.len());
    out.push_str(TREE_HEADER);
    out.push('\n');
    out.push_str(&format!("n {}\n", tree.len()));
    for (v, c) in tree.colors.iter().enumerate() {
        out.push_str(&format!("v {} {}\n", v + 1, c));
    }
    for &(u, v) in tree.edges() {
        out.push_str(&format!("e {} {}\n", u + 1, v + 1));
    }
    out
}

/// Parses the canonical line format.
pub fn read_tree(text: &str) -> Result<ColoredTree, TreeError> {
    let err = |line: usize, msg: &str| TreeError::Parse {
        line,
        msg: msg.to_string(),
    };
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    match lines.next() {
        Some((_, l)) if l == TREE_HEADER => {}
        _ => return Err(err(1, "missing `binlab-tree v1` header")),
    }
    let n = match lines.next() {
        Some((ln, l)) => l
            .strip_prefix("n ")
            .and_then(|s| s.parse::<usize>().ok())
            .ok_or_else(|| err(ln, "expected `n <N>`"))?,
        None => return Err(err(2, "missing node count")),
    };
    if n == 0 {
        return Err(TreeError::Empty);
    }
    let mut colors = Vec::with_capacity(n);
    let mut edges = Vec::with_capacity(n - 1);
    for (ln, line) in lines {
        let fields: Vec<&str> = line.split(' ').collect();
        match fields.as_slice() {
            ["v", id, c] if edges.is_empty() => {
                let id: usize = id.parse().map_err(|_| err(ln, "bad node id"))?;
                if id != colors.len() + 1 {
                    return Err(err(ln, "node ids must be 1..N in ascending order"));
                }
                if id > n {
                    return Err(err(ln, "more node lines than announced"));
                }
                colors.push(match *c {
                    "w" => Color::White,
                    "b" => Color::Black,
                    _ => return Err(err(ln, "color must be `w` or `b`")),
                });
            }
            ["e", u, v] => {
                if colors.len() != n {
                    return Err(err(
                        ln,
                        &format!("expected {n} node lines, found {}", colors.len()),
                    ));
                }
                let u: u64 = u.parse().map_err(|_| err(ln, "bad edge endpoint"))?;
                let v: u64 = v.parse().map_err(|_| err(ln, "bad edge endpoint"))?;
                if u >= v {
                    return Err(err(ln, "edge endpoints must satisfy u < v"));
                }
                if let Some(&(pu, pv)) = edges.last() {
                    if (pu, pv) >= (u, v) {
                        return Err(err(ln, "edges must be sorted"));
                    }
                }
                edges.push((u, v));
            }
            _ => return Err(err(ln, &format!("unrecognized line `{line}`"))),
        }
    }
    if colors.len() != n {
        return Err(err(
            n + 2,
            &format!("expected {n} node lines, found {}", colors.len()),
        ));
    }
    ColoredTree::build(colors, &edges)
}

/// Connected components of the subgraph induced by nodes satisfying `keep`.
/// Components are listed by their smallest node; nodes within are sorted.
pub fn induced_components(tree: &ColoredTree, keep: impl Fn(usize) -> bool) -> Vec<Vec<usize>> {
    let n = tree.len();
    let kept: Vec<bool> = (0..n).map(&keep).collect();
    let mut seen = vec![false; n];
    let mut comps = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..n {
        if !kept[start] || seen[start] {
            continue;
        }
        seen[start] = true;
        queue.push_back(start);
        let mut comp = Vec::new();
        while let Some(v) = queue.pop_front() {
            comp.push(v);
            for a in tree.neighbors(v) {
                if kept[a.node] && !seen[a.node] {
                    seen[a.node] = true;
                    queue.push_back(a.node);
                }
            }
        }
        comp.sort_unstable();
        comps.push(comp);
    }
    comps
}

/// Diameter (in edges) of the connected subgraph induced by `nodes`,
/// by double breadth-first sweep.
pub fn diameter(tree: &ColoredTree, nodes: &[usize]) -> Result<usize, TreeError> {
    let &first = nodes.first().ok_or(TreeError::EmptySelection)?;
    let members: HashMap<usize, ()> = nodes.iter().map(|&v| (v, ())).collect();
    let sweep = |src: usize| {
        let mut dist: HashMap<usize, usize> = HashMap::with_capacity(members.len());
        dist.insert(src, 0);
        let mut queue = VecDeque::from([src]);
        let mut far = (src, 0);
        while let Some(v) = queue.pop_front() {
            let dv = dist[&v];
            if dv > far.1 {
                far = (v, dv);
            }
            for a in tree.neighbors(v) {
                if members.contains_key(&a.node) && !dist.contains_key(&a.node) {
                    dist.insert(a.node, dv + 1);
                    queue.push_back(a.node);
                }
            }
        }
        (far, dist.len())
    };
    let ((end, _), reached) = sweep(first);
    if reached != members.len() {
        return Err(TreeError::DisconnectedSelection);
    }
    let ((_, d), _) = sweep(end);
    Ok(d)
}
