//! Clause hypergraph, the two-player pair multigraphs, spanning-tree path
//! words and gadget words.
//!
//! A vertex is a generator `(player, question)`. Each clause is a hyperedge
//! through one vertex per player; restricted to two players it becomes an
//! edge of a bipartite multigraph.

use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::game::{Clause, Game};
use crate::word::ClauseWord;

/// A generator of the game group: player and 0-based question.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    pub player: usize,
    pub question: u32,
}

impl Vertex {
    pub fn new(player: usize, question: u32) -> Self {
        Vertex { player, question }
    }

    /// DOT-style name `x{q}^{α}`, 1-based.
    pub fn label(&self) -> String {
        format!("x{}^{}", self.question + 1, self.player + 1)
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// The clause hypergraph. Components are numbered by their smallest clause.
#[derive(Clone, Debug)]
pub struct ClauseHypergraph {
    players: usize,
    alphabet: usize,
    edges: Vec<Vec<u32>>,
    incidence: Vec<Vec<usize>>,
    component_of: Vec<Option<usize>>,
    components: Vec<Vec<usize>>,
}

impl ClauseHypergraph {
    fn vid(&self, v: Vertex) -> usize {
        v.player * self.alphabet + v.question as usize
    }

    pub fn num_vertices(&self) -> usize {
        self.players * self.alphabet
    }

    /// Component of `v`, or `None` for a vertex no clause touches.
    pub fn component_of(&self, v: Vertex) -> Option<usize> {
        self.component_of[self.vid(v)]
    }

    /// Clause indices of each component.
    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn is_connected(&self) -> bool {
        self.components.len() == 1
    }

    /// Clauses through `v`, ascending.
    pub fn clauses_at(&self, v: Vertex) -> &[usize] {
        &self.incidence[self.vid(v)]
    }

    /// A shortest sequence of clauses `p1, ..., pR` with `from ∈ p1`,
    /// `to ∈ pR` and consecutive clauses sharing a vertex. Ties go to the
    /// clause discovered first when neighbours are scanned in index order.
    pub fn shortest_path(&self, from: Vertex, to: Vertex) -> Option<Vec<usize>> {
        if from == to {
            return Some(Vec::new());
        }
        let m = self.edges.len();
        let mut parent: Vec<Option<usize>> = vec![None; m];
        let mut seen = vec![false; m];
        let mut queue = VecDeque::new();
        for &c in self.clauses_at(from) {
            seen[c] = true;
            queue.push_back(c);
        }
        while let Some(c) = queue.pop_front() {
            if self.edges[c][to.player] == to.question {
                let mut path = vec![c];
                let mut cur = c;
                while let Some(p) = parent[cur] {
                    path.push(p);
                    cur = p;
                }
                path.reverse();
                return Some(path);
            }
            let mut next: Vec<usize> = (0..self.players)
                .flat_map(|a| self.clauses_at(Vertex::new(a, self.edges[c][a])).iter().copied())
                .filter(|&d| !seen[d])
                .collect();
            next.sort_unstable();
            next.dedup();
            for d in next {
                seen[d] = true;
                parent[d] = Some(c);
                queue.push_back(d);
            }
        }
        None
    }
}

pub fn build_hypergraph(game: &Game) -> ClauseHypergraph {
    let (k, n) = (game.players(), game.alphabet());
    let edges: Vec<Vec<u32>> = game.clauses().iter().map(|c| c.questions.clone()).collect();
    let mut incidence = vec![Vec::new(); k * n];
    let mut uf = UnionFind::new(k * n);
    for (i, e) in edges.iter().enumerate() {
        for (a, &q) in e.iter().enumerate() {
            incidence[a * n + q as usize].push(i);
            uf.union(e[0] as usize, a * n + q as usize);
        }
    }
    let mut root_to_comp = std::collections::HashMap::new();
    let mut components: Vec<Vec<usize>> = Vec::new();
    for (i, e) in edges.iter().enumerate() {
        let r = uf.find(e[0] as usize);
        let id = *root_to_comp.entry(r).or_insert_with(|| {
            components.push(Vec::new());
            components.len() - 1
        });
        components[id].push(i);
    }
    let component_of = (0..k * n)
        .map(|v| if incidence[v].is_empty() { None } else { root_to_comp.get(&uf.find(v)).copied() })
        .collect();
    ClauseHypergraph { players: k, alphabet: n, edges, incidence, component_of, components }
}

/// A connected piece of a game with questions renumbered densely.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubGame {
    pub game: Game,
    /// `clause_map[i]` is the original index of sub-game clause `i`.
    pub clause_map: Vec<usize>,
    /// `question_map[α][q]` is the original question of sub-game question `q`.
    pub question_map: Vec<Vec<u32>>,
}

/// Splits a game into the sub-games of its hypergraph components, ordered by
/// smallest clause index. Questions no clause asks are dropped.
pub fn decompose_components(game: &Game) -> Vec<SubGame> {
    let hg = build_hypergraph(game);
    hg.components()
        .iter()
        .map(|clauses| {
            let k = game.players();
            let mut question_map: Vec<Vec<u32>> =
                (0..k).map(|a| clauses.iter().map(|&i| game.question(i, a)).collect()).collect();
            for qs in &mut question_map {
                qs.sort_unstable();
                qs.dedup();
            }
            let sub_clauses = clauses
                .iter()
                .map(|&i| {
                    let c = &game.clauses()[i];
                    let qs = (0..k).map(|a| question_map[a].binary_search(&c.questions[a]).unwrap() as u32).collect();
                    Clause::new(qs, c.parity)
                })
                .collect();
            let n = question_map.iter().map(Vec::len).max().unwrap_or(1);
            SubGame {
                game: Game::new(k, n, sub_clauses).expect("component is a valid game"),
                clause_map: clauses.clone(),
                question_map,
            }
        })
        .collect()
}

/// The bipartite multigraph between players `alpha` and `beta`, one edge per
/// clause, with a BFS spanning tree rooted at a representative on the `beta`
/// side of each component.
#[derive(Clone, Debug)]
pub struct PairGraph {
    alpha: usize,
    beta: usize,
    alphabet: usize,
    rep: Vec<Option<u32>>,
    parent: Vec<Option<(usize, usize)>>,
    tree_edge: Vec<bool>,
}

impl PairGraph {
    pub fn players(&self) -> (usize, usize) {
        (self.alpha, self.beta)
    }

    fn vid(&self, v: Vertex) -> Result<usize> {
        let side = if v.player == self.alpha {
            0
        } else if v.player == self.beta {
            1
        } else {
            return Err(Error::Precondition(format!(
                "{} is not in the graph of players {} and {}",
                v.label(),
                self.alpha + 1,
                self.beta + 1
            )));
        };
        if v.question as usize >= self.alphabet {
            return Err(Error::OutOfRange(format!("vertex {}", v.label())));
        }
        Ok(side * self.alphabet + v.question as usize)
    }

    fn vertex(&self, id: usize) -> Vertex {
        let player = if id < self.alphabet { self.alpha } else { self.beta };
        Vertex::new(player, (id % self.alphabet) as u32)
    }

    /// Representative (a `beta` question) of `v`'s component.
    pub fn representative(&self, v: Vertex) -> Result<Option<u32>> {
        Ok(self.rep[self.vid(v)?])
    }

    /// Clauses along the tree path from `v` to its representative.
    pub fn path_word(&self, v: Vertex) -> Result<ClauseWord> {
        let mut id = self.vid(v)?;
        if self.rep[id].is_none() {
            return Err(Error::Precondition(format!("{} has no representative", v.label())));
        }
        let mut cw = ClauseWord::new();
        while let Some((clause, up)) = self.parent[id] {
            cw.push(clause);
            id = up;
        }
        Ok(cw)
    }

    /// Clause indices used by some tree path.
    pub fn is_tree_edge(&self, clause: usize) -> bool {
        self.tree_edge.get(clause).copied().unwrap_or(false)
    }
}

pub fn build_pair_graph(game: &Game, alpha: usize, beta: usize) -> Result<PairGraph> {
    let k = game.players();
    if alpha >= k || beta >= k || alpha == beta {
        return Err(Error::Precondition(format!("bad player pair ({}, {})", alpha + 1, beta + 1)));
    }
    let n = game.alphabet();
    let mut adjacency = vec![Vec::new(); 2 * n];
    for (i, c) in game.clauses().iter().enumerate() {
        let (a, b) = (c.questions[alpha] as usize, n + c.questions[beta] as usize);
        adjacency[a].push((b, i));
        adjacency[b].push((a, i));
    }
    for adj in &mut adjacency {
        adj.sort_unstable();
    }
    let mut rep = vec![None; 2 * n];
    let mut parent = vec![None; 2 * n];
    let mut tree_edge = vec![false; game.num_clauses()];
    for root in n..2 * n {
        if rep[root].is_some() {
            continue;
        }
        let r = (root - n) as u32;
        rep[root] = Some(r);
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            for &(y, clause) in &adjacency[x] {
                if rep[y].is_none() {
                    rep[y] = Some(r);
                    parent[y] = Some((clause, x));
                    tree_edge[clause] = true;
                    queue.push_back(y);
                }
            }
        }
    }
    Ok(PairGraph { alpha, beta, alphabet: n, rep, parent, tree_edge })
}

/// A hypergraph path together with the adjacent pairs of it kept by the
/// subsequence rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetWord {
    pub base_path: Vec<usize>,
    pub kept_pairs: Vec<(usize, usize)>,
}

impl GadgetWord {
    pub fn to_clause_word(&self) -> ClauseWord {
        ClauseWord::from_indices(self.kept_pairs.iter().flat_map(|&(y, z)| [y, z]))
    }
}

/// Smallest question asked to `player`.
pub fn base_question(game: &Game, player: usize) -> u32 {
    game.clauses().iter().map(|c| c.questions[player]).min().expect("games have clauses")
}

/// Keeps the adjacent pairs of `path` whose clauses ask `other` the same
/// question.
pub fn kept_pairs(game: &Game, path: &[usize], other: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    let mut t = 0;
    while t + 1 < path.len() {
        if game.question(path[t], other) == game.question(path[t + 1], other) {
            pairs.push((path[t], path[t + 1]));
            t += 2;
        } else {
            t += 1;
        }
    }
    pairs
}

/// Gadget word for question `i` of player 3, relative to `beta ∈ {0, 1}`.
///
/// Takes the shortest hypergraph path from the representative of `x_i^(3)`
/// in the graph of players 3 and `beta` (passed as `pg`) to the base
/// question of `beta`, and keeps the adjacent pairs agreeing on the other
/// player of `{0, 1}`.
pub fn gadget_word(game: &Game, hg: &ClauseHypergraph, pg: &PairGraph, beta: usize, i: u32) -> Result<GadgetWord> {
    if game.players() != 3 || beta > 1 {
        return Err(Error::Precondition("gadget words need 3 players and beta in {1, 2}".into()));
    }
    if pg.players() != (2, beta) {
        return Err(Error::Precondition("pair graph must join player 3 to beta".into()));
    }
    if !hg.is_connected() {
        return Err(Error::Precondition("hypergraph is disconnected".into()));
    }
    let r = pg
        .representative(Vertex::new(2, i))?
        .ok_or_else(|| Error::Precondition(format!("question {} is never asked to player 3", i + 1)))?;
    let target = base_question(game, beta);
    let path = hg
        .shortest_path(Vertex::new(beta, r), Vertex::new(beta, target))
        .ok_or_else(|| Error::Internal("no hypergraph path in a connected game".into()))?;
    let kept_pairs = kept_pairs(game, &path, 1 - beta);
    Ok(GadgetWord { base_path: path, kept_pairs })
}

/// DOT rendering of the hypergraph as its star expansion: one box node per
/// clause joined to its vertices.
pub fn hypergraph_dot(game: &Game) -> String {
    let hg = build_hypergraph(game);
    let mut out = String::from("graph clauses {\n  node [shape=circle];\n");
    for a in 0..game.players() {
        for q in 0..game.alphabet() as u32 {
            let v = Vertex::new(a, q);
            let comp = hg.component_of(v).map_or("none".to_string(), |c| (c + 1).to_string());
            let _ = writeln!(out, "  \"{}\" [component={comp}];", v.label());
        }
    }
    for (i, c) in game.clauses().iter().enumerate() {
        let _ = writeln!(out, "  \"h{}\" [shape=box, label=\"h{} s={}\"];", i + 1, i + 1, c.parity as u8);
        for (a, &q) in c.questions.iter().enumerate() {
            let _ = writeln!(out, "  \"h{}\" -- \"{}\";", i + 1, Vertex::new(a, q).label());
        }
    }
    out.push_str("}\n");
    out
}

/// DOT rendering of a pair graph: representatives red, tree edges blue.
pub fn pair_graph_dot(game: &Game, pg: &PairGraph) -> String {
    let (alpha, beta) = pg.players();
    let mut out = format!("graph pair_{}_{} {{\n  node [shape=circle];\n", alpha + 1, beta + 1);
    for id in 0..2 * pg.alphabet {
        let v = pg.vertex(id);
        let is_rep = v.player == beta && pg.rep[id] == Some(v.question);
        let style = if is_rep { " [color=red, fontcolor=red]" } else { "" };
        let _ = writeln!(out, "  \"{}\"{style};", v.label());
    }
    for (i, c) in game.clauses().iter().enumerate() {
        let a = Vertex::new(alpha, c.questions[alpha]);
        let b = Vertex::new(beta, c.questions[beta]);
        let color = if pg.is_tree_edge(i) { ", color=blue" } else { "" };
        let _ = writeln!(out, "  \"{}\" -- \"{}\" [label=\"h{}\"{color}];", a.label(), b.label(), i + 1);
    }
    out.push_str("}\n");
    out
}
