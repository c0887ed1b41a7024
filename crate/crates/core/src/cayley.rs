//! Words over colored generators, Abelian group presentations, finite
//! Cayley-graph balls, and the closed-path homogeneity test.
//!
//! Only Abelian presentations with integer generator vectors are supported for
//! ball construction and the word metric; their word problem is solved by the
//! vector normal form. Arbitrary colored graphs (such as the Petersen graph)
//! can still be probed with [`ColoredGraph::apply_word`].

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

use thiserror::Error;

pub type GenId = u32;
pub type VertexId = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CayleyError {
    #[error("unknown generator id {0}")]
    UnknownGenerator(GenId),
    #[error("unknown generator name {0:?}")]
    UnknownGeneratorName(char),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("no edge of color {color} (exponent {exponent:+}) at vertex {vertex}")]
    MissingEdge {
        vertex: VertexId,
        color: GenId,
        exponent: i8,
    },
    #[error("presentation is not declared Abelian")]
    NonAbelian,
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("target not reachable within word length {bound}")]
    Unreachable { bound: usize },
    #[error("vector has dimension {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// One generator of `S₊`. `inverse_of == Some(id)` marks a self-inverse
/// generator (drawn as an undirected edge); `None` means its inverse is the
/// formal letter with exponent −1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub id: GenId,
    pub name: char,
    pub inverse_of: Option<GenId>,
}

impl Generator {
    pub fn new(id: GenId, name: char) -> Self {
        Self {
            id,
            name,
            inverse_of: None,
        }
    }

    pub fn self_inverse(id: GenId, name: char) -> Self {
        Self {
            id,
            name,
            inverse_of: Some(id),
        }
    }

    pub fn is_self_inverse(&self) -> bool {
        self.inverse_of == Some(self.id)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: GenId,
    pub exp: i8,
}

impl Letter {
    pub fn new(gen: GenId, exp: i8) -> Self {
        Self { gen, exp }
    }

    pub fn inverse(self) -> Self {
        Self {
            gen: self.gen,
            exp: -self.exp,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Word {
    pub letters: Vec<Letter>,
}

impl Word {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new(letters: Vec<Letter>) -> Self {
        Self { letters }
    }

    pub fn from_pairs(pairs: &[(GenId, i8)]) -> Self {
        Self::new(pairs.iter().map(|&(g, e)| Letter::new(g, e)).collect())
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// `w⁻¹`: letters reversed with exponents negated.
    pub fn inverse(&self) -> Self {
        Self::new(self.letters.iter().rev().map(|l| l.inverse()).collect())
    }

    /// Juxtaposition `w·w'`.
    pub fn concat(&self, other: &Word) -> Self {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Self::new(letters)
    }

    /// Parses a word over single-character generator names; an uppercase
    /// character denotes the inverse letter (`"abAB"` is `aba⁻¹b⁻¹`).
    pub fn parse(text: &str, generators: &[Generator]) -> Result<Self, CayleyError> {
        let mut letters = Vec::with_capacity(text.len());
        for ch in text.chars().filter(|c| !c.is_whitespace()) {
            let lower = ch.to_ascii_lowercase();
            let gen = generators
                .iter()
                .find(|g| g.name == lower)
                .ok_or(CayleyError::UnknownGeneratorName(ch))?;
            let exp = if ch.is_ascii_uppercase() { -1 } else { 1 };
            letters.push(Letter::new(gen.id, exp));
        }
        Ok(Self::new(letters))
    }
}

/// Free reduction of `w` relative to a generator set: cancels adjacent
/// `h h⁻¹`, `h⁻¹ h`, and `b b` for self-inverse `b`.
pub fn reduce_word(w: &Word, generators: &[Generator]) -> Result<Word, CayleyError> {
    let mut stack: Vec<Letter> = Vec::with_capacity(w.len());
    for &letter in &w.letters {
        let gen = generators
            .iter()
            .find(|g| g.id == letter.gen)
            .ok_or(CayleyError::UnknownGenerator(letter.gen))?;
        let letter = if gen.is_self_inverse() {
            Letter::new(letter.gen, 1)
        } else {
            letter
        };
        match stack.last() {
            Some(&top) if top == letter.inverse() || (gen.is_self_inverse() && top == letter) => {
                stack.pop();
            }
            _ => stack.push(letter),
        }
    }
    Ok(Word::new(stack))
}

/// `G = ⟨S | R⟩`, optionally declared as a presentation of `Zᵈ` through
/// integer generator vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupPresentation {
    pub generators: Vec<Generator>,
    pub relators: Vec<Word>,
    pub abelian_rank: Option<usize>,
    vectors: BTreeMap<GenId, Vec<i64>>,
}

impl GroupPresentation {
    /// A general presentation; nothing beyond generator references is checked.
    pub fn new(generators: Vec<Generator>, relators: Vec<Word>) -> Result<Self, CayleyError> {
        let p = Self {
            generators,
            relators,
            abelian_rank: None,
            vectors: BTreeMap::new(),
        };
        p.check_generators()?;
        Ok(p)
    }

    /// A declared presentation of `Zᵈ`. Every relator must sum to zero.
    pub fn abelian(
        rank: usize,
        generators: Vec<(Generator, Vec<i64>)>,
        relators: Vec<Word>,
    ) -> Result<Self, CayleyError> {
        let mut vectors = BTreeMap::new();
        let mut gens = Vec::with_capacity(generators.len());
        for (g, v) in generators {
            if v.len() != rank {
                return Err(CayleyError::DimensionMismatch {
                    expected: rank,
                    got: v.len(),
                });
            }
            vectors.insert(g.id, v);
            gens.push(g);
        }
        let p = Self {
            generators: gens,
            relators,
            abelian_rank: Some(rank),
            vectors,
        };
        p.check_generators()?;
        for (i, r) in p.relators.iter().enumerate() {
            if p.word_vector(r)?.iter().any(|&x| x != 0) {
                return Err(CayleyError::InvalidPresentation(format!(
                    "relator {i} does not sum to zero"
                )));
            }
        }
        Ok(p)
    }

    fn check_generators(&self) -> Result<(), CayleyError> {
        let mut ids = HashSet::new();
        for g in &self.generators {
            if !ids.insert(g.id) {
                return Err(CayleyError::InvalidPresentation(format!(
                    "duplicate generator id {}",
                    g.id
                )));
            }
        }
        for g in &self.generators {
            if let Some(inv) = g.inverse_of {
                let partner = self
                    .generator(inv)
                    .ok_or(CayleyError::UnknownGenerator(inv))?;
                // the pairing must be an involution
                if partner.inverse_of != Some(g.id) {
                    return Err(CayleyError::InvalidPresentation(format!(
                        "inverse pairing of {} is not an involution",
                        g.id
                    )));
                }
            }
        }
        for r in &self.relators {
            for l in &r.letters {
                if self.generator(l.gen).is_none() {
                    return Err(CayleyError::UnknownGenerator(l.gen));
                }
            }
        }
        Ok(())
    }

    pub fn generator(&self, id: GenId) -> Option<&Generator> {
        self.generators.iter().find(|g| g.id == id)
    }

    pub fn vector(&self, id: GenId) -> Option<&[i64]> {
        self.vectors.get(&id).map(Vec::as_slice)
    }

    /// `ℤ = ⟨a | ⟩`.
    pub fn z1() -> Self {
        Self::abelian(1, vec![(Generator::new(0, 'a'), vec![1])], vec![])
            .expect("valid presentation")
    }

    /// `ℤ² = ⟨a, b | aba⁻¹b⁻¹⟩` (square lattice).
    pub fn square() -> Self {
        let gens = vec![
            (Generator::new(0, 'a'), vec![1, 0]),
            (Generator::new(1, 'b'), vec![0, 1]),
        ];
        let comm = Word::from_pairs(&[(0, 1), (1, 1), (0, -1), (1, -1)]);
        Self::abelian(2, gens, vec![comm]).expect("valid presentation")
    }

    /// Body-centred cubic presentation of `ℤ³`: four generators with
    /// `h₁+h₂+h₃+h₄ = 0` plus commutation relators.
    pub fn bcc() -> Self {
        let gens = vec![
            (Generator::new(0, 'a'), vec![1, 0, 0]),
            (Generator::new(1, 'b'), vec![0, 1, 0]),
            (Generator::new(2, 'c'), vec![0, 0, 1]),
            (Generator::new(3, 'd'), vec![-1, -1, -1]),
        ];
        let mut relators = vec![Word::from_pairs(&[(0, 1), (1, 1), (2, 1), (3, 1)])];
        for i in 0..4u32 {
            for j in (i + 1)..4 {
                relators.push(Word::from_pairs(&[(i, 1), (j, 1), (i, -1), (j, -1)]));
            }
        }
        Self::abelian(3, gens, relators).expect("valid presentation")
    }

    pub fn reduce(&self, w: &Word) -> Result<Word, CayleyError> {
        reduce_word(w, &self.generators)
    }

    /// Integer vector of a word (its normal form in `Zᵈ`).
    pub fn word_vector(&self, w: &Word) -> Result<Vec<i64>, CayleyError> {
        let rank = self.abelian_rank.ok_or(CayleyError::NonAbelian)?;
        let mut acc = vec![0i64; rank];
        for l in &w.letters {
            let v = self
                .vectors
                .get(&l.gen)
                .ok_or(CayleyError::UnknownGenerator(l.gen))?;
            for (a, x) in acc.iter_mut().zip(v) {
                *a += i64::from(l.exp) * x;
            }
        }
        Ok(acc)
    }

    /// Vectors of `S₊ ∪ S₋`.
    fn step_vectors(&self) -> Result<Vec<Vec<i64>>, CayleyError> {
        self.abelian_rank.ok_or(CayleyError::NonAbelian)?;
        let mut steps = Vec::new();
        for v in self.vectors.values() {
            steps.push(v.clone());
            steps.push(v.iter().map(|x| -x).collect());
        }
        Ok(steps)
    }
}

/// Breadth-first ball of the given word-metric radius around the identity.
pub fn cayley_ball(p: &GroupPresentation, radius: usize) -> Result<ColoredGraph, CayleyError> {
    let steps = p.step_vectors()?;
    let rank = p.abelian_rank.ok_or(CayleyError::NonAbelian)?;
    let origin = vec![0i64; rank];
    let mut dist: HashMap<Vec<i64>, usize> = HashMap::new();
    let mut order = vec![origin.clone()];
    dist.insert(origin.clone(), 0);
    let mut queue = VecDeque::from([origin]);
    while let Some(x) = queue.pop_front() {
        let dx = dist[&x];
        if dx == radius {
            continue;
        }
        for s in &steps {
            let y: Vec<i64> = x.iter().zip(s).map(|(a, b)| a + b).collect();
            if !dist.contains_key(&y) {
                dist.insert(y.clone(), dx + 1);
                order.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    let index: HashMap<&Vec<i64>, VertexId> = order
        .iter()
        .enumerate()
        .map(|(i, v)| (v, i as VertexId))
        .collect();
    let mut edges = Vec::new();
    for (i, x) in order.iter().enumerate() {
        for g in &p.generators {
            let v = &p.vectors[&g.id];
            let y: Vec<i64> = x.iter().zip(v).map(|(a, b)| a + b).collect();
            if let Some(&j) = index.get(&y) {
                edges.push(Edge {
                    tail: i as VertexId,
                    head: j,
                    color: g.id,
                });
            }
        }
    }
    let colors = p
        .generators
        .iter()
        .map(|g| Color {
            id: g.id,
            name: g.name,
            undirected: g.is_self_inverse(),
        })
        .collect();
    let mut graph = ColoredGraph::new((0..order.len() as VertexId).collect(), edges, colors)?;
    graph.coordinates = Some(order);
    Ok(graph)
}

/// Minimal word length from `g1` to `g2` over `S ∪ S⁻¹` (BFS bounded by
/// `bound` letters).
pub fn word_metric(
    p: &GroupPresentation,
    g1: &[i64],
    g2: &[i64],
    bound: usize,
) -> Result<usize, CayleyError> {
    let rank = p.abelian_rank.ok_or(CayleyError::NonAbelian)?;
    for g in [g1, g2] {
        if g.len() != rank {
            return Err(CayleyError::DimensionMismatch {
                expected: rank,
                got: g.len(),
            });
        }
    }
    let target: Vec<i64> = g2.iter().zip(g1).map(|(a, b)| a - b).collect();
    let origin = vec![0i64; rank];
    if target == origin {
        return Ok(0);
    }
    let steps = p.step_vectors()?;
    let mut seen = HashSet::from([origin.clone()]);
    let mut frontier = vec![origin];
    for depth in 1..=bound {
        let mut next = Vec::new();
        for x in &frontier {
            for s in &steps {
                let y: Vec<i64> = x.iter().zip(s).map(|(a, b)| a + b).collect();
                if y == target {
                    return Ok(depth);
                }
                if seen.insert(y.clone()) {
                    next.push(y);
                }
            }
        }
        frontier = next;
    }
    Err(CayleyError::Unreachable { bound })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub tail: VertexId,
    pub head: VertexId,
    pub color: GenId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Color {
    pub id: GenId,
    pub name: char,
    /// Self-inverse colors are stored once as undirected edges.
    pub undirected: bool,
}

/// A colored directed graph with at most one outgoing and one incoming edge
/// per vertex and color.
#[derive(Debug, Clone)]
pub struct ColoredGraph {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<Edge>,
    pub colors: Vec<Color>,
    /// Integer coordinates of each vertex (same order as `vertices`) when the
    /// graph is a ball of a `Zᵈ` presentation.
    pub coordinates: Option<Vec<Vec<i64>>>,
    forward: HashMap<(VertexId, GenId), VertexId>,
    backward: HashMap<(VertexId, GenId), VertexId>,
}

impl ColoredGraph {
    pub fn new(
        vertices: Vec<VertexId>,
        edges: Vec<Edge>,
        colors: Vec<Color>,
    ) -> Result<Self, CayleyError> {
        let vset: HashSet<VertexId> = vertices.iter().copied().collect();
        let mut forward = HashMap::new();
        let mut backward = HashMap::new();
        for e in &edges {
            for v in [e.tail, e.head] {
                if !vset.contains(&v) {
                    return Err(CayleyError::UnknownVertex(v));
                }
            }
            let color = colors
                .iter()
                .find(|c| c.id == e.color)
                .ok_or(CayleyError::UnknownGenerator(e.color))?;
            let mut link = |a: VertexId, b: VertexId| -> Result<(), CayleyError> {
                if forward.insert((a, e.color), b).is_some()
                    || backward.insert((b, e.color), a).is_some()
                {
                    return Err(CayleyError::InvalidPresentation(format!(
                        "color {} appears twice at a vertex",
                        e.color
                    )));
                }
                Ok(())
            };
            link(e.tail, e.head)?;
            if color.undirected {
                link(e.head, e.tail)?;
            }
        }
        Ok(Self {
            vertices,
            edges,
            colors,
            coordinates: None,
            forward,
            backward,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Number of edge endpoints at `v` (undirected edges count once).
    pub fn degree(&self, v: VertexId) -> usize {
        self.edges
            .iter()
            .filter(|e| e.tail == v || e.head == v)
            .count()
    }

    pub fn color_id(&self, name: char) -> Option<GenId> {
        self.colors.iter().find(|c| c.name == name).map(|c| c.id)
    }

    pub fn generators(&self) -> Vec<Generator> {
        self.colors
            .iter()
            .map(|c| {
                if c.undirected {
                    Generator::self_inverse(c.id, c.name)
                } else {
                    Generator::new(c.id, c.name)
                }
            })
            .collect()
    }

    /// The out-neighbour of `v` along `color` with the given exponent.
    pub fn step(&self, v: VertexId, letter: Letter) -> Result<VertexId, CayleyError> {
        let table = if letter.exp > 0 {
            &self.forward
        } else {
            &self.backward
        };
        table
            .get(&(v, letter.gen))
            .copied()
            .ok_or(CayleyError::MissingEdge {
                vertex: v,
                color: letter.gen,
                exponent: letter.exp,
            })
    }

    /// Endpoint of the path spelled by `w` from `v`.
    pub fn apply_word(&self, v: VertexId, w: &Word) -> Result<VertexId, CayleyError> {
        if !self.vertices.contains(&v) {
            return Err(CayleyError::UnknownVertex(v));
        }
        w.letters.iter().try_fold(v, |at, &l| self.step(at, l))
    }

    /// Vertex with the given integer coordinates, for balls.
    pub fn vertex_at(&self, coords: &[i64]) -> Option<VertexId> {
        let table = self.coordinates.as_ref()?;
        table
            .iter()
            .position(|c| c.as_slice() == coords)
            .map(|i| self.vertices[i])
    }

    pub fn coordinates_of(&self, v: VertexId) -> Option<&[i64]> {
        let i = self.vertices.iter().position(|&x| x == v)?;
        self.coordinates.as_ref().map(|t| t[i].as_slice())
    }

    /// One `tail head color direction` record per line.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for e in &self.edges {
            let color = self.colors.iter().find(|c| c.id == e.color).unwrap();
            let dir = if color.undirected {
                "undirected"
            } else {
                "directed"
            };
            let _ = writeln!(out, "{} {} {} {}", e.tail, e.head, color.name, dir);
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogeneityReport {
    pub uniform: bool,
    /// Sampled vertices where the path is closed.
    pub closed: Vec<VertexId>,
    /// Sampled vertices where the path is open, with the endpoint reached.
    pub open: Vec<(VertexId, VertexId)>,
}

/// A path is uniform when it is closed at every sampled vertex or open at
/// every sampled vertex.
pub fn homogeneity_path_check(
    g: &ColoredGraph,
    w: &Word,
    sample: &[VertexId],
) -> Result<HomogeneityReport, CayleyError> {
    let mut closed = Vec::new();
    let mut open = Vec::new();
    for &v in sample {
        let end = g.apply_word(v, w)?;
        if end == v {
            closed.push(v);
        } else {
            open.push((v, end));
        }
    }
    Ok(HomogeneityReport {
        uniform: closed.is_empty() || open.is_empty(),
        closed,
        open,
    })
}

/// One admissible coloring of the Petersen graph: a perfect matching drawn
/// with the undirected color `b` and its complementary 2-factor oriented into
/// directed `r`-cycles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PetersenColoring {
    pub b_edges: Vec<(VertexId, VertexId)>,
    pub r_arcs: Vec<(VertexId, VertexId)>,
    /// Vertices at which `brrbr` is closed.
    pub brrbr_closed: BTreeSet<VertexId>,
}

const PETERSEN_B: GenId = 0;
const PETERSEN_R: GenId = 1;

fn petersen_edges() -> Vec<(VertexId, VertexId)> {
    let mut edges = BTreeSet::new();
    for i in 0..5u32 {
        let outer = (i + 1, (i + 1) % 5 + 1);
        let spoke = (i + 1, i + 6);
        let inner = (i + 6, (i + 2) % 5 + 6);
        for (a, b) in [outer, spoke, inner] {
            edges.insert((a.min(b), a.max(b)));
        }
    }
    edges.into_iter().collect()
}

fn colored_petersen(
    b_edges: &[(VertexId, VertexId)],
    r_arcs: &[(VertexId, VertexId)],
) -> ColoredGraph {
    let colors = vec![
        Color {
            id: PETERSEN_B,
            name: 'b',
            undirected: true,
        },
        Color {
            id: PETERSEN_R,
            name: 'r',
            undirected: false,
        },
    ];
    let mut edges: Vec<Edge> = b_edges
        .iter()
        .map(|&(tail, head)| Edge {
            tail,
            head,
            color: PETERSEN_B,
        })
        .collect();
    edges.extend(r_arcs.iter().map(|&(tail, head)| Edge {
        tail,
        head,
        color: PETERSEN_R,
    }));
    ColoredGraph::new((1..=10).collect(), edges, colors).expect("valid coloring")
}

fn brrbr() -> Word {
    Word::from_pairs(&[
        (PETERSEN_B, 1),
        (PETERSEN_R, 1),
        (PETERSEN_R, 1),
        (PETERSEN_B, 1),
        (PETERSEN_R, 1),
    ])
}

/// Every admissible coloring of the Petersen graph on its standard labelling
/// (outer cycle 1–5, spokes `i`–`i+5`, inner pentagram), in lexicographic
/// order of (matching, orientation).
pub fn petersen_colorings() -> Vec<PetersenColoring> {
    let edges = petersen_edges();
    let mut found = Vec::new();
    for matching in combinations(edges.len(), 5) {
        let b_edges: Vec<_> = matching.iter().map(|&i| edges[i]).collect();
        let covered: BTreeSet<VertexId> = b_edges.iter().flat_map(|&(a, b)| [a, b]).collect();
        if covered.len() != 10 {
            continue;
        }
        let rest: Vec<_> = edges
            .iter()
            .enumerate()
            .filter(|(i, _)| !matching.contains(i))
            .map(|(_, &e)| e)
            .collect();
        for mask in 0u32..(1 << rest.len()) {
            let arcs: Vec<(VertexId, VertexId)> = rest
                .iter()
                .enumerate()
                .map(|(i, &(a, b))| if mask >> i & 1 == 0 { (a, b) } else { (b, a) })
                .collect();
            let tails: BTreeSet<_> = arcs.iter().map(|a| a.0).collect();
            let heads: BTreeSet<_> = arcs.iter().map(|a| a.1).collect();
            if tails.len() != 10 || heads.len() != 10 {
                continue;
            }
            let g = colored_petersen(&b_edges, &arcs);
            let w = brrbr();
            let brrbr_closed = g
                .vertices
                .iter()
                .copied()
                .filter(|&v| g.apply_word(v, &w) == Ok(v))
                .collect();
            found.push(PetersenColoring {
                b_edges: b_edges.clone(),
                r_arcs: arcs,
                brrbr_closed,
            });
        }
    }
    found
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// The Petersen graph with its (unique up to symmetry) coloring, labelled so
/// that `brrbr` is closed at vertex 1 and leads from vertex 2 to vertex 3.
///
/// The first coloring of [`petersen_colorings`] that splits `brrbr` is taken;
/// its smallest closed vertex becomes 1, its smallest open vertex becomes 2,
/// that vertex's `brrbr` endpoint becomes 3, and the remaining vertices keep
/// their relative order as 4..10.
pub fn petersen_graph() -> ColoredGraph {
    let coloring = petersen_colorings()
        .into_iter()
        .find(|c| !c.brrbr_closed.is_empty() && c.brrbr_closed.len() < 10)
        .expect("Petersen coloring search is non-empty");
    let g = colored_petersen(&coloring.b_edges, &coloring.r_arcs);
    let w = brrbr();
    let one = *coloring.brrbr_closed.first().unwrap();
    let two = (1..=10).find(|v| !coloring.brrbr_closed.contains(v)).unwrap();
    let three = g.apply_word(two, &w).unwrap();
    let mut relabel = BTreeMap::from([(one, 1), (two, 2), (three, 3)]);
    let mut next = 4;
    for v in 1..=10 {
        if let std::collections::btree_map::Entry::Vacant(e) = relabel.entry(v) {
            e.insert(next);
            next += 1;
        }
    }
    let map = |(a, b): (VertexId, VertexId)| (relabel[&a], relabel[&b]);
    let b_edges: Vec<_> = coloring.b_edges.iter().copied().map(map).collect();
    let r_arcs: Vec<_> = coloring.r_arcs.iter().copied().map(map).collect();
    colored_petersen(&b_edges, &r_arcs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gens3() -> Vec<Generator> {
        (0..3).map(|i| Generator::new(i, (b'a' + i as u8) as char)).collect()
    }

    #[test]
    fn reduce_cancels_inverse_pair() {
        let w = Word::from_pairs(&[(0, 1), (0, -1)]);
        assert!(reduce_word(&w, &gens3()).unwrap().is_empty());
    }

    #[test]
    fn reduce_inner_cancellation() {
        let w = Word::from_pairs(&[(0, 1), (1, 1), (1, -1), (2, 1)]);
        assert_eq!(
            reduce_word(&w, &gens3()).unwrap(),
            Word::from_pairs(&[(0, 1), (2, 1)])
        );
    }

    #[test]
    fn inverse_word() {
        let w = Word::from_pairs(&[(0, 1), (1, -1)]);
        assert_eq!(w.inverse(), Word::from_pairs(&[(1, 1), (0, -1)]));
        let both = reduce_word(&w.concat(&w.inverse()), &gens3()).unwrap();
        assert!(both.is_empty());
    }

    #[test]
    fn reduce_unknown_generator() {
        let w = Word::from_pairs(&[(7, 1)]);
        assert_eq!(
            reduce_word(&w, &gens3()),
            Err(CayleyError::UnknownGenerator(7))
        );
    }

    #[test]
    fn self_inverse_letters_cancel() {
        let gens = vec![Generator::self_inverse(0, 'b'), Generator::new(1, 'r')];
        let w = Word::from_pairs(&[(1, 1), (0, 1), (0, -1), (1, -1)]);
        assert!(reduce_word(&w, &gens).unwrap().is_empty());
    }

    #[test]
    fn commutator_closed_on_square_ball() {
        let p = GroupPresentation::square();
        let ball = cayley_ball(&p, 3).unwrap();
        let origin = ball.vertex_at(&[0, 0]).unwrap();
        let w = Word::parse("abAB", &p.generators).unwrap();
        assert_eq!(ball.apply_word(origin, &w), Ok(origin));
    }

    #[test]
    fn ball_sizes() {
        assert_eq!(cayley_ball(&GroupPresentation::bcc(), 0).unwrap().vertex_count(), 1);
        assert_eq!(cayley_ball(&GroupPresentation::z1(), 2).unwrap().vertex_count(), 5);
        assert_eq!(cayley_ball(&GroupPresentation::bcc(), 1).unwrap().vertex_count(), 9);
    }

    #[test]
    fn ball_rejects_non_abelian() {
        let p = GroupPresentation::new(gens3(), vec![]).unwrap();
        assert_eq!(cayley_ball(&p, 1).unwrap_err(), CayleyError::NonAbelian);
        assert_eq!(
            word_metric(&p, &[0], &[0], 4).unwrap_err(),
            CayleyError::NonAbelian
        );
    }

    #[test]
    fn relator_must_vanish() {
        let gens = vec![(Generator::new(0, 'a'), vec![1])];
        let bad = GroupPresentation::abelian(1, gens, vec![Word::from_pairs(&[(0, 1)])]);
        assert!(matches!(bad, Err(CayleyError::InvalidPresentation(_))));
    }

    #[test]
    fn boundary_missing_edge_is_reported() {
        let ball = cayley_ball(&GroupPresentation::z1(), 1).unwrap();
        let end = ball.vertex_at(&[1]).unwrap();
        let err = ball.apply_word(end, &Word::from_pairs(&[(0, 1)])).unwrap_err();
        assert!(matches!(err, CayleyError::MissingEdge { exponent: 1, .. }));
    }

    #[test]
    fn metric_examples() {
        let z = GroupPresentation::z1();
        assert_eq!(word_metric(&z, &[4], &[4], 8), Ok(0));
        assert_eq!(word_metric(&z, &[0], &[3], 8), Ok(3));
        assert_eq!(
            word_metric(&z, &[0], &[30], 8),
            Err(CayleyError::Unreachable { bound: 8 })
        );
        let bcc = GroupPresentation::bcc();
        // h₁ + h₂ in integer coordinates
        assert_eq!(word_metric(&bcc, &[0, 0, 0], &[1, 1, 0], 6), Ok(2));
    }

    #[test]
    fn petersen_structure() {
        let g = petersen_graph();
        assert_eq!(g.vertex_count(), 10);
        let b = g.color_id('b').unwrap();
        let r = g.color_id('r').unwrap();
        for &v in &g.vertices {
            assert_eq!(g.degree(v), 3);
            let b_count = g
                .edges
                .iter()
                .filter(|e| e.color == b && (e.tail == v || e.head == v))
                .count();
            assert_eq!(b_count, 1);
            assert_eq!(g.edges.iter().filter(|e| e.color == r && e.tail == v).count(), 1);
            assert_eq!(g.edges.iter().filter(|e| e.color == r && e.head == v).count(), 1);
        }
    }

    #[test]
    fn petersen_brrbr_split() {
        let g = petersen_graph();
        let w = Word::parse("brrbr", &g.generators()).unwrap();
        assert_eq!(g.apply_word(1, &w), Ok(1));
        assert_eq!(g.apply_word(2, &w), Ok(3));
        let report = homogeneity_path_check(&g, &w, &[1, 2]).unwrap();
        assert!(!report.uniform);
        assert_eq!(report.closed, vec![1]);
        assert_eq!(report.open, vec![(2, 3)]);
    }

    #[test]
    fn every_petersen_coloring_splits_brrbr() {
        let all = petersen_colorings();
        // 6 perfect matchings × 4 orientations of the two complementary 5-cycles
        assert_eq!(all.len(), 24);
        assert!(all.iter().all(|c| c.brrbr_closed.len() == 5));
    }

    #[test]
    fn empty_word_is_uniform() {
        let g = petersen_graph();
        let report = homogeneity_path_check(&g, &Word::empty(), &g.vertices).unwrap();
        assert!(report.uniform);
        assert_eq!(report.closed.len(), 10);
    }

    #[test]
    fn edge_list_format() {
        let g = petersen_graph();
        let text = g.to_edge_list();
        assert_eq!(text.lines().count(), 15);
        assert_eq!(text.lines().filter(|l| l.ends_with(" b undirected")).count(), 5);
        assert_eq!(text.lines().filter(|l| l.ends_with(" r directed")).count(), 10);
    }
}
