//! Voltage assignments, derived graphs `X(G, S, α)`, graph morphisms and
//! covers, deck groups, quotient covers and pullbacks.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{bail, Result};
use crate::graph::{Multigraph, Orientation};
use crate::group::{product, FiniteGroup, GroupHom};

/// `α : S → G`, extended to all directed edges by `α(s̄) = α(s)⁻¹`.
#[derive(Debug, Clone)]
pub struct VoltageAssignment {
    graph: Arc<Multigraph>,
    orientation: Orientation,
    group: Arc<FiniteGroup>,
    /// `values[i]` is the voltage of `orientation.edges()[i]`.
    values: Vec<usize>,
    /// Voltage of every directed edge.
    extended: Vec<usize>,
}

impl VoltageAssignment {
    pub fn new(
        graph: Arc<Multigraph>,
        orientation: Orientation,
        group: Arc<FiniteGroup>,
        values: Vec<usize>,
    ) -> Result<Self> {
        if values.len() != orientation.len() {
            bail!(
                Validation,
                "{} voltages for {} oriented edges",
                values.len(),
                orientation.len()
            );
        }
        if orientation.len() * 2 != graph.directed_edge_count() {
            bail!(Validation, "orientation does not match the graph");
        }
        if let Some(v) = values.iter().find(|&&v| v >= group.order()) {
            bail!(Validation, "voltage index {v} is not a group element");
        }
        let mut extended = vec![usize::MAX; graph.directed_edge_count()];
        for (&s, &a) in orientation.edges().iter().zip(&values) {
            extended[s] = a;
            extended[graph.inverse(s)] = group.inv(a);
        }
        if extended.contains(&usize::MAX) {
            bail!(Validation, "orientation does not cover every edge");
        }
        Ok(VoltageAssignment {
            graph,
            orientation,
            group,
            values,
            extended,
        })
    }

    /// Voltages on the graph's own orientation.
    pub fn on_graph(
        graph: Arc<Multigraph>,
        group: Arc<FiniteGroup>,
        values: Vec<usize>,
    ) -> Result<Self> {
        let orientation = graph.orientation().clone();
        VoltageAssignment::new(graph, orientation, group, values)
    }

    pub fn graph(&self) -> &Arc<Multigraph> {
        &self.graph
    }

    pub fn orientation(&self) -> &Orientation {
        &self.orientation
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    /// `α(e)` for any directed edge.
    pub fn voltage(&self, e: usize) -> usize {
        self.extended[e]
    }

    /// Product of voltages along a walk.
    pub fn path_voltage(&self, path: &[usize]) -> usize {
        path.iter().fold(self.group.identity(), |acc, &e| {
            self.group.mul(acc, self.extended[e])
        })
    }

    /// Composes with a homomorphism out of the voltage group.
    pub fn push_forward(&self, f: &GroupHom) -> Result<Self> {
        if **f.source() != *self.group {
            bail!(Validation, "homomorphism source is not the voltage group");
        }
        let values = self.values.iter().map(|&a| f.apply(a)).collect();
        VoltageAssignment::new(
            self.graph.clone(),
            self.orientation.clone(),
            f.target().clone(),
            values,
        )
    }
}

/// A morphism of multigraphs given by its vertex and edge maps.
#[derive(Debug, Clone)]
pub struct CoverMap {
    source: Arc<Multigraph>,
    target: Arc<Multigraph>,
    vertex_map: Vec<usize>,
    edge_map: Vec<usize>,
}

impl CoverMap {
    /// Checks the morphism axioms: `f(o(e)) = o(f(e))`, `f(t(e)) = t(f(e))`
    /// and `f(ē) = f(e)‾`.
    pub fn new(
        source: Arc<Multigraph>,
        target: Arc<Multigraph>,
        vertex_map: Vec<usize>,
        edge_map: Vec<usize>,
    ) -> Result<Self> {
        if vertex_map.len() != source.vertex_count()
            || edge_map.len() != source.directed_edge_count()
        {
            bail!(Validation, "map sizes do not match the source graph");
        }
        if vertex_map.iter().any(|&v| v >= target.vertex_count())
            || edge_map.iter().any(|&e| e >= target.directed_edge_count())
        {
            bail!(Validation, "map values out of range for the target graph");
        }
        for e in 0..source.directed_edge_count() {
            let fe = edge_map[e];
            if vertex_map[source.origin(e)] != target.origin(fe)
                || vertex_map[source.terminus(e)] != target.terminus(fe)
            {
                bail!(
                    Validation,
                    "edge {} is not mapped compatibly with its endpoints",
                    source.edge_label(e)
                );
            }
            if edge_map[source.inverse(e)] != target.inverse(fe) {
                bail!(
                    Validation,
                    "edge {} is not mapped compatibly with inversion",
                    source.edge_label(e)
                );
            }
        }
        Ok(CoverMap {
            source,
            target,
            vertex_map,
            edge_map,
        })
    }

    pub fn identity(graph: Arc<Multigraph>) -> Self {
        CoverMap {
            vertex_map: (0..graph.vertex_count()).collect(),
            edge_map: (0..graph.directed_edge_count()).collect(),
            source: graph.clone(),
            target: graph,
        }
    }

    pub fn source(&self) -> &Arc<Multigraph> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Multigraph> {
        &self.target
    }

    pub fn vertex(&self, v: usize) -> usize {
        self.vertex_map[v]
    }

    pub fn edge(&self, e: usize) -> usize {
        self.edge_map[e]
    }

    pub fn vertex_map(&self) -> &[usize] {
        &self.vertex_map
    }

    pub fn edge_map(&self) -> &[usize] {
        &self.edge_map
    }

    /// `g ∘ self`
    pub fn then(&self, g: &CoverMap) -> Result<CoverMap> {
        if *self.target != *g.source {
            bail!(Validation, "maps are not composable");
        }
        Ok(CoverMap {
            source: self.source.clone(),
            target: g.target.clone(),
            vertex_map: self.vertex_map.iter().map(|&v| g.vertex_map[v]).collect(),
            edge_map: self.edge_map.iter().map(|&e| g.edge_map[e]).collect(),
        })
    }

    /// Surjective on vertices and bijective from each star onto the star
    /// of the image vertex.
    pub fn is_cover(&self) -> bool {
        let mut hit = vec![false; self.target.vertex_count()];
        for &v in &self.vertex_map {
            hit[v] = true;
        }
        if hit.contains(&false) {
            return false;
        }
        let target_stars = self.target.stars();
        let source_stars = self.source.stars();
        for (w, star) in source_stars.iter().enumerate() {
            let image_star = &target_stars[self.vertex_map[w]];
            if star.len() != image_star.len() {
                return false;
            }
            let mut images: Vec<usize> = star.iter().map(|&e| self.edge_map[e]).collect();
            images.sort_unstable();
            images.dedup();
            if images.len() != star.len() {
                return false;
            }
        }
        true
    }

    pub fn is_edge_surjective(&self) -> bool {
        let mut hit = vec![false; self.target.directed_edge_count()];
        for &e in &self.edge_map {
            hit[e] = true;
        }
        !hit.contains(&false)
    }

    /// Number of vertices in each connected component of the source lying
    /// over one vertex of the target (the degree of that component when
    /// this is a cover of a connected graph).
    pub fn component_degrees(&self) -> Vec<usize> {
        let (labels, count) = self.source.components();
        let mut degrees = vec![0; count];
        for (w, &c) in labels.iter().enumerate() {
            if self.vertex_map[w] == 0 {
                degrees[c] += 1;
            }
        }
        degrees
    }

    /// `[Y : X]`; only defined for covers with connected source and target.
    pub fn degree(&self) -> Result<usize> {
        if !self.is_cover() {
            bail!(Precondition, "map is not a cover");
        }
        if !self.source.is_connected() || !self.target.is_connected() {
            bail!(
                Precondition,
                "degree of a cover with disconnected source; per-component degrees {:?}",
                self.component_degrees()
            );
        }
        Ok(self.source.vertex_count() / self.target.vertex_count())
    }

    /// Deck transformations via unique lifting, and whether they act
    /// transitively on a fiber. A disconnected source is never Galois; its
    /// deck group is not enumerated.
    pub fn galois(&self) -> Result<GaloisReport> {
        if !self.is_cover() {
            bail!(Validation, "map is not a cover");
        }
        if !self.source.is_connected() {
            return Ok(GaloisReport {
                galois: false,
                fiber_size: None,
                deck: Vec::new(),
            });
        }
        let w0 = 0;
        let fiber: Vec<usize> = (0..self.source.vertex_count())
            .filter(|&w| self.vertex_map[w] == self.vertex_map[w0])
            .collect();
        let stars = self.source.stars();
        let mut deck = Vec::new();
        for &w in &fiber {
            if let Some(a) = self.lift(w0, w, &stars) {
                deck.push(a);
            }
        }
        Ok(GaloisReport {
            galois: deck.len() == fiber.len(),
            fiber_size: Some(fiber.len()),
            deck,
        })
    }

    /// The unique automorphism over the target sending `w0` to `w`, if any.
    fn lift(&self, w0: usize, w: usize, stars: &[Vec<usize>]) -> Option<Automorphism> {
        let g = &self.source;
        let mut vmap = vec![usize::MAX; g.vertex_count()];
        let mut emap = vec![usize::MAX; g.directed_edge_count()];
        vmap[w0] = w;
        let mut queue = VecDeque::from([w0]);
        while let Some(u) = queue.pop_front() {
            let fu = vmap[u];
            for &e in &stars[u] {
                let image = *stars[fu]
                    .iter()
                    .find(|&&d| self.edge_map[d] == self.edge_map[e])?;
                if emap[e] != usize::MAX && emap[e] != image {
                    return None;
                }
                emap[e] = image;
                let t = g.terminus(e);
                let ft = g.terminus(image);
                if vmap[t] == usize::MAX {
                    vmap[t] = ft;
                    queue.push_back(t);
                } else if vmap[t] != ft {
                    return None;
                }
            }
        }
        let a = Automorphism {
            vertex_map: vmap,
            edge_map: emap,
        };
        is_isomorphism(g, g, &a.vertex_map, &a.edge_map).then_some(a)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automorphism {
    pub vertex_map: Vec<usize>,
    pub edge_map: Vec<usize>,
}

impl Automorphism {
    pub fn is_identity(&self) -> bool {
        self.vertex_map.iter().enumerate().all(|(i, &v)| i == v)
            && self.edge_map.iter().enumerate().all(|(i, &e)| i == e)
    }

    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        Automorphism {
            vertex_map: other
                .vertex_map
                .iter()
                .map(|&v| self.vertex_map[v])
                .collect(),
            edge_map: other.edge_map.iter().map(|&e| self.edge_map[e]).collect(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct GaloisReport {
    pub galois: bool,
    pub fiber_size: Option<usize>,
    pub deck: Vec<Automorphism>,
}

/// Whether the given vertex and edge maps form an isomorphism `a → b`.
pub fn is_isomorphism(a: &Multigraph, b: &Multigraph, vmap: &[usize], emap: &[usize]) -> bool {
    if a.vertex_count() != b.vertex_count() || a.directed_edge_count() != b.directed_edge_count() {
        return false;
    }
    if vmap.len() != a.vertex_count() || emap.len() != a.directed_edge_count() {
        return false;
    }
    let bijective = |map: &[usize], n: usize| {
        let mut hit = vec![false; n];
        map.iter()
            .all(|&x| x < n && !core::mem::replace(&mut hit[x], true))
    };
    if !bijective(vmap, b.vertex_count()) || !bijective(emap, b.directed_edge_count()) {
        return false;
    }
    (0..a.directed_edge_count()).all(|e| {
        let f = emap[e];
        b.origin(f) == vmap[a.origin(e)]
            && b.terminus(f) == vmap[a.terminus(e)]
            && b.inverse(f) == emap[a.inverse(e)]
    })
}

/// `X(G, S, α)` together with its projection to `X`.
#[derive(Debug, Clone)]
pub struct DerivedGraph {
    pub graph: Arc<Multigraph>,
    pub projection: CoverMap,
    pub group_order: usize,
}

impl DerivedGraph {
    /// Index of the vertex `(v, σ)`.
    pub fn vertex(&self, v: usize, sigma: usize) -> usize {
        v * self.group_order + sigma
    }

    /// Index of the edge `(e, σ)`.
    pub fn edge(&self, e: usize, sigma: usize) -> usize {
        e * self.group_order + sigma
    }
}

/// Vertices `(v, σ)` and edges `(e, σ)` from `(o(e), σ)` to
/// `(t(e), σ·α(e))` with `(e, σ)‾ = (ē, σ·α(e))`. The orientation is
/// `p⁻¹(S)`.
pub fn derived_graph(va: &VoltageAssignment) -> Result<DerivedGraph> {
    let x = &va.graph;
    let g = &va.group;
    let n = g.order();
    let names: Vec<String> = (0..n).map(|a| g.format(a)).collect();
    let mut vertex_labels = Vec::with_capacity(x.vertex_count() * n);
    for v in 0..x.vertex_count() {
        for name in &names {
            vertex_labels.push(format!("({},{})", x.vertex_label(v), name));
        }
    }
    let m = x.directed_edge_count();
    let mut edge_labels = Vec::with_capacity(m * n);
    let mut origin = Vec::with_capacity(m * n);
    let mut terminus = Vec::with_capacity(m * n);
    let mut inverse = Vec::with_capacity(m * n);
    for e in 0..m {
        let a = va.voltage(e);
        for (sigma, name) in names.iter().enumerate() {
            let sa = g.mul(sigma, a);
            edge_labels.push(format!("({},{})", x.edge_label(e), name));
            origin.push(x.origin(e) * n + sigma);
            terminus.push(x.terminus(e) * n + sa);
            inverse.push(x.inverse(e) * n + sa);
        }
    }
    let orientation: Vec<usize> = va
        .orientation
        .edges()
        .iter()
        .flat_map(|&s| (0..n).map(move |sigma| s * n + sigma))
        .collect();
    let graph = Arc::new(Multigraph::from_parts(
        vertex_labels,
        edge_labels,
        origin,
        terminus,
        inverse,
        orientation,
    )?);
    let projection = CoverMap {
        vertex_map: (0..graph.vertex_count()).map(|w| w / n).collect(),
        edge_map: (0..graph.directed_edge_count()).map(|d| d / n).collect(),
        source: graph.clone(),
        target: x.clone(),
    };
    Ok(DerivedGraph {
        graph,
        projection,
        group_order: n,
    })
}

#[derive(Debug, Clone)]
pub struct ConnectednessReport {
    pub connected: bool,
    /// `ρ_α(γ)` for each basis loop of `π₁(X, v₀)`.
    pub loop_images: Vec<usize>,
    /// Order of the subgroup they generate.
    pub subgroup_order: usize,
}

/// `X(G, S, α)` is connected iff the voltages of a basis of `π₁(X)`
/// generate `G`. The base graph must be connected.
pub fn voltage_connectedness(va: &VoltageAssignment) -> Result<ConnectednessReport> {
    let basis = va.graph.pi1_basis(0)?;
    let loop_images: Vec<usize> = basis
        .loops
        .iter()
        .map(|l| va.path_voltage(&l.path))
        .collect();
    let subgroup_order = va.group.subgroup_generated(&loop_images).len();
    Ok(ConnectednessReport {
        connected: subgroup_order == va.group.order(),
        loop_images,
        subgroup_order,
    })
}

/// `f_* : X(G, S, α) → X(G₁, S, f∘α)`, `(v, σ) ↦ (v, f(σ))`, for a
/// surjective `f : G → G₁`.
pub fn quotient_cover(
    va: &VoltageAssignment,
    f: &GroupHom,
) -> Result<(DerivedGraph, DerivedGraph, CoverMap)> {
    if !f.is_surjective() {
        bail!(Validation, "quotient map is not surjective");
    }
    let lower = va.push_forward(f)?;
    let y = derived_graph(va)?;
    let y1 = derived_graph(&lower)?;
    let n = y.group_order;
    let n1 = y1.group_order;
    let vertex_map = (0..y.graph.vertex_count())
        .map(|w| (w / n) * n1 + f.apply(w % n))
        .collect();
    let edge_map = (0..y.graph.directed_edge_count())
        .map(|d| (d / n) * n1 + f.apply(d % n))
        .collect();
    let map = CoverMap::new(y.graph.clone(), y1.graph.clone(), vertex_map, edge_map)?;
    Ok((y, y1, map))
}

/// Fiber product `Y₁ ×_X Y₂` with its two projections.
#[derive(Debug, Clone)]
pub struct Pullback {
    pub graph: Arc<Multigraph>,
    pub pi1: CoverMap,
    pub pi2: CoverMap,
    pub component_count: usize,
}

/// Vertices `(w₁, w₂)` and edges `(e₁, e₂)` with equal images in `X`.
/// Disconnected results are returned as is, with their component count.
pub fn pullback(p1: &CoverMap, p2: &CoverMap) -> Result<Pullback> {
    if *p1.target != *p2.target {
        bail!(Validation, "pullback of maps with different targets");
    }
    let x = &p1.target;
    let (y1, y2) = (&p1.source, &p2.source);
    let mut over_vertex: Vec<(Vec<usize>, Vec<usize>)> =
        vec![(Vec::new(), Vec::new()); x.vertex_count()];
    for w in 0..y1.vertex_count() {
        over_vertex[p1.vertex(w)].0.push(w);
    }
    for w in 0..y2.vertex_count() {
        over_vertex[p2.vertex(w)].1.push(w);
    }
    let mut over_edge: Vec<(Vec<usize>, Vec<usize>)> =
        vec![(Vec::new(), Vec::new()); x.directed_edge_count()];
    for e in 0..y1.directed_edge_count() {
        over_edge[p1.edge(e)].0.push(e);
    }
    for e in 0..y2.directed_edge_count() {
        over_edge[p2.edge(e)].1.push(e);
    }

    let mut vertex_pairs = Vec::new();
    let mut vertex_index = alloc::collections::BTreeMap::new();
    for w1 in 0..y1.vertex_count() {
        for &w2 in &over_vertex[p1.vertex(w1)].1 {
            vertex_index.insert((w1, w2), vertex_pairs.len());
            vertex_pairs.push((w1, w2));
        }
    }
    let mut edge_pairs = Vec::new();
    for &s in x.orientation().edges() {
        let (a, b) = &over_edge[s];
        for &e1 in a {
            for &e2 in b {
                edge_pairs.push((e1, e2));
                edge_pairs.push((y1.inverse(e1), y2.inverse(e2)));
            }
        }
    }
    let vertex_labels = vertex_pairs
        .iter()
        .map(|&(a, b)| format!("({},{})", y1.vertex_label(a), y2.vertex_label(b)))
        .collect();
    let edge_labels = edge_pairs
        .iter()
        .map(|&(a, b)| format!("({},{})", y1.edge_label(a), y2.edge_label(b)))
        .collect();
    let origin = edge_pairs
        .iter()
        .map(|&(a, b)| vertex_index[&(y1.origin(a), y2.origin(b))])
        .collect();
    let terminus = edge_pairs
        .iter()
        .map(|&(a, b)| vertex_index[&(y1.terminus(a), y2.terminus(b))])
        .collect();
    let inverse = (0..edge_pairs.len()).map(|k| k ^ 1).collect();
    let orientation = (0..edge_pairs.len()).step_by(2).collect();
    let graph = Arc::new(Multigraph::from_parts(
        vertex_labels,
        edge_labels,
        origin,
        terminus,
        inverse,
        orientation,
    )?);
    let pi1 = CoverMap::new(
        graph.clone(),
        y1.clone(),
        vertex_pairs.iter().map(|p| p.0).collect(),
        edge_pairs.iter().map(|p| p.0).collect(),
    )?;
    let pi2 = CoverMap::new(
        graph.clone(),
        y2.clone(),
        vertex_pairs.iter().map(|p| p.1).collect(),
        edge_pairs.iter().map(|p| p.1).collect(),
    )?;
    let component_count = graph.components().1;
    Ok(Pullback {
        graph,
        pi1,
        pi2,
        component_count,
    })
}

/// `α∘p` on the orientation `S_Y = p⁻¹(S)` of `Y`, listed in edge order.
pub fn pullback_voltage(p: &CoverMap, va: &VoltageAssignment) -> Result<VoltageAssignment> {
    if *p.target != *va.graph {
        bail!(
            Validation,
            "cover target is not the voltage assignment's graph"
        );
    }
    if !p.is_edge_surjective() {
        bail!(Validation, "map is not surjective on directed edges");
    }
    let mut edges = Vec::new();
    let mut values = Vec::new();
    for e in 0..p.source.directed_edge_count() {
        let d = p.edge(e);
        if let Some(i) = va.orientation.position(d) {
            edges.push(e);
            values.push(va.values[i]);
        }
    }
    let orientation = p.source.orientation_from(&edges)?;
    VoltageAssignment::new(p.source.clone(), orientation, va.group.clone(), values)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CombinedIsoReport {
    pub isomorphic: bool,
    pub commutes_with_projections: bool,
    pub vertices: usize,
    pub edges: usize,
}

/// Compares `X(G₂×G₁, S, (β, α))` with `Y(G₁, S_Y, α∘p)` for
/// `Y = X(G₂, S, β)` under `(v, (σ₂, σ₁)) ↦ ((v, σ₂), σ₁)`.
pub fn verify_combined_iso(
    beta: &VoltageAssignment,
    alpha: &VoltageAssignment,
) -> Result<CombinedIsoReport> {
    if *beta.graph != *alpha.graph || beta.orientation != alpha.orientation {
        bail!(Validation, "voltage assignments live on different graphs");
    }
    for (name, va) in [("beta", beta), ("alpha", alpha)] {
        if !voltage_connectedness(va)?.connected {
            bail!(Disconnected, "derived graph for {name} is disconnected");
        }
    }
    let g2 = beta.group.clone();
    let g1 = alpha.group.clone();
    let pg = Arc::new(product((*g2).clone(), (*g1).clone()));
    let gamma_values = beta
        .values
        .iter()
        .zip(&alpha.values)
        .map(|(&b, &a)| pg.pair(b, a))
        .collect();
    let gamma = VoltageAssignment::new(
        beta.graph.clone(),
        beta.orientation.clone(),
        pg.clone(),
        gamma_values,
    )?;
    let z1 = derived_graph(&gamma)?;
    let y = derived_graph(beta)?;
    let lifted = pullback_voltage(&y.projection, alpha)?;
    let z2 = derived_graph(&lifted)?;

    let (n2, n1) = (g2.order(), g1.order());
    let vertex_map: Vec<usize> = (0..z1.graph.vertex_count())
        .map(|w| {
            let (v, pair) = (w / (n2 * n1), w % (n2 * n1));
            z2.vertex(y.vertex(v, pair / n1), pair % n1)
        })
        .collect();
    let edge_map: Vec<usize> = (0..z1.graph.directed_edge_count())
        .map(|d| {
            let (e, pair) = (d / (n2 * n1), d % (n2 * n1));
            z2.edge(y.edge(e, pair / n1), pair % n1)
        })
        .collect();
    let isomorphic = is_isomorphism(&z1.graph, &z2.graph, &vertex_map, &edge_map);
    let down = z2.projection.then(&y.projection)?;
    let commutes_with_projections = isomorphic
        && (0..z1.graph.vertex_count())
            .all(|w| down.vertex(vertex_map[w]) == z1.projection.vertex(w))
        && (0..z1.graph.directed_edge_count())
            .all(|d| down.edge(edge_map[d]) == z1.projection.edge(d));
    Ok(CombinedIsoReport {
        isomorphic,
        commutes_with_projections,
        vertices: z1.graph.vertex_count(),
        edges: z1.graph.undirected_edge_count(),
    })
}

/// Checks that `Y(G, S_Y, α∘f)` is the pullback of `X(G, S, α) → X` along
/// `f : Y → X`, via `(w, (f(w), σ)) ↦ (w, σ)`.
pub fn verify_concrete_fiber(f: &CoverMap, va: &VoltageAssignment) -> Result<bool> {
    let derived = derived_graph(va)?;
    let pb = pullback(f, &derived.projection)?;
    let lifted = derived_graph(&pullback_voltage(f, va)?)?;
    let vertex_map: Vec<usize> = (0..pb.graph.vertex_count())
        .map(|k| lifted.vertex(pb.pi1.vertex(k), pb.pi2.vertex(k) % derived.group_order))
        .collect();
    let edge_map: Vec<usize> = (0..pb.graph.directed_edge_count())
        .map(|k| lifted.edge(pb.pi1.edge(k), pb.pi2.edge(k) % derived.group_order))
        .collect();
    Ok(is_isomorphism(
        &pb.graph,
        &lifted.graph,
        &vertex_map,
        &edge_map,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{bouquet, Multigraph};
    use crate::group::{cyclic, cyclic_reduction, dihedral_8};

    fn assignment(graph: Multigraph, group: FiniteGroup, values: &[&str]) -> VoltageAssignment {
        let group = Arc::new(group);
        let values = values.iter().map(|v| group.parse(v).unwrap()).collect();
        VoltageAssignment::on_graph(Arc::new(graph), group, values).unwrap()
    }

    fn dihedral_example() -> VoltageAssignment {
        assignment(bouquet(3), dihedral_8(), &["(1 2 3 4)", "(1 4)(2 3)", "()"])
    }

    #[test]
    fn double_cover_of_a_loop() {
        let va = assignment(bouquet(1), cyclic(2), &["1"]);
        let y = derived_graph(&va).unwrap();
        assert_eq!(y.graph.vertex_count(), 2);
        assert_eq!(y.graph.undirected_pairs(), vec![(0, 1), (1, 0)]);
        assert!(y.graph.is_connected());
        assert!(y.projection.is_cover());
        assert_eq!(y.projection.degree().unwrap(), 2);
    }

    #[test]
    fn dihedral_cover_is_galois() {
        let va = dihedral_example();
        let y = derived_graph(&va).unwrap();
        assert_eq!(
            (y.graph.vertex_count(), y.graph.undirected_edge_count()),
            (8, 24)
        );
        assert!(voltage_connectedness(&va).unwrap().connected);
        assert!(y.graph.is_connected());
        let report = y.projection.galois().unwrap();
        assert!(report.galois);
        assert_eq!(report.deck.len(), 8);
        assert_eq!(
            y.graph.euler_characteristic(),
            8 * va.graph().euler_characteristic()
        );
    }

    #[test]
    fn disconnected_example() {
        // four edges between two vertices, all voltages 1 in ℤ/2
        let x = Multigraph::from_edges(2, &[(1, 0), (1, 0), (0, 1), (0, 1)]);
        let va = assignment(x, cyclic(2), &["1", "1", "1", "1"]);
        let r = voltage_connectedness(&va).unwrap();
        assert!(!r.connected);
        let y = derived_graph(&va).unwrap();
        assert!(!y.graph.is_connected());
        assert!(y.projection.is_cover());
        assert!(!y.projection.galois().unwrap().galois);
        assert_eq!(y.projection.component_degrees(), vec![1, 1]);
        assert!(y.projection.degree().is_err());
    }

    #[test]
    fn identity_map() {
        let g = Arc::new(bouquet(2));
        let id = CoverMap::identity(g);
        assert!(id.is_cover());
        let r = id.galois().unwrap();
        assert!(r.galois);
        assert_eq!(r.deck.len(), 1);
        assert!(r.deck[0].is_identity());
    }

    #[test]
    fn bad_morphism_is_rejected() {
        let x = Arc::new(Multigraph::from_edges(2, &[(0, 1)]));
        assert!(CoverMap::new(x.clone(), x.clone(), vec![1, 0], vec![0, 1]).is_err());
        assert!(CoverMap::new(x.clone(), x, vec![1, 0], vec![1, 0]).is_ok());
    }

    #[test]
    fn quotient_of_cyclic_tower() {
        let va = assignment(bouquet(3), cyclic(9), &["1", "4", "20"]);
        let f = cyclic_reduction(9, 3).unwrap();
        let (y, y1, map) = quotient_cover(&va, &f).unwrap();
        assert!(map.is_cover());
        assert_eq!(map.degree().unwrap(), 3);
        assert_eq!(y.graph.vertex_count(), 9);
        assert_eq!(map.galois().unwrap().deck.len(), 3);
        assert!(y1.graph.is_connected());
    }

    #[test]
    fn pullback_of_double_cover_along_itself() {
        let va = assignment(bouquet(1), cyclic(2), &["1"]);
        let y = derived_graph(&va).unwrap();
        let pb = pullback(&y.projection, &y.projection).unwrap();
        assert_eq!(pb.component_count, 2);
        assert_eq!(pb.graph.vertex_count(), 4);
        assert!(pb.pi1.is_cover() && pb.pi2.is_cover());
        assert_eq!(pb.pi1.component_degrees(), vec![1, 1]);
        for c in 0..2 {
            let (labels, _) = pb.graph.components();
            let size = labels.iter().filter(|&&l| l == c).count();
            assert_eq!(size, 2);
        }
    }

    #[test]
    fn pullback_along_identity() {
        let va = dihedral_example();
        let y = derived_graph(&va).unwrap();
        let id = CoverMap::identity(va.graph().clone());
        let pb = pullback(&id, &y.projection).unwrap();
        assert!(is_isomorphism(
            &pb.graph,
            &y.graph,
            pb.pi2.vertex_map(),
            pb.pi2.edge_map()
        ));
    }

    #[test]
    fn combined_voltages() {
        let beta = dihedral_example();
        let alpha =
            VoltageAssignment::on_graph(beta.graph().clone(), Arc::new(cyclic(4)), vec![1, 1, 1])
                .unwrap();
        let r = verify_combined_iso(&beta, &alpha).unwrap();
        assert!(r.isomorphic && r.commutes_with_projections);
        assert_eq!(r.vertices, 32);
        let trivial =
            VoltageAssignment::on_graph(beta.graph().clone(), Arc::new(cyclic(1)), vec![0, 0, 0])
                .unwrap();
        assert!(verify_combined_iso(&beta, &trivial).unwrap().isomorphic);
    }

    #[test]
    fn lifted_orientation() {
        let beta = dihedral_example();
        let y = derived_graph(&beta).unwrap();
        let alpha =
            VoltageAssignment::on_graph(beta.graph().clone(), Arc::new(cyclic(4)), vec![1, 1, 1])
                .unwrap();
        let lifted = pullback_voltage(&y.projection, &alpha).unwrap();
        assert_eq!(lifted.orientation().len(), 24);
        assert!(lifted.values().iter().all(|&v| v == 1));
        assert!(verify_concrete_fiber(&y.projection, &alpha).unwrap());
    }
}
