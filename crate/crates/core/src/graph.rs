//! Graphs of isotropy data for the rank-2 torus, their canonical form, and
//! the fiber-sum assembly of chain germs.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::cone::GoodCone;
use crate::construct::close_chain;
use crate::error::{Error, Result};
use crate::euler::{extremes, Extreme};
use crate::exactnum::{bezout3, det3, egcd, Mat3, Quad, V2, V3};
use crate::json;
use crate::reeb::{
    choose_transverse_circle, is_admissible, isotropy_profile, lie_g_normal, moment_polygon, IsotropyProfile,
    ReebVector, DEFAULT_RADIUS,
};

/// A cyclic subgroup of `(Q/Z)^2` given by its order and a generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicSubgroup {
    pub order: BigInt,
    pub generator: [BigRational; 2],
}

fn frac(x: &BigRational) -> BigRational {
    x - BigRational::from_integer(x.floor().to_integer())
}

impl CyclicSubgroup {
    /// The subgroup generated by `g`, represented by its lexicographically
    /// smallest generator in `[0, 1)^2`.
    pub fn generated_by(g: [BigRational; 2]) -> CyclicSubgroup {
        let g = [frac(&g[0]), frac(&g[1])];
        let order = g[0].denom().lcm(g[1].denom());
        let mut best: Option<[BigRational; 2]> = None;
        let mut j = BigInt::one();
        while j < order || (order.is_one() && j.is_one()) {
            if j.gcd(&order).is_one() {
                let s = BigRational::from_integer(j.clone());
                let c = [frac(&(&g[0] * &s)), frac(&(&g[1] * &s))];
                if best.as_ref().map_or(true, |b| c < *b) {
                    best = Some(c);
                }
            }
            j += 1;
            if order.is_one() {
                break;
            }
        }
        CyclicSubgroup { order, generator: best.unwrap_or(g) }
    }

    fn transform(&self, a: &[[BigInt; 2]; 2]) -> CyclicSubgroup {
        let g = &self.generator;
        let e = |r: usize| {
            BigRational::from_integer(a[r][0].clone()) * &g[0] + BigRational::from_integer(a[r][1].clone()) * &g[1]
        };
        CyclicSubgroup::generated_by([e(0), e(1)])
    }

    fn to_json(&self) -> Value {
        json!({"order": json::int(&self.order), "generator": [json::rat(&self.generator[0]), json::rat(&self.generator[1])]})
    }

    fn token(&self) -> String {
        format!("{};{},{}", self.order, self.generator[0], self.generator[1])
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Vertex {
    /// A closed orbit with one-dimensional isotropy; `order` counts the components.
    Regular { order: BigInt, direction: V2, extreme: bool },
    /// A three-dimensional critical component (a flat face).
    Fat { direction: V2, multiplicities: Vec<BigInt>, normal_euler: Option<BigInt> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub ends: (usize, usize),
    pub isotropy: CyclicSubgroup,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsotropyGraph {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    /// The Reeb element in coordinates of a basis of Lie(G)_Z.
    pub reeb_class: [Quad; 2],
}

fn v2_json(v: &V2) -> Value {
    json::v2(v)
}

fn normalize_v2(v: &V2) -> V2 {
    let g = v.0[0].gcd(&v.0[1]);
    let mut w = if g.is_zero() { v.clone() } else { V2([&v.0[0] / &g, &v.0[1] / &g]) };
    if w.0[0].is_negative() || (w.0[0].is_zero() && w.0[1].is_negative()) {
        w = V2([-&w.0[0], -&w.0[1]]);
    }
    w
}

impl IsotropyGraph {
    pub fn fat_count(&self) -> usize {
        self.vertices.iter().filter(|v| matches!(v, Vertex::Fat { .. })).count()
    }

    pub fn to_json(&self) -> Value {
        let vs: Vec<Value> = self
            .vertices
            .iter()
            .map(|v| match v {
                Vertex::Regular { order, direction, extreme } => json!({
                    "type": "regular", "order": json::int(order), "direction": v2_json(direction), "extreme": extreme,
                }),
                Vertex::Fat { direction, multiplicities, normal_euler } => json!({
                    "type": "fat", "direction": v2_json(direction), "genus": 0,
                    "multiplicities": json::ints(multiplicities),
                    "normal_euler": normal_euler.as_ref().map(json::int),
                }),
            })
            .collect();
        let es: Vec<Value> = self
            .edges
            .iter()
            .map(|e| json!({"ends": [e.ends.0, e.ends.1], "isotropy": e.isotropy.to_json()}))
            .collect();
        json!({
            "vertices": vs,
            "edges": es,
            "reeb_class": [json::quad(&self.reeb_class[0]), json::quad(&self.reeb_class[1])],
            "nontrivial_chains": json::int(&count_nontrivial_chains(self)),
            "canonical": canonical_form(self),
        })
    }

    /// Applies `a` in GL(2, Z) to every Lie(T^2)-valued datum.
    pub fn transform(&self, a: &[[BigInt; 2]; 2]) -> IsotropyGraph {
        let mv = |v: &V2| {
            normalize_v2(&V2([
                &a[0][0] * &v.0[0] + &a[0][1] * &v.0[1],
                &a[1][0] * &v.0[0] + &a[1][1] * &v.0[1],
            ]))
        };
        let vertices = self
            .vertices
            .iter()
            .map(|v| match v {
                Vertex::Regular { order, direction, extreme } => {
                    Vertex::Regular { order: order.clone(), direction: mv(direction), extreme: *extreme }
                }
                Vertex::Fat { direction, multiplicities, normal_euler } => Vertex::Fat {
                    direction: mv(direction),
                    multiplicities: multiplicities.clone(),
                    normal_euler: normal_euler.clone(),
                },
            })
            .collect();
        let edges = self.edges.iter().map(|e| Edge { ends: e.ends, isotropy: e.isotropy.transform(a) }).collect();
        let r = &self.reeb_class;
        let q = |x: &BigInt| Quad::from_bigint(x.clone(), r[0].d());
        let reeb_class = [
            &(&q(&a[0][0]) * &r[0]) + &(&q(&a[0][1]) * &r[1]),
            &(&q(&a[1][0]) * &r[0]) + &(&q(&a[1][1]) * &r[1]),
        ];
        IsotropyGraph { vertices, edges, reeb_class }
    }
}

fn rat_coords(prof: &IsotropyProfile, w: &V3, scale: &BigInt) -> [BigRational; 2] {
    // coordinates of w / scale in (u1, u2)
    let (u1, u2) = &prof.lie_g_basis;
    let den = det3(u1, u2, &prof.v0) * scale;
    [BigRational::new(det3(w, u2, &prof.v0), den.clone()), BigRational::new(det3(u1, w, &prof.v0), den)]
}

fn int_coords(prof: &IsotropyProfile, w: &V3) -> Result<V2> {
    let (a, b) = prof
        .lie_coords(w)
        .ok_or_else(|| Error::Identity(format!("{w} is not in Lie(G)_Z")))?;
    Ok(V2([a, b]))
}

fn flat_normal_euler(cone: &GoodCone, i: usize) -> Result<BigInt> {
    let f = cone.face_invariants(i as isize)?.f;
    let mirror = Mat3::from_rows([[1, 0, 0], [0, 1, 0], [0, 0, -1]]);
    let m = cone.len();
    let g = cone.transform(&mirror)?.face_invariants((m - 1 - i) as isize)?.f;
    Ok(f.min(g))
}

/// The graph of isotropy data of `(cone, R)`.
pub fn extract_graph(cone: &GoodCone, r: &ReebVector) -> Result<IsotropyGraph> {
    let prof = isotropy_profile(cone, r)?;
    if !is_admissible(cone, r)? {
        return Err(Error::Inadmissible);
    }
    let m = cone.len();
    let ns = cone.normals();
    let mut vertices = Vec::new();
    let mut fat_of = BTreeMap::new();
    for &f in &prof.flats {
        let fm = (f + m - 1) % m;
        let fp = (f + 1) % m;
        let mut mult: Vec<BigInt> = [fm, fp].iter().map(|&j| prof.k[j].clone()).filter(|k| k > &BigInt::one()).collect();
        mult.sort();
        fat_of.insert(f, vertices.len());
        vertices.push(Vertex::Fat {
            direction: normalize_v2(&int_coords(&prof, &ns[f])?),
            multiplicities: mult,
            normal_euler: Some(flat_normal_euler(cone, f)?),
        });
    }
    // polygon vertex c lies between faces c and c+1
    let y = choose_transverse_circle(cone, r, DEFAULT_RADIUS)?;
    let poly = moment_polygon(cone, r)?;
    let h: Vec<Quad> = poly.vertices.iter().map(|p| y.dot_quad(p)).collect();
    let (emin, emax) = extremes(&h, &prof.flats)?;
    let is_extreme = |c: usize| emin == Extreme::Vertex(c) || emax == Extreme::Vertex(c);
    let mut node = vec![0usize; m];
    for c in 0..m {
        let c1 = (c + 1) % m;
        if let Some(&f) = fat_of.get(&c).or_else(|| fat_of.get(&c1)) {
            node[c] = f;
            continue;
        }
        let w = &ns[c].scale(&prof.signed[c1]) - &ns[c1].scale(&prof.signed[c]);
        node[c] = vertices.len();
        vertices.push(Vertex::Regular {
            order: prof.vertex_orders[c].clone(),
            direction: normalize_v2(&int_coords(&prof, &w)?),
            extreme: is_extreme(c),
        });
    }
    let z = bezout3(&prof.v0);
    let mut edges = Vec::new();
    for i in 0..m {
        if prof.k[i] <= BigInt::one() {
            continue;
        }
        let s = &prof.signed[i];
        // n^i / s - z lies in Lie(G) and generates the isotropy of face i
        let w = &ns[i] - &z.scale(s);
        edges.push(Edge {
            ends: (node[(i + m - 1) % m], node[i]),
            isotropy: CyclicSubgroup::generated_by(rat_coords(&prof, &w, s)),
        });
    }
    let rc = prof.lie_coords_quad(&r.value())?;
    Ok(IsotropyGraph { vertices, edges, reeb_class: [rc.0, rc.1] })
}

/// The unique `A` in GL(2, Z) putting the rational and irrational parts of the
/// Reeb class into row Hermite form.
fn canonical_frame(g: &IsotropyGraph) -> [[BigInt; 2]; 2] {
    let r = &g.reeb_class;
    let rows = [[r[0].rat().clone(), r[0].irr().clone()], [r[1].rat().clone(), r[1].irr().clone()]];
    let den = rows.iter().flatten().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let n: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|row| row.iter().map(|x| (x * BigRational::from_integer(den.clone())).to_integer()).collect())
        .collect();
    let (x, y) = (&n[0][0], &n[1][0]);
    let (gg, s, t) = egcd(x, y);
    let mut a = if gg.is_zero() {
        [[BigInt::one(), BigInt::zero()], [BigInt::zero(), BigInt::one()]]
    } else {
        [[s, t], [-(y / &gg), x / &gg]]
    };
    let apply = |a: &[[BigInt; 2]; 2], col: usize| {
        [&a[0][0] * &n[0][col] + &a[0][1] * &n[1][col], &a[1][0] * &n[0][col] + &a[1][1] * &n[1][col]]
    };
    let c1 = apply(&a, 1);
    if c1[1].is_negative() {
        a[1] = [-&a[1][0], -&a[1][1]];
    }
    let c1 = apply(&a, 1);
    if !c1[1].is_zero() {
        let q = c1[0].div_floor(&c1[1]);
        a[0] = [&a[0][0] - &q * &a[1][0], &a[0][1] - &q * &a[1][1]];
    }
    a
}

enum Tok {
    Fat(usize),
    Reg(usize),
    Edge(usize),
}

fn vertex_token(v: &Vertex) -> String {
    match v {
        Vertex::Regular { order, direction, .. } => format!("r({};{},{})", order, direction.0[0], direction.0[1]),
        Vertex::Fat { direction, multiplicities, normal_euler } => format!(
            "F({},{};[{}];{})",
            direction.0[0],
            direction.0[1],
            multiplicities.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","),
            normal_euler.as_ref().map_or("?".to_string(), |x| x.to_string())
        ),
    }
}

/// A deterministic string, equal for two graphs iff they are isomorphic.
pub fn canonical_form(g: &IsotropyGraph) -> String {
    let a = canonical_frame(g);
    let g = g.transform(&a);
    let nv = g.vertices.len();
    let mut inc: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for (k, e) in g.edges.iter().enumerate() {
        inc[e.ends.0].push(k);
        if e.ends.1 != e.ends.0 {
            inc[e.ends.1].push(k);
        }
    }
    // connected components
    let mut comp = vec![usize::MAX; nv];
    let mut ncomp = 0;
    for s in 0..nv {
        if comp[s] != usize::MAX {
            continue;
        }
        let mut stack = vec![s];
        comp[s] = ncomp;
        while let Some(v) = stack.pop() {
            for &k in &inc[v] {
                for w in [g.edges[k].ends.0, g.edges[k].ends.1] {
                    if comp[w] == usize::MAX {
                        comp[w] = ncomp;
                        stack.push(w);
                    }
                }
            }
        }
        ncomp += 1;
    }
    let is_fat = |v: usize| matches!(g.vertices[v], Vertex::Fat { .. });
    let other = |k: usize, v: usize| {
        let (a, b) = g.edges[k].ends;
        if a == v {
            b
        } else {
            a
        }
    };
    // walk from vertex v along edge k through regular vertices
    let walk = |v: usize, k0: usize| -> (Vec<Tok>, Vec<usize>) {
        let mut toks = vec![if is_fat(v) { Tok::Fat(v) } else { Tok::Reg(v) }];
        let mut used = vec![k0];
        let (mut cur, mut k) = (v, k0);
        loop {
            toks.push(Tok::Edge(k));
            let nxt = other(k, cur);
            if is_fat(nxt) {
                toks.push(Tok::Fat(nxt));
                break;
            }
            toks.push(Tok::Reg(nxt));
            match inc[nxt].iter().find(|&&j| j != k && !used.contains(&j)) {
                Some(&j) if nxt != v => {
                    used.push(j);
                    cur = nxt;
                    k = j;
                }
                _ => break,
            }
        }
        (toks, used)
    };
    let render = |toks: &[Tok], label: &dyn Fn(usize) -> String| -> String {
        toks.iter()
            .map(|t| match t {
                Tok::Fat(v) => label(*v),
                Tok::Reg(v) => vertex_token(&g.vertices[*v]),
                Tok::Edge(k) => format!("e({})", g.edges[*k].isotropy.token()),
            })
            .collect::<Vec<_>>()
            .join("-")
    };
    let mut parts = Vec::new();
    for c in 0..ncomp {
        let members: Vec<usize> = (0..nv).filter(|&v| comp[v] == c).collect();
        let fats: Vec<usize> = members.iter().copied().filter(|&v| is_fat(v)).collect();
        if fats.is_empty() {
            // a path or a cycle of regular vertices: start anywhere with degree <= 1 if possible
            let ends: Vec<usize> = members.iter().copied().filter(|&v| inc[v].len() <= 1).collect();
            let starts = if ends.is_empty() { members.clone() } else { ends };
            let mut best: Option<String> = None;
            for &s in &starts {
                let cands: Vec<String> = if inc[s].is_empty() {
                    vec![vertex_token(&g.vertices[s])]
                } else {
                    inc[s].iter().map(|&k| render(&walk(s, k).0, &|_| String::new())).collect()
                };
                for cand in cands {
                    if best.as_ref().map_or(true, |b| &cand < b) {
                        best = Some(cand);
                    }
                }
            }
            parts.push(format!("P[{}]", best.unwrap_or_default()));
            continue;
        }
        let mut best: Option<String> = None;
        for perm in permutations(&fats) {
            let label_of = |v: usize| perm.iter().position(|&x| x == v).unwrap();
            let header: Vec<String> = perm.iter().map(|&v| vertex_token(&g.vertices[v])).collect();
            let mut chains = Vec::new();
            let mut seen: Vec<usize> = Vec::new();
            for &f in &perm {
                for &k in &inc[f] {
                    if seen.contains(&k) {
                        continue;
                    }
                    let (toks, used) = walk(f, k);
                    seen.extend(&used);
                    let lab = |v: usize| format!("#{}", label_of(v));
                    let fwd = render(&toks, &lab);
                    let mut rev_toks = toks;
                    rev_toks.reverse();
                    let start_lab = match rev_toks.last() {
                        Some(Tok::Fat(v)) => Some(label_of(*v)),
                        _ => None,
                    };
                    let end_lab = match rev_toks.first() {
                        Some(Tok::Fat(v)) => Some(label_of(*v)),
                        _ => None,
                    };
                    let bwd = render(&rev_toks, &lab);
                    let chosen = match (start_lab, end_lab) {
                        (Some(s), Some(e)) if s < e => fwd,
                        (Some(s), Some(e)) if s > e => bwd,
                        (Some(_), Some(_)) => fwd.min(bwd),
                        _ => fwd,
                    };
                    chains.push(chosen);
                }
            }
            chains.sort();
            let enc = format!("C[{}|{}]", header.join(","), chains.join(","));
            if best.as_ref().map_or(true, |b| &enc < b) {
                best = Some(enc);
            }
        }
        parts.push(best.unwrap());
    }
    parts.sort();
    let r = &g.reeb_class;
    format!("R({};{})|{}", r[0], r[1], parts.join("|"))
}

fn permutations(xs: &[usize]) -> Vec<Vec<usize>> {
    if xs.len() <= 1 {
        return vec![xs.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..xs.len() {
        let mut rest = xs.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

pub fn isomorphic(g1: &IsotropyGraph, g2: &IsotropyGraph) -> bool {
    canonical_form(g1) == canonical_form(g2)
}

/// Chains between the extremes that carry an edge or an interior closed orbit.
pub fn count_nontrivial_chains(g: &IsotropyGraph) -> BigInt {
    let nv = g.vertices.len();
    let terminal = |v: usize| match &g.vertices[v] {
        Vertex::Fat { .. } => true,
        Vertex::Regular { extreme, .. } => *extreme,
    };
    // union-find over items: vertices 0..nv, edges nv..
    let mut parent: Vec<usize> = (0..nv + g.edges.len()).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for (k, e) in g.edges.iter().enumerate() {
        for v in [e.ends.0, e.ends.1] {
            if !terminal(v) {
                let (a, b) = (find(&mut parent, nv + k), find(&mut parent, v));
                parent[a] = b;
            }
        }
    }
    let mut roots: Vec<usize> = (0..nv)
        .filter(|&v| !terminal(v))
        .chain(nv..nv + g.edges.len())
        .map(|x| find(&mut parent, x))
        .collect();
    roots.sort();
    roots.dedup();
    BigInt::from(roots.len())
}

/// The unique `v` strictly between `v_min` and `v_max` forming a Z-basis with
/// each: `v = (v_min + v_max) / |det(v_min, v_max)|` when that is integral.
pub fn toric_condition_check(v_min: &V2, v_max: &V2) -> Result<Option<V2>> {
    if !v_min.is_primitive() || !v_max.is_primitive() {
        return Err(Error::Precondition("v_min and v_max must be primitive".into()));
    }
    let d = v_min.det(v_max).abs();
    if d.is_zero() {
        return Err(Error::Precondition("v_min and v_max are dependent".into()));
    }
    let s = [&v_min.0[0] + &v_max.0[0], &v_min.0[1] + &v_max.0[1]];
    if s.iter().all(|x| x.is_multiple_of(&d)) {
        Ok(Some(V2([&s[0] / &d, &s[1] / &d])))
    } else {
        Ok(None)
    }
}

/// A lens-space bundle fiber: the Reeb ray and the two flat normals.
#[derive(Clone, Debug)]
pub struct LensBundle {
    pub reeb: ReebVector,
    pub first: V3,
    pub last: V3,
}

/// Chain faces with the two flat normals at its ends.
#[derive(Clone, Debug)]
pub struct GermOfChain {
    pub normals: Vec<V3>,
}

fn close_germ(bundle: &LensBundle, germ: &GermOfChain) -> Result<IsotropyGraph> {
    let ns = &germ.normals;
    if ns.len() < 3 || ns[0] != bundle.first || ns[ns.len() - 1] != bundle.last {
        return Err(Error::Assembly("germ ends do not match the bundle's flat normals".into()));
    }
    let t = close_chain(ns, 1 << 20).map_err(|e| Error::Assembly(format!("germ is not realizable: {e}")))?;
    let mut all = ns.clone();
    all.push(t);
    let cone = GoodCone::good(all).map_err(|e| Error::Assembly(format!("closed germ: {e}")))?;
    let g = extract_graph(&cone, &bundle.reeb)?;
    if g.fat_count() != 2 {
        return Err(Error::Assembly("germ interior contains a flat face".into()));
    }
    Ok(g)
}

/// Graph of the fiber sum of `bundle` with `germs`. Normal Euler numbers of
/// the fat vertices are reported only when the result is toric (one germ).
pub fn assemble_fiber_sum(bundle: &LensBundle, germs: &[GermOfChain]) -> Result<IsotropyGraph> {
    let v0 = lie_g_normal(&bundle.reeb)?;
    if !v0.dot(&bundle.first).is_zero() || !v0.dot(&bundle.last).is_zero() {
        return Err(Error::Assembly("bundle ends are not flat for this Reeb ray".into()));
    }
    if germs.len() == 1 {
        return close_germ(bundle, &germs[0]);
    }
    let prof = IsotropyProfile::from_v0(&GoodCone::new(vec![bundle.first.clone(), bundle.last.clone(), v0.clone()])?, &v0)?;
    let (u1, u2) = &prof.lie_g_basis;
    let rc = prof.lie_coords_quad(&bundle.reeb.value())?;
    let fat = |n: &V3| -> Result<Vertex> {
        Ok(Vertex::Fat {
            direction: normalize_v2(&int_coords(&prof, n)?),
            multiplicities: Vec::new(),
            normal_euler: None,
        })
    };
    let mut graph = IsotropyGraph { vertices: vec![fat(&bundle.first)?, fat(&bundle.last)?], edges: Vec::new(), reeb_class: [rc.0, rc.1] };
    for germ in germs {
        let g = close_germ(bundle, germ)?;
        // express the germ graph in this graph's Lie(G) basis
        let gp = isotropy_profile(&GoodCone::new(germ.normals.clone())?, &bundle.reeb).ok();
        let basis = gp.map(|p| p.lie_g_basis).unwrap_or_else(|| (u1.clone(), u2.clone()));
        if &basis.0 != u1 || &basis.1 != u2 {
            return Err(Error::Assembly("germ Lie(G) bases disagree".into()));
        }
        let offset = graph.vertices.len() - 2;
        for (i, v) in g.vertices.iter().enumerate() {
            match v {
                Vertex::Fat { multiplicities, .. } => {
                    if let Vertex::Fat { multiplicities: acc, .. } = &mut graph.vertices[i] {
                        acc.extend(multiplicities.iter().cloned());
                        acc.sort();
                    }
                }
                other => graph.vertices.push(other.clone()),
            }
        }
        let map = |v: usize| if v < 2 { v } else { v + offset };
        for e in &g.edges {
            graph.edges.push(Edge { ends: (map(e.ends.0), map(e.ends.1)), isotropy: e.isotropy.clone() });
        }
    }
    Ok(graph)
}
