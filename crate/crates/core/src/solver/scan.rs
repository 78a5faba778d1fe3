//! Guard scan over an irreducible-candidate tree.
//!
//! Each guard states a structural property that must hold when the tree
//! cannot be improved; a violated guard comes with a repair swap that
//! strictly lowers the composite potential. Guards are scanned in a fixed
//! order (ascending claim number, then canonical vertex/edge order) and the
//! first violation found is returned.
//!
//! Which guards apply depends on the regime: trees without degree-3 branch
//! vertices use the leaf guards (claims 2-4 plus the leaf-child
//! configuration); trees with a degree-3 branch vertex, rooted at one, use
//! the rooted guards (claims 5-10 plus the leaf-child configuration).

use crate::graph::{Edge, Graph};
use crate::oblique::is_oblique_neighbor;
use crate::solver::{Anomaly, AnomalyKind};
use crate::tree::{ClaimTag, Move, RootedTree};

/// A violated guard together with its prescribed repair.
#[derive(Clone, Debug)]
pub struct Violation {
    pub claim_tag: ClaimTag,
    pub mv: Move,
    pub context: ViolationContext,
}

/// Vertices and edges involved in the violated guard, for audit output.
#[derive(Clone, Debug, Default)]
pub struct ViolationContext {
    pub vertices: Vec<usize>,
    pub edges: Vec<Edge>,
}

fn guard_bug(detail: impl Into<String>) -> Anomaly {
    Anomaly {
        kind: AnomalyKind::GuardInconsistency,
        detail: detail.into(),
    }
}

struct Scanner<'a> {
    g: &'a Graph,
    t: &'a RootedTree,
    leaves: Vec<usize>,
    branch: Vec<usize>,
    /// Leaves plus degree-3 branch vertices minus the root (rooted regime).
    h_set: Vec<usize>,
    /// The first `m + 1` members of `h_set`, when that many exist.
    m_set: Vec<usize>,
    root: usize,
}

type ScanResult = Result<Option<Violation>, Anomaly>;

impl<'a> Scanner<'a> {
    fn oblique(&self, v: usize, e: Edge) -> bool {
        is_oblique_neighbor(self.g, self.t, v, e)
    }

    fn adjacent(&self, u: usize, v: usize) -> bool {
        self.g.has_edge(u, v)
    }

    fn in_subtree(&self, top: usize, v: usize) -> bool {
        self.t.is_ancestor_or_self(top, v)
    }

    /// The nearest leaf-or-branch vertex at or below the lower endpoint of a
    /// tree edge.
    fn far_anchor(&self, e: Edge) -> usize {
        let mut cur = self.t.lower_endpoint(e);
        while self.t.degree(cur) == 2 {
            cur = self.t.children(cur)[0];
        }
        cur
    }

    /// The unique child of a degree-2 internal vertex.
    fn sole_child(&self, v: usize) -> Result<usize, Anomaly> {
        match self.t.children(v) {
            [c] => Ok(*c),
            other => Err(guard_bug(format!(
                "expected exactly one child at {v}, found {other:?}"
            ))),
        }
    }

    /// The child of a degree-3 non-root vertex other than `exclude`.
    fn other_child(&self, v: usize, exclude: usize) -> Result<usize, Anomaly> {
        let rest: Vec<usize> = self
            .t
            .children(v)
            .iter()
            .copied()
            .filter(|&c| c != exclude)
            .collect();
        match rest.as_slice() {
            [c] => Ok(*c),
            other => Err(guard_bug(format!(
                "expected one remaining child at {v}, found {other:?}"
            ))),
        }
    }

    fn found(
        &self,
        claim_tag: ClaimTag,
        remove: Vec<Edge>,
        add: Vec<Edge>,
        vertices: Vec<usize>,
        edges: Vec<Edge>,
    ) -> ScanResult {
        Ok(Some(Violation {
            claim_tag,
            mv: Move::new(claim_tag, remove, add),
            context: ViolationContext { vertices, edges },
        }))
    }

    // ------------------------------------------------------------------
    // leaf-regime guards (no degree-3 branch vertex)
    // ------------------------------------------------------------------

    /// For every branch vertex with two children adjacent in the host graph,
    /// neither child edge may have an oblique neighbor among the other
    /// leaves.
    fn claim2(&self) -> ScanResult {
        for &b in &self.branch {
            let kids = self.t.children(b);
            for i in 0..kids.len() {
                for j in i + 1..kids.len() {
                    let (c1, c2) = (kids[i], kids[j]);
                    if !self.adjacent(c1, c2) {
                        continue;
                    }
                    for (ec, _oc) in [(c1, c2), (c2, c1)] {
                        let edge = Edge::new(b, ec);
                        for &z in &self.leaves {
                            if z == c1 || z == c2 || !self.oblique(z, edge) {
                                continue;
                            }
                            let mv = if self.in_subtree(ec, z) {
                                // z hangs below the child: reattach z's side
                                // at b and close the child pair
                                (
                                    vec![Edge::new(b, c1), Edge::new(b, c2)],
                                    vec![Edge::new(b, z), Edge::new(c1, c2)],
                                )
                            } else {
                                (vec![edge], vec![Edge::new(z, ec)])
                            };
                            return self.found(
                                ClaimTag::Claim2,
                                mv.0,
                                mv.1,
                                vec![b, c1, c2, z],
                                vec![edge],
                            );
                        }
                    }
                }
            }
        }
        Ok(None)
    }

    /// No two leaves are adjacent in the host graph.
    fn claim3(&self) -> ScanResult {
        for (i, &u) in self.leaves.iter().enumerate() {
            for &v in &self.leaves[i + 1..] {
                if !self.adjacent(u, v) {
                    continue;
                }
                // walk from u to its nearest branch vertex
                let mut prev = u;
                let mut cur = self.t.neighbors(u)[0];
                while self.t.degree(cur) == 2 {
                    let step = self
                        .t
                        .neighbors(cur)
                        .into_iter()
                        .find(|&w| w != prev)
                        .expect("degree-2 vertex has a second neighbor");
                    prev = cur;
                    cur = step;
                }
                if self.t.degree(cur) < 3 {
                    return Err(guard_bug(format!(
                        "no branch vertex on the path from leaf {u}"
                    )));
                }
                return self.found(
                    ClaimTag::Claim3,
                    vec![Edge::new(cur, prev)],
                    vec![Edge::new(u, v)],
                    vec![u, v, cur],
                    vec![],
                );
            }
        }
        Ok(None)
    }

    /// No tree edge has two distinct leaves as oblique neighbors.
    fn claim4(&self) -> ScanResult {
        for e in self.t.edges() {
            let obl: Vec<usize> = self
                .leaves
                .iter()
                .copied()
                .filter(|&z| !e.has_endpoint(z) && self.oblique(z, e))
                .collect();
            if obl.len() < 2 {
                continue;
            }
            let (u, v) = (obl[0], obl[1]);
            let gu = self.t.far_endpoint(e, u);
            let gv = self.t.far_endpoint(e, v);
            if gu == gv {
                // both leaves on the same side of e
                let a = gu;
                let near = e.other(a);
                let med = self.t.median(u, a, v);
                let (uu, vv) = if self.adjacent(u, near) {
                    (u, v)
                } else if self.adjacent(v, near) {
                    (v, u)
                } else {
                    return Err(guard_bug(format!(
                        "claw at {{{a};{near},{u},{v}}} has no cross edge"
                    )));
                };
                let med_u = self.t.toward(med, uu);
                let cut = Edge::new(med, med_u);
                if cut == e {
                    return Err(guard_bug("median cut collides with the witness edge"));
                }
                return self.found(
                    ClaimTag::Claim4,
                    vec![e, cut],
                    vec![Edge::new(uu, near), Edge::new(vv, a)],
                    vec![u, v, med],
                    vec![e],
                );
            }
            // e lies on the tree path between the two leaves
            let s = self.t.lca(u, v);
            let (uu, vv) = if self.t.far_endpoint(e, s) == gu {
                (u, v)
            } else {
                (v, u)
            };
            let s_u = self.t.toward(s, uu);
            let cut = Edge::new(s, s_u);
            if cut == e {
                return Err(guard_bug("meeting-point cut collides with the witness edge"));
            }
            return self.found(
                ClaimTag::Claim4,
                vec![e, cut],
                vec![
                    Edge::new(uu, self.t.far_endpoint(e, uu)),
                    Edge::new(vv, self.t.far_endpoint(e, vv)),
                ],
                vec![u, v, s],
                vec![e],
            );
        }
        Ok(None)
    }

    /// No branch vertex has a leaf child adjacent (in the host graph) to a
    /// sibling; such an edge would belong to two counted edge sets at once.
    fn leaf_child_configuration(&self, tag: ClaimTag) -> ScanResult {
        for &b in &self.branch {
            for &l in self.t.children(b) {
                if self.t.degree(l) != 1 {
                    continue;
                }
                for &z in self.t.children(b) {
                    if z != l && self.adjacent(l, z) {
                        return self.found(
                            tag,
                            vec![Edge::new(b, z)],
                            vec![Edge::new(z, l)],
                            vec![b, l, z],
                            vec![],
                        );
                    }
                }
            }
        }
        Ok(None)
    }

    // ------------------------------------------------------------------
    // rooted-regime guards (root is a degree-3 branch vertex)
    // ------------------------------------------------------------------

    /// Every child of a non-root branch vertex is adjacent to some tree
    /// neighbor of that vertex.
    fn claim5(&self) -> ScanResult {
        for &u in &self.branch {
            if u == self.root {
                continue;
            }
            let nbs = self.t.neighbors(u);
            for &a in self.t.children(u) {
                if nbs.iter().any(|&b| b != a && self.adjacent(a, b)) {
                    continue;
                }
                // isolated child: every other child must see the parent
                let ur = self.t.parent(u).expect("non-root");
                let movers: Vec<usize> = self
                    .t
                    .children(u)
                    .iter()
                    .copied()
                    .filter(|&c| c != a)
                    .collect();
                for &c in &movers {
                    if !self.adjacent(c, ur) {
                        return Err(guard_bug(format!(
                            "child {c} of {u} not adjacent to parent {ur} despite claw-freeness"
                        )));
                    }
                }
                let remove = movers.iter().map(|&c| Edge::new(u, c)).collect();
                let add = movers.iter().map(|&c| Edge::new(ur, c)).collect();
                return self.found(ClaimTag::Claim5, remove, add, vec![u, a, ur], vec![]);
            }
        }
        Ok(None)
    }

    /// The two children of a non-root degree-3 branch vertex are adjacent in
    /// the host graph.
    fn claim6(&self) -> ScanResult {
        for &u in &self.branch {
            if u == self.root || self.t.degree(u) != 3 {
                continue;
            }
            let kids = self.t.children(u);
            let (a, b) = (kids[0], kids[1]);
            if self.adjacent(a, b) {
                continue;
            }
            let ur = self.t.parent(u).expect("non-root");
            let moved = if self.adjacent(a, ur) {
                a
            } else if self.adjacent(b, ur) {
                b
            } else {
                return Err(guard_bug(format!(
                    "claw at {{{u};{a},{b},{ur}}} has no cross edge"
                )));
            };
            return self.found(
                ClaimTag::Claim6,
                vec![Edge::new(u, moved)],
                vec![Edge::new(moved, ur)],
                vec![u, a, b],
                vec![],
            );
        }
        Ok(None)
    }

    /// The leaves together with the non-root degree-3 branch vertices form
    /// an independent set.
    fn claim7(&self) -> ScanResult {
        for (i, &u) in self.h_set.iter().enumerate() {
            for &v in &self.h_set[i + 1..] {
                if !self.adjacent(u, v) {
                    continue;
                }
                let mv = if self.in_subtree(u, v) {
                    self.claim7_ancestor_repair(u, v)?
                } else if self.in_subtree(v, u) {
                    self.claim7_ancestor_repair(v, u)?
                } else {
                    let w = self.t.lca(u, v);
                    let w_u = self.t.toward(w, u);
                    (vec![Edge::new(w, w_u)], vec![Edge::new(u, v)])
                };
                return self.found(ClaimTag::Claim7, mv.0, mv.1, vec![u, v], vec![]);
            }
        }
        Ok(None)
    }

    /// Repair for an adjacent pair where `anc` lies on the root path of
    /// `oth`; `anc` is then an internal vertex of degree 3.
    fn claim7_ancestor_repair(
        &self,
        anc: usize,
        oth: usize,
    ) -> Result<(Vec<Edge>, Vec<Edge>), Anomaly> {
        if self.t.degree(anc) != 3 {
            return Err(guard_bug(format!(
                "ancestor {anc} in the independent-set guard has degree {}",
                self.t.degree(anc)
            )));
        }
        let toward_oth = self.t.toward(anc, oth);
        let third = self.other_child(anc, toward_oth)?;
        if !self.adjacent(third, toward_oth) {
            return Err(guard_bug(format!(
                "children {third},{toward_oth} of {anc} not adjacent"
            )));
        }
        if toward_oth == oth {
            // tree-adjacent pair: detaching the third child already removes
            // the branch vertex
            Ok((
                vec![Edge::new(anc, third)],
                vec![Edge::new(third, toward_oth)],
            ))
        } else {
            Ok((
                vec![Edge::new(anc, third), Edge::new(anc, toward_oth)],
                vec![Edge::new(third, toward_oth), Edge::new(anc, oth)],
            ))
        }
    }

    /// No tree edge has two distinct members of the leaf/degree-3 set as
    /// oblique neighbors.
    fn claim8(&self) -> ScanResult {
        for e in self.t.edges() {
            let obl: Vec<usize> = self
                .h_set
                .iter()
                .copied()
                .filter(|&z| self.oblique(z, e))
                .collect();
            if obl.len() < 2 {
                continue;
            }
            let (u, v) = (obl[0], obl[1]);
            return self.claim8_dispatch(e, u, v);
        }
        Ok(None)
    }

    fn claim8_dispatch(&self, e: Edge, u: usize, v: usize) -> ScanResult {
        let lo = self.t.lower_endpoint(e);
        let hi = self.t.upper_endpoint(e);
        let u_ep = e.has_endpoint(u);
        let v_ep = e.has_endpoint(v);
        if u_ep && v_ep {
            return Err(guard_bug(format!(
                "both endpoints of {e:?} are in the tracked set; the independence guard missed them"
            )));
        }
        if u_ep || v_ep {
            let (end, oth) = if u_ep { (u, v) } else { (v, u) };
            if self.t.degree(end) != 3 {
                return Err(guard_bug(format!(
                    "tracked endpoint {end} of {e:?} has degree {}",
                    self.t.degree(end)
                )));
            }
            let (cut_ok, reattach) = if end == hi {
                (!self.in_subtree(lo, oth), lo)
            } else {
                (self.in_subtree(lo, oth) && oth != lo, hi)
            };
            if !cut_ok {
                return Err(guard_bug(format!(
                    "oblique pair ({end},{oth}) at {e:?} is an adjacency the independence guard missed"
                )));
            }
            return self.found(
                ClaimTag::Claim8,
                vec![e],
                vec![Edge::new(oth, reattach)],
                vec![u, v],
                vec![e],
            );
        }
        let u_below = self.in_subtree(lo, u);
        let v_below = self.in_subtree(lo, v);
        if u_below != v_below {
            return self.claim8_separated(e, u, v);
        }
        if u_below {
            return self.claim8_both_below(e, u, v);
        }
        // both outside the subtree under e
        let w = self.t.lca(u, v);
        if self.t.lca(w, lo) == self.root {
            self.claim8_across_root(e, u, v)
        } else if w != self.root && self.in_subtree(w, lo) {
            self.claim8_on_root_path(e, u, v, w)
        } else {
            self.claim8_off_path(e, u, v)
        }
    }

    /// The witness edge lies on the tree path between the pair.
    fn claim8_separated(&self, e: Edge, u: usize, v: usize) -> ScanResult {
        let ctx = vec![u, v];
        if self.in_subtree(u, v) || self.in_subtree(v, u) {
            let (anc, oth) = if self.in_subtree(u, v) { (u, v) } else { (v, u) };
            if self.t.degree(anc) != 3 {
                return Err(guard_bug(format!(
                    "path ancestor {anc} has degree {}",
                    self.t.degree(anc)
                )));
            }
            let a_dir = self.t.toward(anc, oth);
            let a_star = self.other_child(anc, a_dir)?;
            if !self.adjacent(a_star, a_dir) {
                return Err(guard_bug(format!(
                    "children {a_star},{a_dir} of {anc} not adjacent"
                )));
            }
            let e_dir = Edge::new(anc, a_dir);
            if e == e_dir {
                return Err(guard_bug(
                    "witness edge touches the path ancestor; the independence guard missed it",
                ));
            }
            return self.found(
                ClaimTag::Claim8,
                vec![e_dir, Edge::new(anc, a_star), e],
                vec![
                    Edge::new(anc, self.t.far_endpoint(e, anc)),
                    Edge::new(oth, self.t.far_endpoint(e, oth)),
                    Edge::new(a_star, a_dir),
                ],
                ctx,
                vec![e],
            );
        }
        let w = self.t.lca(u, v);
        let w_u = self.t.toward(w, u);
        let cut = Edge::new(w, w_u);
        if e == cut {
            return self.found(
                ClaimTag::Claim8,
                vec![e],
                vec![Edge::new(v, w_u)],
                ctx,
                vec![e],
            );
        }
        self.found(
            ClaimTag::Claim8,
            vec![e, cut],
            vec![
                Edge::new(u, self.t.far_endpoint(e, u)),
                Edge::new(v, self.t.far_endpoint(e, v)),
            ],
            ctx,
            vec![e],
        )
    }

    /// Both pair members hang below the witness edge; each sees its upper
    /// endpoint.
    fn claim8_both_below(&self, e: Edge, u: usize, v: usize) -> ScanResult {
        let lo = self.t.lower_endpoint(e);
        let hi = self.t.upper_endpoint(e);
        let ctx = vec![u, v];
        if self.in_subtree(u, v) {
            let u_v = self.t.toward(u, v);
            return self.found(
                ClaimTag::Claim8,
                vec![Edge::new(u, u_v)],
                vec![Edge::new(v, hi)],
                ctx,
                vec![e],
            );
        }
        if self.in_subtree(v, u) {
            let v_u = self.t.toward(v, u);
            return self.found(
                ClaimTag::Claim8,
                vec![Edge::new(v, v_u)],
                vec![Edge::new(u, hi)],
                ctx,
                vec![e],
            );
        }
        let w = self.t.lca(u, v);
        let (uu, vv) = if self.adjacent(u, lo) {
            (u, v)
        } else if self.adjacent(v, lo) {
            (v, u)
        } else {
            return Err(guard_bug(format!(
                "claw at {{{hi};{lo},{u},{v}}} has no cross edge"
            )));
        };
        let w_uu = self.t.toward(w, uu);
        let mv = match self.t.degree(w) {
            3 => (vec![Edge::new(w, w_uu)], vec![Edge::new(uu, hi)]),
            4 => {
                let w_vv = self.t.toward(w, vv);
                (
                    vec![Edge::new(w, w_uu), Edge::new(w, w_vv)],
                    vec![Edge::new(uu, hi), Edge::new(vv, hi)],
                )
            }
            _ => (
                vec![e, Edge::new(w, w_uu)],
                vec![Edge::new(uu, lo), Edge::new(vv, hi)],
            ),
        };
        self.found(ClaimTag::Claim8, mv.0, mv.1, ctx, vec![e])
    }

    /// The pair sits across the root from the witness edge.
    fn claim8_across_root(&self, e: Edge, u: usize, v: usize) -> ScanResult {
        let lo = self.t.lower_endpoint(e);
        let hi = self.t.upper_endpoint(e);
        let r = self.root;
        let ctx = vec![u, v];
        // make uu the member whose root path avoids the edge's branch
        let (uu, vv) = if self.t.lca(u, lo) == r {
            (u, v)
        } else if self.t.lca(v, lo) == r {
            (v, u)
        } else {
            return Err(guard_bug("neither pair member crosses the root"));
        };
        if self.adjacent(uu, hi) {
            let r_x = self.t.toward(r, lo);
            let cut = Edge::new(r, r_x);
            if e == cut {
                return self.found(
                    ClaimTag::Claim8,
                    vec![e],
                    vec![Edge::new(vv, lo)],
                    ctx,
                    vec![e],
                );
            }
            return self.found(
                ClaimTag::Claim8,
                vec![e, cut],
                vec![Edge::new(uu, hi), Edge::new(vv, lo)],
                ctx,
                vec![e],
            );
        }
        if !self.adjacent(vv, hi) {
            return Err(guard_bug(format!(
                "claw at {{{lo};{hi},{uu},{vv}}} has no cross edge"
            )));
        }
        let x = self.far_anchor(e);
        if lo == x {
            let r_u = self.t.toward(r, uu);
            return self.found(
                ClaimTag::Claim8,
                vec![Edge::new(r, r_u)],
                vec![Edge::new(uu, lo)],
                ctx,
                vec![e],
            );
        }
        let e_xx = self.sole_child(lo)?;
        let step = Edge::new(lo, e_xx);
        if self.adjacent(vv, e_xx) {
            let r_u = self.t.toward(r, uu);
            return self.found(
                ClaimTag::Claim8,
                vec![step, Edge::new(r, r_u)],
                vec![Edge::new(uu, lo), Edge::new(vv, e_xx)],
                ctx,
                vec![e],
            );
        }
        if self.adjacent(uu, e_xx) {
            let q = self.t.lca(vv, lo);
            let q_x = self.t.toward(q, lo);
            return self.found(
                ClaimTag::Claim8,
                vec![step, Edge::new(q, q_x)],
                vec![Edge::new(vv, lo), Edge::new(uu, e_xx)],
                ctx,
                vec![e],
            );
        }
        Err(guard_bug(format!(
            "claw at {{{lo};{e_xx},{uu},{vv}}} has no cross edge"
        )))
    }

    /// The pair's meeting vertex lies on the root path above the witness
    /// edge.
    fn claim8_on_root_path(&self, e: Edge, u: usize, v: usize, w: usize) -> ScanResult {
        let lo = self.t.lower_endpoint(e);
        if w == u || w == v {
            let (anc, oth) = if w == u { (u, v) } else { (v, u) };
            let q = self.t.lca(oth, lo);
            self.claim8_path_ancestor(e, anc, oth, q)
        } else {
            let p_u = self.t.lca(u, lo);
            let p_v = self.t.lca(v, lo);
            let (uu, vv, q) = if p_u == w {
                (u, v, p_v)
            } else if p_v == w {
                (v, u, p_u)
            } else {
                return Err(guard_bug(
                    "neither pair member attaches at the meeting vertex",
                ));
            };
            self.claim8_path_bystander(e, uu, vv, q, w)
        }
    }

    /// `anc` is itself the meeting vertex on the root path (degree 3).
    fn claim8_path_ancestor(&self, e: Edge, anc: usize, oth: usize, q: usize) -> ScanResult {
        let lo = self.t.lower_endpoint(e);
        let ctx = vec![anc, oth];
        if self.t.degree(anc) != 3 {
            return Err(guard_bug(format!(
                "path ancestor {anc} has degree {}",
                self.t.degree(anc)
            )));
        }
        let u_x = self.t.toward(anc, lo);
        let u_star = self.other_child(anc, u_x)?;
        if !self.adjacent(u_star, u_x) {
            return Err(guard_bug(format!(
                "children {u_star},{u_x} of {anc} not adjacent"
            )));
        }
        let x = self.far_anchor(e);
        if lo == x {
            return self.found(
                ClaimTag::Claim8,
                vec![Edge::new(anc, u_star), Edge::new(anc, u_x)],
                vec![Edge::new(u_star, u_x), Edge::new(anc, x)],
                ctx,
                vec![e],
            );
        }
        let e_xx = self.sole_child(lo)?;
        let step = Edge::new(lo, e_xx);
        if self.adjacent(oth, e_xx) {
            return self.found(
                ClaimTag::Claim8,
                vec![step, Edge::new(anc, u_x), Edge::new(anc, u_star)],
                vec![Edge::new(u_x, u_star), Edge::new(oth, e_xx), Edge::new(anc, lo)],
                ctx,
                vec![e],
            );
        }
        if !self.adjacent(anc, e_xx) {
            return Err(guard_bug(format!(
                "claw at {{{lo};{e_xx},{anc},{oth}}} has no cross edge"
            )));
        }
        if q == oth {
            if self.t.degree(oth) != 3 {
                return Err(guard_bug(format!(
                    "path member {oth} has degree {}",
                    self.t.degree(oth)
                )));
            }
            let v_x = self.t.toward(oth, lo);
            let v_star = self.other_child(oth, v_x)?;
            if !self.adjacent(v_star, v_x) {
                return Err(guard_bug(format!(
                    "children {v_star},{v_x} of {oth} not adjacent"
                )));
            }
            return self.found(
                ClaimTag::Claim8,
                vec![
                    Edge::new(anc, u_star),
                    Edge::new(anc, u_x),
                    Edge::new(oth, v_star),
                    Edge::new(oth, v_x),
                ],
                vec![
                    Edge::new(u_star, u_x),
                    Edge::new(v_star, v_x),
                    Edge::new(anc, lo),
                    Edge::new(oth, lo),
                ],
                ctx,
                vec![e],
            );
        }
        if q == anc {
            let u_r = self.t.parent(anc).expect("non-root ancestor");
            if self.adjacent(u_r, e_xx) {
                return self.found(
                    ClaimTag::Claim8,
                    vec![step, Edge::new(anc, u_star)],
                    vec![Edge::new(u_r, e_xx), Edge::new(oth, lo)],
                    ctx,
                    vec![e],
                );
            }
            if self.adjacent(u_x, e_xx) {
                return self.found(
                    ClaimTag::Claim8,
                    vec![step, Edge::new(anc, u_x)],
                    vec![Edge::new(u_x, e_xx), Edge::new(oth, lo)],
                    ctx,
                    vec![e],
                );
            }
            // claw-freeness leaves only the parent-child cross edge
            if !self.adjacent(u_r, u_x) {
                return Err(guard_bug(format!(
                    "claw at {{{anc};{u_r},{u_x},{e_xx}}} has no cross edge"
                )));
            }
            return self.found(
                ClaimTag::Claim8,
                vec![Edge::new(anc, u_x)],
                vec![Edge::new(u_r, u_x)],
                ctx,
                vec![e],
            );
        }
        // the other member attaches strictly between anc and the edge
        let q_v = self.t.toward(q, oth);
        match self.t.degree(q) {
            4 => {
                let q_r = self.t.parent(q).expect("below the root");
                let q_x = self.t.toward(q, lo);
                let q_star = self.fourth_neighbor(q, q_x, q_v, q_r)?;
                if self.adjacent(q_v, q_r) {
                    self.found(
                        ClaimTag::Claim8,
                        vec![step, Edge::new(q, q_v), Edge::new(q, q_r)],
                        vec![Edge::new(q_v, q_r), Edge::new(oth, lo), Edge::new(anc, e_xx)],
                        ctx,
                        vec![e],
                    )
                } else if self.adjacent(q_v, q_x) {
                    self.found(
                        ClaimTag::Claim8,
                        vec![step, Edge::new(q, q_v), Edge::new(q, q_x)],
                        vec![Edge::new(q_v, q_x), Edge::new(anc, lo), Edge::new(anc, e_xx)],
                        ctx,
                        vec![e],
                    )
                } else if self.adjacent(q_v, q_star) {
                    self.found(
                        ClaimTag::Claim8,
                        vec![step, Edge::new(q, q_v), Edge::new(q, q_star)],
                        vec![Edge::new(q_v, q_star), Edge::new(oth, lo), Edge::new(anc, e_xx)],
                        ctx,
                        vec![e],
                    )
                } else {
                    Err(guard_bug(format!(
                        "child {q_v} of {q} has no adjacent tree neighbor"
                    )))
                }
            }
            _ => self.found(
                ClaimTag::Claim8,
                vec![Edge::new(q, q_v), step],
                vec![Edge::new(anc, e_xx), Edge::new(oth, lo)],
                ctx,
                vec![e],
            ),
        }
    }

    /// The meeting vertex is on the root path but is neither pair member.
    fn claim8_path_bystander(
        &self,
        e: Edge,
        uu: usize,
        vv: usize,
        q: usize,
        w: usize,
    ) -> ScanResult {
        let lo = self.t.lower_endpoint(e);
        let hi = self.t.upper_endpoint(e);
        let ctx = vec![uu, vv, w];
        if q == w {
            let (a, b) = if self.adjacent(uu, hi) {
                (uu, vv)
            } else if self.adjacent(vv, hi) {
                (vv, uu)
            } else {
                return Err(guard_bug(format!(
                    "claw at {{{lo};{hi},{uu},{vv}}} has no cross edge"
                )));
            };
            let w_x = self.t.toward(w, lo);
            let cut = Edge::new(w, w_x);
            if e == cut {
                return self.found(
                    ClaimTag::Claim8,
                    vec![e],
                    vec![Edge::new(b, lo)],
                    ctx,
                    vec![e],
                );
            }
            return self.found(
                ClaimTag::Claim8,
                vec![e, cut],
                vec![Edge::new(a, hi), Edge::new(b, lo)],
                ctx,
                vec![e],
            );
        }
        if q == vv {
            if self.t.degree(vv) != 3 {
                return Err(guard_bug(format!(
                    "path member {vv} has degree {}",
                    self.t.degree(vv)
                )));
            }
            let v_x = self.t.toward(vv, lo);
            let v_star = self.other_child(vv, v_x)?;
            if !self.adjacent(v_star, v_x) {
                return Err(guard_bug(format!(
                    "children {v_star},{v_x} of {vv} not adjacent"
                )));
            }
            let x = self.far_anchor(e);
            if lo == x {
                return self.found(
                    ClaimTag::Claim8,
                    vec![Edge::new(vv, v_x), Edge::new(vv, v_star)],
                    vec![Edge::new(vv, lo), Edge::new(v_x, v_star)],
                    ctx,
                    vec![e],
                );
            }
            let w_x = self.t.toward(w, lo);
            return self.found(
                ClaimTag::Claim8,
                vec![Edge::new(w, w_x), Edge::new(vv, v_x), Edge::new(vv, v_star)],
                vec![Edge::new(v_star, v_x), Edge::new(uu, lo), Edge::new(vv, lo)],
                ctx,
                vec![e],
            );
        }
        // q strictly between w and the edge
        let x = self.far_anchor(e);
        let q_v = self.t.toward(q, vv);
        if lo == x {
            if self.t.degree(x) < 4 {
                return Err(guard_bug(format!(
                    "anchor {x} should be a branch vertex of degree at least 4"
                )));
            }
            return match self.t.degree(q) {
                4 => {
                    let q_r = self.t.parent(q).expect("below the root");
                    let q_x = self.t.toward(q, lo);
                    let q_star = self.fourth_neighbor(q, q_x, q_v, q_r)?;
                    if self.adjacent(q_v, q_r) {
                        self.found(
                            ClaimTag::Claim8,
                            vec![Edge::new(q, q_v), Edge::new(q, q_r)],
                            vec![Edge::new(q_v, q_r), Edge::new(vv, lo)],
                            ctx,
                            vec![e],
                        )
                    } else if self.adjacent(q_v, q_x) {
                        self.found(
                            ClaimTag::Claim8,
                            vec![Edge::new(q, q_v), Edge::new(q, q_x)],
                            vec![Edge::new(q_v, q_x), Edge::new(uu, lo)],
                            ctx,
                            vec![e],
                        )
                    } else if self.adjacent(q_v, q_star) {
                        self.found(
                            ClaimTag::Claim8,
                            vec![Edge::new(q, q_v), Edge::new(q, q_star)],
                            vec![Edge::new(q_v, q_star), Edge::new(vv, lo)],
                            ctx,
                            vec![e],
                        )
                    } else {
                        Err(guard_bug(format!(
                            "child {q_v} of {q} has no adjacent tree neighbor"
                        )))
                    }
                }
                _ => self.found(
                    ClaimTag::Claim8,
                    vec![Edge::new(q, q_v)],
                    vec![Edge::new(vv, lo)],
                    ctx,
                    vec![e],
                ),
            };
        }
        let e_xx = self.sole_child(lo)?;
        let step = Edge::new(lo, e_xx);
        if self.adjacent(vv, e_xx) {
            let w_x = self.t.toward(w, lo);
            return self.found(
                ClaimTag::Claim8,
                vec![step, Edge::new(w, w_x)],
                vec![Edge::new(uu, lo), Edge::new(vv, e_xx)],
                ctx,
                vec![e],
            );
        }
        if !self.adjacent(uu, e_xx) {
            return Err(guard_bug(format!(
                "claw at {{{lo};{e_xx},{uu},{vv}}} has no cross edge"
            )));
        }
        match self.t.degree(q) {
            4 => {
                let q_r = self.t.parent(q).expect("below the root");
                let q_x = self.t.toward(q, lo);
                let q_star = self.fourth_neighbor(q, q_x, q_v, q_r)?;
                if self.adjacent(q_v, q_r) {
                    self.found(
                        ClaimTag::Claim8,
                        vec![step, Edge::new(q, q_v), Edge::new(q, q_r)],
                        vec![Edge::new(q_v, q_r), Edge::new(vv, lo), Edge::new(uu, e_xx)],
                        ctx,
                        vec![e],
                    )
                } else if self.adjacent(q_v, q_x) && self.t.degree(uu) == 3 {
                    self.found(
                        ClaimTag::Claim8,
                        vec![step, Edge::new(q, q_v), Edge::new(q, q_x)],
                        vec![Edge::new(q_v, q_x), Edge::new(uu, lo), Edge::new(uu, e_xx)],
                        ctx,
                        vec![e],
                    )
                } else if self.adjacent(q_v, q_x) {
                    // the member gaining edges is a leaf
                    self.found(
                        ClaimTag::Claim8,
                        vec![step, Edge::new(q, q_v)],
                        vec![Edge::new(vv, lo), Edge::new(uu, e_xx)],
                        ctx,
                        vec![e],
                    )
                } else if self.adjacent(q_v, q_star) {
                    self.found(
                        ClaimTag::Claim8,
                        vec![step, Edge::new(q, q_v), Edge::new(q, q_star)],
                        vec![Edge::new(q_v, q_star), Edge::new(vv, lo), Edge::new(uu, e_xx)],
                        ctx,
                        vec![e],
                    )
                } else {
                    Err(guard_bug(format!(
                        "child {q_v} of {q} has no adjacent tree neighbor"
                    )))
                }
            }
            _ => self.found(
                ClaimTag::Claim8,
                vec![step, Edge::new(q, q_v)],
                vec![Edge::new(vv, lo), Edge::new(uu, e_xx)],
                ctx,
                vec![e],
            ),
        }
    }

    /// The meeting vertex hangs off the root path of the witness edge.
    fn claim8_off_path(&self, e: Edge, u: usize, v: usize) -> ScanResult {
        let lo = self.t.lower_endpoint(e);
        let hi = self.t.upper_endpoint(e);
        let ctx = vec![u, v];
        let p_u = self.t.lca(u, lo);
        let p_v = self.t.lca(v, lo);
        if p_u != p_v {
            return Err(guard_bug(
                "off-path pair with distinct attachment points",
            ));
        }
        let q = p_u;
        let (a, b) = if self.adjacent(u, hi) {
            (u, v)
        } else if self.adjacent(v, hi) {
            (v, u)
        } else {
            return Err(guard_bug(format!(
                "claw at {{{lo};{hi},{u},{v}}} has no cross edge"
            )));
        };
        let q_x = self.t.toward(q, lo);
        let cut = Edge::new(q, q_x);
        if e == cut {
            return self.found(
                ClaimTag::Claim8,
                vec![e],
                vec![Edge::new(a, lo)],
                ctx,
                vec![e],
            );
        }
        self.found(
            ClaimTag::Claim8,
            vec![e, cut],
            vec![Edge::new(a, hi), Edge::new(b, lo)],
            ctx,
            vec![e],
        )
    }

    fn fourth_neighbor(
        &self,
        q: usize,
        q_x: usize,
        q_v: usize,
        q_r: usize,
    ) -> Result<usize, Anomaly> {
        let rest: Vec<usize> = self
            .t
            .neighbors(q)
            .into_iter()
            .filter(|&c| c != q_x && c != q_v && c != q_r)
            .collect();
        match rest.as_slice() {
            [c] => Ok(*c),
            other => Err(guard_bug(format!(
                "expected one remaining neighbor at {q}, found {other:?}"
            ))),
        }
    }

    /// For every pair of root neighbors adjacent in the host graph, neither
    /// root edge may have an oblique neighbor in the tracked set.
    fn claim9(&self) -> ScanResult {
        let r = self.root;
        let nb = self.t.children(r);
        for i in 0..nb.len() {
            for j in i + 1..nb.len() {
                let (r1, r2) = (nb[i], nb[j]);
                if !self.adjacent(r1, r2) {
                    continue;
                }
                for (ec, oc) in [(r1, r2), (r2, r1)] {
                    let edge = Edge::new(r, ec);
                    for &z in &self.h_set {
                        if z == ec || !self.oblique(z, edge) {
                            continue;
                        }
                        let mv = if self.in_subtree(ec, z) {
                            (
                                vec![Edge::new(r, ec), Edge::new(r, oc)],
                                vec![Edge::new(r, z), Edge::new(ec, oc)],
                            )
                        } else {
                            (vec![edge], vec![Edge::new(z, ec)])
                        };
                        return self.found(
                            ClaimTag::Claim9,
                            mv.0,
                            mv.1,
                            vec![r, r1, r2, z],
                            vec![edge],
                        );
                    }
                }
            }
        }
        Ok(None)
    }

    /// For a non-root branch vertex outside the witness set with two
    /// children adjacent in the host graph, at most one of the two child
    /// edges may have an oblique neighbor in the witness set.
    fn claim10(&self) -> ScanResult {
        if self.m_set.is_empty() {
            return Ok(None);
        }
        for &b in &self.branch {
            if b == self.root || self.m_set.contains(&b) {
                continue;
            }
            let kids = self.t.children(b);
            for i in 0..kids.len() {
                for j in i + 1..kids.len() {
                    let (c1, c2) = (kids[i], kids[j]);
                    if !self.adjacent(c1, c2) {
                        continue;
                    }
                    let e1 = Edge::new(b, c1);
                    let e2 = Edge::new(b, c2);
                    let z = self
                        .m_set
                        .iter()
                        .copied()
                        .find(|&z| z != b && self.oblique(z, e1));
                    let tt = self
                        .m_set
                        .iter()
                        .copied()
                        .find(|&t| t != b && self.oblique(t, e2));
                    let (Some(z), Some(tt)) = (z, tt) else {
                        continue;
                    };
                    let mv = self.claim10_repair(b, c1, c2, z, tt)?;
                    return self.found(
                        ClaimTag::Claim10,
                        mv.0,
                        mv.1,
                        vec![b, c1, c2, z, tt],
                        vec![e1, e2],
                    );
                }
            }
        }
        Ok(None)
    }

    #[allow(clippy::type_complexity)]
    fn claim10_repair(
        &self,
        b: usize,
        c1: usize,
        c2: usize,
        z: usize,
        tt: usize,
    ) -> Result<(Vec<Edge>, Vec<Edge>), Anomaly> {
        // a witness child short-circuits: detach the sibling onto it
        if z == c1 {
            return Ok((vec![Edge::new(b, c2)], vec![Edge::new(c1, c2)]));
        }
        if tt == c2 {
            return Ok((vec![Edge::new(b, c1)], vec![Edge::new(c2, c1)]));
        }
        if self.in_subtree(c1, z) {
            return Ok((
                vec![Edge::new(b, c1), Edge::new(b, c2)],
                vec![Edge::new(b, z), Edge::new(c1, c2)],
            ));
        }
        if self.in_subtree(c2, tt) {
            return Ok((
                vec![Edge::new(b, c2), Edge::new(b, c1)],
                vec![Edge::new(b, tt), Edge::new(c2, c1)],
            ));
        }
        // both witnesses lie on b's side of their edges
        if self.t.degree(b) != 4 {
            return Ok((vec![Edge::new(b, c1)], vec![Edge::new(z, c1)]));
        }
        if z != tt {
            if self.in_subtree(c1, tt) {
                return Ok((vec![Edge::new(b, c2)], vec![Edge::new(tt, c2)]));
            }
            if self.in_subtree(c2, z) {
                return Ok((vec![Edge::new(b, c1)], vec![Edge::new(z, c1)]));
            }
            return Ok((
                vec![Edge::new(b, c1), Edge::new(b, c2)],
                vec![Edge::new(z, c1), Edge::new(tt, c2)],
            ));
        }
        if self.t.depth(b) >= self.t.depth(z) {
            return Ok((
                vec![Edge::new(b, c1), Edge::new(b, c2)],
                vec![Edge::new(z, c1), Edge::new(z, c2)],
            ));
        }
        Ok((vec![Edge::new(b, c1)], vec![Edge::new(z, c1)]))
    }

    fn scan_leaf_regime(&self) -> ScanResult {
        if let Some(v) = self.claim2()? {
            return Ok(Some(v));
        }
        if let Some(v) = self.claim3()? {
            return Ok(Some(v));
        }
        if let Some(v) = self.claim4()? {
            return Ok(Some(v));
        }
        self.leaf_child_configuration(ClaimTag::AbDisjoint)
    }

    fn scan_rooted_regime(&self) -> ScanResult {
        if let Some(v) = self.claim5()? {
            return Ok(Some(v));
        }
        if let Some(v) = self.claim6()? {
            return Ok(Some(v));
        }
        if let Some(v) = self.claim7()? {
            return Ok(Some(v));
        }
        if let Some(v) = self.claim8()? {
            return Ok(Some(v));
        }
        if let Some(v) = self.claim9()? {
            return Ok(Some(v));
        }
        if let Some(v) = self.claim10()? {
            return Ok(Some(v));
        }
        self.leaf_child_configuration(ClaimTag::CdeDisjoint)
    }
}

/// Scans the guards for the current regime and returns the first violated
/// one with its repair, or `None` when the tree is irreducible.
///
/// The caller guarantees that the tree exceeds the target bound
/// (`|L| + |B| >= n + 1`) and that the root follows the root policy.
pub fn find_violation(
    g: &Graph,
    t: &RootedTree,
    m: usize,
    n: usize,
) -> Result<Option<Violation>, Anomaly> {
    let class = t
        .classify()
        .map_err(|e| guard_bug(format!("classification failed: {e}")))?;
    debug_assert!(class.leaf_count() + class.branch_count() >= n + 1);
    let root = t.root();
    let b3: Vec<usize> = class.branch_by_degree(t, 3);
    if b3.is_empty() {
        let scanner = Scanner {
            g,
            t,
            leaves: class.leaves,
            branch: class.branch,
            h_set: Vec::new(),
            m_set: Vec::new(),
            root,
        };
        scanner.scan_leaf_regime()
    } else {
        if t.degree(root) != 3 {
            return Err(guard_bug(format!(
                "root {root} must be a degree-3 branch vertex in the rooted regime"
            )));
        }
        let mut h_set: Vec<usize> = class
            .leaves
            .iter()
            .chain(b3.iter())
            .copied()
            .filter(|&v| v != root)
            .collect();
        h_set.sort_unstable();
        let m_set = if h_set.len() >= m + 1 {
            h_set[..m + 1].to_vec()
        } else {
            Vec::new()
        };
        let scanner = Scanner {
            g,
            t,
            leaves: class.leaves,
            branch: class.branch,
            h_set,
            m_set,
            root,
        };
        scanner.scan_rooted_regime()
    }
}
