//! Separator from breadth-first layers and one fundamental cycle.
//!
//! Two thin layers `l0 <= l1 < l2` around the median layer `l1` cut the
//! component into a low part, a middle part and a high part. If the middle
//! part is still too heavy, the graph below `l2` is triangulated by putting
//! a virtual vertex in every face of length four or more, and a
//! non-tree edge of the breadth-first tree is chosen whose fundamental cycle
//! splits the middle part evenly. Only middle-layer vertices of the cycle
//! join the separator; the rest of the cycle lies in the low part or is
//! virtual.

use super::{balance_limit, Local, Split};

/// Embedded multigraph with rotation lists of edge ids.
struct Map {
    ends: Vec<[u32; 2]>,
    rot: Vec<Vec<u32>>,
}

impl Map {
    fn add_edge(&mut self, a: u32, b: u32) -> u32 {
        self.ends.push([a, b]);
        (self.ends.len() - 1) as u32
    }

    fn other(&self, e: u32, v: u32) -> u32 {
        let [a, b] = self.ends[e as usize];
        if a == v {
            b
        } else {
            a
        }
    }

    /// Dart index: edge `e` traversed away from `v`.
    fn dart(&self, e: u32, from: u32) -> usize {
        2 * e as usize + usize::from(self.ends[e as usize][0] != from)
    }

    /// Faces as lists of darts `(edge, tail)`, each face to the right of
    /// its darts; returns the face of every dart.
    fn faces(&self) -> (Vec<Vec<(u32, u32)>>, Vec<u32>) {
        let mut pos: Vec<Vec<(u32, usize)>> = vec![Vec::new(); self.rot.len()];
        for (v, list) in self.rot.iter().enumerate() {
            for (i, &e) in list.iter().enumerate() {
                pos[v].push((e, i));
            }
            pos[v].sort_unstable();
        }
        let index_at = |v: u32, e: u32| {
            let p = &pos[v as usize];
            // a loop-free map has each edge at most once per vertex
            p[p.binary_search_by_key(&e, |x| x.0).unwrap()].1
        };
        let mut face_of = vec![u32::MAX; 2 * self.ends.len()];
        let mut faces = Vec::new();
        for e in 0..self.ends.len() as u32 {
            for from in self.ends[e as usize] {
                if face_of[self.dart(e, from)] != u32::MAX {
                    continue;
                }
                let id = faces.len() as u32;
                let mut face = Vec::new();
                let (mut ce, mut cv) = (e, from);
                while face_of[self.dart(ce, cv)] == u32::MAX {
                    face_of[self.dart(ce, cv)] = id;
                    face.push((ce, cv));
                    let head = self.other(ce, cv);
                    let list = &self.rot[head as usize];
                    let next = list[(index_at(head, ce) + 1) % list.len()];
                    ce = next;
                    cv = head;
                }
                faces.push(face);
            }
        }
        (faces, face_of)
    }
}

pub(crate) fn fundamental_cycle(local: &Local, comp: &[u32]) -> Option<Split> {
    let c = comp.len();
    if c < 4 {
        return None;
    }
    let none = vec![false; local.len()];
    let (level, order) = local.bfs(comp[0], &none);
    let depth = level[*order.last()? as usize] as usize;
    let mut count = vec![0usize; depth + 2];
    for &v in &order {
        count[level[v as usize] as usize] += 1;
    }
    let mut l1 = 0;
    let mut acc = 0;
    for (l, &k) in count.iter().enumerate() {
        acc += k;
        if 2 * acc > c {
            l1 = l;
            break;
        }
    }
    let cost0 =
        |l: isize| if l < 0 { 0 } else { count[l as usize] } + 2 * (l1 as isize - l) as usize;
    let l0 = (-1..=l1 as isize)
        .min_by_key(|&l| (cost0(l), std::cmp::Reverse(l)))
        .unwrap();
    let cost2 = |l: usize| count[l] + 2 * (l - l1 - 1);
    let l2 = (l1 + 1..=depth + 1).min_by_key(|&l| (cost2(l), l)).unwrap();
    let lv = |v: u32| level[v as usize] as isize;
    let middle = |v: u32| lv(v) > l0 && lv(v) < l2 as isize;

    let mut s: Vec<u32> = order
        .iter()
        .copied()
        .filter(|&v| lv(v) == l0 || lv(v) == l2 as isize)
        .collect();
    let low: Vec<u32> = order.iter().copied().filter(|&v| lv(v) < l0).collect();
    let high: Vec<u32> = order
        .iter()
        .copied()
        .filter(|&v| lv(v) > l2 as isize)
        .collect();
    let mid: Vec<u32> = order.iter().copied().filter(|&v| middle(v)).collect();
    if mid.len() <= balance_limit(c) {
        return Some(Split {
            s,
            pieces: vec![low, mid, high],
        });
    }

    // Triangulated map of the graph below l2.
    let keep: Vec<u32> = order
        .iter()
        .copied()
        .filter(|&v| lv(v) < l2 as isize)
        .collect();
    let mut idx = vec![u32::MAX; local.len()];
    for (i, &v) in keep.iter().enumerate() {
        idx[v as usize] = i as u32;
    }
    let h = keep.len();
    let mut map = Map {
        ends: Vec::new(),
        rot: vec![Vec::new(); h],
    };
    let mut edge_of = std::collections::HashMap::new();
    for (i, &v) in keep.iter().enumerate() {
        for &u in &local.adj[v as usize] {
            let j = idx[u as usize];
            if j == u32::MAX {
                continue;
            }
            let key = (i.min(j as usize) as u32, i.max(j as usize) as u32);
            let e = *edge_of
                .entry(key)
                .or_insert_with(|| map.add_edge(key.0, key.1));
            map.rot[i].push(e);
        }
    }
    if map.ends.len() < 2 {
        return None;
    }
    let (faces, _) = map.faces();
    let real_edges = map.ends.len();
    let mut tree_parent: Vec<(u32, u32)> = vec![(u32::MAX, u32::MAX); h];
    for (i, &v) in keep.iter().enumerate() {
        if lv(v) == 0 {
            continue;
        }
        let p = local.adj[v as usize]
            .iter()
            .find(|&&u| lv(u) == lv(v) - 1)
            .copied()?;
        let pi = idx[p as usize];
        let key = (i.min(pi as usize) as u32, i.max(pi as usize) as u32);
        tree_parent[i] = (pi, edge_of[&key]);
    }
    let mut tree_depth: Vec<u32> = keep.iter().map(|&v| level[v as usize]).collect();
    let mut is_tree = vec![false; real_edges];
    for &(_, e) in tree_parent.iter().filter(|p| p.0 != u32::MAX) {
        is_tree[e as usize] = true;
    }
    for face in faces.iter().filter(|f| f.len() > 3) {
        let z = map.rot.len() as u32;
        map.rot.push(Vec::new());
        let mut spokes = Vec::with_capacity(face.len());
        for &(e_in, tail) in face {
            let corner = map.other(e_in, tail);
            let spoke = map.add_edge(corner, z);
            let list = &mut map.rot[corner as usize];
            let at = list.iter().position(|&x| x == e_in)?;
            list.insert(at + 1, spoke);
            spokes.push(spoke);
        }
        spokes.reverse();
        map.rot[z as usize] = spokes;
        let first = *map.rot[z as usize].last()?;
        let anchor = map.other(first, z);
        tree_parent.push((anchor, first));
        tree_depth.push(tree_depth[anchor as usize] + 1);
        is_tree.resize(map.ends.len(), false);
        is_tree[first as usize] = true;
    }
    is_tree.resize(map.ends.len(), false);
    let (faces, face_of) = map.faces();
    let nv = map.rot.len() as i64;
    let (ne, nf) = (map.ends.len() as i64, faces.len() as i64);
    if nv - ne + nf != 2 || faces.iter().any(|f| f.len() != 3) {
        return None;
    }

    // Dual tree over non-tree edges.
    let nfaces = faces.len();
    let mut dual: Vec<Vec<(u32, u32)>> = vec![Vec::new(); nfaces];
    for e in 0..map.ends.len() as u32 {
        if !is_tree[e as usize] {
            let [a, b] = map.ends[e as usize];
            let (fa, fb) = (face_of[map.dart(e, a)], face_of[map.dart(e, b)]);
            dual[fa as usize].push((fb, e));
            dual[fb as usize].push((fa, e));
        }
    }
    let mut tin = vec![u32::MAX; nfaces];
    let mut tout = vec![0u32; nfaces];
    let mut child_of_edge = vec![u32::MAX; map.ends.len()];
    let mut post = Vec::with_capacity(nfaces);
    let mut clock = 0;
    let mut stack = vec![(0u32, 0usize)];
    tin[0] = 0;
    while let Some(&mut (f, ref mut next)) = stack.last_mut() {
        if let Some(&(g, e)) = dual[f as usize].get(*next) {
            *next += 1;
            if tin[g as usize] == u32::MAX {
                clock += 1;
                tin[g as usize] = clock;
                child_of_edge[e as usize] = g;
                stack.push((g, 0));
            }
        } else {
            tout[f as usize] = clock;
            post.push(f);
            stack.pop();
        }
    }
    if tin.contains(&u32::MAX) {
        return None;
    }
    let inside = |f: u32, root: u32| {
        tin[root as usize] <= tin[f as usize] && tin[f as usize] <= tout[root as usize]
    };

    // Each middle vertex charges one incident face.
    let mut charged = vec![0usize; nfaces];
    let mut face_of_vertex = vec![u32::MAX; h];
    for (i, &v) in keep.iter().enumerate() {
        if middle(v) {
            let e = map.rot[i][0];
            let f = face_of[map.dart(e, i as u32)];
            face_of_vertex[i] = f;
            charged[f as usize] += 1;
        }
    }
    let mut sub = charged.clone();
    for &f in &post {
        for &(g, e) in &dual[f as usize] {
            if child_of_edge[e as usize] == g && g != f {
                sub[f as usize] += sub[g as usize];
            }
        }
    }

    let path = |a: u32, b: u32| {
        let (mut a, mut b) = (a, b);
        let mut out = Vec::new();
        while a != b {
            if tree_depth[a as usize] >= tree_depth[b as usize] {
                out.push(a);
                a = tree_parent[a as usize].0;
            } else {
                out.push(b);
                b = tree_parent[b as usize].0;
            }
        }
        out.push(a);
        out
    };
    let is_mid = |x: u32| (x as usize) < h && middle(keep[x as usize]);
    let total = mid.len();
    let mut best: Option<(usize, usize, u32)> = None;
    for e in 0..map.ends.len() as u32 {
        let root = child_of_edge[e as usize];
        if is_tree[e as usize] || root == u32::MAX {
            continue;
        }
        let [a, b] = map.ends[e as usize];
        let cyc: Vec<u32> = path(a, b).into_iter().filter(|&x| is_mid(x)).collect();
        let on_inside = cyc
            .iter()
            .filter(|&&x| inside(face_of_vertex[x as usize], root))
            .count();
        let ins = sub[root as usize] - on_inside;
        let outs = total - ins - cyc.len();
        let key = (ins.max(outs), cyc.len(), e);
        if best.is_none_or(|b| key < b) {
            best = Some(key);
        }
    }
    let (_, _, e) = best?;
    let root = child_of_edge[e as usize];
    let [a, b] = map.ends[e as usize];
    let cyc: Vec<u32> = path(a, b).into_iter().filter(|&x| is_mid(x)).collect();
    let mut on_cycle = vec![false; h];
    for &x in &cyc {
        on_cycle[x as usize] = true;
        s.push(keep[x as usize]);
    }
    let (mut ins, mut outs) = (Vec::new(), Vec::new());
    for &v in &mid {
        let i = idx[v as usize] as usize;
        if on_cycle[i] {
            continue;
        }
        if inside(face_of_vertex[i], root) {
            ins.push(v);
        } else {
            outs.push(v);
        }
    }
    Some(Split {
        s,
        pieces: vec![low, ins, outs, high],
    })
}
