//! Brute-force oracles shared by the integration tests. Nothing here calls
//! into the library except to build its input types.

#![allow(dead_code)]

/// An instance as plain data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Raw {
    pub sizes: Vec<usize>,
    pub degrees: Vec<usize>,
    pub matrix: Vec<Vec<usize>>,
}

impl Raw {
    pub fn n(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn class_of(&self) -> Vec<usize> {
        self.sizes
            .iter()
            .enumerate()
            .flat_map(|(c, &s)| std::iter::repeat(c).take(s))
            .collect()
    }

    pub fn instance(&self) -> jdm_core::JdmInstance {
        jdm_core::JdmInstance::new(self.sizes.clone(), self.degrees.clone(), self.matrix.clone())
            .unwrap()
    }

    pub fn degree_feasible(&self) -> bool {
        let k = self.sizes.len();
        (0..k).all(|i| {
            let off: usize = (0..k).filter(|&j| j != i).map(|j| self.matrix[i][j]).sum();
            2 * self.matrix[i][i] + off == self.sizes[i] * self.degrees[i]
        })
    }

    pub fn matrix_feasible(&self) -> bool {
        let k = self.sizes.len();
        (0..k).all(|i| {
            (0..k).all(|j| {
                let cap = if i == j {
                    self.sizes[i] * (self.sizes[i] - 1) / 2
                } else {
                    self.sizes[i] * self.sizes[j]
                };
                self.matrix[i][j] <= cap
            })
        })
    }
}

/// Every realization, as sorted edge lists, by deciding vertex pairs one at
/// a time in lexicographic order.
pub fn realizations(raw: &Raw) -> Vec<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    visit_realizations(raw, &mut |edges| {
        out.push(edges.to_vec());
        true
    });
    out
}

/// Calls `f` on every realization while it returns `true`.
pub fn visit_realizations(raw: &Raw, f: &mut dyn FnMut(&[(usize, usize)]) -> bool) {
    let n = raw.n();
    let class = raw.class_of();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let k = raw.sizes.len();
    let mut st = State {
        deg: vec![0; n],
        count: vec![vec![0; k]; k],
        edges: Vec::new(),
    };
    fn go(
        raw: &Raw,
        class: &[usize],
        pairs: &[(usize, usize)],
        i: usize,
        st: &mut State,
        f: &mut dyn FnMut(&[(usize, usize)]) -> bool,
    ) -> bool {
        let n = class.len();
        if i > 0 {
            // Vertex u is finished once its last pair (u, n-1) is decided.
            let (u, v) = pairs[i - 1];
            if v == n - 1 && st.deg[u] != raw.degrees[class[u]] {
                return true;
            }
        }
        if i == pairs.len() {
            let k = raw.sizes.len();
            let ok = (0..n).all(|v| st.deg[v] == raw.degrees[class[v]])
                && (0..k).all(|a| (0..k).all(|b| st.count[a][b] == raw.matrix[a][b]));
            return if ok { f(&st.edges) } else { true };
        }
        let (u, v) = pairs[i];
        let (a, b) = (class[u], class[v]);
        if st.deg[u] < raw.degrees[a] && st.deg[v] < raw.degrees[b] && st.count[a][b] < raw.matrix[a][b] {
            st.deg[u] += 1;
            st.deg[v] += 1;
            st.count[a][b] += 1;
            if a != b {
                st.count[b][a] += 1;
            }
            st.edges.push((u, v));
            let cont = go(raw, class, pairs, i + 1, st, f);
            st.edges.pop();
            st.deg[u] -= 1;
            st.deg[v] -= 1;
            st.count[a][b] -= 1;
            if a != b {
                st.count[b][a] -= 1;
            }
            if !cont {
                return false;
            }
        }
        go(raw, class, pairs, i + 1, st, f)
    }
    go(raw, &class, &pairs, 0, &mut st, f);
}

struct State {
    deg: Vec<usize>,
    count: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

pub fn is_connected(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut parts = n;
    for &(a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            parts -= 1;
        }
    }
    parts <= 1
}

/// Compositions of at most `max_n` vertices into `1..=max_k` classes, with
/// every class degree up to `max_degree`, and every matrix that meets the
/// degree condition (diagonal solved from the rest). Each degree-feasible
/// instance is followed by a copy with one cross or diagonal entry bumped,
/// which breaks the degree condition.
pub fn instance_grid(max_n: usize, max_k: usize, max_degree: usize) -> Vec<Raw> {
    let mut out = Vec::new();
    for k in 1..=max_k {
        for sizes in compositions(max_n, k) {
            let n: usize = sizes.iter().sum();
            let top = max_degree.min(n - 1);
            for degrees in product(k, top) {
                let offs: Vec<(usize, usize)> =
                    (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect();
                let bounds: Vec<usize> = offs
                    .iter()
                    .map(|&(i, j)| (sizes[i] * sizes[j]).min(sizes[i] * degrees[i]).min(sizes[j] * degrees[j]))
                    .collect();
                for values in bounded_product(&bounds) {
                    let mut matrix = vec![vec![0; k]; k];
                    for (&(i, j), &x) in offs.iter().zip(&values) {
                        matrix[i][j] = x;
                        matrix[j][i] = x;
                    }
                    let mut ok = true;
                    for i in 0..k {
                        let off: usize = (0..k).filter(|&j| j != i).map(|j| matrix[i][j]).sum();
                        let total = sizes[i] * degrees[i];
                        if off > total || (total - off) % 2 == 1 {
                            ok = false;
                            break;
                        }
                        matrix[i][i] = (total - off) / 2;
                    }
                    if !ok {
                        continue;
                    }
                    let raw = Raw {
                        sizes: sizes.clone(),
                        degrees: degrees.clone(),
                        matrix,
                    };
                    let mut bumped = raw.clone();
                    bumped.matrix[0][0] += 1;
                    out.push(raw);
                    out.push(bumped);
                }
            }
        }
    }
    out
}

fn compositions(max_n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    fn rec(left: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        let rest = k - cur.len() - 1;
        for s in 1..=left.saturating_sub(rest) {
            cur.push(s);
            rec(left - s, k, cur, out);
            cur.pop();
        }
    }
    rec(max_n, k, &mut Vec::new(), &mut out);
    out
}

fn product(k: usize, top: usize) -> Vec<Vec<usize>> {
    bounded_product(&vec![top; k])
}

fn bounded_product(bounds: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &b in bounds {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..=b).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

/// Whether `edges` is a simple graph realizing `raw`.
pub fn is_realization(raw: &Raw, edges: &[(usize, usize)]) -> bool {
    let n = raw.n();
    let class = raw.class_of();
    let k = raw.sizes.len();
    let mut deg = vec![0; n];
    let mut count = vec![vec![0; k]; k];
    let mut seen = std::collections::HashSet::new();
    for &(a, b) in edges {
        if a == b || a >= n || b >= n || !seen.insert((a.min(b), a.max(b))) {
            return false;
        }
        deg[a] += 1;
        deg[b] += 1;
        count[class[a]][class[b]] += 1;
        if class[a] != class[b] {
            count[class[b]][class[a]] += 1;
        }
    }
    (0..n).all(|v| deg[v] == raw.degrees[class[v]]) && count == raw.matrix
}

/// Sorted edge lists of every graph one legal switch away, by scanning all
/// quadruples `(u, v, u', v')` with `u, u'` in one class.
pub fn switch_neighbors(class: &[usize], edges: &[(usize, usize)]) -> Vec<Vec<(usize, usize)>> {
    let n = class.len();
    let set: std::collections::BTreeSet<(usize, usize)> = edges.iter().copied().collect();
    let has = |a: usize, b: usize| set.contains(&(a.min(b), a.max(b)));
    let mut out = std::collections::BTreeSet::new();
    for u in 0..n {
        for u2 in 0..n {
            if u == u2 || class[u] != class[u2] {
                continue;
            }
            for v in 0..n {
                for v2 in 0..n {
                    let distinct = v != v2 && u != v2 && u2 != v && u != v && u2 != v2;
                    if distinct && has(u, v) && has(u2, v2) && !has(u, v2) && !has(u2, v) {
                        let mut next = set.clone();
                        next.remove(&(u.min(v), u.max(v)));
                        next.remove(&(u2.min(v2), u2.max(v2)));
                        next.insert((u.min(v2), u.max(v2)));
                        next.insert((u2.min(v), u2.max(v)));
                        out.insert(next.into_iter().collect::<Vec<_>>());
                    }
                }
            }
        }
    }
    out.into_iter().collect()
}

/// Every degree sequence on `n` vertices realizable by a simple graph
/// avoiding the `forbidden` pairs, found by listing all allowed edge sets.
pub fn realizable_degree_sequences(
    n: usize,
    forbidden: &[(usize, usize)],
) -> std::collections::HashSet<Vec<usize>> {
    let allowed: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .filter(|p| !forbidden.contains(p))
        .collect();
    let mut out = std::collections::HashSet::new();
    for mask in 0u32..(1 << allowed.len()) {
        let mut deg = vec![0; n];
        for (i, &(a, b)) in allowed.iter().enumerate() {
            if mask >> i & 1 == 1 {
                deg[a] += 1;
                deg[b] += 1;
            }
        }
        out.insert(deg);
    }
    out
}
