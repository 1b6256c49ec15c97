//! Maximal clique enumeration (Bron–Kerbosch with pivoting) on graphs of at
//! most 128 vertices, with vertex sets packed into `u128` masks.

pub(crate) type Mask = u128;

pub(crate) const MAX_VERTICES: usize = 128;

/// Calls `visit` once per maximal clique of the graph given by `adj`
/// (`adj[v]` is the neighbour mask of `v`, without `v` itself).
pub(crate) fn for_each_maximal_clique(adj: &[Mask], mut visit: impl FnMut(Mask)) {
    assert!(adj.len() <= MAX_VERTICES);
    let all = if adj.len() == MAX_VERTICES { Mask::MAX } else { (1 << adj.len()) - 1 };
    expand(adj, 0, all, 0, &mut visit);
}

fn expand(adj: &[Mask], r: Mask, mut p: Mask, mut x: Mask, visit: &mut impl FnMut(Mask)) {
    if p == 0 {
        if x == 0 {
            visit(r);
        }
        return;
    }
    // pivot: the vertex of P ∪ X with most neighbours in P
    let pivot = bits(p | x).max_by_key(|&u| (adj[u] & p).count_ones()).expect("P non-empty");
    let mut todo = p & !adj[pivot];
    while todo != 0 {
        let v = todo.trailing_zeros() as usize;
        todo &= todo - 1;
        let vb: Mask = 1 << v;
        expand(adj, r | vb, p & adj[v], x & adj[v], visit);
        p &= !vb;
        x |= vb;
    }
}

pub(crate) fn bits(mut m: Mask) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(v)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, edges: &[(usize, usize)]) -> Vec<Mask> {
        let mut adj = vec![0; n];
        for &(a, b) in edges {
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
        }
        adj
    }

    fn cliques(adj: &[Mask]) -> Vec<Mask> {
        let mut out = Vec::new();
        for_each_maximal_clique(adj, |c| out.push(c));
        out.sort();
        out
    }

    #[test]
    fn small_graph() {
        // 0-1-2 triangle, 2-3, isolated 4
        let adj = graph(5, &[(0, 1), (0, 2), (1, 2), (2, 3)]);
        assert_eq!(cliques(&adj), vec![0b00111, 0b01100, 0b10000]);
    }

    #[test]
    fn matches_brute_force_on_random_graphs() {
        let mut seed = 0x2545F4914F6CDD1Du64;
        for _ in 0..200 {
            let n = 1 + (seed % 9) as usize;
            let mut adj = vec![0 as Mask; n];
            for a in 0..n {
                for b in a + 1..n {
                    seed ^= seed << 13;
                    seed ^= seed >> 7;
                    seed ^= seed << 17;
                    if seed.is_multiple_of(2) {
                        adj[a] |= 1 << b;
                        adj[b] |= 1 << a;
                    }
                }
            }
            let is_clique = |m: Mask| bits(m).all(|v| m & !(1 << v) & !adj[v] == 0);
            let mut brute: Vec<Mask> = (1..(1 as Mask) << n)
                .filter(|&m| is_clique(m))
                .filter(|&m| (0..n).all(|v| m >> v & 1 == 1 || !is_clique(m | 1 << v)))
                .collect();
            brute.sort();
            assert_eq!(cliques(&adj), brute);
        }
    }
}
