use super::{DistanceMatrix, FiniteSpace};

/// Infimum of chain sums `D(u1,u2) + ... + D(u_{N-1},u_N)` over all finite
/// chains from `x` to `y`.
///
/// Edge weights are nonnegative, so revisiting a point never shortens a
/// chain and the infimum is the all-pairs shortest path on the complete
/// graph weighted by `D`. Relaxation sweeps are repeated until nothing
/// changes, which makes the result closed under its own triangle
/// inequality in floating point (so it is a fixed point of this function).
pub fn shortest_chain_infimum(space: &FiniteSpace) -> DistanceMatrix {
    closure(space.matrix().clone())
}

pub(crate) fn closure(mut d: DistanceMatrix) -> DistanceMatrix {
    let n = d.len();
    for i in 0..n {
        d.set(i, i, 0.0);
    }
    let mut row_k = vec![0.0; n];
    loop {
        let mut changed = false;
        for k in 0..n {
            row_k.copy_from_slice(d.row(k));
            for i in 0..n {
                let d_ik = d.get(i, k);
                if d_ik.is_infinite() {
                    continue;
                }
                for (d_ij, &d_kj) in d.row_mut(i).iter_mut().zip(&row_k) {
                    let via = d_ik + d_kj;
                    if via < *d_ij {
                        *d_ij = via;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            return d;
        }
    }
}
