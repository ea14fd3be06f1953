//! Small named matroids used as test instances. Labels start at 1.

use super::{Matroid, MAX_ELEMENTS};
use crate::bits::{self, bit, bits, full};
use crate::error::{Error, Result};
use crate::Label;

fn labels(n: usize) -> Vec<Label> {
    (1..=n as Label).collect()
}

/// `U_{r,n}` on `{1..n}`.
pub fn uniform(r: usize, n: usize) -> Result<Matroid> {
    if n > MAX_ELEMENTS {
        return Err(Error::GroundTooLarge(n));
    }
    if r > n {
        return Err(Error::Precondition(format!("uniform({r},{n}) needs r <= n")));
    }
    Ok(Matroid::from_masks_unchecked(labels(n), bits::combinations(full(n), r)))
}

fn graphic(vertices: usize, edges: &[(usize, usize)]) -> Matroid {
    let n = edges.len();
    let r = vertices - 1;
    let forest = |m: u32| {
        let mut parent: Vec<usize> = (0..vertices).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for e in bits(m) {
            let (a, b) = edges[e];
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra == rb {
                return false;
            }
            parent[ra] = rb;
        }
        true
    };
    let bases = bits::combinations(full(n), r).into_iter().filter(|&m| forest(m)).collect();
    Matroid::from_masks_unchecked(labels(n), bases)
}

/// `M(K4)` with vertices p,q,r,s and edges 1=pq, 2=pr, 3=ps, 4=qr, 5=qs,
/// 6=rs. Triangles: {1,2,4}, {1,3,5}, {2,3,6}, {4,5,6}.
pub fn mk4() -> Matroid {
    graphic(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
}

const FANO_LINES: [[usize; 3]; 7] = [[1, 2, 3], [1, 4, 5], [1, 6, 7], [2, 4, 6], [2, 5, 7], [3, 4, 7], [3, 5, 6]];

fn line_mask(line: &[usize; 3]) -> u32 {
    line.iter().fold(0, |m, &p| m | bit(p - 1))
}

fn rank3_from_lines(lines: &[[usize; 3]]) -> Matroid {
    let dependent: Vec<u32> = lines.iter().map(line_mask).collect();
    let bases = bits::combinations(full(7), 3).into_iter().filter(|b| !dependent.contains(b)).collect();
    Matroid::from_masks_unchecked(labels(7), bases)
}

/// The Fano plane `F7` on points 1..7.
pub fn fano() -> Matroid {
    rank3_from_lines(&FANO_LINES)
}

/// `F7^-`: the Fano plane with the line {3,5,6} relaxed.
pub fn nonfano() -> Matroid {
    rank3_from_lines(&FANO_LINES[..6])
}

fn wheel_edges(r: usize) -> Vec<(usize, usize)> {
    // hub 0, rim vertices 1..=r; element 2i-1 is spoke i, element 2i the
    // rim edge from i to i+1
    let mut edges = Vec::with_capacity(2 * r);
    for i in 1..=r {
        edges.push((0, i));
        edges.push((i, if i == r { 1 } else { i + 1 }));
    }
    edges
}

/// The rank-`r` wheel `M(W_r)`: odd labels are spokes, even labels rim edges.
pub fn wheel(r: usize) -> Result<Matroid> {
    if !(2..=MAX_ELEMENTS / 2).contains(&r) {
        return Err(Error::Precondition(format!("wheel rank {r} out of range")));
    }
    Ok(graphic(r + 1, &wheel_edges(r)))
}

/// The rank-`r` whirl: the wheel with its rim circuit-hyperplane relaxed.
pub fn whirl(r: usize) -> Result<Matroid> {
    let w = wheel(r)?;
    let rim = (0..r).fold(0u32, |m, i| m | bit(2 * i + 1));
    let mut bases = w.basis_masks().to_vec();
    bases.push(rim);
    Ok(Matroid::from_masks_unchecked(labels(2 * r), bases))
}

/// Sparse paving matroid of rank `r` on `{1..n}` whose circuit-hyperplanes
/// are the given `r`-sets. The family is validated.
pub fn sparse_paving(r: usize, n: usize, circuit_hyperplanes: &[Vec<Label>]) -> Result<Matroid> {
    let base = uniform(r, n)?;
    let mut drop = Vec::new();
    for h in circuit_hyperplanes {
        if h.len() != r {
            return Err(Error::Precondition(format!("circuit-hyperplane {h:?} must have size {r}")));
        }
        drop.push(base.mask_of(h)?);
    }
    let bases: Vec<u32> = base.basis_masks().iter().copied().filter(|b| !drop.contains(b)).collect();
    Matroid::from_masks(labels(n), bases)
}
