use super::Convex;
use crate::vector::UnitVector;

/// Pairs with `|1 − γ²|` below this are treated as parallel planes.
pub const EPS_PARALLEL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootFlag {
    /// Inside every other halfspace: a vertex of the convex.
    Good,
    /// Both parents are good circles and another good circle masks it.
    Masked,
    /// At least one parent is not a good circle.
    NotFromGoodPair,
    /// Both parents are good circles but only halfspaces outside the set mask it.
    MaskedOutside,
}

impl RootFlag {
    pub fn code(self) -> i8 {
        match self {
            RootFlag::Good => 1,
            RootFlag::Masked => 0,
            RootFlag::NotFromGoodPair => -1,
            RootFlag::MaskedOutside => -2,
        }
    }
}

/// Intersection of two boundary circles. `parents.0` is the halfspace whose
/// counterclockwise arc arrives at the root, `parents.1` the one whose arc leaves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub position: UnitVector,
    pub parents: (usize, usize),
    pub flag: RootFlag,
}

/// One root per ordered pair of non-parallel halfspaces whose planes cut the
/// sphere in two points (the positive branch along `n_a × n_b`).
pub fn compute_roots(c: &Convex) -> Vec<Root> {
    let hs = c.halfspaces();
    let mut roots = Vec::new();
    for a in 0..hs.len() {
        for b in 0..hs.len() {
            if a == b {
                continue;
            }
            let (n1, c1) = (hs[a].normal, hs[a].offset);
            let (n2, c2) = (hs[b].normal, hs[b].offset);
            let gamma = n1.dot(n2);
            let sin2 = 1.0 - gamma * gamma;
            if sin2.abs() <= EPS_PARALLEL {
                continue;
            }
            // tangent circles (equality) count as no root
            let reach = c1 * c1 + c2 * c2 - 2.0 * c1 * c2 * gamma;
            if sin2 <= reach || reach.is_nan() {
                continue;
            }
            let u = (c1 - c2 * gamma) / sin2;
            let v = (c2 - c1 * gamma) / sin2;
            let w = ((1.0 - reach / sin2) / sin2).sqrt();
            let position = (n1 * u + n2 * v + n1.cross(n2) * w).normalize();
            let good = hs
                .iter()
                .enumerate()
                .all(|(k, h)| k == a || k == b || h.contains(position));
            roots.push(Root {
                position,
                parents: (a, b),
                flag: if good {
                    RootFlag::Good
                } else {
                    RootFlag::NotFromGoodPair
                },
            });
        }
    }
    roots
}

/// Grows the good-circle set until every root between two of its circles is
/// masked by a circle of the set, updating the flags. Returns set membership
/// per halfspace index.
pub fn select_masking_circles(c: &Convex, roots: &mut [Root]) -> Vec<bool> {
    let hs = c.halfspaces();
    let mut in_set = vec![false; hs.len()];
    for r in roots.iter().filter(|r| r.flag == RootFlag::Good) {
        in_set[r.parents.0] = true;
        in_set[r.parents.1] = true;
    }
    loop {
        let mut outstanding = Vec::new();
        for (i, r) in roots.iter_mut().enumerate() {
            if r.flag == RootFlag::Good {
                continue;
            }
            let (a, b) = r.parents;
            r.flag = if !(in_set[a] && in_set[b]) {
                RootFlag::NotFromGoodPair
            } else if hs
                .iter()
                .enumerate()
                .any(|(k, h)| in_set[k] && k != a && k != b && !h.contains(r.position))
            {
                RootFlag::Masked
            } else {
                outstanding.push(i);
                RootFlag::MaskedOutside
            };
        }
        if outstanding.is_empty() {
            return in_set;
        }
        // index order is arcangle order, so ties go to the smaller cap
        let best = (0..hs.len())
            .filter(|&k| !in_set[k])
            .map(|k| {
                let hits = outstanding
                    .iter()
                    .filter(|&&i| !hs[k].contains(roots[i].position))
                    .count();
                (k, hits)
            })
            .max_by(|x, y| x.1.cmp(&y.1).then(y.0.cmp(&x.0)));
        match best {
            Some((k, hits)) if hits > 0 => in_set[k] = true,
            // unreachable for consistent flags; bail out rather than spin
            _ => return in_set,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Visibility {
    Inside,
    Outside,
}

/// For a circle with no good roots: whether its perimeter lies inside the
/// other halfspaces, tested at its westward point.
pub fn visibility(c: &Convex, index: usize) -> Visibility {
    let hs = c.halfspaces();
    let Ok(probe) = hs[index].westward_point() else {
        return Visibility::Outside;
    };
    let inside = hs
        .iter()
        .enumerate()
        .all(|(k, h)| k == index || h.contains(probe));
    if inside {
        Visibility::Inside
    } else {
        Visibility::Outside
    }
}
