use serde::{Deserialize, Serialize};

use super::monomial::StabilizerElement;
use crate::codes::CosetTable;
use crate::error::{Error, Result};
use crate::linalg::{MatrixFq, PackedSpace};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orbit {
    /// Smallest syndrome in the orbit.
    pub representative: u32,
    pub size: u64,
    pub weight: u32,
}

/// Orbits of a group of lifts on the syndrome space, by smallest member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitPartition {
    orbit_of: Vec<u32>,
    orbits: Vec<Orbit>,
}

impl OrbitPartition {
    pub fn count(&self) -> usize {
        self.orbits.len()
    }

    pub fn orbits(&self) -> &[Orbit] {
        &self.orbits
    }

    pub fn orbit_of(&self, syndrome: u32) -> usize {
        self.orbit_of[syndrome as usize] as usize
    }

    /// Number of orbits at each coset weight `0..=rho`.
    pub fn weight_profile(&self) -> Vec<u64> {
        let top = self.orbits.iter().map(|o| o.weight).max().unwrap_or(0) as usize;
        let mut out = vec![0; top + 1];
        for o in &self.orbits {
            out[o.weight as usize] += 1;
        }
        out
    }
}

/// Permutation of packed syndromes induced by a linear map.
pub fn syndrome_permutation(space: &PackedSpace, lift: &MatrixFq) -> Result<Vec<u32>> {
    let r = space.dim();
    if lift.rows() != r || lift.cols() != r {
        return Err(Error::DimensionMismatch(format!("lift is {}x{}, syndromes have length {r}", lift.rows(), lift.cols())));
    }
    let q = space.field().order();
    // place p (value q^p) is entry r-1-p
    let unit: Vec<u32> = (0..r).map(|p| space.pack(&lift.column(r - 1 - p))).collect();
    let size = space.size() as usize;
    let mut image = vec![0u32; size];
    let mut place = 0;
    let mut power = 1u32;
    for v in 1..size as u32 {
        if v == power * q {
            place += 1;
            power *= q;
        }
        let (d, rest) = (v / power, v % power);
        image[v as usize] = space.add(space.scale(d, unit[place]), image[rest as usize]);
    }
    Ok(image)
}

/// Orbits of the group generated by the lifts of `gens` on all syndromes.
pub fn orbits_on_cosets(table: &CosetTable, gens: &[StabilizerElement]) -> Result<OrbitPartition> {
    let space = table.space();
    let perms: Vec<Vec<u32>> = gens.iter().map(|g| syndrome_permutation(space, g.lift())).collect::<Result<_>>()?;
    let size = space.size() as usize;
    let mut orbit_of = vec![u32::MAX; size];
    let mut orbits = Vec::new();
    let mut stack = Vec::new();
    for s in 0..size as u32 {
        if orbit_of[s as usize] != u32::MAX {
            continue;
        }
        let id = orbits.len() as u32;
        let weight = table.weight(s);
        orbit_of[s as usize] = id;
        stack.push(s);
        let mut count = 0u64;
        while let Some(x) = stack.pop() {
            count += 1;
            if table.weight(x) != weight {
                return Err(Error::Internal(format!("orbit of syndrome {s} mixes coset weights")));
            }
            for p in &perms {
                let y = p[x as usize];
                if orbit_of[y as usize] == u32::MAX {
                    orbit_of[y as usize] = id;
                    stack.push(y);
                }
            }
        }
        orbits.push(Orbit { representative: s, size: count, weight });
    }
    Ok(OrbitPartition { orbit_of, orbits })
}
