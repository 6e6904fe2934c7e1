use std::collections::HashSet;

use crate::subset::Subset;

use super::{GeometryError, GroundSet};

/// A convex geometry given by listing its convex sets.
#[derive(Clone, Debug)]
pub struct ExplicitFamily {
    members: Vec<Subset>,
}

impl ExplicitFamily {
    /// Checks the three convex-geometry axioms: the ground set is convex,
    /// convex sets are closed under intersection, and every proper convex
    /// set can be grown by one element.
    pub(crate) fn new(ground: &GroundSet, mut members: Vec<Subset>) -> Result<Self, GeometryError> {
        members.sort_unstable();
        members.dedup();
        let full = ground.full();
        let set: HashSet<Subset> = members.iter().copied().collect();

        if !set.contains(&full) {
            return Err(GeometryError::AxiomViolation {
                axiom: 1,
                witness: format!("ground set {} is not in the family", ground.format(full)),
            });
        }
        for (i, &k) in members.iter().enumerate() {
            for &l in &members[i + 1..] {
                let meet = k.intersection(l);
                if !set.contains(&meet) {
                    return Err(GeometryError::AxiomViolation {
                        axiom: 2,
                        witness: format!(
                            "{} & {} = {} is not in the family",
                            ground.format(k),
                            ground.format(l),
                            ground.format(meet)
                        ),
                    });
                }
            }
        }
        for &k in &members {
            if k == full {
                continue;
            }
            let grows = full
                .difference(k)
                .iter()
                .any(|a| set.contains(&k.with(a)));
            if !grows {
                return Err(GeometryError::AxiomViolation {
                    axiom: 3,
                    witness: format!("no single element extends {}", ground.format(k)),
                });
            }
        }
        Ok(ExplicitFamily { members })
    }

    pub fn members(&self) -> &[Subset] {
        &self.members
    }

    pub(crate) fn closure(&self, a: Subset) -> Subset {
        self.members
            .iter()
            .filter(|k| a.is_subset(**k))
            .fold(Subset::full(64), |acc, &k| acc.intersection(k))
    }
}
