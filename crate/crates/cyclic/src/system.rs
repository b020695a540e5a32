//! Compatible families of cyclic actions indexed by divisibility, and
//! towers of complexes over a finite divisibility poset.

use std::collections::BTreeMap;

use tame_complex::{ChainMap, Complex};

use crate::{lcm, CyclicAction, CyclicError};

/// One complex with a Z/n-action for each level n, together with a
/// transition for every divisible pair that intertwines the generators
/// through the quotient Z/m -> Z/n and composes strictly.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LevelSystem {
    actions: BTreeMap<u64, CyclicAction>,
    inflations: BTreeMap<(u64, u64), ChainMap>,
}

impl LevelSystem {
    pub fn new(
        actions: BTreeMap<u64, CyclicAction>,
        inflations: BTreeMap<(u64, u64), ChainMap>,
    ) -> Result<Self, CyclicError> {
        let sys = LevelSystem { actions, inflations };
        sys.validate()?;
        Ok(sys)
    }

    /// Skips validation; the escape hatch for negative controls.
    pub fn from_parts_unchecked(
        actions: BTreeMap<u64, CyclicAction>,
        inflations: BTreeMap<(u64, u64), ChainMap>,
    ) -> Self {
        LevelSystem { actions, inflations }
    }

    /// Builds the full transition family from one-step data by composing
    /// along divisibility chains, then validates the result.
    pub fn from_steps(
        actions: BTreeMap<u64, CyclicAction>,
        steps: BTreeMap<(u64, u64), ChainMap>,
    ) -> Result<Self, CyclicError> {
        let levels: Vec<u64> = actions.keys().copied().collect();
        let mut inflations = steps;
        loop {
            let mut added = false;
            let have: Vec<(u64, u64)> = inflations.keys().copied().collect();
            for &(a, b) in &have {
                for &c in &levels {
                    if c > b && c % b == 0 {
                        if let Some(next) = inflations.get(&(b, c)) {
                            let comp = next.compose(&inflations[&(a, b)]);
                            if !inflations.contains_key(&(a, c)) {
                                inflations.insert((a, c), comp);
                                added = true;
                            }
                        }
                    }
                }
            }
            if !added {
                break;
            }
        }
        Self::new(actions, inflations)
    }

    fn validate(&self) -> Result<(), CyclicError> {
        let levels: Vec<u64> = self.actions.keys().copied().collect();
        if !levels.contains(&1) {
            return Err(CyclicError::BadLevels("levels must contain 1".into()));
        }
        for &a in &levels {
            if self.actions[&a].order() != a {
                return Err(CyclicError::BadLevel {
                    level: a,
                    what: format!("action has order {}", self.actions[&a].order()),
                });
            }
            for &b in &levels {
                let l = lcm(a, b);
                if !levels.contains(&l) {
                    return Err(CyclicError::BadLevels(format!(
                        "levels are not lcm-closed: lcm({a}, {b}) = {l} is missing"
                    )));
                }
            }
        }
        for (&(a, b), t) in &self.inflations {
            if a >= b || b % a != 0 || !levels.contains(&a) || !levels.contains(&b) {
                return Err(CyclicError::BadTransition {
                    from: a,
                    to: b,
                    what: "not a divisible pair of levels".into(),
                });
            }
            if t.src() != self.actions[&a].complex() || t.dst() != self.actions[&b].complex() {
                return Err(CyclicError::BadTransition {
                    from: a,
                    to: b,
                    what: "endpoints differ from the level complexes".into(),
                });
            }
            if !CyclicAction::intertwines(&self.actions[&a], &self.actions[&b], t) {
                return Err(CyclicError::BadTransition {
                    from: a,
                    to: b,
                    what: "does not intertwine the generators".into(),
                });
            }
        }
        for &a in &levels {
            for &b in &levels {
                if b > a && b % a == 0 && !self.inflations.contains_key(&(a, b)) {
                    return Err(CyclicError::BadTransition {
                        from: a,
                        to: b,
                        what: "missing transition".into(),
                    });
                }
            }
        }
        for &a in &levels {
            for &b in &levels {
                for &c in &levels {
                    if a < b && b < c && b % a == 0 && c % b == 0 {
                        let direct = &self.inflations[&(a, c)];
                        let through = self.inflations[&(b, c)].compose(&self.inflations[&(a, b)]);
                        if *direct != through {
                            return Err(CyclicError::NotFunctorial { from: a, mid: b, to: c });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn levels(&self) -> Vec<u64> {
        self.actions.keys().copied().collect()
    }

    pub fn top(&self) -> u64 {
        *self.actions.keys().last().expect("nonempty system")
    }

    pub fn action(&self, n: u64) -> &CyclicAction {
        &self.actions[&n]
    }

    pub fn complex(&self, n: u64) -> &Complex {
        self.actions[&n].complex()
    }

    pub fn inflation(&self, a: u64, b: u64) -> ChainMap {
        if a == b {
            ChainMap::identity(self.complex(a))
        } else {
            self.inflations[&(a, b)].clone()
        }
    }
}

/// Re-runs the structural checks on a possibly unchecked system and
/// certifies the cocone of transitions into the top level: the legs must
/// commute with every generator through the quotients and compose
/// strictly, which makes the comparison from the colimit to the top
/// component (action forgotten) the identity, hence a quasi-isomorphism.
pub fn categorical_lemma_check(sys: &LevelSystem) -> Result<(), CyclicError> {
    sys.validate()?;
    let top = sys.top();
    for n in sys.levels() {
        let leg = sys.inflation(n, top);
        let through_gen = leg.compose(sys.action(n).generator());
        let gen_through = sys.action(top).generator().compose(&leg);
        if through_gen != gen_through {
            return Err(CyclicError::BadTransition {
                from: n,
                to: top,
                what: "cocone leg fails to intertwine the generators".into(),
            });
        }
    }
    Ok(())
}

/// A finite lcm-closed family of complexes with strictly functorial
/// transitions along divisibility.
pub struct DivisibilityDiagram {
    complexes: BTreeMap<u64, Complex>,
    transitions: BTreeMap<(u64, u64), ChainMap>,
}

impl DivisibilityDiagram {
    pub fn new(
        complexes: BTreeMap<u64, Complex>,
        transitions: BTreeMap<(u64, u64), ChainMap>,
    ) -> Result<Self, CyclicError> {
        let levels: Vec<u64> = complexes.keys().copied().collect();
        if levels.is_empty() {
            return Err(CyclicError::BadLevels("empty diagram".into()));
        }
        for &a in &levels {
            for &b in &levels {
                let l = lcm(a, b);
                if !levels.contains(&l) {
                    return Err(CyclicError::BadLevels(format!(
                        "levels are not lcm-closed: lcm({a}, {b}) = {l} is missing"
                    )));
                }
            }
        }
        for (&(a, b), t) in &transitions {
            if a >= b || b % a != 0 || !levels.contains(&a) || !levels.contains(&b) {
                return Err(CyclicError::BadTransition {
                    from: a,
                    to: b,
                    what: "not a divisible pair of levels".into(),
                });
            }
            if t.src() != &complexes[&a] || t.dst() != &complexes[&b] {
                return Err(CyclicError::BadTransition {
                    from: a,
                    to: b,
                    what: "endpoints differ from the level complexes".into(),
                });
            }
        }
        for &a in &levels {
            for &b in &levels {
                if b > a && b % a == 0 && !transitions.contains_key(&(a, b)) {
                    return Err(CyclicError::BadTransition {
                        from: a,
                        to: b,
                        what: "missing transition".into(),
                    });
                }
            }
        }
        for &a in &levels {
            for &b in &levels {
                for &c in &levels {
                    if a < b && b < c && b % a == 0 && c % b == 0 {
                        let direct = &transitions[&(a, c)];
                        let through = transitions[&(b, c)].compose(&transitions[&(a, b)]);
                        if *direct != through {
                            return Err(CyclicError::NotFunctorial { from: a, mid: b, to: c });
                        }
                    }
                }
            }
        }
        Ok(DivisibilityDiagram { complexes, transitions })
    }

    pub fn constant(levels: &[u64], c: &Complex) -> Result<Self, CyclicError> {
        let complexes = levels.iter().map(|&n| (n, c.clone())).collect();
        let mut transitions = BTreeMap::new();
        for &a in levels {
            for &b in levels {
                if b > a && b % a == 0 {
                    transitions.insert((a, b), ChainMap::identity(c));
                }
            }
        }
        Self::new(complexes, transitions)
    }

    pub fn levels(&self) -> Vec<u64> {
        self.complexes.keys().copied().collect()
    }

    pub fn complex(&self, n: u64) -> &Complex {
        &self.complexes[&n]
    }

    pub fn transition(&self, a: u64, b: u64) -> ChainMap {
        if a == b {
            ChainMap::identity(&self.complexes[&a])
        } else {
            self.transitions[&(a, b)].clone()
        }
    }

    /// Degreewise vector-space colimit over the finite poset: the value at
    /// the top level, since lcm-closure provides one. The flag reports
    /// whether the tower has visibly stabilized, meaning every transition
    /// from a co-atom into the top is a quasi-isomorphism.
    pub fn colimit(&self) -> (Complex, bool) {
        let levels = self.levels();
        let top = *levels.last().expect("nonempty diagram");
        let mut stabilized = true;
        for &a in &levels {
            if a == top || top % a != 0 {
                continue;
            }
            let coatom = !levels.iter().any(|&b| b > a && b < top && b % a == 0 && top % b == 0);
            if coatom && !self.transitions[&(a, top)].is_quasi_iso() {
                stabilized = false;
            }
        }
        (self.complexes[&top].clone(), stabilized)
    }
}
