//! Deterministic Schreier–Sims.
//!
//! The chain is a base `b_0, b_1, …` with, at each level, the strong
//! generators fixing `b_0..b_{i-1}` and an explicit transversal for the orbit
//! of `b_i` under them. New base points are always the lowest point moved by
//! the element that forced the extension.

use num_bigint::BigUint;

use super::Permutation;

#[derive(Debug, Clone)]
struct Level {
    base_point: usize,
    gens: Vec<Permutation>,
    /// `transversal[β]` maps the base point to `β`.
    transversal: Vec<Option<Permutation>>,
    orbit: Vec<usize>,
}

impl Level {
    fn new(degree: usize, base_point: usize, gens: Vec<Permutation>) -> Self {
        let mut level = Level {
            base_point,
            gens,
            transversal: Vec::new(),
            orbit: Vec::new(),
        };
        level.rebuild(degree);
        level
    }

    fn rebuild(&mut self, degree: usize) {
        let mut transversal: Vec<Option<Permutation>> = vec![None; degree];
        transversal[self.base_point] = Some(Permutation::identity(degree));
        let mut orbit = vec![self.base_point];
        let mut i = 0;
        while i < orbit.len() {
            let beta = orbit[i];
            let u = transversal[beta].clone().unwrap();
            for s in &self.gens {
                let gamma = s.apply(beta);
                if transversal[gamma].is_none() {
                    transversal[gamma] = Some(s.after(&u));
                    orbit.push(gamma);
                }
            }
            i += 1;
        }
        self.transversal = transversal;
        self.orbit = orbit;
    }
}

/// Base and strong generating set of a permutation group.
#[derive(Debug, Clone)]
pub struct StabChain {
    degree: usize,
    levels: Vec<Level>,
}

impl StabChain {
    pub fn build(degree: usize, generators: &[Permutation], base_prefix: &[usize]) -> StabChain {
        let gens: Vec<Permutation> = generators
            .iter()
            .filter(|g| !g.is_identity())
            .cloned()
            .collect();
        let mut base: Vec<usize> = Vec::new();
        for &b in base_prefix {
            if b < degree && !base.contains(&b) {
                base.push(b);
            }
        }
        for g in &gens {
            if base.iter().all(|&b| g.apply(b) == b) {
                base.push(g.first_moved().unwrap());
            }
        }
        let mut levels: Vec<Level> = Vec::with_capacity(base.len());
        for (i, &b) in base.iter().enumerate() {
            let fixing = gens
                .iter()
                .filter(|g| base[..i].iter().all(|&c| g.apply(c) == c))
                .cloned()
                .collect();
            levels.push(Level::new(degree, b, fixing));
        }
        let mut chain = StabChain { degree, levels };
        chain.complete();
        chain
    }

    fn complete(&mut self) {
        let mut i = self.levels.len() as isize - 1;
        while i >= 0 {
            let level = i as usize;
            match self.find_missing_schreier_generator(level) {
                Some((h, j)) => {
                    if j == self.levels.len() {
                        let b = h.first_moved().expect("non-identity residue");
                        self.levels.push(Level::new(self.degree, b, Vec::new()));
                    }
                    for l in level + 1..=j {
                        self.levels[l].gens.push(h.clone());
                        self.levels[l].rebuild(self.degree);
                    }
                    i = j as isize;
                }
                None => i -= 1,
            }
        }
    }

    /// First Schreier generator at `level` that does not sift through the
    /// levels below it, together with the level where sifting stopped.
    fn find_missing_schreier_generator(&self, level: usize) -> Option<(Permutation, usize)> {
        let lv = &self.levels[level];
        for &beta in &lv.orbit {
            let u_beta = lv.transversal[beta].as_ref().unwrap();
            for s in &lv.gens {
                let su = s.after(u_beta);
                let gamma = su.apply(lv.base_point);
                let u_gamma = lv.transversal[gamma].as_ref().unwrap();
                let schreier = u_gamma.inverse().after(&su);
                let (h, j) = self.strip(schreier, level + 1);
                if !h.is_identity() {
                    return Some((h, j));
                }
            }
        }
        None
    }

    /// Sifts `g` through the levels starting at `from`. Returns the residue
    /// and the index of the level where sifting stopped (`levels.len()` when
    /// it passed every level).
    fn strip(&self, mut g: Permutation, from: usize) -> (Permutation, usize) {
        for (l, level) in self.levels.iter().enumerate().skip(from) {
            let beta = g.apply(level.base_point);
            match &level.transversal[beta] {
                Some(u) => g = u.inverse().after(&g),
                None => return (g, l),
            }
        }
        (g, self.levels.len())
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        if p.degree() != self.degree {
            return false;
        }
        let (h, j) = self.strip(p.clone(), 0);
        j == self.levels.len() && h.is_identity()
    }

    pub fn order(&self) -> BigUint {
        self.levels.iter().fold(BigUint::from(1u32), |acc, l| {
            acc * BigUint::from(l.orbit.len())
        })
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base_point).collect()
    }

    /// Fundamental orbit sizes, one per base point.
    pub fn orbit_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    /// Strong generators of the pointwise stabiliser of the first `level` base points.
    pub fn stabilizer_generators(&self, level: usize) -> Vec<Permutation> {
        match self.levels.get(level) {
            Some(l) => l.gens.clone(),
            None => Vec::new(),
        }
    }

    pub fn strong_generators(&self) -> Vec<Permutation> {
        let mut out: Vec<Permutation> = Vec::new();
        for l in &self.levels {
            for g in &l.gens {
                if !out.contains(g) {
                    out.push(g.clone());
                }
            }
        }
        out
    }
}
