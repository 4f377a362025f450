//! Mock Shimura sets: double cosets `Γ~ \ GL2(Q_p) / U` times `h` away-from-p classes.
//!
//! `Γ~` is generated by a configured group `Γ` of unit-determinant integral
//! matrices, a free group `Γ_p` on `(p+1)/2` determinant-`p` matrices acting
//! simply transitively on the vertices of the Bruhat-Tits tree, and `p·I`.
//! Walking the tree strips the `Γ_p`-part of any element, leaving a
//! `GL2(Z_p)` representative whose class is read off a precomputed table of
//! `Γ_red \ GL2(Z/p^n) / U`.

use crate::level::{Coupling, Level, TripleLevel};
use crate::matrix::{adj, det, inv_mod, mat_mul, mat_mul_mod, reduce, Mat, Monoid, TruncatedMatrix};
use crate::PlocalError;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

/// Largest `q^4` for which class tables are materialized.
pub const TABLE_LIMIT: usize = 1 << 23;

/// Configured global data of the mock model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MockConfig {
    pub p: i64,
    pub m: u32,
    pub budget: u32,
    pub gamma: Vec<Mat>,
    pub h: u32,
}

impl MockConfig {
    pub fn trivial(p: i64, h: u32) -> Self {
        Self { p, m: 12, budget: 4, gamma: Vec::new(), h }
    }

    /// The group generated by `(0 -1; 1 0)` and `(1 1; -1 0)`.
    pub fn order24(p: i64, h: u32) -> Self {
        Self { p, m: 12, budget: 4, gamma: order24_generators(), h }
    }
}

pub fn order24_generators() -> Vec<Mat> {
    vec![[0, -1, 1, 0], [1, 1, -1, 0]]
}

/// Canonical representatives of `Γ_red \ GL2(Z/q) / U`.
#[derive(Debug)]
pub struct ClassTable {
    pub level: Level,
    pub q: i64,
    ids: Vec<u32>,
    pub reps: Vec<Mat>,
    /// Number of matrices in each double coset.
    pub orbit_sizes: Vec<u32>,
    /// `|U mod q|`.
    pub unit_order: u32,
}

impl ClassTable {
    fn encode(&self, k: &Mat) -> usize {
        let q = self.q as usize;
        ((k[0] as usize * q + k[1] as usize) * q + k[2] as usize) * q + k[3] as usize
    }

    /// Class id of a unit-determinant matrix reduced modulo `q`.
    pub fn id(&self, k: &Mat) -> u32 {
        self.ids[self.encode(k)]
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// Number of cosets `kU` in the class `id`.
    pub fn points(&self, id: usize) -> u32 {
        self.orbit_sizes[id] / self.unit_order
    }

    fn build(p: i64, level: Level, gamma: &[Mat]) -> Result<Self, PlocalError> {
        let q = p.pow(level.n());
        let size = (q as usize).pow(4);
        if size > TABLE_LIMIT {
            return Err(PlocalError::SizeBudget { size, limit: TABLE_LIMIT });
        }
        let left: Vec<Mat> = gamma.iter().map(|g| reduce(g, q)).collect();
        let right: Vec<Mat> = level.generators(p).iter().map(|g| reduce(g, q)).collect();
        let mut table = ClassTable { level, q, ids: vec![u32::MAX; size], reps: Vec::new(), orbit_sizes: Vec::new(), unit_order: 0 };
        let decode = |mut e: usize| {
            let qq = q as usize;
            let d = e % qq;
            e /= qq;
            let c = e % qq;
            e /= qq;
            let b = e % qq;
            [(e / qq) as i64, b as i64, c as i64, d as i64]
        };
        let mut stack = Vec::new();
        for start in 0..size {
            let k = decode(start);
            if table.ids[start] != u32::MAX || (q > 1 && det(&k).rem_euclid(p as i128) == 0) {
                continue;
            }
            let id = table.reps.len() as u32;
            table.reps.push(if q == 1 { crate::matrix::IDENTITY } else { k });
            table.ids[start] = id;
            let mut count = 1u32;
            stack.push(k);
            while let Some(x) = stack.pop() {
                let next = left
                    .iter()
                    .map(|g| mat_mul_mod(g, &x, q))
                    .chain(right.iter().map(|u| mat_mul_mod(&x, u, q)));
                for y in next.collect::<Vec<_>>() {
                    let e = table.encode(&y);
                    if table.ids[e] == u32::MAX {
                        table.ids[e] = id;
                        count += 1;
                        stack.push(y);
                    }
                }
            }
            table.orbit_sizes.push(count);
        }
        let mut unit = std::collections::HashSet::from([reduce(&crate::matrix::IDENTITY, q)]);
        let mut stack = vec![reduce(&crate::matrix::IDENTITY, q)];
        while let Some(x) = stack.pop() {
            for u in &right {
                let y = mat_mul_mod(&x, u, q);
                if unit.insert(y) {
                    stack.push(y);
                }
            }
        }
        table.unit_order = unit.len() as u32;
        Ok(table)
    }
}

/// An enumerated single-level space; index `h·classes + id`.
#[derive(Debug, Clone)]
pub struct CosetSpace {
    pub level: Level,
    pub h: u32,
    pub table: Arc<ClassTable>,
}

impl CosetSpace {
    pub fn classes(&self) -> usize {
        self.table.len()
    }

    pub fn len(&self) -> usize {
        self.classes() * self.h as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, id: u32, hh: u32) -> usize {
        hh as usize * self.classes() + id as usize
    }

    /// Representative in `GL2(Z/p^n)` and away index.
    pub fn rep(&self, idx: usize) -> (Mat, u32) {
        (self.table.reps[idx % self.classes()], (idx / self.classes()) as u32)
    }

    /// Index of a unit-determinant matrix with away index `hh`.
    pub fn lookup(&self, k: &Mat, hh: u32) -> usize {
        self.index(self.table.id(&reduce(k, self.table.q)), hh)
    }
}

/// Key of a triple class: one single-space index per component.
pub type TripleKey = [u32; 3];

/// A triple-product space, never enumerated; classes are canonicalized on demand.
#[derive(Debug, Clone)]
pub struct TripleSpace {
    pub level: TripleLevel,
    pub component: CosetSpace,
    pub coupling: Coupling,
    units: Vec<i64>,
}

impl TripleSpace {
    pub fn rep(&self, key: &TripleKey) -> [(Mat, u32); 3] {
        key.map(|i| self.component.rep(i as usize))
    }

    /// Canonical key of unit-determinant components with away indices.
    pub fn canonical(&self, k: &[Mat; 3], hh: [u32; 3]) -> TripleKey {
        let q = self.component.table.q;
        let key = |m: &[Mat; 3]| -> TripleKey {
            [0, 1, 2].map(|i| self.component.lookup(&m[i], hh[i]) as u32)
        };
        match self.coupling {
            Coupling::None => key(k),
            Coupling::Scalar => self
                .units
                .iter()
                .map(|&a| key(&k.map(|m| reduce(&m.map(|e| e * a), q))))
                .min()
                .expect("unit group is nonempty"),
            Coupling::Corner => self
                .units
                .iter()
                .map(|&a| key(&k.map(|m| reduce(&[m[0], m[1] * a, m[2], m[3] * a], q))))
                .min()
                .expect("unit group is nonempty"),
        }
    }
}

/// Result of walking an element down the tree: `g = w · p^j · k` with `w ∈ Γ_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Walk {
    pub k: TruncatedMatrix,
    pub j: i32,
}

/// The configured mock model with cached class tables.
#[derive(Debug)]
pub struct Mock {
    pub mono: Monoid,
    pub gamma: Vec<Mat>,
    pub h: u32,
    pub tree: Vec<Mat>,
    steps: Vec<(usize, bool)>,
    gamma_trivial: bool,
    tables: Mutex<HashMap<Level, Arc<ClassTable>>>,
}

/// Index of the line spanned by the image of `g mod p` (rank one): `(1:y) -> y`, `(0:1) -> p`.
fn line_index(g: &Mat, p: i64) -> Option<usize> {
    let r = reduce(g, p);
    let col = if r[0] != 0 || r[2] != 0 { [r[0], r[2]] } else { [r[1], r[3]] };
    if col == [0, 0] {
        return None;
    }
    Some(if col[0] == 0 { p as usize } else { (col[1] * inv_mod(col[0], p)? % p) as usize })
}

/// `(p+1)/2` determinant-`p` matrices whose images and adjugate images hit every line once.
pub fn tree_generators(p: i64) -> Vec<Mat> {
    let mut gens = vec![[p, 0, 0, 1]];
    for s in 1..=(p - 1) / 2 {
        let t = inv_mod(s, p).expect("nonzero residue");
        gens.push([1, t, s, p + t * s]);
    }
    gens
}

impl Mock {
    pub fn new(cfg: &MockConfig) -> Result<Self, PlocalError> {
        let mono = Monoid::new(cfg.p, cfg.m, cfg.budget)?;
        if cfg.h == 0 {
            return Err(PlocalError::Config("class multiplicity h must be positive".into()));
        }
        for g in &cfg.gamma {
            if det(g).rem_euclid(cfg.p as i128) == 0 {
                return Err(PlocalError::Config(format!("generator {g:?} does not have unit determinant")));
            }
        }
        let p = cfg.p;
        let tree = tree_generators(p);
        let mut steps = vec![(usize::MAX, false); p as usize + 1];
        for (i, c) in tree.iter().enumerate() {
            for (m, inverse) in [(*c, false), (adj(c), true)] {
                let l = line_index(&m, p).expect("determinant p matrix has rank one mod p");
                if steps[l].0 != usize::MAX {
                    return Err(PlocalError::Config(format!("tree generators collide on line {l}")));
                }
                steps[l] = (i, inverse);
            }
        }
        let gamma_trivial = cfg.gamma.iter().all(|g| *g == crate::matrix::IDENTITY);
        Ok(Self {
            mono,
            gamma: cfg.gamma.clone(),
            h: cfg.h,
            tree,
            steps,
            gamma_trivial,
            tables: Mutex::new(HashMap::new()),
        })
    }

    pub fn p(&self) -> i64 {
        self.mono.p
    }

    pub fn gamma_trivial(&self) -> bool {
        self.gamma_trivial
    }

    /// Away index after a shift by `p^j`: cyclic when `Γ` is trivial, fixed otherwise.
    pub fn shift(&self, hh: u32, j: i32) -> u32 {
        if self.gamma_trivial {
            (hh as i64 + j as i64).rem_euclid(self.h as i64) as u32
        } else {
            hh
        }
    }

    pub fn table(&self, level: Level) -> Result<Arc<ClassTable>, PlocalError> {
        let mut tables = self.tables.lock().expect("table cache lock");
        if let Some(t) = tables.get(&level) {
            return Ok(t.clone());
        }
        let t = Arc::new(ClassTable::build(self.p(), level, &self.gamma)?);
        tables.insert(level, t.clone());
        Ok(t)
    }

    pub fn space(&self, level: Level) -> Result<CosetSpace, PlocalError> {
        Ok(CosetSpace { level, h: self.h, table: self.table(level)? })
    }

    pub fn triple_space(&self, level: TripleLevel) -> Result<TripleSpace, PlocalError> {
        let (comp, coupling) = level.structure();
        let q = self.mono.modulus(level.n());
        let units = (1..=q).filter(|a| a % self.p() != 0).map(|a| a % q).collect();
        Ok(TripleSpace { level, component: self.space(comp)?, coupling, units })
    }

    /// Strips `p`-content and `Γ_p`-letters until the determinant is a unit.
    pub fn walk(&self, g: &TruncatedMatrix) -> Result<Walk, PlocalError> {
        let p = self.p();
        let mut g = *g;
        let mut j = 0i32;
        self.mono.checked(&g)?;
        loop {
            while self.mono.divisible_by_p(&g) {
                g = self.mono.div_p(&g)?;
                j += 1;
            }
            let v = self.mono.det_valuation(&g).ok_or(PlocalError::Precision { need: 1, have: 0 })?;
            if v == 0 {
                return Ok(Walk { k: g, j });
            }
            let l = line_index(&g.m, p).ok_or(PlocalError::Precision { need: 1, have: g.prec })?;
            let (i, inverse) = self.steps[l];
            let c = self.tree[i];
            let left = if inverse { c } else { adj(&c) };
            g = self.mono.div_p(&self.mono.mul(&self.mono.exact(left), &g))?;
            if inverse {
                j += 1;
            }
        }
    }

    /// Index in `space` of the class of `g` carrying away index `hh`.
    pub fn class_of(&self, space: &CosetSpace, g: &TruncatedMatrix, hh: u32) -> Result<usize, PlocalError> {
        let w = self.walk(g)?;
        let k = self.mono.residue(&w.k, space.level.n())?;
        Ok(space.lookup(&k, self.shift(hh, w.j)))
    }

    /// Key of the class of a triple of elements with away indices.
    pub fn triple_class(
        &self,
        space: &TripleSpace,
        g: &[TruncatedMatrix; 3],
        hh: [u32; 3],
    ) -> Result<TripleKey, PlocalError> {
        let n = space.level.n();
        let mut ks = [[0; 4]; 3];
        let mut hs = [0; 3];
        for i in 0..3 {
            let w = self.walk(&g[i])?;
            ks[i] = self.mono.residue(&w.k, n)?;
            hs[i] = self.shift(hh[i], w.j);
        }
        Ok(space.canonical(&ks, hs))
    }

    /// Class of `rep · r` for a representative lifted to an exact integral matrix.
    pub fn translate(
        &self,
        space: &CosetSpace,
        rep: &Mat,
        hh: u32,
        r: &Mat,
        shift: i32,
    ) -> Result<usize, PlocalError> {
        let g = self.mono.exact(mat_mul(rep, r));
        let w = self.walk(&g)?;
        let k = self.mono.residue(&w.k, space.level.n())?;
        Ok(space.lookup(&k, self.shift(hh, w.j + shift)))
    }

    /// Elements of the image of `Γ` in `GL2(Z/p^k)`.
    pub fn gamma_group(&self, k: u32) -> Vec<Mat> {
        let q = self.mono.modulus(k);
        let gens: Vec<Mat> = self.gamma.iter().map(|g| reduce(g, q)).collect();
        let mut seen = std::collections::BTreeSet::from([reduce(&crate::matrix::IDENTITY, q)]);
        let mut stack = vec![reduce(&crate::matrix::IDENTITY, q)];
        while let Some(x) = stack.pop() {
            for g in &gens {
                let y = mat_mul_mod(g, &x, q);
                if seen.insert(y) {
                    stack.push(y);
                }
            }
        }
        seen.into_iter().collect()
    }
}
