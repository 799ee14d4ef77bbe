//! Seeded random HDA for property tests and the acceptance corpus.
//!
//! An instance is a disjoint union of standard cubes, with random cells
//! identified (closed under faces, so the quotient stays precubical) and
//! each later piece hooked onto an earlier vertex by a fresh edge.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

use crate::cubes::{CubeId, CubeSpec, Hda, PrecubicalSet, Side};
use crate::paths::CubePath;

pub type Rng8 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng8 {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy)]
pub struct RandomConfig {
    pub max_cubes: usize,
    pub max_dim: usize,
    /// Upper bound on attempted identifications.
    pub merges: usize,
    pub acyclic: bool,
    /// Keep adding pieces until nothing more fits, instead of stopping
    /// after a random number of them.
    pub fill: bool,
}

impl Default for RandomConfig {
    fn default() -> Self {
        RandomConfig {
            max_cubes: 30,
            max_dim: 3,
            merges: 3,
            acyclic: false,
            fill: false,
        }
    }
}

/// Cells of the standard n-cube: words over {0, 1, *}; `δ_k^ν` replaces the
/// k-th `*` by ν.
fn cube_cells(n: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|w| {
                [b'0', b'1', b'*'].into_iter().map(move |c| {
                    let mut w = w.clone();
                    w.push(c);
                    w
                })
            })
            .collect();
    }
    out
}

fn cell_face(w: &[u8], k: usize, nu: u8) -> Vec<u8> {
    let pos = w.iter().enumerate().filter(|(_, &c)| c == b'*').nth(k - 1).expect("k within dimension").0;
    let mut f = w.to_vec();
    f[pos] = nu;
    f
}

struct Draft {
    dims: Vec<usize>,
    lower: Vec<Vec<usize>>,
    upper: Vec<Vec<usize>>,
    vertices_by_piece: Vec<Vec<usize>>,
    origins: Vec<usize>,
}

impl Draft {
    fn add_cube(&mut self, n: usize) {
        let cells = cube_cells(n);
        let base = self.dims.len();
        let index = |w: &[u8]| base + cells.iter().position(|c| c == w).expect("cell");
        let mut verts = Vec::new();
        for w in &cells {
            let d = w.iter().filter(|&&c| c == b'*').count();
            self.dims.push(d);
            self.lower.push((1..=d).map(|k| index(&cell_face(w, k, b'0'))).collect());
            self.upper.push((1..=d).map(|k| index(&cell_face(w, k, b'1'))).collect());
            if d == 0 {
                verts.push(self.dims.len() - 1);
            }
        }
        self.origins.push(index(&vec![b'0'; n]));
        self.vertices_by_piece.push(verts);
    }

    fn add_edge(&mut self, from: usize, to: usize) {
        self.dims.push(1);
        self.lower.push(vec![from]);
        self.upper.push(vec![to]);
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Identifies `a` and `b` together with all their corresponding faces.
fn merge(d: &Draft, parent: &mut [usize], a: usize, b: usize) {
    let mut stack = vec![(a, b)];
    while let Some((a, b)) = stack.pop() {
        let (ra, rb) = (find(parent, a), find(parent, b));
        if ra == rb {
            continue;
        }
        parent[ra.max(rb)] = ra.min(rb);
        for k in 0..d.dims[a] {
            stack.push((d.lower[a][k], d.lower[b][k]));
            stack.push((d.upper[a][k], d.upper[b][k]));
        }
    }
}

fn one_attempt(rng: &mut impl Rng, cfg: &RandomConfig) -> Hda {
    let cost = |n: usize| 3usize.pow(n as u32);
    let mut d = Draft {
        dims: vec![],
        lower: vec![],
        upper: vec![],
        vertices_by_piece: vec![],
        origins: vec![],
    };
    let pieces = if cfg.fill { usize::MAX } else { rng.gen_range(1..=4) };
    for p in 0..pieces {
        let extra = usize::from(p > 0);
        let fits: Vec<usize> = (0..=cfg.max_dim)
            .filter(|&n| d.dims.len() + cost(n) + extra <= cfg.max_cubes)
            .collect();
        let Some(&n) = fits.choose(rng) else { break };
        d.add_cube(n);
        if p > 0 {
            let earlier: Vec<usize> = d.vertices_by_piece[..p].iter().flatten().copied().collect();
            let from = *earlier.choose(rng).expect("earlier pieces have vertices");
            d.add_edge(from, d.origins[p]);
        }
    }

    let mut parent: Vec<usize> = (0..d.dims.len()).collect();
    for _ in 0..rng.gen_range(0..=cfg.merges) {
        let a = rng.gen_range(0..d.dims.len());
        let same: Vec<usize> = (0..d.dims.len()).filter(|&b| b != a && d.dims[b] == d.dims[a]).collect();
        if let Some(&b) = same.choose(rng) {
            merge(&d, &mut parent, a, b);
        }
    }

    let mut reps: Vec<usize> = (0..d.dims.len()).filter(|&x| find(&mut parent, x) == x).collect();
    reps.shuffle(rng);
    let mut name = vec![String::new(); d.dims.len()];
    for (i, &r) in reps.iter().enumerate() {
        name[r] = format!("c{i}");
    }
    let name_of = |x: usize, parent: &mut [usize], name: &[String]| name[find(parent, x)].clone();
    let specs: Vec<CubeSpec> = reps
        .iter()
        .map(|&r| CubeSpec {
            id: name[r].clone(),
            dim: d.dims[r],
            lower: d.lower[r].iter().map(|&f| name_of(f, &mut parent, &name)).collect(),
            upper: d.upper[r].iter().map(|&f| name_of(f, &mut parent, &name)).collect(),
        })
        .collect();
    let initial = name_of(d.origins[0], &mut parent, &name);
    let space = PrecubicalSet::from_specs(specs).expect("quotients of standard cubes are precubical");
    Hda::new(space, &initial).expect("origin is a vertex")
}

/// A random HDA with at most `cfg.max_cubes` cubes. With `cfg.acyclic`,
/// candidates are drawn until one has no reachable cycle.
pub fn random_hda(rng: &mut impl Rng, cfg: &RandomConfig) -> Hda {
    loop {
        let h = one_attempt(rng, cfg);
        if !cfg.acyclic || h.is_acyclic() {
            return h;
        }
    }
}

/// A pointed path of up to `max_len` cubes, chosen by a random walk.
pub fn random_pointed_path(rng: &mut impl Rng, hda: &Hda, max_len: usize) -> CubePath {
    let mut seq = vec![hda.initial()];
    let target = rng.gen_range(1..=max_len.max(1));
    while seq.len() < target {
        let succ: Vec<CubeId> = hda.successors(*seq.last().expect("non-empty")).collect();
        match succ.choose(rng) {
            Some(&y) => seq.push(y),
            None => break,
        }
    }
    CubePath::new(hda.space(), seq).expect("walks follow steps")
}

/// Renames every cube, preserving structure.
pub fn relabel(rng: &mut impl Rng, hda: &Hda, prefix: &str) -> Hda {
    let s = hda.space();
    let mut order: Vec<CubeId> = s.cubes().collect();
    order.shuffle(rng);
    let mut name = vec![String::new(); s.len()];
    for (i, c) in order.iter().enumerate() {
        name[c.index()] = format!("{prefix}{i}");
    }
    let specs = s
        .cubes()
        .map(|c| CubeSpec {
            id: name[c.index()].clone(),
            dim: s.dim(c),
            lower: s.faces(c, Side::Lower).iter().map(|f| name[f.index()].clone()).collect(),
            upper: s.faces(c, Side::Upper).iter().map(|f| name[f.index()].clone()).collect(),
        })
        .collect();
    Hda::new(PrecubicalSet::from_specs(specs).expect("renaming"), &name[hda.initial().index()]).expect("vertex")
}

/// Two copies of `hda` glued at the initial vertex; bisimilar to `hda`.
pub fn doubled(hda: &Hda) -> Hda {
    let s = hda.space();
    let init = hda.initial();
    let rename = |c: CubeId, copy: usize| {
        if c == init {
            s.name(c).to_string()
        } else {
            format!("{}'{copy}", s.name(c))
        }
    };
    let mut specs = Vec::new();
    for copy in 0..2 {
        for c in s.cubes() {
            if c == init && copy == 1 {
                continue;
            }
            specs.push(CubeSpec {
                id: rename(c, copy),
                dim: s.dim(c),
                lower: s.faces(c, Side::Lower).iter().map(|&f| rename(f, copy)).collect(),
                upper: s.faces(c, Side::Upper).iter().map(|&f| rename(f, copy)).collect(),
            });
        }
    }
    Hda::new(PrecubicalSet::from_specs(specs).expect("glued copies"), s.name(init)).expect("vertex")
}

/// Deletes one randomly chosen cube that is nobody's face, if there is one
/// besides the initial vertex.
pub fn drop_top_cube(rng: &mut impl Rng, hda: &Hda) -> Option<Hda> {
    let s = hda.space();
    let tops: Vec<CubeId> = s
        .cubes()
        .filter(|&c| c != hda.initial() && Side::BOTH.iter().all(|&side| s.cofaces(c, side).is_empty()))
        .collect();
    let &victim = tops.choose(rng)?;
    let keep: Vec<bool> = s.cubes().map(|c| c != victim).collect();
    let (sub, _) = s.restrict(&keep).ok()?;
    Hda::new(sub, s.name(hda.initial())).ok()
}

/// How a pair in the bisimilarity corpus was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairKind {
    Independent,
    Isomorphic,
    Doubled,
    Mutated,
}

/// A pair of acyclic HDA for comparing deciders, mixing related and
/// unrelated instances.
pub fn random_pair(rng: &mut impl Rng, cfg: &RandomConfig) -> (Hda, Hda, PairKind) {
    let x = random_hda(rng, cfg);
    match rng.gen_range(0..4) {
        0 => (x, random_hda(rng, cfg), PairKind::Independent),
        1 => {
            let y = relabel(rng, &x, "r");
            (x, y, PairKind::Isomorphic)
        }
        2 => {
            let y = doubled(&x);
            (x, y, PairKind::Doubled)
        }
        _ => match drop_top_cube(rng, &x) {
            Some(y) => (x, y, PairKind::Mutated),
            None => (x.clone(), x, PairKind::Isomorphic),
        },
    }
}
