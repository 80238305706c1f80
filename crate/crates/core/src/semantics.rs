//! Finite Kripke models and bounded validity over frame classes.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::calculus::SystemId;
use crate::syntax::Formula;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KripkeModel {
    pub worlds: usize,
    /// `rel[u][v]` iff `u R v`.
    pub rel: Vec<Vec<bool>>,
    pub val: BTreeMap<(String, usize), bool>,
}

impl KripkeModel {
    pub fn new(worlds: usize, pairs: &[(usize, usize)]) -> KripkeModel {
        let mut rel = vec![vec![false; worlds]; worlds];
        for &(u, v) in pairs {
            rel[u][v] = true;
        }
        KripkeModel {
            worlds,
            rel,
            val: BTreeMap::new(),
        }
    }

    pub fn set(&mut self, atom: &str, w: usize, b: bool) {
        self.val.insert((atom.to_string(), w), b);
    }

    pub fn holds(&self, atom: &str, w: usize) -> bool {
        self.val.get(&(atom.to_string(), w)).copied().unwrap_or(false)
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = vec![];
        for u in 0..self.worlds {
            for v in 0..self.worlds {
                if self.rel[u][v] {
                    out.push((u, v));
                }
            }
        }
        out
    }
}

pub fn eval(f: &Formula, m: &KripkeModel, w: usize) -> bool {
    match f {
        Formula::Bot => false,
        Formula::Atom(a) => m.holds(a, w),
        Formula::Neg(a) => !eval(a, m, w),
        Formula::And(a, b) => eval(a, m, w) && eval(b, m, w),
        Formula::Box(a) => (0..m.worlds).all(|v| !m.rel[w][v] || eval(a, m, v)),
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct FrameClass {
    pub serial: bool,
    pub reflexive: bool,
    pub transitive: bool,
    pub symmetric: bool,
    pub euclidean: bool,
}

impl FrameClass {
    pub fn of(sys: SystemId) -> FrameClass {
        let mut fc = FrameClass::default();
        for c in sys.axioms() {
            match c {
                'D' => fc.serial = true,
                'T' => fc.reflexive = true,
                '4' => fc.transitive = true,
                'B' => fc.symmetric = true,
                '5' => fc.euclidean = true,
                _ => {}
            }
        }
        fc
    }

    pub fn admits(&self, n: usize, rel: &[Vec<bool>]) -> bool {
        let r = |u: usize, v: usize| rel[u][v];
        let ws = 0..n;
        (!self.serial || ws.clone().all(|u| ws.clone().any(|v| r(u, v))))
            && (!self.reflexive || ws.clone().all(|u| r(u, u)))
            && (!self.symmetric || ws.clone().all(|u| ws.clone().all(|v| !r(u, v) || r(v, u))))
            && (!self.transitive
                || ws.clone().all(|u| {
                    ws.clone().all(|v| !r(u, v) || ws.clone().all(|x| !r(v, x) || r(u, x)))
                }))
            && (!self.euclidean
                || ws.clone().all(|x| {
                    ws.clone().all(|y| !r(x, y) || ws.clone().all(|z| !r(x, z) || r(y, z)))
                }))
    }

    pub fn names(&self) -> Vec<&'static str> {
        let mut v = vec![];
        for (b, n) in [
            (self.serial, "serial"),
            (self.reflexive, "reflexive"),
            (self.transitive, "transitive"),
            (self.symmetric, "symmetric"),
            (self.euclidean, "euclidean"),
        ] {
            if b {
                v.push(n);
            }
        }
        v
    }
}

pub fn frame_class(sys: SystemId) -> FrameClass {
    FrameClass::of(sys)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Countermodel {
    pub model: KripkeModel,
    pub world: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Validity {
    Valid { bound: usize },
    Countermodel(Countermodel),
}

impl Validity {
    pub fn is_valid(&self) -> bool {
        matches!(self, Validity::Valid { .. })
    }
}

fn rel_of(n: usize, mask: u64) -> Vec<Vec<bool>> {
    let mut rel = vec![vec![false; n]; n];
    for u in 0..n {
        for v in 0..n {
            rel[u][v] = mask >> (u * n + v) & 1 == 1;
        }
    }
    rel
}

fn falsify(f: &Formula, n: usize, rel: Vec<Vec<bool>>, atoms: &[String]) -> Option<Countermodel> {
    let bits = atoms.len() * n;
    let mut m = KripkeModel {
        worlds: n,
        rel,
        val: BTreeMap::new(),
    };
    for vmask in 0u64..(1u64 << bits) {
        m.val.clear();
        for (i, a) in atoms.iter().enumerate() {
            for w in 0..n {
                m.val.insert((a.clone(), w), vmask >> (i * n + w) & 1 == 1);
            }
        }
        if let Some(w) = (0..n).find(|&w| !eval(f, &m, w)) {
            return Some(Countermodel { model: m, world: w });
        }
    }
    None
}

/// Check `f` on every model with at most `max_worlds` worlds in class `fc`,
/// varying the atoms in `atoms` (other atoms are false everywhere). Frames
/// are enumerated by world count, then relation bitmask, then valuation, so
/// the reported countermodel is reproducible.
pub fn bounded_valid(f: &Formula, fc: FrameClass, max_worlds: usize, atoms: &[String]) -> Validity {
    assert!((1..=5).contains(&max_worlds), "world bound must be in 1..=5");
    for n in 1..=max_worlds {
        let found = (0u64..(1u64 << (n * n)))
            .into_par_iter()
            .filter_map(|mask| {
                let rel = rel_of(n, mask);
                if fc.admits(n, &rel) {
                    falsify(f, n, rel, atoms)
                } else {
                    None
                }
            })
            .find_first(|_| true);
        if let Some(c) = found {
            return Validity::Countermodel(c);
        }
    }
    Validity::Valid { bound: max_worlds }
}

/// [`bounded_valid`] over all atoms of `f` and the class of `sys`.
pub fn valid_in(f: &Formula, sys: SystemId, max_worlds: usize) -> Validity {
    bounded_valid(f, frame_class(sys), max_worlds, &f.atoms())
}

impl fmt::Display for Countermodel {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        let m = &self.model;
        let ws: Vec<String> = (0..m.worlds).map(|w| format!("w{w}")).collect();
        writeln!(f, "worlds: {}", ws.join(", "))?;
        let ps: Vec<String> = m.pairs().iter().map(|(u, v)| format!("(w{u},w{v})")).collect();
        writeln!(f, "relation: {{{}}}", ps.join(", "))?;
        let mut atoms: Vec<&String> = m.val.keys().map(|k| &k.0).collect();
        atoms.dedup();
        writeln!(f, "valuation:")?;
        for a in atoms {
            let row: Vec<String> = (0..m.worlds)
                .map(|w| format!("w{w}={}", if m.holds(a, w) { 1 } else { 0 }))
                .collect();
            writeln!(f, "  {a}: {}", row.join(" "))?;
        }
        write!(f, "falsified at: w{}", self.world)
    }
}

impl fmt::Display for Validity {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        match self {
            Validity::Valid { bound } => write!(f, "VALID (bound={bound})"),
            Validity::Countermodel(c) => write!(f, "COUNTERMODEL\n{c}"),
        }
    }
}
