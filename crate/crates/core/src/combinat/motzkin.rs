use crate::combinat::{EnumerationCaps, WeightSequences};
use crate::error::{Error, Result};
use crate::qcore::{QParams, Scalar};

/// A single Motzkin step. The derived order (`East < NorthEast < SouthEast`)
/// is the enumeration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Step {
    East,
    NorthEast,
    SouthEast,
}

impl Step {
    fn delta(self) -> i64 {
        match self {
            Step::East => 0,
            Step::NorthEast => 1,
            Step::SouthEast => -1,
        }
    }
}

/// A lattice path of `NorthEast`/`East`/`SouthEast` steps that never drops
/// below height zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MotzkinPath {
    start_height: usize,
    steps: Vec<Step>,
}

impl MotzkinPath {
    pub fn new(start_height: usize, steps: Vec<Step>) -> Result<Self> {
        let mut h = start_height as i64;
        for (i, s) in steps.iter().enumerate() {
            h += s.delta();
            if h < 0 {
                return Err(Error::Domain(format!("path drops below zero at step {i}")));
            }
        }
        Ok(Self {
            start_height,
            steps,
        })
    }

    pub fn start_height(&self) -> usize {
        self.start_height
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn end_height(&self) -> usize {
        let h: i64 = self.start_height as i64 + self.steps.iter().map(|s| s.delta()).sum::<i64>();
        h as usize
    }

    /// Height at which each step starts.
    pub fn step_heights(&self) -> Vec<usize> {
        let mut h = self.start_height as i64;
        self.steps
            .iter()
            .map(|s| {
                let at = h as usize;
                h += s.delta();
                at
            })
            .collect()
    }

    pub fn count(&self, step: Step) -> usize {
        self.steps.iter().filter(|&&s| s == step).count()
    }
}

struct PathSearch<'a, F> {
    len: usize,
    start: usize,
    /// Number of NorthEast steps required, if restricted.
    ups: Option<usize>,
    steps: Vec<Step>,
    visit: &'a mut F,
}

impl<F: FnMut(&[Step], usize)> PathSearch<'_, F> {
    fn run(&mut self, height: usize, used_ups: usize, used_easts: usize) {
        let done = self.steps.len();
        if done == self.len {
            if height == self.start {
                (self.visit)(&self.steps, self.start);
            }
            return;
        }
        let remaining = self.len - done;
        for step in [Step::East, Step::NorthEast, Step::SouthEast] {
            let next = height as i64 + step.delta();
            if next < 0 || (next - self.start as i64).unsigned_abs() as usize > remaining - 1 {
                continue;
            }
            let (ups, easts) = match step {
                Step::NorthEast => (used_ups + 1, used_easts),
                Step::East => (used_ups, used_easts + 1),
                Step::SouthEast => (used_ups, used_easts),
            };
            if let Some(k) = self.ups {
                if ups > k || easts > self.len - 2 * k {
                    continue;
                }
            }
            self.steps.push(step);
            self.run(next as usize, ups, easts);
            self.steps.pop();
        }
    }
}

/// Visits every path in `Mot_{p,j,j}` (restricted to exactly `k` up and `k`
/// down steps when `k` is given) in lexicographic order.
pub fn for_each_motzkin<F: FnMut(&[Step], usize)>(p: usize, j: usize, k: Option<usize>, mut visit: F) {
    if let Some(k) = k {
        if 2 * k > p {
            return;
        }
    }
    let mut search = PathSearch {
        len: p,
        start: j,
        ups: k,
        steps: Vec::with_capacity(p),
        visit: &mut visit,
    };
    search.run(j, 0, 0);
}

/// All Motzkin paths of length `p` from height `j` back to height `j`.
pub fn enumerate_motzkin(p: usize, j: usize, k: Option<usize>) -> Vec<MotzkinPath> {
    let mut out = Vec::new();
    for_each_motzkin(p, j, k, |steps, start| {
        out.push(MotzkinPath {
            start_height: start,
            steps: steps.to_vec(),
        })
    });
    out
}

/// Product of step weights: `1` for NorthEast, `b_h` for an East step at
/// height `h`, `lam_h` for a SouthEast step starting at height `h`.
pub fn path_weight<S: Scalar>(path: &MotzkinPath, seqs: &WeightSequences<S>) -> S {
    path.steps
        .iter()
        .zip(path.step_heights())
        .fold(S::one(), |acc, (step, h)| match step {
            Step::NorthEast => acc,
            Step::East => acc * seqs.b(h),
            Step::SouthEast => acc * seqs.lam(h),
        })
}

/// `sum_{w in Mot_{p,j,j}} wt(w)` for arbitrary weight sequences.
pub fn weighted_path_sum<S: Scalar>(
    p: usize,
    j: usize,
    seqs: &WeightSequences<S>,
    caps: &EnumerationCaps,
) -> Result<S> {
    if p > caps.max_path_length {
        return Err(Error::ResourceCap {
            what: "Motzkin path length",
            requested: p,
            cap: caps.max_path_length,
        });
    }
    let top = j + p;
    let b: Vec<S> = (0..=top).map(|n| seqs.b(n)).collect();
    let lam: Vec<S> = (0..=top).map(|n| seqs.lam(n)).collect();
    let mut total = S::zero();
    // Depth-first accumulation of prefix products; no paths are stored.
    fn walk<S: Scalar>(
        remaining: usize,
        height: usize,
        target: usize,
        weight: S,
        b: &[S],
        lam: &[S],
        total: &mut S,
    ) {
        if remaining == 0 {
            if height == target {
                *total = total.clone() + weight;
            }
            return;
        }
        if height.abs_diff(target) > remaining {
            return;
        }
        walk(remaining - 1, height, target, weight.clone() * b[height].clone(), b, lam, total);
        walk(remaining - 1, height + 1, target, weight.clone(), b, lam, total);
        if height > 0 {
            walk(remaining - 1, height - 1, target, weight * lam[height].clone(), b, lam, total);
        }
    }
    walk(p, j, j, S::one(), &b, &lam, &mut total);
    Ok(total)
}

/// `𝔪_{p,j} = sum over Mot_{p,j,j}` with the monic (unrescaled) Al-Salam–Carlitz
/// weights, so exact inputs give an exact rational.
pub fn moment_via_motzkin<S: Scalar>(p: usize, j: usize, params: &QParams<S>) -> Result<S> {
    moment_via_motzkin_with(p, j, params, &EnumerationCaps::default())
}

pub fn moment_via_motzkin_with<S: Scalar>(
    p: usize,
    j: usize,
    params: &QParams<S>,
    caps: &EnumerationCaps,
) -> Result<S> {
    weighted_path_sum(p, j, &WeightSequences::al_salam_carlitz(params), caps)
}
