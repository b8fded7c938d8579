use rayon::prelude::*;

use crate::combinat::EnumerationCaps;
use crate::error::{Error, Result};
use crate::qcore::{pow_nonneg, QParams, Scalar};

/// What a vertex is in a generalised matching.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VertexRole {
    Isolated,
    Vertical,
    Opener,
    Closer,
}

/// A partial matching on `[n]` (vertices are 1-based) whose unmatched vertices
/// are either isolated or carry a vertical line.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GeneralizedMatching {
    n: usize,
    /// Sorted by opener.
    arcs: Vec<(usize, usize)>,
    /// Sorted.
    verticals: Vec<usize>,
}

impl GeneralizedMatching {
    pub fn new(n: usize, mut arcs: Vec<(usize, usize)>, mut verticals: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; n + 1];
        let mut claim = |v: usize| -> Result<()> {
            if v == 0 || v > n {
                return Err(Error::Domain(format!("vertex {v} outside [1, {n}]")));
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::Domain(format!("vertex {v} used twice")));
            }
            Ok(())
        };
        for &(o, c) in &arcs {
            if o >= c {
                return Err(Error::Domain(format!("arc ({o}, {c}) must have opener < closer")));
            }
            claim(o)?;
            claim(c)?;
        }
        for &v in &verticals {
            claim(v)?;
        }
        arcs.sort_unstable();
        verticals.sort_unstable();
        Ok(Self { n, arcs, verticals })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn verticals(&self) -> &[usize] {
        &self.verticals
    }

    /// Role of each vertex; index 0 is vertex 1.
    pub fn roles(&self) -> Vec<VertexRole> {
        let mut roles = vec![VertexRole::Isolated; self.n];
        for &(o, c) in &self.arcs {
            roles[o - 1] = VertexRole::Opener;
            roles[c - 1] = VertexRole::Closer;
        }
        for &v in &self.verticals {
            roles[v - 1] = VertexRole::Vertical;
        }
        roles
    }

    pub fn isolated(&self) -> Vec<usize> {
        self.roles()
            .iter()
            .enumerate()
            .filter(|(_, r)| **r == VertexRole::Isolated)
            .map(|(i, _)| i + 1)
            .collect()
    }

    pub fn crossings(&self) -> usize {
        let isolated = self.isolated();
        let mut cr = 0;
        for (i, &(a, b)) in self.arcs.iter().enumerate() {
            cr += self.arcs[i + 1..]
                .iter()
                .filter(|&&(c, d)| a < c && c < b && b < d)
                .count();
            cr += isolated.iter().filter(|&&c| a < c && c < b).count();
            cr += self.verticals.iter().filter(|&&c| a < c && c < b).count();
        }
        for &a in &isolated {
            cr += self.verticals.iter().filter(|&&b| a < b).count();
        }
        cr
    }

    pub fn nestings(&self) -> usize {
        let isolated = self.isolated();
        let mut ne = 0;
        for &(a, b) in &self.arcs {
            ne += self
                .arcs
                .iter()
                .filter(|&&(c, d)| a < c && d < b)
                .count();
            ne += isolated.iter().filter(|&&c| c < a).count();
        }
        ne
    }

    /// `cr + 2 ne`.
    pub fn stat(&self) -> usize {
        self.crossings() + 2 * self.nestings()
    }
}

pub fn stat(m: &GeneralizedMatching) -> usize {
    m.stat()
}

/// Constraint on the first `j` vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PrefixRule {
    #[default]
    None,
    /// The first `j` vertices are isolated or openers (`Mat^{>j}`).
    OpenersOrIsolated { j: usize },
    /// As above with exactly `i` openers among them (`Mat^{>j}(i)`).
    ExactOpeners { j: usize, i: usize },
}

impl PrefixRule {
    fn prefix_len(self) -> usize {
        match self {
            PrefixRule::None => 0,
            PrefixRule::OpenersOrIsolated { j } | PrefixRule::ExactOpeners { j, .. } => j,
        }
    }
}

struct MatchingSearch<'a, F> {
    n: usize,
    arcs: usize,
    verticals: usize,
    isolated: usize,
    rule: PrefixRule,
    roles: Vec<VertexRole>,
    /// Openers still waiting for a closer, in increasing order.
    pending: Vec<usize>,
    closed: Vec<(usize, usize)>,
    used: [usize; 3],
    visit: &'a mut F,
}

impl<F: FnMut(&[VertexRole], &[(usize, usize)])> MatchingSearch<'_, F> {
    fn allowed_in_prefix(&self, role: VertexRole, v: usize) -> bool {
        let j = self.rule.prefix_len();
        if v > j {
            return true;
        }
        if !matches!(role, VertexRole::Isolated | VertexRole::Opener) {
            return false;
        }
        if let PrefixRule::ExactOpeners { j, i } = self.rule {
            let openers = self.used[2] + usize::from(role == VertexRole::Opener);
            let isolated = self.used[0] + usize::from(role == VertexRole::Isolated);
            return openers <= i && isolated <= j - i;
        }
        true
    }

    fn run(&mut self) {
        let v = self.roles.len() + 1;
        if v > self.n {
            (self.visit)(&self.roles, &self.closed);
            return;
        }
        let budgets = [self.isolated, self.verticals, self.arcs];
        for (slot, role) in [VertexRole::Isolated, VertexRole::Vertical, VertexRole::Opener]
            .into_iter()
            .enumerate()
        {
            if self.used[slot] == budgets[slot] || !self.allowed_in_prefix(role, v) {
                continue;
            }
            self.used[slot] += 1;
            self.roles.push(role);
            if role == VertexRole::Opener {
                self.pending.push(v);
            }
            self.run();
            if role == VertexRole::Opener {
                self.pending.pop();
            }
            self.roles.pop();
            self.used[slot] -= 1;
        }
        if v <= self.rule.prefix_len() {
            return;
        }
        for idx in 0..self.pending.len() {
            let opener = self.pending.remove(idx);
            self.roles.push(VertexRole::Closer);
            self.closed.push((opener, v));
            self.run();
            self.closed.pop();
            self.roles.pop();
            self.pending.insert(idx, opener);
        }
    }
}

fn search<F: FnMut(&[VertexRole], &[(usize, usize)])>(
    n: usize,
    arcs: usize,
    verticals: usize,
    rule: PrefixRule,
    visit: &mut F,
) {
    if n < 2 * arcs + verticals {
        return;
    }
    match rule {
        PrefixRule::None => {}
        PrefixRule::OpenersOrIsolated { j } if j > n => return,
        PrefixRule::ExactOpeners { j, i } if j > n || i > j || i > arcs => return,
        _ => {}
    }
    let mut s = MatchingSearch {
        n,
        arcs,
        verticals,
        isolated: n - 2 * arcs - verticals,
        rule,
        roles: Vec::with_capacity(n),
        pending: Vec::new(),
        closed: Vec::new(),
        used: [0; 3],
        visit,
    };
    s.run();
}

fn build(roles: &[VertexRole], closed: &[(usize, usize)]) -> GeneralizedMatching {
    let mut arcs = closed.to_vec();
    arcs.sort_unstable();
    let verticals = roles
        .iter()
        .enumerate()
        .filter(|(_, r)| **r == VertexRole::Vertical)
        .map(|(i, _)| i + 1)
        .collect();
    GeneralizedMatching {
        n: roles.len(),
        arcs,
        verticals,
    }
}

/// Visits every generalised matching on `[n]` with the given numbers of arcs
/// and verticals.
///
/// Order: vertex by vertex from the left, trying isolated, then vertical, then
/// opener, then closing each pending opener from the leftmost one.
pub fn for_each_matching<F: FnMut(&GeneralizedMatching)>(
    n: usize,
    arcs: usize,
    verticals: usize,
    rule: PrefixRule,
    mut visit: F,
) {
    search(n, arcs, verticals, rule, &mut |roles, closed| {
        visit(&build(roles, closed))
    });
}

pub fn enumerate_matchings(
    n: usize,
    arcs: usize,
    verticals: usize,
    rule: PrefixRule,
) -> Vec<GeneralizedMatching> {
    let mut out = Vec::new();
    for_each_matching(n, arcs, verticals, rule, |m| out.push(m.clone()));
    out
}

/// Number of matchings in the class having each value of `stat`;
/// entry `s` counts those with `stat = s`.
pub fn stat_histogram(
    n: usize,
    arcs: usize,
    verticals: usize,
    rule: PrefixRule,
    caps: &EnumerationCaps,
) -> Result<Vec<u64>> {
    check_cap(n, caps)?;
    let mut hist = Vec::new();
    for_each_matching(n, arcs, verticals, rule, |m| {
        let s = m.stat();
        if hist.len() <= s {
            hist.resize(s + 1, 0);
        }
        hist[s] += 1;
    });
    Ok(hist)
}

pub(crate) fn check_cap(n: usize, caps: &EnumerationCaps) -> Result<()> {
    if n > caps.max_matching_vertices {
        return Err(Error::ResourceCap {
            what: "matching vertex count",
            requested: n,
            cap: caps.max_matching_vertices,
        });
    }
    Ok(())
}

pub(crate) fn eval_histogram<S: Scalar>(hist: &[u64], q: &S) -> S {
    let mut total = S::zero();
    let mut power = S::one();
    for &count in hist {
        if count > 0 {
            total = total + S::from_i64(count as i64) * power.clone();
        }
        power = power * q.clone();
    }
    total
}

/// `𝔪_{p,j}` from the statistic on `Mat^{>j}_{p+j,k,p-2k}`:
/// `sum_k (a+1)^(p-2k) (-a)^k (1-q)^k sum_M q^stat(M)`.
pub fn moment_component_via_matching<S: Scalar>(
    p: usize,
    j: usize,
    params: &QParams<S>,
) -> Result<S> {
    moment_component_via_matching_with(p, j, params, &EnumerationCaps::default())
}

pub fn moment_component_via_matching_with<S: Scalar>(
    p: usize,
    j: usize,
    params: &QParams<S>,
    caps: &EnumerationCaps,
) -> Result<S> {
    check_cap(p + j, caps)?;
    let (q, a) = (params.q(), params.a());
    let rule = PrefixRule::OpenersOrIsolated { j };
    let terms: Vec<S> = (0..=p / 2)
        .into_par_iter()
        .map(|k| {
            let hist = stat_histogram(p + j, k, p - 2 * k, rule, caps)?;
            let prefactor = pow_nonneg(&(a.clone() + S::one()), p - 2 * k)
                * pow_nonneg(&(-a.clone()), k)
                * pow_nonneg(&(S::one() - q.clone()), k);
            Ok(prefactor * eval_histogram(&hist, q))
        })
        .collect::<Result<_>>()?;
    Ok(terms.into_iter().sum())
}
