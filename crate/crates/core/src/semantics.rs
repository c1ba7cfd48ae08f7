//! Dung semantics over the attack relation of an AKG.

use std::collections::{BTreeSet, HashMap, HashSet};

use serde::Serialize;
use thiserror::Error;

use crate::akg::{Akg, EdgeKind};

/// Largest framework the bitset engine can enumerate.
pub const ENGINE_LIMIT: usize = 64;
pub const DEFAULT_CAP: usize = 64;
pub const ORACLE_LIMIT: usize = 20;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SemanticsError {
    #[error("{0} is not an argument of the framework")]
    MemberOutsideAF(String),
    #[error("unknown argument {0}")]
    UnknownArgument(String),
    #[error("framework has {n} arguments; enumeration is capped at {cap}")]
    TooLarge { n: usize, cap: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ExtensionLabel {
    ConflictFree,
    Admissible,
    Naive,
    Preferred,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Extension {
    /// Members in framework order.
    pub members: Vec<String>,
    pub label: ExtensionLabel,
}

impl Extension {
    pub fn member_set(&self) -> BTreeSet<&str> {
        self.members.iter().map(String::as_str).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct AfProjection {
    pub args: Vec<String>,
    pub atts: BTreeSet<(String, String)>,
    #[serde(skip)]
    index: HashMap<String, usize>,
}

/// Arguments are the AKG nodes; attacks are its attack edges.
pub fn project_af(akg: &Akg) -> AfProjection {
    let args = akg.nodes.iter().map(|n| n.arg_id.clone()).collect();
    let atts = akg.edges_of_kind(EdgeKind::Attack).map(|e| (e.source.clone(), e.target.clone()));
    AfProjection::new(args, atts).expect("attack edges join AKG nodes")
}

impl AfProjection {
    pub fn new(
        args: Vec<String>,
        atts: impl IntoIterator<Item = (String, String)>,
    ) -> Result<Self, SemanticsError> {
        let mut index = HashMap::new();
        for (i, a) in args.iter().enumerate() {
            index.insert(a.clone(), i);
        }
        let atts: BTreeSet<(String, String)> = atts.into_iter().collect();
        for (a, b) in &atts {
            for x in [a, b] {
                if !index.contains_key(x) {
                    return Err(SemanticsError::MemberOutsideAF(x.clone()));
                }
            }
        }
        Ok(AfProjection { args, atts, index })
    }

    pub fn len(&self) -> usize {
        self.args.len()
    }

    pub fn is_empty(&self) -> bool {
        self.args.is_empty()
    }

    pub fn contains(&self, a: &str) -> bool {
        self.index.contains_key(a)
    }

    fn check_members<S: AsRef<str>>(&self, set: &[S]) -> Result<HashSet<usize>, SemanticsError> {
        set.iter()
            .map(|a| self.index.get(a.as_ref()).copied().ok_or_else(|| SemanticsError::MemberOutsideAF(a.as_ref().into())))
            .collect()
    }

    fn attacks(&self, a: &str, b: &str) -> bool {
        self.atts.contains(&(a.to_string(), b.to_string()))
    }

    /// No member attacks a member.
    pub fn is_conflict_free<S: AsRef<str>>(&self, set: &[S]) -> Result<bool, SemanticsError> {
        self.check_members(set)?;
        Ok(set.iter().all(|a| set.iter().all(|b| !self.attacks(a.as_ref(), b.as_ref()))))
    }

    /// Some member of `set` attacks `b`.
    pub fn set_attacks<S: AsRef<str>>(&self, set: &[S], b: &str) -> Result<bool, SemanticsError> {
        if !self.contains(b) {
            return Err(SemanticsError::UnknownArgument(b.into()));
        }
        Ok(set.iter().any(|a| self.attacks(a.as_ref(), b)))
    }

    /// Every attacker of `a` is attacked by `set`.
    pub fn is_acceptable<S: AsRef<str>>(&self, a: &str, set: &[S]) -> Result<bool, SemanticsError> {
        if !self.contains(a) {
            return Err(SemanticsError::UnknownArgument(a.into()));
        }
        for (x, y) in &self.atts {
            if y == a && !self.set_attacks(set, x)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_admissible<S: AsRef<str>>(&self, set: &[S]) -> Result<bool, SemanticsError> {
        if !self.is_conflict_free(set)? {
            return Ok(false);
        }
        for a in set {
            if !self.is_acceptable(a.as_ref(), set)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn extension(&self, mut members: Vec<usize>, label: ExtensionLabel) -> Extension {
        members.sort_unstable();
        Extension { members: members.into_iter().map(|i| self.args[i].clone()).collect(), label }
    }

    fn indexed_atts(&self) -> Vec<(usize, usize)> {
        self.atts.iter().map(|(a, b)| (self.index[a], self.index[b])).collect()
    }
}

/// Families are ordered by member index sequence.
fn canonical(af: &AfProjection, mut family: Vec<Vec<usize>>, label: ExtensionLabel) -> Vec<Extension> {
    for m in &mut family {
        m.sort_unstable();
    }
    family.sort();
    family.dedup();
    family.into_iter().map(|m| af.extension(m, label)).collect()
}

struct Bits {
    n: usize,
    /// `out[i]`: arguments attacked by i.
    out: Vec<u64>,
    /// `inc[i]`: attackers of i.
    inc: Vec<u64>,
    self_attacking: u64,
}

impl Bits {
    fn new(af: &AfProjection) -> Self {
        let n = af.len();
        let mut out = vec![0u64; n];
        let mut inc = vec![0u64; n];
        let mut self_attacking = 0;
        for (a, b) in af.indexed_atts() {
            out[a] |= 1 << b;
            inc[b] |= 1 << a;
            if a == b {
                self_attacking |= 1 << a;
            }
        }
        Bits { n, out, inc, self_attacking }
    }

    fn all(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    fn union_over(&self, set: u64, table: &[u64]) -> u64 {
        members(set).fold(0, |acc, i| acc | table[i])
    }

    fn attacked_by(&self, set: u64) -> u64 {
        self.union_over(set, &self.out)
    }

    fn conflicts_with(&self, set: u64) -> u64 {
        self.union_over(set, &self.out) | self.union_over(set, &self.inc)
    }

    fn defended(&self, set: u64) -> u64 {
        let hit = self.attacked_by(set);
        (0..self.n).filter(|&i| self.inc[i] & !hit == 0).fold(0, |acc, i| acc | 1 << i)
    }

    /// Least fixpoint of the characteristic function.
    fn grounded(&self) -> u64 {
        let mut g = 0;
        loop {
            let next = self.defended(g);
            if next == g {
                return g;
            }
            g = next;
        }
    }
}

fn members(set: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| set & (1 << i) != 0)
}

fn check_cap(af: &AfProjection, cap: usize) -> Result<(), SemanticsError> {
    let cap = cap.min(ENGINE_LIMIT);
    if af.len() > cap {
        return Err(SemanticsError::TooLarge { n: af.len(), cap });
    }
    Ok(())
}

/// Maximal conflict-free sets: maximal cliques of the compatibility graph
/// (Bron–Kerbosch with pivoting).
pub fn naive_extensions(af: &AfProjection, cap: usize) -> Result<Vec<Extension>, SemanticsError> {
    check_cap(af, cap)?;
    let b = Bits::new(af);
    let usable = b.all() & !b.self_attacking;
    let compat: Vec<u64> = (0..b.n).map(|i| usable & !(b.out[i] | b.inc[i]) & !(1 << i)).collect();
    let mut found = Vec::new();
    bron_kerbosch(&compat, 0, usable, 0, &mut found);
    Ok(canonical(af, found.into_iter().map(|s| members(s).collect()).collect(), ExtensionLabel::Naive))
}

fn bron_kerbosch(compat: &[u64], r: u64, mut p: u64, mut x: u64, found: &mut Vec<u64>) {
    if p == 0 && x == 0 {
        found.push(r);
        return;
    }
    let pivot = members(p | x).max_by_key(|&u| (compat[u] & p).count_ones()).expect("p or x non-empty");
    for v in members(p & !compat[pivot]).collect::<Vec<_>>() {
        bron_kerbosch(compat, r | 1 << v, p & compat[v], x & compat[v], found);
        p &= !(1 << v);
        x |= 1 << v;
    }
}

/// Maximal admissible sets by include/exclude search. The grounded extension
/// is in every preferred extension, so the search starts from it.
pub fn preferred_extensions(af: &AfProjection, cap: usize) -> Result<Vec<Extension>, SemanticsError> {
    check_cap(af, cap)?;
    let b = Bits::new(af);
    let grounded = b.grounded();
    let undecided = b.all() & !grounded & !b.conflicts_with(grounded) & !b.self_attacking;
    let mut found: Vec<u64> = Vec::new();
    let order: Vec<usize> = members(undecided).collect();
    search(&b, &order, 0, grounded, undecided, &mut found);
    let maximal: Vec<u64> =
        found.iter().copied().filter(|&s| !found.iter().any(|&t| t != s && s & t == s)).collect();
    Ok(canonical(af, maximal.into_iter().map(|s| members(s).collect()).collect(), ExtensionLabel::Preferred))
}

fn search(b: &Bits, order: &[usize], pos: usize, inc: u64, open: u64, found: &mut Vec<u64>) {
    let reach = inc | open;
    if found.iter().any(|&f| reach & f == reach) {
        return;
    }
    // Every attacker of a member must be attackable from within reach.
    let counter = b.attacked_by(reach);
    if members(inc).any(|a| b.inc[a] & !counter != 0) {
        return;
    }
    // With nothing open, reach = inc and the check above made inc admissible.
    let Some(&v) = order[pos..].iter().find(|&&v| open & (1 << v) != 0) else {
        found.push(inc);
        return;
    };
    let next = order.iter().position(|&o| o == v).expect("in order") + 1;
    let with = inc | 1 << v;
    search(b, order, next, with, open & !(1 << v) & !b.conflicts_with(1 << v), found);
    search(b, order, next, inc, open & !(1 << v), found);
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleSemantics {
    Naive,
    Preferred,
}

/// Reference enumeration: every subset is tested directly against the
/// definitions and the inclusion-maximal ones are kept.
pub fn oracle_extensions(af: &AfProjection, which: OracleSemantics) -> Result<Vec<Extension>, SemanticsError> {
    let n = af.len();
    if n > ORACLE_LIMIT {
        return Err(SemanticsError::TooLarge { n, cap: ORACLE_LIMIT });
    }
    let mut attacks = vec![vec![false; n]; n];
    for (a, b) in af.indexed_atts() {
        attacks[a][b] = true;
    }
    let conflict_free = |s: &[usize]| s.iter().all(|&a| s.iter().all(|&b| !attacks[a][b]));
    let acceptable = |a: usize, s: &[usize]| (0..n).filter(|&x| attacks[x][a]).all(|x| s.iter().any(|&d| attacks[d][x]));
    let mut qualifying: Vec<u32> = Vec::new();
    for mask in 0u32..(1u32 << n) {
        let set: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let ok = match which {
            OracleSemantics::Naive => conflict_free(&set),
            OracleSemantics::Preferred => conflict_free(&set) && set.iter().all(|&a| acceptable(a, &set)),
        };
        if ok {
            qualifying.push(mask);
        }
    }
    // Largest first: any qualifying superset lies inside an already kept maximal set.
    qualifying.sort_by_key(|m| std::cmp::Reverse(m.count_ones()));
    let mut kept: Vec<u32> = Vec::new();
    for s in qualifying {
        if !kept.iter().any(|&t| s & t == s) {
            kept.push(s);
        }
    }
    let maximal: Vec<Vec<usize>> =
        kept.into_iter().map(|m| (0..n).filter(|i| m & (1 << i) != 0).collect()).collect();
    let label = match which {
        OracleSemantics::Naive => ExtensionLabel::Naive,
        OracleSemantics::Preferred => ExtensionLabel::Preferred,
    };
    Ok(canonical(af, maximal, label))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckedSet {
    pub set: Vec<String>,
    pub conflict_free: bool,
    pub admissible: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SemanticsReport {
    pub args: Vec<String>,
    pub atts: Vec<(String, String)>,
    pub naive: Vec<Vec<String>>,
    pub preferred: Vec<Vec<String>>,
    pub checked_sets: Vec<CheckedSet>,
}

pub fn semantics_report(af: &AfProjection, cap: usize, checks: &[Vec<String>]) -> Result<SemanticsReport, SemanticsError> {
    let members = |family: Vec<Extension>| family.into_iter().map(|e| e.members).collect();
    let checked_sets = checks
        .iter()
        .map(|set| {
            Ok(CheckedSet {
                set: set.clone(),
                conflict_free: af.is_conflict_free(set)?,
                admissible: af.is_admissible(set)?,
            })
        })
        .collect::<Result<_, SemanticsError>>()?;
    Ok(SemanticsReport {
        args: af.args.clone(),
        atts: af.atts.iter().cloned().collect(),
        naive: members(naive_extensions(af, cap)?),
        preferred: members(preferred_extensions(af, cap)?),
        checked_sets,
    })
}
