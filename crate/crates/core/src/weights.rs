//! Roots, spinor weights and Pin labels for types `B_k` and `D_k`; the
//! tensor rule `V_λ ⊗ S`, Bratteli diagrams of `S^{⊗n}`, quantum dimensions
//! and the quantum trace.
//!
//! The bilinear form is the standard one, `⟨e_i, e_j⟩ = δ_ij`, for both
//! families, so the short roots of `B_k` have length 1.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num::BigRational;
use serde::Serialize;
use thiserror::Error;

use crate::field::Field;
use crate::linalg::SparseMat;
use crate::report::{Params, VerificationReport};
use crate::scalar::{curly, qbinom, qint, HalfInt, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeightError {
    #[error("rank must be at least 1")]
    Rank,
    #[error("invalid label {label} for {family}_{rank}: {why}")]
    Label { label: String, family: Family, rank: usize, why: String },
    #[error("level {n} out of range (diagram has {levels} levels)")]
    Level { n: usize, levels: usize },
    #[error("matrix of size {got} does not act on S^{{⊗n}} of dimension {want}")]
    Dimension { got: usize, want: usize },
    #[error("unknown family {0:?}")]
    Family(String),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Family {
    B,
    D,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::B => "B",
            Family::D => "D",
        })
    }
}

impl FromStr for Family {
    type Err = WeightError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "B" | "b" => Ok(Family::B),
            "D" | "d" => Ok(Family::D),
            other => Err(WeightError::Family(other.to_string())),
        }
    }
}

/// A vector of half-integers in the coordinates `e_1, ..., e_k`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Weight(pub Vec<HalfInt>);

impl Weight {
    pub fn zero(k: usize) -> Self {
        Weight(vec![HalfInt::ZERO; k])
    }

    /// `ε = (1/2, ..., 1/2)`.
    pub fn epsilon(k: usize) -> Self {
        Weight(vec![HalfInt::HALF; k])
    }

    pub fn unit(k: usize, i: usize) -> Self {
        let mut w = Self::zero(k);
        w.0[i] = HalfInt::from_int(1);
        w
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&self, o: &Weight) -> Weight {
        Weight(self.0.iter().zip(&o.0).map(|(a, b)| *a + *b).collect())
    }

    pub fn sub(&self, o: &Weight) -> Weight {
        Weight(self.0.iter().zip(&o.0).map(|(a, b)| *a - *b).collect())
    }

    pub fn neg(&self) -> Weight {
        Weight(self.0.iter().map(|a| -*a).collect())
    }

    /// `4⟨a, b⟩`, always an integer.
    pub fn dot4(&self, o: &Weight) -> i32 {
        self.0.iter().zip(&o.0).map(|(a, b)| a.twice() * b.twice()).sum()
    }

    /// `⟨a, b⟩` when it is a half-integer (one side has integer entries).
    pub fn dot(&self, o: &Weight) -> HalfInt {
        let d4 = self.dot4(o);
        assert!(d4 % 2 == 0, "pairing is not a half-integer");
        HalfInt::from_twice(d4 / 2)
    }

    /// `λ̄`: the last coordinate negated.
    pub fn bar(&self) -> Weight {
        let mut w = self.clone();
        if let Some(l) = w.0.last_mut() {
            *l = -*l;
        }
        w
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|x| x.is_integer())
    }

    fn same_class(&self) -> bool {
        self.0.windows(2).all(|w| w[0].is_integer() == w[1].is_integer())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Root system data with the standard form.
#[derive(Clone, Debug, PartialEq)]
pub struct RootData {
    pub family: Family,
    pub rank: usize,
    pub simple_roots: Vec<Weight>,
    pub positive_roots: Vec<Weight>,
    pub rho: Weight,
    pub fundamental_weights: Vec<Weight>,
}

impl RootData {
    pub fn new(family: Family, rank: usize) -> Result<RootData, WeightError> {
        if rank == 0 {
            return Err(WeightError::Rank);
        }
        let k = rank;
        let e = |i: usize| Weight::unit(k, i);
        let mut simple: Vec<Weight> = (0..k.saturating_sub(1)).map(|i| e(i).sub(&e(i + 1))).collect();
        let mut positive = Vec::new();
        for i in 0..k {
            for j in i + 1..k {
                positive.push(e(i).sub(&e(j)));
                positive.push(e(i).add(&e(j)));
            }
        }
        let mut fundamental: Vec<Weight> = Vec::new();
        let partial = |i: usize| Weight((0..k).map(|c| HalfInt::from_int((c <= i) as i32)).collect());
        let rho;
        match family {
            Family::B => {
                simple.push(e(k - 1));
                positive.extend((0..k).map(e));
                rho = Weight((0..k).map(|i| HalfInt::from_twice(2 * (k - i) as i32 - 1)).collect());
                fundamental.extend((0..k - 1).map(partial));
                fundamental.push(Weight::epsilon(k));
            }
            Family::D => {
                rho = Weight((0..k).map(|i| HalfInt::from_int((k - 1 - i) as i32)).collect());
                if k >= 2 {
                    simple.push(e(k - 2).add(&e(k - 1)));
                    fundamental.extend((0..k - 2).map(partial));
                    fundamental.push(Weight::epsilon(k).bar());
                    fundamental.push(Weight::epsilon(k));
                } else {
                    simple.clear();
                }
            }
        }
        Ok(RootData { family, rank, simple_roots: simple, positive_roots: positive, rho, fundamental_weights: fundamental })
    }

    /// `2α/⟨α, α⟩`.
    pub fn coroot(&self, i: usize) -> Weight {
        let a = &self.simple_roots[i];
        let n4 = a.dot4(a); // 4 or 8
        Weight(a.0.iter().map(|x| HalfInt::from_twice(x.twice() * 8 / n4)).collect())
    }

    /// Number of simple generators `E_i`.
    pub fn num_simple(&self) -> usize {
        self.simple_roots.len()
    }

    /// `2ρ`, the exponent of the quantum trace twist.
    pub fn two_rho(&self) -> Weight {
        self.rho.add(&self.rho)
    }

    /// Dimension of the spinor module `S`.
    pub fn spinor_dim(&self) -> usize {
        1 << self.rank
    }

    fn is_dominant(&self, w: &Weight) -> bool {
        let k = self.rank;
        let v = &w.0;
        if !w.same_class() || v.windows(2).any(|p| p[0] < p[1]) {
            return false;
        }
        match self.family {
            Family::B => v[k - 1] >= HalfInt::ZERO,
            Family::D => k < 2 || v[k - 2] >= v[k - 1].abs(),
        }
    }
}

/// A weight of the spinor module: a sign vector, `true` meaning `+1/2`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpinWeight(pub Vec<bool>);

impl SpinWeight {
    /// All sign vectors of length `k` in basis order: index bit `k-1-c` set
    /// means coordinate `c` is `-1/2`. Index 0 is the highest weight `ε`.
    pub fn all(k: usize) -> Vec<SpinWeight> {
        (0..1usize << k).map(|i| SpinWeight::from_index(i, k)).collect()
    }

    pub fn from_index(i: usize, k: usize) -> SpinWeight {
        SpinWeight((0..k).map(|c| (i >> (k - 1 - c)) & 1 == 0).collect())
    }

    pub fn index(&self) -> usize {
        self.0.iter().fold(0, |acc, &p| (acc << 1) | (!p as usize))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Flips the last entry.
    pub fn bar(&self) -> SpinWeight {
        let mut s = self.clone();
        if let Some(l) = s.0.last_mut() {
            *l = !*l;
        }
        s
    }

    pub fn neg(&self) -> SpinWeight {
        SpinWeight(self.0.iter().map(|p| !p).collect())
    }

    pub fn flip(&self, c: usize) -> SpinWeight {
        let mut s = self.clone();
        s.0[c] = !s.0[c];
        s
    }

    pub fn minus_count(&self) -> usize {
        self.0.iter().filter(|p| !**p).count()
    }

    /// The weight of the first `k` coordinates.
    pub fn weight(&self, k: usize) -> Weight {
        Weight(self.0[..k].iter().map(|&p| if p { HalfInt::HALF } else { -HalfInt::HALF }).collect())
    }
}

impl fmt::Display for SpinWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.0.iter().map(|&p| if p { '+' } else { '-' }).collect();
        write!(f, "({s})")
    }
}

/// A dominant label of a simple `Spin(2k+1)` module (type B) or `Pin(2k)`
/// module (type D).
///
/// For type D a label with `λ_k > 0` stands for the Pin module
/// `V_λ ⊕ V_λ̄`; labels with `λ_k = 0` split into an associate pair
/// `V_λ`, `V_λ^♮`, told apart by the `assoc` flag.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PinLabel {
    family: Family,
    lambda: Weight,
    assoc: bool,
}

impl PinLabel {
    pub fn new(family: Family, lambda: Weight, assoc: bool) -> Result<PinLabel, WeightError> {
        let k = lambda.len();
        let bad = |why: &str| WeightError::Label {
            label: format!("{lambda}{}", if assoc { ":assoc" } else { "" }),
            family,
            rank: k,
            why: why.to_string(),
        };
        if k == 0 {
            return Err(bad("empty weight"));
        }
        if !lambda.same_class() {
            return Err(bad("mixed integral and half-integral entries"));
        }
        if lambda.0.windows(2).any(|p| p[0] < p[1]) {
            return Err(bad("entries must be weakly decreasing"));
        }
        if lambda.0[k - 1] < HalfInt::ZERO {
            return Err(bad("last entry must be nonnegative"));
        }
        if assoc && (family == Family::B || lambda.0[k - 1] != HalfInt::ZERO || !lambda.is_integral()) {
            return Err(bad("associate flag needs type D, integral λ and λ_k = 0"));
        }
        Ok(PinLabel { family, lambda, assoc })
    }

    pub fn trivial(rd: &RootData) -> PinLabel {
        PinLabel { family: rd.family, lambda: Weight::zero(rd.rank), assoc: false }
    }

    /// The label of the spinor module `S`.
    pub fn spinor(rd: &RootData) -> PinLabel {
        PinLabel { family: rd.family, lambda: Weight::epsilon(rd.rank), assoc: false }
    }

    /// `[1^r]`, the r-th exterior power of the vector representation.
    ///
    /// For type D and `k < r ≤ 2k` this is `[1^{2k-r}]^♮`.
    pub fn column(rd: &RootData, r: usize) -> Result<PinLabel, WeightError> {
        let k = rd.rank;
        let (ones, assoc) = match rd.family {
            Family::B if r <= 2 * k + 1 => (r.min(2 * k + 1 - r), false),
            Family::D if r <= k => (r, false),
            Family::D if r <= 2 * k => (2 * k - r, true),
            _ => {
                return Err(WeightError::Label {
                    label: format!("[1^{r}]"),
                    family: rd.family,
                    rank: k,
                    why: "too many rows".into(),
                })
            }
        };
        let lambda = Weight((0..k).map(|i| HalfInt::from_int((i < ones) as i32)).collect());
        PinLabel::new(rd.family, lambda, assoc)
    }

    /// Label of the simple module with highest weight `μ` (any sign of `μ_k`
    /// for type D) and, for `μ = μ̄`, the associate flag.
    pub fn from_highest_weight(family: Family, mu: &Weight, assoc: bool) -> Result<PinLabel, WeightError> {
        let lambda = if family == Family::D && mu.0.last().is_some_and(|x| *x < HalfInt::ZERO) {
            mu.bar()
        } else {
            mu.clone()
        };
        PinLabel::new(family, lambda, assoc)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn lambda(&self) -> &Weight {
        &self.lambda
    }

    pub fn is_assoc(&self) -> bool {
        self.assoc
    }

    pub fn rank(&self) -> usize {
        self.lambda.len()
    }

    /// True when `λ = λ̄`.
    pub fn is_self_conjugate(&self) -> bool {
        self.lambda.0.last() == Some(&HalfInt::ZERO)
    }

    /// `λ^♮`: toggles the associate flag when that is meaningful, identity otherwise.
    pub fn natural(&self) -> PinLabel {
        let mut out = self.clone();
        if self.family == Family::D && self.is_self_conjugate() && self.lambda.is_integral() {
            out.assoc = !out.assoc;
        }
        out
    }

    /// Length of the first column of the Young diagram (`λ'_1`), using
    /// `2k - λ'_1` for associate labels. `None` for spin labels.
    pub fn first_column(&self) -> Option<usize> {
        if !self.lambda.is_integral() {
            return None;
        }
        let rows = self.lambda.0.iter().filter(|x| **x > HalfInt::ZERO).count();
        Some(if self.assoc { 2 * self.rank() - rows } else { rows })
    }

    /// First row length of the (Young) diagram: `λ_1`, except that the
    /// associate of the trivial label is the single column `[1^{2k}]`.
    pub fn first_row(&self) -> HalfInt {
        if self.assoc && self.lambda.0[0] == HalfInt::ZERO {
            HalfInt::from_int(1)
        } else {
            self.lambda.0[0]
        }
    }

    fn check(&self, rd: &RootData) -> Result<(), WeightError> {
        if self.family != rd.family || self.rank() != rd.rank {
            return Err(WeightError::Label {
                label: self.to_string(),
                family: rd.family,
                rank: rd.rank,
                why: "label belongs to a different root system".into(),
            });
        }
        Ok(())
    }

    /// True when the label counts both `V_λ` and `V_λ̄`.
    fn is_combined(&self) -> bool {
        self.family == Family::D && !self.is_self_conjugate()
    }
}

impl Ord for PinLabel {
    fn cmp(&self, o: &Self) -> Ordering {
        (self.family, o.lambda.clone(), self.assoc).cmp(&(o.family, self.lambda.clone(), o.assoc))
    }
}

impl PartialOrd for PinLabel {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for PinLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.lambda, if self.assoc { ":assoc" } else { "" })
    }
}

impl Serialize for PinLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Parses `"3/2,1/2"` into a weight.
pub fn parse_weight(s: &str) -> Result<Weight, WeightError> {
    let s = s.trim().trim_start_matches('(').trim_end_matches(')');
    s.split(',')
        .map(|p| {
            p.parse::<HalfInt>().map_err(|_| WeightError::Label {
                label: s.to_string(),
                family: Family::B,
                rank: 0,
                why: format!("cannot parse entry {p:?}"),
            })
        })
        .collect::<Result<Vec<_>, _>>()
        .map(Weight)
}

/// Simple constituents of `V_x ⊗ S`, each with multiplicity one.
pub fn spinor_tensor(x: &PinLabel, rd: &RootData) -> Result<Vec<PinLabel>, WeightError> {
    x.check(rd)?;
    let k = rd.rank;
    let mut out = BTreeSet::new();
    for w in SpinWeight::all(k) {
        let mu = x.lambda.add(&w.weight(k));
        if !rd.is_dominant(&mu) {
            continue;
        }
        match rd.family {
            Family::B => {
                out.insert(PinLabel { family: Family::B, lambda: mu, assoc: false });
            }
            Family::D => {
                if mu.0[k - 1] < HalfInt::ZERO {
                    continue;
                }
                let l = PinLabel { family: Family::D, lambda: mu, assoc: false };
                if l.is_self_conjugate() {
                    out.insert(l.natural());
                }
                out.insert(l);
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// Level-graded labels of `S^{⊗n}` with multiplicities and branching edges.
#[derive(Clone, Debug, PartialEq)]
pub struct BratteliDiagram {
    pub family: Family,
    pub rank: usize,
    /// `levels[n]` describes `S^{⊗n}`; level 0 is the trivial module.
    pub levels: Vec<BTreeMap<PinLabel, u64>>,
    /// `edges[n]` holds the branching pairs from level `n` to level `n+1`.
    pub edges: Vec<BTreeSet<(PinLabel, PinLabel)>>,
}

/// Builds levels `0..=levels` by iterating `⊗ S` from the trivial label.
pub fn bratteli(rd: &RootData, levels: usize) -> BratteliDiagram {
    let mut lv: Vec<BTreeMap<PinLabel, u64>> = vec![BTreeMap::from([(PinLabel::trivial(rd), 1)])];
    let mut edges = Vec::new();
    for _ in 0..levels {
        let mut next: BTreeMap<PinLabel, u64> = BTreeMap::new();
        let mut es = BTreeSet::new();
        for (lab, m) in lv.last().unwrap() {
            for child in spinor_tensor(lab, rd).expect("labels in the diagram are valid") {
                *next.entry(child.clone()).or_insert(0) += m;
                es.insert((lab.clone(), child));
            }
        }
        lv.push(next);
        edges.push(es);
    }
    BratteliDiagram { family: rd.family, rank: rd.rank, levels: lv, edges }
}

#[derive(Serialize)]
struct LabelMult {
    label: String,
    mult: u64,
}

#[derive(Serialize)]
struct LevelJson {
    level: usize,
    labels: Vec<LabelMult>,
}

#[derive(Serialize)]
struct DiagramJson {
    family: Family,
    rank: usize,
    levels: Vec<LevelJson>,
}

impl BratteliDiagram {
    /// Number of levels above the trivial level 0.
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, n: usize) -> Result<&BTreeMap<PinLabel, u64>, WeightError> {
        self.levels.get(n).ok_or(WeightError::Level { n, levels: self.depth() })
    }

    pub fn to_json(&self) -> String {
        let d = DiagramJson {
            family: self.family,
            rank: self.rank,
            levels: (1..self.levels.len())
                .map(|n| LevelJson {
                    level: n,
                    labels: self.levels[n].iter().map(|(l, m)| LabelMult { label: l.to_string(), mult: *m }).collect(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&d).expect("diagram serializes")
    }

    pub fn to_dot(&self) -> String {
        let mut out = format!("digraph bratteli_{}{} {{\n  rankdir=TB;\n", self.family, self.rank);
        let node = |n: usize, l: &PinLabel| format!("\"L{n} {l}\"");
        for (n, lv) in self.levels.iter().enumerate().skip(1) {
            out.push_str(&format!("  subgraph level{n} {{ rank=same;\n"));
            for (l, m) in lv {
                out.push_str(&format!("    {} [label=\"{l} ×{m}\"];\n", node(n, l)));
            }
            out.push_str("  }\n");
        }
        for (n, es) in self.edges.iter().enumerate().skip(1) {
            for (a, b) in es {
                out.push_str(&format!("  {} -> {};\n", node(n, a), node(n + 1, b)));
            }
        }
        out.push_str("}\n");
        out
    }

    /// Labels at level `n` that first appear there; these are the labels
    /// with [`PinLabel::first_row`] equal to `n/2`.
    pub fn new_labels(&self, n: usize) -> Vec<&PinLabel> {
        let old: BTreeSet<&PinLabel> = if n >= 2 { self.levels[n - 2].keys().collect() } else { BTreeSet::new() };
        self.levels[n].keys().filter(|l| !old.contains(l)).collect()
    }
}

/// `Σ_λ mult(λ)^2` for each level `0..=depth`.
pub fn centralizer_dims(d: &BratteliDiagram) -> Vec<u64> {
    d.levels.iter().map(|lv| lv.values().map(|m| m * m).sum()).collect()
}

/// Dimension of the old part of `End(S^{⊗(n+1)})`, the Jones basic
/// construction for `End(S^{⊗(n-1)}) ⊂ End(S^{⊗n})`.
///
/// Returns the value from the old labels at level `n+1`; panics if it does
/// not match the inclusion-matrix formula `Σ_i (Σ_j g_ij m_j)^2`.
pub fn basic_construction_dim(d: &BratteliDiagram, n: usize) -> Result<u64, WeightError> {
    let (from_old, from_inclusion) = basic_construction_both(d, n)?;
    assert_eq!(from_old, from_inclusion, "basic construction formulas disagree at n = {n}");
    Ok(from_old)
}

/// Both independent evaluations of the basic-construction dimension.
pub fn basic_construction_both(d: &BratteliDiagram, n: usize) -> Result<(u64, u64), WeightError> {
    if n == 0 || n + 1 > d.depth() {
        return Err(WeightError::Level { n, levels: d.depth() });
    }
    let old: BTreeSet<&PinLabel> = d.levels[n - 1].keys().collect();
    let from_old = d.levels[n + 1].iter().filter(|(l, _)| old.contains(l)).map(|(_, m)| m * m).sum();
    let mn = &d.levels[n];
    let from_inclusion = d.levels[n - 1]
        .keys()
        .map(|i| {
            let s: u64 = d.edges[n - 1].iter().filter(|(a, _)| a == i).map(|(_, b)| mn[b]).sum();
            s * s
        })
        .sum();
    Ok((from_old, from_inclusion))
}

fn weyl_factor_q(x: &PinLabel, rd: &RootData) -> Scalar {
    let lr = x.lambda.add(&rd.rho);
    let mut acc = Scalar::one();
    for a in &rd.positive_roots {
        acc = acc * qint(lr.dot(a)) / qint(rd.rho.dot(a));
    }
    acc
}

/// Quantum dimension `∏_{α>0} [⟨λ+ρ, α⟩] / [⟨ρ, α⟩]`; combined type-D
/// labels count both `λ` and `λ̄`.
pub fn qdimension(x: &PinLabel, rd: &RootData) -> Result<Scalar, WeightError> {
    x.check(rd)?;
    let d = weyl_factor_q(x, rd);
    Ok(if x.is_combined() { &d + &d } else { d })
}

/// Classical dimension by the Weyl formula.
pub fn classical_dim(x: &PinLabel, rd: &RootData) -> Result<u64, WeightError> {
    x.check(rd)?;
    let lr = x.lambda.add(&rd.rho);
    let mut num = BigRational::from_integer(1.into());
    for a in &rd.positive_roots {
        num = num * lr.dot(a).to_rational() / rd.rho.dot(a).to_rational();
    }
    assert!(num.is_integer(), "Weyl formula gave a non-integer");
    let d: u64 = num.to_integer().try_into().expect("dimension fits in u64");
    Ok(if x.is_combined() { 2 * d } else { d })
}

/// Total weight of each basis vector of `S^{⊗n}` (slot 1 is the slowest digit).
pub fn tensor_weights(k: usize, n: usize) -> Vec<Weight> {
    let s = SpinWeight::all(k);
    let mut out = vec![Weight::zero(k)];
    for _ in 0..n {
        out = out.iter().flat_map(|w| s.iter().map(move |v| w.add(&v.weight(k)))).collect();
    }
    out
}

/// Quantum trace `Tr(q^{2ρ} m)`, with `q^{2ρ}` acting by `q^{⟨μ, 2ρ⟩}` on
/// total weight `μ`. This is the twist making `Tr_q(1_S) = dim_q S`.
pub fn qtrace(m: &SparseMat<Scalar>, rd: &RootData, n: usize) -> Result<Scalar, WeightError> {
    let want = rd.spinor_dim().pow(n as u32);
    if !m.is_square() || m.nrows() != want {
        return Err(WeightError::Dimension { got: m.nrows(), want });
    }
    let tr = rd.two_rho();
    let mut acc = Scalar::zero();
    for (i, w) in tensor_weights(rd.rank, n).iter().enumerate() {
        let d = m.get(i, i);
        if !d.is_zero() {
            acc = acc + d * Scalar::q_pow_half(w.dot(&tr));
        }
    }
    Ok(acc)
}

/// Normalized trace `Tr_q(m) / (dim_q S)^n`.
pub fn normalized_qtrace(m: &SparseMat<Scalar>, rd: &RootData, n: usize) -> Result<Scalar, WeightError> {
    let t = qtrace(m, rd, n)?;
    let ds = qdimension(&PinLabel::spinor(rd), rd)?;
    Ok(t / Field::pow(&ds, n as u32))
}

/// The q-dimension identities: the two forms of `dim_q V_{[1^r]}` for
/// `N ≤ max_n`, the `S ⊗ S` sum rule and the spinor product formula for
/// `k ≤ max_k` in both families.
pub fn qdim_identities(max_n: usize, max_k: usize) -> VerificationReport {
    let mut rep = VerificationReport::new("qdim", Params::symbolic().with_k(max_k).with_n(max_n));
    for big_n in 1..=max_n as i64 {
        let k = HalfInt::from_twice(big_n as i32);
        for r in 0..=big_n {
            let mut lhs = qbinom(big_n - 1, r).unwrap_or_else(|_| Scalar::zero());
            if r >= 1 {
                lhs = lhs + qbinom(big_n - 1, r - 1).expect("r-1 <= N-1");
            }
            let rhs = qbinom(big_n, r).expect("r <= N") * curly(k - HalfInt::from_int(r as i32)) / curly(k);
            rep.check(format!("N={big_n} r={r}: binomial forms of dim_q [1^r] agree"), lhs == rhs, || format!("{lhs} vs {rhs}"));
            // the column label itself, when it exists in the family of N
            let (fam, rank) = if big_n % 2 == 0 { (Family::D, big_n as usize / 2) } else { (Family::B, big_n as usize / 2) };
            if rank == 0 {
                continue;
            }
            let rd = RootData::new(fam, rank).expect("rank >= 1");
            let top = if fam == Family::B { rank as i64 } else { big_n };
            if r <= top {
                let l = PinLabel::column(&rd, r as usize).expect("column in range");
                let q = qdimension(&l, &rd).expect("valid label");
                rep.check(format!("N={big_n} r={r}: Weyl q-dimension of {l} matches"), q == lhs, || format!("{q} vs {lhs}"));
            }
        }
    }
    for f in [Family::B, Family::D] {
        for k in 1..=max_k {
            let rd = RootData::new(f, k).expect("rank >= 1");
            let s = qdimension(&PinLabel::spinor(&rd), &rd).expect("spinor label");
            let total = spinor_tensor(&PinLabel::spinor(&rd), &rd)
                .expect("spinor label")
                .iter()
                .fold(Scalar::zero(), |acc, l| acc + qdimension(l, &rd).expect("tensor labels are valid"));
            let sq = &s * &s;
            rep.check(format!("{f}{k}: Σ_(S⊗S) dim_q = (dim_q S)^2"), total == sq, || format!("{total} vs {sq}"));
            let product = match f {
                Family::B => (1..=k as i32).fold(Scalar::one(), |acc, j| acc * curly(HalfInt::from_twice(2 * j - 1))),
                Family::D => (1..k as i32).fold(Scalar::from_int(2), |acc, j| acc * curly(HalfInt::from_int(j))),
            };
            rep.check(format!("{f}{k}: product formula for dim_q S"), s == product, || format!("{s} vs {product}"));
        }
    }
    rep
}

/// `Σ mult · dim V_λ = (dim S)^n` on every level of the Bratteli diagram.
pub fn bratteli_conservation(max_k: usize, levels: usize) -> VerificationReport {
    let mut rep = VerificationReport::new("bratteli", Params::symbolic().with_k(max_k).with_n(levels));
    for f in [Family::B, Family::D] {
        for k in 1..=max_k {
            let rd = RootData::new(f, k).expect("rank >= 1");
            let d = bratteli(&rd, levels);
            for (n, lv) in d.levels.iter().enumerate() {
                let total: u64 = lv.iter().map(|(l, m)| m * classical_dim(l, &rd).expect("valid label")).sum();
                let want = (rd.spinor_dim() as u64).pow(n as u32);
                rep.check(format!("{f}{k} level {n}: Σ mult·dim = (dim S)^n"), total == want, || format!("{total} vs {want}"));
            }
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qint_i;

    fn rd(f: Family, k: usize) -> RootData {
        RootData::new(f, k).unwrap()
    }

    fn w(xs: &[i32]) -> Weight {
        Weight(xs.iter().map(|&t| HalfInt::from_twice(t)).collect())
    }

    fn lab(f: Family, twice: &[i32], assoc: bool) -> PinLabel {
        PinLabel::new(f, w(twice), assoc).unwrap()
    }

    #[test]
    fn root_data_invariants() {
        for k in 1..=5 {
            for f in [Family::B, Family::D] {
                let r = rd(f, k);
                let count = match f {
                    Family::B => k * k,
                    Family::D => k * (k - 1),
                };
                assert_eq!(r.positive_roots.len(), count);
                for i in 0..r.num_simple() {
                    assert_eq!(r.rho.dot(&r.coroot(i)), HalfInt::from_int(1), "{f}{k} α{i}");
                    for (j, lam) in r.fundamental_weights.iter().enumerate() {
                        let expect = HalfInt::from_int((i == j) as i32);
                        assert_eq!(lam.dot4(&r.coroot(i)) / 4, expect.twice() / 2, "{f}{k} <Λ{j}, α{i}>");
                    }
                }
            }
        }
        assert_eq!(rd(Family::B, 2).simple_roots[1], w(&[0, 2]));
        assert_eq!(rd(Family::D, 3).simple_roots[2], w(&[0, 2, 2]));
        assert!(RootData::new(Family::B, 0).is_err());
    }

    #[test]
    fn spin_weight_order_and_bar() {
        let all = SpinWeight::all(3);
        assert_eq!(all[0], SpinWeight(vec![true, true, true]));
        for (i, s) in all.iter().enumerate() {
            assert_eq!(s.index(), i);
            assert_eq!(s.bar().bar(), *s);
            assert_eq!(s.bar().0[..2], s.0[..2]);
        }
    }

    #[test]
    fn label_validation() {
        assert!(PinLabel::new(Family::B, w(&[2, 4]), false).is_err());
        assert!(PinLabel::new(Family::B, w(&[2, 0]), true).is_err());
        assert!(PinLabel::new(Family::D, w(&[2, 2]), true).is_err());
        assert!(PinLabel::new(Family::D, w(&[3, 1]), false).is_ok());
        assert!(PinLabel::new(Family::D, w(&[2, 1]), false).is_err());
        let l = lab(Family::D, &[2, 0], false);
        assert_eq!(l.natural(), lab(Family::D, &[2, 0], true));
        assert_eq!(l.natural().first_column(), Some(3));
        assert_eq!(lab(Family::D, &[1, 1], false).natural(), lab(Family::D, &[1, 1], false));
    }

    #[test]
    fn tensor_examples() {
        let b1 = rd(Family::B, 1);
        assert_eq!(spinor_tensor(&PinLabel::trivial(&b1), &b1).unwrap(), vec![PinLabel::spinor(&b1)]);
        for k in 1..=4 {
            let b = rd(Family::B, k);
            let ss = spinor_tensor(&PinLabel::spinor(&b), &b).unwrap();
            let expect: BTreeSet<PinLabel> = (0..=k).map(|r| PinLabel::column(&b, r).unwrap()).collect();
            assert_eq!(ss.into_iter().collect::<BTreeSet<_>>(), expect, "B{k}");
            let d = rd(Family::D, k);
            let ss = spinor_tensor(&PinLabel::spinor(&d), &d).unwrap();
            assert_eq!(ss.len(), 2 * k + 1, "D{k}");
            let expect: BTreeSet<PinLabel> = (0..=2 * k).map(|r| PinLabel::column(&d, r).unwrap()).collect();
            assert_eq!(ss.into_iter().collect::<BTreeSet<_>>(), expect, "D{k}");
        }
    }

    #[test]
    fn assoc_inputs_branch_like_their_partner() {
        let d = rd(Family::D, 3);
        let l = lab(Family::D, &[2, 2, 0], false);
        assert_eq!(spinor_tensor(&l, &d).unwrap(), spinor_tensor(&l.natural(), &d).unwrap());
    }

    #[test]
    fn bratteli_examples() {
        let b1 = bratteli(&rd(Family::B, 1), 3);
        let l3: Vec<(String, u64)> = b1.levels[3].iter().map(|(l, m)| (l.to_string(), *m)).collect();
        assert_eq!(l3, vec![("(3/2)".to_string(), 1), ("(1/2)".to_string(), 2)]);
        assert_eq!(centralizer_dims(&b1)[1..], [1, 2, 5]);
        for k in 1..=4 {
            let d = bratteli(&rd(Family::D, k), 2);
            assert_eq!(d.levels[1].len(), 1);
            assert_eq!(d.levels[2].len(), 2 * k + 1);
            assert!(d.levels[2].values().all(|m| *m == 1));
        }
        let d2 = bratteli(&rd(Family::D, 2), 3);
        assert_eq!(centralizer_dims(&d2)[2], 5);
        // level 3 multiplicities 1, 3, 5 for λ_1 = 3/2 .. 1/2 ordering
        let mults: Vec<u64> = d2.levels[3].values().copied().collect();
        assert_eq!(mults, vec![1, 3, 5]);
    }

    #[test]
    fn dimension_conservation() {
        for f in [Family::B, Family::D] {
            for k in 1..=4 {
                let r = rd(f, k);
                let d = bratteli(&r, 4);
                for (n, lv) in d.levels.iter().enumerate() {
                    let total: u64 = lv.iter().map(|(l, m)| m * classical_dim(l, &r).unwrap()).sum();
                    assert_eq!(total, (r.spinor_dim() as u64).pow(n as u32), "{f}{k} level {n}");
                }
            }
        }
    }

    #[test]
    fn new_labels_have_top_first_entry() {
        for f in [Family::B, Family::D] {
            for k in 1..=3 {
                let d = bratteli(&rd(f, k), 4);
                for n in 1..=4 {
                    for l in d.new_labels(n) {
                        assert_eq!(l.first_row(), HalfInt::from_twice(n as i32), "{f}{k} level {n}: {l}");
                    }
                    for l in d.levels[n].keys() {
                        if l.first_row() == HalfInt::from_twice(n as i32) {
                            assert!(d.new_labels(n).contains(&l));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn basic_construction_examples() {
        let b1 = bratteli(&rd(Family::B, 1), 4);
        assert_eq!(basic_construction_dim(&b1, 2).unwrap(), 4);
        let (a, b) = basic_construction_both(&b1, 3).unwrap();
        assert_eq!(a, b);
        let d2 = bratteli(&rd(Family::D, 2), 3);
        assert_eq!(basic_construction_dim(&d2, 1).unwrap(), 1);
        assert!(basic_construction_dim(&d2, 3).is_err());
        for f in [Family::B, Family::D] {
            for k in 1..=3 {
                let d = bratteli(&rd(f, k), 4);
                let c = centralizer_dims(&d);
                for n in 1..=3 {
                    let new: u64 = d.new_labels(n + 1).iter().map(|l| d.levels[n + 1][*l].pow(2)).sum();
                    assert_eq!(c[n + 1], basic_construction_dim(&d, n).unwrap() + new);
                }
            }
        }
    }

    #[test]
    fn qdim_columns_match_binomial_form() {
        for f in [Family::B, Family::D] {
            for k in 1..=4 {
                let r = rd(f, k);
                let big_n = match f {
                    Family::B => 2 * k + 1,
                    Family::D => 2 * k,
                } as i64;
                let top = if f == Family::B { k } else { 2 * k };
                for rr in 0..=top {
                    let l = PinLabel::column(&r, rr).unwrap();
                    let mut expect = qbinom(big_n - 1, rr as i64).unwrap_or_else(|_| Scalar::zero());
                    if rr >= 1 {
                        expect = expect + qbinom(big_n - 1, rr as i64 - 1).unwrap();
                    }
                    assert_eq!(qdimension(&l, &r).unwrap(), expect, "{f}{k} [1^{rr}]");
                }
            }
        }
    }

    #[test]
    fn qdim_spinor_product_form() {
        for k in 1..=4 {
            let r = rd(Family::B, k);
            let expect = (1..=k as i32).fold(Scalar::one(), |acc, j| acc * curly(HalfInt::from_twice(2 * j - 1)));
            assert_eq!(qdimension(&PinLabel::spinor(&r), &r).unwrap(), expect);
        }
        let d2 = rd(Family::D, 2);
        assert_eq!(qdimension(&PinLabel::spinor(&d2), &d2).unwrap(), Scalar::from_int(2) * qint_i(2));
        assert_eq!(qdimension(&PinLabel::trivial(&d2), &d2).unwrap(), Scalar::one());
    }

    #[test]
    fn qdim_sum_over_s_tensor_s() {
        for f in [Family::B, Family::D] {
            for k in 1..=3 {
                let r = rd(f, k);
                let s = qdimension(&PinLabel::spinor(&r), &r).unwrap();
                let total = spinor_tensor(&PinLabel::spinor(&r), &r)
                    .unwrap()
                    .iter()
                    .fold(Scalar::zero(), |acc, l| acc + qdimension(l, &r).unwrap());
                assert_eq!(total, &s * &s, "{f}{k}");
            }
        }
    }

    #[test]
    fn qtrace_of_identity_is_qdim() {
        for f in [Family::B, Family::D] {
            for k in 1..=3 {
                let r = rd(f, k);
                let s = qdimension(&PinLabel::spinor(&r), &r).unwrap();
                let id = SparseMat::<Scalar>::identity(r.spinor_dim());
                assert_eq!(qtrace(&id, &r, 1).unwrap(), s);
                let id2 = SparseMat::<Scalar>::identity(r.spinor_dim().pow(2));
                assert_eq!(normalized_qtrace(&id2, &r, 2).unwrap(), Scalar::one());
                let z = SparseMat::<Scalar>::zeros(r.spinor_dim(), r.spinor_dim());
                assert_eq!(qtrace(&z, &r, 1).unwrap(), Scalar::zero());
            }
        }
        assert!(qtrace(&SparseMat::<Scalar>::identity(3), &rd(Family::D, 2), 1).is_err());
    }

    #[test]
    fn dimforma_internal_identity() {
        for big_n in 1..=8i64 {
            let k = HalfInt::from_twice(big_n as i32); // N/2
            for r in 0..=big_n {
                let mut lhs = qbinom(big_n - 1, r).unwrap_or_else(|_| Scalar::zero());
                if r >= 1 {
                    lhs = lhs + qbinom(big_n - 1, r - 1).unwrap();
                }
                let kr = k - HalfInt::from_int(r as i32);
                let rhs = qbinom(big_n, r).unwrap() * curly(kr) / curly(k);
                assert_eq!(lhs, rhs, "N={big_n} r={r}");
            }
        }
    }

    #[test]
    fn identity_reports_pass() {
        let r = qdim_identities(8, 3);
        assert!(r.all_pass(), "{:?}", r.failures().collect::<Vec<_>>());
        assert!(bratteli_conservation(2, 3).all_pass());
    }

    #[test]
    fn json_and_dot_exports() {
        let d = bratteli(&rd(Family::B, 1), 3);
        let v: serde_json::Value = serde_json::from_str(&d.to_json()).unwrap();
        assert_eq!(v["family"], "B");
        assert_eq!(v["levels"][2]["labels"][1]["label"], "(1/2)");
        assert_eq!(v["levels"][2]["labels"][1]["mult"], 2);
        let dot = d.to_dot();
        assert!(dot.contains("(3/2) ×1"));
        assert!(dot.contains("->"));
    }
}
