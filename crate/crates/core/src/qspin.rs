//! Generators of `U_q so_N` and the involution `t` on the spinor module `S`
//! (type D) or the doubled module `S̃` (type B), and their tensor powers.
//!
//! Basis vectors are [`SpinWeight`] sign vectors in the order of
//! [`SpinWeight::all`]. For type B the module has `k+1` coordinates; the
//! weight is read off the first `k`, and `E_k`, `F_k` flip coordinates `k`
//! and `k+1` together (the Clifford model of the odd spin module).
//! All nonzero `E`/`F` coefficients are 1.

use std::fmt;

use thiserror::Error;

use crate::field::Field;
use crate::linalg::SparseMat;
use crate::report::{Params, VerificationReport};
use crate::scalar::{HalfInt, Scalar};
use crate::weights::{Family, RootData, SpinWeight, Weight};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QspinError {
    #[error("generator {0} does not exist for rank {1}")]
    UnknownGenerator(Generator, usize),
    #[error("tensor power must be at least 1")]
    EmptyTensor,
    #[error("the doubled module is for type B, the plain spinor module for type D")]
    ModuleFamily,
}

/// A generator id; indices are 0-based over the simple roots.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    E(usize),
    F(usize),
    K(usize),
    KInv(usize),
    KHalf(usize),
    KHalfInv(usize),
    T,
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::E(i) => write!(f, "E{}", i + 1),
            Generator::F(i) => write!(f, "F{}", i + 1),
            Generator::K(i) => write!(f, "K{}", i + 1),
            Generator::KInv(i) => write!(f, "K{}^-1", i + 1),
            Generator::KHalf(i) => write!(f, "K{}^(1/2)", i + 1),
            Generator::KHalfInv(i) => write!(f, "K{}^(-1/2)", i + 1),
            Generator::T => write!(f, "t"),
        }
    }
}

impl Generator {
    /// Generators that act slotwise multiplicatively on tensor powers.
    pub fn is_grouplike(self) -> bool {
        !matches!(self, Generator::E(_) | Generator::F(_))
    }

    fn index(self) -> Option<usize> {
        match self {
            Generator::E(i)
            | Generator::F(i)
            | Generator::K(i)
            | Generator::KInv(i)
            | Generator::KHalf(i)
            | Generator::KHalfInv(i) => Some(i),
            Generator::T => None,
        }
    }
}

/// Generator matrices on one copy of the spin module.
#[derive(Clone, Debug)]
pub struct GeneratorAction {
    rd: RootData,
    odd_doubled: bool,
    basis: Vec<SpinWeight>,
    e: Vec<SparseMat<Scalar>>,
    f: Vec<SparseMat<Scalar>>,
    /// `v`-exponents of `K_i^{1/2}` per basis vector (`v = q^{1/4}`).
    k_half_exp: Vec<Vec<i32>>,
    t: SparseMat<Scalar>,
}

/// Builds the spin module: `S` for type D, `S̃` for type B (`odd_doubled`).
pub fn spin_rep(rd: &RootData, odd_doubled: bool) -> Result<GeneratorAction, QspinError> {
    if odd_doubled != (rd.family == Family::B) {
        return Err(QspinError::ModuleFamily);
    }
    let k = rd.rank;
    let len = if odd_doubled { k + 1 } else { k };
    let basis = SpinWeight::all(len);
    let dim = basis.len();
    let mut e = Vec::new();
    let mut k_half_exp = Vec::new();
    for (i, alpha) in rd.simple_roots.iter().enumerate() {
        let mut trips = Vec::new();
        for (c, b) in basis.iter().enumerate() {
            let target = b.weight(k).add(alpha);
            if !target.0.iter().all(|x| x.abs() == HalfInt::HALF) {
                continue;
            }
            let mut img = SpinWeight(target.0.iter().map(|x| *x > HalfInt::ZERO).collect());
            if odd_doubled {
                let last = if i == k - 1 { !b.0[k] } else { b.0[k] };
                img.0.push(last);
            }
            trips.push((img.index(), c, Scalar::one()));
        }
        e.push(SparseMat::from_triplets(dim, dim, trips));
        k_half_exp.push(basis.iter().map(|b| b.weight(k).dot4(alpha) / 2).collect());
    }
    let f = e.iter().map(|m| m.transpose()).collect();
    let t = SparseMat::from_triplets(dim, dim, basis.iter().enumerate().map(|(c, b)| (b.bar().index(), c, Scalar::one())));
    Ok(GeneratorAction { rd: rd.clone(), odd_doubled, basis, e, f, k_half_exp, t })
}

fn diag_v(exps: &[i32], sign: i32) -> SparseMat<Scalar> {
    SparseMat::diagonal(exps.iter().map(|&x| Scalar::v_pow(sign * x)).collect())
}

/// `m_1 ⊗ m_2 ⊗ ...`, first factor the slowest index.
pub fn kron_chain<F: Field>(factors: &[&SparseMat<F>]) -> SparseMat<F> {
    let mut acc = SparseMat::identity(1);
    for m in factors {
        acc = acc.kron(m);
    }
    acc
}

/// `1^{⊗i} ⊗ m ⊗ 1^{⊗(n-i-w)}` where `m` acts on `w` consecutive slots.
pub fn embed_slots<F: Field>(m: &SparseMat<F>, d: usize, w: usize, i: usize, n: usize) -> SparseMat<F> {
    assert!(i + w <= n);
    let left = SparseMat::identity(d.pow(i as u32));
    let right = SparseMat::identity(d.pow((n - i - w) as u32));
    left.kron(m).kron(&right)
}

impl GeneratorAction {
    pub fn root_data(&self) -> &RootData {
        &self.rd
    }

    pub fn rank(&self) -> usize {
        self.rd.rank
    }

    pub fn is_odd(&self) -> bool {
        self.odd_doubled
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[SpinWeight] {
        &self.basis
    }

    /// The `U_q so_N` weight of basis vector `i`.
    pub fn weight(&self, i: usize) -> Weight {
        self.basis[i].weight(self.rd.rank)
    }

    pub fn num_simple(&self) -> usize {
        self.e.len()
    }

    /// All generator ids: `E_i`, `F_i`, `K_i` and, for type D, `t`.
    pub fn generators(&self) -> Vec<Generator> {
        let r = self.num_simple();
        let mut g: Vec<Generator> = (0..r).map(Generator::E).collect();
        g.extend((0..r).map(Generator::F));
        g.extend((0..r).map(Generator::K));
        if !self.odd_doubled {
            g.push(Generator::T);
        }
        g
    }

    /// The single-slot matrix of a generator.
    pub fn generator(&self, g: Generator) -> Result<SparseMat<Scalar>, QspinError> {
        if let Some(i) = g.index() {
            if i >= self.num_simple() {
                return Err(QspinError::UnknownGenerator(g, self.rd.rank));
            }
        }
        Ok(match g {
            Generator::E(i) => self.e[i].clone(),
            Generator::F(i) => self.f[i].clone(),
            Generator::K(i) => diag_v(&self.k_half_exp[i], 2),
            Generator::KInv(i) => diag_v(&self.k_half_exp[i], -2),
            Generator::KHalf(i) => diag_v(&self.k_half_exp[i], 1),
            Generator::KHalfInv(i) => diag_v(&self.k_half_exp[i], -1),
            Generator::T => self.t.clone(),
        })
    }

    /// The generator on `n` tensor factors under
    /// `Δ(X) = K^{1/2} ⊗ X + X ⊗ K^{-1/2}` for `X = E_i, F_i`; group-like
    /// generators and `t` act slotwise.
    pub fn tensor_action(&self, g: Generator, n: usize) -> Result<SparseMat<Scalar>, QspinError> {
        if n == 0 {
            return Err(QspinError::EmptyTensor);
        }
        let x = self.generator(g)?;
        if g.is_grouplike() {
            return Ok(kron_chain(&vec![&x; n]));
        }
        let i = g.index().expect("E/F carry an index");
        let kh = self.generator(Generator::KHalf(i))?;
        let khi = self.generator(Generator::KHalfInv(i))?;
        Ok(self.slot_sum(&kh, &x, &khi, n))
    }

    /// The generator under the standard coproduct
    /// `Δ'(E) = K ⊗ E + E ⊗ 1`, `Δ'(F) = 1 ⊗ F + F ⊗ K^{-1}`.
    ///
    /// `Δ'(E_i) = q^{⟨α_i,α_i⟩/4} Δ(E_i) Δ(K_i^{1/2})`, so the generated algebra
    /// agrees with that of [`tensor_action`](Self::tensor_action) while only
    /// integer powers of `q^{1/2}` appear.
    pub fn standard_tensor_action(&self, g: Generator, n: usize) -> Result<SparseMat<Scalar>, QspinError> {
        if n == 0 {
            return Err(QspinError::EmptyTensor);
        }
        let x = self.generator(g)?;
        let id = SparseMat::identity(self.dim());
        match g {
            Generator::E(i) => Ok(self.slot_sum(&self.generator(Generator::K(i))?, &x, &id, n)),
            Generator::F(i) => Ok(self.slot_sum(&id, &x, &self.generator(Generator::KInv(i))?, n)),
            _ => Ok(kron_chain(&vec![&x; n])),
        }
    }

    /// `Σ_s left^{⊗s} ⊗ x ⊗ right^{⊗(n-1-s)}`.
    fn slot_sum(&self, left: &SparseMat<Scalar>, x: &SparseMat<Scalar>, right: &SparseMat<Scalar>, n: usize) -> SparseMat<Scalar> {
        let mut total = SparseMat::zeros(self.dim().pow(n as u32), self.dim().pow(n as u32));
        for s in 0..n {
            let mut fs: Vec<&SparseMat<Scalar>> = vec![left; s];
            fs.push(x);
            fs.extend(std::iter::repeat_n(right, n - 1 - s));
            total = total.add(&kron_chain(&fs));
        }
        total
    }

    /// Total weights of the basis of the `n`-fold tensor power.
    pub fn tensor_weights(&self, n: usize) -> Vec<Weight> {
        let k = self.rd.rank;
        let mut out = vec![Weight::zero(k)];
        for _ in 0..n {
            out = out.iter().flat_map(|w| self.basis.iter().map(move |b| w.add(&b.weight(k)))).collect();
        }
        out
    }

    /// The diagram automorphism `σ` exchanging the last two nodes of `D_k`.
    pub fn sigma(&self, i: usize) -> usize {
        let r = self.num_simple();
        if self.rd.family == Family::D && r >= 2 && i + 2 >= r {
            2 * r - 3 - i
        } else {
            i
        }
    }

    /// `q_i = q^{⟨α_i,α_i⟩/2}` as a `v`-exponent.
    fn qi_exp(&self, i: usize) -> i32 {
        let a = &self.rd.simple_roots[i];
        a.dot4(a) / 2
    }
}

/// `[n]_{q_i}` for `q_i = v^{e}`.
fn qint_base(n: i32, e: i32) -> Scalar {
    (Scalar::v_pow(n * e) - Scalar::v_pow(-n * e)) / (Scalar::v_pow(e) - Scalar::v_pow(-e))
}

fn qbinom_base(n: i32, r: i32, e: i32) -> Scalar {
    (0..r).fold(Scalar::one(), |acc, j| acc * qint_base(n - j, e) / qint_base(j + 1, e))
}

fn witness(m: &SparseMat<Scalar>) -> String {
    match m.first_nonzero() {
        Some((i, j, x)) => format!("entry ({i},{j}) = {x}"),
        None => String::new(),
    }
}

/// Checks the Drinfeld-Jimbo relations on the module and on `S ⊗ S`, weight
/// compatibility, the `t` relations and coassociativity of `Δ`.
pub fn verify_serre(rd: &RootData, odd_doubled: bool) -> Result<VerificationReport, QspinError> {
    let g = spin_rep(rd, odd_doubled)?;
    let parity = if odd_doubled { "odd" } else { "even" };
    let mut rep = VerificationReport::new("serre", Params::symbolic().with_k(rd.rank).with_parity(parity));
    relations_on(&g, 1, &mut rep)?;
    relations_on(&g, 2, &mut rep)?;

    let r = g.num_simple();
    for i in 0..r {
        for (name, m, sign) in [("E", &g.e[i], 1), ("F", &g.f[i], -1)] {
            let alpha = &rd.simple_roots[i];
            let bad = m.iter().find(|(row, col, _)| {
                let shift = g.weight(*row).sub(&g.weight(*col));
                shift != if sign == 1 { alpha.clone() } else { alpha.neg() }
            });
            rep.check(format!("{name}{} shifts weight by {}α{}", i + 1, if sign == 1 { "+" } else { "-" }, i + 1), bad.is_none(), || {
                let (a, b, _) = bad.unwrap();
                format!("entry ({a},{b})")
            });
        }
    }

    let t = g.generator(Generator::T)?;
    let one = SparseMat::identity(g.dim());
    rep.check("t^2 = 1", t.mul(&t) == one, || witness(&t.mul(&t).sub(&one)));
    for i in 0..r {
        let s = g.sigma(i);
        for (mk, name) in [(Generator::K as fn(usize) -> Generator, "K"), (Generator::E, "E"), (Generator::F, "F")] {
            let lhs = t.mul(&g.generator(mk(i))?).mul(&t);
            let rhs = g.generator(mk(s))?;
            rep.check(format!("t {name}{} t = {name}{}", i + 1, s + 1), lhs == rhs, || witness(&lhs.sub(&rhs)));
        }
    }

    for i in 0..r {
        for x in [Generator::E(i), Generator::F(i)] {
            let kh = g.generator(Generator::KHalf(i))?;
            let khi = g.generator(Generator::KHalfInv(i))?;
            let xm = g.generator(x)?;
            let d2 = g.tensor_action(x, 2)?;
            let left = d2.kron(&khi).add(&kh.kron(&kh).kron(&xm));
            let right = kh.kron(&d2).add(&xm.kron(&khi).kron(&khi));
            let d3 = g.tensor_action(x, 3)?;
            rep.check(format!("coassociativity of Δ({x})"), left == d3 && right == d3, || {
                if left != d3 {
                    format!("(Δ⊗1)Δ: {}", witness(&left.sub(&d3)))
                } else {
                    format!("(1⊗Δ)Δ: {}", witness(&right.sub(&d3)))
                }
            });
        }
    }
    Ok(rep)
}

fn relations_on(g: &GeneratorAction, n: usize, rep: &mut VerificationReport) -> Result<(), QspinError> {
    let r = g.num_simple();
    let rd = &g.rd;
    let at = |x| g.tensor_action(x, n);
    let tag = if n == 1 { String::new() } else { format!(" on {n} factors") };
    let e: Vec<_> = (0..r).map(|i| at(Generator::E(i))).collect::<Result<_, _>>()?;
    let f: Vec<_> = (0..r).map(|i| at(Generator::F(i))).collect::<Result<_, _>>()?;
    let kk: Vec<_> = (0..r).map(|i| at(Generator::K(i))).collect::<Result<_, _>>()?;
    let ki: Vec<_> = (0..r).map(|i| at(Generator::KInv(i))).collect::<Result<_, _>>()?;
    let d = e.first().map(|m| m.nrows()).unwrap_or(1);
    let one = SparseMat::<Scalar>::identity(d);
    for i in 0..r {
        rep.check(format!("K{0} K{0}^-1 = 1{tag}", i + 1), kk[i].mul(&ki[i]) == one, String::new);
        for j in 0..r {
            let c = Scalar::v_pow(rd.simple_roots[i].dot4(&rd.simple_roots[j]));
            for (name, x, cc) in [("E", &e[j], c.clone()), ("F", &f[j], c.inv().expect("monomial"))] {
                let lhs = kk[i].mul(x).mul(&ki[i]);
                let rhs = x.scale(&cc);
                rep.check(format!("K{} {name}{} K{}^-1 = q^(±<α{},α{}>) {name}{}{tag}", i + 1, j + 1, i + 1, i + 1, j + 1, j + 1), lhs == rhs, || {
                    witness(&lhs.sub(&rhs))
                });
            }
            let lhs = e[i].commutator(&f[j]);
            let rhs = if i == j {
                let qi = g.qi_exp(i);
                kk[i].sub(&ki[i]).scale(&(Scalar::v_pow(qi) - Scalar::v_pow(-qi)).inv().expect("nonzero"))
            } else {
                SparseMat::zeros(d, d)
            };
            rep.check(format!("[E{}, F{}]{tag}", i + 1, j + 1), lhs == rhs, || witness(&lhs.sub(&rhs)));
            if i == j {
                continue;
            }
            // a_ij = <α_i^∨, α_j>
            let a = rd.coroot(i).dot(&rd.simple_roots[j]).to_int().expect("Cartan integer");
            let m = 1 - a;
            let qi = g.qi_exp(i);
            for (name, x) in [("E", &e), ("F", &f)] {
                let mut total = SparseMat::zeros(d, d);
                for s in 0..=m {
                    let c = qbinom_base(m, s, qi);
                    let c = if s % 2 == 1 { -c } else { c };
                    let term = x[i].pow((m - s) as u32).mul(&x[j]).mul(&x[i].pow(s as u32));
                    total = total.add(&term.scale(&c));
                }
                rep.check(format!("Serre {name}{} {name}{}{tag}", i + 1, j + 1), total.is_zero(), || witness(&total));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rep(f: Family, k: usize) -> GeneratorAction {
        spin_rep(&RootData::new(f, k).unwrap(), f == Family::B).unwrap()
    }

    #[test]
    fn highest_weight_is_killed() {
        for (f, k) in [(Family::D, 2), (Family::D, 3), (Family::B, 1), (Family::B, 3)] {
            let g = rep(f, k);
            for i in 0..g.num_simple() {
                let e = g.generator(Generator::E(i)).unwrap();
                assert!(e.iter().all(|(_, c, _)| c != 0), "{f}{k} E{i}");
                assert!(e.mul(&e).is_zero());
                let f2 = g.generator(Generator::F(i)).unwrap();
                assert!(f2.mul(&f2).is_zero());
            }
        }
    }

    #[test]
    fn k_half_on_highest_weight() {
        let g = rep(Family::D, 3);
        for i in 0..2 {
            assert_eq!(g.generator(Generator::KHalf(i)).unwrap().get(0, 0), Scalar::one());
        }
        let b = rep(Family::B, 2);
        assert_eq!(b.generator(Generator::KHalf(1)).unwrap().get(0, 0), Scalar::v_pow(1));
    }

    #[test]
    fn t_flips_last_coordinate() {
        let g = rep(Family::D, 2);
        let t = g.generator(Generator::T).unwrap();
        let eps = SpinWeight(vec![true, true]);
        assert_eq!(t.get(eps.bar().index(), eps.index()), Scalar::one());
    }

    #[test]
    fn d2_tensor_has_half_powers() {
        let g = rep(Family::D, 2);
        let m = g.tensor_action(Generator::E(0), 2).unwrap();
        let exps: std::collections::BTreeSet<i32> =
            m.iter().map(|(_, _, x)| x.as_signed_monomial().unwrap().1).collect();
        assert_eq!(exps, [-2, 0, 2].into_iter().collect());
    }

    #[test]
    fn functoriality() {
        let g = rep(Family::B, 2);
        for x in [Generator::E(1), Generator::F(0)] {
            let i = match x {
                Generator::E(i) | Generator::F(i) => i,
                _ => unreachable!(),
            };
            let n3 = g.tensor_action(x, 3).unwrap();
            let rec = g
                .tensor_action(x, 2)
                .unwrap()
                .kron(&g.generator(Generator::KHalfInv(i)).unwrap())
                .add(&g.tensor_action(Generator::KHalf(i), 2).unwrap().kron(&g.generator(x).unwrap()));
            assert_eq!(n3, rec);
        }
        assert_eq!(g.tensor_action(Generator::E(0), 1).unwrap(), g.generator(Generator::E(0)).unwrap());
    }

    #[test]
    fn standard_coproduct_rescales_symmetric_one() {
        let g = rep(Family::D, 2);
        let e = g.tensor_action(Generator::E(1), 2).unwrap();
        let kh = g.tensor_action(Generator::KHalf(1), 2).unwrap();
        let std = g.standard_tensor_action(Generator::E(1), 2).unwrap();
        assert_eq!(e.mul(&kh).scale(&Scalar::q_pow_half(HalfInt::HALF)), std);
    }

    #[test]
    fn serre_all_configurations() {
        for k in 1..=3 {
            for (f, odd) in [(Family::D, false), (Family::B, true)] {
                let r = verify_serre(&RootData::new(f, k).unwrap(), odd).unwrap();
                assert!(r.all_pass(), "{f}{k}: {:?}", r.failures().collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn d2_orthogonal_nodes_commute() {
        let g = rep(Family::D, 2);
        let e1 = g.generator(Generator::E(0)).unwrap();
        let f2 = g.generator(Generator::F(1)).unwrap();
        assert!(e1.commutator(&f2).is_zero());
        assert_eq!(g.sigma(0), 1);
        assert_eq!(rep(Family::D, 3).sigma(0), 0);
    }

    #[test]
    fn errors() {
        let rd = RootData::new(Family::D, 2).unwrap();
        assert_eq!(spin_rep(&rd, true).unwrap_err(), QspinError::ModuleFamily);
        let g = spin_rep(&rd, false).unwrap();
        assert!(g.generator(Generator::E(5)).is_err());
        assert_eq!(g.tensor_action(Generator::T, 0).unwrap_err(), QspinError::EmptyTensor);
    }
}
