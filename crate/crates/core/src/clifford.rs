//! Clifford algebras at `q = 1`: products, the embedding of tensor powers,
//! the `so_l` generators `C_rs`, and the polynomials `P_m(N, x)` governing the
//! spectrum of `C = ½ Σ e_i ⊗ e_i`.
//!
//! Basis monomials are bitmasks: bit `i-1` set means `e_i` is a factor.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigRational, Complex};
use thiserror::Error;

use crate::field::Field;
use crate::report::{Params, VerificationReport};

/// Gaussian rationals.
pub type Gaussian = Complex<BigRational>;

/// Largest supported ambient size (bitmask width).
pub const MAX_GENERATORS: usize = 63;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CliffordError {
    #[error("ambient sizes differ: Cl({0}) vs Cl({1})")]
    AmbientMismatch(usize, usize),
    #[error("index {index} out of range 1..={max}")]
    Index { index: usize, max: usize },
    #[error("ambient size {0} exceeds the supported maximum")]
    TooLarge(usize),
    #[error("invalid parameters: {0}")]
    Domain(String),
    #[error("odd-degree element cannot be embedded for odd N")]
    OddElement,
    #[error("polynomial has non-real coefficients")]
    NonReal,
}

/// Sign of `e_A · e_B` after sorting, as a parity: true means `-1`.
///
/// Each `e_j` of `B` moves left past every `e_i` of `A` with `i > j`.
pub fn reorder_parity(a: u64, b: u64) -> bool {
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        rest &= rest - 1;
        swaps += (a >> j >> 1).count_ones();
    }
    swaps % 2 == 1
}

/// Indices (1-based) of a monomial mask.
pub fn mask_indices(mask: u64) -> Vec<usize> {
    (0..64).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect()
}

/// An element of `Cl(M)` with coefficients in `F`.
#[derive(Clone, PartialEq)]
pub struct CliffordElement<F = BigRational> {
    dim: usize,
    terms: BTreeMap<u64, F>,
}

impl<F: Field> CliffordElement<F> {
    pub fn zero(dim: usize) -> Self {
        assert!(dim <= MAX_GENERATORS, "Cl({dim}) too large");
        CliffordElement { dim, terms: BTreeMap::new() }
    }

    pub fn scalar(c: F, dim: usize) -> Self {
        Self::from_terms(dim, [(0, c)])
    }

    pub fn one(dim: usize) -> Self {
        Self::scalar(F::one(), dim)
    }

    /// `e_i` (1-based).
    pub fn generator(i: usize, dim: usize) -> Result<Self, CliffordError> {
        Self::monomial(&[i], dim)
    }

    /// The product `e_{i_1} e_{i_2} ⋯` in the given order (indices may repeat).
    pub fn monomial(indices: &[usize], dim: usize) -> Result<Self, CliffordError> {
        if dim > MAX_GENERATORS {
            return Err(CliffordError::TooLarge(dim));
        }
        let mut mask = 0u64;
        let mut neg = false;
        for &i in indices {
            if i == 0 || i > dim {
                return Err(CliffordError::Index { index: i, max: dim });
            }
            let b = 1u64 << (i - 1);
            neg ^= reorder_parity(mask, b);
            mask ^= b;
        }
        let c = if neg { F::one().neg() } else { F::one() };
        Ok(Self::from_terms(dim, [(mask, c)]))
    }

    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (u64, F)>) -> Self {
        let mut out = Self::zero(dim);
        for (m, c) in terms {
            out.add_term(m, c);
        }
        out
    }

    fn add_term(&mut self, mask: u64, c: F) {
        debug_assert!(self.dim == 64 || mask >> self.dim == 0);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&mask) {
            Some(x) => {
                *x = x.add(&c);
                if x.is_zero() {
                    self.terms.remove(&mask);
                }
            }
            None => {
                self.terms.insert(mask, c);
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &F)> {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn coefficient(&self, mask: u64) -> F {
        self.terms.get(&mask).cloned().unwrap_or_else(F::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when every term has even degree.
    pub fn is_even(&self) -> bool {
        self.terms.keys().all(|m| m.count_ones() % 2 == 0)
    }

    fn check(&self, o: &Self) -> Result<(), CliffordError> {
        if self.dim != o.dim {
            return Err(CliffordError::AmbientMismatch(self.dim, o.dim));
        }
        Ok(())
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self, CliffordError> {
        self.check(o)?;
        let mut out = Self::zero(self.dim);
        for (&a, x) in &self.terms {
            for (&b, y) in &o.terms {
                let p = x.mul(y);
                let p = if reorder_parity(a, b) { p.neg() } else { p };
                out.add_term(a ^ b, p);
            }
        }
        Ok(out)
    }

    pub fn try_add(&self, o: &Self) -> Result<Self, CliffordError> {
        self.check(o)?;
        let mut out = self.clone();
        for (&m, c) in &o.terms {
            out.add_term(m, c.clone());
        }
        Ok(out)
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.try_mul(o).expect("Clifford product")
    }

    pub fn add(&self, o: &Self) -> Self {
        self.try_add(o).expect("Clifford sum")
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&F::one().neg())
    }

    pub fn scale(&self, c: &F) -> Self {
        let mut out = Self::zero(self.dim);
        for (&m, x) in &self.terms {
            out.add_term(m, x.mul(c));
        }
        out
    }

    pub fn commutator(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(self.dim), |acc, _| acc.mul(self))
    }

    /// Reinterprets the element in a larger ambient algebra.
    pub fn widen(&self, dim: usize) -> Self {
        assert!(dim >= self.dim);
        CliffordElement { dim, terms: self.terms.clone() }
    }

    /// Some monomial where `self` and `o` differ.
    pub fn first_difference(&self, o: &Self) -> Option<u64> {
        let d = self.sub(o);
        d.terms.keys().next().copied()
    }
}

impl<F: Field + fmt::Display> fmt::Display for CliffordElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                if *m == 0 {
                    format!("{c}")
                } else {
                    let name: Vec<String> = mask_indices(*m).iter().map(|i| format!("e{i}")).collect();
                    format!("{c}*{}", name.join(""))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<F: Field> fmt::Debug for CliffordElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cl({})[", self.dim)?;
        for (m, c) in &self.terms {
            write!(f, " {c:?}*{:?}", mask_indices(*m))?;
        }
        write!(f, " ]")
    }
}

fn monomial_name(mask: u64) -> String {
    if mask == 0 {
        return "1".into();
    }
    mask_indices(mask).iter().map(|i| format!("e{i}")).collect()
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// `f_m = e_1 e_2 ⋯ e_m` in `Cl(M)`.
pub fn volume_element(m: usize, dim: usize) -> Result<CliffordElement, CliffordError> {
    if m > dim {
        return Err(CliffordError::Domain(format!("f_{m} needs m <= {dim}")));
    }
    let idx: Vec<usize> = (1..=m).collect();
    CliffordElement::monomial(&idx, dim)
}

/// Image of `e_i` placed in tensor slot `j` under the embedding into `Cl(N·l)`.
fn phi_generator(j: usize, i: usize, n: usize, l: usize) -> Result<CliffordElement, CliffordError> {
    let m = if j % 2 == 1 { (j - 1) * n } else { j * n };
    let f = volume_element(m, n * l)?;
    Ok(f.mul(&CliffordElement::generator((j - 1) * n + i, n * l)?))
}

/// Embeds `x ∈ Cl(N)`, placed in tensor slot `j` of `Cl(N)^{⊗l}`, into `Cl(N·l)`.
///
/// Generators map to `f_{(j-1)N} e_{(j-1)N+i}` (j odd) or `f_{jN} e_{(j-1)N+i}`
/// (j even); monomials map to the ordered product of their generators'
/// images. For odd `N` only even elements are accepted.
///
/// On even slots the generator images square to `-1`, so this map is
/// multiplicative only on monomials written in increasing order (and on
/// products of distinct generators); in slot 1 it is the identity embedding.
pub fn phi_embed(j: usize, x: &CliffordElement, n: usize, l: usize) -> Result<CliffordElement, CliffordError> {
    if x.dim() != n {
        return Err(CliffordError::AmbientMismatch(x.dim(), n));
    }
    if j == 0 || j > l {
        return Err(CliffordError::Index { index: j, max: l });
    }
    if n * l > MAX_GENERATORS {
        return Err(CliffordError::TooLarge(n * l));
    }
    if n % 2 == 1 && !x.is_even() {
        return Err(CliffordError::OddElement);
    }
    let gens: Vec<CliffordElement> = (1..=n).map(|i| phi_generator(j, i, n, l)).collect::<Result<_, _>>()?;
    let mut out = CliffordElement::zero(n * l);
    for (mask, c) in x.terms() {
        let mut img = CliffordElement::one(n * l);
        for i in mask_indices(mask) {
            img = img.mul(&gens[i - 1]);
        }
        out = out.add(&img.scale(c));
    }
    Ok(out)
}

/// `C_rs = ½ Σ_i e_{(r-1)N+i} e_{(s-1)N+i}` in `Cl(N·l)`, with the sum
/// running to `N-1` when `primed`.
pub fn c_rs(n: usize, l: usize, r: usize, s: usize, primed: bool) -> Result<CliffordElement, CliffordError> {
    if !(1 <= r && r < s && s <= l) {
        return Err(CliffordError::Domain(format!("C_rs needs 1 <= r < s <= l, got r={r}, s={s}, l={l}")));
    }
    c_rs_signed(n, l, r, s, primed)
}

/// `C_rs` for any `r ≠ s`, extended by `C_sr = -C_rs`.
fn c_rs_signed(n: usize, l: usize, r: usize, s: usize, primed: bool) -> Result<CliffordElement, CliffordError> {
    if n == 0 || r == s || r == 0 || s == 0 || r > l || s > l || (primed && n < 2) {
        return Err(CliffordError::Domain(format!("C_rs with N={n}, l={l}, r={r}, s={s}, primed={primed}")));
    }
    if n * l > MAX_GENERATORS {
        return Err(CliffordError::TooLarge(n * l));
    }
    let top = if primed { n - 1 } else { n };
    let half = BigRational::new(1.into(), 2.into());
    let mut out = CliffordElement::zero(n * l);
    for i in 1..=top {
        let m = CliffordElement::monomial(&[(r - 1) * n + i, (s - 1) * n + i], n * l)?;
        out = out.add(&m.scale(&half));
    }
    Ok(out)
}

/// Checks the `so_l` commutation relations of the `C_rs` (or `C'_rs`):
/// `[C_rs, C_pq] = 0` for disjoint pairs and `[C_rs, C_sq] = C_rq`.
pub fn verify_so_relations(n: usize, l: usize, primed: bool) -> VerificationReport {
    let tag = if primed { "C'" } else { "C" };
    let mut rep = VerificationReport::new(
        "clifford-so",
        Params { q: "1".into(), n: Some(n), ..Default::default() },
    );
    if n == 0 || l < 3 || (primed && n < 2) || n * l > MAX_GENERATORS {
        rep.check(format!("parameters N={n}, l={l}"), false, || "N >= 1 (>= 2 if primed), l >= 3".into());
        return rep;
    }
    let mut c: BTreeMap<(usize, usize), CliffordElement> = BTreeMap::new();
    for r in 1..=l {
        for s in 1..=l {
            if r != s {
                c.insert((r, s), c_rs_signed(n, l, r, s, primed).unwrap());
            }
        }
    }
    for r in 1..=l {
        for s in r + 1..=l {
            for p in 1..=l {
                for q in p + 1..=l {
                    if [r, s].contains(&p) || [r, s].contains(&q) || (p, q) <= (r, s) {
                        continue;
                    }
                    let k = c[&(r, s)].commutator(&c[&(p, q)]);
                    rep.check(format!("[{tag}{r}{s}, {tag}{p}{q}] = 0"), k.is_zero(), || {
                        format!("monomial {}", monomial_name(k.first_difference(&CliffordElement::zero(n * l)).unwrap()))
                    });
                }
            }
        }
    }
    for r in 1..=l {
        for s in 1..=l {
            for q in 1..=l {
                if r == s || s == q || r == q {
                    continue;
                }
                let lhs = c[&(r, s)].commutator(&c[&(s, q)]);
                let rhs = &c[&(r, q)];
                rep.check(format!("[{tag}{r}{s}, {tag}{s}{q}] = {tag}{r}{q}"), lhs == *rhs, || {
                    format!("monomial {}", monomial_name(lhs.first_difference(rhs).unwrap()))
                });
            }
        }
    }
    rep
}

/// Dense polynomial over the Gaussian rationals, lowest degree first.
#[derive(Clone, PartialEq, Debug)]
pub struct IntPolynomial {
    coeffs: Vec<Gaussian>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<Gaussian>) -> Self {
        while coeffs.last().is_some_and(Field::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: Gaussian) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Self::new(vec![Gaussian::zero(), Gaussian::one()])
    }

    pub fn coeffs(&self) -> &[Gaussian] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = Gaussian::zero();
        Self::new(
            (0..n)
                .map(|i| Field::add(self.coeffs.get(i).unwrap_or(&z), o.coeffs.get(i).unwrap_or(&z)))
                .collect(),
        )
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.coeffs.is_empty() || o.coeffs.is_empty() {
            return Self::zero();
        }
        let mut out = vec![Gaussian::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = Field::add(&out[i + j], &Field::mul(a, b));
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, c: &Gaussian) -> Self {
        Self::new(self.coeffs.iter().map(|x| Field::mul(x, c)).collect())
    }

    /// `∏ (x - r)`.
    pub fn from_roots(roots: &[Gaussian]) -> Self {
        roots.iter().fold(Self::constant(Gaussian::one()), |acc, r| {
            acc.mul(&Self::new(vec![Field::neg(r), Gaussian::one()]))
        })
    }

    pub fn eval(&self, x: &Gaussian) -> Gaussian {
        self.coeffs.iter().rev().fold(Gaussian::zero(), |acc, c| Field::add(&Field::mul(&acc, x), c))
    }

    /// Evaluates at a Clifford element (coefficients must be real).
    pub fn eval_clifford(&self, x: &CliffordElement) -> Result<CliffordElement, CliffordError> {
        let dim = x.dim();
        let mut acc = CliffordElement::zero(dim);
        for c in self.coeffs.iter().rev() {
            if !c.im.is_zero() {
                return Err(CliffordError::NonReal);
            }
            acc = acc.mul(x).add(&CliffordElement::scalar(c.re.clone(), dim));
        }
        Ok(acc)
    }
}

/// `P_m(N, x)`: `P_0 = 1`, `P_1 = x`, `P_{m+1} = x P_m + m(N+1-m) P_{m-1}`.
pub fn p_poly(n: usize, m: usize) -> IntPolynomial {
    let mut prev = IntPolynomial::constant(Gaussian::one());
    if m == 0 {
        return prev;
    }
    let mut cur = IntPolynomial::x();
    for j in 1..m {
        let c = (j as i64) * (n as i64 + 1 - j as i64);
        let next = IntPolynomial::x().mul(&cur).add(&prev.scale(&gauss(c, 0)));
        prev = cur;
        cur = next;
    }
    cur
}

fn gauss(re: i64, im: i64) -> Gaussian {
    Complex::new(rat(re), rat(im))
}

fn factorial(n: usize) -> BigRational {
    (1..=n as i64).fold(BigRational::one(), |a, i| a * rat(i))
}

fn subsets(n: usize, m: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for i in start..=n {
            cur.push(i);
            go(i + 1, n, m, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, n, m, &mut Vec::new(), &mut out);
    out
}

/// `C̃_m = m! Σ_{i_1<⋯<i_m} y_{i_1}⋯y_{i_m}` in `Cl(2N)`, where
/// `y_i = e_i e_{N+i}` is the image of `e_i ⊗ e_i` in the graded tensor
/// square. The `y_i` commute and square to `-1`; `C̃_1 = 2 C_12`.
pub fn c_tilde(n: usize, m: usize) -> Result<CliffordElement, CliffordError> {
    if n == 0 || 2 * n > MAX_GENERATORS || m > n + 1 {
        return Err(CliffordError::Domain(format!("C~_{m} needs 0 <= m <= N+1, N = {n}")));
    }
    let dim = 2 * n;
    let mut out = CliffordElement::zero(dim);
    for set in subsets(n, m) {
        let mut t = CliffordElement::one(dim);
        for i in set {
            t = t.mul(&CliffordElement::monomial(&[i, n + i], dim)?);
        }
        out = out.add(&t);
    }
    Ok(out.scale(&factorial(m)))
}

/// Element of the ungraded tensor product `Cl(N) ⊗ Cl(N)`, where
/// `(a⊗b)(c⊗d) = ac ⊗ bd` with no Koszul sign.
#[derive(Clone, PartialEq, Debug)]
pub struct UngradedPair {
    dim: usize,
    terms: BTreeMap<(u64, u64), BigRational>,
}

impl UngradedPair {
    pub fn zero(dim: usize) -> Self {
        UngradedPair { dim, terms: BTreeMap::new() }
    }

    pub fn one(dim: usize) -> Self {
        let mut t = BTreeMap::new();
        t.insert((0, 0), BigRational::one());
        UngradedPair { dim, terms: t }
    }

    /// `e_i ⊗ e_i`.
    pub fn y(i: usize, dim: usize) -> Self {
        let b = 1u64 << (i - 1);
        let mut t = BTreeMap::new();
        t.insert((b, b), BigRational::one());
        UngradedPair { dim, terms: t }
    }

    fn add_term(&mut self, k: (u64, u64), c: BigRational) {
        let e = self.terms.entry(k).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &o.terms {
            out.add_term(*k, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = Self::zero(self.dim);
        for (k, x) in &self.terms {
            out.add_term(*k, x * c);
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero(self.dim);
        for ((a1, a2), x) in &self.terms {
            for ((b1, b2), y) in &o.terms {
                let neg = reorder_parity(*a1, *b1) ^ reorder_parity(*a2, *b2);
                let p = x * y;
                out.add_term((a1 ^ b1, a2 ^ b2), if neg { -p } else { p });
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// `C̃_m` in the ungraded tensor square, where `y_i^2 = 1`.
pub fn c_tilde_ungraded(n: usize, m: usize) -> UngradedPair {
    let mut out = UngradedPair::zero(n);
    for set in subsets(n, m) {
        let t = set.iter().fold(UngradedPair::one(n), |acc, &i| acc.mul(&UngradedPair::y(i, n)));
        out = out.add(&t);
    }
    out.scale(&factorial(m))
}

/// Matrix of `E - F` on the `(N+1)`-dimensional `sl_2` module with
/// `E e_r = (N-r+1) e_{r-1}`, `F e_r = (r+1) e_{r+1}`.
pub fn sl2_e_minus_f(n: usize) -> Vec<Vec<Gaussian>> {
    let mut m = vec![vec![Gaussian::zero(); n + 1]; n + 1];
    for r in 0..=n {
        if r >= 1 {
            m[r - 1][r] = gauss((n - r + 1) as i64, 0);
        }
        if r < n {
            m[r + 1][r] = gauss(-((r + 1) as i64), 0);
        }
    }
    m
}

fn mat_vec(m: &[Vec<Gaussian>], v: &[Gaussian]) -> Vec<Gaussian> {
    m.iter()
        .map(|row| row.iter().zip(v).fold(Gaussian::zero(), |a, (x, y)| Field::add(&a, &Field::mul(x, y))))
        .collect()
}

fn vec_mat(v: &[Gaussian], m: &[Vec<Gaussian>]) -> Vec<Gaussian> {
    (0..m[0].len())
        .map(|j| v.iter().zip(m).fold(Gaussian::zero(), |a, (x, row)| Field::add(&a, &Field::mul(x, &row[j]))))
        .collect()
}

fn scale_vec(v: &[Gaussian], c: &Gaussian) -> Vec<Gaussian> {
    v.iter().map(|x| Field::mul(x, c)).collect()
}

/// Checks the spectrum of `C̃_1 = 2C` through the polynomials `P_m`.
pub fn classical_spectrum_check(n: usize) -> VerificationReport {
    let mut rep = VerificationReport::new(
        "classical-spectrum",
        Params { q: "1".into(), n: Some(n), ..Default::default() },
    );
    if n == 0 || n > 8 {
        rep.check(format!("parameter N={n}"), false, || "1 <= N <= 8".into());
        return rep;
    }
    let c1 = c_tilde(n, 1).unwrap();
    let p = p_poly(n, n + 1);
    let val = p.eval_clifford(&c1).unwrap();
    rep.check(format!("P_{}({n}, C~1) = 0 in Cl({})", n + 1, 2 * n), val.is_zero(), || {
        format!("monomial {} survives", monomial_name(val.terms().next().unwrap().0))
    });
    let roots: Vec<Gaussian> = (0..=n).map(|r| gauss(0, n as i64 - 2 * r as i64)).collect();
    let expect = IntPolynomial::from_roots(&roots);
    rep.check(format!("P_{}({n}, x) = prod (x - (N-2r)i)", n + 1), p == expect, || {
        format!("{:?} vs {:?}", p.coeffs(), expect.coeffs())
    });
    let m = sl2_e_minus_f(n);
    let nf = factorial(n);
    for (r, lam) in roots.iter().enumerate() {
        let x: Vec<Gaussian> = (0..=n)
            .map(|s| {
                let c = factorial(n - s) / &nf;
                Field::mul(&p_poly(n, s).eval(lam), &Complex::new(c, BigRational::zero()))
            })
            .collect();
        let ok = mat_vec(&m, &x) == scale_vec(&x, lam);
        rep.check(format!("right eigenvector x(λ) for λ = {}i", n as i64 - 2 * r as i64), ok, || {
            format!("x = {x:?}")
        });
        let y: Vec<Gaussian> = (0..=n)
            .map(|s| {
                let c = factorial(s).recip();
                Field::mul(&p_poly(n, s).eval(lam), &Complex::new(c, BigRational::zero()))
            })
            .collect();
        let yl = vec_mat(&y, &m);
        let ok_minus = yl == scale_vec(&y, &Field::neg(lam));
        rep.check(format!("left eigenvector y(λ) for -λ, λ = {}i", n as i64 - 2 * r as i64), ok_minus, || {
            format!("y = {y:?}")
        });
        if !lam.is_zero() {
            let ok_lit = yl == scale_vec(&y, lam);
            rep.note(
                format!("left eigenvector y(λ) for λ itself, λ = {}i", n as i64 - 2 * r as i64),
                ok_lit,
                "y(λ) is a left eigenvector for -λ; the eigenvalue sign flips under transpose",
            );
        }
    }
    rep
}

/// Recursion for `C̃_m`, in both tensor realizations.
///
/// Graded (inside `Cl(2N)`, `y_i^2 = -1`): `C̃_1 C̃_m = C̃_{m+1} - m(N+1-m) C̃_{m-1}`
/// and `C̃_m = P_m(N, C̃_1)`. Ungraded (`y_i^2 = 1`):
/// `C̃_1 C̃_m = C̃_{m+1} + m(N+1-m) C̃_{m-1}`.
pub fn recursion_check(n: usize) -> VerificationReport {
    let mut rep = VerificationReport::new(
        "clifford-recursion",
        Params { q: "1".into(), n: Some(n), ..Default::default() },
    );
    let c: Vec<CliffordElement> = (0..=n + 1).map(|m| c_tilde(n, m).unwrap()).collect();
    let u: Vec<UngradedPair> = (0..=n + 1).map(|m| c_tilde_ungraded(n, m)).collect();
    rep.check(format!("C~_{} = 0", n + 1), c[n + 1].is_zero(), || "nonzero".into());
    rep.check(format!("C~_1 = 2 C_12 (N={n})"), c[1] == c_rs(n, 2, 1, 2, false).unwrap().scale(&rat(2)), || {
        "C~_1 differs from 2 C_12".into()
    });
    for m in 1..=n {
        let coef = rat((m * (n + 1 - m)) as i64);
        let lhs = c[1].mul(&c[m]);
        let graded = c[m + 1].sub(&c[m - 1].scale(&coef));
        rep.check(format!("graded: C~1 C~{m} = C~{} - {coef} C~{}", m + 1, m - 1), lhs == graded, || {
            format!("monomial {}", monomial_name(lhs.first_difference(&graded).unwrap()))
        });
        let literal = c[m + 1].add(&c[m - 1].scale(&coef));
        rep.note(
            format!("graded: C~1 C~{m} = C~{} + {coef} C~{}", m + 1, m - 1),
            lhs == literal,
            "with y_i^2 = -1 the lower term enters with a minus sign",
        );
        let ul = u[1].mul(&u[m]);
        let ur = u[m + 1].add(&u[m - 1].scale(&coef));
        rep.check(format!("ungraded: C~1 C~{m} = C~{} + {coef} C~{}", m + 1, m - 1), ul == ur, || {
            "ungraded recursion differs".into()
        });
    }
    for m in 0..=n {
        let pm = p_poly(n, m).eval_clifford(&c[1]).unwrap();
        rep.check(format!("C~_{m} = P_{m}(N, C~_1)"), pm == c[m], || {
            format!("monomial {}", monomial_name(pm.first_difference(&c[m]).unwrap()))
        });
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type Cl = CliffordElement;

    fn e(i: usize, m: usize) -> Cl {
        Cl::generator(i, m).unwrap()
    }

    fn mono(ix: &[usize], m: usize) -> Cl {
        Cl::monomial(ix, m).unwrap()
    }

    /// Independent oracle: bubble sort the index word, cancelling equal pairs.
    fn bubble_sign(word: &[usize]) -> (i32, Vec<usize>) {
        let mut w = word.to_vec();
        let mut sign = 1;
        loop {
            let mut changed = false;
            let mut i = 0;
            while i + 1 < w.len() {
                if w[i] == w[i + 1] {
                    w.drain(i..i + 2);
                    changed = true;
                } else if w[i] > w[i + 1] {
                    w.swap(i, i + 1);
                    sign = -sign;
                    changed = true;
                    i += 1;
                } else {
                    i += 1;
                }
            }
            if !changed {
                return (sign, w);
            }
        }
    }

    #[test]
    fn product_examples() {
        assert_eq!(e(1, 3).mul(&e(1, 3)), Cl::one(3));
        assert_eq!(e(2, 3).mul(&e(1, 3)), mono(&[1, 2], 3).neg());
        assert_eq!(mono(&[1, 2], 3).mul(&mono(&[2, 3], 3)), mono(&[1, 3], 3));
        assert!(e(1, 2).try_mul(&e(1, 3)).is_err());
    }

    #[test]
    fn volume_element_examples() {
        let f2 = volume_element(2, 3).unwrap();
        assert!(f2.commutator(&e(3, 3)).is_zero());
        let f1 = volume_element(1, 3).unwrap();
        assert!(f1.commutator(&e(1, 3)).is_zero());
        let f3 = volume_element(3, 3).unwrap();
        assert_eq!(f3.mul(&f3), Cl::one(3).neg());
        assert!(volume_element(4, 3).is_err());
    }

    #[test]
    fn volume_element_commutation_rule() {
        for m in 0..=6 {
            let f = volume_element(m, 6).unwrap();
            for i in 1..=6 {
                let sign = if i > m { (-1i64).pow(m as u32) } else { -(-1i64).pow(m as u32) };
                assert_eq!(f.mul(&e(i, 6)), e(i, 6).mul(&f).scale(&rat(sign)), "m={m} i={i}");
            }
            let sq = if (m * m.saturating_sub(1) / 2) % 2 == 0 { 1 } else { -1 };
            assert_eq!(f.mul(&f), Cl::one(6).scale(&rat(sq)));
        }
    }

    #[test]
    fn phi_examples() {
        for i in 1..=2 {
            assert_eq!(phi_embed(1, &e(i, 2), 2, 2).unwrap(), e(i, 4));
        }
        assert_eq!(phi_embed(2, &e(1, 2), 2, 2).unwrap(), mono(&[1, 2, 4], 4).neg());
        assert!(phi_embed(3, &e(1, 2), 2, 2).is_err());
        assert!(phi_embed(1, &e(1, 3), 3, 2).is_err());
    }

    #[test]
    fn phi_volume_clause() {
        for n in [2usize, 4] {
            let fnn = volume_element(n, n).unwrap();
            let lhs = phi_embed(1, &fnn, n, 2).unwrap().mul(&phi_embed(2, &fnn, n, 2).unwrap());
            let sign = if (n * (n - 1) / 2) % 2 == 0 { 1 } else { -1 };
            assert_eq!(lhs, volume_element(2 * n, 2 * n).unwrap().scale(&rat(sign)), "N={n}");
        }
    }

    #[test]
    fn phi_odd_n_even_elements() {
        let n = 3;
        for j in 1..=2 {
            for r in 1..=n {
                for s in r + 1..=n {
                    let img = phi_embed(j, &mono(&[r, s], n), n, 2).unwrap();
                    assert_eq!(img, mono(&[(j - 1) * n + r, (j - 1) * n + s], 2 * n), "j={j} r={r} s={s}");
                }
            }
        }
    }

    #[test]
    fn phi_slot_structure() {
        for n in [2usize, 4] {
            let l = 3;
            for j in 1..=l {
                for a in 1..=n {
                    let ga = phi_embed(j, &e(a, n), n, l).unwrap();
                    // even slots square to -1, odd slots to +1
                    let sq = if j % 2 == 0 { -1 } else { 1 };
                    assert_eq!(ga.mul(&ga), Cl::one(n * l).scale(&rat(sq)), "N={n} j={j}");
                    for b in a + 1..=n {
                        let gb = phi_embed(j, &e(b, n), n, l).unwrap();
                        assert!(ga.mul(&gb).add(&gb.mul(&ga)).is_zero());
                        // ordered monomials are multiplicative
                        assert_eq!(phi_embed(j, &mono(&[a, b], n), n, l).unwrap(), ga.mul(&gb));
                    }
                    for j2 in j + 1..=l {
                        for b in 1..=n {
                            let gb = phi_embed(j2, &e(b, n), n, l).unwrap();
                            assert!(ga.commutator(&gb).is_zero(), "N={n} slots {j},{j2}");
                        }
                    }
                }
            }
            // slot 1 is an honest algebra map
            let x = mono(&[1, 2], n).add(&e(1, n));
            let y = e(2, n).add(&Cl::one(n));
            let lhs = phi_embed(1, &x, n, l).unwrap().mul(&phi_embed(1, &y, n, l).unwrap());
            assert_eq!(lhs, phi_embed(1, &x.mul(&y), n, l).unwrap());
        }
    }

    #[test]
    fn phi_tensor_of_generators() {
        // Φ(e1⊗1)·Φ(1⊗e1) is the image of e1⊗e1 and equals -f_4 · e1 e3
        let n = 2;
        let a = phi_embed(1, &e(1, n), n, 2).unwrap();
        let b = phi_embed(2, &e(1, n), n, 2).unwrap();
        let f4 = volume_element(4, 4).unwrap();
        assert_eq!(a.mul(&b), f4.mul(&mono(&[1, 3], 4)).neg());
    }

    #[test]
    fn c_rs_examples() {
        let c12 = c_rs(2, 2, 1, 2, false).unwrap();
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(c12, mono(&[1, 3], 4).add(&mono(&[2, 4], 4)).scale(&half));
        let a = c_rs(2, 4, 1, 2, false).unwrap();
        let b = c_rs(2, 4, 3, 4, false).unwrap();
        assert!(a.commutator(&b).is_zero());
        let a = c_rs(2, 3, 1, 2, false).unwrap();
        let b = c_rs(2, 3, 2, 3, false).unwrap();
        assert_eq!(a.commutator(&b), c_rs(2, 3, 1, 3, false).unwrap());
        assert!(c_rs(2, 3, 2, 1, false).is_err());
        assert!(c_rs(1, 3, 1, 2, true).is_err());
    }

    #[test]
    fn so_relations_small() {
        assert!(verify_so_relations(2, 3, false).all_pass());
        assert!(verify_so_relations(3, 3, true).all_pass());
        assert!(verify_so_relations(1, 3, false).all_pass());
        assert!(!verify_so_relations(1, 2, false).all_pass());
    }

    #[test]
    fn p_poly_examples() {
        assert_eq!(p_poly(3, 0), IntPolynomial::constant(gauss(1, 0)));
        for n in 0..5 {
            assert_eq!(p_poly(n, 2), IntPolynomial::new(vec![gauss(n as i64, 0), gauss(0, 0), gauss(1, 0)]));
        }
        for n in 1..=6 {
            let roots: Vec<Gaussian> = (0..=n).map(|r| gauss(0, n as i64 - 2 * r as i64)).collect();
            assert_eq!(p_poly(n, n + 1), IntPolynomial::from_roots(&roots));
        }
    }

    #[test]
    fn c_tilde_examples() {
        for n in 1..=4 {
            assert_eq!(c_tilde(n, 1).unwrap(), c_rs(n, 2, 1, 2, false).unwrap().scale(&rat(2)));
            assert!(c_tilde(n, n + 1).unwrap().is_zero());
            assert!(recursion_check(n).all_pass(), "N={n}");
        }
        let c1 = c_tilde(1, 1).unwrap();
        assert!(c1.mul(&c1).add(&Cl::one(2)).is_zero());
    }

    #[test]
    fn literal_recursion_sign_only_holds_ungraded() {
        let rep = recursion_check(3);
        assert!(rep.notes.iter().all(|c| !c.pass));
    }

    #[test]
    fn classical_spectrum_small() {
        for n in 1..=4 {
            assert!(classical_spectrum_check(n).all_pass(), "N={n}");
        }
        let m = sl2_e_minus_f(2);
        let x = vec![gauss(1, 0), gauss(0, 1), gauss(-1, 0)];
        assert_eq!(mat_vec(&m, &x), scale_vec(&x, &gauss(0, 2)));
    }

    proptest! {
        #[test]
        fn sign_matches_bubble_oracle(word in prop::collection::vec(1usize..=8, 0..10)) {
            let (sign, sorted) = bubble_sign(&word);
            let expect = if sorted.is_empty() { Cl::one(8) } else { mono(&sorted, 8) }.scale(&rat(sign as i64));
            let got = word.iter().fold(Cl::one(8), |acc, &i| acc.mul(&e(i, 8)));
            prop_assert_eq!(got, expect);
        }

        #[test]
        fn anticommutation(i in 1usize..=8, j in 1usize..=8) {
            let s = e(i, 8).mul(&e(j, 8)).add(&e(j, 8).mul(&e(i, 8)));
            let expect = if i == j { Cl::one(8).scale(&rat(2)) } else { Cl::zero(8) };
            prop_assert_eq!(s, expect);
        }

        #[test]
        fn associativity(a in 0u64..256, b in 0u64..256, c in 0u64..256) {
            let m = |x: u64| Cl::from_terms(8, [(x, BigRational::one())]);
            prop_assert_eq!(m(a).mul(&m(b)).mul(&m(c)), m(a).mul(&m(b).mul(&m(c))));
        }
    }
}
