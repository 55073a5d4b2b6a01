//! Alternating forms and multivectors on F^m.
//!
//! An [`AltForm`] stores the nonzero coefficients of a homogeneous element
//! of the exterior algebra in the basis `e^I`, keyed by [`MultiIndex`].
//! The same type stands for multivectors (elements of `∧^j F^m`); which one
//! is meant only matters for [`AltForm::pair`]. Indices are 1-based.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::gf::{Field, FieldElement};
use crate::linalg::{det_in_place, Matrix};

/// Largest ambient dimension a [`MultiIndex`] can address.
pub const MAX_DIM: usize = 16;

/// A strictly increasing tuple of indices in `1..=16`, stored as a bitmask
/// (bit `i - 1` set for index `i`).
///
/// Ordered first by length, then lexicographically on the sorted tuple.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct MultiIndex(u16);

impl MultiIndex {
    pub const EMPTY: MultiIndex = MultiIndex(0);

    /// From 1-based, strictly increasing indices.
    pub fn new(indices: &[usize]) -> Result<MultiIndex> {
        let mut mask = 0u16;
        let mut last = 0;
        for &i in indices {
            if i == 0 || i > MAX_DIM {
                return Err(Error::BadIndex(format!("index {i} outside 1..={MAX_DIM}")));
            }
            if i <= last {
                return Err(Error::BadIndex(format!("indices {indices:?} are not strictly increasing")));
            }
            last = i;
            mask |= 1 << (i - 1);
        }
        Ok(MultiIndex(mask))
    }

    #[inline]
    pub const fn from_mask(mask: u16) -> MultiIndex {
        MultiIndex(mask)
    }

    #[inline]
    pub const fn mask(self) -> u16 {
        self.0
    }

    #[inline]
    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Largest index, 0 for the empty tuple.
    pub fn max(self) -> usize {
        16 - self.0.leading_zeros() as usize
    }

    #[inline]
    pub fn contains(self, i: usize) -> bool {
        (1..=MAX_DIM).contains(&i) && self.0 & (1 << (i - 1)) != 0
    }

    /// The 1-based indices in increasing order.
    pub fn indices(self) -> impl Iterator<Item = usize> {
        let mut m = self.0;
        std::iter::from_fn(move || {
            if m == 0 {
                None
            } else {
                let i = m.trailing_zeros() as usize;
                m &= m - 1;
                Some(i + 1)
            }
        })
    }

    /// All `l`-subsets of `1..=m` in lexicographic order.
    pub fn all(l: usize, m: usize) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(l);
        fn rec(start: usize, l: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<MultiIndex>) {
            if cur.len() == l {
                out.push(MultiIndex::new(cur).expect("increasing"));
                return;
            }
            for i in start..=m {
                if m - i + 1 < l - cur.len() {
                    break;
                }
                cur.push(i);
                rec(i + 1, l, m, cur, out);
                cur.pop();
            }
        }
        rec(1, l, m, &mut cur, &mut out);
        out
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &MultiIndex) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| {
            let diff = self.0 ^ other.0;
            if diff == 0 {
                Ordering::Equal
            } else if self.0 & diff & diff.wrapping_neg() != 0 {
                // smallest index where they differ belongs to self
                Ordering::Less
            } else {
                Ordering::Greater
            }
        })
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &MultiIndex) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx: Vec<String> = self.indices().map(|i| i.to_string()).collect();
        write!(f, "({})", idx.join(","))
    }
}

/// Sign parity of the shuffle `e^A ∧ e^B -> e^{A ∪ B}`: the number of pairs
/// `a in A, b in B` with `a > b`, mod 2.
#[inline]
pub(crate) fn shuffle_parity(a: u16, b: u16) -> bool {
    let mut parity = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        rest &= rest - 1;
        // elements of A above j
        parity ^= (a >> j >> 1).count_ones();
    }
    parity & 1 == 1
}

/// A vector in F^m.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vector {
    coords: Vec<FieldElement>,
}

impl Vector {
    pub fn new(coords: Vec<FieldElement>) -> Vector {
        Vector { coords }
    }

    pub fn zero(m: usize) -> Vector {
        Vector { coords: vec![FieldElement::ZERO; m] }
    }

    /// Standard basis vector `e_i`, 1-based.
    pub fn basis(m: usize, i: usize) -> Vector {
        let mut v = Vector::zero(m);
        v.coords[i - 1] = FieldElement::ONE;
        v
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[FieldElement] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<FieldElement> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &Vector, f: Field) -> Vector {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        Vector { coords: self.coords.iter().zip(&other.coords).map(|(&a, &b)| f.add(a, b)).collect() }
    }

    pub fn scale(&self, c: FieldElement, f: Field) -> Vector {
        Vector { coords: self.coords.iter().map(|&a| f.mul(c, a)).collect() }
    }

    /// Scales so the first nonzero coordinate is 1; the zero vector is unchanged.
    pub fn normalized(&self, f: Field) -> Vector {
        match self.coords.iter().find(|c| !c.is_zero()) {
            Some(&lead) => self.scale(f.inv(lead).expect("nonzero"), f),
            None => self.clone(),
        }
    }
}

/// A homogeneous alternating form (or multivector) of fixed grade on F^m.
#[derive(Clone, PartialEq, Eq)]
pub struct AltForm {
    field: Field,
    dim: usize,
    grade: usize,
    coeffs: BTreeMap<MultiIndex, FieldElement>,
}

/// Alias used where an [`AltForm`] stands for an element of `∧^j F^m`.
pub type Multivector = AltForm;

impl AltForm {
    pub fn zero(field: Field, dim: usize, grade: usize) -> AltForm {
        assert!(dim <= MAX_DIM, "dimension {dim} exceeds {MAX_DIM}");
        AltForm { field, dim, grade, coeffs: BTreeMap::new() }
    }

    /// The grade-0 form `c`.
    pub fn scalar(field: Field, dim: usize, c: FieldElement) -> AltForm {
        let mut a = AltForm::zero(field, dim, 0);
        a.add_term(MultiIndex::EMPTY, c);
        a
    }

    /// The basis form `e^I` for 1-based, strictly increasing `indices`.
    pub fn basis(field: Field, dim: usize, indices: &[usize]) -> Result<AltForm> {
        AltForm::from_terms(field, dim, indices.len(), [(MultiIndex::new(indices)?, FieldElement::ONE)])
    }

    /// Sums the given terms; repeated keys add up.
    pub fn from_terms<I>(field: Field, dim: usize, grade: usize, terms: I) -> Result<AltForm>
    where
        I: IntoIterator<Item = (MultiIndex, FieldElement)>,
    {
        if dim > MAX_DIM {
            return Err(Error::Unsupported(format!("dimension {dim} exceeds {MAX_DIM}")));
        }
        if grade > dim {
            return Err(Error::GradeOverflow(grade, 0, dim));
        }
        let mut a = AltForm::zero(field, dim, grade);
        for (idx, c) in terms {
            if idx.len() != grade {
                return Err(Error::GradeMismatch { expected: grade, got: idx.len() });
            }
            if idx.max() > dim {
                return Err(Error::BadIndex(format!("{idx:?} exceeds dimension {dim}")));
            }
            a.add_term(idx, c);
        }
        Ok(a)
    }

    /// Builds a form from signed basis words such as `(1, &[1, 2, 3])`, where
    /// the index list need not be sorted: `e^{561}` is `(1, &[5, 6, 1])`.
    pub fn from_words(field: Field, dim: usize, grade: usize, words: &[(i64, &[usize])]) -> Result<AltForm> {
        let mut out = AltForm::zero(field, dim, grade);
        for &(c, word) in words {
            if word.len() != grade {
                return Err(Error::GradeMismatch { expected: grade, got: word.len() });
            }
            let mut term = AltForm::scalar(field, dim, field.from_int(c));
            for &i in word {
                term = term.wedge(&AltForm::basis(field, dim, &[i])?)?;
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// The grade-1 multivector with the coordinates of `v`.
    pub fn from_vector(field: Field, v: &Vector) -> AltForm {
        let mut a = AltForm::zero(field, v.dim(), 1);
        for (i, &c) in v.coords().iter().enumerate() {
            a.add_term(MultiIndex::from_mask(1 << i), c);
        }
        a
    }

    /// `v_1 ∧ ⋯ ∧ v_j` as a multivector.
    pub fn wedge_vectors(field: Field, dim: usize, vs: &[Vector]) -> Result<AltForm> {
        let mut acc = AltForm::scalar(field, dim, FieldElement::ONE);
        for v in vs {
            if v.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: v.dim() });
            }
            acc = acc.wedge(&AltForm::from_vector(field, v))?;
        }
        Ok(acc)
    }

    pub(crate) fn add_term(&mut self, idx: MultiIndex, c: FieldElement) {
        if c.is_zero() {
            return;
        }
        let f = self.field;
        let e = self.coeffs.entry(idx).or_insert(FieldElement::ZERO);
        *e = f.add(*e, c);
        if e.is_zero() {
            self.coeffs.remove(&idx);
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Number of nonzero coefficients.
    pub fn nnz(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, idx: MultiIndex) -> FieldElement {
        self.coeffs.get(&idx).copied().unwrap_or(FieldElement::ZERO)
    }

    /// Nonzero terms in lexicographic order of their index tuples.
    pub fn terms(&self) -> impl Iterator<Item = (MultiIndex, FieldElement)> + '_ {
        self.coeffs.iter().map(|(&k, &v)| (k, v))
    }

    pub fn scale(&self, c: FieldElement) -> AltForm {
        let f = self.field;
        let mut out = AltForm::zero(f, self.dim, self.grade);
        for (idx, a) in self.terms() {
            out.add_term(idx, f.mul(c, a));
        }
        out
    }

    fn check_compatible(&self, other: &AltForm) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: other.dim });
        }
        Ok(())
    }

    /// Exterior product with the shuffle sign convention.
    pub fn wedge(&self, other: &AltForm) -> Result<AltForm> {
        self.check_compatible(other)?;
        if self.grade + other.grade > self.dim {
            return Err(Error::GradeOverflow(self.grade, other.grade, self.dim));
        }
        let f = self.field;
        let mut out = AltForm::zero(f, self.dim, self.grade + other.grade);
        for (a, ca) in self.terms() {
            for (b, cb) in other.terms() {
                if a.mask() & b.mask() != 0 {
                    continue;
                }
                let c = f.signed(f.mul(ca, cb), shuffle_parity(a.mask(), b.mask()));
                out.add_term(MultiIndex::from_mask(a.mask() | b.mask()), c);
            }
        }
        Ok(out)
    }

    /// Interior product `ι_{e_i}` with a basis vector, `i` 1-based.
    pub fn interior_basis(&self, i: usize) -> Result<AltForm> {
        if self.grade == 0 {
            return Err(Error::GradeUnderflow);
        }
        let f = self.field;
        let bit = 1u16 << (i - 1);
        let mut out = AltForm::zero(f, self.dim, self.grade - 1);
        for (idx, c) in self.terms() {
            if idx.mask() & bit != 0 {
                let below = (idx.mask() & (bit - 1)).count_ones();
                out.add_term(MultiIndex::from_mask(idx.mask() ^ bit), f.signed(c, below % 2 == 1));
            }
        }
        Ok(out)
    }

    /// Interior product `ι_v`, characterised by `⟨ι_v a, β⟩ = ⟨a, v ∧ β⟩`.
    pub fn interior(&self, v: &Vector) -> Result<AltForm> {
        if self.grade == 0 {
            return Err(Error::GradeUnderflow);
        }
        if v.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: v.dim() });
        }
        let f = self.field;
        let mut out = AltForm::zero(f, self.dim, self.grade - 1);
        for (idx, c) in self.terms() {
            for (below, i) in idx.indices().enumerate() {
                let x = v.coords()[i - 1];
                if !x.is_zero() {
                    let rest = MultiIndex::from_mask(idx.mask() ^ (1 << (i - 1)));
                    out.add_term(rest, f.signed(f.mul(x, c), below % 2 == 1));
                }
            }
        }
        Ok(out)
    }

    /// The pairing `⟨a, b⟩` between a form and a multivector of equal grade.
    pub fn pair(&self, other: &AltForm) -> Result<FieldElement> {
        self.check_compatible(other)?;
        if self.grade != other.grade {
            return Err(Error::GradeMismatch { expected: self.grade, got: other.grade });
        }
        let f = self.field;
        Ok(self
            .terms()
            .fold(FieldElement::ZERO, |acc, (idx, c)| f.mul_add(c, other.coeff(idx), acc)))
    }

    /// `a(v_1, …, v_j) = ⟨a, v_1 ∧ ⋯ ∧ v_j⟩`, via one `j x j` minor per term.
    pub fn eval(&self, vs: &[Vector]) -> Result<FieldElement> {
        if vs.len() != self.grade {
            return Err(Error::ArityMismatch { expected: self.grade, got: vs.len() });
        }
        if let Some(v) = vs.iter().find(|v| v.dim() != self.dim) {
            return Err(Error::DimensionMismatch { expected: self.dim, got: v.dim() });
        }
        let f = self.field;
        let j = self.grade;
        let mut buf = vec![FieldElement::ZERO; j * j];
        let mut acc = FieldElement::ZERO;
        for (idx, c) in self.terms() {
            for (r, i) in idx.indices().enumerate() {
                for (col, v) in vs.iter().enumerate() {
                    buf[r * j + col] = v.coords()[i - 1];
                }
            }
            acc = f.mul_add(c, det_in_place(f, j, &mut buf), acc);
        }
        Ok(acc)
    }

    /// Pullback `(g·a)(v_1, …) = a(g v_1, …)`.
    pub fn pullback(&self, g: &Matrix) -> Result<AltForm> {
        if g.rows() != self.dim || g.cols() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: g.rows() });
        }
        let f = self.field;
        let cols: Vec<Vector> = (0..self.dim).map(|c| Vector::new(g.col(c))).collect();
        let mut out = AltForm::zero(f, self.dim, self.grade);
        for idx in MultiIndex::all(self.grade, self.dim) {
            let vs: Vec<Vector> = idx.indices().map(|i| cols[i - 1].clone()).collect();
            out.add_term(idx, self.eval(&vs)?);
        }
        Ok(out)
    }

    /// The same coefficients viewed on a space of dimension `dim >= max index`.
    pub fn with_dim(&self, dim: usize) -> Result<AltForm> {
        AltForm::from_terms(self.field, dim, self.grade, self.terms())
    }

    /// Restriction to the coordinate subspace spanned by `e_j`, `j in keep`
    /// (1-based, increasing), re-indexed as `1..=keep.len()`.
    pub fn restrict_to_coords(&self, keep: &[usize]) -> Result<AltForm> {
        let mut out = AltForm::zero(self.field, keep.len(), self.grade);
        for (idx, c) in self.terms() {
            if let Some(new) = idx
                .indices()
                .map(|i| keep.iter().position(|&k| k == i).map(|p| p + 1))
                .collect::<Option<Vec<usize>>>()
            {
                out.add_term(MultiIndex::new(&new)?, c);
            }
        }
        Ok(out)
    }

    /// Grade-6 forms on F^7 to vectors: `e^{1..î..7} ↦ (-1)^{i-1} e_i`.
    pub fn star7(&self) -> Result<Vector> {
        if self.dim != 7 || self.grade != 6 {
            return Err(Error::WrongGradeOrDim { grade: self.grade, dim: self.dim });
        }
        let f = self.field;
        let mut v = Vector::zero(7);
        for (idx, c) in self.terms() {
            let missing = (!idx.mask() & 0x7f).trailing_zeros() as usize;
            v.coords[missing] = f.signed(c, missing % 2 == 1);
        }
        Ok(v)
    }

    /// `H_η(a)`: the vector with `a ∧ β = ⟨β, H_η(a)⟩ η` for every 1-form `β`.
    pub fn h_eta(&self, eta: &AltForm) -> Result<Vector> {
        if self.dim != 7 || self.grade != 6 {
            return Err(Error::WrongGradeOrDim { grade: self.grade, dim: self.dim });
        }
        if eta.grade != 7 || eta.dim != 7 {
            return Err(Error::WrongGradeOrDim { grade: eta.grade, dim: eta.dim });
        }
        let f = self.field;
        let vol = MultiIndex::from_mask(0x7f);
        let c_inv = f.inv(eta.coeff(vol)).map_err(|_| Error::ZeroEta)?;
        let coords = (1..=7)
            .map(|i| {
                let beta = AltForm::basis(f, 7, &[i])?;
                Ok(f.mul(self.wedge(&beta)?.coeff(vol), c_inv))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Vector::new(coords))
    }
}

impl<'a> std::ops::Add<&'a AltForm> for &'a AltForm {
    type Output = AltForm;

    /// Panics if grades, dimensions or fields differ.
    fn add(self, other: &AltForm) -> AltForm {
        assert!(self.field == other.field && self.dim == other.dim && self.grade == other.grade, "incompatible forms");
        let mut out = self.clone();
        for (idx, c) in other.terms() {
            out.add_term(idx, c);
        }
        out
    }
}

impl<'a> std::ops::Sub<&'a AltForm> for &'a AltForm {
    type Output = AltForm;

    fn sub(self, other: &AltForm) -> AltForm {
        self + &(-other)
    }
}

impl std::ops::Neg for &AltForm {
    type Output = AltForm;

    fn neg(self) -> AltForm {
        let f = self.field;
        self.scale(f.neg(FieldElement::ONE))
    }
}

impl fmt::Debug for AltForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(idx, c)| {
                let word: String = idx.indices().map(|i| i.to_string()).collect::<Vec<_>>().join(",");
                format!("{}·e^{{{}}}", c, word)
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// A 3-form over GF(2) on F^m, m <= 8, packed for the enumeration kernels.
///
/// `contractions[i]` holds `ι_{e_{i+1}} ω` as an 8x8 adjacency matrix, one
/// byte per row; vectors are bitmasks with bit `i` for coordinate `i + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PackedForm3 {
    dim: usize,
    contractions: [u64; 8],
}

impl PackedForm3 {
    /// Returns `None` unless the form is a 3-form over GF(2) with `dim <= 8`.
    pub fn new(form: &AltForm) -> Option<PackedForm3> {
        if form.field().q() != 2 || form.grade() != 3 || form.dim() > 8 {
            return None;
        }
        let mut contractions = [0u64; 8];
        for (idx, _) in form.terms() {
            let ids: Vec<usize> = idx.indices().map(|i| i - 1).collect();
            for (pos, &a) in ids.iter().enumerate() {
                let (b, c) = match pos {
                    0 => (ids[1], ids[2]),
                    1 => (ids[0], ids[2]),
                    _ => (ids[0], ids[1]),
                };
                contractions[a] ^= 1u64 << (8 * b + c);
                contractions[a] ^= 1u64 << (8 * c + b);
            }
        }
        Some(PackedForm3 { dim: form.dim(), contractions })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `ι_v ω` as packed adjacency rows.
    #[inline]
    pub fn contract(&self, v: u8) -> u64 {
        let mut acc = 0;
        let mut rest = v;
        while rest != 0 {
            acc ^= self.contractions[rest.trailing_zeros() as usize];
            rest &= rest - 1;
        }
        acc
    }

    /// `ι_u λ` for a packed 2-form `λ`, as a 1-form bitmask.
    #[inline]
    pub fn contract2(lambda: u64, u: u8) -> u8 {
        let mut acc = 0u8;
        let mut rest = u;
        while rest != 0 {
            acc ^= (lambda >> (8 * rest.trailing_zeros())) as u8;
            rest &= rest - 1;
        }
        acc
    }

    /// `ω(v_1, v_2, v_3)` in GF(2).
    #[inline]
    pub fn eval(&self, v1: u8, v2: u8, v3: u8) -> bool {
        let one = Self::contract2(self.contract(v1), v2);
        (one & v3).count_ones() & 1 == 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(q: u32) -> Field {
        Field::new(q).unwrap()
    }

    fn e(field: Field, m: usize, idx: &[usize]) -> AltForm {
        AltForm::basis(field, m, idx).unwrap()
    }

    fn random_form(field: Field, m: usize, grade: usize, seed: &[u8]) -> AltForm {
        let all = MultiIndex::all(grade, m);
        let terms = all.iter().enumerate().map(|(i, &idx)| {
            let c = seed.get(i).copied().unwrap_or(0) as u32 % field.q();
            (idx, field.element(c).unwrap())
        });
        AltForm::from_terms(field, m, grade, terms).unwrap()
    }

    fn random_vector(field: Field, seed: &[u8]) -> Vector {
        Vector::new(seed.iter().map(|&x| field.element(x as u32 % field.q()).unwrap()).collect())
    }

    #[test]
    fn multi_index_order_is_lexicographic() {
        let all = MultiIndex::all(3, 6);
        assert_eq!(all.len(), 20);
        let tuples: Vec<Vec<usize>> = all.iter().map(|i| i.indices().collect()).collect();
        let mut sorted = tuples.clone();
        sorted.sort();
        assert_eq!(tuples, sorted);
        let mut by_ord = all.clone();
        by_ord.reverse();
        by_ord.sort();
        assert_eq!(by_ord, all);
        assert!(MultiIndex::new(&[2, 1]).is_err());
        assert!(MultiIndex::new(&[0]).is_err());
        assert_eq!(MultiIndex::new(&[2, 5]).unwrap().max(), 5);
    }

    #[test]
    fn wedge_examples() {
        let f2 = f(3);
        let m = 4;
        assert_eq!(e(f2, m, &[1]).wedge(&e(f2, m, &[2])).unwrap(), e(f2, m, &[1, 2]));
        assert!(e(f2, m, &[1, 2]).wedge(&e(f2, m, &[1, 3])).unwrap().is_zero());
        assert_eq!(e(f2, m, &[1, 3]).wedge(&e(f2, m, &[2])).unwrap(), -&e(f2, m, &[1, 2, 3]));
        let g2 = f(2);
        assert_eq!(e(g2, m, &[1, 3]).wedge(&e(g2, m, &[2])).unwrap(), e(g2, m, &[1, 2, 3]));
        assert!(matches!(e(f2, m, &[1, 2, 3]).wedge(&e(f2, m, &[1, 4])), Err(Error::GradeOverflow(3, 2, 4))));
    }

    #[test]
    fn interior_examples() {
        let fl = f(5);
        let w = e(fl, 3, &[1, 2, 3]);
        assert_eq!(w.interior(&Vector::basis(3, 1)).unwrap(), e(fl, 3, &[2, 3]));
        assert_eq!(w.interior(&Vector::basis(3, 2)).unwrap(), -&e(fl, 3, &[1, 3]));
        assert_eq!(w.interior_basis(2).unwrap(), -&e(fl, 3, &[1, 3]));
        let s = AltForm::scalar(fl, 3, FieldElement::ONE);
        assert!(matches!(s.interior(&Vector::basis(3, 1)), Err(Error::GradeUnderflow)));
    }

    #[test]
    fn pair_examples() {
        let g = f(2);
        let m = 7;
        assert_eq!(e(g, m, &[1, 2, 3]).pair(&e(g, m, &[1, 2, 3])).unwrap(), FieldElement::ONE);
        assert_eq!(e(g, m, &[1, 2, 3]).pair(&e(g, m, &[1, 2, 4])).unwrap(), FieldElement::ZERO);
        // ⟨e^{123}, (e_1 + e_4) ∧ e_2 ∧ e_3⟩ = 1
        let v = Vector::basis(m, 1).add(&Vector::basis(m, 4), g);
        let mv = AltForm::wedge_vectors(g, m, &[v, Vector::basis(m, 2), Vector::basis(m, 3)]).unwrap();
        assert_eq!(e(g, m, &[1, 2, 3]).pair(&mv).unwrap(), FieldElement::ONE);
        assert!(matches!(e(g, m, &[1, 2]).pair(&mv), Err(Error::GradeMismatch { .. })));
    }

    #[test]
    fn eval_examples() {
        let g = f(2);
        let w1 = e(g, 7, &[1, 2, 3]);
        let b = |i| Vector::basis(7, i);
        assert_eq!(w1.eval(&[b(1), b(2), b(3)]).unwrap(), FieldElement::ONE);
        assert_eq!(w1.eval(&[b(1), b(1), b(3)]).unwrap(), FieldElement::ZERO);
        let w3 = &e(g, 7, &[1, 2, 3]) + &e(g, 7, &[4, 5, 6]);
        assert_eq!(w3.eval(&[b(4), b(5), b(6)]).unwrap(), FieldElement::ONE);
        assert!(matches!(w1.eval(&[b(1)]), Err(Error::ArityMismatch { .. })));
    }

    #[test]
    fn from_words_sorts_with_sign() {
        let fl = f(5);
        // e^{561} = +e^{156}, e^{627} = -e^{267}
        let a = AltForm::from_words(fl, 7, 3, &[(1, &[5, 6, 1])]).unwrap();
        assert_eq!(a, e(fl, 7, &[1, 5, 6]));
        let b = AltForm::from_words(fl, 7, 3, &[(1, &[6, 2, 7])]).unwrap();
        assert_eq!(b, -&e(fl, 7, &[2, 6, 7]));
    }

    #[test]
    fn star_and_h_eta() {
        let fl = f(5);
        let a = e(fl, 7, &[2, 3, 4, 5, 6, 7]);
        assert_eq!(a.star7().unwrap(), Vector::basis(7, 1));
        let b = e(fl, 7, &[1, 3, 4, 5, 6, 7]);
        assert_eq!(b.star7().unwrap(), Vector::basis(7, 2).scale(fl.neg(FieldElement::ONE), fl));
        assert_eq!(AltForm::zero(fl, 7, 6).star7().unwrap(), Vector::zero(7));

        let eta = e(fl, 7, &[1, 2, 3, 4, 5, 6, 7]);
        assert_eq!(a.h_eta(&eta).unwrap(), Vector::basis(7, 1));
        let two = fl.element(2).unwrap();
        let three = fl.element(3).unwrap();
        assert_eq!(a.h_eta(&eta.scale(two)).unwrap(), Vector::basis(7, 1).scale(three, fl));
        assert!(matches!(a.h_eta(&AltForm::zero(fl, 7, 7)), Err(Error::ZeroEta)));
        assert!(matches!(e(fl, 7, &[1, 2]).star7(), Err(Error::WrongGradeOrDim { .. })));

        // star7 agrees with H_η for η = e^{1..7} on every basis 6-form
        for idx in MultiIndex::all(6, 7) {
            let x = AltForm::from_terms(fl, 7, 6, [(idx, FieldElement::ONE)]).unwrap();
            assert_eq!(x.star7().unwrap(), x.h_eta(&eta).unwrap());
        }
    }

    #[test]
    fn h_eta_identity_random() {
        use rand::{Rng, SeedableRng};
        let fl = f(3);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let vol = MultiIndex::from_mask(0x7f);
        for _ in 0..20 {
            let seed: Vec<u8> = (0..7).map(|_| rng.gen()).collect();
            let a = random_form(fl, 7, 6, &seed);
            let bseed: Vec<u8> = (0..7).map(|_| rng.gen()).collect();
            let beta = random_form(fl, 7, 1, &bseed);
            let c = fl.element(rng.gen_range(1..3)).unwrap();
            let eta = e(fl, 7, &[1, 2, 3, 4, 5, 6, 7]).scale(c);
            let h = a.h_eta(&eta).unwrap();
            let lhs = a.wedge(&beta).unwrap().coeff(vol);
            let rhs = fl.mul(beta.pair(&AltForm::from_vector(fl, &h)).unwrap(), c);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn packed_matches_sparse() {
        let g = f(2);
        let w = AltForm::from_words(g, 7, 3, &[(1, &[1, 2, 3]), (1, &[4, 5, 6]), (1, &[7, 1, 4]), (1, &[2, 5, 7])]).unwrap();
        let p = PackedForm3::new(&w).unwrap();
        let vec_of = |mask: u8| Vector::new((0..7).map(|i| FieldElement::from_raw((mask >> i) & 1)).collect());
        for v1 in (0..128u8).step_by(5) {
            for v2 in (0..128u8).step_by(3) {
                for v3 in 0..128u8 {
                    let sparse = w.eval(&[vec_of(v1), vec_of(v2), vec_of(v3)]).unwrap();
                    assert_eq!(p.eval(v1, v2, v3), !sparse.is_zero());
                }
            }
        }
        assert!(PackedForm3::new(&w.with_dim(9).unwrap()).is_none());
    }

    fn leibniz_eval(a: &AltForm, vs: &[Vector]) -> FieldElement {
        // sum over terms and over permutations
        let fl = a.field();
        let j = a.grade();
        let mut total = FieldElement::ZERO;
        let perms = permutations(j);
        for (idx, c) in a.terms() {
            let ids: Vec<usize> = idx.indices().collect();
            for p in &perms {
                let inv = (0..j).flat_map(|x| (x + 1..j).map(move |y| (x, y))).filter(|&(x, y)| p[x] > p[y]).count();
                let prod = (0..j).fold(FieldElement::ONE, |acc, r| fl.mul(acc, vs[p[r]].coords()[ids[r] - 1]));
                total = fl.add(total, fl.signed(fl.mul(c, prod), inv % 2 == 1));
            }
        }
        total
    }

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, n - 1);
                out.push(q);
            }
        }
        out
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn graded_anticommutativity(
            qi in 0usize..4, ga in 0usize..4, gb in 0usize..4,
            sa in prop::collection::vec(any::<u8>(), 70), sb in prop::collection::vec(any::<u8>(), 70),
        ) {
            let fl = f([2, 3, 4, 5][qi]);
            let m = 7;
            let a = random_form(fl, m, ga, &sa);
            let b = random_form(fl, m, gb, &sb);
            let ab = a.wedge(&b).unwrap();
            let ba = b.wedge(&a).unwrap();
            if (ga * gb) % 2 == 1 {
                prop_assert_eq!(ab, -&ba);
            } else {
                prop_assert_eq!(ab, ba);
            }
        }

        #[test]
        fn interior_squares_to_zero(
            qi in 0usize..4, g in 2usize..5,
            sa in prop::collection::vec(any::<u8>(), 70), sv in prop::collection::vec(any::<u8>(), 7),
        ) {
            let fl = f([2, 3, 4, 5][qi]);
            let a = random_form(fl, 7, g, &sa);
            let v = random_vector(fl, &sv);
            prop_assert!(a.interior(&v).unwrap().interior(&v).unwrap().is_zero());
        }

        #[test]
        fn interior_is_adjoint_to_wedge(
            qi in 0usize..4, g in 1usize..5,
            sa in prop::collection::vec(any::<u8>(), 70), sb in prop::collection::vec(any::<u8>(), 70),
            sv in prop::collection::vec(any::<u8>(), 7),
        ) {
            let fl = f([2, 3, 4, 5][qi]);
            let a = random_form(fl, 7, g, &sa);
            let beta = random_form(fl, 7, g - 1, &sb);
            let v = random_vector(fl, &sv);
            let lhs = a.interior(&v).unwrap().pair(&beta).unwrap();
            let vb = AltForm::from_vector(fl, &v).wedge(&beta).unwrap();
            prop_assert_eq!(lhs, a.pair(&vb).unwrap());
        }

        #[test]
        fn eval_matches_permutation_expansion(
            qi in 0usize..4, g in 1usize..5, m in 4usize..8,
            sa in prop::collection::vec(any::<u8>(), 70), sv in prop::collection::vec(any::<u8>(), 28),
        ) {
            let fl = f([2, 3, 4, 5][qi]);
            let a = random_form(fl, m, g, &sa);
            let vs: Vec<Vector> = (0..g).map(|i| random_vector(fl, &sv[i * 7..i * 7 + m])).collect();
            let direct = a.eval(&vs).unwrap();
            prop_assert_eq!(direct, leibniz_eval(&a, &vs));
            let mv = AltForm::wedge_vectors(fl, m, &vs).unwrap();
            prop_assert_eq!(direct, a.pair(&mv).unwrap());
        }
    }
}
