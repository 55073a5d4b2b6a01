//! Characteristic-free Pfaffians of 2-forms.
//!
//! `Pf_k(λ)` is the unique 2k-form with `ι_v Pf_k(λ) = ι_v λ ∧ Pf_{k-1}(λ)`
//! for all `v`, starting from `Pf_0 = 1`. Its coefficient on
//! `e^I`, `I = (i_1 < … < i_{2k})`, is `⟨ι_{e_{i_1}} λ ∧ Pf_{k-1}(λ), e_{I∖i_1}⟩`,
//! which expands to the recursion
//!
//! ```text
//! Pf_k[I] = Σ_p (-1)^p λ[i_1, j_p] · Pf_{k-1}[J ∖ j_p],   J = I ∖ i_1 = (j_0 < j_1 < …)
//! ```
//!
//! Levels are built bottom-up in dense tables indexed by bitmask, so no
//! division by `k!` ever happens and the result is valid in every
//! characteristic. The rank of λ is `2r` where `Pf_r ≠ 0 = Pf_{r+1}`.

use crate::error::{Error, Result};
use crate::extalg::{AltForm, MultiIndex};
use crate::gf::{Field, FieldElement};
use crate::linalg::Matrix;

/// Largest ambient dimension for the dense Pfaffian tables.
pub const MAX_PF_DIM: usize = 12;

/// Dense coefficient table of a 2-form: `entries[mask]` for two-bit masks.
#[derive(Clone, Debug)]
pub(crate) struct Dense2 {
    pub m: usize,
    pub entries: Vec<FieldElement>,
}

impl Dense2 {
    pub fn zero(m: usize) -> Dense2 {
        Dense2 { m, entries: vec![FieldElement::ZERO; 1 << m] }
    }

    pub fn from_form(lambda: &AltForm) -> Dense2 {
        let mut d = Dense2::zero(lambda.dim());
        for (idx, c) in lambda.terms() {
            d.entries[idx.mask() as usize] = c;
        }
        d
    }

    /// `λ(e_i, e_j)` for 0-based `i, j`.
    pub fn gram(&self, f: Field, i: usize, j: usize) -> FieldElement {
        if i == j {
            return FieldElement::ZERO;
        }
        let c = self.entries[(1usize << i) | (1usize << j)];
        f.signed(c, i > j)
    }
}

/// Computes `Pf_k` from `Pf_{k-1}` (both dense) into `out`.
fn next_level(f: Field, lambda: &Dense2, prev: &[FieldElement], k: usize, masks: &[u16], out: &mut [FieldElement]) -> bool {
    let mut any = false;
    for &mask in masks {
        debug_assert_eq!(mask.count_ones() as usize, 2 * k);
        let low = mask & mask.wrapping_neg();
        let rest = mask ^ low;
        let mut acc = FieldElement::ZERO;
        let mut bits = rest;
        let mut pos = 0;
        while bits != 0 {
            let j = bits & bits.wrapping_neg();
            bits ^= j;
            let l = lambda.entries[(low | j) as usize];
            if !l.is_zero() {
                let p = prev[(rest ^ j) as usize];
                if !p.is_zero() {
                    acc = f.add(acc, f.signed(f.mul(l, p), pos % 2 == 1));
                }
            }
            pos += 1;
        }
        out[mask as usize] = acc;
        any |= !acc.is_zero();
    }
    any
}

/// Bitmasks of `1..=m` grouped by popcount.
pub(crate) fn masks_by_size(m: usize) -> Vec<Vec<u16>> {
    let mut out = vec![Vec::new(); m + 1];
    for mask in 0..(1u32 << m) {
        out[mask.count_ones() as usize].push(mask as u16);
    }
    out
}

/// Reusable scratch space for repeated Pfaffian evaluations on F^m.
#[derive(Clone)]
pub(crate) struct PfEngine {
    f: Field,
    m: usize,
    masks: Vec<Vec<u16>>,
    prev: Vec<FieldElement>,
    cur: Vec<FieldElement>,
}

impl PfEngine {
    pub fn new(f: Field, m: usize) -> PfEngine {
        assert!(m <= MAX_PF_DIM, "dimension {m} exceeds {MAX_PF_DIM}");
        PfEngine { f, m, masks: masks_by_size(m), prev: vec![FieldElement::ZERO; 1 << m], cur: vec![FieldElement::ZERO; 1 << m] }
    }

    /// Half the rank: the largest `r` with `Pf_r(λ) ≠ 0`.
    pub fn half_rank(&mut self, lambda: &Dense2) -> usize {
        debug_assert_eq!(lambda.m, self.m);
        // Pf_1 = λ
        let mut nonzero = self.masks[2].iter().any(|&mk| !lambda.entries[mk as usize].is_zero());
        if !nonzero {
            return 0;
        }
        self.prev.copy_from_slice(&lambda.entries);
        let mut r = 1;
        while 2 * (r + 1) <= self.m {
            nonzero = next_level(self.f, lambda, &self.prev, r + 1, &self.masks[2 * (r + 1)], &mut self.cur);
            if !nonzero {
                break;
            }
            std::mem::swap(&mut self.prev, &mut self.cur);
            r += 1;
        }
        r
    }

    /// Dense table of `Pf_k(λ)`.
    pub fn pf(&mut self, lambda: &Dense2, k: usize) -> Vec<FieldElement> {
        let mut out = vec![FieldElement::ZERO; 1 << self.m];
        if k == 0 {
            out[0] = FieldElement::ONE;
            return out;
        }
        self.prev.copy_from_slice(&lambda.entries);
        for level in 2..=k {
            next_level(self.f, lambda, &self.prev, level, &self.masks[2 * level], &mut self.cur);
            // clear stale entries of other sizes before the swap
            for &mk in &self.masks[2 * level - 2] {
                self.prev[mk as usize] = FieldElement::ZERO;
            }
            std::mem::swap(&mut self.prev, &mut self.cur);
        }
        for &mk in &self.masks[2 * k] {
            out[mk as usize] = self.prev[mk as usize];
        }
        out
    }
}

fn check_grade2(lambda: &AltForm) -> Result<()> {
    if lambda.grade() != 2 {
        return Err(Error::GradeMismatch { expected: 2, got: lambda.grade() });
    }
    if lambda.dim() > MAX_PF_DIM {
        return Err(Error::Unsupported(format!("Pfaffians on F^{} (max {MAX_PF_DIM})", lambda.dim())));
    }
    Ok(())
}

/// The k-th Pfaffian `Pf_k(λ)`, a 2k-form.
pub fn pf_k(lambda: &AltForm, k: usize) -> Result<AltForm> {
    check_grade2(lambda)?;
    let m = lambda.dim();
    if 2 * k > m {
        return Err(Error::GradeOverflow(2 * k, 0, m));
    }
    let f = lambda.field();
    let dense = PfEngine::new(f, m).pf(&Dense2::from_form(lambda), k);
    let terms = MultiIndex::all(2 * k, m).into_iter().map(|idx| (idx, dense[idx.mask() as usize]));
    AltForm::from_terms(f, m, 2 * k, terms)
}

/// Rank of a 2-form via its Pfaffians.
pub fn rank_2form(lambda: &AltForm) -> Result<usize> {
    check_grade2(lambda)?;
    Ok(2 * PfEngine::new(lambda.field(), lambda.dim()).half_rank(&Dense2::from_form(lambda)))
}

/// The Gram matrix `λ(e_i, e_j)`.
pub fn gram_matrix(lambda: &AltForm) -> Result<Matrix> {
    if lambda.grade() != 2 {
        return Err(Error::GradeMismatch { expected: 2, got: lambda.grade() });
    }
    let f = lambda.field();
    let m = lambda.dim();
    let d = Dense2::from_form(lambda);
    let mut g = Matrix::zeros(f, m, m);
    for i in 0..m {
        for j in 0..m {
            g.set(i, j, d.gram(f, i, j));
        }
    }
    Ok(g)
}

/// Rank of a 2-form by Gaussian elimination of its Gram matrix.
pub fn gram_rank(lambda: &AltForm) -> Result<usize> {
    Ok(gram_matrix(lambda)?.rank())
}

/// A skew-symmetric matrix with zero diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewMatrix {
    inner: Matrix,
}

impl SkewMatrix {
    pub fn new(m: Matrix) -> Result<SkewMatrix> {
        let f = m.field();
        if m.rows() != m.cols() {
            return Err(Error::NotSkew);
        }
        for i in 0..m.rows() {
            if !m.get(i, i).is_zero() {
                return Err(Error::NotSkew);
            }
            for j in 0..i {
                if m.get(i, j) != f.neg(m.get(j, i)) {
                    return Err(Error::NotSkew);
                }
            }
        }
        Ok(SkewMatrix { inner: m })
    }

    /// Fills the lower triangle from the strict upper triangle given row by row.
    pub fn from_upper(f: Field, n: usize, upper: &[FieldElement]) -> Result<SkewMatrix> {
        let mut m = Matrix::zeros(f, n, n);
        let mut it = upper.iter();
        for i in 0..n {
            for j in i + 1..n {
                let x = *it.next().ok_or(Error::NotSkew)?;
                m.set(i, j, x);
                m.set(j, i, f.neg(x));
            }
        }
        SkewMatrix::new(m)
    }

    pub fn size(&self) -> usize {
        self.inner.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.inner
    }

    /// `Σ_{i<j} A_ij e^i ∧ e^j`.
    pub fn to_form(&self) -> AltForm {
        let f = self.inner.field();
        let n = self.size();
        let mut terms = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                terms.push((MultiIndex::from_mask((1 << i) | (1 << j)), self.inner.get(i, j)));
            }
        }
        AltForm::from_terms(f, n, 2, terms).expect("valid 2-form")
    }
}

/// The Pfaffian of a skew matrix: the coefficient of `e^{1⋯2k}` in `Pf_k`.
pub fn matrix_pfaffian(a: &SkewMatrix) -> Result<FieldElement> {
    let n = a.size();
    if n % 2 == 1 {
        return Err(Error::OddSize(n));
    }
    if n == 0 {
        return Ok(FieldElement::ONE);
    }
    let top = pf_k(&a.to_form(), n / 2)?;
    Ok(top.coeff(MultiIndex::from_mask(((1u32 << n) - 1) as u16)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extalg::Vector;

    fn e(f: Field, m: usize, idx: &[usize]) -> AltForm {
        AltForm::basis(f, m, idx).unwrap()
    }

    #[test]
    fn pfaffian_examples() {
        let f = Field::new(3).unwrap();
        let l = &e(f, 4, &[1, 2]) + &e(f, 4, &[3, 4]);
        assert_eq!(pf_k(&l, 2).unwrap(), e(f, 4, &[1, 2, 3, 4]));
        let l7 = &(&e(f, 7, &[1, 2]) + &e(f, 7, &[3, 4])) + &e(f, 7, &[5, 6]);
        assert_eq!(pf_k(&l7, 3).unwrap(), e(f, 7, &[1, 2, 3, 4, 5, 6]));
        assert_eq!(pf_k(&l7, 1).unwrap(), l7);
        assert_eq!(pf_k(&l7, 0).unwrap(), AltForm::scalar(f, 7, FieldElement::ONE));
        assert_eq!(rank_2form(&l7).unwrap(), 6);
        assert_eq!(rank_2form(&AltForm::zero(f, 7, 2)).unwrap(), 0);
        assert!(matches!(pf_k(&e(f, 4, &[1, 2, 3]), 1), Err(Error::GradeMismatch { .. })));
        assert!(matches!(pf_k(&l, 3), Err(Error::GradeOverflow(..))));
    }

    #[test]
    fn matrix_pfaffian_examples() {
        let f = Field::new(5).unwrap();
        let one = FieldElement::ONE;
        let z = FieldElement::ZERO;
        // A_12 = A_34 = 1
        let a = SkewMatrix::from_upper(f, 4, &[one, z, z, z, z, one]).unwrap();
        assert_eq!(matrix_pfaffian(&a).unwrap(), one);
        let odd = SkewMatrix::from_upper(f, 3, &[one, one, one]).unwrap();
        assert!(matches!(matrix_pfaffian(&odd), Err(Error::OddSize(3))));
        // nonzero diagonal is rejected in characteristic 2
        let g = Field::new(2).unwrap();
        let mut bad = Matrix::zeros(g, 2, 2);
        bad.set(0, 0, one);
        assert!(SkewMatrix::new(bad).is_err());
    }

    #[test]
    fn generic_4x4_formula() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for q in [3, 5, 7] {
            let f = Field::new(q).unwrap();
            for _ in 0..200 {
                let u: Vec<FieldElement> = (0..6).map(|_| f.element(rng.gen_range(0..q)).unwrap()).collect();
                // a12 a13 a14 a23 a24 a34
                let a = SkewMatrix::from_upper(f, 4, &u).unwrap();
                let expect = f.add(f.sub(f.mul(u[0], u[5]), f.mul(u[1], u[4])), f.mul(u[2], u[3]));
                let pf = matrix_pfaffian(&a).unwrap();
                assert_eq!(pf, expect);
                assert_eq!(f.mul(pf, pf), a.matrix().det());
            }
        }
    }

    #[test]
    fn eq3_holds_on_basis_vectors() {
        let f = Field::new(4).unwrap();
        let x = f.element(2).unwrap();
        let l = &(&e(f, 6, &[1, 2]).scale(x) + &e(f, 6, &[2, 5])) + &(&e(f, 6, &[3, 4]) + &e(f, 6, &[1, 6]));
        for k in 1..=3 {
            let pk = pf_k(&l, k).unwrap();
            let pk1 = pf_k(&l, k - 1).unwrap();
            for i in 1..=6 {
                let v = Vector::basis(6, i);
                let lhs = pk.interior(&v).unwrap();
                let rhs = l.interior(&v).unwrap().wedge(&pk1).unwrap();
                assert_eq!(lhs, rhs, "k={k} i={i}");
            }
        }
    }
}
