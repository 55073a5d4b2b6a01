//! Weight varieties of 3-forms and the weight formulas built on them.
//!
//! For a 3-form ω on F^m, `φ_ω(v) = ι_v ω`. A form is non-degenerate when
//! `φ_ω` is injective; otherwise its weight is `q^{3r}` times the weight of
//! its restriction to a complement of the r-dimensional kernel.
//!
//! For non-degenerate ω, `X_k(ω) ⊂ P^{m-1}` is the set of points x where
//! `ι_x ω` has rank at most 2k. Writing `n_i = |X_i| - |X_{i-1}|`,
//!
//! ```text
//! wt(ω) = q^{2m-4} / ((q^2 - 1)(1 + q + q^2)) · Σ_i n_i (1 - q^{-2i})
//! ```
//!
//! On F^7 the variety `X_2(ω)` is the zero locus of the quadratic form
//! `Q_ω` defined by `H_η(Pf_3(ι_x ω)) = Q_ω(x)·x`.

use std::fmt;

use num::{BigInt, BigRational, One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::extalg::{AltForm, MultiIndex, Vector};
use crate::gf::{Field, FieldElement};
use crate::grassmann::{codeword_weight_direct, Grassmannian};
use crate::linalg::Matrix;
use crate::par;
use crate::pfaffian::{pf_k, rank_2form, Dense2, PfEngine};

fn check_grade3(form: &AltForm) -> Result<()> {
    if form.grade() != 3 {
        return Err(Error::GradeMismatch { expected: 3, got: form.grade() });
    }
    if form.dim() > 10 {
        return Err(Error::Unsupported(format!("3-forms on F^{} (max 10)", form.dim())));
    }
    Ok(())
}

/// Basis of `ker φ_ω = {v : ι_v ω = 0}`.
pub fn phi_kernel(form: &AltForm) -> Result<Vec<Vector>> {
    check_grade3(form)?;
    let f = form.field();
    let m = form.dim();
    let pairs = MultiIndex::all(2, m);
    let mut a = Matrix::zeros(f, pairs.len(), m);
    for j in 0..m {
        let c = form.interior_basis(j + 1)?;
        for (row, &idx) in pairs.iter().enumerate() {
            a.set(row, j, c.coeff(idx));
        }
    }
    Ok(a.null_space().into_iter().map(Vector::new).collect())
}

pub fn is_nondegenerate(form: &AltForm) -> Result<bool> {
    Ok(phi_kernel(form)?.is_empty())
}

/// A degenerate 3-form split along its kernel.
#[derive(Clone, Debug)]
pub struct ReductionResult {
    /// Dimension of `ker φ_ω`.
    pub r: usize,
    /// ω restricted to the complement, a non-degenerate form on F^{m-r}.
    pub reduced: AltForm,
    /// Columns: the complement basis, then the kernel basis.
    pub basis_change: Matrix,
    /// 1-based coordinates spanning the complement.
    pub complement: Vec<usize>,
}

/// Restricts ω to the coordinate complement of its kernel.
///
/// The kernel basis is brought to reduced row-echelon form; the standard
/// basis vectors off its pivot columns span a complement W, and ω restricted
/// to W is the reduced form.
pub fn reduce_degenerate(form: &AltForm) -> Result<ReductionResult> {
    if form.is_zero() {
        return Err(Error::ZeroForm);
    }
    let f = form.field();
    let m = form.dim();
    let kernel = phi_kernel(form)?;
    let r = kernel.len();
    let (kernel_rref, pivots) = if r == 0 {
        (Matrix::zeros(f, 0, m), Vec::new())
    } else {
        let rows: Vec<Vec<FieldElement>> = kernel.iter().map(|v| v.coords().to_vec()).collect();
        Matrix::from_rows(f, &rows).rref()
    };
    let complement: Vec<usize> = (0..m).filter(|c| !pivots.contains(c)).map(|c| c + 1).collect();
    let mut cols: Vec<Vec<FieldElement>> = complement.iter().map(|&j| Vector::basis(m, j).into_coords()).collect();
    cols.extend((0..r).map(|i| kernel_rref.row(i).to_vec()));
    let basis_change = Matrix::from_cols(f, &cols);
    let reduced = form.restrict_to_coords(&complement)?;
    Ok(ReductionResult { r, reduced, basis_change, complement })
}

/// How the non-degenerate part is weighed in [`weight_via_reduction`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReducedWeight {
    Formula,
    Direct,
}

/// `wt(ω) = q^{3r} · wt(ω̃)`.
pub fn weight_via_reduction(form: &AltForm, how: ReducedWeight) -> Result<u128> {
    let red = reduce_degenerate(form)?;
    let q = form.field().q() as u128;
    let inner = match how {
        ReducedWeight::Formula => weight_nondeg_formula(&red.reduced)?,
        ReducedWeight::Direct => codeword_weight_direct(&red.reduced)? as u128,
    };
    Ok(q.pow(3 * red.r as u32) * inner)
}

fn require_nondegenerate(form: &AltForm) -> Result<()> {
    check_grade3(form)?;
    let r = phi_kernel(form)?.len();
    if r > 0 {
        return Err(Error::DegenerateInput(r));
    }
    Ok(())
}

/// Dense tables of `ι_{e_j} ω`, j = 1..m.
fn basis_contractions(form: &AltForm) -> Vec<Dense2> {
    (1..=form.dim()).map(|j| Dense2::from_form(&form.interior_basis(j).expect("grade 3"))).collect()
}

/// `ι_x ω` as a dense table, from the basis contractions.
fn contract_dense(f: Field, contr: &[Dense2], x: &[FieldElement], out: &mut Dense2) {
    out.entries.iter_mut().for_each(|e| *e = FieldElement::ZERO);
    for (xj, c) in x.iter().zip(contr) {
        if xj.is_zero() {
            continue;
        }
        for (o, &e) in out.entries.iter_mut().zip(&c.entries) {
            if !e.is_zero() {
                *o = f.mul_add(*xj, e, *o);
            }
        }
    }
}

/// Histogram over `P^{m-1}` of half the rank of `ι_x ω`: entry `h` counts
/// the points where `ι_x ω` has rank exactly `2h`.
pub fn rank_profile(form: &AltForm) -> Result<Vec<u64>> {
    check_grade3(form)?;
    let f = form.field();
    let m = form.dim();
    let pts = Grassmannian::projective(m, f)?;
    let contr = basis_contractions(form);
    Ok(par::fold(
        0..pts.len(),
        || (vec![0u64; m / 2 + 1], vec![FieldElement::ZERO; m], Dense2::zero(m), PfEngine::new(f, m)),
        |(mut hist, mut x, mut lam, mut eng), i| {
            pts.fill(i, &mut x);
            contract_dense(f, &contr, &x, &mut lam);
            hist[eng.half_rank(&lam)] += 1;
            (hist, x, lam, eng)
        },
        |mut a, b| {
            a.0.iter_mut().zip(b.0).for_each(|(s, t)| *s += t);
            a
        },
    )
    .0)
}

fn check_level(m: usize, i: usize) -> Result<()> {
    let max = (m - 1) / 2;
    if i > max {
        return Err(Error::RankOutOfRange { r: i, max });
    }
    Ok(())
}

/// The points of `X_i(ω)` (first nonzero coordinate 1) in canonical order.
pub fn x_variety(form: &AltForm, i: usize) -> Result<Vec<Vector>> {
    require_nondegenerate(form)?;
    check_level(form.dim(), i)?;
    let f = form.field();
    let m = form.dim();
    let pts = Grassmannian::projective(m, f)?;
    let contr = basis_contractions(form);
    Ok(par::filter_map(0..pts.len(), |idx| {
        let mut x = vec![FieldElement::ZERO; m];
        pts.fill(idx, &mut x);
        let mut lam = Dense2::zero(m);
        contract_dense(f, &contr, &x, &mut lam);
        (PfEngine::new(f, m).half_rank(&lam) <= i).then(|| Vector::new(x))
    }))
}

/// `|X_i(ω)|`.
pub fn x_variety_card(form: &AltForm, i: usize) -> Result<u64> {
    require_nondegenerate(form)?;
    check_level(form.dim(), i)?;
    Ok(rank_profile(form)?.iter().take(i + 1).sum())
}

/// Weight of a C(2, m) codeword whose 2-form has rank 2r:
/// `q^{2(m-r-1)} (q^{2r} - 1) / (q^2 - 1)`.
pub fn nogin_c2_weight(r: usize, m: usize, q: u32) -> Result<u128> {
    let max = m / 2;
    if r == 0 || r > max {
        return Err(Error::RankOutOfRange { r, max });
    }
    let q = q as u128;
    Ok(q.pow(2 * (m - r - 1) as u32) * (q.pow(2 * r as u32) - 1) / (q * q - 1))
}

fn big(x: u128) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn to_weight(x: BigRational) -> Result<u128> {
    if !x.is_integer() || x < BigRational::zero() {
        return Err(Error::NonIntegerResult(x.to_string()));
    }
    x.to_integer().to_u128().ok_or_else(|| Error::NonIntegerResult(x.to_string()))
}

/// Evaluates the weight formula from `n_1, n_2, …` in exact arithmetic.
pub fn weight_from_ns(q: u32, m: usize, ns: &[u64]) -> Result<u128> {
    let qq = big(q as u128);
    let mut sum = BigRational::zero();
    for (i, &n) in ns.iter().enumerate() {
        let i = i + 1;
        let term = BigRational::one() - BigRational::one() / num::pow(qq.clone(), 2 * i);
        sum += big(n as u128) * term;
    }
    let pref = num::pow(qq.clone(), 2 * m - 4) / ((&qq * &qq - BigRational::one()) * (BigRational::one() + &qq + &qq * &qq));
    to_weight(pref * sum)
}

/// Weight of a non-degenerate 3-form from its weight varieties.
pub fn weight_nondeg_formula(form: &AltForm) -> Result<u128> {
    require_nondegenerate(form)?;
    let m = form.dim();
    let profile = rank_profile(form)?;
    let ns: Vec<u64> = (1..=(m - 1) / 2).map(|i| profile.get(i).copied().unwrap_or(0)).collect();
    weight_from_ns(form.field().q(), m, &ns)
}

/// Weight on F^6 from `|X_1|`: `q^4 [(q^5 + q^3 + q^2 + 1) - n_1 / (1 + q + q^2)]`.
pub fn wt6_from_x1(q: u32, x1: u64) -> Result<u128> {
    let qq = big(q as u128);
    let p = |e: usize| num::pow(qq.clone(), e);
    let base = p(5) + p(3) + p(2) + BigRational::one();
    let denom = BigRational::one() + &qq + p(2);
    to_weight(p(4) * (base - big(x1 as u128) / denom))
}

/// Weight on F^7 from `|X_1|` and `|X_2|`:
/// `q^4 [(q^8 + q^6 + q^5 + q^4 + q^3 + q^2 + 1) - (n_2 + n_1 (1 + q^2)) / (1 + q + q^2)]`.
pub fn wt7_from_x(q: u32, x1: u64, x2: u64) -> Result<u128> {
    let qq = big(q as u128);
    let p = |e: usize| num::pow(qq.clone(), e);
    let base = p(8) + p(6) + p(5) + p(4) + p(3) + p(2) + BigRational::one();
    let n1 = big(x1 as u128);
    let n2 = big(x2 as u128) - &n1;
    let denom = BigRational::one() + &qq + p(2);
    to_weight(p(4) * (base - (n2 + n1 * (BigRational::one() + p(2))) / denom))
}

pub fn wt6_specialized(form: &AltForm) -> Result<u128> {
    if form.dim() != 6 {
        return Err(Error::DimensionMismatch { expected: 6, got: form.dim() });
    }
    wt6_from_x1(form.field().q(), x_variety_card(form, 1)?)
}

pub fn wt7_specialized(form: &AltForm) -> Result<u128> {
    if form.dim() != 7 {
        return Err(Error::DimensionMismatch { expected: 7, got: form.dim() });
    }
    require_nondegenerate(form)?;
    let profile = rank_profile(form)?;
    wt7_from_x(form.field().q(), profile[1], profile[1] + profile[2])
}

/// Weight of any nonzero form of grade 1, 2 or 3 by closed formulas.
pub fn weight_by_formula(form: &AltForm) -> Result<u128> {
    if form.is_zero() {
        return Err(Error::ZeroForm);
    }
    let q = form.field().q();
    let m = form.dim();
    match form.grade() {
        1 => Ok((q as u128).pow(m as u32 - 1)),
        2 => nogin_c2_weight(rank_2form(form)? / 2, m, q),
        3 => weight_via_reduction(form, ReducedWeight::Formula),
        g => Err(Error::Unsupported(format!("formula weights for grade {g}"))),
    }
}

/// A quadratic form `Q(x) = Σ_{i<=j} c_ij x_i x_j` on F^7.
#[derive(Clone, PartialEq, Eq)]
pub struct QuadForm7 {
    field: Field,
    coeffs: [[FieldElement; 7]; 7],
}

impl QuadForm7 {
    pub fn zero(field: Field) -> QuadForm7 {
        QuadForm7 { field, coeffs: [[FieldElement::ZERO; 7]; 7] }
    }

    /// From `(i, j, c)` with 1-based `i <= j`; repeated pairs add up.
    pub fn from_terms(field: Field, terms: &[(usize, usize, i64)]) -> QuadForm7 {
        let mut q = QuadForm7::zero(field);
        for &(i, j, c) in terms {
            let (a, b) = (i.min(j) - 1, i.max(j) - 1);
            q.coeffs[a][b] = field.add(q.coeffs[a][b], field.from_int(c));
        }
        q
    }

    /// From `(i, j, c)` with field-element coefficients.
    pub fn from_elements(field: Field, terms: &[(usize, usize, FieldElement)]) -> QuadForm7 {
        let mut q = QuadForm7::zero(field);
        for &(i, j, c) in terms {
            let (a, b) = (i.min(j) - 1, i.max(j) - 1);
            q.coeffs[a][b] = field.add(q.coeffs[a][b], c);
        }
        q
    }

    pub fn scale(&self, c: FieldElement) -> QuadForm7 {
        let mut out = self.clone();
        out.coeffs.iter_mut().flatten().for_each(|x| *x = self.field.mul(*x, c));
        out
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// `c_ij` for 1-based `i <= j`.
    pub fn coeff(&self, i: usize, j: usize) -> FieldElement {
        self.coeffs[i.min(j) - 1][i.max(j) - 1]
    }

    pub fn eval(&self, x: &[FieldElement]) -> FieldElement {
        let f = self.field;
        let mut acc = FieldElement::ZERO;
        for i in 0..7 {
            if x[i].is_zero() {
                continue;
            }
            for j in i..7 {
                let c = self.coeffs[i][j];
                if !c.is_zero() {
                    acc = f.mul_add(c, f.mul(x[i], x[j]), acc);
                }
            }
        }
        acc
    }

    /// Points of `P^6` where Q vanishes, in canonical order.
    pub fn zero_locus(&self) -> Result<Vec<Vector>> {
        let pts = Grassmannian::projective(7, self.field)?;
        Ok(par::filter_map(0..pts.len(), |i| {
            let mut x = vec![FieldElement::ZERO; 7];
            pts.fill(i, &mut x);
            self.eval(&x).is_zero().then(|| Vector::new(x))
        }))
    }
}

impl fmt::Debug for QuadForm7 {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for i in 0..7 {
            for j in i..7 {
                let c = self.coeffs[i][j];
                if !c.is_zero() {
                    let mono = if i == j { format!("x{}^2", i + 1) } else { format!("x{}x{}", i + 1, j + 1) };
                    parts.push(if c == FieldElement::ONE { mono } else { format!("{c}·{mono}") });
                }
            }
        }
        if parts.is_empty() {
            write!(fm, "0")
        } else {
            write!(fm, "{}", parts.join(" + "))
        }
    }
}

/// `H_η(Pf_3(ι_x ω))` with `η = e^{1⋯7}`.
pub fn pf3_vector(form: &AltForm, x: &Vector) -> Result<Vector> {
    let f = form.field();
    let eta = AltForm::basis(f, 7, &[1, 2, 3, 4, 5, 6, 7])?;
    pf_k(&form.interior(x)?, 3)?.h_eta(&eta)
}

/// The quadratic form `Q_ω` with `H_η(Pf_3(ι_x ω)) = Q_ω(x)·x`, `η = e^{1⋯7}`.
///
/// Diagonal coefficients are read off at `x = e_i`; the cross coefficient
/// `c_ij` is the polarization `Q(e_i + e_j) - Q(e_i) - Q(e_j)`, valid in
/// every characteristic.
pub fn q_omega(form: &AltForm) -> Result<QuadForm7> {
    if form.dim() != 7 {
        return Err(Error::DimensionMismatch { expected: 7, got: form.dim() });
    }
    require_nondegenerate(form)?;
    let f = form.field();
    let mut q = QuadForm7::zero(f);
    let diag: Vec<FieldElement> =
        (0..7).map(|i| Ok(pf3_vector(form, &Vector::basis(7, i + 1))?.coords()[i])).collect::<Result<_>>()?;
    for i in 0..7 {
        q.coeffs[i][i] = diag[i];
        for j in i + 1..7 {
            let x = Vector::basis(7, i + 1).add(&Vector::basis(7, j + 1), f);
            let qx = pf3_vector(form, &x)?.coords()[i];
            q.coeffs[i][j] = f.sub(f.sub(qx, diag[i]), diag[j]);
        }
    }
    Ok(q)
}
