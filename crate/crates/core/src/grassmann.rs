//! Points of G(l, m) over GF(q), their Plücker coordinates, the generator
//! matrix of the Grassmann code C(l, m), and brute-force codeword weights.
//!
//! Points are enumerated as reduced row-echelon matrices, grouped into
//! Schubert cells by pivot set. Cells come in lexicographic order of their
//! pivot sets; inside a cell the free entries, read row-major, are the
//! base-q digits of the position, most significant first. Every point has
//! a stable global index, which lets enumeration run in parallel without
//! changing the output order.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::extalg::{AltForm, MultiIndex, PackedForm3};
use crate::gf::{Field, FieldElement};
use crate::linalg::{det_in_place, Matrix};
use crate::par;

/// Default cap on the size of any enumeration.
pub const DEFAULT_BUDGET: u128 = 1 << 24;

/// Enumeration budget: `GW_BUDGET` if set and parseable, else [`DEFAULT_BUDGET`].
pub fn budget() -> u128 {
    std::env::var("GW_BUDGET").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_BUDGET)
}

pub(crate) fn check_budget(requested: u128) -> Result<()> {
    let budget = budget();
    if requested > budget {
        Err(Error::BudgetExceeded { requested, budget })
    } else {
        Ok(())
    }
}

/// `base^exp`, saturating at `u128::MAX`.
pub(crate) fn pow_sat(base: u128, exp: u32) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base);
    }
    acc
}

/// Number of points of G(l, m) over GF(q): the Gaussian binomial at q.
pub fn gaussian_count(l: usize, m: usize, q: u128) -> u128 {
    if l > m {
        return 0;
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..l {
        num *= pow_sat(q, (m - i) as u32) - 1;
        den *= pow_sat(q, (i + 1) as u32) - 1;
    }
    num / den
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Length and dimension of C(l, m).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CodeParams {
    pub n: u128,
    pub k: usize,
}

pub fn code_params(l: usize, m: usize, q: u32) -> Result<CodeParams> {
    if l == 0 || l > m {
        return Err(Error::Unsupported(format!("G({l},{m}) needs 1 <= l <= m")));
    }
    Ok(CodeParams { n: gaussian_count(l, m, q as u128), k: binomial(m, l) })
}

/// A point of G(l, m): an `l x m` matrix in reduced row-echelon form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubspaceRepr {
    l: usize,
    m: usize,
    rows: Vec<FieldElement>,
}

impl SubspaceRepr {
    /// The canonical representative of the span of `vectors`.
    pub fn from_rows(field: Field, vectors: &[Vec<FieldElement>]) -> Result<SubspaceRepr> {
        let mat = Matrix::from_rows(field, vectors);
        let (r, pivots) = mat.rref();
        if pivots.len() != vectors.len() {
            return Err(Error::Unsupported(format!("rows span a {}-dimensional space, not {}", pivots.len(), vectors.len())));
        }
        Ok(SubspaceRepr { l: mat.rows(), m: mat.cols(), rows: r.data().to_vec() })
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.rows[i * self.m..(i + 1) * self.m]
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[FieldElement] {
        &self.rows
    }

    /// 0-based pivot columns.
    pub fn pivots(&self) -> Vec<usize> {
        (0..self.l).map(|i| self.row(i).iter().position(|c| !c.is_zero()).expect("full rank")).collect()
    }

    /// Plücker coordinates, scaled so the first nonzero one is 1.
    pub fn plucker(&self, field: Field) -> PluckerVector {
        let mut buf = vec![FieldElement::ZERO; self.l * self.l];
        let mut coords: Vec<FieldElement> = MultiIndex::all(self.l, self.m)
            .into_iter()
            .map(|idx| minor(field, &self.rows, self.l, self.m, idx.mask(), &mut buf))
            .collect();
        if let Some(&lead) = coords.iter().find(|c| !c.is_zero()) {
            let inv = field.inv(lead).expect("nonzero");
            coords.iter_mut().for_each(|c| *c = field.mul(*c, inv));
        }
        PluckerVector { l: self.l, m: self.m, coords }
    }
}

/// Plücker coordinates in lexicographic order of `I(l, m)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PluckerVector {
    l: usize,
    m: usize,
    coords: Vec<FieldElement>,
}

impl PluckerVector {
    pub fn coords(&self) -> &[FieldElement] {
        &self.coords
    }

    pub fn get(&self, idx: MultiIndex) -> FieldElement {
        MultiIndex::all(self.l, self.m)
            .iter()
            .position(|&i| i == idx)
            .map_or(FieldElement::ZERO, |p| self.coords[p])
    }

    /// The decomposable multivector `Σ p_I e_I`.
    pub fn to_multivector(&self, field: Field) -> AltForm {
        let terms = MultiIndex::all(self.l, self.m).into_iter().zip(self.coords.iter().copied());
        AltForm::from_terms(field, self.m, self.l, terms).expect("valid multivector")
    }
}

/// `l x l` minor of the row-major `l x m` matrix on the columns in `mask`.
#[inline]
pub(crate) fn minor(f: Field, rows: &[FieldElement], l: usize, m: usize, mask: u16, buf: &mut [FieldElement]) -> FieldElement {
    let mut cols = [0usize; 16];
    let mut bits = mask;
    let mut n = 0;
    while bits != 0 {
        cols[n] = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        n += 1;
    }
    match l {
        1 => rows[cols[0]],
        2 => {
            let (a, b, c, d) = (rows[cols[0]], rows[cols[1]], rows[m + cols[0]], rows[m + cols[1]]);
            f.sub(f.mul(a, d), f.mul(b, c))
        }
        3 => {
            let r = |i: usize, j: usize| rows[i * m + cols[j]];
            let t0 = f.sub(f.mul(r(1, 1), r(2, 2)), f.mul(r(1, 2), r(2, 1)));
            let t1 = f.sub(f.mul(r(1, 0), r(2, 2)), f.mul(r(1, 2), r(2, 0)));
            let t2 = f.sub(f.mul(r(1, 0), r(2, 1)), f.mul(r(1, 1), r(2, 0)));
            f.add(f.sub(f.mul(r(0, 0), t0), f.mul(r(0, 1), t1)), f.mul(r(0, 2), t2))
        }
        _ => {
            for i in 0..l {
                for j in 0..l {
                    buf[i * l + j] = rows[i * m + cols[j]];
                }
            }
            det_in_place(f, l, &mut buf[..l * l])
        }
    }
}

#[derive(Clone, Debug)]
struct Cell {
    free: Vec<(usize, usize)>,
    pivots: Vec<usize>,
    offset: u64,
}

/// The point set of G(l, m) over a field, indexable in canonical order.
#[derive(Clone, Debug)]
pub struct Grassmannian {
    l: usize,
    m: usize,
    field: Field,
    cells: Vec<Cell>,
    len: u64,
}

impl Grassmannian {
    /// Checks `q^{l(m-l)}` against the enumeration budget.
    pub fn new(l: usize, m: usize, field: Field) -> Result<Grassmannian> {
        if l == 0 || l > m || m > 10 {
            return Err(Error::Unsupported(format!("G({l},{m}): need 1 <= l <= m <= 10")));
        }
        check_budget(pow_sat(field.q() as u128, (l * (m - l)) as u32))?;
        let q = field.q() as u64;
        let mut cells = Vec::new();
        let mut offset = 0u64;
        for piv in MultiIndex::all(l, m) {
            let pivots: Vec<usize> = piv.indices().map(|i| i - 1).collect();
            let mut free = Vec::new();
            for (r, &p) in pivots.iter().enumerate() {
                for c in p + 1..m {
                    if !pivots.contains(&c) {
                        free.push((r, c));
                    }
                }
            }
            let size = q.pow(free.len() as u32);
            cells.push(Cell { free, pivots, offset });
            offset += size;
        }
        Ok(Grassmannian { l, m, field, cells, len: offset })
    }

    /// Projective space `P^{m-1}` as G(1, m).
    pub fn projective(m: usize, field: Field) -> Result<Grassmannian> {
        Grassmannian::new(1, m, field)
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Writes the RREF rows of point `idx` into `buf` (length `l * m`).
    pub fn fill(&self, idx: u64, buf: &mut [FieldElement]) {
        let ci = self.cells.partition_point(|c| c.offset <= idx) - 1;
        let cell = &self.cells[ci];
        buf.iter_mut().for_each(|x| *x = FieldElement::ZERO);
        for (r, &p) in cell.pivots.iter().enumerate() {
            buf[r * self.m + p] = FieldElement::ONE;
        }
        let q = self.field.q() as u64;
        let mut rem = idx - cell.offset;
        for &(r, c) in cell.free.iter().rev() {
            buf[r * self.m + c] = FieldElement::from_raw((rem % q) as u8);
            rem /= q;
        }
    }

    pub fn point(&self, idx: u64) -> SubspaceRepr {
        let mut rows = vec![FieldElement::ZERO; self.l * self.m];
        self.fill(idx, &mut rows);
        SubspaceRepr { l: self.l, m: self.m, rows }
    }

    pub fn points(&self) -> impl Iterator<Item = SubspaceRepr> + '_ {
        (0..self.len).map(move |i| self.point(i))
    }
}

/// All points of G(l, m) in canonical order.
pub fn enum_grassmannian(l: usize, m: usize, field: Field) -> Result<Vec<SubspaceRepr>> {
    let g = Grassmannian::new(l, m, field)?;
    Ok(par::map(0..g.len(), |i| g.point(i)))
}

/// The `k x n` generator matrix of C(l, m), stored point by point.
///
/// Column `j` holds the normalized Plücker coordinates of point `j`, rows
/// follow the lexicographic order of `I(l, m)`. Over GF(2) (with `k <= 64`)
/// each column is also kept as a bitmask for the packed weight kernel.
#[derive(Clone, Debug)]
pub struct GeneratorMatrix {
    l: usize,
    m: usize,
    field: Field,
    k: usize,
    n: usize,
    columns: Vec<FieldElement>,
    packed: Option<Vec<u64>>,
}

pub fn generator_matrix(l: usize, m: usize, field: Field) -> Result<GeneratorMatrix> {
    GeneratorMatrix::new(l, m, field)
}

impl GeneratorMatrix {
    pub fn new(l: usize, m: usize, field: Field) -> Result<GeneratorMatrix> {
        let g = Grassmannian::new(l, m, field)?;
        let index = MultiIndex::all(l, m);
        let k = index.len();
        let n = g.len() as usize;
        let cols: Vec<Vec<FieldElement>> = par::map(0..g.len(), |i| g.point(i).plucker(field).coords);
        let columns = cols.concat();
        let packed = (field.q() == 2 && k <= 64).then(|| {
            columns
                .chunks(k)
                .map(|c| c.iter().enumerate().fold(0u64, |acc, (i, x)| acc | ((x.idx() as u64) << i)))
                .collect()
        });
        Ok(GeneratorMatrix { l, m, field, k, n, columns, packed })
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry in row `i` (multi-index position), column `j` (point index).
    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.columns[j * self.k + i]
    }

    pub fn column(&self, j: usize) -> &[FieldElement] {
        &self.columns[j * self.k..(j + 1) * self.k]
    }

    /// Rank of the column space, by incremental elimination.
    pub fn rank(&self) -> usize {
        let f = self.field;
        // basis vectors in echelon form, keyed by pivot position
        let mut basis: Vec<(usize, Vec<FieldElement>)> = Vec::new();
        for j in 0..self.n {
            if basis.len() == self.k {
                break;
            }
            let mut v = self.column(j).to_vec();
            for (p, b) in &basis {
                let c = v[*p];
                if !c.is_zero() {
                    let nc = f.neg(c);
                    for (x, &y) in v.iter_mut().zip(b) {
                        *x = f.mul_add(nc, y, *x);
                    }
                }
            }
            if let Some(p) = v.iter().position(|x| !x.is_zero()) {
                let inv = f.inv(v[p]).expect("nonzero");
                v.iter_mut().for_each(|x| *x = f.mul(*x, inv));
                basis.push((p, v));
            }
        }
        basis.len()
    }

    /// Hamming weight of the codeword of an `l`-form.
    pub fn weight(&self, form: &AltForm) -> Result<u64> {
        if form.grade() != self.l || form.dim() != self.m {
            return Err(Error::GradeMismatch { expected: self.l, got: form.grade() });
        }
        if form.field() != self.field {
            return Err(Error::FieldMismatch);
        }
        let index = MultiIndex::all(self.l, self.m);
        let support: Vec<(usize, FieldElement)> = form
            .terms()
            .map(|(idx, c)| (index.iter().position(|&i| i == idx).expect("valid index"), c))
            .collect();
        if let Some(packed) = &self.packed {
            let mask = support.iter().fold(0u64, |acc, &(p, _)| acc | (1 << p));
            return Ok(packed_weight(packed, mask));
        }
        let f = self.field;
        let k = self.k;
        Ok(par::sum(0..self.n as u64, |j| {
            let col = &self.columns[j as usize * k..(j as usize + 1) * k];
            let v = support.iter().fold(FieldElement::ZERO, |acc, &(p, c)| f.mul_add(c, col[p], acc));
            u64::from(!v.is_zero())
        }))
    }

    /// Weight of message word number `t`: the coefficient of the `i`-th
    /// multi-index is base-q digit `i` of `t`, least significant first.
    pub fn weight_of_message(&self, t: u128) -> u64 {
        if let Some(packed) = &self.packed {
            return packed_weight(packed, t as u64);
        }
        let msg = message_digits(t, self.field.q(), self.k);
        let f = self.field;
        (0..self.n)
            .filter(|&j| {
                let col = self.column(j);
                let v = msg.iter().zip(col).fold(FieldElement::ZERO, |acc, (&a, &b)| f.mul_add(a, b, acc));
                !v.is_zero()
            })
            .count() as u64
    }

    /// CSV export: a line `l,m,q,k,n` with the values, then `k` rows of `n`
    /// element indices.
    pub fn to_csv(&self) -> String {
        let mut out = format!("{},{},{},{},{}\n", self.l, self.m, self.field.q(), self.k, self.n);
        for i in 0..self.k {
            let row: Vec<String> = (0..self.n).map(|j| self.get(i, j).idx().to_string()).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

fn packed_weight(columns: &[u64], mask: u64) -> u64 {
    columns.iter().filter(|&&c| (c & mask).count_ones() & 1 == 1).count() as u64
}

pub(crate) fn message_digits(t: u128, q: u32, k: usize) -> Vec<FieldElement> {
    let mut rem = t;
    (0..k)
        .map(|_| {
            let d = (rem % q as u128) as u8;
            rem /= q as u128;
            FieldElement::from_raw(d)
        })
        .collect()
}

/// The `l`-form of message word number `t` (see [`GeneratorMatrix::weight_of_message`]).
pub fn message_form(l: usize, m: usize, field: Field, t: u128) -> AltForm {
    let index = MultiIndex::all(l, m);
    let digits = message_digits(t, field.q(), index.len());
    AltForm::from_terms(field, m, l, index.into_iter().zip(digits)).expect("valid form")
}

/// Weight of the codeword of `form` by counting the points of G(l, m) where
/// it does not vanish.
pub fn codeword_weight_direct(form: &AltForm) -> Result<u64> {
    if form.is_zero() {
        return Err(Error::ZeroForm);
    }
    let (l, m, f) = (form.grade(), form.dim(), form.field());
    let g = Grassmannian::new(l, m, f)?;
    let terms: Vec<(u16, FieldElement)> = form.terms().map(|(i, c)| (i.mask(), c)).collect();
    Ok(par::fold(
        0..g.len(),
        || (0u64, vec![FieldElement::ZERO; l * m], vec![FieldElement::ZERO; l * l]),
        |(count, mut rows, mut buf), i| {
            g.fill(i, &mut rows);
            let v = terms
                .iter()
                .fold(FieldElement::ZERO, |acc, &(mask, c)| f.mul_add(c, minor(f, &rows, l, m, mask, &mut buf), acc));
            (count + u64::from(!v.is_zero()), rows, buf)
        },
        |a, b| (a.0 + b.0, a.1, a.2),
    )
    .0)
}

/// `|GL(3, q)| = q^3 (q^3 - 1)(q^2 - 1)(q - 1)`.
pub(crate) fn gl3_order(q: u128) -> u128 {
    q.pow(3) * (q.pow(3) - 1) * (q.pow(2) - 1) * (q - 1)
}

/// Weight of a 3-form from the number of ordered triples `(v_1, v_2, v_3)`
/// with `ω(v_1, v_2, v_3) ≠ 0`, divided by `|GL(3, q)|`.
///
/// Costs `q^{3m}` evaluations; GF(2) with `m <= 8` uses [`PackedForm3`].
pub fn triple_count_weight(form: &AltForm) -> Result<u128> {
    let count = triple_count(form)?;
    let divisor = gl3_order(form.field().q() as u128);
    if count % divisor != 0 {
        return Err(Error::NonDivisible { count, divisor });
    }
    Ok(count / divisor)
}

/// The raw number of ordered triples on which `form` is nonzero.
pub fn triple_count(form: &AltForm) -> Result<u128> {
    if form.grade() != 3 {
        return Err(Error::GradeMismatch { expected: 3, got: form.grade() });
    }
    let m = form.dim();
    let f = form.field();
    let q = f.q() as u64;
    let qm = q.pow(m as u32);
    check_budget(pow_sat(q as u128, 3 * m as u32))?;
    if let Some(packed) = PackedForm3::new(form) {
        return Ok(par::sum(0..qm, |v1| {
            let lam = packed.contract(v1 as u8);
            let mut n = 0u64;
            for v2 in 0..qm {
                let one = PackedForm3::contract2(lam, v2 as u8);
                for v3 in 0..qm {
                    n += ((one & v3 as u8).count_ones() & 1) as u64;
                }
            }
            n
        }) as u128);
    }
    // generic path: ι_{v1} ω as a Gram matrix, then a 1-form per v2
    let terms: Vec<(Vec<usize>, FieldElement)> = form.terms().map(|(i, c)| (i.indices().map(|x| x - 1).collect(), c)).collect();
    let vector = |t: u64| -> Vec<FieldElement> { message_digits(t as u128, q as u32, m) };
    Ok(par::sum(0..qm, |t1| {
        let v1 = vector(t1);
        // gram[a][b] = ω(v1, e_a, e_b)
        let mut gram = vec![FieldElement::ZERO; m * m];
        for (ids, c) in &terms {
            let (a, b, d) = (ids[0], ids[1], ids[2]);
            for &(x, y, z, odd) in &[(a, b, d, false), (b, a, d, true), (d, a, b, false)] {
                let coef = f.signed(f.mul(*c, v1[x]), odd);
                gram[y * m + z] = f.add(gram[y * m + z], coef);
                gram[z * m + y] = f.sub(gram[z * m + y], coef);
            }
        }
        let mut n = 0u64;
        for t2 in 0..qm {
            let v2 = vector(t2);
            let one: Vec<FieldElement> = (0..m)
                .map(|b| (0..m).fold(FieldElement::ZERO, |acc, a| f.mul_add(v2[a], gram[a * m + b], acc)))
                .collect();
            for t3 in 0..qm {
                let v3 = vector(t3);
                let val = one.iter().zip(&v3).fold(FieldElement::ZERO, |acc, (&x, &y)| f.mul_add(x, y, acc));
                n += u64::from(!val.is_zero());
            }
        }
        n
    }) as u128)
}

/// How [`exhaustive_spectrum`] weighs each codeword.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightStrategy {
    /// Count points through the generator matrix.
    Direct,
    /// Closed forms: `q^{m-1}` for l = 1, the rank formula for l = 2, and
    /// kernel reduction plus weight varieties for l = 3.
    Formula,
}

/// Weight distribution of C(l, m) over all `q^k - 1` nonzero messages, as
/// `(weight, count)` sorted by weight.
pub fn exhaustive_spectrum(l: usize, m: usize, field: Field, strategy: WeightStrategy) -> Result<Vec<(u128, u64)>> {
    match strategy {
        WeightStrategy::Direct => {
            let k = binomial(m, l);
            check_budget(pow_sat(field.q() as u128, k as u32))?;
            let gm = GeneratorMatrix::new(l, m, field)?;
            spectrum_by_index(field.q(), k, |t| Ok(gm.weight_of_message(t) as u128))
        }
        WeightStrategy::Formula => {
            exhaustive_spectrum_by(l, m, field, crate::weightvar::weight_by_formula)
        }
    }
}

/// Like [`exhaustive_spectrum`] with a caller-supplied weight function.
pub fn exhaustive_spectrum_by<F>(l: usize, m: usize, field: Field, weight_fn: F) -> Result<Vec<(u128, u64)>>
where
    F: Fn(&AltForm) -> Result<u128> + Sync + Send,
{
    let k = binomial(m, l);
    check_budget(pow_sat(field.q() as u128, k as u32))?;
    spectrum_by_index(field.q(), k, |t| weight_fn(&message_form(l, m, field, t)))
}

fn spectrum_by_index<F>(q: u32, k: usize, weight: F) -> Result<Vec<(u128, u64)>>
where
    F: Fn(u128) -> Result<u128> + Sync + Send,
{
    let total = pow_sat(q as u128, k as u32) as u64;
    let hist = par::fold(
        1..total,
        || Ok(BTreeMap::new()),
        |acc: Result<BTreeMap<u128, u64>>, t| {
            let mut h = acc?;
            *h.entry(weight(t as u128)?).or_insert(0) += 1;
            Ok(h)
        },
        |a, b| {
            let mut a = a?;
            for (w, c) in b? {
                *a.entry(w).or_insert(0) += c;
            }
            Ok(a)
        },
    )?;
    Ok(hist.into_iter().collect())
}
