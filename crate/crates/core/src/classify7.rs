//! The eleven projective classes of nonzero 3-forms on F^7: canonical
//! representatives, an invariant-based classifier, Monte Carlo orbit
//! frequencies and the weight spectrum of C(3, 7).
//!
//! Recognition uses the pair `(r, |X_1|)`: the kernel dimension of `φ_ω`
//! and the size of the first weight variety of the reduced form. The table
//! of representative fingerprints is built once per field and checked for
//! pairwise distinctness, so a collision cannot go unnoticed.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use num::{BigInt, BigUint, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::extalg::{AltForm, MultiIndex};
use crate::gf::{Field, FieldElement, MAX_Q};
use crate::linalg::Matrix;
use crate::par;
use crate::qpoly::{ni_table, wt_table};
use crate::weightvar::{reduce_degenerate, x_variety_card};

/// Characteristic-dependent variant of classes 5 and 11.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Variant {
    None,
    /// Odd characteristic.
    A,
    /// Characteristic 2.
    B,
}

/// One of the eleven classes, with its variant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClassId {
    pub index: u8,
    pub variant: Variant,
}

impl ClassId {
    /// The class with the variant appropriate to `field`.
    pub fn for_field(index: u8, field: Field) -> Result<ClassId> {
        if !(1..=11).contains(&index) {
            return Err(Error::NoSuchClass(index));
        }
        let variant = match index {
            5 | 11 if field.p() == 2 => Variant::B,
            5 | 11 => Variant::A,
            _ => Variant::None,
        };
        Ok(ClassId { index, variant })
    }

    /// All eleven classes for `field`.
    pub fn all(field: Field) -> Vec<ClassId> {
        (1..=11).map(|i| ClassId::for_field(i, field).expect("valid index")).collect()
    }

    pub fn variant_name(&self) -> Option<&'static str> {
        match self.variant {
            Variant::None => None,
            Variant::A => Some("a"),
            Variant::B => Some("b"),
        }
    }
}

impl fmt::Display for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.index, self.variant_name().unwrap_or(""))
    }
}

fn words(field: Field, ws: &[(i64, &[usize])]) -> AltForm {
    AltForm::from_words(field, 7, 3, ws).expect("valid words")
}

/// The canonical representative of class `id` over `field`; `s` is the
/// field's distinguished non-square (odd p) or non-trace-zero (p = 2) scalar.
pub fn representative(id: ClassId, field: Field) -> Result<AltForm> {
    let expected = ClassId::for_field(id.index, field)?;
    if expected.variant != id.variant {
        return Err(Error::VariantMismatch { index: id.index, variant: format!("{:?}", id.variant), p: field.p() });
    }
    let s = field.special_s();
    let sw = |w: &[usize]| words(field, &[(1, w)]).scale(s);
    let omega5 = || {
        let base = words(field, &[(1, &[1, 2, 3]), (1, &[1, 4, 5]), (1, &[6, 2, 4])]);
        let base = &base + &sw(&[6, 3, 5]);
        match id.variant {
            Variant::B => &base + &words(field, &[(1, &[6, 4, 5])]),
            _ => base,
        }
    };
    Ok(match id.index {
        1 => words(field, &[(1, &[1, 2, 3])]),
        2 => words(field, &[(1, &[1, 2, 3]), (1, &[1, 4, 5])]),
        3 => words(field, &[(1, &[1, 2, 3]), (1, &[4, 5, 6])]),
        4 => words(field, &[(1, &[1, 2, 3]), (1, &[3, 4, 5]), (1, &[5, 6, 1])]),
        5 => omega5(),
        6 => words(field, &[(1, &[1, 2, 3]), (1, &[1, 4, 5]), (1, &[2, 6, 7])]),
        7 => words(field, &[(1, &[1, 2, 3]), (1, &[1, 4, 5]), (1, &[1, 6, 7])]),
        8 => words(field, &[(1, &[1, 2, 3]), (1, &[1, 5, 7]), (1, &[6, 2, 7]), (1, &[6, 4, 5])]),
        9 => words(field, &[(1, &[1, 2, 3]), (1, &[1, 4, 5]), (1, &[1, 6, 7]), (1, &[2, 4, 6])]),
        10 => words(
            field,
            &[(1, &[1, 2, 3]), (1, &[4, 5, 6]), (1, &[7, 1, 4]), (1, &[7, 2, 5]), (1, &[7, 3, 6])],
        ),
        11 => &omega5() + &words(field, &[(1, &[1, 6, 7])]),
        i => return Err(Error::NoSuchClass(i)),
    })
}

/// Orbit invariant: kernel dimension and, when the reduced form lives on
/// F^5 or larger, the size of its first weight variety.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fingerprint {
    pub r: usize,
    pub x1_card: Option<u64>,
}

fn check_form7(form: &AltForm) -> Result<()> {
    if form.grade() != 3 || form.dim() != 7 {
        return Err(Error::WrongGradeOrDim { grade: form.grade(), dim: form.dim() });
    }
    if form.is_zero() {
        return Err(Error::ZeroForm);
    }
    Ok(())
}

pub fn fingerprint(form: &AltForm) -> Result<Fingerprint> {
    check_form7(form)?;
    let red = reduce_degenerate(form)?;
    let x1_card = if 7 - red.r >= 5 { Some(x_variety_card(&red.reduced, 1)?) } else { None };
    Ok(Fingerprint { r: red.r, x1_card })
}

/// Fingerprint table of the eleven representatives over one field.
#[derive(Clone, Debug)]
pub struct Classifier {
    field: Field,
    table: BTreeMap<Fingerprint, ClassId>,
}

impl Classifier {
    /// Builds the table, failing if two representatives share a fingerprint.
    pub fn new(field: Field) -> Result<Classifier> {
        let mut table = BTreeMap::new();
        let fps = par::map_slice(&ClassId::all(field), |&id| Ok((fingerprint(&representative(id, field)?)?, id)));
        for entry in fps {
            let (fp, id) = entry?;
            if let Some(prev) = table.insert(fp, id) {
                return Err(Error::AmbiguousMatch(format!("classes {prev} and {id} share {fp:?}")));
            }
        }
        Ok(Classifier { field, table })
    }

    /// Shared classifier for `field`, built on first use.
    pub fn cached(field: Field) -> Result<&'static Classifier> {
        static CACHE: [OnceLock<Classifier>; MAX_Q as usize + 1] = [const { OnceLock::new() }; MAX_Q as usize + 1];
        let slot = &CACHE[field.q() as usize];
        if let Some(c) = slot.get() {
            return Ok(c);
        }
        let built = Classifier::new(field)?;
        Ok(slot.get_or_init(|| built))
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn table(&self) -> &BTreeMap<Fingerprint, ClassId> {
        &self.table
    }

    pub fn classify(&self, form: &AltForm) -> Result<ClassId> {
        if form.field() != self.field {
            return Err(Error::FieldMismatch);
        }
        let fp = fingerprint(form)?;
        self.table.get(&fp).copied().ok_or_else(|| Error::NoMatch(format!("{fp:?}")))
    }
}

/// Class of a nonzero 3-form on F^7.
pub fn classify(form: &AltForm) -> Result<ClassId> {
    check_form7(form)?;
    Classifier::cached(form.field())?.classify(form)
}

/// Uniform nonzero 3-form on F^7 drawn from `rng`.
pub fn random_form_with<R: Rng + ?Sized>(field: Field, rng: &mut R) -> AltForm {
    let idx = MultiIndex::all(3, 7);
    let q = field.q();
    loop {
        let terms: Vec<(MultiIndex, FieldElement)> =
            idx.iter().map(|&i| (i, field.element(rng.gen_range(0..q)).expect("in range"))).collect();
        let form = AltForm::from_terms(field, 7, 3, terms).expect("valid terms");
        if !form.is_zero() {
            return form;
        }
    }
}

/// Uniform nonzero 3-form on F^7, deterministic in `seed`.
pub fn random_form(field: Field, seed: u64) -> AltForm {
    random_form_with(field, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Uniform element of GL(7, F).
pub fn random_gl7<R: Rng + ?Sized>(field: Field, rng: &mut R) -> Matrix {
    Matrix::random_invertible(field, 7, rng)
}

/// The RNG for sample `i` of a run seeded with `seed`: one ChaCha stream per
/// sample, so results do not depend on how work is split across threads.
pub fn sample_rng(seed: u64, i: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i);
    rng
}

/// Observed and expected class counts in a Monte Carlo run.
#[derive(Clone, Debug)]
pub struct ClassTally {
    pub class: ClassId,
    pub observed: u64,
    pub expected: f64,
    /// Binomial z-score `(observed - expected) / sqrt(n p (1 - p))`.
    pub z: f64,
}

#[derive(Clone, Debug)]
pub struct SampleReport {
    pub q: u32,
    pub count: u64,
    pub seed: u64,
    pub tallies: Vec<ClassTally>,
}

impl SampleReport {
    pub fn max_abs_z(&self) -> f64 {
        self.tallies.iter().map(|t| t.z.abs()).fold(0.0, f64::max)
    }
}

/// Probability that a uniform nonzero 3-form lies in each class:
/// `(q - 1) N_i / (q^35 - 1)`.
pub fn class_probabilities(field: Field) -> Vec<f64> {
    let q = field.q() as i64;
    let total: BigInt = BigInt::from(q).pow(35u32) - 1;
    ni_table()
        .iter()
        .map(|n| {
            let c = n.eval_int(q).expect("integral") * (q - 1);
            c.to_f64().expect("finite") / total.to_f64().expect("finite")
        })
        .collect()
}

/// Classifies `count` seeded random forms and compares class frequencies
/// with the orbit sizes.
pub fn sample_orbits(field: Field, count: u64, seed: u64) -> Result<SampleReport> {
    let classifier = Classifier::cached(field)?;
    let counts = par::fold(
        0..count,
        || Ok(vec![0u64; 11]),
        |acc: Result<Vec<u64>>, i| {
            let mut acc = acc?;
            let form = random_form_with(field, &mut sample_rng(seed, i));
            acc[classifier.classify(&form)?.index as usize - 1] += 1;
            Ok(acc)
        },
        |a, b| {
            let (mut a, b) = (a?, b?);
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
            Ok(a)
        },
    )?;
    let n = count as f64;
    let tallies = ClassId::all(field)
        .into_iter()
        .zip(class_probabilities(field))
        .zip(counts)
        .map(|((class, p), observed)| {
            let expected = n * p;
            let sigma = (n * p * (1.0 - p)).sqrt();
            let z = if sigma > 0.0 { (observed as f64 - expected) / sigma } else { 0.0 };
            ClassTally { class, observed, expected, z }
        })
        .collect();
    Ok(SampleReport { q: field.q(), count, seed, tallies })
}

/// One line of the C(3, 7) weight spectrum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumEntry {
    pub weight: u128,
    pub count: BigUint,
    pub classes: Vec<ClassId>,
}

/// Weight spectrum of C(3, 7) over `field` from the orbit and weight
/// tables. Classes whose weights coincide at this q share one line.
pub fn spectrum_c37(field: Field) -> Vec<SpectrumEntry> {
    let q = field.q() as i64;
    let mut lines: BTreeMap<u128, SpectrumEntry> = BTreeMap::new();
    for ((id, n), w) in ClassId::all(field).into_iter().zip(ni_table()).zip(wt_table()) {
        let weight = w.eval_int(q).and_then(|x| x.to_u128()).expect("weights are positive integers");
        let count = (n.eval_int(q).expect("integral") * (q - 1)).to_biguint().expect("non-negative");
        let e = lines.entry(weight).or_insert_with(|| SpectrumEntry { weight, count: BigUint::default(), classes: vec![] });
        e.count += count;
        e.classes.push(id);
    }
    lines.into_values().collect()
}

/// Expected `|X_1|` and `|X_2|` of the non-degenerate representatives
/// (classes 6 to 11), as closed forms in q.
pub fn expected_x_cards(index: u8, q: u64) -> Option<(u64, u64)> {
    let p = |n: u32| (0..=n).map(|i| q.pow(i)).sum::<u64>();
    Some(match index {
        6 => (1 + 2 * q + 2 * q * q, 2 * p(5) - p(4)),
        7 => (p(5), p(5)),
        8 => (1 + q, q.pow(3) * p(1) * p(1) + p(2)),
        9 => (1 + q + q * q, p(5)),
        10 => (0, p(5)),
        11 => (1, p(4)),
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::codeword_weight_direct;

    fn f(q: u32) -> Field {
        Field::new(q).unwrap()
    }

    #[test]
    fn representatives_match_the_class_list() {
        let g = f(2);
        let w5 = representative(ClassId::for_field(5, g).unwrap(), g).unwrap();
        let expect = words(g, &[(1, &[1, 2, 3]), (1, &[1, 4, 5]), (1, &[2, 4, 6]), (1, &[3, 5, 6]), (1, &[4, 5, 6])]);
        assert_eq!(w5, expect);
        let t = f(3);
        let w11 = representative(ClassId::for_field(11, t).unwrap(), t).unwrap();
        let s = t.element(2).unwrap();
        let mut expect = words(t, &[(1, &[1, 2, 3]), (1, &[1, 4, 5]), (1, &[2, 4, 6]), (1, &[1, 6, 7])]);
        expect = &expect + &words(t, &[(1, &[3, 5, 6])]).scale(s);
        assert_eq!(w11, expect);
        let w8 = representative(ClassId::for_field(8, t).unwrap(), t).unwrap();
        assert_eq!(w8, words(t, &[(1, &[1, 2, 3]), (1, &[1, 5, 7]), (-1, &[2, 6, 7]), (1, &[4, 5, 6])]));
        let bad = ClassId { index: 5, variant: Variant::A };
        assert!(matches!(representative(bad, g), Err(Error::VariantMismatch { .. })));
        assert!(matches!(ClassId::for_field(12, g), Err(Error::NoSuchClass(12))));
    }

    #[test]
    fn fingerprints() {
        for q in [2u32, 3] {
            let fl = f(q);
            let rep = |i| representative(ClassId::for_field(i, fl).unwrap(), fl).unwrap();
            let q = q as u64;
            assert_eq!(fingerprint(&rep(10)).unwrap(), Fingerprint { r: 0, x1_card: Some(0) });
            assert_eq!(fingerprint(&rep(4)).unwrap(), Fingerprint { r: 1, x1_card: Some(1 + q + q * q) });
            assert_eq!(fingerprint(&rep(1)).unwrap(), Fingerprint { r: 4, x1_card: None });
            assert_eq!(fingerprint(&rep(2)).unwrap().r, 2);
        }
        assert!(matches!(fingerprint(&AltForm::zero(f(2), 7, 3)), Err(Error::ZeroForm)));
    }

    #[test]
    fn representatives_round_trip() {
        for q in [2, 3, 4] {
            let fl = f(q);
            for id in ClassId::all(fl) {
                let w = representative(id, fl).unwrap();
                assert_eq!(classify(&w).unwrap(), id);
                for c in fl.units() {
                    assert_eq!(classify(&w.scale(c)).unwrap(), id);
                }
            }
        }
    }

    #[test]
    fn sampling_is_reproducible() {
        let g = f(2);
        assert_eq!(random_form(g, 9), random_form(g, 9));
        let a = sample_orbits(g, 300, 5).unwrap();
        let b = sample_orbits(g, 300, 5).unwrap();
        assert_eq!(a.tallies.iter().map(|t| t.observed).collect::<Vec<_>>(), b.tallies.iter().map(|t| t.observed).collect::<Vec<_>>());
        assert_eq!(a.tallies.iter().map(|t| t.observed).sum::<u64>(), 300);
    }

    #[test]
    fn spectra() {
        let two = spectrum_c37(f(2));
        assert_eq!(two.len(), 9);
        let w5760 = two.iter().find(|e| e.weight == 5760).unwrap();
        assert_eq!(w5760.classes.iter().map(|c| c.index).collect::<Vec<_>>(), vec![5, 6]);
        let w5888 = two.iter().find(|e| e.weight == 5888).unwrap();
        assert_eq!(w5888.classes.iter().map(|c| c.index).collect::<Vec<_>>(), vec![8, 9]);
        let three = spectrum_c37(f(3));
        assert_eq!(three.len(), 10);
        assert_eq!(three[0].weight, 531441);
        for q in [2u32, 3, 4, 5, 7] {
            let total: BigUint = spectrum_c37(f(q)).iter().map(|e| e.count.clone()).sum();
            assert_eq!(total, BigUint::from(q).pow(35) - 1u32);
        }
    }

    #[test]
    fn representative_weights_at_q2() {
        let g = f(2);
        let got: Vec<u64> =
            ClassId::all(g).into_iter().map(|id| codeword_weight_direct(&representative(id, g).unwrap()).unwrap()).collect();
        assert_eq!(got, [4096, 5120, 5504, 5632, 5760, 5760, 5376, 5888, 5888, 5952, 6016]);
    }
}
