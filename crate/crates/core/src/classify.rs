//! Isomorphism invariants, identification against the catalog, `sl(2)`
//! automorphisms and characters in characteristic 3, class enumeration and
//! the closed-form counts, and a backtracking isomorphism search.

use std::collections::{BTreeMap, HashMap};
use std::ops::ControlFlow;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::catalog::{
    self, cubic_image, cubic_root, profile, CatalogError, ClassLabel, ParamKind, Solvable3, MASTER_TABLE,
};
use crate::field::{Fe, Field, FieldError};
use crate::liealg::{for_each_line, LieAlgebra, LieError, DEFAULT_SWEEP_BUDGET};
use crate::linalg::{char_poly_in_place, rref_in_place, Matrix, Subspace};

/// Vector-sweep invariants are computed only when `q^dim` is at most this.
pub const AD_SWEEP_LIMIT: u128 = 1_000_000;
pub const DEFAULT_ISO_BUDGET: u64 = 10_000_000;
/// Environment variable overriding the ideal-closure sweep budget.
pub const BUDGET_ENV: &str = "LIE_SMALL_BUDGET";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("dimension {0} is outside 3..=6")]
    UnsupportedDim(usize),
    #[error("the algebra is solvable")]
    Solvable,
    #[error("the algebra is not solvable")]
    NotSolvable,
    #[error("no class matches; fingerprint {}", .0.to_json())]
    NoMatch(Box<Fingerprint>),
    #[error("ambiguous match between {}", .0.join(" and "))]
    Ambiguous(Vec<String>),
    #[error("{what} requires characteristic {need}, got {got}")]
    WrongCharacteristic { what: &'static str, need: u32, got: u32 },
    #[error("alpha must be nonzero")]
    ZeroAlpha,
    #[error("zero character")]
    ZeroCharacter,
    #[error("{0} is not a power of the characteristic")]
    FieldOrder(usize),
    #[error("the algebras live over different fields or have different dimensions")]
    Mismatch,
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Search budgets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budgets {
    /// Maximal number of ideal closures in a radical sweep.
    pub sweep: u64,
    /// Maximal number of search nodes in [`iso_oracle`].
    pub iso: u64,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets { sweep: DEFAULT_SWEEP_BUDGET, iso: DEFAULT_ISO_BUDGET }
    }
}

impl Budgets {
    /// Defaults, with the sweep budget taken from `LIE_SMALL_BUDGET` when set.
    pub fn from_env() -> Budgets {
        let mut b = Budgets::default();
        if let Some(v) = std::env::var(BUDGET_ENV).ok().and_then(|s| s.trim().parse().ok()) {
            b.sweep = v;
        }
        b
    }
}

/// Isomorphism invariants of an algebra.
///
/// `radical_class` names the radical when it has dimension at most 3.
/// `ad_charpoly_digest` hashes the multiset of
/// `(charpoly(ad x), rank ad x, rank (ad x)^2)` over all lines, with polynomials normalized under `x -> c x`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fingerprint {
    pub dim: usize,
    pub dim_radical: usize,
    pub dim_center: usize,
    pub derived_dims: Vec<usize>,
    pub lcs_dims: Vec<usize>,
    pub radical_abelian: bool,
    pub radical_derived_dims: Vec<usize>,
    pub radical_class: Option<String>,
    pub dim_derivations: usize,
    pub dim_centroid: usize,
    pub quotient_class: Option<String>,
    pub adnilpotent_count: Option<u64>,
    pub ad_charpoly_digest: Option<String>,
}

impl Fingerprint {
    /// Single-line JSON with sorted keys.
    pub fn to_json(&self) -> String {
        serde_json::to_value(self).expect("plain data").to_string()
    }

    /// Indented JSON with sorted keys.
    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&serde_json::to_value(self).expect("plain data")).expect("plain data")
    }
}

/// Scratch space for `ad x` and its invariants.
/// Charpoly of `ad x` with the ranks of `ad x` and `(ad x)^2`.
type IsoKey = (Vec<Fe>, usize, usize);

/// [`IsoKey`] with the charpoly canonicalized under scaling, plus the
/// [`ideal_profile`].
type LineKey = (Vec<u16>, usize, usize, Vec<usize>);

struct AdWork<'a> {
    l: &'a LieAlgebra,
    n: usize,
    ad: Vec<Fe>,
    tmp: Vec<Fe>,
}

impl<'a> AdWork<'a> {
    fn new(l: &'a LieAlgebra) -> AdWork<'a> {
        let n = l.dim();
        AdWork { l, n, ad: vec![Fe::ZERO; n * n], tmp: vec![Fe::ZERO; n * n] }
    }

    fn load(&mut self, x: &[Fe]) {
        let f = self.l.field();
        let n = self.n;
        self.ad.fill(Fe::ZERO);
        for (i, &xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for j in 0..n {
                let col = self.l.bracket_basis(i, j);
                for (r, &c) in col.iter().enumerate() {
                    if !c.is_zero() {
                        let slot = &mut self.ad[r * n + j];
                        *slot = f.mul_add(*slot, xi, c);
                    }
                }
            }
        }
    }

    fn char_poly(&mut self) -> Vec<Fe> {
        self.tmp.copy_from_slice(&self.ad);
        char_poly_in_place(self.l.field(), &mut self.tmp, self.n)
    }

    fn rank(&mut self) -> usize {
        self.tmp.copy_from_slice(&self.ad);
        rref_in_place(self.l.field(), &mut self.tmp, self.n, self.n).len()
    }

    fn rank_squared(&mut self) -> usize {
        let f = self.l.field();
        let n = self.n;
        for r in 0..n {
            for c in 0..n {
                let mut acc = Fe::ZERO;
                for k in 0..n {
                    acc = f.mul_add(acc, self.ad[r * n + k], self.ad[k * n + c]);
                }
                self.tmp[r * n + c] = acc;
            }
        }
        rref_in_place(f, &mut self.tmp, n, n).len()
    }

    /// Membership in each ideal, and ranks of the loaded `ad x` on it and modulo it.
    fn ideal_profile(&self, x: &[Fe], ideals: &[Subspace]) -> Vec<usize> {
        let f = self.l.field();
        let n = self.n;
        let apply = |u: &[Fe]| -> Vec<Fe> {
            (0..n).map(|r| (0..n).fold(Fe::ZERO, |acc, j| f.mul_add(acc, self.ad[r * n + j], u[j]))).collect()
        };
        let columns: Vec<Vec<Fe>> = (0..n).map(|j| (0..n).map(|r| self.ad[r * n + j]).collect()).collect();
        let mut out = Vec::with_capacity(3 * ideals.len());
        for ideal in ideals {
            let on: Vec<Vec<Fe>> = ideal.basis().iter().map(|u| apply(u)).collect();
            let modulo = columns.iter().fold(ideal.clone(), |s, c| s.with_vector(c));
            out.extend([usize::from(ideal.contains(x)), Subspace::span(f, n, &on).dim(), modulo.dim() - ideal.dim()]);
        }
        out
    }

    /// Exact per-vector invariant used to prune the isomorphism search.
    fn key(&mut self, x: &[Fe]) -> IsoKey {
        self.load(x);
        (self.char_poly(), self.rank(), self.rank_squared())
    }
}

fn sweep_feasible(f: &Field, n: usize) -> bool {
    (f.q() as u128).checked_pow(n as u32).is_some_and(|v| v <= AD_SWEEP_LIMIT)
}

/// `powers[s][e]` is the `e`-th power of the `s`-th nonzero scalar.
fn scalar_powers(f: &Field, n: usize) -> Vec<Vec<Fe>> {
    f.nonzero_elements().map(|s| (0..=n as u64).map(|e| f.pow(s, e)).collect()).collect()
}

/// Least code vector among the charpolys of `ad(c x)`, `c != 0`, written to `best`.
/// The coefficient of `T^k` scales by `c^(n-k)`.
fn canonical_char_poly(f: &Field, cp: &[Fe], powers: &[Vec<Fe>], best: &mut [u16], cand: &mut [u16]) {
    let n = best.len();
    best.fill(u16::MAX);
    for pw in powers {
        for (slot, k) in cand.iter_mut().zip((0..n).rev()) {
            *slot = f.mul(pw[n - k], cp[k]).0;
        }
        if *cand < *best {
            best.copy_from_slice(cand);
        }
    }
}

/// Number of `x` with `ad x` nilpotent, and the charpoly and rank digest.
fn ad_statistics(l: &LieAlgebra) -> (u64, String) {
    let f = l.field();
    let n = l.dim();
    let powers = scalar_powers(f, n);
    let mut work = AdWork::new(l);
    let mut histogram: BTreeMap<(usize, usize, Vec<u16>), u64> = BTreeMap::new();
    let mut nilpotent_lines = 0u64;
    let mut best = vec![0u16; n];
    let mut cand = vec![0u16; n];
    let _ = for_each_line(f, n, |v| {
        work.load(v);
        let cp = work.char_poly();
        let rank = work.rank();
        let rank2 = work.rank_squared();
        if cp[..n].iter().all(|c| c.is_zero()) {
            nilpotent_lines += 1;
        }
        canonical_char_poly(f, &cp, &powers, &mut best, &mut cand);
        *histogram.entry((rank, rank2, best.clone())).or_insert(0) += 1;
        ControlFlow::<()>::Continue(())
    });
    let mut hasher = Sha256::new();
    for ((rank, rank2, coeffs), count) in &histogram {
        hasher.update(format!("{rank}:{rank2}:{coeffs:?}:{count};").as_bytes());
    }
    let digest: String = hasher.finalize()[..16].iter().map(|b| format!("{b:02x}")).collect();
    (nilpotent_lines * (f.q() as u64 - 1) + 1, digest)
}

/// Classifies a solvable three-dimensional algebra.
pub fn classify_solvable3(r: &LieAlgebra) -> Result<Solvable3, ClassifyError> {
    if r.dim() != 3 {
        return Err(ClassifyError::UnsupportedDim(r.dim()));
    }
    let d = r.product_space(&r.whole(), &r.whole());
    match d.dim() {
        0 => Ok(Solvable3::Abelian),
        1 if r.is_nilpotent() => Ok(Solvable3::Heisenberg),
        1 => Ok(Solvable3::Item2),
        2 => {
            // The derived algebra is abelian; any x outside it acts on it,
            // well defined up to a nonzero scalar.
            let x = (0..3).map(|i| r.unit(i)).find(|u| !d.contains(u)).expect("proper subspace");
            let cols: Vec<Vec<Fe>> =
                d.basis().iter().map(|v| d.coordinates(&r.bracket(&x, v)).expect("ideal")).collect();
            Ok(classify_invertible_action(&Matrix::from_columns(r.field(), 2, &cols)))
        }
        _ => Err(ClassifyError::NotSolvable),
    }
}

fn is_scalar2(m: &Matrix) -> bool {
    m.get(0, 1).is_zero() && m.get(1, 0).is_zero() && m.get(0, 0) == m.get(1, 1)
}

fn trace_det2(m: &Matrix) -> (Fe, Fe) {
    let f = m.field();
    let tr = f.add(m.get(0, 0), m.get(1, 1));
    let det = f.sub(f.mul(m.get(0, 0), m.get(1, 1)), f.mul(m.get(0, 1), m.get(1, 0)));
    (tr, det)
}

/// Class of an invertible 2x2 action up to conjugation and nonzero scaling.
fn classify_invertible_action(m: &Matrix) -> Solvable3 {
    let f = m.field();
    if is_scalar2(m) {
        return Solvable3::Scalar;
    }
    let (tr, det) = trace_det2(m);
    if !tr.is_zero() {
        // Scaling by -1/tr' makes the trace 1; then det = -xi.
        return Solvable3::Companion(f.neg(f.div(det, f.mul(tr, tr))));
    }
    if f.p() == 2 {
        Solvable3::Jordan
    } else if f.is_square(f.neg(det)) {
        Solvable3::Diagonal
    } else {
        Solvable3::NonsplitTorus
    }
}

/// Name of a radical of dimension at most 3.
fn radical_class(r: &LieAlgebra) -> Option<String> {
    match r.dim() {
        1 => Some("1".into()),
        2 => Some(if r.is_abelian() { "2-abelian" } else { "2-nonabelian" }.into()),
        3 => classify_solvable3(r).ok().map(|s| s.format(r.field())),
        _ => None,
    }
}

/// A catalog class over a fixed field with its algebra and fingerprint.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub label: ClassLabel,
    pub algebra: Result<LieAlgebra, CatalogError>,
    pub fingerprint: Result<Fingerprint, ClassifyError>,
}

/// Fingerprints and identification over one field, with the catalog
/// fingerprints computed once per dimension.
pub struct Classifier {
    field: Field,
    budgets: Budgets,
    catalog: [OnceLock<Vec<CatalogEntry>>; 4],
}

impl Classifier {
    pub fn new(field: &Field) -> Classifier {
        Classifier::with_budgets(field, Budgets::default())
    }

    pub fn with_budgets(field: &Field, budgets: Budgets) -> Classifier {
        Classifier { field: field.clone(), budgets, catalog: Default::default() }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn budgets(&self) -> Budgets {
        self.budgets
    }

    pub fn fingerprint(&self, l: &LieAlgebra) -> Result<Fingerprint, ClassifyError> {
        if l.field() != &self.field {
            return Err(ClassifyError::Mismatch);
        }
        let dims = |s: Vec<Subspace>| s.iter().map(Subspace::dim).collect::<Vec<_>>();
        let rad = l.radical_with_budget(self.budgets.sweep)?;
        let rad_alg = l.subalgebra(&rad)?;
        let quotient_class = if rad.is_zero() || rad.is_full() {
            None
        } else {
            let quo = l.quotient(&rad)?;
            Some(match self.identify(&quo.algebra) {
                Ok(label) => label.format(&self.field),
                Err(_) => "unidentified".to_string(),
            })
        };
        let (adnilpotent_count, ad_charpoly_digest) = if sweep_feasible(&self.field, l.dim()) {
            let (c, d) = ad_statistics(l);
            (Some(c), Some(d))
        } else {
            (None, None)
        };
        Ok(Fingerprint {
            dim: l.dim(),
            dim_radical: rad.dim(),
            dim_center: l.center().dim(),
            derived_dims: dims(l.derived_series()),
            lcs_dims: dims(l.lower_central_series()),
            radical_abelian: rad_alg.is_abelian(),
            radical_derived_dims: dims(rad_alg.derived_series()),
            radical_class: radical_class(&rad_alg),
            dim_derivations: l.derivation_algebra()?.dim(),
            dim_centroid: l.centroid().dim(),
            quotient_class,
            adnilpotent_count,
            ad_charpoly_digest,
        })
    }

    /// Every enumerated class of dimension `dim`, built and fingerprinted.
    pub fn catalog(&self, dim: usize) -> Result<&[CatalogEntry], ClassifyError> {
        if !(3..=6).contains(&dim) {
            return Err(ClassifyError::UnsupportedDim(dim));
        }
        let entries = self.catalog[dim - 3].get_or_init(|| {
            enumerate_classes(&self.field, dim)
                .expect("dimension checked")
                .into_iter()
                .map(|label| {
                    let algebra = catalog::build(&label, &self.field);
                    let fingerprint = match &algebra {
                        Ok(a) => self.fingerprint(a),
                        Err(e) => Err(ClassifyError::Catalog(e.clone())),
                    };
                    CatalogEntry { label, algebra, fingerprint }
                })
                .collect()
        });
        Ok(entries)
    }

    pub fn identify(&self, l: &LieAlgebra) -> Result<ClassLabel, ClassifyError> {
        self.check_identifiable(l)?;
        let fp = self.fingerprint(l)?;
        self.identify_with(l, &fp)
    }

    fn check_identifiable(&self, l: &LieAlgebra) -> Result<(), ClassifyError> {
        if !(3..=6).contains(&l.dim()) {
            return Err(ClassifyError::UnsupportedDim(l.dim()));
        }
        if l.field() != &self.field {
            return Err(ClassifyError::Mismatch);
        }
        if l.is_solvable() {
            return Err(ClassifyError::Solvable);
        }
        Ok(())
    }

    /// Identification given a fingerprint already computed for `l`.
    pub fn identify_with(&self, l: &LieAlgebra, fp: &Fingerprint) -> Result<ClassLabel, ClassifyError> {
        self.check_identifiable(l)?;
        let matches: Vec<&ClassLabel> = self
            .catalog(l.dim())?
            .iter()
            .filter(|e| e.fingerprint.as_ref().ok() == Some(fp))
            .map(|e| &e.label)
            .collect();
        if let Some(extracted) = self.extract_label(l)? {
            if matches.contains(&&extracted) {
                return Ok(extracted);
            }
        }
        match matches.as_slice() {
            [] => Err(ClassifyError::NoMatch(Box::new(fp.clone()))),
            [one] => Ok((*one).clone()),
            many => {
                // Fingerprints tie: settle by explicit isomorphism search.
                let mut iso = Vec::new();
                for label in many {
                    let other = catalog::build(label, &self.field)?;
                    if let IsoWitness::Isomorphic(_) = iso_oracle(l, &other, self.budgets.iso)? {
                        iso.push((*label).clone());
                    }
                }
                match iso.as_slice() {
                    [one] => Ok(one.clone()),
                    _ => Err(ClassifyError::Ambiguous(many.iter().map(|l| l.format(&self.field)).collect())),
                }
            }
        }
    }

    /// Reads the family parameter off the structure, for the families whose
    /// members differ only in a parameter: the radical's class for direct sums
    /// with a three-dimensional radical, the action on a two-dimensional
    /// abelian radical in characteristic 2, and the character of the action
    /// on a three-dimensional abelian radical in characteristic 3.
    pub fn extract_label(&self, l: &LieAlgebra) -> Result<Option<ClassLabel>, ClassifyError> {
        let f = &self.field;
        if l.dim() != 6 {
            return Ok(None);
        }
        let rad = l.radical_with_budget(self.budgets.sweep)?;
        let acts_trivially = |rad: &Subspace| {
            (0..l.dim()).all(|i| rad.basis().iter().all(|v| rad_coordinates(l, rad, i, v).iter().all(|c| c.is_zero())))
        };
        match rad.dim() {
            2 if f.p() == 2 => {
                let rad_alg = l.subalgebra(&rad)?;
                if !rad_alg.is_abelian() {
                    return Ok(None);
                }
                let actions = radical_actions(l, &rad);
                let span = Subspace::span(f, 4, &actions.iter().map(|m| m.data().to_vec()).collect::<Vec<_>>());
                if span.dim() > 1 {
                    return Ok(None);
                }
                let m = match span.basis().first() {
                    Some(v) => Matrix::from_data(f, 2, 2, v.clone()).expect("2x2"),
                    None => Matrix::zeros(f, 2, 2),
                };
                Ok(t61_3a_label(&m))
            }
            3 => {
                let rad_alg = l.subalgebra(&rad)?;
                if acts_trivially(&rad) {
                    let s = classify_solvable3(&rad_alg)?;
                    let (theorem, prefix) = if f.p() == 2 { ("6.1", "4a-") } else { ("6.3", "1-") };
                    return Ok(ClassLabel::new(theorem, &format!("{prefix}{}", s.tag()), s.params()).ok());
                }
                if f.p() != 3 || !rad_alg.is_abelian() {
                    return Ok(None);
                }
                let Some(chi) = radical_character(l, &rad)? else { return Ok(None) };
                if chi.iter().all(|c| c.is_zero()) {
                    return Ok(None);
                }
                let orbit = char_orbit_rep(f, chi)?;
                Ok(ClassLabel::new("6.3", "3a", vec![orbit.xi]).ok().filter(|lb| lb.validate(f).is_ok()))
            }
            _ => Ok(None),
        }
    }
}

/// Coordinates of `[b_i, v]` in the basis of the ideal `rad`.
fn rad_coordinates(l: &LieAlgebra, rad: &Subspace, i: usize, v: &[Fe]) -> Vec<Fe> {
    rad.coordinates(&l.bracket_with_basis(i, v)).expect("rad is an ideal")
}

/// Matrices of `ad b_i` restricted to the ideal `rad`.
fn radical_actions(l: &LieAlgebra, rad: &Subspace) -> Vec<Matrix> {
    let d = rad.dim();
    (0..l.dim())
        .map(|i| {
            let cols: Vec<Vec<Fe>> = rad.basis().iter().map(|v| rad_coordinates(l, rad, i, v)).collect();
            Matrix::from_columns(l.field(), d, &cols)
        })
        .collect()
}

fn action_of(l: &LieAlgebra, rad: &Subspace, x: &[Fe]) -> Matrix {
    let d = rad.dim();
    let cols: Vec<Vec<Fe>> = rad.basis().iter().map(|v| rad.coordinates(&l.bracket(x, v)).expect("ideal")).collect();
    Matrix::from_columns(l.field(), d, &cols)
}

/// Label in the characteristic-2 family `W(1;2) ⋉ k^2` for the action `m`
/// of the distinguished element, or `None` if no listed class has it.
fn t61_3a_label(m: &Matrix) -> Option<ClassLabel> {
    let f = m.field();
    let plain = |item: &str| ClassLabel::new("6.1", item, Vec::new()).ok();
    if m.is_zero() {
        return plain("3a-zero");
    }
    if m.is_nilpotent() {
        return plain("3a-nil");
    }
    if is_scalar2(m) {
        return plain("3a-id");
    }
    let (tr, det) = trace_det2(m);
    if tr.is_zero() {
        return plain("3a-jordan");
    }
    let xi = f.neg(f.div(det, f.mul(tr, tr)));
    if xi.is_zero() {
        return None;
    }
    ClassLabel::new("6.1", "3a", vec![xi]).ok()
}

/// The character of the action of `L/rad ≅ sl(2)` on `rad`, relative to an
/// `sl(2)`-triple found in the quotient; characteristic 3 only.
fn radical_character(l: &LieAlgebra, rad: &Subspace) -> Result<Option<[Fe; 3]>, ClassifyError> {
    let f = l.field();
    let quo = l.quotient(rad)?;
    let q = &quo.algebra;
    if q.dim() != 3 {
        return Ok(None);
    }
    let Some([e, h, ff]) = find_sl2_triple(q) else { return Ok(None) };
    let lift = |v: &[Fe]| -> Vec<Fe> {
        let mut out = vec![Fe::ZERO; l.dim()];
        for (k, &c) in quo.complement.iter().enumerate() {
            out[c] = v[k];
        }
        out
    };
    let d = rad.dim();
    let id = Matrix::identity(f, d);
    let re = action_of(l, rad, &lift(&e));
    let rh = action_of(l, rad, &lift(&h));
    let rf = action_of(l, rad, &lift(&ff));
    // e and f are nilpotent and h is toral in sl(2), so
    // rho(x)^3 - rho(x^[3]) is rho(e)^3, rho(h)^3 - rho(h), rho(f)^3.
    let cubes = [re.pow(3), rh.pow(3).sub(&rh), rf.pow(3)];
    let mut chi = [Fe::ZERO; 3];
    for (slot, c) in chi.iter_mut().zip(&cubes) {
        let s = c.get(0, 0);
        if *c != id.scale(s) {
            return Ok(None);
        }
        *slot = f.pth_root(s);
    }
    Ok(Some(chi))
}

/// A basis `(e, h, f)` with `[h,e] = 2e`, `[h,f] = -2f`, `[e,f] = h`, found by search.
pub fn find_sl2_triple(q: &LieAlgebra) -> Option<[Vec<Fe>; 3]> {
    let f = q.field();
    let two = f.from_int(2);
    let vectors: Vec<Vec<Fe>> = all_vectors(f, q.dim()).filter(|v| v.iter().any(|c| !c.is_zero())).collect();
    for e in &vectors {
        if !q.ad(e).is_nilpotent() {
            continue;
        }
        for ff in &vectors {
            let h = q.bracket(e, ff);
            if h.iter().all(|c| c.is_zero()) {
                continue;
            }
            let he = q.bracket(&h, e);
            let hf = q.bracket(&h, ff);
            if he.iter().zip(e).all(|(&a, &b)| a == f.mul(two, b))
                && hf.iter().zip(ff).all(|(&a, &b)| a == f.neg(f.mul(two, b)))
            {
                return Some([e.clone(), h, ff.clone()]);
            }
        }
    }
    None
}

/// All vectors of `F^n` in lexicographic code order.
pub fn all_vectors(f: &Field, n: usize) -> impl Iterator<Item = Vec<Fe>> {
    let q = f.q();
    let total = (q as u128).pow(n as u32);
    (0..total).map(move |mut idx| {
        let mut v = vec![Fe::ZERO; n];
        for slot in v.iter_mut().rev() {
            *slot = Fe((idx % q as u128) as u16);
            idx /= q as u128;
        }
        v
    })
}

pub fn fingerprint(l: &LieAlgebra) -> Result<Fingerprint, ClassifyError> {
    Classifier::new(l.field()).fingerprint(l)
}

pub fn identify(l: &LieAlgebra) -> Result<ClassLabel, ClassifyError> {
    Classifier::new(l.field()).identify(l)
}

fn require_three(f: &Field, what: &'static str) -> Result<(), ClassifyError> {
    if f.p() != 3 {
        return Err(ClassifyError::WrongCharacteristic { what, need: 3, got: f.p() });
    }
    Ok(())
}

/// The automorphism `σ_{α,β}` of `sl(2)` in characteristic 3, as the matrix
/// whose columns are the images of `e, h, f`.
pub fn sl2_sigma(f: &Field, alpha: Fe, beta: Fe) -> Result<Matrix, ClassifyError> {
    require_three(f, "sigma")?;
    let ai = f.try_inv(alpha).map_err(|_| ClassifyError::ZeroAlpha)?;
    let ab = f.mul(alpha, beta);
    let cols = vec![
        vec![Fe::ZERO, Fe::ZERO, alpha],
        vec![Fe::ZERO, f.neg(Fe::ONE), ab],
        vec![ai, f.neg(beta), f.neg(f.mul(ab, beta))],
    ];
    Ok(Matrix::from_columns(f, 3, &cols))
}

/// Whether `m` (columns are images of basis vectors) is an automorphism of `l`.
pub fn check_automorphism(l: &LieAlgebra, m: &Matrix) -> bool {
    l.is_automorphism(m)
}

/// `exp(ad x)` when `(ad x)^p = 0`.
pub fn exp_ad(l: &LieAlgebra, x: &[Fe]) -> Option<Matrix> {
    let f = l.field();
    let a = l.ad(x);
    let p = f.p();
    if !a.pow(p).is_zero() {
        return None;
    }
    let mut acc = Matrix::identity(f, l.dim());
    let mut term = Matrix::identity(f, l.dim());
    for k in 1..p {
        term = term.mul(&a).scale(f.inv(f.from_int(i64::from(k))));
        acc = acc.add(&term);
    }
    Some(acc)
}

/// `x^[3] = (αγ + β²) x` for `x = αe + βh + γf`.
pub fn sl2_power3(f: &Field, x: [Fe; 3]) -> Result<[Fe; 3], ClassifyError> {
    require_three(f, "the 3-map of sl(2)")?;
    let s = p3_scalar(f, x);
    Ok(x.map(|c| f.mul(s, c)))
}

fn p3_scalar(f: &Field, [a, b, c]: [Fe; 3]) -> Fe {
    f.add(f.mul(a, c), f.mul(b, b))
}

/// `αγ + β² = 0`.
pub fn sl2_is_ad_nilpotent(f: &Field, x: [Fe; 3]) -> Result<bool, ClassifyError> {
    require_three(f, "the 3-map of sl(2)")?;
    Ok(p3_scalar(f, x).is_zero())
}

/// `αγ + β² = 1`.
pub fn sl2_is_toral(f: &Field, x: [Fe; 3]) -> Result<bool, ClassifyError> {
    require_three(f, "the 3-map of sl(2)")?;
    Ok(p3_scalar(f, x) == Fe::ONE)
}

/// Canonical representative `(1, 0, ξ)` of an `Aut sl(2)`-orbit of characters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CharacterOrbit {
    pub xi: Fe,
    /// Whether `T^3 + T^2 = ξ` is solvable, i.e. a 3-dimensional
    /// irreducible module with this character exists.
    pub realizable: bool,
}

/// `χ ∘ σ_{α,β}`.
pub fn character_after_sigma(f: &Field, [r, s, t]: [Fe; 3], alpha: Fe, beta: Fe) -> [Fe; 3] {
    let ai = f.inv(alpha);
    let ab = f.mul(alpha, beta);
    [
        f.mul(alpha, t),
        f.add(f.neg(s), f.mul(ab, t)),
        f.sub(f.sub(f.mul(ai, r), f.mul(beta, s)), f.mul(f.mul(ab, beta), t)),
    ]
}

pub fn char_orbit_rep(f: &Field, chi: [Fe; 3]) -> Result<CharacterOrbit, ClassifyError> {
    require_three(f, "character orbits")?;
    if chi.iter().all(|c| c.is_zero()) {
        return Err(ClassifyError::ZeroCharacter);
    }
    let mut c = chi;
    if c[2].is_zero() {
        let (alpha, beta) = f
            .nonzero_elements()
            .flat_map(|a| f.elements().map(move |b| (a, b)))
            .find(|&(a, b)| !character_after_sigma(f, c, a, b)[2].is_zero())
            .expect("a nonzero character has such a translate");
        c = character_after_sigma(f, c, alpha, beta);
    }
    let c = character_after_sigma(f, c, f.inv(c[2]), c[1]);
    debug_assert!(c[0] == Fe::ONE && c[1].is_zero());
    Ok(CharacterOrbit { xi: c[2], realizable: cubic_root(f, c[2]).is_some() })
}

/// Every class of dimension `dim` over `f`, with every admissible parameter.
pub fn enumerate_classes(f: &Field, dim: usize) -> Result<Vec<ClassLabel>, ClassifyError> {
    if !(3..=6).contains(&dim) {
        return Err(ClassifyError::UnsupportedDim(dim));
    }
    let mut out = Vec::new();
    for s in MASTER_TABLE.iter().filter(|s| s.dim == dim && s.chars.admits(f.p())) {
        let params: Vec<Vec<Fe>> = match s.param {
            ParamKind::None => vec![Vec::new()],
            ParamKind::Nonzero => f.nonzero_elements().map(|a| vec![a]).collect(),
            ParamKind::CubicImage => cubic_image(f).into_iter().map(|a| vec![a]).collect(),
        };
        for ps in params {
            out.push(ClassLabel::new(s.theorem, s.item, ps)?);
        }
    }
    Ok(out)
}

/// The closed-form number of nonsolvable classes of dimension `dim` over `F_q`.
pub fn expected_count(p: u32, q: usize, dim: usize) -> Result<usize, ClassifyError> {
    Ok(match (dim, p) {
        (3, _) => 1,
        (4, 2) => 2,
        (4, _) => 1,
        (5, 2) => 5,
        (5, 3) | (5, 5) => 4,
        (5, _) => 3,
        (6, 2) => 15 + 2 * q,
        (6, 3) => {
            let m = (1..=12).find(|&m| 3usize.pow(m) == q).ok_or(ClassifyError::FieldOrder(q))?;
            19 + q + cubic_image(&Field::new(3, m, None)?).len()
        }
        (6, 5) => 12 + q,
        (6, _) => 11 + q,
        _ => return Err(ClassifyError::UnsupportedDim(dim)),
    })
}

/// The number of solvable three-dimensional classes over `F_q`.
pub fn solvable3_expected_count(p: u32, q: usize) -> usize {
    if p == 2 {
        4 + q
    } else {
        5 + q
    }
}

/// Result of an isomorphism test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsoWitness {
    /// Columns are the images of the basis of the first algebra.
    Isomorphic(Matrix),
    NotIsomorphic,
    /// The search budget ran out.
    Unknown,
}

impl IsoWitness {
    pub fn verdict(&self) -> &'static str {
        match self {
            IsoWitness::Isomorphic(_) => "isomorphic",
            IsoWitness::NotIsomorphic => "not_isomorphic",
            IsoWitness::Unknown => "unknown",
        }
    }
}

/// Isomorphism test: cheap invariants first, then [`iso_search`].
pub fn iso_oracle(a: &LieAlgebra, b: &LieAlgebra, budget: u64) -> Result<IsoWitness, ClassifyError> {
    if a.field() != b.field() || a.dim() != b.dim() {
        return Err(ClassifyError::Mismatch);
    }
    let dims = |l: &LieAlgebra| {
        let ds = |s: Vec<Subspace>| s.iter().map(Subspace::dim).collect::<Vec<_>>();
        (ds(l.derived_series()), ds(l.lower_central_series()), l.center().dim(), l.is_abelian())
    };
    if dims(a) != dims(b) {
        return Ok(IsoWitness::NotIsomorphic);
    }
    iso_search(a, b, budget)
}

/// Proper nonzero ideals fixed by every automorphism, in a canonical order:
/// derived and lower central series, center, radical with its derived series,
/// and the centralizer of the radical. Repeats are dropped.
fn characteristic_ideals(l: &LieAlgebra) -> Vec<Subspace> {
    let mut all = l.derived_series();
    all.extend(l.lower_central_series());
    all.push(l.center());
    if let Ok(r) = l.radical() {
        let mut term = r.clone();
        while !term.is_zero() {
            let next = l.product_space(&term, &term);
            all.push(std::mem::replace(&mut term, next));
        }
        all.push(l.centralizer(&r));
    }
    let mut out: Vec<Subspace> = Vec::new();
    for s in all {
        if !s.is_zero() && !s.is_full() && !out.contains(&s) {
            out.push(s);
        }
    }
    out
}

/// A bracket word in generators: `Gen(i)` or the bracket of two earlier words.
#[derive(Debug, Clone, Copy)]
enum Word {
    Gen(usize),
    Bracket(usize, usize),
}

/// A basis of the subalgebra generated by `gens`, as bracket words.
fn word_basis(l: &LieAlgebra, gens: &[Vec<Fe>]) -> Vec<(Word, Vec<Fe>)> {
    let f = l.field();
    let mut span = Subspace::zero(f, l.dim());
    let mut out: Vec<(Word, Vec<Fe>)> = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        if !span.contains(g) {
            span = span.with_vector(g);
            out.push((Word::Gen(i), g.clone()));
        }
    }
    let mut done = 0;
    while done < out.len() {
        let j = done;
        for i in 0..=j {
            let v = l.bracket(&out[i].1, &out[j].1);
            if !span.contains(&v) {
                span = span.with_vector(&v);
                out.push((Word::Bracket(i, j), v));
            }
        }
        done += 1;
    }
    out
}

/// Generators whose `ad` invariants are rare, so that few images need trying.
/// `pool` pairs each candidate with the size of its invariant class.
///
/// Prefers a generating pair; otherwise starts from the pair spanning the
/// largest subalgebra and adds the rarest vector with the largest gain.
fn generating_set(l: &LieAlgebra, mut pool: Vec<(usize, Vec<Fe>)>) -> Vec<Vec<Fe>> {
    const MAX_TRIES: usize = 50_000;
    const TRIES_PER_FIRST: usize = 256;
    let n = l.dim();
    pool.sort();
    if n == 1 {
        return vec![pool[0].1.clone()];
    }
    // (generated dimension, product of class sizes, pair)
    let mut best: (usize, usize, [usize; 2]) = (0, usize::MAX, [0, 0]);
    let mut tries = 0;
    'outer: for i in 0..pool.len() {
        for j in (i + 1..pool.len()).take(TRIES_PER_FIRST) {
            let product = pool[i].0.saturating_mul(pool[j].0);
            if best.0 == n && product >= best.1 {
                break;
            }
            tries += 1;
            if tries > MAX_TRIES {
                break 'outer;
            }
            let d = word_basis(l, &[pool[i].1.clone(), pool[j].1.clone()]).len();
            if d > best.0 || (d == best.0 && product < best.1) {
                best = (d, product, [i, j]);
            }
        }
    }
    let mut gens = vec![pool[best.2[0]].1.clone(), pool[best.2[1]].1.clone()];
    let mut dim = best.0;
    while dim < n {
        let mut step: Option<(usize, usize)> = None;
        for (k, (_, v)) in pool.iter().enumerate() {
            let mut trial = gens.clone();
            trial.push(v.clone());
            let d = word_basis(l, &trial).len();
            if step.is_none_or(|(bd, _)| d > bd) {
                step = Some((d, k));
            }
            if d == n {
                break;
            }
        }
        let (d, k) = step.expect("pool is nonempty");
        gens.push(pool[k].1.clone());
        dim = d;
    }
    gens
}

/// Exhaustive backtracking search for an isomorphism `a -> b`.
///
/// Generators of `a` are sent to vectors of `b` with the same `ad`
/// characteristic polynomial and ranks; pairs are pruned on the invariants of
/// their brackets and sums. `budget` bounds the number of assignments tried.
pub fn iso_search(a: &LieAlgebra, b: &LieAlgebra, budget: u64) -> Result<IsoWitness, ClassifyError> {
    if a.field() != b.field() || a.dim() != b.dim() {
        return Err(ClassifyError::Mismatch);
    }
    let f = a.field();
    let n = a.dim();
    if n == 0 {
        return Ok(IsoWitness::Isomorphic(Matrix::zeros(f, 0, 0)));
    }
    let mut wa = AdWork::new(a);
    let mut wb = AdWork::new(b);
    // Invariants are computed on projective lines: ranks are scale invariant
    // and the charpoly of ad(cx) is a rescaling of that of ad(x).
    let powers = scalar_powers(f, n);
    let (mut best, mut cand) = (vec![0u16; n], vec![0u16; n]);
    let (ideals_a, ideals_b) = (characteristic_ideals(a), characteristic_ideals(b));
    if ideals_a.iter().map(Subspace::dim).ne(ideals_b.iter().map(Subspace::dim)) {
        return Ok(IsoWitness::NotIsomorphic);
    }
    let mut line_keys = |w: &mut AdWork, ideals: &[Subspace]| {
        let mut out: Vec<(Vec<Fe>, IsoKey, LineKey)> = Vec::new();
        let _ = for_each_line(f, n, |v| {
            let key = w.key(v);
            canonical_char_poly(f, &key.0, &powers, &mut best, &mut cand);
            let canon = (best.clone(), key.1, key.2, w.ideal_profile(v, ideals));
            out.push((v.to_vec(), key, canon));
            ControlFlow::<()>::Continue(())
        });
        out
    };
    let lines_a = line_keys(&mut wa, &ideals_a);
    let lines_b = line_keys(&mut wb, &ideals_b);
    fn histogram(lines: &[(Vec<Fe>, IsoKey, LineKey)]) -> HashMap<&LineKey, usize> {
        let mut h = HashMap::new();
        for (_, _, c) in lines {
            *h.entry(c).or_insert(0) += 1;
        }
        h
    }
    let hist_a = histogram(&lines_a);
    if hist_a != histogram(&lines_b) {
        return Ok(IsoWitness::NotIsomorphic);
    }
    let gens = generating_set(a, lines_a.iter().map(|(v, _, c)| (hist_a[c], v.clone())).collect());
    let words = word_basis(a, &gens);
    if words.len() < n {
        return Ok(IsoWitness::Unknown);
    }
    let scalars: Vec<Fe> = f.nonzero_elements().collect();
    let mut candidates: Vec<Vec<Vec<Fe>>> = vec![Vec::new(); gens.len()];
    for (g, slot) in gens.iter().zip(candidates.iter_mut()) {
        let (_, gk, gc) = lines_a.iter().find(|(v, _, _)| v == g).expect("generators are line representatives");
        for (w, wk, wc) in &lines_b {
            if wc != gc {
                continue;
            }
            for (s, pw) in scalars.iter().zip(&powers) {
                let scaled = (0..=n).all(|k| f.mul(pw[n - k], wk.0[k]) == gk.0[k]);
                if scaled {
                    slot.push(w.iter().map(|&x| f.mul(*s, x)).collect());
                }
            }
        }
    }
    // Try each generator's own coordinates first so that a = b yields the identity.
    for (c, g) in candidates.iter_mut().zip(&gens) {
        if let Some(pos) = c.iter().position(|v| v == g) {
            c[..=pos].rotate_right(1);
        }
    }
    if candidates.iter().any(Vec::is_empty) {
        return Ok(IsoWitness::NotIsomorphic);
    }
    let add = |x: &[Fe], y: &[Fe]| x.iter().zip(y).map(|(&s, &t)| f.add(s, t)).collect::<Vec<_>>();
    let pair_keys: Vec<Vec<(IsoKey, IsoKey)>> = (0..gens.len())
        .map(|j| (0..j).map(|i| (wa.key(&a.bracket(&gens[i], &gens[j])), wa.key(&add(&gens[i], &gens[j])))).collect())
        .collect();
    let word_inv = Matrix::from_columns(f, n, &words.iter().map(|(_, v)| v.clone()).collect::<Vec<_>>())
        .inverse()
        .expect("word basis is a basis");
    let prefixes: Vec<PrefixAlgebra> = (1..=gens.len()).map(|t| PrefixAlgebra::new(a, &gens[..t])).collect();

    /// The subalgebra generated by a prefix of the generators, as words with
    /// the structure constants of brackets between them.
    struct PrefixAlgebra {
        words: Vec<Word>,
        relations: Vec<(usize, usize, Vec<Fe>)>,
    }

    impl PrefixAlgebra {
        fn new(a: &LieAlgebra, gens: &[Vec<Fe>]) -> PrefixAlgebra {
            let basis = word_basis(a, gens);
            let m = Matrix::from_columns(a.field(), a.dim(), &basis.iter().map(|(_, v)| v.clone()).collect::<Vec<_>>());
            let mut relations = Vec::new();
            for i in 0..basis.len() {
                for j in i + 1..basis.len() {
                    let v = a.bracket(&basis[i].1, &basis[j].1);
                    let c = m.solve(&v).expect("shapes agree").expect("subalgebra is closed");
                    relations.push((i, j, c));
                }
            }
            PrefixAlgebra { words: basis.into_iter().map(|(w, _)| w).collect(), relations }
        }

        /// Whether the generator images extend to a homomorphism on this subalgebra
        /// that is injective.
        fn accepts(&self, b: &LieAlgebra, images: &[Vec<Fe>]) -> bool {
            let f = b.field();
            let mut img: Vec<Vec<Fe>> = Vec::with_capacity(self.words.len());
            for w in &self.words {
                img.push(match *w {
                    Word::Gen(i) => images[i].clone(),
                    Word::Bracket(i, j) => b.bracket(&img[i], &img[j]),
                });
            }
            if Subspace::span(f, b.dim(), &img).dim() != img.len() {
                return false;
            }
            self.relations.iter().all(|(i, j, c)| {
                let mut want = vec![Fe::ZERO; b.dim()];
                for (v, &ck) in img.iter().zip(c) {
                    if !ck.is_zero() {
                        for (t, &x) in want.iter_mut().zip(v) {
                            *t = f.mul_add(*t, ck, x);
                        }
                    }
                }
                b.bracket(&img[*i], &img[*j]) == want
            })
        }
    }

    struct Search<'s> {
        b: &'s LieAlgebra,
        a: &'s LieAlgebra,
        candidates: &'s [Vec<Vec<Fe>>],
        pair_keys: &'s [Vec<(IsoKey, IsoKey)>],
        prefixes: &'s [PrefixAlgebra],
        words: &'s [(Word, Vec<Fe>)],
        word_inv: &'s Matrix,
        budget: u64,
        nodes: u64,
    }

    impl Search<'_> {
        fn run(&mut self, wb: &mut AdWork, chosen: &mut Vec<Vec<Fe>>) -> Option<IsoWitness> {
            let f = self.b.field();
            let depth = chosen.len();
            if depth == self.candidates.len() {
                return self.complete(chosen).map(IsoWitness::Isomorphic);
            }
            for y in &self.candidates[depth] {
                self.nodes += 1;
                if self.nodes > self.budget {
                    return Some(IsoWitness::Unknown);
                }
                let ok = chosen.iter().enumerate().all(|(i, x)| {
                    let (kb, ks) = &self.pair_keys[depth][i];
                    let sum: Vec<Fe> = x.iter().zip(y).map(|(&s, &t)| f.add(s, t)).collect();
                    wb.key(&self.b.bracket(x, y)) == *kb && wb.key(&sum) == *ks
                });
                if !ok {
                    continue;
                }
                chosen.push(y.clone());
                if self.prefixes[depth].accepts(self.b, chosen) {
                    if let Some(w) = self.run(wb, chosen) {
                        return Some(w);
                    }
                }
                chosen.pop();
            }
            None
        }

        fn complete(&self, images: &[Vec<Fe>]) -> Option<Matrix> {
            let f = self.b.field();
            let n = self.b.dim();
            let mut img: Vec<Vec<Fe>> = Vec::with_capacity(n);
            for (w, _) in self.words {
                let v = match *w {
                    Word::Gen(i) => images[i].clone(),
                    Word::Bracket(i, j) => self.b.bracket(&img[i], &img[j]),
                };
                img.push(v);
            }
            let phi = Matrix::from_columns(f, n, &img).mul(self.word_inv);
            if !phi.is_invertible() {
                return None;
            }
            let cols: Vec<Vec<Fe>> = (0..n).map(|i| phi.column(i)).collect();
            let preserves = (0..n).all(|i| {
                (i + 1..n).all(|j| self.b.bracket(&cols[i], &cols[j]) == phi.apply(self.a.bracket_basis(i, j)))
            });
            preserves.then_some(phi)
        }
    }

    let mut search = Search {
        b,
        a,
        candidates: &candidates,
        pair_keys: &pair_keys,
        prefixes: &prefixes,
        words: &words,
        word_inv: &word_inv,
        budget,
        nodes: 0,
    };
    Ok(search.run(&mut wb, &mut Vec::new()).unwrap_or(IsoWitness::NotIsomorphic))
}

/// Exhaustive search for a subalgebra complementing the ideal `ideal`.
/// Returns `Ok(None)` when no complement exists.
pub fn find_complement(l: &LieAlgebra, ideal: &Subspace, budget: u64) -> Result<Option<Subspace>, ClassifyError> {
    let f = l.field();
    let n = l.dim();
    let comp = ideal.non_pivots();
    let (k, r) = (comp.len(), ideal.dim());
    let total = (f.q() as u128).checked_pow((k * r) as u32);
    if total.is_none_or(|t| t > u128::from(budget)) {
        return Err(ClassifyError::Lie(LieError::Budget(budget)));
    }
    for coeffs in all_vectors(f, k * r) {
        let vs: Vec<Vec<Fe>> = (0..k)
            .map(|i| {
                let mut v = ideal.combine(&coeffs[i * r..(i + 1) * r]);
                v[comp[i]] = f.add(v[comp[i]], Fe::ONE);
                v
            })
            .collect();
        let s = Subspace::span(f, n, &vs);
        if l.is_subalgebra(&s) {
            return Ok(Some(s));
        }
    }
    Ok(None)
}

/// Outcome of checking every class of one dimension over one field.
#[derive(Debug, Clone)]
pub struct DimAudit {
    pub dim: usize,
    pub expected: usize,
    pub listed: usize,
    /// Labels whose construction is a valid Lie algebra.
    pub built: usize,
    pub build_failures: Vec<(String, String)>,
    pub profile_mismatches: Vec<String>,
    /// Pairs with equal fingerprints, with the isomorphism verdict.
    pub collisions: Vec<(String, String, &'static str)>,
    pub roundtrip_failures: Vec<(String, String)>,
}

impl DimAudit {
    /// Built classes up to proven isomorphism.
    pub fn distinct(&self) -> usize {
        let mut parent: HashMap<&str, &str> = HashMap::new();
        fn root<'s>(parent: &HashMap<&'s str, &'s str>, mut x: &'s str) -> &'s str {
            while let Some(&up) = parent.get(x) {
                x = up;
            }
            x
        }
        let mut merges = 0;
        for (a, b, verdict) in &self.collisions {
            if *verdict == "isomorphic" {
                let (ra, rb) = (root(&parent, a), root(&parent, b));
                if ra != rb {
                    parent.insert(ra, rb);
                    merges += 1;
                }
            }
        }
        self.built - merges
    }

    pub fn count_ok(&self) -> bool {
        self.listed == self.expected && self.distinct() == self.expected
    }

    pub fn passed(&self) -> bool {
        self.count_ok()
            && self.build_failures.is_empty()
            && self.profile_mismatches.is_empty()
            && self.collisions.iter().all(|c| c.2 == "not_isomorphic")
            && self.roundtrip_failures.is_empty()
    }
}

/// Builds every class of `dim`, validates it against its label profile,
/// checks pairwise fingerprint separation and identification round trips.
pub fn audit(c: &Classifier, dim: usize) -> Result<DimAudit, ClassifyError> {
    let f = c.field();
    let entries = c.catalog(dim)?;
    let mut report = DimAudit {
        dim,
        expected: expected_count(f.p(), f.q(), dim)?,
        listed: entries.len(),
        built: 0,
        build_failures: Vec::new(),
        profile_mismatches: Vec::new(),
        collisions: Vec::new(),
        roundtrip_failures: Vec::new(),
    };
    let mut good: Vec<(&CatalogEntry, &LieAlgebra, &Fingerprint)> = Vec::new();
    for e in entries {
        let name = e.label.format(f);
        let (alg, fp) = match (&e.algebra, &e.fingerprint) {
            (Ok(a), Ok(fp)) => (a, fp),
            (Err(err), _) => {
                report.build_failures.push((name, err.to_string()));
                continue;
            }
            (_, Err(err)) => {
                report.build_failures.push((name, err.to_string()));
                continue;
            }
        };
        report.built += 1;
        let pr = profile(&e.label);
        // The series stops at the first repeat, so a perfect algebra has one term.
        let derived = fp.derived_dims.get(1).copied().unwrap_or(fp.dim);
        let seen = (fp.dim_radical, fp.dim_center, fp.radical_abelian, derived);
        let want = (pr.dim_radical, pr.dim_center, pr.radical_abelian, pr.derived_dim);
        if seen != want {
            report
                .profile_mismatches
                .push(format!("{name}: (rad, center, rad abelian, derived) = {seen:?}, label says {want:?}"));
        }
        good.push((e, alg, fp));
    }
    for (i, (ea, a, fa)) in good.iter().enumerate() {
        for (eb, b, fb) in &good[i + 1..] {
            if fa == fb {
                let w = iso_oracle(a, b, c.budgets().iso)?;
                report.collisions.push((ea.label.format(f), eb.label.format(f), w.verdict()));
            }
        }
    }
    for (e, a, fp) in &good {
        match c.identify_with(a, fp) {
            Ok(l) if l == e.label => {}
            Ok(l) => report.roundtrip_failures.push((e.label.format(f), l.format(f))),
            Err(err) => report.roundtrip_failures.push((e.label.format(f), err.to_string())),
        }
    }
    Ok(report)
}
