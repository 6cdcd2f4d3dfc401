//! Constructors for every algebra and module in the classification, and the
//! label scheme naming the isomorphism classes.
//!
//! Labels look like `T6.1.3a(x+1)`: a two-part theorem identifier, an item
//! path, and optional field-element parameters in polynomial notation.

use std::fmt;

use thiserror::Error;

use crate::field::{Fe, Field, FieldError, Poly};
use crate::liealg::{
    adjoin_derivation, central_extension, direct_sum, restrict_scalars, semidirect_sum, Cocycle2, IntBracket,
    LieAlgebra, LieError, Representation,
};
use crate::linalg::Matrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("unknown label {0:?}")]
    UnknownLabel(String),
    #[error("label {label} does not exist in characteristic {p}")]
    Characteristic { label: String, p: u32 },
    #[error("bad parameters for {label}: {reason}")]
    Params { label: String, reason: String },
    #[error("{what} requires characteristic {need}, got {got}")]
    WrongCharacteristic { what: &'static str, need: u32, got: u32 },
    #[error("T^3+T^2 = {0} has no solution in the field")]
    UnsolvableCubic(String),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Which characteristics an item exists in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CharCondition {
    Two,
    Odd,
    Three,
    Five,
}

impl CharCondition {
    pub fn admits(self, p: u32) -> bool {
        match self {
            CharCondition::Two => p == 2,
            CharCondition::Odd => p != 2,
            CharCondition::Three => p == 3,
            CharCondition::Five => p == 5,
        }
    }
}

/// Parameter domain of a family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamKind {
    None,
    /// One parameter ranging over the nonzero elements.
    Nonzero,
    /// One parameter `xi` such that `T^3 + T^2 = xi` is solvable.
    CubicImage,
}

#[derive(Debug, Clone, Copy)]
pub struct ItemSpec {
    pub theorem: &'static str,
    pub item: &'static str,
    pub dim: usize,
    pub chars: CharCondition,
    pub param: ParamKind,
}

const fn spec(
    theorem: &'static str,
    item: &'static str,
    dim: usize,
    chars: CharCondition,
    param: ParamKind,
) -> ItemSpec {
    ItemSpec { theorem, item, dim, chars, param }
}

use CharCondition::{Five, Odd, Three, Two};
use ParamKind::{CubicImage, None as NoParam, Nonzero};

/// Every labelled class, in enumeration order.
pub const MASTER_TABLE: &[ItemSpec] = &[
    spec("3.1", "W", 3, Two, NoParam),
    spec("3.1", "sl2", 3, Odd, NoParam),
    spec("4.1", "W", 4, Two, NoParam),
    spec("4.1", "Wc", 4, Two, NoParam),
    spec("4.1", "gl2", 4, Odd, NoParam),
    spec("4.2", "1", 5, Two, NoParam),
    spec("4.2", "2-delta0", 5, Two, NoParam),
    spec("4.2", "2-delta1", 5, Two, NoParam),
    spec("4.2", "3-delta0", 5, Two, NoParam),
    spec("4.2", "3-delta1", 5, Two, NoParam),
    spec("4.3", "1", 5, Five, NoParam),
    spec("4.3", "2a", 5, Odd, NoParam),
    spec("4.3", "2b", 5, Odd, NoParam),
    spec("4.3", "2c", 5, Odd, NoParam),
    spec("4.3", "3", 5, Three, NoParam),
    spec("6.1", "1a", 6, Two, NoParam),
    spec("6.1", "1b", 6, Two, NoParam),
    spec("6.1", "2-delta0", 6, Two, NoParam),
    spec("6.1", "2-delta1", 6, Two, NoParam),
    spec("6.1", "3a-zero", 6, Two, NoParam),
    spec("6.1", "3a-nil", 6, Two, NoParam),
    spec("6.1", "3a-id", 6, Two, NoParam),
    spec("6.1", "3a-jordan", 6, Two, NoParam),
    spec("6.1", "3a", 6, Two, Nonzero),
    spec("6.1", "3b-delta0", 6, Two, NoParam),
    spec("6.1", "3b-delta1", 6, Two, NoParam),
    spec("6.1", "4a-1", 6, Two, NoParam),
    spec("6.1", "4a-2", 6, Two, NoParam),
    spec("6.1", "4a-3", 6, Two, NoParam),
    spec("6.1", "4a-4id", 6, Two, NoParam),
    spec("6.1", "4a-4xi", 6, Two, Nonzero),
    spec("6.1", "4a-4jordan", 6, Two, NoParam),
    spec("6.1", "4b", 6, Two, NoParam),
    spec("6.1", "4c", 6, Two, NoParam),
    spec("6.2", "1a", 6, Odd, NoParam),
    spec("6.2", "1b", 6, Odd, NoParam),
    spec("6.2", "2a", 6, Five, NoParam),
    spec("6.2", "2b", 6, Five, NoParam),
    spec("6.3", "1-1", 6, Odd, NoParam),
    spec("6.3", "1-2", 6, Odd, NoParam),
    spec("6.3", "1-3", 6, Odd, NoParam),
    spec("6.3", "1-4id", 6, Odd, NoParam),
    spec("6.3", "1-4xi", 6, Odd, Nonzero),
    spec("6.3", "1-4diag", 6, Odd, NoParam),
    spec("6.3", "1-4delta0", 6, Odd, NoParam),
    spec("6.3", "2-V0V1", 6, Odd, NoParam),
    spec("6.3", "2-V2", 6, Odd, NoParam),
    spec("6.3", "3a", 6, Three, CubicImage),
    spec("6.3", "3b", 6, Three, NoParam),
    spec("6.3", "3c", 6, Three, NoParam),
    spec("6.3", "4", 6, Odd, NoParam),
    spec("6.3", "5", 6, Three, NoParam),
    spec("6.3", "6", 6, Odd, NoParam),
    spec("6.4", "ext00", 6, Three, NoParam),
    spec("6.4", "ext01", 6, Three, NoParam),
    spec("6.4", "ext10", 6, Three, NoParam),
    spec("6.4", "d1", 6, Three, NoParam),
    spec("6.4", "d2", 6, Three, NoParam),
];

pub fn item_spec(theorem: &str, item: &str) -> Option<&'static ItemSpec> {
    MASTER_TABLE.iter().find(|s| s.theorem == theorem && s.item == item)
}

/// An isomorphism-class identifier.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassLabel {
    pub dim: usize,
    pub theorem: String,
    pub item: String,
    pub params: Vec<Fe>,
}

impl ClassLabel {
    pub fn new(theorem: &str, item: &str, params: Vec<Fe>) -> Result<ClassLabel, CatalogError> {
        let s = item_spec(theorem, item).ok_or_else(|| CatalogError::UnknownLabel(format!("T{theorem}.{item}")))?;
        let arity = usize::from(s.param != ParamKind::None);
        if params.len() != arity {
            return Err(CatalogError::Params {
                label: format!("T{theorem}.{item}"),
                reason: format!("expected {arity} parameter(s), got {}", params.len()),
            });
        }
        Ok(ClassLabel { dim: s.dim, theorem: theorem.into(), item: item.into(), params })
    }

    pub fn spec(&self) -> &'static ItemSpec {
        item_spec(&self.theorem, &self.item).expect("labels are validated on construction")
    }

    /// Label string, e.g. `T6.1.3a(x+1)`.
    pub fn format(&self, f: &Field) -> String {
        let mut s = format!("T{}.{}", self.theorem, self.item);
        if !self.params.is_empty() {
            let ps: Vec<String> = self.params.iter().map(|&a| f.format(a)).collect();
            s.push('(');
            s.push_str(&ps.join(","));
            s.push(')');
        }
        s
    }

    /// Inverse of [`ClassLabel::format`]. Checks the parameter side conditions.
    pub fn parse(s: &str, f: &Field) -> Result<ClassLabel, CatalogError> {
        let unknown = || CatalogError::UnknownLabel(s.to_string());
        let body = s.trim().strip_prefix('T').ok_or_else(unknown)?;
        if body.len() < 5 || body.as_bytes()[1] != b'.' || body.as_bytes()[3] != b'.' {
            return Err(unknown());
        }
        let theorem = &body[..3];
        let rest = &body[4..];
        let (item, params) = match rest.find('(') {
            None => (rest, Vec::new()),
            Some(pos) => {
                let inner = rest[pos + 1..].strip_suffix(')').ok_or_else(unknown)?;
                let ps = inner.split(',').map(|t| f.parse(t)).collect::<Result<Vec<_>, _>>()?;
                (&rest[..pos], ps)
            }
        };
        let label = ClassLabel::new(theorem, item, params)?;
        label.validate(f)?;
        Ok(label)
    }

    /// Checks characteristic and parameter side conditions for `f`.
    pub fn validate(&self, f: &Field) -> Result<(), CatalogError> {
        let s = self.spec();
        if !s.chars.admits(f.p()) {
            return Err(CatalogError::Characteristic { label: self.format(f), p: f.p() });
        }
        let bad = |reason: &str| CatalogError::Params { label: self.format(f), reason: reason.into() };
        if self.params.iter().any(|a| a.code() >= f.q()) {
            return Err(bad("parameter outside the field"));
        }
        match s.param {
            ParamKind::None => {}
            ParamKind::Nonzero => {
                if self.params[0].is_zero() {
                    return Err(bad("parameter must be nonzero"));
                }
            }
            ParamKind::CubicImage => {
                if cubic_root(f, self.params[0]).is_none() {
                    return Err(bad("T^3+T^2 = xi must be solvable"));
                }
            }
        }
        Ok(())
    }

    /// Labels sharing theorem and item prefix before the first `-`, e.g. all `T6.1.3a*`.
    pub fn family(&self) -> String {
        let head = self.item.split('-').next().unwrap_or(&self.item);
        format!("{}.{}", self.theorem, head)
    }
}

/// Enumeration-least `kappa` with `kappa^3 + kappa^2 = xi`.
pub fn cubic_root(f: &Field, xi: Fe) -> Option<Fe> {
    let poly = Poly::new(vec![f.neg(xi), Fe::ZERO, Fe::ONE, Fe::ONE]);
    f.roots(&poly).ok()?.first().copied()
}

/// `{t^3 + t^2 : t in k}` in enumeration order.
pub fn cubic_image(f: &Field) -> Vec<Fe> {
    let mut img: Vec<Fe> = f.elements().map(|t| f.add(f.pow(t, 3), f.mul(t, t))).collect();
    img.sort();
    img.dedup();
    img
}

/// Isomorphism classes of solvable three-dimensional algebras.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Solvable3 {
    Abelian,
    /// `[h, x] = x`, `z` central.
    Item2,
    /// `[x, y] = z`.
    Heisenberg,
    /// `k d ⋉ k^2` with `d` acting by the given matrix.
    Scalar,
    Companion(Fe),
    Diagonal,
    NonsplitTorus,
    Jordan,
}

impl Solvable3 {
    pub fn tag(self) -> &'static str {
        match self {
            Solvable3::Abelian => "1",
            Solvable3::Item2 => "2",
            Solvable3::Heisenberg => "3",
            Solvable3::Scalar => "4id",
            Solvable3::Companion(_) => "4xi",
            Solvable3::Diagonal => "4diag",
            Solvable3::NonsplitTorus => "4delta0",
            Solvable3::Jordan => "4jordan",
        }
    }

    pub fn params(self) -> Vec<Fe> {
        match self {
            Solvable3::Companion(xi) => vec![xi],
            _ => Vec::new(),
        }
    }

    pub fn from_tag(tag: &str, params: &[Fe]) -> Option<Solvable3> {
        Some(match (tag, params) {
            ("1", []) => Solvable3::Abelian,
            ("2", []) => Solvable3::Item2,
            ("3", []) => Solvable3::Heisenberg,
            ("4id", []) => Solvable3::Scalar,
            ("4xi", [xi]) => Solvable3::Companion(*xi),
            ("4diag", []) => Solvable3::Diagonal,
            ("4delta0", []) => Solvable3::NonsplitTorus,
            ("4jordan", []) => Solvable3::Jordan,
            _ => return None,
        })
    }

    pub fn format(self, f: &Field) -> String {
        match self {
            Solvable3::Companion(xi) => format!("4xi({})", f.format(xi)),
            s => s.tag().to_string(),
        }
    }

    /// All classes over `f`, in enumeration order.
    pub fn enumerate(f: &Field) -> Vec<Solvable3> {
        let mut out = vec![Solvable3::Abelian, Solvable3::Item2, Solvable3::Heisenberg, Solvable3::Scalar];
        out.extend(f.nonzero_elements().map(Solvable3::Companion));
        if f.p() == 2 {
            out.push(Solvable3::Jordan);
        } else {
            out.push(Solvable3::Diagonal);
            out.push(Solvable3::NonsplitTorus);
        }
        out
    }

    /// Matrix of `ad d` on the derived algebra for the item-4 classes.
    pub fn action_matrix(self, f: &Field) -> Option<Matrix> {
        let m = |a: Fe, b: Fe, c: Fe, d: Fe| Matrix::from_rows(f, &[vec![a, b], vec![c, d]]).unwrap();
        let (o, z) = (Fe::ONE, Fe::ZERO);
        Some(match self {
            Solvable3::Scalar => m(o, z, z, o),
            Solvable3::Companion(xi) => m(z, xi, o, o),
            Solvable3::Diagonal => m(o, z, z, f.neg(o)),
            Solvable3::NonsplitTorus => m(z, f.nonsquare_rep().ok()?, o, z),
            Solvable3::Jordan => m(o, o, z, o),
            _ => return None,
        })
    }

    pub fn admits(self, f: &Field) -> bool {
        match self {
            Solvable3::Companion(xi) => !xi.is_zero(),
            Solvable3::Diagonal | Solvable3::NonsplitTorus => f.p() != 2,
            Solvable3::Jordan => f.p() == 2,
            _ => true,
        }
    }
}

/// The solvable three-dimensional algebra of a class.
pub fn solvable3(f: &Field, s: Solvable3) -> Result<LieAlgebra, CatalogError> {
    if !s.admits(f) {
        return Err(CatalogError::Params {
            label: s.format(f),
            reason: format!("not admissible in characteristic {}", f.p()),
        });
    }
    let alg = match s {
        Solvable3::Abelian => LieAlgebra::abelian(f, 3).with_basis_names(["a", "b", "c"]),
        Solvable3::Item2 => LieAlgebra::from_int_table(f, 3, &[(0, 1, &[(1, 1)])])?.with_basis_names(["h", "x", "z"]),
        Solvable3::Heisenberg => {
            LieAlgebra::from_int_table(f, 3, &[(0, 1, &[(2, 1)])])?.with_basis_names(["x", "y", "z"])
        }
        _ => {
            let m = s.action_matrix(f).expect("item-4 class");
            LieAlgebra::from_fn(f, 3, |i, j| {
                let mut v = vec![Fe::ZERO; 3];
                if i == 0 {
                    v[1] = m.get(0, j - 1);
                    v[2] = m.get(1, j - 1);
                }
                v
            })?
            .with_basis_names(["d", "x", "y"])
        }
    };
    Ok(alg)
}

/// The nonabelian two-dimensional algebra `[h, u] = u`.
pub fn nonabelian2(f: &Field) -> LieAlgebra {
    LieAlgebra::from_int_table(f, 2, &[(0, 1, &[(1, 1)])]).unwrap().with_basis_names(["h", "u"])
}

/// `kh ⊕ ku` with `[h, u] = delta u`.
fn two_dim(f: &Field, delta: i64) -> LieAlgebra {
    LieAlgebra::from_int_table(f, 2, &[(0, 1, &[(1, delta)])]).unwrap().with_basis_names(["h", "u"])
}

/// `sl(2)` on the basis `(e, h, f)` with `[h,e] = 2e`, `[h,f] = -2f`, `[e,f] = h`.
pub fn sl2(f: &Field) -> LieAlgebra {
    LieAlgebra::from_int_table(f, 3, &[(1, 0, &[(0, 2)]), (1, 2, &[(2, -2)]), (0, 2, &[(1, 1)])])
        .expect("sl2 table")
        .with_basis_names(["e", "h", "f"])
}

/// `gl(2) = sl(2) ⊕ kc`.
pub fn gl2(f: &Field) -> LieAlgebra {
    direct_sum(&sl2(f), &LieAlgebra::abelian(f, 1).with_basis_names(["c"])).expect("gl2")
}

/// Binomial coefficient reduced mod p, by Lucas' theorem.
pub fn binomial_mod(n: usize, k: usize, p: u32) -> u32 {
    if k > n {
        return 0;
    }
    let p = p as usize;
    let (mut n, mut k) = (n, k);
    let mut r = 1usize;
    while n > 0 || k > 0 {
        let (a, b) = (n % p, k % p);
        if b > a {
            return 0;
        }
        let mut c = 1usize;
        for i in 0..b {
            c = c * (a - i) / (i + 1);
        }
        r = r * (c % p) % p;
        n /= p;
        k /= p;
    }
    r as u32
}

fn truncation(f: &Field, n: u32) -> usize {
    let top = (f.p() as usize).pow(n);
    assert!(top <= 32, "divided powers are only built up to 32 basis vectors");
    top
}

/// `x^(r) x^(s) = C(r+s, r) x^(r+s)` in `O(1;n)`; `None` when the exponent is truncated.
pub fn divided_power_product(f: &Field, n: u32, r: usize, s: usize) -> Option<(Fe, usize)> {
    let top = truncation(f, n);
    (r + s < top).then(|| (f.from_int(binomial_mod(r + s, r, f.p()) as i64), r + s))
}

/// Coefficient of `x^(a)∂` acting on `x^(b)`: `x^(a) x^(b-1)`.
fn special_derivation(f: &Field, top: usize, a: usize, b: usize) -> Option<(Fe, usize)> {
    if b == 0 || a + b > top {
        return None;
    }
    Some((f.from_int(binomial_mod(a + b - 1, a, f.p()) as i64), a + b - 1))
}

fn witt_name(a: usize) -> String {
    match a {
        0 => "d".into(),
        1 => "xd".into(),
        _ => format!("x{a}d"),
    }
}

/// The Witt algebra `W(1;n)` on the basis `x^(a)∂`, `a = 0..p^n-1`.
pub fn witt(f: &Field, n: u32) -> LieAlgebra {
    let top = truncation(f, n);
    LieAlgebra::from_fn(f, top, |a, b| {
        let mut v = vec![Fe::ZERO; top];
        // [x^(a)∂, x^(b)∂] = x^(a)∂(x^(b)) ∂ - x^(b)∂(x^(a)) ∂
        if let Some((c, k)) = special_derivation(f, top, a, b) {
            v[k] = f.add(v[k], c);
        }
        if let Some((c, k)) = special_derivation(f, top, b, a) {
            v[k] = f.sub(v[k], c);
        }
        v
    })
    .expect("Witt algebra")
    .with_basis_names((0..top).map(witt_name))
}

/// The derived algebra `W(1;n)^(1)` on the RREF basis of `[W, W]`.
pub fn witt_derived(f: &Field, n: u32) -> LieAlgebra {
    let w = witt(f, n);
    let d = w.product_space(&w.whole(), &w.whole());
    let sub = w.subalgebra(&d).expect("derived algebra");
    let names = w.basis_names().unwrap();
    if d.basis().iter().all(|b| b.iter().filter(|a| !a.is_zero()).count() == 1) {
        sub.with_basis_names(d.pivots().iter().map(|&c| names[c].clone()))
    } else {
        sub
    }
}

/// `O(1;n)` as a `W(1;n)`-module on the basis `x^(0..p^n-1)`.
pub fn divided_power_module(f: &Field, n: u32) -> Representation {
    let top = truncation(f, n);
    let w = witt(f, n);
    let acts = (0..top)
        .map(|a| {
            let mut m = Matrix::zeros(f, top, top);
            for b in 0..top {
                if let Some((c, k)) = special_derivation(f, top, a, b) {
                    m.set(k, b, c);
                }
            }
            m
        })
        .collect();
    Representation::new(&w, acts).expect("divided powers form a module")
}

/// `O(1;n)/k` on the basis `x^(1), ..., x^(p^n-1)` (cosets).
pub fn divided_power_quotient_module(f: &Field, n: u32) -> Representation {
    let full = divided_power_module(f, n);
    let top = full.module_dim();
    let acts = full
        .actions()
        .iter()
        .map(|a| {
            let mut m = Matrix::zeros(f, top - 1, top - 1);
            for r in 1..top {
                for c in 1..top {
                    m.set(r - 1, c - 1, a.get(r, c));
                }
            }
            m
        })
        .collect();
    Representation::new(full.source(), acts).expect("the constants form a submodule")
}

/// Restriction of a module to the subalgebra spanned by the first `k` basis vectors,
/// which must themselves form that subalgebra's basis.
fn restrict_module(rep: &Representation, sub: &LieAlgebra) -> Representation {
    Representation::new(sub, rep.actions()[..sub.dim()].to_vec()).expect("restricted module")
}

fn require_char(f: &Field, what: &'static str, p: u32) -> Result<(), CatalogError> {
    if f.p() != p {
        return Err(CatalogError::WrongCharacteristic { what, need: p, got: f.p() });
    }
    Ok(())
}

/// `Der W(1;2)^(1)` in characteristic 2, on the basis `(∂, x∂, x^(2)∂, ∂², x^(3)∂)`
/// with `[∂², x^(a)∂] = x^(a-2)∂`.
pub fn der_w121(f: &Field) -> Result<LieAlgebra, CatalogError> {
    require_char(f, "Der W(1;2)^(1)", 2)?;
    let w = witt(f, 2);
    // Position of each Der basis vector inside W(1;2), or None for ∂².
    let pos = [Some(0), Some(1), Some(2), None, Some(3)];
    let to_der = |wv: &[Fe]| -> Vec<Fe> { vec![wv[0], wv[1], wv[2], Fe::ZERO, wv[3]] };
    let alg = LieAlgebra::from_fn(f, 5, |i, j| match (pos[i], pos[j]) {
        (Some(a), Some(b)) => to_der(w.bracket_basis(a, b)),
        (None, Some(b)) | (Some(b), None) => {
            let mut v = vec![Fe::ZERO; 5];
            if b >= 2 {
                let target = [0, 1][b - 2];
                v[target] = if pos[i].is_none() { Fe::ONE } else { f.neg(Fe::ONE) };
            }
            v
        }
        (None, None) => vec![Fe::ZERO; 5],
    })?;
    Ok(alg.with_basis_names(["d", "xd", "x2d", "d2", "x3d"]))
}

/// The automorphism of [`der_w121`] with parameters satisfying `αδ + βγ = 1`,
/// as the matrix whose columns are the images of the basis.
pub fn der_w121_automorphism(f: &Field, alpha: Fe, beta: Fe, gamma: Fe, delta: Fe) -> Result<Matrix, CatalogError> {
    require_char(f, "Der W(1;2)^(1)", 2)?;
    if f.add(f.mul(alpha, delta), f.mul(beta, gamma)) != Fe::ONE {
        return Err(CatalogError::Params {
            label: "Der W(1;2)^(1) automorphism".into(),
            reason: "needs αδ + βγ = 1".into(),
        });
    }
    let z = Fe::ZERO;
    let sq = |a: Fe| f.mul(a, a);
    let cols = vec![
        vec![alpha, z, beta, z, z],
        vec![z, Fe::ONE, z, z, z],
        vec![gamma, z, delta, z, z],
        vec![z, f.mul(alpha, beta), z, sq(alpha), sq(beta)],
        vec![z, f.mul(gamma, delta), z, sq(gamma), sq(delta)],
    ];
    Ok(Matrix::from_columns(f, 5, &cols))
}

/// The restricted module `V(alpha)` of `sl(2)`: basis `v_i = f^i v_0`,
/// `h v_i = (alpha - 2i) v_i`, `e v_i = i(alpha - i + 1) v_{i-1}`.
pub fn module_v(f: &Field, alpha: u32) -> Result<Representation, CatalogError> {
    if alpha >= f.p() {
        return Err(CatalogError::Params { label: format!("V({alpha})"), reason: "weight must be below p".into() });
    }
    let d = alpha as usize + 1;
    let a = alpha as i64;
    let mut e = Matrix::zeros(f, d, d);
    let mut h = Matrix::zeros(f, d, d);
    let mut fm = Matrix::zeros(f, d, d);
    for i in 0..d {
        let ii = i as i64;
        h.set(i, i, f.from_int(a - 2 * ii));
        if i + 1 < d {
            fm.set(i + 1, i, Fe::ONE);
        }
        if i > 0 {
            e.set(i - 1, i, f.from_int(ii * (a - ii + 1)));
        }
    }
    Ok(Representation::new(&sl2(f), vec![e, h, fm])?)
}

/// The three-dimensional `sl(2)`-module with character `(1, 0, xi)` in characteristic 3.
pub fn module_v2chi(f: &Field, xi: Fe) -> Result<Representation, CatalogError> {
    require_char(f, "V(2, chi)", 3)?;
    let kappa = cubic_root(f, xi).ok_or_else(|| CatalogError::UnsolvableCubic(f.format(xi)))?;
    let lambda = f.pow(kappa, 3);
    let e = Matrix::from_ints(f, &[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]]);
    let h = Matrix::from_ints(f, &[&[0, 0, 0], &[0, 2, 0], &[0, 0, 1]]);
    let mut fm = Matrix::zeros(f, 3, 3);
    fm.set(2, 0, lambda);
    fm.set(0, 1, lambda);
    fm.set(1, 2, f.add(lambda, Fe::ONE));
    Ok(Representation::new(&sl2(f), vec![e, h, fm])?)
}

/// The nonsplit five-dimensional algebra in characteristic 3, basis `(e, h, f, v0, v1)`.
pub fn l1_nonsplit(f: &Field) -> Result<LieAlgebra, CatalogError> {
    require_char(f, "L1", 3)?;
    let (e, h, ff, v0, v1) = (0, 1, 2, 3, 4);
    let alg = LieAlgebra::from_int_table(
        f,
        5,
        &[
            (h, e, &[(e, -1), (v1, 1)]),
            (h, ff, &[(ff, 1)]),
            (e, ff, &[(h, 1)]),
            (h, v0, &[(v0, 1)]),
            (h, v1, &[(v1, -1)]),
            (e, v1, &[(v0, 1)]),
            (ff, v0, &[(v1, 1)]),
        ],
    )?;
    Ok(alg.with_basis_names(["e", "h", "f", "v0", "v1"]))
}

/// The outer derivations `d1: e -> v1` and `d2: f -> v0` of `L1`.
pub fn l1_outer_derivations(f: &Field) -> Result<[Matrix; 2], CatalogError> {
    require_char(f, "L1", 3)?;
    let mut d1 = Matrix::zeros(f, 5, 5);
    d1.set(4, 0, Fe::ONE);
    let mut d2 = Matrix::zeros(f, 5, 5);
    d2.set(3, 2, Fe::ONE);
    Ok([d1, d2])
}

/// `Der L1` on the basis `(d1, d2, e, h, f, v0, v1)`.
pub fn der_l1(f: &Field) -> Result<LieAlgebra, CatalogError> {
    let l1 = l1_nonsplit(f)?;
    let (d1, d2) = (0, 1);
    let (e, ff, v0, v1) = (2, 4, 5, 6);
    let mut table: Vec<(usize, usize, Vec<_>)> = vec![(d1, e, vec![(v1, 1)]), (d2, ff, vec![(v0, 1)])];
    for (i, j, v) in l1.nonzero_brackets() {
        let terms = v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (k + 2, c.0 as i64)).collect();
        table.push((i + 2, j + 2, terms));
    }
    let refs: Vec<IntBracket> = table.iter().map(|(i, j, t)| (*i, *j, t.as_slice())).collect();
    Ok(LieAlgebra::from_int_table(f, 7, &refs)?.with_basis_names(["d1", "d2", "e", "h", "f", "v0", "v1"]))
}

/// Central extension of `L1` with `[e, v0] = alpha z` and `[v0, v1] = beta z`.
pub fn l1_central_ext(f: &Field, alpha: i64, beta: i64) -> Result<LieAlgebra, CatalogError> {
    let l1 = l1_nonsplit(f)?;
    let omega = Cocycle2::new(&l1, &[(0, 3, f.from_int(alpha)), (3, 4, f.from_int(beta))])?;
    Ok(central_extension(&l1, &omega)?)
}

/// The nonsplit central extension of `W(1;1)` in characteristic 5, basis
/// `e_{-1}, ..., e_3, z` with `[e_i, e_j] = (j - i) e_{i+j}` and `[e_2, e_3] = z`.
pub fn witt_central_ext(f: &Field) -> Result<LieAlgebra, CatalogError> {
    require_char(f, "central extension of W(1;1)", 5)?;
    let alg = LieAlgebra::from_fn(f, 6, |a, b| {
        let mut v = vec![Fe::ZERO; 6];
        if b == 5 {
            return v;
        }
        let (i, j) = (a as i64 - 1, b as i64 - 1);
        if (-1..=3).contains(&(i + j)) {
            v[(i + j + 1) as usize] = f.from_int(j - i);
        }
        if (i, j) == (2, 3) {
            v[5] = Fe::ONE;
        }
        v
    })?;
    Ok(alg.with_basis_names(["e-1", "e0", "e1", "e2", "e3", "z"]))
}

/// Module on which only the basis vector `idx` acts, by the matrix `m`.
fn single_action(src: &LieAlgebra, idx: usize, m: &Matrix) -> Result<Representation, CatalogError> {
    let d = m.rows();
    let mut acts = vec![Matrix::zeros(src.field(), d, d); src.dim()];
    acts[idx] = m.clone();
    Ok(Representation::new(src, acts)?)
}

/// The quadratic extension of `f` used for restriction of scalars.
pub fn quadratic_extension(f: &Field) -> Result<Field, CatalogError> {
    Ok(Field::new(f.p(), 2 * f.m(), None)?)
}

/// Builds the algebra of a class over `f`.
pub fn build(label: &ClassLabel, f: &Field) -> Result<LieAlgebra, CatalogError> {
    label.validate(f)?;
    let name = label.format(f);
    let alg = build_inner(label, f)?;
    Ok(alg.with_name(name))
}

fn build_inner(label: &ClassLabel, f: &Field) -> Result<LieAlgebra, CatalogError> {
    let xi = label.params.first().copied();
    let item = label.item.as_str();
    let ab = |n| LieAlgebra::abelian(f, n);
    Ok(match label.theorem.as_str() {
        "3.1" => match item {
            "W" => witt_derived(f, 2),
            _ => sl2(f),
        },
        "4.1" => match item {
            "W" => witt(f, 2),
            "Wc" => direct_sum(&witt_derived(f, 2), &ab(1).with_basis_names(["c"]))?,
            _ => gl2(f),
        },
        "4.2" => {
            let w1 = witt_derived(f, 2);
            match item {
                "1" => der_w121(f)?,
                "2-delta0" | "2-delta1" => {
                    let delta = i64::from(item == "2-delta1");
                    let w = witt(f, 2);
                    let rep = single_action(&w, 3, &Matrix::from_ints(f, &[&[delta]]))?;
                    semidirect_sum(&w, &rep, &ab(1).with_basis_names(["u"]))?
                }
                _ => {
                    let delta = i64::from(item == "3-delta1");
                    direct_sum(&w1, &two_dim(f, delta))?
                }
            }
        }
        "4.3" => match item {
            "1" => witt(f, 1),
            "2a" => direct_sum(&sl2(f), &ab(2).with_basis_names(["a", "b"]))?,
            "2b" => direct_sum(&sl2(f), &nonabelian2(f))?,
            "2c" => semidirect_sum(&sl2(f), &module_v(f, 1)?, &ab(2).with_basis_names(["v0", "v1"]))?,
            _ => l1_nonsplit(f)?,
        },
        "6.1" => build_t61(item, xi, f)?,
        "6.2" => match item {
            "1a" => direct_sum(&sl2(f), &sl2(f))?,
            "1b" => restrict_scalars(&sl2(&quadratic_extension(f)?), f)?,
            "2a" => direct_sum(&witt(f, 1), &ab(1).with_basis_names(["c"]))?,
            _ => witt_central_ext(f)?,
        },
        "6.3" => build_t63(item, xi, f)?,
        "6.4" => match item {
            "ext00" => l1_central_ext(f, 0, 0)?,
            "ext01" => l1_central_ext(f, 0, 1)?,
            "ext10" => l1_central_ext(f, 1, 0)?,
            _ => {
                let [d1, d2] = l1_outer_derivations(f)?;
                let d = if item == "d1" { d1 } else { d2 };
                adjoin_derivation(&l1_nonsplit(f)?, &d)?
            }
        },
        _ => return Err(CatalogError::UnknownLabel(label.format(f))),
    })
}

fn nested_solvable(item: &str, prefix: &str, xi: Option<Fe>) -> Option<Solvable3> {
    let tag = item.strip_prefix(prefix)?;
    let params: Vec<Fe> = xi.into_iter().collect();
    Solvable3::from_tag(tag, &params)
}

fn build_t61(item: &str, xi: Option<Fe>, f: &Field) -> Result<LieAlgebra, CatalogError> {
    let w = witt(f, 2);
    let w1 = witt_derived(f, 2);
    let rad2 = |m: &Matrix| -> Result<LieAlgebra, CatalogError> {
        let rep = single_action(&w, 3, m)?;
        Ok(semidirect_sum(&w, &rep, &LieAlgebra::abelian(f, 2).with_basis_names(["u", "v"]))?)
    };
    Ok(match item {
        "1a" => direct_sum(&w1, &w1)?,
        "1b" => restrict_scalars(&witt_derived(&quadratic_extension(f)?, 2), f)?,
        "2-delta0" | "2-delta1" => {
            let der = der_w121(f)?;
            let delta = i64::from(item == "2-delta1");
            let rep = single_action(&der, 3, &Matrix::from_ints(f, &[&[delta]]))?;
            semidirect_sum(&der, &rep, &LieAlgebra::abelian(f, 1).with_basis_names(["u"]))?
        }
        "3a-zero" => rad2(&Matrix::from_ints(f, &[&[0, 0], &[0, 0]]))?,
        "3a-nil" => rad2(&Matrix::from_ints(f, &[&[0, 1], &[0, 0]]))?,
        "3a-id" => rad2(&Matrix::from_ints(f, &[&[1, 0], &[0, 1]]))?,
        "3a-jordan" => rad2(&Matrix::from_ints(f, &[&[1, 1], &[0, 1]]))?,
        "3a" => {
            let xi = xi.expect("validated parameter");
            rad2(&Matrix::from_rows(f, &[vec![Fe::ZERO, xi], vec![Fe::ONE, Fe::ONE]]).unwrap())?
        }
        "3b-delta0" | "3b-delta1" => {
            let delta = i64::from(item == "3b-delta1");
            let rep = single_action(&w, 3, &Matrix::from_ints(f, &[&[0, 0], &[0, delta]]))?;
            semidirect_sum(&w, &rep, &nonabelian2(f))?
        }
        "4b" | "4c" => {
            let module = restrict_module(&divided_power_quotient_module(f, 2), &w1);
            let split = semidirect_sum(&w1, &module, &LieAlgebra::abelian(f, 3).with_basis_names(["v1", "v2", "v3"]))?;
            if item == "4b" {
                split
            } else {
                // Same table except [h, e] = e + v3.
                let mut brackets = split.nonzero_brackets();
                for (i, j, v) in brackets.iter_mut() {
                    if (*i, *j) == (0, 1) {
                        v[5] = f.add(v[5], Fe::ONE);
                    }
                }
                LieAlgebra::new(f, 6, &brackets)?.with_basis_names(["e", "h", "f", "v1", "v2", "v3"])
            }
        }
        _ => {
            let s = nested_solvable(item, "4a-", xi).ok_or_else(|| CatalogError::UnknownLabel(item.into()))?;
            direct_sum(&w1, &solvable3(f, s)?)?
        }
    })
}

fn build_t63(item: &str, xi: Option<Fe>, f: &Field) -> Result<LieAlgebra, CatalogError> {
    let s = sl2(f);
    let ab3 = |names: [&str; 3]| LieAlgebra::abelian(f, 3).with_basis_names(names);
    Ok(match item {
        "2-V0V1" => {
            let rep = module_v(f, 0)?.direct_sum(&module_v(f, 1)?)?;
            semidirect_sum(&s, &rep, &ab3(["c", "v0", "v1"]))?
        }
        "2-V2" => semidirect_sum(&s, &module_v(f, 2)?, &ab3(["v0", "v1", "v2"]))?,
        "3a" => semidirect_sum(&s, &module_v2chi(f, xi.expect("validated parameter"))?, &ab3(["w0", "w1", "w2"]))?,
        "3b" | "3c" | "5" => {
            let w = witt(f, 1);
            let o = divided_power_module(f, 1);
            let names = ["1", "x", "x2"];
            match item {
                "3b" => semidirect_sum(&w, &o, &ab3(names))?,
                "3c" => semidirect_sum(&w, &o.dual(), &ab3(["1*", "x*", "x2*"]))?,
                _ => {
                    let heis = LieAlgebra::from_int_table(f, 3, &[(1, 2, &[(0, 1)])])?.with_basis_names(names);
                    semidirect_sum(&w, &o, &heis)?
                }
            }
        }
        "4" => {
            let rep = module_v(f, 1)?.direct_sum(&module_v(f, 0)?)?;
            let heis = LieAlgebra::from_int_table(f, 3, &[(0, 1, &[(2, 1)])])?.with_basis_names(["v0", "v1", "z"]);
            semidirect_sum(&s, &rep, &heis)?
        }
        "6" => {
            let rep = module_v(f, 0)?.direct_sum(&module_v(f, 1)?)?;
            let rad = LieAlgebra::from_int_table(f, 3, &[(0, 1, &[(1, 1)]), (0, 2, &[(2, 1)])])?
                .with_basis_names(["d", "v0", "v1"]);
            semidirect_sum(&s, &rep, &rad)?
        }
        _ => {
            let sub = nested_solvable(item, "1-", xi).ok_or_else(|| CatalogError::UnknownLabel(item.into()))?;
            direct_sum(&s, &solvable3(f, sub)?)?
        }
    })
}

/// Structural data implied by a label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LabelProfile {
    pub dim_radical: usize,
    pub dim_center: usize,
    pub radical_abelian: bool,
    /// `dim [L, L]`.
    pub derived_dim: usize,
    /// Whether the radical has a complementary subalgebra.
    pub split: bool,
}

fn solvable3_profile(s: Solvable3) -> (usize, usize) {
    // (dim center, dim derived algebra)
    match s {
        Solvable3::Abelian => (3, 0),
        Solvable3::Item2 | Solvable3::Heisenberg => (1, 1),
        _ => (0, 2),
    }
}

/// The structural profile of a label, read off the defining construction.
pub fn profile(label: &ClassLabel) -> LabelProfile {
    let pr = |dim_radical, dim_center, radical_abelian, derived_dim| LabelProfile {
        dim_radical,
        dim_center,
        radical_abelian,
        derived_dim,
        split: true,
    };
    let item = label.item.as_str();
    let xi = label.params.first().copied();
    match (label.theorem.as_str(), item) {
        ("3.1", _) => pr(0, 0, true, 3),
        ("4.1", "W") => pr(0, 0, true, 3),
        ("4.1", _) => pr(1, 1, true, 3),
        ("4.2", "1") => pr(0, 0, true, 3),
        ("4.2", "2-delta0") => pr(1, 1, true, 3),
        ("4.2", "2-delta1") => pr(1, 0, true, 4),
        ("4.2", "3-delta0") => pr(2, 2, true, 3),
        ("4.2", "3-delta1") => pr(2, 0, false, 4),
        ("4.3", "1") => pr(0, 0, true, 5),
        ("4.3", "2a") => pr(2, 2, true, 3),
        ("4.3", "2b") => pr(2, 0, false, 4),
        ("4.3", "2c") => pr(2, 0, true, 5),
        ("4.3", _) => LabelProfile { split: false, ..pr(2, 0, true, 5) },
        ("6.1", "1a" | "1b") => pr(0, 0, true, 6),
        ("6.1", "2-delta0") => pr(1, 1, true, 3),
        ("6.1", "2-delta1") => pr(1, 0, true, 4),
        ("6.1", "3a-zero") => pr(2, 2, true, 3),
        ("6.1", "3a-nil") => pr(2, 1, true, 4),
        ("6.1", "3a-id" | "3a-jordan" | "3a") => pr(2, 0, true, 5),
        ("6.1", "3b-delta0" | "3b-delta1") => pr(2, 0, false, 4),
        ("6.1", "4b") => pr(3, 0, true, 6),
        ("6.1", "4c") => LabelProfile { split: false, ..pr(3, 0, true, 6) },
        ("6.1", _) => {
            let s = nested_solvable(item, "4a-", xi).expect("valid label");
            let (c, d) = solvable3_profile(s);
            pr(3, c, s == Solvable3::Abelian, 3 + d)
        }
        ("6.2", "1a" | "1b") => pr(0, 0, true, 6),
        ("6.2", "2a") => pr(1, 1, true, 5),
        ("6.2", _) => LabelProfile { split: false, ..pr(1, 1, true, 6) },
        ("6.3", "2-V0V1") => pr(3, 1, true, 5),
        ("6.3", "2-V2" | "3a" | "3b") => pr(3, usize::from(item == "3b"), true, 6),
        ("6.3", "3c") => pr(3, 0, true, 5),
        ("6.3", "4") => pr(3, 1, false, 6),
        ("6.3", "5") => pr(3, 1, false, 6),
        ("6.3", "6") => pr(3, 0, false, 5),
        ("6.3", _) => {
            let s = nested_solvable(item, "1-", xi).expect("valid label");
            let (c, d) = solvable3_profile(s);
            pr(3, c, s == Solvable3::Abelian, 3 + d)
        }
        ("6.4", "ext00") => LabelProfile { split: false, ..pr(3, 1, true, 5) },
        ("6.4", "ext01") => LabelProfile { split: false, ..pr(3, 1, false, 6) },
        ("6.4", "ext10") => LabelProfile { split: false, ..pr(3, 1, true, 6) },
        ("6.4", _) => LabelProfile { split: false, ..pr(3, 0, true, 5) },
        _ => unreachable!("labels come from the master table"),
    }
}

impl fmt::Display for CharCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CharCondition::Two => "p = 2",
            CharCondition::Odd => "p >= 3",
            CharCondition::Three => "p = 3",
            CharCondition::Five => "p = 5",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn witt_brackets() {
        let f2 = Field::prime(2).unwrap();
        let w = witt(&f2, 2);
        assert_eq!(w.dim(), 4);
        // [∂, x^(2)∂] = x∂
        assert_eq!(w.bracket_basis(0, 2), &[Fe(0), Fe(1), Fe(0), Fe(0)]);
        assert_eq!(witt_derived(&f2, 2).dim(), 3);
        assert_eq!(witt(&Field::prime(5).unwrap(), 1).dim(), 5);
    }

    #[test]
    fn divided_powers() {
        let f2 = Field::prime(2).unwrap();
        assert_eq!(divided_power_module(&f2, 2).module_dim(), 4);
        assert_eq!(divided_power_product(&f2, 2, 1, 1), Some((Fe(0), 2)));
        assert_eq!(divided_power_quotient_module(&f2, 2).module_dim(), 3);
        assert_eq!(binomial_mod(4, 2, 2), 0);
        assert_eq!(binomial_mod(5, 2, 3), 1);
    }

    #[test]
    fn label_round_trip() {
        let f4 = Field::new(2, 2, None).unwrap();
        let l = ClassLabel::parse("T6.1.3a(x+1)", &f4).unwrap();
        assert_eq!(l.params, vec![Fe(3)]);
        assert_eq!(l.format(&f4), "T6.1.3a(x+1)");
        assert!(ClassLabel::parse("T6.1.3a(0)", &f4).is_err());
        assert!(ClassLabel::parse("T6.3.3a(1)", &Field::prime(3).unwrap()).is_err());
        assert!(ClassLabel::parse("T3.1.sl2", &f4).is_err());
        assert!(ClassLabel::parse("T9.9.x", &f4).is_err());
    }

    #[test]
    fn v1_action() {
        let f5 = Field::prime(5).unwrap();
        let v = module_v(&f5, 1).unwrap();
        let [e, h, fm] = [&v.actions()[0], &v.actions()[1], &v.actions()[2]];
        assert_eq!(e.column(1), vec![Fe(1), Fe(0)]);
        assert_eq!(fm.column(0), vec![Fe(0), Fe(1)]);
        assert_eq!(h.column(0), vec![Fe(1), Fe(0)]);
        assert_eq!(module_v(&f5, 0).unwrap().module_dim(), 1);
    }

    #[test]
    fn v2chi_cubes() {
        let f3 = Field::prime(3).unwrap();
        let v = module_v2chi(&f3, Fe(2)).unwrap();
        let fm = &v.actions()[2];
        assert_eq!(fm.pow(3), Matrix::identity(&f3, 3).scale(Fe(2)));
        assert!(matches!(module_v2chi(&f3, Fe(1)), Err(CatalogError::UnsolvableCubic(_))));
    }

    #[test]
    fn special_algebras() {
        let f3 = Field::prime(3).unwrap();
        let l1 = l1_nonsplit(&f3).unwrap();
        assert_eq!(l1.bracket_basis(1, 0), &[f3.from_int(-1), Fe(0), Fe(0), Fe(0), Fe(1)]);
        assert_eq!(der_l1(&f3).unwrap().dim(), 7);
        let ext = l1_central_ext(&f3, 1, 0).unwrap();
        assert_eq!(ext.bracket_basis(0, 3), &[Fe(0), Fe(0), Fe(0), Fe(0), Fe(0), Fe(1)]);
        // [v0, v1] = z is not a cocycle: Jacobi fails on (e, h, v0).
        assert_eq!(l1_central_ext(&f3, 0, 1).unwrap_err(), CatalogError::Lie(LieError::Cocycle(0, 1, 3)));
        let f5 = Field::prime(5).unwrap();
        let wc = witt_central_ext(&f5).unwrap();
        assert_eq!(wc.bracket_basis(3, 4)[5], Fe(1));
        assert_eq!(wc.bracket_basis(0, 2)[1], Fe(2));
        assert_eq!(wc.center().dim(), 1);
        assert!(l1_nonsplit(&f5).is_err());
    }
}
