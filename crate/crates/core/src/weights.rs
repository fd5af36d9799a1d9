//! Weights of Γ = GL2(F_{p^2}) and their Iwahori characters.
//!
//! A [`Weight`] `(a0, a1, m)` names `Sym^a0 ⊗ (Sym^a1)^Frob ⊗ det^m`. The
//! matrix model realizes `Sym^r` on homogeneous polynomials of degree r in
//! `x, y` with basis `x^r, x^(r-1) y, ..., y^r`, and `g = [[a, b], [c, d]]`
//! acts by substitution `x -> a x + c y`, `y -> b x + d y`. Under this
//! convention the upper unipotent group fixes `x^r` and `diag(a, d)` scales
//! it by `a^r`. The tensor basis is ordered with the `Sym^a0` index major,
//! so the invariant line is basis vector 0 and the character on it is
//! `diag(a, d) -> a^(a0 + p a1 + m) d^m`.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::Exec;
use crate::ffield::{FElem, Field, FieldError};
use crate::linalg::{closure_under, Matrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeightError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("weight ({a0}, {a1}, {m}) out of range for p = {p}")]
    OutOfRange { p: u32, a0: i64, a1: i64, m: i64 },
    #[error("singular character ({0}, {0}) matches more than one weight")]
    SingularCharacter(u32),
    #[error("no weight has character ({e_a}, {e_d})")]
    NoMatch { e_a: u32, e_d: u32 },
    #[error("character ({e_a}, {e_d}) matches {count} weights")]
    Ambiguous { e_a: u32, e_d: u32, count: usize },
    #[error("singular matrix")]
    Singular,
    #[error("U-invariants of {weight:?} have dimension {dim}, expected 1")]
    InvariantDimension { weight: Weight, dim: usize },
    #[error("invariant line of {0:?} is not a torus eigenline")]
    NotEigenline(Weight),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Weight {
    pub a0: u32,
    pub a1: u32,
    pub m: u32,
}

impl Weight {
    /// Validates `0 <= a0, a1 <= p - 1`; `m` is reduced mod `p^2 - 1`.
    pub fn new(p: u32, a0: i64, a1: i64, m: i64) -> Result<Weight, WeightError> {
        let top = p as i64 - 1;
        if !(0..=top).contains(&a0) || !(0..=top).contains(&a1) {
            return Err(WeightError::OutOfRange { p, a0, a1, m });
        }
        Ok(Weight {
            a0: a0 as u32,
            a1: a1 as u32,
            m: m.rem_euclid(units_order(p) as i64) as u32,
        })
    }

    pub fn dim(&self) -> usize {
        weight_dim(self)
    }

    pub fn is_valid(&self, p: u32) -> bool {
        self.a0 < p && self.a1 < p && self.m < units_order(p)
    }
}

/// `p^2 - 1`, the order of F_{p^2}^×.
pub fn units_order(p: u32) -> u32 {
    p * p - 1
}

pub fn weight_dim(w: &Weight) -> usize {
    (w.a0 as usize + 1) * (w.a1 as usize + 1)
}

/// Every weight for `p`, ordered by `(a0, a1, m)`.
pub fn all_weights(p: u32) -> Vec<Weight> {
    let q = units_order(p);
    (0..p)
        .flat_map(|a0| (0..p).flat_map(move |a1| (0..q).map(move |m| Weight { a0, a1, m })))
        .collect()
}

/// A character of the diagonal torus `diag(a, d) -> a^e_a d^e_d`, exponents
/// mod `p^2 - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CharExp {
    pub e_a: u32,
    pub e_d: u32,
}

impl CharExp {
    pub fn new(p: u32, e_a: i64, e_d: i64) -> CharExp {
        let q = units_order(p) as i64;
        CharExp {
            e_a: e_a.rem_euclid(q) as u32,
            e_d: e_d.rem_euclid(q) as u32,
        }
    }

    /// Conjugation by Π swaps the diagonal entries.
    pub fn conjugate(self) -> CharExp {
        char_conjugate(self)
    }

    pub fn is_regular(self) -> bool {
        self.e_a != self.e_d
    }

    /// Exponent of the central character `z -> z^(e_a + e_d)`.
    pub fn central(self, p: u32) -> u32 {
        (self.e_a + self.e_d) % units_order(p)
    }
}

pub fn char_conjugate(chi: CharExp) -> CharExp {
    CharExp {
        e_a: chi.e_d,
        e_d: chi.e_a,
    }
}

/// Closed form `(a0 + p a1 + m, m)`.
pub fn torus_character(p: u32, w: &Weight) -> CharExp {
    CharExp::new(
        p,
        w.a0 as i64 + p as i64 * w.a1 as i64 + w.m as i64,
        w.m as i64,
    )
}

/// The unique weight with character `chi`, by scanning all weights.
pub fn weight_from_character(p: u32, chi: CharExp) -> Result<Weight, WeightError> {
    if !chi.is_regular() {
        return Err(WeightError::SingularCharacter(chi.e_a));
    }
    let matches: Vec<Weight> = all_weights(p)
        .into_iter()
        .filter(|w| torus_character(p, w) == chi)
        .collect();
    match matches.as_slice() {
        [w] => Ok(*w),
        [] => Err(WeightError::NoMatch {
            e_a: chi.e_a,
            e_d: chi.e_d,
        }),
        _ => Err(WeightError::Ambiguous {
            e_a: chi.e_a,
            e_d: chi.e_d,
            count: matches.len(),
        }),
    }
}

/// σ ↦ σ^s, the weight whose character is the Π-conjugate of χ_σ.
pub fn weight_s(p: u32, w: &Weight) -> Result<Weight, WeightError> {
    weight_from_character(p, torus_character(p, w).conjugate())
}

/// An invertible 2×2 matrix `[[a, b], [c, d]]` over F_{p^2}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GammaElem {
    entries: [FElem; 4],
}

impl GammaElem {
    pub fn new(f: &Field, a: FElem, b: FElem, c: FElem, d: FElem) -> Result<GammaElem, WeightError> {
        let det = f.sub(f.mul(a, d), f.mul(b, c));
        if det.is_zero() {
            return Err(WeightError::Singular);
        }
        Ok(GammaElem {
            entries: [a, b, c, d],
        })
    }

    pub fn identity(f: &Field) -> GammaElem {
        GammaElem {
            entries: [f.one(), f.zero(), f.zero(), f.one()],
        }
    }

    pub fn diag(f: &Field, a: FElem, d: FElem) -> Result<GammaElem, WeightError> {
        Self::new(f, a, f.zero(), f.zero(), d)
    }

    pub fn upper(f: &Field, b: FElem) -> GammaElem {
        GammaElem {
            entries: [f.one(), b, f.zero(), f.one()],
        }
    }

    pub fn lower(f: &Field, c: FElem) -> GammaElem {
        GammaElem {
            entries: [f.one(), f.zero(), c, f.one()],
        }
    }

    pub fn entries(&self) -> [FElem; 4] {
        self.entries
    }

    pub fn det(&self, f: &Field) -> FElem {
        let [a, b, c, d] = self.entries;
        f.sub(f.mul(a, d), f.mul(b, c))
    }

    pub fn mul(&self, f: &Field, other: &GammaElem) -> GammaElem {
        let [a, b, c, d] = self.entries;
        let [e, g, h, k] = other.entries;
        GammaElem {
            entries: [
                f.add(f.mul(a, e), f.mul(b, h)),
                f.add(f.mul(a, g), f.mul(b, k)),
                f.add(f.mul(c, e), f.mul(d, h)),
                f.add(f.mul(c, g), f.mul(d, k)),
            ],
        }
    }

    pub fn frobenius(&self, f: &Field) -> GammaElem {
        GammaElem {
            entries: self.entries.map(|x| f.frobenius(x)),
        }
    }

    pub fn random<R: Rng + ?Sized>(f: &Field, rng: &mut R) -> GammaElem {
        loop {
            let e: [FElem; 4] = std::array::from_fn(|_| {
                f.from_packed(rng.gen_range(0..f.order())).expect("in range")
            });
            if let Ok(g) = Self::new(f, e[0], e[1], e[2], e[3]) {
                return g;
            }
        }
    }
}

/// How `g` substitutes into the polynomial variables. `Transposed` is a
/// deliberately wrong convention kept as a mutation hook for self-tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SymConvention {
    #[default]
    Standard,
    Transposed,
}

/// Matrix model of the weights of GL2(F_{p^2}).
#[derive(Debug, Clone)]
pub struct WeightModel {
    p: u32,
    field: Field,
    convention: SymConvention,
}

impl WeightModel {
    pub fn new(p: u32) -> Result<WeightModel, WeightError> {
        Self::with_convention(p, SymConvention::Standard)
    }

    pub fn with_convention(p: u32, convention: SymConvention) -> Result<WeightModel, WeightError> {
        Ok(WeightModel {
            p,
            field: Field::new(p, 2)?,
            convention,
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// `Sym^r(g)` in the basis `x^r, x^(r-1) y, ..., y^r`.
    pub fn sym_matrix(&self, r: u32, g: &GammaElem) -> Matrix {
        let f = &self.field;
        let [a, b, c, d] = g.entries;
        // (coefficient of x, coefficient of y) for the images of x and y
        let (img_x, img_y) = match self.convention {
            SymConvention::Standard => ([a, c], [b, d]),
            SymConvention::Transposed => ([a, b], [c, d]),
        };
        let r = r as usize;
        let mut out = Matrix::zeros(r + 1, r + 1);
        for j in 0..=r {
            // image of x^(r-j) y^j as coefficients indexed by the power of y
            let mut poly = vec![f.one()];
            for _ in 0..(r - j) {
                poly = mul_linear(f, &poly, img_x);
            }
            for _ in 0..j {
                poly = mul_linear(f, &poly, img_y);
            }
            for (i, &coef) in poly.iter().enumerate() {
                out.set(i, j, coef);
            }
        }
        out
    }

    pub fn weight_matrix(&self, w: &Weight, g: &GammaElem) -> Matrix {
        let f = &self.field;
        let left = self.sym_matrix(w.a0, g);
        let right = self.sym_matrix(w.a1, &g.frobenius(f));
        let det_m = f.pow(g.det(f), w.m as u64);
        left.kronecker(f, &right).scale(f, det_m)
    }

    /// `[[1, 1], [0, 1]]` and `[[1, t], [0, 1]]`; they generate U(F_{p^2}).
    pub fn u_generators(&self) -> [GammaElem; 2] {
        let f = &self.field;
        [GammaElem::upper(f, f.one()), GammaElem::upper(f, f.t())]
    }

    /// Elementary matrices over the basis {1, t} plus `diag(ζ, 1)`.
    pub fn gamma_generators(&self) -> Vec<GammaElem> {
        let f = &self.field;
        let zeta = f.mult_generator();
        vec![
            GammaElem::upper(f, f.one()),
            GammaElem::upper(f, f.t()),
            GammaElem::lower(f, f.one()),
            GammaElem::lower(f, f.t()),
            GammaElem::diag(f, zeta, f.one()).expect("ζ is a unit"),
        ]
    }

    /// Basis of the U(F_{p^2})-invariants. These coincide with the
    /// I₁-invariants because K₁ acts trivially and I₁ maps onto U.
    pub fn u_invariant_space(&self, w: &Weight) -> Vec<Vec<FElem>> {
        let f = &self.field;
        let id = Matrix::identity(f, w.dim());
        let [u1, ut] = self.u_generators();
        let system = self
            .weight_matrix(w, &u1)
            .sub(f, &id)
            .stack(&self.weight_matrix(w, &ut).sub(f, &id));
        system.kernel(f)
    }

    /// The U-invariant line; its dimension is always 1.
    pub fn u_invariants(&self, w: &Weight) -> Result<Vec<FElem>, WeightError> {
        let mut space = self.u_invariant_space(w);
        if space.len() != 1 {
            return Err(WeightError::InvariantDimension {
                weight: *w,
                dim: space.len(),
            });
        }
        Ok(space.pop().unwrap())
    }

    /// Character of the torus on the invariant line, read off the matrices
    /// of `diag(ζ, 1)` and `diag(1, ζ)` by discrete logarithm.
    pub fn character_from_matrices(&self, w: &Weight) -> Result<CharExp, WeightError> {
        let f = &self.field;
        let v = self.u_invariants(w)?;
        let zeta = f.mult_generator();
        let eigen = |g: GammaElem| -> Result<u64, WeightError> {
            let image = self.weight_matrix(w, &g).apply(f, &v);
            let k = v.iter().position(|x| !x.is_zero()).expect("nonzero line");
            let ratio = f.div(image[k], v[k])?;
            if image.iter().zip(&v).any(|(&y, &x)| y != f.mul(ratio, x)) {
                return Err(WeightError::NotEigenline(*w));
            }
            f.log(ratio).ok_or(WeightError::NotEigenline(*w))
        };
        let e_a = eigen(GammaElem::diag(f, zeta, f.one())?)?;
        let e_d = eigen(GammaElem::diag(f, f.one(), zeta)?)?;
        Ok(CharExp::new(self.p, e_a as i64, e_d as i64))
    }

    /// Irreducibility via the invariant line: U is a p-group, so every
    /// nonzero submodule meets the (one-dimensional) U-invariants, and the
    /// module is irreducible iff that line generates everything.
    pub fn is_irreducible(&self, w: &Weight) -> bool {
        let Ok(v) = self.u_invariants(w) else {
            return false;
        };
        let ops: Vec<Matrix> = self
            .gamma_generators()
            .iter()
            .map(|g| self.weight_matrix(w, g))
            .collect();
        closure_under(&self.field, &[v], &ops).dim() == w.dim()
    }

    /// Runs every per-weight consistency check.
    pub fn check(&self, w: &Weight) -> WeightCheck {
        let invariant_dim = self.u_invariant_space(w).len();
        let closed_form = torus_character(self.p, w);
        let from_matrices = self.character_from_matrices(w).ok();
        let involution = closed_form.is_regular().then(|| {
            weight_s(self.p, w)
                .and_then(|ws| weight_s(self.p, &ws))
                .map(|back| back == *w)
                .unwrap_or(false)
        });
        WeightCheck {
            weight: *w,
            invariant_dim,
            closed_form,
            from_matrices,
            involution,
        }
    }

    pub fn sweep(&self, weights: &[Weight], exec: Exec) -> Vec<WeightCheck> {
        exec.map(weights, |w| self.check(w))
    }
}

fn mul_linear(f: &Field, poly: &[FElem], lin: [FElem; 2]) -> Vec<FElem> {
    let mut out = vec![f.zero(); poly.len() + 1];
    for (i, &c) in poly.iter().enumerate() {
        out[i] = f.add(out[i], f.mul(c, lin[0]));
        out[i + 1] = f.add(out[i + 1], f.mul(c, lin[1]));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightCheck {
    pub weight: Weight,
    pub invariant_dim: usize,
    pub closed_form: CharExp,
    pub from_matrices: Option<CharExp>,
    /// `None` for singular characters, where σ^s is undefined.
    pub involution: Option<bool>,
}

impl WeightCheck {
    pub fn passed(&self) -> bool {
        self.invariant_dim == 1
            && self.from_matrices == Some(self.closed_form)
            && self.involution != Some(false)
    }
}
