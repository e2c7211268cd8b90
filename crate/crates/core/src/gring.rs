//! Finitely presented graded rings over `Z`.
//!
//! A ring is a generator signature plus homogeneous relations. Its degree-`d`
//! piece is the free abelian group on the degree-`d` monomials modulo the
//! `Z`-span of all monomial multiples of relations landing in degree `d`.
//! Normal forms are canonical representatives modulo that lattice, so
//! equality in the ring is decidable degree by degree without any rewriting
//! system.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::intlat::{
    hermite_normal_form, lattice_solve, left_kernel, reduce_mod_lattice, smith_invariants, HnfBasis, IntLatError,
    IntMatrix, SmithForm,
};
use crate::polyring::{GenSignature, IntPolynomial, Monomial, PolyError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Lattice(#[from] IntLatError),
    #[error("relation `{0}` is not homogeneous")]
    InhomogeneousRelation(String),
    #[error("relation `{0}` has degree 0")]
    ConstantRelation(String),
    #[error("degree mismatch: image of `{generator}` has degree {found}, expected {expected}")]
    DegreeMismatch { generator: String, expected: u32, found: u32 },
    #[error("map is not well-defined on relation `{relation}` (image `{image}` is nonzero)")]
    NotWellDefined { relation: String, image: String },
    #[error("not decomposable in degree {degree}: `{witness}` is not in the span of the module generators")]
    NotDecomposable { degree: u32, witness: String },
    #[error("{0}")]
    Invalid(String),
}

/// Finite model of the degree-`d` piece.
#[derive(Debug)]
pub struct GradedPiece {
    degree: u32,
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    lattice: HnfBasis,
    smith: SmithForm,
}

impl GradedPiece {
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn relation_lattice(&self) -> &HnfBasis {
        &self.lattice
    }

    pub fn smith(&self) -> &SmithForm {
        &self.smith
    }

    pub fn position(&self, m: &[u32]) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Coordinates of a polynomial whose terms all have this degree.
    pub fn coords(&self, f: &IntPolynomial) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.monomials.len()];
        for (m, c) in f.terms() {
            let i = self
                .position(m)
                .unwrap_or_else(|| panic!("term `{}` is not of degree {}", f.sig().display_monomial(m), self.degree));
            v[i] = c.clone();
        }
        v
    }

    pub fn poly(&self, sig: &Arc<GenSignature>, coords: &[BigInt]) -> IntPolynomial {
        IntPolynomial::from_terms(
            sig,
            self.monomials.iter().cloned().zip(coords.iter().cloned()).filter(|(_, c)| !c.is_zero()),
        )
    }

    pub fn reduce(&self, coords: &[BigInt]) -> Vec<BigInt> {
        reduce_mod_lattice(coords, &self.lattice).expect("coordinate length matches piece")
    }
}

/// Coordinates of `m · r` for every monomial `m` with `deg(m·r) = d`.
pub(crate) fn ideal_rows(
    sig: &GenSignature,
    relations: &[IntPolynomial],
    d: u32,
    index: &HashMap<Monomial, usize>,
) -> IntMatrix {
    let mut mat = IntMatrix::zeros(0, index.len());
    for r in relations {
        let Some(e) = r.degree() else { continue };
        if e > d {
            continue;
        }
        for m in sig.monomials_of_degree(d - e) {
            let mut row = vec![BigInt::zero(); index.len()];
            for (rm, c) in r.terms() {
                let prod: Monomial = rm.iter().zip(&m).map(|(a, b)| a + b).collect();
                row[index[&prod]] += c;
            }
            mat.push_row(row).expect("row length");
        }
    }
    mat
}

/// A graded ring `Z[gens] / (relations)`.
pub struct GradedRing {
    sig: Arc<GenSignature>,
    relations: Vec<IntPolynomial>,
    cache: RwLock<HashMap<u32, Arc<GradedPiece>>>,
}

impl Clone for GradedRing {
    fn clone(&self) -> Self {
        GradedRing { sig: Arc::clone(&self.sig), relations: self.relations.clone(), cache: RwLock::default() }
    }
}

impl fmt::Debug for GradedRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GradedRing({self})")
    }
}

impl PartialEq for GradedRing {
    fn eq(&self, other: &Self) -> bool {
        self.sig == other.sig && self.relations == other.relations
    }
}

impl GradedRing {
    pub fn new(sig: Arc<GenSignature>, relations: Vec<IntPolynomial>) -> Result<Self, RingError> {
        let mut rels = Vec::with_capacity(relations.len());
        for r in relations {
            let r = r.embed(&sig)?;
            if r.is_zero() {
                continue;
            }
            if !r.is_homogeneous() {
                return Err(RingError::InhomogeneousRelation(r.to_string()));
            }
            if r.degree() == Some(0) {
                return Err(RingError::ConstantRelation(r.to_string()));
            }
            rels.push(r);
        }
        Ok(GradedRing { sig, relations: rels, cache: RwLock::default() })
    }

    /// The ring `Z`.
    pub fn point() -> Self {
        GradedRing { sig: Arc::new(GenSignature::point()), relations: Vec::new(), cache: RwLock::default() }
    }

    pub fn sig(&self) -> &Arc<GenSignature> {
        &self.sig
    }

    pub fn relations(&self) -> &[IntPolynomial] {
        &self.relations
    }

    /// `R[t]` with the same relations.
    pub fn adjoin_t(&self) -> Result<GradedRing, RingError> {
        let sig = Arc::new(self.sig.with_t()?);
        let rels = self.relations.iter().map(|r| r.embed(&sig)).collect::<Result<Vec<_>, _>>()?;
        GradedRing::new(sig, rels)
    }

    /// Same signature with additional relations.
    pub fn with_relations(&self, extra: impl IntoIterator<Item = IntPolynomial>) -> Result<GradedRing, RingError> {
        let mut rels = self.relations.clone();
        rels.extend(extra);
        GradedRing::new(Arc::clone(&self.sig), rels)
    }

    pub fn piece(&self, d: u32) -> Arc<GradedPiece> {
        if let Some(p) = self.cache.read().expect("piece cache poisoned").get(&d) {
            return Arc::clone(p);
        }
        let piece = Arc::new(self.compute_piece(d));
        let mut cache = self.cache.write().expect("piece cache poisoned");
        Arc::clone(cache.entry(d).or_insert(piece))
    }

    fn compute_piece(&self, d: u32) -> GradedPiece {
        let monomials = self.sig.monomials_of_degree(d);
        let index: HashMap<Monomial, usize> = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let rows = ideal_rows(&self.sig, &self.relations, d, &index);
        let lattice = hermite_normal_form(&rows);
        let smith = smith_invariants(lattice.matrix());
        GradedPiece { degree: d, monomials, index, lattice, smith }
    }

    pub fn smith(&self, d: u32) -> SmithForm {
        self.piece(d).smith().clone()
    }

    fn check_sig(&self, f: &IntPolynomial) -> Result<(), RingError> {
        if f.sig() != &self.sig {
            return Err(PolyError::SignatureMismatch { left: f.sig().to_string(), right: self.sig.to_string() }.into());
        }
        Ok(())
    }

    /// Canonical representative; inhomogeneous input is reduced degree by degree.
    pub fn normal_form(&self, f: &IntPolynomial) -> Result<IntPolynomial, RingError> {
        self.check_sig(f)?;
        let mut out = IntPolynomial::zero(&self.sig);
        for (d, comp) in f.components() {
            let piece = self.piece(d);
            let reduced = piece.reduce(&piece.coords(&comp));
            out = &out + &piece.poly(&self.sig, &reduced);
        }
        Ok(out)
    }

    pub fn is_zero(&self, f: &IntPolynomial) -> Result<bool, RingError> {
        Ok(self.normal_form(f)?.is_zero())
    }

    pub fn equal(&self, f: &IntPolynomial, g: &IntPolynomial) -> Result<bool, RingError> {
        self.is_zero(&f.checked_sub(g)?)
    }

    /// Product followed by normal form.
    pub fn mul(&self, f: &IntPolynomial, g: &IntPolynomial) -> Result<IntPolynomial, RingError> {
        self.normal_form(&f.multiply(g)?)
    }

    /// `True` when `f` lies in the ideal generated by `gens`, tested in the
    /// degree of each homogeneous component.
    pub fn ideal_contains(
        sig: &Arc<GenSignature>,
        gens: &[IntPolynomial],
        f: &IntPolynomial,
    ) -> Result<bool, RingError> {
        let ring = GradedRing::new(Arc::clone(sig), gens.to_vec())?;
        ring.is_zero(f)
    }
}

impl fmt::Display for GradedRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sig.is_empty() && self.relations.is_empty() {
            return write!(f, "Z");
        }
        write!(f, "Z[{}]", self.sig.names().join(","))?;
        if !self.relations.is_empty() {
            let rels: Vec<String> = self.relations.iter().map(|r| r.to_string()).collect();
            write!(f, "/({})", rels.join(", "))?;
        }
        Ok(())
    }
}

/// Per-degree linear data of a ring map: rows are images of source
/// monomials followed by the target relation lattice.
struct MapDegreeData {
    source: Arc<GradedPiece>,
    target: Arc<GradedPiece>,
    stacked: IntMatrix,
    kernel: HnfBasis,
}

/// A graded ring homomorphism given by generator images.
pub struct RingMap {
    source: Arc<GradedRing>,
    target: Arc<GradedRing>,
    images: Vec<IntPolynomial>,
    cache: RwLock<HashMap<u32, Arc<MapDegreeData>>>,
}

impl Clone for RingMap {
    fn clone(&self) -> Self {
        RingMap {
            source: Arc::clone(&self.source),
            target: Arc::clone(&self.target),
            images: self.images.clone(),
            cache: RwLock::default(),
        }
    }
}

impl fmt::Debug for RingMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let imgs: Vec<String> =
            self.source.sig().names().iter().zip(&self.images).map(|(n, i)| format!("{n} -> {i}")).collect();
        write!(f, "RingMap[{}]", imgs.join(", "))
    }
}

impl RingMap {
    /// Checks degrees and that every source relation maps to zero.
    pub fn new(
        source: Arc<GradedRing>,
        target: Arc<GradedRing>,
        images: &HashMap<String, IntPolynomial>,
    ) -> Result<Self, RingError> {
        let mut imgs = Vec::with_capacity(source.sig().len());
        for (name, &deg) in source.sig().names().iter().zip(source.sig().degrees()) {
            let img = images.get(name).ok_or_else(|| PolyError::MissingImage(name.clone()))?;
            let img = img.embed(target.sig())?;
            if !img.is_zero() {
                let found = img.degree().unwrap_or(0);
                if !img.is_homogeneous() || found != deg {
                    return Err(RingError::DegreeMismatch { generator: name.clone(), expected: deg, found });
                }
            }
            imgs.push(img);
        }
        let map = RingMap { source, target, images: imgs, cache: RwLock::default() };
        for r in map.source.relations() {
            let img = map.apply(r)?;
            if !img.is_zero() {
                return Err(RingError::NotWellDefined { relation: r.to_string(), image: img.to_string() });
            }
        }
        Ok(map)
    }

    pub fn identity(ring: Arc<GradedRing>) -> Result<Self, RingError> {
        let images = ring
            .sig()
            .names()
            .iter()
            .map(|n| Ok((n.clone(), IntPolynomial::generator(ring.sig(), n)?)))
            .collect::<Result<HashMap<_, _>, PolyError>>()?;
        RingMap::new(Arc::clone(&ring), ring, &images)
    }

    pub fn source(&self) -> &Arc<GradedRing> {
        &self.source
    }

    pub fn target(&self) -> &Arc<GradedRing> {
        &self.target
    }

    /// Generator images, indexed like the source signature.
    pub fn images(&self) -> &[IntPolynomial] {
        &self.images
    }

    /// Substitution without reduction.
    pub fn substitute(&self, f: &IntPolynomial) -> Result<IntPolynomial, RingError> {
        if f.sig() != self.source.sig() {
            return Err(PolyError::SignatureMismatch {
                left: f.sig().to_string(),
                right: self.source.sig().to_string(),
            }
            .into());
        }
        Ok(f.substitute_indexed(self.target.sig(), &self.images)?)
    }

    /// Substitute, then normal form in the target.
    pub fn apply(&self, f: &IntPolynomial) -> Result<IntPolynomial, RingError> {
        let img = self.substitute(f)?;
        self.target.normal_form(&img)
    }

    fn degree_data(&self, d: u32) -> Arc<MapDegreeData> {
        if let Some(x) = self.cache.read().expect("map cache poisoned").get(&d) {
            return Arc::clone(x);
        }
        let source = self.source.piece(d);
        let target = self.target.piece(d);
        let mut stacked = IntMatrix::zeros(0, target.len());
        for m in source.monomials() {
            let mono = IntPolynomial::monomial(self.source.sig(), m.clone(), BigInt::from(1));
            let img = mono.substitute_indexed(self.target.sig(), &self.images).expect("signatures checked");
            stacked.push_row(target.coords(&img)).expect("row length");
        }
        let stacked = stacked.stack(target.relation_lattice().matrix()).expect("same width");
        let kernel = {
            let k = left_kernel(&stacked);
            let p = source.len();
            let mut proj = IntMatrix::zeros(0, p);
            for r in 0..k.rank() {
                proj.push_row(k.matrix().row(r)[..p].to_vec()).expect("row length");
            }
            let proj = proj.stack(source.relation_lattice().matrix()).expect("same width");
            hermite_normal_form(&proj)
        };
        let data = Arc::new(MapDegreeData { source, target, stacked, kernel });
        let mut cache = self.cache.write().expect("map cache poisoned");
        Arc::clone(cache.entry(d).or_insert(data))
    }

    /// Lattice of source coordinates (degree `d`) mapping to zero; contains
    /// the source relation lattice.
    pub fn kernel_lattice(&self, d: u32) -> HnfBasis {
        self.degree_data(d).kernel.clone()
    }

    /// `Z`-module generators of the kernel in degree `d`, modulo the source
    /// relations (elements already zero in the source are dropped).
    pub fn kernel_in_degree(&self, d: u32) -> Vec<IntPolynomial> {
        let data = self.degree_data(d);
        let mut out: Vec<IntPolynomial> = Vec::new();
        for r in 0..data.kernel.rank() {
            let reduced = data.source.reduce(data.kernel.matrix().row(r));
            let f = data.source.poly(self.source.sig(), &reduced);
            if !f.is_zero() && !out.contains(&f) {
                out.push(f);
            }
        }
        out
    }

    /// A target monomial of degree `d` outside the image, if any.
    pub fn surjectivity_witness(&self, d: u32) -> Option<IntPolynomial> {
        let data = self.degree_data(d);
        let span = hermite_normal_form(&data.stacked);
        (0..data.target.len()).find_map(|i| {
            let mut e = vec![BigInt::zero(); data.target.len()];
            e[i] = BigInt::from(1);
            match span.contains(&e) {
                Ok(true) => None,
                _ => Some(IntPolynomial::monomial(
                    self.target.sig(),
                    data.target.monomials()[i].clone(),
                    BigInt::from(1),
                )),
            }
        })
    }

    pub fn is_surjective_in_degree(&self, d: u32) -> bool {
        self.surjectivity_witness(d).is_none()
    }

    /// A canonical preimage of a homogeneous (or componentwise) target element:
    /// the solution coordinates reduced modulo the kernel lattice.
    pub fn preimage(&self, f: &IntPolynomial) -> Result<Option<IntPolynomial>, RingError> {
        if f.sig() != self.target.sig() {
            return Err(PolyError::SignatureMismatch {
                left: f.sig().to_string(),
                right: self.target.sig().to_string(),
            }
            .into());
        }
        let mut out = IntPolynomial::zero(self.source.sig());
        for (d, comp) in f.components() {
            let data = self.degree_data(d);
            let Some(sol) = lattice_solve(&data.target.coords(&comp), &data.stacked)? else {
                return Ok(None);
            };
            let coords = reduce_mod_lattice(&sol[..data.source.len()], &data.kernel)?;
            out = &out + &data.source.poly(self.source.sig(), &coords);
        }
        Ok(Some(out))
    }
}

/// Module-generator data for the pushforward `i_*: A(X) → A(Y)`.
///
/// `A(X)` is treated as an `A(Y)`-module through the pullback; `i_*` is
/// determined on all of `A(X)` by its values on the generators and the
/// projection formula `i_*(i^*(β)·μ) = β·i_*(μ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PushforwardData {
    shift: u32,
    names: Vec<String>,
    generators: Vec<IntPolynomial>,
    images: Vec<IntPolynomial>,
}

struct DecompData {
    /// (generator index, Y-monomials of the complementary degree)
    blocks: Vec<(usize, Vec<Monomial>)>,
    unknowns: usize,
    matrix: IntMatrix,
    piece: Arc<GradedPiece>,
}

impl PushforwardData {
    /// `generators` live in `A(X)`, `images` in `A(Y)`; the first generator
    /// must be `1`. Degree compatibility is checked by setup validation.
    pub fn new(
        shift: u32,
        generators: Vec<(String, IntPolynomial)>,
        images: Vec<IntPolynomial>,
    ) -> Result<Self, RingError> {
        if generators.len() != images.len() {
            return Err(RingError::Invalid(format!(
                "{} module generators but {} pushforward images",
                generators.len(),
                images.len()
            )));
        }
        match generators.first() {
            Some((_, g)) if *g == IntPolynomial::one(g.sig()) => {}
            _ => return Err(RingError::Invalid("the first module generator must be 1".into())),
        }
        for (name, g) in &generators {
            if !g.is_homogeneous() || g.is_zero() {
                return Err(RingError::Invalid(format!("module generator `{name}` must be nonzero and homogeneous")));
            }
        }
        let (names, generators) = generators.into_iter().unzip();
        Ok(PushforwardData { shift, names, generators, images })
    }

    pub fn shift(&self) -> u32 {
        self.shift
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn generators(&self) -> &[IntPolynomial] {
        &self.generators
    }

    pub fn images(&self) -> &[IntPolynomial] {
        &self.images
    }

    /// `[X] = i_*(1)`.
    pub fn fundamental_class(&self) -> &IntPolynomial {
        &self.images[0]
    }

    fn generator_degree(&self, l: usize) -> u32 {
        self.generators[l].degree().unwrap_or(0)
    }

    fn decomp_data(&self, pullback: &RingMap, e: u32) -> DecompData {
        let rx = pullback.target();
        let ry = pullback.source();
        let piece = rx.piece(e);
        let mut blocks = Vec::new();
        let mut matrix = IntMatrix::zeros(0, piece.len());
        let mut unknowns = 0;
        for (l, mu) in self.generators.iter().enumerate() {
            let dl = self.generator_degree(l);
            if dl > e {
                continue;
            }
            let monos = ry.sig().monomials_of_degree(e - dl);
            for m in &monos {
                let b = IntPolynomial::monomial(ry.sig(), m.clone(), BigInt::from(1));
                let img = &pullback.substitute(&b).expect("source signature") * mu;
                matrix.push_row(piece.coords(&img)).expect("row length");
            }
            unknowns += monos.len();
            blocks.push((l, monos));
        }
        let matrix = matrix.stack(piece.relation_lattice().matrix()).expect("same width");
        DecompData { blocks, unknowns, matrix, piece }
    }

    fn coefficients_from(&self, pullback: &RingMap, data: &DecompData, sol: &[BigInt]) -> Vec<IntPolynomial> {
        let ry = pullback.source();
        let mut out = vec![IntPolynomial::zero(ry.sig()); self.generators.len()];
        let mut k = 0;
        for (l, monos) in &data.blocks {
            let mut beta = IntPolynomial::zero(ry.sig());
            for m in monos {
                beta.add_term(m.clone(), sol[k].clone());
                k += 1;
            }
            out[*l] = beta;
        }
        out
    }

    /// Coefficients `β_l ∈ A(Y)` with `α = Σ i^*(β_l)·μ_l` in `A(X)`.
    pub fn decompose(&self, pullback: &RingMap, alpha: &IntPolynomial) -> Result<Vec<IntPolynomial>, RingError> {
        let ry = pullback.source();
        let mut total = vec![IntPolynomial::zero(ry.sig()); self.generators.len()];
        for (e, comp) in alpha.components() {
            let data = self.decomp_data(pullback, e);
            let sol = lattice_solve(&data.piece.coords(&comp), &data.matrix)?
                .ok_or_else(|| RingError::NotDecomposable { degree: e, witness: comp.to_string() })?;
            let betas = self.coefficients_from(pullback, &data, &sol);
            for (t, b) in total.iter_mut().zip(betas) {
                *t = &*t + &b;
            }
        }
        total.iter().map(|b| ry.normal_form(b)).collect()
    }

    /// `i_*(α) = Σ β_l · i_*(μ_l)`, reduced in `A(Y)`.
    pub fn apply(&self, pullback: &RingMap, alpha: &IntPolynomial) -> Result<IntPolynomial, RingError> {
        let ry = pullback.source();
        let betas = self.decompose(pullback, alpha)?;
        let mut out = IntPolynomial::zero(ry.sig());
        for (b, img) in betas.iter().zip(&self.images) {
            out = &out + &(b * img);
        }
        ry.normal_form(&out)
    }

    /// Fails with a witness when some degree-`e` element of `A(X)` is not in
    /// the span of `{ i^*(β)·μ_l }`.
    pub fn check_decomposable(&self, pullback: &RingMap, e: u32) -> Result<(), RingError> {
        let data = self.decomp_data(pullback, e);
        let span = hermite_normal_form(&data.matrix);
        for (i, m) in data.piece.monomials().iter().enumerate() {
            let mut v = vec![BigInt::zero(); data.piece.len()];
            v[i] = BigInt::from(1);
            if !span.contains(&v)? {
                let w = IntPolynomial::monomial(pullback.target().sig(), m.clone(), BigInt::from(1));
                return Err(RingError::NotDecomposable { degree: e, witness: w.to_string() });
            }
        }
        Ok(())
    }

    /// Checks that `i_*` does not depend on the chosen decomposition in
    /// degree `e`: every relation among the `i^*(β)·μ_l` must push forward
    /// to zero. Returns the offending combination otherwise.
    pub fn check_well_defined(&self, pullback: &RingMap, e: u32) -> Result<(), String> {
        let ry = pullback.source();
        let data = self.decomp_data(pullback, e);
        let k = left_kernel(&data.matrix);
        for r in 0..k.rank() {
            let sol = &k.matrix().row(r)[..data.unknowns];
            let betas = self.coefficients_from(pullback, &data, sol);
            let mut img = IntPolynomial::zero(ry.sig());
            for (b, im) in betas.iter().zip(&self.images) {
                img = &img + &(b * im);
            }
            let img = ry.normal_form(&img).map_err(|e| e.to_string())?;
            if !img.is_zero() {
                let combo: Vec<String> = betas
                    .iter()
                    .zip(&self.names)
                    .filter(|(b, _)| !b.is_zero())
                    .map(|(b, n)| format!("({b})*{n}"))
                    .collect();
                return Err(format!("{} vanishes in A(X) but pushes forward to {img}", combo.join(" + ")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::parse_polynomial;

    fn ring(gens: &[(&str, u32)], rels: &[&str]) -> Arc<GradedRing> {
        let sig = Arc::new(GenSignature::new(gens.iter().map(|&(n, d)| (n, d))).unwrap());
        let rels = rels.iter().map(|r| parse_polynomial(r, &sig).unwrap()).collect();
        Arc::new(GradedRing::new(sig, rels).unwrap())
    }

    fn p(r: &GradedRing, s: &str) -> IntPolynomial {
        parse_polynomial(s, r.sig()).unwrap()
    }

    fn map(src: &Arc<GradedRing>, tgt: &Arc<GradedRing>, imgs: &[(&str, &str)]) -> Result<RingMap, RingError> {
        let images = imgs.iter().map(|&(n, s)| (n.to_string(), p(tgt, s))).collect();
        RingMap::new(Arc::clone(src), Arc::clone(tgt), &images)
    }

    #[test]
    fn piece_of_stacky_weighted_projective_plane() {
        let r = ring(&[("y", 1)], &["24*y^3"]);
        let piece = r.piece(3);
        assert_eq!(piece.len(), 1);
        assert_eq!(piece.relation_lattice().matrix(), &IntMatrix::from_i64(1, &[&[24]]));
        assert_eq!(piece.smith().to_string(), "Z/24");
        assert_eq!(r.smith(7).to_string(), "Z/24");
        assert_eq!(r.smith(2).to_string(), "Z");
    }

    #[test]
    fn point_piece() {
        let r = GradedRing::point();
        assert_eq!(r.piece(0).len(), 1);
        assert_eq!(r.smith(0).to_string(), "Z");
        assert_eq!(r.smith(1).to_string(), "0");
        assert_eq!(r.to_string(), "Z");
    }

    #[test]
    fn toric_exceptional_piece() {
        // Oracle: basis {t^2, t*x, x^2}; rows x^2 -> (0,0,1), (x+2t)(x+3t) -> (6,5,1).
        // HNF {(6,5,0),(0,0,1)}; cokernel Z^3/<(6,5,0),(0,0,1)> = Z (gcd(6,5)=1).
        let r = ring(&[("x", 1), ("t", 1)], &["x^2", "(x+2*t)*(x+3*t)"]);
        let piece = r.piece(2);
        let shown: Vec<String> = piece.monomials().iter().map(|m| r.sig().display_monomial(m)).collect();
        assert_eq!(shown, vec!["t^2", "t*x", "x^2"]);
        assert_eq!(piece.relation_lattice().matrix(), &IntMatrix::from_i64(3, &[&[6, 5, 0], &[0, 0, 1]]));
        assert_eq!(piece.smith().to_string(), "Z");
    }

    #[test]
    fn normal_form_examples() {
        let r = ring(&[("y", 1)], &["24*y^3"]);
        assert_eq!(r.normal_form(&p(&r, "25*y^3")).unwrap(), p(&r, "y^3"));
        assert!(r.normal_form(&p(&r, "24*y^3")).unwrap().is_zero());
        let m12 = ring(&[("y", 1), ("t", 1)], &["t*y", "24*t^2 + 24*y^2"]);
        assert!(m12.normal_form(&p(&m12, "t*y")).unwrap().is_zero());
        assert!(m12.is_zero(&p(&m12, "24*t^3")).unwrap());
        assert!(m12.equal(&p(&m12, "24*t^2"), &p(&m12, "-24*y^2")).unwrap());
        // componentwise on inhomogeneous input
        assert_eq!(m12.normal_form(&p(&m12, "1 + t*y + 48*t^2")).unwrap(), p(&m12, "1 - 48*y^2"));
    }

    #[test]
    fn ring_map_examples() {
        let y = ring(&[("y", 1)], &["24*y^3"]);
        let pt = Arc::new(GradedRing::point());
        let i = map(&y, &pt, &[("y", "0")]).unwrap();
        assert!(i.apply(&p(&y, "24*y^2")).unwrap().is_zero());
        assert_eq!(i.apply(&IntPolynomial::one(y.sig())).unwrap(), IntPolynomial::one(pt.sig()));

        let p3 = ring(&[("h", 1)], &["h^4"]);
        let p1 = ring(&[("x", 1)], &["x^2"]);
        let j = map(&p3, &p1, &[("h", "x")]).unwrap();
        assert!(j.apply(&p(&p3, "h^2")).unwrap().is_zero());

        let x2 = ring(&[("x", 2)], &[]);
        let err = map(&y, &x2, &[("y", "x")]).unwrap_err();
        assert!(matches!(err, RingError::DegreeMismatch { .. }));

        // y -> x sends y^3 to x^3, which is not in (x^2)... but it is; use x^4 ring instead
        let free = ring(&[("x", 1)], &[]);
        let err = map(&y, &free, &[("y", "x")]).unwrap_err();
        assert!(matches!(err, RingError::NotWellDefined { .. }));
    }

    #[test]
    fn kernel_examples() {
        let y = ring(&[("y", 1)], &["24*y^3"]);
        let pt = Arc::new(GradedRing::point());
        let i = map(&y, &pt, &[("y", "0")]).unwrap();
        assert_eq!(i.kernel_in_degree(1), vec![p(&y, "y")]);
        assert_eq!(i.kernel_in_degree(3), vec![p(&y, "y^3")]);
        assert!(i.kernel_in_degree(0).is_empty());

        let id = RingMap::identity(Arc::clone(&y)).unwrap();
        for d in 0..5 {
            assert!(id.kernel_in_degree(d).is_empty());
        }

        let p3 = ring(&[("h", 1)], &["h^4"]);
        let p1 = ring(&[("x", 1)], &["x^2"]);
        let j = map(&p3, &p1, &[("h", "x")]).unwrap();
        assert_eq!(j.kernel_in_degree(2), vec![p(&p3, "h^2")]);
        assert!(j.kernel_in_degree(1).is_empty());
    }

    #[test]
    fn surjectivity_and_preimage() {
        let p2 = ring(&[("y", 1)], &["y^3"]);
        let conic = ring(&[("q", 1)], &["q^2"]);
        let i = map(&p2, &conic, &[("y", "2*q")]).unwrap();
        assert!(i.is_surjective_in_degree(0));
        assert!(!i.is_surjective_in_degree(1));
        assert_eq!(i.surjectivity_witness(1), Some(p(&conic, "q")));
        assert_eq!(i.preimage(&p(&conic, "q")).unwrap(), None);
        assert_eq!(i.preimage(&p(&conic, "4*q")).unwrap(), Some(p(&p2, "2*y")));

        let p3 = ring(&[("h", 1)], &["h^4"]);
        let p1 = ring(&[("x", 1)], &["x^2"]);
        let j = map(&p3, &p1, &[("h", "x")]).unwrap();
        assert_eq!(j.preimage(&p(&p1, "3*x")).unwrap(), Some(p(&p3, "3*h")));
        // degree 2 kernel is all of span{h^2}, so the canonical preimage of 0 is 0
        assert_eq!(j.preimage(&IntPolynomial::zero(p1.sig())).unwrap(), Some(IntPolynomial::zero(p3.sig())));
    }

    fn toric_push() -> (Arc<GradedRing>, Arc<GradedRing>, RingMap, PushforwardData) {
        let p3 = ring(&[("h", 1)], &["h^4"]);
        let p1 = ring(&[("x", 1)], &["x^2"]);
        let i = map(&p3, &p1, &[("h", "x")]).unwrap();
        let push =
            PushforwardData::new(2, vec![("mu1".into(), IntPolynomial::one(p1.sig()))], vec![p(&p3, "h^2")]).unwrap();
        (p3, p1, i, push)
    }

    #[test]
    fn decompose_examples() {
        let (p3, p1, i, push) = toric_push();
        let b = push.decompose(&i, &IntPolynomial::one(p1.sig())).unwrap();
        assert_eq!(b, vec![IntPolynomial::one(p3.sig())]);
        let b = push.decompose(&i, &p(&p1, "x")).unwrap();
        assert_eq!(b, vec![p(&p3, "h")]);
        assert_eq!(push.apply(&i, &IntPolynomial::one(p1.sig())).unwrap(), p(&p3, "h^2"));
        assert_eq!(push.apply(&i, &p(&p1, "x")).unwrap(), p(&p3, "h^3"));
        assert!(push.apply(&i, &IntPolynomial::zero(p1.sig())).unwrap().is_zero());
        for e in 0..6 {
            push.check_decomposable(&i, e).unwrap();
            push.check_well_defined(&i, e).unwrap();
        }
    }

    #[test]
    fn decompose_needs_module_generators() {
        let p2 = ring(&[("y", 1)], &["y^3"]);
        let conic = ring(&[("q", 1)], &["q^2"]);
        let i = map(&p2, &conic, &[("y", "2*q")]).unwrap();
        let only_one =
            PushforwardData::new(1, vec![("mu1".into(), IntPolynomial::one(conic.sig()))], vec![p(&p2, "2*y")])
                .unwrap();
        assert!(matches!(only_one.decompose(&i, &p(&conic, "q")), Err(RingError::NotDecomposable { degree: 1, .. })));
        assert!(only_one.check_decomposable(&i, 1).is_err());

        let both = PushforwardData::new(
            1,
            vec![("mu1".into(), IntPolynomial::one(conic.sig())), ("mu2".into(), p(&conic, "q"))],
            vec![p(&p2, "2*y"), p(&p2, "y^2")],
        )
        .unwrap();
        both.check_decomposable(&i, 1).unwrap();
        both.check_well_defined(&i, 1).unwrap();
        assert_eq!(both.apply(&i, &p(&conic, "q")).unwrap(), p(&p2, "y^2"));
        assert_eq!(both.apply(&i, &p(&conic, "3*q")).unwrap(), p(&p2, "3*y^2"));

        // i_*(q) = 2y^2 contradicts i_*(2q) = i_*(i^*(y)) = y * i_*(1) = 2y^2 ... consistent;
        // i_*(q) = y^2 + y^2 is fine, but i_*(q) = 0 is not.
        let bad = PushforwardData::new(
            1,
            vec![("mu1".into(), IntPolynomial::one(conic.sig())), ("mu2".into(), p(&conic, "q"))],
            vec![p(&p2, "2*y"), IntPolynomial::zero(p2.sig())],
        )
        .unwrap();
        assert!(bad.check_well_defined(&i, 1).is_err());
    }

    #[test]
    fn pushforward_requires_unit_first() {
        let p1 = ring(&[("x", 1)], &["x^2"]);
        let p3 = ring(&[("h", 1)], &["h^4"]);
        let err = PushforwardData::new(2, vec![("mu1".into(), p(&p1, "x"))], vec![p(&p3, "h^3")]);
        assert!(err.is_err());
    }
}
