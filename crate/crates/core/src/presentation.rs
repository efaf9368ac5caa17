//! Finitely presented groups, words, Fox calculus and representations.
//!
//! Fox derivatives use the left convention `d(uv) = du + u dv`, matching
//! cocycles with `u(ab) = u(a) + Ad(a) u(b)` and the flow
//! `x_g -> exp(t u_g) x_g` on generator images.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::su2::{AdjointMatrix, Alg, Su2};
use crate::tol;

/// A generator or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn gen(gen: usize) -> Self {
        Letter { gen, inverse: false }
    }

    pub fn inv(gen: usize) -> Self {
        Letter { gen, inverse: true }
    }

    pub fn inverted(self) -> Self {
        Letter { gen: self.gen, inverse: !self.inverse }
    }

    /// 1-based signed index: `g + 1` for a generator, `-(g + 1)` for its inverse.
    pub fn signed(self) -> i64 {
        let i = self.gen as i64 + 1;
        if self.inverse {
            -i
        } else {
            i
        }
    }

    pub fn from_signed(s: i64) -> Result<Self> {
        if s == 0 {
            return Err(Error::ParseWord("signed index 0 is not a letter".into()));
        }
        Ok(Letter { gen: (s.unsigned_abs() - 1) as usize, inverse: s < 0 })
    }
}

/// A word in the generators.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn from_signed(letters: &[i64]) -> Result<Self> {
        letters.iter().map(|&s| Letter::from_signed(s)).collect::<Result<Vec<_>>>().map(Word)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn signed(&self) -> Vec<i64> {
        self.0.iter().map(|l| l.signed()).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn generator(g: usize) -> Self {
        Word(vec![Letter::gen(g)])
    }

    pub fn power(g: usize, n: i64) -> Self {
        let l = if n < 0 { Letter::inv(g) } else { Letter::gen(g) };
        Word(vec![l; n.unsigned_abs() as usize])
    }

    /// `a b a^-1 b^-1`.
    pub fn commutator(a: &Word, b: &Word) -> Word {
        a.concat(b).concat(&a.inverse()).concat(&b.inverse())
    }

    pub fn concat(&self, o: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&o.0);
        Word(v)
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverted()).collect())
    }

    pub fn prefix(&self, k: usize) -> Word {
        Word(self.0[..k].to_vec())
    }

    /// Image under the homomorphism sending generator `g` to `images[g]`.
    pub fn substitute(&self, images: &[Word]) -> Word {
        let mut out = Vec::new();
        for l in &self.0 {
            let w = &images[l.gen];
            if l.inverse {
                out.extend(w.inverse().0);
            } else {
                out.extend_from_slice(&w.0);
            }
        }
        Word(out)
    }

    /// Cancels adjacent `x x^-1` pairs until none remain.
    pub fn reduced(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            if out.last() == Some(&l.inverted()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|w| w[0] != w[1].inverted())
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.0.iter().map(|l| l.gen).max()
    }

    /// Parses whitespace-separated generator names; a leading capital letter
    /// means the inverse of the lowercase name.
    pub fn parse(text: &str, names: &[String]) -> Result<Word> {
        let mut letters = Vec::new();
        for token in text.split_whitespace() {
            let mut chars = token.chars();
            let first = chars.next().expect("split_whitespace yields nonempty tokens");
            let inverse = first.is_uppercase();
            let mut name: String = first.to_lowercase().collect();
            name.push_str(chars.as_str());
            let gen = names
                .iter()
                .position(|n| *n == name)
                .ok_or_else(|| Error::ParseWord(format!("unknown generator '{token}'")))?;
            letters.push(Letter { gen, inverse });
        }
        Ok(Word(letters))
    }

    pub fn format(&self, names: &[String]) -> String {
        let mut parts = Vec::with_capacity(self.0.len());
        for l in &self.0 {
            let name = &names[l.gen];
            if l.inverse {
                let mut chars = name.chars();
                let mut s: String = chars.next().map(|c| c.to_uppercase().collect()).unwrap_or_default();
                s.push_str(chars.as_str());
                parts.push(s);
            } else {
                parts.push(name.clone());
            }
        }
        parts.join(" ")
    }
}

/// Which family a presentation belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PresentationKind {
    Free { genus: usize },
    Surface { genus: usize },
    Cyclic { order: usize },
    CircleTimesSurface { genus: usize },
    Custom,
}

/// Generators `a_1..a_g, b_1..b_g` in that order.
fn surface_names(g: usize) -> Vec<String> {
    let mut names: Vec<String> = (1..=g).map(|i| format!("a{i}")).collect();
    names.extend((1..=g).map(|i| format!("b{i}")));
    names
}

/// `prod_i [A_i, B_i]` with `A_i = i`, `B_i = g + i`.
pub fn surface_relator(g: usize) -> Word {
    (0..g).fold(Word::empty(), |w, i| {
        w.concat(&Word::commutator(&Word::generator(i), &Word::generator(g + i)))
    })
}

/// A finitely presented group.
#[derive(Clone, Debug, PartialEq)]
pub struct Presentation {
    generators: Vec<String>,
    relators: Vec<Word>,
    kind: PresentationKind,
}

impl Presentation {
    /// Free group on `a1..ag`.
    pub fn free(g: usize) -> Self {
        Presentation {
            generators: (1..=g).map(|i| format!("a{i}")).collect(),
            relators: Vec::new(),
            kind: PresentationKind::Free { genus: g },
        }
    }

    /// Closed orientable surface of genus `g >= 1`.
    pub fn surface(g: usize) -> Self {
        assert!(g >= 1, "surface genus must be positive");
        Presentation {
            generators: surface_names(g),
            relators: vec![surface_relator(g)],
            kind: PresentationKind::Surface { genus: g },
        }
    }

    /// `<a | a^p>`, `p >= 1`.
    pub fn cyclic(p: usize) -> Self {
        assert!(p >= 1, "cyclic order must be positive");
        Presentation {
            generators: vec!["a".to_string()],
            relators: vec![Word::power(0, p as i64)],
            kind: PresentationKind::Cyclic { order: p },
        }
    }

    /// `pi_1(S^1 x Sigma_g)`: the surface relator plus `[c, A_i]`, `[c, B_i]`.
    pub fn circle_times_surface(g: usize) -> Self {
        assert!(g >= 1, "surface genus must be positive");
        let mut generators = surface_names(g);
        generators.push("c".to_string());
        let c = Word::generator(2 * g);
        let mut relators = vec![surface_relator(g)];
        relators.extend((0..2 * g).map(|i| Word::commutator(&c, &Word::generator(i))));
        Presentation { generators, relators, kind: PresentationKind::CircleTimesSurface { genus: g } }
    }

    /// A presentation of the given kind built from user data; the kind's
    /// structural constraints are validated against the standard form.
    pub fn from_parts(generators: Vec<String>, relators: Vec<Word>, kind: PresentationKind) -> Result<Self> {
        for (i, name) in generators.iter().enumerate() {
            let ok = name.chars().next().is_some_and(|c| c.is_lowercase())
                && !name.chars().any(char::is_whitespace);
            if !ok {
                return Err(Error::InvalidPresentation(format!(
                    "generator name '{name}' must start with a lowercase letter and contain no whitespace"
                )));
            }
            if generators[..i].contains(name) {
                return Err(Error::InvalidPresentation(format!("duplicate generator '{name}'")));
            }
        }
        let n = generators.len();
        let relators: Vec<Word> = relators.iter().map(Word::reduced).collect();
        for r in &relators {
            if let Some(g) = r.max_generator() {
                if g >= n {
                    return Err(Error::GeneratorOutOfRange { index: g, generators: n });
                }
            }
        }
        let standard = match kind {
            PresentationKind::Free { genus } => Some(Presentation::free(genus)),
            PresentationKind::Surface { genus } if genus >= 1 => Some(Presentation::surface(genus)),
            PresentationKind::Cyclic { order } if order >= 1 => Some(Presentation::cyclic(order)),
            PresentationKind::CircleTimesSurface { genus } if genus >= 1 => {
                Some(Presentation::circle_times_surface(genus))
            }
            PresentationKind::Custom => None,
            _ => return Err(Error::InvalidPresentation("genus/order must be positive".into())),
        };
        match standard {
            Some(std) => {
                if std.generators.len() != n || std.relators != relators {
                    return Err(Error::InvalidPresentation(format!(
                        "relators do not match the standard {kind:?} presentation"
                    )));
                }
            }
            None => {
                if relators.iter().any(Word::is_empty) {
                    return Err(Error::InvalidPresentation("empty relator".into()));
                }
            }
        }
        Ok(Presentation { generators, relators, kind })
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn kind(&self) -> PresentationKind {
        self.kind
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn relator_count(&self) -> usize {
        self.relators.len()
    }

    pub fn parse_word(&self, text: &str) -> Result<Word> {
        Word::parse(text, &self.generators)
    }

    pub fn format_word(&self, w: &Word) -> String {
        w.format(&self.generators)
    }

    fn check_word(&self, w: &Word) -> Result<()> {
        match w.max_generator() {
            Some(g) if g >= self.generators.len() => {
                Err(Error::GeneratorOutOfRange { index: g, generators: self.generators.len() })
            }
            _ => Ok(()),
        }
    }
}

/// Element `sum_terms sign * prefix` of the integral group ring of the free group.
#[derive(Clone, Debug, PartialEq)]
pub struct FoxDerivative {
    pub terms: Vec<(i8, Word)>,
}

/// Left Fox derivative `d w / d x_gen`.
pub fn fox_derivative(w: &Word, gen: usize) -> FoxDerivative {
    let mut terms = Vec::new();
    for (k, l) in w.letters().iter().enumerate() {
        if l.gen != gen {
            continue;
        }
        if l.inverse {
            terms.push((-1, w.prefix(k + 1)));
        } else {
            terms.push((1, w.prefix(k)));
        }
    }
    FoxDerivative { terms }
}

impl FoxDerivative {
    /// `sum sign * Ad(rho(prefix))` as a 3x3 matrix.
    pub fn evaluate_ad(&self, rep: &Representation) -> Result<Matrix> {
        let mut out = Matrix::zeros(3, 3);
        for (sign, prefix) in &self.terms {
            let ad = rep.evaluate(prefix)?.ad().to_matrix();
            out = out.add(&ad.scaled(f64::from(*sign)));
        }
        Ok(out)
    }
}

/// Generator images in SU(2) for a presentation.
#[derive(Clone, Debug)]
pub struct Representation {
    presentation: Arc<Presentation>,
    images: Vec<Su2>,
    residual: f64,
}

impl Representation {
    /// Accepts the images when the relator residual is at most [`tol::RELATOR`].
    pub fn new(presentation: Arc<Presentation>, images: Vec<Su2>) -> Result<Self> {
        Self::with_tolerance(presentation, images, tol::RELATOR)
    }

    pub fn with_tolerance(presentation: Arc<Presentation>, images: Vec<Su2>, tolerance: f64) -> Result<Self> {
        let rep = Self::approximate(presentation, images)?;
        if rep.residual > tolerance {
            return Err(Error::RelatorResidual { residual: rep.residual, tolerance });
        }
        Ok(rep)
    }

    /// Stores the images without a residual bound; see [`Representation::polish`].
    pub fn approximate(presentation: Arc<Presentation>, images: Vec<Su2>) -> Result<Self> {
        if images.len() != presentation.generator_count() {
            return Err(Error::ImageCount { expected: presentation.generator_count(), found: images.len() });
        }
        let mut rep = Representation { presentation, images, residual: 0.0 };
        rep.residual = rep.compute_residual();
        Ok(rep)
    }

    pub fn trivial(presentation: Arc<Presentation>) -> Self {
        let n = presentation.generator_count();
        Representation { presentation, images: vec![Su2::IDENTITY; n], residual: 0.0 }
    }

    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.presentation
    }

    pub fn images(&self) -> &[Su2] {
        &self.images
    }

    pub fn generator_count(&self) -> usize {
        self.images.len()
    }

    /// Max over relators of `|rho(r) - 1|`.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    fn compute_residual(&self) -> f64 {
        self.presentation
            .relators()
            .iter()
            .map(|r| self.evaluate_unchecked(r).distance(&Su2::IDENTITY))
            .fold(0.0, f64::max)
    }

    fn evaluate_unchecked(&self, w: &Word) -> Su2 {
        w.letters().iter().fold(Su2::IDENTITY, |acc, l| {
            let x = self.images[l.gen];
            acc * if l.inverse { x.inverse() } else { x }
        })
    }

    /// Holonomy along a word.
    pub fn evaluate(&self, w: &Word) -> Result<Su2> {
        self.presentation.check_word(w)?;
        Ok(self.evaluate_unchecked(w))
    }

    /// Simultaneous conjugation `x -> h x h^-1`.
    pub fn conjugated(&self, h: &Su2) -> Representation {
        let hi = h.inverse();
        let images = self.images.iter().map(|x| *h * *x * hi).collect();
        let mut rep = Representation { presentation: self.presentation.clone(), images, residual: 0.0 };
        rep.residual = rep.compute_residual();
        rep
    }

    /// Images after the flow `x_g -> exp(t u_g) x_g`.
    pub fn flowed(&self, u: &[Alg], t: f64) -> Representation {
        let images = self.images.iter().zip(u).map(|(x, v)| Su2::exp(v.scale(t)) * *x).collect();
        let mut rep = Representation { presentation: self.presentation.clone(), images, residual: 0.0 };
        rep.residual = rep.compute_residual();
        rep
    }

    /// Value on `w` of the cochain with generator values `u`, extended by
    /// `u(ab) = u(a) + Ad(a) u(b)`.
    pub fn cocycle_value(&self, u: &[Alg], w: &Word) -> Result<Alg> {
        self.presentation.check_word(w)?;
        if u.len() != self.images.len() {
            return Err(Error::ShapeMismatch(format!(
                "cochain has {} values for {} generators",
                u.len(),
                self.images.len()
            )));
        }
        let mut prefix = Su2::IDENTITY;
        let mut acc = Alg::ZERO;
        for l in w.letters() {
            let x = self.images[l.gen];
            if l.inverse {
                prefix = prefix * x.inverse();
                acc = acc - prefix.ad().apply(u[l.gen]);
            } else {
                acc = acc + prefix.ad().apply(u[l.gen]);
                prefix = prefix * x;
            }
        }
        Ok(acc)
    }

    /// Fox Jacobian: block `(r, g)` is `sum_terms sign Ad(rho(prefix))` of
    /// `d r / d x_g`; shape `3 m x 3 n`. Its kernel is `Z^1`.
    pub fn fox_jacobian(&self) -> Matrix {
        let n = self.images.len();
        let relators = self.presentation.relators();
        let mut jac = Matrix::zeros(3 * relators.len(), 3 * n);
        for (r, word) in relators.iter().enumerate() {
            let mut prefix = Su2::IDENTITY;
            for l in word.letters() {
                let x = self.images[l.gen];
                let (sign, ad) = if l.inverse {
                    prefix = prefix * x.inverse();
                    (-1.0, prefix.ad())
                } else {
                    let ad = prefix.ad();
                    prefix = prefix * x;
                    (1.0, ad)
                };
                add_block(&mut jac, 3 * r, 3 * l.gen, &ad, sign);
            }
        }
        jac
    }

    /// Gauss–Newton projection onto nearby exact solutions of the relators.
    ///
    /// Each step solves `J u = -log rho(r)` in the least-squares, minimum-norm
    /// sense and moves `x_g -> exp(u_g) x_g`, halving the step while the
    /// residual does not decrease.
    pub fn polish(&self, tolerance: f64, max_iterations: usize) -> Result<Representation> {
        let mut rep = self.clone();
        for _ in 0..max_iterations {
            if rep.residual <= tolerance {
                return Ok(rep);
            }
            let mut f = Vec::with_capacity(3 * rep.presentation.relator_count());
            for r in rep.presentation.relators() {
                let v = rep.evaluate_unchecked(r).log().map_err(|_| Error::PolishFailed { residual: rep.residual })?;
                f.extend_from_slice(&v.0);
            }
            let jac = rep.fox_jacobian();
            let svd = jac.svd();
            let cutoff = svd.sigma.first().copied().unwrap_or(0.0) * 1e-12;
            let step = svd.pseudo_inverse(cutoff).mul_vec(&f);
            let mut scale = 1.0;
            let mut improved = false;
            for _ in 0..30 {
                let u: Vec<Alg> = step.chunks(3).map(|c| Alg::from_slice(c).scale(-scale)).collect();
                let trial = rep.flowed(&u, 1.0);
                if trial.residual < rep.residual {
                    rep = trial;
                    improved = true;
                    break;
                }
                scale *= 0.5;
            }
            if !improved {
                break;
            }
        }
        if rep.residual <= tolerance {
            Ok(rep)
        } else {
            Err(Error::PolishFailed { residual: rep.residual })
        }
    }
}

fn add_block(m: &mut Matrix, r0: usize, c0: usize, ad: &AdjointMatrix, sign: f64) {
    for i in 0..3 {
        for j in 0..3 {
            m[(r0 + i, c0 + j)] += sign * ad.0[i][j];
        }
    }
}
