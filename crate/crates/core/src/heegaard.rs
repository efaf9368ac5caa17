//! Heegaard splittings `N = H_1 ∪_Sigma H_2` given by group homomorphisms
//! `pi_1(Sigma_g) -> pi_1(H_i) = F_g -> pi_1(N)`, and the restriction maps of
//! the Mayer–Vietoris sequence in twisted cohomology.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::cohomology::{cohomology_with, Coefficients, CohomologySummary};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::presentation::{surface_relator, Presentation, Representation, Word};
use crate::su2::Alg;
use crate::symplectic::{gram_matrix, Cocycle};
use crate::torsion::MvData;

/// One handlebody: where the surface generators `a_1..a_g, b_1..b_g` go in
/// `F_g = <x_1..x_g>`, and where the `x_j` go in `pi_1(N)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Handle {
    pub surface_images: Vec<Word>,
    pub manifold_images: Vec<Word>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HeegaardData {
    genus: usize,
    manifold: Arc<Presentation>,
    handles: [Handle; 2],
}

/// `r` with `r q = 1 mod p`.
fn inverse_mod(q: i64, p: i64) -> Option<i64> {
    (0..p).find(|r| (r * q).rem_euclid(p) == 1 % p)
}

impl HeegaardData {
    pub fn new(genus: usize, manifold: Arc<Presentation>, handles: [Handle; 2]) -> Result<Self> {
        if genus == 0 {
            return Err(Error::InvalidHeegaard("genus must be positive".into()));
        }
        let relator = surface_relator(genus);
        for (i, h) in handles.iter().enumerate() {
            if h.surface_images.len() != 2 * genus || h.manifold_images.len() != genus {
                return Err(Error::InvalidHeegaard(format!(
                    "handle {} needs {} surface images and {} manifold images",
                    i + 1,
                    2 * genus,
                    genus
                )));
            }
            if h.surface_images.iter().any(|w| w.max_generator().is_some_and(|g| g >= genus)) {
                return Err(Error::InvalidHeegaard(format!("handle {} surface image uses a missing generator", i + 1)));
            }
            if h.manifold_images.iter().any(|w| w.max_generator().is_some_and(|g| g >= manifold.generator_count())) {
                return Err(Error::InvalidHeegaard(format!("handle {} manifold image uses a missing generator", i + 1)));
            }
            if !relator.substitute(&h.surface_images).reduced().is_empty() {
                return Err(Error::InvalidHeegaard(format!("handle {} does not kill the surface relator", i + 1)));
            }
        }
        Ok(HeegaardData { genus, manifold, handles })
    }

    /// Genus-1 splitting of `L(p, q)`: the second meridian is `p b + q a`.
    /// `L(1, 0)` is the 3-sphere and `L(0, 1)` is `S^1 x S^2`.
    pub fn lens(p: usize, q: i64) -> Result<Self> {
        let pi = p as i64;
        let r = match p {
            0 if q.abs() == 1 => q,
            0 => return Err(Error::InvalidHeegaard("L(0, q) needs q = ±1".into())),
            _ => inverse_mod(q, pi).ok_or_else(|| Error::InvalidHeegaard(format!("q = {q} is not a unit mod {p}")))?,
        };
        let manifold = if p == 0 { Presentation::free(1) } else { Presentation::cyclic(p) };
        let h1 = Handle {
            surface_images: alloc::vec![Word::generator(0), Word::empty()],
            manifold_images: alloc::vec![Word::generator(0)],
        };
        let h2 = Handle {
            surface_images: alloc::vec![Word::power(0, q), Word::power(0, -pi)],
            manifold_images: alloc::vec![Word::power(0, r)],
        };
        HeegaardData::new(1, Arc::new(manifold), [h1, h2])
    }

    pub fn sphere() -> Self {
        HeegaardData::lens(1, 0).expect("valid lens data")
    }

    pub fn s1_x_s2() -> Self {
        HeegaardData::lens(0, 1).expect("valid lens data")
    }

    /// Genus-3 splitting of the 3-torus, recorded through its action on
    /// homology: both handles kill the `b_j` and `x_j` goes to the `j`-th
    /// circle factor. Adequate for coefficients with trivial action.
    pub fn three_torus() -> Self {
        let manifold = Arc::new(Presentation::circle_times_surface(1));
        let mut surface_images: Vec<Word> = (0..3).map(Word::generator).collect();
        surface_images.extend(core::iter::repeat_n(Word::empty(), 3));
        let handle = Handle { surface_images, manifold_images: (0..3).map(Word::generator).collect() };
        HeegaardData::new(3, manifold, [handle.clone(), handle]).expect("valid torus data")
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn manifold(&self) -> &Arc<Presentation> {
        &self.manifold
    }

    pub fn handle(&self, i: usize) -> &Handle {
        &self.handles[i]
    }

    fn check_manifold(&self, rep: &Representation) -> Result<()> {
        if **rep.presentation() != *self.manifold {
            return Err(Error::InvalidHeegaard("representation is not of the splitting's manifold group".into()));
        }
        Ok(())
    }

    /// `rho ∘ psi_i` on `F_g`.
    pub fn handle_rep(&self, rep: &Representation, i: usize) -> Result<Representation> {
        self.check_manifold(rep)?;
        let images = self.handles[i].manifold_images.iter().map(|w| rep.evaluate(w)).collect::<Result<Vec<_>>>()?;
        Representation::new(Arc::new(Presentation::free(self.genus)), images)
    }

    /// `rho ∘ psi_i ∘ phi_i` on `pi_1(Sigma_g)`.
    pub fn surface_rep(&self, rep: &Representation, i: usize) -> Result<Representation> {
        let handle = self.handle_rep(rep, i)?;
        let images =
            self.handles[i].surface_images.iter().map(|w| handle.evaluate(w)).collect::<Result<Vec<_>>>()?;
        Representation::new(Arc::new(Presentation::surface(self.genus)), images)
    }

    /// Largest distance between the two induced surface representations.
    pub fn gluing_defect(&self, rep: &Representation) -> Result<f64> {
        let (s1, s2) = (self.surface_rep(rep, 0)?, self.surface_rep(rep, 1)?);
        Ok(s1.images().iter().zip(s2.images()).map(|(a, b)| a.distance(b)).fold(0.0, f64::max))
    }

    /// Restriction maps and the surface pairing in harmonic bases.
    pub fn mv_data(&self, rep: &Representation, coeffs: &Coefficients, tol: f64) -> Result<MvData> {
        let defect = self.gluing_defect(rep)?;
        if defect > tol {
            return Err(Error::InvalidHeegaard(format!("handles induce different surface representations ({defect:e})")));
        }
        let n = cohomology_with(rep, coeffs, tol)?;
        let surface = self.surface_rep(rep, 0)?;
        let sigma = cohomology_with(&surface, coeffs, tol)?;
        let mut r = Vec::new();
        let mut s = Vec::new();
        for i in 0..2 {
            let handle_rep = self.handle_rep(rep, i)?;
            let h = cohomology_with(&handle_rep, coeffs, tol)?;
            r.push(pullback(&n, rep, &self.handles[i].manifold_images, &h)?);
            s.push(pullback(&h, &handle_rep, &self.handles[i].surface_images, &sigma)?);
        }
        let basis: Vec<Cocycle> = (0..sigma.h1).map(|j| Cocycle::from_h1(&sigma, j)).collect();
        let gram = gram_matrix(&surface, &basis)?;
        let (r1, r2) = (r.remove(0), r.remove(0));
        let (s1, s2) = (s.remove(0), s.remove(0));
        Ok(MvData { r1, r2, s1, s2, gram })
    }
}

/// Matrix of `u -> u ∘ f` from `source` harmonic classes to `target` ones,
/// where `f` sends target generator `j` to `words[j]`.
fn pullback(source: &CohomologySummary, rep: &Representation, words: &[Word], target: &CohomologySummary) -> Result<Matrix> {
    let coeffs = &source.coefficients;
    let mut out = Matrix::zeros(target.h1, source.h1);
    for j in 0..source.h1 {
        let u = source.h1_vector(j);
        let pulled: Vec<Alg> = words.iter().map(|w| rep.cocycle_value(&u, w)).collect::<Result<_>>()?;
        let coords = target.h1_coordinates(&coeffs.project_cochain(&pulled));
        for (i, c) in coords.iter().enumerate() {
            out[(i, j)] = *c;
        }
    }
    Ok(out)
}

/// Names of the handle generators, `x1..xg`.
pub fn handle_generator_names(g: usize) -> Vec<String> {
    (1..=g).map(|i| format!("x{i}")).collect()
}
