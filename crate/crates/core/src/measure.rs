//! Finitely supported probability measures on `[0, 1]`.

use crate::error::{Error, Result};
use crate::moments::MomentVector;
use crate::scalar::{scalar_from_json, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct Atom<S> {
    pub p: S,
    pub w: S,
}

/// Atoms sorted by strictly increasing location, weights summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct MixingMeasure<S> {
    atoms: Vec<Atom<S>>,
}

impl<S: Scalar> MixingMeasure<S> {
    /// Sorts atoms by location and merges repeated locations.
    ///
    /// Weights must sum to one exactly for rationals, within `1e-9` for floats.
    pub fn new(atoms: impl IntoIterator<Item = (S, S)>) -> Result<Self> {
        let mut raw: Vec<Atom<S>> = Vec::new();
        for (index, (p, w)) in atoms.into_iter().enumerate() {
            if p.is_negative() || p > S::one() {
                return Err(Error::OutOfRange(p.to_string()));
            }
            if w.is_negative() {
                return Err(Error::NegativeWeight { index, value: w.to_string() });
            }
            raw.push(Atom { p, w });
        }
        if raw.is_empty() {
            return Err(Error::NotNormalized { sum: "0".into() });
        }
        raw.sort_by(|a, b| a.p.partial_cmp(&b.p).expect("atom locations are finite"));
        let mut merged: Vec<Atom<S>> = Vec::with_capacity(raw.len());
        for atom in raw {
            match merged.last_mut() {
                Some(last) if last.p == atom.p => last.w = last.w.clone() + atom.w,
                _ => merged.push(atom),
            }
        }
        let sum: S = merged.iter().map(|a| a.w.clone()).sum();
        if (sum.clone() - S::one()).abs() > S::derived_tol() {
            return Err(Error::NotNormalized { sum: sum.to_string() });
        }
        Ok(Self { atoms: merged })
    }

    pub fn point_mass(p: S) -> Result<Self> {
        Self::new([(p, S::one())])
    }

    pub fn atoms(&self) -> &[Atom<S>] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Same measure with zero-weight atoms removed.
    pub fn without_null_atoms(mut self) -> Self {
        self.atoms.retain(|a| !a.w.is_zero());
        self
    }

    /// `m_k = sum_j w_j p_j^k` for `k = 1..=count`.
    pub fn moments(&self, count: usize) -> MomentVector<S> {
        let mut powers: Vec<S> = self.atoms.iter().map(|a| a.w.clone()).collect();
        let values = (0..count)
            .map(|_| {
                for (pw, atom) in powers.iter_mut().zip(&self.atoms) {
                    *pw = pw.clone() * atom.p.clone();
                }
                powers.iter().cloned().sum()
            })
            .collect();
        MomentVector::from_values(values)
    }

    /// `mu([0, x])`.
    pub fn cdf(&self, x: &S) -> S {
        self.atoms.iter().take_while(|a| a.p <= *x).map(|a| a.w.clone()).sum()
    }

    /// Mass within `radius` of `center`.
    pub fn mass_near(&self, center: &S, radius: &S) -> S {
        self.atoms.iter().filter(|a| (a.p.clone() - center.clone()).abs() <= *radius).map(|a| a.w.clone()).sum()
    }

    pub fn to_float(&self) -> MixingMeasure<f64> {
        MixingMeasure { atoms: self.atoms.iter().map(|a| Atom { p: a.p.to_f64(), w: a.w.to_f64() }).collect() }
    }

    pub fn convert<T: Scalar>(&self) -> Result<MixingMeasure<T>> {
        let conv = |x: &S| {
            x.to_rational().map(|r| T::from_rational(&r)).ok_or_else(|| Error::Parse(format!("non-finite value {x}")))
        };
        let atoms = self.atoms.iter().map(|a| Ok((conv(&a.p)?, conv(&a.w)?))).collect::<Result<Vec<_>>>()?;
        MixingMeasure::new(atoms)
    }

    /// `{"atoms": [{"p": .., "w": ..}, ...]}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "atoms": self
                .atoms
                .iter()
                .map(|a| serde_json::json!({"p": a.p.to_json(), "w": a.w.to_json()}))
                .collect::<Vec<_>>(),
        })
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let atoms = value
            .get("atoms")
            .and_then(serde_json::Value::as_array)
            .ok_or_else(|| Error::Parse("missing array field \"atoms\"".into()))?;
        let atoms = atoms
            .iter()
            .map(|a| {
                let field = |name: &str| {
                    a.get(name)
                        .ok_or_else(|| Error::Parse(format!("atom without \"{name}\"")))
                        .and_then(scalar_from_json::<S>)
                };
                Ok((field("p")?, field("w")?))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(atoms)
    }
}
