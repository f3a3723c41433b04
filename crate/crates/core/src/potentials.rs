//! Interatomic potentials described by the poles of their Fourier
//! transform.
//!
//! A transform with simple poles at `k² = −μ_s²` is
//! `ṽ(k²) = Σ_s 4πC_s/(k² + μ_s²)`, whose inverse transform is the Yukawa
//! superposition `v(r) = Σ_s C_s e^{−μ_s r}/r`. Every pole gives one
//! Klein-Gordon field channel with mass parameter `μ_s`.

use std::f64::consts::PI;

use crate::classical::{CouplingSign, FieldChannel};
use crate::error::{Error, Result};

/// One simple pole of `ṽ(k²)`: mass parameter `μ` and Yukawa strength `C`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoleTerm {
    pub mu: f64,
    pub strength: f64,
    pub multiplicity: u32,
}

impl PoleTerm {
    pub fn new(mu: f64, strength: f64) -> Result<Self> {
        Self::with_multiplicity(mu, strength, 1)
    }

    /// Only simple poles are supported; any other multiplicity is rejected.
    pub fn with_multiplicity(mu: f64, strength: f64, multiplicity: u32) -> Result<Self> {
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(Error::Config(format!(
                "pole parameter mu must be real and positive, got {mu}"
            )));
        }
        if !strength.is_finite() {
            return Err(Error::Config(format!(
                "pole strength must be finite, got {strength}"
            )));
        }
        if multiplicity != 1 {
            return Err(Error::Config(format!(
                "pole at mu = {mu} has multiplicity {multiplicity}; only simple poles are supported"
            )));
        }
        Ok(Self {
            mu,
            strength,
            multiplicity,
        })
    }
}

/// A potential as a finite sum of simple poles with distinct `μ`, kept in
/// ascending order of `μ`.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialModel {
    terms: Vec<PoleTerm>,
}

impl PotentialModel {
    /// Builds a model, merging terms that share the same `μ` by adding
    /// their strengths. Terms that cancel exactly are dropped.
    pub fn new(terms: impl IntoIterator<Item = PoleTerm>) -> Result<Self> {
        let mut terms: Vec<PoleTerm> = terms.into_iter().collect();
        terms.sort_by(|a, b| a.mu.total_cmp(&b.mu));
        let mut merged: Vec<PoleTerm> = Vec::with_capacity(terms.len());
        for t in terms {
            match merged.last_mut() {
                Some(last) if last.mu == t.mu => last.strength += t.strength,
                _ => merged.push(t),
            }
        }
        merged.retain(|t| t.strength != 0.0);
        if merged.is_empty() {
            return Err(Error::Config("potential has no nonzero pole terms".into()));
        }
        Ok(Self { terms: merged })
    }

    /// Convenience constructor from `(μ, C)` pairs.
    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        let terms = pairs
            .iter()
            .map(|&(mu, c)| PoleTerm::new(mu, c))
            .collect::<Result<Vec<_>>>()?;
        Self::new(terms)
    }

    pub fn terms(&self) -> &[PoleTerm] {
        &self.terms
    }
}

/// `v(r) = Σ C_s e^{−μ_s r}/r`.
pub fn v_real(model: &PotentialModel, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!("distance must be positive, got {r}")));
    }
    Ok(model
        .terms
        .iter()
        .map(|t| t.strength * (-t.mu * r).exp() / r)
        .sum())
}

/// `ṽ(k²) = Σ 4πC_s/(k² + μ_s²)`; finite for every `k² ≥ 0`.
pub fn v_fourier(model: &PotentialModel, k2: f64) -> f64 {
    model
        .terms
        .iter()
        .map(|t| 4.0 * PI * t.strength / (k2 + t.mu * t.mu))
        .sum()
}

/// Explicit `(γ, ϰ)` for the pole at `mu`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelOverride {
    pub mu: f64,
    pub gamma: f64,
    pub kappa: f64,
}

/// How the field normalization `ϰ_s` and coupling `γ_s` are assigned to
/// each pole. Only `γ²/ϰ` enters the thermodynamics.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum KappaPolicy {
    /// `ϰ = 1`, `γ = √(4π|C|)`.
    #[default]
    UnitKappa,
    /// A fixed `ϰ` for every pole, `γ = √(4πϰ|C|)`.
    UniformKappa(f64),
    /// Explicit pairs matched to poles by `μ`; poles without an entry fall
    /// back to `ϰ = 1`.
    Explicit(Vec<ChannelOverride>),
}

fn same_mu(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs())
}

/// One field channel per pole, sorted by ascending `μ`, with the sign of
/// each Yukawa term recorded on the channel.
pub fn extract_channels(model: &PotentialModel, policy: &KappaPolicy) -> Result<Vec<FieldChannel>> {
    let mut channels = Vec::with_capacity(model.terms.len());
    for term in &model.terms {
        let magnitude = term.strength.abs();
        let sign = CouplingSign::from_strength(term.strength);
        let (gamma, kappa) = match policy {
            KappaPolicy::UnitKappa => ((4.0 * PI * magnitude).sqrt(), 1.0),
            KappaPolicy::UniformKappa(kappa) => {
                if !(*kappa > 0.0) {
                    return Err(Error::Config(format!(
                        "kappa must be positive, got {kappa}"
                    )));
                }
                ((4.0 * PI * kappa * magnitude).sqrt(), *kappa)
            }
            KappaPolicy::Explicit(overrides) => {
                match overrides.iter().find(|o| same_mu(o.mu, term.mu)) {
                    Some(o) => {
                        if !(o.kappa > 0.0) {
                            return Err(Error::Config(format!(
                                "kappa for the pole at mu = {} must be positive, got {}",
                                o.mu, o.kappa
                            )));
                        }
                        (o.gamma, o.kappa)
                    }
                    None => ((4.0 * PI * magnitude).sqrt(), 1.0),
                }
            }
        };
        channels.push(FieldChannel::new(term.mu, kappa, gamma)?.with_sign(sign));
    }
    Ok(channels)
}

/// Static potential regenerated by a set of channels,
/// `Σ ±γ²/(4πϰ) e^{−μr}/r`.
pub fn static_potential(channels: &[FieldChannel], r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!("distance must be positive, got {r}")));
    }
    Ok(channels.iter().map(|ch| ch.static_potential(r)).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn real_space_values() {
        let single = PotentialModel::from_pairs(&[(1.0, 1.0)]).unwrap();
        assert!((v_real(&single, 1.0).unwrap() - 0.367_879_441_171_442_3).abs() < 1e-15);
        let pair = PotentialModel::from_pairs(&[(1.0, 1.0), (2.0, -1.0)]).unwrap();
        // e^{-1} - e^{-2}, frozen from a 30-digit evaluation
        assert!((v_real(&pair, 1.0).unwrap() - 0.232_544_157_934_829_63).abs() < 1e-15);
        assert!(v_real(&single, 0.0).is_err());
        assert!(v_real(&single, -1.0).is_err());
    }

    #[test]
    fn real_space_decays() {
        let single = PotentialModel::from_pairs(&[(0.7, -2.0)]).unwrap();
        let mut prev = f64::INFINITY;
        for r in [0.5, 1.0, 2.0, 5.0, 10.0, 50.0] {
            let v = v_real(&single, r).unwrap().abs();
            assert!(v < prev);
            prev = v;
        }
        assert!(prev < 1e-15);
    }

    #[test]
    fn fourier_values() {
        let single = PotentialModel::from_pairs(&[(1.0, 1.0)]).unwrap();
        assert!((v_fourier(&single, 0.0) - 4.0 * PI).abs() < 1e-14);
        assert!((v_fourier(&single, 3.0) - PI).abs() < 1e-15);
    }

    #[test]
    fn rejects_unsupported_poles() {
        assert!(PoleTerm::new(0.0, 1.0).is_err());
        assert!(PoleTerm::new(-1.0, 1.0).is_err());
        assert!(PoleTerm::with_multiplicity(1.0, 1.0, 2).is_err());
        assert!(PotentialModel::new(Vec::new()).is_err());
        assert!(PotentialModel::from_pairs(&[(1.0, 1.0), (1.0, -1.0)]).is_err());
    }

    #[test]
    fn equal_poles_coalesce() {
        let m = PotentialModel::from_pairs(&[(2.0, 1.0), (1.0, 0.5), (2.0, 0.25)]).unwrap();
        assert_eq!(m.terms().len(), 2);
        assert_eq!(m.terms()[1].strength, 1.25);
    }

    #[test]
    fn channels_follow_poles() {
        let m = PotentialModel::from_pairs(&[(2.0, 1.0), (1.0, -3.0)]).unwrap();
        let chs = extract_channels(&m, &KappaPolicy::default()).unwrap();
        let mus: Vec<f64> = chs.iter().map(|c| c.mu).collect();
        assert_eq!(mus, vec![1.0, 2.0]);
        assert_eq!(chs[0].sign, CouplingSign::Attractive);
        assert_eq!(chs[0].kappa, 1.0);
        assert!((chs[0].static_strength() - 3.0).abs() < 1e-14);
        assert!((chs[1].static_strength() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn explicit_and_uniform_policies() {
        let m = PotentialModel::from_pairs(&[(1.0, 1.0), (2.0, 2.0)]).unwrap();
        let policy = KappaPolicy::Explicit(vec![ChannelOverride {
            mu: 2.0,
            gamma: 3.0,
            kappa: 0.5,
        }]);
        let chs = extract_channels(&m, &policy).unwrap();
        assert_eq!((chs[1].gamma, chs[1].kappa), (3.0, 0.5));
        assert_eq!(chs[0].kappa, 1.0);

        let bad = KappaPolicy::Explicit(vec![ChannelOverride {
            mu: 1.0,
            gamma: 1.0,
            kappa: 0.0,
        }]);
        assert!(matches!(extract_channels(&m, &bad), Err(Error::Config(_))));
        assert!(extract_channels(&m, &KappaPolicy::UniformKappa(-1.0)).is_err());

        let uni = extract_channels(&m, &KappaPolicy::UniformKappa(2.5)).unwrap();
        assert!((uni[1].static_strength() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn fourier_has_no_real_singularities() {
        let m = PotentialModel::from_pairs(&[(0.3, 1.0), (1.0, -2.0), (4.0, 0.5)]).unwrap();
        let k2_max = 1e4 * 16.0;
        for i in 0..=1000 {
            let k2 = k2_max * (i as f64 / 1000.0).powi(3);
            assert!(v_fourier(&m, k2).is_finite());
        }
    }

    proptest! {
        #[test]
        fn static_round_trip(
            raw in prop::collection::vec((0.05f64..20.0, -5.0f64..5.0), 1..6),
        ) {
            let raw: Vec<(f64, f64)> = raw.into_iter().filter(|p| p.1.abs() > 1e-3).collect();
            prop_assume!(!raw.is_empty());
            let model = PotentialModel::from_pairs(&raw).unwrap();
            let chs = extract_channels(&model, &KappaPolicy::default()).unwrap();
            for i in 0..40 {
                let r = 1e-3 * 10f64.powf(i as f64 / 10.0);
                let direct = v_real(&model, r).unwrap();
                let rebuilt = static_potential(&chs, r).unwrap();
                let scale: f64 = model.terms().iter()
                    .map(|t| (t.strength * (-t.mu * r).exp() / r).abs())
                    .sum();
                prop_assert!((direct - rebuilt).abs() <= 1e-10 * scale);
            }
        }

        #[test]
        fn extraction_is_permutation_invariant(
            raw in prop::collection::vec((0.05f64..20.0, 0.1f64..5.0), 1..6),
            seed in 0usize..720,
        ) {
            let forward = PotentialModel::from_pairs(&raw).unwrap();
            let mut shuffled = raw.clone();
            let n = shuffled.len();
            let mut s = seed;
            for i in (1..n).rev() {
                shuffled.swap(i, s % (i + 1));
                s /= i + 1;
            }
            let back = PotentialModel::from_pairs(&shuffled).unwrap();
            let a = extract_channels(&forward, &KappaPolicy::default()).unwrap();
            let b = extract_channels(&back, &KappaPolicy::default()).unwrap();
            prop_assert_eq!(a, b);
        }
    }
}
