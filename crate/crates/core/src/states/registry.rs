//! Name-keyed registry of state families.
//!
//! Each family is a [`StateFamily`] trait object that declares the spec
//! fields it reads and builds a [`QuantumState`] from a validated
//! [`StateSpec`]. The `kind` field of a spec selects the family.

use std::collections::BTreeMap;
use std::fmt;

use super::spec::StateSpec;
use super::{
    approx_strong_field, cat, coherent, crescent, fock, photon_added, random_state,
    squeezed_coherent, strong_field_norm_inverse, RandomKind, Truncation, DEFAULT_MAX_CUTOFF,
};
use crate::error::{Error, Result};
use crate::fock::QuantumState;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Field {
    Alpha,
    M,
    N,
    R,
    PhiS,
    Gamma,
    Beta,
    Seed,
    Rank,
    Cutoff,
    Method,
    EpsTail,
}

impl Field {
    pub const ALL: [Field; 12] = [
        Field::Alpha,
        Field::M,
        Field::N,
        Field::R,
        Field::PhiS,
        Field::Gamma,
        Field::Beta,
        Field::Seed,
        Field::Rank,
        Field::Cutoff,
        Field::Method,
        Field::EpsTail,
    ];

    pub fn key(self) -> &'static str {
        match self {
            Field::Alpha => "alpha",
            Field::M => "M",
            Field::N => "n",
            Field::R => "r",
            Field::PhiS => "phi_s",
            Field::Gamma => "gamma",
            Field::Beta => "beta",
            Field::Seed => "seed",
            Field::Rank => "rank",
            Field::Cutoff => "cutoff",
            Field::Method => "method",
            Field::EpsTail => "eps_tail",
        }
    }

    fn is_set(self, spec: &StateSpec) -> bool {
        match self {
            Field::Alpha => spec.alpha.is_some(),
            Field::M => spec.m.is_some(),
            Field::N => spec.n.is_some(),
            Field::R => spec.r.is_some(),
            Field::PhiS => spec.phi_s.is_some(),
            Field::Gamma => spec.gamma.is_some(),
            Field::Beta => spec.beta.is_some(),
            Field::Seed => spec.seed.is_some(),
            Field::Rank => spec.rank.is_some(),
            Field::Cutoff => spec.cutoff.is_some(),
            Field::Method => spec.method.is_some(),
            Field::EpsTail => spec.eps_tail.is_some(),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

/// Environment shared by all builds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BuildContext {
    pub max_cutoff: usize,
}

impl Default for BuildContext {
    fn default() -> Self {
        BuildContext {
            max_cutoff: DEFAULT_MAX_CUTOFF,
        }
    }
}

impl BuildContext {
    fn truncation(&self, spec: &StateSpec) -> Result<Truncation> {
        let t = Truncation::default().with_max_cutoff(self.max_cutoff);
        match spec.eps_tail {
            Some(eps) => t.with_eps(eps),
            None => Ok(t),
        }
    }
}

/// A constructed state plus family-specific diagnostics.
#[derive(Clone, Debug)]
pub struct BuiltState {
    pub state: QuantumState,
    pub diagnostics: BTreeMap<String, f64>,
}

impl From<QuantumState> for BuiltState {
    fn from(state: QuantumState) -> Self {
        BuiltState {
            state,
            diagnostics: BTreeMap::new(),
        }
    }
}

pub trait StateFamily: Send + Sync {
    fn name(&self) -> &'static str;
    fn required(&self) -> &'static [Field];
    fn optional(&self) -> &'static [Field] {
        &[]
    }
    /// Called only after the field set has been validated.
    fn build(&self, spec: &StateSpec, ctx: &BuildContext) -> Result<BuiltState>;
}

pub struct StateRegistry {
    families: BTreeMap<&'static str, Box<dyn StateFamily>>,
}

impl Default for StateRegistry {
    fn default() -> Self {
        Self::with_builtin()
    }
}

impl StateRegistry {
    pub fn empty() -> Self {
        StateRegistry {
            families: BTreeMap::new(),
        }
    }

    pub fn with_builtin() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(Coherent));
        r.register(Box::new(Fock));
        r.register(Box::new(SqueezedCoherent));
        r.register(Box::new(Crescent));
        r.register(Box::new(PhotonAdded));
        r.register(Box::new(ApproxStrongField));
        r.register(Box::new(Cat));
        r.register(Box::new(RandomPure));
        r.register(Box::new(RandomMixed));
        r
    }

    /// Adds a family, replacing any previous one with the same name.
    pub fn register(&mut self, family: Box<dyn StateFamily>) {
        self.families.insert(family.name(), family);
    }

    pub fn get(&self, name: &str) -> Option<&dyn StateFamily> {
        self.families.get(name).map(|f| f.as_ref())
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.families.keys().copied()
    }

    pub fn validate(&self, spec: &StateSpec) -> Result<&dyn StateFamily> {
        let family = self.get(&spec.kind).ok_or_else(|| {
            let known: Vec<_> = self.names().collect();
            Error::Schema(format!(
                "unknown kind `{}` (expected one of: {})",
                spec.kind,
                known.join(", ")
            ))
        })?;
        for field in Field::ALL {
            let allowed = family.required().contains(&field) || family.optional().contains(&field);
            if field.is_set(spec) && !allowed {
                return Err(Error::Schema(format!(
                    "field `{field}` is not allowed for kind `{}`",
                    spec.kind
                )));
            }
        }
        if let Some(missing) = family.required().iter().find(|f| !f.is_set(spec)) {
            return Err(Error::Schema(format!(
                "field `{missing}` is required for kind `{}`",
                spec.kind
            )));
        }
        Ok(family)
    }

    pub fn build(&self, spec: &StateSpec, ctx: &BuildContext) -> Result<BuiltState> {
        self.validate(spec)?.build(spec, ctx)
    }
}

struct Coherent;
struct Fock;
struct SqueezedCoherent;
struct Crescent;
struct PhotonAdded;
struct ApproxStrongField;
struct Cat;
struct RandomPure;
struct RandomMixed;

impl StateFamily for Coherent {
    fn name(&self) -> &'static str {
        "coherent"
    }
    fn required(&self) -> &'static [Field] {
        &[Field::Alpha]
    }
    fn optional(&self) -> &'static [Field] {
        &[Field::EpsTail]
    }
    fn build(&self, spec: &StateSpec, ctx: &BuildContext) -> Result<BuiltState> {
        Ok(QuantumState::from(coherent(spec.alpha(), &ctx.truncation(spec)?)?).into())
    }
}

impl StateFamily for Fock {
    fn name(&self) -> &'static str {
        "fock"
    }
    fn required(&self) -> &'static [Field] {
        &[Field::N]
    }
    fn build(&self, spec: &StateSpec, ctx: &BuildContext) -> Result<BuiltState> {
        let n = spec.n.unwrap_or_default();
        if n > ctx.max_cutoff {
            return Err(Error::CutoffExplosion {
                max: ctx.max_cutoff,
            });
        }
        Ok(QuantumState::from(fock(n)).into())
    }
}

impl StateFamily for SqueezedCoherent {
    fn name(&self) -> &'static str {
        "squeezed_coherent"
    }
    fn required(&self) -> &'static [Field] {
        &[Field::Alpha, Field::R]
    }
    fn optional(&self) -> &'static [Field] {
        &[Field::PhiS, Field::EpsTail]
    }
    fn build(&self, spec: &StateSpec, ctx: &BuildContext) -> Result<BuiltState> {
        let v = squeezed_coherent(
            spec.alpha(),
            spec.r.unwrap_or_default(),
            spec.phi_s.unwrap_or_default(),
            &ctx.truncation(spec)?,
        )?;
        Ok(QuantumState::from(v).into())
    }
}

impl StateFamily for Crescent {
    fn name(&self) -> &'static str {
        "crescent"
    }
    fn required(&self) -> &'static [Field] {
        &[Field::Alpha, Field::M]
    }
    fn optional(&self) -> &'static [Field] {
        &[Field::Method, Field::EpsTail]
    }
    fn build(&self, spec: &StateSpec, ctx: &BuildContext) -> Result<BuiltState> {
        let v = crescent(
            spec.alpha(),
            spec.m.unwrap_or_default(),
            spec.method.unwrap_or_default(),
            &ctx.truncation(spec)?,
        )?;
        Ok(QuantumState::from(v).into())
    }
}

impl StateFamily for PhotonAdded {
    fn name(&self) -> &'static str {
        "photon_added"
    }
    fn required(&self) -> &'static [Field] {
        &[Field::Alpha, Field::M]
    }
    fn optional(&self) -> &'static [Field] {
        &[Field::EpsTail]
    }
    fn build(&self, spec: &StateSpec, ctx: &BuildContext) -> Result<BuiltState> {
        let v = photon_added(spec.alpha(), spec.m.unwrap_or_default(), &ctx.truncation(spec)?)?;
        Ok(QuantumState::from(v).into())
    }
}

impl StateFamily for ApproxStrongField {
    fn name(&self) -> &'static str {
        "approx_strong_field"
    }
    fn required(&self) -> &'static [Field] {
        &[Field::Alpha, Field::Gamma]
    }
    fn optional(&self) -> &'static [Field] {
        &[Field::EpsTail]
    }
    fn build(&self, spec: &StateSpec, ctx: &BuildContext) -> Result<BuiltState> {
        let (alpha, gamma) = (spec.alpha(), spec.gamma());
        let v = approx_strong_field(alpha, gamma, &ctx.truncation(spec)?)?;
        let mut built = BuiltState::from(QuantumState::from(v));
        built.diagnostics.insert(
            "analytic_norm_inverse".into(),
            strong_field_norm_inverse(alpha, gamma),
        );
        Ok(built)
    }
}

impl StateFamily for Cat {
    fn name(&self) -> &'static str {
        "cat"
    }
    fn required(&self) -> &'static [Field] {
        &[Field::Alpha]
    }
    fn optional(&self) -> &'static [Field] {
        &[Field::Beta, Field::EpsTail]
    }
    fn build(&self, spec: &StateSpec, ctx: &BuildContext) -> Result<BuiltState> {
        let v = cat(spec.alpha(), spec.beta.unwrap_or_default(), &ctx.truncation(spec)?)?;
        Ok(QuantumState::from(v).into())
    }
}

impl StateFamily for RandomPure {
    fn name(&self) -> &'static str {
        "random_pure"
    }
    fn required(&self) -> &'static [Field] {
        &[Field::Cutoff, Field::Seed]
    }
    fn build(&self, spec: &StateSpec, _ctx: &BuildContext) -> Result<BuiltState> {
        let s = random_state(
            spec.cutoff.unwrap_or_default(),
            RandomKind::Pure,
            1,
            spec.seed.unwrap_or_default(),
        )?;
        Ok(s.into())
    }
}

impl StateFamily for RandomMixed {
    fn name(&self) -> &'static str {
        "random_mixed"
    }
    fn required(&self) -> &'static [Field] {
        &[Field::Cutoff, Field::Seed, Field::Rank]
    }
    fn build(&self, spec: &StateSpec, _ctx: &BuildContext) -> Result<BuiltState> {
        let s = random_state(
            spec.cutoff.unwrap_or_default(),
            RandomKind::Mixed,
            spec.rank.unwrap_or_default(),
            spec.seed.unwrap_or_default(),
        )?;
        Ok(s.into())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn build(json: &str) -> Result<BuiltState> {
        let spec = StateSpec::parse(json)?;
        StateRegistry::with_builtin().build(&spec, &BuildContext::default())
    }

    #[test]
    fn builds_every_builtin_kind() {
        let specs = [
            r#"{"kind":"coherent","alpha":{"re":1,"im":0}}"#,
            r#"{"kind":"fock","n":2}"#,
            r#"{"kind":"squeezed_coherent","alpha":{"re":0,"im":0},"r":0.5,"phi_s":0}"#,
            r#"{"kind":"crescent","alpha":{"re":1,"im":0},"M":2,"method":"laguerre"}"#,
            r#"{"kind":"photon_added","alpha":{"re":0.5,"im":0},"M":1}"#,
            r#"{"kind":"approx_strong_field","alpha":{"re":3,"im":0},"gamma":{"re":0.3,"im":0}}"#,
            r#"{"kind":"cat","alpha":{"re":1,"im":0},"beta":3.141592653589793}"#,
            r#"{"kind":"random_pure","cutoff":8,"seed":3}"#,
            r#"{"kind":"random_mixed","cutoff":8,"seed":3,"rank":2}"#,
        ];
        for s in specs {
            build(s).unwrap_or_else(|e| panic!("{s}: {e}"));
        }
        assert_eq!(StateRegistry::with_builtin().names().count(), 9);
    }

    #[test]
    fn rejects_irrelevant_fields() {
        let err = build(r#"{"kind":"fock","n":2,"r":0.1}"#).unwrap_err();
        assert!(err.to_string().contains("`r` is not allowed"), "{err}");
    }

    #[test]
    fn rejects_unknown_fields_and_kinds() {
        assert!(matches!(
            build(r#"{"kind":"fock","n":2,"bogus":1}"#),
            Err(Error::Schema(_))
        ));
        let err = build(r#"{"kind":"thermal"}"#).unwrap_err();
        assert!(err.to_string().contains("unknown kind"));
    }

    #[test]
    fn reports_missing_fields() {
        let err = build(r#"{"kind":"crescent","alpha":{"re":1,"im":0}}"#).unwrap_err();
        assert!(err.to_string().contains("`M` is required"), "{err}");
    }

    #[test]
    fn schema_errors_carry_position() {
        let err = StateSpec::parse("{\"kind\": \"fock\",\n \"n\": -1}").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }

    #[test]
    fn strong_field_diagnostic() {
        let b = build(r#"{"kind":"approx_strong_field","alpha":{"re":2,"im":0},"gamma":{"re":0.5,"im":0}}"#)
            .unwrap();
        // 1 + 2·0.5·2 + 0.25·5
        assert!((b.diagnostics["analytic_norm_inverse"] - 4.25).abs() < 1e-15);
    }

    #[test]
    fn custom_family_can_be_registered() {
        struct TwoPhotons;
        impl StateFamily for TwoPhotons {
            fn name(&self) -> &'static str {
                "two_photons"
            }
            fn required(&self) -> &'static [Field] {
                &[]
            }
            fn build(&self, _: &StateSpec, _: &BuildContext) -> Result<BuiltState> {
                Ok(QuantumState::from(fock(2)).into())
            }
        }
        let mut r = StateRegistry::with_builtin();
        r.register(Box::new(TwoPhotons));
        let b = r.build(&StateSpec::new("two_photons"), &BuildContext::default()).unwrap();
        assert_eq!(b.state.cutoff(), 2);
    }
}
