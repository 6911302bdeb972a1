//! Re-verification of serialized certificates against a fresh profile.

use serde::de::DeserializeOwned;
use serde_json::Value;
use subadditive::invariants::{elasticity_report, UnionsProfile};
use subadditive::structure::{
    verify_growth, verify_key_periodicity, verify_period, verify_structure, GrowthCertificate, KeyPeriodicity,
    PeriodCertificate, StructureCertificate,
};

use crate::run::Envelope;
use crate::spec::AnalysisSpec;

fn decode<T: DeserializeOwned>(v: Value) -> Result<Envelope<T>, String> {
    serde_json::from_value(v).map_err(|e| format!("malformed certificate: {e}"))
}

/// Checks the certificate in `text` for the family of `spec`, recomputing
/// the profile at the certificate's horizon.
pub fn verify_certificate(text: &str, spec: &AnalysisSpec) -> Result<String, String> {
    let v: Value = serde_json::from_str(text).map_err(|e| format!("malformed JSON: {e}"))?;
    let kind = v["kind"].as_str().ok_or("certificate has no \"kind\"")?.to_string();
    let horizon = v["horizon"].as_u64().ok_or("certificate has no \"horizon\"")?;
    let sys = spec.system_at(horizon).map_err(|e| e.to_string())?;
    let members = sys.members_up_to(horizon).map_err(|e| e.to_string())?;
    let profile = UnionsProfile::from_members(&members, horizon, spec.i_max());
    match kind.as_str() {
        "structure" => verify_structure(&profile, &decode::<StructureCertificate>(v)?.certificate)?,
        "period" => verify_period(&profile, &decode::<PeriodCertificate>(v)?.certificate)?,
        "growth" => verify_growth(&profile, &decode::<GrowthCertificate>(v)?.certificate)?,
        "key_periodicity" => {
            let claimed = decode::<KeyPeriodicity>(v)?.certificate;
            let e = elasticity_report(&sys, &members);
            let found = verify_key_periodicity(&profile, &e, claimed.depth).map_err(|r| r.to_string())?;
            if found != claimed {
                return Err(format!("recomputed {found:?}, certificate claims {claimed:?}"));
            }
        }
        other => return Err(format!("unknown certificate kind {other:?}")),
    }
    Ok(format!("{kind} certificate verified at horizon {horizon}"))
}
